//! Command-line interface.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::analysis::{self, AnalysisError};
use crate::collect::{CollectError, FreeNilpotentGroup};
use crate::hall::{self, BasicCommutator, HallError};
use crate::nilprod::{build_group_cached, GroupError, GroupSpec, Level, PcPresentation};
use crate::oracle::table::full_table_check;
use crate::term::{parse_expr, ParseError};

#[derive(Debug, Parser)]
#[command(name = "nilcap", version, about = "Basic commutators, collection, and nilpotent products of cyclic p-groups")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Do not read or write the presentation cache.
    #[arg(long, global = true)]
    no_cache: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct ProductArgs {
    /// The prime.
    #[arg(short)]
    p: u64,
    /// Nilpotency class (defaults to p).
    #[arg(short)]
    k: Option<usize>,
    /// Comma-separated exponents alpha_1 <= ... <= alpha_r of the factor orders p^alpha_i.
    #[arg(long, value_delimiter = ',', required = true)]
    orders: Vec<u32>,
}

impl ProductArgs {
    fn spec(&self) -> Result<GroupSpec, GroupError> {
        GroupSpec::new(self.p, self.k.unwrap_or(self.p as usize), self.orders.clone())
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the Hall basis of weight at most k on r generators.
    Basis {
        #[arg(short)]
        r: usize,
        #[arg(short)]
        k: usize,
    },
    /// The basic commutator [u <- v] for basic u > v.
    Shove {
        #[arg(short)]
        r: usize,
        u: String,
        v: String,
    },
    /// Collect a word in the free nilpotent group of class k.
    Collect {
        #[arg(short)]
        r: usize,
        #[arg(short)]
        k: usize,
        word: String,
    },
    /// Normal form of a word in a nilpotent product.
    Nf {
        #[command(flatten)]
        group: ProductArgs,
        word: String,
    },
    /// Order of a word, or of the group when no word is given.
    Order {
        #[command(flatten)]
        group: ProductArgs,
        word: Option<String>,
    },
    /// Center by formula, optionally checked by brute force.
    Center {
        #[command(flatten)]
        group: ProductArgs,
        #[arg(long)]
        brute: bool,
    },
    /// Decide capability of a nilpotent product.
    Capable {
        #[command(flatten)]
        group: ProductArgs,
    },
    /// Build and check the group K with K/Z(K) the p-nilpotent product.
    Witness {
        #[arg(short)]
        p: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        orders: Vec<u32>,
    },
    /// Check the consistency of a presentation.
    Verify {
        #[command(flatten)]
        group: ProductArgs,
        #[arg(long, default_value = "sampled")]
        level: Level,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Hall(#[from] HallError),
    #[error(transparent)]
    Collect(#[from] CollectError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

/// Output of a command: JSON value plus its text rendering.
struct Output {
    json: Value,
    text: Vec<String>,
    ok: bool,
}

impl Output {
    fn new(json: Value, text: Vec<String>) -> Self {
        Output { json, text, ok: true }
    }
}

fn cache_dir(no_cache: bool) -> Option<PathBuf> {
    if no_cache {
        return None;
    }
    Some(std::env::var_os("NILCAP_CACHE_DIR").map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("nilcap-cache")))
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    match execute(&cli) {
        Ok(o) => {
            let written = if cli.json {
                writeln!(out, "{}", serde_json::to_string_pretty(&o.json).expect("serializable"))
            } else {
                o.text.iter().try_for_each(|l| writeln!(out, "{l}"))
            };
            if written.is_err() {
                return 1;
            }
            i32::from(!o.ok)
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn load(args: &ProductArgs, no_cache: bool) -> Result<PcPresentation, CliError> {
    Ok(build_group_cached(&args.spec()?, cache_dir(no_cache).as_deref())?)
}

fn basic(text: &str, r: usize) -> Result<BasicCommutator, CliError> {
    Ok(BasicCommutator::from_expr(&parse_expr(text, r)?)?)
}

fn execute(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Basis { r, k } => {
            let b = hall::generate_basis(*r, *k)?;
            let names: Vec<String> = b.entries().iter().map(|c| c.to_string()).collect();
            let entries: Vec<Value> =
                b.entries().iter().map(|c| json!({"name": c.to_string(), "weight": c.weight()})).collect();
            Ok(Output::new(json!({"r": r, "k": k, "basis": entries}), names))
        }
        Command::Shove { r, u, v } => {
            let (bu, bv) = (basic(u, *r)?, basic(v, *r)?);
            let s = hall::shove(&bu, &bv)?;
            Ok(Output::new(
                json!({"u": bu.to_string(), "v": bv.to_string(), "shove": s.to_string(), "weight": s.weight()}),
                vec![s.to_string()],
            ))
        }
        Command::Collect { r, k, word } => {
            let fg = FreeNilpotentGroup::new(*r, *k)?;
            let g = fg.parse(word)?;
            let exps: Vec<Value> =
                g.to_named_map().into_iter().map(|(n, e)| json!({"name": n, "exponent": e.to_string()})).collect();
            Ok(Output::new(json!({"r": r, "k": k, "word": word, "normal_form": g.to_string(), "exponents": exps}), vec![g.to_string()]))
        }
        Command::Nf { group, word } => {
            let g = load(group, cli.no_cache)?;
            let a = g.parse(word)?;
            let text = g.format_element(&a);
            Ok(Output::new(json!({"spec": g.spec(), "word": word, "normal_form": text, "vector": a.0}), vec![text]))
        }
        Command::Order { group, word } => {
            let g = load(group, cli.no_cache)?;
            match word {
                Some(w) => {
                    let a = g.parse(w)?;
                    let n = g.order_of(&a)?;
                    Ok(Output::new(json!({"spec": g.spec(), "word": w, "order": n.to_string()}), vec![n.to_string()]))
                }
                None => {
                    let n = g.order();
                    Ok(Output::new(json!({"spec": g.spec(), "order": n.to_string()}), vec![n.to_string()]))
                }
            }
        }
        Command::Center { group, brute } => {
            let g = load(group, cli.no_cache)?;
            let rep = analysis::center_report(&g, *brute)?;
            let mut text = vec![format!("formula: Z(G) = {}", rep.formula)];
            text.push(format!("generators: {}", rep.formula_generators.join(", ")));
            if let (Some(z), Some(m)) = (&rep.brute_force, rep.matches) {
                text.push(format!("brute force: {} central elements", z.len()));
                text.extend(z.iter().map(|e| format!("  {e}")));
                text.push(format!("agree: {m}"));
            }
            let ok = rep.matches != Some(false);
            Ok(Output { json: serde_json::to_value(&rep).expect("serializable"), text, ok })
        }
        Command::Capable { group } => {
            // no group is built, so any class is accepted
            let mut spec = GroupSpec::new(group.p, 1, group.orders.clone())?;
            spec.k = group.k.unwrap_or(group.p as usize);
            if spec.k == 0 {
                return Err(GroupError::InvalidSpec("class must be at least 1".into()).into());
            }
            let (verdict, rule) = if spec.k as u64 == spec.p {
                let v = analysis::capability_decide(spec.p, &spec.alphas);
                (v.to_string(), "r > 1 and alpha_r <= alpha_{r-1} + 1 (class p)")
            } else if analysis::capability_necessary(spec.p, spec.k, &spec.alphas) {
                ("undetermined".to_string(), "necessary condition r > 1 and alpha_r <= alpha_{r-1} + floor((k-1)/(p-1)) holds")
            } else {
                ("false".to_string(), "necessary condition r > 1 and alpha_r <= alpha_{r-1} + floor((k-1)/(p-1)) fails")
            };
            Ok(Output::new(
                json!({"spec": spec, "capable": verdict, "rule": rule}),
                vec![format!("capable: {verdict}"), format!("rule: {rule}")],
            ))
        }
        Command::Witness { p, orders } => {
            let rep = analysis::capability_witness(*p, orders)?;
            let text = vec![
                format!("|K| = {}", rep.k_order),
                format!("|Z(K)| = {}", rep.center_order),
                format!("|K_{}| = {}", p + 1, rep.layer_order),
                format!("|K/Z(K)| = {}, |G| = {}", rep.quotient_order, rep.group_order),
                format!("verified: {}", rep.verified),
            ];
            Ok(Output { json: serde_json::to_value(&rep).expect("serializable"), text, ok: rep.verified })
        }
        Command::Verify { group, level } => {
            let g = load(group, cli.no_cache)?;
            let rep = g.verify_consistency(*level)?;
            let table = if *level == Level::Full { Some(full_table_check(&g)?) } else { None };
            let mut text = vec![format!("order: {}", rep.order), format!("consistency ({}): {}", rep.level, rep.passed)];
            if let Some(w) = &rep.witness {
                text.push(format!("witness: {w}"));
            }
            if let Some(t) = &table {
                text.push(format!("table check: {} ({} triples)", t.passed, t.triples));
                if let Some(w) = &t.witness {
                    text.push(format!("witness: {w}"));
                }
            }
            let ok = rep.passed && table.as_ref().is_none_or(|t| t.passed);
            Ok(Output { json: json!({"consistency": rep, "table": table, "passed": ok}), text, ok })
        }
    }
}
