//! Plain-text storage of built presentations.
//!
//! ```text
//! p k alpha_1 ... alpha_r
//! index name modulus                  one line per generator, 1-based
//! i^N = index:exponent ...            power relations
//! j i = index:exponent ...            normal form of g_j g_i, j > i
//! ```
//!
//! Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::pc::PcCollector;
use super::spec::GroupSpec;
use super::GroupError;

pub fn cache_path(dir: &Path, spec: &GroupSpec) -> PathBuf {
    let a: Vec<String> = spec.alphas.iter().map(|a| a.to_string()).collect();
    dir.join(format!("p{}_k{}_a{}.txt", spec.p, spec.k, a.join("-")))
}

fn vector(v: &[u64]) -> String {
    v.iter()
        .enumerate()
        .filter(|(_, &e)| e != 0)
        .map(|(i, e)| format!(" {}:{}", i + 1, e))
        .collect()
}

pub fn serialize(spec: &GroupSpec, c: &PcCollector) -> String {
    let mut out = String::new();
    let a: Vec<String> = spec.alphas.iter().map(|a| a.to_string()).collect();
    writeln!(out, "{} {} {}", spec.p, spec.k, a.join(" ")).unwrap();
    for (i, (name, d)) in c.names().iter().zip(c.relative_orders()).enumerate() {
        writeln!(out, "{} {} {}", i + 1, name, d).unwrap();
    }
    for (i, d) in c.relative_orders().iter().enumerate() {
        writeln!(out, "{}^{} ={}", i + 1, d, vector(c.power_relation(i))).unwrap();
    }
    for j in 0..c.len() {
        for i in 0..j {
            writeln!(out, "{} {} ={}", j + 1, i + 1, vector(&c.swap(j, i))).unwrap();
        }
    }
    out
}

fn bad(line: usize, msg: impl Into<String>) -> GroupError {
    GroupError::Cache(format!("line {line}: {}", msg.into()))
}

fn parse_index(tok: &str, n: usize, line: usize) -> Result<usize, GroupError> {
    match tok.parse::<usize>() {
        Ok(i) if (1..=n).contains(&i) => Ok(i - 1),
        _ => Err(bad(line, format!("bad generator index {tok:?}"))),
    }
}

fn parse_vector(text: &str, orders: &[u64], line: usize) -> Result<Vec<u64>, GroupError> {
    let mut v = vec![0; orders.len()];
    for tok in text.split_whitespace() {
        let (i, e) = tok.split_once(':').ok_or_else(|| bad(line, format!("expected index:exponent, got {tok:?}")))?;
        let i = parse_index(i, orders.len(), line)?;
        let e: u64 = e.parse().map_err(|_| bad(line, format!("bad exponent {e:?}")))?;
        if e >= orders[i] {
            return Err(bad(line, format!("exponent {e} of generator {} is not below {}", i + 1, orders[i])));
        }
        v[i] = e;
    }
    Ok(v)
}

/// Parses cache text back into the spec and the internal presentation.
pub fn parse(text: &str) -> Result<(GroupSpec, PcCollector), GroupError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(n, l)| (n + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (ln, header) = lines.next().ok_or_else(|| GroupError::Cache("empty file".into()))?;
    let nums: Vec<u64> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| bad(ln, format!("bad header token {t:?}"))))
        .collect::<Result<_, _>>()?;
    if nums.len() < 3 {
        return Err(bad(ln, "header needs p, k and at least one exponent"));
    }
    let alphas = nums[2..].iter().map(|&a| u32::try_from(a).map_err(|_| GroupError::Overflow)).collect::<Result<_, _>>()?;
    let spec = GroupSpec::new(nums[0], nums[1] as usize, alphas)?;

    let mut names = Vec::new();
    let mut orders = Vec::new();
    let mut relations = Vec::new();
    for (ln, l) in lines {
        if let Some((lhs, rhs)) = l.split_once('=') {
            relations.push((ln, lhs.trim().to_string(), rhs.to_string()));
            continue;
        }
        if !relations.is_empty() {
            return Err(bad(ln, "generator line after relations"));
        }
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 3 || toks[0].parse::<usize>().ok() != Some(names.len() + 1) {
            return Err(bad(ln, "expected 'index name modulus'"));
        }
        let d: u64 = toks[2].parse().map_err(|_| bad(ln, "bad modulus"))?;
        if d < 2 {
            return Err(bad(ln, "modulus must be at least 2"));
        }
        names.push(toks[1].to_string());
        orders.push(d);
    }
    let n = names.len();
    let mut powers: Vec<Option<Vec<u64>>> = vec![None; n];
    let mut conj: Vec<Vec<Option<Vec<u64>>>> = (0..n).map(|i| vec![None; i]).collect();
    let mut seen_swap = vec![vec![false; n]; n];
    for (ln, lhs, rhs) in relations {
        let v = parse_vector(&rhs, &orders, ln)?;
        if let Some((i, d)) = lhs.split_once('^') {
            let i = parse_index(i.trim(), n, ln)?;
            if d.trim().parse::<u64>().ok() != Some(orders[i]) {
                return Err(bad(ln, "power relation exponent differs from the modulus"));
            }
            if v[..=i].iter().any(|&e| e != 0) {
                return Err(bad(ln, "power relation must involve later generators only"));
            }
            powers[i] = Some(v);
        } else {
            let toks: Vec<&str> = lhs.split_whitespace().collect();
            if toks.len() != 2 {
                return Err(bad(ln, "expected 'j i = vector'"));
            }
            let (j, i) = (parse_index(toks[0], n, ln)?, parse_index(toks[1], n, ln)?);
            if j <= i {
                return Err(bad(ln, "swap relation needs j > i"));
            }
            if v[..i].iter().any(|&e| e != 0) || v[i] != 1 {
                return Err(bad(ln, "swap relation must start with the smaller generator"));
            }
            let mut c = v;
            c[i] = 0;
            if c[j] == 0 || c[..j].iter().any(|&e| e != 0) {
                return Err(bad(ln, "conjugate must start with the larger generator"));
            }
            conj[j][i] = Some(c);
            seen_swap[j][i] = true;
        }
    }
    let powers = powers
        .into_iter()
        .enumerate()
        .map(|(i, p)| p.ok_or_else(|| GroupError::Cache(format!("missing power relation for generator {}", i + 1))))
        .collect::<Result<Vec<_>, _>>()?;
    for j in 0..n {
        for i in 0..j {
            if !seen_swap[j][i] {
                return Err(GroupError::Cache(format!("missing swap relation {} {}", j + 1, i + 1)));
            }
        }
    }
    let unit = |i: usize| {
        let mut v = vec![0; n];
        v[i] = 1;
        v
    };
    let generators = (1..=spec.r())
        .map(|g| {
            let name = format!("x{g}");
            names
                .iter()
                .position(|s| *s == name)
                .map(unit)
                .ok_or_else(|| GroupError::Cache(format!("generator {name} missing")))
        })
        .collect::<Result<_, _>>()?;
    Ok((spec, PcCollector::new(names, orders, powers, conj, generators)))
}
