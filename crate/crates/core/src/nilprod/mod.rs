//! Nilpotent products of cyclic `p`-groups of class `k <= p + 1`.
//!
//! The group is built as the quotient of the free nilpotent group of class `k`
//! by the normal closure of `x_i^{p^alpha_i}`, which yields a consistent
//! power-conjugate presentation. Elements are reported in coordinates over the
//! distinguished basis, where each `beta_i` ranges over `[0, N_i)`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::binomial;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::collect::{CollectError, FreeNilpotentGroup};
use crate::hall::{BasisTable, HallError};
use crate::term::{parse_expr, Group, ParseError, WordExpr};

pub mod cache;
mod kernel;
pub mod pc;
pub mod spec;

pub use pc::{ConsistencyWitness, PcCollector};
pub use spec::{is_prime, modulus_table, Distinguished, DistinguishedBasis, GroupSpec};

/// Default bound on the number of elements any exhaustive pass may visit.
pub const DEFAULT_MAX_ENUM: u64 = 1 << 20;

/// Samples used by sampled consistency checking.
const SAMPLE_TRIPLES: usize = 256;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("invalid group parameters: {0}")]
    InvalidSpec(String),
    #[error("class {k} exceeds p + 1 = {}", p + 1)]
    ClassTooLarge { k: usize, p: u64 },
    #[error("arithmetic overflow")]
    Overflow,
    #[error("the relators do not define a finite quotient")]
    Infinite,
    #[error("inconsistent presentation: {0}")]
    Inconsistent(String),
    #[error("{size} elements exceed the enumeration cap {cap}")]
    CapExceeded { size: BigInt, cap: u64 },
    #[error("normal form is not unique: {0}")]
    NotUnique(String),
    #[error("element out of range: {0}")]
    OutOfRange(String),
    #[error("presentations differ")]
    PresentationMismatch,
    #[error("cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Collect(#[from] CollectError),
    #[error(transparent)]
    Hall(#[from] HallError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// `NILCAP_MAX_ENUM` if set and valid, else [`DEFAULT_MAX_ENUM`].
pub fn max_enum() -> u64 {
    std::env::var("NILCAP_MAX_ENUM").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_MAX_ENUM)
}

/// `C(p^alpha, p) mod p^alpha`.
pub fn binom_reduction(alpha: u32, p: u64) -> BigInt {
    let m = BigInt::from(p).pow(alpha);
    binomial(m.clone(), BigInt::from(p)) % m
}

/// Exponent vector over the distinguished basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PcElement(pub Vec<u64>);

impl PcElement {
    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Sampled,
    Full,
}

impl FromStr for Level {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "sampled" => Ok(Level::Sampled),
            "full" => Ok(Level::Full),
            _ => Err(format!("unknown level {s:?} (expected sampled or full)")),
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Sampled => "sampled",
            Level::Full => "full",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConsistencyReport {
    pub level: Level,
    pub order: String,
    pub checks: usize,
    pub enumerated: Option<u64>,
    pub passed: bool,
    pub witness: Option<String>,
}

type Lookup = HashMap<Vec<u64>, Vec<u64>>;

pub struct PcPresentation {
    spec: GroupSpec,
    basis: DistinguishedBasis,
    hall: Arc<BasisTable>,
    collector: PcCollector,
    values: Vec<Vec<u64>>,
    aligned: Option<Vec<Option<usize>>>,
    /// Internal normal form to distinguished coordinates, when not aligned.
    lookup: OnceLock<Result<Arc<Lookup>, String>>,
}

impl fmt::Debug for PcPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PcPresentation").field("spec", &self.spec).field("order", &self.order()).finish()
    }
}

/// Builds the `k`-nilpotent product described by `spec`.
pub fn build_group(spec: &GroupSpec) -> Result<PcPresentation, GroupError> {
    spec.validate()?;
    let fg = FreeNilpotentGroup::new(spec.r(), spec.k)?;
    let relators: Vec<_> = (1..=spec.r())
        .map(|i| Ok(fg.power(&fg.generator(i), &BigInt::from(spec.p_pow(spec.alpha(i))?))))
        .collect::<Result<_, GroupError>>()?;
    let k = kernel::Kernel::closure(&fg, &relators);
    let collector = k.presentation()?;
    PcPresentation::from_collector(spec.clone(), collector)
}

/// Loads from the cache directory when possible, otherwise builds and stores.
pub fn build_group_cached(spec: &GroupSpec, dir: Option<&std::path::Path>) -> Result<PcPresentation, GroupError> {
    let Some(dir) = dir else { return build_group(spec) };
    let path = cache::cache_path(dir, spec);
    if let Ok(text) = std::fs::read_to_string(&path) {
        if let Ok((s, c)) = cache::parse(&text) {
            if &s == spec {
                if let Ok(g) = PcPresentation::from_collector(s, c) {
                    return Ok(g);
                }
            }
        }
    }
    let g = build_group(spec)?;
    std::fs::create_dir_all(dir)?;
    std::fs::write(&path, cache::serialize(&g.spec, &g.collector))?;
    Ok(g)
}

impl PcPresentation {
    /// Wraps an internal presentation; checks that its order matches the moduli.
    pub fn from_collector(spec: GroupSpec, collector: PcCollector) -> Result<Self, GroupError> {
        spec.validate()?;
        let hall = Arc::new(BasisTable::generate(spec.r(), spec.k)?);
        let basis = spec::distinguished_basis(&spec, &hall)?;
        if collector.generator_images().len() != spec.r() {
            return Err(GroupError::PresentationMismatch);
        }
        let values: Vec<Vec<u64>> = basis
            .entries
            .iter()
            .map(|d| d.expr(spec.p).eval(&collector))
            .collect();
        let expected: BigInt = basis.moduli.iter().map(|&n| BigInt::from(n)).product();
        if expected != collector.order() {
            return Err(GroupError::Inconsistent(format!(
                "product of moduli {expected} differs from the group order {}",
                collector.order()
            )));
        }
        let aligned = Self::alignment(&basis, &collector, &values);
        Ok(PcPresentation { spec, basis, hall, collector, values, aligned, lookup: OnceLock::new() })
    }

    fn alignment(basis: &DistinguishedBasis, c: &PcCollector, values: &[Vec<u64>]) -> Option<Vec<Option<usize>>> {
        let mut map = Vec::with_capacity(values.len());
        let mut next = 0;
        for (v, &n) in values.iter().zip(&basis.moduli) {
            if n == 1 {
                if v.iter().any(|&e| e != 0) {
                    return None;
                }
                map.push(None);
                continue;
            }
            if next >= c.len() || *v != c.unit(next, 1) || c.relative_orders()[next] != n {
                return None;
            }
            map.push(Some(next));
            next += 1;
        }
        (next == c.len()).then_some(map)
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn basis(&self) -> &DistinguishedBasis {
        &self.basis
    }

    pub fn hall_basis(&self) -> &Arc<BasisTable> {
        &self.hall
    }

    pub fn collector(&self) -> &PcCollector {
        &self.collector
    }

    pub fn order(&self) -> BigInt {
        self.collector.order()
    }

    /// Whether distinguished coordinates coincide with the internal generators.
    pub fn is_aligned(&self) -> bool {
        self.aligned.is_some()
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn identity(&self) -> PcElement {
        PcElement(vec![0; self.len()])
    }

    fn check(&self, a: &PcElement) -> Result<(), GroupError> {
        if a.0.len() != self.len() || a.0.iter().zip(&self.basis.moduli).any(|(e, n)| e >= n) {
            return Err(GroupError::OutOfRange(format!("{:?}", a.0)));
        }
        Ok(())
    }

    /// Evaluates `prod c_i^{beta_i}` internally.
    pub fn to_internal(&self, a: &PcElement) -> Result<Vec<u64>, GroupError> {
        self.check(a)?;
        if let Some(map) = &self.aligned {
            let mut v = self.collector.identity_vec();
            for (e, m) in a.0.iter().zip(map) {
                if let Some(m) = m {
                    v[*m] = *e;
                }
            }
            return Ok(v);
        }
        let mut acc = self.collector.identity_vec();
        for (s, &e) in a.0.iter().enumerate() {
            if e != 0 {
                acc = self.collector.mul(&acc, &self.collector.pow_u64(&self.values[s], e));
            }
        }
        Ok(acc)
    }

    pub fn from_internal(&self, v: &[u64]) -> Result<PcElement, GroupError> {
        if !self.collector.is_valid(v) {
            return Err(GroupError::OutOfRange(format!("{v:?}")));
        }
        if let Some(map) = &self.aligned {
            return Ok(PcElement(map.iter().map(|m| m.map_or(0, |m| v[m])).collect()));
        }
        let table = self.lookup_table()?;
        table.get(v).cloned().map(PcElement).ok_or_else(|| GroupError::NotUnique(format!("{v:?} not reached")))
    }

    fn lookup_table(&self) -> Result<Arc<Lookup>, GroupError> {
        let r = self.lookup.get_or_init(|| {
            let mut h = HashMap::new();
            let mut dup = None;
            self.walk(|beta, v| {
                if h.insert(v.to_vec(), beta.to_vec()).is_some() && dup.is_none() {
                    dup = Some(beta.to_vec());
                }
            })
            .map_err(|e| e.to_string())?;
            if let Some(b) = dup {
                return Err(format!("normal form is not unique: {b:?} repeats an earlier element"));
            }
            Ok(Arc::new(h))
        });
        r.clone().map_err(GroupError::Inconsistent)
    }

    /// Visits every coefficient vector in lexicographic order with its internal value.
    pub fn walk(&self, mut f: impl FnMut(&[u64], &[u64])) -> Result<u64, GroupError> {
        let size = self.order();
        let cap = max_enum();
        if size > BigInt::from(cap) {
            return Err(GroupError::CapExceeded { size, cap });
        }
        let n = self.len();
        let mut beta = vec![0u64; n];
        let mut count = 0u64;
        let id = self.collector.identity_vec();
        self.walk_from(0, &id, &mut beta, &mut f, &mut count);
        Ok(count)
    }

    fn walk_from(&self, s: usize, cur: &[u64], beta: &mut Vec<u64>, f: &mut impl FnMut(&[u64], &[u64]), count: &mut u64) {
        if s == self.len() {
            f(beta, cur);
            *count += 1;
            return;
        }
        let mut acc = cur.to_vec();
        for b in 0..self.basis.moduli[s] {
            beta[s] = b;
            self.walk_from(s + 1, &acc, beta, f, count);
            if b + 1 < self.basis.moduli[s] {
                acc = self.collector.mul(&acc, &self.values[s]);
            }
        }
        beta[s] = 0;
    }

    pub fn normal_form(&self, e: &WordExpr) -> Result<PcElement, GroupError> {
        e.check_range(self.spec.r())?;
        let v = e.eval(&self.collector);
        self.from_internal(&v)
    }

    pub fn parse(&self, text: &str) -> Result<PcElement, GroupError> {
        self.normal_form(&parse_expr(text, self.spec.r())?)
    }

    /// `x_i` for 1-based `i`.
    pub fn generator_element(&self, i: usize) -> Result<PcElement, GroupError> {
        self.from_internal(&self.collector.generator(i))
    }

    /// The value of the `s`-th distinguished commutator.
    pub fn distinguished_element(&self, s: usize) -> Result<PcElement, GroupError> {
        self.from_internal(&self.values[s])
    }

    pub fn multiply(&self, a: &PcElement, b: &PcElement) -> Result<PcElement, GroupError> {
        let v = self.collector.mul(&self.to_internal(a)?, &self.to_internal(b)?);
        self.from_internal(&v)
    }

    pub fn inverse(&self, a: &PcElement) -> Result<PcElement, GroupError> {
        let v = self.collector.inv(&self.to_internal(a)?);
        self.from_internal(&v)
    }

    pub fn power(&self, a: &PcElement, n: &BigInt) -> Result<PcElement, GroupError> {
        let v = self.collector.pow_big(&self.to_internal(a)?, n);
        self.from_internal(&v)
    }

    pub fn commutator(&self, a: &PcElement, b: &PcElement) -> Result<PcElement, GroupError> {
        let v = self.collector.comm(&self.to_internal(a)?, &self.to_internal(b)?);
        self.from_internal(&v)
    }

    pub fn order_of(&self, a: &PcElement) -> Result<BigInt, GroupError> {
        Ok(self.collector.element_order(&self.to_internal(a)?, self.spec.p))
    }

    /// Values of the basic commutators of weight at least `m`; these generate `G_m`.
    pub fn lcs_layer(&self, m: usize) -> Result<Vec<PcElement>, GroupError> {
        if m == 0 || m > self.spec.k + 1 {
            return Err(GroupError::OutOfRange(format!("layer {m} outside 1..={}", self.spec.k + 1)));
        }
        self.hall
            .entries()
            .iter()
            .filter(|c| c.weight() >= m)
            .map(|c| self.from_internal(&c.to_expr().eval(&self.collector)))
            .collect()
    }

    pub fn format_element(&self, a: &PcElement) -> String {
        let parts: Vec<String> = a
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(s, &e)| {
                let name = self.basis.entries[s].name(self.spec.p);
                if e == 1 {
                    name
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect();
        if parts.is_empty() {
            "e".into()
        } else {
            parts.join(" ")
        }
    }

    /// Runs the consistency checks; a failure is reported, not returned as an error.
    pub fn verify_consistency(&self, level: Level) -> Result<ConsistencyReport, GroupError> {
        let mut report = ConsistencyReport {
            level,
            order: self.order().to_string(),
            checks: 0,
            enumerated: None,
            passed: true,
            witness: None,
        };
        if level == Level::Full {
            let size = self.order();
            let cap = max_enum();
            if size > BigInt::from(cap) {
                return Err(GroupError::CapExceeded { size, cap });
            }
        }
        let sample = (level == Level::Sampled).then_some(SAMPLE_TRIPLES);
        match self.collector.check_consistency(sample) {
            Ok(n) => report.checks += n,
            Err(w) => {
                let names: Vec<&str> = w.generators.iter().map(|&i| self.collector.names()[i].as_str()).collect();
                return Ok(fail(report, format!("{} test fails on ({})", w.test, names.join(", "))));
            }
        }
        let c = &self.collector;
        // power relations of the distinguished basis, by repeated multiplication
        for (s, &n) in self.basis.moduli.iter().enumerate() {
            report.checks += 1;
            let mut acc = c.identity_vec();
            for _ in 0..n {
                acc = c.mul(&acc, &self.values[s]);
            }
            if acc != c.pow_u64(&self.values[s], n) {
                let name = self.basis.entries[s].name(self.spec.p);
                return Ok(fail(report, format!("power relation of {name} does not re-collect")));
            }
        }
        let n = self.len();
        let mut triples = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for d in 0..n {
                    triples.push((a, b, d));
                }
            }
        }
        if level == Level::Sampled && triples.len() > SAMPLE_TRIPLES {
            let mut rng = ChaCha8Rng::seed_from_u64(0xa550c);
            triples = (0..SAMPLE_TRIPLES).map(|_| triples[rng.gen_range(0..triples.len())]).collect();
        }
        for (a, b, d) in triples {
            report.checks += 1;
            let (x, y, z) = (&self.values[a], &self.values[b], &self.values[d]);
            if c.mul(&c.mul(x, y), z) != c.mul(x, &c.mul(y, z)) {
                let names: Vec<String> = [a, b, d].iter().map(|&s| self.basis.entries[s].name(self.spec.p)).collect();
                return Ok(fail(report, format!("associativity fails on ({})", names.join(", "))));
            }
        }
        if level == Level::Full {
            let mut seen = std::collections::HashSet::new();
            let mut dup = None;
            let count = self.walk(|beta, v| {
                if !seen.insert(v.to_vec()) && dup.is_none() {
                    dup = Some(beta.to_vec());
                }
            })?;
            report.checks += 1;
            report.enumerated = Some(seen.len() as u64);
            if let Some(b) = dup {
                return Ok(fail(report, format!("coefficient vector {b:?} repeats an earlier element")));
            }
            if BigInt::from(count) != self.order() {
                return Ok(fail(report, format!("enumerated {count} elements, expected {}", self.order())));
            }
        }
        Ok(report)
    }
}

fn fail(mut report: ConsistencyReport, witness: String) -> ConsistencyReport {
    report.passed = false;
    report.witness = Some(witness);
    report
}

impl Group for PcPresentation {
    type Element = PcElement;

    fn identity(&self) -> PcElement {
        PcPresentation::identity(self)
    }

    fn generator(&self, index: usize) -> PcElement {
        self.generator_element(index).expect("generator of a valid presentation")
    }

    fn multiply(&self, a: &PcElement, b: &PcElement) -> PcElement {
        PcPresentation::multiply(self, a, b).expect("elements of this presentation")
    }

    fn inverse(&self, a: &PcElement) -> PcElement {
        PcPresentation::inverse(self, a).expect("element of this presentation")
    }

    fn power(&self, a: &PcElement, n: &BigInt) -> PcElement {
        PcPresentation::power(self, a, n).expect("element of this presentation")
    }
}
