use std::fmt;

use serde::Serialize;

use crate::hall::{BasicCommutator, BasisTable};
use crate::term::WordExpr;

use super::GroupError;

/// Parameters of a nilpotent product of cyclic `p`-groups of orders
/// `p^alpha_1 <= ... <= p^alpha_r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct GroupSpec {
    pub p: u64,
    pub k: usize,
    pub alphas: Vec<u32>,
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

impl GroupSpec {
    pub fn new(p: u64, k: usize, alphas: Vec<u32>) -> Result<Self, GroupError> {
        let s = GroupSpec { p, k, alphas };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), GroupError> {
        if !is_prime(self.p) {
            return Err(GroupError::InvalidSpec(format!("{} is not prime", self.p)));
        }
        if self.k == 0 {
            return Err(GroupError::InvalidSpec("class must be at least 1".into()));
        }
        if self.alphas.is_empty() {
            return Err(GroupError::InvalidSpec("at least one cyclic factor is required".into()));
        }
        if self.alphas.contains(&0) {
            return Err(GroupError::InvalidSpec("exponents must be positive".into()));
        }
        if self.alphas.windows(2).any(|w| w[0] > w[1]) {
            return Err(GroupError::InvalidSpec("exponents must be sorted ascending".into()));
        }
        if self.k as u64 > self.p + 1 {
            return Err(GroupError::ClassTooLarge { k: self.k, p: self.p });
        }
        Ok(())
    }

    pub fn r(&self) -> usize {
        self.alphas.len()
    }

    /// `alpha_i` for 1-based `i`.
    pub fn alpha(&self, i: usize) -> u32 {
        self.alphas[i - 1]
    }

    pub fn is_top_class(&self) -> bool {
        self.k as u64 == self.p + 1
    }

    pub fn p_pow(&self, e: u32) -> Result<u64, GroupError> {
        self.p.checked_pow(e).ok_or(GroupError::Overflow)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a: Vec<String> = self.alphas.iter().map(|a| a.to_string()).collect();
        write!(f, "p={} k={} orders={}", self.p, self.k, a.join(","))
    }
}

/// An entry of the distinguished basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Distinguished {
    Basic(BasicCommutator),
    /// `[x_j, x_i^p]`, standing in for `[x_j, x_i, ..., x_i]` (`p` copies of `x_i`).
    VPrime { j: usize, i: usize },
    /// `[x_j^p, x_i]`, standing in for `[x_j, x_i, x_j, ..., x_j]`.
    VDoublePrime { j: usize, i: usize },
}

impl Distinguished {
    pub fn weight(&self, p: u64) -> usize {
        match self {
            Distinguished::Basic(c) => c.weight(),
            _ => p as usize + 1,
        }
    }

    pub fn name(&self, p: u64) -> String {
        match self {
            Distinguished::Basic(c) => c.to_string(),
            Distinguished::VPrime { j, i } => format!("[x{j},x{i}^{p}]"),
            Distinguished::VDoublePrime { j, i } => format!("[x{j}^{p},x{i}]"),
        }
    }

    pub fn expr(&self, p: u64) -> WordExpr {
        let x = WordExpr::generator;
        match self {
            Distinguished::Basic(c) => c.to_expr(),
            Distinguished::VPrime { j, i } => WordExpr::commutator(x(*j), WordExpr::power(x(*i), p)),
            Distinguished::VDoublePrime { j, i } => WordExpr::commutator(WordExpr::power(x(*j), p), x(*i)),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DistinguishedBasis {
    pub entries: Vec<Distinguished>,
    pub moduli: Vec<u64>,
}

impl DistinguishedBasis {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Which substitution, if any, applies to a basic commutator at class `p+1`.
fn replacement(c: &BasicCommutator, p: u64) -> Option<Distinguished> {
    let spine = c.spine();
    if spine.len() as u64 != p + 1 || spine.iter().any(|e| e.as_generator().is_none()) {
        return None;
    }
    let g: Vec<usize> = spine.iter().map(|e| e.as_generator().unwrap()).collect();
    let (j, i) = (g[0], g[1]);
    if g[2..].iter().all(|&t| t == i) {
        Some(Distinguished::VPrime { j, i })
    } else if g[2..].iter().all(|&t| t == j) {
        Some(Distinguished::VDoublePrime { j, i })
    } else {
        None
    }
}

/// The distinguished basis with its moduli.
pub fn modulus_table(spec: &GroupSpec) -> Result<DistinguishedBasis, GroupError> {
    spec.validate()?;
    let basis = BasisTable::generate(spec.r(), spec.k)?;
    distinguished_basis(spec, &basis)
}

pub(crate) fn distinguished_basis(spec: &GroupSpec, basis: &BasisTable) -> Result<DistinguishedBasis, GroupError> {
    let p = spec.p;
    let mut entries = Vec::with_capacity(basis.len());
    let mut moduli = Vec::with_capacity(basis.len());
    for c in basis.entries() {
        let s = c.smallest_generator();
        let default = spec.p_pow(spec.alpha(s))?;
        let (entry, n) = if !spec.is_top_class() {
            (Distinguished::Basic(c.clone()), default)
        } else if let Some(i) = c.as_generator() {
            (Distinguished::Basic(c.clone()), spec.p_pow(spec.alpha(i))?)
        } else if c.weight() == 2 {
            let small = c.right().unwrap().as_generator().unwrap();
            (Distinguished::Basic(c.clone()), spec.p_pow(spec.alpha(small) + 1)?)
        } else {
            match replacement(c, p) {
                Some(Distinguished::VPrime { j, i }) => {
                    (Distinguished::VPrime { j, i }, spec.p_pow(spec.alpha(i) - 1)?)
                }
                Some(Distinguished::VDoublePrime { j, i }) => {
                    let e = if spec.alpha(i) == spec.alpha(j) { spec.alpha(i) - 1 } else { spec.alpha(i) };
                    (Distinguished::VDoublePrime { j, i }, spec.p_pow(e)?)
                }
                _ => (Distinguished::Basic(c.clone()), default),
            }
        };
        entries.push(entry);
        moduli.push(n);
    }
    Ok(DistinguishedBasis { entries, moduli })
}
