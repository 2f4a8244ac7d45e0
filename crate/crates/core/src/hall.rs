//! Hall bases of basic commutators and the shove operation `[u <- v]`.
//!
//! Basic commutators are ordered weight-first; generators compare by index and
//! two composite commutators of equal weight compare lexicographically by
//! (right entry, left entry), recursively in the same order.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Pow, Zero};
use thiserror::Error;

use crate::term::WordExpr;

/// Default cap on the number of entries of a generated basis.
pub const DEFAULT_BASIS_CAP: usize = 250_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HallError {
    #[error("shove is undefined for equal arguments")]
    EqualArguments,
    #[error("basis on {r} generators up to weight {k} has {count} entries, above the cap of {cap}")]
    TooLarge { r: usize, k: usize, count: BigInt, cap: usize },
    #[error("r and k must both be at least 1")]
    BadParameters,
    #[error("{0} is not a basic commutator")]
    NotBasic(String),
}

#[derive(Debug)]
enum Kind {
    Leaf(usize),
    Pair(BasicCommutator, BasicCommutator),
}

#[derive(Debug)]
struct Node {
    kind: Kind,
    weight: usize,
    smallest: usize,
}

/// A commutator tree; construction does not enforce the Hall conditions,
/// use [`BasicCommutator::is_basic`] to check them.
#[derive(Clone)]
pub struct BasicCommutator(Arc<Node>);

impl BasicCommutator {
    pub fn generator(index: usize) -> Self {
        BasicCommutator(Arc::new(Node { kind: Kind::Leaf(index), weight: 1, smallest: index }))
    }

    /// The bracket `[u,v]`, without checking the Hall conditions.
    pub fn bracket(u: &BasicCommutator, v: &BasicCommutator) -> Self {
        BasicCommutator(Arc::new(Node {
            weight: u.weight() + v.weight(),
            smallest: u.smallest_generator().min(v.smallest_generator()),
            kind: Kind::Pair(u.clone(), v.clone()),
        }))
    }

    /// Left-normed `[c1,c2,...,cn]`.
    pub fn from_spine(entries: &[BasicCommutator]) -> Self {
        let mut acc = entries[0].clone();
        for c in &entries[1..] {
            acc = BasicCommutator::bracket(&acc, c);
        }
        acc
    }

    pub fn weight(&self) -> usize {
        self.0.weight
    }

    /// Smallest generator index in the full expression.
    pub fn smallest_generator(&self) -> usize {
        self.0.smallest
    }

    pub fn as_generator(&self) -> Option<usize> {
        match self.0.kind {
            Kind::Leaf(i) => Some(i),
            Kind::Pair(..) => None,
        }
    }

    pub fn left(&self) -> Option<&BasicCommutator> {
        match &self.0.kind {
            Kind::Pair(a, _) => Some(a),
            Kind::Leaf(_) => None,
        }
    }

    pub fn right(&self) -> Option<&BasicCommutator> {
        match &self.0.kind {
            Kind::Pair(_, b) => Some(b),
            Kind::Leaf(_) => None,
        }
    }

    /// `[c1,...,cn]` with `wt(c1) = 1`.
    pub fn spine(&self) -> Vec<BasicCommutator> {
        let mut rev = Vec::new();
        let mut cur = self.clone();
        while let Kind::Pair(a, b) = &cur.0.kind {
            rev.push(b.clone());
            let next = a.clone();
            cur = next;
        }
        rev.push(cur);
        rev.reverse();
        rev
    }

    /// Hall conditions at every node.
    pub fn is_basic(&self) -> bool {
        match &self.0.kind {
            Kind::Leaf(_) => true,
            Kind::Pair(u, v) => {
                u.is_basic()
                    && v.is_basic()
                    && u > v
                    && u.right().is_none_or(|b| b <= v)
            }
        }
    }

    /// Generator indices of the full expression, left to right.
    pub fn leaves(&self) -> Vec<usize> {
        match &self.0.kind {
            Kind::Leaf(i) => vec![*i],
            Kind::Pair(a, b) => {
                let mut v = a.leaves();
                v.extend(b.leaves());
                v
            }
        }
    }

    pub fn to_expr(&self) -> WordExpr {
        match self.0.kind {
            Kind::Leaf(i) => WordExpr::generator(i),
            Kind::Pair(..) => WordExpr::Commutator(self.spine().iter().map(|c| c.to_expr()).collect()),
        }
    }

    /// Reads a generator or (nested, left-normed) commutator of generators.
    pub fn from_expr(e: &WordExpr) -> Result<Self, HallError> {
        fn go(e: &WordExpr) -> Option<BasicCommutator> {
            match e {
                WordExpr::Generator(g) => Some(BasicCommutator::generator(g.0)),
                WordExpr::Commutator(v) => {
                    let parts: Option<Vec<_>> = v.iter().map(go).collect();
                    Some(BasicCommutator::from_spine(&parts?))
                }
                _ => None,
            }
        }
        match go(e) {
            Some(c) if c.is_basic() => Ok(c),
            _ => Err(HallError::NotBasic(e.to_string())),
        }
    }
}

impl PartialEq for BasicCommutator {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.cmp(other) == Ordering::Equal
    }
}

impl Eq for BasicCommutator {}

impl Hash for BasicCommutator {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0.kind {
            Kind::Leaf(i) => {
                0u8.hash(state);
                i.hash(state);
            }
            Kind::Pair(a, b) => {
                1u8.hash(state);
                a.hash(state);
                b.hash(state);
            }
        }
    }
}

impl Ord for BasicCommutator {
    fn cmp(&self, other: &Self) -> Ordering {
        compare(self, other)
    }
}

impl PartialOrd for BasicCommutator {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BasicCommutator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}

impl fmt::Debug for BasicCommutator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub fn compare(a: &BasicCommutator, b: &BasicCommutator) -> Ordering {
    if Arc::ptr_eq(&a.0, &b.0) {
        return Ordering::Equal;
    }
    a.weight().cmp(&b.weight()).then_with(|| match (&a.0.kind, &b.0.kind) {
        (Kind::Leaf(i), Kind::Leaf(j)) => i.cmp(j),
        (Kind::Pair(a1, b1), Kind::Pair(a2, b2)) => compare(b1, b2).then_with(|| compare(a1, a2)),
        // equal weights never mix leaves and pairs
        (Kind::Leaf(_), Kind::Pair(..)) => Ordering::Less,
        (Kind::Pair(..), Kind::Leaf(_)) => Ordering::Greater,
    })
}

/// `[u <- v]` via spine insertion.
pub fn shove(u: &BasicCommutator, v: &BasicCommutator) -> Result<BasicCommutator, HallError> {
    let (u, v) = match u.cmp(v) {
        Ordering::Equal => return Err(HallError::EqualArguments),
        Ordering::Greater => (u, v),
        Ordering::Less => (v, u),
    };
    if u.weight() == 1 {
        return Ok(BasicCommutator::bracket(u, v));
    }
    let spine = u.spine();
    let mut entries = Vec::with_capacity(spine.len() + 1);
    if spine[1] > *v {
        entries.push(spine[0].clone());
        entries.push(v.clone());
        entries.extend_from_slice(&spine[1..]);
    } else {
        // c2 <= v, so the insertion point is at least 2
        let j = spine.iter().rposition(|c| c <= v).unwrap();
        entries.extend_from_slice(&spine[..=j]);
        entries.push(v.clone());
        entries.extend_from_slice(&spine[j + 1..]);
    }
    Ok(BasicCommutator::from_spine(&entries))
}

/// `[u <- v]` by the recursive three-clause definition.
pub fn shove_recursive(u: &BasicCommutator, v: &BasicCommutator) -> Result<BasicCommutator, HallError> {
    match v.cmp(u) {
        Ordering::Equal => Err(HallError::EqualArguments),
        Ordering::Greater => shove_recursive(v, u),
        Ordering::Less => match (u.left(), u.right()) {
            (Some(c1), Some(c2)) if c2 > v => Ok(BasicCommutator::bracket(&shove_recursive(c1, v)?, c2)),
            _ => Ok(BasicCommutator::bracket(u, v)),
        },
    }
}

/// All basic commutators of weight at most `k` on `r` generators, ascending.
#[derive(Debug)]
pub struct BasisTable {
    r: usize,
    k: usize,
    entries: Vec<BasicCommutator>,
    index: HashMap<BasicCommutator, usize>,
    children: Vec<Option<(usize, usize)>>,
    pair_index: HashMap<(usize, usize), usize>,
    weight_start: Vec<usize>,
}

impl BasisTable {
    pub fn generate(r: usize, k: usize) -> Result<Self, HallError> {
        Self::generate_capped(r, k, DEFAULT_BASIS_CAP)
    }

    pub fn generate_capped(r: usize, k: usize, cap: usize) -> Result<Self, HallError> {
        if r == 0 || k == 0 {
            return Err(HallError::BadParameters);
        }
        let total: BigInt = (1..=k).map(|w| witt_count(r, w)).sum();
        if total > BigInt::from(cap) {
            return Err(HallError::TooLarge { r, k, count: total, cap });
        }
        let mut by_weight: Vec<Vec<BasicCommutator>> = vec![Vec::new(); k + 1];
        by_weight[1] = (1..=r).map(BasicCommutator::generator).collect();
        for w in 2..=k {
            let mut layer = Vec::new();
            for wu in w.div_ceil(2)..w {
                let wv = w - wu;
                for u in &by_weight[wu] {
                    for v in &by_weight[wv] {
                        if u > v && u.right().is_none_or(|b| b <= v) {
                            layer.push(BasicCommutator::bracket(u, v));
                        }
                    }
                }
            }
            layer.sort();
            by_weight[w] = layer;
        }
        let mut entries = Vec::new();
        let mut weight_start = vec![0; k + 2];
        for w in 1..=k {
            weight_start[w] = entries.len();
            entries.append(&mut by_weight[w]);
        }
        weight_start[k + 1] = entries.len();
        let index: HashMap<_, _> = entries.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        let children: Vec<_> = entries
            .iter()
            .map(|c| match (c.left(), c.right()) {
                (Some(a), Some(b)) => Some((index[a], index[b])),
                _ => None,
            })
            .collect();
        let pair_index = children
            .iter()
            .enumerate()
            .filter_map(|(i, ch)| ch.map(|p| (p, i)))
            .collect();
        Ok(BasisTable { r, k, entries, index, children, pair_index, weight_start })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[BasicCommutator] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &BasicCommutator {
        &self.entries[i]
    }

    pub fn position(&self, c: &BasicCommutator) -> Option<usize> {
        self.index.get(c).copied()
    }

    pub fn weight(&self, i: usize) -> usize {
        self.entries[i].weight()
    }

    /// Basis positions of the left and right entries of a composite entry.
    pub fn children(&self, i: usize) -> Option<(usize, usize)> {
        self.children[i]
    }

    /// Position of `[g_a, g_b]` when that bracket is itself in the table.
    pub fn bracket_position(&self, a: usize, b: usize) -> Option<usize> {
        self.pair_index.get(&(a, b)).copied()
    }

    /// Positions of the entries of weight exactly `w`.
    pub fn weight_range(&self, w: usize) -> std::ops::Range<usize> {
        if w == 0 || w > self.k {
            return 0..0;
        }
        self.weight_start[w]..self.weight_start[w + 1]
    }

    /// The `s_i`: smallest generator index in entry `i`.
    pub fn smallest_generator(&self, i: usize) -> usize {
        self.entries[i].smallest_generator()
    }
}

pub fn generate_basis(r: usize, k: usize) -> Result<BasisTable, HallError> {
    BasisTable::generate(r, k)
}

fn mobius(mut n: usize) -> i32 {
    let mut result = 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            result = -result;
        }
        d += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Number of basic commutators of weight exactly `w` on `r` generators.
pub fn witt_count(r: usize, w: usize) -> BigInt {
    let rb = BigInt::from(r);
    let mut sum = BigInt::zero();
    for d in (1..=w).filter(|d| w.is_multiple_of(*d)) {
        let term: BigInt = Pow::pow(&rb, (w / d) as u32);
        match mobius(d) {
            1 => sum += term,
            -1 => sum -= term,
            _ => {}
        }
    }
    sum / BigInt::from(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> BasicCommutator {
        BasicCommutator::generator(i)
    }

    fn sp(v: &[usize]) -> BasicCommutator {
        BasicCommutator::from_spine(&v.iter().map(|&i| x(i)).collect::<Vec<_>>())
    }

    #[test]
    fn order_examples() {
        assert!(x(1) < x(2));
        assert!(x(3) < sp(&[2, 1]));
        assert_eq!(compare(&sp(&[3, 1, 2]), &sp(&[2, 1, 3])), Ordering::Less);
    }

    #[test]
    fn small_bases() {
        let b = generate_basis(2, 3).unwrap();
        let names: Vec<_> = b.entries().iter().map(|c| c.to_string()).collect();
        assert_eq!(names, ["x1", "x2", "[x2,x1]", "[x2,x1,x1]", "[x2,x1,x2]"]);
        let b = generate_basis(1, 5).unwrap();
        assert_eq!(b.len(), 1);
        let b = generate_basis(3, 2).unwrap();
        let names: Vec<_> = b.entries().iter().map(|c| c.to_string()).collect();
        assert_eq!(names, ["x1", "x2", "x3", "[x2,x1]", "[x3,x1]", "[x3,x2]"]);
    }

    #[test]
    fn witt_values() {
        assert_eq!(witt_count(2, 1), BigInt::from(2));
        assert_eq!(witt_count(2, 2), BigInt::from(1));
        assert_eq!(witt_count(2, 5), BigInt::from(6));
        assert_eq!(witt_count(1, 3), BigInt::from(0));
        assert_eq!(witt_count(3, 6), BigInt::from(116));
    }

    #[test]
    fn shove_examples() {
        assert_eq!(shove(&x(2), &x(1)).unwrap(), sp(&[2, 1]));
        assert_eq!(shove(&sp(&[3, 1]), &x(2)).unwrap(), sp(&[3, 1, 2]));
        assert_eq!(shove(&sp(&[2, 1]), &x(3)).unwrap(), sp(&[2, 1, 3]));
        assert_eq!(shove(&sp(&[3, 2]), &x(1)).unwrap(), sp(&[3, 1, 2]));
        assert_eq!(shove(&x(1), &x(1)), Err(HallError::EqualArguments));
        assert_eq!(shove_recursive(&sp(&[3, 2]), &x(1)).unwrap(), sp(&[3, 1, 2]));
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(BasisTable::generate_capped(3, 6, 100), Err(HallError::TooLarge { .. })));
        assert_eq!(generate_basis(0, 2).unwrap_err(), HallError::BadParameters);
    }

    #[test]
    fn from_expr_checks_hall_conditions() {
        let e = crate::term::parse_expr("[x2,x1,x2]", 2).unwrap();
        assert_eq!(BasicCommutator::from_expr(&e).unwrap(), sp(&[2, 1, 2]));
        let e = crate::term::parse_expr("[x1,x2]", 2).unwrap();
        assert!(BasicCommutator::from_expr(&e).is_err());
    }
}

#[cfg(test)]
mod property_tests {
    use super::*;

    /// Distinct pairs of basic commutators with combined weight at most 6.
    fn pairs(r: usize) -> (BasisTable, Vec<(usize, usize)>) {
        let b = generate_basis(r, 5).unwrap();
        let mut out = Vec::new();
        for i in 0..b.len() {
            for j in 0..b.len() {
                if i != j && b.weight(i) + b.weight(j) <= 6 {
                    out.push((i, j));
                }
            }
        }
        (b, out)
    }

    #[test]
    fn shove_properties_exhaustive() {
        for r in 1..=3 {
            let (b, ps) = pairs(r);
            for &(i, j) in &ps {
                let (u, v) = (b.get(i), b.get(j));
                let s = shove(u, v).unwrap();
                assert_eq!(s, shove_recursive(u, v).unwrap(), "{u} {v}");
                assert!(s.is_basic(), "(i) {u} {v} -> {s}");
                assert_eq!(s.weight(), u.weight() + v.weight(), "(ii)");
                assert!(s > *u.max(v), "(iii) {u} {v} -> {s}");
                if u > v && u.weight() > 1 {
                    assert_eq!(s.right().unwrap(), v.max(u.right().unwrap()), "(iv) {u} {v}");
                }
            }
            // (v), (vi), (vii)
            let n = b.len();
            for v in 0..n {
                for u1 in v + 1..n {
                    for u2 in u1 + 1..n {
                        if b.weight(u2) + b.weight(v) > 6 {
                            continue;
                        }
                        let (s1, s2) = (shove(b.get(u1), b.get(v)).unwrap(), shove(b.get(u2), b.get(v)).unwrap());
                        assert!(s1 < s2, "(v) {} {} {}", b.get(v), b.get(u1), b.get(u2));
                        assert_ne!(s1, s2, "(vii)");
                    }
                }
            }
            for u in 0..n {
                for v1 in 0..u {
                    for v2 in v1 + 1..u {
                        if b.weight(u) + b.weight(v2) > 6 {
                            continue;
                        }
                        let (s1, s2) = (shove(b.get(u), b.get(v1)).unwrap(), shove(b.get(u), b.get(v2)).unwrap());
                        assert!(s1 < s2, "(vi) {} {} {}", b.get(u), b.get(v1), b.get(v2));
                    }
                }
            }
        }
    }
}
