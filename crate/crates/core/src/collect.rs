//! Arithmetic in the free nilpotent group `F/F_{k+1}` by collection.
//!
//! Elements are exponent vectors over the Hall basis of weight at most `k`,
//! i.e. the collected words `g_1^{e_1} g_2^{e_2} ... g_n^{e_n}`. Each composite
//! basis entry `g_c = [g_a, g_b]` *is* the group commutator of its entries.
//!
//! Multiplication is collection from the left. Moving `g_j` to the left past
//! the tail `T` (supported on entries after `j`) replaces `T` by its image
//! under conjugation by `g_j`, an automorphism of the subgroup on the later
//! entries. The images `g_m^{g_j}` are filled lazily: if `[g_m, g_j]` is
//! basic it is read from the table, otherwise `g_m = [a, b]` with `b > g_j`
//! and `g_m^{g_j} = [a^{g_j}, b^{g_j}]`, which only needs images of lighter
//! entries and arithmetic on entries after `j`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::hall::{shove, BasicCommutator, BasisTable, HallError};
use crate::term::{Group, ParseError, WordExpr};

/// Exponents at or below this bound are applied by repeated conjugation;
/// larger ones go through repeated squaring of the automorphism.
const ITERATE_LIMIT: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CollectError {
    #[error("elements belong to different bases")]
    BasisMismatch,
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("{0} is not in the basis")]
    NotInBasis(String),
    #[error("weight {needed} exceeds the class {k} of the group")]
    WeightTooLarge { needed: usize, k: usize },
    #[error("the commutator of an element with itself is trivial")]
    EqualArguments,
    #[error("collected commutator violates the leading-term contract: {0}")]
    ContractViolation(String),
    #[error(transparent)]
    Hall(#[from] HallError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

type Exps = Vec<BigInt>;

/// `F/F_{k+1}` on `r` generators.
pub struct FreeNilpotentGroup {
    basis: Arc<BasisTable>,
    conj: RwLock<HashMap<(usize, usize), Arc<Exps>>>,
    inv_conj: RwLock<HashMap<(usize, usize), Arc<Exps>>>,
}

impl fmt::Debug for FreeNilpotentGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FreeNilpotentGroup")
            .field("r", &self.basis.r())
            .field("k", &self.basis.k())
            .field("basis_len", &self.basis.len())
            .finish()
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FreeNilElement {
    basis: Arc<BasisTable>,
    exps: Exps,
}

impl PartialEq for BasisTable {
    fn eq(&self, other: &Self) -> bool {
        self.r() == other.r() && self.k() == other.k()
    }
}

impl Eq for BasisTable {}

impl std::hash::Hash for BasisTable {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        (self.r(), self.k()).hash(state);
    }
}

impl FreeNilElement {
    pub fn basis(&self) -> &Arc<BasisTable> {
        &self.basis
    }

    pub fn exponent(&self, i: usize) -> &BigInt {
        &self.exps[i]
    }

    /// Dense exponent vector indexed by basis position.
    pub fn dense(&self) -> &[BigInt] {
        &self.exps
    }

    /// Non-zero exponents, ascending by basis position.
    pub fn exponents(&self) -> impl Iterator<Item = (usize, &BigInt)> + '_ {
        self.exps.iter().enumerate().filter(|(_, e)| !e.is_zero())
    }

    pub fn to_map(&self) -> BTreeMap<usize, BigInt> {
        self.exponents().map(|(i, e)| (i, e.clone())).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.exps.iter().all(Zero::is_zero)
    }

    /// Smallest weight carrying a non-zero exponent.
    pub fn min_weight(&self) -> Option<usize> {
        self.exponents().next().map(|(i, _)| self.basis.weight(i))
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut ws = self.exponents().map(|(i, _)| self.basis.weight(i));
        match ws.next() {
            None => true,
            Some(w) => ws.all(|x| x == w),
        }
    }

    /// Only the weight-`w` exponents.
    pub fn layer(&self, w: usize) -> FreeNilElement {
        let range = self.basis.weight_range(w);
        let exps = self
            .exps
            .iter()
            .enumerate()
            .map(|(i, e)| if range.contains(&i) { e.clone() } else { BigInt::zero() })
            .collect();
        FreeNilElement { basis: self.basis.clone(), exps }
    }

    /// Image in `F/F_{w+1}`, kept over the same basis.
    pub fn truncate(&self, w: usize) -> FreeNilElement {
        let exps = self
            .exps
            .iter()
            .enumerate()
            .map(|(i, e)| if self.basis.weight(i) <= w { e.clone() } else { BigInt::zero() })
            .collect();
        FreeNilElement { basis: self.basis.clone(), exps }
    }

    /// Map from commutator text to exponent.
    pub fn to_named_map(&self) -> Vec<(String, BigInt)> {
        self.exponents().map(|(i, e)| (self.basis.get(i).to_string(), e.clone())).collect()
    }

    pub fn to_expr(&self) -> WordExpr {
        WordExpr::product(
            self.exponents()
                .map(|(i, e)| {
                    let c = self.basis.get(i).to_expr();
                    if e.is_one() {
                        c
                    } else {
                        WordExpr::power(c, e.clone())
                    }
                })
                .collect(),
        )
    }
}

impl fmt::Display for FreeNilElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}

impl fmt::Debug for FreeNilElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FreeNilElement({self})")
    }
}

/// Leading-term decomposition of a collected `[u,v]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteResult {
    pub epsilon: i8,
    pub leading: BasicCommutator,
    /// Weight-`k` exponents strictly after `leading`.
    pub tail: FreeNilElement,
}

fn unit(n: usize, i: usize) -> Exps {
    let mut v = vec![BigInt::zero(); n];
    v[i] = BigInt::one();
    v
}

fn single_entry(v: &[BigInt]) -> Option<(usize, &BigInt)> {
    let mut it = v.iter().enumerate().filter(|(_, e)| !e.is_zero());
    let first = it.next()?;
    if it.next().is_some() {
        None
    } else {
        Some(first)
    }
}

impl FreeNilpotentGroup {
    pub fn new(r: usize, k: usize) -> Result<Self, CollectError> {
        Ok(Self::from_basis(Arc::new(BasisTable::generate(r, k)?)))
    }

    pub fn from_basis(basis: Arc<BasisTable>) -> Self {
        FreeNilpotentGroup {
            basis,
            conj: RwLock::new(HashMap::new()),
            inv_conj: RwLock::new(HashMap::new()),
        }
    }

    pub fn basis(&self) -> &Arc<BasisTable> {
        &self.basis
    }

    pub fn r(&self) -> usize {
        self.basis.r()
    }

    pub fn k(&self) -> usize {
        self.basis.k()
    }

    fn n(&self) -> usize {
        self.basis.len()
    }

    fn wrap(&self, exps: Exps) -> FreeNilElement {
        FreeNilElement { basis: self.basis.clone(), exps }
    }

    fn check(&self, a: &FreeNilElement) -> Result<(), CollectError> {
        if Arc::ptr_eq(&a.basis, &self.basis) || *a.basis == *self.basis {
            Ok(())
        } else {
            Err(CollectError::BasisMismatch)
        }
    }

    pub fn identity_element(&self) -> FreeNilElement {
        self.wrap(vec![BigInt::zero(); self.n()])
    }

    /// The basis entry at position `i` as a group element.
    pub fn basis_element(&self, i: usize) -> FreeNilElement {
        self.wrap(unit(self.n(), i))
    }

    pub fn element_of(&self, c: &BasicCommutator) -> Result<FreeNilElement, CollectError> {
        let i = self.basis.position(c).ok_or_else(|| CollectError::NotInBasis(c.to_string()))?;
        Ok(self.basis_element(i))
    }

    /// Builds an element from `(position, exponent)` pairs listed in basis order.
    pub fn from_exponents(&self, pairs: &[(usize, BigInt)]) -> FreeNilElement {
        let mut v = vec![BigInt::zero(); self.n()];
        for (i, e) in pairs {
            v[*i] += e;
        }
        self.wrap(v)
    }

    /// Collected form of an expression.
    pub fn embed(&self, e: &WordExpr) -> Result<FreeNilElement, CollectError> {
        e.check_range(self.r())?;
        Ok(e.eval(self))
    }

    pub fn parse(&self, text: &str) -> Result<FreeNilElement, CollectError> {
        let e = crate::term::parse_expr(text, self.r())?;
        self.embed(&e)
    }

    pub fn try_multiply(&self, a: &FreeNilElement, b: &FreeNilElement) -> Result<FreeNilElement, CollectError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.wrap(self.mul(&a.exps, &b.exps)))
    }

    pub fn try_commutator(&self, a: &FreeNilElement, b: &FreeNilElement) -> Result<FreeNilElement, CollectError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.wrap(self.comm(&a.exps, &b.exps)))
    }

    /// `[u,v]` for basic `u != v` with `wt(u) + wt(v) <= k`, read on the
    /// weight `wt(u) + wt(v)` layer.
    pub fn rewrite_basic_pair(&self, u: &BasicCommutator, v: &BasicCommutator) -> Result<RewriteResult, CollectError> {
        if u == v {
            return Err(CollectError::EqualArguments);
        }
        let w = u.weight() + v.weight();
        if w > self.k() {
            return Err(CollectError::WeightTooLarge { needed: w, k: self.k() });
        }
        // [u,v] = [v,u]^-1, and the weight-w layer is abelian
        let (big, small, sign) = if u > v { (u, v, 1) } else { (v, u, -1) };
        let c = self.try_commutator(&self.element_of(big)?, &self.element_of(small)?)?;
        if c.exponents().any(|(i, _)| self.basis.weight(i) < w) {
            return Err(CollectError::ContractViolation(format!("[{big},{small}] has terms below weight {w}")));
        }
        let mut layer = c.layer(w);
        if sign < 0 {
            for e in layer.exps.iter_mut() {
                *e = -&*e;
            }
        }
        let (lead, coef) = layer
            .exponents()
            .next()
            .map(|(i, e)| (i, e.clone()))
            .ok_or_else(|| CollectError::ContractViolation(format!("[{u},{v}] is trivial mod F_{}", w + 1)))?;
        let epsilon = if coef.is_one() {
            1
        } else if coef == -BigInt::one() {
            -1
        } else {
            return Err(CollectError::ContractViolation(format!("leading exponent {coef} is not a unit")));
        };
        layer.exps[lead] = BigInt::zero();
        Ok(RewriteResult { epsilon, leading: self.basis.get(lead).clone(), tail: layer })
    }

    /// `[g, a]` modulo `F_{w + wt(a) + 1}` for `g` homogeneous of weight `w`;
    /// the result lives on the weight `w + wt(a)` layer.
    pub fn commutate_with(&self, g: &FreeNilElement, a: &BasicCommutator) -> Result<FreeNilElement, CollectError> {
        self.check(g)?;
        if !g.is_homogeneous() {
            return Err(CollectError::NotHomogeneous);
        }
        let Some(w) = g.min_weight() else {
            return Ok(self.identity_element());
        };
        let target = w + a.weight();
        if target > self.k() {
            return Err(CollectError::WeightTooLarge { needed: target, k: self.k() });
        }
        let c = self.try_commutator(g, &self.element_of(a)?)?;
        Ok(c.layer(target))
    }

    /// Leading term of `[g, a]` predicted from the leading term of `g`:
    /// `(shove(b1, a), +-alpha1)`.
    pub fn predicted_leading(
        &self,
        g: &FreeNilElement,
        a: &BasicCommutator,
    ) -> Result<Option<(BasicCommutator, BigInt)>, CollectError> {
        let Some((i, alpha)) = g.exponents().next() else {
            return Ok(None);
        };
        let b1 = self.basis.get(i);
        let s = shove(b1, a)?;
        let coef = if b1 > a { alpha.clone() } else { -alpha };
        Ok(Some((s, coef)))
    }

    // ---- collection core -------------------------------------------------

    fn commutes(&self, m: usize, j: usize) -> bool {
        self.basis.weight(m) + self.basis.weight(j) > self.k()
    }

    fn mul(&self, a: &[BigInt], b: &[BigInt]) -> Exps {
        let mut x = a.to_vec();
        for (m, e) in b.iter().enumerate() {
            if !e.is_zero() {
                self.mul_gen_pow(&mut x, m, e);
            }
        }
        x
    }

    fn inv(&self, a: &[BigInt]) -> Exps {
        let mut x = vec![BigInt::zero(); self.n()];
        for (m, e) in a.iter().enumerate().rev() {
            if !e.is_zero() {
                self.mul_gen_pow(&mut x, m, &-e);
            }
        }
        x
    }

    fn comm(&self, a: &[BigInt], b: &[BigInt]) -> Exps {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.mul(&self.inv(&ba), &ab)
    }

    fn pow(&self, a: &[BigInt], n: &BigInt) -> Exps {
        if let Some((i, e)) = single_entry(a) {
            let mut v = vec![BigInt::zero(); self.n()];
            v[i] = e * n;
            return v;
        }
        let (mut base, mut n) = if n.is_negative() { (self.inv(a), -n) } else { (a.to_vec(), n.clone()) };
        let mut acc = vec![BigInt::zero(); self.n()];
        let two = BigInt::from(2);
        while !n.is_zero() {
            if (&n % &two).is_one() {
                acc = self.mul(&acc, &base);
            }
            n /= &two;
            if !n.is_zero() {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// `x <- x * g_j^e`.
    fn mul_gen_pow(&self, x: &mut Exps, j: usize, e: &BigInt) {
        let n = self.n();
        let tail_blocks = (j + 1..n).any(|m| !x[m].is_zero() && !self.commutes(m, j));
        if !tail_blocks {
            x[j] += e;
            return;
        }
        let mut tail = vec![BigInt::zero(); n];
        for m in j + 1..n {
            std::mem::swap(&mut tail[m], &mut x[m]);
        }
        x[j] += e;
        let moved = self.conj_pow(tail, j, e);
        for (m, t) in moved.iter().enumerate().skip(j + 1) {
            if !t.is_zero() {
                self.mul_gen_pow(x, m, t);
            }
        }
    }

    /// Image of `t` (supported after `j`) under conjugation by `g_j^e`.
    fn conj_pow(&self, mut t: Exps, j: usize, e: &BigInt) -> Exps {
        let forward = e.is_positive();
        let count = e.magnitude();
        if let Some(c) = num_traits::ToPrimitive::to_u32(count).filter(|&c| c <= ITERATE_LIMIT) {
            for _ in 0..c {
                t = self.apply_conj(&t, j, forward);
            }
            return t;
        }
        // images of g_{j+1..n} under phi^(2^s), squared up
        let n = self.n();
        let mut images: Vec<Option<Exps>> = (0..n)
            .map(|m| {
                if m <= j || self.commutes(m, j) {
                    None
                } else {
                    Some((*self.conj_image(m, j, forward)).clone())
                }
            })
            .collect();
        let mut count = count.clone();
        let two = num_bigint::BigUint::from(2u32);
        loop {
            if (&count % &two).is_one() {
                t = self.apply_images(&t, j, &images);
            }
            count /= &two;
            if count.is_zero() {
                break;
            }
            let squared = images
                .iter()
                .map(|img| img.as_ref().map(|v| self.apply_images(v, j, &images)))
                .collect();
            images = squared;
        }
        t
    }

    fn apply_images(&self, t: &[BigInt], j: usize, images: &[Option<Exps>]) -> Exps {
        let mut res = vec![BigInt::zero(); self.n()];
        for (m, tm) in t.iter().enumerate().skip(j + 1) {
            if tm.is_zero() {
                continue;
            }
            match &images[m] {
                None => self.mul_gen_pow(&mut res, m, tm),
                Some(img) => {
                    let p = self.pow(img, tm);
                    res = self.mul(&res, &p);
                }
            }
        }
        res
    }

    fn apply_conj(&self, t: &[BigInt], j: usize, forward: bool) -> Exps {
        let mut res = vec![BigInt::zero(); self.n()];
        for (m, tm) in t.iter().enumerate().skip(j + 1) {
            if tm.is_zero() {
                continue;
            }
            if self.commutes(m, j) {
                self.mul_gen_pow(&mut res, m, tm);
            } else {
                let img = self.conj_image(m, j, forward);
                let p = self.pow(&img, tm);
                res = self.mul(&res, &p);
            }
        }
        res
    }

    /// `g_j^-1 g_m g_j` (forward) or `g_j g_m g_j^-1`, for `m > j`.
    fn conj_image(&self, m: usize, j: usize, forward: bool) -> Arc<Exps> {
        let cache = if forward { &self.conj } else { &self.inv_conj };
        if let Some(v) = cache.read().unwrap().get(&(m, j)) {
            return v.clone();
        }
        let v = Arc::new(if forward { self.compute_conj(m, j) } else { self.compute_inv_conj(m, j) });
        cache.write().unwrap().entry((m, j)).or_insert(v).clone()
    }

    fn compute_conj(&self, m: usize, j: usize) -> Exps {
        let n = self.n();
        if self.commutes(m, j) {
            return unit(n, m);
        }
        match self.basis.children(m) {
            Some((a, b)) if b > j => {
                let a_img = self.conj_image(a, j, true);
                let b_img = self.conj_image(b, j, true);
                self.comm(&a_img, &b_img)
            }
            _ => {
                let c = self
                    .basis
                    .bracket_position(m, j)
                    .expect("Hall bracket of weight <= k is in the basis");
                let mut v = unit(n, m);
                v[c] = BigInt::one();
                v
            }
        }
    }

    fn compute_inv_conj(&self, m: usize, j: usize) -> Exps {
        if self.commutes(m, j) {
            return unit(self.n(), m);
        }
        // g_m^{g_j} = g_m c with c = [g_m, g_j] of higher weight, so
        // phi^-1(g_m) = g_m phi^-1(c^-1)
        let mut c = (*self.conj_image(m, j, true)).clone();
        c[m] = BigInt::zero();
        let c_inv = self.inv(&c);
        let mut w = self.apply_conj(&c_inv, j, false);
        w[m] = BigInt::one();
        w
    }
}

impl Group for FreeNilpotentGroup {
    type Element = FreeNilElement;

    fn identity(&self) -> FreeNilElement {
        self.identity_element()
    }

    fn generator(&self, index: usize) -> FreeNilElement {
        self.basis_element(index - 1)
    }

    fn multiply(&self, a: &FreeNilElement, b: &FreeNilElement) -> FreeNilElement {
        self.try_multiply(a, b).expect("basis mismatch")
    }

    fn inverse(&self, a: &FreeNilElement) -> FreeNilElement {
        self.check(a).expect("basis mismatch");
        self.wrap(self.inv(&a.exps))
    }

    fn power(&self, a: &FreeNilElement, n: &BigInt) -> FreeNilElement {
        self.check(a).expect("basis mismatch");
        self.wrap(self.pow(&a.exps, n))
    }

    fn commutator(&self, a: &FreeNilElement, b: &FreeNilElement) -> FreeNilElement {
        self.try_commutator(a, b).expect("basis mismatch")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn embeds_simple_words() {
        let g = FreeNilpotentGroup::new(2, 2).unwrap();
        let a = g.parse("x1 x2").unwrap();
        assert_eq!(a.to_map(), BTreeMap::from([(0, big(1)), (1, big(1))]));
        let b = g.parse("x2 x1").unwrap();
        assert_eq!(b.to_map(), BTreeMap::from([(0, big(1)), (1, big(1)), (2, big(1))]));
        assert_eq!(b.to_string(), "x1 x2 [x2,x1]");
        assert!(g.parse("[x2,x1]^0").unwrap().is_identity());
    }

    #[test]
    fn identity_and_inverse() {
        let g = FreeNilpotentGroup::new(2, 3).unwrap();
        let a = g.parse("x2 x1 x2^-1").unwrap();
        assert_eq!(g.multiply(&a, &g.identity()), a);
        let x1 = g.generator(1);
        assert!(g.multiply(&x1, &g.inverse(&x1)).is_identity());
        assert!(g.inverse(&g.identity()).is_identity());
        assert_eq!(g.power(&x1, &big(3)).to_map(), BTreeMap::from([(0, big(3))]));
        let c = g.parse("x1 x2 [x2,x1]").unwrap();
        assert!(g.multiply(&c, &g.inverse(&c)).is_identity());
    }

    #[test]
    fn basic_commutator_is_basis_element() {
        let g = FreeNilpotentGroup::new(2, 3).unwrap();
        let c = g.commutator(&g.generator(2), &g.generator(1));
        assert_eq!(c.to_string(), "[x2,x1]");
        assert!(g.commutator(&c, &c).is_identity());
    }

    #[test]
    fn k3_rewrite_instance() {
        // [[x3,x2],x1] = [x3,x1,x2] [x2,x1,x3]^-1 mod F_4
        let g = FreeNilpotentGroup::new(3, 3).unwrap();
        let c = g.parse("[x3,x2,x1]").unwrap();
        assert_eq!(c.to_string(), "[x3,x1,x2] [x2,x1,x3]^-1");
        let u = BasicCommutator::from_expr(&crate::term::parse_expr("[x3,x2]", 3).unwrap()).unwrap();
        let rw = g.rewrite_basic_pair(&u, &BasicCommutator::generator(1)).unwrap();
        assert_eq!(rw.epsilon, 1);
        assert_eq!(rw.leading.to_string(), "[x3,x1,x2]");
        assert_eq!(rw.tail.to_string(), "[x2,x1,x3]^-1");
    }

    #[test]
    fn rewrite_errors() {
        let g = FreeNilpotentGroup::new(2, 2).unwrap();
        let x1 = BasicCommutator::generator(1);
        assert_eq!(g.rewrite_basic_pair(&x1, &x1), Err(CollectError::EqualArguments));
        let c = BasicCommutator::bracket(&BasicCommutator::generator(2), &x1);
        assert!(matches!(g.rewrite_basic_pair(&c, &x1), Err(CollectError::WeightTooLarge { .. })));
    }

    #[test]
    fn commutate_with_leading_term() {
        let g = FreeNilpotentGroup::new(3, 3).unwrap();
        let x1 = BasicCommutator::generator(1);
        assert!(g.commutate_with(&g.identity(), &x1).unwrap().is_identity());
        let h = g.parse("[x2,x1]^2 [x3,x1]^5").unwrap();
        let res = g.commutate_with(&h, &x1).unwrap();
        let (i, e) = res.exponents().next().unwrap();
        assert_eq!(g.basis().get(i).to_string(), "[x2,x1,x1]");
        assert_eq!(*e, big(2));
        let mixed = g.parse("x1 [x2,x1]").unwrap();
        assert_eq!(g.commutate_with(&mixed, &x1), Err(CollectError::NotHomogeneous));
    }

    #[test]
    fn large_exponents_use_automorphism_powers() {
        let g = FreeNilpotentGroup::new(2, 4).unwrap();
        let a = g.parse("x2 x1").unwrap();
        let fast = g.power(&a, &big(37));
        let mut slow = g.identity();
        for _ in 0..37 {
            slow = g.multiply(&slow, &a);
        }
        assert_eq!(fast, slow);
        let w = g.parse("x2^3 x1^-20 x2^15").unwrap();
        let w2 = g.parse("x2^3 x1^-5 x1^-5 x1^-5 x1^-5 x2^5 x2^5 x2^5").unwrap();
        assert_eq!(w, w2);
    }

    #[test]
    fn basis_mismatch() {
        let g = FreeNilpotentGroup::new(2, 2).unwrap();
        let h = FreeNilpotentGroup::new(2, 3).unwrap();
        assert_eq!(g.try_multiply(&g.identity(), &h.identity()), Err(CollectError::BasisMismatch));
    }
}
