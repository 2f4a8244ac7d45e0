//! Finite consistent power-conjugate presentations and collection in them.
//!
//! Generators `g_1 < ... < g_n` with relative orders `d_i >= 2`; relations
//! `g_i^{d_i} = w_i` (supported after `i`) and `g_j^-1 g_i g_j = c_ij` for
//! `j < i` (supported from `i` on). Normal forms are exponent vectors with
//! `0 <= e_i < d_i`.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::term::Group;

/// A failed consistency test: the relation kind and the generator indices
/// (0-based) it was evaluated on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConsistencyWitness {
    pub test: &'static str,
    pub generators: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PcCollector {
    names: Vec<String>,
    orders: Vec<u64>,
    powers: Vec<Vec<u64>>,
    /// `conj[i][j]` for `j < i`; `None` when `g_i` and `g_j` commute.
    conj: Vec<Vec<Option<Vec<u64>>>>,
    /// Images of the defining generators `x_1..x_r`.
    generators: Vec<Vec<u64>>,
}

impl PcCollector {
    /// Assembles a presentation; `conj[i][j]` must be given for all `j < i`.
    pub fn new(
        names: Vec<String>,
        orders: Vec<u64>,
        powers: Vec<Vec<u64>>,
        conj: Vec<Vec<Option<Vec<u64>>>>,
        generators: Vec<Vec<u64>>,
    ) -> Self {
        let n = orders.len();
        let conj = conj
            .into_iter()
            .enumerate()
            .map(|(i, row)| {
                row.into_iter()
                    .map(|c| c.filter(|v| !(v[i] == 1 && v.iter().enumerate().all(|(m, &e)| m == i || e == 0))))
                    .collect()
            })
            .collect();
        debug_assert!(powers.iter().all(|p| p.len() == n));
        PcCollector { names, orders, powers, conj, generators }
    }

    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn relative_orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn power_relation(&self, i: usize) -> &[u64] {
        &self.powers[i]
    }

    /// `g_j^-1 g_i g_j`, for `j < i`.
    pub fn conjugate(&self, i: usize, j: usize) -> Vec<u64> {
        match &self.conj[i][j] {
            Some(v) => v.clone(),
            None => self.unit(i, 1),
        }
    }

    /// Normal form of `g_j g_i`, for `j > i`.
    pub fn swap(&self, j: usize, i: usize) -> Vec<u64> {
        let mut v = self.conjugate(j, i);
        v[i] = 1;
        v
    }

    pub fn generator_images(&self) -> &[Vec<u64>] {
        &self.generators
    }

    /// Group order as the product of relative orders.
    pub fn order(&self) -> BigInt {
        self.orders.iter().map(|&d| BigInt::from(d)).product()
    }

    pub fn unit(&self, i: usize, e: u64) -> Vec<u64> {
        let mut v = vec![0; self.len()];
        v[i] = e;
        v
    }

    pub fn is_valid(&self, v: &[u64]) -> bool {
        v.len() == self.len() && v.iter().zip(&self.orders).all(|(e, d)| e < d)
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut x = a.to_vec();
        self.mul_into(&mut x, b);
        x
    }

    fn mul_into(&self, x: &mut Vec<u64>, b: &[u64]) {
        for (m, &e) in b.iter().enumerate() {
            if e != 0 {
                self.mul_gen_pow(x, m, e);
            }
        }
    }

    /// `x <- x * g_j^e` for `0 <= e < d_j`.
    fn mul_gen_pow(&self, x: &mut Vec<u64>, j: usize, e: u64) {
        let n = self.len();
        let blocked = (j + 1..n).any(|m| x[m] != 0 && self.conj[m][j].is_some());
        let tail_nonzero = (j + 1..n).any(|m| x[m] != 0);
        let overflow = x[j] + e >= self.orders[j];
        if !tail_nonzero || (!blocked && !overflow) {
            x[j] += e;
            if x[j] >= self.orders[j] {
                x[j] -= self.orders[j];
                let w = &self.powers[j];
                self.mul_into(x, w);
            }
            return;
        }
        let mut tail = vec![0; n];
        for m in j + 1..n {
            tail[m] = std::mem::take(&mut x[m]);
        }
        if blocked {
            for _ in 0..e {
                tail = self.apply_conj(&tail, j);
            }
        }
        x[j] += e;
        if x[j] >= self.orders[j] {
            x[j] -= self.orders[j];
            let w = &self.powers[j];
            self.mul_into(x, w);
        }
        self.mul_into(x, &tail);
    }

    fn apply_conj(&self, t: &[u64], j: usize) -> Vec<u64> {
        let mut res = vec![0; self.len()];
        for (m, &e) in t.iter().enumerate().skip(j + 1) {
            if e == 0 {
                continue;
            }
            match &self.conj[m][j] {
                None => self.mul_gen_pow(&mut res, m, e),
                Some(img) => {
                    let p = self.pow_u64(img, e);
                    self.mul_into(&mut res, &p);
                }
            }
        }
        res
    }

    pub fn identity_vec(&self) -> Vec<u64> {
        vec![0; self.len()]
    }

    pub fn inv(&self, a: &[u64]) -> Vec<u64> {
        // right-multiply a by generator powers until it vanishes
        let mut y = a.to_vec();
        let mut x = self.identity_vec();
        for i in 0..self.len() {
            if y[i] != 0 {
                let e = self.orders[i] - y[i];
                self.mul_gen_pow(&mut y, i, e);
                self.mul_gen_pow(&mut x, i, e);
            }
        }
        debug_assert!(y.iter().all(|&e| e == 0));
        x
    }

    pub fn pow_u64(&self, a: &[u64], mut n: u64) -> Vec<u64> {
        let mut base = a.to_vec();
        let mut acc = self.identity_vec();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn pow_big(&self, a: &[u64], n: &BigInt) -> Vec<u64> {
        let base = if n.is_negative() { self.inv(a) } else { a.to_vec() };
        let mut acc = self.identity_vec();
        let mut sq = base;
        let mut m = n.magnitude().clone();
        while !m.is_zero() {
            if m.bit(0) {
                acc = self.mul(&acc, &sq);
            }
            m >>= 1;
            if !m.is_zero() {
                sq = self.mul(&sq, &sq);
            }
        }
        acc
    }

    pub fn comm(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.mul(&self.inv(&ba), &ab)
    }

    /// Order of an element of a `p`-group.
    pub fn element_order(&self, a: &[u64], p: u64) -> BigInt {
        let mut order = BigInt::from(1);
        let mut b = a.to_vec();
        while b.iter().any(|&e| e != 0) {
            b = self.pow_u64(&b, p);
            order *= p;
        }
        order
    }

    /// Runs the standard overlap tests. With `sample = Some(s)`, at most `s`
    /// randomly chosen generator triples are tested for associativity.
    pub fn check_consistency(&self, sample: Option<usize>) -> Result<usize, ConsistencyWitness> {
        let n = self.len();
        let mut run = 0;
        let g = |i: usize| self.unit(i, 1);
        let fail = |test, generators| Err(ConsistencyWitness { test, generators });
        // g_i^{d_i} g_i = g_i g_i^{d_i}
        for i in 0..n {
            run += 1;
            if self.mul(&self.powers[i], &g(i)) != self.mul(&g(i), &self.powers[i]) {
                return fail("power-power", vec![i, i, i]);
            }
        }
        for j in 0..n {
            for i in 0..j {
                run += 2;
                // (g_j^{d_j}) g_i = g_j^{d_j - 1} (g_j g_i)
                let lhs = self.mul(&self.powers[j], &g(i));
                let rhs = self.mul(&self.unit(j, self.orders[j] - 1), &self.swap(j, i));
                if lhs != rhs {
                    return fail("power-conjugate", vec![j, j, i]);
                }
                // g_j (g_i^{d_i}) = (g_j g_i) g_i^{d_i - 1}
                let lhs = self.mul(&g(j), &self.powers[i]);
                let rhs = self.mul(&self.swap(j, i), &self.unit(i, self.orders[i] - 1));
                if lhs != rhs {
                    return fail("conjugate-power", vec![j, i, i]);
                }
            }
        }
        let mut triples = Vec::new();
        for k in 0..n {
            for j in 0..k {
                for i in 0..j {
                    triples.push((k, j, i));
                }
            }
        }
        if let Some(s) = sample {
            if triples.len() > s {
                let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
                triples = (0..s).map(|_| triples[rng.gen_range(0..triples.len())]).collect();
            }
        }
        for (k, j, i) in triples {
            run += 1;
            let lhs = self.mul(&self.swap(k, j), &g(i));
            let rhs = self.mul(&g(k), &self.swap(j, i));
            if lhs != rhs {
                return fail("associativity", vec![k, j, i]);
            }
        }
        Ok(run)
    }

    /// Decodes a mixed-radix index into a normal form (last generator fastest).
    pub fn nth_element(&self, mut idx: u64) -> Vec<u64> {
        let mut v = self.identity_vec();
        for i in (0..self.len()).rev() {
            v[i] = idx % self.orders[i];
            idx /= self.orders[i];
        }
        v
    }

    pub fn order_u64(&self) -> Option<u64> {
        self.order().to_u64()
    }
}

impl Group for PcCollector {
    type Element = Vec<u64>;

    fn identity(&self) -> Vec<u64> {
        self.identity_vec()
    }

    fn generator(&self, index: usize) -> Vec<u64> {
        self.generators[index - 1].clone()
    }

    fn multiply(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        self.mul(a, b)
    }

    fn inverse(&self, a: &Vec<u64>) -> Vec<u64> {
        self.inv(a)
    }

    fn power(&self, a: &Vec<u64>, n: &BigInt) -> Vec<u64> {
        self.pow_big(a, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Cyclic group of order 4 as g1 (order 2), g2 (order 2) with g1^2 = g2.
    fn c4() -> PcCollector {
        PcCollector::new(
            vec!["a".into(), "b".into()],
            vec![2, 2],
            vec![vec![0, 1], vec![0, 0]],
            vec![vec![], vec![None]],
            vec![vec![1, 0]],
        )
    }

    #[test]
    fn cyclic_of_order_four() {
        let c = c4();
        assert!(c.check_consistency(None).is_ok());
        let a = c.unit(0, 1);
        assert_eq!(c.mul(&a, &a), vec![0, 1]);
        assert_eq!(c.pow_u64(&a, 4), vec![0, 0]);
        assert_eq!(c.inv(&a), vec![1, 1]);
        assert_eq!(c.element_order(&a, 2), BigInt::from(4));
        assert_eq!(c.order(), BigInt::from(4));
    }

    #[test]
    fn inconsistent_power_relation_is_caught() {
        let bad = PcCollector::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![2, 2, 2],
            vec![vec![0, 1, 0], vec![0, 0, 0], vec![0, 0, 0]],
            // a^2 = b but b^a = b c, so a a^2 != a^2 a
            vec![vec![], vec![Some(vec![0, 1, 1])], vec![None, None]],
            vec![vec![1, 0, 0]],
        );
        let w = bad.check_consistency(None).unwrap_err();
        assert_eq!(w.test, "power-power");
        assert_eq!(w.generators, vec![0, 0, 0]);
    }
}
