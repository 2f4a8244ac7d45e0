//! Free-group words evaluated in truncated non-commutative power series.
//!
//! `x_i -> 1 + X_i` embeds `F/F_{k+1}` faithfully into `Z<<X>>` modulo terms of
//! degree above `k`. Hall coordinates are then recovered layer by layer: the
//! lowest non-constant part of an element of `F_w` is the Lie polynomial
//! `sum e_c lie(c)` over basic commutators of weight `w`, which is solved
//! exactly for the `e_c`. Nothing here touches the collector.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::hall::{BasicCommutator, BasisTable};
use crate::term::{Group, WordExpr};

/// Truncated power series; coefficients grouped by degree, monomials of
/// degree `d` indexed as base-`r` numerals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<BigInt>,
}

#[derive(Debug, Clone)]
pub struct MagnusGroup {
    r: usize,
    k: usize,
    offsets: Vec<usize>,
}

impl MagnusGroup {
    pub fn new(r: usize, k: usize) -> Self {
        let mut offsets = vec![0];
        let mut size = 1usize;
        for _ in 0..=k {
            let last = *offsets.last().unwrap();
            offsets.push(last + size);
            size *= r;
        }
        MagnusGroup { r, k, offsets }
    }

    fn len(&self) -> usize {
        self.offsets[self.k + 1]
    }

    fn deg_len(&self, d: usize) -> usize {
        self.offsets[d + 1] - self.offsets[d]
    }

    fn zero(&self) -> Series {
        Series { coeffs: vec![BigInt::zero(); self.len()] }
    }

    fn add(&self, a: &Series, b: &Series) -> Series {
        Series { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect() }
    }

    fn mul(&self, a: &Series, b: &Series) -> Series {
        let mut c = self.zero();
        for da in 0..=self.k {
            for ia in 0..self.deg_len(da) {
                let x = &a.coeffs[self.offsets[da] + ia];
                if x.is_zero() {
                    continue;
                }
                for db in 0..=self.k - da {
                    let width = self.deg_len(db);
                    let base = self.offsets[da + db] + ia * width;
                    for ib in 0..width {
                        let y = &b.coeffs[self.offsets[db] + ib];
                        if !y.is_zero() {
                            c.coeffs[base + ib] += x * y;
                        }
                    }
                }
            }
        }
        c
    }

    /// Degree-`d` part as a dense vector of length `r^d`.
    pub fn homogeneous(&self, s: &Series, d: usize) -> Vec<BigInt> {
        s.coeffs[self.offsets[d]..self.offsets[d + 1]].to_vec()
    }

    /// `lie([a,b]) = lie(a) lie(b) - lie(b) lie(a)`, homogeneous of degree `wt(c)`.
    pub fn lie_polynomial(&self, c: &BasicCommutator) -> Vec<BigInt> {
        match (c.left(), c.right()) {
            (Some(a), Some(b)) => {
                let (pa, pb) = (self.lie_polynomial(a), self.lie_polynomial(b));
                let (la, lb) = (pa.len(), pb.len());
                let mut out = vec![BigInt::zero(); la * lb];
                for (i, x) in pa.iter().enumerate() {
                    for (j, y) in pb.iter().enumerate() {
                        out[i * lb + j] += x * y;
                        out[j * la + i] -= x * y;
                    }
                }
                out
            }
            _ => {
                let mut out = vec![BigInt::zero(); self.r];
                out[c.as_generator().unwrap() - 1] = BigInt::one();
                out
            }
        }
    }

    pub fn basic_series(&self, c: &BasicCommutator) -> Series {
        match (c.left(), c.right()) {
            (Some(a), Some(b)) => self.commutator(&self.basic_series(a), &self.basic_series(b)),
            _ => self.generator(c.as_generator().unwrap()),
        }
    }

    /// Hall coordinates of `s` over `basis` (which must be on the same `r`, `k`).
    pub fn coordinates(&self, s: &Series, basis: &BasisTable) -> Vec<BigInt> {
        assert_eq!((basis.r(), basis.k()), (self.r, self.k));
        let mut coords = vec![BigInt::zero(); basis.len()];
        let mut rest = s.clone();
        for w in 1..=self.k {
            let range = basis.weight_range(w);
            if range.is_empty() {
                continue;
            }
            let target = self.homogeneous(&rest, w);
            let columns: Vec<Vec<BigInt>> = range.clone().map(|i| self.lie_polynomial(basis.get(i))).collect();
            let sol = solve_integral(&columns, &target).expect("layer is a Lie polynomial in the basis");
            let mut layer = self.identity();
            for (i, e) in range.clone().zip(&sol) {
                coords[i] = e.clone();
                if !e.is_zero() {
                    layer = self.multiply(&layer, &self.power(&self.basic_series(basis.get(i)), e));
                }
            }
            rest = self.multiply(&self.inverse(&layer), &rest);
        }
        coords
    }
}

/// Solves `sum x_j columns[j] = target` over the integers, exactly.
fn solve_integral(columns: &[Vec<BigInt>], target: &[BigInt]) -> Option<Vec<BigInt>> {
    let n = columns.len();
    let m = target.len();
    let mut rows: Vec<Vec<BigRational>> = (0..m)
        .map(|i| {
            let mut row: Vec<BigRational> = columns.iter().map(|c| BigRational::from_integer(c[i].clone())).collect();
            row.push(BigRational::from_integer(target[i].clone()));
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..m).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                for j in 0..=n {
                    let d = &f * &rows[r][j];
                    rows[i][j] -= d;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[n].is_zero()) || pivots.len() < n {
        return None;
    }
    let mut sol = vec![BigInt::zero(); n];
    for (i, &col) in pivots.iter().enumerate() {
        let v = &rows[i][n];
        if !v.is_integer() {
            return None;
        }
        sol[col] = v.to_integer();
    }
    Some(sol)
}

impl Group for MagnusGroup {
    type Element = Series;

    fn identity(&self) -> Series {
        let mut s = self.zero();
        s.coeffs[0] = BigInt::one();
        s
    }

    fn generator(&self, index: usize) -> Series {
        let mut s = self.identity();
        if self.k >= 1 {
            s.coeffs[self.offsets[1] + index - 1] = BigInt::one();
        }
        s
    }

    fn multiply(&self, a: &Series, b: &Series) -> Series {
        self.mul(a, b)
    }

    fn inverse(&self, a: &Series) -> Series {
        // a = 1 + y, a^-1 = sum (-y)^n
        let mut neg_y = a.clone();
        neg_y.coeffs[0] = BigInt::zero();
        for c in neg_y.coeffs.iter_mut() {
            *c = -&*c;
        }
        let mut acc = self.identity();
        let mut term = self.identity();
        for _ in 0..self.k {
            term = self.mul(&term, &neg_y);
            acc = self.add(&acc, &term);
        }
        acc
    }
}

/// A reduced word in the free group: `(generator, +1 | -1)` letters.
pub type FreeWord = Vec<(usize, i8)>;

/// Expands an expression into a freely reduced word; `None` when the
/// expansion would exceed `max_len` letters.
pub fn free_reduce(e: &WordExpr, max_len: usize) -> Option<FreeWord> {
    fn push(w: &mut FreeWord, letter: (usize, i8)) {
        if w.last() == Some(&(letter.0, -letter.1)) {
            w.pop();
        } else {
            w.push(letter);
        }
    }
    fn concat(mut a: FreeWord, b: &FreeWord) -> FreeWord {
        for &l in b {
            push(&mut a, l);
        }
        a
    }
    fn invert(w: &FreeWord) -> FreeWord {
        w.iter().rev().map(|&(g, s)| (g, -s)).collect()
    }
    fn go(e: &WordExpr, max_len: usize) -> Option<FreeWord> {
        let w = match e {
            WordExpr::Identity => Vec::new(),
            WordExpr::Generator(g) => vec![(g.0, 1)],
            WordExpr::Product(v) => {
                let mut acc = Vec::new();
                for f in v {
                    acc = concat(acc, &go(f, max_len)?);
                }
                acc
            }
            WordExpr::Power(b, n) => {
                let base = go(b, max_len)?;
                let base = if n.is_negative() { invert(&base) } else { base };
                let times = n.magnitude().to_usize()?;
                if times.saturating_mul(base.len()) > max_len * 2 + 2 {
                    return None;
                }
                let mut acc = Vec::new();
                for _ in 0..times {
                    acc = concat(acc, &base);
                }
                acc
            }
            WordExpr::Commutator(v) => {
                let mut acc = go(&v[0], max_len)?;
                for t in &v[1..] {
                    let b = go(t, max_len)?;
                    let mut c = invert(&acc);
                    c = concat(c, &invert(&b));
                    c = concat(c, &acc);
                    acc = concat(c, &b);
                }
                acc
            }
        };
        (w.len() <= max_len).then_some(w)
    }
    go(e, max_len)
}

/// Hall coordinates of an expression computed without the collector.
pub fn naive_coordinates(e: &WordExpr, basis: &BasisTable, max_len: usize) -> Option<Vec<BigInt>> {
    let word = free_reduce(e, max_len)?;
    let g = MagnusGroup::new(basis.r(), basis.k());
    let mut s = g.identity();
    for (i, sign) in word {
        let x = g.generator(i);
        let letter = if sign > 0 { x } else { g.inverse(&x) };
        s = g.multiply(&s, &letter);
    }
    Some(g.coordinates(&s, basis))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hall::generate_basis;
    use crate::term::parse_expr;

    #[test]
    fn free_reduction() {
        let e = parse_expr("x1 x2 x2^-1 x1^-1 x3", 3).unwrap();
        assert_eq!(free_reduce(&e, 100).unwrap(), vec![(3, 1)]);
        let c = parse_expr("[x2,x1]", 2).unwrap();
        assert_eq!(free_reduce(&c, 100).unwrap(), vec![(2, -1), (1, -1), (2, 1), (1, 1)]);
    }

    #[test]
    fn swap_coordinates() {
        let b = generate_basis(2, 2).unwrap();
        let e = parse_expr("x2 x1", 2).unwrap();
        let c = naive_coordinates(&e, &b, 100).unwrap();
        assert_eq!(c, vec![BigInt::from(1), BigInt::from(1), BigInt::from(1)]);
    }

    #[test]
    fn inverse_is_inverse() {
        let g = MagnusGroup::new(2, 4);
        let a = g.multiply(&g.generator(1), &g.generator(2));
        assert_eq!(g.multiply(&a, &g.inverse(&a)), g.identity());
    }
}
