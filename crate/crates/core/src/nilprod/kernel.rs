//! Normal closure of power relators in a free nilpotent group, kept as an
//! induced triangular sequence, and the finite presentation of the quotient.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::collect::{FreeNilElement, FreeNilpotentGroup};
use crate::term::Group;

use super::pc::PcCollector;
use super::GroupError;

pub(crate) struct Kernel<'a> {
    fg: &'a FreeNilpotentGroup,
    table: Vec<Option<FreeNilElement>>,
}

fn leading(g: &FreeNilElement) -> Option<usize> {
    g.dense().iter().position(|e| !e.is_zero())
}

impl<'a> Kernel<'a> {
    /// Normal closure of `relators` in `fg`.
    pub(crate) fn closure(fg: &'a FreeNilpotentGroup, relators: &[FreeNilElement]) -> Self {
        let mut k = Kernel { fg, table: vec![None; fg.basis().len()] };
        let mut queue: VecDeque<FreeNilElement> = relators.iter().cloned().collect();
        loop {
            while let Some(g) = queue.pop_front() {
                k.sift(g, &mut queue);
            }
            // recheck all closure conditions against the final table
            k.closure_conditions(&mut queue);
            if queue.is_empty() {
                break;
            }
        }
        k
    }

    fn closure_conditions(&mut self, queue: &mut VecDeque<FreeNilElement>) {
        let fg = self.fg;
        let entries: Vec<FreeNilElement> = self.table.iter().flatten().cloned().collect();
        let mut conjugators = Vec::new();
        for i in 1..=fg.r() {
            let x = fg.generator(i);
            conjugators.push(fg.inverse(&x));
            conjugators.push(x);
        }
        for u in &entries {
            conjugators.push(fg.inverse(u));
            conjugators.push(u.clone());
        }
        for u in &entries {
            for c in &conjugators {
                let v = fg.multiply(&fg.multiply(&fg.inverse(c), u), c);
                if !self.reduce_full(&v).is_identity() {
                    queue.push_back(v);
                }
            }
        }
    }

    fn sift(&mut self, mut g: FreeNilElement, queue: &mut VecDeque<FreeNilElement>) {
        let fg = self.fg;
        while let Some(i) = leading(&g) {
            let Some(h) = self.table[i].clone() else {
                if g.exponent(i).is_negative() {
                    g = fg.inverse(&g);
                }
                self.table[i] = Some(g);
                return;
            };
            let d = h.exponent(i).clone();
            let e = g.exponent(i).clone();
            if (&e % &d).is_zero() {
                g = fg.multiply(&g, &fg.power(&h, &-(&e / &d)));
                continue;
            }
            let egcd = d.extended_gcd(&e);
            let merged = fg.multiply(&fg.power(&h, &egcd.x), &fg.power(&g, &egcd.y));
            debug_assert_eq!(merged.exponent(i), &egcd.gcd);
            self.table[i] = Some(merged);
            queue.push_back(h);
            queue.push_back(g);
            return;
        }
    }

    /// Reduces every leading exponent into `[0, d_i)`; the canonical coset representative.
    fn reduce_full(&self, g: &FreeNilElement) -> FreeNilElement {
        let fg = self.fg;
        let mut g = g.clone();
        for i in 0..g.dense().len() {
            let Some(h) = &self.table[i] else { continue };
            let q = g.exponent(i).div_floor(h.exponent(i));
            if !q.is_zero() {
                g = fg.multiply(&g, &fg.power(h, &-q));
            }
        }
        g
    }

    pub(crate) fn relative_orders(&self) -> Result<Vec<BigInt>, GroupError> {
        self.table
            .iter()
            .map(|t| t.as_ref().map(|h| h.exponent(leading(h).unwrap()).clone()).ok_or(GroupError::Infinite))
            .collect()
    }

    /// The finite presentation of `fg / K` on the positions with relative order above one.
    pub(crate) fn presentation(&self) -> Result<PcCollector, GroupError> {
        let fg = self.fg;
        let orders = self.relative_orders()?;
        let keep: Vec<usize> = (0..orders.len()).filter(|&i| !orders[i].is_one()).collect();
        let mut slot = vec![usize::MAX; orders.len()];
        for (n, &i) in keep.iter().enumerate() {
            slot[i] = n;
        }
        let project = |g: &FreeNilElement| -> Result<Vec<u64>, GroupError> {
            let red = self.reduce_full(g);
            let mut v = vec![0u64; keep.len()];
            for (i, e) in red.dense().iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                if slot[i] == usize::MAX {
                    return Err(GroupError::Inconsistent(format!("residue at trivial position {i}")));
                }
                v[slot[i]] = e.to_u64().ok_or(GroupError::Overflow)?;
            }
            Ok(v)
        };
        let mut names = Vec::new();
        let mut rel = Vec::new();
        let mut powers = Vec::new();
        let mut conj = Vec::new();
        for (n, &i) in keep.iter().enumerate() {
            let g = fg.basis_element(i);
            names.push(fg.basis().get(i).to_string());
            rel.push(orders[i].to_u64().ok_or(GroupError::Overflow)?);
            powers.push(project(&fg.power(&g, &orders[i]))?);
            let mut row = Vec::with_capacity(n);
            for &j in &keep[..n] {
                let h = fg.basis_element(j);
                let c = fg.multiply(&fg.multiply(&fg.inverse(&h), &g), &h);
                row.push(Some(project(&c)?));
            }
            conj.push(row);
        }
        let generators = (1..=fg.r()).map(|i| project(&fg.generator(i))).collect::<Result<_, _>>()?;
        Ok(PcCollector::new(names, rel, powers, conj, generators))
    }
}
