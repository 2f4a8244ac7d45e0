//! Exact model of the class-`k` quotient of `<x, y | x^2, y^2>`.
//!
//! That quotient is the dihedral group of order `2^(k+1)`, realised here as
//! the affine maps `t -> s t + b` of `Z/2^k` with `s = +-1`; `x` is `t -> -t`
//! and `y` is `t -> 1 - t`, so `xy` is the translation `t -> t + 1`.

use thiserror::Error;

use crate::term::Group;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("the dihedral model covers alpha1 = alpha2 = 1 only (got {0}, {1})")]
    OutOfRange(u32, u32),
    #[error("class must be between 1 and 30")]
    BadClass,
}

/// `t -> sign * t + shift` modulo `2^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Affine {
    pub sign: i8,
    pub shift: u64,
}

#[derive(Debug, Clone)]
pub struct DihedralModel {
    k: u32,
    modulus: u64,
}

impl DihedralModel {
    pub fn new(alpha1: u32, alpha2: u32, k: u32) -> Result<Self, ModelError> {
        if alpha1 != 1 || alpha2 != 1 {
            return Err(ModelError::OutOfRange(alpha1, alpha2));
        }
        if k == 0 || k > 30 {
            return Err(ModelError::BadClass);
        }
        Ok(DihedralModel { k, modulus: 1 << k })
    }

    pub fn class(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u64 {
        2 * self.modulus
    }

    /// All elements, sorted.
    pub fn elements(&self) -> Vec<Affine> {
        let mut v = Vec::with_capacity(self.order() as usize);
        for sign in [-1i8, 1] {
            for shift in 0..self.modulus {
                v.push(Affine { sign, shift });
            }
        }
        v
    }

    /// Translation `z^n` where `z = xy`.
    pub fn rotation(&self, n: u64) -> Affine {
        Affine { sign: 1, shift: n % self.modulus }
    }

    pub fn center(&self) -> Vec<Affine> {
        let gens = [self.generator(1), self.generator(2)];
        self.elements()
            .into_iter()
            .filter(|a| gens.iter().all(|g| self.multiply(a, g) == self.multiply(g, a)))
            .collect()
    }
}

impl Group for DihedralModel {
    type Element = Affine;

    fn identity(&self) -> Affine {
        Affine { sign: 1, shift: 0 }
    }

    fn generator(&self, index: usize) -> Affine {
        match index {
            1 => Affine { sign: -1, shift: 0 },
            2 => Affine { sign: -1, shift: 1 },
            _ => panic!("the dihedral model has two generators"),
        }
    }

    /// Apply `a`, then `b`.
    fn multiply(&self, a: &Affine, b: &Affine) -> Affine {
        let m = self.modulus;
        let shifted = if b.sign > 0 { a.shift } else { (m - a.shift) % m };
        Affine { sign: a.sign * b.sign, shift: (shifted + b.shift) % m }
    }

    fn inverse(&self, a: &Affine) -> Affine {
        // t = s u + b  =>  u = s t - s b
        let m = self.modulus;
        let shift = if a.sign > 0 { (m - a.shift) % m } else { a.shift };
        Affine { sign: a.sign, shift }
    }
}
