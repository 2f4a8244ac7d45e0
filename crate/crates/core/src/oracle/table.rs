//! Exhaustive enumeration and multiplication-table checks.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::nilprod::{max_enum, GroupError, PcElement, PcPresentation};
use crate::term::Group;

/// Groups up to this order have every triple checked for associativity.
pub const ALL_TRIPLES_MAX: usize = 1 << 8;

/// Largest order for which the whole multiplication table is materialized.
pub const TABLE_MAX: usize = 1 << 12;

/// Random third factors per pair above [`ALL_TRIPLES_MAX`].
const SAMPLES_PER_PAIR: usize = 2;

/// Direct triple samples when the table would be too large.
const DIRECT_SAMPLES: usize = 1 << 16;

/// All coefficient vectors `0 <= beta_i < N_i`, in lexicographic order.
pub fn enumerate(g: &PcPresentation) -> Result<Vec<PcElement>, GroupError> {
    let size = g.order();
    let cap = max_enum();
    if size > BigInt::from(cap) {
        return Err(GroupError::CapExceeded { size, cap });
    }
    let moduli = &g.basis().moduli;
    let mut out = vec![PcElement(vec![0; moduli.len()])];
    for (s, &n) in moduli.iter().enumerate() {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..n).map(move |b| {
                    let mut w = v.0.clone();
                    w[s] = b;
                    PcElement(w)
                })
            })
            .collect();
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct TableReport {
    pub order: u64,
    pub triples: u64,
    pub passed: bool,
    pub witness: Option<String>,
}

/// Checks closure, associativity, the identity and inverses on the full
/// multiplication table of `g`.
pub fn full_table_check(g: &PcPresentation) -> Result<TableReport, GroupError> {
    let elems = enumerate(g)?;
    let n = elems.len();
    let index: HashMap<&PcElement, usize> = elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let mut report = TableReport { order: n as u64, triples: 0, passed: true, witness: None };
    let fail = |mut r: TableReport, w: String| {
        r.passed = false;
        r.witness = Some(w);
        Ok(r)
    };
    let show = |i: usize| g.format_element(&elems[i]);
    let mul = |a: usize, b: usize| -> Result<usize, String> {
        let c = g.multiply(&elems[a], &elems[b]).map_err(|e| e.to_string())?;
        index.get(&c).copied().ok_or_else(|| format!("{:?} is not a reduced vector", c.0))
    };

    if n > TABLE_MAX {
        let mut rng = ChaCha8Rng::seed_from_u64(0x7ab1e);
        for _ in 0..DIRECT_SAMPLES {
            let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
            report.triples += 1;
            let lhs = mul(a, b).and_then(|ab| mul(ab, c));
            let rhs = mul(b, c).and_then(|bc| mul(a, bc));
            match (lhs, rhs) {
                (Ok(x), Ok(y)) if x == y => {}
                (Err(e), _) | (_, Err(e)) => return fail(report, e),
                _ => return fail(report, format!("({}, {}, {}) is not associative", show(a), show(b), show(c))),
            }
        }
        return Ok(report);
    }

    let mut table = vec![0usize; n * n];
    for a in 0..n {
        for b in 0..n {
            match mul(a, b) {
                Ok(c) => table[a * n + b] = c,
                Err(e) => return fail(report, format!("closure: {} * {}: {e}", show(a), show(b))),
            }
        }
    }
    let t = |a: usize, b: usize| table[a * n + b];
    let identities: Vec<usize> = (0..n).filter(|&e| (0..n).all(|a| t(e, a) == a && t(a, e) == a)).collect();
    if identities.len() != 1 {
        return fail(report, format!("{} identity elements", identities.len()));
    }
    let e = identities[0];
    for a in 0..n {
        let inverses = (0..n).filter(|&b| t(a, b) == e).count();
        if inverses != 1 || (0..n).filter(|&b| t(b, a) == e).count() != 1 {
            return fail(report, format!("{} does not have a unique inverse", show(a)));
        }
    }
    let check = |a: usize, b: usize, c: usize, report: &mut TableReport| {
        report.triples += 1;
        t(t(a, b), c) == t(a, t(b, c))
    };
    if n <= ALL_TRIPLES_MAX {
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if !check(a, b, c, &mut report) {
                        return fail(report, format!("({}, {}, {}) is not associative", show(a), show(b), show(c)));
                    }
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x7ab1e);
        for a in 0..n {
            for b in 0..n {
                for _ in 0..SAMPLES_PER_PAIR {
                    let c = rng.gen_range(0..n);
                    if !check(a, b, c, &mut report) {
                        return fail(report, format!("({}, {}, {}) is not associative", show(a), show(b), show(c)));
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Whether `x_i -> y_i` on the first `r` generators extends to an isomorphism
/// between the subgroups they generate, decided by breadth-first search over
/// words. Returns the common subgroup order on success.
pub fn generator_isomorphism<A, B>(a: &A, b: &B, r: usize, limit: usize) -> Option<usize>
where
    A: Group,
    B: Group,
    A::Element: Eq + Hash,
    B::Element: Eq + Hash,
{
    let mut forward: HashMap<A::Element, B::Element> = HashMap::new();
    let mut backward: HashMap<B::Element, A::Element> = HashMap::new();
    let gens: Vec<(A::Element, B::Element)> = (1..=r).map(|i| (a.generator(i), b.generator(i))).collect();
    let mut queue = VecDeque::new();
    forward.insert(a.identity(), b.identity());
    backward.insert(b.identity(), a.identity());
    queue.push_back((a.identity(), b.identity()));
    while let Some((x, y)) = queue.pop_front() {
        for (ga, gb) in &gens {
            let (xa, yb) = (a.multiply(&x, ga), b.multiply(&y, gb));
            match (forward.get(&xa), backward.get(&yb)) {
                (Some(img), Some(pre)) => {
                    if *img != yb || *pre != xa {
                        return None;
                    }
                }
                (None, None) => {
                    if forward.len() >= limit {
                        return None;
                    }
                    forward.insert(xa.clone(), yb.clone());
                    backward.insert(yb.clone(), xa.clone());
                    queue.push_back((xa, yb));
                }
                _ => return None,
            }
        }
    }
    // a well-defined bijection on the Cayley graphs; check the full table
    let pairs: Vec<(A::Element, B::Element)> = forward.into_iter().collect();
    for (x, fx) in &pairs {
        for (z, fz) in &pairs {
            if backward.get(&b.multiply(fx, fz)) != Some(&a.multiply(x, z)) {
                return None;
            }
        }
    }
    Some(pairs.len())
}
