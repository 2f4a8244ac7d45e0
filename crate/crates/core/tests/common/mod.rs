#![allow(dead_code)]

use nilcap::term::WordExpr;
use rand::Rng;

/// Random expression over `x1..xr` with nesting depth at most `depth`.
pub fn random_word<R: Rng>(rng: &mut R, r: usize, depth: usize) -> WordExpr {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        let g = WordExpr::generator(rng.gen_range(1..=r));
        return if rng.gen_bool(0.3) { WordExpr::power(g, rng.gen_range(-3i64..=3)) } else { g };
    }
    match rng.gen_range(0..4) {
        0 => WordExpr::power(random_word(rng, r, depth - 1), rng.gen_range(-3i64..=3)),
        1 | 2 => {
            let n = rng.gen_range(2..=3);
            WordExpr::Product((0..n).map(|_| random_word(rng, r, depth - 1)).collect())
        }
        _ => {
            let n = rng.gen_range(2..=3);
            WordExpr::Commutator((0..n).map(|_| random_word(rng, r, depth - 1)).collect())
        }
    }
}
