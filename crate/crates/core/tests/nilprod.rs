mod common;

use std::collections::HashSet;

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use nilcap::collect::FreeNilpotentGroup;
use nilcap::hall::BasicCommutator;
use nilcap::nilprod::{
    binom_reduction, build_group, cache, modulus_table, Distinguished, GroupError, GroupSpec, Level, PcElement,
    PcPresentation,
};
use nilcap::oracle::dihedral::DihedralModel;
use nilcap::oracle::table::{enumerate, full_table_check, generator_isomorphism};
use nilcap::term::Group;

fn group(p: u64, k: usize, alphas: &[u32]) -> PcPresentation {
    build_group(&GroupSpec::new(p, k, alphas.to_vec()).unwrap()).unwrap()
}

fn moduli(p: u64, k: usize, alphas: &[u32]) -> Vec<(String, u64)> {
    let b = modulus_table(&GroupSpec::new(p, k, alphas.to_vec()).unwrap()).unwrap();
    b.entries.iter().map(|e| e.name(p)).zip(b.moduli.iter().copied()).collect()
}

/// Closure of a set of elements under multiplication.
fn closure(g: &PcPresentation, gens: &[PcElement]) -> HashSet<PcElement> {
    let mut seen = HashSet::from([g.identity()]);
    let mut frontier = vec![g.identity()];
    while let Some(a) = frontier.pop() {
        for s in gens {
            let b = g.multiply(&a, s).unwrap();
            if seen.insert(b.clone()) {
                frontier.push(b);
            }
        }
    }
    seen
}

#[test]
fn modulus_tables() {
    let t = moduli(2, 3, &[1, 1]);
    let expect = [("x1", 2), ("x2", 2), ("[x2,x1]", 4), ("[x2,x1^2]", 1), ("[x2^2,x1]", 1)];
    assert_eq!(t, expect.iter().map(|(n, m)| (n.to_string(), *m)).collect::<Vec<_>>());
    assert_eq!(moduli(2, 3, &[1, 2])[4], ("[x2^2,x1]".to_string(), 2));
    assert!(moduli(3, 3, &[1, 1]).iter().all(|(_, n)| *n == 3));
    assert_eq!(moduli(3, 3, &[1, 1]).len(), 5);
    let e = modulus_table(&GroupSpec { p: 2, k: 4, alphas: vec![1, 1] }).unwrap_err();
    assert!(matches!(e, GroupError::ClassTooLarge { .. }));
}

#[test]
fn invalid_specs() {
    assert!(GroupSpec::new(4, 2, vec![1]).is_err());
    assert!(GroupSpec::new(3, 2, vec![2, 1]).is_err());
    assert!(GroupSpec::new(3, 2, vec![0, 1]).is_err());
    assert!(GroupSpec::new(3, 5, vec![1, 1]).is_err());
    assert!(GroupSpec::new(3, 0, vec![1, 1]).is_err());
    assert!(GroupSpec::new(3, 4, vec![1, 1]).is_ok());
}

#[test]
fn group_orders() {
    assert_eq!(group(2, 3, &[1, 1]).order(), BigInt::from(16));
    assert_eq!(group(3, 3, &[1, 1]).order(), BigInt::from(243));
    assert_eq!(group(2, 2, &[1, 1]).order(), BigInt::from(8));
    assert_eq!(group(2, 3, &[1, 2]).order(), BigInt::from(64));
    // direct product and cyclic group
    assert_eq!(group(3, 1, &[1, 2]).order(), BigInt::from(27));
    assert_eq!(group(5, 3, &[2]).order(), BigInt::from(25));
}

#[test]
fn normal_forms() {
    let g = group(2, 3, &[1, 1]);
    assert!(g.parse("x1^2").unwrap().is_identity());
    assert!(g.parse("[x2,x1]^4").unwrap().is_identity());
    assert!(!g.parse("[x2,x1]^2").unwrap().is_identity());
    let w = g.parse("x2 x1 x2^-1 x1^-1").unwrap();
    assert_eq!(w, g.parse("[x2^-1,x1^-1]").unwrap());
    assert!(matches!(g.parse("x3"), Err(GroupError::Parse(_))));
    // the same element through different words
    assert_eq!(g.parse("(x1 x2)^8").unwrap(), g.identity());
    assert_eq!(g.parse("x1 x2 x1").unwrap(), g.parse("x2 (x2 x1)^2").unwrap());
}

#[test]
fn element_operations() {
    let g = group(2, 3, &[1, 2]);
    let a = g.parse("x1 x2 [x2,x1]^3").unwrap();
    assert_eq!(g.multiply(&a, &g.identity()).unwrap(), a);
    let x2 = g.generator_element(2).unwrap();
    assert!(g.power(&x2, &BigInt::from(4)).unwrap().is_identity());
    assert_eq!(g.multiply(&a, &g.inverse(&a).unwrap()).unwrap(), g.identity());
    assert_eq!(g.power(&a, &BigInt::from(-1)).unwrap(), g.inverse(&a).unwrap());
    let text = g.format_element(&a);
    assert_eq!(g.parse(&text).unwrap(), a);
    assert!(g.multiply(&PcElement(vec![2, 0, 0, 0, 0]), &a).is_err());
}

#[test]
fn element_orders() {
    let g = group(2, 3, &[1, 1]);
    assert_eq!(g.order_of(&g.identity()).unwrap(), BigInt::from(1));
    assert_eq!(g.order_of(&g.parse("[x2,x1]").unwrap()).unwrap(), BigInt::from(4));
    let h = group(2, 3, &[1, 2]);
    let s = h.basis().entries.iter().position(|e| matches!(e, Distinguished::VDoublePrime { .. })).unwrap();
    assert_eq!(h.order_of(&h.distinguished_element(s).unwrap()).unwrap(), BigInt::from(2));
}

#[test]
fn distinguished_orders_equal_moduli() {
    for (p, k, a) in [(2, 3, vec![1, 1]), (2, 3, vec![1, 2]), (2, 3, vec![2, 3]), (3, 4, vec![1, 2]), (3, 3, vec![1, 2])] {
        let g = group(p, k, &a);
        for s in 0..g.len() {
            let order = g.order_of(&g.distinguished_element(s).unwrap()).unwrap();
            assert_eq!(order, BigInt::from(g.basis().moduli[s]), "{} in p={p} k={k} {a:?}", g.basis().entries[s].name(p));
        }
    }
}

#[test]
fn commutator_orders_divide_bound_below_top_class() {
    for (p, k, a) in [(3, 3, vec![1, 2]), (3, 2, vec![2, 2]), (5, 4, vec![1, 1]), (3, 3, vec![1, 1, 2])] {
        let g = group(p, k, &a);
        for (s, e) in g.basis().entries.iter().enumerate() {
            let Distinguished::Basic(c) = e else { panic!("replacement below the top class") };
            let bound = BigInt::from(p).pow(a[c.smallest_generator() - 1]);
            let order = g.order_of(&g.distinguished_element(s).unwrap()).unwrap();
            assert_eq!(&bound % &order, BigInt::from(0), "{c}");
            assert_eq!(order, bound, "strict divisibility for {c}");
        }
    }
}

#[test]
fn lower_central_layers() {
    let g = group(2, 3, &[1, 1]);
    let all = g.lcs_layer(1).unwrap();
    assert_eq!(all.len(), 5);
    let top = closure(&g, &g.lcs_layer(3).unwrap());
    let d = DihedralModel::new(1, 1, 3).unwrap();
    assert_eq!(top.len(), 2);
    assert_eq!(top, HashSet::from([g.identity(), g.parse("(x1 x2)^4").unwrap()]));
    assert_eq!(d.center().len(), 2);
    assert!(g.lcs_layer(4).unwrap().is_empty());
    assert!(g.lcs_layer(0).is_err());
    assert!(g.lcs_layer(5).is_err());
}

#[test]
fn consistency_checks() {
    for g in [group(2, 3, &[1, 1]), group(3, 3, &[1, 1]), group(2, 3, &[1, 2])] {
        let rep = g.verify_consistency(Level::Full).unwrap();
        assert!(rep.passed, "{:?}", rep.witness);
        assert_eq!(rep.enumerated, Some(g.order().try_into().unwrap()));
        assert!(g.verify_consistency(Level::Sampled).unwrap().passed);
    }
}

/// Rewrites the power relation of the first generator to `x1^N = x2`.
fn corrupt(text: &str) -> String {
    let mut out = Vec::new();
    let mut done = false;
    for l in text.lines() {
        if !done && l.starts_with("1^") {
            out.push(format!("{}= 2:1", l.split('=').next().unwrap()));
            done = true;
        } else {
            out.push(l.to_string());
        }
    }
    out.join("\n")
}

#[test]
fn cache_round_trip_and_corruption() {
    let g = group(3, 3, &[1, 1]);
    let text = cache::serialize(g.spec(), g.collector());
    let (spec, c) = cache::parse(&text).unwrap();
    assert_eq!(&spec, g.spec());
    assert_eq!(cache::serialize(&spec, &c), text);
    assert_eq!(&c, g.collector());

    // x1^3 = x2 forces x1 and x2 to commute
    let bad = corrupt(&text);
    assert_ne!(bad, text);
    let (spec, c) = cache::parse(&bad).unwrap();
    let detected = match PcPresentation::from_collector(spec, c) {
        Err(_) => true,
        Ok(h) => !h.verify_consistency(Level::Full).unwrap().passed,
    };
    assert!(detected);
    assert!(cache::parse("2 3 1 1\n1 x1 2\n1^2 = 1:1\n").is_err());
    assert!(cache::parse("").is_err());
}

#[test]
fn cached_build_is_reused() {
    let dir = tempfile::tempdir().unwrap();
    let spec = GroupSpec::new(2, 3, vec![1, 2]).unwrap();
    let a = nilcap::nilprod::build_group_cached(&spec, Some(dir.path())).unwrap();
    assert!(cache::cache_path(dir.path(), &spec).exists());
    let b = nilcap::nilprod::build_group_cached(&spec, Some(dir.path())).unwrap();
    assert_eq!(a.collector(), b.collector());
}

#[test]
fn enumeration_and_tables() {
    let g = group(2, 3, &[1, 1]);
    let all = enumerate(&g).unwrap();
    assert_eq!(all.len(), 16);
    assert!(all.windows(2).all(|w| w[0] < w[1]));
    assert!(full_table_check(&g).unwrap().passed);
    let h = group(3, 3, &[1, 1]);
    assert_eq!(enumerate(&h).unwrap().len(), 243);
    assert!(full_table_check(&h).unwrap().passed);
}

#[test]
fn cap_is_enforced() {
    let g = group(3, 4, &[1, 1, 1]);
    assert!(matches!(g.verify_consistency(Level::Full), Err(GroupError::CapExceeded { .. })));
    assert!(g.verify_consistency(Level::Sampled).unwrap().passed);
}

#[test]
fn dihedral_isomorphism() {
    for k in [2usize, 3] {
        let g = group(2, k, &[1, 1]);
        let d = DihedralModel::new(1, 1, k as u32).unwrap();
        let n = generator_isomorphism(&g, &d, 2, 1 << 10);
        assert_eq!(n, Some(d.order() as usize));
        assert_eq!(BigInt::from(d.order()), g.order());
    }
    // the class-3 group is not the class-2 one
    let g2 = group(2, 2, &[1, 1]);
    let d3 = DihedralModel::new(1, 1, 3).unwrap();
    assert_eq!(generator_isomorphism(&g2, &d3, 2, 1 << 10), None);
}

#[test]
fn quotient_compatibility() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (p, k, a) in [(3u64, 3usize, vec![1u32, 2]), (5, 4, vec![1, 1]), (3, 2, vec![1, 1, 2])] {
        let big = group(p, k, &a);
        let small = group(p, k - 1, &a);
        let keep = big.hall_basis().weight_range(k).start;
        for _ in 0..30 {
            let w = common::random_word(&mut rng, a.len(), 3);
            let x = big.normal_form(&w).unwrap();
            let y = small.normal_form(&w).unwrap();
            assert_eq!(x.0[..keep], y.0[..], "{w}");
        }
    }
}

#[test]
fn binomial_reduction() {
    assert_eq!(binom_reduction(1, 2), BigInt::from(1));
    assert_eq!(binom_reduction(2, 2), BigInt::from(2));
    assert_eq!(binom_reduction(2, 3), BigInt::from(3));
    for p in [2u64, 3, 5, 7] {
        for a in 1..4 {
            assert_eq!(binom_reduction(a, p), BigInt::from(p).pow(a - 1));
        }
    }
}

#[test]
fn power_commutator_expansion_shape() {
    for p in [2u64, 3, 5] {
        let k = p as usize + 1;
        let fg = FreeNilpotentGroup::new(2, k).unwrap();
        let v = fg.parse(&format!("[x2^{p},x1]")).unwrap();
        let layer = v.layer(2);
        let c21 = fg.basis().position(&BasicCommutator::from_spine(&[BasicCommutator::generator(2), BasicCommutator::generator(1)])).unwrap();
        assert_eq!(layer.exponents().collect::<Vec<_>>(), vec![(c21, &BigInt::from(p))]);
        let mut spine = vec![BasicCommutator::generator(2), BasicCommutator::generator(1)];
        spine.extend(std::iter::repeat_n(BasicCommutator::generator(2), p as usize - 1));
        let top = fg.basis().position(&BasicCommutator::from_spine(&spine)).unwrap();
        assert_eq!(v.exponent(top), &BigInt::from(1));
        assert_eq!(v.min_weight(), Some(2));
    }
}

fn tail(p: u64) -> String {
    ",x2".repeat(p as usize - 1)
}

#[test]
fn power_commutator_identity_at_top_class() {
    for (p, alpha, beta) in [(2u64, 1u32, 2u32), (3, 1, 2)] {
        let g = group(p, p as usize + 1, &[alpha, beta]);
        let pa = p.pow(alpha);
        let pa1 = p.pow(alpha - 1);
        let lhs = g.parse(&format!("[x2^{p},x1]^{pa1}")).unwrap();
        let rhs = g.parse(&format!("[x2,x1]^{pa} [x2,x1{}]^{pa1}", tail(p))).unwrap();
        assert_eq!(lhs, rhs);
        assert!(!lhs.is_identity());
    }
}

#[test]
fn presentation_group_trait() {
    let g = group(2, 3, &[1, 1]);
    let z = Group::commutator(&g, &g.generator(2), &g.generator(1));
    assert_eq!(z, g.parse("[x2,x1]").unwrap());
}
