mod common;

use nilcap::collect::FreeNilpotentGroup;
use nilcap::oracle::magnus::naive_coordinates;
use nilcap::term::Group;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn collector_matches_power_series_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for k in 2..=4 {
        let g = FreeNilpotentGroup::new(2, k).unwrap();
        let mut checked = 0;
        while checked < 40 {
            let w = common::random_word(&mut rng, 2, 3);
            let Some(expected) = naive_coordinates(&w, g.basis(), 400) else { continue };
            let got = g.embed(&w).unwrap();
            assert_eq!(got.dense(), &expected[..], "word {w}");
            checked += 1;
        }
    }
}

#[test]
fn collector_matches_oracle_on_three_generators() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let g = FreeNilpotentGroup::new(3, 4).unwrap();
    let mut checked = 0;
    while checked < 25 {
        let w = common::random_word(&mut rng, 3, 3);
        let Some(expected) = naive_coordinates(&w, g.basis(), 300) else { continue };
        assert_eq!(g.embed(&w).unwrap().dense(), &expected[..], "word {w}");
        checked += 1;
    }
}

#[test]
fn group_axioms_and_graded_structure() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = FreeNilpotentGroup::new(3, 4).unwrap();
    for _ in 0..100 {
        let a = g.embed(&common::random_word(&mut rng, 3, 3)).unwrap();
        let b = g.embed(&common::random_word(&mut rng, 3, 3)).unwrap();
        let c = g.embed(&common::random_word(&mut rng, 3, 3)).unwrap();
        assert_eq!(g.multiply(&g.multiply(&a, &b), &c), g.multiply(&a, &g.multiply(&b, &c)));
        assert!(g.multiply(&a, &g.inverse(&a)).is_identity());
        assert_eq!(g.multiply(&g.identity(), &a), a);
        // truncation F/F_5 -> F/F_4 is a homomorphism
        let lhs = g.multiply(&a.truncate(3), &b.truncate(3)).truncate(3);
        assert_eq!(lhs, g.multiply(&a, &b).truncate(3));
        // the top layer is central and abelian
        let (ta, tb) = (a.layer(4), b.layer(4));
        let sum: Vec<_> = ta.dense().iter().zip(tb.dense()).map(|(x, y)| x + y).collect();
        assert_eq!(g.multiply(&ta, &tb).dense(), &sum[..]);
    }
}
