use num_bigint::BigInt;
use proptest::prelude::*;

use nilcap::collect::FreeNilpotentGroup;
use nilcap::term::{format_expr, parse_expr, WordExpr};

fn expr(r: usize) -> impl Strategy<Value = WordExpr> {
    let leaf = prop_oneof![
        Just(WordExpr::Identity),
        (1..=r).prop_map(WordExpr::generator),
    ];
    leaf.prop_recursive(6, 48, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..=3).prop_map(WordExpr::Product),
            (inner.clone(), -5i64..=5).prop_map(|(b, n)| WordExpr::Power(Box::new(b), BigInt::from(n))),
            prop::collection::vec(inner, 2..=3).prop_map(WordExpr::Commutator),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn format_then_parse_round_trips((r, e) in (1usize..=4).prop_flat_map(|r| (Just(r), expr(r)))) {
        let text = format_expr(&e);
        let back = parse_expr(&text, r).unwrap();
        prop_assert_eq!(format_expr(&back), text.clone());
        // same group element, whatever the bracketing of products
        let g = FreeNilpotentGroup::new(r, 3).unwrap();
        prop_assert_eq!(back.eval(&g), e.eval(&g), "{}", text);
    }

    #[test]
    fn garbage_never_panics(s in "[x0-9\\[\\],^() e-]{0,24}") {
        let _ = parse_expr(&s, 4);
    }
}
