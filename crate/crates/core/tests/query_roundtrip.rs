use proptest::prelude::*;
use qexpand_core::query::{combine, ContextBranch};
use qexpand_core::{Phrase, StructuredQuery, WeightVector, WeightedPhrase, WeightedQuery};

fn weighted_query(min: usize) -> impl Strategy<Value = WeightedQuery> {
    prop::collection::btree_map("[a-z]{1,6}( [a-z0-9]{1,6}){0,3}", 1e-6f64..=1.0, min..5).prop_map(|m| {
        WeightedQuery::new(
            m.into_iter()
                .map(|(p, weight)| WeightedPhrase {
                    phrase: Phrase::parse(&p).unwrap(),
                    weight,
                })
                .collect(),
        )
        .unwrap()
    })
}

fn structured() -> impl Strategy<Value = StructuredQuery> {
    (
        (0.0f64..1.0, 0.0f64..1.0, 0.0f64..1.0),
        weighted_query(1),
        weighted_query(0),
        weighted_query(0),
        prop::option::of((0.01f64..1.0, weighted_query(1))),
    )
        .prop_map(|((a, b, c), qo, ql, qt, ctx)| {
            let total = a + b + c + 1e-3;
            let w =
                WeightVector::new((a + 1e-3) / total, b / total, c / total).unwrap_or(WeightVector::DEFAULT);
            let mut sq = combine(qo, ql, qt, w).unwrap();
            sq.context = ctx.map(|(weight, query)| ContextBranch { weight, query });
            sq
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn json_round_trip(sq in structured()) {
        let text = sq.render_json();
        let back = StructuredQuery::parse_json(&text).unwrap();
        prop_assert_eq!(&back, &sq);
        prop_assert_eq!(back.render_json(), text);
        prop_assert_eq!(back.render_text(), sq.render_text());
    }

    #[test]
    fn branch_weights_are_normalized(sq in structured()) {
        let branches = sq.branches();
        prop_assert!(!branches.is_empty());
        let total: f64 = branches.iter().map(|b| b.weight).sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
        prop_assert!(branches.iter().all(|b| b.weight > 0.0 && !b.query.is_empty()));
    }
}
