mod common;

use num_rational::Ratio;
use proptest::prelude::*;
use qexpand_core::topology::{grow_community, ConceptPath, GrowthEvent, DEFAULT_WCC_ITERATION_CAP};
use qexpand_core::wcc::wcc_community;

use common::{id, numbered_graph, Matrix};

fn case(max_n: usize) -> impl Strategy<Value = (usize, Vec<(usize, usize)>, Vec<usize>)> {
    (3..=max_n).prop_flat_map(|n| {
        (
            Just(n),
            prop::collection::vec((0..n, 0..n), n..=4 * n),
            prop::collection::vec(0..n, 1..=4),
        )
    })
}

fn path(seed: &[usize]) -> ConceptPath {
    let mut articles = Vec::new();
    for &v in seed {
        if !articles.contains(&id(v)) {
            articles.push(id(v));
        }
    }
    ConceptPath {
        articles,
        score: Ratio::new(0, 1),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn growth_matches_reference_run((n, es, seed) in case(11)) {
        let g = numbered_graph(n, &es);
        let m = Matrix::new(n, &es);
        let out = grow_community(&g, &path(&seed), DEFAULT_WCC_ITERATION_CAP);
        let (members, accepted) = common::grow(&m, &seed, DEFAULT_WCC_ITERATION_CAP);

        let got: Vec<usize> = out.community.members.iter().map(|a| a.index()).collect();
        prop_assert_eq!(got, members);
        let got_accepted: Vec<usize> = out
            .trace
            .events
            .iter()
            .filter_map(|e| match e {
                GrowthEvent::Accepted { article, .. } => Some(article.index()),
                _ => None,
            })
            .collect();
        prop_assert_eq!(got_accepted, accepted);
    }

    #[test]
    fn growth_invariants((n, es, seed) in case(30)) {
        let g = numbered_graph(n, &es);
        let out = grow_community(&g, &path(&seed), DEFAULT_WCC_ITERATION_CAP);
        prop_assert!(!out.community.members.is_empty());
        let mut last: Option<(usize, f64)> = None;
        for e in &out.trace.events {
            match *e {
                GrowthEvent::Accepted { round, objective_before, objective_after, .. } => {
                    prop_assert!(objective_after > objective_before);
                    if let Some((r, prev)) = last {
                        if r == round {
                            prop_assert!(objective_after > prev);
                        }
                    }
                    last = Some((round, objective_after));
                }
                GrowthEvent::Removed { wcc, threshold, .. } => {
                    prop_assert!(wcc < threshold);
                    last = None;
                }
            }
        }
        let final_wcc = wcc_community(&g, &out.community.members).unwrap();
        prop_assert!((final_wcc - out.trace.final_wcc).abs() <= 1e-12);
    }
}
