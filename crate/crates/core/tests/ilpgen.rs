mod common;

use std::collections::BTreeMap;

use cdc_bounds::ilpgen::{emit, parse_lp, solve_small, IlpOptions, Relation, Variant};
use num_bigint::BigInt;
use proptest::prelude::*;

const TOY: [(u32, u32, u32); 6] = [(4, 4, 2), (5, 4, 2), (6, 4, 2), (6, 4, 3), (6, 6, 3), (7, 6, 3)];

fn largest_set(vs: &[u64], keep: impl Fn(u64, u64) -> bool) -> usize {
    fn rec(vs: &[u64], keep: &dyn Fn(u64, u64) -> bool, start: usize, chosen: &mut Vec<u64>, best: &mut usize) {
        *best = (*best).max(chosen.len());
        if chosen.len() + vs.len() - start <= *best {
            return;
        }
        for i in start..vs.len() {
            if chosen.iter().all(|&c| keep(c, vs[i])) {
                chosen.push(vs[i]);
                rec(vs, keep, i + 1, chosen, best);
                chosen.pop();
            }
        }
    }
    let mut best = 0;
    rec(vs, &keep, 0, &mut Vec::new(), &mut best);
    best
}

#[test]
fn edge_and_cover_models_give_the_clique_number() {
    for (n, d, k) in TOY {
        let omega = common::clique_number(&common::weight_k_vectors(n, k), d);
        for variant in [Variant::Edge, Variant::Cover] {
            let m = emit(n, d, k, variant, &IlpOptions::default()).unwrap();
            assert_eq!(solve_small(&m).unwrap().objective, BigInt::from(omega), "({n},{d},{k}) {variant:?}");
        }
    }
}

#[test]
fn literal_edge_model_gives_the_largest_incompatible_set() {
    for (n, d, k) in TOY {
        let vs = common::weight_k_vectors(n, k);
        let want = largest_set(&vs, |a, b| (a ^ b).count_ones() < d);
        let m = emit(n, d, k, Variant::EdgeLiteral, &IlpOptions::default()).unwrap();
        assert_eq!(solve_small(&m).unwrap().objective, BigInt::from(want), "({n},{d},{k})");
    }
}

#[test]
fn weighted_and_counting_models_give_the_heaviest_clique() {
    for (n, d, k) in TOY {
        let vs = common::upper_exponents(n, d, k);
        let omega = common::clique_number(&common::weight_k_vectors(n, k), d);
        for q in [2u64, 3, 7] {
            let want = BigInt::from(common::max_weight_at(&vs, d, q as u128, usize::MAX));
            let w = emit(n, d, k, Variant::WeightedFixedQ, &IlpOptions { q: Some(q), ..Default::default() }).unwrap();
            assert_eq!(solve_small(&w).unwrap().objective, want, "weighted ({n},{d},{k}) q={q}");
            let objective: BTreeMap<u32, i64> = vs.iter().map(|&(_, e)| (e, (q as i64).pow(e))).collect();
            let opts = IlpOptions { objective: Some(objective), a1_bound: Some(omega as u64), ..Default::default() };
            let c = emit(n, d, k, Variant::Counting, &opts).unwrap();
            assert_eq!(solve_small(&c).unwrap().objective, want, "counting ({n},{d},{k}) q={q}");
        }
    }
}

#[test]
fn counting_model_structure() {
    let vs = common::upper_exponents(6, 4, 3);
    let mut classes: BTreeMap<u32, usize> = BTreeMap::new();
    for &(_, e) in &vs {
        *classes.entry(e).or_default() += 1;
    }
    let opts = IlpOptions { a1_bound: Some(4), fixed: [(6, 1)].into_iter().collect(), ..Default::default() };
    let m = emit(6, 4, 3, Variant::Counting, &opts).unwrap();
    for (&e, &count) in &classes {
        let c = m.constraint(&format!("count_{e}")).unwrap();
        assert_eq!(c.rel, Relation::Eq);
        assert_eq!(c.rhs, 0);
        assert_eq!(c.terms.len(), count + 1);
    }
    assert!(m.bounds.contains(&("a_6".to_string(), 1, 1)));
    // t = k - d/2 + 1 = 2, one constraint per pair of positions with two or more vectors on it.
    let covers = m.constraints.iter().filter(|c| c.name.starts_with("s_")).count();
    assert_eq!(covers, 15);
    let bad = IlpOptions { a1_bound: Some(4), fixed: [(99, 1)].into_iter().collect(), ..Default::default() };
    assert!(emit(6, 4, 3, Variant::Counting, &bad).is_err());
    assert!(emit(6, 4, 3, Variant::Counting, &IlpOptions::default()).is_err());
    assert!(emit(6, 4, 3, Variant::WeightedFixedQ, &IlpOptions::default()).is_err());
}

#[test]
fn large_objective_is_flagged_and_survives_parsing() {
    let m = emit(14, 6, 4, Variant::WeightedFixedQ, &IlpOptions { q: Some(9), ..Default::default() }).unwrap();
    assert!(m.overflow_risk);
    assert!(!m.warnings.is_empty());
    let text = m.to_lp();
    assert!(text.contains("WARNING"));
    let back = parse_lp(&text).unwrap();
    assert!(back.overflow_risk);
    assert_eq!(back.objective, m.objective);
}

#[test]
fn toy_solver_refuses_big_models() {
    let m = emit(8, 4, 4, Variant::Edge, &IlpOptions::default()).unwrap();
    assert!(solve_small(&m).is_err());
}

#[test]
fn variant_names() {
    for (s, v) in [
        ("edge", Variant::Edge),
        ("edge-literal", Variant::EdgeLiteral),
        ("cover", Variant::Cover),
        ("independent-set-cover", Variant::Cover),
        ("weighted", Variant::WeightedFixedQ),
        ("counting", Variant::Counting),
    ] {
        assert_eq!(s.parse::<Variant>().unwrap(), v);
    }
    assert!("clique".parse::<Variant>().is_err());
}

fn params() -> impl Strategy<Value = (u32, u32, u32)> {
    prop::sample::select(vec![(4, 4, 2), (6, 4, 3), (7, 4, 3), (8, 6, 4), (9, 6, 4), (8, 4, 2)])
}

fn variant() -> impl Strategy<Value = Variant> {
    prop::sample::select(vec![Variant::Edge, Variant::EdgeLiteral, Variant::Cover, Variant::WeightedFixedQ, Variant::Counting])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn lp_text_round_trips((n, d, k) in params(), v in variant(), q in 2u64..20, cap in 1u64..30, coeffs in prop::collection::vec(-5i64..6, 0..4)) {
        let objective: BTreeMap<u32, i64> = coeffs.iter().enumerate().map(|(i, &c)| (i as u32, c)).collect();
        let opts = IlpOptions { q: Some(q), a1_bound: Some(cap), objective: Some(objective), ..Default::default() };
        let m = emit(n, d, k, v, &opts).unwrap();
        let text = m.to_lp();
        let back = parse_lp(&text).unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(back.to_lp(), text);
    }
}
