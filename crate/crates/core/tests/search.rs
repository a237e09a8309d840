mod common;

use cdc_bounds::bounds::johnson_bound;
use cdc_bounds::search::{brute_force_front, solve, solve_fixed_q, solve_split, staged_solve, Instance, QMode, WeightSpec};
use cdc_bounds::weights::Regime;
use cdc_bounds::{PivotVector, QPolynomial};
use num_bigint::BigInt;
use proptest::prelude::*;

/// Every (n, d, k) with n <= `max_n` and 4 <= d <= 2 min(k, n - k).
fn small_params(max_n: u32) -> Vec<(u32, u32, u32)> {
    let mut out = Vec::new();
    for n in 4..=max_n {
        for k in 2..n {
            for d in (4..=2 * k.min(n - k)).step_by(2) {
                out.push((n, d, k));
            }
        }
    }
    out
}

fn exact_instance(n: u32, d: u32, k: u32) -> Instance {
    Instance::new(n, d, k, Regime::Upper, johnson_bound(n, d, k) as usize)
}

#[test]
fn front_matches_exhaustive_oracle_up_to_seven() {
    for (n, d, k) in small_params(7) {
        let inst = exact_instance(n, d, k);
        let front = solve(&inst).unwrap();
        assert!(!front.incomplete);
        let vs = common::upper_exponents(n, d, k);
        for q in 2..=7u64 {
            let want = common::max_weight_at(&vs, d, q as u128, usize::MAX);
            assert_eq!(front.value_at(q), BigInt::from(want), "({n},{d},{k}) q={q}");
            assert!(front.bound_at(q) >= BigInt::from(want));
        }
        for c in &front.u {
            let bits: Vec<u64> = c.members.iter().map(|m| m.bits()).collect();
            assert!(common::is_clique(&bits, d));
            assert!(c.members.len() <= inst.max_dive);
        }
    }
}

#[test]
fn johnson_bound_caps_clique_number() {
    for (n, d, k) in small_params(7) {
        let omega = common::clique_number(&common::weight_k_vectors(n, k), d) as u64;
        assert!(johnson_bound(n, d, k) >= omega, "({n},{d},{k})");
    }
}

#[test]
fn search_is_deterministic() {
    let inst = Instance::new(8, 4, 4, Regime::Upper, 14);
    let a = solve(&inst).unwrap();
    let b = solve(&inst).unwrap();
    assert_eq!(a.u, b.u);
    assert_eq!(a.u_hat, b.u_hat);
    assert_eq!(a.stats.dive_calls, b.stats.dive_calls);
    assert_eq!(a.stats.newrecord_calls, b.stats.newrecord_calls);
}

#[test]
fn fixed_q_and_split_agree_with_all_q() {
    for (n, d, k) in [(6, 4, 3), (7, 4, 3), (8, 4, 4), (8, 6, 4)] {
        let inst = exact_instance(n, d, k);
        let all = solve(&inst).unwrap();
        let split = solve_split(&inst, 4).unwrap();
        assert_eq!(split.len(), 4);
        for q in 2..=8u64 {
            assert_eq!(solve_fixed_q(&inst, q).unwrap().value_at(q), all.value_at(q), "({n},{d},{k}) q={q}");
            let from_split = split.iter().filter(|f| f.mode.contains(q)).map(|f| f.value_at(q)).max().unwrap();
            assert_eq!(from_split, all.value_at(q));
        }
    }
}

#[test]
fn staged_runs_reach_the_same_front() {
    let inst = Instance::new(8, 4, 4, Regime::Upper, 14);
    let plain = solve(&inst).unwrap();
    let staged = staged_solve(&inst, None, &[4, 8]).unwrap();
    assert_eq!(staged.weights(), plain.weights());
    let reseeded = staged_solve(&inst, Some(&plain), &[]).unwrap();
    assert_eq!(reseeded.weights(), plain.weights());
    assert!(staged_solve(&inst, None, &[8, 4]).is_err());
    assert!(staged_solve(&inst, None, &[20]).is_err());
}

#[test]
fn budget_marks_run_incomplete() {
    let inst = Instance::new(10, 4, 5, Regime::Upper, 36).with_call_budget(50);
    let front = solve(&inst).unwrap();
    assert!(front.incomplete);
    assert!(!front.u.is_empty());
}

#[test]
fn brute_force_refuses_large_inputs() {
    assert!(brute_force_front(&Instance::new(11, 4, 5, Regime::Upper, 6)).is_err());
    assert!(brute_force_front(&Instance::new(8, 4, 4, Regime::Upper, 14)).is_err());
    assert!(brute_force_front(&Instance::new(8, 4, 4, Regime::Upper, 14).with_max_dive(6)).is_ok());
}

#[test]
fn invalid_instances_are_rejected() {
    assert!(solve(&Instance::new(6, 5, 3, Regime::Upper, 2)).is_err());
    assert!(solve(&Instance::new(6, 8, 3, Regime::Upper, 2)).is_err());
    assert!(solve(&Instance::new(6, 4, 3, Regime::Upper, 4).with_max_dive(5)).is_err());
    assert!(solve(&Instance::new(6, 4, 3, Regime::Upper, 0)).is_err());
    let neg = vec![QPolynomial::monomial(-1, 2); 20];
    assert!(solve(&Instance::new(6, 4, 3, Regime::Upper, 4).with_weights(WeightSpec::Custom(neg))).is_err());
}

#[test]
fn q_mode_text_forms() {
    for (text, mode) in [
        ("all", QMode::All),
        ("3", QMode::Fixed(3)),
        ("q=3", QMode::Fixed(3)),
        ("2..4", QMode::Range { lo: 2, hi: Some(4) }),
        ("5..", QMode::Range { lo: 5, hi: None }),
        ("q>=5", QMode::Range { lo: 5, hi: None }),
    ] {
        assert_eq!(text.parse::<QMode>().unwrap(), mode, "{text}");
        assert_eq!(mode.to_string().parse::<QMode>().unwrap(), mode);
    }
    assert!("1".parse::<QMode>().is_err());
    assert!("5..3".parse::<QMode>().is_err());
}

fn custom_case() -> impl Strategy<Value = (u32, u32, u32, Vec<Vec<u8>>)> {
    prop::sample::select(vec![(6u32, 4u32, 3u32), (7, 4, 3), (7, 4, 4), (6, 4, 2), (7, 6, 3)]).prop_flat_map(|(n, d, k)| {
        let count = common::weight_k_vectors(n, k).len();
        (Just(n), Just(d), Just(k), prop::collection::vec(prop::collection::vec(0u8..3, 1..5), count))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn custom_weights_match_oracle((n, d, k, coeffs) in custom_case(), q in 2u64..6) {
        // Custom weights follow the vertex order of all_pivots.
        let pivots = cdc_bounds::diagrams::all_pivots(n, k);
        let weights: Vec<QPolynomial> = coeffs
            .iter()
            .map(|c| QPolynomial::from_terms(c.iter().enumerate().map(|(e, &x)| (e as u32, x as i64))))
            .collect();
        let ub = johnson_bound(n, d, k) as usize;
        let inst = Instance::new(n, d, k, Regime::Upper, ub).with_weights(WeightSpec::Custom(weights.clone()));
        let front = solve(&inst).unwrap();
        let values: Vec<(u64, u128)> = pivots
            .iter()
            .zip(&weights)
            .map(|(v, w)| (v.bits(), u128::try_from(w.eval(q)).unwrap()))
            .collect();
        prop_assert_eq!(front.value_at(q), BigInt::from(common::max_clique_value(&values, d, usize::MAX)));
    }

    #[test]
    fn ub_extend_bounds_every_extension(case in prop::sample::select(vec![(6u32, 4u32, 3u32), (7, 4, 3), (7, 4, 4), (8, 6, 4), (8, 4, 4)]), picks in prop::collection::vec(any::<prop::sample::Index>(), 0..3), q in 2u64..6) {
        let (n, d, k) = case;
        let inst = exact_instance(n, d, k);
        let prep = inst.prepare().unwrap();
        let vs = common::upper_exponents(n, d, k);
        let mut members: Vec<u64> = Vec::new();
        for p in picks {
            let b = vs[p.index(vs.len())].0;
            if members.iter().all(|m| (m ^ b).count_ones() >= d) {
                members.push(b);
            }
        }
        let pv: Vec<PivotVector> = members.iter().map(|&b| PivotVector::new(n, b).unwrap()).collect();
        let bound = prep.ub_extend(&pv).unwrap();
        let base: u128 = vs.iter().filter(|(b, _)| members.contains(b)).map(|(_, e)| (q as u128).pow(*e)).sum();
        let rest: Vec<(u64, u32)> = vs
            .iter()
            .filter(|(b, _)| members.iter().all(|m| (m ^ b).count_ones() >= d))
            .copied()
            .collect();
        let best = base + common::max_weight_at(&rest, d, q as u128, inst.ub - members.len());
        prop_assert!(bound.eval(q) >= BigInt::from(best));
        prop_assert_eq!(prep.clique_weight(&pv).unwrap().eval(q), BigInt::from(base));
    }
}
