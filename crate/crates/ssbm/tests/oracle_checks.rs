//! Exact-arithmetic checks of the individual learner operations.

mod common;

use common::*;
use num_traits::ToPrimitive;
use ssbm::{
    cost, e_step_row, m_step_lambda, m_step_phi, ModelParams, Responsibilities, SignedGraph,
};

fn ratio_to_f64(r: &num_rational::BigRational) -> f64 {
    if num_traits::Zero::is_zero(r) {
        0.0
    } else {
        ln_big_rational(r).exp()
    }
}

#[test]
fn e_step_matches_exact_fractions_on_a_toy_instance() {
    // 4 nodes, 2 blocks, hand-set parameters.
    let g = SignedGraph::from_edges(4, vec![(0, 1, 1), (1, 2, -1), (2, 3, 1)], false).unwrap();
    let lambda = vec![
        // block 0
        0.5, 0.3, 0.2, 0.6, 0.2, 0.2, 0.25, 0.5, 0.25, 0.1, 0.1, 0.8, // nodes 0..4
        // block 1
        0.2, 0.2, 0.6, 0.3, 0.4, 0.3, 0.4, 0.4, 0.2, 0.3, 0.3, 0.4,
    ];
    let params = ModelParams::from_parts(4, vec![0.4, 0.6], lambda, 4.0).unwrap();
    for i in 0..4 {
        let row = e_step_row(&g, &params, i);
        let oracle = e_step_row_oracle(&g, &params, i);
        for k in 0..2 {
            let expected = ratio_to_f64(&oracle[k]);
            assert!(
                relative_gap(row[k], expected) < 1e-9,
                "zeta[{i}][{k}] = {} vs oracle {expected}",
                row[k]
            );
        }
    }
}

#[test]
fn phi_update_matches_exact_fractions() {
    for seed in 0..5u64 {
        let zeta_ref = random_zeta(6, 3, seed);
        for &c in &[0.0, 2.0, 6.0] {
            let mut zeta = zeta_ref.clone();
            let result = m_step_phi(&mut zeta, c);
            match phi_update_oracle(&zeta_ref, c) {
                None => {
                    assert!(
                        matches!(result, Err(ssbm::Error::DegenerateModel)),
                        "oracle says degenerate but implementation returned {result:?}"
                    );
                }
                Some((oracle_phi, oracle_dead)) => {
                    let update = result.unwrap();
                    assert_eq!(update.annihilated, oracle_dead, "c = {c}, seed = {seed}");
                    for k in 0..3 {
                        let expected = ratio_to_f64(&oracle_phi[k]);
                        assert!(
                            relative_gap(update.phi[k], expected) < 1e-9 || expected == 0.0,
                            "phi[{k}] = {} vs oracle {expected} (c = {c})",
                            update.phi[k]
                        );
                        if expected == 0.0 {
                            assert_eq!(update.phi[k], 0.0);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn lambda_update_matches_exact_fractions() {
    for seed in 0..5u64 {
        let g = random_signed_graph(6, 0.5, 0.4, seed);
        let zeta = random_zeta(6, 2, seed + 50);
        for k in 0..2 {
            let triples = m_step_lambda(&g, &zeta, k, 1e-10).unwrap();
            let oracle = lambda_update_oracle(&g, &zeta, k, 1e-10);
            for j in 0..6 {
                for h in 0..3 {
                    let expected = ratio_to_f64(&oracle[j][h]);
                    assert!(
                        relative_gap(triples[j][h], expected) < 1e-9,
                        "lambda[{k}][{j}][{h}] = {} vs oracle {expected}",
                        triples[j][h]
                    );
                }
            }
        }
    }
}

#[test]
fn cost_matches_extended_precision_evaluation() {
    for seed in 0..5u64 {
        let g = random_signed_graph(5, 0.6, 0.5, seed);
        let params = random_params(5, 2, seed + 10);
        let got = cost(&g, &params);
        let expected = cost_oracle(&g, &params);
        assert!(
            relative_gap(got, expected) < 1e-9,
            "cost {got} vs oracle {expected} (seed {seed})"
        );
    }
}

#[test]
fn responsibilities_round_trip_through_oracle_types() {
    // The oracle consumes the same structures the implementation produces.
    let zeta = random_zeta(4, 2, 9);
    let rows: Vec<Vec<f64>> = (0..4).map(|i| zeta.row(i).to_vec()).collect();
    let rebuilt = Responsibilities::from_rows(&rows).unwrap();
    for i in 0..4 {
        assert_eq!(zeta.row(i), rebuilt.row(i));
    }
}
