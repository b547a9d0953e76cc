// SPDX-License-Identifier: Apache-2.0

//! Scaling formulas against exact arithmetic.

mod common;

use common::enum_edge_prob_uniform;
use riglab_core::asymptotics::{
    alpha_from_scaling, binomial_p_for_alpha, edge_prob_uniform_exact, limit_prob,
};
use riglab_core::Model;

fn choose(n: u64, k: u64) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `1 - C(P - K, K) / C(P, K)` in integers, exact for `P <= 64`.
fn uniform_edge_prob_integer(pool: u64, k: u64) -> f64 {
    if 2 * k > pool {
        return 1.0;
    }
    let (num, den) = (choose(pool - k, k), choose(pool, k));
    (den - num) as f64 / den as f64
}

#[test]
fn log_space_edge_probability_matches_integer_arithmetic() {
    for pool in 1..=64u64 {
        for k in 1..=pool {
            let exact = uniform_edge_prob_integer(pool, k);
            let got = edge_prob_uniform_exact(pool as usize, k as usize).unwrap();
            assert!(
                (got - exact).abs() <= 1e-12 * exact.max(1e-300),
                "P={pool} K={k}"
            );
        }
    }
}

fn in_band(pool: usize, k: usize) -> bool {
    let s = (k * k) as f64 / pool as f64;
    let q = edge_prob_uniform_exact(pool, k).unwrap();
    q >= s - s * s - 1e-15 && q <= s + 1e-15
}

#[test]
fn sparse_edge_probability_sits_in_the_band() {
    // The band is first confirmed against subset enumeration on small pools.
    for pool in 1..=12 {
        for k in 1..=pool {
            if (k * k) as f64 / pool as f64 <= 0.1 {
                let s = (k * k) as f64 / pool as f64;
                let q = enum_edge_prob_uniform(pool, k);
                assert!(q >= s - s * s - 1e-12 && q <= s + 1e-12, "P={pool} K={k}");
            }
        }
    }
    let mut checked = 0;
    let mut pool = 10;
    while checked < 200 {
        for k in 1.. {
            if (k * k) as f64 / pool as f64 > 0.1 {
                break;
            }
            assert!(in_band(pool, k), "P={pool} K={k}");
            checked += 1;
        }
        pool = pool * 3 / 2 + 7;
    }
}

#[test]
fn limit_probability_rises_from_zero_to_one() {
    // Below about -6 the k = 1 value underflows to 0, so the grid stops short.
    for k in 1..=5 {
        let values: Vec<f64> = (0..100)
            .map(|i| limit_prob(-5.0 + 15.0 * i as f64 / 99.0, k).unwrap())
            .collect();
        assert!(values.windows(2).all(|w| w[1] > w[0]), "k={k}");
        assert!(values[0] < 0.01 && values[99] > 0.999);
        assert_eq!(limit_prob(f64::NEG_INFINITY, k).unwrap(), 0.0);
        assert_eq!(limit_prob(f64::INFINITY, k).unwrap(), 1.0);
    }
}

#[test]
fn alpha_round_trips_through_the_binomial_inverse() {
    for (n, pool) in [(100, 1000), (2000, 20_000), (5000, 100_000)] {
        for k in 1..=4 {
            for alpha in [-3.0, -0.5, 0.0, 0.7, 2.5] {
                let p = binomial_p_for_alpha(n, pool, k, alpha).unwrap();
                let back = alpha_from_scaling(&Model::Binomial { n, pool, p }, k).unwrap();
                assert!((back.alpha_n - alpha).abs() < 1e-9);
            }
        }
    }
}
