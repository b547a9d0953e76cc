// SPDX-License-Identifier: Apache-2.0

//! Scaling conditions, deviation terms and limit probabilities.
//!
//! Each model has a scaling quantity that plays the role of an edge
//! probability: `p^2 P` (binomial), `K^2 / P` (uniform), `E[X]^2 / P`
//! (general) and `p_hat` (Erdős–Rényi). Writing it as
//! `(ln n + (k - 1) ln ln n + alpha_n) / n` defines the deviation `alpha_n`;
//! the limit probability of k-connectivity (and of minimum degree >= k) is
//! `exp(-exp(-alpha) / (k - 1)!)` for a finite limit `alpha`, 0 at `-inf`
//! and 1 at `+inf`.

use serde::{Deserialize, Serialize};

use crate::rig::{Model, ModelKind, SizeDistribution};
use crate::{Error, Result};

fn ln_factorial(m: usize) -> f64 {
    (2..=m).map(|i| (i as f64).ln()).sum()
}

fn check_k(k: usize) -> Result<()> {
    if k < 1 {
        return Err(Error::param("k must be at least 1"));
    }
    Ok(())
}

fn check_prob(p: f64, name: &str) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param(format!("{name} = {p} is not in [0, 1]")));
    }
    Ok(())
}

/// `ln n + (k - 1) ln ln n`. Needs `n >= 3` so that `ln ln n > 0`.
pub fn critical_numerator(n: usize, k: usize) -> Result<f64> {
    check_k(k)?;
    if n < 3 {
        return Err(Error::Domain(format!("scaling needs n >= 3, got n = {n}")));
    }
    let ln_n = (n as f64).ln();
    Ok(ln_n + (k as f64 - 1.0) * ln_n.ln())
}

/// `c_n = (ln n + (k - 1) ln ln n) / n`.
pub fn critical_value(n: usize, k: usize) -> Result<f64> {
    Ok(critical_numerator(n, k)? / n as f64)
}

/// The model's scaling quantity (left-hand side of its scaling condition).
pub fn scaling_lhs(model: &Model) -> Result<f64> {
    model.validate()?;
    Ok(match model {
        Model::Binomial { pool, p, .. } => p * p * *pool as f64,
        Model::Uniform { pool, set_size, .. } => (*set_size as f64).powi(2) / *pool as f64,
        Model::General { pool, sizes, .. } => sizes.mean().powi(2) / *pool as f64,
        Model::ErdosRenyi { p, .. } => *p,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub model: String,
    pub n: usize,
    pub k: usize,
    /// Scaling quantity of the model.
    pub lhs: f64,
    /// Critical value `(ln n + (k - 1) ln ln n) / n`.
    pub c_n: f64,
    /// `n * lhs - (ln n + (k - 1) ln ln n)`.
    pub alpha_n: f64,
    /// `limit_prob(alpha_n, k)`.
    pub predicted_limit: f64,
}

pub fn alpha_from_scaling(model: &Model, k: usize) -> Result<ScalingReport> {
    let n = model.node_count();
    let numerator = critical_numerator(n, k)?;
    let lhs = scaling_lhs(model)?;
    let alpha_n = n as f64 * lhs - numerator;
    Ok(ScalingReport {
        model: model.kind_name().to_string(),
        n,
        k,
        lhs,
        c_n: numerator / n as f64,
        alpha_n,
        predicted_limit: limit_prob(alpha_n, k)?,
    })
}

/// `exp(-exp(-alpha) / (k - 1)!)`, with explicit limits 0 at `-inf` and 1 at `+inf`.
pub fn limit_prob(alpha_star: f64, k: usize) -> Result<f64> {
    check_k(k)?;
    if alpha_star.is_nan() {
        return Err(Error::param("alpha is NaN"));
    }
    if alpha_star == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    if alpha_star == f64::INFINITY {
        return Ok(1.0);
    }
    Ok((-(-alpha_star - ln_factorial(k - 1)).exp()).exp())
}

/// Binomial `p` whose deviation term equals `alpha`.
pub fn binomial_p_for_alpha(n: usize, pool: usize, k: usize, alpha: f64) -> Result<f64> {
    let target = critical_numerator(n, k)? + alpha;
    if target < 0.0 || pool == 0 {
        return Err(Error::Domain(format!(
            "no binomial p gives alpha = {alpha}"
        )));
    }
    let p = (target / (n as f64 * pool as f64)).sqrt();
    check_prob(p, "p")?;
    Ok(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CriticalParam {
    Probability(f64),
    SetSize(usize),
}

impl CriticalParam {
    pub fn value(self) -> f64 {
        match self {
            CriticalParam::Probability(p) => p,
            CriticalParam::SetSize(k) => k as f64,
        }
    }
}

/// Parameter placing the model at its critical scaling: `p* = sqrt(c_n / P)`
/// (binomial), `p_hat = c_n` (Erdős–Rényi), and for the uniform model the
/// integer `K*` in `1..=P` minimizing `|K^2 / P - c_n|`, ties toward smaller `K`.
pub fn critical_param(kind: ModelKind, n: usize, pool: usize, k: usize) -> Result<CriticalParam> {
    let c = critical_value(n, k)?;
    if pool == 0 && kind != ModelKind::ErdosRenyi {
        return Err(Error::param("object pool size P must be at least 1"));
    }
    Ok(match kind {
        ModelKind::Binomial => CriticalParam::Probability((c / pool as f64).sqrt().min(1.0)),
        ModelKind::ErdosRenyi => CriticalParam::Probability(c.min(1.0)),
        ModelKind::Uniform => CriticalParam::SetSize(nearest_set_size(c, pool)),
    })
}

/// Integer `K` in `1..=pool` minimizing `|K^2 / pool - target|`; ties go to
/// the smaller `K`.
pub fn nearest_set_size(target: f64, pool: usize) -> usize {
    let gap = |size: usize| ((size as f64).powi(2) / pool as f64 - target).abs();
    let root = (target.max(0.0) * pool as f64).sqrt().floor() as usize;
    [root.saturating_sub(1), root, root + 1, root + 2]
        .into_iter()
        .map(|s| s.clamp(1, pool.max(1)))
        .fold(None::<usize>, |acc, s| match acc {
            Some(b) if gap(b) <= gap(s) => Some(b),
            _ => Some(s),
        })
        .unwrap_or(1)
}

/// Probability that two independent uniform subsets of sizes `a` and `b`
/// of a `pool`-object pool intersect: `1 - C(P - a, b) / C(P, b)`.
pub fn intersect_prob(pool: usize, a: usize, b: usize) -> Result<f64> {
    if a > pool || b > pool {
        return Err(Error::param(format!(
            "set sizes {a}, {b} exceed pool size {pool}"
        )));
    }
    if a + b > pool {
        return Ok(1.0);
    }
    // C(P - a, b) / C(P, b) = prod_{i < b} (P - a - i) / (P - i); sum logs.
    let log_ratio: f64 = (0..b)
        .map(|i| (-(a as f64) / (pool - i) as f64).ln_1p())
        .sum();
    Ok(-log_ratio.exp_m1())
}

/// Exact edge probability of `G_u(n, P, K)`: `1 - C(P - K, K) / C(P, K)`.
pub fn edge_prob_uniform_exact(pool: usize, set_size: usize) -> Result<f64> {
    if set_size == 0 || set_size > pool {
        return Err(Error::param(format!(
            "set size K = {set_size} must satisfy 1 <= K <= P = {pool}"
        )));
    }
    intersect_prob(pool, set_size, set_size)
}

/// Exact edge probability of `G_b(n, P, p)`: `1 - (1 - p^2)^P`.
pub fn edge_prob_binomial_exact(pool: usize, p: f64) -> Result<f64> {
    check_prob(p, "p")?;
    Ok(-(pool as f64 * (-p * p).ln_1p()).exp_m1())
}

/// Exact edge probability of `G(n, P, D)`: `sum_{a,b} D(a) D(b) (1 - C(P - a, b) / C(P, b))`.
pub fn edge_prob_general_exact(pool: usize, sizes: &SizeDistribution) -> Result<f64> {
    if sizes.max_size() > pool {
        return Err(Error::InvalidDistribution(format!(
            "support reaches size {} but the pool has {pool} objects",
            sizes.max_size()
        )));
    }
    let support: Vec<(usize, f64)> = (1..=sizes.max_size())
        .map(|s| (s, sizes.prob(s)))
        .filter(|&(_, w)| w > 0.0)
        .collect();
    let mut total = 0.0;
    for &(a, wa) in &support {
        for &(b, wb) in &support {
            total += wa * wb * intersect_prob(pool, a, b)?;
        }
    }
    Ok(total.min(1.0))
}

/// Exact edge probability of any model.
pub fn edge_prob_exact(model: &Model) -> Result<f64> {
    model.validate()?;
    match model {
        Model::Binomial { pool, p, .. } => edge_prob_binomial_exact(*pool, *p),
        Model::Uniform { pool, set_size, .. } => edge_prob_uniform_exact(*pool, *set_size),
        Model::General { pool, sizes, .. } => edge_prob_general_exact(*pool, sizes),
        Model::ErdosRenyi { p, .. } => Ok(*p),
    }
}

/// Deviation in the scaling `p P = ln n + gamma_n` used when the pool grows
/// like `n^tau` with `tau < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AltRegimeReport {
    pub gamma_n: f64,
    /// `ln P / ln n`.
    pub tau: f64,
    /// Whether `tau < 1`, i.e. the pool is sublinear in `n`.
    pub sublinear_pool: bool,
}

pub fn gamma_alt_regime(n: usize, pool: usize, p: f64) -> Result<AltRegimeReport> {
    if n < 2 {
        return Err(Error::Domain(format!("needs n >= 2, got n = {n}")));
    }
    check_prob(p, "p")?;
    let ln_n = (n as f64).ln();
    let tau = (pool as f64).ln() / ln_n;
    Ok(AltRegimeReport {
        gamma_n: p * pool as f64 - ln_n,
        tau,
        sublinear_pool: tau < 1.0,
    })
}

/// Asymptotic probability that `m` given nodes all have degree exactly `h`:
/// `(h!)^-m (n q)^(h m) exp(-m n q)`, evaluated in log space.
pub fn joint_degree_prediction(n: usize, q: f64, m: usize, h: usize) -> Result<f64> {
    if m < 1 {
        return Err(Error::param("m must be at least 1"));
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::param(format!("q = {q} must lie in (0, 1)")));
    }
    let nq = n as f64 * q;
    let m = m as f64;
    let log = -m * ln_factorial(h) + h as f64 * m * nq.ln() - m * nq;
    Ok(log.exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub param: f64,
    pub alpha_n: f64,
    pub predicted_limit: f64,
}

/// Predicted limit probability at each grid value of the model's parameter.
pub fn predicted_curve(
    kind: ModelKind,
    n: usize,
    pool: usize,
    k: usize,
    grid: &[f64],
) -> Result<Vec<CurvePoint>> {
    grid.iter()
        .map(|&param| {
            let report = alpha_from_scaling(&kind.model(n, pool, param)?, k)?;
            Ok(CurvePoint {
                param,
                alpha_n: report.alpha_n,
                predicted_limit: report.predicted_limit,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn uniform_scaling_example() {
        let r = alpha_from_scaling(
            &Model::Uniform {
                n: 2000,
                pool: 20000,
                set_size: 10,
            },
            2,
        )
        .unwrap();
        assert!(close(r.lhs, 0.005, 1e-15));
        assert!(close(r.c_n, 0.004815, 5e-7), "{}", r.c_n);
        assert!(close(r.alpha_n, 0.371, 5e-4), "{}", r.alpha_n);
        let r = alpha_from_scaling(
            &Model::Uniform {
                n: 2000,
                pool: 20000,
                set_size: 11,
            },
            3,
        )
        .unwrap();
        assert!(close(r.lhs, 0.00605, 1e-15));
        assert!(close(r.c_n, 0.00583, 5e-6));
    }

    #[test]
    fn binomial_at_exact_threshold_has_zero_alpha() {
        let (n, pool) = (1000usize, 50_000usize);
        let p = ((n as f64).ln() / (n as f64 * pool as f64)).sqrt();
        let r = alpha_from_scaling(&Model::Binomial { n, pool, p }, 1).unwrap();
        assert!(r.alpha_n.abs() < 1e-9);
    }

    #[test]
    fn scaling_rejects_small_n() {
        let m = Model::ErdosRenyi { n: 2, p: 0.5 };
        assert!(matches!(alpha_from_scaling(&m, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn limit_prob_examples() {
        assert_eq!(limit_prob(f64::NEG_INFINITY, 4).unwrap(), 0.0);
        assert_eq!(limit_prob(f64::INFINITY, 2).unwrap(), 1.0);
        assert!(close(limit_prob(0.0, 1).unwrap(), 0.367879, 1e-6));
        assert!(close(limit_prob(0.0, 3).unwrap(), 0.606531, 1e-6));
        assert!(limit_prob(0.0, 0).is_err());
        assert!(limit_prob(f64::NAN, 1).is_err());
        assert_eq!(limit_prob(-1e6, 1).unwrap(), 0.0);
    }

    #[test]
    fn critical_param_examples() {
        let p1 = critical_param(ModelKind::Binomial, 2000, 20000, 1)
            .unwrap()
            .value();
        let p2 = critical_param(ModelKind::Binomial, 2000, 20000, 2)
            .unwrap()
            .value();
        assert!(close(p1, 4.4e-4, 0.05e-4), "{p1}");
        assert!(close(p2, 4.9e-4, 0.05e-4), "{p2}");
        assert_eq!(
            critical_param(ModelKind::Uniform, 2000, 20000, 2).unwrap(),
            CriticalParam::SetSize(10)
        );
        assert_eq!(
            critical_param(ModelKind::Uniform, 2000, 20000, 3).unwrap(),
            CriticalParam::SetSize(11)
        );
    }

    #[test]
    fn nearest_set_size_ties_go_to_smaller_k() {
        // pool 4, target 0.625: K = 1 and K = 2 are both 0.375 away.
        assert_eq!(nearest_set_size(0.625, 4), 1);
        assert_eq!(nearest_set_size(0.7, 4), 2);
        assert_eq!(nearest_set_size(100.0, 3), 3);
        assert_eq!(nearest_set_size(0.0, 3), 1);
    }

    #[test]
    fn edge_prob_examples() {
        assert_eq!(edge_prob_uniform_exact(7, 7).unwrap(), 1.0);
        assert!(close(edge_prob_uniform_exact(5, 2).unwrap(), 0.7, 1e-12));
        assert!(close(edge_prob_uniform_exact(4, 1).unwrap(), 0.25, 1e-12));
        assert!(edge_prob_uniform_exact(3, 4).is_err());
        assert_eq!(edge_prob_binomial_exact(9, 0.0).unwrap(), 0.0);
        assert_eq!(edge_prob_binomial_exact(9, 1.0).unwrap(), 1.0);
        assert!(close(
            edge_prob_binomial_exact(2, 0.5).unwrap(),
            0.4375,
            1e-12
        ));
        let d = SizeDistribution::uniform(2, 1, 2).unwrap();
        assert!(close(edge_prob_general_exact(2, &d).unwrap(), 0.875, 1e-12));
    }

    #[test]
    fn alt_regime_examples() {
        let n = 10_000;
        let r = gamma_alt_regime(n, 100, (n as f64).ln() / 100.0).unwrap();
        assert!(r.gamma_n.abs() < 1e-12);
        let r = gamma_alt_regime(22026, 1200, 0.01).unwrap();
        assert!(close(r.gamma_n, 2.0, 1e-3), "{}", r.gamma_n);
        let r = gamma_alt_regime(10_000, 100, 10f64.powf(-2.75)).unwrap();
        assert!(close(r.gamma_n, -9.03, 5e-3), "{}", r.gamma_n);
        assert!(close(r.tau, 0.5, 1e-12) && r.sublinear_pool);
        assert!(gamma_alt_regime(1, 10, 0.1).is_err());
    }

    #[test]
    fn joint_degree_examples() {
        let (n, q) = (1000, 0.004);
        let nq = 4.0f64;
        assert!(close(
            joint_degree_prediction(n, q, 1, 0).unwrap(),
            (-nq).exp(),
            1e-15
        ));
        assert!(close(
            joint_degree_prediction(n, q, 1, 1).unwrap(),
            nq * (-nq).exp(),
            1e-15
        ));
        let single = joint_degree_prediction(n, q, 1, 3).unwrap();
        assert!(close(
            joint_degree_prediction(n, q, 2, 3).unwrap(),
            single * single,
            1e-15
        ));
        assert!(joint_degree_prediction(n, 0.0, 1, 1).is_err());
        assert!(joint_degree_prediction(n, q, 0, 1).is_err());
    }

    #[test]
    fn curve_examples() {
        assert!(predicted_curve(ModelKind::Binomial, 2000, 20000, 1, &[])
            .unwrap()
            .is_empty());
        let p = critical_param(ModelKind::Binomial, 2000, 20000, 1)
            .unwrap()
            .value();
        let c = predicted_curve(ModelKind::Binomial, 2000, 20000, 1, &[p]).unwrap();
        assert!(c[0].alpha_n.abs() < 1e-9);
        assert!(close(
            c[0].predicted_limit,
            limit_prob(c[0].alpha_n, 1).unwrap(),
            1e-15
        ));
        let grid: Vec<f64> = (4..=18).map(f64::from).collect();
        let c = predicted_curve(ModelKind::Uniform, 2000, 20000, 2, &grid).unwrap();
        assert!(c
            .windows(2)
            .all(|w| w[0].predicted_limit <= w[1].predicted_limit));
        assert!(predicted_curve(ModelKind::Uniform, 2000, 20000, 2, &[2.5]).is_err());
    }
}
