//! Ergodic rate E[ln(1 + SINR)] in nats/s/Hz: moment-based approximations
//! and the massive-array limit. The Monte Carlo reference lives in
//! [`crate::montecarlo::ergodic_rate_mc`].

use crate::config::SystemConfig;
use crate::error::{Error, Result};

/// Mean and variance of Z = 1/SINR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DenominatorMoments {
    pub mu_z: f64,
    pub sigma2_z: f64,
}

/// E[Z] = Kσ²/(P_t(L-1)) + (K-1)/L. Defined for every L ≥ 2.
pub fn denominator_mean(cfg: &SystemConfig) -> f64 {
    let l = f64::from(cfg.antennas());
    cfg.noise_ratio() / (l - 1.0) + f64::from(cfg.interferers()) / l
}

/// Mean and variance of Z. The variance needs L > 2:
/// Var Z = K²σ⁴/(P_t²(L-1)²(L-2)) + (K-1)(L-1)/(L²(L+1)).
pub fn denominator_moments(cfg: &SystemConfig) -> Result<DenominatorMoments> {
    if cfg.antennas() <= 2 {
        return Err(Error::domain("denominator_moments", "variance of Z needs L > 2"));
    }
    let l = f64::from(cfg.antennas());
    let a = cfg.noise_ratio();
    let k1 = f64::from(cfg.interferers());
    let sigma2_z = a * a / ((l - 1.0) * (l - 1.0) * (l - 2.0)) + k1 * (l - 1.0) / (l * l * (l + 1.0));
    Ok(DenominatorMoments {
        mu_z: denominator_mean(cfg),
        sigma2_z,
    })
}

/// Second-order approximation
/// ln(1 + 1/μ) + (σ²/2)·(2μ + 1)/(μ²(μ + 1)²).
pub fn ergodic_rate_robust(cfg: &SystemConfig) -> Result<f64> {
    let DenominatorMoments { mu_z: mu, sigma2_z } = denominator_moments(cfg)?;
    let correction = 0.5 * sigma2_z * (2.0 * mu + 1.0) / (mu * mu * (mu + 1.0) * (mu + 1.0));
    Ok((1.0 / mu).ln_1p() + correction)
}

/// Jensen lower bound ln(1 + 1/E[Z]).
pub fn ergodic_rate_jensen(cfg: &SystemConfig) -> f64 {
    (1.0 / denominator_mean(cfg)).ln_1p()
}

/// Limit of the per-user rate as L, K → ∞ with L/K = c:
/// ln(1 + c·P_t/(P_t + σ²)).
pub fn ergodic_rate_asymptotic(c: f64, p_t: f64, sigma2: f64) -> Result<f64> {
    const OP: &str = "ergodic_rate_asymptotic";
    for (name, v) in [("c", c), ("p_t", p_t), ("sigma2", sigma2)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::domain(OP, format!("{name} must be positive, got {v}")));
        }
    }
    Ok((c * p_t / (p_t + sigma2)).ln_1p())
}

pub fn nats_to_bits(nats: f64) -> f64 {
    nats / std::f64::consts::LN_2
}
