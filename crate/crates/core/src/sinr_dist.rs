//! SINR distribution under matched-filter precoding.
//!
//! The exact law comes from inverting CF_Z at 1/γ, since SINR = 1/Z. The
//! remaining evaluators are the Beta moment-matching approximation, its
//! high-SNR limit, and the massive-array limit of SINR/L.

use std::fmt;
use std::str::FromStr;

use crate::charfn::{DenominatorCf, ScaledInterferenceCf, SqrtBranch};
use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::inversion::{fourier_pdf, gil_pelaez_cdf, Inversion, QuadratureSpec};
use crate::numeric::logspace;
use crate::parallel::{map_slice, Execution};
use crate::quadrature::integrate;
use crate::special::{ln_beta, ln_gamma, regularized_incomplete_beta, regularized_upper_gamma_int};

/// Whether a curve holds probabilities or densities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CurveKind {
    Cdf,
    Pdf,
}

/// Which evaluator produced a curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CurveMethod {
    Exact,
    BetaApprox,
    HighSnr,
    MassiveLimit,
    MonteCarlo,
}

impl CurveMethod {
    pub const ALL: [CurveMethod; 5] = [
        CurveMethod::Exact,
        CurveMethod::BetaApprox,
        CurveMethod::HighSnr,
        CurveMethod::MassiveLimit,
        CurveMethod::MonteCarlo,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CurveMethod::Exact => "exact",
            CurveMethod::BetaApprox => "beta_approx",
            CurveMethod::HighSnr => "high_snr",
            CurveMethod::MassiveLimit => "massive_limit",
            CurveMethod::MonteCarlo => "monte_carlo",
        }
    }

    /// Analytic methods carry per-point error estimates.
    pub fn is_analytic(&self) -> bool {
        !matches!(self, CurveMethod::MonteCarlo)
    }
}

impl fmt::Display for CurveMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CurveMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CurveMethod::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::domain("CurveMethod", format!("unknown method '{s}'")))
    }
}

impl fmt::Display for CurveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CurveKind::Cdf => "cdf",
            CurveKind::Pdf => "pdf",
        })
    }
}

/// A distribution sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionCurve {
    grid: Vec<f64>,
    values: Vec<f64>,
    kind: CurveKind,
    method: CurveMethod,
    error_estimates: Option<Vec<f64>>,
    cfg: SystemConfig,
}

// Slack for monotonicity of computed CDFs.
const MONOTONE_SLACK: f64 = 1e-8;

impl DistributionCurve {
    pub fn new(
        grid: Vec<f64>,
        values: Vec<f64>,
        kind: CurveKind,
        method: CurveMethod,
        error_estimates: Option<Vec<f64>>,
        cfg: SystemConfig,
    ) -> Result<Self> {
        const OP: &str = "DistributionCurve::new";
        check_grid(OP, &grid)?;
        if values.len() != grid.len() || error_estimates.as_ref().is_some_and(|e| e.len() != grid.len()) {
            return Err(Error::domain(OP, "values and grid differ in length"));
        }
        match kind {
            CurveKind::Cdf => {
                if values.iter().any(|v| !(0.0..=1.0).contains(v)) {
                    return Err(Error::domain(OP, "CDF value outside [0, 1]"));
                }
                if values.windows(2).any(|w| w[1] < w[0] - MONOTONE_SLACK) {
                    return Err(Error::domain(OP, "CDF values decrease"));
                }
            }
            CurveKind::Pdf => {
                if values.iter().any(|v| !(*v >= 0.0)) {
                    return Err(Error::domain(OP, "negative or NaN density"));
                }
            }
        }
        Ok(DistributionCurve {
            grid,
            values,
            kind,
            method,
            error_estimates,
            cfg,
        })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn kind(&self) -> CurveKind {
        self.kind
    }

    pub fn method(&self) -> CurveMethod {
        self.method
    }

    pub fn error_estimates(&self) -> Option<&[f64]> {
        self.error_estimates.as_deref()
    }

    pub fn cfg(&self) -> &SystemConfig {
        &self.cfg
    }

    /// max_i |self_i - other_i| over a shared grid.
    pub fn sup_distance(&self, other: &DistributionCurve) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::domain("sup_distance", "curves use different grids"));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

pub(crate) fn check_grid(op: &'static str, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::domain(op, "empty grid"));
    }
    if grid.iter().any(|g| !g.is_finite()) {
        return Err(Error::domain(op, "grid contains non-finite values"));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain(op, "grid must be strictly increasing"));
    }
    Ok(())
}

/// Log-spaced γ grid over [1e-3, 1e3]·L/K.
pub fn default_gamma_grid(cfg: &SystemConfig, points: usize) -> Vec<f64> {
    let centre = f64::from(cfg.antennas()) / f64::from(cfg.users());
    logspace(1e-3 * centre, 1e3 * centre, points)
}

fn check_positive(op: &'static str, name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(op, format!("{name} must be positive and finite, got {x}")))
    }
}

fn exact_value(value: f64) -> Inversion {
    Inversion {
        value,
        abs_error: 0.0,
        panels: 0,
        clamped: false,
    }
}

/// P{SINR ≤ γ}.
pub fn sinr_cdf_exact(gamma: f64, cfg: &SystemConfig, quad: &QuadratureSpec) -> Result<Inversion> {
    sinr_cdf_exact_with_branch(gamma, cfg, quad, SqrtBranch::Principal)
}

/// [`sinr_cdf_exact`] with an explicit square-root branch in the noise-term
/// CF. Only the principal branch gives a distribution; the other exists for
/// negative-control testing.
pub fn sinr_cdf_exact_with_branch(
    gamma: f64,
    cfg: &SystemConfig,
    quad: &QuadratureSpec,
    branch: SqrtBranch,
) -> Result<Inversion> {
    check_positive("sinr_cdf_exact", "gamma", gamma)?;
    if cfg.users() == 1 {
        // SINR = P_t‖h‖²/σ² with ‖h‖² ~ Gamma(L, 1).
        let x = gamma * cfg.sigma2() / cfg.p_t();
        return Ok(exact_value(1.0 - regularized_upper_gamma_int(cfg.antennas(), x)?));
    }
    let z = gil_pelaez_cdf(1.0 / gamma, &DenominatorCf::with_branch(*cfg, branch), quad)?;
    Ok(Inversion {
        value: 1.0 - z.value,
        ..z
    })
}

/// Density of the SINR at γ, f_Z(1/γ)/γ².
pub fn sinr_pdf_exact(gamma: f64, cfg: &SystemConfig, quad: &QuadratureSpec) -> Result<Inversion> {
    check_positive("sinr_pdf_exact", "gamma", gamma)?;
    if cfg.users() == 1 {
        let scale = cfg.sigma2() / cfg.p_t();
        let x = gamma * scale;
        let l = f64::from(cfg.antennas());
        let ln_f = (l - 1.0) * x.ln() - x - ln_gamma(l)?;
        return Ok(exact_value(scale * ln_f.exp()));
    }
    let f = fourier_pdf(1.0 / gamma, &DenominatorCf::new(*cfg), quad)?;
    let jac = 1.0 / (gamma * gamma);
    Ok(Inversion {
        value: f.value * jac,
        abs_error: f.abs_error * jac,
        ..f
    })
}

/// Outage probability at threshold γ_th, which is the SINR CDF there.
pub fn outage_probability(gamma_th: f64, cfg: &SystemConfig, quad: &QuadratureSpec) -> Result<Inversion> {
    sinr_cdf_exact(gamma_th, cfg, quad)
}

/// Shapes of the Beta law matched to the first two moments of X/(K-1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaApproxParams {
    pub alpha: f64,
    pub beta: f64,
}

/// α = ((K-1)(L+1) - 1)/L, β = α(L-1).
pub fn beta_approx_params(antennas: u32, users: u32) -> Result<BetaApproxParams> {
    const OP: &str = "beta_approx_params";
    if antennas < 2 || users < 2 {
        return Err(Error::domain(OP, "needs L >= 2 and K >= 2"));
    }
    let l = f64::from(antennas);
    let k1 = f64::from(users - 1);
    let alpha = (k1 * (l + 1.0) - 1.0) / l;
    Ok(BetaApproxParams {
        alpha,
        beta: alpha * (l - 1.0),
    })
}

/// ξ = min(1/((K-1)γ), 1).
fn xi(gamma: f64, interferers: u32) -> f64 {
    (1.0 / (f64::from(interferers) * gamma)).min(1.0)
}

/// Beta-approximation CDF of the SINR:
/// 1 - ∫₀^ξ Beta(x; α, β)·Q(L, a/(1/γ - (K-1)x)) dx.
pub fn sinr_cdf_beta_approx(gamma: f64, cfg: &SystemConfig, quad: &QuadratureSpec) -> Result<Inversion> {
    const OP: &str = "sinr_cdf_beta_approx";
    check_positive(OP, "gamma", gamma)?;
    cfg.require_interferers(OP)?;
    quad.validate()?;
    let BetaApproxParams { alpha, beta } = beta_approx_params(cfg.antennas(), cfg.users())?;
    let ln_b = ln_beta(alpha, beta)?;
    let k1 = f64::from(cfg.interferers());
    let a = cfg.noise_ratio();
    let inv_gamma = 1.0 / gamma;
    let l = cfg.antennas();
    let integrand = |x: f64| -> Result<f64> {
        let d = inv_gamma - k1 * x;
        if d <= 0.0 || x >= 1.0 {
            return Ok(0.0);
        }
        let arg = a / d;
        if !arg.is_finite() {
            return Ok(0.0);
        }
        let mut ln_w = (beta - 1.0) * (-x).ln_1p() - ln_b;
        if alpha != 1.0 {
            ln_w += (alpha - 1.0) * x.ln();
        }
        Ok(ln_w.exp() * regularized_upper_gamma_int(l, arg)?)
    };
    let upper = xi(gamma, cfg.interferers());
    let r = integrate(&integrand, 0.0, upper, quad.abs_tol, quad.rel_tol, quad.max_panels)?;
    if !r.converged {
        return Err(Error::BudgetExceeded {
            panels: quad.max_panels,
            partial: 1.0 - r.value,
        });
    }
    let raw = 1.0 - r.value;
    let slack = quad.abs_tol.max(r.error);
    if raw < -slack || raw > 1.0 + slack {
        return Err(Error::OutOfRange { value: raw, slack });
    }
    Ok(Inversion {
        value: raw.clamp(0.0, 1.0),
        abs_error: r.error,
        panels: 1,
        clamped: !(0.0..=1.0).contains(&raw),
    })
}

/// High-SNR limit of the Beta approximation, 1 - I_ξ(α, β).
pub fn sinr_cdf_high_snr_beta(gamma: f64, antennas: u32, users: u32) -> Result<f64> {
    check_positive("sinr_cdf_high_snr_beta", "gamma", gamma)?;
    let BetaApproxParams { alpha, beta } = beta_approx_params(antennas, users)?;
    let x = xi(gamma, users - 1);
    Ok(1.0 - regularized_incomplete_beta(x, alpha, beta)?)
}

/// P{1/((K-1)·SINR) ≤ x} at the configured transmit power.
pub fn scaled_inverse_sinr_cdf(x: f64, cfg: &SystemConfig, quad: &QuadratureSpec) -> Result<Inversion> {
    const OP: &str = "scaled_inverse_sinr_cdf";
    check_positive(OP, "x", x)?;
    cfg.require_interferers(OP)?;
    gil_pelaez_cdf(f64::from(cfg.interferers()) * x, &DenominatorCf::new(*cfg), quad)
}

/// P_t → ∞ limit of `scaled_inverse_sinr_cdf`: the CDF of X' = X/(K-1),
/// which is supported on [0, 1].
pub fn high_snr_limit_cdf(x: f64, antennas: u32, users: u32, quad: &QuadratureSpec) -> Result<Inversion> {
    const OP: &str = "high_snr_limit_cdf";
    check_positive(OP, "x", x)?;
    if users < 2 {
        return Err(Error::domain(OP, "needs K >= 2"));
    }
    if x >= 1.0 {
        return Ok(exact_value(1.0));
    }
    let cf = ScaledInterferenceCf::new(antennas, users - 1, 1.0 / f64::from(users - 1))?;
    gil_pelaez_cdf(x, &cf, quad)
}

/// Massive-array limit of P{SINR/L ≤ x}: with a = Kσ²/P_t, 1 when 1/x ≤ a,
/// else Q(K-1, 1/x - a).
pub fn massive_limit_cdf(x: f64, users: u32, p_t: f64, sigma2: f64) -> Result<f64> {
    const OP: &str = "massive_limit_cdf";
    check_positive(OP, "x", x)?;
    check_positive(OP, "p_t", p_t)?;
    check_positive(OP, "sigma2", sigma2)?;
    if users < 2 {
        return Err(Error::domain(OP, "needs K >= 2"));
    }
    let a = f64::from(users) * sigma2 / p_t;
    let arg = 1.0 / x - a;
    if arg <= 0.0 {
        return Ok(1.0);
    }
    regularized_upper_gamma_int(users - 1, arg)
}

/// e^ε - e^{-ε}, the bound on Pr{|X'_i - L·X_i| ≤ ε}.
pub fn nonconvergence_probability_bound(eps: f64) -> Result<f64> {
    check_positive("nonconvergence_probability_bound", "eps", eps)?;
    Ok(2.0 * eps.sinh())
}

/// Evaluate one analytic method at a single SINR value γ.
pub fn evaluate(
    method: CurveMethod,
    kind: CurveKind,
    gamma: f64,
    cfg: &SystemConfig,
    quad: &QuadratureSpec,
) -> Result<Inversion> {
    const OP: &str = "sinr_dist::evaluate";
    match (method, kind) {
        (CurveMethod::Exact, CurveKind::Cdf) => sinr_cdf_exact(gamma, cfg, quad),
        (CurveMethod::Exact, CurveKind::Pdf) => sinr_pdf_exact(gamma, cfg, quad),
        (CurveMethod::BetaApprox, CurveKind::Cdf) => sinr_cdf_beta_approx(gamma, cfg, quad),
        (CurveMethod::HighSnr, CurveKind::Cdf) => {
            Ok(exact_value(sinr_cdf_high_snr_beta(gamma, cfg.antennas(), cfg.users())?))
        }
        (CurveMethod::MassiveLimit, CurveKind::Cdf) => {
            // SINR ≤ γ  ⇔  SINR/L ≤ γ/L
            let x = gamma / f64::from(cfg.antennas());
            Ok(exact_value(massive_limit_cdf(x, cfg.users(), cfg.p_t(), cfg.sigma2())?))
        }
        (CurveMethod::MonteCarlo, _) => Err(Error::domain(OP, "monte_carlo is not an analytic method")),
        (m, CurveKind::Pdf) => Err(Error::domain(OP, format!("no density for method {m}"))),
    }
}

/// Analytic curve over a γ grid. Fails on the first point that fails.
pub fn curve(
    method: CurveMethod,
    kind: CurveKind,
    grid: &[f64],
    cfg: &SystemConfig,
    quad: &QuadratureSpec,
    exec: Execution,
) -> Result<DistributionCurve> {
    check_grid("sinr_dist::curve", grid)?;
    let points = map_slice(grid, exec, |&g| evaluate(method, kind, g, cfg, quad));
    let mut values = Vec::with_capacity(grid.len());
    let mut errors = Vec::with_capacity(grid.len());
    for p in points {
        let p = p?;
        values.push(p.value);
        errors.push(p.abs_error);
    }
    DistributionCurve::new(grid.to_vec(), values, kind, method, Some(errors), *cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cfg(l: u32, k: u32, p: f64) -> SystemConfig {
        SystemConfig::new(l, k, p, 1.0).unwrap()
    }

    fn q() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn beta_params_examples() {
        let p = beta_approx_params(8, 4).unwrap();
        assert_eq!((p.alpha, p.beta), (3.25, 22.75));
        for l in [2u32, 5, 64] {
            let p = beta_approx_params(l, 2).unwrap();
            assert_eq!((p.alpha, p.beta), (1.0, f64::from(l - 1)));
        }
        assert!(beta_approx_params(8, 1).is_err());
    }

    #[test]
    fn beta_params_match_moments() {
        for &(l, k) in &[(4u32, 4u32), (8, 4), (8, 6), (16, 8), (64, 16)] {
            let BetaApproxParams { alpha, beta } = beta_approx_params(l, k).unwrap();
            let (lf, kf) = (f64::from(l), f64::from(k));
            let mean = alpha / (alpha + beta);
            let var = alpha * beta / ((alpha + beta).powi(2) * (alpha + beta + 1.0));
            assert!((mean - 1.0 / lf).abs() < 1e-12);
            assert!((var - (lf - 1.0) / (lf * lf * (kf - 1.0) * (lf + 1.0))).abs() < 1e-12);
        }
    }

    #[test]
    fn high_snr_examples() {
        assert_eq!(sinr_cdf_high_snr_beta(0.3, 8, 4).unwrap(), 0.0);
        let v = sinr_cdf_high_snr_beta(2.0, 8, 2).unwrap();
        assert!((v - 0.0078125).abs() < 1e-14);
    }

    #[test]
    fn massive_limit_examples() {
        let v = massive_limit_cdf(0.5, 4, 10.0, 1.0).unwrap();
        assert!((v - 0.783_358_489_819_263).abs() < 1e-12);
        assert_eq!(massive_limit_cdf(1e9, 4, 10.0, 1.0).unwrap(), 1.0);
        assert!(massive_limit_cdf(1e-3, 4, 10.0, 1.0).unwrap() < 1e-100);
    }

    #[test]
    fn bound_example() {
        let b = nonconvergence_probability_bound(0.1).unwrap();
        assert!((b - 0.200_333_500_039_688_1).abs() < 1e-15);
        assert!(nonconvergence_probability_bound(1e-12).unwrap() < 1e-11);
        assert!(nonconvergence_probability_bound(0.0).is_err());
    }

    #[test]
    fn exact_cdf_limits() {
        let g = cfg(8, 4, 10.0);
        assert!(sinr_cdf_exact(1e4, &g, &q()).unwrap().value >= 1.0 - 1e-6);
        assert!(sinr_cdf_exact(1e-4, &g, &q()).unwrap().value <= 1e-6);
    }

    #[test]
    fn two_users_at_high_snr_is_beta() {
        let l = 8;
        let g = cfg(l, 2, 1e8);
        for gamma in [0.5, 1.2, 2.0, 5.0, 20.0] {
            let exact = sinr_cdf_exact(gamma, &g, &q()).unwrap().value;
            let x = (1.0 / gamma).min(1.0);
            let beta = 1.0 - regularized_incomplete_beta(x, 1.0, f64::from(l - 1)).unwrap();
            assert!((exact - beta).abs() < 1e-4, "γ={gamma}: {exact} vs {beta}");
        }
    }

    #[test]
    fn beta_approx_examples() {
        let g = cfg(8, 4, 10.0);
        let a = sinr_cdf_beta_approx(0.8, &g, &q()).unwrap().value;
        let e = sinr_cdf_exact(0.8, &g, &q()).unwrap().value;
        assert!((a - e).abs() < 5e-3, "{a} vs {e}");
        // ξ = 1 with negligible noise: the whole Beta mass survives
        let v = sinr_cdf_beta_approx(0.2, &cfg(8, 4, 1e12), &q()).unwrap().value;
        assert!(v.abs() < 1e-9);
        let g2 = cfg(8, 2, 1e6);
        for gamma in [0.3, 1.0, 3.0, 10.0] {
            let a = sinr_cdf_beta_approx(gamma, &g2, &q()).unwrap().value;
            let e = sinr_cdf_exact(gamma, &g2, &q()).unwrap().value;
            assert!((a - e).abs() < 1e-4, "γ={gamma}: {a} vs {e}");
        }
    }

    #[test]
    fn beta_approx_close_to_exact() {
        for &(l, k, p) in &[(4u32, 4u32, 10.0), (8, 4, 10.0), (8, 6, 1.0), (16, 8, 100.0)] {
            let g = cfg(l, k, p);
            let grid = default_gamma_grid(&g, 25);
            let a = curve(CurveMethod::BetaApprox, CurveKind::Cdf, &grid, &g, &q(), Execution::Sequential).unwrap();
            let e = curve(CurveMethod::Exact, CurveKind::Cdf, &grid, &g, &q(), Execution::Sequential).unwrap();
            let d = a.sup_distance(&e).unwrap();
            assert!(d <= 1e-2, "L={l} K={k} P={p}: {d}");
        }
    }

    #[test]
    fn pdf_matches_cdf_derivative() {
        let g = cfg(8, 4, 10.0);
        for gamma in [0.3, 1.0, 2.5] {
            let h = 1e-4 * gamma;
            let up = sinr_cdf_exact(gamma + h, &g, &q()).unwrap().value;
            let dn = sinr_cdf_exact(gamma - h, &g, &q()).unwrap().value;
            let p = sinr_pdf_exact(gamma, &g, &q()).unwrap().value;
            assert!(((up - dn) / (2.0 * h) - p).abs() < 1e-4f64.max(1e-3 * p), "γ={gamma}");
        }
    }

    #[test]
    fn pdf_integrates_to_cdf_difference() {
        let g = cfg(8, 4, 10.0);
        let (a, b) = (0.4, 1.6);
        let f = |x: f64| sinr_pdf_exact(x, &g, &q()).map(|r| r.value);
        let r = integrate(&f, a, b, 1e-8, 1e-8, 200).unwrap();
        let diff = sinr_cdf_exact(b, &g, &q()).unwrap().value - sinr_cdf_exact(a, &g, &q()).unwrap().value;
        assert!((r.value - diff).abs() < 1e-4);
    }

    #[test]
    fn single_user_closed_form() {
        let g = cfg(6, 1, 3.0);
        let c = sinr_cdf_exact(5.0, &g, &q()).unwrap().value;
        assert!((c - (1.0 - regularized_upper_gamma_int(6, 5.0 / 3.0).unwrap())).abs() < 1e-15);
        let h = 1e-5;
        let d = (sinr_cdf_exact(5.0 + h, &g, &q()).unwrap().value - sinr_cdf_exact(5.0 - h, &g, &q()).unwrap().value) / (2.0 * h);
        assert!((d - sinr_pdf_exact(5.0, &g, &q()).unwrap().value).abs() < 1e-8);
        assert!(sinr_cdf_beta_approx(1.0, &g, &q()).is_err());
    }

    #[test]
    fn scaled_inverse_approaches_limit() {
        let (l, k) = (8, 4);
        let xs = [0.05, 0.1, 0.125, 0.2, 0.4];
        let mut last = f64::INFINITY;
        for p in [1.0, 10.0, 100.0, 1e3, 1e4] {
            let g = cfg(l, k, p);
            let gap = xs
                .iter()
                .map(|&x| {
                    let a = scaled_inverse_sinr_cdf(x, &g, &q()).unwrap().value;
                    let b = high_snr_limit_cdf(x, l, k, &q()).unwrap().value;
                    (a - b).abs()
                })
                .fold(0.0, f64::max);
            assert!(gap < last, "P={p}: {gap} !< {last}");
            last = gap;
        }
        assert!(last < 2e-3);
        assert_eq!(high_snr_limit_cdf(1.0, l, k, &q()).unwrap().value, 1.0);
    }

    #[test]
    fn method_names_round_trip() {
        for m in CurveMethod::ALL {
            assert_eq!(m.as_str().parse::<CurveMethod>().unwrap(), m);
        }
        assert!("nope".parse::<CurveMethod>().is_err());
    }

    #[test]
    fn curve_rejects_bad_grids() {
        let g = cfg(8, 4, 10.0);
        assert!(curve(CurveMethod::Exact, CurveKind::Cdf, &[], &g, &q(), Execution::Sequential).is_err());
        assert!(curve(CurveMethod::Exact, CurveKind::Cdf, &[1.0, 1.0], &g, &q(), Execution::Sequential).is_err());
        assert!(curve(CurveMethod::HighSnr, CurveKind::Pdf, &[1.0], &g, &q(), Execution::Sequential).is_err());
    }

    #[test]
    fn curves_identical_across_execution_policies() {
        let g = cfg(8, 4, 10.0);
        let grid = default_gamma_grid(&g, 12);
        let a = curve(CurveMethod::Exact, CurveKind::Cdf, &grid, &g, &q(), Execution::Sequential).unwrap();
        let b = curve(CurveMethod::Exact, CurveKind::Cdf, &grid, &g, &q(), Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn massive_limit_is_a_cdf(k in 2u32..12, p_db in -10.0f64..30.0, x in 1e-3f64..10.0, dx in 1e-3f64..1.0) {
            let p = 10f64.powf(p_db / 10.0);
            let a = massive_limit_cdf(x, k, p, 1.0).unwrap();
            let b = massive_limit_cdf(x + dx, k, p, 1.0).unwrap();
            prop_assert!((0.0..=1.0).contains(&a));
            prop_assert!(b >= a);
        }

        #[test]
        fn exact_cdf_is_monotone(l in 4u32..20, k in 2u32..8, p_db in -10.0f64..30.0, g0 in 0.01f64..5.0, dg in 1e-3f64..1.0) {
            let g = cfg(l, k, 10f64.powf(p_db / 10.0));
            let a = sinr_cdf_exact(g0, &g, &q()).unwrap().value;
            let b = sinr_cdf_exact(g0 + dg, &g, &q()).unwrap().value;
            prop_assert!(b >= a - 1e-8);
        }
    }
}
