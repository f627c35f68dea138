//! Characteristic-function inversion.
//!
//! CDF by Gil-Pelaez, F(z) = 1/2 - (1/π)∫₀^∞ Im{e^{-ȷtz}φ(t)}/t dt, and
//! density by f(z) = (1/π)∫₀^∞ Re{e^{-ȷtz}φ(t)} dt.
//!
//! The semi-infinite integral is split into panels. Panel widths are
//! min(π/z, max(1, t/2)): they grow geometrically until they reach half an
//! oscillation period, then stay there. Each panel is integrated with
//! adaptive Gauss–Kronrod. The walk stops on whichever comes first:
//!
//! * five consecutive panels contribute less than `truncation_tol`;
//! * Wynn's epsilon transform of the partial sums at half-period panel
//!   boundaries gives three consecutive estimates that agree to `abs_tol`.

use crate::charfn::CharFn;
use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;
use crate::quadrature::{integrate, wynn_epsilon};
use crate::special::ComplexValue;
use std::f64::consts::PI;

/// Fixed-order rule applied inside each panel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PanelRule {
    #[default]
    GaussKronrod21,
}

/// Accuracy and budget controls for one inversion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
    pub panel_rule: PanelRule,
    pub truncation_tol: f64,
    pub t_min: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-9,
            rel_tol: 1e-7,
            max_panels: 2000,
            panel_rule: PanelRule::GaussKronrod21,
            truncation_tol: 1e-12,
            t_min: 1e-10,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        const OP: &str = "QuadratureSpec";
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !(positive(self.abs_tol) && positive(self.rel_tol) && positive(self.truncation_tol)) {
            return Err(Error::domain(OP, "tolerances must be positive"));
        }
        if self.max_panels < 1 {
            return Err(Error::domain(OP, "max_panels must be >= 1"));
        }
        if !positive(self.t_min) {
            return Err(Error::domain(OP, "t_min must be positive"));
        }
        Ok(())
    }

    pub fn with_max_panels(mut self, max_panels: usize) -> Self {
        self.max_panels = max_panels;
        self
    }
}

/// Outcome of one inversion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inversion {
    pub value: f64,
    /// Estimated absolute error of `value`.
    pub abs_error: f64,
    /// Number of panels consumed.
    pub panels: usize,
    /// True when the raw value fell outside its admissible range by less
    /// than the error slack and was clamped.
    pub clamped: bool,
}

/// The Gil-Pelaez integrand Im{e^{-ȷtz}φ(t)}/t. Its limit at t → 0 is E[V] - z.
pub fn gil_pelaez_integrand(cf: &dyn CharFn, z: f64, t: f64) -> Result<f64> {
    let v = ComplexValue::new(0.0, -t * z).exp() * cf.eval(t)?;
    Ok(v.im / t)
}

/// P{V ≤ z} for the variable with characteristic function `cf`.
pub fn gil_pelaez_cdf(z: f64, cf: &dyn CharFn, quad: &QuadratureSpec) -> Result<Inversion> {
    check_args("gil_pelaez_cdf", z, quad)?;
    let f = |t: f64| gil_pelaez_integrand(cf, z, t);
    // The integrand is flat near the origin at E[V] - z, so [0, t_min]
    // contributes t_min·f(t_min) to first order. Dropping it would cost
    // z·t_min/π, which is visible for large z.
    let head = quad.t_min * f(quad.t_min)?;
    // Tolerance on F = 1/2 - I/π, expressed on the integral I.
    let tol = |i: f64| PI * (quad.abs_tol + quad.rel_tol * (0.5 - i / PI).abs());
    let (integral, err, panels) = oscillatory_integral(&f, z, quad.t_min, quad, |i| tol(i + head))?;
    let raw = 0.5 - (head + integral) / PI;
    let abs_error = err / PI;
    let (value, clamped) = clamp(raw, 0.0, 1.0, quad.abs_tol.max(abs_error))?;
    Ok(Inversion {
        value,
        abs_error,
        panels,
        clamped,
    })
}

/// Density at z of the variable with characteristic function `cf`.
pub fn fourier_pdf(z: f64, cf: &dyn CharFn, quad: &QuadratureSpec) -> Result<Inversion> {
    check_args("fourier_pdf", z, quad)?;
    let f = |t: f64| -> Result<f64> {
        let v = ComplexValue::new(0.0, -t * z).exp() * cf.eval(t)?;
        Ok(v.re)
    };
    let tol = |i: f64| PI * quad.abs_tol + quad.rel_tol * i.abs();
    let (integral, err, panels) = oscillatory_integral(&f, z, 0.0, quad, tol)?;
    let raw = integral / PI;
    let abs_error = err / PI;
    let (value, clamped) = clamp(raw, 0.0, f64::INFINITY, quad.abs_tol.max(abs_error))?;
    Ok(Inversion {
        value,
        abs_error,
        panels,
        clamped,
    })
}

fn check_args(op: &'static str, z: f64, quad: &QuadratureSpec) -> Result<()> {
    quad.validate()?;
    if !(z.is_finite() && z > 0.0) {
        return Err(Error::domain(op, format!("evaluation point must be positive, got {z}")));
    }
    Ok(())
}

// Clamp into [lo, hi] when the overshoot is within `slack`, error otherwise.
fn clamp(raw: f64, lo: f64, hi: f64, slack: f64) -> Result<(f64, bool)> {
    let excess = (lo - raw).max(raw - hi);
    if excess <= 0.0 {
        Ok((raw, false))
    } else if excess <= slack {
        Ok((raw.clamp(lo, hi), true))
    } else {
        Err(Error::OutOfRange { value: raw, slack })
    }
}

const SMALL_RUN: usize = 5;
const AGREEING_ESTIMATES: usize = 3;
// Longest tail of partial sums fed to the epsilon table.
const EPSILON_WINDOW: usize = 40;
const SUBDIVISIONS_PER_PANEL: usize = 100;
// Extrapolated estimates must agree to this fraction of the tolerance: their
// spread understates the true error by up to two orders of magnitude when a
// slow beat e^{ȷt(m - z)} rides on the main oscillation.
const ACCEPT_FACTOR: f64 = 1e-2;
// An accepted estimate must survive until t has grown by this factor.
const CONFIRM_STRETCH: f64 = 2.0;

// ∫_{start}^∞ f(t) dt for an integrand oscillating like e^{-ȷtz}. `tol` maps
// the current estimate of the integral to its admissible absolute error.
// Returns (value, error estimate, panels used).
fn oscillatory_integral<F, T>(f: &F, z: f64, start: f64, quad: &QuadratureSpec, tol: T) -> Result<(f64, f64, usize)>
where
    F: Fn(f64) -> Result<f64>,
    T: Fn(f64) -> f64,
{
    let half_period = PI / z;
    let panel_abs = ACCEPT_FACTOR * quad.abs_tol;
    let mut sum = CompensatedSum::new();
    let mut err = 0.0;
    let mut small_run = 0;
    let mut capped_sums: Vec<f64> = Vec::new();
    let mut estimates: Vec<f64> = Vec::new();
    // (t at acceptance, panel at acceptance, estimate, spread)
    let mut candidate: Option<(f64, usize, f64, f64)> = None;
    let mut a = start;
    for panel in 1..=quad.max_panels {
        let cap = 1.0f64.max(a / 2.0);
        let capped = half_period <= cap;
        let b = a + if capped { half_period } else { cap };
        let r = integrate(f, a, b, panel_abs, ACCEPT_FACTOR * quad.rel_tol, SUBDIVISIONS_PER_PANEL)?;
        sum.add(r.value);
        err += r.error;
        a = b;

        if r.value.abs() < quad.truncation_tol {
            small_run += 1;
            if small_run >= SMALL_RUN {
                return Ok((sum.value(), err, panel));
            }
        } else {
            small_run = 0;
        }

        if !capped {
            continue;
        }
        capped_sums.push(sum.value());
        let from = capped_sums.len().saturating_sub(EPSILON_WINDOW);
        let Some(est) = wynn_epsilon(&capped_sums[from..]) else {
            continue;
        };
        estimates.push(est);
        let target = ACCEPT_FACTOR * tol(est);
        match candidate {
            Some((t_acc, p_acc, value, spread)) => {
                let drift = (est - value).abs();
                if drift > target {
                    candidate = None;
                } else if a >= CONFIRM_STRETCH * t_acc && panel >= p_acc + AGREEING_ESTIMATES {
                    return Ok((est, err + spread.max(drift) / ACCEPT_FACTOR, panel));
                }
            }
            None if estimates.len() >= AGREEING_ESTIMATES => {
                let last = &estimates[estimates.len() - AGREEING_ESTIMATES..];
                let hi = last.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let lo = last.iter().cloned().fold(f64::INFINITY, f64::min);
                if hi - lo <= target {
                    candidate = Some((a, panel, est, hi - lo));
                }
            }
            None => {}
        }
    }
    Err(Error::BudgetExceeded {
        panels: quad.max_panels,
        partial: sum.value(),
    })
}
