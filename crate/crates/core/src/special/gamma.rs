use super::{ComplexValue, MAX_ITERATIONS};
use crate::error::{Error, Result};
use crate::numeric::{CompensatedSum, ComplexSum};

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("ln_gamma", format!("argument must be positive, got {x}")));
    }
    if x == 1.0 || x == 2.0 {
        return Ok(0.0);
    }
    if x.fract() == 0.0 && x <= 171.0 {
        return Ok(factorial(x as u32 - 1).ln());
    }
    if x < 0.5 {
        // Γ(x) = Γ(x + 1) / x keeps the Lanczos series in its accurate range.
        return Ok(ln_gamma(x + 1.0)? - x.ln());
    }
    let x = x - 1.0;
    let mut a = LANCZOS_COEF[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    Ok(0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln())
}

/// ln B(a, b) = ln Γ(a) + ln Γ(b) - ln Γ(a + b).
pub fn ln_beta(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::domain("ln_beta", format!("arguments must be positive, got ({a}, {b})")));
    }
    Ok(ln_gamma(a)? + ln_gamma(b)? - ln_gamma(a + b)?)
}

/// n! as a float (overflows to infinity above 170).
pub fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * f64::from(k))
}

/// Regularized upper incomplete gamma Q(L, x) = Γ(L, x)/Γ(L) for integer
/// L ≥ 1, via the finite sum e^{-x} Σ_{k<L} x^k/k!.
pub fn regularized_upper_gamma_int(l: u32, x: f64) -> Result<f64> {
    const OP: &str = "regularized_upper_gamma_int";
    if l < 1 {
        return Err(Error::domain(OP, "shape must be >= 1"));
    }
    if x.is_nan() || x < 0.0 {
        return Err(Error::domain(OP, format!("argument must be >= 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    let mut sum = CompensatedSum::new();
    if x <= 700.0 {
        // Each term is a Poisson probability, so no intermediate overflows.
        let mut term = (-x).exp();
        sum.add(term);
        for k in 1..l {
            term *= x / f64::from(k);
            sum.add(term);
        }
    } else {
        let ln_x = x.ln();
        let mut ln_term = -x;
        sum.add(ln_term.exp());
        for k in 1..l {
            ln_term += ln_x - f64::from(k).ln();
            sum.add(ln_term.exp());
        }
    }
    Ok(sum.value().clamp(0.0, 1.0))
}

/// Lower incomplete gamma Υ(n, z) = ∫_0^z s^{n-1} e^{-s} ds for integer
/// n ≥ 1 and complex z.
///
/// For |z| ≤ n the ascending series z^n e^{-z} Σ_m z^m / (n(n+1)⋯(n+m)) is
/// used; its terms shrink monotonically there. Beyond that the closed form
/// (n-1)!·(1 - e^{-z} Σ_{m<n} z^m/m!) is cancellation-free.
pub fn lower_incomplete_gamma_int(n: u32, z: ComplexValue) -> Result<ComplexValue> {
    const OP: &str = "lower_incomplete_gamma_int";
    if n < 1 {
        return Err(Error::domain(OP, "order must be >= 1"));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::domain(OP, "argument must be finite"));
    }
    if z.re == 0.0 && z.im == 0.0 {
        return Ok(ComplexValue::new(0.0, 0.0));
    }
    let value = if z.norm() <= f64::from(n) {
        lower_gamma_series(n, z)?
    } else {
        lower_gamma_closed_form(n, z)
    };
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { op: OP })
    }
}

fn lower_gamma_series(n: u32, z: ComplexValue) -> Result<ComplexValue> {
    let nf = f64::from(n);
    let mut term = ComplexValue::new(1.0 / nf, 0.0);
    let mut sum = ComplexSum::new();
    sum.add(term);
    let mut converged = false;
    for m in 1..=MAX_ITERATIONS {
        term *= z / (nf + m as f64);
        sum.add(term);
        if term.norm() <= 1e-17 * sum.value().norm() {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            op: "lower_incomplete_gamma_int (series)",
            iterations: MAX_ITERATIONS,
        });
    }
    Ok(z.powi(n as i32) * (-z).exp() * sum.value())
}

fn lower_gamma_closed_form(n: u32, z: ComplexValue) -> ComplexValue {
    let mut term = ComplexValue::new(1.0, 0.0);
    let mut partial = ComplexSum::new();
    partial.add(term);
    for m in 1..n {
        term *= z / f64::from(m);
        partial.add(term);
    }
    let one = ComplexValue::new(1.0, 0.0);
    (one - (-z).exp() * partial.value()) * factorial(n - 1)
}
