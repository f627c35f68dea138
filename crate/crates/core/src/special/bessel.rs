//! Modified Bessel functions of the second kind K_ν(z), integer ν, complex z
//! with |arg z| < π.
//!
//! K_0 and K_1 come from one of three regions:
//!
//! * |z| ≤ 2 (or Re z ≤ 0 with |z| < 40): ascending power/log series,
//! * 2 < |z| < 40, Re z > 0: Steed's continued fraction (Temme's CF2),
//! * |z| ≥ 40: the Hankel asymptotic expansion.
//!
//! Higher orders follow from the upward recurrence
//! K_{ν+1}(z) = K_{ν-1}(z) + (2ν/z) K_ν(z), which is stable for K.

use super::{ComplexValue, EULER_GAMMA, MAX_ITERATIONS};
use crate::error::{Error, Result};
use crate::numeric::ComplexSum;
use std::f64::consts::PI;

const SERIES_RADIUS: f64 = 2.0;
const ASYMPTOTIC_RADIUS: f64 = 40.0;
const EPS: f64 = 1e-17;

fn check_argument(op: &'static str, z: ComplexValue) -> Result<()> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::domain(op, "argument must be finite"));
    }
    if z.re == 0.0 && z.im == 0.0 {
        return Err(Error::domain(op, "K is singular at z = 0"));
    }
    if z.im == 0.0 && z.re < 0.0 {
        return Err(Error::domain(op, "argument on the branch cut |arg z| = π"));
    }
    Ok(())
}

/// K_ν(z) for integer ν ≥ 0.
pub fn bessel_k_int(nu: u32, z: ComplexValue) -> Result<ComplexValue> {
    const OP: &str = "bessel_k_int";
    check_argument(OP, z)?;
    let (k0, k1) = k01_unchecked(z)?;
    let value = match nu {
        0 => k0,
        1 => k1,
        _ => {
            let two_over_z = 2.0 / z;
            let (mut prev, mut cur) = (k0, k1);
            for j in 1..nu {
                let next = prev + two_over_z * f64::from(j) * cur;
                prev = cur;
                cur = next;
            }
            cur
        }
    };
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { op: OP })
    }
}

/// (K_0(z), K_1(z)).
pub fn bessel_k01(z: ComplexValue) -> Result<(ComplexValue, ComplexValue)> {
    check_argument("bessel_k01", z)?;
    k01_unchecked(z)
}

fn k01_unchecked(z: ComplexValue) -> Result<(ComplexValue, ComplexValue)> {
    let r = z.norm();
    if r >= ASYMPTOTIC_RADIUS {
        Ok((asymptotic(0, z)?, asymptotic(1, z)?))
    } else if r <= SERIES_RADIUS || z.re <= 0.0 {
        series_k01(z)
    } else {
        steed_k01(z)
    }
}

fn series_k01(z: ComplexValue) -> Result<(ComplexValue, ComplexValue)> {
    let y = z * z * 0.25;
    let log_half = (z * 0.5).ln();
    // ψ(k+1) = H_k - γ
    let mut psi_k1 = -EULER_GAMMA;
    let mut psi_k2 = 1.0 - EULER_GAMMA;
    // c_k = y^k/(k!)^2, d_k = y^k/(k!(k+1)!)
    let mut c = ComplexValue::new(1.0, 0.0);
    let mut d = ComplexValue::new(1.0, 0.0);
    let mut k0 = ComplexSum::new();
    let mut k1 = ComplexSum::new();
    k0.add(c * (psi_k1 - log_half));
    k1.add(d * (log_half - 0.5 * (psi_k1 + psi_k2)));
    for k in 1..=MAX_ITERATIONS {
        let kf = k as f64;
        c *= y / (kf * kf);
        d *= y / (kf * (kf + 1.0));
        psi_k1 += 1.0 / kf;
        psi_k2 += 1.0 / (kf + 1.0);
        let t0 = c * (psi_k1 - log_half);
        let t1 = d * (log_half - 0.5 * (psi_k1 + psi_k2));
        k0.add(t0);
        k1.add(t1);
        if t0.norm() <= EPS * k0.value().norm() && t1.norm() <= EPS * k1.value().norm() {
            return Ok((k0.value(), 1.0 / z + z * 0.5 * k1.value()));
        }
    }
    Err(Error::NoConvergence {
        op: "bessel_k (series)",
        iterations: MAX_ITERATIONS,
    })
}

// Steed's algorithm for Temme's CF2 at order μ = 0.
fn steed_k01(x: ComplexValue) -> Result<(ComplexValue, ComplexValue)> {
    let one = ComplexValue::new(1.0, 0.0);
    let mut b = (one + x) * 2.0;
    let mut d = one / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = ComplexValue::new(0.0, 0.0);
    let mut q2 = one;
    let a1 = 0.25;
    let mut q = ComplexValue::new(a1, 0.0);
    let mut c = ComplexValue::new(a1, 0.0);
    let mut a = -a1;
    let mut s = one + q * delh;
    for i in 2..=MAX_ITERATIONS {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -c * a / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = one / (b + d * a);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if dels.norm() < EPS * s.norm() {
            let h = h * a1;
            let k0 = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
            let k1 = k0 * (x + 0.5 - h) / x;
            return Ok((k0, k1));
        }
    }
    Err(Error::NoConvergence {
        op: "bessel_k (continued fraction)",
        iterations: MAX_ITERATIONS,
    })
}

fn asymptotic(nu: u32, z: ComplexValue) -> Result<ComplexValue> {
    let mu = 4.0 * f64::from(nu) * f64::from(nu);
    let mut term = ComplexValue::new(1.0, 0.0);
    let mut sum = ComplexSum::new();
    sum.add(term);
    let mut last = f64::INFINITY;
    for k in 1..=MAX_ITERATIONS {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        term *= (mu - odd * odd) / (8.0 * kf * z);
        let size = term.norm();
        if size > last {
            // Past the smallest term: the series has started to diverge.
            break;
        }
        sum.add(term);
        last = size;
        if size <= EPS * sum.value().norm() {
            return Ok((PI / (2.0 * z)).sqrt() * (-z).exp() * sum.value());
        }
    }
    if last <= 1e-15 * sum.value().norm() {
        return Ok((PI / (2.0 * z)).sqrt() * (-z).exp() * sum.value());
    }
    Err(Error::NoConvergence {
        op: "bessel_k (asymptotic)",
        iterations: MAX_ITERATIONS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexValue {
        ComplexValue::new(re, im)
    }

    fn rel(a: ComplexValue, b: ComplexValue) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn real_reference_values() {
        // ∫_0^∞ e^{-cosh u} du and ∫_0^∞ e^{-cosh u} cosh u du (mpmath, 25 digits)
        let k0 = bessel_k_int(0, c(1.0, 0.0)).unwrap();
        let k1 = bessel_k_int(1, c(1.0, 0.0)).unwrap();
        assert!((k0.re - 0.421_024_438_240_708_3).abs() < 1e-15);
        assert!((k1.re - 0.601_907_230_197_234_6).abs() < 1e-15);
        assert!(k0.im.abs() < 1e-300 && k1.im.abs() < 1e-300);
    }

    #[test]
    fn complex_reference_values() {
        // mpmath besselk
        let cases = [
            (0, c(1.0, 1.0), c(0.080_197_726_946_517_82, -0.357_277_459_285_330_25)),
            (1, c(1.0, 1.0), c(0.024_568_305_523_740_35, -0.459_719_473_801_189_36)),
            (2, c(1.0, 1.0), c(-0.354_953_441_330_931_2, -0.841_565_238_610_259_96)),
            (0, c(3.0, -3.0), c(-0.028_877_428_247_068_38, -0.006_858_825_554_112_851)),
            (1, c(3.0, -3.0), c(-0.030_731_622_671_354_956, -0.009_661_855_257_887_832)),
        ];
        for (nu, z, exact) in cases {
            let v = bessel_k_int(nu, z).unwrap();
            assert!(rel(v, exact) < 1e-13, "K_{nu}({z}) = {v}, want {exact}");
        }
    }

    #[test]
    fn recurrence_holds_for_nu2() {
        let z = c(1.0, 1.0);
        let k0 = bessel_k_int(0, z).unwrap();
        let k1 = bessel_k_int(1, z).unwrap();
        let k2 = bessel_k_int(2, z).unwrap();
        assert!(rel(k2, k0 + 2.0 / z * k1) < 1e-10);
    }

    #[test]
    fn regions_agree_near_boundaries() {
        for theta in [-1.2, -0.785, 0.0, 0.785, 1.2] {
            for r in [SERIES_RADIUS, ASYMPTOTIC_RADIUS] {
                let z = ComplexValue::from_polar(r * (1.0 + 1e-14), theta);
                let inner = ComplexValue::from_polar(r * (1.0 - 1e-14), theta);
                let (a0, a1) = k01_unchecked(inner).unwrap();
                let (b0, b1) = k01_unchecked(z).unwrap();
                assert!(rel(a0, b0) < 1e-11, "K0 r={r} theta={theta}: {a0} vs {b0}");
                assert!(rel(a1, b1) < 1e-11, "K1 r={r} theta={theta}: {a1} vs {b1}");
            }
        }
    }

    #[test]
    fn domain_errors() {
        assert!(bessel_k_int(0, c(0.0, 0.0)).is_err());
        assert!(bessel_k_int(3, c(-1.0, 0.0)).is_err());
        assert!(bessel_k_int(0, c(f64::NAN, 1.0)).is_err());
    }

    #[test]
    fn schwarz_reflection() {
        for &(re, im) in &[(0.3, 0.2), (1.5, -2.5), (5.0, 7.0), (30.0, 30.0), (-1.0, 0.5), (60.0, -2.0)] {
            for nu in [0u32, 1, 4, 9] {
                let z = c(re, im);
                let a = bessel_k_int(nu, z.conj()).unwrap();
                let b = bessel_k_int(nu, z).unwrap().conj();
                assert!(rel(a, b) < 1e-14, "nu={nu} z={z}");
            }
        }
    }
}
