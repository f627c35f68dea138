//! Invariant suite run by `mfsinr selftest`.

use mfsinr::charfn::SqrtBranch;
use mfsinr::inversion::{fourier_pdf, gil_pelaez_cdf, QuadratureSpec};
use mfsinr::montecarlo::{
    dkw_half_width, empirical_cdf_values, ks_test, sample_normalized_interference, sample_sinr, two_sample_ks_test,
    McSpec, Sampler,
};
use mfsinr::numeric::{linspace, logspace};
use mfsinr::parallel::Execution;
use mfsinr::quadrature::integrate;
use mfsinr::sinr_dist::{sinr_cdf_beta_approx, sinr_cdf_exact, sinr_cdf_exact_with_branch, sinr_pdf_exact};
use mfsinr::special::{bessel_k01, bessel_k_int, factorial, lower_incomplete_gamma_int, regularized_upper_gamma_int};
use mfsinr::{ComplexValue, Error, SystemConfig};

const EXEC: Execution = Execution::Parallel;
const KS_LEVEL: f64 = 1e-3;

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> Check {
    Check { name, passed, detail }
}

fn failed(name: &'static str, e: impl std::fmt::Display) -> Check {
    check(name, false, format!("error: {e}"))
}

#[derive(Debug, Clone, Copy)]
pub struct SelftestSpec {
    pub samples: usize,
    pub seed: u64,
    pub flip_branch: bool,
}

pub fn run(spec: &SelftestSpec) -> Vec<Check> {
    let mut checks = vec![
        incomplete_gamma(),
        bessel_recurrence(),
        bessel_reference(),
        known_cf_inversion(),
        interference_ks(),
        direct_vs_decomposed(),
    ];
    let sys = SystemConfig::new(8, 4, 10.0, 1.0).expect("valid system");
    let branch = if spec.flip_branch {
        SqrtBranch::Flipped
    } else {
        SqrtBranch::Principal
    };
    match sample_sinr(&sys, &McSpec::new(spec.samples, spec.seed), EXEC) {
        Ok(samples) => {
            let primary = dkw_check(&sys, &samples, branch);
            checks.push(check("exact CDF inside 99% DKW band", primary.0, primary.1));
            let control = dkw_check(&sys, &samples, SqrtBranch::Flipped);
            checks.push(check(
                "negative control: flipped branch is rejected",
                !control.0,
                format!("flipped-branch check {}: {}", if control.0 { "passed" } else { "failed" }, control.1),
            ));
        }
        Err(e) => checks.push(failed("exact CDF inside 99% DKW band", e)),
    }
    checks.push(beta_approx_distance(&sys));
    checks.push(pdf_cdf_consistency(&sys));
    checks.push(budget_exhaustion(&sys));
    checks
}

fn incomplete_gamma() -> Check {
    const NAME: &str = "incomplete gamma complementarity and recurrence";
    let mut worst: f64 = 0.0;
    for n in 1..=12u32 {
        for x in [0.05, 0.7, 3.0, 11.0, 40.0] {
            let (lower, upper) = match (
                lower_incomplete_gamma_int(n, ComplexValue::new(x, 0.0)),
                regularized_upper_gamma_int(n, x),
            ) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(e), _) | (_, Err(e)) => return failed(NAME, e),
            };
            worst = worst.max((lower.re / factorial(n - 1) + upper - 1.0).abs());
        }
        for z in [ComplexValue::new(0.3, 2.0), ComplexValue::new(4.0, -7.0), ComplexValue::new(0.0, 25.0)] {
            let (a, b) = match (lower_incomplete_gamma_int(n, z), lower_incomplete_gamma_int(n + 1, z)) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(e), _) | (_, Err(e)) => return failed(NAME, e),
            };
            let rhs = f64::from(n) * a - z.powu(n) * (-z).exp();
            worst = worst.max((b - rhs).norm() / b.norm().max(1e-300));
        }
    }
    check(NAME, worst <= 1e-9, format!("max deviation {worst:.2e} (limit 1e-9)"))
}

fn bessel_recurrence() -> Check {
    const NAME: &str = "Bessel K recurrence";
    let mut worst: f64 = 0.0;
    for z in [
        ComplexValue::new(0.5, 0.5),
        ComplexValue::new(3.0, -4.0),
        ComplexValue::new(12.0, 30.0),
        ComplexValue::new(60.0, 1.0),
    ] {
        for nu in 1..10u32 {
            let k = (bessel_k_int(nu - 1, z), bessel_k_int(nu, z), bessel_k_int(nu + 1, z));
            let (km, k0, kp) = match k {
                (Ok(a), Ok(b), Ok(c)) => (a, b, c),
                (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => return failed(NAME, e),
            };
            let rhs = km + 2.0 * f64::from(nu) / z * k0;
            worst = worst.max((kp - rhs).norm() / kp.norm());
        }
    }
    check(NAME, worst <= 1e-10, format!("max relative deviation {worst:.2e} (limit 1e-10)"))
}

// K_ν(z) = ∫₀^∞ e^{-z cosh u} cosh(νu) du for Re z > 0.
fn bessel_integral(nu: f64, z: ComplexValue) -> mfsinr::Result<ComplexValue> {
    let part = |im: bool| {
        let f = move |u: f64| {
            let v = (-z * u.cosh()).exp() * (nu * u).cosh();
            Ok(if im { v.im } else { v.re })
        };
        integrate(&f, 0.0, 12.0, 1e-15, 1e-14, 2000)
    };
    Ok(ComplexValue::new(part(false)?.value, part(true)?.value))
}

fn bessel_reference() -> Check {
    const NAME: &str = "Bessel K against integral representation";
    let mut worst: f64 = 0.0;
    for z in [ComplexValue::new(1.0, 0.0), ComplexValue::new(1.0, 1.0), ComplexValue::new(2.5, -1.5)] {
        let (k0, k1) = match bessel_k01(z) {
            Ok(v) => v,
            Err(e) => return failed(NAME, e),
        };
        let mut pairs = vec![(0u32, k0), (1, k1)];
        for nu in [2u32, 5] {
            match bessel_k_int(nu, z) {
                Ok(k) => pairs.push((nu, k)),
                Err(e) => return failed(NAME, e),
            }
        }
        for (nu, k) in pairs {
            match bessel_integral(f64::from(nu), z) {
                Ok(r) => worst = worst.max((k - r).norm() / r.norm()),
                Err(e) => return failed(NAME, e),
            }
        }
    }
    check(NAME, worst <= 1e-10, format!("max relative deviation {worst:.2e} (limit 1e-10)"))
}

fn gamma_cdf(n: u32, x: f64) -> f64 {
    1.0 - regularized_upper_gamma_int(n, x).expect("valid arguments")
}

fn gamma_quantile(n: u32, p: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, 100.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if gamma_cdf(n, mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn known_cf_inversion() -> Check {
    const NAME: &str = "Gamma(n) CF inversion over the central 99%";
    let quad = QuadratureSpec::default();
    let mut worst: f64 = 0.0;
    for n in 1..=8u32 {
        let cf = move |t: f64| Ok(ComplexValue::new(1.0, -t).powi(-(n as i32)));
        let ln_norm = factorial(n - 1).ln();
        for z in linspace(gamma_quantile(n, 0.005), gamma_quantile(n, 0.995), 15) {
            let pdf = (f64::from(n - 1) * z.ln() - z - ln_norm).exp();
            match (gil_pelaez_cdf(z, &cf, &quad), fourier_pdf(z, &cf, &quad)) {
                (Ok(c), Ok(f)) => {
                    worst = worst.max((c.value - gamma_cdf(n, z)).abs()).max((f.value - pdf).abs());
                }
                (Err(e), _) | (_, Err(e)) => return failed(NAME, e),
            }
        }
    }
    check(NAME, worst <= 1e-7, format!("max abs error {worst:.2e} (limit 1e-7)"))
}

fn interference_ks() -> Check {
    const NAME: &str = "normalized interference terms are Beta(1, L-1)";
    let mut details = Vec::new();
    let mut ok = true;
    for l in [2u32, 4, 8, 32] {
        let xs = match sample_normalized_interference(l, &McSpec::new(100_000, 11), EXEC) {
            Ok(v) => v,
            Err(e) => return failed(NAME, e),
        };
        match ks_test(&xs, |x| 1.0 - (1.0 - x.clamp(0.0, 1.0)).powi(l as i32 - 1)) {
            Ok(r) => {
                ok &= r.p_value > KS_LEVEL;
                details.push(format!("L={l} p={:.3}", r.p_value));
            }
            Err(e) => return failed(NAME, e),
        }
    }
    check(NAME, ok, details.join(", "))
}

fn direct_vs_decomposed() -> Check {
    const NAME: &str = "direct and decomposed SINR samples agree";
    let sys = SystemConfig::new(8, 4, 10.0, 1.0).expect("valid system");
    let mc = McSpec::new(100_000, 12);
    let r = sample_sinr(&sys, &mc, EXEC).and_then(|a| {
        let b = sample_sinr(&sys, &mc.with_seed(13).with_sampler(Sampler::Decomposed), EXEC)?;
        two_sample_ks_test(&a, &b)
    });
    match r {
        Ok(r) => check(NAME, r.p_value > KS_LEVEL, format!("D={:.2e} p={:.3}", r.statistic, r.p_value)),
        Err(e) => failed(NAME, e),
    }
}

/// Whether the exact CDF stays inside the 99% DKW band of `samples` on a
/// 50-point grid, with a description of the worst point.
pub fn dkw_check(sys: &SystemConfig, samples: &[f64], branch: SqrtBranch) -> (bool, String) {
    let quad = QuadratureSpec::default();
    let grid = logspace(0.05, 50.0, 50);
    let (emp, band) = match (empirical_cdf_values(samples, &grid), dkw_half_width(samples.len(), 0.01)) {
        (Ok(e), Ok(b)) => (e, b),
        (Err(e), _) | (_, Err(e)) => return (false, format!("error: {e}")),
    };
    let mut worst: f64 = 0.0;
    for (&g, e) in grid.iter().zip(emp) {
        match sinr_cdf_exact_with_branch(g, sys, &quad, branch) {
            Ok(v) => worst = worst.max((v.value - e).abs()),
            Err(err) => return (false, format!("γ={g}: {err}")),
        }
    }
    (worst <= band, format!("max |exact - empirical| {worst:.2e}, band {band:.2e}"))
}

fn beta_approx_distance(sys: &SystemConfig) -> Check {
    const NAME: &str = "Beta approximation within 1e-2 of exact";
    let quad = QuadratureSpec::default();
    let mut worst: f64 = 0.0;
    for g in logspace(0.05, 50.0, 40) {
        match (sinr_cdf_exact(g, sys, &quad), sinr_cdf_beta_approx(g, sys, &quad)) {
            (Ok(a), Ok(b)) => worst = worst.max((a.value - b.value).abs()),
            (Err(e), _) | (_, Err(e)) => return failed(NAME, e),
        }
    }
    check(NAME, worst <= 1e-2, format!("sup distance {worst:.2e}"))
}

fn pdf_cdf_consistency(sys: &SystemConfig) -> Check {
    const NAME: &str = "PDF matches CDF derivative";
    let quad = QuadratureSpec::default();
    let mut worst: f64 = 0.0;
    for g in [0.5, 0.9, 1.3, 2.0, 3.5, 6.0] {
        let h = 1e-3 * g;
        let r = (
            sinr_cdf_exact(g + h, sys, &quad),
            sinr_cdf_exact(g - h, sys, &quad),
            sinr_pdf_exact(g, sys, &quad),
        );
        match r {
            (Ok(a), Ok(b), Ok(f)) => worst = worst.max(((a.value - b.value) / (2.0 * h) - f.value).abs()),
            (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => return failed(NAME, e),
        }
    }
    check(NAME, worst <= 1e-4, format!("max deviation {worst:.2e} (limit 1e-4)"))
}

fn budget_exhaustion(sys: &SystemConfig) -> Check {
    const NAME: &str = "max_panels=5 reports an exhausted budget";
    let quad = QuadratureSpec::default().with_max_panels(5);
    match sinr_cdf_exact(0.8, sys, &quad) {
        Err(Error::BudgetExceeded { panels, .. }) => check(NAME, true, format!("budget exceeded after {panels} panels")),
        Err(e) => check(NAME, false, format!("unexpected error: {e}")),
        Ok(v) => check(NAME, false, format!("returned a value {} instead of an error", v.value)),
    }
}
