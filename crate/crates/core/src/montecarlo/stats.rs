use super::Estimate;
use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::sinr_dist::{check_grid, CurveKind, CurveMethod, DistributionCurve};

/// Streaming mean and variance (Welford), mergeable in a fixed order.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RunningStats {
    n: u64,
    mean: f64,
    m2: f64,
}

impl RunningStats {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(&mut self, other: &RunningStats) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *other;
            return;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        let w = other.n as f64 / n as f64;
        self.mean += d * w;
        self.m2 += other.m2 + d * d * self.n as f64 * w;
        self.n = n;
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64
        }
    }

    pub fn estimate(&self) -> Result<Estimate> {
        if self.n == 0 {
            return Err(Error::EmptySample);
        }
        Ok(Estimate {
            mean: self.mean,
            std_error: (self.variance() / self.n as f64).sqrt(),
        })
    }
}

fn sorted(samples: &[f64]) -> Result<Vec<f64>> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    if samples.iter().any(|x| x.is_nan()) {
        return Err(Error::NonFinite { op: "empirical sample" });
    }
    let mut v = samples.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Fraction of samples ≤ each grid point.
pub fn empirical_cdf_values(samples: &[f64], grid: &[f64]) -> Result<Vec<f64>> {
    let s = sorted(samples)?;
    let n = s.len() as f64;
    Ok(grid.iter().map(|&g| s.partition_point(|&x| x <= g) as f64 / n).collect())
}

/// Empirical CDF of SINR samples on a strictly increasing grid.
pub fn empirical_cdf(samples: &[f64], grid: &[f64], cfg: &SystemConfig) -> Result<DistributionCurve> {
    check_grid("empirical_cdf", grid)?;
    let values = empirical_cdf_values(samples, grid)?;
    DistributionCurve::new(grid.to_vec(), values, CurveKind::Cdf, CurveMethod::MonteCarlo, None, *cfg)
}

/// Half-width ε of the Dvoretzky–Kiefer–Wolfowitz band: the empirical CDF of
/// n samples lies within ε of the true CDF everywhere with probability at
/// least 1 - alpha.
pub fn dkw_half_width(n: usize, alpha: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::EmptySample);
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain("dkw_half_width", "alpha must lie in (0, 1)"));
    }
    Ok(((2.0 / alpha).ln() / (2.0 * n as f64)).sqrt())
}

/// Outcome of a Kolmogorov–Smirnov test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
    /// Effective sample size used for the p-value.
    pub effective_n: f64,
}

/// sup_x |F_n(x) - F(x)| for a continuous reference CDF.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<f64> {
    let s = sorted(samples)?;
    let n = s.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in s.iter().enumerate() {
        let f = cdf(x);
        if !f.is_finite() {
            return Err(Error::NonFinite { op: "ks_statistic" });
        }
        d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
    }
    Ok(d)
}

/// Asymptotic Kolmogorov tail probability Pr{D_n > d} with the Stephens
/// small-sample correction.
pub fn kolmogorov_p_value(d: f64, n: f64) -> f64 {
    let sn = n.sqrt();
    let lambda = (sn + 0.12 + 0.11 / sn) * d;
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let kf = f64::from(k);
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-17 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// One-sample KS test against a continuous CDF.
pub fn ks_test<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<KsResult> {
    let statistic = ks_statistic(samples, cdf)?;
    let n = samples.len() as f64;
    Ok(KsResult {
        statistic,
        p_value: kolmogorov_p_value(statistic, n),
        effective_n: n,
    })
}

/// sup_x |F_a(x) - F_b(x)| between two empirical CDFs.
pub fn two_sample_ks(a: &[f64], b: &[f64]) -> Result<f64> {
    let (a, b) = (sorted(a)?, sorted(b)?);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

/// Two-sample KS test with effective size n_a·n_b/(n_a + n_b).
pub fn two_sample_ks_test(a: &[f64], b: &[f64]) -> Result<KsResult> {
    let statistic = two_sample_ks(a, b)?;
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let n = na * nb / (na + nb);
    Ok(KsResult {
        statistic,
        p_value: kolmogorov_p_value(statistic, n),
        effective_n: n,
    })
}
