use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use super::norm_sqr;
use crate::config::SystemConfig;
use crate::error::{Error, Result};

/// L×K matrix of i.i.d. CN(0, 1) channel coefficients, stored column-major
/// so that each user's channel vector is contiguous.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix {
    antennas: usize,
    users: usize,
    data: Vec<Complex64>,
}

impl ChannelMatrix {
    pub fn from_columns(antennas: usize, users: usize, data: Vec<Complex64>) -> Result<Self> {
        if antennas == 0 || users == 0 || data.len() != antennas * users {
            return Err(Error::domain("ChannelMatrix::from_columns", "shape does not match data"));
        }
        Ok(ChannelMatrix { antennas, users, data })
    }

    pub fn antennas(&self) -> usize {
        self.antennas
    }

    pub fn users(&self) -> usize {
        self.users
    }

    /// Channel vector of user `k`.
    pub fn column(&self, k: usize) -> &[Complex64] {
        &self.data[k * self.antennas..(k + 1) * self.antennas]
    }
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// One Rayleigh channel realisation for `cfg`.
pub fn sample_channel<R: Rng + ?Sized>(cfg: &SystemConfig, rng: &mut R) -> ChannelMatrix {
    let l = cfg.antennas() as usize;
    let k = cfg.users() as usize;
    let data = (0..l * k).map(|_| complex_normal(rng)).collect();
    ChannelMatrix {
        antennas: l,
        users: k,
        data,
    }
}

/// The two channel-dependent factors of a user's SINR under matched-filter
/// precoding with equal per-user power P/K:
/// SINR(P) = (P/K)·gain / (σ² + (P/K)·interference).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinrComponents {
    /// ‖h_k‖²
    pub gain: f64,
    /// Σ_{i≠k} |h_kᵀh_i*|² / ‖h_i‖²
    pub interference: f64,
}

impl SinrComponents {
    pub fn sinr(&self, p_t: f64, sigma2: f64, users: u32) -> f64 {
        let p = p_t / f64::from(users);
        p * self.gain / (sigma2 + p * self.interference)
    }
}

/// SINR components of user `k` (0-based) for a given channel.
pub fn channel_components(h: &ChannelMatrix, k: usize) -> Result<SinrComponents> {
    const OP: &str = "channel_components";
    if k >= h.users {
        return Err(Error::domain(OP, format!("user index {k} out of range")));
    }
    let hk = h.column(k);
    let gain = norm_sqr(hk);
    let mut interference = 0.0;
    for i in (0..h.users).filter(|&i| i != k) {
        let hi = h.column(i);
        let n = norm_sqr(hi);
        if n == 0.0 {
            return Err(Error::domain(OP, "zero-norm channel column"));
        }
        let inner: Complex64 = hk.iter().zip(hi).map(|(a, b)| a * b.conj()).sum();
        interference += inner.norm_sqr() / n;
    }
    if gain == 0.0 {
        return Err(Error::domain(OP, "zero-norm channel column"));
    }
    Ok(SinrComponents { gain, interference })
}

/// SINR of user `k` (0-based) for a given channel.
pub fn sinr_direct(h: &ChannelMatrix, k: usize, p_t: f64, sigma2: f64) -> Result<f64> {
    let c = channel_components(h, k)?;
    Ok(c.sinr(p_t, sigma2, h.users as u32))
}

/// Components drawn through the decomposition gain ~ Gamma(L, 1),
/// interference = gain·ΣX_i with X_i ~ Beta(1, L-1) independent of the gain.
pub fn sample_decomposed<R: Rng + ?Sized>(cfg: &SystemConfig, rng: &mut R) -> SinrComponents {
    let l = f64::from(cfg.antennas());
    let gain = Gamma::new(l, 1.0).expect("L >= 2 is a valid shape").sample(rng);
    let shape = 1.0 / (l - 1.0);
    let sum: f64 = (0..cfg.interferers())
        .map(|_| 1.0 - rng.random::<f64>().powf(shape))
        .sum();
    SinrComponents {
        gain,
        interference: gain * sum,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montecarlo::block_rng;

    #[test]
    fn hand_computed_sinr() {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        // h_1 = (1, i), h_2 = (1, 0)
        let h = ChannelMatrix::from_columns(2, 2, vec![c(1.0, 0.0), c(0.0, 1.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let s = channel_components(&h, 0).unwrap();
        assert_eq!(s.gain, 2.0);
        assert_eq!(s.interference, 1.0);
        // P/K = 1: 2 / (1 + 1)
        assert!((sinr_direct(&h, 0, 2.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        let s2 = channel_components(&h, 1).unwrap();
        assert_eq!(s2.gain, 1.0);
        assert_eq!(s2.interference, 0.5);
        assert!(channel_components(&h, 2).is_err());
    }

    #[test]
    fn interferer_scaling_leaves_sinr_unchanged() {
        let cfg = SystemConfig::new(6, 4, 10.0, 1.0).unwrap();
        let mut rng = block_rng(12, 0);
        let h = sample_channel(&cfg, &mut rng);
        let mut data = h.data.clone();
        data[2 * 6..3 * 6].iter_mut().for_each(|z| *z *= 2.0);
        let h2 = ChannelMatrix::from_columns(6, 4, data).unwrap();
        let a = sinr_direct(&h, 0, 10.0, 1.0).unwrap();
        let b = sinr_direct(&h2, 0, 10.0, 1.0).unwrap();
        assert!((a - b).abs() <= 1e-13 * a);
    }

    #[test]
    fn zero_column_is_rejected() {
        let h = ChannelMatrix::from_columns(2, 2, vec![Complex64::new(1.0, 0.0); 2].into_iter().chain([Complex64::default(); 2]).collect()).unwrap();
        assert!(channel_components(&h, 0).is_err());
    }

    #[test]
    fn single_user_has_no_interference() {
        let cfg = SystemConfig::new(4, 1, 3.0, 1.5).unwrap();
        let mut rng = block_rng(1, 0);
        let h = sample_channel(&cfg, &mut rng);
        let c = channel_components(&h, 0).unwrap();
        assert_eq!(c.interference, 0.0);
        assert!((c.sinr(3.0, 1.5, 1) - 2.0 * c.gain).abs() < 1e-14);
    }

    #[test]
    fn entry_moments() {
        let cfg = SystemConfig::new(8, 8, 1.0, 1.0).unwrap();
        let mut rng = block_rng(3, 0);
        let (mut re, mut im, mut p, mut cross, mut n) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for _ in 0..5000 {
            let h = sample_channel(&cfg, &mut rng);
            for z in &h.data {
                re += z.re;
                im += z.im;
                p += z.norm_sqr();
                cross += z.re * z.im;
                n += 1.0;
            }
        }
        // n = 320000; standard errors ≈ 1.3e-3 for the means
        assert!((re / n).abs() < 6e-3);
        assert!((im / n).abs() < 6e-3);
        assert!((p / n - 1.0).abs() < 1e-2);
        assert!((cross / n).abs() < 5e-3);
    }
}
