//! Characteristic functions of the SINR denominator Z = Y + Σ_i X_i.
//!
//! X_i ~ Beta(1, L-1) are the normalized interference terms and
//! Y ~ Inv-Gamma(L, Kσ²/P_t) is the scaled noise term. CF_Z is always formed
//! as a product of individually bounded factors so nothing overflows for
//! large L or K.

use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::numeric::ComplexSum;
use crate::special::{bessel_k01, ComplexValue};

/// A characteristic function t ↦ E[e^{ȷtV}].
///
/// Implementations return exactly 1 at t = 0, have modulus at most 1 and
/// satisfy CF(-t) = conj(CF(t)).
pub trait CharFn: Sync {
    fn eval(&self, t: f64) -> Result<ComplexValue>;
}

impl<F> CharFn for F
where
    F: Fn(f64) -> Result<ComplexValue> + Sync,
{
    fn eval(&self, t: f64) -> Result<ComplexValue> {
        self(t)
    }
}

/// Branch of √(-4ȷat) used inside CF_Y.
///
/// `Flipped` takes the non-principal root and exists only as a negative
/// control for the validation suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SqrtBranch {
    #[default]
    Principal,
    Flipped,
}

const ONE: ComplexValue = ComplexValue::new(1.0, 0.0);

/// CF of a single interference term X_i ~ Beta(1, L-1).
pub fn cf_interference_single(t: f64, antennas: u32) -> ComplexValue {
    assert!(antennas >= 2, "cf_interference_single needs L >= 2");
    if t == 0.0 {
        return ONE;
    }
    if t < 0.0 {
        return cf_interference_single(-t, antennas).conj();
    }
    let n = antennas - 1;
    if t <= f64::from(n) {
        beta_cf_series(t, n)
    } else {
        beta_cf_closed(t, n)
    }
}

// Σ_m (ȷt)^m n!/(n+m)!, the moment series of Beta(1, n).
fn beta_cf_series(t: f64, n: u32) -> ComplexValue {
    let z = ComplexValue::new(0.0, t);
    let nf = f64::from(n);
    let mut term = ONE;
    let mut sum = ComplexSum::new();
    sum.add(term);
    let mut m = 1.0;
    // Ratio |t|/(n+m) < 1, so this always terminates.
    loop {
        term *= z / (nf + m);
        sum.add(term);
        if term.norm() <= 1e-17 * sum.value().norm() {
            return sum.value();
        }
        m += 1.0;
    }
}

// n!·e^z·z^{-n} - Σ_{k=1}^{n} n!/(n-k)!·z^{-k}, z = ȷt, for |t| > n.
fn beta_cf_closed(t: f64, n: u32) -> ComplexValue {
    let z = ComplexValue::new(0.0, t);
    let mut tail = ComplexSum::new();
    let mut term = ONE;
    for k in 1..=n {
        term *= f64::from(n - k + 1) / z;
        tail.add(term);
    }
    // term now equals n!/z^n
    term * ComplexValue::new(0.0, t).exp() - tail.value()
}

/// CF of the interference sum X = Σ_{i≠k} X_i, i.e. CF_{X_i}^{K-1}.
pub fn cf_interference_sum(t: f64, cfg: &SystemConfig) -> ComplexValue {
    let single = cf_interference_single(t, cfg.antennas());
    single.powi(cfg.interferers() as i32)
}

/// CF of the scaled noise term Y ~ Inv-Gamma(L, Kσ²/P_t).
pub fn cf_noise_term(t: f64, cfg: &SystemConfig) -> Result<ComplexValue> {
    inverse_gamma_cf(t, cfg.antennas(), cfg.noise_ratio(), SqrtBranch::Principal)
}

/// CF of Z = Y + X, the reciprocal of the SINR.
pub fn cf_denominator(t: f64, cfg: &SystemConfig) -> Result<ComplexValue> {
    Ok(cf_noise_term(t, cfg)? * cf_interference_sum(t, cfg))
}

/// CF of Inv-Gamma(shape, scale) as 2(w/2)^ν K_ν(w)/Γ(ν) with w = √(-4ȷ·scale·t).
///
/// Evaluated through g_ν = 2(w/2)^ν K_ν(w)/Γ(ν), which obeys
/// g_{ν+1} = g_ν + (w²/4)·g_{ν-1}/(ν(ν-1)) and stays O(1) where K_ν itself
/// would overflow.
pub fn inverse_gamma_cf(t: f64, shape: u32, scale: f64, branch: SqrtBranch) -> Result<ComplexValue> {
    const OP: &str = "inverse_gamma_cf";
    if shape < 1 {
        return Err(Error::domain(OP, "shape must be >= 1"));
    }
    if !t.is_finite() {
        return Err(Error::domain(OP, "t must be finite"));
    }
    if t == 0.0 {
        return Ok(ONE);
    }
    if t < 0.0 {
        return Ok(inverse_gamma_cf(-t, shape, scale, branch)?.conj());
    }
    let quarter_w2 = ComplexValue::new(0.0, -scale * t);
    let mut w = (quarter_w2 * 4.0).sqrt();
    if branch == SqrtBranch::Flipped {
        w = -w;
    }
    let (k0, k1) = bessel_k01(w)?;
    let mut prev = w * k1;
    if shape == 1 {
        return finite(OP, prev);
    }
    let mut cur = w * w * 0.5 * k0 + prev;
    for nu in 2..shape {
        let nuf = f64::from(nu);
        let next = cur + quarter_w2 * prev / (nuf * (nuf - 1.0));
        prev = cur;
        cur = next;
    }
    finite(OP, cur)
}

fn finite(op: &'static str, v: ComplexValue) -> Result<ComplexValue> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite { op })
    }
}

/// CF_Z for a fixed system, as an evaluable handle.
#[derive(Debug, Clone, Copy)]
pub struct DenominatorCf {
    cfg: SystemConfig,
    branch: SqrtBranch,
}

impl DenominatorCf {
    pub fn new(cfg: SystemConfig) -> Self {
        DenominatorCf {
            cfg,
            branch: SqrtBranch::Principal,
        }
    }

    pub fn with_branch(cfg: SystemConfig, branch: SqrtBranch) -> Self {
        DenominatorCf { cfg, branch }
    }

    /// E[Z] = Kσ²/(P_t(L-1)) + (K-1)/L.
    pub fn mean(&self) -> f64 {
        let l = f64::from(self.cfg.antennas());
        self.cfg.noise_ratio() / (l - 1.0) + f64::from(self.cfg.interferers()) / l
    }
}

impl CharFn for DenominatorCf {
    fn eval(&self, t: f64) -> Result<ComplexValue> {
        let y = inverse_gamma_cf(t, self.cfg.antennas(), self.cfg.noise_ratio(), self.branch)?;
        Ok(y * cf_interference_sum(t, &self.cfg))
    }
}

/// CF of c·X, the interference sum scaled by a constant c > 0.
///
/// With c = 1/(K-1) this is the high-SNR limit X' of 1/((K-1)·SINR).
#[derive(Debug, Clone, Copy)]
pub struct ScaledInterferenceCf {
    antennas: u32,
    interferers: u32,
    scale: f64,
}

impl ScaledInterferenceCf {
    pub fn new(antennas: u32, interferers: u32, scale: f64) -> Result<Self> {
        const OP: &str = "ScaledInterferenceCf::new";
        if antennas < 2 || interferers < 1 {
            return Err(Error::domain(OP, "need L >= 2 and at least one interferer"));
        }
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::domain(OP, "scale must be positive"));
        }
        Ok(ScaledInterferenceCf {
            antennas,
            interferers,
            scale,
        })
    }

    /// The limit variable X' = X/(K-1).
    pub fn limit(cfg: &SystemConfig) -> Result<Self> {
        cfg.require_interferers("ScaledInterferenceCf::limit")?;
        Self::new(cfg.antennas(), cfg.interferers(), 1.0 / f64::from(cfg.interferers()))
    }
}

impl CharFn for ScaledInterferenceCf {
    fn eval(&self, t: f64) -> Result<ComplexValue> {
        if !t.is_finite() {
            return Err(Error::domain("ScaledInterferenceCf", "t must be finite"));
        }
        Ok(cf_interference_single(self.scale * t, self.antennas).powi(self.interferers as i32))
    }
}
