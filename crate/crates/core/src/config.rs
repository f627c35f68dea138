use crate::error::{Error, Result};

/// Downlink system parameters for one tagged user.
///
/// `antennas` is the base-station array size L, `users` the number of
/// simultaneously served single-antenna users K, `p_t` the total transmit
/// power and `sigma2` the receiver noise power (both linear scale).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    antennas: u32,
    users: u32,
    p_t: f64,
    sigma2: f64,
}

impl SystemConfig {
    pub fn new(antennas: u32, users: u32, p_t: f64, sigma2: f64) -> Result<Self> {
        const OP: &str = "SystemConfig::new";
        if antennas < 2 {
            return Err(Error::domain(OP, format!("need L >= 2, got {antennas}")));
        }
        if users < 1 {
            return Err(Error::domain(OP, "need K >= 1"));
        }
        if !(p_t.is_finite() && p_t > 0.0) {
            return Err(Error::domain(OP, format!("transmit power must be positive, got {p_t}")));
        }
        if !(sigma2.is_finite() && sigma2 > 0.0) {
            return Err(Error::domain(OP, format!("noise power must be positive, got {sigma2}")));
        }
        let cfg = SystemConfig {
            antennas,
            users,
            p_t,
            sigma2,
        };
        if !(cfg.noise_ratio() > 0.0 && cfg.noise_ratio().is_finite()) {
            return Err(Error::domain(OP, "K*sigma2/P_t must be finite and positive"));
        }
        Ok(cfg)
    }

    pub fn antennas(&self) -> u32 {
        self.antennas
    }

    pub fn users(&self) -> u32 {
        self.users
    }

    pub fn p_t(&self) -> f64 {
        self.p_t
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    /// Number of interfering users, K - 1.
    pub fn interferers(&self) -> u32 {
        self.users - 1
    }

    /// a = K·σ²/P_t, the scale of the inverse-gamma noise term.
    pub fn noise_ratio(&self) -> f64 {
        f64::from(self.users) * self.sigma2 / self.p_t
    }

    /// Same system at a different transmit power.
    pub fn with_power(&self, p_t: f64) -> Result<Self> {
        Self::new(self.antennas, self.users, p_t, self.sigma2)
    }

    pub(crate) fn require_interferers(&self, op: &'static str) -> Result<()> {
        if self.users < 2 {
            return Err(Error::domain(op, "needs at least one interferer (K >= 2)"));
        }
        Ok(())
    }
}

/// Convert a power in dB to linear scale.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Convert a linear power to dB.
pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}
