use std::fmt;
use std::str::FromStr;

use mfsinr::numeric::{linspace, logspace};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Lin,
    Log,
}

/// `start:stop:points:{lin,log}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        match self.spacing {
            Spacing::Lin => linspace(self.start, self.stop, self.points),
            Spacing::Log => logspace(self.start, self.stop, self.points),
        }
    }
}

impl FromStr for GridSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = |why: &str| CliError::Usage(format!("invalid grid '{s}': {why}"));
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, points, spacing] = parts[..] else {
            return Err(bad("expected start:stop:points:{lin,log}"));
        };
        let start: f64 = start.trim().parse().map_err(|_| bad("start is not a number"))?;
        let stop: f64 = stop.trim().parse().map_err(|_| bad("stop is not a number"))?;
        let points: usize = points.trim().parse().map_err(|_| bad("points is not a count"))?;
        let spacing = match spacing.trim() {
            "lin" => Spacing::Lin,
            "log" => Spacing::Log,
            _ => return Err(bad("spacing must be lin or log")),
        };
        if points == 0 {
            return Err(bad("grid is empty"));
        }
        if !(start.is_finite() && stop.is_finite()) {
            return Err(bad("endpoints must be finite"));
        }
        if points == 1 && start != stop {
            return Err(bad("a one-point grid needs start == stop"));
        }
        if points > 1 && start >= stop {
            return Err(bad("start must be below stop"));
        }
        if spacing == Spacing::Log && start <= 0.0 {
            return Err(bad("log spacing needs positive endpoints"));
        }
        Ok(GridSpec {
            start,
            stop,
            points,
            spacing,
        })
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let spacing = match self.spacing {
            Spacing::Lin => "lin",
            Spacing::Log => "log",
        };
        write!(f, "{}:{}:{}:{}", self.start, self.stop, self.points, spacing)
    }
}
