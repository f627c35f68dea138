//! Resolved run configuration. Defaults depend on the subcommand; a
//! key=value config file overrides them and command-line flags override the
//! file. The resolved values are written back as `# key=value` header lines,
//! so any output file can be fed to `--config` to reproduce it.

use std::fmt;
use std::path::Path;

use mfsinr::config::db_to_linear;
use mfsinr::sinr_dist::CurveMethod;

use crate::error::CliError;
use crate::grid::GridSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Cdf,
    Pdf,
    Outage,
    Rate,
    Fig1,
    Fig2,
    Fig3,
}

impl CommandKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CommandKind::Cdf => "cdf",
            CommandKind::Pdf => "pdf",
            CommandKind::Outage => "outage",
            CommandKind::Rate => "rate",
            CommandKind::Fig1 => "fig1",
            CommandKind::Fig2 => "fig2",
            CommandKind::Fig3 => "fig3",
        }
    }

    fn allowed_methods(&self) -> &'static [&'static str] {
        const CDF: &[&str] = &["exact", "beta_approx", "high_snr", "massive_limit", "monte_carlo"];
        const RATE: &[&str] = &["monte_carlo", "robust", "jensen", "asymptotic"];
        match self {
            CommandKind::Cdf | CommandKind::Outage | CommandKind::Fig1 => CDF,
            CommandKind::Pdf | CommandKind::Fig2 => &["exact", "monte_carlo"],
            CommandKind::Rate | CommandKind::Fig3 => RATE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum PowerUnit {
    Linear,
    Db,
}

impl PowerUnit {
    pub fn to_linear(&self, v: f64) -> f64 {
        match self {
            PowerUnit::Linear => v,
            PowerUnit::Db => db_to_linear(v),
        }
    }
}

impl fmt::Display for PowerUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PowerUnit::Linear => "linear",
            PowerUnit::Db => "db",
        })
    }
}

/// Every setting of a run, fully resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub antennas: Vec<u32>,
    pub users: u32,
    pub pt: Vec<f64>,
    pub pt_unit: PowerUnit,
    pub sigma2: f64,
    pub gamma: f64,
    pub grid: GridSpec,
    pub methods: Vec<String>,
    pub samples: usize,
    pub seed: u64,
    pub max_panels: usize,
    pub bits: bool,
    /// Array size of the P_t sweep panel of fig2.
    pub left_antennas: u32,
    /// Transmit power of the L sweep panel of fig2, in `pt_unit`.
    pub right_pt: f64,
    pub flip_branch: bool,
}

/// Partially specified settings from one source.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub antennas: Option<Vec<u32>>,
    pub users: Option<u32>,
    pub pt: Option<Vec<f64>>,
    pub pt_unit: Option<PowerUnit>,
    pub sigma2: Option<f64>,
    pub gamma: Option<f64>,
    pub grid: Option<GridSpec>,
    pub methods: Option<Vec<String>>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub max_panels: Option<usize>,
    pub bits: Option<bool>,
    pub left_antennas: Option<u32>,
    pub right_pt: Option<f64>,
    pub flip_branch: Option<bool>,
}

const FIGURE_SAMPLES: usize = 1_000_000;
// Prefix of header lines that describe the output rather than the run.
const INFO_PREFIX: &str = "info.";

fn grid(s: &str) -> GridSpec {
    s.parse().expect("built-in grid is valid")
}

fn strings(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

impl RunConfig {
    pub fn defaults(command: CommandKind) -> Self {
        let power_sweep = grid("-10:30:41:lin");
        let base = RunConfig {
            command,
            antennas: vec![8],
            users: 4,
            pt: vec![10.0],
            pt_unit: PowerUnit::Linear,
            sigma2: 1.0,
            gamma: 0.8,
            grid: grid("0.01:100:100:log"),
            methods: strings(&["exact", "beta_approx", "monte_carlo"]),
            samples: FIGURE_SAMPLES,
            seed: 1,
            max_panels: mfsinr::inversion::QuadratureSpec::default().max_panels,
            bits: false,
            left_antennas: 8,
            right_pt: 10.0,
            flip_branch: false,
        };
        match command {
            CommandKind::Cdf => base,
            CommandKind::Pdf => RunConfig {
                methods: strings(&["exact", "monte_carlo"]),
                ..base
            },
            CommandKind::Outage => RunConfig {
                grid: power_sweep,
                pt_unit: PowerUnit::Db,
                ..base
            },
            CommandKind::Fig1 => RunConfig {
                antennas: vec![4, 8],
                grid: power_sweep,
                pt_unit: PowerUnit::Db,
                ..base
            },
            CommandKind::Fig2 => RunConfig {
                antennas: vec![16, 64, 256],
                pt: vec![1.0, 10.0, 100.0, 1000.0],
                grid: grid("0.01:2:200:lin"),
                methods: strings(&["exact", "monte_carlo"]),
                ..base
            },
            CommandKind::Rate | CommandKind::Fig3 => RunConfig {
                antennas: if command == CommandKind::Fig3 { vec![8, 12] } else { vec![8] },
                users: 6,
                grid: power_sweep,
                pt_unit: PowerUnit::Db,
                methods: strings(&["monte_carlo", "robust", "jensen", "asymptotic"]),
                ..base
            },
        }
    }

    /// Defaults, then `file`, then `flags`.
    pub fn resolve(command: CommandKind, file: &Overrides, flags: &Overrides) -> Result<Self, CliError> {
        let mut cfg = Self::defaults(command);
        cfg.apply(file);
        cfg.apply(flags);
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply(&mut self, o: &Overrides) {
        macro_rules! take {
            ($($field:ident),*) => {
                $(if let Some(v) = &o.$field { self.$field = v.clone(); })*
            };
        }
        take!(
            antennas, users, pt, pt_unit, sigma2, gamma, grid, methods, samples, seed, max_panels, bits,
            left_antennas, right_pt, flip_branch
        );
    }

    fn validate(&self) -> Result<(), CliError> {
        let usage = |m: String| Err(CliError::Usage(m));
        if self.antennas.is_empty() || self.antennas.iter().any(|&l| l < 2) || self.left_antennas < 2 {
            return usage("--L needs values >= 2".into());
        }
        if self.users < 1 {
            return usage("--K must be at least 1".into());
        }
        let single = matches!(self.command, CommandKind::Cdf | CommandKind::Pdf | CommandKind::Outage | CommandKind::Rate);
        if single && self.antennas.len() != 1 {
            return usage(format!("{} takes a single --L", self.command.as_str()));
        }
        if self.pt.is_empty() || (self.command != CommandKind::Fig2 && self.pt.len() != 1) {
            return usage("--pt takes a single value except for fig2".into());
        }
        for &p in self.pt.iter().chain([&self.right_pt]) {
            let lin = self.pt_unit.to_linear(p);
            if !(lin.is_finite() && lin > 0.0) {
                return usage(format!("transmit power {p} ({}) is not a positive finite power", self.pt_unit));
            }
        }
        if !(self.sigma2.is_finite() && self.sigma2 > 0.0) {
            return usage("--sigma2 must be positive".into());
        }
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return usage("--gamma must be positive".into());
        }
        if self.samples == 0 {
            return usage("--samples must be positive".into());
        }
        if self.max_panels == 0 {
            return usage("--max-panels must be positive".into());
        }
        if self.methods.is_empty() {
            return usage("--methods is empty".into());
        }
        let allowed = self.command.allowed_methods();
        for m in &self.methods {
            if !allowed.contains(&m.as_str()) {
                return usage(format!(
                    "method '{m}' is not available for {}; choose from {}",
                    self.command.as_str(),
                    allowed.join(",")
                ));
            }
        }
        let independent_is_power = matches!(
            self.command,
            CommandKind::Outage | CommandKind::Rate | CommandKind::Fig1 | CommandKind::Fig3
        );
        let grid = self.grid.values();
        if independent_is_power {
            if grid.iter().any(|&p| !(self.pt_unit.to_linear(p) > 0.0)) {
                return usage("power grid contains non-positive powers; use --pt-unit db for dB sweeps".into());
            }
        } else if grid.iter().any(|&x| x <= 0.0) {
            return usage("grid values must be positive".into());
        }
        Ok(())
    }

    /// Curve methods among the requested ones, in request order.
    pub fn curve_methods(&self) -> Vec<CurveMethod> {
        self.methods.iter().filter_map(|m| m.parse().ok()).collect()
    }

    pub fn wants(&self, method: &str) -> bool {
        self.methods.iter().any(|m| m == method)
    }

    pub fn power_linear(&self, p: f64) -> f64 {
        self.pt_unit.to_linear(p)
    }

    /// Header label of a power-valued column.
    pub fn power_label(&self) -> &'static str {
        match self.pt_unit {
            PowerUnit::Linear => "pt",
            PowerUnit::Db => "pt_db",
        }
    }

    /// Key/value pairs of the resolved configuration.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let join = |v: Vec<String>| v.join(",");
        vec![
            ("L", join(self.antennas.iter().map(u32::to_string).collect())),
            ("K", self.users.to_string()),
            ("pt", join(self.pt.iter().map(f64::to_string).collect())),
            ("pt_unit", self.pt_unit.to_string()),
            ("sigma2", self.sigma2.to_string()),
            ("gamma", self.gamma.to_string()),
            ("grid", self.grid.to_string()),
            ("methods", self.methods.join(",")),
            ("samples", self.samples.to_string()),
            ("seed", self.seed.to_string()),
            ("max_panels", self.max_panels.to_string()),
            ("bits", self.bits.to_string()),
            ("left_L", self.left_antennas.to_string()),
            ("right_pt", self.right_pt.to_string()),
            ("flip_branch", self.flip_branch.to_string()),
        ]
    }
}

fn list<T: std::str::FromStr>(key: &str, v: &str) -> Result<Vec<T>, CliError> {
    v.split(',').map(|s| value(key, s)).collect()
}

fn value<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("config key '{key}': cannot parse '{v}'")))
}

/// Parse a sample count, accepting integral scientific notation such as 1e7.
pub fn parse_count(s: &str) -> Result<usize, String> {
    if let Ok(n) = s.parse::<usize>() {
        return Ok(n);
    }
    match s.parse::<f64>() {
        Ok(x) if x >= 0.0 && x.fract() == 0.0 && x < 9.0e15 => Ok(x as usize),
        _ => Err(format!("'{s}' is not a non-negative integer")),
    }
}

impl Overrides {
    /// Read `key=value` lines. A leading `#` is allowed, so the header of an
    /// output file is itself a config file. Reading stops at the first line
    /// that is neither blank, a comment, nor a setting (the CSV body).
    pub fn from_text(text: &str) -> Result<Self, CliError> {
        let mut o = Overrides::default();
        for raw in text.lines() {
            let line = raw.trim();
            let (commented, body) = match line.strip_prefix('#') {
                Some(rest) => (true, rest.trim()),
                None => (false, line),
            };
            let Some((key, val)) = body.split_once('=') else {
                if commented || body.is_empty() {
                    continue;
                }
                break;
            };
            let (key, val) = (key.trim(), val.trim());
            if key.starts_with(INFO_PREFIX) {
                continue;
            }
            match key {
                "L" => o.antennas = Some(list(key, val)?),
                "K" => o.users = Some(value(key, val)?),
                "pt" => o.pt = Some(list(key, val)?),
                "pt_unit" => {
                    o.pt_unit = Some(match val {
                        "linear" => PowerUnit::Linear,
                        "db" => PowerUnit::Db,
                        _ => return Err(CliError::Usage(format!("pt_unit must be linear or db, got '{val}'"))),
                    })
                }
                "sigma2" => o.sigma2 = Some(value(key, val)?),
                "gamma" => o.gamma = Some(value(key, val)?),
                "grid" => o.grid = Some(val.parse()?),
                "methods" => o.methods = Some(val.split(',').map(|s| s.trim().to_string()).collect()),
                "samples" => o.samples = Some(parse_count(val).map_err(CliError::Usage)?),
                "seed" => o.seed = Some(value(key, val)?),
                "max_panels" => o.max_panels = Some(value(key, val)?),
                "bits" => o.bits = Some(value(key, val)?),
                "left_L" => o.left_antennas = Some(value(key, val)?),
                "right_pt" => o.right_pt = Some(value(key, val)?),
                "flip_branch" => o.flip_branch = Some(value(key, val)?),
                _ => return Err(CliError::Usage(format!("unknown config key '{key}'"))),
            }
        }
        Ok(o)
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_text(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entries_round_trip() {
        let mut cfg = RunConfig::defaults(CommandKind::Fig2);
        cfg.sigma2 = 0.1 + 0.2;
        cfg.pt = vec![1.0 / 3.0, 7e-5];
        let text: String = cfg.entries().iter().map(|(k, v)| format!("# {k}={v}\n")).collect();
        let o = Overrides::from_text(&format!("# info.version=x\n{text}x,y\n1,2\n")).unwrap();
        let back = RunConfig::resolve(CommandKind::Fig2, &o, &Overrides::default()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn flags_override_file_override_defaults() {
        let file = Overrides::from_text("K=6\nsigma2=2\n").unwrap();
        let flags = Overrides {
            users: Some(5),
            ..Default::default()
        };
        let cfg = RunConfig::resolve(CommandKind::Cdf, &file, &flags).unwrap();
        assert_eq!(cfg.users, 5);
        assert_eq!(cfg.sigma2, 2.0);
        assert_eq!(cfg.antennas, vec![8]);
    }

    #[test]
    fn rejects_bad_settings() {
        assert!(Overrides::from_text("colour=blue").is_err());
        assert!(Overrides::from_text("K=four").is_err());
        let none = Overrides::default();
        let bad = |o: Overrides, c| RunConfig::resolve(c, &o, &none).is_err();
        assert!(bad(Overrides { antennas: Some(vec![4, 8]), ..none.clone() }, CommandKind::Cdf));
        assert!(bad(Overrides { methods: Some(vec!["robust".into()]), ..none.clone() }, CommandKind::Cdf));
        assert!(bad(Overrides { grid: Some("-1:1:3:lin".parse().unwrap()), ..none.clone() }, CommandKind::Cdf));
        assert!(bad(Overrides { pt_unit: Some(PowerUnit::Linear), ..none.clone() }, CommandKind::Fig1));
        assert!(!bad(none.clone(), CommandKind::Fig1));
    }

    #[test]
    fn counts_accept_scientific_notation() {
        assert_eq!(parse_count("1e7"), Ok(10_000_000));
        assert_eq!(parse_count("250"), Ok(250));
        assert!(parse_count("1.5").is_err());
    }
}
