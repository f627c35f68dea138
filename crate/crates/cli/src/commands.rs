use mfsinr::charfn::SqrtBranch;
use mfsinr::inversion::{Inversion, QuadratureSpec};
use mfsinr::montecarlo::{
    dkw_half_width, empirical_cdf_values, ergodic_rate_mc_sweep, sample_components, McSpec, SinrComponents,
};
use mfsinr::parallel::{map_slice, Execution};
use mfsinr::rate::{ergodic_rate_asymptotic, ergodic_rate_jensen, ergodic_rate_robust, nats_to_bits};
use mfsinr::sinr_dist::{
    evaluate, high_snr_limit_cdf, massive_limit_cdf, scaled_inverse_sinr_cdf, sinr_cdf_exact_with_branch,
    CurveKind, CurveMethod,
};
use mfsinr::{Error, SystemConfig};

use crate::config::{CommandKind, RunConfig};
use crate::error::CliError;
use crate::output::{num, Table, FAILURE_MARKER};

const EXEC: Execution = Execution::Parallel;
// Width of the Monte Carlo density histogram bin centred on γ, relative to γ.
const PDF_BIN_WIDTH: f64 = 0.02;

/// Tables produced by a command plus the number of grid points that failed.
#[derive(Debug, Default)]
pub struct Produced {
    pub tables: Vec<(Option<&'static str>, Table)>,
    pub failures: usize,
}

fn quad(cfg: &RunConfig) -> QuadratureSpec {
    QuadratureSpec::default().with_max_panels(cfg.max_panels)
}

fn mc(cfg: &RunConfig) -> McSpec {
    McSpec::new(cfg.samples, cfg.seed)
}

fn branch(cfg: &RunConfig) -> SqrtBranch {
    if cfg.flip_branch {
        SqrtBranch::Flipped
    } else {
        SqrtBranch::Principal
    }
}

fn system(cfg: &RunConfig, antennas: u32, p_t: f64) -> Result<SystemConfig, CliError> {
    Ok(SystemConfig::new(antennas, cfg.users, p_t, cfg.sigma2)?)
}

fn reason(e: &Error) -> &'static str {
    match e {
        Error::Domain { .. } => "domain_error",
        Error::NoConvergence { .. } => "no_convergence",
        Error::NonFinite { .. } => "non_finite",
        Error::BudgetExceeded { .. } => "budget_exceeded",
        Error::OutOfRange { .. } => "out_of_range",
        Error::EmptySample => "empty_sample",
    }
}

/// Value and error-estimate cells for one analytic point.
fn cells(r: &mfsinr::Result<Inversion>, failures: &mut usize) -> [String; 2] {
    match r {
        Ok(inv) => [num(inv.value), num(inv.abs_error)],
        Err(e) => {
            *failures += 1;
            [FAILURE_MARKER.to_string(), reason(e).to_string()]
        }
    }
}

/// Value and `_err` columns for one analytic method.
fn push_analytic(
    table: &mut Table,
    columns: &mut Vec<Vec<String>>,
    name: &str,
    points: &[mfsinr::Result<Inversion>],
    failures: &mut usize,
) {
    let (mut v, mut e) = (Vec::new(), Vec::new());
    for p in points {
        let [a, b] = cells(p, failures);
        v.push(a);
        e.push(b);
    }
    table.column(name, "analytic");
    table.column(format!("{name}_err"), "error_estimate");
    columns.push(v);
    columns.push(e);
}

fn finish(table: &mut Table, first: &[f64], columns: &[Vec<String>]) {
    for (i, &x) in first.iter().enumerate() {
        let mut row = vec![num(x)];
        row.extend(columns.iter().map(|c| c[i].clone()));
        table.push_row(row);
    }
}

fn analytic_cdf(
    method: CurveMethod,
    gamma: f64,
    sys: &SystemConfig,
    quad: &QuadratureSpec,
    branch: SqrtBranch,
) -> mfsinr::Result<Inversion> {
    match method {
        CurveMethod::Exact => sinr_cdf_exact_with_branch(gamma, sys, quad, branch),
        m => evaluate(m, CurveKind::Cdf, gamma, sys, quad),
    }
}

fn require_interferers(cfg: &RunConfig, methods: &[CurveMethod]) -> Result<(), CliError> {
    let needs = methods
        .iter()
        .find(|m| matches!(m, CurveMethod::BetaApprox | CurveMethod::HighSnr | CurveMethod::MassiveLimit));
    match needs {
        Some(m) if cfg.users < 2 => Err(CliError::Usage(format!("method {m} needs K >= 2"))),
        _ => Ok(()),
    }
}

fn fraction_at_most(sorted: &[f64], x: f64) -> f64 {
    sorted.partition_point(|&v| v <= x) as f64 / sorted.len() as f64
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

fn components(cfg: &RunConfig, sys: &SystemConfig) -> Result<Vec<SinrComponents>, CliError> {
    Ok(sample_components(sys, &mc(cfg), EXEC)?)
}

pub fn run(cfg: &RunConfig) -> Result<Produced, CliError> {
    match cfg.command {
        CommandKind::Cdf | CommandKind::Pdf => distribution(cfg),
        CommandKind::Outage | CommandKind::Fig1 => outage(cfg),
        CommandKind::Rate | CommandKind::Fig3 => rate(cfg),
        CommandKind::Fig2 => fig2(cfg),
    }
}

/// CDF or PDF of the SINR over a γ grid.
fn distribution(cfg: &RunConfig) -> Result<Produced, CliError> {
    let kind = if cfg.command == CommandKind::Cdf {
        CurveKind::Cdf
    } else {
        CurveKind::Pdf
    };
    let sys = system(cfg, cfg.antennas[0], cfg.power_linear(cfg.pt[0]))?;
    let grid = cfg.grid.values();
    let quad = quad(cfg);
    let methods = cfg.curve_methods();
    require_interferers(cfg, &methods)?;

    let mut out = Produced::default();
    let mut table = Table::new("gamma");
    let mut columns: Vec<Vec<String>> = Vec::new();
    for &m in &methods {
        if m == CurveMethod::MonteCarlo {
            let sinr = sorted(components(cfg, &sys)?.iter().map(|c| c.sinr(sys.p_t(), sys.sigma2(), sys.users())).collect());
            let values: Vec<f64> = match kind {
                CurveKind::Cdf => {
                    table.info("dkw_half_width_99", dkw_half_width(sinr.len(), 0.01)?);
                    empirical_cdf_values(&sinr, &grid)?
                }
                CurveKind::Pdf => {
                    table.info("histogram_relative_bin_width", PDF_BIN_WIDTH);
                    grid.iter()
                        .map(|&g| {
                            let h = PDF_BIN_WIDTH * g;
                            let lo = sinr.partition_point(|&v| v < g - 0.5 * h);
                            let hi = sinr.partition_point(|&v| v < g + 0.5 * h);
                            (hi - lo) as f64 / (sinr.len() as f64 * h)
                        })
                        .collect()
                }
            };
            table.column(m.as_str(), "monte_carlo");
            columns.push(values.into_iter().map(num).collect());
        } else {
            let br = branch(cfg);
            let points = map_slice(&grid, EXEC, |&g| match kind {
                CurveKind::Cdf => analytic_cdf(m, g, &sys, &quad, br),
                CurveKind::Pdf => evaluate(m, kind, g, &sys, &quad),
            });
            push_analytic(&mut table, &mut columns, m.as_str(), &points, &mut out.failures);
        }
    }
    finish(&mut table, &grid, &columns);
    out.tables.push((None, table));
    Ok(out)
}

/// Outage probability at threshold `gamma` over a transmit-power grid, one
/// column group per array size.
fn outage(cfg: &RunConfig) -> Result<Produced, CliError> {
    let grid = cfg.grid.values();
    let powers: Vec<f64> = grid.iter().map(|&p| cfg.power_linear(p)).collect();
    let quad = quad(cfg);
    let methods = cfg.curve_methods();
    require_interferers(cfg, &methods)?;

    let mut out = Produced::default();
    let mut table = Table::new(cfg.power_label());
    let mut columns: Vec<Vec<String>> = Vec::new();
    for &l in &cfg.antennas {
        let base = system(cfg, l, powers[0])?;
        for &m in &methods {
            let name = format!("L{l}_{}", m.as_str());
            if m == CurveMethod::MonteCarlo {
                let comps = components(cfg, &base)?;
                let values = map_slice(&powers, EXEC, |&p| {
                    let hits = comps.iter().filter(|c| c.sinr(p, cfg.sigma2, cfg.users) <= cfg.gamma).count();
                    num(hits as f64 / comps.len() as f64)
                });
                table.column(name, "monte_carlo");
                columns.push(values);
            } else {
                let br = branch(cfg);
                let points = map_slice(&powers, EXEC, |&p| {
                    let sys = base.with_power(p)?;
                    analytic_cdf(m, cfg.gamma, &sys, &quad, br)
                });
                push_analytic(&mut table, &mut columns, &name, &points, &mut out.failures);
            }
        }
    }
    if cfg.wants("monte_carlo") {
        table.info("dkw_half_width_99", dkw_half_width(cfg.samples, 0.01)?);
    }
    finish(&mut table, &grid, &columns);
    out.tables.push((None, table));
    Ok(out)
}

/// Ergodic rate over a transmit-power grid, one column group per array size.
fn rate(cfg: &RunConfig) -> Result<Produced, CliError> {
    let grid = cfg.grid.values();
    let powers: Vec<f64> = grid.iter().map(|&p| cfg.power_linear(p)).collect();
    let unit = |v: f64| if cfg.bits { nats_to_bits(v) } else { v };
    let mut table = Table::new(cfg.power_label());
    table.info("rate_unit", if cfg.bits { "bits/s/Hz" } else { "nats/s/Hz" });
    let mut columns: Vec<Vec<String>> = Vec::new();
    for &l in &cfg.antennas {
        let base = system(cfg, l, powers[0])?;
        let systems = powers.iter().map(|&p| base.with_power(p)).collect::<mfsinr::Result<Vec<_>>>()?;
        for m in &cfg.methods {
            let name = format!("L{l}_{m}");
            match m.as_str() {
                "monte_carlo" => {
                    let est = ergodic_rate_mc_sweep(&base, &powers, &mc(cfg), EXEC)?;
                    table.column(&name, "monte_carlo");
                    table.column(format!("{name}_se"), "standard_error");
                    columns.push(est.iter().map(|e| num(unit(e.mean))).collect());
                    columns.push(est.iter().map(|e| num(unit(e.std_error))).collect());
                }
                "robust" => {
                    let v = systems.iter().map(ergodic_rate_robust).collect::<mfsinr::Result<Vec<_>>>()?;
                    table.column(&name, "analytic");
                    columns.push(v.into_iter().map(|x| num(unit(x))).collect());
                }
                "jensen" => {
                    table.column(&name, "analytic");
                    columns.push(systems.iter().map(|s| num(unit(ergodic_rate_jensen(s)))).collect());
                }
                "asymptotic" => {
                    let c = f64::from(l) / f64::from(cfg.users);
                    let v = powers
                        .iter()
                        .map(|&p| ergodic_rate_asymptotic(c, p, cfg.sigma2))
                        .collect::<mfsinr::Result<Vec<_>>>()?;
                    table.column(&name, "analytic");
                    columns.push(v.into_iter().map(|x| num(unit(x))).collect());
                }
                other => unreachable!("method {other} passed validation"),
            }
        }
    }
    finish(&mut table, &grid, &columns);
    Ok(Produced {
        tables: vec![(None, table)],
        failures: 0,
    })
}

/// Left: CDF of 1/((K-1)·SINR) for each transmit power, with its high-SNR
/// limit. Right: CDF of SINR/L for each array size, with the massive-array
/// limit. Both share the x grid.
fn fig2(cfg: &RunConfig) -> Result<Produced, CliError> {
    if cfg.users < 2 {
        return Err(CliError::Usage("fig2 needs K >= 2".into()));
    }
    let xs = cfg.grid.values();
    let quad = quad(cfg);
    let k1 = f64::from(cfg.users - 1);
    let mut out = Produced::default();

    let mut left = Table::new("x");
    let mut columns: Vec<Vec<String>> = Vec::new();
    let left_l = cfg.left_antennas;
    let left_comps = if cfg.wants("monte_carlo") {
        Some(components(cfg, &system(cfg, left_l, cfg.power_linear(cfg.pt[0]))?)?)
    } else {
        None
    };
    for &p in &cfg.pt {
        let sys = system(cfg, left_l, cfg.power_linear(p))?;
        let name = format!("{}_{}", cfg.power_label(), num(p));
        if cfg.wants("exact") {
            let points = map_slice(&xs, EXEC, |&x| scaled_inverse_sinr_cdf(x, &sys, &quad));
            push_analytic(&mut left, &mut columns, &name, &points, &mut out.failures);
        }
        if let Some(comps) = &left_comps {
            let v = sorted(comps.iter().map(|c| 1.0 / (k1 * c.sinr(sys.p_t(), sys.sigma2(), sys.users()))).collect());
            left.column(format!("{name}_monte_carlo"), "monte_carlo");
            columns.push(xs.iter().map(|&x| num(fraction_at_most(&v, x))).collect());
        }
    }
    let points = map_slice(&xs, EXEC, |&x| high_snr_limit_cdf(x, left_l, cfg.users, &quad));
    push_analytic(&mut left, &mut columns, "limit", &points, &mut out.failures);
    finish(&mut left, &xs, &columns);
    left.info("panel", "left");
    out.tables.push((Some("left"), left));

    let mut right = Table::new("x");
    let mut columns: Vec<Vec<String>> = Vec::new();
    let p = cfg.power_linear(cfg.right_pt);
    for &l in &cfg.antennas {
        let sys = system(cfg, l, p)?;
        let name = format!("L{l}");
        let lf = f64::from(l);
        if cfg.wants("exact") {
            let br = branch(cfg);
            let points = map_slice(&xs, EXEC, |&x| sinr_cdf_exact_with_branch(lf * x, &sys, &quad, br));
            push_analytic(&mut right, &mut columns, &format!("{name}_exact"), &points, &mut out.failures);
        }
        if cfg.wants("monte_carlo") {
            let v = sorted(components(cfg, &sys)?.iter().map(|c| c.sinr(p, cfg.sigma2, cfg.users) / lf).collect());
            right.column(format!("{name}_monte_carlo"), "monte_carlo");
            columns.push(xs.iter().map(|&x| num(fraction_at_most(&v, x))).collect());
        }
    }
    let limit = xs
        .iter()
        .map(|&x| massive_limit_cdf(x, cfg.users, p, cfg.sigma2))
        .collect::<mfsinr::Result<Vec<_>>>()?;
    right.column("massive_limit", "analytic");
    columns.push(limit.into_iter().map(num).collect());
    finish(&mut right, &xs, &columns);
    right.info("panel", "right");
    out.tables.push((Some("right"), right));
    Ok(out)
}
