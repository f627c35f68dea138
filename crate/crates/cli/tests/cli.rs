mod common;

use common::{code, mfsinr, Csv};
use tempfile::TempDir;

fn tmp() -> TempDir {
    tempfile::tempdir().unwrap()
}

#[test]
fn cdf_output_round_trips_through_config() {
    let dir = tmp();
    let args = ["cdf", "--L", "6", "--K", "3", "--pt", "0.1", "--sigma2", "0.3", "--grid", "0.05:20:12:log"];
    let run = mfsinr(&[&args[..], &["--samples", "20000", "--seed", "9", "--out", "a.csv"]].concat(), dir.path());
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    let rerun = mfsinr(&["cdf", "--config", "a.csv", "--out", "b.csv"], dir.path());
    assert_eq!(code(&rerun), 0);
    let a = std::fs::read(dir.path().join("a.csv")).unwrap();
    let b = std::fs::read(dir.path().join("b.csv")).unwrap();
    assert_eq!(a, b);
    let csv = Csv::read(&dir.path().join("a.csv"));
    assert_eq!(csv.header["L"], "6");
    assert_eq!(csv.header["samples"], "20000");
    assert_eq!(csv.names, ["gamma", "exact", "exact_err", "beta_approx", "beta_approx_err", "monte_carlo"]);
}

#[test]
fn fig2_round_trips_both_files() {
    let dir = tmp();
    let run = mfsinr(
        &["fig2", "--L", "16,32", "--pt", "1,100", "--grid", "0.02:1.5:15:lin", "--samples", "5000", "--out", "f.csv"],
        dir.path(),
    );
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    let rerun = mfsinr(&["fig2", "--config", "f_left.csv", "--out", "g.csv"], dir.path());
    assert_eq!(code(&rerun), 0);
    for side in ["left", "right"] {
        let a = std::fs::read(dir.path().join(format!("f_{side}.csv"))).unwrap();
        let b = std::fs::read(dir.path().join(format!("g_{side}.csv"))).unwrap();
        assert_eq!(a, b, "{side}");
    }
}

#[test]
fn flags_override_config_file() {
    let dir = tmp();
    std::fs::write(dir.path().join("run.conf"), "# my run\nK=6\nsigma2=2\nmethods=exact\ngrid=1:2:2:lin\n").unwrap();
    let run = mfsinr(&["cdf", "--config", "run.conf", "--K", "5"], dir.path());
    assert_eq!(code(&run), 0);
    let csv = Csv::parse(&String::from_utf8(run.stdout).unwrap());
    assert_eq!(csv.header["K"], "5");
    assert_eq!(csv.header["sigma2"], "2");
    assert_eq!(csv.header["L"], "8");
    assert_eq!(csv.col("gamma"), vec![1.0, 2.0]);
}

#[test]
fn usage_errors_exit_with_one() {
    let dir = tmp();
    for args in [
        &["cdf", "--grid", "1:2:0:lin"][..],
        &["cdf", "--methods", "robust"],
        &["cdf", "--L", "4,8"],
        &["cdf", "--K", "0"],
        &["rate", "--L", "2"],
        &["fig1", "--pt-unit", "linear"],
        &["cdf", "--config", "missing.conf"],
        &["cdf", "--bogus"],
        &["nonsense"],
    ] {
        let out = mfsinr(args, dir.path());
        assert_eq!(code(&out), 1, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
    std::fs::write(dir.path().join("bad.conf"), "colour=blue\n").unwrap();
    assert_eq!(code(&mfsinr(&["cdf", "--config", "bad.conf"], dir.path())), 1);
}

#[test]
fn budget_failures_are_marked_and_exit_with_two() {
    let dir = tmp();
    let out = mfsinr(&["cdf", "--methods", "exact,monte_carlo", "--max-panels", "5", "--grid", "0.5:4:4:lin", "--samples", "1000"], dir.path());
    assert_eq!(code(&out), 2);
    let csv = Csv::parse(&String::from_utf8(out.stdout).unwrap());
    assert!(csv.columns["exact"].iter().all(|c| c == "NA"));
    assert!(csv.columns["exact_err"].iter().all(|c| c == "budget_exceeded"));
    // The run continued past the failures.
    assert_eq!(csv.col("monte_carlo").len(), 4);
}

#[test]
fn same_seed_same_monte_carlo_column() {
    let dir = tmp();
    let args = ["cdf", "--methods", "monte_carlo", "--samples", "30000", "--seed", "5", "--grid", "0.1:10:20:log"];
    let a = mfsinr(&args, dir.path()).stdout;
    let b = mfsinr(&args, dir.path()).stdout;
    assert_eq!(a, b);
    let other = mfsinr(&[&args[..6], &["--seed", "6", "--grid", "0.1:10:20:log"]].concat(), dir.path()).stdout;
    assert_ne!(a, other);
}

#[test]
fn cdf_methods_are_mutually_consistent() {
    let dir = tmp();
    let out = mfsinr(&["cdf", "--grid", "0.1:20:40:log", "--samples", "200000"], dir.path());
    assert_eq!(code(&out), 0);
    let csv = Csv::parse(&String::from_utf8(out.stdout).unwrap());
    let band: f64 = csv.header["info.dkw_half_width_99"].parse().unwrap();
    let (exact, beta, mc) = (csv.col("exact"), csv.col("beta_approx"), csv.col("monte_carlo"));
    for i in 0..exact.len() {
        assert!((exact[i] - mc[i]).abs() <= band, "row {i}");
        assert!((exact[i] - beta[i]).abs() <= 1e-2, "row {i}");
    }
}

#[test]
fn pdf_histogram_tracks_exact_density() {
    let dir = tmp();
    let out = mfsinr(&["pdf", "--grid", "0.5:6:12:lin", "--samples", "400000"], dir.path());
    assert_eq!(code(&out), 0);
    let csv = Csv::parse(&String::from_utf8(out.stdout).unwrap());
    let (g, exact, mc) = (csv.col("gamma"), csv.col("exact"), csv.col("monte_carlo"));
    let n = 400_000.0;
    for i in 0..g.len() {
        let h = 0.02 * g[i];
        let se = (exact[i] / (n * h)).sqrt();
        assert!((exact[i] - mc[i]).abs() < 4.0 * se + 1e-3, "γ={}: {} vs {}", g[i], exact[i], mc[i]);
    }
}

#[test]
fn power_unit_changes_only_the_power_column() {
    let dir = tmp();
    let db = mfsinr(&["outage", "--grid", "0:10:2:lin", "--pt-unit", "db", "--samples", "20000"], dir.path());
    let lin = mfsinr(&["outage", "--grid", "1:10:2:lin", "--pt-unit", "linear", "--samples", "20000"], dir.path());
    assert_eq!(code(&db), 0);
    assert_eq!(code(&lin), 0);
    let (db, lin) = (Csv::parse(&String::from_utf8(db.stdout).unwrap()), Csv::parse(&String::from_utf8(lin.stdout).unwrap()));
    assert_eq!(db.names[0], "pt_db");
    assert_eq!(lin.names[0], "pt");
    assert_eq!(db.names[1..], lin.names[1..]);
    for name in &db.names[1..] {
        assert_eq!(db.columns[name], lin.columns[name], "{name}");
    }
    let a = mfsinr(&["cdf", "--pt", "20", "--pt-unit", "db", "--methods", "exact", "--grid", "1:3:3:lin"], dir.path());
    let b = mfsinr(&["cdf", "--pt", "100", "--methods", "exact", "--grid", "1:3:3:lin"], dir.path());
    let (a, b) = (Csv::parse(&String::from_utf8(a.stdout).unwrap()), Csv::parse(&String::from_utf8(b.stdout).unwrap()));
    assert_eq!(a.columns["exact"], b.columns["exact"]);
}

#[test]
fn fig1_shape() {
    let dir = tmp();
    let out = mfsinr(&["fig1", "--samples", "200000", "--out", "fig1.csv"], dir.path());
    assert_eq!(code(&out), 0);
    let csv = Csv::read(&dir.path().join("fig1.csv"));
    assert_eq!(csv.col("pt_db").len(), 41);
    let band: f64 = csv.header["info.dkw_half_width_99"].parse().unwrap();
    let (l4, l8) = (csv.col("L4_exact"), csv.col("L8_exact"));
    for w in l4.windows(2).chain(l8.windows(2)) {
        assert!(w[1] <= w[0] + 1e-9);
    }
    assert!(*l4.last().unwrap() > 0.0 && *l8.last().unwrap() > 0.0);
    // Flattening out: the last 5 dB change the outage by under 2%.
    assert!((l4[35] - l4[40]) < 0.02 * l4[40]);
    for l in ["L4", "L8"] {
        let (e, m) = (csv.col(&format!("{l}_exact")), csv.col(&format!("{l}_monte_carlo")));
        for i in 0..e.len() {
            assert!((e[i] - m[i]).abs() <= band, "{l} row {i}");
        }
    }
    for i in 0..l4.len() {
        assert!(l8[i] <= l4[i] + 1e-12, "row {i}");
    }
}

#[test]
fn fig2_shape() {
    let dir = tmp();
    let out = mfsinr(&["fig2", "--samples", "100000", "--L", "16,64", "--grid", "0.02:2:60:lin"], dir.path());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let left = Csv::read(&dir.path().join("fig2_left.csv"));
    let right = Csv::read(&dir.path().join("fig2_right.csv"));
    let sup = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let limit = left.col("limit");
    let mut last = f64::INFINITY;
    for p in ["1", "10", "100", "1000"] {
        let d = sup(&left.col(&format!("pt_{p}")), &limit);
        assert!(d < last, "P_t={p}");
        last = d;
    }
    let massive = right.col("massive_limit");
    let d16 = sup(&right.col("L16_monte_carlo"), &massive);
    let d64 = sup(&right.col("L64_monte_carlo"), &massive);
    assert!(d64 < d16);
    for csv in [&left, &right] {
        for name in csv.names.iter().skip(1).filter(|n| !n.ends_with("_err")) {
            let v = csv.col(name);
            assert!(v.iter().all(|x| (0.0..=1.0).contains(x)), "{name}");
            assert!(v.windows(2).all(|w| w[1] >= w[0] - 1e-8), "{name}");
        }
    }
    // The limit columns do not depend on the sweep.
    let other = mfsinr(&["fig2", "--samples", "1000", "--L", "32", "--pt", "5", "--grid", "0.02:2:60:lin", "--out", "o.csv"], dir.path());
    assert_eq!(code(&other), 0);
    assert_eq!(Csv::read(&dir.path().join("o_left.csv")).columns["limit"], left.columns["limit"]);
    assert_eq!(Csv::read(&dir.path().join("o_right.csv")).columns["massive_limit"], right.columns["massive_limit"]);
}

#[test]
fn fig3_shape() {
    let dir = tmp();
    let out = mfsinr(&["fig3", "--samples", "300000", "--out", "fig3.csv"], dir.path());
    assert_eq!(code(&out), 0);
    let csv = Csv::read(&dir.path().join("fig3.csv"));
    let p = csv.col("pt_db");
    for l in [8.0f64, 12.0] {
        let c = |m: &str| csv.col(&format!("L{l}_{m}"));
        let (mc, se, robust, jensen, asym) = (c("monte_carlo"), c("monte_carlo_se"), c("robust"), c("jensen"), c("asymptotic"));
        // Low SNR: robust and asymptotic within 5%; Jensen/MC tends to (L-1)/L there.
        assert!((robust[0] - mc[0]).abs() < 0.05 * mc[0]);
        assert!((asym[0] - mc[0]).abs() < 0.05 * mc[0]);
        assert!(jensen[0] >= mc[0] * (l - 1.0) / l - 3.0 * se[0]);
        for i in 0..p.len() {
            assert!(jensen[i] <= mc[i] + 3.0 * se[i], "row {i}");
            if p[i] >= 10.0 {
                let r = (robust[i] - mc[i]).abs();
                assert!(r < (jensen[i] - mc[i]).abs() && r < (asym[i] - mc[i]).abs(), "L={l} row {i}");
            }
        }
    }
    let bits = mfsinr(&["rate", "--bits", "--grid", "10:10:1:lin", "--methods", "jensen"], dir.path());
    let nats = mfsinr(&["rate", "--grid", "10:10:1:lin", "--methods", "jensen"], dir.path());
    let b = Csv::parse(&String::from_utf8(bits.stdout).unwrap()).col("L8_jensen")[0];
    let n = Csv::parse(&String::from_utf8(nats.stdout).unwrap()).col("L8_jensen")[0];
    assert!((b - n / std::f64::consts::LN_2).abs() < 1e-15);
}

#[test]
fn selftest_passes_and_negative_control_fails() {
    let dir = tmp();
    let ok = mfsinr(&["selftest", "--samples", "300000"], dir.path());
    let text = String::from_utf8_lossy(&ok.stdout);
    assert_eq!(code(&ok), 0, "{text}");
    assert!(text.contains("PASS negative control"));
    assert!(text.contains("PASS max_panels=5"));
    let flipped = mfsinr(&["selftest", "--samples", "300000", "--flip-branch"], dir.path());
    assert_eq!(code(&flipped), 3);
    assert!(String::from_utf8_lossy(&flipped.stdout).contains("FAIL exact CDF inside 99% DKW band"));
}
