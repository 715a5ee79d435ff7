//! Acceptance criteria, one test per criterion. Each test prints a single PASS/FAIL line
//! with its worst record and runtime; the tests share a lock so runtimes are not inflated
//! by each other.

use kahlerflow::config::RunConfig;
use kahlerflow::report::{Format, TestRecord, VerificationReport};
use kahlerflow::suites;
use std::sync::{Mutex, MutexGuard, OnceLock};
use std::time::{Duration, Instant};

fn serial() -> MutexGuard<'static, ()> {
    static LOCK: Mutex<()> = Mutex::new(());
    LOCK.lock().unwrap_or_else(|e| e.into_inner())
}

fn run(suite: &str, cfg: &RunConfig) -> (VerificationReport, Duration) {
    let start = Instant::now();
    let rep = suites::run(suite, cfg, false).expect("suite runs");
    (rep, start.elapsed())
}

fn select<'a>(rep: &'a VerificationReport, names: &[&str]) -> Vec<&'a TestRecord> {
    rep.records.iter().filter(|r| names.iter().any(|n| r.name.starts_with(n))).collect()
}

fn verdict(id: u32, title: &str, records: &[&TestRecord], extra: Result<(), String>, elapsed: Duration, limit: Option<Duration>) {
    let failed: Vec<String> = records
        .iter()
        .filter(|r| !r.pass)
        .map(|r| format!("{} {} err={:?} tol={:e} {}", r.suite, r.name, r.abs_err, r.tolerance, r.params))
        .collect();
    let worst = records
        .iter()
        .filter_map(|r| r.abs_err.map(|e| (e / r.tolerance.max(f64::MIN_POSITIVE), r)))
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(_, r)| format!("worst {} {:.2e}/{:.0e}", r.name, r.abs_err.unwrap_or(f64::NAN), r.tolerance))
        .unwrap_or_default();
    let slow = limit.is_some_and(|l| elapsed > l);
    let ok = !records.is_empty() && failed.is_empty() && extra.is_ok() && !slow;
    println!(
        "criterion {id:>2} {:<4} {title}: {} records, {worst}, {:.1}s{}",
        if ok { "PASS" } else { "FAIL" },
        records.len(),
        elapsed.as_secs_f64(),
        limit.map(|l| format!(" (limit {}s)", l.as_secs())).unwrap_or_default()
    );
    assert!(!records.is_empty(), "criterion {id}: no records");
    assert!(failed.is_empty(), "criterion {id} failures:\n{}", failed.join("\n"));
    if let Err(e) = extra {
        panic!("criterion {id}: {e}");
    }
    assert!(!slow, "criterion {id}: took {elapsed:?}");
}

fn flows() -> &'static (VerificationReport, Duration) {
    static R: OnceLock<(VerificationReport, Duration)> = OnceLock::new();
    R.get_or_init(|| run("flows", &RunConfig::default()))
}

fn norm_experiment() -> &'static (VerificationReport, Duration) {
    static R: OnceLock<(VerificationReport, Duration)> = OnceLock::new();
    R.get_or_init(|| run("cst-norm-experiment", &RunConfig::default()))
}

#[test]
fn criterion_01_flow_identities() {
    let _g = serial();
    let (rep, t) = flows();
    let recs = select(rep, &["flows-commute", "flow-h-vs-rk4", "flow-f-vs-rk4"]);
    verdict(1, "flows commute and match RK4", &recs, Ok(()), *t, Some(Duration::from_secs(10)));
}

#[test]
fn criterion_02_tangent_maps() {
    let _g = serial();
    let (rep, t) = flows();
    let recs = select(rep, &["tangent-h-vs-fd", "tangent-f-vs-fd", "tangent-chain-rule", "automorphism-min-singular-value"]);
    verdict(2, "tangent maps, chain rule, automorphism", &recs, Ok(()), *t, None);
}

#[test]
fn criterion_03_appendix_calculus() {
    let _g = serial();
    let (rep, t) = flows();
    let recs = select(rep, &["bracket-vs-chart", "pushforward-"]);
    verdict(3, "bracket and pushforward formulas", &recs, Ok(()), *t, None);
}

#[test]
fn criterion_04_kahler() {
    let _g = serial();
    let (rep, t) = run("kahler", &RunConfig::default());
    let recs = select(&rep, &["isotropy", "metric-hermitian", "metric-positive", "metric-vs-frame-assembly", "potential-theta-vs-dlambda"]);
    let cells = recs.iter().filter(|r| r.name == "isotropy").count();
    let extra = if cells >= 9 { Ok(()) } else { Err(format!("only {cells} parameter cells")) };
    verdict(4, "Kähler structure on the tau x sigma grid", &recs, extra, t, None);
}

#[test]
fn criterion_05_half_forms() {
    let _g = serial();
    let (rep, t) = run("halfform", &RunConfig::default());
    let recs = select(&rep, &["density-closed-form-vs-frame-oracle", "density-ratio-at-real-sigma", "growth-bound"]);
    let oracle_points = 12 * recs.iter().filter(|r| r.name == "density-closed-form-vs-frame-oracle").count();
    let extra = if oracle_points >= 100 && !rep.fits.is_empty() { Ok(()) } else { Err(format!("{oracle_points} oracle points, {} fits", rep.fits.len())) };
    verdict(5, "half-form density and growth bound", &recs, extra, t, Some(Duration::from_secs(30)));
}

#[test]
fn criterion_06_mixed_polarization() {
    let _g = serial();
    let (rep, t) = run("mixed", &RunConfig::default());
    let recs: Vec<&TestRecord> = rep.records.iter().collect();
    verdict(6, "mixed polarization, leaves and leaf volume", &recs, Ok(()), t, None);
}

#[test]
fn criterion_07_unitarity() {
    let _g = serial();
    let cfg = RunConfig { lambda_max: 2.0, ..RunConfig::default() };
    let (rep, t) = run("cst-unitarity", &cfg);
    let recs = select(&rep, &["unitarity-mixed", "unitarity-off-diagonal", "torus-gaussian-integral"]);
    let cells = recs.iter().filter(|r| r.name == "unitarity-mixed").count();
    let extra = if cells == 9 { Ok(()) } else { Err(format!("{cells} (sigma, f0) cells")) };
    verdict(7, "partial transform is unitary for spins up to 2", &recs, extra, t, Some(Duration::from_secs(60)));
}

#[test]
fn criterion_08_kahler_l2_finiteness() {
    let _g = serial();
    let (rep, t) = norm_experiment();
    let recs = select(rep, &["kahler-l2-finite-spin-half"]);
    verdict(8, "spin 1/2 Kähler norms converge", &recs, Ok(()), *t, None);
}

#[test]
fn criterion_09_norm_experiment_table() {
    let _g = serial();
    let (rep, t) = norm_experiment();
    let recs = select(rep, &["norm-table-converged"]);
    let dir = std::env::temp_dir().join(format!("kahlerflow-acceptance-{}", std::process::id()));
    let extra = (|| -> Result<(), String> {
        rep.write(&dir, Format::Csv).map_err(|e| e.to_string())?;
        let text = std::fs::read_to_string(dir.join("norm_table.csv")).map_err(|e| e.to_string())?;
        let rows = text.lines().count() - 1;
        let want = rep.config.taus().len() * rep.config.sigmas().len() * (1 + 4 + 9);
        if rows != want {
            return Err(format!("norm table has {rows} rows, expected {want}"));
        }
        let table = rep.norm_table.as_ref().ok_or("missing table")?;
        if table.iter().any(|r| !(r.times_dim.is_finite() && r.times_dim > 0.0)) {
            return Err("non-finite entry".into());
        }
        Ok(())
    })();
    std::fs::remove_dir_all(&dir).ok();
    verdict(9, "norm table produced and persisted", &recs, extra, *t, None);
}

#[test]
fn criterion_10_determinism() {
    let _g = serial();
    let cfg = RunConfig { seed: 1, ..RunConfig::default() };
    let (a, ta) = run("all", &cfg);
    let (b, tb) = run("all", &cfg);
    let (ja, jb) = (a.to_json().unwrap(), b.to_json().unwrap());
    let (ca, cb) = (a.to_csv().unwrap(), b.to_csv().unwrap());
    let extra = if ja == jb && ca == cb { Ok(()) } else { Err("reports differ between runs".into()) };
    let recs: Vec<&TestRecord> = a.records.iter().collect();
    verdict(10, "verify all --seed 1 is byte-identical", &recs, extra, ta.max(tb), Some(Duration::from_secs(300)));
}
