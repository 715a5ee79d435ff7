//! Verification suites. Each suite draws its samples from a generator seeded by the run
//! seed and the check name, so results do not depend on which suites run or in what order.

mod geometry;
mod halfform;
mod mixed;
mod quantum;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::report::{Provenance, TestRecord, VerificationReport};
use crate::sampling::{self, SampleRng};
use crate::C64;
use serde_json::{json, Value};
use std::time::Instant;

pub const SUITES: [&str; 7] = ["flows", "polarization", "kahler", "halfform", "mixed", "cst-unitarity", "cst-norm-experiment"];

/// Result of one check before it is turned into a record.
pub enum Outcome {
    Residual(f64),
    Compare(C64, C64),
    Positive(f64),
}

pub(crate) struct Ctx<'a> {
    pub suite: &'static str,
    pub cfg: &'a RunConfig,
    pub report: VerificationReport,
    timings: bool,
}

pub(crate) fn cplx(z: C64) -> Value {
    json!([z.re, z.im])
}

impl<'a> Ctx<'a> {
    fn new(suite: &'static str, cfg: &'a RunConfig, timings: bool) -> Self {
        Self { suite, cfg, report: VerificationReport::new(suite, cfg), timings }
    }

    /// Generator for the check `name` under `params`.
    pub fn rng(&self, name: &str, params: &Value) -> SampleRng {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in self.suite.bytes().chain(name.bytes()).chain(params.to_string().bytes()) {
            h = (h ^ b as u64).wrapping_mul(0x0100_0000_01b3);
        }
        sampling::rng(h ^ self.cfg.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }

    pub fn check(&mut self, name: &str, params: Value, provenance: Provenance, tol: f64, f: impl FnOnce(&mut SampleRng) -> Result<Outcome>) {
        let mut rng = self.rng(name, &params);
        let start = Instant::now();
        let outcome = f(&mut rng);
        let elapsed = start.elapsed().as_secs_f64() * 1e3;
        let suite = self.suite;
        let mut rec = match outcome {
            Ok(Outcome::Residual(r)) => TestRecord::residual(suite, name, params, r, provenance, tol),
            Ok(Outcome::Compare(v, r)) => TestRecord::compare(suite, name, params, v, r, provenance, tol),
            Ok(Outcome::Positive(v)) => TestRecord::positive(suite, name, params, v, provenance),
            Err(e) => TestRecord::failed(suite, name, params, provenance, tol, &e),
        };
        if self.timings {
            rec.runtime_ms = Some(elapsed);
        }
        self.report.push(rec);
    }
}

/// Largest value of `f` over `count` samples, propagating the first failure.
pub(crate) fn max_over(count: usize, rng: &mut SampleRng, mut f: impl FnMut(&mut SampleRng) -> Result<f64>) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..count {
        let v = f(rng)?;
        if !v.is_finite() {
            return Err(Error::Numeric(format!("non-finite residual {v}")));
        }
        worst = worst.max(v);
    }
    Ok(worst)
}

/// Runs one suite, or all of them in order for `"all"`. Configuration problems are errors;
/// numerical failures become failed records.
pub fn run(name: &str, cfg: &RunConfig, timings: bool) -> Result<VerificationReport> {
    cfg.validate_for(name)?;
    if name == "all" {
        let mut all = VerificationReport::new("all", cfg);
        for s in SUITES {
            all.extend(run(s, cfg, timings)?);
        }
        return Ok(all);
    }
    let suite: &'static str = SUITES
        .iter()
        .find(|s| **s == name)
        .ok_or_else(|| Error::Config(format!("unknown suite {name:?}; expected one of {} or all", SUITES.join(", "))))?;
    let alg = cfg.algebra()?;
    let mut ctx = Ctx::new(suite, cfg, timings);
    match suite {
        "flows" => geometry::flows(&mut ctx, &alg)?,
        "polarization" => geometry::polarization(&mut ctx, &alg)?,
        "kahler" => geometry::kahler(&mut ctx, &alg)?,
        "halfform" => halfform::run(&mut ctx, &alg)?,
        "mixed" => mixed::run(&mut ctx, &alg)?,
        "cst-unitarity" => quantum::unitarity(&mut ctx, &alg)?,
        _ => quantum::norm_experiment(&mut ctx, &alg)?,
    }
    Ok(ctx.report)
}

/// Caps the worker pool at `KAHLERFLOW_THREADS` when set.
pub fn init_threads() -> Result<()> {
    let Ok(v) = std::env::var("KAHLERFLOW_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| Error::Config(format!("KAHLERFLOW_THREADS must be a positive integer, got {v:?}")))?;
    if n == 0 {
        return Err(Error::Config("KAHLERFLOW_THREADS must be at least 1".into()));
    }
    #[cfg(feature = "parallel")]
    {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}
