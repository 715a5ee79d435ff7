//! Run configuration: a JSON document with command-line overrides.
//!
//! ```json
//! {
//!   "group": "su2",
//!   "f0": [0.5, 1.0, 2.0],
//!   "h": "quadratic",
//!   "tau": [[0, 1], [1, 1], [0, 2]],
//!   "sigma": [[0, 0], [0, 1], [1, 1]],
//!   "mixed_sigma": [[0, 1], [0.5, 1], [0, 2]],
//!   "lambda_max": 2,
//!   "seed": 1
//! }
//! ```
//!
//! A custom group is given by a path to a JSON file of the form
//! `{"name": "...", "basis": [[[[re, im], ...], ...], ...], "cartan": [..], "inner_product_scale": 2.0}`
//! where each basis element is a square anti-Hermitian matrix written row by row.

use crate::complexifier::{Complexifier, TorusForm};
use crate::error::{Error, Result};
use crate::hilbert::QuadratureOptions;
use crate::lie::LieAlgebra;
use crate::tolerances::Tolerances;
use crate::{CMat, RMat, C64};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// A single value or a list of values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> Grid<T> {
    pub fn values(&self) -> Vec<T> {
        match self {
            Grid::One(v) => vec![v.clone()],
            Grid::Many(v) => v.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// `"su2"` or a path to a custom group definition.
    pub group: String,
    /// Scalar torus forms `F = f0 proj_t`; ignored when `f_matrix` is set.
    pub f0: Grid<f64>,
    /// Explicit `r x r` torus form.
    pub f_matrix: Option<Vec<Vec<f64>>>,
    /// `"quadratic"` or `"softened"`.
    pub h: String,
    /// Kähler times as `[re, im]`.
    pub tau: Grid<[f64; 2]>,
    pub sigma: Grid<[f64; 2]>,
    /// Times for the mixed polarization and the unitarity suite.
    pub mixed_sigma: Grid<[f64; 2]>,
    /// Largest spin in the unitarity suite.
    pub lambda_max: f64,
    /// Largest spin in the norm experiment.
    pub norm_lambda_max: f64,
    pub quadrature: QuadratureOptions,
    pub tolerances: Tolerances,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            group: "su2".into(),
            f0: Grid::Many(vec![0.5, 1.0, 2.0]),
            f_matrix: None,
            h: "quadratic".into(),
            tau: Grid::Many(vec![[0.0, 1.0], [1.0, 1.0], [0.0, 2.0]]),
            sigma: Grid::Many(vec![[0.0, 0.0], [0.0, 1.0], [1.0, 1.0]]),
            mixed_sigma: Grid::Many(vec![[0.0, 1.0], [0.5, 1.0], [0.0, 2.0]]),
            lambda_max: 2.0,
            norm_lambda_max: 1.0,
            quadrature: QuadratureOptions::default(),
            tolerances: Tolerances::default(),
            seed: 1,
            out: None,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupFile {
    name: String,
    basis: Vec<Vec<Vec<[f64; 2]>>>,
    cartan: Vec<usize>,
    inner_product_scale: Option<f64>,
}

fn config_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}

fn complex(v: [f64; 2]) -> C64 {
    C64::new(v[0], v[1])
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid config: {e}")))
    }

    pub fn taus(&self) -> Vec<C64> {
        self.tau.values().into_iter().map(complex).collect()
    }

    pub fn sigmas(&self) -> Vec<C64> {
        self.sigma.values().into_iter().map(complex).collect()
    }

    pub fn mixed_sigmas(&self) -> Vec<C64> {
        self.mixed_sigma.values().into_iter().map(complex).collect()
    }

    pub fn algebra(&self) -> Result<LieAlgebra> {
        if self.group == "su2" {
            return Ok(LieAlgebra::su2());
        }
        let text = std::fs::read_to_string(&self.group).map_err(|e| {
            Error::Config(format!("group must be \"su2\" or a readable JSON file; {}: {e}", self.group))
        })?;
        let g: GroupFile =
            serde_json::from_str(&text).map_err(|e| Error::Config(format!("invalid group file {}: {e}", self.group)))?;
        let mut basis = Vec::with_capacity(g.basis.len());
        for (j, rows) in g.basis.iter().enumerate() {
            let m = rows.len();
            if rows.iter().any(|r| r.len() != m) {
                return config_err(format!("basis element {j} of {} is not square", self.group));
            }
            basis.push(CMat::from_fn(m, m, |a, b| complex(rows[a][b])));
        }
        LieAlgebra::from_basis(&g.name, basis, g.cartan, g.inner_product_scale)
    }

    pub fn complexifier(&self, alg: &LieAlgebra) -> Result<Complexifier> {
        Complexifier::by_name(alg, &self.h)
    }

    pub fn torus_forms(&self, alg: &LieAlgebra) -> Result<Vec<(f64, TorusForm)>> {
        if let Some(rows) = &self.f_matrix {
            let r = rows.len();
            if rows.iter().any(|row| row.len() != r) {
                return config_err("f_matrix must be square");
            }
            let m = RMat::from_fn(r, r, |a, b| rows[a][b]);
            return Ok(vec![(f64::NAN, TorusForm::new(alg, m)?)]);
        }
        self.f0
            .values()
            .into_iter()
            .map(|f0| {
                if !(f0 > 0.0) {
                    return config_err(format!("f0 must be positive, got {f0}"));
                }
                Ok((f0, TorusForm::scalar(alg, f0)?))
            })
            .collect()
    }

    /// Checks the parts of the configuration used by `suite` (`"all"` checks everything).
    pub fn validate_for(&self, suite: &str) -> Result<()> {
        self.validate()?;
        let kahler = matches!(suite, "polarization" | "kahler" | "halfform" | "cst-unitarity" | "cst-norm-experiment" | "all");
        let mixed = matches!(suite, "mixed" | "cst-unitarity" | "all");
        if kahler {
            if let Some(t) = self.taus().iter().find(|t| !(t.im > 0.0)) {
                return config_err(format!("Kähler suites need Im tau > 0, got tau = {t}; pass e.g. --tau 0,1"));
            }
            if let Some(s) = self.sigmas().iter().find(|s| !(s.im >= 0.0)) {
                return config_err(format!("Kähler suites need Im sigma >= 0, got sigma = {s}"));
            }
        }
        if mixed {
            if let Some(s) = self.mixed_sigmas().iter().find(|s| !(s.im > 0.0)) {
                return config_err(format!("mixed suites need Im sigma > 0, got sigma = {s}; pass e.g. --sigma 0,1"));
            }
        }
        Ok(())
    }

    /// Checks everything that does not depend on the suite.
    pub fn validate(&self) -> Result<()> {
        let alg = self.algebra()?;
        self.complexifier(&alg)?;
        self.torus_forms(&alg)?;
        if self.tau.values().is_empty() || self.sigma.values().is_empty() || self.mixed_sigma.values().is_empty() {
            return config_err("tau, sigma and mixed_sigma need at least one value");
        }
        for (name, v) in [("lambda_max", self.lambda_max), ("norm_lambda_max", self.norm_lambda_max)] {
            if !(v >= 0.0) || (2.0 * v).fract() != 0.0 || v > 6.0 {
                return config_err(format!("{name} must be a half-integer in [0, 6], got {v}"));
            }
        }
        let q = &self.quadrature;
        if q.gh_order == 0 || q.max_gh_order < q.gh_order || q.radial == 0 || q.polar == 0 || q.azimuth == 0 {
            return config_err("quadrature orders must be positive and max_gh_order >= gh_order");
        }
        if !(q.tolerance > 0.0) {
            return config_err("quadrature tolerance must be positive");
        }
        Ok(())
    }
}

/// Parses `RE,IM` as used by the `--tau` and `--sigma` flags.
pub fn parse_complex(s: &str) -> Result<[f64; 2]> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || Error::Config(format!("expected RE,IM (for example 0,1), got {s:?}"));
    if parts.len() != 2 {
        return Err(bad());
    }
    let re = parts[0].parse::<f64>().map_err(|_| bad())?;
    let im = parts[1].parse::<f64>().map_err(|_| bad())?;
    Ok([re, im])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate_and_round_trip() {
        let c = RunConfig::default();
        c.validate_for("all").unwrap();
        let back = RunConfig::from_json(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn partial_documents_and_scalars() {
        let c = RunConfig::from_json(r#"{"f0": 2.0, "tau": [0, 3], "tolerances": {"unitarity": 1e-6}}"#).unwrap();
        assert_eq!(c.f0.values(), vec![2.0]);
        assert_eq!(c.taus(), vec![C64::new(0.0, 3.0)]);
        assert_eq!(c.tolerances.unitarity, 1e-6);
        assert_eq!(c.tolerances.isotropy, crate::tolerances::ISOTROPY);
    }

    #[test]
    fn actionable_errors() {
        let msg = |json: &str| match RunConfig::from_json(json).and_then(|c| c.validate_for("all")) {
            Err(Error::Config(m)) => m,
            other => panic!("{other:?}"),
        };
        assert!(msg(r#"{"tau": [1, 0]}"#).contains("Im tau > 0"));
        assert!(msg(r#"{"mixed_sigma": [[0, 1], [1, 0]]}"#).contains("Im sigma > 0"));
        assert!(msg(r#"{"lambda_max": 0.3}"#).contains("half-integer"));
        assert!(msg(r#"{"colour": 1}"#).contains("unknown field"));
        assert!(msg(r#"{"h": "cubic"}"#).contains("cubic"));
        assert!(msg(r#"{"group": "/nonexistent.json"}"#).contains("/nonexistent.json"));
        let kahler_only = RunConfig::from_json(r#"{"mixed_sigma": [0, 0]}"#).unwrap();
        kahler_only.validate_for("kahler").unwrap();
        assert!(kahler_only.validate_for("mixed").is_err());
        assert!(parse_complex("1;2").is_err());
        assert_eq!(parse_complex(" 0.5, -1").unwrap(), [0.5, -1.0]);
    }

    #[test]
    fn custom_group_file() {
        let alg = LieAlgebra::su2();
        let basis: Vec<Vec<Vec<[f64; 2]>>> = alg
            .basis()
            .iter()
            .map(|m| (0..2).map(|a| (0..2).map(|b| [m[(a, b)].re, m[(a, b)].im]).collect()).collect())
            .collect();
        let doc = serde_json::json!({"name": "su2-copy", "basis": basis, "cartan": [2], "inner_product_scale": 2.0});
        let path = std::env::temp_dir().join(format!("kahlerflow-group-{}.json", std::process::id()));
        std::fs::write(&path, doc.to_string()).unwrap();
        let c = RunConfig { group: path.display().to_string(), ..Default::default() };
        let loaded = c.algebra().unwrap();
        std::fs::remove_file(&path).ok();
        assert_eq!(loaded.dim(), 3);
        assert!((loaded.gram() - RMat::identity(3, 3)).amax() < 1e-14);
    }
}
