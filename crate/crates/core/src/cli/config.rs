//! Run configuration, read from TOML.

use std::path::Path;

use serde::Deserialize;

use crate::error::{Result, WakiError};
use crate::exactnum::{parse_q, CycNum, Mat, Q};
use crate::liealg::{AutomorphismData, Elem, LieAlgebraData};
use crate::twistor::SplitConvention;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub name: Option<String>,
    pub algebra: AlgebraConfig,
    #[serde(default)]
    pub automorphism: AutomorphismConfig,
    pub grading: GradingConfig,
    pub level: Number,
    #[serde(default)]
    pub verification: VerificationConfig,
}

/// A rational given as an integer or a `"p/q"` string.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Int(i64),
    Text(String),
}

impl Number {
    pub fn to_q(&self, path: &str) -> Result<Q> {
        match self {
            Number::Int(i) => Ok(Q::from_integer((*i).into())),
            Number::Text(s) => parse_q(s).map_err(|e| WakiError::config(path, e.to_string())),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraConfig {
    /// `"sl"` or `"raw"`.
    pub preset: String,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub raw: Option<RawAlgebra>,
}

/// Structure constants `[a, b, c, f_ab^c]` (0-based) and the invariant form.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawAlgebra {
    pub labels: Vec<String>,
    pub structure: Vec<(usize, usize, usize, Number)>,
    pub form: Vec<Vec<Number>>,
    pub dual_coxeter: Number,
    pub highest_root_norm_sq: Number,
}

/// An element: `"principal"`, a diagonal, matrix entries `[i, j, c]` (1-based)
/// or raw coordinates.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum ElemSpec {
    Named(String),
    Diagonal(Vec<Number>),
    Entries { entries: Vec<(usize, usize, Number)> },
    Coords { coords: Vec<Number> },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomorphismConfig {
    /// `trivial`, `inner`, `secondary_diagonal`, `composed` or `raw`.
    #[serde(default = "default_kind")]
    pub kind: String,
    #[serde(default)]
    pub theta: Option<ElemSpec>,
    #[serde(default)]
    pub order: Option<u32>,
    /// Columns are the images of the basis elements.
    #[serde(default)]
    pub matrix: Option<Vec<Vec<Number>>>,
}

fn default_kind() -> String {
    "trivial".into()
}

impl Default for AutomorphismConfig {
    fn default() -> Self {
        AutomorphismConfig { kind: default_kind(), theta: None, order: None, matrix: None }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradingConfig {
    pub h: ElemSpec,
    #[serde(default)]
    pub minus_basis: Option<Vec<ElemSpec>>,
    #[serde(default)]
    pub zero_basis: Option<Vec<ElemSpec>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerificationConfig {
    #[serde(default = "default_modes")]
    pub modes: (i64, i64),
    #[serde(default = "default_cutoff")]
    pub cutoff: i64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Levels at which the module checks run; defaults to the main level.
    #[serde(default)]
    pub levels: Option<Vec<Number>>,
    #[serde(default = "default_split")]
    pub split: String,
    #[serde(default = "default_checks")]
    pub checks: Vec<String>,
    #[serde(default = "default_max_failures")]
    pub max_failures: usize,
}

fn default_modes() -> (i64, i64) {
    (-2, 2)
}
fn default_cutoff() -> i64 {
    4
}
fn default_samples() -> usize {
    3
}
fn default_split() -> String {
    "standard".into()
}
fn default_max_failures() -> usize {
    10
}

pub const ALL_CHECKS: [&str; 8] =
    ["lemmas", "paths", "equivariance", "q_central", "mode_algebra", "sugawara", "borcherds", "twisted"];

fn default_checks() -> Vec<String> {
    ALL_CHECKS.iter().map(|s| s.to_string()).collect()
}

impl Default for VerificationConfig {
    fn default() -> Self {
        VerificationConfig {
            modes: default_modes(),
            cutoff: default_cutoff(),
            samples: default_samples(),
            levels: None,
            split: default_split(),
            checks: default_checks(),
            max_failures: default_max_failures(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str, origin: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| {
            let msg = e.message().to_string();
            let loc = match e.span() {
                Some(span) => {
                    let line = text[..span.start].matches('\n').count() + 1;
                    format!("{origin}:{line}")
                }
                None => origin.to_string(),
            };
            WakiError::config(loc, msg)
        })?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| WakiError::config(path.display().to_string(), e.to_string()))?;
        Self::from_toml(&text, &path.display().to_string())
    }

    fn check(&self) -> Result<()> {
        let v = &self.verification;
        if v.modes.0 > v.modes.1 {
            return Err(WakiError::config("verification.modes", "empty mode range"));
        }
        if v.cutoff < 0 {
            return Err(WakiError::config("verification.cutoff", "cutoff must be non-negative"));
        }
        for c in &v.checks {
            if !ALL_CHECKS.contains(&c.as_str()) {
                return Err(WakiError::config("verification.checks", format!("unknown check '{c}'")));
            }
        }
        self.split()?;
        self.level.to_q("level")?;
        Ok(())
    }

    pub fn display_name(&self) -> String {
        self.name.clone().unwrap_or_else(|| "run".into())
    }

    pub fn split(&self) -> Result<SplitConvention> {
        parse_split(&self.verification.split).map_err(|m| WakiError::config("verification.split", m))
    }

    pub fn algebra(&self) -> Result<LieAlgebraData> {
        let a = &self.algebra;
        let alg = match a.preset.as_str() {
            "sl" => {
                let n = a.n.ok_or_else(|| WakiError::config("algebra.n", "missing rank for preset sl"))?;
                LieAlgebraData::sl(n).map_err(|e| WakiError::config("algebra.n", e.to_string()))?
            }
            "raw" => {
                let raw = a.raw.as_ref().ok_or_else(|| WakiError::config("algebra.raw", "missing raw data"))?;
                raw_algebra(raw)?
            }
            other => return Err(WakiError::config("algebra.preset", format!("unknown preset '{other}'"))),
        };
        alg.validate().map_err(|e| WakiError::config("algebra", e.to_string()))?;
        Ok(alg)
    }

    pub fn grading_element(&self, alg: &LieAlgebraData) -> Result<Elem> {
        elem(alg, &self.grading.h, "grading.h")
    }

    pub fn basis(&self, alg: &LieAlgebraData, which: &str) -> Result<Option<Vec<Elem>>> {
        let list = if which == "minus" { &self.grading.minus_basis } else { &self.grading.zero_basis };
        list.as_ref()
            .map(|v| {
                v.iter()
                    .enumerate()
                    .map(|(i, e)| elem(alg, e, &format!("grading.{which}_basis[{i}]")))
                    .collect()
            })
            .transpose()
    }

    pub fn automorphism(&self, alg: &LieAlgebraData) -> Result<AutomorphismData> {
        let a = &self.automorphism;
        let order = || a.order.ok_or_else(|| WakiError::config("automorphism.order", "missing order"));
        let theta = || {
            a.theta
                .as_ref()
                .ok_or_else(|| WakiError::config("automorphism.theta", "missing theta"))
                .and_then(|t| elem(alg, t, "automorphism.theta"))
        };
        let wrap = |e: WakiError| match e {
            WakiError::Config { .. } => e,
            other => WakiError::config("automorphism", other.to_string()),
        };
        match a.kind.as_str() {
            "trivial" => Ok(AutomorphismData::identity(alg.dim())),
            "inner" => AutomorphismData::inner(alg, &theta()?, order()?).map_err(wrap),
            "secondary_diagonal" => AutomorphismData::secondary_diagonal(alg).map_err(wrap),
            "composed" => {
                let nu = AutomorphismData::secondary_diagonal(alg).map_err(wrap)?;
                AutomorphismData::compose_outer(alg, &nu, &theta()?, order()?).map_err(wrap)
            }
            "raw" => {
                let m = a.matrix.as_ref().ok_or_else(|| WakiError::config("automorphism.matrix", "missing matrix"))?;
                let mat = number_matrix(m, "automorphism.matrix")?;
                if mat.rows != alg.dim() || mat.cols != alg.dim() {
                    return Err(WakiError::config("automorphism.matrix", "wrong size"));
                }
                AutomorphismData::from_matrix(alg, mat).map_err(wrap)
            }
            other => Err(WakiError::config("automorphism.kind", format!("unknown kind '{other}'"))),
        }
    }

    /// Levels for the module checks.
    pub fn check_levels(&self) -> Result<Vec<Q>> {
        match &self.verification.levels {
            Some(v) => v
                .iter()
                .enumerate()
                .map(|(i, x)| x.to_q(&format!("verification.levels[{i}]")))
                .collect(),
            None => Ok(vec![self.level.to_q("level")?]),
        }
    }
}

pub fn parse_split(s: &str) -> std::result::Result<SplitConvention, String> {
    match s {
        "standard" => Ok(SplitConvention::Standard),
        "shifted" => Ok(SplitConvention::Shifted),
        other => Err(format!("unknown split convention '{other}' (standard | shifted)")),
    }
}

fn number_matrix(rows: &[Vec<Number>], path: &str) -> Result<Mat> {
    let mut out = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let row = r
            .iter()
            .enumerate()
            .map(|(j, x)| x.to_q(&format!("{path}[{i}][{j}]")).map(CycNum::from_q))
            .collect::<Result<Vec<_>>>()?;
        out.push(row);
    }
    if out.iter().any(|r| r.len() != out[0].len()) {
        return Err(WakiError::config(path, "ragged matrix"));
    }
    Ok(Mat::from_rows(out))
}

fn raw_algebra(raw: &RawAlgebra) -> Result<LieAlgebraData> {
    let dim = raw.labels.len();
    let mut structure = vec![vec![Vec::new(); dim]; dim];
    for (i, (a, b, c, f)) in raw.structure.iter().enumerate() {
        if *a >= dim || *b >= dim || *c >= dim {
            return Err(WakiError::config(format!("algebra.raw.structure[{i}]"), "index out of range"));
        }
        let f = CycNum::from_q(f.to_q(&format!("algebra.raw.structure[{i}]"))?);
        structure[*a][*b].push((*c, f));
    }
    let form = number_matrix(&raw.form, "algebra.raw.form")?;
    if form.rows != dim || form.cols != dim {
        return Err(WakiError::config("algebra.raw.form", "wrong size"));
    }
    Ok(LieAlgebraData {
        name: "raw".into(),
        labels: raw.labels.clone(),
        structure,
        form,
        dual_coxeter: raw.dual_coxeter.to_q("algebra.raw.dual_coxeter")?,
        highest_root_norm_sq: raw.highest_root_norm_sq.to_q("algebra.raw.highest_root_norm_sq")?,
        matrix_rep: None,
    })
}

fn elem(alg: &LieAlgebraData, spec: &ElemSpec, path: &str) -> Result<Elem> {
    let wrap = |e: WakiError| WakiError::config(path, e.to_string());
    match spec {
        ElemSpec::Named(s) if s == "principal" => alg.principal_element().map_err(wrap),
        ElemSpec::Named(s) => Err(WakiError::config(path, format!("unknown element '{s}'"))),
        ElemSpec::Diagonal(d) => {
            let qs = d.iter().map(|x| x.to_q(path)).collect::<Result<Vec<_>>>()?;
            alg.from_diagonal(&qs).map_err(wrap)
        }
        ElemSpec::Entries { entries } => {
            let es = entries
                .iter()
                .map(|(i, j, c)| Ok((*i, *j, c.to_q(path)?)))
                .collect::<Result<Vec<_>>>()?;
            alg.from_entries(&es).map_err(wrap)
        }
        ElemSpec::Coords { coords } => {
            if coords.len() != alg.dim() {
                return Err(WakiError::config(path, format!("expected {} coordinates", alg.dim())));
            }
            coords.iter().map(|x| x.to_q(path).map(CycNum::from_q)).collect()
        }
    }
}
