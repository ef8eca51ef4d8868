//! JSON run configurations, their validation into concrete objects, and the
//! serialisable reports built from them.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codes::{self, Code, CodeError, Provenance, WeightDistribution};
use crate::gf::{FieldError, FieldTower};
use crate::quot::{QuotError, QuotientRing};
use crate::skew::SkewPoly;
use crate::srmat::{Isometry, MatSpace, Matrix};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config: {0}")]
    Invalid(String),
    #[error("config: malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Quot(#[from] QuotError),
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// Elements are written as `F_p`-coordinate tuples: `m·e` digits over the
/// power basis of `F_{q^m}`, or `e` digits for elements of `F_q`.
pub type Coords = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub e: u32,
    pub m: u32,
    pub theta_exponent: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus_q: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus_qm: Option<Vec<u32>>,
}

impl FieldSpec {
    pub fn build(&self) -> Result<Arc<FieldTower>, ConfigError> {
        Ok(Arc::new(FieldTower::with_moduli(
            self.p,
            self.e,
            self.m,
            self.theta_exponent,
            self.modulus_q.clone(),
            self.modulus_qm.clone(),
        )?))
    }

    /// The spec with the moduli actually used filled in.
    pub fn canonical(t: &FieldTower) -> Self {
        FieldSpec {
            p: t.p(),
            e: t.e(),
            m: t.m(),
            theta_exponent: t.theta_exponent(),
            modulus_q: Some(t.modulus_q().to_vec()),
            modulus_qm: Some(t.modulus_qm().to_vec()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingSpec {
    pub lambdas: Vec<Coords>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphas: Option<Vec<Coords>>,
}

impl RingSpec {
    pub fn build(&self, t: &Arc<FieldTower>) -> Result<Arc<QuotientRing>, ConfigError> {
        let lambdas = self.lambdas.iter().map(|c| t.parse_fq_or_top(c)).collect::<Result<Vec<_>, _>>()?;
        let alphas = match &self.alphas {
            None => None,
            Some(a) => Some(a.iter().map(|c| t.from_coords(c)).collect::<Result<Vec<_>, _>>()?),
        };
        Ok(Arc::new(QuotientRing::new(t.clone(), lambdas, alphas)?))
    }

    pub fn canonical(r: &QuotientRing) -> Self {
        let t = r.tower();
        RingSpec {
            lambdas: r.lambdas().iter().map(|&l| t.fq_coords(l).expect("lambdas lie in F_q")).collect(),
            alphas: Some(r.alphas().iter().map(|&a| t.coords(a)).collect()),
        }
    }
}

/// One matrix: rows of entries, each an `F_q` element.
pub type MatrixSpec = Vec<Vec<Coords>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum CodeSpec {
    Lrs {
        k: usize,
    },
    /// `τ = θ^tau_h`; `eta` defaults to the least valid element.
    Atlrs {
        k: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        eta: Option<Coords>,
        #[serde(default = "one")]
        tau_h: u32,
    },
    Tz {
        k: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gamma: Option<Coords>,
    },
    /// `F_p`-span of quotient elements, each a list of coefficients.
    Quotient { basis: Vec<Vec<Coords>> },
    /// `F_p`-span of matrix tuples in `⊕ F_q^{m_i × n_i}`.
    Matrix { shapes: Vec<(usize, usize)>, basis: Vec<Vec<MatrixSpec>> },
}

fn one() -> u32 {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeConfig {
    #[serde(flatten)]
    pub spec: CodeSpec,
    /// Replace the code by its image under a seeded random isometry (in the
    /// matrix picture).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub isometry_seed: Option<u64>,
}

impl CodeConfig {
    pub fn new(spec: CodeSpec) -> Self {
        CodeConfig { spec, isometry_seed: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub field: FieldSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<RingSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub code: Option<CodeConfig>,
    /// Second code, for `distinguish`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub code_b: Option<CodeConfig>,
}

/// The concrete objects a config resolves to.
pub struct Built {
    pub tower: Arc<FieldTower>,
    pub ring: Option<Arc<QuotientRing>>,
}

impl RunConfig {
    pub fn from_json(s: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn build(&self) -> Result<Built, ConfigError> {
        let tower = self.field.build()?;
        let ring = self.ring.as_ref().map(|r| r.build(&tower)).transpose()?;
        Ok(Built { tower, ring })
    }

    pub fn code(&self, built: &Built) -> Result<Code, ConfigError> {
        let c = self.code.as_ref().ok_or_else(|| ConfigError::Invalid("missing \"code\"".into()))?;
        build_code(built, c)
    }

    pub fn code_b(&self, built: &Built) -> Result<Code, ConfigError> {
        let c = self.code_b.as_ref().ok_or_else(|| ConfigError::Invalid("missing \"code_b\"".into()))?;
        build_code(built, c)
    }

    /// Standard frame with `Λ = {1, −1}`, `t = 2`.
    pub fn desk(p: u32, m: u32, code: CodeSpec) -> Self {
        RunConfig {
            field: FieldSpec { p, e: 1, m, theta_exponent: 1, modulus_q: None, modulus_qm: None },
            ring: Some(RingSpec { lambdas: vec![vec![1], vec![p - 1]], alphas: None }),
            code: Some(CodeConfig::new(code)),
            code_b: None,
        }
    }
}

fn need_ring(built: &Built) -> Result<&Arc<QuotientRing>, ConfigError> {
    built.ring.as_ref().ok_or_else(|| ConfigError::Invalid("this code family needs a \"ring\"".into()))
}

fn parse_matrix(t: &FieldTower, rows: &[Vec<Coords>]) -> Result<Matrix, ConfigError> {
    let rows = rows
        .iter()
        .map(|r| r.iter().map(|c| t.fq_from_coords(c)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Matrix::from_rows(rows).map_err(|e| ConfigError::Code(e.into()))
}

pub fn build_code(built: &Built, cfg: &CodeConfig) -> Result<Code, ConfigError> {
    let t = &built.tower;
    let code = match &cfg.spec {
        CodeSpec::Lrs { k } => Code::lrs(need_ring(built)?, *k)?,
        CodeSpec::Atlrs { k, eta, tau_h } => {
            let ring = need_ring(built)?;
            let tau = t.theta_power(*tau_h as i64);
            let eta = match eta {
                Some(c) => t.from_coords(c)?,
                None => codes::default_eta(ring, *k, tau)
                    .ok_or_else(|| ConfigError::Invalid("no valid eta exists for these parameters".into()))?,
            };
            Code::atlrs(ring, *k, eta, tau)?
        }
        CodeSpec::Tz { k, gamma } => {
            let ring = need_ring(built)?;
            let gamma = match gamma {
                Some(c) => t.from_coords(c)?,
                None => codes::default_gamma(ring)
                    .ok_or_else(|| ConfigError::Invalid("no valid gamma exists for these parameters".into()))?,
            };
            Code::tz(ring, *k, gamma)?
        }
        CodeSpec::Quotient { basis } => {
            let ring = need_ring(built)?;
            let elems = basis
                .iter()
                .map(|f| {
                    let coeffs = f.iter().map(|c| t.from_coords(c)).collect::<Result<Vec<_>, _>>()?;
                    Ok(ring.element(&SkewPoly::from_coeffs(coeffs)))
                })
                .collect::<Result<Vec<_>, ConfigError>>()?;
            Code::from_quot_elements(ring, &elems, Provenance::Custom)
        }
        CodeSpec::Matrix { shapes, basis } => {
            let space = MatSpace::new(t.clone(), shapes.clone()).map_err(CodeError::from)?;
            let elems = basis
                .iter()
                .map(|x| x.iter().map(|m| parse_matrix(t, m)).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            Code::from_tuples(&space, &elems, Provenance::Custom)?
        }
    };
    match cfg.isometry_seed {
        None => Ok(code),
        Some(seed) => {
            let code = match &built.ring {
                Some(r) if code.ring().is_ok() => code.to_matrix_ambient(&crate::srmat::FqBasis::default_for(r.tower()))?,
                _ => code,
            };
            let space = code.mat_space()?.clone();
            let iso = Isometry::random(&space, &mut ChaCha8Rng::seed_from_u64(seed));
            Ok(code.apply_isometry(&iso)?)
        }
    }
}

/// Serialisable summary of a code's construction.
#[derive(Clone, Debug, Serialize)]
pub struct CodeSummary {
    pub family: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<Coords>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_h: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Coords>,
    pub ambient: &'static str,
    pub shapes: Vec<(usize, usize)>,
    pub p: u32,
    pub dim_fp: usize,
    /// `|C|` in decimal; it can exceed 64 bits.
    pub size: String,
    pub basis: Vec<Vec<u32>>,
}

impl CodeSummary {
    pub fn of(code: &Code) -> Self {
        let t = code.tower();
        let (eta, tau_h, gamma) = match code.provenance() {
            Provenance::Atlrs { eta, tau, .. } => {
                let h = (0..t.m()).find(|&h| t.theta_power(h as i64) == *tau);
                (Some(t.coords(*eta)), h, None)
            }
            Provenance::Tz { gamma, .. } => (None, None, Some(t.coords(*gamma))),
            _ => (None, None, None),
        };
        CodeSummary {
            family: code.provenance().family(),
            k: code.provenance().k(),
            eta,
            tau_h,
            gamma,
            ambient: match code.ambient() {
                codes::Ambient::Quotient(_) => "quotient",
                codes::Ambient::Matrix(_) => "matrix",
            },
            shapes: code.ambient().shapes(),
            p: code.p(),
            dim_fp: code.dim(),
            size: code.size().map_or_else(|| format!("{}^{}", code.p(), code.dim()), |n| n.to_string()),
            basis: code.basis_flat().to_vec(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightReport {
    pub counts: Vec<u64>,
    pub min_distance: Option<usize>,
    pub singleton_exponent: Option<usize>,
    pub log_q_size: Option<usize>,
    pub msrd: Option<bool>,
    /// One codeword of minimum weight, flat.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<u32>>,
}

impl WeightReport {
    pub fn new(w: &WeightDistribution, witness: Option<Vec<u32>>) -> Self {
        WeightReport {
            counts: w.counts.clone(),
            min_distance: w.min_distance,
            singleton_exponent: w.singleton_exponent,
            log_q_size: w.log_q_size,
            msrd: w.msrd,
            witness,
        }
    }
}

/// The envelope shared by every report.
#[derive(Clone, Debug, Serialize)]
pub struct Report<T: Serialize> {
    pub schema_version: u32,
    pub command: String,
    pub config: RunConfig,
    pub field: FieldSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ring: Option<RingSpec>,
    pub result: T,
}

impl<T: Serialize> Report<T> {
    pub fn new(command: &str, config: &RunConfig, built: &Built, result: T) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            config: config.clone(),
            field: FieldSpec::canonical(&built.tower),
            ring: built.ring.as_deref().map(RingSpec::canonical),
            result,
        }
    }
}

/// Parses a bit-string such as `"10"` into an `s` pattern.
pub fn parse_bits(s: &str) -> Result<Vec<bool>, ConfigError> {
    s.chars()
        .map(|c| match c {
            '1' => Ok(true),
            '0' => Ok(false),
            _ => Err(ConfigError::Invalid(format!("bit-string {s:?} may only contain 0 and 1"))),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trips() {
        let cfg = RunConfig::desk(5, 3, CodeSpec::Atlrs { k: 3, eta: None, tau_h: 1 });
        let s = serde_json::to_string(&cfg).unwrap();
        assert_eq!(RunConfig::from_json(&s).unwrap(), cfg);
        let built = cfg.build().unwrap();
        assert_eq!(cfg.code(&built).unwrap().dim(), 9);
    }

    #[test]
    fn family_tag_parses() {
        let s = r#"{"field":{"p":5,"e":1,"m":2,"theta_exponent":1},
                    "ring":{"lambdas":[[1],[4]]},
                    "code":{"family":"tz","k":2}}"#;
        let cfg = RunConfig::from_json(s).unwrap();
        let built = cfg.build().unwrap();
        assert_eq!(cfg.code(&built).unwrap().dim(), 4);
    }

    #[test]
    fn isometric_copy_lands_in_matrix_ambient() {
        let mut cfg = RunConfig::desk(5, 2, CodeSpec::Lrs { k: 2 });
        cfg.code.as_mut().unwrap().isometry_seed = Some(3);
        let built = cfg.build().unwrap();
        let c = cfg.code(&built).unwrap();
        assert!(c.mat_space().is_ok());
        assert_eq!(c.dim(), 4);
    }

    #[test]
    fn bits() {
        assert_eq!(parse_bits("10").unwrap(), vec![true, false]);
        assert!(parse_bits("12").is_err());
    }
}
