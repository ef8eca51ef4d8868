//! Named verification suites: each checks computed invariants against the
//! values predicted for the code families, and reports hypotheses that do
//! not hold as skipped rather than failed.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::codes::{self, Code, CodeError, Provenance};
use crate::config::{Built, CodeSpec, ConfigError, RingSpec, RunConfig};
use crate::gf::{Automorphism, FieldTower};
use crate::invariants::{self, InvariantError, Subring, Verdict};
use crate::quot::QuotientRing;
use crate::srmat::{self, Isometry, MatSpace};

pub const SUITES: &[&str] = &[
    "idealisers-atlrs",
    "centraliser-lrs",
    "tz-idealisers",
    "duality-lrs",
    "duality-ideal",
    "inequivalence",
    "nondegeneracy-msrd",
    "weights-msrd",
];

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("suites: unknown suite {0:?}")]
    Unknown(String),
    #[error("suites: {0}")]
    Config(String),
    #[error(transparent)]
    Build(#[from] ConfigError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub expected: Value,
    pub actual: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl Check {
    fn compare(name: impl Into<String>, expected: impl Serialize, actual: impl Serialize) -> Self {
        let (expected, actual) = (json!(expected), json!(actual));
        let status = if expected == actual { Status::Pass } else { Status::Fail };
        Check { name: name.into(), status, expected, actual, reason: None }
    }

    fn skip(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Check { name: name.into(), status: Status::Skip, expected: Value::Null, actual: Value::Null, reason: Some(reason.into()) }
    }

    fn with_reason(mut self, reason: impl Into<String>) -> Self {
        self.reason = Some(reason.into());
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub status: Status,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    fn new(suite: &str, checks: Vec<Check>) -> Self {
        let status = if checks.iter().any(|c| c.status == Status::Fail) {
            Status::Fail
        } else if checks.iter().any(|c| c.status == Status::Pass) {
            Status::Pass
        } else {
            Status::Skip
        };
        SuiteReport { suite: suite.to_string(), status, checks }
    }
}

/// Options shared by all suites.
#[derive(Clone, Copy, Debug)]
pub struct SuiteOptions {
    pub seed: u64,
    pub cap: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { seed: DEFAULT_SEED, cap: codes::ENUMERATION_CAP }
    }
}

/// The frame a suite runs at when no configuration is given.
pub fn default_config(suite: &str) -> Option<RunConfig> {
    Some(match suite {
        "idealisers-atlrs" => RunConfig::desk(5, 3, CodeSpec::Atlrs { k: 3, eta: None, tau_h: 1 }),
        "centraliser-lrs" | "duality-lrs" => RunConfig::desk(5, 3, CodeSpec::Lrs { k: 3 }),
        "tz-idealisers" => RunConfig::desk(5, 2, CodeSpec::Tz { k: 2, gamma: None }),
        "duality-ideal" => {
            let mut c = RunConfig::desk(3, 2, CodeSpec::Lrs { k: 2 });
            c.code = None;
            c.ring = None;
            c
        }
        "inequivalence" => {
            let mut c = RunConfig::desk(7, 2, CodeSpec::Atlrs { k: 3, eta: None, tau_h: 1 });
            c.ring = Some(RingSpec { lambdas: vec![vec![1], vec![2], vec![4]], alphas: None });
            c
        }
        "nondegeneracy-msrd" | "weights-msrd" => return None,
        _ => return None,
    })
}

/// The three standard instances of the families.
pub fn desk_configs() -> Vec<RunConfig> {
    vec![
        RunConfig::desk(5, 3, CodeSpec::Lrs { k: 3 }),
        RunConfig::desk(5, 3, CodeSpec::Atlrs { k: 3, eta: None, tau_h: 1 }),
        RunConfig::desk(5, 2, CodeSpec::Tz { k: 2, gamma: None }),
    ]
}

pub fn run_suite(name: &str, config: Option<&RunConfig>, opts: SuiteOptions) -> Result<SuiteReport, SuiteError> {
    if !SUITES.contains(&name) {
        return Err(SuiteError::Unknown(name.to_string()));
    }
    let owned = default_config(name);
    let cfg = config.or(owned.as_ref());
    let checks = match name {
        "idealisers-atlrs" => idealisers_atlrs(need(cfg)?)?,
        "centraliser-lrs" => centraliser_lrs(need(cfg)?, opts)?,
        "tz-idealisers" => tz_idealisers(need(cfg)?)?,
        "duality-lrs" => duality(need(cfg)?)?,
        "duality-ideal" => duality_ideal(need(cfg)?, opts)?,
        "inequivalence" => inequivalence(need(cfg)?, opts)?,
        "nondegeneracy-msrd" => for_each_code(config, |c| nondegeneracy_msrd(c, opts))?,
        "weights-msrd" => for_each_code(config, |c| weights_msrd(c, opts))?,
        _ => unreachable!(),
    };
    Ok(SuiteReport::new(name, checks))
}

fn need(cfg: Option<&RunConfig>) -> Result<&RunConfig, SuiteError> {
    cfg.ok_or_else(|| SuiteError::Config("this suite needs a configuration".into()))
}

fn for_each_code(
    config: Option<&RunConfig>,
    f: impl Fn(&CodeUnder) -> Result<Vec<Check>, SuiteError>,
) -> Result<Vec<Check>, SuiteError> {
    let cfgs = match config {
        Some(c) => vec![c.clone()],
        None => desk_configs(),
    };
    let mut out = Vec::new();
    for cfg in &cfgs {
        let cu = CodeUnder::new(cfg)?;
        for mut c in f(&cu)? {
            c.name = format!("{}: {}", cu.label, c.name);
            out.push(c);
        }
    }
    Ok(out)
}

/// A configured code with the objects around it.
struct CodeUnder {
    built: Built,
    code: Code,
    label: String,
}

impl CodeUnder {
    fn new(cfg: &RunConfig) -> Result<Self, SuiteError> {
        let built = cfg.build()?;
        let code = cfg.code(&built)?;
        let t = &built.tower;
        let label = format!(
            "{} k={} q={} m={} t={}",
            code.provenance().family(),
            code.provenance().k().map_or("-".into(), |k| k.to_string()),
            t.q(),
            t.m(),
            code.ambient().shapes().len()
        );
        Ok(CodeUnder { built, code, label })
    }

    fn ring(&self) -> Result<&Arc<QuotientRing>, SuiteError> {
        self.built.ring.as_ref().ok_or_else(|| SuiteError::Config("this suite needs a \"ring\"".into()))
    }

    fn tower(&self) -> &Arc<FieldTower> {
        &self.built.tower
    }
}

fn fix_size(t: &FieldTower, tau: Automorphism) -> u64 {
    t.subfield_size(t.fixed_field(tau))
}

fn size(s: &Subring) -> u64 {
    s.size().unwrap_or(u64::MAX)
}

fn idealisers_atlrs(cfg: &RunConfig) -> Result<Vec<Check>, SuiteError> {
    let cu = CodeUnder::new(cfg)?;
    let ring = cu.ring()?;
    let t = cu.tower();
    let (k, eta, tau) = match *cu.code.provenance() {
        Provenance::Atlrs { k, eta, tau } => (k, eta, tau),
        Provenance::Lrs { k } => (k, crate::gf::Fe::ZERO, Automorphism { h: 0 }),
        _ => return Err(SuiteError::Config("idealisers-atlrs needs an lrs or atlrs code".into())),
    };
    let tm = ring.tm();
    let small = 3 <= k && 2 * k <= tm;
    let large = 2 * k >= tm + 2 && k + 3 <= tm;
    if !small && !(large && ring.lambda_is_cyclic_group()) {
        let why = if large {
            "tm/2+1 ≤ k ≤ tm−3 needs Λ to be a cyclic subgroup of F_q*".to_string()
        } else {
            format!("hypothesis 3 ≤ k ≤ tm/2 violated (k = {k}, tm = {tm})")
        };
        return Ok(vec![Check::skip("left_idealiser", why.clone()), Check::skip("right_idealiser", why)]);
    }
    let q_m = t.size() as u64;
    let theta_k = t.theta_power(k as i64);
    let (pred_left, pred_right) = if eta.is_zero() {
        (q_m, q_m)
    } else {
        (fix_size(t, tau), fix_size(t, t.compose(t.inverse_automorphism(tau), theta_k)))
    };
    let left = invariants::left_idealiser(&cu.code)?;
    let right = invariants::right_idealiser(&cu.code)?;
    let (fl, fr) = (left.fingerprint()?, right.fingerprint()?);
    Ok(vec![
        Check::compare("left_idealiser.size", pred_left, size(&left)),
        Check::compare("right_idealiser.size", pred_right, size(&right)),
        Check::compare("left_idealiser.is_field", true, fl.is_field),
        Check::compare("right_idealiser.is_field", true, fr.is_field),
    ])
}

fn centre_checks(code: &Code, pred_center: u64, q: u64, tcount: usize) -> Result<Vec<Check>, SuiteError> {
    let cent = invariants::centraliser(code)?;
    let fc = cent.fingerprint()?;
    let left = invariants::left_idealiser(code)?;
    let right = invariants::right_idealiser(code)?;
    let z = left.intersect(&cent);
    let zr = right.intersect(&cent);
    Ok(vec![
        Check::compare("centraliser.size", q.pow(tcount as u32), size(&cent)),
        Check::compare("centraliser.residue_fields", vec![q; tcount], fc.residue_fields.clone()),
        Check::compare("centraliser.commutative", true, fc.commutative),
        Check::compare("center.size", pred_center, size(&z)),
        Check::compare("center.equals_right_idealiser_meet_centraliser", true, z.space() == zr.space()),
    ])
}

fn centraliser_lrs(cfg: &RunConfig, opts: SuiteOptions) -> Result<Vec<Check>, SuiteError> {
    let cu = CodeUnder::new(cfg)?;
    let ring = cu.ring()?;
    let t = cu.tower();
    let (k, tau) = match *cu.code.provenance() {
        Provenance::Atlrs { k, eta, tau } if !eta.is_zero() => (k, tau),
        Provenance::Atlrs { k, .. } | Provenance::Lrs { k } => (k, Automorphism { h: 0 }),
        _ => return Err(SuiteError::Config("centraliser-lrs needs an lrs or atlrs code".into())),
    };
    let tm = ring.tm();
    if k < 2 || k >= tm {
        return Ok(vec![Check::skip("centraliser", format!("hypothesis 2 ≤ k ≤ tm−1 violated (k = {k})"))]);
    }
    if 2 * k > tm && !ring.lambda_is_cyclic_group() {
        return Ok(vec![Check::skip("centraliser", "k > tm/2 needs Λ to be a cyclic subgroup of F_q*")]);
    }
    let normal = cu.code.normalize_to_identity(opts.cap)?;
    let pred_center = t.subfield_size(codes::fq_fixed_part(t, tau));
    let mut checks = vec![Check::compare("normalized_contains_identity", true, normal.contains_identity())];
    checks.extend(centre_checks(&normal, pred_center, t.q() as u64, ring.t())?);
    Ok(checks)
}

fn tz_idealisers(cfg: &RunConfig) -> Result<Vec<Check>, SuiteError> {
    let cu = CodeUnder::new(cfg)?;
    let ring = cu.ring()?;
    let t = cu.tower();
    let Provenance::Tz { k, .. } = *cu.code.provenance() else {
        return Err(SuiteError::Config("tz-idealisers needs a tz code".into()));
    };
    let tm = ring.tm();
    let ell = ring.m() / 2;
    let q = t.q() as u64;
    let mut checks = Vec::new();
    let small = 2 <= k && 2 * k <= tm;
    let large = 2 * k >= tm + 2 && k + 2 <= tm;
    if small || (large && ring.lambda_is_cyclic_group()) {
        let left = invariants::left_idealiser(&cu.code)?;
        let right = invariants::right_idealiser(&cu.code)?;
        let q_ell = q.pow(ell as u32);
        checks.push(Check::compare("left_idealiser.size", q_ell, size(&left)));
        checks.push(Check::compare("right_idealiser.size", q_ell, size(&right)));
        checks.push(Check::compare("left_idealiser.is_field", true, left.fingerprint()?.is_field));
        checks.push(Check::compare("right_idealiser.is_field", true, right.fingerprint()?.is_field));
    } else {
        checks.push(Check::skip(
            "idealisers",
            format!("hypothesis 2 ≤ k ≤ tm/2 (or tm/2+1 ≤ k ≤ tm−2 with cyclic Λ) violated (k = {k}, tm = {tm})"),
        ));
    }
    if ell >= 2 && 2 <= k && k + 2 <= tm {
        checks.extend(centre_checks(&cu.code, q, q, ring.t())?);
    } else {
        checks.push(Check::skip(
            "centraliser",
            format!("hypothesis ℓ ≥ 2 and 2 ≤ k ≤ tm−2 violated (ℓ = {ell}, k = {k})"),
        ));
    }
    Ok(checks)
}

fn duality(cfg: &RunConfig) -> Result<Vec<Check>, SuiteError> {
    let cu = CodeUnder::new(cfg)?;
    let ring = cu.ring()?;
    let t = cu.tower();
    if !ring.lambda_is_cyclic_group() {
        return Ok(vec![Check::skip("dual", "Λ must be a cyclic subgroup of F_q*")]);
    }
    let tm = ring.tm();
    let dual = cu.code.dual();
    let xk = |k: usize| ring.monomial(crate::gf::Fe::ONE, k);
    let mut checks = Vec::new();
    match *cu.code.provenance() {
        Provenance::Lrs { k } => {
            let other = Code::lrs(ring, tm - k)?;
            checks.push(Check::compare("dual = C_{tm-k}·x^k", true, dual == other.scale_right(&xk(k))?));
            checks.push(Check::compare("dual = x^k·C_{tm-k}", true, dual == other.scale_left(&xk(k))?));
        }
        Provenance::Atlrs { k, eta, tau } => {
            let ti = t.inverse_automorphism(tau);
            let e2 = t.apply(ti, eta);
            let signed = Code::atlrs_unchecked(ring, tm - k, t.neg(e2), ti).scale_right(&xk(k))?;
            checks.push(Check::compare("dual = C_{tm-k}(-τ^{-1}(η), τ^{-1})·x^k", true, dual == signed));
            let literal = Code::atlrs_unchecked(ring, tm - k, e2, ti).scale_right(&xk(k))?;
            let lit = Check::compare("dual = C_{tm-k}(τ^{-1}(η), τ^{-1})·x^k", true, dual == literal);
            checks.push(if t.p() == 2 {
                lit
            } else {
                lit.with_reason("without the sign this form only holds in characteristic 2")
            });
        }
        Provenance::Tz { k, gamma } => {
            let other = Code::tz_unchecked(ring, tm - k, t.neg(gamma)).scale_right(&xk(k))?;
            let half = crate::gf::Subfield { degree: t.degree() / 2 };
            let tr_zero = t.trace(gamma, half).map_err(CodeError::from)?.is_zero();
            let c = Check::compare("dual = D_{tm-k}(-γ)·x^k", true, dual == other);
            checks.push(if tr_zero { c } else { c.with_reason("γ has nonzero trace to F_{q^{m/2}}") });
        }
        _ => return Err(SuiteError::Config("duality-lrs needs an lrs, atlrs or tz code".into())),
    }
    Ok(checks)
}

/// A random `F_p`-subspace of the given matrix ambient.
pub fn random_code<R: Rng + ?Sized>(space: &MatSpace, rng: &mut R) -> Code {
    let t = space.tower();
    let n = space.flat_dim();
    let dim = rng.random_range(1..n);
    let rows: Vec<Vec<u32>> = (0..dim).map(|_| (0..n).map(|_| rng.random_range(0..t.p())).collect()).collect();
    Code::from_flat(
        codes::Ambient::Matrix(space.clone()),
        rows,
        Provenance::Derived("random".into()),
    )
    .expect("vectors have the ambient length")
}

/// The image of a subring of square blocks under the `v`-adjoint.
fn v_transpose(sub: &Subring, v: &[bool]) -> Subring {
    let codes::Ambient::Matrix(s) = sub.ambient() else { unreachable!("idealisers of matrix codes") };
    let shapes = s.shapes().iter().zip(v).map(|(&(a, b), &vi)| if vi { (b, a) } else { (a, b) }).collect();
    let target = MatSpace::new(s.tower().clone(), shapes).expect("same number of blocks");
    let s2 = s.clone();
    let t2 = target.clone();
    sub.map(codes::Ambient::Matrix(target), move |x| t2.flatten(&srmat::v_adjoint(&s2.unflatten(x), v)))
}

fn duality_ideal(cfg: &RunConfig, opts: SuiteOptions) -> Result<Vec<Check>, SuiteError> {
    const CODES: usize = 60;
    let tower = cfg.field.build()?;
    let space = MatSpace::square(tower, cfg.field.m as usize, 2);
    let tcount = space.t();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let patterns = invariants::s_patterns(tcount);
    let (mut adj_ok, mut adj_total, mut dual_ok, mut dual_total) = (0usize, 0usize, 0usize, 0usize);
    let mut first_failure: Option<Value> = None;
    for idx in 0..CODES {
        let code = random_code(&space, &mut rng);
        let dual = code.dual();
        for s in &patterns {
            let is = invariants::s_idealiser(&code, s)?;
            let lhs = invariants::s_idealiser(&dual, s)?;
            let ones = vec![true; tcount];
            dual_total += 1;
            if lhs.space() == v_transpose(&is, &ones).space() {
                dual_ok += 1;
            } else if first_failure.is_none() {
                first_failure = Some(json!({"code": idx, "s": s, "identity": "dual"}));
            }
            for v in &patterns {
                let cv = code.v_adjoint(v)?;
                let s_minus_v: Vec<bool> = s.iter().zip(v).map(|(a, b)| a ^ b).collect();
                let lhs = invariants::s_idealiser(&cv, s)?;
                let rhs = v_transpose(&invariants::s_idealiser(&code, &s_minus_v)?, v);
                adj_total += 1;
                if lhs.space() == rhs.space() {
                    adj_ok += 1;
                } else if first_failure.is_none() {
                    first_failure = Some(json!({"code": idx, "s": s, "v": v, "identity": "v-adjoint"}));
                }
            }
        }
    }
    let mut a = Check::compare("I_s(C^v) = I_{s-v}(C)^v", adj_total, adj_ok);
    let mut d = Check::compare("I_s(C^⊥) = I_s(C)^1", dual_total, dual_ok);
    if let Some(f) = first_failure {
        let msg = format!("first failure: {f}");
        a = a.with_reason(msg.clone());
        d = d.with_reason(msg);
    }
    Ok(vec![a, d, Check::compare("codes_tested", CODES, CODES)])
}

fn inequivalence(cfg: &RunConfig, opts: SuiteOptions) -> Result<Vec<Check>, SuiteError> {
    let built = cfg.build()?;
    let ring = built.ring.clone().ok_or_else(|| SuiteError::Config("inequivalence needs a \"ring\"".into()))?;
    let t = built.tower.clone();
    let (k, tau_h, eta) = match cfg.code.as_ref().map(|c| &c.spec) {
        Some(CodeSpec::Atlrs { k, tau_h, eta }) => (*k, *tau_h, eta.clone()),
        Some(CodeSpec::Lrs { k }) | Some(CodeSpec::Tz { k, .. }) => (*k, 1, None),
        _ => return Err(SuiteError::Config("inequivalence needs a family code spec for k".into())),
    };
    let tm = ring.tm();
    let m = ring.m();
    let small = 3 <= k && 2 * k <= tm;
    let large = 2 * k >= tm + 2 && k + 3 <= tm && ring.lambda_is_cyclic_group();
    if !small && !large {
        return Ok(vec![Check::skip(
            "inequivalence",
            format!("hypothesis 3 ≤ k ≤ tm/2 (or tm/2+1 ≤ k ≤ tm−3 with cyclic Λ) violated (k = {k}, tm = {tm})"),
        )]);
    }
    let tau = t.theta_power(tau_h as i64);
    let lrs = Code::lrs(&ring, k)?;
    let atlrs = crate::config::build_code(
        &built,
        &crate::config::CodeConfig::new(CodeSpec::Atlrs { k, eta, tau_h }),
    )
    .ok();
    let tz = match codes::default_gamma(&ring) {
        Some(g) if m % 2 == 0 => Code::tz(&ring, k, g).ok(),
        _ => None,
    };
    let mut checks = Vec::new();
    let pair = |name: &str, a: &Code, b: &Code, checks: &mut Vec<Check>| -> Result<(), SuiteError> {
        let cert = invariants::distinguish(a, b, opts.cap)?;
        let witness = cert.witness.as_ref().map(|w| w.invariant.clone());
        let mut c = Check::compare(name, Verdict::Inequivalent, &cert.verdict);
        if let Some(w) = witness {
            c = c.with_reason(format!("witness: {w}"));
        }
        checks.push(c);
        Ok(())
    };
    match &atlrs {
        Some(a) if tau.h % t.degree() != 0 || k % m != 0 => pair("LRS vs ATLRS", &lrs, a, &mut checks)?,
        Some(_) => checks.push(Check::skip("LRS vs ATLRS", "needs τ ≠ id or m ∤ k")),
        None => checks.push(Check::skip("LRS vs ATLRS", "no valid η at this frame")),
    }
    match &tz {
        Some(z) => pair("LRS vs TZ", &lrs, z, &mut checks)?,
        None => checks.push(Check::skip("LRS vs TZ", "TZ-type codes need even m, odd q, Λ of squares and a valid γ")),
    }
    match (&atlrs, &tz) {
        (Some(a), Some(z)) => {
            let half = t.theta_power((m / 2) as i64);
            if tau != half || m % k != 0 {
                pair("ATLRS vs TZ", a, z, &mut checks)?;
            } else {
                checks.push(Check::skip("ATLRS vs TZ", "needs τ ≠ θ^{m/2} or k ∤ m"));
            }
        }
        _ => checks.push(Check::skip("ATLRS vs TZ", "one of the codes does not exist at this frame")),
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let basis = srmat::FqBasis::default_for(&t);
    for (name, code) in [("LRS", Some(&lrs)), ("ATLRS", atlrs.as_ref()), ("TZ", tz.as_ref())] {
        let Some(code) = code else { continue };
        let mc = code.to_matrix_ambient(&basis)?;
        let iso = Isometry::random(mc.mat_space()?, &mut rng);
        let copy = mc.apply_isometry(&iso)?;
        let cert = invariants::distinguish(code, &copy, opts.cap)?;
        checks.push(Check::compare(format!("{name} vs isometric copy"), Verdict::Undetermined, &cert.verdict));
    }
    Ok(checks)
}

fn msrd_common(cu: &CodeUnder, opts: SuiteOptions) -> Result<(Vec<Check>, Option<codes::WeightDistribution>), SuiteError> {
    let shapes = cu.code.ambient().shapes();
    let (m, n) = shapes[0];
    let q = cu.tower().q() as usize;
    if shapes.iter().any(|&s| s != (m, n)) || shapes.len() > q - 1 {
        return Ok((vec![Check::skip("msrd", "needs equal blocks and t ≤ q−1")], None));
    }
    let wd = cu.code.weight_distribution(opts.cap)?;
    let mut checks = vec![Check::compare("msrd", true, wd.msrd)];
    if let Some(k) = cu.code.provenance().k() {
        let tm = cu.code.ambient().max_weight();
        checks.push(Check::compare("min_distance", Some(tm + 1 - k), wd.min_distance));
    }
    Ok((checks, Some(wd)))
}

fn nondegeneracy_msrd(cu: &CodeUnder, opts: SuiteOptions) -> Result<Vec<Check>, SuiteError> {
    let (mut checks, wd) = msrd_common(cu, opts)?;
    if wd.is_some_and(|w| w.msrd == Some(true)) && cu.code.ambient().shapes().iter().all(|&(m, n)| m == n) {
        let nd = cu.code.nondegeneracy()?;
        let mut c = Check::compare("nondegenerate", true, nd.is_ok());
        if let Err(w) = nd {
            c = c.with_reason(format!("{w:?}"));
        }
        checks.push(c);
    } else {
        checks.push(Check::skip("nondegenerate", "needs an MSRD code with square blocks"));
    }
    Ok(checks)
}

fn weights_msrd(cu: &CodeUnder, opts: SuiteOptions) -> Result<Vec<Check>, SuiteError> {
    let (mut checks, wd) = msrd_common(cu, opts)?;
    if let Some(w) = wd.filter(|w| w.msrd == Some(true)) {
        let d = w.min_distance.expect("MSRD codes are nonzero");
        let missing: Vec<usize> = (d..w.counts.len()).filter(|&j| w.counts[j] == 0).collect();
        checks.push(Check::compare("W_{d+i} > 0 for all i", Vec::<usize>::new(), missing));
        checks.push(Check::compare("full_weight_codewords > 0", true, w.counts.last().is_some_and(|&c| c > 0)));
    } else {
        checks.push(Check::skip("weights", "needs an MSRD code"));
    }
    Ok(checks)
}
