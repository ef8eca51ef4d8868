//! Acceptance criteria, one PASS/FAIL line each. Run with
//! `cargo test -p sumrank --test acceptance`.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sumrank::codes::{Code, Provenance, ENUMERATION_CAP};
use sumrank::gf::{Fe, Subfield};
use sumrank::invariants::{
    center, centraliser, left_idealiser, linearity_degree, nuclear_parameters, right_idealiser, s_idealiser,
    s_patterns, RingFingerprint,
};
use sumrank::quot::QuotientRing;
use sumrank::srmat::{FqBasis, Isometry};
use sumrank::suites::{run_suite, Status, SuiteOptions};

use common::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

const SOLVE_BUDGET: Duration = Duration::from_secs(10);
const ENUM_BUDGET: Duration = Duration::from_secs(300);
const TZ_BUDGET: Duration = Duration::from_secs(1);
const ORACLE_BUDGET: Duration = Duration::from_secs(120);
const ISOMETRIES: u64 = 20;

fn c1_lrs_nuclear() -> Outcome {
    let code = build(&desk_lrs());
    let start = Instant::now();
    let np = nuclear_parameters(&code, ENUMERATION_CAP).map_err(|e| e.to_string())?;
    let solve = start.elapsed();
    ensure!(np.sizes() == [1_953_125, 125, 125, 25, 5], "sizes {:?}", np.sizes());
    ensure!(solve < SOLVE_BUDGET, "idealiser solve took {solve:?}");
    let start = Instant::now();
    let wd = code.weight_distribution(ENUMERATION_CAP).map_err(|e| e.to_string())?;
    let enumerate = start.elapsed();
    ensure!(wd.counts.iter().sum::<u64>() == 1_953_125, "enumerated {} codewords", wd.counts.iter().sum::<u64>());
    ensure!(enumerate < ENUM_BUDGET, "enumeration took {enumerate:?}");
    Ok(format!("(5^9, 5^3, 5^3, 5^2, 5); solve {solve:.2?}, enumeration {enumerate:.2?}"))
}

fn c2_atlrs_idealisers() -> Outcome {
    let code = build(&desk_atlrs());
    let t = code.tower().clone();
    let l = left_idealiser(&code).map_err(|e| e.to_string())?.fingerprint().map_err(|e| e.to_string())?;
    let r = right_idealiser(&code).map_err(|e| e.to_string())?.fingerprint().map_err(|e| e.to_string())?;
    let (fix1, fix2) = (brute_fix_size(&t, 1), brute_fix_size(&t, 2));
    ensure!(fix1 == 5 && fix2 == 5, "fixed fields {fix1}, {fix2}");
    ensure!(l.size == Some(fix1) && l.is_field, "left {:?} field={}", l.size, l.is_field);
    ensure!(r.size == Some(fix2) && r.is_field, "right {:?} field={}", r.size, r.is_field);
    Ok("|I_l| = |Fix(θ)| = 5, |I_r| = |Fix(θ²)| = 5, both fields".into())
}

fn centre_of(code: &Code) -> Result<(RingFingerprint, RingFingerprint), String> {
    let n = code.normalize_to_identity(ENUMERATION_CAP).map_err(|e| e.to_string())?;
    let c = centraliser(&n).map_err(|e| e.to_string())?.fingerprint().map_err(|e| e.to_string())?;
    let z = center(&n).map_err(|e| e.to_string())?.fingerprint().map_err(|e| e.to_string())?;
    Ok((c, z))
}

fn c3_centraliser() -> Outcome {
    for (name, cfg) in [("lrs", desk_lrs()), ("atlrs", desk_atlrs())] {
        let (c, z) = centre_of(&build(&cfg))?;
        ensure!(c.size == Some(25), "{name}: centraliser size {:?}", c.size);
        ensure!(c.residue_fields == Some(vec![5, 5]), "{name}: residues {:?}", c.residue_fields);
        ensure!(z.size == Some(5), "{name}: center size {:?}", z.size);
    }
    Ok("centraliser 25 ≅ F_5 × F_5, center 5, for LRS and ATLRS".into())
}

fn c4_tz() -> Outcome {
    let start = Instant::now();
    let code = build(&desk_tz());
    let np = nuclear_parameters(&code, ENUMERATION_CAP).map_err(|e| e.to_string())?;
    let wd = code.weight_distribution(ENUMERATION_CAP).map_err(|e| e.to_string())?;
    let took = start.elapsed();
    ensure!(np.sizes() == [625, 5, 5, 25, 5], "sizes {:?}", np.sizes());
    ensure!(np.left_idealiser.is_field && np.right_idealiser.is_field, "idealisers are not fields");
    ensure!(wd.min_distance == Some(3), "d = {:?}", wd.min_distance);
    ensure!(took < TZ_BUDGET, "took {took:?}");
    Ok(format!("(625, 5, 5, 25, 5), d = 3; {took:.2?}"))
}

fn c5_msrd() -> Outcome {
    let mut out = Vec::new();
    for cfg in [desk_lrs(), desk_atlrs(), desk_tz()] {
        let code = build(&cfg);
        let r = code.ring().unwrap().clone();
        let k = code.provenance().k().unwrap();
        let wd = code.weight_distribution(ENUMERATION_CAP).map_err(|e| e.to_string())?;
        let name = code.provenance().family();
        ensure!(wd.min_distance == Some(r.tm() - k + 1), "{name}: d = {:?}", wd.min_distance);
        ensure!(wd.msrd == Some(true), "{name}: Singleton bound not met");
        ensure!(code.is_nondegenerate().map_err(|e| e.to_string())?, "{name}: degenerate");
        out.push(format!("{name} d={}", r.tm() - k + 1));
    }
    Ok(format!("{}; all nondegenerate", out.join(", ")))
}

fn c6_duality() -> Outcome {
    let lrs = build(&desk_lrs());
    let r = lrs.ring().unwrap().clone();
    let k = 3;
    let xk = r.monomial(Fe::ONE, k);
    let shifted = Code::lrs(&r, r.tm() - k).unwrap().scale_right(&xk).unwrap();
    ensure!(lrs.dual() == shifted, "LRS dual differs from C_(tm-k)·x^k");

    let tz = build(&desk_tz());
    let r = tz.ring().unwrap().clone();
    let Provenance::Tz { k, gamma } = *tz.provenance() else { unreachable!() };
    let t = r.tower();
    ensure!(lrs.ring().unwrap().lambda_is_cyclic_group() && r.lambda_is_cyclic_group(), "Λ is not cyclic");
    ensure!(
        t.trace(gamma, Subfield { degree: t.degree() / 2 }).unwrap().is_zero(),
        "default γ has nonzero half trace"
    );
    let xk = r.monomial(Fe::ONE, k);
    let shifted = Code::tz(&r, r.tm() - k, t.neg(gamma)).unwrap().scale_right(&xk).unwrap();
    ensure!(tz.dual() == shifted, "TZ dual differs from D_(tm-k)(−γ)·x^k");
    Ok("LRS and TZ duals equal as echelon bases".into())
}

/// Everything criterion 7 compares, with the `s`-idealisers indexed by `s`.
#[derive(PartialEq, Debug)]
struct Profile {
    s_ideal: Vec<(Vec<bool>, RingFingerprint)>,
    centraliser: RingFingerprint,
    center: RingFingerprint,
    linearity: u64,
    weights: Vec<u64>,
}

fn profile(code: &Code) -> Result<Profile, String> {
    let t = code.ambient().shapes().len();
    let s_ideal = s_patterns(t)
        .into_iter()
        .map(|s| {
            let fp = s_idealiser(code, &s).and_then(|x| x.fingerprint()).map_err(|e| e.to_string())?;
            Ok((s, fp))
        })
        .collect::<Result<Vec<_>, String>>()?;
    let (centraliser, center) = centre_of(code)?;
    let lin = linearity_degree(code).map_err(|e| e.to_string())?;
    ensure!(lin.exact, "linearity degree is a lower bound");
    let weights = code.weight_distribution(ENUMERATION_CAP).map_err(|e| e.to_string())?.counts;
    Ok(Profile { s_ideal, centraliser, center, linearity: lin.size, weights })
}

/// The profile of `iso(C)` predicted from that of `C`: block `i` of the
/// image comes from block `perm[i]`, so `I_s` corresponds to `I_{s∘perm⁻¹}`.
fn permuted(base: &Profile, perm: &[usize]) -> Vec<(Vec<bool>, RingFingerprint)> {
    base.s_ideal
        .iter()
        .map(|(s, _)| {
            let mut src = vec![false; s.len()];
            for (i, &pi) in perm.iter().enumerate() {
                src[pi] = s[i];
            }
            let fp = base.s_ideal.iter().find(|(x, _)| *x == src).unwrap().1.clone();
            (s.clone(), fp)
        })
        .collect()
}

fn c7_invariance() -> Outcome {
    let mut checked = 0;
    for cfg in [desk_lrs(), desk_atlrs(), desk_tz()] {
        let q = build(&cfg);
        let name = q.provenance().family();
        let code = q.to_matrix_ambient(&FqBasis::default_for(q.tower())).map_err(|e| e.to_string())?;
        let space = code.mat_space().unwrap().clone();
        let base = profile(&code)?;
        for seed in 0..ISOMETRIES {
            let iso = Isometry::random(&space, &mut ChaCha8Rng::seed_from_u64(seed));
            let image = code.apply_isometry(&iso).map_err(|e| e.to_string())?;
            let got = profile(&image)?;
            let want = Profile { s_ideal: permuted(&base, &iso.perm), ..profile_rest(&base) };
            ensure!(got == want, "{name}, isometry seed {seed}: {got:?} vs {want:?}");
            checked += 1;
        }
    }
    Ok(format!("{checked} isometric images, all profiles unchanged"))
}

fn profile_rest(p: &Profile) -> Profile {
    Profile {
        s_ideal: Vec::new(),
        centraliser: p.centraliser.clone(),
        center: p.center.clone(),
        linearity: p.linearity,
        weights: p.weights.clone(),
    }
}

fn suite(name: &str) -> Outcome {
    let rep = run_suite(name, None, SuiteOptions::default()).map_err(|e| e.to_string())?;
    let failed: Vec<&str> = rep.checks.iter().filter(|c| c.status == Status::Fail).map(|c| c.name.as_str()).collect();
    ensure!(rep.status == Status::Pass, "{name}: failing checks {failed:?}");
    Ok(format!("{name}: {} checks pass", rep.checks.len()))
}

fn c8_duality_ideal() -> Outcome {
    suite("duality-ideal")
}

fn c9_inequivalence() -> Outcome {
    suite("inequivalence")
}

fn c10_example_c2() -> Outcome {
    let t = tower(2, 1, 4);
    let r = std::sync::Arc::new(QuotientRing::new(t.clone(), vec![Fe::ONE], None).map_err(|e| e.to_string())?);
    let elems: Vec<_> = t
        .fp_basis()
        .into_iter()
        .map(|a| r.from_coeffs(vec![a, t.pow(a, 2), t.pow(a, 4), Fe::ZERO]))
        .collect();
    let code = Code::from_quot_elements(&r, &elems, Provenance::Custom);
    ensure!(code.dim() == 4, "|C2| = 2^{}", code.dim());
    // F_4 scalars already fail: a generator of F_4 times some codeword leaves C2.
    let w = t.subfield_basis(Subfield { degree: 2 })[1];
    let escapes = elems.iter().any(|c| !code.contains_flat(&r.flatten(&r.scale_left(w, c))));
    ensure!(escapes, "C2 is closed under F_4 scalars");
    let sub = code.subspace_linearity().map_err(|e| e.to_string())?;
    ensure!(sub == 2, "subspace linearity {sub}");
    let lin = linearity_degree(&code).map_err(|e| e.to_string())?;
    ensure!(lin.size == 16 && lin.exact, "linearity degree {:?}", lin);
    Ok("subspace linearity F_2, linearity degree 16".into())
}

fn c11_oracles() -> Outcome {
    let start = Instant::now();
    let e = euclid_round_trip(2_000, 1)?;
    let g = gcrd_divisibility(2_000, 2)?;
    let l = lclm_degree(2_000, 3)?;
    let distinct = weight_vs_rank(10_000, 4)?;
    ensure!(distinct >= 3, "only {distinct} distinct weights sampled");
    let took = start.elapsed();
    ensure!(took < ORACLE_BUDGET, "took {took:?}");
    Ok(format!("euclid {e}, gcrd {g}, lclm {l}, weight/rank 10000 ({distinct} weights); {took:.2?}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("LRS nuclear parameters", c1_lrs_nuclear),
        ("ATLRS idealisers", c2_atlrs_idealisers),
        ("centraliser and center", c3_centraliser),
        ("TZ invariants", c4_tz),
        ("MSRD and nondegeneracy", c5_msrd),
        ("duality", c6_duality),
        ("isometry invariance", c7_invariance),
        ("idealiser duality identities", c8_duality_ideal),
        ("inequivalence", c9_inequivalence),
        ("linearity example", c10_example_c2),
        ("oracle batteries", c11_oracles),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{took:.2?}]", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{took:.2?}]", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
