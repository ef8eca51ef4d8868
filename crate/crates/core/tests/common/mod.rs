//! Independent oracles shared by the integration targets.
#![allow(dead_code)]

use std::collections::HashSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sumrank::codes::Code;
use sumrank::config::{CodeSpec, RunConfig};
use sumrank::gf::{Fe, FieldTower};
use sumrank::invariants::{ring_mul, Subring};
use sumrank::quot::QuotientRing;
use sumrank::skew::{SkewPoly, SkewRing};
use sumrank::srmat::{sum_rank_weight, FqBasis};

pub fn tower(p: u32, e: u32, m: u32) -> Arc<FieldTower> {
    Arc::new(FieldTower::new(p, e, m, 1).unwrap())
}

/// `Λ` given by `F_q` coordinates over a prime field.
pub fn ring(t: &Arc<FieldTower>, lambdas: &[u32]) -> Arc<QuotientRing> {
    let l = lambdas.iter().map(|&c| t.fq_from_coords(&[c]).unwrap()).collect();
    Arc::new(QuotientRing::new(t.clone(), l, None).unwrap())
}

pub fn desk_lrs() -> RunConfig {
    RunConfig::desk(5, 3, CodeSpec::Lrs { k: 3 })
}

pub fn desk_atlrs() -> RunConfig {
    RunConfig::desk(5, 3, CodeSpec::Atlrs { k: 3, eta: None, tau_h: 1 })
}

pub fn desk_tz() -> RunConfig {
    RunConfig::desk(5, 2, CodeSpec::Tz { k: 2, gamma: None })
}

pub fn build(cfg: &RunConfig) -> Code {
    let b = cfg.build().unwrap();
    cfg.code(&b).unwrap()
}

pub fn random_poly(t: &FieldTower, max_deg: usize, rng: &mut impl Rng) -> SkewPoly {
    let d = rng.random_range(0..=max_deg);
    SkewPoly::from_coeffs((0..=d).map(|_| t.random(rng)).collect())
}

/// Frames the skew batteries cycle through: `(p, e, m)`.
pub const SKEW_FRAMES: [(u32, u32, u32); 4] = [(5, 1, 3), (2, 2, 3), (3, 1, 4), (7, 1, 2)];

/// `f = q·g + r` with `deg r < deg g`.
pub fn euclid_round_trip(cases: usize, seed: u64) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..cases {
        let (p, e, m) = SKEW_FRAMES[i % SKEW_FRAMES.len()];
        let r = SkewRing::new(tower(p, e, m));
        let f = random_poly(r.tower(), 12, &mut rng);
        let g = random_poly(r.tower(), 6, &mut rng);
        if g.is_zero() {
            continue;
        }
        let (q, rem) = r.right_divide(&f, &g).map_err(|e| e.to_string())?;
        if r.add(&r.mul(&q, &g), &rem) != f {
            return Err(format!("case {i}: q·g + r ≠ f"));
        }
        if rem.degree().is_some_and(|d| Some(d) >= g.degree()) {
            return Err(format!("case {i}: remainder degree not below divisor"));
        }
    }
    Ok(cases)
}

/// `gcrd(a·h, b·h)` is right-divisible by `h`, right-divides both inputs,
/// and satisfies Bézout.
pub fn gcrd_divisibility(cases: usize, seed: u64) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..cases {
        let (p, e, m) = SKEW_FRAMES[i % SKEW_FRAMES.len()];
        let r = SkewRing::new(tower(p, e, m));
        let h = random_poly(r.tower(), 3, &mut rng);
        let f = r.mul(&random_poly(r.tower(), 6, &mut rng), &h);
        let g = r.mul(&random_poly(r.tower(), 6, &mut rng), &h);
        if f.is_zero() && g.is_zero() {
            continue;
        }
        let (d, a, b) = r.extended_gcrd(&f, &g);
        let divides = |x: &SkewPoly, y: &SkewPoly| r.right_rem(x, y).map(|z| z.is_zero()).unwrap_or(false);
        if !d.is_monic() {
            return Err(format!("case {i}: gcrd not monic"));
        }
        if !divides(&f, &d) || !divides(&g, &d) {
            return Err(format!("case {i}: gcrd does not right-divide its inputs"));
        }
        if !h.is_zero() && !divides(&d, &h) {
            return Err(format!("case {i}: common right factor lost"));
        }
        if r.add(&r.mul(&a, &f), &r.mul(&b, &g)) != d {
            return Err(format!("case {i}: Bézout identity fails"));
        }
    }
    Ok(cases)
}

/// `deg lclm(f, g) = deg f + deg g − deg gcrd(f, g)` and both divide it.
pub fn lclm_degree(cases: usize, seed: u64) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..cases {
        let (p, e, m) = SKEW_FRAMES[i % SKEW_FRAMES.len()];
        let r = SkewRing::new(tower(p, e, m));
        let h = random_poly(r.tower(), 2, &mut rng);
        let f = r.mul(&random_poly(r.tower(), 5, &mut rng), &h);
        let g = r.mul(&random_poly(r.tower(), 5, &mut rng), &h);
        let (Some(df), Some(dg)) = (f.degree(), g.degree()) else { continue };
        let l = r.lclm(&f, &g);
        let dd = r.gcrd(&f, &g).degree().unwrap();
        if l.degree() != Some(df + dg - dd) {
            return Err(format!("case {i}: deg lclm = {:?}, expected {}", l.degree(), df + dg - dd));
        }
        let zero = |x: &SkewPoly, y: &SkewPoly| r.right_rem(x, y).unwrap().is_zero();
        if !zero(&l, &f) || !zero(&l, &g) {
            return Err(format!("case {i}: lclm is not a left multiple"));
        }
    }
    Ok(cases)
}

/// Random quotient element with a spread of weights: a random element times
/// up to three linear right factors of `H_Λ`.
pub fn random_low_weight(r: &QuotientRing, rng: &mut impl Rng) -> sumrank::quot::QuotElement {
    let t = r.tower();
    let mut a = r.from_coeffs((0..r.tm()).map(|_| t.random(rng)).collect());
    for _ in 0..rng.random_range(0..=3) {
        let root = loop {
            let c = t.random_nonzero(rng);
            if r.lambdas().contains(&t.norm_to_fq(c)) {
                break c;
            }
        };
        let lin = r.element(&SkewPoly::from_coeffs(vec![t.neg(root), Fe::ONE]));
        a = r.mul(&a, &lin);
    }
    a
}

/// Quotient weight (via gcrd with `H_Λ`) against the sum of block ranks of
/// the evaluation matrices. Returns the distinct weights seen.
pub fn weight_vs_rank(cases: usize, seed: u64) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let frames = [
        ring(&tower(5, 1, 3), &[1, 4]),
        ring(&tower(7, 1, 2), &[1, 2, 4]),
        ring(&tower(3, 1, 2), &[1, 2]),
        ring(&tower(5, 1, 2), &[1, 2, 3, 4]),
    ];
    let mut seen = HashSet::new();
    for i in 0..cases {
        let r = &frames[i % frames.len()];
        let basis = FqBasis::default_for(r.tower());
        let a = random_low_weight(r, &mut rng);
        let w = r.weight(&a);
        let rk = sum_rank_weight(r.tower(), &r.evaluate_matrices(&a, &basis));
        if w != rk {
            return Err(format!("case {i}: wt = {w}, Σ rank = {rk}"));
        }
        seen.insert(w);
    }
    Ok(seen.len())
}

/// Every element of a subring, by enumerating `F_p`-combinations of its basis.
pub fn elements(sub: &Subring) -> Vec<Vec<u32>> {
    let p = sub.ambient().p();
    let rows = &sub.space().rows;
    let n = sub.ambient().flat_dim();
    let mut out = vec![vec![0u32; n]];
    for b in rows {
        let mut next = Vec::with_capacity(out.len() * p as usize);
        for x in &out {
            for c in 0..p {
                next.push(x.iter().zip(b).map(|(&u, &v)| (u + c * v) % p).collect());
            }
        }
        out = next;
    }
    out
}

pub fn idempotent_count(sub: &Subring) -> usize {
    let amb = sub.ambient();
    elements(sub).iter().filter(|x| ring_mul(amb, x, x) == **x).count()
}

/// A nonzero finite ring is a field iff it has no zero divisors.
pub fn literal_is_field(sub: &Subring) -> bool {
    let amb = sub.ambient();
    let els = elements(sub);
    let nonzero: Vec<&Vec<u32>> = els.iter().filter(|x| x.iter().any(|&c| c != 0)).collect();
    !nonzero.is_empty()
        && nonzero.iter().all(|x| nonzero.iter().all(|y| ring_mul(amb, x, y).iter().any(|&c| c != 0)))
}

/// Largest field inside the ring: an element `x` whose powers cycle back
/// to `x` and, together with 0, are additively closed.
pub fn literal_max_subfield(sub: &Subring) -> u64 {
    let amb = sub.ambient();
    let mut best = 0u64;
    for x in elements(sub) {
        if x.iter().all(|&c| c == 0) {
            continue;
        }
        let mut powers = vec![x.clone()];
        let mut cur = x.clone();
        let cyclic = loop {
            cur = ring_mul(amb, &cur, &x);
            if cur == x {
                break true;
            }
            if powers.contains(&cur) || cur.iter().all(|&c| c == 0) {
                break false;
            }
            powers.push(cur.clone());
        };
        let size = powers.len() as u64 + 1;
        if !cyclic || size <= best {
            continue;
        }
        let set: HashSet<&Vec<u32>> = powers.iter().collect();
        let p = amb.p();
        let closed = powers.iter().all(|a| {
            powers.iter().all(|b| {
                let s: Vec<u32> = a.iter().zip(b).map(|(&u, &v)| (u + v) % p).collect();
                s.iter().all(|&c| c == 0) || set.contains(&s)
            })
        });
        if closed {
            best = size;
        }
    }
    best
}

/// `|Fix(θ^h)|` by counting `a` with `a^{q^h} = a`.
pub fn brute_fix_size(t: &FieldTower, h: u32) -> u64 {
    let qh = (t.q() as u64).pow(h);
    t.elements().filter(|&a| t.pow(a, qh) == a).count() as u64
}
