//! Idealisers, centralisers and centres of codes, and fingerprints of their
//! isomorphism classes as finite rings.
//!
//! Every idealiser-type ring is the joint kernel of an `F_p`-linear map on
//! the ambient ring `Π`: for `I_s(C)` the map sends `g` to the components of
//! `g ∘_s c` outside `C`, one block of columns per basis codeword `c`.
//!
//! Fingerprints work on structure constants. For a commutative ring the
//! Frobenius `a ↦ a^p` is `F_p`-linear; its stable image is a copy of the
//! semisimple quotient, on which the fixed-space dimensions of the iterates
//! `F^k` determine the residue field degrees.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::codes::{Ambient, Code, CodeError};
use crate::gf::FIELD_CAP;
use crate::linalg::{self, FieldOps, FpSpace, PrimeField};
use crate::srmat::{FqBasis, MatSpace, MatTuple, Matrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantError {
    #[error("invariants: the centraliser is only defined for codes containing the identity")]
    NeedsIdentity,
    #[error("invariants: operation needs square blocks")]
    NonSquare,
    #[error("invariants: computed subspace is not closed under multiplication")]
    NotClosed,
    #[error("invariants: codes are not comparable: {0}")]
    Incomparable(String),
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// A subring of a quotient ring or of a square block-matrix ring.
#[derive(Clone, Debug)]
pub struct Subring {
    ambient: Ambient,
    space: FpSpace,
    /// Blocks whose product is taken in the opposite order, so that the
    /// product of an `s`-idealiser is composition of its actions. Empty
    /// means none.
    reversed: Vec<bool>,
}

impl Subring {
    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn space(&self) -> &FpSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn size(&self) -> Option<u64> {
        (self.ambient.p() as u64).checked_pow(self.dim() as u32)
    }

    pub fn contains_identity(&self) -> bool {
        self.ambient.identity_flat().is_some_and(|i| self.space.contains(&i))
    }

    pub fn intersect(&self, other: &Subring) -> Subring {
        Subring {
            ambient: self.ambient.clone(),
            space: self.space.intersect(&other.space),
            reversed: self.reversed.clone(),
        }
    }

    /// The ring product on flat coordinates.
    pub fn mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        match &self.ambient {
            Ambient::Matrix(s) if self.reversed.contains(&true) => {
                let t = s.tower();
                let (x, y) = (s.unflatten(a), s.unflatten(b));
                let prod: MatTuple = x
                    .iter()
                    .zip(&y)
                    .zip(&self.reversed)
                    .map(|((u, v), &rev)| if rev { v.mul(t, u) } else { u.mul(t, v) }.expect("square blocks"))
                    .collect();
                s.flatten(&prod)
            }
            _ => ring_mul(&self.ambient, a, b),
        }
    }

    /// Applies `f` to every basis element and spans the images in `target`.
    pub fn map(&self, target: Ambient, f: impl Fn(&[u32]) -> Vec<u32>) -> Subring {
        let rows = self.space.rows.iter().map(|v| f(v)).collect();
        Subring { space: FpSpace::span(target.p(), target.flat_dim(), rows), ambient: target, reversed: Vec::new() }
    }

    pub fn algebra(&self) -> Result<Algebra, InvariantError> {
        Algebra::from_subring(self)
    }

    pub fn fingerprint(&self) -> Result<RingFingerprint, InvariantError> {
        let alg = self.algebra()?;
        Ok(alg.fingerprint(self.contains_identity(), FIELD_CAP))
    }
}

/// Product in a quotient ring or in square blocks, on flat coordinates.
pub fn ring_mul(amb: &Ambient, a: &[u32], b: &[u32]) -> Vec<u32> {
    match amb {
        Ambient::Quotient(r) => r.flatten(&r.mul(&r.unflatten(a), &r.unflatten(b))),
        Ambient::Matrix(s) => {
            let t = s.tower();
            let x = s.unflatten(a);
            let y = s.unflatten(b);
            let prod: MatTuple = x.iter().zip(&y).map(|(u, v)| u.mul(t, v).expect("square blocks")).collect();
            s.flatten(&prod)
        }
    }
}

fn unit(dim: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0; dim];
    v[i] = 1;
    v
}

/// `{g ∈ Π : op(g, c) ∈ C for all c}` (with `project`) or
/// `{g : op(g, c) = 0 for all c}` (without).
fn solve(pi: &Ambient, code: &Code, project: bool, op: impl Fn(&[u32], &[u32]) -> Vec<u32>) -> Subring {
    let p = pi.p();
    let d_pi = pi.flat_dim();
    let free = code.space().non_pivots();
    let rows: Vec<Vec<u32>> = (0..d_pi)
        .map(|u| {
            let g = unit(d_pi, u);
            let mut row = Vec::new();
            for c in code.basis_flat() {
                let img = op(&g, c);
                if project {
                    let red = code.space().reduce(&img);
                    row.extend(free.iter().map(|&i| red[i]));
                } else {
                    row.extend(img);
                }
            }
            row
        })
        .collect();
    let ncols = rows.first().map_or(0, |r| r.len());
    let kernel = if ncols == 0 {
        FpSpace::full(p, d_pi).rows
    } else {
        linalg::left_kernel(&PrimeField::new(p), &rows, ncols)
    };
    Subring { ambient: pi.clone(), space: FpSpace::span(p, d_pi, kernel), reversed: Vec::new() }
}

/// `Π_s = ⊕ F_q^{k_i × k_i}` with `k_i = m_i` where `s_i` is set, else `n_i`.
pub fn s_ambient(space: &MatSpace, s: &[bool]) -> MatSpace {
    let shapes = space.shapes().iter().zip(s).map(|(&(m, n), &si)| if si { (m, m) } else { (n, n) }).collect();
    MatSpace::new(space.tower().clone(), shapes).expect("nonempty blocks")
}

/// `I_s(C) = {A ∈ Π_s : A ∘_s C ⊆ C}` for a code in a matrix ambient. Blocks
/// acting on the right multiply in the opposite order: the blockwise product
/// is not closed in general once `s` is mixed.
pub fn s_idealiser(code: &Code, s: &[bool]) -> Result<Subring, InvariantError> {
    let space = code.mat_space()?.clone();
    if s.len() != space.t() {
        return Err(InvariantError::Incomparable(format!("s has {} bits for {} blocks", s.len(), space.t())));
    }
    let pi_space = s_ambient(&space, s);
    let t = space.tower().clone();
    let op = |g: &[u32], c: &[u32]| {
        let a = pi_space.unflatten(g);
        let x = space.unflatten(c);
        let out: MatTuple = a
            .iter()
            .zip(&x)
            .zip(s)
            .map(|((ai, xi), &si)| if si { ai.mul(&t, xi) } else { xi.mul(&t, ai) }.expect("shapes agree"))
            .collect();
        space.flatten(&out)
    };
    let mut sub = solve(&Ambient::Matrix(pi_space.clone()), code, true, op);
    sub.reversed = s.iter().map(|&x| !x).collect();
    Ok(sub)
}

pub fn left_idealiser(code: &Code) -> Result<Subring, InvariantError> {
    match code.ambient() {
        Ambient::Quotient(_) => {
            let amb = code.ambient().clone();
            Ok(solve(&amb, code, true, |g, c| ring_mul(&amb, g, c)))
        }
        Ambient::Matrix(s) => s_idealiser(code, &vec![true; s.t()]),
    }
}

pub fn right_idealiser(code: &Code) -> Result<Subring, InvariantError> {
    match code.ambient() {
        Ambient::Quotient(_) => {
            let amb = code.ambient().clone();
            Ok(solve(&amb, code, true, |g, c| ring_mul(&amb, c, g)))
        }
        Ambient::Matrix(s) => s_idealiser(code, &vec![false; s.t()]),
    }
}

/// `{g : g c = c g for all c ∈ C}`; needs `1 ∈ C`.
pub fn centraliser(code: &Code) -> Result<Subring, InvariantError> {
    if let Ambient::Matrix(s) = code.ambient() {
        if !s.is_square() {
            return Err(InvariantError::NonSquare);
        }
    }
    if !code.contains_identity() {
        return Err(InvariantError::NeedsIdentity);
    }
    let amb = code.ambient().clone();
    let f = PrimeField::new(amb.p());
    Ok(solve(&amb, code, false, |g, c| {
        let gc = ring_mul(&amb, g, c);
        let cg = ring_mul(&amb, c, g);
        gc.iter().zip(&cg).map(|(&a, &b)| f.sub(a, b)).collect()
    }))
}

/// `Z(C) = I_ℓ(C) ∩ C(C)`.
pub fn center(code: &Code) -> Result<Subring, InvariantError> {
    let c = centraliser(code)?;
    Ok(left_idealiser(code)?.intersect(&c))
}

/// Fingerprint of a finite ring's isomorphism class.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct RingFingerprint {
    pub size_log_p: usize,
    pub size: Option<u64>,
    pub commutative: bool,
    pub contains_identity: bool,
    pub is_field: bool,
    /// Sizes of the residue fields of the local factors, ascending. Only for
    /// commutative rings.
    pub residue_fields: Option<Vec<u64>>,
    pub decomposition_complete: bool,
    /// Largest field contained as a subring; 0 when there is none.
    pub max_subfield: u64,
    pub max_subfield_exact: bool,
}

impl RingFingerprint {
    /// The first field on which two fingerprints provably differ. Lower
    /// bounds and incomplete decompositions are never compared.
    pub fn mismatch(&self, other: &RingFingerprint) -> Option<&'static str> {
        if self.size_log_p != other.size_log_p {
            return Some("size");
        }
        if self.commutative != other.commutative {
            return Some("commutative");
        }
        if self.is_field != other.is_field {
            return Some("is_field");
        }
        if self.decomposition_complete
            && other.decomposition_complete
            && self.residue_fields != other.residue_fields
        {
            return Some("residue_fields");
        }
        if self.max_subfield_exact && other.max_subfield_exact && self.max_subfield != other.max_subfield {
            return Some("max_subfield");
        }
        None
    }
}

/// A finite-dimensional `F_p`-algebra given by structure constants.
#[derive(Clone, Debug)]
pub struct Algebra {
    p: u32,
    n: usize,
    /// `table[i * n + j]` holds the coordinates of `b_i b_j`.
    table: Vec<Vec<u32>>,
}

fn euler_phi(mut n: usize) -> usize {
    let mut out = n;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            while n.is_multiple_of(d) {
                n /= d;
            }
            out -= out / d;
        }
        d += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

fn mobius(mut n: usize) -> i64 {
    let mut out = 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            out = -out;
        }
        d += 1;
    }
    if n > 1 {
        out = -out;
    }
    out
}

impl Algebra {
    pub fn from_subring(sub: &Subring) -> Result<Self, InvariantError> {
        let basis = &sub.space.rows;
        let n = basis.len();
        let mut table = Vec::with_capacity(n * n);
        for a in basis {
            for b in basis {
                let prod = sub.mul(a, b);
                if !sub.space.contains(&prod) {
                    return Err(InvariantError::NotClosed);
                }
                table.push(sub.space.coords(&prod));
            }
        }
        Ok(Algebra { p: sub.ambient.p(), n, table })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn mul(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let f = PrimeField::new(self.p);
        let mut out = vec![0u32; self.n];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let c = f.mul(xi, yj);
                for (o, &t) in out.iter_mut().zip(&self.table[i * self.n + j]) {
                    if t != 0 {
                        *o = f.add(*o, f.mul(c, t));
                    }
                }
            }
        }
        out
    }

    fn pow(&self, x: &[u32], mut k: u64) -> Vec<u32> {
        let mut base = x.to_vec();
        let mut acc: Option<Vec<u32>> = None;
        while k > 0 {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => self.mul(&a, &base),
                });
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc.unwrap_or_else(|| vec![0; self.n])
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.table[i * self.n + j] == self.table[j * self.n + i]))
    }

    /// Residue field degrees of a commutative algebra, as `degree → count`.
    pub fn residue_degrees(&self) -> BTreeMap<usize, usize> {
        let f = PrimeField::new(self.p);
        let n = self.n;
        let frob: Vec<Vec<u32>> = (0..n).map(|i| self.pow(&unit(n, i), self.p as u64)).collect();
        // Stable image of the Frobenius.
        let mut w = FpSpace::full(self.p, n);
        loop {
            let next = if w.dim() == 0 {
                w.clone()
            } else {
                FpSpace::span(self.p, n, linalg::mat_mul(&f, &w.rows, &frob))
            };
            if next.dim() == w.dim() {
                break;
            }
            w = next;
        }
        let r = w.dim();
        let mut out = BTreeMap::new();
        if r == 0 {
            return out;
        }
        let image = linalg::mat_mul(&f, &w.rows, &frob);
        let phi: Vec<Vec<u32>> = image.iter().map(|v| w.coords(v)).collect();
        // c[k] = dim ker(Φ^k − I) = Σ_i gcd(k, d_i).
        let mut c = vec![0i64; r + 1];
        let mut power = phi.clone();
        for k in 1..=r {
            let shifted: Vec<Vec<u32>> = power
                .iter()
                .enumerate()
                .map(|(i, row)| row.iter().enumerate().map(|(j, &x)| if i == j { f.sub(x, 1) } else { x }).collect())
                .collect();
            c[k] = (r - linalg::rank(&f, &shifted)) as i64;
            power = linalg::mat_mul(&f, &power, &phi);
        }
        // Σ_{e|k} φ(e) M_e = c_k with M_e = #{i : e | d_i}.
        let mut big_m = vec![0i64; r + 1];
        for e in 1..=r {
            let s: i64 = (1..=e).filter(|d| e % d == 0).map(|d| mobius(e / d) * c[d]).sum();
            big_m[e] = s / euler_phi(e) as i64;
        }
        for d in 1..=r {
            let count: i64 = (d..=r).step_by(d).map(|dd| mobius(dd / d) * big_m[dd]).sum();
            if count > 0 {
                out.insert(d, count as usize);
            }
        }
        debug_assert_eq!(out.iter().map(|(d, c)| d * c).sum::<usize>(), r);
        out
    }

    /// The non-unital subalgebra generated by `x`.
    fn generated(&self, x: &[u32]) -> FpSpace {
        let mut span = FpSpace::zero(self.p, self.n);
        let mut cur = x.to_vec();
        while !span.contains(&cur) {
            span = span.sum(&FpSpace::span(self.p, self.n, vec![cur.clone()]));
            cur = self.mul(&cur, x);
        }
        span
    }

    /// Restriction of the structure to a subalgebra.
    pub fn restrict(&self, sub: &FpSpace) -> Algebra {
        let basis = &sub.rows;
        let mut table = Vec::with_capacity(basis.len() * basis.len());
        for a in basis {
            for b in basis {
                table.push(sub.coords(&self.mul(a, b)));
            }
        }
        Algebra { p: self.p, n: basis.len(), table }
    }

    fn is_field_commutative(&self) -> bool {
        let res = self.residue_degrees();
        self.n > 0 && res.len() == 1 && res.get(&self.n) == Some(&1)
    }

    /// The centre of the algebra, as a subspace of coordinates.
    pub fn centre(&self) -> FpSpace {
        let f = PrimeField::new(self.p);
        let n = self.n;
        let rows: Vec<Vec<u32>> = (0..n)
            .map(|i| {
                (0..n)
                    .flat_map(|j| {
                        let a = &self.table[i * n + j];
                        let b = &self.table[j * n + i];
                        a.iter().zip(b).map(|(&x, &y)| f.sub(x, y)).collect::<Vec<_>>()
                    })
                    .collect()
            })
            .collect();
        let ker = if n == 0 { Vec::new() } else { linalg::left_kernel(&f, &rows, n * n) };
        FpSpace::span(self.p, n, ker)
    }

    /// Largest subfield and whether the answer is exact.
    pub fn max_subfield(&self, cap: u64) -> (u64, bool) {
        let p = self.p as u64;
        if self.is_commutative() {
            let res = self.residue_degrees();
            return (res.keys().last().map_or(0, |&d| p.pow(d as u32)), true);
        }
        let total = (self.p as u128).checked_pow(self.n as u32).unwrap_or(u128::MAX);
        let mut best_deg = 0usize;
        let consider = |x: &[u32], best_deg: &mut usize| {
            if x.iter().all(|&v| v == 0) {
                return;
            }
            let g = self.generated(x);
            if g.dim() > *best_deg && self.restrict(&g).is_field_commutative() {
                *best_deg = g.dim();
            }
        };
        if total <= cap as u128 {
            let mut x = vec![0u32; self.n];
            loop {
                consider(&x, &mut best_deg);
                let mut i = self.n;
                loop {
                    if i == 0 {
                        return (if best_deg == 0 { 0 } else { p.pow(best_deg as u32) }, true);
                    }
                    i -= 1;
                    x[i] += 1;
                    if x[i] < self.p {
                        break;
                    }
                    x[i] = 0;
                }
            }
        }
        // Lower bound: the centre's fields and the basis elements.
        let z = self.centre();
        if z.dim() > 0 {
            let za = self.restrict(&z);
            if let Some(&d) = za.residue_degrees().keys().last() {
                best_deg = best_deg.max(d);
            }
        }
        for i in 0..self.n {
            consider(&unit(self.n, i), &mut best_deg);
        }
        (if best_deg == 0 { 0 } else { p.pow(best_deg as u32) }, false)
    }

    pub fn fingerprint(&self, contains_identity: bool, cap: u64) -> RingFingerprint {
        let commutative = self.is_commutative();
        let residue_fields = commutative.then(|| {
            let mut v: Vec<u64> = self
                .residue_degrees()
                .iter()
                .flat_map(|(&d, &c)| std::iter::repeat_n((self.p as u64).pow(d as u32), c))
                .collect();
            v.sort_unstable();
            v
        });
        let is_field = commutative && self.is_field_commutative();
        let (max_subfield, max_subfield_exact) = self.max_subfield(cap);
        RingFingerprint {
            size_log_p: self.n,
            size: (self.p as u64).checked_pow(self.n as u32),
            commutative,
            contains_identity,
            is_field,
            residue_fields,
            decomposition_complete: commutative,
            max_subfield,
            max_subfield_exact,
        }
    }
}

/// Largest field contained in `I_ℓ(C)`, as its size.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LinearityDegree {
    pub size: u64,
    pub exact: bool,
}

pub fn linearity_degree(code: &Code) -> Result<LinearityDegree, InvariantError> {
    let alg = left_idealiser(code)?.algebra()?;
    let (size, exact) = alg.max_subfield(FIELD_CAP);
    Ok(LinearityDegree { size, exact })
}

/// `(|C|, |I_ℓ|, |I_r|, |C(C')|, |Z(C')|)` with `C'` the normalisation of
/// `C` that contains the identity, each ring with its fingerprint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NuclearParameters {
    pub p: u32,
    pub code_size_log_p: usize,
    pub left_idealiser: RingFingerprint,
    pub right_idealiser: RingFingerprint,
    pub centraliser: RingFingerprint,
    pub center: RingFingerprint,
    /// Whether `Z(C') = I_s(C') ∩ C(C')` for both `s = 1` and `s = 0`.
    pub center_agrees_on_right: bool,
}

impl NuclearParameters {
    pub fn log_sizes(&self) -> [usize; 5] {
        [
            self.code_size_log_p,
            self.left_idealiser.size_log_p,
            self.right_idealiser.size_log_p,
            self.centraliser.size_log_p,
            self.center.size_log_p,
        ]
    }

    pub fn sizes(&self) -> [u128; 5] {
        let p = self.p as u128;
        self.log_sizes().map(|e| p.pow(e as u32))
    }
}

pub fn nuclear_parameters(code: &Code, cap: u64) -> Result<NuclearParameters, InvariantError> {
    let left = left_idealiser(code)?;
    let right = right_idealiser(code)?;
    let normal = if code.contains_identity() { code.clone() } else { code.normalize_to_identity(cap)? };
    let cent = centraliser(&normal)?;
    let z = left_idealiser(&normal)?.intersect(&cent);
    let zr = right_idealiser(&normal)?.intersect(&cent);
    Ok(NuclearParameters {
        p: code.p(),
        code_size_log_p: code.dim(),
        left_idealiser: left.fingerprint()?,
        right_idealiser: right.fingerprint()?,
        centraliser: cent.fingerprint()?,
        center: z.fingerprint()?,
        center_agrees_on_right: z.space == zr.space,
    })
}

/// All `2^t` patterns, left (`all true`) first, right (`all false`) second,
/// the rest in increasing binary order.
pub fn s_patterns(t: usize) -> Vec<Vec<bool>> {
    let mut out = vec![vec![true; t], vec![false; t]];
    for bits in 1..(1u64 << t) - 1 {
        out.push((0..t).map(|i| bits >> i & 1 == 1).collect());
    }
    out
}

/// The verdict of [`distinguish`]. Never claims equivalence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Inequivalent,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub invariant: String,
    pub a: serde_json::Value,
    pub b: serde_json::Value,
    /// Flat bases of the two witnessing subrings, when the witness is one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bases: Option<[Vec<Vec<u32>>; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub compared: Vec<String>,
}

fn as_matrix_code(code: &Code) -> Result<Code, InvariantError> {
    match code.ambient() {
        Ambient::Matrix(_) => Ok(code.clone()),
        Ambient::Quotient(r) => Ok(code.to_matrix_ambient(&FqBasis::default_for(r.tower()))?),
    }
}

fn with_bases(mut c: Certificate, a: &Subring, b: &Subring) -> Certificate {
    if let Some(w) = c.witness.as_mut() {
        w.bases = Some([a.space.rows.clone(), b.space.rows.clone()]);
    }
    c
}

fn json<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("invariants serialize")
}

/// Compares invariants of two codes in order (size, left and right
/// idealisers, mixed `s`-idealisers by Hamming weight of `s`, existence of a
/// full-weight codeword, centraliser and centre of the normalisations,
/// weight distribution) and stops at the first that differs.
pub fn distinguish(a: &Code, b: &Code, cap: u64) -> Result<Certificate, InvariantError> {
    let (ta, tb) = (a.tower(), b.tower());
    if ta.p() != tb.p() || ta.e() != tb.e() {
        return Err(InvariantError::Incomparable("different base fields".into()));
    }
    if a.ambient().shapes() != b.ambient().shapes() {
        return Err(InvariantError::Incomparable("different block shapes".into()));
    }
    let ma = as_matrix_code(a)?;
    let mb = as_matrix_code(b)?;
    let mut compared = Vec::new();
    let done = |compared: Vec<String>, invariant: String, x: serde_json::Value, y: serde_json::Value| Certificate {
        verdict: Verdict::Inequivalent,
        witness: Some(Witness { invariant, a: x, b: y, bases: None }),
        compared,
    };

    compared.push("size".to_string());
    if ma.dim() != mb.dim() {
        return Ok(done(compared, "size".into(), json(&ma.size()), json(&mb.size())));
    }

    let t = ma.mat_space()?.t();
    let mut by_weight: BTreeMap<usize, (Vec<RingFingerprint>, Vec<RingFingerprint>)> = BTreeMap::new();
    for s in s_patterns(t) {
        let (sa, sb) = (s_idealiser(&ma, &s)?, s_idealiser(&mb, &s)?);
        let (fa, fb) = (sa.fingerprint()?, sb.fingerprint()?);
        let w = s.iter().filter(|&&x| x).count();
        if w == 0 || w == t {
            let name = if w == t { "left_idealiser" } else { "right_idealiser" };
            compared.push(name.to_string());
            if let Some(field) = fa.mismatch(&fb) {
                return Ok(with_bases(done(compared, format!("{name}.{field}"), json(&fa), json(&fb)), &sa, &sb));
            }
        } else {
            let entry = by_weight.entry(w).or_default();
            entry.0.push(fa);
            entry.1.push(fb);
        }
    }
    // A permutation of blocks carries I_s to I_{π(s)}, so mixed patterns
    // are compared as multisets per Hamming weight.
    for (w, (mut fa, mut fb)) in by_weight {
        compared.push(format!("s_idealisers_weight_{w}"));
        fa.sort();
        fb.sort();
        let differs = fa.len() != fb.len() || fa.iter().zip(&fb).any(|(x, y)| x.mismatch(y).is_some());
        if differs {
            return Ok(done(compared, format!("s_idealisers_weight_{w}"), json(&fa), json(&fb)));
        }
    }

    let na = ma.normalize_to_identity(cap);
    let nb = mb.normalize_to_identity(cap);
    compared.push("full_weight_codeword".to_string());
    match (na, nb) {
        (Ok(na), Ok(nb)) => {
            compared.push("centraliser".to_string());
            let ca = centraliser(&na)?;
            let cb = centraliser(&nb)?;
            let (fa, fb) = (ca.fingerprint()?, cb.fingerprint()?);
            if let Some(field) = fa.mismatch(&fb) {
                return Ok(with_bases(done(compared, format!("centraliser.{field}"), json(&fa), json(&fb)), &ca, &cb));
            }
            compared.push("center".to_string());
            let (za, zb) = (left_idealiser(&na)?.intersect(&ca), left_idealiser(&nb)?.intersect(&cb));
            let (fa, fb) = (za.fingerprint()?, zb.fingerprint()?);
            if let Some(field) = fa.mismatch(&fb) {
                return Ok(with_bases(done(compared, format!("center.{field}"), json(&fa), json(&fb)), &za, &zb));
            }
        }
        (Err(CodeError::NoFullWeight), Err(CodeError::NoFullWeight)) => {}
        (Err(CodeError::NoFullWeight), Ok(_)) => {
            return Ok(done(compared, "full_weight_codeword".into(), json(&false), json(&true)));
        }
        (Ok(_), Err(CodeError::NoFullWeight)) => {
            return Ok(done(compared, "full_weight_codeword".into(), json(&true), json(&false)));
        }
        (Err(CodeError::CapExceeded { .. }), _) | (_, Err(CodeError::CapExceeded { .. })) => {}
        (Err(e), _) | (_, Err(e)) => return Err(e.into()),
    }

    match (ma.weight_distribution(cap), mb.weight_distribution(cap)) {
        (Ok(wa), Ok(wb)) => {
            compared.push("weight_distribution".to_string());
            if wa.counts != wb.counts {
                return Ok(done(compared, "weight_distribution".into(), json(&wa.counts), json(&wb.counts)));
            }
        }
        (Err(CodeError::CapExceeded { .. }), _) | (_, Err(CodeError::CapExceeded { .. })) => {}
        (Err(e), _) | (_, Err(e)) => return Err(e.into()),
    }

    Ok(Certificate { verdict: Verdict::Undetermined, witness: None, compared })
}

/// Embeds a subring of square blocks block-diagonally into one big block.
pub fn block_embed_subring(sub: &Subring) -> Result<Subring, InvariantError> {
    let Ambient::Matrix(s) = sub.ambient() else {
        return Err(InvariantError::Code(CodeError::WrongAmbient("matrix")));
    };
    let rows: usize = s.shapes().iter().map(|x| x.0).sum();
    let cols: usize = s.shapes().iter().map(|x| x.1).sum();
    let big = MatSpace::new(s.tower().clone(), vec![(rows, cols)]).map_err(CodeError::from)?;
    let s2 = s.clone();
    let big2 = big.clone();
    Ok(sub.map(Ambient::Matrix(big), move |v| {
        let m: Matrix = crate::srmat::block_embed(&s2.unflatten(v));
        big2.flatten(&[m])
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    use crate::gf::{Fe, FieldTower};

    fn full_matrix_ring(p: u32, n: usize) -> Subring {
        let t = Arc::new(FieldTower::new(p, 1, 2, 1).unwrap());
        let s = MatSpace::square(t, n, 1);
        Subring { space: FpSpace::full(p, s.flat_dim()), ambient: Ambient::Matrix(s), reversed: Vec::new() }
    }

    #[test]
    fn matrix_ring_is_not_commutative_and_contains_a_big_field() {
        let fp = full_matrix_ring(2, 2).fingerprint().unwrap();
        assert!(!fp.commutative);
        assert!(!fp.is_field);
        assert_eq!(fp.max_subfield, 4);
        assert!(fp.max_subfield_exact);
    }

    #[test]
    fn mobius_and_phi() {
        assert_eq!((1..=6).map(mobius).collect::<Vec<_>>(), vec![1, -1, -1, 0, -1, 1]);
        assert_eq!((1..=6).map(euler_phi).collect::<Vec<_>>(), vec![1, 1, 2, 2, 4, 2]);
    }

    #[test]
    fn diagonal_matrices_split_into_fields() {
        let t = Arc::new(FieldTower::new(3, 1, 2, 1).unwrap());
        let s = MatSpace::square(t, 2, 1);
        let diag = |a: u32, b: u32| {
            let mut m = Matrix::zeros(2, 2);
            m.set(0, 0, Fe(a));
            m.set(1, 1, Fe(b));
            s.flatten(&[m])
        };
        let sub = Subring { space: FpSpace::span(3, 4, vec![diag(1, 0), diag(0, 1)]), ambient: Ambient::Matrix(s), reversed: Vec::new() };
        let fp = sub.fingerprint().unwrap();
        assert_eq!(fp.residue_fields, Some(vec![3, 3]));
        assert!(!fp.is_field);
        assert_eq!(fp.max_subfield, 3);
    }

    #[test]
    fn s_patterns_order() {
        let s = s_patterns(2);
        assert_eq!(s, vec![vec![true, true], vec![false, false], vec![true, false], vec![false, true]]);
    }
}
