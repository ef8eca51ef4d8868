//! Additive codes in either ambient, the three skew-polynomial families, and
//! exhaustive weight enumeration.
//!
//! A code is an `F_p`-subspace kept as an RREF basis of flattened
//! coordinates. Codewords are enumerated in coordinate-lexicographic order
//! over that basis: the coefficient of basis vector 0 is the most
//! significant digit.

use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::gf::{Automorphism, Fe, FieldError, FieldTower, Subfield};
use crate::linalg::FpSpace;
use crate::quot::{QuotElement, QuotError, QuotientRing, WeightScratch};
use crate::srmat::{
    self, rank_prime_in_place, sorted_shape, DegeneracyWitness, FqBasis, Isometry, MatSpace, MatTuple, SrmatError,
};

/// Default ceiling on the number of codewords enumerated.
pub const ENUMERATION_CAP: u64 = 1 << 26;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("codes: invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("codes: eta fails the validity condition: {0}")]
    InvalidEta(String),
    #[error("codes: gamma fails the construction conditions: {0}")]
    InvalidGamma(String),
    #[error("codes: {count} codewords exceed the enumeration cap of {cap}")]
    CapExceeded { count: u128, cap: u64 },
    #[error("codes: the code has no codeword of full weight")]
    NoFullWeight,
    #[error("codes: operation needs a {0} ambient")]
    WrongAmbient(&'static str),
    #[error("codes: codes live in different ambients")]
    AmbientMismatch,
    #[error(transparent)]
    Quot(#[from] QuotError),
    #[error(transparent)]
    Srmat(#[from] SrmatError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, Debug)]
pub enum Ambient {
    Quotient(Arc<QuotientRing>),
    Matrix(MatSpace),
}

impl PartialEq for Ambient {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Ambient::Quotient(a), Ambient::Quotient(b)) => Arc::ptr_eq(a, b) || **a == **b,
            (Ambient::Matrix(a), Ambient::Matrix(b)) => a == b,
            _ => false,
        }
    }
}

impl Ambient {
    pub fn tower(&self) -> &Arc<FieldTower> {
        match self {
            Ambient::Quotient(r) => r.tower(),
            Ambient::Matrix(s) => s.tower(),
        }
    }

    pub fn p(&self) -> u32 {
        self.tower().p()
    }

    pub fn flat_dim(&self) -> usize {
        match self {
            Ambient::Quotient(r) => r.flat_dim(),
            Ambient::Matrix(s) => s.flat_dim(),
        }
    }

    /// Block shapes of the matrix picture.
    pub fn shapes(&self) -> Vec<(usize, usize)> {
        match self {
            Ambient::Quotient(r) => vec![(r.m(), r.m()); r.t()],
            Ambient::Matrix(s) => s.shapes().to_vec(),
        }
    }

    /// Largest possible sum-rank weight.
    pub fn max_weight(&self) -> usize {
        self.shapes().iter().map(|&(m, n)| m.min(n)).sum()
    }

    /// The flat coordinates of the identity, if the ambient has one.
    pub fn identity_flat(&self) -> Option<Vec<u32>> {
        match self {
            Ambient::Quotient(r) => Some(r.flatten(&r.one())),
            Ambient::Matrix(s) => s.identity().ok().map(|i| s.flatten(&i)),
        }
    }

    /// Flat coordinates to the native vector of tower elements used by the
    /// enumerator: coefficients, or all block entries in order.
    fn native(&self, v: &[u32]) -> Vec<Fe> {
        match self {
            Ambient::Quotient(r) => r.unflatten(v).coeffs().to_vec(),
            Ambient::Matrix(s) => s.unflatten(v).into_iter().flat_map(|m| m.data).collect(),
        }
    }

    fn gram(&self) -> Vec<Vec<u32>> {
        match self {
            Ambient::Quotient(r) => r.gram(),
            Ambient::Matrix(s) => s.gram(),
        }
    }
}

/// Where a code came from; carried into reports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Lrs { k: usize },
    Atlrs { k: usize, eta: Fe, tau: Automorphism },
    Tz { k: usize, gamma: Fe },
    Custom,
    Derived(String),
}

impl Provenance {
    pub fn family(&self) -> &'static str {
        match self {
            Provenance::Lrs { .. } => "lrs",
            Provenance::Atlrs { .. } => "atlrs",
            Provenance::Tz { .. } => "tz",
            Provenance::Custom => "custom",
            Provenance::Derived(_) => "derived",
        }
    }

    pub fn k(&self) -> Option<usize> {
        match self {
            Provenance::Lrs { k } | Provenance::Atlrs { k, .. } | Provenance::Tz { k, .. } => Some(*k),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Code {
    ambient: Ambient,
    space: FpSpace,
    provenance: Provenance,
}

impl PartialEq for Code {
    /// Set equality of codes; provenance is ignored.
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.space == other.space
    }
}

/// Exact weight histogram of a code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightDistribution {
    /// `counts[w]` codewords of weight `w`.
    pub counts: Vec<u64>,
    pub min_distance: Option<usize>,
    /// `log_q |C|` if it is an integer.
    pub log_q_size: Option<usize>,
    pub singleton_exponent: Option<usize>,
    pub msrd: Option<bool>,
}

/// The elements of the subgroup of `F_q^*` generated by `gens`.
pub fn generated_subgroup(t: &FieldTower, gens: &[Fe]) -> Vec<Fe> {
    let mut group = vec![Fe::ONE];
    let mut frontier = vec![Fe::ONE];
    while let Some(a) = frontier.pop() {
        for &g in gens {
            let b = t.mul(a, g);
            if !group.contains(&b) {
                group.push(b);
                frontier.push(b);
            }
        }
    }
    group
}

/// The subfield `F_q ∩ Fix(τ)`.
pub fn fq_fixed_part(t: &FieldTower, tau: Automorphism) -> Subfield {
    Subfield { degree: crate::gf::gcd(t.e() as u64, tau.h as u64) as u32 }
}

/// `Ok` when `η ≠ 0` satisfies `(−1)^{ukm} N_{F_{q^m}/F}(η) ∉ ⟨Λ⟩`.
pub fn check_eta(ring: &QuotientRing, k: usize, eta: Fe, tau: Automorphism) -> Result<(), CodeError> {
    let t = ring.tower();
    if eta.is_zero() {
        return Ok(());
    }
    let f = fq_fixed_part(t, tau);
    let u = (t.e() / f.degree) as usize;
    let mut v = t.norm(eta, f)?;
    if (u * k * ring.m()) % 2 == 1 {
        v = t.neg(v);
    }
    if generated_subgroup(t, ring.lambdas()).contains(&v) {
        return Err(CodeError::InvalidEta(format!("signed norm {} lies in the group generated by the lambdas", v.0)));
    }
    Ok(())
}

/// Checks the twisted construction's conditions on `m`, `q`, `Λ`, `γ`.
pub fn check_gamma(ring: &QuotientRing, gamma: Fe) -> Result<(), CodeError> {
    let t = ring.tower();
    if !ring.m().is_multiple_of(2) {
        return Err(CodeError::InvalidGamma("m must be even".into()));
    }
    if t.p() == 2 {
        return Err(CodeError::InvalidGamma("q must be odd".into()));
    }
    let fq = t.fq();
    if ring.lambdas().iter().any(|&l| !t.is_square_in(l, fq)) {
        return Err(CodeError::InvalidGamma("every lambda must be a square in F_q".into()));
    }
    if gamma.is_zero() || t.is_square_in(t.norm_to_fq(gamma), fq) {
        return Err(CodeError::InvalidGamma("N(gamma) must be a non-square in F_q".into()));
    }
    Ok(())
}

impl Code {
    pub fn from_space(ambient: Ambient, space: FpSpace, provenance: Provenance) -> Self {
        Code { ambient, space, provenance }
    }

    /// The `F_p`-span of the given flat vectors.
    pub fn from_flat(ambient: Ambient, vectors: Vec<Vec<u32>>, provenance: Provenance) -> Result<Self, CodeError> {
        let d = ambient.flat_dim();
        let p = ambient.p();
        if vectors.iter().any(|v| v.len() != d || v.iter().any(|&x| x >= p)) {
            return Err(CodeError::InvalidParameter(format!("basis vectors must have {d} digits below {p}")));
        }
        Ok(Code { space: FpSpace::span(p, d, vectors), ambient, provenance })
    }

    pub fn from_quot_elements(ring: &Arc<QuotientRing>, elems: &[QuotElement], provenance: Provenance) -> Self {
        let vectors = elems.iter().map(|e| ring.flatten(e)).collect();
        Code { space: FpSpace::span(ring.tower().p(), ring.flat_dim(), vectors), ambient: Ambient::Quotient(ring.clone()), provenance }
    }

    pub fn from_tuples(space: &MatSpace, elems: &[MatTuple], provenance: Provenance) -> Result<Self, CodeError> {
        for x in elems {
            space.check(x)?;
        }
        let vectors = elems.iter().map(|x| space.flatten(x)).collect();
        Ok(Code {
            space: FpSpace::span(space.tower().p(), space.flat_dim(), vectors),
            ambient: Ambient::Matrix(space.clone()),
            provenance,
        })
    }

    /// `C_{k,θ}`: skew polynomials of degree below `k`.
    pub fn lrs(ring: &Arc<QuotientRing>, k: usize) -> Result<Self, CodeError> {
        if k == 0 || k > ring.tm() {
            return Err(CodeError::InvalidParameter(format!("k = {k} outside 1..={}", ring.tm())));
        }
        let basis = ring.tower().fp_basis();
        let elems: Vec<QuotElement> =
            (0..k).flat_map(|i| basis.iter().map(move |&b| (b, i))).map(|(b, i)| ring.monomial(b, i)).collect();
        Ok(Self::from_quot_elements(ring, &elems, Provenance::Lrs { k }))
    }

    /// `C_k(η, τ)`: `f_0 + f_1 x + … + f_{k−1} x^{k−1} + η τ(f_0) x^k`.
    pub fn atlrs(ring: &Arc<QuotientRing>, k: usize, eta: Fe, tau: Automorphism) -> Result<Self, CodeError> {
        if k == 0 || k >= ring.tm() {
            return Err(CodeError::InvalidParameter(format!("k = {k} outside 1..{}", ring.tm())));
        }
        check_eta(ring, k, eta, tau)?;
        Ok(Self::atlrs_unchecked(ring, k, eta, tau))
    }

    /// [`Code::atlrs`] without the validity condition on `η`; the result
    /// need not be MSRD.
    pub fn atlrs_unchecked(ring: &Arc<QuotientRing>, k: usize, eta: Fe, tau: Automorphism) -> Self {
        let t = ring.tower();
        let basis = t.fp_basis();
        let mut elems = Vec::new();
        for &b in &basis {
            let mut c = vec![Fe::ZERO; k + 1];
            c[0] = b;
            c[k] = t.mul(eta, t.apply(tau, b));
            elems.push(ring.from_coeffs(c));
        }
        for i in 1..k {
            elems.extend(basis.iter().map(|&b| ring.monomial(b, i)));
        }
        Self::from_quot_elements(ring, &elems, Provenance::Atlrs { k, eta, tau })
    }

    /// `D_k(γ)`: `f_0 + f_1 x + … + f_{k−1} x^{k−1} + γ f_k x^k` with
    /// `f_0, f_k ∈ F_{q^{m/2}}`.
    pub fn tz(ring: &Arc<QuotientRing>, k: usize, gamma: Fe) -> Result<Self, CodeError> {
        if k == 0 || k >= ring.tm() {
            return Err(CodeError::InvalidParameter(format!("k = {k} outside 1..{}", ring.tm())));
        }
        check_gamma(ring, gamma)?;
        Ok(Self::tz_unchecked(ring, k, gamma))
    }

    /// [`Code::tz`] without the conditions on `γ` and `Λ`.
    pub fn tz_unchecked(ring: &Arc<QuotientRing>, k: usize, gamma: Fe) -> Self {
        assert!(ring.m().is_multiple_of(2), "TZ-type codes need even m");
        let t = ring.tower();
        let half = Subfield { degree: t.degree() / 2 };
        let small = t.subfield_basis(half);
        let mut elems: Vec<QuotElement> = small.iter().map(|&b| ring.constant(b)).collect();
        for i in 1..k {
            elems.extend(t.fp_basis().iter().map(|&b| ring.monomial(b, i)));
        }
        elems.extend(small.iter().map(|&b| ring.monomial(t.mul(gamma, b), k)));
        Self::from_quot_elements(ring, &elems, Provenance::Tz { k, gamma })
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn space(&self) -> &FpSpace {
        &self.space
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        self.ambient.tower()
    }

    pub fn p(&self) -> u32 {
        self.ambient.p()
    }

    /// Dimension over `F_p`.
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// `|C|`, if it fits.
    pub fn size(&self) -> Option<u128> {
        (self.p() as u128).checked_pow(self.dim() as u32)
    }

    pub fn basis_flat(&self) -> &[Vec<u32>] {
        &self.space.rows
    }

    pub fn contains_flat(&self, v: &[u32]) -> bool {
        self.space.contains(v)
    }

    pub fn contains_identity(&self) -> bool {
        self.ambient.identity_flat().is_some_and(|i| self.contains_flat(&i))
    }

    pub fn ring(&self) -> Result<&Arc<QuotientRing>, CodeError> {
        match &self.ambient {
            Ambient::Quotient(r) => Ok(r),
            Ambient::Matrix(_) => Err(CodeError::WrongAmbient("quotient")),
        }
    }

    pub fn mat_space(&self) -> Result<&MatSpace, CodeError> {
        match &self.ambient {
            Ambient::Matrix(s) => Ok(s),
            Ambient::Quotient(_) => Err(CodeError::WrongAmbient("matrix")),
        }
    }

    pub fn quot_basis(&self) -> Result<Vec<QuotElement>, CodeError> {
        let r = self.ring()?;
        Ok(self.space.rows.iter().map(|v| r.unflatten(v)).collect())
    }

    pub fn tuple_basis(&self) -> Result<Vec<MatTuple>, CodeError> {
        let s = self.mat_space()?;
        Ok(self.space.rows.iter().map(|v| s.unflatten(v)).collect())
    }

    fn map_basis(&self, mut f: impl FnMut(&[u32]) -> Vec<u32>, provenance: Provenance) -> Self {
        let vectors = self.space.rows.iter().map(|v| f(v)).collect();
        Code { space: FpSpace::span(self.p(), self.ambient.flat_dim(), vectors), ambient: self.ambient.clone(), provenance }
    }

    /// `C·u`.
    pub fn scale_right(&self, u: &QuotElement) -> Result<Self, CodeError> {
        let r = self.ring()?.clone();
        Ok(self.map_basis(|v| r.flatten(&r.mul(&r.unflatten(v), u)), Provenance::Derived("right-scaled".into())))
    }

    /// `u·C`.
    pub fn scale_left(&self, u: &QuotElement) -> Result<Self, CodeError> {
        let r = self.ring()?.clone();
        Ok(self.map_basis(|v| r.flatten(&r.mul(u, &r.unflatten(v))), Provenance::Derived("left-scaled".into())))
    }

    /// Blockwise right multiplication by the tuple `y` in a square matrix
    /// ambient.
    pub fn scale_right_tuple(&self, y: &[srmat::Matrix]) -> Result<Self, CodeError> {
        let s = self.mat_space()?.clone();
        let t = s.tower().clone();
        let mut err = None;
        let out = self.map_basis(
            |v| {
                let x = s.unflatten(v);
                let prod: Result<MatTuple, SrmatError> = x.iter().zip(y).map(|(a, b)| a.mul(&t, b)).collect();
                match prod {
                    Ok(p) => s.flatten(&p),
                    Err(e) => {
                        err = Some(e);
                        vec![0; s.flat_dim()]
                    }
                }
            },
            Provenance::Derived("right-scaled".into()),
        );
        match err {
            Some(e) => Err(e.into()),
            None => Ok(out),
        }
    }

    pub fn apply_isometry(&self, iso: &Isometry) -> Result<Self, CodeError> {
        let s = self.mat_space()?.clone();
        iso.validate(&s)?;
        let images: Result<Vec<MatTuple>, SrmatError> =
            self.tuple_basis()?.iter().map(|x| iso.apply(&s, x)).collect();
        Self::from_tuples(&s, &images?, Provenance::Derived("isometric image".into()))
    }

    /// `C^v`: transposes block `i` of every codeword where `v_i` is set.
    pub fn v_adjoint(&self, v: &[bool]) -> Result<Self, CodeError> {
        let s = self.mat_space()?;
        let shapes = s.shapes().iter().zip(v).map(|(&(m, n), &f)| if f { (n, m) } else { (m, n) }).collect();
        let target = MatSpace::new(s.tower().clone(), shapes)?;
        let images: Vec<MatTuple> = self.tuple_basis()?.iter().map(|x| srmat::v_adjoint(x, v)).collect();
        Self::from_tuples(&target, &images, Provenance::Derived("adjoint".into()))
    }

    /// Image under the evaluation isomorphism onto `t` blocks of `m × m`
    /// matrices over `F_q`.
    pub fn to_matrix_ambient(&self, basis: &FqBasis) -> Result<Self, CodeError> {
        let r = self.ring()?;
        let space = MatSpace::square(r.tower().clone(), r.m(), r.t());
        let images: Vec<MatTuple> = self.quot_basis()?.iter().map(|a| r.evaluate_matrices(a, basis)).collect();
        Self::from_tuples(&space, &images, self.provenance.clone())
    }

    /// The dual under the ambient's trace form.
    pub fn dual(&self) -> Self {
        let space = self.space.orthogonal(&self.ambient.gram());
        Code { ambient: self.ambient.clone(), space, provenance: Provenance::Derived("dual".into()) }
    }

    pub fn nondegeneracy(&self) -> Result<Result<(), DegeneracyWitness>, CodeError> {
        match &self.ambient {
            Ambient::Matrix(s) => Ok(srmat::nondegeneracy(s, &self.tuple_basis()?)),
            Ambient::Quotient(r) => {
                let m = self.to_matrix_ambient(&FqBasis::default_for(r.tower()))?;
                m.nondegeneracy()
            }
        }
    }

    pub fn is_nondegenerate(&self) -> Result<bool, CodeError> {
        Ok(self.nondegeneracy()?.is_ok())
    }

    /// Largest subfield `F_{p^j}` of `F_{q^m}` with `β·C ⊆ C` for all `β` in
    /// it (left scalar multiplication of coefficients). Returns `p^j`.
    pub fn subspace_linearity(&self) -> Result<u64, CodeError> {
        let r = self.ring()?;
        let t = r.tower();
        let basis = self.quot_basis()?;
        let mut best = 1;
        for d in 1..=t.degree() {
            if t.degree() % d != 0 {
                continue;
            }
            let sub = Subfield { degree: d };
            let gens = t.subfield_basis(sub);
            let closed = gens.iter().all(|&g| basis.iter().all(|c| self.contains_flat(&r.flatten(&r.scale_left(g, c)))));
            if closed {
                best = t.subfield_size(sub);
            }
        }
        Ok(best)
    }

    fn count_checked(&self, cap: u64) -> Result<u64, CodeError> {
        let count = (self.p() as u128).checked_pow(self.dim() as u32).unwrap_or(u128::MAX);
        if count > cap as u128 {
            return Err(CodeError::CapExceeded { count, cap });
        }
        Ok(count as u64)
    }

    fn weigher(&self) -> Weigher<'_> {
        match &self.ambient {
            Ambient::Quotient(r) => Weigher::Quotient(r),
            Ambient::Matrix(s) => Weigher::Matrix(s),
        }
    }

    /// Exact weight histogram by full enumeration, split across the rayon
    /// pool and merged in chunk order.
    pub fn weight_distribution(&self, cap: u64) -> Result<WeightDistribution, CodeError> {
        self.count_checked(cap)?;
        let tower = self.tower().clone();
        let native: Vec<Vec<Fe>> = self.space.rows.iter().map(|v| self.ambient.native(v)).collect();
        let weigher = self.weigher();
        let max_w = self.ambient.max_weight();
        let p = self.p();
        let dim = native.len();
        let split = split_digits(p, dim);
        let chunks = (p as u64).pow(split as u32);
        let len = native.first().map_or(0, |v| v.len());
        log::debug!("enumerating {} codewords in {chunks} chunks", (p as u128).pow(dim as u32));

        let hists: Vec<Vec<u64>> = (0..chunks)
            .into_par_iter()
            .map(|chunk| {
                let mut hist = vec![0u64; max_w + 1];
                let mut scratch = Scratch::default();
                let mut cur = vec![Fe::ZERO; len];
                let mut c = chunk;
                for i in (0..split).rev() {
                    let d = (c % p as u64) as u32;
                    c /= p as u64;
                    for _ in 0..d {
                        add_assign(&tower, &mut cur, &native[i]);
                    }
                }
                odometer(&tower, p, &native[split..], &mut cur, |x| {
                    hist[weigher.weight(&tower, x, &mut scratch)] += 1;
                    true
                });
                hist
            })
            .collect();
        let mut counts = vec![0u64; max_w + 1];
        for h in hists {
            for (c, v) in counts.iter_mut().zip(h) {
                *c += v;
            }
        }
        while counts.len() > 1 && counts.last() == Some(&0) {
            counts.pop();
        }
        let min_distance = counts.iter().enumerate().skip(1).find(|(_, &c)| c > 0).map(|(w, _)| w);
        let e = tower.e() as usize;
        let log_q_size = self.dim().is_multiple_of(e).then(|| self.dim() / e);
        let singleton_exponent = min_distance
            .and_then(|d| sorted_shape(&self.ambient.shapes()).and_then(|s| srmat::singleton_bound(&s, d).ok()));
        let msrd = singleton_exponent.map(|b| log_q_size == Some(b));
        Ok(WeightDistribution { counts, min_distance, log_q_size, singleton_exponent, msrd })
    }

    /// First codeword of weight `target` in enumeration order, as flat
    /// coordinates.
    pub fn first_of_weight(&self, target: usize, cap: u64) -> Result<Option<Vec<u32>>, CodeError> {
        self.count_checked(cap)?;
        let tower = self.tower().clone();
        let native: Vec<Vec<Fe>> = self.space.rows.iter().map(|v| self.ambient.native(v)).collect();
        let weigher = self.weigher();
        let mut scratch = Scratch::default();
        let len = native.first().map_or(0, |v| v.len());
        let mut cur = vec![Fe::ZERO; len];
        let p = self.p();
        let mut digits = vec![0u32; native.len()];
        let mut found = false;
        // A second odometer tracks digits so the hit can be rebuilt.
        odometer(&tower, p, &native, &mut cur, |x| {
            if weigher.weight(&tower, x, &mut scratch) == target {
                found = true;
                return false;
            }
            for d in digits.iter_mut().rev() {
                *d += 1;
                if *d < p {
                    break;
                }
                *d = 0;
            }
            true
        });
        if !found {
            return Ok(None);
        }
        let f = crate::linalg::PrimeField::new(p);
        let mut v = vec![0u32; self.ambient.flat_dim()];
        for (d, row) in digits.iter().zip(&self.space.rows) {
            for (o, &r) in v.iter_mut().zip(row) {
                *o = crate::linalg::FieldOps::add(&f, *o, crate::linalg::FieldOps::mul(&f, *d, r));
            }
        }
        Ok(Some(v))
    }

    /// A code equivalent to `C` that contains the identity: `C` itself if
    /// `1 ∈ C`, else `C·u^{-1}` for the first full-weight codeword `u`.
    pub fn normalize_to_identity(&self, cap: u64) -> Result<Self, CodeError> {
        if self.contains_identity() {
            return Ok(self.clone());
        }
        let full = self.ambient.max_weight();
        let u = self.first_of_weight(full, cap)?.ok_or(CodeError::NoFullWeight)?;
        let provenance = Provenance::Derived("normalized".into());
        match &self.ambient {
            Ambient::Quotient(r) => {
                let inv = r.invert(&r.unflatten(&u))?;
                Ok(self.scale_right(&inv)?.with_provenance(provenance))
            }
            Ambient::Matrix(s) => {
                if !s.is_square() {
                    return Err(CodeError::WrongAmbient("square matrix"));
                }
                let inv: Result<MatTuple, SrmatError> =
                    s.unflatten(&u).iter().map(|m| m.inverse(s.tower())).collect();
                Ok(self.scale_right_tuple(&inv?)?.with_provenance(provenance))
            }
        }
    }
}

/// Default `η`: the least element (coordinate-lexicographic) passing the
/// validity condition.
pub fn default_eta(ring: &QuotientRing, k: usize, tau: Automorphism) -> Option<Fe> {
    let t = ring.tower();
    let mut cands: Vec<Fe> = t.elements().skip(1).filter(|&e| check_eta(ring, k, e, tau).is_ok()).collect();
    cands.sort_by_key(|&a| t.lex_key(a));
    cands.first().copied()
}

/// Default `γ`: the least element whose norm is a non-square and whose trace
/// to `F_{q^{m/2}}` vanishes; falls back to the least valid element.
pub fn default_gamma(ring: &QuotientRing) -> Option<Fe> {
    let t = ring.tower();
    let half = Subfield { degree: t.degree() / 2 };
    let mut valid: Vec<Fe> = t.elements().skip(1).filter(|&g| check_gamma(ring, g).is_ok()).collect();
    valid.sort_by_key(|&a| t.lex_key(a));
    valid
        .iter()
        .copied()
        .find(|&g| t.trace(g, half).map(|x| x.is_zero()).unwrap_or(false))
        .or_else(|| valid.first().copied())
}

enum Weigher<'a> {
    Quotient(&'a QuotientRing),
    Matrix(&'a MatSpace),
}

#[derive(Default)]
struct Scratch {
    quot: WeightScratch,
    digits: Vec<u32>,
}

impl Weigher<'_> {
    #[inline]
    fn weight(&self, t: &FieldTower, x: &[Fe], s: &mut Scratch) -> usize {
        match self {
            Weigher::Quotient(r) => r.weight_with(x, &mut s.quot),
            Weigher::Matrix(space) => {
                let mut pos = 0;
                let mut w = 0;
                for &(m, n) in space.shapes() {
                    let blk = &x[pos..pos + m * n];
                    pos += m * n;
                    if t.e() == 1 {
                        s.digits.clear();
                        s.digits.extend(blk.iter().map(|a| a.0));
                        w += rank_prime_in_place(t.p(), m, n, &mut s.digits);
                    } else {
                        let rows: Vec<Vec<Fe>> = blk.chunks(n).map(|r| r.to_vec()).collect();
                        w += crate::linalg::rank(t, &rows);
                    }
                }
                w
            }
        }
    }
}

#[inline]
fn add_assign(t: &FieldTower, cur: &mut [Fe], v: &[Fe]) {
    for (c, &x) in cur.iter_mut().zip(v) {
        *c = t.add(*c, x);
    }
}

/// Number of leading digits fixed per parallel chunk.
fn split_digits(p: u32, dim: usize) -> usize {
    let mut s = 0;
    while s < dim && (p as u64).pow(s as u32) < 256 {
        s += 1;
    }
    s.min(dim)
}

/// Visits every combination of `basis` added to `cur`, last digit fastest.
/// Each step adds one basis vector per changed digit, since `p·b = 0`. Stops
/// early when `visit` returns `false`.
fn odometer(t: &FieldTower, p: u32, basis: &[Vec<Fe>], cur: &mut [Fe], mut visit: impl FnMut(&[Fe]) -> bool) {
    let mut digits = vec![0u32; basis.len()];
    loop {
        if !visit(cur) {
            return;
        }
        let mut i = basis.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            add_assign(t, cur, &basis[i]);
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
        }
    }
}
