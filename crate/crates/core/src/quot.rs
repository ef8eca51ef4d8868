//! The quotient `R/RH_Λ` of the skew polynomial ring by the central
//! `H_Λ = ∏ (x^m − λ_i)`, and its identification with `t` blocks of
//! `m × m` matrices over `F_q`.

use std::sync::Arc;

use thiserror::Error;

use crate::gf::{Fe, FieldError, FieldTower};
use crate::skew::{SkewError, SkewPoly, SkewRing};
use crate::srmat::{block_diagonal_gram, linearized_to_matrix, FqBasis, Matrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuotError {
    #[error("quot: lambda must be a nonzero element of F_q")]
    InvalidLambda,
    #[error("quot: lambdas must be distinct")]
    DuplicateLambda,
    #[error("quot: need exactly one alpha per lambda with N(alpha) = lambda")]
    BadAlpha,
    #[error("quot: element is not a unit; gcrd with H is {gcrd}")]
    NotUnit { gcrd: String },
    #[error(transparent)]
    Skew(#[from] SkewError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A residue class, always stored as its `tm` coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuotElement {
    coeffs: Vec<Fe>,
}

impl QuotElement {
    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn rep(&self) -> SkewPoly {
        SkewPoly::from_coeffs(self.coeffs.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

/// Reusable buffers for the weight computation.
#[derive(Default)]
pub struct WeightScratch {
    r0: Vec<Fe>,
    r1: Vec<Fe>,
}

#[derive(Debug)]
pub struct QuotientRing {
    skew: SkewRing,
    lambdas: Vec<Fe>,
    alphas: Vec<Fe>,
    h: SkewPoly,
    h_tail: Vec<(usize, Fe)>,
    m: usize,
    t: usize,
}

impl PartialEq for QuotientRing {
    fn eq(&self, other: &Self) -> bool {
        **self.tower() == **other.tower() && self.lambdas == other.lambdas && self.alphas == other.alphas
    }
}

impl QuotientRing {
    pub fn new(tower: Arc<FieldTower>, lambdas: Vec<Fe>, alphas: Option<Vec<Fe>>) -> Result<Self, QuotError> {
        if lambdas.is_empty() {
            return Err(QuotError::InvalidLambda);
        }
        if lambdas.iter().any(|&l| l.is_zero() || !tower.is_in_fq(l)) {
            return Err(QuotError::InvalidLambda);
        }
        for (i, a) in lambdas.iter().enumerate() {
            if lambdas[..i].contains(a) {
                return Err(QuotError::DuplicateLambda);
            }
        }
        let alphas = match alphas {
            Some(a) => {
                if a.len() != lambdas.len()
                    || a.iter().zip(&lambdas).any(|(&al, &l)| al.is_zero() || tower.norm_to_fq(al) != l)
                {
                    return Err(QuotError::BadAlpha);
                }
                a
            }
            None => default_alphas(&tower, &lambdas),
        };
        let skew = SkewRing::new(tower.clone());
        let h = skew.h_lambda(&lambdas);
        let m = tower.m() as usize;
        let t = lambdas.len();
        let h_tail =
            h.coeffs()[..t * m].iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, &c)| (k, c)).collect();
        Ok(QuotientRing { skew, lambdas, alphas, h, h_tail, m, t })
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        self.skew.tower()
    }
    pub fn skew(&self) -> &SkewRing {
        &self.skew
    }
    pub fn h(&self) -> &SkewPoly {
        &self.h
    }
    pub fn lambdas(&self) -> &[Fe] {
        &self.lambdas
    }
    pub fn alphas(&self) -> &[Fe] {
        &self.alphas
    }
    pub fn m(&self) -> usize {
        self.m
    }
    pub fn t(&self) -> usize {
        self.t
    }
    pub fn tm(&self) -> usize {
        self.t * self.m
    }

    /// Whether `Λ` is a (necessarily cyclic) subgroup of `F_q^*`.
    pub fn lambda_is_cyclic_group(&self) -> bool {
        let t = self.tower();
        self.lambdas.contains(&Fe::ONE)
            && self.lambdas.iter().all(|&a| self.lambdas.iter().all(|&b| self.lambdas.contains(&t.mul(a, b))))
    }

    pub fn zero(&self) -> QuotElement {
        QuotElement { coeffs: vec![Fe::ZERO; self.tm()] }
    }

    pub fn one(&self) -> QuotElement {
        self.constant(Fe::ONE)
    }

    pub fn constant(&self, a: Fe) -> QuotElement {
        let mut e = self.zero();
        e.coeffs[0] = a;
        e
    }

    /// The class of `a·x^i`.
    pub fn monomial(&self, a: Fe, i: usize) -> QuotElement {
        self.element(&SkewPoly::monomial(a, i))
    }

    /// The canonical representative of `f + RH_Λ`.
    pub fn element(&self, f: &SkewPoly) -> QuotElement {
        let mut buf = f.coeffs().to_vec();
        self.reduce_buf(&mut buf);
        QuotElement { coeffs: buf }
    }

    pub fn from_coeffs(&self, coeffs: Vec<Fe>) -> QuotElement {
        let mut buf = coeffs;
        self.reduce_buf(&mut buf);
        QuotElement { coeffs: buf }
    }

    fn reduce_buf(&self, buf: &mut Vec<Fe>) {
        let tm = self.tm();
        let t = self.tower();
        // H_Λ is monic with coefficients in F_q, so the leading-term step
        // needs no twist.
        for i in (tm..buf.len()).rev() {
            let c = buf[i];
            if c.is_zero() {
                continue;
            }
            let shift = i - tm;
            for &(k, hk) in &self.h_tail {
                buf[shift + k] = t.sub(buf[shift + k], t.mul(c, hk));
            }
        }
        buf.resize(tm, Fe::ZERO);
    }

    pub fn add(&self, a: &QuotElement, b: &QuotElement) -> QuotElement {
        let t = self.tower();
        QuotElement { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| t.add(x, y)).collect() }
    }

    pub fn sub(&self, a: &QuotElement, b: &QuotElement) -> QuotElement {
        let t = self.tower();
        QuotElement { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| t.sub(x, y)).collect() }
    }

    pub fn neg(&self, a: &QuotElement) -> QuotElement {
        let t = self.tower();
        QuotElement { coeffs: a.coeffs.iter().map(|&x| t.neg(x)).collect() }
    }

    pub fn mul(&self, a: &QuotElement, b: &QuotElement) -> QuotElement {
        let t = self.tower();
        let tm = self.tm();
        let mut buf = vec![Fe::ZERO; 2 * tm];
        for (i, &ai) in a.coeffs.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, &bj) in b.coeffs.iter().enumerate() {
                if !bj.is_zero() {
                    buf[i + j] = t.add(buf[i + j], t.mul(ai, t.theta_pow(bj, i)));
                }
            }
        }
        self.reduce_buf(&mut buf);
        QuotElement { coeffs: buf }
    }

    pub fn scale_left(&self, c: Fe, a: &QuotElement) -> QuotElement {
        let t = self.tower();
        QuotElement { coeffs: a.coeffs.iter().map(|&x| t.mul(c, x)).collect() }
    }

    /// `wt_Λ(a) = tm − deg gcrd(a, H_Λ)`; the zero class has weight 0.
    pub fn weight(&self, a: &QuotElement) -> usize {
        self.weight_with(a.coeffs(), &mut WeightScratch::default())
    }

    pub fn weight_with(&self, coeffs: &[Fe], s: &mut WeightScratch) -> usize {
        let d = self
            .skew
            .gcrd_degree(coeffs, self.h.coeffs(), &mut s.r0, &mut s.r1)
            .expect("H is nonzero");
        self.tm() - d
    }

    pub fn is_unit(&self, a: &QuotElement) -> bool {
        self.weight(a) == self.tm()
    }

    pub fn invert(&self, a: &QuotElement) -> Result<QuotElement, QuotError> {
        let (d, s, _) = self.skew.extended_gcrd(&a.rep(), &self.h);
        if d != SkewPoly::one() {
            return Err(QuotError::NotUnit { gcrd: self.skew.to_text(&d) });
        }
        Ok(self.element(&s))
    }

    /// Block `i` is the matrix in `B` of `β ↦ Σ_j a_j N_θ^j(α_i) θ^j(β)`.
    pub fn evaluate_matrices(&self, a: &QuotElement, basis: &FqBasis) -> Vec<Matrix> {
        let t = self.tower();
        self.alphas
            .iter()
            .map(|&alpha| {
                let mut norm = Fe::ONE;
                let twisted: Vec<Fe> = a
                    .coeffs
                    .iter()
                    .enumerate()
                    .map(|(j, &c)| {
                        let v = t.mul(c, norm);
                        norm = t.mul(norm, t.theta_pow(alpha, j));
                        v
                    })
                    .collect();
                linearized_to_matrix(t, &twisted, basis)
            })
            .collect()
    }

    /// `⟨f, g⟩_Λ = Tr_{q^m/p}(Σ f_i g_i)`, returned in `F_p`.
    pub fn dual_pair(&self, a: &QuotElement, b: &QuotElement) -> u32 {
        let t = self.tower();
        let s = a.coeffs.iter().zip(&b.coeffs).fold(Fe::ZERO, |acc, (&x, &y)| t.add(acc, t.mul(x, y)));
        let tr = t.trace(s, t.prime_field()).expect("F_p is a subfield");
        t.as_prime(tr).expect("trace lies in F_p")
    }

    /// Dimension of the ring over `F_p`.
    pub fn flat_dim(&self) -> usize {
        self.tm() * self.tower().degree() as usize
    }

    pub fn flatten(&self, a: &QuotElement) -> Vec<u32> {
        let t = self.tower();
        a.coeffs.iter().flat_map(|&c| t.coords(c)).collect()
    }

    pub fn unflatten(&self, v: &[u32]) -> QuotElement {
        let t = self.tower();
        let n = t.degree() as usize;
        QuotElement { coeffs: v.chunks(n).map(|c| t.from_coords(c).expect("digits below p")).collect() }
    }

    /// Gram matrix of `⟨·,·⟩_Λ` on flattened coordinates.
    pub fn gram(&self) -> Vec<Vec<u32>> {
        let t = self.tower();
        let basis = t.fp_basis();
        let local: Vec<Vec<u32>> = basis
            .iter()
            .map(|&a| {
                basis
                    .iter()
                    .map(|&b| {
                        let tr = t.trace(t.mul(a, b), t.prime_field()).expect("F_p is a subfield");
                        t.as_prime(tr).expect("trace lies in F_p")
                    })
                    .collect()
            })
            .collect();
        block_diagonal_gram(&local, self.tm())
    }
}

/// For each `λ`, the least element (coordinate-lexicographic) of norm `λ`.
pub fn default_alphas(t: &FieldTower, lambdas: &[Fe]) -> Vec<Fe> {
    let mut best: Vec<Option<Fe>> = vec![None; lambdas.len()];
    for a in t.elements().skip(1) {
        let n = t.norm_to_fq(a);
        if let Some(i) = lambdas.iter().position(|&l| l == n) {
            if best[i].is_none_or(|b| t.lex_key(a) < t.lex_key(b)) {
                best[i] = Some(a);
            }
        }
    }
    best.into_iter().map(|b| b.expect("the norm map onto F_q^* is surjective")).collect()
}
