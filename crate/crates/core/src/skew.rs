//! Skew polynomials `F_{q^m}[x; θ]` with `x·a = θ(a)·x`.
//!
//! Coefficients are dense and ascending. The zero polynomial has degree
//! `None`; there is no sentinel integer.

use std::sync::Arc;

use thiserror::Error;

use crate::gf::{Fe, FieldError, FieldTower};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SkewError {
    #[error("skew: division by the zero polynomial")]
    DivisionByZero,
    #[error("skew: cannot parse polynomial: {0}")]
    Parse(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SkewPoly {
    coeffs: Vec<Fe>,
}

impl SkewPoly {
    pub fn zero() -> Self {
        SkewPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        SkewPoly { coeffs: vec![Fe::ONE] }
    }

    pub fn constant(a: Fe) -> Self {
        Self::from_coeffs(vec![a])
    }

    /// `a·x^i`.
    pub fn monomial(a: Fe, i: usize) -> Self {
        let mut c = vec![Fe::ZERO; i + 1];
        c[i] = a;
        Self::from_coeffs(c)
    }

    pub fn from_coeffs(mut coeffs: Vec<Fe>) -> Self {
        trim(&mut coeffs);
        SkewPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Fe> {
        self.coeffs
    }

    /// Coefficient of `x^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).copied().unwrap_or(Fe::ZERO)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<Fe> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Some(Fe::ONE)
    }
}

#[inline]
pub(crate) fn trim(c: &mut Vec<Fe>) {
    while c.last().is_some_and(|a| a.is_zero()) {
        c.pop();
    }
}

/// The ring `F_{q^m}[x; θ]` for the `θ` of its tower.
#[derive(Clone, Debug)]
pub struct SkewRing {
    tower: Arc<FieldTower>,
}

impl SkewRing {
    pub fn new(tower: Arc<FieldTower>) -> Self {
        SkewRing { tower }
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn add(&self, a: &SkewPoly, b: &SkewPoly) -> SkewPoly {
        let t = &self.tower;
        let n = a.coeffs.len().max(b.coeffs.len());
        SkewPoly::from_coeffs((0..n).map(|i| t.add(a.coeff(i), b.coeff(i))).collect())
    }

    pub fn sub(&self, a: &SkewPoly, b: &SkewPoly) -> SkewPoly {
        let t = &self.tower;
        let n = a.coeffs.len().max(b.coeffs.len());
        SkewPoly::from_coeffs((0..n).map(|i| t.sub(a.coeff(i), b.coeff(i))).collect())
    }

    pub fn neg(&self, a: &SkewPoly) -> SkewPoly {
        SkewPoly { coeffs: a.coeffs.iter().map(|&c| self.tower.neg(c)).collect() }
    }

    /// `c·a` with the constant on the left.
    pub fn scale_left(&self, c: Fe, a: &SkewPoly) -> SkewPoly {
        SkewPoly::from_coeffs(a.coeffs.iter().map(|&x| self.tower.mul(c, x)).collect())
    }

    /// `a·c` with the constant on the right: coefficient `i` picks up `θ^i(c)`.
    pub fn scale_right(&self, a: &SkewPoly, c: Fe) -> SkewPoly {
        let t = &self.tower;
        SkewPoly::from_coeffs(
            a.coeffs.iter().enumerate().map(|(i, &x)| t.mul(x, t.theta_pow(c, i))).collect(),
        )
    }

    /// `(Σ a_i x^i)(Σ b_j x^j) = Σ a_i θ^i(b_j) x^{i+j}`.
    pub fn mul(&self, a: &SkewPoly, b: &SkewPoly) -> SkewPoly {
        if a.is_zero() || b.is_zero() {
            return SkewPoly::zero();
        }
        let t = &self.tower;
        let mut out = vec![Fe::ZERO; a.coeffs.len() + b.coeffs.len() - 1];
        for (i, &ai) in a.coeffs.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, &bj) in b.coeffs.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                out[i + j] = t.add(out[i + j], t.mul(ai, t.theta_pow(bj, i)));
            }
        }
        SkewPoly::from_coeffs(out)
    }

    /// `(q, r)` with `f = q·g + r` and `deg r < deg g`.
    pub fn right_divide(&self, f: &SkewPoly, g: &SkewPoly) -> Result<(SkewPoly, SkewPoly), SkewError> {
        let dg = g.degree().ok_or(SkewError::DivisionByZero)?;
        let t = &self.tower;
        let mut r = f.coeffs.clone();
        let mut q = vec![Fe::ZERO; r.len().saturating_sub(dg)];
        let lg = g.coeffs[dg];
        while r.len() > dg {
            let df = r.len() - 1;
            let d = df - dg;
            let c = t.mul(r[df], t.inv_nonzero(t.theta_pow(lg, d)));
            q[d] = c;
            for (j, &gj) in g.coeffs.iter().enumerate() {
                if !gj.is_zero() {
                    r[d + j] = t.sub(r[d + j], t.mul(c, t.theta_pow(gj, d)));
                }
            }
            debug_assert!(r[df].is_zero());
            trim(&mut r);
        }
        Ok((SkewPoly::from_coeffs(q), SkewPoly::from_coeffs(r)))
    }

    pub fn right_rem(&self, f: &SkewPoly, g: &SkewPoly) -> Result<SkewPoly, SkewError> {
        let dg = g.degree().ok_or(SkewError::DivisionByZero)?;
        let mut r = f.coeffs.clone();
        self.rem_in_place(&mut r, &g.coeffs[..=dg]);
        Ok(SkewPoly::from_coeffs(r))
    }

    /// Right remainder on raw buffers; `g` must be trimmed and nonzero.
    #[inline]
    pub(crate) fn rem_in_place(&self, r: &mut Vec<Fe>, g: &[Fe]) {
        let t = &self.tower;
        let dg = g.len() - 1;
        let lg = g[dg];
        trim(r);
        while r.len() > dg {
            let df = r.len() - 1;
            let d = df - dg;
            let c = t.mul(r[df], t.inv_nonzero(t.theta_pow(lg, d)));
            r[df] = Fe::ZERO;
            for (j, &gj) in g[..dg].iter().enumerate() {
                if !gj.is_zero() {
                    r[d + j] = t.sub(r[d + j], t.mul(c, t.theta_pow(gj, d)));
                }
            }
            trim(r);
        }
    }

    /// Degree of `gcrd(a, g)` for nonzero trimmed `g`, computed on scratch
    /// buffers. Returns `None` only when both inputs vanish.
    pub(crate) fn gcrd_degree(&self, a: &[Fe], g: &[Fe], r0: &mut Vec<Fe>, r1: &mut Vec<Fe>) -> Option<usize> {
        r0.clear();
        r0.extend_from_slice(g);
        r1.clear();
        r1.extend_from_slice(a);
        trim(r1);
        while !r1.is_empty() {
            self.rem_in_place(r0, r1);
            std::mem::swap(r0, r1);
        }
        r0.len().checked_sub(1)
    }

    fn make_monic(&self, f: SkewPoly) -> SkewPoly {
        match f.leading() {
            None => f,
            Some(l) => self.scale_left(self.tower.inv_nonzero(l), &f),
        }
    }

    /// Monic greatest common right divisor; `gcrd(0, 0) = 0`.
    pub fn gcrd(&self, f: &SkewPoly, g: &SkewPoly) -> SkewPoly {
        let (mut a, mut b) = (f.clone(), g.clone());
        while !b.is_zero() {
            let r = self.right_rem(&a, &b).expect("b is nonzero");
            a = b;
            b = r;
        }
        self.make_monic(a)
    }

    /// The full right Euclidean sequence: returns the monic `d` with
    /// `d = a·f + b·g` together with the final cofactor pair `(s, u)` with
    /// `s·f + u·g = 0`.
    fn euclid(&self, f: &SkewPoly, g: &SkewPoly) -> (SkewPoly, SkewPoly, SkewPoly, SkewPoly, SkewPoly) {
        let (mut r0, mut r1) = (f.clone(), g.clone());
        let (mut s0, mut s1) = (SkewPoly::one(), SkewPoly::zero());
        let (mut t0, mut t1) = (SkewPoly::zero(), SkewPoly::one());
        while !r1.is_zero() {
            let (q, r) = self.right_divide(&r0, &r1).expect("r1 is nonzero");
            let s2 = self.sub(&s0, &self.mul(&q, &s1));
            let t2 = self.sub(&t0, &self.mul(&q, &t1));
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s2);
            (t0, t1) = (t1, t2);
        }
        match r0.leading() {
            None => (r0, s0, t0, s1, t1),
            Some(l) => {
                let c = self.tower.inv_nonzero(l);
                (self.scale_left(c, &r0), self.scale_left(c, &s0), self.scale_left(c, &t0), s1, t1)
            }
        }
    }

    /// `(d, a, b)` with `d = gcrd(f, g)` monic and `d = a·f + b·g`.
    pub fn extended_gcrd(&self, f: &SkewPoly, g: &SkewPoly) -> (SkewPoly, SkewPoly, SkewPoly) {
        let (d, a, b, _, _) = self.euclid(f, g);
        (d, a, b)
    }

    /// Monic least common left multiple, read off the last Euclidean
    /// cofactor. `lclm(f, 0) = 0`.
    pub fn lclm(&self, f: &SkewPoly, g: &SkewPoly) -> SkewPoly {
        if f.is_zero() || g.is_zero() {
            return SkewPoly::zero();
        }
        let (_, _, _, s, _) = self.euclid(f, g);
        self.make_monic(self.mul(&s, f))
    }

    /// `N_θ^i(α) = α·θ(α)⋯θ^{i-1}(α)`.
    pub fn generalized_norm(&self, alpha: Fe, i: usize) -> Fe {
        let t = &self.tower;
        (0..i).fold(Fe::ONE, |acc, j| t.mul(acc, t.theta_pow(alpha, j)))
    }

    /// Multiplies coefficient `i` by `N_θ^i(α)`.
    pub fn alpha_twist(&self, f: &SkewPoly, alpha: Fe) -> SkewPoly {
        let t = &self.tower;
        let mut norm = Fe::ONE;
        let mut out = Vec::with_capacity(f.coeffs.len());
        for (i, &c) in f.coeffs.iter().enumerate() {
            out.push(t.mul(c, norm));
            norm = t.mul(norm, t.theta_pow(alpha, i));
        }
        SkewPoly::from_coeffs(out)
    }

    /// `H_Λ = ∏ (x^m − λ_i)`.
    pub fn h_lambda(&self, lambdas: &[Fe]) -> SkewPoly {
        let m = self.tower.m() as usize;
        lambdas.iter().fold(SkewPoly::one(), |acc, &l| {
            let factor = self.sub(&SkewPoly::monomial(Fe::ONE, m), &SkewPoly::constant(l));
            self.mul(&acc, &factor)
        })
    }

    pub fn is_central(&self, f: &SkewPoly) -> bool {
        let t = &self.tower;
        let x = SkewPoly::monomial(Fe::ONE, 1);
        let y = SkewPoly::constant(t.generator());
        self.mul(f, &x) == self.mul(&x, f) && self.mul(f, &y) == self.mul(&y, f)
    }

    /// The text form: ascending coefficients, each an `F_p`-coordinate tuple,
    /// e.g. `[[1],[0],[2]]`.
    pub fn to_text(&self, f: &SkewPoly) -> String {
        let rows: Vec<Vec<u32>> = f.coeffs.iter().map(|&c| self.tower.coords(c)).collect();
        serde_json::to_string(&rows).expect("integer arrays serialize")
    }

    pub fn from_text(&self, s: &str) -> Result<SkewPoly, SkewError> {
        let rows: Vec<Vec<u32>> = serde_json::from_str(s).map_err(|e| SkewError::Parse(e.to_string()))?;
        self.from_coord_rows(&rows)
    }

    pub fn from_coord_rows(&self, rows: &[Vec<u32>]) -> Result<SkewPoly, SkewError> {
        let coeffs = rows
            .iter()
            .map(|r| self.tower.from_coords(r))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SkewPoly::from_coeffs(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u32, e: u32, m: u32, j: u32) -> SkewRing {
        SkewRing::new(Arc::new(FieldTower::new(p, e, m, j).unwrap()))
    }

    #[test]
    fn commutation_rule() {
        let r = ring(2, 1, 4, 1);
        let t = r.tower().clone();
        let a = t.y();
        let x = SkewPoly::monomial(Fe::ONE, 1);
        let lhs = r.mul(&x, &SkewPoly::constant(a));
        assert_eq!(lhs, SkewPoly::monomial(t.mul(a, a), 1));
    }

    #[test]
    fn zero_has_no_degree() {
        assert_eq!(SkewPoly::zero().degree(), None);
        assert_eq!(SkewPoly::one().degree(), Some(0));
        assert_eq!(SkewPoly::from_coeffs(vec![Fe::ZERO, Fe::ZERO]).degree(), None);
    }

    #[test]
    fn h_lambda_is_central() {
        let r = ring(5, 1, 3, 1);
        let h = r.h_lambda(&[Fe(1), Fe(4)]);
        assert_eq!(h.degree(), Some(6));
        assert!(r.is_central(&h));
    }

    #[test]
    fn text_round_trip() {
        let r = ring(3, 1, 2, 1);
        let s = "[[1,0],[0,0],[2,1]]";
        let f = r.from_text(s).unwrap();
        assert_eq!(f.degree(), Some(2));
        assert_eq!(r.to_text(&f), s);
        assert_eq!(r.to_text(&SkewPoly::zero()), "[]");
        assert!(r.from_text("[[3,0]]").is_err());
    }

    #[test]
    fn lclm_of_coprime_linear_factors() {
        let r = ring(5, 1, 3, 1);
        let t = r.tower().clone();
        let f = SkewPoly::from_coeffs(vec![t.neg(Fe(2)), Fe::ONE]);
        let g = SkewPoly::from_coeffs(vec![t.neg(t.y()), Fe::ONE]);
        let l = r.lclm(&f, &g);
        assert_eq!(l.degree(), Some(2));
        assert!(r.right_rem(&l, &f).unwrap().is_zero());
        assert!(r.right_rem(&l, &g).unwrap().is_zero());
    }
}
