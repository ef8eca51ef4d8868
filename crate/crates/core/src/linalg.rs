//! Exact Gaussian elimination over a field given by context.
//!
//! Matrices are plain `Vec<Vec<E>>` in row-major order. The tower itself is a
//! field context, so matrices over `F_q` are handled by tower arithmetic;
//! rank and kernels of an `F_q` matrix do not change when computed in the
//! larger field, and elimination never leaves `F_q`.

use std::fmt::Debug;

use crate::gf::{Fe, FieldTower};

pub trait FieldOps {
    type E: Copy + Eq + Debug + Send + Sync;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn add(&self, a: Self::E, b: Self::E) -> Self::E;
    fn sub(&self, a: Self::E, b: Self::E) -> Self::E;
    fn mul(&self, a: Self::E, b: Self::E) -> Self::E;
    fn neg(&self, a: Self::E) -> Self::E;
    /// Inverse of a nonzero element.
    fn inv(&self, a: Self::E) -> Self::E;
    fn is_zero(&self, a: Self::E) -> bool;
}

/// `F_p` on the integers `0..p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    pub p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Self {
        PrimeField { p }
    }
}

impl FieldOps for PrimeField {
    type E = u32;
    #[inline]
    fn zero(&self) -> u32 {
        0
    }
    #[inline]
    fn one(&self) -> u32 {
        1
    }
    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }
    #[inline]
    fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: u32) -> u32 {
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut s0, mut s1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1, "inverse of zero in F_p");
        s0.rem_euclid(self.p as i64) as u32
    }
    #[inline]
    fn is_zero(&self, a: u32) -> bool {
        a == 0
    }
}

impl FieldOps for FieldTower {
    type E = Fe;
    #[inline]
    fn zero(&self) -> Fe {
        Fe::ZERO
    }
    #[inline]
    fn one(&self) -> Fe {
        Fe::ONE
    }
    #[inline]
    fn add(&self, a: Fe, b: Fe) -> Fe {
        FieldTower::add(self, a, b)
    }
    #[inline]
    fn sub(&self, a: Fe, b: Fe) -> Fe {
        FieldTower::sub(self, a, b)
    }
    #[inline]
    fn mul(&self, a: Fe, b: Fe) -> Fe {
        FieldTower::mul(self, a, b)
    }
    #[inline]
    fn neg(&self, a: Fe) -> Fe {
        FieldTower::neg(self, a)
    }
    #[inline]
    fn inv(&self, a: Fe) -> Fe {
        self.inv_nonzero(a)
    }
    #[inline]
    fn is_zero(&self, a: Fe) -> bool {
        a.is_zero()
    }
}

/// Reduces `rows` to reduced row echelon form in place, dropping zero rows.
/// Returns the pivot column of each remaining row.
pub fn rref<F: FieldOps>(f: &F, rows: &mut Vec<Vec<F::E>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !f.is_zero(rows[i][c])) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = f.inv(rows[r][c]);
        if inv != f.one() {
            for x in rows[r][c..].iter_mut() {
                *x = f.mul(*x, inv);
            }
        }
        let (head, tail) = rows.split_at_mut(r);
        let (pivot_row, rest) = tail.split_first_mut().expect("row r exists");
        for other in head.iter_mut().chain(rest.iter_mut()) {
            let factor = other[c];
            if f.is_zero(factor) {
                continue;
            }
            for (x, &y) in other[c..].iter_mut().zip(pivot_row[c..].iter()) {
                if !f.is_zero(y) {
                    *x = f.sub(*x, f.mul(factor, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank<F: FieldOps>(f: &F, rows: &[Vec<F::E>]) -> usize {
    let mut m = rows.to_vec();
    rref(f, &mut m).len()
}

/// Basis of the right kernel `{x : A x = 0}` of an `r × ncols` matrix.
pub fn kernel<F: FieldOps>(f: &F, rows: &[Vec<F::E>], ncols: usize) -> Vec<Vec<F::E>> {
    let mut m = rows.to_vec();
    let pivots = rref(f, &mut m);
    let mut is_pivot = vec![false; ncols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut out = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![f.zero(); ncols];
        v[free] = f.one();
        for (row, &pc) in m.iter().zip(pivots.iter()) {
            v[pc] = f.neg(row[free]);
        }
        out.push(v);
    }
    out
}

pub fn transpose<E: Copy>(rows: &[Vec<E>], ncols: usize) -> Vec<Vec<E>> {
    (0..ncols).map(|c| rows.iter().map(|r| r[c]).collect()).collect()
}

/// Basis of the left kernel `{x : x A = 0}`.
pub fn left_kernel<F: FieldOps>(f: &F, rows: &[Vec<F::E>], ncols: usize) -> Vec<Vec<F::E>> {
    let t = transpose(rows, ncols);
    kernel(f, &t, rows.len())
}

pub fn mat_mul<F: FieldOps>(f: &F, a: &[Vec<F::E>], b: &[Vec<F::E>]) -> Vec<Vec<F::E>> {
    let ncols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            let mut out = vec![f.zero(); ncols];
            for (k, &x) in row.iter().enumerate() {
                if f.is_zero(x) {
                    continue;
                }
                for (o, &y) in out.iter_mut().zip(b[k].iter()) {
                    *o = f.add(*o, f.mul(x, y));
                }
            }
            out
        })
        .collect()
}

pub fn inverse<F: FieldOps>(f: &F, a: &[Vec<F::E>]) -> Option<Vec<Vec<F::E>>> {
    let n = a.len();
    let mut aug: Vec<Vec<F::E>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { f.one() } else { f.zero() }));
            r
        })
        .collect();
    let pivots = rref(f, &mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// An `F_p`-subspace of `F_p^dim`, kept as an RREF basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpSpace {
    pub p: u32,
    pub dim_ambient: usize,
    pub rows: Vec<Vec<u32>>,
    pub pivots: Vec<usize>,
}

impl FpSpace {
    pub fn span(p: u32, dim_ambient: usize, mut rows: Vec<Vec<u32>>) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == dim_ambient));
        let pivots = rref(&PrimeField::new(p), &mut rows);
        FpSpace { p, dim_ambient, rows, pivots }
    }

    pub fn zero(p: u32, dim_ambient: usize) -> Self {
        FpSpace { p, dim_ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(p: u32, dim_ambient: usize) -> Self {
        let rows = (0..dim_ambient)
            .map(|i| {
                let mut v = vec![0; dim_ambient];
                v[i] = 1;
                v
            })
            .collect();
        FpSpace { p, dim_ambient, rows, pivots: (0..dim_ambient).collect() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// `v` minus its component along the pivots; zero iff `v` is in the span.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let f = PrimeField::new(self.p);
        let mut out = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(self.pivots.iter()) {
            let c = out[pc];
            if c == 0 {
                continue;
            }
            for (o, &r) in out.iter_mut().zip(row.iter()) {
                if r != 0 {
                    *o = f.sub(*o, f.mul(c, r));
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Coordinates of a member of the span in the RREF basis.
    pub fn coords(&self, v: &[u32]) -> Vec<u32> {
        self.pivots.iter().map(|&c| v[c]).collect()
    }

    pub fn non_pivots(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.dim_ambient];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        (0..self.dim_ambient).filter(|&c| !is_pivot[c]).collect()
    }

    pub fn contains_space(&self, other: &FpSpace) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    pub fn sum(&self, other: &FpSpace) -> FpSpace {
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        FpSpace::span(self.p, self.dim_ambient, rows)
    }

    pub fn intersect(&self, other: &FpSpace) -> FpSpace {
        // x·A = y·B with A, B the two bases: kernel of the stacked [A; -B].
        let f = PrimeField::new(self.p);
        let mut stacked = self.rows.clone();
        stacked.extend(other.rows.iter().map(|r| r.iter().map(|&x| f.neg(x)).collect()));
        let ker = left_kernel(&f, &stacked, self.dim_ambient);
        let k = self.rows.len();
        let vectors = ker
            .iter()
            .map(|coef| {
                let mut v = vec![0u32; self.dim_ambient];
                for (c, row) in coef[..k].iter().zip(self.rows.iter()) {
                    if *c == 0 {
                        continue;
                    }
                    for (o, &r) in v.iter_mut().zip(row.iter()) {
                        *o = f.add(*o, f.mul(*c, r));
                    }
                }
                v
            })
            .collect();
        FpSpace::span(self.p, self.dim_ambient, vectors)
    }

    /// Orthogonal complement under `⟨x, y⟩ = x · G · yᵀ`.
    pub fn orthogonal(&self, gram: &[Vec<u32>]) -> FpSpace {
        let f = PrimeField::new(self.p);
        let bg = mat_mul(&f, &self.rows, gram);
        let rows = if bg.is_empty() {
            FpSpace::full(self.p, self.dim_ambient).rows
        } else {
            kernel(&f, &bg, self.dim_ambient)
        };
        FpSpace::span(self.p, self.dim_ambient, rows)
    }
}
