//! Tuples of matrices over `F_q` with the sum-rank metric.
//!
//! Matrix entries are tower elements lying in `F_q`. When flattened for
//! `F_p`-linear algebra, each entry contributes its `e` coordinates over
//! `ζ`, blocks in order, entries row-major.

use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

use crate::gf::{Fe, FieldError, FieldTower};
use crate::linalg::{self, FieldOps, FpSpace, PrimeField};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SrmatError {
    #[error("srmat: shape mismatch: {0}")]
    Shape(String),
    #[error("srmat: matrix is not invertible")]
    NotInvertible,
    #[error("srmat: basis is dependent over F_q")]
    DependentBasis,
    #[error("srmat: invalid isometry: {0}")]
    InvalidIsometry(String),
    #[error("srmat: invalid Singleton parameters: {0}")]
    InvalidBound(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Fe>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Fe::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Fe::ONE;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Fe>>) -> Result<Self, SrmatError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(SrmatError::Shape("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn to_rows(&self) -> Vec<Vec<Fe>> {
        self.data.chunks(self.cols.max(1)).take(self.rows).map(|r| r.to_vec()).collect()
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Fe {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Fe) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| a.is_zero())
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    pub fn mul(&self, t: &FieldTower, other: &Matrix) -> Result<Matrix, SrmatError> {
        if self.cols != other.rows {
            return Err(SrmatError::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let idx = r * out.cols + c;
                        out.data[idx] = t.add(out.data[idx], t.mul(a, b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, t: &FieldTower, other: &Matrix) -> Matrix {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| t.add(a, b)).collect(),
        }
    }

    pub fn sub(&self, t: &FieldTower, other: &Matrix) -> Matrix {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| t.sub(a, b)).collect(),
        }
    }

    /// Entrywise `a ↦ a^{p^h}`.
    pub fn frob(&self, t: &FieldTower, h: u32) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| t.frob(a, h)).collect() }
    }

    pub fn rank(&self, t: &FieldTower) -> usize {
        linalg::rank(t, &self.to_rows())
    }

    pub fn inverse(&self, t: &FieldTower) -> Result<Matrix, SrmatError> {
        if self.rows != self.cols {
            return Err(SrmatError::NotInvertible);
        }
        let inv = linalg::inverse(t, &self.to_rows()).ok_or(SrmatError::NotInvertible)?;
        Matrix::from_rows(inv)
    }

    pub fn random_fq<R: Rng + ?Sized>(t: &FieldTower, rows: usize, cols: usize, rng: &mut R) -> Matrix {
        Matrix { rows, cols, data: (0..rows * cols).map(|_| t.random_fq(rng)).collect() }
    }

    pub fn random_invertible<R: Rng + ?Sized>(t: &FieldTower, n: usize, rng: &mut R) -> Matrix {
        loop {
            let m = Self::random_fq(t, n, n, rng);
            if m.rank(t) == n {
                return m;
            }
        }
    }
}

/// Rank of a small matrix over `F_p` given by raw digits, on a scratch buffer.
pub(crate) fn rank_prime_in_place(p: u32, rows: usize, cols: usize, a: &mut [u32]) -> usize {
    let f = PrimeField::new(p);
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pr) = (rank..rows).find(|&r| a[r * cols + c] != 0) else {
            continue;
        };
        if pr != rank {
            for k in 0..cols {
                a.swap(pr * cols + k, rank * cols + k);
            }
        }
        let inv = f.inv(a[rank * cols + c]);
        for r in rank + 1..rows {
            let factor = a[r * cols + c];
            if factor == 0 {
                continue;
            }
            let factor = f.mul(factor, inv);
            for k in c..cols {
                let y = a[rank * cols + k];
                if y != 0 {
                    a[r * cols + k] = f.sub(a[r * cols + k], f.mul(factor, y));
                }
            }
        }
        rank += 1;
    }
    rank
}

pub type MatTuple = Vec<Matrix>;

/// The ambient `Mat(m, n, F_q) = ⊕ F_q^{m_i × n_i}`.
#[derive(Clone, Debug)]
pub struct MatSpace {
    tower: Arc<FieldTower>,
    shapes: Vec<(usize, usize)>,
}

impl PartialEq for MatSpace {
    fn eq(&self, other: &Self) -> bool {
        *self.tower == *other.tower && self.shapes == other.shapes
    }
}

impl MatSpace {
    pub fn new(tower: Arc<FieldTower>, shapes: Vec<(usize, usize)>) -> Result<Self, SrmatError> {
        if shapes.is_empty() || shapes.iter().any(|&(m, n)| m == 0 || n == 0) {
            return Err(SrmatError::Shape("empty block".into()));
        }
        Ok(MatSpace { tower, shapes })
    }

    /// `t` square blocks of size `m`.
    pub fn square(tower: Arc<FieldTower>, m: usize, t: usize) -> Self {
        MatSpace { tower, shapes: vec![(m, m); t] }
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn shapes(&self) -> &[(usize, usize)] {
        &self.shapes
    }

    pub fn t(&self) -> usize {
        self.shapes.len()
    }

    pub fn is_square(&self) -> bool {
        self.shapes.iter().all(|&(m, n)| m == n)
    }

    /// Dimension over `F_p`.
    pub fn flat_dim(&self) -> usize {
        self.shapes.iter().map(|&(m, n)| m * n).sum::<usize>() * self.tower.e() as usize
    }

    pub fn zero(&self) -> MatTuple {
        self.shapes.iter().map(|&(m, n)| Matrix::zeros(m, n)).collect()
    }

    pub fn identity(&self) -> Result<MatTuple, SrmatError> {
        if !self.is_square() {
            return Err(SrmatError::Shape("identity needs square blocks".into()));
        }
        Ok(self.shapes.iter().map(|&(m, _)| Matrix::identity(m)).collect())
    }

    pub fn check(&self, x: &[Matrix]) -> Result<(), SrmatError> {
        if x.len() != self.shapes.len()
            || x.iter().zip(&self.shapes).any(|(a, &(m, n))| a.rows != m || a.cols != n)
        {
            return Err(SrmatError::Shape("tuple does not match the ambient".into()));
        }
        if x.iter().any(|a| a.data.iter().any(|&v| !self.tower.is_in_fq(v))) {
            return Err(SrmatError::Field(FieldError::NotInSubfield));
        }
        Ok(())
    }

    pub fn flatten(&self, x: &[Matrix]) -> Vec<u32> {
        let t = &self.tower;
        let mut out = Vec::with_capacity(self.flat_dim());
        if t.e() == 1 {
            for blk in x {
                out.extend(blk.data.iter().map(|a| a.0));
            }
        } else {
            for blk in x {
                for &a in &blk.data {
                    out.extend(t.fq_coords(a).expect("entries lie in F_q"));
                }
            }
        }
        out
    }

    pub fn unflatten(&self, v: &[u32]) -> MatTuple {
        let t = &self.tower;
        let e = t.e() as usize;
        let mut pos = 0;
        self.shapes
            .iter()
            .map(|&(m, n)| {
                let data = (0..m * n)
                    .map(|_| {
                        let a = if e == 1 { Fe(v[pos]) } else { t.fq_from_coords(&v[pos..pos + e]).expect("digits") };
                        pos += e;
                        a
                    })
                    .collect();
                Matrix { rows: m, cols: n, data }
            })
            .collect()
    }

    pub fn add(&self, x: &[Matrix], y: &[Matrix]) -> MatTuple {
        x.iter().zip(y).map(|(a, b)| a.add(&self.tower, b)).collect()
    }

    pub fn sub(&self, x: &[Matrix], y: &[Matrix]) -> MatTuple {
        x.iter().zip(y).map(|(a, b)| a.sub(&self.tower, b)).collect()
    }

    /// Gram matrix of the trace form on flattened coordinates.
    pub fn gram(&self) -> Vec<Vec<u32>> {
        let t = &self.tower;
        let e = t.e() as usize;
        let zeta_basis: Vec<Fe> = (0..e)
            .map(|i| {
                let mut c = vec![0u32; e];
                c[i] = 1;
                t.fq_from_coords(&c).expect("unit digits")
            })
            .collect();
        let local: Vec<Vec<u32>> = zeta_basis
            .iter()
            .map(|&a| {
                zeta_basis
                    .iter()
                    .map(|&b| {
                        let tr = t.trace(t.mul(a, b), t.prime_field()).expect("F_p is a subfield");
                        t.as_prime(tr).expect("trace lies in F_p")
                    })
                    .collect()
            })
            .collect();
        block_diagonal_gram(&local, self.flat_dim() / e)
    }
}

/// `copies` copies of `local` down the diagonal.
pub(crate) fn block_diagonal_gram(local: &[Vec<u32>], copies: usize) -> Vec<Vec<u32>> {
    let e = local.len();
    let d = e * copies;
    let mut g = vec![vec![0u32; d]; d];
    for k in 0..copies {
        for a in 0..e {
            for b in 0..e {
                g[k * e + a][k * e + b] = local[a][b];
            }
        }
    }
    g
}

pub fn sum_rank_weight(t: &FieldTower, x: &[Matrix]) -> usize {
    x.iter().map(|m| m.rank(t)).sum()
}

/// `Σ_i Tr_{q/p}(Tr(X_i Y_iᵀ))`, returned in `F_p`.
pub fn trace_form(t: &FieldTower, x: &[Matrix], y: &[Matrix]) -> u32 {
    let mut acc = Fe::ZERO;
    for (a, b) in x.iter().zip(y) {
        for (&u, &v) in a.data.iter().zip(&b.data) {
            acc = t.add(acc, t.mul(u, v));
        }
    }
    let tr = t.trace(acc, t.prime_field()).expect("F_p is a subfield");
    t.as_prime(tr).expect("trace lies in F_p")
}

/// Transposes block `i` wherever `v_i` is set.
pub fn v_adjoint(x: &[Matrix], v: &[bool]) -> MatTuple {
    x.iter().zip(v).map(|(a, &flip)| if flip { a.transpose() } else { a.clone() }).collect()
}

/// A strong isometry: block `i` of the image is `A_i · ρ_i(X_{π(i)}) · B_i`,
/// with `ρ_i` the automorphism `a ↦ a^{p^{ρ_i}}` of `F_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isometry {
    pub perm: Vec<usize>,
    pub left: Vec<Matrix>,
    pub right: Vec<Matrix>,
    pub rho: Vec<u32>,
}

impl Isometry {
    pub fn identity(space: &MatSpace) -> Self {
        Isometry {
            perm: (0..space.t()).collect(),
            left: space.shapes.iter().map(|&(m, _)| Matrix::identity(m)).collect(),
            right: space.shapes.iter().map(|&(_, n)| Matrix::identity(n)).collect(),
            rho: vec![0; space.t()],
        }
    }

    /// Uniform choice among strong isometries, with `π` restricted to blocks
    /// of equal shape.
    pub fn random<R: Rng + ?Sized>(space: &MatSpace, rng: &mut R) -> Self {
        let t = space.t();
        let tower = &space.tower;
        let mut perm: Vec<usize> = (0..t).collect();
        let mut seen = vec![false; t];
        for i in 0..t {
            if seen[i] {
                continue;
            }
            let group: Vec<usize> = (i..t).filter(|&k| space.shapes[k] == space.shapes[i]).collect();
            let mut shuffled = group.clone();
            for a in (1..shuffled.len()).rev() {
                shuffled.swap(a, rng.random_range(0..=a));
            }
            for (&k, &s) in group.iter().zip(&shuffled) {
                seen[k] = true;
                perm[k] = s;
            }
        }
        Isometry {
            left: space.shapes.iter().map(|&(m, _)| Matrix::random_invertible(tower, m, rng)).collect(),
            right: space.shapes.iter().map(|&(_, n)| Matrix::random_invertible(tower, n, rng)).collect(),
            rho: (0..t).map(|_| rng.random_range(0..tower.e())).collect(),
            perm,
        }
    }

    pub fn validate(&self, space: &MatSpace) -> Result<(), SrmatError> {
        let t = space.t();
        let tower = &space.tower;
        if self.perm.len() != t || self.left.len() != t || self.right.len() != t || self.rho.len() != t {
            return Err(SrmatError::InvalidIsometry("wrong number of blocks".into()));
        }
        let mut seen = vec![false; t];
        for (i, &pi) in self.perm.iter().enumerate() {
            if pi >= t || seen[pi] {
                return Err(SrmatError::InvalidIsometry("not a permutation".into()));
            }
            seen[pi] = true;
            if space.shapes[pi] != space.shapes[i] {
                return Err(SrmatError::InvalidIsometry(format!("block {pi} cannot move to block {i}")));
            }
            let (m, n) = space.shapes[i];
            let (a, b) = (&self.left[i], &self.right[i]);
            if (a.rows, a.cols, b.rows, b.cols) != (m, m, n, n) || a.rank(tower) != m || b.rank(tower) != n {
                return Err(SrmatError::InvalidIsometry(format!("block {i} multipliers are not invertible")));
            }
        }
        Ok(())
    }

    pub fn apply(&self, space: &MatSpace, x: &[Matrix]) -> Result<MatTuple, SrmatError> {
        space.check(x)?;
        let t = &space.tower;
        (0..space.t())
            .map(|i| {
                let src = x[self.perm[i]].frob(t, self.rho[i]);
                self.left[i].mul(t, &src)?.mul(t, &self.right[i])
            })
            .collect()
    }

    pub fn inverse(&self, space: &MatSpace) -> Result<Isometry, SrmatError> {
        let t = &space.tower;
        let e = t.e();
        let n = space.t();
        let mut perm = vec![0; n];
        let mut left = vec![Matrix::zeros(0, 0); n];
        let mut right = vec![Matrix::zeros(0, 0); n];
        let mut rho = vec![0; n];
        for i in 0..n {
            let j = self.perm[i];
            let r = (e - self.rho[i] % e) % e;
            perm[j] = i;
            rho[j] = r;
            left[j] = self.left[i].inverse(t)?.frob(t, r);
            right[j] = self.right[i].inverse(t)?.frob(t, r);
        }
        Ok(Isometry { perm, left, right, rho })
    }
}

pub fn apply_isometry(space: &MatSpace, iso: &Isometry, x: &[Matrix]) -> Result<MatTuple, SrmatError> {
    iso.validate(space)?;
    iso.apply(space, x)
}

/// `ψ`: the block-diagonal `M × N` matrix with the blocks of `x`.
pub fn block_embed(x: &[Matrix]) -> Matrix {
    let rows: usize = x.iter().map(|a| a.rows).sum();
    let cols: usize = x.iter().map(|a| a.cols).sum();
    let mut out = Matrix::zeros(rows, cols);
    let (mut r0, mut c0) = (0, 0);
    for a in x {
        for r in 0..a.rows {
            for c in 0..a.cols {
                out.set(r0 + r, c0 + c, a.get(r, c));
            }
        }
        r0 += a.rows;
        c0 += a.cols;
    }
    out
}

/// An ordered `F_q`-basis of `F_{q^m}` with its trace-dual basis.
#[derive(Clone, Debug)]
pub struct FqBasis {
    pub elems: Vec<Fe>,
    dual: Vec<Fe>,
}

impl FqBasis {
    pub fn new(t: &FieldTower, elems: Vec<Fe>) -> Result<Self, SrmatError> {
        let m = t.m() as usize;
        if elems.len() != m {
            return Err(SrmatError::DependentBasis);
        }
        let fq = t.fq();
        let gram: Vec<Vec<Fe>> = elems
            .iter()
            .map(|&a| elems.iter().map(|&b| t.trace(t.mul(a, b), fq).expect("F_q is a subfield")).collect())
            .collect();
        let ginv = linalg::inverse(t, &gram).ok_or(SrmatError::DependentBasis)?;
        let dual = ginv
            .iter()
            .map(|row| row.iter().zip(&elems).fold(Fe::ZERO, |acc, (&g, &b)| t.add(acc, t.mul(g, b))))
            .collect();
        Ok(FqBasis { elems, dual })
    }

    pub fn default_for(t: &FieldTower) -> Self {
        Self::new(t, t.default_fq_basis()).expect("powers of y form an F_q-basis")
    }

    /// `F_q`-coordinates of `a`.
    pub fn coords(&self, t: &FieldTower, a: Fe) -> Vec<Fe> {
        let fq = t.fq();
        self.dual.iter().map(|&d| t.trace(t.mul(a, d), fq).expect("F_q is a subfield")).collect()
    }
}

/// `Ext_B(x)`: the `m × n` matrix whose column `i` holds the coordinates of
/// `x_i` in `B`.
pub fn ext_expand(t: &FieldTower, x: &[Fe], basis: &FqBasis) -> Matrix {
    let m = basis.elems.len();
    let mut out = Matrix::zeros(m, x.len());
    for (c, &a) in x.iter().enumerate() {
        for (r, v) in basis.coords(t, a).into_iter().enumerate() {
            out.set(r, c, v);
        }
    }
    out
}

/// Matrix in `B` of the `F_q`-linear map `β ↦ Σ_i c_i θ^i(β)`.
pub fn linearized_to_matrix(t: &FieldTower, coeffs: &[Fe], basis: &FqBasis) -> Matrix {
    let images: Vec<Fe> = basis
        .elems
        .iter()
        .map(|&b| {
            coeffs
                .iter()
                .enumerate()
                .fold(Fe::ZERO, |acc, (i, &c)| t.add(acc, t.mul(c, t.theta_pow(b, i))))
        })
        .collect();
    ext_expand(t, &images, basis)
}

/// Largest `log_q |C|` allowed at minimum distance `d`, for blocks sorted
/// with `m_i ≤ n_i`, `m` and `n` non-increasing.
pub fn singleton_bound(shapes: &[(usize, usize)], d: usize) -> Result<usize, SrmatError> {
    if shapes.is_empty() {
        return Err(SrmatError::InvalidBound("no blocks".into()));
    }
    if shapes.iter().any(|&(m, n)| m == 0 || m > n) {
        return Err(SrmatError::InvalidBound("every block needs 1 ≤ m_i ≤ n_i".into()));
    }
    if shapes.windows(2).any(|w| w[0].0 < w[1].0 || w[0].1 < w[1].1) {
        return Err(SrmatError::InvalidBound("blocks are not sorted".into()));
    }
    let total: usize = shapes.iter().map(|s| s.0).sum();
    if d == 0 || d > total {
        return Err(SrmatError::InvalidBound(format!("d = {d} outside 1..={total}")));
    }
    let mut rest = d - 1;
    let mut j = 0;
    while rest >= shapes[j].0 {
        rest -= shapes[j].0;
        j += 1;
    }
    let tail: usize = shapes[j..].iter().map(|&(m, n)| m * n).sum();
    Ok(tail - shapes[j].1 * rest)
}

/// Reorders and transposes blocks into the form [`singleton_bound`] expects,
/// if one exists. Transposition and reordering preserve `|C|` and distance.
pub fn sorted_shape(shapes: &[(usize, usize)]) -> Option<Vec<(usize, usize)>> {
    let mut s: Vec<(usize, usize)> = shapes.iter().map(|&(m, n)| (m.min(n), m.max(n))).collect();
    s.sort_by(|a, b| b.cmp(a));
    s.windows(2).all(|w| w[0].1 >= w[1].1).then_some(s)
}

/// Common left kernel `{v : v·X_j = 0 for all X}` of block `j` over `F_q`.
pub fn common_left_kernel(space: &MatSpace, code: &[MatTuple], j: usize) -> Vec<Vec<Fe>> {
    let t: &FieldTower = &space.tower;
    let (m, _) = space.shapes[j];
    // Rows of the m × (n·k) concatenation [X^(1)_j | X^(2)_j | …].
    let rows: Vec<Vec<Fe>> = (0..m)
        .map(|r| code.iter().flat_map(|x| (0..x[j].cols).map(move |c| x[j].get(r, c))).collect())
        .collect();
    let ncols = rows[0].len();
    if ncols == 0 {
        return linalg::kernel(t, &[], m);
    }
    linalg::left_kernel(t, &rows, ncols)
}

/// Common right kernel `{v : X_j·v = 0 for all X}` of block `j` over `F_q`.
pub fn common_right_kernel(space: &MatSpace, code: &[MatTuple], j: usize) -> Vec<Vec<Fe>> {
    let t: &FieldTower = &space.tower;
    let (_, n) = space.shapes[j];
    let rows: Vec<Vec<Fe>> = code.iter().flat_map(|x| x[j].to_rows()).collect();
    if rows.is_empty() {
        return linalg::kernel(t, &[], n);
    }
    linalg::kernel(t, &rows, n)
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub enum DegeneracyWitness {
    Left { block: usize, vector: Vec<Vec<u32>> },
    Right { block: usize, vector: Vec<Vec<u32>> },
}

/// Nondegenerate iff every block has trivial common left and right kernel.
/// On failure the first nonzero kernel vector found is returned.
pub fn nondegeneracy(space: &MatSpace, code: &[MatTuple]) -> Result<(), DegeneracyWitness> {
    let t = &space.tower;
    let enc = |v: &[Fe]| v.iter().map(|&a| t.fq_coords(a).expect("F_q entry")).collect::<Vec<_>>();
    for j in 0..space.t() {
        if let Some(v) = common_left_kernel(space, code, j).first() {
            return Err(DegeneracyWitness::Left { block: j, vector: enc(v) });
        }
        if let Some(v) = common_right_kernel(space, code, j).first() {
            return Err(DegeneracyWitness::Right { block: j, vector: enc(v) });
        }
    }
    Ok(())
}

/// Dual of an `F_p`-subspace under the trace form.
pub fn dual_space(space: &MatSpace, code: &FpSpace) -> FpSpace {
    code.orthogonal(&space.gram())
}
