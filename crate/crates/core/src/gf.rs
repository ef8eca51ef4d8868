//! The field tower `F_p ⊂ F_q ⊂ F_{q^m}`.
//!
//! One irreducible polynomial `P` of degree `n = m·e` over `F_p` defines the
//! top field; every element (including those of `F_q` and `F_p`) is a
//! coordinate vector of length `n` in the power basis `1, y, …, y^{n-1}` of
//! `F_p[y]/(P)`. Internally an element is the integer `Σ c_i p^i`, stored in
//! [`Fe`], and multiplication goes through discrete log tables.
//!
//! `F_q` is the subfield of degree `e`. Its own coordinates are taken in the
//! basis `1, ζ, …, ζ^{e-1}` where `ζ` is the least root of `modulus_q` inside
//! the top field.
//!
//! Automorphisms are identified by their `p`-power exponent `h`, i.e.
//! `τ_h(a) = a^{p^h}`, with `h` taken modulo `n`. The distinguished `θ` is
//! `y ↦ y^{q^j}`, so its exponent is `e·j`.

use std::cmp::Ordering;
use std::fmt;

use rand::Rng;
use thiserror::Error;

/// Largest field (in elements) the tower and the exhaustive routines accept.
pub const FIELD_CAP: u64 = 1 << 20;

/// Fields up to this size get a full addition table.
const ADD_TABLE_MAX: u32 = 1024;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("gf: invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("gf: modulus {0:?} is not irreducible over F_p")]
    NotIrreducible(Vec<u32>),
    #[error("gf: field of size {size} exceeds the cap of {cap} elements")]
    CapExceeded { size: u64, cap: u64 },
    #[error("gf: degree {0} does not divide the tower degree {1}")]
    NotASubfield(u32, u32),
    #[error("gf: division by zero")]
    DivisionByZero,
    #[error("gf: element is not in the requested subfield")]
    NotInSubfield,
    #[error("gf: bad coordinate vector: {0}")]
    BadCoordinates(String),
}

/// An element of a [`FieldTower`], encoded as `Σ c_i p^i`.
///
/// Elements carry no reference to their tower; every operation goes through
/// the tower that produced them.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// The subfield `F_{p^degree}` of a tower.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Subfield {
    pub degree: u32,
}

/// The automorphism `a ↦ a^{p^h}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Automorphism {
    pub h: u32,
}

pub struct FieldTower {
    p: u32,
    e: u32,
    m: u32,
    j: u32,
    n: u32,
    size: u32,
    modulus_q: Vec<u32>,
    modulus_qm: Vec<u32>,
    pow_p: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add_table: Option<Vec<u32>>,
    frob_mul: Vec<u64>,
    generator: Fe,
    zeta: Fe,
    fq_elems: Vec<Fe>,
    fq_index: Vec<u32>,
}

impl fmt::Debug for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldTower")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("m", &self.m)
            .field("theta_exponent", &self.j)
            .field("modulus_q", &self.modulus_q)
            .field("modulus_qm", &self.modulus_qm)
            .finish()
    }
}

impl PartialEq for FieldTower {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.e == other.e
            && self.m == other.m
            && self.j == other.j
            && self.modulus_q == other.modulus_q
            && self.modulus_qm == other.modulus_qm
    }
}

impl Eq for FieldTower {}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn prime_factors(mut x: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= x {
        if x.is_multiple_of(d) {
            out.push(d);
            while x.is_multiple_of(d) {
                x /= d;
            }
        }
        d += 1;
    }
    if x > 1 {
        out.push(x);
    }
    out
}

/// Dense polynomials over `F_p`, constant term first.
pub mod fp_poly {
    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    fn inv_mod(a: u32, p: u32) -> u32 {
        let (mut r0, mut r1) = (p as i64, a as i64);
        let (mut s0, mut s1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        s0.rem_euclid(p as i64) as u32
    }

    /// Remainder of `a` modulo `b` (`b` nonzero).
    pub fn rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let mut b = b.to_vec();
        trim(&mut b);
        let db = b.len() - 1;
        let lead_inv = inv_mod(b[db], p) as u64;
        while r.len() > db {
            let top = r.len() - 1;
            let c = (r[top] as u64 * lead_inv) % p as u64;
            let shift = top - db;
            for (i, &bi) in b.iter().enumerate() {
                let sub = (c * bi as u64) % p as u64;
                r[shift + i] = ((r[shift + i] as u64 + p as u64 - sub) % p as u64) as u32;
            }
            trim(&mut r);
        }
        r
    }

    /// Trial division by every monic polynomial of degree `1..=deg/2`.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let mut f = f.to_vec();
        trim(&mut f);
        if f.len() < 2 {
            return false;
        }
        let d = f.len() - 1;
        for dd in 1..=d / 2 {
            let count = (p as u64).pow(dd as u32);
            for idx in 0..count {
                let mut g = Vec::with_capacity(dd + 1);
                let mut x = idx;
                for _ in 0..dd {
                    g.push((x % p as u64) as u32);
                    x /= p as u64;
                }
                g.push(1);
                if rem(&f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    /// The least monic irreducible of degree `d`, comparing coefficient
    /// vectors lexicographically from the constant term upward.
    pub fn least_irreducible(d: usize, p: u32) -> Vec<u32> {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut f = vec![0u32; d + 1];
            let mut x = idx;
            for i in (0..d).rev() {
                f[i] = (x % p as u64) as u32;
                x /= p as u64;
            }
            f[d] = 1;
            if is_irreducible(&f, p) {
                return f;
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    /// `a·b mod f` for monic `f`, with `a`, `b` of length `deg f`.
    pub fn mulmod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
        let n = f.len() - 1;
        let p64 = p as u64;
        let mut prod = vec![0u64; 2 * n];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (k, &bk) in b.iter().enumerate() {
                prod[i + k] = (prod[i + k] + ai as u64 * bk as u64) % p64;
            }
        }
        for top in (n..2 * n).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for i in 0..n {
                let sub = c * f[i] as u64 % p64;
                let pos = top - n + i;
                prod[pos] = (prod[pos] + p64 - sub) % p64;
            }
        }
        prod[..n].iter().map(|&x| x as u32).collect()
    }
}

impl FieldTower {
    /// Builds the tower with the default moduli.
    pub fn new(p: u32, e: u32, m: u32, theta_exponent: u32) -> Result<Self, FieldError> {
        Self::with_moduli(p, e, m, theta_exponent, None, None)
    }

    pub fn with_moduli(
        p: u32,
        e: u32,
        m: u32,
        theta_exponent: u32,
        modulus_q: Option<Vec<u32>>,
        modulus_qm: Option<Vec<u32>>,
    ) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::InvalidParameters(format!("p = {p} is not prime")));
        }
        if e < 1 {
            return Err(FieldError::InvalidParameters("e must be at least 1".into()));
        }
        if m < 2 {
            return Err(FieldError::InvalidParameters("m must be at least 2".into()));
        }
        let j = theta_exponent % m;
        if gcd(j as u64, m as u64) != 1 {
            return Err(FieldError::InvalidParameters(format!(
                "theta exponent {theta_exponent} is not coprime to m = {m}"
            )));
        }
        let n = m
            .checked_mul(e)
            .ok_or_else(|| FieldError::InvalidParameters("m·e overflows".into()))?;
        let size = (p as u64).checked_pow(n).unwrap_or(u64::MAX);
        if size > FIELD_CAP {
            return Err(FieldError::CapExceeded { size, cap: FIELD_CAP });
        }
        let size = size as u32;

        let check_modulus = |f: Vec<u32>, d: u32| -> Result<Vec<u32>, FieldError> {
            if f.len() != d as usize + 1 || f[d as usize] != 1 || f.iter().any(|&c| c >= p) {
                return Err(FieldError::InvalidParameters(format!(
                    "modulus {f:?} must be monic of degree {d} with coefficients below {p}"
                )));
            }
            if !fp_poly::is_irreducible(&f, p) {
                return Err(FieldError::NotIrreducible(f));
            }
            Ok(f)
        };
        let modulus_q = match modulus_q {
            Some(f) => check_modulus(f, e)?,
            None => fp_poly::least_irreducible(e as usize, p),
        };
        let modulus_qm = match modulus_qm {
            Some(f) => check_modulus(f, n)?,
            None => fp_poly::least_irreducible(n as usize, p),
        };

        let mut pow_p = Vec::with_capacity(n as usize + 1);
        let mut acc = 1u32;
        for _ in 0..=n {
            pow_p.push(acc);
            acc = acc.wrapping_mul(p);
        }

        let order = size as u64 - 1;
        let nn = n as usize;
        let to_coords = |x: u32| -> Vec<u32> {
            let mut out = vec![0u32; nn];
            let mut x = x;
            for c in out.iter_mut() {
                *c = x % p;
                x /= p;
            }
            out
        };
        let encode = |c: &[u32]| -> u32 { c.iter().rev().fold(0u32, |acc, &d| acc * p + d) };
        let powmod = |base: &[u32], mut k: u64| -> Vec<u32> {
            let mut result = vec![0u32; nn];
            result[0] = 1;
            let mut b = base.to_vec();
            while k > 0 {
                if k & 1 == 1 {
                    result = fp_poly::mulmod(&result, &b, &modulus_qm, p);
                }
                b = fp_poly::mulmod(&b, &b, &modulus_qm, p);
                k >>= 1;
            }
            result
        };
        let factors = prime_factors(order);
        let mut one = vec![0u32; nn];
        one[0] = 1;
        let mut generator = None;
        for cand in 1..size {
            let c = to_coords(cand);
            if factors.iter().all(|&r| powmod(&c, order / r) != one) {
                generator = Some(c);
                break;
            }
        }
        let g = generator.expect("a finite field has a primitive element");

        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![0u32; size as usize];
        let mut cur = one.clone();
        for k in 0..order as usize {
            let code = encode(&cur);
            exp[k] = code;
            exp[k + order as usize] = code;
            log[code as usize] = k as u32;
            cur = fp_poly::mulmod(&cur, &g, &modulus_qm, p);
        }

        let neg: Vec<u32> = (0..size)
            .map(|x| encode(&to_coords(x).iter().map(|&d| (p - d) % p).collect::<Vec<_>>()))
            .collect();

        let frob_mul: Vec<u64> = (0..n)
            .map(|h| {
                let mut v = 1u64 % order.max(1);
                for _ in 0..h {
                    v = v * p as u64 % order;
                }
                v
            })
            .collect();

        let mut tower = FieldTower {
            p,
            e,
            m,
            j,
            n,
            size,
            modulus_q,
            modulus_qm,
            pow_p,
            exp,
            log,
            neg,
            add_table: None,
            frob_mul,
            generator: Fe(encode(&g)),
            zeta: Fe::ZERO,
            fq_elems: Vec::new(),
            fq_index: Vec::new(),
        };

        if size <= ADD_TABLE_MAX && p != 2 {
            let mut table = vec![0u32; (size * size) as usize];
            for a in 0..size {
                for b in 0..size {
                    table[(a * size + b) as usize] = tower.add_digits(a, b);
                }
            }
            tower.add_table = Some(table);
        }

        // Least root of modulus_q, in coordinate-lexicographic order.
        let zeta = if e == 1 {
            Fe::ZERO
        } else {
            let mq = tower.modulus_q.clone();
            let mut roots: Vec<Fe> = (0..size)
                .map(Fe)
                .filter(|&z| {
                    let val = mq
                        .iter()
                        .rev()
                        .fold(Fe::ZERO, |acc, &c| tower.add(tower.mul(acc, z), Fe(c)));
                    val.is_zero()
                })
                .collect();
            roots.sort_by(|a, b| tower.lex_cmp(*a, *b));
            roots[0]
        };
        tower.zeta = zeta;

        let q = (p as u64).pow(e) as u32;
        let mut fq_elems = Vec::with_capacity(q as usize);
        let mut zpow = vec![Fe::ONE; e as usize];
        for i in 1..e as usize {
            zpow[i] = tower.mul(zpow[i - 1], zeta);
        }
        for idx in 0..q {
            let mut x = idx;
            let mut acc = Fe::ZERO;
            for zp in zpow.iter() {
                let c = x % p;
                x /= p;
                acc = tower.add(acc, tower.scale(*zp, c));
            }
            fq_elems.push(acc);
        }
        let mut fq_index = vec![u32::MAX; size as usize];
        for (idx, &a) in fq_elems.iter().enumerate() {
            fq_index[a.0 as usize] = idx as u32;
        }
        debug_assert!(fq_elems.iter().all(|&a| tower.frob(a, e) == a));
        tower.fq_elems = fq_elems;
        tower.fq_index = fq_index;
        Ok(tower)
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn e(&self) -> u32 {
        self.e
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    /// The `j` of `θ(y) = y^{q^j}`, reduced modulo `m`.
    pub fn theta_exponent(&self) -> u32 {
        self.j
    }
    /// `m·e`, the degree of the top field over `F_p`.
    pub fn degree(&self) -> u32 {
        self.n
    }
    /// Number of elements of `F_{q^m}`.
    pub fn size(&self) -> u32 {
        self.size
    }
    /// Number of elements of `F_q`.
    pub fn q(&self) -> u32 {
        self.fq_elems.len() as u32
    }
    pub fn modulus_q(&self) -> &[u32] {
        &self.modulus_q
    }
    pub fn modulus_qm(&self) -> &[u32] {
        &self.modulus_qm
    }
    /// The primitive element behind the log tables.
    pub fn generator(&self) -> Fe {
        self.generator
    }
    /// The class of `y`, which generates `F_{q^m}` over every subfield.
    pub fn y(&self) -> Fe {
        Fe(self.p)
    }

    pub fn theta(&self) -> Automorphism {
        Automorphism { h: (self.e * self.j) % self.n }
    }

    pub fn fq(&self) -> Subfield {
        Subfield { degree: self.e }
    }

    pub fn prime_field(&self) -> Subfield {
        Subfield { degree: 1 }
    }

    pub fn top(&self) -> Subfield {
        Subfield { degree: self.n }
    }

    pub fn subfield(&self, degree: u32) -> Result<Subfield, FieldError> {
        if degree == 0 || !self.n.is_multiple_of(degree) {
            return Err(FieldError::NotASubfield(degree, self.n));
        }
        Ok(Subfield { degree })
    }

    pub fn subfield_size(&self, sub: Subfield) -> u64 {
        (self.p as u64).pow(sub.degree)
    }

    #[inline]
    fn add_digits(&self, mut a: u32, mut b: u32) -> u32 {
        let p = self.p;
        let mut r = 0u32;
        let mut place = 1u32;
        while a != 0 || b != 0 {
            let mut d = a % p + b % p;
            if d >= p {
                d -= p;
            }
            r += d * place;
            place = place.wrapping_mul(p);
            a /= p;
            b /= p;
        }
        r
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.p == 2 {
            return Fe(a.0 ^ b.0);
        }
        if let Some(t) = &self.add_table {
            return Fe(t[(a.0 * self.size + b.0) as usize]);
        }
        Fe(self.add_digits(a.0, b.0))
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        Fe(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    /// Multiplication by the integer `c`, read in `F_p`.
    pub fn scale(&self, a: Fe, c: u32) -> Fe {
        self.mul(a, Fe(c % self.p))
    }

    pub fn inv(&self, a: Fe) -> Result<Fe, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.inv_nonzero(a))
    }

    /// Inverse of an element the caller knows to be nonzero.
    #[inline]
    pub fn inv_nonzero(&self, a: Fe) -> Fe {
        debug_assert!(!a.is_zero());
        let order = self.size - 1;
        let l = self.log[a.0 as usize];
        Fe(self.exp[((order - l) % order) as usize])
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fe, k: u64) -> Fe {
        if k == 0 {
            return Fe::ONE;
        }
        if a.is_zero() {
            return Fe::ZERO;
        }
        let order = (self.size - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        Fe(self.exp[((l * (k % order)) % order) as usize])
    }

    /// `a^{p^h}`.
    #[inline]
    pub fn frob(&self, a: Fe, h: u32) -> Fe {
        if a.is_zero() {
            return a;
        }
        let order = (self.size - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        Fe(self.exp[((l * self.frob_mul[(h % self.n) as usize]) % order) as usize])
    }

    pub fn apply(&self, tau: Automorphism, a: Fe) -> Fe {
        self.frob(a, tau.h)
    }

    /// `θ^i(a)`.
    #[inline]
    pub fn theta_pow(&self, a: Fe, i: usize) -> Fe {
        let h = ((self.e as u64 * self.j as u64 * i as u64) % self.n as u64) as u32;
        self.frob(a, h)
    }

    /// The automorphism `θ^i` as a `p`-power exponent.
    pub fn theta_power(&self, i: i64) -> Automorphism {
        let h = (self.e as i64 * self.j as i64 * i).rem_euclid(self.n as i64) as u32;
        Automorphism { h }
    }

    pub fn compose(&self, a: Automorphism, b: Automorphism) -> Automorphism {
        Automorphism { h: (a.h + b.h) % self.n }
    }

    pub fn inverse_automorphism(&self, a: Automorphism) -> Automorphism {
        Automorphism { h: (self.n - a.h % self.n) % self.n }
    }

    /// `Fix(τ_h) = F_{p^{gcd(h, me)}}`.
    pub fn fixed_field(&self, tau: Automorphism) -> Subfield {
        Subfield { degree: gcd((tau.h % self.n) as u64, self.n as u64) as u32 }
    }

    pub fn in_subfield(&self, a: Fe, sub: Subfield) -> bool {
        self.frob(a, sub.degree) == a
    }

    /// Relative norm to `sub`: the product of the conjugates over `sub`.
    pub fn norm(&self, a: Fe, sub: Subfield) -> Result<Fe, FieldError> {
        self.subfield(sub.degree)?;
        let mut acc = Fe::ONE;
        for i in 0..self.n / sub.degree {
            acc = self.mul(acc, self.frob(a, i * sub.degree));
        }
        Ok(acc)
    }

    /// Relative trace to `sub`: the sum of the conjugates over `sub`.
    pub fn trace(&self, a: Fe, sub: Subfield) -> Result<Fe, FieldError> {
        self.subfield(sub.degree)?;
        let mut acc = Fe::ZERO;
        for i in 0..self.n / sub.degree {
            acc = self.add(acc, self.frob(a, i * sub.degree));
        }
        Ok(acc)
    }

    /// `N_{q^m/q}`, the norm down to `F_q`.
    pub fn norm_to_fq(&self, a: Fe) -> Fe {
        self.norm(a, self.fq()).expect("F_q is a subfield")
    }

    /// `F_p`-coordinates in the power basis of `y`.
    pub fn coords(&self, a: Fe) -> Vec<u32> {
        let mut x = a.0;
        (0..self.n)
            .map(|_| {
                let c = x % self.p;
                x /= self.p;
                c
            })
            .collect()
    }

    pub fn from_coords(&self, c: &[u32]) -> Result<Fe, FieldError> {
        if c.len() != self.n as usize {
            return Err(FieldError::BadCoordinates(format!(
                "expected {} coordinates, got {}",
                self.n,
                c.len()
            )));
        }
        if let Some(&bad) = c.iter().find(|&&d| d >= self.p) {
            return Err(FieldError::BadCoordinates(format!("digit {bad} is not below {}", self.p)));
        }
        Ok(Fe(c.iter().rev().fold(0u32, |acc, &d| acc * self.p + d)))
    }

    /// Digit `i` of the power-basis coordinates.
    #[inline]
    pub fn digit(&self, a: Fe, i: usize) -> u32 {
        (a.0 / self.pow_p[i]) % self.p
    }

    /// Key realising the coordinate-lexicographic order (constant term
    /// compared first).
    pub fn lex_key(&self, a: Fe) -> u64 {
        let mut x = a.0;
        let mut key = 0u64;
        for _ in 0..self.n {
            key = key * self.p as u64 + (x % self.p) as u64;
            x /= self.p;
        }
        key
    }

    pub fn lex_cmp(&self, a: Fe, b: Fe) -> Ordering {
        self.lex_key(a).cmp(&self.lex_key(b))
    }

    /// All elements, in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.size).map(Fe)
    }

    /// All elements of `F_q`, indexed by their `F_q`-coordinates.
    pub fn fq_elements(&self) -> &[Fe] {
        &self.fq_elems
    }

    pub fn is_in_fq(&self, a: Fe) -> bool {
        self.fq_index[a.0 as usize] != u32::MAX
    }

    /// Coordinates of an `F_q` element in the basis `1, ζ, …, ζ^{e-1}`.
    pub fn fq_coords(&self, a: Fe) -> Result<Vec<u32>, FieldError> {
        let idx = self.fq_index[a.0 as usize];
        if idx == u32::MAX {
            return Err(FieldError::NotInSubfield);
        }
        let mut x = idx;
        Ok((0..self.e)
            .map(|_| {
                let c = x % self.p;
                x /= self.p;
                c
            })
            .collect())
    }

    pub fn fq_from_coords(&self, c: &[u32]) -> Result<Fe, FieldError> {
        if c.len() != self.e as usize || c.iter().any(|&d| d >= self.p) {
            return Err(FieldError::BadCoordinates(format!(
                "expected {} digits below {}",
                self.e, self.p
            )));
        }
        let idx = c.iter().rev().fold(0u32, |acc, &d| acc * self.p + d);
        Ok(self.fq_elems[idx as usize])
    }

    /// Accepts either `e` coordinates over `ζ` or `m·e` over `y`.
    pub fn parse_fq_or_top(&self, c: &[u32]) -> Result<Fe, FieldError> {
        if c.len() == self.e as usize {
            self.fq_from_coords(c)
        } else {
            self.from_coords(c)
        }
    }

    /// The `F_p`-basis `1, g, …, g^{d-1}` of `F_{p^d}`, with `g` generating
    /// its multiplicative group.
    pub fn subfield_basis(&self, sub: Subfield) -> Vec<Fe> {
        let order = (self.size - 1) as u64;
        let sub_order = (self.p as u64).pow(sub.degree) - 1;
        let g = self.pow(self.generator, order / sub_order);
        let mut out = Vec::with_capacity(sub.degree as usize);
        let mut acc = Fe::ONE;
        for _ in 0..sub.degree {
            out.push(acc);
            acc = self.mul(acc, g);
        }
        out
    }

    pub fn subfield_elements(&self, sub: Subfield) -> Vec<Fe> {
        self.elements().filter(|&a| self.in_subfield(a, sub)).collect()
    }

    /// The standard `F_p`-basis of the top field: `1, y, …, y^{me-1}`.
    pub fn fp_basis(&self) -> Vec<Fe> {
        (0..self.n).map(|i| Fe(self.pow_p[i as usize])).collect()
    }

    /// The default ordered `F_q`-basis of `F_{q^m}`: `1, y, …, y^{m-1}`.
    pub fn default_fq_basis(&self) -> Vec<Fe> {
        let y = self.y();
        let mut out = Vec::with_capacity(self.m as usize);
        let mut acc = Fe::ONE;
        for _ in 0..self.m {
            out.push(acc);
            acc = self.mul(acc, y);
        }
        out
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        Fe(rng.random_range(0..self.size))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        Fe(rng.random_range(1..self.size))
    }

    pub fn random_fq<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        self.fq_elems[rng.random_range(0..self.fq_elems.len())]
    }

    /// An element of `F_p` as a plain integer.
    pub fn as_prime(&self, a: Fe) -> Option<u32> {
        (a.0 < self.p).then_some(a.0)
    }

    /// Whether `a` is a square in `sub` (caller ensures `a ∈ sub`).
    pub fn is_square_in(&self, a: Fe, sub: Subfield) -> bool {
        if a.is_zero() || self.p == 2 {
            return true;
        }
        let sub_order = (self.p as u64).pow(sub.degree) - 1;
        self.pow(a, sub_order / 2) == Fe::ONE
    }
}
