//! Exact arithmetic over `F_q = F_{p^e}`, the polynomial ring `A = F_q[θ]`
//! and its fraction field `K = F_q(θ)`, plus the combinatorial coefficients
//! (Lucas binomials and the Δ coefficients of the q-shuffle recursions).
//!
//! Field elements are indices `0..q` into lookup tables; the index encodes
//! the coordinate vector with respect to the power basis of the modulus,
//! base `p`, least significant digit first. All arithmetic goes through a
//! shared [`Fq`] handle, so elements themselves stay `Copy`.

use crate::{Error, Result};
use std::fmt;
use std::sync::Arc;

/// Largest supported field size. The enumerations in this crate are meant
/// for desk-scale verification; tables are quadratic in `q`.
pub const MAX_Q: u64 = 512;

/// A field element, as an index into the tables of its [`Fq`].
pub type FqElem = u16;

struct FqInner {
    p: u32,
    e: u32,
    q: u64,
    /// Monic irreducible modulus over `F_p`, ascending coefficients,
    /// length `e + 1`, last entry 1.
    modulus: Vec<u16>,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

/// The finite field `F_q` with `q = p^e`, backed by lookup tables.
///
/// The modulus is the lexicographically smallest monic irreducible of
/// degree `e` over `F_p` (coefficients compared low to high), so two
/// handles with equal `(p, e)` are interchangeable.
#[derive(Clone)]
pub struct Fq(Arc<FqInner>);

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fq({}^{})", self.0.p, self.0.e)
    }
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.e == other.0.e
    }
}
impl Eq for Fq {}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Multiply two polynomials over `F_p` (dense, ascending) modulo `modulus`.
fn fp_poly_mulmod(a: &[u16], b: &[u16], modulus: &[u16], p: u32) -> Vec<u16> {
    let e = modulus.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] += ai as u64 * bj as u64;
        }
    }
    for c in prod.iter_mut() {
        *c %= p as u64;
    }
    // Reduce: modulus is monic.
    for i in (e..prod.len()).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        prod[i] = 0;
        for (k, &mk) in modulus.iter().take(e).enumerate() {
            let idx = i - e + k;
            prod[idx] = (prod[idx] + c * (p as u64 - mk as u64)) % p as u64;
        }
    }
    prod.truncate(e.max(1));
    prod.iter().map(|&c| c as u16).collect()
}

fn digits_base_p(mut idx: u64, p: u32, e: u32) -> Vec<u16> {
    let mut d = Vec::with_capacity(e as usize);
    for _ in 0..e {
        d.push((idx % p as u64) as u16);
        idx /= p as u64;
    }
    d
}

fn index_from_digits(digits: &[u16], p: u32) -> u64 {
    let mut idx = 0u64;
    for &d in digits.iter().rev() {
        idx = idx * p as u64 + d as u64;
    }
    idx
}

/// Trial-divide a monic polynomial over `F_p` by every monic polynomial of
/// degree `1..=deg/2`.
fn fp_poly_irreducible(poly: &[u16], p: u32) -> bool {
    let deg = poly.len() - 1;
    if deg == 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut div = digits_base_p(idx, p, d as u32);
            div.push(1);
            if fp_poly_rem_is_zero(poly, &div, p) {
                return false;
            }
        }
    }
    true
}

fn fp_poly_rem_is_zero(num: &[u16], den: &[u16], p: u32) -> bool {
    let mut rem: Vec<u64> = num.iter().map(|&c| c as u64).collect();
    let dd = den.len() - 1;
    while rem.len() > dd {
        let lead = rem[rem.len() - 1];
        if lead != 0 {
            let off = rem.len() - 1 - dd;
            for (k, &mk) in den.iter().enumerate() {
                rem[off + k] = (rem[off + k] + lead * (p as u64 - mk as u64)) % p as u64;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c == 0)
}

impl Fq {
    /// Build `F_{p^e}` with the lexicographically smallest monic
    /// irreducible modulus of degree `e` over `F_p`.
    pub fn new(p: u32, e: u32) -> Result<Fq> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if e == 0 {
            return Err(Error::InvalidArgument("extension degree must be >= 1".into()));
        }
        let q = (p as u64).checked_pow(e).ok_or(Error::FieldTooLarge(u64::MAX, MAX_Q))?;
        if q > MAX_Q {
            return Err(Error::FieldTooLarge(q, MAX_Q));
        }
        let modulus = {
            let count = (p as u64).pow(e);
            let mut found = None;
            for idx in 0..count {
                let mut cand = digits_base_p(idx, p, e);
                cand.push(1);
                if fp_poly_irreducible(&cand, p) {
                    found = Some(cand);
                    break;
                }
            }
            found.expect("an irreducible polynomial of every degree exists")
        };

        let qs = q as usize;
        let mut add = vec![0u16; qs * qs];
        let mut mul = vec![0u16; qs * qs];
        let mut neg = vec![0u16; qs];
        let mut inv = vec![0u16; qs];
        for a in 0..qs {
            let da = digits_base_p(a as u64, p, e);
            let mut dneg = da.clone();
            for c in dneg.iter_mut() {
                *c = ((p as u64 - *c as u64) % p as u64) as u16;
            }
            neg[a] = index_from_digits(&dneg, p) as u16;
            for b in a..qs {
                let db = digits_base_p(b as u64, p, e);
                let mut dsum = da.clone();
                for (c, &x) in dsum.iter_mut().zip(db.iter()) {
                    *c = ((*c as u64 + x as u64) % p as u64) as u16;
                }
                let s = index_from_digits(&dsum, p) as u16;
                add[a * qs + b] = s;
                add[b * qs + a] = s;
                let prod = fp_poly_mulmod(&da, &db, &modulus, p);
                let m = index_from_digits(&prod, p) as u16;
                mul[a * qs + b] = m;
                mul[b * qs + a] = m;
            }
        }
        for a in 1..qs {
            if inv[a] != 0 {
                continue;
            }
            for b in 1..qs {
                if mul[a * qs + b] == 1 {
                    inv[a] = b as u16;
                    inv[b] = a as u16;
                    break;
                }
            }
            debug_assert!(inv[a] != 0, "every nonzero element has an inverse");
        }

        Ok(Fq(Arc::new(FqInner { p, e, q, modulus, add, mul, neg, inv })))
    }

    /// `F_q` described by its size; `q` must be a prime power.
    pub fn from_order(q: u64) -> Result<Fq> {
        let (p, e) = factor_prime_power(q)?;
        Fq::new(p, e)
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }
    pub fn extension_degree(&self) -> u32 {
        self.0.e
    }
    pub fn order(&self) -> u64 {
        self.0.q
    }
    /// Modulus coefficients over `F_p`, ascending, length `e + 1`.
    pub fn modulus(&self) -> &[u16] {
        &self.0.modulus
    }

    #[inline]
    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        self.0.add[a as usize * self.0.q as usize + b as usize]
    }
    #[inline]
    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }
    #[inline]
    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        self.0.mul[a as usize * self.0.q as usize + b as usize]
    }
    #[inline]
    pub fn neg(&self, a: FqElem) -> FqElem {
        self.0.neg[a as usize]
    }
    /// Multiplicative inverse; zero maps to zero (callers must check).
    #[inline]
    pub fn inv(&self, a: FqElem) -> FqElem {
        debug_assert!(a != 0, "inverting zero field element");
        self.0.inv[a as usize]
    }
    pub fn pow(&self, a: FqElem, mut n: u64) -> FqElem {
        let mut base = a;
        let mut acc: FqElem = 1;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// Embed a residue of `F_p` (as an integer) into the field.
    pub fn from_residue(&self, r: u64) -> FqElem {
        (r % self.0.p as u64) as FqElem
    }

    /// Coordinates of an element w.r.t. the power basis of the modulus.
    pub fn coords(&self, a: FqElem) -> Vec<u16> {
        digits_base_p(a as u64, self.0.p, self.0.e)
    }
    pub fn from_coords(&self, coords: &[u16]) -> FqElem {
        debug_assert!(coords.len() <= self.0.e as usize);
        let mut digits = coords.to_vec();
        for c in digits.iter_mut() {
            *c %= self.0.p as u16;
        }
        index_from_digits(&digits, self.0.p) as FqElem
    }

    /// The embedding of this field into `big` (an extension with the same
    /// characteristic and degree divisible by ours), as an image table.
    ///
    /// The generator maps to the smallest root of our modulus in `big`,
    /// found by scanning; deterministic and cheap at the supported sizes.
    pub fn embedding_into(&self, big: &Fq) -> Result<Vec<FqElem>> {
        if big.p() != self.p() || big.extension_degree() % self.extension_degree() != 0 {
            return Err(Error::FieldMismatch(format!(
                "no embedding of F_{} into F_{}",
                self.order(),
                big.order()
            )));
        }
        if self == big {
            return Ok((0..self.order() as FqElem).collect());
        }
        let root = (0..big.order() as u16)
            .find(|&x| {
                // Evaluate our modulus (an F_p polynomial) at x in `big`.
                let mut acc: FqElem = 0;
                for &c in self.0.modulus.iter().rev() {
                    acc = big.add(big.mul(acc, x), c);
                }
                acc == 0
            })
            .expect("the modulus splits in any extension of compatible degree");
        let mut table = Vec::with_capacity(self.order() as usize);
        for a in 0..self.order() as u16 {
            let coords = self.coords(a);
            let mut acc: FqElem = 0;
            let mut pow: FqElem = 1;
            for &c in coords.iter() {
                acc = big.add(acc, big.mul(c, pow));
                pow = big.mul(pow, root);
            }
            table.push(acc);
        }
        Ok(table)
    }
}

/// Factor `q` as `p^e` or report that it is not a prime power.
pub fn factor_prime_power(q: u64) -> Result<(u32, u32)> {
    if q < 2 {
        return Err(Error::NotPrimePower(q));
    }
    let mut p = 2u64;
    while p * p <= q {
        if q % p == 0 {
            let mut n = q;
            let mut e = 0u32;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            if n != 1 {
                return Err(Error::NotPrimePower(q));
            }
            return Ok((p as u32, e));
        }
        p += 1;
    }
    Ok((q as u32, 1))
}

// ---------------------------------------------------------------------------
// Polynomials over F_q (the ring A = F_q[θ])
// ---------------------------------------------------------------------------

/// A dense polynomial in `θ` over `F_q`, ascending coefficients.
///
/// Canonical form: no trailing zeros; the zero polynomial has an empty
/// coefficient vector and degree `None` (the distinguished `-∞` marker).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    coeffs: Vec<FqElem>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{}", c)?,
                (1, 1) => write!(f, "θ")?,
                (1, c) => write!(f, "{}*θ", c)?,
                (i, 1) => write!(f, "θ^{}", i)?,
                (i, c) => write!(f, "{}*θ^{}", c, i)?,
            }
        }
        Ok(())
    }
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }
    pub fn one() -> Poly {
        Poly { coeffs: vec![1] }
    }
    pub fn constant(c: FqElem) -> Poly {
        if c == 0 {
            Poly::zero()
        } else {
            Poly { coeffs: vec![c] }
        }
    }
    /// The monomial `c·θ^d`.
    pub fn monomial(c: FqElem, d: usize) -> Poly {
        if c == 0 {
            return Poly::zero();
        }
        let mut coeffs = vec![0; d + 1];
        coeffs[d] = c;
        Poly { coeffs }
    }
    pub fn theta() -> Poly {
        Poly::monomial(1, 1)
    }
    pub fn from_coeffs(coeffs: Vec<FqElem>) -> Poly {
        let mut p = Poly { coeffs };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }
    /// Degree; `None` is the `-∞` marker for the zero polynomial and
    /// compares below every integer.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }
    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }
    pub fn lead(&self) -> FqElem {
        *self.coeffs.last().unwrap_or(&0)
    }
    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    pub fn add(&self, other: &Poly, fq: &Fq) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![0; n];
        for (i, c) in coeffs.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            *c = fq.add(a, b);
        }
        Poly::from_coeffs(coeffs)
    }
    pub fn neg(&self, fq: &Fq) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|&c| fq.neg(c)).collect())
    }
    pub fn sub(&self, other: &Poly, fq: &Fq) -> Poly {
        self.add(&other.neg(fq), fq)
    }
    pub fn mul(&self, other: &Poly, fq: &Fq) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                coeffs[i + j] = fq.add(coeffs[i + j], fq.mul(a, b));
            }
        }
        Poly::from_coeffs(coeffs)
    }
    pub fn scale(&self, c: FqElem, fq: &Fq) -> Poly {
        if c == 0 {
            return Poly::zero();
        }
        Poly::from_coeffs(self.coeffs.iter().map(|&a| fq.mul(a, c)).collect())
    }
    pub fn pow(&self, mut n: u64, fq: &Fq) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base, fq);
            }
            base = base.mul(&base, fq);
            n >>= 1;
        }
        acc
    }

    /// Euclidean division `self = q·den + r` with `deg r < deg den`.
    pub fn divrem(&self, den: &Poly, fq: &Fq) -> (Poly, Poly) {
        assert!(!den.is_zero(), "polynomial division by zero");
        if self.coeffs.len() < den.coeffs.len() {
            return (Poly::zero(), self.clone());
        }
        let dlead_inv = fq.inv(den.lead());
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0; rem.len() - den.coeffs.len() + 1];
        for i in (den.coeffs.len() - 1..rem.len()).rev() {
            let c = rem[i];
            if c == 0 {
                continue;
            }
            let qc = fq.mul(c, dlead_inv);
            let off = i + 1 - den.coeffs.len();
            quot[off] = qc;
            for (k, &dk) in den.coeffs.iter().enumerate() {
                rem[off + k] = fq.sub(rem[off + k], fq.mul(qc, dk));
            }
        }
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Poly, fq: &Fq) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b, fq);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.scale(fq.inv(a.lead()), fq)
        }
    }

    pub fn eval(&self, x: FqElem, fq: &Fq) -> FqElem {
        let mut acc: FqElem = 0;
        for &c in self.coeffs.iter().rev() {
            acc = fq.add(fq.mul(acc, x), c);
        }
        acc
    }
}

/// All `q^d` polynomials of degree `< d` (including 0), in the counting
/// order of their coefficient vectors (constant coefficient fastest).
pub fn polys_below(d: u32, fq: &Fq) -> Vec<Poly> {
    let q = fq.order();
    let count = q.pow(d);
    let mut out = Vec::with_capacity(count as usize);
    for idx in 0..count {
        let mut coeffs = Vec::with_capacity(d as usize);
        let mut n = idx;
        for _ in 0..d {
            coeffs.push((n % q) as FqElem);
            n /= q;
        }
        out.push(Poly::from_coeffs(coeffs));
    }
    out
}

/// All `q^d` monic polynomials of degree exactly `d`; `d = 0` yields `[1]`.
pub fn monic_polys(d: u32, fq: &Fq) -> Vec<Poly> {
    polys_below(d, fq)
        .into_iter()
        .map(|low| {
            let mut coeffs = low.coeffs;
            coeffs.resize(d as usize + 1, 0);
            coeffs[d as usize] = 1;
            Poly { coeffs }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Rational functions (the field K = F_q(θ))
// ---------------------------------------------------------------------------

/// An element of `K = F_q(θ)` in canonical form: the denominator is monic
/// and coprime to the numerator; zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({})", self)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl RatFunc {
    pub fn zero() -> RatFunc {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }
    pub fn one() -> RatFunc {
        RatFunc { num: Poly::one(), den: Poly::one() }
    }
    pub fn from_poly(p: Poly) -> RatFunc {
        RatFunc { num: p, den: Poly::one() }
    }
    pub fn new(num: Poly, den: Poly, fq: &Fq) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut r = RatFunc { num, den };
        r.reduce(fq);
        Ok(r)
    }

    fn reduce(&mut self, fq: &Fq) {
        if self.num.is_zero() {
            self.den = Poly::one();
            return;
        }
        let g = self.num.gcd(&self.den, fq);
        if !g.is_one() {
            self.num = self.num.divrem(&g, fq).0;
            self.den = self.den.divrem(&g, fq).0;
        }
        let lead_inv = fq.inv(self.den.lead());
        if lead_inv != 1 {
            self.num = self.num.scale(lead_inv, fq);
            self.den = self.den.scale(lead_inv, fq);
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }
    pub fn den(&self) -> &Poly {
        &self.den
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &RatFunc, fq: &Fq) -> RatFunc {
        let num = self
            .num
            .mul(&other.den, fq)
            .add(&other.num.mul(&self.den, fq), fq);
        let den = self.den.mul(&other.den, fq);
        let mut r = RatFunc { num, den };
        r.reduce(fq);
        r
    }
    pub fn neg(&self, fq: &Fq) -> RatFunc {
        RatFunc { num: self.num.neg(fq), den: self.den.clone() }
    }
    pub fn sub(&self, other: &RatFunc, fq: &Fq) -> RatFunc {
        self.add(&other.neg(fq), fq)
    }
    pub fn mul(&self, other: &RatFunc, fq: &Fq) -> RatFunc {
        let mut r = RatFunc {
            num: self.num.mul(&other.num, fq),
            den: self.den.mul(&other.den, fq),
        };
        r.reduce(fq);
        r
    }
    pub fn scale(&self, c: FqElem, fq: &Fq) -> RatFunc {
        RatFunc { num: self.num.scale(c, fq), den: self.den.clone() }
    }
    pub fn inv(&self, fq: &Fq) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut r = RatFunc { num: self.den.clone(), den: self.num.clone() };
        let lead_inv = fq.inv(r.den.lead());
        if lead_inv != 1 {
            r.num = r.num.scale(lead_inv, fq);
            r.den = r.den.scale(lead_inv, fq);
        }
        Ok(r)
    }
    pub fn div(&self, other: &RatFunc, fq: &Fq) -> Result<RatFunc> {
        Ok(self.mul(&other.inv(fq)?, fq))
    }
    /// Integer power; negative exponents invert first.
    pub fn pow(&self, n: i64, fq: &Fq) -> Result<RatFunc> {
        let base = if n < 0 { self.inv(fq)? } else { self.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = RatFunc::one();
        let mut b = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&b, fq);
            }
            b = b.mul(&b, fq);
            k >>= 1;
        }
        Ok(acc)
    }
}

// ---------------------------------------------------------------------------
// Combinatorial coefficients
// ---------------------------------------------------------------------------

/// `C(m, n) mod p` by Lucas' theorem (digit-wise base `p`). Returns 0 when
/// `n > m`.
pub fn lucas_binom(m: u64, n: u64, p: u32) -> u32 {
    if n > m {
        return 0;
    }
    let p64 = p as u64;
    let mut m = m;
    let mut n = n;
    let mut acc = 1u64;
    while n > 0 || m > 0 {
        let md = m % p64;
        let nd = n % p64;
        if nd > md {
            return 0;
        }
        acc = acc * binom_small(md, nd, p) as u64 % p64;
        m /= p64;
        n /= p64;
    }
    acc as u32
}

/// Binomial of digits `< p`, computed via factorials mod `p`.
fn binom_small(m: u64, n: u64, p: u32) -> u32 {
    let p64 = p as u64;
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..n {
        num = num * ((m - i) % p64) % p64;
        den = den * ((i + 1) % p64) % p64;
    }
    // den is invertible: all factors are < p and nonzero.
    (num * mod_inverse(den, p64) % p64) as u32
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2) mod p.
    let mut acc = 1u64;
    let mut base = a % p;
    let mut n = p - 2;
    while n > 0 {
        if n & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        n >>= 1;
    }
    acc
}

/// `(-1)^n` as a residue mod `p`.
pub fn sign_pow(n: u64, p: u32) -> u32 {
    if n % 2 == 0 {
        1
    } else {
        (p - 1) % p
    }
}

/// The correction coefficient `Δ^{i,j}_{a,b} = (-1)^{a-1} C(j-1, a-1)
/// + (-1)^{b-1} C(j-1, b-1)` in `F_p`. Requires `i + j = a + b`.
pub fn delta(i: u64, j: u64, a: u64, b: u64, p: u32) -> Result<u32> {
    if i + j != a + b {
        return Err(Error::InvalidArgument(format!(
            "delta requires i + j = a + b, got {} + {} vs {} + {}",
            i, j, a, b
        )));
    }
    if i == 0 || j == 0 || a == 0 || b == 0 {
        return Err(Error::InvalidArgument("delta indices must be positive".into()));
    }
    let t1 = sign_pow(a - 1, p) as u64 * lucas_binom(j - 1, a - 1, p) as u64;
    let t2 = sign_pow(b - 1, p) as u64 * lucas_binom(j - 1, b - 1, p) as u64;
    Ok(((t1 + t2) % p as u64) as u32)
}

/// Coefficient of `u^k` in `(1 + u)^(-s)`, i.e. `(-1)^k C(s+k-1, k)`, mod `p`.
pub fn neg_binom(s: u64, k: u64, p: u32) -> u32 {
    if s == 0 {
        return if k == 0 { 1 } else { 0 };
    }
    (sign_pow(k, p) as u64 * lucas_binom(s + k - 1, k, p) as u64 % p as u64) as u32
}

/// One term of the partial fraction decomposition of `1/(f^a g^b)`:
///
/// `1/(f^a g^b) = Σ_{i+j=a+b, i,j>=1} 1/(f-g)^j ·
///     ( coeff_f(i,j)/f^i + coeff_g(i,j)/g^i )`
///
/// with `coeff_f = (-1)^b C(j-1, b-1)` and `coeff_g = (-1)^(j-a) C(j-1, a-1)`
/// as signed integers (callers reduce mod p).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartialFractionTerm {
    pub i: u64,
    pub j: u64,
    pub coeff_f: i128,
    pub coeff_g: i128,
}

/// The symbolic coefficient data of the decomposition above, for all
/// `i + j = a + b` with `i, j >= 1`.
pub fn partial_fraction_terms(a: u64, b: u64) -> Vec<PartialFractionTerm> {
    assert!(a >= 1 && b >= 1, "partial fractions need positive exponents");
    let sign = |n: u64| if n % 2 == 0 { 1i128 } else { -1i128 };
    let mut out = Vec::new();
    for j in 1..a + b {
        let i = a + b - j;
        let coeff_f = sign(b) * binom_exact(j - 1, b - 1);
        // (-1)^(j-a) has the parity of j + a.
        let coeff_g = sign(j + a) * binom_exact(j - 1, a - 1);
        out.push(PartialFractionTerm { i, j, coeff_f, coeff_g });
    }
    out
}

/// Exact binomial coefficient via Pascal recursion (small arguments only).
pub fn binom_exact(m: u64, n: u64) -> i128 {
    if n > m {
        return 0;
    }
    let n = n.min(m - n);
    let mut acc: i128 = 1;
    for i in 0..n {
        acc = acc * (m - i) as i128 / (i + 1) as i128;
    }
    acc
}
