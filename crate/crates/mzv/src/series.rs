//! Truncated Puiseux/Laurent series over `F_{q^m}((θ^(-1/e)))`.
//!
//! A series is a finite window of coefficients indexed by *scaled
//! exponents*: the scaled exponent `x` stands for `θ^(-x/ram)`, so positive
//! exponents are small elements and negative exponents are large ones. The
//! valuation of a series is its smallest stored exponent, and the absolute
//! value (normalized by `|θ| = q`) is `q^(-val/ram)`.
//!
//! Every series carries `prec`, the scaled exponent up to which its digits
//! are trusted. Arithmetic propagates `prec` pessimistically (ultrametric
//! rules), and comparisons beyond the certified window are errors rather
//! than vacuous passes.

use crate::arith::{Fq, FqElem, Poly, RatFunc};
use crate::{Error, Result};
use std::fmt;
use std::sync::Arc;

struct SfInner {
    /// The base field `F_q` of the polynomial ring `A`.
    base: Fq,
    /// The coefficient field `F_{q^m}`.
    coeff: Fq,
    /// Image table of the embedding `F_q -> F_{q^m}`.
    embed_tab: Vec<FqElem>,
    /// Ramification index: exponents are integer multiples of `1/ram`.
    ram: u32,
    /// Global cutoff (scaled): terms beyond it are discarded.
    prec: i64,
}

/// Shared description of a series field `F_{q^m}((θ^(-1/ram)))` with a
/// fixed absolute precision.
#[derive(Clone)]
pub struct SeriesField(Arc<SfInner>);

impl fmt::Debug for SeriesField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "SeriesField(q={}, m={}, ram={}, prec={}/{})",
            self.0.base.order(),
            self.0.coeff.extension_degree() / self.0.base.extension_degree(),
            self.0.ram,
            self.0.prec,
            self.0.ram
        )
    }
}

impl PartialEq for SeriesField {
    fn eq(&self, other: &Self) -> bool {
        self.0.base == other.0.base
            && self.0.coeff == other.0.coeff
            && self.0.ram == other.0.ram
            && self.0.prec == other.0.prec
    }
}
impl Eq for SeriesField {}

impl SeriesField {
    /// Build a series field over `F_{q^m}` with ramification `ram` and
    /// absolute precision `prec_units` (in powers of `1/θ`).
    pub fn new(base: Fq, m: u32, ram: u32, prec_units: i64) -> Result<SeriesField> {
        Self::with_scaled_prec(base, m, ram, prec_units.saturating_mul(ram as i64))
    }

    /// As [`SeriesField::new`], with the precision given in scaled units
    /// (multiples of `1/ram`).
    pub fn with_scaled_prec(base: Fq, m: u32, ram: u32, prec_scaled: i64) -> Result<SeriesField> {
        if ram == 0 || m == 0 {
            return Err(Error::InvalidArgument("ram and m must be >= 1".into()));
        }
        if prec_scaled <= 0 {
            return Err(Error::InvalidArgument("precision must be positive".into()));
        }
        let coeff = if m == 1 {
            base.clone()
        } else {
            Fq::new(base.p(), base.extension_degree() * m)?
        };
        let embed_tab = base.embedding_into(&coeff)?;
        Ok(SeriesField(Arc::new(SfInner { base, coeff, embed_tab, ram, prec: prec_scaled })))
    }

    pub fn base_field(&self) -> &Fq {
        &self.0.base
    }
    pub fn coeff_field(&self) -> &Fq {
        &self.0.coeff
    }
    /// `q`, the order of the base field (fixes the normalization `|θ| = q`).
    pub fn base_q(&self) -> u64 {
        self.0.base.order()
    }
    pub fn ram(&self) -> u32 {
        self.0.ram
    }
    /// Global precision cutoff, scaled.
    pub fn prec(&self) -> i64 {
        self.0.prec
    }
    pub fn prec_units(&self) -> i64 {
        self.0.prec / self.0.ram as i64
    }

    /// Map an element of the base field into the coefficient field.
    pub fn embed_coeff(&self, c: FqElem) -> FqElem {
        self.0.embed_tab[c as usize]
    }

    /// A copy of this field with a different precision (same base, same
    /// ramification).
    pub fn with_prec_units(&self, prec_units: i64) -> Result<SeriesField> {
        let m = self.0.coeff.extension_degree() / self.0.base.extension_degree();
        SeriesField::new(self.0.base.clone(), m, self.0.ram, prec_units)
    }

    pub fn zero(&self) -> PuiseuxSeries {
        PuiseuxSeries { fld: self.clone(), off: 0, coeffs: Vec::new(), prec: self.0.prec }
    }
    pub fn one(&self) -> PuiseuxSeries {
        self.monomial(1, 0)
    }
    /// The monomial `c·θ^(-exp_scaled/ram)`.
    pub fn monomial(&self, c: FqElem, exp_scaled: i64) -> PuiseuxSeries {
        let mut s = self.zero();
        if c != 0 && exp_scaled <= self.0.prec {
            s.off = exp_scaled;
            s.coeffs = vec![c];
        }
        s
    }
    /// `θ^(num/den)`; `den` must divide the ramification index.
    pub fn theta_pow(&self, num: i64, den: u32) -> Result<PuiseuxSeries> {
        if den == 0 || self.0.ram % den != 0 {
            return Err(Error::RamMismatch { ram: self.0.ram, den });
        }
        Ok(self.monomial(1, -num * (self.0.ram / den) as i64))
    }

    /// Embed a polynomial of `A = F_q[θ]` (exact up to the field cutoff).
    pub fn embed_poly(&self, p: &Poly) -> PuiseuxSeries {
        let ram = self.0.ram as i64;
        let mut s = self.zero();
        if p.is_zero() {
            return s;
        }
        let deg = p.degree().unwrap() as i64;
        s.off = -deg * ram;
        s.coeffs = vec![0; (deg * ram) as usize + 1];
        for (i, &c) in p.coeffs().iter().enumerate() {
            if c != 0 {
                let slot = (deg - i as i64) * ram;
                s.coeffs[slot as usize] = self.embed_coeff(c);
            }
        }
        s.normalize();
        s
    }

    /// Embed a rational function by long division. Unlike a generic
    /// `mul`/`inv` chain, dividing exact polynomials produces every digit
    /// up to the field cutoff exactly, so the result carries full precision.
    pub fn embed(&self, r: &RatFunc) -> PuiseuxSeries {
        if r.is_zero() {
            return self.zero();
        }
        let fq = self.coeff_field().clone();
        let num = self.embed_poly(r.num());
        let den = self.embed_poly(r.den());
        let (vn, vd) = (num.off, den.off);
        let v0 = vn - vd;
        let out_len = (self.0.prec - v0 + 1).max(0) as usize;
        if out_len == 0 {
            return self.zero();
        }
        let den_arr = &den.coeffs;
        let den_lead_inv = fq.inv(den_arr[0]);
        let mut rem = vec![0 as FqElem; out_len + den_arr.len()];
        rem[..num.coeffs.len()].copy_from_slice(&num.coeffs);
        let mut out = vec![0 as FqElem; out_len];
        for k in 0..out_len {
            let qk = fq.mul(rem[k], den_lead_inv);
            if qk == 0 {
                continue;
            }
            out[k] = qk;
            for (j, &dj) in den_arr.iter().enumerate() {
                if dj != 0 {
                    rem[k + j] = fq.sub(rem[k + j], fq.mul(qk, dj));
                }
            }
        }
        let mut s =
            PuiseuxSeries { fld: self.clone(), off: v0, coeffs: out, prec: self.0.prec };
        s.normalize();
        s
    }
}

/// A truncated Puiseux series; see the module docs for conventions.
#[derive(Clone)]
pub struct PuiseuxSeries {
    fld: SeriesField,
    /// Scaled exponent of `coeffs[0]`.
    off: i64,
    /// Dense window; `coeffs[i]` is the coefficient at `off + i`. Either
    /// empty, or the first entry is nonzero.
    coeffs: Vec<FqElem>,
    /// Digits at scaled exponents `<= prec` are certified.
    prec: i64,
}

impl PuiseuxSeries {
    fn normalize(&mut self) {
        let cut = self.prec.min(self.fld.0.prec);
        self.prec = cut;
        if !self.coeffs.is_empty() {
            let max_len = (cut - self.off + 1).max(0) as usize;
            self.coeffs.truncate(max_len);
        }
        let lead_zeros = self.coeffs.iter().take_while(|&&c| c == 0).count();
        if lead_zeros > 0 {
            self.coeffs.drain(..lead_zeros);
            self.off += lead_zeros as i64;
        }
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.off = 0;
        }
    }

    pub fn field(&self) -> &SeriesField {
        &self.fld
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    /// Scaled valuation; `None` is the `+∞` marker of the zero series.
    pub fn val(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.off)
        }
    }
    /// A certified lower bound for the valuation (`prec + 1` for a series
    /// with no visible terms).
    pub fn val_floor(&self) -> i64 {
        self.val().unwrap_or(self.prec + 1)
    }
    /// Certified precision (scaled).
    pub fn prec(&self) -> i64 {
        self.prec
    }
    pub fn coeff_at(&self, exp_scaled: i64) -> FqElem {
        if self.coeffs.is_empty() {
            return 0;
        }
        let idx = exp_scaled - self.off;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            0
        } else {
            self.coeffs[idx as usize]
        }
    }
    pub fn leading_coeff(&self) -> FqElem {
        self.coeffs.first().copied().unwrap_or(0)
    }
    /// Nonzero terms as `(scaled exponent, coefficient)`, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (i64, FqElem)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(move |(i, &c)| (self.off + i as i64, c))
    }

    /// Cap the certified precision (used to record analytic tail bounds).
    pub fn with_prec(mut self, prec_scaled: i64) -> PuiseuxSeries {
        self.prec = self.prec.min(prec_scaled);
        self.normalize();
        self
    }

    fn assert_same_field(&self, other: &PuiseuxSeries) {
        assert!(self.fld == other.fld, "series fields are incompatible");
    }

    pub fn add(&self, other: &PuiseuxSeries) -> PuiseuxSeries {
        self.assert_same_field(other);
        let prec = self.prec.min(other.prec);
        if self.is_zero() && other.is_zero() {
            let mut z = self.fld.zero();
            z.prec = prec;
            return z;
        }
        let off = self.val_floor().min(other.val_floor()).min(prec);
        let len = (prec - off + 1).max(0) as usize;
        let fq = self.fld.coeff_field();
        let mut coeffs = vec![0; len];
        for (e, c) in self.terms().chain(other.terms()) {
            if e <= prec {
                let idx = (e - off) as usize;
                coeffs[idx] = fq.add(coeffs[idx], c);
            }
        }
        let mut s = PuiseuxSeries { fld: self.fld.clone(), off, coeffs, prec };
        s.normalize();
        s
    }

    pub fn neg(&self) -> PuiseuxSeries {
        let fq = self.fld.coeff_field();
        let mut s = self.clone();
        for c in s.coeffs.iter_mut() {
            *c = fq.neg(*c);
        }
        s
    }

    pub fn sub(&self, other: &PuiseuxSeries) -> PuiseuxSeries {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: FqElem) -> PuiseuxSeries {
        if c == 0 {
            return self.fld.zero();
        }
        let fq = self.fld.coeff_field();
        let mut s = self.clone();
        for x in s.coeffs.iter_mut() {
            *x = fq.mul(*x, c);
        }
        s.normalize();
        s
    }

    /// Scale by a residue of `F_p` (e.g. a shuffle coefficient).
    pub fn scale_residue(&self, r: u32) -> PuiseuxSeries {
        self.scale(self.fld.coeff_field().from_residue(r as u64))
    }

    /// Exact multiplication by the monomial `c·θ^(-exp_scaled/ram)`.
    pub fn mul_monomial(&self, c: FqElem, exp_scaled: i64) -> PuiseuxSeries {
        if c == 0 {
            return self.fld.zero();
        }
        let fq = self.fld.coeff_field();
        let mut s = self.clone();
        s.off += exp_scaled;
        s.prec = (s.prec + exp_scaled).min(self.fld.0.prec);
        if c != 1 {
            for x in s.coeffs.iter_mut() {
                *x = fq.mul(*x, c);
            }
        }
        s.normalize();
        s
    }

    pub fn mul(&self, other: &PuiseuxSeries) -> PuiseuxSeries {
        self.assert_same_field(other);
        let prec = (self.prec + other.val_floor())
            .min(other.prec + self.val_floor())
            .min(self.fld.0.prec);
        if self.is_zero() || other.is_zero() {
            let mut z = self.fld.zero();
            z.prec = prec;
            return z;
        }
        let off = self.off + other.off;
        let len = (prec - off + 1).max(0) as usize;
        let fq = self.fld.coeff_field();
        let mut coeffs = vec![0; len];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let base = i as i64 + other.off + self.off;
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let e = base + j as i64;
                if e > prec {
                    break;
                }
                let idx = (e - off) as usize;
                coeffs[idx] = fq.add(coeffs[idx], fq.mul(a, b));
            }
        }
        let mut s = PuiseuxSeries { fld: self.fld.clone(), off, coeffs, prec };
        s.normalize();
        s
    }

    /// Multiplicative inverse. Inverting an (effectively) zero series is an
    /// error carrying the valuation floor that was searched.
    pub fn inv(&self) -> Result<PuiseuxSeries> {
        if self.is_zero() {
            return Err(Error::ZeroInversion { prec_units: self.prec / self.fld.0.ram as i64 });
        }
        let v = self.off;
        let prec = (self.prec - 2 * v).min(self.fld.0.prec);
        let fq = self.fld.coeff_field();
        let lead_inv = fq.inv(self.coeffs[0]);
        let out_len = (prec + v + 1).max(0) as usize;
        if out_len == 0 {
            let mut z = self.fld.zero();
            z.prec = prec;
            return Ok(z);
        }
        let mut out = vec![0; out_len];
        out[0] = lead_inv;
        for k in 1..out_len {
            // The coefficient of x·y at relative position k must vanish.
            let mut acc: FqElem = 0;
            let jmax = k.min(self.coeffs.len() - 1);
            for j in 1..=jmax {
                let a = self.coeffs[j];
                if a == 0 {
                    continue;
                }
                acc = fq.add(acc, fq.mul(a, out[k - j]));
            }
            out[k] = fq.neg(fq.mul(acc, lead_inv));
        }
        let mut s = PuiseuxSeries { fld: self.fld.clone(), off: -v, coeffs: out, prec };
        s.normalize();
        Ok(s)
    }

    /// Integer power; negative exponents invert first.
    pub fn pow(&self, n: i64) -> Result<PuiseuxSeries> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = self.fld.one();
        let mut b = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            k >>= 1;
        }
        Ok(acc)
    }

    /// True iff all digits of `self - other` at scaled exponents
    /// `<= upto_scaled` vanish. Comparing beyond the certified precision of
    /// either side is an error.
    pub fn eq_up_to(&self, other: &PuiseuxSeries, upto_scaled: i64) -> Result<bool> {
        self.assert_same_field(other);
        let known = self.prec.min(other.prec);
        if upto_scaled > known {
            return Err(Error::PrecisionExceeded { requested: upto_scaled, known });
        }
        let lo = self.val_floor().min(other.val_floor());
        for e in lo..=upto_scaled {
            if self.coeff_at(e) != other.coeff_at(e) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// As [`eq_up_to`](Self::eq_up_to) with the bound in units of `1/θ`.
    pub fn eq_up_to_units(&self, other: &PuiseuxSeries, upto_units: i64) -> Result<bool> {
        self.eq_up_to(other, upto_units * self.fld.0.ram as i64)
    }

    /// JSON form: sorted `(exponent numerator, exponent denominator,
    /// coefficient)` triples, exponents as powers of θ.
    pub fn json_terms(&self) -> Vec<(i64, u32, u16)> {
        let ram = self.fld.0.ram as i64;
        self.terms()
            .map(|(e, c)| {
                let num = -e;
                let g = gcd_i64(num, ram);
                ((num / g), (ram / g) as u32, c)
            })
            .collect()
    }
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

impl fmt::Display for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ram = self.fld.0.ram as i64;
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let num = -e;
            if num == 0 {
                write!(f, "{}", c)?;
                continue;
            }
            if c != 1 {
                write!(f, "{}*", c)?;
            }
            let g = gcd_i64(num, ram);
            let (n, d) = (num / g, ram / g);
            if d == 1 {
                write!(f, "θ^{}", n)?;
            } else {
                write!(f, "θ^({}/{})", n, d)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        // Trailing certified-precision marker.
        let pe = self.prec + 1;
        let g = gcd_i64(pe, ram);
        let (n, d) = (-pe / g, ram / g);
        if d == 1 {
            write!(f, " + O(θ^{})", n)
        } else {
            write!(f, " + O(θ^({}/{}))", n, d)
        }
    }
}

impl fmt::Debug for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::monic_polys;
    use proptest::prelude::*;

    fn fld_q2(prec: i64) -> SeriesField {
        SeriesField::new(Fq::new(2, 1).unwrap(), 1, 1, prec).unwrap()
    }

    #[test]
    fn embed_theta_and_one() {
        let fld = fld_q2(20);
        let t = fld.embed(&RatFunc::from_poly(Poly::theta()));
        assert_eq!(t.val(), Some(-1));
        assert_eq!(t.coeff_at(-1), 1);
        let one = fld.embed(&RatFunc::one());
        assert_eq!(one.val(), Some(0));
        assert!(one.eq_up_to(&fld.one(), 20).unwrap());
    }

    #[test]
    fn embed_geometric_series() {
        // q=2: 1/(θ+1) = θ^-1 + θ^-2 + θ^-3 + ...
        let fld = fld_q2(20);
        let fq = fld.base_field().clone();
        let r = RatFunc::new(Poly::one(), Poly::from_coeffs(vec![1, 1]), &fq).unwrap();
        let s = fld.embed(&r);
        for e in 1..=20 {
            assert_eq!(s.coeff_at(e), 1, "coefficient at θ^-{e}");
        }
        // Independent oracle: partial geometric sum Σ_{k=1..15} θ^-k agrees
        // up to exponent 10.
        let mut partial = fld.zero();
        for k in 1..=15 {
            partial = partial.add(&fld.monomial(1, k));
        }
        assert!(s.eq_up_to(&partial, 10).unwrap());
        assert!(!s.eq_up_to(&partial, 20).unwrap());
    }

    #[test]
    fn inverse_law_and_zero_inversion() {
        let fld = fld_q2(30);
        let x = fld.embed(&RatFunc::from_poly(Poly::from_coeffs(vec![1, 1])));
        let prod = x.mul(&x.inv().unwrap());
        assert!(prod.eq_up_to(&fld.one(), prod.prec()).unwrap());
        assert!(matches!(fld.zero().inv(), Err(Error::ZeroInversion { .. })));
    }

    #[test]
    fn theta_root_arithmetic() {
        let fld = SeriesField::new(Fq::new(2, 1).unwrap(), 1, 2, 20).unwrap();
        let r = fld.theta_pow(1, 2).unwrap();
        assert_eq!(r.val(), Some(-1)); // -1/2 in units, scaled by ram=2
        let sq = r.mul(&r);
        let t = fld.embed(&RatFunc::from_poly(Poly::theta()));
        assert!(sq.eq_up_to(&t, sq.prec().min(t.prec())).unwrap());
        assert!(fld.theta_pow(2, 3).is_err());
        let whole = fld.theta_pow(2, 2).unwrap();
        assert!(whole.eq_up_to(&t, whole.prec().min(t.prec())).unwrap());
    }

    #[test]
    fn eq_beyond_precision_is_an_error() {
        let fld = fld_q2(10);
        let x = fld.one();
        assert!(matches!(
            x.eq_up_to(&fld.one(), 11),
            Err(Error::PrecisionExceeded { .. })
        ));
    }

    #[test]
    fn display_format() {
        let fld = fld_q2(20);
        let fq = fld.base_field().clone();
        let r = RatFunc::new(Poly::one(), Poly::from_coeffs(vec![0, 1, 1]), &fq).unwrap();
        let s = fld.embed(&r);
        let text = format!("{}", s);
        assert!(text.starts_with("θ^-2 + θ^-3"), "got {text}");
        assert!(text.ends_with("O(θ^-21)"), "got {text}");
    }

    #[test]
    fn binomial_series_matches_inverse_powers() {
        // (1 + u)^(-s) computed by inversion equals Σ neg_binom(s,k) u^k.
        use crate::arith::neg_binom;
        for (p, e) in [(2u32, 1u32), (3, 1), (2, 2)] {
            let fq = Fq::new(p, e).unwrap();
            let fld = SeriesField::new(fq.clone(), 1, 1, 25).unwrap();
            // u = θ^{-1} + θ^{-3}
            let u = fld.monomial(1, 1).add(&fld.monomial(1, 3));
            let one_plus_u = fld.one().add(&u);
            for s in 1..=6u64 {
                let lhs = one_plus_u.pow(-(s as i64)).unwrap();
                let mut rhs = fld.zero();
                let mut upow = fld.one();
                for k in 0..=25u64 {
                    let c = neg_binom(s, k, p);
                    rhs = rhs.add(&upow.scale_residue(c));
                    upow = upow.mul(&u);
                }
                assert!(lhs.eq_up_to(&rhs, 25).unwrap(), "p={p} s={s}");
            }
        }
    }

    #[test]
    fn extension_coefficients() {
        // Coefficients in F_4 over the base F_2.
        let base = Fq::new(2, 1).unwrap();
        let fld = SeriesField::new(base, 2, 1, 15).unwrap();
        assert_eq!(fld.coeff_field().order(), 4);
        let t = fld.embed(&RatFunc::from_poly(Poly::theta()));
        assert_eq!(t.coeff_at(-1), 1);
        // ω + ω = 0, ω·ω = ω+1 for the F_4 generator ω (index 2).
        let w = fld.monomial(2, 0);
        assert!(w.add(&w).is_zero());
        assert_eq!(w.mul(&w).coeff_at(0), 3);
    }

    fn arb_poly(max_deg: usize, q: u16) -> impl Strategy<Value = Poly> {
        proptest::collection::vec(0..q, 0..=max_deg).prop_map(Poly::from_coeffs)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn ultrametric_valuation((a, b) in (arb_poly(5, 3), arb_poly(5, 3))) {
            let fq = Fq::new(3, 1).unwrap();
            let fld = SeriesField::new(fq.clone(), 1, 1, 25).unwrap();
            let x = fld.embed(&RatFunc::from_poly(a));
            let y = fld.embed(&RatFunc::from_poly(b));
            let s = x.add(&y);
            if let (Some(vx), Some(vy)) = (x.val(), y.val()) {
                if let Some(vs) = s.val() {
                    prop_assert!(vs >= vx.min(vy));
                }
                if vx != vy {
                    prop_assert_eq!(s.val(), Some(vx.min(vy)));
                }
            }
        }

        #[test]
        fn multiplicativity_of_valuation((a, b) in (arb_poly(4, 3), arb_poly(4, 3))) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            let fq = Fq::new(3, 1).unwrap();
            let fld = SeriesField::new(fq.clone(), 1, 1, 25).unwrap();
            let x = fld.embed(&RatFunc::from_poly(a));
            let y = fld.embed(&RatFunc::from_poly(b));
            prop_assert_eq!(x.mul(&y).val().unwrap(), x.val().unwrap() + y.val().unwrap());
        }

        #[test]
        fn embed_is_a_ring_morphism((na, nb, da, db) in (
            arb_poly(3, 2), arb_poly(3, 2), arb_poly(3, 2), arb_poly(3, 2),
        )) {
            prop_assume!(!da.is_zero() && !db.is_zero());
            let fq = Fq::new(2, 1).unwrap();
            let fld = SeriesField::new(fq.clone(), 1, 1, 25).unwrap();
            let r = RatFunc::new(na, da, &fq).unwrap();
            let s = RatFunc::new(nb, db, &fq).unwrap();
            let lhs = fld.embed(&r.mul(&s, &fq));
            let rhs = fld.embed(&r).mul(&fld.embed(&s));
            prop_assert!(lhs.eq_up_to(&rhs, rhs.prec().min(lhs.prec())).unwrap());
            let lhs_add = fld.embed(&r.add(&s, &fq));
            let rhs_add = fld.embed(&r).add(&fld.embed(&s));
            prop_assert!(lhs_add.eq_up_to(&rhs_add, 25).unwrap());
        }

        #[test]
        fn precision_soundness_under_guard_band((a, d) in (arb_poly(4, 2), arb_poly(4, 2))) {
            prop_assume!(!d.is_zero() && !a.is_zero());
            // Recomputing a chain of operations with 10 more digits and
            // truncating reproduces the original digits bit-exactly.
            let fq = Fq::new(2, 1).unwrap();
            let r = RatFunc::new(a, d, &fq).unwrap();
            let run = |prec: i64| {
                let fld = SeriesField::new(fq.clone(), 1, 1, prec).unwrap();
                let x = fld.embed(&r);
                x.mul(&x).add(&x.inv().unwrap()).mul(&x.inv().unwrap()).add(&fld.one())
            };
            let lo = run(20);
            let hi = run(30);
            for e in lo.val_floor().min(hi.val_floor())..=lo.prec() {
                prop_assert_eq!(lo.coeff_at(e), hi.coeff_at(e));
            }
        }
    }

    #[test]
    fn series_power_sum_smoke() {
        // Σ_{f monic deg 1} 1/f at q=2 equals 1/(θ²+θ).
        let fld = fld_q2(25);
        let fq = fld.base_field().clone();
        let mut acc = fld.zero();
        for f in monic_polys(1, &fq) {
            acc = acc.add(&fld.embed(&RatFunc::from_poly(f)).inv().unwrap());
        }
        let expect = fld.embed(
            &RatFunc::new(Poly::one(), Poly::from_coeffs(vec![0, 1, 1]), &fq).unwrap(),
        );
        assert!(acc.eq_up_to(&expect, 20).unwrap());
    }
}
