//! Thakur power sums and multiple zeta values.
//!
//! The exact side sums `1/(f_1^{a_1}···f_m^{a_m})` over monic chains with
//! strictly decreasing degrees led by `d`, as elements of `K`; deep sums
//! are assembled from the head factorization
//! `S_d(a) = S_d(a_1)·S_{<d}(a^(1))`. The numeric side computes the same
//! sums directly as series: `Σ_{f monic, deg d} f^{-s}` collapses, via the
//! binomial expansion of `(1 + h/θ^d)^{-s}`, to a short series over the
//! exact moment polynomials `Σ_{deg h <= t} h^k`, which is what makes
//! zeta values to high precision affordable.

use crate::arith::{lucas_binom, monic_polys, neg_binom, Fq, Poly, RatFunc};
use crate::report::VerifyReport;
use crate::series::{PuiseuxSeries, SeriesField};
use crate::shuffle::ShuffleCtx;
use crate::words::{compositions, Combo, Index, MixedWord};
use crate::{Error, Result};
use dashmap::DashMap;
use std::sync::Arc;

/// Exact power sums over a fixed base field, with memoized sub-sums.
pub struct SumCtx {
    fq: Fq,
    memo_eq: DashMap<(Index, u32), Arc<RatFunc>>,
    memo_below: DashMap<(Index, u32), Arc<RatFunc>>,
}

impl SumCtx {
    pub fn new(fq: Fq) -> SumCtx {
        SumCtx { fq, memo_eq: DashMap::new(), memo_below: DashMap::new() }
    }

    pub fn field(&self) -> &Fq {
        &self.fq
    }

    /// `S_d(a)`: the sum over chains `d = deg f_1 > ... > deg f_m >= 0` of
    /// monic polynomials. Empty when no such chain exists (`d < m - 1`).
    pub fn power_sum(&self, a: &Index, d: u32) -> Result<Arc<RatFunc>> {
        if a.is_empty() {
            return Err(Error::InvalidArgument("power sums need a nonempty index".into()));
        }
        if (d as usize) + 1 < a.dep() {
            return Ok(Arc::new(RatFunc::zero()));
        }
        let key = (a.clone(), d);
        if let Some(hit) = self.memo_eq.get(&key) {
            return Ok(hit.clone());
        }
        let a1 = a.first().unwrap() as i64;
        let head = {
            let mut acc = RatFunc::zero();
            for f in monic_polys(d, &self.fq) {
                let term = RatFunc::from_poly(f).pow(-a1, &self.fq)?;
                acc = acc.add(&term, &self.fq);
            }
            acc
        };
        let tail = a.cut_tail(1).unwrap();
        let result = if tail.is_empty() {
            head
        } else if d == 0 {
            RatFunc::zero()
        } else {
            head.mul(self.power_sum_below(&tail, d)?.as_ref(), &self.fq)
        };
        let result = Arc::new(result);
        self.memo_eq.entry(key).or_insert_with(|| result.clone());
        Ok(result)
    }

    /// `S_{<d}(a) = Σ_{i<d} S_i(a)` for nonempty `a`; the empty index has
    /// the conventional value 1 (for any `d`), matching the unit of the
    /// linear extension.
    pub fn power_sum_below(&self, a: &Index, d: u32) -> Result<Arc<RatFunc>> {
        if a.is_empty() {
            return Ok(Arc::new(RatFunc::one()));
        }
        if d == 0 {
            return Ok(Arc::new(RatFunc::zero()));
        }
        let key = (a.clone(), d);
        if let Some(hit) = self.memo_below.get(&key) {
            return Ok(hit.clone());
        }
        let prev = self.power_sum_below(a, d - 1)?;
        let last = self.power_sum(a, d - 1)?;
        let result = Arc::new(prev.add(&last, &self.fq));
        self.memo_below.entry(key).or_insert_with(|| result.clone());
        Ok(result)
    }

    /// `F_p`-linear extension of `S_{<d}` to pure-`x` combinations, with
    /// the empty word mapping to 1.
    pub fn s_hat_below(&self, c: &Combo, d: u32) -> Result<RatFunc> {
        assert!(c.is_pure_x(), "power sums are defined on the pure-x algebra");
        let mut acc = RatFunc::zero();
        for (w, coeff) in c.iter() {
            let val = self.power_sum_below(w.x_part(), d)?;
            acc = acc.add(&val.scale(self.fq.from_residue(coeff as u64), &self.fq), &self.fq);
        }
        Ok(acc)
    }
}

// ---------------------------------------------------------------------------
// Numeric (series) side
// ---------------------------------------------------------------------------

/// Series-valued power sums, moment polynomials, and zeta values over a
/// fixed series field. All caches are concurrent and idempotent.
pub struct NumCtx {
    fld: SeriesField,
    /// `Σ_{deg h <= t} h^k` as an exact polynomial; key `(t + 1, k)`.
    moments: DashMap<(i64, u32), Arc<Poly>>,
    /// `Σ_{f monic, deg f = d} f^k`; key `(d, k)`.
    monic_moments: DashMap<(u32, u32), Arc<Poly>>,
    /// `Σ_{f monic, deg f = d} f^{-s}` as a series; key `(d, s)`.
    sser: DashMap<(u32, u32), Arc<PuiseuxSeries>>,
    below: DashMap<(Index, u32), Arc<PuiseuxSeries>>,
    zeta: DashMap<Index, Arc<PuiseuxSeries>>,
}

impl NumCtx {
    pub fn new(fld: SeriesField) -> NumCtx {
        NumCtx {
            fld,
            moments: DashMap::new(),
            monic_moments: DashMap::new(),
            sser: DashMap::new(),
            below: DashMap::new(),
            zeta: DashMap::new(),
        }
    }

    pub fn field(&self) -> &SeriesField {
        &self.fld
    }

    /// The moment polynomial `M_k^{[t]} = Σ_{h in A, deg h <= t} h^k`
    /// (with `0^0 = 1`), computed by peeling the top coefficient:
    /// summing `c^s` over `F_q` kills everything except `(q-1) | s`, `s > 0`.
    pub fn moment(&self, t: i64, k: u32) -> Arc<Poly> {
        if t < -1 {
            return self.moment(-1, k);
        }
        let key = (t, k);
        if let Some(hit) = self.moments.get(&key) {
            return hit.clone();
        }
        let fq = self.fld.base_field();
        let result = if t == -1 {
            // Only h = 0.
            if k == 0 {
                Poly::one()
            } else {
                Poly::zero()
            }
        } else {
            let q = self.fld.base_q();
            let p = fq.p();
            let mut acc = Poly::zero();
            for i in 0..k {
                let s = (k - i) as u64;
                if s % (q - 1).max(1) != 0 {
                    continue;
                }
                let c = lucas_binom(k as u64, i as u64, p);
                if c == 0 {
                    continue;
                }
                // Σ_{c in F_q^*} c^s = -1; the i = k term carries q ≡ 0.
                let coeff = fq.neg(fq.from_residue(c as u64));
                let prev = self.moment(t - 1, i);
                let shifted = Poly::monomial(coeff, (t as usize) * (k - i) as usize);
                acc = acc.add(&prev.mul(&shifted, fq), fq);
            }
            acc
        };
        let result = Arc::new(result);
        self.moments.entry(key).or_insert_with(|| result.clone());
        result
    }

    /// `Σ_{f monic, deg f = d} f^k` via `f = θ^d + h`.
    pub fn monic_moment(&self, d: u32, k: u32) -> Arc<Poly> {
        if d == 0 {
            return Arc::new(Poly::one());
        }
        let key = (d, k);
        if let Some(hit) = self.monic_moments.get(&key) {
            return hit.clone();
        }
        let fq = self.fld.base_field();
        let p = fq.p();
        let mut acc = Poly::zero();
        for i in 0..=k {
            let c = lucas_binom(k as u64, i as u64, p);
            if c == 0 {
                continue;
            }
            let m = self.moment(d as i64 - 1, i);
            let shifted = Poly::monomial(fq.from_residue(c as u64), d as usize * (k - i) as usize);
            acc = acc.add(&m.mul(&shifted, fq), fq);
        }
        let result = Arc::new(acc);
        self.monic_moments.entry(key).or_insert_with(|| result.clone());
        result
    }

    /// The depth-one power sum `S_d(s) = Σ_{f monic, deg f = d} f^{-s}` as
    /// a series, exact to the field cutoff.
    pub fn power_sum_head(&self, d: u32, s: u32) -> Arc<PuiseuxSeries> {
        assert!(s >= 1);
        if d == 0 {
            return Arc::new(self.fld.one());
        }
        let key = (d, s);
        if let Some(hit) = self.sser.get(&key) {
            return hit.clone();
        }
        let fld = &self.fld;
        let p = fld.base_field().p();
        let ram = fld.ram() as i64;
        let mut acc = fld.zero();
        let mut j = 0u32;
        // Term j has valuation >= d(s + j) - j(d - 1) = ds + j units.
        while (d as i64 * s as i64 + j as i64) * ram <= fld.prec() {
            let c = neg_binom(s as u64, j as u64, p);
            if c != 0 {
                let m = self.moment(d as i64 - 1, j);
                let term = fld
                    .embed_poly(&m)
                    .mul_monomial(1, (d as i64) * (s as i64 + j as i64) * ram)
                    .scale_residue(c);
                acc = acc.add(&term);
            }
            j += 1;
        }
        // Omitted terms lie beyond the cutoff, so the digits are exact.
        let result = Arc::new(acc.with_prec(fld.prec()));
        self.sser.entry(key).or_insert_with(|| result.clone());
        result
    }

    /// `S_d(a)` as a series, via the head factorization.
    pub fn power_sum_series(&self, a: &Index, d: u32) -> Result<Arc<PuiseuxSeries>> {
        if a.is_empty() {
            return Err(Error::InvalidArgument("power sums need a nonempty index".into()));
        }
        if (d as usize) + 1 < a.dep() {
            return Ok(Arc::new(self.fld.zero()));
        }
        let head = self.power_sum_head(d, a.first().unwrap());
        let tail = a.cut_tail(1).unwrap();
        if tail.is_empty() {
            return Ok(head);
        }
        if d == 0 {
            return Ok(Arc::new(self.fld.zero()));
        }
        Ok(Arc::new(head.mul(self.power_sum_below_series(&tail, d)?.as_ref())))
    }

    /// `S_{<d}(a)` as a series; empty index maps to 1.
    pub fn power_sum_below_series(&self, a: &Index, d: u32) -> Result<Arc<PuiseuxSeries>> {
        if a.is_empty() {
            return Ok(Arc::new(self.fld.one()));
        }
        if d == 0 {
            return Ok(Arc::new(self.fld.zero()));
        }
        let key = (a.clone(), d);
        if let Some(hit) = self.below.get(&key) {
            return Ok(hit.clone());
        }
        let prev = self.power_sum_below_series(a, d - 1)?;
        let last = self.power_sum_series(a, d - 1)?;
        let result = Arc::new(prev.add(&last));
        self.below.entry(key).or_insert_with(|| result.clone());
        Ok(result)
    }

    /// The multiple zeta value `ζ_A(a) = Σ_d S_d(a)` to full precision.
    ///
    /// Each `S_d(a)` has absolute value at most `q^(-d·a_1)`, so the sum is
    /// cut off once `d·a_1` passes the precision; the next two terms are
    /// checked to fall below the cutoff as a stability re-check.
    pub fn zeta(&self, a: &Index) -> Result<Arc<PuiseuxSeries>> {
        if a.is_empty() {
            return Err(Error::InvalidArgument("zeta needs a nonempty index".into()));
        }
        if let Some(hit) = self.zeta.get(a) {
            return Ok(hit.clone());
        }
        let fld = &self.fld;
        let ram = fld.ram() as i64;
        let a1 = a.first().unwrap() as i64;
        let dmax = (fld.prec() / (a1 * ram)) as u32;
        let mut acc = fld.zero();
        for d in 0..=dmax {
            acc = acc.add(self.power_sum_series(a, d)?.as_ref());
        }
        for extra in 1..=2 {
            let tail_term = self.power_sum_series(a, dmax + extra)?;
            assert!(
                tail_term.val_floor() > fld.prec(),
                "zeta cutoff at d={dmax} is not stable for {a}"
            );
        }
        let result = Arc::new(acc.with_prec(fld.prec()));
        self.zeta.entry(a.clone()).or_insert_with(|| result.clone());
        Ok(result)
    }

    /// Linear extension of zeta to pure-`x` combinations (1 maps to 1).
    pub fn zeta_of_combo(&self, c: &Combo) -> Result<PuiseuxSeries> {
        assert!(c.is_pure_x(), "zeta is defined on the pure-x algebra");
        let mut acc = self.fld.zero();
        for (w, coeff) in c.iter() {
            let z = if w.is_one() {
                Arc::new(self.fld.one())
            } else {
                self.zeta(w.x_part())?
            };
            acc = acc.add(&z.scale_residue(coeff));
        }
        Ok(acc)
    }
}

// ---------------------------------------------------------------------------
// Verification harnesses
// ---------------------------------------------------------------------------

/// Exact check of the depth-one product formula
/// `S_d(a)S_d(b) = S_d(a+b) + Σ_{i+j=a+b, (q-1)|j} Δ^{i,j}_{a,b} S_d(i,j)`.
pub fn verify_chen(qs: &[u64], max_weight: u64, max_d: u32) -> Result<VerifyReport> {
    let mut report = VerifyReport::new("chen-depth-one-product")
        .with("q", format!("{qs:?}"))
        .with("max_weight", max_weight)
        .with("max_d", max_d);
    for &q in qs {
        let fq = Fq::from_order(q)?;
        let ctx = SumCtx::new(fq.clone());
        let p = fq.p();
        for a in 1..max_weight {
            for b in 1..=(max_weight - a) {
                for d in 0..=max_d {
                    let lhs = ctx
                        .power_sum(&Index::new([a as u32]), d)?
                        .mul(ctx.power_sum(&Index::new([b as u32]), d)?.as_ref(), &fq);
                    let mut rhs =
                        (*ctx.power_sum(&Index::new([(a + b) as u32]), d)?).clone();
                    for j in 1..a + b {
                        if j % (q - 1).max(1) != 0 {
                            continue;
                        }
                        let i = a + b - j;
                        let coeff = crate::arith::delta(i, j, a, b, p)?;
                        if coeff == 0 {
                            continue;
                        }
                        let s = ctx.power_sum(&Index::new([i as u32, j as u32]), d)?;
                        rhs = rhs.add(&s.scale(fq.from_residue(coeff as u64), &fq), &fq);
                    }
                    report.record(
                        lhs == rhs,
                        || format!("q={q} a={a} b={b} d={d}"),
                        || format!("lhs={lhs} rhs={rhs}"),
                    );
                }
            }
        }
    }
    Ok(report)
}

/// Exact check that the truncated sums respect the q-shuffle product:
/// `Ŝ_{<d}(x_a * x_b) = S_{<d}(a)·S_{<d}(b)`.
pub fn verify_shi(q: u64, max_weight: u64, max_depth: usize, max_d: u32) -> Result<VerifyReport> {
    let fq = Fq::from_order(q)?;
    let ctx = SumCtx::new(fq.clone());
    let shuffle = ShuffleCtx::new(q)?;
    let mut report = VerifyReport::new("shi-truncated-homomorphism")
        .with("q", q)
        .with("max_weight", max_weight)
        .with("max_depth", max_depth)
        .with("max_d", max_d);
    let mut indices = Vec::new();
    for w in 1..max_weight {
        for idx in compositions(w) {
            if idx.dep() <= max_depth {
                indices.push(idx);
            }
        }
    }
    for a in &indices {
        for b in &indices {
            if a.wt() + b.wt() > max_weight {
                continue;
            }
            let prod = shuffle.product_x(
                &Combo::from_word(fq.p(), MixedWord::from_x(a.clone())),
                &Combo::from_word(fq.p(), MixedWord::from_x(b.clone())),
            );
            for d in 1..=max_d {
                let lhs = ctx.s_hat_below(&prod, d)?;
                let rhs = ctx
                    .power_sum_below(a, d)?
                    .mul(ctx.power_sum_below(b, d)?.as_ref(), &fq);
                report.record(
                    lhs == rhs,
                    || format!("q={q} a={a} b={b} d={d}"),
                    || format!("lhs={lhs} rhs={rhs}"),
                );
            }
        }
    }
    Ok(report)
}

/// Numeric check that zeta values satisfy the q-shuffle relations:
/// `ζ(a)·ζ(b)` agrees with the shuffle expansion to `tol_units` digits.
pub fn verify_zeta_shuffle(
    q: u64,
    max_pair_weight: u64,
    tol_units: i64,
    prec_units: i64,
) -> Result<VerifyReport> {
    let fq = Fq::from_order(q)?;
    let fld = SeriesField::new(fq.clone(), 1, 1, prec_units)?;
    let num = NumCtx::new(fld);
    let shuffle = ShuffleCtx::new(q)?;
    let mut report = VerifyReport::new("zeta-shuffle-numeric")
        .with("q", q)
        .with("max_pair_weight", max_pair_weight)
        .with("tolerance_exponent", tol_units)
        .with("prec_units", prec_units);
    for wa in 1..max_pair_weight {
        for wb in 1..=(max_pair_weight - wa) {
            for a in compositions(wa) {
                for b in compositions(wb) {
                    let za = num.zeta(&a)?;
                    let zb = num.zeta(&b)?;
                    let lhs = za.mul(&zb);
                    let prod = shuffle.product_x(
                        &Combo::from_word(fq.p(), MixedWord::from_x(a.clone())),
                        &Combo::from_word(fq.p(), MixedWord::from_x(b.clone())),
                    );
                    let rhs = num.zeta_of_combo(&prod)?;
                    let ok = lhs.eq_up_to_units(&rhs, tol_units)?;
                    report.record(
                        ok,
                        || format!("q={q} a={a} b={b}"),
                        || format!("lhs={lhs} rhs={rhs}"),
                    );
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Fq {
        Fq::new(2, 1).unwrap()
    }

    #[test]
    fn power_sum_base_cases() {
        let ctx = SumCtx::new(f2());
        // S_0((a)) = 1 for every a (only f = 1).
        for a in 1..=4 {
            assert_eq!(*ctx.power_sum(&Index::new([a]), 0).unwrap(), RatFunc::one());
        }
        // S_0((a,b)) = 0: no strictly decreasing chain from degree 0.
        assert!(ctx.power_sum(&Index::new([1, 2]), 0).unwrap().is_zero());
        // q=2: S_1((1)) = 1/θ + 1/(θ+1) = 1/(θ²+θ).
        let s = ctx.power_sum(&Index::new([1]), 1).unwrap();
        let expect =
            RatFunc::new(Poly::one(), Poly::from_coeffs(vec![0, 1, 1]), &f2()).unwrap();
        assert_eq!(*s, expect);
        // S_{<1} = S_0 = 1; S_{<2}((1)) = 1 + 1/(θ²+θ).
        assert_eq!(
            *ctx.power_sum_below(&Index::new([1]), 1).unwrap(),
            RatFunc::one()
        );
        assert_eq!(
            *ctx.power_sum_below(&Index::new([1]), 2).unwrap(),
            RatFunc::one().add(&expect, &f2())
        );
        assert!(ctx.power_sum(&Index::empty(), 1).is_err());
    }

    /// Independent oracle: enumerate every chain of monic polynomials with
    /// strictly decreasing degrees led by `d`, forming the product term by
    /// term with no head factorization.
    fn power_sum_chains(a: &Index, d: u32, fq: &Fq) -> RatFunc {
        let m = a.dep();
        // All strictly decreasing degree tuples starting at d.
        let mut tuples: Vec<Vec<u32>> = vec![vec![d]];
        for _ in 1..m {
            let mut next = Vec::new();
            for t in &tuples {
                for deg in 0..*t.last().unwrap() {
                    let mut t2 = t.clone();
                    t2.push(deg);
                    next.push(t2);
                }
            }
            tuples = next;
        }
        let mut acc = RatFunc::zero();
        for degs in &tuples {
            // Odometer over the monic polynomials of each degree.
            let pools: Vec<Vec<Poly>> =
                degs.iter().map(|&deg| monic_polys(deg, fq)).collect();
            let mut odo = vec![0usize; m];
            loop {
                let mut term = RatFunc::one();
                for (slot, &i) in odo.iter().enumerate() {
                    let f = RatFunc::from_poly(pools[slot][i].clone());
                    let a_i = a.entries()[slot] as i64;
                    term = term.mul(&f.pow(-a_i, fq).unwrap(), fq);
                }
                acc = acc.add(&term, fq);
                let mut carry = m;
                for slot in (0..m).rev() {
                    odo[slot] += 1;
                    if odo[slot] < pools[slot].len() {
                        carry = slot;
                        break;
                    }
                    odo[slot] = 0;
                }
                if carry == m {
                    break;
                }
            }
        }
        acc
    }

    #[test]
    fn factorized_matches_chain_enumeration() {
        for q in [2u64, 3] {
            let fq = Fq::from_order(q).unwrap();
            let ctx = SumCtx::new(fq.clone());
            for w in 1..=5u64 {
                for idx in compositions(w) {
                    if idx.dep() > 3 {
                        continue;
                    }
                    for d in 0..=3u32 {
                        let fast = ctx.power_sum(&idx, d).unwrap();
                        let slow = power_sum_chains(&idx, d, &fq);
                        assert_eq!(*fast, slow, "q={q} idx={idx} d={d}");
                    }
                }
            }
        }
    }

    #[test]
    fn moment_polynomials_match_enumeration() {
        for q in [2u64, 3, 4] {
            let fq = Fq::from_order(q).unwrap();
            let fld = SeriesField::new(fq.clone(), 1, 1, 30).unwrap();
            let num = NumCtx::new(fld);
            for t in -1..=2i64 {
                for k in 0..=6u32 {
                    let fast = num.moment(t, k);
                    let mut slow = Poly::zero();
                    if t >= -1 {
                        for h in crate::arith::polys_below((t + 1) as u32, &fq) {
                            let hk = if k == 0 { Poly::one() } else { h.pow(k as u64, &fq) };
                            slow = slow.add(&hk, &fq);
                        }
                    }
                    assert_eq!(*fast, slow, "q={q} t={t} k={k}");
                }
            }
            for d in 0..=2u32 {
                for k in 0..=6u32 {
                    let fast = num.monic_moment(d, k);
                    let mut slow = Poly::zero();
                    for f in monic_polys(d, &fq) {
                        let fk = if k == 0 { Poly::one() } else { f.pow(k as u64, &fq) };
                        slow = slow.add(&fk, &fq);
                    }
                    assert_eq!(*fast, slow, "monic q={q} d={d} k={k}");
                }
            }
        }
    }

    #[test]
    fn series_power_sums_match_exact_embeddings() {
        for q in [2u64, 3] {
            let fq = Fq::from_order(q).unwrap();
            let fld = SeriesField::new(fq.clone(), 1, 1, 25).unwrap();
            let num = NumCtx::new(fld.clone());
            let exact = SumCtx::new(fq.clone());
            for d in 0..=3u32 {
                for s in 1..=4u32 {
                    let fast = num.power_sum_head(d, s);
                    let slow = fld.embed(&exact.power_sum(&Index::new([s]), d).unwrap());
                    assert!(
                        fast.eq_up_to(&slow, 25).unwrap(),
                        "q={q} d={d} s={s}: {fast} vs {slow}"
                    );
                }
            }
            // Deep indices via the factorization.
            for idx in [Index::new([1, 1]), Index::new([2, 1]), Index::new([1, 2, 1])] {
                for d in 0..=3u32 {
                    let fast = num.power_sum_series(&idx, d).unwrap();
                    let slow = fld.embed(&exact.power_sum(&idx, d).unwrap());
                    assert!(fast.eq_up_to(&slow, 25).unwrap(), "q={q} idx={idx} d={d}");
                }
            }
        }
    }

    #[test]
    fn power_sum_decay_bound() {
        // |S_d(a)| <= q^(-d·a_1).
        let fq = Fq::new(3, 1).unwrap();
        let fld = SeriesField::new(fq, 1, 1, 30).unwrap();
        let num = NumCtx::new(fld);
        for idx in [Index::new([1]), Index::new([2, 1]), Index::new([1, 1])] {
            for d in 0..=5u32 {
                let s = num.power_sum_series(&idx, d).unwrap();
                let bound = d as i64 * idx.first().unwrap() as i64;
                assert!(
                    s.val_floor() >= bound,
                    "val(S_{d}({idx})) = {:?} < {bound}",
                    s.val()
                );
            }
        }
    }

    #[test]
    fn zeta_leading_digits() {
        // q=2: ζ(1) = 1 + θ^-2 + θ^-3 + θ^-4 + ...
        let fld = SeriesField::new(f2(), 1, 1, 20).unwrap();
        let num = NumCtx::new(fld.clone());
        let z = num.zeta(&Index::new([1])).unwrap();
        assert_eq!(z.coeff_at(0), 1, "leading term is the d=0 sum");
        assert_eq!(z.coeff_at(1), 0);
        assert_eq!(z.coeff_at(2), 1);
        assert_eq!(z.coeff_at(3), 1);
        // Oracle: partial sums of exact power sums, embedded.
        let exact = SumCtx::new(f2());
        let mut partial = fld.zero();
        for d in 0..=21 {
            partial = partial.add(&fld.embed(&exact.power_sum(&Index::new([1]), d).unwrap()));
        }
        assert!(z.eq_up_to(&partial, 20).unwrap());
    }

    #[test]
    fn zeta_square_identity_q2() {
        // x1 * x1 = x2 at q=2, so ζ(1)² = ζ(2) numerically.
        let fld = SeriesField::new(f2(), 1, 1, 30).unwrap();
        let num = NumCtx::new(fld);
        let z1 = num.zeta(&Index::new([1])).unwrap();
        let z2 = num.zeta(&Index::new([2])).unwrap();
        assert!(z1.mul(&z1).eq_up_to_units(&z2, 20).unwrap());
    }

    #[test]
    fn chen_and_shi_reports_pass() {
        let chen = verify_chen(&[2, 3], 5, 2).unwrap();
        assert!(chen.passed, "{:?}", chen.failures);
        assert!(chen.cases_checked > 0);
        let shi = verify_shi(2, 4, 2, 2).unwrap();
        assert!(shi.passed, "{:?}", shi.failures);
        let zeta = verify_zeta_shuffle(2, 4, 15, 25).unwrap();
        assert!(zeta.passed, "{:?}", zeta.failures);
    }
}
