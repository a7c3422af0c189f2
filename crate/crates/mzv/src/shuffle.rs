//! The recursive q-shuffle products on the pure-`x` word algebra and on
//! the mixed-word algebra, the word-expansion map, associators, and the
//! brute-force associativity sweep.
//!
//! Products recurse on the sum of depths: the pure-`x` product on total
//! `x`-depth, the mixed product on total `y`-depth with pure-`x`
//! subproducts delegated to the `x` recursion. Word-pair products are
//! memoized per `(p, q)` context; the caches are concurrent with
//! idempotent inserts so sweeps can run data-parallel.

use crate::arith::{delta, factor_prime_power};
use crate::words::{words_up_to_weight, Combo, Index, MixedWord};
use crate::{Error, Result};
use dashmap::DashMap;
use rayon::prelude::*;
use serde::Serialize;
use std::sync::Arc;
use std::time::{Duration, Instant};

/// Shared context for shuffle products at a fixed prime power `q = p^e`.
pub struct ShuffleCtx {
    p: u32,
    q: u64,
    memo_x: DashMap<(Index, Index), Arc<Combo>>,
    memo_yy: DashMap<(Index, Index), Arc<Combo>>,
    memo_word: DashMap<(MixedWord, MixedWord), Arc<Combo>>,
}

impl ShuffleCtx {
    pub fn new(q: u64) -> Result<ShuffleCtx> {
        let (p, _) = factor_prime_power(q)?;
        Ok(ShuffleCtx {
            p,
            q,
            memo_x: DashMap::new(),
            memo_yy: DashMap::new(),
            memo_word: DashMap::new(),
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn q(&self) -> u64 {
        self.q
    }

    /// The admissible correction pairs `(i, j, Δ^{i,j}_{a,b})` with
    /// `i + j = a + b`, `i, j >= 1` and `(q-1) | j`, skipping zero Δ.
    fn delta_terms(&self, a: u32, b: u32) -> Vec<(u32, u32, u32)> {
        let s = a as u64 + b as u64;
        let mut out = Vec::new();
        for j in 1..s {
            if j % (self.q - 1).max(1) != 0 {
                continue;
            }
            let i = s - j;
            let d = delta(i, j, a as u64, b as u64, self.p).expect("i + j = a + b by construction");
            if d != 0 {
                out.push((i as u32, j as u32, d));
            }
        }
        out
    }

    // -- pure-x product ----------------------------------------------------

    /// Product of two basis words of the pure-`x` algebra.
    fn x_word_product(&self, a: &Index, b: &Index) -> Arc<Combo> {
        if a.is_empty() {
            return Arc::new(Combo::from_word(self.p, MixedWord::from_x(b.clone())));
        }
        if b.is_empty() {
            return Arc::new(Combo::from_word(self.p, MixedWord::from_x(a.clone())));
        }
        let key = (a.clone(), b.clone());
        if let Some(hit) = self.memo_x.get(&key) {
            return hit.clone();
        }
        let measure = a.dep() + b.dep();
        let a1 = a.first().unwrap();
        let b1 = b.first().unwrap();
        let at = a.cut_tail(1).unwrap();
        let bt = b.cut_tail(1).unwrap();

        let mut out = Combo::zero(self.p);
        out.add_scaled(&prepend_x(&self.x_word_product(&at, b), a1), 1);
        out.add_scaled(&prepend_x(&self.x_word_product(a, &bt), b1), 1);
        let inner = self.x_word_product(&at, &bt);
        out.add_scaled(&prepend_x(&inner, a1 + b1), 1);
        for (i, j, d) in self.delta_terms(a1, b1) {
            // ((x_a' * x_b') * x_j): every word of the inner product has
            // depth <= measure - 2, so the nested product stays below the
            // recursion measure.
            let mut nested = Combo::zero(self.p);
            for (w, c) in inner.iter() {
                debug_assert!(w.dep() + 1 < measure, "x recursion measure must decrease");
                let prod = self.x_word_product(w.x_part(), &Index::new([j]));
                nested.add_scaled(&prod, c);
            }
            out.add_scaled(&prepend_x(&nested, i), d);
        }
        let out = Arc::new(out);
        self.memo_x.entry(key).or_insert_with(|| out.clone());
        out
    }

    /// q-shuffle product on the pure-`x` algebra, extended bilinearly.
    /// Inputs must not contain `y` letters.
    pub fn product_x(&self, a: &Combo, b: &Combo) -> Combo {
        assert!(a.is_pure_x() && b.is_pure_x(), "product_x needs pure-x inputs");
        let mut out = Combo::zero(self.p);
        for (wa, ca) in a.iter() {
            for (wb, cb) in b.iter() {
                let prod = self.x_word_product(wa.x_part(), wb.x_part());
                out.add_scaled(&prod, ca * cb % self.p);
            }
        }
        out
    }

    // -- y*y product -------------------------------------------------------

    /// Product of two pure-`y` basis words, both nonempty.
    fn yy_word_product(&self, a: &Index, b: &Index) -> Arc<Combo> {
        if a.is_empty() {
            return Arc::new(Combo::from_word(self.p, MixedWord::from_y(b.clone())));
        }
        if b.is_empty() {
            return Arc::new(Combo::from_word(self.p, MixedWord::from_y(a.clone())));
        }
        let key = (a.clone(), b.clone());
        if let Some(hit) = self.memo_yy.get(&key) {
            return hit.clone();
        }
        let measure = a.dep() + b.dep();
        let a1 = a.first().unwrap();
        let b1 = b.first().unwrap();
        let at = a.cut_tail(1).unwrap();
        let bt = b.cut_tail(1).unwrap();

        let mut out = Combo::zero(self.p);
        out.add_scaled(&self.yy_word_product(&at, b).prepend_y(a1), 1);
        out.add_scaled(&self.yy_word_product(a, &bt).prepend_y(b1), 1);
        let inner = self.yy_word_product(&at, &bt);
        out.add_scaled(&inner.prepend_y(a1 + b1), 1);
        for (i, j, d) in self.delta_terms(a1, b1) {
            // Both correction sums: one against x_j, one against y_j.
            let with_x = self.word_times_combo(&inner, &MixedWord::from_x(Index::new([j])), measure);
            out.add_scaled(&with_x.prepend_y(i), d);
            let with_y = self.word_times_combo(&inner, &MixedWord::from_y(Index::new([j])), measure);
            out.add_scaled(&with_y.prepend_y(i), d);
        }
        let out = Arc::new(out);
        self.memo_yy.entry(key).or_insert_with(|| out.clone());
        out
    }

    /// `combo * w` for the correction terms of the y-recursion; every word
    /// of `combo` has strictly smaller y-depth than `parent_measure`.
    fn word_times_combo(&self, combo: &Combo, w: &MixedWord, parent_measure: usize) -> Combo {
        let mut out = Combo::zero(self.p);
        for (t, c) in combo.iter() {
            debug_assert!(
                t.y_part().dep() + w.y_part().dep() < parent_measure,
                "y recursion measure must decrease"
            );
            out.add_scaled(&self.word_product(t, w), c);
        }
        out
    }

    // -- general mixed product ----------------------------------------------

    /// Product of two canonical mixed words.
    ///
    /// The canonical evaluation order: multiply the y-blocks, multiply the
    /// x-blocks in the pure-`x` algebra, then fold the x-combination into
    /// each mixed term through its x-part. Pure cross terms reduce to
    /// concatenation.
    pub fn word_product(&self, w1: &MixedWord, w2: &MixedWord) -> Arc<Combo> {
        if w1.is_one() {
            return Arc::new(Combo::from_word(self.p, w2.clone()));
        }
        if w2.is_one() {
            return Arc::new(Combo::from_word(self.p, w1.clone()));
        }
        let key = (w1.clone(), w2.clone());
        if let Some(hit) = self.memo_word.get(&key) {
            return hit.clone();
        }
        let ypart = self.yy_word_product(w1.y_part(), w2.y_part());
        let xpart = self.x_word_product(w1.x_part(), w2.x_part());
        let mut out = Combo::zero(self.p);
        for (w, c) in ypart.iter() {
            // w = y_v x_u; emit y_v · (x_u * xpart) in the pure-x algebra.
            let folded = {
                let mut acc = Combo::zero(self.p);
                for (xw, xc) in xpart.iter() {
                    let prod = self.x_word_product(w.x_part(), xw.x_part());
                    acc.add_scaled(&prod, xc);
                }
                acc
            };
            let mut shifted = Combo::zero(self.p);
            for (fw, fc) in folded.iter() {
                shifted.add_term(&MixedWord::new(w.y_part().clone(), fw.x_part().clone()), fc);
            }
            out.add_scaled(&shifted, c);
        }
        let out = Arc::new(out);
        self.memo_word.entry(key).or_insert_with(|| out.clone());
        out
    }

    /// q-shuffle product on the mixed-word algebra, extended bilinearly.
    pub fn product(&self, a: &Combo, b: &Combo) -> Combo {
        let mut out = Combo::zero(self.p);
        for (wa, ca) in a.iter() {
            for (wb, cb) in b.iter() {
                out.add_scaled(&self.word_product(wa, wb), ca * cb % self.p);
            }
        }
        out
    }

    // -- expansion map ------------------------------------------------------

    /// The expansion of a basis word: `x_a` maps to `x_a` plus, for each
    /// split point `i`, the word with the first `i` coordinates moved to
    /// the `y`-block.
    pub fn expand_word(&self, a: &Index) -> Combo {
        let mut out = Combo::from_word(self.p, MixedWord::from_x(a.clone()));
        for i in 1..=a.dep() {
            let ys = a.cut_head(i).unwrap();
            let xs = a.cut_tail(i).unwrap();
            out.add_term(&MixedWord::new(ys, xs), 1);
        }
        out
    }

    /// Linear extension of [`expand_word`](Self::expand_word) to pure-`x`
    /// combinations.
    pub fn expand(&self, c: &Combo) -> Combo {
        assert!(c.is_pure_x(), "the expansion map is defined on the pure-x algebra");
        let mut out = Combo::zero(self.p);
        for (w, coeff) in c.iter() {
            out.add_scaled(&self.expand_word(w.x_part()), coeff);
        }
        out
    }

    /// `(a*b)*c - a*(b*c)`.
    pub fn associator(&self, a: &Combo, b: &Combo, c: &Combo) -> Combo {
        let left = self.product(&self.product(a, b), c);
        let right = self.product(a, &self.product(b, c));
        left.sub(&right)
    }
}

fn prepend_x(c: &Combo, a: u32) -> Combo {
    let mut out = Combo::zero(c.p());
    for (w, coeff) in c.iter() {
        debug_assert!(w.is_pure_x());
        out.add_term(&MixedWord::from_x(w.x_part().prepend(a)), coeff);
    }
    out
}

// ---------------------------------------------------------------------------
// Associativity sweep
// ---------------------------------------------------------------------------

/// One non-vanishing associator found by a sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepFailure {
    pub a: String,
    pub b: String,
    pub c: String,
    pub associator: String,
}

/// Outcome of a brute-force associativity sweep.
///
/// `failures` is empty iff every associator in range vanished. The elapsed
/// time is kept out of the JSON form so reports stay byte-identical across
/// runs and worker counts.
#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub schema: u32,
    pub q: u64,
    pub p: u32,
    pub max_total_weight: u64,
    pub triples_checked: u64,
    pub failures: Vec<SweepFailure>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl SweepReport {
    pub fn all_vanish(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Check every ordered triple of nonempty canonical words with total
/// weight `<= max_total_weight` for associativity.
pub fn assoc_sweep(q: u64, max_total_weight: u64) -> Result<SweepReport> {
    if max_total_weight < 3 {
        return Err(Error::InvalidArgument("sweep weight bound must be >= 3".into()));
    }
    let start = Instant::now();
    let ctx = ShuffleCtx::new(q)?;
    let words = words_up_to_weight(max_total_weight - 2);
    let p = ctx.p();

    // Pre-pair the first two factors so the parallel workload is flat.
    let mut pairs = Vec::new();
    for (i, a) in words.iter().enumerate() {
        for (j, b) in words.iter().enumerate() {
            if a.wt() + b.wt() + 1 <= max_total_weight {
                pairs.push((i, j));
            }
        }
    }

    let results: Vec<(usize, usize, usize, Combo)> = pairs
        .par_iter()
        .flat_map_iter(|&(i, j)| {
            let a = &words[i];
            let b = &words[j];
            let ca = Combo::from_word(p, a.clone());
            let cb = Combo::from_word(p, b.clone());
            let ab = ctx.product(&ca, &cb);
            let mut local = Vec::new();
            for (k, c) in words.iter().enumerate() {
                if a.wt() + b.wt() + c.wt() > max_total_weight {
                    continue;
                }
                let cc = Combo::from_word(p, c.clone());
                let bc = ctx.product(&cb, &cc);
                let assoc = ctx.product(&ab, &cc).sub(&ctx.product(&ca, &bc));
                if !assoc.is_zero() {
                    local.push((i, j, k, assoc));
                }
            }
            local
        })
        .collect();

    let triples_checked: u64 = pairs
        .iter()
        .map(|&(i, j)| {
            let rem = max_total_weight - words[i].wt() - words[j].wt();
            words.iter().filter(|c| c.wt() <= rem).count() as u64
        })
        .sum();

    let mut failures: Vec<(usize, usize, usize, Combo)> = results;
    failures.sort_by_key(|&(i, j, k, _)| (i, j, k));
    let failures = failures
        .into_iter()
        .map(|(i, j, k, assoc)| SweepFailure {
            a: words[i].to_string(),
            b: words[j].to_string(),
            c: words[k].to_string(),
            associator: assoc.to_string(),
        })
        .collect();

    Ok(SweepReport {
        schema: 1,
        q,
        p,
        max_total_weight,
        triples_checked,
        failures,
        elapsed: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(entries: &[u32]) -> MixedWord {
        MixedWord::from_x(Index::new(entries.iter().copied()))
    }
    fn y(entries: &[u32]) -> MixedWord {
        MixedWord::from_y(Index::new(entries.iter().copied()))
    }
    fn word_combo(p: u32, w: &MixedWord) -> Combo {
        Combo::from_word(p, w.clone())
    }

    #[test]
    fn unit_laws() {
        let ctx = ShuffleCtx::new(3).unwrap();
        let one = Combo::one(3);
        for w in words_up_to_weight(4) {
            let c = word_combo(3, &w);
            assert_eq!(ctx.product(&one, &c), c);
            assert_eq!(ctx.product(&c, &one), c);
        }
    }

    #[test]
    fn x1_times_x1() {
        // q=2: the two x1x1 terms cancel mod 2 and Δ^{1,1}_{1,1} ≡ 0.
        let ctx = ShuffleCtx::new(2).unwrap();
        let c = ctx.product_x(&word_combo(2, &x(&[1])), &word_combo(2, &x(&[1])));
        assert_eq!(c, word_combo(2, &x(&[2])));
        // q=3: no admissible correction pair exists at weight 2.
        let ctx = ShuffleCtx::new(3).unwrap();
        let c = ctx.product_x(&word_combo(3, &x(&[1])), &word_combo(3, &x(&[1])));
        let mut expect = Combo::from_term(3, x(&[1, 1]), 2);
        expect.add_term(&x(&[2]), 1);
        assert_eq!(c, expect);
    }

    #[test]
    fn y1_times_y1() {
        let ctx = ShuffleCtx::new(2).unwrap();
        let c = ctx.product(&word_combo(2, &y(&[1])), &word_combo(2, &y(&[1])));
        assert_eq!(c, word_combo(2, &y(&[2])));
        let ctx = ShuffleCtx::new(3).unwrap();
        let c = ctx.product(&word_combo(3, &y(&[1])), &word_combo(3, &y(&[1])));
        let mut expect = Combo::from_term(3, y(&[1, 1]), 2);
        expect.add_term(&y(&[2]), 1);
        assert_eq!(c, expect);
    }

    #[test]
    fn cross_product_is_concatenation() {
        let ctx = ShuffleCtx::new(3).unwrap();
        let a = word_combo(3, &x(&[2, 1]));
        let b = word_combo(3, &y(&[3]));
        let prod = ctx.product(&a, &b);
        let expected = MixedWord::new(Index::new([3]), Index::new([2, 1]));
        assert_eq!(prod, Combo::from_word(3, expected));
        assert_eq!(ctx.product(&b, &a), prod);
    }

    #[test]
    fn expansion_map_examples() {
        let ctx = ShuffleCtx::new(2).unwrap();
        assert_eq!(ctx.expand(&Combo::one(2)), Combo::one(2));
        let e = ctx.expand_word(&Index::new([4]));
        let mut expect = word_combo(2, &x(&[4]));
        expect.add_term(&y(&[4]), 1);
        assert_eq!(e, expect);
        // Two letters: x_a x_b + y_a x_b + y_a y_b.
        let e = ctx.expand_word(&Index::new([1, 2]));
        let mut expect = word_combo(2, &x(&[1, 2]));
        expect.add_term(&MixedWord::new(Index::new([1]), Index::new([2])), 1);
        expect.add_term(&y(&[1, 2]), 1);
        assert_eq!(e, expect);
    }

    #[test]
    fn associator_examples() {
        let ctx = ShuffleCtx::new(2).unwrap();
        let one = Combo::one(2);
        let b = word_combo(2, &y(&[1]));
        let c = word_combo(2, &x(&[2]));
        assert!(ctx.associator(&one, &b, &c).is_zero());
        let yy = word_combo(2, &y(&[1]));
        assert!(ctx.associator(&yy, &yy, &yy).is_zero());
    }

    #[test]
    fn commutativity_small_weights() {
        for q in [2u64, 3, 4] {
            let ctx = ShuffleCtx::new(q).unwrap();
            let words = words_up_to_weight(4);
            for a in &words {
                for b in &words {
                    if a.wt() + b.wt() > 5 {
                        continue;
                    }
                    let ca = word_combo(ctx.p(), a);
                    let cb = word_combo(ctx.p(), b);
                    assert_eq!(
                        ctx.product(&ca, &cb),
                        ctx.product(&cb, &ca),
                        "commutativity at q={q}: {a} * {b}"
                    );
                }
            }
        }
    }

    #[test]
    fn weight_grading_small() {
        for q in [2u64, 3] {
            let ctx = ShuffleCtx::new(q).unwrap();
            let words = words_up_to_weight(4);
            for a in &words {
                for b in &words {
                    if a.wt() + b.wt() > 5 {
                        continue;
                    }
                    let prod =
                        ctx.product(&word_combo(ctx.p(), a), &word_combo(ctx.p(), b));
                    let w = a.wt() + b.wt();
                    assert_eq!(prod.graded_component(w), prod, "grading at q={q}");
                }
            }
        }
    }

    #[test]
    fn left_y_multiplication_commutes_with_x_products() {
        // y_w (b * a) = (y_w b) * a for pure-x a and mixed b.
        for q in [2u64, 3] {
            let ctx = ShuffleCtx::new(q).unwrap();
            let p = ctx.p();
            let all = words_up_to_weight(4);
            for w in 1..=3u32 {
                for b in &all {
                    for a in all.iter().filter(|a| a.is_pure_x()) {
                        if b.wt() + a.wt() + w as u64 > 5 {
                            continue;
                        }
                        let ca = word_combo(p, a);
                        let cb = word_combo(p, b);
                        let lhs = ctx.product(&cb, &ca).prepend_y(w);
                        let rhs = ctx.product(&cb.prepend_y(w), &ca);
                        assert_eq!(lhs, rhs, "q={q} w={w} b={b} a={a}");
                    }
                }
            }
        }
    }

    #[test]
    fn expansion_peels_leading_letter() {
        // expand(x_a x_rest) = x_a x_rest + y_a · expand(x_rest).
        let ctx = ShuffleCtx::new(3).unwrap();
        for idx in [Index::new([1, 2]), Index::new([2, 1, 3]), Index::new([4, 1])] {
            let full = ctx.expand_word(&idx);
            let a = idx.first().unwrap();
            let rest = idx.cut_tail(1).unwrap();
            let mut expect = word_combo(3, &MixedWord::from_x(idx.clone()));
            expect.add_scaled(&ctx.expand_word(&rest).prepend_y(a), 1);
            assert_eq!(full, expect);
        }
    }

    #[test]
    fn mini_sweep_counts_and_passes() {
        let report = assoc_sweep(2, 3).unwrap();
        // Only weight-1 words fit in a total weight of 3: {x1, y1}^3.
        assert_eq!(report.triples_checked, 8);
        assert!(report.all_vanish());
        let report = assoc_sweep(3, 5).unwrap();
        assert!(report.all_vanish(), "failures: {:?}", report.failures);
        assert!(assoc_sweep(3, 2).is_err());
    }

    #[test]
    fn expansion_homomorphism_small_window() {
        // Literal form, valid because the mini sweep above vanishes
        // through weight 5.
        for q in [2u64, 3] {
            let ctx = ShuffleCtx::new(q).unwrap();
            let p = ctx.p();
            for wa in 1..=2u64 {
                for wb in 1..=(5 - wa).min(2) {
                    for a in crate::words::compositions(wa) {
                        for b in crate::words::compositions(wb) {
                            let xa = Combo::from_word(p, MixedWord::from_x(a.clone()));
                            let xb = Combo::from_word(p, MixedWord::from_x(b.clone()));
                            let lhs = ctx.expand(&ctx.product_x(&xa, &xb));
                            let rhs = ctx.product(&ctx.expand(&xa), &ctx.expand(&xb));
                            assert_eq!(lhs, rhs, "q={q} a={a} b={b}");
                        }
                    }
                }
            }
        }
    }
}
