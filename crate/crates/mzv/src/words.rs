//! Indices (compositions of positive integers), canonical mixed words on
//! the generators `x_k`/`y_ℓ`, and finitely supported `F_p`-linear
//! combinations of mixed words.
//!
//! The generators commute across kinds (`x_k y_ℓ = y_ℓ x_k`), so a word has
//! a canonical form with its `y`-block first. Pure-`x` combinations form
//! the subalgebra on which power sums and zeta values are defined.

use crate::{Error, Result};
use smallvec::SmallVec;
use std::collections::BTreeMap;
use std::fmt;

/// A composition of positive integers `(a_1, ..., a_m)`; possibly empty.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Index(SmallVec<[u32; 6]>);

impl Index {
    pub fn new(entries: impl IntoIterator<Item = u32>) -> Index {
        let v: SmallVec<[u32; 6]> = entries.into_iter().collect();
        assert!(v.iter().all(|&a| a >= 1), "index entries must be positive");
        Index(v)
    }
    pub fn empty() -> Index {
        Index(SmallVec::new())
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
    pub fn entries(&self) -> &[u32] {
        &self.0
    }
    /// Weight: the sum of the entries.
    pub fn wt(&self) -> u64 {
        self.0.iter().map(|&a| a as u64).sum()
    }
    /// Depth: the number of entries.
    pub fn dep(&self) -> usize {
        self.0.len()
    }
    pub fn first(&self) -> Option<u32> {
        self.0.first().copied()
    }

    /// Drop the first `i` coordinates. The empty index absorbs any `i`;
    /// otherwise `i` must not exceed the depth.
    pub fn cut_tail(&self, i: usize) -> Result<Index> {
        if self.is_empty() {
            return Ok(Index::empty());
        }
        if i > self.dep() {
            return Err(Error::InvalidArgument(format!(
                "cannot cut {} coordinates from an index of depth {}",
                i,
                self.dep()
            )));
        }
        Ok(Index(self.0[i..].iter().copied().collect()))
    }

    /// Keep the first `i` coordinates; the mirror of [`cut_tail`](Self::cut_tail).
    pub fn cut_head(&self, i: usize) -> Result<Index> {
        if self.is_empty() {
            return Ok(Index::empty());
        }
        if i > self.dep() {
            return Err(Error::InvalidArgument(format!(
                "cannot keep {} coordinates of an index of depth {}",
                i,
                self.dep()
            )));
        }
        Ok(Index(self.0[..i].iter().copied().collect()))
    }

    pub fn concat(&self, other: &Index) -> Index {
        Index(self.0.iter().chain(other.0.iter()).copied().collect())
    }

    /// Prepend one entry.
    pub fn prepend(&self, a: u32) -> Index {
        assert!(a >= 1);
        let mut v = SmallVec::with_capacity(self.0.len() + 1);
        v.push(a);
        v.extend_from_slice(&self.0);
        Index(v)
    }

    /// Parse `"(3,1,2)"` or `"()"`.
    pub fn parse(text: &str) -> Result<Index> {
        let t = text.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| Error::Parse {
                pos: 0,
                msg: "index must be parenthesized, e.g. (3,1,2)".into(),
            })?;
        if inner.trim().is_empty() {
            return Ok(Index::empty());
        }
        let mut entries = SmallVec::new();
        for (i, part) in inner.split(',').enumerate() {
            let n: u32 = part.trim().parse().map_err(|_| Error::Parse {
                pos: i,
                msg: format!("invalid index entry {:?}", part.trim()),
            })?;
            if n == 0 {
                return Err(Error::Parse { pos: i, msg: "index entries must be >= 1".into() });
            }
            entries.push(n);
        }
        Ok(Index(entries))
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", a)?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

// Lexicographic on entries; fixes deterministic report orders.
impl PartialOrd for Index {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Index {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.cmp(&other.0)
    }
}

/// One generator of the mixed-word monoid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Letter {
    X(u32),
    Y(u32),
}

/// A canonical mixed word: all `y`-letters first, then all `x`-letters,
/// each block keeping its internal order. The empty word is the unit.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MixedWord {
    ys: Index,
    xs: Index,
}

impl MixedWord {
    pub fn new(ys: Index, xs: Index) -> MixedWord {
        MixedWord { ys, xs }
    }
    pub fn one() -> MixedWord {
        MixedWord::default()
    }
    pub fn from_x(xs: Index) -> MixedWord {
        MixedWord { ys: Index::empty(), xs }
    }
    pub fn from_y(ys: Index) -> MixedWord {
        MixedWord { ys, xs: Index::empty() }
    }
    pub fn y_part(&self) -> &Index {
        &self.ys
    }
    pub fn x_part(&self) -> &Index {
        &self.xs
    }
    pub fn is_one(&self) -> bool {
        self.ys.is_empty() && self.xs.is_empty()
    }
    /// True when the word lies in the pure-`x` subalgebra.
    pub fn is_pure_x(&self) -> bool {
        self.ys.is_empty()
    }
    pub fn wt(&self) -> u64 {
        self.ys.wt() + self.xs.wt()
    }
    pub fn dep(&self) -> usize {
        self.ys.dep() + self.xs.dep()
    }

    /// Stable partition of a letter sequence into the canonical form.
    pub fn canonicalize(letters: impl IntoIterator<Item = Letter>) -> MixedWord {
        let mut ys: SmallVec<[u32; 6]> = SmallVec::new();
        let mut xs: SmallVec<[u32; 6]> = SmallVec::new();
        for l in letters {
            match l {
                Letter::X(k) => xs.push(k),
                Letter::Y(k) => ys.push(k),
            }
        }
        MixedWord { ys: Index::new(ys), xs: Index::new(xs) }
    }

    /// Prepend `y_a` (stays canonical).
    pub fn prepend_y(&self, a: u32) -> MixedWord {
        MixedWord { ys: self.ys.prepend(a), xs: self.xs.clone() }
    }

    /// Parse a whitespace-separated word like `"x3 x1 y2"` (case
    /// insensitive); `"1"` denotes the empty word.
    pub fn parse(text: &str) -> Result<MixedWord> {
        let t = text.trim();
        if t == "1" {
            return Ok(MixedWord::one());
        }
        let mut letters = Vec::new();
        for (i, tok) in t.split_whitespace().enumerate() {
            let lower = tok.to_ascii_lowercase();
            let (kind, num) = lower.split_at(1);
            let n: u32 = num.parse().map_err(|_| Error::Parse {
                pos: i,
                msg: format!("invalid subscript in {:?}", tok),
            })?;
            if n == 0 {
                return Err(Error::Parse { pos: i, msg: "subscripts must be >= 1".into() });
            }
            match kind {
                "x" => letters.push(Letter::X(n)),
                "y" => letters.push(Letter::Y(n)),
                _ => {
                    return Err(Error::Parse {
                        pos: i,
                        msg: format!("expected x<n> or y<n>, got {:?}", tok),
                    })
                }
            }
        }
        Ok(MixedWord::canonicalize(letters))
    }
}

impl fmt::Display for MixedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for &a in self.ys.entries() {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "y{}", a)?;
        }
        for &a in self.xs.entries() {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "x{}", a)?;
        }
        Ok(())
    }
}

impl fmt::Debug for MixedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

// Graded order: by weight, then depth, then blocks lexicographically.
impl PartialOrd for MixedWord {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for MixedWord {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.wt(), self.dep(), &self.ys, &self.xs).cmp(&(
            other.wt(),
            other.dep(),
            &other.ys,
            &other.xs,
        ))
    }
}

/// A finitely supported `F_p`-linear combination of mixed words.
///
/// No zero coefficients are stored; coefficients are residues in `[1, p)`.
#[derive(Clone, PartialEq, Eq)]
pub struct Combo {
    p: u32,
    terms: BTreeMap<MixedWord, u32>,
}

impl Combo {
    pub fn zero(p: u32) -> Combo {
        Combo { p, terms: BTreeMap::new() }
    }
    pub fn from_word(p: u32, w: MixedWord) -> Combo {
        Combo::from_term(p, w, 1)
    }
    pub fn from_term(p: u32, w: MixedWord, coeff: u32) -> Combo {
        let mut c = Combo::zero(p);
        c.add_term(&w, coeff);
        c
    }
    pub fn one(p: u32) -> Combo {
        Combo::from_word(p, MixedWord::one())
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn coeff(&self, w: &MixedWord) -> u32 {
        self.terms.get(w).copied().unwrap_or(0)
    }
    pub fn iter(&self) -> impl Iterator<Item = (&MixedWord, u32)> {
        self.terms.iter().map(|(w, &c)| (w, c))
    }
    /// True when every word lies in the pure-`x` subalgebra.
    pub fn is_pure_x(&self) -> bool {
        self.terms.keys().all(|w| w.is_pure_x())
    }

    /// Add `coeff · w` in place.
    pub fn add_term(&mut self, w: &MixedWord, coeff: u32) {
        let c = coeff % self.p;
        if c == 0 {
            return;
        }
        match self.terms.get_mut(w) {
            Some(existing) => {
                *existing = (*existing + c) % self.p;
                if *existing == 0 {
                    self.terms.remove(w);
                }
            }
            None => {
                self.terms.insert(w.clone(), c);
            }
        }
    }

    /// Accumulate `coeff · other` in place.
    pub fn add_scaled(&mut self, other: &Combo, coeff: u32) {
        assert_eq!(self.p, other.p, "mixing combinations over different primes");
        let c = coeff % self.p;
        if c == 0 {
            return;
        }
        for (w, k) in other.iter() {
            self.add_term(w, k * c % self.p);
        }
    }

    pub fn add(&self, other: &Combo) -> Combo {
        let mut out = self.clone();
        out.add_scaled(other, 1);
        out
    }
    pub fn sub(&self, other: &Combo) -> Combo {
        let mut out = self.clone();
        out.add_scaled(other, (self.p - 1) % self.p);
        out
    }
    pub fn scale(&self, coeff: u32) -> Combo {
        let mut out = Combo::zero(self.p);
        out.add_scaled(self, coeff);
        out
    }

    /// The sum of the terms of total weight `w`.
    pub fn graded_component(&self, w: u64) -> Combo {
        let mut out = Combo::zero(self.p);
        for (word, c) in self.iter() {
            if word.wt() == w {
                out.add_term(word, c);
            }
        }
        out
    }

    /// Left-multiply every word by `y_a` (canonical form is preserved).
    pub fn prepend_y(&self, a: u32) -> Combo {
        let mut out = Combo::zero(self.p);
        for (w, c) in self.iter() {
            out.add_term(&w.prepend_y(a), c);
        }
        out
    }
}

impl fmt::Display for Combo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in self.iter() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c != 1 || w.is_one() {
                if w.is_one() {
                    write!(f, "{}", c)?;
                } else {
                    write!(f, "{}*{}", c, w)?;
                }
            } else {
                write!(f, "{}", w)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Combo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// All compositions of weight exactly `w`, deterministically ordered.
pub fn compositions(w: u64) -> Vec<Index> {
    fn rec(rem: u64, cur: &mut Vec<u32>, out: &mut Vec<Index>) {
        if rem == 0 {
            out.push(Index::new(cur.iter().copied()));
            return;
        }
        for a in 1..=rem {
            cur.push(a as u32);
            rec(rem - a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(w, &mut Vec::new(), &mut out);
    out
}

/// All nonempty canonical mixed words of total weight `<= max_wt`, sorted.
pub fn words_up_to_weight(max_wt: u64) -> Vec<MixedWord> {
    let mut out = Vec::new();
    for w in 1..=max_wt {
        for yw in 0..=w {
            let xw = w - yw;
            for ys in compositions(yw) {
                for xs in compositions(xw) {
                    let word = MixedWord::new(ys.clone(), xs);
                    if !word.is_one() {
                        out.push(word);
                    }
                }
            }
        }
    }
    out.sort();
    out
}
