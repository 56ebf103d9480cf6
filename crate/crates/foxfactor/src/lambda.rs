//! Free polynomials: elements of the group algebra `k F_n`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::SparseVec;
use crate::scalars::{FieldElem, FieldSpec};
use crate::series;
use crate::words::{Letter, ReducedWord};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FreePolynomial {
    rank: usize,
    field: FieldSpec,
    terms: BTreeMap<ReducedWord, FieldElem>,
}

impl FreePolynomial {
    pub fn zero(rank: usize, field: FieldSpec) -> Self {
        FreePolynomial {
            rank,
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(rank: usize, c: FieldElem) -> Self {
        Self::monomial(rank, ReducedWord::identity(), c)
    }

    pub fn one(rank: usize, field: FieldSpec) -> Self {
        Self::constant(rank, field.one())
    }

    pub fn monomial(rank: usize, w: ReducedWord, c: FieldElem) -> Self {
        let mut p = FreePolynomial::zero(rank, c.field());
        p.add_term(w, c);
        p
    }

    pub fn word(rank: usize, field: FieldSpec, w: ReducedWord) -> Self {
        Self::monomial(rank, w, field.one())
    }

    /// The generator `t_i` (or its inverse when `sign < 0`).
    pub fn t(rank: usize, field: FieldSpec, i: usize, sign: i8) -> Self {
        Self::word(rank, field, ReducedWord::letter(Letter { index: i, sign }))
    }

    /// `x_i = t_i - 1`.
    pub fn x(rank: usize, field: FieldSpec, i: usize) -> Self {
        &Self::t(rank, field, i, 1) - &Self::one(rank, field)
    }

    /// Builds from raw terms, reducing words and checking the rank.
    pub fn from_terms(
        rank: usize,
        field: FieldSpec,
        terms: impl IntoIterator<Item = (ReducedWord, FieldElem)>,
    ) -> Result<Self> {
        let mut p = FreePolynomial::zero(rank, field);
        for (w, c) in terms {
            if w.max_index() > rank {
                return Err(Error::RankExceeded {
                    index: w.max_index(),
                    rank,
                });
            }
            if c.field() != field {
                return Err(Error::FieldMismatch(
                    c.field().to_string(),
                    field.to_string(),
                ));
            }
            p.add_term(w, c);
        }
        Ok(p)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ReducedWord, &FieldElem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: &ReducedWord) -> FieldElem {
        self.terms
            .get(w)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn add_term(&mut self, w: ReducedWord, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn check_compatible(&self, o: &FreePolynomial) -> Result<()> {
        if self.rank != o.rank {
            return Err(Error::RankMismatch(self.rank, o.rank));
        }
        if self.field != o.field {
            return Err(Error::FieldMismatch(
                self.field.to_string(),
                o.field.to_string(),
            ));
        }
        Ok(())
    }

    pub fn scale(&self, c: &FieldElem) -> FreePolynomial {
        let mut p = FreePolynomial::zero(self.rank, self.field);
        if c.is_zero() {
            return p;
        }
        for (w, v) in &self.terms {
            p.terms.insert(w.clone(), v * c);
        }
        p
    }

    /// `w * self`
    pub fn left_mul_word(&self, w: &ReducedWord) -> FreePolynomial {
        let mut p = FreePolynomial::zero(self.rank, self.field);
        for (u, c) in &self.terms {
            p.add_term(w.mul(u), c.clone());
        }
        p
    }

    /// `self * w`
    pub fn right_mul_word(&self, w: &ReducedWord) -> FreePolynomial {
        let mut p = FreePolynomial::zero(self.rank, self.field);
        for (u, c) in &self.terms {
            p.add_term(u.mul(w), c.clone());
        }
        p
    }

    pub fn try_mul(&self, o: &FreePolynomial) -> Result<FreePolynomial> {
        self.check_compatible(o)?;
        Ok(self * o)
    }

    pub fn augmentation(&self) -> FieldElem {
        self.terms
            .values()
            .fold(self.field.zero(), |acc, c| &acc + c)
    }

    pub fn length(&self) -> Result<usize> {
        self.terms
            .keys()
            .map(|w| w.len())
            .max()
            .ok_or(Error::ZeroPolynomial)
    }

    /// Length, with the zero polynomial counted as length 0.
    pub fn len_or_zero(&self) -> usize {
        self.length().unwrap_or(0)
    }

    /// Order of the Magnus image: the least degree carrying a nonzero coefficient.
    pub fn order(&self) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut k = 4;
        loop {
            let s = series::magnus_embed(self, k);
            if let Some(d) = s.order() {
                return Ok(d);
            }
            k *= 2;
        }
    }

    pub fn strictly_maximal(&self) -> Result<StrictlyMaximal> {
        let len = self.length()?;
        let words: BTreeSet<ReducedWord> = self
            .terms
            .keys()
            .filter(|w| w.len() == len)
            .cloned()
            .collect();
        let heads: BTreeSet<Letter> = words.iter().filter_map(|w| w.first()).collect();
        let special = len >= 1 && heads.len() == 1;
        Ok(StrictlyMaximal {
            words,
            heads,
            special,
        })
    }

    /// Units of a free group algebra are exactly the nonzero multiples of group elements.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn is_comonic(&self) -> bool {
        self.augmentation().is_one()
    }

    /// `self / ε(self)`.
    pub fn comonic(&self) -> Result<FreePolynomial> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let e = self.augmentation();
        if e.is_zero() {
            return Err(Error::ZeroAugmentation);
        }
        Ok(self.scale(&e.inv()?))
    }

    pub fn max_index(&self) -> usize {
        self.terms.keys().map(|w| w.max_index()).max().unwrap_or(0)
    }

    /// Same polynomial viewed at a different rank (must cover all indices used).
    pub fn with_rank(&self, rank: usize) -> Result<FreePolynomial> {
        if self.max_index() > rank {
            return Err(Error::RankExceeded {
                index: self.max_index(),
                rank,
            });
        }
        Ok(FreePolynomial {
            rank,
            field: self.field,
            terms: self.terms.clone(),
        })
    }

    pub fn as_sparse(&self) -> &SparseVec<ReducedWord> {
        &self.terms
    }

    pub fn from_sparse(rank: usize, field: FieldSpec, terms: SparseVec<ReducedWord>) -> Self {
        let terms = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        FreePolynomial { rank, field, terms }
    }

    pub fn support(&self) -> impl Iterator<Item = &ReducedWord> {
        self.terms.keys()
    }

    /// A random polynomial on words of length `<= max_len` with at most `max_terms` terms.
    pub fn random<R: Rng>(
        rng: &mut R,
        rank: usize,
        field: FieldSpec,
        max_len: usize,
        max_terms: usize,
    ) -> FreePolynomial {
        let words = crate::words::words_up_to(rank, max_len);
        let n = rng.gen_range(1..=max_terms.max(1));
        let mut p = FreePolynomial::zero(rank, field);
        for _ in 0..n {
            let w = words[rng.gen_range(0..words.len())].clone();
            p.add_term(w, random_scalar(rng, field));
        }
        p
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            field: self.field,
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(w, c)| TermJson {
                    word: w.clone(),
                    coeff: c.to_string(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &PolyJson) -> Result<FreePolynomial> {
        let mut terms = Vec::new();
        for t in &j.terms {
            terms.push((t.word.clone(), FieldElem::parse(&t.coeff, j.field)?));
        }
        FreePolynomial::from_terms(j.rank, j.field, terms)
    }
}

/// Nonzero random scalar; small integers over the rationals.
pub fn random_scalar<R: Rng>(rng: &mut R, field: FieldSpec) -> FieldElem {
    match field {
        FieldSpec::Rationals => {
            let mut v = 0;
            while v == 0 {
                v = rng.gen_range(-3..=3);
            }
            field.from_i64(v)
        }
        FieldSpec::Prime(p) => field.from_u64(rng.gen_range(1..p)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrictlyMaximal {
    pub words: BTreeSet<ReducedWord>,
    pub heads: BTreeSet<Letter>,
    pub special: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub word: ReducedWord,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub field: FieldSpec,
    pub rank: usize,
    pub terms: Vec<TermJson>,
}

impl Serialize for FreePolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FreePolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PolyJson::deserialize(d)?;
        FreePolynomial::from_json(&j).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for FreePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = if neg { -c } else { c.clone() };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            if w.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{w}")?;
            } else {
                write!(f, "{mag}*{w}")?;
            }
        }
        Ok(())
    }
}

impl Add for &FreePolynomial {
    type Output = FreePolynomial;
    fn add(self, o: &FreePolynomial) -> FreePolynomial {
        let mut p = self.clone();
        for (w, c) in &o.terms {
            p.add_term(w.clone(), c.clone());
        }
        p
    }
}

impl Sub for &FreePolynomial {
    type Output = FreePolynomial;
    fn sub(self, o: &FreePolynomial) -> FreePolynomial {
        let mut p = self.clone();
        for (w, c) in &o.terms {
            p.add_term(w.clone(), -c);
        }
        p
    }
}

impl Neg for &FreePolynomial {
    type Output = FreePolynomial;
    fn neg(self) -> FreePolynomial {
        self.scale(&-self.field.one())
    }
}

impl Mul for &FreePolynomial {
    type Output = FreePolynomial;
    fn mul(self, o: &FreePolynomial) -> FreePolynomial {
        assert_eq!(self.field, o.field, "field mismatch");
        let mut p = FreePolynomial::zero(self.rank.max(o.rank), self.field);
        for (u, a) in &self.terms {
            for (v, b) in &o.terms {
                p.add_term(u.mul(v), a * b);
            }
        }
        p
    }
}

macro_rules! owned_poly_ops {
    ($tr:ident, $m:ident) => {
        impl $tr for FreePolynomial {
            type Output = FreePolynomial;
            fn $m(self, o: FreePolynomial) -> FreePolynomial {
                (&self).$m(&o)
            }
        }
    };
}
owned_poly_ops!(Add, add);
owned_poly_ops!(Sub, sub);
owned_poly_ops!(Mul, mul);

pub fn multiply(a: &FreePolynomial, b: &FreePolynomial) -> Result<FreePolynomial> {
    a.try_mul(b)
}

pub fn augmentation(g: &FreePolynomial) -> FieldElem {
    g.augmentation()
}

pub fn length_of(g: &FreePolynomial) -> Result<usize> {
    g.length()
}

pub fn order_of(g: &FreePolynomial) -> Result<usize> {
    g.order()
}

pub fn strictly_maximal(g: &FreePolynomial) -> Result<StrictlyMaximal> {
    g.strictly_maximal()
}

// ---------------------------------------------------------------------------
// Mixed x/y basis: t_i = 1 + x_i, t_i^-1 = 1 + y_i with x_i y_i = y_i x_i = -x_i - y_i.

/// `x_index` when `y` is false, `y_index` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MixedLetter {
    pub index: usize,
    pub y: bool,
}

impl MixedLetter {
    fn clashes(self, next: MixedLetter) -> bool {
        self.index == next.index && self.y != next.y
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedPolynomial {
    pub rank: usize,
    pub field: FieldSpec,
    pub terms: BTreeMap<Vec<MixedLetter>, FieldElem>,
}

impl MixedPolynomial {
    pub fn zero(rank: usize, field: FieldSpec) -> Self {
        MixedPolynomial {
            rank,
            field,
            terms: BTreeMap::new(),
        }
    }

    fn add_term(&mut self, m: Vec<MixedLetter>, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        let vanished = match self.terms.get_mut(&m) {
            Some(v) => {
                *v += &c;
                v.is_zero()
            }
            None => {
                self.terms.insert(m, c);
                return;
            }
        };
        if vanished {
            self.terms.remove(&m);
        }
    }

    /// Adds `c * m * l` in normal form, rewriting a clash at the junction.
    fn add_times_letter(&mut self, m: &[MixedLetter], l: MixedLetter, c: &FieldElem) {
        match m.last() {
            Some(&last) if last.clashes(l) => {
                // m' a b = -m' a - m' b
                self.add_term(m.to_vec(), -c);
                self.add_times_letter(&m[..m.len() - 1], l, &-c);
            }
            _ => {
                let mut v = m.to_vec();
                v.push(l);
                self.add_term(v, c.clone());
            }
        }
    }

    pub fn is_normal(&self) -> bool {
        self.terms
            .keys()
            .all(|m| m.windows(2).all(|p| !p[0].clashes(p[1])))
    }
}

impl fmt::Display for MixedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<&Vec<MixedLetter>> = self.terms.keys().collect();
        keys.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        for (k, m) in keys.into_iter().enumerate() {
            let c = &self.terms[m];
            let neg = c.is_negative();
            let mag = if neg { -c } else { c.clone() };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let body: Vec<String> = m
                .iter()
                .map(|l| format!("{}{}", if l.y { "y" } else { "x" }, l.index))
                .collect();
            match (m.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => write!(f, "{}", body.join("*"))?,
                (false, false) => write!(f, "{mag}*{}", body.join("*"))?,
            }
        }
        Ok(())
    }
}

pub fn to_mixed_basis(g: &FreePolynomial) -> MixedPolynomial {
    let mut out = MixedPolynomial::zero(g.rank, g.field);
    for (w, c) in &g.terms {
        let mut acc = MixedPolynomial::zero(g.rank, g.field);
        acc.add_term(Vec::new(), c.clone());
        for l in w.letters() {
            let ml = MixedLetter {
                index: l.index,
                y: l.sign < 0,
            };
            let mut next = MixedPolynomial::zero(g.rank, g.field);
            for (m, v) in &acc.terms {
                next.add_term(m.clone(), v.clone());
                next.add_times_letter(m, ml, v);
            }
            acc = next;
        }
        for (m, v) in acc.terms {
            out.add_term(m, v);
        }
    }
    out
}

pub fn from_mixed_basis(m: &MixedPolynomial) -> FreePolynomial {
    let mut out = FreePolynomial::zero(m.rank, m.field);
    for (mono, c) in &m.terms {
        let mut acc = FreePolynomial::constant(m.rank, c.clone());
        for l in mono {
            let sign = if l.y { -1 } else { 1 };
            let var = &FreePolynomial::t(m.rank, m.field, l.index, sign)
                - &FreePolynomial::one(m.rank, m.field);
            acc = &acc * &var;
        }
        out = &out + &acc;
    }
    out
}

/// Rewrites a raw mixed word to normal form, always firing the leftmost
/// (or rightmost) clashing pair. Used to check that the rewriting is confluent.
pub fn reduce_mixed_word(
    word: &[MixedLetter],
    rank: usize,
    field: FieldSpec,
    leftmost: bool,
) -> MixedPolynomial {
    let mut pending: Vec<(Vec<MixedLetter>, FieldElem)> = vec![(word.to_vec(), field.one())];
    let mut out = MixedPolynomial::zero(rank, field);
    while let Some((w, c)) = pending.pop() {
        let clash = if leftmost {
            (0..w.len().saturating_sub(1)).find(|&k| w[k].clashes(w[k + 1]))
        } else {
            (0..w.len().saturating_sub(1))
                .rev()
                .find(|&k| w[k].clashes(w[k + 1]))
        };
        match clash {
            None => out.add_term(w, c),
            Some(k) => {
                let mut a = w[..k + 1].to_vec();
                a.extend_from_slice(&w[k + 2..]);
                let mut b = w[..k].to_vec();
                b.extend_from_slice(&w[k + 1..]);
                pending.push((a, -&c));
                pending.push((b, -&c));
            }
        }
    }
    out
}
