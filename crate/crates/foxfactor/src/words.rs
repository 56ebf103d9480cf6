//! Reduced words of the free group `F_n` and monomials of the free monoid on `x_1..x_n`.

use std::cmp::Ordering;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// `t_index^sign` with `sign` in `{1, -1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub index: usize,
    pub sign: i8,
}

impl Letter {
    pub fn pos(index: usize) -> Self {
        Letter { index, sign: 1 }
    }

    pub fn neg(index: usize) -> Self {
        Letter { index, sign: -1 }
    }

    pub fn inverse(self) -> Self {
        Letter {
            index: self.index,
            sign: -self.sign,
        }
    }

    pub fn is_inverse_of(self, other: Letter) -> bool {
        self.index == other.index && self.sign == -other.sign
    }
}

// index first, then t_i before t_i^-1
impl Ord for Letter {
    fn cmp(&self, o: &Self) -> Ordering {
        self.index
            .cmp(&o.index)
            .then((self.sign < 0).cmp(&(o.sign < 0)))
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign > 0 {
            write!(f, "t{}", self.index)
        } else {
            write!(f, "t{}^-1", self.index)
        }
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ReducedWord {
    letters: Vec<Letter>,
}

impl Ord for ReducedWord {
    fn cmp(&self, o: &Self) -> Ordering {
        self.len()
            .cmp(&o.len())
            .then_with(|| self.letters.cmp(&o.letters))
    }
}

impl PartialOrd for ReducedWord {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

fn check_rank(letters: &[Letter], rank: usize) -> Result<()> {
    for l in letters {
        if l.index == 0 || l.index > rank {
            return Err(Error::RankExceeded {
                index: l.index,
                rank,
            });
        }
        if l.sign != 1 && l.sign != -1 {
            return Err(Error::Invalid(format!(
                "letter exponent {} is not +-1",
                l.sign
            )));
        }
    }
    Ok(())
}

impl ReducedWord {
    pub fn identity() -> Self {
        ReducedWord::default()
    }

    pub fn letter(l: Letter) -> Self {
        ReducedWord { letters: vec![l] }
    }

    /// Reduces without a rank check.
    pub fn from_letters(seq: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in seq {
            if out.last().is_some_and(|&last| last.is_inverse_of(l)) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        ReducedWord { letters: out }
    }

    /// Expands `[(index, exponent)]` pairs into unit letters and reduces.
    pub fn from_powers(pairs: &[(usize, i64)], rank: usize) -> Result<Self> {
        let mut seq = Vec::new();
        for &(i, e) in pairs {
            let sign = if e < 0 { -1 } else { 1 };
            for _ in 0..e.unsigned_abs() {
                seq.push(Letter { index: i, sign });
            }
        }
        free_reduce(&seq, rank)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    pub fn max_index(&self) -> usize {
        self.letters.iter().map(|l| l.index).max().unwrap_or(0)
    }

    pub fn inverse(&self) -> Self {
        ReducedWord {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn mul(&self, other: &ReducedWord) -> ReducedWord {
        let a = &self.letters;
        let b = &other.letters;
        let mut k = 0;
        while k < a.len() && k < b.len() && a[a.len() - 1 - k].is_inverse_of(b[k]) {
            k += 1;
        }
        let mut letters = Vec::with_capacity(a.len() + b.len() - 2 * k);
        letters.extend_from_slice(&a[..a.len() - k]);
        letters.extend_from_slice(&b[k..]);
        ReducedWord { letters }
    }

    /// Head of length `l`.
    pub fn head(&self, l: usize) -> ReducedWord {
        ReducedWord {
            letters: self.letters[..l].to_vec(),
        }
    }

    /// Tail after the first `l` letters.
    pub fn tail(&self, l: usize) -> ReducedWord {
        ReducedWord {
            letters: self.letters[l..].to_vec(),
        }
    }

    /// Run-length `[(index, exponent)]` form.
    pub fn to_powers(&self) -> Vec<(usize, i64)> {
        let mut out: Vec<(usize, i64)> = Vec::new();
        for l in &self.letters {
            match out.last_mut() {
                Some((i, e)) if *i == l.index && (*e > 0) == (l.sign > 0) => *e += l.sign as i64,
                _ => out.push((l.index, l.sign as i64)),
            }
        }
        out
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .to_powers()
            .into_iter()
            .map(|(i, e)| {
                if e == 1 {
                    format!("t{i}")
                } else {
                    format!("t{i}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

impl Serialize for ReducedWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_powers().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ReducedWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs: Vec<(usize, i64)> = Vec::deserialize(d)?;
        if pairs.iter().any(|&(i, e)| i == 0 || e == 0) {
            return Err(D::Error::custom(
                "word pairs need index >= 1 and nonzero exponent",
            ));
        }
        let rank = pairs.iter().map(|p| p.0).max().unwrap_or(0);
        ReducedWord::from_powers(&pairs, rank).map_err(D::Error::custom)
    }
}

pub fn free_reduce(seq: &[Letter], rank: usize) -> Result<ReducedWord> {
    check_rank(seq, rank)?;
    Ok(ReducedWord::from_letters(seq.iter().copied()))
}

pub fn concat_reduce(u: &ReducedWord, v: &ReducedWord) -> ReducedWord {
    u.mul(v)
}

pub fn split(w: &ReducedWord, l: usize) -> Result<(ReducedWord, ReducedWord)> {
    if l > w.len() {
        return Err(Error::IndexOutOfRange(l));
    }
    Ok((w.head(l), w.tail(l)))
}

/// All reduced words of length `<= max_len` over `rank` generators, in shortlex order.
pub fn words_up_to(rank: usize, max_len: usize) -> Vec<ReducedWord> {
    let mut all = vec![ReducedWord::identity()];
    let mut layer = vec![ReducedWord::identity()];
    let mut letters: Vec<Letter> = (1..=rank)
        .flat_map(|i| [Letter::pos(i), Letter::neg(i)])
        .collect();
    letters.sort();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &l in &letters {
                if w.last().is_some_and(|last| last.is_inverse_of(l)) {
                    continue;
                }
                let mut v = w.letters.clone();
                v.push(l);
                next.push(ReducedWord { letters: v });
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all
}

/// A word in the free monoid on `x_1..x_n`, indices 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct XMonomial(pub Vec<usize>);

impl Ord for XMonomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.0.len().cmp(&o.0.len()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for XMonomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl XMonomial {
    pub fn empty() -> Self {
        XMonomial(Vec::new())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn concat(&self, o: &XMonomial) -> XMonomial {
        let mut v = self.0.clone();
        v.extend_from_slice(&o.0);
        XMonomial(v)
    }

    pub fn push(&self, i: usize) -> XMonomial {
        let mut v = self.0.clone();
        v.push(i);
        XMonomial(v)
    }

    pub fn check_rank(&self, rank: usize) -> Result<()> {
        match self.0.iter().find(|&&i| i == 0 || i > rank) {
            Some(&i) => Err(Error::RankExceeded { index: i, rank }),
            None => Ok(()),
        }
    }
}

impl fmt::Display for XMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut parts: Vec<String> = Vec::new();
        let mut k = 0;
        while k < self.0.len() {
            let i = self.0[k];
            let mut e = 1;
            while k + e < self.0.len() && self.0[k + e] == i {
                e += 1;
            }
            parts.push(if e == 1 {
                format!("x{i}")
            } else {
                format!("x{i}^{e}")
            });
            k += e;
        }
        write!(f, "{}", parts.join("*"))
    }
}

/// All monomials of degree exactly `d`.
pub fn monomials_of_degree(rank: usize, d: usize) -> Vec<XMonomial> {
    let mut layer = vec![XMonomial::empty()];
    for _ in 0..d {
        layer = layer
            .iter()
            .flat_map(|m| (1..=rank).map(move |i| m.push(i)))
            .collect();
    }
    layer
}
