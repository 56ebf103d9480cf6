//! Brute-force factor search over small prime fields.
//!
//! Kept apart from the rest of the crate: nothing in the library calls into it,
//! and its cost is exponential in the size of the word window.
//!
//! A pair `(α, β)` is determined by `α` alone (left multiplication by a nonzero
//! element is injective), so the search enumerates one factor and solves a linear
//! system for the other.
//!
//! When `max_len = 2` and `|γ| ≤ 2` the window of length-2 words is too big to
//! enumerate, but it does not need to be. If both factors have length 2, every
//! length-4 word of `αβ` is a product `u v` of top words with no cancellation, so
//! all top words of `α` end in one letter `L` and all top words of `β` start with
//! `L^-1`. The length-3 words `x L s` and `r L^-1 y` then force the lower parts of
//! `α` and `β` into `span{1, L}` and `span{1, L^-1}`. Hence `α L^-1` and `L β`
//! are both supported on words of length at most 1, and such pairs come from
//! length-1 solutions shifted by a letter.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::lambda::FreePolynomial;
use crate::linalg::Echelon;
use crate::scalars::FieldSpec;
use crate::words::{words_up_to, Letter, ReducedWord};

/// Enumerations larger than this are refused.
pub const SEARCH_LIMIT: u128 = 10_000_000;

/// All pairs of non-unit comonic `(α, β)` supported on words of length
/// `≤ max_len` with `α β = γ`, in enumeration order.
pub fn run_oracle_factor_search(
    gamma: &FreePolynomial,
    max_len: usize,
) -> Result<Vec<(FreePolynomial, FreePolynomial)>> {
    let field = gamma.field();
    let FieldSpec::Prime(p) = field else {
        return Err(Error::Invalid("factor search needs a prime field".into()));
    };
    if gamma.rank() != 2 {
        return Err(Error::Invalid("factor search needs rank 2".into()));
    }
    if max_len > 2 {
        return Err(Error::Invalid("factor search needs max_len <= 2".into()));
    }
    if gamma.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if gamma.is_unit() {
        return Err(Error::IsUnit);
    }
    let mut out = Pairs::default();
    if !gamma.is_comonic() || max_len == 0 {
        return Ok(out.list);
    }
    let rank = gamma.rank();
    let window = words_up_to(rank, max_len);
    let short = words_up_to(rank, 1);
    let reduced = max_len == 2 && gamma.len_or_zero() <= 2;
    let count = if reduced {
        2 * pow(p, short.len() - 1)
    } else {
        pow(p, window.len() - 1)
    };
    if count > SEARCH_LIMIT {
        return Err(Error::SearchSpaceTooLarge(count));
    }

    if !reduced {
        for alpha in comonic_on(rank, field, &window) {
            if let Some(beta) = solve(&alpha, gamma, &window, Side::Right) {
                out.push(alpha, beta, max_len);
            }
        }
        return Ok(out.list);
    }

    let mut short_pairs = Vec::new();
    for alpha in comonic_on(rank, field, &short) {
        if let Some(beta) = solve(&alpha, gamma, &window, Side::Right) {
            if beta.len_or_zero() <= 1 {
                short_pairs.push((alpha.clone(), beta.clone()));
            }
            out.push(alpha, beta, max_len);
        }
    }
    for beta in comonic_on(rank, field, &short) {
        if let Some(alpha) = solve(&beta, gamma, &window, Side::Left) {
            out.push(alpha, beta, max_len);
        }
    }
    let letters = [
        Letter::pos(1),
        Letter::neg(1),
        Letter::pos(2),
        Letter::neg(2),
    ];
    for (a, b) in &short_pairs {
        for l in letters {
            let w = ReducedWord::letter(l);
            out.push(a.right_mul_word(&w), b.left_mul_word(&w.inverse()), max_len);
        }
    }
    Ok(out.list)
}

/// True when the search finds no non-trivial factorization in the window.
pub fn oracle_irreducible(gamma: &FreePolynomial, max_len: usize) -> Result<bool> {
    Ok(run_oracle_factor_search(gamma, max_len)?.is_empty())
}

#[derive(Default)]
struct Pairs {
    seen: HashSet<(FreePolynomial, FreePolynomial)>,
    list: Vec<(FreePolynomial, FreePolynomial)>,
}

impl Pairs {
    fn push(&mut self, a: FreePolynomial, b: FreePolynomial, max_len: usize) {
        let fits =
            |q: &FreePolynomial| !q.is_unit() && q.is_comonic() && q.len_or_zero() <= max_len;
        if fits(&a) && fits(&b) && self.seen.insert((a.clone(), b.clone())) {
            self.list.push((a, b));
        }
    }
}

#[derive(Clone, Copy)]
enum Side {
    /// Unknown on the right: `known · x = target`.
    Right,
    /// Unknown on the left: `x · known = target`.
    Left,
}

fn solve(
    known: &FreePolynomial,
    target: &FreePolynomial,
    words: &[ReducedWord],
    side: Side,
) -> Option<FreePolynomial> {
    let mut ech = Echelon::new(target.field());
    for w in words {
        let v = match side {
            Side::Right => known.right_mul_word(w),
            Side::Left => known.left_mul_word(w),
        };
        ech.insert(v.as_sparse());
    }
    let coords = ech.coordinates(target.as_sparse())?;
    let mut x = FreePolynomial::zero(target.rank(), target.field());
    for (i, c) in coords {
        x.add_term(words[i].clone(), c);
    }
    Some(x)
}

/// Every polynomial on `words` whose coefficients sum to 1.
fn comonic_on(rank: usize, field: FieldSpec, words: &[ReducedWord]) -> Vec<FreePolynomial> {
    let elems = field.elements().expect("finite field");
    let k = words.len();
    let mut out = Vec::new();
    let mut idx = vec![0usize; k - 1];
    loop {
        let mut poly = FreePolynomial::zero(rank, field);
        let mut sum = field.zero();
        for (w, &i) in words[1..].iter().zip(&idx) {
            poly.add_term(w.clone(), elems[i].clone());
            sum = &sum + &elems[i];
        }
        poly.add_term(words[0].clone(), &field.one() - &sum);
        out.push(poly);
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return out;
            }
            idx[pos] += 1;
            if idx[pos] < elems.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

fn pow(p: u64, e: usize) -> u128 {
    (p as u128).saturating_pow(e as u32)
}
