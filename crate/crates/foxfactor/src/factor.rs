//! Right division, lattices of cyclic modules, greatest common right divisors,
//! irreducibility and factorization.
//!
//! Exact divisibility. For comonic `γ` and a finite-dimensional space `S` closed
//! under `∗_γ`, the quotients `R = {ρ : ργ ∈ S}` form a space closed under all Fox
//! derivatives, because `z_j ∗_γ (ργ) = (D_j ρ) γ`. A nonzero element of such a
//! space of length `m ≥ 1` always has a derivative of length `m - 1`, so once no
//! new element of length `L` appears, `R` has been found completely. Taking `S`
//! to be the `∗_γ`-closure of `λ` decides whether `λ ∈ Λγ`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fox::{derivative_span, derive, DerivativeIndex, StarContext};
use crate::lambda::{FreePolynomial, PolyJson};
use crate::linalg::{nullspace, transpose, Echelon, SparseVec};
use crate::repmod::{
    intertwiner_space, is_isomorphic, is_simple, minimal_submodule, projective_points, spin,
    OperatorModule, Subspace, Vector,
};
use crate::scalars::{FieldElem, FieldSpec};
use crate::words::{Letter, ReducedWord};

/// Upper bound on the number of candidate quotient words in one division.
const MAX_WORDS: usize = 60_000;
/// Candidates certified by [`gcd_set`] before giving up.
const MAX_GCD_CANDIDATES: usize = 6_000;
/// Exhaustive candidate enumeration over GF(p) stays below this many elements.
const EXHAUSTIVE_CANDIDATES: u64 = 3_125;
/// Longest multiplier word tried for a Bezout certificate.
const BEZOUT_WINDOW: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Divisibility {
    /// `λ = ρ γ`.
    Divides(FreePolynomial),
    /// Proven: `λ ∉ Λγ`.
    NotDivisible,
    /// No quotient on words up to this length and no proof either way.
    Unknown(usize),
}

pub fn default_max_len(lambda: &FreePolynomial, gamma: &FreePolynomial) -> usize {
    lambda.len_or_zero() + gamma.len_or_zero() + 4
}

fn extend_layer(rank: usize, layer: &[ReducedWord]) -> Vec<ReducedWord> {
    let mut out = Vec::new();
    for w in layer {
        for i in 1..=rank {
            for l in [Letter::pos(i), Letter::neg(i)] {
                if w.last() == Some(l.inverse()) {
                    continue;
                }
                out.push(ReducedWord::from_letters(
                    w.letters().iter().copied().chain([l]),
                ));
            }
        }
    }
    out
}

/// Smallest `∗_γ`-invariant space containing `seeds`.
fn star_closure(ctx: &StarContext, seeds: &[FreePolynomial]) -> Echelon<ReducedWord> {
    let ops = DerivativeIndex::all(ctx.rank());
    let mut ech = Echelon::new(ctx.gamma().field());
    let mut queue: Vec<FreePolynomial> = Vec::new();
    for s in seeds {
        if ech.insert(s.as_sparse()).is_some() {
            queue.push(s.clone());
        }
    }
    while let Some(p) = queue.pop() {
        for &d in &ops {
            let q = ctx.act_by(d, &p);
            if ech.insert(q.as_sparse()).is_some() {
                queue.push(q);
            }
        }
    }
    ech
}

/// Layer-by-layer computation of `{ρ : ργ ∈ S}` together with a solver for `λ = ργ`.
struct QuotientSearch<'a> {
    gamma: &'a FreePolynomial,
    /// `S` followed by the products `wγ` that were independent modulo `S`.
    mixed: Echelon<ReducedWord>,
    mixed_word: Vec<Option<usize>>,
    products: Echelon<ReducedWord>,
    words: Vec<ReducedWord>,
    layer: Vec<ReducedWord>,
    quotients: Vec<FreePolynomial>,
}

impl<'a> QuotientSearch<'a> {
    fn new(gamma: &'a FreePolynomial, s: &[SparseVec<ReducedWord>]) -> Self {
        let field = gamma.field();
        let mut mixed = Echelon::new(field);
        let mut mixed_word = Vec::new();
        for v in s {
            if mixed.insert(v).is_some() {
                mixed_word.push(None);
            }
        }
        QuotientSearch {
            gamma,
            mixed,
            mixed_word,
            products: Echelon::new(field),
            words: Vec::new(),
            layer: Vec::new(),
            quotients: Vec::new(),
        }
    }

    /// Adds all words of the next length; returns how many new quotients appeared,
    /// or `None` when the word budget is exhausted.
    fn grow(&mut self) -> Option<usize> {
        let (rank, field) = (self.gamma.rank(), self.gamma.field());
        self.layer = if self.words.is_empty() {
            vec![ReducedWord::identity()]
        } else {
            extend_layer(rank, &self.layer)
        };
        if self.words.len() + self.layer.len() > MAX_WORDS {
            return None;
        }
        let mut fresh = 0;
        for w in self.layer.clone() {
            let idx = self.words.len();
            self.words.push(w.clone());
            let prod = self.gamma.left_mul_word(&w);
            self.products.insert(prod.as_sparse());
            let (rem, combo) = self.mixed.reduce(prod.as_sparse());
            if rem.is_empty() {
                // wγ = Σ combo·basis, so (w - Σ_{word rows} combo·w_b) γ lies in S
                let mut rho = FreePolynomial::word(rank, field, w);
                for (b, c) in combo {
                    if let Some(wi) = self.mixed_word[b] {
                        rho.add_term(self.words[wi].clone(), -&c);
                    }
                }
                self.quotients.push(rho);
                fresh += 1;
            } else {
                self.mixed.insert(prod.as_sparse());
                self.mixed_word.push(Some(idx));
            }
        }
        Some(fresh)
    }

    fn solve(&self, target: &FreePolynomial) -> Option<FreePolynomial> {
        let coords = self.products.coordinates(target.as_sparse())?;
        let mut rho = FreePolynomial::zero(self.gamma.rank(), self.gamma.field());
        for (b, c) in coords {
            rho.add_term(self.words[b].clone(), c);
        }
        Some(rho)
    }
}

fn check_pair(a: &FreePolynomial, b: &FreePolynomial) -> Result<()> {
    if a.rank() != b.rank() {
        return Err(Error::RankMismatch(a.rank(), b.rank()));
    }
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(
            a.field().to_string(),
            b.field().to_string(),
        ));
    }
    Ok(())
}

/// Decides `λ ∈ Λγ`. Exact when `ε(γ) ≠ 0`; a bounded search otherwise.
pub fn right_divisibility(
    lambda: &FreePolynomial,
    gamma: &FreePolynomial,
    max_len: usize,
) -> Result<Divisibility> {
    if gamma.is_zero() {
        return Err(Error::ZeroDivisor);
    }
    check_pair(lambda, gamma)?;
    if lambda.is_zero() {
        return Ok(Divisibility::Divides(lambda.clone()));
    }
    let e = gamma.augmentation();
    let exact = !e.is_zero();
    let (gh, closure) = if exact {
        let gh = gamma.scale(&e.inv()?);
        let ctx = StarContext::new(&gh)?;
        let s = star_closure(&ctx, std::slice::from_ref(lambda));
        (gh, s.basis().to_vec())
    } else {
        (gamma.clone(), Vec::new())
    };
    let mut search = QuotientSearch::new(&gh, &closure);
    for _ in 0..=max_len {
        let Some(fresh) = search.grow() else { break };
        if let Some(rho) = search.solve(lambda) {
            let rho = if exact { rho.scale(&e.inv()?) } else { rho };
            if &(&rho * gamma) == lambda {
                return Ok(Divisibility::Divides(rho));
            }
            return Err(Error::Invalid("quotient failed verification".into()));
        }
        if exact && fresh == 0 {
            return Ok(Divisibility::NotDivisible);
        }
    }
    Ok(Divisibility::Unknown(max_len))
}

/// `ρ` with `ρ γ = λ`.
pub fn divide_right(
    lambda: &FreePolynomial,
    gamma: &FreePolynomial,
    max_len: Option<usize>,
) -> Result<FreePolynomial> {
    let bound = max_len.unwrap_or_else(|| default_max_len(lambda, gamma));
    match right_divisibility(lambda, gamma, bound)? {
        Divisibility::Divides(rho) => Ok(rho),
        _ => Err(Error::NotDivisibleWithinBound(bound)),
    }
}

/// `λ ∈ Λγ`, or `UnresolvedMembership` when only a bounded search was possible.
pub fn is_right_divisible(lambda: &FreePolynomial, gamma: &FreePolynomial) -> Result<bool> {
    match right_divisibility(lambda, gamma, default_max_len(lambda, gamma))? {
        Divisibility::Divides(_) => Ok(true),
        Divisibility::NotDivisible => Ok(false),
        Divisibility::Unknown(_) => Err(Error::UnresolvedMembership),
    }
}

/// The lattice `U = V/(V ∩ Λγ)` of `coker γ`, where `V` is the span of all
/// derivatives of `γ`, with the star operators and the class of `1`.
#[derive(Debug, Clone)]
pub struct Lattice {
    pub module: OperatorModule,
    pub gamma: FreePolynomial,
    pub one_class: Vector,
    span: Vec<FreePolynomial>,
    span_coords: Echelon<ReducedWord>,
    kernel: Subspace,
}

impl Lattice {
    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    /// Basis of the derivative span `V`.
    pub fn span(&self) -> &[FreePolynomial] {
        &self.span
    }

    /// `dim (V ∩ Λγ)`.
    pub fn kernel_dim(&self) -> usize {
        self.kernel.dim()
    }

    fn quotient_coords(&self, v: &[FieldElem]) -> Vector {
        let r = self.kernel.reduce(v);
        self.kernel
            .complement_positions()
            .into_iter()
            .map(|i| r[i].clone())
            .collect()
    }

    /// Coordinates of `[λ]` when `λ ∈ V`.
    pub fn class_of(&self, lambda: &FreePolynomial) -> Option<Vector> {
        let c = self.span_coords.coordinates(lambda.as_sparse())?;
        let mut v = vec![self.gamma.field().zero(); self.span.len()];
        for (i, x) in c {
            v[i] = x;
        }
        Some(self.quotient_coords(&v))
    }

    /// Preimage in `V` of a subspace of `U`, as polynomials.
    pub fn preimage(&self, sub: &Subspace) -> Vec<FreePolynomial> {
        let comp = self.kernel.complement_positions();
        let mut vecs: Vec<Vector> = self.kernel.basis().clone();
        for row in sub.basis() {
            let mut v = vec![self.gamma.field().zero(); self.span.len()];
            for (x, &i) in row.iter().zip(&comp) {
                v[i] = x.clone();
            }
            vecs.push(v);
        }
        vecs.iter().map(|v| self.combine(v)).collect()
    }

    fn combine(&self, v: &[FieldElem]) -> FreePolynomial {
        let mut p = FreePolynomial::zero(self.gamma.rank(), self.gamma.field());
        for (c, b) in v.iter().zip(&self.span) {
            if !c.is_zero() {
                p = &p + &b.scale(c);
            }
        }
        p
    }
}

pub fn lattice_of(gamma: &FreePolynomial) -> Result<Lattice> {
    if gamma.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !gamma.is_comonic() {
        return Err(Error::NotComonic);
    }
    if gamma.is_unit() {
        return Err(Error::IsUnit);
    }
    let (rank, field) = (gamma.rank(), gamma.field());
    let span = derivative_span(gamma)?.basis;
    let d = span.len();
    let mut span_coords = Echelon::new(field);
    for b in &span {
        span_coords.insert(b.as_sparse());
    }
    let coords = |p: &FreePolynomial| -> Result<Vector> {
        let c = span_coords
            .coordinates(p.as_sparse())
            .ok_or_else(|| Error::Invalid("derivative span is not closed".into()))?;
        let mut v = vec![field.zero(); d];
        for (i, x) in c {
            v[i] = x;
        }
        Ok(v)
    };
    let ctx = StarContext::new(gamma)?;
    let mut ops = Vec::new();
    for op in DerivativeIndex::all(rank) {
        let mut m = crate::linalg::zeros(field, d, d);
        for (c, b) in span.iter().enumerate() {
            for (r, x) in coords(&ctx.act_by(op, b))?.into_iter().enumerate() {
                m[r][c] = x;
            }
        }
        ops.push(m);
    }
    let full = OperatorModule::new(field, d, ops)?.with_labels(span.clone())?;

    // V ∩ Λγ = {ρ : ργ ∈ V} γ, found exactly
    let sparse: Vec<SparseVec<ReducedWord>> = span.iter().map(|b| b.as_sparse().clone()).collect();
    let mut search = QuotientSearch::new(gamma, &sparse);
    loop {
        match search.grow() {
            Some(0) => break,
            Some(_) => {}
            None => return Err(Error::UnresolvedMembership),
        }
    }
    let kvecs = search
        .quotients
        .iter()
        .map(|rho| coords(&(rho * gamma)))
        .collect::<Result<Vec<_>>>()?;
    let kernel = Subspace::from_vectors(field, d, &kvecs)?;
    let module = full.quotient(&kernel)?;
    let one = coords(&FreePolynomial::one(rank, field))?;
    let mut lat = Lattice {
        module,
        gamma: gamma.clone(),
        one_class: Vec::new(),
        span,
        span_coords,
        kernel,
    };
    lat.one_class = lat.quotient_coords(&one);
    Ok(lat)
}

fn normalize(gamma: &FreePolynomial) -> Result<(FieldElem, FreePolynomial)> {
    if gamma.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let e = gamma.augmentation();
    if e.is_zero() {
        return Err(Error::ZeroAugmentation);
    }
    Ok((e.clone(), gamma.scale(&e.inv()?)))
}

/// Orders the support from the largest word down, for canonical comparisons.
fn sort_key(g: &FreePolynomial) -> (usize, Vec<ReducedWord>, Vec<FieldElem>) {
    let terms: Vec<(&ReducedWord, &FieldElem)> = g.terms().rev().collect();
    (
        g.len_or_zero(),
        terms.iter().map(|t| t.0.clone()).collect(),
        terms.iter().map(|t| t.1.clone()).collect(),
    )
}

/// Representative of `{c w γ}` (units `c w`): comonic, then least by length, support and coefficients.
pub fn canonical_associate(gamma: &FreePolynomial) -> Result<FreePolynomial> {
    let (_, g) = normalize(gamma)?;
    let anchor = g.support().next().expect("nonzero").inverse();
    let mut best = g.clone();
    let mut best_key = sort_key(&g);
    for v in crate::words::words_up_to(g.rank(), g.len_or_zero()) {
        let w = v.mul(&anchor);
        let cand = g.left_mul_word(&w);
        let key = sort_key(&cand);
        if key < best_key {
            best = cand;
            best_key = key;
        }
    }
    Ok(best)
}

/// Comonic polynomials generating the same left ideal of the Fox algebra as `λ`.
pub fn comonic_generators(lambda: &FreePolynomial) -> Result<Vec<FreePolynomial>> {
    if lambda.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (rank, field) = (lambda.rank(), lambda.field());
    let one = FreePolynomial::one(rank, field);
    let ops = DerivativeIndex::all(rank);
    // Y: closed under derivatives of its augmentation-zero part (x_i^* z = ∂_i z there)
    let mut y: Echelon<ReducedWord> = Echelon::new(field);
    y.insert(lambda.as_sparse());
    let kernel_of = |y: &Echelon<ReducedWord>| -> (Option<FreePolynomial>, Vec<FreePolynomial>) {
        let polys: Vec<FreePolynomial> = y
            .basis()
            .iter()
            .map(|v| FreePolynomial::from_sparse(rank, field, v.clone()))
            .collect();
        let pivot = polys.iter().position(|p| !p.augmentation().is_zero());
        let Some(pi) = pivot else {
            return (None, polys);
        };
        let c = polys[pi].scale(&polys[pi].augmentation().inv().expect("nonzero"));
        let ker = polys
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != pi)
            .map(|(_, p)| p - &c.scale(&p.augmentation()))
            .collect();
        (Some(c), ker)
    };
    loop {
        let (_, ker) = kernel_of(&y);
        let mut grew = false;
        for z in &ker {
            for &d in &ops {
                if y.insert(derive(d, z).as_sparse()).is_some() {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    if y.contains(one.as_sparse()) {
        return Ok(vec![one]);
    }
    let (c, _) = kernel_of(&y);
    let c =
        c.ok_or_else(|| Error::Invalid("derivative-closed space without comonic element".into()))?;
    let c = if lambda.augmentation().is_zero() {
        c
    } else {
        lambda.scale(&lambda.augmentation().inv()?)
    };
    let mut ker_ech: Echelon<ReducedWord> = Echelon::new(field);
    for p in y.basis() {
        let p = FreePolynomial::from_sparse(rank, field, p.clone());
        ker_ech.insert((&p - &c.scale(&p.augmentation())).as_sparse());
    }
    let mut gens = vec![c.clone()];
    for z in ker_ech.rref_rows() {
        gens.push(&c + &FreePolynomial::from_sparse(rank, field, z));
    }
    if gens.iter().any(|g| g.is_unit()) {
        return Ok(vec![one]);
    }
    gens.sort_by_key(sort_key);
    let mut kept: Vec<FreePolynomial> = Vec::new();
    for g in gens {
        let mut redundant = false;
        for h in &kept {
            if let Divisibility::Divides(_) = right_divisibility(&g, h, default_max_len(&g, h))? {
                redundant = true;
                break;
            }
        }
        if !redundant {
            kept.push(g);
        }
    }
    Ok(kept)
}

/// `{u : (u, 0) ∈ Λ*·([1], [1])}` inside `U_γ ⊕ U_g`.
fn common_part(a: &Lattice, b: &Lattice) -> Result<Subspace> {
    let field = a.gamma.field();
    let sum = a.module.direct_sum(&b.module)?;
    let mut seed = a.one_class.clone();
    seed.extend(b.one_class.iter().cloned());
    let w = spin(&sum, &[seed])?;
    let (da, db) = (a.dim(), b.dim());
    let k = w.dim();
    let second: crate::linalg::Matrix = w.basis().iter().map(|r| r[da..].to_vec()).collect();
    let combos = if db == 0 {
        crate::linalg::identity(field, k)
    } else {
        nullspace(&transpose(&second, field, k, db), field, k)
    };
    let vecs: Vec<Vector> = combos
        .iter()
        .map(|c| {
            let mut u = vec![field.zero(); da];
            for (ci, row) in c.iter().zip(w.basis()) {
                if ci.is_zero() {
                    continue;
                }
                for (x, y) in u.iter_mut().zip(&row[..da]) {
                    *x += &(ci * y);
                }
            }
            u
        })
        .collect();
    Subspace::from_vectors(field, da, &vecs)
}

type WordKey = (usize, Vec<(usize, i8)>, ReducedWord);

fn keyed(order: usize, w: &ReducedWord) -> WordKey {
    let letters = w
        .letters()
        .iter()
        .map(|l| (l.index, if l.sign > 0 { 0i8 } else { 1 }));
    let k: Vec<(usize, i8)> = match order {
        0 => letters.collect(),
        1 => letters.rev().collect(),
        _ => letters.map(|(i, s)| (i, 1 - s)).collect(),
    };
    (w.len(), k, w.clone())
}

fn rows_in_order(polys: &[FreePolynomial], order: usize) -> Vec<FreePolynomial> {
    let Some(first) = polys.first() else {
        return Vec::new();
    };
    let (rank, field) = (first.rank(), first.field());
    let mut ech: Echelon<WordKey> = Echelon::new(field);
    for p in polys {
        let v: SparseVec<WordKey> = p
            .terms()
            .map(|(w, c)| (keyed(order, w), c.clone()))
            .collect();
        ech.insert(&v);
    }
    ech.rref_rows()
        .into_iter()
        .map(|r| {
            FreePolynomial::from_sparse(rank, field, r.into_iter().map(|(k, c)| (k.2, c)).collect())
        })
        .collect()
}

/// Comonic elements of `field` supported on `words`, all of them.
fn all_comonic_on(words: &[ReducedWord], rank: usize, field: FieldSpec) -> Vec<FreePolynomial> {
    let Some(elems) = field.elements() else {
        return Vec::new();
    };
    let q = elems.len() as u64;
    let free = words.len().saturating_sub(1);
    let total = q.saturating_pow(free as u32);
    let mut out = Vec::new();
    for mut code in 0..total {
        let mut p = FreePolynomial::zero(rank, field);
        let mut sum = field.zero();
        for w in &words[1..] {
            let c = elems[(code % q) as usize].clone();
            code /= q;
            sum += &c;
            p.add_term(w.clone(), c);
        }
        p.add_term(words[0].clone(), &field.one() - &sum);
        out.push(p);
    }
    out
}

/// Comonic canonical candidates in two stages: combinations of `t`, then every
/// comonic polynomial of length one when the field is small enough.
fn gcd_candidates(t: &[FreePolynomial], bound: usize) -> Vec<Vec<FreePolynomial>> {
    let Some(first) = t.first() else {
        return Vec::new();
    };
    let (rank, field) = (first.rank(), first.field());
    let mut rows: Vec<FreePolynomial> = Vec::new();
    for order in 0..3 {
        for r in rows_in_order(t, order) {
            if !rows.contains(&r) {
                rows.push(r);
            }
        }
    }
    let mut raw: Vec<FreePolynomial> = rows.clone();
    let lim = rows.len().min(40);
    for i in 0..lim {
        for j in i + 1..lim {
            raw.push(&rows[i] + &rows[j]);
            raw.push(&rows[i] - &rows[j]);
        }
    }
    if field.size().is_some() {
        let basis = rows_in_order(t, 0);
        if let Some(points) = projective_points(field, basis.len(), EXHAUSTIVE_CANDIDATES) {
            for c in points {
                let mut p = FreePolynomial::zero(rank, field);
                for (ci, b) in c.iter().zip(&basis) {
                    if !ci.is_zero() {
                        p = &p + &b.scale(ci);
                    }
                }
                raw.push(p);
            }
        }
    }
    let mut stages = vec![raw];
    if let Some(size) = field.size() {
        let short = crate::words::words_up_to(rank, 1);
        if size
            .checked_pow(short.len() as u32 - 1)
            .is_some_and(|n| n <= EXHAUSTIVE_CANDIDATES)
        {
            stages.push(all_comonic_on(&short, rank, field));
        }
    }
    let mut seen = BTreeSet::new();
    stages
        .into_iter()
        .map(|stage| {
            let mut out: Vec<FreePolynomial> = Vec::new();
            for p in stage {
                if p.is_zero() || p.augmentation().is_zero() || p.is_unit() {
                    continue;
                }
                let Ok(c) = canonical_associate(&p) else {
                    continue;
                };
                if c.is_unit() || c.len_or_zero() > bound {
                    continue;
                }
                if seen.insert(sort_key(&c)) {
                    out.push(c);
                }
            }
            out.sort_by_key(sort_key);
            out
        })
        .collect()
}

/// Generator of the left ideal `Σ L(Λ)g`, as a canonical comonic polynomial.
pub fn gcd_set(gens: &[FreePolynomial]) -> Result<FreePolynomial> {
    let first = gens.first().ok_or(Error::ZeroPolynomial)?;
    let (rank, field) = (first.rank(), first.field());
    let one = FreePolynomial::one(rank, field);
    let mut all: Vec<FreePolynomial> = Vec::new();
    for g in gens {
        check_pair(first, g)?;
        for c in comonic_generators(g)? {
            if c.is_unit() {
                return Ok(one);
            }
            let c = canonical_associate(&c)?;
            if !all.contains(&c) {
                all.push(c);
            }
        }
    }
    all.sort_by_key(sort_key);
    if all.len() == 1 {
        return Ok(all.remove(0));
    }
    let pivot = all[0].clone();
    let lp = lattice_of(&pivot)?;
    let mut p = Subspace::zero(field, lp.dim());
    for g in &all[1..] {
        let lg = lattice_of(g)?;
        p = p.sum(&common_part(&lp, &lg)?)?;
    }
    let q = lp.dim() - p.dim();
    if q == 0 {
        return Ok(one);
    }
    let t = lp.preimage(&p);
    let cands: Vec<FreePolynomial> = gcd_candidates(&t, pivot.len_or_zero())
        .into_iter()
        .flatten()
        .collect();
    let mut dividing: Vec<(usize, FreePolynomial)> = Vec::new();
    for d in cands.iter().take(MAX_GCD_CANDIDATES) {
        if !divides_all(d, &all)? {
            continue;
        }
        let dim = lattice_of(d)?.dim();
        if dim == q {
            return Ok(d.clone());
        }
        dividing.push((dim, d.clone()));
    }
    // q may overestimate; fall back to a Bezout certificate d ∈ Λγ + ΛG
    dividing.push((0, one));
    dividing.sort_by_key(|x| std::cmp::Reverse(x.0));
    let mut window = IdealWindow::new(&pivot, &all[1..])?;
    for _ in 0..=BEZOUT_WINDOW {
        if !window.grow() {
            break;
        }
        if let Some((_, d)) = dividing.iter().find(|(_, d)| window.contains(d)) {
            return Ok(d.clone());
        }
    }
    Err(Error::BudgetExhausted(format!(
        "no certified divisor among {} candidates",
        cands.len()
    )))
}

fn divides_all(d: &FreePolynomial, gens: &[FreePolynomial]) -> Result<bool> {
    for g in gens {
        match right_divisibility(g, d, default_max_len(g, d))? {
            Divisibility::Divides(_) => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// `span{w v : |w| <= L, v ∈ {γ} ∪ G}` with `G` the `∗_γ`-closure of the other
/// generators. Since `z_j ∗_γ g = x_j^*(g - ε(g)γ)`, everything here lies in the
/// left ideal generated by all inputs, so a common right divisor found inside is
/// their greatest one.
struct IdealWindow {
    rank: usize,
    seeds: Vec<FreePolynomial>,
    span: Echelon<ReducedWord>,
    layer: Vec<ReducedWord>,
    started: bool,
    words: usize,
}

impl IdealWindow {
    fn new(gamma: &FreePolynomial, others: &[FreePolynomial]) -> Result<Self> {
        let (rank, field) = (gamma.rank(), gamma.field());
        let ctx = StarContext::new(gamma)?;
        let closure = star_closure(&ctx, others);
        let mut seeds = vec![gamma.clone()];
        seeds.extend(
            closure
                .basis()
                .iter()
                .map(|v| FreePolynomial::from_sparse(rank, field, v.clone())),
        );
        Ok(IdealWindow {
            rank,
            seeds,
            span: Echelon::new(field),
            layer: Vec::new(),
            started: false,
            words: 0,
        })
    }

    fn grow(&mut self) -> bool {
        self.layer = if self.started {
            extend_layer(self.rank, &self.layer)
        } else {
            vec![ReducedWord::identity()]
        };
        self.started = true;
        self.words += self.layer.len();
        if self.words * self.seeds.len() > MAX_WORDS {
            return false;
        }
        for w in &self.layer {
            for v in &self.seeds {
                self.span.insert(v.left_mul_word(w).as_sparse());
            }
        }
        true
    }

    fn contains(&self, d: &FreePolynomial) -> bool {
        self.span.contains(d.as_sparse())
    }
}

pub fn gcd(gamma: &FreePolynomial, lambda: &FreePolynomial) -> Result<FreePolynomial> {
    gcd_set(&[gamma.clone(), lambda.clone()])
}

/// Writes a comonic non-unit `γ` as `γ_0 s` with `s` a word, shifting by suffixes
/// of support words while that shrinks the lattice.
///
/// `γ` and `γ s^-1` have isomorphic quotients, but the derivative span of `γ`
/// also sees the prefixes of `s`, so a right unit factor can make the lattice of
/// an irreducible polynomial non-simple.
pub fn strip_right_unit(gamma: &FreePolynomial) -> Result<(FreePolynomial, ReducedWord)> {
    let mut cur = gamma.clone();
    let mut dim = lattice_of(&cur)?.dim();
    let mut tail = ReducedWord::identity();
    loop {
        let mut suffixes: BTreeSet<ReducedWord> = BTreeSet::new();
        for w in cur.support() {
            for k in 0..w.len() {
                suffixes.insert(w.tail(k));
            }
        }
        let mut best: Option<(usize, FreePolynomial, ReducedWord)> = None;
        for s in suffixes {
            let c = cur.right_mul_word(&s.inverse());
            let d = lattice_of(&c)?.dim();
            if d < best.as_ref().map_or(dim, |b| b.0) {
                best = Some((d, c, s));
            }
        }
        match best {
            Some((d, c, s)) => {
                dim = d;
                cur = c;
                tail = s.mul(&tail);
            }
            None => return Ok((cur, tail)),
        }
    }
}

fn reduced(gamma: &FreePolynomial) -> Result<FreePolynomial> {
    let (_, g) = normalize(gamma)?;
    if g.is_unit() {
        return Err(Error::IsUnit);
    }
    Ok(strip_right_unit(&g)?.0)
}

pub fn is_irreducible(gamma: &FreePolynomial) -> Result<bool> {
    is_simple(&lattice_of(&reduced(gamma)?)?.module)
}

pub fn similar(gamma: &FreePolynomial, lambda: &FreePolynomial) -> Result<bool> {
    check_pair(gamma, lambda)?;
    let (a, b) = (reduced(gamma)?, reduced(lambda)?);
    is_isomorphic(&lattice_of(&a)?.module, &lattice_of(&b)?.module)
}

pub fn endo_dim(gamma: &FreePolynomial) -> Result<usize> {
    let m = lattice_of(&reduced(gamma)?)?.module;
    Ok(intertwiner_space(&m, &m)?.dim())
}

/// `γ = unit · unit_word · π_1 ⋯ π_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: FieldElem,
    pub unit_word: ReducedWord,
    pub factors: Vec<FreePolynomial>,
}

impl Factorization {
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn product(&self, rank: usize) -> FreePolynomial {
        let start = FreePolynomial::monomial(rank, self.unit_word.clone(), self.unit.clone());
        self.factors.iter().fold(start, |acc, f| &acc * f)
    }

    pub fn to_json(&self, rank: usize, input: &FreePolynomial) -> FactorizationJson {
        FactorizationJson {
            unit: self.unit.to_string(),
            unit_word: (!self.unit_word.is_empty()).then(|| self.unit_word.clone()),
            factors: self.factors.iter().map(|f| f.to_json()).collect(),
            length: self.factors.len(),
            verified: &self.product(rank) == input,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationJson {
    pub unit: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit_word: Option<ReducedWord>,
    pub factors: Vec<PolyJson>,
    pub length: usize,
    pub verified: bool,
}

/// Peels irreducible left factors off a comonic polynomial, one simple
/// submodule of the lattice at a time.
pub fn factorize(gamma: &FreePolynomial) -> Result<Factorization> {
    let (unit, mut cur) = normalize(gamma)?;
    let rank = gamma.rank();
    let mut factors: Vec<FreePolynomial> = Vec::new();
    // γ = unit · factors · cur · tail throughout
    let mut tail = ReducedWord::identity();
    while !cur.is_unit() {
        let (c, s) = strip_right_unit(&cur)?;
        cur = c;
        tail = s.mul(&tail);
        let lat = lattice_of(&cur)?;
        if is_simple(&lat.module)? {
            factors.push(cur.clone());
            cur = FreePolynomial::one(rank, gamma.field());
            break;
        }
        let n = minimal_submodule(&lat.module)?;
        let mu = n
            .basis()
            .iter()
            .filter_map(|v| lat.module.label_of(v))
            .min_by_key(sort_key)
            .ok_or_else(|| Error::Invalid("lattice without labels".into()))?;
        let delta = gcd_set(&[mu, cur.clone()])?;
        if delta.is_unit() || delta.len_or_zero() == 0 {
            return Err(Error::BudgetExhausted(
                "factor extraction produced a unit".into(),
            ));
        }
        let pi = match right_divisibility(&cur, &delta, default_max_len(&cur, &delta))? {
            Divisibility::Divides(p) => p,
            _ => {
                return Err(Error::BudgetExhausted(
                    "right factor does not divide".into(),
                ))
            }
        };
        factors.push(pi);
        cur = delta;
    }
    // what is left is a comonic unit, i.e. a word
    let w = cur
        .support()
        .next()
        .cloned()
        .unwrap_or_else(ReducedWord::identity)
        .mul(&tail);
    let unit_word = match factors.last_mut() {
        Some(last) if !w.is_empty() => {
            *last = last.right_mul_word(&w);
            ReducedWord::identity()
        }
        _ => w,
    };
    let f = Factorization {
        unit,
        unit_word,
        factors,
    };
    if &f.product(rank) != gamma {
        return Err(Error::Invalid("factorization failed verification".into()));
    }
    Ok(f)
}
