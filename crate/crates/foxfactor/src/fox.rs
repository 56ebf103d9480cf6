//! Fox derivatives, the star action `∗_γ` and derivative spans.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lambda::FreePolynomial;
use crate::linalg::{Echelon, Matrix};
use crate::scalars::FieldElem;
use crate::words::{Letter, ReducedWord};

/// `∂_i` (with respect to `t_i`) or, when `barred`, `∂̄_i` (with respect to `t_i^-1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DerivativeIndex {
    pub index: usize,
    pub barred: bool,
}

impl DerivativeIndex {
    pub fn new(index: usize, barred: bool) -> Self {
        DerivativeIndex { index, barred }
    }

    /// Unbarred indices ascending, then barred ascending.
    pub fn all(rank: usize) -> Vec<DerivativeIndex> {
        (1..=rank)
            .map(|i| DerivativeIndex::new(i, false))
            .chain((1..=rank).map(|i| DerivativeIndex::new(i, true)))
            .collect()
    }

    /// Position `j` in `1..=2n` of the operator `z_j`.
    pub fn from_operator(j: usize, rank: usize) -> Result<Self> {
        match j {
            _ if j >= 1 && j <= rank => Ok(DerivativeIndex::new(j, false)),
            _ if j > rank && j <= 2 * rank => Ok(DerivativeIndex::new(j - rank, true)),
            _ => Err(Error::IndexOutOfRange(j)),
        }
    }

    pub fn operator(&self, rank: usize) -> usize {
        if self.barred {
            rank + self.index
        } else {
            self.index
        }
    }

    /// The letter the derivative is dual to.
    pub fn letter(&self) -> Letter {
        Letter {
            index: self.index,
            sign: if self.barred { -1 } else { 1 },
        }
    }
}

impl From<Letter> for DerivativeIndex {
    fn from(l: Letter) -> Self {
        DerivativeIndex::new(l.index, l.sign < 0)
    }
}

impl fmt::Display for DerivativeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.barred {
            write!(f, "d~{}", self.index)
        } else {
            write!(f, "d{}", self.index)
        }
    }
}

/// Derivative of a single reduced word, accumulated into `out` with factor `c`.
fn word_derivative(d: DerivativeIndex, w: &ReducedWord, c: &FieldElem, out: &mut FreePolynomial) {
    let dual = d.letter();
    for (k, &l) in w.letters().iter().enumerate() {
        if l == dual {
            out.add_term(w.tail(k + 1), c.clone());
        } else if l == dual.inverse() {
            out.add_term(w.tail(k), -c);
        }
    }
}

pub fn partial_derivative(d: DerivativeIndex, g: &FreePolynomial) -> Result<FreePolynomial> {
    if d.index == 0 || d.index > g.rank() {
        return Err(Error::RankExceeded {
            index: d.index,
            rank: g.rank(),
        });
    }
    Ok(derive(d, g))
}

pub(crate) fn derive(d: DerivativeIndex, g: &FreePolynomial) -> FreePolynomial {
    let mut out = FreePolynomial::zero(g.rank(), g.field());
    for (w, c) in g.terms() {
        word_derivative(d, w, c, &mut out);
    }
    out
}

/// `∂_w`: the letters of `w` are applied left to right, so the last letter acts last.
pub fn higher_derivative(w: &ReducedWord, g: &FreePolynomial) -> Result<FreePolynomial> {
    if w.max_index() > g.rank() {
        return Err(Error::RankExceeded {
            index: w.max_index(),
            rank: g.rank(),
        });
    }
    Ok(derive_along(w.letters().iter().map(|&l| l.into()), g))
}

pub(crate) fn derive_along(
    path: impl IntoIterator<Item = DerivativeIndex>,
    g: &FreePolynomial,
) -> FreePolynomial {
    path.into_iter().fold(g.clone(), |acc, d| derive(d, &acc))
}

/// Comonic `γ` with its first derivatives cached: `z_j ∗_γ λ = D_j λ - ε(λ) D_j γ`.
#[derive(Debug, Clone)]
pub struct StarContext {
    gamma: FreePolynomial,
    derivs: Vec<FreePolynomial>,
}

impl StarContext {
    pub fn new(gamma: &FreePolynomial) -> Result<Self> {
        if !gamma.is_comonic() {
            return Err(Error::NotComonic);
        }
        let derivs = DerivativeIndex::all(gamma.rank())
            .into_iter()
            .map(|d| derive(d, gamma))
            .collect();
        Ok(StarContext {
            gamma: gamma.clone(),
            derivs,
        })
    }

    pub fn gamma(&self) -> &FreePolynomial {
        &self.gamma
    }

    pub fn rank(&self) -> usize {
        self.gamma.rank()
    }

    /// `z_j ∗_γ λ` for `j` in `1..=2n`.
    pub fn act(&self, j: usize, lambda: &FreePolynomial) -> Result<FreePolynomial> {
        let d = DerivativeIndex::from_operator(j, self.rank())?;
        Ok(self.act_by(d, lambda))
    }

    pub fn act_by(&self, d: DerivativeIndex, lambda: &FreePolynomial) -> FreePolynomial {
        let e = lambda.augmentation();
        let base = derive(d, lambda);
        if e.is_zero() {
            return base;
        }
        &base - &self.derivs[d.operator(self.rank()) - 1].scale(&e)
    }
}

pub fn star_action(ctx: &StarContext, j: usize, lambda: &FreePolynomial) -> Result<FreePolynomial> {
    ctx.act(j, lambda)
}

/// The span of all higher derivatives `∂_w γ`.
#[derive(Debug, Clone, Serialize)]
pub struct DerivativeSpan {
    /// Fully reduced echelon basis in increasing pivot order.
    pub basis: Vec<FreePolynomial>,
    /// Derivative words (as operator paths) and the derivatives they produced,
    /// in breadth-first discovery order; these span the same space.
    pub generators: Vec<(Vec<DerivativeIndex>, FreePolynomial)>,
    /// Matrices of the 2n letter derivatives on `basis`, column convention.
    pub matrices: Vec<Matrix>,
}

impl DerivativeSpan {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

pub fn derivative_span(g: &FreePolynomial) -> Result<DerivativeSpan> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (rank, field) = (g.rank(), g.field());
    let ops = DerivativeIndex::all(rank);
    let mut ech: Echelon<ReducedWord> = Echelon::new(field);
    let mut generators = Vec::new();
    let mut queue = VecDeque::new();
    ech.insert(g.as_sparse());
    generators.push((Vec::new(), g.clone()));
    queue.push_back(0usize);
    while let Some(k) = queue.pop_front() {
        let (path, p) = generators[k].clone();
        for &d in &ops {
            let q = derive(d, &p);
            if ech.insert(q.as_sparse()).is_some() {
                let mut np = path.clone();
                np.push(d);
                generators.push((np, q));
                queue.push_back(generators.len() - 1);
            }
        }
    }
    let rows = ech.rref_rows();
    let basis: Vec<FreePolynomial> = rows
        .into_iter()
        .map(|r| FreePolynomial::from_sparse(rank, field, r))
        .collect();
    let mut coords: Echelon<ReducedWord> = Echelon::new(field);
    for b in &basis {
        coords.insert(b.as_sparse());
    }
    let dim = basis.len();
    let mut matrices = Vec::with_capacity(ops.len());
    for &d in &ops {
        let mut m = crate::linalg::zeros(field, dim, dim);
        for (j, b) in basis.iter().enumerate() {
            let img = derive(d, b);
            let c = coords
                .coordinates(img.as_sparse())
                .expect("span is closed under derivatives");
            for (i, v) in c {
                m[i][j] = v;
            }
        }
        matrices.push(m);
    }
    Ok(DerivativeSpan {
        basis,
        generators,
        matrices,
    })
}

/// Breadth-first search for a derivative word `w` with `|w| <= max_len` and
/// `∂_w λ` a nonzero constant. Returns the word and the constant.
pub fn constant_derivative_witness(
    lambda: &FreePolynomial,
    max_len: usize,
) -> Option<(Vec<DerivativeIndex>, FieldElem)> {
    if lambda.is_zero() {
        return None;
    }
    let ops = DerivativeIndex::all(lambda.rank());
    let mut seen: BTreeSet<Vec<(ReducedWord, FieldElem)>> = BTreeSet::new();
    let key = |p: &FreePolynomial| -> Vec<(ReducedWord, FieldElem)> {
        p.terms().map(|(w, c)| (w.clone(), c.clone())).collect()
    };
    let mut layer: Vec<(Vec<DerivativeIndex>, FreePolynomial)> = vec![(Vec::new(), lambda.clone())];
    seen.insert(key(lambda));
    for depth in 0..=max_len {
        for (path, p) in &layer {
            if p.num_terms() == 1 && p.len_or_zero() == 0 {
                return Some((path.clone(), p.augmentation()));
            }
        }
        if depth == max_len {
            break;
        }
        let mut next = Vec::new();
        for (path, p) in &layer {
            for &d in &ops {
                let q = derive(d, p);
                if q.is_zero() || !seen.insert(key(&q)) {
                    continue;
                }
                let mut np = path.clone();
                np.push(d);
                next.push((np, q));
            }
        }
        layer = next;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::FieldSpec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const Q: FieldSpec = FieldSpec::Rationals;
    const F5: FieldSpec = FieldSpec::Prime(5);

    fn poly(field: FieldSpec, rank: usize, terms: &[(i64, &[(usize, i64)])]) -> FreePolynomial {
        FreePolynomial::from_terms(
            rank,
            field,
            terms.iter().map(|(c, p)| {
                (
                    ReducedWord::from_powers(p, rank).unwrap(),
                    field.from_i64(*c),
                )
            }),
        )
        .unwrap()
    }

    fn d(i: usize) -> DerivativeIndex {
        DerivativeIndex::new(i, false)
    }
    fn db(i: usize) -> DerivativeIndex {
        DerivativeIndex::new(i, true)
    }

    /// Product-rule recursion on letters, an independent route to the same derivative.
    fn derive_recursive(d: DerivativeIndex, g: &FreePolynomial) -> FreePolynomial {
        let mut out = FreePolynomial::zero(g.rank(), g.field());
        for (w, c) in g.terms() {
            // ∂(w_1..w_m) = sum_k ∂(w_k) θ_w(k), every prefix having augmentation 1
            let mut acc = FreePolynomial::zero(g.rank(), g.field());
            let letters = w.letters();
            for k in 0..letters.len() {
                let l = letters[k];
                let rest = FreePolynomial::word(g.rank(), g.field(), w.tail(k + 1));
                let dl = if l == d.letter() {
                    FreePolynomial::one(g.rank(), g.field())
                } else if l == d.letter().inverse() {
                    -&FreePolynomial::word(g.rank(), g.field(), ReducedWord::letter(l))
                } else {
                    FreePolynomial::zero(g.rank(), g.field())
                };
                acc = &acc + &(&dl * &rest);
            }
            out = &out + &acc.scale(c);
        }
        out
    }

    #[test]
    fn letter_values() {
        let ti = poly(Q, 2, &[(1, &[(1, -1)])]);
        assert_eq!(partial_derivative(d(1), &ti).unwrap(), -&ti);
        assert_eq!(
            partial_derivative(db(1), &ti).unwrap(),
            FreePolynomial::one(2, Q)
        );
        let k = FreePolynomial::constant(2, Q.from_i64(7));
        assert!(partial_derivative(d(1), &k).unwrap().is_zero());
        assert!(partial_derivative(d(3), &k).is_err());
    }

    #[test]
    fn higher_derivatives() {
        let t1sq = poly(Q, 2, &[(1, &[(1, 2)])]);
        let w = ReducedWord::from_powers(&[(1, 2)], 2).unwrap();
        assert_eq!(
            higher_derivative(&w, &t1sq).unwrap(),
            FreePolynomial::one(2, Q)
        );
        assert_eq!(
            higher_derivative(&ReducedWord::identity(), &t1sq).unwrap(),
            t1sq
        );
        let t1 = poly(Q, 2, &[(1, &[(1, 1)])]);
        let t2 = ReducedWord::from_powers(&[(2, 1)], 2).unwrap();
        assert!(higher_derivative(&t2, &t1).unwrap().is_zero());
        // order matters: ∂_{t1 t2}(t2 t1) vs ∂_{t2 t1}(t2 t1)
        let g = poly(Q, 2, &[(1, &[(2, 1), (1, 1)])]);
        let w12 = ReducedWord::from_powers(&[(1, 1), (2, 1)], 2).unwrap();
        let w21 = ReducedWord::from_powers(&[(2, 1), (1, 1)], 2).unwrap();
        assert!(higher_derivative(&w12, &g).unwrap().is_zero());
        assert_eq!(
            higher_derivative(&w21, &g).unwrap(),
            FreePolynomial::one(2, Q)
        );
    }

    #[test]
    fn star_examples() {
        // t1^2 + t2^2 - 1, whose class of 1 is sent to -x1 - 2 = -t1 - 1
        let g = poly(Q, 2, &[(1, &[(1, 2)]), (1, &[(2, 2)]), (-1, &[])]);
        let ctx = StarContext::new(&g).unwrap();
        let one = FreePolynomial::one(2, Q);
        assert_eq!(
            star_action(&ctx, 1, &one).unwrap(),
            poly(Q, 2, &[(-1, &[(1, 1)]), (-1, &[])])
        );
        for j in 1..=4 {
            assert!(star_action(&ctx, j, &g).unwrap().is_zero());
        }
        assert!(star_action(&ctx, 5, &one).is_err());
        let g = poly(Q, 1, &[(1, &[]), (1, &[(1, 1)]), (-1, &[(1, -1)])]);
        let lam = poly(Q, 1, &[(3, &[]), (2, &[(1, 1)]), (-4, &[(1, -1)])]);
        let ctx = StarContext::new(&g).unwrap();
        assert_eq!(
            ctx.act(1, &lam).unwrap(),
            poly(Q, 1, &[(1, &[]), (3, &[(1, -1)])])
        );
        assert_eq!(
            StarContext::new(&lam.scale(&Q.from_i64(2))).unwrap_err(),
            Error::NotComonic
        );
    }

    #[test]
    fn spans() {
        let g = poly(Q, 2, &[(2, &[]), (-1, &[(1, 1)])]);
        let s = derivative_span(&g).unwrap();
        assert_eq!(
            s.basis,
            vec![FreePolynomial::one(2, Q), poly(Q, 2, &[(1, &[(1, 1)])])]
        );
        assert_eq!(s.matrices.len(), 4);
        assert_eq!(
            derivative_span(&FreePolynomial::one(2, Q))
                .unwrap()
                .dimension(),
            1
        );
        let third = Q.from_i64(-1).div(&Q.from_i64(3)).unwrap();
        let h = poly(Q, 2, &[(1, &[(1, 1)]), (-4, &[(1, -1)])]).scale(&third);
        let s = derivative_span(&h).unwrap();
        assert_eq!(s.dimension(), 3);
        for b in [
            poly(Q, 2, &[(1, &[])]),
            poly(Q, 2, &[(1, &[(1, 1)])]),
            poly(Q, 2, &[(1, &[(1, -1)])]),
        ] {
            assert!(s.basis.contains(&b));
        }
        assert_eq!(
            derivative_span(&FreePolynomial::zero(2, Q)).unwrap_err(),
            Error::ZeroPolynomial
        );
    }

    #[test]
    fn span_is_closed_and_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..30 {
            let g = FreePolynomial::random(&mut rng, 2, F5, 3, 4);
            if g.is_zero() {
                continue;
            }
            let s = derivative_span(&g).unwrap();
            let mut ech = Echelon::new(F5);
            for b in &s.basis {
                ech.insert(b.as_sparse());
            }
            assert!(ech.contains(g.as_sparse()));
            for (path, p) in &s.generators {
                assert_eq!(&derive_along(path.iter().copied(), &g), p);
            }
            assert!(s.basis.iter().all(|b| b.len_or_zero() <= g.len_or_zero()));
        }
    }

    #[test]
    fn fox_axioms_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for field in [Q, F5] {
            for _ in 0..200 {
                let a = FreePolynomial::random(&mut rng, 2, field, 3, 4);
                let b = FreePolynomial::random(&mut rng, 2, field, 3, 4);
                let ab = &a * &b;
                for dd in DerivativeIndex::all(2) {
                    let lhs = derive(dd, &ab);
                    let rhs = &derive(dd, &b).scale(&a.augmentation()) + &(&derive(dd, &a) * &b);
                    assert_eq!(lhs, rhs);
                    assert_eq!(derive(dd, &a), derive_recursive(dd, &a));
                }
                let mut rt = FreePolynomial::constant(2, a.augmentation());
                let mut rtb = FreePolynomial::constant(2, a.augmentation());
                for i in 1..=2 {
                    let x = FreePolynomial::x(2, field, i);
                    let y = &FreePolynomial::t(2, field, i, -1) - &FreePolynomial::one(2, field);
                    rt = &rt + &(&x * &derive(d(i), &a));
                    rtb = &rtb + &(&y * &derive(db(i), &a));
                    let ti = FreePolynomial::t(2, field, i, 1);
                    assert!((&derive(db(i), &a) + &(&ti * &derive(d(i), &a))).is_zero());
                }
                assert_eq!(rt, a);
                assert_eq!(rtb, a);
            }
        }
    }

    #[test]
    fn length_does_not_grow() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let a = FreePolynomial::random(&mut rng, 2, Q, 3, 4);
            if a.is_zero() {
                continue;
            }
            let sm = a.strictly_maximal().unwrap();
            for dd in DerivativeIndex::all(2) {
                let da = derive(dd, &a);
                if da.is_zero() {
                    continue;
                }
                assert!(da.len_or_zero() <= a.len_or_zero());
                if da.len_or_zero() == a.len_or_zero() && a.len_or_zero() > 0 {
                    assert!(sm.heads.contains(&dd.letter().inverse()));
                }
            }
        }
    }

    #[test]
    fn constant_derivatives_exist() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..100 {
            let a = FreePolynomial::random(&mut rng, 2, F5, 3, 4);
            if a.is_zero() {
                continue;
            }
            let (path, c) = constant_derivative_witness(&a, 2 * a.len_or_zero()).expect("witness");
            assert!(path.len() <= 2 * a.len_or_zero());
            assert!(!c.is_zero());
            assert_eq!(derive_along(path, &a), FreePolynomial::constant(2, c));
        }
    }
}
