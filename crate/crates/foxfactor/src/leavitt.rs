//! Elements of the Fox algebra `L(Λ)` in quasi-normal form `Σ λ_w w^*`.
//!
//! `w^*` for `w = x_{i_1}⋯x_{i_l}` is `x^*_{i_l}⋯x^*_{i_1}`. Multiplication pushes
//! starred letters right with `x_i^* λ = ∂_i λ + ε(λ) x_i^*`; the relation
//! `x_i^* x_j = δ_ij` then follows from `∂_i(t_j - 1) = δ_ij`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fox::{derive, DerivativeIndex};
use crate::lambda::FreePolynomial;
use crate::scalars::{FieldElem, FieldSpec};
use crate::words::XMonomial;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeavittElement {
    rank: usize,
    field: FieldSpec,
    terms: BTreeMap<XMonomial, FreePolynomial>,
}

impl LeavittElement {
    pub fn zero(rank: usize, field: FieldSpec) -> Self {
        LeavittElement {
            rank,
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(rank: usize, field: FieldSpec) -> Self {
        embed(&FreePolynomial::one(rank, field))
    }

    /// `λ w^*`
    pub fn term(lambda: FreePolynomial, w: XMonomial) -> Self {
        let mut e = LeavittElement::zero(lambda.rank(), lambda.field());
        e.add_term(w, lambda);
        e
    }

    /// `x_i^*`
    pub fn star(rank: usize, field: FieldSpec, i: usize) -> Result<Self> {
        if i == 0 || i > rank {
            return Err(Error::IndexOutOfRange(i));
        }
        Ok(Self::term(
            FreePolynomial::one(rank, field),
            XMonomial(vec![i]),
        ))
    }

    /// `x_i = t_i - 1`
    pub fn x(rank: usize, field: FieldSpec, i: usize) -> Result<Self> {
        if i == 0 || i > rank {
            return Err(Error::IndexOutOfRange(i));
        }
        Ok(embed(&FreePolynomial::x(rank, field, i)))
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

    pub fn terms(&self) -> impl Iterator<Item = (&XMonomial, &FreePolynomial)> {
        self.terms.iter()
    }

    pub fn depth(&self) -> usize {
        self.terms.keys().map(|w| w.degree()).max().unwrap_or(0)
    }

    pub fn coeff(&self, w: &XMonomial) -> FreePolynomial {
        self.terms
            .get(w)
            .cloned()
            .unwrap_or_else(|| FreePolynomial::zero(self.rank, self.field))
    }

    /// The polynomial, when the element has no starred part.
    pub fn as_polynomial(&self) -> Option<FreePolynomial> {
        match self.terms.len() {
            0 => Some(FreePolynomial::zero(self.rank, self.field)),
            1 => self.terms.get(&XMonomial::empty()).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, w: XMonomial, lambda: FreePolynomial) {
        if lambda.is_zero() {
            return;
        }
        let merged = match self.terms.remove(&w) {
            Some(old) => &old + &lambda,
            None => lambda,
        };
        if !merged.is_zero() {
            self.terms.insert(w, merged);
        }
    }

    fn check(&self, o: &LeavittElement) -> Result<()> {
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

    pub fn add(&self, o: &LeavittElement) -> Result<LeavittElement> {
        self.check(o)?;
        let mut e = self.clone();
        for (w, l) in &o.terms {
            e.add_term(w.clone(), l.clone());
        }
        Ok(e)
    }

    pub fn sub(&self, o: &LeavittElement) -> Result<LeavittElement> {
        self.add(&o.scale(&-self.field.one()))
    }

    pub fn scale(&self, c: &FieldElem) -> LeavittElement {
        let mut e = LeavittElement::zero(self.rank, self.field);
        for (w, l) in &self.terms {
            e.add_term(w.clone(), l.scale(c));
        }
        e
    }

    pub fn left_mul_poly(&self, p: &FreePolynomial) -> LeavittElement {
        let mut e = LeavittElement::zero(self.rank, self.field);
        for (w, l) in &self.terms {
            e.add_term(w.clone(), p * l);
        }
        e
    }

    pub fn mul(&self, o: &LeavittElement) -> Result<LeavittElement> {
        self.check(o)?;
        let mut out = LeavittElement::zero(self.rank, self.field);
        for (u, lam) in &self.terms {
            for (v, mu) in &o.terms {
                for (p, s) in push_stars(u, mu) {
                    out.add_term(v.concat(&s), lam * &p);
                }
            }
        }
        Ok(out)
    }

    /// Same element with every star word of length exactly `l`.
    pub fn canonical_form(&self, l: usize) -> Result<LeavittElement> {
        let depth = self.depth();
        if l < depth {
            return Err(Error::DepthTooSmall {
                requested: l,
                depth,
            });
        }
        let mut out = LeavittElement::zero(self.rank, self.field);
        for (v, lam) in &self.terms {
            // λ v^* = Σ_i (λ x_i)(v x_i)^*
            let mut layer = vec![(v.clone(), lam.clone())];
            for _ in v.degree()..l {
                layer = layer
                    .into_iter()
                    .flat_map(|(w, p)| {
                        (1..=self.rank).map(move |i| {
                            (w.push(i), &p * &FreePolynomial::x(self.rank, self.field, i))
                        })
                    })
                    .collect();
            }
            for (w, p) in layer {
                out.add_term(w, p);
            }
        }
        Ok(out)
    }

    pub fn equals(&self, o: &LeavittElement) -> Result<bool> {
        self.check(o)?;
        let l = self.depth().max(o.depth());
        Ok(self.canonical_form(l)? == o.canonical_form(l)?)
    }

    pub fn to_json(&self) -> LeavittJson {
        LeavittJson {
            terms: self
                .terms
                .iter()
                .map(|(w, l)| StarTermJson {
                    star_word: w.clone(),
                    coeff: l.clone(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &LeavittJson, rank: usize, field: FieldSpec) -> Result<Self> {
        let mut e = LeavittElement::zero(rank, field);
        for t in &j.terms {
            t.star_word.check_rank(rank)?;
            e.check(&embed(&t.coeff))?;
            e.add_term(t.star_word.clone(), t.coeff.clone());
        }
        Ok(e)
    }
}

/// `u^* μ` as a list of `(p, s)` meaning `p s^*`.
fn push_stars(u: &XMonomial, mu: &FreePolynomial) -> Vec<(FreePolynomial, XMonomial)> {
    let mut state: BTreeMap<XMonomial, FreePolynomial> = BTreeMap::new();
    state.insert(XMonomial::empty(), mu.clone());
    for &i in &u.0 {
        let d = DerivativeIndex::new(i, false);
        let mut next: BTreeMap<XMonomial, FreePolynomial> = BTreeMap::new();
        let mut put = |k: XMonomial, p: FreePolynomial| {
            if p.is_zero() {
                return;
            }
            let merged = match next.remove(&k) {
                Some(old) => &old + &p,
                None => p,
            };
            if !merged.is_zero() {
                next.insert(k, merged);
            }
        };
        for (s, p) in state {
            // x_i^* p s^* = (∂_i p) s^* + ε(p) (s x_i)^*
            let e = p.augmentation();
            put(s.clone(), derive(d, &p));
            if !e.is_zero() {
                put(s.push(i), FreePolynomial::constant(p.rank(), e));
            }
        }
        state = next;
    }
    state.into_iter().map(|(s, p)| (p, s)).collect()
}

pub fn embed(g: &FreePolynomial) -> LeavittElement {
    let mut e = LeavittElement::zero(g.rank(), g.field());
    e.add_term(XMonomial::empty(), g.clone());
    e
}

pub fn multiply(a: &LeavittElement, b: &LeavittElement) -> Result<LeavittElement> {
    a.mul(b)
}

pub fn canonical_form(a: &LeavittElement, l: usize) -> Result<LeavittElement> {
    a.canonical_form(l)
}

pub fn equals(a: &LeavittElement, b: &LeavittElement) -> Result<bool> {
    a.equals(b)
}

/// `ζ_i = x_i x_i^*`.
pub fn zeta(rank: usize, field: FieldSpec, i: usize) -> Result<LeavittElement> {
    if i == 0 || i > rank {
        return Err(Error::IndexOutOfRange(i));
    }
    Ok(LeavittElement::term(
        FreePolynomial::x(rank, field, i),
        XMonomial(vec![i]),
    ))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarTermJson {
    pub star_word: XMonomial,
    pub coeff: FreePolynomial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeavittJson {
    pub terms: Vec<StarTermJson>,
}

/// `(x_{i_1}*...*x_{i_l})^*` in the spelling the expression parser reads back.
pub fn format_star(w: &XMonomial) -> String {
    match w.degree() {
        0 => String::new(),
        1 => format!("x{}^*", w.0[0]),
        _ => {
            let inner: Vec<String> = w.0.iter().map(|i| format!("x{i}")).collect();
            format!("({})^*", inner.join("*"))
        }
    }
}

impl fmt::Display for LeavittElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, l)| {
                if w.degree() == 0 {
                    format!("{l}")
                } else if l == &FreePolynomial::one(self.rank, self.field) {
                    format_star(w)
                } else {
                    format!("({l})*{}", format_star(w))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{monomials_of_degree, ReducedWord};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const Q: FieldSpec = FieldSpec::Rationals;
    const F5: FieldSpec = FieldSpec::Prime(5);

    fn xs(rank: usize, i: usize) -> LeavittElement {
        LeavittElement::x(rank, Q, i).unwrap()
    }
    fn st(rank: usize, i: usize) -> LeavittElement {
        LeavittElement::star(rank, Q, i).unwrap()
    }

    #[test]
    fn cuntz_krieger_relations() {
        for rank in [2usize, 3] {
            let mut sum = LeavittElement::zero(rank, Q);
            for i in 1..=rank {
                for j in 1..=rank {
                    let p = st(rank, i).mul(&xs(rank, j)).unwrap();
                    let expected = if i == j {
                        LeavittElement::one(rank, Q)
                    } else {
                        LeavittElement::zero(rank, Q)
                    };
                    assert_eq!(p, expected);
                }
                sum = sum.add(&xs(rank, i).mul(&st(rank, i)).unwrap()).unwrap();
            }
            assert!(sum.equals(&LeavittElement::one(rank, Q)).unwrap());
        }
    }

    #[test]
    fn star_times_inverse_letter() {
        let ti = embed(&FreePolynomial::t(2, Q, 1, -1));
        let p = st(2, 1).mul(&ti).unwrap();
        let expected = st(2, 1).sub(&ti).unwrap();
        assert_eq!(p, expected);
        let other = st(2, 1)
            .mul(&embed(&FreePolynomial::t(2, Q, 2, -1)))
            .unwrap();
        assert_eq!(other, st(2, 1));
    }

    #[test]
    fn canonical_forms() {
        let c = LeavittElement::one(2, Q).canonical_form(1).unwrap();
        let expected = xs(2, 1)
            .mul(&st(2, 1))
            .unwrap()
            .add(&xs(2, 2).mul(&st(2, 2)).unwrap())
            .unwrap();
        assert_eq!(c, expected);
        assert_eq!(st(2, 1).canonical_form(1).unwrap(), st(2, 1));
        assert!(matches!(
            st(2, 1).canonical_form(0),
            Err(Error::DepthTooSmall { .. })
        ));
        assert!(!st(2, 1).equals(&st(2, 2)).unwrap());
        let a = st(2, 1);
        assert!(a
            .equals(&a.add(&embed(&FreePolynomial::zero(2, Q))).unwrap())
            .unwrap());
    }

    #[test]
    fn zetas() {
        for rank in [2usize, 3] {
            let mut total = LeavittElement::zero(rank, Q);
            for i in 1..=rank {
                let zi = zeta(rank, Q, i).unwrap();
                assert!(zi.mul(&zi).unwrap().equals(&zi).unwrap());
                for j in 1..=rank {
                    if i != j {
                        assert!(zi
                            .mul(&zeta(rank, Q, j).unwrap())
                            .unwrap()
                            .equals(&LeavittElement::zero(rank, Q))
                            .unwrap());
                    }
                }
                total = total.add(&zi).unwrap();
            }
            assert!(total.equals(&LeavittElement::one(rank, Q)).unwrap());
        }
        assert!(zeta(2, Q, 3).is_err());
    }

    fn random_element<R: Rng>(
        rng: &mut R,
        field: FieldSpec,
        depth: usize,
        len: usize,
    ) -> LeavittElement {
        let mut e = LeavittElement::zero(2, field);
        for _ in 0..rng.gen_range(1..=3) {
            let d = rng.gen_range(0..=depth);
            let w = XMonomial((0..d).map(|_| rng.gen_range(1..=2)).collect());
            e.add_term(w, FreePolynomial::random(rng, 2, field, len, 2));
        }
        e
    }

    #[test]
    fn associativity() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100 {
            let a = random_element(&mut rng, F5, 2, 2);
            let b = random_element(&mut rng, F5, 2, 2);
            let c = random_element(&mut rng, F5, 2, 2);
            let l = a.mul(&b).unwrap().mul(&c).unwrap();
            let r = a.mul(&b.mul(&c).unwrap()).unwrap();
            assert!(l.equals(&r).unwrap());
        }
    }

    #[test]
    fn coefficients_are_recovered_at_fixed_depth() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..50 {
            let a = random_element(&mut rng, Q, 2, 2);
            let l = a.depth() + 1;
            let c = a.canonical_form(l).unwrap();
            assert!(a.equals(&c).unwrap());
            assert!(a.equals(&a.canonical_form(a.depth() + 2).unwrap()).unwrap());
            for w in monomials_of_degree(2, l) {
                let mut wpoly = FreePolynomial::one(2, Q);
                for &i in &w.0 {
                    wpoly = &wpoly * &FreePolynomial::x(2, Q, i);
                }
                assert_eq!(c.mul(&embed(&wpoly)).unwrap(), embed(&c.coeff(&w)));
            }
        }
    }

    #[test]
    fn embedding_is_injective_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..50 {
            let a = FreePolynomial::random(&mut rng, 2, Q, 2, 3);
            let b = FreePolynomial::random(&mut rng, 2, Q, 2, 3);
            assert_eq!(embed(&a).mul(&embed(&b)).unwrap(), embed(&(&a * &b)));
            assert_eq!(embed(&a).equals(&embed(&b)).unwrap(), a == b);
        }
        assert!(embed(&FreePolynomial::zero(2, Q)).is_zero());
    }

    #[test]
    fn json_round_trip() {
        let e = zeta(2, Q, 1)
            .unwrap()
            .add(&embed(&FreePolynomial::word(2, Q, ReducedWord::identity())))
            .unwrap();
        let j = serde_json::to_string(&e.to_json()).unwrap();
        let back = LeavittElement::from_json(&serde_json::from_str(&j).unwrap(), 2, Q).unwrap();
        assert_eq!(back, e);
        assert_eq!(e.to_string(), "1 + (-1 + t1)*x1^*");
    }
}
