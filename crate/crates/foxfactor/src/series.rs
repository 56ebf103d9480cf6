//! Truncated power series in noncommuting `x_1..x_n`, the Magnus embedding,
//! affine systems `Z = P + QZ` and linear representations of rational series.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lambda::FreePolynomial;
use crate::scalars::{FieldElem, FieldSpec};
use crate::words::XMonomial;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    rank: usize,
    field: FieldSpec,
    cutoff: usize,
    terms: BTreeMap<XMonomial, FieldElem>,
}

impl TruncatedSeries {
    pub fn zero(rank: usize, field: FieldSpec, cutoff: usize) -> Self {
        TruncatedSeries {
            rank,
            field,
            cutoff,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(rank: usize, c: FieldElem, cutoff: usize) -> Self {
        let mut s = Self::zero(rank, c.field(), cutoff);
        s.add_term(XMonomial::empty(), c);
        s
    }

    pub fn one(rank: usize, field: FieldSpec, cutoff: usize) -> Self {
        Self::constant(rank, field.one(), cutoff)
    }

    /// The variable `x_i`.
    pub fn var(rank: usize, field: FieldSpec, i: usize, cutoff: usize) -> Self {
        let mut s = Self::zero(rank, field, cutoff);
        s.add_term(XMonomial(vec![i]), field.one());
        s
    }

    pub fn from_terms(
        rank: usize,
        field: FieldSpec,
        cutoff: usize,
        terms: impl IntoIterator<Item = (XMonomial, FieldElem)>,
    ) -> Result<Self> {
        let mut s = Self::zero(rank, field, cutoff);
        for (m, c) in terms {
            m.check_rank(rank)?;
            s.add_term(m, c);
        }
        Ok(s)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn terms(&self) -> impl Iterator<Item = (&XMonomial, &FieldElem)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &XMonomial) -> FieldElem {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn constant_term(&self) -> FieldElem {
        self.coeff(&XMonomial::empty())
    }

    /// Least degree with a nonzero coefficient.
    pub fn order(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.degree()).min()
    }

    /// Adds `c*m`; monomials above the cutoff are dropped.
    pub fn add_term(&mut self, m: XMonomial, c: FieldElem) {
        if c.is_zero() || m.degree() > self.cutoff {
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

    /// Same series truncated to a smaller cutoff.
    pub fn truncate(&self, cutoff: usize) -> Self {
        let k = cutoff.min(self.cutoff);
        let mut s = Self::zero(self.rank, self.field, k);
        for (m, c) in &self.terms {
            s.add_term(m.clone(), c.clone());
        }
        s
    }

    pub fn add(&self, o: &Self) -> Self {
        let k = self.cutoff.min(o.cutoff);
        let mut s = self.truncate(k);
        for (m, c) in &o.terms {
            s.add_term(m.clone(), c.clone());
        }
        s
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-self.field.one()))
    }

    pub fn scale(&self, c: &FieldElem) -> Self {
        let mut s = Self::zero(self.rank, self.field, self.cutoff);
        for (m, v) in &self.terms {
            s.add_term(m.clone(), v * c);
        }
        s
    }

    pub fn mul(&self, o: &Self) -> Self {
        let k = self.cutoff.min(o.cutoff);
        let mut s = Self::zero(self.rank.max(o.rank), self.field, k);
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                if a.degree() + b.degree() <= k {
                    s.add_term(a.concat(b), x * y);
                }
            }
        }
        s
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            cutoff: self.cutoff,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| MonoTermJson {
                    mono: m.clone(),
                    coeff: c.to_string(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &SeriesJson, rank: usize, field: FieldSpec) -> Result<Self> {
        let mut terms = Vec::new();
        for t in &j.terms {
            terms.push((t.mono.clone(), FieldElem::parse(&t.coeff, field)?));
        }
        Self::from_terms(rank, field, j.cutoff, terms)
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 + O({})", self.cutoff + 1);
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = if neg { -c } else { c.clone() };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            match (m.degree() == 0, mag.is_one()) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => write!(f, "{m}")?,
                (false, false) => write!(f, "{mag}*{m}")?,
            }
        }
        write!(f, " + O({})", self.cutoff + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoTermJson {
    pub mono: XMonomial,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub cutoff: usize,
    pub terms: Vec<MonoTermJson>,
}

/// Image of `γ` under `t_i -> 1 + x_i`, modulo degree `> k`.
pub fn magnus_embed(g: &FreePolynomial, k: usize) -> TruncatedSeries {
    let (rank, field) = (g.rank(), g.field());
    let mut images: BTreeMap<(usize, i8), TruncatedSeries> = BTreeMap::new();
    let mut out = TruncatedSeries::zero(rank, field, k);
    for (w, c) in g.terms() {
        let mut acc = TruncatedSeries::constant(rank, c.clone(), k);
        for l in w.letters() {
            let img = images
                .entry((l.index, l.sign))
                .or_insert_with(|| letter_image(rank, field, l.index, l.sign, k));
            acc = acc.mul(img);
        }
        out = out.add(&acc);
    }
    out
}

fn letter_image(rank: usize, field: FieldSpec, i: usize, sign: i8, k: usize) -> TruncatedSeries {
    let mut s = TruncatedSeries::one(rank, field, k);
    if sign > 0 {
        s.add_term(XMonomial(vec![i]), field.one());
    } else {
        // sum_{d <= k} (-x_i)^d
        for d in 1..=k {
            let c = if d % 2 == 0 {
                field.one()
            } else {
                -field.one()
            };
            s.add_term(XMonomial(vec![i; d]), c);
        }
    }
    s
}

/// `u` with `u = s + s u = s + u s`.
pub fn quasi_inverse(s: &TruncatedSeries) -> Result<TruncatedSeries> {
    if !s.constant_term().is_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    // u = s + s^2 + ... ; every power raises the order, so k steps suffice
    let mut u = TruncatedSeries::zero(s.rank, s.field, s.cutoff);
    let mut power = s.clone();
    while !power.is_zero() {
        u = u.add(&power);
        power = power.mul(s);
    }
    Ok(u)
}

pub type SeriesMatrix = Vec<Vec<TruncatedSeries>>;

fn check_square(q: &SeriesMatrix) -> Result<usize> {
    let l = q.len();
    if q.iter().any(|row| row.len() != l) {
        return Err(Error::DimensionMismatch("Q must be square".into()));
    }
    if q.iter().flatten().any(|e| !e.constant_term().is_zero()) {
        return Err(Error::NonzeroConstantTerm);
    }
    Ok(l)
}

/// Solves `Z = P + QZ` by eliminating the last unknown and recursing.
pub fn solve_affine_system(
    p: &[TruncatedSeries],
    q: &SeriesMatrix,
) -> Result<Vec<TruncatedSeries>> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch(format!(
            "P has {} entries, Q has {} rows",
            p.len(),
            q.len()
        )));
    }
    let l = check_square(q)?;
    if l == 0 {
        return Ok(Vec::new());
    }
    let last = l - 1;
    // z_l = (1 + q_ll^+)(p_l + sum_{j<l} q_lj z_j)
    let f = {
        let plus = quasi_inverse(&q[last][last])?;
        plus.add(&TruncatedSeries::one(plus.rank, plus.field, plus.cutoff))
    };
    let mut p2 = Vec::with_capacity(last);
    let mut q2: SeriesMatrix = Vec::with_capacity(last);
    for i in 0..last {
        let g = q[i][last].mul(&f);
        p2.push(p[i].add(&g.mul(&p[last])));
        q2.push(
            (0..last)
                .map(|j| q[i][j].add(&g.mul(&q[last][j])))
                .collect(),
        );
    }
    let z_head = solve_affine_system(&p2, &q2)?;
    let mut acc = p[last].clone();
    for (j, z) in z_head.iter().enumerate() {
        acc = acc.add(&q[last][j].mul(z));
    }
    let mut z = z_head;
    z.push(f.mul(&acc));
    Ok(z)
}

/// Two-sided inverse of `1 + Q`.
pub fn invert_one_plus(q: &SeriesMatrix) -> Result<SeriesMatrix> {
    let l = check_square(q)?;
    if l == 0 {
        return Ok(Vec::new());
    }
    // (1 + Q)^{-1} = 1 - Q + Q^2 - ... : columns solve Z = e_j + (-Q) Z
    let neg: SeriesMatrix = q
        .iter()
        .map(|r| r.iter().map(|e| e.scale(&-e.field.one())).collect())
        .collect();
    let (rank, field, cutoff) = (q[0][0].rank, q[0][0].field, q[0][0].cutoff);
    let mut cols = Vec::with_capacity(l);
    for j in 0..l {
        let e: Vec<TruncatedSeries> = (0..l)
            .map(|i| {
                if i == j {
                    TruncatedSeries::one(rank, field, cutoff)
                } else {
                    TruncatedSeries::zero(rank, field, cutoff)
                }
            })
            .collect();
        cols.push(solve_affine_system(&e, &neg)?);
    }
    Ok((0..l)
        .map(|i| (0..l).map(|j| cols[j][i].clone()).collect())
        .collect())
}

pub fn mat_mul(a: &SeriesMatrix, b: &SeriesMatrix) -> SeriesMatrix {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut acc = TruncatedSeries::zero(
                        a[i][0].rank,
                        a[i][0].field,
                        a[i][0].cutoff.min(b[0][j].cutoff),
                    );
                    for (k, bk) in b.iter().enumerate() {
                        acc = acc.add(&a[i][k].mul(&bk[j]));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

// ---------------------------------------------------------------------------

/// A rational series as the `entry`-th component of the solution of `Z = P + QZ`,
/// with polynomial `P`, `Q` and every `Q` entry of zero augmentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalRep {
    pub p: Vec<FreePolynomial>,
    pub q: Vec<Vec<FreePolynomial>>,
    pub entry: usize,
}

impl RationalRep {
    pub fn new(p: Vec<FreePolynomial>, q: Vec<Vec<FreePolynomial>>, entry: usize) -> Result<Self> {
        let l = p.len();
        if l == 0 || q.len() != l || q.iter().any(|r| r.len() != l) {
            return Err(Error::DimensionMismatch(format!("P has {l} entries")));
        }
        if entry >= l {
            return Err(Error::IndexOutOfRange(entry));
        }
        if q.iter().flatten().any(|e| !e.augmentation().is_zero()) {
            return Err(Error::NonzeroConstantTerm);
        }
        let (rank, field) = (p[0].rank(), p[0].field());
        for e in p.iter().chain(q.iter().flatten()) {
            if e.field() != field {
                return Err(Error::FieldMismatch(
                    e.field().to_string(),
                    field.to_string(),
                ));
            }
            if e.rank() != rank {
                return Err(Error::RankMismatch(e.rank(), rank));
            }
        }
        Ok(RationalRep { p, q, entry })
    }

    /// Size-one representation of a polynomial.
    pub fn atom(p: FreePolynomial) -> Self {
        let z = FreePolynomial::zero(p.rank(), p.field());
        RationalRep {
            p: vec![p],
            q: vec![vec![z]],
            entry: 0,
        }
    }

    pub fn size(&self) -> usize {
        self.p.len()
    }

    pub fn rank(&self) -> usize {
        self.p[0].rank()
    }

    pub fn field(&self) -> FieldSpec {
        self.p[0].field()
    }

    fn zero_poly(&self) -> FreePolynomial {
        FreePolynomial::zero(self.rank(), self.field())
    }

    /// Moves the designated entry to index 0.
    fn entry_first(&self) -> RationalRep {
        if self.entry == 0 {
            return self.clone();
        }
        let l = self.size();
        let mut perm: Vec<usize> = (0..l).collect();
        perm.swap(0, self.entry);
        RationalRep {
            p: perm.iter().map(|&i| self.p[i].clone()).collect(),
            q: perm
                .iter()
                .map(|&i| perm.iter().map(|&j| self.q[i][j].clone()).collect())
                .collect(),
            entry: 0,
        }
    }

    pub fn to_json(&self) -> RationalJson {
        RationalJson {
            size: self.size(),
            entry: self.entry,
            p: self.p.clone(),
            q: self.q.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub size: usize,
    pub entry: usize,
    #[serde(rename = "P")]
    pub p: Vec<FreePolynomial>,
    #[serde(rename = "Q")]
    pub q: Vec<Vec<FreePolynomial>>,
}

impl RationalJson {
    pub fn into_rep(self) -> Result<RationalRep> {
        if self.size != self.p.len() {
            return Err(Error::DimensionMismatch(format!(
                "size {} but {} P entries",
                self.size,
                self.p.len()
            )));
        }
        RationalRep::new(self.p, self.q, self.entry)
    }
}

fn check_same(a: &RationalRep, b: &RationalRep) -> Result<()> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(
            a.field().to_string(),
            b.field().to_string(),
        ));
    }
    if a.rank() != b.rank() {
        return Err(Error::RankMismatch(a.rank(), b.rank()));
    }
    Ok(())
}

/// Block system with a fresh first unknown `z = P̄1 + P̄2 + Q̄1 Z1 + Q̄2 Z2`.
pub fn rat_sum(a: &RationalRep, b: &RationalRep) -> Result<RationalRep> {
    check_same(a, b)?;
    let (a, b) = (a.entry_first(), b.entry_first());
    let (la, lb) = (a.size(), b.size());
    let l = la + lb + 1;
    let zero = a.zero_poly();
    let mut p = vec![&a.p[0] + &b.p[0]];
    p.extend(a.p.iter().cloned());
    p.extend(b.p.iter().cloned());
    let mut q = vec![vec![zero.clone(); l]; l];
    for j in 0..la {
        q[0][1 + j] = a.q[0][j].clone();
    }
    for j in 0..lb {
        q[0][1 + la + j] = b.q[0][j].clone();
    }
    for i in 0..la {
        for j in 0..la {
            q[1 + i][1 + j] = a.q[i][j].clone();
        }
    }
    for i in 0..lb {
        for j in 0..lb {
            q[1 + la + i][1 + la + j] = b.q[i][j].clone();
        }
    }
    RationalRep::new(p, q, 0)
}

/// Block system `[[Q1, P1 Q̄2], [0, Q2]]` with right side `(P1 P̄2, P2)`.
pub fn rat_product(a: &RationalRep, b: &RationalRep) -> Result<RationalRep> {
    check_same(a, b)?;
    let (a, b) = (a.entry_first(), b.entry_first());
    let (la, lb) = (a.size(), b.size());
    let l = la + lb;
    let zero = a.zero_poly();
    let mut p: Vec<FreePolynomial> = a.p.iter().map(|pi| pi * &b.p[0]).collect();
    p.extend(b.p.iter().cloned());
    let mut q = vec![vec![zero; l]; l];
    for i in 0..la {
        for j in 0..la {
            q[i][j] = a.q[i][j].clone();
        }
        for j in 0..lb {
            q[i][la + j] = &a.p[i] * &b.q[0][j];
        }
    }
    for i in 0..lb {
        for j in 0..lb {
            q[la + i][la + j] = b.q[i][j].clone();
        }
    }
    RationalRep::new(p, q, 0)
}

/// Quasi-inverse: first border so that `P̄ = 0`, then replace `Q` by `Q + P Q̄`.
pub fn rat_quasi_inverse(a: &RationalRep) -> Result<RationalRep> {
    let a = a.entry_first();
    // the value's constant term is the entry of (1 - ε(Q))^{-1} ε(P); ε(Q) = 0 so it is ε(P̄)
    if !a.p[0].augmentation().is_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    let l = a.size();
    let zero = a.zero_poly();
    let bordered = if a.p[0].is_zero() {
        a.clone()
    } else {
        // U' = (U, 1): P1 = (0, p2.., pl, 1), Q1 = [[Q, P2], [0, 0]] with P2 = (p1, 0, .., 0)
        let mut p = vec![zero.clone()];
        p.extend(a.p[1..].iter().cloned());
        p.push(FreePolynomial::one(a.rank(), a.field()));
        let mut q = vec![vec![zero.clone(); l + 1]; l + 1];
        for i in 0..l {
            for j in 0..l {
                q[i][j] = a.q[i][j].clone();
            }
        }
        q[0][l] = a.p[0].clone();
        RationalRep::new(p, q, 0)?
    };
    let m = bordered.size();
    let mut q = bordered.q.clone();
    for i in 0..m {
        for j in 0..m {
            q[i][j] = &q[i][j] + &(&bordered.p[i] * &bordered.q[0][j]);
        }
    }
    // u^+ = u (1 + u^+) is the first entry of the new solution
    RationalRep::new(bordered.p.clone(), q, 0)
}

pub fn rat_eval(a: &RationalRep, k: usize) -> Result<TruncatedSeries> {
    let p: Vec<TruncatedSeries> = a.p.iter().map(|e| magnus_embed(e, k)).collect();
    let q: SeriesMatrix =
        a.q.iter()
            .map(|r| r.iter().map(|e| magnus_embed(e, k)).collect())
            .collect();
    let z = solve_affine_system(&p, &q)?;
    Ok(z[a.entry].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::ReducedWord;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const Q: FieldSpec = FieldSpec::Rationals;
    const F5: FieldSpec = FieldSpec::Prime(5);

    fn ser(field: FieldSpec, k: usize, terms: &[(i64, &[usize])]) -> TruncatedSeries {
        TruncatedSeries::from_terms(
            2,
            field,
            k,
            terms
                .iter()
                .map(|(c, m)| (XMonomial(m.to_vec()), field.from_i64(*c))),
        )
        .unwrap()
    }

    fn tpoly(field: FieldSpec, terms: &[(i64, &[(usize, i64)])]) -> FreePolynomial {
        FreePolynomial::from_terms(
            2,
            field,
            terms
                .iter()
                .map(|(c, p)| (ReducedWord::from_powers(p, 2).unwrap(), field.from_i64(*c))),
        )
        .unwrap()
    }

    fn x(field: FieldSpec, i: usize) -> FreePolynomial {
        FreePolynomial::x(2, field, i)
    }

    #[test]
    fn magnus_examples() {
        let g = tpoly(Q, &[(1, &[(1, -1)])]);
        assert_eq!(
            magnus_embed(&g, 3),
            ser(
                Q,
                3,
                &[(1, &[]), (-1, &[1]), (1, &[1, 1]), (-1, &[1, 1, 1])]
            )
        );
        let g = tpoly(Q, &[(1, &[(1, 1)]), (1, &[(1, -1)]), (-2, &[])]);
        assert_eq!(
            magnus_embed(&g, 3),
            ser(Q, 3, &[(1, &[1, 1]), (-1, &[1, 1, 1])])
        );
        assert_eq!(
            magnus_embed(&FreePolynomial::one(2, Q), 5),
            TruncatedSeries::one(2, Q, 5)
        );
    }

    #[test]
    fn quasi_inverse_examples() {
        let s = ser(Q, 3, &[(1, &[1])]);
        assert_eq!(
            quasi_inverse(&s).unwrap(),
            ser(Q, 3, &[(1, &[1]), (1, &[1, 1]), (1, &[1, 1, 1])])
        );
        let s = ser(Q, 2, &[(1, &[1]), (1, &[2])]);
        let all = ser(
            Q,
            2,
            &[
                (1, &[1]),
                (1, &[2]),
                (1, &[1, 1]),
                (1, &[1, 2]),
                (1, &[2, 1]),
                (1, &[2, 2]),
            ],
        );
        assert_eq!(quasi_inverse(&s).unwrap(), all);
        assert!(quasi_inverse(&TruncatedSeries::zero(2, Q, 4))
            .unwrap()
            .is_zero());
        assert_eq!(
            quasi_inverse(&TruncatedSeries::one(2, Q, 2)),
            Err(Error::NonzeroConstantTerm)
        );
    }

    #[test]
    fn affine_examples() {
        let z = solve_affine_system(
            &[TruncatedSeries::one(2, Q, 4)],
            &vec![vec![ser(Q, 4, &[(1, &[1])])]],
        )
        .unwrap();
        assert_eq!(
            z[0],
            ser(
                Q,
                4,
                &[
                    (1, &[]),
                    (1, &[1]),
                    (1, &[1, 1]),
                    (1, &[1, 1, 1]),
                    (1, &[1, 1, 1, 1])
                ]
            )
        );
        let p = vec![
            TruncatedSeries::one(2, Q, 3),
            TruncatedSeries::zero(2, Q, 3),
        ];
        let q = vec![
            vec![TruncatedSeries::zero(2, Q, 3), ser(Q, 3, &[(1, &[1])])],
            vec![ser(Q, 3, &[(1, &[2])]), TruncatedSeries::zero(2, Q, 3)],
        ];
        let z = solve_affine_system(&p, &q).unwrap();
        assert_residual(&p, &q, &z);
        let bad = vec![vec![TruncatedSeries::one(2, Q, 3)]];
        assert_eq!(
            solve_affine_system(&p[..1], &bad),
            Err(Error::NonzeroConstantTerm)
        );
        assert!(matches!(
            solve_affine_system(&p, &bad),
            Err(Error::DimensionMismatch(_))
        ));
    }

    fn assert_residual(p: &[TruncatedSeries], q: &SeriesMatrix, z: &[TruncatedSeries]) {
        for i in 0..p.len() {
            let mut rhs = p[i].clone();
            for j in 0..p.len() {
                rhs = rhs.add(&q[i][j].mul(&z[j]));
            }
            assert_eq!(rhs, z[i]);
        }
    }

    fn random_series<R: Rng>(
        rng: &mut R,
        field: FieldSpec,
        k: usize,
        with_constant: bool,
    ) -> TruncatedSeries {
        let p = FreePolynomial::random(rng, 2, field, 2, 4);
        let s = magnus_embed(&p, k);
        if with_constant {
            s
        } else {
            s.sub(&TruncatedSeries::constant(2, s.constant_term(), k))
        }
    }

    #[test]
    fn random_affine_residuals() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for l in [2usize, 3] {
            for field in [Q, F5] {
                for _ in 0..5 {
                    let p: Vec<_> = (0..l)
                        .map(|_| random_series(&mut rng, field, 6, true))
                        .collect();
                    let q: SeriesMatrix = (0..l)
                        .map(|_| {
                            (0..l)
                                .map(|_| random_series(&mut rng, field, 6, false))
                                .collect()
                        })
                        .collect();
                    let z = solve_affine_system(&p, &q).unwrap();
                    assert_residual(&p, &q, &z);
                }
            }
        }
    }

    #[test]
    fn inverse_examples() {
        let id = invert_one_plus(&vec![vec![TruncatedSeries::zero(2, Q, 3)]]).unwrap();
        assert_eq!(id[0][0], TruncatedSeries::one(2, Q, 3));
        let inv = invert_one_plus(&vec![vec![ser(Q, 2, &[(1, &[1])])]]).unwrap();
        assert_eq!(inv[0][0], ser(Q, 2, &[(1, &[]), (-1, &[1]), (1, &[1, 1])]));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let q: SeriesMatrix = (0..2)
            .map(|_| {
                (0..2)
                    .map(|_| random_series(&mut rng, F5, 4, false))
                    .collect()
            })
            .collect();
        let m = invert_one_plus(&q).unwrap();
        let one_plus: SeriesMatrix = (0..2)
            .map(|i| {
                (0..2)
                    .map(|j| {
                        if i == j {
                            q[i][j].add(&TruncatedSeries::one(2, F5, 4))
                        } else {
                            q[i][j].clone()
                        }
                    })
                    .collect()
            })
            .collect();
        for prod in [mat_mul(&one_plus, &m), mat_mul(&m, &one_plus)] {
            for i in 0..2 {
                for j in 0..2 {
                    let e = if i == j {
                        TruncatedSeries::one(2, F5, 4)
                    } else {
                        TruncatedSeries::zero(2, F5, 4)
                    };
                    assert_eq!(prod[i][j], e);
                }
            }
        }
    }

    #[test]
    fn rational_examples() {
        let r1 = RationalRep::atom(x(Q, 1));
        let r2 = RationalRep::atom(x(Q, 2));
        assert_eq!(
            rat_eval(&rat_sum(&r1, &r2).unwrap(), 3).unwrap(),
            ser(Q, 3, &[(1, &[1]), (1, &[2])])
        );
        assert_eq!(
            rat_eval(&rat_sum(&r1, &r1).unwrap(), 3).unwrap(),
            ser(Q, 3, &[(2, &[1])])
        );
        assert_eq!(rat_sum(&r1, &r2).unwrap().size(), 3);
        let prod = rat_product(&r1, &r2).unwrap();
        assert_eq!(prod.size(), 2);
        assert_eq!(rat_eval(&prod, 3).unwrap(), ser(Q, 3, &[(1, &[1, 2])]));
        let one = RationalRep::atom(FreePolynomial::one(2, Q));
        let b = rat_quasi_inverse(&r2).unwrap();
        assert_eq!(
            rat_eval(&rat_product(&one, &b).unwrap(), 4).unwrap(),
            rat_eval(&b, 4).unwrap()
        );
        let plus = rat_quasi_inverse(&r1).unwrap();
        assert_eq!(
            rat_eval(&plus, 4).unwrap(),
            ser(
                Q,
                4,
                &[(1, &[1]), (1, &[1, 1]), (1, &[1, 1, 1]), (1, &[1, 1, 1, 1])]
            )
        );
        let both = rat_quasi_inverse(&RationalRep::atom(&x(Q, 1) + &x(Q, 2))).unwrap();
        let all = ser(
            Q,
            2,
            &[
                (1, &[1]),
                (1, &[2]),
                (1, &[1, 1]),
                (1, &[1, 2]),
                (1, &[2, 1]),
                (1, &[2, 2]),
            ],
        );
        assert_eq!(rat_eval(&both, 2).unwrap(), all);
        assert_eq!(rat_quasi_inverse(&one), Err(Error::NonzeroConstantTerm));
        // geometric series (1 - x1)^{-1} as Z = 1 + x1 Z
        let geo =
            RationalRep::new(vec![FreePolynomial::one(2, Q)], vec![vec![x(Q, 1)]], 0).unwrap();
        assert_eq!(
            rat_eval(&geo, 3).unwrap(),
            ser(Q, 3, &[(1, &[]), (1, &[1]), (1, &[1, 1]), (1, &[1, 1, 1])])
        );
        let comp = rat_product(&plus, &r2).unwrap();
        assert_eq!(
            rat_eval(&comp, 4).unwrap(),
            ser(Q, 4, &[(1, &[1, 2]), (1, &[1, 1, 2]), (1, &[1, 1, 1, 2])])
        );
        let a = RationalRep::atom(FreePolynomial::t(2, Q, 1, 1));
        assert_eq!(
            rat_eval(&a, 3).unwrap(),
            magnus_embed(&FreePolynomial::t(2, Q, 1, 1), 3)
        );
    }

    #[test]
    fn magnus_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for field in [Q, F5] {
            for _ in 0..50 {
                let a = FreePolynomial::random(&mut rng, 2, field, 3, 4);
                let b = FreePolynomial::random(&mut rng, 2, field, 3, 4);
                assert_eq!(
                    magnus_embed(&(&a * &b), 5),
                    magnus_embed(&a, 5).mul(&magnus_embed(&b, 5))
                );
            }
        }
    }

    #[test]
    fn quasi_inverse_fixed_point() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..20 {
            let s = random_series(&mut rng, Q, 5, false);
            let u = quasi_inverse(&s).unwrap();
            assert_eq!(s.add(&s.mul(&u)), u);
            assert_eq!(s.add(&u.mul(&s)), u);
        }
    }

    #[test]
    fn json_round_trip() {
        let s = ser(F5, 3, &[(2, &[1, 2]), (1, &[])]);
        let j = serde_json::to_string(&s.to_json()).unwrap();
        assert_eq!(
            j,
            r#"{"cutoff":3,"terms":[{"mono":[],"coeff":"1"},{"mono":[1,2],"coeff":"2"}]}"#
        );
        let back = TruncatedSeries::from_json(&serde_json::from_str(&j).unwrap(), 2, F5).unwrap();
        assert_eq!(back, s);
        let r = rat_sum(&RationalRep::atom(x(F5, 1)), &RationalRep::atom(x(F5, 2))).unwrap();
        let j = serde_json::to_string(&r.to_json()).unwrap();
        let back: RationalJson = serde_json::from_str(&j).unwrap();
        assert_eq!(back.into_rep().unwrap(), r);
    }
}
