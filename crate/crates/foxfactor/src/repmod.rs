//! Finite-dimensional modules over the free algebra on `2n` letters, given by
//! operator matrices acting on column vectors.
//!
//! Simplicity over GF(p) is decided exhaustively on small modules. Otherwise a
//! Norton certificate is used: an algebra element `a` with one-dimensional
//! kernel `<v>` and cokernel witness `<w>` proves simplicity once `v` spins to
//! the whole module and `w` spins to the whole dual.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lambda::FreePolynomial;
use crate::linalg::{
    determinant, identity, mat_mul, mat_vec, nullspace, rref, transpose, zeros, Matrix,
};
use crate::scalars::{FieldElem, FieldSpec};

pub type Vector = Vec<FieldElem>;

/// Row space of a matrix, kept in reduced row echelon form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    field: FieldSpec,
    ambient: usize,
    rows: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: FieldSpec, ambient: usize) -> Self {
        Subspace {
            field,
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: FieldSpec, ambient: usize) -> Self {
        Subspace {
            field,
            ambient,
            rows: identity(field, ambient),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn from_vectors(field: FieldSpec, ambient: usize, vecs: &[Vector]) -> Result<Self> {
        for v in vecs {
            if v.len() != ambient {
                return Err(Error::DimensionMismatch(format!(
                    "vector of length {} in dimension {ambient}",
                    v.len()
                )));
            }
        }
        let mut rows: Matrix = vecs.to_vec();
        let pivots = rref(&mut rows);
        Ok(Subspace {
            field,
            ambient,
            rows,
            pivots,
        })
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn basis(&self) -> &Matrix {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    /// `v` minus its projection along the pivots.
    pub fn reduce(&self, v: &[FieldElem]) -> Vector {
        let mut r = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if r[p].is_zero() {
                continue;
            }
            let f = r[p].clone();
            for (x, y) in r.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &(&f * y);
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &[FieldElem]) -> bool {
        v.len() == self.ambient && self.reduce(v).iter().all(|x| x.is_zero())
    }

    pub fn coordinates(&self, v: &[FieldElem]) -> Option<Vector> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    /// `Σ c_k b_k` over the echelon basis.
    pub fn combine(&self, coords: &[FieldElem]) -> Vector {
        let mut out = vec![self.field.zero(); self.ambient];
        for (c, row) in coords.iter().zip(&self.rows) {
            if c.is_zero() {
                continue;
            }
            for (x, y) in out.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x += &(c * y);
                }
            }
        }
        out
    }

    pub fn contains_subspace(&self, o: &Subspace) -> bool {
        o.rows.iter().all(|r| self.contains(r))
    }

    pub fn sum(&self, o: &Subspace) -> Result<Subspace> {
        let mut all = self.rows.clone();
        all.extend(o.rows.iter().cloned());
        Subspace::from_vectors(self.field, self.ambient, &all)
    }

    /// Vectors `v` with `w·v = 0` for every basis row `w`.
    pub fn annihilator(&self) -> Subspace {
        let ns = nullspace(&self.rows, self.field, self.ambient);
        Subspace::from_vectors(self.field, self.ambient, &ns).expect("lengths match")
    }

    /// Standard basis positions outside the pivots; their images span a complement.
    pub fn complement_positions(&self) -> Vec<usize> {
        (0..self.ambient)
            .filter(|c| !self.pivots.contains(c))
            .collect()
    }
}

/// A vector space with `2n` operators (the letters `z_1..z_2n`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorModule {
    dim: usize,
    field: FieldSpec,
    operators: Vec<Matrix>,
    labels: Option<Vec<FreePolynomial>>,
}

impl OperatorModule {
    pub fn new(field: FieldSpec, dim: usize, operators: Vec<Matrix>) -> Result<Self> {
        for (j, m) in operators.iter().enumerate() {
            if m.len() != dim || m.iter().any(|r| r.len() != dim) {
                return Err(Error::DimensionMismatch(format!(
                    "operator {} is not {dim}x{dim}",
                    j + 1
                )));
            }
            if m.iter().flatten().any(|x| x.field() != field) {
                return Err(Error::FieldMismatch(
                    field.to_string(),
                    format!("entries of operator {}", j + 1),
                ));
            }
        }
        Ok(OperatorModule {
            dim,
            field,
            operators,
            labels: None,
        })
    }

    /// Attach a polynomial representative to every basis vector.
    pub fn with_labels(mut self, labels: Vec<FreePolynomial>) -> Result<Self> {
        if labels.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for dimension {}",
                labels.len(),
                self.dim
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn operators(&self) -> &[Matrix] {
        &self.operators
    }

    pub fn labels(&self) -> Option<&[FreePolynomial]> {
        self.labels.as_deref()
    }

    /// `Σ v_k label_k`
    pub fn label_of(&self, v: &[FieldElem]) -> Option<FreePolynomial> {
        let labels = self.labels.as_ref()?;
        let mut out = FreePolynomial::zero(labels.first()?.rank(), self.field);
        for (c, l) in v.iter().zip(labels) {
            if !c.is_zero() {
                out = &out + &l.scale(c);
            }
        }
        Some(out)
    }

    pub fn act(&self, j: usize, v: &[FieldElem]) -> Vector {
        mat_vec(&self.operators[j], v, self.field)
    }

    pub fn is_invariant(&self, s: &Subspace) -> bool {
        s.basis()
            .iter()
            .all(|b| (0..self.operators.len()).all(|j| s.contains(&self.act(j, b))))
    }

    fn unit_vector(&self, i: usize) -> Vector {
        let mut v = vec![self.field.zero(); self.dim];
        v[i] = self.field.one();
        v
    }

    /// The submodule on `s`, in the coordinates of its echelon basis.
    pub fn restrict(&self, s: &Subspace) -> Result<OperatorModule> {
        if !self.is_invariant(s) {
            return Err(Error::Invalid("subspace is not invariant".into()));
        }
        let k = s.dim();
        let mut ops = Vec::with_capacity(self.operators.len());
        for j in 0..self.operators.len() {
            let mut m = zeros(self.field, k, k);
            for (c, b) in s.basis().iter().enumerate() {
                let img = s.coordinates(&self.act(j, b)).expect("invariant");
                for (r, x) in img.into_iter().enumerate() {
                    m[r][c] = x;
                }
            }
            ops.push(m);
        }
        let labels = self.labels.as_ref().map(|_| {
            s.basis()
                .iter()
                .map(|b| self.label_of(b).expect("labels"))
                .collect()
        });
        Ok(OperatorModule {
            dim: k,
            field: self.field,
            operators: ops,
            labels,
        })
    }

    /// `M/s` on the standard vectors outside the pivots of `s`.
    pub fn quotient(&self, s: &Subspace) -> Result<OperatorModule> {
        if !self.is_invariant(s) {
            return Err(Error::Invalid("subspace is not invariant".into()));
        }
        let comp = s.complement_positions();
        let k = comp.len();
        let mut ops = Vec::with_capacity(self.operators.len());
        for j in 0..self.operators.len() {
            let mut m = zeros(self.field, k, k);
            for (c, &i) in comp.iter().enumerate() {
                let img = s.reduce(&self.act(j, &self.unit_vector(i)));
                for (r, &ir) in comp.iter().enumerate() {
                    m[r][c] = img[ir].clone();
                }
            }
            ops.push(m);
        }
        let labels = self
            .labels
            .as_ref()
            .map(|ls| comp.iter().map(|&i| ls[i].clone()).collect());
        Ok(OperatorModule {
            dim: k,
            field: self.field,
            operators: ops,
            labels,
        })
    }

    pub fn dual(&self) -> OperatorModule {
        OperatorModule {
            dim: self.dim,
            field: self.field,
            operators: self
                .operators
                .iter()
                .map(|m| transpose(m, self.field, self.dim, self.dim))
                .collect(),
            labels: None,
        }
    }

    /// `P^{-1} A_j P`.
    pub fn conjugate(&self, p: &Matrix) -> Result<OperatorModule> {
        let inv = crate::linalg::inverse(p, self.field)?;
        let ops = self
            .operators
            .iter()
            .map(|a| mat_mul(&inv, &mat_mul(a, p, self.field), self.field))
            .collect();
        OperatorModule::new(self.field, self.dim, ops)
    }

    pub fn direct_sum(&self, o: &OperatorModule) -> Result<OperatorModule> {
        check_pair(self, o)?;
        let d = self.dim + o.dim;
        let mut ops = Vec::new();
        for (a, b) in self.operators.iter().zip(&o.operators) {
            let mut m = zeros(self.field, d, d);
            for i in 0..self.dim {
                m[i][..self.dim].clone_from_slice(&a[i]);
            }
            for i in 0..o.dim {
                m[self.dim + i][self.dim..].clone_from_slice(&b[i]);
            }
            ops.push(m);
        }
        OperatorModule::new(self.field, d, ops)
    }

    pub fn to_json(&self) -> ModuleJson {
        ModuleJson {
            field: self.field,
            dim: self.dim,
            operators: self
                .operators
                .iter()
                .map(|m| {
                    m.iter()
                        .map(|r| r.iter().map(|x| x.to_string()).collect())
                        .collect()
                })
                .collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn from_json(j: &ModuleJson) -> Result<Self> {
        let ops = j
            .operators
            .iter()
            .map(|m| {
                m.iter()
                    .map(|r| r.iter().map(|x| FieldElem::parse(x, j.field)).collect())
                    .collect()
            })
            .collect::<Result<Vec<Matrix>>>()?;
        let m = OperatorModule::new(j.field, j.dim, ops)?;
        match &j.labels {
            Some(l) => m.with_labels(l.clone()),
            None => Ok(m),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleJson {
    pub field: FieldSpec,
    pub dim: usize,
    pub operators: Vec<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<FreePolynomial>>,
}

fn check_pair(a: &OperatorModule, b: &OperatorModule) -> Result<()> {
    if a.field != b.field {
        return Err(Error::FieldMismatch(
            a.field.to_string(),
            b.field.to_string(),
        ));
    }
    if a.operators.len() != b.operators.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} operators vs {}",
            a.operators.len(),
            b.operators.len()
        )));
    }
    Ok(())
}

/// Budget and randomness for the searches below.
#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub seed: u64,
    /// Random vectors spun per simplicity test.
    pub random_vectors: usize,
    /// Largest number of projective points enumerated over GF(p).
    pub exhaustive_limit: u64,
    /// Algebra elements tried for a Norton certificate.
    pub norton_attempts: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            seed: 0,
            random_vectors: 50,
            exhaustive_limit: 20_000,
            norton_attempts: 200,
        }
    }
}

pub fn spin(m: &OperatorModule, seeds: &[Vector]) -> Result<Subspace> {
    for s in seeds {
        if s.len() != m.dim {
            return Err(Error::DimensionMismatch(format!(
                "seed of length {} in dimension {}",
                s.len(),
                m.dim
            )));
        }
    }
    // rows reduced against all earlier rows; reducing in insertion order stays valid
    let mut rows: Vec<(usize, Vector)> = Vec::new();
    let reduce = |rows: &Vec<(usize, Vector)>, v: &[FieldElem]| -> Option<(usize, Vector)> {
        let mut r = v.to_vec();
        for (p, row) in rows {
            if r[*p].is_zero() {
                continue;
            }
            let f = r[*p].clone();
            for (x, y) in r.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &(&f * y);
                }
            }
        }
        let p = r.iter().position(|x| !x.is_zero())?;
        let inv = r[p].inv().expect("nonzero");
        Some((p, r.iter().map(|x| x * &inv).collect()))
    };
    let mut queue: Vec<Vector> = Vec::new();
    for s in seeds {
        if let Some(row) = reduce(&rows, s) {
            queue.push(row.1.clone());
            rows.push(row);
        }
    }
    while let Some(v) = queue.pop() {
        if rows.len() == m.dim {
            break;
        }
        for j in 0..m.operators.len() {
            let img = m.act(j, &v);
            if let Some(row) = reduce(&rows, &img) {
                queue.push(row.1.clone());
                rows.push(row);
            }
        }
    }
    let vecs: Vec<Vector> = rows.into_iter().map(|(_, v)| v).collect();
    Subspace::from_vectors(m.field, m.dim, &vecs)
}

pub fn random_vector<R: Rng>(rng: &mut R, field: FieldSpec, dim: usize) -> Vector {
    loop {
        let v: Vector = (0..dim)
            .map(|_| match field {
                FieldSpec::Rationals => field.from_i64(rng.gen_range(-3..=3)),
                FieldSpec::Prime(p) => field.from_u64(rng.gen_range(0..p)),
            })
            .collect();
        if v.iter().any(|x| !x.is_zero()) || dim == 0 {
            return v;
        }
    }
}

/// Every vector whose first nonzero coordinate is 1, when there are at most `limit`.
pub fn projective_points(field: FieldSpec, dim: usize, limit: u64) -> Option<Vec<Vector>> {
    let q = field.size()?;
    let mut count: u128 = 0;
    let mut pw: u128 = 1;
    for _ in 0..dim {
        count += pw;
        pw *= q as u128;
        if count > limit as u128 {
            return None;
        }
    }
    let elems = field.elements()?;
    let mut out = Vec::new();
    for lead in 0..dim {
        let tail = dim - lead - 1;
        let total = (q as u128).pow(tail as u32) as u64;
        for mut code in 0..total {
            let mut v = vec![field.zero(); dim];
            v[lead] = field.one();
            for slot in v.iter_mut().skip(lead + 1) {
                *slot = elems[(code % q) as usize].clone();
                code /= q;
            }
            out.push(v);
        }
    }
    Some(out)
}

fn smallest_proper(cands: impl IntoIterator<Item = Subspace>, dim: usize) -> Option<Subspace> {
    cands
        .into_iter()
        .filter(|s| !s.is_zero() && s.dim() < dim)
        .min_by_key(|s| s.dim())
}

/// A proper nonzero submodule, `None` when the module is certified simple.
pub fn find_proper_submodule(m: &OperatorModule, opts: &SearchOptions) -> Result<Option<Subspace>> {
    if m.dim == 0 {
        return Err(Error::ZeroModule);
    }
    if m.dim == 1 {
        return Ok(None);
    }
    let basis_spins = (0..m.dim)
        .map(|i| spin(m, &[m.unit_vector(i)]))
        .collect::<Result<Vec<_>>>()?;
    if let Some(s) = smallest_proper(basis_spins, m.dim) {
        return Ok(Some(s));
    }
    let dual = m.dual();
    for i in 0..m.dim {
        let w = spin(&dual, &[m.unit_vector(i)])?;
        if !w.is_full() {
            return Ok(Some(w.annihilator()));
        }
    }
    if let Some(points) = projective_points(m.field, m.dim, opts.exhaustive_limit) {
        for v in points {
            let s = spin(m, &[v])?;
            if !s.is_full() {
                return Ok(Some(s));
            }
        }
        return Ok(None);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.random_vectors {
        let s = spin(m, &[random_vector(&mut rng, m.field, m.dim)])?;
        if !s.is_full() {
            return Ok(Some(s));
        }
    }
    norton(m, &dual, opts, &mut rng)
}

fn norton(
    m: &OperatorModule,
    dual: &OperatorModule,
    opts: &SearchOptions,
    rng: &mut ChaCha8Rng,
) -> Result<Option<Subspace>> {
    let f = m.field;
    let n = m.dim;
    // words of length <= 2 in the operators
    let mut words: Vec<Matrix> = m.operators.clone();
    for a in &m.operators {
        for b in &m.operators {
            words.push(mat_mul(a, b, f));
        }
    }
    let shifts: Vec<FieldElem> = match f.elements() {
        Some(e) if e.len() <= 64 => e,
        _ => (-3..=3).map(|v| f.from_i64(v)).collect(),
    };
    for attempt in 0..opts.norton_attempts {
        let mut a = zeros(f, n, n);
        if attempt < words.len() {
            a = words[attempt].clone();
        } else {
            for w in &words {
                let c = match f {
                    FieldSpec::Rationals => f.from_i64(rng.gen_range(-3..=3)),
                    FieldSpec::Prime(p) => f.from_u64(rng.gen_range(0..p)),
                };
                if c.is_zero() {
                    continue;
                }
                for (ra, rw) in a.iter_mut().zip(w) {
                    for (x, y) in ra.iter_mut().zip(rw) {
                        *x += &(&c * y);
                    }
                }
            }
        }
        for c in &shifts {
            let mut b = a.clone();
            for (i, row) in b.iter_mut().enumerate() {
                row[i] -= c;
            }
            let ker = nullspace(&b, f, n);
            if ker.len() != 1 {
                continue;
            }
            let s = spin(m, &ker)?;
            if !s.is_full() {
                return Ok(Some(s));
            }
            let bt = transpose(&b, f, n, n);
            let coker = nullspace(&bt, f, n);
            let w = spin(dual, &coker)?;
            if !w.is_full() {
                return Ok(Some(w.annihilator()));
            }
            return Ok(None);
        }
    }
    Err(Error::UnresolvedSimplicity)
}

pub fn is_simple(m: &OperatorModule) -> Result<bool> {
    is_simple_with(m, &SearchOptions::default())
}

pub fn is_simple_with(m: &OperatorModule, opts: &SearchOptions) -> Result<bool> {
    Ok(find_proper_submodule(m, opts)?.is_none())
}

/// Image in `m` of a subspace of `m.restrict(s)`.
fn lift_from_sub(s: &Subspace, inner: &Subspace) -> Subspace {
    let vecs: Vec<Vector> = inner.basis().iter().map(|c| s.combine(c)).collect();
    Subspace::from_vectors(s.field(), s.ambient(), &vecs).expect("lengths match")
}

/// Preimage in `m` of a subspace of `m.quotient(s)`.
fn lift_from_quotient(s: &Subspace, inner: &Subspace) -> Subspace {
    let comp = s.complement_positions();
    let mut vecs: Vec<Vector> = s.basis().clone();
    for r in inner.basis() {
        let mut v = vec![s.field().zero(); s.ambient()];
        for (x, &i) in r.iter().zip(&comp) {
            v[i] = x.clone();
        }
        vecs.push(v);
    }
    Subspace::from_vectors(s.field(), s.ambient(), &vecs).expect("lengths match")
}

pub fn minimal_submodule(m: &OperatorModule) -> Result<Subspace> {
    minimal_submodule_with(m, &SearchOptions::default())
}

pub fn minimal_submodule_with(m: &OperatorModule, opts: &SearchOptions) -> Result<Subspace> {
    if m.dim == 0 {
        return Err(Error::ZeroModule);
    }
    let mut cur = Subspace::full(m.field, m.dim);
    loop {
        let sub = m.restrict(&cur)?;
        match find_proper_submodule(&sub, opts)? {
            Some(inner) => cur = lift_from_sub(&cur, &inner),
            None => return Ok(cur),
        }
    }
}

pub fn composition_series(m: &OperatorModule) -> Result<Vec<Subspace>> {
    composition_series_with(m, &SearchOptions::default())
}

pub fn composition_series_with(m: &OperatorModule, opts: &SearchOptions) -> Result<Vec<Subspace>> {
    let mut chain = vec![Subspace::zero(m.field, m.dim)];
    loop {
        let top = chain.last().expect("nonempty");
        if top.is_full() {
            return Ok(chain);
        }
        let q = m.quotient(top)?;
        let inner = minimal_submodule_with(&q, opts)?;
        let next = lift_from_quotient(top, &inner);
        chain.push(next);
    }
}

/// Simple subquotients `S_{k+1}/S_k` of a composition chain.
pub fn composition_factors(m: &OperatorModule, chain: &[Subspace]) -> Result<Vec<OperatorModule>> {
    chain
        .windows(2)
        .map(|w| {
            let q = m.quotient(&w[0])?;
            let comp = w[0].complement_positions();
            let vecs: Vec<Vector> = w[1]
                .basis()
                .iter()
                .map(|v| comp.iter().map(|&i| v[i].clone()).collect())
                .collect();
            let s = Subspace::from_vectors(m.field, q.dim, &vecs)?;
            q.restrict(&s)
        })
        .collect()
}

/// Sum of all simple submodules: images of homomorphisms from the composition factors.
pub fn socle(m: &OperatorModule) -> Result<Subspace> {
    socle_with(m, &SearchOptions::default())
}

pub fn socle_with(m: &OperatorModule, opts: &SearchOptions) -> Result<Subspace> {
    let mut s = Subspace::zero(m.field, m.dim);
    if m.dim == 0 {
        return Ok(s);
    }
    let chain = composition_series_with(m, opts)?;
    for l in composition_factors(m, &chain)? {
        for z in intertwiner_space(&l, m)?.matrices() {
            let cols: Vec<Vector> = (0..l.dim)
                .map(|c| z.iter().map(|r| r[c].clone()).collect())
                .collect();
            s = s.sum(&Subspace::from_vectors(m.field, m.dim, &cols)?)?;
        }
    }
    Ok(s)
}

pub fn socle_series(m: &OperatorModule) -> Result<Vec<Subspace>> {
    socle_series_with(m, &SearchOptions::default())
}

pub fn socle_series_with(m: &OperatorModule, opts: &SearchOptions) -> Result<Vec<Subspace>> {
    let mut chain = vec![Subspace::zero(m.field, m.dim)];
    loop {
        let top = chain.last().expect("nonempty");
        if top.is_full() {
            return Ok(chain);
        }
        let q = m.quotient(top)?;
        let soc = socle_with(&q, opts)?;
        let next = lift_from_quotient(top, &soc);
        chain.push(next);
    }
}

/// Solutions of `Z A_j = B_j Z`, as `dim(B) x dim(A)` matrices flattened row by row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Intertwiners {
    pub rows: usize,
    pub cols: usize,
    pub space: Subspace,
}

impl Intertwiners {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn matrix(&self, flat: &[FieldElem]) -> Matrix {
        flat.chunks(self.cols.max(1))
            .take(self.rows)
            .map(|r| r.to_vec())
            .collect()
    }

    pub fn matrices(&self) -> Vec<Matrix> {
        self.space.basis().iter().map(|f| self.matrix(f)).collect()
    }
}

pub fn intertwiner_space(a: &OperatorModule, b: &OperatorModule) -> Result<Intertwiners> {
    check_pair(a, b)?;
    let (da, db, f) = (a.dim, b.dim, a.field);
    let unknowns = da * db;
    let idx = |r: usize, c: usize| r * da + c;
    let mut eqs: Matrix = Vec::new();
    for (aj, bj) in a.operators.iter().zip(&b.operators) {
        for r in 0..db {
            for c in 0..da {
                let mut row = vec![f.zero(); unknowns];
                for l in 0..da {
                    if !aj[l][c].is_zero() {
                        row[idx(r, l)] += &aj[l][c];
                    }
                }
                for l in 0..db {
                    if !bj[r][l].is_zero() {
                        row[idx(l, c)] -= &bj[r][l];
                    }
                }
                if row.iter().any(|x| !x.is_zero()) {
                    eqs.push(row);
                }
            }
        }
    }
    let sol = if eqs.is_empty() {
        identity(f, unknowns)
    } else {
        nullspace(&eqs, f, unknowns)
    };
    Ok(Intertwiners {
        rows: db,
        cols: da,
        space: Subspace::from_vectors(f, unknowns, &sol)?,
    })
}

pub fn is_isomorphic(a: &OperatorModule, b: &OperatorModule) -> Result<bool> {
    is_isomorphic_with(a, b, &SearchOptions::default())
}

/// Looks for an invertible intertwiner. Over GF(p) the search is exhaustive when the
/// space is small and sampled otherwise; over the rationals the determinant is
/// evaluated on random integer points and then on a full interpolation grid when
/// that grid is small.
pub fn is_isomorphic_with(
    a: &OperatorModule,
    b: &OperatorModule,
    opts: &SearchOptions,
) -> Result<bool> {
    check_pair(a, b)?;
    if a.dim != b.dim {
        return Ok(false);
    }
    if a.dim == 0 {
        return Ok(true);
    }
    let hom = intertwiner_space(a, b)?;
    let k = hom.dim();
    if k == 0 {
        return Ok(false);
    }
    let f = a.field;
    let basis = hom.matrices();
    let eval = |coords: &[FieldElem]| -> bool {
        let mut z = zeros(f, a.dim, a.dim);
        for (c, bm) in coords.iter().zip(&basis) {
            if c.is_zero() {
                continue;
            }
            for (rz, rb) in z.iter_mut().zip(bm) {
                for (x, y) in rz.iter_mut().zip(rb) {
                    *x += &(c * y);
                }
            }
        }
        !determinant(&z, f).is_zero()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    match f {
        FieldSpec::Prime(_) => {
            if let Some(points) = projective_points(f, k, opts.exhaustive_limit) {
                return Ok(points.iter().any(|p| eval(p)));
            }
            for _ in 0..opts.exhaustive_limit.min(2000) {
                if eval(&random_vector(&mut rng, f, k)) {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        FieldSpec::Rationals => {
            for _ in 0..20 {
                let p: Vector = (0..k)
                    .map(|_| f.from_i64(rng.gen_range(-1_000_000..=1_000_000)))
                    .collect();
                if eval(&p) {
                    return Ok(true);
                }
            }
            // degree <= dim in each coordinate, so a grid of (dim+1)^k points decides
            let side = a.dim as u64 + 1;
            let grid = (side as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
            if grid > opts.exhaustive_limit as u128 {
                return Ok(false);
            }
            let mut point = vec![0u64; k];
            loop {
                let p: Vector = point.iter().map(|&v| f.from_u64(v)).collect();
                if eval(&p) {
                    return Ok(true);
                }
                let mut i = 0;
                loop {
                    if i == k {
                        return Ok(false);
                    }
                    point[i] += 1;
                    if point[i] < side {
                        break;
                    }
                    point[i] = 0;
                    i += 1;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rationals;
    const F5: FieldSpec = FieldSpec::Prime(5);

    fn mat(f: FieldSpec, rows: &[&[i64]]) -> Matrix {
        rows.iter()
            .map(|r| r.iter().map(|&x| f.from_i64(x)).collect())
            .collect()
    }

    fn vecf(f: FieldSpec, xs: &[i64]) -> Vector {
        xs.iter().map(|&x| f.from_i64(x)).collect()
    }

    fn nilpotent(f: FieldSpec) -> OperatorModule {
        let z = mat(f, &[&[0, 0], &[0, 0]]);
        // e2 -> e1 in column convention
        let n = mat(f, &[&[0, 1], &[0, 0]]);
        OperatorModule::new(f, 2, vec![n, z.clone(), z.clone(), z]).unwrap()
    }

    fn zero_module(f: FieldSpec, dim: usize) -> OperatorModule {
        OperatorModule::new(f, dim, vec![zeros(f, dim, dim); 4]).unwrap()
    }

    #[test]
    fn spin_examples() {
        let m = nilpotent(Q);
        assert!(spin(&m, &[]).unwrap().is_zero());
        assert!(spin(&m, &[vecf(Q, &[0, 1])]).unwrap().is_full());
        assert_eq!(spin(&m, &[vecf(Q, &[1, 0])]).unwrap().dim(), 1);
        let z = zero_module(Q, 3);
        let s = spin(&z, &[vecf(Q, &[1, 0, 0])]).unwrap();
        assert_eq!(
            s,
            Subspace::from_vectors(Q, 3, &[vecf(Q, &[1, 0, 0])]).unwrap()
        );
        assert!(matches!(
            spin(&m, &[vecf(Q, &[1])]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn minimal_and_series() {
        let m = nilpotent(F5);
        let s = minimal_submodule(&m).unwrap();
        assert_eq!(
            s,
            Subspace::from_vectors(F5, 2, &[vecf(F5, &[1, 0])]).unwrap()
        );
        assert_eq!(composition_series(&m).unwrap().len(), 3);
        let soc = socle_series(&m).unwrap();
        assert_eq!(
            soc.iter().map(|s| s.dim()).collect::<Vec<_>>(),
            vec![0, 1, 2]
        );
        let z = zero_module(Q, 3);
        assert_eq!(
            socle_series(&z)
                .unwrap()
                .iter()
                .map(|s| s.dim())
                .collect::<Vec<_>>(),
            vec![0, 3]
        );
        assert_eq!(composition_series(&zero_module(Q, 0)).unwrap().len(), 1);
        assert!(matches!(
            minimal_submodule(&zero_module(Q, 0)),
            Err(Error::ZeroModule)
        ));
        let one = zero_module(Q, 1);
        assert!(minimal_submodule(&one).unwrap().is_full());
        assert!(is_simple(&one).unwrap());
    }

    fn rotation(f: FieldSpec) -> OperatorModule {
        // x^2 = -1: simple over Q, splits over GF(5)
        let r = mat(f, &[&[0, -1], &[1, 0]]);
        let z = zeros(f, 2, 2);
        OperatorModule::new(f, 2, vec![r, z.clone(), z.clone(), z]).unwrap()
    }

    #[test]
    fn simplicity_depends_on_field() {
        assert!(is_simple(&rotation(FieldSpec::Prime(3))).unwrap());
        assert!(!is_simple(&rotation(F5)).unwrap());
        // not absolutely simple: no nullity-one element over Q
        assert!(matches!(
            is_simple(&rotation(Q)),
            Err(Error::UnresolvedSimplicity)
        ));
    }

    #[test]
    fn norton_certifies_over_q() {
        let a = mat(Q, &[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]]);
        let b = mat(Q, &[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let z = zeros(Q, 3, 3);
        let m = OperatorModule::new(Q, 3, vec![a, b, z.clone(), z]).unwrap();
        assert!(is_simple(&m).unwrap());
        assert_eq!(composition_series(&m).unwrap().len(), 2);
    }

    #[test]
    fn intertwiners_and_isomorphism() {
        let m = nilpotent(Q);
        assert_eq!(intertwiner_space(&m, &m).unwrap().dim(), 2);
        assert!(is_isomorphic(&m, &m).unwrap());
        let z = zero_module(Q, 2);
        assert_eq!(intertwiner_space(&z, &z).unwrap().dim(), 4);
        assert!(!is_isomorphic(&m, &z).unwrap());
        assert!(!is_isomorphic(&m, &zero_module(Q, 3)).unwrap());
        let p = mat(Q, &[&[2, 1], &[1, 1]]);
        assert!(is_isomorphic(&m, &m.conjugate(&p).unwrap()).unwrap());
        let g = nilpotent(F5);
        assert!(matches!(
            intertwiner_space(&m, &g),
            Err(Error::FieldMismatch(..))
        ));
        for z in intertwiner_space(&m, &m).unwrap().matrices() {
            for j in 0..4 {
                assert_eq!(
                    mat_mul(&z, &m.operators()[j], Q),
                    mat_mul(&m.operators()[j], &z, Q)
                );
            }
        }
    }

    #[test]
    fn conjugation_preserves_composition_length() {
        let m = nilpotent(F5).direct_sum(&rotation(F5)).unwrap();
        let p = mat(
            F5,
            &[&[1, 2, 0, 1], &[0, 1, 3, 0], &[0, 0, 1, 4], &[1, 0, 0, 1]],
        );
        let c = m.conjugate(&p).unwrap();
        let a = composition_series(&m).unwrap();
        let b = composition_series_with(
            &c,
            &SearchOptions {
                seed: 7,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(a.len(), 5);
        assert_eq!(a.len(), b.len());
        for s in &a {
            assert!(m.is_invariant(s));
        }
        assert_eq!(socle_series(&m).unwrap().last().unwrap().dim(), 4);
    }

    #[test]
    fn json_round_trip() {
        let m = nilpotent(F5);
        let j = serde_json::to_string(&m.to_json()).unwrap();
        let back = OperatorModule::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn projective_enumeration() {
        assert_eq!(projective_points(F5, 2, 100).unwrap().len(), 6);
        assert!(projective_points(F5, 8, 100).is_none());
        assert!(projective_points(Q, 2, 100).is_none());
    }
}
