//! Exact linear algebra: sparse echelon bases keyed by arbitrary ordered keys,
//! and dense matrices over a field.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalars::{FieldElem, FieldSpec};

pub type SparseVec<K> = BTreeMap<K, FieldElem>;

pub fn sparse_axpy<K: Ord + Clone>(y: &mut SparseVec<K>, a: &FieldElem, x: &SparseVec<K>) {
    if a.is_zero() {
        return;
    }
    for (k, v) in x {
        let d = a * v;
        let vanished = match y.get_mut(k) {
            Some(e) => {
                *e += &d;
                e.is_zero()
            }
            None => {
                if !d.is_zero() {
                    y.insert(k.clone(), d);
                }
                false
            }
        };
        if vanished {
            y.remove(k);
        }
    }
}

pub fn sparse_scale<K: Ord + Clone>(x: &SparseVec<K>, a: &FieldElem) -> SparseVec<K> {
    if a.is_zero() {
        return SparseVec::new();
    }
    x.iter().map(|(k, v)| (k.clone(), v * a)).collect()
}

/// Echelon basis of a subspace of sparse vectors. Every row's pivot is its largest
/// key with coefficient 1, so reduction visits keys from the top down and the
/// remainder is a canonical coset representative. Rows remember how they combine
/// the independent vectors that were inserted.
#[derive(Debug, Clone)]
pub struct Echelon<K: Ord + Clone> {
    field: FieldSpec,
    rows: BTreeMap<K, (SparseVec<K>, SparseVec<usize>)>,
    basis: Vec<SparseVec<K>>,
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new(field: FieldSpec) -> Self {
        Echelon {
            field,
            rows: BTreeMap::new(),
            basis: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// The independent vectors in insertion order.
    pub fn basis(&self) -> &[SparseVec<K>] {
        &self.basis
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }

    /// `(r, c)` with `v = r + sum_b c[b] * basis[b]` and `r` free of pivot keys.
    pub fn reduce(&self, v: &SparseVec<K>) -> (SparseVec<K>, SparseVec<usize>) {
        let mut r = v.clone();
        let mut combo: SparseVec<usize> = SparseVec::new();
        let mut upper: Option<K> = None;
        loop {
            let next = match &upper {
                None => r.keys().next_back().cloned(),
                Some(u) => r.range(..u.clone()).next_back().map(|(k, _)| k.clone()),
            };
            let Some(k) = next else { break };
            if let Some((row, rc)) = self.rows.get(&k) {
                let c = r[&k].clone();
                sparse_axpy(&mut r, &-&c, row);
                sparse_axpy(&mut combo, &c, rc);
            }
            upper = Some(k);
        }
        (r, combo)
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).0.is_empty()
    }

    /// Coordinates in terms of `basis()`, if `v` lies in the span.
    pub fn coordinates(&self, v: &SparseVec<K>) -> Option<SparseVec<usize>> {
        let (r, c) = self.reduce(v);
        r.is_empty().then_some(c)
    }

    /// Inserts `v`; returns its basis index when it was independent.
    pub fn insert(&mut self, v: &SparseVec<K>) -> Option<usize> {
        let (r, combo) = self.reduce(v);
        let (pivot, lead) = r.iter().next_back().map(|(k, c)| (k.clone(), c.clone()))?;
        let idx = self.basis.len();
        self.basis.push(v.clone());
        // r = v - sum combo[b] basis[b]
        let mut rc: SparseVec<usize> = sparse_scale(&combo, &-self.field.one());
        rc.insert(idx, self.field.one());
        let inv = lead.inv().expect("nonzero pivot");
        self.rows
            .insert(pivot, (sparse_scale(&r, &inv), sparse_scale(&rc, &inv)));
        Some(idx)
    }

    /// Fully reduced rows in increasing pivot order.
    pub fn rref_rows(&self) -> Vec<SparseVec<K>> {
        let mut done: BTreeMap<K, SparseVec<K>> = BTreeMap::new();
        for (p, (row, _)) in &self.rows {
            let mut r = row.clone();
            let keys: Vec<K> = r.keys().filter(|k| *k < p).cloned().collect();
            for k in keys.into_iter().rev() {
                if let (Some(c), Some(d)) = (r.get(&k).cloned(), done.get(&k)) {
                    sparse_axpy(&mut r, &-&c, d);
                }
            }
            done.insert(p.clone(), r);
        }
        done.into_values().collect()
    }
}

/// Kernel of the map `e_i -> vecs[i]`: all coefficient tuples with vanishing combination.
pub fn sparse_kernel<K: Ord + Clone>(
    field: FieldSpec,
    vecs: &[SparseVec<K>],
) -> Vec<Vec<FieldElem>> {
    let mut ech: Echelon<K> = Echelon::new(field);
    let mut kernel = Vec::new();
    let mut basis_pos: Vec<usize> = Vec::new();
    for (i, v) in vecs.iter().enumerate() {
        let (r, combo) = ech.reduce(v);
        if r.is_empty() {
            // v - sum combo[b] basis[b] = 0
            let mut k = vec![field.zero(); vecs.len()];
            k[i] = field.one();
            for (b, c) in combo {
                k[basis_pos[b]] = -&c;
            }
            kernel.push(k);
        } else {
            ech.insert(v);
            basis_pos.push(i);
        }
    }
    kernel
}

// ---------------------------------------------------------------------------
// Dense matrices, row-major.

pub type Matrix = Vec<Vec<FieldElem>>;

pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Matrix {
    vec![vec![field.zero(); cols]; rows]
}

pub fn identity(field: FieldSpec, n: usize) -> Matrix {
    let mut m = zeros(field, n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = field.one();
    }
    m
}

pub fn mat_mul(a: &Matrix, b: &Matrix, field: FieldSpec) -> Matrix {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, |r| r.len());
    let mut out = zeros(field, n, m);
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[l][j].is_zero() {
                    let d = &a[i][l] * &b[l][j];
                    out[i][j] += &d;
                }
            }
        }
    }
    out
}

pub fn mat_vec(a: &Matrix, v: &[FieldElem], field: FieldSpec) -> Vec<FieldElem> {
    a.iter()
        .map(|row| {
            row.iter().zip(v).fold(field.zero(), |acc, (x, y)| {
                if x.is_zero() {
                    acc
                } else {
                    &acc + &(x * y)
                }
            })
        })
        .collect()
}

pub fn transpose(a: &Matrix, field: FieldSpec, rows: usize, cols: usize) -> Matrix {
    let mut t = zeros(field, cols, rows);
    for i in 0..rows {
        for j in 0..cols {
            t[j][i] = a[i][j].clone();
        }
    }
    t
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    if !m[r][j].is_zero() {
                        let d = &f * &m[r][j];
                        m[i][j] -= &d;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    let mut c = m.clone();
    rref(&mut c).len()
}

/// Basis of `{v : m v = 0}` for an `rows x cols` matrix.
pub fn nullspace(m: &Matrix, field: FieldSpec, cols: usize) -> Vec<Vec<FieldElem>> {
    let mut r = m.clone();
    let pivots = rref(&mut r);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![field.zero(); cols];
            v[f] = field.one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -&r[i][f];
            }
            v
        })
        .collect()
}

pub fn inverse(m: &Matrix, field: FieldSpec) -> Result<Matrix> {
    let n = m.len();
    let mut aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { field.one() } else { field.zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(Error::DivisionByZero);
    }
    Ok(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn determinant(m: &Matrix, field: FieldSpec) -> FieldElem {
    let n = m.len();
    let mut a = m.clone();
    let mut det = field.one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return field.zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det = &det * &a[c][c];
        let inv = a[c][c].inv().expect("nonzero pivot");
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for j in c..n {
                let d = &f * &a[c][j];
                a[i][j] -= &d;
            }
        }
    }
    det
}
