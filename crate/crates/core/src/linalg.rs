//! Exact linear algebra over the rationals.
//!
//! Dense matrices are reduced by Gauss-Jordan elimination with leftmost-column,
//! topmost-row pivoting, so reduced forms are reproducible. Large evaluation
//! matrices never exist densely: their rows are streamed into an [`Echelon`],
//! which keeps only a row-echelon basis of what it has seen.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Q;

pub type QVector = Vec<Q>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn scalar(n: usize, c: Q) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    /// Builds a matrix from rows; every row must have `cols` entries.
    pub fn from_rows(cols: usize, rows: Vec<QVector>) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, got: r.len() });
            }
            data.extend(r);
        }
        Ok(QMatrix { rows: n, cols, data })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(len: usize, cols: &[QVector]) -> Result<Self> {
        let mut m = Self::zeros(len, cols.len());
        for (j, c) in cols.iter().enumerate() {
            if c.len() != len {
                return Err(Error::DimensionMismatch { expected: len, got: c.len() });
            }
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), cols, "ragged integer matrix");
                r.iter().map(|&x| crate::rational::q(x))
            })
            .collect();
        QMatrix { rows: rows.len(), cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Q) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> QVector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Q]) -> Result<QVector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, got: v.len() });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Q::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    pub fn mul(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, got: other.rows });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let cur = out.get(i, j) + a * b;
                        out.set(i, j, cur);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> Q {
        (0..self.rows.min(self.cols)).fold(Q::zero(), |acc, i| acc + self.get(i, i))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Gauss-Jordan elimination restricted to the first `limit` columns; row
    /// operations are applied to the full rows. Returns the pivot columns.
    fn reduce_columns(&mut self, limit: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..limit {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self.get(r, c).recip();
            for j in c..self.cols {
                let v = self.get(r, j) * &inv;
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r || self.get(i, c).is_zero() {
                    continue;
                }
                let f = self.get(i, c).clone();
                for j in c..self.cols {
                    let sub = self.get(r, j);
                    if sub.is_zero() {
                        continue;
                    }
                    let v = self.get(i, j) - &f * sub;
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }
}

/// Reduced row echelon form and its pivot columns.
pub fn rref(m: &QMatrix) -> (QMatrix, Vec<usize>) {
    let mut r = m.clone();
    let piv = r.reduce_columns(m.cols);
    (r, piv)
}

pub fn rank(m: &QMatrix) -> usize {
    rref(m).1.len()
}

/// Basis of `{v : Mv = 0}`, one vector per free column (1 there, 0 at the other
/// free columns).
pub fn nullspace(m: &QMatrix) -> Vec<QVector> {
    let (r, pivots) = rref(m);
    let mut is_pivot = vec![None; m.cols];
    for (i, &c) in pivots.iter().enumerate() {
        is_pivot[c] = Some(i);
    }
    (0..m.cols)
        .filter(|&f| is_pivot[f].is_none())
        .map(|f| {
            let mut v = vec![Q::zero(); m.cols];
            v[f] = Q::one();
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = -r.get(i, f).clone();
            }
            v
        })
        .collect()
}

/// Some solution of `Mx = b`, with free variables set to zero.
pub fn solve(m: &QMatrix, b: &[Q]) -> Result<Option<QVector>> {
    if b.len() != m.rows {
        return Err(Error::DimensionMismatch { expected: m.rows, got: b.len() });
    }
    let mut aug = QMatrix::zeros(m.rows, m.cols + 1);
    for i in 0..m.rows {
        for j in 0..m.cols {
            aug.set(i, j, m.get(i, j).clone());
        }
        aug.set(i, m.cols, b[i].clone());
    }
    let pivots = aug.reduce_columns(m.cols);
    if (pivots.len()..m.rows).any(|i| !aug.get(i, m.cols).is_zero()) {
        return Ok(None);
    }
    let mut x = vec![Q::zero(); m.cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = aug.get(i, m.cols).clone();
    }
    Ok(Some(x))
}

/// Inverse of a square matrix, `None` when singular.
pub fn inverse(m: &QMatrix) -> Result<Option<QMatrix>> {
    let n = m.rows;
    if m.cols != n {
        return Err(Error::DimensionMismatch { expected: n, got: m.cols });
    }
    let mut aug = QMatrix::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug.set(i, j, m.get(i, j).clone());
        }
        aug.set(i, n + i, Q::one());
    }
    if aug.reduce_columns(n).len() < n {
        return Ok(None);
    }
    let mut out = QMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, aug.get(i, n + j).clone());
        }
    }
    Ok(Some(out))
}

pub fn determinant(m: &QMatrix) -> Result<Q> {
    if m.rows != m.cols {
        return Err(Error::DimensionMismatch { expected: m.rows, got: m.cols });
    }
    let n = m.rows;
    let mut a = m.clone();
    let mut det = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a.get(i, c).is_zero()) else {
            return Ok(Q::zero());
        };
        if p != c {
            for j in 0..n {
                a.data.swap(p * n + j, c * n + j);
            }
            det = -det;
        }
        let piv = a.get(c, c).clone();
        det *= &piv;
        for i in c + 1..n {
            if a.get(i, c).is_zero() {
                continue;
            }
            let f = a.get(i, c) / &piv;
            for j in c..n {
                let v = a.get(i, j) - &f * a.get(c, j);
                a.set(i, j, v);
            }
        }
    }
    Ok(det)
}

/// Matrix of `t` restricted to the span of `basis`, in that basis.
///
/// Column `i` holds the coordinates of `t · basis[i]`. Fails with
/// [`Error::NotInvariant`] when some image leaves the span.
pub fn restrict_operator(t: &QMatrix, basis: &[QVector]) -> Result<QMatrix> {
    let n = t.rows();
    if t.cols() != n {
        return Err(Error::DimensionMismatch { expected: n, got: t.cols() });
    }
    let k = basis.len();
    let mut aug = QMatrix::zeros(n, 2 * k);
    for (j, b) in basis.iter().enumerate() {
        if b.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: b.len() });
        }
        let image = t.mul_vec(b)?;
        for i in 0..n {
            aug.set(i, j, b[i].clone());
            aug.set(i, k + j, image[i].clone());
        }
    }
    let pivots = aug.reduce_columns(k);
    if pivots.len() != k {
        return Err(Error::InvalidParams("subspace basis is linearly dependent".into()));
    }
    for j in 0..k {
        if (k..n).any(|i| !aug.get(i, k + j).is_zero()) {
            return Err(Error::NotInvariant(j));
        }
    }
    let mut out = QMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            out.set(i, j, aug.get(i, k + j).clone());
        }
    }
    Ok(out)
}

/// Sparse vector with strictly increasing indices and no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseVec {
    entries: Vec<(usize, Q)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    /// Builds from unsorted `(index, value)` pairs, summing duplicates.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, Q)>) -> Self {
        let mut map: BTreeMap<usize, Q> = BTreeMap::new();
        for (i, x) in pairs {
            *map.entry(i).or_insert_with(Q::zero) += x;
        }
        SparseVec { entries: map.into_iter().filter(|(_, x)| !x.is_zero()).collect() }
    }

    pub fn from_dense(v: &[Q]) -> Self {
        SparseVec {
            entries: v
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (i, x.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, len: usize) -> QVector {
        let mut v = vec![Q::zero(); len];
        for (i, x) in &self.entries {
            v[*i] = x.clone();
        }
        v
    }

    pub fn entries(&self) -> &[(usize, Q)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> Q {
        match self.entries.binary_search_by_key(&i, |(j, _)| *j) {
            Ok(p) => self.entries[p].1.clone(),
            Err(_) => Q::zero(),
        }
    }

    fn leading(&self) -> Option<usize> {
        self.entries.first().map(|(i, _)| *i)
    }

    /// `self - f * other`.
    fn sub_scaled(&self, f: &Q, other: &SparseVec) -> SparseVec {
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, x)), Some((j, y))) => {
                    if i < j {
                        out.push((*i, x.clone()));
                        a.next();
                    } else if j < i {
                        out.push((*j, -(f * y)));
                        b.next();
                    } else {
                        let v = x - f * y;
                        if !v.is_zero() {
                            out.push((*i, v));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((i, x)), None) => {
                    out.push((*i, x.clone()));
                    a.next();
                }
                (None, Some((j, y))) => {
                    out.push((*j, -(f * y)));
                    b.next();
                }
                (None, None) => break,
            }
        }
        SparseVec { entries: out }
    }

    fn scale(&mut self, f: &Q) {
        for (_, x) in &mut self.entries {
            *x *= f;
        }
    }
}

/// Incrementally maintained row-echelon basis of a subspace of `Q^len`.
///
/// Every stored row is normalized to a leading 1 at its pivot column, so the
/// pivot is the first nonzero entry and reduction only moves rightwards.
#[derive(Clone, Debug)]
pub struct Echelon {
    len: usize,
    rows: Vec<SparseVec>,
    by_pivot: BTreeMap<usize, usize>,
}

impl Echelon {
    pub fn new(len: usize) -> Self {
        Echelon { len, rows: Vec::new(), by_pivot: BTreeMap::new() }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.len
    }

    /// Reduces `v` against the current rows.
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        let mut cursor = 0;
        loop {
            let next = v
                .entries
                .iter()
                .filter(|(i, _)| *i >= cursor)
                .find_map(|(i, x)| self.by_pivot.get(i).map(|&r| (*i, x.clone(), r)));
            match next {
                Some((col, f, r)) => {
                    v = v.sub_scaled(&f, &self.rows[r]);
                    cursor = col + 1;
                }
                None => return v,
            }
        }
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        debug_assert!(v.entries.last().is_none_or(|(i, _)| *i < self.len));
        let mut v = self.reduce(v);
        let Some(p) = v.leading() else {
            return false;
        };
        let inv = v.entries[0].1.recip();
        v.scale(&inv);
        self.by_pivot.insert(p, self.rows.len());
        self.rows.push(v);
        true
    }

    pub fn insert_dense(&mut self, v: &[Q]) -> bool {
        self.insert(SparseVec::from_dense(v))
    }

    pub fn contains(&self, v: SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Merges another basis of the same ambient space into this one.
    pub fn absorb(&mut self, other: Echelon) {
        for r in other.rows {
            self.insert(r);
        }
    }

    /// The unique reduced row echelon basis, rows ordered by pivot column.
    pub fn into_rref(self) -> Rref {
        let Echelon { len, mut rows, by_pivot } = self;
        let order: Vec<(usize, usize)> = by_pivot.into_iter().collect();
        let mut sorted: Vec<SparseVec> =
            order.iter().map(|&(_, r)| std::mem::take(&mut rows[r])).collect();
        let pivots: Vec<usize> = order.iter().map(|&(c, _)| c).collect();
        for k in (0..sorted.len()).rev() {
            let (head, tail) = sorted.split_at_mut(k);
            let row = &tail[0];
            let pc = pivots[k];
            for above in head.iter_mut() {
                let f = above.get(pc);
                if !f.is_zero() {
                    *above = above.sub_scaled(&f, row);
                }
            }
        }
        Rref { len, rows: sorted, pivots }
    }
}

/// A reduced row echelon basis: row `i` has a 1 at `pivots[i]` and zeros at
/// every other pivot column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub len: usize,
    pub rows: Vec<SparseVec>,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Basis of the orthogonal complement `{c : c · r = 0 for every row r}`,
    /// one sparse vector per free column `f`: 1 at `f`, `-rows[i][f]` at
    /// `pivots[i]`.
    pub fn complement_basis(&self) -> Vec<(usize, SparseVec)> {
        let mut is_pivot = vec![false; self.len];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        // column f of the row block, gathered once
        let mut col_entries: Vec<Vec<(usize, Q)>> = vec![Vec::new(); self.len];
        for (i, row) in self.rows.iter().enumerate() {
            for (c, x) in row.entries() {
                if !is_pivot[*c] {
                    col_entries[*c].push((self.pivots[i], -x.clone()));
                }
            }
        }
        (0..self.len)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut pairs = std::mem::take(&mut col_entries[f]);
                pairs.push((f, Q::one()));
                (f, SparseVec::from_pairs(pairs))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&QMatrix::identity(3)), 3);
        assert_eq!(rank(&QMatrix::zeros(4, 7)), 0);
        assert_eq!(rank(&QMatrix::from_i64(&[&[1, 2], &[2, 4]])), 1);
    }

    #[test]
    fn nullspace_examples() {
        assert!(nullspace(&QMatrix::identity(2)).is_empty());
        let z = nullspace(&QMatrix::zeros(2, 2));
        assert_eq!(z.len(), 2);
        assert_eq!(rank(&QMatrix::from_rows(2, z).unwrap()), 2);
        let n = nullspace(&QMatrix::from_i64(&[&[1, 1]]));
        assert_eq!(n, vec![vec![q(-1), q(1)]]);
    }

    #[test]
    fn restrict_examples() {
        let t = QMatrix::scalar(3, q(2));
        let basis = vec![vec![q(1), q(1), q(0)], vec![q(0), q(1), q(5)]];
        assert_eq!(restrict_operator(&t, &basis).unwrap(), QMatrix::scalar(2, q(2)));

        let d = QMatrix::from_i64(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 3]]);
        let e = vec![vec![q(1), q(0), q(0)], vec![q(0), q(1), q(0)]];
        assert_eq!(
            restrict_operator(&d, &e).unwrap(),
            QMatrix::from_i64(&[&[1, 0], &[0, 2]])
        );

        let swap = QMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        let sym = vec![vec![q(1), q(1)]];
        assert_eq!(restrict_operator(&swap, &sym).unwrap(), QMatrix::from_i64(&[&[1]]));

        let not_inv = vec![vec![q(1), q(0)]];
        assert_eq!(restrict_operator(&swap, &not_inv), Err(Error::NotInvariant(0)));
    }

    #[test]
    fn determinant_and_solve() {
        let m = QMatrix::from_i64(&[&[2, 1], &[1, 3]]);
        assert_eq!(determinant(&m).unwrap(), q(5));
        let x = solve(&m, &[q(3), q(4)]).unwrap().unwrap();
        assert_eq!(x, vec![q(1), q(1)]);
        let sing = QMatrix::from_i64(&[&[1, 1], &[1, 1]]);
        assert_eq!(solve(&sing, &[q(1), q(2)]).unwrap(), None);
        assert_eq!(determinant(&sing).unwrap(), q(0));
        let inv = inverse(&m).unwrap().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), QMatrix::identity(2));
        assert_eq!(inverse(&sing).unwrap(), None);
    }

    #[test]
    fn echelon_matches_dense_rref() {
        let rows = vec![
            vec![q(0), q(2), q(4), q(1)],
            vec![q(1), q(1), q(1), q(1)],
            vec![q(1), q(3), q(5), q(2)],
            vec![qf(1, 2), q(0), q(-1), q(3)],
        ];
        let mut e = Echelon::new(4);
        for r in &rows {
            e.insert_dense(r);
        }
        let m = QMatrix::from_rows(4, rows).unwrap();
        let (dense, piv) = rref(&m);
        let sparse = e.into_rref();
        assert_eq!(sparse.pivots, piv);
        for (i, row) in sparse.rows.iter().enumerate() {
            assert_eq!(row.to_dense(4), dense.row(i).to_vec());
        }
        for (_, c) in sparse.complement_basis() {
            assert!(m.mul_vec(&c.to_dense(4)).unwrap().iter().all(Zero::is_zero));
        }
    }
}
