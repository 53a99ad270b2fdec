//! Finite-dimensional associative algebras over the rationals, given by
//! structure constants `b_i b_j = sum_k c[i][j][k] b_k`.

mod build;
mod structure;
mod universal;

use std::fmt::Write as _;
use std::sync::OnceLock;

use num_traits::{One, Zero};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::linalg::{QMatrix, QVector};
use crate::rational::{QJson, Q};

pub use build::{block_triangular, direct_sum, matrix_algebra, nilpotent_free, unitalize};
pub use structure::{Block, Semisimple, StructureReport};
pub use universal::{monoid_word_count, universal_fundamental, UniversalFundamental, DEFAULT_MAX_DIM};

/// Sparse linear combination of basis elements, sorted by index.
pub type Terms = Vec<(usize, Q)>;

#[derive(Clone, Debug)]
pub struct FDAlgebra {
    dim: usize,
    names: Vec<String>,
    table: Vec<Vec<Terms>>,
    unit: Option<QVector>,
    radical: OnceLock<Vec<QVector>>,
    ts: OnceLock<(usize, usize)>,
    semisimple: OnceLock<Result<Semisimple>>,
}

impl PartialEq for FDAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.names == other.names && self.table == other.table && self.unit == other.unit
    }
}

impl Eq for FDAlgebra {}

fn normalize_terms(t: impl IntoIterator<Item = (usize, Q)>) -> Terms {
    let mut v: Terms = t.into_iter().collect();
    v.sort_by_key(|(k, _)| *k);
    let mut out: Terms = Vec::with_capacity(v.len());
    for (k, x) in v {
        match out.last_mut() {
            Some((j, y)) if *j == k => *y += x,
            _ => out.push((k, x)),
        }
    }
    out.retain(|(_, x)| !x.is_zero());
    out
}

impl FDAlgebra {
    /// Builds and validates an algebra: table shape, associativity on all
    /// basis triples, and the unit if one is given.
    pub fn new(names: Vec<String>, table: Vec<Vec<Terms>>, unit: Option<QVector>) -> Result<Self> {
        let a = Self::new_unchecked(names, table, unit)?;
        a.check_associativity()?;
        a.check_unit()?;
        Ok(a)
    }

    /// Like [`FDAlgebra::new`] but trusts associativity and the unit; shape is
    /// still checked.
    pub fn new_unchecked(names: Vec<String>, table: Vec<Vec<Terms>>, unit: Option<QVector>) -> Result<Self> {
        let dim = names.len();
        if table.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: table.len() });
        }
        let mut norm = Vec::with_capacity(dim);
        for row in table {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: row.len() });
            }
            let mut r = Vec::with_capacity(dim);
            for cell in row {
                if let Some((k, _)) = cell.iter().find(|(k, _)| *k >= dim) {
                    return Err(Error::InvalidParams(format!("basis index {k} out of range")));
                }
                r.push(normalize_terms(cell));
            }
            norm.push(r);
        }
        if let Some(u) = &unit {
            if u.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: u.len() });
            }
        }
        Ok(FDAlgebra {
            dim,
            names,
            table: norm,
            unit,
            radical: OnceLock::new(),
            ts: OnceLock::new(),
            semisimple: OnceLock::new(),
        })
    }

    /// Builds from a dense table `c[i][j]` of coordinate vectors.
    pub fn from_dense(names: Vec<String>, c: Vec<Vec<QVector>>, unit: Option<QVector>) -> Result<Self> {
        let dim = names.len();
        let mut table = Vec::with_capacity(c.len());
        for row in c {
            let mut r = Vec::with_capacity(row.len());
            for v in row {
                if v.len() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, got: v.len() });
                }
                r.push(v.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect());
            }
            table.push(r);
        }
        Self::new(names, table, unit)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_names(&self) -> &[String] {
        &self.names
    }

    pub fn has_unit(&self) -> bool {
        self.unit.is_some()
    }

    pub fn unit(&self) -> Option<&QVector> {
        self.unit.as_ref()
    }

    /// `b_i b_j` as sparse terms.
    pub fn product(&self, i: usize, j: usize) -> &[(usize, Q)] {
        &self.table[i][j]
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Q {
        self.table[i][j].iter().find(|(l, _)| *l == k).map_or_else(Q::zero, |(_, x)| x.clone())
    }

    pub fn basis_vector(&self, i: usize) -> QVector {
        let mut v = vec![Q::zero(); self.dim];
        v[i] = Q::one();
        v
    }

    /// Product of sparse elements.
    pub fn mul_terms(&self, x: &[(usize, Q)], y: &[(usize, Q)]) -> Terms {
        let mut acc = vec![Q::zero(); self.dim];
        let mut touched = false;
        for (i, a) in x {
            for (j, b) in y {
                let ab = a * b;
                for (k, c) in &self.table[*i][*j] {
                    acc[*k] += &ab * c;
                    touched = true;
                }
            }
        }
        if !touched {
            return Vec::new();
        }
        acc.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect()
    }

    pub fn multiply(&self, x: &[Q], y: &[Q]) -> Result<QVector> {
        for v in [x, y] {
            if v.len() != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, got: v.len() });
            }
        }
        let p = self.mul_terms(&to_terms(x), &to_terms(y));
        Ok(to_dense(&p, self.dim))
    }

    /// Matrix of `y -> x y`.
    pub fn left_mult_matrix(&self, x: &[Q]) -> QMatrix {
        let xt = to_terms(x);
        let mut m = QMatrix::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            for (k, c) in self.mul_terms(&xt, &[(j, Q::one())]) {
                m.set(k, j, c);
            }
        }
        m
    }

    /// Checks `(b_i b_j) b_k = b_i (b_j b_k)` on all basis triples.
    pub fn check_associativity(&self) -> Result<()> {
        for i in 0..self.dim {
            for j in 0..self.dim {
                let ij = &self.table[i][j];
                for k in 0..self.dim {
                    let left = self.mul_terms(ij, &[(k, Q::one())]);
                    let right = self.mul_terms(&[(i, Q::one())], &self.table[j][k]);
                    if left != right {
                        return Err(Error::NotAssociative(i, j, k));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_unit(&self) -> Result<()> {
        let Some(u) = &self.unit else {
            return Ok(());
        };
        let ut = to_terms(u);
        for i in 0..self.dim {
            let e = [(i, Q::one())];
            if self.mul_terms(&ut, &e) != e || self.mul_terms(&e, &ut) != e {
                return Err(Error::InvalidParams(format!("unit is not an identity on basis element {i}")));
            }
        }
        Ok(())
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.table[i][j] == self.table[j][i]))
    }

    /// Reads the structure-constant JSON document.
    pub fn from_json_str(s: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Doc {
            dim: usize,
            basis: Vec<String>,
            unit: Option<Vec<QJson>>,
            table: Vec<Vec<Vec<QJson>>>,
        }
        let doc: Doc = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        if doc.basis.len() != doc.dim {
            return Err(Error::DimensionMismatch { expected: doc.dim, got: doc.basis.len() });
        }
        let table = doc
            .table
            .into_iter()
            .map(|row| row.into_iter().map(|v| v.into_iter().map(|x| x.0).collect()).collect())
            .collect();
        let unit = doc.unit.map(|u| u.into_iter().map(|x| x.0).collect());
        Self::from_dense(doc.basis, table, unit)
    }

    /// Writes the structure-constant JSON document, one `c[i]` block per line.
    pub fn to_json_string(&self) -> String {
        let js = |x: &Q| serde_json::to_string(&QJson(x.clone())).expect("rational serializes");
        let vec = |v: &[Q]| format!("[{}]", v.iter().map(js).collect::<Vec<_>>().join(", "));
        let mut out = String::from("{\n");
        let _ = writeln!(out, "  \"dim\": {},", self.dim);
        let _ = writeln!(out, "  \"basis\": {},", serde_json::to_string(&self.names).expect("strings serialize"));
        match &self.unit {
            Some(u) => {
                let _ = writeln!(out, "  \"unit\": {},", vec(u));
            }
            None => out.push_str("  \"unit\": null,\n"),
        }
        out.push_str("  \"table\": [\n");
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim).map(|j| vec(&to_dense(&self.table[i][j], self.dim))).collect();
            let sep = if i + 1 < self.dim { "," } else { "" };
            let _ = writeln!(out, "    [{}]{sep}", row.join(", "));
        }
        out.push_str("  ]\n}\n");
        out
    }
}

pub fn to_terms(x: &[Q]) -> Terms {
    x.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect()
}

pub fn to_dense(t: &[(usize, Q)], dim: usize) -> QVector {
    let mut v = vec![Q::zero(); dim];
    for (i, c) in t {
        v[*i] = c.clone();
    }
    v
}
