use std::collections::BTreeMap;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::{FDAlgebra, Terms};
use crate::error::{Error, Result};
use crate::linalg::{Echelon, Rref, SparseVec};
use crate::perm::{compose, inverse, rank as perm_rank, unrank, with_cycle_type};
use crate::rational::{factorial, Q};
use crate::repsym::{character_table, decompose, hook_dimension_u64, Partition};

use super::right_mul_basis;

pub const DEFAULT_DEGREE_BOUND: usize = 7;

#[derive(Clone, Copy, Debug)]
pub struct CodimOptions {
    pub workers: usize,
    pub bound: usize,
}

impl Default for CodimOptions {
    fn default() -> Self {
        CodimOptions { workers: 1, bound: DEFAULT_DEGREE_BOUND }
    }
}

/// Nondecreasing tuples in `[d]^n`, lexicographic.
fn multisets(d: usize, n: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, d: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in start..d {
            cur.push(i);
            rec(i, d, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, d, n, &mut Vec::new(), &mut out);
    out
}

/// One vector per output coordinate: entry `rank(sigma)` is that coordinate
/// of `a_{sigma(1)} ... a_{sigma(n)}`.
fn tuple_vectors(a: &FDAlgebra, tuple: &[usize]) -> Vec<SparseVec> {
    let n = tuple.len();
    let mut per_coord: BTreeMap<usize, Vec<(usize, Q)>> = BTreeMap::new();
    let mut used = vec![false; n];
    fn dfs(
        a: &FDAlgebra,
        tuple: &[usize],
        used: &mut [bool],
        depth: usize,
        r: usize,
        prefix: Option<&Terms>,
        out: &mut BTreeMap<usize, Vec<(usize, Q)>>,
    ) {
        let n = tuple.len();
        if depth == n {
            if let Some(p) = prefix {
                for (k, c) in p {
                    out.entry(*k).or_default().push((r, c.clone()));
                }
            }
            return;
        }
        let mut smaller = 0;
        for i in 0..n {
            if used[i] {
                continue;
            }
            let next = match prefix {
                None => vec![(tuple[i], Q::from_integer(1.into()))],
                Some(p) => right_mul_basis(a, p, tuple[i]),
            };
            if !next.is_empty() {
                used[i] = true;
                dfs(a, tuple, used, depth + 1, r * (n - depth) + smaller, Some(&next), out);
                used[i] = false;
            }
            smaller += 1;
        }
    }
    dfs(a, tuple, &mut used, 0, 0, None, &mut per_coord);
    per_coord.into_values().map(SparseVec::from_pairs).collect()
}

/// `rank(g o sigma)` for every `sigma`, for the generators `(0 1)` and the
/// cycle `i -> i + 1`.
fn generator_tables(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut gens = Vec::new();
    if n >= 2 {
        let mut s: Vec<u8> = (0..n as u8).collect();
        s.swap(0, 1);
        gens.push(s);
        let c: Vec<u8> = (0..n).map(|i| ((i + 1) % n) as u8).collect();
        gens.push(c);
    }
    gens.iter().map(|g| (0..size).map(|r| perm_rank(&compose(g, &unrank(r, n)))).collect()).collect()
}

fn permute(v: &SparseVec, table: &[usize]) -> SparseVec {
    SparseVec::from_pairs(v.entries().iter().map(|(i, x)| (table[*i], x.clone())))
}

/// Row space of the evaluation matrix in `Q^{n!}` (coordinates indexed by
/// permutations in lexicographic order). Its orthogonal complement is
/// `Id(A) ∩ V_n`.
pub fn identity_space(a: &FDAlgebra, n: usize, opts: CodimOptions) -> Result<Rref> {
    if n == 0 {
        return Err(Error::InvalidParams("degree must be at least 1".into()));
    }
    if n > opts.bound {
        return Err(Error::Overflow(format!("degree {n} exceeds the bound {}", opts.bound)));
    }
    let size: usize = factorial(n as u64).to_usize().ok_or_else(|| Error::Overflow("n!".into()))?;
    let reps = multisets(a.dim(), n);
    let workers = opts.workers.max(1);
    let chunk = reps.len().div_ceil(workers).max(1);
    let build = |part: &[Vec<usize>]| {
        let mut ech = Echelon::new(size);
        let mut kept = Vec::new();
        for t in part {
            for v in tuple_vectors(a, t) {
                if ech.is_full() {
                    return (ech, kept);
                }
                if ech.insert(v.clone()) {
                    kept.push(v);
                }
            }
        }
        (ech, kept)
    };
    let parts: Vec<(Echelon, Vec<SparseVec>)> = if workers == 1 {
        vec![build(&reps)]
    } else {
        std::thread::scope(|sc| {
            let hs: Vec<_> = reps.chunks(chunk).map(|c| sc.spawn(move || build(c))).collect();
            hs.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        })
    };
    let mut ech = Echelon::new(size);
    let mut queue = Vec::new();
    for (_, kept) in parts {
        for v in kept {
            if ech.insert(v.clone()) {
                queue.push(v);
            }
        }
    }
    // close the span under the symmetric group acting on positions
    let tables = generator_tables(n, size);
    while let Some(v) = queue.pop() {
        if ech.is_full() {
            break;
        }
        for t in &tables {
            let g = permute(&v, t);
            if ech.insert(g.clone()) {
                queue.push(g);
            }
        }
    }
    Ok(ech.into_rref())
}

pub fn codimension(a: &FDAlgebra, n: usize) -> Result<usize> {
    codimension_with(a, n, CodimOptions::default())
}

pub fn codimension_with(a: &FDAlgebra, n: usize, opts: CodimOptions) -> Result<usize> {
    Ok(identity_space(a, n, opts)?.rank())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CocharacterResult {
    pub n: usize,
    /// Nonzero multiplicities only.
    pub multiplicities: BTreeMap<Partition, u64>,
    pub codimension: usize,
    pub colength: u64,
}

impl CocharacterResult {
    pub fn multiplicity(&self, lambda: &Partition) -> u64 {
        self.multiplicities.get(lambda).copied().unwrap_or(0)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let m: Vec<serde_json::Value> = self
            .multiplicities
            .iter()
            .map(|(l, k)| serde_json::json!({"partition": l.parts(), "multiplicity": k}))
            .collect();
        serde_json::json!({
            "n": self.n,
            "codimension": self.codimension,
            "colength": self.colength,
            "multiplicities": m,
        })
    }
}

pub fn cocharacter(a: &FDAlgebra, n: usize) -> Result<CocharacterResult> {
    cocharacter_with(a, n, CodimOptions::default())
}

/// Character of `S_n` on `V_n / (Id(A) ∩ V_n)` by traces on the identity
/// subspace, decomposed into irreducibles.
pub fn cocharacter_with(a: &FDAlgebra, n: usize, opts: CodimOptions) -> Result<CocharacterResult> {
    let rref = identity_space(a, n, opts)?;
    let size = rref.len;
    let ids = rref.complement_basis();
    let table = character_table(n);
    let mut values = Vec::with_capacity(table.classes.len());
    for mu in &table.classes {
        let tau = with_cycle_type(mu.parts());
        let tau_inv = inverse(&tau);
        let full = if mu.parts().iter().all(|&p| p == 1) { Q::from_integer(size.into()) } else { Q::zero() };
        let mut on_ids = Q::zero();
        for (f, b) in &ids {
            let idx = perm_rank(&compose(&tau_inv, &unrank(*f, n)));
            on_ids += b.get(idx);
        }
        values.push(full - on_ids);
    }
    let dec = decompose(&values, n)?;
    let mut multiplicities = BTreeMap::new();
    for (lambda, m) in dec {
        if !m.is_integer() || m.is_negative() {
            return Err(Error::Invariant(format!("multiplicity {m} of {lambda} is not a natural number")));
        }
        let k = m.to_integer().to_u64().ok_or_else(|| Error::Overflow("multiplicity".into()))?;
        if k > 0 {
            multiplicities.insert(lambda, k);
        }
    }
    let colength = multiplicities.values().sum();
    let check: u64 = multiplicities.iter().map(|(l, k)| k * hook_dimension_u64(l)).sum();
    if check as usize != rref.rank() {
        return Err(Error::Invariant(format!("cocharacter degree {check} differs from c_n = {}", rref.rank())));
    }
    Ok(CocharacterResult { n, multiplicities, codimension: rref.rank(), colength })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentRow {
    pub n: usize,
    pub codimension: usize,
    pub root: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentReport {
    pub rows: Vec<ExponentRow>,
    pub codimensions_nondecreasing: bool,
    pub roots_nondecreasing: bool,
    /// `c_n^{1/n} <= dim A` throughout.
    pub bounded_by_dim: bool,
    pub note: String,
}

/// `(n, c_n, c_n^{1/n})` for `n = 1..=n_max`.
pub fn exponent_diagnostic(a: &FDAlgebra, n_max: usize, opts: CodimOptions) -> Result<ExponentReport> {
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let c = codimension_with(a, n, opts)?;
        rows.push(ExponentRow { n, codimension: c, root: (c as f64).powf(1.0 / n as f64) });
    }
    let codimensions_nondecreasing = rows.windows(2).all(|w| w[0].codimension <= w[1].codimension);
    let roots_nondecreasing = rows.windows(2).all(|w| w[0].root <= w[1].root + 1e-12);
    let bounded_by_dim = rows.iter().all(|r| r.root <= a.dim() as f64 + 1e-9);
    Ok(ExponentReport {
        rows,
        codimensions_nondecreasing,
        roots_nondecreasing,
        bounded_by_dim,
        note: "diagnostic only: c_n^(1/n) converges far beyond the degrees computed here".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{block_triangular, direct_sum, matrix_algebra, nilpotent_free};
    use crate::linalg::{restrict_operator, QMatrix};
    use crate::repsym::hook_dimension_u64;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec())
    }

    #[test]
    fn small_codimensions() {
        let q1 = matrix_algebra(1).unwrap();
        for n in 1..=5 {
            assert_eq!(codimension(&q1, n).unwrap(), 1);
        }
        let nil = nilpotent_free(1, 1).unwrap();
        assert_eq!(codimension(&nil, 1).unwrap(), 1);
        assert_eq!(codimension(&nil, 2).unwrap(), 0);
        let m2 = matrix_algebra(2).unwrap();
        let got: Vec<usize> = (1..=4).map(|n| codimension(&m2, n).unwrap()).collect();
        assert_eq!(got, vec![1, 2, 6, 23]);
        assert!(matches!(codimension(&m2, 8), Err(Error::Overflow(_))));
    }

    #[test]
    fn cocharacters() {
        let m2 = matrix_algebra(2).unwrap();
        let c = cocharacter(&m2, 2).unwrap();
        assert_eq!(c.multiplicity(&p(&[2])), 1);
        assert_eq!(c.multiplicity(&p(&[1, 1])), 1);
        let q1 = matrix_algebra(1).unwrap();
        let c = cocharacter(&q1, 4).unwrap();
        assert_eq!(c.multiplicities, BTreeMap::from([(p(&[4]), 1)]));
        let nil = nilpotent_free(1, 1).unwrap();
        assert!(cocharacter(&nil, 2).unwrap().multiplicities.is_empty());
        let ut = block_triangular(&[1, 1]).unwrap();
        for n in 1..=4 {
            let c = cocharacter(&ut, n).unwrap();
            let s: u64 = c.multiplicities.iter().map(|(l, k)| k * hook_dimension_u64(l)).sum();
            assert_eq!(s as usize, c.codimension);
        }
    }

    #[test]
    fn trace_formula_matches_restricted_operator() {
        let ut = block_triangular(&[1, 1]).unwrap();
        let n = 4;
        let rref = identity_space(&ut, n, CodimOptions::default()).unwrap();
        let basis: Vec<Vec<Q>> = rref.complement_basis().iter().map(|(_, b)| b.to_dense(24)).collect();
        assert_eq!(basis.len(), 24 - 18);
        let tau = with_cycle_type(&[3, 1]);
        let mut op = QMatrix::zeros(24, 24);
        for r in 0..24 {
            let img = perm_rank(&compose(&tau, &unrank(r, n)));
            op.set(img, r, Q::from_integer(1.into()));
        }
        let restricted = restrict_operator(&op, &basis).unwrap();
        let tau_inv = inverse(&tau);
        let direct: Q = rref
            .complement_basis()
            .iter()
            .map(|(f, b)| b.get(perm_rank(&compose(&tau_inv, &unrank(*f, n)))))
            .sum();
        assert_eq!(restricted.trace(), direct);
    }

    #[test]
    fn workers_and_sums() {
        let ut = block_triangular(&[1, 1]).unwrap();
        let m2 = matrix_algebra(2).unwrap();
        let a = identity_space(&m2, 4, CodimOptions::default()).unwrap();
        let b = identity_space(&m2, 4, CodimOptions { workers: 3, ..Default::default() }).unwrap();
        assert_eq!(a, b);
        let sum = direct_sum(&ut, &m2);
        for n in 1..=3 {
            let c = codimension(&sum, n).unwrap();
            assert!(c >= codimension(&ut, n).unwrap().max(codimension(&m2, n).unwrap()));
        }
    }

    #[test]
    fn exponent_rows() {
        let r = exponent_diagnostic(&matrix_algebra(1).unwrap(), 4, CodimOptions::default()).unwrap();
        assert!(r.rows.iter().all(|row| row.root == 1.0));
        let nil = nilpotent_free(1, 1).unwrap();
        let r = exponent_diagnostic(&nil, 3, CodimOptions::default()).unwrap();
        assert_eq!(r.rows.iter().map(|x| x.codimension).collect::<Vec<_>>(), vec![1, 0, 0]);
    }
}
