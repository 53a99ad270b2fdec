//! Vector partition functions: brute-force counting, cocircuits, zonotope
//! volume, big cells (rank at most 3) and per-cell quasi-polynomials.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{determinant, rank, solve, QMatrix};
use crate::poly::{MPoly, Monomial};
use crate::rational::Q;

/// Largest list accepted by subset enumeration.
pub const DEFAULT_MAX_VECTORS: usize = 12;

/// Integer vectors spanning `Q^p` and lying in an open half-space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorList {
    p: usize,
    vectors: Vec<Vec<i64>>,
    functional: Vec<i64>,
}

fn qi(x: i64) -> Q {
    Q::from_integer(BigInt::from(x))
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn rank_of(vs: &[&Vec<i64>], p: usize) -> usize {
    if vs.is_empty() {
        return 0;
    }
    let rows: Vec<&[i64]> = vs.iter().map(|v| v.as_slice()).collect();
    let m = QMatrix::from_rows(p, rows.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect())
        .expect("consistent lengths");
    rank(&m)
}

/// Positive functional by search over small integer vectors.
fn find_functional(p: usize, vectors: &[Vec<i64>]) -> Option<Vec<i64>> {
    let max_k: i64 = match p {
        0..=3 => 12,
        4 => 6,
        _ => 3,
    };
    for k in 1..=max_k {
        // all vectors with max norm exactly k, lexicographic
        let mut cur = vec![-k; p];
        loop {
            if cur.iter().any(|x| x.abs() == k) && vectors.iter().all(|a| dot(a, &cur) > 0) {
                return Some(cur);
            }
            let mut i = p;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if cur[i] < k {
                    cur[i] += 1;
                    for c in cur.iter_mut().skip(i + 1) {
                        *c = -k;
                    }
                    break;
                }
                if i == 0 {
                    i = usize::MAX;
                    break;
                }
            }
            if i == usize::MAX || p == 0 {
                break;
            }
        }
    }
    None
}

impl VectorList {
    pub fn new(p: usize, vectors: Vec<Vec<i64>>) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidParams("ambient rank must be positive".into()));
        }
        if let Some(v) = vectors.iter().find(|v| v.len() != p) {
            return Err(Error::DimensionMismatch { expected: p, got: v.len() });
        }
        let r = rank_of(&vectors.iter().collect::<Vec<_>>(), p);
        if r < p {
            return Err(Error::NotSpanning { rank: r, p });
        }
        let functional = find_functional(p, &vectors).ok_or(Error::NotPointed)?;
        Ok(VectorList { p, vectors, functional })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn vectors(&self) -> &[Vec<i64>] {
        &self.vectors
    }

    /// An integer functional positive on every vector.
    pub fn functional(&self) -> &[i64] {
        &self.functional
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({"p": self.p, "vectors": self.vectors})
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let bad = || Error::Parse("expected {\"p\": int, \"vectors\": [[ints]]}".into());
        let p = v.get("p").and_then(|x| x.as_u64()).ok_or_else(bad)? as usize;
        let vs = v.get("vectors").and_then(|x| x.as_array()).ok_or_else(bad)?;
        let vectors = vs
            .iter()
            .map(|row| row.as_array().and_then(|r| r.iter().map(|x| x.as_i64()).collect::<Option<Vec<_>>>()))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(bad)?;
        Self::new(p, vectors)
    }
}

/// Number of ways to write `b` as a nonnegative integer combination of `S`.
pub fn count_bruteforce(s: &VectorList, b: &[i64]) -> Result<u128> {
    if b.len() != s.p {
        return Err(Error::DimensionMismatch { expected: s.p, got: b.len() });
    }
    let solver = BasisSolver::new(s);
    let free: Vec<&Vec<i64>> = (0..s.vectors.len()).filter(|i| !solver.basis.contains(i)).map(|i| &s.vectors[i]).collect();
    let mut total = 0u128;
    count_rec(s, &solver, &free, b.to_vec(), &mut total)?;
    Ok(total)
}

/// Cramer solver for a basis chosen among the vectors.
struct BasisSolver {
    basis: Vec<usize>,
    adj: Vec<Vec<i128>>,
    det: i128,
}

impl BasisSolver {
    fn new(s: &VectorList) -> Self {
        let mut basis: Vec<usize> = Vec::new();
        for i in 0..s.vectors.len() {
            let mut trial: Vec<&Vec<i64>> = basis.iter().map(|&k| &s.vectors[k]).collect();
            trial.push(&s.vectors[i]);
            if rank_of(&trial, s.p) == trial.len() {
                basis.push(i);
            }
        }
        let p = s.p;
        // columns are the basis vectors
        let col = |r: usize, c: usize| s.vectors[basis[c]][r];
        let minor = |skip_r: usize, skip_c: usize| {
            let rows = (0..p)
                .filter(|&r| r != skip_r)
                .map(|r| (0..p).filter(|&c| c != skip_c).map(|c| qi(col(r, c))).collect())
                .collect();
            let d = determinant(&QMatrix::from_rows(p - 1, rows).expect("square")).expect("square");
            d.to_integer().to_i128().expect("small minor")
        };
        let full = QMatrix::from_rows(p, (0..p).map(|r| (0..p).map(|c| qi(col(r, c))).collect()).collect()).expect("square");
        let det = determinant(&full).expect("square").to_integer().to_i128().expect("small determinant");
        let adj = (0..p)
            .map(|i| {
                (0..p)
                    .map(|j| {
                        if p == 1 {
                            1
                        } else {
                            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                            sign * minor(j, i)
                        }
                    })
                    .collect()
            })
            .collect();
        BasisSolver { basis, adj, det }
    }

    /// Whether `r` is a nonnegative integer combination of the basis.
    fn representable(&self, r: &[i64]) -> bool {
        self.adj.iter().all(|row| {
            let x: i128 = row.iter().zip(r).map(|(a, &b)| a * b as i128).sum();
            x % self.det == 0 && x / self.det >= 0
        })
    }
}

fn count_rec(s: &VectorList, solver: &BasisSolver, free: &[&Vec<i64>], b: Vec<i64>, total: &mut u128) -> Result<()> {
    let f = &s.functional;
    let Some((a, rest)) = free.split_first() else {
        if solver.representable(&b) {
            *total = total.checked_add(1).ok_or_else(|| Error::Overflow("partition count".into()))?;
        }
        return Ok(());
    };
    let mut cur = b;
    while dot(&cur, f) >= 0 {
        count_rec(s, solver, rest, cur.clone(), total)?;
        for (c, x) in cur.iter_mut().zip(a.iter()) {
            *c -= x;
        }
    }
    Ok(())
}

/// Coefficients of `prod_i 1/(1 - x^{a_i})` on the box `0..=bound` (for
/// lists in the nonnegative orthant).
pub fn generating_box(s: &VectorList, bound: &[i64]) -> Result<BTreeMap<Vec<i64>, u128>> {
    if s.vectors.iter().flatten().any(|&x| x < 0) {
        return Err(Error::InvalidParams("generating box needs nonnegative vectors".into()));
    }
    let mut pts = vec![Vec::new()];
    for &b in bound {
        pts = pts.into_iter().flat_map(|p: Vec<i64>| (0..=b).map(move |i| [p.clone(), vec![i]].concat())).collect();
    }
    let mut c: BTreeMap<Vec<i64>, u128> = pts.iter().map(|p| (p.clone(), 0)).collect();
    c.insert(vec![0; s.p], 1);
    for a in &s.vectors {
        // pts are in lexicographic order, so p - a precedes p
        for p in &pts {
            let prev: Vec<i64> = p.iter().zip(a).map(|(x, y)| x - y).collect();
            if prev.iter().all(|&x| x >= 0) {
                let v = c[&prev];
                *c.get_mut(p).expect("box point") += v;
            }
        }
    }
    Ok(c)
}

fn subsets_by_size(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, k, &mut Vec::new(), &mut out);
    out
}

/// Minimal index sets `Y` whose complement does not span.
pub fn cocircuits(s: &VectorList) -> Result<Vec<Vec<usize>>> {
    let m = s.vectors.len();
    if m > DEFAULT_MAX_VECTORS {
        return Err(Error::Overflow(format!("{m} vectors exceed the bound {DEFAULT_MAX_VECTORS}")));
    }
    let spans_without = |y: &[usize]| {
        let rest: Vec<&Vec<i64>> = (0..m).filter(|i| !y.contains(i)).map(|i| &s.vectors[i]).collect();
        rank_of(&rest, s.p) == s.p
    };
    let mut out: Vec<Vec<usize>> = Vec::new();
    for k in 1..=m {
        for y in subsets_by_size(m, k) {
            if out.iter().any(|c| c.iter().all(|i| y.contains(i))) {
                continue;
            }
            if !spans_without(&y) {
                out.push(y);
            }
        }
    }
    Ok(out)
}

fn det_of(s: &VectorList, idx: &[usize]) -> BigInt {
    let rows = idx.iter().map(|&i| s.vectors[i].iter().map(|&x| qi(x)).collect()).collect();
    let m = QMatrix::from_rows(s.p, rows).expect("square");
    determinant(&m).expect("square").to_integer()
}

/// Sum of `|det|` over the bases contained in `S`.
pub fn zonotope_volume(s: &VectorList) -> Result<BigInt> {
    if s.vectors.len() > 2 * DEFAULT_MAX_VECTORS {
        return Err(Error::Overflow("too many vectors".into()));
    }
    Ok(subsets_by_size(s.vectors.len(), s.p).iter().map(|b| det_of(s, b).abs()).sum())
}

/// Dimension of the Dahmen–Micchelli space, equal to the zonotope volume.
pub fn dm_dimension(s: &VectorList) -> Result<BigInt> {
    zonotope_volume(s)
}

/// Least common multiple of the nonzero basis determinants.
pub fn lattice_modulus(s: &VectorList) -> i64 {
    subsets_by_size(s.vectors.len(), s.p)
        .iter()
        .map(|b| det_of(s, b).abs())
        .filter(|d| !d.is_zero())
        .fold(BigInt::one(), |a, d| a.lcm(&d))
        .to_i64()
        .expect("small modulus")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigCell {
    pub representative: Vec<Q>,
    /// Side of each wall, `+1` or `-1`.
    pub signs: Vec<i8>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellDecomposition {
    pub p: usize,
    /// Primitive normals of the hyperplanes spanned by non-spanning subsets.
    pub walls: Vec<Vec<i64>>,
    pub cells: Vec<BigCell>,
}

fn sign_q(x: &Q) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

fn dot_q(n: &[i64], x: &[Q]) -> Q {
    n.iter().zip(x).map(|(a, b)| qi(*a) * b).sum()
}

impl CellDecomposition {
    /// Index of the big cell containing `b`, if `b` is a regular point.
    pub fn locate(&self, b: &[Q]) -> Option<usize> {
        let signs: Vec<i8> = self.walls.iter().map(|n| sign_q(&dot_q(n, b))).collect();
        self.cells.iter().position(|c| c.signs == signs)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let cells: Vec<serde_json::Value> = self
            .cells
            .iter()
            .map(|c| {
                serde_json::json!({
                    "representative": c.representative.iter().map(crate::rational::format_q).collect::<Vec<_>>(),
                    "signs": c.signs,
                })
            })
            .collect();
        serde_json::json!({"p": self.p, "walls": self.walls, "cells": cells})
    }
}

fn primitive(mut v: Vec<i64>) -> Option<Vec<i64>> {
    let g = v.iter().fold(0i64, |g, &x| g.gcd(&x));
    if g == 0 {
        return None;
    }
    for x in &mut v {
        *x /= g;
    }
    if v.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
        for x in &mut v {
            *x = -*x;
        }
    }
    Some(v)
}

fn cross(a: &[i64], b: &[i64]) -> Vec<i64> {
    vec![a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn walls_of(s: &VectorList) -> Vec<Vec<i64>> {
    let mut set = BTreeSet::new();
    match s.p {
        2 => {
            for a in &s.vectors {
                if let Some(n) = primitive(vec![-a[1], a[0]]) {
                    set.insert(n);
                }
            }
        }
        3 => {
            for (i, a) in s.vectors.iter().enumerate() {
                for b in &s.vectors[i + 1..] {
                    if let Some(n) = primitive(cross(a, b)) {
                        set.insert(n);
                    }
                }
            }
        }
        _ => {}
    }
    set.into_iter().collect()
}

/// Big cells of the cone `C(S)` for `p <= 3`, ordered by sign vector.
pub fn big_cells(s: &VectorList) -> Result<CellDecomposition> {
    if s.p > 3 {
        return Err(Error::Overflow(format!("cell enumeration supports p <= 3, got {}", s.p)));
    }
    if s.vectors.len() > DEFAULT_MAX_VECTORS {
        return Err(Error::Overflow(format!("{} vectors exceed the bound", s.vectors.len())));
    }
    let walls = walls_of(s);
    let signs_of = |x: &[Q]| walls.iter().map(|n| sign_q(&dot_q(n, x))).collect::<Vec<i8>>();
    // cone facets: walls with every vector on one side
    let facets: Vec<(usize, i8)> = walls
        .iter()
        .enumerate()
        .filter_map(|(k, n)| {
            let ds: Vec<i64> = s.vectors.iter().map(|a| dot(n, a)).collect();
            if ds.iter().all(|&d| d >= 0) {
                Some((k, 1))
            } else if ds.iter().all(|&d| d <= 0) {
                Some((k, -1))
            } else {
                None
            }
        })
        .collect();
    let mut candidates: Vec<Vec<Q>> = Vec::new();
    match s.p {
        1 => candidates.push(vec![qi(s.functional[0].signum())]),
        2 => {
            let mut rays: Vec<Vec<i64>> = s
                .vectors
                .iter()
                .filter_map(|a| primitive(a.clone()).map(|p| if dot(&p, &s.functional) < 0 { p.iter().map(|x| -x).collect() } else { p }))
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            rays.sort_by(|a, b| {
                let c = a[0] * b[1] - a[1] * b[0];
                0.cmp(&c)
            });
            for w in rays.windows(2) {
                candidates.push(vec![qi(w[0][0] + w[1][0]), qi(w[0][1] + w[1][1])]);
            }
        }
        _ => {
            let f = &s.functional;
            for (i, n1) in walls.iter().enumerate() {
                for n2 in &walls[i + 1..] {
                    let Some(mut v) = primitive(cross(n1, n2)) else { continue };
                    let fv = dot(f, &v);
                    if fv == 0 {
                        continue;
                    }
                    if fv < 0 {
                        v.iter_mut().for_each(|x| *x = -*x);
                    }
                    let vq: Vec<Q> = v.iter().map(|&x| qi(x)).collect();
                    // closed cone
                    if facets.iter().any(|&(k, side)| sign_q(&dot_q(&walls[k], &vq)) == -side) {
                        continue;
                    }
                    let through: Vec<&Vec<i64>> = walls.iter().filter(|n| dot(n, &v) == 0).collect();
                    let mut dirs: Vec<Vec<i64>> = Vec::new();
                    for n in through {
                        let d = cross(n, f);
                        dirs.push(d.clone());
                        dirs.push(d.iter().map(|x| -x).collect());
                    }
                    let e1: Vec<f64> = dirs[0].iter().map(|&x| x as f64).collect();
                    let e2 = {
                        let c = cross(f, &dirs[0]);
                        c.iter().map(|&x| x as f64).collect::<Vec<f64>>()
                    };
                    let ang = |d: &Vec<i64>| {
                        let x: f64 = d.iter().zip(&e1).map(|(a, b)| *a as f64 * b).sum();
                        let y: f64 = d.iter().zip(&e2).map(|(a, b)| *a as f64 * b).sum();
                        y.atan2(x)
                    };
                    dirs.sort_by(|a, b| ang(a).partial_cmp(&ang(b)).expect("finite angles"));
                    for k in 0..dirs.len() {
                        let a = &dirs[k];
                        let b = &dirs[(k + 1) % dirs.len()];
                        let u: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                        if u.iter().all(|&x| x == 0) {
                            continue;
                        }
                        let uq: Vec<Q> = u.iter().map(|&x| qi(x)).collect();
                        // step small enough to cross no wall missing v
                        let mut eps = Q::one();
                        for n in &walls {
                            let nv = dot_q(n, &vq);
                            let nu = dot_q(n, &uq);
                            if !nv.is_zero() && !nu.is_zero() {
                                let lim = (nv / nu).abs() / qi(2);
                                if lim < eps {
                                    eps = lim;
                                }
                            }
                        }
                        candidates.push(vq.iter().zip(&uq).map(|(a, b)| a + &eps * b).collect());
                    }
                }
            }
        }
    }
    let mut cells: BTreeMap<Vec<i8>, Vec<Q>> = BTreeMap::new();
    for c in candidates {
        let sg = signs_of(&c);
        if sg.contains(&0) {
            continue;
        }
        if facets.iter().any(|&(k, side)| sg[k] != side) {
            continue;
        }
        cells.entry(sg).or_insert(c);
    }
    if cells.is_empty() {
        return Err(Error::DegenerateCone("no open cell found".into()));
    }
    let cells = cells.into_iter().map(|(signs, representative)| BigCell { representative, signs }).collect();
    Ok(CellDecomposition { p: s.p, walls, cells })
}

/// `value(b) = pieces[b mod modulus](b)` on the closure of a big cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellQuasiPolynomial {
    pub p: usize,
    pub modulus: i64,
    pub degree_bound: usize,
    /// Residues in `[0, modulus)^p`, polynomials in variables `0..p`.
    pub pieces: BTreeMap<Vec<i64>, MPoly>,
}

impl CellQuasiPolynomial {
    pub fn value(&self, b: &[i64]) -> Q {
        let r: Vec<i64> = b.iter().map(|x| x.rem_euclid(self.modulus)).collect();
        let pt: Vec<Q> = b.iter().map(|&x| qi(x)).collect();
        self.pieces.get(&r).map(|f| f.eval(&pt)).unwrap_or_else(Q::zero)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let pieces: Vec<serde_json::Value> = self
            .pieces
            .iter()
            .map(|(r, f)| serde_json::json!({"residue": r, "polynomial": f.to_string()}))
            .collect();
        serde_json::json!({"p": self.p, "modulus": self.modulus, "degree_bound": self.degree_bound, "pieces": pieces})
    }
}

fn exponent_vectors(p: usize, d: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..p {
        out = out
            .into_iter()
            .flat_map(|e: Vec<u32>| {
                let used: u32 = e.iter().sum();
                (0..=(d as u32 - used)).map(move |k| [e.clone(), vec![k]].concat())
            })
            .collect();
    }
    out
}

/// Scale factor putting `lambda * rep` at the given depth beyond every wall.
fn depth_scale(s: &VectorList, dec: &CellDecomposition, cell: usize, extent: i64) -> i64 {
    let c = &dec.cells[cell];
    let mut lambda = 1i64;
    for (n, &side) in dec.walls.iter().zip(&c.signs) {
        let width: i64 = s.vectors.iter().map(|a| dot(n, a).abs()).sum();
        let nrm: i64 = n.iter().map(|x| x.abs()).sum();
        let margin = width + nrm * (extent + 2);
        let along = dot_q(n, &c.representative) * qi(side as i64);
        let need = (qi(margin) / along).ceil().to_integer().to_i64().expect("small scale");
        lambda = lambda.max(need + 1);
    }
    lambda
}

fn lattice_point(rep: &[Q], lambda: i64) -> Vec<i64> {
    rep.iter().map(|x| (x * qi(lambda)).ceil().to_integer().to_i64().expect("small point")).collect()
}

/// Lattice points deep inside a big cell: beyond every wall by more than
/// the width of the zonotope.
pub fn deep_points(s: &VectorList, dec: &CellDecomposition, cell: usize, count: usize, seed: u64) -> Vec<Vec<i64>> {
    let spread = 2 * lattice_modulus(s).max(1) * (s.vectors.len() as i64);
    let lambda = depth_scale(s, dec, cell, spread);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let base = lattice_point(&dec.cells[cell].representative, lambda * rng.gen_range(1..=2));
            base.iter().map(|x| x + rng.gen_range(0..=spread)).collect()
        })
        .collect()
}

/// Interpolates the quasi-polynomial of `P_S` on a big cell from brute-force
/// counts on product grids, one grid per residue class, then checks it on
/// held-out deep points.
pub fn cell_quasipolynomial(s: &VectorList, dec: &CellDecomposition, cell: usize) -> Result<CellQuasiPolynomial> {
    if cell >= dec.cells.len() {
        return Err(Error::InvalidParams(format!("no big cell {cell}")));
    }
    let p = s.p;
    let d = s.vectors.len() - p;
    let m = lattice_modulus(s);
    let monos = exponent_vectors(p, d);
    let mut last_err = None;
    for attempt in 0..3i64 {
        let extent = m * (d as i64 + 1);
        let lambda = depth_scale(s, dec, cell, extent) * (1 << attempt);
        let base = lattice_point(&dec.cells[cell].representative, lambda);
        let mut pieces = BTreeMap::new();
        let mut ok = true;
        let mut residues = vec![Vec::new()];
        for _ in 0..p {
            residues = residues.into_iter().flat_map(|r: Vec<i64>| (0..m).map(move |i| [r.clone(), vec![i]].concat())).collect();
        }
        for r in residues {
            let start: Vec<i64> = base.iter().zip(&r).map(|(b, ri)| b + (ri - b).rem_euclid(m)).collect();
            let mut grid = vec![start.clone()];
            for j in 0..p {
                grid = grid
                    .into_iter()
                    .flat_map(|g: Vec<i64>| {
                        (0..=d as i64).map(move |k| {
                            let mut h = g.clone();
                            h[j] += m * k;
                            h
                        })
                    })
                    .collect();
            }
            let mut rows = Vec::new();
            let mut rhs = Vec::new();
            for g in &grid {
                rows.push(
                    monos
                        .iter()
                        .map(|e| e.iter().zip(g).fold(Q::one(), |acc, (&k, &x)| acc * qi(x).pow(k as i32)))
                        .collect(),
                );
                rhs.push(Q::from_integer(BigInt::from(count_bruteforce(s, g)?)));
            }
            let mat = QMatrix::from_rows(monos.len(), rows)?;
            match solve(&mat, &rhs)? {
                Some(coef) => {
                    let f = MPoly::from_terms(
                        monos.iter().zip(coef).map(|(e, c)| (Monomial::from_exponents(e), c)),
                    );
                    pieces.insert(r, f);
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            last_err = Some(Error::ValidationFailed("grid counts fit no polynomial of the expected degree".into()));
            continue;
        }
        let qp = CellQuasiPolynomial { p, modulus: m, degree_bound: d, pieces };
        let held = deep_points(s, dec, cell, 8, 0x7e57 + attempt as u64);
        let mut good = true;
        for b in &held {
            if qp.value(b) != Q::from_integer(BigInt::from(count_bruteforce(s, b)?)) {
                good = false;
                break;
            }
        }
        if good {
            return Ok(qp);
        }
        last_err = Some(Error::ValidationFailed("held-out counts disagree".into()));
    }
    Err(last_err.expect("at least one attempt"))
}

/// Checks `prod_{a in Y} nabla_a q = 0` for every cocircuit `Y` at random
/// points of `[-range, range]^p`, with `nabla_a f(x) = f(x) - f(x - a)`.
pub fn check_nabla(s: &VectorList, qp: &CellQuasiPolynomial, points: usize, range: i64, seed: u64) -> Result<bool> {
    let cocs = cocircuits(s)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..points {
        let x: Vec<i64> = (0..s.p).map(|_| rng.gen_range(-range..=range)).collect();
        for y in &cocs {
            let mut acc = Q::zero();
            for mask in 0u32..1 << y.len() {
                let mut pt = x.clone();
                for (k, &i) in y.iter().enumerate() {
                    if mask >> k & 1 == 1 {
                        for (c, a) in pt.iter_mut().zip(&s.vectors[i]) {
                            *c -= a;
                        }
                    }
                }
                let v = qp.value(&pt);
                if mask.count_ones() % 2 == 0 {
                    acc += v;
                } else {
                    acc -= v;
                }
            }
            if !acc.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vl(p: usize, v: &[&[i64]]) -> VectorList {
        VectorList::new(p, v.iter().map(|x| x.to_vec()).collect()).unwrap()
    }

    #[test]
    fn counting() {
        assert_eq!(count_bruteforce(&vl(1, &[&[1]]), &[3]).unwrap(), 1);
        assert_eq!(count_bruteforce(&vl(1, &[&[1], &[1]]), &[3]).unwrap(), 4);
        let s = vl(2, &[&[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(count_bruteforce(&s, &[2, 1]).unwrap(), 2);
        assert_eq!(count_bruteforce(&s, &[-1, 1]).unwrap(), 0);
        let gb = generating_box(&s, &[3, 3]).unwrap();
        for (b, c) in gb {
            assert_eq!(count_bruteforce(&s, &b).unwrap(), c);
        }
    }

    #[test]
    fn validation() {
        assert!(matches!(VectorList::new(2, vec![vec![1, 0], vec![2, 0]]), Err(Error::NotSpanning { rank: 1, p: 2 })));
        assert!(matches!(VectorList::new(1, vec![vec![1], vec![-1]]), Err(Error::NotPointed)));
        let s = vl(2, &[&[1, -1], &[1, 1]]);
        assert!(s.vectors().iter().all(|a| dot(a, s.functional()) > 0));
    }

    #[test]
    fn cocircuits_and_volume() {
        let s = vl(2, &[&[1, 0], &[0, 1]]);
        assert_eq!(cocircuits(&s).unwrap(), vec![vec![0], vec![1]]);
        let s = vl(2, &[&[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(cocircuits(&s).unwrap(), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(zonotope_volume(&s).unwrap(), BigInt::from(3));
        let s = vl(2, &[&[1, 0], &[1, 0], &[0, 1]]);
        assert_eq!(cocircuits(&s).unwrap(), vec![vec![2], vec![0, 1]]);
        assert_eq!(zonotope_volume(&vl(1, &[&[2]])).unwrap(), BigInt::from(2));
        assert_eq!(dm_dimension(&vl(1, &[&[1], &[1]])).unwrap(), BigInt::from(2));
    }

    #[test]
    fn cells() {
        assert_eq!(big_cells(&vl(2, &[&[1, 0], &[0, 1]])).unwrap().cells.len(), 1);
        assert_eq!(big_cells(&vl(2, &[&[1, 0], &[0, 1], &[1, 1]])).unwrap().cells.len(), 2);
        assert_eq!(big_cells(&vl(1, &[&[1], &[1]])).unwrap().cells.len(), 1);
        assert_eq!(big_cells(&vl(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap().cells.len(), 1);
        let s = vl(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1]]);
        assert_eq!(big_cells(&s).unwrap().cells.len(), 6);
        let s = vl(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 0]]);
        assert_eq!(big_cells(&s).unwrap().cells.len(), 2);
    }

    #[test]
    fn quasipolynomials() {
        let s = vl(1, &[&[1], &[1]]);
        let dec = big_cells(&s).unwrap();
        let qp = cell_quasipolynomial(&s, &dec, 0).unwrap();
        for b in 0..10 {
            assert_eq!(qp.value(&[b]), qi(b + 1));
        }
        let s = vl(1, &[&[2], &[2]]);
        let dec = big_cells(&s).unwrap();
        let qp = cell_quasipolynomial(&s, &dec, 0).unwrap();
        assert_eq!(qp.modulus, 2);
        assert_eq!(qp.value(&[7]), qi(0));
        assert_eq!(qp.value(&[8]), qi(5));
        let s = vl(2, &[&[1, 0], &[0, 1], &[1, 1]]);
        let dec = big_cells(&s).unwrap();
        let k = dec.locate(&[qi(2), qi(1)]).unwrap();
        let qp = cell_quasipolynomial(&s, &dec, k).unwrap();
        assert_eq!(qp.value(&[5, 3]), qi(4));
        for c in 0..dec.cells.len() {
            let qp = cell_quasipolynomial(&s, &dec, c).unwrap();
            assert!(check_nabla(&s, &qp, 10, 20, 1).unwrap());
        }
    }
}
