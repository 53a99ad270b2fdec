//! Radical, Wedderburn blocks and the t,s-index.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{to_dense, FDAlgebra, Terms};
use crate::error::{Error, Result};
use crate::linalg::{inverse, nullspace, restrict_operator, solve, Echelon, QMatrix, QVector, SparseVec};
use crate::rational::{q, to_json, Q};
use crate::upoly::{char_poly, UPoly};

const SEED: u64 = 0x5eed_a1b0;
const CENTER_RETRIES: usize = 32;
const SPLIT_CANDIDATES: usize = 400;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureReport {
    pub dim: usize,
    pub radical_basis: Vec<QVector>,
    pub block_sizes: Vec<usize>,
    pub t: usize,
    pub s: usize,
    pub q: usize,
}

impl StructureReport {
    pub fn to_json(&self) -> serde_json::Value {
        let rad: Vec<serde_json::Value> =
            self.radical_basis.iter().map(|v| v.iter().map(to_json).collect()).collect();
        serde_json::json!({
            "dim": self.dim,
            "radical_dim": self.radical_basis.len(),
            "radical_basis": rad,
            "blocks": self.block_sizes,
            "t": self.t,
            "s": self.s,
            "q": self.q,
        })
    }
}

/// One simple summand `M_n(Q)` of the semisimple quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub size: usize,
    /// Primitive central idempotent, in quotient coordinates.
    pub idempotent: QVector,
    /// A preimage of the idempotent in `A`.
    pub lift: QVector,
    /// Basis of the summand, in quotient coordinates.
    pub basis: Vec<QVector>,
    /// Trace of left multiplication by the image of `b_k` on this summand,
    /// for every basis element `b_k` of `A`.
    pub traces: Vec<Q>,
}

/// The quotient `A/J`, presented on the span of a set of basis elements
/// complementary to `J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Semisimple {
    pub complement: Vec<usize>,
    proj: QMatrix,
    table: Vec<Vec<QVector>>,
    pub unit: QVector,
    pub blocks: Vec<Block>,
}

impl Semisimple {
    pub fn t(&self) -> usize {
        self.complement.len()
    }

    /// Quotient coordinates of `x in A`.
    pub fn project(&self, x: &[Q]) -> QVector {
        self.proj.mul_vec(x).expect("dimension checked by caller")
    }

    pub fn mul(&self, x: &[Q], y: &[Q]) -> QVector {
        let t = self.t();
        let mut out = vec![Q::zero(); t];
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                let f = xa * yb;
                for (k, c) in self.table[a][b].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] += &f * c;
                    }
                }
            }
        }
        out
    }

    pub fn left_mult_matrix(&self, x: &[Q]) -> QMatrix {
        let t = self.t();
        let mut m = QMatrix::zeros(t, t);
        for b in 0..t {
            let mut e = vec![Q::zero(); t];
            e[b] = Q::one();
            for (k, v) in self.mul(x, &e).into_iter().enumerate() {
                m.set(k, b, v);
            }
        }
        m
    }
}

fn sparse_rows(e: Echelon) -> Vec<Terms> {
    e.into_rref().rows.into_iter().map(|r| r.entries().to_vec()).collect()
}

impl FDAlgebra {
    /// Basis of the Jacobson radical: the kernel of `(x, y) -> tr L_{xy}` on
    /// the unitalization.
    pub fn radical(&self) -> &[QVector] {
        self.radical.get_or_init(|| {
            let d = self.dim;
            let tau: Vec<Q> = (0..d)
                .map(|k| (0..d).map(|l| self.structure_constant(k, l, l)).fold(Q::zero(), |a, b| a + b))
                .collect();
            let mut g = QMatrix::zeros(d + 1, d + 1);
            for i in 0..d {
                for j in 0..d {
                    let v = self.table[i][j].iter().fold(Q::zero(), |acc, (k, c)| acc + c * &tau[*k]);
                    g.set(i, j, v);
                }
                g.set(i, d, tau[i].clone());
                g.set(d, i, tau[i].clone());
            }
            g.set(d, d, q(d as i64 + 1));
            nullspace(&g)
                .into_iter()
                .map(|mut v| {
                    debug_assert!(v[d].is_zero());
                    v.truncate(d);
                    v
                })
                .collect()
        })
    }

    /// `(t, s)`: the dimension of `A/J` and the largest `s` with `J^s != 0`.
    pub fn ts_index(&self) -> (usize, usize) {
        *self.ts.get_or_init(|| (self.dim - self.radical().len(), self.radical_power_dims().len()))
    }

    /// Dimensions of `J, J^2, ...` up to the first zero power (excluded).
    pub fn radical_power_dims(&self) -> Vec<usize> {
        let rad: Vec<Terms> = self.radical().iter().map(|v| super::to_terms(v)).collect();
        let mut dims = Vec::new();
        let mut cur = rad.clone();
        while !cur.is_empty() {
            dims.push(cur.len());
            let mut next = Echelon::new(self.dim);
            for u in &cur {
                for r in &rad {
                    next.insert(SparseVec::from_pairs(self.mul_terms(u, r)));
                }
            }
            cur = sparse_rows(next);
        }
        dims
    }

    pub fn semisimple(&self) -> Result<&Semisimple> {
        self.semisimple.get_or_init(|| self.compute_semisimple()).as_ref().map_err(Clone::clone)
    }

    /// Sizes `n_i` with `A/J = M_{n_1} x ... x M_{n_q}`, ordered by the first
    /// basis element each summand touches.
    pub fn wedderburn_blocks(&self) -> Result<Vec<usize>> {
        Ok(self.semisimple()?.blocks.iter().map(|b| b.size).collect())
    }

    pub fn structure_report(&self) -> Result<StructureReport> {
        let blocks = self.wedderburn_blocks()?;
        let (t, s) = self.ts_index();
        Ok(StructureReport {
            dim: self.dim,
            radical_basis: self.radical().to_vec(),
            q: blocks.len(),
            block_sizes: blocks,
            t,
            s,
        })
    }

    /// `(t_1(x), ..., t_q(x))`: traces of left multiplication by the image of
    /// `x` on each simple summand.
    pub fn trace_tuple(&self, x: &[Q]) -> Result<Vec<Q>> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        let ss = self.semisimple()?;
        Ok(ss
            .blocks
            .iter()
            .map(|b| x.iter().zip(&b.traces).fold(Q::zero(), |acc, (a, c)| acc + a * c))
            .collect())
    }

    fn compute_semisimple(&self) -> Result<Semisimple> {
        let d = self.dim;
        let rad = self.radical();
        let mut ech = Echelon::new(d);
        for v in rad {
            ech.insert_dense(v);
        }
        let mut complement = Vec::new();
        for i in 0..d {
            if ech.insert(SparseVec::from_pairs([(i, Q::one())])) {
                complement.push(i);
            }
        }
        let t = complement.len();
        let mut cols: Vec<QVector> = complement.iter().map(|&c| self.basis_vector(c)).collect();
        cols.extend(rad.iter().cloned());
        let change = QMatrix::from_columns(d, &cols)?;
        let inv = inverse(&change)?.ok_or_else(|| Error::Invariant("radical complement is singular".into()))?;
        let proj = QMatrix::from_rows(d, (0..t).map(|i| inv.row(i).to_vec()).collect())?;
        let table: Vec<Vec<QVector>> = complement
            .iter()
            .map(|&a| {
                complement
                    .iter()
                    .map(|&b| proj.mul_vec(&to_dense(self.product(a, b), d)).expect("sizes agree"))
                    .collect()
            })
            .collect();
        let mut ss = Semisimple { complement, proj, table, unit: Vec::new(), blocks: Vec::new() };
        if t == 0 {
            return Ok(ss);
        }
        ss.unit = quotient_unit(&ss)?;
        let center = quotient_center(&ss)?;
        let idems = central_idempotents(&ss, &center)?;
        let tau_bar: Vec<Q> =
            (0..t).map(|b| (0..t).map(|a| ss.table[b][a][a].clone()).fold(Q::zero(), |x, y| x + y)).collect();
        let mut blocks = Vec::new();
        for e in idems {
            let mut span = Echelon::new(t);
            let mut first = None;
            for b in 0..t {
                let mut eb = vec![Q::zero(); t];
                eb[b] = Q::one();
                let v = ss.mul(&e, &eb);
                if first.is_none() && v.iter().any(|x| !x.is_zero()) {
                    first = Some(b);
                }
                span.insert_dense(&v);
            }
            let dimb = span.rank();
            let n = (dimb as f64).sqrt().round() as usize;
            if n * n != dimb {
                return Err(Error::NotSplit(format!("simple summand of dimension {dimb} is not a full matrix algebra")));
            }
            if n >= 2 && !splits(&ss, &e, n) {
                return Err(Error::NotSplit(format!("no full set of rational matrix units found in a summand of dimension {dimb}")));
            }
            let basis: Vec<QVector> = sparse_rows(span).iter().map(|r| to_dense(r, t)).collect();
            let traces: Vec<Q> = (0..d)
                .map(|k| {
                    let pk = ss.project(&self.basis_vector(k));
                    let y = ss.mul(&e, &pk);
                    y.iter().zip(&tau_bar).fold(Q::zero(), |acc, (a, c)| acc + a * c)
                })
                .collect();
            let mut lift = vec![Q::zero(); d];
            for (a, &c) in ss.complement.iter().enumerate() {
                lift[c] = e[a].clone();
            }
            blocks.push((first.unwrap_or(t), Block { size: n, idempotent: e, lift, basis, traces }));
        }
        blocks.sort_by_key(|(f, _)| *f);
        ss.blocks = blocks.into_iter().map(|(_, b)| b).collect();
        Ok(ss)
    }
}

fn quotient_unit(ss: &Semisimple) -> Result<QVector> {
    let t = ss.t();
    let mut m = QMatrix::zeros(2 * t * t, t);
    let mut rhs = vec![Q::zero(); 2 * t * t];
    for b in 0..t {
        for k in 0..t {
            let r = b * t + k;
            for a in 0..t {
                m.set(r, a, ss.table[a][b][k].clone());
                m.set(t * t + r, a, ss.table[b][a][k].clone());
            }
            if b == k {
                rhs[r] = Q::one();
                rhs[t * t + r] = Q::one();
            }
        }
    }
    solve(&m, &rhs)?.ok_or_else(|| Error::Invariant("semisimple quotient has no unit".into()))
}

fn quotient_center(ss: &Semisimple) -> Result<Vec<QVector>> {
    let t = ss.t();
    let mut m = QMatrix::zeros(t * t, t);
    for b in 0..t {
        for k in 0..t {
            for a in 0..t {
                m.set(b * t + k, a, &ss.table[a][b][k] - &ss.table[b][a][k]);
            }
        }
    }
    Ok(nullspace(&m))
}

fn central_idempotents(ss: &Semisimple, center: &[QVector]) -> Result<Vec<QVector>> {
    let qn = center.len();
    if qn == 1 {
        return Ok(vec![ss.unit.clone()]);
    }
    let t = ss.t();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for attempt in 0..CENTER_RETRIES {
        let range = 3 + attempt as i64;
        let mut z = vec![Q::zero(); t];
        for c in center {
            let r = q(rng.gen_range(-range..=range));
            for (zi, ci) in z.iter_mut().zip(c) {
                *zi += &r * ci;
            }
        }
        let lz = restrict_operator(&ss.left_mult_matrix(&z), center)?;
        let Some(roots) = char_poly(&lz).rational_roots() else {
            continue;
        };
        if roots.iter().map(|r| r.1).sum::<usize>() < qn {
            return Err(Error::NotSplit("center of the semisimple quotient is not a product of copies of Q".into()));
        }
        if roots.len() < qn {
            continue;
        }
        let lams: Vec<Q> = roots.into_iter().map(|r| r.0).collect();
        let mut out = Vec::with_capacity(qn);
        for (i, li) in lams.iter().enumerate() {
            let mut e = ss.unit.clone();
            for (j, lj) in lams.iter().enumerate() {
                if i == j {
                    continue;
                }
                let inv = (li - lj).recip();
                let factor: QVector = z.iter().zip(&ss.unit).map(|(a, u)| (a - lj * u) * &inv).collect();
                e = ss.mul(&e, &factor);
            }
            out.push(e);
        }
        return Ok(out);
    }
    Err(Error::NotSplit("could not separate the center with rational eigenvalues".into()))
}

/// Whether the corner `f A f` (with `f` idempotent) is `M_n(Q)`: looks for
/// elements with a rational eigenvalue and splits `f` recursively along
/// their spectral idempotents until every corner is one-dimensional.
fn splits(ss: &Semisimple, f: &[Q], n: usize) -> bool {
    let t = ss.t();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ n as u64);
    split_rec(ss, f, t, &mut rng) == Some(n)
}

fn corner_basis(ss: &Semisimple, f: &[Q], t: usize) -> Vec<QVector> {
    let mut ech = Echelon::new(t);
    let mut gens = Vec::new();
    for b in 0..t {
        let mut eb = vec![Q::zero(); t];
        eb[b] = Q::one();
        let v = ss.mul(&ss.mul(f, &eb), f);
        if ech.insert_dense(&v) {
            gens.push(v);
        }
    }
    gens
}

/// Number of primitive idempotents found in a decomposition of `f` into
/// orthogonal idempotents with one-dimensional corners, if one is found.
fn split_rec(ss: &Semisimple, f: &[Q], t: usize, rng: &mut ChaCha8Rng) -> Option<usize> {
    let corner = corner_basis(ss, f, t);
    let d = corner.len();
    if d == 1 {
        return Some(1);
    }
    let mut cands: Vec<QVector> = corner.clone();
    for i in 0..corner.len() {
        for j in 0..corner.len() {
            cands.push(ss.mul(&corner[i], &corner[j]));
        }
    }
    let mut k = 0;
    while k < SPLIT_CANDIDATES {
        let y = if k < cands.len() {
            cands[k].clone()
        } else {
            let mut y = vec![Q::zero(); t];
            for c in &corner {
                if rng.gen_bool(0.5) {
                    let r = q(rng.gen_range(-2..=2));
                    for (yi, ci) in y.iter_mut().zip(c) {
                        *yi += &r * ci;
                    }
                }
            }
            y
        };
        k += 1;
        let ly = ss.left_mult_matrix(&y);
        let Ok(lc) = restrict_operator(&ly, &corner) else {
            continue;
        };
        let cp = char_poly(&lc);
        let Some(roots) = cp.rational_roots() else {
            continue;
        };
        let Some((lam, mult)) = roots.into_iter().find(|r| r.1 < d) else {
            continue;
        };
        let a = UPoly::linear_root(&lam).pow(mult);
        let b = cp.div_rem(&a).0;
        let (g, _, s) = a.ext_gcd(&b);
        if g != UPoly::one() {
            continue;
        }
        // p = s b is 1 modulo a and 0 modulo b
        let p = &s * &b;
        let mut g_vec = vec![Q::zero(); t];
        let mut pow = f.to_vec();
        for c in p.coeffs() {
            if !c.is_zero() {
                for (gi, pi) in g_vec.iter_mut().zip(&pow) {
                    *gi += c * pi;
                }
            }
            pow = ss.mul(&y, &pow);
        }
        if ss.mul(&g_vec, &g_vec) != g_vec || g_vec.iter().all(Zero::is_zero) {
            continue;
        }
        let rest: QVector = f.iter().zip(&g_vec).map(|(a, b)| a - b).collect();
        if rest.iter().all(Zero::is_zero) {
            continue;
        }
        let left = split_rec(ss, &g_vec, t, rng)?;
        let right = split_rec(ss, &rest, t, rng)?;
        return Some(left + right);
    }
    None
}
