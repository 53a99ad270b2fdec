//! Search for layered alternating non-identities (Kemer polynomials).
//!
//! A generator of `M_{mu,t,s}` is fixed by a label word (which layer feeds
//! each position) and the frame evaluation. Because it alternates in every
//! layer, it suffices to put sorted distinct basis elements on each layer;
//! the alternating sum over the layers is then a dynamic program over the
//! positions whose state is the set of basis elements already used in each
//! layer.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{FDAlgebra, Terms};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::freealg::{is_w, LayerScheme, Letter};
use crate::linalg::QVector;
use crate::rational::{serde_qvec, Q};

use super::{right_mul_basis, WordEvaluator};

#[derive(Clone, Copy, Debug)]
pub struct KemerConfig {
    pub mu_max: usize,
    /// Milliseconds for the whole search; `PILAB_BUDGET_MS` overrides.
    pub budget_ms: Option<u64>,
    pub seed: u64,
    pub workers: usize,
    /// Dynamic-program steps allowed to each exhaustive enumeration.
    pub node_limit: u64,
}

impl Default for KemerConfig {
    fn default() -> Self {
        KemerConfig { mu_max: 2, budget_ms: Some(60_000), seed: 0x5eed_4e3e, workers: 1, node_limit: 200_000 }
    }
}

/// A replayable non-vanishing evaluation of one layered generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub mu: usize,
    pub t: usize,
    pub s: usize,
    pub label: Vec<u8>,
    /// Bit `j - 1` set when `w_j` is specialized to 1.
    pub mask: u64,
    /// Sorted basis indices substituted into each layer.
    pub x_assignment: Vec<Vec<usize>>,
    /// Basis index for each frame variable, `None` where specialized.
    pub w_assignment: Vec<Option<usize>>,
    #[serde(with = "serde_qvec")]
    pub value: QVector,
    pub found_by: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SearchOutcome {
    Witness { certificate: Certificate },
    /// The whole space was enumerated and every evaluation vanished.
    Exhausted,
    Truncated,
}

impl SearchOutcome {
    pub fn is_witness(&self) -> bool {
        matches!(self, SearchOutcome::Witness { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MuStatus {
    pub mu: usize,
    pub t: usize,
    pub s: usize,
    pub outcome: SearchOutcome,
    pub nodes: u64,
    pub trials: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    FundamentalUpTo { mu_max: usize },
    Refuted { mu: usize },
    Inconclusive { mu: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KemerReport {
    pub ts: (usize, usize),
    pub mu_max: usize,
    pub per_mu: Vec<MuStatus>,
    /// Searches with one extra big layer.
    pub upper: Vec<MuStatus>,
    pub verdict: Verdict,
    pub kemer_estimate: Option<(usize, usize)>,
    /// Searches run for the estimate besides `per_mu`.
    pub probes: Vec<MuStatus>,
    pub note: String,
}

impl KemerReport {
    pub fn certificates(&self) -> Vec<&Certificate> {
        self.per_mu
            .iter()
            .filter_map(|m| match &m.outcome {
                SearchOutcome::Witness { certificate } => Some(certificate),
                _ => None,
            })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

// ---------------------------------------------------------------- arithmetic

trait Ring: Sync {
    type V: Clone + Send;
    fn zero(&self) -> Self::V;
    fn basis(&self, j: usize) -> Self::V;
    fn mul_basis(&self, v: &Self::V, j: usize) -> Self::V;
    fn is_zero(v: &Self::V) -> bool;
    fn add_into(&self, acc: &mut Self::V, v: &Self::V, neg: bool);
}

struct Exact<'a>(&'a FDAlgebra);

impl Ring for Exact<'_> {
    type V = Terms;

    fn zero(&self) -> Terms {
        Vec::new()
    }

    fn basis(&self, j: usize) -> Terms {
        vec![(j, Q::from_integer(1.into()))]
    }

    fn mul_basis(&self, v: &Terms, j: usize) -> Terms {
        right_mul_basis(self.0, v, j)
    }

    fn is_zero(v: &Terms) -> bool {
        v.is_empty()
    }

    fn add_into(&self, acc: &mut Terms, v: &Terms, neg: bool) {
        let mut m: BTreeMap<usize, Q> = acc.drain(..).collect();
        for (k, c) in v {
            let e = m.entry(*k).or_insert_with(Q::zero);
            if neg {
                *e -= c;
            } else {
                *e += c;
            }
        }
        *acc = m.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    }
}

const P: u64 = (1 << 61) - 1;

fn mulp(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn powp(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulp(r, a);
        }
        a = mulp(a, a);
        e >>= 1;
    }
    r
}

fn q_mod(x: &Q) -> Result<u64> {
    let p = BigInt::from(P);
    let n = x.numer().mod_floor(&p).to_u64().expect("reduced");
    let d = x.denom().mod_floor(&p).to_u64().expect("reduced");
    if d == 0 {
        return Err(Error::Invariant("structure constant denominator divisible by the modulus".into()));
    }
    Ok(mulp(n, powp(d, P - 2)))
}

/// Arithmetic modulo `2^61 - 1`; a nonzero residue certifies a nonzero value.
struct ModP {
    dim: usize,
    /// `right[j][i]`: `b_i b_j`.
    right: Vec<Vec<Vec<(usize, u64)>>>,
}

impl ModP {
    fn new(a: &FDAlgebra) -> Result<Self> {
        let d = a.dim();
        let mut right = vec![vec![Vec::new(); d]; d];
        for (j, col) in right.iter_mut().enumerate() {
            for (i, slot) in col.iter_mut().enumerate() {
                for (k, c) in a.product(i, j) {
                    slot.push((*k, q_mod(c)?));
                }
            }
        }
        Ok(ModP { dim: d, right })
    }
}

impl Ring for ModP {
    type V = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        vec![0; self.dim]
    }

    fn basis(&self, j: usize) -> Vec<u64> {
        let mut v = vec![0; self.dim];
        v[j] = 1;
        v
    }

    fn mul_basis(&self, v: &Vec<u64>, j: usize) -> Vec<u64> {
        let mut out = vec![0u64; self.dim];
        for (i, &c) in v.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for &(k, s) in &self.right[j][i] {
                out[k] = (out[k] + mulp(c, s)) % P;
            }
        }
        out
    }

    fn is_zero(v: &Vec<u64>) -> bool {
        v.iter().all(|&c| c == 0)
    }

    fn add_into(&self, acc: &mut Vec<u64>, v: &Vec<u64>, neg: bool) {
        for (a, &b) in acc.iter_mut().zip(v) {
            *a = if neg { (*a + P - b) % P } else { (*a + b) % P };
        }
    }
}

// ---------------------------------------------------------- dynamic program

/// `None` is the empty product.
type States<V> = Vec<(u32, Option<V>)>;

struct Layout {
    offsets: Vec<u32>,
    sizes: Vec<usize>,
}

impl Layout {
    fn new(scheme: &LayerScheme) -> Self {
        let mut offsets = Vec::new();
        let mut off = 0u32;
        let sizes: Vec<usize> = scheme.layers.iter().map(Vec::len).collect();
        for &s in &sizes {
            offsets.push(off);
            off += s as u32;
        }
        Layout { offsets, sizes }
    }
}

fn times_w<R: Ring>(r: &R, v: &Option<R::V>, w: Option<usize>) -> Option<R::V> {
    match (v, w) {
        (v, None) => v.clone(),
        (None, Some(j)) => Some(r.basis(j)),
        (Some(v), Some(j)) => Some(r.mul_basis(v, j)),
    }
}

/// Multiplies by `w` and then by an unused element of layer `k`, summing with
/// the alternation sign.
fn step<R: Ring>(r: &R, states: &States<R::V>, w: Option<usize>, k: usize, lay: &Layout, xs: &[usize]) -> States<R::V> {
    let off = lay.offsets[k];
    let size = lay.sizes[k];
    let full = if size == 32 { u32::MAX } else { (1u32 << size) - 1 };
    let mut next: BTreeMap<u32, R::V> = BTreeMap::new();
    for (key, val) in states {
        let used = (key >> off) & full;
        let base = times_w(r, val, w);
        if base.as_ref().is_some_and(|b| R::is_zero(b)) {
            continue;
        }
        for (e, &b) in xs.iter().enumerate() {
            if used >> e & 1 == 1 {
                continue;
            }
            let neg = (used >> (e + 1)).count_ones() % 2 == 1;
            let v = match &base {
                None => r.basis(b),
                Some(x) => r.mul_basis(x, b),
            };
            if R::is_zero(&v) {
                continue;
            }
            let nk = key | (1 << (off + e as u32));
            match next.get_mut(&nk) {
                Some(acc) => r.add_into(acc, &v, neg),
                None => {
                    let mut acc = r.zero();
                    r.add_into(&mut acc, &v, neg);
                    next.insert(nk, acc);
                }
            }
        }
    }
    next.into_iter().filter(|(_, v)| !R::is_zero(v)).map(|(k, v)| (k, Some(v))).collect()
}

fn finish<R: Ring>(r: &R, states: &States<R::V>, w: Option<usize>) -> Option<R::V> {
    let (_, v) = states.first()?;
    times_w(r, v, w).filter(|v| !R::is_zero(v))
}

/// Evaluates one configuration; `None` when it vanishes.
fn evaluate_config<R: Ring>(
    r: &R,
    lay: &Layout,
    label: &[u8],
    ws: &[Option<usize>],
    xs: &[Vec<usize>],
) -> Option<R::V> {
    let mut states: States<R::V> = vec![(0, None)];
    for (p, &k) in label.iter().enumerate() {
        states = step(r, &states, ws[p], k as usize, lay, &xs[k as usize]);
        if states.is_empty() {
            return None;
        }
    }
    finish(r, &states, ws[label.len()])
}

fn terms_to_dense(t: &Terms, d: usize) -> QVector {
    let mut v = vec![Q::zero(); d];
    for (k, c) in t {
        v[*k] = c.clone();
    }
    v
}

fn mask_of(ws: &[Option<usize>]) -> u64 {
    ws.iter().enumerate().filter(|(_, w)| w.is_none()).fold(0, |m, (j, _)| m | 1 << j)
}

// ------------------------------------------------------------- enumeration

struct Space<'a> {
    alg: &'a FDAlgebra,
    scheme: LayerScheme,
    lay: Layout,
    n: usize,
}

impl<'a> Space<'a> {
    fn new(alg: &'a FDAlgebra, mu: usize, t: usize, s: usize) -> Result<Self> {
        let scheme = LayerScheme::new(mu, t, s)?;
        let lay = Layout::new(&scheme);
        let n = scheme.n();
        Ok(Space { alg, scheme, lay, n })
    }

    fn certificate(&self, label: Vec<u8>, ws: Vec<Option<usize>>, xs: Vec<Vec<usize>>, found_by: &str) -> Result<Certificate> {
        let exact = Exact(self.alg);
        let v = evaluate_config(&exact, &self.lay, &label, &ws, &xs)
            .ok_or_else(|| Error::Invariant("modular witness vanished exactly".into()))?;
        Ok(Certificate {
            mu: self.scheme.mu,
            t: self.scheme.t,
            s: self.scheme.s,
            mask: mask_of(&ws),
            label,
            x_assignment: xs,
            w_assignment: ws,
            value: terms_to_dense(&v, self.alg.dim()),
            found_by: found_by.into(),
        })
    }
}

fn combinations(d: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, d: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..d {
            if d - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, d, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, d, k, &mut Vec::new(), &mut out);
    out
}

/// Preferred layer substitutions: the semisimple complement on small
/// layers, plus one further basis element on each big layer.
fn canonical_x(alg: &FDAlgebra, scheme: &LayerScheme, extra: &[usize]) -> Option<Vec<Vec<usize>>> {
    let comp = alg.semisimple().ok()?.complement.clone();
    if comp.len() != scheme.t {
        return None;
    }
    let others: Vec<usize> = (0..alg.dim()).filter(|i| !comp.contains(i)).collect();
    let mut xs = Vec::new();
    for (k, layer) in scheme.layers.iter().enumerate() {
        if layer.len() == comp.len() {
            xs.push(comp.clone());
        } else {
            let e = *others.get(extra.get(k - scheme.mu).copied().unwrap_or(0) % others.len().max(1))?;
            let mut v = comp.clone();
            v.push(e);
            v.sort_unstable();
            xs.push(v);
        }
    }
    Some(xs)
}

fn all_x_assignments(alg: &FDAlgebra, scheme: &LayerScheme) -> Vec<Vec<Vec<usize>>> {
    let d = alg.dim();
    let mut out: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for layer in &scheme.layers {
        let cs = combinations(d, layer.len());
        let mut next = Vec::new();
        for prefix in &out {
            for c in &cs {
                let mut p = prefix.clone();
                p.push(c.clone());
                next.push(p);
            }
            if next.len() > 100_000 {
                break;
            }
        }
        out = next;
    }
    if let Some(c) = canonical_x(alg, scheme, &[]) {
        if let Some(pos) = out.iter().position(|x| *x == c) {
            let first = out.remove(pos);
            out.insert(0, first);
        }
    }
    out
}

enum Dfs {
    Found(Vec<u8>, Vec<Option<usize>>),
    Done,
    Stopped,
}

struct DfsCtx<'a, R: Ring> {
    r: &'a R,
    lay: &'a Layout,
    xs: &'a [Vec<usize>],
    d: usize,
    n: usize,
    nodes: u64,
    limit: u64,
    budget: &'a Budget,
    label: Vec<u8>,
    ws: Vec<Option<usize>>,
    remaining: Vec<usize>,
}

impl<R: Ring> DfsCtx<'_, R> {
    fn w_options(&self) -> impl Iterator<Item = Option<usize>> {
        std::iter::once(None).chain((0..self.d).map(Some))
    }

    fn run(&mut self, states: &States<R::V>) -> Dfs {
        let p = self.label.len();
        if p == self.n {
            for w in self.w_options() {
                if finish(self.r, states, w).is_some() {
                    self.ws.push(w);
                    return Dfs::Found(self.label.clone(), self.ws.clone());
                }
            }
            return Dfs::Done;
        }
        for w in self.w_options() {
            for k in 0..self.remaining.len() {
                if self.remaining[k] == 0 {
                    continue;
                }
                self.nodes += 1;
                if self.nodes > self.limit || (self.nodes % 1024 == 0 && self.budget.exceeded()) {
                    return Dfs::Stopped;
                }
                let next = step(self.r, states, w, k, self.lay, &self.xs[k]);
                if next.is_empty() {
                    continue;
                }
                self.label.push(k as u8);
                self.ws.push(w);
                self.remaining[k] -= 1;
                let res = self.run(&next);
                self.remaining[k] += 1;
                match res {
                    Dfs::Done => {
                        self.label.pop();
                        self.ws.pop();
                    }
                    other => return other,
                }
            }
        }
        Dfs::Done
    }
}

/// Exact enumeration of every label, frame evaluation and layer substitution.
fn exhaustive(space: &Space, budget: &Budget, limit: u64) -> Result<(SearchOutcome, u64)> {
    let exact = Exact(space.alg);
    let xss = all_x_assignments(space.alg, &space.scheme);
    let mut nodes = 0;
    for xs in xss {
        let mut ctx = DfsCtx {
            r: &exact,
            lay: &space.lay,
            xs: &xs,
            d: space.alg.dim(),
            n: space.n,
            nodes,
            limit,
            budget,
            label: Vec::new(),
            ws: Vec::new(),
            remaining: space.lay.sizes.clone(),
        };
        let res = ctx.run(&vec![(0, None)]);
        nodes = ctx.nodes;
        match res {
            Dfs::Found(label, ws) => {
                let cert = space.certificate(label, ws, xs.clone(), "enumeration")?;
                return Ok((SearchOutcome::Witness { certificate: cert }, nodes));
            }
            Dfs::Stopped => return Ok((SearchOutcome::Truncated, nodes)),
            Dfs::Done => {}
        }
    }
    Ok((SearchOutcome::Exhausted, nodes))
}

/// One guided random trial modulo `p`: grows label and frame evaluation
/// position by position, keeping only choices with a nonvanishing prefix.
fn trial(space: &Space, modp: &ModP, rng: &mut ChaCha8Rng) -> Option<(Vec<u8>, Vec<Option<usize>>, Vec<Vec<usize>>)> {
    let d = space.alg.dim();
    let extra: Vec<usize> = (0..space.scheme.s).map(|_| rng.gen_range(0..d.max(1))).collect();
    let xs = match canonical_x(space.alg, &space.scheme, &extra) {
        Some(c) if rng.gen_bool(0.8) => c,
        _ => {
            let mut xs = Vec::new();
            for &size in &space.lay.sizes {
                if size > d {
                    return None;
                }
                let mut pool: Vec<usize> = (0..d).collect();
                pool.shuffle(rng);
                let mut v = pool[..size].to_vec();
                v.sort_unstable();
                xs.push(v);
            }
            xs
        }
    };
    let mut remaining = space.lay.sizes.clone();
    let mut states: States<Vec<u64>> = vec![(0, None)];
    let mut label = Vec::with_capacity(space.n);
    let mut ws = Vec::with_capacity(space.n + 1);
    let w_opts: Vec<Option<usize>> = std::iter::once(None).chain((0..d).map(Some)).collect();
    for _ in 0..space.n {
        let mut options: Vec<(Option<usize>, usize)> = Vec::new();
        for &w in &w_opts {
            for (k, &r) in remaining.iter().enumerate() {
                if r > 0 {
                    options.push((w, k));
                }
            }
        }
        options.shuffle(rng);
        let mut advanced = false;
        for (w, k) in options {
            let next = step(modp, &states, w, k, &space.lay, &xs[k]);
            if !next.is_empty() {
                states = next;
                label.push(k as u8);
                ws.push(w);
                remaining[k] -= 1;
                advanced = true;
                break;
            }
        }
        if !advanced {
            return None;
        }
    }
    let mut opts = w_opts;
    opts.shuffle(rng);
    let w = opts.into_iter().find(|&w| finish(modp, &states, w).is_some())?;
    ws.push(w);
    Some((label, ws, xs))
}

const BATCH: u64 = 32;

fn sample(space: &Space, cfg: &KemerConfig, budget: &Budget) -> Result<(SearchOutcome, u64)> {
    let modp = ModP::new(space.alg)?;
    let tag = cfg.seed ^ (space.scheme.mu as u64) << 48 ^ (space.scheme.t as u64) << 40 ^ (space.scheme.s as u64) << 32;
    let run = |i: u64| {
        let mut rng = ChaCha8Rng::seed_from_u64(tag ^ i.wrapping_mul(0x9e37_79b9_7f4a_7c15));
        trial(space, &modp, &mut rng)
    };
    let workers = cfg.workers.max(1) as u64;
    let mut start = 0u64;
    while !budget.exceeded() {
        let found = if workers == 1 {
            (start..start + BATCH).find_map(|i| run(i).map(|r| (i, r)))
        } else {
            std::thread::scope(|sc| {
                let run = &run;
                let hs: Vec<_> = (0..workers)
                    .map(|w| {
                        sc.spawn(move || {
                            (start..start + BATCH).filter(|i| i % workers == w).find_map(|i| run(i).map(|r| (i, r)))
                        })
                    })
                    .collect();
                hs.into_iter().filter_map(|h| h.join().expect("worker panicked")).min_by_key(|(i, _)| *i)
            })
        };
        if let Some((i, (label, ws, xs))) = found {
            let cert = space.certificate(label, ws, xs, "sampling")?;
            return Ok((SearchOutcome::Witness { certificate: cert }, i + 1));
        }
        start += BATCH;
    }
    Ok((SearchOutcome::Truncated, start))
}

fn search(alg: &FDAlgebra, mu: usize, t: usize, s: usize, cfg: &KemerConfig, budget: &Budget, sampling: bool) -> Result<MuStatus> {
    let space = Space::new(alg, mu, t, s)?;
    let (outcome, nodes) = exhaustive(&space, budget, cfg.node_limit)?;
    let (outcome, trials) = match outcome {
        SearchOutcome::Truncated if sampling => sample(&space, cfg, budget)?,
        o => (o, 0),
    };
    Ok(MuStatus { mu, t, s, outcome, nodes, trials })
}

/// Searches `M_{mu,t,s}` for `mu = 1..=mu_max` with `(t, s)` the t,s-index,
/// and estimates the Kemer index.
pub fn kemer_index_search(alg: &FDAlgebra, cfg: &KemerConfig) -> Result<KemerReport> {
    if cfg.mu_max == 0 {
        return Err(Error::InvalidParams("mu_max must be at least 1".into()));
    }
    let budget = Budget::new(cfg.budget_ms);
    let (t, s) = alg.ts_index();
    let mut per_mu = Vec::new();
    for mu in 1..=cfg.mu_max {
        per_mu.push(search(alg, mu, t, s, cfg, &budget, true)?);
    }
    let mut upper = Vec::new();
    for mu in 1..=cfg.mu_max {
        match search(alg, mu, t, s + 1, cfg, &budget, false) {
            Ok(st) => upper.push(st),
            Err(Error::Overflow(_)) => break,
            Err(e) => return Err(e),
        }
    }
    let verdict = if let Some(m) = per_mu.iter().find(|m| m.outcome == SearchOutcome::Exhausted) {
        Verdict::Refuted { mu: m.mu }
    } else if let Some(m) = per_mu.iter().find(|m| !m.outcome.is_witness()) {
        Verdict::Inconclusive { mu: m.mu }
    } else {
        Verdict::FundamentalUpTo { mu_max: cfg.mu_max }
    };
    let mut probes = Vec::new();
    let kemer_estimate = match verdict {
        Verdict::FundamentalUpTo { .. } => Some((t, s)),
        _ => estimate(alg, t, s, cfg, &budget, &per_mu, &mut probes)?,
    };
    Ok(KemerReport {
        ts: (t, s),
        mu_max: cfg.mu_max,
        per_mu,
        upper,
        verdict,
        kemer_estimate,
        probes,
        note: "witness existence is reported per mu; stabilization in mu is left to interpretation".into(),
    })
}

fn estimate(
    alg: &FDAlgebra,
    t: usize,
    s: usize,
    cfg: &KemerConfig,
    budget: &Budget,
    main: &[MuStatus],
    probes: &mut Vec<MuStatus>,
) -> Result<Option<(usize, usize)>> {
    // Some(true): witnesses for every mu; Some(false): some mu exhausted
    let level = |tt: usize, ss: usize, probes: &mut Vec<MuStatus>| -> Result<Option<bool>> {
        let mut all = true;
        for mu in 1..=cfg.mu_max {
            let st = match main.iter().find(|m| m.mu == mu && m.t == tt && m.s == ss) {
                Some(m) => m.clone(),
                None => {
                    let m = search(alg, mu, tt, ss, cfg, budget, true)?;
                    probes.push(m.clone());
                    m
                }
            };
            match st.outcome {
                SearchOutcome::Exhausted => return Ok(Some(false)),
                SearchOutcome::Truncated => all = false,
                SearchOutcome::Witness { .. } => {}
            }
        }
        Ok(if all { Some(true) } else { None })
    };
    let mut beta = None;
    for tt in (0..=t).rev() {
        match level(tt, 0, probes)? {
            Some(true) => {
                beta = Some(tt);
                break;
            }
            Some(false) => continue,
            None => return Ok(None),
        }
    }
    let Some(beta) = beta else { return Ok(None) };
    // with beta = t a big layer needs a radical element, so gamma <= s
    let cap = if beta == t { s } else { s + t + 1 };
    let mut gamma = 0;
    for ss in 1..=cap {
        match level(beta, ss, probes)? {
            Some(true) => gamma = ss,
            Some(false) => break,
            None => return Ok(None),
        }
    }
    Ok(Some((beta, gamma)))
}

/// Recomputes the value of a certificate; the polynomial is materialized
/// when it has at most `50_000` terms.
pub fn replay_certificate(alg: &FDAlgebra, cert: &Certificate) -> Result<QVector> {
    let space = Space::new(alg, cert.mu, cert.t, cert.s)?;
    let n = space.n;
    if cert.label.len() != n || cert.w_assignment.len() != n + 1 || cert.x_assignment.len() != space.lay.sizes.len() {
        return Err(Error::InvalidParams("certificate does not match its layer scheme".into()));
    }
    if mask_of(&cert.w_assignment) != cert.mask {
        return Err(Error::InvalidParams("certificate mask disagrees with its frame evaluation".into()));
    }
    let d = alg.dim();
    for (xs, &size) in cert.x_assignment.iter().zip(&space.lay.sizes) {
        if xs.len() != size || xs.iter().any(|&b| b >= d) || xs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParams("layer substitution must be sorted distinct basis indices".into()));
        }
    }
    if cert.w_assignment.iter().flatten().any(|&b| b >= d) {
        return Err(Error::InvalidParams("frame index out of range".into()));
    }
    let fact = |k: usize| (1..=k as u64).product::<u64>();
    let size: u64 = space.lay.sizes.iter().map(|&k| fact(k)).product();
    if size <= 50_000 {
        let f = space.scheme.generator(&cert.label, cert.mask)?;
        let mut assign = [0usize; 256];
        for (layer, xs) in space.scheme.layers.iter().zip(&cert.x_assignment) {
            for (l, &b) in layer.iter().zip(xs) {
                assign[*l as usize] = b;
            }
        }
        for (j, w) in cert.w_assignment.iter().enumerate() {
            if let Some(b) = w {
                assign[(100 + j + 1) as Letter as usize] = *b;
            }
        }
        debug_assert!(f.terms().keys().flatten().all(|l| !is_w(*l) || cert.w_assignment[(*l - 101) as usize].is_some()));
        let v = WordEvaluator::new(alg, f.terms()).eval(&assign);
        Ok(terms_to_dense(&v, d))
    } else {
        let exact = Exact(alg);
        let v = evaluate_config(&exact, &space.lay, &cert.label, &cert.w_assignment, &cert.x_assignment);
        Ok(v.map(|v| terms_to_dense(&v, d)).unwrap_or_else(|| vec![Q::zero(); d]))
    }
}
