//! Generic elements in `A ⊗ Q[λ]`, relatively free and trace-ring Hilbert
//! functions, Cayley–Hamilton checks and the closed-form dimension formulas.

use std::collections::{BTreeMap, HashMap};

use num_traits::One;

use crate::algebra::FDAlgebra;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseVec};
use crate::poly::{MPoly, Monomial};
use crate::rational::Q;

/// An element of `A ⊗ Q[λ]`: one polynomial per basis element of `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericElement {
    pub coords: Vec<MPoly>,
}

impl GenericElement {
    pub fn zero(dim: usize) -> Self {
        GenericElement { coords: vec![MPoly::zero(); dim] }
    }

    /// `ξ_j = Σ_i λ_{i,j} a_i`, with `λ_{i,j}` the variable `j·dim + i`.
    pub fn generic(a: &FDAlgebra, j: usize) -> Self {
        let d = a.dim();
        GenericElement { coords: (0..d).map(|i| MPoly::var((j * d + i) as u32)).collect() }
    }

    pub fn constant(x: &[Q]) -> Self {
        GenericElement { coords: x.iter().map(|c| MPoly::constant(c.clone())).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn mul(&self, a: &FDAlgebra, other: &GenericElement) -> GenericElement {
        let d = a.dim();
        let mut out = vec![MPoly::zero(); d];
        for (i, x) in self.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.coords.iter().enumerate() {
                if y.is_zero() || a.product(i, j).is_empty() {
                    continue;
                }
                let xy = x * y;
                for (k, c) in a.product(i, j) {
                    out[*k].add_assign_scaled(&xy, c);
                }
            }
        }
        GenericElement { coords: out }
    }

    pub fn add(&self, other: &GenericElement) -> GenericElement {
        GenericElement { coords: self.coords.iter().zip(&other.coords).map(|(x, y)| x + y).collect() }
    }

    /// Multiplies every coordinate by a scalar polynomial.
    pub fn scale(&self, f: &MPoly) -> GenericElement {
        GenericElement { coords: self.coords.iter().map(|x| x * f).collect() }
    }
}

pub fn generic_elements(a: &FDAlgebra, m: usize) -> Vec<GenericElement> {
    (0..m).map(|j| GenericElement::generic(a, j)).collect()
}

/// Value of a nonempty word in the generic elements.
pub fn evaluate_word(a: &FDAlgebra, gens: &[GenericElement], word: &[usize]) -> Result<GenericElement> {
    let (&first, rest) = word.split_first().ok_or_else(|| Error::InvalidParams("empty word".into()))?;
    let mut acc = gens.get(first).ok_or_else(|| Error::InvalidParams(format!("no generator {first}")))?.clone();
    for &j in rest {
        let g = gens.get(j).ok_or_else(|| Error::InvalidParams(format!("no generator {j}")))?;
        acc = acc.mul(a, g);
    }
    Ok(acc)
}

#[derive(Clone, Debug)]
pub struct HilbertOptions {
    /// Count the unit in degree 0. `None` follows `A.has_unit()`.
    pub unital: Option<bool>,
    pub multigraded: bool,
    pub budget_ms: Option<u64>,
    pub workers: usize,
}

impl Default for HilbertOptions {
    fn default() -> Self {
        HilbertOptions { unital: None, multigraded: false, budget_ms: None, workers: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertFunction {
    pub graded: bool,
    /// Dimension in each total degree `0..=truncation`.
    pub dims: Vec<u64>,
    /// Dimension per multidegree, filled when `graded`.
    pub multidims: BTreeMap<Vec<usize>, u64>,
    pub truncation: usize,
}

impl HilbertFunction {
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::json!({"graded": self.graded, "dims": self.dims, "truncation": self.truncation});
        if self.graded {
            v["multidims"] = self
                .multidims
                .iter()
                .map(|(k, d)| serde_json::json!({"degree": k, "dim": d}))
                .collect::<Vec<_>>()
                .into();
        }
        v
    }
}

/// Assigns column indices to `(component, monomial)` pairs on first sight.
#[derive(Default)]
struct Columns {
    index: HashMap<(usize, Monomial), usize>,
}

impl Columns {
    fn vector<'a>(&mut self, comps: impl IntoIterator<Item = &'a MPoly>) -> SparseVec {
        let mut pairs = Vec::new();
        for (k, f) in comps.into_iter().enumerate() {
            for (mono, c) in f.terms() {
                let next = self.index.len();
                let col = *self.index.entry((k, mono.clone())).or_insert(next);
                pairs.push((col, c.clone()));
            }
        }
        SparseVec::from_pairs(pairs)
    }
}

fn check_budget(budget: &Budget, what: &str) -> Result<()> {
    if budget.exceeded() {
        return Err(Error::BudgetExceeded(format!("{what} after {:?}", budget.elapsed())));
    }
    Ok(())
}

fn parallel_map<T: Sync, U: Send>(items: &[T], workers: usize, f: impl Fn(&T) -> U + Sync) -> Vec<U> {
    let workers = workers.max(1).min(items.len().max(1));
    if workers == 1 {
        return items.iter().map(f).collect();
    }
    let chunk = items.len().div_ceil(workers);
    std::thread::scope(|sc| {
        let handles: Vec<_> = items.chunks(chunk).map(|c| sc.spawn(|| c.iter().map(&f).collect::<Vec<U>>())).collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}

fn multidegree(word: &[usize], m: usize) -> Vec<usize> {
    let mut v = vec![0; m];
    for &j in word {
        v[j] += 1;
    }
    v
}

/// Degreewise dimensions of the relatively free algebra `F_A(m)`, computed
/// as ranks of the coefficient vectors of all words in `m` generic elements.
pub fn relfree_hilbert(a: &FDAlgebra, m: usize, d_max: usize, opts: &HilbertOptions) -> Result<HilbertFunction> {
    if m == 0 || d_max == 0 {
        return Err(Error::InvalidParams("need m >= 1 and d_max >= 1".into()));
    }
    let budget = Budget::new(opts.budget_ms);
    let gens = generic_elements(a, m);
    let unital = opts.unital.unwrap_or(a.has_unit()) && a.has_unit();
    let mut dims = vec![unital as u64];
    let mut multidims = BTreeMap::new();
    if opts.multigraded {
        multidims.insert(vec![0; m], unital as u64);
    }
    let mut layer: Vec<(Vec<usize>, GenericElement)> = vec![(Vec::new(), GenericElement::zero(a.dim()))];
    for d in 1..=d_max {
        let words: Vec<(Vec<usize>, usize)> =
            layer.iter().enumerate().flat_map(|(p, (w, _))| (0..m).map(move |j| ([w.as_slice(), &[j]].concat(), p))).collect();
        if (words.len() as u128) > (1u128 << 22) {
            return Err(Error::BudgetExceeded(format!("{} words in degree {d}", words.len())));
        }
        check_budget(&budget, "word evaluation")?;
        let next: Vec<(Vec<usize>, GenericElement)> = parallel_map(&words, opts.workers, |(w, p)| {
            let j = *w.last().expect("nonempty");
            let v = if d == 1 { gens[j].clone() } else { layer[*p].1.mul(a, &gens[j]) };
            (w.clone(), v)
        });
        let mut groups: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (i, (w, _)) in next.iter().enumerate() {
            groups.entry(multidegree(w, m)).or_default().push(i);
        }
        let mut total = 0u64;
        for (md, idx) in groups {
            let mut cols = Columns::default();
            let mut ech = Echelon::new(usize::MAX);
            for i in idx {
                check_budget(&budget, "rank computation")?;
                ech.insert(cols.vector(&next[i].1.coords));
            }
            total += ech.rank() as u64;
            if opts.multigraded {
                multidims.insert(md, ech.rank() as u64);
            }
        }
        dims.push(total);
        layer = next;
    }
    Ok(HilbertFunction { graded: opts.multigraded, dims, multidims, truncation: d_max })
}

/// `(t_1(x), ..., t_q(x))` for a constant element.
pub fn trace_map(a: &FDAlgebra, x: &[Q]) -> Result<Vec<Q>> {
    a.trace_tuple(x)
}

/// Trace tuple of a generic element, one polynomial per simple summand.
pub fn trace_generic(a: &FDAlgebra, x: &GenericElement) -> Result<Vec<MPoly>> {
    let ss = a.semisimple()?;
    Ok(ss
        .blocks
        .iter()
        .map(|b| {
            let mut acc = MPoly::zero();
            for (f, c) in x.coords.iter().zip(&b.traces) {
                acc.add_assign_scaled(f, c);
            }
            acc
        })
        .collect())
}

/// Lexicographically least rotations of the words of length `d` in `m` letters.
pub fn necklaces(m: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut w = vec![0usize; d];
    loop {
        if (1..d).all(|r| {
            let rot: Vec<usize> = w[r..].iter().chain(&w[..r]).copied().collect();
            w <= rot
        }) {
            out.push(w.clone());
        }
        let mut i = d;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if w[i] + 1 < m {
                w[i] += 1;
                for x in &mut w[i + 1..] {
                    *x = 0;
                }
                break;
            }
        }
    }
}

fn tuple_mul(x: &[MPoly], y: &[MPoly]) -> Vec<MPoly> {
    x.iter().zip(y).map(|(a, b)| a * b).collect()
}

/// Degreewise dimensions of the algebra generated by the trace tuples of
/// words in `m` generic elements, a word of length `k` having degree `k`.
pub fn trace_ring_hilbert(a: &FDAlgebra, m: usize, d_max: usize, opts: &HilbertOptions) -> Result<HilbertFunction> {
    if m == 0 || d_max == 0 {
        return Err(Error::InvalidParams("need m >= 1 and d_max >= 1".into()));
    }
    let budget = Budget::new(opts.budget_ms);
    let q = a.semisimple()?.blocks.len();
    let gens = generic_elements(a, m);
    let one: Vec<MPoly> = vec![MPoly::one(); q];
    // bases of the degree components, and the new generators in each degree
    let mut comps: Vec<Vec<Vec<MPoly>>> = vec![vec![one]];
    let mut new_gens: Vec<Vec<Vec<MPoly>>> = vec![Vec::new()];
    let mut dims = vec![1u64];
    for d in 1..=d_max {
        let mut cols = Columns::default();
        let mut ech = Echelon::new(usize::MAX);
        let mut basis = Vec::new();
        for k in 1..d {
            for g in &new_gens[k] {
                for b in &comps[d - k] {
                    check_budget(&budget, "trace products")?;
                    let p = tuple_mul(g, b);
                    if ech.insert(cols.vector(&p)) {
                        basis.push(p);
                    }
                }
            }
        }
        let words = necklaces(m, d);
        let traces = parallel_map(&words, opts.workers, |w| {
            evaluate_word(a, &gens, w).and_then(|x| trace_generic(a, &x))
        });
        let mut fresh = Vec::new();
        for t in traces {
            check_budget(&budget, "trace generators")?;
            let t = t?;
            if ech.insert(cols.vector(&t)) {
                basis.push(t.clone());
                fresh.push(t);
            }
        }
        dims.push(basis.len() as u64);
        comps.push(basis);
        new_gens.push(fresh);
    }
    Ok(HilbertFunction { graded: false, dims, multidims: BTreeMap::new(), truncation: d_max })
}

/// Coefficients `c_0 = 1, c_1, ..., c_N` of the characteristic polynomial
/// `x^N + c_1 x^{N-1} + ... + c_N` from the power traces `p_1..p_N`.
pub fn char_poly_from_power_traces(p: &[MPoly]) -> Vec<MPoly> {
    let mut e: Vec<MPoly> = vec![MPoly::one()];
    for k in 1..=p.len() {
        let mut acc = MPoly::zero();
        for j in 1..=k {
            let sign = if j % 2 == 1 { Q::one() } else { -Q::one() };
            acc.add_assign_scaled(&(&e[k - j] * &p[j - 1]), &sign);
        }
        e.push(acc.scale(&Q::new(1.into(), (k as i64).into())));
    }
    e.iter()
        .enumerate()
        .map(|(k, f)| if k % 2 == 0 { f.clone() } else { -f })
        .collect()
}

/// Checks `(a · Π_i H_i(a))^{s+1} = 0` for `a` the value of `word` in `m`
/// generic elements, `H_i` the characteristic polynomial of left
/// multiplication by `a` on the `i`-th simple summand (coefficients from the
/// trace tuple) and `J^{s+1} = 0`.
pub fn cayley_hamilton_check(a: &FDAlgebra, m: usize, word: &[usize], budget_ms: Option<u64>) -> Result<bool> {
    if word.iter().any(|&j| j >= m) {
        return Err(Error::InvalidParams(format!("word uses a generator beyond {m}")));
    }
    let budget = Budget::new(budget_ms);
    let gens = generic_elements(a, m);
    let x = evaluate_word(a, &gens, word)?;
    let ss = a.semisimple()?;
    let s = a.ts_index().1;
    let max_n: usize = ss.blocks.iter().map(|b| b.size * b.size).max().unwrap_or(0);
    let mut powers = vec![x.clone()];
    let mut traces = vec![trace_generic(a, &x)?];
    for _ in 1..max_n {
        check_budget(&budget, "powers")?;
        let next = powers.last().expect("nonempty").mul(a, &x);
        traces.push(trace_generic(a, &next)?);
        powers.push(next);
    }
    // P(x) = x Π H_i(x), coefficients indexed by power of x
    let mut poly: Vec<MPoly> = vec![MPoly::zero(), MPoly::one()];
    for (i, b) in ss.blocks.iter().enumerate() {
        let n = b.size * b.size;
        let p: Vec<MPoly> = traces[..n].iter().map(|t| t[i].clone()).collect();
        let c = char_poly_from_power_traces(&p);
        let h: Vec<MPoly> = (0..=n).map(|k| c[n - k].clone()).collect();
        let mut next = vec![MPoly::zero(); poly.len() + n];
        for (u, f) in poly.iter().enumerate() {
            for (v, g) in h.iter().enumerate() {
                check_budget(&budget, "characteristic polynomial product")?;
                next[u + v] = &next[u + v] + &(f * g);
            }
        }
        poly = next;
    }
    while powers.len() + 1 < poly.len() {
        check_budget(&budget, "powers")?;
        let next = powers.last().expect("nonempty").mul(a, &x);
        powers.push(next);
    }
    let mut z = GenericElement::zero(a.dim());
    for (k, f) in poly.iter().enumerate().skip(1) {
        if !f.is_zero() {
            z = z.add(&powers[k - 1].scale(f));
        }
    }
    let mut acc = z.clone();
    for _ in 0..s {
        check_budget(&budget, "nilpotency power")?;
        acc = acc.mul(a, &z);
    }
    Ok(acc.is_zero())
}

/// `(m-1)t + q`.
pub fn gk_dimension_formula(t: u64, q: u64, m: u64) -> Result<u64> {
    if m < 2 {
        return Err(Error::InvalidParams("m must be at least 2".into()));
    }
    Ok((m - 1) * t + q)
}

/// `m t - Σ (n_i^2 - 1)` with `t = Σ n_i^2`.
pub fn repvariety_dimension(blocks: &[u64], m: u64) -> Result<u64> {
    if m < 2 || blocks.is_empty() || blocks.contains(&0) {
        return Err(Error::InvalidParams("need m >= 2 and positive block sizes".into()));
    }
    let t: u64 = blocks.iter().map(|n| n * n).sum();
    Ok(m * t - blocks.iter().map(|n| n * n - 1).sum::<u64>())
}

/// `(t^2 - t)/2 + q`.
pub fn colength_dimension(t: u64, q: u64) -> u64 {
    (t * t - t) / 2 + q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{block_triangular, direct_sum, matrix_algebra, nilpotent_free};
    use crate::rational::q;
    use crate::series::fit_i64;

    fn opts() -> HilbertOptions {
        HilbertOptions::default()
    }

    #[test]
    fn relfree_small() {
        let k = matrix_algebra(1).unwrap();
        assert_eq!(relfree_hilbert(&k, 2, 4, &opts()).unwrap().dims, vec![1, 2, 3, 4, 5]);
        let ut = block_triangular(&[1, 1]).unwrap();
        assert_eq!(relfree_hilbert(&ut, 2, 2, &opts()).unwrap().dims[2], 4);
        let m2 = matrix_algebra(2).unwrap();
        assert_eq!(relfree_hilbert(&m2, 1, 4, &opts()).unwrap().dims, vec![1, 1, 1, 1, 1]);
        let nil = nilpotent_free(2, 2).unwrap();
        let h = relfree_hilbert(&nil, 2, 3, &opts()).unwrap();
        assert_eq!(h.dims[0], 0);
        assert_eq!(h.dims[3], 0);
    }

    #[test]
    fn multigraded_and_workers() {
        let ut = block_triangular(&[1, 1]).unwrap();
        let o = HilbertOptions { multigraded: true, ..opts() };
        let h = relfree_hilbert(&ut, 2, 4, &o).unwrap();
        for d in 0..=4 {
            let s: u64 = h.multidims.iter().filter(|(k, _)| k.iter().sum::<usize>() == d).map(|(_, v)| v).sum();
            assert_eq!(s, h.dims[d]);
        }
        let h4 = relfree_hilbert(&ut, 2, 4, &HilbertOptions { workers: 4, ..o }).unwrap();
        assert_eq!(h, h4);
    }

    #[test]
    fn direct_sum_is_subdirect() {
        let k = matrix_algebra(1).unwrap();
        let ut = block_triangular(&[1, 1]).unwrap();
        let s = direct_sum(&k, &ut);
        let hs = relfree_hilbert(&s, 2, 4, &opts()).unwrap();
        let hk = relfree_hilbert(&k, 2, 4, &opts()).unwrap();
        let hu = relfree_hilbert(&ut, 2, 4, &opts()).unwrap();
        for d in 1..=4 {
            assert!(hs.dims[d] <= hk.dims[d] + hu.dims[d]);
            assert_eq!(hs.dims[d], hu.dims[d]);
        }
    }

    #[test]
    fn traces() {
        let m2 = matrix_algebra(2).unwrap();
        let e11 = m2.basis_vector(0);
        assert_eq!(trace_map(&m2, &e11).unwrap(), vec![q(2)]);
        let ut = block_triangular(&[1, 1]).unwrap();
        let names = ut.basis_names().to_vec();
        let rad = names.iter().position(|n| n.contains("12")).unwrap();
        assert_eq!(trace_map(&ut, &ut.basis_vector(rad)).unwrap(), vec![q(0), q(0)]);
        let x: Vec<Q> = (0..ut.dim()).map(|i| q(i as i64 + 1)).collect();
        let y: Vec<Q> = (0..ut.dim()).map(|i| q(2 - i as i64)).collect();
        let xy: Vec<Q> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        let (tx, ty, txy) = (trace_map(&ut, &x).unwrap(), trace_map(&ut, &y).unwrap(), trace_map(&ut, &xy).unwrap());
        for i in 0..2 {
            assert_eq!(&tx[i] + &ty[i], txy[i]);
        }
    }

    #[test]
    fn trace_ring_m2() {
        let m2 = matrix_algebra(2).unwrap();
        let h = trace_ring_hilbert(&m2, 2, 4, &opts()).unwrap();
        assert_eq!(h.dims, vec![1, 2, 6, 10, 20]);
        let k = matrix_algebra(1).unwrap();
        assert_eq!(trace_ring_hilbert(&k, 1, 4, &opts()).unwrap().dims, vec![1, 1, 1, 1, 1]);
        let nil = nilpotent_free(1, 2).unwrap();
        assert_eq!(trace_ring_hilbert(&nil, 2, 3, &opts()).unwrap().dims, vec![1, 0, 0, 0]);
        assert_eq!(necklaces(2, 4).len(), 6);
    }

    #[test]
    fn trace_module_action() {
        let ut = block_triangular(&[1, 1]).unwrap();
        let gens = generic_elements(&ut, 2);
        let ss = ut.semisimple().unwrap();
        let words: Vec<Vec<usize>> = vec![vec![0], vec![1], vec![0, 1], vec![1, 0, 1]];
        for u in &words {
            for v in &words {
                let x = evaluate_word(&ut, &gens, u).unwrap();
                let y = evaluate_word(&ut, &gens, v).unwrap();
                let (tx, ty) = (trace_generic(&ut, &x).unwrap(), trace_generic(&ut, &y).unwrap());
                let mut c = GenericElement::zero(ut.dim());
                for (i, b) in ss.blocks.iter().enumerate() {
                    c = c.add(&GenericElement::constant(&b.lift).mul(&ut, &y).scale(&tx[i]));
                }
                let tc = trace_generic(&ut, &c).unwrap();
                for i in 0..tx.len() {
                    assert_eq!(tc[i], &tx[i] * &ty[i]);
                }
            }
        }
    }

    #[test]
    fn cayley_hamilton() {
        let m2 = matrix_algebra(2).unwrap();
        assert!(cayley_hamilton_check(&m2, 1, &[0], None).unwrap());
        let ut = block_triangular(&[1, 1]).unwrap();
        assert!(cayley_hamilton_check(&ut, 2, &[0, 1], None).unwrap());
        let nil = nilpotent_free(2, 2).unwrap();
        assert!(cayley_hamilton_check(&nil, 2, &[0], None).unwrap());
        let ut21 = block_triangular(&[2, 1]).unwrap();
        assert!(cayley_hamilton_check(&ut21, 1, &[0], None).unwrap());
    }

    #[test]
    fn formulas() {
        assert_eq!(gk_dimension_formula(1, 1, 3).unwrap(), 3);
        assert_eq!(gk_dimension_formula(2, 2, 2).unwrap(), 4);
        assert!(gk_dimension_formula(2, 2, 1).is_err());
        assert_eq!(repvariety_dimension(&[1, 1], 2).unwrap(), 4);
        assert_eq!(repvariety_dimension(&[2, 1], 2).unwrap(), 7);
        for n in 1..4u64 {
            for m in 2..6u64 {
                assert_eq!(repvariety_dimension(&[n], m).unwrap(), (m - 1) * n * n + 1);
            }
        }
        assert_eq!(colength_dimension(1, 1), 1);
        assert_eq!(colength_dimension(4, 1), 7);
        assert_eq!(colength_dimension(2, 2), 3);
    }

    #[test]
    fn growth_fits() {
        let k = matrix_algebra(1).unwrap();
        let h = relfree_hilbert(&k, 2, 8, &opts()).unwrap();
        let pre: Vec<i64> = h.dims.iter().map(|&x| x as i64).collect();
        let f = fit_i64(&pre, &[1, 1], 5).unwrap().unwrap();
        assert_eq!(f.dimension(), 2);
    }
}
