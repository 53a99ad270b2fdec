//! Evaluating polynomials on finite-dimensional algebras: identity tests,
//! codimensions, cocharacters and the Kemer index search.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{unitalize, FDAlgebra, Terms};
use crate::error::{Error, Result};
use crate::freealg::{is_x, letter_name, FreePoly, Letter, MultilinearPoly, Word};
use crate::linalg::QVector;
use crate::rational::{serde_qvec, Q};

mod codim;
mod kemer;

pub use codim::{
    cocharacter, cocharacter_with, codimension, codimension_with, exponent_diagnostic, identity_space,
    CocharacterResult, CodimOptions, ExponentReport, ExponentRow, DEFAULT_DEGREE_BOUND,
};
pub use kemer::{
    kemer_index_search, replay_certificate, Certificate, KemerConfig, KemerReport, MuStatus, SearchOutcome,
    Verdict,
};

/// `x * b_j` for a basis element `b_j`.
pub(crate) fn right_mul_basis(a: &FDAlgebra, x: &[(usize, Q)], j: usize) -> Terms {
    let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
    for (i, c) in x {
        for (k, s) in a.product(*i, j) {
            *acc.entry(*k).or_insert_with(Q::zero) += c * s;
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

fn add_scaled(acc: &mut BTreeMap<usize, Q>, c: &Q, x: &[(usize, Q)]) {
    for (k, v) in x {
        *acc.entry(*k).or_insert_with(Q::zero) += c * v;
    }
}

/// Value of `f` with each letter replaced by the given element of `a`.
pub fn evaluate(a: &FDAlgebra, f: &FreePoly, values: &BTreeMap<Letter, QVector>) -> Result<QVector> {
    let d = a.dim();
    let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
    for (word, c) in f.terms() {
        let mut cur: Option<Terms> = None;
        for l in word {
            let v = values
                .get(l)
                .ok_or_else(|| Error::InvalidParams(format!("no value for {}", letter_name(*l))))?;
            if v.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: v.len() });
            }
            let vt: Terms = v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect();
            cur = Some(match cur {
                None => vt,
                Some(p) => a.mul_terms(&p, &vt),
            });
        }
        let value = match cur {
            Some(p) => p,
            None => {
                let u = a.unit().ok_or(Error::UnitRequired)?;
                u.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
            }
        };
        add_scaled(&mut acc, c, &value);
    }
    let mut out = vec![Q::zero(); d];
    for (k, v) in acc {
        out[k] = v;
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug)]
pub struct EvalOptions {
    /// Evaluate in the unitalization when `f` has a constant term and the
    /// algebra has no unit (otherwise `UnitRequired`).
    pub unitalize: bool,
    /// Use sorted distinct basis elements on alternating sets of variables.
    pub exploit_alternation: bool,
    pub workers: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { unitalize: false, exploit_alternation: true, workers: 1 }
    }
}

/// A basis tuple on which a polynomial does not vanish.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// Letter name and basis index.
    pub assignment: Vec<(String, usize)>,
    /// Basis names of the algebra used (the unitalization when it was needed).
    pub basis: Vec<String>,
    #[serde(with = "serde_qvec")]
    pub value: QVector,
}

pub fn is_identity(a: &FDAlgebra, f: &MultilinearPoly) -> Result<bool> {
    Ok(find_nonvanishing(a, f, EvalOptions::default())?.is_none())
}

pub fn is_identity_with(a: &FDAlgebra, f: &MultilinearPoly, opts: EvalOptions) -> Result<bool> {
    Ok(find_nonvanishing(a, f, opts)?.is_none())
}

/// First basis-tuple evaluation (in a fixed enumeration order) that does not
/// vanish, or `None` when `f` is an identity.
pub fn find_nonvanishing(a: &FDAlgebra, f: &MultilinearPoly, opts: EvalOptions) -> Result<Option<Witness>> {
    let needs_unit = f.terms().contains_key(&Word::new());
    let owned;
    let alg = if needs_unit && !a.has_unit() {
        if !opts.unitalize {
            return Err(Error::UnitRequired);
        }
        owned = unitalize(a);
        &owned
    } else {
        a
    };
    // components with different letter sets are tested separately
    let mut groups: BTreeMap<Vec<Letter>, BTreeMap<Word, Q>> = BTreeMap::new();
    for (wd, c) in f.terms() {
        let mut key = wd.clone();
        key.sort_unstable();
        groups.entry(key).or_default().insert(wd.clone(), c.clone());
    }
    for (letters, terms) in groups {
        let g = MultilinearPoly::new(f.n(), f.frame(), terms)?;
        if let Some(wit) = search_group(alg, &g, &letters, opts)? {
            return Ok(Some(wit));
        }
    }
    Ok(None)
}

fn swap_negates(f: &MultilinearPoly, a: Letter, b: Letter) -> bool {
    f.terms().iter().all(|(wd, c)| {
        let sw: Word = wd.iter().map(|&l| if l == a { b } else if l == b { a } else { l }).collect();
        f.terms().get(&sw).is_some_and(|c2| *c2 == -c.clone())
    })
}

fn alternating_layers(f: &MultilinearPoly, letters: &[Letter]) -> Vec<Vec<Letter>> {
    let mut layers: Vec<Vec<Letter>> = Vec::new();
    for &l in letters.iter().filter(|l| is_x(**l)) {
        match layers.iter_mut().find(|layer| layer.iter().all(|&m| swap_negates(f, l, m))) {
            Some(layer) => layer.push(l),
            None => layers.push(vec![l]),
        }
    }
    layers
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

/// Evaluates a word list (sorted) on an assignment, sharing prefix products.
pub(crate) struct WordEvaluator<'a> {
    alg: &'a FDAlgebra,
    terms: Vec<(&'a Word, &'a Q)>,
}

impl<'a> WordEvaluator<'a> {
    pub(crate) fn new(alg: &'a FDAlgebra, terms: &'a BTreeMap<Word, Q>) -> Self {
        WordEvaluator { alg, terms: terms.iter().collect() }
    }

    pub(crate) fn eval(&self, assign: &[usize; 256]) -> Terms {
        let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
        let mut stack: Vec<Terms> = Vec::new();
        let mut prev: &[Letter] = &[];
        for (wd, c) in &self.terms {
            let lcp = prev.iter().zip(wd.iter()).take_while(|(x, y)| x == y).count();
            stack.truncate(lcp);
            for &l in &wd[stack.len()..] {
                let j = assign[l as usize];
                let next = match stack.last() {
                    None => vec![(j, Q::from_integer(1.into()))],
                    Some(p) if p.is_empty() => Vec::new(),
                    Some(p) => right_mul_basis(self.alg, p, j),
                };
                stack.push(next);
            }
            prev = wd;
            match stack.last() {
                Some(p) => add_scaled(&mut acc, c, p),
                None => {
                    let u = self.alg.unit().expect("unit checked by caller");
                    for (i, x) in u.iter().enumerate() {
                        *acc.entry(i).or_insert_with(Q::zero) += *c * x;
                    }
                }
            }
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }
}

fn search_group(alg: &FDAlgebra, g: &MultilinearPoly, letters: &[Letter], opts: EvalOptions) -> Result<Option<Witness>> {
    let d = alg.dim();
    let (layers, free): (Vec<Vec<Letter>>, Vec<Letter>) = if opts.exploit_alternation {
        let layers: Vec<Vec<Letter>> = alternating_layers(g, letters).into_iter().filter(|l| l.len() > 1).collect();
        let free = letters.iter().copied().filter(|l| !layers.iter().any(|ly| ly.contains(l))).collect();
        (layers, free)
    } else {
        (Vec::new(), letters.to_vec())
    };
    let combos: Vec<Vec<Vec<usize>>> = layers.iter().map(|ly| combinations(d, ly.len())).collect();
    let mut radices: Vec<u128> = combos.iter().map(|c| c.len() as u128).collect();
    radices.extend(std::iter::repeat_n(d as u128, free.len()));
    let mut total: u128 = 1;
    for r in &radices {
        total = total.checked_mul(*r).ok_or_else(|| Error::TooLarge("evaluation space".into()))?;
    }
    if total == 0 {
        return Ok(None);
    }
    if total > 1u128 << 40 {
        return Err(Error::TooLarge(format!("{total} basis tuples")));
    }
    let total = total as u64;
    let ev = WordEvaluator::new(alg, g.terms());
    let decode = |mut idx: u64, assign: &mut [usize; 256]| {
        for (k, r) in radices.iter().enumerate().rev() {
            let digit = (idx % *r as u64) as usize;
            idx /= *r as u64;
            if k < layers.len() {
                for (l, &b) in layers[k].iter().zip(&combos[k][digit]) {
                    assign[*l as usize] = b;
                }
            } else {
                assign[free[k - layers.len()] as usize] = digit;
            }
        }
    };
    let scan = |lo: u64, hi: u64| -> Option<(u64, Terms)> {
        let mut assign = [0usize; 256];
        for idx in lo..hi {
            decode(idx, &mut assign);
            let v = ev.eval(&assign);
            if !v.is_empty() {
                return Some((idx, v));
            }
        }
        None
    };
    let workers = opts.workers.max(1) as u64;
    let found = if workers == 1 || total < 64 {
        scan(0, total)
    } else {
        let chunk = total.div_ceil(workers);
        std::thread::scope(|sc| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let scan = &scan;
                    sc.spawn(move || scan((w * chunk).min(total), ((w + 1) * chunk).min(total)))
                })
                .collect();
            handles.into_iter().filter_map(|h| h.join().expect("worker panicked")).min_by_key(|(i, _)| *i)
        })
    };
    Ok(found.map(|(idx, v)| {
        let mut assign = [0usize; 256];
        decode(idx, &mut assign);
        let assignment = letters.iter().map(|&l| (letter_name(l), assign[l as usize])).collect();
        let mut value = vec![Q::zero(); d];
        for (k, x) in v {
            value[k] = x;
        }
        Witness { assignment, basis: alg.basis_names().to_vec(), value }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{block_triangular, direct_sum, matrix_algebra, nilpotent_free};
    use crate::freealg::{alternate, capelli, capelli_list, x};
    use crate::rational::q;

    fn mp(s: &str) -> MultilinearPoly {
        MultilinearPoly::parse(s).unwrap()
    }

    #[test]
    fn commutators() {
        let comm = mp("x1 x2 - x2 x1");
        let qq = direct_sum(&matrix_algebra(1).unwrap(), &matrix_algebra(1).unwrap());
        assert!(is_identity(&qq, &comm).unwrap());
        let m2 = matrix_algebra(2).unwrap();
        let wit = find_nonvanishing(&m2, &comm, EvalOptions::default()).unwrap().unwrap();
        assert!(wit.value.iter().any(|c| !c.is_zero()));
    }

    #[test]
    fn capelli_on_matrices() {
        let m2 = matrix_algebra(2).unwrap();
        assert!(is_identity(&m2, &capelli(5)).unwrap());
        assert!(!is_identity(&m2, &capelli(4)).unwrap());
        assert!(is_identity(&matrix_algebra(1).unwrap(), &capelli(2)).unwrap());
        for f in capelli_list(5) {
            assert!(is_identity(&m2, &f).unwrap());
        }
    }

    #[test]
    fn alternation_shortcut_agrees_with_full_enumeration() {
        let naive = EvalOptions { exploit_alternation: false, ..Default::default() };
        let algs = [
            direct_sum(&matrix_algebra(1).unwrap(), &matrix_algebra(1).unwrap()),
            block_triangular(&[1, 1]).unwrap(),
            nilpotent_free(1, 2).unwrap(),
        ];
        for a in &algs {
            for m in 1..=a.dim() + 1 {
                if m > 4 {
                    break;
                }
                for f in capelli_list(m).iter().step_by(3) {
                    if f.terms().contains_key(&Word::new()) {
                        continue;
                    }
                    let fast = is_identity(a, f).unwrap();
                    let slow = is_identity_with(a, f, naive).unwrap();
                    assert_eq!(fast, slow, "m = {m}, f = {f}");
                }
            }
        }
    }

    #[test]
    fn workers_do_not_change_witness() {
        let m2 = matrix_algebra(2).unwrap();
        let f = capelli(4);
        let one = find_nonvanishing(&m2, &f, EvalOptions::default()).unwrap();
        let four = find_nonvanishing(&m2, &f, EvalOptions { workers: 4, ..Default::default() }).unwrap();
        assert_eq!(one, four);
    }

    #[test]
    fn unit_convention() {
        let nil = nilpotent_free(1, 2).unwrap();
        let f = MultilinearPoly::parse("1").unwrap();
        assert!(matches!(find_nonvanishing(&nil, &f, EvalOptions::default()), Err(Error::UnitRequired)));
        let opts = EvalOptions { unitalize: true, ..Default::default() };
        assert!(!is_identity_with(&nil, &f, opts).unwrap());
        // a frame variable set to 1 needs no unit
        let g = capelli(1).specialize(0b11);
        assert_eq!(g.to_string(), "x1");
        assert!(!is_identity(&nil, &g).unwrap());
    }

    #[test]
    fn evaluate_general_elements() {
        let m2 = matrix_algebra(2).unwrap();
        let f = FreePoly::parse("x1 x2 - x2 x1").unwrap();
        let vals = BTreeMap::from([(x(1), vec![q(1), q(2), q(0), q(3)]), (x(2), vec![q(0), q(1), q(1), q(0)])]);
        let v = evaluate(&m2, &f, &vals).unwrap();
        assert!(v.iter().any(|c| !c.is_zero()));
        let alt = alternate(&mp("x1 x2 x3"), &[x(1), x(2), x(3)]).unwrap();
        let qq = direct_sum(&matrix_algebra(1).unwrap(), &matrix_algebra(1).unwrap());
        assert!(is_identity(&qq, &alt).unwrap());
    }
}
