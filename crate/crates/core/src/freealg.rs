//! Noncommutative polynomials: multilinear spaces `V_n`, Capelli polynomials,
//! alternation in layers, and the layered spaces `M_{mu,t,s}`.
//!
//! A monomial is a word of letter codes: `x_i` is `i` (1..=99), `w_j` is
//! `100 + j`, and `0` marks a 1-slot, which normalization deletes.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::perm::{next_permutation, permutations, sign};
use crate::rational::{format_q, parse_q, q, Q};

pub type Letter = u8;
pub type Word = Vec<Letter>;

pub const ONE: Letter = 0;
const W_BASE: Letter = 100;
pub const MAX_X: usize = 99;
pub const MAX_W: usize = 155;
/// Largest `N = mu t + s (t + 1)` accepted for layered spaces.
pub const MAX_LAYERED_N: usize = 20;

pub fn x(i: usize) -> Letter {
    assert!((1..=MAX_X).contains(&i), "x index out of range");
    i as Letter
}

pub fn w(j: usize) -> Letter {
    assert!((1..=MAX_W).contains(&j), "w index out of range");
    W_BASE + j as Letter
}

pub fn is_x(l: Letter) -> bool {
    l != ONE && l < W_BASE
}

pub fn is_w(l: Letter) -> bool {
    l > W_BASE
}

pub fn letter_name(l: Letter) -> String {
    if l == ONE {
        "1".into()
    } else if is_x(l) {
        format!("x{l}")
    } else {
        format!("w{}", l - W_BASE)
    }
}

fn parse_letter(tok: &str) -> Option<Letter> {
    let (kind, num) = tok.split_at(1);
    let k: usize = num.parse().ok()?;
    match kind {
        "x" if (1..=MAX_X).contains(&k) => Some(x(k)),
        "w" if (1..=MAX_W).contains(&k) => Some(w(k)),
        _ => None,
    }
}

/// A polynomial in the free algebra with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FreePoly {
    terms: BTreeMap<Word, Q>,
}

impl FreePoly {
    pub fn zero() -> Self {
        FreePoly::default()
    }

    pub fn one() -> Self {
        Self::monomial(Vec::new(), Q::one())
    }

    pub fn monomial(word: Word, c: Q) -> Self {
        let mut p = FreePoly::zero();
        p.add_term(word, c);
        p
    }

    pub fn letter(l: Letter) -> Self {
        Self::monomial(vec![l], Q::one())
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Word, Q)>) -> Self {
        let mut p = FreePoly::zero();
        for (wd, c) in it {
            p.add_term(wd, c);
        }
        p
    }

    /// Adds `c * word`, deleting 1-slots from the word.
    pub fn add_term(&mut self, mut word: Word, c: Q) {
        if c.is_zero() {
            return;
        }
        word.retain(|&l| l != ONE);
        let e = self.terms.entry(word).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn terms(&self) -> &BTreeMap<Word, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> Q {
        self.terms.get(&Vec::new()).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add(&self, other: &FreePoly) -> FreePoly {
        let mut out = self.clone();
        for (wd, c) in &other.terms {
            out.add_term(wd.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> FreePoly {
        FreePoly::from_terms(self.terms.iter().map(|(wd, x)| (wd.clone(), x * c)))
    }

    pub fn mul(&self, other: &FreePoly) -> FreePoly {
        let mut out = FreePoly::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term([u.as_slice(), v.as_slice()].concat(), a * b);
            }
        }
        out
    }

    /// Replaces each letter in `assignment` by its image; other letters stay.
    pub fn substitute(&self, assignment: &BTreeMap<Letter, FreePoly>) -> FreePoly {
        let mut out = FreePoly::zero();
        for (wd, c) in &self.terms {
            let mut acc = FreePoly::monomial(Vec::new(), c.clone());
            for l in wd {
                let img = assignment.get(l).cloned().unwrap_or_else(|| FreePoly::letter(*l));
                acc = acc.mul(&img);
                if acc.is_zero() {
                    break;
                }
            }
            out = out.add(&acc);
        }
        out
    }

    /// Parses the text format, e.g. `w1 x1 w2 x2 w3 - 3/2 w1 x2 w2 x1 w3`.
    pub fn parse(s: &str) -> Result<FreePoly> {
        let mut out = FreePoly::zero();
        let mut sign = Q::one();
        let mut coef: Option<Q> = None;
        let mut word: Word = Vec::new();
        let mut open = false;
        let flush = |out: &mut FreePoly, sign: &Q, coef: &mut Option<Q>, word: &mut Word| {
            let c = coef.take().unwrap_or_else(Q::one) * sign;
            out.add_term(std::mem::take(word), c);
        };
        for tok in s.split_whitespace() {
            match tok {
                "+" | "-" => {
                    if open {
                        flush(&mut out, &sign, &mut coef, &mut word);
                        open = false;
                    } else if coef.is_some() || !word.is_empty() || sign != Q::one() {
                        return Err(Error::Parse(format!("dangling sign in `{s}`")));
                    }
                    sign = if tok == "-" { -Q::one() } else { Q::one() };
                }
                _ => {
                    if let Some(l) = parse_letter(tok) {
                        word.push(l);
                        open = true;
                    } else if tok.starts_with(|c: char| c.is_ascii_digit() || c == '-' || c == '+') {
                        if !word.is_empty() || coef.is_some() {
                            return Err(Error::Parse(format!("coefficient `{tok}` must start a term")));
                        }
                        coef = Some(parse_q(tok)?);
                        open = true;
                    } else {
                        return Err(Error::Parse(format!("unknown token `{tok}`")));
                    }
                }
            }
        }
        if open {
            flush(&mut out, &sign, &mut coef, &mut word);
        } else if sign != Q::one() || s.trim().is_empty() {
            return Err(Error::Parse(format!("incomplete polynomial `{s}`")));
        }
        Ok(out)
    }

    /// Checks multilinearity and converts; `n` and `frame` are inferred when
    /// `None`.
    pub fn to_multilinear(&self, n: Option<usize>, frame: Option<usize>) -> Result<MultilinearPoly> {
        let letters = || self.terms.keys().flatten().copied();
        let n = n.unwrap_or_else(|| letters().filter(|&l| is_x(l)).max().unwrap_or(0) as usize);
        let frame = frame.unwrap_or_else(|| letters().filter(|&l| is_w(l)).map(|l| (l - W_BASE) as usize).max().unwrap_or(0));
        MultilinearPoly::new(n, frame, self.terms.clone())
    }
}

fn write_terms<'a>(f: &mut fmt::Formatter<'_>, terms: impl Iterator<Item = (&'a Word, &'a Q)>) -> fmt::Result {
    let mut first = true;
    for (wd, c) in terms {
        let neg = c.is_negative();
        if first {
            if neg {
                f.write_str("-")?;
            }
        } else {
            f.write_str(if neg { " - " } else { " + " })?;
        }
        let a = c.abs();
        let mut parts: Vec<String> = Vec::new();
        if !a.is_one() || wd.is_empty() {
            parts.push(format_q(&a));
        }
        parts.extend(wd.iter().map(|&l| letter_name(l)));
        f.write_str(&parts.join(" "))?;
        first = false;
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

impl fmt::Display for FreePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms.iter())
    }
}

/// A polynomial in which every monomial contains each of `x_1..x_n` exactly
/// once and each of `w_1..w_frame` at most once.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MultilinearPoly {
    n: usize,
    frame: usize,
    terms: BTreeMap<Word, Q>,
}

impl MultilinearPoly {
    pub fn new(n: usize, frame: usize, terms: BTreeMap<Word, Q>) -> Result<Self> {
        if n > MAX_X || frame > MAX_W {
            return Err(Error::InvalidParams(format!("at most {MAX_X} x- and {MAX_W} w-variables")));
        }
        let mut clean = BTreeMap::new();
        for (mut wd, c) in terms {
            if c.is_zero() {
                continue;
            }
            wd.retain(|&l| l != ONE);
            let mut xs = vec![0u8; n + 1];
            let mut ws = vec![0u8; frame + 1];
            for &l in &wd {
                if is_x(l) {
                    let i = l as usize;
                    if i > n {
                        return Err(Error::InvalidParams(format!("x{i} exceeds n = {n}")));
                    }
                    xs[i] += 1;
                } else {
                    let j = (l - W_BASE) as usize;
                    if j > frame {
                        return Err(Error::InvalidParams(format!("w{j} exceeds the frame size {frame}")));
                    }
                    ws[j] += 1;
                }
            }
            if xs[1..].iter().any(|&k| k != 1) || ws.iter().any(|&k| k > 1) {
                return Err(Error::InvalidParams(format!("term `{}` is not multilinear", FreePoly::monomial(wd, c))));
            }
            let e = clean.entry(wd).or_insert_with(Q::zero);
            *e += c;
        }
        clean.retain(|_, c: &mut Q| !c.is_zero());
        Ok(MultilinearPoly { n, frame, terms: clean })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn frame(&self) -> usize {
        self.frame
    }

    pub fn terms(&self) -> &BTreeMap<Word, Q> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn to_free(&self) -> FreePoly {
        FreePoly { terms: self.terms.clone() }
    }

    pub fn parse(s: &str) -> Result<Self> {
        FreePoly::parse(s)?.to_multilinear(None, None)
    }

    pub fn substitute(&self, assignment: &BTreeMap<Letter, FreePoly>) -> FreePoly {
        self.to_free().substitute(assignment)
    }

    pub fn scale(&self, c: &Q) -> Self {
        let terms = if c.is_zero() {
            BTreeMap::new()
        } else {
            self.terms.iter().map(|(wd, x)| (wd.clone(), x * c)).collect()
        };
        MultilinearPoly { n: self.n, frame: self.frame, terms }
    }

    /// Sets the frame variables in `mask` (bit `j - 1` for `w_j`) to 1.
    pub fn specialize(&self, mask: u64) -> Self {
        let keep = |l: &Letter| !(is_w(*l) && mask >> (*l - W_BASE - 1) & 1 == 1);
        let terms = self.terms.iter().map(|(wd, c)| (wd.iter().copied().filter(keep).collect(), c.clone()));
        MultilinearPoly::new(self.n, self.frame, terms.collect()).expect("specialization keeps multilinearity")
    }

    /// Whether exchanging any two letters of `layer` negates the polynomial.
    pub fn is_alternating(&self, layer: &[Letter]) -> bool {
        for i in 0..layer.len() {
            for j in i + 1..layer.len() {
                let swapped = self.rename(|l| {
                    if l == layer[i] {
                        layer[j]
                    } else if l == layer[j] {
                        layer[i]
                    } else {
                        l
                    }
                });
                if swapped != self.scale(&-Q::one()) {
                    return false;
                }
            }
        }
        true
    }

    fn rename(&self, f: impl Fn(Letter) -> Letter) -> Self {
        let mut terms = BTreeMap::new();
        for (wd, c) in &self.terms {
            let e = terms.entry(wd.iter().map(|&l| f(l)).collect::<Word>()).or_insert_with(Q::zero);
            *e += c;
        }
        terms.retain(|_, c: &mut Q| !c.is_zero());
        MultilinearPoly { n: self.n, frame: self.frame, terms }
    }
}

impl fmt::Display for MultilinearPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms.iter())
    }
}

/// `sum_sigma sign(sigma) w_1 x_sigma(1) w_2 ... x_sigma(m) w_{m+1}`.
pub fn capelli(m: usize) -> MultilinearPoly {
    assert!(m >= 1 && m < MAX_W, "capelli degree out of range");
    let mut terms = BTreeMap::new();
    for p in permutations(m) {
        let mut wd = Vec::with_capacity(2 * m + 1);
        for (k, &i) in p.iter().enumerate() {
            wd.push(w(k + 1));
            wd.push(x(i as usize + 1));
        }
        wd.push(w(m + 1));
        terms.insert(wd, q(sign(&p)));
    }
    MultilinearPoly { n: m, frame: m + 1, terms }
}

/// `C_m` and all its specializations of frame variables to 1, indexed by the
/// subset mask (mask 0 is `C_m` itself); `2^{m+1}` polynomials.
pub fn capelli_list(m: usize) -> Vec<MultilinearPoly> {
    let c = capelli(m);
    (0u64..1 << (m + 1)).map(|mask| c.specialize(mask)).collect()
}

/// `sum_sigma sign(sigma) f(layer permuted by sigma)`.
pub fn alternate(f: &MultilinearPoly, layer: &[Letter]) -> Result<MultilinearPoly> {
    for (wd, _) in &f.terms {
        for l in layer {
            if wd.iter().filter(|&&c| c == *l).count() != 1 {
                return Err(Error::NotMultilinearInLayer(format!(
                    "{} does not occur exactly once in every term",
                    letter_name(*l)
                )));
            }
        }
    }
    let mut pos = [usize::MAX; 256];
    for (i, &l) in layer.iter().enumerate() {
        pos[l as usize] = i;
    }
    let mut terms: BTreeMap<Word, Q> = BTreeMap::new();
    for p in permutations(layer.len()) {
        let s = q(sign(&p));
        for (wd, c) in &f.terms {
            let img: Word = wd
                .iter()
                .map(|&l| match pos[l as usize] {
                    usize::MAX => l,
                    i => layer[p[i] as usize],
                })
                .collect();
            *terms.entry(img).or_insert_with(Q::zero) += c * &s;
        }
    }
    terms.retain(|_, c| !c.is_zero());
    Ok(MultilinearPoly { n: f.n, frame: f.frame, terms })
}

fn layered_n(mu: usize, t: usize, s: usize) -> Result<usize> {
    let n = mu
        .checked_mul(t)
        .and_then(|a| s.checked_mul(t + 1).and_then(|b| a.checked_add(b)))
        .ok_or_else(|| Error::Overflow("layer sizes overflow".into()))?;
    if n > MAX_LAYERED_N {
        return Err(Error::Overflow(format!("N = {n} exceeds the bound {MAX_LAYERED_N}")));
    }
    Ok(n)
}

/// `N! / (t!^mu (t+1)!^s)` with `N = mu t + s (t + 1)`.
pub fn layered_space_dim(mu: usize, t: usize, s: usize) -> Result<u128> {
    let n = layered_n(mu, t, s)?;
    let fact = |k: usize| (1..=k as u128).product::<u128>();
    let den = fact(t).pow(mu as u32) * fact(t + 1).pow(s as u32);
    Ok(fact(n) / den)
}

/// Layers of `M_{mu,t,s}`: small layers first, each a run of consecutive
/// variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerScheme {
    pub mu: usize,
    pub t: usize,
    pub s: usize,
    pub layers: Vec<Vec<Letter>>,
}

impl LayerScheme {
    pub fn new(mu: usize, t: usize, s: usize) -> Result<Self> {
        let n = layered_n(mu, t, s)?;
        let mut layers = Vec::new();
        let mut next = 1;
        for k in 0..mu + s {
            let size = if k < mu { t } else { t + 1 };
            layers.push((next..next + size).map(x).collect());
            next += size;
        }
        debug_assert_eq!(next - 1, n);
        Ok(LayerScheme { mu, t, s, layers })
    }

    pub fn n(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    pub fn layer_size(&self, k: usize) -> usize {
        self.layers[k].len()
    }

    /// The sorted label word with every layer id repeated by its size.
    pub fn first_label(&self) -> Vec<u8> {
        self.layers.iter().enumerate().flat_map(|(k, l)| std::iter::repeat_n(k as u8, l.len())).collect()
    }

    /// The alternated monomial `w_1 y_1 w_2 ... y_N w_{N+1}` whose `p`-th
    /// variable comes from layer `label[p]`, with `mask` frame variables set
    /// to 1.
    pub fn generator(&self, label: &[u8], mask: u64) -> Result<MultilinearPoly> {
        let n = self.n();
        let mut used = vec![0usize; self.layers.len()];
        let mut wd = Vec::with_capacity(2 * n + 1);
        for (p, &k) in label.iter().enumerate() {
            wd.push(w(p + 1));
            wd.push(self.layers[k as usize][used[k as usize]]);
            used[k as usize] += 1;
        }
        wd.push(w(n + 1));
        let mut f = MultilinearPoly::new(n, n + 1, BTreeMap::from([(wd, Q::one())]))?;
        for layer in &self.layers {
            f = alternate(&f, layer)?;
        }
        Ok(f.specialize(mask))
    }

    /// Spanning set of `M_{mu,t,s}`: label words in lexicographic order, each
    /// followed by its frame specializations in increasing mask order.
    pub fn generators(&self, policy: FramePolicy) -> LayeredGenerators<'_> {
        LayeredGenerators { scheme: self, label: Some(self.first_label()), mask: 0, policy }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FramePolicy {
    /// Only the unspecialized polynomials.
    KeepAll,
    /// Every subset of the `N + 1` frame variables set to 1.
    AllSubsets,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredGenerator {
    pub label: Vec<u8>,
    pub mask: u64,
    pub poly: MultilinearPoly,
}

pub struct LayeredGenerators<'a> {
    scheme: &'a LayerScheme,
    label: Option<Vec<u8>>,
    mask: u64,
    policy: FramePolicy,
}

impl Iterator for LayeredGenerators<'_> {
    type Item = LayeredGenerator;

    fn next(&mut self) -> Option<LayeredGenerator> {
        let label = self.label.clone()?;
        let mask = self.mask;
        let poly = self.scheme.generator(&label, mask).expect("scheme validated on construction");
        let masks = match self.policy {
            FramePolicy::KeepAll => 1,
            FramePolicy::AllSubsets => 1u64 << (self.scheme.n() + 1),
        };
        if mask + 1 < masks {
            self.mask += 1;
        } else {
            self.mask = 0;
            let mut l = label.clone();
            self.label = next_permutation(&mut l).then_some(l);
        }
        Some(LayeredGenerator { label, mask, poly })
    }
}

/// Number of label words, as an exact integer.
pub fn label_count(scheme: &LayerScheme) -> BigInt {
    let fact = |k: usize| (1..=k).fold(BigInt::one(), |a, i| a * i);
    let den = scheme.layers.iter().fold(BigInt::one(), |a, l| a * fact(l.len()));
    fact(scheme.n()) / den
}

pub fn label_count_u64(scheme: &LayerScheme) -> Option<u64> {
    label_count(scheme).to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mp(s: &str) -> MultilinearPoly {
        MultilinearPoly::parse(s).unwrap()
    }

    #[test]
    fn capelli_polynomials() {
        assert_eq!(capelli(1).to_string(), "w1 x1 w2");
        assert_eq!(capelli(2), mp("w1 x1 w2 x2 w3 - w1 x2 w2 x1 w3"));
        for m in 1..=5 {
            assert_eq!(capelli(m).len(), (1..=m).product::<usize>());
        }
    }

    #[test]
    fn capelli_lists() {
        assert_eq!(capelli_list(1).len(), 4);
        let l2 = capelli_list(2);
        assert_eq!(l2.len(), 8);
        assert_eq!(l2[0], capelli(2));
        assert_eq!(l2[7].to_string(), "x1 x2 - x2 x1");
    }

    #[test]
    fn alternation() {
        let f = mp("x1 x2");
        assert_eq!(alternate(&f, &[x(1), x(2)]).unwrap(), mp("x1 x2 - x2 x1"));
        let sym = mp("x1 x2 + x2 x1");
        assert!(alternate(&sym, &[x(1), x(2)]).unwrap().is_zero());
        let g = mp("x1 x2 x3 + 2 x3 x1 x2 - x2 w1 x1 x3");
        let layer = [x(1), x(2), x(3)];
        let a = alternate(&g, &layer).unwrap();
        assert!(a.is_alternating(&layer));
        assert_eq!(alternate(&a, &layer).unwrap(), a.scale(&q(6)));
        let bad = MultilinearPoly::parse("x1 w1 x2").unwrap();
        assert!(matches!(alternate(&bad, &[w(1), w(2)]), Err(Error::NotMultilinearInLayer(_))));
        for m in 1..=4 {
            let mut wd = Vec::new();
            for k in 1..=m {
                wd.push(w(k));
                wd.push(x(k));
            }
            wd.push(w(m + 1));
            let mono = MultilinearPoly::new(m, m + 1, BTreeMap::from([(wd, q(1))])).unwrap();
            let layer: Vec<Letter> = (1..=m).map(x).collect();
            assert_eq!(alternate(&mono, &layer).unwrap(), capelli(m));
        }
    }

    #[test]
    fn text_round_trip() {
        for s in ["w1 x2 w2 x1 w3", "3/2 x1 x2 - x2 x1", "-2 x1", "0", "1", "-1/3 + x1"] {
            let p = FreePoly::parse(s).unwrap();
            assert_eq!(FreePoly::parse(&p.to_string()).unwrap(), p);
        }
        assert_eq!(FreePoly::parse("x1 x2 - x2 x1").unwrap().to_string(), "x1 x2 - x2 x1");
        assert!(FreePoly::parse("x1 2").is_err());
        assert!(FreePoly::parse("y1").is_err());
        assert!(FreePoly::parse("x1 -").is_err());
        assert!(MultilinearPoly::parse("x1 x1").is_err());
    }

    #[test]
    fn substitution() {
        let f = mp("x1 x2 - x2 x1");
        let id = BTreeMap::from([(x(1), FreePoly::letter(x(1)))]);
        assert_eq!(f.substitute(&id), f.to_free());
        let one = BTreeMap::from([(x(2), FreePoly::one())]);
        assert!(f.substitute(&one).is_zero());
        let g = mp("x1 x2");
        let prod = BTreeMap::from([(x(1), FreePoly::parse("x3 x4").unwrap())]);
        assert_eq!(g.substitute(&prod), FreePoly::parse("x3 x4 x2").unwrap());
    }

    #[test]
    fn layered_dims_and_streams() {
        assert_eq!(layered_space_dim(1, 1, 0).unwrap(), 1);
        assert_eq!(layered_space_dim(2, 1, 0).unwrap(), 2);
        assert_eq!(layered_space_dim(1, 2, 0).unwrap(), 1);
        assert!(matches!(layered_space_dim(7, 3, 0), Err(Error::Overflow(_))));
        let sch = LayerScheme::new(1, 1, 0).unwrap();
        let all: Vec<_> = sch.generators(FramePolicy::KeepAll).collect();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].poly.to_string(), "w1 x1 w2");
        let sch = LayerScheme::new(2, 1, 0).unwrap();
        let all: Vec<_> = sch.generators(FramePolicy::AllSubsets).collect();
        assert_eq!(all.len(), 2 * 8);
        for mask in 0..8 {
            assert_eq!(all.iter().filter(|g| g.mask == mask).count(), 2);
        }
        for mu in 0..=3 {
            for t in 0..=3 {
                for s in 0..=2 {
                    let Ok(sch) = LayerScheme::new(mu, t, s) else { continue };
                    if sch.n() > 8 {
                        continue;
                    }
                    let mut count = 0u128;
                    for g in sch.generators(FramePolicy::KeepAll) {
                        count += 1;
                        if count <= 20 {
                            for layer in &sch.layers {
                                assert!(g.poly.is_alternating(layer));
                            }
                        }
                    }
                    assert_eq!(count, layered_space_dim(mu, t, s).unwrap(), "mu={mu} t={t} s={s}");
                }
            }
        }
    }
}
