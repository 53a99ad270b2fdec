//! Rational series `p(t) / prod (1 - t^h)`: expansion, pole order at 1,
//! quasi-polynomial coefficients and fitting of integer prefixes.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::Q;
use crate::upoly::UPoly;

type IPoly = Vec<BigInt>;

fn trim(p: &mut IPoly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn mul(a: &[BigInt], b: &[BigInt]) -> IPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn one_minus(h: usize) -> IPoly {
    let mut p = vec![BigInt::zero(); h + 1];
    p[0] = BigInt::one();
    p[h] = -BigInt::one();
    p
}

/// Exact quotient by `1 - t^h`, if it divides.
fn div_one_minus(p: &[BigInt], h: usize) -> Option<IPoly> {
    // p = (1 - t^h) q  <=>  q_k = p_k + q_{k-h}
    if p.is_empty() {
        return Some(Vec::new());
    }
    if p.len() <= h {
        return None;
    }
    let qlen = p.len() - h;
    let mut q = vec![BigInt::zero(); qlen];
    for k in 0..qlen {
        q[k] = &p[k] + if k >= h { q[k - h].clone() } else { BigInt::zero() };
    }
    for k in qlen..p.len() {
        let lhs = if k >= h && k - h < qlen { -q[k - h].clone() } else { BigInt::zero() };
        let lhs = lhs + if k < qlen { q[k].clone() } else { BigInt::zero() };
        if lhs != p[k] {
            return None;
        }
    }
    Some(q)
}

/// `numerator / prod_j (1 - t^{h_j})`, normalized so that no factor
/// `1 - t^h` of the denominator divides the numerator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceRational {
    numerator: IPoly,
    exponents: Vec<usize>,
}

impl NiceRational {
    pub fn new(numerator: Vec<BigInt>, exponents: Vec<usize>) -> Result<Self> {
        if exponents.contains(&0) {
            return Err(Error::InvalidParams("denominator exponents must be positive".into()));
        }
        let mut num = numerator;
        trim(&mut num);
        let mut exps = exponents;
        exps.sort_unstable();
        if num.is_empty() {
            exps.clear();
        }
        let mut changed = true;
        while changed {
            changed = false;
            for i in 0..exps.len() {
                if let Some(q) = div_one_minus(&num, exps[i]) {
                    num = q;
                    exps.remove(i);
                    changed = true;
                    break;
                }
            }
        }
        Ok(NiceRational { numerator: num, exponents: exps })
    }

    pub fn from_i64(numerator: &[i64], exponents: &[usize]) -> Result<Self> {
        Self::new(numerator.iter().map(|&c| BigInt::from(c)).collect(), exponents.to_vec())
    }

    pub fn numerator(&self) -> &[BigInt] {
        &self.numerator
    }

    pub fn exponents(&self) -> &[usize] {
        &self.exponents
    }

    /// First `count` coefficients.
    pub fn expand(&self, count: usize) -> Vec<BigInt> {
        let mut c: Vec<BigInt> = (0..count).map(|k| self.numerator.get(k).cloned().unwrap_or_default()).collect();
        for &h in &self.exponents {
            for k in h..count {
                let prev = c[k - h].clone();
                c[k] += prev;
            }
        }
        c
    }

    /// Order of the pole at `t = 1`.
    pub fn dimension(&self) -> usize {
        if self.numerator.is_empty() {
            return 0;
        }
        let mut p = self.numerator.clone();
        let mut root_mult = 0;
        while let Some(q) = div_one_minus(&p, 1) {
            p = q;
            root_mult += 1;
        }
        self.exponents.len().saturating_sub(root_mult)
    }

    pub fn quasi_polynomial(&self) -> QuasiPolynomial {
        let n = self.exponents.len();
        let m = self.exponents.iter().fold(1usize, |acc, &h| acc.lcm(&h));
        // bring every factor to 1 - t^m
        let mut p = self.numerator.clone();
        for &h in &self.exponents {
            let mut s = vec![BigInt::zero(); m - h + 1];
            for k in (0..=m - h).step_by(h) {
                s[k] = BigInt::one();
            }
            p = mul(&p, &s);
        }
        let mut den = vec![BigInt::one()];
        for _ in 0..n {
            den = mul(&den, &one_minus(m));
        }
        // p = quot * den + rem, deg rem < m n; den has leading coefficient +-1
        let mut rem = p;
        let dd = den.len() - 1;
        let mut quot = vec![BigInt::zero(); rem.len().saturating_sub(dd)];
        let lead = den[dd].clone();
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let c = &rem[rem.len() - 1] * &lead; // lead is a unit
            for (i, d) in den.iter().enumerate() {
                rem[k + i] -= &c * d;
            }
            quot[k] = c;
            trim(&mut rem);
        }
        trim(&mut quot);
        let valid_from = quot.len();
        let mut polys = vec![UPoly::zero(); m];
        for (j, r) in rem.iter().enumerate() {
            if r.is_zero() || n == 0 {
                continue;
            }
            // r t^j / (1 - t^m)^n contributes r binom((k - j)/m + n - 1, n - 1) at k = j mod m
            let mq = Q::from_integer(BigInt::from(m));
            let mut term = UPoly::constant(Q::from_integer(r.clone()));
            for i in 1..n {
                // ((k - j)/m + i) / i
                let lin = UPoly::new(vec![
                    (Q::from_integer(BigInt::from(i)) - Q::from_integer(BigInt::from(j)) / &mq) / Q::from_integer(BigInt::from(i)),
                    Q::one() / (&mq * Q::from_integer(BigInt::from(i))),
                ]);
                term = &term * &lin;
            }
            polys[j % m] = &polys[j % m] + &term;
        }
        QuasiPolynomial { modulus: m, polynomials: polys, valid_from }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "numerator": self.numerator.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "denominator": self.exponents,
        })
    }

    /// Accepts integers or integer strings for the numerator.
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let bad = || Error::Parse("expected {\"numerator\": [...], \"denominator\": [...]}".into());
        let num = v.get("numerator").and_then(|x| x.as_array()).ok_or_else(bad)?;
        let num: Vec<BigInt> = num
            .iter()
            .map(|c| match c {
                serde_json::Value::Number(n) => n.as_i64().map(BigInt::from),
                serde_json::Value::String(s) => s.parse().ok(),
                _ => None,
            })
            .collect::<Option<_>>()
            .ok_or_else(bad)?;
        let den = v.get("denominator").and_then(|x| x.as_array()).ok_or_else(bad)?;
        let den: Vec<usize> = den.iter().map(|h| h.as_u64().map(|h| h as usize)).collect::<Option<_>>().ok_or_else(bad)?;
        Self::new(num, den)
    }
}

impl fmt::Display for NiceRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, c) in self.numerator.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mon = match k {
                0 => String::new(),
                1 => "t".into(),
                _ => format!("t^{k}"),
            };
            let s = match (c.abs().is_one(), k) {
                (true, 0) => c.abs().to_string(),
                (true, _) => mon,
                (false, 0) => c.abs().to_string(),
                (false, _) => format!("{}*{mon}", c.abs()),
            };
            parts.push((c.is_negative(), s));
        }
        let mut num = String::new();
        for (i, (neg, s)) in parts.iter().enumerate() {
            match (i, neg) {
                (0, true) => num.push_str(&format!("-{s}")),
                (0, false) => num.push_str(s),
                (_, true) => num.push_str(&format!(" - {s}")),
                (_, false) => num.push_str(&format!(" + {s}")),
            }
        }
        if num.is_empty() {
            num = "0".into();
        }
        if self.exponents.is_empty() {
            return write!(f, "{num}");
        }
        let den: String =
            self.exponents.iter().map(|&h| if h == 1 { "(1-t)".to_string() } else { format!("(1-t^{h})") }).collect();
        write!(f, "({num})/{den}")
    }
}

/// `value(k) = polynomials[k mod modulus](k)` for `k >= valid_from`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiPolynomial {
    pub modulus: usize,
    pub polynomials: Vec<UPoly>,
    pub valid_from: usize,
}

impl QuasiPolynomial {
    pub fn value(&self, k: usize) -> Q {
        self.polynomials[k % self.modulus].eval(&Q::from_integer(BigInt::from(k)))
    }

    /// Largest degree over the residue classes; `None` if all vanish.
    pub fn degree(&self) -> Option<usize> {
        self.polynomials.iter().filter_map(UPoly::degree).max()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let polys: Vec<Vec<String>> =
            self.polynomials.iter().map(|p| p.coeffs().iter().map(crate::rational::format_q).collect()).collect();
        serde_json::json!({"modulus": self.modulus, "valid_from": self.valid_from, "polynomials": polys})
    }
}

pub const DEFAULT_FIT_MARGIN: usize = 5;

/// Numerator `p` with `p / prod(1 - t^h)` reproducing `prefix`, taking
/// `deg p < len - margin` and requiring the last `margin` terms to agree.
/// `Ok(None)` when no such numerator exists.
pub fn fit(prefix: &[BigInt], exponents: &[usize], margin: usize) -> Result<Option<NiceRational>> {
    if prefix.len() <= margin {
        return Err(Error::InsufficientData(format!(
            "a prefix of length {} leaves nothing beyond the margin {margin}",
            prefix.len()
        )));
    }
    if exponents.contains(&0) {
        return Err(Error::InvalidParams("denominator exponents must be positive".into()));
    }
    let mut den = vec![BigInt::one()];
    for &h in exponents {
        den = mul(&den, &one_minus(h));
    }
    let l = prefix.len();
    let prod: Vec<BigInt> = (0..l)
        .map(|k| (0..=k.min(den.len().saturating_sub(1))).map(|i| &den[i] * &prefix[k - i]).sum())
        .collect();
    let free = l - margin;
    if prod[free..].iter().any(|c| !c.is_zero()) {
        return Ok(None);
    }
    Ok(Some(NiceRational::new(prod[..free].to_vec(), exponents.to_vec())?))
}

pub fn fit_i64(prefix: &[i64], exponents: &[usize], margin: usize) -> Result<Option<NiceRational>> {
    fit(&prefix.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>(), exponents, margin)
}

/// Several-variable `p(t) / prod_j (1 - t^{n_j})`, expanded over a box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiNiceRational {
    pub vars: usize,
    pub numerator: BTreeMap<Vec<usize>, BigInt>,
    pub denominators: Vec<Vec<usize>>,
}

impl MultiNiceRational {
    pub fn new(vars: usize, numerator: BTreeMap<Vec<usize>, BigInt>, denominators: Vec<Vec<usize>>) -> Result<Self> {
        if numerator.keys().chain(&denominators).any(|e| e.len() != vars) {
            return Err(Error::DimensionMismatch { expected: vars, got: 0 });
        }
        if denominators.iter().any(|e| e.iter().all(|&x| x == 0)) {
            return Err(Error::InvalidParams("denominator monomials must be nonconstant".into()));
        }
        Ok(MultiNiceRational { vars, numerator, denominators })
    }

    /// Coefficients of all monomials with exponents `<= bound` componentwise.
    pub fn expand(&self, bound: &[usize]) -> BTreeMap<Vec<usize>, BigInt> {
        let fits = |e: &[usize]| e.iter().zip(bound).all(|(a, b)| a <= b);
        let mut c: BTreeMap<Vec<usize>, BigInt> =
            self.numerator.iter().filter(|(e, v)| fits(e) && !v.is_zero()).map(|(e, v)| (e.clone(), v.clone())).collect();
        for d in &self.denominators {
            // multiply by 1/(1 - t^d): process monomials in increasing order
            let mut all: Vec<Vec<usize>> = box_points(bound);
            all.sort_by_key(|e| e.iter().sum::<usize>());
            for e in all {
                if e.iter().zip(d).any(|(a, b)| a < b) {
                    continue;
                }
                let prev: Vec<usize> = e.iter().zip(d).map(|(a, b)| a - b).collect();
                if let Some(v) = c.get(&prev).cloned() {
                    *c.entry(e).or_insert_with(BigInt::zero) += v;
                }
            }
        }
        c.retain(|_, v| !v.is_zero());
        c
    }
}

fn box_points(bound: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &b in bound {
        out = out.into_iter().flat_map(|p| (0..=b).map(move |i| [p.clone(), vec![i]].concat())).collect();
    }
    out
}

/// Converts integer coefficients to `i64` where they fit.
pub fn to_i64_vec(c: &[BigInt]) -> Option<Vec<i64>> {
    c.iter().map(|x| x.to_i64()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nr(num: &[i64], den: &[usize]) -> NiceRational {
        NiceRational::from_i64(num, den).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn expansions() {
        assert_eq!(nr(&[1], &[1]).expand(5), ints(&[1, 1, 1, 1, 1]));
        assert_eq!(nr(&[1], &[1, 2]).expand(6), ints(&[1, 1, 2, 2, 3, 3]));
        let c = nr(&[1, -1], &[1]);
        assert_eq!(c.expand(4), ints(&[1, 0, 0, 0]));
        assert!(c.exponents().is_empty());
    }

    #[test]
    fn dimensions() {
        assert_eq!(nr(&[1], &[1]).dimension(), 1);
        assert_eq!(nr(&[1], &[1, 2]).dimension(), 2);
        assert_eq!(nr(&[1, 1], &[2]).dimension(), 1);
        assert_eq!(nr(&[1, -1], &[2]).dimension(), 0);
    }

    #[test]
    fn quasi_polynomials() {
        let f = nr(&[1], &[1, 2]);
        let qp = f.quasi_polynomial();
        assert_eq!(qp.modulus, 2);
        assert_eq!(qp.degree(), Some(1));
        for k in 0..20 {
            assert_eq!(qp.value(k), Q::from_integer(BigInt::from(k / 2 + 1)));
        }
        let g = nr(&[1], &[1, 1]).quasi_polynomial();
        assert_eq!(g.modulus, 1);
        assert_eq!(g.polynomials[0], UPoly::from_i64(&[1, 1]));
        let h = nr(&[1], &[3]).quasi_polynomial();
        assert_eq!(h.modulus, 3);
        assert_eq!(h.degree(), Some(0));
        assert_eq!((0..6).map(|k| h.value(k)).collect::<Vec<_>>(), ints(&[1, 0, 0, 1, 0, 0]).into_iter().map(Q::from_integer).collect::<Vec<_>>());
        let p = nr(&[2, 0, 5, 1], &[]).quasi_polynomial();
        assert_eq!(p.valid_from, 4);
        assert_eq!(p.degree(), None);
    }

    #[test]
    fn fits() {
        assert_eq!(fit_i64(&[1; 6], &[1], 5).unwrap(), Some(nr(&[1], &[1])));
        assert_eq!(fit_i64(&[1, 2, 3, 4, 5, 6], &[1, 1], 5).unwrap(), Some(nr(&[1], &[1, 1])));
        assert_eq!(fit_i64(&[1, 1, 2, 2, 3, 3], &[1], 5).unwrap(), None);
        assert!(matches!(fit_i64(&[1, 1], &[1], 5), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn json_round_trip() {
        let f = nr(&[1, 3, -2], &[1, 2, 2]);
        assert_eq!(NiceRational::from_json(&f.to_json()).unwrap(), f);
        assert_eq!(nr(&[1, 1], &[1, 2]).to_string(), "(1 + t)/(1-t)(1-t^2)");
    }

    #[test]
    fn multivariate() {
        // 1/((1-x)(1-y)) has every coefficient 1
        let f = MultiNiceRational::new(2, BTreeMap::from([(vec![0, 0], BigInt::one())]), vec![vec![1, 0], vec![0, 1]]).unwrap();
        let e = f.expand(&[2, 3]);
        assert_eq!(e.len(), 12);
        assert!(e.values().all(|v| v.is_one()));
    }
}
