//! Dense univariate polynomials over the rationals, coefficients stored from
//! the constant term upwards.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::linalg::QMatrix;
use crate::rational::{format_q, Q};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UPoly {
    coeffs: Vec<Q>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| crate::rational::q(x)).collect())
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UPoly { coeffs: vec![Q::one()] }
    }

    pub fn constant(c: Q) -> Self {
        Self::new(vec![c])
    }

    /// `x - r`
    pub fn linear_root(r: &Q) -> Self {
        UPoly { coeffs: vec![-r.clone(), Q::one()] }
    }

    /// `x^k`
    pub fn monomial(k: usize, c: Q) -> Self {
        let mut v = vec![Q::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.coeffs.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial has none.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().recip())
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.coeffs.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Q::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(UPoly::one(), |acc, _| &acc * self)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = d.leading().recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UPoly::zero(), self.clone());
        }
        let mut quot = vec![Q::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (i, dc) in d.coeffs.iter().enumerate() {
                rem[k + i] -= &c * dc;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (UPoly::new(quot), UPoly::new(rem))
    }

    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s*self + t*other = g = gcd` (monic).
    pub fn ext_gcd(&self, other: &UPoly) -> (UPoly, UPoly, UPoly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (UPoly::one(), UPoly::zero());
        let (mut t0, mut t1) = (UPoly::zero(), UPoly::one());
        while !r1.is_zero() {
            let (qt, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&qt * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let t = &t0 - &(&qt * &t1);
            t0 = std::mem::replace(&mut t1, t);
        }
        let inv = r0.leading().recip();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Distinct rational roots with multiplicities, in increasing order.
    ///
    /// Candidates come from the rational root test on the primitive integer
    /// form; returns `None` if a coefficient is too large to factor by trial
    /// division.
    pub fn rational_roots(&self) -> Option<Vec<(Q, usize)>> {
        let mut p = self.clone();
        let mut out = Vec::new();
        if p.is_zero() {
            return Some(out);
        }
        let mut zero_mult = 0;
        while p.coeff(0).is_zero() {
            p = p.div_rem(&UPoly::monomial(1, Q::one())).0;
            zero_mult += 1;
        }
        if zero_mult > 0 {
            out.push((Q::zero(), zero_mult));
        }
        if p.degree() == Some(0) {
            return Some(out);
        }
        let ints = p.integer_form();
        let a0 = ints.first()?.abs().to_u64()?;
        let an = ints.last()?.abs().to_u64()?;
        let nums = divisors(a0)?;
        let dens = divisors(an)?;
        let mut cands: Vec<Q> = Vec::new();
        for &n in &nums {
            for &d in &dens {
                if n.gcd(&d) != 1 {
                    continue;
                }
                let r = Q::new(BigInt::from(n), BigInt::from(d));
                cands.push(r.clone());
                cands.push(-r);
            }
        }
        cands.sort();
        for r in cands {
            let lin = UPoly::linear_root(&r);
            let mut mult = 0;
            loop {
                let (qt, rem) = p.div_rem(&lin);
                if !rem.is_zero() {
                    break;
                }
                p = qt;
                mult += 1;
            }
            if mult > 0 {
                out.push((r, mult));
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        Some(out)
    }

    /// Primitive integer coefficients proportional to `self`.
    pub fn integer_form(&self) -> Vec<BigInt> {
        let l = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * Q::from_integer(l.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if g.is_zero() {
            return ints;
        }
        ints.into_iter().map(|c| c / &g).collect()
    }
}

fn divisors(n: u64) -> Option<Vec<u64>> {
    if n == 0 {
        return Some(vec![]);
    }
    if n > 1_000_000_000_000 {
        return None;
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Some(small)
}

/// Characteristic polynomial `det(xI - M)` by the Faddeev-LeVerrier recursion.
pub fn char_poly(m: &QMatrix) -> UPoly {
    let n = m.rows();
    let mut coeffs = vec![Q::zero(); n + 1];
    coeffs[n] = Q::one();
    let mut mk = QMatrix::zeros(n, n);
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = m.mul(&mk).expect("square");
        for i in 0..n {
            let v = next.get(i, i) + &coeffs[n - k + 1];
            next.set(i, i, v);
        }
        let am = m.mul(&next).expect("square");
        coeffs[n - k] = -am.trace() / Q::from_integer(BigInt::from(k));
        mk = next;
    }
    UPoly::new(coeffs)
}

impl Add for &UPoly {
    type Output = UPoly;
    fn add(self, rhs: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &UPoly {
    type Output = UPoly;
    fn sub(self, rhs: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl Mul for &UPoly {
    type Output = UPoly;
    fn mul(self, rhs: &UPoly) -> UPoly {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", format_q(c))?,
                1 => write!(f, "{}*t", format_q(c))?,
                _ => write!(f, "{}*t^{k}", format_q(c))?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    #[test]
    fn division_and_gcd() {
        let a = UPoly::from_i64(&[-1, 0, 1]); // x^2 - 1
        let b = UPoly::from_i64(&[1, 1]); // x + 1
        let (qt, r) = a.div_rem(&b);
        assert_eq!(qt, UPoly::from_i64(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&UPoly::from_i64(&[-1, 1])), UPoly::from_i64(&[-1, 1]));
        let (g, s, t) = a.ext_gcd(&UPoly::from_i64(&[2, 1]));
        assert_eq!(g, UPoly::one());
        assert_eq!(&(&s * &a) + &(&t * &UPoly::from_i64(&[2, 1])), UPoly::one());
    }

    #[test]
    fn roots() {
        // (2x - 1)(x + 3)^2 x
        let p = &(&UPoly::from_i64(&[-1, 2]) * &UPoly::from_i64(&[3, 1]).pow(2)) * &UPoly::from_i64(&[0, 1]);
        let r = p.rational_roots().unwrap();
        assert_eq!(r, vec![(q(-3), 2), (q(0), 1), (qf(1, 2), 1)]);
        // x^2 - 2 has none
        assert!(UPoly::from_i64(&[-2, 0, 1]).rational_roots().unwrap().is_empty());
    }

    #[test]
    fn characteristic_polynomial() {
        let m = QMatrix::from_i64(&[&[2, 1], &[0, 3]]);
        assert_eq!(char_poly(&m), UPoly::from_i64(&[6, -5, 1]));
        let z = QMatrix::zeros(3, 3);
        assert_eq!(char_poly(&z), UPoly::from_i64(&[0, 0, 0, 1]));
    }
}
