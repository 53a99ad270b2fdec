//! The algebra `F_{A,s}(X)`: the nonunital free product of a split semisimple
//! algebra `A = M_{n_1} x ... x M_{n_q}` with the free algebra on `X`, modulo
//! products of degree `> s` in `X`.
//!
//! Basis elements are graded by words in the monoid `<a, b | a^2 = a>`:
//! `a`-slots carry matrix units of `A`, `b`-slots carry variables.

use std::collections::{BTreeMap, HashMap};

use num_traits::{ToPrimitive, Zero};

use super::{FDAlgebra, Terms};
use crate::error::{Error, Result};
use crate::rational::{binomial, Q};

pub const DEFAULT_MAX_DIM: usize = 2000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Slot {
    A(usize),
    X(usize),
}

#[derive(Clone, Debug)]
pub struct UniversalFundamental {
    pub algebra: FDAlgebra,
    pub blocks: Vec<usize>,
    pub s: usize,
    pub m: usize,
    /// Monoid words in normal form (no `aa`), nonempty, at most `s` letters `b`.
    pub words: Vec<String>,
    /// For each basis element, the index of its word in `words`.
    pub basis_word: Vec<usize>,
    /// `c_{i,j}`: the number of words with `i` letters `a` and `j` letters `b`.
    pub word_counts: BTreeMap<(usize, usize), u64>,
    /// `sum_w D^{#a(w)} m^{#b(w)}` with `D = dim A`.
    pub formula_dim: usize,
}

/// Number of normal-form monoid words with `i` letters `a` and `j` letters
/// `b`: choose which of the `j + 1` gaps around the `b`'s hold an `a`.
pub fn monoid_word_count(i: usize, j: usize) -> u64 {
    binomial(j as u64 + 1, i as u64).to_u64().unwrap_or(u64::MAX)
}

fn normal_words(s: usize) -> Vec<String> {
    let mut out = Vec::new();
    for j in 0..=s {
        for mask in 0u64..(1 << (j + 1)) {
            let mut w = String::new();
            for g in 0..=j {
                if mask >> g & 1 == 1 {
                    w.push('a');
                }
                if g < j {
                    w.push('b');
                }
            }
            if !w.is_empty() {
                out.push(w);
            }
        }
    }
    out.sort_by(|u, v| {
        let bu = u.matches('b').count();
        let bv = v.matches('b').count();
        (bu, u.len(), u.as_str()).cmp(&(bv, v.len(), v.as_str()))
    });
    out
}

pub fn universal_fundamental(blocks: &[usize], s: usize, m: usize, max_dim: usize) -> Result<UniversalFundamental> {
    if m == 0 || blocks.is_empty() || blocks.contains(&0) {
        return Err(Error::InvalidParams("need m >= 1 and a nonempty list of positive block sizes".into()));
    }
    // matrix units of the block diagonal embedding in M_N
    let mut units = Vec::new();
    let mut off = 0;
    for &n in blocks {
        for i in 0..n {
            for j in 0..n {
                units.push((off + i + 1, off + j + 1));
            }
        }
        off += n;
    }
    let big = off;
    let dd = units.len();
    let unit_index: HashMap<(usize, usize), usize> = units.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    let a_name = |k: usize| {
        let (i, j) = units[k];
        if dd == 1 {
            "e".to_string()
        } else if big < 10 {
            format!("e{i}{j}")
        } else {
            format!("e{i}_{j}")
        }
    };
    let x_name = |k: usize| if m == 1 { "x".to_string() } else { format!("x{}", k + 1) };

    let words = normal_words(s);
    let mut formula: u128 = 0;
    let mut word_counts = BTreeMap::new();
    for w in &words {
        let na = w.matches('a').count() as u32;
        let nb = w.matches('b').count() as u32;
        *word_counts.entry((na as usize, nb as usize)).or_insert(0u64) += 1;
        let term = (dd as u128).checked_pow(na).and_then(|x| x.checked_mul((m as u128).checked_pow(nb)?));
        formula = term.and_then(|t| formula.checked_add(t)).ok_or_else(|| Error::TooLarge("dimension overflows".into()))?;
    }
    if formula > max_dim as u128 {
        return Err(Error::TooLarge(format!("dimension {formula} exceeds the bound {max_dim}")));
    }

    let mut basis: Vec<Vec<Slot>> = Vec::new();
    let mut basis_word = Vec::new();
    for (wi, w) in words.iter().enumerate() {
        let mut partial: Vec<Vec<Slot>> = vec![Vec::new()];
        for ch in w.chars() {
            let choices = if ch == 'a' { dd } else { m };
            partial = partial
                .into_iter()
                .flat_map(|p| {
                    (0..choices).map(move |k| {
                        let mut q = p.clone();
                        q.push(if ch == 'a' { Slot::A(k) } else { Slot::X(k) });
                        q
                    })
                })
                .collect();
        }
        basis_word.extend(std::iter::repeat_n(wi, partial.len()));
        basis.extend(partial);
    }
    let index: HashMap<Vec<Slot>, usize> = basis.iter().enumerate().map(|(i, b)| (b.clone(), i)).collect();
    let d = basis.len();
    let xcount = |v: &[Slot]| v.iter().filter(|x| matches!(x, Slot::X(_))).count();
    let mut table = vec![vec![Terms::new(); d]; d];
    for (i, u) in basis.iter().enumerate() {
        let xu = xcount(u);
        for (j, v) in basis.iter().enumerate() {
            if xu + xcount(v) > s {
                continue;
            }
            let mut w = u.clone();
            match (u.last(), v.first()) {
                (Some(Slot::A(p)), Some(Slot::A(r))) => {
                    let (pi, pj) = units[*p];
                    let (ri, rj) = units[*r];
                    if pj != ri {
                        continue;
                    }
                    *w.last_mut().expect("nonempty") = Slot::A(unit_index[&(pi, rj)]);
                    w.extend_from_slice(&v[1..]);
                }
                _ => w.extend_from_slice(v),
            }
            table[i][j].push((index[&w], Q::from_integer(1.into())));
        }
    }
    let tokens: Vec<Vec<String>> = basis
        .iter()
        .map(|b| {
            b.iter()
                .map(|sl| match sl {
                    Slot::A(k) => a_name(*k),
                    Slot::X(k) => x_name(*k),
                })
                .collect()
        })
        .collect();
    let single = tokens.iter().flatten().all(|t| t.chars().count() == 1);
    let names = tokens.into_iter().map(|t| t.join(if single { "" } else { " " })).collect();
    let algebra = FDAlgebra::new_unchecked(names, table, None)?;
    debug_assert!(!algebra.table.iter().flatten().flatten().any(|(_, c)| c.is_zero()));
    Ok(UniversalFundamental {
        algebra,
        blocks: blocks.to_vec(),
        s,
        m,
        words,
        basis_word,
        word_counts,
        formula_dim: formula as usize,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_dimensional_example() {
        let u = universal_fundamental(&[1], 1, 1, DEFAULT_MAX_DIM).unwrap();
        assert_eq!(u.algebra.dim(), 5);
        assert_eq!(u.algebra.basis_names(), ["e", "x", "ex", "xe", "exe"]);
        u.algebra.check_associativity().unwrap();
        assert_eq!(u.algebra.ts_index(), (1, 1));
        assert_eq!(u.algebra.wedderburn_blocks().unwrap(), vec![1]);
    }

    #[test]
    fn formula_matches_table() {
        for (blocks, s, m) in [(vec![1], 2, 1), (vec![2], 1, 1), (vec![1, 1], 1, 2), (vec![1], 0, 3)] {
            let u = universal_fundamental(&blocks, s, m, DEFAULT_MAX_DIM).unwrap();
            assert_eq!(u.formula_dim, u.algebra.dim());
            for (&(i, j), &c) in &u.word_counts {
                assert_eq!(c, monoid_word_count(i, j));
            }
            let with_x = u.basis_word.iter().filter(|&&w| u.words[w].contains('b')).count();
            let t: usize = blocks.iter().map(|n| n * n).sum();
            assert_eq!(u.algebra.dim() - with_x, t);
        }
    }

    #[test]
    fn too_large() {
        assert!(matches!(universal_fundamental(&[3], 3, 3, DEFAULT_MAX_DIM), Err(Error::TooLarge(_))));
        assert!(universal_fundamental(&[], 1, 1, DEFAULT_MAX_DIM).is_err());
    }
}
