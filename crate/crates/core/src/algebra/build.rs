use num_traits::{One, Zero};

use super::{FDAlgebra, Terms};
use crate::error::{Error, Result};
use crate::rational::Q;

fn unit_name(i: usize, j: usize, n: usize) -> String {
    if n < 10 {
        format!("e{i}{j}")
    } else {
        format!("e{i}_{j}")
    }
}

/// Algebra spanned by the matrix units `e_ij` with `(i, j)` in `cells`
/// (1-based labels, row-major order), closed under multiplication.
fn matrix_units(n: usize, cells: &[(usize, usize)]) -> Result<FDAlgebra> {
    let index = |i: usize, j: usize| cells.iter().position(|&c| c == (i, j));
    let names = cells.iter().map(|&(i, j)| unit_name(i, j, n)).collect();
    let mut table = vec![vec![Terms::new(); cells.len()]; cells.len()];
    for (a, &(i, j)) in cells.iter().enumerate() {
        for (b, &(k, l)) in cells.iter().enumerate() {
            if j == k {
                let c = index(i, l).ok_or_else(|| Error::Invariant("matrix units not closed".into()))?;
                table[a][b].push((c, Q::one()));
            }
        }
    }
    let mut unit = vec![Q::zero(); cells.len()];
    for i in 1..=n {
        if let Some(c) = index(i, i) {
            unit[c] = Q::one();
        }
    }
    FDAlgebra::new_unchecked(names, table, Some(unit))
}

/// `M_n(Q)` with the matrix-unit basis `e11, e12, ..., enn`.
pub fn matrix_algebra(n: usize) -> Result<FDAlgebra> {
    if n == 0 {
        return Err(Error::InvalidParams("matrix size must be at least 1".into()));
    }
    let cells: Vec<_> = (1..=n).flat_map(|i| (1..=n).map(move |j| (i, j))).collect();
    matrix_units(n, &cells)
}

/// Block upper triangular matrices `UT(n_1, ..., n_q)`, spanned by the
/// `e_ij` with `block(i) <= block(j)`.
pub fn block_triangular(sizes: &[usize]) -> Result<FDAlgebra> {
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(Error::InvalidParams("block sizes must be a nonempty list of positive sizes".into()));
    }
    let block: Vec<usize> = sizes.iter().enumerate().flat_map(|(b, &s)| std::iter::repeat_n(b, s)).collect();
    let n = block.len();
    let cells: Vec<_> = (1..=n)
        .flat_map(|i| (1..=n).map(move |j| (i, j)))
        .filter(|&(i, j)| block[i - 1] <= block[j - 1])
        .collect();
    matrix_units(n, &cells)
}

/// `A x B` with the basis of `A` followed by that of `B`; names of `B` that
/// clash with names of `A` get a trailing `'`.
pub fn direct_sum(a: &FDAlgebra, b: &FDAlgebra) -> FDAlgebra {
    let da = a.dim();
    let mut names = a.basis_names().to_vec();
    for n in b.basis_names() {
        let mut n = n.clone();
        while names.contains(&n) {
            n.push('\'');
        }
        names.push(n);
    }
    let d = da + b.dim();
    let mut table = vec![vec![Terms::new(); d]; d];
    for i in 0..da {
        for j in 0..da {
            table[i][j] = a.product(i, j).to_vec();
        }
    }
    for i in 0..b.dim() {
        for j in 0..b.dim() {
            table[da + i][da + j] = b.product(i, j).iter().map(|(k, c)| (da + k, c.clone())).collect();
        }
    }
    let unit = match (a.unit(), b.unit()) {
        (Some(u), Some(v)) => Some(u.iter().chain(v.iter()).cloned().collect()),
        _ => None,
    };
    FDAlgebra::new_unchecked(names, table, unit).expect("direct sum of valid algebras")
}

/// Free nonunital algebra on `g` generators modulo words of length `> s`:
/// basis all words of length `1..=s`, product by concatenation.
pub fn nilpotent_free(g: usize, s: usize) -> Result<FDAlgebra> {
    if g == 0 || s == 0 {
        return Err(Error::InvalidParams("need at least one generator and s >= 1".into()));
    }
    let letter = |k: usize| if g == 1 { "x".to_string() } else { format!("x{}", k + 1) };
    let mut words: Vec<Vec<usize>> = Vec::new();
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..s {
        layer = layer.iter().flat_map(|w| (0..g).map(move |k| [w.as_slice(), &[k]].concat())).collect();
        words.extend(layer.iter().cloned());
    }
    if words.len() > 4096 {
        return Err(Error::TooLarge(format!("{} basis words", words.len())));
    }
    let index: std::collections::HashMap<Vec<usize>, usize> =
        words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
    let names = words.iter().map(|w| w.iter().map(|&k| letter(k)).collect::<String>()).collect();
    let d = words.len();
    let mut table = vec![vec![Terms::new(); d]; d];
    for (i, u) in words.iter().enumerate() {
        for (j, v) in words.iter().enumerate() {
            if u.len() + v.len() <= s {
                table[i][j].push((index[&[u.as_slice(), v.as_slice()].concat()], Q::one()));
            }
        }
    }
    FDAlgebra::new_unchecked(names, table, None)
}

/// `A+ = A + Q 1` with a new unit appended as the last basis element.
pub fn unitalize(a: &FDAlgebra) -> FDAlgebra {
    let d = a.dim();
    let mut names = a.basis_names().to_vec();
    let mut one = "1".to_string();
    while names.contains(&one) {
        one.push('\'');
    }
    names.push(one);
    let mut table = vec![vec![Terms::new(); d + 1]; d + 1];
    for i in 0..d {
        for j in 0..d {
            table[i][j] = a.product(i, j).to_vec();
        }
        table[i][d] = vec![(i, Q::one())];
        table[d][i] = vec![(i, Q::one())];
    }
    table[d][d] = vec![(d, Q::one())];
    let mut unit = vec![Q::zero(); d + 1];
    unit[d] = Q::one();
    FDAlgebra::new_unchecked(names, table, Some(unit)).expect("unitalization of a valid algebra")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        assert_eq!(matrix_algebra(2).unwrap().dim(), 4);
        assert_eq!(block_triangular(&[1, 1]).unwrap().dim(), 3);
        assert_eq!(block_triangular(&[2, 1]).unwrap().dim(), 4 + 2 + 1);
        assert_eq!(block_triangular(&[1, 2, 1]).unwrap().dim(), 1 + 4 + 1 + 2 + 1 + 2);
        let m2 = matrix_algebra(2).unwrap();
        let m3 = matrix_algebra(3).unwrap();
        assert_eq!(direct_sum(&m2, &m3).dim(), 13);
        assert_eq!(nilpotent_free(2, 2).unwrap().dim(), 6);
        assert_eq!(unitalize(&nilpotent_free(1, 1).unwrap()).dim(), 2);
    }

    #[test]
    fn constructed_algebras_are_valid() {
        let m2 = matrix_algebra(2).unwrap();
        let all = [
            matrix_algebra(1).unwrap(),
            m2.clone(),
            matrix_algebra(3).unwrap(),
            block_triangular(&[1, 1]).unwrap(),
            block_triangular(&[2, 1]).unwrap(),
            block_triangular(&[1, 1, 1]).unwrap(),
            direct_sum(&m2, &matrix_algebra(1).unwrap()),
            nilpotent_free(2, 3).unwrap(),
            unitalize(&nilpotent_free(1, 2).unwrap()),
            unitalize(&m2),
        ];
        for a in all {
            a.check_associativity().unwrap();
            a.check_unit().unwrap();
        }
    }

    #[test]
    fn invalid_params() {
        assert!(matrix_algebra(0).is_err());
        assert!(block_triangular(&[]).is_err());
        assert!(block_triangular(&[1, 0]).is_err());
        assert!(nilpotent_free(0, 1).is_err());
        assert!(nilpotent_free(1, 0).is_err());
    }

    #[test]
    fn names() {
        assert_eq!(block_triangular(&[1, 1]).unwrap().basis_names(), ["e11", "e12", "e22"]);
        assert_eq!(nilpotent_free(1, 2).unwrap().basis_names(), ["x", "xx"]);
        let q = matrix_algebra(1).unwrap();
        assert_eq!(direct_sum(&q, &q).basis_names(), ["e11", "e11'"]);
    }
}
