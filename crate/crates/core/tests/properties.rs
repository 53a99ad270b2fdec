use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use pilab_core::algebra::{block_triangular, direct_sum, matrix_algebra};
use pilab_core::identities::{cocharacter, codimension};
use pilab_core::linalg::{determinant, nullspace, rank, QMatrix};
use pilab_core::rational::{q, Q};
use pilab_core::repsym::{class_function, decompose, hook_dimension, partitions};
use pilab_core::series::NiceRational;
use pilab_core::vpart::{count_bruteforce, generating_box, zonotope_volume, VectorList};
use proptest::prelude::*;

fn small_matrix() -> impl Strategy<Value = QMatrix> {
    (1usize..5, 1usize..6).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-3i64..4, c), r)
            .prop_map(move |rows| QMatrix::from_rows(c, rows.into_iter().map(|v| v.into_iter().map(q).collect()).collect()).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_nullity(m in small_matrix()) {
        let ns = nullspace(&m);
        prop_assert_eq!(rank(&m) + ns.len(), m.cols());
        for v in &ns {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(|x| x.is_zero()));
        }
        prop_assert_eq!(rank(&m), rank(&m.transpose()));
    }

    #[test]
    fn character_round_trip(n in 1usize..7, seed in prop::collection::vec(0i64..4, 11)) {
        let parts = partitions(n);
        let mults: BTreeMap<_, Q> = parts.iter().zip(seed.iter().cycle()).map(|(p, &k)| (p.clone(), q(k))).collect();
        let back = decompose(&class_function(&mults, n), n).unwrap();
        for p in &parts {
            prop_assert_eq!(back.get(p).cloned().unwrap_or_else(Q::zero), mults[p].clone());
        }
    }

    #[test]
    fn series_round_trip(num in prop::collection::vec(-4i64..5, 1..5), exps in prop::collection::vec(1usize..4, 1..4)) {
        let f = NiceRational::from_i64(&num, &exps).unwrap();
        let qp = f.quasi_polynomial();
        let count = qp.valid_from + 3 * qp.modulus + 2;
        let coeffs = f.expand(count);
        for k in qp.valid_from..count {
            prop_assert_eq!(qp.value(k), Q::from_integer(coeffs[k].clone()));
        }
    }

    #[test]
    fn generating_identity(extra in prop::collection::vec((0i64..3, 0i64..3), 0..3)) {
        let mut vs = vec![vec![1, 0], vec![0, 1]];
        vs.extend(extra.into_iter().filter(|&(a, b)| a + b > 0).map(|(a, b)| vec![a, b]));
        let s = VectorList::new(2, vs).unwrap();
        for (b, c) in generating_box(&s, &[4, 4]).unwrap() {
            prop_assert_eq!(count_bruteforce(&s, &b).unwrap(), c);
        }
        prop_assert_eq!(count_bruteforce(&s, &[-1, 3]).unwrap(), 0);
        prop_assert_eq!(count_bruteforce(&s, &[2, -1]).unwrap(), 0);
    }

    #[test]
    fn volume_is_unimodular_invariant(k in -3i64..4, l in -3i64..4, swap in any::<bool>()) {
        let base = vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![1, 2]];
        let s = VectorList::new(2, base.clone()).unwrap();
        // shear by k, then by l in the other coordinate, optionally swap
        let g = |v: &Vec<i64>| {
            let (x, y) = (v[0] + k * v[1], v[1]);
            let (x, y) = (x, y + l * x);
            if swap { vec![y, x] } else { vec![x, y] }
        };
        let m = QMatrix::from_i64(&[&g(&vec![1, 0]), &g(&vec![0, 1])]);
        prop_assert_eq!(determinant(&m).unwrap().abs(), q(1));
        let t = VectorList::new(2, base.iter().map(g).collect());
        if let Ok(t) = t {
            prop_assert_eq!(zonotope_volume(&t).unwrap(), zonotope_volume(&s).unwrap());
        }
    }
}

#[test]
fn cocharacter_consistency_on_small_algebras() {
    let algs = [
        matrix_algebra(1).unwrap(),
        block_triangular(&[1, 1]).unwrap(),
        direct_sum(&matrix_algebra(1).unwrap(), &matrix_algebra(1).unwrap()),
    ];
    for a in &algs {
        for n in 1..=4 {
            let c = cocharacter(a, n).unwrap();
            let total: BigInt = c.multiplicities.iter().map(|(p, m)| hook_dimension(p) * BigInt::from(*m)).sum();
            assert_eq!(total, BigInt::from(c.codimension));
            assert_eq!(c.codimension, codimension(a, n).unwrap());
        }
    }
}
