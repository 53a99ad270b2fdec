use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pilab_core::algebra::{
    block_triangular, direct_sum, matrix_algebra, monoid_word_count, nilpotent_free, universal_fundamental,
    FDAlgebra, DEFAULT_MAX_DIM,
};
use pilab_core::freealg::{capelli, letter_name, Letter};
use pilab_core::generic::{colength_dimension, gk_dimension_formula, relfree_hilbert, repvariety_dimension, trace_ring_hilbert, HilbertOptions};
use pilab_core::identities::{
    cocharacter, codimension, evaluate, exponent_diagnostic, find_nonvanishing, is_identity, kemer_index_search,
    replay_certificate, CodimOptions, EvalOptions, KemerConfig, Verdict,
};
use pilab_core::repsym::{hook_dimension, Partition};
use pilab_core::series::{fit, fit_i64, NiceRational};
use pilab_core::vpart::{big_cells, cell_quasipolynomial, check_nabla, count_bruteforce, deep_points, zonotope_volume, VectorList};
use pilab_core::Q;

const CORPUS: [(&str, &str); 8] = [
    ("q", include_str!("../../cli/corpus/q.json")),
    ("qplusq", include_str!("../../cli/corpus/qplusq.json")),
    ("nil2", include_str!("../../cli/corpus/nil2.json")),
    ("m2", include_str!("../../cli/corpus/m2.json")),
    ("m3", include_str!("../../cli/corpus/m3.json")),
    ("ut11", include_str!("../../cli/corpus/ut11.json")),
    ("ut21", include_str!("../../cli/corpus/ut21.json")),
    ("fund_a1_s1", include_str!("../../cli/corpus/fund_a1_s1.json")),
];

fn corpus() -> Vec<(&'static str, FDAlgebra)> {
    CORPUS.iter().map(|(n, s)| (*n, FDAlgebra::from_json_str(s).unwrap())).collect()
}

fn within(start: Instant, limit: Duration, what: &str) {
    let e = start.elapsed();
    assert!(e < limit, "{what} took {e:?}, limit {limit:?}");
}

// Naive codimension oracle for M_2: every multilinear monomial evaluated on
// every tuple of matrix units, rank by plain rational elimination.
fn oracle_m2_codimension(n: usize) -> usize {
    type M = [[i64; 2]; 2];
    let unit = |k: usize| {
        let mut m = [[0i64; 2]; 2];
        m[k / 2][k % 2] = 1;
        m
    };
    let mul = |a: &M, b: &M| {
        let mut c = [[0i64; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        c
    };
    let mut perms: Vec<Vec<usize>> = vec![vec![]];
    for k in 0..n {
        perms = perms
            .into_iter()
            .flat_map(|p| (0..=k).map(move |pos| {
                let mut q = p.clone();
                q.insert(pos, k);
                q
            }))
            .collect();
    }
    let tuples = 4usize.pow(n as u32);
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for p in &perms {
        let mut row = Vec::with_capacity(tuples * 4);
        for t in 0..tuples {
            let digits: Vec<usize> = (0..n).map(|i| t / 4usize.pow(i as u32) % 4).collect();
            let mut acc = unit(digits[p[0]]);
            for &v in &p[1..] {
                acc = mul(&acc, &unit(digits[v]));
            }
            for r in acc.iter() {
                for &x in r {
                    row.push(BigRational::from_integer(BigInt::from(x)));
                }
            }
        }
        rows.push(row);
    }
    // drop columns that are zero or repeat an earlier column
    let cols = rows[0].len();
    let mut seen = BTreeSet::new();
    let keep: Vec<usize> = (0..cols)
        .filter(|&c| {
            let col: Vec<String> = rows.iter().map(|r| r[c].to_string()).collect();
            col.iter().any(|x| x != "0") && seen.insert(col)
        })
        .collect();
    let mut m: Vec<Vec<BigRational>> = rows.iter().map(|r| keep.iter().map(|&c| r[c].clone()).collect()).collect();
    let mut rank = 0;
    for c in 0..keep.len() {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(rank, p);
        let piv = m[rank][c].clone();
        for i in 0..m.len() {
            if i != rank && !m[i][c].is_zero() {
                let f = &m[i][c] / &piv;
                for j in c..keep.len() {
                    let v = &m[rank][j] * &f;
                    m[i][j] -= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn criterion_1() {
    for n in 1..=3 {
        let r = matrix_algebra(n).unwrap().structure_report().unwrap();
        assert_eq!(r.block_sizes, vec![n]);
        assert_eq!((r.t, r.s), (n * n, 0));
    }
    let r = block_triangular(&[1, 1]).unwrap().structure_report().unwrap();
    assert_eq!((r.t, r.s, r.q), (2, 1, 2));
    let nil = nilpotent_free(2, 2).unwrap();
    assert_eq!(nil.radical_power_dims().len(), 2);
    assert_eq!(nil.ts_index(), (0, 2));
}

fn criterion_2() {
    let start = Instant::now();
    for n in 1..=2 {
        assert!(is_identity(&matrix_algebra(n).unwrap(), &capelli(n * n + 1)).unwrap());
    }
    for (name, a) in corpus().into_iter().filter(|(_, a)| a.dim() <= 7) {
        assert!(is_identity(&a, &capelli(a.dim() + 1)).unwrap(), "alternation beyond dim fails for {name}");
    }
    let m2 = matrix_algebra(2).unwrap();
    let c4 = capelli(4);
    assert!(!is_identity(&m2, &c4).unwrap());
    let w = find_nonvanishing(&m2, &c4, EvalOptions::default()).unwrap().expect("witness");
    let json = serde_json::to_string(&w).unwrap();
    let names: BTreeMap<String, Letter> = (1..=255u8).map(|l| (letter_name(l), l)).collect();
    let values: BTreeMap<Letter, Vec<Q>> =
        w.assignment.iter().map(|(v, b)| (names[v], m2.basis_vector(*b))).collect();
    let replay = evaluate(&m2, &c4.to_free(), &values).unwrap();
    assert_eq!(replay, w.value, "stored witness {json}");
    assert!(replay.iter().any(|x| !x.is_zero()));
    within(start, Duration::from_secs(30), "criterion 2");
}

fn criterion_3() {
    let start = Instant::now();
    let q = matrix_algebra(1).unwrap();
    for n in 1..=6 {
        let c = cocharacter(&q, n).unwrap();
        assert_eq!(c.codimension, 1);
        assert_eq!(c.multiplicities, BTreeMap::from([(Partition::new(vec![n]), 1)]));
    }
    let m2 = matrix_algebra(2).unwrap();
    let c2 = cocharacter(&m2, 2).unwrap();
    assert_eq!(c2.codimension, 2);
    assert_eq!(c2.multiplicities, BTreeMap::from([(Partition::new(vec![2]), 1), (Partition::new(vec![1, 1]), 1)]));
    for n in 1..=5 {
        assert_eq!(codimension(&m2, n).unwrap(), oracle_m2_codimension(n), "c_{n}(M2) against the naive oracle");
    }
    within(start, Duration::from_secs(180), "criterion 3");
}

fn criterion_4() {
    let mut cases: Vec<(FDAlgebra, usize)> = vec![(matrix_algebra(1).unwrap(), 6), (matrix_algebra(2).unwrap(), 5)];
    for (_, a) in corpus() {
        if a.dim() <= 5 {
            cases.push((a, 4));
        }
    }
    for (a, n_max) in cases {
        for n in 1..=n_max {
            let c = cocharacter(&a, n).unwrap();
            let total: BigInt = c.multiplicities.iter().map(|(p, m)| hook_dimension(p) * BigInt::from(*m)).sum();
            assert_eq!(total, BigInt::from(c.codimension), "sum of m_lambda * dim at n = {n}");
            assert_eq!(c.codimension, codimension(&a, n).unwrap());
        }
    }
}

fn criterion_5() {
    let m2 = matrix_algebra(2).unwrap();
    assert!(is_identity(&m2, &capelli(5)).unwrap());
    for n in 1..=5 {
        let c = cocharacter(&m2, n).unwrap();
        for (p, m) in &c.multiplicities {
            assert!(p.height() <= 4 || *m == 0, "height {} part {:?} at n = {n}", p.height(), p);
        }
    }
}

fn criterion_6() {
    let start = Instant::now();
    let cfg = KemerConfig::default();
    for a in [matrix_algebra(2).unwrap(), block_triangular(&[1, 1]).unwrap(), block_triangular(&[2, 1]).unwrap()] {
        let r = kemer_index_search(&a, &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::FundamentalUpTo { mu_max: 2 }, "ts {:?}", r.ts);
        assert_eq!(r.certificates().len(), 2);
        for c in r.certificates() {
            assert_eq!(replay_certificate(&a, c).unwrap(), c.value);
            assert!(c.value.iter().any(|x| !x.is_zero()));
        }
    }
    let q = matrix_algebra(1).unwrap();
    let r = kemer_index_search(&direct_sum(&q, &q), &cfg).unwrap();
    assert_eq!(r.ts, (2, 0));
    assert!(matches!(r.verdict, Verdict::Refuted { .. }));
    assert_eq!(r.kemer_estimate, Some((1, 0)));
    within(start, Duration::from_secs(120), "criterion 6");
}

fn criterion_7() {
    let start = Instant::now();
    let m2 = matrix_algebra(2).unwrap();
    let h = trace_ring_hilbert(&m2, 2, 7, &HilbertOptions::default()).unwrap();
    assert_eq!(h.dims[..5], [1, 2, 6, 10, 20]);
    let prefix: Vec<BigInt> = h.dims.iter().map(|&d| BigInt::from(d)).collect();
    assert_eq!(prefix.len(), 8);
    let f = fit(&prefix, &[1, 1, 2, 2, 2], 5).unwrap().expect("fit");
    assert_eq!(f.numerator(), [BigInt::one()]);
    within(start, Duration::from_secs(120), "criterion 7");
}

fn criterion_8() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..20 {
        let num: Vec<i64> = (0..rng.gen_range(1..5)).map(|_| rng.gen_range(-5..6)).collect();
        let exps: Vec<usize> = (0..rng.gen_range(1..5)).map(|_| rng.gen_range(1..5)).collect();
        let f = NiceRational::from_i64(&num, &exps).unwrap();
        let qp = f.quasi_polynomial();
        let end = qp.valid_from + 3 * qp.modulus;
        let coeffs = f.expand(end);
        for k in qp.valid_from..end {
            assert_eq!(qp.value(k), Q::from_integer(coeffs[k].clone()), "{f} at {k}");
        }
    }
    assert_eq!(NiceRational::from_i64(&[1], &[1, 2]).unwrap().dimension(), 2);
}

fn vpart_corpus() -> Vec<VectorList> {
    let v = |p: usize, vs: &[&[i64]]| VectorList::new(p, vs.iter().map(|x| x.to_vec()).collect()).unwrap();
    vec![
        v(1, &[&[1], &[1]]),
        v(1, &[&[2], &[2]]),
        v(2, &[&[1, 0], &[0, 1], &[1, 1]]),
        v(2, &[&[1, 0], &[0, 1], &[1, 1], &[1, 2]]),
        v(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]),
        v(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 0]]),
    ]
}

fn criterion_9() {
    let start = Instant::now();
    let s = VectorList::new(2, vec![vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
    assert_eq!(zonotope_volume(&s).unwrap(), BigInt::from(3));
    for (i, s) in vpart_corpus().iter().enumerate() {
        let dec = big_cells(s).unwrap();
        for c in 0..dec.cells.len() {
            let qp = cell_quasipolynomial(s, &dec, c).unwrap();
            let pts = deep_points(s, &dec, c, 25, 1000 + 31 * i as u64 + c as u64);
            assert_eq!(pts.len(), 25);
            for b in &pts {
                let bq: Vec<Q> = b.iter().map(|&x| Q::from_integer(x.into())).collect();
                assert_eq!(dec.locate(&bq), Some(c));
                assert_eq!(qp.value(b), Q::from_integer(count_bruteforce(s, b).unwrap().into()), "instance {i} cell {c} at {b:?}");
            }
            assert!(check_nabla(s, &qp, 20, 30, 7).unwrap(), "instance {i} cell {c}");
        }
    }
    within(start, Duration::from_secs(120), "criterion 9");
}

fn criterion_10() {
    let mut lists = BTreeSet::new();
    for (_, a) in corpus() {
        let blocks = a.wedderburn_blocks().unwrap();
        if !blocks.is_empty() {
            lists.insert(blocks);
        }
    }
    assert!(lists.len() >= 5);
    for blocks in &lists {
        let b: Vec<u64> = blocks.iter().map(|&n| n as u64).collect();
        let t: u64 = b.iter().map(|n| n * n).sum();
        for m in 2..=5 {
            let gk = gk_dimension_formula(t, b.len() as u64, m).unwrap();
            assert_eq!(gk, repvariety_dimension(&b, m).unwrap(), "blocks {blocks:?} m {m}");
            assert_eq!(gk, (m - 1) * t + b.len() as u64);
        }
    }
    let q = matrix_algebra(1).unwrap();
    let colengths: Vec<i64> = (1..=7).map(|n| cocharacter(&q, n).unwrap().colength as i64).collect();
    let f = fit_i64(&colengths, &[1], 5).unwrap().expect("colength fit");
    assert_eq!(f.dimension() as u64, colength_dimension(1, 1));
}

fn criterion_11() {
    let u = universal_fundamental(&[1], 1, 1, DEFAULT_MAX_DIM).unwrap();
    assert_eq!(u.algebra.dim(), 5);
    assert_eq!(u.algebra.basis_names(), ["e", "x", "ex", "xe", "exe"]);
    for total in 0..=8usize {
        let mut counts = vec![0u64; total + 1];
        for bits in 0u32..1 << total {
            let w: Vec<bool> = (0..total).map(|k| bits >> k & 1 == 1).collect();
            if w.windows(2).any(|p| p[0] && p[1]) {
                continue;
            }
            counts[w.iter().filter(|&&a| a).count()] += 1;
        }
        for (i, &c) in counts.iter().enumerate() {
            assert_eq!(monoid_word_count(i, total - i), c, "c_({i},{})", total - i);
        }
    }
    for (blocks, s) in [(vec![1], 1), (vec![1], 2), (vec![2], 1), (vec![1, 1], 1)] {
        let u = universal_fundamental(&blocks, s, 1, DEFAULT_MAX_DIM).unwrap();
        let pows = u.algebra.radical_power_dims();
        assert_eq!(pows.len(), s, "J^{} = 0 first for {blocks:?}", s + 1);
    }
}

fn criterion_12() {
    let opts = HilbertOptions::default();
    for (a, t, q, exps) in [
        (matrix_algebra(1).unwrap(), 1u64, 1u64, vec![1, 1]),
        (block_triangular(&[1, 1]).unwrap(), 2, 2, vec![1, 1, 1, 1]),
    ] {
        let h = relfree_hilbert(&a, 2, 10, &opts).unwrap();
        let prefix: Vec<i64> = h.dims.iter().map(|&d| d as i64).collect();
        let f = fit_i64(&prefix, &exps, 5).unwrap().expect("Hilbert fit");
        let gk = gk_dimension_formula(t, q, 2).unwrap();
        assert_eq!(f.dimension() as u64, gk);
        assert_eq!(f.quasi_polynomial().degree().map(|d| d as u64), Some(gk - 1));
        let diag = exponent_diagnostic(&a, 5, CodimOptions::default()).unwrap();
        assert!(diag.codimensions_nondecreasing && diag.bounded_by_dim);
    }
}

#[test]
fn acceptance() {
    let criteria: Vec<(&str, fn())> = vec![
        ("1 structure oracle (exact)", criterion_1),
        ("2 Capelli behavior (exact, < 30 s)", criterion_2),
        ("3 codimensions and cocharacters against oracles (exact, < 3 min)", criterion_3),
        ("4 sum of m_lambda * dim equals c_n (exact)", criterion_4),
        ("5 height bound for M2 (exact)", criterion_5),
        ("6 fundamentality (exact, < 2 min)", criterion_6),
        ("7 trace-ring Hilbert prefix and fit (exact, < 2 min)", criterion_7),
        ("8 quasi-polynomial extraction (exact)", criterion_8),
        ("9 partition functions (exact, < 2 min)", criterion_9),
        ("10 dimension formulas (exact)", criterion_10),
        ("11 universal fundamental algebra (exact)", criterion_11),
        ("12 growth sanity (exact fit)", criterion_12),
    ];
    let mut failed = Vec::new();
    for (name, f) in criteria {
        let start = Instant::now();
        let ok = catch_unwind(AssertUnwindSafe(f)).is_ok();
        println!("criterion {}: {} [{name}] {:.2?}", &name[..name.find(' ').unwrap()], if ok { "PASS" } else { "FAIL" }, start.elapsed());
        if !ok {
            failed.push(name);
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}
