//! Partitions and irreducible characters of the symmetric groups.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{factorial, Q};

/// Weakly decreasing list of positive parts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition(Vec<usize>);

impl Partition {
    /// Sorts the parts and drops zeros.
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.iter().sum()
    }

    /// Number of parts.
    pub fn height(&self) -> usize {
        self.0.len()
    }

    pub fn conjugate(&self) -> Partition {
        let w = self.0.first().copied().unwrap_or(0);
        Partition((1..=w).map(|k| self.0.iter().filter(|&&p| p >= k).count()).collect())
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// All partitions of `n`, reverse lexicographic: `(n), (n-1,1), ...`.
pub fn partitions(n: usize) -> Vec<Partition> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            rec(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// `n! / prod(hook lengths)`.
pub fn hook_dimension(lambda: &Partition) -> BigInt {
    let conj = lambda.conjugate();
    let mut hooks = BigInt::from(1);
    for (i, &row) in lambda.0.iter().enumerate() {
        for j in 0..row {
            hooks *= row - j + conj.0[j] - i - 1;
        }
    }
    factorial(lambda.n() as u64) / hooks
}

/// Size of the conjugacy class of cycle type `mu`: `n! / prod k^{m_k} m_k!`.
pub fn class_size(mu: &Partition) -> BigInt {
    let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
    for &p in &mu.0 {
        *counts.entry(p).or_default() += 1;
    }
    let den = counts.iter().fold(BigInt::from(1), |acc, (&k, &m)| acc * BigInt::from(k).pow(m as u32) * factorial(m));
    factorial(mu.n() as u64) / den
}

type Memo = HashMap<(Vec<usize>, Vec<usize>), i64>;

fn memo() -> &'static Mutex<Memo> {
    static M: OnceLock<Mutex<Memo>> = OnceLock::new();
    M.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Murnaghan-Nakayama on beta-sets: removing a rim hook of length `r` moves
/// a bead from `b` to `b - r`, with sign given by the beads jumped over.
fn mn(lambda: &[usize], cycles: &[usize]) -> i64 {
    if cycles.is_empty() {
        return if lambda.is_empty() { 1 } else { 0 };
    }
    let key = (lambda.to_vec(), cycles.to_vec());
    if let Some(&v) = memo().lock().expect("memo lock").get(&key) {
        return v;
    }
    let r = cycles[0];
    let l = lambda.len();
    let beta: Vec<usize> = lambda.iter().enumerate().map(|(i, &p)| p + l - 1 - i).collect();
    let mut total = 0i64;
    for (idx, &b) in beta.iter().enumerate() {
        if b < r || beta.contains(&(b - r)) {
            continue;
        }
        let jumped = beta.iter().filter(|&&c| c > b - r && c < b).count();
        let mut nb = beta.clone();
        nb[idx] = b - r;
        nb.sort_unstable_by(|x, y| y.cmp(x));
        let len = nb.len();
        let next: Vec<usize> =
            nb.iter().enumerate().map(|(i, &c)| c - (len - 1 - i)).filter(|&p| p > 0).collect();
        let sign = if jumped % 2 == 0 { 1 } else { -1 };
        total += sign * mn(&next, &cycles[1..]);
    }
    memo().lock().expect("memo lock").insert(key, total);
    total
}

/// `chi_lambda` on the class of cycle type `mu`.
pub fn character_value(lambda: &Partition, mu: &Partition) -> Result<i64> {
    if lambda.n() != mu.n() {
        return Err(Error::SizeMismatch(format!("|{lambda}| = {} but |{mu}| = {}", lambda.n(), mu.n())));
    }
    Ok(mn(&lambda.0, &mu.0))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterTable {
    pub n: usize,
    /// Cycle types, in the order of [`partitions`].
    pub classes: Vec<Partition>,
    pub class_sizes: Vec<BigInt>,
    /// Irreducible characters, indexed like `classes`.
    pub rows: BTreeMap<Partition, Vec<i64>>,
}

impl CharacterTable {
    pub fn build(n: usize) -> Self {
        let classes = partitions(n);
        let class_sizes = classes.iter().map(class_size).collect();
        let rows = classes
            .iter()
            .map(|l| (l.clone(), classes.iter().map(|c| mn(&l.0, &c.0)).collect()))
            .collect();
        CharacterTable { n, classes, class_sizes, rows }
    }

    pub fn class_index(&self, mu: &Partition) -> Option<usize> {
        self.classes.iter().position(|c| c == mu)
    }
}

const CACHED: usize = 8;

/// Character table of `S_n`; tables for `n <= 8` are built once per process.
pub fn character_table(n: usize) -> std::borrow::Cow<'static, CharacterTable> {
    static TABLES: OnceLock<Vec<CharacterTable>> = OnceLock::new();
    if n <= CACHED {
        let t = TABLES.get_or_init(|| (0..=CACHED).map(CharacterTable::build).collect());
        std::borrow::Cow::Borrowed(&t[n])
    } else {
        std::borrow::Cow::Owned(CharacterTable::build(n))
    }
}

/// Multiplicities `<chi, chi_lambda>` of a class function given by its
/// values on the classes of `S_n` (in the order of [`partitions`]).
pub fn decompose(values: &[Q], n: usize) -> Result<BTreeMap<Partition, Q>> {
    let table = character_table(n);
    if values.len() != table.classes.len() {
        return Err(Error::DimensionMismatch { expected: table.classes.len(), got: values.len() });
    }
    let order = Q::from_integer(factorial(n as u64));
    Ok(table
        .rows
        .iter()
        .map(|(l, row)| {
            let s = values
                .iter()
                .zip(row)
                .zip(&table.class_sizes)
                .fold(Q::zero(), |acc, ((v, &c), size)| acc + v * Q::from_integer(size * c));
            (l.clone(), s / &order)
        })
        .collect())
}

/// Class function `sum_lambda m_lambda chi_lambda`.
pub fn class_function(mults: &BTreeMap<Partition, Q>, n: usize) -> Vec<Q> {
    let table = character_table(n);
    (0..table.classes.len())
        .map(|c| {
            mults.iter().fold(Q::zero(), |acc, (l, m)| {
                acc + m * Q::from_integer(BigInt::from(table.rows.get(l).map_or(0, |r| r[c])))
            })
        })
        .collect()
}

pub fn hook_dimension_u64(lambda: &Partition) -> u64 {
    hook_dimension(lambda).to_u64().expect("hook dimension fits in u64")
}
