//! Irreducible characters of S(d) and the dimension formulas.
//!
//! Character values come from the Murnaghan–Nakayama rule: strips of length
//! equal to the largest remaining cycle are removed from the diagram, using the
//! beta-set (abacus) encoding so that strip removal is a single bead move.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num::{BigInt, BigRational, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitions::{check_same_size, enumerate_partitions, factorial, Partition};

/// Full table for one degree, indexed by the canonical partition order.
#[derive(Debug)]
pub struct CharacterTable {
    d: u32,
    partitions: Vec<Partition>,
    index: HashMap<Partition, usize>,
    /// `chi[lambda][alpha]`
    chi: Vec<Vec<i64>>,
    class_sizes: Vec<BigInt>,
    dims: Vec<BigInt>,
    /// `omega[lambda][alpha] = |C_alpha| chi_alpha(lambda) / dim V^lambda`
    omega: Vec<Vec<BigRational>>,
}

/// Serializable form used by the CLI cache.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CharacterTableData {
    pub d: u32,
    pub partitions: Vec<Partition>,
    pub values: Vec<Vec<i64>>,
}

impl CharacterTable {
    fn build(d: u32) -> Self {
        let partitions = enumerate_partitions(d, None);
        let mut memo = HashMap::new();
        let chi: Vec<Vec<i64>> = partitions
            .iter()
            .map(|lam| {
                partitions
                    .iter()
                    .map(|alpha| mn_value(lam, alpha.parts(), &mut memo))
                    .collect()
            })
            .collect();
        Self::from_parts(d, partitions, chi)
    }

    fn from_parts(d: u32, partitions: Vec<Partition>, chi: Vec<Vec<i64>>) -> Self {
        let index = partitions.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let class_sizes: Vec<BigInt> = partitions.iter().map(Partition::class_size).collect();
        let dims: Vec<BigInt> = partitions.iter().map(dim_sym).collect();
        let omega = chi
            .iter()
            .zip(&dims)
            .map(|(row, dim)| {
                row.iter()
                    .zip(&class_sizes)
                    .map(|(&x, c)| BigRational::new(c * BigInt::from(x), dim.clone()))
                    .collect()
            })
            .collect();
        CharacterTable {
            d,
            partitions,
            index,
            chi,
            class_sizes,
            dims,
            omega,
        }
    }

    /// Rebuilds a table from cached values, checking them against the
    /// column orthogonality relations before accepting.
    pub fn from_data(data: CharacterTableData) -> Result<Self> {
        if data.partitions != enumerate_partitions(data.d, None)
            || data.values.len() != data.partitions.len()
            || data.values.iter().any(|r| r.len() != data.partitions.len())
        {
            return Err(Error::InvalidArgument("cached character table has wrong shape".into()));
        }
        let table = Self::from_parts(data.d, data.partitions, data.values);
        if !table.column_orthogonality_holds() {
            return Err(Error::InvalidArgument("cached character table fails orthogonality".into()));
        }
        Ok(table)
    }

    pub fn to_data(&self) -> CharacterTableData {
        CharacterTableData {
            d: self.d,
            partitions: self.partitions.clone(),
            values: self.chi.clone(),
        }
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// `chi_alpha(lambda)` by table indices.
    pub fn value(&self, lambda: usize, alpha: usize) -> i64 {
        self.chi[lambda][alpha]
    }

    pub fn class_size(&self, alpha: usize) -> &BigInt {
        &self.class_sizes[alpha]
    }

    pub fn dim(&self, lambda: usize) -> &BigInt {
        &self.dims[lambda]
    }

    pub fn omega(&self, lambda: usize, alpha: usize) -> &BigRational {
        &self.omega[lambda][alpha]
    }

    /// `Σ_α |C_α| χ_α(λ) χ_α(μ) = d! δ_{λμ}`
    pub fn column_orthogonality_holds(&self) -> bool {
        let n = self.partitions.len();
        let dfact = factorial(self.d);
        (0..n).all(|l| {
            (0..n).all(|m| {
                let s: BigInt = (0..n)
                    .map(|a| &self.class_sizes[a] * BigInt::from(self.chi[l][a] * self.chi[m][a]))
                    .sum();
                if l == m {
                    s == dfact
                } else {
                    s.is_zero()
                }
            })
        })
    }
}

type Memo = HashMap<(Partition, Vec<u32>), i64>;

fn mn_value(lambda: &Partition, cycles: &[u32], memo: &mut Memo) -> i64 {
    if cycles.is_empty() {
        return if lambda.is_empty() { 1 } else { 0 };
    }
    let key = (lambda.clone(), cycles.to_vec());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let k = cycles[0];
    let rest = &cycles[1..];
    let v = remove_strips(lambda, k)
        .into_iter()
        .map(|(shape, sign)| sign * mn_value(&shape, rest, memo))
        .sum();
    memo.insert(key, v);
    v
}

/// All shapes obtained by removing a border strip of length `k`, with the
/// strip sign `(-1)^{height}`.
fn remove_strips(lambda: &Partition, k: u32) -> Vec<(Partition, i64)> {
    let len = lambda.len();
    let beta: Vec<i64> = lambda
        .parts()
        .iter()
        .enumerate()
        .map(|(i, &p)| p as i64 + (len - 1 - i) as i64)
        .collect();
    let k = k as i64;
    let mut out = Vec::new();
    for (idx, &b) in beta.iter().enumerate() {
        let target = b - k;
        if target < 0 || beta.contains(&target) {
            continue;
        }
        let between = beta.iter().filter(|&&c| c > target && c < b).count();
        let mut moved = beta.clone();
        moved[idx] = target;
        moved.sort_unstable_by(|a, b| b.cmp(a));
        let parts: Vec<u32> = moved
            .iter()
            .enumerate()
            .map(|(i, &x)| (x - (len - 1 - i) as i64) as u32)
            .collect();
        let sign = if between % 2 == 0 { 1 } else { -1 };
        out.push((Partition::from_unsorted(parts), sign));
    }
    out
}

static TABLES: OnceLock<RwLock<HashMap<u32, Arc<CharacterTable>>>> = OnceLock::new();

fn tables() -> &'static RwLock<HashMap<u32, Arc<CharacterTable>>> {
    TABLES.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Process-wide cached character table of degree `d`.
pub fn character_table(d: u32) -> Arc<CharacterTable> {
    if let Some(t) = tables().read().expect("character cache poisoned").get(&d) {
        return Arc::clone(t);
    }
    let built = Arc::new(CharacterTable::build(d));
    let mut guard = tables().write().expect("character cache poisoned");
    Arc::clone(guard.entry(d).or_insert(built))
}

/// Seeds the cache with a table loaded from elsewhere. Ignored if the degree
/// is already present.
pub fn install_table(table: CharacterTable) {
    let mut guard = tables().write().expect("character cache poisoned");
    guard.entry(table.d).or_insert_with(|| Arc::new(table));
}

pub fn is_cached(d: u32) -> bool {
    tables().read().expect("character cache poisoned").contains_key(&d)
}

/// `chi_alpha(lambda)`: the irreducible character `lambda` evaluated on the
/// class of cycle type `alpha`.
pub fn character(alpha: &Partition, lambda: &Partition) -> Result<i64> {
    check_same_size(alpha, lambda)?;
    let t = character_table(alpha.size());
    let (l, a) = (t.index_of(lambda).unwrap(), t.index_of(alpha).unwrap());
    Ok(t.value(l, a))
}

/// Hook length formula.
pub fn dim_sym(lambda: &Partition) -> BigInt {
    let hooks: BigInt = lambda.hooks().iter().map(|&h| BigInt::from(h)).product();
    factorial(lambda.size()) / hooks
}

/// Dimension of the polynomial GL_N irrep, `Π (N + c)/h`.
pub fn dim_gl(lambda: &Partition, n: u32) -> Result<BigInt> {
    if lambda.len() > n as usize {
        return Err(Error::TooManyRows {
            partition: lambda.parts().to_vec(),
            rows: lambda.len(),
            n,
        });
    }
    let num: BigInt = lambda
        .contents()
        .iter()
        .map(|&c| BigInt::from(n as i64 + c))
        .product();
    let den: BigInt = lambda.hooks().iter().map(|&h| BigInt::from(h)).product();
    debug_assert!((&num % &den).is_zero());
    Ok(num / den)
}

/// Central character `ω_α(λ) = |C_α| χ_α(λ) / dim V^λ`.
pub fn omega(alpha: &Partition, lambda: &Partition) -> Result<BigRational> {
    check_same_size(alpha, lambda)?;
    let t = character_table(alpha.size());
    let (l, a) = (t.index_of(lambda).unwrap(), t.index_of(alpha).unwrap());
    Ok(t.omega(l, a).clone())
}
