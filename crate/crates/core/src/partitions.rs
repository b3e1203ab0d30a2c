//! Young diagrams: hooks, contents, conjugation, class sizes.

use std::cmp::Ordering;
use std::fmt;

use num::{BigInt, One};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A partition stored as weakly decreasing positive parts.
///
/// The total order is the canonical one used for every partition-indexed map:
/// smaller size first, then reverse-lexicographic within a size, so that
/// `(3) < (2,1) < (1,1,1)`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition {
    parts: Vec<u32>,
    size: u32,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(parts));
        }
        let size = parts.iter().sum();
        Ok(Partition { parts, size })
    }

    /// Sorts the parts and drops zeros.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let size = parts.iter().sum();
        Partition { parts, size }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new(), size: 0 }
    }

    /// `(1^d)`, the cycle type of the identity.
    pub fn ones(d: u32) -> Self {
        Partition {
            parts: vec![1; d as usize],
            size: d,
        }
    }

    /// The one-row diagram `(d)`.
    pub fn row(d: u32) -> Self {
        if d == 0 {
            Self::empty()
        } else {
            Partition { parts: vec![d], size: d }
        }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of cells.
    pub fn size(&self) -> u32 {
        self.size
    }

    /// Number of rows, ℓ(λ).
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// First row length λ₁ (0 for the empty partition).
    pub fn first_row(&self) -> u32 {
        self.parts.first().copied().unwrap_or(0)
    }

    /// Multiset union: sorted concatenation of parts.
    pub fn union(&self, other: &Partition) -> Partition {
        let mut parts = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.parts.len() || j < other.parts.len() {
            let take_left = match (self.parts.get(i), other.parts.get(j)) {
                (Some(a), Some(b)) => a >= b,
                (Some(_), None) => true,
                _ => false,
            };
            if take_left {
                parts.push(self.parts[i]);
                i += 1;
            } else {
                parts.push(other.parts[j]);
                j += 1;
            }
        }
        Partition {
            parts,
            size: self.size + other.size,
        }
    }

    pub fn conjugate(&self) -> Partition {
        let cols = self.first_row() as usize;
        let mut parts = vec![0u32; cols];
        for &p in &self.parts {
            for c in parts.iter_mut().take(p as usize) {
                *c += 1;
            }
        }
        Partition { parts, size: self.size }
    }

    /// Cells as `(row, column)`, 0-indexed, row-major.
    pub fn cells(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| (0..p).map(move |j| (i as u32, j)))
    }

    /// Contents `j - i` in row-major cell order.
    pub fn contents(&self) -> Vec<i64> {
        self.cells().map(|(i, j)| j as i64 - i as i64).collect()
    }

    pub fn hooks(&self) -> Vec<u32> {
        let conj = self.conjugate();
        self.cells()
            .map(|(i, j)| {
                let arm = self.parts[i as usize] - j - 1;
                let leg = conj.parts[j as usize] - i - 1;
                arm + leg + 1
            })
            .collect()
    }

    pub fn cell_stats(&self) -> CellStats {
        CellStats {
            contents: self.contents(),
            hooks: self.hooks(),
        }
    }

    /// Multiplicities `m_k` for `k = 1..=largest part`.
    pub fn multiplicities(&self) -> Vec<u32> {
        let mut m = vec![0u32; self.first_row() as usize];
        for &p in &self.parts {
            m[p as usize - 1] += 1;
        }
        m
    }

    /// Centralizer order `z_α = Π k^{m_k} m_k!`.
    pub fn centralizer_order(&self) -> BigInt {
        self.multiplicities()
            .iter()
            .enumerate()
            .fold(BigInt::one(), |acc, (k, &m)| {
                acc * num::pow(BigInt::from(k + 1), m as usize) * factorial(m)
            })
    }

    /// Number of permutations of cycle type `self`, `d!/z_α`.
    pub fn class_size(&self) -> BigInt {
        factorial(self.size) / self.centralizer_order()
    }

    /// Whether the diagram fits in `rows × cols`.
    pub fn fits_in(&self, rows: u32, cols: u32) -> bool {
        self.len() as u32 <= rows && self.first_row() <= cols
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size
            .cmp(&other.size)
            .then_with(|| other.parts.cmp(&self.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;
    fn try_from(parts: Vec<u32>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// JSON-style array, e.g. `[2,1]`.
impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("]")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellStats {
    pub contents: Vec<i64>,
    pub hooks: Vec<u32>,
}

pub fn cell_stats(lambda: &Partition) -> CellStats {
    lambda.cell_stats()
}

pub fn conjugate(lambda: &Partition) -> Partition {
    lambda.conjugate()
}

pub fn class_size(alpha: &Partition) -> BigInt {
    alpha.class_size()
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// All partitions of `d` with at most `max_rows` rows, in canonical
/// (reverse-lexicographic) order.
pub fn enumerate_partitions(d: u32, max_rows: Option<usize>) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    let rows = max_rows.unwrap_or(usize::MAX);
    fill(d, d, rows, &mut current, &mut out);
    out
}

fn fill(remaining: u32, cap: u32, rows: usize, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition {
            parts: current.clone(),
            size: current.iter().sum(),
        });
        return;
    }
    if current.len() == rows {
        return;
    }
    for p in (1..=cap.min(remaining)).rev() {
        current.push(p);
        fill(remaining - p, p, rows, current, out);
        current.pop();
    }
}

/// Step count `r = 2g - 2 + ℓ(α) + ℓ(β)` fixed by the Riemann–Hurwitz formula.
/// Negative values mean the corresponding count vanishes.
pub fn riemann_hurwitz_steps(g: i64, alpha: &Partition, beta: &Partition) -> Result<i64> {
    check_same_size(alpha, beta)?;
    Ok(2 * g - 2 + alpha.len() as i64 + beta.len() as i64)
}

pub(crate) fn check_same_size(alpha: &Partition, beta: &Partition) -> Result<()> {
    if alpha.size() != beta.size() {
        return Err(Error::SizeMismatch {
            left: alpha.size(),
            right: beta.size(),
        });
    }
    Ok(())
}
