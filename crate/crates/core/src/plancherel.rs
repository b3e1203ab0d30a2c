//! Row-restricted Plancherel measure and expectations of content observables.
//!
//! Everything here is exact. The row restriction `ℓ(λ) ≤ N` is applied to every
//! sum; its coincidence with the column restriction `λ₁ ≤ N` is checked in the
//! tests rather than assumed.

use std::collections::BTreeMap;

use num::{BigInt, BigRational, One, Zero};

use crate::characters::character_table;
use crate::error::{Error, Result};
use crate::par::Execution;
use crate::partitions::{check_same_size, factorial, Partition};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContentKind {
    Elementary,
    Complete,
}

/// Functions of a diagram obtained from its contents.
#[derive(Clone, Debug, PartialEq)]
pub enum ContentPoly {
    /// `Ω_N(λ) = Π (1 + c/N)`
    Omega(u32),
    /// `Ψ_ħ(λ) = Π (1 - ħc)`
    Psi(BigRational),
    /// `e_r` on the contents
    Elementary(usize),
    /// `f_r` (complete homogeneous) on the contents
    Complete(usize),
}

impl ContentPoly {
    pub fn eval(&self, lambda: &Partition) -> Result<BigRational> {
        Ok(match self {
            ContentPoly::Omega(n) => omega_n(lambda, *n)?,
            ContentPoly::Psi(hbar) => psi(lambda, hbar),
            ContentPoly::Elementary(r) => {
                BigRational::from_integer(content_sym(lambda, *r, ContentKind::Elementary))
            }
            ContentPoly::Complete(r) => {
                BigRational::from_integer(content_sym(lambda, *r, ContentKind::Complete))
            }
        })
    }
}

/// The observable `w` sandwiched in `⟨ω_α w ω_β⟩`.
#[derive(Clone, Debug, PartialEq)]
pub enum Observable {
    One,
    /// `Ω_N⁻¹` at the expectation's own `N`.
    OmegaInverse,
    Content(ContentPoly),
}

impl Observable {
    fn eval(&self, lambda: &Partition, n: u32) -> Result<BigRational> {
        match self {
            Observable::One => Ok(BigRational::one()),
            Observable::OmegaInverse => Ok(omega_n(lambda, n)?.recip()),
            Observable::Content(c) => c.eval(lambda),
        }
    }
}

pub fn omega_n(lambda: &Partition, n: u32) -> Result<BigRational> {
    if lambda.len() > n as usize {
        return Err(Error::TooManyRows {
            partition: lambda.parts().to_vec(),
            rows: lambda.len(),
            n,
        });
    }
    let n_big = BigInt::from(n);
    let num: BigInt = lambda.contents().iter().map(|&c| &n_big + BigInt::from(c)).product();
    Ok(BigRational::new(num, num::pow(n_big, lambda.size() as usize)))
}

pub fn psi(lambda: &Partition, hbar: &BigRational) -> BigRational {
    lambda
        .contents()
        .iter()
        .map(|&c| BigRational::one() - hbar * BigRational::from_integer(BigInt::from(c)))
        .product()
}

/// `e_r` or `f_r` evaluated on the content multiset.
pub fn content_sym(lambda: &Partition, r: usize, kind: ContentKind) -> BigInt {
    content_sym_sequence(lambda, r, kind).pop().unwrap()
}

/// `[s_0(λ), …, s_r(λ)]` for `s = e` or `f`, by the usual one-variable-at-a-time
/// recurrences, `O(r·d)` operations.
pub fn content_sym_sequence(lambda: &Partition, r: usize, kind: ContentKind) -> Vec<BigInt> {
    let mut acc = vec![BigInt::zero(); r + 1];
    acc[0] = BigInt::one();
    for c in lambda.contents() {
        let c = BigInt::from(c);
        match kind {
            // e_k ← e_k + c·e_{k-1}, descending so e_{k-1} is the old value
            ContentKind::Elementary => {
                for k in (1..=r).rev() {
                    let prev = acc[k - 1].clone();
                    acc[k] += &c * prev;
                }
            }
            // h_k ← h_k + c·h_{k-1}, ascending so h_{k-1} already includes c
            ContentKind::Complete => {
                for k in 1..=r {
                    let prev = acc[k - 1].clone();
                    acc[k] += &c * prev;
                }
            }
        }
    }
    acc
}

/// Plancherel mass function restricted to `ℓ(λ) ≤ N`.
#[derive(Clone, Debug)]
pub struct PlancherelWeight {
    pub d: u32,
    pub n: u32,
    /// `|S_N(d)| = Σ_{ℓ(λ)≤N} (dim V^λ)²`
    pub normalizer: BigInt,
    pub weights: Vec<(Partition, BigRational)>,
}

pub fn plancherel_weights(d: u32, n: u32) -> PlancherelWeight {
    let t = character_table(d);
    let admissible: Vec<usize> = (0..t.partitions().len())
        .filter(|&l| t.partitions()[l].len() <= n as usize)
        .collect();
    let normalizer: BigInt = admissible.iter().map(|&l| t.dim(l) * t.dim(l)).sum();
    let weights = admissible
        .iter()
        .map(|&l| {
            let sq = t.dim(l) * t.dim(l);
            (t.partitions()[l].clone(), BigRational::new(sq, normalizer.clone()))
        })
        .collect();
    PlancherelWeight {
        d,
        n,
        normalizer,
        weights,
    }
}

/// `P(LIS_d ≤ N)` via RSK: the restricted normalizer over `d!`.
pub fn lis_probability(d: u32, n: u32) -> BigRational {
    BigRational::new(plancherel_weights(d, n).normalizer, factorial(d))
}

/// Same as [`lis_probability`] but summing over diagrams with `λ₁ ≤ N`.
pub fn lis_probability_by_columns(d: u32, n: u32) -> BigRational {
    let t = character_table(d);
    let s: BigInt = (0..t.partitions().len())
        .filter(|&l| t.partitions()[l].first_row() <= n)
        .map(|l| t.dim(l) * t.dim(l))
        .sum();
    BigRational::new(s, factorial(d))
}

/// `P(LIS_d = k)` for `k = 0..=d`.
pub fn lis_distribution(d: u32) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); d as usize + 1];
    let mut prev = if d == 0 { BigRational::one() } else { BigRational::zero() };
    if d == 0 {
        out[0] = BigRational::one();
        return out;
    }
    for (k, slot) in out.iter_mut().enumerate().skip(1) {
        let cdf = lis_probability(d, k as u32);
        *slot = &cdf - &prev;
        prev = cdf;
    }
    out
}

pub const LIS_BRUTEFORCE_MAX_D: u32 = 9;

/// Direct count over all `d!` permutations with patience sorting.
pub fn lis_bruteforce(d: u32, n: u32) -> Result<BigRational> {
    lis_bruteforce_with(d, n, Execution::default())
}

pub fn lis_bruteforce_with(d: u32, n: u32, exec: Execution) -> Result<BigRational> {
    if d > LIS_BRUTEFORCE_MAX_D {
        return Err(Error::Guard {
            what: "lis_bruteforce degree",
            value: d as usize,
            limit: LIS_BRUTEFORCE_MAX_D as usize,
            hint: "",
        });
    }
    if d == 0 {
        return Ok(BigRational::one());
    }
    // one task per leading element; each walks its (d-1)! suffixes in lex order
    let counts = exec.map_range(d as usize, |first| {
        let mut rest: Vec<u8> = (0..d as u8).filter(|&x| x as usize != first).collect();
        let mut perm = Vec::with_capacity(d as usize);
        let mut count: u64 = 0;
        loop {
            perm.clear();
            perm.push(first as u8);
            perm.extend_from_slice(&rest);
            if longest_increasing(&perm) <= n as usize {
                count += 1;
            }
            if !next_permutation(&mut rest) {
                break;
            }
        }
        count
    });
    let total: u64 = counts.iter().sum();
    Ok(BigRational::new(BigInt::from(total), factorial(d)))
}

/// Patience-sorting length of the longest strictly increasing subsequence.
pub fn longest_increasing(seq: &[u8]) -> usize {
    let mut piles: Vec<u8> = Vec::new();
    for &x in seq {
        match piles.binary_search(&x) {
            Ok(i) | Err(i) if i < piles.len() => piles[i] = x,
            _ => piles.push(x),
        }
    }
    piles.len()
}

pub(crate) fn next_permutation(v: &mut [u8]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Which diagrams enter a restricted sum, on top of `ℓ(λ) ≤ N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Region {
    All,
    /// `λ₁ ≤ N`: inside the `N × N` square.
    Square,
    /// `λ₁ > N`
    OutsideSquare,
}

struct Term {
    lambda: usize,
    /// `w(λ) (dim V^λ)² / |S_N(d)|`
    weight: BigRational,
}

fn weighted_terms(d: u32, obs: &Observable, n: u32, region: Region) -> Result<(Vec<Term>, BigInt)> {
    let t = character_table(d);
    let normalizer: BigInt = (0..t.partitions().len())
        .filter(|&l| t.partitions()[l].len() <= n as usize)
        .map(|l| t.dim(l) * t.dim(l))
        .sum();
    let mut terms = Vec::new();
    for (l, lam) in t.partitions().iter().enumerate() {
        if lam.len() > n as usize {
            continue;
        }
        let keep = match region {
            Region::All => true,
            Region::Square => lam.first_row() <= n,
            Region::OutsideSquare => lam.first_row() > n,
        };
        if !keep {
            continue;
        }
        let w = obs.eval(lam, n)?;
        let sq = t.dim(l) * t.dim(l);
        terms.push(Term {
            lambda: l,
            weight: w * BigRational::new(sq, normalizer.clone()),
        });
    }
    Ok((terms, normalizer))
}

fn sandwich(alpha: &Partition, beta: &Partition, terms: &[Term]) -> BigRational {
    let t = character_table(alpha.size());
    let (a, b) = (t.index_of(alpha).unwrap(), t.index_of(beta).unwrap());
    terms
        .iter()
        .map(|term| t.omega(term.lambda, a) * t.omega(term.lambda, b) * &term.weight)
        .sum()
}

/// `⟨ω_α w ω_β⟩` over the row-restricted Plancherel measure.
pub fn expect(alpha: &Partition, beta: &Partition, obs: &Observable, n: u32) -> Result<BigRational> {
    check_same_size(alpha, beta)?;
    let (terms, _) = weighted_terms(alpha.size(), obs, n, Region::All)?;
    Ok(sandwich(alpha, beta, &terms))
}

/// `(⟨ω_α Ω_N⁻¹ ω_β⟩₁, ⟨ω_α Ω_N⁻¹ ω_β⟩₂)`: contributions of diagrams inside
/// and outside the `N × N` square. They sum to the full expectation.
pub fn expect_split(alpha: &Partition, beta: &Partition, n: u32) -> Result<(BigRational, BigRational)> {
    check_same_size(alpha, beta)?;
    let d = alpha.size();
    let (inside, _) = weighted_terms(d, &Observable::OmegaInverse, n, Region::Square)?;
    let (outside, _) = weighted_terms(d, &Observable::OmegaInverse, n, Region::OutsideSquare)?;
    Ok((sandwich(alpha, beta, &inside), sandwich(alpha, beta, &outside)))
}

/// `⟨ω_α w ω_β⟩` for every pair `α, β ⊢ d`, keyed in canonical order.
pub fn expectation_table(
    d: u32,
    obs: &Observable,
    n: u32,
    exec: Execution,
) -> Result<BTreeMap<(Partition, Partition), BigRational>> {
    let (terms, _) = weighted_terms(d, obs, n, Region::All)?;
    let t = character_table(d);
    let parts = t.partitions().to_vec();
    let rows = exec.map(&parts, |alpha| {
        parts
            .iter()
            .map(|beta| ((alpha.clone(), beta.clone()), sandwich(alpha, beta, &terms)))
            .collect::<Vec<_>>()
    });
    Ok(rows.into_iter().flatten().collect())
}

/// Geometric tail ratio of the `1/N` expansion of `⟨ω_α Ω_N⁻¹ ω_β⟩`: the
/// poles of `Ψ_ħ⁻¹` sit at `|ħ| ≥ 1/(d-1)`.
pub fn feynman_tail_ratio(d: u32, n: u32) -> BigRational {
    BigRational::new(BigInt::from(d.saturating_sub(1)), BigInt::from(n))
}

pub(crate) fn is_integer(q: &BigRational) -> bool {
    q.denom().is_one() || q.numer().is_zero()
}
