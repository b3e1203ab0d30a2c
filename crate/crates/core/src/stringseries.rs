//! Truncated string series in the power-sum basis.
//!
//! A series is graded by degree `d`. Its degree-`d` part is a finite linear
//! combination of monomials `p_α(A) p_β(B)` with `α, β ⊢ d` for the two-sided
//! (HCIZ) variant, or of `p_β(C)` for the one-sided (BGW) variant, keyed by
//! `(∅, β)`. Monomials multiply by concatenating partitions, so the product
//! of a degree-`j` and a degree-`k` term is a degree-`j+k` term.

use std::collections::BTreeMap;
use std::fmt::Debug;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::monotone::{connected_table, walk_table};
use crate::par::Execution;
use crate::partitions::{enumerate_partitions, factorial, Partition};
use crate::plancherel::{expect, Observable};
use crate::scalar::Scalar;

pub type Key = (Partition, Partition);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SeriesKind {
    /// `∫ e^{z N Tr(A U B U†)} dU`
    Hciz,
    /// `∫ e^{z N Tr(A U + B U†)} dU`
    Bgw,
}

impl SeriesKind {
    /// Power of `z` carried by a degree-`d` term.
    pub fn z_power(self, d: usize) -> usize {
        match self {
            SeriesKind::Hciz => d,
            SeriesKind::Bgw => 2 * d,
        }
    }

    fn key(self, alpha: Partition, beta: Partition) -> Key {
        match self {
            SeriesKind::Hciz => (alpha, beta),
            SeriesKind::Bgw => (Partition::empty(), beta),
        }
    }

    /// Number of parts entering the `N`-power bookkeeping.
    fn lengths(self, key: &Key) -> usize {
        key.0.len() + key.1.len()
    }
}

/// Coefficient ring of a string series.
pub trait Coefficient: Clone + Debug + Send + Sync + PartialEq {
    fn zero_like(&self) -> Self;
    fn is_zero_coeff(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn scale(&self, q: &BigRational) -> Self;
}

impl Coefficient for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn is_zero_coeff(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, q: &BigRational) -> Self {
        self * q
    }
}

/// Polynomial in `ħ` truncated above a fixed order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HbarPoly {
    coeffs: Vec<BigRational>,
}

impl HbarPoly {
    pub fn zero(order: usize) -> Self {
        HbarPoly {
            coeffs: vec![BigRational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut p = HbarPoly::zero(order);
        p.coeffs[0] = BigRational::one();
        p
    }

    pub fn from_coefficients(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty());
        HbarPoly { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn eval(&self, hbar: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * hbar + c)
    }
}

impl Coefficient for HbarPoly {
    fn zero_like(&self) -> Self {
        HbarPoly::zero(self.order())
    }
    fn is_zero_coeff(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
    fn add_ref(&self, other: &Self) -> Self {
        let n = self.coeffs.len().min(other.coeffs.len());
        HbarPoly {
            coeffs: (0..n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect(),
        }
    }
    fn mul_ref(&self, other: &Self) -> Self {
        let n = self.coeffs.len().min(other.coeffs.len());
        let mut out = vec![BigRational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n - i) {
                out[i + j] += a * b;
            }
        }
        HbarPoly { coeffs: out }
    }
    fn scale(&self, q: &BigRational) -> Self {
        HbarPoly {
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }
}

/// Inputs a series can be evaluated on.
#[derive(Clone, Copy, Debug)]
pub enum Alphabet<'a, F> {
    Pair(&'a [F], &'a [F]),
    Single(&'a [F]),
}

#[derive(Clone, Debug, PartialEq)]
pub struct StringSeries<C> {
    kind: SeriesKind,
    max_degree: usize,
    unit: C,
    degrees: Vec<BTreeMap<Key, C>>,
}

impl<C: Coefficient> StringSeries<C> {
    /// Zero series; `unit` fixes the multiplicative identity of `C`.
    pub fn zero(kind: SeriesKind, max_degree: usize, unit: C) -> Self {
        StringSeries {
            kind,
            max_degree,
            unit,
            degrees: vec![BTreeMap::new(); max_degree + 1],
        }
    }

    pub fn one(kind: SeriesKind, max_degree: usize, unit: C) -> Self {
        let mut s = Self::zero(kind, max_degree, unit.clone());
        s.degrees[0].insert((Partition::empty(), Partition::empty()), unit);
        s
    }

    pub fn kind(&self) -> SeriesKind {
        self.kind
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn unit(&self) -> &C {
        &self.unit
    }

    pub fn degree(&self, d: usize) -> &BTreeMap<Key, C> {
        &self.degrees[d]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Key, &C)> {
        self.degrees.iter().flat_map(|m| m.iter())
    }

    pub fn get(&self, alpha: &Partition, beta: &Partition) -> Option<&C> {
        let d = beta.size() as usize;
        if d > self.max_degree {
            return None;
        }
        let key = self.kind.key(alpha.clone(), beta.clone());
        self.degrees[d].get(&key)
    }

    pub fn constant(&self) -> Option<&C> {
        self.degrees[0].values().next()
    }

    /// Sets a coefficient; terms above the truncation order are discarded.
    pub fn insert(&mut self, alpha: Partition, beta: Partition, c: C) -> Result<()> {
        if self.kind == SeriesKind::Hciz && alpha.size() != beta.size() {
            return Err(Error::SizeMismatch {
                left: alpha.size(),
                right: beta.size(),
            });
        }
        let d = beta.size() as usize;
        if d <= self.max_degree {
            let key = self.kind.key(alpha, beta);
            if c.is_zero_coeff() {
                self.degrees[d].remove(&key);
            } else {
                self.degrees[d].insert(key, c);
            }
        }
        Ok(())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.kind != other.kind {
            return Err(Error::VariantMismatch);
        }
        if self.max_degree != other.max_degree {
            return Err(Error::LengthMismatch {
                expected: self.max_degree,
                got: other.max_degree,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (d, m) in other.degrees.iter().enumerate() {
            for (k, v) in m {
                let sum = match out.degrees[d].get(k) {
                    Some(x) => x.add_ref(v),
                    None => v.clone(),
                };
                insert_clean(&mut out.degrees[d], k.clone(), sum);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        let degrees = self
            .degrees
            .iter()
            .map(|m| {
                let mut out = BTreeMap::new();
                for (k, v) in m {
                    insert_clean(&mut out, k.clone(), v.scale(q));
                }
                out
            })
            .collect();
        StringSeries {
            degrees,
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-BigRational::one()))
    }

    /// Applies `f` to each coefficient together with its key.
    pub fn map_coefficients<F>(&self, f: F) -> Self
    where
        F: Fn(&Key, &C) -> C,
    {
        let degrees = self
            .degrees
            .iter()
            .map(|m| {
                let mut out = BTreeMap::new();
                for (k, v) in m {
                    insert_clean(&mut out, k.clone(), f(k, v));
                }
                out
            })
            .collect();
        StringSeries {
            degrees,
            ..self.clone()
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.mul_with(other, Execution::default())
    }

    pub fn mul_with(&self, other: &Self, exec: Execution) -> Result<Self> {
        self.check_compatible(other)?;
        let degrees = exec.map_range(self.max_degree + 1, |n| {
            let mut acc = BTreeMap::new();
            for k in 0..=n {
                product_into(&mut acc, &self.degrees[k], &other.degrees[n - k], None);
            }
            acc
        });
        Ok(StringSeries {
            degrees,
            ..self.clone()
        })
    }

    fn check_constant(&self, op: &'static str, expected: &'static str, want_one: bool) -> Result<()> {
        let ok = match self.constant() {
            Some(c) => want_one && c == &self.unit,
            None => !want_one,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::ConstantTerm { op, expected })
        }
    }

    /// `log S` for `S` with constant term 1:
    /// `T_n = S_n − (1/n) Σ_{k<n} k T_k S_{n−k}`.
    pub fn log(&self) -> Result<Self> {
        self.check_constant("log", "1", true)?;
        let mut out = Self::zero(self.kind, self.max_degree, self.unit.clone());
        for n in 1..=self.max_degree {
            let mut acc = BTreeMap::new();
            for k in 1..n {
                let w = BigRational::new(BigInt::from(k), BigInt::from(n));
                product_into(&mut acc, &out.degrees[k], &self.degrees[n - k], Some(&w));
            }
            let mut t = self.degrees[n].clone();
            for (key, v) in acc {
                let val = match t.get(&key) {
                    Some(x) => x.add_ref(&v.scale(&-BigRational::one())),
                    None => v.scale(&-BigRational::one()),
                };
                insert_clean(&mut t, key, val);
            }
            out.degrees[n] = t;
        }
        Ok(out)
    }

    /// `exp S` for `S` without constant term:
    /// `E_n = (1/n) Σ_{k≤n} k S_k E_{n−k}`.
    pub fn exp(&self) -> Result<Self> {
        self.check_constant("exp", "0", false)?;
        let mut out = Self::one(self.kind, self.max_degree, self.unit.clone());
        for n in 1..=self.max_degree {
            let mut acc = BTreeMap::new();
            for k in 1..=n {
                let w = BigRational::new(BigInt::from(k), BigInt::from(n));
                product_into(&mut acc, &self.degrees[k], &out.degrees[n - k], Some(&w));
            }
            out.degrees[n] = acc;
        }
        Ok(out)
    }
}

fn insert_clean<C: Coefficient>(map: &mut BTreeMap<Key, C>, key: Key, value: C) {
    if value.is_zero_coeff() {
        map.remove(&key);
    } else {
        map.insert(key, value);
    }
}

fn product_into<C: Coefficient>(
    acc: &mut BTreeMap<Key, C>,
    left: &BTreeMap<Key, C>,
    right: &BTreeMap<Key, C>,
    weight: Option<&BigRational>,
) {
    for (ka, va) in left {
        let va = match weight {
            Some(w) => va.scale(w),
            None => va.clone(),
        };
        for (kb, vb) in right {
            let key = (ka.0.union(&kb.0), ka.1.union(&kb.1));
            let term = va.mul_ref(vb);
            let val = match acc.get(&key) {
                Some(x) => x.add_ref(&term),
                None => term,
            };
            insert_clean(acc, key, val);
        }
    }
}

impl StringSeries<BigRational> {
    /// Per-degree sums of coefficients times power-sum monomials, without the
    /// `z` factor.
    pub fn degree_terms<F: Scalar>(&self, alphabet: Alphabet<'_, F>) -> Result<Vec<F>> {
        let (pa, pb) = match (self.kind, alphabet) {
            (SeriesKind::Hciz, Alphabet::Pair(a, b)) => {
                if a.len() != b.len() {
                    return Err(Error::LengthMismatch {
                        expected: a.len(),
                        got: b.len(),
                    });
                }
                (power_sums(a, self.max_degree), power_sums(b, self.max_degree))
            }
            (SeriesKind::Bgw, Alphabet::Single(c)) => {
                (Vec::new(), power_sums(c, self.max_degree))
            }
            _ => return Err(Error::VariantMismatch),
        };
        let monomial = |sums: &[F], lam: &Partition| {
            lam.parts()
                .iter()
                .fold(F::one(), |acc, &k| acc * sums[k as usize].clone())
        };
        Ok(self
            .degrees
            .iter()
            .map(|m| {
                m.iter().fold(F::zero(), |acc, ((a, b), c)| {
                    let mut term = F::from_rational(c) * monomial(&pb, b);
                    if self.kind == SeriesKind::Hciz {
                        term = term * monomial(&pa, a);
                    }
                    acc + term
                })
            })
            .collect())
    }

    /// `Σ_d z^{d}` (HCIZ) or `Σ_d z^{2d}` (BGW) times the degree terms.
    pub fn evaluate<F: Scalar>(&self, z: &F, alphabet: Alphabet<'_, F>) -> Result<F> {
        let terms = self.degree_terms(alphabet)?;
        Ok(terms
            .into_iter()
            .enumerate()
            .fold(F::zero(), |acc, (d, t)| acc + Scalar::pow(z, self.kind.z_power(d) as u32) * t))
    }
}

/// `p_k(x)` for `k = 0..=max`, with `p_0 = 1`.
pub fn power_sums<F: Scalar>(x: &[F], max: usize) -> Vec<F> {
    let mut out = vec![F::one()];
    let mut powers: Vec<F> = x.to_vec();
    for k in 1..=max {
        if k > 1 {
            for (p, xi) in powers.iter_mut().zip(x) {
                *p = p.clone() * xi.clone();
            }
        }
        out.push(powers.iter().fold(F::zero(), |a, p| a + p.clone()));
    }
    out
}

fn check_degree(max_degree: usize) -> Result<()> {
    const LIMIT: usize = 12;
    if max_degree > LIMIT {
        return Err(Error::Guard {
            what: "series degree",
            value: max_degree,
            limit: LIMIT,
            hint: "",
        });
    }
    Ok(())
}

/// Series of `∫ e^{zN Tr(AUBU†)} dU` in the `p_α(A) p_β(B)` basis truncated
/// at degree `D`. Coefficients are `(1/d!) P(LIS_d ≤ N) ⟨ω_α Ω_N⁻¹ ω_β⟩`.
pub fn assemble_hciz(n: u32, max_degree: usize) -> Result<StringSeries<BigRational>> {
    check_degree(max_degree)?;
    let mut s = StringSeries::one(SeriesKind::Hciz, max_degree, BigRational::one());
    for d in 1..=max_degree as u32 {
        let table = crate::plancherel::expectation_table(
            d,
            &Observable::OmegaInverse,
            n,
            Execution::default(),
        )?;
        let w = restricted_normalizer(d, n) / BigRational::from_integer(factorial(d));
        for ((a, b), v) in table {
            s.insert(a, b, v * &w)?;
        }
    }
    Ok(s)
}

/// Series of `∫ e^{zN Tr(AU + BU†)} dU` in the `p_β(C)` basis, `C = AB`,
/// evaluation multiplying by `z^{2d}`.
pub fn assemble_bgw(n: u32, max_degree: usize) -> Result<StringSeries<BigRational>> {
    check_degree(max_degree)?;
    let mut s = StringSeries::one(SeriesKind::Bgw, max_degree, BigRational::one());
    for d in 1..=max_degree as u32 {
        let w = restricted_normalizer(d, n)
            * BigRational::new(num::pow(BigInt::from(n), d as usize), factorial(d));
        for beta in enumerate_partitions(d, None) {
            let v = expect(&Partition::ones(d), &beta, &Observable::OmegaInverse, n)?;
            s.insert(Partition::empty(), beta, v * &w)?;
        }
    }
    Ok(s)
}

/// `P(LIS_d ≤ N) = |S_N(d)| / d!`
fn restricted_normalizer(d: u32, n: u32) -> BigRational {
    BigRational::new(crate::plancherel::plancherel_weights(d, n).normalizer, factorial(d))
}

pub fn assemble(kind: SeriesKind, n: u32, max_degree: usize) -> Result<StringSeries<BigRational>> {
    match kind {
        SeriesKind::Hciz => assemble_hciz(n, max_degree),
        SeriesKind::Bgw => assemble_bgw(n, max_degree),
    }
}

/// Stable series `Σ_d Σ_r ħ^r W^r(α,β)/d! p_α p_β` with `ħ = −1/N`,
/// truncated at `ħ^R`. The one-sided variant takes `α = (1^d)`.
pub fn stable_series(kind: SeriesKind, max_degree: usize, max_steps: usize) -> StringSeries<HbarPoly> {
    let mut s = StringSeries::one(kind, max_degree, HbarPoly::one(max_steps));
    let single = kind == SeriesKind::Bgw;
    for d in 1..=max_degree as u32 {
        let dfact = factorial(d);
        for ((a, b), counts) in walk_table(d, max_steps, single, Execution::default()) {
            let coeffs = counts
                .into_iter()
                .map(|w| BigRational::new(w, dfact.clone()))
                .collect();
            s.insert(a, b, HbarPoly::from_coefficients(coeffs)).unwrap();
        }
    }
    s
}

/// Specializes `ħ = −1/N`.
pub fn specialize(stable: &StringSeries<HbarPoly>, n: u32) -> StringSeries<BigRational> {
    let hbar = BigRational::new(-BigInt::one(), BigInt::from(n));
    let mut out = StringSeries::zero(stable.kind, stable.max_degree, BigRational::one());
    for (d, m) in stable.degrees.iter().enumerate() {
        for (k, v) in m {
            insert_clean(&mut out.degrees[d], k.clone(), v.eval(&hbar));
        }
    }
    out
}

/// Largest degree at which the HCIZ string polynomial is nontrivial.
pub fn string_polynomial_degree(n: u32) -> usize {
    (n as usize * n as usize) / 4
}

/// The string polynomial `Σ_{d ≤ N²/4} …`: full-`S(d)` expectations divided by
/// the restricted mass, as a series; degrees above `⌊N²/4⌋` are zero.
pub fn string_polynomial(kind: SeriesKind, n: u32, max_degree: usize) -> Result<StringSeries<BigRational>> {
    let s = assemble(kind, n, max_degree)?;
    let cutoff = string_polynomial_degree(n);
    let mut out = StringSeries::zero(kind, max_degree, BigRational::one());
    for d in 0..=max_degree.min(cutoff) {
        let scale = if d == 0 {
            BigRational::one()
        } else {
            restricted_normalizer(d as u32, n).recip()
        };
        for (k, v) in &s.degrees[d] {
            insert_clean(&mut out.degrees[d], k.clone(), v * &scale);
        }
    }
    Ok(out)
}

/// Normalized log coefficients
/// `L_N(α,β) = d! N^{ℓ(α)+ℓ(β)} [log S]_{α,β}` of the assembled series.
pub fn log_coefficients(s: &StringSeries<BigRational>, n: u32) -> Result<BTreeMap<Key, BigRational>> {
    let log = s.log()?;
    Ok(log
        .iter()
        .map(|(k, v)| {
            let d = k.1.size();
            let scale = BigRational::from_integer(
                factorial(d) * num::pow(BigInt::from(n), s.kind.lengths(k)),
            );
            (k.clone(), v * scale)
        })
        .collect())
}

/// Coefficients of `F_N^{(g)}` (HCIZ) or `G_N^{(g)}` (BGW) in the power-sum
/// basis up to degree `D`:
/// `(−1)^{ℓ(α)+ℓ(β)} H_g(α,β) / (d! N^{ℓ(α)+ℓ(β)})`, respectively
/// `(−1)^{d+ℓ(β)} H_g(β) / (d! N^{ℓ(β)})`.
pub fn free_energy(kind: SeriesKind, n: u32, g: u32, max_degree: usize) -> Result<StringSeries<BigRational>> {
    check_degree(max_degree)?;
    let mut out = StringSeries::zero(kind, max_degree, BigRational::one());
    let rmax = max_steps_for_genus(g, max_degree);
    let table = connected_table(kind, max_degree as u32, rmax);
    for d in 1..=max_degree as u32 {
        let alphas = match kind {
            SeriesKind::Hciz => enumerate_partitions(d, None),
            SeriesKind::Bgw => vec![Partition::ones(d)],
        };
        for alpha in &alphas {
            for beta in enumerate_partitions(d, None) {
                let r = 2 * g as i64 - 2 + alpha.len() as i64 + beta.len() as i64;
                if r < 0 {
                    continue;
                }
                let key = kind.key(alpha.clone(), beta.clone());
                let h = table.get(&key.0, &key.1, r as usize);
                if h.is_zero() {
                    continue;
                }
                let ell = kind.lengths(&key);
                let sign_exp = match kind {
                    SeriesKind::Hciz => ell,
                    SeriesKind::Bgw => d as usize + ell,
                };
                let sign = if sign_exp % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                let v = BigRational::new(
                    sign * h,
                    factorial(d) * num::pow(BigInt::from(n), ell),
                );
                out.insert(key.0, key.1, v)?;
            }
        }
    }
    Ok(out)
}

/// Largest `r_g` reachable at degree `≤ D`.
fn max_steps_for_genus(g: u32, max_degree: usize) -> usize {
    2 * g as usize + 2 * max_degree - 2
}

/// `Σ_{g ≤ k} N^{2−2g} F_N^{(g)}` up to degree `D`.
pub fn free_energy_sum(kind: SeriesKind, n: u32, k: u32, max_degree: usize) -> Result<StringSeries<BigRational>> {
    let mut acc = StringSeries::zero(kind, max_degree, BigRational::one());
    for g in 0..=k {
        let scale = n_power(n, 2 - 2 * g as i64);
        acc = acc.add(&free_energy(kind, n, g, max_degree)?.scale(&scale))?;
    }
    Ok(acc)
}

/// `N^e` for a signed exponent.
pub fn n_power(n: u32, e: i64) -> BigRational {
    let base = BigRational::from_integer(BigInt::from(n));
    if e >= 0 {
        num::pow(base, e as usize)
    } else {
        num::pow(base.recip(), (-e) as usize)
    }
}

/// Genus expansion residual coefficients
/// `Δ_N^{(k)}(α,β) = N^{2k−2} (L_N(α,β) − Σ_{g≤k} (−1)^{ℓ(α)+ℓ(β)} N^{2−2g} H_g(α,β))`.
/// For the one-sided variant the sign is `(−1)^{d+ℓ(β)}` and `ℓ(α)` is dropped.
/// Requires `N ≥ D` so that the restricted and full measures agree.
pub fn discrepancy(kind: SeriesKind, n: u32, k: u32, max_degree: usize) -> Result<BTreeMap<Key, BigRational>> {
    if (n as usize) < max_degree {
        return Err(Error::InvalidArgument(format!(
            "discrepancy needs N >= D, got N = {n}, D = {max_degree}"
        )));
    }
    let s = assemble(kind, n, max_degree)?;
    let logs = log_coefficients(&s, n)?;
    let rmax = max_steps_for_genus(k, max_degree);
    let table = connected_table(kind, max_degree as u32, rmax);
    let mut out = BTreeMap::new();
    for d in 1..=max_degree as u32 {
        let alphas = match kind {
            SeriesKind::Hciz => enumerate_partitions(d, None),
            SeriesKind::Bgw => vec![Partition::ones(d)],
        };
        for alpha in &alphas {
            for beta in enumerate_partitions(d, None) {
                let key = kind.key(alpha.clone(), beta.clone());
                let ell = kind.lengths(&key);
                let sign_exp = match kind {
                    SeriesKind::Hciz => ell,
                    SeriesKind::Bgw => d as usize + ell,
                };
                let sign = if sign_exp % 2 == 0 { BigRational::one() } else { -BigRational::one() };
                let mut predicted = BigRational::zero();
                for g in 0..=k {
                    let r = 2 * g as i64 - 2 + alpha.len() as i64 + beta.len() as i64;
                    if r < 0 {
                        continue;
                    }
                    let h = BigRational::from_integer(table.get(&key.0, &key.1, r as usize));
                    predicted += h * n_power(n, 2 - 2 * g as i64);
                }
                let l = logs.get(&key).cloned().unwrap_or_else(BigRational::zero);
                let v = (l - sign.clone() * predicted) * n_power(n, 2 * k as i64 - 2);
                out.insert(key, v);
            }
        }
    }
    Ok(out)
}

/// Bundle of the genus decomposition for reporting.
#[derive(Clone, Debug)]
pub struct FreeEnergyBundle {
    pub kind: SeriesKind,
    pub n: u32,
    pub max_degree: usize,
    pub genera: Vec<StringSeries<BigRational>>,
}

impl FreeEnergyBundle {
    pub fn new(kind: SeriesKind, n: u32, max_genus: u32, max_degree: usize) -> Result<Self> {
        let genera = (0..=max_genus)
            .map(|g| free_energy(kind, n, g, max_degree))
            .collect::<Result<_>>()?;
        Ok(FreeEnergyBundle {
            kind,
            n,
            max_degree,
            genera,
        })
    }
}

/// `max |c|` over the coefficients of a series.
pub fn max_abs_coefficient(s: &StringSeries<BigRational>) -> BigRational {
    s.iter()
        .map(|(_, v)| v.abs())
        .max()
        .unwrap_or_else(BigRational::zero)
}
