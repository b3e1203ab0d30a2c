//! Monotone walks on the transposition Cayley graph of S(d) and monotone
//! Hurwitz numbers.
//!
//! Production counts go through the content route
//! `W^r(α,β) = ⟨ω_α f_r ω_β⟩`, which costs a sum over diagrams. The depth-first
//! enumerations are exponential in `r` and exist as oracles.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num::{BigInt, BigRational, Zero};

use crate::characters::character_table;
use crate::error::{Error, Result};
use crate::par::Execution;
use crate::partitions::{
    check_same_size, enumerate_partitions, factorial, riemann_hurwitz_steps, Partition,
};
use crate::plancherel::{content_sym_sequence, is_integer, next_permutation, ContentKind};
use crate::stringseries::{stable_series, SeriesKind};

/// A walk `start · τ_1 · … · τ_r`, permutations multiplied left to right.
/// Steps are transpositions `(i, j)` with `i < j`, 0-indexed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Walk {
    pub start: Vec<u8>,
    pub steps: Vec<(u8, u8)>,
}

impl Walk {
    pub fn endpoint(&self) -> Vec<u8> {
        let mut perm = self.start.clone();
        for &(i, j) in &self.steps {
            apply_transposition(&mut perm, i, j);
        }
        perm
    }

    /// Labels (larger elements) weakly increase.
    pub fn is_monotone(&self) -> bool {
        self.steps.iter().all(|&(i, j)| i < j) && self.steps.windows(2).all(|w| w[0].1 <= w[1].1)
    }

    /// Start cycles, steps and end cycles connect all of `[d]`.
    pub fn is_transitive(&self) -> bool {
        let d = self.start.len();
        let mut uf = UnionFind::new(d);
        uf.absorb_cycles(&self.start);
        for &(i, j) in &self.steps {
            uf.union(i as usize, j as usize);
        }
        uf.absorb_cycles(&self.endpoint());
        uf.components() <= 1
    }
}

/// `(π·(i j))(x) = (i j)(π(x))`: swap the values `i` and `j` in one-line form.
fn apply_transposition(perm: &mut [u8], i: u8, j: u8) {
    for v in perm.iter_mut() {
        if *v == i {
            *v = j;
        } else if *v == j {
            *v = i;
        }
    }
}

pub fn cycle_type(perm: &[u8]) -> Partition {
    let mut seen = [false; 32];
    let mut parts = Vec::new();
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let (mut x, mut len) = (s, 0u32);
        while !seen[x] {
            seen[x] = true;
            x = perm[x] as usize;
            len += 1;
        }
        parts.push(len);
    }
    Partition::from_unsorted(parts)
}

pub fn permutations_of_type(alpha: &Partition) -> Vec<Vec<u8>> {
    let d = alpha.size() as u8;
    let mut perm: Vec<u8> = (0..d).collect();
    let mut out = Vec::new();
    loop {
        if &cycle_type(&perm) == alpha {
            out.push(perm.clone());
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    out
}

#[derive(Clone, Copy)]
struct UnionFind {
    parent: [u8; 16],
    len: usize,
}

impl UnionFind {
    fn new(len: usize) -> Self {
        let mut parent = [0u8; 16];
        for (i, p) in parent.iter_mut().enumerate() {
            *p = i as u8;
        }
        UnionFind { parent, len }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let up = self.parent[x] as usize;
            self.parent[x] = self.parent[up];
            x = up;
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb) as u8;
        }
    }

    fn absorb_cycles(&mut self, perm: &[u8]) {
        for (x, &y) in perm.iter().enumerate() {
            self.union(x, y as usize);
        }
    }

    fn components(&mut self) -> usize {
        (0..self.len).filter(|&x| self.find(x) == x).count()
    }
}

/// Search-space limits for the exhaustive enumerations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WalkGuard {
    pub max_degree: u32,
    pub max_steps: usize,
}

impl Default for WalkGuard {
    fn default() -> Self {
        WalkGuard {
            max_degree: 6,
            max_steps: 8,
        }
    }
}

impl WalkGuard {
    fn check(&self, d: u32, r: usize) -> Result<()> {
        const HINT: &str = "; use the jm route";
        if d > self.max_degree || d > 16 {
            return Err(Error::Guard {
                what: "walk enumeration degree",
                value: d as usize,
                limit: self.max_degree as usize,
                hint: HINT,
            });
        }
        if r > self.max_steps {
            return Err(Error::Guard {
                what: "walk enumeration steps",
                value: r,
                limit: self.max_steps,
                hint: HINT,
            });
        }
        Ok(())
    }
}

/// Endpoint cycle-type histogram of all monotone `r`-step walks starting in `C_α`.
pub fn endpoint_histogram(
    alpha: &Partition,
    r: usize,
    transitive_only: bool,
    guard: WalkGuard,
    exec: Execution,
) -> Result<BTreeMap<Partition, u64>> {
    let d = alpha.size();
    guard.check(d, r)?;
    let starts = permutations_of_type(alpha);
    let partial = exec.map(&starts, |start| {
        let mut hist = HashMap::new();
        let mut perm = start.clone();
        let mut uf = UnionFind::new(d as usize);
        uf.absorb_cycles(start);
        dfs(&mut perm, 1, r, uf, transitive_only, &mut hist);
        hist
    });
    let mut out = BTreeMap::new();
    for hist in partial {
        for (k, v) in hist {
            *out.entry(k).or_insert(0) += v;
        }
    }
    Ok(out)
}

fn dfs(
    perm: &mut Vec<u8>,
    min_label: usize,
    remaining: usize,
    uf: UnionFind,
    transitive_only: bool,
    hist: &mut HashMap<Partition, u64>,
) {
    if remaining == 0 {
        if transitive_only {
            let mut uf = uf;
            uf.absorb_cycles(perm);
            if uf.components() > 1 {
                return;
            }
        }
        *hist.entry(cycle_type(perm)).or_insert(0) += 1;
        return;
    }
    let d = perm.len();
    for j in min_label..d {
        for i in 0..j {
            apply_transposition(perm, i as u8, j as u8);
            let mut next = uf;
            next.union(i, j);
            dfs(perm, j, remaining - 1, next, transitive_only, hist);
            apply_transposition(perm, i as u8, j as u8);
        }
    }
}

/// `W^r(α,β)` by exhaustive enumeration.
pub fn walks_bruteforce(alpha: &Partition, beta: &Partition, r: usize) -> Result<BigInt> {
    walks_bruteforce_with(alpha, beta, r, WalkGuard::default(), Execution::default())
}

pub fn walks_bruteforce_with(
    alpha: &Partition,
    beta: &Partition,
    r: usize,
    guard: WalkGuard,
    exec: Execution,
) -> Result<BigInt> {
    check_same_size(alpha, beta)?;
    let hist = endpoint_histogram(alpha, r, false, guard, exec)?;
    Ok(BigInt::from(hist.get(beta).copied().unwrap_or(0)))
}

/// `H^r(α,β)`: monotone walks whose start, steps and end generate a
/// transitive subgroup.
pub fn hurwitz_bruteforce(alpha: &Partition, beta: &Partition, r: usize) -> Result<BigInt> {
    check_same_size(alpha, beta)?;
    let hist = endpoint_histogram(alpha, r, true, WalkGuard::default(), Execution::default())?;
    Ok(BigInt::from(hist.get(beta).copied().unwrap_or(0)))
}

/// `W^r(α,β) = ⟨ω_α f_r ω_β⟩` over the unrestricted Plancherel measure.
pub fn walks_jm(alpha: &Partition, beta: &Partition, r: usize) -> Result<BigInt> {
    check_same_size(alpha, beta)?;
    let d = alpha.size();
    let t = character_table(d);
    let (a, b) = (t.index_of(alpha).unwrap(), t.index_of(beta).unwrap());
    let dfact = factorial(d);
    let total: BigRational = t
        .partitions()
        .iter()
        .enumerate()
        .map(|(l, lam)| {
            let f = content_sym_sequence(lam, r, ContentKind::Complete).pop().unwrap();
            let sq = t.dim(l) * t.dim(l);
            t.omega(l, a) * t.omega(l, b) * BigRational::new(f * sq, dfact.clone())
        })
        .sum();
    assert!(is_integer(&total), "walk count is not an integer: {total}");
    Ok(total.to_integer())
}

/// `W^r(α,β)` for all `α, β ⊢ d` and `r ≤ max_steps`. With `single` set,
/// only `α = (1^d)` is computed and keyed by `(∅, β)`.
pub fn walk_table(
    d: u32,
    max_steps: usize,
    single: bool,
    exec: Execution,
) -> BTreeMap<(Partition, Partition), Vec<BigInt>> {
    let t = character_table(d);
    let dfact = factorial(d);
    // per-λ weights f_r(λ) (dim V^λ)² / d!
    let weights: Vec<Vec<BigRational>> = t
        .partitions()
        .iter()
        .enumerate()
        .map(|(l, lam)| {
            let sq = t.dim(l) * t.dim(l);
            content_sym_sequence(lam, max_steps, ContentKind::Complete)
                .into_iter()
                .map(|f| BigRational::new(f * &sq, dfact.clone()))
                .collect()
        })
        .collect();
    let parts = t.partitions().to_vec();
    let alphas: Vec<Partition> = if single {
        vec![Partition::ones(d)]
    } else {
        parts.clone()
    };
    let rows = exec.map(&alphas, |alpha| {
        let a = t.index_of(alpha).unwrap();
        parts
            .iter()
            .map(|beta| {
                let b = t.index_of(beta).unwrap();
                let counts = (0..=max_steps)
                    .map(|r| {
                        let s: BigRational = (0..parts.len())
                            .map(|l| t.omega(l, a) * t.omega(l, b) * &weights[l][r])
                            .sum();
                        assert!(is_integer(&s));
                        s.to_integer()
                    })
                    .collect();
                let key_alpha = if single { Partition::empty() } else { alpha.clone() };
                ((key_alpha, beta.clone()), counts)
            })
            .collect::<Vec<_>>()
    });
    rows.into_iter().flatten().collect()
}

/// Genus bookkeeping for a Hurwitz count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HurwitzIndex {
    pub d: u32,
    pub alpha: Partition,
    pub beta: Partition,
    pub genus: i64,
    pub steps: i64,
}

impl HurwitzIndex {
    pub fn new(alpha: Partition, beta: Partition, genus: i64) -> Result<Self> {
        let steps = riemann_hurwitz_steps(genus, &alpha, &beta)?;
        Ok(HurwitzIndex {
            d: alpha.size(),
            alpha,
            beta,
            genus,
            steps,
        })
    }

    /// Inverse of Riemann–Hurwitz; `None` when `r` has the wrong parity.
    pub fn from_steps(alpha: Partition, beta: Partition, steps: i64) -> Result<Option<Self>> {
        check_same_size(&alpha, &beta)?;
        let twice = steps + 2 - alpha.len() as i64 - beta.len() as i64;
        if twice % 2 != 0 {
            return Ok(None);
        }
        Ok(Some(HurwitzIndex {
            d: alpha.size(),
            alpha,
            beta,
            genus: twice / 2,
            steps,
        }))
    }
}

/// Connected counts `H^r` extracted from the logarithm of the stable walk
/// series, computed once per variant and grown on demand.
#[derive(Debug)]
pub struct ConnectedTable {
    pub max_degree: u32,
    pub max_steps: usize,
    pub values: BTreeMap<(Partition, Partition), Vec<BigInt>>,
}

impl ConnectedTable {
    pub fn get(&self, alpha: &Partition, beta: &Partition, r: usize) -> BigInt {
        self.values
            .get(&(alpha.clone(), beta.clone()))
            .and_then(|v| v.get(r).cloned())
            .unwrap_or_else(BigInt::zero)
    }
}

fn build_connected(kind: SeriesKind, max_degree: u32, max_steps: usize) -> ConnectedTable {
    let stable = stable_series(kind, max_degree as usize, max_steps);
    let log = stable.log().expect("stable series has constant term 1");
    let mut values = BTreeMap::new();
    for (key, coeff) in log.iter() {
        let dfact = BigRational::from_integer(factorial(key.1.size()));
        let counts = coeff
            .coefficients()
            .iter()
            .map(|c| {
                let v = c * &dfact;
                assert!(is_integer(&v), "connected count is not an integer: {v}");
                v.to_integer()
            })
            .collect();
        values.insert(key.clone(), counts);
    }
    ConnectedTable {
        max_degree,
        max_steps,
        values,
    }
}

static CONNECTED: OnceLock<Mutex<HashMap<SeriesKind, Arc<ConnectedTable>>>> = OnceLock::new();

pub fn connected_table(kind: SeriesKind, d: u32, r: usize) -> Arc<ConnectedTable> {
    let cache = CONNECTED.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("hurwitz cache poisoned");
    if let Some(t) = guard.get(&kind) {
        if t.max_degree >= d && t.max_steps >= r {
            return Arc::clone(t);
        }
    }
    let (d, r) = match guard.get(&kind) {
        Some(t) => (d.max(t.max_degree), r.max(t.max_steps)),
        None => (d, r),
    };
    let table = Arc::new(build_connected(kind, d, r));
    guard.insert(kind, Arc::clone(&table));
    table
}

/// `H^r(α,β)` via the series logarithm.
pub fn connected_steps(alpha: &Partition, beta: &Partition, r: usize) -> Result<BigInt> {
    check_same_size(alpha, beta)?;
    if alpha.is_empty() {
        return Ok(BigInt::zero());
    }
    Ok(connected_table(SeriesKind::Hciz, alpha.size(), r).get(alpha, beta, r))
}

/// Connected monotone double Hurwitz number `H_g(α,β)`.
pub fn hurwitz_connected(alpha: &Partition, beta: &Partition, g: u32) -> Result<BigInt> {
    let r = riemann_hurwitz_steps(g as i64, alpha, beta)?;
    if r < 0 {
        return Ok(BigInt::zero());
    }
    connected_steps(alpha, beta, r as usize)
}

/// `H_g(β) = H_g((1^d), β)`, computed through the single-partition series.
pub fn hurwitz_single(beta: &Partition, g: u32) -> Result<BigInt> {
    let d = beta.size();
    let r = riemann_hurwitz_steps(g as i64, &Partition::ones(d), beta)?;
    if r < 0 || d == 0 {
        return Ok(BigInt::zero());
    }
    let r = r as usize;
    Ok(connected_table(SeriesKind::Bgw, d, r).get(&Partition::empty(), beta, r))
}

/// Disconnected count `H•_g(α,β) = W^{r_g}(α,β)`; `g` may be negative.
pub fn hurwitz_disconnected(alpha: &Partition, beta: &Partition, g: i64) -> Result<BigInt> {
    let r = riemann_hurwitz_steps(g, alpha, beta)?;
    if r < 0 {
        return Ok(BigInt::zero());
    }
    walks_jm(alpha, beta, r as usize)
}

/// All partitions of `d` paired, canonical order.
pub fn partition_pairs(d: u32) -> Vec<(Partition, Partition)> {
    let ps = enumerate_partitions(d, None);
    ps.iter()
        .flat_map(|a| ps.iter().map(move |b| (a.clone(), b.clone())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn walk_struct_semantics() {
        let w = Walk {
            start: vec![0, 1, 2],
            steps: vec![(0, 1), (0, 2)],
        };
        assert!(w.is_monotone());
        assert!(w.is_transitive());
        assert_eq!(cycle_type(&w.endpoint()), p(&[3]));
        let back = Walk {
            start: vec![0, 1, 2],
            steps: vec![(0, 2), (0, 1)],
        };
        assert!(!back.is_monotone());
        let idle = Walk {
            start: vec![0, 1],
            steps: vec![],
        };
        assert!(!idle.is_transitive());
    }

    #[test]
    fn bruteforce_examples() {
        let parts3 = enumerate_partitions(3, None);
        for a in &parts3 {
            for b in &parts3 {
                let expected = if a == b { a.class_size() } else { BigInt::zero() };
                assert_eq!(walks_bruteforce(a, b, 0).unwrap(), expected);
            }
        }
        assert_eq!(walks_bruteforce(&p(&[1, 1]), &p(&[2]), 1).unwrap(), big(1));
        assert_eq!(walks_bruteforce(&Partition::ones(3), &Partition::ones(3), 2).unwrap(), big(3));
        assert!(walks_bruteforce(&Partition::ones(7), &Partition::ones(7), 1).is_err());
        assert!(walks_bruteforce(&Partition::ones(3), &Partition::ones(3), 9).is_err());
    }

    #[test]
    fn jm_examples() {
        assert_eq!(walks_jm(&p(&[2, 1]), &p(&[2, 1]), 0).unwrap(), big(3));
        assert_eq!(walks_jm(&p(&[3]), &p(&[2, 1]), 0).unwrap(), big(0));
        assert_eq!(walks_jm(&Partition::ones(3), &Partition::ones(3), 2).unwrap(), big(3));
        assert_eq!(walks_jm(&p(&[2]), &p(&[2]), 2).unwrap(), big(1));
        assert!(walks_jm(&p(&[2]), &p(&[1]), 0).is_err());
    }

    #[test]
    fn routes_agree_small() {
        for d in 1..=4 {
            for (a, b) in partition_pairs(d) {
                for r in 0..=5 {
                    assert_eq!(walks_jm(&a, &b, r).unwrap(), walks_bruteforce(&a, &b, r).unwrap());
                }
            }
        }
    }

    #[test]
    fn walk_table_matches_pointwise() {
        let table = walk_table(4, 6, false, Execution::default());
        for ((a, b), counts) in &table {
            for (r, c) in counts.iter().enumerate() {
                assert_eq!(c, &walks_jm(a, b, r).unwrap());
            }
        }
        let single = walk_table(4, 6, true, Execution::Sequential);
        for ((a, b), counts) in &single {
            assert!(a.is_empty());
            assert_eq!(counts, &table[&(Partition::ones(4), b.clone())]);
        }
    }

    #[test]
    fn off_parity_vanishes() {
        for d in 1..=5 {
            for (a, b) in partition_pairs(d) {
                for r in 0..=8usize {
                    if (r + a.len() + b.len()) % 2 == 1 {
                        assert!(walks_jm(&a, &b, r).unwrap().is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn hurwitz_examples() {
        let one = p(&[1]);
        assert_eq!(hurwitz_bruteforce(&one, &one, 0).unwrap(), big(1));
        assert_eq!(hurwitz_bruteforce(&p(&[1, 1]), &p(&[2]), 1).unwrap(), big(1));
        assert_eq!(hurwitz_bruteforce(&p(&[1, 1]), &p(&[1, 1]), 0).unwrap(), big(0));
        assert_eq!(hurwitz_connected(&one, &one, 0).unwrap(), big(1));
        assert_eq!(hurwitz_connected(&p(&[2]), &p(&[2]), 0).unwrap(), big(1));
        for g in 1..4 {
            assert!(hurwitz_connected(&one, &one, g).unwrap().is_zero());
        }
        assert_eq!(hurwitz_single(&one, 0).unwrap(), big(1));
        assert_eq!(hurwitz_single(&p(&[2]), 0).unwrap(), big(1));
        assert_eq!(hurwitz_single(&p(&[1, 1]), 0).unwrap(), big(1));
    }

    #[test]
    fn disconnected_counts() {
        let a = p(&[2, 1]);
        // ℓ(α) + ℓ(β) = 4 puts r = 0 at g = -1
        assert_eq!(hurwitz_disconnected(&a, &a, -1).unwrap(), a.class_size());
        assert_eq!(hurwitz_disconnected(&p(&[1, 1]), &p(&[1, 1]), 0).unwrap(), big(1));
        assert!(hurwitz_disconnected(&p(&[1, 1]), &p(&[1, 1]), -2).unwrap().is_zero());
        assert!(hurwitz_disconnected(&one(), &one(), -1).unwrap().is_zero());
    }

    fn one() -> Partition {
        p(&[1])
    }

    #[test]
    fn log_route_matches_bruteforce() {
        for d in 1..=4 {
            for (a, b) in partition_pairs(d) {
                for r in 0..=6 {
                    assert_eq!(
                        connected_steps(&a, &b, r).unwrap(),
                        hurwitz_bruteforce(&a, &b, r).unwrap(),
                        "{a} {b} r={r}"
                    );
                }
            }
        }
    }

    #[test]
    fn single_matches_double() {
        for d in 1..=5 {
            for beta in enumerate_partitions(d, None) {
                for g in 0..=2 {
                    assert_eq!(
                        hurwitz_single(&beta, g).unwrap(),
                        hurwitz_connected(&Partition::ones(d), &beta, g).unwrap()
                    );
                }
            }
        }
    }

    /// H_0((1^d),(1^d)) = 2^d (3d-3)! / (2d)!
    #[test]
    fn genus_zero_simple_closed_form() {
        for d in 1..=6u32 {
            let expected = BigRational::new(
                num::pow(big(2), d as usize) * factorial(3 * d - 3),
                factorial(2 * d),
            );
            let got = hurwitz_single(&Partition::ones(d), 0).unwrap();
            assert_eq!(BigRational::from_integer(got), expected, "d = {d}");
        }
    }

    /// Transitive walks without the monotone constraint.
    fn classical_count(alpha: &Partition, beta: &Partition, r: usize) -> u64 {
        let d = alpha.size() as usize;
        let transpositions: Vec<(u8, u8)> = (0..d as u8).tuple_combinations().collect();
        let mut total = 0;
        for start in permutations_of_type(alpha) {
            for steps in (0..r).map(|_| transpositions.iter().copied()).multi_cartesian_product() {
                let w = Walk { start: start.clone(), steps };
                if &cycle_type(&w.endpoint()) == beta && w.is_transitive() {
                    total += 1;
                }
            }
            if r == 0 {
                let w = Walk { start: start.clone(), steps: vec![] };
                if &cycle_type(&start) == beta && w.is_transitive() {
                    total += 1;
                }
            }
        }
        total
    }

    #[test]
    fn monotone_at_most_classical() {
        for d in 1..=4 {
            for (a, b) in partition_pairs(d) {
                for r in 0..=4 {
                    let mono = hurwitz_bruteforce(&a, &b, r).unwrap();
                    assert!(mono <= BigInt::from(classical_count(&a, &b, r)));
                }
            }
        }
    }

    #[test]
    fn walks_enumerated_via_struct_match_dfs() {
        // walks of length r from identity in S(3), built explicitly
        let ts: Vec<(u8, u8)> = (0..3u8).tuple_combinations().collect();
        for r in 0..=4usize {
            let mut hist: BTreeMap<Partition, u64> = BTreeMap::new();
            let seqs: Vec<Vec<(u8, u8)>> = if r == 0 {
                vec![vec![]]
            } else {
                (0..r).map(|_| ts.iter().copied()).multi_cartesian_product().collect()
            };
            for steps in seqs {
                let w = Walk { start: vec![0, 1, 2], steps };
                if w.is_monotone() {
                    *hist.entry(cycle_type(&w.endpoint())).or_insert(0) += 1;
                }
            }
            let dfs = endpoint_histogram(&Partition::ones(3), r, false, WalkGuard::default(), Execution::Sequential).unwrap();
            assert_eq!(hist, dfs);
        }
    }

    #[test]
    fn hurwitz_index_parity() {
        let idx = HurwitzIndex::new(p(&[1, 1]), p(&[2]), 0).unwrap();
        assert_eq!(idx.steps, 1);
        assert_eq!(HurwitzIndex::from_steps(p(&[1, 1]), p(&[2]), 1).unwrap().unwrap().genus, 0);
        assert!(HurwitzIndex::from_steps(p(&[1, 1]), p(&[2]), 2).unwrap().is_none());
    }
}
