//! Monte Carlo over Haar-distributed unitaries, used as a floating-point
//! oracle for the exact expansions.

use std::ops::{Index, IndexMut};

use num::{BigInt, BigRational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::characters::character_table;
use crate::error::{Error, Result};
use crate::par::Execution;
use crate::partitions::{factorial, Partition};
use crate::scalar::{rational_to_f64, Complex64};

pub const MAX_DIMENSION: usize = 16;
pub const MIN_SAMPLES: usize = 1_000;
pub const CHUNK: usize = 1_000;
pub const GENERATOR: &str = "ChaCha8, one stream per 1000-sample chunk";

/// Dense complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::diag(&vec![Complex64::new(1.0, 0.0); n])
    }

    pub fn diag(d: &[Complex64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, x) in d.iter().enumerate() {
            m[(i, i)] = *x;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> CMatrix {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        CMatrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    /// `max |(M†M − I)_{ij}|`
    pub fn unitarity_defect(&self) -> f64 {
        let p = self.adjoint().matmul(self);
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((p[(i, j)] - target).norm());
            }
        }
        worst
    }

    /// `[Tr M, Tr M², …, Tr M^k]`
    pub fn power_traces(&self, k: usize) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(k);
        let mut pow = self.clone();
        for i in 0..k {
            if i > 0 {
                pow = pow.matmul(self);
            }
            out.push(pow.trace());
        }
        out
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

fn check_dimension(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DIMENSION {
        return Err(Error::Guard {
            what: "unitary dimension",
            value: n,
            limit: MAX_DIMENSION,
            hint: "",
        });
    }
    Ok(())
}

/// Householder QR. Returns `(Q, diag R)`.
fn householder_qr(a: &CMatrix) -> (CMatrix, Vec<Complex64>) {
    let n = a.n;
    let mut r = a.clone();
    let mut q = CMatrix::identity(n);
    let mut diag = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n {
        let norm: f64 = (k..n).map(|i| r[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        let x0 = r[(k, k)];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { Complex64::new(1.0, 0.0) };
        let alpha = -phase * norm;
        let mut v: Vec<Complex64> = (k..n).map(|i| r[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm: f64 = v.iter().map(|x| x.norm_sqr()).sum();
        diag[k] = alpha;
        if vnorm == 0.0 {
            continue;
        }
        // R ← H R with H = I − 2 v v† / (v†v), on rows k..n
        for j in 0..n {
            let s: Complex64 = (k..n).map(|i| v[i - k].conj() * r[(i, j)]).sum();
            let f = s * (2.0 / vnorm);
            for i in k..n {
                r[(i, j)] -= v[i - k] * f;
            }
        }
        // Q ← Q H on columns k..n
        for i in 0..n {
            let s: Complex64 = (k..n).map(|j| q[(i, j)] * v[j - k]).sum();
            let f = s * (2.0 / vnorm);
            for j in k..n {
                let upd = f * v[j - k].conj();
                q[(i, j)] -= upd;
            }
        }
    }
    (q, diag)
}

/// Haar unitary from the QR factorization of a complex Ginibre matrix, the
/// columns of `Q` rotated by the phases of `diag R` so that `R` has a
/// positive diagonal.
pub fn sample_haar<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<CMatrix> {
    check_dimension(n)?;
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let mut g = CMatrix::zeros(n);
    for x in g.data.iter_mut() {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        *x = Complex64::new(re, im) * scale;
    }
    let (mut q, diag) = householder_qr(&g);
    for (j, r) in diag.iter().enumerate() {
        let ph = if r.norm() > 0.0 { r / r.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= ph;
        }
    }
    Ok(q)
}

/// `V diag(x) V†`
pub fn conjugated_diag(x: &[Complex64], v: &CMatrix) -> CMatrix {
    v.matmul(&CMatrix::diag(x)).matmul(&v.adjoint())
}

/// Matrices with spectra `a`, `b` for the two-sided integral, rotated by
/// unitaries drawn from `seed`.
pub fn hciz_test_matrices(a: &[Complex64], b: &[Complex64], seed: u64) -> Result<(CMatrix, CMatrix)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = sample_haar(a.len(), &mut rng)?;
    let w = sample_haar(b.len(), &mut rng)?;
    Ok((conjugated_diag(a, &v), conjugated_diag(b, &w)))
}

/// `A = V diag(a) W`, `B = W† diag(b) V†`, so that `AB` has spectrum `a·b`.
pub fn bgw_test_matrices(a: &[Complex64], b: &[Complex64], seed: u64) -> Result<(CMatrix, CMatrix)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = sample_haar(a.len(), &mut rng)?;
    let w = sample_haar(b.len(), &mut rng)?;
    let am = v.matmul(&CMatrix::diag(a)).matmul(&w);
    let bm = w.adjoint().matmul(&CMatrix::diag(b)).matmul(&v.adjoint());
    Ok((am, bm))
}

#[derive(Clone, Debug, PartialEq)]
pub enum McKind {
    /// `e^{zN Tr(AUBU†)}`
    Hciz,
    /// `e^{zN Tr(AU + BU†)}`
    Bgw,
    /// `s_λ(AU) s_μ(BU†)`
    SchurPair(Partition, Partition),
    /// `s_λ(AUBU†)`
    SchurConj(Partition),
}

#[derive(Clone, Debug, PartialEq)]
pub struct MCEstimate {
    pub mean: Complex64,
    pub stderr_re: f64,
    pub stderr_im: f64,
    pub samples: usize,
    pub seed: u64,
    pub generator: &'static str,
}

impl MCEstimate {
    /// `|Re(mean − x)| ≤ k σ_re + slack` and the same for the imaginary part.
    pub fn within(&self, x: Complex64, k: f64, slack: f64) -> bool {
        let d = self.mean - x;
        d.re.abs() <= k * self.stderr_re + slack && d.im.abs() <= k * self.stderr_im + slack
    }
}

/// Schur polynomial of a matrix through traces of its powers.
struct MatrixSchur {
    d: usize,
    /// `|C_α| χ_α(λ) / d!` with `α` as a part list
    weights: Vec<(Vec<u32>, f64)>,
}

impl MatrixSchur {
    fn new(lambda: &Partition) -> Self {
        let d = lambda.size();
        let t = character_table(d);
        let l = t.index_of(lambda).unwrap();
        let df = factorial(d);
        let weights = t
            .partitions()
            .iter()
            .enumerate()
            .map(|(a, alpha)| {
                let w = BigRational::new(t.class_size(a) * BigInt::from(t.value(l, a)), df.clone());
                (alpha.parts().to_vec(), rational_to_f64(&w))
            })
            .collect();
        MatrixSchur { d: d as usize, weights }
    }

    fn eval(&self, m: &CMatrix) -> Complex64 {
        if self.d == 0 {
            return Complex64::new(1.0, 0.0);
        }
        let p = m.power_traces(self.d);
        self.weights
            .iter()
            .map(|(alpha, w)| alpha.iter().fold(Complex64::new(*w, 0.0), |acc, &k| acc * p[k as usize - 1]))
            .sum()
    }
}

enum Integrand {
    Hciz,
    Bgw,
    Pair(MatrixSchur, MatrixSchur),
    Conj(MatrixSchur),
}

impl Integrand {
    fn eval(&self, z: Complex64, a: &CMatrix, b: &CMatrix, u: &CMatrix) -> Complex64 {
        let n = a.dim() as f64;
        match self {
            Integrand::Hciz => {
                let m = a.matmul(u).matmul(b).matmul(&u.adjoint());
                (z * n * m.trace()).exp()
            }
            Integrand::Bgw => {
                let t = a.matmul(u).trace() + b.matmul(&u.adjoint()).trace();
                (z * n * t).exp()
            }
            Integrand::Pair(sl, sm) => sl.eval(&a.matmul(u)) * sm.eval(&b.matmul(&u.adjoint())),
            Integrand::Conj(sl) => sl.eval(&a.matmul(u).matmul(b).matmul(&u.adjoint())),
        }
    }
}

pub fn mc_integral(
    kind: &McKind,
    z: Complex64,
    a: &CMatrix,
    b: &CMatrix,
    samples: usize,
    seed: u64,
) -> Result<MCEstimate> {
    mc_integral_with(kind, z, a, b, samples, seed, Execution::default())
}

/// Each 1000-sample chunk draws from its own ChaCha stream and the chunk
/// sums are reduced in chunk order, so the result does not depend on `exec`.
pub fn mc_integral_with(
    kind: &McKind,
    z: Complex64,
    a: &CMatrix,
    b: &CMatrix,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<MCEstimate> {
    let n = a.dim();
    check_dimension(n)?;
    if b.dim() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: b.dim(),
        });
    }
    if samples < MIN_SAMPLES {
        return Err(Error::Guard {
            what: "sample count",
            value: samples,
            limit: MIN_SAMPLES,
            hint: " (minimum)",
        });
    }
    let integrand = match kind {
        McKind::Hciz => Integrand::Hciz,
        McKind::Bgw => Integrand::Bgw,
        McKind::SchurPair(l, m) => Integrand::Pair(MatrixSchur::new(l), MatrixSchur::new(m)),
        McKind::SchurConj(l) => Integrand::Conj(MatrixSchur::new(l)),
    };
    let chunks = samples.div_ceil(CHUNK);
    let partial = exec.map_range(chunks, |c| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(c as u64);
        let count = CHUNK.min(samples - c * CHUNK);
        let mut acc = [0.0f64; 4];
        for _ in 0..count {
            let u = sample_haar(n, &mut rng).expect("dimension checked");
            let v = integrand.eval(z, a, b, &u);
            acc[0] += v.re;
            acc[1] += v.im;
            acc[2] += v.re * v.re;
            acc[3] += v.im * v.im;
        }
        acc
    });
    let mut tot = [0.0f64; 4];
    for p in partial {
        for i in 0..4 {
            tot[i] += p[i];
        }
    }
    let m = samples as f64;
    let (mre, mim) = (tot[0] / m, tot[1] / m);
    let var = |sq: f64, mean: f64| ((sq - m * mean * mean) / (m - 1.0)).max(0.0);
    Ok(MCEstimate {
        mean: Complex64::new(mre, mim),
        stderr_re: (var(tot[2], mre) / m).sqrt(),
        stderr_im: (var(tot[3], mim) / m).sqrt(),
        samples,
        seed,
        generator: GENERATOR,
    })
}

/// Monte Carlo mean of `f(U)` for ad hoc moment checks.
pub fn mc_moment<F>(n: usize, samples: usize, seed: u64, f: F) -> Result<MCEstimate>
where
    F: Fn(&CMatrix) -> Complex64 + Sync,
{
    check_dimension(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut s, mut sq_re, mut sq_im) = (Complex64::new(0.0, 0.0), 0.0, 0.0);
    for _ in 0..samples {
        let v = f(&sample_haar(n, &mut rng)?);
        s += v;
        sq_re += v.re * v.re;
        sq_im += v.im * v.im;
    }
    let m = samples as f64;
    let mean = s / m;
    let var = |sq: f64, mu: f64| ((sq - m * mu * mu) / (m - 1.0)).max(0.0);
    Ok(MCEstimate {
        mean,
        stderr_re: (var(sq_re, mean.re) / m).sqrt(),
        stderr_im: (var(sq_im, mean.im) / m).sqrt(),
        samples,
        seed,
        generator: "ChaCha8, single stream",
    })
}

/// Unit-modulus complex number `e^{iθ}`.
pub fn phase(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..=MAX_DIMENSION {
            let u = sample_haar(n, &mut rng).unwrap();
            assert!(u.unitarity_defect() < 1e-10, "n = {n}");
        }
        assert!(sample_haar(17, &mut rng).is_err());
    }

    #[test]
    fn one_dimensional_phase_is_uniform() {
        // E[u^k] = 0 for k ≠ 0 on U(1)
        let est = mc_moment(1, 20_000, 3, |u| u[(0, 0)] * u[(0, 0)]).unwrap();
        assert!(est.within(Complex64::new(0.0, 0.0), 4.0, 0.0));
        let m = mc_moment(1, 1000, 3, |u| Complex64::new(u[(0, 0)].norm(), 0.0)).unwrap();
        assert!((m.mean.re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn low_moments() {
        for n in [2usize, 3, 4] {
            let e2 = mc_moment(n, 100_000, 11, |u| Complex64::new(u[(0, 0)].norm_sqr(), 0.0)).unwrap();
            assert!(e2.within(Complex64::new(1.0 / n as f64, 0.0), 4.0, 0.0), "n={n} {e2:?}");
            let e1 = mc_moment(n, 100_000, 12, |u| u[(0, 0)]).unwrap();
            assert!(e1.within(Complex64::new(0.0, 0.0), 4.0, 0.0));
            // E|Tr U|² = 1 and E|Tr U²|² = 2 for n ≥ 2
            let t1 = mc_moment(n, 100_000, 13, |u| Complex64::new(u.trace().norm_sqr(), 0.0)).unwrap();
            assert!(t1.within(Complex64::new(1.0, 0.0), 4.0, 0.0), "{t1:?}");
            let t2 = mc_moment(n, 100_000, 14, |u| Complex64::new(u.matmul(u).trace().norm_sqr(), 0.0)).unwrap();
            assert!(t2.within(Complex64::new(2.0, 0.0), 4.0, 0.0), "{t2:?}");
        }
    }

    #[test]
    fn reproducible_across_execution() {
        let (a, b) = hciz_test_matrices(&[phase(0.3), phase(1.1)], &[phase(-0.4), phase(2.0)], 5).unwrap();
        let z = Complex64::new(0.0, 0.1);
        let s = mc_integral_with(&McKind::Hciz, z, &a, &b, 5_500, 9, Execution::Sequential).unwrap();
        let p = mc_integral_with(&McKind::Hciz, z, &a, &b, 5_500, 9, Execution::Parallel).unwrap();
        assert_eq!(s, p);
        assert!(mc_integral(&McKind::Hciz, z, &a, &b, 999, 9).is_err());
    }

    #[test]
    fn schur_conj_degree_one() {
        // ∫ Tr(AUBU†) dU = Tr A Tr B / N
        let a = CMatrix::diag(&[Complex64::new(0.5, 0.2), Complex64::new(-0.3, 0.0), Complex64::new(0.1, 0.7)]);
        let b = CMatrix::diag(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(0.4, -0.4)]);
        let est = mc_integral(&McKind::SchurConj(Partition::ones(1)), Complex64::new(0.0, 0.0), &a, &b, 50_000, 2).unwrap();
        let exact = a.trace() * b.trace() / 3.0;
        assert!(est.within(exact, 4.0, 0.0), "{est:?} vs {exact}");
    }

    #[test]
    fn bgw_left_right_invariance() {
        let z = Complex64::new(0.1, 0.0);
        let spec_a = [phase(0.2), phase(-1.0)];
        let spec_b = [phase(0.7), phase(2.5)];
        let (a, b) = bgw_test_matrices(&spec_a, &spec_b, 21).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let v = sample_haar(2, &mut rng).unwrap();
        let w = sample_haar(2, &mut rng).unwrap();
        let a2 = v.matmul(&a).matmul(&w);
        let b2 = w.adjoint().matmul(&b).matmul(&v.adjoint());
        let e1 = mc_integral(&McKind::Bgw, z, &a, &b, 40_000, 4).unwrap();
        let e2 = mc_integral(&McKind::Bgw, z, &a2, &b2, 40_000, 5).unwrap();
        let band = |x: f64, y: f64| 4.0 * (x * x + y * y).sqrt();
        assert!((e1.mean.re - e2.mean.re).abs() <= band(e1.stderr_re, e2.stderr_re));
        assert!((e1.mean.im - e2.mean.im).abs() <= band(e1.stderr_im, e2.stderr_im).max(1e-12));
    }
}
