//! Character-expansion evaluation of the HCIZ and BGW integrals.
//!
//! This path uses only the character table and its dimension data. It is
//! kept independent of the string-series code so each checks the other.

use num::{BigInt, BigRational, One};

use crate::characters::{character_table, dim_gl};
use crate::error::{Error, Result};
use crate::par::Execution;
use crate::partitions::{enumerate_partitions, factorial, Partition};
use crate::plancherel::lis_probability;
use crate::scalar::{GaussianRational, Scalar};

/// Eigenvalue data for one evaluation. `c` holds the eigenvalues of `AB`
/// for the one-sided integral.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumInput<F> {
    pub a: Vec<F>,
    pub b: Vec<F>,
    pub c: Vec<F>,
}

impl<F: Scalar> SpectrumInput<F> {
    /// `c` defaults to the entrywise product, the spectrum of `AB` for
    /// `A = V diag(a) W`, `B = W† diag(b) V†`.
    pub fn new(a: Vec<F>, b: Vec<F>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::LengthMismatch {
                expected: a.len(),
                got: b.len(),
            });
        }
        let c = a.iter().zip(&b).map(|(x, y)| x.clone() * y.clone()).collect();
        Ok(SpectrumInput { a, b, c })
    }

    pub fn with_c(a: Vec<F>, b: Vec<F>, c: Vec<F>) -> Result<Self> {
        let mut s = Self::new(a, b)?;
        if c.len() != s.a.len() {
            return Err(Error::LengthMismatch {
                expected: s.a.len(),
                got: c.len(),
            });
        }
        s.c = c;
        Ok(s)
    }

    /// All eigenvalues equal to 1.
    pub fn trivial(n: usize) -> Self {
        let ones = vec![F::one(); n];
        SpectrumInput {
            a: ones.clone(),
            b: ones.clone(),
            c: ones,
        }
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn check_unit_disc(&self) -> Result<()> {
        let all = self.a.iter().chain(&self.b).chain(&self.c);
        match all.enumerate().find(|(_, x)| !x.in_unit_disc()) {
            Some((index, _)) => Err(Error::Modulus { index }),
            None => Ok(()),
        }
    }
}

fn power_sum_monomials<F: Scalar>(x: &[F], parts: &[Partition], max: usize) -> Vec<F> {
    let sums = crate::stringseries::power_sums(x, max);
    parts
        .iter()
        .map(|alpha| {
            alpha
                .parts()
                .iter()
                .fold(F::one(), |acc, &k| acc * sums[k as usize].clone())
        })
        .collect()
}

/// `s_λ(x) = (1/d!) Σ_α |C_α| χ_α(λ) p_α(x)`.
pub fn schur_eval<F: Scalar>(lambda: &Partition, x: &[F]) -> F {
    let d = lambda.size();
    if d == 0 {
        return F::one();
    }
    let t = character_table(d);
    let l = t.index_of(lambda).unwrap();
    let p = power_sum_monomials(x, t.partitions(), d as usize);
    schur_from_monomials(&t, l, &p)
}

fn schur_from_monomials<F: Scalar>(t: &crate::characters::CharacterTable, l: usize, p: &[F]) -> F {
    let d = t.degree();
    let sum = (0..t.partitions().len()).fold(F::zero(), |acc, a| {
        let w = BigRational::from_integer(t.class_size(a) * BigInt::from(t.value(l, a)));
        acc + F::from_rational(&w) * p[a].clone()
    });
    sum * F::from_rational(&BigRational::new(BigInt::one(), factorial(d)))
}

/// Per-degree terms `z^d (N^d/d!) Σ_{ℓ(λ)≤N} s_λ(a) s_λ(b) dim V^λ / dim W^λ`
/// for `d = 0..=D`.
pub fn hciz_char_terms<F: Scalar>(z: &F, a: &[F], b: &[F], max_degree: usize) -> Result<Vec<F>> {
    hciz_char_terms_with(z, a, b, max_degree, Execution::default())
}

pub fn hciz_char_terms_with<F: Scalar>(
    z: &F,
    a: &[F],
    b: &[F],
    max_degree: usize,
    exec: Execution,
) -> Result<Vec<F>> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    let n = a.len() as u32;
    let mut out = vec![F::one()];
    for d in 1..=max_degree as u32 {
        let t = character_table(d);
        let pa = power_sum_monomials(a, t.partitions(), d as usize);
        let pb = power_sum_monomials(b, t.partitions(), d as usize);
        let admissible: Vec<usize> = (0..t.partitions().len())
            .filter(|&l| t.partitions()[l].len() <= n as usize)
            .collect();
        let parts = exec.map(&admissible, |&l| {
            let lam = &t.partitions()[l];
            let ratio = BigRational::new(t.dim(l).clone(), dim_gl(lam, n).unwrap());
            schur_from_monomials(&t, l, &pa) * schur_from_monomials(&t, l, &pb) * F::from_rational(&ratio)
        });
        let sum = parts.into_iter().fold(F::zero(), |acc, x| acc + x);
        let w = BigRational::new(num::pow(BigInt::from(n), d as usize), factorial(d));
        out.push(Scalar::pow(z, d) * F::from_rational(&w) * sum);
    }
    Ok(out)
}

pub fn hciz_char<F: Scalar>(z: &F, a: &[F], b: &[F], max_degree: usize) -> Result<F> {
    Ok(sum(hciz_char_terms(z, a, b, max_degree)?))
}

/// Per-degree terms `z^{2d} N^{2d}/(d!)² Σ_{ℓ(λ)≤N} (dim V^λ)² s_λ(c) / dim W^λ`.
pub fn bgw_char_terms<F: Scalar>(z: &F, c: &[F], max_degree: usize) -> Result<Vec<F>> {
    bgw_char_terms_with(z, c, max_degree, Execution::default())
}

pub fn bgw_char_terms_with<F: Scalar>(z: &F, c: &[F], max_degree: usize, exec: Execution) -> Result<Vec<F>> {
    let n = c.len() as u32;
    let mut out = vec![F::one()];
    for d in 1..=max_degree as u32 {
        let t = character_table(d);
        let pc = power_sum_monomials(c, t.partitions(), d as usize);
        let admissible: Vec<usize> = (0..t.partitions().len())
            .filter(|&l| t.partitions()[l].len() <= n as usize)
            .collect();
        let parts = exec.map(&admissible, |&l| {
            let lam = &t.partitions()[l];
            let ratio = BigRational::new(t.dim(l) * t.dim(l), dim_gl(lam, n).unwrap());
            schur_from_monomials(&t, l, &pc) * F::from_rational(&ratio)
        });
        let s = parts.into_iter().fold(F::zero(), |acc, x| acc + x);
        let df = factorial(d);
        let w = BigRational::new(num::pow(BigInt::from(n), 2 * d as usize), &df * &df);
        out.push(Scalar::pow(z, 2 * d) * F::from_rational(&w) * s);
    }
    Ok(out)
}

pub fn bgw_char<F: Scalar>(z: &F, c: &[F], max_degree: usize) -> Result<F> {
    Ok(sum(bgw_char_terms(z, c, max_degree)?))
}

fn sum<F: Scalar>(terms: Vec<F>) -> F {
    terms.into_iter().fold(F::zero(), |acc, x| acc + x)
}

/// Outcome of the basic coefficient bounds at one degree.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundCheck {
    pub d: u32,
    pub n: usize,
    /// `|d!·[z^d] I_N|²`
    pub hciz_sq: BigRational,
    /// `|d!·[z^{2d}] J_N|²`
    pub bgw_sq: BigRational,
    /// `N^{2d}`
    pub hciz_bound: BigInt,
    /// `P(LIS_d ≤ N) N^{2d}`
    pub bgw_bound: BigRational,
}

impl BoundCheck {
    pub fn holds(&self) -> bool {
        let hb = BigRational::from_integer(&self.hciz_bound * &self.hciz_bound);
        let bb = &self.bgw_bound * &self.bgw_bound;
        self.hciz_sq <= hb && self.bgw_sq <= bb
    }

    /// `|I_N(d)| = N^{2d}` exactly.
    pub fn hciz_saturated(&self) -> bool {
        self.hciz_sq == BigRational::from_integer(&self.hciz_bound * &self.hciz_bound)
    }
}

/// `|I_N(d)| ≤ N^{2d}` and `|J_N(d)| ≤ P(LIS_d ≤ N) N^{2d}` evaluated exactly,
/// with `I_N(d) = d!·[z^d] I_N` and `J_N(d) = d!·[z^{2d}] J_N`.
pub fn string_coeff_bound_check(spec: &SpectrumInput<GaussianRational>, d: u32) -> Result<BoundCheck> {
    spec.check_unit_disc()?;
    let n = spec.n();
    let one = GaussianRational::one();
    let df = GaussianRational::from_rational(&BigRational::from_integer(factorial(d)));
    let i = hciz_char_terms(&one, &spec.a, &spec.b, d as usize)?.pop().unwrap() * df.clone();
    let j = bgw_char_terms(&one, &spec.c, d as usize)?.pop().unwrap() * df;
    let nn = num::pow(BigInt::from(n), 2 * d as usize);
    Ok(BoundCheck {
        d,
        n,
        hciz_sq: i.norm_sqr(),
        bgw_sq: j.norm_sqr(),
        hciz_bound: nn.clone(),
        bgw_bound: lis_probability(d, n as u32) * BigRational::from_integer(nn),
    })
}

/// `s_λ(A) s_λ(B) / dim W^λ`, the exact value of `∫ s_λ(AUBU†) dU`.
pub fn schur_conj_exact<F: Scalar>(lambda: &Partition, a: &[F], b: &[F]) -> Result<F> {
    let n = a.len() as u32;
    if lambda.len() > n as usize {
        return Ok(F::zero());
    }
    let w = BigRational::new(BigInt::one(), dim_gl(lambda, n)?);
    Ok(schur_eval(lambda, a) * schur_eval(lambda, b) * F::from_rational(&w))
}

/// `∫ s_λ(AU) s_μ(BU†) dU = δ_{λμ} s_λ(AB) / dim W^λ`.
pub fn schur_pair_exact<F: Scalar>(lambda: &Partition, mu: &Partition, c: &[F]) -> Result<F> {
    if lambda != mu {
        return Ok(F::zero());
    }
    let n = c.len() as u32;
    if lambda.len() > n as usize {
        return Ok(F::zero());
    }
    let w = BigRational::new(BigInt::one(), dim_gl(lambda, n)?);
    Ok(schur_eval(lambda, c) * F::from_rational(&w))
}

/// Partitions of `d` with at most `n` rows.
pub fn admissible_partitions(d: u32, n: usize) -> Vec<Partition> {
    enumerate_partitions(d, Some(n))
}

/// `Σ_d |term_d|` beyond `D` bounded by the geometric estimate
/// `Σ_{d>D} (|z| N²)^d / d!` (HCIZ) or `Σ_{d>D} (|z| N)^{2d} / d!` (BGW),
/// valid on unit-modulus spectra.
pub fn truncation_tail_bound(hciz: bool, z_abs: f64, n: usize, max_degree: usize) -> f64 {
    let x = if hciz {
        z_abs * (n * n) as f64
    } else {
        (z_abs * n as f64).powi(2)
    };
    let mut term = 1.0;
    let mut tail = 0.0;
    for d in 1..=max_degree + 200 {
        term *= x / d as f64;
        if d > max_degree {
            tail += term;
        }
        if d > max_degree && term < 1e-300 {
            break;
        }
    }
    tail
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ratio, unit_gaussian, Complex64};
    use num::Complex;
    use num::Zero;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        ratio(n, d)
    }

    fn g(re: (i64, i64), im: (i64, i64)) -> GaussianRational {
        Complex::new(q(re.0, re.1), q(im.0, im.1))
    }

    #[test]
    fn schur_examples() {
        let x = vec![q(2, 1), q(3, 1), q(-1, 2)];
        assert_eq!(schur_eval(&p(&[1]), &x), q(9, 2));
        assert_eq!(schur_eval(&p(&[1, 1]), &[q(2, 1), q(5, 1)]), q(10, 1));
        let ones = vec![q(1, 1); 3];
        assert_eq!(schur_eval(&p(&[2, 1]), &ones), q(8, 1));
        assert!(schur_eval(&p(&[1, 1, 1]), &[q(2, 1), q(3, 1)]).is_zero());
    }

    /// det(x_i^{λ_j + n − j}) / det(x_i^{n − j})
    fn bialternant(lambda: &Partition, x: &[BigRational]) -> BigRational {
        let n = x.len();
        let mut lam = lambda.parts().to_vec();
        lam.resize(n, 0);
        let num_m: Vec<Vec<BigRational>> = x
            .iter()
            .map(|xi| (0..n).map(|j| num::pow(xi.clone(), lam[j] as usize + n - 1 - j)).collect())
            .collect();
        let den_m: Vec<Vec<BigRational>> = x
            .iter()
            .map(|xi| (0..n).map(|j| num::pow(xi.clone(), n - 1 - j)).collect())
            .collect();
        det(num_m) / det(den_m)
    }

    fn det(mut m: Vec<Vec<BigRational>>) -> BigRational {
        let n = m.len();
        let mut acc = BigRational::one();
        for c in 0..n {
            let Some(piv) = (c..n).find(|&r| !m[r][c].is_zero()) else {
                return BigRational::zero();
            };
            if piv != c {
                m.swap(piv, c);
                acc = -acc;
            }
            acc *= m[c][c].clone();
            for r in c + 1..n {
                let f = &m[r][c] / &m[c][c];
                for k in c..n {
                    let v = &m[c][k] * &f;
                    m[r][k] -= v;
                }
            }
        }
        acc
    }

    #[test]
    fn schur_matches_bialternant() {
        let points = [q(1, 2), q(-2, 3), q(3, 1), q(5, 7), q(-1, 1)];
        for d in 1..=5u32 {
            for n in 1..=5usize {
                let x = &points[..n];
                for lam in enumerate_partitions(d, Some(n)) {
                    assert_eq!(schur_eval(&lam, x), bialternant(&lam, x), "{lam} n={n}");
                }
            }
        }
    }

    #[test]
    fn trivial_fields_closed_forms() {
        let z = q(1, 1);
        for n in 1..=4usize {
            let ones = vec![q(1, 1); n];
            let hc = hciz_char_terms(&z, &ones, &ones, 6).unwrap();
            let bg = bgw_char_terms(&z, &ones, 6).unwrap();
            for d in 0..=6u32 {
                let nn = num::pow(BigInt::from(n), 2 * d as usize);
                assert_eq!(hc[d as usize], BigRational::new(nn.clone(), factorial(d)));
                assert_eq!(
                    bg[d as usize],
                    lis_probability(d, n as u32) * BigRational::new(nn, factorial(d))
                );
            }
        }
    }

    #[test]
    fn one_dimensional() {
        // N = 1: e^{zab} and Σ z^{2d} c^d/(d!)²
        let z = q(1, 3);
        let (a, b) = (q(2, 1), q(-1, 2));
        let terms = hciz_char_terms(&z, std::slice::from_ref(&a), std::slice::from_ref(&b), 5).unwrap();
        let terms_b = bgw_char_terms(&z, &[&a * &b], 5).unwrap();
        for d in 0..=5u32 {
            let x = &z * &a * &b;
            assert_eq!(terms[d as usize], num::pow(x, d as usize) / BigRational::from_integer(factorial(d)));
            let df = BigRational::from_integer(factorial(d));
            let c = &a * &b;
            assert_eq!(
                terms_b[d as usize],
                num::pow(z.clone(), 2 * d as usize) * num::pow(c, d as usize) / (&df * &df)
            );
        }
    }

    #[test]
    fn symmetric_under_swap_and_permutation() {
        let a = vec![g((1, 2), (1, 3)), g((-1, 5), (0, 1)), g((2, 3), (-1, 4))];
        let b = vec![g((1, 1), (0, 1)), g((0, 1), (1, 2)), g((-3, 7), (1, 7))];
        let z = g((1, 2), (1, 2));
        let base = hciz_char(&z, &a, &b, 4).unwrap();
        assert_eq!(base, hciz_char(&z, &b, &a, 4).unwrap());
        let a2 = vec![a[2].clone(), a[0].clone(), a[1].clone()];
        let b2 = vec![b[1].clone(), b[2].clone(), b[0].clone()];
        assert_eq!(base, hciz_char(&z, &a2, &b2, 4).unwrap());
    }

    #[test]
    fn bound_check_examples() {
        let unit = SpectrumInput::<GaussianRational>::trivial(3);
        for d in 1..=4 {
            let c = string_coeff_bound_check(&unit, d).unwrap();
            assert!(c.holds() && c.hciz_saturated());
        }
        let spec = SpectrumInput::new(
            vec![unit_gaussian(3, 4), unit_gaussian(5, 12)],
            vec![unit_gaussian(8, 15), unit_gaussian(-7, 24)],
        )
        .unwrap();
        for d in 1..=5 {
            assert!(string_coeff_bound_check(&spec, d).unwrap().holds());
        }
        let bad = SpectrumInput::new(vec![g((2, 1), (0, 1))], vec![g((1, 1), (0, 1))]).unwrap();
        assert!(matches!(string_coeff_bound_check(&bad, 1), Err(Error::Modulus { .. })));
    }

    #[test]
    fn float_and_exact_agree() {
        let a = vec![g((1, 2), (1, 3)), g((-1, 5), (0, 1))];
        let b = vec![g((1, 1), (0, 1)), g((0, 1), (1, 2))];
        let z = g((1, 10), (0, 1));
        let exact = hciz_char(&z, &a, &b, 6).unwrap();
        let conv = |v: &[GaussianRational]| v.iter().map(crate::scalar::gaussian_to_complex).collect::<Vec<Complex64>>();
        let float = hciz_char(&Complex64::new(0.1, 0.0), &conv(&a), &conv(&b), 6).unwrap();
        assert!((crate::scalar::gaussian_to_complex(&exact) - float).norm() < 1e-12);
        let seq = hciz_char_terms_with(&z, &a, &b, 5, Execution::Sequential).unwrap();
        assert_eq!(seq, hciz_char_terms(&z, &a, &b, 5).unwrap());
    }

    #[test]
    fn tail_bound_is_exponential_remainder() {
        let t = truncation_tail_bound(true, 0.1, 2, 0);
        assert!((t - (0.4f64.exp() - 1.0)).abs() < 1e-14);
        assert!(truncation_tail_bound(false, 0.1, 3, 12) < 1e-20);
    }
}
