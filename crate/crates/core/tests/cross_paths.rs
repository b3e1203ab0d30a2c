use hciz_core::integrals::{bgw_char_terms, hciz_char_terms};
use hciz_core::monotone::{hurwitz_connected, walks_bruteforce, walks_jm};
use hciz_core::partitions::{enumerate_partitions, factorial, Partition};
use hciz_core::plancherel::lis_probability;
use hciz_core::scalar::{ratio, unit_gaussian, GaussianRational, Scalar};
use hciz_core::stringseries::{
    assemble_bgw, assemble_hciz, free_energy, log_coefficients, n_power, Alphabet,
};
use num::{BigInt, BigRational, Complex, One, Signed, Zero};
use proptest::prelude::*;

fn p(parts: &[u32]) -> Partition {
    Partition::new(parts.to_vec()).unwrap()
}

fn g(re: BigRational, im: BigRational) -> GaussianRational {
    Complex::new(re, im)
}

#[test]
fn expand_examples() {
    let s = assemble_hciz(2, 2).unwrap();
    assert_eq!(s.get(&p(&[1]), &p(&[1])), Some(&BigRational::one()));
    assert_eq!(s.get(&p(&[2]), &p(&[2])), Some(&ratio(2, 3)));
    let j1 = assemble_bgw(1, 2).unwrap();
    assert_eq!(j1.get(&Partition::empty(), &p(&[1])), Some(&BigRational::one()));
    let j2 = assemble_bgw(2, 3).unwrap();
    assert_eq!(j2.get(&Partition::empty(), &p(&[1])), Some(&ratio(2, 1)));
    for d in 1..=3 {
        assert!(j2.get(&Partition::empty(), &Partition::ones(d)).unwrap().is_positive());
    }
}

#[test]
fn string_and_character_paths_agree_exactly() {
    let a = [g(ratio(1, 2), ratio(1, 3)), g(ratio(-2, 5), ratio(0, 1)), g(ratio(1, 7), ratio(-3, 4))];
    let b = [g(ratio(2, 3), ratio(0, 1)), g(ratio(-1, 3), ratio(1, 2)), g(ratio(0, 1), ratio(1, 1))];
    let z = g(ratio(1, 3), ratio(-1, 5));
    for n in 1..=3usize {
        let (a, b) = (&a[..n], &b[..n]);
        let s = assemble_hciz(n as u32, 4).unwrap();
        let terms = s.degree_terms(Alphabet::Pair(a, b)).unwrap();
        let direct = hciz_char_terms(&z, a, b, 4).unwrap();
        for d in 0..=4 {
            assert_eq!(Scalar::pow(&z, d as u32) * terms[d].clone(), direct[d], "N={n} d={d}");
        }
        let c: Vec<_> = a.iter().zip(b).map(|(x, y)| x * y).collect();
        let j = assemble_bgw(n as u32, 4).unwrap();
        let jt = j.degree_terms(Alphabet::Single(&c)).unwrap();
        let jd = bgw_char_terms(&z, &c, 4).unwrap();
        for d in 0..=4 {
            assert_eq!(Scalar::pow(&z, 2 * d as u32) * jt[d].clone(), jd[d]);
        }
    }
}

#[test]
fn evaluation_on_one_dimension() {
    // N = 1 HCIZ is e^{zab}
    let z = ratio(1, 2);
    let (a, b) = (ratio(3, 1), ratio(-1, 3));
    let s = assemble_hciz(1, 5).unwrap();
    let value = s.evaluate(&z, Alphabet::Pair(std::slice::from_ref(&a), std::slice::from_ref(&b))).unwrap();
    let x = &z * &a * &b;
    let expected: BigRational = (0..=5u32)
        .map(|d| num::pow(x.clone(), d as usize) / BigRational::from_integer(factorial(d)))
        .sum();
    assert_eq!(value, expected);
}

#[test]
fn log_at_trivial_fields_is_linear() {
    // log e^{zN²} = zN²: only degree one survives once monomials are summed
    for n in 2..=4u32 {
        let s = assemble_hciz(n, 4).unwrap();
        let log = s.log().unwrap();
        let ones = vec![BigRational::one(); n as usize];
        let terms = log.degree_terms(Alphabet::Pair(&ones, &ones)).unwrap();
        assert_eq!(terms[1], BigRational::from_integer(BigInt::from(n * n)));
        for t in &terms[2..] {
            assert!(t.is_zero());
        }
        let l = log_coefficients(&s, n).unwrap();
        assert_eq!(l[&(p(&[1]), p(&[1]))], BigRational::from_integer(BigInt::from(n).pow(2)));
    }
}

#[test]
fn log_coefficient_sign_follows_lengths() {
    let n = 8;
    let s = assemble_hciz(n, 3).unwrap();
    let l = log_coefficients(&s, n).unwrap();
    for ((a, b), v) in &l {
        let h0 = hurwitz_connected(a, b, 0).unwrap();
        if h0.is_zero() {
            continue;
        }
        let positive = (a.len() + b.len()) % 2 == 0;
        assert_eq!(v.is_positive(), positive, "{a} {b}");
    }
}

#[test]
fn exactness_bridge_tightens_with_genus() {
    for n in [8u32, 16] {
        let s = assemble_hciz(n, 3).unwrap();
        let l = log_coefficients(&s, n).unwrap();
        for ((a, b), v) in &l {
            let sign = if (a.len() + b.len()) % 2 == 0 { 1 } else { -1 };
            let mut partial = BigRational::zero();
            let mut last = None::<BigRational>;
            for genus in 0..=3u32 {
                let h = BigRational::from_integer(hurwitz_connected(a, b, genus).unwrap() * sign);
                partial += h * n_power(n, 2 - 2 * genus as i64);
                let err = (v - &partial).abs();
                if let Some(prev) = &last {
                    assert!(&err <= prev, "{a} {b} g={genus}");
                }
                last = Some(err);
            }
        }
    }
}

#[test]
fn free_energy_domination() {
    // |F^(g)(z)| ≤ Σ |coeff| ε^d N^{ℓ(α)+ℓ(β)} for |z| ≤ ε, unit-modulus spectra
    let eps = ratio(1, 20);
    let a = vec![unit_gaussian(3, 4), unit_gaussian(-5, 12), unit_gaussian(8, 15)];
    let b = vec![unit_gaussian(7, 24), unit_gaussian(1, 0), unit_gaussian(-20, 21)];
    let z: GaussianRational = Complex::new(ratio(3, 100), ratio(-4, 100));
    for genus in 0..=2u32 {
        let f = free_energy(hciz_core::SeriesKind::Hciz, 3, genus, 4).unwrap();
        let v = f.evaluate(&z, Alphabet::Pair(&a, &b)).unwrap();
        let bound: BigRational = f
            .iter()
            .map(|((al, be), c)| {
                let n = BigRational::from_integer(BigInt::from(3));
                // |p_α| ≤ N^{ℓ(α)} on the unit circle, same for β
                c.abs() * num::pow(eps.clone(), al.size() as usize) * num::pow(n, al.len() + be.len())
            })
            .sum();
        assert!(v.norm_sqr() <= &bound * &bound, "g = {genus}");
    }
}

#[test]
fn trivial_field_gessel_rains() {
    for n in 1..=4u32 {
        let ones = vec![BigRational::one(); n as usize];
        let j = assemble_bgw(n, 5).unwrap();
        let terms = j.degree_terms(Alphabet::Single(&ones)).unwrap();
        for d in 0..=5u32 {
            let expected = lis_probability(d, n)
                * BigRational::new(BigInt::from(n).pow(2 * d), factorial(d));
            assert_eq!(terms[d as usize], expected);
        }
    }
}

fn partition_strategy(max_d: u32) -> impl Strategy<Value = (Partition, Partition)> {
    (1..=max_d).prop_flat_map(|d| {
        let ps = enumerate_partitions(d, None);
        let n = ps.len();
        (0..n, 0..n).prop_map(move |(i, j)| (ps[i].clone(), ps[j].clone()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn content_route_counts_walks((a, b) in partition_strategy(4), r in 0usize..=5) {
        prop_assert_eq!(walks_jm(&a, &b, r).unwrap(), walks_bruteforce(&a, &b, r).unwrap());
    }

    #[test]
    fn walks_are_symmetric((a, b) in partition_strategy(5), r in 0usize..=6) {
        prop_assert_eq!(walks_jm(&a, &b, r).unwrap(), walks_jm(&b, &a, r).unwrap());
    }
}
