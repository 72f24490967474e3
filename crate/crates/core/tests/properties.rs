use std::f64::consts::FRAC_PI_2;
use std::sync::OnceLock;

use equidist::chatelet::{self, Region, Sector};
use equidist::gaussian::{self, GaussianInt};
use equidist::linnik::{self, SectorQuery};
use equidist::numtheory::{chi4, gcd_u64};
use equidist::quadfields::{self, RealQuadInt};
use equidist::{PrimeTables, QuarticForm};
use num_complex::Complex;
use proptest::prelude::*;

fn tables() -> &'static PrimeTables {
    static T: OnceLock<PrimeTables> = OnceLock::new();
    T.get_or_init(|| PrimeTables::build(200_000).unwrap())
}

fn g(n: u64, h: u32) -> Complex<f64> {
    gaussian::g_h(n, &tables().factorize(n).unwrap(), h).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn factorization_rebuilds_n(n in 1u64..5_000_000) {
        let f = tables().factorize(n).unwrap();
        prop_assert_eq!(f.value(), Some(n as u128));
        for &(p, e) in f.pairs() {
            prop_assert!(e > 0);
            prop_assert!(is_prime_by_trial(p));
        }
    }

    #[test]
    fn g_h_is_multiplicative(u in 1u64..3000, v in 1u64..3000, k in 1u32..4) {
        prop_assume!(gcd_u64(u, v) == 1);
        let h = 4 * k;
        prop_assert!((g(u * v, h) - g(u, h) * g(v, h)).norm() < 1e-9);
    }

    #[test]
    fn euler_product_matches_definition(n in 1u64..100_000, k in 1u32..4) {
        let f = tables().factorize(n).unwrap();
        let direct = g(n, 4 * k);
        let euler: f64 = gaussian::g_h_multiplicative(&f, 4 * k).unwrap();
        prop_assert!((direct.re - euler).abs() < 1e-9 && direct.im.abs() < 1e-9);
    }

    #[test]
    fn representation_count(n in 1u64..1_000_000) {
        let f = tables().factorize(n).unwrap();
        let chi: i64 = f.divisors().into_iter().map(|d| chi4(d as i64) as i64).sum();
        let reps = gaussian::representations(n, &f).unwrap();
        prop_assert_eq!(reps.len() as i64, 4 * chi);
        prop_assert!(reps.iter().all(|z| z.norm() == n as u128));
    }

    #[test]
    fn sector_counts_rotate(n in 3u64..5000, a in 0.0f64..0.5, lo in 0.0f64..4.5, width in 0.05f64..1.0) {
        let hi = (lo + width).min(3.0 * FRAC_PI_2);
        prop_assume!(hi > lo);
        let q = SectorQuery::new(a, 1.0, lo, hi).unwrap();
        let turned = SectorQuery::new(a, 1.0, lo + FRAC_PI_2, hi + FRAC_PI_2).unwrap();
        prop_assert_eq!(
            linnik::count_solutions(n, &q, tables()).unwrap(),
            linnik::count_solutions(n, &turned, tables()).unwrap()
        );
    }

    #[test]
    fn sector_counts_add(n in 3u64..5000, lo in 0.0f64..2.0, mid in 2.0f64..4.0, hi in 4.0f64..6.28) {
        let count = |c, d| linnik::count_solutions(n, &SectorQuery::new(0.0, 1.0, c, d).unwrap(), tables()).unwrap();
        prop_assert_eq!(count(lo, mid) + count(mid, hi), count(lo, hi));
    }

    #[test]
    fn z2_character_ignores_units(x in -1_000_000i64..1_000_000, y in -1_000_000i64..1_000_000) {
        let beta = RealQuadInt::new(x, y);
        prop_assume!(!beta.is_zero());
        let base: Complex<f64> = quadfields::gross_char_z2(beta);
        let up: Complex<f64> = quadfields::gross_char_z2(beta.times_unit().unwrap());
        let neg: Complex<f64> = quadfields::gross_char_z2(RealQuadInt::new(-x, -y));
        prop_assert!((base - up).norm() < 1e-9);
        prop_assert!((base - neg).norm() < 1e-9);
    }

    #[test]
    fn form_representations_match_ideals(n in 1u64..200_000) {
        let reps: u64 = (0..4).map(|j| quadfields::reps_by_form56(j, n).unwrap()).sum();
        let f = tables().factorize(n).unwrap();
        let ideals = quadfields::ideal_count_m14(n, &f).unwrap();
        prop_assert_eq!(reps as i64, 2 * ideals);
        prop_assert_eq!(quadfields::class_counts_m14(&f).unwrap().iter().sum::<u64>() as i64, ideals);
    }

    #[test]
    fn points_split_as_nu_squared_alpha(i in 0usize..64, u in -30i64..30, v in -30i64..30, h in 1u32..4) {
        prop_assume!(gcd_u64(u.unsigned_abs(), v.unsigned_abs()) == 1);
        let t = admissible()[i];
        let n = QuarticForm::phi5().eval(u, v).unwrap() as u64;
        let m = t * t * n;
        for z in gaussian::representations(m, &tables().factorize(m).unwrap()).unwrap() {
            if gcd_u64(gcd_u64(z.re.unsigned_abs(), z.im.unsigned_abs()), t) != 1 {
                continue;
            }
            let (nu, alpha) = chatelet::mu_decomposition_check(t, z.re, z.im, tables()).unwrap();
            prop_assert!(nu.is_primary() && nu.norm() == t as u128);
            prop_assert_eq!(nu * nu * alpha, z);
        }
        let direct: Complex<f64> = chatelet::inner_char_sum_direct(t, n, h, tables()).unwrap();
        let split: Complex<f64> = chatelet::inner_char_sum_mu(t, n, h, tables()).unwrap();
        prop_assert!((direct - split).norm() < 1e-8);
    }
}

fn is_prime_by_trial(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Odd `t` whose prime factors are all `1 mod 4`.
fn admissible() -> &'static [u64] {
    static A: OnceLock<Vec<u64>> = OnceLock::new();
    A.get_or_init(|| {
        (1u64..)
            .step_by(2)
            .filter(|&t| tables().factorize(t).unwrap().pairs().iter().all(|&(p, _)| p % 4 == 1))
            .take(64)
            .collect()
    })
}

#[test]
fn lt2_sum_grows_with_b() {
    let form = QuarticForm::phi5();
    let values: Vec<f64> = [1.0, 5.0, 20.0, 100.0, 500.0]
        .iter()
        .map(|&b| chatelet::lemma_lt2_sum(&form, b, 1, tables()).unwrap())
        .collect();
    assert!(values.windows(2).all(|w| w[0] <= w[1]), "{values:?}");
}

#[test]
fn sector_counts_partition_the_full_count() {
    let form = QuarticForm::phi5();
    let cuts = [0.0, 0.7, 2.0, 3.9, 5.5, std::f64::consts::TAU];
    let total = chatelet::enumerate_nb(&form, 200.0, &Region::square(), &Sector::full(), tables()).unwrap();
    let parts = cuts
        .windows(2)
        .map(|w| chatelet::enumerate_nb(&form, 200.0, &Region::square(), &Sector::new(w[0], w[1]).unwrap(), tables()).unwrap())
        .fold(num_rational::Ratio::from_integer(0), |a, b| a + b);
    assert_eq!(parts, total);
}

#[test]
fn conjugate_class_characters_agree() {
    for b in [10.0, 100.0, 400.0] {
        let one: f64 = quadfields::class_char_sum_m14(&QuarticForm::phi5(), b, 1, tables()).unwrap();
        let three: f64 = quadfields::class_char_sum_m14(&QuarticForm::phi5(), b, 3, tables()).unwrap();
        assert_eq!(one, three);
    }
}

#[test]
fn unit_rotation_of_a_point() {
    let z = GaussianInt::new(3, 2);
    let a: f64 = z.arg();
    let b: f64 = (GaussianInt::I * z).arg();
    assert!((b - a - FRAC_PI_2).abs() < 1e-12);
}
