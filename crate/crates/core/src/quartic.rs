//! Binary quartic forms `F(u,v) = f4 u⁴ + f3 u³v + f2 u²v² + f1 uv³ + f0 v⁴`:
//! construction with a separability check, irreducibility over `ℚ(i)`, and
//! the projective zero count `ρ(p)` modulo a prime.

use std::fmt;

use num_rational::{BigRational, Ratio};
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::gaussian::{split_prime, GaussianInt, UNITS};
use crate::numtheory::{mul_mod, pow_mod};
use crate::scalar::Real;

/// Coefficient magnitude above which the factor search gives up.
const SEARCH_COEFF_LIMIT: i64 = 1_000_000_000;
/// Largest number of candidate linear coefficients tried per quadratic split.
const SEARCH_BUDGET: u128 = 4_000_000;
/// Below this the literal double loop defines `ρ(p)`.
const RHO_BRUTE_BOUND: u64 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuarticForm {
    coeffs: [i64; 5],
}

impl QuarticForm {
    /// `F` from `f4, f3, f2, f1, f0`; rejects forms with a repeated factor.
    pub fn new(f4: i64, f3: i64, f2: i64, f1: i64, f0: i64) -> Result<Self> {
        let form = Self { coeffs: [f4, f3, f2, f1, f0] };
        if !form.is_separable() {
            return Err(Error::Invalid(format!("form {form} is not separable")));
        }
        Ok(form)
    }

    pub fn from_slice(c: &[i64]) -> Result<Self> {
        match *c {
            [f4, f3, f2, f1, f0] => Self::new(f4, f3, f2, f1, f0),
            _ => Err(Error::Invalid(format!("a quartic form needs 5 coefficients, got {}", c.len()))),
        }
    }

    /// `u⁴ + u³v + u²v² + uv³ + v⁴`, the homogenized fifth cyclotomic polynomial.
    pub fn phi5() -> Self {
        Self { coeffs: [1; 5] }
    }

    /// `[f4, f3, f2, f1, f0]`.
    pub fn coeffs(&self) -> [i64; 5] {
        self.coeffs
    }

    /// Coefficient of `X^j` in `F(X, 1)`.
    fn x_coeff(&self, j: usize) -> i64 {
        self.coeffs[4 - j]
    }

    /// `F(u, v)` exactly, or `None` on `i128` overflow.
    pub fn eval(&self, u: i64, v: i64) -> Option<i128> {
        let (u, v) = (u as i128, v as i128);
        let mut acc = 0i128;
        for j in 0..=4u32 {
            let term = (self.x_coeff(j as usize) as i128)
                .checked_mul(u.checked_pow(j)?)?
                .checked_mul(v.checked_pow(4 - j)?)?;
            acc = acc.checked_add(term)?;
        }
        Some(acc)
    }

    pub fn eval_real<T: Real>(&self, u: T, v: T) -> T {
        (0..=4).rev().fold(T::zero(), |acc, j| acc * u + T::of_i64(self.x_coeff(j)) * v.powi(4 - j as i32))
    }

    /// No repeated linear factor over `ℂ`: `F(X,1)` is squarefree and `v²`
    /// does not divide `F`.
    fn is_separable(&self) -> bool {
        let poly: Vec<BigRational> =
            (0..=4).map(|j| BigRational::from_integer(self.x_coeff(j).into())).collect();
        let poly = trim(poly);
        let Some(deg) = poly.len().checked_sub(1) else {
            return false;
        };
        if deg < 3 {
            return false;
        }
        let deriv: Vec<BigRational> = poly
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, c)| c * BigRational::from_integer((j as i64).into()))
            .collect();
        rational_gcd_degree(poly, trim(deriv)) == 0
    }
}

impl fmt::Display for QuarticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d, e] = self.coeffs;
        write!(f, "({a},{b},{c},{d},{e})")
    }
}

fn trim<T: Zero>(mut p: Vec<T>) -> Vec<T> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

/// Degree of `gcd(a, b)` over `ℚ`; both nonzero.
fn rational_gcd_degree(mut a: Vec<BigRational>, mut b: Vec<BigRational>) -> usize {
    while !b.is_empty() {
        let mut r = a;
        while r.len() >= b.len() {
            let q = r.last().unwrap() / b.last().unwrap();
            let shift = r.len() - b.len();
            for (i, c) in b.iter().enumerate() {
                r[i + shift] -= &q * c;
            }
            r = trim(r);
            if r.is_empty() {
                break;
            }
        }
        a = b;
        b = r;
    }
    a.len() - 1
}

type G = (i128, i128);

fn g_mul(x: G, y: G) -> Option<G> {
    Some((
        x.0.checked_mul(y.0)?.checked_sub(x.1.checked_mul(y.1)?)?,
        x.0.checked_mul(y.1)?.checked_add(x.1.checked_mul(y.0)?)?,
    ))
}

fn g_add(x: G, y: G) -> Option<G> {
    Some((x.0.checked_add(y.0)?, x.1.checked_add(y.1)?))
}

fn g_sub(x: G, y: G) -> Option<G> {
    Some((x.0.checked_sub(y.0)?, x.1.checked_sub(y.1)?))
}

/// `x / y` when `y` divides `x` exactly in `ℤ[i]`.
fn g_div(x: G, y: G) -> Option<Option<G>> {
    let n = y.0.checked_mul(y.0)?.checked_add(y.1.checked_mul(y.1)?)?;
    let num = g_mul(x, (y.0, -y.1))?;
    if num.0 % n != 0 || num.1 % n != 0 {
        return Some(None);
    }
    Some(Some((num.0 / n, num.1 / n)))
}

fn g_of(z: GaussianInt) -> G {
    (z.re as i128, z.im as i128)
}

fn indeterminate(form: &QuarticForm) -> Error {
    Error::Indeterminate(format!("factor search for {form} exceeded its bounds"))
}

/// Divisors of a nonzero rational integer in `ℤ[i]`, one per associate class.
fn gaussian_divisors(m: i64) -> Result<Vec<G>> {
    let mut out: Vec<G> = vec![(1, 0)];
    for (p, e) in num_prime::nt_funcs::factorize64(m.unsigned_abs()) {
        let e = e as u32;
        let powers: Vec<G> = if p == 2 {
            (0..=2 * e).map(|k| g_of(GaussianInt::ONE_PLUS_I.checked_pow(k).unwrap())).collect()
        } else if p % 4 == 3 {
            (0..=e).map(|k| ((p as i128).pow(k), 0)).collect()
        } else {
            let pi = split_prime(p)?;
            let mut v = Vec::new();
            for a in 0..=e {
                for b in 0..=e {
                    v.push(g_of(pi.checked_pow(a)?.checked_mul(pi.conj().checked_pow(b)?)?));
                }
            }
            v
        };
        let mut next = Vec::with_capacity(out.len() * powers.len());
        for &d in &out {
            for &q in &powers {
                next.push(g_mul(d, q).ok_or_else(|| Error::Overflow("divisor of a coefficient".into()))?);
            }
        }
        out = next;
    }
    Ok(out)
}

fn with_units(ds: &[G]) -> Vec<G> {
    ds.iter().flat_map(|&d| UNITS.iter().map(move |&u| g_mul(d, g_of(u)).unwrap())).collect()
}

/// Whether `F(X, 1)` is irreducible over `ℚ(i)`. A form with `f4 = 0` has
/// the factor `v` and is reported reducible.
///
/// Decided by exhaustive search: rational roots `a/b` with `a | f0`,
/// `b | f4` in `ℤ[i]`, then quadratic splittings with leading and constant
/// coefficients dividing `f4` and `f0`. When the linear coefficients are not
/// pinned down by the cubic and linear terms they are searched inside the
/// Mignotte bound `2‖F‖₂`. Exceeding the search limits is an
/// [`Error::Indeterminate`].
pub fn irreducible_over_qi(form: &QuarticForm) -> Result<bool> {
    let f = form.coeffs;
    if f[0] == 0 || f[4] == 0 {
        return Ok(false);
    }
    if f.iter().any(|c| c.abs() > SEARCH_COEFF_LIMIT) {
        return Err(indeterminate(form));
    }
    let p: Vec<G> = (0..=4).map(|j| (form.x_coeff(j) as i128, 0)).collect();
    let lead = gaussian_divisors(f[0])?;
    let constant = with_units(&gaussian_divisors(f[4])?);
    let overflow = || indeterminate(form);

    for &b in &lead {
        for &a in &constant {
            // Σ p_j a^j b^(4−j)
            let mut acc: G = (0, 0);
            for (j, &c) in p.iter().enumerate() {
                let mut term = c;
                for _ in 0..j {
                    term = g_mul(term, a).ok_or_else(overflow)?;
                }
                for _ in j..4 {
                    term = g_mul(term, b).ok_or_else(overflow)?;
                }
                acc = g_add(acc, term).ok_or_else(overflow)?;
            }
            if acc == (0, 0) {
                return Ok(false);
            }
        }
    }

    let norm2: f64 = f.iter().map(|&c| (c as f64).powi(2)).sum::<f64>().sqrt();
    let bound = (2.0 * norm2).floor() as i128;
    if (2 * bound as u128 + 1).pow(2) > SEARCH_BUDGET {
        return Err(indeterminate(form));
    }
    let (f3, f2, f1) = (p[3], p[2], p[1]);
    for &a in &lead {
        let d = g_div(p[4], a).ok_or_else(overflow)?.expect("a divides f4");
        for &c in &constant {
            let g = g_div(p[0], c).ok_or_else(overflow)?.expect("c divides f0");
            let x2 = |b: G, e: G| -> Option<bool> {
                let s = g_add(g_add(g_mul(a, g)?, g_mul(b, e)?)?, g_mul(c, d)?)?;
                Some(s == f2)
            };
            let det = g_sub(g_mul(d, c).ok_or_else(overflow)?, g_mul(a, g).ok_or_else(overflow)?).ok_or_else(overflow)?;
            if det != (0, 0) {
                let nb = g_sub(g_mul(f3, c).ok_or_else(overflow)?, g_mul(a, f1).ok_or_else(overflow)?).ok_or_else(overflow)?;
                let ne = g_sub(g_mul(d, f1).ok_or_else(overflow)?, g_mul(g, f3).ok_or_else(overflow)?).ok_or_else(overflow)?;
                let b = g_div(nb, det).ok_or_else(overflow)?;
                let e = g_div(ne, det).ok_or_else(overflow)?;
                if let (Some(b), Some(e)) = (b, e) {
                    if x2(b, e).ok_or_else(overflow)? {
                        return Ok(false);
                    }
                }
                continue;
            }
            for br in -bound..=bound {
                for bi in -bound..=bound {
                    if br * br + bi * bi > bound * bound {
                        continue;
                    }
                    let b = (br, bi);
                    let rest = g_sub(f3, g_mul(b, d).ok_or_else(overflow)?).ok_or_else(overflow)?;
                    let Some(e) = g_div(rest, a).ok_or_else(overflow)? else {
                        continue;
                    };
                    let linear = g_add(g_mul(b, g).ok_or_else(overflow)?, g_mul(c, e).ok_or_else(overflow)?);
                    if linear.ok_or_else(overflow)? == f1 && x2(b, e).ok_or_else(overflow)? {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// `ρ(p) = #{(u,v) ∈ (0,p]² : p | F(u,v), p ∤ gcd(u,v)} / (p − 1)`.
///
/// The literal double loop for `p ≤ 100`; above that, the number of
/// distinct roots of `F(X,1)` in `𝔽_p` plus one if `p | f4`.
pub fn rho(form: &QuarticForm, p: u64) -> Result<Ratio<u64>> {
    if !num_prime::nt_funcs::is_prime64(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    if p <= RHO_BRUTE_BOUND {
        Ok(rho_bruteforce(form, p))
    } else {
        Ok(Ratio::from_integer(rho_fast(form, p)))
    }
}

fn coeffs_mod(form: &QuarticForm, p: u64) -> [u64; 5] {
    // Indexed by the power of X.
    std::array::from_fn(|j| form.x_coeff(j).rem_euclid(p as i64) as u64)
}

/// The defining double loop, `O(p²)`.
pub fn rho_bruteforce(form: &QuarticForm, p: u64) -> Ratio<u64> {
    let c = coeffs_mod(form, p);
    let mut count = 0u64;
    for u in 0..p {
        for v in 0..p {
            if u == 0 && v == 0 {
                continue;
            }
            let value = c
                .iter()
                .enumerate()
                .fold(0, |acc, (j, &cj)| (acc + mul_mod(cj, mul_mod(pow_mod(u, j as u64, p), pow_mod(v, 4 - j as u64, p), p), p)) % p);
            if value == 0 {
                count += 1;
            }
        }
    }
    Ratio::new(count, p - 1)
}

/// Distinct projective zeros of `F` over `𝔽_p`.
pub fn rho_fast(form: &QuarticForm, p: u64) -> u64 {
    let c = coeffs_mod(form, p);
    if c.iter().all(|&x| x == 0) {
        return p + 1;
    }
    let at_infinity = u64::from(c[4] == 0);
    let f = trim(c.to_vec());
    if f.len() <= 1 {
        return at_infinity;
    }
    let monic = make_monic(&f, p);
    // X^p mod f, then gcd(X^p − X, f) collects the distinct roots.
    let mut xp = poly_powmod_x(p, &monic, p);
    xp.resize(xp.len().max(2), 0);
    xp[1] = (xp[1] + p - 1) % p;
    let g = poly_gcd(trim(xp), monic, p);
    (g.len() as u64 - 1) + at_infinity
}

fn make_monic(f: &[u64], p: u64) -> Vec<u64> {
    let inv = pow_mod(*f.last().unwrap(), p - 2, p);
    f.iter().map(|&c| mul_mod(c, inv, p)).collect()
}

fn poly_rem(mut a: Vec<u64>, m: &[u64], p: u64) -> Vec<u64> {
    let m = make_monic(m, p);
    while a.len() >= m.len() {
        let lead = *a.last().unwrap();
        let shift = a.len() - m.len();
        for (i, &c) in m.iter().enumerate() {
            a[i + shift] = (a[i + shift] + p - mul_mod(lead, c, p)) % p;
        }
        a = trim(a);
    }
    a
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    poly_rem(trim(out), m, p)
}

fn poly_powmod_x(mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut base = poly_rem(vec![0, 1], m, p);
    let mut acc = poly_rem(vec![1], m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &base, m, p);
        }
        base = poly_mulmod(&base, &base, m, p);
        e >>= 1;
    }
    acc
}

fn poly_gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    while !a.is_empty() {
        let r = poly_rem(b, &a, p);
        b = a;
        a = r;
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction() {
        assert!(QuarticForm::new(1, 0, 2, 0, 1).is_err());
        assert!(QuarticForm::new(0, 0, 0, 0, 0).is_err());
        assert!(QuarticForm::new(0, 0, 1, 0, 1).is_err());
        assert!(QuarticForm::new(0, 1, 0, 0, 1).is_ok());
        assert!(QuarticForm::new(1, 0, 0, 0, 0).is_err());
        assert!(QuarticForm::new(1, 0, 0, 0, -2).is_ok());
        assert!(QuarticForm::from_slice(&[1, 2, 3]).is_err());
        assert_eq!(QuarticForm::phi5().eval(1, -1), Some(1));
        assert_eq!(QuarticForm::phi5().eval(1, 1), Some(5));
        assert_eq!(QuarticForm::phi5().eval_real(1.0f64, 1.0), 5.0);
    }

    #[test]
    fn irreducibility() {
        assert!(irreducible_over_qi(&QuarticForm::phi5()).unwrap());
        assert!(!irreducible_over_qi(&QuarticForm::new(1, 0, 0, 0, 1).unwrap()).unwrap());
        // Every quadratic factor of X⁴ − 2 over ℂ has a coefficient outside ℚ(i).
        assert!(irreducible_over_qi(&QuarticForm::new(1, 0, 0, 0, -2).unwrap()).unwrap());
        // (X² + 1)(X² + 2)
        assert!(!irreducible_over_qi(&QuarticForm::new(1, 0, 3, 0, 2).unwrap()).unwrap());
        // (X − 3)(X³ + X + 1)
        assert!(!irreducible_over_qi(&QuarticForm::new(1, -3, 1, -2, -3).unwrap()).unwrap());
        // X⁴ + 4 = (X² + 2X + 2)(X² − 2X + 2); X⁴ − 5 only splits over ℚ(√5).
        assert!(!irreducible_over_qi(&QuarticForm::new(1, 0, 0, 0, 4).unwrap()).unwrap());
        assert!(irreducible_over_qi(&QuarticForm::new(1, 0, 0, 0, -5).unwrap()).unwrap());
        // (2X² + X + 3)(X² + 1)
        assert!(!irreducible_over_qi(&QuarticForm::new(2, 1, 5, 1, 3).unwrap()).unwrap());
        // X⁴ − X² + 1 = (X² + iX − 1)(X² − iX − 1)
        assert!(!irreducible_over_qi(&QuarticForm::new(1, 0, -1, 0, 1).unwrap()).unwrap());
        assert!(!irreducible_over_qi(&QuarticForm::new(0, 1, 0, 0, 1).unwrap()).unwrap());
        assert!(matches!(
            irreducible_over_qi(&QuarticForm::new(1, 0, 0, 0, 3_000_000_000).unwrap()),
            Err(Error::Indeterminate(_))
        ));
    }

    #[test]
    fn rho_examples() {
        let f = QuarticForm::phi5();
        assert_eq!(rho(&f, 11).unwrap(), Ratio::from_integer(4));
        assert_eq!(rho(&f, 7).unwrap(), Ratio::from_integer(0));
        assert_eq!(rho(&f, 5).unwrap(), Ratio::from_integer(1));
        assert_eq!(rho(&f, 3).unwrap(), Ratio::from_integer(0));
        assert!(rho(&f, 9).is_err());
        assert_eq!(rho_fast(&f, 103), 0);
        assert_eq!(rho_fast(&f, 101), 4);
        assert_eq!(rho_fast(&f, 131), 4);
    }

    #[test]
    fn rho_paths_agree() {
        let forms = [
            QuarticForm::phi5(),
            QuarticForm::new(1, 0, 0, 0, -2).unwrap(),
            QuarticForm::new(3, 0, 5, 0, 7).unwrap(),
            QuarticForm::new(0, 2, -3, 0, 5).unwrap(),
            QuarticForm::new(6, 7, -11, 4, 12).unwrap(),
        ];
        for f in &forms {
            for p in (2..=200u64).filter(|&p| num_prime::nt_funcs::is_prime64(p)) {
                assert_eq!(rho_bruteforce(f, p), Ratio::from_integer(rho_fast(f, p)), "{f} at {p}");
            }
        }
    }
}
