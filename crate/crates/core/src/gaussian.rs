//! Arithmetic in the Gaussian integers and the Hecke characters
//! `α ↦ (α/|α|)^h` summed over lattice points of a given norm.
//!
//! Conventions:
//! * `arg` takes values in `[0, 2π)` with `arg(positive real) = 0`, computed
//!   by rotating into the first quadrant so that `arg(iα) = arg(α) + π/2`
//!   uses the same `atan2` evaluation.
//! * Sector membership is the half-open arc `(c, d]` on the circle; the
//!   direction of angle 0 is the same point as 2π, so `(0, 2π]` is the whole
//!   circle and quarter arcs partition it.
//! * Odd-normed elements are normalized to their primary associate
//!   (`≡ 1 mod 2+2i`). Even-normed elements use the first-quadrant associate
//!   (`re > 0, im >= 0`), so `1+i` is its own representative.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::numtheory::{exact_sqrt, pow_mod, Factorization, PrimeTables};
use crate::par::try_ordered_sum;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GaussianInt {
    pub re: i64,
    pub im: i64,
}

pub const UNITS: [GaussianInt; 4] = [
    GaussianInt { re: 1, im: 0 },
    GaussianInt { re: 0, im: 1 },
    GaussianInt { re: -1, im: 0 },
    GaussianInt { re: 0, im: -1 },
];

impl GaussianInt {
    pub const ZERO: Self = Self { re: 0, im: 0 };
    pub const ONE: Self = Self { re: 1, im: 0 };
    pub const I: Self = Self { re: 0, im: 1 };
    pub const ONE_PLUS_I: Self = Self { re: 1, im: 1 };

    pub const fn new(re: i64, im: i64) -> Self {
        Self { re, im }
    }

    pub fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }

    /// `re² + im²`, always exact.
    pub fn norm(self) -> u128 {
        let (a, b) = (self.re as i128, self.im as i128);
        (a * a + b * b) as u128
    }

    pub fn is_zero(self) -> bool {
        self == Self::ZERO
    }

    pub fn is_unit(self) -> bool {
        self.norm() == 1
    }

    fn from_i128(re: i128, im: i128) -> Result<Self> {
        match (i64::try_from(re), i64::try_from(im)) {
            (Ok(re), Ok(im)) => Ok(Self { re, im }),
            _ => Err(Error::Overflow(format!("Gaussian integer {re}+{im}i does not fit in i64"))),
        }
    }

    pub fn checked_mul(self, other: Self) -> Result<Self> {
        let (a, b) = (self.re as i128, self.im as i128);
        let (c, d) = (other.re as i128, other.im as i128);
        Self::from_i128(a * c - b * d, a * d + b * c)
    }

    pub fn checked_pow(self, mut k: u32) -> Result<Self> {
        let mut acc = Self::ONE;
        let mut base = self;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.checked_mul(base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.checked_mul(base)?;
            }
        }
        Ok(acc)
    }

    /// `self / other` if the division is exact in `ℤ[i]`.
    pub fn div_exact(self, other: Self) -> Option<Self> {
        let n = other.norm() as i128;
        if n == 0 {
            return None;
        }
        let (a, b) = (self.re as i128, self.im as i128);
        let (c, d) = (other.re as i128, other.im as i128);
        let (re, im) = (a * c + b * d, b * c - a * d);
        if re % n != 0 || im % n != 0 {
            return None;
        }
        Self::from_i128(re / n, im / n).ok()
    }

    pub fn divides(self, other: Self) -> bool {
        other.div_exact(self).is_some()
    }

    /// `self ≡ 1 (mod 2+2i)`.
    pub fn is_primary(self) -> bool {
        let s = self.re - 1 + self.im;
        let t = self.im - self.re + 1;
        s.rem_euclid(4) == 0 && t.rem_euclid(4) == 0
    }

    /// The four associates `self, iself, -self, -iself`.
    pub fn associates(self) -> [Self; 4] {
        let (a, b) = (self.re, self.im);
        [Self::new(a, b), Self::new(-b, a), Self::new(-a, -b), Self::new(b, -a)]
    }

    /// The first-quadrant associate (`re > 0, im >= 0`) and the power of `i`
    /// it must be multiplied by to recover `self`.
    pub fn quadrant_reduce(self) -> (Self, u8) {
        let (a, b) = (self.re, self.im);
        if a > 0 && b >= 0 {
            (self, 0)
        } else if a <= 0 && b > 0 {
            (Self::new(b, -a), 1)
        } else if a < 0 && b <= 0 {
            (Self::new(-a, -b), 2)
        } else {
            (Self::new(-b, a), 3)
        }
    }

    /// Canonical associate: primary for odd norm, first quadrant otherwise.
    pub fn normalized(self) -> Self {
        if self.is_zero() {
            return self;
        }
        if self.norm() % 2 == 1 {
            self.associates().into_iter().find(|a| a.is_primary()).expect("odd norm has a primary associate")
        } else {
            self.quadrant_reduce().0
        }
    }

    /// Argument in `[0, 2π)`; zero maps to zero.
    pub fn arg<T: Real>(self) -> T {
        if self.is_zero() {
            return T::zero();
        }
        let (first, k) = self.quadrant_reduce();
        let theta = T::of_i64(first.im).atan2(T::of_i64(first.re));
        theta + T::of_u64(k as u64) * T::FRAC_PI_2()
    }

    /// `(α/|α|)^h` as a point on the unit circle.
    pub fn unit_power<T: Real>(self, h: u32) -> Complex<T> {
        let z = Complex::new(T::of_i64(self.re), T::of_i64(self.im));
        let unit = z / z.norm();
        unit.powu(h)
    }
}

impl Add for GaussianInt {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for GaussianInt {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.im - o.im)
    }
}

impl Neg for GaussianInt {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

/// Panics on overflow; use [`GaussianInt::checked_mul`] where operands are
/// not already bounded.
impl Mul for GaussianInt {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.checked_mul(o).expect("Gaussian integer product overflow")
    }
}

impl fmt::Display for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im < 0 {
            write!(f, "{}-{}i", self.re, -self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

/// Membership in the half-open arc `(c, d]`, reading angle 0 as 2π.
pub fn arc_contains<T: Real>(theta: T, c: T, d: T) -> bool {
    let theta = if theta <= T::zero() { T::TAU() } else { theta };
    c < theta && theta <= d
}

/// Euclidean gcd, normalized (primary when odd-normed).
pub fn gaussian_gcd(alpha: GaussianInt, beta: GaussianInt) -> Result<GaussianInt> {
    if alpha.is_zero() && beta.is_zero() {
        return Err(Error::Domain("gcd(0, 0) is undefined".into()));
    }
    let (mut a, mut b) = ((alpha.re as i128, alpha.im as i128), (beta.re as i128, beta.im as i128));
    while b != (0, 0) {
        let n = b.0 * b.0 + b.1 * b.1;
        // a · conj(b) / N(b), rounded to the nearest lattice point.
        let num = (a.0 * b.0 + a.1 * b.1, a.1 * b.0 - a.0 * b.1);
        let q = (div_round(num.0, n), div_round(num.1, n));
        let r = (a.0 - (q.0 * b.0 - q.1 * b.1), a.1 - (q.0 * b.1 + q.1 * b.0));
        a = b;
        b = r;
    }
    Ok(GaussianInt::from_i128(a.0, a.1)?.normalized())
}

fn div_round(x: i128, n: i128) -> i128 {
    Integer::div_floor(&(2 * x + n), &(2 * n))
}

/// A square root of −1 modulo a prime `p ≡ 1 (mod 4)`: `c^((p−1)/4)` for the
/// first quadratic non-residue `c`.
pub fn sqrt_minus_one_mod(p: u64) -> Result<u64> {
    if p % 4 != 1 {
        return Err(Error::Domain(format!("{p} is not 1 mod 4")));
    }
    let half = (p - 1) / 2;
    for c in 2..p {
        if pow_mod(c, half, p) == p - 1 {
            return Ok(pow_mod(c, (p - 1) / 4, p));
        }
    }
    Err(Error::Domain(format!("{p} is not prime")))
}

/// The primary Gaussian prime `a + bi` above a rational prime `p ≡ 1 (mod 4)`
/// (its conjugate is the other one). Hermite–Serret descent on `(p, √−1)`.
pub fn split_prime(p: u64) -> Result<GaussianInt> {
    let r = sqrt_minus_one_mod(p)?;
    let (mut a, mut b) = (p, r);
    while b * b > p {
        (a, b) = (b, a % b);
    }
    let y = exact_sqrt(p - b * b).ok_or_else(|| Error::Domain(format!("{p} is not prime")))?;
    Ok(GaussianInt::new(b as i64, y as i64).normalized())
}

/// Gaussian prime factorization: `unit · Π prime^exp`, primes normalized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussianFactorization {
    pub unit: GaussianInt,
    pub factors: Vec<(GaussianInt, u32)>,
}

impl GaussianFactorization {
    pub fn product(&self) -> Result<GaussianInt> {
        self.factors.iter().try_fold(self.unit, |acc, &(p, e)| acc.checked_mul(p.checked_pow(e)?))
    }
}

pub fn factor_gaussian(alpha: GaussianInt, tables: &PrimeTables) -> Result<GaussianFactorization> {
    if alpha.is_zero() {
        return Err(Error::Domain("cannot factor 0".into()));
    }
    let norm = u64::try_from(alpha.norm()).map_err(|_| Error::Overflow(format!("norm of {alpha}")))?;
    let mut rest = alpha;
    let mut factors = Vec::new();
    for &(p, e) in tables.factorize(norm)?.pairs() {
        let candidates = if p == 2 {
            vec![GaussianInt::ONE_PLUS_I]
        } else if p % 4 == 3 {
            vec![GaussianInt::new(p as i64, 0)]
        } else {
            let pi = split_prime(p)?;
            vec![pi, pi.conj()]
        };
        let mut remaining = e;
        for pi in candidates {
            let mut k = 0;
            while remaining > 0 {
                match rest.div_exact(pi) {
                    Some(q) => {
                        rest = q;
                        k += 1;
                        remaining -= if p % 4 == 3 { 2 } else { 1 };
                    }
                    None => break,
                }
            }
            if k > 0 {
                factors.push((pi, k));
            }
        }
    }
    debug_assert!(rest.is_unit());
    Ok(GaussianFactorization { unit: rest, factors })
}

/// All `α ∈ ℤ[i]` with `N(α) = n`, sorted; `f` must factor `n`.
///
/// Built by choosing, for each split prime `p^e`, the exponent split
/// `π^k π̄^(e−k)`, and multiplying through by the four units.
pub fn representations(n: u64, f: &Factorization) -> Result<Vec<GaussianInt>> {
    if n == 0 {
        return Err(Error::Domain("representations of 0".into()));
    }
    let mut partial = vec![GaussianInt::ONE];
    for &(p, e) in f.pairs() {
        if p == 2 {
            let w = GaussianInt::ONE_PLUS_I.checked_pow(e)?;
            for z in partial.iter_mut() {
                *z = z.checked_mul(w)?;
            }
        } else if p % 4 == 3 {
            if e % 2 == 1 {
                return Ok(Vec::new());
            }
            let w = GaussianInt::new(p as i64, 0).checked_pow(e / 2)?;
            for z in partial.iter_mut() {
                *z = z.checked_mul(w)?;
            }
        } else {
            let pi = split_prime(p)?;
            let choices = (0..=e)
                .map(|k| pi.checked_pow(k)?.checked_mul(pi.conj().checked_pow(e - k)?))
                .collect::<Result<Vec<_>>>()?;
            let mut next = Vec::with_capacity(partial.len() * choices.len());
            for z in &partial {
                for &c in &choices {
                    next.push(z.checked_mul(c)?);
                }
            }
            partial = next;
        }
    }
    let mut out = Vec::with_capacity(4 * partial.len());
    for z in partial {
        out.extend(z.associates());
    }
    out.sort_unstable();
    Ok(out)
}

/// `Σ α^h` over the given points, exactly, or `None` on `i128` overflow.
fn exact_power_sum<'a>(points: impl IntoIterator<Item = &'a GaussianInt>, h: u32) -> Option<(i128, i128)> {
    let mut acc = (0i128, 0i128);
    for z in points {
        let (mut pr, mut pi) = (1i128, 0i128);
        let (a, b) = (z.re as i128, z.im as i128);
        for _ in 0..h {
            let re = pr.checked_mul(a)?.checked_sub(pi.checked_mul(b)?)?;
            let im = pr.checked_mul(b)?.checked_add(pi.checked_mul(a)?)?;
            pr = re;
            pi = im;
        }
        acc = (acc.0.checked_add(pr)?, acc.1.checked_add(pi)?);
    }
    Some(acc)
}

/// `¼ Σ (α/|α|)^h` over `points`, all of norm `n`. Exact rational arithmetic
/// when `α^h` and `n^(h/2)` fit; otherwise unit vectors are raised to the
/// `h`-th power in floating point.
fn quarter_char_sum<T: Real>(points: &[GaussianInt], n: u64, h: u32) -> Complex<T> {
    if points.is_empty() {
        return Complex::zero();
    }
    if h % 2 == 0 {
        if let Some(v) = exact_quarter_sum(points, n, h) {
            return Complex::new(ratio_to_real(v.re), ratio_to_real(v.im));
        }
    }
    let sum: Complex<T> = points.iter().map(|z| z.unit_power::<T>(h)).fold(Complex::zero(), |a, b| a + b);
    sum / T::of_u64(4)
}

fn exact_quarter_sum(points: &[GaussianInt], n: u64, h: u32) -> Option<Complex<Ratio<i128>>> {
    debug_assert!(h % 2 == 0);
    let den = (n as i128).checked_pow(h / 2)?.checked_mul(4)?;
    let (re, im) = exact_power_sum(points, h)?;
    Some(Complex::new(Ratio::new(re, den), Ratio::new(im, den)))
}

fn ratio_to_real<T: Real>(r: Ratio<i128>) -> T {
    T::of_i128(*r.numer()) / T::of_i128(*r.denom())
}

/// `g_h(n) = ¼ Σ_{N(α)=n} (α/|α|)^h`. Returns exactly zero unless `4 | h`.
pub fn g_h<T: Real>(n: u64, f: &Factorization, h: u32) -> Result<Complex<T>> {
    if h % 4 != 0 {
        return Ok(Complex::zero());
    }
    Ok(quarter_char_sum(&representations(n, f)?, n, h))
}

/// `g_h(n)` as an exact Gaussian rational, when the exact path fits `i128`.
/// Computed for every even `h`, so the vanishing for `4 ∤ h` is visible.
pub fn g_h_exact(n: u64, f: &Factorization, h: u32) -> Result<Option<Complex<Ratio<i128>>>> {
    if h % 2 == 1 {
        return Ok(None);
    }
    let reps = representations(n, f)?;
    if reps.is_empty() {
        return Ok(Some(Complex::zero()));
    }
    Ok(exact_quarter_sum(&reps, n, h))
}

/// `f_h(n) = |g_h(n)|`.
pub fn f_h<T: Real>(n: u64, f: &Factorization, h: u32) -> Result<T> {
    Ok(g_h::<T>(n, f, h)?.norm())
}

/// `g_h(n)` from its Euler product; `g_h` is multiplicative, and each prime
/// power contributes a closed form. This is the bulk path used by the range
/// sums; [`g_h`] is the direct definition.
pub fn g_h_multiplicative<T: Real>(f: &Factorization, h: u32) -> Result<T> {
    if h % 4 != 0 {
        return Ok(T::zero());
    }
    let mut acc = T::one();
    for &(p, e) in f.pairs() {
        let local = if p == 2 {
            // ((1+i)/√2)^(he) = (−1)^(he/4)
            if (h / 4 * e) % 2 == 0 {
                T::one()
            } else {
                -T::one()
            }
        } else if p % 4 == 3 {
            if e % 2 == 1 {
                return Ok(T::zero());
            }
            T::one()
        } else {
            let theta: T = split_prime(p)?.arg();
            let ht = T::of_u64(h as u64) * theta;
            (0..=e).map(|k| (ht * T::of_i64(2 * k as i64 - e as i64)).cos()).sum()
        };
        acc = acc * local;
    }
    Ok(acc)
}

/// `g_h` restricted to `α` coprime to `conj(μ)`.
pub fn g_h_coprime<T: Real>(n: u64, f: &Factorization, h: u32, mu: GaussianInt) -> Result<Complex<T>> {
    if mu.is_zero() {
        return Err(Error::Domain("μ must be nonzero".into()));
    }
    let bar = mu.conj();
    let mut kept = Vec::new();
    for alpha in representations(n, f)? {
        if gaussian_gcd(alpha, bar)?.is_unit() {
            kept.push(alpha);
        }
    }
    Ok(quarter_char_sum(&kept, n, h))
}

/// Primary `μ` with `N(μ) = t` and `gcd(μ, μ̄) = 1`, sorted. One choice of
/// `π^e` or `π̄^e` per prime power of `t`, so the list has `2^ω(t)` entries
/// when `t` is odd and built from primes `≡ 1 (mod 4)`, and is empty
/// otherwise.
pub fn primary_mu_list(t: u64, f: &Factorization) -> Result<Vec<GaussianInt>> {
    if t == 0 {
        return Err(Error::Domain("t must be positive".into()));
    }
    if f.pairs().iter().any(|&(p, _)| p % 4 != 1) {
        return Ok(Vec::new());
    }
    let mut out = vec![GaussianInt::ONE];
    for &(p, e) in f.pairs() {
        let pi = split_prime(p)?;
        let (a, b) = (pi.checked_pow(e)?, pi.conj().checked_pow(e)?);
        let mut next = Vec::with_capacity(out.len() * 2);
        for &m in &out {
            next.push(m.checked_mul(a)?.normalized());
            next.push(m.checked_mul(b)?.normalized());
        }
        out = next;
    }
    out.sort_unstable();
    Ok(out)
}

/// `Σ_{N(α) ≤ x} Λ(α) (α/|α|)^(4k)` over nonzero `α ∈ ℤ[i]`, where
/// `Λ(α) = log N(π)` if `α` is an associate of a prime power `π^m`.
///
/// Grouped by rational prime: `(1+i)^m` contributes `4 log 2 · (−1)^(km)`,
/// an inert `p^m` contributes `4 log p²`, and `π^m, π̄^m` above a split `p`
/// contribute `8 log p · cos(4kmθ_π)`.
pub fn lambda_gross_sum<T: Real>(x: u64, k: u64, tables: &PrimeTables) -> Result<Complex<T>> {
    if x < 2 {
        return Err(Error::Domain(format!("x must be at least 2, got {x}")));
    }
    let primes = tables.primes_in(1, x as i64)?;
    let total: T = try_ordered_sum(primes, |&p| {
        let p = p as u64;
        let logp = T::of_u64(p).ln();
        let four = T::of_u64(4);
        let mut s = T::zero();
        if p == 2 {
            let mut pm = 2u64;
            let mut m = 1u64;
            while pm <= x {
                s = s + if (k * m) % 2 == 0 { four * logp } else { -four * logp };
                pm = match pm.checked_mul(2) {
                    Some(v) => v,
                    None => break,
                };
                m += 1;
            }
        } else if p % 4 == 3 {
            let q = p * p;
            let mut pm = q;
            while pm <= x {
                s = s + four * (logp + logp);
                pm = match pm.checked_mul(q) {
                    Some(v) => v,
                    None => break,
                };
            }
        } else {
            let theta: T = split_prime(p)?.arg();
            let eight = T::of_u64(8);
            let mut pm = p;
            let mut m = 1u64;
            while pm <= x {
                s = s + eight * logp * (T::of_u64(4 * k * m) * theta).cos();
                pm = match pm.checked_mul(p) {
                    Some(v) => v,
                    None => break,
                };
                m += 1;
            }
        }
        Ok(s)
    })?;
    Ok(Complex::new(total, T::zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI, TAU};

    fn tables() -> PrimeTables {
        PrimeTables::build(100_000).unwrap()
    }

    fn g(n: u64, h: u32) -> Complex<f64> {
        let t = tables();
        g_h(n, &t.factorize(n).unwrap(), h).unwrap()
    }

    #[test]
    fn representation_examples() {
        let t = tables();
        assert_eq!(representations(1, &t.factorize(1).unwrap()).unwrap().len(), 4);
        let r1 = representations(1, &t.factorize(1).unwrap()).unwrap();
        for u in UNITS {
            assert!(r1.contains(&u));
        }
        assert!(representations(3, &t.factorize(3).unwrap()).unwrap().is_empty());
        let r5 = representations(5, &t.factorize(5).unwrap()).unwrap();
        let mut expected = vec![];
        for (a, b) in [(1, 2), (2, 1)] {
            for (sa, sb) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                expected.push(GaussianInt::new(sa * a, sb * b));
            }
        }
        expected.sort();
        assert_eq!(r5, expected);
    }

    #[test]
    fn representations_match_lattice_scan() {
        let t = tables();
        let limit = 2_000i64;
        let mut buckets = vec![Vec::new(); limit as usize + 1];
        let r = (limit as f64).sqrt() as i64 + 1;
        for a in -r..=r {
            for b in -r..=r {
                let n = a * a + b * b;
                if n >= 1 && n <= limit {
                    buckets[n as usize].push(GaussianInt::new(a, b));
                }
            }
        }
        for n in 1..=limit as u64 {
            let mut expect = buckets[n as usize].clone();
            expect.sort();
            assert_eq!(representations(n, &t.factorize(n).unwrap()).unwrap(), expect, "n={n}");
        }
    }

    #[test]
    fn g_h_examples() {
        for h in [4, 8, 12, 40] {
            assert_eq!(g(1, h), Complex::new(1.0, 0.0));
        }
        assert_eq!(g(2, 4), Complex::new(-1.0, 0.0));
        assert!((g(5, 4) - Complex::new(-14.0 / 25.0, 0.0)).norm() < 1e-15);
        assert!((g(10, 4) - Complex::new(14.0 / 25.0, 0.0)).norm() < 1e-15);
        assert!((g(10, 4) - g(2, 4) * g(5, 4)).norm() < 1e-15);
    }

    #[test]
    fn g_h_exact_values() {
        let t = tables();
        let v = g_h_exact(5, &t.factorize(5).unwrap(), 4).unwrap().unwrap();
        assert_eq!(v, Complex::new(Ratio::new(-14, 25), Ratio::from_integer(0)));
        for h in [2u32, 6, 10, 14] {
            for n in 1..=300u64 {
                let v = g_h_exact(n, &t.factorize(n).unwrap(), h).unwrap().unwrap();
                assert!(v.re.is_integer() && *v.re.numer() == 0 && *v.im.numer() == 0, "n={n} h={h}");
            }
        }
    }

    #[test]
    fn g_h_vanishes_off_multiples_of_four() {
        for n in 1..=500u64 {
            for h in [1, 2, 3, 5, 6, 7] {
                assert_eq!(g(n, h), Complex::zero());
            }
        }
    }

    #[test]
    fn angle_path_agrees_with_exact_path() {
        let t = tables();
        for n in [5u64, 65, 325, 1105, 5525, 32045] {
            let f = t.factorize(n).unwrap();
            let reps = representations(n, &f).unwrap();
            for h in [4u32, 8, 12] {
                let exact: Complex<f64> = quarter_char_sum(&reps, n, h);
                let angle = reps.iter().map(|z| z.unit_power::<f64>(h)).sum::<Complex<f64>>() / 4.0;
                assert!((exact - angle).norm() < 1e-12, "n={n} h={h}");
            }
        }
        // Large h forces the angle path.
        let f = t.factorize(32045).unwrap();
        let v: Complex<f64> = g_h(32045, &f, 400).unwrap();
        assert!((v.re - g_h_multiplicative::<f64>(&f, 400).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn f_h_examples() {
        let t = tables();
        let f = |n: u64, h| f_h::<f64>(n, &t.factorize(n).unwrap(), h).unwrap();
        assert!((f(5, 4) - 14.0 / 25.0).abs() < 1e-15);
        assert!((f(4, 4) - 1.0).abs() < 1e-15);
        assert_eq!(f(3, 4), 0.0);
        assert_eq!(f(3, 8), 0.0);
    }

    #[test]
    fn multiplicative_path_matches_direct() {
        let t = tables();
        for n in 1..=3000u64 {
            let f = t.factorize(n).unwrap();
            for h in [4u32, 8, 12, 16] {
                let direct: Complex<f64> = g_h(n, &f, h).unwrap();
                let fast: f64 = g_h_multiplicative(&f, h).unwrap();
                assert!((direct.re - fast).abs() < 1e-10 && direct.im.abs() < 1e-10, "n={n} h={h}");
            }
        }
    }

    #[test]
    fn f32_instantiation() {
        let t = tables();
        let v: Complex<f32> = g_h(5, &t.factorize(5).unwrap(), 4).unwrap();
        assert!((v.re + 0.56).abs() < 1e-6);
    }

    #[test]
    fn coprime_variant() {
        let t = tables();
        for n in 1..=100u64 {
            let f = t.factorize(n).unwrap();
            for h in [4, 8] {
                let a: Complex<f64> = g_h_coprime(n, &f, h, GaussianInt::ONE).unwrap();
                let b: Complex<f64> = g_h(n, &f, h).unwrap();
                assert!((a - b).norm() < 1e-15);
            }
        }
        let mu = GaussianInt::new(-1, 2);
        let v: Complex<f64> = g_h_coprime(5, &t.factorize(5).unwrap(), 4, mu).unwrap();
        // conj(μ) = −1−2i is an associate of 2−i; only the associates of 2+i
        // survive, and (2+i)^4 = −7+24i.
        assert!((v - Complex::new(-7.0 / 25.0, 24.0 / 25.0)).norm() < 1e-15, "{v}");
        let z: Complex<f64> = g_h_coprime(3, &t.factorize(3).unwrap(), 4, mu).unwrap();
        assert_eq!(z, Complex::zero());
        assert!(g_h_coprime::<f64>(5, &t.factorize(5).unwrap(), 4, GaussianInt::ZERO).is_err());
    }

    #[test]
    fn gcd_examples() {
        let g = gaussian_gcd(GaussianInt::new(1, 1), GaussianInt::new(1, -1)).unwrap();
        assert_eq!(g, GaussianInt::ONE_PLUS_I);
        assert!(gaussian_gcd(GaussianInt::new(2, 1), GaussianInt::new(2, -1)).unwrap().is_unit());
        let a = GaussianInt::new(3, -8);
        assert_eq!(gaussian_gcd(a, GaussianInt::ZERO).unwrap(), a.normalized());
        assert!(gaussian_gcd(a, GaussianInt::ZERO).unwrap().is_primary());
        assert!(gaussian_gcd(GaussianInt::ZERO, GaussianInt::ZERO).is_err());
        let x = GaussianInt::new(2, 1) * GaussianInt::new(3, 0) * GaussianInt::new(1, 1);
        let y = GaussianInt::new(2, 1) * GaussianInt::new(1, 4);
        assert_eq!(gaussian_gcd(x, y).unwrap(), GaussianInt::new(2, 1).normalized());
    }

    #[test]
    fn primary_mu_examples() {
        let t = tables();
        let mu = |n: u64| primary_mu_list(n, &t.factorize(n).unwrap()).unwrap();
        assert_eq!(mu(5), vec![GaussianInt::new(-1, -2), GaussianInt::new(-1, 2)]);
        assert!(mu(9).is_empty());
        assert!(mu(2).is_empty());
        assert_eq!(mu(1), vec![GaussianInt::ONE]);
        for n in 1..2000u64 {
            let list = mu(n);
            for m in &list {
                assert_eq!(m.norm(), n as u128);
                assert!(m.is_primary());
                assert!(gaussian_gcd(*m, m.conj()).unwrap().is_unit());
            }
            // Brute-force count of primary μ of norm n with gcd(μ, μ̄) = 1.
            let r = (n as f64).sqrt() as i64 + 1;
            let mut brute = 0;
            for a in -r..=r {
                for b in -r..=r {
                    let z = GaussianInt::new(a, b);
                    if z.norm() == n as u128 && z.is_primary() && gaussian_gcd(z, z.conj()).unwrap().is_unit() {
                        brute += 1;
                    }
                }
            }
            assert_eq!(list.len(), brute, "n={n}");
        }
    }

    #[test]
    fn split_primes_and_factorization() {
        let t = tables();
        for &p in t.primes().iter().take(2000) {
            let p = p as u64;
            if p % 4 == 1 {
                let pi = split_prime(p).unwrap();
                assert_eq!(pi.norm(), p as u128);
                assert!(pi.is_primary());
            }
        }
        for (a, b) in [(3, -8), (-7, 24), (10, 0), (1, 1), (0, -9), (123, 456)] {
            let z = GaussianInt::new(a, b);
            let f = factor_gaussian(z, &t).unwrap();
            assert_eq!(f.product().unwrap(), z);
            assert!(f.unit.is_unit());
        }
    }

    #[test]
    fn args_and_arcs() {
        assert_eq!(GaussianInt::new(5, 0).arg::<f64>(), 0.0);
        assert_eq!(GaussianInt::new(0, 2).arg::<f64>(), FRAC_PI_2);
        assert_eq!(GaussianInt::new(-3, 0).arg::<f64>(), PI);
        assert!((GaussianInt::new(1, -1).arg::<f64>() - 7.0 * PI / 4.0).abs() < 1e-15);
        assert!(arc_contains(0.0, 0.0, TAU));
        assert!(!arc_contains(0.0, 0.0, FRAC_PI_2));
        assert!(arc_contains(FRAC_PI_2, 0.0, FRAC_PI_2));
        assert!(!arc_contains(FRAC_PI_2, FRAC_PI_2, PI));
    }

    fn lambda_oracle(x: u64, k: u32) -> f64 {
        // Direct sum over the lattice; Λ from the Gaussian factorization.
        let t = tables();
        let r = (x as f64).sqrt() as i64 + 1;
        let mut s = Complex::<f64>::zero();
        for a in -r..=r {
            for b in -r..=r {
                let z = GaussianInt::new(a, b);
                if z.is_zero() || z.norm() > x as u128 {
                    continue;
                }
                let f = factor_gaussian(z, &t).unwrap();
                if f.factors.len() == 1 {
                    let lam = (f.factors[0].0.norm() as f64).ln();
                    s += z.unit_power::<f64>(4 * k) * lam;
                }
            }
        }
        assert!(s.im.abs() < 1e-9);
        s.re
    }

    #[test]
    fn lambda_sum_examples_and_oracle() {
        let t = tables();
        let l = |x, k| lambda_gross_sum::<f64>(x, k, &t).unwrap().re;
        let ln2 = 2f64.ln();
        assert!((l(2, 1) + 4.0 * ln2).abs() < 1e-12);
        assert!(l(4, 1).abs() < 1e-12);
        assert!((l(2, 2) - 4.0 * ln2).abs() < 1e-12);
        for x in [10u64, 50, 97, 500, 2000] {
            for k in [1u64, 2, 3] {
                let o = lambda_oracle(x, k as u32);
                assert!((l(x, k) - o).abs() < 1e-8 * (1.0 + o.abs()), "x={x} k={k}: {} vs {o}", l(x, k));
            }
        }
        assert!(lambda_gross_sum::<f64>(1, 1, &t).is_err());
    }
}
