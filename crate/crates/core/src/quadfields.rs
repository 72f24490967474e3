//! Two quadratic fields in the same counting model.
//!
//! `ℤ[√2]`: ideals are listed by one generator per unit orbit, taken in the
//! window `√n ≤ β < ε√n` with `ε = 1 + √2`, and carry the Hecke character
//! `χ(β) = sgn N(β) · exp(πi (log|β^σ| − log|β|) / 2 log ε)`.
//!
//! `ℚ(√−14)`: the class group is cyclic of order 4. Classes are recorded as
//! exponents of the generator, the class of `3x² + 2xy + 5y²`; the
//! characters are `χ_j(g^k) = i^{jk}`.

use std::cmp::Ordering;

use num_complex::Complex;
use num_integer::Integer;
use num_traits::Zero;

use crate::chatelet::{walk, Region, WalkRule};
use crate::error::{Error, Result};
use crate::gaussian::GaussianInt;
use crate::numtheory::{exact_sqrt, kronecker, sqrt_mod, Factorization, PrimeTables};
use crate::quartic::QuarticForm;
use crate::scalar::Real;

/// `x + y√2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RealQuadInt {
    pub x: i64,
    pub y: i64,
}

impl RealQuadInt {
    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }

    /// `x² − 2y²`.
    pub fn norm(self) -> i128 {
        let (x, y) = (self.x as i128, self.y as i128);
        x * x - 2 * y * y
    }

    pub fn conj(self) -> Self {
        Self::new(self.x, -self.y)
    }

    pub fn is_zero(self) -> bool {
        self.x == 0 && self.y == 0
    }

    /// Sign of the real number `x + y√2`.
    pub fn signum(self) -> Ordering {
        sign_sqrt2(self.x as i128, self.y as i128)
    }

    /// `ε·β = (x + 2y) + (x + y)√2`.
    pub fn times_unit(self) -> Result<Self> {
        let x = self.x.checked_add(self.y.checked_mul(2).ok_or_else(unit_overflow)?).ok_or_else(unit_overflow)?;
        let y = self.x.checked_add(self.y).ok_or_else(unit_overflow)?;
        Ok(Self::new(x, y))
    }

    /// `ε⁻¹·β = (2y − x) + (x − y)√2`.
    pub fn over_unit(self) -> Result<Self> {
        let x = self.y.checked_mul(2).and_then(|y2| y2.checked_sub(self.x)).ok_or_else(unit_overflow)?;
        let y = self.x.checked_sub(self.y).ok_or_else(unit_overflow)?;
        Ok(Self::new(x, y))
    }

    pub fn value<T: Real>(self) -> T {
        T::of_i64(self.x) + T::of_i64(self.y) * T::SQRT_2()
    }
}

fn unit_overflow() -> Error {
    Error::Overflow("unit multiple of a Z[sqrt 2] element".into())
}

/// Sign of `a + b√2`, exactly.
fn sign_sqrt2(a: i128, b: i128) -> Ordering {
    match (a.cmp(&0), b.cmp(&0)) {
        (Ordering::Equal, s) | (s, Ordering::Equal) => s,
        (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
        (Ordering::Less, Ordering::Less) => Ordering::Less,
        (Ordering::Greater, Ordering::Less) => (a * a).cmp(&(2 * b * b)),
        (Ordering::Less, Ordering::Greater) => (2 * b * b).cmp(&(a * a)),
    }
}

/// The generator of an ideal of `ℤ[√2]` inside `√n ≤ β < ε√n`, `n = |N(β)|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IdealRepZ2 {
    generator: RealQuadInt,
}

impl IdealRepZ2 {
    /// The ideal `(β)`, with `β` moved into the window by units.
    pub fn from_generator(beta: RealQuadInt) -> Result<Self> {
        if beta.is_zero() {
            return Err(Error::Domain("the zero ideal has no representative".into()));
        }
        let mut b = if beta.signum() == Ordering::Less { RealQuadInt::new(-beta.x, -beta.y) } else { beta };
        let n = beta.norm().abs();
        while below_window(b, n) {
            b = b.times_unit()?;
        }
        while !below_window(b, n) && !in_window(b, n) {
            b = b.over_unit()?;
        }
        Ok(Self { generator: b })
    }

    pub fn generator(&self) -> RealQuadInt {
        self.generator
    }

    pub fn norm(&self) -> u64 {
        self.generator.norm().unsigned_abs() as u64
    }

    pub fn gross_char<T: Real>(&self) -> Complex<T> {
        gross_char_z2(self.generator)
    }
}

/// `β² < n`, for `β > 0`.
fn below_window(b: RealQuadInt, n: i128) -> bool {
    let (x, y) = (b.x as i128, b.y as i128);
    sign_sqrt2(x * x + 2 * y * y - n, 2 * x * y) == Ordering::Less
}

/// `β > 0` and `n ≤ β² < (3 + 2√2) n`.
fn in_window(b: RealQuadInt, n: i128) -> bool {
    let (x, y) = (b.x as i128, b.y as i128);
    b.signum() == Ordering::Greater
        && sign_sqrt2(x * x + 2 * y * y - n, 2 * x * y) != Ordering::Less
        && sign_sqrt2(x * x + 2 * y * y - 3 * n, 2 * x * y - 2 * n) == Ordering::Less
}

/// `Σ_{d | n, d odd} (2/d)`, the number of ideals of norm `n` in `ℤ[√2]`.
pub fn r2(n: u64, f: &Factorization) -> Result<i64> {
    if n == 0 {
        return Err(Error::Domain("r2(0) is undefined".into()));
    }
    Ok(f.divisors().into_iter().filter(|d| d % 2 == 1).map(|d| kronecker(2, d as i64) as i64).sum())
}

/// All ideals of norm `n`, by scanning `y` with `x² = 2y² ± n`; sorted.
pub fn ideals_of_norm_z2(n: u64) -> Result<Vec<IdealRepZ2>> {
    if n == 0 {
        return Err(Error::Domain("no ideal has norm 0".into()));
    }
    // β ∈ [√n, ε√n) and |β^σ| ≤ √n bound y = (β − β^σ)/2√2 by (1 + ε)√n/2√2.
    let y_max = ((1.0 + std::f64::consts::SQRT_2) / (2.0 * std::f64::consts::SQRT_2) + 1.0) * (n as f64).sqrt();
    let y_max = y_max.ceil() as i64 + 1;
    let n128 = n as i128;
    let mut out = Vec::new();
    for y in -y_max..=y_max {
        let y2 = 2 * (y as i128) * (y as i128);
        for x2 in [y2 + n128, y2 - n128] {
            if x2 < 0 {
                continue;
            }
            let Some(x) = exact_sqrt(x2 as u64) else {
                continue;
            };
            for x in [x as i64, -(x as i64)] {
                let b = RealQuadInt::new(x, y);
                if in_window(b, n128) {
                    out.push(IdealRepZ2 { generator: b });
                }
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// `sgn(x² − 2y²) exp(πi (log|x − y√2| − log|x + y√2|) / (2 log(1 + √2)))`.
///
/// The smaller of `|x ± y√2|` is recovered as `|N(β)|` over the larger, so
/// no cancellation occurs.
pub fn gross_char_z2<T: Real>(beta: RealQuadInt) -> Complex<T> {
    let n = beta.norm();
    let plus = (T::of_i64(beta.x) + T::of_i64(beta.y) * T::SQRT_2()).abs();
    let minus = (T::of_i64(beta.x) - T::of_i64(beta.y) * T::SQRT_2()).abs();
    let abs_n = T::of_i128(n.abs());
    let (plus, minus) = if plus >= minus { (plus, abs_n / plus) } else { (abs_n / minus, minus) };
    let log_eps = (T::one() + T::SQRT_2()).ln();
    let angle = T::PI() * (minus.ln() - plus.ln()) / (T::of_u64(2) * log_eps);
    let sign = if n < 0 { -T::one() } else { T::one() };
    Complex::from_polar(sign, angle)
}

/// A generator of one prime ideal above a prime `p ≡ ±1 (mod 8)`: the
/// shortest vector of the lattice `x ≡ ry (mod p)`, `r² ≡ 2`, under
/// `x² + 2y²`, whose norm is then forced to be `±p`.
pub fn split_prime_z2(p: u64) -> Result<RealQuadInt> {
    if p % 8 != 1 && p % 8 != 7 {
        return Err(Error::Domain(format!("{p} does not split in Z[sqrt 2]")));
    }
    let r = sqrt_mod(2, p).ok_or_else(|| Error::Domain(format!("{p} is not prime")))?;
    let q = |v: (i128, i128)| v.0 * v.0 + 2 * v.1 * v.1;
    let dot = |a: (i128, i128), b: (i128, i128)| a.0 * b.0 + 2 * a.1 * b.1;
    let (mut a, mut b) = ((p as i128, 0i128), (r as i128, 1i128));
    loop {
        if q(a) > q(b) {
            std::mem::swap(&mut a, &mut b);
        }
        let k = Integer::div_floor(&(2 * dot(a, b) + q(a)), &(2 * q(a)));
        if k == 0 {
            break;
        }
        b = (b.0 - k * a.0, b.1 - k * a.1);
    }
    let beta = RealQuadInt::new(a.0 as i64, a.1 as i64);
    if beta.norm().unsigned_abs() != p as u128 {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    Ok(beta)
}

fn z2_prime_ok(p: u64) -> bool {
    p % 8 == 1 || p % 8 == 7
}

/// `Σ χ(I)^h` over ideals `I` of norm `t²n` with `gcd(t, I, I^σ) = 1`, from
/// the factorization.
pub fn z2_inner_sum<T: Real>(t_f: &Factorization, n_f: &Factorization, h: u32) -> Result<Complex<T>> {
    let m = t_f.pow(2).mul(n_f);
    let mut acc = Complex::new(T::one(), T::zero());
    for &(p, e) in m.pairs() {
        let in_t = t_f.exponent_of(p) > 0;
        let local = if p == 2 {
            if in_t {
                return Ok(Complex::zero());
            }
            // χ((√2)) = −1
            Complex::new(if (h as u64 * e as u64) % 2 == 0 { T::one() } else { -T::one() }, T::zero())
        } else if !z2_prime_ok(p) {
            if e % 2 == 1 || in_t {
                return Ok(Complex::zero());
            }
            Complex::new(T::one(), T::zero())
        } else {
            let pi = split_prime_z2(p)?;
            let z = gross_char_z2::<T>(pi).powu(h);
            let w = gross_char_z2::<T>(pi.conj()).powu(h);
            let splits: Vec<u32> = if in_t { vec![0, e] } else { (0..=e).collect() };
            splits.into_iter().map(|a| z.powu(a) * w.powu(e - a)).fold(Complex::zero(), |s, x| s + x)
        };
        acc = acc * local;
    }
    Ok(acc)
}

/// `Σ |Σ χ(I)^h|` over `t·max(u², v²) ≤ B`, `gcd(u,v) = 1`, the inner sum
/// over ideals of norm `t²|F(u,v)|` with `gcd(t, I, I^σ) = 1`.
pub fn lemma_z2_sum<T: Real>(form: &QuarticForm, b: T, h: u32, tables: &PrimeTables) -> Result<T> {
    if h == 0 {
        return Err(Error::Invalid("h must be positive".into()));
    }
    let rule = WalkRule::new(z2_prime_ok, true);
    walk(form, b, &Region::square(), rule, tables, |m, _, _, _, nf| Ok(z2_inner_sum::<T>(&m.f, nf, h)?.norm()))
}

/// `Ax² + Bxy + Cy²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl BinaryForm {
    pub const fn new(a: i64, b: i64, c: i64) -> Self {
        Self { a, b, c }
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn eval(&self, x: i64, y: i64) -> i128 {
        let (x, y) = (x as i128, y as i128);
        self.a as i128 * x * x + self.b as i128 * x * y + self.c as i128 * y * y
    }

    /// The reduced form in the same proper equivalence class: `|b| ≤ a ≤ c`,
    /// with `b ≥ 0` when `|b| = a` or `a = c`. Positive definite forms only.
    pub fn reduced(&self) -> Self {
        let d = self.discriminant() as i128;
        let (mut a, mut b, mut c) = (self.a as i128, self.b as i128, self.c as i128);
        loop {
            if b <= -a || b > a {
                b = (b + a - 1).rem_euclid(2 * a) - a + 1;
                c = (b * b - d) / (4 * a);
            } else if c < a {
                std::mem::swap(&mut a, &mut c);
                b = -b;
            } else {
                break;
            }
        }
        if a == c && b < 0 {
            b = -b;
        }
        Self::new(a as i64, b as i64, c as i64)
    }
}

/// The reduced forms of discriminant −56: `x² + 14y²`, `2x² + 7y²`,
/// `3x² + 2xy + 5y²`, `3x² − 2xy + 5y²`.
pub const FORMS_56: [BinaryForm; 4] =
    [BinaryForm::new(1, 0, 14), BinaryForm::new(2, 0, 7), BinaryForm::new(3, 2, 5), BinaryForm::new(3, -2, 5)];

/// Class of each form in [`FORMS_56`] as a power of the generator
/// `[3x² + 2xy + 5y²]`: principal, order two, generator, inverse.
pub const CLASS_EXPONENT_56: [u8; 4] = [0, 2, 1, 3];

/// `χ_j` on the class `g^k`: `i^{jk}`.
pub fn class_character(j: u8, exponent: u8) -> GaussianInt {
    [GaussianInt::ONE, GaussianInt::I, -GaussianInt::ONE, -GaussianInt::I][((j as u32 * exponent as u32) % 4) as usize]
}

/// `#{(x, y) : f_j(x, y) = n}`, from `(2Ax + By)² + 56y² = 4An`.
pub fn reps_by_form56(j: usize, n: u64) -> Result<u64> {
    let f = FORMS_56.get(j).ok_or_else(|| Error::Invalid(format!("form index must be 0..=3, got {j}")))?;
    let (a, b) = (f.a as i128, f.b as i128);
    let target = 4 * a * n as i128;
    let mut count = 0;
    let mut y = 0i128;
    while 56 * y * y <= target {
        for y in if y == 0 { vec![0] } else { vec![y, -y] } {
            let Some(s) = exact_sqrt((target - 56 * y * y) as u64) else {
                continue;
            };
            let s = s as i128;
            for s in if s == 0 { vec![0] } else { vec![s, -s] } {
                if (s - b * y).rem_euclid(2 * a) == 0 {
                    count += 1;
                }
            }
        }
        y += 1;
    }
    Ok(count)
}

/// `Σ_{d | n, gcd(d, 14) = 1} (−14/d)`.
pub fn ideal_count_m14(n: u64, f: &Factorization) -> Result<i64> {
    if n == 0 {
        return Err(Error::Domain("no ideal has norm 0".into()));
    }
    Ok(f.divisors()
        .into_iter()
        .filter(|d| d % 2 != 0 && d % 7 != 0)
        .map(|d| kronecker(-14, d as i64) as i64)
        .sum())
}

/// Class exponent of the prime ideal `(p, r + √−14)` above a split prime,
/// `r² ≡ −14 (mod p)` the smaller root. Its conjugate has the negated
/// exponent. The ramified primes 2 and 7 give the order-two class.
pub fn prime_class_m14(p: u64) -> Result<u8> {
    if p == 2 || p == 7 {
        return Ok(2);
    }
    if kronecker(-56, p as i64) != 1 {
        return Err(Error::Domain(format!("{p} does not split in Q(sqrt -14)")));
    }
    let r = sqrt_mod((p - 14 % p) % p, p).ok_or_else(|| Error::Domain(format!("{p} is not prime")))? as i128;
    let c = (r * r + 14) / p as i128;
    let form = BinaryForm::new(p as i64, 2 * r as i64, c as i64).reduced();
    let j = FORMS_56.iter().position(|f| *f == form).expect("every form of discriminant -56 reduces to the table");
    Ok(CLASS_EXPONENT_56[j])
}

/// Number of ideals of norm `n` in each class, indexed by class exponent.
pub fn class_counts_m14(f: &Factorization) -> Result<[u64; 4]> {
    let mut acc = [1u64, 0, 0, 0];
    for &(p, e) in f.pairs() {
        let mut local = [0u64; 4];
        if p == 2 || p == 7 {
            local[(2 * e as usize) % 4] = 1;
        } else if kronecker(-56, p as i64) == -1 {
            if e % 2 == 1 {
                return Ok([0; 4]);
            }
            local[0] = 1;
        } else {
            let k = prime_class_m14(p)? as i64;
            for a in 0..=e as i64 {
                local[(k * (2 * a - e as i64)).rem_euclid(4) as usize] += 1;
            }
        }
        let mut next = [0u64; 4];
        for (i, &x) in acc.iter().enumerate() {
            for (k, &y) in local.iter().enumerate() {
                next[(i + k) % 4] += x * y;
            }
        }
        acc = next;
    }
    Ok(acc)
}

/// `Σ χ_j(I)` over ideals of norm `t²n` with `gcd(t, I, I^σ) = 1`, exactly.
pub fn m14_inner_sum(t_f: &Factorization, n_f: &Factorization, j: u8) -> Result<GaussianInt> {
    let m = t_f.pow(2).mul(n_f);
    let mut acc = GaussianInt::ONE;
    for &(p, e) in m.pairs() {
        let in_t = t_f.exponent_of(p) > 0;
        let local = if p == 2 || p == 7 {
            if in_t {
                return Ok(GaussianInt::ZERO);
            }
            class_character(j, ((2 * e) % 4) as u8)
        } else if kronecker(-56, p as i64) == -1 {
            if e % 2 == 1 || in_t {
                return Ok(GaussianInt::ZERO);
            }
            GaussianInt::ONE
        } else {
            let k = prime_class_m14(p)? as i64;
            let splits: Vec<u32> = if in_t { vec![0, e] } else { (0..=e).collect() };
            splits
                .into_iter()
                .map(|a| class_character(j, (k * (2 * a as i64 - e as i64)).rem_euclid(4) as u8))
                .fold(GaussianInt::ZERO, |s, x| s + x)
        };
        acc = acc.checked_mul(local)?;
    }
    Ok(acc)
}

fn m14_prime_ok(p: u64) -> bool {
    kronecker(-56, p as i64) == 1
}

/// `Σ |Σ χ_j(I)|` over `t·max(u², v²) ≤ B`, `gcd(u,v) = 1`, `F(u,v) > 0`,
/// the inner sum over ideals of norm `t²F(u,v)` with `gcd(t, I, I^σ) = 1`.
pub fn class_char_sum_m14<T: Real>(form: &QuarticForm, b: T, j: u8, tables: &PrimeTables) -> Result<T> {
    if !(1..=3).contains(&j) {
        return Err(Error::Invalid(format!("character index must be 1..=3, got {j}")));
    }
    let rule = WalkRule::new(m14_prime_ok, false);
    walk(form, b, &Region::square(), rule, tables, |m, _, _, _, nf| {
        let s = m14_inner_sum(&m.f, nf, j)?;
        Ok(T::of_u64(s.norm() as u64).sqrt())
    })
}

/// Split primes `p ≤ x` of `ℚ(√−14)` sorted by the form that represents
/// them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PrimeClassBuckets {
    pub principal: u64,
    pub order_two: u64,
    pub generator_pair: u64,
}

impl PrimeClassBuckets {
    pub fn total(&self) -> u64 {
        self.principal + self.order_two + self.generator_pair
    }
}

impl Zero for PrimeClassBuckets {
    fn zero() -> Self {
        Self::default()
    }
    fn is_zero(&self) -> bool {
        self.total() == 0
    }
}

impl std::ops::Add for PrimeClassBuckets {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            principal: self.principal + o.principal,
            order_two: self.order_two + o.order_two,
            generator_pair: self.generator_pair + o.generator_pair,
        }
    }
}

/// Classifies each prime `p ≤ x` with `(−56/p) = 1` by lattice scan of the
/// four forms; exactly one of `f0`, `f1`, `{f2, f3}` represents it.
pub fn prime_class_distribution(x: u64, tables: &PrimeTables) -> Result<PrimeClassBuckets> {
    crate::par::try_ordered_sum(tables.primes_in(0, x as i64)?, |&p| {
        let p = p as u64;
        if kronecker(-56, p as i64) != 1 {
            return Ok(PrimeClassBuckets::zero());
        }
        let hits = [reps_by_form56(0, p)? > 0, reps_by_form56(1, p)? > 0, reps_by_form56(2, p)? > 0];
        match hits {
            [true, false, false] => Ok(PrimeClassBuckets { principal: 1, ..Default::default() }),
            [false, true, false] => Ok(PrimeClassBuckets { order_two: 1, ..Default::default() }),
            [false, false, true] => Ok(PrimeClassBuckets { generator_pair: 1, ..Default::default() }),
            _ => Err(Error::Invalid(format!("{p} is not represented by exactly one genus class"))),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tables() -> PrimeTables {
        PrimeTables::build(1_000_000).unwrap()
    }

    #[test]
    fn r2_examples() {
        let t = tables();
        for (n, want) in [(1, 1), (7, 2), (3, 0), (2, 1), (49, 3), (14, 2)] {
            assert_eq!(r2(n, &t.factorize(n).unwrap()).unwrap(), want, "n = {n}");
        }
    }

    #[test]
    fn window_examples() {
        assert_eq!(ideals_of_norm_z2(1).unwrap(), vec![IdealRepZ2 { generator: RealQuadInt::new(1, 0) }]);
        // (√2) itself lies in [√2, ε√2).
        assert_eq!(ideals_of_norm_z2(2).unwrap(), vec![IdealRepZ2 { generator: RealQuadInt::new(0, 1) }]);
        let seven = ideals_of_norm_z2(7).unwrap();
        assert_eq!(seven.len(), 2);
        let a = IdealRepZ2::from_generator(RealQuadInt::new(3, 1)).unwrap();
        let b = IdealRepZ2::from_generator(RealQuadInt::new(3, -1)).unwrap();
        assert!(seven.contains(&a) && seven.contains(&b) && a != b);
        assert_eq!(IdealRepZ2::from_generator(RealQuadInt::new(-2, -1)).unwrap().generator(), RealQuadInt::new(0, 1));
    }

    /// Double loop over `(x, y)` in a generous box, normalized through units.
    fn ideals_scan(n: u64) -> Vec<IdealRepZ2> {
        let r = 3 * ((n as f64).sqrt() as i64 + 2);
        let mut out = Vec::new();
        for x in -r..=r {
            for y in -r..=r {
                let b = RealQuadInt::new(x, y);
                if b.norm().unsigned_abs() == n as u128 {
                    out.push(IdealRepZ2::from_generator(b).unwrap());
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    #[test]
    fn ideals_against_scan_and_r2() {
        let t = tables();
        for n in 1..=300u64 {
            let ideals = ideals_of_norm_z2(n).unwrap();
            assert_eq!(ideals, ideals_scan(n), "n = {n}");
            assert_eq!(ideals.len() as i64, r2(n, &t.factorize(n).unwrap()).unwrap());
            for i in &ideals {
                assert!(in_window(i.generator(), n as i128));
            }
        }
    }

    #[test]
    fn gross_char_examples() {
        let one: Complex<f64> = gross_char_z2(RealQuadInt::new(1, 0));
        assert!((one - Complex::new(1.0, 0.0)).norm() < 1e-15);
        let root2: Complex<f64> = gross_char_z2(RealQuadInt::new(0, 1));
        assert!((root2 - Complex::new(-1.0, 0.0)).norm() < 1e-15);
        let seven: Complex<f64> = gross_char_z2(RealQuadInt::new(3, 1));
        assert!((seven.re + 0.2510).abs() < 1e-3 && (seven.im + 0.9680).abs() < 1e-3, "{seven}");
        for (x, y) in [(3, 1), (-5, 7), (17, -12), (1, 1), (99, 70)] {
            let b = RealQuadInt::new(x, y);
            let a: Complex<f64> = gross_char_z2(b);
            let c: Complex<f64> = gross_char_z2(b.times_unit().unwrap());
            let d: Complex<f64> = gross_char_z2(RealQuadInt::new(-x, -y));
            assert!((a - c).norm() < 1e-12 && (a - d).norm() < 1e-12);
        }
    }

    #[test]
    fn split_primes_z2() {
        let t = tables();
        for &p in t.primes().iter().take(2000) {
            let p = p as u64;
            if z2_prime_ok(p) {
                let b = split_prime_z2(p).unwrap();
                assert_eq!(b.norm().unsigned_abs(), p as u128);
            } else {
                assert!(split_prime_z2(p).is_err());
            }
        }
    }

    /// Direct inner sum: list ideals of norm `t²n` and keep `gcd(t, x, y) = 1`.
    fn z2_inner_scan(t: u64, n: u64, h: u32) -> Complex<f64> {
        ideals_of_norm_z2(t * t * n)
            .unwrap()
            .into_iter()
            .filter(|i| {
                let g = i.generator();
                g.x.unsigned_abs().gcd(&g.y.unsigned_abs()).gcd(&t) == 1
            })
            .map(|i| i.gross_char::<f64>().powu(h))
            .fold(Complex::zero(), |a, b| a + b)
    }

    #[test]
    fn z2_inner_against_scan() {
        let t = tables();
        for tt in [1u64, 2, 3, 7, 14, 17, 49] {
            for n in [1u64, 2, 7, 14, 23, 49, 98, 119, 161, 4, 9, 289] {
                for h in [1u32, 2, 5] {
                    let fast: Complex<f64> = z2_inner_sum(&t.factorize(tt).unwrap(), &t.factorize(n).unwrap(), h).unwrap();
                    let scan = z2_inner_scan(tt, n, h);
                    assert!((fast - scan).norm() < 1e-9, "t={tt} n={n} h={h}: {fast} vs {scan}");
                }
            }
        }
    }

    #[test]
    fn lemma_z2_against_scan() {
        let t = tables();
        let f = QuarticForm::phi5();
        for b in [1u64, 10, 60] {
            let mut oracle = 0.0;
            for tt in 1..=b {
                let r = ((b / tt) as f64).sqrt() as i64 + 1;
                for u in -r..=r {
                    for v in -r..=r {
                        let ok = u.gcd(&v) == 1 && tt as i64 * u * u <= b as i64 && tt as i64 * v * v <= b as i64;
                        if ok {
                            let n = f.eval(u, v).unwrap().unsigned_abs() as u64;
                            oracle += z2_inner_scan(tt, n, 1).norm();
                        }
                    }
                }
            }
            let fast: f64 = lemma_z2_sum(&f, b as f64, 1, &t).unwrap();
            assert!((fast - oracle).abs() < 1e-9 * oracle.max(1.0), "B={b}: {fast} vs {oracle}");
        }
        assert_eq!(lemma_z2_sum::<f64>(&f, 0.5, 1, &t).unwrap(), 0.0);
    }

    #[test]
    fn forms_table() {
        for f in FORMS_56 {
            assert_eq!(f.discriminant(), -56);
            assert_eq!(f.reduced(), f);
        }
        assert_eq!(BinaryForm::new(7, 0, 2).reduced(), FORMS_56[1]);
        assert_eq!(BinaryForm::new(5, 2, 3).reduced(), FORMS_56[3]);
        assert_eq!(FORMS_56[3].eval(2, 1), FORMS_56[2].eval(2, -1));
    }

    #[test]
    fn form_rep_examples() {
        assert_eq!(reps_by_form56(1, 2).unwrap(), 2);
        assert_eq!(reps_by_form56(2, 3).unwrap(), 2);
        assert_eq!(reps_by_form56(0, 3).unwrap(), 0);
        assert_eq!(reps_by_form56(0, 15).unwrap(), 4);
        assert!(reps_by_form56(4, 3).is_err());
    }

    #[test]
    fn ideal_count_examples() {
        let t = tables();
        for (n, want) in [(2u64, 1i64), (3, 2), (5, 2), (1, 1), (4, 1), (11, 0)] {
            assert_eq!(ideal_count_m14(n, &t.factorize(n).unwrap()).unwrap(), want, "n = {n}");
        }
    }

    #[test]
    fn class_counts_match_forms() {
        let t = tables();
        for n in 1..=3000u64 {
            let f = t.factorize(n).unwrap();
            let c = class_counts_m14(&f).unwrap();
            assert_eq!(c.iter().sum::<u64>() as i64, ideal_count_m14(n, &f).unwrap());
            assert_eq!(reps_by_form56(0, n).unwrap(), 2 * c[0], "n = {n}");
            assert_eq!(reps_by_form56(1, n).unwrap(), 2 * c[2], "n = {n}");
            assert_eq!(reps_by_form56(2, n).unwrap(), 2 * c[1]);
            assert_eq!(c[1], c[3]);
        }
    }

    #[test]
    fn prime_classes_agree_with_scan() {
        let t = tables();
        for &p in t.primes_in(0, 10_000).unwrap() {
            let p = p as u64;
            if kronecker(-56, p as i64) != 1 {
                continue;
            }
            let k = prime_class_m14(p).unwrap();
            let j = match k {
                0 => 0,
                2 => 1,
                _ => 2,
            };
            assert!(reps_by_form56(j, p).unwrap() > 0, "p = {p}");
        }
    }

    #[test]
    fn char_sum_examples() {
        let one = Factorization::one();
        let three = Factorization::from_pairs(vec![(3, 1)]);
        assert_eq!(m14_inner_sum(&one, &three, 2).unwrap(), GaussianInt::new(-2, 0));
        let two = Factorization::from_pairs(vec![(2, 1)]);
        for j in 0..4u8 {
            let want = if j % 2 == 0 { 1 } else { -1 };
            assert_eq!(m14_inner_sum(&one, &two, j).unwrap(), GaussianInt::new(want, 0));
        }
        let t = tables();
        let f = QuarticForm::phi5();
        assert_eq!(class_char_sum_m14::<f64>(&f, 0.5, 1, &t).unwrap(), 0.0);
        for b in [10.0, 100.0, 1000.0] {
            let s1: f64 = class_char_sum_m14(&f, b, 1, &t).unwrap();
            let s3: f64 = class_char_sum_m14(&f, b, 3, &t).unwrap();
            assert_eq!(s1, s3);
        }
        assert!(class_char_sum_m14::<f64>(&f, 10.0, 0, &t).is_err());
    }

    #[test]
    fn inner_sums_against_class_counts() {
        let t = tables();
        let one = Factorization::one();
        for n in 1..=2000u64 {
            let f = t.factorize(n).unwrap();
            let c = class_counts_m14(&f).unwrap();
            for j in 0..4u8 {
                let want = (0..4).fold(GaussianInt::ZERO, |s, k| {
                    s + class_character(j, k as u8) * GaussianInt::new(c[k] as i64, 0)
                });
                assert_eq!(m14_inner_sum(&one, &f, j).unwrap(), want);
            }
        }
    }

    #[test]
    fn prime_buckets() {
        let t = tables();
        assert_eq!(
            prime_class_distribution(10, &t).unwrap(),
            PrimeClassBuckets { principal: 0, order_two: 0, generator_pair: 2 }
        );
        // 23 = 3² + 14·1²
        assert_eq!(
            prime_class_distribution(30, &t).unwrap(),
            PrimeClassBuckets { principal: 1, order_two: 0, generator_pair: 4 }
        );
    }
}
