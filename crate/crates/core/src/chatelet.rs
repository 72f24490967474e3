//! Points on `t² F(u,v) = x² + y²` with `gcd(u,v) = gcd(t,x,y) = 1`, `t > 0`,
//! and `√t·(u,v)` in a dilated region `√B·R`: counts restricted to a sector
//! of `arg(x+iy)`, the averaged character sums over those points, the
//! archimedean density and the prime sums built from `ρ(p)`.
//!
//! For admissible `t` (odd, every prime factor `≡ 1 mod 4`) each point
//! factors uniquely as `x + iy = ν²α` with `ν` primary of norm `t` and
//! `gcd(ν, ν̄) = 1`, `N(α) = F(u,v)` and `gcd(α, ν̄) = 1`. Any other `t`
//! admits no points.

use std::ops::Add;

use num_complex::Complex;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gaussian::{
    arc_contains, g_h_coprime, g_h_multiplicative, gaussian_gcd, primary_mu_list, representations, split_prime,
    GaussianInt,
};
use crate::numtheory::{Factorization, PrimeTables};
use crate::par::{ordered_sum, try_ordered_sum, CHUNK};
use crate::quartic::{rho, QuarticForm};
use crate::scalar::Real;

/// Axis-parallel box inside `[−1, 1]²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region<T> {
    pub u_lo: T,
    pub u_hi: T,
    pub v_lo: T,
    pub v_hi: T,
}

impl<T: Real> Region<T> {
    pub fn new(u_lo: T, u_hi: T, v_lo: T, v_hi: T) -> Result<Self> {
        let inside = |lo: T, hi: T| -T::one() <= lo && lo < hi && hi <= T::one();
        if !(inside(u_lo, u_hi) && inside(v_lo, v_hi)) {
            return Err(Error::Invalid(format!(
                "region must be a nonempty box inside [-1,1]^2, got [{u_lo},{u_hi}]x[{v_lo},{v_hi}]"
            )));
        }
        Ok(Self { u_lo, u_hi, v_lo, v_hi })
    }

    /// `[−1, 1]²`.
    pub fn square() -> Self {
        Self { u_lo: -T::one(), u_hi: T::one(), v_lo: -T::one(), v_hi: T::one() }
    }

    /// `[0, 1]²`.
    pub fn unit() -> Self {
        Self { u_lo: T::zero(), u_hi: T::one(), v_lo: T::zero(), v_hi: T::one() }
    }

    pub fn area(&self) -> T {
        (self.u_hi - self.u_lo) * (self.v_hi - self.v_lo)
    }

    /// `√t·(u, v) ∈ √B·R`, decided by comparing squares.
    pub fn contains_scaled(&self, t: u64, u: i64, v: i64, b: T) -> bool {
        coord_in(t, u, self.u_lo, self.u_hi, b) && coord_in(t, v, self.v_lo, self.v_hi, b)
    }
}

/// `lo·√(B/t) ≤ w ≤ hi·√(B/t)`.
fn coord_in<T: Real>(t: u64, w: i64, lo: T, hi: T, b: T) -> bool {
    let tw2 = T::of_i128(t as i128 * w as i128 * w as i128);
    let above = if lo >= T::zero() { w >= 0 && tw2 >= lo * lo * b } else { w >= 0 || tw2 <= lo * lo * b };
    let below = if hi >= T::zero() { w <= 0 || tw2 <= hi * hi * b } else { w < 0 && tw2 >= hi * hi * b };
    above && below
}

/// Integer candidates for one coordinate, a superset of the exact range.
fn coord_range<T: Real>(t: u64, lo: T, hi: T, b: T) -> (i64, i64) {
    let s = (b / T::of_u64(t)).sqrt();
    let lo = (lo * s).floor().to_i64().unwrap_or(i64::MIN / 2) - 1;
    let hi = (hi * s).ceil().to_i64().unwrap_or(i64::MAX / 2) + 1;
    (lo, hi)
}

/// Half-open arc `(lo, hi]` of `arg(x + iy)`, angle 0 read as 2π.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sector<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Real> Sector<T> {
    pub fn new(lo: T, hi: T) -> Result<Self> {
        if !(T::zero() <= lo && lo < hi && hi <= T::TAU()) {
            return Err(Error::Invalid(format!("sector needs 0 <= lo < hi <= 2pi, got ({lo}, {hi})")));
        }
        Ok(Self { lo, hi })
    }

    pub fn full() -> Self {
        Self { lo: T::zero(), hi: T::TAU() }
    }

    pub fn is_full(&self) -> bool {
        self.lo <= T::zero() && self.hi >= T::TAU()
    }

    pub fn contains(&self, z: GaussianInt) -> bool {
        arc_contains(z.arg::<T>(), self.lo, self.hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChateletSolution {
    pub t: u64,
    pub u: i64,
    pub v: i64,
    pub x: i64,
    pub y: i64,
}

/// An admissible `t` with its factorization and, for the Gaussian sums, the
/// primary `ν` of norm `t`.
pub(crate) struct Modulus {
    pub(crate) t: u64,
    pub(crate) f: Factorization,
    nus: Vec<GaussianInt>,
}

/// Which `t` and which values of `F` a box walk visits.
#[derive(Clone, Copy)]
pub(crate) struct WalkRule {
    /// Primes allowed in `t`; any other prime factor kills every point.
    pub(crate) prime_ok: fn(u64) -> bool,
    /// Visit `|F(u,v)|` at points where `F < 0`.
    pub(crate) absolute: bool,
    nus: bool,
}

impl WalkRule {
    pub(crate) fn new(prime_ok: fn(u64) -> bool, absolute: bool) -> Self {
        Self { prime_ok, absolute, nus: false }
    }
}

fn gaussian_rule(nus: bool) -> WalkRule {
    WalkRule { prime_ok: |p| p % 4 == 1, absolute: false, nus }
}

fn overflow_at(t: u64, u: i64, v: i64) -> Error {
    Error::Overflow(format!("t^2 F(u,v) at (t, u, v) = ({t}, {u}, {v}) exceeds exact arithmetic"))
}

/// Every admissible `t ≤ B` and the `(t, v)` rows to scan.
fn plan<T: Real>(
    b: T,
    region: &Region<T>,
    rule: WalkRule,
    tables: &PrimeTables,
) -> Result<(Vec<Modulus>, Vec<(usize, i64)>)> {
    if !b.is_finite() {
        return Err(Error::Invalid(format!("B must be finite, got {b}")));
    }
    if b < T::one() {
        return Ok((Vec::new(), Vec::new()));
    }
    let t_max = b.floor().to_u64().ok_or_else(|| Error::Invalid(format!("B = {b} is too large")))?;
    let mut moduli = Vec::new();
    for t in 1..=t_max {
        let f = tables.factorize(t)?;
        if f.pairs().iter().all(|&(p, _)| (rule.prime_ok)(p)) {
            let nus = if rule.nus { primary_mu_list(t, &f)? } else { Vec::new() };
            moduli.push(Modulus { t, f, nus });
        }
    }
    let mut rows = Vec::new();
    for (i, m) in moduli.iter().enumerate() {
        let (lo, hi) = coord_range(m.t, region.v_lo, region.v_hi, b);
        rows.extend((lo..=hi).filter(|&v| coord_in(m.t, v, region.v_lo, region.v_hi, b)).map(|v| (i, v)));
    }
    Ok((moduli, rows))
}

/// Calls `visit(u, n, factorization of n)` for every coprime `u` in the row,
/// with `n = F(u, v)` (or `|F(u, v)|` under an absolute rule) and `n > 0`.
#[allow(clippy::too_many_arguments)]
fn scan_row<T: Real>(
    form: &QuarticForm,
    m: &Modulus,
    v: i64,
    b: T,
    region: &Region<T>,
    rule: WalkRule,
    tables: &PrimeTables,
    mut visit: impl FnMut(i64, u64, &Factorization) -> Result<()>,
) -> Result<()> {
    let (lo, hi) = coord_range(m.t, region.u_lo, region.u_hi, b);
    for u in lo..=hi {
        if u.gcd(&v) != 1 || !coord_in(m.t, u, region.u_lo, region.u_hi, b) {
            continue;
        }
        let mut value = form.eval(u, v).ok_or_else(|| overflow_at(m.t, u, v))?;
        if rule.absolute {
            value = value.abs();
        }
        if value <= 0 {
            continue;
        }
        let n = u64::try_from(value).map_err(|_| overflow_at(m.t, u, v))?;
        visit(u, n, &tables.factorize(n)?)?;
    }
    Ok(())
}

/// Sums `visit(modulus, u, v, n, factorization of n)` over the box walk,
/// partition-independently.
pub(crate) fn walk<T, S, V>(
    form: &QuarticForm,
    b: T,
    region: &Region<T>,
    rule: WalkRule,
    tables: &PrimeTables,
    visit: V,
) -> Result<S>
where
    T: Real,
    S: Zero + Add<Output = S> + Send,
    V: Fn(&Modulus, i64, i64, u64, &Factorization) -> Result<S> + Sync,
{
    let (moduli, rows) = plan(b, region, rule, tables)?;
    try_ordered_sum(&rows, |&(i, v)| {
        let m = &moduli[i];
        let mut acc = S::zero();
        scan_row(form, m, v, b, region, rule, tables, |u, n, nf| {
            acc = std::mem::replace(&mut acc, S::zero()) + visit(m, u, v, n, nf)?;
            Ok(())
        })?;
        Ok(acc)
    })
}

/// Number of `x + iy` with `x² + y² = t²n` and `gcd(t, x, y) = 1`, for
/// admissible `t`.
fn tuple_count(t_f: &Factorization, n_f: &Factorization) -> u64 {
    let mut count = 4u64 << t_f.omega();
    for &(p, e) in n_f.pairs() {
        if p == 2 {
            continue;
        }
        if p % 4 == 3 {
            if e % 2 == 1 {
                return 0;
            }
        } else if t_f.exponent_of(p) == 0 {
            count *= e as u64 + 1;
        }
    }
    count
}

/// The points `x + iy = ν²α` for one `(t, u, v)`.
fn points(m: &Modulus, n: u64, n_f: &Factorization, u: i64, v: i64) -> Result<Vec<GaussianInt>> {
    let reps = representations(n, n_f)?;
    let mut out = Vec::with_capacity(reps.len() * m.nus.len());
    for &nu in &m.nus {
        let bar = nu.conj();
        let sq = nu.checked_mul(nu).map_err(|_| overflow_at(m.t, u, v))?;
        for &alpha in &reps {
            if gaussian_gcd(alpha, bar)?.is_unit() {
                out.push(sq.checked_mul(alpha).map_err(|_| overflow_at(m.t, u, v))?);
            }
        }
    }
    Ok(out)
}

/// Half the number of tuples `(t, u, v, x, y)` with `√t·(u,v) ∈ √B·R` and
/// `arg(x + iy)` in the sector; `(u,v)` and `(−u,−v)` give the same point
/// of the surface.
pub fn enumerate_nb<T: Real>(
    form: &QuarticForm,
    b: T,
    region: &Region<T>,
    sector: &Sector<T>,
    tables: &PrimeTables,
) -> Result<Ratio<u64>> {
    let tuples: u64 = if sector.is_full() {
        walk(form, b, region, gaussian_rule(false), tables, |m, _, _, _, nf| Ok(tuple_count(&m.f, nf)))?
    } else {
        walk(form, b, region, gaussian_rule(true), tables, |m, u, v, n, nf| {
            Ok(points(m, n, nf, u, v)?.into_iter().filter(|&z| sector.contains(z)).count() as u64)
        })?
    };
    Ok(Ratio::new(tuples, 2))
}

/// Every tuple counted by [`enumerate_nb`] over the full sector, ordered by
/// `(t, v, u)` and then by `x + iy`.
pub fn enumerate_solutions<T: Real>(
    form: &QuarticForm,
    b: T,
    region: &Region<T>,
    tables: &PrimeTables,
) -> Result<Vec<ChateletSolution>> {
    let rule = gaussian_rule(true);
    let (moduli, rows) = plan(b, region, rule, tables)?;
    let blocks: Vec<Result<Vec<ChateletSolution>>> = rows
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut out = Vec::new();
            for &(i, v) in chunk {
                let m = &moduli[i];
                scan_row(form, m, v, b, region, rule, tables, |u, n, nf| {
                    let mut zs = points(m, n, nf, u, v)?;
                    zs.sort_unstable();
                    out.extend(zs.into_iter().map(|z| ChateletSolution { t: m.t, u, v, x: z.re, y: z.im }));
                    Ok(())
                })?;
            }
            Ok(out)
        })
        .collect();
    let mut out = Vec::new();
    for b in blocks {
        out.extend(b?);
    }
    Ok(out)
}

/// `Σ ((x+iy)/|x+iy|)^{4h}` over `x² + y² = t²n` with `gcd(t, x, y) = 1`,
/// from the Euler product. Real, since the point set is closed under
/// conjugation.
pub fn inner_char_sum<T: Real>(t_f: &Factorization, n_f: &Factorization, h: u32) -> Result<T> {
    if t_f.pairs().iter().any(|&(p, _)| p % 4 != 1) {
        return Ok(T::zero());
    }
    let four_h = T::of_u64(4 * h as u64);
    let mut acc = T::of_u64(4);
    for &(p, a) in t_f.pairs() {
        // All of π^(2a+k) or all of π̄^(2a+k).
        let k = n_f.exponent_of(p);
        let theta: T = split_prime(p)?.arg();
        acc = acc * T::of_u64(2) * (four_h * T::of_u64(2 * a as u64 + k as u64) * theta).cos();
    }
    let rest = Factorization::from_pairs(n_f.pairs().iter().copied().filter(|&(p, _)| t_f.exponent_of(p) == 0).collect());
    Ok(acc * g_h_multiplicative::<T>(&rest, 4 * h)?)
}

/// [`inner_char_sum`] by listing the representations of `t²n` directly.
pub fn inner_char_sum_direct<T: Real>(t: u64, n: u64, h: u32, tables: &PrimeTables) -> Result<Complex<T>> {
    let m = t
        .checked_mul(t)
        .and_then(|tt| tt.checked_mul(n))
        .ok_or_else(|| Error::Overflow(format!("t^2 n for t = {t}, n = {n}")))?;
    let mut acc = Complex::zero();
    for z in representations(m, &tables.factorize(m)?)? {
        let g = (z.re.unsigned_abs()).gcd(&z.im.unsigned_abs()).gcd(&t);
        if g == 1 {
            acc = acc + z.unit_power::<T>(4 * h);
        }
    }
    Ok(acc)
}

/// [`inner_char_sum`] through `x + iy = ν²α`:
/// `Σ_ν (ν/|ν|)^{8h} Σ_{N(α)=n, gcd(α,ν̄)=1} (α/|α|)^{4h}`.
pub fn inner_char_sum_mu<T: Real>(t: u64, n: u64, h: u32, tables: &PrimeTables) -> Result<Complex<T>> {
    let nf = tables.factorize(n)?;
    let mut acc = Complex::zero();
    for nu in primary_mu_list(t, &tables.factorize(t)?)? {
        let inner: Complex<T> = g_h_coprime(n, &nf, 4 * h, nu)?;
        acc = acc + nu.unit_power::<T>(8 * h) * inner * T::of_u64(4);
    }
    Ok(acc)
}

/// The two sides of the character-sum saving: `Σ |inner sum|` and the
/// number of tuples it ranges over.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lt2Terms<T> {
    pub char_sum: T,
    pub tuples: u64,
}

impl<T: Real> Zero for Lt2Terms<T> {
    fn zero() -> Self {
        Self { char_sum: T::zero(), tuples: 0 }
    }
    fn is_zero(&self) -> bool {
        self.char_sum.is_zero() && self.tuples == 0
    }
}

impl<T: Real> Add for Lt2Terms<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { char_sum: self.char_sum + o.char_sum, tuples: self.tuples + o.tuples }
    }
}

/// `Σ |inner sum|` over the box `t·max(u², v²) ≤ B`, together with the
/// tuple count over the same range.
pub fn lemma_lt2_terms<T: Real>(form: &QuarticForm, b: T, h: u32, tables: &PrimeTables) -> Result<Lt2Terms<T>> {
    if h == 0 {
        return Err(Error::Invalid("h must be positive".into()));
    }
    walk(form, b, &Region::square(), gaussian_rule(false), tables, |m, _, _, _, nf| {
        Ok(Lt2Terms { char_sum: inner_char_sum::<T>(&m.f, nf, h)?.abs(), tuples: tuple_count(&m.f, nf) })
    })
}

pub fn lemma_lt2_sum<T: Real>(form: &QuarticForm, b: T, h: u32, tables: &PrimeTables) -> Result<T> {
    Ok(lemma_lt2_terms(form, b, h, tables)?.char_sum)
}

/// Splits `x + iy` as `ν²α` with `ν` primary of norm `t`, `gcd(ν, ν̄) = 1`
/// and `gcd(α, ν̄) = 1`. Requires `t² | x² + y²` and `gcd(t, x, y) = 1`.
pub fn mu_decomposition_check(t: u64, x: i64, y: i64, tables: &PrimeTables) -> Result<(GaussianInt, GaussianInt)> {
    let z = GaussianInt::new(x, y);
    let t2 = (t as u128) * (t as u128);
    let g = x.unsigned_abs().gcd(&y.unsigned_abs()).gcd(&t);
    if t == 0 || z.is_zero() || z.norm() % t2 != 0 || g != 1 {
        return Err(Error::Domain(format!("need t^2 | x^2 + y^2 and gcd(t, x, y) = 1, got t = {t}, x + iy = {z}")));
    }
    for nu in primary_mu_list(t, &tables.factorize(t)?)? {
        let Some(alpha) = z.div_exact(nu.checked_mul(nu)?) else {
            continue;
        };
        if gaussian_gcd(alpha, nu.conj())?.is_unit() {
            return Ok((nu, alpha));
        }
    }
    Err(Error::Domain(format!("no decomposition of {z} for t = {t}")))
}

/// `S₁ = Σ ρ(p)/p`, `S₂` the same over `p ≡ 1 (mod 4)`, and
/// `S₃ = Σ ρ(p) g_{8h}(p)/p`, each over primes `2 < p ≤ B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SSums<T> {
    pub s1: T,
    pub s2: T,
    pub s3: Complex<T>,
}

impl<T: Real> Zero for SSums<T> {
    fn zero() -> Self {
        Self { s1: T::zero(), s2: T::zero(), s3: Complex::zero() }
    }
    fn is_zero(&self) -> bool {
        self.s1.is_zero() && self.s2.is_zero() && self.s3.is_zero()
    }
}

impl<T: Real> Add for SSums<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { s1: self.s1 + o.s1, s2: self.s2 + o.s2, s3: self.s3 + o.s3 }
    }
}

pub fn s_sums<T: Real>(form: &QuarticForm, b: u64, h: u32, tables: &PrimeTables) -> Result<SSums<T>> {
    try_ordered_sum(tables.primes_in(2, b as i64)?, |&p| {
        let p = p as u64;
        let r = rho(form, p)?;
        let term = T::of_u64(*r.numer()) / T::of_u64(*r.denom()) / T::of_u64(p);
        let g: T = g_h_multiplicative(&Factorization::from_pairs(vec![(p, 1)]), 8 * h)?;
        Ok(SSums {
            s1: term,
            s2: if p % 4 == 1 { term } else { T::zero() },
            s3: Complex::new(term * g, T::zero()),
        })
    })
}

/// `(π/2)·meas{(u,v) ∈ R : F(u,v) > 0}` by the midpoint rule on a
/// `resolution × resolution` grid.
pub fn sigma_infinity<T: Real>(form: &QuarticForm, region: &Region<T>, resolution: u32) -> Result<T> {
    if resolution < 100 {
        return Err(Error::Invalid(format!("resolution must be at least 100, got {resolution}")));
    }
    let r = T::of_u64(resolution as u64);
    let (du, dv) = ((region.u_hi - region.u_lo) / r, (region.v_hi - region.v_lo) / r);
    let half = T::of_f64(0.5);
    let rows: Vec<u32> = (0..resolution).collect();
    let positive: u64 = ordered_sum(&rows, |&j| {
        let v = region.v_lo + (T::of_u64(j as u64) + half) * dv;
        (0..resolution)
            .filter(|&i| form.eval_real(region.u_lo + (T::of_u64(i as u64) + half) * du, v) > T::zero())
            .count() as u64
    });
    Ok(T::FRAC_PI_2() * T::of_u64(positive) * du * dv)
}
