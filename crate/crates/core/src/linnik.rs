//! The equation `p + N(α) = N` with `p` prime and `α ∈ ℤ[i]`: sector counts,
//! the singular series of the main term, the averaged character sum over the
//! shifted primes, discrepancy pieces, and residue-class counts.

use std::collections::BTreeMap;

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gaussian::{arc_contains, g_h_multiplicative, representations, GaussianInt};
use crate::numtheory::{chi4, PrimeTables};
use crate::par::{ordered_sum, try_ordered_sum, CHUNK};
use crate::scalar::Real;

/// Default truncation point of the infinite product in [`singular_series`].
pub const DEFAULT_P_CUT: u64 = 100_000;

/// Restricts solutions to `aN < p ≤ bN` and `c < arg(α) ≤ d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorQuery<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Real> SectorQuery<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Result<Self> {
        let zero = T::zero();
        let ok = zero <= a && a < b && b <= T::one() && zero <= c && c < d && d <= T::TAU();
        if !ok {
            return Err(Error::Invalid(format!(
                "sector query needs 0 <= a < b <= 1 and 0 <= c < d <= 2pi, got ({a}, {b}, {c}, {d})"
            )));
        }
        Ok(Self { a, b, c, d })
    }

    /// `(0, 1] × (0, 2π]`: every solution.
    pub fn full() -> Self {
        Self { a: T::zero(), b: T::one(), c: T::zero(), d: T::TAU() }
    }

    pub fn admits_prime(&self, p: u64, n: u64) -> bool {
        let (p, n) = (T::of_u64(p), T::of_u64(n));
        self.a * n < p && p <= self.b * n
    }

    pub fn admits_angle(&self, theta: T) -> bool {
        arc_contains(theta, self.c, self.d)
    }

    /// `(b − a)(d − c)/2π`, the expected share of all solutions.
    pub fn fraction(&self) -> T {
        (self.b - self.a) * (self.d - self.c) / T::TAU()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountReport<T> {
    pub empirical: u64,
    pub main_term: T,
    pub relative_deviation: T,
}

/// Raw ingredients of the Erdős–Turán inequality for one arc.
#[derive(Debug, Clone, PartialEq)]
pub struct EtTerms<T> {
    /// `(d − c)/2π · #A`.
    pub main: T,
    /// Points of `A` in `(c, d]`.
    pub count: u64,
    /// `|Σ_{θ∈A} e^{ihθ}|` for `h = 1..=H`.
    pub char_sums: Vec<T>,
    /// `|count − main|`.
    pub exact_discrepancy: T,
}

fn check_limit(n: u64, tables: &PrimeTables) -> Result<()> {
    if n > tables.limit() {
        return Err(Error::Range { value: n, limit: tables.limit() });
    }
    Ok(())
}

/// Primes `p < n`.
fn primes_below(n: u64, tables: &PrimeTables) -> Result<&[u32]> {
    tables.primes_in(0, n as i64 - 1)
}

fn points_of_norm(m: u64, tables: &PrimeTables) -> Result<Vec<GaussianInt>> {
    representations(m, &tables.factorize(m)?)
}

/// Number of pairs `(p, α)` with `p + N(α) = n`, `p < n`, inside the query.
pub fn count_solutions<T: Real>(n: u64, q: &SectorQuery<T>, tables: &PrimeTables) -> Result<u64> {
    check_limit(n, tables)?;
    try_ordered_sum(primes_below(n, tables)?, |&p| {
        let p = p as u64;
        if !q.admits_prime(p, n) {
            return Ok(0u64);
        }
        let points = points_of_norm(n - p, tables)?;
        Ok(points.iter().filter(|z| q.admits_angle(z.arg::<T>())).count() as u64)
    })
}

/// Every solution `(p, α)` of `p + N(α) = n` with `p < n`, ordered by `p`
/// and then by `α`.
pub fn solutions(n: u64, tables: &PrimeTables) -> Result<Vec<(u64, GaussianInt)>> {
    check_limit(n, tables)?;
    let blocks: Vec<Result<Vec<(u64, GaussianInt)>>> = primes_below(n, tables)?
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut out = Vec::new();
            for &p in chunk {
                let p = p as u64;
                out.extend(points_of_norm(n - p, tables)?.into_iter().map(|z| (p, z)));
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

/// `C(N) = π Π_{2<p≤p_cut}(1 + χ₄(p)/p(p−1)) Π_{p|N}(p−1)(p−χ₄(p))/(p²−p+χ₄(p))`.
///
/// The first product is truncated at `p_cut`; its tail is `O(1/p_cut)`.
pub fn singular_series<T: Real>(n: u64, p_cut: u64, tables: &PrimeTables) -> Result<T> {
    if p_cut < 3 {
        return Err(Error::Invalid(format!("p_cut must be at least 3, got {p_cut}")));
    }
    if n == 0 {
        return Err(Error::Domain("N must be positive".into()));
    }
    let mut acc = T::PI();
    for &p in tables.primes_in(2, p_cut as i64)? {
        let chi = T::of_i64(chi4(p as i64) as i64);
        let p = T::of_u64(p as u64);
        acc = acc * (T::one() + chi / (p * (p - T::one())));
    }
    for &(p, _) in tables.factorize(n)?.pairs() {
        if p == 2 {
            continue;
        }
        let chi = T::of_i64(chi4(p as i64) as i64);
        let p = T::of_u64(p);
        acc = acc * (p - T::one()) * (p - chi) / (p * p - p + chi);
    }
    Ok(acc)
}

/// `Σ_{p<N} f_h(N − p)`, through the Euler product of `g_h`.
pub fn theorem2_sum<T: Real>(n: u64, h: u32, tables: &PrimeTables) -> Result<T> {
    if n < 3 {
        return Err(Error::Domain(format!("N must be at least 3, got {n}")));
    }
    let h_max = 4 * (n as f64).ln().ceil() as u32;
    if h == 0 || h % 4 != 0 || h > h_max {
        return Err(Error::Invalid(format!("h must be a positive multiple of 4 at most {h_max}, got {h}")));
    }
    check_limit(n, tables)?;
    try_ordered_sum(primes_below(n, tables)?, |&p| {
        Ok(g_h_multiplicative::<T>(&tables.factorize(n - p as u64)?, h)?.abs())
    })
}

/// Erdős–Turán pieces for the angle set `angles` and the arc `(c, d]`.
pub fn et_terms<T: Real>(angles: &[T], c: T, d: T, harmonics: u32) -> Result<EtTerms<T>> {
    if harmonics == 0 {
        return Err(Error::Invalid("H must be at least 1".into()));
    }
    if !(T::zero() <= c && c < d && d <= T::TAU()) {
        return Err(Error::Invalid(format!("arc needs 0 <= c < d <= 2pi, got ({c}, {d})")));
    }
    if angles.iter().any(|t| !t.is_finite()) {
        return Err(Error::Invalid("angles must be finite".into()));
    }
    let count = angles.iter().filter(|&&t| arc_contains(t, c, d)).count() as u64;
    let main = (d - c) / T::TAU() * T::of_u64(angles.len() as u64);
    let char_sums = (1..=harmonics)
        .map(|h| {
            let h = T::of_u64(h as u64);
            let s: Complex<T> = ordered_sum(angles, |&t| Complex::from_polar(T::one(), h * t));
            s.norm()
        })
        .collect();
    Ok(EtTerms { main, count, char_sums, exact_discrepancy: (T::of_u64(count) - main).abs() })
}

/// Solutions of `p + N(α) = n` counted by the class of `α` modulo `k`,
/// keyed by `(re mod k, im mod k)`; all `k²` classes are present.
pub fn residue_counts(n: u64, k: u32, tables: &PrimeTables) -> Result<BTreeMap<(u32, u32), u64>> {
    if k == 0 || k > 20 {
        return Err(Error::Invalid(format!("modulus must be in 1..=20, got {k}")));
    }
    check_limit(n, tables)?;
    let kk = k as usize;
    let blocks: Vec<Result<Vec<u64>>> = primes_below(n, tables)?
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut counts = vec![0u64; kk * kk];
            for &p in chunk {
                for z in points_of_norm(n - p as u64, tables)? {
                    let r = z.re.rem_euclid(k as i64) as usize;
                    let i = z.im.rem_euclid(k as i64) as usize;
                    counts[r * kk + i] += 1;
                }
            }
            Ok(counts)
        })
        .collect();
    let mut total = vec![0u64; kk * kk];
    for b in blocks {
        for (t, c) in total.iter_mut().zip(b?) {
            *t += c;
        }
    }
    Ok(total
        .into_iter()
        .enumerate()
        .map(|(idx, c)| (((idx / kk) as u32, (idx % kk) as u32), c))
        .collect())
}

/// Empirical counts against the predicted main term, one row per query.
pub fn theorem1_report<T: Real>(
    n: u64,
    queries: &[SectorQuery<T>],
    p_cut: u64,
    tables: &PrimeTables,
) -> Result<Vec<CountReport<T>>> {
    if n < 3 {
        return Err(Error::Domain(format!("N must be at least 3, got {n}")));
    }
    let c = singular_series::<T>(n, p_cut, tables)?;
    let scale = T::of_u64(n) / T::of_u64(n).ln() * c;
    queries
        .iter()
        .map(|q| {
            let empirical = count_solutions(n, q, tables)?;
            let main_term = q.fraction() * scale;
            Ok(CountReport { empirical, main_term, relative_deviation: (T::of_u64(empirical) - main_term) / main_term })
        })
        .collect()
}
