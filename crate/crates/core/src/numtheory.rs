//! Rational-integer machinery shared by every other module: a segmented
//! smallest-prime-factor sieve, factorization on top of it, and the quadratic
//! symbols the divisor-sum formulas are written in.

use num_integer::Roots;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Largest sieve limit accepted by [`PrimeTables::build`].
pub const DEFAULT_MEMORY_CEILING: u64 = 200_000_000;

/// Entries per sieve segment; 1 MiB of `u32` keeps a segment in L2.
const SEGMENT: usize = 1 << 18;

/// Above the table, small primes up to this bound are removed by trial
/// division before the cofactor is handed to Miller-Rabin / Pollard rho.
const TRIAL_BOUND: u64 = 1 << 10;

/// Smallest-prime-factor table for `2 ..= limit`, plus the primes in order.
///
/// Immutable after construction, so it is shared freely across workers.
#[derive(Debug, Clone)]
pub struct PrimeTables {
    limit: u64,
    spf: Vec<u32>,
    primes: Vec<u32>,
}

impl PrimeTables {
    pub fn build(limit: u64) -> Result<Self> {
        Self::build_with_ceiling(limit, DEFAULT_MEMORY_CEILING)
    }

    pub fn build_with_ceiling(limit: u64, ceiling: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::Domain(format!("sieve limit must be at least 2, got {limit}")));
        }
        let ceiling = ceiling.min(u32::MAX as u64);
        if limit > ceiling {
            return Err(Error::Resource { requested: limit, ceiling });
        }

        let base_limit = (limit.sqrt() + 1) as usize;
        let base = simple_primes(base_limit);

        let len = limit as usize + 1;
        let mut spf = vec![0u32; len];
        spf.par_chunks_mut(SEGMENT).enumerate().for_each(|(seg, chunk)| {
            let lo = seg * SEGMENT;
            let hi = lo + chunk.len();
            for &p in &base {
                let p = p as usize;
                if p * p >= hi {
                    break;
                }
                let mut m = (p * p).max(lo.div_ceil(p) * p);
                while m < hi {
                    let slot = &mut chunk[m - lo];
                    if *slot == 0 {
                        *slot = p as u32;
                    }
                    m += p;
                }
            }
            for (i, slot) in chunk.iter_mut().enumerate() {
                let n = lo + i;
                if n >= 2 && *slot == 0 {
                    *slot = n as u32;
                }
            }
        });

        let primes = (2..len).filter(|&n| spf[n] as usize == n).map(|n| n as u32).collect();
        Ok(Self { limit, spf, primes })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Smallest prime factor of `n`, for `2 <= n <= limit`.
    pub fn spf(&self, n: u64) -> Option<u64> {
        if (2..=self.limit).contains(&n) {
            Some(self.spf[n as usize] as u64)
        } else {
            None
        }
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn is_prime(&self, n: u64) -> bool {
        if n <= self.limit {
            n >= 2 && self.spf[n as usize] as u64 == n
        } else {
            num_prime::nt_funcs::is_prime64(n)
        }
    }

    /// The primes in the half-open range `(lo, hi]`, ascending.
    pub fn primes_in(&self, lo: i64, hi: i64) -> Result<&[u32]> {
        if hi > 0 && hi as u64 > self.limit {
            return Err(Error::Range { value: hi as u64, limit: self.limit });
        }
        if hi <= lo || hi < 2 {
            return Ok(&[]);
        }
        let start = self.primes.partition_point(|&p| (p as i64) <= lo);
        let end = self.primes.partition_point(|&p| (p as i64) <= hi);
        Ok(&self.primes[start..end.max(start)])
    }

    pub fn factorize(&self, n: u64) -> Result<Factorization> {
        if n == 0 {
            return Err(Error::Domain("cannot factor 0".into()));
        }
        let mut factors = Vec::new();
        if n <= self.limit {
            self.walk_spf(n, &mut factors);
            return Ok(Factorization { factors });
        }

        let mut rest = n;
        for &p in &self.primes {
            let p = p as u64;
            if p > TRIAL_BOUND || p * p > rest {
                break;
            }
            if rest % p == 0 {
                let mut e = 0;
                while rest % p == 0 {
                    rest /= p;
                    e += 1;
                }
                factors.push((p, e));
            }
        }
        if rest > 1 {
            if rest <= self.limit {
                self.walk_spf(rest, &mut factors);
            } else {
                let big = num_prime::nt_funcs::factorize64(rest);
                factors.extend(big.into_iter().map(|(p, e)| (p, e as u32)));
            }
        }
        factors.sort_unstable();
        Ok(Factorization { factors })
    }

    fn walk_spf(&self, mut n: u64, out: &mut Vec<(u64, u32)>) {
        while n > 1 {
            let p = self.spf[n as usize] as u64;
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
}

fn simple_primes(limit: usize) -> Vec<u32> {
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for n in 2..=limit {
        if !composite[n] {
            out.push(n as u32);
            let mut m = n * n;
            while m <= limit {
                composite[m] = true;
                m += n;
            }
        }
    }
    out
}

/// Prime factorization as `(prime, exponent)` pairs with strictly increasing
/// primes. The empty list is the factorization of 1.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Factorization {
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn one() -> Self {
        Self::default()
    }

    /// Builds a factorization from pairs; sorts and merges repeated primes.
    /// Primality of the entries is the caller's responsibility.
    pub fn from_pairs(mut pairs: Vec<(u64, u32)>) -> Self {
        pairs.retain(|&(_, e)| e > 0);
        pairs.sort_unstable();
        let mut factors: Vec<(u64, u32)> = Vec::with_capacity(pairs.len());
        for (p, e) in pairs {
            match factors.last_mut() {
                Some(last) if last.0 == p => last.1 += e,
                _ => factors.push((p, e)),
            }
        }
        Self { factors }
    }

    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors
            .binary_search_by_key(&p, |&(q, _)| q)
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    /// The integer this factorization represents, if it fits in a `u128`.
    pub fn value(&self) -> Option<u128> {
        self.factors.iter().try_fold(1u128, |acc, &(p, e)| {
            (p as u128).checked_pow(e).and_then(|pe| acc.checked_mul(pe))
        })
    }

    /// Factorization of the product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut pairs = self.factors.clone();
        pairs.extend_from_slice(&other.factors);
        Self::from_pairs(pairs)
    }

    pub fn pow(&self, k: u32) -> Self {
        Self { factors: self.factors.iter().map(|&(p, e)| (p, e * k)).collect() }
    }

    /// All positive divisors, unordered.
    pub fn divisors(&self) -> Vec<u64> {
        let mut out = vec![1u64];
        for &(p, e) in &self.factors {
            let len = out.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    out.push(out[i] * pk);
                }
            }
        }
        out
    }
}

/// Kronecker symbol `(a / n)` for all integers, including `n <= 0` and even
/// `n`. Intermediates are `i128`, so no input can overflow.
pub fn kronecker(a: i64, n: i64) -> i8 {
    let mut a = a as i128;
    let mut n = n as i128;
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut result = 1i8;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    let twos = n.trailing_zeros();
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        n >>= twos;
        let a8 = a.rem_euclid(8);
        if twos % 2 == 1 && (a8 == 3 || a8 == 5) {
            result = -result;
        }
    }
    // Jacobi symbol with n odd and positive.
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let n8 = n % 8;
            if n8 == 3 || n8 == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// The non-trivial character modulo 4.
pub fn chi4(n: i64) -> i8 {
    match n.rem_euclid(4) {
        1 => 1,
        3 => -1,
        _ => 0,
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// A square root of `a` modulo an odd prime `p` (Tonelli–Shanks), the
/// smaller of the two roots, or `None` for a non-residue.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let z = (2..p).find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1)?;
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r.min(p - r))
}

/// Exact integer square root when `n` is a perfect square.
#[inline]
pub fn exact_sqrt(n: u64) -> Option<u64> {
    let r = n.sqrt();
    (r * r == n).then_some(r)
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(mut n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        let mut p = 2;
        while p * p <= n {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            if e > 0 {
                out.push((p, e));
            }
            p += 1;
        }
        if n > 1 {
            out.push((n, 1));
        }
        out
    }

    #[test]
    fn spf_examples() {
        let t = PrimeTables::build(12).unwrap();
        assert_eq!(t.spf(12), Some(2));
        assert_eq!(t.spf(9), Some(3));
        let t = PrimeTables::build(100).unwrap();
        assert_eq!(t.spf(97), Some(97));
        assert_eq!(t.spf(91), Some(7));
    }

    #[test]
    fn spf_invariants_across_segments() {
        let limit = 3 * SEGMENT as u64 + 17;
        let t = PrimeTables::build(limit).unwrap();
        for n in 2..=limit {
            let p = t.spf(n).unwrap();
            assert_eq!(n % p, 0);
            assert_eq!(t.spf(p), Some(p), "spf({n}) = {p} is not prime");
        }
    }

    #[test]
    fn limit_errors() {
        assert!(matches!(PrimeTables::build(1), Err(Error::Domain(_))));
        match PrimeTables::build_with_ceiling(1001, 1000) {
            Err(Error::Resource { requested: 1001, ceiling: 1000 }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn factorize_examples() {
        let t = PrimeTables::build(1000).unwrap();
        assert!(t.factorize(1).unwrap().is_one());
        assert_eq!(t.factorize(360).unwrap().pairs(), &[(2, 3), (3, 2), (5, 1)]);
        assert!(matches!(t.factorize(0), Err(Error::Domain(_))));
        // Above the table limit.
        assert_eq!(t.factorize(1_000_003).unwrap().pairs(), trial_division(1_000_003).as_slice());
        for n in [999_983u64 * 999_979, 2u64.pow(40) * 3, 1_000_003 * 1_000_003, 600_851_475_143] {
            assert_eq!(t.factorize(n).unwrap().pairs(), trial_division(n).as_slice(), "{n}");
        }
    }

    #[test]
    fn factorize_reconstructs_up_to_a_million() {
        let t = PrimeTables::build(1_000_000).unwrap();
        for n in 1..=1_000_000u64 {
            let f = t.factorize(n).unwrap();
            assert_eq!(f.value(), Some(n as u128));
            assert!(f.pairs().iter().all(|&(p, _)| t.is_prime(p)));
        }
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(2, 7), 1);
        assert_eq!(kronecker(2, 5), -1);
        assert_eq!(kronecker(-14, 3), 1);
        assert_eq!(kronecker(i64::MIN, i64::MIN), 0);
        assert_eq!(kronecker(3, 0), 0);
        assert_eq!(kronecker(-1, 0), 1);
    }

    #[test]
    fn kronecker_matches_euler_criterion_for_odd_primes() {
        let t = PrimeTables::build(500).unwrap();
        for &p in &t.primes()[1..] {
            let p = p as u64;
            for a in -60i64..60 {
                let r = a.rem_euclid(p as i64) as u64;
                let euler = match pow_mod(r, (p - 1) / 2, p) {
                    0 => 0,
                    1 => 1,
                    _ => -1,
                };
                assert_eq!(kronecker(a, p as i64), euler, "({a}/{p})");
            }
        }
    }

    #[test]
    fn kronecker_multiplicative_in_top_argument() {
        for n in (1..=99).step_by(2) {
            for a in -50i64..=50 {
                for b in -50i64..=50 {
                    assert_eq!(kronecker(a * b, n), kronecker(a, n) * kronecker(b, n));
                }
            }
        }
    }

    #[test]
    fn sqrt_mod_roots() {
        let t = PrimeTables::build(2000).unwrap();
        for &p in &t.primes()[1..] {
            let p = p as u64;
            for a in 0..p.min(200) {
                match sqrt_mod(a, p) {
                    Some(r) => {
                        assert_eq!(mul_mod(r, r, p), a);
                        assert!(r <= p - r || r == 0);
                    }
                    None => assert_eq!(kronecker(a as i64, p as i64), -1),
                }
            }
        }
    }

    #[test]
    fn chi4_agrees_with_kronecker_minus_four() {
        assert_eq!((chi4(5), chi4(7), chi4(6)), (1, -1, 0));
        for n in 1..=10_000 {
            assert_eq!(chi4(n), kronecker(-4, n));
        }
    }

    #[test]
    fn primes_in_examples() {
        let t = PrimeTables::build(100).unwrap();
        assert_eq!(t.primes_in(1, 10).unwrap(), &[2, 3, 5, 7]);
        assert!(t.primes_in(10, 10).unwrap().is_empty());
        assert_eq!(t.primes_in(90, 100).unwrap(), &[97]);
        assert!(matches!(t.primes_in(1, 101), Err(Error::Range { .. })));
    }

    #[test]
    fn prime_counts_match_eratosthenes() {
        let t = PrimeTables::build(100_000).unwrap();
        let mut sieve = vec![true; 100_001];
        sieve[0] = false;
        sieve[1] = false;
        for i in 2..=316 {
            if sieve[i] {
                for j in (i * i..=100_000).step_by(i) {
                    sieve[j] = false;
                }
            }
        }
        let mut count = 0;
        for x in 1..=100_000usize {
            if sieve[x] {
                count += 1;
            }
            if x % 997 == 0 || x == 100_000 {
                assert_eq!(t.primes_in(1, x as i64).unwrap().len(), count, "pi({x})");
            }
        }
    }
}
