//! Segmented sieve for the prime windows `𝒫 = primes in [Z/2, Z]`.

use crate::error::{domain, Result};
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

/// Largest upper end accepted by [`primes_in`].
pub const SIEVE_LIMIT: u64 = 1_000_000_000;

const SEGMENT: u64 = 1 << 16;

/// Primes in an inclusive integer range.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PrimeWindow {
    pub lo: u64,
    pub hi: u64,
    pub primes: Vec<u64>,
}

impl PrimeWindow {
    /// Number of primes, `Z = |𝒫|`.
    pub fn z(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// The window `[⌈z/2⌉, ⌊z⌋]` for a real scale `z`; empty when `z < 2`.
    pub fn for_scale(z: f64) -> Result<Self> {
        if !(z.is_finite() && z >= 0.0) {
            return Err(domain(alloc::format!("prime scale {z} is not a finite non-negative real")));
        }
        let lo = ((z / 2.0).ceil() as u64).max(2);
        let hi = z.floor() as u64;
        if hi < lo {
            return Ok(Self {
                lo,
                hi: lo - 1,
                primes: Vec::new(),
            });
        }
        primes_in(lo, hi)
    }

    /// Midpoint of the real interval `[z/2, z]` the window was cut from.
    pub fn nominal_midpoint(z: f64) -> f64 {
        0.75 * z
    }
}

fn small_primes(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Exact list of primes in `[lo, hi]`.
pub fn primes_in(lo: u64, hi: u64) -> Result<PrimeWindow> {
    if hi < lo {
        return Err(domain(alloc::format!("empty range: hi = {hi} < lo = {lo}")));
    }
    if hi > SIEVE_LIMIT {
        return Err(domain(alloc::format!("hi = {hi} exceeds sieve limit {SIEVE_LIMIT}")));
    }
    let base = small_primes(isqrt(hi));
    let mut primes = Vec::new();
    let start = lo.max(2);
    let mut seg_lo = start;
    let mut marks = vec![false; SEGMENT as usize];
    while seg_lo <= hi {
        let seg_hi = (seg_lo + SEGMENT - 1).min(hi);
        let len = (seg_hi - seg_lo + 1) as usize;
        marks[..len].fill(false);
        for &p in &base {
            if p * p > seg_hi {
                break;
            }
            let mut m = (seg_lo.div_ceil(p) * p).max(p * p);
            while m <= seg_hi {
                marks[(m - seg_lo) as usize] = true;
                m += p;
            }
        }
        primes.extend((0..len).filter(|&i| !marks[i]).map(|i| seg_lo + i as u64));
        seg_lo = seg_hi + 1;
    }
    Ok(PrimeWindow { lo, hi, primes })
}

/// Trial-division primality test; fine for the small moduli used here.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Euler's totient.
pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_examples() {
        assert_eq!(primes_in(2, 10).unwrap().primes, [2, 3, 5, 7]);
        assert_eq!(primes_in(8, 10).unwrap().z(), 0);
        assert_eq!(primes_in(1_000_000, 1_000_100).unwrap().z(), 6);
        assert!(primes_in(10, 8).is_err());
        assert_eq!(primes_in(0, 3).unwrap().primes, [2, 3]);
    }

    #[test]
    fn sieve_matches_trial_division_across_segments() {
        let w = primes_in(60_000, 200_000).unwrap();
        let expect: Vec<u64> = (60_000..=200_000).filter(|&n| is_prime(n)).collect();
        assert_eq!(w.primes, expect);
    }

    #[test]
    fn scale_windows() {
        let w = PrimeWindow::for_scale(16f64.powf(0.4)).unwrap();
        assert_eq!((w.lo, w.hi), (2, 3));
        assert_eq!(w.primes, [2, 3]);
        assert!(PrimeWindow::for_scale(1.5).unwrap().is_empty());
    }

    #[test]
    fn totient() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(4), 2);
        assert_eq!(euler_phi(5), 4);
        assert_eq!(euler_phi(36), 12);
    }
}
