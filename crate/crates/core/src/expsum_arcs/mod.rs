//! Exponential sums over k-th powers, arc dissections and moments.
//!
//! A sum is stored as aggregated `(frequency, multiplicity)` pairs, so
//! `f(α) = Σ mult · e(freq · α)`. All phases go through [`crate::phase`],
//! which reduces `freq · α` modulo 1 exactly.

mod arcs;
mod moments;

pub use arcs::{classify, classify_scan, Arc, ArcDissection, Class, Which};
pub use moments::{
    arc_moment, exact_count, exact_moment, w_exponent, weyl_ratio, ArcMoment, ExactMoment, Factor, MomentSpec,
    Region, SamplingPolicy, WExponent, WeylRatio, DEFAULT_GRID_BUDGET,
};

use crate::error::{domain, Error, Result};
use crate::phase::{frac_mul, unit};
use crate::sieve::primes_in;
use alloc::format;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

/// What a sum ranges over.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum SumKind {
    /// `Σ_{x ≤ P} e(αx^k)`
    Full { p: u64, k: u32 },
    /// `Σ_{x ∈ X} e(αx^k)`
    Smooth { k: u32, size: usize },
    /// `Σ_{x ∈ X} e(α p^k x^k)`
    SinglePrime { k: u32, p: u64 },
    /// `Σ_{X/2 < p ≤ X} Σ_{x ∈ inner} e(α p^k x^k)` with `X = ⌊P^{1/2}⌋`
    PrimeSmooth { k: u32, p: f64, x: u64, primes: usize },
    Custom,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExpSum {
    pub kind: SumKind,
    terms: Vec<(u64, u64)>,
}

fn kth(x: u64, k: u32) -> Result<u64> {
    x.checked_pow(k)
        .ok_or_else(|| Error::Overflow(format!("{x}^{k} exceeds u64")))
}

impl ExpSum {
    /// Aggregates `(frequency, multiplicity)` pairs; zero multiplicities are dropped.
    pub fn from_terms(kind: SumKind, mut terms: Vec<(u64, u64)>) -> Self {
        terms.retain(|t| t.1 > 0);
        terms.sort_unstable();
        terms.dedup_by(|b, a| {
            if a.0 == b.0 {
                a.1 += b.1;
                true
            } else {
                false
            }
        });
        Self { kind, terms }
    }

    pub fn full(p: u64, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(domain("k must be positive"));
        }
        let terms = (1..=p).map(|x| Ok((kth(x, k)?, 1))).collect::<Result<_>>()?;
        Ok(Self::from_terms(SumKind::Full { p, k }, terms))
    }

    /// Sum over a set (duplicates are ignored).
    pub fn smooth(set: &[u64], k: u32) -> Result<Self> {
        let mut set = set.to_vec();
        set.sort_unstable();
        set.dedup();
        let terms = set.iter().map(|&x| Ok((kth(x, k)?, 1))).collect::<Result<_>>()?;
        Ok(Self::from_terms(SumKind::Smooth { k, size: set.len() }, terms))
    }

    pub fn single_prime(set: &[u64], p: u64, k: u32) -> Result<Self> {
        let pk = kth(p, k)?;
        let mut set = set.to_vec();
        set.sort_unstable();
        set.dedup();
        let terms = set
            .iter()
            .map(|&x| {
                kth(x, k)?
                    .checked_mul(pk)
                    .map(|v| (v, 1))
                    .ok_or_else(|| Error::Overflow(format!("({p}·{x})^{k} exceeds u64")))
            })
            .collect::<Result<_>>()?;
        Ok(Self::from_terms(SumKind::SinglePrime { k, p }, terms))
    }

    /// The hybrid sum over primes `p ∈ (X/2, X]` and `x ∈ inner`, `X = ⌊√P⌋`.
    pub fn prime_smooth(k: u32, p: f64, inner: &[u64]) -> Result<Self> {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(domain(format!("P = {p} must be at least 1")));
        }
        let x = p.sqrt().floor() as u64;
        let primes = if x >= 2 { primes_in(x / 2 + 1, x)?.primes } else { Vec::new() };
        let mut inner = inner.to_vec();
        inner.sort_unstable();
        inner.dedup();
        let mut terms = Vec::with_capacity(primes.len() * inner.len());
        for &q in &primes {
            for &y in &inner {
                let v = q
                    .checked_mul(y)
                    .ok_or_else(|| Error::Overflow(format!("{q}·{y} exceeds u64")))?;
                terms.push((kth(v, k)?, 1));
            }
        }
        Ok(Self::from_terms(
            SumKind::PrimeSmooth {
                k,
                p,
                x,
                primes: primes.len(),
            },
            terms,
        ))
    }

    pub fn terms(&self) -> &[(u64, u64)] {
        &self.terms
    }

    /// Largest frequency, known before any evaluation.
    pub fn max_frequency(&self) -> u64 {
        self.terms.last().map_or(0, |t| t.0)
    }

    pub fn min_frequency(&self) -> u64 {
        self.terms.first().map_or(0, |t| t.0)
    }

    /// Number of summands counted with multiplicity; `|f(α)|` never exceeds it.
    pub fn term_count(&self) -> u64 {
        self.terms.iter().map(|t| t.1).sum()
    }

    pub fn eval(&self, alpha: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|&(n, m)| unit(frac_mul(n, alpha)) * m as f64)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_examples() {
        let f = ExpSum::full(7, 3).unwrap();
        assert!((f.eval(0.0) - Complex64::new(7.0, 0.0)).norm() < 1e-12);
        let f = ExpSum::full(4, 2).unwrap();
        assert!(f.eval(0.5).norm() < 1e-12);
        let f = ExpSum::full(10, 3).unwrap();
        for a in [0.123, 0.377, 0.9] {
            assert!((f.eval(a) - f.eval(a + 1.0)).norm() < 1e-10);
            assert_eq!(f.eval(-a), f.eval(a).conj());
            assert!(f.eval(a).norm() <= f.term_count() as f64 + 1e-9);
        }
        assert_eq!(f.max_frequency(), 1000);
    }

    #[test]
    fn prime_smooth_at_zero() {
        let inner = [1u64, 2, 3, 4, 6];
        let h = ExpSum::prime_smooth(2, 100.0, &inner).unwrap();
        // X = 10, primes in (5, 10] = {7}
        assert!(matches!(h.kind, SumKind::PrimeSmooth { x: 10, primes: 1, .. }));
        assert_eq!(h.term_count(), 5);
        assert!((h.eval(0.0).re - 5.0).abs() < 1e-12);
        let h = ExpSum::prime_smooth(2, 400.0, &inner).unwrap();
        // X = 20, primes {11, 13, 17, 19}
        assert_eq!(h.term_count(), 4 * 5);
    }

    #[test]
    fn single_prime_frequencies() {
        let g = ExpSum::single_prime(&[1, 2], 3, 2).unwrap();
        assert_eq!(g.terms(), [(9, 1), (36, 1)]);
        assert!(ExpSum::full(100_000, 4).is_err());
    }
}
