//! Exact phase reduction for `e(nα) = exp(2πi·nα)`.
//!
//! A finite `f64` is a dyadic rational `±m·2^e`, so the fractional part of
//! `n·α` can be taken in integer arithmetic before anything is rounded. This
//! keeps sums with frequencies far beyond `2^53` accurate, and makes
//! `e(n·(−α))` the exact conjugate of `e(nα)`.

use core::f64::consts::TAU;
use num_bigint::{BigInt, BigUint, Sign};
use num_complex::Complex64;
use num_integer::Integer;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{One, ToPrimitive, Zero};

/// `(negative, mantissa, exponent)` with `x = ±mantissa·2^exponent`.
pub fn decompose(x: f64) -> (bool, u64, i32) {
    let bits = x.to_bits();
    let negative = bits >> 63 == 1;
    let exp_bits = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    if exp_bits == 0 {
        (negative, frac, -1074)
    } else {
        (negative, frac | (1u64 << 52), exp_bits - 1075)
    }
}

fn scaled(r: f64, shift: i32) -> f64 {
    // r·2^-shift without overflowing the power for large shifts
    let mut v = r;
    let mut sh = shift;
    while sh > 0 {
        let step = sh.min(1000);
        v *= 2f64.powi(-step);
        sh -= step;
    }
    v
}

/// Signed fractional part of `n·α`: in `[0, 1)` for `α ≥ 0`, in `(−1, 0]` for `α < 0`.
pub fn frac_mul(n: u64, alpha: f64) -> f64 {
    debug_assert!(alpha.is_finite());
    let (negative, m, e) = decompose(alpha);
    if n == 0 || m == 0 || e >= 0 {
        return 0.0;
    }
    let shift = -e;
    let prod = n as u128 * m as u128;
    let r = if shift >= 128 {
        scaled(prod as f64, shift)
    } else {
        let rem = prod & ((1u128 << shift) - 1);
        scaled(rem as f64, shift)
    };
    if negative {
        -r
    } else {
        r
    }
}

/// [`frac_mul`] for arbitrary-width signed frequencies.
pub fn frac_mul_big(n: &BigInt, alpha: f64) -> f64 {
    let (negative, m, e) = decompose(alpha);
    if n.is_zero() || m == 0 || e >= 0 {
        return 0.0;
    }
    let shift = (-e) as usize;
    let modulus = BigInt::one() << shift;
    let r = (n * BigInt::from(m)).mod_floor(&modulus);
    let (_, mag): (Sign, BigUint) = r.into_parts();
    let r = if shift > 64 {
        let top = (mag >> (shift - 64)).to_f64().unwrap_or(0.0);
        scaled(top, 64)
    } else {
        scaled(mag.to_f64().unwrap_or(0.0), shift as i32)
    };
    if negative {
        -r
    } else {
        r
    }
}

/// `e(θ) = exp(2πiθ)`.
#[inline]
pub fn unit(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * theta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_reduction_is_exact() {
        assert_eq!(frac_mul(3, 0.5), 0.5);
        assert_eq!(frac_mul(4, 0.5), 0.0);
        assert_eq!(frac_mul(5, -0.25), -0.25);
        assert_eq!(frac_mul(7, 3.0), 0.0);
        // 2^60 + 1 times 2^-60 has fractional part 2^-60
        let n = (1u64 << 60) + 1;
        assert_eq!(frac_mul(n, 2f64.powi(-60)), 2f64.powi(-60));
    }

    #[test]
    fn big_matches_small() {
        for &a in &[0.1, 0.333, -0.7, 1e-9, 123.456] {
            for n in [1u64, 17, 1 << 40, u64::MAX] {
                let x = frac_mul(n, a);
                let y = frac_mul_big(&BigInt::from(n), a);
                assert!((x - y).abs() < 1e-15, "{n} {a}: {x} vs {y}");
            }
        }
        let neg = frac_mul_big(&BigInt::from(-3), 0.25);
        assert!((unit(neg) - unit(0.25)).norm() < 1e-15);
    }

    #[test]
    fn conjugate_phase() {
        let a = 0.371_234_5;
        for n in [1u64, 1000, 123_456_789] {
            assert_eq!(unit(frac_mul(n, -a)), unit(frac_mul(n, a)).conj());
        }
    }
}
