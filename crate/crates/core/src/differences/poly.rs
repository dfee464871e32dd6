use crate::error::{Error, Result};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Integer polynomial, coefficients in ascending degree, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// `x^k`.
    pub fn monomial(k: u32) -> Self {
        let mut coeffs = vec![BigInt::zero(); k as usize];
        coeffs.push(BigInt::one());
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// `−1` for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// `φ(x + t)` by Horner's rule in the ring of polynomials.
    pub fn shift(&self, t: &BigInt) -> Self {
        let mut out: Vec<BigInt> = Vec::with_capacity(self.coeffs.len());
        for c in self.coeffs.iter().rev() {
            // out ← out·(x + t) + c
            out.push(BigInt::zero());
            for i in (1..out.len()).rev() {
                out[i] = &out[i] * t + &out[i - 1];
            }
            out[0] = &out[0] * t + c;
        }
        Self::new(out)
    }

    fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = BigInt::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) - other.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    /// `φ(x + t) − φ(x)`.
    pub fn forward_diff(&self, t: &BigInt) -> Self {
        self.shift(t).sub(self)
    }

    /// `(φ(x + hm) − φ(x)) / m`, checking that `m` divides every coefficient.
    pub fn modified_diff(&self, h: &BigInt, m: &BigInt) -> Result<Self> {
        if m.is_zero() {
            return Err(Error::Domain("modulus m = 0".into()));
        }
        let d = self.forward_diff(&(h * m));
        let mut out = Vec::with_capacity(d.coeffs.len());
        for (i, c) in d.coeffs.iter().enumerate() {
            let (q, r) = c.div_rem(m);
            if !r.is_zero() {
                return Err(Error::Divisibility {
                    degree: i,
                    coefficient: c.to_string(),
                    modulus: m.to_string(),
                });
            }
            out.push(q);
        }
        Ok(Self::new(out))
    }
}

/// `c0 c1 … cd`; the zero polynomial is `0`.
impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for IntPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let coeffs = s
            .split_whitespace()
            .map(|t| {
                t.parse::<BigInt>()
                    .map_err(|_| Error::Domain(alloc::format!("bad coefficient {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if coeffs.is_empty() {
            return Err(Error::Domain(String::from("empty polynomial literal")));
        }
        Ok(Self::new(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn forward_examples() {
        let x2 = IntPolynomial::monomial(2);
        assert_eq!(x2.forward_diff(&b(1)), p(&[1, 2]));
        let x3 = IntPolynomial::monomial(3);
        assert_eq!(x3.forward_diff(&b(1)).forward_diff(&b(1)), p(&[6, 6]));
        assert!(p(&[5]).forward_diff(&b(7)).is_zero());
        assert_eq!(p(&[1, 2, 3]).shift(&b(-1)), p(&[2, -4, 3]));
    }

    #[test]
    fn modified_examples() {
        let x3 = IntPolynomial::monomial(3);
        assert_eq!(x3.modified_diff(&b(1), &b(8)).unwrap(), p(&[64, 24, 3]));
        let x2 = IntPolynomial::monomial(2);
        assert_eq!(x2.modified_diff(&b(2), &b(3)).unwrap(), p(&[12, 4]));
        for k in 1..6 {
            let xk = IntPolynomial::monomial(k);
            assert_eq!(xk.modified_diff(&b(1), &b(1)).unwrap(), xk.forward_diff(&b(1)));
        }
    }

    #[test]
    fn literal_round_trip() {
        let q = p(&[64, 24, 3]);
        assert_eq!(q.to_string(), "64 24 3");
        assert_eq!("64 24 3".parse::<IntPolynomial>().unwrap(), q);
        assert_eq!("0".parse::<IntPolynomial>().unwrap(), IntPolynomial::zero());
        assert_eq!(IntPolynomial::zero().degree(), -1);
        assert!("1 x".parse::<IntPolynomial>().is_err());
    }
}
