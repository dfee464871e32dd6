//! Forward and modified differences, the `Ψ_i` polynomials and the `F_i` sums.
//!
//! `Δ*_1(φ, h; m) = (φ(x + hm) − φ(x))/m`, and `Ψ_i` applies it `i` times to
//! `x^k` with `m_j = p_j^k`. All coefficients are arbitrary-width integers.

mod lemma7;
mod poly;

pub use lemma7::{lemma7_all, lemma7_terms, Counts, Geometry, Lemma7Terms};
pub use poly::IntPolynomial;

use crate::error::{domain, Error, Result};
use crate::phase::{frac_mul_big, unit};
use crate::sieve::{is_prime, PrimeWindow};
use alloc::format;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Pow};

/// Default cap on `F_i` terms.
pub const DEFAULT_TERM_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct DiffChain {
    pub k: u32,
    pub h: Vec<u64>,
    pub p: Vec<u64>,
    /// `m_j = p_j^k`
    pub moduli: Vec<BigInt>,
    /// `Ψ_i`
    pub result: IntPolynomial,
}

/// `k!/(k−i)! · Π h_j`.
pub fn expected_leading(k: u32, h: &[u64]) -> BigInt {
    let falling: BigInt = (0..h.len() as u32).map(|j| BigInt::from(k - j)).product();
    h.iter().fold(falling, |acc, &x| acc * x)
}

/// `Ψ_i(x; h; p^k)` with the degree and leading-coefficient laws checked.
pub fn psi(k: u32, h: &[u64], p: &[u64]) -> Result<DiffChain> {
    if h.len() != p.len() {
        return Err(domain(format!("{} steps but {} primes", h.len(), p.len())));
    }
    if h.len() > k as usize {
        return Err(domain(format!("i = {} exceeds k = {k}", h.len())));
    }
    if let Some(&x) = h.iter().find(|&&x| x == 0) {
        return Err(domain(format!("step h = {x} must be positive")));
    }
    if let Some(&x) = p.iter().find(|&&x| !is_prime(x)) {
        return Err(domain(format!("{x} is not prime")));
    }
    let moduli: Vec<BigInt> = p.iter().map(|&x| BigInt::from(x).pow(k)).collect();
    let mut phi = IntPolynomial::monomial(k);
    for (hj, m) in h.iter().zip(&moduli) {
        phi = phi.modified_diff(&BigInt::from(*hj), m)?;
    }
    let want_degree = (k as usize - h.len()) as isize;
    let want_leading = expected_leading(k, h);
    if phi.degree() != want_degree || phi.leading() != want_leading {
        return Err(Error::Degenerate(format!(
            "Ψ has degree {} and leading {}, expected {want_degree} and {want_leading}",
            phi.degree(),
            phi.leading()
        )));
    }
    Ok(DiffChain {
        k,
        h: h.to_vec(),
        p: p.to_vec(),
        moduli,
        result: phi,
    })
}

/// Ranges of the nested `F_i` sum: `h_j ≤ H_j`, `p_j ∈ 𝒫_j`, `1 ≤ x ≤ x_range`.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelParams {
    pub h_limits: Vec<u64>,
    pub windows: Vec<PrimeWindow>,
    pub x_range: u64,
}

impl LevelParams {
    pub fn level(&self) -> usize {
        self.h_limits.len()
    }

    pub fn term_count(&self) -> u128 {
        let h: u128 = self.h_limits.iter().map(|&x| x as u128).product();
        let p: u128 = self.windows.iter().map(|w| w.z() as u128).product();
        h.saturating_mul(p).saturating_mul(self.x_range as u128)
    }
}

fn odometer(limits: &[usize], idx: &mut [usize]) -> bool {
    for (i, l) in idx.iter_mut().zip(limits) {
        *i += 1;
        if *i < *l {
            return true;
        }
        *i = 0;
    }
    false
}

/// `F_i(α, q) = Σ_h Σ_p Σ_x e(q^k Ψ_i(x; h; p^k) α)`.
pub fn f_i_sum(alpha: f64, q: u64, k: u32, params: &LevelParams, budget: u64) -> Result<Complex64> {
    let i = params.level();
    if params.windows.len() != i {
        return Err(domain(format!("{i} step ranges but {} prime windows", params.windows.len())));
    }
    if params.x_range == 0 || params.h_limits.contains(&0) || params.windows.iter().any(PrimeWindow::is_empty) {
        return Err(domain("every range of F_i must be nonempty"));
    }
    let terms = params.term_count();
    if terms > budget as u128 {
        return Err(Error::Budget {
            what: "f_i_sum",
            estimated: terms,
            limit: budget as u128,
        });
    }
    let qk = BigInt::from(q).pow(k);
    let mut limits: Vec<usize> = params.h_limits.iter().map(|&x| x as usize).collect();
    limits.extend(params.windows.iter().map(|w| w.z()));
    let mut idx = alloc::vec![0usize; 2 * i];
    let mut total = Complex64::new(0.0, 0.0);
    loop {
        let h: Vec<u64> = idx[..i].iter().map(|&j| j as u64 + 1).collect();
        let p: Vec<u64> = idx[i..].iter().zip(&params.windows).map(|(&j, w)| w.primes[j]).collect();
        let chain = psi(k, &h, &p)?;
        let scaled = IntPolynomial::new(chain.result.coeffs().iter().map(|c| c * &qk).collect());
        let mut x = BigInt::one();
        for _ in 0..params.x_range {
            total += unit(frac_mul_big(&scaled.eval(&x), alpha));
            x += 1;
        }
        if !odometer(&limits, &mut idx) {
            break;
        }
    }
    Ok(total)
}
