//! Exponent recursions and the resulting `G(k)` upper bounds.
//!
//! Writing `S_s(P) = P^{λ_s}` for the auxiliary count over the smooth
//! construction, a single product layer with prime scale `P^θ` gives
//!
//! ```text
//! λ_s ≤ (λ_{s-1} + 1 + 2sθ) / (1 + θ),      λ_2 = 2,
//! ```
//!
//! whose exact solution at `θ = 1/k` is
//! `λ_s = (2s − k) + (k − 2)(k/(k+1))^{s−2}`. The multi-level construction
//! couples θ to `Δ(s−1) = λ_{s−1} − (2(s−1) − k)` through a θ-schedule, which
//! drives `Δ(s)` to zero roughly like `2k·exp(−2(s−1)/(k+1))`.
//!
//! All reals are `f64`; every recursion here is a contraction.

use crate::error::{domain, Error, Result};
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

/// Lower end of the `k` range considered "sufficiently large" for the bounds.
pub const LARGE_K_THRESHOLD: u32 = 10;

fn check_k(k: u32) -> Result<()> {
    if k < 3 {
        return Err(domain(alloc::format!("k = {k} < 3")));
    }
    Ok(())
}

fn check_s(s: u32) -> Result<()> {
    if s < 2 {
        return Err(domain(alloc::format!("s = {s} < 2")));
    }
    Ok(())
}

fn check_theta(theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(domain(alloc::format!("theta = {theta} outside (0, 1]")));
    }
    Ok(())
}

/// Validated `(k, s, θ)` triple.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundParams {
    pub k: u32,
    pub s: u32,
    pub theta: f64,
}

impl BoundParams {
    pub fn new(k: u32, s: u32, theta: f64) -> Result<Self> {
        check_k(k)?;
        check_s(s)?;
        check_theta(theta)?;
        Ok(Self { k, s, theta })
    }
}

/// Which θ enters the coupled `Δ(s)` step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ThetaVariant {
    /// `θ = 1/(k + Δ(s−1))`, the fixed point of the schedule.
    Truncated,
    /// `θ = θ_1` of the full schedule, including the geometric correction.
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ThetaPolicy {
    Fixed(f64),
    Coupled(ThetaVariant),
}

/// `λ_s` and `Δ(s)` for `s = 2..=s_max` under one θ-policy.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExponentTable {
    pub k: u32,
    pub policy: ThetaPolicy,
    /// `lambda[i]` is `λ_{i+2}`.
    pub lambda: Vec<f64>,
    /// `delta[i]` is `Δ(i+2)`.
    pub delta: Vec<f64>,
    /// `theta_used[i]` is the θ applied in the step producing `s = i+3`.
    pub theta_used: Vec<f64>,
}

impl ExponentTable {
    pub fn s_max(&self) -> u32 {
        self.lambda.len() as u32 + 1
    }

    pub fn lambda_at(&self, s: u32) -> Option<f64> {
        s.checked_sub(2).and_then(|i| self.lambda.get(i as usize)).copied()
    }

    pub fn delta_at(&self, s: u32) -> Option<f64> {
        s.checked_sub(2).and_then(|i| self.delta.get(i as usize)).copied()
    }

    pub fn theta_at(&self, s: u32) -> Option<f64> {
        s.checked_sub(3).and_then(|i| self.theta_used.get(i as usize)).copied()
    }

    /// Iterates `(s, λ_s, Δ(s))`.
    pub fn rows(&self) -> impl Iterator<Item = (u32, f64, f64)> + '_ {
        self.lambda
            .iter()
            .zip(&self.delta)
            .enumerate()
            .map(|(i, (&l, &d))| (i as u32 + 2, l, d))
    }
}

/// Closed form `(2s − k) + (k − 2)(k/(k+1))^{s−2}`.
pub fn lambda_closed(k: u32, s: u32) -> Result<f64> {
    check_k(k)?;
    check_s(s)?;
    let kf = k as f64;
    let ratio = kf / (kf + 1.0);
    Ok((2.0 * s as f64 - kf) + (kf - 2.0) * ratio.powi(s as i32 - 2))
}

/// Fixed-θ recursion `λ_s = (λ_{s−1} + 1 + 2sθ)/(1 + θ)` seeded with `λ_2 = 2`.
pub fn lambda_iterate(k: u32, s_max: u32, theta: f64) -> Result<ExponentTable> {
    check_k(k)?;
    check_s(s_max)?;
    check_theta(theta)?;
    let kf = k as f64;
    let n = (s_max - 1) as usize;
    let mut lambda = Vec::with_capacity(n);
    let mut delta = Vec::with_capacity(n);
    let mut theta_used = Vec::with_capacity(n.saturating_sub(1));
    lambda.push(2.0);
    delta.push(kf - 2.0);
    for s in 3..=s_max {
        let prev = *lambda.last().unwrap();
        let next = (prev + 1.0 + 2.0 * s as f64 * theta) / (1.0 + theta);
        lambda.push(next);
        delta.push(next - (2.0 * s as f64 - kf));
        theta_used.push(theta);
    }
    Ok(ExponentTable {
        k,
        policy: ThetaPolicy::Fixed(theta),
        lambda,
        delta,
        theta_used,
    })
}

/// Data of the σ-optimisation behind the prime-smooth sum estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SigmaData {
    pub k: u32,
    /// `β = (k−2)(k+1)²/k²`.
    pub beta: f64,
    /// Positive root of `(1+λ)β = e^λ`.
    pub lambda_root: f64,
    /// `σ̂ = log(1+1/k) / (4(1+λ))`.
    pub sigma_hat: f64,
    /// `μ = log((k+1)/k)`.
    pub mu: f64,
    /// Continuous maximiser `s* = λ / log(1+1/k)` of `σ(k, s)`.
    pub s_star: f64,
}

impl SigmaData {
    pub fn residual(&self) -> f64 {
        ((1.0 + self.lambda_root) * self.beta - self.lambda_root.exp()).abs()
    }
}

const ROOT_TOL: f64 = 1e-12;

/// Solves `(1+λ)β = e^λ` by bisection on `(0, 4 log k + 10]`.
pub fn solve_sigma(k: u32) -> Result<SigmaData> {
    check_k(k)?;
    let kf = k as f64;
    let beta = (kf - 2.0) * (kf + 1.0) * (kf + 1.0) / (kf * kf);
    let g = |l: f64| (1.0 + l) * beta - l.exp();
    let (mut lo, mut hi) = (0.0_f64, 4.0 * kf.ln() + 10.0);
    // g(0) = β − 1 and g → −∞; the open end at 0 needs g(0) > 0
    if !(g(lo) > 0.0 && g(hi) < 0.0) {
        return Err(Error::NoRoot { lo, hi });
    }
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        let gm = g(mid);
        if gm == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if gm > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi || g(0.5 * (lo + hi)).abs() < ROOT_TOL {
            break;
        }
    }
    let lambda_root = 0.5 * (lo + hi);
    let mu = ((kf + 1.0) / kf).ln();
    Ok(SigmaData {
        k,
        beta,
        lambda_root,
        sigma_hat: (1.0 + 1.0 / kf).ln() / (4.0 * (1.0 + lambda_root)),
        mu,
        s_star: lambda_root / (1.0 + 1.0 / kf).ln(),
    })
}

/// `σ(k, s) = (1 − (k−2)(k/(k+1))^{s−2}) / 4s`; may be non-positive for small `s`.
pub fn sigma_of_s(k: u32, s: u32) -> Result<f64> {
    check_k(k)?;
    check_s(s)?;
    let kf = k as f64;
    Ok((1.0 - (kf - 2.0) * (kf / (kf + 1.0)).powi(s as i32 - 2)) / (4.0 * s as f64))
}

/// The per-level exponents `θ_1..θ_k` for a given `Δ(s−1)`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ThetaSchedule {
    pub k: u32,
    pub delta_prev: f64,
    /// `thetas[j-1]` is `θ_j`.
    pub thetas: Vec<f64>,
}

impl ThetaSchedule {
    pub fn theta(&self, j: usize) -> f64 {
        self.thetas[j - 1]
    }

    /// Slope `a = (k − Δ)/2k` of the level recurrence `θ_j = a·θ_{j+1} + b`.
    pub fn slope(&self) -> f64 {
        let kf = self.k as f64;
        (kf - self.delta_prev) / (2.0 * kf)
    }

    /// Intercept `b = 1/2k`.
    pub fn intercept(&self) -> f64 {
        0.5 / self.k as f64
    }

    /// `|θ_j − (a·θ_{j+1} + b)|` for `j = 1..k−1`.
    pub fn recurrence_residuals(&self) -> Vec<f64> {
        let (a, b) = (self.slope(), self.intercept());
        self.thetas
            .windows(2)
            .map(|w| (w[0] - (a * w[1] + b)).abs())
            .collect()
    }
}

/// `θ_j = 1/(k+Δ) + (1/k − 1/(k+Δ))·((k−Δ)/2k)^{k−j}`.
pub fn theta_schedule(k: u32, delta_prev: f64) -> Result<ThetaSchedule> {
    check_k(k)?;
    let kf = k as f64;
    if !(delta_prev > 0.0 && delta_prev < kf) {
        return Err(domain(alloc::format!(
            "delta_prev = {delta_prev} outside (0, {k})"
        )));
    }
    let fixed = 1.0 / (kf + delta_prev);
    let base = (kf - delta_prev) / (2.0 * kf);
    let thetas = (1..=k)
        .map(|j| {
            if j == k {
                1.0 / kf
            } else {
                fixed + (1.0 / kf - fixed) * base.powi((k - j) as i32)
            }
        })
        .collect();
    Ok(ThetaSchedule {
        k,
        delta_prev,
        thetas,
    })
}

/// `2k·exp(−2(s−1)/(k+1))`, the closed-form envelope for `Δ(s)`.
pub fn delta_bound(k: u32, s: u32) -> f64 {
    let kf = k as f64;
    2.0 * kf * (-2.0 * (s as f64 - 1.0) / (kf + 1.0)).exp()
}

/// Coupled iteration with the truncated θ.
pub fn delta_iterate(k: u32, s_max: u32) -> Result<ExponentTable> {
    delta_iterate_with(k, s_max, ThetaVariant::Truncated)
}

/// `Δ(2) = k − 2`, then `Δ(s) = (Δ(s−1) + kθ − 1)/(1 + θ)` with θ picked by `variant`.
pub fn delta_iterate_with(k: u32, s_max: u32, variant: ThetaVariant) -> Result<ExponentTable> {
    check_k(k)?;
    check_s(s_max)?;
    let kf = k as f64;
    let n = (s_max - 1) as usize;
    let mut delta = Vec::with_capacity(n);
    let mut theta_used = Vec::with_capacity(n.saturating_sub(1));
    delta.push(kf - 2.0);
    for _ in 3..=s_max {
        let prev = *delta.last().unwrap();
        // kθ − 1 is formed in closed form; the direct difference cancels once Δ is tiny
        let (theta, k_theta_minus_one) = match variant {
            ThetaVariant::Truncated => (1.0 / (kf + prev), -prev / (kf + prev)),
            ThetaVariant::Full => {
                let schedule = theta_schedule(k, prev)?;
                let damping = 1.0 - schedule.slope().powi(k as i32 - 1);
                (schedule.theta(1), -prev * damping / (kf + prev))
            }
        };
        delta.push((prev + k_theta_minus_one) / (1.0 + theta));
        theta_used.push(theta);
    }
    let lambda = delta
        .iter()
        .enumerate()
        .map(|(i, d)| d + (2.0 * (i as f64 + 2.0) - kf))
        .collect();
    Ok(ExponentTable {
        k,
        policy: ThetaPolicy::Coupled(variant),
        lambda,
        delta,
        theta_used,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Theorem {
    /// Single-θ construction: `G(k) ≤ 7 + 2v + 2⌈(k−2)/(2σ̂)·(k/(k+1))^v⌉`.
    T1,
    /// Multi-level construction: `G(k) ≤ 3 + 2u + 2⌈Δ(u)/(2σ̂)⌉`.
    T2,
}

/// Integer choices behind a `G(k)` bound.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum GkChoice {
    T1 {
        v: u32,
        /// `t = 1 + ceil_term`.
        t: u64,
        ceil_term: u64,
        scan_hi: u32,
    },
    T2 {
        /// `u = 1 + ⌈(k+1)/2·log(1/σ̂)⌉`.
        u: u32,
        ceil_term: u64,
        delta_envelope: f64,
        /// `Δ(u)` from the coupled iteration (truncated θ).
        delta_exact: f64,
        /// `Δ(u)` from the coupled iteration with the full θ-schedule.
        delta_exact_full: f64,
        bound_exact: u64,
        scan_lo: u32,
        scan_hi: u32,
        /// Minimum over the scan window with the envelope `Δ(u)`.
        scan_u: u32,
        scan_bound: u64,
        /// Minimum over the scan window with the iterated `Δ(u)`.
        scan_exact_u: u32,
        scan_exact_bound: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GkResult {
    pub k: u32,
    pub theorem: Theorem,
    pub bound: u64,
    pub choice: GkChoice,
    /// Calculus optimum before rounding (`v` for T1, `u` for T2).
    pub continuous_optimum: f64,
    /// Leading term without the error term: `2k(log(k log k)+1+log 2)` or `k log(k log k)`.
    pub asymptote: f64,
    pub sigma: SigmaData,
    /// Set when `k` is below [`LARGE_K_THRESHOLD`].
    pub small_k: bool,
}

impl GkResult {
    /// Smallest bound among all variants computed (iterated `Δ`, scanned choice).
    pub fn sharpest(&self) -> u64 {
        match self.choice {
            GkChoice::T1 { .. } => self.bound,
            GkChoice::T2 {
                bound_exact,
                scan_bound,
                scan_exact_bound,
                ..
            } => self.bound.min(bound_exact).min(scan_bound).min(scan_exact_bound),
        }
    }
}

fn ceil_u64(x: f64) -> u64 {
    let c = x.ceil();
    if c <= 0.0 {
        0
    } else {
        c as u64
    }
}

/// Value of the T1 formula at `v`: `(bound, ceil_term)`.
pub fn t1_formula(k: u32, sigma_hat: f64, v: u32) -> (u64, u64) {
    let kf = k as f64;
    let term = ceil_u64((kf - 2.0) / (2.0 * sigma_hat) * (kf / (kf + 1.0)).powi(v as i32));
    (7 + 2 * v as u64 + 2 * term, term)
}

/// Value of the T2 formula at `u` for a given `Δ(u)`: `(bound, ceil_term)`.
pub fn t2_formula(u: u32, delta_u: f64, sigma_hat: f64) -> (u64, u64) {
    let term = ceil_u64(delta_u / (2.0 * sigma_hat));
    (3 + 2 * u as u64 + 2 * term, term)
}

fn argmin<I: Iterator<Item = (u32, u64)>>(it: I) -> (u32, u64) {
    let mut best = (0, u64::MAX);
    for (x, b) in it {
        if b < best.1 {
            best = (x, b);
        }
    }
    best
}

/// Evaluates the `G(k)` bound of the chosen theorem.
///
/// T1 scans `v ∈ [0, ⌈4·v*⌉]` and keeps the first minimiser. T2 evaluates the
/// prescribed `u` with the envelope for `Δ(u)` (the headline `bound`), and
/// also records the iterated `Δ(u)` and scans `u` over `u ± 3k`.
pub fn gk_bound(k: u32, theorem: Theorem) -> Result<GkResult> {
    check_k(k)?;
    let sigma = solve_sigma(k)?;
    let kf = k as f64;
    let sh = sigma.sigma_hat;
    let small_k = k < LARGE_K_THRESHOLD;
    match theorem {
        Theorem::T1 => {
            let mu = sigma.mu;
            let opt = (mu * (kf - 2.0) / (2.0 * sh)).ln() / mu;
            let scan_hi = (4.0 * opt.max(1.0)).ceil() as u32;
            let (v, bound) = argmin((0..=scan_hi).map(|v| (v, t1_formula(k, sh, v).0)));
            let ceil_term = t1_formula(k, sh, v).1;
            Ok(GkResult {
                k,
                theorem,
                bound,
                choice: GkChoice::T1 {
                    v,
                    t: 1 + ceil_term,
                    ceil_term,
                    scan_hi,
                },
                continuous_optimum: opt,
                asymptote: 2.0 * kf * ((kf * kf.ln()).ln() + 1.0 + 2f64.ln()),
                sigma,
                small_k,
            })
        }
        Theorem::T2 => {
            let opt = 1.0 + (kf + 1.0) / 2.0 * (1.0 / sh).ln();
            let u = opt.ceil() as u32;
            let scan_lo = u.saturating_sub(3 * k).max(2);
            let scan_hi = u + 3 * k;
            let exact = delta_iterate(k, scan_hi)?;
            let exact_full = delta_iterate_with(k, u, ThetaVariant::Full)?;
            let delta_envelope = delta_bound(k, u);
            let delta_exact = exact.delta_at(u).unwrap();
            let (bound, ceil_term) = t2_formula(u, delta_envelope, sh);
            let bound_exact = t2_formula(u, delta_exact, sh).0;
            let (scan_u, scan_bound) = argmin(
                (scan_lo..=scan_hi).map(|uu| (uu, t2_formula(uu, delta_bound(k, uu), sh).0)),
            );
            let (scan_exact_u, scan_exact_bound) = argmin(
                (scan_lo..=scan_hi).map(|uu| (uu, t2_formula(uu, exact.delta_at(uu).unwrap(), sh).0)),
            );
            Ok(GkResult {
                k,
                theorem,
                bound,
                choice: GkChoice::T2 {
                    u,
                    ceil_term,
                    delta_envelope,
                    delta_exact,
                    delta_exact_full: exact_full.delta_at(u).unwrap(),
                    bound_exact,
                    scan_lo,
                    scan_hi,
                    scan_u,
                    scan_bound,
                    scan_exact_u,
                    scan_exact_bound,
                },
                continuous_optimum: opt,
                asymptote: kf * (kf * kf.ln()).ln(),
                sigma,
                small_k,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_closed_examples() {
        assert_eq!(lambda_closed(3, 2).unwrap(), 2.0);
        assert_eq!(lambda_closed(5, 2).unwrap(), 2.0);
        assert!((lambda_closed(3, 3).unwrap() - 3.75).abs() < 1e-15);
        assert!(lambda_closed(2, 3).is_err());
        assert!(lambda_closed(3, 1).is_err());
    }

    #[test]
    fn lambda_iterate_examples() {
        let t = lambda_iterate(3, 3, 1.0 / 3.0).unwrap();
        assert!((t.lambda_at(3).unwrap() - 3.75).abs() < 1e-12);
        assert_eq!(lambda_iterate(3, 2, 0.7).unwrap().lambda, [2.0]);
        let t = lambda_iterate(10, 50, 0.1).unwrap();
        for s in 2..=50 {
            assert!((t.lambda_at(s).unwrap() - lambda_closed(10, s).unwrap()).abs() < 1e-9);
        }
        assert!(lambda_iterate(3, 5, 0.0).is_err());
        assert!(lambda_iterate(3, 5, 1.5).is_err());
    }

    #[test]
    fn sigma_for_cubes() {
        let d = solve_sigma(3).unwrap();
        // mpmath reference values
        assert!((d.lambda_root - 1.486_065_475_23).abs() < 1e-9);
        assert!((d.sigma_hat - 0.028_929_454_525_5).abs() < 1e-12);
        assert!(d.residual() < 1e-9);
        assert!((d.beta - 16.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn lambda_root_tracks_log_k_log_log_k() {
        for k in [50u32, 100, 500] {
            let d = solve_sigma(k).unwrap();
            let kf = k as f64;
            let r = d.lambda_root / (kf.ln() + kf.ln().ln());
            assert!(r > 0.8 && r < 1.2, "k={k} ratio {r}");
        }
    }

    #[test]
    fn sigma_of_s_examples_and_maximum() {
        assert_eq!(sigma_of_s(3, 2).unwrap(), 0.0);
        assert!((sigma_of_s(3, 3).unwrap() - 1.0 / 48.0).abs() < 1e-15);
        for k in [3u32, 10, 50] {
            let sh = solve_sigma(k).unwrap().sigma_hat;
            let best = (2..2000).map(|s| sigma_of_s(k, s).unwrap()).fold(f64::MIN, f64::max);
            assert!(best <= sh * (1.0 + 1e-12));
            assert!(best >= 0.95 * sh, "k={k}: {best} vs {sh}");
        }
    }

    #[test]
    fn theta_schedule_examples() {
        let t = theta_schedule(3, 1.0).unwrap();
        assert_eq!(t.theta(3), 1.0 / 3.0);
        assert!((t.theta(1) - 7.0 / 27.0).abs() < 1e-15);
        assert!(t.recurrence_residuals().iter().all(|r| *r < 1e-12));
        assert!(t.thetas.windows(2).all(|w| w[0] < w[1]));
        assert!(theta_schedule(3, 3.0).is_err());
        assert!(theta_schedule(3, 0.0).is_err());
    }

    #[test]
    fn delta_iterate_examples() {
        let t = delta_iterate(3, 3).unwrap();
        assert_eq!(t.delta_at(2), Some(1.0));
        assert!((t.delta_at(3).unwrap() - 0.6).abs() < 1e-15);
        assert_eq!(t.theta_at(3), Some(0.25));
        assert_eq!(t.lambda_at(2), Some(2.0));
        let t = delta_iterate(5, 50).unwrap();
        for s in 2..=50 {
            assert!(t.delta_at(s).unwrap() <= delta_bound(5, s));
        }
    }

    #[test]
    fn coupled_delta_decays() {
        for variant in [ThetaVariant::Truncated, ThetaVariant::Full] {
            for k in [3u32, 7, 20] {
                let t = delta_iterate_with(k, 20 * k, variant).unwrap();
                assert!(t.delta.windows(2).all(|w| w[1] < w[0] && w[1] > 0.0));
                for (s, l, d) in t.rows() {
                    assert!((l - d - (2.0 * s as f64 - k as f64)).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn full_theta_never_sharper() {
        let a = delta_iterate_with(10, 60, ThetaVariant::Truncated).unwrap();
        let b = delta_iterate_with(10, 60, ThetaVariant::Full).unwrap();
        for (x, y) in a.delta.iter().zip(&b.delta) {
            assert!(x <= y);
        }
    }

    // Regression values from an independent 40-digit evaluation of the formulas.
    #[test]
    fn gk_pinned_values() {
        let t1 = gk_bound(10, Theorem::T1).unwrap();
        assert_eq!(t1.bound, 121);
        assert!(matches!(t1.choice, GkChoice::T1 { v: 42, .. }));
        assert!((t1.continuous_optimum - 45.654_286).abs() < 1e-5);
        let t2 = gk_bound(10, Theorem::T2).unwrap();
        assert_eq!(t2.bound, 83);
        match t2.choice {
            GkChoice::T2 { u, bound_exact, .. } => {
                assert_eq!(u, 31);
                assert_eq!(bound_exact, 77);
            }
            _ => unreachable!(),
        }
        assert_eq!(gk_bound(20, Theorem::T1).unwrap().bound, 267);
        assert_eq!(gk_bound(20, Theorem::T2).unwrap().bound, 175);
        assert_eq!(gk_bound(50, Theorem::T1).unwrap().bound, 765);
        assert_eq!(gk_bound(50, Theorem::T2).unwrap().bound, 473);
        assert!(gk_bound(3, Theorem::T1).unwrap().small_k);
        assert!(!t1.small_k);
    }

    #[test]
    fn t1_scan_is_optimal_under_widening() {
        for k in [5u32, 10, 30] {
            let r = gk_bound(k, Theorem::T1).unwrap();
            let sh = r.sigma.sigma_hat;
            let GkChoice::T1 { scan_hi, .. } = r.choice else {
                unreachable!()
            };
            let wide = (0..=2 * scan_hi).map(|v| t1_formula(k, sh, v).0).min().unwrap();
            assert_eq!(wide, r.bound);
        }
    }
}
