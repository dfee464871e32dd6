//! Recursive product sets `ℰ(P)`.
//!
//! Single mode multiplies a base interval by primes of scale `P^θ`, layer by
//! layer, so that the top set has size parameter `P_top`. Multi mode follows a
//! θ-schedule: `Z_i = P^{θ_i}`, `P_{i+1} = P_i / Z_{i+1}`, the innermost set is
//! the full interval `[1, ⌊P_k⌋]`, and each level multiplies by primes in
//! `[Z_{i+1}/2, Z_{i+1}]` that are coprime to the element.
//!
//! Sets are deduplicated; the number of discarded duplicate products is kept
//! in `collision_count`. Elements are `u64` with checked arithmetic.

use crate::bound_engine::ThetaSchedule;
use crate::error::{domain, Error, Result};
use crate::sieve::{euler_phi, PrimeWindow};
use alloc::format;
use alloc::vec::Vec;
use num_integer::Integer;
#[allow(unused_imports)]
use num_traits::Float;

const LIMIT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum SmoothMode {
    Single { theta: f64, levels: u32 },
    Multi { schedule: ThetaSchedule },
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SmoothSpec {
    pub k: u32,
    pub mode: SmoothMode,
    /// Size parameter of the final set (`P̃` in single mode, `P_0` in multi mode).
    pub p_top: f64,
    /// The innermost set is `{1, …, base_floor}`.
    pub base_floor: u64,
    /// Single mode only: θ sits at the limit `1/k` rather than strictly above it.
    pub theta_at_limit: bool,
}

impl SmoothSpec {
    /// Single-θ construction with `levels` product layers.
    ///
    /// `base_floor = ⌊P_top / Π(window midpoints)⌋`, at least 1. Requires
    /// `θ ≥ 1/k`; equality is accepted and flagged.
    pub fn single(k: u32, theta: f64, levels: u32, p_top: f64) -> Result<Self> {
        if k < 2 {
            return Err(domain(format!("k = {k} < 2")));
        }
        if !(theta > 0.0 && theta <= 1.0) {
            return Err(domain(format!("theta = {theta} outside (0, 1]")));
        }
        let limit = 1.0 / k as f64;
        if theta < limit - LIMIT_TOL {
            return Err(domain(format!("theta = {theta} below 1/k = {limit}")));
        }
        if !(p_top >= 1.0 && p_top.is_finite()) {
            return Err(domain(format!("P = {p_top} < 1")));
        }
        let mut spec = Self {
            k,
            mode: SmoothMode::Single { theta, levels },
            p_top,
            base_floor: 1,
            theta_at_limit: (theta - limit).abs() <= LIMIT_TOL,
        };
        let mids: f64 = spec
            .layer_scales()
            .iter()
            .map(|&z| PrimeWindow::nominal_midpoint(z))
            .product();
        spec.base_floor = ((p_top / mids).floor() as u64).max(1);
        Ok(spec)
    }

    /// Multi-level construction driven by a θ-schedule.
    pub fn multi(schedule: ThetaSchedule, p: f64) -> Result<Self> {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(domain(format!("P = {p} < 1")));
        }
        let k = schedule.k;
        let mut spec = Self {
            k,
            mode: SmoothMode::Multi { schedule },
            p_top: p,
            base_floor: 0,
            theta_at_limit: false,
        };
        let innermost = *spec.level_sizes().last().unwrap();
        spec.base_floor = innermost.floor() as u64;
        Ok(spec)
    }

    /// Prime scales `Z` of the product layers, innermost first.
    ///
    /// Single mode: `Z_j = P_{j−1}^θ` with `P_j = P_{j−1}^{1+θ}`. Multi mode:
    /// `Z_k, …, Z_1` with `Z_i = P^{θ_i}`.
    pub fn layer_scales(&self) -> Vec<f64> {
        match &self.mode {
            SmoothMode::Single { theta, levels } => {
                let mut p = self.p_top;
                let mut scales = Vec::with_capacity(*levels as usize);
                for _ in 0..*levels {
                    p = p.powf(1.0 / (1.0 + theta));
                    scales.push(p.powf(*theta));
                }
                scales.reverse();
                scales
            }
            SmoothMode::Multi { schedule } => schedule
                .thetas
                .iter()
                .rev()
                .map(|t| self.p_top.powf(*t))
                .collect(),
        }
    }

    /// Size parameters from the top set down to the innermost one.
    pub fn level_sizes(&self) -> Vec<f64> {
        let mut sizes = Vec::new();
        let mut p = self.p_top;
        sizes.push(p);
        match &self.mode {
            SmoothMode::Single { theta, levels } => {
                for _ in 0..*levels {
                    p = p.powf(1.0 / (1.0 + theta));
                    sizes.push(p);
                }
            }
            SmoothMode::Multi { schedule } => {
                for t in &schedule.thetas {
                    p /= self.p_top.powf(*t);
                    sizes.push(p);
                }
            }
        }
        sizes
    }
}

/// One level of a product construction.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SmoothSet {
    pub spec: Option<SmoothSpec>,
    /// Level index: number of layers applied (single mode) or `i` of `ℰ(P_i)` (multi mode).
    pub level: u32,
    pub elements: Vec<u64>,
    /// Windows applied so far, innermost first.
    pub windows: Vec<PrimeWindow>,
    pub collision_count: u64,
    /// `base_floor · Π hi(window)`, an upper bound on every element.
    pub element_bound: u64,
}

impl SmoothSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elements.binary_search(&x).is_ok()
    }
}

fn overflow(x: u64, p: u64) -> Error {
    Error::Overflow(format!("{x} * {p} exceeds u64"))
}

fn multiply(base: &[u64], window: &PrimeWindow, coprime: bool) -> Result<(Vec<u64>, u64)> {
    let mut out = Vec::with_capacity(base.len() * window.z());
    let mut attempted = 0u64;
    for &x in base {
        for &p in &window.primes {
            if coprime && x % p == 0 {
                continue;
            }
            attempted += 1;
            out.push(x.checked_mul(p).ok_or_else(|| overflow(x, p))?);
        }
    }
    out.sort_unstable();
    out.dedup();
    let collisions = attempted - out.len() as u64;
    Ok((out, collisions))
}

fn check_base(base: &[u64]) -> Result<()> {
    if base.is_empty() {
        return Err(domain("base set is empty"));
    }
    if base.windows(2).any(|w| w[0] > w[1]) {
        return Err(domain("base set is not sorted"));
    }
    Ok(())
}

/// `{x·p | x ∈ base, p ∈ window}`, deduplicated.
pub fn build_single(base: &[u64], window: &PrimeWindow) -> Result<SmoothSet> {
    check_base(base)?;
    let (elements, collision_count) = multiply(base, window, false)?;
    let hi = window.primes.last().copied().unwrap_or(0);
    Ok(SmoothSet {
        spec: None,
        level: 1,
        elements,
        windows: alloc::vec![window.clone()],
        collision_count,
        element_bound: base.last().unwrap().saturating_mul(hi),
    })
}

/// Builds the top set of a single-mode spec.
pub fn build_smooth(spec: &SmoothSpec) -> Result<SmoothSet> {
    let SmoothMode::Single { .. } = spec.mode else {
        return Err(domain("build_smooth needs a single-mode spec"));
    };
    let mut elements: Vec<u64> = (1..=spec.base_floor).collect();
    let mut windows = Vec::new();
    let mut collisions = 0;
    let mut bound = spec.base_floor;
    for (j, z) in spec.layer_scales().into_iter().enumerate() {
        let window = PrimeWindow::for_scale(z)?;
        if window.is_empty() {
            return Err(Error::EmptyWindow {
                level: j + 1,
                lo: window.lo,
                hi: window.hi,
            });
        }
        let (next, c) = multiply(&elements, &window, false)?;
        bound = bound.saturating_mul(window.hi);
        elements = next;
        collisions += c;
        windows.push(window);
    }
    Ok(SmoothSet {
        spec: Some(spec.clone()),
        level: windows.len() as u32,
        elements,
        windows,
        collision_count: collisions,
        element_bound: bound,
    })
}

/// Builds `ℰ(P_k), ℰ(P_{k−1}), …, ℰ(P_0)` for a multi-mode spec.
pub fn build_multilevel(spec: &SmoothSpec) -> Result<Vec<SmoothSet>> {
    let SmoothMode::Multi { schedule } = &spec.mode else {
        return Err(domain("build_multilevel needs a multi-mode spec"));
    };
    let k = schedule.k;
    if spec.base_floor == 0 {
        return Err(domain(format!(
            "P = {} too small: innermost size P_{k} < 1",
            spec.p_top
        )));
    }
    let mut levels = Vec::with_capacity(k as usize + 1);
    let mut current = SmoothSet {
        spec: Some(spec.clone()),
        level: k,
        elements: (1..=spec.base_floor).collect(),
        windows: Vec::new(),
        collision_count: 0,
        element_bound: spec.base_floor,
    };
    // layer_scales lists Z_k first; level i is built from level i+1 with Z_{i+1}
    for (offset, z) in spec.layer_scales().into_iter().enumerate() {
        let i = k as usize - 1 - offset;
        let window = PrimeWindow::for_scale(z)?;
        if window.is_empty() {
            return Err(Error::EmptyWindow {
                level: i + 1,
                lo: window.lo,
                hi: window.hi,
            });
        }
        let (elements, c) = multiply(&current.elements, &window, true)?;
        let mut windows = current.windows.clone();
        windows.push(window.clone());
        let next = SmoothSet {
            spec: Some(spec.clone()),
            level: i as u32,
            elements,
            windows,
            collision_count: current.collision_count + c,
            element_bound: current.element_bound.saturating_mul(window.hi),
        };
        levels.push(core::mem::replace(&mut current, next));
    }
    levels.push(current);
    Ok(levels)
}

/// Report-only size heuristic `P/(log P)^{(η+1)/2}·((k+1)/2)^η`, `η = k log log P`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SizeEstimate {
    pub value: f64,
    pub eta: f64,
    /// The estimate is larger than `P` itself, which no subset of `[1, P]` can reach.
    pub exceeds_p: bool,
}

pub fn size_estimate(k: u32, p: f64) -> Result<SizeEstimate> {
    if !(p > core::f64::consts::E) {
        return Err(domain(format!("P = {p} <= e: log log P is not positive")));
    }
    let kf = k as f64;
    let lp = p.ln();
    let eta = kf * lp.ln();
    let value = p / lp.powf((eta + 1.0) / 2.0) * ((kf + 1.0) / 2.0).powf(eta);
    Ok(SizeEstimate {
        value,
        eta,
        exceeds_p: value > p,
    })
}

/// Counts of a set over the reduced residues modulo `q`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ResidueProfile {
    pub q: u64,
    /// `(a, count)` for every `a` in `[1, q)` with `gcd(a, q) = 1`, ascending.
    pub counts: Vec<(u64, u64)>,
    pub phi_q: u64,
    /// `|ℰ|`, including elements that share a factor with `q`.
    pub total: u64,
    /// `max_a |count(a)·φ(q)/|ℰ| − 1|`; NaN for an empty set.
    pub max_deviation: f64,
}

impl ResidueProfile {
    pub fn coprime_total(&self) -> u64 {
        self.counts.iter().map(|c| c.1).sum()
    }
}

pub fn residue_profile(elements: &[u64], q: u64) -> Result<ResidueProfile> {
    if q < 2 {
        return Err(domain(format!("modulus q = {q} < 2")));
    }
    let mut slots = alloc::vec![0u64; q as usize];
    for &x in elements {
        slots[(x % q) as usize] += 1;
    }
    let counts: Vec<(u64, u64)> = (1..q)
        .filter(|a| a.gcd(&q) == 1)
        .map(|a| (a, slots[a as usize]))
        .collect();
    let phi_q = euler_phi(q);
    let total = elements.len() as u64;
    let max_deviation = if total == 0 {
        f64::NAN
    } else {
        counts
            .iter()
            .map(|&(_, c)| (c as f64 * phi_q as f64 / total as f64 - 1.0).abs())
            .fold(0.0, f64::max)
    };
    Ok(ResidueProfile {
        q,
        counts,
        phi_q,
        total,
        max_deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bound_engine::theta_schedule;
    use crate::sieve::{is_prime, primes_in};

    fn window(primes: &[u64]) -> PrimeWindow {
        PrimeWindow {
            lo: primes[0],
            hi: *primes.last().unwrap(),
            primes: primes.to_vec(),
        }
    }

    #[test]
    fn single_products() {
        let s = build_single(&[1, 2, 3], &window(&[5, 7])).unwrap();
        assert_eq!(s.elements, [5, 7, 10, 14, 15, 21]);
        assert_eq!(s.collision_count, 0);
        let s = build_single(&[2, 5], &window(&[2, 5])).unwrap();
        assert_eq!(s.elements, [4, 10, 25]);
        assert_eq!(s.collision_count, 1);
        let s = build_single(&[1], &window(&[13])).unwrap();
        assert_eq!(s.elements, [13]);
        assert!(build_single(&[], &window(&[2])).is_err());
        assert!(build_single(&[3, 1], &window(&[2])).is_err());
    }

    #[test]
    fn single_overflow_is_reported() {
        let err = build_single(&[u64::MAX / 2], &window(&[3])).unwrap_err();
        assert!(matches!(err, Error::Overflow(_)));
    }

    #[test]
    fn single_spec_soundness() {
        let spec = SmoothSpec::single(3, 0.4, 2, 1.0e4).unwrap();
        let set = build_smooth(&spec).unwrap();
        assert_eq!(set.windows.len(), 2);
        let base = spec.base_floor;
        // every element is a base element times one prime from each window
        for &x in set.elements.iter().step_by((set.len() / 100).max(1)) {
            let ok = set.windows[1].primes.iter().any(|&p| {
                x % p == 0
                    && set.windows[0]
                        .primes
                        .iter()
                        .any(|&q| (x / p) % q == 0 && (x / p / q) >= 1 && (x / p / q) <= base)
            });
            assert!(ok, "{x} not decomposable");
        }
        assert!(set.elements.iter().all(|&x| x <= set.element_bound));
        assert_eq!(set, build_smooth(&spec).unwrap());
    }

    #[test]
    fn single_spec_validation() {
        assert!(SmoothSpec::single(3, 0.2, 1, 100.0).is_err());
        let s = SmoothSpec::single(3, 1.0 / 3.0, 1, 100.0).unwrap();
        assert!(s.theta_at_limit);
        assert!(!SmoothSpec::single(3, 0.4, 1, 100.0).unwrap().theta_at_limit);
        let err = build_smooth(&SmoothSpec::single(3, 0.4, 3, 8.0).unwrap()).unwrap_err();
        assert!(matches!(err, Error::EmptyWindow { .. }));
    }

    #[test]
    fn unit_base_has_only_window_primes() {
        // with base {1} every prime factor comes from a window
        let spec = SmoothSpec::single(3, 0.5, 2, 200.0).unwrap();
        let set = build_smooth(&spec).unwrap();
        if spec.base_floor == 1 {
            for &x in &set.elements {
                let mut r = x;
                for w in &set.windows {
                    for &p in &w.primes {
                        while r % p == 0 {
                            r /= p;
                        }
                    }
                }
                assert_eq!(r, 1);
            }
        }
    }

    #[test]
    fn multilevel_cubes() {
        let spec = SmoothSpec::multi(theta_schedule(3, 1.0).unwrap(), 1.0e4).unwrap();
        let levels = build_multilevel(&spec).unwrap();
        assert_eq!(levels.len(), 4);
        assert_eq!(levels[0].level, 3);
        assert_eq!(levels[0].elements, [1, 2, 3]);
        let top = levels.last().unwrap();
        assert_eq!(top.level, 0);
        let w: Vec<(u64, u64)> = top.windows.iter().map(|w| (w.lo, w.hi)).collect();
        assert_eq!(w, [(11, 21), (7, 12), (6, 10)]);
        // independent Python construction
        assert_eq!(top.elements, [1001, 1309, 1463, 2002, 2618, 2926, 3003, 3927, 4389]);
    }

    #[test]
    fn multilevel_coprime_chain() {
        let spec = SmoothSpec::multi(theta_schedule(4, 1.5).unwrap(), 1.0e7).unwrap();
        let levels = build_multilevel(&spec).unwrap();
        for pair in levels.windows(2) {
            let (inner, outer) = (&pair[0], &pair[1]);
            let w = outer.windows.last().unwrap();
            for &x in &outer.elements {
                let ok = w
                    .primes
                    .iter()
                    .any(|&p| x % p == 0 && (x / p) % p != 0 && inner.contains(x / p));
                assert!(ok, "{x} at level {}", outer.level);
            }
        }
    }

    #[test]
    fn multilevel_too_small() {
        let spec = SmoothSpec::multi(theta_schedule(3, 1.0).unwrap(), 5.0).unwrap();
        let err = build_multilevel(&spec).unwrap_err();
        assert!(matches!(err, Error::EmptyWindow { .. } | Error::Domain(_)), "{err:?}");
    }

    #[test]
    fn size_estimate_values() {
        let e = size_estimate(3, 1.0e6).unwrap();
        assert!((e.value - 2.04e3).abs() < 10.0, "{}", e.value);
        let e = size_estimate(3, core::f64::consts::E.exp()).unwrap();
        assert!((e.eta - 3.0).abs() < 1e-12 && e.value.is_finite());
        assert!(size_estimate(3, 2.0).is_err());
    }

    #[test]
    fn residue_examples() {
        let r = residue_profile(&[5, 7, 10, 14, 15, 21], 4).unwrap();
        assert_eq!(r.counts, [(1, 2), (3, 2)]);
        assert_eq!(r.phi_q, 2);
        assert!((r.max_deviation - 1.0 / 3.0).abs() < 1e-15);
        let r = residue_profile(&[1, 3, 5, 9], 2).unwrap();
        assert_eq!(r.counts, [(1, 4)]);
        assert_eq!(r.max_deviation, 0.0);
        assert!(residue_profile(&[1], 1).is_err());
        assert!(residue_profile(&[], 3).unwrap().max_deviation.is_nan());
    }

    #[test]
    fn window_primes_are_prime() {
        let w = primes_in(100, 400).unwrap();
        assert!(w.primes.iter().all(|&p| is_prime(p)));
    }
}
