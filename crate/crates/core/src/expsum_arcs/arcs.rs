use crate::error::{domain, Result};
use crate::phase::decompose;
use alloc::format;
use alloc::vec::Vec;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{ToPrimitive, Zero};

/// Which family of arcs: `𝔐` (radius `1/(qτ)`, `q ≤ P`) or `𝔑` (radius `W/(qτP)`, `q ≤ W`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Which {
    M,
    N,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Class {
    Major { q: u64, a: u64 },
    Minor,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Arc {
    pub q: u64,
    pub a: u64,
    pub center: f64,
    pub halfwidth: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ArcDissection {
    pub p: f64,
    pub k: u32,
    /// `τ = 2kP^{k−1}`
    pub tau: f64,
    pub q_major: u64,
    pub w: f64,
}

impl ArcDissection {
    /// Dissection with `W = √P`.
    pub fn new(p: f64, k: u32) -> Result<Self> {
        Self::with_w(p, k, p.sqrt())
    }

    pub fn with_w(p: f64, k: u32, w: f64) -> Result<Self> {
        if k < 2 {
            return Err(domain(format!("k = {k} < 2")));
        }
        if !(p >= 1.0 && p.is_finite()) {
            return Err(domain(format!("P = {p} must be at least 1")));
        }
        if !(w > 0.0 && w <= p) {
            return Err(domain(format!("W = {w} must lie in (0, P]")));
        }
        Ok(Self {
            p,
            k,
            tau: 2.0 * k as f64 * p.powi(k as i32 - 1),
            q_major: p.floor() as u64,
            w,
        })
    }

    /// `𝔍 = [τ^{−1}, 1 + τ^{−1}]`.
    pub fn interval(&self) -> (f64, f64) {
        (1.0 / self.tau, 1.0 + 1.0 / self.tau)
    }

    pub fn q_limit(&self, which: Which) -> u64 {
        match which {
            Which::M => self.q_major,
            Which::N => self.w.floor() as u64,
        }
    }

    /// `q · halfwidth(q)`, the same for every `q`.
    pub fn radius(&self, which: Which) -> f64 {
        match which {
            Which::M => 1.0 / self.tau,
            Which::N => self.w / (self.tau * self.p),
        }
    }

    /// Every arc `(q, a)` with `1 ≤ a ≤ q ≤ Q`, `gcd(a, q) = 1`, ordered by centre.
    pub fn arcs(&self, which: Which) -> Vec<Arc> {
        let r = self.radius(which);
        let mut out = Vec::new();
        for q in 1..=self.q_limit(which) {
            for a in 1..=q {
                if a.gcd(&q) == 1 {
                    out.push(Arc {
                        q,
                        a,
                        center: a as f64 / q as f64,
                        halfwidth: r / q as f64,
                    });
                }
            }
        }
        out.sort_by(|x, y| x.center.total_cmp(&y.center));
        out
    }

    /// Union of the arcs clipped to `𝔍`, as disjoint sorted intervals.
    pub fn merged(&self, which: Which) -> Vec<(f64, f64)> {
        let (lo, hi) = self.interval();
        let mut out: Vec<(f64, f64)> = Vec::new();
        for arc in self.arcs(which) {
            let a = (arc.center - arc.halfwidth).max(lo);
            let b = (arc.center + arc.halfwidth).min(hi);
            if a > b {
                continue;
            }
            match out.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => out.push((a, b)),
            }
        }
        out
    }

    /// `𝔍` minus the arcs.
    pub fn complement(&self, which: Which) -> Vec<(f64, f64)> {
        let (lo, hi) = self.interval();
        subtract(&[(lo, hi)], &self.merged(which))
    }

    /// `𝔐 \ 𝔑`.
    pub fn major_minus_n(&self) -> Vec<(f64, f64)> {
        subtract(&self.merged(Which::M), &self.merged(Which::N))
    }
}

pub(crate) fn measure(intervals: &[(f64, f64)]) -> f64 {
    intervals.iter().map(|i| i.1 - i.0).sum()
}

/// `a \ b` for sorted disjoint interval lists.
pub(crate) fn subtract(a: &[(f64, f64)], b: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for &(lo, hi) in a {
        let mut cur = lo;
        for &(blo, bhi) in b {
            if bhi <= cur || blo >= hi {
                continue;
            }
            if blo > cur {
                out.push((cur, blo));
            }
            cur = cur.max(bhi);
        }
        if cur < hi {
            out.push((cur, hi));
        }
    }
    out
}

fn ldexp(mut v: f64, mut e: i64) -> f64 {
    while e != 0 {
        let step = e.clamp(-1000, 1000);
        v *= 2f64.powi(step as i32);
        e -= step;
    }
    v
}

/// `|qα − a|` computed exactly from the dyadic expansion of `α`.
fn distance(alpha: f64, q: u64, a: u64) -> f64 {
    let (_, m, e) = decompose(alpha);
    let sh = (-e).max(0) as usize;
    let lift = e.max(0) as usize;
    let v = ((BigInt::from(m) * BigInt::from(q)) << lift) - (BigInt::from(a) << sh);
    let (_, mag) = v.into_parts();
    let drop = (mag.bits() as usize).saturating_sub(64);
    let top = (mag >> drop).to_f64().unwrap_or(0.0);
    ldexp(top, drop as i64 - sh as i64)
}

fn covering(alpha: f64, q: u64, a: u64, r: f64) -> bool {
    a >= 1 && a <= q && a.gcd(&q) == 1 && distance(alpha, q, a) <= r
}

/// Smallest-`q` arc containing `α`, found among the continued-fraction
/// convergents of `α`: every covering `a/q` satisfies `|α − a/q| < 1/(2q²)`
/// and so is a convergent.
pub fn classify(alpha: f64, d: &ArcDissection, which: Which) -> Class {
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Class::Minor;
    }
    let r = d.radius(which);
    let limit = d.q_limit(which);
    let (_, m, e) = decompose(alpha);
    let (mut num, mut den) = if e >= 0 {
        (BigUint::from(m) << e as usize, BigUint::from(1u8))
    } else {
        (BigUint::from(m), BigUint::from(1u8) << (-e) as usize)
    };
    // convergents p_n/q_n via p_n = c_n p_{n−1} + p_{n−2}
    let (mut p0, mut q0) = (BigUint::zero(), BigUint::from(1u8));
    let (mut p1, mut q1) = (BigUint::from(1u8), BigUint::zero());
    loop {
        if den.is_zero() {
            return Class::Minor;
        }
        let (c, rem) = num.div_rem(&den);
        let p2 = &c * &p1 + &p0;
        let q2 = &c * &q1 + &q0;
        let q = match q2.to_u64() {
            Some(q) if q <= limit => q,
            _ => return Class::Minor,
        };
        if let Some(a) = p2.to_u64() {
            // the nearest numerator, which can differ from p_n only at q = 1
            for cand in [a, a + 1, a.wrapping_sub(1)] {
                if covering(alpha, q, cand, r) {
                    return Class::Major { q, a: cand };
                }
            }
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        num = den;
        den = rem;
    }
}

/// Brute-force reference for [`classify`]: scan every `q ≤ Q`.
pub fn classify_scan(alpha: f64, d: &ArcDissection, which: Which) -> Class {
    let r = d.radius(which);
    for q in 1..=d.q_limit(which) {
        let a = (alpha * q as f64).round() as u64;
        for cand in [a, a + 1, a.wrapping_sub(1)] {
            if covering(alpha, q, cand, r) {
                return Class::Major { q, a: cand };
            }
        }
    }
    Class::Minor
}
