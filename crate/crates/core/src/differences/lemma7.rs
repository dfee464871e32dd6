//! The `U_i`, `V_i` terms of the differencing chain, in logarithms.
//!
//! With `J_{i+1}` replaced by `U_{i+1}` (and by `H̃_k Z̃_k P S_{s−1}(P_k)` at
//! the end of the chain), `U_i = V_i` for every `i` is equivalent to the
//! level recurrence for `θ_j` together with `θ_k = 1/k`.

use crate::bound_engine::ThetaSchedule;
use crate::error::{domain, Error, Result};
use alloc::format;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

/// Level geometry `Z_j = P^{θ_j}`, `P_{j} = P_{j−1}/Z_j`, `H_j = P/Z_j^k`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Geometry {
    pub k: u32,
    pub s: u32,
    pub ln_p: f64,
    /// `thetas[j-1]` is `θ_j`.
    pub thetas: Vec<f64>,
}

impl Geometry {
    pub fn new(k: u32, s: u32, ln_p: f64, thetas: Vec<f64>) -> Result<Self> {
        if thetas.len() != k as usize {
            return Err(domain(format!("{} level exponents for k = {k}", thetas.len())));
        }
        if s < 2 {
            return Err(domain(format!("s = {s} < 2")));
        }
        if !(ln_p > 0.0 && ln_p.is_finite()) {
            return Err(domain(format!("ln P = {ln_p} must be positive")));
        }
        Ok(Self { k, s, ln_p, thetas })
    }

    pub fn from_schedule(schedule: &ThetaSchedule, s: u32, ln_p: f64) -> Result<Self> {
        Self::new(schedule.k, s, ln_p, schedule.thetas.clone())
    }

    /// `ln Z_j`, `1 ≤ j ≤ k`.
    pub fn ln_z(&self, j: usize) -> f64 {
        self.thetas[j - 1] * self.ln_p
    }

    /// `ln H_j = ln P − k ln Z_j`.
    pub fn ln_h(&self, j: usize) -> f64 {
        self.ln_p - self.k as f64 * self.ln_z(j)
    }

    /// `ln P_j`, with `P_0 = P`.
    pub fn ln_level(&self, j: usize) -> f64 {
        self.ln_p - (1..=j).map(|l| self.ln_z(l)).sum::<f64>()
    }

    /// `ln H̃_i + ln Z̃_i`.
    fn ln_hz_tilde(&self, i: usize) -> (f64, f64) {
        ((1..=i).map(|j| self.ln_h(j)).sum(), (1..=i).map(|j| self.ln_z(j)).sum())
    }
}

/// Source of `ln S_{s−1}(P_j)` for `j = 0..=k`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Counts {
    /// `S_{s−1}(P_j) = P_j^λ`.
    Model { lambda: f64 },
    Measured { ln_s: Vec<f64> },
}

impl Counts {
    /// The model exponent `λ_{s−1} = 2(s−1) − k + Δ(s−1)` matching a schedule.
    pub fn model_for(schedule: &ThetaSchedule, s: u32) -> Self {
        Counts::Model {
            lambda: 2.0 * (s as f64 - 1.0) - schedule.k as f64 + schedule.delta_prev,
        }
    }

    fn ln_s(&self, g: &Geometry, j: usize) -> Result<f64> {
        match self {
            Counts::Model { lambda } => Ok(lambda * g.ln_level(j)),
            Counts::Measured { ln_s } => ln_s
                .get(j)
                .copied()
                .ok_or_else(|| Error::Missing(format!("S_(s-1)(P_{j}) not supplied"))),
        }
    }

    pub fn is_model(&self) -> bool {
        matches!(self, Counts::Model { .. })
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Lemma7Terms {
    pub i: usize,
    pub ln_u: f64,
    pub ln_v: f64,
    /// `|ln U − ln V|`.
    pub residual: f64,
    pub ln_s_i: f64,
    pub ln_s_next: f64,
    pub ln_z_next: f64,
    pub ln_h_tilde: f64,
    pub ln_z_tilde: f64,
    pub ln_p: f64,
    pub model: bool,
}

impl Lemma7Terms {
    pub fn u(&self) -> f64 {
        self.ln_u.exp()
    }

    pub fn v(&self) -> f64 {
        self.ln_v.exp()
    }
}

fn ln_u(g: &Geometry, counts: &Counts, i: usize) -> Result<f64> {
    let s = g.s as f64;
    let (lh, lz) = g.ln_hz_tilde(i);
    let zn = g.ln_z(i + 1);
    Ok(0.5 * counts.ln_s(g, i)?
        + 0.5 * (2.0 * s - 3.0) * zn
        + 0.5 * (g.ln_p + 2.0 * (lh + lz) + zn + counts.ln_s(g, i + 1)?))
}

/// `U_i` and `V_i` for `0 ≤ i < k`.
pub fn lemma7_terms(i: usize, g: &Geometry, counts: &Counts) -> Result<Lemma7Terms> {
    let k = g.k as usize;
    if i >= k {
        return Err(domain(format!("i = {i} must be below k = {k}")));
    }
    let s = g.s as f64;
    let (lh, lz) = g.ln_hz_tilde(i);
    let ln_u_i = ln_u(g, counts, i)?;
    let ln_j_next = if i + 1 < k {
        ln_u(g, counts, i + 1)?
    } else {
        let (hk, zk) = g.ln_hz_tilde(k);
        hk + zk + g.ln_p + counts.ln_s(g, k)?
    };
    let ln_v_i = 0.5 * counts.ln_s(g, i)? + 0.5 * (2.0 * s - 3.0) * g.ln_z(i + 1) + 0.5 * (lh + lz + ln_j_next);
    Ok(Lemma7Terms {
        i,
        ln_u: ln_u_i,
        ln_v: ln_v_i,
        residual: (ln_u_i - ln_v_i).abs(),
        ln_s_i: counts.ln_s(g, i)?,
        ln_s_next: counts.ln_s(g, i + 1)?,
        ln_z_next: g.ln_z(i + 1),
        ln_h_tilde: lh,
        ln_z_tilde: lz,
        ln_p: g.ln_p,
        model: counts.is_model(),
    })
}

pub fn lemma7_all(g: &Geometry, counts: &Counts) -> Result<Vec<Lemma7Terms>> {
    (0..g.k as usize).map(|i| lemma7_terms(i, g, counts)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bound_engine::theta_schedule;

    #[test]
    fn schedule_balances_every_level() {
        for k in 3..=12u32 {
            for delta in [0.3, 1.0, (k as f64) / 2.0] {
                let sched = theta_schedule(k, delta).unwrap();
                let s = k + 2;
                let g = Geometry::from_schedule(&sched, s, 1e6f64.ln()).unwrap();
                let counts = Counts::model_for(&sched, s);
                for t in lemma7_all(&g, &counts).unwrap() {
                    assert!(t.residual < 1e-9, "k={k} Δ={delta} i={}: {}", t.i, t.residual);
                    assert!(t.u() > 0.0 && t.v() > 0.0);
                }
            }
        }
    }

    #[test]
    fn perturbation_breaks_balance() {
        let sched = theta_schedule(5, 1.2).unwrap();
        let ln_p = 1e6f64.ln();
        let counts = Counts::model_for(&sched, 6);
        for j in 2..=5 {
            let mut thetas = sched.thetas.clone();
            thetas[j - 1] *= 1.1;
            let g = Geometry::new(5, 6, ln_p, thetas).unwrap();
            let worst = lemma7_all(&g, &counts)
                .unwrap()
                .iter()
                .map(|t| t.residual)
                .fold(0.0, f64::max);
            assert!(worst > 0.01, "θ_{j}: {worst}");
        }
    }

    #[test]
    fn endpoint_ratio_is_h_k() {
        let sched = theta_schedule(4, 1.0).unwrap();
        let ln_p = 50.0;
        let mut thetas = sched.thetas.clone();
        thetas[3] = 0.2;
        let g = Geometry::new(4, 5, ln_p, thetas).unwrap();
        let t = lemma7_terms(3, &g, &Counts::model_for(&sched, 5)).unwrap();
        // U/V = H_k^{−1/2}
        assert!((t.ln_v - t.ln_u - 0.5 * g.ln_h(4)).abs() < 1e-9);
        assert!(lemma7_terms(4, &g, &Counts::Model { lambda: 1.0 }).is_err());
        let short = Counts::Measured { ln_s: alloc::vec![1.0, 2.0] };
        assert!(matches!(lemma7_terms(2, &g, &short).unwrap_err(), Error::Missing(_)));
    }
}
