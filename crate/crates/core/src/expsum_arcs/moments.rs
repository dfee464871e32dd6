use super::arcs::{classify, measure, ArcDissection, Class, Which};
use super::ExpSum;
use crate::error::{domain, Error, Result};
use crate::phase::{frac_mul, unit};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

/// Default cap on Parseval grid points.
pub const DEFAULT_GRID_BUDGET: u64 = 1 << 24;

/// `f^e` or `conj(f)^e`.
#[derive(Debug, Clone, Copy)]
pub struct Factor<'a> {
    pub sum: &'a ExpSum,
    pub exponent: u32,
    pub conjugated: bool,
}

/// Integrand `Π factor · e(−Nα)`, or its modulus when `modulus` is set.
#[derive(Debug, Clone)]
pub struct MomentSpec<'a> {
    pub factors: Vec<Factor<'a>>,
    pub target: Option<u64>,
    pub modulus: bool,
}

impl<'a> MomentSpec<'a> {
    /// `|f|^{2s} = f^s · conj(f)^s`.
    pub fn abs_even(sum: &'a ExpSum, s: u32) -> Self {
        Self {
            factors: vec![
                Factor {
                    sum,
                    exponent: s,
                    conjugated: false,
                },
                Factor {
                    sum,
                    exponent: s,
                    conjugated: true,
                },
            ],
            target: None,
            modulus: false,
        }
    }

    /// `|f|^s` for any `s`; not a trigonometric polynomial when `s` is odd.
    pub fn abs_power(sum: &'a ExpSum, s: u32) -> Self {
        Self {
            factors: vec![Factor {
                sum,
                exponent: s,
                conjugated: false,
            }],
            target: None,
            modulus: true,
        }
    }

    /// `f · e(−Nα)`, whose integral counts representations of `N`.
    pub fn representation(sum: &'a ExpSum, n: u64) -> Self {
        Self {
            factors: vec![Factor {
                sum,
                exponent: 1,
                conjugated: false,
            }],
            target: Some(n),
            modulus: false,
        }
    }

    /// Lowest and highest frequency of the expanded integrand.
    pub fn frequency_range(&self) -> Result<(i128, i128)> {
        let mut lo: i128 = 0;
        let mut hi: i128 = 0;
        for f in &self.factors {
            let e = f.exponent as i128;
            let (a, b) = (e * f.sum.min_frequency() as i128, e * f.sum.max_frequency() as i128);
            if f.conjugated {
                lo -= b;
                hi -= a;
            } else {
                lo += a;
                hi += b;
            }
        }
        if let Some(n) = self.target {
            lo -= n as i128;
            hi -= n as i128;
        }
        Ok((lo, hi))
    }

    /// `Σ exponent · (max − min frequency)`.
    pub fn span(&self) -> Result<u128> {
        let (lo, hi) = self.frequency_range()?;
        Ok((hi - lo) as u128)
    }

    fn distinct_sums(&self) -> (Vec<&'a ExpSum>, Vec<usize>) {
        let mut sums: Vec<&ExpSum> = Vec::new();
        let idx = self
            .factors
            .iter()
            .map(|f| match sums.iter().position(|s| core::ptr::eq(*s, f.sum)) {
                Some(i) => i,
                None => {
                    sums.push(f.sum);
                    sums.len() - 1
                }
            })
            .collect();
        (sums, idx)
    }

    fn combine(&self, values: &[Complex64], idx: &[usize], shift: Complex64) -> Complex64 {
        let mut acc = shift;
        for (f, &i) in self.factors.iter().zip(idx) {
            let v = if f.conjugated { values[i].conj() } else { values[i] };
            acc *= v.powu(f.exponent);
        }
        if self.modulus {
            Complex64::new(acc.norm(), 0.0)
        } else {
            acc
        }
    }

    /// Integrand at `α`.
    pub fn eval(&self, alpha: f64) -> Complex64 {
        let (sums, idx) = self.distinct_sums();
        let values: Vec<Complex64> = sums.iter().map(|s| s.eval(alpha)).collect();
        let shift = match self.target {
            Some(n) => unit(-frac_mul(n, alpha)),
            None => Complex64::new(1.0, 0.0),
        };
        self.combine(&values, &idx, shift)
    }
}

/// Compensated summation of complex values.
#[derive(Default)]
struct Neumaier {
    re: (f64, f64),
    im: (f64, f64),
}

impl Neumaier {
    fn add_part(acc: &mut (f64, f64), x: f64) {
        let t = acc.0 + x;
        if acc.0.abs() >= x.abs() {
            acc.1 += (acc.0 - t) + x;
        } else {
            acc.1 += (x - t) + acc.0;
        }
        acc.0 = t;
    }

    fn add(&mut self, z: Complex64) {
        Self::add_part(&mut self.re, z.re);
        Self::add_part(&mut self.im, z.im);
    }

    fn total(&self) -> Complex64 {
        Complex64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExactMoment {
    pub value: f64,
    /// Imaginary part; zero for real integrands up to rounding.
    pub imag: f64,
    pub grid: u64,
}

impl ExactMoment {
    /// The nearest integer if `value` lies within `1e−6` of it.
    pub fn as_count(&self) -> Option<u128> {
        let r = self.value.round();
        ((self.value - r).abs() <= 1e-6 && r >= 0.0 && self.imag.abs() <= 1e-6).then_some(r as u128)
    }
}

/// `∫_0^1` of the integrand, computed as the mean over `M = span + 1`
/// equally spaced points, which is exact for trigonometric polynomials.
pub fn exact_moment(spec: &MomentSpec<'_>, grid_budget: u64) -> Result<ExactMoment> {
    if spec.modulus {
        return Err(domain("modulus integrands are not trigonometric polynomials"));
    }
    let span = spec.span()?;
    let m = span + 1;
    if m > grid_budget as u128 {
        return Err(Error::Budget {
            what: "exact_moment grid",
            estimated: m,
            limit: grid_budget as u128,
        });
    }
    let m = m as u64;
    let table: Vec<Complex64> = (0..m).map(|r| unit(r as f64 / m as f64)).collect();
    let (sums, idx) = spec.distinct_sums();
    let reduced: Vec<Vec<(u64, f64)>> = sums
        .iter()
        .map(|s| s.terms().iter().map(|&(n, c)| (n % m, c as f64)).collect())
        .collect();
    let target = spec.target.map_or(0, |n| (m - n % m) % m);
    let at = |freq: u64, j: u64| table[((freq as u128 * j as u128) % m as u128) as usize];
    let mut acc = Neumaier::default();
    let mut values = vec![Complex64::new(0.0, 0.0); sums.len()];
    for j in 0..m {
        for (v, terms) in values.iter_mut().zip(&reduced) {
            *v = terms.iter().map(|&(n, c)| at(n, j) * c).sum();
        }
        acc.add(spec.combine(&values, &idx, at(target, j)));
    }
    let total = acc.total() / m as f64;
    Ok(ExactMoment {
        value: total.re,
        imag: total.im,
        grid: m,
    })
}

/// [`exact_moment`] rounded to the count it represents.
pub fn exact_count(spec: &MomentSpec<'_>, grid_budget: u64) -> Result<u128> {
    let mm = exact_moment(spec, grid_budget)?;
    mm.as_count()
        .ok_or_else(|| Error::Degenerate(format!("moment {} + {}i is not an integer", mm.value, mm.imag)))
}

/// Part of `𝔍` to integrate over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Region {
    Major(Which),
    Minor(Which),
    MajorMinusN,
}

impl Region {
    pub fn intervals(&self, d: &ArcDissection) -> Vec<(f64, f64)> {
        match *self {
            Region::Major(w) => d.merged(w),
            Region::Minor(w) => d.complement(w),
            Region::MajorMinusN => d.major_minus_n(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ArcMoment {
    pub value: f64,
    /// `|Q(n) − Q(n/2)|` between the full and half-density rules.
    pub err_est: f64,
    pub measure: f64,
    pub intervals: usize,
    pub samples: u64,
}

/// Composite midpoint rule on each interval of the region, with
/// `samples_per_arc · max(1, ⌈length · span⌉)` nodes per interval.
pub fn arc_moment(spec: &MomentSpec<'_>, d: &ArcDissection, region: Region, samples_per_arc: u32) -> Result<ArcMoment> {
    if samples_per_arc < 16 {
        return Err(domain(format!("samples_per_arc = {samples_per_arc} < 16")));
    }
    let span = spec.span()? as f64;
    let intervals = region.intervals(d);
    let mut fine = Neumaier::default();
    let mut coarse = Neumaier::default();
    let mut samples = 0u64;
    for &(a, b) in &intervals {
        let len = b - a;
        let n = samples_per_arc as u64 * ((len * span).ceil() as u64).max(1);
        let n = n + n % 2;
        let h = len / n as f64;
        for i in 0..n {
            fine.add(spec.eval(a + (i as f64 + 0.5) * h) * h);
        }
        let h2 = 2.0 * h;
        for i in 0..n / 2 {
            coarse.add(spec.eval(a + (i as f64 + 0.5) * h2) * h2);
        }
        samples += n + n / 2;
    }
    let value = fine.total().re;
    Ok(ArcMoment {
        value,
        err_est: (value - coarse.total().re).abs(),
        measure: measure(&intervals),
        intervals: intervals.len(),
        samples,
    })
}

/// Candidate points for the Weyl ratio.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SamplingPolicy {
    pub points: u32,
    pub seed: u64,
    /// Extra points, classified like the rest.
    pub forced: Vec<f64>,
}

impl Default for SamplingPolicy {
    fn default() -> Self {
        Self {
            points: 512,
            seed: 0,
            forced: Vec::new(),
        }
    }
}

impl SamplingPolicy {
    /// Golden-ratio sequence over `𝔍`, offset by the seed.
    pub fn candidates(&self, d: &ArcDissection) -> Vec<f64> {
        const PHI: f64 = 0.618_033_988_749_894_8;
        let (lo, _) = d.interval();
        let offset = (self.seed as f64 * core::f64::consts::SQRT_2).fract();
        let mut out: Vec<f64> = (1..=self.points as u64)
            .map(|i| lo + (offset + i as f64 * PHI).fract())
            .collect();
        out.extend(&self.forced);
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WeylRatio {
    pub max_ratio: f64,
    pub argmax_alpha: f64,
    pub kept: usize,
    pub rejected: usize,
}

/// `max |f(α)| / P^{1 − 1/2^{k−1}}` over sampled minor-arc points.
pub fn weyl_ratio(p: u64, k: u32, policy: &SamplingPolicy) -> Result<WeylRatio> {
    let f = ExpSum::full(p, k)?;
    let d = ArcDissection::new(p as f64, k)?;
    let scale = (p as f64).powf(1.0 - 0.5f64.powi(k as i32 - 1));
    let mut best = (f64::NEG_INFINITY, f64::NAN);
    let (mut kept, mut rejected) = (0, 0);
    for alpha in policy.candidates(&d) {
        if classify(alpha, &d, Which::M) != Class::Minor {
            rejected += 1;
            continue;
        }
        kept += 1;
        let r = f.eval(alpha).norm() / scale;
        if r > best.0 {
            best = (r, alpha);
        }
    }
    if kept == 0 {
        return Err(Error::Degenerate("no sampled point lies on the minor arcs".into()));
    }
    Ok(WeylRatio {
        max_ratio: best.0,
        argmax_alpha: best.1,
        kept,
        rejected,
    })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WExponent {
    /// `(W, ∫_𝔫 integrand)`
    pub points: Vec<(f64, f64)>,
    /// Fitted `d log I / d log W`.
    pub slope: f64,
}

/// Measures how the minor-arc integral over `𝔫` scales with `W`.
pub fn w_exponent(spec: &MomentSpec<'_>, p: f64, k: u32, ws: &[f64], samples_per_arc: u32) -> Result<WExponent> {
    let mut points = Vec::with_capacity(ws.len());
    for &w in ws {
        let d = ArcDissection::with_w(p, k, w)?;
        points.push((w, arc_moment(spec, &d, Region::Minor(Which::N), samples_per_arc)?.value));
    }
    if points.iter().any(|pt| !(pt.1 > 0.0)) {
        return Err(Error::Degenerate("non-positive minor-arc integral".into()));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|pt| (pt.0.ln(), pt.1.ln())).collect();
    let fit = crate::stats::ols(&logs)?;
    Ok(WExponent {
        points,
        slope: fit.slope,
    })
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::aux_count::{s_count, DEFAULT_BUDGET};
    use alloc::vec::Vec;

    const G: u64 = DEFAULT_GRID_BUDGET;

    #[test]
    fn exact_examples() {
        let f = ExpSum::full(2, 2).unwrap();
        assert_eq!(exact_count(&MomentSpec::abs_even(&f, 1), G).unwrap(), 2);
        let f = ExpSum::full(3, 2).unwrap();
        assert_eq!(exact_count(&MomentSpec::abs_even(&f, 2), G).unwrap(), 15);
        let f = ExpSum::full(5, 3).unwrap();
        assert_eq!(exact_count(&MomentSpec::representation(&f, 27), G).unwrap(), 1);
        assert_eq!(exact_count(&MomentSpec::representation(&f, 28), G).unwrap(), 0);
        assert!(exact_moment(&MomentSpec::abs_power(&f, 3), G).is_err());
        assert!(matches!(
            exact_moment(&MomentSpec::abs_even(&f, 2), 100).unwrap_err(),
            Error::Budget { .. }
        ));
    }

    #[test]
    fn parseval_matches_counting() {
        for (k, p, s) in [(2u32, 3u64, 2u32), (3, 6, 2), (3, 4, 3), (2, 8, 2), (2, 10, 3), (4, 5, 2)] {
            let f = ExpSum::full(p, k).unwrap();
            let x: Vec<u64> = (1..=p).collect();
            let expect = s_count(&x, s, k, DEFAULT_BUDGET).unwrap().count;
            assert_eq!(exact_count(&MomentSpec::abs_even(&f, s), G).unwrap(), expect, "k={k} P={p} s={s}");
        }
        let g = ExpSum::smooth(&[1, 2, 3, 4, 6, 8, 9, 12], 3).unwrap();
        let expect = s_count(&[1, 2, 3, 4, 6, 8, 9, 12], 2, 3, DEFAULT_BUDGET).unwrap().count;
        assert_eq!(exact_count(&MomentSpec::abs_even(&g, 2), G).unwrap(), expect);
    }

    #[test]
    fn arcs_split_the_full_moment() {
        let f = ExpSum::full(10, 3).unwrap();
        let d = ArcDissection::new(10.0, 3).unwrap();
        let spec = MomentSpec::abs_even(&f, 2);
        let exact = exact_moment(&spec, G).unwrap().value;
        let major = arc_moment(&spec, &d, Region::Major(Which::M), 16).unwrap();
        let minor = arc_moment(&spec, &d, Region::Minor(Which::M), 16).unwrap();
        assert!((major.measure + minor.measure - 1.0).abs() < 1e-12);
        let rel = (major.value + minor.value - exact).abs() / exact;
        assert!(rel < 0.02, "{rel}");
    }

    #[test]
    fn n_inside_m_when_w_is_p() {
        let f = ExpSum::full(10, 3).unwrap();
        let d = ArcDissection::with_w(10.0, 3, 10.0).unwrap();
        let spec = MomentSpec::abs_power(&f, 5);
        let m = arc_moment(&spec, &d, Region::Major(Which::M), 16).unwrap();
        let n = arc_moment(&spec, &d, Region::Major(Which::N), 16).unwrap();
        assert!(m.value > 0.0 && m.value.is_finite());
        assert!(n.value <= m.value * 1.02);
    }

    #[test]
    fn weyl_guard_and_ratio() {
        let policy = SamplingPolicy {
            points: 64,
            seed: 1,
            forced: vec![0.5],
        };
        let r = weyl_ratio(50, 3, &policy).unwrap();
        assert!(r.max_ratio > 0.0);
        assert!(r.rejected >= 1);
        let only_major = SamplingPolicy {
            points: 0,
            seed: 0,
            forced: vec![0.5, 1.0],
        };
        assert!(weyl_ratio(50, 3, &only_major).is_err());
    }
}
