//! Exact representation functions and auxiliary-equation counts.
//!
//! For domains `X_1, …, X_s` the representation function is
//! `γ(m) = #{(x_1, …, x_s) : Σ c_i x_i^k = m}` (weights `c_i` are 1 except for
//! `T_{p,q}`), and the auxiliary count is `S = Σ_m γ(m)²`, the number of
//! solutions of `Σ c_i x_i^k = Σ c_i y_i^k`.
//!
//! Tables are split in two halves `a = ⌈s/2⌉`, `b = s − a`. Each half is a
//! sorted `(value, count)` list; the full `γ` is produced by a heap merge over
//! the left half, so `Σγ²` never needs the full table in memory.

use crate::error::{domain, Error, Result};
use crate::sieve::{is_prime, PrimeWindow};
use crate::smooth_sets::{build_single, build_smooth, SmoothSpec};
use alloc::collections::BinaryHeap;
use alloc::format;
use alloc::vec::Vec;
use core::cmp::Reverse;
use num_integer::Integer;
#[allow(unused_imports)]
use num_traits::Float;

/// Default cap on predicted table updates (`Π|X_i|`).
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

/// Sorted, aggregated `(value, multiplicity)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SumTable {
    entries: Vec<(u64, u64)>,
}

impl SumTable {
    fn from_sorted(entries: Vec<(u64, u64)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        Self { entries }
    }

    /// Multiplicity of `m`, zero if unattainable.
    pub fn get(&self, m: u64) -> u64 {
        self.entries
            .binary_search_by_key(&m, |e| e.0)
            .map(|i| self.entries[i].1)
            .unwrap_or(0)
    }

    pub fn entries(&self) -> &[(u64, u64)] {
        &self.entries
    }

    /// Number of attainable values.
    pub fn distinct(&self) -> usize {
        self.entries.len()
    }

    pub fn total(&self) -> u128 {
        self.entries.iter().map(|e| e.1 as u128).sum()
    }

    pub fn sum_of_squares(&self) -> u128 {
        self.entries.iter().map(|e| (e.1 as u128) * (e.1 as u128)).sum()
    }
}

/// Ascending, aggregated stream of `a ⊕ b`.
struct MergeStream<'a> {
    a: &'a [(u64, u64)],
    b: &'a [(u64, u64)],
    cursor: Vec<usize>,
    heap: BinaryHeap<Reverse<(u64, usize)>>,
}

impl<'a> MergeStream<'a> {
    fn new(a: &'a [(u64, u64)], b: &'a [(u64, u64)]) -> Result<Self> {
        let mut heap = BinaryHeap::with_capacity(a.len());
        if let Some(&(b0, _)) = b.first() {
            for (i, &(av, _)) in a.iter().enumerate() {
                heap.push(Reverse((add(av, b0)?, i)));
            }
        }
        // the largest sum bounds every other one
        if let (Some(x), Some(y)) = (a.last(), b.last()) {
            add(x.0, y.0)?;
        }
        Ok(Self {
            a,
            b,
            cursor: alloc::vec![0; a.len()],
            heap,
        })
    }
}

impl Iterator for MergeStream<'_> {
    type Item = (u64, u64);

    fn next(&mut self) -> Option<(u64, u64)> {
        let Reverse((value, _)) = *self.heap.peek()?;
        let mut count = 0u64;
        while let Some(&Reverse((v, i))) = self.heap.peek() {
            if v != value {
                break;
            }
            self.heap.pop();
            let j = self.cursor[i];
            count += self.a[i].1 * self.b[j].1;
            self.cursor[i] = j + 1;
            if let Some(&(bv, _)) = self.b.get(j + 1) {
                // cannot overflow: bounded by the checked maximum sum
                self.heap.push(Reverse((self.a[i].0 + bv, i)));
            }
        }
        Some((value, count))
    }
}

fn add(x: u64, y: u64) -> Result<u64> {
    x.checked_add(y)
        .ok_or_else(|| Error::Overflow(format!("{x} + {y} exceeds u64")))
}

fn power(x: u64, k: u32, weight: u64) -> Result<u64> {
    x.checked_pow(k)
        .and_then(|v| v.checked_mul(weight))
        .ok_or_else(|| Error::Overflow(format!("{weight} * {x}^{k} exceeds u64")))
}

fn as_set(xs: &[u64]) -> Vec<u64> {
    let mut v = xs.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

fn power_table(set: &[u64], k: u32, weight: u64) -> Result<SumTable> {
    let mut entries = set
        .iter()
        .map(|&x| Ok((power(x, k, weight)?, 1)))
        .collect::<Result<Vec<_>>>()?;
    entries.sort_unstable();
    // x ↦ c·x^k is injective on non-negative integers for k ≥ 1
    entries.dedup_by(|b, a| {
        if a.0 == b.0 {
            a.1 += b.1;
            true
        } else {
            false
        }
    });
    Ok(SumTable::from_sorted(entries))
}

fn convolve(a: &SumTable, b: &SumTable) -> Result<SumTable> {
    Ok(SumTable::from_sorted(MergeStream::new(&a.entries, &b.entries)?.collect()))
}

fn half_table(domains: &[(Vec<u64>, u64)], k: u32) -> Result<SumTable> {
    let mut table = SumTable::from_sorted(alloc::vec![(0, 1)]);
    for (set, weight) in domains {
        table = convolve(&table, &power_table(set, k, *weight)?)?;
    }
    Ok(table)
}

fn predicted_cost(sizes: impl Iterator<Item = usize>) -> u128 {
    sizes.fold(1u128, |acc, n| acc.saturating_mul(n as u128))
}

fn check_budget(what: &'static str, cost: u128, budget: u64) -> Result<()> {
    if cost > budget as u128 {
        return Err(Error::Budget {
            what,
            estimated: cost,
            limit: budget as u128,
        });
    }
    Ok(())
}

/// Left/right halves of a weighted system, split at `⌈s/2⌉`.
fn halves(domains: &[(Vec<u64>, u64)], k: u32) -> Result<(SumTable, SumTable)> {
    let a = domains.len().div_ceil(2);
    Ok((half_table(&domains[..a], k)?, half_table(&domains[a..], k)?))
}

fn weighted_rep(domains: &[(Vec<u64>, u64)], k: u32, budget: u64, what: &'static str) -> Result<SumTable> {
    prepare(domains, k, budget, what)?;
    let (left, right) = halves(domains, k)?;
    convolve(&left, &right)
}

fn weighted_sum_of_squares(domains: &[(Vec<u64>, u64)], k: u32, budget: u64, what: &'static str) -> Result<u128> {
    prepare(domains, k, budget, what)?;
    let (left, right) = halves(domains, k)?;
    Ok(MergeStream::new(&left.entries, &right.entries)?
        .map(|(_, c)| c as u128 * c as u128)
        .sum())
}

fn prepare(domains: &[(Vec<u64>, u64)], k: u32, budget: u64, what: &'static str) -> Result<()> {
    if k == 0 {
        return Err(domain("k must be positive"));
    }
    if domains.is_empty() {
        return Err(domain("no domains"));
    }
    if let Some(i) = domains.iter().position(|d| d.0.is_empty()) {
        return Err(domain(format!("domain {i} is empty")));
    }
    check_budget(what, predicted_cost(domains.iter().map(|d| d.0.len())), budget)
}

/// `γ` over the sumset of `k`-th powers of the given domains.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RepFunction {
    pub k: u32,
    pub s: usize,
    /// The domains as sets (sorted, deduplicated).
    pub domains: Vec<Vec<u64>>,
    pub table: SumTable,
    /// `Σγ(m) = Π|X_i|`.
    pub total: u128,
}

/// Exact `γ(m)` for `m ∈ {Σ x_i^k}`. Domains are treated as sets.
pub fn rep_function(domains: &[&[u64]], k: u32, budget: u64) -> Result<RepFunction> {
    let sets: Vec<(Vec<u64>, u64)> = domains.iter().map(|d| (as_set(d), 1)).collect();
    let table = weighted_rep(&sets, k, budget, "rep_function")?;
    let total = table.total();
    debug_assert_eq!(total, predicted_cost(sets.iter().map(|d| d.0.len())));
    Ok(RepFunction {
        k,
        s: sets.len(),
        domains: sets.into_iter().map(|d| d.0).collect(),
        table,
        total,
    })
}

/// An exact solution count with the trivial lower bound from diagonal tuples.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CountResult {
    pub count: u128,
    pub s: u32,
    pub k: u32,
    pub set_size: usize,
    /// `|X|^s`: tuples with `y = x` always solve.
    pub diagonal_lb: u128,
    /// Size parameter the set was built for (the largest element unless set by the caller).
    pub p_param: f64,
}

impl CountResult {
    pub fn with_p(mut self, p: f64) -> Self {
        self.p_param = p;
        self
    }
}

/// `S_s(X) = #{x_1^k + … + x_s^k = y_1^k + … + y_s^k, x_i, y_i ∈ X}`.
pub fn s_count(x: &[u64], s: u32, k: u32, budget: u64) -> Result<CountResult> {
    if s == 0 {
        return Err(domain("s must be positive"));
    }
    let set = as_set(x);
    let n = set.len();
    let domains: Vec<(Vec<u64>, u64)> = (0..s).map(|_| (set.clone(), 1)).collect();
    let count = weighted_sum_of_squares(&domains, k, budget, "s_count")?;
    Ok(CountResult {
        count,
        s,
        k,
        set_size: n,
        diagonal_lb: predicted_cost(core::iter::repeat_n(n, s as usize)),
        p_param: set.last().copied().unwrap_or(0) as f64,
    })
}

/// Both sides of `#{m : γ(m) > 0} ≥ (Σγ)² / Σγ²`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DistinctSums {
    pub distinct: u64,
    pub total: u128,
    pub sum_of_squares: u128,
    pub lower_bound: f64,
}

impl DistinctSums {
    /// Exact integer form `distinct·Σγ² ≥ (Σγ)²`.
    pub fn holds(&self) -> bool {
        self.distinct as u128 * self.sum_of_squares >= self.total * self.total
    }

    pub fn slack(&self) -> f64 {
        self.distinct as f64 - self.lower_bound
    }
}

pub fn distinct_sums_bound(domains: &[&[u64]], k: u32, budget: u64) -> Result<DistinctSums> {
    let rep = rep_function(domains, k, budget)?;
    let sum_of_squares = rep.table.sum_of_squares();
    let out = DistinctSums {
        distinct: rep.table.distinct() as u64,
        total: rep.total,
        sum_of_squares,
        lower_bound: (rep.total as f64) * (rep.total as f64) / sum_of_squares as f64,
    };
    debug_assert!(out.holds());
    Ok(out)
}

/// Solutions of `p^k(Σ_{i<s} x_i^k − Σ_{i<s} y_i^k) = q^k(y^k − x^k)` over `E`.
///
/// Rearranged as `p^k Σ x_i^k + q^k x^k = p^k Σ y_i^k + q^k y^k`, this is the
/// sum of squares of a weighted representation function. Every element of
/// `E` must be coprime to `p`.
pub fn t_pq_count(e: &[u64], s: u32, k: u32, p: u64, q: u64, budget: u64) -> Result<CountResult> {
    if s < 2 {
        return Err(domain(format!("s = {s} < 2")));
    }
    if p == q {
        return Err(domain(format!("p = q = {p}")));
    }
    for r in [p, q] {
        if !is_prime(r) {
            return Err(domain(format!("{r} is not prime")));
        }
    }
    let set = as_set(e);
    if let Some(&x) = set.iter().find(|&&x| x.gcd(&p) != 1) {
        return Err(Error::NotCoprime { element: x, prime: p });
    }
    let pk = power(p, k, 1)?;
    let qk = power(q, k, 1)?;
    let mut domains: Vec<(Vec<u64>, u64)> = (1..s).map(|_| (set.clone(), pk)).collect();
    domains.push((set.clone(), qk));
    let count = weighted_sum_of_squares(&domains, k, budget, "t_pq_count")?;
    let n = set.len();
    Ok(CountResult {
        count,
        s,
        k,
        set_size: n,
        diagonal_lb: predicted_cost(core::iter::repeat_n(n, s as usize)),
        p_param: set.last().copied().unwrap_or(0) as f64,
    })
}

/// Both sides of the one-layer lifting inequality
/// `S_s(P̃) ≪ Z^s S_s(P) + Z^{2s} P S_{s−1}(P)`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Lemma1Check {
    pub lhs: u128,
    pub rhs: u128,
    pub ratio: f64,
    pub z: usize,
    pub p_floor: u64,
    pub base_size: usize,
    pub lifted_size: usize,
    pub window: PrimeWindow,
}

/// Compares `S_s` of `base·window` against the right-hand side built from `base`.
pub fn lemma1_check_sets(
    base: &[u64],
    window: &PrimeWindow,
    p_floor: u64,
    k: u32,
    s: u32,
    budget: u64,
) -> Result<Lemma1Check> {
    if s < 2 {
        return Err(domain(format!("s = {s} < 2")));
    }
    let base = as_set(base);
    let lifted = build_single(&base, window)?;
    let lhs = s_count(&lifted.elements, s, k, budget)?.count;
    let s_full = s_count(&base, s, k, budget)?.count;
    let s_less = s_count(&base, s - 1, k, budget)?.count;
    let z = window.z() as u128;
    let ovf = || Error::Overflow("lemma 1 right-hand side exceeds u128".into());
    let first = z.checked_pow(s).and_then(|v| v.checked_mul(s_full)).ok_or_else(ovf)?;
    let second = z
        .checked_pow(2 * s)
        .and_then(|v| v.checked_mul(p_floor as u128))
        .and_then(|v| v.checked_mul(s_less))
        .ok_or_else(ovf)?;
    let rhs = first.checked_add(second).ok_or_else(ovf)?;
    Ok(Lemma1Check {
        lhs,
        rhs,
        ratio: lhs as f64 / rhs as f64,
        z: window.z(),
        p_floor,
        base_size: base.len(),
        lifted_size: lifted.len(),
        window: window.clone(),
    })
}

/// Builds `ℰ(P)` (single mode, `base_levels` layers) and `ℰ(P^{1+θ})` from it,
/// then runs [`lemma1_check_sets`] with the window `[P^θ/2, P^θ]`.
pub fn lemma1_check(k: u32, s: u32, p: f64, theta: f64, base_levels: u32, budget: u64) -> Result<Lemma1Check> {
    let spec = SmoothSpec::single(k, theta, base_levels, p)?;
    let base = build_smooth(&spec)?;
    let window = PrimeWindow::for_scale(p.powf(theta))?;
    if window.is_empty() {
        return Err(Error::EmptyWindow {
            level: base_levels as usize + 1,
            lo: window.lo,
            hi: window.hi,
        });
    }
    lemma1_check_sets(&base.elements, &window, p.floor() as u64, k, s, budget)
}

/// Least-squares slope of `log S` against `log P`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExponentFit {
    pub points: Vec<(f64, u128)>,
    pub slope: f64,
    pub intercept: f64,
}

pub fn exponent_fit(runs: &[(f64, u128)]) -> Result<ExponentFit> {
    if runs.len() < 3 {
        return Err(Error::Degenerate(format!("{} points, need at least 3", runs.len())));
    }
    if runs.iter().any(|r| !(r.0 > 0.0) || r.1 == 0) {
        return Err(Error::Degenerate("P and S must be positive".into()));
    }
    let mut ps: Vec<f64> = runs.iter().map(|r| r.0).collect();
    ps.sort_by(f64::total_cmp);
    if ps.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Degenerate("repeated P value".into()));
    }
    let logs: Vec<(f64, f64)> = runs.iter().map(|r| (r.0.ln(), (r.1 as f64).ln())).collect();
    let fit = crate::stats::ols(&logs)?;
    Ok(ExponentFit {
        points: runs.to_vec(),
        slope: fit.slope,
        intercept: fit.intercept,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeMap;

    const B: u64 = DEFAULT_BUDGET;

    fn naive_s(x: &[u64], s: u32, k: u32) -> u128 {
        let mut sums = alloc::vec![0u64];
        for _ in 0..s {
            sums = sums.iter().flat_map(|v| x.iter().map(move |y| v + y.pow(k))).collect();
        }
        let mut m: BTreeMap<u64, u128> = BTreeMap::new();
        for v in sums {
            *m.entry(v).or_default() += 1;
        }
        m.values().map(|c| c * c).sum()
    }

    #[test]
    fn rep_function_examples() {
        let r = rep_function(&[&[1, 2], &[1, 2]], 2, B).unwrap();
        assert_eq!(r.table.entries(), [(2, 1), (5, 2), (8, 1)]);
        assert_eq!(r.total, 4);
        let r = rep_function(&[&[1]], 5, B).unwrap();
        assert_eq!(r.table.entries(), [(1, 1)]);
        let r = rep_function(&[&[1, 2, 3]], 3, B).unwrap();
        assert_eq!(r.table.entries(), [(1, 1), (8, 1), (27, 1)]);
        assert_eq!(r.total, 3);
        assert_eq!(r.table.get(9), 0);
    }

    #[test]
    fn s_count_examples() {
        assert_eq!(s_count(&[1, 2], 2, 2, B).unwrap().count, 6);
        let c = s_count(&[1, 2, 3], 1, 3, B).unwrap();
        assert_eq!((c.count, c.diagonal_lb), (3, 3));
        assert_eq!(s_count(&[1, 2, 3], 2, 2, B).unwrap().count, 15);
    }

    #[test]
    fn budget_and_domain_errors() {
        let x: Vec<u64> = (1..=100).collect();
        let err = s_count(&x, 3, 3, 10_000).unwrap_err();
        assert!(matches!(err, Error::Budget { estimated: 1_000_000, .. }));
        assert!(rep_function(&[&[]], 2, B).is_err());
        assert!(matches!(
            s_count(&[u64::MAX / 4], 2, 2, B).unwrap_err(),
            Error::Overflow(_)
        ));
    }

    #[test]
    fn split_merge_matches_naive() {
        let sets: [&[u64]; 4] = [&[1, 2, 3, 4, 5], &[2, 3, 5, 7, 11, 13], &[1, 4, 9, 16], &[3, 6, 10, 17, 20, 21, 30]];
        for set in sets {
            for s in 1..=4u32 {
                for k in 1..=4u32 {
                    if (set.len() as u64).pow(s) > 100_000 {
                        continue;
                    }
                    assert_eq!(s_count(set, s, k, B).unwrap().count, naive_s(set, s, k), "{set:?} s={s} k={k}");
                }
            }
        }
    }

    #[test]
    fn distinct_bound_examples() {
        let d = distinct_sums_bound(&[&[1, 2], &[1, 2]], 2, B).unwrap();
        assert_eq!(d.distinct, 3);
        assert!((d.lower_bound - 16.0 / 6.0).abs() < 1e-12);
        assert!(d.holds());
        let d = distinct_sums_bound(&[&[1]], 4, B).unwrap();
        assert_eq!((d.distinct, d.lower_bound), (1, 1.0));
        let x: Vec<u64> = (1..=10).collect();
        let d = distinct_sums_bound(&[&x, &x], 3, B).unwrap();
        assert!(d.holds() && d.slack() >= 0.0);
    }

    fn naive_tpq(e: &[u64], s: u32, k: u32, p: u64, q: u64) -> u128 {
        let n = e.len();
        let slots = 2 * s as usize;
        let (pk, qk) = (p.pow(k) as i128, q.pow(k) as i128);
        let mut idx = alloc::vec![0usize; slots];
        let mut count = 0;
        loop {
            let v: Vec<i128> = idx.iter().map(|&i| (e[i] as i128).pow(k)).collect();
            let m = s as usize - 1;
            let lhs = pk * (v[..m].iter().sum::<i128>() - v[m..2 * m].iter().sum::<i128>());
            let rhs = qk * (v[2 * m + 1] - v[2 * m]);
            if lhs == rhs {
                count += 1;
            }
            let mut j = 0;
            while j < slots {
                idx[j] += 1;
                if idx[j] < n {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
            if j == slots {
                return count;
            }
        }
    }

    #[test]
    fn t_pq_examples() {
        assert_eq!(t_pq_count(&[1, 3], 2, 2, 2, 5, B).unwrap().count, 4);
        assert_eq!(t_pq_count(&[1], 3, 3, 7, 11, B).unwrap().count, 1);
        assert!(matches!(
            t_pq_count(&[1, 2], 2, 2, 2, 5, B).unwrap_err(),
            Error::NotCoprime { element: 2, prime: 2 }
        ));
        assert!(t_pq_count(&[1, 3], 2, 2, 5, 5, B).is_err());
        assert!(t_pq_count(&[1, 3], 2, 2, 4, 5, B).is_err());
    }

    #[test]
    fn t_pq_matches_naive() {
        let sets: [&[u64]; 3] = [&[1, 3, 5, 7, 9], &[1, 2, 3, 4, 6, 8, 9], &[1, 5, 7, 11]];
        for set in sets {
            for s in 2..=3u32 {
                for k in 1..=3u32 {
                    for (p, q) in [(13, 17), (17, 13), (19, 2)] {
                        if (set.len() as u64).pow(2 * s) > 100_000 {
                            continue;
                        }
                        let fast = t_pq_count(set, s, k, p, q, B).unwrap().count;
                        assert_eq!(fast, naive_tpq(set, s, k, p, q), "{set:?} s={s} k={k} p={p} q={q}");
                    }
                }
            }
        }
    }

    #[test]
    fn lemma1_degenerate_singleton() {
        let w = PrimeWindow {
            lo: 7,
            hi: 7,
            primes: alloc::vec![7],
        };
        let c = lemma1_check_sets(&[1], &w, 5, 3, 2, B).unwrap();
        assert_eq!(c.lhs, 1);
        assert!(c.rhs >= 1 && c.ratio <= 1.0);
    }

    // frozen from an independent Python enumeration
    #[test]
    fn lemma1_pinned_ratios() {
        for (p, lhs, rhs) in [(8.0, 120u128, 184u128), (12.0, 284, 428), (16.0, 1471, 6144)] {
            let c = lemma1_check(3, 2, p, 0.4, 0, B).unwrap();
            assert_eq!((c.lhs, c.rhs), (lhs, rhs), "P={p}");
            assert!(c.ratio <= 2.0);
        }
    }

    #[test]
    fn fit_examples() {
        let f = exponent_fit(&[(10.0, 100), (20.0, 400), (40.0, 1600)]).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-9);
        assert!(exponent_fit(&[(10.0, 100), (20.0, 400)]).is_err());
        assert!(exponent_fit(&[(10.0, 100), (10.0, 400), (40.0, 1600)]).is_err());
        let runs: Vec<(f64, u128)> = [50u64, 100, 200, 400]
            .iter()
            .map(|&p| {
                let x: Vec<u64> = (1..=p).collect();
                (p as f64, s_count(&x, 2, 3, B).unwrap().count)
            })
            .collect();
        assert_eq!(runs.iter().map(|r| r.1).collect::<Vec<_>>(), [5046, 20260, 80888, 322760]);
        let f = exponent_fit(&runs).unwrap();
        assert!((1.9..=2.2).contains(&f.slope), "{}", f.slope);
    }
}
