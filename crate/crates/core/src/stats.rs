//! Monte Carlo trials over `E(g, h, N)` and the estimators compared
//! against [`crate::theory`].
//!
//! Trial `k` draws from the ChaCha stream `k` of the master seed, so a run
//! is a pure function of `(params, trials, master_seed)` whatever the
//! number of rayon workers.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{compose, decompose, CycleDecomposition, SymmetryClass};
use crate::sampler::{enumerate_pairs, sample_pair_with, trial_rng};
use crate::theory::{r_limit, TheoryParams};

/// Cap on `N · trials` for a single run.
pub const DEFAULT_WORK_CAP: u128 = 20_000_000_000;

/// Points on cycles of one period, split by symmetry class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassPoints {
    pub sym_odd: u64,
    pub sym_even_g: u64,
    pub sym_even_h: u64,
    pub asym: u64,
}

impl ClassPoints {
    pub fn add(&mut self, class: SymmetryClass, points: u64) {
        match class {
            SymmetryClass::SymmetricOdd => self.sym_odd += points,
            SymmetryClass::SymmetricEvenOnG => self.sym_even_g += points,
            SymmetryClass::SymmetricEvenOnH => self.sym_even_h += points,
            SymmetryClass::Asymmetric => self.asym += points,
        }
    }

    pub fn symmetric(&self) -> u64 {
        self.sym_odd + self.sym_even_g + self.sym_even_h
    }

    pub fn total(&self) -> u64 {
        self.symmetric() + self.asym
    }

    fn merge(&mut self, other: &ClassPoints) {
        self.sym_odd += other.sym_odd;
        self.sym_even_g += other.sym_even_g;
        self.sym_even_h += other.sym_even_h;
        self.asym += other.asym;
    }
}

/// Period histogram of one sampled pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialResult {
    /// Stream index under the master seed.
    pub trial: u64,
    pub n: u64,
    /// Period → points on cycles of that period.
    pub period_histogram: BTreeMap<u64, ClassPoints>,
    pub sym_cycle_count: u64,
    pub asym_cycle_count: u64,
}

impl TrialResult {
    pub fn from_decomposition(trial: u64, d: &CycleDecomposition) -> Self {
        let mut period_histogram: BTreeMap<u64, ClassPoints> = BTreeMap::new();
        let (mut sym, mut asym) = (0, 0);
        for c in &d.cycles {
            let t = c.len() as u64;
            period_histogram.entry(t).or_default().add(c.class, t);
            if c.class.is_symmetric() {
                sym += 1;
            } else {
                asym += 1;
            }
        }
        TrialResult { trial, n: d.n as u64, period_histogram, sym_cycle_count: sym, asym_cycle_count: asym }
    }

    /// Number of symmetric cycles of period `t`.
    pub fn symmetric_cycles_of(&self, t: u64) -> u64 {
        self.period_histogram.get(&t).map_or(0, |c| c.symmetric() / t)
    }

    pub fn cycles_of(&self, t: u64) -> u64 {
        self.period_histogram.get(&t).map_or(0, |c| c.total() / t)
    }
}

/// Runs `trials` independent samples on the current rayon pool.
pub fn run_trials(params: &TheoryParams, trials: u64, master_seed: u64) -> Result<Vec<TrialResult>> {
    run_trials_capped(params.n, params.g, params.h, trials, master_seed, DEFAULT_WORK_CAP)
}

pub fn run_trials_capped(n: u64, g: u64, h: u64, trials: u64, master_seed: u64, work_cap: u128) -> Result<Vec<TrialResult>> {
    crate::sampler::check_parity(n, g, h)?;
    if trials == 0 {
        return Err(Error::InvalidArgument("at least one trial is required".into()));
    }
    let work = n as u128 * trials as u128;
    if work > work_cap {
        return Err(Error::ResourceCap { what: "N x trials (lower --trials or --n)", requested: work, cap: work_cap });
    }
    (0..trials)
        .into_par_iter()
        .map(|k| run_one(n as usize, g as usize, h as usize, master_seed, k))
        .collect()
}

fn run_one(n: usize, g: usize, h: usize, master_seed: u64, k: u64) -> Result<TrialResult> {
    let mut rng = trial_rng(master_seed, k);
    let (gi, hi) = sample_pair_with(n, g, h, &mut rng)?;
    let l = compose(&gi, &hi)?;
    let d = decompose(&l, &gi, &hi)?;
    Ok(TrialResult::from_decomposition(k, &d))
}

/// Sum of the histograms of many trials; merge order does not matter.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AggregateHistogram {
    pub trials: u64,
    pub n: u64,
    pub periods: BTreeMap<u64, ClassPoints>,
}

impl AggregateHistogram {
    pub fn from_results(results: &[TrialResult]) -> Self {
        let mut agg = AggregateHistogram::default();
        for r in results {
            agg.push(r);
        }
        agg
    }

    pub fn push(&mut self, r: &TrialResult) {
        self.trials += 1;
        self.n = r.n;
        for (t, c) in &r.period_histogram {
            self.periods.entry(*t).or_default().merge(c);
        }
    }

    pub fn merge(&mut self, other: &AggregateHistogram) {
        self.trials += other.trials;
        self.n = self.n.max(other.n);
        for (t, c) in &other.periods {
            self.periods.entry(*t).or_default().merge(c);
        }
    }

    fn denominator(&self) -> f64 {
        (self.n as f64) * (self.trials as f64)
    }

    pub fn masses(&self) -> ClassMasses {
        let mut sum = ClassPoints::default();
        let mut odd = 0u64;
        for (t, c) in &self.periods {
            sum.merge(c);
            if t % 2 == 1 {
                odd += c.total();
            }
        }
        let d = self.denominator();
        ClassMasses {
            sym_odd: sum.sym_odd as f64 / d,
            sym_even_g: sum.sym_even_g as f64 / d,
            sym_even_h: sum.sym_even_h as f64 / d,
            asym: sum.asym as f64 / d,
            odd_period: odd as f64 / d,
            even_period: (sum.total() - odd) as f64 / d,
        }
    }
}

/// Mean fractions of `Ω` by cycle class and by period parity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMasses {
    pub sym_odd: f64,
    pub sym_even_g: f64,
    pub sym_even_h: f64,
    pub asym: f64,
    pub odd_period: f64,
    pub even_period: f64,
}

/// `R̂_N` on a grid, averaged over trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalDistribution {
    pub n: u64,
    pub g: u64,
    pub h: u64,
    pub trials: u64,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
}

impl EmpiricalDistribution {
    /// `R(x)` at each grid point.
    pub fn theory(&self) -> Vec<f64> {
        self.grid.iter().map(|&x| r_limit(x).unwrap_or(f64::NAN)).collect()
    }

    /// `sup_x |R̂_N(x) - R(x)|` over the grid.
    pub fn sup_distance(&self) -> f64 {
        self.values.iter().zip(self.theory()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

/// `x ∈ {0.05, 0.10, …, 5.00}`.
pub fn default_grid() -> Vec<f64> {
    (1..=100).map(|k| k as f64 / 20.0).collect()
}

/// Largest period counted at scaled length `x`: `⌊x z⌋`.
///
/// A relative slack of `1e-9` absorbs binary rounding of decimal grid points.
pub fn period_cutoff(x: f64, z: f64) -> u64 {
    let v = x * z;
    (v + v.abs() * 1e-9).floor().max(0.0) as u64
}

pub fn empirical_r(params: &TheoryParams, results: &[TrialResult], grid: &[f64]) -> Result<EmpiricalDistribution> {
    if results.is_empty() {
        return Err(Error::InvalidArgument("no trial results".into()));
    }
    Ok(empirical_r_from(params, &AggregateHistogram::from_results(results), grid))
}

pub fn empirical_r_from(params: &TheoryParams, agg: &AggregateHistogram, grid: &[f64]) -> EmpiricalDistribution {
    let z = params.z_f64();
    let d = agg.denominator();
    let cumulative: Vec<(u64, u64)> = agg
        .periods
        .iter()
        .scan(0u64, |acc, (t, c)| {
            *acc += c.total();
            Some((*t, *acc))
        })
        .collect();
    let values = grid
        .iter()
        .map(|&x| {
            let cut = period_cutoff(x, z);
            let idx = cumulative.partition_point(|(t, _)| *t <= cut);
            if idx == 0 {
                0.0
            } else {
                cumulative[idx - 1].1 as f64 / d
            }
        })
        .collect();
    EmpiricalDistribution { n: params.n, g: params.g, h: params.h, trials: agg.trials, grid: grid.to_vec(), values }
}

pub fn asymmetric_mass(results: &[TrialResult]) -> Result<f64> {
    nonempty(results)?;
    Ok(AggregateHistogram::from_results(results).masses().asym)
}

/// `(even-period mass, odd-period mass)`.
pub fn even_odd_mass(results: &[TrialResult]) -> Result<(f64, f64)> {
    nonempty(results)?;
    let m = AggregateHistogram::from_results(results).masses();
    Ok((m.even_period, m.odd_period))
}

pub fn class_masses(results: &[TrialResult]) -> Result<ClassMasses> {
    nonempty(results)?;
    Ok(AggregateHistogram::from_results(results).masses())
}

/// Mean length over all cycles of all trials.
pub fn mean_cycle_length(results: &[TrialResult]) -> Result<f64> {
    nonempty(results)?;
    let cycles: u64 = results.iter().map(|r| r.sym_cycle_count + r.asym_cycle_count).sum();
    let points: u64 = results.iter().map(|r| r.n).sum();
    Ok(points as f64 / cycles as f64)
}

fn nonempty(results: &[TrialResult]) -> Result<()> {
    if results.is_empty() {
        return Err(Error::InvalidArgument("no trial results".into()));
    }
    Ok(())
}

/// Trials with exactly `i` cycles of period `t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepetitionHistogram {
    pub t: u64,
    pub counts: BTreeMap<u64, u64>,
    pub trials: u64,
}

impl RepetitionHistogram {
    pub fn frequency(&self, i: u64) -> f64 {
        self.counts.get(&i).copied().unwrap_or(0) as f64 / self.trials as f64
    }

    pub fn max_count(&self) -> u64 {
        self.counts.keys().next_back().copied().unwrap_or(0)
    }

    /// Total variation distance to a distribution on `0, 1, 2, …`.
    pub fn total_variation(&self, pmf: impl Fn(u64) -> f64, support_end: u64) -> f64 {
        let end = support_end.max(self.max_count());
        let mut tv = 0.0;
        let mut covered = 0.0;
        for i in 0..=end {
            let p = pmf(i);
            covered += p;
            tv += (self.frequency(i) - p).abs();
        }
        // Mass of the reference beyond the support end.
        tv += (1.0 - covered).max(0.0);
        tv / 2.0
    }
}

/// Repetition counts of symmetric `t`-cycles (all `t`-cycles with `all_cycles`).
pub fn repetition_histogram(results: &[TrialResult], t: u64, all_cycles: bool) -> Result<RepetitionHistogram> {
    if t == 0 {
        return Err(Error::InvalidArgument("period must be at least 1".into()));
    }
    let mut counts = BTreeMap::new();
    for r in results {
        let i = if all_cycles { r.cycles_of(t) } else { r.symmetric_cycles_of(t) };
        *counts.entry(i).or_insert(0) += 1;
    }
    Ok(RepetitionHistogram { t, counts, trials: results.len() as u64 })
}

/// Exhaustive statistics of a small pair space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactEnsemble {
    pub n: u64,
    pub g: u64,
    pub h: u64,
    pub pairs: u64,
    /// Period → points summed over all pairs.
    pub mass: BTreeMap<u64, ClassPoints>,
    /// Period → (symmetric `t`-cycle count → number of pairs).
    pub symmetric_repeats: BTreeMap<u64, BTreeMap<u64, u64>>,
    /// Pairs whose symmetric cycle count differs from `(g+h)/2`.
    pub symmetric_count_violations: u64,
}

impl ExactEnsemble {
    fn average(&self, points: u64) -> BigRational {
        BigRational::new(BigInt::from(points), BigInt::from(self.pairs) * BigInt::from(self.n))
    }

    pub fn class_mass(&self, t: u64, class: SymmetryClass) -> BigRational {
        let c = self.mass.get(&t).copied().unwrap_or_default();
        let pts = match class {
            SymmetryClass::SymmetricOdd => c.sym_odd,
            SymmetryClass::SymmetricEvenOnG => c.sym_even_g,
            SymmetryClass::SymmetricEvenOnH => c.sym_even_h,
            SymmetryClass::Asymmetric => c.asym,
        };
        self.average(pts)
    }

    pub fn total_mass(&self) -> BigRational {
        self.average(self.mass.values().map(ClassPoints::total).sum())
    }

    /// Fraction of pairs with exactly `i` symmetric `t`-cycles.
    pub fn repeat_frequency(&self, t: u64, i: u64) -> BigRational {
        let hits = self.symmetric_repeats.get(&t).and_then(|m| m.get(&i)).copied().unwrap_or(0);
        BigRational::new(BigInt::from(hits), BigInt::from(self.pairs))
    }

    pub fn pair_count(&self) -> BigUint {
        BigUint::from(self.pairs)
    }
}

/// Enumerates all of `E(g, h, N)` (`N` within the enumeration cap).
pub fn enumerate_ensemble(n: u64, g: u64, h: u64) -> Result<ExactEnsemble> {
    let mut ens = ExactEnsemble {
        n,
        g,
        h,
        pairs: 0,
        mass: BTreeMap::new(),
        symmetric_repeats: BTreeMap::new(),
        symmetric_count_violations: 0,
    };
    for (gi, hi) in enumerate_pairs(n as usize, g as usize, h as usize)? {
        let d = decompose(&compose(&gi, &hi)?, &gi, &hi)?;
        let r = TrialResult::from_decomposition(ens.pairs, &d);
        ens.pairs += 1;
        if 2 * r.sym_cycle_count != g + h {
            ens.symmetric_count_violations += 1;
        }
        for (t, c) in &r.period_histogram {
            ens.mass.entry(*t).or_default().merge(c);
        }
        for t in 1..=n {
            *ens.symmetric_repeats.entry(t).or_default().entry(r.symmetric_cycles_of(t)).or_insert(0) += 1;
        }
    }
    Ok(ens)
}

/// Sum of the exact rationals, for tests and reports.
pub fn sum_rationals<'a>(it: impl IntoIterator<Item = &'a BigRational>) -> BigRational {
    it.into_iter().fold(BigRational::zero(), |a, b| a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::{expected_p_asym, expected_p_sym_odd};
    use num_traits::ToPrimitive;

    #[test]
    fn single_pair_space_is_forced() {
        let results = run_trials_capped(2, 2, 2, 5, 7, DEFAULT_WORK_CAP).unwrap();
        assert_eq!(results.len(), 5);
        for r in &results {
            assert_eq!(r.sym_cycle_count, 2);
            assert_eq!(r.asym_cycle_count, 0);
            assert_eq!(r.period_histogram[&1].sym_odd, 2);
        }
        let h = repetition_histogram(&results, 1, false).unwrap();
        assert_eq!(h.counts, BTreeMap::from([(2, 5)]));
        assert_eq!(asymmetric_mass(&results).unwrap(), 0.0);
    }

    #[test]
    fn all_asymmetric_space() {
        let results = run_trials_capped(2, 0, 0, 3, 1, DEFAULT_WORK_CAP).unwrap();
        assert_eq!(asymmetric_mass(&results).unwrap(), 1.0);
    }

    #[test]
    fn even_only_space() {
        let results = run_trials_capped(2, 2, 0, 3, 1, DEFAULT_WORK_CAP).unwrap();
        assert_eq!(even_odd_mass(&results).unwrap(), (1.0, 0.0));
    }

    #[test]
    fn fixed_point_mass_matches_theory() {
        let p = TheoryParams::new(4, 2, 2).unwrap();
        let trials = 100_000u64;
        let results = run_trials(&p, trials, 3).unwrap();
        let agg = AggregateHistogram::from_results(&results);
        let ones = agg.periods.get(&1).copied().unwrap_or_default();
        let denom = 4.0 * trials as f64;
        // Period-1 points also include asymmetric pairs {x}, {y} where G and H swap x and y.
        let checks = [
            (ones.sym_odd as f64 / denom, expected_p_sym_odd(&p, 1).to_f64().unwrap(), 0.25),
            (ones.asym as f64 / denom, expected_p_asym(&p, 1).to_f64().unwrap(), 1.0 / 12.0),
        ];
        for (mean, exact, literal) in checks {
            assert!((exact - literal).abs() < 1e-15);
            // A [0, 1]-valued variable with mean m has variance at most m(1-m).
            let se = (exact * (1.0 - exact) / trials as f64).sqrt();
            assert!((mean - exact).abs() < 3.0 * se, "mean {mean} vs {exact} (se {se})");
        }
    }

    #[test]
    fn empirical_r_edges() {
        let p = TheoryParams::new(400, 20, 20).unwrap();
        let results = run_trials(&p, 20, 9).unwrap();
        let d = empirical_r(&p, &results, &[0.0, 0.001, 1.0, 100.0]).unwrap();
        assert_eq!(d.values[0], 0.0);
        assert_eq!(d.values[1], 0.0);
        assert!((d.values[3] - 1.0).abs() < 1e-15);
        assert!(d.values.windows(2).all(|w| w[0] <= w[1]));
        assert!(empirical_r(&p, &[], &[1.0]).is_err());
    }

    #[test]
    fn cutoff_handles_decimal_grid() {
        assert_eq!(period_cutoff(0.05, 200.0), 10);
        assert_eq!(period_cutoff(0.15, 200.0), 30);
        assert_eq!(period_cutoff(0.0, 200.0), 0);
        for k in 1..=100u64 {
            assert_eq!(period_cutoff(k as f64 / 20.0, 200.0), 10 * k);
        }
    }

    #[test]
    fn work_cap() {
        assert!(matches!(run_trials_capped(1000, 10, 10, 100, 0, 10_000), Err(Error::ResourceCap { .. })));
        assert!(matches!(run_trials_capped(5, 2, 2, 1, 0, 10_000), Err(Error::Parity { .. })));
    }

    #[test]
    fn histogram_merge_is_order_independent() {
        let p = TheoryParams::new(200, 10, 14).unwrap();
        let results = run_trials(&p, 40, 5).unwrap();
        let whole = AggregateHistogram::from_results(&results);
        let (a, b) = results.split_at(17);
        let mut left = AggregateHistogram::from_results(b);
        left.merge(&AggregateHistogram::from_results(a));
        assert_eq!(whole, left);
    }

    #[test]
    fn trials_are_independent_of_pool_size() {
        let p = TheoryParams::new(3000, 30, 50).unwrap();
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| run_trials(&p, 16, 11)).unwrap();
        let b = four.install(|| run_trials(&p, 16, 11)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn trial_invariants() {
        let p = TheoryParams::new(5000, 40, 60).unwrap();
        for r in run_trials(&p, 10, 1).unwrap() {
            let total: u64 = r.period_histogram.values().map(ClassPoints::total).sum();
            assert_eq!(total, 5000);
            assert_eq!(r.sym_cycle_count, 50);
            assert_eq!(r.asym_cycle_count % 2, 0);
        }
    }

    #[test]
    fn total_variation_of_identical_distribution() {
        let h = RepetitionHistogram { t: 1, counts: BTreeMap::from([(0, 1), (1, 3)]), trials: 4 };
        let pmf = |i| match i {
            0 => 0.25,
            1 => 0.75,
            _ => 0.0,
        };
        assert!(h.total_variation(pmf, 5) < 1e-15);
        assert!((h.total_variation(|i| if i == 2 { 1.0 } else { 0.0 }, 5) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ensemble_small() {
        let e = enumerate_ensemble(2, 2, 0).unwrap();
        assert_eq!(e.pairs, 1);
        assert!(num_traits::One::is_one(&e.class_mass(2, SymmetryClass::SymmetricEvenOnG)));
        assert_eq!(e.symmetric_count_violations, 0);
    }
}
