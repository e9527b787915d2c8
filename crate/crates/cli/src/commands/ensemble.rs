//! `involutions` and `repeats`: the random-pair ensemble, simulated or enumerated.

use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use revmap_core::sampler::{check_parity, DEFAULT_ENUMERATION_CAP};
use revmap_core::stats::{
    default_grid, empirical_r_from, enumerate_ensemble, repetition_histogram, run_trials, sum_rationals,
    AggregateHistogram, ExactEnsemble,
};
use revmap_core::theory::{
    expected_p_asym, expected_p_sym, expected_p_sym_even, expected_p_sym_odd, mu_exact, mu_poisson,
    mu_single_line_form, reconstruct_p_from_mu,
};
use revmap_core::{Line, SymmetryClass, TheoryParams};
use serde::Serialize;
use serde_json::json;

use super::Output;
use crate::args::{EnsembleArgs, InvolutionsArgs, RepeatsArgs};
use crate::report::{Check, Table};
use crate::{invalid, CliError};

/// Largest `N` for which `repeats` evaluates the exact repetition law.
pub const EXACT_MU_MAX_N: u64 = 300;

/// Tolerance on the sup distance between `R̂_N` and `R`.
pub const SUP_DISTANCE_BOUND: f64 = 0.02;
/// Asymmetric mass must lie in this multiple range of `1/(g+h)`.
pub const ASYM_RATIO_RANGE: (f64, f64) = (0.5, 2.0);
/// Tolerance on the odd symmetric mass around `2gh/(g+h)²`.
pub const ODD_MASS_TOLERANCE: f64 = 0.05;
pub const TV_POISSON_BOUND: f64 = 0.05;
/// `μ̂(t, 0)` lower bound when `f ≤ DELTA_REGIME_F`.
pub const DELTA_REGIME_MU0: f64 = 0.98;
pub const DELTA_REGIME_F: f64 = 0.01;

fn params(e: &EnsembleArgs) -> Result<TheoryParams, CliError> {
    check_parity(e.n, e.g, e.h)?;
    if e.trials == 0 {
        return Err(invalid("--trials must be at least 1"));
    }
    Ok(TheoryParams::new(e.n, e.g, e.h)?)
}

fn class_name(c: SymmetryClass) -> &'static str {
    match c {
        SymmetryClass::SymmetricOdd => "symmetric_odd",
        SymmetryClass::SymmetricEvenOnG => "symmetric_even_g",
        SymmetryClass::SymmetricEvenOnH => "symmetric_even_h",
        SymmetryClass::Asymmetric => "asymmetric",
    }
}

fn theory_mass(p: &TheoryParams, t: u64, class: SymmetryClass) -> BigRational {
    let zero = BigRational::default();
    match class {
        SymmetryClass::SymmetricOdd if t % 2 == 1 => expected_p_sym_odd(p, t.div_ceil(2)),
        SymmetryClass::SymmetricEvenOnG if t.is_multiple_of(2) => expected_p_sym_even(p, t / 2, Line::G),
        SymmetryClass::SymmetricEvenOnH if t.is_multiple_of(2) => expected_p_sym_even(p, t / 2, Line::H),
        SymmetryClass::Asymmetric => expected_p_asym(p, t),
        _ => zero,
    }
}

fn enumerate(e: &EnsembleArgs) -> Result<ExactEnsemble, CliError> {
    if e.n > DEFAULT_ENUMERATION_CAP as u64 {
        return Err(CliError::Cap(format!("--exact enumerates the pair space and needs N <= {DEFAULT_ENUMERATION_CAP}")));
    }
    Ok(enumerate_ensemble(e.n, e.g, e.h)?)
}

#[derive(Serialize)]
struct ExactMassRow {
    t: u64,
    class: &'static str,
    enumerated: String,
    theory: String,
    equal: bool,
}

pub fn involutions(a: &InvolutionsArgs) -> Result<Output, CliError> {
    let p = params(&a.ensemble)?;
    if a.exact {
        involutions_exact(&a.ensemble, &p)
    } else {
        involutions_sampled(a, &p)
    }
}

fn involutions_exact(e: &EnsembleArgs, p: &TheoryParams) -> Result<Output, CliError> {
    let ens = enumerate(e)?;
    let mut rows = Vec::new();
    let mut table = Table::new(&["t", "class", "enumerated", "theory"]);
    for t in 1..=e.n {
        for class in SymmetryClass::ALL {
            let enumerated = ens.class_mass(t, class);
            let theory = theory_mass(p, t, class);
            if enumerated == BigRational::default() && theory == BigRational::default() {
                continue;
            }
            table.push(vec![t.into(), class_name(class).into(), enumerated.to_string().into(), theory.to_string().into()]);
            rows.push(ExactMassRow {
                t,
                class: class_name(class),
                equal: enumerated == theory,
                enumerated: enumerated.to_string(),
                theory: theory.to_string(),
            });
        }
    }
    let mismatches = rows.iter().filter(|r| !r.equal).count();
    let total = ens.total_mass();
    let results = json!({
        "pairs": ens.pair_count().to_string(),
        "masses": rows,
        "total_mass": total.to_string(),
        "symmetric_count_violations": ens.symmetric_count_violations,
    });
    let checks = vec![
        Check::equal("exact_mass_mismatches", mismatches, 0),
        Check::equal("total_mass", total.to_string(), "1".to_string()),
        Check::equal("symmetric_count_violations", ens.symmetric_count_violations, 0),
    ];
    Ok((results, checks, table))
}

fn involutions_sampled(a: &InvolutionsArgs, p: &TheoryParams) -> Result<Output, CliError> {
    let e = &a.ensemble;
    let grid = match &a.grid {
        Some(g) if g.is_empty() || g.iter().any(|x| !x.is_finite() || *x < 0.0) => {
            return Err(invalid("--grid needs finite nonnegative values"))
        }
        Some(g) => g.clone(),
        None => default_grid(),
    };
    let results = run_trials(p, e.trials, e.seed)?;
    let agg = AggregateHistogram::from_results(&results);
    let dist = empirical_r_from(p, &agg, &grid);
    let theory = dist.theory();
    let sup = dist.sup_distance();
    let m = agg.masses();
    let expected_sym = (e.g + e.h) / 2;
    let sym_min = results.iter().map(|r| r.sym_cycle_count).min().unwrap_or(0);
    let sym_max = results.iter().map(|r| r.sym_cycle_count).max().unwrap_or(0);
    let sym_violations = results.iter().filter(|r| r.sym_cycle_count != expected_sym).count();
    let asym_limit = 1.0 / (e.g + e.h) as f64;
    let asym_ratio = m.asym / asym_limit;
    let odd_share = p.odd_share();

    let mut table = Table::new(&["x", "empirical", "theory"]);
    let mut distribution = Vec::with_capacity(grid.len());
    for ((x, emp), th) in grid.iter().zip(&dist.values).zip(&theory) {
        table.push(vec![(*x).into(), (*emp).into(), (*th).into()]);
        distribution.push(json!({"x": x, "empirical": emp, "theory": th}));
    }
    let results = json!({
        "z": p.z_f64(),
        "sup_distance": sup,
        "masses": m,
        "symmetric_mass": m.sym_odd + m.sym_even_g + m.sym_even_h,
        "asymmetric_mass": m.asym,
        "asymmetric_limit": asym_limit,
        "odd_mass": m.sym_odd,
        "even_mass": m.sym_even_g + m.sym_even_h,
        "odd_share_limit": odd_share,
        "symmetric_cycles": {"expected": expected_sym, "min": sym_min, "max": sym_max},
        "distribution": distribution,
    });
    let (lo, hi) = ASYM_RATIO_RANGE;
    let checks = vec![
        Check::at_most("sup_distance", sup, SUP_DISTANCE_BOUND),
        Check::new("asymmetric_mass_ratio", asym_ratio, [lo, hi], (lo..=hi).contains(&asym_ratio)),
        Check::equal("symmetric_cycle_count_violations", sym_violations, 0),
        Check::new(
            "odd_mass",
            m.sym_odd,
            [odd_share - ODD_MASS_TOLERANCE, odd_share + ODD_MASS_TOLERANCE],
            (m.sym_odd - odd_share).abs() <= ODD_MASS_TOLERANCE,
        ),
    ];
    Ok((results, checks, table))
}

pub fn repeats(a: &RepeatsArgs) -> Result<Output, CliError> {
    let p = params(&a.ensemble)?;
    if a.t == 0 || a.t > p.n {
        return Err(invalid(format!("--t must lie in [1, N] = [1, {}]", p.n)));
    }
    if a.exact {
        if a.all_cycles {
            return Err(invalid("--exact compares symmetric cycles only; drop --all-cycles"));
        }
        repeats_exact(&a.ensemble, &p, a.t)
    } else {
        repeats_sampled(a, &p)
    }
}

fn repeats_exact(e: &EnsembleArgs, p: &TheoryParams, t: u64) -> Result<Output, CliError> {
    let ens = enumerate(e)?;
    let alpha = p.repetition(t).alpha;
    let mut table = Table::new(&["i", "enumerated", "mu_exact", "mu_single_line_form", "mu_poisson"]);
    let mut rows = Vec::new();
    let (mut mismatches, mut single_line_diffs) = (0usize, 0usize);
    let mut exact_values = Vec::new();
    for i in 0..=p.n / t {
        let enumerated = ens.repeat_frequency(t, i);
        let exact = mu_exact(p, t, i);
        let single = mu_single_line_form(p, t, i);
        mismatches += usize::from(enumerated != exact);
        single_line_diffs += usize::from(single != exact);
        let poisson = mu_poisson(alpha, i);
        table.push(vec![
            i.into(),
            enumerated.to_string().into(),
            exact.to_string().into(),
            single.to_string().into(),
            poisson.into(),
        ]);
        rows.push(json!({
            "i": i,
            "enumerated": enumerated.to_string(),
            "mu_exact": exact.to_string(),
            "mu_single_line_form": single.to_string(),
            "mu_poisson": poisson,
        }));
        exact_values.push(exact);
    }
    let mu_sum = sum_rationals(&exact_values);
    let reconstructed = reconstruct_p_from_mu(p, t);
    let symmetric = expected_p_sym(p, t);
    let results = json!({
        "pairs": ens.pair_count().to_string(),
        "t": t,
        "alpha": alpha,
        "distribution": rows,
        "reconstructed_p_sym": reconstructed.to_string(),
        "expected_p_sym": symmetric.to_string(),
        "single_line_form_discrepancies": single_line_diffs,
    });
    let checks = vec![
        Check::equal("mu_exact_mismatches", mismatches, 0),
        Check::equal("mu_exact_sum", mu_sum.to_string(), BigRational::one().to_string()),
        Check::equal("reconstructed_p_sym", reconstructed.to_string(), symmetric.to_string()),
    ];
    Ok((results, checks, table))
}

fn repeats_sampled(a: &RepeatsArgs, p: &TheoryParams) -> Result<Output, CliError> {
    let e = &a.ensemble;
    let t = a.t;
    let rp = p.repetition(t);
    let results = run_trials(p, e.trials, e.seed)?;
    let hist = repetition_histogram(&results, t, a.all_cycles)?;
    let symmetric_only = !a.all_cycles;

    let max_i = p.n / t;
    let mut end = hist.max_count();
    if symmetric_only {
        while end < max_i && (end as f64 <= rp.alpha || mu_poisson(rp.alpha, end) >= 1e-6) {
            end += 1;
        }
    }
    let exact: Option<Vec<f64>> = (symmetric_only && p.n <= EXACT_MU_MAX_N)
        .then(|| (0..=end).map(|i| mu_exact(p, t, i).to_f64().unwrap_or(f64::NAN)).collect());

    let mut table = Table::new(&["i", "empirical", "mu_exact", "mu_poisson"]);
    let mut rows = Vec::new();
    for i in 0..=end {
        let emp = hist.frequency(i);
        let ex = exact.as_ref().map(|v| v[i as usize]);
        let po = symmetric_only.then(|| mu_poisson(rp.alpha, i));
        table.push(vec![i.into(), emp.into(), ex.into(), po.into()]);
        rows.push(json!({"i": i, "empirical": emp, "mu_exact": ex, "mu_poisson": po}));
    }
    let mut checks = Vec::new();
    let mut tv_poisson = None;
    let mut tv_exact = None;
    if symmetric_only {
        let tv = hist.total_variation(|i| mu_poisson(rp.alpha, i), end);
        tv_poisson = Some(tv);
        checks.push(Check::at_most("tv_poisson", tv, TV_POISSON_BOUND));
        if let Some(v) = &exact {
            tv_exact = Some(hist.total_variation(|i| v.get(i as usize).copied().unwrap_or(0.0), end));
        }
        if rp.f <= DELTA_REGIME_F {
            let mu0 = hist.frequency(0);
            checks.push(Check::new("mu_hat_0", mu0, format!(">= {DELTA_REGIME_MU0}"), mu0 >= DELTA_REGIME_MU0));
        }
    }
    let results = json!({
        "t": t,
        "counted": if symmetric_only { "symmetric" } else { "all" },
        "repetition": rp,
        "counts": hist.counts,
        "distribution": rows,
        "tv_poisson": tv_poisson,
        "tv_exact": tv_exact,
    });
    Ok((results, checks, table))
}
