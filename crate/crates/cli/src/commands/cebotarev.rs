//! `cebotarev`: fixed points of a random permutation of `d` roots against
//! root counts of Φ₅ modulo primes.

use rayon::prelude::*;
use revmap_core::polyroots::{count_roots, phi5};
use revmap_core::theory::{cebotarev_nu, mu_poisson};
use revmap_core::PrimeField;
use num_traits::ToPrimitive;
use serde_json::json;

use super::{select_primes, Output};
use crate::args::CebotarevArgs;
use crate::report::{Check, Table};
use crate::{invalid, CliError};

pub const TV_BOUND: f64 = 0.03;
pub const MAX_DEGREE: u64 = 64;
const PHI5_DEGREE: u64 = 6;

/// Reference table for degree 6, as fractions.
const DEGREE_SIX_TABLE: [&str; 7] = ["53/144", "11/30", "3/16", "1/18", "1/48", "0", "1/720"];

pub fn cebotarev(a: &CebotarevArgs) -> Result<Output, CliError> {
    let d = a.degree;
    if d == 0 || d > MAX_DEGREE {
        return Err(invalid(format!("--degree must lie in [1, {MAX_DEGREE}]")));
    }
    let primes = select_primes(&a.primes)?;
    if primes.is_some() && d != PHI5_DEGREE {
        return Err(invalid("empirical frequencies come from Φ₅ and need --degree 6"));
    }
    let counts: Option<Vec<usize>> = primes
        .as_ref()
        .map(|ps| {
            ps.par_iter()
                .map(|&p| Ok(count_roots(&phi5(PrimeField::new(p)?))?))
                .collect::<Result<Vec<_>, CliError>>()
        })
        .transpose()?;
    let empirical = |i: u64| {
        counts.as_ref().map(|c| c.iter().filter(|&&r| r as u64 == i).count() as f64 / c.len() as f64)
    };

    let mut table = Table::new(&["i", "nu", "nu_decimal", "poisson", "empirical"]);
    let mut rows = Vec::new();
    let mut tv = 0.0;
    let mut fractions = Vec::new();
    for i in 0..=d {
        let nu = cebotarev_nu(d, i);
        let nu_f = nu.to_f64().unwrap_or(f64::NAN);
        let po = mu_poisson(1.0, i);
        let emp = empirical(i);
        if let Some(e) = emp {
            tv += (e - nu_f).abs();
        }
        table.push(vec![i.into(), nu.to_string().into(), nu_f.into(), po.into(), emp.into()]);
        rows.push(json!({"i": i, "nu": nu.to_string(), "nu_decimal": nu_f, "poisson": po, "empirical": emp}));
        fractions.push(nu.to_string());
    }
    let mut checks = Vec::new();
    if d == PHI5_DEGREE {
        let reference: Vec<String> = DEGREE_SIX_TABLE.iter().map(|s| s.to_string()).collect();
        checks.push(Check::equal("nu_table", fractions, reference));
    }
    let tv = counts.as_ref().map(|c| {
        // Root counts above d cannot occur, so the sum covers all mass.
        debug_assert!(c.iter().all(|&r| r as u64 <= d));
        tv / 2.0
    });
    if let Some(tv) = tv {
        checks.push(Check::at_most("tv_empirical_nu", tv, TV_BOUND));
    }
    let results = json!({
        "degree": d,
        "primes": counts.as_ref().map(Vec::len),
        "table": rows,
        "tv_empirical_nu": tv,
    });
    Ok((results, checks, table))
}
