//! One function per subcommand, each returning a complete [`Report`].

mod cebotarev;
mod ensemble;
mod maps;

use revmap_core::ffield::{is_prime, primes_in};
use revmap_core::PrimeField;
use serde_json::Value;

use crate::args::{Command, PrimeSelection};
use crate::report::{to_value, Report};
use crate::{invalid, CliError};

pub use cebotarev::cebotarev;
pub use ensemble::{involutions, repeats, EXACT_MU_MAX_N};
pub use maps::{henon, map3d, phi5};

/// Largest number of primes a single run may visit.
pub const MAX_PRIMES: usize = 200_000;

/// Widest prime range scanned for primes.
pub const MAX_RANGE_WIDTH: u64 = 20_000_000;

pub fn run(command: &Command) -> Result<Report, CliError> {
    let config = resolved_config(command);
    let (results, checks, table) = match command {
        Command::Involutions(a) => involutions(a)?,
        Command::Repeats(a) => repeats(a)?,
        Command::Henon(a) => henon(a)?,
        Command::Map3d(a) => map3d(a)?,
        Command::Cebotarev(a) => cebotarev(a)?,
        Command::Phi5(a) => phi5(a)?,
    };
    Ok(Report { config, results, checks, table })
}

/// The subcommand arguments plus settings read from the environment.
pub fn resolved_config(command: &Command) -> Value {
    let mut config = to_value(command);
    if let Value::Object(map) = &mut config {
        map.insert("cap_points".into(), Value::from(revmap_core::cap_points()));
    }
    config
}

/// Primes named by `--p` or `--p-min/--p-max`; `None` when neither is given.
pub(crate) fn select_primes(sel: &PrimeSelection) -> Result<Option<Vec<u64>>, CliError> {
    match (sel.p, sel.p_min, sel.p_max) {
        (Some(p), _, _) => {
            if p < 3 || !is_prime(p) {
                return Err(invalid(format!("{p} is not an odd prime")));
            }
            Ok(Some(vec![p]))
        }
        (None, Some(lo), Some(hi)) => {
            if lo > hi {
                return Err(invalid(format!("empty prime range [{lo}, {hi}]")));
            }
            if hi >= PrimeField::MAX_MODULUS {
                return Err(invalid(format!("primes must be below {}", PrimeField::MAX_MODULUS)));
            }
            let width = hi.saturating_sub(lo) + 1;
            if width > MAX_RANGE_WIDTH {
                return Err(CliError::Cap(format!("prime range of width {width} (cap {MAX_RANGE_WIDTH})")));
            }
            let primes = primes_in(lo.max(3), hi);
            if primes.is_empty() {
                return Err(invalid(format!("no odd primes in [{lo}, {hi}]")));
            }
            if primes.len() > MAX_PRIMES {
                return Err(CliError::Cap(format!("{} primes requested (cap {MAX_PRIMES})", primes.len())));
            }
            Ok(Some(primes))
        }
        _ => Ok(None),
    }
}

pub(crate) type Output = (Value, Vec<crate::report::Check>, crate::report::Table);
