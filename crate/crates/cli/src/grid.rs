//! Grid specifications `lo:hi:steps[:log|:lin]` and plain scalars.

use std::str::FromStr;

use crate::error::CliError;

/// Hard cap on the number of evaluation points one invocation may expand to.
pub const MAX_POINTS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
    /// Not given on the command line; the caller picks.
    Default,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    Value(f64),
    Range { lo: f64, hi: f64, steps: usize, spacing: Spacing },
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| -> Result<f64, String> {
            let v: f64 = t.trim().parse().map_err(|_| format!("invalid number `{t}`"))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(format!("non-finite value `{t}`"))
            }
        };
        match parts.as_slice() {
            [v] => Ok(Grid::Value(num(v)?)),
            [lo, hi, steps, rest @ ..] if rest.len() <= 1 => {
                let lo = num(lo)?;
                let hi = num(hi)?;
                let steps: usize = steps.trim().parse().map_err(|_| format!("invalid step count `{steps}`"))?;
                if steps == 0 {
                    return Err("step count must be at least 1".into());
                }
                if steps > MAX_POINTS {
                    return Err(format!("grid of {steps} points exceeds the cap of {MAX_POINTS}"));
                }
                if hi < lo {
                    return Err(format!("grid upper end {hi} is below lower end {lo}"));
                }
                let spacing = match rest.first().map(|t| t.trim()) {
                    None => Spacing::Default,
                    Some("log") => Spacing::Log,
                    Some("lin") => Spacing::Linear,
                    Some(t) => return Err(format!("unknown spacing `{t}`, expected `log` or `lin`")),
                };
                if spacing == Spacing::Log && lo <= 0.0 {
                    return Err("log spacing needs a positive lower end".into());
                }
                Ok(Grid::Range { lo, hi, steps, spacing })
            }
            _ => Err(format!("expected a number or lo:hi:steps[:log|:lin], got `{s}`")),
        }
    }
}

impl Grid {
    pub fn len(&self) -> usize {
        match self {
            Grid::Value(_) => 1,
            Grid::Range { steps, .. } => *steps,
        }
    }

    /// Expands the grid; `log_default` decides spacing when none was given.
    pub fn expand(&self, log_default: bool) -> Vec<f64> {
        match *self {
            Grid::Value(v) => vec![v],
            Grid::Range { lo, hi, steps, spacing } => {
                let log = match spacing {
                    Spacing::Log => true,
                    Spacing::Linear => false,
                    Spacing::Default => log_default && lo > 0.0,
                };
                if steps == 1 {
                    return vec![lo];
                }
                let last = (steps - 1) as f64;
                (0..steps)
                    .map(|i| {
                        if i == steps - 1 {
                            hi
                        } else if log {
                            (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / last).exp()
                        } else {
                            lo + (hi - lo) * i as f64 / last
                        }
                    })
                    .collect()
            }
        }
    }
}

/// Rejects products of grids that would exceed [`MAX_POINTS`].
pub fn check_total(sizes: &[usize]) -> Result<(), CliError> {
    let total = sizes.iter().try_fold(1usize, |acc, &n| acc.checked_mul(n));
    match total {
        Some(n) if n <= MAX_POINTS => Ok(()),
        _ => Err(CliError::Usage(format!("grids expand to more than {MAX_POINTS} evaluation points"))),
    }
}

/// Comma-separated list such as `0,1,2`.
#[derive(Debug, Clone, PartialEq)]
pub struct List<T>(pub Vec<T>);

impl<T: FromStr> FromStr for List<T> {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let items: Result<Vec<T>, _> = s.split(',').map(|t| t.trim().parse::<T>()).collect();
        match items {
            Ok(v) if !v.is_empty() => Ok(List(v)),
            _ => Err(format!("invalid list `{s}`")),
        }
    }
}
