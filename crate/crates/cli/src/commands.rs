use std::collections::BTreeSet;

use chi2refine_core::analysis::{self, SizingMode};
use chi2refine_core::approx_normal::survival_approx;
use chi2refine_core::chisq_exact::{central_moment, survival_with};
use chi2refine_core::llt_expansion::{self, BulkRegion};
use chi2refine_core::{ApproxOrder, Chi2Params, SeriesControl, StdCoord};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{ChiSquared, Distribution, Poisson};
use rayon::prelude::*;

use crate::cli::{ConstantsArgs, DetectArgs, LltArgs, Mode, MomentsArgs, RLambda, ScanArgs, SurvivalArgs};
use crate::error::CliError;
use crate::grid::{check_total, Grid};
use crate::output::{Cell, Table};

type Rows = Result<Vec<Vec<Cell>>, CliError>;

fn orders(list: &[u8]) -> Result<Vec<ApproxOrder>, CliError> {
    list.iter().map(|&o| ApproxOrder::new(o).map_err(CliError::from)).collect()
}

fn r_lambda_pairs(r: &Grid, lambda: &Grid, extra: &[usize]) -> Result<Vec<(f64, f64)>, CliError> {
    let mut sizes = vec![r.len(), lambda.len()];
    sizes.extend_from_slice(extra);
    check_total(&sizes)?;
    let rs = r.expand(true);
    let ls = lambda.expand(false);
    Ok(rs.iter().flat_map(|&r| ls.iter().map(move |&l| (r, l))).collect())
}

fn warn_validity(pairs: impl IntoIterator<Item = (f64, f64)>) {
    let mut seen = BTreeSet::new();
    for (r, l) in pairs {
        if l > r.sqrt() && seen.insert((r.to_bits(), l.to_bits())) {
            eprintln!("warning: lambda = {l} exceeds sqrt(r) at r = {r}; the approximation theory assumes lambda = o(sqrt(r))");
        }
    }
}

pub fn survival(args: &SurvivalArgs, ctl: &SeriesControl) -> Result<Table, CliError> {
    let p = Chi2Params::new(args.r, args.lambda)?;
    let points: Vec<f64> = match (&args.a, &args.delta) {
        (Some(a), _) => {
            check_total(&[a.len()])?;
            a.expand(false)
        }
        (None, Some(d)) => {
            check_total(&[d.len()])?;
            d.expand(false).into_iter().map(|d| StdCoord::from_delta(p, d).to_x()).collect()
        }
        (None, None) => return Err(CliError::Usage("one of --a or --delta is required".into())),
    };
    warn_validity([(p.r(), p.lambda())]);
    let rows: Rows = points
        .par_iter()
        .map(|&a| {
            let exact = survival_with(&p, a, ctl)?;
            let approx: Vec<f64> = ApproxOrder::ALL.iter().map(|&o| survival_approx(&p, a, o)).collect();
            let mut row = vec![Cell::Num(a), Cell::Num(p.coord(a).delta), Cell::Num(exact)];
            row.extend(approx.iter().map(|&v| Cell::Num(v)));
            row.extend(approx.iter().map(|&v| Cell::Num((v - exact).abs())));
            Ok(row)
        })
        .collect();
    let mut t = Table::new(&[
        "a",
        "delta",
        "exact",
        "approx_0",
        "approx_1",
        "approx_2",
        "approx_3",
        "abs_err_0",
        "abs_err_1",
        "abs_err_2",
        "abs_err_3",
    ]);
    rows?.into_iter().for_each(|r| t.push(r));
    Ok(t)
}

pub fn scan(args: &ScanArgs, ctl: &SeriesControl) -> Result<Table, CliError> {
    let orders = orders(&args.order.0)?;
    let pairs = r_lambda_pairs(&args.r, &args.lambda, &[orders.len()])?;
    let jobs: Vec<(f64, f64, ApproxOrder)> =
        pairs.iter().flat_map(|&(r, l)| orders.iter().map(move |&o| (r, l, o))).collect();
    let rows: Rows = jobs
        .par_iter()
        .map(|&(r, l, o)| {
            let s = analysis::scan_max_error(&Chi2Params::new(r, l)?, o, ctl)?;
            Ok(vec![
                Cell::Num(r),
                Cell::Num(l),
                Cell::Int(o.as_u8().into()),
                Cell::Num(s.max_error),
                Cell::Num(s.argmax_delta),
                Cell::Num(s.scaled_error()),
            ])
        })
        .collect();
    let rows = rows?;
    warn_validity(pairs);
    let mut t = Table::new(&["r", "lambda", "order", "max_error", "argmax_delta", "scaled_error"]);
    rows.into_iter().for_each(|r| t.push(r));
    Ok(t)
}

pub fn constants(args: &ConstantsArgs) -> Result<Table, CliError> {
    check_total(&[args.order.0.len(), args.lambda.len()])?;
    let lambdas = args.lambda.expand(false);
    let jobs: Vec<(u32, f64)> = args.order.0.iter().flat_map(|&o| lambdas.iter().map(move |&l| (o, l))).collect();
    let rows: Rows = jobs
        .par_iter()
        .map(|&(o, l)| {
            if !(l.is_finite() && l >= 0.0) {
                return Err(CliError::Core(chi2refine_core::Error::Domain {
                    routine: "constants",
                    reason: format!("noncentrality must be nonnegative, got {l}"),
                }));
            }
            let (y, m) = llt_expansion::m_constant_argmax(o, l)?;
            Ok(vec![Cell::Int(o.into()), Cell::Num(l), Cell::Num(m), Cell::Num(y.abs())])
        })
        .collect();
    let mut t = Table::new(&["order", "lambda", "m_constant", "argmax_abs_y"]);
    rows?.into_iter().for_each(|r| t.push(r));
    Ok(t)
}

pub fn median(args: &RLambda, ctl: &SeriesControl) -> Result<Table, CliError> {
    let pairs = r_lambda_pairs(&args.r, &args.lambda, &[])?;
    let rows: Rows = pairs
        .par_iter()
        .map(|&(r, l)| {
            let m = analysis::median_study(&Chi2Params::new(r, l)?, ctl)?;
            Ok(vec![
                Cell::Num(r),
                Cell::Num(l),
                Cell::Num(m.exact_median),
                Cell::Num(m.asymptotic_median),
                Cell::Num(m.residual),
                Cell::Num(r.sqrt() * m.residual.abs()),
            ])
        })
        .collect();
    let mut t = Table::new(&["r", "lambda", "exact_median", "asymptotic_median", "residual", "scaled_residual"]);
    rows?.into_iter().for_each(|r| t.push(r));
    Ok(t)
}

pub fn detect(args: &DetectArgs, ctl: &SeriesControl) -> Result<Table, CliError> {
    let orders = orders(&args.order.0)?;
    let (mode, name) = match args.mode {
        Mode::Leading => (SizingMode::Leading, "leading"),
        Mode::Scan => (SizingMode::Scan, "scan"),
    };
    let rows: Rows = orders
        .par_iter()
        .map(|&o| {
            let r = analysis::min_r_for_error(args.target, args.lambda, o, mode, ctl)?;
            Ok(vec![
                Cell::Num(args.target),
                Cell::Num(args.lambda),
                Cell::Int(o.as_u8().into()),
                Cell::Text(name.into()),
                Cell::Int(r as i64),
            ])
        })
        .collect();
    let mut t = Table::new(&["target", "lambda", "order", "mode", "r"]);
    rows?.into_iter().for_each(|r| t.push(r));
    Ok(t)
}

pub fn llt(args: &LltArgs, ctl: &SeriesControl) -> Result<Table, CliError> {
    let (grid, standardized) = match (&args.a, &args.delta) {
        (Some(a), _) => (a, false),
        (None, Some(d)) => (d, true),
        (None, None) => return Err(CliError::Usage("one of --a or --delta is required".into())),
    };
    let pairs = r_lambda_pairs(&args.r, &args.lambda, &[grid.len()])?;
    let points = grid.expand(false);
    let jobs: Vec<(f64, f64, f64)> = pairs.iter().flat_map(|&(r, l)| points.iter().map(move |&v| (r, l, v))).collect();
    let rows: Rows = jobs
        .par_iter()
        .map(|&(r, l, v)| {
            let p = Chi2Params::new(r, l)?;
            let bulk = BulkRegion::new(p, args.eta)?;
            let x = if standardized { StdCoord::from_delta(p, v).to_x() } else { v };
            let exact_log = llt_expansion::exact_log_ratio(&p, x, ctl)?;
            let log_exp = llt_expansion::log_ratio_expansion(&p, x);
            let ratio_exp = llt_expansion::ratio_expansion(&p, x);
            let exact_ratio = exact_log.exp();
            Ok(vec![
                Cell::Num(r),
                Cell::Num(l),
                Cell::Num(x),
                Cell::Num(p.coord(x).delta),
                Cell::Bool(bulk.contains(x)),
                Cell::Num(exact_log),
                Cell::Num(log_exp),
                Cell::Num(exact_log - log_exp),
                Cell::Num(exact_ratio),
                Cell::Num(ratio_exp),
                Cell::Num(exact_ratio - ratio_exp),
            ])
        })
        .collect();
    let mut t = Table::new(&[
        "r",
        "lambda",
        "x",
        "delta",
        "in_bulk",
        "exact_log_ratio",
        "log_expansion",
        "log_residual",
        "exact_ratio",
        "ratio_expansion",
        "ratio_residual",
    ]);
    rows?.into_iter().for_each(|r| t.push(r));
    Ok(t)
}

pub fn metrics(args: &RLambda, ctl: &SeriesControl) -> Result<Table, CliError> {
    let pairs = r_lambda_pairs(&args.r, &args.lambda, &[])?;
    let rows: Rows = pairs
        .par_iter()
        .map(|&(r, l)| {
            let m = analysis::metric_estimates(&Chi2Params::new(r, l)?, ctl)?;
            let s = r.sqrt();
            Ok(vec![
                Cell::Num(r),
                Cell::Num(l),
                Cell::Num(m.kolmogorov),
                Cell::Num(m.total_variation),
                Cell::Num(m.hellinger),
                Cell::Num(s * m.kolmogorov),
                Cell::Num(s * m.total_variation),
                Cell::Num(s * m.hellinger * m.hellinger),
            ])
        })
        .collect();
    let rows = rows?;
    warn_validity(pairs);
    let mut t = Table::new(&[
        "r",
        "lambda",
        "kolmogorov",
        "total_variation",
        "hellinger",
        "scaled_kolmogorov",
        "scaled_total_variation",
        "scaled_hellinger_sq",
    ]);
    rows.into_iter().for_each(|r| t.push(r));
    Ok(t)
}

/// Draws from χ²_r(λ) as a Poisson(λ/2) mixture of central laws.
fn draw<R: Rng>(rng: &mut R, r: f64, lambda: f64) -> Result<f64, CliError> {
    let bad = |e: String| CliError::Core(chi2refine_core::Error::Domain { routine: "moments", reason: e });
    let j = if lambda > 0.0 { Poisson::new(lambda / 2.0).map_err(|e| bad(e.to_string()))?.sample(rng) } else { 0.0 };
    Ok(ChiSquared::new(r + 2.0 * j).map_err(|e| bad(e.to_string()))?.sample(rng))
}

/// Sample central moments (centred at the known mean) and their standard errors.
fn monte_carlo(
    p: &Chi2Params,
    ns: &[u32],
    samples: usize,
    seed: u64,
    stream: u64,
) -> Result<Vec<(f64, f64)>, CliError> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut sum = vec![0.0; ns.len()];
    let mut sum_sq = vec![0.0; ns.len()];
    for _ in 0..samples {
        let c = draw(&mut rng, p.r(), p.lambda())? - p.mean();
        for (k, &n) in ns.iter().enumerate() {
            let v = c.powi(n as i32);
            sum[k] += v;
            sum_sq[k] += v * v;
        }
    }
    let m = samples as f64;
    Ok(sum
        .iter()
        .zip(&sum_sq)
        .map(|(s, q)| {
            let mean = s / m;
            (mean, ((q / m - mean * mean).max(0.0) / m).sqrt())
        })
        .collect())
}

pub fn moments(args: &MomentsArgs) -> Result<Table, CliError> {
    let pairs = r_lambda_pairs(&args.r, &args.lambda, &[args.n.0.len()])?;
    let ns = &args.n.0;
    let groups: Rows = pairs
        .par_iter()
        .enumerate()
        .map(|(i, &(r, l))| {
            let p = Chi2Params::new(r, l)?;
            let exact: Vec<f64> = ns.iter().map(|&n| central_moment(&p, n)).collect::<Result<_, _>>()?;
            let mc =
                if args.samples > 0 { Some(monte_carlo(&p, ns, args.samples, args.seed, i as u64)?) } else { None };
            Ok(ns
                .iter()
                .enumerate()
                .map(|(k, &n)| {
                    let (mc_m, mc_se, samples, seed) = match &mc {
                        Some(v) => (
                            Cell::Num(v[k].0),
                            Cell::Num(v[k].1),
                            Cell::Int(args.samples as i64),
                            Cell::Text(args.seed.to_string()),
                        ),
                        None => (Cell::Missing, Cell::Missing, Cell::Missing, Cell::Missing),
                    };
                    vec![
                        Cell::Num(r),
                        Cell::Num(l),
                        Cell::Int(n.into()),
                        Cell::Num(exact[k]),
                        mc_m,
                        mc_se,
                        samples,
                        seed,
                    ]
                })
                .collect())
        })
        .collect::<Result<Vec<Vec<Vec<Cell>>>, CliError>>()
        .map(|g| g.into_iter().flatten().collect());
    let mut t = Table::new(&["r", "lambda", "n", "central_moment", "mc_moment", "mc_std_error", "samples", "seed"]);
    groups?.into_iter().for_each(|r| t.push(r));
    Ok(t)
}
