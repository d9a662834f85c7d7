//! Quantitative studies built on the oracle and the approximations:
//! max-error scans, recovery of the leading constants, sample-size
//! inversion, median asymptotics and probability-metric estimates.

use serde::{Deserialize, Serialize};

use crate::approx_normal::{survival_approx, ApproxOrder};
use crate::chisq_exact::{self, Chi2Params, StdCoord};
use crate::error::{Error, Result};
use crate::llt_expansion::m_constant;
use crate::optimize::{try_grid_refine_max, GridSpec};
use crate::quad::integrate_pieces;
use crate::special::{normal_pdf, normal_sf, SeriesControl, LN_SQRT_2PI};

/// Standardized-threshold grid used by [`scan_max_error`].
pub const SCAN_GRID: GridSpec = GridSpec { lo: -8.0, hi: 8.0, n_points: 4001 };

/// Number of local maxima refined by golden-section search in a scan.
pub const SCAN_REFINE_PEAKS: usize = 5;

/// Outcome of maximizing `|S_{r,λ}(a) − approx(a)|` over the threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorScan {
    pub params: Chi2Params,
    pub order: ApproxOrder,
    pub max_error: f64,
    pub argmax_a: f64,
    pub argmax_delta: f64,
    pub grid_spec: GridSpec,
    /// Set when `λ > √r`, outside the regime where the approximations are
    /// expected to hold.
    pub lambda_warning: bool,
}

impl ErrorScan {
    /// `r^{rate} · max_error` with the order's nominal rate.
    pub fn scaled_error(&self) -> f64 {
        self.params.r().powf(self.order.rate()) * self.max_error
    }
}

/// `|S(a) − approx(a)|` at a single threshold.
pub fn abs_error(p: &Chi2Params, a: f64, order: ApproxOrder, ctl: &SeriesControl) -> Result<f64> {
    Ok((chisq_exact::survival_with(p, a, ctl)? - survival_approx(p, a, order)).abs())
}

/// Maximal absolute error of the order-`k` approximation.
///
/// The error is evaluated on [`SCAN_GRID`] in `δ_a`, then the largest local
/// maxima are refined to `|Δδ| ≤ 1e-10`. Beyond `|δ_a| = 8` both the exact
/// and the approximate tails are negligible for `r ≥ 8`.
pub fn scan_max_error(p: &Chi2Params, order: ApproxOrder, ctl: &SeriesControl) -> Result<ErrorScan> {
    let err_at = |d: f64| abs_error(p, StdCoord::from_delta(*p, d).to_x(), order, ctl);
    let (argmax_delta, _) = try_grid_refine_max(err_at, SCAN_GRID, SCAN_REFINE_PEAKS, 1e-10)?;
    let argmax_a = StdCoord::from_delta(*p, argmax_delta).to_x();
    Ok(ErrorScan {
        params: *p,
        order,
        max_error: abs_error(p, argmax_a, order, ctl)?,
        argmax_a,
        argmax_delta,
        grid_spec: SCAN_GRID,
        lambda_warning: p.outside_validity(),
    })
}

/// Pairs `(r, r^{(k+1)/2} E_k)` for `k ∈ {0, 1, 2}`.
pub fn constant_recovery(order: u32, lambda: f64, r_grid: &[f64], ctl: &SeriesControl) -> Result<Vec<(f64, f64)>> {
    if order > 2 {
        return Err(Error::unsupported("constant recovery order", order));
    }
    if r_grid.is_empty() {
        return Err(Error::domain("constant_recovery", "empty r grid"));
    }
    if r_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("constant_recovery", "r grid must be increasing"));
    }
    let order = ApproxOrder::new(order as u8)?;
    r_grid
        .iter()
        .map(|&r| {
            let p = Chi2Params::new(r, lambda)?;
            Ok((r, scan_max_error(&p, order, ctl)?.scaled_error()))
        })
        .collect()
}

/// How [`min_r_for_error`] decides whether an `r` is large enough.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SizingMode {
    /// Only the leading term `M_k / r^{(k+1)/2}`, remainder ignored.
    Leading,
    /// Actual maximal error against the exact oracle.
    Scan,
}

const SCAN_MAX_DOUBLINGS: u32 = 40;

/// Smallest integer `r` whose maximal error does not exceed `target`.
///
/// In [`SizingMode::Scan`] the search doubles `r` from 1 until the scan
/// error meets the target and then bisects over the integers in the last
/// doubling interval; the error is assumed monotone there.
pub fn min_r_for_error(
    target: f64,
    lambda: f64,
    order: ApproxOrder,
    mode: SizingMode,
    ctl: &SeriesControl,
) -> Result<f64> {
    if !(target > 0.0 && target < 0.5) {
        return Err(Error::domain("min_r_for_error", format!("target must lie in (0, 0.5), got {target}")));
    }
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(Error::domain("min_r_for_error", format!("noncentrality must be nonnegative, got {lambda}")));
    }
    match mode {
        SizingMode::Leading => {
            if order == ApproxOrder::Three {
                return Err(Error::unsupported("leading-bound order (no leading constant)", 3));
            }
            let m = m_constant(order.as_u8() as u32, lambda)?;
            Ok((m / target).powf(1.0 / order.rate()).ceil())
        }
        SizingMode::Scan => {
            let passes = |r: u64| -> Result<bool> {
                let p = Chi2Params::new(r as f64, lambda)?;
                Ok(scan_max_error(&p, order, ctl)?.max_error <= target)
            };
            let mut hi = 1u64;
            let mut doublings = 0;
            while !passes(hi)? {
                hi *= 2;
                doublings += 1;
                if doublings > SCAN_MAX_DOUBLINGS {
                    return Err(Error::convergence("min_r_for_error", doublings as usize));
                }
            }
            let mut lo = hi / 2; // fails, or zero when r = 1 passes
            while hi - lo > 1 {
                let mid = lo + (hi - lo) / 2;
                if passes(mid)? {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            Ok(hi as f64)
        }
    }
}

/// Exact median against the asymptotic value `r + λ − 2/3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MedianStudy {
    pub r: f64,
    pub lambda: f64,
    pub exact_median: f64,
    pub asymptotic_median: f64,
    pub residual: f64,
}

pub fn median_study(p: &Chi2Params, ctl: &SeriesControl) -> Result<MedianStudy> {
    let exact = chisq_exact::median_exact_with(p, ctl)?;
    let asymptotic = p.r() + p.lambda() - 2.0 / 3.0;
    Ok(MedianStudy {
        r: p.r(),
        lambda: p.lambda(),
        exact_median: exact,
        asymptotic_median: asymptotic,
        residual: exact - asymptotic,
    })
}

/// Distances between `χ²_r(λ)` and the normal law with the same mean and
/// variance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricEstimates {
    pub kolmogorov: f64,
    pub total_variation: f64,
    pub hellinger: f64,
}

const METRIC_QUAD_TOL: f64 = 1e-11;

/// Breakpoints every quarter standard deviation over `mean ± 40σ`, floored
/// at zero.
fn metric_breaks(p: &Chi2Params) -> Vec<f64> {
    let lo = (p.mean() - 40.0 * p.sd()).max(0.0);
    let hi = p.mean() + 40.0 * p.sd();
    let step = 0.25 * p.sd();
    let mut breaks = vec![lo];
    // resolve the density's behaviour near the origin when it is in range
    if lo == 0.0 {
        let first = step.min(p.mean() / 4.0);
        for k in (1..=8).rev() {
            breaks.push(first * 2f64.powi(-k));
        }
    }
    let mut x = lo + step;
    while x < hi {
        if x > *breaks.last().unwrap() {
            breaks.push(x);
        }
        x += step;
    }
    breaks.push(hi);
    breaks
}

/// Kolmogorov, total-variation and Hellinger distances.
///
/// Kolmogorov reuses the order-0 scan; total variation is
/// `½∫|f − g|` and Hellinger `√(1 − ∫√(fg))`, both by adaptive quadrature on
/// `mean ± 40σ`. The normal mass on `x < 0`, where `f` vanishes, is added to
/// the total variation analytically.
pub fn metric_estimates(p: &Chi2Params, ctl: &SeriesControl) -> Result<MetricEstimates> {
    let kolmogorov = scan_max_error(p, ApproxOrder::Zero, ctl)?.max_error;

    let (mean, sd) = (p.mean(), p.sd());
    let ln_g = |x: f64| {
        let d = (x - mean) / sd;
        -0.5 * d * d - LN_SQRT_2PI - sd.ln()
    };
    let failure = std::cell::Cell::new(None);
    let ln_f = |x: f64| match chisq_exact::ln_pdf_with(p, x, ctl) {
        Ok(v) => v,
        Err(e) => {
            failure.set(Some(e));
            f64::NEG_INFINITY
        }
    };
    let breaks = metric_breaks(p);

    let tv_body = integrate_pieces(
        |x| if x <= 0.0 { 0.0 } else { (ln_f(x).exp() - ln_g(x).exp()).abs() },
        &breaks,
        METRIC_QUAD_TOL,
        0.0,
    )?;
    let negative_mass = normal_sf(mean / sd);
    let total_variation = 0.5 * (tv_body + negative_mass);

    let affinity = integrate_pieces(
        |x| if x <= 0.0 { 0.0 } else { (0.5 * (ln_f(x) + ln_g(x))).exp() },
        &breaks,
        METRIC_QUAD_TOL,
        0.0,
    )?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let hellinger = (1.0 - affinity).max(0.0).sqrt();

    Ok(MetricEstimates { kolmogorov, total_variation, hellinger })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x.ln(), b + y.ln()));
    let (mx, my) = (sx / n, sy / n);
    let (num, den) = points.iter().fold((0.0, 0.0), |(a, b), &(x, y)| {
        let dx = x.ln() - mx;
        (a + dx * (y.ln() - my), b + dx * dx)
    });
    num / den
}

/// Density of the matching normal law at `x`.
pub fn matching_normal_pdf(p: &Chi2Params, x: f64) -> f64 {
    normal_pdf(p.coord(x).delta) / p.sd()
}
