//! Shifted normal approximations of the chi-square survival function.
//!
//! The order-`k` approximation evaluates the matching normal survival
//! function at the threshold moved by `c = d1 + d2/√r + d3/r` (truncated
//! after `k` terms), where the `d`'s are polynomials in the standardized
//! threshold `δ_a`. Classical Fisher and Wilson–Hilferty transforms and two
//! earlier uniform error bounds are provided for comparison.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::chisq_exact::{Chi2Params, StdCoord};
use crate::error::{Error, Result};
use crate::special::{self, normal_sf};

/// Omega constant `W(1)`, the solution of `w e^w = 1`.
pub const LAMBERT_W_1: f64 = 0.567_143_290_409_783_8;

/// Number of shift terms used by the approximation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum ApproxOrder {
    Zero,
    One,
    Two,
    Three,
}

impl ApproxOrder {
    pub const ALL: [ApproxOrder; 4] = [ApproxOrder::Zero, ApproxOrder::One, ApproxOrder::Two, ApproxOrder::Three];

    pub fn new(order: u8) -> Result<Self> {
        match order {
            0 => Ok(ApproxOrder::Zero),
            1 => Ok(ApproxOrder::One),
            2 => Ok(ApproxOrder::Two),
            3 => Ok(ApproxOrder::Three),
            _ => Err(Error::unsupported("approximation order", order)),
        }
    }

    pub fn as_u8(self) -> u8 {
        self as u8
    }

    /// Exponent `p` in the leading error rate `r^{-p}` (`(k+1)/2`); order 3
    /// has error `O(r^{-2})`.
    pub fn rate(self) -> f64 {
        match self {
            ApproxOrder::Three => 2.0,
            o => (o.as_u8() as f64 + 1.0) / 2.0,
        }
    }
}

impl TryFrom<u8> for ApproxOrder {
    type Error = Error;
    fn try_from(v: u8) -> Result<Self> {
        ApproxOrder::new(v)
    }
}

impl From<ApproxOrder> for u8 {
    fn from(o: ApproxOrder) -> u8 {
        o.as_u8()
    }
}

impl fmt::Display for ApproxOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_u8())
    }
}

/// Threshold shift coefficients evaluated at a standardized threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShiftCoefficients {
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

impl ShiftCoefficients {
    /// Coefficients at `δ`; only `d3` depends on `λ`.
    pub fn at(delta: f64, lambda: f64) -> Self {
        let d2sq = delta * delta;
        ShiftCoefficients {
            d1: 2.0 / 3.0 * (d2sq - 1.0),
            d2: (delta - 7.0 * delta * d2sq) / (9.0 * std::f64::consts::SQRT_2),
            d3: (219.0 * d2sq * d2sq + (270.0 * lambda - 14.0) * d2sq - (270.0 * lambda + 13.0)) / 405.0,
        }
    }

    /// Total shift `c` for the given order and degrees of freedom.
    pub fn shift(&self, order: ApproxOrder, r: f64) -> f64 {
        match order {
            ApproxOrder::Zero => 0.0,
            ApproxOrder::One => self.d1,
            ApproxOrder::Two => self.d1 + self.d2 / r.sqrt(),
            ApproxOrder::Three => self.d1 + self.d2 / r.sqrt() + self.d3 / r,
        }
    }
}

/// Shift coefficients for threshold `a`.
pub fn shift_coefficients(p: &Chi2Params, a: f64) -> ShiftCoefficients {
    ShiftCoefficients::at(p.coord(a).delta, p.lambda())
}

/// Order-`k` approximation of `S_{r,λ}(a)`.
///
/// The coefficients are evaluated at `δ_a` of the original threshold and the
/// shifted point is standardized with the same mean and variance:
/// `Ψ((a − c(δ_a) − (r+λ)) / √(2(r+2λ)))`.
pub fn survival_approx(p: &Chi2Params, a: f64, order: ApproxOrder) -> f64 {
    let delta = p.coord(a).delta;
    if order == ApproxOrder::Zero {
        return normal_sf(delta).clamp(0.0, 1.0);
    }
    let c = ShiftCoefficients::at(delta, p.lambda()).shift(order, p.r());
    let shifted = StdCoord::from_x(*p, a - c).delta;
    normal_sf(shifted).clamp(0.0, 1.0)
}

/// Same as [`survival_approx`] but parameterized by `δ_a` directly.
pub fn survival_approx_at_delta(p: &Chi2Params, delta: f64, order: ApproxOrder) -> f64 {
    survival_approx(p, StdCoord::from_delta(*p, delta).to_x(), order)
}

fn check_central(routine: &'static str, p: &Chi2Params, a: f64) -> Result<()> {
    if p.lambda() > 0.0 {
        return Err(Error::domain(routine, "only defined for the central law (λ = 0)"));
    }
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::domain(routine, format!("threshold must be positive, got {a}")));
    }
    Ok(())
}

/// Fisher's square-root approximation `Ψ(√(2a) − √(2r − 1))`.
pub fn fisher_sqrt_approx(p: &Chi2Params, a: f64) -> Result<f64> {
    check_central("fisher_sqrt_approx", p, a)?;
    if p.r() < 0.5 {
        return Err(Error::domain("fisher_sqrt_approx", "requires r ≥ 1/2"));
    }
    Ok(normal_sf((2.0 * a).sqrt() - (2.0 * p.r() - 1.0).sqrt()))
}

/// Wilson–Hilferty cube-root approximation
/// `Ψ(((a/r)^{1/3} − (1 − 2/(9r))) / √(2/(9r)))`.
pub fn wilson_hilferty_approx(p: &Chi2Params, a: f64) -> Result<f64> {
    check_central("wilson_hilferty_approx", p, a)?;
    let r = p.r();
    let v = 2.0 / (9.0 * r);
    Ok(normal_sf(((a / r).cbrt() - (1.0 - v)) / v.sqrt()))
}

/// Leading term `1/√(9πr)` of the 2013 uniform bound on the order-0 error,
/// plus `c0/r` when an estimate of the unspecified constant is supplied.
pub fn prior_bound_2013(p: &Chi2Params, c0: Option<f64>) -> f64 {
    let r = p.r();
    1.0 / (9.0 * PI * r).sqrt() + c0.unwrap_or(0.0) / r
}

/// The 2015 uniform bound on the order-0 error, valid for `r ≥ 8`:
///
/// `(r+4λ)/(π W(1) (r+2λ)²) · (1 + r²/32 · C(r,8)^{−1/4}) + (r+3λ)/(3√π (r+2λ)^{3/2})`
pub fn prior_bound_2015(p: &Chi2Params) -> Result<f64> {
    let (r, l) = (p.r(), p.lambda());
    if r < 8.0 {
        return Err(Error::domain("prior_bound_2015", format!("requires r ≥ 8, got {r}")));
    }
    let ln_binom = special::lgamma(r + 1.0) - special::lgamma(9.0) - special::lgamma(r - 7.0);
    let s = r + 2.0 * l;
    let first = (r + 4.0 * l) / (PI * LAMBERT_W_1 * s * s) * (1.0 + r * r / 32.0 * (-0.25 * ln_binom).exp());
    let second = (r + 3.0 * l) / (3.0 * PI.sqrt() * s.powf(1.5));
    Ok(first + second)
}

/// Maximal `δ`-intervals on `grid` over which the approximation increases
/// with the threshold. Empty for order 0.
pub fn monotonicity_violations(p: &Chi2Params, order: ApproxOrder, lo: f64, hi: f64, n: usize) -> Vec<(f64, f64)> {
    let step = (hi - lo) / (n.max(2) - 1) as f64;
    let mut out = Vec::new();
    let mut start: Option<f64> = None;
    let mut prev = survival_approx_at_delta(p, lo, order);
    for i in 1..n.max(2) {
        let d = lo + step * i as f64;
        let v = survival_approx_at_delta(p, d, order);
        if v > prev {
            start.get_or_insert(d - step);
        } else if let Some(s) = start.take() {
            out.push((s, d - step));
        }
        prev = v;
    }
    if let Some(s) = start {
        out.push((s, hi));
    }
    out
}
