//! Local expansion of the chi-square density around its matching normal
//! density, Gaussian tail moments `Ψ_k`, and the leading error constants
//! `M0`, `M1`, `M2` of the shifted normal approximations.

use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use crate::chisq_exact::{self, Chi2Params};
use crate::error::{Error, Result};
use crate::optimize::{grid_refine_max, GridSpec};
use crate::special::{normal_pdf, normal_sf, SeriesControl, LN_SQRT_2PI};
use crate::ShiftCoefficients;

/// Bulk of the distribution: `{x > 0 : |δ_x / D_{r,λ}| ≤ η r^{−1/3}}` with
/// `D_{r,λ} = (r+λ)/√(2(r+2λ))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BulkRegion {
    pub params: Chi2Params,
    pub eta: f64,
}

impl BulkRegion {
    pub fn new(params: Chi2Params, eta: f64) -> Result<Self> {
        if !(eta > 0.0 && eta < 1.0) {
            return Err(Error::domain("BulkRegion", format!("η must lie in (0, 1), got {eta}")));
        }
        Ok(BulkRegion { params, eta })
    }

    /// Largest admissible `|δ_x|`.
    pub fn delta_radius(&self) -> f64 {
        self.eta * self.params.r().powf(-1.0 / 3.0) * self.params.mean_in_sd()
    }

    /// The region as an `x`-interval, intersected with `(0, ∞)`.
    pub fn x_interval(&self) -> (f64, f64) {
        let p = &self.params;
        let w = self.delta_radius() * p.sd();
        ((p.mean() - w).max(0.0), p.mean() + w)
    }

    pub fn contains(&self, x: f64) -> bool {
        x > 0.0
            && (self.params.coord(x).delta / self.params.mean_in_sd()).abs()
                <= self.eta * self.params.r().powf(-1.0 / 3.0)
    }
}

/// Polynomial coefficients of the `r^{−1/2}`, `r^{−1}` and `r^{−3/2}` terms
/// of the local expansion, evaluated at a fixed `δ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpansionTerms {
    pub t_half: f64,
    pub t_one: f64,
    pub t_three_half: f64,
}

fn leading_term(d: f64) -> f64 {
    SQRT_2 / 3.0 * d * d * d - SQRT_2 * d
}

impl ExpansionTerms {
    /// Terms of `ln(f / φ-density)`.
    pub fn log_form(d: f64) -> Self {
        let d2 = d * d;
        let c = 2f64.powf(1.5);
        ExpansionTerms {
            t_half: leading_term(d),
            t_one: -0.5 * d2 * d2 + d2 - 1.0 / 6.0,
            t_three_half: c / 5.0 * d2 * d2 * d - c / 3.0 * d2 * d,
        }
    }

    /// Terms of `f / φ-density − 1`.
    pub fn ratio_form(d: f64) -> Self {
        let d2 = d * d;
        let d3 = d2 * d;
        let d5 = d3 * d2;
        let d7 = d5 * d2;
        let d9 = d7 * d2;
        ExpansionTerms {
            t_half: leading_term(d),
            t_one: d3 * d3 / 9.0 - 7.0 / 6.0 * d2 * d2 + 2.0 * d2 - 1.0 / 6.0,
            t_three_half: SQRT_2 / 81.0 * d9 - 5.0 / (9.0 * SQRT_2) * d7 + 47.0 / (15.0 * SQRT_2) * d5
                - 37.0 / (9.0 * SQRT_2) * d3
                + 1.0 / (3.0 * SQRT_2) * d,
        }
    }

    /// `r^{−1/2} t_half + r^{−1} t_one + r^{−3/2} t_three_half`.
    pub fn combine(&self, r: f64) -> f64 {
        let s = r.sqrt();
        self.t_half / s + self.t_one / r + self.t_three_half / (r * s)
    }
}

/// Expansion of `ln(f_{r,λ}(x) / (φ(δ_x)/√(2(r+2λ))))` to order `r^{−3/2}`.
pub fn log_ratio_expansion(p: &Chi2Params, x: f64) -> f64 {
    ExpansionTerms::log_form(p.coord(x).delta).combine(p.r())
}

/// Expansion of `f_{r,λ}(x) / (φ(δ_x)/√(2(r+2λ)))` to order `r^{−3/2}`.
pub fn ratio_expansion(p: &Chi2Params, x: f64) -> f64 {
    1.0 + ExpansionTerms::ratio_form(p.coord(x).delta).combine(p.r())
}

/// Exact `ln(f_{r,λ}(x) / (φ(δ_x)/√(2(r+2λ))))` from the oracle density.
pub fn exact_log_ratio(p: &Chi2Params, x: f64, ctl: &SeriesControl) -> Result<f64> {
    let d = p.coord(x).delta;
    let ln_normal = -0.5 * d * d - LN_SQRT_2PI - p.sd().ln();
    Ok(chisq_exact::ln_pdf_with(p, x, ctl)? - ln_normal)
}

/// Upper Gaussian tail moment `Ψ_k(d) = ∫_d^∞ y^k φ(y) dy` for `0 ≤ k ≤ 9`.
pub fn psi_k(k: u32, d: f64) -> Result<f64> {
    let phi = normal_pdf(d);
    let tail = normal_sf(d);
    let d2 = d * d;
    let v = match k {
        0 => tail,
        1 => phi,
        2 => d * phi + tail,
        3 => (2.0 + d2) * phi,
        4 => (3.0 * d + d2 * d) * phi + 3.0 * tail,
        5 => (8.0 + 4.0 * d2 + d2 * d2) * phi,
        6 => (15.0 * d + 5.0 * d2 * d + d2 * d2 * d) * phi + 15.0 * tail,
        7 => (48.0 + 24.0 * d2 + 6.0 * d2 * d2 + d2 * d2 * d2) * phi,
        // Ψ_8 = d^7 φ(d) + 7 Ψ_6(d)
        8 => d.powi(7) * phi + 7.0 * psi_k(6, d)?,
        9 => (384.0 + 192.0 * d2 + 48.0 * d2 * d2 + 8.0 * d2 * d2 * d2 + d2 * d2 * d2 * d2) * phi,
        _ => return Err(Error::unsupported("tail moment index", k)),
    };
    Ok(v)
}

/// Coefficient polynomials (multiplying `φ(δ)`) of the survival-function
/// error after the shifts of the given order have cancelled the lower
/// terms. Order 0 gives `(√2/3)(δ²−1)`, order 1 `(7δ³−δ)/18` and order 2
/// `(219δ⁴ + (270λ−14)δ² − (270λ+13)) / (405√2)`.
pub fn error_polynomial(order: u32, delta: f64, lambda: f64) -> Result<f64> {
    let d2 = delta * delta;
    let v = match order {
        0 => SQRT_2 / 3.0 * (d2 - 1.0),
        1 => (7.0 * d2 * delta - delta) / 18.0,
        2 => (219.0 * d2 * d2 + (270.0 * lambda - 14.0) * d2 - (270.0 * lambda + 13.0)) / (405.0 * SQRT_2),
        _ => return Err(Error::unsupported("error polynomial order", order)),
    };
    Ok(v)
}

/// The three braces (coefficients of `r^{−1/2}φ`, `r^{−1}φ`, `r^{−3/2}φ`) of
/// `S(a) − Ψ(δ_{a−c})` for arbitrary shift coefficients, before any
/// cancellation. With the canonical `d`'s each brace vanishes in turn.
pub fn residual_braces(delta: f64, lambda: f64, c: &ShiftCoefficients) -> [f64; 3] {
    let d = delta;
    let d2 = d * d;
    let (d1, dd2, d3) = (c.d1, c.d2, c.d3);
    let b0 = SQRT_2 / 3.0 * (d2 - 1.0) - d1 / SQRT_2;
    let b1 = d / 18.0 * (2.0 * d2 * d2 - 11.0 * d2 + 3.0) - (d / 4.0 * d1 * d1 + dd2 / SQRT_2);
    let poly = SQRT_2 / 81.0 * d2.powi(4) - 29.0 / (81.0 * SQRT_2) * d2.powi(3) + 133.0 / (135.0 * SQRT_2) * d2 * d2
        - 23.0 / (135.0 * SQRT_2) * d2
        - 1.0 / (135.0 * SQRT_2);
    let b2 =
        poly - ((d2 - 1.0) / (12.0 * SQRT_2) * d1.powi(3) - lambda / SQRT_2 * d1 + d / 2.0 * d1 * dd2 + d3 / SQRT_2);
    [b0, b1, b2]
}

/// Maximizer and value of `|error_polynomial(order, y, λ)| φ(y)` over `y`.
pub fn m_constant_argmax(order: u32, lambda: f64) -> Result<(f64, f64)> {
    error_polynomial(order, 0.0, lambda)?;
    let grid = GridSpec { lo: -8.0, hi: 8.0, n_points: 16_001 };
    let objective = |y: f64| error_polynomial(order, y, lambda).unwrap_or(0.0).abs() * normal_pdf(y);
    Ok(grid_refine_max(objective, grid, 6, 1e-10))
}

/// Leading error constant `M_order(λ)`.
pub fn m_constant(order: u32, lambda: f64) -> Result<f64> {
    Ok(m_constant_argmax(order, lambda)?.1)
}
