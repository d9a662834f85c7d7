//! Special functions: log-gamma, regularized incomplete gamma, modified
//! Bessel function of the first kind, and the standard normal law.
//!
//! Everything that can overflow is computed in the log domain; linear-domain
//! values are only formed at the very end.

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `ln √(2π)`
pub const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
/// `1/√(2π)`
pub const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Truncation control shared by every series and continued fraction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesControl {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl { rel_tol: 1e-14, max_terms: 10_000 }
    }
}

impl SeriesControl {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol < 1e-6) {
            return Err(Error::domain("SeriesControl", format!("rel_tol must lie in (0, 1e-6), got {rel_tol}")));
        }
        if max_terms < 100 {
            return Err(Error::domain("SeriesControl", format!("max_terms must be at least 100, got {max_terms}")));
        }
        Ok(SeriesControl { rel_tol, max_terms })
    }
}

// ---------------------------------------------------------------------------
// Gamma function
// ---------------------------------------------------------------------------

const STIRLING_SHIFT: f64 = 15.0;

/// Remainder of Stirling's series, `ln Γ(z) − [(z − ½) ln z − z + ln √(2π)]`,
/// valid for `z ≥ 15` to well below one ulp of `ln Γ`.
fn stirling_correction(z: f64) -> f64 {
    // B_{2k} / (2k (2k − 1)) for k = 1..8
    const C: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
        -3617.0 / 122_400.0,
    ];
    let w = 1.0 / (z * z);
    let mut acc = 0.0;
    for c in C.iter().rev() {
        acc = acc * w + c;
    }
    acc / z
}

/// `ln Γ(z)` for finite `z > 0`, no argument checks.
pub(crate) fn lgamma(z: f64) -> f64 {
    if z >= STIRLING_SHIFT {
        return (z - 0.5) * z.ln() - z + LN_SQRT_2PI + stirling_correction(z);
    }
    // ln Γ(z) = ln Γ(z + n) − ln(z (z+1) … (z+n−1))
    let mut prod = 1.0;
    let mut w = z;
    while w < STIRLING_SHIFT {
        prod *= w;
        w += 1.0;
    }
    lgamma(w) - prod.ln()
}

/// Natural logarithm of the gamma function.
pub fn log_gamma(z: f64) -> Result<f64> {
    if !(z.is_finite() && z > 0.0) {
        return Err(Error::domain("log_gamma", format!("argument must be positive and finite, got {z}")));
    }
    Ok(lgamma(z))
}

/// `ln(1 + t) − t`, accurate for small `|t|`.
pub(crate) fn log1pmx(t: f64) -> f64 {
    if t.abs() >= 0.5 {
        return t.ln_1p() - t;
    }
    // −t²/2 + t³/3 − t⁴/4 + …
    let mut term = -t;
    let mut sum = 0.0;
    for k in 2..200 {
        term *= -t;
        let add = term / k as f64;
        sum -= add;
        if add.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// `ln( y^s e^{−y} / Γ(s + 1) )` for `s > −1`, `y > 0`.
///
/// For large `s` the naive form loses all relative accuracy to cancellation
/// between `s ln y`, `y` and `ln Γ(s+1)`; the saddle-point rewrite
/// `s·log1pmx((y−s)/s) − ½ ln(2πs) − corr(s)` does not.
pub(crate) fn ln_poisson_term(s: f64, y: f64) -> f64 {
    if s >= STIRLING_SHIFT {
        s * log1pmx((y - s) / s) - 0.5 * (2.0 * PI * s).ln() - stirling_correction(s)
    } else if s == 0.0 {
        -y
    } else {
        s * y.ln() - y - lgamma(s + 1.0)
    }
}

// ---------------------------------------------------------------------------
// Regularized incomplete gamma
// ---------------------------------------------------------------------------

fn check_gamma_args(routine: &'static str, s: f64, x: f64) -> Result<()> {
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::domain(routine, format!("shape must be positive, got {s}")));
    }
    if x.is_nan() || x < 0.0 {
        return Err(Error::domain(routine, format!("argument must be nonnegative, got {x}")));
    }
    Ok(())
}

/// Lower series `P(s, x) = D(s,x) Σ_n x^n / ((s+1)…(s+n))`.
fn lower_series(s: f64, x: f64, ctl: &SeriesControl) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 1..=ctl.max_terms {
        term *= x / (s + n as f64);
        sum += term;
        if term <= ctl.rel_tol * 1e-2 * sum {
            return Ok((ln_poisson_term(s, x) + sum.ln()).exp());
        }
    }
    Err(Error::convergence("reg_gamma (series)", ctl.max_terms))
}

/// Upper continued fraction for `Q(s, x)` by the modified Lentz method.
fn upper_continued_fraction(s: f64, x: f64, ctl: &SeriesControl) -> Result<f64> {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - s;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=ctl.max_terms {
        let an = -(i as f64) * (i as f64 - s);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() <= ctl.rel_tol * 1e-2 {
            // x^s e^{-x} / Γ(s) = s · D(s, x)
            return Ok((ln_poisson_term(s, x) + s.ln() + h.ln()).exp());
        }
    }
    Err(Error::convergence("reg_gamma (continued fraction)", ctl.max_terms))
}

/// Regularized upper incomplete gamma `Q(s, x) = Γ(s, x) / Γ(s)`.
pub fn reg_gamma_upper(s: f64, x: f64) -> Result<f64> {
    reg_gamma_upper_with(s, x, &SeriesControl::default())
}

pub fn reg_gamma_upper_with(s: f64, x: f64, ctl: &SeriesControl) -> Result<f64> {
    check_gamma_args("reg_gamma_upper", s, x)?;
    if x == 0.0 {
        return Ok(1.0);
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    let q = if x < s + 1.0 { 1.0 - lower_series(s, x, ctl)? } else { upper_continued_fraction(s, x, ctl)? };
    Ok(q.clamp(0.0, 1.0))
}

/// Regularized lower incomplete gamma `P(s, x) = 1 − Q(s, x)`.
pub fn reg_gamma_lower(s: f64, x: f64) -> Result<f64> {
    reg_gamma_lower_with(s, x, &SeriesControl::default())
}

pub fn reg_gamma_lower_with(s: f64, x: f64, ctl: &SeriesControl) -> Result<f64> {
    check_gamma_args("reg_gamma_lower", s, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    let p = if x < s + 1.0 { lower_series(s, x, ctl)? } else { 1.0 - upper_continued_fraction(s, x, ctl)? };
    Ok(p.clamp(0.0, 1.0))
}

// ---------------------------------------------------------------------------
// Modified Bessel function of the first kind
// ---------------------------------------------------------------------------

/// `ln ₀F₁(; b; q) = ln Σ_j q^j / (j! (b)_j)` for `b > 0`, `q ≥ 0`.
///
/// The sum is accumulated outward from its largest term so that neither
/// overflow nor loss of the dominant terms can occur.
pub(crate) fn ln_hyp0f1(b: f64, q: f64, ctl: &SeriesControl) -> Result<f64> {
    if q == 0.0 {
        return Ok(0.0);
    }
    // ratio u_j / u_{j-1} = q / (j (b + j - 1)); peak where it crosses 1
    let bm1 = b - 1.0;
    let peak = ((-bm1 + (bm1 * bm1 + 4.0 * q).sqrt()) / 2.0).floor().max(0.0);
    let peak_j = peak as usize;

    let ln_peak = if peak_j <= 1000 {
        (1..=peak_j)
            .map(|j| {
                let j = j as f64;
                (q / (j * (b + j - 1.0))).ln()
            })
            .sum::<f64>()
    } else {
        peak * q.ln() - lgamma(peak + 1.0) - (lgamma(b + peak) - lgamma(b))
    };

    let mut sum = 1.0;
    let mut used = 1usize;
    // upward from the peak
    let mut term = 1.0;
    let mut j = peak_j + 1;
    loop {
        let jf = j as f64;
        term *= q / (jf * (b + jf - 1.0));
        sum += term;
        used += 1;
        if term <= ctl.rel_tol * 1e-2 * sum {
            break;
        }
        if used > ctl.max_terms {
            return Err(Error::convergence("bessel_i series", ctl.max_terms));
        }
        j += 1;
    }
    // downward from the peak
    term = 1.0;
    let mut j = peak_j;
    while j >= 1 {
        let jf = j as f64;
        term /= q / (jf * (b + jf - 1.0));
        sum += term;
        used += 1;
        if term <= ctl.rel_tol * 1e-2 * sum {
            break;
        }
        if used > ctl.max_terms {
            return Err(Error::convergence("bessel_i series", ctl.max_terms));
        }
        j -= 1;
    }
    Ok(ln_peak + sum.ln())
}

/// Large-argument expansion `I_ν(x) ≈ e^x/√(2πx) Σ_k (−1)^k a_k(ν)/x^k`.
/// Returns `None` when the asymptotic series does not reach the requested
/// tolerance before its terms start growing.
pub(crate) fn ln_bessel_i_asymptotic(nu: f64, x: f64, ctl: &SeriesControl) -> Option<f64> {
    let mu = 4.0 * nu * nu;
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        let next = -term * (mu - odd * odd) / (k as f64 * 8.0 * x);
        if next.abs() > term.abs() {
            return None;
        }
        term = next;
        sum += term;
        if term.abs() <= ctl.rel_tol * 1e-2 * sum.abs() {
            return Some(x - 0.5 * (2.0 * PI * x).ln() + sum.ln());
        }
    }
    None
}

/// `ln I_ν(x)` for `ν ≥ −½` and `x > 0`.
pub fn log_bessel_i(nu: f64, x: f64) -> Result<f64> {
    log_bessel_i_with(nu, x, &SeriesControl::default())
}

pub fn log_bessel_i_with(nu: f64, x: f64, ctl: &SeriesControl) -> Result<f64> {
    if !(nu.is_finite() && nu >= -0.5) {
        return Err(Error::domain("log_bessel_i", format!("order must be ≥ -1/2, got {nu}")));
    }
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::domain("log_bessel_i", format!("argument must be positive, got {x}")));
    }
    ln_bessel_i_unchecked(nu, x, ctl)
}

/// Same as [`log_bessel_i_with`] but accepts any `ν > −1`.
pub(crate) fn ln_bessel_i_unchecked(nu: f64, x: f64, ctl: &SeriesControl) -> Result<f64> {
    if x >= 25.0 {
        if let Some(v) = ln_bessel_i_asymptotic(nu, x, ctl) {
            return Ok(v);
        }
    }
    Ok(nu * (x / 2.0).ln() - lgamma(nu + 1.0) + ln_hyp0f1(nu + 1.0, x * x / 4.0, ctl)?)
}

// ---------------------------------------------------------------------------
// Standard normal
// ---------------------------------------------------------------------------

/// Standard normal density `φ(z)`.
pub fn normal_pdf(z: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * z * z).exp()
}

/// Standard normal survival function `Ψ(z) = 1 − Φ(z)`.
pub fn normal_sf(z: f64) -> f64 {
    0.5 * libm::erfc(z / SQRT_2)
}

/// Standard normal distribution function `Φ(z)`.
pub fn normal_cdf(z: f64) -> f64 {
    normal_sf(-z)
}
