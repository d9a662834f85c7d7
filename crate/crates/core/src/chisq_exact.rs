//! Exact density, survival function, quantiles and central moments of the
//! central and noncentral chi-square law `χ²_r(λ)`.
//!
//! These routines are the ground truth for every approximation in the crate,
//! so they favour accuracy over speed: the survival function is a
//! Poisson-weighted mixture of regularized incomplete gamma functions and the
//! density is evaluated in the log domain throughout.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{self, SeriesControl};

/// Distribution identity: degrees of freedom `r > 0` and noncentrality `λ ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Chi2Params {
    r: f64,
    lambda: f64,
}

impl Chi2Params {
    pub fn new(r: f64, lambda: f64) -> Result<Self> {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::domain("Chi2Params", format!("degrees of freedom must be positive, got {r}")));
        }
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::domain("Chi2Params", format!("noncentrality must be nonnegative, got {lambda}")));
        }
        Ok(Chi2Params { r, lambda })
    }

    /// Central law with `r` degrees of freedom.
    pub fn central(r: f64) -> Result<Self> {
        Self::new(r, 0.0)
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mean(&self) -> f64 {
        self.r + self.lambda
    }

    pub fn variance(&self) -> f64 {
        2.0 * (self.r + 2.0 * self.lambda)
    }

    pub fn sd(&self) -> f64 {
        self.variance().sqrt()
    }

    /// `D_{r,λ} = (r + λ) / √(2(r + 2λ))`, the mean in units of standard
    /// deviations.
    pub fn mean_in_sd(&self) -> f64 {
        self.mean() / self.sd()
    }

    /// True when `λ > √r`, beyond which the refined approximations are not
    /// expected to hold.
    pub fn outside_validity(&self) -> bool {
        self.lambda > self.r.sqrt()
    }

    pub fn coord(&self, x: f64) -> StdCoord {
        StdCoord::from_x(*self, x)
    }
}

/// Standardized coordinate `δ_x = (x − (r+λ)) / √(2(r+2λ))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StdCoord {
    pub delta: f64,
    pub params: Chi2Params,
}

impl StdCoord {
    pub fn from_x(params: Chi2Params, x: f64) -> Self {
        StdCoord { delta: (x - params.mean()) / params.sd(), params }
    }

    pub fn from_delta(params: Chi2Params, delta: f64) -> Self {
        StdCoord { delta, params }
    }

    pub fn to_x(&self) -> f64 {
        self.params.mean() + self.delta * self.params.sd()
    }
}

fn check_x(routine: &'static str, x: f64) -> Result<()> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::domain(routine, format!("x must be positive and finite, got {x}")));
    }
    Ok(())
}

/// Density `f_{r,λ}(x)`.
pub fn pdf(p: &Chi2Params, x: f64) -> Result<f64> {
    Ok(ln_pdf_with(p, x, &SeriesControl::default())?.exp())
}

pub fn pdf_with(p: &Chi2Params, x: f64, ctl: &SeriesControl) -> Result<f64> {
    Ok(ln_pdf_with(p, x, ctl)?.exp())
}

/// `ln f_{r,λ}(x)`.
///
/// The central branch is `(x/2)^{r/2−1} e^{−x/2} / (2 Γ(r/2))`. The
/// noncentral branch is `½ e^{−(x+λ)/2} (x/λ)^{ν/2} I_ν(√(λx))` with
/// `ν = r/2 − 1`; whenever `I_ν` is evaluated through its ascending series
/// the power prefactor is folded into the saddle-point form of
/// `(x/2)^ν e^{−x/2} / Γ(ν+1)` so no digits are lost for large `r`.
pub fn ln_pdf_with(p: &Chi2Params, x: f64, ctl: &SeriesControl) -> Result<f64> {
    check_x("pdf", x)?;
    let nu = p.r / 2.0 - 1.0;
    let half_x = x / 2.0;
    if p.lambda == 0.0 {
        return Ok(special::ln_poisson_term(nu, half_x) - LN_2);
    }
    let z = (p.lambda * x).sqrt();
    if z >= 25.0 {
        if let Some(ln_i) = special::ln_bessel_i_asymptotic(nu, z, ctl) {
            return Ok(-LN_2 - 0.5 * (x + p.lambda) + 0.5 * nu * (x / p.lambda).ln() + ln_i);
        }
    }
    let ln_hyp = special::ln_hyp0f1(nu + 1.0, p.lambda * x / 4.0, ctl)?;
    Ok(special::ln_poisson_term(nu, half_x) - 0.5 * p.lambda - LN_2 + ln_hyp)
}

/// Density through the power series
/// `(x/2)^{r/2−1} e^{−(x+λ)/2} / 2 · Σ_j (λx/4)^j / (j! Γ(r/2 + j))`,
/// each term formed independently in log space. Used to cross-check [`pdf`].
pub fn pdf_series(p: &Chi2Params, x: f64) -> Result<f64> {
    check_x("pdf_series", x)?;
    let ctl = SeriesControl::default();
    let half_r = p.r / 2.0;
    let prefix = (half_r - 1.0) * (x / 2.0).ln() - 0.5 * (x + p.lambda) - LN_2;
    if p.lambda == 0.0 {
        return Ok((prefix - special::lgamma(half_r)).exp());
    }
    let ln_q = (p.lambda * x / 4.0).ln();
    let ln_term = |j: f64| j * ln_q - special::lgamma(j + 1.0) - special::lgamma(half_r + j);
    // largest term sits near j(r/2 + j) = λx/4
    let q = p.lambda * x / 4.0;
    let peak = ((-half_r + (half_r * half_r + 4.0 * q).sqrt()) / 2.0).floor().max(0.0);
    let ln_peak = ln_term(peak);
    let mut sum = 0.0;
    let mut j = peak;
    let mut used = 0;
    loop {
        let t = (ln_term(j) - ln_peak).exp();
        sum += t;
        used += 1;
        if t < 1e-18 * sum || used > ctl.max_terms {
            break;
        }
        j += 1.0;
    }
    j = peak - 1.0;
    while j >= 0.0 {
        let t = (ln_term(j) - ln_peak).exp();
        sum += t;
        if t < 1e-18 * sum {
            break;
        }
        j -= 1.0;
    }
    Ok((prefix + ln_peak + sum.ln()).exp())
}

/// Accumulates `Σ_j w_j g(j)` with Poisson weights `w_j = e^{−μ} μ^j / j!`,
/// starting at the mode and walking outward until the weight mass not yet
/// visited on either side is provably below `ctl.rel_tol · 1e-2`.
pub(crate) fn poisson_mixture<G>(mu: f64, ctl: &SeriesControl, mut g: G) -> Result<f64>
where
    G: FnMut(usize) -> Result<f64>,
{
    if mu == 0.0 {
        return g(0);
    }
    let skip_tol = ctl.rel_tol * 1e-2;
    let mode = mu.floor() as usize;
    let weight = |j: usize| special::ln_poisson_term(j as f64, mu).exp();
    let mut total = 0.0;
    let mut used = 0usize;

    let mut j = mode;
    loop {
        let w = weight(j);
        total += w * g(j)?;
        used += 1;
        let ratio = mu / (j + 1) as f64;
        if ratio < 1.0 && w * ratio / (1.0 - ratio) < skip_tol {
            break;
        }
        if used >= ctl.max_terms {
            return Err(Error::convergence("poisson mixture", ctl.max_terms));
        }
        j += 1;
    }
    let mut j = mode;
    while j > 0 {
        j -= 1;
        let w = weight(j);
        total += w * g(j)?;
        used += 1;
        let ratio = j as f64 / mu;
        if ratio < 1.0 && w * ratio / (1.0 - ratio) < skip_tol {
            break;
        }
        if used >= ctl.max_terms {
            return Err(Error::convergence("poisson mixture", ctl.max_terms));
        }
    }
    Ok(total)
}

/// Survival function `S_{r,λ}(a) = P(X > a)`.
pub fn survival(p: &Chi2Params, a: f64) -> Result<f64> {
    survival_with(p, a, &SeriesControl::default())
}

pub fn survival_with(p: &Chi2Params, a: f64, ctl: &SeriesControl) -> Result<f64> {
    if a.is_nan() {
        return Err(Error::domain("survival", "threshold is NaN"));
    }
    if a <= 0.0 {
        return Ok(1.0);
    }
    let half_r = p.r / 2.0;
    let s = poisson_mixture(p.lambda / 2.0, ctl, |j| special::reg_gamma_upper_with(half_r + j as f64, a / 2.0, ctl))?;
    Ok(s.clamp(0.0, 1.0))
}

/// Distribution function `P(X ≤ a)`, accurate in the left tail.
pub fn cdf_with(p: &Chi2Params, a: f64, ctl: &SeriesControl) -> Result<f64> {
    if a.is_nan() {
        return Err(Error::domain("cdf", "threshold is NaN"));
    }
    if a <= 0.0 {
        return Ok(0.0);
    }
    let half_r = p.r / 2.0;
    let c = poisson_mixture(p.lambda / 2.0, ctl, |j| special::reg_gamma_lower_with(half_r + j as f64, a / 2.0, ctl))?;
    Ok(c.clamp(0.0, 1.0))
}

const QUANTILE_MAX_ITER: usize = 200;
const QUANTILE_TOL: f64 = 1e-11;

/// The point `a` with `P(X ≤ a) = q`.
pub fn quantile(p: &Chi2Params, q: f64) -> Result<f64> {
    quantile_with(p, q, &SeriesControl::default())
}

pub fn quantile_with(p: &Chi2Params, q: f64, ctl: &SeriesControl) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::domain("quantile", format!("probability must lie in (0, 1), got {q}")));
    }
    let target = 1.0 - q;
    let g = |a: f64| -> Result<f64> { Ok(survival_with(p, a, ctl)? - target) };

    let sd = p.sd();
    let mut lo = (p.mean() - 20.0 * sd).max(1e-12);
    let mut hi = p.mean() + 20.0 * sd;
    let mut g_lo = g(lo)?;
    let mut g_hi = g(hi)?;
    let mut expansions = 0;
    while g_lo < 0.0 {
        lo *= 1e-3;
        g_lo = g(lo)?;
        expansions += 1;
        if expansions > 100 {
            return Err(Error::convergence("quantile bracket", expansions));
        }
    }
    while g_hi > 0.0 {
        hi += 20.0 * sd;
        g_hi = g(hi)?;
        expansions += 1;
        if expansions > 100 {
            return Err(Error::convergence("quantile bracket", expansions));
        }
    }

    // Illinois variant of regula falsi on a decreasing function
    let mut side = 0i8;
    for _ in 0..QUANTILE_MAX_ITER {
        let mut a = (lo * g_hi - hi * g_lo) / (g_hi - g_lo);
        if !(a > lo && a < hi) {
            a = 0.5 * (lo + hi);
        }
        let ga = g(a)?;
        if ga.abs() <= QUANTILE_TOL * 1e-2 || hi - lo <= 4.0 * f64::EPSILON * hi {
            return Ok(a);
        }
        if ga > 0.0 {
            lo = a;
            g_lo = ga;
            if side == 1 {
                g_hi *= 0.5;
            }
            side = 1;
        } else {
            hi = a;
            g_hi = ga;
            if side == -1 {
                g_lo *= 0.5;
            }
            side = -1;
        }
        if (g_lo - g_hi).abs() <= QUANTILE_TOL * 1e-3 {
            let a = if g_lo.abs() < g_hi.abs() { lo } else { hi };
            return Ok(a);
        }
    }
    Err(Error::convergence("quantile", QUANTILE_MAX_ITER))
}

/// Median, the point `a⋆` with `S_{r,λ}(a⋆) = ½`.
pub fn median_exact(p: &Chi2Params) -> Result<f64> {
    quantile(p, 0.5)
}

pub fn median_exact_with(p: &Chi2Params, ctl: &SeriesControl) -> Result<f64> {
    quantile_with(p, 0.5, ctl)
}

/// Central moment `E[(X − (r+λ))^n]` for `n ∈ {1, 2, 3, 4, 6}`.
pub fn central_moment(p: &Chi2Params, n: u32) -> Result<f64> {
    let (r, l) = (p.r, p.lambda);
    let v = match n {
        1 => 0.0,
        2 => 2.0 * (r + 2.0 * l),
        3 => 8.0 * (r + 3.0 * l),
        4 => 12.0 * (r * r + 4.0 * r * (1.0 + l) + 4.0 * l * (4.0 + l)),
        6 => {
            40.0 * (3.0 * r.powi(3)
                + 2.0 * r * r * (26.0 + 9.0 * l)
                + 12.0 * r * (8.0 + 26.0 * l + 3.0 * l * l)
                + 24.0 * l * (24.0 + 18.0 * l + l * l))
        }
        _ => return Err(Error::unsupported("central moment order", n)),
    };
    Ok(v)
}

/// Upper bound on how far a central moment restricted to an event `A` can
/// move from its unrestricted value, given `P(X ∈ A^c) = tail_prob`:
/// `√6 r^{1/2}`, `√348 r` and `√61960 r^{3/2}` times `√tail_prob` for
/// `n = 1, 2, 3`. Requires `0 ≤ λ ≤ r`.
pub fn moment_event_bound(p: &Chi2Params, n: u32, tail_prob: f64) -> Result<f64> {
    if p.lambda > p.r {
        return Err(Error::domain("moment_event_bound", format!("requires λ ≤ r, got λ = {} > r = {}", p.lambda, p.r)));
    }
    if !(0.0..=1.0).contains(&tail_prob) {
        return Err(Error::domain(
            "moment_event_bound",
            format!("tail probability must lie in [0, 1], got {tail_prob}"),
        ));
    }
    let root_tail = tail_prob.sqrt();
    let v = match n {
        1 => 6f64.sqrt() * p.r.sqrt() * root_tail,
        2 => 348f64.sqrt() * p.r * root_tail,
        3 => 61_960f64.sqrt() * p.r.powf(1.5) * root_tail,
        _ => return Err(Error::unsupported("event moment order", n)),
    };
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate_pieces;

    fn params(r: f64, l: f64) -> Chi2Params {
        Chi2Params::new(r, l).unwrap()
    }

    /// Σ_j e^{−λ/2}(λ/2)^j/j! · f_{r+2j,0}(x), summed naively.
    fn poisson_mixture_pdf(r: f64, l: f64, x: f64) -> f64 {
        let mu = l / 2.0;
        let mut total = 0.0;
        let mut ln_w = -mu;
        for j in 0..400 {
            if j > 0 {
                ln_w += mu.ln() - (j as f64).ln();
            }
            let k = r + 2.0 * j as f64;
            let f = ((k / 2.0 - 1.0) * (x / 2.0).ln() - x / 2.0 - LN_2 - special::lgamma(k / 2.0)).exp();
            total += ln_w.exp() * f;
        }
        total
    }

    #[test]
    fn params_validation() {
        assert!(Chi2Params::new(0.0, 0.0).is_err());
        assert!(Chi2Params::new(-1.0, 0.0).is_err());
        assert!(Chi2Params::new(1.0, -0.1).is_err());
        assert!(Chi2Params::new(f64::INFINITY, 0.0).is_err());
        assert!(Chi2Params::new(1.0, f64::NAN).is_err());
        let p = params(5.0, 2.0);
        assert_eq!(p.mean(), 7.0);
        assert_eq!(p.variance(), 18.0);
        assert!(!p.outside_validity());
        assert!(params(4.0, 2.5).outside_validity());
    }

    #[test]
    fn std_coord_round_trip() {
        let p = params(7.5, 1.25);
        assert_eq!(p.coord(p.mean()).delta, 0.0);
        for &x in &[1e-3, 0.5, 3.0, 8.75, 40.0, 1e4] {
            let back = p.coord(x).to_x();
            assert!((back - x).abs() <= 1e-14 * x.max(p.mean()), "x={x} back={back}");
        }
    }

    #[test]
    fn pdf_closed_forms() {
        let v = pdf(&params(2.0, 0.0), 2.0).unwrap();
        assert!((v - (-1.0f64).exp() / 2.0).abs() < 1e-15 * v);
        let v = pdf(&params(4.0, 0.0), 4.0).unwrap();
        assert!((v - (-2.0f64).exp()).abs() < 4e-15 * v);
        assert!(pdf(&params(4.0, 0.0), 0.0).is_err());
        assert!(pdf(&params(4.0, 1.0), -1.0).is_err());
    }

    #[test]
    fn pdf_matches_poisson_mixture() {
        let v = pdf(&params(3.0, 2.0), 5.0).unwrap();
        let oracle = poisson_mixture_pdf(3.0, 2.0, 5.0);
        assert!((v - oracle).abs() < 1e-11);
        for &(r, l) in &[(1.0, 0.5), (2.0, 2.0), (5.0, 10.0), (20.0, 10.0), (0.5, 2.0)] {
            for &x in &[0.05, 0.7, 3.0, 12.0, 40.0] {
                let v = pdf(&params(r, l), x).unwrap();
                let o = poisson_mixture_pdf(r, l, x);
                assert!((v - o).abs() <= 1e-10 * o, "r={r} λ={l} x={x}: {v} vs {o}");
            }
        }
    }

    #[test]
    fn bessel_and_series_forms_agree() {
        for &(r, l) in &[(1.0, 0.5), (3.0, 2.0), (10.0, 10.0), (50.0, 4.0), (100.0, 1.0), (6.0, 300.0)] {
            let p = params(r, l);
            for &d in &[-2.5, -1.0, 0.0, 1.0, 3.0] {
                let x = StdCoord::from_delta(p, d).to_x();
                if x <= 0.0 {
                    continue;
                }
                let a = pdf(&p, x).unwrap();
                let b = pdf_series(&p, x).unwrap();
                assert!((a - b).abs() <= 1e-10 * b, "r={r} λ={l} x={x}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn pdf_asymptotic_bessel_branch_is_continuous() {
        // √(λx) crosses 25 between these points
        let p = params(3.0, 50.0);
        let ctl = SeriesControl::default();
        let x0 = 625.0 / 50.0;
        for &x in &[x0 * 0.999, x0 * 1.001] {
            let a = pdf_with(&p, x, &ctl).unwrap();
            let b = poisson_mixture_pdf(3.0, 50.0, x);
            assert!((a - b).abs() <= 1e-11 * b, "x={x}");
        }
    }

    #[test]
    fn survival_closed_forms() {
        let s = survival(&params(2.0, 0.0), 2.0).unwrap();
        assert!((s - (-1.0f64).exp()).abs() < 5e-15);
        let s = survival(&params(4.0, 0.0), 4.0).unwrap();
        assert!((s - 3.0 * (-2.0f64).exp()).abs() < 5e-15);
        assert!((s - 0.406_005_849_7).abs() < 1e-10);
        for &(r, l) in &[(1.0, 0.0), (3.0, 7.0)] {
            assert_eq!(survival(&params(r, l), 0.0).unwrap(), 1.0);
            assert_eq!(survival(&params(r, l), -5.0).unwrap(), 1.0);
        }
    }

    #[test]
    fn survival_plus_cdf_is_one() {
        let ctl = SeriesControl::default();
        for &(r, l) in &[(0.5, 0.0), (3.0, 1.0), (40.0, 12.0), (1000.0, 2.0)] {
            let p = params(r, l);
            for &d in &[-2.0, 0.0, 1.0, 4.0] {
                let a = StdCoord::from_delta(p, d).to_x();
                let s = survival_with(&p, a, &ctl).unwrap();
                let c = cdf_with(&p, a, &ctl).unwrap();
                assert!((s + c - 1.0).abs() < 1e-13, "r={r} λ={l} a={a}");
            }
        }
    }

    #[test]
    fn survival_large_noncentrality() {
        // mode of the Poisson weights is far from j = 0
        let p = params(4.0, 2000.0);
        let s = survival(&p, p.mean()).unwrap();
        assert!(s > 0.45 && s < 0.5);
    }

    #[test]
    fn mixture_term_cap_is_reported() {
        let ctl = SeriesControl::new(1e-14, 100).unwrap();
        let p = params(4.0, 1e6);
        assert!(matches!(survival_with(&p, p.mean(), &ctl), Err(Error::Convergence { .. })));
    }

    #[test]
    fn pdf_integrates_to_one_and_survival_is_the_tail() {
        for &r in &[0.5, 1.0, 2.0, 5.0, 20.0, 100.0] {
            for &l in &[0.0, 0.5, 2.0, 10.0] {
                let p = params(r, l);
                let f = |x: f64| pdf(&p, x).unwrap();
                let hi = p.mean() + 40.0 * p.sd();
                // x = u^{2/r} on [0, 1] removes the x^{r/2−1} endpoint singularity
                let m = 2.0 / r;
                let g = |u: f64| if u <= 0.0 { 0.0 } else { f(u.powf(m)) * m * u.powf(m - 1.0) };
                let head = integrate_pieces(g, &[0.0, 0.5, 1.0], 1e-14, 0.0).unwrap();
                let mut breaks = vec![1.0];
                let step = p.sd().min(hi / 8.0);
                while breaks.last().unwrap() + step < hi {
                    breaks.push(breaks.last().unwrap() + step);
                }
                breaks.push(hi);
                let body = integrate_pieces(f, &breaks, 1e-14, 0.0).unwrap();
                assert!((head + body - 1.0).abs() < 1e-9, "r={r} λ={l}: {}", head + body);

                for &d in &[-2.0, 0.0, 2.0] {
                    let a = StdCoord::from_delta(p, d).to_x();
                    if a <= 1.0 {
                        continue;
                    }
                    let tail_breaks: Vec<f64> =
                        std::iter::once(a).chain(breaks.iter().copied().filter(|&b| b > a)).collect();
                    let tail = integrate_pieces(f, &tail_breaks, 1e-14, 0.0).unwrap();
                    let s = survival(&p, a).unwrap();
                    assert!((s - tail).abs() < 1e-9, "r={r} λ={l} a={a}: {s} vs {tail}");
                }
            }
        }
    }

    #[test]
    fn quantile_reference_values() {
        let m = quantile(&params(2.0, 0.0), 0.5).unwrap();
        assert!((m - 2.0 * LN_2).abs() < 1e-10);
        let m = median_exact(&params(1.0, 0.0)).unwrap();
        assert!((m - 0.454_936_423_1).abs() < 1e-9);
        assert!(quantile(&params(2.0, 0.0), 0.0).is_err());
        assert!(quantile(&params(2.0, 0.0), 1.0).is_err());
    }

    #[test]
    fn quantile_round_trip() {
        for &(r, l) in &[(1.0, 0.0), (2.0, 3.0), (8.0, 0.0), (30.0, 5.0), (500.0, 1.0)] {
            let p = params(r, l);
            for &d in &[-1.5, -0.3, 0.0, 0.8, 2.5] {
                let a0 = StdCoord::from_delta(p, d).to_x();
                if a0 <= 0.0 {
                    continue;
                }
                let q = 1.0 - survival(&p, a0).unwrap();
                let a = quantile(&p, q).unwrap();
                assert!((a - a0).abs() <= 1e-9 * a0.max(1.0), "r={r} λ={l}: {a} vs {a0}");
                let residual = survival(&p, a).unwrap() - (1.0 - q);
                assert!(residual.abs() <= 1e-11);
            }
        }
    }

    #[test]
    fn quantile_extreme_probabilities() {
        let p = params(1.0, 0.0);
        let a = quantile(&p, 1e-9).unwrap();
        assert!(a > 0.0 && (cdf_with(&p, a, &SeriesControl::default()).unwrap() - 1e-9).abs() < 1e-11);
        let a = quantile(&p, 1.0 - 1e-12).unwrap();
        assert!(survival(&p, a).unwrap() < 2e-12);
    }

    #[test]
    fn central_moment_formulas() {
        assert_eq!(central_moment(&params(5.0, 0.0), 2).unwrap(), 10.0);
        assert_eq!(central_moment(&params(1.0, 0.0), 3).unwrap(), 8.0);
        assert_eq!(central_moment(&params(2.0, 1.0), 4).unwrap(), 480.0);
        assert_eq!(central_moment(&params(2.0, 1.0), 1).unwrap(), 0.0);
        assert!(matches!(central_moment(&params(2.0, 1.0), 5), Err(Error::Unsupported { .. })));
        assert!(central_moment(&params(2.0, 1.0), 0).is_err());
    }

    #[test]
    fn event_bound_values() {
        let v = moment_event_bound(&params(4.0, 0.0), 1, 0.25).unwrap();
        assert!((v - 6f64.sqrt()).abs() < 1e-15);
        for n in 1..=3 {
            assert_eq!(moment_event_bound(&params(9.0, 1.0), n, 0.0).unwrap(), 0.0);
        }
        let v = moment_event_bound(&params(9.0, 1.0), 2, 0.01).unwrap();
        assert!((v - 348f64.sqrt() * 0.9).abs() < 1e-12);
        assert!((v - 16.789).abs() < 1e-3);
        assert!(moment_event_bound(&params(2.0, 3.0), 1, 0.1).is_err());
        assert!(moment_event_bound(&params(2.0, 1.0), 4, 0.1).is_err());
        assert!(moment_event_bound(&params(2.0, 1.0), 1, 1.5).is_err());
    }

    proptest::proptest! {
        #[test]
        fn survival_is_a_monotone_probability(
            r in 0.2f64..200.0,
            l in 0.0f64..30.0,
            a in 0.0f64..400.0,
            da in 0.0f64..10.0,
        ) {
            let p = params(r, l);
            let s0 = survival(&p, a).unwrap();
            let s1 = survival(&p, a + da).unwrap();
            proptest::prop_assert!((0.0..=1.0).contains(&s0));
            proptest::prop_assert!(s1 <= s0 + 1e-14);
        }
    }
}
