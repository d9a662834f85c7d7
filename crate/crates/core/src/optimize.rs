//! One-dimensional maximization: dense grid scan followed by golden-section
//! refinement of the best local maxima.

use std::convert::Infallible;

use serde::{Deserialize, Serialize};

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Maximizes `f` on `[lo, hi]` by golden-section search until the bracket is
/// narrower than `tol`. Returns `(argmax, max)`.
///
/// Assumes `f` is unimodal on the bracket; the endpoints are also considered
/// so a monotone function returns its boundary maximum.
pub fn golden_section_max<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let res: Result<_, Infallible> = try_golden_section_max(|x| Ok(f(x)), lo, hi, tol);
    match res {
        Ok(v) => v,
    }
}

/// Fallible form of [`golden_section_max`]; the first error aborts the search.
pub fn try_golden_section_max<F, E>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<(f64, f64), E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
        if c >= d {
            break;
        }
    }
    let mut best = if fc >= fd { (c, fc) } else { (d, fd) };
    for x in [lo, hi] {
        let fx = f(x)?;
        if fx > best.1 {
            best = (x, fx);
        }
    }
    Ok(best)
}

/// Uniform grid description `{lo, hi, n_points}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub n_points: usize,
}

impl GridSpec {
    pub fn point(&self, i: usize) -> f64 {
        if self.n_points <= 1 {
            return self.lo;
        }
        self.lo + (self.hi - self.lo) * i as f64 / (self.n_points - 1) as f64
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.point(i))
    }
}

/// Scans `f` on `grid`, then golden-section refines the `top_k` largest local
/// maxima within their neighbouring grid cells. Returns `(argmax, max)`.
pub fn grid_refine_max<F: FnMut(f64) -> f64>(mut f: F, grid: GridSpec, top_k: usize, tol: f64) -> (f64, f64) {
    let res: Result<_, Infallible> = try_grid_refine_max(|x| Ok(f(x)), grid, top_k, tol);
    match res {
        Ok(v) => v,
    }
}

/// Fallible form of [`grid_refine_max`].
pub fn try_grid_refine_max<F, E>(mut f: F, grid: GridSpec, top_k: usize, tol: f64) -> Result<(f64, f64), E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    let values = grid.points().map(&mut f).collect::<Result<Vec<f64>, E>>()?;
    let n = values.len();
    let mut peaks: Vec<usize> = (0..n)
        .filter(|&i| {
            let left = if i > 0 { values[i - 1] } else { f64::NEG_INFINITY };
            let right = if i + 1 < n { values[i + 1] } else { f64::NEG_INFINITY };
            values[i] >= left && values[i] >= right
        })
        .collect();
    peaks.sort_by(|&i, &j| values[j].total_cmp(&values[i]).then(i.cmp(&j)));
    peaks.truncate(top_k.max(1));

    let mut best = (grid.point(0), f64::NEG_INFINITY);
    for i in peaks {
        let lo = grid.point(i.saturating_sub(1));
        let hi = grid.point((i + 1).min(n - 1));
        let cand = try_golden_section_max(&mut f, lo, hi, tol)?;
        let cand = if cand.1 >= values[i] { cand } else { (grid.point(i), values[i]) };
        if cand.1 > best.1 {
            best = cand;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_peak() {
        let (x, fx) = golden_section_max(|x| -(x - 0.3) * (x - 0.3) + 2.0, -1.0, 2.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-7);
        assert!((fx - 2.0).abs() < 1e-15);
    }

    #[test]
    fn golden_handles_monotone_bracket() {
        let (x, _) = golden_section_max(|x| x, 0.0, 1.0, 1e-10);
        assert_eq!(x, 1.0);
    }

    #[test]
    fn grid_refine_picks_global_peak() {
        // two bumps, the right one taller
        let f = |x: f64| (-(x + 2.0).powi(2)).exp() + 1.5 * (-(x - 1.7).powi(2) * 4.0).exp();
        let grid = GridSpec { lo: -5.0, hi: 5.0, n_points: 101 };
        let (x, fx) = grid_refine_max(f, grid, 5, 1e-12);
        assert!((x - 1.7).abs() < 1e-6);
        assert!(fx >= 1.5);
    }

    #[test]
    fn grid_points_cover_endpoints() {
        let g = GridSpec { lo: -8.0, hi: 8.0, n_points: 4001 };
        assert_eq!(g.point(0), -8.0);
        assert_eq!(g.point(4000), 8.0);
        assert_eq!(g.point(2000), 0.0);
    }
}
