//! Refined normal approximations to the central and noncentral chi-square
//! survival function.
//!
//! The crate is organised bottom-up:
//!
//! * [`special`] holds the special functions (log-gamma, regularized
//!   incomplete gamma, modified Bessel `I_ν`, standard normal).
//! * [`chisq_exact`] is the oracle: density, survival, quantiles and central
//!   moments of `χ²_r(λ)` computed to near machine precision.
//! * [`approx_normal`] implements the order 0–3 shifted normal
//!   approximations together with classical baselines and earlier bounds.
//! * [`llt_expansion`] exposes the local expansion of the density ratio, the
//!   Gaussian tail moments `Ψ_k` and the leading error constants `M0..M2`.
//! * [`analysis`] ties everything together: max-error scans, constant
//!   recovery, median asymptotics, probability metrics and sample-size
//!   inversion.
//!
//! [`quad`] and [`optimize`] are small numerical utilities (adaptive
//! Gauss–Kronrod quadrature and golden-section search) shared by the above.

pub mod analysis;
pub mod approx_normal;
pub mod chisq_exact;
mod error;
pub mod llt_expansion;
pub mod optimize;
pub mod quad;
pub mod special;

pub use approx_normal::{ApproxOrder, ShiftCoefficients};
pub use chisq_exact::{Chi2Params, StdCoord};
pub use error::{Error, Result};
pub use special::SeriesControl;
