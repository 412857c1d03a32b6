//! Surface geometry in the first Heisenberg group.
//!
//! The group is R^3 with coordinates (x, y, t) and product
//! `(x,y,t)*(x',y',t') = (x+x', y+y', t+t'+yx'-xy')`. The left-invariant
//! frame `X = d/dx + y d/dt`, `Y = d/dy - x d/dt`, `T = d/dt` is declared
//! orthonormal; the horizontal distribution is spanned by X and Y.
//!
//! The crate evaluates surface charts (t-graphs, intrinsic graphs, ruled
//! strips), their characteristic foliations, the sub-Riemannian area and its
//! first and second variations, all at double precision on modest grids. It is
//! `no_std`-compatible (`alloc` required; enable the `libm` feature when
//! building without `std`).

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

#[cfg(not(any(feature = "std", feature = "libm")))]
compile_error!("h1geom needs either the `std` or the `libm` feature for float math");

pub mod characteristic;
pub mod codazzi;
mod error;
pub mod group;
mod numeric;
pub mod quad;
pub mod surface;
pub mod variation;

pub use error::{Error, Result};
pub use group::{FrameVector, KillingField, Point};
pub use surface::SurfaceChart;

/// Named tolerances shared across the crate. Operations that take a
/// [`NumericParams`] use these as defaults; the rest are fixed contracts.
pub mod tol {
    /// |N_h| at or below this is treated as a singular (characteristic) point.
    pub const SINGULAR: f64 = 1e-8;
    /// Default step for directional finite differences on charts.
    pub const FD_STEP: f64 = 1e-4;
    /// Closed-form denominators smaller than this are reported as poles.
    pub const POLE: f64 = 1e-12;
    /// Slack accepted for unit norm and horizontality of ruling directions.
    pub const FRAME_UNIT: f64 = 1e-10;
    /// Normal vectors with norm at or below this mean a degenerate chart.
    pub const DEGENERATE: f64 = 1e-12;
    /// Largest quadratic-fit residual accepted for vertical components.
    pub const QUADRATIC_FIT: f64 = 1e-6;
    /// Largest deviation from the closed family accepted by the Codazzi fit.
    pub const CODAZZI_FIT: f64 = 1e-3;
    /// Max |q| under which stability sweeps report the `ZeroQ` verdict.
    pub const Q_ZERO: f64 = 1e-8;
}

/// Numerical knobs shared by frame and variation operations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumericParams {
    /// Singular-set threshold on |N_h|.
    pub singular_tol: f64,
    /// Step for directional finite differences along the surface.
    pub fd_step: f64,
}

impl Default for NumericParams {
    fn default() -> Self {
        NumericParams {
            singular_tol: tol::SINGULAR,
            fd_step: tol::FD_STEP,
        }
    }
}
