//! Numerical fractional-Fourier Littlewood–Paley calculus on uniform periodic
//! grids.
//!
//! Every routine is generic over [`Real`] (`f32` or `f64`). The aliases at the
//! crate root fix the scalar for the common cases.

pub mod conditions;
pub mod dyadic;
pub mod error;
pub mod fft;
pub mod frft;
pub mod grid;
pub mod io;
pub mod limits;
pub mod lp;
pub mod multiplier;
pub mod opnorm;
pub mod oscillation;
pub mod potentials;
pub mod report;
pub mod scalar;
pub mod signals;
pub mod symbol;

pub use error::{FrlpError, Result};
pub use frft::{chirp_mul, frft, ifrft, validate_sampling, Direction, FrftPlan};
pub use grid::{frac_param, make_grid, FracParam, GridSpec, Signal, Spectrum};
pub use scalar::{Complex, Real};

pub type Grid64 = GridSpec<f64>;
pub type Signal64 = Signal<f64>;
pub type Spectrum64 = Spectrum<f64>;
pub type FracParam64 = FracParam<f64>;
pub type Grid32 = GridSpec<f32>;
pub type Signal32 = Signal<f32>;
pub type Spectrum32 = Spectrum<f32>;
pub type FracParam32 = FracParam<f32>;
