//! Deterministic power iteration for `L²` operator norms.

use crate::error::Result;
use crate::grid::{GridSpec, Signal};
use crate::scalar::{creal, Real};
use crate::signals::random_signal;

pub const POWER_SEED: u64 = 0x5EED;
pub const POWER_ITERATIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormEstimate {
    /// `sqrt` of the final Rayleigh quotient of `T*T`.
    pub norm: f64,
    pub rayleigh: f64,
    /// Change of the Rayleigh quotient over the last iteration.
    pub last_increment: f64,
    pub iterations: usize,
}

/// Default starting vector.
pub fn seed_vector<T: Real>(grid: &GridSpec<T>) -> Signal<T> {
    random_signal(grid, POWER_SEED)
}

/// Power iteration on a self-adjoint nonnegative operator `T*T`.
pub fn power_iteration<T: Real>(
    normal: impl Fn(&Signal<T>) -> Result<Signal<T>>,
    start: Signal<T>,
    iterations: usize,
) -> Result<NormEstimate> {
    let mut v = start;
    let n0 = v.l2_norm();
    v = v.scale(creal(T::one() / n0));
    let mut rayleigh = T::zero();
    let mut last_increment = T::zero();
    for _ in 0..iterations {
        let w = normal(&v)?;
        let q = w.inner(&v).re;
        last_increment = (q - rayleigh).abs();
        rayleigh = q;
        let nw = w.l2_norm();
        if nw == T::zero() {
            rayleigh = T::zero();
            break;
        }
        v = w.scale(creal(T::one() / nw));
    }
    let r = rayleigh.to_f64().max(0.0);
    Ok(NormEstimate { norm: r.sqrt(), rayleigh: r, last_increment: last_increment.to_f64(), iterations })
}

/// Norm of `T` given `T` and its adjoint, from the default seed.
pub fn operator_norm<T: Real>(
    grid: &GridSpec<T>,
    op: impl Fn(&Signal<T>) -> Result<Signal<T>>,
    adjoint: impl Fn(&Signal<T>) -> Result<Signal<T>>,
) -> Result<NormEstimate> {
    power_iteration(|v| adjoint(&op(v)?), seed_vector(grid), POWER_ITERATIONS)
}
