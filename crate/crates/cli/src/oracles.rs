//! Slow, direct reference computations used to cross-check the fast paths.
//!
//! Nothing here calls into the transform or operator code under test; each
//! routine evaluates its defining formula on the raw samples.

use std::f64::consts::PI;

use frlp_core::oscillation::Cube;
use frlp_core::{Complex, Grid64, Signal64};

/// FrFT by direct quadrature of its kernel at the frequencies `us`.
///
/// `F_α f(u) = c_α |sin α|^{-1/2} e^{iπu²cot α} Σ_k e^{-2πi x_k u / sin α} e^{iπx_k²cot α} f(x_k) Δx`
/// with `c_α = e^{i(sgn(sin α)π/4 - α/2)}`.
pub fn kernel_frft(f: &Signal64, alpha: f64, us: &[f64]) -> Vec<Complex<f64>> {
    let (s, c) = alpha.sin_cos();
    let kappa = c / s;
    let g = f.grid();
    let dx = g.spacing();
    let unimodular = Complex::from_polar(s.abs().powf(-0.5), s.signum() * PI / 4.0 - alpha / 2.0);
    us.iter()
        .map(|&u| {
            let acc: Complex<f64> = f
                .values()
                .iter()
                .enumerate()
                .map(|(k, v)| {
                    let x = g.coordinate(k);
                    v * Complex::from_polar(dx, -2.0 * PI * x * u / s + PI * x * x * kappa)
                })
                .sum();
            acc * unimodular * Complex::from_polar(1.0, PI * u * u * kappa)
        })
        .collect()
}

/// `f̂(ξ) = Σ_k f(x_k) e^{-2πi x_k ξ} Δx` at the frequencies `xis`.
pub fn direct_dft(f: &Signal64, xis: &[f64]) -> Vec<Complex<f64>> {
    let g = f.grid();
    let dx = g.spacing();
    xis.iter()
        .map(|&xi| {
            f.values()
                .iter()
                .enumerate()
                .map(|(k, v)| v * Complex::from_polar(dx, -2.0 * PI * g.coordinate(k) * xi))
                .sum()
        })
        .collect()
}

/// `e^{iπ x² κ} f(x)` sample by sample.
pub fn chirp(f: &Signal64, kappa: f64) -> Vec<Complex<f64>> {
    let g = f.grid();
    f.values()
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let x = g.coordinate(k);
            v * Complex::from_polar(1.0, PI * kappa * x * x)
        })
        .collect()
}

/// Discrete `L^p` norm `(Σ|v|^p Δx)^{1/p}`, or the max modulus for `p = ∞`.
pub fn lp_norm(values: &[Complex<f64>], dx: f64, p: f64) -> f64 {
    if p.is_infinite() {
        return values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    }
    (values.iter().map(|v| v.norm().powf(p)).sum::<f64>() * dx).powf(1.0 / p)
}

/// Mean and `r`-oscillation of `values` on one 1D cube, summed in index order.
fn cube_oscillation(values: &[Complex<f64>], q: &Cube, r: f64) -> f64 {
    let cell = &values[q.offset[0]..q.offset[0] + q.side];
    let n = cell.len() as f64;
    let mean: Complex<f64> = cell.iter().sum::<Complex<f64>>() / n;
    (cell.iter().map(|v| (v - mean).norm().powf(r)).sum::<f64>() / n).powf(1.0 / r)
}

/// `sup_{Q ∋ x} ⨍_Q |v - v_Q|` at every sample, scanning every cube.
pub fn sharp_maximal(values: &[Complex<f64>], cubes: &[Cube]) -> Vec<f64> {
    let mut out = vec![0.0f64; values.len()];
    for q in cubes {
        let o = cube_oscillation(values, q, 1.0);
        for v in &mut out[q.offset[0]..q.offset[0] + q.side] {
            *v = v.max(o);
        }
    }
    out
}

/// `sup_Q (⨍_Q |v - v_Q|^r)^{1/r}`.
pub fn bmo(values: &[Complex<f64>], cubes: &[Cube], r: f64) -> f64 {
    cubes.iter().map(|q| cube_oscillation(values, q, r)).fold(0.0, f64::max)
}

/// The forbidden set for the Kato–Ponce transfer, written out case by case:
/// negative orders, and non-even orders at or below `max(0, n/r - n)`.
pub fn kato_ponce_forbidden(s: f64, r: f64, n: usize) -> bool {
    if s < 0.0 {
        return true;
    }
    let threshold = if r < 1.0 { n as f64 / r - n as f64 } else { 0.0 };
    if s > threshold {
        return false;
    }
    let mut k = 0.0;
    while k <= s + 1.0 {
        if (s - k).abs() < 1e-12 {
            return false;
        }
        k += 2.0;
    }
    true
}

/// `(s, κ, D)` from the angle.
pub fn descriptors(alpha: f64) -> (f64, f64, f64) {
    let s = alpha.sin().abs();
    let kappa = alpha.cos() / alpha.sin();
    (s, kappa, (1.0 - s).abs() + kappa.abs())
}

/// Twisted Haar function on a 1D grid: `±|I|^{-1/2}` on the halves of cell
/// `offset` at `level`, times `e^{-iπκx²}`.
pub fn haar(grid: &Grid64, level: u32, offset: usize, kappa: f64) -> Vec<Complex<f64>> {
    let n = grid.samples();
    let m = n >> level;
    let amp = 1.0 / (m as f64 * grid.spacing()).sqrt();
    (0..n)
        .map(|i| {
            let v = if i < offset * m || i >= (offset + 1) * m {
                0.0
            } else if i < offset * m + m / 2 {
                amp
            } else {
                -amp
            };
            let x = grid.coordinate(i);
            Complex::from_polar(v, -PI * kappa * x * x)
        })
        .collect()
}

/// Twisted normalized indicator of cell `offset` at `level`.
pub fn scaling(grid: &Grid64, level: u32, offset: usize, kappa: f64) -> Vec<Complex<f64>> {
    let n = grid.samples();
    let m = n >> level;
    let amp = 1.0 / (m as f64 * grid.spacing()).sqrt();
    (0..n)
        .map(|i| {
            let v = if i / m == offset { amp } else { 0.0 };
            let x = grid.coordinate(i);
            Complex::from_polar(v, -PI * kappa * x * x)
        })
        .collect()
}

/// `Σ a conj(b) Δx`.
pub fn inner(a: &[Complex<f64>], b: &[Complex<f64>], dx: f64) -> Complex<f64> {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum::<Complex<f64>>() * dx
}
