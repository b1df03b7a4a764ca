//! Centered discrete Fourier transforms on a [`GridSpec`] and a Bluestein
//! chirp-z evaluator for arbitrary equispaced frequency lattices.
//!
//! The forward transform approximates `ĝ(ξ) = ∫ e^{-2πi x·ξ} g(x) dx` by the
//! Riemann sum over the grid, evaluated on the centered lattice
//! `ξ_m = (m - N/2)/L`. With `Δx Δξ N = 1` the pair is exactly inverse and
//! unitary for the weighted `L²` inner products.

use rustfft::{Fft, FftDirection, FftPlanner};
use std::sync::Arc;

use crate::grid::{GridSpec, Signal, Spectrum};
use crate::scalar::{cis, czero, Complex, Real};

fn plan<T: Real>(n: usize, direction: FftDirection) -> Arc<dyn Fft<T>> {
    FftPlanner::<T>::new().plan_fft(n, direction)
}

/// Apply a 1D transform along every axis of a row-major `n^dim` array.
fn along_axes<T: Real>(
    data: &mut [Complex<T>],
    n: usize,
    dim: usize,
    mut f: impl FnMut(&mut [Complex<T>]),
) {
    if dim == 1 {
        f(data);
        return;
    }
    for row in data.chunks_exact_mut(n) {
        f(row);
    }
    let mut col = vec![czero(); n];
    for c in 0..n {
        for r in 0..n {
            col[r] = data[r * n + c];
        }
        f(&mut col);
        for r in 0..n {
            data[r * n + c] = col[r];
        }
    }
}

#[inline]
fn alternating<T: Real>(k: usize) -> T {
    if k % 2 == 0 {
        T::one()
    } else {
        -T::one()
    }
}

fn centered_pass<T: Real>(row: &mut [Complex<T>], fft: &dyn Fft<T>) {
    let n = row.len();
    let half = n / 2;
    for (k, v) in row.iter_mut().enumerate() {
        *v = *v * alternating::<T>(k);
    }
    fft.process(row);
    for (m, v) in row.iter_mut().enumerate() {
        *v = *v * alternating::<T>(m + half);
    }
}

/// Forward centered transform of raw grid values (no quadrature weight).
pub(crate) fn centered_dft<T: Real>(values: &mut [Complex<T>], n: usize, dim: usize) {
    let fft = plan::<T>(n, FftDirection::Forward);
    along_axes(values, n, dim, |row| centered_pass(row, fft.as_ref()));
}

/// Inverse centered transform of raw values (no quadrature weight).
pub(crate) fn centered_idft<T: Real>(values: &mut [Complex<T>], n: usize, dim: usize) {
    let fft = plan::<T>(n, FftDirection::Inverse);
    along_axes(values, n, dim, |row| centered_pass(row, fft.as_ref()));
}

/// Continuous-normalized Fourier transform `ĝ(ξ_m) ≈ Δx^dim Σ_k g_k e^{-2πi x_k·ξ_m}`.
pub fn fourier<T: Real>(f: &Signal<T>) -> Spectrum<T> {
    let g = *f.grid();
    let mut v = f.values().to_vec();
    centered_dft(&mut v, g.samples(), g.dim());
    let w = g.cell_volume();
    for x in v.iter_mut() {
        *x = *x * w;
    }
    Spectrum::from_parts(g, T::one(), v)
}

/// Inverse of [`fourier`]: `g(x_k) ≈ Δξ^dim Σ_m ĝ_m e^{2πi x_k·ξ_m}`.
pub fn inverse_fourier<T: Real>(grid: &GridSpec<T>, coeffs: &[Complex<T>]) -> Signal<T> {
    let mut v = coeffs.to_vec();
    centered_idft(&mut v, grid.samples(), grid.dim());
    let w = grid.freq_cell_volume();
    for x in v.iter_mut() {
        *x = *x * w;
    }
    Signal::from_parts(*grid, v)
}

/// Apply a sampled frequency mask: `(mask ĝ)^∨`.
pub fn apply_mask<T: Real>(f: &Signal<T>, mask: &[Complex<T>]) -> Signal<T> {
    let g = *f.grid();
    let mut v = f.values().to_vec();
    centered_dft(&mut v, g.samples(), g.dim());
    let scale = T::one() / T::count(g.len());
    for (x, m) in v.iter_mut().zip(mask) {
        *x = *x * *m * scale;
    }
    centered_idft(&mut v, g.samples(), g.dim());
    Signal::from_parts(g, v)
}

/// Same as [`apply_mask`] for a real mask.
pub fn apply_real_mask<T: Real>(f: &Signal<T>, mask: &[T]) -> Signal<T> {
    let g = *f.grid();
    let mut v = f.values().to_vec();
    centered_dft(&mut v, g.samples(), g.dim());
    let scale = T::one() / T::count(g.len());
    for (x, m) in v.iter_mut().zip(mask) {
        *x = *x * (*m * scale);
    }
    centered_idft(&mut v, g.samples(), g.dim());
    Signal::from_parts(g, v)
}

/// Periodic convolution `(f * g)(x) = ∫ f(y) g(x - y) dy` on the torus.
pub fn convolve<T: Real>(f: &Signal<T>, g: &Signal<T>) -> Signal<T> {
    let grid = *f.grid();
    let fh = fourier(f);
    let gh = fourier(g);
    // ĝ is sampled around x = 0 at index N/2, so the product needs no extra shift.
    let prod: Vec<_> = fh.values().iter().zip(gh.values()).map(|(a, b)| a * b).collect();
    inverse_fourier(&grid, &prod)
}

/// Bluestein chirp-z evaluation of `y_m = Σ_k a_k e^{-2πi w k m}` for
/// `m = 0..out_len`, with an arbitrary real `w`.
pub fn chirp_z<T: Real>(input: &[Complex<T>], w: T, out_len: usize) -> Vec<Complex<T>> {
    let n = input.len();
    if n == 0 || out_len == 0 {
        return vec![czero(); out_len];
    }
    let size = (n + out_len - 1).next_power_of_two();
    let pi = T::PI();
    let phase = |k: usize| {
        let k = T::count(k);
        pi * w * k * k
    };
    let mut a = vec![czero(); size];
    for (k, &x) in input.iter().enumerate() {
        a[k] = x * cis(-phase(k));
    }
    let mut b = vec![czero(); size];
    for j in 0..out_len.max(n) {
        let c = cis(phase(j));
        if j < out_len {
            b[j] = c;
        }
        if j > 0 && j < n {
            b[size - j] = c;
        }
    }
    let fwd = plan::<T>(size, FftDirection::Forward);
    let inv = plan::<T>(size, FftDirection::Inverse);
    fwd.process(&mut a);
    fwd.process(&mut b);
    let scale = T::one() / T::count(size);
    for (x, y) in a.iter_mut().zip(&b) {
        *x = *x * *y * scale;
    }
    inv.process(&mut a);
    (0..out_len).map(|m| a[m] * cis(-phase(m))).collect()
}

/// Evaluate `Δx Σ_k g_k e^{-2πi x_k ξ}` at `ξ = start + m step` along one axis.
pub fn zoom_dtft_1d<T: Real>(
    values: &[Complex<T>],
    x0: T,
    dx: T,
    start: T,
    step: T,
    out_len: usize,
) -> Vec<Complex<T>> {
    let two_pi = T::of(2.0) * T::PI();
    let pre: Vec<_> = values
        .iter()
        .enumerate()
        .map(|(k, &v)| v * cis(-two_pi * T::count(k) * dx * start))
        .collect();
    let y = chirp_z(&pre, dx * step, out_len);
    y.into_iter()
        .enumerate()
        .map(|(m, v)| v * cis(-two_pi * x0 * (start + T::count(m) * step)) * dx)
        .collect()
}

/// Separable zoom transform over all axes of a grid signal, returning an
/// `out_len^dim` row-major array.
pub fn zoom_dtft<T: Real>(f: &Signal<T>, start: T, step: T, out_len: usize) -> Vec<Complex<T>> {
    let g = f.grid();
    let n = g.samples();
    let x0 = g.coordinate(0);
    let dx = g.spacing();
    if g.dim() == 1 {
        return zoom_dtft_1d(f.values(), x0, dx, start, step, out_len);
    }
    let mut rows = Vec::with_capacity(n * out_len);
    for row in f.values().chunks_exact(n) {
        rows.extend(zoom_dtft_1d(row, x0, dx, start, step, out_len));
    }
    let mut out = vec![czero(); out_len * out_len];
    let mut col = vec![czero(); n];
    for c in 0..out_len {
        for r in 0..n {
            col[r] = rows[r * out_len + c];
        }
        let t = zoom_dtft_1d(&col, x0, dx, start, step, out_len);
        for (r, v) in t.into_iter().enumerate() {
            out[r * out_len + c] = v;
        }
    }
    out
}
