//! Seeded test-signal generators.
//!
//! Every generator is a pure function of its arguments; the same seed gives
//! the same samples on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::fft::{fourier, inverse_fourier};
use crate::grid::{GridSpec, Signal};
use crate::scalar::{Complex, Real};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn normal<R: Rng>(r: &mut R) -> f64 {
    StandardNormal.sample(r)
}

/// White complex Gaussian samples.
pub fn random_signal<T: Real>(grid: &GridSpec<T>, seed: u64) -> Signal<T> {
    let mut r = rng(seed);
    let values = (0..grid.len()).map(|_| Complex::new(T::of(normal(&mut r)), T::of(normal(&mut r)))).collect();
    Signal::from_parts(*grid, values)
}

/// Real white Gaussian samples.
pub fn random_real_signal<T: Real>(grid: &GridSpec<T>, seed: u64) -> Signal<T> {
    let mut r = rng(seed);
    let values = (0..grid.len()).map(|_| Complex::new(T::of(normal(&mut r)), T::zero())).collect();
    Signal::from_parts(*grid, values)
}

/// Random signal band-limited to `|ξ| ≤ band` with a smooth taper.
pub fn random_bandlimited<T: Real>(grid: &GridSpec<T>, band: T, seed: u64) -> Signal<T> {
    let f = random_signal(grid, seed);
    let mut spec = fourier(&f).into_values();
    for (i, v) in spec.iter_mut().enumerate() {
        let r = grid.freq_norm(i) / band;
        let w = if r >= T::one() { T::zero() } else { (T::one() - r * r).powi(2) };
        *v = *v * w;
    }
    inverse_fourier(grid, &spec)
}

/// Gaussian `a e^{-π|x-c|²/w²}` centered at `c` with width `w`.
pub fn gaussian<T: Real>(grid: &GridSpec<T>, center: [T; 2], width: T, amplitude: Complex<T>) -> Signal<T> {
    let dim = grid.dim();
    Signal::from_fn(*grid, |x| {
        let mut r2 = T::zero();
        for a in 0..dim {
            r2 = r2 + (x[a] - center[a]).powi(2);
        }
        amplitude * (-T::PI() * r2 / (width * width)).exp()
    })
}

/// A random superposition of modulated Gaussians, decaying fast at the boundary.
pub fn random_schwartz<T: Real>(grid: &GridSpec<T>, terms: usize, seed: u64) -> Signal<T> {
    let mut r = rng(seed);
    let l = grid.extent().to_f64();
    let dim = grid.dim();
    let mut out = Signal::zeros(*grid);
    for _ in 0..terms {
        let c = [r.random_range(-l / 8.0..l / 8.0), r.random_range(-l / 8.0..l / 8.0)];
        let w = r.random_range(0.5..1.5);
        let freq = [r.random_range(-2.0..2.0), r.random_range(-2.0..2.0)];
        let amp = Complex::new(normal(&mut r), normal(&mut r));
        let g = Signal::from_fn(*grid, |x| {
            let mut r2 = 0.0;
            let mut ph = 0.0;
            for a in 0..dim {
                let d = x[a].to_f64() - c[a];
                r2 += d * d;
                ph += freq[a] * x[a].to_f64();
            }
            let v = amp * (-std::f64::consts::PI * r2 / (w * w)).exp() * Complex::from_polar(1.0, 2.0 * std::f64::consts::PI * ph);
            Complex::new(T::of(v.re), T::of(v.im))
        });
        out = out.add(&g);
    }
    out
}
