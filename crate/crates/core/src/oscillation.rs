//! Mean oscillation on dyadic cubes: BMO scores, the sharp maximal function,
//! Carleson tent sums, John–Nirenberg level sets, the Hardy square-function
//! quasi-norm and chirped atoms.
//!
//! Every `α`-side quantity is computed by chirp-modulating first and then
//! running the classical routine, so the two sides agree bit for bit.

use rand::Rng;
use serde::Serialize;

use crate::dyadic::fit_slope;
use crate::error::{FrlpError, Result};
use crate::fft::{convolve, fourier};
use crate::frft::{chirp_mul, Direction};
use crate::grid::{lp_norm, lp_norm_real, FracParam, GridSpec, Signal};
use crate::lp::{square_function, DyadicBank};
use crate::scalar::{creal, czero, Complex, Real};
use crate::signals::rng;

/// An axis-aligned cube of `side` samples per axis starting at `offset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Cube {
    pub offset: [usize; 2],
    pub side: usize,
}

impl Cube {
    pub fn contains<T: Real>(&self, grid: &GridSpec<T>, idx: usize) -> bool {
        let i = grid.unravel(idx);
        (0..grid.dim()).all(|a| i[a] >= self.offset[a] && i[a] < self.offset[a] + self.side)
    }

    /// Flat indices of the samples inside the cube, row-major.
    pub fn indices<T: Real>(&self, grid: &GridSpec<T>) -> Vec<usize> {
        if grid.dim() == 1 {
            (self.offset[0]..self.offset[0] + self.side).collect()
        } else {
            let mut out = Vec::with_capacity(self.side * self.side);
            for r in self.offset[0]..self.offset[0] + self.side {
                for c in self.offset[1]..self.offset[1] + self.side {
                    out.push(grid.ravel([r, c]));
                }
            }
            out
        }
    }

    pub fn measure<T: Real>(&self, grid: &GridSpec<T>) -> T {
        (T::count(self.side) * grid.spacing()).powi(grid.dim() as i32)
    }

    pub fn side_length<T: Real>(&self, grid: &GridSpec<T>) -> T {
        T::count(self.side) * grid.spacing()
    }

    pub fn diameter<T: Real>(&self, grid: &GridSpec<T>) -> T {
        self.side_length(grid) * T::count(grid.dim()).sqrt()
    }

    /// Physical center of the cube.
    pub fn center<T: Real>(&self, grid: &GridSpec<T>) -> [T; 2] {
        let h = grid.spacing();
        let mut c = [T::zero(); 2];
        for (a, ca) in c.iter_mut().enumerate().take(grid.dim()) {
            *ca = grid.coordinate(self.offset[a]) + T::count(self.side - 1) * h / T::of(2.0);
        }
        c
    }
}

pub const MIN_CUBE_SIDE: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct CubeFamily<T> {
    grid: GridSpec<T>,
    cubes: Vec<Cube>,
}

impl<T: Real> CubeFamily<T> {
    /// Every dyadic cube with at least `min_side` samples per side.
    pub fn dyadic(grid: &GridSpec<T>, min_side: usize) -> Result<Self> {
        let n = grid.samples();
        if !n.is_power_of_two() {
            return Err(FrlpError::ScaleMisaligned { scale: 0, samples: n });
        }
        let min_side = min_side.max(MIN_CUBE_SIDE);
        let mut cubes = Vec::new();
        let mut side = n;
        while side >= min_side {
            let per_axis = n / side;
            let count = per_axis.pow(grid.dim() as u32);
            for c in 0..count {
                let (a, b) = if grid.dim() == 1 { (c, 0) } else { (c / per_axis, c % per_axis) };
                cubes.push(Cube { offset: [a * side, b * side], side });
            }
            side /= 2;
        }
        Ok(Self { grid: *grid, cubes })
    }

    /// A custom family; every cube must be dyadic, at least 4 samples wide
    /// and inside the grid.
    pub fn new(grid: &GridSpec<T>, cubes: Vec<Cube>) -> Result<Self> {
        let n = grid.samples();
        for c in &cubes {
            if c.side < MIN_CUBE_SIDE {
                return Err(FrlpError::CubeTooSmall { samples: c.side, moments: 0 });
            }
            let aligned = c.side.is_power_of_two() && n % c.side == 0;
            let inside = (0..grid.dim()).all(|a| c.offset[a] % c.side == 0 && c.offset[a] + c.side <= n);
            if !aligned || !inside {
                return Err(FrlpError::ScaleMisaligned { scale: c.side as u32, samples: n });
            }
        }
        Ok(Self { grid: *grid, cubes })
    }

    pub fn grid(&self) -> &GridSpec<T> {
        &self.grid
    }

    pub fn cubes(&self) -> &[Cube] {
        &self.cubes
    }

    pub fn is_empty(&self) -> bool {
        self.cubes.is_empty()
    }

    pub fn len(&self) -> usize {
        self.cubes.len()
    }

    fn nonempty(&self) -> Result<()> {
        if self.cubes.is_empty() {
            Err(FrlpError::EmptyCubeFamily)
        } else {
            Ok(())
        }
    }
}

fn modulated<T: Real>(b: &Signal<T>, p: Option<&FracParam<T>>) -> Signal<T> {
    match p {
        Some(p) => chirp_mul(b, p, Direction::Forward),
        None => b.clone(),
    }
}

fn average<T: Real>(g: &Signal<T>, idx: &[usize]) -> Complex<T> {
    let v = g.values();
    let sum = idx.iter().fold(czero::<T>(), |acc, &i| acc + v[i]);
    sum / T::count(idx.len())
}

/// `(1/|Q| ∫_Q |g - g_Q|^r)^{1/r}` for `r ≥ 1`.
pub fn mean_oscillation<T: Real>(g: &Signal<T>, cube: &Cube, r: T) -> T {
    let idx = cube.indices(g.grid());
    let avg = average(g, &idx);
    let v = g.values();
    lp_norm_real(idx.iter().map(|&i| (v[i] - avg).norm()), T::one() / T::count(idx.len()), r)
}

fn check_r<T: Real>(r: T) -> Result<()> {
    if r >= T::one() {
        Ok(())
    } else {
        Err(FrlpError::InvalidArgument(format!("oscillation exponent r = {r} must be >= 1")))
    }
}

/// Classical `r`-oscillation seminorm over a cube family.
pub fn bmo_norm<T: Real>(g: &Signal<T>, cubes: &CubeFamily<T>, r: T) -> Result<T> {
    cubes.nonempty()?;
    check_r(r)?;
    if g.grid() != cubes.grid() {
        return Err(FrlpError::GridMismatch);
    }
    Ok(cubes.cubes().iter().map(|c| mean_oscillation(g, c, r)).fold(T::zero(), T::max))
}

/// `Ω_{α,r}(b) = sup_Q (1/|Q| ∫_Q |M_α b - Avg_Q M_α b|^r)^{1/r}`.
pub fn bmo_alpha_norm<T: Real>(b: &Signal<T>, cubes: &CubeFamily<T>, p: Option<&FracParam<T>>, r: T) -> Result<T> {
    bmo_norm(&modulated(b, p), cubes, r)
}

/// `M^#_α b(x)`: largest mean oscillation of `M_α b` over family cubes containing `x`.
pub fn sharp_maximal<T: Real>(b: &Signal<T>, cubes: &CubeFamily<T>, p: Option<&FracParam<T>>) -> Result<Signal<T>> {
    cubes.nonempty()?;
    let g = modulated(b, p);
    if g.grid() != cubes.grid() {
        return Err(FrlpError::GridMismatch);
    }
    let mut out = vec![T::zero(); g.grid().len()];
    for c in cubes.cubes() {
        let osc = mean_oscillation(&g, c, T::one());
        for i in c.indices(g.grid()) {
            out[i] = out[i].max(osc);
        }
    }
    Signal::new(*g.grid(), out.into_iter().map(creal).collect())
}

/// Mean-zero analysing kernel for Carleson sums.
#[derive(Clone)]
pub enum Kernel<T> {
    /// `ψ(x) = (n - |x|²) e^{-|x|²/2}`, re-centered to zero mean on the grid.
    MexicanHat,
    /// A user profile; sampled dilates must already be mean-zero.
    Custom(String, std::sync::Arc<dyn Fn([T; 2]) -> T + Send + Sync>),
}

impl<T: Real> Kernel<T> {
    pub fn name(&self) -> String {
        match self {
            Kernel::MexicanHat => "mexican_hat".into(),
            Kernel::Custom(n, _) => n.clone(),
        }
    }
}

impl<T> std::fmt::Debug for Kernel<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Kernel::MexicanHat => write!(f, "MexicanHat"),
            Kernel::Custom(n, _) => write!(f, "Custom({n})"),
        }
    }
}

pub const MEAN_ZERO_TOLERANCE: f64 = 1e-12;

/// `Ψ_t(x) = t^{-n} ψ(x/t)` sampled on the grid around `x = 0`.
pub fn sample_kernel<T: Real>(grid: &GridSpec<T>, psi: &Kernel<T>, t: T) -> Result<Signal<T>> {
    let n = grid.dim();
    let norm = t.powi(n as i32);
    let mut v: Vec<T> = (0..grid.len())
        .map(|i| {
            let x = grid.point(i);
            let y = [x[0] / t, x[1] / t];
            let val = match psi {
                Kernel::MexicanHat => {
                    let r2 = y[0] * y[0] + y[1] * y[1];
                    (T::count(n) - r2) * (-r2 / T::of(2.0)).exp()
                }
                Kernel::Custom(_, f) => f(y),
            };
            val / norm
        })
        .collect();
    if matches!(psi, Kernel::MexicanHat) {
        let mean = v.iter().copied().sum::<T>() / T::count(v.len());
        for x in v.iter_mut() {
            *x = *x - mean;
        }
    }
    let total: T = v.iter().copied().sum();
    let mass: T = v.iter().map(|x| x.abs()).sum();
    let rel = if mass > T::zero() { (total / mass).abs() } else { T::zero() };
    if rel.to_f64() > MEAN_ZERO_TOLERANCE {
        return Err(FrlpError::PsiNotMeanZero(rel.to_f64()));
    }
    Signal::new(*grid, v.into_iter().map(creal).collect())
}

/// `Ψ_t^α b = M_α^{-1}(Ψ_t * M_α b)`.
pub fn psi_alpha<T: Real>(b: &Signal<T>, psi: &Kernel<T>, t: T, p: Option<&FracParam<T>>) -> Result<Signal<T>> {
    let k = sample_kernel(b.grid(), psi, t)?;
    let c = convolve(&modulated(b, p), &k);
    Ok(match p {
        Some(p) => chirp_mul(&c, p, Direction::Inverse),
        None => c,
    })
}

/// Dyadic scales `t_k = 2^k Δx` strictly below `L/2`, starting at `2Δx`.
pub fn default_scales<T: Real>(grid: &GridSpec<T>) -> Vec<T> {
    let mut out = Vec::new();
    let mut t = T::of(2.0) * grid.spacing();
    while t < grid.extent() / T::of(2.0) {
        out.push(t);
        t = t * T::of(2.0);
    }
    out
}

/// `sup_Q (1/|Q| ∫_{T(Q)} |Ψ_t^α b|² dx dt/t)^{1/2}`.
///
/// The tent over `Q` keeps scales `t ≤ ℓ(Q)`; `dt/t` becomes the log spacing
/// of consecutive scales. The integrand uses `|Ψ_t * M_α b|`, which equals
/// `|Ψ_t^α b|` pointwise.
pub fn carleson_score<T: Real>(
    b: &Signal<T>,
    p: Option<&FracParam<T>>,
    psi: &Kernel<T>,
    scales: &[T],
    cubes: &CubeFamily<T>,
) -> Result<T> {
    cubes.nonempty()?;
    let g = modulated(b, p);
    let grid = *g.grid();
    if &grid != cubes.grid() {
        return Err(FrlpError::GridMismatch);
    }
    let weights = log_weights(scales);
    let mut energy = Vec::with_capacity(scales.len());
    for &t in scales {
        let k = sample_kernel(&grid, psi, t)?;
        energy.push(convolve(&g, &k).values().iter().map(|v| v.norm_sqr()).collect::<Vec<T>>());
    }
    let dv = grid.cell_volume();
    let mut best = T::zero();
    for c in cubes.cubes() {
        let ell = c.side_length(&grid);
        let idx = c.indices(&grid);
        let mut sum = T::zero();
        for (k, &t) in scales.iter().enumerate() {
            if t > ell {
                continue;
            }
            let s: T = idx.iter().map(|&i| energy[k][i]).sum();
            sum = sum + weights[k] * s * dv;
        }
        best = best.max((sum / c.measure(&grid)).sqrt());
    }
    Ok(best)
}

fn log_weights<T: Real>(scales: &[T]) -> Vec<T> {
    let n = scales.len();
    (0..n)
        .map(|k| {
            if n == 1 {
                return T::of(2.0f64.ln());
            }
            let lo = if k == 0 { scales[1] / scales[0] } else { scales[k] / scales[k - 1] };
            let hi = if k + 1 == n { scales[n - 1] / scales[n - 2] } else { scales[k + 1] / scales[k] };
            (lo.ln() + hi.ln()) / T::of(2.0)
        })
        .collect()
}

/// Measured `inf_{ξ≠0} sup_t |Ψ̂_t(ξ)|` over the grid frequencies.
pub fn kernel_nondegeneracy<T: Real>(grid: &GridSpec<T>, psi: &Kernel<T>, scales: &[T]) -> Result<T> {
    let mut sup = vec![T::zero(); grid.len()];
    for &t in scales {
        let h = fourier(&sample_kernel(grid, psi, t)?);
        for (s, v) in sup.iter_mut().zip(h.values()) {
            *s = s.max(v.norm());
        }
    }
    Ok((0..grid.len())
        .filter(|&i| grid.freq_norm(i) > T::zero())
        .map(|i| sup[i])
        .fold(T::infinity(), T::min))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JnProfile {
    pub lambdas: Vec<f64>,
    /// `|{x ∈ Q : |g - g_Q| > λ}| / |Q|`.
    pub fractions: Vec<f64>,
    pub bmo: f64,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub pass: bool,
}

/// Level-set fractions of `|M_α b - Avg_Q M_α b|` on `Q` and a log-linear fit.
///
/// The fit uses only the positive fractions; it passes when at least three
/// are positive, the slope is negative and `R² > 0.9`.
pub fn john_nirenberg_profile<T: Real>(
    b: &Signal<T>,
    p: Option<&FracParam<T>>,
    cube: &Cube,
    lambdas: &[T],
) -> Result<JnProfile> {
    if lambdas.is_empty() || lambdas.windows(2).any(|w| !(w[1] > w[0])) || !(lambdas[0] > T::zero()) {
        return Err(FrlpError::InvalidArgument("lambda grid must be positive and increasing".into()));
    }
    let g = modulated(b, p);
    let idx = cube.indices(g.grid());
    let avg = average(&g, &idx);
    let dev: Vec<T> = idx.iter().map(|&i| (g.values()[i] - avg).norm()).collect();
    let fractions: Vec<f64> = lambdas
        .iter()
        .map(|&l| dev.iter().filter(|&&d| d > l).count() as f64 / dev.len() as f64)
        .collect();
    let bmo = (dev.iter().copied().sum::<T>() / T::count(dev.len())).to_f64();
    let (xs, ys): (Vec<f64>, Vec<f64>) = lambdas
        .iter()
        .zip(&fractions)
        .filter(|(_, &f)| f > 0.0)
        .map(|(&l, f)| (l.to_f64(), f.ln()))
        .unzip();
    let (slope, intercept, r_squared) = if xs.len() >= 2 { linear_fit(&xs, &ys) } else { (f64::NAN, f64::NAN, 0.0) };
    let pass = xs.len() >= 3 && slope < 0.0 && r_squared > 0.9;
    Ok(JnProfile {
        lambdas: lambdas.iter().map(|&l| l.to_f64()).collect(),
        fractions,
        bmo,
        slope,
        intercept,
        r_squared,
        pass,
    })
}

/// Least-squares line `y = a x + b` with its coefficient of determination.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let slope = fit_slope(x, y);
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let intercept = my - slope * mx;
    let ss_tot: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    let ss_res: f64 = x.iter().zip(y).map(|(a, b)| (b - slope * a - intercept).powi(2)).sum();
    let r2 = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    (slope, intercept, r2)
}

/// `‖S_α f‖_{L^p}` for `p ∈ (0, 1]`.
pub fn hardy_square_quasinorm<T: Real>(f: &Signal<T>, bank: &DyadicBank<T>, p: Option<&FracParam<T>>, exponent: T) -> Result<T> {
    if !(exponent > T::zero() && exponent <= T::one()) {
        return Err(FrlpError::InvalidArgument(format!("Hardy exponent {exponent} must lie in (0, 1]")));
    }
    Ok(lp_norm(&square_function(f, bank, p)?, exponent))
}

/// Largest order `⌊n(1/p - 1)⌋` of vanishing moments for an `H^p` atom.
pub fn moment_order(p: f64, dim: usize) -> usize {
    let d = dim as f64 * (1.0 / p - 1.0);
    (d + 1e-12).floor().max(0.0) as usize
}

/// Multi-indices `γ` with `|γ| ≤ d` in dimension `dim`.
pub fn moment_indices(d: usize, dim: usize) -> Vec<[usize; 2]> {
    let mut out = Vec::new();
    for total in 0..=d {
        if dim == 1 {
            out.push([total, 0]);
        } else {
            for a in (0..=total).rev() {
                out.push([a, total - a]);
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentEntry {
    pub gamma: [usize; 2],
    pub modulus: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AtomReport {
    pub cube: Cube,
    pub p: f64,
    pub q: f64,
    pub support_ok: bool,
    pub size_ok: bool,
    pub size: f64,
    pub size_bound: f64,
    pub moments: Vec<MomentEntry>,
    pub pass: bool,
}

fn validate_exponents(p: f64, q: f64) -> Result<()> {
    if !(p > 0.0 && p <= 1.0) || !(q > 1.0) {
        return Err(FrlpError::InvalidArgument(format!("atom exponents need p in (0,1], q in (1,inf]; got {p}, {q}")));
    }
    Ok(())
}

/// Moments are taken about the cube center, an equivalent set of conditions
/// that keeps the tolerance on the scale of `diam(Q)`.
pub fn validate_atom<T: Real>(a: &Signal<T>, cube: &Cube, p: f64, q: f64, alpha: Option<&FracParam<T>>) -> Result<AtomReport> {
    validate_exponents(p, q)?;
    let grid = *a.grid();
    let g = modulated(a, alpha);
    let sup = a.values().iter().map(|v| v.norm().to_f64()).fold(0.0, f64::max);
    let leak = (0..grid.len())
        .filter(|&i| !cube.contains(&grid, i))
        .map(|i| a.values()[i].norm().to_f64())
        .fold(0.0, f64::max);
    let support_ok = leak <= 1e-12 * sup;
    let measure = cube.measure(&grid).to_f64();
    let size = lp_norm(a, T::of(q)).to_f64();
    let size_bound = measure.powf(1.0 / q - 1.0 / p);
    let size_ok = size <= size_bound * (1.0 + 1e-10);
    let l1 = lp_norm(a, T::one()).to_f64();
    let diam = cube.diameter(&grid).to_f64();
    let c = cube.center(&grid);
    let dv = grid.cell_volume().to_f64();
    let idx = cube.indices(&grid);
    let moments: Vec<MomentEntry> = moment_indices(moment_order(p, grid.dim()), grid.dim())
        .into_iter()
        .map(|gamma| {
            let m = idx.iter().fold(Complex::new(0.0, 0.0), |acc, &i| {
                let x = grid.point(i);
                let w = (x[0] - c[0]).to_f64().powi(gamma[0] as i32) * (x[1] - c[1]).to_f64().powi(gamma[1] as i32);
                let v = g.values()[i];
                acc + Complex::new(v.re.to_f64(), v.im.to_f64()) * w
            }) * dv;
            let order = (gamma[0] + gamma[1]) as i32;
            MomentEntry { gamma, modulus: m.norm(), bound: 1e-8 * l1 * diam.powi(order) }
        })
        .collect();
    let moments_ok = moments.iter().all(|m| m.modulus <= m.bound);
    Ok(AtomReport { cube: *cube, p, q, support_ok, size_ok, size, size_bound, moments, pass: support_ok && size_ok && moments_ok })
}

/// A classical atom on `Q` chirped back: `A_α = M_α^{-1} a`.
///
/// `a` is a random windowed bump with its moments up to `⌊n(1/p-1)⌋`
/// projected out, scaled to meet the size condition with equality.
pub fn synthesize_atom<T: Real>(grid: &GridSpec<T>, cube: &Cube, p: f64, q: f64, alpha: Option<&FracParam<T>>, seed: u64) -> Result<Signal<T>> {
    validate_exponents(p, q)?;
    CubeFamily::new(grid, vec![*cube])?;
    let idx = cube.indices(grid);
    let gammas = moment_indices(moment_order(p, grid.dim()), grid.dim());
    if gammas.len() >= idx.len() {
        return Err(FrlpError::CubeTooSmall { samples: idx.len(), moments: gammas.len() });
    }
    let c = cube.center(grid);
    let half = cube.side_length(grid).to_f64() / 2.0;
    let local: Vec<[f64; 2]> = idx
        .iter()
        .map(|&i| {
            let x = grid.point(i);
            [(x[0] - c[0]).to_f64() / half, (x[1] - c[1]).to_f64() / half]
        })
        .collect();
    let mut r = rng(seed);
    let mut v: Vec<f64> = local
        .iter()
        .map(|y| {
            let w: f64 = (0..grid.dim()).map(|a| (1.0 - y[a] * y[a]).max(0.0)).product();
            w * (r.random::<f64>() * 2.0 - 1.0 + 0.5)
        })
        .collect();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for gamma in &gammas {
        let mut e: Vec<f64> = local.iter().map(|y| y[0].powi(gamma[0] as i32) * y[1].powi(gamma[1] as i32)).collect();
        for _ in 0..2 {
            for b in &basis {
                let d: f64 = e.iter().zip(b).map(|(x, y)| x * y).sum();
                e.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
            }
        }
        let n = e.iter().map(|x| x * x).sum::<f64>().sqrt();
        e.iter_mut().for_each(|x| *x /= n);
        basis.push(e);
    }
    for _ in 0..2 {
        for b in &basis {
            let d: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
        }
    }
    let mut values = vec![czero::<T>(); grid.len()];
    for (&i, &x) in idx.iter().zip(&v) {
        values[i] = creal(T::of(x));
    }
    let a = Signal::new(*grid, values)?;
    let size = lp_norm(&a, T::of(q)).to_f64();
    if size == 0.0 {
        return Err(FrlpError::CubeTooSmall { samples: idx.len(), moments: gammas.len() });
    }
    let target = cube.measure(grid).to_f64().powf(1.0 / q - 1.0 / p);
    let a = a.scale(creal(T::of(target / size)));
    Ok(match alpha {
        Some(p) => chirp_mul(&a, p, Direction::Inverse),
        None => a,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityScores {
    pub omega_r: f64,
    pub carleson: f64,
    pub sharpmax: f64,
    pub r: f64,
    pub psi: String,
}

impl StabilityScores {
    /// `[Ω/M#, C/M#, Ω/C]`.
    pub fn ratios(&self) -> [f64; 3] {
        [self.omega_r / self.sharpmax, self.carleson / self.sharpmax, self.omega_r / self.carleson]
    }
}

pub const RATIO_NAMES: [&str; 3] = ["omega_over_sharpmax", "carleson_over_sharpmax", "omega_over_carleson"];

pub fn stability_scores<T: Real>(
    b: &Signal<T>,
    p: Option<&FracParam<T>>,
    r: T,
    psi: &Kernel<T>,
    scales: &[T],
    cubes: &CubeFamily<T>,
) -> Result<StabilityScores> {
    let omega = bmo_alpha_norm(b, cubes, p, r)?;
    let carleson = carleson_score(b, p, psi, scales, cubes)?;
    let sharp = lp_norm(&sharp_maximal(b, cubes, p)?, T::infinity());
    Ok(StabilityScores {
        omega_r: omega.to_f64(),
        carleson: carleson.to_f64(),
        sharpmax: sharp.to_f64(),
        r: r.to_f64(),
        psi: psi.name(),
    })
}

/// Ratio bands from a calibration corpus, as (min, max) per ratio.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Calibration {
    pub bands: [(f64, f64); 3],
    pub percentiles: Vec<[f64; 3]>,
}

impl Calibration {
    /// Observed min/max of each ratio, widened by `slack` on both sides,
    /// plus the 10/50/90 percentiles.
    pub fn from_corpus(scores: &[StabilityScores], slack: f64) -> Result<Self> {
        if scores.is_empty() {
            return Err(FrlpError::InvalidArgument("empty calibration corpus".into()));
        }
        let mut bands = [(f64::INFINITY, f64::NEG_INFINITY); 3];
        let mut cols: [Vec<f64>; 3] = Default::default();
        for s in scores {
            for (k, v) in s.ratios().into_iter().enumerate() {
                if v.is_finite() {
                    bands[k] = (bands[k].0.min(v), bands[k].1.max(v));
                    cols[k].push(v);
                }
            }
        }
        for b in bands.iter_mut() {
            *b = (b.0 / slack, b.1 * slack);
        }
        let percentiles = [0.1, 0.5, 0.9]
            .iter()
            .map(|&q| {
                let mut row = [f64::NAN; 3];
                for (k, c) in cols.iter_mut().enumerate() {
                    c.sort_by(|a, b| a.total_cmp(b));
                    if !c.is_empty() {
                        row[k] = c[((c.len() - 1) as f64 * q).round() as usize];
                    }
                }
                row
            })
            .collect();
        Ok(Self { bands, percentiles })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scoreboard {
    pub omega_r: f64,
    pub carleson: f64,
    pub sharpmax: f64,
    pub ratios: Vec<(String, f64)>,
    pub corpus_percentiles: Vec<[f64; 3]>,
    pub out_of_band: Vec<String>,
}

impl Scoreboard {
    pub fn new(scores: &StabilityScores, cal: &Calibration) -> Self {
        let ratios = scores.ratios();
        let out_of_band = RATIO_NAMES
            .iter()
            .zip(ratios.iter().zip(&cal.bands))
            .filter(|(_, (v, (lo, hi)))| v.is_finite() && (**v < *lo || **v > *hi))
            .map(|(n, _)| n.to_string())
            .collect();
        Self {
            omega_r: scores.omega_r,
            carleson: scores.carleson,
            sharpmax: scores.sharpmax,
            ratios: RATIO_NAMES.iter().map(|s| s.to_string()).zip(ratios).collect(),
            corpus_percentiles: cal.percentiles.clone(),
            out_of_band,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scoreboard serializes")
    }
}

fn ranks(x: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut out = vec![0.0; x.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && x[order[j + 1]] == x[order[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            out[k] = r;
        }
        i = j + 1;
    }
    out
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

/// Smallest pairwise Spearman correlation between the three scores.
pub fn min_rank_correlation(scores: &[StabilityScores]) -> f64 {
    let col = |f: fn(&StabilityScores) -> f64| scores.iter().map(f).collect::<Vec<_>>();
    let (o, c, s) = (col(|x| x.omega_r), col(|x| x.carleson), col(|x| x.sharpmax));
    spearman(&o, &c).min(spearman(&o, &s)).min(spearman(&c, &s))
}

/// Synthetic BMO-type signals, chirped back by `α` so that `M_α b` carries
/// the classical structure: log singularities, jumps and smooth bumps with
/// log-uniform amplitudes.
pub fn bmo_corpus<T: Real>(grid: &GridSpec<T>, count: usize, alpha: Option<&FracParam<T>>, seed: u64) -> Vec<Signal<T>> {
    let mut r = rng(seed);
    let half = grid.extent().to_f64() / 2.0;
    let h = grid.spacing().to_f64();
    (0..count)
        .map(|k| {
            let amp = 10f64.powf(r.random_range(-1.0..1.0));
            let c0 = [r.random_range(-0.6..0.6) * half, r.random_range(-0.6..0.6) * half];
            let c1 = [r.random_range(-0.6..0.6) * half, r.random_range(-0.6..0.6) * half];
            let w = r.random_range(0.05..0.3) * half;
            let kind = k % 3;
            let g = Signal::from_fn(*grid, |x| {
                let x = [x[0].to_f64(), x[1].to_f64()];
                let d = |c: [f64; 2]| ((x[0] - c[0]).powi(2) + (x[1] - c[1]).powi(2)).sqrt();
                let v = match kind {
                    0 => (d(c0) + h).ln(),
                    1 => {
                        let step = if x[0] > c0[0] { 1.0 } else { 0.0 };
                        step + 0.3 * (d(c1) + h).ln()
                    }
                    _ => (-(d(c0) / w).powi(2)).exp() - 0.5 * (d(c1) + h).ln().max(-3.0),
                };
                creal(T::of(amp * v))
            });
            match alpha {
                Some(p) => chirp_mul(&g, p, Direction::Inverse),
                None => g,
            }
        })
        .collect()
}
