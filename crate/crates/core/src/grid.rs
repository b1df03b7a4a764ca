//! Uniform periodic grids, sampled signals and spectra, and the
//! fractional-parameter descriptors.

use crate::error::{FrlpError, Result};
use crate::scalar::{czero, Complex, Real};

/// Uniform periodic grid on `[-L/2, L/2)^dim` with `N` samples per axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec<T> {
    dim: usize,
    extent: T,
    samples: usize,
}

impl<T: Real> GridSpec<T> {
    pub fn new(dim: usize, extent: T, samples: usize) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(FrlpError::DimUnsupported(dim));
        }
        if !(extent > T::zero()) || !extent.is_finite() {
            return Err(FrlpError::NonPositiveExtent(extent.to_f64()));
        }
        if samples % 2 != 0 {
            return Err(FrlpError::OddSampleCount(samples));
        }
        if samples < 8 {
            return Err(FrlpError::TooFewSamples(samples));
        }
        Ok(Self { dim, extent, samples })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Physical period `L` per axis.
    pub fn extent(&self) -> T {
        self.extent
    }

    /// Samples `N` per axis.
    pub fn samples(&self) -> usize {
        self.samples
    }

    /// Total number of points, `N^dim`.
    pub fn len(&self) -> usize {
        self.samples.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `Δx = L / N`.
    pub fn spacing(&self) -> T {
        self.extent / T::count(self.samples)
    }

    /// `Δξ = 1 / L`.
    pub fn freq_spacing(&self) -> T {
        T::one() / self.extent
    }

    /// Quadrature weight `Δx^dim`.
    pub fn cell_volume(&self) -> T {
        self.spacing().powi(self.dim as i32)
    }

    /// Frequency-side quadrature weight `Δξ^dim`.
    pub fn freq_cell_volume(&self) -> T {
        self.freq_spacing().powi(self.dim as i32)
    }

    /// Nyquist frequency `1 / (2Δx)` per axis.
    pub fn nyquist(&self) -> T {
        T::count(self.samples) / (T::of(2.0) * self.extent)
    }

    /// Largest `|ξ|` present on the centered frequency grid.
    pub fn max_frequency_norm(&self) -> T {
        self.nyquist() * T::count(self.dim).sqrt()
    }

    /// `x_k = -L/2 + k Δx`.
    pub fn coordinate(&self, k: usize) -> T {
        -self.extent / T::of(2.0) + T::count(k) * self.spacing()
    }

    /// Inverse of [`GridSpec::coordinate`], rounding to the nearest index.
    pub fn index_of_coordinate(&self, x: T) -> usize {
        let k = ((x + self.extent / T::of(2.0)) / self.spacing()).round();
        let k = k.to_f64() as isize;
        k.rem_euclid(self.samples as isize) as usize
    }

    /// Centered frequency `(m - N/2) Δξ` for `m = 0..N`.
    pub fn frequency(&self, m: usize) -> T {
        T::index(m as isize - (self.samples / 2) as isize) * self.freq_spacing()
    }

    /// Split a flat row-major index into per-axis indices.
    pub fn unravel(&self, idx: usize) -> [usize; 2] {
        if self.dim == 1 {
            [idx, 0]
        } else {
            [idx / self.samples, idx % self.samples]
        }
    }

    pub fn ravel(&self, i: [usize; 2]) -> usize {
        if self.dim == 1 {
            i[0]
        } else {
            i[0] * self.samples + i[1]
        }
    }

    /// Physical coordinates of a flat index (unused axes are zero).
    pub fn point(&self, idx: usize) -> [T; 2] {
        let [i, j] = self.unravel(idx);
        if self.dim == 1 {
            [self.coordinate(i), T::zero()]
        } else {
            [self.coordinate(i), self.coordinate(j)]
        }
    }

    /// Centered frequency vector of a flat index.
    pub fn freq_point(&self, idx: usize) -> [T; 2] {
        let [i, j] = self.unravel(idx);
        if self.dim == 1 {
            [self.frequency(i), T::zero()]
        } else {
            [self.frequency(i), self.frequency(j)]
        }
    }

    pub fn radius_sq(&self, idx: usize) -> T {
        let p = self.point(idx);
        p[0] * p[0] + p[1] * p[1]
    }

    pub fn freq_norm(&self, idx: usize) -> T {
        let p = self.freq_point(idx);
        (p[0] * p[0] + p[1] * p[1]).sqrt()
    }

    /// Same sampling with `samples` replaced, keeping the extent.
    pub fn refined(&self, factor: usize) -> Result<Self> {
        Self::new(self.dim, self.extent, self.samples * factor)
    }

    /// Convert the scalar type.
    pub fn cast<U: Real>(&self) -> GridSpec<U> {
        GridSpec { dim: self.dim, extent: U::of(self.extent.to_f64()), samples: self.samples }
    }
}

/// Convenience wrapper over [`GridSpec::new`].
pub fn make_grid<T: Real>(dim: usize, extent: T, samples: usize) -> Result<GridSpec<T>> {
    GridSpec::new(dim, extent, samples)
}

/// Complex samples of a function on a [`GridSpec`], row-major in 2D.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal<T> {
    grid: GridSpec<T>,
    values: Vec<Complex<T>>,
}

impl<T: Real> Signal<T> {
    pub fn new(grid: GridSpec<T>, values: Vec<Complex<T>>) -> Result<Self> {
        check_values(&grid, &values)?;
        Ok(Self { grid, values })
    }

    /// Skip the finiteness scan; length is still asserted.
    pub(crate) fn from_parts(grid: GridSpec<T>, values: Vec<Complex<T>>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn zeros(grid: GridSpec<T>) -> Self {
        Self { grid, values: vec![czero(); grid.len()] }
    }

    /// Sample `f` at every grid point. The closure receives `[x, y]`
    /// (with `y = 0` in one dimension).
    pub fn from_fn(grid: GridSpec<T>, f: impl Fn([T; 2]) -> Complex<T>) -> Self {
        let values = (0..grid.len()).map(|i| f(grid.point(i))).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &GridSpec<T> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex<T>> {
        self.values
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Self { grid: self.grid, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        self.map(|v| v * c)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    pub fn zip(&self, other: &Self, f: impl Fn(Complex<T>, Complex<T>) -> Complex<T>) -> Self {
        assert_eq!(self.values.len(), other.values.len(), "signal grids differ");
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        Self { grid: self.grid, values }
    }

    /// Pointwise modulus as a real vector.
    pub fn modulus(&self) -> Vec<T> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    /// `<f, g> = Δx^dim Σ f conj(g)`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        let s: Complex<T> =
            self.values.iter().zip(&other.values).fold(czero(), |acc, (&a, &b)| acc + a * b.conj());
        s * self.grid.cell_volume()
    }

    pub fn l2_norm(&self) -> T {
        lp_norm(self, T::of(2.0))
    }

    /// Check the grid and length invariants against another signal.
    pub fn ensure_same_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(FrlpError::GridMismatch);
        }
        Ok(())
    }

    pub fn cast<U: Real>(&self) -> Signal<U> {
        Signal {
            grid: self.grid.cast(),
            values: self
                .values
                .iter()
                .map(|v| Complex::new(U::of(v.re.to_f64()), U::of(v.im.to_f64())))
                .collect(),
        }
    }
}

/// FrFT (or Fourier) coefficients on the centered frequency lattice
/// `u_m = d (m - N/2) Δξ`, where `d` is the dilation (`s_α` for a fractional
/// transform, 1 for the classical one).
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    grid: GridSpec<T>,
    dilation: T,
    values: Vec<Complex<T>>,
}

impl<T: Real> Spectrum<T> {
    pub fn new(grid: GridSpec<T>, dilation: T, values: Vec<Complex<T>>) -> Result<Self> {
        check_values(&grid, &values)?;
        if !(dilation > T::zero()) {
            return Err(FrlpError::InvalidArgument("spectrum dilation must be positive".into()));
        }
        Ok(Self { grid, dilation, values })
    }

    pub(crate) fn from_parts(grid: GridSpec<T>, dilation: T, values: Vec<Complex<T>>) -> Self {
        Self { grid, dilation, values }
    }

    /// The physical grid the spectrum was computed from.
    pub fn grid(&self) -> &GridSpec<T> {
        &self.grid
    }

    pub fn dilation(&self) -> T {
        self.dilation
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex<T>> {
        self.values
    }

    /// Output-lattice spacing `d Δξ`.
    pub fn spacing(&self) -> T {
        self.dilation * self.grid.freq_spacing()
    }

    /// Output-lattice point of a flat index.
    pub fn point(&self, idx: usize) -> [T; 2] {
        let p = self.grid.freq_point(idx);
        [p[0] * self.dilation, p[1] * self.dilation]
    }

    pub fn lp_norm(&self, p: T) -> T {
        lp_norm_weighted(&self.values, self.spacing().powi(self.grid.dim() as i32), p)
    }

    /// View the coefficients as samples of a function of `u` on its own
    /// uniform grid (extent `N d / L`).
    pub fn as_signal(&self) -> Result<Signal<T>> {
        let extent = T::count(self.grid.samples()) * self.spacing();
        let grid = GridSpec::new(self.grid.dim(), extent, self.grid.samples())?;
        Ok(Signal::from_parts(grid, self.values.clone()))
    }

    /// Inverse of [`Spectrum::as_signal`].
    pub fn with_values(&self, values: Vec<Complex<T>>) -> Self {
        assert_eq!(values.len(), self.values.len());
        Self { grid: self.grid, dilation: self.dilation, values }
    }
}

fn check_values<T: Real>(grid: &GridSpec<T>, values: &[Complex<T>]) -> Result<()> {
    if values.len() != grid.len() {
        return Err(FrlpError::LengthMismatch { expected: grid.len(), got: values.len() });
    }
    if let Some(i) = values.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(FrlpError::NonFinite(i));
    }
    Ok(())
}

/// Angle `α ∉ πℤ` with its structural descriptors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracParam<T> {
    alpha: T,
    sin: T,
    cos: T,
    rho: Option<T>,
}

impl<T: Real> FracParam<T> {
    pub fn new(alpha: T) -> Result<Self> {
        let sin = alpha.sin();
        if !alpha.is_finite() || sin.abs() <= T::of(1e-12) {
            return Err(FrlpError::AngleSingular {
                alpha: alpha.to_f64(),
                sin_abs: sin.abs().to_f64(),
            });
        }
        let cos = alpha.cos();
        // within rounding of an odd multiple of π/2 the chirp must vanish exactly
        if cos.abs() <= T::of(4.0) * T::epsilon() {
            return Ok(Self { alpha, sin: sin.signum(), cos: T::zero(), rho: None });
        }
        Ok(Self { alpha, sin, cos, rho: None })
    }

    /// Build from the order `ρ`, with `α = πρ/2`.
    pub fn from_rho(rho: T) -> Result<Self> {
        let mut p = Self::new(T::PI() * rho / T::of(2.0))?;
        p.rho = Some(rho);
        Ok(p)
    }

    /// The classical Fourier angle `π/2`.
    pub fn classical() -> Self {
        Self { alpha: T::FRAC_PI_2(), sin: T::one(), cos: T::zero(), rho: Some(T::one()) }
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn rho(&self) -> Option<T> {
        self.rho
    }

    /// Signed `sin α`.
    pub fn sin(&self) -> T {
        self.sin
    }

    pub fn cos(&self) -> T {
        self.cos
    }

    /// Scale-dilation descriptor `s_α = |sin α|`.
    pub fn s(&self) -> T {
        self.sin.abs()
    }

    /// Chirp-slope descriptor `κ_α = cot α`.
    pub fn kappa(&self) -> T {
        self.cos / self.sin
    }

    /// Deviation index `D(α) = |1 - s_α| + |κ_α|`.
    pub fn deviation(&self) -> T {
        (T::one() - self.s()).abs() + self.kappa().abs()
    }

    pub fn sin_sign(&self) -> T {
        self.sin.signum()
    }
}

/// Convenience wrapper over [`FracParam::new`].
pub fn frac_param<T: Real>(alpha: T) -> Result<FracParam<T>> {
    FracParam::new(alpha)
}

/// Effective classical radius `R / s_α` of an FrFT-side selector at radius `R`.
pub fn effective_radius<T: Real>(p: &FracParam<T>, radius: T) -> Result<T> {
    if !(radius > T::zero()) {
        return Err(FrlpError::InvalidArgument("radius must be positive".into()));
    }
    Ok(radius / p.s())
}

/// Riemann-sum `L^p` norm, `p = ∞` gives the max modulus.
pub fn lp_norm<T: Real>(f: &Signal<T>, p: T) -> T {
    lp_norm_weighted(f.values(), f.grid().cell_volume(), p)
}

pub(crate) fn lp_norm_weighted<T: Real>(values: &[Complex<T>], weight: T, p: T) -> T {
    lp_norm_real(values.iter().map(|v| v.norm()), weight, p)
}

/// `L^p` quasi-norm of nonnegative samples with quadrature weight `weight`.
pub fn lp_norm_real<T: Real>(moduli: impl Iterator<Item = T>, weight: T, p: T) -> T {
    if p.is_infinite() {
        return moduli.fold(T::zero(), |m, v| m.max(v));
    }
    let two = T::of(2.0);
    let sum: T = if p == two {
        moduli.map(|v| v * v).sum()
    } else {
        moduli.map(|v| if v == T::zero() { v } else { v.powf(p) }).sum()
    };
    (sum * weight).powf(T::one() / p)
}

/// Weak `L^{p,∞}` quasi-norm `sup_λ λ |{|f| > λ}|^{1/p}`.
///
/// The distribution function of a sampled signal is a step function, so the
/// supremum is approached as `λ` rises to each sampled modulus `v`, where
/// the level set is `{|f| >= v}`.
pub fn weak_norm_estimate<T: Real>(f: &Signal<T>, p: T) -> Result<T> {
    if !(p >= T::one()) || p.is_infinite() {
        return Err(FrlpError::InvalidArgument("weak norm needs p in [1, inf)".into()));
    }
    let mut moduli = f.modulus();
    moduli.sort_by(|a, b| b.partial_cmp(a).expect("finite moduli"));
    let dv = f.grid().cell_volume();
    let mut best = T::zero();
    let mut i = 0;
    while i < moduli.len() {
        let v = moduli[i];
        let mut j = i;
        while j < moduli.len() && moduli[j] == v {
            j += 1;
        }
        let measure = T::count(j) * dv;
        best = best.max(v * measure.powf(T::one() / p));
        i = j;
    }
    Ok(best)
}
