//! Dyadic martingale operators on sample-aligned cells, classical and twisted
//! by the chirp: conditional expectations `E_k`, differences `D_k`, the Haar
//! system, the dyadic square function, and the mixed LP–dyadic probe.
//!
//! Level `k` partitions each axis into `2^k` cells of length `L 2^{-k}`;
//! level `0` is the whole domain.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{FrlpError, Result};
use crate::frft::{chirp_mul, Direction};
use crate::grid::{FracParam, GridSpec, Signal};
use crate::lp::{lp_block, DyadicBank};
use crate::opnorm::{power_iteration, seed_vector, NormEstimate, POWER_ITERATIONS};
use crate::scalar::{creal, czero, Complex, Real};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DyadicTree<T> {
    grid: GridSpec<T>,
    k_min: u32,
    k_max: u32,
}

impl<T: Real> DyadicTree<T> {
    /// Levels `k_min..=k_max`; every level-`k_max` cell must hold a whole number of samples.
    pub fn new(grid: &GridSpec<T>, k_min: u32, k_max: u32) -> Result<Self> {
        let n = grid.samples();
        if k_min > k_max || k_max >= usize::BITS || n % (1usize << k_max) != 0 {
            return Err(FrlpError::ScaleMisaligned { scale: k_max, samples: n });
        }
        Ok(Self { grid: *grid, k_min, k_max })
    }

    /// Levels `0..=log2 N`, so the finest expectation is the identity.
    pub fn full(grid: &GridSpec<T>) -> Result<Self> {
        let n = grid.samples();
        if !n.is_power_of_two() {
            return Err(FrlpError::ScaleMisaligned { scale: n.trailing_zeros() + 1, samples: n });
        }
        Self::new(grid, 0, n.trailing_zeros())
    }

    pub fn grid(&self) -> &GridSpec<T> {
        &self.grid
    }

    pub fn k_min(&self) -> u32 {
        self.k_min
    }

    pub fn k_max(&self) -> u32 {
        self.k_max
    }

    /// Whether the finest cells are single samples.
    pub fn covers_grid(&self) -> bool {
        1usize << self.k_max == self.grid.samples()
    }

    fn check(&self, k: u32) -> Result<()> {
        if k < self.k_min || k > self.k_max {
            return Err(FrlpError::ScaleMisaligned { scale: k, samples: self.grid.samples() });
        }
        Ok(())
    }

    /// Samples per cell edge at level `k`.
    pub fn cell_samples(&self, k: u32) -> usize {
        self.grid.samples() >> k
    }

    /// Physical cell length `L 2^{-k}`.
    pub fn cell_length(&self, k: u32) -> T {
        self.grid.extent() / T::of(2f64.powi(k as i32))
    }
}

fn to_classical<T: Real>(f: &Signal<T>, p: Option<&FracParam<T>>) -> Signal<T> {
    match p {
        Some(p) => chirp_mul(f, p, Direction::Forward),
        None => f.clone(),
    }
}

fn from_classical<T: Real>(g: Signal<T>, p: Option<&FracParam<T>>) -> Signal<T> {
    match p {
        Some(p) => chirp_mul(&g, p, Direction::Inverse),
        None => g,
    }
}

fn average_cells<T: Real>(g: &Signal<T>, m: usize) -> Signal<T> {
    let grid = *g.grid();
    let n = grid.samples();
    let v = g.values();
    let mut out = vec![czero(); v.len()];
    if grid.dim() == 1 {
        let w = T::one() / T::count(m);
        for start in (0..n).step_by(m) {
            let mean = v[start..start + m].iter().fold(czero(), |a, &b| a + b) * w;
            out[start..start + m].iter_mut().for_each(|o| *o = mean);
        }
    } else {
        let w = T::one() / T::count(m * m);
        for r0 in (0..n).step_by(m) {
            for c0 in (0..n).step_by(m) {
                let mut acc = czero();
                for r in r0..r0 + m {
                    for c in c0..c0 + m {
                        acc = acc + v[r * n + c];
                    }
                }
                let mean = acc * w;
                for r in r0..r0 + m {
                    for c in c0..c0 + m {
                        out[r * n + c] = mean;
                    }
                }
            }
        }
    }
    Signal::from_parts(grid, out)
}

/// `E_k f`, or `E_k^α f = M_α^{-1} E_k M_α f`.
pub fn expectation<T: Real>(f: &Signal<T>, tree: &DyadicTree<T>, k: u32, p: Option<&FracParam<T>>) -> Result<Signal<T>> {
    tree.check(k)?;
    if f.grid() != tree.grid() {
        return Err(FrlpError::GridMismatch);
    }
    let g = to_classical(f, p);
    Ok(from_classical(average_cells(&g, tree.cell_samples(k)), p))
}

/// `D_k f = E_k f - E_{k-1} f` (twisted when `p` is given), for `k_min < k ≤ k_max`.
pub fn difference<T: Real>(f: &Signal<T>, tree: &DyadicTree<T>, k: u32, p: Option<&FracParam<T>>) -> Result<Signal<T>> {
    if k == tree.k_min() {
        return Err(FrlpError::ScaleMisaligned { scale: k, samples: tree.grid().samples() });
    }
    tree.check(k)?;
    let g = to_classical(f, p);
    let fine = average_cells(&g, tree.cell_samples(k));
    let coarse = average_cells(&g, tree.cell_samples(k - 1));
    Ok(from_classical(fine.sub(&coarse), p))
}

/// `(Σ_k |D_k^α f|²)^{1/2}` over `k_min < k ≤ k_max`, as a real signal.
pub fn dyadic_square_function<T: Real>(f: &Signal<T>, tree: &DyadicTree<T>, p: Option<&FracParam<T>>) -> Result<Signal<T>> {
    let mut acc = vec![T::zero(); f.grid().len()];
    for k in tree.k_min() + 1..=tree.k_max() {
        let d = difference(f, tree, k, p)?;
        for (a, v) in acc.iter_mut().zip(d.values()) {
            *a = *a + v.norm_sqr();
        }
    }
    Ok(Signal::from_parts(*f.grid(), acc.into_iter().map(|a| creal(a.sqrt())).collect()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HaarCoefficient {
    /// Cell level of `I`; `-1` marks a coarsest scaling coefficient.
    pub scale: i32,
    pub offset: usize,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HaarCoefficients<T> {
    pub alpha: Option<T>,
    pub k_min: u32,
    pub k_max: u32,
    /// `⟨f, e_I^α⟩` for the level-`k_min` cells, `e_I = |I|^{-1/2} 1_I`.
    pub scaling: Vec<Complex<T>>,
    /// `⟨f, h_I^α⟩` per cell level `k_min..k_max`, cells in left-to-right order.
    pub details: Vec<Vec<Complex<T>>>,
}

impl<T: Real> HaarCoefficients<T> {
    pub fn energy(&self) -> T {
        self.scaling.iter().chain(self.details.iter().flatten()).map(|c| c.norm_sqr()).sum()
    }

    pub fn rows(&self) -> Vec<HaarCoefficient> {
        let mut out: Vec<HaarCoefficient> = self
            .scaling
            .iter()
            .enumerate()
            .map(|(i, c)| HaarCoefficient { scale: -1, offset: i, re: c.re.to_f64(), im: c.im.to_f64() })
            .collect();
        for (l, level) in self.details.iter().enumerate() {
            for (i, c) in level.iter().enumerate() {
                out.push(HaarCoefficient {
                    scale: (self.k_min as usize + l) as i32,
                    offset: i,
                    re: c.re.to_f64(),
                    im: c.im.to_f64(),
                });
            }
        }
        out
    }

    /// `scale,offset,re,im` rows.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("scale,offset,re,im\n");
        for r in self.rows() {
            writeln!(s, "{},{},{},{}", r.scale, r.offset, r.re, r.im).expect("string write");
        }
        s
    }
}

fn require_1d<T: Real>(grid: &GridSpec<T>) -> Result<()> {
    if grid.dim() != 1 {
        return Err(FrlpError::DimUnsupported(grid.dim()));
    }
    Ok(())
}

/// `h_I^α = e^{-iπx²κ_α} h_I` for cell `offset` at level `level`.
pub fn haar_function<T: Real>(tree: &DyadicTree<T>, level: u32, offset: usize, p: Option<&FracParam<T>>) -> Result<Signal<T>> {
    require_1d(tree.grid())?;
    if level < tree.k_min() || level >= tree.k_max() || offset >= 1 << level {
        return Err(FrlpError::ScaleMisaligned { scale: level, samples: tree.grid().samples() });
    }
    let m = tree.cell_samples(level);
    let amp = T::one() / tree.cell_length(level).sqrt();
    let start = offset * m;
    let values = (0..tree.grid().samples())
        .map(|i| {
            if i < start || i >= start + m {
                czero()
            } else if i < start + m / 2 {
                creal(amp)
            } else {
                creal(-amp)
            }
        })
        .collect();
    Ok(from_classical(Signal::from_parts(*tree.grid(), values), p))
}

/// Coefficients `⟨f, h_I^α⟩ = ⟨M_α f, h_I⟩` and the coarsest scaling coefficients.
pub fn haar_transform<T: Real>(f: &Signal<T>, tree: &DyadicTree<T>, p: Option<&FracParam<T>>) -> Result<HaarCoefficients<T>> {
    require_1d(f.grid())?;
    if f.grid() != tree.grid() {
        return Err(FrlpError::GridMismatch);
    }
    let g = to_classical(f, p);
    let dx = f.grid().spacing();
    let cell_sums = |m: usize| -> Vec<Complex<T>> {
        g.values().chunks_exact(m).map(|c| c.iter().fold(czero(), |a, &b| a + b) * dx).collect()
    };
    let k0 = tree.k_min();
    let scaling = cell_sums(tree.cell_samples(k0))
        .into_iter()
        .map(|s| s / tree.cell_length(k0).sqrt())
        .collect();
    let details = (k0..tree.k_max())
        .map(|l| {
            let halves = cell_sums(tree.cell_samples(l + 1));
            let amp = T::one() / tree.cell_length(l).sqrt();
            halves.chunks_exact(2).map(|h| (h[0] - h[1]) * amp).collect()
        })
        .collect();
    Ok(HaarCoefficients { alpha: p.map(|p| p.alpha()), k_min: k0, k_max: tree.k_max(), scaling, details })
}

/// `Σ ⟨f,e_I^α⟩ e_I^α + Σ ⟨f,h_I^α⟩ h_I^α`.
pub fn inverse_haar<T: Real>(c: &HaarCoefficients<T>, tree: &DyadicTree<T>) -> Result<Signal<T>> {
    require_1d(tree.grid())?;
    let n = tree.grid().samples();
    let mut v = vec![czero(); n];
    let m0 = tree.cell_samples(c.k_min);
    let a0 = T::one() / tree.cell_length(c.k_min).sqrt();
    for (i, s) in c.scaling.iter().enumerate() {
        v[i * m0..(i + 1) * m0].iter_mut().for_each(|x| *x = *x + *s * a0);
    }
    for (l, level) in c.details.iter().enumerate() {
        let k = c.k_min + l as u32;
        let m = tree.cell_samples(k);
        let amp = T::one() / tree.cell_length(k).sqrt();
        for (i, d) in level.iter().enumerate() {
            let start = i * m;
            v[start..start + m / 2].iter_mut().for_each(|x| *x = *x + *d * amp);
            v[start + m / 2..start + m].iter_mut().for_each(|x| *x = *x - *d * amp);
        }
    }
    let g = Signal::from_parts(*tree.grid(), v);
    let p = match c.alpha {
        Some(a) => Some(FracParam::new(a)?),
        None => None,
    };
    Ok(from_classical(g, p.as_ref()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeRow {
    pub j: i32,
    pub k: u32,
    pub twisted: f64,
    pub classical: f64,
    /// `|twisted - classical| / classical`
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixedProbeReport {
    pub alpha: f64,
    pub rows: Vec<ProbeRow>,
    /// Least-squares slope of `log2(norm)` against `|j - k|`.
    pub slope: f64,
    pub max_gap: f64,
}

fn probe_norm<T: Real>(
    tree: &DyadicTree<T>,
    bank: &DyadicBank<T>,
    j: i32,
    k: u32,
    p: Option<&FracParam<T>>,
) -> Result<NormEstimate> {
    // A = D_k Δ_j with both factors self-adjoint, so A*A = Δ_j D_k Δ_j
    let normal = |v: &Signal<T>| -> Result<Signal<T>> {
        let a = lp_block(v, bank, j, p)?;
        let b = difference(&a, tree, k, p)?;
        lp_block(&b, bank, j, p)
    };
    let seed = from_classical(seed_vector(tree.grid()), p);
    power_iteration(normal, seed, POWER_ITERATIONS)
}

/// Least-squares slope of `y` against `x`.
pub fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Power-iteration estimates of `‖D_k^α Δ_j^α‖_{2→2}` and `‖D_k Δ_j‖_{2→2}` per pair.
pub fn mixed_orthogonality_probe<T: Real>(
    tree: &DyadicTree<T>,
    bank: &DyadicBank<T>,
    pairs: &[(i32, u32)],
    p: &FracParam<T>,
) -> Result<MixedProbeReport> {
    let mut rows = Vec::with_capacity(pairs.len());
    for &(j, k) in pairs {
        let tw = probe_norm(tree, bank, j, k, Some(p))?.norm;
        let cl = probe_norm(tree, bank, j, k, None)?.norm;
        let gap = if cl == 0.0 { tw.abs() } else { (tw - cl).abs() / cl };
        rows.push(ProbeRow { j, k, twisted: tw, classical: cl, gap });
    }
    let x: Vec<f64> = rows.iter().map(|r| (r.j - r.k as i32).abs() as f64).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.twisted.max(1e-300).log2()).collect();
    let slope = fit_slope(&x, &y);
    let max_gap = rows.iter().map(|r| r.gap).fold(0.0, f64::max);
    Ok(MixedProbeReport { alpha: p.alpha().to_f64(), rows, slope, max_gap })
}
