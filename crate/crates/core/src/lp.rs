//! Dyadic partitions of unity, Littlewood–Paley blocks (classical and
//! chirp-conjugated), square functions, sharp blocks, reconstruction, and the
//! Besov / Triebel–Lizorkin / Lipschitz norms built on them.

use serde::Serialize;

use crate::error::{FrlpError, Result};
use crate::fft::{apply_real_mask, fourier, inverse_fourier};
use crate::frft::{chirp_mul, Direction};
use crate::grid::{lp_norm, lp_norm_real, FracParam, GridSpec, Signal};
use crate::scalar::{creal, Complex, Real};
use crate::symbol::transition;

/// Normalization of the dyadic blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    /// `χ + Σ φ_j = 1`
    #[default]
    Partition,
    /// `χ² + Σ φ_j² = 1`
    SquarePartition,
}

#[derive(Debug, Clone)]
pub struct DyadicBank<T> {
    grid: GridSpec<T>,
    j_min: i32,
    j_max: i32,
    profile: Profile,
    chi: Vec<T>,
    phis: Vec<Vec<T>>,
}

fn dyadic<T: Real>(j: i32) -> T {
    T::of(2f64.powi(j))
}

/// Bank of masks `χ = Θ(|ξ|)` and `φ_j = Θ(2^{-j}|ξ|) - Θ(2^{-j+1}|ξ|)`, `j_min ≤ j ≤ j_max`.
pub fn build_bank<T: Real>(grid: &GridSpec<T>, j_min: i32, j_max: i32, profile: Profile) -> Result<DyadicBank<T>> {
    if j_min > j_max {
        return Err(FrlpError::InvalidArgument(format!("empty level range {j_min}..{j_max}")));
    }
    let top = grid.max_frequency_norm();
    if dyadic::<T>(j_max - 1) >= top {
        return Err(FrlpError::RangeExceedsNyquist { j_min, j_max, nyquist: grid.nyquist().to_f64() });
    }
    let theta = |j: i32, i: usize| transition(grid.freq_norm(i) / dyadic::<T>(j));
    let len = grid.len();
    let (chi, phis) = match profile {
        Profile::Partition => {
            let chi = (0..len).map(|i| theta(0, i)).collect();
            let phis = (j_min..=j_max).map(|j| (0..len).map(|i| theta(j, i) - theta(j - 1, i)).collect()).collect();
            (chi, phis)
        }
        Profile::SquarePartition => {
            let chi = (0..len).map(|i| theta(0, i)).collect();
            let phis = (j_min..=j_max)
                .map(|j| {
                    (0..len)
                        .map(|i| {
                            let (a, b) = (theta(j, i), theta(j - 1, i));
                            (a * a - b * b).max(T::zero()).sqrt()
                        })
                        .collect()
                })
                .collect();
            (chi, phis)
        }
    };
    Ok(DyadicBank { grid: *grid, j_min, j_max, profile, chi, phis })
}

impl<T: Real> DyadicBank<T> {
    pub fn grid(&self) -> &GridSpec<T> {
        &self.grid
    }

    pub fn j_min(&self) -> i32 {
        self.j_min
    }

    pub fn j_max(&self) -> i32 {
        self.j_max
    }

    pub fn profile(&self) -> Profile {
        self.profile
    }

    pub fn levels(&self) -> std::ops::RangeInclusive<i32> {
        self.j_min..=self.j_max
    }

    pub fn chi(&self) -> &[T] {
        &self.chi
    }

    pub fn mask(&self, j: i32) -> Result<&[T]> {
        if j < self.j_min || j > self.j_max {
            return Err(FrlpError::LevelOutOfRange(j));
        }
        Ok(&self.phis[(j - self.j_min) as usize])
    }

    /// `Σ_j φ_j` over the bank.
    pub fn partition_sum(&self) -> Vec<T> {
        let mut acc = vec![T::zero(); self.grid.len()];
        for m in &self.phis {
            for (a, v) in acc.iter_mut().zip(m) {
                *a = *a + *v;
            }
        }
        acc
    }

    /// `Σ_j φ_j²` over the bank.
    pub fn energy_sum(&self) -> Vec<T> {
        let mut acc = vec![T::zero(); self.grid.len()];
        for m in &self.phis {
            for (a, v) in acc.iter_mut().zip(m) {
                *a = *a + *v * *v;
            }
        }
        acc
    }

    /// Grid indices in the covered band where the homogeneous partition sums to one:
    /// `2^{j_min} ≤ |ξ| ≤ 2^{j_max}`.
    pub fn covered(&self, i: usize) -> bool {
        let r = self.grid.freq_norm(i);
        r >= dyadic(self.j_min) && r <= dyadic(self.j_max)
    }

    /// `(min, max)` of `(Σ φ_j²)^{1/2}` over the covered band.
    pub fn frame_bounds(&self) -> (T, T) {
        let e = self.energy_sum();
        let mut lo = T::infinity();
        let mut hi = T::zero();
        for (i, v) in e.iter().enumerate() {
            if self.covered(i) {
                lo = lo.min(*v);
                hi = hi.max(*v);
            }
        }
        (lo.sqrt(), hi.sqrt())
    }
}

/// `M_α f`, or `f` for the classical frame.
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

fn masked<T: Real>(grid: &GridSpec<T>, spec: &[Complex<T>], mask: &[T]) -> Signal<T> {
    let v: Vec<_> = spec.iter().zip(mask).map(|(&s, &m)| s * m).collect();
    inverse_fourier(grid, &v)
}

/// `Δ_j f`, or `Δ_{j,α} f = M_α^{-1} Δ_j M_α f`.
pub fn lp_block<T: Real>(f: &Signal<T>, bank: &DyadicBank<T>, j: i32, p: Option<&FracParam<T>>) -> Result<Signal<T>> {
    if f.grid() != bank.grid() {
        return Err(FrlpError::GridMismatch);
    }
    let mask = bank.mask(j)?;
    let g = to_classical(f, p);
    Ok(from_classical(apply_real_mask(&g, mask), p))
}

/// `S_0 f` or `S_{0,α} f`.
pub fn low_pass<T: Real>(f: &Signal<T>, bank: &DyadicBank<T>, p: Option<&FracParam<T>>) -> Result<Signal<T>> {
    if f.grid() != bank.grid() {
        return Err(FrlpError::GridMismatch);
    }
    let g = to_classical(f, p);
    Ok(from_classical(apply_real_mask(&g, bank.chi()), p))
}

/// All blocks for `j` in `levels`, sharing one forward transform.
pub fn blocks<T: Real>(
    f: &Signal<T>,
    bank: &DyadicBank<T>,
    levels: impl IntoIterator<Item = i32>,
    p: Option<&FracParam<T>>,
) -> Result<Vec<(i32, Signal<T>)>> {
    if f.grid() != bank.grid() {
        return Err(FrlpError::GridMismatch);
    }
    let spec = fourier(&to_classical(f, p)).into_values();
    levels
        .into_iter()
        .map(|j| Ok((j, from_classical(masked(bank.grid(), &spec, bank.mask(j)?), p))))
        .collect()
}

fn pointwise_l2<T: Real>(grid: &GridSpec<T>, parts: &[(i32, Signal<T>)]) -> Signal<T> {
    let mut acc = vec![T::zero(); grid.len()];
    for (_, b) in parts {
        for (a, v) in acc.iter_mut().zip(b.values()) {
            *a = *a + v.norm_sqr();
        }
    }
    Signal::from_parts(*grid, acc.into_iter().map(|a| creal(a.sqrt())).collect())
}

/// `S_α f = (Σ_j |Δ_{j,α} f|²)^{1/2}` over every bank level, as a real signal.
pub fn square_function<T: Real>(f: &Signal<T>, bank: &DyadicBank<T>, p: Option<&FracParam<T>>) -> Result<Signal<T>> {
    let parts = blocks(f, bank, bank.levels(), p)?;
    Ok(pointwise_l2(f.grid(), &parts))
}

/// Sharp block with the indicator of `2^j ≤ |ξ| < 2^{j+1}` (one dimension).
pub fn sharp_block<T: Real>(f: &Signal<T>, j: i32, p: Option<&FracParam<T>>) -> Result<Signal<T>> {
    let grid = f.grid();
    if grid.dim() != 1 {
        return Err(FrlpError::DimUnsupported(grid.dim()));
    }
    let (lo, hi) = (dyadic::<T>(j), dyadic::<T>(j + 1));
    let mask: Vec<T> = (0..grid.len())
        .map(|i| {
            let r = grid.freq_norm(i);
            if r >= lo && r < hi {
                T::one()
            } else {
                T::zero()
            }
        })
        .collect();
    let g = to_classical(f, p);
    Ok(from_classical(apply_real_mask(&g, &mask), p))
}

/// Levels `j` whose sharp annuli meet the nonzero grid frequencies.
pub fn sharp_levels<T: Real>(grid: &GridSpec<T>) -> std::ops::RangeInclusive<i32> {
    let lo = grid.freq_spacing().to_f64().log2().floor() as i32;
    let hi = grid.max_frequency_norm().to_f64().log2().floor() as i32;
    lo..=hi
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Homogeneous,
    Inhomogeneous,
}

#[derive(Debug, Clone)]
pub struct Decomposition<T> {
    grid: GridSpec<T>,
    input: Option<Signal<T>>,
    alpha: Option<T>,
    pub low: Option<Signal<T>>,
    pub blocks: Vec<(i32, Signal<T>)>,
}

impl<T: Real> Decomposition<T> {
    pub fn empty(grid: GridSpec<T>) -> Self {
        Self { grid, input: None, alpha: None, low: None, blocks: Vec::new() }
    }

    pub fn alpha(&self) -> Option<T> {
        self.alpha
    }

    pub fn input(&self) -> Option<&Signal<T>> {
        self.input.as_ref()
    }
}

/// Inhomogeneous: `S_0 f` and `Δ_j f` for `1 ≤ j ≤ j_max`. Homogeneous: every bank level.
pub fn decompose<T: Real>(
    f: &Signal<T>,
    bank: &DyadicBank<T>,
    p: Option<&FracParam<T>>,
    variant: Variant,
) -> Result<Decomposition<T>> {
    let (low, levels) = match variant {
        Variant::Inhomogeneous => {
            if bank.j_min() > 1 {
                return Err(FrlpError::LevelOutOfRange(1));
            }
            (Some(low_pass(f, bank, p)?), 1..=bank.j_max())
        }
        Variant::Homogeneous => (None, bank.levels()),
    };
    Ok(Decomposition {
        grid: *f.grid(),
        input: Some(f.clone()),
        alpha: p.map(|p| p.alpha()),
        low,
        blocks: blocks(f, bank, levels, p)?,
    })
}

#[derive(Debug, Clone)]
pub struct Reconstruction<T> {
    pub signal: Signal<T>,
    /// `‖f - Σ pieces‖₂ / ‖f‖₂` when the input is known.
    pub residual: Option<T>,
}

/// Sum of the low-pass piece and every block.
pub fn reconstruct<T: Real>(dec: &Decomposition<T>) -> Reconstruction<T> {
    let mut sum = dec.low.clone().unwrap_or_else(|| Signal::zeros(dec.grid));
    for (_, b) in &dec.blocks {
        sum = sum.add(b);
    }
    let residual = dec.input.as_ref().map(|f| {
        let n = f.l2_norm();
        let r = sum.sub(f).l2_norm();
        if n == T::zero() {
            r
        } else {
            r / n
        }
    });
    Reconstruction { signal: sum, residual }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelEntry {
    pub level: i32,
    /// `‖Δ_j f‖_p`
    pub norm: f64,
    /// `2^{js}‖Δ_j f‖_p`
    pub weighted: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormReport {
    pub kind: String,
    pub s: f64,
    pub p: f64,
    pub q: f64,
    pub alpha: Option<f64>,
    pub value: f64,
    pub low: Option<f64>,
    pub levels: Vec<LevelEntry>,
}

impl NormReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn ell_q<T: Real>(values: impl Iterator<Item = T>, q: T) -> T {
    lp_norm_real(values, T::one(), q)
}

fn check_exponents<T: Real>(p: T, q: T) -> Result<()> {
    if !(p > T::zero()) || !(q > T::zero()) {
        return Err(FrlpError::InvalidArgument("exponents must be positive".into()));
    }
    Ok(())
}

/// `‖S_{0,α}u‖_p + (Σ_{j≥1} (2^{js}‖Δ_{j,α}u‖_p)^q)^{1/q}`, with `q = ∞` taken as a sup.
pub fn besov_norm<T: Real>(
    f: &Signal<T>,
    bank: &DyadicBank<T>,
    s: T,
    p: T,
    q: T,
    frac: Option<&FracParam<T>>,
) -> Result<NormReport> {
    check_exponents(p, q)?;
    let dec = decompose(f, bank, frac, Variant::Inhomogeneous)?;
    let low = lp_norm(dec.low.as_ref().expect("inhomogeneous"), p);
    let levels: Vec<LevelEntry> = dec
        .blocks
        .iter()
        .map(|(j, b)| {
            let n = lp_norm(b, p);
            LevelEntry { level: *j, norm: n.to_f64(), weighted: (dyadic::<T>(*j).powf(s) * n).to_f64() }
        })
        .collect();
    let tail = ell_q(levels.iter().map(|e| T::of(e.weighted)), q);
    Ok(NormReport {
        kind: "besov".into(),
        s: s.to_f64(),
        p: p.to_f64(),
        q: q.to_f64(),
        alpha: frac.map(|a| a.alpha().to_f64()),
        value: (low + tail).to_f64(),
        low: Some(low.to_f64()),
        levels,
    })
}

/// `‖S_{0,α}u‖_p + ‖(Σ_{j≥1} (2^{js}|Δ_{j,α}u|)^q)^{1/q}‖_p`.
pub fn triebel_norm<T: Real>(
    f: &Signal<T>,
    bank: &DyadicBank<T>,
    s: T,
    p: T,
    q: T,
    frac: Option<&FracParam<T>>,
) -> Result<NormReport> {
    check_exponents(p, q)?;
    let dec = decompose(f, bank, frac, Variant::Inhomogeneous)?;
    let low = lp_norm(dec.low.as_ref().expect("inhomogeneous"), p);
    let n = f.grid().len();
    let inner: Vec<T> = (0..n)
        .map(|i| ell_q(dec.blocks.iter().map(|(j, b)| dyadic::<T>(*j).powf(s) * b.values()[i].norm()), q))
        .collect();
    let outer = lp_norm_real(inner.into_iter(), f.grid().cell_volume(), p);
    let levels = dec
        .blocks
        .iter()
        .map(|(j, b)| {
            let n = lp_norm(b, p);
            LevelEntry { level: *j, norm: n.to_f64(), weighted: (dyadic::<T>(*j).powf(s) * n).to_f64() }
        })
        .collect();
    Ok(NormReport {
        kind: "triebel".into(),
        s: s.to_f64(),
        p: p.to_f64(),
        q: q.to_f64(),
        alpha: frac.map(|a| a.alpha().to_f64()),
        value: (low + outer).to_f64(),
        low: Some(low.to_f64()),
        levels,
    })
}

/// `H^{s,p}_α = F^s_{p,2,α}`.
pub fn sobolev_norm<T: Real>(
    f: &Signal<T>,
    bank: &DyadicBank<T>,
    s: T,
    p: T,
    frac: Option<&FracParam<T>>,
) -> Result<NormReport> {
    let mut r = triebel_norm(f, bank, s, p, T::of(2.0), frac)?;
    r.kind = "sobolev".into();
    Ok(r)
}

/// Spectral Sobolev norm `(∫ (1+|ξ|²)^s |f̂|²)^{1/2}`.
pub fn spectral_sobolev_norm<T: Real>(f: &Signal<T>, s: T) -> T {
    let spec = fourier(f);
    let g = f.grid();
    let sum: T = spec
        .values()
        .iter()
        .enumerate()
        .map(|(i, v)| (T::one() + g.freq_norm(i).powi(2)).powf(s) * v.norm_sqr())
        .sum();
    (sum * g.freq_cell_volume()).sqrt()
}

/// Homogeneous: `sup_j 2^{jγ}‖Δ_j f‖_∞` over every bank level.
/// Inhomogeneous: `‖S_0 f‖_∞ + sup_{j≥1} 2^{jγ}‖Δ_j f‖_∞`.
pub fn lipschitz_norm<T: Real>(
    f: &Signal<T>,
    bank: &DyadicBank<T>,
    gamma: T,
    variant: Variant,
    frac: Option<&FracParam<T>>,
) -> Result<NormReport> {
    if !(gamma > T::zero()) {
        return Err(FrlpError::InvalidArgument("Lipschitz order must be positive".into()));
    }
    let dec = decompose(f, bank, frac, variant)?;
    let inf = T::infinity();
    let low = dec.low.as_ref().map(|l| lp_norm(l, inf));
    let levels: Vec<LevelEntry> = dec
        .blocks
        .iter()
        .map(|(j, b)| {
            let n = lp_norm(b, inf);
            LevelEntry { level: *j, norm: n.to_f64(), weighted: (dyadic::<T>(*j).powf(gamma) * n).to_f64() }
        })
        .collect();
    let sup = levels.iter().map(|e| e.weighted).fold(0.0, f64::max);
    Ok(NormReport {
        kind: match variant {
            Variant::Homogeneous => "lipschitz_homogeneous".into(),
            Variant::Inhomogeneous => "lipschitz".into(),
        },
        s: gamma.to_f64(),
        p: f64::INFINITY,
        q: f64::INFINITY,
        alpha: frac.map(|a| a.alpha().to_f64()),
        value: sup + low.map_or(0.0, |l| l.to_f64()),
        low: low.map(|l| l.to_f64()),
        levels,
    })
}

/// `|D|^σ` (homogeneous) or `⟨D⟩^σ` (inhomogeneous), conjugated by `M_α` when given.
pub fn derivative<T: Real>(f: &Signal<T>, sigma: T, variant: Variant, frac: Option<&FracParam<T>>) -> Signal<T> {
    let g = f.grid();
    let mask: Vec<T> = (0..g.len())
        .map(|i| {
            let r = g.freq_norm(i);
            match variant {
                Variant::Homogeneous => {
                    if r == T::zero() {
                        T::zero()
                    } else {
                        r.powf(sigma)
                    }
                }
                Variant::Inhomogeneous => (T::one() + r * r).powf(sigma / T::of(2.0)),
            }
        })
        .collect();
    from_classical(apply_real_mask(&to_classical(f, frac), &mask), frac)
}

/// `‖f‖_{Λ^γ} / ‖D^σ f‖_{Λ^{γ-σ}}` for `0 < σ < γ`.
pub fn order_shift_ratio<T: Real>(
    f: &Signal<T>,
    bank: &DyadicBank<T>,
    gamma: T,
    sigma: T,
    variant: Variant,
    frac: Option<&FracParam<T>>,
) -> Result<T> {
    if !(sigma > T::zero() && sigma < gamma) {
        return Err(FrlpError::InvalidArgument("order shift needs 0 < sigma < gamma".into()));
    }
    let a = lipschitz_norm(f, bank, gamma, variant, frac)?.value;
    let d = derivative(f, sigma, variant, frac);
    let b = lipschitz_norm(&d, bank, gamma - sigma, variant, frac)?.value;
    Ok(T::of(a / b))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionReport {
    pub alpha: Option<f64>,
    pub p: f64,
    pub low: Option<f64>,
    pub levels: Vec<(i32, f64)>,
    pub residual: Option<f64>,
}

/// Per-level `L^p` norms and the reconstruction residual.
pub fn decomposition_report<T: Real>(dec: &Decomposition<T>, p: T) -> DecompositionReport {
    DecompositionReport {
        alpha: dec.alpha.map(|a| a.to_f64()),
        p: p.to_f64(),
        low: dec.low.as_ref().map(|l| lp_norm(l, p).to_f64()),
        levels: dec.blocks.iter().map(|(j, b)| (*j, lp_norm(b, p).to_f64())).collect(),
        residual: reconstruct(dec).residual.map(|r| r.to_f64()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fft::apply_real_mask;
    use crate::grid::make_grid;
    use crate::signals::{random_bandlimited, random_signal};
    use std::f64::consts::PI;

    fn grid() -> GridSpec<f64> {
        make_grid(1, 8.0f64, 512).unwrap()
    }

    fn dc_free(f: &Signal<f64>) -> Signal<f64> {
        let g = f.grid();
        let m: Vec<f64> = (0..g.len()).map(|i| if g.freq_norm(i) == 0.0 { 0.0 } else { 1.0 }).collect();
        apply_real_mask(f, &m)
    }

    #[test]
    fn telescoping_partition() {
        let g = grid();
        let bank = build_bank(&g, 1, 4, Profile::Partition).unwrap();
        let sum = bank.partition_sum();
        for i in 0..g.len() {
            let r = g.freq_norm(i);
            let total = bank.chi()[i] + sum[i];
            assert!((total - transition(r / 16.0)).abs() < 1e-14);
            if r <= 16.0 {
                assert!((total - 1.0).abs() < 1e-14);
            }
        }
        let hom = build_bank(&g, -2, 4, Profile::Partition).unwrap();
        let s = hom.partition_sum();
        for i in 0..g.len() {
            let r = g.freq_norm(i);
            assert!((s[i] - (transition(r / 16.0) - transition(r * 8.0))).abs() < 1e-14);
            if hom.covered(i) {
                assert!((s[i] - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn block_supports() {
        let g = grid();
        let bank = build_bank(&g, -3, 5, Profile::Partition).unwrap();
        for j in bank.levels() {
            let m = bank.mask(j).unwrap();
            for i in 0..g.len() {
                let r = g.freq_norm(i);
                if r < 2f64.powi(j - 1) || r > 2f64.powi(j + 1) {
                    assert!(m[i].abs() < 1e-14);
                }
            }
        }
        assert!(matches!(bank.mask(6), Err(FrlpError::LevelOutOfRange(6))));
    }

    #[test]
    fn range_guard() {
        // max |ξ| on this grid is 32
        let g = grid();
        assert!(build_bank(&g, 1, 5, Profile::Partition).is_ok());
        assert!(matches!(build_bank(&g, 1, 6, Profile::Partition), Err(FrlpError::RangeExceedsNyquist { .. })));
        assert!(build_bank(&g, 3, 2, Profile::Partition).is_err());
    }

    #[test]
    fn square_partition_profile() {
        let g = grid();
        let bank = build_bank(&g, 1, 4, Profile::SquarePartition).unwrap();
        let e = bank.energy_sum();
        for i in 0..g.len() {
            if g.freq_norm(i) <= 16.0 {
                assert!((bank.chi()[i].powi(2) + e[i] - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn block_identity_inside_annulus() {
        let g = grid();
        let bank = build_bank(&g, 0, 5, Profile::Partition).unwrap();
        // φ_3 ≡ 1 exactly where Θ(|ξ|/8) = 1 and Θ(|ξ|/4) = 0, i.e. |ξ| = 8
        let f = Signal::from_fn(g, |x| Complex::from_polar(1.0, 2.0 * PI * 8.0 * x[0]));
        let b = lp_block(&f, &bank, 3, None).unwrap();
        assert!(b.sub(&f).l2_norm() < 1e-12);
    }

    #[test]
    fn conjugated_block_modulus() {
        let g = grid();
        let bank = build_bank(&g, -2, 5, Profile::Partition).unwrap();
        let f = random_signal(&g, 3);
        for a in [0.4, 1.3, 2.7] {
            let p = FracParam::new(a).unwrap();
            let mf = chirp_mul(&f, &p, Direction::Forward);
            for j in bank.levels() {
                let tw = lp_block(&f, &bank, j, Some(&p)).unwrap();
                let cl = lp_block(&mf, &bank, j, None).unwrap();
                for (x, y) in tw.values().iter().zip(cl.values()) {
                    assert!((x.norm() - y.norm()).abs() < 1e-14);
                }
                for q in [1.0, 2.0, 3.0, f64::INFINITY] {
                    let (u, v) = (lp_norm(&tw, q), lp_norm(&cl, q));
                    assert!((u - v).abs() <= 1e-14 * v.max(1e-300));
                }
            }
        }
    }

    #[test]
    fn square_function_transfer_and_frame() {
        let g = grid();
        let bank = build_bank(&g, -3, 5, Profile::Partition).unwrap();
        let (c, cc) = bank.frame_bounds();
        assert!(c > 0.6 && cc <= 1.0 + 1e-15);
        let p = FracParam::new(1.0).unwrap();
        for seed in 0..10 {
            // spectrum of M_α f inside the covered band 1/8 ≤ |ξ| ≤ 32
            let g0 = random_bandlimited(&g, 20.0, seed);
            let hp: Vec<f64> = (0..g.len()).map(|i| if g.freq_norm(i) >= 0.125 { 1.0 } else { 0.0 }).collect();
            let g0 = apply_real_mask(&g0, &hp);
            let f = chirp_mul(&g0, &p, Direction::Inverse);
            let s = square_function(&f, &bank, Some(&p)).unwrap();
            let sc = square_function(&g0, &bank, None).unwrap();
            assert!(s.sub(&sc).values().iter().all(|v| v.norm() < 1e-14));
            let ratio = s.l2_norm() / f.l2_norm();
            assert!(ratio >= c - 1e-12 && ratio <= cc + 1e-12);
        }
    }

    #[test]
    fn sharp_blocks_partition() {
        let g = grid();
        let f = dc_free(&random_signal(&g, 4));
        let p = FracParam::new(2.2).unwrap();
        let mut sum = Signal::zeros(g);
        let mut sq = vec![0.0; g.len()];
        for j in sharp_levels(&g) {
            let b = sharp_block(&f, j, Some(&p)).unwrap();
            for (a, v) in sq.iter_mut().zip(b.values()) {
                *a += v.norm_sqr();
            }
            sum = sum.add(&b);
        }
        // f has no DC bin only on the classical side; the conjugated sum recovers the chirped DC-free part
        let dc_free_classical = chirp_mul(&dc_free(&chirp_mul(&f, &p, Direction::Forward)), &p, Direction::Inverse);
        assert!(sum.sub(&dc_free_classical).l2_norm() < 1e-10);
        let g2 = make_grid(2, 4.0f64, 16).unwrap();
        assert!(matches!(sharp_block(&random_signal(&g2, 1), 0, None), Err(FrlpError::DimUnsupported(2))));
    }

    #[test]
    fn sharp_block_fixes_supported_signal() {
        let g = grid();
        let f = Signal::from_fn(g, |x| Complex::from_polar(1.0, 2.0 * PI * 5.0 * x[0]));
        assert!(sharp_block(&f, 2, None).unwrap().sub(&f).l2_norm() < 1e-12);
    }

    #[test]
    fn reconstruction() {
        let g = grid();
        let bank = build_bank(&g, -3, 5, Profile::Partition).unwrap();
        let p = FracParam::new(0.8).unwrap();
        let g0 = random_bandlimited(&g, 30.0, 9);
        let f = chirp_mul(&g0, &p, Direction::Inverse);
        let dec = decompose(&f, &bank, Some(&p), Variant::Inhomogeneous).unwrap();
        assert!(reconstruct(&dec).residual.unwrap() < 1e-10);
        let dc = dc_free(&random_bandlimited(&g, 30.0, 10));
        let hp: Vec<f64> = (0..g.len()).map(|i| if g.freq_norm(i) >= 0.125 { 1.0 } else { 0.0 }).collect();
        let dc = apply_real_mask(&dc, &hp);
        let f = chirp_mul(&dc, &p, Direction::Inverse);
        let dec = decompose(&f, &bank, Some(&p), Variant::Homogeneous).unwrap();
        assert!(reconstruct(&dec).residual.unwrap() < 1e-10);
        let empty = reconstruct(&Decomposition::empty(g));
        assert_eq!(empty.signal, Signal::zeros(g));
        assert!(empty.residual.is_none());
    }

    #[test]
    fn besov_triebel_transfer() {
        let g = grid();
        let bank = build_bank(&g, 1, 5, Profile::Partition).unwrap();
        let f = random_signal(&g, 11);
        let p = FracParam::new(1.7).unwrap();
        let mf = chirp_mul(&f, &p, Direction::Forward);
        for (s, pp, q) in [(0.5, 2.0, 2.0), (1.0, 1.0, f64::INFINITY), (-0.3, 4.0, 1.0)] {
            let a = besov_norm(&f, &bank, s, pp, q, Some(&p)).unwrap().value;
            let b = besov_norm(&mf, &bank, s, pp, q, None).unwrap().value;
            assert!((a - b).abs() <= 1e-14 * b);
            let a = triebel_norm(&f, &bank, s, pp, q, Some(&p)).unwrap().value;
            let b = triebel_norm(&mf, &bank, s, pp, q, None).unwrap().value;
            assert!((a - b).abs() <= 1e-14 * b);
        }
    }

    #[test]
    fn besov_single_block_and_monotone() {
        let g = grid();
        let bank = build_bank(&g, 1, 5, Profile::Partition).unwrap();
        // pure mode at |ξ| = 8 lives only in φ_3
        let f = Signal::from_fn(g, |x| Complex::from_polar(1.0, 2.0 * PI * 8.0 * x[0]));
        let r = besov_norm(&f, &bank, 0.5, 2.0, 2.0, None).unwrap();
        let want = lp_norm(&low_pass(&f, &bank, None).unwrap(), 2.0) + 8f64.sqrt() * lp_norm(&f, 2.0);
        assert!((r.value - want).abs() < 1e-10);
        let h = random_signal(&g, 2);
        let mut prev = 0.0;
        for s in [-1.0, 0.0, 0.5, 1.0, 2.0] {
            let v = besov_norm(&h, &bank, s, 2.0, 2.0, None).unwrap().value;
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn triebel_q2_s0_is_square_function() {
        let g = grid();
        let bank = build_bank(&g, 1, 5, Profile::Partition).unwrap();
        let f = random_signal(&g, 13);
        let r = triebel_norm(&f, &bank, 0.0, 3.0, 2.0, None).unwrap();
        let sq = square_function(&f, &build_bank(&g, 1, 5, Profile::Partition).unwrap(), None).unwrap();
        let want = lp_norm(&low_pass(&f, &bank, None).unwrap(), 3.0) + lp_norm(&sq, 3.0);
        assert!((r.value - want).abs() < 1e-12 * want);
    }

    #[test]
    fn sobolev_against_spectral_norm() {
        let g = grid();
        let bank = build_bank(&g, 1, 5, Profile::Partition).unwrap();
        let f = random_bandlimited(&g, 30.0, 5);
        for s in [0.0, 0.5, 1.0] {
            let dyadic_norm = sobolev_norm(&f, &bank, s, 2.0, None).unwrap().value;
            let spectral = spectral_sobolev_norm(&f, s);
            assert!(dyadic_norm > 0.2 * spectral && dyadic_norm < 5.0 * spectral);
        }
    }

    #[test]
    fn lipschitz_single_level() {
        let g = grid();
        let bank = build_bank(&g, -2, 5, Profile::Partition).unwrap();
        let f = Signal::from_fn(g, |x| Complex::from_polar(1.0, 2.0 * PI * 8.0 * x[0]));
        let r = lipschitz_norm(&f, &bank, 0.7, Variant::Homogeneous, None).unwrap();
        assert!((r.value - 8f64.powf(0.7)).abs() < 1e-10);
        assert!(lipschitz_norm(&f, &bank, 0.0, Variant::Homogeneous, None).is_err());
    }

    #[test]
    fn order_shift_pure_mode() {
        let g = grid();
        let bank = build_bank(&g, -2, 5, Profile::Partition).unwrap();
        for r in [0.375, 1.0, 3.0, 5.5, 12.0] {
            let f = Signal::from_fn(g, |x| Complex::new((2.0 * PI * r * x[0]).cos(), 0.0));
            let sigma = 0.6;
            let ratio = order_shift_ratio(&f, &bank, 1.5, sigma, Variant::Homogeneous, None).unwrap();
            assert!(ratio >= 2f64.powf(-sigma) - 1e-12 && ratio <= 2f64.powf(sigma) + 1e-12, "{r}: {ratio}");
        }
    }

    #[test]
    fn report_json() {
        let g = grid();
        let bank = build_bank(&g, 1, 4, Profile::Partition).unwrap();
        let r = besov_norm(&random_signal(&g, 1), &bank, 1.0, 2.0, 2.0, None).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["kind"], "besov");
        assert_eq!(v["levels"].as_array().unwrap().len(), 4);
        let dec = decompose(&random_signal(&g, 1), &bank, None, Variant::Inhomogeneous).unwrap();
        let rep = decomposition_report(&dec, 2.0);
        assert_eq!(rep.levels.len(), 4);
        assert!(serde_json::to_string(&rep).is_ok());
    }
}
