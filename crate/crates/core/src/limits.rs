//! Regimes of the fractional parameter: descriptors, the classical limit
//! `α → π/2`, the singular boundary `α → 0`, and the three-way classifier.

use serde::Serialize;

use crate::dyadic::fit_slope;
use crate::error::{FrlpError, Result};
use crate::frft::validate_sampling;
use crate::grid::{FracParam, GridSpec, Signal};
use crate::lp::{blocks, square_function, DyadicBank};
use crate::multiplier::{apply_frft_multiplier, apply_multiplier, band_selector, conjugated_multiplier, Route};
use crate::report::rel_l2;
use crate::scalar::Real;
use crate::symbol::{rescale_symbol, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Descriptors {
    pub alpha: f64,
    pub s: f64,
    pub kappa: f64,
    pub deviation: f64,
}

impl Descriptors {
    pub fn of<T: Real>(p: &FracParam<T>) -> Self {
        Self {
            alpha: p.alpha().to_f64(),
            s: p.s().to_f64(),
            kappa: p.kappa().to_f64(),
            deviation: p.deviation().to_f64(),
        }
    }
}

/// Descriptors along a list of angles; singular angles are skipped.
pub fn descriptor_curve(alphas: &[f64]) -> Vec<Descriptors> {
    alphas.iter().filter_map(|&a| FracParam::new(a).ok()).map(|p| Descriptors::of(&p)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeConfig {
    pub delta1: f64,
    pub delta2: f64,
    pub s_min: f64,
}

impl Default for RegimeConfig {
    fn default() -> Self {
        Self { delta1: 0.1, delta2: 3.0, s_min: 0.1 }
    }
}

impl RegimeConfig {
    pub fn new(delta1: f64, delta2: f64, s_min: f64) -> Result<Self> {
        if !(delta1 > 0.0 && delta1 < delta2 && delta2.is_finite()) {
            return Err(FrlpError::InvalidArgument(format!("need 0 < delta1 < delta2, got {delta1}, {delta2}")));
        }
        if !(s_min > 0.0 && s_min < 1.0) {
            return Err(FrlpError::InvalidArgument(format!("s_min = {s_min} must lie in (0, 1)")));
        }
        Ok(Self { delta1, delta2, s_min })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Classical,
    EffectiveFractional,
    Warning,
}

/// `D ≤ δ₁` is classical; otherwise `D ≥ δ₂` or `s_α < s_min` warns.
pub fn classify_regime<T: Real>(p: &FracParam<T>, cfg: &RegimeConfig) -> Regime {
    let d = Descriptors::of(p);
    if d.deviation <= cfg.delta1 {
        Regime::Classical
    } else if d.deviation >= cfg.delta2 || d.s < cfg.s_min {
        Regime::Warning
    } else {
        Regime::EffectiveFractional
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileEntry {
    pub ell: u32,
    pub alpha: f64,
    pub s: f64,
    pub kappa: f64,
    pub deviation: f64,
    pub sampling_ok: bool,
    pub metrics: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceProfile {
    pub law: String,
    pub metric_names: Vec<String>,
    pub entries: Vec<ProfileEntry>,
    /// Per metric, the log₂-slope of the error against `|α_ℓ - α_∞|`.
    pub slopes: Vec<f64>,
    pub pass: bool,
}

impl ConvergenceProfile {
    pub fn metric(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.metric_names.iter().position(|n| n == name)?;
        Some(self.entries.iter().map(|e| e.metrics[k]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("ell,alpha,s,kappa,D,sampling_ok");
        for n in &self.metric_names {
            out.push(',');
            out.push_str(n);
        }
        out.push('\n');
        for e in &self.entries {
            out.push_str(&format!("{},{:e},{:e},{:e},{:e},{}", e.ell, e.alpha, e.s, e.kappa, e.deviation, e.sampling_ok));
            for m in &e.metrics {
                out.push_str(&format!(",{m:e}"));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("profile serializes")
    }
}

pub const LIMIT_TOLERANCE: f64 = 1e-6;

/// Nonincreasing after at most two leading entries, up to rounding.
pub fn settles(errors: &[f64]) -> bool {
    errors.iter().skip(2).collect::<Vec<_>>().windows(2).all(|w| *w[1] <= *w[0] * (1.0 + 1e-9) + 1e-14)
}

/// `α_ℓ = π/2 + 2^{-ℓ}`.
pub fn classical_sequence(ell_max: u32) -> Vec<f64> {
    (1..=ell_max).map(|l| std::f64::consts::FRAC_PI_2 + 2f64.powi(-(l as i32))).collect()
}

/// `α_ℓ = 2^{-ℓ}`.
pub fn singular_sequence(ell_max: u32) -> Vec<f64> {
    (1..=ell_max).map(|l| 2f64.powi(-(l as i32))).collect()
}

/// Errors `‖X_{α_ℓ} f - X f‖₂ / ‖f‖₂` as `α_ℓ → π/2`, for the block at
/// level `j`, all blocks in `ℓ²`, the square function, `T_m` and the
/// selector `Φ = m` at radius `2^j`, plus `max_ξ |m(sin α_ℓ ξ) - m(ξ)|`.
pub fn classical_limit_profile<T: Real>(
    f: &Signal<T>,
    bank: &DyadicBank<T>,
    m: &Symbol<T>,
    j: i32,
    ell_max: u32,
) -> Result<ConvergenceProfile> {
    if !bank.levels().contains(&j) {
        return Err(FrlpError::LevelOutOfRange(j));
    }
    let grid = *f.grid();
    let norm = f.l2_norm().to_f64();
    let levels: Vec<i32> = bank.levels().collect();
    let base_blocks = blocks(f, bank, levels.iter().copied(), None)?;
    let base_square = square_function(f, bank, None)?;
    let base_mult = apply_multiplier(m, f)?;
    let radius = T::of(2f64.powi(j));
    let base_sel = apply_multiplier(&m.dilate(radius), f)?;
    let base_mask = m.sample(&grid);
    let jpos = levels.iter().position(|&l| l == j).expect("level in bank");
    let mut entries = Vec::new();
    for (k, a) in classical_sequence(ell_max).into_iter().enumerate() {
        let p = FracParam::new(T::of(a))?;
        let d = Descriptors::of(&p);
        let sampling_ok = validate_sampling(&grid, &p).ok;
        let bl = blocks(f, bank, levels.iter().copied(), Some(&p))?;
        let per_block: Vec<f64> = bl.iter().zip(&base_blocks).map(|((_, x), (_, y))| rel_l2(x, y) * y.l2_norm().to_f64() / norm).collect();
        let block = per_block[jpos];
        let blocks_l2 = per_block.iter().map(|e| e * e).sum::<f64>().sqrt();
        let sq = square_function(f, bank, Some(&p))?;
        let square = sq.sub(&base_square).l2_norm().to_f64() / norm;
        let mult = apply_frft_multiplier(m, f, &p, Route::Definition)?.sub(&base_mult).l2_norm().to_f64() / norm;
        let sel = band_selector(m, radius, f, &p)?.sub(&base_sel).l2_norm().to_f64() / norm;
        let rescaled = rescale_symbol(m, &p).sample(&grid);
        let sym = rescaled.iter().zip(&base_mask).map(|(x, y)| (x - y).norm().to_f64()).fold(0.0, f64::max);
        entries.push(ProfileEntry {
            ell: k as u32 + 1,
            alpha: d.alpha,
            s: d.s,
            kappa: d.kappa,
            deviation: d.deviation,
            sampling_ok,
            metrics: vec![block, blocks_l2, square, mult, sel, sym],
        });
    }
    let names = ["block", "blocks_l2", "square", "multiplier", "selector", "symbol_deviation"];
    finish("classical_limit", &names, entries, |e| e.alpha - std::f64::consts::FRAC_PI_2, &[0, 1, 2, 3, 4, 5], true)
}

fn finish(
    law: &str,
    names: &[&str],
    entries: Vec<ProfileEntry>,
    gap: impl Fn(&ProfileEntry) -> f64,
    gated: &[usize],
    monotone: bool,
) -> Result<ConvergenceProfile> {
    if entries.iter().any(|e| gated.iter().any(|&k| !e.metrics[k].is_finite())) {
        return Err(FrlpError::InvalidArgument(format!("{law}: non-finite metric")));
    }
    let x: Vec<f64> = entries.iter().map(|e| gap(e).abs().log2()).collect();
    let slopes = (0..names.len())
        .map(|k| {
            let (xs, ys): (Vec<f64>, Vec<f64>) = x
                .iter()
                .zip(&entries)
                .filter(|(_, e)| e.metrics[k] > 1e-14)
                .map(|(a, e)| (*a, e.metrics[k].log2()))
                .unzip();
            if xs.len() >= 2 {
                fit_slope(&xs, &ys)
            } else {
                f64::NAN
            }
        })
        .collect();
    let pass = !entries.is_empty()
        && gated.iter().all(|&k| {
            let col: Vec<f64> = entries.iter().map(|e| e.metrics[k]).collect();
            col.last().is_some_and(|&v| v < LIMIT_TOLERANCE) && (!monotone || settles(&col))
        });
    Ok(ConvergenceProfile { law: law.into(), metric_names: names.iter().map(|s| s.to_string()).collect(), entries, slopes, pass })
}

/// `|ξ|`-centroid of `|Φ(s ξ / R)|²` on the grid, and whether the whole
/// passband is resolved (negligible mass at the grid edge).
pub fn passband_centroid<T: Real>(grid: &GridSpec<T>, phi: &Symbol<T>, radius: T, p: &FracParam<T>) -> (f64, bool) {
    let mask = rescale_symbol(&phi.dilate(radius), p).sample(grid);
    let (mut num, mut den, mut peak, mut edge) = (0.0, 0.0, 0.0f64, 0.0f64);
    let top = grid.nyquist().to_f64();
    for (i, v) in mask.iter().enumerate() {
        let w = v.norm_sqr().to_f64();
        let r = grid.freq_norm(i).to_f64();
        num += r * w;
        den += w;
        peak = peak.max(w);
        if r >= top * (1.0 - 1e-12) {
            edge = edge.max(w);
        }
    }
    if den == 0.0 {
        return (f64::NAN, false);
    }
    (num / den, edge <= 1e-12 * peak)
}

/// Passband ratios between consecutive fully resolved entries must lie in
/// `2 ± 5%`.
pub const DOUBLING_TOLERANCE: f64 = 0.05;

/// `‖S^Φ_{R,α_ℓ} f - Φ(0) f‖₂ / ‖f‖₂` as `α_ℓ = 2^{-ℓ} → 0`, with the
/// measured passband centroid.
///
/// The selector runs through the conjugation route; the chirp is far beyond
/// the sampling guard for small `α`, which is recorded per entry. The error
/// plateaus near `‖(Φ(x/R) - Φ(0)) f‖` until the chirp wraps around the grid,
/// so only the final entry is gated, not monotonicity.
pub fn singular_boundary_profile<T: Real>(f: &Signal<T>, phi: &Symbol<T>, radius: T, ell_max: u32) -> Result<ConvergenceProfile> {
    let grid = *f.grid();
    let norm = f.l2_norm().to_f64();
    let phi0 = phi.eval([T::zero(), T::zero()]);
    let target = f.scale(phi0);
    let mut entries = Vec::new();
    for (k, a) in singular_sequence(ell_max).into_iter().enumerate() {
        let p = FracParam::new(T::of(a))?;
        let d = Descriptors::of(&p);
        let out = conjugated_multiplier(&phi.dilate(radius), f, &p)?;
        let err = out.sub(&target).l2_norm().to_f64() / norm;
        let (centroid, resolved) = passband_centroid(&grid, phi, radius, &p);
        entries.push(ProfileEntry {
            ell: k as u32 + 1,
            alpha: d.alpha,
            s: d.s,
            kappa: d.kappa,
            deviation: d.deviation,
            sampling_ok: validate_sampling(&grid, &p).ok,
            metrics: vec![err, centroid, if resolved { 1.0 } else { 0.0 }],
        });
    }
    let mut prof = finish("singular_boundary", &["error", "passband_centroid", "resolved"], entries, |e| e.alpha, &[0], false)?;
    let ratios = doubling_ratios(&prof);
    prof.pass = prof.pass && !ratios.is_empty() && ratios.iter().all(|r| (r - 2.0).abs() <= 2.0 * DOUBLING_TOLERANCE);
    Ok(prof)
}

/// Centroid ratios `c_{ℓ+1} / c_ℓ` over consecutive resolved entries.
pub fn doubling_ratios(prof: &ConvergenceProfile) -> Vec<f64> {
    prof.entries
        .windows(2)
        .filter(|w| w[0].metrics[2] == 1.0 && w[1].metrics[2] == 1.0)
        .map(|w| w[1].metrics[1] / w[0].metrics[1])
        .collect()
}
