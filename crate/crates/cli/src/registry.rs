//! The check registry: every certified identity and empirical probe, with a
//! stable id, the statement it checks, how inputs are generated, and the
//! tolerance it is held to.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use frlp_core::conditions::{marcinkiewicz_invariance, mihlin_rescaling_gap};
use frlp_core::dyadic::{
    difference, dyadic_square_function, expectation, haar_function, haar_transform, inverse_haar,
    mixed_orthogonality_probe, DyadicTree,
};
use frlp_core::fft::{apply_real_mask, convolve};
use frlp_core::frft::{ensure_sampling, frft_resampled};
use frlp_core::grid::lp_norm;
use frlp_core::limits::{
    classical_limit_profile, classify_regime, singular_boundary_profile, Descriptors, Regime, RegimeConfig,
};
use frlp_core::lp::{
    besov_norm, blocks, build_bank, decompose, lipschitz_norm, reconstruct, sobolev_norm, square_function, triebel_norm,
    Profile, Variant,
};
use frlp_core::multiplier::{apply_frft_multiplier, apply_multiplier, Route};
use frlp_core::opnorm::{power_iteration, seed_vector, POWER_ITERATIONS};
use frlp_core::oscillation::{
    bmo_alpha_norm, bmo_norm, carleson_score, default_scales, hardy_square_quasinorm, john_nirenberg_profile,
    min_rank_correlation, psi_alpha, sample_kernel, sharp_maximal, stability_scores, synthesize_atom, validate_atom,
    bmo_corpus, Cube, CubeFamily, Kernel,
};
use frlp_core::potentials::{
    apply_potential, bessel_contraction_ratio, hls_desk_check, kato_ponce_path, kato_ponce_region, operator_chain,
    pullback_norm, semigroup_check, twisted_convolution, twisted_product, ChainStage, Frame, PotentialSpec, Region,
    SemigroupIdentity,
};
use frlp_core::report::{rel_l2, Digest};
use frlp_core::signals::{gaussian, random_bandlimited, random_schwartz, random_signal, rng};
use frlp_core::symbol::{bochner_riesz_symbol, gauss, lp_bump, rescale_symbol, smoothstep, Symbol};
use frlp_core::{
    chirp_mul, frft, ifrft, make_grid, validate_sampling, Complex, Direction, FracParam, FrlpError, FrftPlan, Grid64,
    Result, Signal64, Spectrum,
};

use crate::oracles;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    /// An equality, held to floating-point tolerance.
    Exact,
    /// An inequality or asymptotic statement probed on finite data.
    Empirical,
}

/// What an entry measured.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub max_err: f64,
    pub pass: bool,
    pub detail: String,
}

impl Outcome {
    fn within(max_err: f64, tol: f64, detail: impl Into<String>) -> Self {
        Self { max_err, pass: max_err.is_finite() && max_err <= tol, detail: detail.into() }
    }

    fn verdict(pass: bool, max_err: f64, detail: impl Into<String>) -> Self {
        Self { max_err, pass, detail: detail.into() }
    }
}

/// Per-entry seeding.
#[derive(Debug, Clone, Copy)]
pub struct Ctx {
    pub seed: u64,
    pub id: &'static str,
}

impl Ctx {
    pub fn sub(&self, k: u64) -> u64 {
        Digest::default().bytes(self.id.as_bytes()).bytes(&self.seed.to_le_bytes()).bytes(&k.to_le_bytes()).value()
    }
}

pub struct Entry {
    pub id: &'static str,
    /// The statement being checked.
    pub anchor: &'static str,
    /// Grid, signal family and parameter ranges.
    pub generator: &'static str,
    pub tolerance: f64,
    pub severity: Severity,
    pub run: fn(&Ctx, f64) -> Result<Outcome>,
}

const ANGLES: [f64; 5] = [0.3, FRAC_PI_4, 1.1, FRAC_PI_2, 2.0];
const EXPONENTS: [f64; 5] = [1.0, 1.5, 2.0, 4.0, f64::INFINITY];
const NORM_ANGLES: [f64; 3] = [0.7, 1.3, 2.4];

fn grid256() -> Result<Grid64> {
    make_grid(1, 8.0, 256)
}

fn param(alpha: f64) -> Result<FracParam<f64>> {
    FracParam::new(alpha)
}

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        (a - b).abs() / b.abs()
    }
}

/// Largest sample gap between two real profiles, relative to `max(1, sup|b|)`.
fn pointwise_gap(a: &[f64], b: &[f64]) -> f64 {
    let scale = b.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max) / scale
}

fn moduli(f: &Signal64) -> Vec<f64> {
    f.modulus()
}

fn real_parts(f: &Signal64) -> Vec<f64> {
    f.values().iter().map(|v| v.re).collect()
}

fn rel_vec(a: &[Complex<f64>], b: &[Complex<f64>]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let den: f64 = b.iter().map(|y| y.norm_sqr()).sum();
    (num / den).sqrt()
}

fn dc_free(f: &Signal64) -> Signal64 {
    let g = f.grid();
    let m: Vec<f64> = (0..g.len()).map(|i| if g.freq_norm(i) == 0.0 { 0.0 } else { 1.0 }).collect();
    apply_real_mask(f, &m)
}

/// A signal whose representation on the side the frame's multiplier acts on has no DC bin.
fn dc_free_in_frame(f: &Signal64, frame: &Frame<f64>) -> Result<Signal64> {
    let f = dc_free(f);
    Ok(match frame {
        Frame::Classical => f,
        Frame::Conjugated(p) => chirp_mul(&f, p, Direction::Inverse),
        Frame::Pullback(p) => {
            let plan = FrftPlan::new(f.grid(), p)?;
            let u = dc_free(&plan.forward(&f)?.as_signal()?);
            plan.inverse(&Spectrum::new(*f.grid(), p.s(), u.into_values())?)?
        }
    })
}

fn frames() -> Result<[Frame<f64>; 3]> {
    Ok([Frame::Classical, Frame::Conjugated(param(1.1)?), Frame::Pullback(param(0.8)?)])
}

// ---- frft ----

fn chirp_isometry(ctx: &Ctx, tol: f64) -> Result<Outcome> {
    let g = grid256()?;
    let mut worst = 0.0f64;
    for i in 0..20 {
        let f = random_signal(&g, ctx.sub(i));
        for &a in &ANGLES {
            let h = chirp_mul(&f, &param(a)?, Direction::Forward);
            for &q in &EXPONENTS {
                worst = worst.max(rel(lp_norm(&h, q), lp_norm(&f, q)));
            }
        }
    }
    Ok(Outcome::within(worst, tol, "20 signals x 5 angles x 5 exponents"))
}

fn kernel_quadrature(ctx: &Ctx, tol: f64) -> Result<Outcome> {
    let g = make_grid(1, 4.0, 64)?;
    let mut worst = 0.0f64;
    for (i, &a) in [0.5, 1.0, 1.3, 2.2, -1.0].iter().enumerate() {
        let f = random_schwartz(&g, 3, ctx.sub(i as u64));
        let spec = frft(&f, &param(a)?)?;
        let us: Vec<f64> = (0..spec.values().len()).map(|m| spec.point(m)[0]).collect();
        worst = worst.max(rel_vec(spec.values(), &oracles::kernel_frft(&f, a, &us)));
    }
    Ok(Outcome::within(worst, tol, "N=64, 5 angles, Schwartz sums"))
}

fn resampled_quadrature(ctx: &Ctx, tol: f64) -> Result<Outcome> {
    let g = make_grid(1, 4.0, 64)?;
    let mut worst = 0.0f64;
    for (i, &a) in [0.9, 1.4, 2.0].iter().enumerate() {
        let f = random_schwartz(&g, 3, ctx.sub(i as u64));
        let spec = frft_resampled(&f, &param(a)?)?;
        // above Nyquist the direct sum only repeats its periodic alias
        let band: Vec<usize> =
            (0..spec.values().len()).filter(|&m| (spec.point(m)[0] / a.sin()).abs() <= g.nyquist()).collect();
        let us: Vec<f64> = band.iter().map(|&m| spec.point(m)[0]).collect();
        let got: Vec<Complex<f64>> = band.iter().map(|&m| spec.values()[m]).collect();
        worst = worst.max(rel_vec(&got, &oracles::kernel_frft(&f, a, &us)));
    }
    Ok(Outcome::within(worst, tol, "N=64, 3 angles, resolved band of the physical frequency lattice"))
}

fn plancherel(ctx: &Ctx, tol: f64) -> Result<Outcome> {
    let g = grid256()?;
    let mut worst = 0.0f64;
    for i in 0..10 {
        let f = random_signal(&g, ctx.sub(i));
        for &a in &ANGLES {
            worst = worst.max(rel(frft(&f, &param(a)?)?.lp_norm(2.0), f.l2_norm()));
        }
    }
    Ok(Outcome::within(worst, tol, "10 signals x 5 angles"))
}

fn roundtrip(ctx: &Ctx, tol: f64) -> Result<Outcome> {
    let g = grid256()?;
    let mut worst = 0.0f64;
    for i in 0..10 {
        let f = random_signal(&g, ctx.sub(i));
        for &a in &ANGLES {
            let p = param(a)?;
            worst = worst.max(rel_l2(&ifrft(&frft(&f, &p)?, &p)?, &f));
        }
    }
    Ok(Outcome::within(worst, tol, "10 signals x 5 angles"))
}

fn classical_angle(ctx: &Ctx, tol: f64) -> Result<Outcome> {
    let g = grid256()?;
    let mut worst = 0.0f64;
    for i in 0..3 {
        let f = random_schwartz(&g, 4, ctx.sub(i));
        let spec = frft(&f, &param(FRAC_PI_2)?)?;
        let xis: Vec<f64> = (0..g.len()).map(|m| spec.point(m)[0]).collect();
        worst = worst.max(rel_vec(spec.values(), &oracles::direct_dft(&f, &xis)));
    }
    Ok(Outcome::within(worst, tol, "alpha=pi/2 against a direct DFT sum"))
}

fn sampling_guard(_: &Ctx, tol: f64) -> Result<Outcome> {
    // L=2, N=16: Nyquist 4, so |κ| ≤ 3.6 is resolved
    let g = make_grid(1, 2.0, 16)?;
    let mut wrong = 0;
    for (kappa, ok) in [(3.5, true), (3.6, true), (3.7, false), (-3.7, false), (0.0, true), (20.0, false)] {
        let p = param((1.0f64).atan2(kappa))?;
        let r = validate_sampling(&g, &p);
        let guarded = matches!(ensure_sampling(&g, &p), Err(FrlpError::ChirpAliased { .. }));
        if r.ok != ok || guarded == ok {
            wrong += 1;
        }
    }
    Ok(Outcome::within(wrong as f64, tol, "misclassified chirp slopes"))
}

// ---- multiplier ----

fn multiplier_symbols() -> Vec<Symbol<f64>> {
    vec![gauss(0.5), smoothstep(1.0, 2.0), lp_bump().dilate(2.0), bochner_riesz_symbol(1.0, 3.0)]
}

fn routes_agree(ctx: &Ctx, tol: f64) -> Result<Outcome> {
    let g = grid256()?;
    let syms = multiplier_symbols();
    let mut r = rng(ctx.sub(0));
    let mut worst = 0.0f64;
    for i in 0..50 {
        let m = &syms[i % syms.len()];
        let p = param(r.random_range(0.35..2.8))?;
        let f = random_signal(&g, ctx.sub(i as u64 + 1));
        let a = apply_frft_multiplier(m, &f, &p, Route::Definition)?;
        let b = apply_frft_multiplier(m, &f, &p, Route::Conjugation)?;
        worst = worst.max(rel_l2(&a, &b));
    }
    Ok(Outcome::within(worst, tol, "50 draws of (symbol, signal, angle)"))
}

fn operator_norms(ctx: &Ctx, tol: f64) -> Result<Outcome> {
    let g = grid256()?;
    let syms = multiplier_symbols();
    let mut r = rng(ctx.sub(0));
    let mut worst = 0.0f64;
    let mut detail = String::new();
    for m in syms.iter().take(3) {
        let p = param(r.random_range(0.5..2.6))?;
        let mc = m.conj();
        let twisted = power_iteration(
            |v| {
                let w = apply_frft_multiplier(m, v, &p, Route::Definition)?;
                apply_frft_multiplier(&mc, &w, &p, Route::Definition)
            },
            chirp_mul(&seed_vector(&g), &p, Direction::Inverse),
            POWER_ITERATIONS,
        )?;
        let (ma, mac) = (rescale_symbol(m, &p), rescale_symbol(&mc, &p));
        let classical = power_iteration(
            |v| apply_multiplier(&mac, &apply_multiplier(&ma, v)?),
            seed_vector(&g),
            POWER_ITERATIONS,
        )?;
        worst = worst.max(rel(twisted.norm, classical.norm));
        detail.push_str(&format!("{}:{:.6} ", m.name(), twisted.norm));
    }
    Ok(Outcome::within(worst, tol, detail.trim_end()))
}

// ---- conditions ----

fn marcinkiewicz(_: &Ctx, _: f64) -> Result<Outcome> {
    let m = smoothstep(0.7, 2.6);
    let mut worst = 0.0f64;
    let mut all = true;
    for a in [1.2, 0.3, 2.9, -0.7] {
        let r = marcinkiewicz_invariance(&m, &param(a)?, -2, 3, 256);
        all &= r.holds;
        let c = r.covering as f64;
        worst = worst.max(r.rescaled / (c * r.original_cover)).max(r.original / (c * r.rescaled_cover));
    }
    Ok(Outcome::verdict(all, worst, "largest side ratio over the covering constant"))
}

fn mihlin(_: &Ctx, tol: f64) -> Result<Outcome> {
    let m = gauss(0.7).product(&smoothstep(0.2, 1.5));
    let annuli = [0.25, 0.5, 1.0, 2.0];
    let mut worst = 0.0f64;
    for a in [0.6, 1.1, 2.3] {
        for panels in [4, 8] {
            worst = worst.max(mihlin_rescaling_gap(&m, &param(a)?, 1, &annuli, panels));
        }
    }
    Ok(Outcome::within(worst, tol, "3 angles x 2 quadrature refinements"))
}

// ---- littlewood-paley ----

fn lp_blocks_pointwise(ctx: &Ctx, tol: f64) -> Result<Outcome> {
    let g = grid256()?;
    let bank = build_bank(&g, -2, 3, Profile::Partition)?;
    let mut worst = 0.0f64;
    for i in 0..5 {
        let f = random_signal(&g, ctx.sub(i));
        for &a in &NORM_ANGLES {
            let p = param(a)?;
            let tw = blocks(&f, &bank, bank.levels(), Some(&p))?;
            let cl = blocks(&chirp_mul(&f, &p, Direction::Forward), &bank, bank.levels(), None)?;
            for ((_, x), (_, y)) in tw.iter().zip(&cl) {
                worst = worst.max(pointwise_gap(&moduli(x), &moduli(y)));
            }
        }
    }
    Ok(Outcome::within(worst, tol, "levels -2..3, 5 signals x 3 angles"))
}

fn lp_square_pointwise(ctx: &Ctx, tol: f64) -> Result<Outcome> {
    let g = grid256()?;
    let bank = build_bank(&g, -2, 3, Profile::Partition)?;
    let mut worst = 0.0f64;
    for i in 0..5 {
        let f = random_signal(&g, ctx.sub(i));
        for &a in &NORM_ANGLES {
            let p = param(a)?;
            let tw = square_function(&f, &bank, Some(&p))?;
            let cl = square_function(&chirp_mul(&f, &p, Direction::Forward), &bank, None)?;
            worst = worst.max(pointwise_gap(&real_parts(&tw), &real_parts(&cl)));
        }
    }
    Ok(Outcome::within(worst, tol, "5 signals x 3 angles"))
}

fn lp_reconstruction(ctx: &Ctx, tol: f64) -> Result<Outcome> {
    let g = make_grid(1, 8.0, 512)?;
    let bank = build_bank(&g, -3, 5, Profile::Partition)?;
    let mut worst = 0.0f64;
    for i in 0..20 {
        let g0 = random_bandlimited(&g, 30.0, ctx.sub(i));
        for &a in &ANGLES {
            let p = param(a)?;
            let f = chirp_mul(&g0, &p, Direction::Inverse);
            let dec = decompose(&f, &bank, Some(&p), Variant::Inhomogeneous)?;
            worst = worst.max(reconstruct(&dec).residual.unwrap_or(f64::NAN));
        }
    }
    Ok(Outcome::within(worst, tol, "N=512, bank -3..5, 20 band-limited signals x 5 angles"))
}

fn frame_tight(_: &Ctx, tol: f64) -> Result<Outcome> {
    let g = make_grid(1, 8.0, 512)?;
    let mut worst = 0.0f64;
    for (j0, j1) in [(-3, 5), (0, 4), (1, 3)] {
        let (a, b): (f64, f64) = build_bank(&g, j0, j1, Profile::SquarePartition)?.frame_bounds();
        worst = worst.max((a - 1.0).abs()).max((b - 1.0).abs());
    }
    Ok(Outcome::within(worst, tol, "square-summable profile on three level ranges"))
}

type NormFn = fn(&Signal64, Option<&FracParam<f64>>) -> Result<f64>;

fn two_path(ctx: &Ctx, tol: f64, norms: &[(&str, NormFn)]) -> Result<Outcome> {
    let g = grid256()?;
    let mut worst = 0.0f64;
    for i in 0..20 {
        let f = random_signal(&g, ctx.sub(i));
        for &a in &NORM_ANGLES {
            let p = param(a)?;
            let mf = chirp_mul(&f, &p, Direction::Forward);
            for (_, n) in norms {
                worst = worst.max(rel(n(&f, Some(&p))?, n(&mf, None)?));
            }
        }
    }
    let names: Vec<&str> = norms.iter().map(|(n, _)| *n).collect();
    Ok(Outcome::within(worst, tol, format!("20 signals x 3 angles: {}", names.join(", "))))
}

fn norm_bank() -> Result<frlp_core::lp::DyadicBank<f64>> {
    build_bank(&grid256()?, 1, 3, Profile::Partition)
}

fn besov_two_path(ctx: &Ctx, tol: f64) -> Result<Outcome> {
    two_path(
        ctx,
        tol,
        &[
            ("B^0.5_{2,2}", |f, p| Ok(besov_norm(f, &norm_bank()?, 0.5, 2.0, 2.0, p)?.value)),
            ("B^1_{1,inf}", |f, p| Ok(besov_norm(f, &norm_bank()?, 1.0, 1.0, f64::INFINITY, p)?.value)),
            ("B^-0.3_{4,1}", |f, p| Ok(besov_norm(f, &norm_bank()?, -0.3, 4.0, 1.0, p)?.value)),
        ],
    )
}

fn triebel_two_path(ctx: &Ctx, tol: f64) -> Result<Outcome> {
    two_path(
        ctx,
        tol,
        &[
            ("F^0.5_{2,2}", |f, p| Ok(triebel_norm(f, &norm_bank()?, 0.5, 2.0, 2.0, p)?.value)),
            ("F^1_{3,1}", |f, p| Ok(triebel_norm(f, &norm_bank()?, 1.0, 3.0, 1.0, p)?.value)),
        ],
    )
}

fn sobolev_two_path(ctx: &Ctx, tol: f64) -> Result<Outcome> {
    two_path(
        ctx,
        tol,
        &[
            ("W^{1,2}", |f, p| Ok(sobolev_norm(f, &norm_bank()?, 1.0, 2.0, p)?.value)),
            ("W^{0.5,4}", |f, p| Ok(sobolev_norm(f, &norm_bank()?, 0.5, 4.0, p)?.value)),
        ],
    )
}

fn lipschitz_two_path(ctx: &Ctx, tol: f64) -> Result<Outcome> {
    two_path(
        ctx,
        tol,
        &[
            ("Lip_0.5", |f, p| Ok(lipschitz_norm(f, &norm_bank()?, 0.5, Variant::Inhomogeneous, p)?.value)),
            ("Lip_hom_0.7", |f, p| Ok(lipschitz_norm(f, &norm_bank()?, 0.7, Variant::Homogeneous, p)?.value)),
        ],
    )
}

// ---- dyadic ----

fn dyadic_square_pointwise(ctx: &Ctx, tol: f64) -> Result<Outcome> {
    let g = grid256()?;
    let tree = DyadicTree::full(&g)?;
    let mut worst = 0.0f64;
    for i in 0..5 {
        let f = random_signal(&g, ctx.sub(i));
        for &a in &NORM_ANGLES {
            let p = param(a)?;
            let tw = dyadic_square_function(&f, &tree, Some(&p))?;
            let cl = dyadic_square_function(&chirp_mul(&f, &p, Direction::Forward), &tree, None)?;
            worst = worst.max(pointwise_gap(&real_parts(&tw), &real_parts(&cl)));
        }
    }
    Ok(Outcome::within(worst, tol, "full tree, 5 signals x 3 angles"))
}

fn haar_gram(_: &Ctx, tol: f64) -> Result<Outcome> {
    let g = make_grid(1, 4.0, 64)?;
    let tree = DyadicTree::full(&g)?;
    let p = param(1.3)?;
    let kappa = p.kappa();
    let k0 = tree.k_min();
    let mut basis: Vec<Vec<Complex<f64>>> = (0..1usize << k0).map(|o| oracles::scaling(&g, k0, o, kappa)).collect();
    let mut worst = 0.0f64;
    for level in k0..tree.k_max() {
        for offset in 0..1usize << level {
            let h = oracles::haar(&g, level, offset, kappa);
            let ours = haar_function(&tree, level, offset, Some(&p))?;
            worst = worst.max(rel_vec(ours.values(), &h));
            basis.push(h);
        }
    }
    let dx = g.spacing();
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            let want = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((oracles::inner(a, b, dx) - want).norm());
        }
    }
    Ok(Outcome::within(worst, tol, format!("{} twisted Haar and scaling functions, N=64", basis.len())))
}

fn haar_parseval(ctx: &Ctx, tol: f64) -> Result<Outcome> {
    let g = grid256()?;
    let tree = DyadicTree::full(&g)?;
    let mut worst = 0.0f64;
    for i in 0..10 {
        let f = random_signal(&g, ctx.sub(i));
        for &a in &ANGLES {
            let e = haar_transform(&f, &tree, Some(&param(a)?))?.energy();
            worst = worst.max(rel(e, f.l2_norm().powi(2)));
        }
    }
    Ok(Outcome::within(worst, tol, "10 signals x 5 angles"))
}

fn haar_reconstruction(ctx: &Ctx, tol: f64) -> Result<Outcome> {
    let g = grid256()?;
    let tree = DyadicTree::full(&g)?;
    let mut worst = 0.0f64;
    for i in 0..10 {
        let f = random_signal(&g, ctx.sub(i));
        for &a in &ANGLES {
            let c = haar_transform(&f, &tree, Some(&param(a)?))?;
            worst = worst.max(rel_l2(&inverse_haar(&c, &tree)?, &f));
        }
    }
    Ok(Outcome::within(worst, tol, "10 signals x 5 angles"))
}

fn martingale(ctx: &Ctx, tol: f64) -> Result<Outcome> {
    let g = grid256()?;
    let tree = DyadicTree::full(&g)?;
    let mut worst = 0.0f64;
    for i in 0..5 {
        let f = random_signal(&g, ctx.sub(i));
        for &a in &NORM_ANGLES {
            let p = param(a)?;
            let mut sum = expectation(&f, &tree, tree.k_min(), Some(&p))?;
            for k in tree.k_min() + 1..=tree.k_max() {
                sum = sum.add(&difference(&f, &tree, k, Some(&p))?);
            }
            worst = worst.max(rel_l2(&sum, &f));
        }
    }
    Ok(Outcome::within(worst, tol, "E_{k_min} f + sum of differences, 5 signals x 3 angles"))
}

/// Pairs `(j, k)` with `|j - k|` from 0 to `spread`, on both sides of the diagonal.
pub fn probe_pairs(base: i32, spread: i32, j_max: i32) -> Vec<(i32, u32)> {
    let mut pairs = vec![(base, base as u32)];
    for d in 1..=spread {
        if base + d <= j_max {
            pairs.push((base, (base + d) as u32));
            pairs.push((base + d, base as u32));
        }
    }
    pairs
}

fn mixed_equality(_: &Ctx, tol: f64) -> Result<Outcome> {
    let g = make_grid(1, 1.0, 256)?;
    let tree = DyadicTree::full(&g)?;
    let bank = build_bank(&g, -2, 7, Profile::Partition)?;
    let r = mixed_orthogonality_probe(&tree, &bank, &probe_pairs(3, 2, 7), &param(1.1)?)?;
    Ok(Outcome::within(r.max_gap, tol, format!("{} pairs, L=1, N=256", r.rows.len())))
}

fn mixed_decay(_: &Ctx, tol: f64) -> Result<Outcome> {
    let g = make_grid(1, 1.0, 1024)?;
    let tree = DyadicTree::full(&g)?;
    let bank = build_bank(&g, -2, 9, Profile::Partition)?;
    let r = mixed_orthogonality_probe(&tree, &bank, &probe_pairs(3, 6, 9), &param(1.1)?)?;
    Ok(Outcome::verdict(r.slope <= tol, r.slope, format!("log2-norm slope over |j-k| in 0..6, gap {:.2e}", r.max_gap)))
}

// ---- potentials ----

fn semigroup(ctx: &Ctx, tol: f64, ids: &[SemigroupIdentity<f64>]) -> Result<Outcome> {
    let g = grid256()?;
    let mut worst = 0.0f64;
    for (i, fr) in frames()?.iter().enumerate() {
        let f = dc_free_in_frame(&random_signal(&g, ctx.sub(i as u64)), fr)?;
        for id in ids {
            worst = worst.max(semigroup_check(*id, &f, fr)?.max_rel_err);
        }
    }
    Ok(Outcome::within(worst, tol, "classical, conjugated and pullback frames"))
}

fn semigroup_riesz(ctx: &Ctx, tol: f64) -> Result<Outcome> {
    semigroup(ctx, tol, &[SemigroupIdentity::Riesz(0.3, 0.4), SemigroupIdentity::Riesz(0.1, 0.7)])
}

fn semigroup_bessel(ctx: &Ctx, tol: f64) -> Result<Outcome> {
    semigroup(ctx, tol, &[SemigroupIdentity::Bessel(0.5, 1.5), SemigroupIdentity::Bessel(2.0, 0.25)])
}

fn semigroup_laplacian(ctx: &Ctx, tol: f64) -> Result<Outcome> {
    semigroup(ctx, tol, &[SemigroupIdentity::Laplacian(0.6, -0.2), SemigroupIdentity::Laplacian(0.25, 0.5)])
}

fn semigroup_commutation(ctx: &Ctx, tol: f64) -> Result<Outcome> {
    semigroup(ctx, tol, &[SemigroupIdentity::Commutation(0.9, 0.2), SemigroupIdentity::Commutation(0.5, 0.0)])
}

fn bessel_contraction(ctx: &Ctx, tol: f64) -> Result<Outcome> {
    let g = grid256()?;
    let p = param(0.9)?;
    let smooth = gaussian(&g, [0.5, 0.0], 1.0, Complex::new(1.0, 0.5));
    let mut worst = 0.0f64;
    for f in [smooth, random_signal(&g, ctx.sub(0)), random_signal(&g, ctx.sub(1))] {
        for sigma in [0.3, 1.0, 3.0] {
            for r in [1.0, 2.0, 4.0, f64::INFINITY] {
                worst = worst.max(bessel_contraction_ratio(&f, sigma, r, &p)? - 1.0);
            }
        }
    }
    Ok(Outcome::within(worst, tol, "largest ratio minus one, pullback frame"))
}

fn kato_ponce_transfer(ctx: &Ctx, tol: f64) -> Result<Outcome> {
    let g = grid256()?;
    let mut worst = 0.0f64;
    for (i, &a) in NORM_ANGLES.iter().enumerate() {
        let (w, u) = (random_signal(&g, ctx.sub(2 * i as u64)), random_signal(&g, ctx.sub(2 * i as u64 + 1)));
        for s in [0.4, 0.8, 2.0] {
            worst = worst.max(kato_ponce_path(&w, &u, s, &param(a)?)?.max_rel_err);
        }
    }
    Ok(Outcome::within(worst, tol, "3 angles x 3 orders"))
}

/// `(s, r, n)` on a 20 x 10 lattice.
pub fn kato_ponce_lattice() -> Vec<(f64, f64, usize)> {
    let rs = [0.25, 0.4, 0.5, 0.6, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0];
    let mut out = Vec::with_capacity(200);
    for k in 0..20 {
        for (l, &r) in rs.iter().enumerate() {
            out.push((-1.0 + 0.5 * k as f64, r, 1 + (k + l) % 3));
        }
    }
    out
}

fn kato_ponce_lattice_check(_: &Ctx, tol: f64) -> Result<Outcome> {
    let lattice = kato_ponce_lattice();
    let wrong = lattice
        .iter()
        .filter(|&&(s, r, n)| (kato_ponce_region(s, r, n) == Region::Forbidden) != oracles::kato_ponce_forbidden(s, r, n))
        .count();
    Ok(Outcome::within(wrong as f64, tol, format!("mismatches over {} lattice points", lattice.len())))
}

fn pullback_isometry(ctx: &Ctx, tol: f64) -> Result<Outcome> {
    let g = grid256()?;
    let mut worst = 0.0f64;
    for (i, &a) in NORM_ANGLES.iter().enumerate() {
        let p = param(a)?;
        let f = random_signal(&g, ctx.sub(i as u64));
        let riesz = PotentialSpec::riesz(0.4);
        let lhs = pullback_norm(&apply_potential(&riesz, &f, &Frame::Pullback(p))?, 2.0, &p)?.value;
        let u = frft(&f, &p)?.as_signal()?;
        let rhs = lp_norm(&apply_potential(&riesz, &u, &Frame::Classical)?, 2.0);
        worst = worst.max(rel(lhs, rhs));
    }
    Ok(Outcome::within(worst, tol, "riesz(0.4), 3 angles"))
}

fn hls(_: &Ctx, _: f64) -> Result<Outcome> {
    let g = make_grid(1, 16.0, 256)?;
    let fams: Vec<Box<dyn Fn([f64; 2]) -> Complex<f64> + Sync>> = (0..3)
        .map(|k| {
            let w = 0.6 + 0.4 * k as f64;
            Box::new(move |x: [f64; 2]| Complex::new((-PI * x[0] * x[0] / (w * w)).exp(), 0.0))
                as Box<dyn Fn([f64; 2]) -> Complex<f64> + Sync>
        })
        .collect();
    let refs: Vec<&(dyn Fn([f64; 2]) -> Complex<f64> + Sync)> = fams.iter().map(|b| b.as_ref()).collect();
    let rep = hls_desk_check(&g, 0.5, 4.0 / 3.0, 4.0, &refs, &param(1.2)?)?;
    Ok(Outcome::verdict(
        rep.certificate.pass,
        rep.certificate.max_rel_err,
        format!("ratio {:.4} at N, {:.4} at 4N", rep.ratio_coarse, rep.ratio_fine),
    ))
}

fn chain(ctx: &Ctx, _: f64) -> Result<Outcome> {
    let g = make_grid(1, 16.0, 256)?;
    let p = param(1.0)?;
    let f = random_signal(&g, ctx.sub(0));
    let a = ChainStage { symbol: lp_bump().dilate(2.0), constant: 1.0 };
    let t = ChainStage { symbol: gauss(0.5), constant: 1.0 };
    let rep = operator_chain(Some(&t), Some(&a), 0.25, 0.5, 4.0 / 3.0, 2.0, &f, &p)?;
    Ok(Outcome::verdict(rep.certificate.pass, rep.certificate.max_rel_err, "output norm over the composed bound"))
}

fn product_modulus(ctx: &Ctx, tol: f64) -> Result<Outcome> {
    let g = grid256()?;
    let mut worst = 0.0f64;
    for (i, &a) in NORM_ANGLES.iter().enumerate() {
        let p = param(a)?;
        let (f, h) = (random_signal(&g, ctx.sub(2 * i as u64)), random_signal(&g, ctx.sub(2 * i as u64 + 1)));
        let pr = twisted_product(&[f.clone(), h.clone()], &p)?;
        for ((x, y), z) in pr.values().iter().zip(f.values()).zip(h.values()) {
            let want = y.norm() * z.norm();
            worst = worst.max((x.norm() - want).abs() / (1.0 + want));
        }
    }
    Ok(Outcome::within(worst, tol, "|product| against the product of moduli"))
}

fn convolution_symmetry(ctx: &Ctx, tol: f64) -> Result<Outcome> {
    let g = grid256()?;
    let mut worst = 0.0f64;
    for (i, &a) in NORM_ANGLES.iter().enumerate() {
        let p = param(a)?;
        let (w, u) = (random_signal(&g, ctx.sub(2 * i as u64)), random_signal(&g, ctx.sub(2 * i as u64 + 1)));
        worst = worst.max(rel_l2(&twisted_convolution(&w, &u, &p)?, &twisted_convolution(&u, &w, &p)?));
    }
    Ok(Outcome::within(worst, tol, "3 angles"))
}

// ---- oscillation ----

fn osc_setup() -> Result<(Grid64, CubeFamily<f64>)> {
    let g = grid256()?;
    let c = CubeFamily::dyadic(&g, 4)?;
    Ok((g, c))
}

fn sharp_pointwise(ctx: &Ctx, tol: f64) -> Result<Outcome> {
    let (g, c) = osc_setup()?;
    let mut worst = 0.0f64;
    for i in 0..5 {
        let b = random_signal(&g, ctx.sub(i));
        for &a in &NORM_ANGLES {
            let p = param(a)?;
            let mb = chirp_mul(&b, &p, Direction::Forward);
            let tw = real_parts(&sharp_maximal(&b, &c, Some(&p))?);
            worst = worst.max(pointwise_gap(&tw, &real_parts(&sharp_maximal(&mb, &c, None)?)));
            let brute = oracles::sharp_maximal(&oracles::chirp(&b, p.kappa()), c.cubes());
            worst = worst.max(pointwise_gap(&tw, &brute));
        }
    }
    Ok(Outcome::within(worst, tol, "two paths plus a brute-force cube scan"))
}

fn carleson_pointwise(ctx: &Ctx, tol: f64) -> Result<Outcome> {
    let g = grid256()?;
    let mut worst = 0.0f64;
    for i in 0..3 {
        let b = random_signal(&g, ctx.sub(i));
        for &a in &NORM_ANGLES {
            let p = param(a)?;
            let mb = chirp_mul(&b, &p, Direction::Forward);
            for t in [0.0625, 0.25, 1.0] {
                let tw = psi_alpha(&b, &Kernel::MexicanHat, t, Some(&p))?;
                let cl = convolve(&mb, &sample_kernel(&g, &Kernel::MexicanHat, t)?);
                worst = worst.max(pointwise_gap(&moduli(&tw), &moduli(&cl)));
            }
        }
    }
    Ok(Outcome::within(worst, tol, "mexican hat, 3 scales, 3 signals x 3 angles"))
}

fn bmo_two_path(ctx: &Ctx, tol: f64) -> Result<Outcome> {
    let (g, c) = osc_setup()?;
    let mut worst = 0.0f64;
    for i in 0..20 {
        let b = random_signal(&g, ctx.sub(i));
        for &a in &NORM_ANGLES {
            let p = param(a)?;
            let mb = chirp_mul(&b, &p, Direction::Forward);
            for r in [1.0, 2.0] {
                let tw = bmo_alpha_norm(&b, &c, Some(&p), r)?;
                worst = worst.max(rel(tw, bmo_norm(&mb, &c, r)?));
                if i < 3 {
                    worst = worst.max(rel(tw, oracles::bmo(&oracles::chirp(&b, p.kappa()), c.cubes(), r)));
                }
            }
        }
    }
    Ok(Outcome::within(worst, tol, "r in {1,2}, 20 signals x 3 angles, brute-force oracle on 3"))
}

fn hardy_two_path(ctx: &Ctx, tol: f64) -> Result<Outcome> {
    let g = grid256()?;
    let bank = build_bank(&g, -1, 4, Profile::Partition)?;
    let mut worst = 0.0f64;
    for i in 0..20 {
        let f = random_signal(&g, ctx.sub(i));
        for &a in &NORM_ANGLES {
            let p = param(a)?;
            let mf = chirp_mul(&f, &p, Direction::Forward);
            for e in [0.5, 1.0] {
                worst = worst.max(rel(
                    hardy_square_quasinorm(&f, &bank, Some(&p), e)?,
                    hardy_square_quasinorm(&mf, &bank, None, e)?,
                ));
            }
        }
    }
    Ok(Outcome::within(worst, tol, "exponents 1/2 and 1, 20 signals x 3 angles"))
}

fn chirped_constants(_: &Ctx, tol: f64) -> Result<Outcome> {
    let (g, c) = osc_setup()?;
    let mut worst = 0.0f64;
    for &a in &NORM_ANGLES {
        let p = param(a)?;
        let b = chirp_mul(&Signal64::from_fn(g, |_| Complex::new(0.7, -0.2)), &p, Direction::Inverse);
        worst = worst
            .max(bmo_alpha_norm(&b, &c, Some(&p), 1.0)?)
            .max(lp_norm(&sharp_maximal(&b, &c, Some(&p))?, f64::INFINITY))
            .max(carleson_score(&b, Some(&p), &Kernel::MexicanHat, &default_scales(&g), &c)?);
    }
    Ok(Outcome::within(worst, tol, "largest of the three scores on chirped constants"))
}

fn atom_draws(ctx: &Ctx, count: u64) -> Result<Vec<(Cube, f64, f64, f64, u64)>> {
    let mut r = rng(ctx.sub(0));
    let ps = [1.0, 0.75, 0.5, 0.4];
    let qs = [2.0, 4.0, f64::INFINITY];
    Ok((0..count)
        .map(|i| {
            let side = if r.random_bool(0.5) { 32 } else { 64 };
            let offset = r.random_range(0..256 / side) * side;
            let pe = ps[r.random_range(0..ps.len())];
            let q = qs[r.random_range(0..qs.len())];
            (Cube { offset: [offset, 0], side }, pe, q, r.random_range(0.4..2.7), ctx.sub(i + 1))
        })
        .collect())
}

fn atoms_round_trip(ctx: &Ctx, tol: f64) -> Result<Outcome> {
    let g = grid256()?;
    let mut failed = 0;
    for (cube, pe, q, a, seed) in atom_draws(ctx, 50)? {
        let p = param(a)?;
        let atom = synthesize_atom(&g, &cube, pe, q, Some(&p), seed)?;
        if !validate_atom(&atom, &cube, pe, q, Some(&p))?.pass {
            failed += 1;
        }
    }
    Ok(Outcome::within(failed as f64, tol, "failed validations over 50 (cube, p, q, angle) draws"))
}

fn atoms_moments(ctx: &Ctx, tol: f64) -> Result<Outcome> {
    let g = grid256()?;
    let mut worst = 0.0f64;
    for (cube, pe, q, a, seed) in atom_draws(ctx, 10)? {
        let p = param(a)?;
        let atom = synthesize_atom(&g, &cube, pe, q, Some(&p), seed)?;
        let chirped = oracles::chirp(&atom, p.kappa());
        let order = frlp_core::oscillation::moment_order(pe, 1);
        for gamma in 0..=order as i32 {
            let m: Complex<f64> =
                chirped.iter().enumerate().map(|(i, v)| v * g.coordinate(i).powi(gamma)).sum::<Complex<f64>>() * g.spacing();
            worst = worst.max(m.norm());
        }
    }
    Ok(Outcome::within(worst, tol, "chirped moments by direct quadrature, 10 atoms"))
}

/// `a log(|x - c| + Δx) + (a/2) e^{-x²}`, chirped back to the FrFT side.
pub fn log_signal(g: &Grid64, p: &FracParam<f64>, c: f64, a: f64) -> Signal64 {
    let dx = g.spacing();
    let b = Signal64::from_fn(*g, |x| Complex::new(a * ((x[0] - c).abs() + dx).ln() + 0.5 * a * (-x[0] * x[0]).exp(), 0.0));
    chirp_mul(&b, p, Direction::Inverse)
}

/// Level-set thresholds for an amplitude-`a` logarithm.
pub fn jn_lambdas(a: f64) -> Vec<f64> {
    (0..12).map(|k| a * (1.0 + 0.3 * k as f64)).collect()
}

fn john_nirenberg(ctx: &Ctx, _: f64) -> Result<Outcome> {
    let g = make_grid(1, 8.0, 4096)?;
    let p = param(0.9)?;
    let cube = Cube { offset: [0, 0], side: 4096 };
    let mut r = rng(ctx.sub(0));
    let mut all = true;
    let mut worst_r2 = 1.0f64;
    for _ in 0..5 {
        let a = r.random_range(0.5..2.0);
        let b = log_signal(&g, &p, r.random_range(-2.0..2.0), a);
        let prof = john_nirenberg_profile(&b, Some(&p), &cube, &jn_lambdas(a))?;
        all &= prof.pass;
        worst_r2 = worst_r2.min(prof.r_squared);
    }
    Ok(Outcome::verdict(all, 1.0 - worst_r2, "1 - smallest R^2 of the log-fraction fit over 5 signals"))
}

fn score_ranks(ctx: &Ctx, tol: f64) -> Result<Outcome> {
    let (g, c) = osc_setup()?;
    let p = param(1.1)?;
    let scales = default_scales(&g);
    let corpus = bmo_corpus(&g, 16, Some(&p), ctx.sub(0));
    let scores = corpus
        .iter()
        .map(|b| stability_scores(b, Some(&p), 1.0, &Kernel::MexicanHat, &scales, &c))
        .collect::<Result<Vec<_>>>()?;
    let rho = min_rank_correlation(&scores);
    Ok(Outcome::verdict(rho >= tol, rho, "smallest Spearman correlation between the three scores, 16 signals"))
}

// ---- limits ----

fn classical_limit(_: &Ctx, _: f64) -> Result<Outcome> {
    let g = make_grid(1, 8.0, 512)?;
    let bank = build_bank(&g, -1, 4, Profile::Partition)?;
    let f = gaussian(&g, [0.3, 0.0], 1.0, Complex::new(1.0, 0.0));
    let prof = classical_limit_profile(&f, &bank, &smoothstep(1.0, 2.0), 2, 28)?;
    let last = prof.entries.last().map(|e| e.metrics.iter().cloned().fold(0.0, f64::max)).unwrap_or(f64::NAN);
    Ok(Outcome::verdict(prof.pass, last, "largest final error over the gated metrics"))
}

fn singular_limit(_: &Ctx, _: f64) -> Result<Outcome> {
    let g = make_grid(1, 8.0, 1024)?;
    let f = gaussian(&g, [0.0, 0.0], 1.5, Complex::new(1.0, 0.2));
    let mut pass = true;
    let mut err = 0.0f64;
    for phi in [gauss(1.0), lp_bump()] {
        let prof = singular_boundary_profile(&f, &phi, 1.0, 30)?;
        pass &= prof.pass;
        if let Some(e) = prof.metric("error").and_then(|v| v.last().copied()) {
            err = err.max(e);
        }
    }
    Ok(Outcome::verdict(pass, err, "final error against Phi(0) f, gaussian and annular profiles"))
}

fn regimes(_: &Ctx, tol: f64) -> Result<Outcome> {
    let cfg = RegimeConfig::default();
    let mut worst = 0.0f64;
    for (a, want) in [(FRAC_PI_2, Regime::Classical), (0.05, Regime::Warning), (PI / 3.0, Regime::EffectiveFractional)] {
        let p = param(a)?;
        if classify_regime(&p, &cfg) != want {
            worst = f64::INFINITY;
        }
        let d = Descriptors::of(&p);
        let (s, k, dev) = oracles::descriptors(a);
        worst = worst.max((d.s - s).abs()).max((d.kappa - k).abs()).max((d.deviation - dev).abs());
    }
    Ok(Outcome::within(worst, tol, "pi/2, 0.05 and pi/3 against hand-computed descriptors"))
}

macro_rules! entry {
    ($id:expr, $sev:ident, $tol:expr, $run:expr, $anchor:expr, $generator:expr) => {
        Entry { id: $id, anchor: $anchor, generator: $generator, tolerance: $tol, severity: Severity::$sev, run: $run }
    };
}

/// Every registered check, in report order.
pub fn registry() -> Vec<Entry> {
    vec![
        entry!("frft.chirp.isometry", Exact, 1e-14, chirp_isometry,
            "||M_a f||_p = ||f||_p for every p", "L=8, N=256, random complex signals"),
        entry!("frft.kernel.quadrature", Exact, 1e-8, kernel_quadrature,
            "F_a f equals the integral of f against its chirp kernel", "L=4, N=64, random Gaussian wave packets"),
        entry!("frft.resampled.quadrature", Exact, 1e-8, resampled_quadrature,
            "chirp-z resampling evaluates the same kernel integral", "L=4, N=64, random Gaussian wave packets"),
        entry!("frft.plancherel", Exact, 1e-9, plancherel,
            "||F_a f||_2 = ||f||_2", "L=8, N=256, random complex signals"),
        entry!("frft.roundtrip", Exact, 1e-10, roundtrip,
            "F_a^{-1} F_a f = f", "L=8, N=256, random complex signals"),
        entry!("frft.classical", Exact, 1e-10, classical_angle,
            "F_{pi/2} is the Fourier transform", "L=8, N=256, random Gaussian wave packets"),
        entry!("frft.sampling.guard", Exact, 0.0, sampling_guard,
            "chirps with |cot a| L/2 above 0.9 Nyquist are rejected", "L=2, N=16, six chirp slopes"),
        entry!("multiplier.routes.agree", Exact, 1e-9, routes_agree,
            "F_a^{-1} m F_a = M_a^{-1} T_{m_a} M_a with m_a(x) = m(x sin a)", "L=8, N=256, 4 symbols, a in [0.35, 2.8]"),
        entry!("multiplier.opnorm.agree", Exact, 1e-8, operator_norms,
            "||T_m^a||_{2->2} = ||T_{m_a}||_{2->2}", "L=8, N=256, power iteration from a covariant seed"),
        entry!("conditions.marcinkiewicz.covering", Empirical, 1.0, marcinkiewicz,
            "A(m_a) <= C A(m) and A(m) <= C A(m_a) with C the covering count", "smoothstep(0.7, 2.6), levels -2..3, 4 angles"),
        entry!("conditions.mihlin.rescaling", Exact, 5e-3, mihlin,
            "annular derivative norms of m_a are those of m at radius R sin a", "gauss(0.7) smoothstep(0.2, 1.5), panels 4 and 8"),
        entry!("lp.conjugation.pointwise", Exact, 1e-14, lp_blocks_pointwise,
            "|Delta_{j,a} f| = |Delta_j (M_a f)|", "L=8, N=256, random complex signals"),
        entry!("lp.square.pointwise", Exact, 1e-14, lp_square_pointwise,
            "S_a f = S(M_a f)", "L=8, N=256, random complex signals"),
        entry!("lp.reconstruction", Exact, 1e-10, lp_reconstruction,
            "S_{0,a} f + sum_j Delta_{j,a} f = f inside the bank coverage", "L=8, N=512, band 30 signals chirped back"),
        entry!("lp.frame.tight", Exact, 1e-12, frame_tight,
            "sum_j phi_j^2 = 1 on the covered band", "L=8, N=512"),
        entry!("lp.besov.two_path", Exact, 1e-14, besov_two_path,
            "||f||_{B^s_{p,q,a}} = ||M_a f||_{B^s_{p,q}}", "L=8, N=256, levels 1..3"),
        entry!("lp.triebel.two_path", Exact, 1e-14, triebel_two_path,
            "||f||_{F^s_{p,q,a}} = ||M_a f||_{F^s_{p,q}}", "L=8, N=256, levels 1..3"),
        entry!("lp.sobolev.two_path", Exact, 1e-14, sobolev_two_path,
            "||f||_{W^{s,p}_a} = ||M_a f||_{W^{s,p}}", "L=8, N=256, levels 1..3"),
        entry!("lp.lipschitz.two_path", Exact, 1e-14, lipschitz_two_path,
            "||f||_{Lip_{g,a}} = ||M_a f||_{Lip_g}", "L=8, N=256, levels 1..3"),
        entry!("dyadic.square.pointwise", Exact, 1e-14, dyadic_square_pointwise,
            "S_dy^a f = S_dy(M_a f)", "L=8, N=256, full dyadic tree"),
        entry!("dyadic.haar.gram", Exact, 1e-12, haar_gram,
            "{e_I^a} and {h_I^a} are orthonormal", "L=4, N=64, a=1.3"),
        entry!("dyadic.haar.parseval", Exact, 1e-10, haar_parseval,
            "||f||_2^2 = sum |<f, h_I^a>|^2 plus the coarse terms", "L=8, N=256, random complex signals"),
        entry!("dyadic.haar.reconstruction", Exact, 1e-10, haar_reconstruction,
            "f is recovered from its twisted Haar coefficients", "L=8, N=256, random complex signals"),
        entry!("dyadic.martingale.decomposition", Exact, 1e-12, martingale,
            "f = E_{k0}^a f + sum_k D_k^a f", "L=8, N=256, full dyadic tree"),
        entry!("dyadic.mixed.equality", Exact, 1e-8, mixed_equality,
            "||D_k^a Delta_j^a||_{2->2} = ||D_k Delta_j||_{2->2}", "L=1, N=256, levels -2..7, a=1.1"),
        entry!("dyadic.mixed.decay", Empirical, -0.4, mixed_decay,
            "||D_k^a Delta_j^a||_{2->2} decays like 2^{-|j-k|/2}", "L=1, N=1024, levels -2..9, a=1.1"),
        entry!("potentials.semigroup.riesz", Exact, 1e-9, semigroup_riesz,
            "I_s I_t = I_{s+t}", "L=8, N=256, DC-free signals, three frames"),
        entry!("potentials.semigroup.bessel", Exact, 1e-9, semigroup_bessel,
            "J_s J_t = J_{s+t}", "L=8, N=256, DC-free signals, three frames"),
        entry!("potentials.semigroup.laplacian", Exact, 1e-9, semigroup_laplacian,
            "(-Laplacian)^z (-Laplacian)^w = (-Laplacian)^{z+w}", "L=8, N=256, DC-free signals, three frames"),
        entry!("potentials.semigroup.commutation", Exact, 1e-9, semigroup_commutation,
            "I_s (-Laplacian)^z = I_{s-2z} for s > 2z", "L=8, N=256, DC-free signals, three frames"),
        entry!("potentials.bessel.contraction", Empirical, 1e-10, bessel_contraction,
            "||J_{s,a} f||_{L^r_a} <= ||f||_{L^r_a}", "L=8, N=256, r in {1,2,4,inf}"),
        entry!("potentials.kato_ponce.transfer", Exact, 1e-10, kato_ponce_transfer,
            "D^s_a(w *_a u) = M_a^{-1} D^s((M_a w) * (M_a u))", "L=8, N=256, random complex pairs"),
        entry!("potentials.kato_ponce.region", Exact, 0.0, kato_ponce_lattice_check,
            "allowed iff s > max(0, n/r - n) or s in {0, 2, 4, ...}", "200-point (s, r) lattice, n in 1..3"),
        entry!("potentials.pullback.isometry", Exact, 1e-13, pullback_isometry,
            "||I_{s,a} f||_{L^2_a} = ||I_s F_a f||_2", "L=8, N=256, random complex signals"),
        entry!("potentials.hls.stability", Empirical, f64::INFINITY, hls,
            "||I_{s,a} f||_{L^q_a} <= C ||f||_{L^p_a} with 1/p - 1/q = s", "L=16, N=256 and 1024, Gaussian family"),
        entry!("potentials.chain.bound", Empirical, 1.0 + 1e-10, chain,
            "||J A I T f||_q <= C_A C_HLS C_m ||f||_p", "L=16, N=256, gauss and bump stages"),
        entry!("potentials.twisted_product.modulus", Exact, 1e-15, product_modulus,
            "|Pi_a(f, h)| = |f| |h|", "L=8, N=256, random complex pairs"),
        entry!("potentials.twisted_convolution.symmetry", Exact, 1e-12, convolution_symmetry,
            "w *_a u = u *_a w", "L=8, N=256, random complex pairs"),
        entry!("oscillation.sharp.pointwise", Exact, 1e-14, sharp_pointwise,
            "M^#_a b = M^#(M_a b)", "L=8, N=256, dyadic cubes of side >= 4"),
        entry!("oscillation.carleson.pointwise", Exact, 1e-14, carleson_pointwise,
            "|Psi_t^a b| = |Psi_t * (M_a b)|", "L=8, N=256, mexican hat"),
        entry!("oscillation.bmo.two_path", Exact, 1e-14, bmo_two_path,
            "||b||_{BMO_a} = ||M_a b||_{BMO}", "L=8, N=256, dyadic cubes of side >= 4"),
        entry!("oscillation.hardy.two_path", Exact, 1e-14, hardy_two_path,
            "||S_a f||_{L^p} = ||S(M_a f)||_{L^p}", "L=8, N=256, levels -1..4"),
        entry!("oscillation.chirped_constant.vanish", Exact, 1e-12, chirped_constants,
            "chirped constants have zero BMO_a, sharp and Carleson scores", "L=8, N=256, 3 angles"),
        entry!("oscillation.atoms.round_trip", Exact, 0.0, atoms_round_trip,
            "M_a^{-1} of a classical atom is an FrFT atom", "L=8, N=256, random cubes, p, q and angles"),
        entry!("oscillation.atoms.moments", Exact, 1e-12, atoms_moments,
            "chirped moments of an FrFT atom vanish", "L=8, N=256, random cubes, p, q and angles"),
        entry!("oscillation.john_nirenberg", Empirical, 1.0, john_nirenberg,
            "|{|b - b_Q| > l}| decays exponentially in l", "L=8, N=4096, chirped logarithms"),
        entry!("oscillation.scores.rank", Empirical, 0.5, score_ranks,
            "the BMO, Carleson and sharp scores are equivalent", "L=8, N=256, 16-signal BMO corpus"),
        entry!("limits.classical", Empirical, 1e-6, classical_limit,
            "T_{m,a} f -> T_m f as a -> pi/2", "L=8, N=512, a = pi/2 + 2^-l, l = 1..28"),
        entry!("limits.singular", Empirical, 1e-6, singular_limit,
            "S^Phi_{R,a} f -> Phi(0) f as a -> 0", "L=8, N=1024, a = 2^-l, l = 1..30"),
        entry!("limits.regimes", Exact, 1e-15, regimes,
            "regime and descriptors (s, cot a, |1-s| + |cot a|) of three angles", "a in {pi/2, 0.05, pi/3}"),
    ]
}

/// One entry's line in the report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntryResult {
    pub id: String,
    pub anchor: String,
    pub generator: String,
    pub severity: Severity,
    pub tolerance: Option<f64>,
    pub gated: bool,
    pub pass: bool,
    pub max_err: Option<f64>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub gated_failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub seed: u64,
    pub strict: bool,
    pub tolerance_scale: f64,
    pub filter: Option<String>,
    pub environment: String,
    pub config: serde_json::Value,
    pub entries: Vec<EntryResult>,
    pub summary: Summary,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Wall-clock time per entry, kept out of the report so it stays reproducible.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timing {
    pub id: String,
    pub seconds: f64,
}

/// Glob match supporting `*` and `?`.
pub fn glob_match(pattern: &str, text: &str) -> bool {
    let (p, t): (Vec<char>, Vec<char>) = (pattern.chars().collect(), text.chars().collect());
    let (mut pi, mut ti) = (0, 0);
    let (mut star, mut mark) = (None, 0);
    while ti < t.len() {
        if pi < p.len() && (p[pi] == '?' || p[pi] == t[ti]) {
            pi += 1;
            ti += 1;
        } else if pi < p.len() && p[pi] == '*' {
            star = Some(pi);
            pi += 1;
            mark = ti;
        } else if let Some(s) = star {
            pi = s + 1;
            mark += 1;
            ti = mark;
        } else {
            return false;
        }
    }
    p[pi..].iter().all(|&c| c == '*')
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

/// Crate version, target and float model, hashed.
pub fn environment_digest() -> String {
    let text = format!(
        "{} {} {} {} f64-mantissa-{}",
        env!("CARGO_PKG_NAME"),
        env!("CARGO_PKG_VERSION"),
        std::env::consts::ARCH,
        std::env::consts::OS,
        f64::MANTISSA_DIGITS
    );
    Digest::default().bytes(text.as_bytes()).hex()
}

/// Exact tolerances are multiplied by `scale`; empirical thresholds are not.
fn scaled_tolerance(e: &Entry, scale: f64) -> f64 {
    match e.severity {
        Severity::Exact => e.tolerance * scale,
        Severity::Empirical => e.tolerance,
    }
}

/// Run every entry matching `filter` on the rayon pool.
pub fn run_suite(
    filter: Option<&str>,
    seed: u64,
    strict: bool,
    tolerance_scale: f64,
    config: serde_json::Value,
) -> (RunReport, Vec<Timing>) {
    let all = registry();
    let selected: Vec<&Entry> = all.iter().filter(|e| filter.is_none_or(|f| glob_match(f, e.id))).collect();
    let outcomes: Vec<(Result<Outcome>, f64)> = selected
        .par_iter()
        .map(|e| {
            let t0 = Instant::now();
            let ctx = Ctx { seed, id: e.id };
            let out = (e.run)(&ctx, scaled_tolerance(e, tolerance_scale));
            (out, t0.elapsed().as_secs_f64())
        })
        .collect();
    let mut entries = Vec::with_capacity(selected.len());
    let mut timings = Vec::with_capacity(selected.len());
    for (e, (out, secs)) in selected.iter().zip(outcomes) {
        let gated = e.severity == Severity::Exact || strict;
        let (pass, max_err, detail) = match out {
            Ok(o) => (o.pass, finite(o.max_err), o.detail),
            Err(err) => (false, None, format!("error: {err}")),
        };
        entries.push(EntryResult {
            id: e.id.into(),
            anchor: e.anchor.into(),
            generator: e.generator.into(),
            severity: e.severity,
            tolerance: finite(scaled_tolerance(e, tolerance_scale)),
            gated,
            pass,
            max_err,
            detail,
        });
        timings.push(Timing { id: e.id.into(), seconds: secs });
    }
    let passed = entries.iter().filter(|e| e.pass).count();
    let summary = Summary {
        total: entries.len(),
        passed,
        failed: entries.len() - passed,
        gated_failed: entries.iter().filter(|e| e.gated && !e.pass).count(),
    };
    let report = RunReport {
        schema_version: 1,
        seed,
        strict,
        tolerance_scale,
        filter: filter.map(String::from),
        environment: environment_digest(),
        config,
        entries,
        summary,
    };
    (report, timings)
}

/// A registered entry by id.
pub fn find(id: &str) -> Option<Entry> {
    registry().into_iter().find(|e| e.id == id)
}

/// Run one entry directly.
pub fn run_entry(id: &str, seed: u64) -> Option<Result<Outcome>> {
    let e = find(id)?;
    Some((e.run)(&Ctx { seed, id: e.id }, e.tolerance))
}
