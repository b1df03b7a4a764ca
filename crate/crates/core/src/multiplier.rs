//! Classical and FrFT Fourier multipliers and the operator families built on
//! them: band selectors, Bochner–Riesz means, maximal and square-function
//! aggregates, almost-orthogonal sums.

use serde::Serialize;

use crate::error::{FrlpError, Result};
use crate::fft::apply_mask;
use crate::frft::{chirp_mul, ensure_sampling, Direction, FrftPlan};
use crate::grid::{lp_norm, FracParam, Signal};
use crate::scalar::{creal, Real};
use crate::symbol::{bochner_riesz_symbol, rescale_symbol, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    /// `F_α^{-1}(m F_α f)`
    Definition,
    /// `M_α^{-1} T_{m_α} M_α f`
    Conjugation,
}

/// `T_m f = (m f̂)^∨` on the centered grid.
pub fn apply_multiplier<T: Real>(m: &Symbol<T>, f: &Signal<T>) -> Result<Signal<T>> {
    let mask = m.sample_bounded(f.grid())?;
    Ok(apply_mask(f, &mask))
}

/// `M_α^{-1} T_{m_α} M_α f` without the chirp sampling guard.
pub fn conjugated_multiplier<T: Real>(m: &Symbol<T>, f: &Signal<T>, p: &FracParam<T>) -> Result<Signal<T>> {
    let g = chirp_mul(f, p, Direction::Forward);
    let h = apply_multiplier(&rescale_symbol(m, p), &g)?;
    Ok(chirp_mul(&h, p, Direction::Inverse))
}

/// `T_{m,α} f` through either route.
pub fn apply_frft_multiplier<T: Real>(
    m: &Symbol<T>,
    f: &Signal<T>,
    p: &FracParam<T>,
    route: Route,
) -> Result<Signal<T>> {
    match route {
        Route::Conjugation => {
            ensure_sampling(f.grid(), p)?;
            conjugated_multiplier(m, f, p)
        }
        Route::Definition => {
            let plan = FrftPlan::new(f.grid(), p)?;
            let mut spec = plan.forward(f)?;
            let mask: Vec<_> = (0..spec.values().len()).map(|i| m.eval(spec.point(i))).collect();
            let max = mask.iter().map(|z| z.norm()).fold(T::zero(), T::max);
            if mask.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) || max > T::of(1e12) {
                return Err(FrlpError::SymbolUnbounded { name: m.name().to_string(), max: max.to_f64() });
            }
            for (v, w) in spec.values_mut().iter_mut().zip(&mask) {
                *v = *v * *w;
            }
            plan.inverse(&spec)
        }
    }
}

/// `S^Φ_{R,α} f = F_α^{-1}(Φ(·/R) F_α f)`.
pub fn band_selector<T: Real>(phi: &Symbol<T>, radius: T, f: &Signal<T>, p: &FracParam<T>) -> Result<Signal<T>> {
    apply_frft_multiplier(&phi.dilate(radius), f, p, Route::Definition)
}

/// Bochner–Riesz mean `B^λ_{R,α} f`.
pub fn bochner_riesz<T: Real>(lambda: T, radius: T, f: &Signal<T>, p: &FracParam<T>) -> Result<Signal<T>> {
    if !(lambda >= T::zero()) || !(radius > T::zero()) {
        return Err(FrlpError::InvalidArgument("Bochner-Riesz needs lambda >= 0 and R > 0".into()));
    }
    apply_frft_multiplier(&bochner_riesz_symbol(lambda, radius), f, p, Route::Definition)
}

/// The dilated family `m(2^{-j} ξ)` for `j` in `levels`.
pub fn dilated_family<T: Real>(m: &Symbol<T>, levels: impl IntoIterator<Item = i32>) -> Vec<Symbol<T>> {
    levels.into_iter().map(|j| m.dilate(T::of(2f64.powi(j)))).collect()
}

fn real_signal<T: Real>(f: &Signal<T>, values: Vec<T>) -> Signal<T> {
    Signal::from_parts(*f.grid(), values.into_iter().map(creal).collect())
}

/// Pointwise `sup_k |T_k^α f|`, stored as a real signal.
pub fn maximal_over_family<T: Real>(family: &[Symbol<T>], f: &Signal<T>, p: &FracParam<T>) -> Result<Signal<T>> {
    let mut sup = vec![T::zero(); f.grid().len()];
    for m in family {
        let t = conjugated_multiplier(m, f, p)?;
        for (s, v) in sup.iter_mut().zip(t.values()) {
            *s = s.max(v.norm());
        }
    }
    Ok(real_signal(f, sup))
}

/// Pointwise `(Σ_j |T_j^α f|²)^{1/2}`, stored as a real signal.
pub fn rough_square_function<T: Real>(family: &[Symbol<T>], f: &Signal<T>, p: &FracParam<T>) -> Result<Signal<T>> {
    let mut acc = vec![T::zero(); f.grid().len()];
    for m in family {
        let t = conjugated_multiplier(m, f, p)?;
        for (a, v) in acc.iter_mut().zip(t.values()) {
            *a = *a + v.norm_sqr();
        }
    }
    Ok(real_signal(f, acc.into_iter().map(|a| a.sqrt()).collect()))
}

/// Pointwise `(Σ_j |T_{m_j}^α f_j|²)^{1/2}` for paired symbols and inputs.
pub fn vector_valued_aggregate<T: Real>(pairs: &[(Symbol<T>, Signal<T>)], p: &FracParam<T>) -> Result<Signal<T>> {
    let first = pairs.first().ok_or_else(|| FrlpError::InvalidArgument("empty family".into()))?;
    let mut acc = vec![T::zero(); first.1.grid().len()];
    for (m, f) in pairs {
        f.ensure_same_grid(&first.1)?;
        let t = conjugated_multiplier(m, f, p)?;
        for (a, v) in acc.iter_mut().zip(t.values()) {
            *a = *a + v.norm_sqr();
        }
    }
    Ok(real_signal(&first.1, acc.into_iter().map(|a| a.sqrt()).collect()))
}

#[derive(Debug, Clone)]
pub struct AlmostOrthogonalReport<T> {
    pub sum: Signal<T>,
    pub levels: Vec<i32>,
    /// `‖T_j^α f‖_q` per term.
    pub term_norms: Vec<T>,
    /// `‖S_K - S_k‖_q` from each partial sum to the full sum.
    pub tail_norms: Vec<T>,
}

/// Largest `|m|` on grid frequencies outside `2^{j-1} ≤ |ξ| ≤ 2^{j+1}`.
pub fn annulus_leak<T: Real>(m: &Symbol<T>, j: i32, grid: &crate::grid::GridSpec<T>) -> T {
    let lo = T::of(2f64.powi(j - 1));
    let hi = T::of(2f64.powi(j + 1));
    (0..grid.len())
        .filter(|&i| {
            let r = grid.freq_norm(i);
            r < lo || r > hi
        })
        .map(|i| m.eval(grid.freq_point(i)).norm())
        .fold(T::zero(), T::max)
}

/// `Σ_j T_j^α f` for annulus-supported symbols, with per-term norms.
pub fn almost_orthogonal_sum<T: Real>(
    family: &[(i32, Symbol<T>)],
    f: &Signal<T>,
    p: &FracParam<T>,
    q: T,
) -> Result<AlmostOrthogonalReport<T>> {
    for (j, m) in family {
        let leak = annulus_leak(m, *j, f.grid());
        if leak > T::of(1e-12) {
            return Err(FrlpError::SupportViolation { name: m.name().to_string(), leak: leak.to_f64() });
        }
    }
    let mut partials = Vec::with_capacity(family.len());
    let mut term_norms = Vec::with_capacity(family.len());
    let mut sum = Signal::zeros(*f.grid());
    for (_, m) in family {
        let t = apply_frft_multiplier(m, f, p, Route::Conjugation)?;
        term_norms.push(lp_norm(&t, q));
        sum = sum.add(&t);
        partials.push(sum.clone());
    }
    let tail_norms = partials.iter().map(|s| lp_norm(&sum.sub(s), q)).collect();
    Ok(AlmostOrthogonalReport { sum, levels: family.iter().map(|(j, _)| *j).collect(), term_norms, tail_norms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fft::fourier;
    use crate::grid::{make_grid, GridSpec};
    use crate::scalar::Complex;
    use crate::signals::{gaussian, random_bandlimited, random_signal};
    use crate::symbol::{annulus, ball, gauss, lp_bump, smoothstep, translation};
    use std::f64::consts::PI;

    fn grid() -> GridSpec<f64> {
        make_grid(1, 8.0f64, 256).unwrap()
    }

    #[test]
    fn identity_symbol() {
        let g = grid();
        let f = random_signal(&g, 1);
        let one = Symbol::real_radial("one", |_| 1.0);
        assert!(apply_multiplier(&one, &f).unwrap().sub(&f).l2_norm() < 1e-12);
        let p = FracParam::new(1.1).unwrap();
        for route in [Route::Definition, Route::Conjugation] {
            let out = apply_frft_multiplier(&one, &f, &p, route).unwrap();
            assert!(out.sub(&f).l2_norm() < 1e-12);
        }
    }

    #[test]
    fn translation_of_delta() {
        let g = grid();
        let dx = g.spacing();
        let delta = Signal::from_fn(g, |x| Complex::new(if x[0] == 0.0 { 1.0 } else { 0.0 }, 0.0));
        let out = apply_multiplier(&translation([5.0 * dx, 0.0]), &delta).unwrap();
        let k0 = g.index_of_coordinate(0.0);
        for (k, v) in out.values().iter().enumerate() {
            let want = if k == k0 + 5 { 1.0 } else { 0.0 };
            assert!((v - Complex::new(want, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn indicator_matches_direct_sinc_sum() {
        // The discrete oracle: the periodic kernel of the indicator of [-1,1]
        // is Δξ Σ_{|ξ_m|≤1} e^{2πi x ξ_m}, convolved directly in O(N²).
        let g = make_grid(1, 8.0f64, 128).unwrap();
        let f = gaussian(&g, [0.2, 0.0], 1.0, Complex::new(1.0, 0.0));
        let out = apply_multiplier(&ball(1.0), &f).unwrap();
        let n = g.samples();
        let freqs: Vec<f64> = (0..n).map(|m| g.frequency(m)).filter(|xi| xi.abs() <= 1.0).collect();
        let kernel = |x: f64| -> Complex<f64> {
            freqs.iter().map(|&xi| Complex::from_polar(g.freq_spacing(), 2.0 * PI * x * xi)).sum()
        };
        let mut err: f64 = 0.0;
        for k in 0..n {
            let x = g.coordinate(k);
            let direct: Complex<f64> =
                (0..n).map(|l| f.values()[l] * kernel(x - g.coordinate(l)) * g.spacing()).sum();
            err = err.max((direct - out.values()[k]).norm());
        }
        assert!(err < 1e-8, "{err}");
    }

    #[test]
    fn routes_agree() {
        let g = grid();
        let f = random_signal(&g, 4);
        let m = smoothstep(0.3, 2.5).product(&gauss(0.4));
        for a in [0.5, 1.1, 2.4, -0.8] {
            let p = FracParam::new(a).unwrap();
            let d = apply_frft_multiplier(&m, &f, &p, Route::Definition).unwrap();
            let c = apply_frft_multiplier(&m, &f, &p, Route::Conjugation).unwrap();
            assert!(d.sub(&c).l2_norm() / d.l2_norm() < 1e-9);
        }
    }

    #[test]
    fn aliased_chirp_rejected() {
        let g = make_grid(1, 16.0f64, 64).unwrap();
        let f = random_signal(&g, 1);
        let p = FracParam::new(0.05).unwrap();
        for route in [Route::Definition, Route::Conjugation] {
            assert!(matches!(
                apply_frft_multiplier(&gauss(1.0), &f, &p, route),
                Err(FrlpError::ChirpAliased { .. })
            ));
        }
    }

    #[test]
    fn selector_passband_edges() {
        let g = make_grid(1, 8.0f64, 512).unwrap();
        let p = FracParam::new(PI / 6.0).unwrap();
        let f = random_signal(&g, 2);
        let out = band_selector(&annulus(0.5, 2.0), 1.0, &f, &p).unwrap();
        let spec = fourier(&chirp_mul(&out, &p, Direction::Forward));
        let live: Vec<f64> =
            (0..g.len()).filter(|&i| spec.values()[i].norm() > 1e-10).map(|i| g.freq_norm(i)).collect();
        let lo = live.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = live.iter().cloned().fold(0.0, f64::max);
        // edges land within one frequency bin of R/(2 s_α) = 1 and 2R/s_α = 4
        assert!(lo >= 1.0 - 1e-12 && lo <= 1.0 + g.freq_spacing() + 1e-12);
        assert!(hi <= 4.0 + 1e-12 && hi > 4.0 - g.freq_spacing());
    }

    #[test]
    fn bochner_riesz_monotone_and_full_band() {
        let g = grid();
        let p = FracParam::new(1.2).unwrap();
        let f = random_signal(&g, 3);
        let full = bochner_riesz(0.0, 1e6, &f, &p).unwrap();
        assert!(full.sub(&f).l2_norm() / f.l2_norm() < 1e-10);
        let mut prev = f64::INFINITY;
        for lambda in [0.0, 0.5, 1.0, 2.0, 4.0] {
            let n = bochner_riesz(lambda, 3.0, &f, &p).unwrap().l2_norm();
            assert!(n <= prev + 1e-12);
            prev = n;
        }
        let mut prev = f64::INFINITY;
        for r in [2.0, 8.0, 32.0, 128.0, 1024.0] {
            let err = bochner_riesz(1.0, r, &f, &p).unwrap().sub(&f).l2_norm();
            assert!(err < prev);
            prev = err;
        }
        assert!(bochner_riesz(-1.0, 1.0, &f, &p).is_err());
    }

    #[test]
    fn maximal_family_transfer() {
        let g = grid();
        let f = random_signal(&g, 5);
        let p = FracParam::new(0.9).unwrap();
        let fam = dilated_family(&lp_bump(), -1..4);
        let lhs = maximal_over_family(&fam, &f, &p).unwrap();
        let resc: Vec<_> = fam.iter().map(|m| rescale_symbol(m, &p)).collect();
        let rhs = maximal_over_family(&resc, &chirp_mul(&f, &p, Direction::Forward), &FracParam::classical()).unwrap();
        assert!(lhs.sub(&rhs).values().iter().all(|v| v.norm() < 1e-14));
        let single = maximal_over_family(&fam[..1], &f, &p).unwrap();
        let direct = conjugated_multiplier(&fam[0], &f, &p).unwrap();
        for (a, b) in single.values().iter().zip(direct.values()) {
            assert!((a.re - b.norm()).abs() < 1e-15);
        }
    }

    #[test]
    fn nested_balls_on_positive_spectrum() {
        // f̂ ≥ 0 and nested symbols: the largest ball dominates at every point where
        // the output is evaluated at the spectrum's center of symmetry.
        let g = grid();
        let f = gaussian(&g, [0.0, 0.0], 0.5, Complex::new(1.0, 0.0));
        let fam: Vec<_> = [1.0, 2.0, 4.0].iter().map(|&r| ball(r)).collect();
        let sup = maximal_over_family(&fam, &f, &FracParam::classical()).unwrap();
        let big = apply_multiplier(&fam[2], &f).unwrap();
        let k0 = g.index_of_coordinate(0.0);
        assert!((sup.values()[k0].re - big.values()[k0].norm()).abs() < 1e-14);
    }

    #[test]
    fn rough_square_function_transfer() {
        let g = grid();
        let f = random_signal(&g, 6);
        let p = FracParam::new(2.0).unwrap();
        let fam = dilated_family(&lp_bump(), 0..4);
        let lhs = rough_square_function(&fam, &f, &p).unwrap();
        let resc: Vec<_> = fam.iter().map(|m| rescale_symbol(m, &p)).collect();
        let rhs = rough_square_function(&resc, &chirp_mul(&f, &p, Direction::Forward), &FracParam::classical()).unwrap();
        assert!(lhs.sub(&rhs).values().iter().all(|v| v.norm() < 1e-14));
        let allpass = [Symbol::real_radial("one", |_| 1.0)];
        let single = rough_square_function(&allpass, &f, &p).unwrap();
        for (a, b) in single.values().iter().zip(f.values()) {
            assert!((a.re - b.norm()).abs() < 1e-12);
        }
    }

    #[test]
    fn vector_valued_transfer() {
        let g = grid();
        let p = FracParam::new(1.4).unwrap();
        let pairs: Vec<_> = (0..3).map(|j| (lp_bump().dilate(2f64.powi(j)), random_signal(&g, j as u64))).collect();
        let lhs = vector_valued_aggregate(&pairs, &p).unwrap();
        let classical: Vec<_> = pairs
            .iter()
            .map(|(m, f)| (rescale_symbol(m, &p), chirp_mul(f, &p, Direction::Forward)))
            .collect();
        let rhs = vector_valued_aggregate(&classical, &FracParam::classical()).unwrap();
        assert!(lhs.sub(&rhs).values().iter().all(|v| v.norm() < 1e-14));
    }

    #[test]
    fn almost_orthogonal_parseval_and_support() {
        let g = make_grid(1, 8.0f64, 512).unwrap();
        let p = FracParam::new(1.0).unwrap();
        let f = random_signal(&g, 8);
        // annuli [1,2] and [4,8] sit in levels 1 and 3 and are 1-separated
        let fam = vec![(1, annulus(1.0, 2.0)), (3, annulus(4.0, 8.0))];
        let rep = almost_orthogonal_sum(&fam, &f, &p, 2.0).unwrap();
        let total = rep.sum.l2_norm().powi(2);
        let parts: f64 = rep.term_norms.iter().map(|t| t * t).sum();
        assert!((total - parts).abs() < 1e-10 * total);
        assert_eq!(*rep.tail_norms.last().unwrap(), 0.0);
        let bad = vec![(1, annulus(0.1, 2.0))];
        assert!(matches!(almost_orthogonal_sum(&bad, &f, &p, 2.0), Err(FrlpError::SupportViolation { .. })));
    }

    #[test]
    fn partition_family_reconstructs() {
        let g = make_grid(1, 8.0f64, 512).unwrap();
        let p = FracParam::new(1.0).unwrap();
        // band-limited on the FrFT side: M_α f has spectrum in 0.3 ≤ |ξ| ≤ 6
        let g0 = random_bandlimited(&g, 6.0, 3);
        let g0 = apply_multiplier(&Symbol::real_radial("hp", |r| if r >= 0.3 { 1.0 } else { 0.0 }), &g0).unwrap();
        let f = chirp_mul(&g0, &p, Direction::Inverse);
        // the bumps telescope to Θ(2^{-4}|u|) - Θ(2^{3}|u|), equal to 1 on 1/4 ≤ |u| ≤ 16,
        // which is 1/(4 s_α) ≤ |ξ| ≤ 16/s_α on the classical side
        let fam: Vec<_> = (-3..5).map(|j| (j, lp_bump().dilate(2f64.powi(j)))).collect();
        let rep = almost_orthogonal_sum(&fam, &f, &p, 2.0).unwrap();
        let resid = rep.sum.sub(&f).l2_norm() / f.l2_norm();
        assert!(resid < 1e-10, "{resid}");
    }
}
