use frlp_core::grid::lp_norm;
use frlp_core::signals::{random_schwartz, random_signal};
use frlp_core::{frft, make_grid, Complex, FracParam, Signal};
use proptest::prelude::*;
use std::f64::consts::PI;

/// Direct quadrature of the kernel integral
/// `c s^{-1/2} e^{iπu²κ} ∫ e^{-2πi x u / sin α} e^{iπx²κ} f(x) dx` at one `u`.
fn kernel_quadrature(f: &Signal<f64>, alpha: f64, u: f64) -> Complex<f64> {
    let (s, c) = alpha.sin_cos();
    let kappa = c / s;
    let g = f.grid();
    let dx = g.spacing();
    let mut acc = Complex::new(0.0, 0.0);
    for (k, v) in f.values().iter().enumerate() {
        let x = g.coordinate(k);
        let phase = -2.0 * PI * x * u / s + PI * x * x * kappa;
        acc += v * Complex::from_polar(dx, phase);
    }
    let unimodular = Complex::from_polar(1.0, s.signum() * PI / 4.0 - alpha / 2.0);
    acc * unimodular * s.abs().powf(-0.5) * Complex::from_polar(1.0, PI * u * u * kappa)
}

#[test]
fn matches_direct_kernel_quadrature() {
    let g = make_grid(1, 4.0f64, 64).unwrap();
    for (seed, alpha) in [(1u64, 0.5), (2, 1.0), (3, 1.3), (4, 2.2), (5, -1.0), (6, 4.0)] {
        let f = random_schwartz(&g, 3, seed);
        let p = FracParam::new(alpha).unwrap();
        let spec = frft(&f, &p).unwrap();
        let mut num = 0.0;
        let mut den = 0.0;
        for (m, v) in spec.values().iter().enumerate() {
            let u = spec.point(m)[0];
            let oracle = kernel_quadrature(&f, alpha, u);
            num += (v - oracle).norm_sqr();
            den += oracle.norm_sqr();
        }
        let rel = (num / den).sqrt();
        assert!(rel < 1e-8, "alpha={alpha}: relative error {rel}");
    }
}

#[test]
fn chirp_preserves_level_sets() {
    let g = make_grid(1, 8.0f64, 256).unwrap();
    let f = random_signal(&g, 12);
    let p = FracParam::new(0.8).unwrap();
    let h = frlp_core::chirp_mul(&f, &p, frlp_core::Direction::Forward);
    let (a, b) = (f.modulus(), h.modulus());
    for lambda in [0.1, 0.5, 1.0, 1.5, 2.5] {
        let ca = a.iter().filter(|&&v| v > lambda).count();
        let cb = b.iter().filter(|&&v| v > lambda).count();
        assert_eq!(ca, cb);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn chirp_isometry_all_exponents(seed in any::<u64>(), alpha in 0.05f64..3.1) {
        let g = make_grid(1, 8.0f64, 128).unwrap();
        let f = random_signal(&g, seed);
        let p = FracParam::new(alpha).unwrap();
        let h = frlp_core::chirp_mul(&f, &p, frlp_core::Direction::Forward);
        for q in [1.0, 1.5, 2.0, 4.0, f64::INFINITY] {
            let (a, b) = (lp_norm(&f, q), lp_norm(&h, q));
            prop_assert!((a - b).abs() <= 1e-14 * a);
        }
    }

    #[test]
    fn frft_is_unitary(seed in any::<u64>(), alpha in 0.3f64..2.8) {
        let g = make_grid(1, 8.0f64, 256).unwrap();
        let f = random_signal(&g, seed);
        let p = FracParam::new(alpha).unwrap();
        let r = frft(&f, &p).unwrap().lp_norm(2.0) / f.l2_norm();
        prop_assert!((r - 1.0).abs() <= 1e-9);
    }
}
