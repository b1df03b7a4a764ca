//! One line per acceptance criterion. Each criterion recomputes its quantities
//! through direct reference sums where one exists and compares them with the
//! library paths at the stated tolerance.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::path::Path;
use std::process::{Command, Output};
use std::time::Instant;

use rand::Rng;

use frlp_cli::oracles;
use frlp_cli::registry::{jn_lambdas, kato_ponce_lattice, log_signal, probe_pairs};
use frlp_core::conditions::{marcinkiewicz_invariance, mihlin_rescaling_gap};
use frlp_core::dyadic::{
    difference, dyadic_square_function, expectation, haar_function, haar_transform, inverse_haar,
    mixed_orthogonality_probe, DyadicTree,
};
use frlp_core::grid::lp_norm;
use frlp_core::limits::{
    classical_limit_profile, classify_regime, singular_boundary_profile, Descriptors, Regime, RegimeConfig,
};
use frlp_core::lp::{
    besov_norm, blocks, build_bank, decompose, reconstruct, sobolev_norm, square_function, triebel_norm, Profile,
    Variant,
};
use frlp_core::multiplier::{apply_frft_multiplier, apply_multiplier, Route};
use frlp_core::opnorm::{power_iteration, seed_vector, POWER_ITERATIONS};
use frlp_core::oscillation::{
    bmo_alpha_norm, bmo_norm, hardy_square_quasinorm, john_nirenberg_profile, psi_alpha, sample_kernel, sharp_maximal,
    Cube, CubeFamily, Kernel,
};
use frlp_core::potentials::{
    apply_potential, bessel_contraction_ratio, kato_ponce_region, semigroup_check, twisted_convolution, Frame,
    PotentialSpec, Region, SemigroupIdentity,
};
use frlp_core::signals::{gaussian, random_bandlimited, random_schwartz, random_signal, rng};
use frlp_core::symbol::{bochner_riesz_symbol, gauss, lp_bump, rescale_symbol, smoothstep, Symbol};
use frlp_core::{chirp_mul, frft, make_grid, Complex, Direction, FracParam, Grid64, Signal64};

type C = Complex<f64>;

const ANGLES: [f64; 5] = [0.3, FRAC_PI_4, 1.1, FRAC_PI_2, 2.0];
const EXPONENTS: [f64; 5] = [1.0, 1.5, 2.0, 4.0, f64::INFINITY];
const THREE: [f64; 3] = [0.7, 1.3, 2.4];
const SEED: u64 = 0xACCE_0001;

struct Verdict {
    pass: bool,
    line: String,
}

fn verdict(pass: bool, line: impl Into<String>) -> Verdict {
    Verdict { pass, line: line.into() }
}

fn param(a: f64) -> FracParam<f64> {
    FracParam::new(a).expect("regular angle")
}

fn grid(l: f64, n: usize) -> Grid64 {
    make_grid(1, l, n).expect("valid grid")
}

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        (a - b).abs() / b.abs()
    }
}

fn rel_vec(a: &[C], b: &[C]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let den: f64 = b.iter().map(|y| y.norm_sqr()).sum();
    (num / den).sqrt()
}

fn gap(a: &[f64], b: &[f64]) -> f64 {
    let scale = b.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max) / scale
}

fn moduli(v: &[C]) -> Vec<f64> {
    v.iter().map(|z| z.norm()).collect()
}

fn re(v: &[C]) -> Vec<f64> {
    v.iter().map(|z| z.re).collect()
}

fn signal(g: &Grid64, v: Vec<C>) -> Signal64 {
    Signal64::new(*g, v).expect("matching length")
}

/// Oracle chirp applied to a signal, kept as a signal.
fn chirped(f: &Signal64, kappa: f64) -> Signal64 {
    signal(f.grid(), oracles::chirp(f, kappa))
}

/// `(m ĝ)^∨` by direct forward and inverse sums over the grid frequencies.
fn direct_multiplier(g: &Signal64, mask: &[C]) -> Vec<C> {
    let grid = g.grid();
    let n = grid.len();
    let xis: Vec<f64> = (0..n).map(|m| grid.freq_point(m)[0]).collect();
    let spec: Vec<C> = oracles::direct_dft(g, &xis).iter().zip(mask).map(|(a, b)| a * b).collect();
    let dxi = grid.freq_spacing();
    (0..n)
        .map(|k| {
            let x = grid.coordinate(k);
            spec.iter().zip(&xis).map(|(v, xi)| v * C::from_polar(dxi, 2.0 * PI * x * xi)).sum()
        })
        .collect()
}

fn radial_mask(g: &Grid64, f: impl Fn(f64) -> f64) -> Vec<C> {
    (0..g.len()).map(|m| C::new(f(g.freq_point(m)[0].abs()), 0.0)).collect()
}

fn least_squares(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) })
}

// 1
fn isometry() -> Verdict {
    let g = grid(8.0, 256);
    let mut worst = 0.0f64;
    let mut pointwise = 0.0f64;
    let mut fast = 0.0;
    for i in 0..100 {
        let f = random_signal(&g, SEED + i);
        for &a in &ANGLES {
            let p = param(a);
            let t0 = Instant::now();
            let h = chirp_mul(&f, &p, Direction::Forward);
            let norms: Vec<(f64, f64)> = EXPONENTS.iter().map(|&q| (lp_norm(&h, q), lp_norm(&f, q))).collect();
            fast += t0.elapsed().as_secs_f64();
            for ((x, y), &q) in norms.iter().zip(&EXPONENTS) {
                worst = worst.max(rel(*x, *y));
                worst = worst.max(rel(oracles::lp_norm(h.values(), g.spacing(), q), *y));
            }
            pointwise = pointwise.max(rel_vec(h.values(), &oracles::chirp(&f, p.kappa())));
        }
    }
    verdict(
        worst <= 1e-14 && pointwise <= 1e-14 && fast < 10.0,
        format!("isometry: max rel err {worst:.2e}, chirp vs oracle {pointwise:.2e}, {fast:.3}s for 2500 cases"),
    )
}

// 2
fn kernel_oracle() -> Verdict {
    let g = grid(4.0, 64);
    let mut worst = 0.0f64;
    for (i, &a) in [0.5, 1.0, 1.3, 2.2, -1.0].iter().enumerate() {
        let f = random_schwartz(&g, 3, SEED + i as u64);
        let spec = frft(&f, &param(a)).expect("resolved chirp");
        let us: Vec<f64> = (0..g.len()).map(|m| spec.point(m)[0]).collect();
        worst = worst.max(rel_vec(spec.values(), &oracles::kernel_frft(&f, a, &us)));
    }
    let g = grid(8.0, 256);
    let mut plancherel = 0.0f64;
    for i in 0..10 {
        let f = random_signal(&g, SEED + 100 + i);
        for &a in &ANGLES {
            let spec = frft(&f, &param(a)).expect("resolved chirp");
            let du = spec.point(1)[0] - spec.point(0)[0];
            let ratio = oracles::lp_norm(spec.values(), du, 2.0) / oracles::lp_norm(f.values(), g.spacing(), 2.0);
            plancherel = plancherel.max((ratio - 1.0).abs());
        }
    }
    verdict(
        worst <= 1e-8 && plancherel <= 1e-9,
        format!("kernel oracle: rel err {worst:.2e} over 5 angles at N=64, Plancherel |ratio-1| {plancherel:.2e}"),
    )
}

// 3
fn multipliers() -> Verdict {
    let g = grid(8.0, 256);
    let syms: Vec<Symbol<f64>> = vec![gauss(0.5), smoothstep(1.0, 2.0), lp_bump().dilate(2.0), bochner_riesz_symbol(1.0, 3.0)];
    let mut r = rng(SEED);
    let (mut routes, mut oracle) = (0.0f64, 0.0f64);
    for i in 0..50 {
        let m = &syms[i % syms.len()];
        let p = param(r.random_range(0.35..2.8));
        let f = random_signal(&g, SEED + 200 + i as u64);
        let a = apply_frft_multiplier(m, &f, &p, Route::Definition).expect("definition route");
        let b = apply_frft_multiplier(m, &f, &p, Route::Conjugation).expect("conjugation route");
        routes = routes.max(rel_vec(a.values(), b.values()));
        let inner = direct_multiplier(&chirped(&f, p.kappa()), &rescale_symbol(m, &p).sample(&g));
        let c = oracles::chirp(&signal(&g, inner), -p.kappa());
        oracle = oracle.max(rel_vec(a.values(), &c));
    }
    let mut norms = 0.0f64;
    for m in syms.iter().take(3) {
        let p = param(r.random_range(0.5..2.6));
        let mc = m.conj();
        let twisted = power_iteration(
            |v| apply_frft_multiplier(&mc, &apply_frft_multiplier(m, v, &p, Route::Definition)?, &p, Route::Definition),
            chirp_mul(&seed_vector(&g), &p, Direction::Inverse),
            POWER_ITERATIONS,
        )
        .expect("power iteration");
        let (ma, mac) = (rescale_symbol(m, &p), rescale_symbol(&mc, &p));
        let classical =
            power_iteration(|v| apply_multiplier(&mac, &apply_multiplier(&ma, v)?), seed_vector(&g), POWER_ITERATIONS)
                .expect("power iteration");
        norms = norms.max(rel(twisted.norm, classical.norm));
    }
    verdict(
        routes < 1e-9 && oracle < 1e-9 && norms <= 1e-8,
        format!("multipliers: routes {routes:.2e}, direct-sum route {oracle:.2e} over 50 draws, opnorm gap {norms:.2e}"),
    )
}

/// `(Ψ_t * F)(x_k)` by a direct periodic sum; the kernel is centred at index `N/2`.
fn direct_convolution(f: &[C], k: &[C], dx: f64) -> Vec<C> {
    let n = f.len();
    (0..n)
        .map(|i| (0..n).map(|m| f[m] * k[(i + n + n / 2 - m) % n]).sum::<C>() * dx)
        .collect()
}

// 4
fn pointwise() -> Verdict {
    let g = grid(8.0, 256);
    let bank = build_bank(&g, -2, 3, Profile::Partition).expect("bank");
    let tree = DyadicTree::full(&g).expect("tree");
    let cubes = CubeFamily::dyadic(&g, 4).expect("cubes");
    let mut w = [0.0f64; 5];
    for i in 0..5 {
        let f = random_signal(&g, SEED + 300 + i);
        for &a in &THREE {
            let p = param(a);
            let mf = chirped(&f, p.kappa());
            let tw = blocks(&f, &bank, bank.levels(), Some(&p)).expect("blocks");
            let cl = blocks(&mf, &bank, bank.levels(), None).expect("blocks");
            for ((_, x), (_, y)) in tw.iter().zip(&cl) {
                w[0] = w[0].max(gap(&moduli(x.values()), &moduli(y.values())));
            }
            let s = square_function(&f, &bank, Some(&p)).expect("square");
            w[1] = w[1].max(gap(&re(s.values()), &re(square_function(&mf, &bank, None).expect("square").values())));
            let d = dyadic_square_function(&f, &tree, Some(&p)).expect("dyadic square");
            let dc = dyadic_square_function(&mf, &tree, None).expect("dyadic square");
            w[2] = w[2].max(gap(&re(d.values()), &re(dc.values())));
            let sh = re(sharp_maximal(&f, &cubes, Some(&p)).expect("sharp").values());
            w[3] = w[3].max(gap(&sh, &oracles::sharp_maximal(mf.values(), cubes.cubes())));
            if i < 2 {
                for t in [0.0625, 0.25, 1.0] {
                    let psi = psi_alpha(&f, &Kernel::MexicanHat, t, Some(&p)).expect("psi");
                    let k = sample_kernel(&g, &Kernel::MexicanHat, t).expect("kernel");
                    let direct = direct_convolution(mf.values(), k.values(), g.spacing());
                    w[4] = w[4].max(gap(&moduli(psi.values()), &moduli(&direct)));
                }
            }
        }
    }
    let worst = w.iter().cloned().fold(0.0, f64::max);
    verdict(
        worst <= 1e-14,
        format!(
            "pointwise transfer: blocks {:.1e}, S {:.1e}, S_dy {:.1e}, M# {:.1e}, Psi {:.1e}",
            w[0], w[1], w[2], w[3], w[4]
        ),
    )
}

// 5
fn reconstruction() -> Verdict {
    let g = grid(8.0, 512);
    let bank = build_bank(&g, -3, 5, Profile::Partition).expect("bank");
    let mut worst = 0.0f64;
    for i in 0..20 {
        let g0 = random_bandlimited(&g, 30.0, SEED + 400 + i);
        for &a in &ANGLES {
            let p = param(a);
            let f = signal(&g, oracles::chirp(&g0, -p.kappa()));
            let dec = decompose(&f, &bank, Some(&p), Variant::Inhomogeneous).expect("decompose");
            let mut sum: Vec<C> = dec.low.as_ref().map_or(vec![C::new(0.0, 0.0); g.len()], |l| l.values().to_vec());
            for (_, b) in &dec.blocks {
                for (s, v) in sum.iter_mut().zip(b.values()) {
                    *s += v;
                }
            }
            worst = worst.max(rel_vec(&sum, f.values()));
            worst = worst.max(reconstruct(&dec).residual.unwrap_or(f64::NAN));
        }
    }
    verdict(worst < 1e-10, format!("reconstruction: residual {worst:.2e} over 20 signals x 5 angles"))
}

// 6
fn haar() -> Verdict {
    let g = grid(8.0, 256);
    let tree = DyadicTree::full(&g).expect("tree");
    let dx = g.spacing();
    let p = param(1.3);
    let k0 = tree.k_min();
    let mut basis: Vec<Vec<C>> = (0..1usize << k0).map(|o| oracles::scaling(&g, k0, o, p.kappa())).collect();
    let mut shape = 0.0f64;
    for level in k0..tree.k_max() {
        for offset in 0..1usize << level {
            let h = oracles::haar(&g, level, offset, p.kappa());
            shape = shape.max(rel_vec(haar_function(&tree, level, offset, Some(&p)).expect("haar").values(), &h));
            basis.push(h);
        }
    }
    let mut gram = 0.0f64;
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            let want = if i == j { 1.0 } else { 0.0 };
            gram = gram.max((oracles::inner(a, b, dx) - want).norm());
        }
    }
    let (mut parseval, mut residual) = (0.0f64, 0.0f64);
    for i in 0..10 {
        let f = random_signal(&g, SEED + 500 + i);
        let energy = oracles::inner(f.values(), f.values(), dx).re;
        let direct: f64 = basis.iter().map(|h| oracles::inner(f.values(), h, dx).norm_sqr()).sum();
        parseval = parseval.max(rel(direct, energy));
        for &a in &ANGLES {
            let q = param(a);
            let c = haar_transform(&f, &tree, Some(&q)).expect("transform");
            parseval = parseval.max(rel(c.energy(), energy));
            residual = residual.max(rel_vec(inverse_haar(&c, &tree).expect("inverse").values(), f.values()));
            let mut sum = expectation(&f, &tree, k0, Some(&q)).expect("expectation");
            for k in k0 + 1..=tree.k_max() {
                sum = sum.add(&difference(&f, &tree, k, Some(&q)).expect("difference"));
            }
            residual = residual.max(rel_vec(sum.values(), f.values()));
        }
    }
    verdict(
        gram.max(shape) <= 1e-12 && parseval <= 1e-10 && residual < 1e-10,
        format!(
            "twisted Haar: Gram {gram:.2e} ({} functions), shape {shape:.2e}, Parseval {parseval:.2e}, residual {residual:.2e}",
            basis.len()
        ),
    )
}

// 7
fn mixed_probe() -> Verdict {
    let g = grid(1.0, 1024);
    let tree = DyadicTree::full(&g).expect("tree");
    let bank = build_bank(&g, -2, 9, Profile::Partition).expect("bank");
    let r = mixed_orthogonality_probe(&tree, &bank, &probe_pairs(3, 6, 9), &param(1.1)).expect("probe");
    let eq = r.rows.iter().map(|row| rel(row.twisted, row.classical)).fold(0.0, f64::max);
    let (x, y): (Vec<f64>, Vec<f64>) =
        r.rows.iter().map(|row| ((row.j - row.k as i32).abs() as f64, row.twisted.log2())).unzip();
    let (slope, _) = least_squares(&x, &y);
    verdict(
        eq <= 1e-8 && slope <= -0.4,
        format!("mixed probe: twisted vs classical {eq:.2e}, log2 slope {slope:.3} over {} pairs", r.rows.len()),
    )
}

fn dc_free(f: &Signal64) -> Signal64 {
    let g = f.grid();
    let mask = radial_mask(g, |r| if r == 0.0 { 0.0 } else { 1.0 });
    signal(g, direct_multiplier(f, &mask))
}

// 8
fn potentials() -> Verdict {
    let g = grid(8.0, 256);
    let ids = [
        SemigroupIdentity::Riesz(0.3, 0.4),
        SemigroupIdentity::Bessel(0.5, 1.5),
        SemigroupIdentity::Laplacian(0.6, -0.2),
        SemigroupIdentity::Commutation(0.9, 0.2),
    ];
    let p = param(1.1);
    let pb = param(0.8);
    let mut semi = 0.0f64;
    for (i, frame) in [Frame::Classical, Frame::Conjugated(p), Frame::Pullback(pb)].iter().enumerate() {
        let raw = random_signal(&g, SEED + 600 + i as u64);
        let f = match frame {
            Frame::Classical => dc_free(&raw),
            Frame::Conjugated(q) => chirped(&dc_free(&chirped(&raw, q.kappa())), -q.kappa()),
            Frame::Pullback(q) => {
                // removing the mean of the FrFT side: F_a f vanishes at u = 0
                let plan = frlp_core::FrftPlan::new(&g, q).expect("plan");
                let spec = plan.forward(&raw).expect("forward");
                let u = dc_free(&spec.as_signal().expect("signal"));
                plan.inverse(&spec.with_values(u.into_values())).expect("inverse")
            }
        };
        for id in ids {
            semi = semi.max(semigroup_check(id, &f, frame).expect("semigroup").max_rel_err);
        }
    }
    // I_{0.7} in the conjugated frame against direct sums
    let f = chirped(&dc_free(&random_signal(&g, SEED + 610)), -p.kappa());
    let mask = radial_mask(&g, |r| if r == 0.0 { 0.0 } else { (2.0 * PI * r).powf(-0.7) });
    let want = oracles::chirp(&signal(&g, direct_multiplier(&chirped(&f, p.kappa()), &mask)), -p.kappa());
    let twice = apply_potential(
        &PotentialSpec::riesz(0.3),
        &apply_potential(&PotentialSpec::riesz(0.4), &f, &Frame::Conjugated(p)).expect("riesz"),
        &Frame::Conjugated(p),
    )
    .expect("riesz");
    semi = semi.max(rel_vec(twice.values(), &want));

    let mut contraction = 0.0f64;
    let q = param(0.9);
    let smooth = gaussian(&g, [0.5, 0.0], 1.0, C::new(1.0, 0.5));
    for f in [smooth, random_signal(&g, SEED + 620), random_signal(&g, SEED + 621)] {
        for sigma in [0.3, 1.0, 3.0] {
            for r in [1.0, 2.0, 4.0, f64::INFINITY] {
                contraction = contraction.max(bessel_contraction_ratio(&f, sigma, r, &q).expect("ratio"));
            }
        }
    }

    let mut kp = 0.0f64;
    for (i, &a) in THREE.iter().enumerate() {
        let p = param(a);
        let (w, u) = (random_signal(&g, SEED + 630 + 2 * i as u64), random_signal(&g, SEED + 631 + 2 * i as u64));
        let (fw, fu) = (chirped(&w, p.kappa()), chirped(&u, p.kappa()));
        let xis: Vec<f64> = (0..g.len()).map(|m| g.freq_point(m)[0]).collect();
        let (hw, hu) = (oracles::direct_dft(&fw, &xis), oracles::direct_dft(&fu, &xis));
        for s in [0.4, 0.8, 2.0] {
            let lhs = apply_potential(
                &PotentialSpec::homog_deriv(s),
                &twisted_convolution(&w, &u, &p).expect("convolution"),
                &Frame::Conjugated(p),
            )
            .expect("derivative");
            // D^s(F * G) through its transform (F̂ Ĝ) |ξ|^s, summed back directly
            let dxi = g.freq_spacing();
            let prod: Vec<C> = hw.iter().zip(&hu).zip(&xis).map(|((a, b), xi)| a * b * xi.abs().powf(s)).collect();
            let inv: Vec<C> = (0..g.len())
                .map(|k| {
                    let x = g.coordinate(k);
                    prod.iter().zip(&xis).map(|(v, xi)| v * C::from_polar(dxi, 2.0 * PI * x * xi)).sum()
                })
                .collect();
            let rhs = oracles::chirp(&signal(&g, inv), -p.kappa());
            kp = kp.max(rel_vec(lhs.values(), &rhs));
        }
    }

    let lattice = kato_ponce_lattice();
    let wrong = lattice
        .iter()
        .filter(|&&(s, r, n)| (kato_ponce_region(s, r, n) == Region::Forbidden) != oracles::kato_ponce_forbidden(s, r, n))
        .count();
    verdict(
        semi <= 1e-9 && contraction <= 1.0 + 1e-12 && kp <= 1e-10 && wrong == 0 && lattice.len() == 200,
        format!(
            "potentials: semigroups {semi:.2e}, Bessel ratio max {contraction:.6}, Kato-Ponce {kp:.2e}, region mismatches {wrong}/{}",
            lattice.len()
        ),
    )
}

// 9
fn norm_equality() -> Verdict {
    let g = grid(8.0, 256);
    let bank = build_bank(&g, 1, 3, Profile::Partition).expect("bank");
    let hardy_bank = build_bank(&g, -1, 4, Profile::Partition).expect("bank");
    let cubes = CubeFamily::dyadic(&g, 4).expect("cubes");
    let mut worst = 0.0f64;
    let mut brute = 0.0f64;
    for i in 0..20 {
        let f = random_signal(&g, SEED + 700 + i);
        for &a in &THREE {
            let p = param(a);
            let mf = chirped(&f, p.kappa());
            let pairs = [
                (
                    besov_norm(&f, &bank, 0.5, 2.0, 2.0, Some(&p)).unwrap().value,
                    besov_norm(&mf, &bank, 0.5, 2.0, 2.0, None).unwrap().value,
                ),
                (
                    triebel_norm(&f, &bank, 1.0, 3.0, 1.0, Some(&p)).unwrap().value,
                    triebel_norm(&mf, &bank, 1.0, 3.0, 1.0, None).unwrap().value,
                ),
                (
                    sobolev_norm(&f, &bank, 1.0, 2.0, Some(&p)).unwrap().value,
                    sobolev_norm(&mf, &bank, 1.0, 2.0, None).unwrap().value,
                ),
                (bmo_alpha_norm(&f, &cubes, Some(&p), 1.0).unwrap(), bmo_norm(&mf, &cubes, 1.0).unwrap()),
                (
                    hardy_square_quasinorm(&f, &hardy_bank, Some(&p), 1.0).unwrap(),
                    hardy_square_quasinorm(&mf, &hardy_bank, None, 1.0).unwrap(),
                ),
            ];
            for (x, y) in pairs {
                worst = worst.max(rel(x, y));
            }
            if i < 3 {
                brute = brute.max(rel(pairs[3].0, oracles::bmo(mf.values(), cubes.cubes(), 1.0)));
            }
        }
    }
    verdict(
        worst <= 1e-14 && brute <= 1e-14,
        format!("norm equality: Besov/Triebel/Sobolev/BMO/Hardy gap {worst:.2e}, BMO vs cube scan {brute:.2e}"),
    )
}

// 10
fn symbol_conditions() -> Verdict {
    let m = smoothstep(0.7, 2.6);
    let mut factor = 0.0f64;
    for a in [1.2, 0.3, 2.9, -0.7] {
        let r = marcinkiewicz_invariance(&m, &param(a), -2, 3, 256);
        factor = factor.max(r.rescaled / r.original_cover).max(r.original / r.rescaled_cover);
    }
    let m = gauss(0.7).product(&smoothstep(0.2, 1.5));
    let mut mihlin = 0.0f64;
    for a in [0.6, 1.1, 2.3] {
        for panels in [4, 8] {
            mihlin = mihlin.max(mihlin_rescaling_gap(&m, &param(a), 1, &[0.25, 0.5, 1.0, 2.0], panels));
        }
    }
    verdict(
        factor <= 2.0 && mihlin <= 5e-3,
        format!("symbol conditions: Marcinkiewicz worst side ratio {factor:.3}, Mihlin rescaling gap {mihlin:.2e}"),
    )
}

// 11
fn limits() -> Verdict {
    let g = grid(8.0, 512);
    let bank = build_bank(&g, -1, 4, Profile::Partition).expect("bank");
    let f = gaussian(&g, [0.3, 0.0], 1.0, C::new(1.0, 0.0));
    let prof = classical_limit_profile(&f, &bank, &smoothstep(1.0, 2.0), 2, 28).expect("classical profile");
    let mut final_err = 0.0f64;
    let mut tail_ok = true;
    for k in 0..prof.metric_names.len() {
        let col: Vec<f64> = prof.entries.iter().map(|e| e.metrics[k]).collect();
        final_err = final_err.max(*col.last().expect("entries"));
        tail_ok &= col[2..].windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9) + 1e-14);
    }

    let g = grid(8.0, 1024);
    let f = gaussian(&g, [0.0, 0.0], 1.5, C::new(1.0, 0.2));
    let (mut sing, mut ratios) = (0.0f64, Vec::new());
    for phi in [gauss(1.0), lp_bump()] {
        let prof = singular_boundary_profile(&f, &phi, 1.0, 30).expect("singular profile");
        sing = sing.max(prof.entries.last().expect("entries").metrics[0]);
        for w in prof.entries.windows(2) {
            if w[0].metrics[2] == 1.0 && w[1].metrics[2] == 1.0 {
                ratios.push(w[1].metrics[1] / w[0].metrics[1]);
            }
        }
    }
    let doubling = ratios.iter().map(|r| (r / 2.0 - 1.0).abs()).fold(0.0, f64::max);

    let cfg = RegimeConfig::default();
    let mut regimes_ok = true;
    let mut desc = 0.0f64;
    for (a, want) in [(FRAC_PI_2, Regime::Classical), (0.05, Regime::Warning), (PI / 3.0, Regime::EffectiveFractional)] {
        let p = param(a);
        regimes_ok &= classify_regime(&p, &cfg) == want;
        let d = Descriptors::of(&p);
        let (s, k, dev) = oracles::descriptors(a);
        desc = desc.max((d.s - s).abs()).max((d.kappa - k).abs()).max((d.deviation - dev).abs());
    }
    verdict(
        final_err < 1e-6 && tail_ok && sing < 1e-6 && !ratios.is_empty() && doubling <= 0.05 && regimes_ok && desc <= 1e-15,
        format!(
            "limits: classical final {final_err:.2e} (tail {}), singular final {sing:.2e}, doubling dev {doubling:.3} over {} steps, regimes {}",
            if tail_ok { "settled" } else { "rising" },
            ratios.len(),
            if regimes_ok { "match" } else { "MISMATCH" }
        ),
    )
}

// 12
fn john_nirenberg() -> Verdict {
    let g = grid(8.0, 4096);
    let p = param(0.9);
    let cube = Cube { offset: [0, 0], side: 4096 };
    let mut r = rng(SEED + 800);
    let (mut worst_slope, mut worst_r2) = (f64::NEG_INFINITY, 1.0f64);
    let mut agree = true;
    for _ in 0..5 {
        let a = r.random_range(0.5..2.0);
        let b = log_signal(&g, &p, r.random_range(-2.0..2.0), a);
        let lambdas = jn_lambdas(a);
        let mb = oracles::chirp(&b, p.kappa());
        let mean = mb.iter().sum::<C>() / mb.len() as f64;
        let dev: Vec<f64> = mb.iter().map(|v| (v - mean).norm()).collect();
        let (x, y): (Vec<f64>, Vec<f64>) = lambdas
            .iter()
            .map(|&l| (l, dev.iter().filter(|&&d| d > l).count() as f64 / dev.len() as f64))
            .filter(|&(_, frac)| frac > 0.0)
            .map(|(l, frac)| (l, frac.ln()))
            .unzip();
        if x.len() < 3 {
            worst_slope = f64::INFINITY;
            continue;
        }
        let (slope, r2) = least_squares(&x, &y);
        worst_slope = worst_slope.max(slope);
        worst_r2 = worst_r2.min(r2);
        agree &= john_nirenberg_profile(&b, Some(&p), &cube, &lambdas).expect("profile").pass;
    }
    verdict(
        worst_slope < 0.0 && worst_r2 > 0.9 && agree,
        format!("John-Nirenberg: steepest-fit slope max {worst_slope:.3}, min R^2 {worst_r2:.4} over 5 log signals"),
    )
}

fn frlp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frlp")).args(args).output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    frlp(args).status.code().unwrap_or(-1)
}

// 13
fn cli_contract(dir: &Path) -> Verdict {
    let t0 = Instant::now();
    let a = frlp(&["check", "--seed", "7"]);
    let seconds = t0.elapsed().as_secs_f64();
    let b = frlp(&["check", "--seed", "7"]);
    let identical = a.stdout == b.stdout && !a.stdout.is_empty();
    let all_ok = a.status.code() == Some(0) && b.status.code() == Some(0);

    let p = |name: &str| dir.join(name).to_string_lossy().into_owned();
    let (g, nested, ok, missing, x, y, d) =
        (p("g.csv"), p("g.csv/inner"), p("ok.csv"), p("missing.csv"), p("x.csv"), p("y.csv"), p("d"));
    let generated = code(&["gen", "--kind", "gaussian", "--out", &g]) == 0;
    let cases: Vec<(Vec<&str>, i32, &str)> = vec![
        (vec!["--help"], 0, "help"),
        (vec!["frft", "--input", &g, "--out", &ok], 0, "frft"),
        (vec!["check", "--seed", "7", "--filter", "frft.*", "--tighten", "1e-8"], 1, "tightened check"),
        (vec!["frft", "--input", &missing, "--out", &x], 2, "missing input"),
        (vec!["decompose", "--input", &g, "--out", &nested], 2, "unwritable output"),
        (vec!["frft", "--alpha", "0.05", "--input", &g, "--out", &x], 3, "aliased chirp"),
        (vec!["frft", "--alpha", "0", "--input", &g, "--out", &x], 4, "singular angle"),
        (vec!["decompose", "--input", &g, "--out", &d, "--jmax", "6"], 4, "level beyond Nyquist"),
        (vec!["norms", "--input", &g, "--space", "nope"], 4, "unknown space"),
        (vec!["gen", "--kind", "nope", "--out", &y], 4, "unknown kind"),
        (vec!["--grid", "x", "descriptors"], 4, "bad grid"),
        (vec!["check", "--filter", "nope.*"], 4, "empty filter"),
        (vec!["launch"], 4, "unknown subcommand"),
    ];
    let wrong: Vec<String> = cases
        .iter()
        .filter_map(|(args, want, name)| {
            let got = code(args);
            (got != *want).then(|| format!("{name}: {got} != {want}"))
        })
        .collect();
    verdict(
        identical && all_ok && generated && wrong.is_empty() && seconds < 300.0,
        format!(
            "cli: reports {}, suite {seconds:.1}s, {} exit-code paths{}",
            if identical { "byte-identical" } else { "DIFFER" },
            cases.len(),
            if wrong.is_empty() { String::new() } else { format!(", wrong: {}", wrong.join("; ")) }
        ),
    )
}

fn main() {
    let dir = tempfile::tempdir().expect("temp dir");
    let criteria: Vec<(&str, Box<dyn Fn() -> Verdict>)> = vec![
        ("1", Box::new(isometry)),
        ("2", Box::new(kernel_oracle)),
        ("3", Box::new(multipliers)),
        ("4", Box::new(pointwise)),
        ("5", Box::new(reconstruction)),
        ("6", Box::new(haar)),
        ("7", Box::new(mixed_probe)),
        ("8", Box::new(potentials)),
        ("9", Box::new(norm_equality)),
        ("10", Box::new(symbol_conditions)),
        ("11", Box::new(limits)),
        ("12", Box::new(john_nirenberg)),
        ("13", Box::new(|| cli_contract(dir.path()))),
    ];
    let mut failed = 0;
    for (id, run) in &criteria {
        let v = run();
        if !v.pass {
            failed += 1;
        }
        println!("{} [{id:>2}] {}", if v.pass { "PASS" } else { "FAIL" }, v.line);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
