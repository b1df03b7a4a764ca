//! Symbol-condition checkers: dyadic total variation (Marcinkiewicz) and
//! annular `L²` derivative norms (Mihlin–Hörmander), with their behavior
//! under `m ↦ m_α`.

use serde::Serialize;

use crate::grid::FracParam;
use crate::scalar::{Complex, Real};
use crate::symbol::{rescale_symbol, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Condition {
    Marcinkiewicz1D,
    MihlinHormander,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionEntry {
    /// `2^j` for a dyadic interval, `R` for an annulus.
    pub scale: f64,
    /// Multi-index `β`.
    pub order: [u32; 2],
    /// Total variation on `±[2^j, 2^{j+1}]`, or `‖∂^β m‖_{L²(R<|ξ|<2R)} / R^{n/2-|β|}`.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymbolConditionReport {
    pub condition: Condition,
    pub symbol: String,
    pub entries: Vec<ConditionEntry>,
    /// Supremum over entries (`NaN` if any entry is `NaN`).
    pub sup: f64,
    pub bound: Option<f64>,
    pub pass: Option<bool>,
}

impl SymbolConditionReport {
    fn new(condition: Condition, symbol: &str, entries: Vec<ConditionEntry>) -> Self {
        let sup = entries.iter().fold(0.0f64, |a, e| if e.value.is_nan() || a.is_nan() { f64::NAN } else { a.max(e.value) });
        Self { condition, symbol: symbol.to_string(), entries, sup, bound: None, pass: None }
    }

    pub fn with_bound(mut self, bound: f64) -> Self {
        self.bound = Some(bound);
        self.pass = Some(self.sup <= bound);
        self
    }

    /// Supremum restricted to entries of a given order.
    pub fn sup_for_order(&self, order: [u32; 2]) -> f64 {
        self.entries.iter().filter(|e| e.order == order).map(|e| e.value).fold(0.0, f64::max)
    }
}

const D1: [(i32, f64); 4] = [(-2, 1.0), (-1, -8.0), (1, 8.0), (2, -1.0)];
const D2: [(i32, f64); 5] = [(-2, -1.0), (-1, 16.0), (0, -30.0), (1, 16.0), (2, -1.0)];
const D0: [(i32, f64); 1] = [(0, 1.0)];

fn stencil(order: u32) -> (&'static [(i32, f64)], f64) {
    match order {
        0 => (&D0, 1.0),
        1 => (&D1, 12.0),
        2 => (&D2, 12.0),
        _ => panic!("derivative order above 2 is not supported"),
    }
}

/// `∂^β m(ξ)` by the tensor product of fourth-order central stencils.
pub fn partial<T: Real>(m: &Symbol<T>, xi: [f64; 2], order: [u32; 2], h: f64) -> Complex<f64> {
    let (sx, dx) = stencil(order[0]);
    let (sy, dy) = stencil(order[1]);
    let mut acc = Complex::new(0.0, 0.0);
    for &(i, wi) in sx {
        for &(j, wj) in sy {
            let p = [T::of(xi[0] + i as f64 * h), T::of(xi[1] + j as f64 * h)];
            let v = m.eval(p);
            acc += Complex::new(v.re.to_f64(), v.im.to_f64()) * (wi * wj);
        }
    }
    acc / (dx * h.powi(order[0] as i32) * dy * h.powi(order[1] as i32))
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else if n == 1 { x } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pm) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Total variation `∫|m'|` over `±[2^j, 2^{j+1}]` for `j` in `jmin..=jmax`.
///
/// Midpoint rule on `quad_points` subintervals per side, with the derivative
/// taken at step `width/16`.
pub fn marcinkiewicz_check<T: Real>(m: &Symbol<T>, jmin: i32, jmax: i32, quad_points: usize) -> SymbolConditionReport {
    let entries = (jmin..=jmax)
        .map(|j| {
            let a = 2f64.powi(j);
            let w = a / quad_points as f64;
            let h = w / 16.0;
            let mut total = 0.0;
            for i in 0..quad_points {
                let x = a + (i as f64 + 0.5) * w;
                total += w * (partial(m, [x, 0.0], [1, 0], h).norm() + partial(m, [-x, 0.0], [1, 0], h).norm());
            }
            ConditionEntry { scale: a, order: [1, 0], value: total }
        })
        .collect();
    SymbolConditionReport::new(Condition::Marcinkiewicz1D, m.name(), entries)
}

/// Number of dyadic intervals covering `[s 2^j, s 2^{j+1}]`.
pub fn covering_count(s: f64) -> u32 {
    let l = s.log2();
    if (l - l.round()).abs() < 1e-12 {
        1
    } else {
        2
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarcinkiewiczInvariance {
    pub covering: u32,
    /// `A(m_α)` on the requested levels.
    pub rescaled: f64,
    /// `A(m)` on the levels covering the rescaled ones.
    pub original_cover: f64,
    /// `A(m)` on the requested levels.
    pub original: f64,
    /// `A(m_α)` on the levels covering the original ones.
    pub rescaled_cover: f64,
    pub holds: bool,
}

/// Both covering inequalities `A(m_α) ≤ C A(m)` and `A(m) ≤ C A(m_α)`.
pub fn marcinkiewicz_invariance<T: Real>(
    m: &Symbol<T>,
    p: &FracParam<T>,
    jmin: i32,
    jmax: i32,
    quad_points: usize,
) -> MarcinkiewiczInvariance {
    let s = p.s().to_f64();
    let shift = s.log2().abs().ceil() as i32 + 1;
    let ma = rescale_symbol(m, p);
    let rescaled = marcinkiewicz_check(&ma, jmin, jmax, quad_points).sup;
    let original_cover = marcinkiewicz_check(m, jmin - shift, jmax + 1, quad_points).sup;
    let original = marcinkiewicz_check(m, jmin, jmax, quad_points).sup;
    let rescaled_cover = marcinkiewicz_check(&ma, jmin - 1, jmax + shift, quad_points).sup;
    let c = covering_count(s) as f64;
    // quadrature slack: the two sides integrate the same variation on different panels
    let slack = 1.0 + 1e-6;
    let holds = rescaled <= c * original_cover * slack && original <= c * rescaled_cover * slack;
    MarcinkiewiczInvariance { covering: covering_count(s), rescaled, original_cover, original, rescaled_cover, holds }
}

/// All multi-indices with `|β| ≤ max_order` in dimension `dim`.
pub fn multi_indices(dim: usize, max_order: u32) -> Vec<[u32; 2]> {
    let mut out = Vec::new();
    for total in 0..=max_order {
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

/// `‖∂^β m‖_{L²(R<|ξ|<2R)}` by composite Gauss–Legendre in `|ξ|` and, in two
/// dimensions, the trapezoid rule in angle.
pub fn annulus_derivative_norm<T: Real>(m: &Symbol<T>, dim: usize, radius: f64, order: [u32; 2], panels: usize) -> f64 {
    let nodes = gauss_legendre(8);
    let width = radius / panels as f64;
    let h = width / 16.0;
    let angles = if dim == 1 { 0 } else { 16 * panels.max(4) };
    let mut acc = 0.0;
    for k in 0..panels {
        let a = radius + k as f64 * width;
        for &(x, w) in &nodes {
            let r = a + (x + 1.0) * width / 2.0;
            let wr = w * width / 2.0;
            if dim == 1 {
                acc += wr * (partial(m, [r, 0.0], order, h).norm_sqr() + partial(m, [-r, 0.0], order, h).norm_sqr());
            } else {
                let dth = 2.0 * std::f64::consts::PI / angles as f64;
                let mut ring = 0.0;
                for t in 0..angles {
                    let th = t as f64 * dth;
                    ring += partial(m, [r * th.cos(), r * th.sin()], order, h).norm_sqr();
                }
                acc += wr * r * dth * ring;
            }
        }
    }
    acc.sqrt()
}

/// Mihlin–Hörmander ratios `‖∂^β m‖_{L²(R<|ξ|<2R)} / R^{n/2-|β|}` for
/// `|β| ≤ ⌊n/2⌋ + 1` and each annulus radius.
pub fn mihlin_check<T: Real>(m: &Symbol<T>, dim: usize, annuli: &[f64], panels: usize) -> SymbolConditionReport {
    let max_order = (dim / 2) as u32 + 1;
    let mut entries = Vec::new();
    for &r in annuli {
        for beta in multi_indices(dim, max_order) {
            let order = (beta[0] + beta[1]) as f64;
            let norm = annulus_derivative_norm(m, dim, r, beta, panels);
            entries.push(ConditionEntry { scale: r, order: beta, value: norm / r.powf(dim as f64 / 2.0 - order) });
        }
    }
    SymbolConditionReport::new(Condition::MihlinHormander, m.name(), entries)
}

/// Largest relative gap between the ratios of `m_α` at `R` and of `m` at `s_α R`.
pub fn mihlin_rescaling_gap<T: Real>(m: &Symbol<T>, p: &FracParam<T>, dim: usize, annuli: &[f64], panels: usize) -> f64 {
    let s = p.s().to_f64();
    let lhs = mihlin_check(&rescale_symbol(m, p), dim, annuli, panels);
    let scaled: Vec<f64> = annuli.iter().map(|r| r * s).collect();
    let rhs = mihlin_check(m, dim, &scaled, panels);
    lhs.entries
        .iter()
        .zip(&rhs.entries)
        .map(|(a, b)| {
            let d = (a.value - b.value).abs();
            if b.value == 0.0 {
                d
            } else {
                d / b.value
            }
        })
        .fold(0.0, f64::max)
}
