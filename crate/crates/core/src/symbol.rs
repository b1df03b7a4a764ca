//! Frequency-domain symbols: evaluable fields `ξ ↦ m(ξ)` with metadata, a
//! small named library, and the rescaling `m_α(ξ) = m((sin α) ξ)`.

use std::fmt;
use std::sync::Arc;

use crate::error::{FrlpError, Result};
use crate::grid::{FracParam, GridSpec};
use crate::scalar::{creal, Complex, Real};

type Eval<T> = Arc<dyn Fn([T; 2]) -> Complex<T> + Send + Sync>;

/// Radial band outside of which a symbol is declared to vanish.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Support<T> {
    Unbounded,
    /// `|ξ| ≤ r`
    Ball(T),
    /// `a ≤ |ξ| ≤ b`
    Annulus(T, T),
}

#[derive(Clone)]
pub struct Symbol<T> {
    name: String,
    smoothness: Option<f64>,
    support: Support<T>,
    eval: Eval<T>,
}

impl<T: Real> fmt::Debug for Symbol<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Symbol")
            .field("name", &self.name)
            .field("smoothness", &self.smoothness)
            .field("support", &self.support)
            .finish()
    }
}

impl<T: Real> Symbol<T> {
    pub fn new(name: impl Into<String>, eval: impl Fn([T; 2]) -> Complex<T> + Send + Sync + 'static) -> Self {
        Self { name: name.into(), smoothness: None, support: Support::Unbounded, eval: Arc::new(eval) }
    }

    /// Symbol depending only on `|ξ|`.
    pub fn radial(name: impl Into<String>, profile: impl Fn(T) -> Complex<T> + Send + Sync + 'static) -> Self {
        Self::new(name, move |xi: [T; 2]| profile((xi[0] * xi[0] + xi[1] * xi[1]).sqrt()))
    }

    pub fn real_radial(name: impl Into<String>, profile: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        Self::radial(name, move |r| creal(profile(r)))
    }

    pub fn with_smoothness(mut self, k: f64) -> Self {
        self.smoothness = Some(k);
        self
    }

    pub fn with_support(mut self, support: Support<T>) -> Self {
        self.support = support;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn smoothness(&self) -> Option<f64> {
        self.smoothness
    }

    pub fn support(&self) -> Support<T> {
        self.support
    }

    pub fn eval(&self, xi: [T; 2]) -> Complex<T> {
        (self.eval)(xi)
    }

    pub fn eval_1d(&self, xi: T) -> Complex<T> {
        (self.eval)([xi, T::zero()])
    }

    /// Samples on the centered frequency grid.
    pub fn sample(&self, grid: &GridSpec<T>) -> Vec<Complex<T>> {
        (0..grid.len()).map(|i| self.eval(grid.freq_point(i))).collect()
    }

    /// Samples on the grid, rejecting non-finite values and magnitudes above `1e12`.
    pub fn sample_bounded(&self, grid: &GridSpec<T>) -> Result<Vec<Complex<T>>> {
        let v = self.sample(grid);
        let max = v.iter().map(|z| z.norm()).fold(T::zero(), |a, b| if b.is_nan() || b > a { b } else { a });
        if max.is_nan() || !(max <= T::of(1e12)) {
            return Err(FrlpError::SymbolUnbounded { name: self.name.clone(), max: max.to_f64() });
        }
        Ok(v)
    }

    /// `ξ ↦ m(ξ / R)`.
    pub fn dilate(&self, radius: T) -> Self {
        let inner = self.eval.clone();
        let support = match self.support {
            Support::Unbounded => Support::Unbounded,
            Support::Ball(r) => Support::Ball(r * radius),
            Support::Annulus(a, b) => Support::Annulus(a * radius, b * radius),
        };
        Self {
            name: format!("{}(./{})", self.name, radius),
            smoothness: self.smoothness,
            support,
            eval: Arc::new(move |xi: [T; 2]| inner([xi[0] / radius, xi[1] / radius])),
        }
    }

    /// `ξ ↦ m(ξ)·other(ξ)`.
    pub fn product(&self, other: &Self) -> Self {
        let (a, b) = (self.eval.clone(), other.eval.clone());
        Self::new(format!("{}*{}", self.name, other.name), move |xi| a(xi) * b(xi))
    }

    pub fn conj(&self) -> Self {
        let a = self.eval.clone();
        Self { eval: Arc::new(move |xi| a(xi).conj()), name: format!("conj({})", self.name), ..self.clone() }
    }
}

/// `m_α(ξ) = m((sin α) ξ)` with the signed sine.
pub fn rescale_symbol<T: Real>(m: &Symbol<T>, p: &FracParam<T>) -> Symbol<T> {
    let sin = p.sin();
    if sin == T::one() {
        return m.clone();
    }
    let inner = m.eval.clone();
    let s = p.s();
    let support = match m.support {
        Support::Unbounded => Support::Unbounded,
        Support::Ball(r) => Support::Ball(r / s),
        Support::Annulus(a, b) => Support::Annulus(a / s, b / s),
    };
    Symbol {
        name: format!("{}_alpha({})", m.name, p.alpha()),
        smoothness: m.smoothness,
        support,
        eval: Arc::new(move |xi: [T; 2]| inner([xi[0] * sin, xi[1] * sin])),
    }
}

/// `h(t) = e^{-1/t}` for `t > 0`, else `0`.
pub fn bump_h<T: Real>(t: T) -> T {
    if t > T::zero() {
        (-T::one() / t).exp()
    } else {
        T::zero()
    }
}

/// Smooth transition: `1` for `r ≤ 1`, `0` for `r ≥ 2`.
pub fn transition<T: Real>(r: T) -> T {
    if r <= T::one() {
        return T::one();
    }
    if r >= T::of(2.0) {
        return T::zero();
    }
    let a = bump_h(T::of(2.0) - r);
    let b = bump_h(r - T::one());
    a / (a + b)
}

/// Smooth rise from `0` at `t ≤ 0` to `1` at `t ≥ 1`.
pub fn smooth_rise<T: Real>(t: T) -> T {
    T::one() - transition(t + T::one())
}

pub fn ball<T: Real>(radius: T) -> Symbol<T> {
    Symbol::real_radial(format!("ball({radius})"), move |r| if r <= radius { T::one() } else { T::zero() })
        .with_support(Support::Ball(radius))
        .with_smoothness(0.0)
}

pub fn annulus<T: Real>(a: T, b: T) -> Symbol<T> {
    Symbol::real_radial(format!("annulus({a},{b})"), move |r| if r >= a && r <= b { T::one() } else { T::zero() })
        .with_support(Support::Annulus(a, b))
        .with_smoothness(0.0)
}

/// Radial smooth step rising from `0` at `|ξ| = r0` to `1` at `|ξ| = r1`.
pub fn smoothstep<T: Real>(r0: T, r1: T) -> Symbol<T> {
    Symbol::real_radial(format!("smoothstep({r0},{r1})"), move |r| smooth_rise((r - r0) / (r1 - r0)))
        .with_smoothness(f64::INFINITY)
}

/// Smooth annular bump `Θ(|ξ|) - Θ(2|ξ|)`, supported in `1/2 ≤ |ξ| ≤ 2`.
pub fn lp_bump<T: Real>() -> Symbol<T> {
    Symbol::real_radial("lp_bump", |r| transition(r) - transition(T::of(2.0) * r))
        .with_support(Support::Annulus(T::of(0.5), T::of(2.0)))
        .with_smoothness(f64::INFINITY)
}

/// `(2π|ξ|)^{-s}` with the value at `ξ = 0` set to zero.
pub fn riesz<T: Real>(s: T) -> Symbol<T> {
    Symbol::real_radial(format!("riesz({s})"), move |r| {
        if r == T::zero() {
            T::zero()
        } else {
            (T::of(2.0) * T::PI() * r).powf(-s)
        }
    })
}

/// `(1 + 4π²|ξ|²)^{-σ/2}`.
pub fn bessel<T: Real>(sigma: T) -> Symbol<T> {
    Symbol::real_radial(format!("bessel({sigma})"), move |r| {
        (T::one() + T::of(4.0) * T::PI() * T::PI() * r * r).powf(-sigma / T::of(2.0))
    })
    .with_smoothness(f64::INFINITY)
}

/// Bochner–Riesz symbol `(1 - |ξ|²/R²)_+^λ`; `λ = 0` is the open-ball indicator.
pub fn bochner_riesz_symbol<T: Real>(lambda: T, radius: T) -> Symbol<T> {
    Symbol::real_radial(format!("br({lambda},{radius})"), move |r| {
        let t = T::one() - r * r / (radius * radius);
        if t <= T::zero() {
            T::zero()
        } else if lambda == T::zero() {
            T::one()
        } else {
            t.powf(lambda)
        }
    })
    .with_support(Support::Ball(radius))
    .with_smoothness(lambda.to_f64())
}

/// `e^{-π σ² |ξ|²}`.
pub fn gauss<T: Real>(sigma: T) -> Symbol<T> {
    Symbol::real_radial(format!("gauss({sigma})"), move |r| (-T::PI() * sigma * sigma * r * r).exp())
        .with_smoothness(f64::INFINITY)
}

/// `e^{-2πi ξ·a}`: translation by `a`.
pub fn translation<T: Real>(a: [T; 2]) -> Symbol<T> {
    Symbol::new("translation", move |xi: [T; 2]| {
        crate::scalar::cis(-T::of(2.0) * T::PI() * (xi[0] * a[0] + xi[1] * a[1]))
    })
    .with_smoothness(f64::INFINITY)
}

/// Parse a library symbol such as `annulus(0.5,2)` or `gauss(1)`.
pub fn parse_symbol<T: Real>(spec: &str) -> Result<Symbol<T>> {
    let bad = || FrlpError::InvalidArgument(format!("unrecognized symbol `{spec}`"));
    let s = spec.trim();
    let open = s.find('(').ok_or_else(bad)?;
    if !s.ends_with(')') {
        return Err(bad());
    }
    let name = s[..open].trim();
    let args: Vec<f64> = s[open + 1..s.len() - 1]
        .split(',')
        .filter(|a| !a.trim().is_empty())
        .map(|a| a.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    let arity = |n: usize| if args.len() == n { Ok(()) } else { Err(bad()) };
    let a = |i: usize| T::of(args[i]);
    match name {
        "ball" => arity(1).map(|_| ball(a(0))),
        "annulus" => arity(2).map(|_| annulus(a(0), a(1))),
        "smoothstep" => arity(2).map(|_| smoothstep(a(0), a(1))),
        "riesz" => arity(1).map(|_| riesz(a(0))),
        "bessel" => arity(1).map(|_| bessel(a(0))),
        "br" => arity(2).map(|_| bochner_riesz_symbol(a(0), a(1))),
        "gauss" => arity(1).map(|_| gauss(a(0))),
        _ => Err(bad()),
    }
}
