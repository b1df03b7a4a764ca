//! Fractional derivatives and potentials in three frames (classical,
//! chirp-conjugated, FrFT pullback), their semigroup laws, pullback norms,
//! the HLS and Bessel desk checks, the operator chain, and the twisted
//! product and convolution.
//!
//! Riesz-type symbols use the `(2π|ξ|)^{-s}` convention.

use serde::Serialize;

use crate::error::{FrlpError, Result};
use crate::fft::{apply_mask, convolve};
use crate::frft::{chirp_mul, ensure_sampling, Direction, FrftPlan};
use crate::grid::{FracParam, GridSpec, Signal, Spectrum};
use crate::report::{digest_signals, rel_l2, CheckCertificate};
use crate::scalar::{creal, Complex, Real};
use crate::symbol::Symbol;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialKind<T> {
    /// `(2π|ξ|)^{-s}`
    Riesz(T),
    /// `(1 + 4π²|ξ|²)^{-σ/2}`
    Bessel(T),
    /// `|ξ|^s`
    HomogDeriv(T),
    /// `(1 + |ξ|²)^{σ/2}`
    InhomogDeriv(T),
    /// `(2π|ξ|)^z`, i.e. `(-Δ)^{z/2}`
    FracLaplacian(T),
}

/// Treatment of `ξ = 0` for symbols singular there.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DcPolicy {
    /// Symbol value `0` at the origin.
    Zero,
    /// Symbol value `1` at the origin: the mean passes through unchanged.
    Hold,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PotentialSpec<T> {
    pub kind: PotentialKind<T>,
    pub dc_policy: Option<DcPolicy>,
}

impl<T: Real> PotentialSpec<T> {
    pub fn new(kind: PotentialKind<T>) -> Self {
        Self { kind, dc_policy: None }
    }

    pub fn with_dc(kind: PotentialKind<T>, dc: DcPolicy) -> Self {
        Self { kind, dc_policy: Some(dc) }
    }

    pub fn riesz(s: T) -> Self {
        Self::with_dc(PotentialKind::Riesz(s), DcPolicy::Zero)
    }

    pub fn bessel(sigma: T) -> Self {
        Self::new(PotentialKind::Bessel(sigma))
    }

    pub fn homog_deriv(s: T) -> Self {
        Self::with_dc(PotentialKind::HomogDeriv(s), DcPolicy::Zero)
    }

    pub fn inhomog_deriv(sigma: T) -> Self {
        Self::new(PotentialKind::InhomogDeriv(sigma))
    }

    pub fn frac_laplacian(z: T) -> Self {
        Self::with_dc(PotentialKind::FracLaplacian(z), DcPolicy::Zero)
    }

    /// Whether the symbol is singular at the origin.
    pub fn singular_at_origin(&self) -> bool {
        match self.kind {
            PotentialKind::Riesz(s) => s > T::zero(),
            PotentialKind::HomogDeriv(s) | PotentialKind::FracLaplacian(s) => s < T::zero(),
            _ => false,
        }
    }

    fn check(&self) -> Result<()> {
        if self.singular_at_origin() && self.dc_policy.is_none() {
            return Err(FrlpError::DcSingular);
        }
        Ok(())
    }

    /// Symbol value at frequency radius `r`.
    pub fn eval_radius(&self, r: T) -> T {
        let two_pi = T::of(2.0) * T::PI();
        if r == T::zero() {
            let dc = match self.dc_policy {
                Some(DcPolicy::Zero) => T::zero(),
                Some(DcPolicy::Hold) => T::one(),
                None => T::nan(),
            };
            return match self.kind {
                PotentialKind::Bessel(_) | PotentialKind::InhomogDeriv(_) => T::one(),
                PotentialKind::Riesz(s) if s == T::zero() => T::one(),
                PotentialKind::HomogDeriv(s) | PotentialKind::FracLaplacian(s) if s >= T::zero() => {
                    if s == T::zero() {
                        T::one()
                    } else {
                        T::zero()
                    }
                }
                _ => dc,
            };
        }
        match self.kind {
            PotentialKind::Riesz(s) => (two_pi * r).powf(-s),
            PotentialKind::Bessel(sigma) => {
                (T::one() + two_pi * two_pi * r * r).powf(-sigma / T::of(2.0))
            }
            PotentialKind::HomogDeriv(s) => r.powf(s),
            PotentialKind::InhomogDeriv(sigma) => (T::one() + r * r).powf(sigma / T::of(2.0)),
            PotentialKind::FracLaplacian(z) => (two_pi * r).powf(z),
        }
    }

    pub fn name(&self) -> String {
        match self.kind {
            PotentialKind::Riesz(s) => format!("riesz({s})"),
            PotentialKind::Bessel(s) => format!("bessel({s})"),
            PotentialKind::HomogDeriv(s) => format!("homog_deriv({s})"),
            PotentialKind::InhomogDeriv(s) => format!("inhomog_deriv({s})"),
            PotentialKind::FracLaplacian(z) => format!("frac_laplacian({z})"),
        }
    }

    pub fn symbol(&self) -> Result<Symbol<T>> {
        self.check()?;
        let spec = *self;
        Ok(Symbol::real_radial(self.name(), move |r| spec.eval_radius(r)))
    }
}

/// Which `α`-frame an operator acts in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Frame<T> {
    Classical,
    /// `M_α^{-1} T M_α`
    Conjugated(FracParam<T>),
    /// `F_α^{-1} T F_α`
    Pullback(FracParam<T>),
}

impl<T: Real> Frame<T> {
    pub fn label(&self) -> String {
        match self {
            Frame::Classical => "classical".into(),
            Frame::Conjugated(p) => format!("conjugated({})", p.alpha()),
            Frame::Pullback(p) => format!("pullback({})", p.alpha()),
        }
    }
}

fn sample_mask<T: Real>(grid: &GridSpec<T>, m: &Symbol<T>) -> Result<Vec<Complex<T>>> {
    m.sample_bounded(grid)
}

/// Apply a classical multiplier in the requested frame.
pub fn apply_in_frame<T: Real>(m: &Symbol<T>, f: &Signal<T>, frame: &Frame<T>) -> Result<Signal<T>> {
    match frame {
        Frame::Classical => Ok(apply_mask(f, &sample_mask(f.grid(), m)?)),
        Frame::Conjugated(p) => {
            ensure_sampling(f.grid(), p)?;
            let g = chirp_mul(f, p, Direction::Forward);
            let h = apply_mask(&g, &sample_mask(g.grid(), m)?);
            Ok(chirp_mul(&h, p, Direction::Inverse))
        }
        Frame::Pullback(p) => {
            let plan = FrftPlan::new(f.grid(), p)?;
            let spec = plan.forward(f)?;
            let u = spec.as_signal()?;
            let h = apply_mask(&u, &sample_mask(u.grid(), m)?);
            plan.inverse(&Spectrum::new(*f.grid(), spec.dilation(), h.into_values())?)
        }
    }
}

pub fn apply_potential<T: Real>(spec: &PotentialSpec<T>, f: &Signal<T>, frame: &Frame<T>) -> Result<Signal<T>> {
    apply_in_frame(&spec.symbol()?, f, frame)
}

/// Identities checked by [`semigroup_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SemigroupIdentity<T> {
    /// `I_s I_t = I_{s+t}`
    Riesz(T, T),
    /// `J_σ J_τ = J_{σ+τ}`
    Bessel(T, T),
    /// `(-Δ)^{z/2} (-Δ)^{w/2} = (-Δ)^{(z+w)/2}`
    Laplacian(T, T),
    /// `I_s (-Δ)^z = (-Δ)^z I_s = I_{s-2z}`, requires `s > 2z`
    Commutation(T, T),
}

pub const SEMIGROUP_TOLERANCE: f64 = 1e-9;

/// Maximal relative `L²` discrepancy across the sides of an identity.
pub fn semigroup_check<T: Real>(id: SemigroupIdentity<T>, f: &Signal<T>, frame: &Frame<T>) -> Result<CheckCertificate> {
    let ap = |s: PotentialSpec<T>, g: &Signal<T>| apply_potential(&s, g, frame);
    let (name, err) = match id {
        SemigroupIdentity::Riesz(s, t) => {
            let lhs = ap(PotentialSpec::riesz(s), &ap(PotentialSpec::riesz(t), f)?)?;
            let rhs = ap(PotentialSpec::riesz(s + t), f)?;
            (format!("I_{s} I_{t} = I_{}", s + t), rel_l2(&lhs, &rhs))
        }
        SemigroupIdentity::Bessel(s, t) => {
            let lhs = ap(PotentialSpec::bessel(s), &ap(PotentialSpec::bessel(t), f)?)?;
            let rhs = ap(PotentialSpec::bessel(s + t), f)?;
            (format!("J_{s} J_{t} = J_{}", s + t), rel_l2(&lhs, &rhs))
        }
        SemigroupIdentity::Laplacian(z, w) => {
            let lhs = ap(PotentialSpec::frac_laplacian(z), &ap(PotentialSpec::frac_laplacian(w), f)?)?;
            let rhs = ap(PotentialSpec::frac_laplacian(z + w), f)?;
            (format!("(-Lap)^({z}/2) (-Lap)^({w}/2) = (-Lap)^({}/2)", z + w), rel_l2(&lhs, &rhs))
        }
        SemigroupIdentity::Commutation(s, z) => {
            if !(s > T::of(2.0) * z) {
                return Err(FrlpError::InvalidArgument("commutation needs s > 2z".into()));
            }
            let lap = PotentialSpec::frac_laplacian(T::of(2.0) * z);
            let a = ap(PotentialSpec::riesz(s), &ap(lap, f)?)?;
            let b = ap(lap, &ap(PotentialSpec::riesz(s), f)?)?;
            let c = ap(PotentialSpec::riesz(s - T::of(2.0) * z), f)?;
            (format!("I_{s} (-Lap)^{z} = (-Lap)^{z} I_{s} = I_{}", s - T::of(2.0) * z), rel_l2(&a, &c).max(rel_l2(&b, &c)))
        }
    };
    Ok(CheckCertificate::new(name, frame.label(), err, SEMIGROUP_TOLERANCE, digest_signals(&[f])))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PullbackNorm {
    pub r: f64,
    pub alpha: f64,
    pub value: f64,
}

/// `‖f‖_{L^r_α} = ‖F_α f‖_{L^r}`.
pub fn pullback_norm<T: Real>(f: &Signal<T>, r: T, p: &FracParam<T>) -> Result<PullbackNorm> {
    let spec = FrftPlan::new(f.grid(), p)?.forward(f)?;
    Ok(PullbackNorm { r: r.to_f64(), alpha: p.alpha().to_f64(), value: spec.lp_norm(r).to_f64() })
}

/// A test function sampled at any resolution.
pub type Family<'a> = &'a [&'a (dyn Fn([f64; 2]) -> Complex<f64> + Sync)];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HlsReport {
    pub s: f64,
    pub p: f64,
    pub q: f64,
    pub alpha: f64,
    /// `sup_f ‖I_{s,α}f‖_{L^q_α} / ‖f‖_{L^p_α}` at `N` and at `4N`.
    pub ratio_coarse: f64,
    pub ratio_fine: f64,
    pub certificate: CheckCertificate,
}

fn sample_family<T: Real>(grid: &GridSpec<T>, family: Family<'_>) -> Vec<Signal<T>> {
    family
        .iter()
        .map(|f| {
            Signal::from_fn(*grid, |x| {
                let v = f([x[0].to_f64(), x[1].to_f64()]);
                Complex::new(T::of(v.re), T::of(v.im))
            })
        })
        .collect()
}

pub fn check_hls_exponents(s: f64, p: f64, q: f64, n: usize) -> Result<()> {
    let residual = 1.0 / p - 1.0 / q - s / n as f64;
    if residual.abs() > 1e-12 {
        return Err(FrlpError::ExponentMismatch(residual));
    }
    if !(s > 0.0 && s < n as f64) {
        return Err(FrlpError::InvalidArgument("HLS needs 0 < s < n".into()));
    }
    Ok(())
}

fn hls_ratio<T: Real>(grid: &GridSpec<T>, s: T, p: T, q: T, family: Family<'_>, a: &FracParam<T>) -> Result<f64> {
    let frame = Frame::Pullback(*a);
    let mut sup = 0.0f64;
    for f in sample_family(grid, family) {
        let out = apply_potential(&PotentialSpec::riesz(s), &f, &frame)?;
        let num = pullback_norm(&out, q, a)?.value;
        let den = pullback_norm(&f, p, a)?.value;
        sup = sup.max(num / den);
    }
    Ok(sup)
}

/// Empirical HLS ratio at two resolutions; passes when finite and within a factor 10.
pub fn hls_desk_check<T: Real>(
    grid: &GridSpec<T>,
    s: T,
    p: T,
    q: T,
    family: Family<'_>,
    a: &FracParam<T>,
) -> Result<HlsReport> {
    check_hls_exponents(s.to_f64(), p.to_f64(), q.to_f64(), grid.dim())?;
    let coarse = hls_ratio(grid, s, p, q, family, a)?;
    let fine = hls_ratio(&grid.refined(4)?, s, p, q, family, a)?;
    let spread = coarse.max(fine) / coarse.min(fine);
    let rel = (fine - coarse).abs() / coarse.max(fine);
    let mut cert = CheckCertificate::new(
        format!("HLS s={} p={} q={}", s, p, q),
        Frame::Pullback(*a).label(),
        rel,
        f64::INFINITY,
        format!("family:{}", family.len()),
    );
    cert.pass = coarse.is_finite() && fine.is_finite() && coarse > 0.0 && spread < 10.0;
    Ok(HlsReport {
        s: s.to_f64(),
        p: p.to_f64(),
        q: q.to_f64(),
        alpha: a.alpha().to_f64(),
        ratio_coarse: coarse,
        ratio_fine: fine,
        certificate: cert,
    })
}

/// `‖J_{σ,α} f‖_{L^r_α} / ‖f‖_{L^r_α}` in the pullback frame.
pub fn bessel_contraction_ratio<T: Real>(f: &Signal<T>, sigma: T, r: T, a: &FracParam<T>) -> Result<f64> {
    let out = apply_potential(&PotentialSpec::bessel(sigma), f, &Frame::Pullback(*a))?;
    Ok(pullback_norm(&out, r, a)?.value / pullback_norm(f, r, a)?.value)
}

/// One operator in the chain together with its claimed bound.
#[derive(Debug, Clone)]
pub struct ChainStage<T: Real> {
    pub symbol: Symbol<T>,
    pub constant: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageNorm {
    pub stage: String,
    pub exponent: f64,
    pub norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainReport {
    pub stages: Vec<StageNorm>,
    pub hls_ratio: f64,
    pub bound: f64,
    pub output_norm: f64,
    pub contraction_observed: bool,
    pub certificate: CheckCertificate,
}

/// `U f = J_{σ,α} A_α I_{s,α} T_{m,α} f` in the pullback frame, with stage norms.
///
/// Passes when `‖U f‖_{L^q_α} ≤ C_A C_HLS C_m ‖f‖_{L^p_α}`, where `C_HLS` is
/// the observed ratio of the Riesz stage, and the Bessel stage contracts.
#[allow(clippy::too_many_arguments)]
pub fn operator_chain<T: Real>(
    t: Option<&ChainStage<T>>,
    a_stage: Option<&ChainStage<T>>,
    s: T,
    sigma: T,
    p: T,
    q: T,
    f: &Signal<T>,
    alpha: &FracParam<T>,
) -> Result<ChainReport> {
    check_hls_exponents(s.to_f64(), p.to_f64(), q.to_f64(), f.grid().dim())?;
    let frame = Frame::Pullback(*alpha);
    let norm = |g: &Signal<T>, r: T| pullback_norm(g, r, alpha).map(|n| n.value);
    let mut stages = vec![StageNorm { stage: "input".into(), exponent: p.to_f64(), norm: norm(f, p)? }];
    let h1 = match t {
        Some(st) => apply_in_frame(&st.symbol, f, &frame)?,
        None => f.clone(),
    };
    stages.push(StageNorm { stage: "T_m".into(), exponent: p.to_f64(), norm: norm(&h1, p)? });
    let h2 = apply_potential(&PotentialSpec::riesz(s), &h1, &frame)?;
    stages.push(StageNorm { stage: "I_s".into(), exponent: q.to_f64(), norm: norm(&h2, q)? });
    let h3 = match a_stage {
        Some(st) => apply_in_frame(&st.symbol, &h2, &frame)?,
        None => h2.clone(),
    };
    stages.push(StageNorm { stage: "A".into(), exponent: q.to_f64(), norm: norm(&h3, q)? });
    let h4 = apply_potential(&PotentialSpec::bessel(sigma), &h3, &frame)?;
    let out = norm(&h4, q)?;
    stages.push(StageNorm { stage: "J_sigma".into(), exponent: q.to_f64(), norm: out });
    let hls_ratio = stages[2].norm / stages[1].norm;
    let c_m = t.map_or(1.0, |st| st.constant);
    let c_a = a_stage.map_or(1.0, |st| st.constant);
    let bound = c_a * hls_ratio * c_m * stages[0].norm;
    let slack = 1.0 + 1e-10;
    let contraction_observed = out <= stages[3].norm * slack;
    let stage_ok = stages[1].norm <= c_m * stages[0].norm * slack && stages[3].norm <= c_a * stages[2].norm * slack;
    let mut cert = CheckCertificate::new(
        "operator chain J A I T",
        frame.label(),
        out / bound,
        1.0 + 1e-10,
        digest_signals(&[f]),
    );
    cert.pass = cert.pass && contraction_observed && stage_ok;
    Ok(ChainReport { stages, hls_ratio, bound, output_norm: out, contraction_observed, certificate: cert })
}

/// `Π_α(f_1, …, f_m) = M_α^{-1}((M_α f_1) ⋯ (M_α f_m))`.
pub fn twisted_product<T: Real>(fs: &[Signal<T>], p: &FracParam<T>) -> Result<Signal<T>> {
    let first = fs.first().ok_or_else(|| FrlpError::InvalidArgument("empty product".into()))?;
    let mut acc = Signal::from_fn(*first.grid(), |_| creal(T::one()));
    for f in fs {
        f.ensure_same_grid(first)?;
        acc = acc.zip(&chirp_mul(f, p, Direction::Forward), |a, b| a * b);
    }
    Ok(chirp_mul(&acc, p, Direction::Inverse))
}

/// `ω ⋆_α u = M_α^{-1}((M_α ω) * (M_α u))`.
pub fn twisted_convolution<T: Real>(omega: &Signal<T>, u: &Signal<T>, p: &FracParam<T>) -> Result<Signal<T>> {
    omega.ensure_same_grid(u)?;
    ensure_sampling(u.grid(), p)?;
    let c = convolve(&chirp_mul(omega, p, Direction::Forward), &chirp_mul(u, p, Direction::Forward));
    Ok(chirp_mul(&c, p, Direction::Inverse))
}

/// Relative gap between `D^s_α(ω ⋆_α u)` and `M_α^{-1} D^s((M_α ω) * (M_α u))`.
pub fn kato_ponce_path<T: Real>(omega: &Signal<T>, u: &Signal<T>, s: T, p: &FracParam<T>) -> Result<CheckCertificate> {
    let d = PotentialSpec::homog_deriv(s);
    let lhs = apply_potential(&d, &twisted_convolution(omega, u, p)?, &Frame::Conjugated(*p))?;
    let inner = convolve(&chirp_mul(omega, p, Direction::Forward), &chirp_mul(u, p, Direction::Forward));
    let rhs = chirp_mul(&apply_potential(&d, &inner, &Frame::Classical)?, p, Direction::Inverse);
    Ok(CheckCertificate::new(
        format!("D^{s}_alpha twisted convolution"),
        Frame::Conjugated(*p).label(),
        rel_l2(&lhs, &rhs),
        1e-10,
        digest_signals(&[omega, u]),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    Allowed,
    Forbidden,
}

/// Whether `s` is a nonnegative even integer (zero included).
pub fn is_even_nonneg(s: f64) -> bool {
    s >= 0.0 && (s / 2.0 - (s / 2.0).round()).abs() < 1e-12
}

/// Allowed iff `s > max(0, n/r - n)` or `s ∈ {0, 2, 4, …}`.
pub fn kato_ponce_region(s: f64, r: f64, n: usize) -> Region {
    let n = n as f64;
    if s > (n / r - n).max(0.0) || is_even_nonneg(s) {
        Region::Allowed
    } else {
        Region::Forbidden
    }
}
