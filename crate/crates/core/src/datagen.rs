//! Manufactured problems and seeded noise.
//!
//! Data are synthesized from a chosen coefficient through the integral
//! identity `f(s) = ∫_{g0}^{g(γ(s))} a(t) dt`, so no forward PDE solve is
//! needed and the exact coefficient is known for error measurement.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::func1d::{norm, CurveComposite, GridFunction, Interval, NormKind};
use crate::intervals::admissible_eps;
use crate::operators::apply_t1;

/// Sobolev class of the exact coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SmoothnessClass {
    H1,
    H2,
    H3,
}

/// Shape of the exact coefficient in the normalized variable
/// `u = (t − g0)/(g1 − g0) ∈ [0, 1]`. Every profile vanishes at `u = 1`; the
/// end value `c_end` is added on top.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Profile {
    Zero,
    /// `1 − u`
    Linear,
    /// `1 + cos(πu)`
    ShiftedCosine,
    /// `cos(πu/2)`; its primitive is a Laplacian eigenfunction satisfying
    /// both boundary conditions, so the regularization bias is explicit.
    QuarterCosine,
    /// `cos(πu/2) + 3 cos(3πu/2)`, which also has zero mean.
    ZeroMeanCosine,
    /// `(1 − u)^β` with `β > 1/2`; lies in `H^k` exactly for `k < β + 1/2`.
    Power(f64),
    /// `1/2 − |u − 1/2|`
    Tent,
    /// `(1 − u)^β − 2(1 − u)/(β + 1)`: the power profile with zero mean, so its
    /// primitive vanishes at both ends.
    Balanced(f64),
}

impl Profile {
    pub fn value(&self, u: f64) -> f64 {
        match *self {
            Profile::Zero => 0.0,
            Profile::Linear => 1.0 - u,
            Profile::ShiftedCosine => 1.0 + (PI * u).cos(),
            Profile::QuarterCosine => (0.5 * PI * u).cos(),
            Profile::ZeroMeanCosine => (0.5 * PI * u).cos() + 3.0 * (1.5 * PI * u).cos(),
            Profile::Power(beta) => (1.0 - u).max(0.0).powf(beta),
            Profile::Tent => 0.5 - (u - 0.5).abs(),
            Profile::Balanced(beta) => (1.0 - u).max(0.0).powf(beta) - 2.0 * (1.0 - u) / (beta + 1.0),
        }
    }

    /// `∫_0^u` of the profile.
    pub fn primitive(&self, u: f64) -> f64 {
        match *self {
            Profile::Zero => 0.0,
            Profile::Linear => u - u * u / 2.0,
            Profile::ShiftedCosine => u + (PI * u).sin() / PI,
            Profile::QuarterCosine => (0.5 * PI * u).sin() * 2.0 / PI,
            Profile::ZeroMeanCosine => (0.5 * PI * u).sin() * 2.0 / PI + (1.5 * PI * u).sin() * 2.0 / PI,
            Profile::Power(beta) => (1.0 - (1.0 - u).max(0.0).powf(beta + 1.0)) / (beta + 1.0),
            Profile::Tent => {
                if u <= 0.5 {
                    u * u / 2.0
                } else {
                    0.25 - (1.0 - u) * (1.0 - u) / 2.0
                }
            }
            Profile::Balanced(beta) => {
                (1.0 - (1.0 - u).max(0.0).powf(beta + 1.0) - 2.0 * u + u * u) / (beta + 1.0)
            }
        }
    }

    pub fn smoothness(&self) -> SmoothnessClass {
        match *self {
            Profile::Power(beta) | Profile::Balanced(beta) if beta <= 1.5 => SmoothnessClass::H1,
            Profile::Power(beta) | Profile::Balanced(beta) if beta <= 2.5 => SmoothnessClass::H2,
            Profile::Tent => SmoothnessClass::H1,
            _ => SmoothnessClass::H3,
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Zero => write!(f, "zero"),
            Profile::Linear => write!(f, "linear"),
            Profile::ShiftedCosine => write!(f, "shifted_cosine"),
            Profile::QuarterCosine => write!(f, "quarter_cosine"),
            Profile::ZeroMeanCosine => write!(f, "zero_mean_cosine"),
            Profile::Power(b) => write!(f, "power({b})"),
            Profile::Tent => write!(f, "tent"),
            Profile::Balanced(b) => write!(f, "balanced({b})"),
        }
    }
}

impl FromStr for Profile {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim();
        Ok(match s {
            "zero" => Profile::Zero,
            "linear" => Profile::Linear,
            "shifted_cosine" => Profile::ShiftedCosine,
            "quarter_cosine" => Profile::QuarterCosine,
            "zero_mean_cosine" => Profile::ZeroMeanCosine,
            "tent" => Profile::Tent,
            _ => {
                let (name, beta) = ["power", "balanced"]
                    .iter()
                    .find_map(|name| parse_call(s, name).map(|b| (*name, b)))
                    .ok_or_else(|| format!("unknown coefficient profile `{s}`"))?;
                if beta.is_nan() || beta <= 0.5 {
                    return Err(format!("{name}({beta}) is not in H1; the exponent must exceed 0.5"));
                }
                if name == "power" {
                    Profile::Power(beta)
                } else {
                    Profile::Balanced(beta)
                }
            }
        })
    }
}

/// Parses `name(x)` into `x`.
pub(crate) fn parse_call(s: &str, name: &str) -> Option<f64> {
    let inner = s.strip_prefix(name)?.trim().strip_prefix('(')?.strip_suffix(')')?;
    inner.trim().parse().ok()
}

/// Curve maps `s ↦ g(γ(s))` from `[0, 1]` onto `I`. The boundary data `g` is
/// affine along the curve in each case; `γ` carries the shape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CompositeKind {
    Identity,
    /// `γ(s) = s + a·sin(2πs)/(2π)` with `0 ≤ a < 1`.
    Warp(f64),
    /// `γ(s) = (s + κs²)/(1 + κ)` with `κ ≥ 0`.
    Quadratic(f64),
    /// Decreasing map `s ↦ g1 − (g1 − g0)s`.
    Reversed,
}

impl CompositeKind {
    /// `γ` and its first four derivatives at `s`.
    fn shape(&self, s: f64) -> [f64; 5] {
        match *self {
            CompositeKind::Identity => [s, 1.0, 0.0, 0.0, 0.0],
            CompositeKind::Reversed => [1.0 - s, -1.0, 0.0, 0.0, 0.0],
            CompositeKind::Warp(a) => {
                let w = 2.0 * PI;
                let (sn, cs) = (w * s).sin_cos();
                [s + a * sn / w, 1.0 + a * cs, -a * w * sn, -a * w * w * cs, a * w * w * w * sn]
            }
            CompositeKind::Quadratic(k) => {
                let d = 1.0 + k;
                [(s + k * s * s) / d, (1.0 + 2.0 * k * s) / d, 2.0 * k / d, 0.0, 0.0]
            }
        }
    }

    /// Bounds `(C_γ, C'_γ)` on `|γ'|`.
    fn shape_bracket(&self) -> (f64, f64) {
        match *self {
            CompositeKind::Identity | CompositeKind::Reversed => (1.0, 1.0),
            CompositeKind::Warp(a) => (1.0 - a, 1.0 + a),
            CompositeKind::Quadratic(k) => (1.0 / (1.0 + k), (1.0 + 2.0 * k) / (1.0 + k)),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            CompositeKind::Warp(a) if !(0.0..1.0).contains(&a) => {
                Err(Error::InvalidParameter(format!("warp amplitude {a} must lie in [0, 1)")))
            }
            CompositeKind::Quadratic(k) if k.is_nan() || k < 0.0 => {
                Err(Error::InvalidParameter(format!("quadratic coefficient {k} must be non-negative")))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for CompositeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompositeKind::Identity => write!(f, "identity"),
            CompositeKind::Reversed => write!(f, "reversed"),
            CompositeKind::Warp(a) => write!(f, "warp({a})"),
            CompositeKind::Quadratic(k) => write!(f, "quadratic({k})"),
        }
    }
}

impl FromStr for CompositeKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim();
        match s {
            "identity" => Ok(CompositeKind::Identity),
            "reversed" => Ok(CompositeKind::Reversed),
            _ => parse_call(s, "warp")
                .map(CompositeKind::Warp)
                .or_else(|| parse_call(s, "quadratic").map(CompositeKind::Quadratic))
                .ok_or_else(|| format!("unknown curve map `{s}`")),
        }
    }
}

/// Recipe for a manufactured problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemSpec {
    pub profile: Profile,
    pub composite: CompositeKind,
    pub interval: Interval,
    pub n: usize,
    pub c_end: f64,
}

/// Derivative bounds of the boundary data (`C_g`, `C'_g`) and of the curve
/// parametrization (`C_γ`, `C'_γ`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemConstants {
    pub c_g: f64,
    pub c_g_hi: f64,
    pub c_gamma: f64,
    pub c_gamma_hi: f64,
}

/// Exact data of a manufactured experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    pub spec: ProblemSpec,
    pub interval: Interval,
    pub a0: GridFunction,
    pub b0: GridFunction,
    pub composite: CurveComposite,
    pub f: GridFunction,
    pub smoothness_class: SmoothnessClass,
    pub c_end: f64,
    pub constants: ProblemConstants,
    /// `‖g∘γ‖_{H⁴([0,1])}` from the analytic derivatives.
    pub composite_h4_norm: f64,
}

impl ProblemInstance {
    /// Exact coefficient at an arbitrary point of `I`.
    pub fn a0_at(&self, t: f64) -> f64 {
        let i = self.interval;
        self.c_end + self.spec.profile.value((t - i.lo()) / i.length())
    }

    /// Exact primitive `b0(x) = ∫_{g0}^x a0`.
    pub fn b0_at(&self, x: f64) -> f64 {
        let i = self.interval;
        self.c_end * (x - i.lo()) + i.length() * self.spec.profile.primitive((x - i.lo()) / i.length())
    }

    /// Exact curve map at `s`.
    pub fn composite_at(&self, s: f64) -> f64 {
        composite_value(&self.spec, s)
    }
}

fn composite_value(spec: &ProblemSpec, s: f64) -> f64 {
    spec.interval.lo() + spec.interval.length() * spec.composite.shape(s)[0]
}

fn composite_h4_norm(spec: &ProblemSpec) -> Result<f64> {
    let (g0, len) = (spec.interval.lo(), spec.interval.length());
    let mut sq = 0.0;
    for k in 0..5 {
        let g = GridFunction::from_fn(Interval::unit(), 4001, |s| {
            let d = len * spec.composite.shape(s)[k];
            if k == 0 {
                g0 + d
            } else {
                d
            }
        })?;
        sq += norm(&g, NormKind::L2)?.powi(2);
    }
    Ok(sq.sqrt())
}

pub fn make_problem(spec: ProblemSpec) -> Result<ProblemInstance> {
    spec.composite.validate()?;
    if spec.n < 5 {
        return Err(Error::TooFewNodes { min: 5, got: spec.n });
    }
    let interval = spec.interval;
    let (g0, len) = (interval.lo(), interval.length());
    let a0 = GridFunction::from_fn(interval, spec.n, |t| spec.c_end + spec.profile.value((t - g0) / len))?;
    if (a0.last() - spec.c_end).abs() > 1e-12 * spec.c_end.abs().max(1.0) {
        return Err(Error::InvalidParameter("profile does not vanish at the right end".into()));
    }
    let shifted = a0.map(|v| v - spec.c_end)?;
    let b0 = apply_t1(&shifted).map_with_nodes(|x, v| v + spec.c_end * (x - g0))?;

    let (c_gamma, c_gamma_hi) = spec.composite.shape_bracket();
    let constants = ProblemConstants { c_g: len, c_g_hi: len, c_gamma, c_gamma_hi };
    let forward = GridFunction::from_fn(Interval::unit(), spec.n, |s| composite_value(&spec, s))?;
    let composite = CurveComposite::new(forward, len * c_gamma, len * c_gamma_hi)?;
    let f = GridFunction::from_fn(Interval::unit(), spec.n, |s| {
        let x = composite_value(&spec, s);
        spec.c_end * (x - g0) + len * spec.profile.primitive((x - g0) / len)
    })?;

    Ok(ProblemInstance {
        spec,
        interval,
        a0,
        b0,
        composite,
        f,
        smoothness_class: spec.profile.smoothness(),
        c_end: spec.c_end,
        constants,
        composite_h4_norm: composite_h4_norm(&spec)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseKind {
    C1Noise,
    L2Noise,
}

/// Perturbed boundary data: a smooth monotone map or raw rough samples.
#[derive(Debug, Clone, PartialEq)]
pub enum PerturbedMap {
    Smooth(CurveComposite),
    Rough(GridFunction),
}

impl PerturbedMap {
    pub fn samples(&self) -> &GridFunction {
        match self {
            PerturbedMap::Smooth(c) => c.forward(),
            PerturbedMap::Rough(g) => g,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoisyData {
    pub kind: NoiseKind,
    pub g_perturbed: PerturbedMap,
    pub f_perturbed: GridFunction,
    pub eps: f64,
    pub delta: f64,
    pub seed: u64,
}

impl NoisyData {
    /// Replaces the flux trace by a perturbed one of level `delta`.
    pub fn with_flux_noise(mut self, problem: &ProblemInstance, delta: f64) -> Result<Self> {
        self.f_perturbed = perturb_flux(problem, delta, self.seed)?;
        self.delta = delta;
        Ok(self)
    }
}

const STREAM_MAP: u64 = 1;
const STREAM_FLUX: u64 = 2;

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Smooth perturbation of the curve map vanishing at both ends, with
/// `sup|εφ| ≤ ε` and `sup|εφ'| ≤ ε`. The flux trace is left exact.
pub fn perturb_c1(problem: &ProblemInstance, eps: f64, seed: u64) -> Result<NoisyData> {
    let limit = admissible_eps(problem);
    if !(eps >= 0.0 && eps < limit) {
        return Err(Error::InvalidParameter(format!("eps = {eps} must lie in [0, {limit})")));
    }
    let mut r = rng(seed, STREAM_MAP);
    let coeffs: Vec<f64> = (0..4).map(|_| r.random_range(-1.0..1.0)).collect();
    let bump = |s: f64| -> (f64, f64) {
        coeffs.iter().enumerate().fold((0.0, 0.0), |(v, d), (k, c)| {
            let w = PI * (k + 1) as f64;
            (v + c * (w * s).sin(), d + c * w * (w * s).cos())
        })
    };
    let dense = 16 * (problem.spec.n - 1);
    let peak = (0..=dense)
        .map(|i| {
            let (v, d) = bump(i as f64 / dense as f64);
            v.abs().max(d.abs())
        })
        .fold(0.0, f64::max);
    let amp = if peak > 0.0 { 0.999 * eps / peak } else { 0.0 };
    let base = problem.composite.forward();
    let values = base.map_with_nodes(|s, v| v + amp * bump(s).0)?;
    let c = problem.composite.deriv_lo();
    let composite = CurveComposite::new(values, 0.5 * c, 2.0 * problem.composite.deriv_hi())?;
    Ok(NoisyData {
        kind: NoiseKind::C1Noise,
        g_perturbed: PerturbedMap::Smooth(composite),
        f_perturbed: problem.f.clone(),
        eps,
        delta: 0.0,
        seed,
    })
}

/// Rough nodewise perturbation of the curve map with
/// `‖gᵉ∘γ − g∘γ‖_{L²} = eps/C_γ`.
pub fn perturb_l2(problem: &ProblemInstance, eps: f64, seed: u64) -> Result<NoisyData> {
    if eps.is_nan() || eps < 0.0 {
        return Err(Error::InvalidParameter(format!("eps = {eps} must be non-negative")));
    }
    let base = problem.composite.forward();
    let mut r = rng(seed, STREAM_MAP);
    let raw = GridFunction::new(Interval::unit(), (0..base.len()).map(|_| r.random_range(-1.0..1.0)).collect())?;
    let size = norm(&raw, NormKind::L2)?;
    let amp = if size > 0.0 { eps / problem.constants.c_gamma / size } else { 0.0 };
    let values = base.zip_with(&raw, |v, w| v + amp * w)?;
    Ok(NoisyData {
        kind: NoiseKind::L2Noise,
        g_perturbed: PerturbedMap::Rough(values),
        f_perturbed: problem.f.clone(),
        eps,
        delta: 0.0,
        seed,
    })
}

/// Smooth trigonometric perturbation of the flux trace with L² norm `delta`.
pub fn perturb_flux(problem: &ProblemInstance, delta: f64, seed: u64) -> Result<GridFunction> {
    if delta.is_nan() || delta < 0.0 {
        return Err(Error::InvalidParameter(format!("delta = {delta} must be non-negative")));
    }
    let mut r = rng(seed, STREAM_FLUX);
    let modes: Vec<(f64, f64)> = (0..5).map(|_| (r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))).collect();
    let wave = problem.f.map_with_nodes(|s, _| {
        modes.iter().enumerate().fold(0.0, |acc, (k, (a, b))| {
            let w = PI * k as f64;
            acc + a * (w * s).cos() + b * (w * s).sin()
        })
    })?;
    let size = norm(&wave, NormKind::L2)?;
    let amp = if size > 0.0 { delta / size } else { 0.0 };
    problem.f.zip_with(&wave, |v, w| v + amp * w)
}
