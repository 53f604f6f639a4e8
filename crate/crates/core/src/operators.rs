//! Operators of the forward chain and of its regularization.
//!
//! * integration `w ↦ ∫_{g0}^x w`,
//! * the regularized second-difference operator `w ↦ w − α w''`,
//! * the boundary lift `L` spanning its null space and the projection
//!   `id − L` onto `{w(g0) = 0, w'(g1) = 0}`,
//! * composition with the curve map and the inverse of its perturbed version.

use crate::error::{Error, Result};
use crate::func1d::{cumulative_integral, invert_monotone, CurveComposite, GridFunction, Interval};
use crate::intervals::IntersectionResult;

/// `w ↦ w − α w''` on a fixed interval, `0 < α < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularizedSecondDiff {
    alpha: f64,
    interval: Interval,
}

impl RegularizedSecondDiff {
    pub fn new(alpha: f64, interval: Interval) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self { alpha, interval })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("alpha = {alpha} must lie in (0, 1)")))
    }
}

/// Projection `id − L` onto functions with `w(g0) = 0` and `w'(g1) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WProjection {
    interval: Interval,
}

impl WProjection {
    pub fn new(interval: Interval) -> Self {
        Self { interval }
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }
}

fn require_interval(w: &GridFunction, interval: Interval) -> Result<()> {
    if w.interval() == interval {
        Ok(())
    } else {
        Err(Error::ImageMismatch(format!(
            "function lives on [{}, {}], operator on [{}, {}]",
            w.interval().lo(),
            w.interval().hi(),
            interval.lo(),
            interval.hi()
        )))
    }
}

pub fn apply_t1(w: &GridFunction) -> GridFunction {
    cumulative_integral(w)
}

pub fn apply_t2alpha(op: &RegularizedSecondDiff, w: &GridFunction) -> Result<GridFunction> {
    require_interval(w, op.interval)?;
    let d2 = w.second_derivative()?;
    w.zip_with(&d2, |v, dv| v - op.alpha * dv)
}

/// One-sided second-order derivative at the right end.
fn right_slope(x: &GridFunction) -> f64 {
    let v = x.values();
    let n = v.len();
    (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * x.spacing())
}

/// `sinh(a/s)/cosh(len/s)` for `0 ≤ a ≤ len`, free of overflow.
fn sinh_ratio(a: f64, len: f64, s: f64) -> f64 {
    let q = (-2.0 * len / s).exp();
    (((a - len) / s).exp() - ((-a - len) / s).exp()) / (1.0 + q)
}

/// `cosh(b/s)/cosh(len/s)` for `|b| ≤ len`, free of overflow.
fn cosh_ratio(b: f64, len: f64, s: f64) -> f64 {
    let q = (-2.0 * len / s).exp();
    let b = b.abs();
    (((b - len) / s).exp() + ((-b - len) / s).exp()) / (1.0 + q)
}

/// Boundary lift: the element of `{α y'' = y}` matching `x(g0)` and `x'(g1)`.
///
/// The slope coefficient is fitted to the one-sided stencil of the sampled
/// hyperbolic basis, so `x − Lx` has zero discrete slope at `g1` and the
/// projection is idempotent on the grid.
pub fn apply_l(proj: &WProjection, alpha: f64, x: &GridFunction) -> Result<GridFunction> {
    check_alpha(alpha)?;
    require_interval(x, proj.interval)?;
    if x.len() < 5 {
        return Err(Error::StencilTooSmall { min: 5, got: x.len() });
    }
    let s = alpha.sqrt();
    let (g0, g1) = (proj.interval.lo(), proj.interval.hi());
    let len = g1 - g0;
    let rising = GridFunction::from_fn(proj.interval, x.len(), |t| s * sinh_ratio(t - g0, len, s))?;
    let falling = GridFunction::from_fn(proj.interval, x.len(), |t| cosh_ratio(t - g1, len, s))?;
    let start = x.first() / falling.first();
    let slope = (right_slope(x) - start * right_slope(&falling)) / right_slope(&rising);
    rising.zip_with(&falling, |r, f| slope * r + start * f)
}

pub fn project_w(proj: &WProjection, alpha: f64, x: &GridFunction) -> Result<GridFunction> {
    let lx = apply_l(proj, alpha, x)?;
    x.zip_with(&lx, |a, b| a - b)
}

fn scale_of(values: &[f64]) -> f64 {
    values.iter().fold(1.0f64, |m, v| m.max(v.abs()))
}

/// `w ∘ (g∘γ)` sampled on the curve map's grid, with `w` read through its
/// monotone cubic interpolant.
pub fn apply_t3(c: &CurveComposite, zeta: &GridFunction) -> Result<GridFunction> {
    let image = c.image();
    let domain = zeta.interval();
    let slack = 1e-12 * scale_of(&[domain.lo(), domain.hi()]);
    if !image.within(&domain, slack) {
        return Err(Error::ImageMismatch(format!(
            "curve image [{}, {}] is not inside [{}, {}]",
            image.lo(),
            image.hi(),
            domain.lo(),
            domain.hi()
        )));
    }
    c.forward().map(|z| zeta.eval_cubic(z))
}

/// `ζ̃(z) = f((gᵉ∘γ)⁻¹(z))` on a uniform grid over the common image.
pub fn apply_t3eps_pinv(
    c_eps: &CurveComposite,
    common: &IntersectionResult,
    f: &GridFunction,
) -> Result<GridFunction> {
    let grid = GridFunction::zeros(common.common, f.len())?;
    let mut values = Vec::with_capacity(f.len());
    for z in grid.nodes() {
        let s = invert_monotone(c_eps, z)?;
        values.push(f.eval_cubic(s));
    }
    GridFunction::new(common.common, values)
}

/// Resamples `zeta_tilde` onto a grid over `target` with the same node count,
/// zero outside the support of `zeta_tilde`.
pub fn extend_by_zero(zeta_tilde: &GridFunction, target: Interval) -> Result<GridFunction> {
    let support = zeta_tilde.interval();
    let slack = 1e-12 * scale_of(&[target.lo(), target.hi()]);
    if !support.within(&target, slack) {
        return Err(Error::ImageMismatch(format!(
            "support [{}, {}] is not inside [{}, {}]",
            support.lo(),
            support.hi(),
            target.lo(),
            target.hi()
        )));
    }
    GridFunction::from_fn(target, zeta_tilde.len(), |z| {
        if z >= support.lo() - slack && z <= support.hi() + slack {
            zeta_tilde.eval_cubic(z)
        } else {
            0.0
        }
    })
}
