//! Sampled real functions on uniform grids over a closed interval.
//!
//! A [`GridFunction`] stores node values only. Its continuous extension is the
//! piecewise-linear interpolant for inversion and image computations, and a
//! monotone cubic (Fritsch–Carlson) interpolant for composition.

use crate::error::{Error, Result};

/// Constant of the sup-norm embedding `‖y‖_∞ ≤ C·max{3, 2|J|+1}·‖y‖_{H¹(J)}`.
///
/// `|y(x)|² ≤ ‖y‖²/|J| + 2‖y‖‖y'‖ ≤ (1 + 1/|J|)‖y‖²_{H¹}`, and
/// `sqrt(1 + 1/|J|) ≤ 1.106·max{3, 2|J|+1}` for every `|J| ≥ 0.1`.
/// `C = 1` fails for `y ≡ 1` once `|J| < 1/9`.
pub const SUP_EMBEDDING_C: f64 = 1.106;

/// Closed interval `[lo, hi]` with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn unit() -> Self {
        Self { lo: 0.0, hi: 1.0 }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// `self ⊆ other` up to an absolute slack.
    pub fn within(&self, other: &Interval, slack: f64) -> bool {
        self.lo >= other.lo - slack && self.hi <= other.hi + slack
    }
}

/// Real function sampled at `n ≥ 3` uniform nodes `lo + i·(hi−lo)/(n−1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    interval: Interval,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(interval: Interval, values: Vec<f64>) -> Result<Self> {
        if values.len() < 3 {
            return Err(Error::TooFewNodes { min: 3, got: values.len() });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { interval, values })
    }

    pub fn from_fn(interval: Interval, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooFewNodes { min: 3, got: n });
        }
        let h = interval.length() / (n - 1) as f64;
        let values = (0..n)
            .map(|i| f(node_at(interval, h, n, i)))
            .collect();
        Self::new(interval, values)
    }

    pub fn zeros(interval: Interval, n: usize) -> Result<Self> {
        Self::new(interval, vec![0.0; n])
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.interval.length() / (self.len() - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        node_at(self.interval, self.spacing(), self.len(), i)
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.node(i)).collect()
    }

    pub fn first(&self) -> f64 {
        self.values[0]
    }

    pub fn last(&self) -> f64 {
        self.values[self.len() - 1]
    }

    /// Same grid, values transformed pointwise.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.interval, self.values.iter().map(|&v| f(v)).collect())
    }

    /// Same grid, values `f(x_i, v_i)`.
    pub fn map_with_nodes(&self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, &v)| f(self.node(i), v))
            .collect();
        Self::new(self.interval, values)
    }

    /// Pointwise combination of two functions on the same grid.
    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if !self.same_grid(other) {
            return Err(Error::GridMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Self::new(self.interval, values)
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        self.len() == other.len() && self.interval == other.interval
    }

    /// First derivative: central differences inside, one-sided second-order
    /// stencils at both ends.
    pub fn derivative(&self) -> Self {
        let n = self.len();
        let h = self.spacing();
        let v = &self.values;
        let mut d = vec![0.0; n];
        d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
        d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
        for i in 1..n - 1 {
            d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
        }
        Self { interval: self.interval, values: d }
    }

    /// Second derivative: three-point stencil inside, one-sided second-order
    /// four-point stencils at both ends.
    pub fn second_derivative(&self) -> Result<Self> {
        let n = self.len();
        if n < 5 {
            return Err(Error::StencilTooSmall { min: 5, got: n });
        }
        let h2 = self.spacing() * self.spacing();
        let v = &self.values;
        let mut d = vec![0.0; n];
        d[0] = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / h2;
        d[n - 1] = (2.0 * v[n - 1] - 5.0 * v[n - 2] + 4.0 * v[n - 3] - v[n - 4]) / h2;
        for i in 1..n - 1 {
            d[i] = (v[i - 1] - 2.0 * v[i] + v[i + 1]) / h2;
        }
        Ok(Self { interval: self.interval, values: d })
    }

    /// Cell index `k` with `x ∈ [x_k, x_{k+1}]` and the local coordinate in `[0, 1]`.
    fn locate(&self, x: f64) -> (usize, f64) {
        let n = self.len();
        let t = ((x - self.interval.lo) / self.spacing()).clamp(0.0, (n - 1) as f64);
        let k = (t.floor() as usize).min(n - 2);
        (k, t - k as f64)
    }

    /// Piecewise-linear interpolant, clamped to the interval.
    pub fn eval_linear(&self, x: f64) -> f64 {
        let (k, u) = self.locate(x);
        self.values[k] * (1.0 - u) + self.values[k + 1] * u
    }

    /// Monotone cubic Hermite interpolant, clamped to the interval.
    pub fn eval_cubic(&self, x: f64) -> f64 {
        let (k, u) = self.locate(x);
        let h = self.spacing();
        let (y0, y1) = (self.values[k], self.values[k + 1]);
        let (m0, m1) = (self.pchip_slope(k), self.pchip_slope(k + 1));
        let u2 = u * u;
        let u3 = u2 * u;
        let h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
        let h10 = u3 - 2.0 * u2 + u;
        let h01 = -2.0 * u3 + 3.0 * u2;
        let h11 = u3 - u2;
        h00 * y0 + h10 * h * m0 + h01 * y1 + h11 * h * m1
    }

    fn secant(&self, k: usize) -> f64 {
        (self.values[k + 1] - self.values[k]) / self.spacing()
    }

    fn pchip_slope(&self, i: usize) -> f64 {
        let n = self.len();
        if i == 0 || i == n - 1 {
            let (d0, d1) = if i == 0 {
                (self.secant(0), self.secant(1))
            } else {
                (self.secant(n - 2), self.secant(n - 3))
            };
            let m = (3.0 * d0 - d1) / 2.0;
            if m.signum() != d0.signum() || d0 == 0.0 {
                0.0
            } else if d0.signum() != d1.signum() && m.abs() > 3.0 * d0.abs() {
                3.0 * d0
            } else {
                m
            }
        } else {
            let (d0, d1) = (self.secant(i - 1), self.secant(i));
            if d0 * d1 <= 0.0 {
                0.0
            } else {
                2.0 * d0 * d1 / (d0 + d1)
            }
        }
    }

    /// Samples the cubic interpolant on a fresh uniform grid.
    pub fn resample(&self, interval: Interval, n: usize) -> Result<Self> {
        Self::from_fn(interval, n, |x| self.eval_cubic(x))
    }

    /// Smallest and largest node value.
    pub fn min_max(&self) -> (f64, f64) {
        self.values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
    }
}

fn node_at(interval: Interval, h: f64, n: usize, i: usize) -> f64 {
    if i + 1 == n {
        interval.hi
    } else {
        interval.lo + i as f64 * h
    }
}

/// Monotone map `s ↦ g(γ(s))` on `[0, 1]` with derivative bounds
/// `deriv_lo ≤ |d/ds| ≤ deriv_hi`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveComposite {
    forward: GridFunction,
    deriv_lo: f64,
    deriv_hi: f64,
}

/// Relative slack per unit of grid spacing when checking sampled derivatives
/// against the bracket; covers the difference-quotient error.
const BRACKET_SLACK: f64 = 1.0;

impl CurveComposite {
    pub fn new(forward: GridFunction, deriv_lo: f64, deriv_hi: f64) -> Result<Self> {
        if forward.interval() != Interval::unit() {
            return Err(Error::InvalidParameter("curve map must be sampled on [0, 1]".into()));
        }
        if !(deriv_lo > 0.0 && deriv_lo <= deriv_hi) {
            return Err(Error::InvalidParameter(format!(
                "derivative bracket [{deriv_lo}, {deriv_hi}] must satisfy 0 < lo <= hi"
            )));
        }
        let v = forward.values();
        let rising = v[1] > v[0];
        if let Some(k) = v.windows(2).position(|w| !(if rising { w[1] > w[0] } else { w[1] < w[0] })) {
            return Err(Error::MonotonicityViolation(format!(
                "consecutive samples {k} and {} do not share the direction of the first step",
                k + 1
            )));
        }
        let d = forward.derivative();
        let slack = BRACKET_SLACK * forward.spacing();
        if let Some((i, dv)) = d
            .values()
            .iter()
            .enumerate()
            .find(|(_, dv)| dv.abs() < deriv_lo * (1.0 - slack) || dv.abs() > deriv_hi * (1.0 + slack))
        {
            return Err(Error::MonotonicityViolation(format!(
                "|derivative| = {} at node {i} leaves the bracket [{deriv_lo}, {deriv_hi}]",
                dv.abs()
            )));
        }
        Ok(Self { forward, deriv_lo, deriv_hi })
    }

    /// Skips the monotonicity and bracket checks; for test fixtures such as
    /// `s ↦ s²` whose slope vanishes at an endpoint.
    #[cfg(test)]
    pub(crate) fn unchecked(forward: GridFunction, deriv_lo: f64, deriv_hi: f64) -> Self {
        Self { forward, deriv_lo, deriv_hi }
    }

    pub fn forward(&self) -> &GridFunction {
        &self.forward
    }

    pub fn deriv_lo(&self) -> f64 {
        self.deriv_lo
    }

    pub fn deriv_hi(&self) -> f64 {
        self.deriv_hi
    }

    pub fn is_increasing(&self) -> bool {
        self.forward.values()[1] > self.forward.values()[0]
    }

    /// Image of the piecewise-linear extension.
    pub fn image(&self) -> Interval {
        let (a, b) = (self.forward.first(), self.forward.last());
        Interval { lo: a.min(b), hi: a.max(b) }
    }
}

/// Composite Simpson rule; an even node count closes with one trapezoid.
pub fn integrate(f: &GridFunction) -> f64 {
    let v = f.values();
    let h = f.spacing();
    let n = v.len();
    let m = if n % 2 == 1 { n } else { n - 1 };
    let mut s = v[0] + v[m - 1];
    for (i, &x) in v.iter().enumerate().take(m - 1).skip(1) {
        s += if i % 2 == 1 { 4.0 * x } else { 2.0 * x };
    }
    let mut total = s * h / 3.0;
    if m < n {
        total += 0.5 * h * (v[n - 2] + v[n - 1]);
    }
    total
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    L2,
    H1,
    H2,
    Linf,
}

/// Discrete norms; Sobolev norms use the Hilbertian sum of squared
/// derivative L² norms.
pub fn norm(f: &GridFunction, kind: NormKind) -> Result<f64> {
    let l2sq = |g: &GridFunction| integrate(&g.map(|v| v * v).expect("finite"));
    match kind {
        NormKind::Linf => Ok(f.values().iter().fold(0.0, |m, v| m.max(v.abs()))),
        NormKind::L2 => Ok(l2sq(f).sqrt()),
        NormKind::H1 | NormKind::H2 => {
            if f.len() < 5 {
                return Err(Error::StencilTooSmall { min: 5, got: f.len() });
            }
            let mut sq = l2sq(f) + l2sq(&f.derivative());
            if kind == NormKind::H2 {
                sq += l2sq(&f.second_derivative()?);
            }
            Ok(sq.sqrt())
        }
    }
}

/// Running integral `F(x) = ∫_lo^x f` with `F(lo) = 0`; exact for quadratics.
pub fn cumulative_integral(f: &GridFunction) -> GridFunction {
    let v = f.values();
    let n = v.len();
    let h = f.spacing();
    let mut out = vec![0.0; n];
    let mut k = 0;
    while k + 2 < n {
        out[k + 1] = out[k] + h * (5.0 * v[k] + 8.0 * v[k + 1] - v[k + 2]) / 12.0;
        out[k + 2] = out[k] + h * (v[k] + 4.0 * v[k + 1] + v[k + 2]) / 3.0;
        k += 2;
    }
    if k + 1 < n {
        out[k + 1] = out[k] + h * (-v[k - 1] + 8.0 * v[k] + 5.0 * v[k + 1]) / 12.0;
    }
    GridFunction { interval: f.interval(), values: out }
}

/// Solves `forward(s) = z` on the piecewise-linear extension of the curve map.
pub fn invert_monotone(c: &CurveComposite, z: f64) -> Result<f64> {
    let f = c.forward();
    let v = f.values();
    let n = v.len();
    let image = c.image();
    let tol = 1e-12 * z.abs().max(1.0);
    if !(z >= image.lo - tol && z <= image.hi + tol) {
        return Err(Error::OutOfRange { z, lo: image.lo, hi: image.hi });
    }
    // Work with an increasing sequence: flip the sign for decreasing maps.
    let sign = if c.is_increasing() { 1.0 } else { -1.0 };
    let target = sign * z;
    let (mut a, mut b) = (0usize, n - 1);
    if target <= sign * v[a] {
        return Ok(f.node(a));
    }
    if target >= sign * v[b] {
        return Ok(f.node(b));
    }
    while b - a > 1 {
        let mid = (a + b) / 2;
        if sign * v[mid] <= target {
            a = mid;
        } else {
            b = mid;
        }
    }
    let (fa, fb) = (v[a], v[a + 1]);
    let u = ((z - fa) / (fb - fa)).clamp(0.0, 1.0);
    let (sa, sb) = (f.node(a), f.node(a + 1));
    Ok(sa + u * (sb - sa))
}

/// `(‖f‖_∞, C·max{3, 2|J|+1}·‖f‖_{H¹})` with `C` = [`SUP_EMBEDDING_C`].
pub fn sup_bound_check(f: &GridFunction) -> Result<(f64, f64)> {
    let lhs = norm(f, NormKind::Linf)?;
    let h1 = norm(f, NormKind::H1)?;
    let factor = 3.0f64.max(2.0 * f.interval().length() + 1.0);
    Ok((lhs, SUP_EMBEDDING_C * factor * h1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(n: usize, f: impl Fn(f64) -> f64) -> GridFunction {
        GridFunction::from_fn(Interval::unit(), n, f).unwrap()
    }

    fn composite(n: usize, f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> CurveComposite {
        CurveComposite::new(unit(n, f), lo, hi).unwrap()
    }

    #[test]
    fn interval_rejects_degenerate_bounds() {
        assert!(Interval::new(1.0, 1.0).is_err());
        assert!(Interval::new(2.0, 1.0).is_err());
        assert!(Interval::new(0.0, f64::NAN).is_err());
        assert_eq!(Interval::new(-1.0, 3.0).unwrap().length(), 4.0);
    }

    #[test]
    fn grid_function_rejects_short_or_nonfinite_samples() {
        let i = Interval::unit();
        assert_eq!(GridFunction::new(i, vec![0.0, 1.0]), Err(Error::TooFewNodes { min: 3, got: 2 }));
        assert_eq!(GridFunction::new(i, vec![0.0, f64::INFINITY, 1.0]), Err(Error::NonFinite { index: 1 }));
    }

    #[test]
    fn nodes_are_uniform_and_hit_the_end() {
        let f = GridFunction::zeros(Interval::new(-1.0, 2.0).unwrap(), 7).unwrap();
        assert_eq!(f.spacing(), 0.5);
        assert_eq!(f.node(0), -1.0);
        assert_eq!(f.node(6), 2.0);
        assert!((f.node(3) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn integrate_examples() {
        assert_eq!(integrate(&unit(101, |_| 0.0)), 0.0);
        assert!((integrate(&unit(101, |x| x)) - 0.5).abs() < 1e-12);
        assert!((integrate(&unit(101, |x| x * x)) - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn integrate_even_count_uses_trapezoid_tail() {
        let f = unit(100, |x| x);
        assert!((integrate(&f) - 0.5).abs() < 1e-12);
        let g = unit(1000, |x| (3.0 * x).exp());
        let exact = ((3.0f64).exp() - 1.0) / 3.0;
        assert!((integrate(&g) - exact).abs() < 1e-6);
    }

    #[test]
    fn norm_examples() {
        let one = unit(101, |_| 1.0);
        assert!((norm(&one, NormKind::L2).unwrap() - 1.0).abs() < 1e-12);
        assert!((norm(&one, NormKind::H1).unwrap() - 1.0).abs() < 1e-12);

        let x = unit(101, |x| x);
        assert!((norm(&x, NormKind::L2).unwrap() - (1.0f64 / 3.0).sqrt()).abs() < 1e-8);
        assert!((norm(&x, NormKind::H1).unwrap() - (4.0f64 / 3.0).sqrt()).abs() < 1e-8);

        let s = unit(401, |x| (std::f64::consts::PI * x).sin());
        assert!((norm(&s, NormKind::L2).unwrap() - 0.5f64.sqrt()).abs() < 1e-6);
        assert_eq!(norm(&s, NormKind::Linf).unwrap(), 1.0);
    }

    #[test]
    fn sobolev_norms_need_five_nodes() {
        let f = unit(4, |x| x);
        assert_eq!(norm(&f, NormKind::H1), Err(Error::StencilTooSmall { min: 5, got: 4 }));
        assert_eq!(norm(&f, NormKind::H2), Err(Error::StencilTooSmall { min: 5, got: 4 }));
        assert!(norm(&f, NormKind::L2).is_ok());
    }

    #[test]
    fn h2_norm_of_quadratic() {
        // x²: ∫x⁴ = 1/5, ∫4x² = 4/3, ∫4 = 4
        let f = unit(201, |x| x * x);
        let exact = (1.0 / 5.0 + 4.0 / 3.0 + 4.0f64).sqrt();
        assert!((norm(&f, NormKind::H2).unwrap() - exact).abs() < 1e-10);
    }

    #[test]
    fn derivative_stencils_are_exact_on_quadratics() {
        let f = unit(11, |x| 3.0 * x * x - x + 2.0);
        for (i, d) in f.derivative().values().iter().enumerate() {
            assert!((d - (6.0 * f.node(i) - 1.0)).abs() < 1e-11);
        }
        for d in f.second_derivative().unwrap().values() {
            assert!((d - 6.0).abs() < 1e-9);
        }
    }

    #[test]
    fn cumulative_integral_examples() {
        assert!(cumulative_integral(&unit(51, |_| 0.0)).values().iter().all(|&v| v == 0.0));
        let one = cumulative_integral(&unit(51, |_| 1.0));
        for (i, v) in one.values().iter().enumerate() {
            assert!((v - one.node(i)).abs() < 1e-12);
        }
        for n in [50, 51] {
            let f = cumulative_integral(&unit(n, |t| 1.0 - t));
            for (i, v) in f.values().iter().enumerate() {
                let x = f.node(i);
                assert!((v - (x - x * x / 2.0)).abs() < 1e-10, "n={n} i={i}");
            }
        }
    }

    #[test]
    fn cumulative_integral_round_trip() {
        let f = unit(401, |x| (2.0 * x).sin() + x * x * x);
        let back = cumulative_integral(&f).derivative();
        let h = f.spacing();
        let worst = (1..f.len() - 1)
            .map(|i| (back.values()[i] - f.values()[i]).abs())
            .fold(0.0, f64::max);
        assert!(worst <= 10.0 * h * h, "worst = {worst}");
    }

    #[test]
    fn invert_monotone_examples() {
        let id = composite(101, |s| s, 1.0, 1.0);
        assert_eq!(invert_monotone(&id, 0.25).unwrap(), 0.25);
        let sq = CurveComposite::new(unit(101, |s| s * s), 1e-3, 2.0);
        // s² has zero slope at 0, so it cannot carry a positive bracket there.
        assert!(sq.is_err());
        let sq = composite(101, |s| (s + 0.1) * (s + 0.1) - 0.01, 0.19, 2.21);
        let s = invert_monotone(&sq, 0.35).unwrap();
        assert!((s - 0.5).abs() < 1e-10);
        assert!(matches!(invert_monotone(&id, 1.5), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn invert_monotone_square_on_its_nodes() {
        let c = CurveComposite::unchecked(unit(101, |s| s * s), 0.01, 2.0);
        assert!((invert_monotone(&c, 0.25).unwrap() - 0.5).abs() < 1e-10);
    }

    #[test]
    fn invert_monotone_handles_decreasing_maps() {
        let c = composite(201, |s| 2.0 - 1.5 * s, 1.5, 1.5);
        let s = invert_monotone(&c, 1.25).unwrap();
        assert!((s - 0.5).abs() < 1e-12);
        assert_eq!(c.image(), Interval::new(0.5, 2.0).unwrap());
    }

    #[test]
    fn composite_rejects_non_monotone_and_bracket_violations() {
        let wiggle = unit(101, |s| (6.0 * s).sin());
        assert!(matches!(CurveComposite::new(wiggle, 0.1, 10.0), Err(Error::MonotonicityViolation(_))));
        let steep = unit(101, |s| 3.0 * s);
        assert!(matches!(CurveComposite::new(steep, 0.5, 2.0), Err(Error::MonotonicityViolation(_))));
    }

    #[test]
    fn cubic_interpolant_reproduces_nodes_and_is_accurate() {
        let f = unit(201, |x| (3.0 * x).sin());
        for i in 0..f.len() {
            assert!((f.eval_cubic(f.node(i)) - f.values()[i]).abs() < 1e-15);
        }
        let h = f.spacing();
        for k in 0..100 {
            let x = (k as f64 + 0.37) / 100.0;
            let err = (f.eval_cubic(x) - (3.0 * x).sin()).abs();
            // slopes are flattened next to the extremum at π/6
            assert!(err < h * h);
            if (0.05..0.3).contains(&x) {
                assert!(err < 2e-7);
            }
        }
    }

    #[test]
    fn sup_bound_examples() {
        let (l, r) = sup_bound_check(&unit(101, |_| 1.0)).unwrap();
        assert_eq!(l, 1.0);
        assert!((r - 3.0 * SUP_EMBEDDING_C).abs() < 1e-12);
        let (l, r) = sup_bound_check(&unit(101, |x| x)).unwrap();
        assert!((l - 1.0).abs() < 1e-15 && l <= r);
        let g = GridFunction::from_fn(Interval::new(0.0, 2.0).unwrap(), 801, |x| (10.0 * x).sin()).unwrap();
        let (l, r) = sup_bound_check(&g).unwrap();
        assert!(l <= r);
    }

    #[test]
    fn unit_constant_is_too_small_for_short_intervals() {
        let g = GridFunction::from_fn(Interval::new(0.0, 0.1).unwrap(), 51, |_| 1.0).unwrap();
        let (l, r) = sup_bound_check(&g).unwrap();
        assert!(l <= r);
        assert!(l > r / SUP_EMBEDDING_C, "with C = 1 the bound would fail here");
    }
}
