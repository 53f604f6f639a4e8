//! Reconstruction of the coefficient: data inversion, the regularized solve
//! `−αb″ + b = ζ` with `b(g0) = 0`, `b′(g1) = 0`, and differentiation.

use std::fmt;
use std::str::FromStr;

use crate::datagen::{NoiseKind, NoisyData, PerturbedMap, ProblemInstance};
use crate::error::{Error, Result};
use crate::func1d::{norm, CurveComposite, GridFunction, NormKind};
use crate::intervals::{admissible_eps, intersect_images};
use crate::operators::{apply_t3eps_pinv, check_alpha, extend_by_zero};
use crate::pwl::{check_mesh_conditions, derivative_bracket, project_l2, MeshConstants, UniformMesh};
use crate::tridiag;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    ExactData,
    /// Smooth perturbation of the curve map.
    NoisyC1,
    /// Rough perturbation of the curve map, smoothed by the L² projection.
    NoisyL2,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::ExactData => "exact",
            Mode::NoisyC1 => "noisy_c1",
            Mode::NoisyL2 => "noisy_l2",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "exact" => Ok(Mode::ExactData),
            "noisy_c1" => Ok(Mode::NoisyC1),
            "noisy_l2" => Ok(Mode::NoisyL2),
            other => Err(Error::InvalidParameter(format!("unknown mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularizationParams {
    pub alpha: f64,
    pub mode: Mode,
    /// Known value of the coefficient at the right end.
    pub shift_c: f64,
    /// Mesh width of the projection, present exactly in `NoisyL2` mode.
    pub mesh_h: Option<f64>,
    /// Accepted distance between `a0(g1)` and `shift_c`.
    pub shift_slack: f64,
}

impl RegularizationParams {
    pub fn exact(alpha: f64) -> Result<Self> {
        Self::build(alpha, Mode::ExactData, None)
    }

    pub fn noisy_c1(alpha: f64) -> Result<Self> {
        Self::build(alpha, Mode::NoisyC1, None)
    }

    pub fn noisy_l2(alpha: f64, h: f64) -> Result<Self> {
        Self::build(alpha, Mode::NoisyL2, Some(h))
    }

    pub fn with_shift(mut self, c: f64) -> Self {
        self.shift_c = c;
        self
    }

    pub fn with_shift_slack(mut self, slack: f64) -> Self {
        self.shift_slack = slack;
        self
    }

    fn build(alpha: f64, mode: Mode, mesh_h: Option<f64>) -> Result<Self> {
        let p = Self { alpha, mode, shift_c: 0.0, mesh_h, shift_slack: 0.0 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        match (self.mode, self.mesh_h) {
            (Mode::NoisyL2, Some(h)) if h > 0.0 && h <= 0.5 => {}
            (Mode::NoisyL2, Some(h)) => {
                return Err(Error::InvalidParameter(format!("mesh width {h} must lie in (0, 1/2]")))
            }
            (Mode::NoisyL2, None) => return Err(Error::InvalidParameter("noisy_l2 mode needs a mesh width".into())),
            (_, Some(_)) => return Err(Error::InvalidParameter("mesh width is only used in noisy_l2 mode".into())),
            _ => {}
        }
        if !self.shift_c.is_finite() || self.shift_slack.is_nan() || self.shift_slack < 0.0 {
            return Err(Error::InvalidParameter("shift and slack must be finite, slack non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub b_alpha: GridFunction,
    pub a_alpha: GridFunction,
    pub zeta_used: GridFunction,
    pub params: RegularizationParams,
}

impl Reconstruction {
    /// `(‖a0 − a‖_{L²}, ‖a0 − a‖_{H¹})` against the exact coefficient.
    pub fn errors(&self, problem: &ProblemInstance) -> Result<(f64, f64)> {
        let diff = self.a_alpha.map_with_nodes(|t, v| v - problem.a0_at(t))?;
        Ok((norm(&diff, NormKind::L2)?, norm(&diff, NormKind::H1)?))
    }
}

/// Second-order finite differences for `−αb″ + b = ζ`, `b(g0) = 0`,
/// `b′(g1) = 0` (ghost node mirrored across `g1`).
pub fn solve_ode(alpha: f64, zeta: &GridFunction) -> Result<GridFunction> {
    check_alpha(alpha)?;
    let n = zeta.len();
    if n < 5 {
        return Err(Error::TooFewNodes { min: 5, got: n });
    }
    let k = alpha / (zeta.spacing() * zeta.spacing());
    let mut lower = vec![-k; n];
    let mut diag = vec![1.0 + 2.0 * k; n];
    let mut upper = vec![-k; n];
    let mut rhs = zeta.values().to_vec();
    diag[0] = 1.0;
    upper[0] = 0.0;
    rhs[0] = 0.0;
    lower[n - 1] = -2.0 * k;
    let b = tridiag::solve(&lower, &diag, &upper, &rhs)?;
    GridFunction::new(zeta.interval(), b)
}

fn check_shift(problem: &ProblemInstance, params: &RegularizationParams) -> Result<()> {
    let a_end = problem.a0.last();
    let tol = params.shift_slack.max(1e-12 * a_end.abs().max(1.0));
    if (a_end - params.shift_c).abs() > tol {
        return Err(Error::ShiftMismatch { a_end, shift_c: params.shift_c });
    }
    Ok(())
}

fn finish(zeta: GridFunction, params: RegularizationParams) -> Result<Reconstruction> {
    let b_alpha = solve_ode(params.alpha, &zeta)?;
    let c = params.shift_c;
    let a_alpha = b_alpha.derivative().map(|v| v + c)?;
    Ok(Reconstruction { b_alpha, a_alpha, zeta_used: zeta, params })
}

/// Reconstruction from exact data: `ζ = b0 − c(x − g0)`.
pub fn reconstruct_exact(problem: &ProblemInstance, params: RegularizationParams) -> Result<Reconstruction> {
    params.validate()?;
    check_shift(problem, &params)?;
    let (g0, c) = (problem.interval.lo(), params.shift_c);
    let zeta = problem.b0.map_with_nodes(|x, v| v - c * (x - g0))?;
    finish(zeta, params)
}

/// Curve map used for inversion and the sup distance it may have from the
/// exact one.
fn effective_composite(
    problem: &ProblemInstance,
    noisy: &NoisyData,
    params: &RegularizationParams,
) -> Result<(CurveComposite, f64)> {
    match (&noisy.g_perturbed, params.mode) {
        (PerturbedMap::Smooth(c), Mode::NoisyC1) => {
            let limit = admissible_eps(problem);
            if noisy.eps >= limit {
                return Err(Error::InvalidParameter(format!(
                    "eps = {} is not below the admissible level {limit}",
                    noisy.eps
                )));
            }
            Ok((c.clone(), noisy.eps))
        }
        (PerturbedMap::Rough(g), Mode::NoisyL2) => {
            let h = params.mesh_h.expect("validated");
            let k = problem.constants;
            let consts = MeshConstants::calibrated(k.c_gamma, k.c_g);
            if !check_mesh_conditions(h, noisy.eps, problem.composite_h4_norm, &consts) {
                return Err(Error::MeshConditionViolated(format!(
                    "mesh width {h} is not admissible for eps = {}",
                    noisy.eps
                )));
            }
            let p = project_l2(UniformMesh::from_width(h)?, g)?;
            let (lo, hi) = derivative_bracket(&p);
            let floor = 0.5 * k.c_g * k.c_gamma;
            if lo < floor {
                return Err(Error::MeshConditionViolated(format!(
                    "projected map has slope {lo:.3e} below {floor:.3e}"
                )));
            }
            let ceiling = 2.0 * k.c_g_hi * k.c_gamma_hi;
            let composite = CurveComposite::new(p.sample(g.len())?, floor, ceiling.max(hi))?;
            let eta = consts.sup_deviation(h, noisy.eps, problem.composite_h4_norm);
            Ok((composite, eta))
        }
        _ => Err(Error::InvalidParameter(format!(
            "{} mode does not match the {} data",
            params.mode,
            match noisy.kind {
                NoiseKind::C1Noise => "C¹-perturbed",
                NoiseKind::L2Noise => "L²-perturbed",
            }
        ))),
    }
}

/// Reconstruction from perturbed curve and flux data.
pub fn reconstruct_noisy(
    problem: &ProblemInstance,
    noisy: &NoisyData,
    params: RegularizationParams,
) -> Result<Reconstruction> {
    params.validate()?;
    check_shift(problem, &params)?;
    let (eff, eta) = effective_composite(problem, noisy, &params)?;
    let common = intersect_images(&problem.composite, &eff, eta)?;
    let (g0, c) = (problem.interval.lo(), params.shift_c);
    let flux = if c != 0.0 {
        noisy.f_perturbed.zip_with(eff.forward(), |f, z| f - c * (z - g0))?
    } else {
        noisy.f_perturbed.clone()
    };
    let zeta_tilde = apply_t3eps_pinv(&eff, &common, &flux)?;
    let zeta = extend_by_zero(&zeta_tilde, problem.interval)?;
    let zeta = if zeta.len() == problem.spec.n {
        zeta
    } else {
        zeta.resample(problem.interval, problem.spec.n)?
    };
    finish(zeta, params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func1d::Interval;
    use crate::datagen::{make_problem, perturb_c1, CompositeKind, Profile, ProblemSpec};
    use crate::operators::{apply_t2alpha, RegularizedSecondDiff};

    fn sample(interval: Interval, n: usize, f: impl Fn(f64) -> f64) -> Result<GridFunction> {
        GridFunction::from_fn(interval, n, f)
    }

    fn problem(profile: Profile, composite: CompositeKind, c_end: f64, n: usize) -> ProblemInstance {
        make_problem(ProblemSpec { profile, composite, interval: Interval::unit(), n, c_end }).unwrap()
    }

    fn sup_diff(g: &GridFunction, f: impl Fn(f64) -> f64) -> f64 {
        (0..g.len()).map(|i| (g.values()[i] - f(g.node(i))).abs()).fold(0.0, f64::max)
    }

    fn b_closed(alpha: f64, x: f64) -> f64 {
        let s = alpha.sqrt();
        x - x * x / 2.0 - alpha + alpha * ((x - 1.0) / s).cosh() / (1.0 / s).cosh()
    }

    fn a_closed(alpha: f64, x: f64) -> f64 {
        let s = alpha.sqrt();
        (1.0 - x) + s * ((x - 1.0) / s).sinh() / (1.0 / s).cosh()
    }

    #[test]
    fn zero_rhs_gives_zero() {
        let z = GridFunction::zeros(Interval::unit(), 51).unwrap();
        assert!(solve_ode(0.1, &z).unwrap().values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn closed_form_solution() {
        let zeta = sample(Interval::unit(), 2001, |x| x - x * x / 2.0).unwrap();
        let b = solve_ode(0.01, &zeta).unwrap();
        assert!(sup_diff(&b, |x| b_closed(0.01, x)) < 1e-6);
    }

    #[test]
    fn manufactured_w_is_recovered() {
        // w(0) = 0 and w'(1) = 0
        let alpha = 0.05;
        let w = |x: f64| (x * x * x) / 3.0 - x * x + x;
        let w2 = |x: f64| 2.0 * x - 2.0;
        let zeta = sample(Interval::new(0.0, 1.0).unwrap(), 801, |x| -alpha * w2(x) + w(x)).unwrap();
        let b = solve_ode(alpha, &zeta).unwrap();
        let h = zeta.spacing();
        assert!(sup_diff(&b, w) < 10.0 * h * h);
    }

    #[test]
    fn boundary_residuals_and_forward_consistency() {
        let i = Interval::new(-1.0, 2.0).unwrap();
        let zeta = sample(i, 1201, |x| (2.0 * x).sin() + x * x).unwrap();
        let alpha = 0.2;
        let b = solve_ode(alpha, &zeta).unwrap();
        let h = zeta.spacing();
        let scale = 10.0;
        assert_eq!(b.first(), 0.0);
        assert!(b.derivative().last().abs() <= 10.0 * h * h * scale);
        let back = apply_t2alpha(&RegularizedSecondDiff::new(alpha, i).unwrap(), &b).unwrap();
        for k in 1..b.len() - 1 {
            assert!((back.values()[k] - zeta.values()[k]).abs() <= 10.0 * h * h * scale);
        }
    }

    #[test]
    fn rejects_bad_alpha() {
        let z = GridFunction::zeros(Interval::unit(), 51).unwrap();
        assert!(solve_ode(0.0, &z).is_err());
        assert!(solve_ode(1.0, &z).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(RegularizationParams::exact(0.5).is_ok());
        assert!(RegularizationParams::exact(1.5).is_err());
        assert!(RegularizationParams::noisy_l2(0.1, 0.01).is_ok());
        let mut p = RegularizationParams::noisy_c1(0.1).unwrap();
        p.mesh_h = Some(0.1);
        assert!(p.validate().is_err());
        p.mesh_h = None;
        p.mode = Mode::NoisyL2;
        assert!(p.validate().is_err());
    }

    #[test]
    fn exact_linear_profile_matches_closed_form() {
        let p = problem(Profile::Linear, CompositeKind::Identity, 0.0, 2001);
        for alpha in [0.1, 0.01] {
            let r = reconstruct_exact(&p, RegularizationParams::exact(alpha).unwrap()).unwrap();
            assert!(sup_diff(&r.a_alpha, |x| a_closed(alpha, x)) < 1e-5, "alpha = {alpha}");
            let (l2, _) = r.errors(&p).unwrap();
            // ‖a0'‖ = 1
            assert!(l2 <= alpha.sqrt() * 1.05);
        }
    }

    #[test]
    fn zero_coefficient() {
        let p = problem(Profile::Zero, CompositeKind::Identity, 0.0, 201);
        let r = reconstruct_exact(&p, RegularizationParams::exact(0.1).unwrap()).unwrap();
        assert!(r.a_alpha.values().iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn shift_invariance_exact() {
        let base = problem(Profile::Linear, CompositeKind::Identity, 0.0, 801);
        let shifted = problem(Profile::Linear, CompositeKind::Identity, 2.0, 801);
        let p = RegularizationParams::exact(0.01).unwrap();
        let r0 = reconstruct_exact(&base, p).unwrap();
        let r2 = reconstruct_exact(&shifted, p.with_shift(2.0)).unwrap();
        for (a, b) in r0.a_alpha.values().iter().zip(r2.a_alpha.values()) {
            assert!((a + 2.0 - b).abs() < 1e-10);
        }
        assert!(matches!(reconstruct_exact(&shifted, p), Err(Error::ShiftMismatch { .. })));
        assert!(reconstruct_exact(&shifted, p.with_shift(1.99).with_shift_slack(0.05)).is_ok());
    }

    #[test]
    fn zero_noise_matches_exact() {
        let p = problem(Profile::ShiftedCosine, CompositeKind::Identity, 0.0, 1001);
        let noisy = perturb_c1(&p, 0.0, 1).unwrap();
        let params = RegularizationParams::noisy_c1(0.01).unwrap();
        let a = reconstruct_noisy(&p, &noisy, params).unwrap();
        let b = reconstruct_exact(&p, RegularizationParams::exact(0.01).unwrap()).unwrap();
        for (x, y) in a.a_alpha.values().iter().zip(b.a_alpha.values()) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn noisy_error_obeys_the_split_bound() {
        let p = problem(Profile::Linear, CompositeKind::Warp(0.3), 0.0, 2001);
        let alpha = 1e-2;
        let noisy = perturb_c1(&p, 1e-3, 3).unwrap().with_flux_noise(&p, 1e-3).unwrap();
        let r = reconstruct_noisy(&p, &noisy, RegularizationParams::noisy_c1(alpha).unwrap()).unwrap();
        let (l2, _) = r.errors(&p).unwrap();
        let pert = r.zeta_used.zip_with(&p.b0, |a, b| a - b).unwrap();
        let bound = alpha.sqrt() + norm(&pert, NormKind::L2).unwrap() / alpha.sqrt();
        assert!(l2 <= bound * 1.01, "{l2} vs {bound}");
    }

    #[test]
    fn mode_must_match_data() {
        let p = problem(Profile::Linear, CompositeKind::Identity, 0.0, 201);
        let noisy = perturb_c1(&p, 1e-3, 1).unwrap();
        let r = reconstruct_noisy(&p, &noisy, RegularizationParams::noisy_l2(0.1, 0.1).unwrap());
        assert!(matches!(r, Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn mode_names_round_trip() {
        for m in [Mode::ExactData, Mode::NoisyC1, Mode::NoisyL2] {
            assert_eq!(m.to_string().parse::<Mode>().unwrap(), m);
        }
    }
}
