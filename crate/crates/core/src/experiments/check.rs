//! Randomized invariant suite behind the `check` subcommand.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::func1d::{integrate, invert_monotone, norm, sup_bound_check, CurveComposite, GridFunction, Interval, NormKind};
use crate::intervals::intersect_images;
use crate::operators::{apply_l, apply_t1, apply_t2alpha, apply_t3, project_w, RegularizedSecondDiff, WProjection};
use crate::pwl::{galerkin_residual, inverse_inequality_check, project_l2, InverseOrder, PwlFunction, UniformMesh};

/// Result of one property.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Random smooth function: a cubic plus three low-frequency sinusoids.
#[derive(Debug, Clone)]
struct SmoothSample {
    poly: [f64; 4],
    waves: [(f64, f64, f64); 3],
}

impl SmoothSample {
    fn draw(rng: &mut ChaCha8Rng) -> Self {
        let mut poly = [0.0; 4];
        for c in &mut poly {
            *c = rng.random_range(-1.0..1.0);
        }
        let mut waves = [(0.0, 0.0, 0.0); 3];
        for w in &mut waves {
            *w = (rng.random_range(-1.0..1.0), rng.random_range(0.5..6.0), rng.random_range(0.0..6.3));
        }
        Self { poly, waves }
    }

    /// Value at the normalized coordinate `u ∈ [0, 1]`.
    fn at(&self, u: f64) -> f64 {
        let p = self.poly.iter().rev().fold(0.0, |acc, c| acc * u + c);
        p + self.waves.iter().map(|(a, k, ph)| a * (k * u + ph).sin()).sum::<f64>()
    }

    fn on(&self, interval: Interval, n: usize) -> Result<GridFunction> {
        let (lo, len) = (interval.lo(), interval.length());
        GridFunction::from_fn(interval, n, |t| self.at((t - lo) / len))
    }
}

fn random_interval(rng: &mut ChaCha8Rng, min_len: f64, max_len: f64) -> Interval {
    let lo = rng.random_range(-2.0..2.0);
    let len = min_len * (max_len / min_len).powf(rng.random_range(0.0..1.0));
    Interval::new(lo, lo + len).expect("positive length")
}

/// Increasing map `s ↦ lo + len·γ(s)` with `γ` a warp of amplitude `a`.
fn random_composite(rng: &mut ChaCha8Rng, n: usize) -> Result<(CurveComposite, Interval)> {
    let image = random_interval(rng, 0.5, 4.0);
    let a = rng.random_range(0.0..0.8);
    let tau = 2.0 * std::f64::consts::PI;
    let (lo, len) = (image.lo(), image.length());
    let forward = GridFunction::from_fn(Interval::unit(), n, |s| lo + len * (s + a * (tau * s).sin() / tau))?;
    Ok((CurveComposite::new(forward, len * (1.0 - a), len * (1.0 + a))?, image))
}

fn outcome(name: &'static str, worst: f64, limit: f64, what: &str) -> CheckOutcome {
    CheckOutcome { name, passed: worst <= limit, detail: format!("{what} {worst:.3e} (limit {limit:.3e})") }
}

fn ratio(lhs: f64, rhs: f64) -> f64 {
    if rhs > 0.0 {
        lhs / rhs
    } else if lhs > 0.0 {
        f64::INFINITY
    } else {
        0.0
    }
}

const SAMPLES: usize = 200;
const GRID: usize = 801;

/// `‖w‖ ≤ ‖T₁w‖_{H¹} ≤ (1 + √|I|)‖w‖` with relative slack 1e-2.
///
/// The integration operator has L² norm `2|I|/π`, so the upper constant only
/// holds for `|I|` below about 4.7; lengths are drawn from `[0.1, 4]`.
fn integration_sandwich(rng: &mut ChaCha8Rng) -> Result<CheckOutcome> {
    let mut worst: f64 = 0.0;
    for _ in 0..SAMPLES {
        let interval = random_interval(rng, 0.1, 4.0);
        let w = SmoothSample::draw(rng).on(interval, GRID)?;
        let lw = norm(&w, NormKind::L2)?;
        let t1 = norm(&apply_t1(&w), NormKind::H1)?;
        let upper = (1.0 + interval.length().sqrt()) * lw;
        worst = worst.max(ratio(lw, t1) - 1.0).max(ratio(t1, upper) - 1.0);
    }
    Ok(outcome("integration sandwich", worst, 1e-2, "worst relative excess"))
}

/// `‖(T₂^α − T₂)w‖ / ‖w‖_{H²} ≤ α`, shrinking with `α`.
fn regularization_gap(rng: &mut ChaCha8Rng) -> Result<CheckOutcome> {
    let interval = Interval::unit();
    let alphas = [0.5, 0.1, 1e-2, 1e-3, 1e-4];
    let mut sup_gap = vec![0.0f64; alphas.len()];
    for _ in 0..SAMPLES / 4 {
        let w = SmoothSample::draw(rng).on(interval, GRID)?;
        let h2 = norm(&w, NormKind::H2)?;
        for (gap, &alpha) in sup_gap.iter_mut().zip(&alphas) {
            let t2a = apply_t2alpha(&RegularizedSecondDiff::new(alpha, interval)?, &w)?;
            let diff = t2a.zip_with(&w, |a, b| a - b)?;
            *gap = gap.max(norm(&diff, NormKind::L2)? / h2);
        }
    }
    let worst = sup_gap.iter().zip(&alphas).map(|(g, a)| g / a).fold(0.0, f64::max);
    let shrinking = sup_gap.windows(2).all(|p| p[1] < p[0]);
    Ok(CheckOutcome {
        name: "regularization gap",
        passed: worst <= 1.0 + 1e-12 && shrinking,
        detail: format!("worst gap/alpha {worst:.3e}, gaps decrease with alpha: {shrinking}"),
    })
}

/// Lower bounds `‖T₂^α w‖ ≥ α‖w‖_{H²}` and `≥ √α‖w‖_{H¹}` on the projected space.
fn lower_bounds(rng: &mut ChaCha8Rng) -> Result<CheckOutcome> {
    let interval = Interval::unit();
    let proj = WProjection::new(interval);
    let mut worst: f64 = 0.0;
    for _ in 0..SAMPLES {
        let alpha = 10f64.powf(rng.random_range(-2.0..-0.3));
        let w = project_w(&proj, alpha, &SmoothSample::draw(rng).on(interval, GRID)?)?;
        let t2a = norm(&apply_t2alpha(&RegularizedSecondDiff::new(alpha, interval)?, &w)?, NormKind::L2)?;
        let by_h2 = alpha * norm(&w, NormKind::H2)?;
        let by_h1 = alpha.sqrt() * norm(&w, NormKind::H1)?;
        worst = worst.max(ratio(by_h2, t2a) - 1.0).max(ratio(by_h1, t2a) - 1.0);
    }
    Ok(outcome("lower bounds on projected space", worst, 1e-2, "worst relative violation"))
}

/// `α(Lx)″ = Lx`, `(x − Lx)(g0) = 0`, zero end slope and idempotence.
fn projection_identities(rng: &mut ChaCha8Rng) -> Result<CheckOutcome> {
    let mut null_excess: f64 = 0.0;
    let mut boundary: f64 = 0.0;
    let mut idempotence: f64 = 0.0;
    for _ in 0..SAMPLES / 4 {
        let interval = random_interval(rng, 0.5, 3.0);
        let proj = WProjection::new(interval);
        let alpha = 10f64.powf(rng.random_range(-2.0..-0.3));
        let x = SmoothSample::draw(rng).on(interval, GRID)?;
        let lx = apply_l(&proj, alpha, &x)?;
        let d2 = lx.second_derivative()?;
        let scale = lx.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let residual = lx.values().iter().zip(d2.values()).fold(0.0f64, |m, (v, d)| m.max((alpha * d - v).abs()));
        let h = lx.spacing();
        null_excess = null_excess.max(ratio(residual, 10.0 * h * h * scale / alpha));
        let w = project_w(&proj, alpha, &x)?;
        let xs = norm(&x, NormKind::Linf)?.max(1.0);
        boundary = boundary.max((w.first().abs() + w.derivative().last().abs() * h) / xs);
        let ww = project_w(&proj, alpha, &w)?;
        idempotence = idempotence.max(ww.values().iter().zip(w.values()).fold(0.0f64, |m, (a, b)| m.max((a - b).abs())) / xs);
    }
    Ok(CheckOutcome {
        name: "null space and projection identities",
        passed: null_excess <= 1.0 && boundary <= 1e-12 && idempotence <= 1e-10,
        detail: format!(
            "null-space residual/limit {null_excess:.3e}, boundary residual {boundary:.3e}, idempotence {idempotence:.3e}"
        ),
    })
}

/// `m‖T₃w‖² ≤ ‖w‖² ≤ M‖T₃w‖²` with `[m, M]` the derivative bracket of the curve map.
fn composition_sandwich(rng: &mut ChaCha8Rng) -> Result<CheckOutcome> {
    let mut worst: f64 = 0.0;
    for _ in 0..SAMPLES / 2 {
        let (c, image) = random_composite(rng, 2001)?;
        let w = SmoothSample::draw(rng).on(image, 2001)?;
        let t3 = norm(&apply_t3(&c, &w)?, NormKind::L2)?.powi(2);
        let ww = norm(&w, NormKind::L2)?.powi(2);
        worst = worst.max(ratio(c.deriv_lo() * t3, ww) - 1.0).max(ratio(ww, c.deriv_hi() * t3) - 1.0);
    }
    Ok(outcome("composition sandwich", worst, 1e-2, "worst relative excess"))
}

/// `∫w₁w₂″ = −∫w₁′w₂′` for projected `w₁, w₂`.
fn integration_by_parts(rng: &mut ChaCha8Rng) -> Result<CheckOutcome> {
    let interval = Interval::unit();
    let proj = WProjection::new(interval);
    let mut worst: f64 = 0.0;
    for _ in 0..SAMPLES / 2 {
        let alpha = 10f64.powf(rng.random_range(-2.0..-0.3));
        let w1 = project_w(&proj, alpha, &SmoothSample::draw(rng).on(interval, GRID)?)?;
        let w2 = project_w(&proj, alpha, &SmoothSample::draw(rng).on(interval, GRID)?)?;
        let lhs = integrate(&w1.zip_with(&w2.second_derivative()?, |a, b| a * b)?);
        let rhs = -integrate(&w1.derivative().zip_with(&w2.derivative(), |a, b| a * b)?);
        let scale = norm(&w1, NormKind::H1)? * norm(&w2, NormKind::H2)?;
        worst = worst.max((lhs - rhs).abs() / scale);
    }
    let h = 1.0 / (GRID - 1) as f64;
    Ok(outcome("integration by parts on projected space", worst, 10.0 * h, "worst relative defect"))
}

/// `‖f‖_∞ ≤ C·max{3, 2|J|+1}·‖f‖_{H¹}` on intervals of length 0.1 to 10.
fn sup_norm_embedding(rng: &mut ChaCha8Rng) -> Result<CheckOutcome> {
    let mut worst: f64 = 0.0;
    for _ in 0..SAMPLES {
        let interval = random_interval(rng, 0.1, 10.0);
        let f = SmoothSample::draw(rng).on(interval, GRID)?;
        let (lhs, rhs) = sup_bound_check(&f)?;
        worst = worst.max(ratio(lhs, rhs));
    }
    Ok(outcome("sup-norm embedding", worst, 1.0, "worst lhs/rhs"))
}

/// Galerkin orthogonality of `Π_h` and its second-order L² rate.
fn projection_rate(rng: &mut ChaCha8Rng) -> Result<CheckOutcome> {
    let fine = 6401;
    let mut residual: f64 = 0.0;
    for _ in 0..20 {
        let w = SmoothSample::draw(rng).on(Interval::unit(), fine)?;
        let mesh = UniformMesh::new(rng.random_range(2..=400))?;
        let p = project_l2(mesh, &w)?;
        residual = residual.max(galerkin_residual(&w, &p)? / norm(&w, NormKind::L2)?.max(1.0));
    }
    let w = GridFunction::from_fn(Interval::unit(), fine, |s| (3.0 * s).sin() + s * s * s)?;
    let pairs: Vec<(f64, f64)> = [10, 20, 40, 80, 160]
        .iter()
        .map(|&cells| {
            let mesh = UniformMesh::new(cells)?;
            let p = project_l2(mesh, &w)?.sample(fine)?;
            Ok((mesh.h(), norm(&p.zip_with(&w, |a, b| a - b)?, NormKind::L2)?))
        })
        .collect::<Result<_>>()?;
    let (slope, _) = super::sweep::fit_rate(&pairs)?;
    Ok(CheckOutcome {
        name: "projection orthogonality and rate",
        passed: residual <= 1e-10 && (1.8..=2.2).contains(&slope),
        detail: format!("max Galerkin residual {residual:.3e}, L2 rate {slope:.3}"),
    })
}

/// Both inverse inequalities on random piecewise-linear functions.
fn inverse_inequalities(rng: &mut ChaCha8Rng) -> Result<CheckOutcome> {
    let mut worst: f64 = 0.0;
    for _ in 0..SAMPLES {
        let mesh = UniformMesh::new(rng.random_range(2..=500))?;
        let coeffs = (0..=mesh.cells()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let p = PwlFunction::new(mesh, coeffs)?;
        for order in [InverseOrder::Zero, InverseOrder::One] {
            let (lhs, rhs) = inverse_inequality_check(mesh, &p, order);
            worst = worst.max(ratio(lhs, rhs));
        }
    }
    Ok(outcome("inverse inequalities", worst, 1.0 + 1e-12, "worst lhs/rhs"))
}

/// Image intersection against a brute-force scan of both curve maps.
fn intersection_brute_force(rng: &mut ChaCha8Rng) -> Result<CheckOutcome> {
    let mut worst: f64 = 0.0;
    let mut gaps_ok = true;
    for _ in 0..SAMPLES / 2 {
        let (c, _) = random_composite(rng, 1001)?;
        let eps = rng.random_range(0.0..0.02) * c.image().length();
        let (amp, freq, phase) = (rng.random_range(-1.0..1.0) * eps, rng.random_range(0.5..3.0), rng.random_range(0.0..6.3));
        let forward = c.forward().map_with_nodes(|s, v| v + amp * (std::f64::consts::PI * freq * s + phase).sin())?;
        let (d_lo, d_hi) = forward.derivative().values().iter().fold((f64::INFINITY, 0.0f64), |(l, h), d| (l.min(d.abs()), h.max(d.abs())));
        let perturbed = CurveComposite::new(forward, 0.9 * d_lo, 1.1 * d_hi)?;
        let res = intersect_images(&c, &perturbed, eps)?;
        let (a_lo, a_hi) = c.forward().min_max();
        let (b_lo, b_hi) = perturbed.forward().min_max();
        let (lo, hi) = (a_lo.max(b_lo), a_hi.min(b_hi));
        let scan = perturbed.forward().nodes().into_iter().zip(perturbed.forward().values());
        let inside: Vec<f64> = scan.filter(|(_, v)| **v >= lo && **v <= hi).map(|(s, _)| s).collect();
        let spacing = perturbed.forward().spacing();
        let pre_err = (res.preimage.lo() - inside[0]).abs().max((res.preimage.hi() - inside[inside.len() - 1]).abs());
        worst = worst
            .max((res.common.lo() - lo).abs())
            .max((res.common.hi() - hi).abs())
            .max((pre_err - spacing).max(0.0));
        gaps_ok &= res.endpoint_gaps.0 <= eps + 1e-12 && res.endpoint_gaps.1 <= eps + 1e-12;
        for z in [res.common.lo(), res.common.hi()] {
            gaps_ok &= invert_monotone(&c, z).is_ok();
        }
    }
    Ok(CheckOutcome {
        name: "image intersection",
        passed: worst <= 1e-12 && gaps_ok,
        detail: format!("worst deviation from scan {worst:.3e}, endpoint gaps within budget: {gaps_ok}"),
    })
}

type Property = fn(&mut ChaCha8Rng) -> Result<CheckOutcome>;

const PROPERTIES: [(&str, Property); 10] = [
    ("integration sandwich", integration_sandwich),
    ("regularization gap", regularization_gap),
    ("lower bounds on projected space", lower_bounds),
    ("null space and projection identities", projection_identities),
    ("composition sandwich", composition_sandwich),
    ("integration by parts on projected space", integration_by_parts),
    ("sup-norm embedding", sup_norm_embedding),
    ("projection orthogonality and rate", projection_rate),
    ("inverse inequalities", inverse_inequalities),
    ("image intersection", intersection_brute_force),
];

/// Runs every property with a fixed seed; a property that errors counts as failed.
pub fn run_checks(seed: u64) -> Vec<CheckOutcome> {
    let start = Instant::now();
    let mut out: Vec<CheckOutcome> = PROPERTIES
        .iter()
        .enumerate()
        .map(|(i, (name, prop))| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            prop(&mut rng).unwrap_or_else(|e| CheckOutcome { name, passed: false, detail: format!("error: {e}") })
        })
        .collect();
    let secs = start.elapsed().as_secs_f64();
    out.push(CheckOutcome { name: "suite runtime", passed: secs < 20.0, detail: format!("{secs:.2} s (limit 20 s)") });
    out
}
