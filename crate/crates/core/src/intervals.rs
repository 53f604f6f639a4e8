//! Images of exact and perturbed curve maps and their intersection.

use crate::datagen::ProblemInstance;
use crate::error::{Error, Result};
use crate::func1d::{invert_monotone, CurveComposite, Interval};

/// Common part of two images together with its preimage under the perturbed map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntersectionResult {
    pub common: Interval,
    pub preimage: Interval,
    /// Distances between the lower and between the upper image endpoints.
    pub endpoint_gaps: (f64, f64),
}

/// Intersects the images of `phi1` (exact) and `phi2` (perturbed).
///
/// Requires `‖phi1 − phi2‖_∞ ≤ eta` on the shared grid and
/// `2·eta < min(|image(phi1)|, |image(phi2)|)`, which together force the
/// endpoints to move by at most `eta` and the intersection to stay proper.
pub fn intersect_images(phi1: &CurveComposite, phi2: &CurveComposite, eta: f64) -> Result<IntersectionResult> {
    if eta.is_nan() || eta < 0.0 {
        return Err(Error::InvalidParameter(format!("eta = {eta} must be non-negative")));
    }
    let (f1, f2) = (phi1.forward(), phi2.forward());
    if !f1.same_grid(f2) {
        return Err(Error::GridMismatch);
    }
    let gap = f1
        .values()
        .iter()
        .zip(f2.values())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    let slack = 1e-12 * f1.values().iter().fold(1.0f64, |m, v| m.max(v.abs()));
    if gap > eta + slack {
        return Err(Error::BudgetExceeded(format!(
            "sup distance {gap:.3e} between the curve maps exceeds eta = {eta:.3e}"
        )));
    }
    let (i1, i2) = (phi1.image(), phi2.image());
    let shortest = i1.length().min(i2.length());
    if 2.0 * eta >= shortest {
        return Err(Error::DegenerateIntersection(format!(
            "2·eta = {:.3e} is not below the shorter image length {shortest:.3e}",
            2.0 * eta
        )));
    }
    let common = Interval::new(i1.lo().max(i2.lo()), i1.hi().min(i2.hi()))
        .map_err(|_| Error::DegenerateIntersection("images do not overlap".into()))?;
    let t0 = invert_monotone(phi2, common.lo())?;
    let t1 = invert_monotone(phi2, common.hi())?;
    let preimage = Interval::new(t0.min(t1), t0.max(t1))
        .map_err(|_| Error::DegenerateIntersection("preimage collapsed to a point".into()))?;
    Ok(IntersectionResult {
        common,
        preimage,
        endpoint_gaps: ((i1.lo() - i2.lo()).abs(), (i1.hi() - i2.hi()).abs()),
    })
}

/// Largest admissible C¹ noise level, `min{(g1 − g0)/4, C_g/2}`; experiments
/// must stay strictly below it.
pub fn admissible_eps(problem: &ProblemInstance) -> f64 {
    admissible_eps_for(problem.interval.length(), problem.constants.c_g)
}

pub(crate) fn admissible_eps_for(length: f64, c_g: f64) -> f64 {
    (length / 4.0).min(c_g / 2.0)
}
