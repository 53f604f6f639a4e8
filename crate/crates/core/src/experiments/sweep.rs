//! Parameter sweeps over noise levels and seeds, and log-log rate fits.

use rayon::prelude::*;

use super::config::ExperimentConfig;
use crate::datagen::{make_problem, perturb_c1, perturb_l2, ProblemInstance};
use crate::error::{Error, Result};
use crate::regularizer::{reconstruct_exact, reconstruct_noisy, Mode, Reconstruction, RegularizationParams};

/// Outcome of one `(δ, seed)` cell.
#[derive(Debug, Clone, PartialEq)]
pub struct RateRow {
    pub delta: f64,
    pub seed: u64,
    pub alpha: f64,
    pub eps: f64,
    pub h: Option<f64>,
    pub err_l2: f64,
    pub err_h1: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FailedCell {
    pub delta: f64,
    pub seed: u64,
    pub reason: String,
}

/// Seed-averaged errors at one noise level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanError {
    pub delta: f64,
    pub err_l2: f64,
    pub err_h1: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    pub rows: Vec<RateRow>,
    pub failed: Vec<FailedCell>,
    pub means: Vec<MeanError>,
    /// Noise levels left out of the fit as pre-asymptotic.
    pub excluded_deltas: Vec<f64>,
    /// `None` when fewer than three noise levels are usable.
    pub fitted_slope_l2: Option<f64>,
    pub fitted_slope_h1: Option<f64>,
    pub r_squared: Option<f64>,
    pub r_squared_h1: Option<f64>,
}

/// Least squares on `(log δ, log err)`; returns `(slope, r²)`.
pub fn fit_rate(pairs: &[(f64, f64)]) -> Result<(f64, f64)> {
    let usable = pairs.iter().filter(|(d, e)| *d > 0.0 && *e > 0.0 && d.is_finite() && e.is_finite()).count();
    if pairs.len() < 3 || usable < pairs.len() {
        return Err(Error::InsufficientData(usable));
    }
    let n = pairs.len() as f64;
    let (xs, ys): (Vec<f64>, Vec<f64>) = pairs.iter().map(|(d, e)| (d.ln(), e.ln())).unzip();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("rate fit needs distinct noise levels".into()));
    }
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok((slope, r2))
}

/// Reconstruction for a single cell of the sweep.
pub fn solve_cell(config: &ExperimentConfig, problem: &ProblemInstance, delta: f64, seed: u64) -> Result<(Reconstruction, RateRow)> {
    let alpha = config.alpha_rule.alpha(delta);
    let eps = config.eps_rule.eps(delta);
    let c = problem.c_end;
    let (rec, eps, h) = match config.mode {
        Mode::ExactData => (reconstruct_exact(problem, RegularizationParams::exact(alpha)?.with_shift(c))?, 0.0, None),
        Mode::NoisyC1 => {
            let noisy = perturb_c1(problem, eps, seed)?.with_flux_noise(problem, delta)?;
            let params = RegularizationParams::noisy_c1(alpha)?.with_shift(c);
            (reconstruct_noisy(problem, &noisy, params)?, eps, None)
        }
        Mode::NoisyL2 => {
            let h = config.h_rule.expect("validated").h(delta);
            let noisy = perturb_l2(problem, eps, seed)?.with_flux_noise(problem, delta)?;
            let params = RegularizationParams::noisy_l2(alpha, h)?.with_shift(c);
            (reconstruct_noisy(problem, &noisy, params)?, eps, Some(h))
        }
    };
    let (err_l2, err_h1) = rec.errors(problem)?;
    Ok((rec, RateRow { delta, seed, alpha, eps, h, err_l2, err_h1 }))
}

/// Runs every `(δ, seed)` cell; failed cells are recorded, not fatal.
pub fn run_sweep(config: &ExperimentConfig) -> Result<RateReport> {
    let problem = make_problem(config.problem)?;
    run_sweep_on(config, &problem)
}

pub fn run_sweep_on(config: &ExperimentConfig, problem: &ProblemInstance) -> Result<RateReport> {
    let cells: Vec<(f64, u64)> = config
        .delta_list
        .iter()
        .flat_map(|&d| config.seeds.iter().map(move |&s| (d, s)))
        .collect();
    let outcomes: Vec<std::result::Result<RateRow, FailedCell>> = cells
        .par_iter()
        .map(|&(delta, seed)| {
            solve_cell(config, problem, delta, seed)
                .map(|(_, row)| row)
                .map_err(|e| FailedCell { delta, seed, reason: e.to_string() })
        })
        .collect();
    let (mut rows, mut failed) = (Vec::new(), Vec::new());
    for o in outcomes {
        match o {
            Ok(r) => rows.push(r),
            Err(f) => failed.push(f),
        }
    }
    Ok(summarize(rows, failed, config.exclude_saturated))
}

/// Seed averages per noise level and the fitted rates.
pub fn summarize(rows: Vec<RateRow>, failed: Vec<FailedCell>, exclude_saturated: bool) -> RateReport {
    let mut means: Vec<MeanError> = Vec::new();
    for r in &rows {
        match means.iter_mut().find(|m| m.delta == r.delta) {
            Some(m) => {
                m.err_l2 += r.err_l2;
                m.err_h1 += r.err_h1;
                m.samples += 1;
            }
            None => means.push(MeanError { delta: r.delta, err_l2: r.err_l2, err_h1: r.err_h1, samples: 1 }),
        }
    }
    for m in &mut means {
        m.err_l2 /= m.samples as f64;
        m.err_h1 /= m.samples as f64;
    }
    means.sort_by(|a, b| b.delta.total_cmp(&a.delta));

    let mut used: Vec<MeanError> = means.clone();
    let mut excluded_deltas = Vec::new();
    if exclude_saturated && saturated(&used) {
        excluded_deltas.push(used.remove(0).delta);
    }
    let l2: Vec<(f64, f64)> = used.iter().map(|m| (m.delta, m.err_l2)).collect();
    let h1: Vec<(f64, f64)> = used.iter().map(|m| (m.delta, m.err_h1)).collect();
    let (fitted_slope_l2, r_squared) = split(fit_rate(&l2).ok());
    let (fitted_slope_h1, r_squared_h1) = split(fit_rate(&h1).ok());
    RateReport { rows, failed, means, excluded_deltas, fitted_slope_l2, fitted_slope_h1, r_squared, r_squared_h1 }
}

fn split(fit: Option<(f64, f64)>) -> (Option<f64>, Option<f64>) {
    (fit.map(|f| f.0), fit.map(|f| f.1))
}

/// The largest noise level is saturated when the error drops from it to the
/// next level at less than half the rate fitted on the remaining levels.
fn saturated(means: &[MeanError]) -> bool {
    if means.len() < 4 {
        return false;
    }
    let rest: Vec<(f64, f64)> = means[1..].iter().map(|m| (m.delta, m.err_l2)).collect();
    let Ok((slope, _)) = fit_rate(&rest) else {
        return false;
    };
    let (a, b) = (means[0], means[1]);
    let local = (a.err_l2 / b.err_l2).ln() / (a.delta / b.delta).ln();
    local < 0.5 * slope
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pairs(f: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
        [1e-2, 1e-3, 1e-4, 1e-5].iter().map(|&d| (d, f(d))).collect()
    }

    #[test]
    fn exact_power_laws() {
        let (s, r2) = fit_rate(&pairs(|d| d)).unwrap();
        assert!((s - 1.0).abs() < 1e-12 && (r2 - 1.0).abs() < 1e-12);
        let (s, r2) = fit_rate(&pairs(f64::sqrt)).unwrap();
        assert!((s - 0.5).abs() < 1e-12 && (r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn jittered_two_thirds() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let p: Vec<(f64, f64)> = pairs(|d| 3.0 * d.powf(2.0 / 3.0))
            .into_iter()
            .map(|(d, e)| (d, e * (1.0 + 0.01 * rng.random_range(-1.0..1.0))))
            .collect();
        let (s, _) = fit_rate(&p).unwrap();
        assert!((0.63..=0.70).contains(&s));
    }

    #[test]
    fn too_few_pairs() {
        assert_eq!(fit_rate(&[(1e-2, 1.0), (1e-3, 0.5)]), Err(Error::InsufficientData(2)));
        assert_eq!(fit_rate(&[(1e-2, 1.0), (1e-3, 0.0), (1e-4, 0.1)]), Err(Error::InsufficientData(2)));
    }

    #[test]
    fn saturated_level_is_excluded() {
        let row = |delta: f64, err: f64| RateRow { delta, seed: 0, alpha: delta, eps: delta, h: None, err_l2: err, err_h1: err };
        let rows = vec![row(1e-1, 0.11), row(1e-2, 0.1), row(1e-3, 0.01), row(1e-4, 0.001), row(1e-5, 0.0001)];
        let report = summarize(rows.clone(), vec![], true);
        assert_eq!(report.excluded_deltas, vec![1e-1]);
        assert!((report.fitted_slope_l2.unwrap() - 1.0).abs() < 1e-12);
        let kept = summarize(rows, vec![], false);
        assert!(kept.excluded_deltas.is_empty());
        assert!(kept.fitted_slope_l2.unwrap() < 1.0);
    }
}
