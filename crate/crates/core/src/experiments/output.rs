//! CSV and whitespace-separated `.dat` writers for sweep results.

use std::fs;
use std::io::Write;
use std::path::Path;

use super::sweep::RateReport;
use super::ExperimentError;
use crate::datagen::ProblemInstance;
use crate::regularizer::Reconstruction;

type Table = (Vec<&'static str>, Vec<Vec<f64>>);

fn opt(x: Option<f64>) -> f64 {
    x.unwrap_or(f64::NAN)
}

fn write_table(dir: &Path, stem: &str, (header, rows): &Table) -> Result<(), ExperimentError> {
    fs::create_dir_all(dir)?;
    let mut csv = csv::Writer::from_path(dir.join(format!("{stem}.csv")))?;
    csv.write_record(header)?;
    for row in rows {
        csv.write_record(row.iter().map(|v| if v.is_nan() { String::new() } else { format!("{v:e}") }))?;
    }
    csv.flush()?;

    let mut dat = std::io::BufWriter::new(fs::File::create(dir.join(format!("{stem}.dat")))?);
    writeln!(dat, "# {}", header.join(" "))?;
    for row in rows {
        let line: Vec<String> = row.iter().map(|v| if v.is_nan() { "NaN".into() } else { format!("{v:.12e}") }).collect();
        writeln!(dat, "{}", line.join(" "))?;
    }
    dat.flush()?;
    Ok(())
}

fn rates_table(report: &RateReport) -> Table {
    let header = vec!["delta", "seed", "alpha", "eps", "h", "err_l2", "err_h1"];
    let rows = report
        .rows
        .iter()
        .map(|r| vec![r.delta, r.seed as f64, r.alpha, r.eps, opt(r.h), r.err_l2, r.err_h1])
        .collect();
    (header, rows)
}

fn summary_table(report: &RateReport) -> Table {
    let header = vec!["delta", "samples", "mean_err_l2", "mean_err_h1", "excluded"];
    let rows = report
        .means
        .iter()
        .map(|m| {
            let excluded = report.excluded_deltas.contains(&m.delta);
            vec![m.delta, m.samples as f64, m.err_l2, m.err_h1, f64::from(u8::from(excluded))]
        })
        .collect();
    (header, rows)
}

/// Writes `rates.{csv,dat}`, `summary.{csv,dat}` and `fit.txt`.
pub fn write_report(dir: &Path, report: &RateReport) -> Result<(), ExperimentError> {
    write_table(dir, "rates", &rates_table(report))?;
    write_table(dir, "summary", &summary_table(report))?;
    fs::write(dir.join("fit.txt"), fit_text(report))?;
    Ok(())
}

/// Human-readable fit summary.
pub fn fit_text(report: &RateReport) -> String {
    let show = |x: Option<f64>| x.map_or("n/a".to_string(), |v| format!("{v:.4}"));
    let mut s = format!(
        "slope_l2 {}\nr_squared_l2 {}\nslope_h1 {}\nr_squared_h1 {}\n",
        show(report.fitted_slope_l2),
        show(report.r_squared),
        show(report.fitted_slope_h1),
        show(report.r_squared_h1),
    );
    for d in &report.excluded_deltas {
        s.push_str(&format!("excluded_delta {d:e}\n"));
    }
    for f in &report.failed {
        s.push_str(&format!("failed delta={:e} seed={}: {}\n", f.delta, f.seed, f.reason));
    }
    s
}

/// Writes `a_alpha.{csv,dat}` with the exact and reconstructed coefficient.
pub fn write_reconstruction(dir: &Path, problem: &ProblemInstance, rec: &Reconstruction) -> Result<(), ExperimentError> {
    let a = &rec.a_alpha;
    let rows = (0..a.len()).map(|i| {
        let x = a.node(i);
        vec![x, problem.a0_at(x), a.values()[i]]
    });
    write_table(dir, "a_alpha", &(vec!["x", "a0", "a_alpha"], rows.collect()))
}
