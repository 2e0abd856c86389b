//! Gnuplot script emission. Scripts sit next to the CSV they read and refer to
//! it by file name; nothing is plotted here.

use crate::csvio::{read_diagnostics, read_table};
use crate::error::{CliError, Result};
use msdd_core::dynamics::DiagnosticsRow;
use msdd_core::estimates::lyapunov_fit;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

fn column(name: &str) -> usize {
    DiagnosticsRow::<f64>::COLUMNS
        .iter()
        .position(|c| *c == name)
        .expect("known column")
        + 1
}

fn preamble(png: &str) -> String {
    format!(
        "set datafile separator \",\"\nset terminal pngcairo size 900,600\nset output \"{png}\"\nset key top right\nset xlabel \"t\"\n"
    )
}

fn file_name(path: &Path) -> Result<String> {
    path.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .ok_or_else(|| CliError::Schema(format!("{} is not a file path", path.display())))
}

fn write(path: PathBuf, text: String) -> Result<PathBuf> {
    std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}

/// Writes `charge.gp`, `lyapunov.gp` and `xnorm.gp` beside a diagnostics CSV.
pub fn emit_plots(csv: &Path) -> Result<Vec<PathBuf>> {
    let rows = read_diagnostics(csv)?;
    if rows.is_empty() {
        return Err(CliError::Schema(format!("{}: no data rows", csv.display())));
    }
    let dir = csv.parent().unwrap_or(Path::new("."));
    let data = file_name(csv)?;
    let t = column("t");

    let mut q = preamble("charge.png");
    q.push_str("set ylabel \"Q\"\n");
    let _ = writeln!(q, "plot \"{data}\" skip 1 using {t}:{} with lines title \"Q(t)\"", column("Q"));

    let mut l = preamble("lyapunov.png");
    l.push_str("set ylabel \"Phi\"\n");
    let times: Vec<f64> = rows.iter().map(|r| r.t).collect();
    let phi: Vec<f64> = rows.iter().map(|r| r.phi).collect();
    let series = format!("\"{data}\" skip 1 using {t}:{} with lines title \"Phi(t)\"", column("phi"));
    match lyapunov_fit(&times, &phi) {
        Ok(fit) if !fit.degenerate => {
            let _ = writeln!(
                l,
                "phi0 = {:.16e}\nbeta = {:.16e}\nplateau = {:.16e}\nt0 = {:.16e}\nenvelope(x) = phi0 * exp(-beta * (x - t0)) + plateau",
                phi[0], fit.beta, fit.plateau, times[0]
            );
            let _ = writeln!(l, "plot {series}, envelope(x) with lines dashtype 2 title \"fitted envelope\"");
        }
        _ => {
            let _ = writeln!(l, "plot {series}");
        }
    }

    let mut x = preamble("xnorm.png");
    x.push_str("set ylabel \"||X||^2\"\nset logscale y\n");
    let _ = writeln!(x, "plot \"{data}\" skip 1 using {t}:{} with lines title \"||X(t)||^2\"", column("x_norm_sq"));

    Ok(vec![
        write(dir.join("charge.gp"), q)?,
        write(dir.join("lyapunov.gp"), l)?,
        write(dir.join("xnorm.gp"), x)?,
    ])
}

/// One overlay script for ensemble tables with `t` and `x_norm_sq` columns.
pub fn emit_ensemble_plot(csvs: &[PathBuf], out: &Path) -> Result<PathBuf> {
    if csvs.is_empty() {
        return Err(CliError::Schema("no ensemble tables".into()));
    }
    let mut s = preamble("ensemble.png");
    s.push_str("set ylabel \"||X||^2\"\nset logscale y\n");
    let mut parts = Vec::new();
    for csv in csvs {
        let (header, rows) = read_table(csv, &["t", "x_norm_sq"])?;
        if rows.is_empty() {
            return Err(CliError::Schema(format!("{}: no data rows", csv.display())));
        }
        let idx = |n: &str| header.iter().position(|h| h == n).unwrap() + 1;
        let name = file_name(csv)?;
        parts.push(format!(
            "\"{name}\" skip 1 using {}:{} with lines title \"{}\"",
            idx("t"),
            idx("x_norm_sq"),
            name.trim_end_matches(".csv")
        ));
    }
    let _ = writeln!(s, "plot {}", parts.join(", \\\n     "));
    write(out.to_path_buf(), s)
}
