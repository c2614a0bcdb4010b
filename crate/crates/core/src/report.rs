//! Deterministic CSV emitters.
//!
//! Floats are written with 17 significant digits in scientific notation
//! (`{:.16e}`), which round-trips every `f64` and never depends on locale.

use std::fmt::Write;

use crate::hausdorff::VerificationReport;
use crate::weights::FigureData;

/// `x` with 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// A header line followed by one line per row, `\n`-terminated.
pub fn csv_table<I, R>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.into_iter().collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// `y,curve_I,curve_II` rows; nonzero atoms follow as `#`-comment rows
/// `# atom,y,curve_I,curve_II`.
pub fn figure_csv(fig: &FigureData) -> String {
    let rows = fig
        .y
        .iter()
        .zip(fig.curve_i.iter().zip(&fig.curve_ii))
        .map(|(&y, (&a, &b))| [fmt_float(y), fmt_float(a), fmt_float(b)]);
    let mut out = csv_table(&["y", "curve_I", "curve_II"], rows);
    if fig.atoms.iter().any(|&a| a != 0.0) {
        writeln!(out, "# atom,{},{},{}", fmt_float(1.0), fmt_float(fig.atoms[0]), fmt_float(fig.atoms[1]))
            .expect("write to string");
    }
    out
}

pub fn verification_csv(report: &VerificationReport) -> String {
    let rows = report.rows.iter().map(|r| {
        [
            r.n.to_string(),
            fmt_float(r.rho_exact),
            fmt_float(r.rho_quadrature),
            fmt_float(r.abs_err),
            fmt_float(r.rel_err),
        ]
    });
    csv_table(&["n", "rho_exact", "rho_quadrature", "abs_err", "rel_err"], rows)
}
