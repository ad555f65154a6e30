//! CSV artifacts. Values are written with 17 significant digits so the
//! files reproduce the binary state exactly and diff cleanly.

use std::fs::File;
use std::io::{BufWriter, Result, Write};
use std::path::Path;

use kinlb::{RealField, RunReport};

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

/// Field CSV: `x,u` in 1D, `x1,x2,u` in 2D, row-major.
pub fn write_field(path: &Path, u: &RealField) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    let grid = u.grid();
    let [n1, n2] = grid.shape();
    if grid.dim() == 1 {
        writeln!(w, "x,u")?;
        for i in 0..n1 {
            writeln!(w, "{},{}", fmt(grid.position_ij(i, 0)[0]), fmt(u.get(i, 0)))?;
        }
    } else {
        writeln!(w, "x1,x2,u")?;
        for j in 0..n2 {
            for i in 0..n1 {
                let x = grid.position_ij(i, j);
                writeln!(w, "{},{},{}", fmt(x[0]), fmt(x[1]), fmt(u.get(i, j)))?;
            }
        }
    }
    w.flush()
}

/// Report CSV: `step,t,tv,mass` plus `l2,linf` when an exact solution
/// was available during the run.
pub fn write_report(path: &Path, report: &RunReport<f64>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    let with_errors = report.records.first().is_some_and(|r| r.l2.is_some());
    if with_errors {
        writeln!(w, "step,t,tv,mass,l2,linf")?;
    } else {
        writeln!(w, "step,t,tv,mass")?;
    }
    for r in &report.records {
        if with_errors {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                r.step,
                fmt(r.t),
                fmt(r.tv),
                fmt(r.mass),
                fmt(r.l2.unwrap_or(f64::NAN)),
                fmt(r.linf.unwrap_or(f64::NAN)),
            )?;
        } else {
            writeln!(w, "{},{},{},{}", r.step, fmt(r.t), fmt(r.tv), fmt(r.mass))?;
        }
    }
    w.flush()
}

/// Convergence CSV: `points,h,l2,eoc`, the order column blank on the
/// coarsest grid.
pub fn write_convergence(path: &Path, rows: &[kinlb::ConvergenceRow<f64>]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "points,h,l2,eoc")?;
    for r in rows {
        let eoc = r.eoc.map(fmt).unwrap_or_default();
        writeln!(w, "{},{},{},{}", r.points, fmt(r.h), fmt(r.l2), eoc)?;
    }
    w.flush()
}

/// Per-step comparison CSV: `step,t,linf_diff`.
pub fn write_diffs(path: &Path, rows: &[(usize, f64, f64)]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "step,t,linf_diff")?;
    for (step, t, diff) in rows {
        writeln!(w, "{},{},{}", step, fmt(*t), fmt(*diff))?;
    }
    w.flush()
}
