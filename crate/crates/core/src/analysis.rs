//! Error norms and Richardson convergence studies.
//!
//! For an error `eps_i` on a grid of width `dx` the norms are
//! `L1 = sum_i |eps_i| dx` and `Linf = max_i |eps_i|`. Between two
//! resolutions the observed order is
//! `R = ln(L^r / L^{r+1}) / ln(dx^r / dx^{r+1})`.
//!
//! Errors are taken either against an analytic reference sampled at cell
//! centres, or self-similarly against the next finer run averaged onto the
//! coarser grid.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::GridField;
use crate::model::ConservedState;
use crate::problems::{Comparison, ProblemSpec};
use crate::timestepper::{advance, SchemeOptions, StepControl};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Norms {
    pub l1: f64,
    pub linf: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct VariableNorms {
    pub e_r: Norms,
    pub f_r: Norms,
}

/// Observed orders between a row and the previous (coarser) one.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Rates {
    pub l1: Option<f64>,
    pub linf: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct VariableRates {
    pub e_r: Rates,
    pub f_r: Rates,
}

pub fn error_norms(q: &GridField, reference: &[ConservedState]) -> Result<VariableNorms> {
    let cells = q.interior();
    if cells.len() != reference.len() {
        return Err(Error::LengthMismatch {
            expected: cells.len(),
            got: reference.len(),
        });
    }
    let dx = q.dx();
    let mut out = VariableNorms::default();
    for (u, r) in cells.iter().zip(reference) {
        let d = *u - *r;
        out.e_r.l1 += d.e_r.abs() * dx;
        out.f_r.l1 += d.f_r.abs() * dx;
        out.e_r.linf = out.e_r.linf.max(d.e_r.abs());
        out.f_r.linf = out.f_r.linf.max(d.f_r.abs());
    }
    Ok(out)
}

/// Averages pairs of fine cells onto a grid of half the resolution.
pub fn restrict(fine: &GridField) -> Result<GridField> {
    let n = fine.n_cell();
    if !n.is_multiple_of(2) {
        return Err(Error::OddCellCount(n));
    }
    let mut coarse = GridField::new(n / 2, fine.n_ghost(), fine.x_min(), fine.x_max())?;
    for (c, pair) in coarse.interior_mut().iter_mut().zip(fine.interior().chunks_exact(2)) {
        *c = (pair[0] + pair[1]) * 0.5;
    }
    Ok(coarse)
}

/// Richardson order from two norms; `None` when either norm is not positive.
pub fn richardson_rate(l_coarse: f64, l_fine: f64, dx_ratio: f64) -> Option<f64> {
    if l_coarse > 0.0 && l_fine > 0.0 && dx_ratio > 0.0 && dx_ratio != 1.0 {
        Some((l_coarse / l_fine).ln() / dx_ratio.ln())
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub n_cell: usize,
    pub dx: f64,
    pub errors: VariableNorms,
    /// Absent on the coarsest row.
    pub rates: Option<VariableRates>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub problem: String,
    pub comparison: Comparison,
    pub t_final: f64,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    fn from_errors(
        problem: &str,
        comparison: Comparison,
        t_final: f64,
        errors: Vec<(usize, f64, VariableNorms)>,
    ) -> Self {
        let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(errors.len());
        for (n_cell, dx, errs) in errors {
            let rates = rows.last().map(|prev| {
                let ratio = prev.dx / dx;
                let pair = |a: Norms, b: Norms| Rates {
                    l1: richardson_rate(a.l1, b.l1, ratio),
                    linf: richardson_rate(a.linf, b.linf, ratio),
                };
                VariableRates {
                    e_r: pair(prev.errors.e_r, errs.e_r),
                    f_r: pair(prev.errors.f_r, errs.f_r),
                }
            });
            rows.push(ConvergenceRow {
                n_cell,
                dx,
                errors: errs,
                rates,
            });
        }
        Self {
            problem: problem.to_string(),
            comparison,
            t_final,
            rows,
        }
    }

    pub fn row(&self, n_cell: usize) -> Option<&ConvergenceRow> {
        self.rows.iter().find(|r| r.n_cell == n_cell)
    }

    /// Machine-readable table; every number round-trips to the same `f64`.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# problem = {}", self.problem);
        let _ = writeln!(s, "# comparison = {}", self.comparison);
        let _ = writeln!(s, "# t_final = {:e}", self.t_final);
        s.push_str(
            "n_cell,dx,l1_e_r,rate_l1_e_r,linf_e_r,rate_linf_e_r,\
             l1_f_r,rate_l1_f_r,linf_f_r,rate_linf_f_r\n",
        );
        let rate = |r: Option<f64>| r.map(|v| format!("{v:e}")).unwrap_or_default();
        for row in &self.rows {
            let rt = row.rates.unwrap_or_default();
            let _ = writeln!(
                s,
                "{},{:e},{:e},{},{:e},{},{:e},{},{:e},{}",
                row.n_cell,
                row.dx,
                row.errors.e_r.l1,
                rate(rt.e_r.l1),
                row.errors.e_r.linf,
                rate(rt.e_r.linf),
                row.errors.f_r.l1,
                rate(rt.f_r.l1),
                row.errors.f_r.linf,
                rate(rt.f_r.linf),
            );
        }
        s
    }

    /// Aligned table with two-digit errors and one-decimal rates.
    pub fn render_table(&self) -> String {
        let header = [
            "N_cell", "L1(E_r)", "Rate", "Linf(E_r)", "Rate", "L1(F_r)", "Rate", "Linf(F_r)", "Rate",
        ];
        let mut lines = vec![header.iter().map(|h| h.to_string()).collect::<Vec<_>>()];
        let rate = |r: Option<f64>| r.map(|v| format!("{v:.1}")).unwrap_or_else(|| "-".into());
        for row in &self.rows {
            let rt = row.rates.unwrap_or_default();
            lines.push(vec![
                row.n_cell.to_string(),
                format!("{:.1E}", row.errors.e_r.l1),
                rate(rt.e_r.l1),
                format!("{:.1E}", row.errors.e_r.linf),
                rate(rt.e_r.linf),
                format!("{:.1E}", row.errors.f_r.l1),
                rate(rt.f_r.l1),
                format!("{:.1E}", row.errors.f_r.linf),
                rate(rt.f_r.linf),
            ]);
        }
        let widths: Vec<usize> = (0..header.len())
            .map(|c| lines.iter().map(|l| l[c].len()).max().unwrap_or(0))
            .collect();
        let mut out = format!(
            "{} ({} comparison, t = {:e})\n",
            self.problem, self.comparison, self.t_final
        );
        for (k, l) in lines.iter().enumerate() {
            let cells: Vec<String> = l
                .iter()
                .zip(&widths)
                .map(|(v, w)| format!("{v:>w$}"))
                .collect();
            out.push_str(cells.join(" | ").trim_end());
            out.push('\n');
            if k == 0 {
                out.push_str(&"-".repeat(widths.iter().sum::<usize>() + 3 * (widths.len() - 1)));
                out.push('\n');
            }
        }
        out
    }
}

fn run_one(
    spec: &ProblemSpec,
    n_cell: usize,
    ctrl: &StepControl,
    opts: &SchemeOptions,
) -> Result<GridField> {
    let annotate = |e: Error| Error::AtResolution {
        n_cell,
        source: Box::new(e),
    };
    let (grid, p) = spec.init(n_cell).map_err(annotate)?;
    advance(grid, ctrl, &p, opts).map(|(g, _)| g).map_err(annotate)
}

/// Runs `spec` on each resolution and tabulates errors and rates.
///
/// In self-similar mode the ladder must double at every rung; one extra run
/// at twice the finest resolution supplies the comparison for the last row.
pub fn run_convergence(
    spec: &ProblemSpec,
    resolutions: &[usize],
    comparison: Comparison,
    ctrl: &StepControl,
    opts: &SchemeOptions,
) -> Result<ConvergenceReport> {
    if resolutions.is_empty() {
        return Err(Error::InvalidControl("empty resolution ladder".into()));
    }
    if resolutions.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidControl(format!(
            "resolutions must increase strictly: {resolutions:?}"
        )));
    }
    let mut runs = resolutions.to_vec();
    if comparison == Comparison::SelfSimilar {
        if let Some(w) = resolutions.windows(2).find(|w| w[1] != 2 * w[0]) {
            return Err(Error::NotDoubling {
                coarse: w[0],
                fine: w[1],
            });
        }
        runs.push(2 * resolutions[resolutions.len() - 1]);
    }

    let grids: Vec<GridField> = runs
        .par_iter()
        .map(|&n| run_one(spec, n, ctrl, opts))
        .collect::<Result<_>>()?;

    let mut errors = Vec::with_capacity(resolutions.len());
    for (k, &n) in resolutions.iter().enumerate() {
        let q = &grids[k];
        let reference = match comparison {
            Comparison::Analytic => spec.reference_on(q, ctrl.t_final)?,
            Comparison::SelfSimilar => restrict(&grids[k + 1])?.interior().to_vec(),
        };
        errors.push((n, q.dx(), error_norms(q, &reference)?));
    }
    Ok(ConvergenceReport::from_errors(
        spec.name(),
        comparison,
        ctrl.t_final,
        errors,
    ))
}
