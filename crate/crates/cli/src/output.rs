//! CSV snapshots and run summaries.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use radsub::problems::ProblemSpec;
use radsub::timestepper::Diagnostics;
use radsub::{ConservedState, GridField, PhysParams};

use crate::config::Settings;
use crate::CliError;

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(io)?;
    }
    fs::write(path, contents).map_err(io)
}

fn metadata(s: &Settings, p: &PhysParams, out: &mut String) {
    let spec = &s.spec;
    let _ = writeln!(out, "# problem = {}", spec.name());
    let _ = writeln!(out, "# n_cell = {}", s.ncell);
    let _ = writeln!(out, "# domain = [{:e}, {:e}]", spec.x_min, spec.x_max);
    let _ = writeln!(out, "# cc = {:e}", p.cc);
    let _ = writeln!(out, "# sigma_a = {:e}", p.sigma_a);
    let _ = writeln!(out, "# sigma_t = {:e}", p.sigma_t);
    let _ = writeln!(out, "# f = {:e}", p.f);
    let _ = writeln!(out, "# cfl = {:e}", s.ctrl.cfl);
    let _ = writeln!(out, "# dt_mode = {}", s.ctrl.mode);
    let _ = writeln!(out, "# wave_speeds = {}", s.opts.wave_speeds);
    let _ = writeln!(out, "# reconstruction = {}", s.opts.reconstruction);
    let _ = writeln!(out, "# limiting = {}", s.opts.limiting);
    let _ = writeln!(out, "# bc = {}", s.opts.bc);
}

/// Snapshot CSV: `#` metadata, a header, then one row per interior cell.
pub fn snapshot_csv(
    s: &Settings,
    p: &PhysParams,
    grid: &GridField,
    time: f64,
    steps: usize,
    reference: Option<&[ConservedState]>,
) -> String {
    let mut out = String::new();
    metadata(s, p, &mut out);
    let _ = writeln!(out, "# time = {time:e}");
    let _ = writeln!(out, "# steps = {steps}");
    out.push_str(if reference.is_some() {
        "x,e_r,f_r,e_ref,f_ref\n"
    } else {
        "x,e_r,f_r\n"
    });
    for (i, (x, u)) in grid.centers().zip(grid.interior()).enumerate() {
        let _ = write!(out, "{x:e},{:e},{:e}", u.e_r, u.f_r);
        if let Some(r) = reference {
            let _ = write!(out, ",{:e},{:e}", r[i].e_r, r[i].f_r);
        }
        out.push('\n');
    }
    out
}

pub fn summary_text(spec: &ProblemSpec, time: f64, diag: &Diagnostics, wall_seconds: f64) -> String {
    let fmt_opt = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_else(|| "-".into());
    format!(
        "problem = {}\nfinal_time = {time:e}\nsteps = {}\nwall_time_s = {wall_seconds:.3}\n\
         min_e_r = {}\nmax_e_r = {}\nnegative_e_steps = {}\n",
        spec.name(),
        diag.n_steps(),
        fmt_opt(diag.min_e_r()),
        fmt_opt(diag.max_e_r()),
        diag.negative_e_steps,
    )
}
