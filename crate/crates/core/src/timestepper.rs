//! Predictor-corrector update.
//!
//! One step is
//!
//! 1. fill ghosts and build the effective eigensystem for `dt`;
//! 2. predict time-centred face states and solve HLLE problems at every
//!    face, giving the flux divergence `(div F)^{n+1/2}`;
//! 3. integrate `dU/dt = S(U) - (div F)^{n+1/2}` over the step with a
//!    linearly-implicit guess followed by one Picard correction.
//!
//! The source Jacobian is state independent, so both implicit factors are
//! the same diagonal matrix `diag(1 + dt C sigma_a, 1 + dt C sigma_t)`.

use std::fmt;
use std::str::FromStr;

use crate::eigensystem::{build_effective, EffectiveEigensystem};
use crate::error::{Error, Result};
use crate::grid::{fill_ghosts, BoundaryKind, GridField};
use crate::model::{source, ConservedState, PhysParams, Temperature};
use crate::reconstruction::{predict_face_states, Reconstruction, SlopeLimiting};
use crate::riemann::{hlle_flux_with_speeds, WaveSpeeds};

/// A remaining interval within this fraction of a full step is taken as the
/// final step instead of leaving a sliver behind.
const FINAL_STEP_SLACK: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DtMode {
    /// `dt = cfl dx / (sqrt(f) C)`.
    #[default]
    Hyperbolic,
    /// `dt = cfl dx^2 / (2 D)` with `D = f C / sigma_t`.
    Parabolic,
}

impl FromStr for DtMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hyperbolic" => Ok(Self::Hyperbolic),
            "parabolic" => Ok(Self::Parabolic),
            other => Err(Error::InvalidControl(format!("unknown dt mode `{other}`"))),
        }
    }
}

impl fmt::Display for DtMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Hyperbolic => "hyperbolic",
            Self::Parabolic => "parabolic",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub cfl: f64,
    pub mode: DtMode,
    pub t_final: f64,
}

impl StepControl {
    pub fn new(cfl: f64, mode: DtMode, t_final: f64) -> Result<Self> {
        if !(cfl > 0.0 && cfl <= 1.0) {
            return Err(Error::InvalidControl(format!("cfl must lie in (0, 1], got {cfl}")));
        }
        if !(t_final.is_finite() && t_final >= 0.0) {
            return Err(Error::InvalidControl(format!("bad stop time {t_final}")));
        }
        Ok(Self { cfl, mode, t_final })
    }

    /// Unclipped step for cell width `dx`.
    pub fn base_dt(&self, dx: f64, p: &PhysParams) -> f64 {
        match self.mode {
            DtMode::Hyperbolic => self.cfl * dx / p.light_speed(),
            DtMode::Parabolic => self.cfl * dx * dx / (2.0 * p.diffusion_coefficient()),
        }
    }
}

/// Numerical options that do not change the physics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SchemeOptions {
    pub reconstruction: Reconstruction,
    pub limiting: SlopeLimiting,
    pub wave_speeds: WaveSpeeds,
    pub bc: BoundaryKind,
}

/// Step size at `t_now`, shortened so the last step lands on `t_final`.
pub fn select_dt(ctrl: &StepControl, grid: &GridField, p: &PhysParams, t_now: f64) -> Result<f64> {
    let dt = ctrl.base_dt(grid.dx(), p);
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::NonPositiveDt(dt));
    }
    let remaining = ctrl.t_final - t_now;
    if remaining <= dt * (1.0 + FINAL_STEP_SLACK) {
        Ok(remaining)
    } else {
        Ok(dt)
    }
}

/// `T^4` on every stored cell of `grid`, ghosts filled with `bc`.
///
/// For [`Temperature::TracksRadiation`] this is the current `E_r`, so the
/// ghost cells of `grid` must already be filled.
pub fn t4_field(grid: &GridField, p: &PhysParams, bc: BoundaryKind) -> Result<Vec<f64>> {
    let len = grid.data().len();
    match &p.temp {
        Temperature::Uniform(t) => Ok(vec![t.powi(4); len]),
        Temperature::Profile(ts) => {
            if ts.len() != grid.n_cell() {
                return Err(Error::LengthMismatch {
                    expected: grid.n_cell(),
                    got: ts.len(),
                });
            }
            let mut out = vec![0.0; len];
            let ng = grid.n_ghost();
            for (o, t) in out[ng..ng + ts.len()].iter_mut().zip(ts) {
                *o = t.powi(4);
            }
            fill_ghosts(&mut out, ng, bc);
            Ok(out)
        }
        Temperature::TracksRadiation => Ok(grid.data().iter().map(|u| u.e_r).collect()),
    }
}

/// Interface fluxes for the `n_cell + 1` faces.
pub fn face_fluxes(
    grid: &GridField,
    t4: &[f64],
    es: &EffectiveEigensystem,
    p: &PhysParams,
    dt: f64,
    opts: &SchemeOptions,
) -> Vec<ConservedState> {
    let faces = predict_face_states(grid, t4, es, p, dt, opts.reconstruction, opts.limiting);
    let (s_left, s_right) = opts.wave_speeds.bounds(es, p);
    faces
        .left
        .iter()
        .zip(&faces.right)
        .map(|(&ul, &ur)| hlle_flux_with_speeds(ul, ur, s_left, s_right, p))
        .collect()
}

/// `(F_{i+1/2} - F_{i-1/2}) / dx` for each interior cell.
pub fn flux_divergence(
    grid: &GridField,
    t4: &[f64],
    es: &EffectiveEigensystem,
    p: &PhysParams,
    dt: f64,
    opts: &SchemeOptions,
) -> Vec<ConservedState> {
    let fluxes = face_fluxes(grid, t4, es, p, dt, opts);
    let inv_dx = grid.dx().recip();
    fluxes.windows(2).map(|w| (w[1] - w[0]) * inv_dx).collect()
}

/// `diag(1 + dt C sigma_a, 1 + dt C sigma_t)^{-1}`.
#[inline]
fn implicit_factor(p: &PhysParams, dt: f64) -> [f64; 2] {
    [
        1.0 / (1.0 + dt * p.cc * p.sigma_a),
        1.0 / (1.0 + dt * p.cc * p.sigma_t),
    ]
}

/// Linearly-implicit initial guess
/// `U^n + dt (I - dt dS/dU)^{-1} (S(U^n) - div)`.
#[inline]
pub fn corrector_guess(
    u_n: ConservedState,
    div: ConservedState,
    t4: f64,
    p: &PhysParams,
    dt: f64,
) -> ConservedState {
    u_n + (source(u_n, t4, p) - div).scale(implicit_factor(p, dt)) * dt
}

/// Guess plus one Picard correction.
///
/// The residual of the trapezoidal integral equation at the guess is
/// `eps = U^n + dt/2 (S(U_hat) + S(U^n)) - dt div - U_hat` and the
/// correction is `(I - dt dS/dU)^{-1} eps`.
#[inline]
pub fn corrector_update(
    u_n: ConservedState,
    u_hat: ConservedState,
    div: ConservedState,
    t4: f64,
    p: &PhysParams,
    dt: f64,
) -> ConservedState {
    let eps = u_n + (source(u_hat, t4, p) + source(u_n, t4, p)) * (0.5 * dt) - div * dt - u_hat;
    u_hat + eps.scale(implicit_factor(p, dt))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub dt: f64,
    pub max_lambda_eff: f64,
    pub min_e_r: f64,
    pub max_e_r: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Diagnostics {
    pub steps: Vec<StepRecord>,
    /// Steps that ended with at least one negative `E_r`.
    pub negative_e_steps: usize,
}

impl Diagnostics {
    pub fn n_steps(&self) -> usize {
        self.steps.len()
    }

    pub fn min_e_r(&self) -> Option<f64> {
        self.steps.iter().map(|s| s.min_e_r).reduce(f64::min)
    }

    pub fn max_e_r(&self) -> Option<f64> {
        self.steps.iter().map(|s| s.max_e_r).reduce(f64::max)
    }
}

/// Owns a grid and marches it forward in time.
#[derive(Debug, Clone)]
pub struct Solver {
    grid: GridField,
    params: PhysParams,
    opts: SchemeOptions,
    time: f64,
    /// `T^4` for temperatures that do not depend on the radiation.
    fixed_t4: Option<Vec<f64>>,
    diagnostics: Diagnostics,
}

impl Solver {
    pub fn new(grid: GridField, params: PhysParams, opts: SchemeOptions) -> Result<Self> {
        params.validate()?;
        let fixed_t4 = match params.temp {
            Temperature::TracksRadiation => None,
            _ => Some(t4_field(&grid, &params, opts.bc)?),
        };
        Ok(Self {
            grid,
            params,
            opts,
            time: 0.0,
            fixed_t4,
            diagnostics: Diagnostics::default(),
        })
    }

    pub fn grid(&self) -> &GridField {
        &self.grid
    }

    pub fn into_grid(self) -> GridField {
        self.grid
    }

    pub fn params(&self) -> &PhysParams {
        &self.params
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn diagnostics(&self) -> &Diagnostics {
        &self.diagnostics
    }

    /// One full predictor-corrector step of length `dt`.
    pub fn step(&mut self, dt: f64) -> Result<()> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::NonPositiveDt(dt));
        }
        let p = &self.params;
        self.grid.fill_boundary(self.opts.bc);
        let tracked;
        let t4: &[f64] = match &self.fixed_t4 {
            Some(v) => v,
            None => {
                tracked = t4_field(&self.grid, p, self.opts.bc)?;
                &tracked
            }
        };

        let es = build_effective(p, dt);
        let div = flux_divergence(&self.grid, t4, &es, p, dt, &self.opts);

        let ng = self.grid.n_ghost();
        let step_no = self.diagnostics.steps.len();
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for (i, (u, d)) in self.grid.interior_mut().iter_mut().zip(&div).enumerate() {
            let t4_i = t4[ng + i];
            let u_hat = corrector_guess(*u, *d, t4_i, p, dt);
            let next = corrector_update(*u, u_hat, *d, t4_i, p, dt);
            if !next.is_finite() {
                return Err(Error::NonFinite {
                    step: step_no,
                    cell: i,
                    time: self.time,
                });
            }
            lo = lo.min(next.e_r);
            hi = hi.max(next.e_r);
            *u = next;
        }

        self.time += dt;
        if lo < 0.0 {
            self.diagnostics.negative_e_steps += 1;
        }
        self.diagnostics.steps.push(StepRecord {
            dt,
            max_lambda_eff: es.max_speed(),
            min_e_r: lo,
            max_e_r: hi,
        });
        Ok(())
    }

    /// March to `t_target`, landing on it exactly.
    pub fn advance_to(&mut self, t_target: f64, cfl: f64, mode: DtMode) -> Result<()> {
        let ctrl = StepControl::new(cfl, mode, t_target)?;
        while self.time < t_target {
            let dt = select_dt(&ctrl, &self.grid, &self.params, self.time)?;
            let last = t_target - self.time == dt;
            self.step(dt)?;
            if last {
                self.time = t_target;
            }
        }
        self.grid.fill_boundary(self.opts.bc);
        Ok(())
    }
}

/// Runs `grid` from `t = 0` to `ctrl.t_final`.
pub fn advance(
    grid: GridField,
    ctrl: &StepControl,
    p: &PhysParams,
    opts: &SchemeOptions,
) -> Result<(GridField, Diagnostics)> {
    let mut solver = Solver::new(grid, p.clone(), *opts)?;
    solver.advance_to(ctrl.t_final, ctrl.cfl, ctrl.mode)?;
    let diag = solver.diagnostics.clone();
    Ok((solver.into_grid(), diag))
}
