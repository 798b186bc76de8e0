//! Time-centred face states from limited piecewise-linear data.
//!
//! For cell `i` with limited slope `dU_i` the extrapolated states are
//!
//! ```text
//!   U_{i,±} = U_i + (dt/2) diag(alpha, beta) S(U_i)
//!                 + 1/2 (±I - (dt/dx) A_eff) P_±(dU_i)
//! ```
//!
//! where `P_+` keeps the right-going characteristic component of the slope
//! and `P_-` the left-going one. Face `i+1/2` pairs `U_{i,+}` with
//! `U_{i+1,-}`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::eigensystem::{characteristic_decompose, EffectiveEigensystem, MINUS, PLUS};
use crate::error::{Error, Result};
use crate::grid::GridField;
use crate::model::{source, ConservedState, PhysParams};

/// Grids smaller than this are reconstructed serially.
const PAR_THRESHOLD: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Reconstruction {
    /// Piecewise-linear (second order).
    #[default]
    Plm,
    /// Piecewise-constant (first order); only the source half-step remains.
    Pcm,
}

impl FromStr for Reconstruction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plm" => Ok(Self::Plm),
            "pcm" => Ok(Self::Pcm),
            other => Err(Error::InvalidControl(format!("unknown reconstruction `{other}`"))),
        }
    }
}

impl fmt::Display for Reconstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Plm => "plm",
            Self::Pcm => "pcm",
        })
    }
}

/// Variables the van Leer limiter acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SlopeLimiting {
    /// Limit `E_r` and `F_r` differences, then project.
    #[default]
    Conserved,
    /// Limit the characteristic amplitudes of the one-sided differences.
    Characteristic,
}

impl FromStr for SlopeLimiting {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "conserved" => Ok(Self::Conserved),
            "characteristic" => Ok(Self::Characteristic),
            other => Err(Error::InvalidControl(format!("unknown limiting `{other}`"))),
        }
    }
}

impl fmt::Display for SlopeLimiting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Conserved => "conserved",
            Self::Characteristic => "characteristic",
        })
    }
}

/// Left and right states at every interface touching the interior.
///
/// Entry `j` belongs to the face at `x_min + j dx`, between interior cells
/// `j - 1` and `j`; there are `n_cell + 1` of them.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceStates {
    pub left: Vec<ConservedState>,
    pub right: Vec<ConservedState>,
}

impl FaceStates {
    pub fn len(&self) -> usize {
        self.left.len()
    }

    pub fn is_empty(&self) -> bool {
        self.left.is_empty()
    }
}

/// Harmonic-mean van Leer limiter on one-sided differences.
#[inline]
pub fn van_leer(a: f64, b: f64) -> f64 {
    if a * b > 0.0 {
        2.0 * a * b / (a + b)
    } else {
        0.0
    }
}

/// Component-wise limited slope of the centre cell.
pub fn limited_slope(
    u_minus: ConservedState,
    u_center: ConservedState,
    u_plus: ConservedState,
) -> ConservedState {
    let a = u_center - u_minus;
    let b = u_plus - u_center;
    ConservedState::new(van_leer(a.e_r, b.e_r), van_leer(a.f_r, b.f_r))
}

/// Characteristic amplitudes of the limited slope, left-going first.
fn slope_amplitudes(
    es: &EffectiveEigensystem,
    limiting: SlopeLimiting,
    u_minus: ConservedState,
    u_center: ConservedState,
    u_plus: ConservedState,
) -> [f64; 2] {
    match limiting {
        SlopeLimiting::Conserved => {
            characteristic_decompose(es, limited_slope(u_minus, u_center, u_plus))
        }
        SlopeLimiting::Characteristic => {
            let a = characteristic_decompose(es, u_center - u_minus);
            let b = characteristic_decompose(es, u_plus - u_center);
            [van_leer(a[0], b[0]), van_leer(a[1], b[1])]
        }
    }
}

/// `(U_{i,-}, U_{i,+})` for one cell.
#[allow(clippy::too_many_arguments)]
pub fn cell_face_states(
    es: &EffectiveEigensystem,
    p: &PhysParams,
    dt_over_dx: f64,
    dt: f64,
    t4: f64,
    stencil: [ConservedState; 3],
    recon: Reconstruction,
    limiting: SlopeLimiting,
) -> (ConservedState, ConservedState) {
    let [um, uc, up] = stencil;
    let base = uc + es.propagate(source(uc, t4, p)) * (0.5 * dt);
    match recon {
        Reconstruction::Pcm => (base, base),
        Reconstruction::Plm => {
            let amp = slope_amplitudes(es, limiting, um, uc, up);
            // (±I - (dt/dx) A_eff) acting on an eigenvector is (±1 - dt/dx lambda_k).
            let plus = es.r_eff.column(PLUS) * amp[PLUS];
            let minus = es.r_eff.column(MINUS) * amp[MINUS];
            let w_plus = 0.5 * (1.0 - dt_over_dx * es.lambda_plus);
            let w_minus = 0.5 * (-1.0 - dt_over_dx * es.lambda_minus);
            (base + minus * w_minus, base + plus * w_plus)
        }
    }
}

/// Predicted face states for all `n_cell + 1` interfaces.
///
/// `t4` holds `T^4` for every stored cell (ghosts included) and the ghost
/// cells of `grid` must already be filled.
pub fn predict_face_states(
    grid: &GridField,
    t4: &[f64],
    es: &EffectiveEigensystem,
    p: &PhysParams,
    dt: f64,
    recon: Reconstruction,
    limiting: SlopeLimiting,
) -> FaceStates {
    let data = grid.data();
    assert_eq!(t4.len(), data.len(), "T^4 must cover every stored cell");
    let ng = grid.n_ghost();
    let n = grid.n_cell();
    let lam = dt / grid.dx();

    // storage indices ng-1 ..= ng+n, i.e. interior cells -1 ..= n
    let per_cell = |j: usize| {
        cell_face_states(
            es,
            p,
            lam,
            dt,
            t4[j],
            [data[j - 1], data[j], data[j + 1]],
            recon,
            limiting,
        )
    };
    let cells: Vec<(ConservedState, ConservedState)> = if n >= PAR_THRESHOLD {
        (ng - 1..ng + n + 1).into_par_iter().map(per_cell).collect()
    } else {
        (ng - 1..ng + n + 1).map(per_cell).collect()
    };

    let left = cells[..=n].iter().map(|c| c.1).collect();
    let right = cells[1..].iter().map(|c| c.0).collect();
    FaceStates { left, right }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensystem::build_effective;
    use crate::grid::BoundaryKind;
    use crate::model::Temperature;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn params(cc: f64, sigma_a: f64, sigma_t: f64, f: f64) -> PhysParams {
        PhysParams::new(cc, sigma_a, sigma_t, f, Temperature::Uniform(1.0)).unwrap()
    }

    fn faces(grid: &GridField, p: &PhysParams, dt: f64, t4: f64) -> FaceStates {
        let es = build_effective(p, dt);
        let t4 = vec![t4; grid.data().len()];
        predict_face_states(grid, &t4, &es, p, dt, Reconstruction::Plm, SlopeLimiting::Conserved)
    }

    #[test]
    fn van_leer_examples() {
        assert_eq!(van_leer(0.3, 0.3), 0.3);
        assert_eq!(van_leer(1.0, -1.0), 0.0);
        assert_eq!(van_leer(1.0, 3.0), 1.5);
        assert_eq!(van_leer(0.0, 3.0), 0.0);
        let s = limited_slope(
            ConservedState::new(0.0, 1.0),
            ConservedState::new(1.0, 0.0),
            ConservedState::new(4.0, 1.0),
        );
        assert_eq!(s, ConservedState::new(1.5, 0.0));
    }

    #[test]
    fn equilibrium_faces_equal_cells() {
        let p = params(1e5, 1.0, 2.0, 1.0 / 3.0);
        let u = ConservedState::new(16.0, 0.0);
        let mut g = GridField::from_fn(10, 2, 0.0, 1.0, |_| u).unwrap();
        g.fill_boundary(BoundaryKind::Outflow);
        let fs = faces(&g, &p, 1e-7, 16.0);
        assert_eq!(fs.len(), 11);
        assert!(fs.left.iter().chain(&fs.right).all(|&v| v == u));
    }

    #[test]
    fn flat_data_gets_only_the_source_half_step() {
        let p = params(1e5, 1.0, 2.0, 1.0);
        let u = ConservedState::new(3.0, 0.7);
        let (dt, t4) = (2e-6, 5.0);
        let mut g = GridField::from_fn(6, 2, 0.0, 1.0, |_| u).unwrap();
        g.fill_boundary(BoundaryKind::Outflow);
        let es = build_effective(&p, dt);
        let want = u + source(u, t4, &p).scale([es.alpha, es.beta]) * (dt / 2.0);
        let fs = faces(&g, &p, dt, t4);
        assert!(fs.left.iter().chain(&fs.right).all(|&v| v == want));
    }

    #[test]
    fn right_going_slope_moves_only_the_right_face() {
        // sigma = 0, f = 1: (1, 1) is the right-going eigenvector
        let p = params(1e5, 0.0, 0.0, 1.0);
        let (dx, dt) = (0.1, 2e-7);
        let cells = [0.0, 1.0, 2.0].map(|v| ConservedState::new(v, v));
        let es = build_effective(&p, dt);
        let (um, upl) = cell_face_states(
            &es,
            &p,
            dt / dx,
            dt,
            0.0,
            cells,
            Reconstruction::Plm,
            SlopeLimiting::Conserved,
        );
        assert_eq!(um, cells[1]);
        let shift = 0.5 * (1.0 - 1e5 * dt / dx);
        assert_relative_eq!(upl.e_r, 1.0 + shift, max_relative = 1e-14);
        assert_relative_eq!(upl.f_r, 1.0 + shift, max_relative = 1e-14);
    }

    #[test]
    fn linear_energy_profile() {
        // E = x, F = 0: slope dx splits evenly between the two characteristics
        let p = params(1e5, 0.0, 0.0, 1.0);
        let n = 16;
        let mut g = GridField::from_fn(n, 2, 0.0, 1.0, |x| ConservedState::new(x, 0.0)).unwrap();
        g.fill_boundary(BoundaryKind::Outflow);
        let dx = g.dx();
        let dt = 0.4 * dx / 1e5;
        let nu = 1e5 * dt / dx;
        let fs = faces(&g, &p, dt, 0.0);
        // interior faces away from the clamped boundary slopes
        for j in 2..n - 1 {
            let xf = j as f64 * dx;
            // U_{j-1,+} = U + 1/2 (1 - nu) (dx/2) (1, 1)
            let left = fs.left[j];
            assert_relative_eq!(left.e_r, xf - 0.5 * dx + 0.25 * dx * (1.0 - nu), epsilon = 1e-14);
            assert_relative_eq!(left.f_r, 0.25 * dx * (1.0 - nu), epsilon = 1e-14);
            // U_{j,-} = U - 1/2 (1 - nu) (dx/2) (1, -1)
            let right = fs.right[j];
            assert_relative_eq!(right.e_r, xf + 0.5 * dx - 0.25 * dx * (1.0 - nu), epsilon = 1e-14);
            assert_relative_eq!(right.f_r, 0.25 * dx * (1.0 - nu), epsilon = 1e-14);
            // average of the two equals the linear interpolant minus half a step of transport
            let mean = 0.5 * (left.e_r + right.e_r);
            assert_relative_eq!(mean, xf, epsilon = 1e-14);
        }
    }

    #[test]
    fn smooth_right_going_wave_is_second_order() {
        let p = params(1.0, 0.0, 0.0, 1.0);
        let k = 2.0 * PI;
        let mut errs = Vec::new();
        let mut dxs = Vec::new();
        for n in [32usize, 64, 128, 256, 512] {
            let mut g = GridField::from_fn(n, 2, 0.0, 1.0, |x| {
                let v = (k * x).sin();
                ConservedState::new(v, v)
            })
            .unwrap();
            g.fill_boundary(BoundaryKind::Periodic);
            let dt = 0.5 * g.dx();
            let fs = faces(&g, &p, dt, 0.0);
            let err = (0..=n)
                .map(|j| {
                    let x = j as f64 * g.dx() - 0.5 * dt;
                    (fs.left[j].e_r - (k * x).sin()).abs()
                })
                .fold(0.0, f64::max);
            errs.push(err);
            dxs.push(g.dx());
        }
        // least-squares slope of log(err) against log(dx)
        let m = errs.len() as f64;
        let xs: Vec<f64> = dxs.iter().map(|d| d.ln()).collect();
        let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
        let (mx, my) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
        let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let den: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        let slope = num / den;
        assert!((1.8..=2.2).contains(&slope), "slope {slope}, errors {errs:?}");
    }

    #[test]
    fn characteristic_limiting_matches_on_single_wave() {
        let p = params(1e5, 0.0, 0.0, 1.0);
        let es = build_effective(&p, 1e-7);
        let st = [0.0, 1.0, 3.0].map(|v| ConservedState::new(v, v));
        let a = cell_face_states(&es, &p, 0.1, 1e-7, 0.0, st, Reconstruction::Plm, SlopeLimiting::Conserved);
        let b = cell_face_states(
            &es,
            &p,
            0.1,
            1e-7,
            0.0,
            st,
            Reconstruction::Plm,
            SlopeLimiting::Characteristic,
        );
        assert!((a.1 - b.1).max_abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn projections_sum_to_slope(
            sa in 0.0..10.0f64, extra in 0.0..10.0f64, f in 0.05..1.0f64,
            log_dt in -9.0..-5.0f64, a in -2.0..2.0f64, b in -2.0..2.0f64,
        ) {
            let p = params(1e5, sa, sa + extra, f);
            let es = build_effective(&p, 10f64.powf(log_dt));
            let du = ConservedState::new(a, b);
            let amp = characteristic_decompose(&es, du);
            let sum = es.r_eff.column(PLUS) * amp[PLUS] + es.r_eff.column(MINUS) * amp[MINUS];
            prop_assert!((sum - du).max_abs() <= 1e-12 * (1.0 + amp[0].abs() + amp[1].abs()));
        }

        #[test]
        fn monotone_single_wave_data_stays_bounded(
            steps in proptest::collection::vec(0.0..1.0f64, 12),
            right_going in any::<bool>(),
            cfl in 0.05..1.0f64,
        ) {
            let p = params(1.0, 0.0, 0.0, 1.0);
            let sign = if right_going { 1.0 } else { -1.0 };
            let mut acc = 0.0;
            let vals: Vec<f64> = steps.iter().map(|s| { acc += s; acc }).collect();
            let n = vals.len();
            let mut g = GridField::new(n, 2, 0.0, 1.0).unwrap();
            for (c, v) in g.interior_mut().iter_mut().zip(&vals) {
                *c = ConservedState::new(*v, sign * v);
            }
            g.fill_boundary(BoundaryKind::Outflow);
            let dt = cfl * g.dx();
            let fs = faces(&g, &p, dt, 0.0);
            for j in 1..n {
                let (lo, hi) = (vals[j - 1], vals[j]);
                for v in [fs.left[j].e_r, fs.right[j].e_r] {
                    prop_assert!(v >= lo - 1e-12 && v <= hi + 1e-12, "{v} not in [{lo}, {hi}]");
                }
            }
        }
    }
}
