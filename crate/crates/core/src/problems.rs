//! Standard test problems: exponential relaxation to equilibrium, free
//! streaming of a Gaussian and a square pulse, weak and strong equilibrium
//! diffusion of a Gaussian, and radiation growing into a Gaussian
//! temperature profile.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grid::{BoundaryKind, GridField, MIN_GHOST};
use crate::model::{ConservedState, PhysParams, Temperature};
use crate::timestepper::{DtMode, StepControl};

const LIGHT_RATIO: f64 = 1e5;
const PULSE_WIDTH: f64 = 20.0;
const PULSE_CENTER: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProblemKind {
    ExpRelaxGrowth,
    ExpRelaxDecay,
    FreeStreamGauss,
    FreeStreamSquare,
    WeakDiffusion,
    StrongDiffusion,
    GaussianTemperature,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 7] = [
        ProblemKind::ExpRelaxGrowth,
        ProblemKind::ExpRelaxDecay,
        ProblemKind::FreeStreamGauss,
        ProblemKind::FreeStreamSquare,
        ProblemKind::WeakDiffusion,
        ProblemKind::StrongDiffusion,
        ProblemKind::GaussianTemperature,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::ExpRelaxGrowth => "exp_relax_growth",
            ProblemKind::ExpRelaxDecay => "exp_relax_decay",
            ProblemKind::FreeStreamGauss => "free_stream_gauss",
            ProblemKind::FreeStreamSquare => "free_stream_square",
            ProblemKind::WeakDiffusion => "weak_diffusion",
            ProblemKind::StrongDiffusion => "strong_diffusion",
            ProblemKind::GaussianTemperature => "gaussian_temperature",
        }
    }
}

impl FromStr for ProblemKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "exp_relax" {
            return Ok(ProblemKind::ExpRelaxGrowth);
        }
        ProblemKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownProblem(s.to_string()))
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How the material temperature is specified, independent of resolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TemperatureSpec {
    Uniform(f64),
    /// `T(x) = peak exp(-(nu (x - mu))^2)`.
    Gaussian { peak: f64, nu: f64, mu: f64 },
    TracksRadiation,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialCondition {
    Uniform { e_r: f64, f_r: f64 },
    /// `E_r = F_r = exp(-(nu (x - mu))^2)`.
    GaussianPulse { nu: f64, mu: f64 },
    /// `E_r = F_r = 1` on `lo < x < hi`, zero elsewhere.
    SquarePulse { lo: f64, hi: f64 },
    /// Gaussian `E_r` with the equilibrium-diffusion flux
    /// `F_r = -(f / sigma_t) dE_r/dx`.
    DiffusionGaussian { nu: f64, mu: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    Analytic,
    SelfSimilar,
}

impl FromStr for Comparison {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analytic" => Ok(Self::Analytic),
            "self-similar" | "self_similar" => Ok(Self::SelfSimilar),
            other => Err(Error::InvalidControl(format!("unknown comparison `{other}`"))),
        }
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Analytic => "analytic",
            Self::SelfSimilar => "self-similar",
        })
    }
}

/// A complete problem definition with its default run settings.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub kind: ProblemKind,
    pub cc: f64,
    pub sigma_a: f64,
    pub sigma_t: f64,
    pub f: f64,
    pub temperature: TemperatureSpec,
    pub x_min: f64,
    pub x_max: f64,
    pub ic: InitialCondition,
    pub bc: BoundaryKind,
    pub comparison: Comparison,
    pub cfl: f64,
    pub dt_mode: DtMode,
    pub t_final: f64,
    pub resolutions: Vec<usize>,
}

impl ProblemSpec {
    pub fn from_name(name: &str) -> Result<Self> {
        Ok(Self::new(name.parse()?))
    }

    pub fn new(kind: ProblemKind) -> Self {
        let coarse = vec![32, 64, 128, 256];
        let fine = vec![320, 640, 1280, 2560];
        let gauss = InitialCondition::GaussianPulse {
            nu: PULSE_WIDTH,
            mu: PULSE_CENTER,
        };
        let diffusion = InitialCondition::DiffusionGaussian {
            nu: PULSE_WIDTH,
            mu: PULSE_CENTER,
        };
        let base = ProblemSpec {
            kind,
            cc: LIGHT_RATIO,
            sigma_a: 1.0,
            sigma_t: 2.0,
            f: 1.0,
            temperature: TemperatureSpec::Uniform(10.0),
            x_min: 0.0,
            x_max: 1.0,
            ic: InitialCondition::Uniform { e_r: 1.0, f_r: 0.0 },
            bc: BoundaryKind::Outflow,
            comparison: Comparison::Analytic,
            cfl: 0.5,
            dt_mode: DtMode::Hyperbolic,
            t_final: 1e-5,
            resolutions: coarse.clone(),
        };
        match kind {
            ProblemKind::ExpRelaxGrowth => base,
            ProblemKind::ExpRelaxDecay => ProblemSpec {
                temperature: TemperatureSpec::Uniform(1.0),
                ic: InitialCondition::Uniform { e_r: 1e4, f_r: 0.0 },
                ..base
            },
            ProblemKind::FreeStreamGauss | ProblemKind::FreeStreamSquare => ProblemSpec {
                sigma_a: 1e-6,
                sigma_t: 1e-6,
                temperature: TemperatureSpec::Uniform(1.0),
                ic: if kind == ProblemKind::FreeStreamGauss {
                    gauss
                } else {
                    InitialCondition::SquarePulse { lo: 0.2, hi: 0.4 }
                },
                t_final: 4e-6,
                ..base
            },
            ProblemKind::WeakDiffusion | ProblemKind::StrongDiffusion => {
                let sigma = if kind == ProblemKind::WeakDiffusion { 40.0 } else { 1e6 };
                ProblemSpec {
                    sigma_a: sigma,
                    sigma_t: sigma,
                    f: 1.0 / 3.0,
                    temperature: TemperatureSpec::TracksRadiation,
                    x_min: -5.0,
                    x_max: 5.0,
                    ic: diffusion,
                    comparison: Comparison::SelfSimilar,
                    t_final: 4e-6,
                    resolutions: fine,
                    ..base
                }
            }
            ProblemKind::GaussianTemperature => ProblemSpec {
                temperature: TemperatureSpec::Gaussian {
                    peak: 1.0,
                    nu: PULSE_WIDTH,
                    mu: 0.5,
                },
                ic: InitialCondition::Uniform { e_r: 0.0, f_r: 0.0 },
                // thick enough that the equilibrium length sqrt(D / (C sigma_a))
                // is far below the pulse width, with C sigma_a dt < 1 + sqrt(3)
                // at 256 cells so the relaxation stays monotone
                sigma_a: 500.0,
                sigma_t: 500.0,
                f: 1.0 / 3.0,
                comparison: Comparison::SelfSimilar,
                t_final: 2e-6,
                ..base
            },
        }
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn step_control(&self) -> Result<StepControl> {
        StepControl::new(self.cfl, self.dt_mode, self.t_final)
    }

    /// Physical parameters resolved on an `n_cell` grid.
    pub fn params(&self, n_cell: usize) -> Result<PhysParams> {
        let temp = match self.temperature {
            TemperatureSpec::Uniform(t) => Temperature::Uniform(t),
            TemperatureSpec::TracksRadiation => Temperature::TracksRadiation,
            TemperatureSpec::Gaussian { peak, nu, mu } => {
                let dx = (self.x_max - self.x_min) / n_cell as f64;
                Temperature::Profile(
                    (0..n_cell)
                        .map(|i| {
                            let x = self.x_min + (i as f64 + 0.5) * dx;
                            peak * (-(nu * (x - mu)).powi(2)).exp()
                        })
                        .collect(),
                )
            }
        };
        PhysParams::new(self.cc, self.sigma_a, self.sigma_t, self.f, temp)
    }

    pub fn initial_state(&self, x: f64) -> ConservedState {
        match self.ic {
            InitialCondition::Uniform { e_r, f_r } => ConservedState::new(e_r, f_r),
            InitialCondition::GaussianPulse { nu, mu } => {
                let e = gaussian(nu, mu, x);
                ConservedState::new(e, e)
            }
            InitialCondition::SquarePulse { lo, hi } => {
                let v = if x > lo && x < hi { 1.0 } else { 0.0 };
                ConservedState::new(v, v)
            }
            InitialCondition::DiffusionGaussian { nu, mu } => {
                let e = gaussian(nu, mu, x);
                ConservedState::new(e, 2.0 * self.f * nu * nu * (x - mu) / self.sigma_t * e)
            }
        }
    }

    /// Point-sampled initial grid and the matching parameters.
    pub fn init(&self, n_cell: usize) -> Result<(GridField, PhysParams)> {
        let mut grid =
            GridField::from_fn(n_cell, MIN_GHOST, self.x_min, self.x_max, |x| self.initial_state(x))?;
        grid.fill_boundary(self.bc);
        Ok((grid, self.params(n_cell)?))
    }

    pub fn has_reference(&self) -> bool {
        !matches!(self.kind, ProblemKind::GaussianTemperature)
    }

    /// Reference solution at `(x, t)`, if the problem has one.
    ///
    /// Exact for relaxation and free streaming (the latter neglecting the
    /// `O(1e-6)` opacity); the weak-diffusion reference is the whole-line
    /// Green's function solution of the limiting diffusion equation and the
    /// strong-diffusion reference is the frozen initial state.
    pub fn reference(&self, x: f64, t: f64) -> Option<ConservedState> {
        match self.kind {
            ProblemKind::ExpRelaxGrowth | ProblemKind::ExpRelaxDecay => {
                let TemperatureSpec::Uniform(temp) = self.temperature else {
                    return None;
                };
                let t4 = temp.powi(4);
                let e0 = self.initial_state(x);
                let decay = (-self.cc * self.sigma_a * t).exp();
                let flux_decay = (-self.cc * self.sigma_t * t).exp();
                Some(ConservedState::new(t4 + (e0.e_r - t4) * decay, e0.f_r * flux_decay))
            }
            ProblemKind::FreeStreamGauss | ProblemKind::FreeStreamSquare => {
                // split into right- and left-moving characteristic amplitudes
                let c = self.f.sqrt() * self.cc;
                let sf = self.f.sqrt();
                let right = self.initial_state(x - c * t);
                let left = self.initial_state(x + c * t);
                let w_plus = 0.5 * (right.e_r + right.f_r / sf);
                let w_minus = 0.5 * (left.e_r - left.f_r / sf);
                Some(ConservedState::new(w_plus + w_minus, sf * (w_plus - w_minus)))
            }
            ProblemKind::WeakDiffusion => {
                let InitialCondition::DiffusionGaussian { nu, mu } = self.ic else {
                    return None;
                };
                let d = self.f * self.cc / self.sigma_t;
                let s = 4.0 * d * t * nu * nu + 1.0;
                let e = (-(nu * (x - mu)).powi(2) / s).exp() / s.sqrt();
                // F = -(f / sigma_t) dE/dx
                let de_dx = -2.0 * nu * nu * (x - mu) / s * e;
                Some(ConservedState::new(e, -self.f / self.sigma_t * de_dx))
            }
            ProblemKind::StrongDiffusion => Some(self.initial_state(x)),
            ProblemKind::GaussianTemperature => None,
        }
    }

    /// Reference sampled at every interior cell centre of `grid`.
    pub fn reference_on(&self, grid: &GridField, t: f64) -> Result<Vec<ConservedState>> {
        grid.centers()
            .map(|x| self.reference(x, t))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::NoReference(self.name().to_string()))
    }

    /// Optical depth `sigma_t (x_max - x_min)`.
    pub fn optical_depth(&self) -> f64 {
        self.sigma_t * (self.x_max - self.x_min)
    }
}

fn gaussian(nu: f64, mu: f64, x: f64) -> f64 {
    (-(nu * (x - mu)).powi(2)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Parameter blocks of the standard problems:
    /// (name, C, sigma_a, sigma_t, f, x_min, x_max, t_final, resolutions, comparison)
    #[allow(clippy::type_complexity)]
    const GOLDEN: &[(&str, f64, f64, f64, f64, f64, f64, f64, [usize; 4], Comparison)] = &[
        ("exp_relax_growth", 1e5, 1.0, 2.0, 1.0, 0.0, 1.0, 1e-5, [32, 64, 128, 256], Comparison::Analytic),
        ("exp_relax_decay", 1e5, 1.0, 2.0, 1.0, 0.0, 1.0, 1e-5, [32, 64, 128, 256], Comparison::Analytic),
        ("free_stream_gauss", 1e5, 1e-6, 1e-6, 1.0, 0.0, 1.0, 4e-6, [32, 64, 128, 256], Comparison::Analytic),
        ("free_stream_square", 1e5, 1e-6, 1e-6, 1.0, 0.0, 1.0, 4e-6, [32, 64, 128, 256], Comparison::Analytic),
        ("weak_diffusion", 1e5, 40.0, 40.0, 1.0 / 3.0, -5.0, 5.0, 4e-6, [320, 640, 1280, 2560], Comparison::SelfSimilar),
        ("strong_diffusion", 1e5, 1e6, 1e6, 1.0 / 3.0, -5.0, 5.0, 4e-6, [320, 640, 1280, 2560], Comparison::SelfSimilar),
    ];

    #[test]
    fn defaults_match_parameter_table() {
        for &(name, cc, sa, st, f, lo, hi, t, res, cmp) in GOLDEN {
            let s = ProblemSpec::from_name(name).unwrap();
            assert_eq!(s.name(), name);
            assert_eq!((s.cc, s.sigma_a, s.sigma_t, s.f), (cc, sa, st, f), "{name}");
            assert_eq!((s.x_min, s.x_max, s.t_final), (lo, hi, t), "{name}");
            assert_eq!(s.resolutions, res.to_vec(), "{name}");
            assert_eq!(s.comparison, cmp, "{name}");
            assert_eq!((s.cfl, s.dt_mode, s.bc), (0.5, DtMode::Hyperbolic, BoundaryKind::Outflow));
        }
        let g = ProblemSpec::new(ProblemKind::ExpRelaxGrowth);
        assert_eq!(g.temperature, TemperatureSpec::Uniform(10.0));
        assert_eq!(g.ic, InitialCondition::Uniform { e_r: 1.0, f_r: 0.0 });
        let d = ProblemSpec::new(ProblemKind::ExpRelaxDecay);
        assert_eq!(d.temperature, TemperatureSpec::Uniform(1.0));
        assert_eq!(d.ic, InitialCondition::Uniform { e_r: 1e4, f_r: 0.0 });
        assert_eq!(
            ProblemSpec::new(ProblemKind::FreeStreamGauss).ic,
            InitialCondition::GaussianPulse { nu: 20.0, mu: 0.3 }
        );
        assert_eq!(
            ProblemSpec::new(ProblemKind::WeakDiffusion).ic,
            InitialCondition::DiffusionGaussian { nu: 20.0, mu: 0.3 }
        );
    }

    #[test]
    fn names_round_trip_and_unknown_is_rejected() {
        for k in ProblemKind::ALL {
            assert_eq!(k.name().parse::<ProblemKind>().unwrap(), k);
        }
        assert_eq!("exp_relax".parse::<ProblemKind>().unwrap(), ProblemKind::ExpRelaxGrowth);
        assert!(matches!(ProblemSpec::from_name("marshak"), Err(Error::UnknownProblem(_))));
    }

    #[test]
    fn initial_conditions() {
        let sq = ProblemSpec::new(ProblemKind::FreeStreamSquare);
        assert_eq!(sq.initial_state(0.3), ConservedState::new(1.0, 1.0));
        assert_eq!(sq.initial_state(0.1), ConservedState::ZERO);
        assert_eq!(sq.initial_state(0.2), ConservedState::ZERO);

        let w = ProblemSpec::new(ProblemKind::WeakDiffusion);
        assert_eq!(w.initial_state(0.3), ConservedState::new(1.0, 0.0));

        let (g, p) = ProblemSpec::new(ProblemKind::ExpRelaxGrowth).init(32).unwrap();
        assert!(g.interior().iter().all(|u| *u == ConservedState::new(1.0, 0.0)));
        assert_eq!(p.temp, Temperature::Uniform(10.0));
    }

    #[test]
    fn diffusion_flux_is_down_gradient() {
        for kind in [ProblemKind::WeakDiffusion, ProblemKind::StrongDiffusion] {
            let s = ProblemSpec::new(kind);
            let (g, _) = s.init(320).unwrap();
            for x in g.centers() {
                let u = s.initial_state(x);
                // analytic derivative of exp(-(nu (x - mu))^2)
                let de_dx = -2.0 * 400.0 * (x - 0.3) * u.e_r;
                assert_relative_eq!(u.f_r, -(s.f / s.sigma_t) * de_dx, max_relative = 1e-14, epsilon = 1e-300);
            }
        }
    }

    #[test]
    fn relaxation_reference() {
        let s = ProblemSpec::new(ProblemKind::ExpRelaxDecay);
        let t = 1.0 / (s.cc * s.sigma_a);
        let r = s.reference(0.5, t).unwrap();
        assert_relative_eq!(r.e_r, 1.0 + (1e4 - 1.0) * (-1f64).exp(), max_relative = 1e-14);
        assert_eq!(r.f_r, 0.0);
    }

    #[test]
    fn free_streaming_reference() {
        let s = ProblemSpec::new(ProblemKind::FreeStreamGauss);
        for x in [0.1, 0.3, 0.55] {
            assert_eq!(s.reference(x, 0.0).unwrap(), s.initial_state(x));
        }
        let r = s.reference(0.7, 4e-6).unwrap();
        assert_relative_eq!(r.e_r, 1.0, max_relative = 1e-12);
        assert_relative_eq!(r.f_r, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn green_function_peak() {
        let s = ProblemSpec::new(ProblemKind::WeakDiffusion);
        let t = 4e-6;
        let d = s.f * s.cc / s.sigma_t;
        let r = s.reference(0.3, t).unwrap();
        assert_relative_eq!(r.e_r, 1.0 / (4.0 * d * t * 400.0 + 1.0).sqrt(), max_relative = 1e-14);
        assert_eq!(r.f_r, 0.0);
    }

    #[test]
    fn gaussian_temperature_profile() {
        let s = ProblemSpec::new(ProblemKind::GaussianTemperature);
        let p = s.params(100).unwrap();
        let Temperature::Profile(ts) = p.temp else { panic!("expected a profile") };
        assert_eq!(ts.len(), 100);
        assert!(ts.iter().cloned().fold(0.0, f64::max) > 0.99);
        assert!(s.reference(0.5, 1e-6).is_none());
        assert!(s.optical_depth() > 100.0);
    }

    #[test]
    fn optical_depths_classify_regimes() {
        assert!(ProblemSpec::new(ProblemKind::FreeStreamGauss).optical_depth() < 1.0);
        assert!(ProblemSpec::new(ProblemKind::WeakDiffusion).optical_depth() > 1.0);
        assert!(ProblemSpec::new(ProblemKind::StrongDiffusion).optical_depth() > 1e6);
    }
}
