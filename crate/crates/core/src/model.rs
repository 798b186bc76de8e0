//! Conserved state, physical parameters and the point-wise flux and source
//! terms of the radiation subsystem.
//!
//! All quantities are non-dimensional: `cc` is the ratio of the speed of
//! light to the reference material sound speed, and the radiation energy
//! density and flux are scaled accordingly.

use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// Radiation energy density and flux in one cell.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ConservedState {
    pub e_r: f64,
    pub f_r: f64,
}

impl ConservedState {
    pub const ZERO: ConservedState = ConservedState { e_r: 0.0, f_r: 0.0 };

    pub const fn new(e_r: f64, f_r: f64) -> Self {
        Self { e_r, f_r }
    }

    pub fn is_finite(&self) -> bool {
        self.e_r.is_finite() && self.f_r.is_finite()
    }

    /// Component-wise product.
    pub fn scale(self, weights: [f64; 2]) -> Self {
        Self::new(self.e_r * weights[0], self.f_r * weights[1])
    }

    pub fn as_array(self) -> [f64; 2] {
        [self.e_r, self.f_r]
    }

    pub fn from_array(v: [f64; 2]) -> Self {
        Self::new(v[0], v[1])
    }

    pub fn max_abs(self) -> f64 {
        self.e_r.abs().max(self.f_r.abs())
    }
}

impl Add for ConservedState {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.e_r + rhs.e_r, self.f_r + rhs.f_r)
    }
}

impl Sub for ConservedState {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.e_r - rhs.e_r, self.f_r - rhs.f_r)
    }
}

impl Neg for ConservedState {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.e_r, -self.f_r)
    }
}

impl Mul<f64> for ConservedState {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self::new(self.e_r * rhs, self.f_r * rhs)
    }
}

impl Mul<ConservedState> for f64 {
    type Output = ConservedState;
    fn mul(self, rhs: ConservedState) -> ConservedState {
        rhs * self
    }
}

impl AddAssign for ConservedState {
    fn add_assign(&mut self, rhs: Self) {
        self.e_r += rhs.e_r;
        self.f_r += rhs.f_r;
    }
}

impl SubAssign for ConservedState {
    fn sub_assign(&mut self, rhs: Self) {
        self.e_r -= rhs.e_r;
        self.f_r -= rhs.f_r;
    }
}

/// Row-major 2x2 matrix.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Mat2(pub [[f64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[1.0, 0.0], [0.0, 1.0]]);

    pub const fn diag(a: f64, b: f64) -> Self {
        Mat2([[a, 0.0], [0.0, b]])
    }

    pub fn apply(&self, u: ConservedState) -> ConservedState {
        let m = &self.0;
        ConservedState::new(
            m[0][0] * u.e_r + m[0][1] * u.f_r,
            m[1][0] * u.e_r + m[1][1] * u.f_r,
        )
    }

    pub fn matmul(&self, rhs: &Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[0.0; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2(out)
    }

    pub fn column(&self, k: usize) -> ConservedState {
        ConservedState::new(self.0[0][k], self.0[1][k])
    }

    pub fn row(&self, k: usize) -> [f64; 2] {
        self.0[k]
    }

    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                m = m.max((self.0[i][j] - other.0[i][j]).abs());
            }
        }
        m
    }
}

/// Material temperature seen by the radiation field.
#[derive(Debug, Clone, PartialEq)]
pub enum Temperature {
    /// Spatially constant `T`.
    Uniform(f64),
    /// `T` per interior cell; ghost values follow the boundary condition.
    Profile(Vec<f64>),
    /// Material in equilibrium with the radiation: `T^4` is reset to the
    /// local `E_r` at the start of every step and held fixed within it.
    TracksRadiation,
}

impl Temperature {
    /// Constant `T^4` when it does not vary in space or time.
    pub fn uniform_t4(&self) -> Option<f64> {
        match self {
            Temperature::Uniform(t) => Some(t.powi(4)),
            _ => None,
        }
    }
}

/// Closure and coupling constants of the subsystem.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysParams {
    /// Ratio of light speed to the reference material sound speed.
    pub cc: f64,
    pub sigma_a: f64,
    pub sigma_t: f64,
    /// Scalar Eddington factor, `P_r = f E_r`.
    pub f: f64,
    pub temp: Temperature,
}

impl PhysParams {
    pub fn new(cc: f64, sigma_a: f64, sigma_t: f64, f: f64, temp: Temperature) -> Result<Self> {
        let p = Self {
            cc,
            sigma_a,
            sigma_t,
            f,
            temp,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        if !(self.cc.is_finite() && self.cc > 0.0) {
            return bad(format!("C must be positive and finite, got {}", self.cc));
        }
        if !(self.sigma_a.is_finite() && self.sigma_a >= 0.0) {
            return bad(format!("sigma_a must be >= 0, got {}", self.sigma_a));
        }
        if !(self.sigma_t.is_finite() && self.sigma_t >= self.sigma_a) {
            return bad(format!(
                "sigma_t must satisfy sigma_t >= sigma_a, got sigma_t = {}, sigma_a = {}",
                self.sigma_t, self.sigma_a
            ));
        }
        if !(self.f > 0.0 && self.f <= 1.0) {
            return bad(format!("Eddington factor must lie in (0, 1], got {}", self.f));
        }
        match &self.temp {
            Temperature::Uniform(t) if !(t.is_finite() && *t >= 0.0) => {
                bad(format!("temperature must be >= 0, got {t}"))
            }
            Temperature::Profile(ts) if ts.iter().any(|t| !(t.is_finite() && *t >= 0.0)) => {
                bad("temperature profile must be finite and >= 0".into())
            }
            _ => Ok(()),
        }
    }

    /// Frozen characteristic speed `sqrt(f) C`.
    pub fn light_speed(&self) -> f64 {
        self.f.sqrt() * self.cc
    }

    /// Equilibrium diffusion coefficient `f C / sigma_t`.
    pub fn diffusion_coefficient(&self) -> f64 {
        self.f * self.cc / self.sigma_t
    }

    /// Flux Jacobian `dF/dU`, constant for fixed `f`.
    pub fn jacobian(&self) -> Mat2 {
        Mat2([[0.0, self.cc], [self.cc * self.f, 0.0]])
    }
}

/// Physical flux `(C F_r, C f E_r)`.
#[inline]
pub fn flux(u: ConservedState, p: &PhysParams) -> ConservedState {
    ConservedState::new(p.cc * u.f_r, p.cc * p.f * u.e_r)
}

/// Stiff source `(C sigma_a (T^4 - E_r), -C sigma_t F_r)`.
#[inline]
pub fn source(u: ConservedState, t4: f64, p: &PhysParams) -> ConservedState {
    ConservedState::new(p.cc * p.sigma_a * (t4 - u.e_r), -p.cc * p.sigma_t * u.f_r)
}

/// `dS/dU` with `T` held fixed. State independent.
pub fn source_jacobian(p: &PhysParams) -> Mat2 {
    Mat2::diag(-p.cc * p.sigma_a, -p.cc * p.sigma_t)
}
