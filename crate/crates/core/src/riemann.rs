//! HLLE interface flux.
//!
//! The flux Jacobian is constant, so it is its own Roe matrix and the
//! two-wave HLLE flux can be evaluated directly on the conserved variables.

use std::fmt;
use std::str::FromStr;

use crate::eigensystem::EffectiveEigensystem;
use crate::error::{Error, Result};
use crate::model::{flux, ConservedState, PhysParams};

/// Which signal speeds bound the Riemann fan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WaveSpeeds {
    /// `±sqrt(alpha beta) sqrt(f) C` from the effective Jacobian.
    #[default]
    Effective,
    /// Frozen speeds `±sqrt(f) C`.
    Plain,
}

impl WaveSpeeds {
    /// `(s_left, s_right)` for this choice.
    pub fn bounds(self, es: &EffectiveEigensystem, p: &PhysParams) -> (f64, f64) {
        match self {
            WaveSpeeds::Effective => (es.lambda_minus, es.lambda_plus),
            WaveSpeeds::Plain => (-p.light_speed(), p.light_speed()),
        }
    }
}

impl FromStr for WaveSpeeds {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "effective" => Ok(Self::Effective),
            "plain" => Ok(Self::Plain),
            other => Err(Error::InvalidControl(format!("unknown wave speeds `{other}`"))),
        }
    }
}

impl fmt::Display for WaveSpeeds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Effective => "effective",
            Self::Plain => "plain",
        })
    }
}

/// HLLE flux with explicit signal speeds `s_left < s_right`.
#[inline]
pub fn hlle_flux_with_speeds(
    u_left: ConservedState,
    u_right: ConservedState,
    s_left: f64,
    s_right: f64,
    p: &PhysParams,
) -> ConservedState {
    assert!(s_right > s_left, "degenerate HLLE fan: {s_left} .. {s_right}");
    let f_left = flux(u_left, p);
    if s_left >= 0.0 {
        return f_left;
    }
    let f_right = flux(u_right, p);
    if s_right <= 0.0 {
        return f_right;
    }
    (f_left * s_right - f_right * s_left + (u_right - u_left) * (s_left * s_right))
        * (s_right - s_left).recip()
}

/// HLLE flux bounded by the effective characteristic speeds.
pub fn hlle_flux(
    u_left: ConservedState,
    u_right: ConservedState,
    es: &EffectiveEigensystem,
    p: &PhysParams,
) -> ConservedState {
    hlle_flux_with_speeds(u_left, u_right, es.lambda_minus, es.lambda_plus, p)
}
