//! Source-modified characteristic structure used by the predictor.
//!
//! Averaging `exp(tau dS/dU)` over `tau in [0, dt/2]` gives the diagonal
//! propagation operator `diag(alpha, beta)`. Applied to the flux Jacobian it
//! yields
//!
//! ```text
//!   A_eff = | 0            alpha C |
//!           | beta f C     0       |
//! ```
//!
//! with eigenvalues `±sqrt(alpha beta) sqrt(f) C`. Both weights lie in
//! `(0, 1]`, so the effective speeds always sit inside the frozen ones and
//! collapse to zero as the coupling becomes stiff.

use crate::model::{ConservedState, Mat2, PhysParams};

/// Index of the left-going characteristic (first column of `r_eff`).
pub const MINUS: usize = 0;
/// Index of the right-going characteristic (second column of `r_eff`).
pub const PLUS: usize = 1;

/// `(1 - e^{-x}) / x` for `x >= 0`, equal to 1 at the origin.
///
/// Evaluated through `expm1` so there is no cancellation for small `x`.
pub fn propagation_weight(x: f64) -> f64 {
    assert!(x >= 0.0, "propagation weight needs x >= 0, got {x}");
    if x == 0.0 {
        1.0
    } else if x.is_infinite() {
        0.0
    } else {
        -(-x).exp_m1() / x
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveEigensystem {
    pub alpha: f64,
    pub beta: f64,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub a_eff: Mat2,
    /// Right eigenvectors stored as columns, left-going first.
    pub r_eff: Mat2,
    /// Left eigenvectors stored as rows, matching `r_eff`.
    pub l_eff: Mat2,
}

impl EffectiveEigensystem {
    pub fn lambda(&self, k: usize) -> f64 {
        match k {
            MINUS => self.lambda_minus,
            _ => self.lambda_plus,
        }
    }

    pub fn max_speed(&self) -> f64 {
        self.lambda_plus.abs().max(self.lambda_minus.abs())
    }

    /// Propagation operator applied to a source vector.
    pub fn propagate(&self, s: ConservedState) -> ConservedState {
        s.scale([self.alpha, self.beta])
    }
}

/// Effective eigensystem for a step of length `dt`, with the propagation
/// operator evaluated over the half step.
pub fn build_effective(p: &PhysParams, dt: f64) -> EffectiveEigensystem {
    assert!(dt > 0.0, "time step must be positive, got {dt}");
    let half = 0.5 * dt;
    let alpha = propagation_weight(p.cc * p.sigma_a * half);
    let beta = propagation_weight(p.cc * p.sigma_t * half);
    assert!(alpha > 0.0 && beta > 0.0, "propagation weights underflowed");

    let speed = (alpha * beta).sqrt() * p.light_speed();
    let ratio = (beta * p.f / alpha).sqrt();
    let inv_ratio = (alpha / (beta * p.f)).sqrt();

    EffectiveEigensystem {
        alpha,
        beta,
        lambda_plus: speed,
        lambda_minus: -speed,
        a_eff: Mat2([[0.0, alpha * p.cc], [beta * p.f * p.cc, 0.0]]),
        r_eff: Mat2([[1.0, 1.0], [-ratio, ratio]]),
        l_eff: Mat2([[0.5, -0.5 * inv_ratio], [0.5, 0.5 * inv_ratio]]),
    }
}

/// Characteristic amplitudes `L_eff^k . du`, left-going first.
pub fn characteristic_decompose(es: &EffectiveEigensystem, du: ConservedState) -> [f64; 2] {
    let l = &es.l_eff.0;
    [
        l[0][0] * du.e_r + l[0][1] * du.f_r,
        l[1][0] * du.e_r + l[1][1] * du.f_r,
    ]
}

/// `sum_k amp_k R_eff^k`.
pub fn characteristic_compose(es: &EffectiveEigensystem, amp: [f64; 2]) -> ConservedState {
    es.r_eff.column(MINUS) * amp[MINUS] + es.r_eff.column(PLUS) * amp[PLUS]
}
