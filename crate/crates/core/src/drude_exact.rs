//! Exact ground state of two Drude atoms coupled through the dipole term.
//!
//! The dipole coupling `k(r_A·r_B − 3x_A x_B)/R³` is diagonalised by the
//! symmetric and antisymmetric coordinates. Along the separation axis the
//! pair frequencies are `ω√(1 ± 2x)`, transverse ones `ω√(1 ± x)`, with
//! `x = k/(mω²R³)`.

use serde::Serialize;
use thiserror::Error;

use crate::atoms::DrudeParams;
use crate::fit::loglog_slope;
use crate::perturbation::{second_order_drude_closed_form, DrudePreset};
use crate::units::Dim;

#[derive(Debug, Error, PartialEq)]
pub enum DrudeExactError {
    #[error("coupled oscillator is unstable at R = {r}: ω̃₋₂² = {omega_sq:e} ≤ 0")]
    Unstable { r: f64, omega_sq: f64 },
    #[error("ω, m and R must be positive")]
    BadParameters,
}

/// One family of normal modes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalMode {
    pub shift: i32,
    pub multiplicity: usize,
    pub omega_sq: f64,
}

impl NormalMode {
    /// `ω̃`, or NaN for an unstable mode.
    pub fn omega(&self) -> f64 {
        if self.omega_sq >= 0.0 {
            self.omega_sq.sqrt()
        } else {
            f64::NAN
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalModeSet {
    pub dim: Dim,
    pub omega: f64,
    /// Dimensionless coupling `k/(mω²R³)`.
    pub coupling: f64,
    /// Shifts −2, −1, 0, +1, +2 in that order; the shift-0 entry is the
    /// uncoupled reference with multiplicity 2d.
    pub modes: [NormalMode; 5],
    pub valid: bool,
}

impl NormalModeSet {
    pub fn mode(&self, shift: i32) -> &NormalMode {
        &self.modes[(shift + 2) as usize]
    }
}

pub fn shifted_frequencies(dim: Dim, omega: f64, k: f64, mass: f64, r: f64) -> NormalModeSet {
    let d = dim.get();
    let x = k / (mass * omega * omega * r.powi(3));
    let mult = |n: i32| match n.abs() {
        2 => 1,
        1 => d - 1,
        _ => 2 * d,
    };
    let modes = [-2, -1, 0, 1, 2].map(|n| NormalMode {
        shift: n,
        multiplicity: mult(n),
        omega_sq: omega * omega * (1.0 + n as f64 * x),
    });
    NormalModeSet {
        dim,
        omega,
        coupling: x,
        valid: modes[0].omega_sq > 0.0,
        modes,
    }
}

/// `√(1 + y) + √(1 − y) − 2` without cancellation.
pub fn pair_shift(y: f64) -> f64 {
    let sp = (1.0 + y).sqrt();
    let sm = (1.0 - y).sqrt();
    -2.0 * y * y / ((1.0 + sp) * (1.0 + sm) * (sp + sm))
}

/// Coupled Drude pair with explicit constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DrudePair {
    pub dim: Dim,
    pub params: DrudeParams,
    pub k: f64,
}

impl DrudePair {
    /// Pair in reduced units (`k = a = 1`) for a curve preset.
    pub fn reduced(dim: Dim, preset: DrudePreset) -> Self {
        Self {
            dim,
            params: DrudeParams::from_hbar_omega(preset.reduced_hbar_omega(), 1.0),
            k: 1.0,
        }
    }

    pub fn modes(&self, r: f64) -> NormalModeSet {
        shifted_frequencies(self.dim, self.params.omega, self.k, self.params.mass, r)
    }

    pub fn exact_correction(&self, r: f64) -> Result<f64, DrudeExactError> {
        exact_correction(self.dim, self.params, self.k, r)
    }

    pub fn closed_form_r6(&self, r: f64) -> f64 {
        second_order_drude_closed_form(
            self.dim,
            self.params.a_squared().sqrt(),
            self.k,
            self.params.hbar_omega(),
            r,
        )
    }
}

/// `(ħ/2)(ω̃₂ + ω̃₋₂ + (d − 1)(ω̃₁ + ω̃₋₁) − 2dω) `, the coupled ground energy
/// minus the uncoupled one.
pub fn exact_correction(dim: Dim, params: DrudeParams, k: f64, r: f64) -> Result<f64, DrudeExactError> {
    let DrudeParams { hbar, mass, omega } = params;
    if !(omega > 0.0 && mass > 0.0 && r > 0.0) {
        return Err(DrudeExactError::BadParameters);
    }
    let set = shifted_frequencies(dim, omega, k, mass, r);
    if !set.valid {
        return Err(DrudeExactError::Unstable {
            r,
            omega_sq: set.mode(-2).omega_sq,
        });
    }
    let x = set.coupling;
    let transverse = (dim.get() - 1) as f64;
    Ok(0.5 * hbar * omega * (pair_shift(2.0 * x) + transverse * pair_shift(x)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesResidual {
    /// `(R̃, |exact − r6|)` in units of k/a.
    pub points: Vec<(f64, f64)>,
    pub slope: Option<f64>,
}

/// Residual of the `R⁻⁶` closed form against the exact energy, and its
/// fitted log-log slope (`None` when the residual vanishes identically).
pub fn series_residual(pair: &DrudePair, grid: &[f64]) -> Result<SeriesResidual, DrudeExactError> {
    let mut points = Vec::with_capacity(grid.len());
    for &r in grid {
        let e = pair.exact_correction(r)?;
        points.push((r, (e - pair.closed_form_r6(r)).abs()));
    }
    let slope = if points.iter().all(|p| p.1 > 0.0) && points.len() >= 2 {
        Some(loglog_slope(&points))
    } else {
        None
    };
    Ok(SeriesResidual { points, slope })
}
