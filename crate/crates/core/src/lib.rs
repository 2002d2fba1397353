//! Van der Waals interaction of two neutral atoms whose electrons are confined
//! to d = 1, 2 or 3 dimensions while the Coulomb field stays three-dimensional.
//!
//! The crate builds the multipole expansion of the four-term interaction with
//! exact rational coefficients, evaluates first- and second-order
//! perturbation theory through atom moments, solves the dipole-coupled Drude
//! pair exactly, and provides brute-force oracles to check all of it.
//!
//! Internally everything is in reduced units: `k = e²/4πε₀ = 1`, lengths in
//! the characteristic length `a`, energies in `k/a`.
//!
//! ```
//! use vdw_core::{expand_interaction, first_order_expectation, AtomModel, Dim};
//!
//! let series = expand_interaction(Dim::ONE, 7).unwrap();
//! let atom = AtomModel::drude_reduced(Dim::ONE);
//! let e = first_order_expectation(&series, &atom, &atom, 1.0, 10.0).unwrap();
//! assert!((e.coefficient(5) - 6.0).abs() < 1e-12);
//! ```

pub mod atoms;
pub mod drude_exact;
pub mod fit;
pub mod multipole;
pub mod oracle;
pub mod perturbation;
pub mod poly;
pub mod potential;
pub mod quadrature;
pub mod units;

pub use atoms::{AtomError, AtomKind, AtomModel, CharacteristicLength, DrudeParams, Preset, RadialDensity, ShapeCoefficient};
pub use drude_exact::{exact_correction, series_residual, shifted_frequencies, DrudePair, NormalModeSet};
pub use multipole::{
    exact_interaction, expand_interaction, golden_mismatches, truncation_residual, InteractionSeries, Monomial,
    MultipoleError, MAX_POWER_CAP,
};
pub use oracle::{
    direct_first_order, oscillator_basis_diag, DirectConfig, InteractionMode, OracleConfig, OracleError, OracleResult,
};
pub use perturbation::{
    first_order_closed_form, first_order_expectation, parity_cross_term, second_order_drude_closed_form,
    second_order_sum, total_energy_curve, CurveRow, DrudePreset, EnergyBreakdown,
};
pub use poly::Rational;
pub use potential::{shell_theorem_check, v_a_multipole, v_a_numeric, PotentialSample};
pub use units::{CoulombConstant, Dim};
