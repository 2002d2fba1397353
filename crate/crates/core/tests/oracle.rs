use vdw_core::drude_exact::DrudePair;
use vdw_core::oracle::{diag_convergence_report, direct_first_order, oscillator_basis_diag, DirectConfig, InteractionMode, OracleConfig, OracleError};
use vdw_core::perturbation::{first_order_expectation, second_order_sum, DrudePreset};
use vdw_core::{expand_interaction, AtomModel, Dim};

fn atom() -> AtomModel {
    AtomModel::drude_reduced(Dim::ONE)
}

const TRUNCATED: InteractionMode = InteractionMode::Truncated { max_power: 3 };

#[test]
fn consistency_triangle() {
    let r = 6.0;
    let oracle = oscillator_basis_diag(&atom(), 1.0, r, TRUNCATED, OracleConfig::new(10)).unwrap();
    let exact = DrudePair::reduced(Dim::ONE, DrudePreset::Bohr).exact_correction(r).unwrap();
    let series = expand_interaction(Dim::ONE, 3).unwrap();
    let pt2 = second_order_sum(&series, &atom(), &atom(), 1.0, r, 1).unwrap();
    assert!(((oracle.correction - exact) / exact).abs() < 1e-8);
    // perturbation theory misses O(R⁻¹²): about 1.25·(4/R³)² relative
    assert!(((pt2 - exact) / exact).abs() < 2.0 * (4.0f64 / 216.0).powi(2));
}

#[test]
fn full_kernel_at_eight() {
    let config = OracleConfig {
        convergence_tol: 1e-4,
        ..OracleConfig::new(14)
    };
    let res = oscillator_basis_diag(&atom(), 1.0, 8.0, InteractionMode::Full, config).unwrap();
    let f = 6.0 / 8f64.powi(5) - 4.0 / 8f64.powi(6) + 90.0 / 8f64.powi(7);
    assert!(res.correction > 0.0);
    assert!((res.correction / f - 1.0).abs() < 0.15);
    assert!(res.overlap > 0.99);
}

#[test]
fn strict_default_tolerance_reports_non_convergence() {
    match oscillator_basis_diag(&atom(), 1.0, 6.0, InteractionMode::Full, OracleConfig::new(12)) {
        Err(OracleError::NotConverged { relative_change, result, .. }) => {
            assert!(relative_change > 1e-6);
            assert!(result.correction > 0.0);
        }
        other => panic!("expected non-convergence, got {other:?}"),
    }
}

#[test]
fn convergence_ladders() {
    let rep = diag_convergence_report(&atom(), 1.0, 6.0, TRUNCATED, &[4, 6, 8]).unwrap();
    let d: Vec<f64> = rep.rows.iter().filter_map(|r| r.difference).map(f64::abs).collect();
    assert!(d[1] * 10.0 <= d[0], "{d:?}");
    assert!(rep.is_non_increasing(1e-14), "{rep:?}");
    let coarse = diag_convergence_report(&atom(), 1.0, 6.0, TRUNCATED, &[1, 2, 3]).unwrap();
    let d: Vec<f64> = coarse.rows.iter().filter_map(|r| r.difference).collect();
    assert!(d.iter().all(|&x| x < 0.0) && d[1].abs() * 10.0 <= d[0].abs(), "{d:?}");

    let full = diag_convergence_report(&atom(), 1.0, 8.0, InteractionMode::Full, &[6, 10, 14]).unwrap();
    assert!(full.is_non_increasing(1e-15));
    assert!(full.last_difference().unwrap().abs() < 1e-7, "{full:?}");

    let free = diag_convergence_report(&atom(), 0.0, 8.0, InteractionMode::Full, &[2, 4]).unwrap();
    assert_eq!(free.rows[0].value, free.rows[1].value);
}

#[test]
fn sign_flip_across_range() {
    let config = OracleConfig {
        convergence_tol: 1e-2,
        ..OracleConfig::new(12)
    };
    for r in [6.0, 9.0, 13.0, 20.0] {
        let res = oscillator_basis_diag(&atom(), 1.0, r, InteractionMode::Full, config).unwrap();
        assert!(res.correction > 0.0, "R̃={r}");
    }
}

fn series_total(dim: Dim, r: f64) -> f64 {
    let a = AtomModel::drude_reduced(dim);
    let s = expand_interaction(dim, 11).unwrap();
    first_order_expectation(&s, &a, &a, 1.0, r).unwrap().total()
}

#[test]
fn direct_first_order_matches_series() {
    for dim in [Dim::ONE, Dim::TWO] {
        let a = AtomModel::drude_reduced(dim);
        let v = direct_first_order(&a, &a, 1.0, 10.0, DirectConfig::for_dim(dim)).unwrap();
        let s = series_total(dim, 10.0);
        // remainder is the R⁻¹³ term
        assert!((v.value / s - 1.0).abs() < 5e-3, "d={dim}: {} vs {s}", v.value);
    }
}

#[test]
fn direct_first_order_two_dimensions_leading_terms() {
    let a = AtomModel::drude_reduced(Dim::TWO);
    let v = direct_first_order(&a, &a, 1.0, 10.0, DirectConfig::for_dim(Dim::TWO)).unwrap().value;
    let lead = 2.25 / 1e5 + 28.125 / 1e7;
    assert!((v / lead - 1.0).abs() < 0.02);
}

/// With only the R⁻⁵ and R⁻⁷ terms the d = 1 quadrature is 2.7% above: the
/// R⁻⁹ and R⁻¹¹ terms (1470/R̃⁹, 28350/R̃¹¹) are still sizeable at R̃ = 10.
#[test]
#[ignore = "R^-9 and R^-11 terms put the d=1 value 2.7% above the two leading terms"]
fn direct_first_order_one_dimension_leading_terms() {
    let a = atom();
    let v = direct_first_order(&a, &a, 1.0, 10.0, DirectConfig::for_dim(Dim::ONE)).unwrap().value;
    let lead = 6.0 / 1e5 + 90.0 / 1e7;
    assert!((v / lead - 1.0).abs() < 0.02, "{v} vs {lead}");
}

#[test]
fn direct_first_order_three_dimensions_zero() {
    let a = AtomModel::drude_reduced(Dim::THREE);
    let v = direct_first_order(&a, &a, 1.0, 10.0, DirectConfig::for_dim(Dim::THREE)).unwrap();
    assert!(v.value.abs() <= 1e-8);
}

#[test]
fn direct_first_order_guards() {
    let a = atom();
    assert!(matches!(
        direct_first_order(&a, &a, 1.0, 2.0, DirectConfig::for_dim(Dim::ONE)),
        Err(OracleError::Overlap { .. })
    ));
    let h = AtomModel::hydrogen_1d();
    assert!(direct_first_order(&h, &h, 1.0, 10.0, DirectConfig::for_dim(Dim::ONE)).is_err());
}
