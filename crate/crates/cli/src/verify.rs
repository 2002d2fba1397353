use std::io::Write;
use std::process::ExitCode;

use anyhow::Result;
use serde::Serialize;

use vdw_core::fit::{geomspace, linspace};
use vdw_core::oracle::diag_convergence_report;
use vdw_core::perturbation::{dominance_crossover, first_order_via_potential};
use vdw_core::potential::field_point;
use vdw_core::{
    direct_first_order, expand_interaction, first_order_closed_form, first_order_expectation, golden_mismatches,
    oscillator_basis_diag, parity_cross_term, second_order_drude_closed_form, second_order_sum, series_residual,
    shell_theorem_check, truncation_residual, v_a_multipole, v_a_numeric, AtomModel, Dim, DirectConfig, DrudePair,
    DrudePreset, InteractionMode, InteractionSeries, OracleConfig, OracleError, RadialDensity, Rational,
};

use crate::args::{Fault, Level, TextFormat, VerifyArgs};
use crate::output::{sink, write_json};

#[derive(Debug, Serialize)]
struct Check {
    name: &'static str,
    pass: bool,
    detail: String,
}

type Outcome = Result<(bool, String)>;
type Plan = Vec<(&'static str, Box<dyn Fn() -> Outcome>)>;

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        ((a - b) / b).abs()
    }
}

fn drude(d: Dim) -> AtomModel {
    AtomModel::drude_reduced(d)
}

fn golden(fault: Option<Fault>) -> Outcome {
    let mut bad = 0;
    for d in Dim::ALL {
        let mut s = expand_interaction(d, 5)?;
        if fault == Some(Fault::GoldenCoefficient) && d == Dim::THREE {
            if let Some(ms) = s.monomials_mut(4) {
                ms[0].coeff += Rational::from_integer(1);
            }
        }
        bad += golden_mismatches(&s).len();
    }
    Ok((bad == 0, format!("{bad} monomials differ from the closed vector form, d=1..3 to R^-5")))
}

fn series_invariants() -> Outcome {
    for d in Dim::ALL {
        expand_interaction(d, 9)?.validate()?;
    }
    Ok((true, "d=1..3 to R^-9: homogeneity, exchange symmetry and parity hold".into()))
}

fn residual_decay() -> Outcome {
    let mut exps = Vec::new();
    for d in Dim::ALL {
        let s = expand_interaction(d, 5)?;
        let rep = truncation_residual(&s, &geomspace(20.0, 200.0, 6), 64, 1.0, 7)?;
        exps.push(rep.decay_exponent.unwrap_or(f64::NAN));
    }
    let pass = exps.iter().all(|e| (e - 6.0).abs() < 0.25);
    Ok((pass, format!("R^-5 truncation residual decays as R^-p with p = {exps:.2?} (need 6 ± 0.25)")))
}

fn json_round_trip() -> Outcome {
    let mut ok = true;
    for d in Dim::ALL {
        let s = expand_interaction(d, 7)?;
        ok &= InteractionSeries::from_json_str(&s.to_json_string())? == s;
    }
    Ok((ok, "series survive a JSON round trip, d=1..3 to R^-7".into()))
}

fn first_order_law(power: u32) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut got = Vec::new();
    for d in Dim::ALL {
        let s = expand_interaction(d, 7)?;
        let a = drude(d);
        let fo = first_order_expectation(&s, &a, &a, 1.0, 10.0)?;
        let (r5, r7) = first_order_closed_form(d, 1.0, a.alpha()?.0, 1.0, 10.0);
        let (term, closed) = if power == 5 { (fo.term(5), r5) } else { (fo.term(7), r7) };
        worst = worst.max((term - closed).abs() / 10f64.powi(-(power as i32)));
        got.push(fo.coefficient(power));
    }
    Ok((worst < 1e-10, format!("R^-{power} coefficients d=1..3 {got:?}, max deviation from closed form {worst:.1e}")))
}

fn even_powers_vanish() -> Outcome {
    let mut worst: f64 = 0.0;
    for d in Dim::ALL {
        let s = expand_interaction(d, 8)?;
        let a = drude(d);
        let fo = first_order_expectation(&s, &a, &a, 1.0, 10.0)?;
        for n in [3, 4, 6, 8] {
            worst = worst.max(fo.term(n).abs());
        }
    }
    Ok((worst == 0.0, format!("max |first-order R^-3, R^-4, R^-6, R^-8| = {worst:.1e}")))
}

fn second_order() -> Outcome {
    let mut worst: f64 = 0.0;
    for d in Dim::ALL {
        let s = expand_interaction(d, 3)?;
        let a = drude(d);
        let sum = second_order_sum(&s, &a, &a, 1.0, 10.0, 1)?;
        worst = worst.max(rel(sum, second_order_drude_closed_form(d, 1.0, 1.0, 0.5, 10.0)));
    }
    Ok((worst < 1e-12, format!("ladder sum vs closed form at R=10, max relative deviation {worst:.1e}")))
}

fn dipole_saturation() -> Outcome {
    let mut worst: f64 = 0.0;
    for d in Dim::ALL {
        let s = expand_interaction(d, 3)?;
        let a = drude(d);
        let one = second_order_sum(&s, &a, &a, 1.0, 10.0, 1)?;
        let four = second_order_sum(&s, &a, &a, 1.0, 10.0, 4)?;
        worst = worst.max(rel(four, one));
    }
    Ok((worst < 1e-12, format!("cutoff 4 vs cutoff 1 dipole sum, max relative change {worst:.1e}")))
}

fn parity() -> Outcome {
    let mut worst: f64 = 0.0;
    for d in Dim::ALL {
        let s = expand_interaction(d, 4)?;
        let a = drude(d);
        for cutoff in [1, 3, 6] {
            worst = worst.max(parity_cross_term(&s, &a, &a, 1.0, 1.0, cutoff)?);
        }
    }
    Ok((worst <= 1e-14, format!("max |R^-3 x R^-4 cross term| = {worst:.1e} (tol 1e-14)")))
}

fn exact_slope() -> Outcome {
    let grid = geomspace(10.0, 40.0, 16);
    let mut slopes = Vec::new();
    for d in Dim::ALL {
        let pair = DrudePair::reduced(d, DrudePreset::Bohr);
        slopes.push(series_residual(&pair, &grid)?.slope.unwrap_or(f64::NAN));
    }
    let pass = slopes.iter().all(|&s| s <= -11.5);
    Ok((pass, format!("exact minus R^-6 slopes d=1..3 {slopes:.3?} (need <= -11.5)")))
}

fn exact_negative() -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    for d in Dim::ALL {
        let pair = DrudePair::reduced(d, DrudePreset::Bohr);
        for r in linspace(2.05, 60.0, 200) {
            worst = worst.max(pair.exact_correction(r)?);
        }
    }
    Ok((worst < 0.0, format!("largest exact correction on [2.05, 60] is {worst:.3e}")))
}

fn alpha_values() -> Outcome {
    let drude: Vec<f64> = Dim::ALL
        .iter()
        .map(|&d| drude(d).alpha().map(|a| a.0))
        .collect::<std::result::Result<_, _>>()?;
    let ring = AtomModel::ring()?.alpha()?.0;
    let pass = drude.iter().all(|&a| rel(a, 3.0) < 1e-12) && rel(ring, 1.5) < 1e-3;
    Ok((pass, format!("Drude alpha {drude:?}, ring alpha {ring:.6}")))
}

fn three_d_multipole_zero() -> Outcome {
    let a = drude(Dim::THREE);
    let mut worst: f64 = 0.0;
    for order in [3, 5] {
        for theta in [0.0, 0.7, 1.5] {
            worst = worst.max(v_a_multipole(&a, field_point(10.0, theta), order)?.value.abs());
        }
    }
    Ok((worst == 0.0, format!("max |d=3 multipole V_A| = {worst:.1e}")))
}

fn crossover() -> Outcome {
    let c: Vec<Option<f64>> = [Dim::ONE, Dim::TWO]
        .iter()
        .map(|&d| dominance_crossover(d, DrudePreset::Bohr, 2.0, 20.0, 1000))
        .collect();
    let pass = c.iter().all(|x| x.is_some_and(|x| (3.0..=6.0).contains(&x)));
    let show = |x: Option<f64>| x.map_or("none".to_string(), |x| format!("{x:.4}"));
    Ok((pass, format!("R^-5 dominance from d=1 {}, d=2 {} (need [3, 6])", show(c[0]), show(c[1]))))
}

fn third_route() -> Outcome {
    let mut worst: f64 = 0.0;
    for d in [Dim::ONE, Dim::TWO] {
        let s = expand_interaction(d, 7)?;
        let a = drude(d);
        for r in [1000.0, 3000.0] {
            let fo = first_order_expectation(&s, &a, &a, 1.0, r)?;
            worst = worst.max(rel(first_order_via_potential(&a, &a, 1.0, r)?, fo.term(5) + fo.term(7)));
        }
    }
    Ok((worst < 1e-8, format!("potential route vs moments at R=1000, 3000, max relative deviation {worst:.1e}")))
}

fn sign_flip() -> Outcome {
    let atom = drude(Dim::ONE);
    let config = OracleConfig {
        convergence_tol: 1e-2,
        ..OracleConfig::new(12)
    };
    let mut min_ratio = f64::INFINITY;
    for r in [6.0, 8.0, 10.0, 13.0, 16.0, 20.0] {
        let res = match oscillator_basis_diag(&atom, 1.0, r, InteractionMode::Full, config) {
            Ok(res) => res,
            Err(OracleError::NotConverged { relative_change, .. }) => {
                return Ok((false, format!("R={r}: cutoff change {relative_change:.1e}")))
            }
            Err(e) => return Err(e.into()),
        };
        let f = 6.0 / r.powi(5) - 4.0 / r.powi(6) + 90.0 / r.powi(7);
        min_ratio = min_ratio.min(res.correction / f);
    }
    Ok((min_ratio > 0.85, format!("full-kernel oracle / (6/R^5 - 4/R^6 + 90/R^7) >= {min_ratio:.3} on [6, 20]")))
}

fn oracle_vs_exact() -> Outcome {
    let atom = drude(Dim::ONE);
    let pair = DrudePair::reduced(Dim::ONE, DrudePreset::Bohr);
    let mut worst: f64 = 0.0;
    for r in [6.0, 8.0, 10.0] {
        let res = oscillator_basis_diag(&atom, 1.0, r, InteractionMode::Truncated { max_power: 3 }, OracleConfig::new(10))?;
        worst = worst.max(rel(res.correction, pair.exact_correction(r)?));
    }
    Ok((worst < 1e-8, format!("dipole-truncated oracle vs normal modes, max relative deviation {worst:.1e}")))
}

fn direct_three_d() -> Outcome {
    let a = drude(Dim::THREE);
    let v = direct_first_order(&a, &a, 1.0, 10.0, DirectConfig::for_dim(Dim::THREE))?;
    Ok((v.value.abs() <= 1e-8, format!("d=3 four-term first order at R=10 is {:.1e}", v.value)))
}

fn direct_vs_series() -> Outcome {
    let mut worst: f64 = 0.0;
    for d in [Dim::ONE, Dim::TWO] {
        let a = drude(d);
        let v = direct_first_order(&a, &a, 1.0, 10.0, DirectConfig::for_dim(d))?;
        let s = expand_interaction(d, 11)?;
        worst = worst.max(rel(v.value, first_order_expectation(&s, &a, &a, 1.0, 10.0)?.total()));
    }
    Ok((worst < 5e-3, format!("four-term quadrature vs series to R^-11 at R=10, max relative deviation {worst:.1e}")))
}

fn shell_theorem() -> Outcome {
    let ball = AtomModel::numeric(RadialDensity::uniform_ball(Dim::THREE, 1.0, 65)?);
    let worst = shell_theorem_check(&ball, &linspace(1.5, 20.0, 10))?.max_abs;
    Ok((worst <= 1e-8, format!("max exterior |V_A| of a uniform ball {worst:.1e} (tol 1e-8)")))
}

fn potential_routes() -> Outcome {
    let atom = drude(Dim::ONE);
    let p = field_point(20.0, 0.0);
    let q = v_a_numeric(&atom, p)?.value;
    let m = v_a_multipole(&atom, p, 5)?.value;
    let dev = rel(q, m);
    Ok((dev <= 0.01, format!("d=1 on-axis V_A at r=20: quadrature {q:.6e}, multipole {m:.6e}, deviation {dev:.1e}")))
}

fn convergence_monotone() -> Outcome {
    let rep = diag_convergence_report(&drude(Dim::ONE), 1.0, 8.0, InteractionMode::Full, &[6, 10, 14])?;
    let last = rep.last_difference().unwrap_or(f64::NAN).abs();
    let pass = rep.is_non_increasing(1e-15) && last < 1e-7;
    Ok((pass, format!("full-kernel ground energy at R=8 over cutoffs 6, 10, 14 non-increasing, last change {last:.1e}")))
}

pub fn run(args: VerifyArgs) -> Result<ExitCode> {
    let fault = args.inject_fault;
    let mut plan: Plan = vec![
        ("golden-expansion", Box::new(move || golden(fault))),
        ("series-invariants", Box::new(series_invariants)),
        ("truncation-residual", Box::new(residual_decay)),
        ("json-round-trip", Box::new(json_round_trip)),
        ("first-order-r5", Box::new(|| first_order_law(5))),
        ("first-order-r7", Box::new(|| first_order_law(7))),
        ("first-order-even-powers", Box::new(even_powers_vanish)),
        ("second-order-dipole", Box::new(second_order)),
        ("dipole-saturation", Box::new(dipole_saturation)),
        ("parity-exclusion", Box::new(parity)),
        ("exact-residual-slope", Box::new(exact_slope)),
        ("exact-attractive", Box::new(exact_negative)),
        ("shape-coefficient", Box::new(alpha_values)),
        ("three-d-multipole-zero", Box::new(three_d_multipole_zero)),
        ("dominance-crossover", Box::new(crossover)),
        ("potential-route", Box::new(third_route)),
    ];
    if args.level == Level::Full {
        plan.extend([
            ("sign-flip-d1", Box::new(sign_flip) as Box<dyn Fn() -> Outcome>),
            ("oracle-vs-normal-modes", Box::new(oracle_vs_exact)),
            ("direct-three-d-zero", Box::new(direct_three_d)),
            ("direct-vs-series", Box::new(direct_vs_series)),
            ("shell-theorem", Box::new(shell_theorem)),
            ("potential-quadrature", Box::new(potential_routes)),
            ("oracle-convergence", Box::new(convergence_monotone)),
        ]);
    }
    let checks: Vec<Check> = plan
        .into_iter()
        .map(|(name, f)| {
            let (pass, detail) = f().unwrap_or_else(|e| (false, format!("error: {e:#}")));
            Check { name, pass, detail }
        })
        .collect();
    let failed: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.name).collect();
    let mut w = sink(args.out.output.as_deref())?;
    match args.format {
        TextFormat::Json => write_json(&mut w, &checks)?,
        TextFormat::Text => {
            for c in &checks {
                writeln!(w, "{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail)?;
            }
            writeln!(w, "{} of {} checks passed", checks.len() - failed.len(), checks.len())?;
        }
    }
    w.flush()?;
    if failed.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("verification failed: {}", failed.join(", "));
        Ok(ExitCode::from(1))
    }
}
