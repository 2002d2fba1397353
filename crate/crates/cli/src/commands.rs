use std::io::Write;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use serde_json::json;

use vdw_core::fit::linspace;
use vdw_core::potential::{field_point, PotentialError};
use vdw_core::{
    expand_interaction, total_energy_curve, v_a_multipole, v_a_numeric, AtomModel, Dim, DrudePair, DrudePreset,
    InteractionSeries, Monomial, Preset, RadialDensity,
};

use crate::args::{
    AtomArgs, AtomPreset, Cli, Command, CurveArgs, DrudeArgs, EnergyPreset, ExactArgs, ExpandArgs, TextFormat,
    Format, MomentsArgs, PotentialArgs, PotentialMethodArg, RangeArgs,
};
use crate::output::{num, sink, write_csv, write_json};
use crate::verify;

/// Interpolation order used for `--density-file` tables.
const DENSITY_ORDER: usize = 3;

pub fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Expand(a) => expand(a),
        Command::Moments(a) => moments(a),
        Command::Potential(a) => potential(a),
        Command::Curve(a) => curve(a),
        Command::Exact(a) => exact(a),
        Command::Verify(a) => verify::run(a),
    }
}

fn dim(d: u8) -> Dim {
    Dim::new(d as usize).expect("clap restricts --dim to 1..=3")
}

fn grid(r: &RangeArgs) -> Result<Vec<f64>> {
    if !(r.rmin > 0.0 && r.rmin.is_finite() && r.rmax.is_finite()) {
        bail!("--rmin must be positive and both ends finite");
    }
    if r.steps == 0 {
        bail!("--steps must be at least 1");
    }
    if r.steps == 1 {
        return Ok(vec![r.rmin]);
    }
    if r.rmax <= r.rmin {
        bail!("--rmax ({}) must exceed --rmin ({})", r.rmax, r.rmin);
    }
    Ok(linspace(r.rmin, r.rmax, r.steps))
}

fn variable(d: usize, i: usize) -> &'static str {
    match (d, i) {
        (_, 0) => "x",
        (_, 1) => "y",
        _ => "z",
    }
}

fn monomial_text(d: usize, m: &Monomial) -> String {
    let mut s = m.coeff.to_string();
    for (side, exps) in [("A", &m.exp_a), ("B", &m.exp_b)] {
        for (i, &e) in exps.iter().enumerate().take(d) {
            match e {
                0 => {}
                1 => s.push_str(&format!(" {}{side}", variable(d, i))),
                _ => s.push_str(&format!(" {}{side}^{e}", variable(d, i))),
            }
        }
    }
    s
}

fn series_text(s: &InteractionSeries) -> String {
    let d = s.dim().get();
    let mut out = String::new();
    if s.max_power() < 3 {
        out.push_str("# the R^-1 and R^-2 terms cancel; the series starts at R^-3\n");
    }
    for n in s.powers() {
        let terms: Vec<String> = s.power(n).iter().map(|m| monomial_text(d, m)).collect();
        out.push_str(&format!("R^-{n}: {}\n", terms.join(" + ").replace("+ -", "- ")));
    }
    out
}

fn expand(a: ExpandArgs) -> Result<ExitCode> {
    let series = expand_interaction(dim(a.dim), a.order)?;
    let mut w = sink(a.out.output.as_deref())?;
    match a.format {
        TextFormat::Text => w.write_all(series_text(&series).as_bytes())?,
        TextFormat::Json => {
            w.write_all(series.to_json_string().as_bytes())?;
            writeln!(w)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn load_atom(a: &AtomArgs) -> Result<AtomModel> {
    let d = dim(a.dim);
    if let Some(path) = &a.density_file {
        let rho = RadialDensity::from_file(d, path, DENSITY_ORDER)
            .with_context(|| format!("loading density {}", path.display()))?;
        return Ok(AtomModel::numeric(rho));
    }
    let preset = match a.atom {
        AtomPreset::Drude => Preset::Drude,
        AtomPreset::Ring => Preset::Ring,
        AtomPreset::Hydrogen1d => Preset::Hydrogen1d,
    };
    Ok(AtomModel::preset(preset, d)?)
}

fn exponent_label(e: &[u32]) -> String {
    e.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

#[derive(Serialize)]
struct MomentRow {
    quantity: &'static str,
    exponents: Vec<u32>,
    value: f64,
}

fn moments(a: MomentsArgs) -> Result<ExitCode> {
    let atom = load_atom(&a.atom)?;
    let d = atom.dim().get();
    let mut rows = Vec::new();
    for e in vdw_core::atoms::multi_indices(d, a.max_degree) {
        rows.push(MomentRow {
            quantity: "moment",
            value: atom.moment(&e)?,
            exponents: e,
        });
    }
    rows.push(MomentRow {
        quantity: "a",
        exponents: Vec::new(),
        value: atom.characteristic_length().a(),
    });
    match atom.alpha() {
        Ok(alpha) => rows.push(MomentRow {
            quantity: "alpha",
            exponents: Vec::new(),
            value: alpha.0,
        }),
        Err(e) => eprintln!("warning: alpha unavailable: {e}"),
    }
    let w = sink(a.out.output.as_deref())?;
    match a.format {
        Format::Json => write_json(w, &rows)?,
        Format::Csv => {
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| vec![r.quantity.to_string(), exponent_label(&r.exponents), num(r.value)])
                .collect();
            write_csv(w, &["quantity", "exponents", "value"], &table)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct PotentialRow {
    r: f64,
    theta_deg: f64,
    value: Option<f64>,
    method: String,
    note: Option<String>,
}

fn potential(a: PotentialArgs) -> Result<ExitCode> {
    let atom = load_atom(&a.atom)?;
    let radii = grid(&a.range)?;
    let theta = a.theta.to_radians();
    let methods: &[PotentialMethodArg] = match a.method {
        PotentialMethodArg::All => &[
            PotentialMethodArg::Quadrature,
            PotentialMethodArg::Multipole3,
            PotentialMethodArg::Multipole5,
        ],
        PotentialMethodArg::Quadrature => &[PotentialMethodArg::Quadrature],
        PotentialMethodArg::Multipole3 => &[PotentialMethodArg::Multipole3],
        PotentialMethodArg::Multipole5 => &[PotentialMethodArg::Multipole5],
    };
    let mut rows = Vec::new();
    for &r in &radii {
        let p = field_point(r, theta);
        for &m in methods {
            let (name, res) = match m {
                PotentialMethodArg::Quadrature => ("quadrature", v_a_numeric(&atom, p)),
                PotentialMethodArg::Multipole3 => ("multipole3", v_a_multipole(&atom, p, 3)),
                _ => ("multipole5", v_a_multipole(&atom, p, 5)),
            };
            let (value, note) = match res {
                Ok(s) => (Some(s.value), None),
                // undefined points are reported per row; anything else aborts
                Err(e @ (PotentialError::OffAxisOrder5 { .. } | PotentialError::InsideSupport { .. })) => {
                    (None, Some(e.to_string()))
                }
                Err(e) => return Err(e.into()),
            };
            rows.push(PotentialRow {
                r,
                theta_deg: a.theta,
                value,
                method: name.to_string(),
                note,
            });
        }
    }
    let w = sink(a.out.output.as_deref())?;
    match a.format {
        Format::Json => write_json(w, &rows)?,
        Format::Csv => {
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        num(r.r),
                        num(r.theta_deg),
                        r.value.map(num).unwrap_or_default(),
                        r.method.clone(),
                    ]
                })
                .collect();
            write_csv(w, &["r", "theta_deg", "value", "method"], &table)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Preset plus the factors converting reduced values to SI.
struct Units {
    preset: DrudePreset,
    si: Option<(f64, f64)>,
}

impl Units {
    fn energy(&self, e: f64) -> f64 {
        self.si.map_or(e, |(a, k)| e * k / a)
    }
}

fn units(d: &DrudeArgs) -> Result<Units> {
    let positive = |name: &str, v: Option<f64>| -> Result<Option<f64>> {
        match v {
            Some(x) if !(x > 0.0 && x.is_finite()) => bail!("--{name} must be positive (got {x})"),
            other => Ok(other),
        }
    };
    let a = positive("a", d.a)?;
    let k = positive("k", d.k)?;
    let hw = positive("hbar-omega", d.hbar_omega)?;
    let si = if d.si {
        match (a, k) {
            (Some(a), Some(k)) => Some((a, k)),
            _ => bail!("--si needs both --a and --k"),
        }
    } else {
        None
    };
    let preset = match d.preset {
        EnergyPreset::Bohr => {
            if hw.is_some() {
                bail!("--hbar-omega is only used with --preset custom");
            }
            DrudePreset::Bohr
        }
        EnergyPreset::Custom => DrudePreset::Custom {
            hbar_omega: hw.context("--preset custom needs --hbar-omega")?,
            a: a.unwrap_or(1.0),
            k: k.unwrap_or(1.0),
        },
    };
    Ok(Units { preset, si })
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn curve(a: CurveArgs) -> Result<ExitCode> {
    let u = units(&a.drude)?;
    let d = dim(a.drude.dim);
    let radii = grid(&a.range)?;
    let mut rows = total_energy_curve(d, &radii, u.preset, a.components)?;
    for row in &mut rows {
        row.r5 = u.energy(row.r5);
        row.r6 = u.energy(row.r6);
        row.r7 = u.energy(row.r7);
        row.total = u.energy(row.total);
        row.exact = row.exact.map(|e| u.energy(e));
        if let Some(c) = &mut row.components {
            c.r5_expectation = u.energy(c.r5_expectation);
            c.r7_expectation = u.energy(c.r7_expectation);
            c.r6_ladder = u.energy(c.r6_ladder);
        }
    }
    let flagged = rows.iter().filter(|r| r.flagged).count();
    if flagged > 0 {
        eprintln!(
            "warning: {flagged} point(s) at or below R̃ = {:.4} have no exact value",
            u.preset.validity_bound()
        );
    }
    let w = sink(a.out.output.as_deref())?;
    match a.format {
        Format::Json => {
            let body: Vec<_> = rows
                .iter()
                .map(|r| {
                    let mut v = serde_json::to_value(r).expect("rows serialise");
                    if let Some((len, _)) = u.si {
                        v["R_m"] = json!(r.r_tilde * len);
                    }
                    v
                })
                .collect();
            write_json(w, &body)?;
        }
        Format::Csv => {
            let mut header = vec!["R_tilde", "r5", "r6", "r7", "total", "exact", "dim", "preset"];
            if u.si.is_some() {
                header.push("R_m");
            }
            if a.components {
                header.extend(["r5_expectation", "r7_expectation", "r6_ladder"]);
            }
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let mut row = vec![
                        num(r.r_tilde),
                        num(r.r5),
                        num(r.r6),
                        num(r.r7),
                        num(r.total),
                        opt(r.exact),
                        r.dim.to_string(),
                        r.preset.to_string(),
                    ];
                    if let Some((len, _)) = u.si {
                        row.push(num(r.r_tilde * len));
                    }
                    if let Some(c) = r.components {
                        row.extend([num(c.r5_expectation), num(c.r7_expectation), num(c.r6_ladder)]);
                    }
                    row
                })
                .collect();
            write_csv(w, &header, &table)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct ExactRow {
    r_tilde: f64,
    exact: Option<f64>,
    r6: f64,
    residual: Option<f64>,
    coupling: f64,
    valid: bool,
    #[serde(rename = "R_m", skip_serializing_if = "Option::is_none")]
    r_m: Option<f64>,
}

fn exact(a: ExactArgs) -> Result<ExitCode> {
    let u = units(&a.drude)?;
    let pair = DrudePair::reduced(dim(a.drude.dim), u.preset);
    let rows: Vec<ExactRow> = grid(&a.range)?
        .into_iter()
        .map(|r| {
            let modes = pair.modes(r);
            let exact = pair.exact_correction(r).ok().map(|e| u.energy(e));
            let r6 = u.energy(pair.closed_form_r6(r));
            ExactRow {
                r_tilde: r,
                exact,
                r6,
                residual: exact.map(|e| e - r6),
                coupling: modes.coupling,
                valid: modes.valid,
                r_m: u.si.map(|(len, _)| r * len),
            }
        })
        .collect();
    let w = sink(a.out.output.as_deref())?;
    match a.format {
        Format::Json => write_json(w, &rows)?,
        Format::Csv => {
            let mut header = vec!["R_tilde", "exact", "r6", "residual", "coupling", "valid"];
            if u.si.is_some() {
                header.push("R_m");
            }
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let mut row = vec![
                        num(r.r_tilde),
                        opt(r.exact),
                        num(r.r6),
                        opt(r.residual),
                        num(r.coupling),
                        r.valid.to_string(),
                    ];
                    if let Some(m) = r.r_m {
                        row.push(num(m));
                    }
                    row
                })
                .collect();
            write_csv(w, &header, &table)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}
