//! Ground-state models of a single rotationally symmetric atom.
//!
//! Perturbation theory only ever sees an atom through its coordinate moments
//! `⟨Π x_i^e_i⟩`; the wavefunction itself stays inside this module (the
//! electrostatic potential and the oracles read the density).
//!
//! Three kinds of ground state are provided:
//!
//! * `Drude`: an isotropic harmonic oscillator, Gaussian density with
//!   `⟨x_i²⟩ = a² = ħ/(2mω)`; moments in closed form.
//! * `NumericRadial`: a tabulated radial density, piecewise linear between
//!   samples and zero outside the table, normalised under the d-dimensional
//!   radial measure. Moments factor into a radial integral (Gauss–Legendre
//!   per panel) times a closed-form angular average.
//! * `Degenerate1DHydrogen`: the singular one-dimensional Coulomb ground state,
//!   represented only by its limit of a density concentrated at the nucleus
//!   (`a² = 0`).

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma_ur;
use thiserror::Error;

use crate::quadrature::{gauss_legendre, Rule};
use crate::units::Dim;

/// Highest total moment degree `moment` accepts.
pub const MOMENT_DEGREE_CAP: u32 = 16;

/// Allowed deviation of a tabulated density's norm from 1.
pub const NORMALIZATION_TOL: f64 = 1e-8;

/// Default tail probability defining an effective support radius.
pub const SUPPORT_TAIL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum AtomError {
    #[error("moment degree {requested} exceeds the cap {cap}")]
    CapExceeded { requested: u32, cap: u32 },
    #[error("density is not normalisable: {0}")]
    NonNormalizable(String),
    #[error("density norm {norm} differs from 1 by more than {NORMALIZATION_TOL:e}")]
    NotNormalized { norm: f64 },
    #[error("invalid density table: {0}")]
    InvalidDensity(String),
    #[error("atom has a² = 0; the shape coefficient is undefined")]
    Degenerate,
    #[error("operation requires a {expected} atom")]
    KindMismatch { expected: &'static str },
    #[error("exponent vector has {got} entries for a {dim}-dimensional atom")]
    DimensionMismatch { dim: Dim, got: usize },
    #[error("the {preset} preset needs dimension {needed} (got {got})")]
    PresetDimension {
        preset: &'static str,
        needed: &'static str,
        got: Dim,
    },
    #[error("cannot read density file: {0}")]
    Io(String),
}

/// Parameters of a harmonically bound electron.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DrudeParams {
    pub hbar: f64,
    pub mass: f64,
    pub omega: f64,
}

impl DrudeParams {
    /// Reduced units with the Bohr-radius matching `a = ħ²/(m k)`: with
    /// `k = a = 1` this fixes `ħω = k/(2a) = 1/2`.
    pub fn bohr_matched() -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0,
            omega: 0.5,
        }
    }

    /// Parameters with the given `ħω` and characteristic length `a` (ħ = 1).
    pub fn from_hbar_omega(hbar_omega: f64, a: f64) -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0 / (2.0 * hbar_omega * a * a),
            omega: hbar_omega,
        }
    }

    pub fn a_squared(&self) -> f64 {
        self.hbar / (2.0 * self.mass * self.omega)
    }

    pub fn hbar_omega(&self) -> f64 {
        self.hbar * self.omega
    }
}

/// Tabulated radial density `ρ(r)`, per unit d-volume.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialDensity {
    dim: Dim,
    radii: Vec<f64>,
    values: Vec<f64>,
    rule: Rule,
}

fn shell_area(dim: Dim) -> f64 {
    match dim.get() {
        1 => 2.0,
        2 => 2.0 * PI,
        _ => 4.0 * PI,
    }
}

impl RadialDensity {
    /// Validates a table that must already be normalised.
    pub fn new(dim: Dim, radii: Vec<f64>, values: Vec<f64>, order: usize) -> Result<Self, AtomError> {
        let d = Self::unchecked(dim, radii, values, order)?;
        let norm = d.radial_integral(0);
        if !norm.is_finite() || norm <= 0.0 {
            return Err(AtomError::NonNormalizable(format!("total mass {norm}")));
        }
        if (norm - 1.0).abs() > NORMALIZATION_TOL {
            return Err(AtomError::NotNormalized { norm });
        }
        Ok(d)
    }

    /// Rescales the table to unit norm.
    pub fn normalized(dim: Dim, radii: Vec<f64>, mut values: Vec<f64>, order: usize) -> Result<Self, AtomError> {
        let norm = Self::unchecked(dim, radii.clone(), values.clone(), order)?.radial_integral(0);
        if !norm.is_finite() || norm <= 0.0 {
            return Err(AtomError::NonNormalizable(format!("total mass {norm}")));
        }
        values.iter_mut().for_each(|v| *v /= norm);
        Self::new(dim, radii, values, order)
    }

    fn unchecked(dim: Dim, radii: Vec<f64>, values: Vec<f64>, order: usize) -> Result<Self, AtomError> {
        if radii.len() != values.len() {
            return Err(AtomError::InvalidDensity("radius and value columns differ in length".into()));
        }
        if radii.len() < 2 {
            return Err(AtomError::InvalidDensity("need at least two samples".into()));
        }
        if radii[0] < 0.0 || radii.iter().any(|r| !r.is_finite()) {
            return Err(AtomError::InvalidDensity("radii must be finite and non-negative".into()));
        }
        if radii.windows(2).any(|w| w[1] <= w[0]) {
            return Err(AtomError::InvalidDensity("radii must be strictly increasing".into()));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(AtomError::InvalidDensity("density must be finite and non-negative".into()));
        }
        if order == 0 {
            return Err(AtomError::InvalidDensity("quadrature order must be positive".into()));
        }
        Ok(Self {
            dim,
            radii,
            values,
            rule: gauss_legendre(order),
        })
    }

    /// Samples `f` on `n` evenly spaced radii in `[r_lo, r_hi]` and normalises.
    pub fn from_fn<F: Fn(f64) -> f64>(
        dim: Dim,
        r_lo: f64,
        r_hi: f64,
        n: usize,
        order: usize,
        f: F,
    ) -> Result<Self, AtomError> {
        let n = n.max(2);
        let h = (r_hi - r_lo) / (n - 1) as f64;
        let radii: Vec<f64> = (0..n).map(|i| if i == n - 1 { r_hi } else { r_lo + h * i as f64 }).collect();
        let values = radii.iter().map(|&r| f(r)).collect();
        Self::normalized(dim, radii, values, order)
    }

    /// Gaussian `exp(−r²/2σ²)` truncated at `cutoff · σ`.
    pub fn gaussian(dim: Dim, sigma: f64, cutoff: f64, n: usize) -> Result<Self, AtomError> {
        Self::from_fn(dim, 0.0, cutoff * sigma, n, 8, |r| (-0.5 * (r / sigma).powi(2)).exp())
    }

    /// Constant density inside `radius`.
    pub fn uniform_ball(dim: Dim, radius: f64, n: usize) -> Result<Self, AtomError> {
        Self::from_fn(dim, 0.0, radius, n, 8, |_| 1.0)
    }

    /// Planar annulus `|r − r0| ≤ half_width`, uniform in area.
    pub fn ring(r0: f64, half_width: f64, n: usize) -> Result<Self, AtomError> {
        Self::from_fn(Dim::TWO, r0 - half_width, r0 + half_width, n, 8, |_| 1.0)
    }

    /// Parses two whitespace- or comma-separated columns `r ρ(r)`; lines that
    /// are blank or start with `#` are skipped. The table is normalised.
    pub fn from_text(dim: Dim, text: &str, order: usize) -> Result<Self, AtomError> {
        let mut radii = Vec::new();
        let mut values = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .collect();
            if cols.len() != 2 {
                return Err(AtomError::InvalidDensity(format!(
                    "line {}: expected two columns",
                    lineno + 1
                )));
            }
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| AtomError::InvalidDensity(format!("line {}: {e}", lineno + 1)))
            };
            radii.push(parse(cols[0])?);
            values.push(parse(cols[1])?);
        }
        Self::normalized(dim, radii, values, order)
    }

    pub fn from_file(dim: Dim, path: &Path, order: usize) -> Result<Self, AtomError> {
        let text = std::fs::read_to_string(path).map_err(|e| AtomError::Io(e.to_string()))?;
        Self::from_text(dim, &text, order)
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn order(&self) -> usize {
        self.rule.len()
    }

    /// Outer edge of the table; the density vanishes beyond it.
    pub fn outer_radius(&self) -> f64 {
        *self.radii.last().expect("at least two samples")
    }

    /// Interpolated density at radius `r`.
    pub fn value(&self, r: f64) -> f64 {
        let (first, last) = (self.radii[0], self.outer_radius());
        if r < first || r > last {
            return 0.0;
        }
        let i = self.radii.partition_point(|&x| x <= r).saturating_sub(1).min(self.radii.len() - 2);
        let (r0, r1) = (self.radii[i], self.radii[i + 1]);
        let t = (r - r0) / (r1 - r0);
        self.values[i] * (1.0 - t) + self.values[i + 1] * t
    }

    fn panel_integral(&self, i: usize, p: i32) -> f64 {
        let (r0, r1) = (self.radii[i], self.radii[i + 1]);
        let (v0, v1) = (self.values[i], self.values[i + 1]);
        let c = 0.5 * (r0 + r1);
        let h = 0.5 * (r1 - r0);
        let power = self.dim.get() as i32 - 1 + p;
        self.rule
            .iter()
            .map(|(x, w)| {
                let r = c + h * x;
                let t = (r - r0) / (r1 - r0);
                w * (v0 * (1.0 - t) + v1 * t) * r.powi(power)
            })
            .sum::<f64>()
            * h
    }

    /// `⟨|r|^p⟩ = S_d ∫ ρ(r) r^(d−1+p) dr`.
    pub fn radial_integral(&self, p: u32) -> f64 {
        let s: f64 = (0..self.radii.len() - 1).map(|i| self.panel_integral(i, p as i32)).sum();
        shell_area(self.dim) * s
    }

    /// Smallest tabulated radius enclosing probability `≥ 1 − tail`.
    pub fn effective_support(&self, tail: f64) -> f64 {
        let total = self.radial_integral(0);
        let mut enclosed = 0.0;
        for i in 0..self.radii.len() - 1 {
            enclosed += shell_area(self.dim) * self.panel_integral(i, 0);
            if enclosed >= total * (1.0 - tail) {
                return self.radii[i + 1];
            }
        }
        self.outer_radius()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AtomKind {
    Drude(DrudeParams),
    NumericRadial(RadialDensity),
    Degenerate1DHydrogen,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AtomModel {
    dim: Dim,
    kind: AtomKind,
}

/// `a² = ⟨|r|²⟩ / d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CharacteristicLength {
    pub a_squared: f64,
}

impl CharacteristicLength {
    pub fn a(&self) -> f64 {
        self.a_squared.sqrt()
    }
}

/// `α = ⟨x⁴⟩ / a⁴`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShapeCoefficient(pub f64);

/// One level of the uncoupled oscillator: quanta per axis and its energy.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumLevel {
    pub quanta: Vec<u32>,
    pub energy: f64,
}

/// Named presets for the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Drude,
    Ring,
    Hydrogen1d,
}

impl std::str::FromStr for Preset {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "drude" => Ok(Preset::Drude),
            "ring" => Ok(Preset::Ring),
            "hydrogen1d" => Ok(Preset::Hydrogen1d),
            other => Err(format!("unknown atom preset `{other}` (drude, ring, hydrogen1d)")),
        }
    }
}

/// Half-width of the `ring` preset annulus.
pub const RING_HALF_WIDTH: f64 = 1e-3;

fn double_factorial_odd(n: u32) -> f64 {
    // (n − 1)!! for even n
    (1..n).step_by(2).map(|k| k as f64).product()
}

/// Average of `Π n_i^e_i` over the unit sphere in d dimensions.
pub fn angular_average(dim: Dim, exps: &[u32]) -> f64 {
    if exps.iter().any(|e| e % 2 == 1) {
        return 0.0;
    }
    let total: u32 = exps.iter().sum();
    let num: f64 = exps.iter().map(|&e| double_factorial_odd(e)).product();
    let den: f64 = (0..total / 2).map(|j| (dim.get() + 2 * j as usize) as f64).product();
    num / den
}

impl AtomModel {
    pub fn drude(dim: Dim, params: DrudeParams) -> Self {
        Self {
            dim,
            kind: AtomKind::Drude(params),
        }
    }

    pub fn numeric(density: RadialDensity) -> Self {
        Self {
            dim: density.dim(),
            kind: AtomKind::NumericRadial(density),
        }
    }

    pub fn hydrogen_1d() -> Self {
        Self {
            dim: Dim::ONE,
            kind: AtomKind::Degenerate1DHydrogen,
        }
    }

    /// Bohr-matched Drude atom in reduced units (`a = 1`, `ħω = 1/2`).
    pub fn drude_reduced(dim: Dim) -> Self {
        Self::drude(dim, DrudeParams::bohr_matched())
    }

    /// Thin ring of radius √2 (so `a ≈ 1`).
    pub fn ring() -> Result<Self, AtomError> {
        Ok(Self::numeric(RadialDensity::ring(2f64.sqrt(), RING_HALF_WIDTH, 65)?))
    }

    pub fn preset(preset: Preset, dim: Dim) -> Result<Self, AtomError> {
        match preset {
            Preset::Drude => Ok(Self::drude_reduced(dim)),
            Preset::Ring if dim == Dim::TWO => Self::ring(),
            Preset::Ring => Err(AtomError::PresetDimension {
                preset: "ring",
                needed: "2",
                got: dim,
            }),
            Preset::Hydrogen1d if dim == Dim::ONE => Ok(Self::hydrogen_1d()),
            Preset::Hydrogen1d => Err(AtomError::PresetDimension {
                preset: "hydrogen1d",
                needed: "1",
                got: dim,
            }),
        }
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn kind(&self) -> &AtomKind {
        &self.kind
    }

    pub fn drude_params(&self) -> Option<&DrudeParams> {
        match &self.kind {
            AtomKind::Drude(p) => Some(p),
            _ => None,
        }
    }

    /// `⟨Π x_i^e_i⟩` in the ground state (units of length^Σe).
    pub fn moment(&self, exps: &[u32]) -> Result<f64, AtomError> {
        if exps.len() != self.dim.get() {
            return Err(AtomError::DimensionMismatch {
                dim: self.dim,
                got: exps.len(),
            });
        }
        let total: u32 = exps.iter().sum();
        if total > MOMENT_DEGREE_CAP {
            return Err(AtomError::CapExceeded {
                requested: total,
                cap: MOMENT_DEGREE_CAP,
            });
        }
        if exps.iter().any(|e| e % 2 == 1) {
            return Ok(0.0);
        }
        Ok(match &self.kind {
            AtomKind::Drude(p) => {
                let a2 = p.a_squared();
                exps.iter()
                    .map(|&e| double_factorial_odd(e) * a2.powi(e as i32 / 2))
                    .product()
            }
            AtomKind::NumericRadial(rho) => rho.radial_integral(total) * angular_average(self.dim, exps),
            AtomKind::Degenerate1DHydrogen => {
                if total == 0 {
                    1.0
                } else {
                    0.0
                }
            }
        })
    }

    /// Moment for exponents given as `u8` (the series' exponent type).
    pub fn moment_u8(&self, exps: &[u8]) -> Result<f64, AtomError> {
        let e: Vec<u32> = exps.iter().map(|&x| x as u32).collect();
        self.moment(&e)
    }

    pub fn characteristic_length(&self) -> CharacteristicLength {
        let a_squared = match &self.kind {
            AtomKind::Drude(p) => p.a_squared(),
            AtomKind::NumericRadial(rho) => rho.radial_integral(2) / self.dim.as_f64(),
            AtomKind::Degenerate1DHydrogen => 0.0,
        };
        CharacteristicLength { a_squared }
    }

    pub fn alpha(&self) -> Result<ShapeCoefficient, AtomError> {
        let a2 = self.characteristic_length().a_squared;
        if a2 <= 0.0 {
            return Err(AtomError::Degenerate);
        }
        let mut e = vec![0; self.dim.get()];
        e[0] = 4;
        Ok(ShapeCoefficient(self.moment(&e)? / (a2 * a2)))
    }

    /// Uncoupled levels with at most `cutoff` quanta in total.
    pub fn drude_spectrum(&self, cutoff: u32) -> Result<Vec<SpectrumLevel>, AtomError> {
        let AtomKind::Drude(p) = &self.kind else {
            return Err(AtomError::KindMismatch { expected: "Drude" });
        };
        let d = self.dim.get();
        let hw = p.hbar_omega();
        Ok(multi_indices(d, cutoff)
            .into_iter()
            .map(|q| {
                let n: u32 = q.iter().sum();
                SpectrumLevel {
                    energy: hw * (n as f64 + 0.5 * d as f64),
                    quanta: q,
                }
            })
            .collect())
    }

    /// Ground-state density per unit d-volume at distance `r` from the nucleus.
    /// `None` for the degenerate model, whose density is a point mass.
    pub fn density_at(&self, r: f64) -> Option<f64> {
        match &self.kind {
            AtomKind::Drude(p) => {
                let a2 = p.a_squared();
                Some((2.0 * PI * a2).powf(-0.5 * self.dim.as_f64()) * (-0.5 * r * r / a2).exp())
            }
            AtomKind::NumericRadial(rho) => Some(rho.value(r)),
            AtomKind::Degenerate1DHydrogen => None,
        }
    }

    /// Radius enclosing probability `≥ 1 − tail`.
    pub fn support_radius(&self, tail: f64) -> f64 {
        match &self.kind {
            AtomKind::Drude(p) => {
                let a = p.a_squared().sqrt();
                let half_d = 0.5 * self.dim.as_f64();
                // P(|r| > R) = Q(d/2, R²/2a²); bisect on R
                let tail_at = |r: f64| gamma_ur(half_d, 0.5 * (r / a).powi(2));
                let (mut lo, mut hi) = (0.0, a);
                while tail_at(hi) > tail {
                    hi *= 2.0;
                }
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if tail_at(mid) > tail {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                hi
            }
            AtomKind::NumericRadial(rho) => rho.effective_support(tail),
            AtomKind::Degenerate1DHydrogen => 0.0,
        }
    }
}

/// All `d`-component multi-indices with component sum `≤ cutoff`, ordered by
/// total then lexicographically.
pub fn multi_indices(d: usize, cutoff: u32) -> Vec<Vec<u32>> {
    fn rec(d: usize, remaining: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == d {
            out.push(prefix.clone());
            return;
        }
        for k in 0..=remaining {
            prefix.push(k);
            rec(d, remaining - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, cutoff, &mut Vec::with_capacity(d), &mut out);
    out.sort_by(|x, y| {
        let sx: u32 = x.iter().sum();
        let sy: u32 = y.iter().sum();
        sx.cmp(&sy).then_with(|| y.cmp(x))
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn drude_moments() {
        let p = DrudeParams {
            hbar: 1.0,
            mass: 2.0,
            omega: 0.7,
        };
        let a2 = 1.0 / (2.0 * 2.0 * 0.7);
        let atom = AtomModel::drude(Dim::ONE, p);
        assert!(rel(atom.moment(&[2]).unwrap(), a2) < 1e-15);
        assert!(rel(atom.moment(&[4]).unwrap(), 3.0 * a2 * a2) < 1e-15);
        assert_eq!(atom.moment(&[3]).unwrap(), 0.0);
        assert!(rel(atom.alpha().unwrap().0, 3.0) < 1e-14);
        assert!(rel(atom.characteristic_length().a(), a2.sqrt()) < 1e-15);

        let atom2 = AtomModel::drude_reduced(Dim::TWO);
        assert_eq!(atom2.moment(&[2, 2]).unwrap(), 1.0);
        assert_eq!(atom2.moment(&[1, 1]).unwrap(), 0.0);
    }

    #[test]
    fn degenerate_hydrogen() {
        let h = AtomModel::hydrogen_1d();
        assert_eq!(h.characteristic_length().a_squared, 0.0);
        assert_eq!(h.moment(&[0]).unwrap(), 1.0);
        assert_eq!(h.moment(&[2]).unwrap(), 0.0);
        assert_eq!(h.alpha(), Err(AtomError::Degenerate));
        assert!(h.drude_spectrum(2).is_err());
    }

    #[test]
    fn moment_cap_and_shape_errors() {
        let atom = AtomModel::drude_reduced(Dim::THREE);
        assert!(matches!(atom.moment(&[10, 8, 0]), Err(AtomError::CapExceeded { .. })));
        assert!(matches!(atom.moment(&[2, 0]), Err(AtomError::DimensionMismatch { .. })));
    }

    #[test]
    fn numeric_gaussian_3d_width() {
        let sigma = 0.8;
        let rho = RadialDensity::gaussian(Dim::THREE, sigma, 12.0, 20001).unwrap();
        let atom = AtomModel::numeric(rho);
        assert!((atom.characteristic_length().a() - sigma).abs() < 1e-6 * sigma);
    }

    #[test]
    fn ring_shape_coefficient() {
        // exact for an infinitely thin ring: ⟨x⁴⟩ = 3r0⁴/8, a⁴ = r0⁴/4
        let r0 = 1.7;
        let atom = AtomModel::numeric(RadialDensity::ring(r0, 1e-4, 33).unwrap());
        assert!((atom.moment(&[4, 0]).unwrap() - 3.0 / 8.0 * r0.powi(4)).abs() < 1e-6);
        assert!((atom.alpha().unwrap().0 - 1.5).abs() < 1e-7);
    }

    #[test]
    fn normalization_enforced() {
        let r = vec![0.0, 1.0];
        assert!(matches!(
            RadialDensity::new(Dim::ONE, r.clone(), vec![1.0, 1.0], 4),
            Err(AtomError::NotNormalized { .. })
        ));
        assert!(matches!(
            RadialDensity::normalized(Dim::ONE, r.clone(), vec![0.0, 0.0], 4),
            Err(AtomError::NonNormalizable(_))
        ));
        assert!(RadialDensity::new(Dim::ONE, r.clone(), vec![0.5, 0.5], 4).is_ok());
        assert!(matches!(
            RadialDensity::new(Dim::ONE, r, vec![-0.5, 1.5], 4),
            Err(AtomError::InvalidDensity(_))
        ));
    }

    #[test]
    fn text_loader() {
        let text = "# r rho\n0.0, 2.0\n0.5 2.0\n\n1.0\t2.0\n";
        let rho = RadialDensity::from_text(Dim::ONE, text, 4).unwrap();
        assert!((rho.radial_integral(0) - 1.0).abs() < 1e-14);
        assert!(RadialDensity::from_text(Dim::ONE, "0.0 1.0 3.0\n", 4).is_err());
    }

    #[test]
    fn spectra() {
        let e: Vec<f64> = AtomModel::drude_reduced(Dim::ONE)
            .drude_spectrum(2)
            .unwrap()
            .iter()
            .map(|l| l.energy)
            .collect();
        assert_eq!(e, vec![0.25, 0.75, 1.25]);
        assert_eq!(AtomModel::drude_reduced(Dim::TWO).drude_spectrum(1).unwrap().len(), 3);
        let s3 = AtomModel::drude_reduced(Dim::THREE).drude_spectrum(1).unwrap();
        assert_eq!(s3.len(), 4);
        assert_eq!(s3[0].quanta, vec![0, 0, 0]);
    }

    #[test]
    fn support_radius_tail() {
        let atom = AtomModel::drude_reduced(Dim::ONE);
        let r = atom.support_radius(1e-12);
        // two-sided Gaussian tail erfc(r/√2) = 1e-12 at r ≈ 7.13
        assert!((r - 7.1305).abs() < 1e-3, "{r}");
    }

    #[test]
    fn presets() {
        assert!(AtomModel::preset(Preset::Ring, Dim::ONE).is_err());
        assert!(AtomModel::preset(Preset::Hydrogen1d, Dim::TWO).is_err());
        let ring = AtomModel::preset(Preset::Ring, Dim::TWO).unwrap();
        assert!((ring.characteristic_length().a() - 1.0).abs() < 1e-6);
        assert_eq!("hydrogen1d".parse::<Preset>().unwrap(), Preset::Hydrogen1d);
    }
}
