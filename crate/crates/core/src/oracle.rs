//! Brute-force references for the perturbative results.
//!
//! * [`oscillator_basis_diag`]: two one-dimensional Drude atoms, Hamiltonian
//!   assembled in the product Hermite basis and diagonalised densely.
//! * [`direct_first_order`]: `⟨0|H_I|0⟩` by tensor Gauss–Hermite quadrature
//!   of the four-term Coulomb kernel.
//!
//! Both evaluate the kernel directly and never touch the rational series,
//! except for the truncated interaction mode, which is defined by it.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;
use thiserror::Error;

use crate::atoms::{AtomModel, DrudeParams};
use crate::multipole::{expand_interaction, InteractionSeries, MultipoleError};
use crate::quadrature::gauss_hermite;
use crate::units::Dim;

/// Default bound on `ρ(R/2)·a`, the electron density midway between the atoms.
pub const DEFAULT_OVERLAP_GUARD: f64 = 1e-2;

/// Default bound on the relative change of the correction between the last
/// two cutoffs.
pub const DEFAULT_CONVERGENCE_TOL: f64 = 1e-6;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("oracle needs Drude atoms of dimension {expected}")]
    Unsupported { expected: &'static str },
    #[error("atoms overlap: midpoint density ρ(R/2)·a = {density:e} exceeds {guard:e}")]
    Overlap { density: f64, guard: f64 },
    #[error("no convergence: relative change {relative_change:e} between the last two refinements exceeds {tol:e}")]
    NotConverged {
        relative_change: f64,
        tol: f64,
        result: Box<OracleResult>,
    },
    #[error("direct quadrature did not converge: {coarse:e} vs {fine:e}")]
    QuadratureNotConverged { coarse: f64, fine: f64 },
    #[error("basis cutoff must be at least 2 (got {0})")]
    BadCutoff(u32),
    #[error("cutoff ladder must be strictly increasing")]
    BadLadder,
    #[error("separation must be positive")]
    BadSeparation,
    #[error(transparent)]
    Multipole(#[from] MultipoleError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum InteractionMode {
    /// Four-term Coulomb kernel.
    Full,
    /// Multipole series through `R^-max_power`.
    Truncated { max_power: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleConfig {
    pub cutoff: u32,
    /// Gauss–Hermite nodes per coordinate; `None` means `2·cutoff + 8`.
    pub nodes: Option<usize>,
    pub convergence_tol: f64,
    pub overlap_guard: f64,
}

impl OracleConfig {
    pub fn new(cutoff: u32) -> Self {
        Self {
            cutoff,
            nodes: None,
            convergence_tol: DEFAULT_CONVERGENCE_TOL,
            overlap_guard: DEFAULT_OVERLAP_GUARD,
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.unwrap_or(2 * self.cutoff as usize + 8)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult {
    /// Energy of the eigenstate continuously connected to the uncoupled
    /// ground state (largest overlap with `|0,0⟩`).
    pub ground_energy: f64,
    /// `ground_energy − 2E_atom`.
    pub correction: f64,
    pub cutoff: u32,
    pub nodes: usize,
    /// `|correction(cutoff) − correction(cutoff − 2)|`.
    pub convergence_error: f64,
    pub mode: InteractionMode,
    /// `|⟨0,0|ψ⟩|²` of the tracked state.
    pub overlap: f64,
    pub lowest_eigenvalue: f64,
    /// Eigenvalues below the tracked state.
    pub states_below: usize,
}

/// Normalised Hermite functions divided by the weight, `P_n(ξ)`, so that
/// `Σ_q w_q P_m(ξ_q) P_n(ξ_q) = δ_mn` for a large enough rule.
fn hermite_functions(nmax: usize, xi: &[f64]) -> Vec<Vec<f64>> {
    let p0 = std::f64::consts::PI.powf(-0.25);
    let mut p = vec![vec![0.0; xi.len()]; nmax + 1];
    for (q, &x) in xi.iter().enumerate() {
        p[0][q] = p0;
        if nmax >= 1 {
            p[1][q] = 2f64.sqrt() * x * p0;
        }
        for n in 2..=nmax {
            let nf = n as f64;
            p[n][q] = (2.0 / nf).sqrt() * x * p[n - 1][q] - ((nf - 1.0) / nf).sqrt() * p[n - 2][q];
        }
    }
    p
}

fn four_term(k: f64, r: f64, xa: &[f64], xb: &[f64]) -> f64 {
    let n = |v: [f64; 3]| (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let pad = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
    let ab = [r - pad(xa, 0) + pad(xb, 0), pad(xb, 1) - pad(xa, 1), pad(xb, 2) - pad(xa, 2)];
    let a = [r - pad(xa, 0), -pad(xa, 1), -pad(xa, 2)];
    let b = [r + pad(xb, 0), pad(xb, 1), pad(xb, 2)];
    k * (1.0 / r + 1.0 / n(ab) - 1.0 / n(a) - 1.0 / n(b))
}

fn drude_1d(atom: &AtomModel) -> Result<DrudeParams, OracleError> {
    match atom.drude_params() {
        Some(p) if atom.dim() == Dim::ONE => Ok(*p),
        _ => Err(OracleError::Unsupported { expected: "1" }),
    }
}

/// `ρ(R/2)·a` for a Drude atom.
pub fn midpoint_density(atom: &AtomModel, r: f64) -> f64 {
    let a = atom.characteristic_length().a();
    atom.density_at(0.5 * r).unwrap_or(0.0) * a
}

fn guard_overlap(atom: &AtomModel, r: f64, guard: f64) -> Result<(), OracleError> {
    let density = midpoint_density(atom, r);
    if density > guard {
        return Err(OracleError::Overlap { density, guard });
    }
    Ok(())
}

/// Kernel on the node grid, `V[q][r]` with `x_A = x_q`, `x_B = x_r`.
fn kernel_grid(
    mode: InteractionMode,
    series: Option<&InteractionSeries>,
    k: f64,
    r: f64,
    x: &[f64],
) -> Vec<Vec<f64>> {
    x.iter()
        .map(|&xa| {
            x.iter()
                .map(|&xb| match mode {
                    InteractionMode::Full => four_term(k, r, &[xa], &[xb]),
                    InteractionMode::Truncated { .. } => {
                        let s = series.expect("truncated mode carries a series");
                        k * s
                            .monomials()
                            .map(|(n, m)| m.eval(&[xa], &[xb]) / r.powi(n as i32))
                            .sum::<f64>()
                    }
                })
                .collect()
        })
        .collect()
}

struct Diagonalised {
    tracked: f64,
    overlap: f64,
    lowest: f64,
    below: usize,
}

fn diagonalise(hbar_omega: f64, p: &[Vec<f64>], w: &[f64], v: &[Vec<f64>], cutoff: usize) -> Diagonalised {
    let n = cutoff + 1;
    let nq = w.len();
    // contract over x_B first: b[q][j·n + l] = Σ_r V(q, r) w_r P_j(r) P_l(r)
    let mut b = vec![vec![0.0; n * n]; nq];
    for (q, row) in b.iter_mut().enumerate() {
        for j in 0..n {
            for l in j..n {
                let s: f64 = (0..nq).map(|r| v[q][r] * w[r] * p[j][r] * p[l][r]).sum();
                row[j * n + l] = s;
                row[l * n + j] = s;
            }
        }
    }
    let dim = n * n;
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for i in 0..n {
        for kk in i..n {
            let wa: Vec<f64> = (0..nq).map(|q| w[q] * p[i][q] * p[kk][q]).collect();
            for j in 0..n {
                for l in 0..n {
                    let s: f64 = (0..nq).map(|q| wa[q] * b[q][j * n + l]).sum();
                    h[(i * n + j, kk * n + l)] = s;
                    h[(kk * n + l, i * n + j)] = s;
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            h[(i * n + j, i * n + j)] += hbar_omega * (i + j + 1) as f64;
        }
    }
    let eig = SymmetricEigen::new(h);
    let (best, overlap) = (0..dim)
        .map(|c| (c, eig.eigenvectors[(0, c)].powi(2)))
        .max_by(|x, y| x.1.total_cmp(&y.1))
        .expect("non-empty basis");
    let tracked = eig.eigenvalues[best];
    let lowest = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let below = eig.eigenvalues.iter().filter(|&&e| e < tracked).count();
    Diagonalised {
        tracked,
        overlap,
        lowest,
        below,
    }
}

/// Ground-state energy of two identical one-dimensional Drude atoms at
/// separation `r`, coupled by the full or truncated interaction.
///
/// The correction is also computed at `cutoff − 2` with the same quadrature
/// nodes; their difference is the reported convergence error.
pub fn oscillator_basis_diag(
    atom: &AtomModel,
    k: f64,
    r: f64,
    mode: InteractionMode,
    config: OracleConfig,
) -> Result<OracleResult, OracleError> {
    if config.cutoff < 2 {
        return Err(OracleError::BadCutoff(config.cutoff));
    }
    let ladder = [config.cutoff - 2, config.cutoff];
    let nodes = config.node_count();
    let rows = diag_ladder(atom, k, r, mode, &ladder, nodes, config.overlap_guard)?;
    let (prev, last) = (&rows[0], &rows[1]);
    let change = (last.correction - prev.correction).abs();
    let result = OracleResult {
        convergence_error: change,
        ..last.clone()
    };
    let relative_change = if change == 0.0 { 0.0 } else { change / last.correction.abs() };
    if relative_change > config.convergence_tol {
        return Err(OracleError::NotConverged {
            relative_change,
            tol: config.convergence_tol,
            result: Box::new(result),
        });
    }
    Ok(result)
}

fn diag_ladder(
    atom: &AtomModel,
    k: f64,
    r: f64,
    mode: InteractionMode,
    ladder: &[u32],
    nodes: usize,
    overlap_guard: f64,
) -> Result<Vec<OracleResult>, OracleError> {
    let params = drude_1d(atom)?;
    if r <= 0.0 {
        return Err(OracleError::BadSeparation);
    }
    guard_overlap(atom, r, overlap_guard)?;
    let series = match mode {
        InteractionMode::Full => None,
        InteractionMode::Truncated { max_power } => Some(expand_interaction(Dim::ONE, max_power)?),
    };
    let rule = gauss_hermite(nodes);
    let a = params.a_squared().sqrt();
    let x: Vec<f64> = rule.nodes.iter().map(|xi| 2f64.sqrt() * a * xi).collect();
    let top = *ladder.iter().max().unwrap_or(&0) as usize;
    let p = hermite_functions(top, &rule.nodes);
    let v = kernel_grid(mode, series.as_ref(), k, r, &x);
    let hw = params.hbar_omega();
    Ok(ladder
        .iter()
        .map(|&c| {
            let d = diagonalise(hw, &p, &rule.weights, &v, c as usize);
            OracleResult {
                ground_energy: d.tracked,
                correction: d.tracked - hw,
                cutoff: c,
                nodes,
                convergence_error: f64::NAN,
                mode,
                overlap: d.overlap,
                lowest_eigenvalue: d.lowest,
                states_below: d.below,
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub cutoff: u32,
    pub value: f64,
    /// Change from the previous row.
    pub difference: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    /// True when no value increases along the ladder (up to `slack`).
    pub fn is_non_increasing(&self, slack: f64) -> bool {
        self.rows.windows(2).all(|w| w[1].value <= w[0].value + slack)
    }

    pub fn last_difference(&self) -> Option<f64> {
        self.rows.last().and_then(|r| r.difference)
    }
}

/// Tabulates `f(cutoff)` along a strictly increasing ladder.
pub fn convergence_report<F>(ladder: &[u32], mut f: F) -> Result<ConvergenceReport, OracleError>
where
    F: FnMut(u32) -> Result<f64, OracleError>,
{
    if ladder.is_empty() || ladder.windows(2).any(|w| w[1] <= w[0]) {
        return Err(OracleError::BadLadder);
    }
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(ladder.len());
    for &c in ladder {
        let value = f(c)?;
        let difference = rows.last().map(|prev| value - prev.value);
        rows.push(ConvergenceRow {
            cutoff: c,
            value,
            difference,
        });
    }
    Ok(ConvergenceReport { rows })
}

/// Ground energies of [`oscillator_basis_diag`] along a cutoff ladder, with one
/// quadrature rule (`2·max + 8` nodes) shared by every rung.
pub fn diag_convergence_report(
    atom: &AtomModel,
    k: f64,
    r: f64,
    mode: InteractionMode,
    ladder: &[u32],
) -> Result<ConvergenceReport, OracleError> {
    if ladder.is_empty() || ladder.windows(2).any(|w| w[1] <= w[0]) {
        return Err(OracleError::BadLadder);
    }
    let nodes = 2 * *ladder.last().expect("non-empty") as usize + 8;
    let rows = diag_ladder(atom, k, r, mode, ladder, nodes, DEFAULT_OVERLAP_GUARD)?;
    let mut it = rows.into_iter();
    convergence_report(ladder, |_| Ok(it.next().expect("one row per rung").ground_energy))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DirectConfig {
    /// Gauss–Hermite nodes per coordinate.
    pub nodes: usize,
    /// Coarser rule used for the convergence estimate.
    pub check_nodes: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub overlap_guard: f64,
}

impl DirectConfig {
    pub fn for_dim(dim: Dim) -> Self {
        let (nodes, check_nodes) = match dim.get() {
            1 => (96, 80),
            2 => (48, 40),
            _ => (12, 10),
        };
        Self {
            nodes,
            check_nodes,
            rel_tol: 1e-6,
            abs_tol: 1e-12,
            overlap_guard: DEFAULT_OVERLAP_GUARD,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DirectResult {
    pub value: f64,
    /// `|value(nodes) − value(check_nodes)|`.
    pub error_estimate: f64,
}

fn tensor_expectation(a: &[f64], b: &[f64], d: usize, nodes: usize, k: f64, r: f64) -> f64 {
    let rule = gauss_hermite(nodes);
    let n = rule.len();
    let total = 2 * d;
    let scales: Vec<f64> = (0..total).map(|i| (2.0f64).sqrt() * if i < d { a[i] } else { b[i - d] }).collect();
    let norm = std::f64::consts::PI.powf(-(total as f64) / 2.0);
    let mut idx = vec![0usize; total];
    let mut xa = vec![0.0; d];
    let mut xb = vec![0.0; d];
    let mut sum = 0.0;
    loop {
        let mut w = norm;
        for (i, &j) in idx.iter().enumerate() {
            let x = scales[i] * rule.nodes[j];
            if i < d {
                xa[i] = x;
            } else {
                xb[i - d] = x;
            }
            w *= rule.weights[j];
        }
        sum += w * four_term(k, r, &xa, &xb);
        let mut i = 0;
        loop {
            if i == total {
                return sum;
            }
            idx[i] += 1;
            if idx[i] < n {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// `⟨0|H_I|0⟩` with the four-term kernel, by tensor Gauss–Hermite quadrature
/// over both Drude clouds.
pub fn direct_first_order(
    atom_a: &AtomModel,
    atom_b: &AtomModel,
    k: f64,
    r: f64,
    config: DirectConfig,
) -> Result<DirectResult, OracleError> {
    let (Some(pa), Some(pb)) = (atom_a.drude_params(), atom_b.drude_params()) else {
        return Err(OracleError::Unsupported { expected: "1, 2 or 3" });
    };
    if atom_a.dim() != atom_b.dim() {
        return Err(OracleError::Unsupported { expected: "matching" });
    }
    if r <= 0.0 {
        return Err(OracleError::BadSeparation);
    }
    guard_overlap(atom_a, r, config.overlap_guard)?;
    guard_overlap(atom_b, r, config.overlap_guard)?;
    let d = atom_a.dim().get();
    let la = vec![pa.a_squared().sqrt(); d];
    let lb = vec![pb.a_squared().sqrt(); d];
    let fine = tensor_expectation(&la, &lb, d, config.nodes, k, r);
    let coarse = tensor_expectation(&la, &lb, d, config.check_nodes, k, r);
    let error_estimate = (fine - coarse).abs();
    if error_estimate > config.abs_tol.max(config.rel_tol * fine.abs()) {
        return Err(OracleError::QuadratureNotConverged { coarse, fine });
    }
    Ok(DirectResult {
        value: fine,
        error_estimate,
    })
}
