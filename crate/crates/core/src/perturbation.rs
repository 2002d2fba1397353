//! First- and second-order ground-state energy corrections.
//!
//! Each quantity has two independent routes: the expectation or ladder-operator
//! sum over the exact rational series, and a closed form. A third first-order
//! route averages the atom's multipole potential over the partner's cloud.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::atoms::{AtomError, AtomKind, AtomModel};
use crate::drude_exact::DrudePair;
use crate::multipole::{expand_interaction, InteractionSeries, Monomial, MultipoleError};
use crate::potential::{v_a_multipole, PotentialError};
use crate::poly::rational_to_f64;
use crate::quadrature::{gauss_hermite, gauss_legendre};
use crate::units::Dim;

/// Default per-atom quantum-number cutoff for diagnostic second-order sums.
pub const DEFAULT_BASIS_CUTOFF: u32 = 8;

#[derive(Debug, Error, PartialEq)]
pub enum PerturbationError {
    #[error("series reaches only R^-{got}; at least R^-{needed} is required")]
    SeriesTooShort { got: u32, needed: u32 },
    #[error("atoms and series disagree on the dimension")]
    DimensionMismatch,
    #[error("second-order sums need Drude atoms")]
    NotDrude,
    #[error("basis cutoff must be at least 1")]
    BadCutoff,
    #[error("separation must be positive")]
    BadSeparation,
    #[error(transparent)]
    Atom(#[from] AtomError),
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error(transparent)]
    Multipole(#[from] MultipoleError),
}

/// First-order energy split by inverse power of R.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FirstOrderTerms {
    pub r: f64,
    pub k: f64,
    /// Contribution of each power, as an energy at separation `r`.
    pub by_power: BTreeMap<u32, f64>,
}

impl FirstOrderTerms {
    pub fn term(&self, n: u32) -> f64 {
        self.by_power.get(&n).copied().unwrap_or(0.0)
    }

    /// `c_n` with `term(n) = k c_n / Rⁿ`.
    pub fn coefficient(&self, n: u32) -> f64 {
        self.term(n) * self.r.powi(n as i32) / self.k
    }

    pub fn total(&self) -> f64 {
        self.by_power.values().sum()
    }
}

fn check_pair(series: &InteractionSeries, a: &AtomModel, b: &AtomModel) -> Result<(), PerturbationError> {
    if a.dim() != series.dim() || b.dim() != series.dim() {
        return Err(PerturbationError::DimensionMismatch);
    }
    Ok(())
}

/// `⟨0|H_I|0⟩` power by power; each monomial factorises into one moment per
/// atom.
pub fn first_order_expectation(
    series: &InteractionSeries,
    atom_a: &AtomModel,
    atom_b: &AtomModel,
    k: f64,
    r: f64,
) -> Result<FirstOrderTerms, PerturbationError> {
    check_pair(series, atom_a, atom_b)?;
    if series.max_power() < 5 {
        return Err(PerturbationError::SeriesTooShort {
            got: series.max_power(),
            needed: 5,
        });
    }
    if r <= 0.0 {
        return Err(PerturbationError::BadSeparation);
    }
    let mut by_power = BTreeMap::new();
    for n in 3..=series.max_power() {
        let mut c = 0.0;
        for m in series.power(n) {
            let ma = atom_a.moment_u8(&m.exp_a)?;
            if ma == 0.0 {
                continue;
            }
            c += rational_to_f64(&m.coeff) * ma * atom_b.moment_u8(&m.exp_b)?;
        }
        by_power.insert(n, k * c / r.powi(n as i32));
    }
    Ok(FirstOrderTerms { r, k, by_power })
}

/// `(3(3−d)(5−d)k a⁴/(4R⁵), 5(3−d)(5−d)(7−d)αk a⁶/(8R⁷))`.
pub fn first_order_closed_form(dim: Dim, a: f64, alpha: f64, k: f64, r: f64) -> (f64, f64) {
    let d = dim.as_f64();
    let r5 = 3.0 * (3.0 - d) * (5.0 - d) * k * a.powi(4) / (4.0 * r.powi(5));
    let r7 = 5.0 * (3.0 - d) * (5.0 - d) * (7.0 - d) * alpha * k * a.powi(6) / (8.0 * r.powi(7));
    (r5, r7)
}

/// `−(3 + d)k²a⁴/(2ħω R⁶)`.
pub fn second_order_drude_closed_form(dim: Dim, a: f64, k: f64, hbar_omega: f64, r: f64) -> f64 {
    -(3.0 + dim.as_f64()) * k * k * a.powi(4) / (2.0 * hbar_omega * r.powi(6))
}

/// Occupation numbers of the 2d oscillator modes (atom A first) to amplitude.
type Fock = BTreeMap<Vec<u32>, f64>;

/// Applies `b + b†` on one mode.
fn apply_position(state: &Fock, mode: usize) -> Fock {
    let mut out = Fock::new();
    for (occ, &amp) in state {
        let n = occ[mode];
        let mut up = occ.clone();
        up[mode] += 1;
        *out.entry(up).or_insert(0.0) += amp * ((n + 1) as f64).sqrt();
        if n > 0 {
            let mut down = occ.clone();
            down[mode] -= 1;
            *out.entry(down).or_insert(0.0) += amp * (n as f64).sqrt();
        }
    }
    out
}

struct DrudeLadder {
    d: usize,
    len_a: f64,
    len_b: f64,
    hw_a: f64,
    hw_b: f64,
}

impl DrudeLadder {
    fn new(a: &AtomModel, b: &AtomModel) -> Result<Self, PerturbationError> {
        let (Some(pa), Some(pb)) = (a.drude_params(), b.drude_params()) else {
            return Err(PerturbationError::NotDrude);
        };
        Ok(Self {
            d: a.dim().get(),
            len_a: pa.a_squared().sqrt(),
            len_b: pb.a_squared().sqrt(),
            hw_a: pa.hbar_omega(),
            hw_b: pb.hbar_omega(),
        })
    }

    /// `H⁽ⁿ⁾|0⟩` for the monomials of one power, without the `k/Rⁿ` factor.
    fn on_ground(&self, monomials: &[Monomial]) -> Fock {
        let mut total = Fock::new();
        for m in monomials {
            let mut state = Fock::from([(vec![0; 2 * self.d], 1.0)]);
            for (i, &e) in m.exp_a.iter().chain(&m.exp_b).enumerate() {
                for _ in 0..e {
                    state = apply_position(&state, i);
                }
            }
            let scale = rational_to_f64(&m.coeff)
                * self.len_a.powi(m.degree_a() as i32)
                * self.len_b.powi(m.degree_b() as i32);
            for (occ, amp) in state {
                *total.entry(occ).or_insert(0.0) += scale * amp;
            }
        }
        total
    }

    fn excitation(&self, occ: &[u32]) -> (u32, u32, f64) {
        let na: u32 = occ[..self.d].iter().sum();
        let nb: u32 = occ[self.d..].iter().sum();
        (na, nb, self.hw_a * na as f64 + self.hw_b * nb as f64)
    }
}

/// `−Σ_{n≠0} ⟨0|H⁽ᵖ⁾|n⟩⟨n|H⁽ᵠ⁾|0⟩ / (E_n − E_0)` over product oscillator
/// states with at most `cutoff` quanta per atom.
pub fn second_order_cross(
    series: &InteractionSeries,
    p: u32,
    q: u32,
    atom_a: &AtomModel,
    atom_b: &AtomModel,
    k: f64,
    r: f64,
    cutoff: u32,
) -> Result<f64, PerturbationError> {
    check_pair(series, atom_a, atom_b)?;
    let needed = p.max(q);
    if series.max_power() < needed {
        return Err(PerturbationError::SeriesTooShort {
            got: series.max_power(),
            needed,
        });
    }
    if cutoff < 1 {
        return Err(PerturbationError::BadCutoff);
    }
    if r <= 0.0 {
        return Err(PerturbationError::BadSeparation);
    }
    let ladder = DrudeLadder::new(atom_a, atom_b)?;
    let left = ladder.on_ground(series.power(p));
    let right = ladder.on_ground(series.power(q));
    let mut sum = 0.0;
    for (occ, &amp_l) in &left {
        let (na, nb, gap) = ladder.excitation(occ);
        if na + nb == 0 || na > cutoff || nb > cutoff {
            continue;
        }
        if let Some(&amp_r) = right.get(occ) {
            sum += amp_l * amp_r / gap;
        }
    }
    Ok(-sum * k * k / r.powi((p + q) as i32))
}

/// Second-order energy of the dipole term by the sum over states.
pub fn second_order_sum(
    series: &InteractionSeries,
    atom_a: &AtomModel,
    atom_b: &AtomModel,
    k: f64,
    r: f64,
    cutoff: u32,
) -> Result<f64, PerturbationError> {
    second_order_cross(series, 3, 3, atom_a, atom_b, k, r, cutoff)
}

/// `|Σ_{n≠0} ⟨0|H⁽³⁾|n⟩⟨n|H⁽⁴⁾|0⟩ / (E_n − E_0)|`, which parity forces to zero.
pub fn parity_cross_term(
    series: &InteractionSeries,
    atom_a: &AtomModel,
    atom_b: &AtomModel,
    k: f64,
    r: f64,
    cutoff: u32,
) -> Result<f64, PerturbationError> {
    Ok(second_order_cross(series, 3, 4, atom_a, atom_b, k, r, cutoff)?.abs())
}

/// Average of `f` over the ground-state cloud of `atom`.
fn cloud_average<F: Fn(&[f64]) -> f64>(atom: &AtomModel, f: F) -> f64 {
    let d = atom.dim().get();
    match atom.kind() {
        AtomKind::Degenerate1DHydrogen => f(&vec![0.0; d]),
        AtomKind::Drude(p) => {
            let rule = gauss_hermite(48);
            let scale = (2.0 * p.a_squared()).sqrt();
            let norm = std::f64::consts::PI.powf(-0.5 * d as f64);
            let mut idx = vec![0usize; d];
            let mut point = vec![0.0; d];
            let mut total = 0.0;
            loop {
                let mut w = norm;
                for (i, &j) in idx.iter().enumerate() {
                    point[i] = scale * rule.nodes[j];
                    w *= rule.weights[j];
                }
                total += w * f(&point);
                let mut i = 0;
                loop {
                    if i == d {
                        return total;
                    }
                    idx[i] += 1;
                    if idx[i] < rule.len() {
                        break;
                    }
                    idx[i] = 0;
                    i += 1;
                }
            }
        }
        AtomKind::NumericRadial(rho) => {
            let radial = gauss_legendre(rho.order());
            let angular = gauss_legendre(64);
            let radii = rho.radii();
            let mut total = 0.0;
            for w in radii.windows(2) {
                let (c, h) = (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]));
                for (x, wx) in radial.iter() {
                    let s = c + h * x;
                    let weight = wx * h * rho.value(s);
                    total += weight
                        * match d {
                            1 => f(&[s]) + f(&[-s]),
                            2 => {
                                // φ ∈ [0, 2π]
                                s * angular
                                    .iter()
                                    .map(|(t, wt)| {
                                        let phi = std::f64::consts::PI * (t + 1.0);
                                        std::f64::consts::PI * wt * f(&[s * phi.cos(), s * phi.sin()])
                                    })
                                    .sum::<f64>()
                            }
                            _ => {
                                2.0 * std::f64::consts::PI
                                    * s
                                    * s
                                    * angular.iter().map(|(mu, wm)| wm * f(&[s * mu, 0.0, s * (1.0 - mu * mu).sqrt()])).sum::<f64>()
                            }
                        };
                }
            }
            total
        }
    }
}

/// First-order energy as `k(V_A(R x̂) − ⟨V_A(R x̂ + r_B)⟩_B)` with `V_A` in its
/// order-5 multipole form. Agrees with the `R⁻⁵ + R⁻⁷` terms up to `O(R⁻⁹)`.
pub fn first_order_via_potential(
    atom_a: &AtomModel,
    atom_b: &AtomModel,
    k: f64,
    r: f64,
) -> Result<f64, PerturbationError> {
    if atom_a.dim() != atom_b.dim() {
        return Err(PerturbationError::DimensionMismatch);
    }
    if r <= 0.0 {
        return Err(PerturbationError::BadSeparation);
    }
    if atom_a.dim() == Dim::THREE || atom_a.characteristic_length().a_squared == 0.0 {
        return Ok(0.0);
    }
    // V_A(p) = −c3/|p|³ − c5/|p|⁵ in the electron manifold
    let c3 = -v_a_multipole(atom_a, [1.0, 0.0, 0.0], 3)?.value;
    let c5 = -v_a_multipole(atom_a, [1.0, 0.0, 0.0], 5)?.value - c3;
    // V_A(R) − V_A(q) with q² = R² + Δ, written without cancellation
    let diff = |delta: f64| {
        let q = (r * r + delta).sqrt();
        let q_minus_r = delta / (q + r);
        let inv3 = q_minus_r * (q * q + q * r + r * r) / (r * q).powi(3);
        let inv5 = q_minus_r * (q.powi(4) + q.powi(3) * r + (q * r).powi(2) + q * r.powi(3) + r.powi(4)) / (r * q).powi(5);
        -c3 * inv3 - c5 * inv5
    };
    let avg = cloud_average(atom_b, |rb| {
        let s2: f64 = rb.iter().map(|x| x * x).sum();
        diff(2.0 * r * rb[0] + s2)
    });
    Ok(k * avg)
}

/// Which computation produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    ClosedForm,
    Expectation,
    LadderSum,
    Potential,
    NormalModes,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyTerm {
    pub value: f64,
    pub route: Route,
}

/// Leading corrections at one separation, in units of k/a with `R̃ = R/a`.
/// Closed-form values are authoritative; the other routes are kept as
/// residual diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyBreakdown {
    pub r_tilde: f64,
    pub dim: Dim,
    pub first_order_r5: EnergyTerm,
    pub first_order_r7: EnergyTerm,
    pub second_order_r6: EnergyTerm,
    pub total_truncated: f64,
    pub diagnostics: Vec<EnergyTerm>,
}

/// Drude parameters of a curve, in units where energies are k/a.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum DrudePreset {
    /// `ħω = k/(2a)`.
    Bohr,
    Custom { hbar_omega: f64, a: f64, k: f64 },
}

impl DrudePreset {
    /// `ħω` in units of k/a.
    pub fn reduced_hbar_omega(&self) -> f64 {
        match *self {
            DrudePreset::Bohr => 0.5,
            DrudePreset::Custom { hbar_omega, a, k } => hbar_omega * a / k,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            DrudePreset::Bohr => "bohr",
            DrudePreset::Custom { .. } => "custom",
        }
    }

    pub fn atom(&self, dim: Dim) -> AtomModel {
        AtomModel::drude(dim, crate::atoms::DrudeParams::from_hbar_omega(self.reduced_hbar_omega(), 1.0))
    }

    /// Smallest valid `R̃` of the exact normal-mode energy.
    pub fn validity_bound(&self) -> f64 {
        (4.0 / self.reduced_hbar_omega()).cbrt()
    }
}

/// Closed-form leading terms for Drude atoms, in units of k/a.
pub fn drude_terms(dim: Dim, preset: DrudePreset, r_tilde: f64) -> (f64, f64, f64) {
    let (r5, r7) = first_order_closed_form(dim, 1.0, 3.0, 1.0, r_tilde);
    let r6 = second_order_drude_closed_form(dim, 1.0, 1.0, preset.reduced_hbar_omega(), r_tilde);
    (r5, r6, r7)
}

pub fn energy_breakdown(dim: Dim, preset: DrudePreset, r_tilde: f64) -> Result<EnergyBreakdown, PerturbationError> {
    let (r5, r6, r7) = drude_terms(dim, preset, r_tilde);
    let series = expand_interaction(dim, 7)?;
    let atom = preset.atom(dim);
    let fo = first_order_expectation(&series, &atom, &atom, 1.0, r_tilde)?;
    let ladder = second_order_sum(&series, &atom, &atom, 1.0, r_tilde, 1)?;
    let term = |value, route| EnergyTerm { value, route };
    Ok(EnergyBreakdown {
        r_tilde,
        dim,
        first_order_r5: term(r5, Route::ClosedForm),
        first_order_r7: term(r7, Route::ClosedForm),
        second_order_r6: term(r6, Route::ClosedForm),
        total_truncated: r5 + r6 + r7,
        diagnostics: vec![
            term(fo.term(5), Route::Expectation),
            term(fo.term(7), Route::Expectation),
            term(ladder, Route::LadderSum),
        ],
    })
}

/// One row of the dimensionless energy curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveRow {
    pub r_tilde: f64,
    pub r5: f64,
    pub r6: f64,
    pub r7: f64,
    pub total: f64,
    /// Exact normal-mode energy of the dipole-coupled pair; `None` where the
    /// coupled oscillator is unstable.
    pub exact: Option<f64>,
    pub dim: Dim,
    pub preset: &'static str,
    pub flagged: bool,
    pub components: Option<RouteComponents>,
}

/// Independent-route values of the same terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RouteComponents {
    pub r5_expectation: f64,
    pub r7_expectation: f64,
    pub r6_ladder: f64,
}

pub fn total_energy_curve(
    dim: Dim,
    grid: &[f64],
    preset: DrudePreset,
    components: bool,
) -> Result<Vec<CurveRow>, PerturbationError> {
    if grid.iter().any(|&r| !(r > 0.0) || !r.is_finite()) {
        return Err(PerturbationError::BadSeparation);
    }
    let pair = DrudePair::reduced(dim, preset);
    let extra = if components {
        Some((expand_interaction(dim, 7)?, preset.atom(dim)))
    } else {
        None
    };
    let mut rows = Vec::with_capacity(grid.len());
    for &r in grid {
        let (r5, r6, r7) = drude_terms(dim, preset, r);
        let exact = pair.exact_correction(r).ok();
        let components = match &extra {
            Some((series, atom)) => {
                let fo = first_order_expectation(series, atom, atom, 1.0, r)?;
                Some(RouteComponents {
                    r5_expectation: fo.term(5),
                    r7_expectation: fo.term(7),
                    r6_ladder: second_order_sum(series, atom, atom, 1.0, r, 1)?,
                })
            }
            None => None,
        };
        rows.push(CurveRow {
            r_tilde: r,
            r5,
            r6,
            r7,
            total: r5 + r6 + r7,
            flagged: exact.is_none(),
            exact,
            dim,
            preset: preset.name(),
            components,
        });
    }
    Ok(rows)
}

/// Smallest `R̃ ≥ lo` from which the `R̃⁻⁵` term exceeds `|r6| + r7`, located
/// on a grid of `steps` points in `[lo, hi]` and refined by bisection.
pub fn dominance_crossover(dim: Dim, preset: DrudePreset, lo: f64, hi: f64, steps: usize) -> Option<f64> {
    let margin = |r: f64| {
        let (r5, r6, r7) = drude_terms(dim, preset, r);
        r5 - r6.abs() - r7
    };
    let grid = crate::fit::linspace(lo, hi, steps.max(2));
    if margin(grid[0]) > 0.0 {
        return Some(grid[0]);
    }
    let hit = grid.windows(2).find(|w| margin(w[1]) > 0.0)?;
    let (mut a, mut b) = (hit[0], hit[1]);
    for _ in 0..100 {
        let m = 0.5 * (a + b);
        if margin(m) > 0.0 {
            b = m;
        } else {
            a = m;
        }
    }
    Some(b)
}
