//! Electrostatic potential of a neutral atom (nucleus plus ground-state
//! electron cloud) at a point of three-dimensional space.
//!
//! The field point is `r = |r|(x̂ cos θ + ẑ sin θ)` up to rotations about the
//! electron manifold: for d = 1 the electron lives on the x-axis, for d = 2 in
//! the xy-plane. `cos² θ` is the fraction of `|r|²` lying in that manifold.

use std::cell::Cell;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::atoms::{AtomError, AtomKind, AtomModel, SUPPORT_TAIL};
use crate::quadrature::{integrate, integrate_with_breaks, QuadratureError, Tolerance};
use crate::units::{norm3, Dim};

#[derive(Debug, Error, PartialEq)]
pub enum PotentialError {
    #[error("field point must be away from the nucleus")]
    AtNucleus,
    #[error("field point lies on the electron manifold inside the support radius {support}")]
    InsideSupport { support: f64 },
    #[error("multipole order {0} is not available (use 3 or 5)")]
    UnsupportedOrder(u32),
    #[error("the order-5 term is only available on-axis (θ = 0 or π); got cos²θ = {cos2}")]
    OffAxisOrder5 { cos2: f64 },
    #[error("shell-theorem check needs a three-dimensional atom (got d = {0})")]
    NotThreeDimensional(Dim),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Atom(#[from] AtomError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PotentialMethod {
    Quadrature,
    Multipole { order: u32 },
}

impl fmt::Display for PotentialMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PotentialMethod::Quadrature => write!(f, "quadrature"),
            PotentialMethod::Multipole { order } => write!(f, "multipole{order}"),
        }
    }
}

/// `V_A` at one field point, in units of 1/length (times k for an energy).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PotentialSample {
    pub field_point: [f64; 3],
    pub value: f64,
    pub method: PotentialMethod,
}

/// Field point at distance `r` and angle `theta` from the x-axis towards z.
pub fn field_point(r: f64, theta: f64) -> [f64; 3] {
    [r * theta.cos(), 0.0, r * theta.sin()]
}

/// `cos² θ` for a field point relative to the electron manifold of `dim`.
pub fn in_manifold_fraction(dim: Dim, r: &[f64; 3]) -> f64 {
    let n2 = r[0] * r[0] + r[1] * r[1] + r[2] * r[2];
    let inplane = match dim.get() {
        1 => r[0] * r[0],
        2 => r[0] * r[0] + r[1] * r[1],
        _ => n2,
    };
    inplane / n2
}

const TOL: Tolerance = Tolerance {
    abs: 1e-16,
    rel: 1e-11,
    max_intervals: 4000,
};

/// Inner-integral tolerance with the absolute floor scaled to the size of
/// `excess` for an electron at radius `s`.
fn inner_tol(rn: f64, s: f64) -> Tolerance {
    Tolerance {
        abs: 1e-14 * s * (s + 2.0 * rn) / rn.powi(3),
        ..TOL
    }
}

/// `1/|r| − 1/|r − p|` for `|r − p|² = |r|² + e`, computed without cancellation.
fn excess(rn: f64, e: f64) -> f64 {
    let d = (rn * rn + e).sqrt();
    e / (rn * d * (d + rn))
}

/// Nested adaptive integration: the inner integral is evaluated inside the
/// outer integrand, and its first failure is reported afterwards.
fn nested<F>(outer: (f64, f64), breaks: &[f64], inner: F) -> Result<f64, PotentialError>
where
    F: Fn(f64) -> Result<f64, QuadratureError>,
{
    let failure: Cell<Option<QuadratureError>> = Cell::new(None);
    let (v, _) = integrate_with_breaks(
        |s| match inner(s) {
            Ok(v) => v,
            Err(e) => {
                let prev = failure.take();
                failure.set(prev.or(Some(e)));
                0.0
            }
        },
        outer.0,
        outer.1,
        breaks,
        TOL,
    )?;
    match failure.into_inner() {
        Some(e) => Err(e.into()),
        None => Ok(v),
    }
}

/// `V_A(r) = 1/|r| − ∫ρ(r_A)/|r − r_A| dᵈr_A` by adaptive quadrature.
///
/// The nuclear term is folded into the integrand as `ρ·(1/|r| − 1/|r − r_A|)`,
/// which is exact because the density is normalised. Unbounded densities are
/// integrated out to the radius enclosing probability `1 − 10⁻¹²`.
pub fn v_a_numeric(atom: &AtomModel, r: [f64; 3]) -> Result<PotentialSample, PotentialError> {
    let rn = norm3(&r);
    if rn <= 0.0 {
        return Err(PotentialError::AtNucleus);
    }
    let sample = |value| PotentialSample {
        field_point: r,
        value,
        method: PotentialMethod::Quadrature,
    };
    let support = match atom.kind() {
        AtomKind::Degenerate1DHydrogen => return Ok(sample(0.0)),
        AtomKind::NumericRadial(rho) => rho.outer_radius(),
        AtomKind::Drude(_) => atom.support_radius(SUPPORT_TAIL),
    };
    let rho = |s: f64| atom.density_at(s).unwrap_or(0.0);
    let a = atom.characteristic_length().a().max(f64::MIN_POSITIVE);

    let value = match atom.dim().get() {
        1 => {
            let (x0, perp2) = (r[0], r[1] * r[1] + r[2] * r[2]);
            if perp2 == 0.0 && x0.abs() <= support {
                return Err(PotentialError::InsideSupport { support });
            }
            let breaks = [-a, 0.0, a, x0];
            integrate_with_breaks(
                |x| rho(x.abs()) * excess(rn, x * x - 2.0 * x0 * x),
                -support,
                support,
                &breaks,
                TOL,
            )?
            .0
        }
        2 => {
            let q = (r[0] * r[0] + r[1] * r[1]).sqrt();
            if r[2] == 0.0 && q <= support {
                return Err(PotentialError::InsideSupport { support });
            }
            let inner = |s: f64| {
                if s == 0.0 {
                    return Ok(0.0);
                }
                let w = 2.0 * s * rho(s);
                if w == 0.0 {
                    return Ok(0.0);
                }
                let (v, _) = integrate(
                    |phi: f64| excess(rn, s * s - 2.0 * q * s * phi.cos()),
                    0.0,
                    std::f64::consts::PI,
                    inner_tol(rn, s),
                )?;
                Ok(w * v)
            };
            nested((0.0, support), &[a, q], inner)?
        }
        _ => {
            let inner = |s: f64| {
                let w = 2.0 * std::f64::consts::PI * s * s * rho(s);
                if w == 0.0 {
                    return Ok(0.0);
                }
                let (v, _) = integrate(|mu| excess(rn, s * s - 2.0 * rn * s * mu), -1.0, 1.0, inner_tol(rn, s))?;
                Ok(w * v)
            };
            nested((0.0, support), &[a, rn], inner)?
        }
    };
    Ok(sample(value))
}

/// Leading multipole forms of `V_A`.
///
/// Order 3 is the quadrupole `−(3cos²θ − d)a²/(2|r|³)`. Order 5 adds the
/// on-axis hexadecapole term, giving
/// `−(3 − d)/2 · [a²/|r|³ + (5 − d)αa⁴/(4|r|⁵)]`.
pub fn v_a_multipole(atom: &AtomModel, r: [f64; 3], order: u32) -> Result<PotentialSample, PotentialError> {
    let rn = norm3(&r);
    if rn <= 0.0 {
        return Err(PotentialError::AtNucleus);
    }
    if order != 3 && order != 5 {
        return Err(PotentialError::UnsupportedOrder(order));
    }
    let dim = atom.dim();
    let d = dim.as_f64();
    let cos2 = in_manifold_fraction(dim, &r);
    if order == 5 && dim != Dim::THREE && (cos2 - 1.0).abs() > 1e-12 {
        return Err(PotentialError::OffAxisOrder5 { cos2 });
    }
    let a2 = atom.characteristic_length().a_squared;
    let mut value = if dim == Dim::THREE {
        0.0
    } else {
        -(3.0 * cos2 - d) * a2 / (2.0 * rn.powi(3))
    };
    if order == 5 && dim != Dim::THREE && a2 > 0.0 {
        let alpha = atom.alpha()?.0;
        value -= (3.0 - d) * (5.0 - d) * alpha * a2 * a2 / (8.0 * rn.powi(5));
    }
    Ok(PotentialSample {
        field_point: r,
        value,
        method: PotentialMethod::Multipole { order },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShellCheck {
    /// Radii beyond the effective support that were evaluated.
    pub evaluated: Vec<f64>,
    pub max_abs: f64,
    pub at_radius: Option<f64>,
}

/// Largest `|V_A|` over the radii of `radii` lying outside the effective
/// support of a three-dimensional atom.
pub fn shell_theorem_check(atom: &AtomModel, radii: &[f64]) -> Result<ShellCheck, PotentialError> {
    if atom.dim() != Dim::THREE {
        return Err(PotentialError::NotThreeDimensional(atom.dim()));
    }
    let support = match atom.kind() {
        AtomKind::NumericRadial(rho) => rho.outer_radius(),
        _ => atom.support_radius(SUPPORT_TAIL),
    };
    let mut out = ShellCheck {
        evaluated: Vec::new(),
        max_abs: 0.0,
        at_radius: None,
    };
    for &r in radii.iter().filter(|&&r| r > support) {
        let v = v_a_numeric(atom, [r, 0.0, 0.0])?.value.abs();
        out.evaluated.push(r);
        if out.at_radius.is_none() || v > out.max_abs {
            out.max_abs = v;
            out.at_radius = Some(r);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atoms::RadialDensity;
    use statrs::function::erf::erfc;

    #[test]
    fn gaussian_3d_exterior_matches_closed_form() {
        let sigma = 0.7;
        let atom = AtomModel::drude(Dim::THREE, crate::atoms::DrudeParams::from_hbar_omega(0.5, sigma));
        for r in [1.0, 2.0, 8.0 * sigma] {
            let v = v_a_numeric(&atom, [0.0, r, 0.0]).unwrap().value;
            let exact = erfc(r / (2f64.sqrt() * sigma)) / r;
            assert!((v - exact).abs() < 1e-9 * exact.abs() + 1e-14, "r={r} v={v} exact={exact}");
        }
        assert!(v_a_numeric(&atom, [8.0 * sigma, 0.0, 0.0]).unwrap().value.abs() < 1e-10 / sigma);
    }

    #[test]
    fn one_dimensional_quadrupole_signs() {
        let atom = AtomModel::drude_reduced(Dim::ONE);
        let on = v_a_numeric(&atom, field_point(10.0, 0.0)).unwrap().value;
        assert!((on / -1e-3 - 1.0).abs() < 0.05, "{on}");
        let perp = v_a_numeric(&atom, field_point(10.0, std::f64::consts::FRAC_PI_2)).unwrap().value;
        assert!((perp / 5e-4 - 1.0).abs() < 0.05, "{perp}");
        let magic = (1.0f64 / 3.0).sqrt().acos();
        let m3 = v_a_multipole(&atom, field_point(10.0, magic), 3).unwrap().value;
        assert!(m3.abs() < 1e-18);
    }

    #[test]
    fn on_axis_order5_against_quadrature() {
        for dim in [Dim::ONE, Dim::TWO] {
            let atom = AtomModel::drude_reduced(dim);
            let r = field_point(20.0, 0.0);
            let q = v_a_numeric(&atom, r).unwrap().value;
            let m = v_a_multipole(&atom, r, 5).unwrap().value;
            // next term is O(r⁻⁷), relative size ~ 1/r⁴
            assert!(((q - m) / q).abs() < 1e-4, "d={dim} q={q} m={m}");
        }
    }

    #[test]
    fn multipole_errors_and_three_d() {
        let atom = AtomModel::drude_reduced(Dim::ONE);
        assert!(matches!(
            v_a_multipole(&atom, field_point(10.0, 0.3), 5),
            Err(PotentialError::OffAxisOrder5 { .. })
        ));
        assert!(v_a_multipole(&atom, field_point(10.0, std::f64::consts::PI), 5).is_ok());
        assert_eq!(v_a_multipole(&atom, field_point(10.0, 0.0), 4), Err(PotentialError::UnsupportedOrder(4)));
        let a3 = AtomModel::drude_reduced(Dim::THREE);
        for order in [3, 5] {
            assert_eq!(v_a_multipole(&a3, [1.0, 2.0, 3.0], order).unwrap().value, 0.0);
        }
        assert!(matches!(
            v_a_numeric(&atom, [1.0, 0.0, 0.0]),
            Err(PotentialError::InsideSupport { .. })
        ));
    }

    #[test]
    fn shell_theorem() {
        let ball = AtomModel::numeric(RadialDensity::uniform_ball(Dim::THREE, 1.5, 64).unwrap());
        let c = shell_theorem_check(&ball, &[3.0]).unwrap();
        assert!(c.max_abs < 1e-9, "{c:?}");
        let g = AtomModel::numeric(RadialDensity::gaussian(Dim::THREE, 1.0, 6.0, 601).unwrap());
        let c = shell_theorem_check(&g, &[8.0, 10.0, 14.0]).unwrap();
        assert_eq!(c.evaluated.len(), 3);
        assert!(c.max_abs < 1e-8, "{c:?}");
        assert!(matches!(
            shell_theorem_check(&AtomModel::drude_reduced(Dim::ONE), &[8.0]),
            Err(PotentialError::NotThreeDimensional(_))
        ));
    }

    #[test]
    fn parity() {
        let atom = AtomModel::drude_reduced(Dim::TWO);
        let p = [6.0, 2.0, 3.0];
        let v1 = v_a_numeric(&atom, p).unwrap().value;
        let v2 = v_a_numeric(&atom, [-6.0, -2.0, -3.0]).unwrap().value;
        assert!((v1 - v2).abs() < 1e-12 * v1.abs());
    }
}
