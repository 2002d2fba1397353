//! The four-term Coulomb interaction between two neutral atoms and its exact
//! expansion in inverse powers of the separation.
//!
//! The separation vector always points along the x axis. Electron coordinates
//! are d-vectors that are zero-padded into three dimensions when the kernel
//! is evaluated.
//!
//! Each shifted kernel is expanded as
//!
//! ```text
//! 1/|R x̂ − s| = (1/R) (1 + u)^(−1/2),   u = (−2 R s_x + |s|²) / R²
//! ```
//!
//! with the binomial series carried in exact rationals. A homogeneous
//! polynomial of degree m in the coordinates multiplies `R^−(m+1)`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fit::loglog_slope;
use crate::poly::{degree, rational_to_f64, Poly, Rational};
use crate::units::{embed, norm3, CoulombConstant, Dim};

/// Highest inverse power `expand_interaction` will produce.
pub const MAX_POWER_CAP: u32 = 12;

/// Relative singularity threshold: a kernel denominator below `eps · R` is an error.
pub const DEFAULT_SINGULAR_EPS: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum MultipoleError {
    #[error("separation must be positive and finite (got {0})")]
    BadSeparation(f64),
    #[error("kernel denominator {which} = {value:e} is below the singularity threshold")]
    Singular { which: &'static str, value: f64 },
    #[error("requested expansion order {requested} exceeds the cap {cap}")]
    CapExceeded { requested: u32, cap: u32 },
    #[error("coordinate vectors must have {expected} components (got {got})")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("malformed series: {0}")]
    Malformed(String),
}

/// One term `coeff · Π x_A,i^expA_i · Π x_B,i^expB_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial {
    pub coeff: Rational,
    pub exp_a: Vec<u8>,
    pub exp_b: Vec<u8>,
}

impl Monomial {
    pub fn degree_a(&self) -> u32 {
        degree(&self.exp_a)
    }

    pub fn degree_b(&self) -> u32 {
        degree(&self.exp_b)
    }

    pub fn eval(&self, ra: &[f64], rb: &[f64]) -> f64 {
        let pa: f64 = self.exp_a.iter().zip(ra).map(|(&e, &x)| x.powi(e as i32)).product();
        let pb: f64 = self.exp_b.iter().zip(rb).map(|(&e, &x)| x.powi(e as i32)).product();
        rational_to_f64(&self.coeff) * pa * pb
    }
}

/// The interaction Hamiltonian (divided by k) as a sum over inverse powers of
/// the separation, each carrying a homogeneous polynomial in the electron
/// coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteractionSeries {
    dim: Dim,
    max_power: u32,
    terms: BTreeMap<u32, Vec<Monomial>>,
}

impl InteractionSeries {
    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn max_power(&self) -> u32 {
        self.max_power
    }

    /// Monomials multiplying `R^−n`; empty when the power carries no terms.
    pub fn power(&self, n: u32) -> &[Monomial] {
        self.terms.get(&n).map_or(&[], Vec::as_slice)
    }

    /// Inverse powers that carry at least one term, ascending.
    pub fn powers(&self) -> impl Iterator<Item = u32> + '_ {
        self.terms.keys().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn monomials(&self) -> impl Iterator<Item = (u32, &Monomial)> {
        self.terms
            .iter()
            .flat_map(|(&n, ms)| ms.iter().map(move |m| (n, m)))
    }

    /// The `R^−n` polynomial over `2d` variables (atom A first, then atom B).
    pub fn power_poly(&self, n: u32) -> Poly {
        let d = self.dim.get();
        Poly::from_terms(
            2 * d,
            self.power(n).iter().map(|m| {
                let mut e = m.exp_a.clone();
                e.extend_from_slice(&m.exp_b);
                (e, m.coeff)
            }),
        )
    }

    /// Copy keeping only the powers `≤ max_power`.
    pub fn truncated(&self, max_power: u32) -> Self {
        Self {
            dim: self.dim,
            max_power: max_power.min(self.max_power),
            terms: self
                .terms
                .range(..=max_power)
                .map(|(n, v)| (*n, v.clone()))
                .collect(),
        }
    }

    /// Copy keeping only the listed powers.
    pub fn select(&self, powers: &[u32]) -> Self {
        Self {
            dim: self.dim,
            max_power: self.max_power,
            terms: self
                .terms
                .iter()
                .filter(|(n, _)| powers.contains(n))
                .map(|(n, v)| (*n, v.clone()))
                .collect(),
        }
    }

    /// Mutable access for fault-injection harnesses.
    pub fn monomials_mut(&mut self, n: u32) -> Option<&mut Vec<Monomial>> {
        self.terms.get_mut(&n)
    }

    fn from_poly_by_degree(dim: Dim, max_power: u32, total: &Poly) -> Self {
        let d = dim.get();
        let mut terms: BTreeMap<u32, Vec<Monomial>> = BTreeMap::new();
        for (e, c) in total.terms() {
            let n = degree(e) + 1;
            if n > max_power {
                continue;
            }
            terms.entry(n).or_default().push(Monomial {
                coeff: *c,
                exp_a: e[..d].to_vec(),
                exp_b: e[d..].to_vec(),
            });
        }
        Self {
            dim,
            max_power,
            terms,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(SeriesJson::from(self)).expect("series serializes")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&SeriesJson::from(self)).expect("series serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self, MultipoleError> {
        let raw: SeriesJson =
            serde_json::from_str(s).map_err(|e| MultipoleError::Malformed(e.to_string()))?;
        Self::try_from(raw)
    }
}

/// Wire form: `{dim, max_power, terms: [{power, coeff_num, coeff_den, expA, expB}]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SeriesJson {
    pub dim: Dim,
    pub max_power: u32,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TermJson {
    pub power: u32,
    pub coeff_num: i128,
    pub coeff_den: i128,
    #[serde(rename = "expA")]
    pub exp_a: Vec<u8>,
    #[serde(rename = "expB")]
    pub exp_b: Vec<u8>,
}

impl From<&InteractionSeries> for SeriesJson {
    fn from(s: &InteractionSeries) -> Self {
        SeriesJson {
            dim: s.dim,
            max_power: s.max_power,
            terms: s
                .monomials()
                .map(|(n, m)| TermJson {
                    power: n,
                    coeff_num: *m.coeff.numer(),
                    coeff_den: *m.coeff.denom(),
                    exp_a: m.exp_a.clone(),
                    exp_b: m.exp_b.clone(),
                })
                .collect(),
        }
    }
}

impl TryFrom<SeriesJson> for InteractionSeries {
    type Error = MultipoleError;

    fn try_from(raw: SeriesJson) -> Result<Self, MultipoleError> {
        let d = raw.dim.get();
        let mut terms: BTreeMap<u32, Vec<Monomial>> = BTreeMap::new();
        for t in raw.terms {
            if t.coeff_den == 0 {
                return Err(MultipoleError::Malformed("zero denominator".into()));
            }
            if t.coeff_num == 0 {
                return Err(MultipoleError::Malformed("zero coefficient stored".into()));
            }
            if t.exp_a.len() != d || t.exp_b.len() != d {
                return Err(MultipoleError::Malformed(format!(
                    "exponent vectors must have {d} entries"
                )));
            }
            if t.power > raw.max_power {
                return Err(MultipoleError::Malformed(format!(
                    "power {} above max_power {}",
                    t.power, raw.max_power
                )));
            }
            if degree(&t.exp_a) + degree(&t.exp_b) + 1 != t.power {
                return Err(MultipoleError::Malformed(format!(
                    "term at power {} is not of degree {}",
                    t.power,
                    t.power.saturating_sub(1)
                )));
            }
            terms.entry(t.power).or_default().push(Monomial {
                coeff: Rational::new(t.coeff_num, t.coeff_den),
                exp_a: t.exp_a,
                exp_b: t.exp_b,
            });
        }
        for ms in terms.values_mut() {
            ms.sort_by(|x, y| (&x.exp_a, &x.exp_b).cmp(&(&y.exp_a, &y.exp_b)));
        }
        Ok(Self {
            dim: raw.dim,
            max_power: raw.max_power,
            terms,
        })
    }
}

/// Taylor polynomial of `(1 + u)^(−1/2)` with `u = −2 s_x + |s|²`, in the three
/// components of `s`, keeping total degree `≤ max_degree`.
fn unit_kernel_series(max_degree: u32) -> Poly {
    let sx = Poly::var(3, 0);
    let s2 = (0..3)
        .map(|i| Poly::var(3, i).pow(2))
        .fold(Poly::zero(3), |acc, p| &acc + &p);
    let u = &sx.scale(Rational::from_integer(-2)) + &s2;

    let mut sum = Poly::one(3);
    let mut u_pow = Poly::one(3);
    let mut c = Rational::one();
    let half = Rational::new(1, 2);
    // every power of u has minimum degree j, so j ≤ max_degree suffices
    for j in 0..max_degree {
        let jr = Rational::from_integer(j as i128);
        c = c * (-half - jr) / (jr + Rational::one());
        u_pow = u_pow.mul_truncated(&u, max_degree);
        sum = &sum + &u_pow.scale(c);
    }
    sum
}

/// Exact expansion of `H_I / k` through `R^−max_power`.
pub fn expand_interaction(dim: Dim, max_power: u32) -> Result<InteractionSeries, MultipoleError> {
    if max_power > MAX_POWER_CAP {
        return Err(MultipoleError::CapExceeded {
            requested: max_power,
            cap: MAX_POWER_CAP,
        });
    }
    let d = dim.get();
    let nv = 2 * d;
    let max_degree = max_power.saturating_sub(1);
    let kernel = unit_kernel_series(max_degree);

    let pad = |comps: Vec<Poly>| -> Vec<Poly> {
        let mut v = comps;
        v.resize(3, Poly::zero(nv));
        v
    };
    let a: Vec<Poly> = (0..d).map(|i| Poly::var(nv, i)).collect();
    let b: Vec<Poly> = (0..d).map(|i| Poly::var(nv, d + i)).collect();

    let s_ab = pad(a.iter().zip(&b).map(|(x, y)| x - y).collect());
    let s_a = pad(a.clone());
    let s_b = pad(b.iter().map(|y| -y).collect());

    let total = &(&(&kernel.compose(&s_ab) - &kernel.compose(&s_a)) - &kernel.compose(&s_b))
        + &Poly::one(nv);

    Ok(InteractionSeries::from_poly_by_degree(dim, max_power, &total))
}

fn check_coords(dim: Dim, ra: &[f64], rb: &[f64]) -> Result<(), MultipoleError> {
    for v in [ra, rb] {
        if v.len() != dim.get() {
            return Err(MultipoleError::DimensionMismatch {
                expected: dim.get(),
                got: v.len(),
            });
        }
    }
    Ok(())
}

/// `1/|R x̂ − s| − 1/R` written without the subtraction of nearly equal terms.
fn shifted_kernel_excess(r: f64, s: &[f64; 3], eps: f64, which: &'static str) -> Result<f64, MultipoleError> {
    let diff = [r - s[0], -s[1], -s[2]];
    let dist = norm3(&diff);
    if dist < eps {
        return Err(MultipoleError::Singular { which, value: dist });
    }
    let s2 = s[0] * s[0] + s[1] * s[1] + s[2] * s[2];
    Ok((2.0 * r * s[0] - s2) / (r * dist * (r + dist)))
}

/// `H_I = k (1/R + 1/|R − r_A + r_B| − 1/|R − r_A| − 1/|R + r_B|)` with
/// `R = R x̂`, using the default singularity threshold.
pub fn exact_interaction(
    r: f64,
    ra: &[f64],
    rb: &[f64],
    k: CoulombConstant,
) -> Result<f64, MultipoleError> {
    exact_interaction_with_eps(r, ra, rb, k, DEFAULT_SINGULAR_EPS)
}

/// As [`exact_interaction`]; denominators below `rel_eps · R` are rejected.
pub fn exact_interaction_with_eps(
    r: f64,
    ra: &[f64],
    rb: &[f64],
    k: CoulombConstant,
    rel_eps: f64,
) -> Result<f64, MultipoleError> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(MultipoleError::BadSeparation(r));
    }
    if ra.len() != rb.len() || ra.len() > 3 {
        return Err(MultipoleError::DimensionMismatch {
            expected: ra.len(),
            got: rb.len(),
        });
    }
    let eps = rel_eps * r;
    let a = embed(ra);
    let b = embed(rb);
    let ab = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    let neg_b = [-b[0], -b[1], -b[2]];
    // the 1/R pieces cancel among the four terms
    let total = shifted_kernel_excess(r, &ab, eps, "|R - rA + rB|")?
        - shifted_kernel_excess(r, &a, eps, "|R - rA|")?
        - shifted_kernel_excess(r, &neg_b, eps, "|R + rB|")?;
    Ok(k.get() * total)
}

/// `k Σ_n R^−n Σ monomial(r_A, r_B)`.
pub fn evaluate_series(
    series: &InteractionSeries,
    r: f64,
    ra: &[f64],
    rb: &[f64],
    k: CoulombConstant,
) -> Result<f64, MultipoleError> {
    if !(r > 0.0) {
        return Err(MultipoleError::BadSeparation(r));
    }
    check_coords(series.dim, ra, rb)?;
    let mut total = 0.0;
    for (&n, ms) in &series.terms {
        let inner: f64 = ms.iter().map(|m| m.eval(ra, rb)).sum();
        total += inner * r.powi(-(n as i32));
    }
    Ok(k.get() * total)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualRow {
    pub separation: f64,
    pub max: f64,
    pub rms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub rows: Vec<ResidualRow>,
    /// Negated log–log slope of the max residual against R; `None` when the
    /// residual vanishes or fewer than two separations were sampled.
    pub decay_exponent: Option<f64>,
}

fn random_in_ball<R: Rng>(rng: &mut R, d: usize, radius: f64) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let n2: f64 = v.iter().map(|x| x * x).sum();
        if n2 <= 1.0 {
            return v.into_iter().map(|x| x * radius).collect();
        }
    }
}

/// Compares the truncated series with the exact kernel at `sample_count`
/// seeded random configurations inside a ball of `radius` per separation.
pub fn truncation_residual(
    series: &InteractionSeries,
    separations: &[f64],
    sample_count: usize,
    radius: f64,
    seed: u64,
) -> Result<ResidualReport, MultipoleError> {
    let d = series.dim.get();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(separations.len());
    for &r in separations {
        let mut max: f64 = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..sample_count {
            let ra = random_in_ball(&mut rng, d, radius);
            let rb = random_in_ball(&mut rng, d, radius);
            let exact = exact_interaction(r, &ra, &rb, CoulombConstant::REDUCED)?;
            let approx = evaluate_series(series, r, &ra, &rb, CoulombConstant::REDUCED)?;
            let res = (exact - approx).abs();
            max = max.max(res);
            sum_sq += res * res;
        }
        let rms = if sample_count > 0 {
            (sum_sq / sample_count as f64).sqrt()
        } else {
            0.0
        };
        rows.push(ResidualRow {
            separation: r,
            max,
            rms,
        });
    }
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|row| row.max > 0.0)
        .map(|row| (row.separation, row.max))
        .collect();
    let decay_exponent = if points.len() >= 2 && points.len() == rows.len() {
        Some(-loglog_slope(&points))
    } else {
        None
    };
    Ok(ResidualReport {
        rows,
        decay_exponent,
    })
}

/// The inverse-power coefficients printed in closed vector form, built with
/// dot products rather than the binomial series. Used as the golden
/// reference for powers 3 to 5.
pub mod reference {
    use super::*;

    struct Vars {
        nv: usize,
        a: Vec<Poly>,
        b: Vec<Poly>,
    }

    impl Vars {
        fn new(dim: Dim) -> Self {
            let d = dim.get();
            let nv = 2 * d;
            Vars {
                nv,
                a: (0..d).map(|i| Poly::var(nv, i)).collect(),
                b: (0..d).map(|i| Poly::var(nv, d + i)).collect(),
            }
        }
        fn dot(&self, u: &[Poly], v: &[Poly]) -> Poly {
            u.iter()
                .zip(v)
                .fold(Poly::zero(self.nv), |acc, (x, y)| &acc + &(x * y))
        }
        fn q(&self, n: i128, d: i128) -> Poly {
            Poly::constant(self.nv, Rational::new(n, d))
        }
    }

    /// `[r_A·r_B − 3 x_A x_B]`, the `R^−3` bracket.
    pub fn dipole_bracket(dim: Dim) -> Poly {
        let v = Vars::new(dim);
        let ab = v.dot(&v.a, &v.b);
        let xx = &v.a[0] * &v.b[0];
        &ab - &(&v.q(3, 1) * &xx)
    }

    /// The `R^−4` bracket.
    pub fn power4_bracket(dim: Dim) -> Poly {
        let v = Vars::new(dim);
        let (xa, xb) = (&v.a[0], &v.b[0]);
        let ab = v.dot(&v.a, &v.b);
        let aa = v.dot(&v.a, &v.a);
        let bb = v.dot(&v.b, &v.b);
        let t1 = &(&v.q(3, 1) * &ab) * &(xa - xb);
        let t2 = &v.q(3, 2) * &(&(&aa * xb) - &(&bb * xa));
        let t3 = &(&(&v.q(15, 2) * xa) * xb) * &(xb - xa);
        &(&t1 + &t2) + &t3
    }

    /// The `R^−5` bracket.
    pub fn power5_bracket(dim: Dim) -> Poly {
        let v = Vars::new(dim);
        let (xa, xb) = (&v.a[0], &v.b[0]);
        let ab = v.dot(&v.a, &v.b);
        let aa = v.dot(&v.a, &v.a);
        let bb = v.dot(&v.b, &v.b);
        let two = v.q(2, 1);
        let xa2 = xa * xa;
        let xb2 = xb * xb;
        let xaxb = xa * xb;

        let t1 = &(&v.q(3, 2) * &ab) * &(&(&ab - &aa) - &bb);
        let t2 = &(&v.q(3, 4) * &aa) * &bb;
        let inner = [
            &(&two * &ab) * &xa2,
            &(&two * &ab) * &xb2,
            -&(&aa * &xb2),
            -&(&bb * &xa2),
            &(&two * &aa) * &xaxb,
            &(&two * &bb) * &xaxb,
            -&(&(&v.q(4, 1) * &ab) * &xaxb),
        ]
        .iter()
        .fold(Poly::zero(v.nv), |acc, p| &acc + p);
        let t3 = &v.q(15, 4) * &inner;
        let quartic = &(&(&v.q(3, 1) * &xa2) * &xb2)
            - &(&(&(&two * &xa2) * xa) * xb)
            + (-&(&(&(&two * &xb2) * xb) * xa));
        let t4 = &v.q(35, 4) * &quartic;
        &(&(&t1 + &t2) + &t3) + &t4
    }

    /// Reference bracket for power `n ∈ {3, 4, 5}`.
    pub fn bracket(dim: Dim, n: u32) -> Option<Poly> {
        match n {
            3 => Some(dipole_bracket(dim)),
            4 => Some(power4_bracket(dim)),
            5 => Some(power5_bracket(dim)),
            _ => None,
        }
    }
}

/// Every monomial mismatch between the series and the closed-form brackets
/// at powers 3–5, as `(power, exponents, series coefficient, reference)`.
pub fn golden_mismatches(series: &InteractionSeries) -> Vec<(u32, Vec<u8>, Rational, Rational)> {
    let mut out = Vec::new();
    for n in 3..=series.max_power().min(5) {
        let Some(reference) = reference::bracket(series.dim(), n) else {
            continue;
        };
        let got = series.power_poly(n);
        let diff = &got - &reference;
        for (e, _) in diff.terms() {
            out.push((n, e.clone(), got.coeff(e), reference.coeff(e)));
        }
    }
    out
}

impl InteractionSeries {
    /// Checks the structural invariants: no powers 1–2, homogeneity, both
    /// atoms present in every monomial, no zero coefficients.
    pub fn validate(&self) -> Result<(), MultipoleError> {
        for (n, m) in self.monomials() {
            if n < 3 {
                return Err(MultipoleError::Malformed(format!("term at power {n}")));
            }
            if m.coeff.is_zero() {
                return Err(MultipoleError::Malformed("zero coefficient".into()));
            }
            if m.degree_a() + m.degree_b() + 1 != n {
                return Err(MultipoleError::Malformed(format!("inhomogeneous term at power {n}")));
            }
            if m.degree_a() == 0 || m.degree_b() == 0 {
                return Err(MultipoleError::Malformed(format!(
                    "single-atom term at power {n}"
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    fn coeff(series: &InteractionSeries, n: u32, a: &[u8], b: &[u8]) -> Rational {
        series
            .power(n)
            .iter()
            .find(|m| m.exp_a == a && m.exp_b == b)
            .map_or_else(Rational::zero, |m| m.coeff)
    }

    #[test]
    fn dipole_coefficients_3d() {
        let s = expand_interaction(Dim::THREE, 3).unwrap();
        assert_eq!(coeff(&s, 3, &[1, 0, 0], &[1, 0, 0]), q(-2, 1));
        assert_eq!(coeff(&s, 3, &[0, 1, 0], &[0, 1, 0]), q(1, 1));
        assert_eq!(coeff(&s, 3, &[0, 0, 1], &[0, 0, 1]), q(1, 1));
        assert_eq!(s.power(3).len(), 3);
    }

    #[test]
    fn power4_monomial_coefficients_3d() {
        let s = expand_interaction(Dim::THREE, 4).unwrap();
        // x_A y_B² only arises from −(3/2)|r_B|² x_A
        assert_eq!(coeff(&s, 4, &[1, 0, 0], &[0, 2, 0]), q(-3, 2));
        // x_A x_B² collects −3 − 3/2 + 15/2
        assert_eq!(coeff(&s, 4, &[1, 0, 0], &[2, 0, 0]), q(3, 1));
    }

    #[test]
    fn one_dimensional_matches_hand_expansion() {
        let s = expand_interaction(Dim::ONE, 7).unwrap();
        assert_eq!(coeff(&s, 3, &[1], &[1]), q(-2, 1));
        assert_eq!(coeff(&s, 4, &[2], &[1]), q(-3, 1));
        assert_eq!(coeff(&s, 5, &[2], &[2]), q(6, 1));
        assert_eq!(coeff(&s, 7, &[3], &[3]), q(-20, 1));
        assert_eq!(coeff(&s, 7, &[4], &[2]), q(15, 1));
    }

    #[test]
    fn golden_brackets_all_dims() {
        for dim in Dim::ALL {
            let s = expand_interaction(dim, 5).unwrap();
            assert!(golden_mismatches(&s).is_empty(), "dim {dim}");
        }
    }

    #[test]
    fn low_orders_are_empty() {
        for n in 0..=2 {
            let s = expand_interaction(Dim::TWO, n).unwrap();
            assert!(s.is_empty());
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(
            expand_interaction(Dim::ONE, MAX_POWER_CAP + 1),
            Err(MultipoleError::CapExceeded {
                requested: MAX_POWER_CAP + 1,
                cap: MAX_POWER_CAP
            })
        );
    }

    #[test]
    fn structural_invariants_up_to_cap() {
        for dim in Dim::ALL {
            let s = expand_interaction(dim, 9).unwrap();
            s.validate().unwrap();
        }
        expand_interaction(Dim::THREE, MAX_POWER_CAP).unwrap().validate().unwrap();
    }

    #[test]
    fn exchange_relabeling_symmetry() {
        // (r_A, r_B) → (−r_B, −r_A) maps each power's polynomial to itself
        for dim in Dim::ALL {
            let s = expand_interaction(dim, 8).unwrap();
            let d = dim.get();
            for n in s.powers() {
                let p = s.power_poly(n);
                let swapped = Poly::from_terms(
                    2 * d,
                    p.terms().map(|(e, c)| {
                        let mut f = e[d..].to_vec();
                        f.extend_from_slice(&e[..d]);
                        let sign = if degree(e) % 2 == 0 { 1 } else { -1 };
                        (f, *c * Rational::from_integer(sign))
                    }),
                );
                assert_eq!(p, swapped, "dim {dim} power {n}");
            }
        }
    }

    #[test]
    fn exact_interaction_zero_displacements() {
        let v = exact_interaction(3.7, &[0.0, 0.0], &[0.0, 0.0], CoulombConstant::REDUCED).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn exact_interaction_relabeling() {
        let ra = [0.3, -0.2, 0.1];
        let rb = [-0.15, 0.4, 0.25];
        let v1 = exact_interaction(4.0, &ra, &rb, CoulombConstant::REDUCED).unwrap();
        let nra = rb.map(|x| -x);
        let nrb = ra.map(|x| -x);
        let v2 = exact_interaction(4.0, &nra, &nrb, CoulombConstant::REDUCED).unwrap();
        assert!((v1 - v2).abs() <= 1e-12 * v1.abs());
    }

    #[test]
    fn exact_interaction_singular() {
        let err = exact_interaction(1.0, &[1.0], &[0.0], CoulombConstant::REDUCED).unwrap_err();
        assert!(matches!(err, MultipoleError::Singular { .. }));
        assert!(matches!(
            exact_interaction(0.0, &[0.1], &[0.0], CoulombConstant::REDUCED),
            Err(MultipoleError::BadSeparation(_))
        ));
    }

    #[test]
    fn exact_interaction_direct_arithmetic() {
        // independent four-term evaluation with plain subtraction
        let (r, xa, xb) = (10.0_f64, 0.1_f64, -0.1_f64);
        let direct = 1.0 / r + 1.0 / (r - xa + xb).abs() - 1.0 / (r - xa).abs() - 1.0 / (r + xb).abs();
        let v = exact_interaction(r, &[xa], &[xb], CoulombConstant::REDUCED).unwrap();
        assert!((v - direct).abs() < 1e-16);
        let s9 = expand_interaction(Dim::ONE, 9).unwrap();
        let approx = evaluate_series(&s9, r, &[xa], &[xb], CoulombConstant::REDUCED).unwrap();
        // next term is O(|r|^9 / R^10)
        assert!((v - approx).abs() < 1e-9 * 0.2_f64.powi(9) * 10.0);
    }

    #[test]
    fn evaluate_series_by_substitution() {
        let s = expand_interaction(Dim::ONE, 3).unwrap();
        let v = evaluate_series(&s, 2.0, &[1.0], &[1.0], CoulombConstant::REDUCED).unwrap();
        assert_eq!(v, -0.25);
        let empty = expand_interaction(Dim::ONE, 2).unwrap();
        assert_eq!(
            evaluate_series(&empty, 2.0, &[1.0], &[1.0], CoulombConstant::REDUCED).unwrap(),
            0.0
        );
    }

    #[test]
    fn json_rejects_inhomogeneous_terms() {
        let bad = r#"{"dim":1,"max_power":3,"terms":[{"power":3,"coeff_num":1,"coeff_den":1,"expA":[1],"expB":[2]}]}"#;
        assert!(InteractionSeries::from_json_str(bad).is_err());
    }

    #[test]
    fn zero_radius_residual_is_zero() {
        let s = expand_interaction(Dim::TWO, 3).unwrap();
        let rep = truncation_residual(&s, &[10.0, 20.0], 10, 0.0, 1).unwrap();
        assert!(rep.rows.iter().all(|r| r.max == 0.0 && r.rms == 0.0));
        assert_eq!(rep.decay_exponent, None);
    }
}
