//! Spatial dimension and the Coulomb constant.
//!
//! Everything in this crate works in reduced units unless a function takes
//! the constants explicitly: the Coulomb constant `k = e²/4πε₀` is 1, lengths
//! are measured in the characteristic length `a` and energies in `k/a`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("electron dimension must be 1, 2 or 3 (got {0})")]
pub struct DimError(pub usize);

/// Number of dimensions the electrons may move in. The field always lives in
/// three dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct Dim(u8);

impl Dim {
    pub const ONE: Dim = Dim(1);
    pub const TWO: Dim = Dim(2);
    pub const THREE: Dim = Dim(3);
    pub const ALL: [Dim; 3] = [Dim::ONE, Dim::TWO, Dim::THREE];

    pub fn new(d: usize) -> Result<Self, DimError> {
        match d {
            1..=3 => Ok(Dim(d as u8)),
            _ => Err(DimError(d)),
        }
    }

    pub fn get(self) -> usize {
        self.0 as usize
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64
    }
}

impl TryFrom<usize> for Dim {
    type Error = DimError;
    fn try_from(d: usize) -> Result<Self, DimError> {
        Dim::new(d)
    }
}

impl From<Dim> for usize {
    fn from(d: Dim) -> usize {
        d.get()
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `k = e²/4πε₀` in whatever energy·length unit the caller uses.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct CoulombConstant(pub f64);

impl CoulombConstant {
    pub const REDUCED: CoulombConstant = CoulombConstant(1.0);

    pub fn get(self) -> f64 {
        self.0
    }
}

impl Default for CoulombConstant {
    fn default() -> Self {
        Self::REDUCED
    }
}

/// Zero-pads a d-vector into three dimensions.
pub fn embed(v: &[f64]) -> [f64; 3] {
    assert!(v.len() <= 3, "vector has more than three components");
    let mut out = [0.0; 3];
    out[..v.len()].copy_from_slice(v);
    out
}

pub fn norm3(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dim_bounds() {
        assert!(Dim::new(0).is_err());
        assert!(Dim::new(4).is_err());
        assert_eq!(Dim::new(2).unwrap(), Dim::TWO);
    }

    #[test]
    fn dim_serde_is_plain_integer() {
        assert_eq!(serde_json::to_string(&Dim::THREE).unwrap(), "3");
        assert!(serde_json::from_str::<Dim>("5").is_err());
    }
}
