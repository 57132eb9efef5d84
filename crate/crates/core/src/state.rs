//! Physical constants of the box and polynomial quantum states.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::StateError;
use crate::poly::{Rational, RationalPoly};

/// ħ, m and L. Only used to scale results computed in natural units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoxParams {
    pub hbar: f64,
    pub mass: f64,
    pub length: f64,
}

impl Default for BoxParams {
    fn default() -> Self {
        Self { hbar: 1.0, mass: 1.0, length: 1.0 }
    }
}

impl BoxParams {
    pub fn new(hbar: f64, mass: f64, length: f64) -> Result<Self, StateError> {
        for (name, v) in [("hbar", hbar), ("mass", mass), ("length", length)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(StateError::InvalidParameter { name, value: v });
            }
        }
        Ok(Self { hbar, mass, length })
    }

    /// ħ²/(m L²), the unit of ⟨H⟩.
    pub fn energy_unit(&self) -> f64 {
        self.hbar * self.hbar / (self.mass * self.length * self.length)
    }

    pub fn is_natural(&self) -> bool {
        *self == Self::default()
    }
}

/// A nonzero polynomial shape on `[0, 1]`, normalized lazily through its cached norm.
///
/// Besides the shape as given, the state keeps a canonical representative (the shape
/// divided by its lowest-order nonzero coefficient) and the sign of that divisor.
/// Floating-point work runs on the canonical shape so that rescaling the input by any
/// nonzero rational leaves every reported number bit-for-bit unchanged.
#[derive(Clone, Debug)]
pub struct PolyState {
    shape: RationalPoly,
    norm_sq: Rational,
    params: BoxParams,
    canonical: RationalPoly,
    canonical_norm_sq: Rational,
    phase: f64,
}

impl PolyState {
    pub fn new(shape: RationalPoly, params: BoxParams) -> Result<Self, StateError> {
        let Some(lead) = shape.lowest_nonzero().cloned() else {
            return Err(StateError::NotNormalizable);
        };
        let norm_sq = shape.integrate_product(&shape);
        let canonical = shape.scale(&lead.recip());
        let canonical_norm_sq = canonical.integrate_product(&canonical);
        debug_assert!(!norm_sq.is_zero());
        Ok(Self {
            shape,
            norm_sq,
            params,
            canonical,
            canonical_norm_sq,
            phase: if lead.is_negative() { -1.0 } else { 1.0 },
        })
    }

    pub fn shape(&self) -> &RationalPoly {
        &self.shape
    }

    /// `∫₀¹ shape²`.
    pub fn norm_sq(&self) -> &Rational {
        &self.norm_sq
    }

    pub fn params(&self) -> &BoxParams {
        &self.params
    }

    pub fn with_params(&self, params: BoxParams) -> Self {
        Self { params, ..self.clone() }
    }

    /// Scale-free representative of the shape, lowest nonzero coefficient equal to one.
    pub fn canonical_shape(&self) -> &RationalPoly {
        &self.canonical
    }

    pub fn canonical_norm_sq(&self) -> &Rational {
        &self.canonical_norm_sq
    }

    /// Sign relating the shape to its canonical representative (±1).
    pub fn phase(&self) -> f64 {
        self.phase
    }
}

/// Builds a state from a shape, rejecting the zero polynomial.
pub fn make_state(shape: RationalPoly, params: BoxParams) -> Result<PolyState, StateError> {
    PolyState::new(shape, params)
}
