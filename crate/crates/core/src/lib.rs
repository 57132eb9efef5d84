//! Spectral analysis of polynomial states of a free particle confined to `[0, L]` by
//! Dirichlet walls.
//!
//! The crate computes `⟨H⟩`, `⟨H²⟩` and `ΔH` along several routes (direct integration,
//! the spectral sum over sine modes, `⟨Hψ, Hψ⟩`, and the boundary-corrected naive value),
//! and tags each with whether the state lies in the domain that route requires. For the
//! parabola `x(L - x)` the naive `⟨ψ, H²ψ⟩` is 0, which would make the variance imaginary;
//! the domain check explains why that number is not a mean value.
//!
//! Internally everything is dimensionless: `x ∈ [0, 1]`, `ħ = m = L = 1`. [`BoxParams`]
//! only rescales reported values.

pub mod domains;
pub mod eigenbasis;
pub mod error;
pub mod expectation;
pub mod parse;
pub mod poly;
pub mod report;
pub mod series;
pub mod state;

pub use domains::{boundary_form_h, boundary_form_h2, domain_check, BoundaryForm, DomainReport};
pub use eigenbasis::{
    eigenvalue, project, reconstruct_partial, sine_moment, spectral_coefficient, spectral_coeffs, EigenMode,
    ModeVector, SineMoment, SpectralCoeffs, Spectrum, StateSpectrum,
};
pub use error::{Error, ExpectationError, ParseError, SeriesError, SpectrumError, StateError};
pub use expectation::{
    diagnose_paradox, mean_h2_boundary_corrected, mean_h2_first_form, mean_h2_naive, mean_h_direct,
    mean_hk_spectral, variance, ExpectationResult, MomentOrder, ParadoxReport, Path,
};
pub use parse::{parse_state, StateExpr};
pub use poly::{Rational, RationalPoly};
pub use series::{quadrature_oracle, tail_bracket_power_law, Parity, TailBracket};
pub use state::{make_state, BoxParams, PolyState};
