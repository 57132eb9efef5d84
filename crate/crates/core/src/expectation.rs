//! Every route to `⟨H⟩`, `⟨H²⟩` and `ΔH`, each carrying a domain-validity verdict.
//!
//! `⟨H²⟩` is defined as `⟨Hψ, Hψ⟩` for `ψ ∈ D(H)`. The naive `⟨ψ, H²ψ⟩` is still computed,
//! but it is only a mean value when `ψ ∈ D(H²)`; otherwise it comes back flagged invalid
//! with the violated boundary condition as the reason. Exact paths carry the rational
//! value in natural units; physical values are obtained by multiplying by the unit factor.

use std::fmt;

use num_traits::Signed;
use serde::Serialize;

use crate::domains::{
    domain_check, hamiltonian_action, hamiltonian_squared_action, second_moment_boundary_bracket, DomainReport,
};
use crate::eigenbasis::{spectral_sum, Spectrum, StateSpectrum};
use crate::error::{ExpectationError, SpectrumError};
use crate::poly::{serde_rational, to_f64, Rational};
use crate::state::{BoxParams, PolyState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Path {
    /// `⟨ψ, Aψ⟩` by direct integration.
    DirectNaive,
    /// `Σ E_N^k |c_N|²`, truncated with a certified tail.
    Spectral,
    /// `⟨Hψ, Hψ⟩`.
    FirstForm,
    /// `⟨ψ, H²ψ⟩` plus the endpoint bracket.
    BoundaryCorrected,
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Path::DirectNaive => "direct",
            Path::Spectral => "spectral",
            Path::FirstForm => "first-form",
            Path::BoundaryCorrected => "boundary-corrected",
        })
    }
}

/// Power of `H` whose mean is being computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentOrder {
    First = 1,
    Second = 2,
}

impl MomentOrder {
    pub fn power(self) -> u32 {
        self as u32
    }

    pub fn unit(self) -> Unit {
        match self {
            MomentOrder::First => Unit::Energy,
            MomentOrder::Second => Unit::EnergySquared,
        }
    }

    pub(crate) fn label(self) -> &'static str {
        match self {
            MomentOrder::First => "<H>",
            MomentOrder::Second => "<H^2>",
        }
    }
}

impl TryFrom<u32> for MomentOrder {
    type Error = SpectrumError;

    fn try_from(k: u32) -> Result<Self, Self::Error> {
        match k {
            1 => Ok(MomentOrder::First),
            2 => Ok(MomentOrder::Second),
            other => Err(SpectrumError::InvalidMomentOrder(other)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Unit {
    /// ħ²/(m L²)
    Energy,
    /// ħ⁴/(m² L⁴)
    EnergySquared,
}

impl Unit {
    pub fn factor(self, params: &BoxParams) -> f64 {
        let e = params.energy_unit();
        match self {
            Unit::Energy => e,
            Unit::EnergySquared => e * e,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Unit::Energy => "ħ²/(m·L²)",
            Unit::EnergySquared => "ħ⁴/(m²·L⁴)",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpectationResult {
    pub quantity: MomentOrder,
    pub path: Path,
    /// Natural units; multiply by `unit.factor(params)` for physical units.
    pub value: f64,
    #[serde(with = "serde_rational::option")]
    pub exact: Option<Rational>,
    pub unit: Unit,
    pub valid: bool,
    pub invalid_reason: Option<String>,
    /// Certified `[low, high]` around the limit of a spectral series; `high` is infinite
    /// (serialized as null) when the series diverges.
    pub error_bracket: Option<[f64; 2]>,
    pub note: Option<String>,
}

impl ExpectationResult {
    fn exact(quantity: MomentOrder, path: Path, value: Rational, invalid_reason: Option<String>) -> Self {
        Self {
            quantity,
            path,
            value: to_f64(&value),
            exact: Some(value),
            unit: quantity.unit(),
            valid: invalid_reason.is_none(),
            invalid_reason,
            error_bracket: None,
            note: None,
        }
    }

    pub fn scaled_value(&self, params: &BoxParams) -> f64 {
        self.value * self.unit.factor(params)
    }

    pub fn bracket_width(&self) -> Option<f64> {
        self.error_bracket.map(|[lo, hi]| hi - lo)
    }

    /// Fails with `TruncationTooSmall` when the spectral bracket is wider than `tol`.
    pub fn check_bracket(&self, tol: f64) -> Result<(), ExpectationError> {
        match self.bracket_width() {
            Some(width) if !(width <= tol) => Err(ExpectationError::TruncationTooSmall { width, tol }),
            _ => Ok(()),
        }
    }
}

fn divide(numer: Rational, state: &PolyState) -> Rational {
    numer / state.canonical_norm_sq()
}

/// `⟨ψ, Hψ⟩`; a mean value only for `ψ ∈ D(H)`.
pub fn mean_h_direct(state: &PolyState) -> ExpectationResult {
    let p = state.canonical_shape();
    let value = divide(p.integrate_product(&hamiltonian_action(p)), state);
    let reason = domain_check(state).dirichlet_violation();
    ExpectationResult::exact(MomentOrder::First, Path::DirectNaive, value, reason)
}

/// `⟨ψ, H²ψ⟩ = (1/4)∫ψ ψ''''`; a mean value only for `ψ ∈ D(H²)`.
pub fn mean_h2_naive(state: &PolyState) -> ExpectationResult {
    let p = state.canonical_shape();
    let value = divide(p.integrate_product(&hamiltonian_squared_action(p)), state);
    let reason = domain_check(state).h2_violation();
    ExpectationResult::exact(MomentOrder::Second, Path::DirectNaive, value, reason)
}

/// `⟨Hψ, Hψ⟩ = (1/4)∫(ψ'')²`, the second moment for every `ψ ∈ D(H)`.
pub fn mean_h2_first_form(state: &PolyState) -> ExpectationResult {
    let hp = hamiltonian_action(state.canonical_shape());
    let value = divide(hp.integrate_product(&hp), state);
    let reason = domain_check(state).dirichlet_violation();
    ExpectationResult::exact(MomentOrder::Second, Path::FirstForm, value, reason)
}

/// `⟨ψ, H²ψ⟩ + (1/4)[ψ'ψ'' - ψψ''']₀¹`.
///
/// When `H²ψ = 0` (degree ≤ 3) only the endpoint bracket remains, which with `ψ` vanishing at
/// the walls is `(1/4)[ψ'(L)ψ''(L) - ψ'(0)ψ''(0)]`. The result equals the first-form value exactly.
pub fn mean_h2_boundary_corrected(state: &PolyState) -> ExpectationResult {
    let p = state.canonical_shape();
    let bracket = divide(second_moment_boundary_bracket(p), state);
    let h2_vanishes = hamiltonian_squared_action(p).is_zero();
    let (value, note) = if h2_vanishes {
        (bracket, "H²ψ = 0: endpoint bracket only")
    } else {
        let naive = divide(p.integrate_product(&hamiltonian_squared_action(p)), state);
        (naive + bracket, "naive value plus endpoint bracket")
    };
    let reason = domain_check(state).dirichlet_violation();
    let mut out = ExpectationResult::exact(MomentOrder::Second, Path::BoundaryCorrected, value, reason);
    out.note = Some(note.to_string());
    out
}

/// `Σ_{N≤M} E_N^k c_N²` with the integral-test bracket on the remainder.
pub fn mean_hk_spectral_of<S: Spectrum + ?Sized>(spec: &S, k: MomentOrder, m: u64) -> Result<ExpectationResult, SpectrumError> {
    if m == 0 {
        return Err(SpectrumError::InvalidIndex(m));
    }
    let sum = spectral_sum(spec, k.power(), m);
    let bounded = sum.is_bounded();
    Ok(ExpectationResult {
        quantity: k,
        path: Path::Spectral,
        value: sum.partial_sum,
        exact: None,
        unit: k.unit(),
        valid: bounded,
        invalid_reason: (!bounded).then(|| format!("spectral series for {} diverges", k.label())),
        error_bracket: Some([sum.lower(), sum.upper()]),
        note: Some(format!("{m} modes")),
    })
}

pub fn mean_hk_spectral(state: &PolyState, k: MomentOrder, m: u64) -> Result<ExpectationResult, SpectrumError> {
    let mut out = mean_hk_spectral_of(&StateSpectrum::new(state), k, m)?;
    if let Some(reason) = domain_check(state).dirichlet_violation() {
        out.valid = false;
        out.invalid_reason = Some(format!("spectral series for {} diverges: {reason}", k.label()));
    }
    Ok(out)
}

/// `ΔH = √(⟨Hψ, Hψ⟩ - ⟨ψ, Hψ⟩²)`, with the radicand kept exact.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Variance {
    #[serde(with = "serde_rational")]
    pub radicand: Rational,
    /// Natural units, ħ²/(m L²).
    pub value: f64,
}

impl Variance {
    pub fn scaled_value(&self, params: &BoxParams) -> f64 {
        self.value * params.energy_unit()
    }
}

fn require_domain_h(report: &DomainReport) -> Result<(), ExpectationError> {
    match report.dirichlet_violation() {
        Some(reason) => Err(ExpectationError::DomainViolation(reason)),
        None => Ok(()),
    }
}

pub fn variance(state: &PolyState) -> Result<Variance, ExpectationError> {
    require_domain_h(&domain_check(state))?;
    let h = mean_h_direct(state).exact.expect("exact path");
    let h2 = mean_h2_first_form(state).exact.expect("exact path");
    let radicand = h2 - &h * &h;
    debug_assert!(!radicand.is_negative());
    let value = to_f64(&radicand).sqrt();
    Ok(Variance { radicand, value })
}

/// What the variance formula gives if fed the naive `⟨ψ, H²ψ⟩`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NaiveVariance {
    #[serde(with = "serde_rational")]
    pub radicand: Rational,
    /// `None` when the radicand is negative: no real standard deviation exists.
    pub real_value: Option<f64>,
}

impl fmt::Display for NaiveVariance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.real_value {
            Some(v) => write!(f, "radicand = {}, value = {v}", self.radicand),
            None => write!(f, "radicand = {}, no real value", self.radicand),
        }
    }
}

pub fn naive_variance(state: &PolyState) -> NaiveVariance {
    let h = mean_h_direct(state).exact.expect("exact path");
    let h2 = mean_h2_naive(state).exact.expect("exact path");
    let radicand = h2 - &h * &h;
    let real_value = (!radicand.is_negative()).then(|| to_f64(&radicand).sqrt());
    NaiveVariance { radicand, real_value }
}

/// `ΔH` from truncated spectral sums, with the bracket propagated from both moments.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectralVariance {
    pub value: f64,
    pub low: f64,
    pub high: f64,
}

pub fn spectral_variance<S: Spectrum + ?Sized>(spec: &S, m: u64) -> Result<SpectralVariance, SpectrumError> {
    let h = mean_hk_spectral_of(spec, MomentOrder::First, m)?;
    let h2 = mean_hk_spectral_of(spec, MomentOrder::Second, m)?;
    let [h_lo, h_hi] = h.error_bracket.expect("spectral bracket");
    let [h2_lo, h2_hi] = h2.error_bracket.expect("spectral bracket");
    let radicand = (h2.value - h.value * h.value).max(0.0);
    Ok(SpectralVariance {
        value: radicand.sqrt(),
        low: (h2_lo - h_hi * h_hi).max(0.0).sqrt(),
        high: (h2_hi - h_lo.max(0.0).powi(2)).max(0.0).sqrt(),
    })
}

/// Side-by-side comparison of the `⟨H²⟩` routes and the endpoint term that reconciles them.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParadoxReport {
    pub naive_h2: ExpectationResult,
    pub first_form_h2: ExpectationResult,
    pub spectral_h2: ExpectationResult,
    #[serde(with = "serde_rational")]
    pub boundary_term: Rational,
    #[serde(with = "serde_rational")]
    pub discrepancy: Rational,
    pub paradox: bool,
    pub verdict: String,
}

pub fn diagnose_paradox(state: &PolyState, m: u64) -> Result<ParadoxReport, ExpectationError> {
    let domain = domain_check(state);
    require_domain_h(&domain)?;
    let naive = mean_h2_naive(state);
    let first = mean_h2_first_form(state);
    let spectral = mean_hk_spectral(state, MomentOrder::Second, m.max(1)).expect("m >= 1");
    let boundary_term = divide(second_moment_boundary_bracket(state.canonical_shape()), state);
    let naive_exact = naive.exact.clone().expect("exact path");
    let first_exact = first.exact.clone().expect("exact path");
    let discrepancy = &first_exact - &naive_exact;
    if discrepancy != boundary_term {
        return Err(ExpectationError::IdentityViolated {
            discrepancy: discrepancy.to_string(),
            boundary: boundary_term.to_string(),
        });
    }
    let unit = Unit::EnergySquared.symbol();
    let paradox = !domain.in_domain_h2;
    let verdict = match domain.h2_violation() {
        Some(reason) => format!(
            "paradox: ψ is not in D(H²) ({reason}), so ⟨ψ, H²ψ⟩ = {naive_exact} is not a mean value; \
             ⟨H²⟩ = ⟨Hψ, Hψ⟩ = {first_exact} {unit}, and the endpoint term {boundary_term} accounts for the difference"
        ),
        None => format!(
            "no paradox: ψ is in D(H²), ⟨ψ, H²ψ⟩ = ⟨Hψ, Hψ⟩ = {first_exact} {unit} and the endpoint term vanishes"
        ),
    };
    Ok(ParadoxReport {
        naive_h2: naive,
        first_form_h2: first,
        spectral_h2: spectral,
        boundary_term,
        discrepancy,
        paradox,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigenbasis::{natural_energy, ModeVector};
    use crate::poly::{rat, RationalPoly};
    use num_traits::Zero;
    use crate::state::make_state;
    use proptest::prelude::*;

    fn state(coeffs: &[i64]) -> PolyState {
        make_state(RationalPoly::from_ints(coeffs), BoxParams::default()).unwrap()
    }

    fn parabola() -> PolyState {
        state(&[0, 1, -1])
    }

    fn sextic() -> PolyState {
        state(&[0, 0, 0, 1, -3, 3, -1])
    }

    #[test]
    fn parabola_exact_paths() {
        let s = parabola();
        let h = mean_h_direct(&s);
        assert_eq!(h.exact, Some(rat(5, 1)));
        assert!(h.valid);
        let naive = mean_h2_naive(&s);
        assert_eq!(naive.exact, Some(rat(0, 1)));
        assert!(!naive.valid);
        assert_eq!(naive.invalid_reason.as_deref(), Some("Hψ violates Dirichlet: ψ''(0) = ψ''(L) ≠ 0"));
        assert_eq!(mean_h2_first_form(&s).exact, Some(rat(30, 1)));
        let bc = mean_h2_boundary_corrected(&s);
        assert_eq!(bc.exact, Some(rat(30, 1)));
        assert!(bc.valid);
    }

    #[test]
    fn sextic_paths_agree() {
        let s = sextic();
        let naive = mean_h2_naive(&s);
        assert!(naive.valid);
        assert_eq!(naive.exact, mean_h2_first_form(&s).exact);
        assert_eq!(naive.exact, mean_h2_boundary_corrected(&s).exact);
        let direct = mean_h_direct(&s).value;
        let spectral = mean_hk_spectral(&s, MomentOrder::First, 2000).unwrap();
        assert!((direct - spectral.value).abs() < 1e-8);
    }

    #[test]
    fn linear_state_is_invalid_everywhere() {
        let s = state(&[0, 1]);
        let h = mean_h_direct(&s);
        assert!(!h.valid);
        assert_eq!(h.invalid_reason.as_deref(), Some("Dirichlet violated at x = 1"));
        assert!(!mean_h2_first_form(&s).valid);
        assert!(!mean_h2_boundary_corrected(&s).valid);
        let sp = mean_hk_spectral(&s, MomentOrder::First, 50).unwrap();
        assert!(!sp.valid);
        assert_eq!(sp.error_bracket.unwrap()[1], f64::INFINITY);
        assert!(matches!(variance(&s), Err(ExpectationError::DomainViolation(_))));
        assert!(diagnose_paradox(&s, 10).is_err());
    }

    #[test]
    fn parabola_spectral_sums() {
        let s = parabola();
        let h = mean_hk_spectral(&s, MomentOrder::First, 100).unwrap();
        let [lo, hi] = h.error_bracket.unwrap();
        assert!((h.value - 5.0).abs() <= 1e-5);
        assert!(lo <= 5.0 && 5.0 <= hi);
        assert!(hi - lo <= 1e-5);
        let h2 = mean_hk_spectral(&s, MomentOrder::Second, 10_000).unwrap();
        assert!(h2.value >= 29.99 && h2.value < 30.0);
        let [lo, hi] = h2.error_bracket.unwrap();
        assert!(lo <= 30.0 && 30.0 <= hi);
        assert!(h2.check_bracket(1e-3).is_ok());
        assert!(matches!(h2.check_bracket(1e-9), Err(ExpectationError::TruncationTooSmall { .. })));
    }

    #[test]
    fn single_mode_vector() {
        let e1 = ModeVector::basis(1).unwrap();
        let h2 = mean_hk_spectral_of(&e1, MomentOrder::Second, 5).unwrap();
        assert_eq!(h2.value, natural_energy(1).powi(2));
        let v = spectral_variance(&e1, 5).unwrap();
        assert_eq!(v.value, 0.0);
    }

    #[test]
    fn parabola_variance() {
        let v = variance(&parabola()).unwrap();
        assert_eq!(v.radicand, rat(5, 1));
        assert!((v.value - 5f64.sqrt()).abs() < 1e-12);
        let naive = naive_variance(&parabola());
        assert_eq!(naive.radicand, rat(-25, 1));
        assert_eq!(naive.real_value, None);
        assert_eq!(naive.to_string(), "radicand = -25, no real value");
    }

    #[test]
    fn sextic_variance_two_ways() {
        let s = sextic();
        let exact = variance(&s).unwrap().value;
        let spec = spectral_variance(&StateSpectrum::new(&s), 10_000).unwrap();
        assert!(spec.low <= exact && exact <= spec.high, "{spec:?} vs {exact}");
    }

    #[test]
    fn paradox_reports() {
        let r = diagnose_paradox(&parabola(), 1000).unwrap();
        assert!(r.paradox);
        assert_eq!(r.boundary_term, rat(30, 1));
        assert_eq!(r.discrepancy, rat(30, 1));
        assert!(r.verdict.contains("ψ''(0) = ψ''(L) ≠ 0"));
        let r = diagnose_paradox(&sextic(), 1000).unwrap();
        assert!(!r.paradox);
        assert!(r.boundary_term.is_zero());
        assert!(r.verdict.starts_with("no paradox"));
    }

    #[test]
    fn moment_order_parsing() {
        assert_eq!(MomentOrder::try_from(2).unwrap(), MomentOrder::Second);
        assert_eq!(MomentOrder::try_from(3), Err(SpectrumError::InvalidMomentOrder(3)));
    }

    fn arb_dirichlet_state() -> impl Strategy<Value = PolyState> {
        prop::collection::vec((-9i64..=9, 1i64..=4), 1..=6).prop_filter_map("zero", |cs| {
            let q = RationalPoly::from_coeffs(cs.into_iter().map(|(n, d)| rat(n, d)).collect());
            let p = &q * &RationalPoly::from_ints(&[0, 1, -1]);
            make_state(p, BoxParams::default()).ok()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn spectral_brackets_contain_exact_values(s in arb_dirichlet_state(), m in 1u64..400) {
            let h = mean_h_direct(&s).value;
            let h2 = mean_h2_first_form(&s).value;
            let [lo, hi] = mean_hk_spectral(&s, MomentOrder::First, m).unwrap().error_bracket.unwrap();
            prop_assert!(lo <= h && h <= hi, "k=1 m={} [{}, {}] vs {}", m, lo, hi, h);
            let [lo, hi] = mean_hk_spectral(&s, MomentOrder::Second, m).unwrap().error_bracket.unwrap();
            prop_assert!(lo <= h2 && h2 <= hi, "k=2 m={} [{}, {}] vs {}", m, lo, hi, h2);
        }

        #[test]
        fn variance_radicand_nonnegative(s in arb_dirichlet_state()) {
            let v = variance(&s).unwrap();
            prop_assert!(!v.radicand.is_negative());
            prop_assert!(!v.radicand.is_zero());
        }

        #[test]
        fn boundary_corrected_matches_first_form(s in arb_dirichlet_state()) {
            prop_assert_eq!(mean_h2_boundary_corrected(&s).exact, mean_h2_first_form(&s).exact);
        }
    }
}
