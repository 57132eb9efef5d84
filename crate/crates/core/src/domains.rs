//! Endpoint probes, membership in `D(H)` and `D(H²)`, and the integration-by-parts
//! boundary forms of `H` and `H²`.
//!
//! Every quantity here is an exact rational in natural units (ħ = m = L = 1) and is
//! evaluated on unnormalized shapes. Coefficients are real, so the conjugations in the
//! boundary forms are identities; term names still mark the conjugated slot.

use num_traits::Zero;
use serde::Serialize;

use crate::poly::{rat, serde_rational, to_f64, Rational, RationalPoly};
use crate::state::PolyState;

/// `H p = -(1/2) p''` in natural units.
pub fn hamiltonian_action(p: &RationalPoly) -> RationalPoly {
    p.differentiate(2).scale(&rat(-1, 2))
}

/// `H² p = (1/4) p''''` in natural units.
pub fn hamiltonian_squared_action(p: &RationalPoly) -> RationalPoly {
    p.differentiate(4).scale(&rat(1, 4))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DomainReport {
    #[serde(with = "serde_rational")]
    pub psi_at_0: Rational,
    #[serde(with = "serde_rational")]
    pub psi_at_1: Rational,
    #[serde(with = "serde_rational")]
    pub psi2_at_0: Rational,
    #[serde(with = "serde_rational")]
    pub psi2_at_1: Rational,
    pub in_domain_h: bool,
    pub in_domain_h2: bool,
}

impl DomainReport {
    /// Why `ψ ∉ D(H)`, if it is not.
    pub fn dirichlet_violation(&self) -> Option<String> {
        match (self.psi_at_0.is_zero(), self.psi_at_1.is_zero()) {
            (true, true) => None,
            (false, true) => Some("Dirichlet violated at x = 0".into()),
            (true, false) => Some("Dirichlet violated at x = 1".into()),
            (false, false) => Some("Dirichlet violated at x = 0 and x = 1".into()),
        }
    }

    /// Why `ψ ∉ D(H²)`, if it is not.
    pub fn h2_violation(&self) -> Option<String> {
        if let Some(reason) = self.dirichlet_violation() {
            return Some(reason);
        }
        let detail = match (self.psi2_at_0.is_zero(), self.psi2_at_1.is_zero()) {
            (true, true) => return None,
            (false, false) if self.psi2_at_0 == self.psi2_at_1 => "ψ''(0) = ψ''(L) ≠ 0",
            (false, false) => "ψ''(0) ≠ 0 and ψ''(L) ≠ 0",
            (false, true) => "ψ''(0) ≠ 0",
            (true, false) => "ψ''(L) ≠ 0",
        };
        Some(format!("Hψ violates Dirichlet: {detail}"))
    }
}

/// Exact endpoint values of a shape and its second derivative, with domain verdicts.
pub fn domain_check_shape(shape: &RationalPoly) -> DomainReport {
    let zero = Rational::zero();
    let one = rat(1, 1);
    let second = shape.differentiate(2);
    let psi_at_0 = shape.evaluate(&zero);
    let psi_at_1 = shape.evaluate(&one);
    let psi2_at_0 = second.evaluate(&zero);
    let psi2_at_1 = second.evaluate(&one);
    let in_domain_h = psi_at_0.is_zero() && psi_at_1.is_zero();
    let in_domain_h2 = in_domain_h && psi2_at_0.is_zero() && psi2_at_1.is_zero();
    DomainReport { psi_at_0, psi_at_1, psi2_at_0, psi2_at_1, in_domain_h, in_domain_h2 }
}

pub fn domain_check(state: &PolyState) -> DomainReport {
    domain_check_shape(state.shape())
}

/// One endpoint contribution to a boundary form, prefactor included.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryTerm {
    pub name: &'static str,
    #[serde(with = "serde_rational")]
    pub value: Rational,
    /// Whether the term remains once the left argument satisfies its own domain conditions.
    pub in_reduced_form: bool,
}

/// `⟨Aψ, φ⟩ - ⟨ψ, Aφ⟩` for `A = H` (order 2) or `A = H²` (order 4), as endpoint terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryForm {
    pub order: u8,
    #[serde(with = "serde_rational")]
    pub value: Rational,
    pub terms: Vec<BoundaryTerm>,
}

impl BoundaryForm {
    fn from_terms(order: u8, terms: Vec<BoundaryTerm>) -> Self {
        let value = terms.iter().fold(Rational::zero(), |acc, t| acc + &t.value);
        Self { order, value, terms }
    }

    /// Sum of the terms that survive when `ψ` already lies in the operator's domain.
    pub fn reduced_value(&self) -> Rational {
        self.terms
            .iter()
            .filter(|t| t.in_reduced_form)
            .fold(Rational::zero(), |acc, t| acc + &t.value)
    }

    /// Nonzero terms.
    pub fn surviving(&self) -> impl Iterator<Item = &BoundaryTerm> {
        self.terms.iter().filter(|t| !t.value.is_zero())
    }

    pub fn value_f64(&self) -> f64 {
        to_f64(&self.value)
    }
}

/// Derivatives of a shape at both ends: `ends[k] = (p^(k)(0), p^(k)(1))`.
fn endpoint_jets(p: &RationalPoly, max_order: usize) -> Vec<(Rational, Rational)> {
    let zero = Rational::zero();
    let one = rat(1, 1);
    (0..=max_order)
        .map(|k| {
            let d = p.differentiate(k);
            (d.evaluate(&zero), d.evaluate(&one))
        })
        .collect()
}

/// `(1/2)[ψ* φ' - ψ'* φ]₀¹`, split into its four endpoint terms.
pub fn boundary_form_h(left: &RationalPoly, right: &RationalPoly) -> BoundaryForm {
    let psi = endpoint_jets(left, 1);
    let phi = endpoint_jets(right, 1);
    let half = rat(1, 2);
    let term = |name, v: Rational, reduced| BoundaryTerm { name, value: &half * v, in_reduced_form: reduced };
    BoundaryForm::from_terms(
        2,
        vec![
            term("ψ*(L)φ'(L)", &psi[0].1 * &phi[1].1, false),
            term("-ψ'*(L)φ(L)", -(&psi[1].1 * &phi[0].1), true),
            term("-ψ*(0)φ'(0)", -(&psi[0].0 * &phi[1].0), false),
            term("ψ'*(0)φ(0)", &psi[1].0 * &phi[0].0, true),
        ],
    )
}

/// `(1/4)[ψ'''* φ - ψ''* φ' + ψ'* φ'' - ψ* φ''']₀¹`, all eight endpoint terms.
pub fn boundary_form_h2(left: &RationalPoly, right: &RationalPoly) -> BoundaryForm {
    let psi = endpoint_jets(left, 3);
    let phi = endpoint_jets(right, 3);
    let quarter = rat(1, 4);
    let term = |name, v: Rational, reduced| BoundaryTerm { name, value: &quarter * v, in_reduced_form: reduced };
    BoundaryForm::from_terms(
        4,
        vec![
            term("ψ'''*(L)φ(L)", &psi[3].1 * &phi[0].1, true),
            term("-ψ''*(L)φ'(L)", -(&psi[2].1 * &phi[1].1), false),
            term("ψ'*(L)φ''(L)", &psi[1].1 * &phi[2].1, true),
            term("-ψ*(L)φ'''(L)", -(&psi[0].1 * &phi[3].1), false),
            term("-ψ'''*(0)φ(0)", -(&psi[3].0 * &phi[0].0), true),
            term("ψ''*(0)φ'(0)", &psi[2].0 * &phi[1].0, false),
            term("-ψ'*(0)φ''(0)", -(&psi[1].0 * &phi[2].0), true),
            term("ψ*(0)φ'''(0)", &psi[0].0 * &phi[3].0, false),
        ],
    )
}

/// `(1/4)[ψ'* ψ'' - ψ* ψ''']₀¹` for a single shape: the gap `⟨Hψ, Hψ⟩ - ⟨ψ, H²ψ⟩`
/// before dividing by the norm.
pub fn second_moment_boundary_bracket(p: &RationalPoly) -> Rational {
    let j = endpoint_jets(p, 3);
    let at = |end: fn(&(Rational, Rational)) -> &Rational| {
        end(&j[1]) * end(&j[2]) - end(&j[0]) * end(&j[3])
    };
    rat(1, 4) * (at(|e| &e.1) - at(|e| &e.0))
}
