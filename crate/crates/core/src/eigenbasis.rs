//! The Dirichlet sine eigenbasis `ψ_N(x) = √2 sin(Nπx)` and spectral data of states.
//!
//! Overlaps of polynomial states with the basis are assembled from exact sine moments
//! of monomials, so the only floating-point step is evaluating a short series in
//! `1/(Nπ)` at the end. The same representation yields rigorous envelopes `|c_N| ≤ G/(πN)^k`
//! that bound the tails of every truncated spectral sum.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{SeriesError, SpectrumError};
use crate::poly::{to_f64, Rational, RationalPoly};
use crate::series::{summation_allowance, tail_bracket_power_law, Parity, TailBracket, PI};
use crate::state::{BoxParams, PolyState};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EigenMode {
    pub index: u64,
    /// In units of ħ²/(m L²).
    pub energy: f64,
}

impl EigenMode {
    pub fn new(index: u64) -> Result<Self, SpectrumError> {
        if index == 0 {
            return Err(SpectrumError::InvalidIndex(index));
        }
        Ok(Self { index, energy: natural_energy(index) })
    }

    /// `ψ_N(x)` on the unit interval.
    pub fn wavefunction(&self, x: f64) -> f64 {
        std::f64::consts::SQRT_2 * (self.index as f64 * PI * x).sin()
    }
}

/// `E_N = N²π²/2` in units of ħ²/(m L²).
pub fn natural_energy(n: u64) -> f64 {
    let w = n as f64 * PI;
    0.5 * w * w
}

/// `E_N = (ħ²/2m)(Nπ/L)²`.
pub fn eigenvalue(n: u64, params: &BoxParams) -> Result<f64, SpectrumError> {
    Ok(EigenMode::new(n)?.energy * params.energy_unit())
}

/// Closed form of `∫₀¹ x^m sin(Nπx) dx` valid for every `N ≥ 1` at once:
/// `Σ_k base[k] / (Nπ)^k + (-1)^N Σ_k alternating[k] / (Nπ)^k`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SineMoment {
    pub base: Vec<Rational>,
    pub alternating: Vec<Rational>,
}

impl SineMoment {
    fn add_scaled(&mut self, other: &SineMoment, factor: &Rational, shift: usize) {
        for (dst, src) in [(&mut self.base, &other.base), (&mut self.alternating, &other.alternating)] {
            if dst.len() < src.len() + shift {
                dst.resize(src.len() + shift, Rational::zero());
            }
            for (k, c) in src.iter().enumerate() {
                dst[k + shift] += c * factor;
            }
        }
    }

    /// The moment of `Σ p_m x^m`, i.e. the linear combination of monomial moments.
    pub fn of_poly(p: &RationalPoly) -> Self {
        let mut out = SineMoment::default();
        for (m, moment) in sine_moments_upto(p.coeffs().len()).iter().enumerate() {
            let c = p.coeff(m);
            if !c.is_zero() {
                out.add_scaled(moment, &c, 0);
            }
        }
        out
    }

    /// Series coefficients in `1/(Nπ)` for one parity of `N`, exact.
    pub fn for_parity(&self, odd: bool) -> Vec<Rational> {
        let n = self.base.len().max(self.alternating.len());
        let mut out: Vec<Rational> = (0..n)
            .map(|k| {
                let b = self.base.get(k).cloned().unwrap_or_else(Rational::zero);
                let a = self.alternating.get(k).cloned().unwrap_or_else(Rational::zero);
                if odd {
                    b - a
                } else {
                    b + a
                }
            })
            .collect();
        while out.last().is_some_and(Zero::is_zero) {
            out.pop();
        }
        out
    }

    pub fn evaluate(&self, n: u64) -> f64 {
        let coeffs: Vec<f64> = self.for_parity(n % 2 == 1).iter().map(to_f64).collect();
        inverse_series(&coeffs, 1.0 / (n as f64 * PI))
    }
}

/// `Σ_k c[k] u^k` by Horner.
fn inverse_series(coeffs: &[f64], u: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * u + c)
}

/// Moments `∫ x^m sin(Nπx)` for `m < count`.
///
/// Integrating by parts twice, writing `ω = Nπ` and `s = (-1)^N`:
/// `S_0 = (1 - s)/ω`, `S_1 = -s/ω`, `S_m = -s/ω - m(m-1)/ω² · S_{m-2}`.
fn sine_moments_upto(count: usize) -> Vec<SineMoment> {
    let mut out: Vec<SineMoment> = Vec::with_capacity(count);
    for m in 0..count {
        let mut s = SineMoment {
            base: vec![Rational::zero(), if m == 0 { Rational::from_integer(1.into()) } else { Rational::zero() }],
            alternating: vec![Rational::zero(), Rational::from_integer((-1).into())],
        };
        if m >= 2 {
            let factor = -Rational::from_integer(BigInt::from(m * (m - 1)));
            let prev = out[m - 2].clone();
            s.add_scaled(&prev, &factor, 2);
        }
        out.push(s);
    }
    out
}

/// Closed-form sine moment of `x^m`.
pub fn sine_moment(m: usize) -> SineMoment {
    sine_moments_upto(m + 1).pop().expect("nonempty")
}

/// Anything with spectral coefficients `c_N = ⟨ψ_N, ψ⟩` of a normalized state.
pub trait Spectrum {
    fn coefficient(&self, n: u64) -> f64;

    /// Bounds on `Σ_{N>m} E_N^power c_N²`, energies in natural units.
    fn tail(&self, m: u64, power: u32) -> Result<(f64, f64), SeriesError>;

    /// `Some(N)` when the state is exactly `±ψ_N`.
    fn single_mode(&self) -> Option<u64> {
        None
    }
}

/// Spectral view of a polynomial state, with the exact overlap series precomputed.
#[derive(Clone, Debug)]
pub struct StateSpectrum {
    odd: Vec<f64>,
    even: Vec<f64>,
    prefactor: f64,
}

impl StateSpectrum {
    pub fn new(state: &PolyState) -> Self {
        let moment = SineMoment::of_poly(state.canonical_shape());
        let to_floats = |v: Vec<Rational>| v.iter().map(to_f64).collect::<Vec<_>>();
        let norm = to_f64(state.canonical_norm_sq());
        Self {
            odd: to_floats(moment.for_parity(true)),
            even: to_floats(moment.for_parity(false)),
            prefactor: state.phase() * (2.0 / norm).sqrt(),
        }
    }

    fn series(&self, n: u64) -> &[f64] {
        if n % 2 == 1 {
            &self.odd
        } else {
            &self.even
        }
    }

    /// Upper and lower constants `C` with `C_lo/N^p ≤ E_N^power c_N² ≤ C_hi/N^p` for
    /// every admissible `N ≥ n0`, together with `p`.
    fn envelope(coeffs: &[f64], prefactor: f64, n0: u64, power: u32) -> Option<(f64, f64, f64)> {
        let k0 = coeffs.iter().position(|c| *c != 0.0)?;
        let w0 = n0 as f64 * PI;
        let rest: f64 = coeffs[k0 + 1..]
            .iter()
            .enumerate()
            .map(|(j, c)| c.abs() * w0.powi(-(j as i32 + 1)))
            .sum();
        let lead = coeffs[k0].abs();
        let upper = lead + rest;
        let lower = (lead - rest).max(0.0);
        // c_N² (N²π²/2)^power = pref² X² π^{2 power} N^{2 power} / 2^power
        let scale = prefactor * prefactor * PI.powi(2 * power as i32 - 2 * k0 as i32)
            / 2f64.powi(power as i32);
        let p = 2.0 * k0 as f64 - 2.0 * power as f64;
        Some((scale * lower * lower, scale * upper * upper, p))
    }
}

impl Spectrum for StateSpectrum {
    fn coefficient(&self, n: u64) -> f64 {
        self.prefactor * inverse_series(self.series(n), 1.0 / (n as f64 * PI))
    }

    fn tail(&self, m: u64, power: u32) -> Result<(f64, f64), SeriesError> {
        let mut low = 0.0;
        let mut high = 0.0;
        for (parity, coeffs) in [(Parity::Odd, &self.odd), (Parity::Even, &self.even)] {
            let n0 = parity.first_after(m);
            let Some((c_lo, c_hi, p)) = Self::envelope(coeffs, self.prefactor, n0, power) else {
                continue;
            };
            let (lo, _) = tail_bracket_power_law(c_lo, p, m, parity)?;
            let (_, hi) = tail_bracket_power_law(c_hi, p, m, parity)?;
            low += lo;
            high += hi;
        }
        // The envelope constants are themselves rounded; widen by a few ulps.
        Ok((low * (1.0 - 1e-13), high * (1.0 + 1e-13)))
    }
}

/// A state given directly by finitely many eigen-coefficients, normalized on construction.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeVector {
    coeffs: Vec<f64>,
}

impl ModeVector {
    /// `coeffs[0]` is `c_1`.
    pub fn new(coeffs: Vec<f64>) -> Result<Self, SpectrumError> {
        let norm_sq: f64 = coeffs.iter().map(|c| c * c).sum();
        if !(norm_sq > 0.0 && norm_sq.is_finite()) {
            return Err(SpectrumError::ZeroVector);
        }
        let norm = norm_sq.sqrt();
        Ok(Self { coeffs: coeffs.into_iter().map(|c| c / norm).collect() })
    }

    /// The eigenfunction `ψ_n` itself.
    pub fn basis(n: u64) -> Result<Self, SpectrumError> {
        if n == 0 {
            return Err(SpectrumError::InvalidIndex(n));
        }
        let mut coeffs = vec![0.0; n as usize];
        coeffs[n as usize - 1] = 1.0;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }
}

impl Spectrum for ModeVector {
    fn coefficient(&self, n: u64) -> f64 {
        match n {
            0 => 0.0,
            _ => self.coeffs.get(n as usize - 1).copied().unwrap_or(0.0),
        }
    }

    fn tail(&self, m: u64, power: u32) -> Result<(f64, f64), SeriesError> {
        let rest: f64 = (m + 1..=self.coeffs.len() as u64)
            .map(|n| {
                let c = self.coefficient(n);
                natural_energy(n).powi(power as i32) * c * c
            })
            .sum();
        Ok((rest, rest))
    }

    fn single_mode(&self) -> Option<u64> {
        let mut nonzero = self.coeffs.iter().enumerate().filter(|(_, c)| **c != 0.0);
        match (nonzero.next(), nonzero.next()) {
            (Some((i, _)), None) => Some(i as u64 + 1),
            _ => None,
        }
    }
}

/// `c_N` of a polynomial state. Builds the overlap series on each call; use
/// [`StateSpectrum`] when many coefficients are needed.
pub fn spectral_coefficient(state: &PolyState, n: u64) -> Result<f64, SpectrumError> {
    if n == 0 {
        return Err(SpectrumError::InvalidIndex(n));
    }
    Ok(StateSpectrum::new(state).coefficient(n))
}

/// `c_1..c_M` with a bound on the missing norm `Σ_{N>M} c_N²`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralCoeffs {
    pub values: Vec<f64>,
    pub truncation: u64,
    pub tail_bound_norm_sq: f64,
}

impl SpectralCoeffs {
    pub fn captured_norm_sq(&self) -> f64 {
        self.values.iter().map(|c| c * c).sum()
    }
}

pub fn spectral_coeffs<S: Spectrum + ?Sized>(spec: &S, m: u64) -> Result<SpectralCoeffs, SpectrumError> {
    if m == 0 {
        return Err(SpectrumError::InvalidIndex(m));
    }
    let values: Vec<f64> = (1..=m).map(|n| spec.coefficient(n)).collect();
    let captured: f64 = values.iter().map(|c| c * c).sum();
    let (_, high) = spec.tail(m, 0).expect("norm tail of a square-integrable state converges");
    Ok(SpectralCoeffs {
        values,
        truncation: m,
        tail_bound_norm_sq: high + summation_allowance(m, captured),
    })
}

/// The image of a state under `P_N`: the coefficient `c_N` along `ψ_N`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Projection {
    pub mode: u64,
    pub coefficient: f64,
    /// Eigenvalue of `P_N` when the state is one of its eigenvectors (1 for `ψ_N`, 0 when orthogonal).
    pub projector_eigenvalue: Option<f64>,
}

impl Projection {
    /// `(P_N ψ)(x) = c_N ψ_N(x)`.
    pub fn evaluate(&self, x: f64) -> f64 {
        self.coefficient * std::f64::consts::SQRT_2 * (self.mode as f64 * PI * x).sin()
    }

    /// Coefficient vector `c_N e_N` of the projected state.
    pub fn as_coefficients(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.mode as usize];
        out[self.mode as usize - 1] = self.coefficient;
        out
    }
}

pub fn project<S: Spectrum + ?Sized>(spec: &S, n: u64) -> Result<Projection, SpectrumError> {
    if n == 0 {
        return Err(SpectrumError::InvalidIndex(n));
    }
    let coefficient = spec.coefficient(n);
    let projector_eigenvalue = if spec.single_mode() == Some(n) {
        Some(1.0)
    } else if coefficient == 0.0 {
        Some(0.0)
    } else {
        None
    };
    Ok(Projection { mode: n, coefficient, projector_eigenvalue })
}

/// `P_N` acting on a coefficient vector (`coeffs[0]` is `c_1`); result has length `max(len, N)`.
pub fn project_coefficients(coeffs: &[f64], n: u64) -> Vec<f64> {
    let len = coeffs.len().max(n as usize);
    (0..len)
        .map(|i| if i as u64 + 1 == n { coeffs.get(i).copied().unwrap_or(0.0) } else { 0.0 })
        .collect()
}

/// Spectral decomposition `Σ E_N^k P_N` applied to a coefficient vector.
pub fn apply_energy_power(coeffs: &[f64], k: u32, params: &BoxParams) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| (natural_energy(i as u64 + 1) * params.energy_unit()).powi(k as i32) * c)
        .collect()
}

/// `‖ψ - Σ_{N≤M} c_N ψ_N‖² = 1 - Σ_{N≤M} c_N²`.
pub fn reconstruct_partial<S: Spectrum + ?Sized>(spec: &S, m: u64) -> Result<f64, SpectrumError> {
    if m == 0 {
        return Err(SpectrumError::InvalidIndex(m));
    }
    let captured: f64 = (1..=m).map(|n| spec.coefficient(n).powi(2)).sum();
    Ok((1.0 - captured).max(0.0))
}

/// Partial sums of `Σ E_N^power c_N²` (natural units) with certified tails, at each checkpoint.
///
/// Checkpoints must be increasing. Summation runs sequentially in `N`, so the partial sums
/// are nondecreasing across checkpoints. Divergent tails are reported with an infinite upper bound.
pub fn spectral_partial_sums<S: Spectrum + ?Sized>(spec: &S, power: u32, checkpoints: &[u64]) -> Vec<TailBracket> {
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut sum = 0.0;
    let mut n = 0u64;
    for &m in checkpoints {
        while n < m {
            n += 1;
            let c = spec.coefficient(n);
            sum += natural_energy(n).powi(power as i32) * c * c;
        }
        let (low_tail, high_tail) = spec.tail(m, power).unwrap_or((0.0, f64::INFINITY));
        out.push(TailBracket {
            partial_sum: sum,
            low_tail,
            high_tail,
            m,
            rounding: summation_allowance(m, sum),
        });
    }
    out
}

pub fn spectral_sum<S: Spectrum + ?Sized>(spec: &S, power: u32, m: u64) -> TailBracket {
    spectral_partial_sums(spec, power, &[m])[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;
    use crate::series::quadrature_oracle;
    use crate::state::make_state;

    fn parabola() -> PolyState {
        make_state(RationalPoly::from_ints(&[0, 1, -1]), BoxParams::default()).unwrap()
    }

    #[test]
    fn eigenvalues() {
        let natural = BoxParams::default();
        let e1 = eigenvalue(1, &natural).unwrap();
        assert!((e1 - PI * PI / 2.0).abs() < 1e-15);
        assert!((e1 - 4.934_802_200_544_679).abs() < 1e-12);
        assert_eq!(eigenvalue(2, &natural).unwrap(), 4.0 * e1);
        let long = BoxParams::new(1.0, 1.0, 2.0).unwrap();
        assert!((eigenvalue(3, &long).unwrap() - 9.0 * PI * PI / 8.0).abs() < 1e-13);
        assert_eq!(eigenvalue(0, &natural), Err(SpectrumError::InvalidIndex(0)));
    }

    #[test]
    fn energies_increase() {
        let mut prev = 0.0;
        for n in 1..100 {
            let e = EigenMode::new(n).unwrap().energy;
            assert!(e > prev);
            prev = e;
        }
    }

    #[test]
    fn low_order_moments() {
        assert!((sine_moment(0).evaluate(1) - 2.0 / PI).abs() < 1e-15);
        for n in 1..6u64 {
            let s = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert!((sine_moment(1).evaluate(n) + s / (n as f64 * PI)).abs() < 1e-15);
        }
        let want = (PI * PI - 4.0) / PI.powi(3);
        assert!((sine_moment(2).evaluate(1) - want).abs() < 1e-15);
        // x^1 moment is exactly -(-1)^N / (Nπ)
        assert_eq!(sine_moment(1).base, vec![rat(0, 1), rat(0, 1)]);
        assert_eq!(sine_moment(1).alternating, vec![rat(0, 1), rat(-1, 1)]);
    }

    #[test]
    fn moments_agree_with_quadrature() {
        for m in 0..=12usize {
            let mom = sine_moment(m);
            for n in [1u64, 2, 3, 7, 20] {
                let oracle = quadrature_oracle(|x| x.powi(m as i32) * (n as f64 * PI * x).sin(), 1e-14).unwrap();
                assert!((mom.evaluate(n) - oracle).abs() < 1e-12, "m={m} n={n}");
            }
        }
    }

    #[test]
    fn parabola_coefficients() {
        let st = parabola();
        let c1 = spectral_coefficient(&st, 1).unwrap();
        assert!((c1 - 4.0 * 60f64.sqrt() / PI.powi(3)).abs() < 1e-14);
        assert!((c1 * c1 - 960.0 / PI.powi(6)).abs() < 1e-14);
        assert_eq!(spectral_coefficient(&st, 2).unwrap(), 0.0);
        assert_eq!(spectral_coefficient(&st, 0), Err(SpectrumError::InvalidIndex(0)));
        let oracle = quadrature_oracle(
            |x| 30f64.sqrt() * x * (1.0 - x) * std::f64::consts::SQRT_2 * (PI * x).sin(),
            1e-14,
        )
        .unwrap();
        assert!((c1 - oracle).abs() < 1e-12);
    }

    #[test]
    fn basis_projections() {
        let psi3 = ModeVector::basis(3).unwrap();
        let p = project(&psi3, 3).unwrap();
        assert_eq!(p.coefficient, 1.0);
        assert_eq!(p.projector_eigenvalue, Some(1.0));
        let q = project(&psi3, 5).unwrap();
        assert_eq!(q.coefficient, 0.0);
        assert_eq!(q.projector_eigenvalue, Some(0.0));
        let r = project(&StateSpectrum::new(&parabola()), 2).unwrap();
        assert_eq!(r.coefficient, 0.0);
        let s = project(&StateSpectrum::new(&parabola()), 1).unwrap();
        assert_eq!(s.projector_eigenvalue, None);
    }

    #[test]
    fn projector_algebra() {
        let v = vec![0.3, -0.2, 0.7, 0.1];
        for n in 1..=5u64 {
            let pn = project_coefficients(&v, n);
            assert_eq!(project_coefficients(&pn, n), pn, "idempotence");
            for m in 1..=5u64 {
                let pmn = project_coefficients(&pn, m);
                let expected: Vec<f64> = if m == n { pn.clone() } else { vec![0.0; pmn.len()] };
                assert_eq!(pmn, expected);
            }
        }
        let proj = project(&ModeVector::new(v.clone()).unwrap(), 3).unwrap();
        let again = project(&ModeVector::new(proj.as_coefficients()).unwrap(), 3).unwrap();
        assert_eq!(again.coefficient, 1.0);
    }

    #[test]
    fn eigenvalue_equation_on_coefficients() {
        let params = BoxParams::new(1.0, 2.0, 1.5).unwrap();
        for n in 1..=6u64 {
            let psi = ModeVector::basis(n).unwrap();
            let image = apply_energy_power(psi.coeffs(), 1, &params);
            let e = eigenvalue(n, &params).unwrap();
            let scaled: Vec<f64> = psi.coeffs().iter().map(|c| e * c).collect();
            assert_eq!(image, scaled);
        }
    }

    #[test]
    fn reconstruction_error() {
        let spec = StateSpectrum::new(&parabola());
        let e1 = reconstruct_partial(&spec, 1).unwrap();
        assert!((e1 - (1.0 - 960.0 / PI.powi(6))).abs() < 1e-14);
        assert!((e1 - 1.45e-3).abs() < 1e-5);
        assert!(reconstruct_partial(&spec, 9).unwrap() <= 1e-5);
        let mut prev = f64::INFINITY;
        for m in 1..200 {
            let e = reconstruct_partial(&spec, m).unwrap();
            assert!(e <= prev);
            prev = e;
        }
        assert!(prev < 1e-12);
    }

    #[test]
    fn parabola_tail_envelope_is_exact_power_law() {
        // c_N² = 960/(π⁶N⁶) for odd N, so the tail bracket must contain the summed tail.
        let spec = StateSpectrum::new(&parabola());
        for m in [1u64, 4, 9, 30] {
            let (lo, hi) = spec.tail(m, 0).unwrap();
            let direct: f64 = (m + 1..200_000).filter(|n| n % 2 == 1).map(|n| 960.0 / (PI.powi(6) * (n as f64).powi(6))).sum();
            assert!(lo <= direct && direct <= hi, "m={m}: {lo} {direct} {hi}");
        }
    }

    #[test]
    fn mode_vector_rejects_zero() {
        assert_eq!(ModeVector::new(vec![0.0, 0.0]), Err(SpectrumError::ZeroVector));
        assert!(ModeVector::basis(0).is_err());
    }
}
