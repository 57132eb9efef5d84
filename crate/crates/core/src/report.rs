//! Documents produced by the command-line views, and their text/JSON/CSV renderings.
//!
//! Everything outside the `input` block depends only on the state up to a nonzero scale,
//! so two inputs differing by a constant factor produce identical physical blocks.

use std::fmt::Write as _;

use serde::Serialize;

use crate::domains::domain_check;
use crate::eigenbasis::{natural_energy, reconstruct_partial, spectral_coeffs, spectral_partial_sums, StateSpectrum};
use crate::error::{Error, SeriesError};
use crate::expectation::{
    diagnose_paradox, mean_h2_boundary_corrected, mean_h2_first_form, mean_h2_naive, mean_h_direct,
    mean_hk_spectral, naive_variance, variance, ExpectationResult, MomentOrder, NaiveVariance, ParadoxReport,
    Unit, Variance,
};
use crate::parse::parse_state;
use crate::poly::{serde_rational, Rational};
use crate::state::{make_state, BoxParams, PolyState};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Options {
    pub modes: u64,
    pub tol: f64,
    pub force_naive: bool,
}

impl Default for Options {
    fn default() -> Self {
        Self { modes: 1000, tol: 1e-4, force_naive: false }
    }
}

/// Echo of the input as given, including values that change when the shape is rescaled.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InputEcho {
    pub source: String,
    pub shape: String,
    #[serde(with = "serde_rational")]
    pub norm_sq: Rational,
    #[serde(with = "serde_rational")]
    pub psi_at_0: Rational,
    #[serde(with = "serde_rational")]
    pub psi_at_1: Rational,
    #[serde(with = "serde_rational")]
    pub psi2_at_0: Rational,
    #[serde(with = "serde_rational")]
    pub psi2_at_1: Rational,
}

impl InputEcho {
    fn of(source: &str, state: &PolyState) -> Self {
        let d = domain_check(state);
        Self {
            source: source.to_string(),
            shape: state.shape().to_string(),
            norm_sq: state.norm_sq().clone(),
            psi_at_0: d.psi_at_0,
            psi_at_1: d.psi_at_1,
            psi2_at_0: d.psi2_at_0,
            psi2_at_1: d.psi2_at_1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DomainSummary {
    pub in_domain_h: bool,
    pub in_domain_h2: bool,
    pub h_reason: Option<String>,
    pub h2_reason: Option<String>,
}

impl DomainSummary {
    fn of(state: &PolyState) -> Self {
        let d = domain_check(state);
        Self {
            in_domain_h: d.in_domain_h,
            in_domain_h2: d.in_domain_h2,
            h_reason: d.dirichlet_violation(),
            h2_reason: d.h2_violation(),
        }
    }
}

/// An expectation result plus its value in physical units when those differ from natural ones.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Entry {
    #[serde(flatten)]
    pub result: ExpectationResult,
    pub scaled_value: Option<f64>,
}

impl Entry {
    fn new(result: ExpectationResult, params: &BoxParams) -> Self {
        let scaled_value = (!params.is_natural()).then(|| result.scaled_value(params));
        Self { result, scaled_value }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalyzeReport {
    pub input: InputEcho,
    pub params: BoxParams,
    pub modes: u64,
    pub domain: DomainSummary,
    pub expectations: Vec<Entry>,
    pub variance: Option<Variance>,
    pub naive_variance: Option<NaiveVariance>,
    pub paradox: Option<ParadoxReport>,
    pub warnings: Vec<String>,
}

fn load(source: &str, params: BoxParams) -> Result<PolyState, Error> {
    let shape = parse_state(source)?.expand()?;
    Ok(make_state(shape, params)?)
}

pub fn analyze(source: &str, params: BoxParams, opts: &Options) -> Result<AnalyzeReport, Error> {
    let state = load(source, params)?;
    analyze_state(source, &state, opts)
}

pub fn analyze_state(source: &str, state: &PolyState, opts: &Options) -> Result<AnalyzeReport, Error> {
    let params = *state.params();
    let domain = DomainSummary::of(state);
    let results = vec![
        mean_h_direct(state),
        mean_hk_spectral(state, MomentOrder::First, opts.modes)?,
        mean_h2_naive(state),
        mean_h2_first_form(state),
        mean_h2_boundary_corrected(state),
        mean_hk_spectral(state, MomentOrder::Second, opts.modes)?,
    ];
    let mut warnings = Vec::new();
    for r in &results {
        if r.valid {
            if let Err(e) = r.check_bracket(opts.tol) {
                warnings.push(format!("{} {}: {e}", r.quantity.label(), r.path));
            }
        }
    }
    let (variance, paradox) = if domain.in_domain_h {
        (Some(variance(state)?), Some(diagnose_paradox(state, opts.modes)?))
    } else {
        (None, None)
    };
    Ok(AnalyzeReport {
        input: InputEcho::of(source, state),
        params,
        modes: opts.modes,
        domain,
        expectations: results.into_iter().map(|r| Entry::new(r, &params)).collect(),
        variance,
        naive_variance: opts.force_naive.then(|| naive_variance(state)),
        paradox,
        warnings,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CoeffRow {
    pub n: u64,
    /// Natural units.
    pub energy: f64,
    pub coefficient: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoeffsReport {
    pub input: InputEcho,
    pub modes: u64,
    pub rows: Vec<CoeffRow>,
    pub captured_norm_sq: f64,
    pub tail_bound_norm_sq: f64,
    pub reconstruction_error: f64,
}

pub fn coeffs(source: &str, params: BoxParams, modes: u64) -> Result<CoeffsReport, Error> {
    let state = load(source, params)?;
    let spec = StateSpectrum::new(&state);
    let c = spectral_coeffs(&spec, modes)?;
    let rows = c
        .values
        .iter()
        .enumerate()
        .map(|(i, &coefficient)| {
            let n = i as u64 + 1;
            CoeffRow { n, energy: natural_energy(n), coefficient }
        })
        .collect();
    Ok(CoeffsReport {
        input: InputEcho::of(source, &state),
        modes,
        rows,
        captured_norm_sq: c.captured_norm_sq(),
        tail_bound_norm_sq: c.tail_bound_norm_sq,
        reconstruction_error: reconstruct_partial(&spec, modes)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConvergeRow {
    pub m: u64,
    pub partial_sum: f64,
    pub bracket_low: f64,
    /// Infinite (null in JSON) when the series diverges.
    pub bracket_high: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergeTable {
    pub input: InputEcho,
    pub k: MomentOrder,
    pub unit: Unit,
    pub in_domain_h: bool,
    pub rows: Vec<ConvergeRow>,
}

/// `step, 2·step, …` up to `max`, with `max` itself always included.
pub fn checkpoints(max: u64, step: u64) -> Result<Vec<u64>, SeriesError> {
    if max == 0 || step == 0 {
        return Err(SeriesError::InvalidArgument("max and step must be positive"));
    }
    let mut out: Vec<u64> = (1..=max / step).map(|i| i * step).collect();
    if out.last() != Some(&max) {
        out.push(max);
    }
    Ok(out)
}

pub fn converge(source: &str, params: BoxParams, k: u32, max: u64, step: u64) -> Result<ConvergeTable, Error> {
    let k = MomentOrder::try_from(k)?;
    let points = checkpoints(max, step)?;
    let state = load(source, params)?;
    let spec = StateSpectrum::new(&state);
    let rows = spectral_partial_sums(&spec, k.power(), &points)
        .into_iter()
        .map(|b| ConvergeRow {
            m: b.m,
            partial_sum: b.partial_sum,
            bracket_low: b.lower(),
            bracket_high: b.upper(),
        })
        .collect();
    Ok(ConvergeTable {
        input: InputEcho::of(source, &state),
        k,
        unit: k.unit(),
        in_domain_h: domain_check(&state).in_domain_h,
        rows,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParadoxDocument {
    pub input: InputEcho,
    pub domain: DomainSummary,
    pub paradox: ParadoxReport,
}

pub fn paradox(source: &str, params: BoxParams, modes: u64) -> Result<ParadoxDocument, Error> {
    let state = load(source, params)?;
    Ok(ParadoxDocument {
        input: InputEcho::of(source, &state),
        domain: DomainSummary::of(&state),
        paradox: diagnose_paradox(&state, modes)?,
    })
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    serde_json::to_string_pretty(doc).expect("report types serialize")
}

pub const CONVERGE_CSV_HEADER: &str = "M,partial_sum,bracket_low,bracket_high";

impl ConvergeTable {
    pub fn to_csv(&self) -> String {
        let mut out = format!("{CONVERGE_CSV_HEADER}\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{},{}", r.m, r.partial_sum, r.bracket_low, r.bracket_high);
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("state  {}\n", self.input.source);
        let _ = writeln!(out, "sum    {} over N ≤ M, unit {}", self.k.label(), self.unit.symbol());
        if !self.in_domain_h {
            out.push_str("note   ψ is not in D(H); the series has no finite limit\n");
        }
        let _ = writeln!(out, "{:>10}  {:>22}  {:>22}  {:>22}", "M", "partial sum", "bracket low", "bracket high");
        for r in &self.rows {
            let _ = writeln!(out, "{:>10}  {:>22}  {:>22}  {:>22}", r.m, r.partial_sum, r.bracket_low, r.bracket_high);
        }
        out
    }
}

impl CoeffsReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,energy,coefficient\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{}", r.n, r.energy, r.coefficient);
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("state  {}\n", self.input.source);
        let _ = writeln!(out, "{:>8}  {:>24}  {:>24}", "N", "E_N [ħ²/(m·L²)]", "c_N");
        for r in &self.rows {
            let _ = writeln!(out, "{:>8}  {:>24}  {:>24}", r.n, r.energy, r.coefficient);
        }
        let _ = writeln!(out, "captured norm      {}", self.captured_norm_sq);
        let _ = writeln!(out, "tail bound         {}", self.tail_bound_norm_sq);
        let _ = writeln!(out, "reconstruction err {}", self.reconstruction_error);
        out
    }
}

fn value_with_unit(r: &Entry) -> String {
    let number = match &r.result.exact {
        Some(q) => q.to_string(),
        None => r.result.value.to_string(),
    };
    let mut s = format!("{number} · {}", r.result.unit.symbol());
    if let Some(v) = r.scaled_value {
        let _ = write!(s, " = {v}");
    }
    s
}

fn yes_no(flag: bool, reason: &Option<String>) -> String {
    match (flag, reason) {
        (true, _) => "yes".into(),
        (false, Some(r)) => format!("no ({r})"),
        (false, None) => "no".into(),
    }
}

impl AnalyzeReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "state   {}", self.input.source);
        let _ = writeln!(out, "shape   {}   (norm² {})", self.input.shape, self.input.norm_sq);
        if !self.params.is_natural() {
            let _ = writeln!(out, "params  ħ = {}, m = {}, L = {}", self.params.hbar, self.params.mass, self.params.length);
        }
        let _ = writeln!(out, "in D(H)   {}", yes_no(self.domain.in_domain_h, &self.domain.h_reason));
        let _ = writeln!(out, "in D(H²)  {}", yes_no(self.domain.in_domain_h2, &self.domain.h2_reason));
        out.push('\n');
        for e in &self.expectations {
            let r = &e.result;
            let _ = write!(out, "{:<6} {:<19} {}", r.quantity.label(), r.path.to_string(), value_with_unit(e));
            if let Some([lo, hi]) = r.error_bracket {
                let _ = write!(out, "  in [{lo}, {hi}]");
            }
            if !r.valid {
                let _ = write!(out, "  INVALID: {}", r.invalid_reason.as_deref().unwrap_or("outside domain"));
            }
            out.push('\n');
        }
        if let Some(v) = &self.variance {
            let _ = write!(out, "ΔH     √{} · {} ≈ {}", v.radicand, Unit::Energy.symbol(), v.value);
            if !self.params.is_natural() {
                let _ = write!(out, " = {}", v.scaled_value(&self.params));
            }
            out.push('\n');
        } else {
            out.push_str("ΔH     undefined: ψ is not in D(H)\n");
        }
        if let Some(nv) = &self.naive_variance {
            let _ = writeln!(out, "naive ΔH²  {nv}");
        }
        if let Some(p) = &self.paradox {
            let _ = writeln!(out, "\n{}", p.verdict);
        }
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        out
    }
}

impl ParadoxDocument {
    pub fn to_text(&self) -> String {
        let p = &self.paradox;
        let mut out = format!("state  {}\n", self.input.source);
        for r in [&p.naive_h2, &p.first_form_h2, &p.spectral_h2] {
            let number = r.exact.as_ref().map_or_else(|| r.value.to_string(), ToString::to_string);
            let _ = write!(out, "<H^2>  {:<12} {number}", r.path.to_string());
            if let Some([lo, hi]) = r.error_bracket {
                let _ = write!(out, "  in [{lo}, {hi}]");
            }
            if !r.valid {
                let _ = write!(out, "  INVALID: {}", r.invalid_reason.as_deref().unwrap_or("outside domain"));
            }
            out.push('\n');
        }
        let _ = writeln!(out, "endpoint term       {}", p.boundary_term);
        let _ = writeln!(out, "first-form - naive  {}", p.discrepancy);
        let _ = writeln!(out, "\n{}", p.verdict);
        out
    }
}
