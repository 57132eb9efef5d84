//! Rigorous brackets for tails of positive series, and the numeric quadrature used
//! as an independent check on every closed-form integral.

use serde::Serialize;

use crate::error::SeriesError;

pub const PI: f64 = std::f64::consts::PI;

/// Which indices a tail sum runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    All,
    Odd,
    Even,
}

impl Parity {
    /// First admissible index strictly greater than `m`.
    pub fn first_after(self, m: u64) -> u64 {
        let n = m + 1;
        match self {
            Parity::All => n,
            Parity::Odd if n % 2 == 1 => n,
            Parity::Even if n % 2 == 0 => n,
            _ => n + 1,
        }
    }

    fn stride(self) -> f64 {
        match self {
            Parity::All => 1.0,
            Parity::Odd | Parity::Even => 2.0,
        }
    }

    pub fn admits(self, n: u64) -> bool {
        match self {
            Parity::All => true,
            Parity::Odd => n % 2 == 1,
            Parity::Even => n % 2 == 0,
        }
    }
}

/// Bounds on `Σ_{N>M, N in parity} C / N^p` from the integral test.
///
/// With `N₀` the first admissible index and stride `s`, the tail lies in
/// `[C N₀^{1-p} / (s (p-1)),  that + C / N₀^p]`.
pub fn tail_bracket_power_law(c: f64, p: f64, m: u64, parity: Parity) -> Result<(f64, f64), SeriesError> {
    if !(c.is_finite() && c >= 0.0) {
        return Err(SeriesError::InvalidArgument("coefficient must be finite and nonnegative"));
    }
    if c == 0.0 {
        return Ok((0.0, 0.0));
    }
    if !(p > 1.0) {
        return Err(SeriesError::DivergentTail { exponent: p });
    }
    let n0 = parity.first_after(m) as f64;
    let low = c * n0.powf(1.0 - p) / (parity.stride() * (p - 1.0));
    let high = low + c * n0.powf(-p);
    Ok((low, high))
}

/// A truncated positive series together with certified bounds on its limit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TailBracket {
    pub partial_sum: f64,
    pub low_tail: f64,
    pub high_tail: f64,
    pub m: u64,
    /// Allowance for floating-point error in the partial sum itself.
    pub rounding: f64,
}

impl TailBracket {
    pub fn lower(&self) -> f64 {
        self.partial_sum + self.low_tail - self.rounding
    }

    pub fn upper(&self) -> f64 {
        self.partial_sum + self.high_tail + self.rounding
    }

    pub fn width(&self) -> f64 {
        self.upper() - self.lower()
    }

    pub fn contains(&self, value: f64) -> bool {
        self.lower() <= value && value <= self.upper()
    }

    pub fn is_bounded(&self) -> bool {
        self.high_tail.is_finite()
    }
}

/// Rounding allowance for a sequential sum of `terms` nonnegative values totalling `sum`.
pub(crate) fn summation_allowance(terms: u64, sum: f64) -> f64 {
    // Each term carries a few ulps of its own error on top of the running-sum error.
    (terms as f64 + 16.0) * 4.0 * f64::EPSILON * sum.abs()
}

/// Adaptive composite Gauss–Legendre integration over `[0, 1]`.
#[derive(Clone, Debug)]
pub struct Quadrature {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    tol: f64,
    initial_panels: usize,
    max_depth: usize,
}

impl Quadrature {
    pub fn new(tol: f64) -> Self {
        let (nodes, weights) = gauss_legendre(16);
        Self { nodes, weights, tol, initial_panels: 8, max_depth: 40 }
    }

    /// Start from this many uniform panels; useful for strongly oscillating integrands.
    pub fn with_initial_panels(mut self, panels: usize) -> Self {
        self.initial_panels = panels.max(1);
        self
    }

    pub fn with_max_depth(mut self, depth: usize) -> Self {
        self.max_depth = depth;
        self
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> Result<f64, SeriesError> {
        let panels = self.initial_panels;
        let h = 1.0 / panels as f64;
        let local_tol = self.tol / panels as f64;
        let mut total = 0.0;
        for i in 0..panels {
            let a = i as f64 * h;
            let b = if i + 1 == panels { 1.0 } else { (i + 1) as f64 * h };
            let whole = self.panel(&f, a, b);
            total += self.refine(&f, a, b, whole, local_tol, 0)?;
        }
        Ok(total)
    }

    fn panel<F: Fn(f64) -> f64>(&self, f: &F, a: f64, b: f64) -> f64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let s: f64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(t, w)| w * f(mid + half * t))
            .sum();
        s * half
    }

    fn refine<F: Fn(f64) -> f64>(
        &self,
        f: &F,
        a: f64,
        b: f64,
        whole: f64,
        tol: f64,
        depth: usize,
    ) -> Result<f64, SeriesError> {
        let mid = 0.5 * (a + b);
        let left = self.panel(f, a, mid);
        let right = self.panel(f, mid, b);
        let split = left + right;
        // Below ~1e-17 per panel the difference is pure rounding noise.
        if (split - whole).abs() <= tol.max(1e-17) {
            return Ok(split);
        }
        if depth >= self.max_depth {
            return Err(SeriesError::NoConvergence { max_depth: self.max_depth });
        }
        Ok(self.refine(f, a, mid, left, 0.5 * tol, depth + 1)?
            + self.refine(f, mid, b, right, 0.5 * tol, depth + 1)?)
    }
}

/// `∫₀¹ f` to within roughly `tol`, by adaptive bisection of 16-point Gauss panels.
pub fn quadrature_oracle<F: Fn(f64) -> f64>(f: F, tol: f64) -> Result<f64, SeriesError> {
    Quadrature::new(tol).integrate(f)
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Chebyshev-like starting guess, refined by Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn odd_sum(p: i32, upto: u64) -> f64 {
        (1..=upto).step_by(2).map(|n| (n as f64).powi(-p)).sum()
    }

    #[test]
    fn known_odd_sums_inside_brackets() {
        let cases = [(2.0, PI * PI / 8.0), (4.0, PI.powi(4) / 96.0), (6.0, PI.powi(6) / 960.0)];
        for (p, limit) in cases {
            for m in [1u64, 2, 3, 9, 10, 100, 1000] {
                let partial = odd_sum(p as i32, m);
                let (lo, hi) = tail_bracket_power_law(1.0, p, m, Parity::Odd).unwrap();
                let slack = 1e-14;
                assert!(partial + lo <= limit + slack, "p={p} m={m}");
                assert!(limit <= partial + hi + slack, "p={p} m={m}");
            }
        }
    }

    #[test]
    fn all_parity_matches_zeta() {
        let zeta2 = PI * PI / 6.0;
        for m in [1u64, 5, 50] {
            let partial: f64 = (1..=m).map(|n| 1.0 / (n * n) as f64).sum();
            let (lo, hi) = tail_bracket_power_law(1.0, 2.0, m, Parity::All).unwrap();
            assert!(partial + lo <= zeta2 && zeta2 <= partial + hi);
        }
    }

    #[test]
    fn parabola_parseval_constant() {
        // Σ_odd 960 / (π⁶ N⁶) = 1
        let c = 960.0 / PI.powi(6);
        for m in [1u64, 3, 9, 25] {
            let partial = c * odd_sum(6, m);
            let (lo, hi) = tail_bracket_power_law(c, 6.0, m, Parity::Odd).unwrap();
            assert!(partial + lo <= 1.0 + 1e-15 && 1.0 <= partial + hi + 1e-15);
        }
    }

    #[test]
    fn zero_coefficient_and_divergence() {
        assert_eq!(tail_bracket_power_law(0.0, 4.0, 3, Parity::Odd).unwrap(), (0.0, 0.0));
        assert!(matches!(
            tail_bracket_power_law(1.0, 1.0, 3, Parity::All),
            Err(SeriesError::DivergentTail { .. })
        ));
        assert!(tail_bracket_power_law(-1.0, 3.0, 3, Parity::All).is_err());
    }

    #[test]
    fn first_index_per_parity() {
        assert_eq!(Parity::Odd.first_after(9), 11);
        assert_eq!(Parity::Odd.first_after(10), 11);
        assert_eq!(Parity::Even.first_after(9), 10);
        assert_eq!(Parity::All.first_after(9), 10);
    }

    #[test]
    fn gauss_rule_is_exact_for_low_degree() {
        let (x, w) = gauss_legendre(16);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        let m30: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(30)).sum();
        assert!((m30 - 2.0 / 31.0).abs() < 1e-14);
    }

    #[test]
    fn oracle_examples() {
        let v = quadrature_oracle(|x| x * (1.0 - x), 1e-13).unwrap();
        assert!((v - 1.0 / 6.0).abs() < 1e-12);
        let v = quadrature_oracle(|x| x * (1.0 - x) * (PI * x).sin(), 1e-13).unwrap();
        assert!((v - 4.0 / PI.powi(3)).abs() < 1e-12);
        let v = quadrature_oracle(|x| (3.0 * PI * x).sin() * (5.0 * PI * x).sin(), 1e-13).unwrap();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn oracle_tolerance_halving_is_stable() {
        let f = |x: f64| x.powi(7) * (37.0 * PI * x).sin();
        let mut tol = 1e-6;
        let mut prev = quadrature_oracle(f, tol).unwrap();
        for _ in 0..12 {
            let next = quadrature_oracle(f, tol / 2.0).unwrap();
            assert!((next - prev).abs() <= tol, "tol {tol}: {prev} -> {next}");
            prev = next;
            tol /= 2.0;
        }
    }

    #[test]
    fn oracle_reports_non_convergence() {
        let q = Quadrature::new(1e-30).with_max_depth(2).with_initial_panels(1);
        assert!(matches!(
            q.integrate(|x| (200.0 * x).sin()),
            Err(SeriesError::NoConvergence { .. })
        ));
    }

    #[test]
    fn oracle_is_deterministic() {
        let f = |x: f64| (x * 13.0).cos() * x.powi(5);
        assert_eq!(
            quadrature_oracle(f, 1e-12).unwrap().to_bits(),
            quadrature_oracle(f, 1e-12).unwrap().to_bits()
        );
    }
}
