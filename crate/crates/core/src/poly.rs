//! Exact polynomials with rational coefficients on the unit interval.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Shorthand for building a rational from small integers.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Polynomial in the dimensionless coordinate `x`, coefficient `k` multiplying `x^k`.
///
/// Trailing zeros are never stored, so the zero polynomial has no coefficients and
/// derived `PartialEq` is coefficient-wise equality of canonical forms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RationalPoly {
    coeffs: Vec<Rational>,
}

impl RationalPoly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Self::monomial(1, Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn monomial(power: usize, c: Rational) -> Self {
        let mut coeffs = vec![Rational::zero(); power + 1];
        coeffs[power] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// Integer coefficients in ascending order.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| rat(c, 1)).collect())
    }

    /// Ascending coefficients; empty for the zero polynomial.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, power: usize) -> Rational {
        self.coeffs.get(power).cloned().unwrap_or_else(Rational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `Some(c)` when the polynomial is a constant (including zero).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    /// Exact `order`-th derivative.
    pub fn differentiate(&self, order: usize) -> Self {
        if order == 0 {
            return self.clone();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(order)
            .map(|(k, c)| {
                // k (k-1) ... (k-order+1)
                let falling: BigInt = ((k - order + 1)..=k).map(BigInt::from).product();
                c * Rational::from_integer(falling)
            })
            .collect();
        Self::from_coeffs(coeffs)
    }

    /// Horner evaluation at an exact rational point.
    pub fn evaluate(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn evaluate_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + to_f64(c))
    }

    /// `∫₀¹ p(x) dx`.
    pub fn integral_unit(&self) -> Rational {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c / Rational::from_integer(BigInt::from(k + 1)))
            .fold(Rational::zero(), |acc, t| acc + t)
    }

    /// `∫₀¹ p(x) q(x) dx`, exactly.
    pub fn integrate_product(&self, other: &Self) -> Rational {
        // Σ_{i,j} p_i q_j / (i + j + 1), without materializing the product.
        let mut total = Rational::zero();
        for (i, p) in self.coeffs.iter().enumerate() {
            for (j, q) in other.coeffs.iter().enumerate() {
                total += p * q / Rational::from_integer(BigInt::from(i + j + 1));
            }
        }
        total
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c * factor).collect())
    }

    pub fn pow(&self, exp: u32) -> Self {
        (0..exp).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Lowest-order nonzero coefficient.
    pub fn lowest_nonzero(&self) -> Option<&Rational> {
        self.coeffs.iter().find(|c| !c.is_zero())
    }
}

/// Nearest `f64` to an exact rational.
pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        // ToPrimitive only fails on overflow of the ratio itself.
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Serializes rationals as their exact `p/q` string.
pub mod serde_rational {
    use super::Rational;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(r)
    }

    pub mod option {
        use super::Rational;
        use serde::Serializer;

        pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match r {
                Some(r) => s.collect_str(r),
                None => s.serialize_none(),
            }
        }
    }
}

impl Add for &RationalPoly {
    type Output = RationalPoly;

    fn add(self, rhs: &RationalPoly) -> RationalPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RationalPoly::from_coeffs((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &RationalPoly {
    type Output = RationalPoly;

    fn sub(self, rhs: &RationalPoly) -> RationalPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RationalPoly::from_coeffs((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &RationalPoly {
    type Output = RationalPoly;

    fn mul(self, rhs: &RationalPoly) -> RationalPoly {
        if self.is_zero() || rhs.is_zero() {
            return RationalPoly::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        RationalPoly::from_coeffs(coeffs)
    }
}

impl Neg for &RationalPoly {
    type Output = RationalPoly;

    fn neg(self) -> RationalPoly {
        RationalPoly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for RationalPoly {
            type Output = RationalPoly;
            fn $m(self, rhs: RationalPoly) -> RationalPoly {
                $tr::$m(&self, &rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for RationalPoly {
    type Output = RationalPoly;

    fn neg(self) -> RationalPoly {
        -&self
    }
}

/// Descending-degree form that the state parser reads back, e.g. `-x^2 + x` or `3/2*x^3 - 1/4`.
impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            first = false;
            let var = match k {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{k}"),
            };
            match (mag.is_one(), k) {
                (_, 0) => write!(f, "{mag}")?,
                (true, _) => f.write_str(&var)?,
                (false, _) => write!(f, "{mag}*{var}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn parabola() -> RationalPoly {
        RationalPoly::from_ints(&[0, 1, -1])
    }

    fn sextic() -> RationalPoly {
        let base = parabola();
        base.pow(3)
    }

    #[test]
    fn canonical_form_drops_trailing_zeros() {
        let p = RationalPoly::from_ints(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(RationalPoly::from_ints(&[0, 0]), RationalPoly::zero());
        assert_eq!(RationalPoly::zero().degree(), None);
    }

    #[test]
    fn second_derivative_of_parabola_is_minus_two() {
        assert_eq!(parabola().differentiate(2), RationalPoly::from_ints(&[-2]));
        assert_eq!(parabola().differentiate(0), parabola());
        assert!(parabola().differentiate(3).is_zero());
    }

    #[test]
    fn second_derivative_of_sextic() {
        // x^3 (1-x)^3 = x^3 - 3x^4 + 3x^5 - x^6, differentiated by hand term by term.
        assert_eq!(sextic(), RationalPoly::from_ints(&[0, 0, 0, 1, -3, 3, -1]));
        assert_eq!(
            sextic().differentiate(2),
            RationalPoly::from_ints(&[0, 6, -36, 60, -30])
        );
    }

    #[test]
    fn inner_products() {
        assert_eq!(parabola().integrate_product(&parabola()), rat(1, 30));
        assert_eq!(RationalPoly::one().integrate_product(&RationalPoly::one()), rat(1, 1));
        let x = RationalPoly::x();
        let one_minus_x = RationalPoly::from_ints(&[1, -1]);
        assert_eq!(x.integrate_product(&one_minus_x), rat(1, 6));
    }

    #[test]
    fn evaluation() {
        assert_eq!(parabola().evaluate(&rat(0, 1)), rat(0, 1));
        assert_eq!(parabola().evaluate(&rat(1, 2)), rat(1, 4));
        assert_eq!(parabola().differentiate(1).evaluate(&rat(1, 1)), rat(-1, 1));
    }

    #[test]
    fn display_forms() {
        assert_eq!(parabola().to_string(), "-x^2 + x");
        assert_eq!(RationalPoly::zero().to_string(), "0");
        let p = RationalPoly::from_coeffs(vec![rat(-1, 4), rat(0, 1), rat(0, 1), rat(3, 2)]);
        assert_eq!(p.to_string(), "3/2*x^3 - 1/4");
        assert_eq!(RationalPoly::from_ints(&[5]).to_string(), "5");
        assert_eq!(RationalPoly::from_ints(&[0, -1]).to_string(), "-x");
    }

    pub(crate) fn arb_poly(max_degree: usize) -> impl Strategy<Value = RationalPoly> {
        prop::collection::vec((-20i64..=20, 1i64..=7), 0..=max_degree + 1).prop_map(|cs| {
            RationalPoly::from_coeffs(cs.into_iter().map(|(n, d)| rat(n, d)).collect())
        })
    }

    fn arb_rat() -> impl Strategy<Value = Rational> {
        (-30i64..=30, 1i64..=9).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn inner_product_symmetric_and_bilinear(
            p in arb_poly(8), q in arb_poly(8), r in arb_poly(8), a in arb_rat(), b in arb_rat()
        ) {
            prop_assert_eq!(p.integrate_product(&q), q.integrate_product(&p));
            let combo = &p.scale(&a) + &q.scale(&b);
            prop_assert_eq!(
                combo.integrate_product(&r),
                a * p.integrate_product(&r) + b * q.integrate_product(&r)
            );
        }

        #[test]
        fn inner_product_positive_definite(p in arb_poly(10)) {
            let n = p.integrate_product(&p);
            if p.is_zero() {
                prop_assert!(n.is_zero());
            } else {
                prop_assert!(n.is_positive());
            }
        }

        #[test]
        fn inner_product_matches_expanded_product(p in arb_poly(8), q in arb_poly(8)) {
            prop_assert_eq!(p.integrate_product(&q), (&p * &q).integral_unit());
        }

        #[test]
        fn derivative_composes(p in arb_poly(12), a in 0usize..4, b in 0usize..4) {
            prop_assert_eq!(p.differentiate(a).differentiate(b), p.differentiate(a + b));
        }

        #[test]
        fn product_rule(p in arb_poly(6), q in arb_poly(6)) {
            let lhs = (&p * &q).differentiate(1);
            let rhs = &(&p.differentiate(1) * &q) + &(&p * &q.differentiate(1));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
