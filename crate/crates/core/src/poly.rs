//! Dense univariate polynomials in λ with arbitrary-precision integer
//! coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Coefficients are stored constant term first with trailing zeros trimmed,
/// so the zero polynomial has no coefficients at all.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LambdaPolynomial {
    coeffs: Vec<BigInt>,
}

impl LambdaPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::new(vec![c.into()])
    }

    /// The indeterminate λ.
    pub fn lambda() -> Self {
        Self::new(vec![BigInt::zero(), BigInt::one()])
    }

    /// `λ + shift`
    pub fn lambda_plus(shift: impl Into<BigInt>) -> Self {
        Self::new(vec![shift.into(), BigInt::one()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, power: usize) -> BigInt {
        self.coeffs.get(power).cloned().unwrap_or_default()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The constant value when the polynomial has degree at most zero.
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.coeffs.len() {
            0 => Some(BigInt::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Display-only floating point evaluation.
    pub fn eval_f64(&self, x: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Substitutes another polynomial for λ.
    pub fn compose(&self, inner: &LambdaPolynomial) -> LambdaPolynomial {
        self.coeffs
            .iter()
            .rev()
            .fold(LambdaPolynomial::zero(), |acc, c| {
                &(&acc * inner) + &LambdaPolynomial::constant(c.clone())
            })
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn pow(&self, exp: usize) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        result
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    /// Divides every coefficient by `divisor`; `None` if any division leaves
    /// a remainder.
    pub fn exact_div(&self, divisor: &BigInt) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, r) = c.div_rem(divisor);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(Self::new(out))
    }

    /// Coefficients as decimal strings, constant term first.
    pub fn to_decimal_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl Serialize for LambdaPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_decimal_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for LambdaPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| s.parse::<BigInt>().map_err(serde::de::Error::custom))
            .collect::<Result<Vec<_>, _>>()
            .map(Self::new)
    }
}

impl From<BigInt> for LambdaPolynomial {
    fn from(c: BigInt) -> Self {
        Self::constant(c)
    }
}

impl Add for &LambdaPolynomial {
    type Output = LambdaPolynomial;

    fn add(self, rhs: &LambdaPolynomial) -> LambdaPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        LambdaPolynomial::new((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &LambdaPolynomial {
    type Output = LambdaPolynomial;

    fn sub(self, rhs: &LambdaPolynomial) -> LambdaPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        LambdaPolynomial::new((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &LambdaPolynomial {
    type Output = LambdaPolynomial;

    fn mul(self, rhs: &LambdaPolynomial) -> LambdaPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return LambdaPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        LambdaPolynomial::new(out)
    }
}

impl Neg for &LambdaPolynomial {
    type Output = LambdaPolynomial;

    fn neg(self) -> LambdaPolynomial {
        LambdaPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LambdaPolynomial {
            type Output = LambdaPolynomial;

            fn $m(self, rhs: LambdaPolynomial) -> LambdaPolynomial {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for LambdaPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (power, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            match (power, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => f.write_str("λ")?,
                (1, false) => write!(f, "{mag}λ")?,
                (_, true) => write!(f, "λ^{power}")?,
                (_, false) => write!(f, "{mag}λ^{power}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trims_and_reports_degree() {
        let p = LambdaPolynomial::from_i64s(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(LambdaPolynomial::from_i64s(&[0, 0]).degree(), None);
        assert_eq!(LambdaPolynomial::from_i64s(&[5]).as_constant(), Some(BigInt::from(5)));
        assert_eq!(p.as_constant(), None);
    }

    #[test]
    fn arithmetic() {
        let x_minus_1 = LambdaPolynomial::lambda_plus(-1);
        let sq = x_minus_1.pow(2);
        assert_eq!(sq, LambdaPolynomial::from_i64s(&[1, -2, 1]));
        assert_eq!(&sq - &sq, LambdaPolynomial::zero());
        assert_eq!(sq.eval(&BigInt::from(3)), BigInt::from(4));
        assert_eq!(sq.derivative(), LambdaPolynomial::from_i64s(&[-2, 2]));
        assert_eq!(sq.to_string(), "λ^2 - 2λ + 1");
        assert_eq!(
            sq.compose(&LambdaPolynomial::lambda_plus(1)),
            LambdaPolynomial::from_i64s(&[0, 0, 1])
        );
    }

    #[test]
    fn exact_division() {
        let p = LambdaPolynomial::from_i64s(&[4, 6]);
        assert_eq!(p.exact_div(&BigInt::from(2)), Some(LambdaPolynomial::from_i64s(&[2, 3])));
        assert_eq!(p.exact_div(&BigInt::from(4)), None);
    }

    #[test]
    fn serializes_as_decimal_strings() {
        let p = LambdaPolynomial::from_i64s(&[1, 0, 1]);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"["1","0","1"]"#);
        let back: LambdaPolynomial = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }
}
