//! Truncated multivariate power series with exact integer coefficients.
//!
//! Every series carries per-variable degree caps fixed at construction;
//! terms beyond a cap are dropped. Series with different caps never mix.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::perm::Composition;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("degree caps differ: {left:?} vs {right:?}")]
    CapMismatch { left: Vec<usize>, right: Vec<usize> },
    #[error("variable index {index} out of range 1..={vars}")]
    BadVariable { index: usize, vars: usize },
    #[error("exponent {exponent:?} exceeds caps {caps:?}")]
    ExceedsCaps {
        exponent: Vec<usize>,
        caps: Vec<usize>,
    },
    #[error("block count j = {j} exceeds the {k} blocks of the composition")]
    BadBlockCount { j: usize, k: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiSeries {
    caps: Vec<usize>,
    coeffs: BTreeMap<Vec<usize>, BigInt>,
}

fn within(exponent: &[usize], caps: &[usize]) -> bool {
    exponent.len() == caps.len() && exponent.iter().zip(caps).all(|(e, c)| e <= c)
}

/// All exponent vectors `0 <= e <= caps`, last coordinate fastest.
fn exponents_up_to(caps: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let mut next = Some(vec![0; caps.len()]);
    std::iter::from_fn(move || {
        let current = next.take()?;
        let mut following = current.clone();
        for i in (0..caps.len()).rev() {
            if following[i] < caps[i] {
                following[i] += 1;
                next = Some(following);
                break;
            }
            following[i] = 0;
        }
        Some(current)
    })
}

fn multinomial(parts: &[usize]) -> BigInt {
    let mut total = 0usize;
    let mut acc = BigInt::one();
    for &p in parts {
        for i in 1..=p {
            total += 1;
            acc = acc * BigInt::from(total) / BigInt::from(i);
        }
    }
    acc
}

impl MultiSeries {
    pub fn zero(caps: Vec<usize>) -> Self {
        Self {
            caps,
            coeffs: BTreeMap::new(),
        }
    }

    /// The multiplicative identity.
    pub fn one(caps: Vec<usize>) -> Self {
        let mut s = Self::zero(caps);
        s.coeffs.insert(vec![0; s.caps.len()], BigInt::one());
        s
    }

    /// Builds a series from explicit terms; zero coefficients are dropped.
    pub fn from_terms(
        caps: Vec<usize>,
        terms: impl IntoIterator<Item = (Vec<usize>, BigInt)>,
    ) -> Result<Self, SeriesError> {
        let mut s = Self::zero(caps);
        for (e, c) in terms {
            if !within(&e, &s.caps) {
                return Err(SeriesError::ExceedsCaps {
                    exponent: e,
                    caps: s.caps.clone(),
                });
            }
            *s.coeffs.entry(e).or_default() += c;
        }
        s.coeffs.retain(|_, c| !c.is_zero());
        Ok(s)
    }

    pub fn caps(&self) -> &[usize] {
        &self.caps
    }

    pub fn num_vars(&self) -> usize {
        self.caps.len()
    }

    /// Nonzero terms in exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &BigInt)> {
        self.coeffs.iter()
    }

    /// Zero for exponents that are absent or beyond the caps.
    pub fn coeff(&self, exponent: &[usize]) -> BigInt {
        self.coeffs.get(exponent).cloned().unwrap_or_default()
    }

    /// `1/(1 + x_i) = Σ (-x_i)^j`, truncated at the cap of `x_i`.
    pub fn inv_one_plus_var(index: usize, caps: Vec<usize>) -> Result<Self, SeriesError> {
        if index == 0 || index > caps.len() {
            return Err(SeriesError::BadVariable {
                index,
                vars: caps.len(),
            });
        }
        let mut s = Self::zero(caps);
        for j in 0..=s.caps[index - 1] {
            let mut e = vec![0; s.caps.len()];
            e[index - 1] = j;
            let c = if j % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            s.coeffs.insert(e, c);
        }
        Ok(s)
    }

    /// `1/(1 - x_1 - ... - x_k)`; the coefficient of `x^e` is the multinomial
    /// `(Σ e_i)! / Π e_i!`.
    pub fn inv_one_minus_sum(caps: Vec<usize>) -> Self {
        let coeffs = exponents_up_to(&caps)
            .map(|e| {
                let c = multinomial(&e);
                (e, c)
            })
            .collect();
        Self { caps, coeffs }
    }

    fn check_caps(&self, other: &Self) -> Result<(), SeriesError> {
        if self.caps != other.caps {
            return Err(SeriesError::CapMismatch {
                left: self.caps.clone(),
                right: other.caps.clone(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_caps(other)?;
        let mut out = self.clone();
        for (e, c) in &other.coeffs {
            *out.coeffs.entry(e.clone()).or_default() += c;
        }
        out.coeffs.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    /// Truncated product.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_caps(other)?;
        let mut out: BTreeMap<Vec<usize>, BigInt> = BTreeMap::new();
        let mut e = vec![0; self.caps.len()];
        for (e1, c1) in &self.coeffs {
            'pairs: for (e2, c2) in &other.coeffs {
                for i in 0..e.len() {
                    e[i] = e1[i] + e2[i];
                    if e[i] > self.caps[i] {
                        continue 'pairs;
                    }
                }
                *out.entry(e.clone()).or_default() += c1 * c2;
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(Self {
            caps: self.caps.clone(),
            coeffs: out,
        })
    }

    /// `1/((1+x_1)...(1+x_j)(1-x_1-...-x_k))` truncated at `caps`.
    pub fn block_generating_function(j: usize, caps: Vec<usize>) -> Result<Self, SeriesError> {
        if j > caps.len() {
            return Err(SeriesError::BadBlockCount { j, k: caps.len() });
        }
        let mut acc = Self::inv_one_minus_sum(caps.clone());
        for i in 1..=j {
            acc = acc.mul(&Self::inv_one_plus_var(i, caps.clone())?)?;
        }
        Ok(acc)
    }
}

/// Number of permutations in `S_a` with no fixed point in the first `j`
/// blocks, read off as the coefficient of `x^a` in the block generating
/// function.
pub fn coeff_dj(a: &Composition, j: usize) -> Result<BigInt, SeriesError> {
    let caps = a.parts().to_vec();
    let series = MultiSeries::block_generating_function(j, caps)?;
    Ok(series.coeff(a.parts()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn identity() {
        let one = MultiSeries::one(vec![2, 2]);
        assert_eq!(one.coeff(&[0, 0]), big(1));
        assert_eq!(one.coeff(&[1, 0]), big(0));
        let scalar = MultiSeries::one(vec![]);
        assert_eq!(scalar.coeff(&[]), big(1));
        let a = MultiSeries::inv_one_minus_sum(vec![2, 2]);
        assert_eq!(one.mul(&a).unwrap(), a);
    }

    #[test]
    fn simple_products() {
        let caps = vec![2];
        let plus = MultiSeries::from_terms(caps.clone(), [(vec![0], big(1)), (vec![1], big(1))]).unwrap();
        let minus =
            MultiSeries::from_terms(caps.clone(), [(vec![0], big(1)), (vec![1], big(-1))]).unwrap();
        let prod = plus.mul(&minus).unwrap();
        let expected =
            MultiSeries::from_terms(caps.clone(), [(vec![0], big(1)), (vec![2], big(-1))]).unwrap();
        assert_eq!(prod, expected);

        let inv = MultiSeries::inv_one_plus_var(1, caps.clone()).unwrap();
        assert_eq!(inv.mul(&plus).unwrap(), MultiSeries::one(caps));
    }

    #[test]
    fn cap_mismatch_is_an_error() {
        let a = MultiSeries::one(vec![1]);
        let b = MultiSeries::one(vec![2]);
        assert!(matches!(a.mul(&b), Err(SeriesError::CapMismatch { .. })));
        assert!(MultiSeries::from_terms(vec![1], [(vec![2], big(1))]).is_err());
    }

    #[test]
    fn alternating_expansion() {
        let s = MultiSeries::inv_one_plus_var(1, vec![3]).unwrap();
        let got: Vec<BigInt> = (0..4).map(|j| s.coeff(&[j])).collect();
        assert_eq!(got, vec![big(1), big(-1), big(1), big(-1)]);
        let s2 = MultiSeries::inv_one_plus_var(1, vec![2, 2]).unwrap();
        assert_eq!(s2.coeff(&[1, 1]), big(0));
        let s0 = MultiSeries::inv_one_plus_var(1, vec![0]).unwrap();
        assert_eq!(s0, MultiSeries::one(vec![0]));
        assert!(MultiSeries::inv_one_plus_var(2, vec![1]).is_err());
        assert!(MultiSeries::inv_one_plus_var(0, vec![1]).is_err());
    }

    #[test]
    fn geometric_sum_is_multinomial() {
        let s = MultiSeries::inv_one_minus_sum(vec![4, 2]);
        assert_eq!(s.coeff(&[4, 2]), big(15));
        assert_eq!(s.coeff(&[0, 0]), big(1));
        let t = MultiSeries::inv_one_minus_sum(vec![1, 1, 1]);
        assert_eq!(t.coeff(&[1, 1, 1]), big(6));
    }

    #[test]
    fn block_counts() {
        let a = Composition::new(vec![4, 2]);
        assert_eq!(coeff_dj(&a, 0).unwrap(), big(15));
        assert_eq!(coeff_dj(&a, 2).unwrap(), big(7));
        assert_eq!(coeff_dj(&Composition::new(vec![3]), 1).unwrap(), big(0));
        assert!(coeff_dj(&a, 3).is_err());
    }
}
