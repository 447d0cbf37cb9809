//! Generalized Euler difference tables `e^k_n(λ)` and `d^k_n(λ) = e^k_n(λ)/k!`
//! as λ-polynomials, and the coloured permutation sets `D^k_n(λ)` they count.
//!
//! `D^k_n(λ)` holds the permutations of `[n]` whose first `k` entries
//! decrease, with every fixed point after position `k` coloured in `[λ]`.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::counting::iterate_members;
use crate::lambda::binomial;
use crate::perm::{factorial, ColouredPermutation, Composition};
use crate::poly::LambdaPolynomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EulerError {
    #[error("e^{k}_{n} is not divisible by {k}!")]
    InexactDivision { n: usize, k: usize },
    #[error("extended row entry d^-1_{n} differs from (λ-1)^(n+1)")]
    ExtendedRow { n: usize },
    #[error("({n}, {k}) lies outside the table")]
    OutOfRange { n: usize, k: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferenceTable {
    n_max: usize,
    e: Vec<Vec<LambdaPolynomial>>,
    d: Vec<Vec<LambdaPolynomial>>,
    // d^{-1}_n for n = -1..=n_max, stored at n + 1
    d_minus_one: Vec<LambdaPolynomial>,
}

/// Builds rows `0..=n_max` from `e^n_n = n!` and
/// `e^{k-1}_n = e^k_n + (λ-1) e^{k-1}_{n-1}`, then divides by `k!`.
///
/// The `k = -1` row is generated from the three-term recurrence with
/// `d^{-1}_{-1} = 1` and checked against `(λ-1)^{n+1}`.
pub fn build_tables(n_max: usize) -> Result<DifferenceTable, EulerError> {
    let shifted = LambdaPolynomial::lambda_plus(-1);
    let mut e: Vec<Vec<LambdaPolynomial>> = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mut row = vec![LambdaPolynomial::zero(); n + 1];
        row[n] = LambdaPolynomial::constant(BigInt::from(factorial(n)));
        for k in (1..=n).rev() {
            row[k - 1] = &row[k] + &(&shifted * &e[n - 1][k - 1]);
        }
        e.push(row);
    }

    let mut d = Vec::with_capacity(n_max + 1);
    for (n, row) in e.iter().enumerate() {
        let mut drow = Vec::with_capacity(n + 1);
        for (k, entry) in row.iter().enumerate() {
            let q = entry
                .exact_div(&BigInt::from(factorial(k)))
                .ok_or(EulerError::InexactDivision { n, k })?;
            drow.push(q);
        }
        d.push(drow);
    }

    // k = -1: d_n = (n + λ - 1) d_{n-1} - (λ - 1) n d_{n-2}
    let mut d_minus_one = vec![LambdaPolynomial::one()];
    for n in 0..=n_max {
        let prev = &d_minus_one[n];
        let mut next = &LambdaPolynomial::lambda_plus(BigInt::from(n) - 1) * prev;
        if n >= 1 {
            let back = &d_minus_one[n - 1];
            next = &next - &(&shifted * back).scale(&BigInt::from(n));
        }
        if next != shifted.pow(n + 1) {
            return Err(EulerError::ExtendedRow { n });
        }
        d_minus_one.push(next);
    }

    Ok(DifferenceTable {
        n_max,
        e,
        d,
        d_minus_one,
    })
}

impl DifferenceTable {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn e(&self, n: usize, k: usize) -> Option<&LambdaPolynomial> {
        self.e.get(n).and_then(|row| row.get(k))
    }

    pub fn d(&self, n: usize, k: usize) -> Option<&LambdaPolynomial> {
        self.d.get(n).and_then(|row| row.get(k))
    }

    pub fn e_rows(&self) -> &[Vec<LambdaPolynomial>] {
        &self.e
    }

    pub fn d_rows(&self) -> &[Vec<LambdaPolynomial>] {
        &self.d
    }

    /// `d^k_n` with signed indices: `k = -1` reads the extended row
    /// (`n >= -1`); other entries outside `0 <= k <= n <= n_max` are zero.
    pub fn d_ext(&self, n: isize, k: isize) -> LambdaPolynomial {
        if k == -1 {
            if n >= -1 && n <= self.n_max as isize {
                return self.d_minus_one[(n + 1) as usize].clone();
            }
            return LambdaPolynomial::zero();
        }
        if n < 0 || k < 0 {
            return LambdaPolynomial::zero();
        }
        self.d(n as usize, k as usize).cloned().unwrap_or_default()
    }

    /// `Σ_j C(n-k, j) d^k_{n-j}(λ) (ν - λ)^j`, with λ and ν each either a
    /// constant or the indeterminate.
    pub fn dkn_change_basis(
        &self,
        n: usize,
        k: usize,
        nu: &LambdaPolynomial,
        lambda: &LambdaPolynomial,
    ) -> Result<LambdaPolynomial, EulerError> {
        if k > n || n > self.n_max {
            return Err(EulerError::OutOfRange { n, k });
        }
        let diff = nu - lambda;
        let mut total = LambdaPolynomial::zero();
        for j in 0..=n - k {
            let entry = self.d[n - j][k].compose(lambda);
            total = &total + &(&entry * &diff.pow(j)).scale(&binomial(n - k, j));
        }
        Ok(total)
    }

    /// `d^{k-1}_n = k d^k_n + (λ-1) d^{k-1}_{n-1}` for `1 <= k <= n`.
    pub fn column_recurrence_holds(&self, n: usize, k: usize) -> bool {
        let (ni, ki) = (n as isize, k as isize);
        let rhs = &self.d_ext(ni, ki).scale(&BigInt::from(k))
            + &(&LambdaPolynomial::lambda_plus(-1) * &self.d_ext(ni - 1, ki - 1));
        self.d_ext(ni, ki - 1) == rhs
    }

    /// `d^k_n = n d^k_{n-1} + (λ-1) d^{k-1}_{n-2}` for `0 <= k <= n - 1`.
    pub fn row_recurrence_holds(&self, n: usize, k: usize) -> bool {
        let (ni, ki) = (n as isize, k as isize);
        let rhs = &self.d_ext(ni - 1, ki).scale(&BigInt::from(n))
            + &(&LambdaPolynomial::lambda_plus(-1) * &self.d_ext(ni - 2, ki - 1));
        self.d_ext(ni, ki) == rhs
    }

    /// `d^k_n = (n + λ - 1) d^k_{n-1} - (λ-1)(n-k-1) d^k_{n-2}` for
    /// `0 <= k <= n - 1`.
    pub fn three_term_recurrence_holds(&self, n: usize, k: usize) -> bool {
        let (ni, ki) = (n as isize, k as isize);
        let first = &LambdaPolynomial::lambda_plus(BigInt::from(n) - 1) * &self.d_ext(ni - 1, ki);
        let second = (&LambdaPolynomial::lambda_plus(-1) * &self.d_ext(ni - 2, ki))
            .scale(&BigInt::from(n as i64 - k as i64 - 1));
        self.d_ext(ni, ki) == &first - &second
    }
}

/// All of `D^k_n(λ)` in sorted order.
pub fn enumerate_dkn(n: usize, k: usize, lambda: u32) -> Vec<ColouredPermutation> {
    assert!(k <= n, "prefix length {k} exceeds n = {n}");
    let mut parts = vec![k];
    parts.extend(std::iter::repeat_n(1, n - k));
    let shape = Composition::new(parts);
    let mut out = Vec::new();
    for perm in iterate_members(&shape) {
        let scoped: Vec<usize> = perm.fixed_points().into_iter().filter(|&p| p > k).collect();
        if lambda == 0 && !scoped.is_empty() {
            continue;
        }
        // odometer over [λ]^scoped
        let mut colours = vec![1u32; scoped.len()];
        loop {
            let map = scoped.iter().copied().zip(colours.iter().copied()).collect();
            out.push(
                ColouredPermutation::new(perm.clone(), k, lambda, map)
                    .expect("colours drawn from [λ] on in-scope fixed points"),
            );
            let Some(i) = colours.iter().rposition(|&c| c < lambda) else {
                break;
            };
            colours[i] += 1;
            colours[i + 1..].iter_mut().for_each(|c| *c = 1);
        }
    }
    out.sort();
    out
}

/// `|D^k_n(λ)|` by enumeration.
pub fn count_dkn(n: usize, k: usize, lambda: u32) -> BigInt {
    BigInt::from(enumerate_dkn(n, k, lambda).len())
}

/// True when `q` has length `n`, scope after position `k`, and a decreasing
/// `k`-prefix.
pub fn in_dkn(q: &ColouredPermutation, n: usize, k: usize) -> bool {
    q.len() == n
        && q.prefix_len() == k
        && k <= n
        && q.perm().image()[..k].windows(2).all(|w| w[0] > w[1])
}

/// `d^k_n(λ)` at an integer λ; zero outside the table.
pub fn d_value(table: &DifferenceTable, n: usize, k: usize, lambda: i64) -> BigInt {
    table
        .d(n, k)
        .map(|p| p.eval(&BigInt::from(lambda)))
        .unwrap_or_else(BigInt::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn table_values() {
        let t = build_tables(6).unwrap();
        assert_eq!(t.e(4, 0).unwrap().eval(&big(0)), big(9));
        for n in 0..=6 {
            for k in 0..=n {
                assert_eq!(t.e(n, k).unwrap().eval(&big(1)), BigInt::from(factorial(n)));
            }
        }
        assert_eq!(t.d(4, 2).unwrap().eval(&big(2)), big(19));
        assert_eq!(t.e(4, 2).unwrap().eval(&big(2)), big(38));
        assert_eq!(t.d_ext(-1, -1), LambdaPolynomial::one());
        assert_eq!(t.d_ext(3, -1), LambdaPolynomial::lambda_plus(-1).pow(4));
    }

    #[test]
    fn enumeration_examples() {
        let d = enumerate_dkn(4, 2, 2);
        assert_eq!(d.len(), 19);
        let top = enumerate_dkn(5, 5, 3);
        assert_eq!(top.len(), 1);
        assert_eq!(top[0].perm().to_string(), "54321");
        let derangements: Vec<String> =
            enumerate_dkn(3, 0, 0).iter().map(|q| q.perm().to_string()).collect();
        assert_eq!(derangements, vec!["231", "312"]);
    }

    #[test]
    fn change_basis_examples() {
        let t = build_tables(5).unwrap();
        let c = |x: i64| LambdaPolynomial::constant(x);
        let lam = LambdaPolynomial::lambda();
        assert_eq!(t.dkn_change_basis(4, 2, &lam, &lam).unwrap(), t.d(4, 2).unwrap().clone());
        assert_eq!(t.dkn_change_basis(4, 2, &c(2), &c(1)).unwrap(), c(19));
        assert_eq!(t.dkn_change_basis(4, 0, &c(0), &c(1)).unwrap(), c(9));
        assert!(t.dkn_change_basis(6, 0, &c(0), &c(1)).is_err());
    }

    #[test]
    fn recurrences_small() {
        let t = build_tables(5).unwrap();
        for n in 1..=5 {
            for k in 1..=n {
                assert!(t.column_recurrence_holds(n, k), "column n={n} k={k}");
            }
            for k in 0..n {
                assert!(t.row_recurrence_holds(n, k), "row n={n} k={k}");
                assert!(t.three_term_recurrence_holds(n, k), "three-term n={n} k={k}");
            }
        }
    }
}
