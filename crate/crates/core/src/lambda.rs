//! λ-factorials and the formulas for `|D(a)|` built from them.
//!
//! `f_λ(n)` counts permutations of `[n]` whose fixed points each take one of
//! λ colours. It is handled as a polynomial in λ throughout, so statements
//! of the form "independent of λ" become degree checks.
//!
//! `f_λ(n)` is generally *not* the nearest integer to `n! e^{λ-1}`, unlike the
//! derangement numbers; no approximation of that kind is provided.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::perm::{factorial, Composition};
use crate::poly::LambdaPolynomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("division by {divisor} is not exact for {composition}")]
    InexactDivision {
        divisor: BigInt,
        composition: String,
    },
    #[error("table holds f(0)..f({have}) but f({need}) is required")]
    ShortTable { have: usize, need: usize },
}

fn big_factorial(n: usize) -> BigInt {
    BigInt::from(factorial(n))
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

fn sign(exp: usize) -> BigInt {
    if exp % 2 == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// Calls `visit` with every vector `0 <= b <= bound`.
pub(crate) fn for_each_bounded(bound: &[usize], mut visit: impl FnMut(&[usize])) {
    let mut b = vec![0; bound.len()];
    loop {
        visit(&b);
        let mut i = bound.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if b[i] < bound[i] {
                b[i] += 1;
                break;
            }
            b[i] = 0;
        }
    }
}

/// `f_λ(n)` from `f_λ(n) = n f_λ(n-1) + (λ-1)^n`, `f_λ(0) = 1`.
pub fn lambda_factorial(n: usize) -> LambdaPolynomial {
    lambda_factorials(n).pop().expect("table has n + 1 entries")
}

/// `f_λ(0), ..., f_λ(n_max)`.
pub fn lambda_factorials(n_max: usize) -> Vec<LambdaPolynomial> {
    let shifted = LambdaPolynomial::lambda_plus(-1);
    let mut power = LambdaPolynomial::one();
    let mut table = vec![LambdaPolynomial::one()];
    for n in 1..=n_max {
        power = &power * &shifted;
        let next = &table[n - 1].scale(&BigInt::from(n)) + &power;
        table.push(next);
    }
    table
}

/// `n! Σ_{j<=n} (λ-1)^j / j!`, with `n!/j!` taken as a falling factorial so
/// everything stays integral.
pub fn lambda_factorial_truncexp(n: usize) -> LambdaPolynomial {
    let shifted = LambdaPolynomial::lambda_plus(-1);
    (0..=n).fold(LambdaPolynomial::zero(), |acc, j| {
        let falling: BigInt = (j + 1..=n).map(BigInt::from).product();
        &acc + &shifted.pow(j).scale(&falling)
    })
}

/// Rewrites `f_ν(n)` in terms of `f_λ(0..=n)`:
/// `Σ_j C(n, j) f_λ(n - j) (ν - λ)^j`.
///
/// `lambda` and `nu` may each be a constant or the indeterminate; `table`
/// holds `f_λ(m)` evaluated or symbolic to match `lambda`.
pub fn change_basis(
    n: usize,
    nu: &LambdaPolynomial,
    lambda: &LambdaPolynomial,
    table: &[LambdaPolynomial],
) -> Result<LambdaPolynomial, FormulaError> {
    if table.len() <= n {
        return Err(FormulaError::ShortTable {
            have: table.len().saturating_sub(1),
            need: n,
        });
    }
    let diff = nu - lambda;
    Ok((0..=n).fold(LambdaPolynomial::zero(), |acc, j| {
        let term = &table[n - j] * &diff.pow(j);
        &acc + &term.scale(&binomial(n, j))
    }))
}

/// Whether `d/dλ f_λ(n) = n f_λ(n-1)` holds coefficient by coefficient.
pub fn poly_derivative_check(n: usize) -> bool {
    if n == 0 {
        return lambda_factorial(0).derivative().is_zero();
    }
    lambda_factorial(n).derivative() == lambda_factorial(n - 1).scale(&BigInt::from(n))
}

/// `|D(a)| = Σ_{0<=b<=a} (-1)^{Σb} (n - Σb)! / Π (a_i - b_i)!`.
pub fn explicit_d_count(a: &Composition) -> BigInt {
    let n = a.total();
    let mut total = BigInt::zero();
    for_each_bounded(a.parts(), |b| {
        let used: usize = b.iter().sum();
        let mut term = big_factorial(n - used);
        for (&ai, &bi) in a.parts().iter().zip(b) {
            term /= big_factorial(ai - bi);
        }
        total += sign(used) * term;
    });
    total
}

/// The λ-factorial sum `Σ_{0<=b<=a} (-1)^{Σb} f_λ(n - Σb) Π C(a_i, b_i) f_λ(b_i)`
/// as a polynomial in λ. It does not depend on λ and equals the number of
/// permutations that become derangements after sorting each block.
pub fn lamfak_rhs(a: &Composition) -> LambdaPolynomial {
    let table = lambda_factorials(a.total());
    lamfak_sum(a, &table)
}

/// The same sum over any table of `f(0..=n)`, symbolic or evaluated.
pub fn lamfak_sum(a: &Composition, table: &[LambdaPolynomial]) -> LambdaPolynomial {
    let n = a.total();
    let mut total = LambdaPolynomial::zero();
    for_each_bounded(a.parts(), |b| {
        let used: usize = b.iter().sum();
        let mut term = table[n - used].scale(&sign(used));
        for (&ai, &bi) in a.parts().iter().zip(b) {
            term = (&term * &table[bi]).scale(&binomial(ai, bi));
        }
        total = &total + &term;
    });
    total
}

/// Derangement numbers `D_0..=D_n` from `D_m = m D_{m-1} + (-1)^m`.
pub fn derangement_numbers(n: usize) -> Vec<BigInt> {
    let mut d = vec![BigInt::one()];
    for m in 1..=n {
        let next = &d[m - 1] * BigInt::from(m) + sign(m);
        d.push(next);
    }
    d
}

/// Terms `(-1)^{Σb} D_{n-Σb} Π C(a_i, b_i) D_{b_i}` of the derangement form,
/// one per `0 <= b <= a`, in the order the vectors are visited.
pub fn derangement_basis_terms(a: &Composition) -> Vec<BigInt> {
    let n = a.total();
    let d = derangement_numbers(n);
    let mut terms = Vec::new();
    for_each_bounded(a.parts(), |b| {
        let used: usize = b.iter().sum();
        let mut term = sign(used) * &d[n - used];
        for (&ai, &bi) in a.parts().iter().zip(b) {
            term *= binomial(ai, bi) * &d[bi];
        }
        terms.push(term);
    });
    terms
}

/// Number of vectors `b` whose block factor `Π C(a_i, b_i) D_{b_i}` is
/// nonzero. Blocks of length one only admit `b_i = 0` since `D_1 = 0`.
pub fn derangement_basis_support(a: &Composition) -> usize {
    let d = derangement_numbers(a.parts().iter().copied().max().unwrap_or(0));
    a.parts()
        .iter()
        .map(|&ai| (0..=ai).filter(|&bi| !d[bi].is_zero()).count())
        .product()
}

/// `|D(a)|` from the λ = 0 specialisation: the derangement-number sum
/// divided by `Π a_i!`.
pub fn derangement_basis_count(a: &Composition) -> Result<BigInt, FormulaError> {
    let sum: BigInt = derangement_basis_terms(a).into_iter().sum();
    let divisor = BigInt::from(a.factorial_product());
    if !(&sum % &divisor).is_zero() {
        return Err(FormulaError::InexactDivision {
            divisor,
            composition: a.to_string(),
        });
    }
    Ok(sum / divisor)
}

/// The literal double sum over `c ∈ {0,1}^k` and `0 <= b <= a - c` with the
/// λ-factorial weights and `Π μ_i^{c_i}`. Each `c`-slice equals
/// `Π (a_i - c_i)! |D(a - c)|`, so this is a weighted sorted-preimage count;
/// for `μ = 0` it is the λ-factorial sum of `a` itself.
pub fn mu_coloured_sum(a: &Composition, mu: &[BigInt], lambda: &BigInt) -> BigInt {
    let table: Vec<LambdaPolynomial> = lambda_factorials(a.total())
        .iter()
        .map(|f| LambdaPolynomial::constant(f.eval(lambda)))
        .collect();
    let mut total = BigInt::zero();
    for_each_bounded(&vec![1; a.num_blocks()], |c| {
        if let Some((reduced, weight)) = reduce_by_indicator(a, mu, c) {
            let slice = lamfak_sum(&reduced, &table)
                .as_constant()
                .expect("evaluated table gives constants");
            total += weight * slice;
        }
    });
    total
}

/// Number of pairs `(π, C)` with `π ∈ S_a` where a fixed point in block `i`
/// takes one of `μ_i` colours.
///
/// Removing the (at most one) fixed point of each block leaves a derangement
/// of `a - c`, so this is `Σ_c Π μ_i^{c_i} |D(a - c)|`, with each `|D(a - c)|`
/// read from the λ-factorial sum at the given λ.
pub fn mu_coloured_count(
    a: &Composition,
    mu: &[BigInt],
    lambda: &BigInt,
) -> Result<BigInt, FormulaError> {
    let table: Vec<LambdaPolynomial> = lambda_factorials(a.total())
        .iter()
        .map(|f| LambdaPolynomial::constant(f.eval(lambda)))
        .collect();
    let mut total = BigInt::zero();
    let mut failure = None;
    for_each_bounded(&vec![1; a.num_blocks()], |c| {
        let Some((reduced, weight)) = reduce_by_indicator(a, mu, c) else {
            return;
        };
        let slice = lamfak_sum(&reduced, &table)
            .as_constant()
            .expect("evaluated table gives constants");
        let divisor = BigInt::from(reduced.factorial_product());
        if !(&slice % &divisor).is_zero() {
            failure.get_or_insert(FormulaError::InexactDivision {
                divisor: divisor.clone(),
                composition: reduced.to_string(),
            });
        }
        total += weight * slice / divisor;
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(total),
    }
}

fn reduce_by_indicator(a: &Composition, mu: &[BigInt], c: &[usize]) -> Option<(Composition, BigInt)> {
    let mut parts = Vec::with_capacity(c.len());
    let mut weight = BigInt::one();
    for (i, (&ai, &ci)) in a.parts().iter().zip(c).enumerate() {
        if ci > ai {
            return None;
        }
        parts.push(ai - ci);
        if ci == 1 {
            weight *= mu.get(i).cloned().unwrap_or_default();
        }
    }
    Some((Composition::new(parts), weight))
}

/// Whether `f_λ(n) = (n-1)(f_λ(n-1) + f_λ(n-2)) + λ(λ-1)^{n-1}` holds as a
/// polynomial identity (`n >= 2`).
pub fn two_term_recurrence_holds(n: usize) -> bool {
    let f = lambda_factorials(n);
    let rhs = &(&f[n - 1] + &f[n - 2]).scale(&BigInt::from(n - 1))
        + &(&LambdaPolynomial::lambda() * &LambdaPolynomial::lambda_plus(-1).pow(n - 1));
    f[n] == rhs
}

/// Whether `f_λ(n) = n f_λ(n-1) + (λ-1)^n` holds, checked against the
/// truncated-exponential form rather than the table that defines it.
pub fn one_term_recurrence_holds(n: usize) -> bool {
    let lhs = lambda_factorial_truncexp(n);
    let rhs = &lambda_factorial_truncexp(n - 1).scale(&BigInt::from(n))
        + &LambdaPolynomial::lambda_plus(-1).pow(n);
    lhs == rhs
}
