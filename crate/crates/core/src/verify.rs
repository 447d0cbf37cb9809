//! Exhaustive self-checks grouped into suites, one per module.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Display;

use num_bigint::BigInt;
use serde::Serialize;

use crate::bijections::{
    check_eta, check_theta, check_zeta, eta, eta_inverse, theta, theta_inverse, zeta1_preimages, zeta2,
    zeta2_inverse, EtaArg, ThetaArg, Zeta1Arg, Zeta2Arg,
};
use crate::correlation::{
    fg_consistency, g_closed, g_recurrence_check, verify_correlation, verify_unimodality, BlockPairState,
};
use crate::counting::{
    count_dj, count_dstar, count_sorted_derangement_preimage, insert_block_fixed_point, iterate_members,
    remove_block_fixed_point, sorted_preimage_via_members,
};
use crate::euler::{build_tables, count_dkn, enumerate_dkn};
use crate::lambda::{
    derangement_basis_count, explicit_d_count, lamfak_rhs, one_term_recurrence_holds, poly_derivative_check,
    two_term_recurrence_holds,
};
use crate::perm::{ColouredPermutation, Composition, Permutation};
use crate::poly::LambdaPolynomial;
use crate::series::coeff_dj;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseStatus {
    Pass,
    Fail,
    SkippedException,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Case {
    pub inputs: String,
    pub expected: String,
    pub actual: String,
    pub status: CaseStatus,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped_exception: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub cases: Vec<Case>,
    pub summary: Summary,
}

impl VerifyReport {
    pub fn new(suite: &str) -> Self {
        Self {
            suite: suite.to_string(),
            cases: Vec::new(),
            summary: Summary::default(),
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn push(&mut self, inputs: impl Display, expected: impl Display, actual: impl Display, status: CaseStatus) {
        match status {
            CaseStatus::Pass => self.summary.pass += 1,
            CaseStatus::Fail => self.summary.fail += 1,
            CaseStatus::SkippedException => self.summary.skipped_exception += 1,
        }
        self.cases.push(Case {
            inputs: inputs.to_string(),
            expected: expected.to_string(),
            actual: actual.to_string(),
            status,
        });
    }

    /// Records a comparison that passes on equality.
    pub fn expect_eq<T: PartialEq + Display>(&mut self, inputs: impl Display, expected: T, actual: T) {
        let status = if expected == actual { CaseStatus::Pass } else { CaseStatus::Fail };
        self.push(inputs, expected, actual, status);
    }

    pub fn expect_ok(&mut self, inputs: impl Display, result: Result<impl Display, String>) {
        match result {
            Ok(v) => self.push(inputs, "ok", v, CaseStatus::Pass),
            Err(e) => self.push(inputs, "ok", e, CaseStatus::Fail),
        }
    }
}

/// `|D(a)|` by every independent route.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DCounts {
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub brute: BigInt,
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub genfunc: BigInt,
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub factorial: BigInt,
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub derangement_basis: BigInt,
}

impl DCounts {
    pub fn of(a: &Composition) -> Self {
        let k = a.num_blocks();
        Self {
            brute: count_dj(a, k).expect("j = k is valid"),
            genfunc: coeff_dj(a, k).expect("j = k is valid"),
            factorial: explicit_d_count(a),
            derangement_basis: derangement_basis_count(a).expect("division is exact"),
        }
    }

    pub fn agree(&self) -> bool {
        self.brute == self.genfunc && self.brute == self.factorial && self.brute == self.derangement_basis
    }
}

impl Display for DCounts {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "brute={} genfunc={} factorial={} derangement-basis={}",
            self.brute, self.genfunc, self.factorial, self.derangement_basis
        )
    }
}

fn all_compositions(n_max: usize) -> impl Iterator<Item = Composition> {
    (1..=n_max).flat_map(Composition::all_positive)
}

pub fn perm_suite(n_max: usize) -> VerifyReport {
    let mut r = VerifyReport::new("perm");
    for n in 0..=n_max.min(6) {
        let mut failures = 0usize;
        let mut checked = 0usize;
        for p in Permutation::all(n) {
            for pos in 1..=n + 1 {
                for value in 1..=n + 1 {
                    checked += 1;
                    let q = p.insert_value(pos, value).expect("in range");
                    if q.remove_position(pos).ok().as_ref() != Some(&p) {
                        failures += 1;
                    }
                }
            }
            for pos in 1..=n {
                checked += 1;
                let v = p.at(pos);
                if p.remove_position(pos).and_then(|q| q.insert_value(pos, v)).ok().as_ref() != Some(&p) {
                    failures += 1;
                }
            }
            let fixed = p.fixed_points();
            checked += 1;
            let stripped = p.remove_fixed_points(&fixed).expect("fixed points");
            if !stripped.is_derangement() || stripped.insert_fixed_points(&fixed).ok().as_ref() != Some(&p) {
                failures += 1;
            }
        }
        r.expect_eq(format!("φ/ψ round trips n={n} ({checked} checks)"), 0, failures);
    }
    for a in all_compositions(n_max.min(6)) {
        let members: BTreeSet<Permutation> = iterate_members(&a).collect();
        let images: BTreeSet<Permutation> = Permutation::all(a.total())
            .map(|p| p.sort_blocks(&a).expect("sizes match"))
            .collect();
        r.expect_eq(format!("Φ image = S_a for a={a}"), members.len(), images.len());
    }
    r
}

pub fn series_suite(n_max: usize) -> VerifyReport {
    let mut r = VerifyReport::new("series");
    for a in all_compositions(n_max) {
        for j in 0..=a.num_blocks() {
            let brute = count_dj(&a, j).expect("valid j");
            let series = coeff_dj(&a, j).expect("valid j");
            r.expect_eq(format!("D_{j}({a})"), brute, series);
        }
    }
    r
}

pub fn counting_suite(n_max: usize) -> VerifyReport {
    let mut r = VerifyReport::new("counting");
    for a in all_compositions(n_max) {
        let counts = DCounts::of(&a);
        let status = if counts.agree() { CaseStatus::Pass } else { CaseStatus::Fail };
        r.push(format!("|D({a})| by four methods"), &counts.brute, &counts, status);

        // splitting D_{j-1}(a) by a fixed point in block j
        for j in 1..=a.num_blocks() {
            let lhs = count_dj(&a, j - 1).expect("valid j");
            let shrunk = a.with_part(j, a.parts()[j - 1] - 1);
            let rhs = count_dj(&a, j).expect("valid j") + count_dj(&shrunk, j).expect("valid j");
            r.expect_eq(format!("D_{}({a}) = D_{j}({a}) + D_{j}({shrunk})", j - 1), lhs, rhs);
            let dstar = count_dstar(&a, j).expect("valid j");
            r.expect_eq(format!("D*_{j}({a}) = D_{j}({shrunk})"), count_dj(&shrunk, j).expect("valid j"), dstar);
        }

        if a.total() < n_max.min(6) {
            for j in 1..=a.num_blocks() {
                let grown = a.with_part(j, a.parts()[j - 1] + 1);
                let mut bad = 0usize;
                let mut images = BTreeSet::new();
                for p in iterate_members(&a).filter(|p| crate::counting::in_dj(p, &a, j)) {
                    match insert_block_fixed_point(&p, &a, j) {
                        Ok(q) => {
                            if remove_block_fixed_point(&q, &grown, j).ok().as_ref() != Some(&p) {
                                bad += 1;
                            }
                            images.insert(q);
                        }
                        Err(_) => bad += 1,
                    }
                }
                r.expect_eq(format!("fixed point insertion round trip a={a} j={j}"), 0, bad);
                r.expect_eq(
                    format!("fixed point insertion onto D*_{j}({grown})"),
                    count_dstar(&grown, j).expect("valid j"),
                    BigInt::from(images.len()),
                );
            }
        }
    }
    for a in all_compositions(n_max.min(7)) {
        r.expect_eq(
            format!("preimage of D({a}): S_n scan vs S_a"),
            count_sorted_derangement_preimage(&a),
            sorted_preimage_via_members(&a),
        );
    }
    r
}

pub fn lambda_suite(n_max: usize) -> VerifyReport {
    let mut r = VerifyReport::new("lambda");
    for a in all_compositions(n_max.min(7)) {
        let rhs = lamfak_rhs(&a);
        let expected = sorted_preimage_via_members(&a);
        match rhs.as_constant() {
            Some(c) => r.expect_eq(format!("λ-factorial sum for {a}"), expected, c),
            None => r.push(format!("λ-factorial sum for {a}"), expected, rhs, CaseStatus::Fail),
        }
    }
    for n in 1..=n_max {
        r.expect_eq(format!("one-term recurrence n={n}"), true, one_term_recurrence_holds(n));
        r.expect_eq(format!("derivative rule n={n}"), true, poly_derivative_check(n));
        if n >= 2 {
            r.expect_eq(format!("two-term recurrence n={n}"), true, two_term_recurrence_holds(n));
        }
    }
    r
}

pub fn euler_suite(n_max: usize) -> VerifyReport {
    let mut r = VerifyReport::new("euler");
    let table = match build_tables(n_max) {
        Ok(t) => t,
        Err(e) => {
            r.push(format!("tables to n={n_max}"), "built", e, CaseStatus::Fail);
            return r;
        }
    };
    r.push(format!("tables to n={n_max}"), "built", "built", CaseStatus::Pass);
    for n in 0..=n_max {
        for k in 0..=n {
            if k >= 1 {
                r.expect_eq(format!("column recurrence n={n} k={k}"), true, table.column_recurrence_holds(n, k));
            }
            if k < n {
                r.expect_eq(format!("row recurrence n={n} k={k}"), true, table.row_recurrence_holds(n, k));
                r.expect_eq(
                    format!("three-term recurrence n={n} k={k}"),
                    true,
                    table.three_term_recurrence_holds(n, k),
                );
            }
            let entry = table.d(n, k).expect("in table").clone();
            let lam = LambdaPolynomial::lambda();
            r.expect_eq(
                format!("change of basis ν=λ n={n} k={k}"),
                entry.clone(),
                table.dkn_change_basis(n, k, &lam, &lam).expect("in table"),
            );
            let mut bad = 0;
            for nu in 0..=n as i64 {
                let nu_poly = LambdaPolynomial::constant(nu);
                if table.dkn_change_basis(n, k, &nu_poly, &lam).expect("in table")
                    != LambdaPolynomial::constant(entry.eval(&BigInt::from(nu)))
                {
                    bad += 1;
                }
                for lambda in 0..=n as i64 {
                    let lambda_poly = LambdaPolynomial::constant(lambda);
                    if table.dkn_change_basis(n, k, &nu_poly, &lambda_poly).expect("in table")
                        != LambdaPolynomial::constant(entry.eval(&BigInt::from(nu)))
                    {
                        bad += 1;
                    }
                }
            }
            r.expect_eq(format!("change of basis over the integer grid n={n} k={k}"), 0, bad);
        }
    }
    for n in 0..=n_max.min(6) {
        for k in 0..=n {
            for lambda in 0..=3u32 {
                r.expect_eq(
                    format!("|D^{k}_{n}({lambda})| vs d^{k}_{n}({lambda})"),
                    table.d(n, k).expect("in table").eval(&BigInt::from(lambda)),
                    count_dkn(n, k, lambda),
                );
            }
        }
    }
    r
}

pub fn bijection_suite(n_max: usize) -> VerifyReport {
    let mut r = VerifyReport::new("bijections");
    for lambda in [2u32, 3] {
        for n in 1..=n_max.min(6) {
            for k in 1..=n {
                r.expect_ok(format!("θ n={n} k={k} λ={lambda}"), check_theta(n, k, lambda));
            }
            for k in 1..n {
                r.expect_ok(format!("η n={n} k={k} λ={lambda}"), check_eta(n, k, lambda));
            }
            for k in 0..n {
                r.expect_ok(format!("ζ n={n} k={k} λ={lambda}"), check_zeta(n, k, lambda));
            }
        }
    }
    if n_max >= 4 {
        for (inputs, result) in example::check_table() {
            r.expect_ok(inputs, result);
        }
    }
    if n_max >= 8 {
        r.expect_ok("η worked example", example::check_eta_worked_example());
    }
    r
}

pub fn correlation_suite(n_max: usize) -> VerifyReport {
    let mut r = VerifyReport::new("correlation");
    for a in 0..=n_max.min(6) {
        for a1 in 0..=a {
            for s in 0..=a {
                let st = BlockPairState::new(a1, a - a1, s).expect("s <= a");
                r.expect_eq(format!("F = a1! a2! G at {a1},{},{s}", a - a1), true, fg_consistency(&st));
                if let Some(ok) = g_recurrence_check(&st) {
                    r.expect_eq(format!("G recurrence at {a1},{},{s}", a - a1), true, ok);
                }
            }
        }
    }
    for a1 in 0..=n_max {
        let g = |a2, s| g_closed(&BlockPairState::new(a1, a2, s).expect("valid"));
        r.expect_eq(format!("G({a1},0,0)"), BigInt::from(u8::from(a1 % 2 == 0)), g(0, 0));
        r.expect_eq(format!("G({a1},0,{a1})"), BigInt::from(1), g(0, a1));
        if a1 % 2 == 0 {
            r.expect_eq(format!("G({a1},1,0)"), BigInt::from(a1 / 2), g(1, 0));
        } else {
            r.expect_eq(format!("G({a1},2,0)"), BigInt::from(((a1 + 1) / 2).pow(2)), g(2, 0));
        }
    }
    for a in 2..=n_max.min(7) {
        for s in 0..=a {
            r.expect_eq(format!("unimodality a={a} s={s}"), true, verify_unimodality(a, s, &Composition::new(vec![])));
        }
        if a + 2 <= n_max.min(7) {
            r.expect_eq(
                format!("unimodality a={a} tail=(2)"),
                true,
                verify_unimodality(a, 0, &Composition::new(vec![2])),
            );
        }
    }
    for n in 1..=n_max.min(9) {
        let report = verify_correlation(n);
        let status = if report.passed() { CaseStatus::Pass } else { CaseStatus::Fail };
        r.push(
            format!("correlation n={n}"),
            "no failing comparable pair",
            format!(
                "{} pass, {} fail, {} excluded, {} incomparable",
                report.summary.pass, report.summary.fail, report.summary.skipped_exception, report.summary.skipped_incomparable
            ),
            status,
        );
    }
    r
}

/// Every suite at the given size.
pub fn all(n_max: usize) -> Vec<VerifyReport> {
    vec![
        perm_suite(n_max),
        series_suite(n_max),
        counting_suite(n_max),
        lambda_suite(n_max),
        euler_suite(n_max),
        bijection_suite(n_max),
        correlation_suite(n_max),
    ]
}

/// The worked example over `D^2_4(2)`.
pub mod example {
    use super::*;

    /// Parses `21[3]4`: bracketed entries carry colour 2.
    pub fn parse_coloured(s: &str, prefix_len: usize, lambda: u32) -> ColouredPermutation {
        let mut image = Vec::new();
        let mut colours = BTreeMap::new();
        let mut bold = false;
        for ch in s.chars() {
            match ch {
                '[' => bold = true,
                ']' => bold = false,
                d => {
                    image.push(d.to_digit(10).expect("digit") as usize);
                    if bold {
                        colours.insert(image.len(), 2);
                    }
                }
            }
        }
        let perm = Permutation::new(image).expect("valid permutation");
        ColouredPermutation::new(perm, prefix_len, lambda, colours).expect("valid colouring")
    }

    pub const N: usize = 4;
    pub const K: usize = 2;
    pub const LAMBDA: u32 = 2;

    /// `(q, θ preimage, η preimage, ζ₁ preimage)`; `None` marks the starred
    /// row. The first number of a θ or η pair is an index when the
    /// permutation is one shorter than usual and a colour otherwise.
    pub const TABLE: [(&str, (u32, &str), (u32, &str), Option<(usize, u32, &str)>); 19] = [
        ("2134", (1, "3214"), (3, "213"), Some((3, 1, "213"))),
        ("21[3]4", (2, "213"), (4, "21[3]"), None),
        ("213[4]", (1, "321[4]"), (3, "21[3]"), Some((3, 1, "21[3]"))),
        ("21[34]", (2, "21[3]"), (2, "1[2]"), Some((3, 2, "21[3]"))),
        ("2143", (1, "4213"), (4, "213"), Some((4, 1, "213"))),
        ("3124", (2, "3214"), (2, "213"), Some((2, 1, "213"))),
        ("312[4]", (2, "321[4]"), (2, "21[3]"), Some((2, 1, "21[3]"))),
        ("3142", (1, "4312"), (4, "312"), Some((4, 1, "312"))),
        ("3214", (3, "3214"), (1, "213"), Some((1, 1, "213"))),
        ("321[4]", (3, "321[4]"), (1, "21[3]"), Some((1, 1, "21[3]"))),
        ("3241", (1, "4321"), (4, "321"), Some((4, 1, "321"))),
        ("4123", (2, "4213"), (2, "312"), Some((2, 1, "312"))),
        ("4132", (2, "4312"), (3, "312"), Some((3, 1, "312"))),
        ("41[3]2", (2, "312"), (2, "12"), Some((3, 2, "312"))),
        ("4213", (3, "4213"), (1, "312"), Some((1, 1, "312"))),
        ("4231", (2, "4321"), (3, "321"), Some((3, 1, "321"))),
        ("42[3]1", (2, "321"), (2, "21"), Some((3, 2, "321"))),
        ("4312", (3, "4312"), (1, "321"), Some((1, 1, "321"))),
        ("4321", (3, "4321"), (2, "321"), Some((2, 1, "321"))),
    ];

    pub fn theta_arg(label: u32, s: &str) -> ThetaArg {
        let digits = s.chars().filter(char::is_ascii_digit).count();
        if digits == N {
            ThetaArg::Move { index: label as usize, perm: parse_coloured(s, K + 1, LAMBDA) }
        } else {
            ThetaArg::Colour { colour: label, perm: parse_coloured(s, K, LAMBDA) }
        }
    }

    pub fn eta_arg(label: u32, s: &str) -> EtaArg {
        let digits = s.chars().filter(char::is_ascii_digit).count();
        if digits == N - 1 {
            EtaArg::Insert { value: label as usize, perm: parse_coloured(s, K, LAMBDA) }
        } else {
            EtaArg::Colour { colour: label, perm: parse_coloured(s, K - 1, LAMBDA) }
        }
    }

    /// The ζ₁ arguments of the starred row, and its ζ₂ argument.
    pub fn star() -> (&'static str, Vec<Zeta1Arg>, Zeta2Arg) {
        (
            "21[3]4",
            vec![
                Zeta1Arg { value: 3, colour: 2, perm: parse_coloured("213", K, LAMBDA) },
                Zeta1Arg { value: 4, colour: 1, perm: parse_coloured("21[3]", K, LAMBDA) },
            ],
            Zeta2Arg { colour: 2, value: 4, perm: parse_coloured("21", K, LAMBDA) },
        )
    }

    fn compare<T: PartialEq + std::fmt::Debug>(what: &str, q: &str, expected: &T, actual: &T) -> Result<(), String> {
        if expected == actual {
            Ok(())
        } else {
            Err(format!("{what} of {q}: expected {expected:?}, got {actual:?}"))
        }
    }

    fn check_row(row: &(&str, (u32, &str), (u32, &str), Option<(usize, u32, &str)>)) -> Result<String, String> {
        let (q_str, (tl, ts), (el, es), z) = *row;
        let q = parse_coloured(q_str, K, LAMBDA);
        let err = |e: crate::bijections::BijectionError| e.to_string();

        // θ lands in D^{k-1}_n, so it runs with k = 3
        let t = theta_arg(tl, ts);
        compare("θ⁻¹", q_str, &t, &theta_inverse(&q, K + 1).map_err(err)?)?;
        compare("θ", q_str, &q, &theta(&t, K + 1, N).map_err(err)?)?;

        let e = eta_arg(el, es);
        compare("η⁻¹", q_str, &e, &eta_inverse(&q, K).map_err(err)?)?;
        compare("η", q_str, &q, &eta(&e, K, N).map_err(err)?)?;

        let pre = zeta1_preimages(&q, K).map_err(err)?;
        match z {
            Some((value, colour, s)) => {
                let expected = vec![Zeta1Arg { value, colour, perm: parse_coloured(s, K, LAMBDA) }];
                compare("ζ₁⁻¹", q_str, &expected, &pre)?;
            }
            None => {
                let (_, mut expected, z2) = star();
                let mut got = pre.clone();
                expected.sort_by_key(|a| (a.value, a.colour));
                got.sort_by_key(|a| (a.value, a.colour));
                compare("ζ₁⁻¹", q_str, &expected, &got)?;
                compare("ζ₂⁻¹", q_str, &z2, &zeta2_inverse(&q, K).map_err(err)?)?;
                compare("ζ₂", q_str, &q, &zeta2(&z2, K, N).map_err(err)?)?;
            }
        }
        Ok(format!("{q_str}: θ, η and ζ match"))
    }

    /// One result per table row, plus one for the set of rows itself.
    pub fn check_table() -> Vec<(String, Result<String, String>)> {
        let listed: BTreeSet<ColouredPermutation> =
            TABLE.iter().map(|row| parse_coloured(row.0, K, LAMBDA)).collect();
        let all: BTreeSet<ColouredPermutation> = enumerate_dkn(N, K, LAMBDA).into_iter().collect();
        let set_check = if listed == all && all.len() == 19 {
            Ok("19 elements".to_string())
        } else {
            Err(format!("enumerated {} elements, table lists {}", all.len(), listed.len()))
        };
        let mut out = vec![("D^2_4(2) equals the table".to_string(), set_check)];
        for row in &TABLE {
            out.push((format!("table row {}", row.0), check_row(row)));
        }
        out
    }

    /// `η(c, 542361)` with `k = 4`, `n = 8` and the first non-default colour.
    pub fn check_eta_worked_example() -> Result<String, String> {
        let pi = parse_coloured("542361", 3, 2);
        let arg = EtaArg::Colour { colour: 2, perm: pi };
        let q = eta(&arg, 4, 8).map_err(|e| e.to_string())?;
        let expected = parse_coloured("7643[5]281", 4, 2);
        if q != expected {
            return Err(format!("got {q}, expected {expected}"));
        }
        let back = eta_inverse(&q, 4).map_err(|e| e.to_string())?;
        if back != arg {
            return Err(format!("inverse gave {back:?}"));
        }
        Ok(q.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        for report in all(4) {
            let failures: Vec<&Case> = report.cases.iter().filter(|c| c.status == CaseStatus::Fail).collect();
            assert!(failures.is_empty(), "{}: {failures:?}", report.suite);
        }
    }

    #[test]
    fn table_and_worked_example() {
        for (inputs, result) in example::check_table() {
            assert!(result.is_ok(), "{inputs}: {result:?}");
        }
        assert_eq!(example::check_eta_worked_example().unwrap(), "76435281 {5:2}");
    }

    #[test]
    fn four_methods_on_example() {
        let counts = DCounts::of(&Composition::new(vec![4, 2]));
        assert!(counts.agree());
        assert_eq!(counts.brute, BigInt::from(7));
    }
}
