use std::fmt::Write as _;
use std::str::FromStr;

use derangements::bijections::{
    eta, eta_inverse, theta, theta_inverse, zeta1, zeta1_preimages, zeta2, zeta2_inverse, EtaArg, ThetaArg,
    Zeta1Arg, Zeta2Arg,
};
use derangements::correlation::{unimodality_steps, verify_correlation, PairStatus};
use derangements::counting::{
    count_dhat, count_dj, count_dstar, count_sorted_derangement_preimage, sorted_preimage_via_members,
};
use derangements::euler::build_tables;
use derangements::lambda::{derangement_basis_count, explicit_d_count, lambda_factorial, lamfak_rhs};
use derangements::perm::ColouredPermutationRepr;
use derangements::series::{coeff_dj, MultiSeries};
use derangements::verify::{self, VerifyReport};
use derangements::{ColouredPermutation, Composition, LambdaPolynomial};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cache::{make_key, Cache};
use crate::{BijectionArgs, CountArgs, LamfakArgs, MapName, Method, Mode, SeriesArgs, Suite, TableArgs, TableFormat, TableKind};

pub enum Outcome {
    /// `ok = false` maps to exit code 1.
    Json { value: Value, ok: bool },
    Text(String),
}

impl Outcome {
    fn ok(value: Value) -> Self {
        Self::Json { value, ok: true }
    }
}

type CmdResult = Result<Outcome, String>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaArg {
    Symbolic,
    Value(i64),
}

impl FromStr for LambdaArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("symbolic") {
            return Ok(Self::Symbolic);
        }
        s.parse()
            .map(Self::Value)
            .map_err(|_| format!("expected an integer or `symbolic`, got `{s}`"))
    }
}

impl LambdaArg {
    fn to_json(self) -> Value {
        match self {
            Self::Symbolic => json!("symbolic"),
            Self::Value(v) => json!(v.to_string()),
        }
    }

    fn render(self, p: &LambdaPolynomial) -> Value {
        match self {
            Self::Symbolic => json!(p.to_decimal_strings()),
            Self::Value(v) => json!(p.eval(&BigInt::from(v)).to_string()),
        }
    }
}

fn parse_composition(s: &str) -> Result<Composition, String> {
    s.parse().map_err(|e| format!("bad composition `{s}`: {e}"))
}

fn with_cache(
    cache: Option<&Cache>,
    command: &str,
    params: Value,
    compute: impl FnOnce() -> Result<Value, String>,
) -> Result<Value, String> {
    let key = make_key(command, params);
    if let Some(mut hit) = cache.and_then(|c| c.get(&key)) {
        hit["cached"] = json!(true);
        return Ok(hit);
    }
    let mut value = compute()?;
    if let Some(c) = cache {
        c.put(&key, &value);
    }
    value["cached"] = json!(false);
    Ok(value)
}

fn enum_name<T: clap::ValueEnum>(v: T) -> String {
    v.to_possible_value().map(|p| p.get_name().to_string()).unwrap_or_default()
}

pub fn count(args: &CountArgs, cache: Option<&Cache>) -> CmdResult {
    let a = parse_composition(&args.composition)?;
    let k = a.num_blocks();
    let j = args.j.unwrap_or(k);
    let mode = enum_name(args.mode);
    let method = enum_name(args.method);
    let params = json!({"composition": a.parts(), "mode": mode, "j": j, "method": method});
    let value = with_cache(cache, "count", params, || {
        let unsupported = || format!("method `{method}` is not available for mode `{mode}` with j = {j}");
        let n = match (args.mode, args.method) {
            (Mode::Dj, Method::Brute) => count_dj(&a, j).map_err(|e| e.to_string())?,
            (Mode::Dj, Method::Genfunc) => coeff_dj(&a, j).map_err(|e| e.to_string())?,
            (Mode::Dj, Method::Factorial) if j == k => explicit_d_count(&a),
            (Mode::Dj, Method::DerangementBasis) if j == k => {
                derangement_basis_count(&a).map_err(|e| e.to_string())?
            }
            (Mode::Dstar, Method::Brute) => count_dstar(&a, j).map_err(|e| e.to_string())?,
            (Mode::Dhat, Method::Brute) => count_dhat(&a, j).map_err(|e| e.to_string())?,
            (Mode::Preimage, Method::Brute) => count_sorted_derangement_preimage(&a),
            (Mode::Preimage, Method::Members) => sorted_preimage_via_members(&a),
            (Mode::Preimage, Method::Factorial) => lamfak_rhs(&a)
                .as_constant()
                .ok_or_else(|| "λ-factorial sum is not constant".to_string())?,
            _ => return Err(unsupported()),
        };
        Ok(json!({
            "command": "count",
            "composition": a.parts(),
            "mode": mode,
            "j": j,
            "method": method,
            "count": n.to_string(),
        }))
    })?;
    Ok(Outcome::ok(value))
}

pub fn series(args: &SeriesArgs, cache: Option<&Cache>) -> CmdResult {
    let a = parse_composition(&args.composition)?;
    let j = args.j.unwrap_or(a.num_blocks());
    let params = json!({"composition": a.parts(), "j": j, "terms": args.terms});
    let value = with_cache(cache, "series", params, || {
        let s = MultiSeries::block_generating_function(j, a.parts().to_vec()).map_err(|e| e.to_string())?;
        let mut out = json!({
            "command": "series",
            "composition": a.parts(),
            "j": j,
            "coefficient": s.coeff(a.parts()).to_string(),
        });
        if args.terms {
            let terms: Vec<Value> = s
                .terms()
                .filter(|(_, c)| **c != BigInt::from(0))
                .map(|(e, c)| json!({"exponent": e, "coefficient": c.to_string()}))
                .collect();
            out["terms"] = json!(terms);
        }
        Ok(out)
    })?;
    Ok(Outcome::ok(value))
}

pub fn lamfak(args: &LamfakArgs, cache: Option<&Cache>) -> CmdResult {
    let lambda = args.lambda;
    let (params, subject) = match (&args.target.n, &args.target.composition) {
        (Some(n), _) => (json!({"n": n, "lambda": lambda.to_json()}), Err(*n)),
        (None, Some(s)) => {
            let a = parse_composition(s)?;
            (json!({"composition": a.parts(), "lambda": lambda.to_json()}), Ok(a))
        }
        (None, None) => return Err("one of --n or --composition is required".into()),
    };
    let value = with_cache(cache, "lamfak", params, || {
        Ok(match subject {
            Err(n) => {
                let p = lambda_factorial(n);
                json!({
                    "command": "lamfak",
                    "n": n,
                    "lambda": lambda.to_json(),
                    "value": lambda.render(&p),
                    "display": p.to_string(),
                })
            }
            Ok(a) => {
                let p = lamfak_rhs(&a);
                json!({
                    "command": "lamfak",
                    "composition": a.parts(),
                    "lambda": lambda.to_json(),
                    "value": lambda.render(&p),
                    "constant": p.as_constant().is_some(),
                    "display": p.to_string(),
                })
            }
        })
    })?;
    Ok(Outcome::ok(value))
}

pub fn table(args: &TableArgs, cache: Option<&Cache>) -> CmdResult {
    if args.format == TableFormat::Bfile && args.lambda == LambdaArg::Symbolic {
        return Err("bfile output needs an integer --lambda".into());
    }
    let kind = enum_name(args.kind);
    let params = json!({"n_max": args.n_max, "lambda": args.lambda.to_json(), "kind": kind});
    let value = with_cache(cache, "table", params, || {
        let t = build_tables(args.n_max).map_err(|e| e.to_string())?;
        let rows = match args.kind {
            TableKind::E => t.e_rows(),
            TableKind::D => t.d_rows(),
        };
        let rows: Vec<Vec<Value>> =
            rows.iter().map(|row| row.iter().map(|p| args.lambda.render(p)).collect()).collect();
        Ok(json!({
            "command": "table",
            "kind": kind,
            "n_max": args.n_max,
            "lambda": args.lambda.to_json(),
            "rows": rows,
        }))
    })?;
    if args.format == TableFormat::Json {
        return Ok(Outcome::ok(value));
    }
    let rows: Vec<Vec<Value>> = serde_json::from_value(value["rows"].clone()).map_err(|e| e.to_string())?;
    let cell = |v: &Value, sep: &str| match v {
        Value::Array(cs) => cs.iter().filter_map(Value::as_str).collect::<Vec<_>>().join(sep),
        other => other.as_str().unwrap_or_default().to_string(),
    };
    let mut out = String::new();
    match args.format {
        TableFormat::Csv => {
            out.push_str("n,k,value\n");
            for (n, row) in rows.iter().enumerate() {
                for (k, v) in row.iter().enumerate() {
                    let _ = writeln!(out, "{n},{k},{}", cell(v, " "));
                }
            }
        }
        TableFormat::Text => {
            for (n, row) in rows.iter().enumerate() {
                let cells: Vec<String> = row
                    .iter()
                    .map(|v| match v {
                        Value::Array(_) => poly_from_json(v).to_string(),
                        other => other.as_str().unwrap_or_default().to_string(),
                    })
                    .collect();
                let _ = writeln!(out, "n={n}: {}", cells.join(" | "));
            }
        }
        TableFormat::Bfile => {
            let mut index = 0;
            for row in &rows {
                for v in row {
                    let _ = writeln!(out, "{index} {}", cell(v, " "));
                    index += 1;
                }
            }
        }
        TableFormat::Json => unreachable!(),
    }
    Ok(Outcome::Text(out))
}

fn poly_from_json(v: &Value) -> LambdaPolynomial {
    let coeffs = v
        .as_array()
        .map(|cs| cs.iter().filter_map(|c| c.as_str()?.parse::<BigInt>().ok()).collect())
        .unwrap_or_default();
    LambdaPolynomial::new(coeffs)
}

/// Plain structs rather than an untagged enum, since buffered input loses
/// the string-to-integer key conversion that `colours` needs.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct IndexWire {
    index: usize,
    perm: ColouredPermutationRepr,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ValueWire {
    value: usize,
    perm: ColouredPermutationRepr,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ColourWire {
    colour: u32,
    perm: ColouredPermutationRepr,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairWire {
    value: usize,
    colour: u32,
    perm: ColouredPermutationRepr,
}

#[derive(Debug, Serialize)]
struct CpOut {
    perm: Vec<usize>,
    colours: std::collections::BTreeMap<usize, u32>,
    display: String,
}

fn cp_out(q: &ColouredPermutation) -> CpOut {
    let repr = q.to_repr();
    CpOut { perm: repr.perm, colours: repr.colours, display: q.to_string() }
}

fn theta_out(a: &ThetaArg) -> Value {
    match a {
        ThetaArg::Move { index, perm } => json!({"index": index, "perm": cp_out(perm)}),
        ThetaArg::Colour { colour, perm } => json!({"colour": colour, "perm": cp_out(perm)}),
    }
}

fn eta_out(a: &EtaArg) -> Value {
    match a {
        EtaArg::Insert { value, perm } => json!({"value": value, "perm": cp_out(perm)}),
        EtaArg::Colour { colour, perm } => json!({"colour": colour, "perm": cp_out(perm)}),
    }
}

fn coloured(repr: ColouredPermutationRepr, prefix: usize, lambda: u32) -> Result<ColouredPermutation, String> {
    repr.into_coloured(prefix, lambda).map_err(|e| e.to_string())
}

pub fn bijection(args: &BijectionArgs) -> CmdResult {
    let (k, lambda) = (args.k, args.lambda);
    let raw: Value = serde_json::from_str(&args.arg).map_err(|e| format!("--arg is not JSON: {e}"))?;
    let parse = |what: &'static str| move |e: serde_json::Error| format!("--arg is not a valid {what} argument: {e}");
    let need_n = || args.n.ok_or_else(|| "--n is required for forward maps".to_string());
    let inverse_input = |prefix: usize| -> Result<ColouredPermutation, String> {
        let repr: ColouredPermutationRepr =
            serde_json::from_value(raw.clone()).map_err(|e| format!("--arg is not a coloured permutation: {e}"))?;
        let q = coloured(repr, prefix, lambda)?;
        if let Some(n) = args.n.filter(|&n| n != q.len()) {
            return Err(format!("--n {n} does not match the argument length {}", q.len()));
        }
        Ok(q)
    };
    let err = |e: derangements::bijections::BijectionError| e.to_string();
    let result = match args.map {
        MapName::Theta => {
            let arg = match serde_json::from_value::<IndexWire>(raw.clone()) {
                Ok(w) => ThetaArg::Move { index: w.index, perm: coloured(w.perm, k, lambda)? },
                Err(_) => {
                    let w: ColourWire = serde_json::from_value(raw.clone()).map_err(parse("θ"))?;
                    ThetaArg::Colour { colour: w.colour, perm: coloured(w.perm, k.saturating_sub(1), lambda)? }
                }
            };
            json!(cp_out(&theta(&arg, k, need_n()?).map_err(err)?))
        }
        MapName::ThetaInverse => {
            let q = inverse_input(k.saturating_sub(1))?;
            theta_out(&theta_inverse(&q, k).map_err(err)?)
        }
        MapName::Eta => {
            let arg = match serde_json::from_value::<ValueWire>(raw.clone()) {
                Ok(w) => EtaArg::Insert { value: w.value, perm: coloured(w.perm, k, lambda)? },
                Err(_) => {
                    let w: ColourWire = serde_json::from_value(raw.clone()).map_err(parse("η"))?;
                    EtaArg::Colour { colour: w.colour, perm: coloured(w.perm, k.saturating_sub(1), lambda)? }
                }
            };
            json!(cp_out(&eta(&arg, k, need_n()?).map_err(err)?))
        }
        MapName::EtaInverse => eta_out(&eta_inverse(&inverse_input(k)?, k).map_err(err)?),
        MapName::Zeta1 => {
            let w: PairWire = serde_json::from_value(raw.clone()).map_err(parse("ζ₁"))?;
            let arg = Zeta1Arg { value: w.value, colour: w.colour, perm: coloured(w.perm, k, lambda)? };
            json!(cp_out(&zeta1(&arg, k, need_n()?).map_err(err)?))
        }
        MapName::Zeta1Preimages => {
            let pre = zeta1_preimages(&inverse_input(k)?, k).map_err(err)?;
            let list: Vec<Value> = pre
                .iter()
                .map(|a| json!({"value": a.value, "colour": a.colour, "perm": cp_out(&a.perm)}))
                .collect();
            json!(list)
        }
        MapName::Zeta2 => {
            let w: PairWire = serde_json::from_value(raw.clone()).map_err(parse("ζ₂"))?;
            let arg = Zeta2Arg { colour: w.colour, value: w.value, perm: coloured(w.perm, k, lambda)? };
            json!(cp_out(&zeta2(&arg, k, need_n()?).map_err(err)?))
        }
        MapName::Zeta2Inverse => {
            let a = zeta2_inverse(&inverse_input(k)?, k).map_err(err)?;
            json!({"colour": a.colour, "value": a.value, "perm": cp_out(&a.perm)})
        }
    };
    Ok(Outcome::ok(json!({
        "command": "bijection",
        "map": enum_name(args.map),
        "k": k,
        "lambda": lambda,
        "result": result,
    })))
}

fn reports_outcome(reports: Vec<VerifyReport>) -> Outcome {
    let ok = reports.iter().all(VerifyReport::passed);
    Outcome::Json { value: json!({"command": "verify", "passed": ok, "suites": reports}), ok }
}

pub fn verify(suite: &Suite) -> CmdResult {
    Ok(match suite {
        Suite::All(m) => reports_outcome(verify::all(m.n_max)),
        Suite::Perm(m) => reports_outcome(vec![verify::perm_suite(m.n_max)]),
        Suite::Series(m) => reports_outcome(vec![verify::series_suite(m.n_max)]),
        Suite::Counting(m) => reports_outcome(vec![verify::counting_suite(m.n_max)]),
        Suite::Lambda(m) => reports_outcome(vec![verify::lambda_suite(m.n_max)]),
        Suite::Euler(m) => reports_outcome(vec![verify::euler_suite(m.n_max)]),
        Suite::Bijections(m) => reports_outcome(vec![verify::bijection_suite(m.n_max)]),
        Suite::Correlation { n } => {
            if *n == 0 {
                return Err("--n must be positive".into());
            }
            let report = verify_correlation(*n);
            let ok = report.passed();
            Outcome::Json { value: json!({"command": "verify", "passed": ok, "correlation": report}), ok }
        }
        Suite::Unimodality { a, s, tail } => {
            let tail = parse_composition(tail)?;
            let steps = unimodality_steps(*a, *s, &tail);
            let ok = steps.iter().all(|st| st.status != PairStatus::Fail);
            Outcome::Json { value: json!({"command": "verify", "passed": ok, "unimodality": steps}), ok }
        }
    })
}
