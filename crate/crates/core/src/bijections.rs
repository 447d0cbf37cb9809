//! Explicit bijections behind the Euler table recurrences.
//!
//! * `theta`: `[k] × D^k_n ⊔ [2,λ] × D^{k-1}_{n-1} → D^{k-1}_n`
//! * `eta`: `[n] × D^k_{n-1} ⊔ [2,λ] × D^{k-1}_{n-2} → D^k_n`
//! * `zeta1`: `[n] × D^k_{n-1} ⊔ [2,λ] × D^k_{n-1} → D^k_n`, two-to-one on a
//!   subset that `zeta2` covers once from `[2,λ] × [k+2,n] × D^k_{n-2}`.
//!
//! Colour 1 is the default; an essential fixed point is one carrying a
//! colour above 1. Maps that shift entries carry essential colours along
//! with their positions.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::euler::{enumerate_dkn, in_dkn};
use crate::perm::{ColouredPermutation, PermError, Permutation, DEFAULT_COLOUR};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BijectionError {
    #[error("{perm} is not in D^{k}_{n}")]
    NotInDomain { perm: String, n: usize, k: usize },
    #[error("index {value} outside {lo}..={hi}")]
    IndexOutOfRange { value: usize, lo: usize, hi: usize },
    #[error("colour {colour} outside 2..={lambda}")]
    BadColour { colour: u32, lambda: u32 },
    #[error("parameters k = {k}, n = {n} are outside the map's range")]
    BadShape { k: usize, n: usize },
    #[error("at least one colour is required")]
    NoColours,
    #[error(transparent)]
    Perm(#[from] PermError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ThetaArg {
    /// `(j, π)` with `j ∈ [k]` and `π ∈ D^k_n`.
    Move { index: usize, perm: ColouredPermutation },
    /// `(c, π)` with `c ∈ [2,λ]` and `π ∈ D^{k-1}_{n-1}`.
    Colour { colour: u32, perm: ColouredPermutation },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EtaArg {
    /// `(j, π)` with `j ∈ [n]` and `π ∈ D^k_{n-1}`.
    Insert { value: usize, perm: ColouredPermutation },
    /// `(c, π)` with `c ∈ [2,λ]` and `π ∈ D^{k-1}_{n-2}`.
    Colour { colour: u32, perm: ColouredPermutation },
}

/// `(j, c, π)` with `π ∈ D^k_{n-1}`; either `c = 1` and `j ∈ [n]`, or
/// `j = k + 1` and `c ∈ [2,λ]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Zeta1Arg {
    pub value: usize,
    pub colour: u32,
    pub perm: ColouredPermutation,
}

/// `(c, j, π)` with `c ∈ [2,λ]`, `j ∈ [k+2,n]` and `π ∈ D^k_{n-2}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Zeta2Arg {
    pub colour: u32,
    pub value: usize,
    pub perm: ColouredPermutation,
}

/// A permutation with its essential colours, tracked by position while
/// entries move. Fixedness is only checked when converting back.
#[derive(Debug, Clone)]
struct Work {
    perm: Permutation,
    essential: BTreeMap<usize, u32>,
}

impl Work {
    fn from(q: &ColouredPermutation) -> Self {
        Self {
            perm: q.perm().clone(),
            essential: q.essential(),
        }
    }

    fn len(&self) -> usize {
        self.perm.len()
    }

    fn at(&self, pos: usize) -> usize {
        self.perm.at(pos)
    }

    fn insert_value(&mut self, pos: usize, value: usize) -> Result<(), PermError> {
        self.perm = self.perm.insert_value(pos, value)?;
        self.essential = std::mem::take(&mut self.essential)
            .into_iter()
            .map(|(p, c)| (if p >= pos { p + 1 } else { p }, c))
            .collect();
        Ok(())
    }

    fn remove_position(&mut self, pos: usize) -> Result<(), PermError> {
        self.perm = self.perm.remove_position(pos)?;
        self.essential.remove(&pos);
        self.essential = std::mem::take(&mut self.essential)
            .into_iter()
            .map(|(p, c)| (if p > pos { p - 1 } else { p }, c))
            .collect();
        Ok(())
    }

    fn insert_fixed(&mut self, set: &BTreeSet<usize>, colours: &BTreeMap<usize, u32>) -> Result<(), PermError> {
        for &f in set {
            self.insert_value(f, f)?;
            if let Some(&c) = colours.get(&f) {
                if c > DEFAULT_COLOUR {
                    self.essential.insert(f, c);
                }
            }
        }
        Ok(())
    }

    fn remove_fixed(&mut self, set: &BTreeSet<usize>) -> Result<(), PermError> {
        for &f in set.iter().rev() {
            if self.perm.get(f) != Some(f) {
                return Err(PermError::NotFixedPoint(f));
            }
            self.remove_position(f)?;
        }
        Ok(())
    }

    fn finish(self, prefix_len: usize, lambda: u32) -> Result<ColouredPermutation, PermError> {
        ColouredPermutation::new(self.perm, prefix_len, lambda, self.essential)
    }
}

fn require(q: &ColouredPermutation, n: usize, k: usize) -> Result<(), BijectionError> {
    if in_dkn(q, n, k) {
        Ok(())
    } else {
        Err(BijectionError::NotInDomain { perm: q.to_string(), n, k })
    }
}

fn require_index(value: usize, lo: usize, hi: usize) -> Result<(), BijectionError> {
    if (lo..=hi).contains(&value) {
        Ok(())
    } else {
        Err(BijectionError::IndexOutOfRange { value, lo, hi })
    }
}

fn require_colour(colour: u32, lambda: u32) -> Result<(), BijectionError> {
    if (2..=lambda).contains(&colour) {
        Ok(())
    } else {
        Err(BijectionError::BadColour { colour, lambda })
    }
}

fn require_lambda(lambda: u32) -> Result<(), BijectionError> {
    if lambda == 0 {
        Err(BijectionError::NoColours)
    } else {
        Ok(())
    }
}

fn essential_below(q: &BTreeMap<usize, u32>, bound: usize) -> (BTreeSet<usize>, BTreeMap<usize, u32>) {
    let colours: BTreeMap<usize, u32> = q.range(..bound).map(|(&p, &c)| (p, c)).collect();
    (colours.keys().copied().collect(), colours)
}

/// First position after `k` that is not an essential fixed point.
fn segment_end(q: &ColouredPermutation, k: usize) -> usize {
    let mut p = k + 1;
    while q.is_essential(p) {
        p += 1;
    }
    p
}

/// `θ` into `D^{k-1}_n(λ)`, for `1 <= k <= n`.
pub fn theta(arg: &ThetaArg, k: usize, n: usize) -> Result<ColouredPermutation, BijectionError> {
    if k == 0 || k > n {
        return Err(BijectionError::BadShape { k, n });
    }
    match arg {
        ThetaArg::Move { index, perm } => {
            require(perm, n, k)?;
            require_lambda(perm.lambda())?;
            require_index(*index, 1, k)?;
            let mut w = Work::from(perm);
            let v = w.at(*index);
            w.remove_position(*index)?;
            w.insert_value(k, v)?;
            Ok(w.finish(k - 1, perm.lambda())?)
        }
        ThetaArg::Colour { colour, perm } => {
            require(perm, n - 1, k - 1)?;
            require_colour(*colour, perm.lambda())?;
            let mut w = Work::from(perm);
            w.insert_fixed(&BTreeSet::from([k]), &BTreeMap::from([(k, *colour)]))?;
            Ok(w.finish(k - 1, perm.lambda())?)
        }
    }
}

pub fn theta_inverse(q: &ColouredPermutation, k: usize) -> Result<ThetaArg, BijectionError> {
    let n = q.len();
    if k == 0 || k > n {
        return Err(BijectionError::BadShape { k, n });
    }
    require(q, n, k - 1)?;
    require_lambda(q.lambda())?;
    let mut w = Work::from(q);
    if let Some(colour) = q.colour(k).filter(|&c| c > DEFAULT_COLOUR) {
        w.remove_fixed(&BTreeSet::from([k]))?;
        return Ok(ThetaArg::Colour {
            colour,
            perm: w.finish(k - 1, q.lambda())?,
        });
    }
    let v = w.at(k);
    let index = 1 + q.perm().image()[..k - 1].iter().filter(|&&x| x > v).count();
    w.remove_position(k)?;
    w.insert_value(index, v)?;
    Ok(ThetaArg::Move {
        index,
        perm: w.finish(k, q.lambda())?,
    })
}

/// First branch of `η`, shared with `ζ`: inserts `value` right after the
/// essential run that starts at `k + 1`, skipping essential fixed points of
/// `perm` lying below `value`.
fn insert_after_run(perm: &ColouredPermutation, k: usize, value: usize) -> Result<Work, BijectionError> {
    let (below, colours) = essential_below(&perm.essential(), value);
    let mut w = Work::from(perm);
    w.remove_fixed(&below)?;
    w.insert_value(k + 1, value - below.len())?;
    w.insert_fixed(&below, &colours)?;
    Ok(w)
}

/// Inverse of [`insert_after_run`] given the end `p` of the essential run.
fn remove_after_run(q: &ColouredPermutation, k: usize, p: usize) -> Result<(usize, ColouredPermutation), BijectionError> {
    let value = q.perm().at(p);
    let (below, colours) = essential_below(&q.essential(), value);
    let mut w = Work::from(q);
    w.remove_fixed(&below)?;
    w.remove_position(k + 1)?;
    w.insert_fixed(&below, &colours)?;
    Ok((value, w.finish(k, q.lambda())?))
}

/// `η` into `D^k_n(λ)`, for `1 <= k < n`.
pub fn eta(arg: &EtaArg, k: usize, n: usize) -> Result<ColouredPermutation, BijectionError> {
    if k == 0 || k >= n {
        return Err(BijectionError::BadShape { k, n });
    }
    match arg {
        EtaArg::Insert { value, perm } => {
            require(perm, n - 1, k)?;
            require_lambda(perm.lambda())?;
            require_index(*value, 1, n)?;
            Ok(insert_after_run(perm, k, *value)?.finish(k, perm.lambda())?)
        }
        EtaArg::Colour { colour, perm } => {
            require(perm, n - 2, k - 1)?;
            require_colour(*colour, perm.lambda())?;
            let essential = perm.essential();
            let fixed: BTreeSet<usize> = essential.keys().copied().collect();
            let mut w = Work::from(perm);
            w.remove_fixed(&fixed)?;
            if w.len() >= k {
                let head = &w.perm.image()[..k];
                let m = head.iter().filter(|&&x| x <= head[k - 1]).count();
                let mut sorted = w.perm.image().to_vec();
                sorted[..k].sort_unstable_by(|x, y| y.cmp(x));
                w.perm = Permutation::new(sorted)?;
                w.insert_value(k + 1, m)?;
            } else {
                // the essential run reaches the end: no entry left to rank
                w.insert_value(1, k)?;
            }
            w.insert_fixed(&BTreeSet::from([k + 1]), &BTreeMap::from([(k + 1, *colour)]))?;
            let shifted: BTreeMap<usize, u32> = essential.iter().map(|(&p, &c)| (p + 2, c)).collect();
            w.insert_fixed(&shifted.keys().copied().collect(), &shifted)?;
            Ok(w.finish(k, perm.lambda())?)
        }
    }
}

/// True when `q` has a nonempty essential run at `k + 1` followed by an
/// entry at least its own position.
fn run_then_excedance(q: &ColouredPermutation, k: usize) -> bool {
    let p = segment_end(q, k);
    p > k + 1 && p <= q.len() && q.perm().at(p) >= p
}

pub fn eta_inverse(q: &ColouredPermutation, k: usize) -> Result<EtaArg, BijectionError> {
    let n = q.len();
    if k == 0 || k >= n {
        return Err(BijectionError::BadShape { k, n });
    }
    require(q, n, k)?;
    require_lambda(q.lambda())?;
    let p = segment_end(q, k);
    if p == k + 1 || run_then_excedance(q, k) {
        let (value, perm) = remove_after_run(q, k, p)?;
        return Ok(EtaArg::Insert { value, perm });
    }
    let colour = q.colour(k + 1).expect("nonempty run starts with an essential fixed point");
    let mut rest = q.essential();
    rest.remove(&(k + 1));
    let rest_set: BTreeSet<usize> = rest.keys().copied().collect();
    let mut w = Work::from(q);
    w.remove_fixed(&rest_set)?;
    w.remove_fixed(&BTreeSet::from([k + 1]))?;
    if w.len() > k {
        let m = w.at(k + 1);
        w.remove_position(k + 1)?;
        let moved = w.at(k - m + 1);
        w.remove_position(k - m + 1)?;
        w.insert_value(k, moved)?;
    } else {
        w.remove_position(1)?;
    }
    let lowered: BTreeMap<usize, u32> = rest.iter().map(|(&p, &c)| (p - 2, c)).collect();
    w.insert_fixed(&lowered.keys().copied().collect(), &lowered)?;
    Ok(EtaArg::Colour {
        colour,
        perm: w.finish(k - 1, q.lambda())?,
    })
}

/// `ζ₁` into `D^k_n(λ)`, for `0 <= k < n`.
pub fn zeta1(arg: &Zeta1Arg, k: usize, n: usize) -> Result<ColouredPermutation, BijectionError> {
    if k >= n {
        return Err(BijectionError::BadShape { k, n });
    }
    let Zeta1Arg { value, colour, perm } = arg;
    require(perm, n - 1, k)?;
    require_lambda(perm.lambda())?;
    require_index(*value, 1, n)?;
    if *colour != DEFAULT_COLOUR {
        require_colour(*colour, perm.lambda())?;
        require_index(*value, k + 1, k + 1)?;
    }
    let mut w = insert_after_run(perm, k, *value)?;
    if *colour != DEFAULT_COLOUR {
        w.essential.insert(k + 1, *colour);
    }
    Ok(w.finish(k, perm.lambda())?)
}

/// Every argument `ζ₁` sends to `q`: one, or two when `q` has a nonempty
/// essential run at `k + 1` followed by an entry at least its own position.
pub fn zeta1_preimages(q: &ColouredPermutation, k: usize) -> Result<Vec<Zeta1Arg>, BijectionError> {
    let n = q.len();
    if k >= n {
        return Err(BijectionError::BadShape { k, n });
    }
    require(q, n, k)?;
    require_lambda(q.lambda())?;
    let mut out = Vec::new();
    if let Some(colour) = q.colour(k + 1).filter(|&c| c > DEFAULT_COLOUR) {
        out.push(Zeta1Arg {
            value: k + 1,
            colour,
            perm: q.remove_fixed_points(&BTreeSet::from([k + 1]))?,
        });
    }
    let p = segment_end(q, k);
    if p == k + 1 || run_then_excedance(q, k) {
        let (value, perm) = remove_after_run(q, k, p)?;
        out.push(Zeta1Arg {
            value,
            colour: DEFAULT_COLOUR,
            perm,
        });
    }
    Ok(out)
}

/// True when `q` has two `ζ₁` preimages.
pub fn zeta1_doubly_covered(q: &ColouredPermutation, k: usize) -> bool {
    run_then_excedance(q, k)
}

/// `ζ₂` into `D^k_n(λ)`, for `0 <= k` and `k + 2 <= n`: an essential fixed
/// point of colour `c` at `k + 1` followed by the first branch of `η` with
/// `j - 1`.
pub fn zeta2(arg: &Zeta2Arg, k: usize, n: usize) -> Result<ColouredPermutation, BijectionError> {
    if k + 2 > n {
        return Err(BijectionError::BadShape { k, n });
    }
    let Zeta2Arg { colour, value, perm } = arg;
    require(perm, n - 2, k)?;
    require_colour(*colour, perm.lambda())?;
    require_index(*value, k + 2, n)?;
    let (below, colours) = essential_below(&perm.essential(), value - 1);
    let mut w = Work::from(perm);
    w.remove_fixed(&below)?;
    w.insert_value(k + 1, k + 1)?;
    w.essential.insert(k + 1, *colour);
    w.insert_value(k + 2, value - below.len())?;
    let raised: BTreeMap<usize, u32> = colours.iter().map(|(&p, &c)| (p + 1, c)).collect();
    w.insert_fixed(&raised.keys().copied().collect(), &raised)?;
    Ok(w.finish(k, perm.lambda())?)
}

pub fn zeta2_inverse(q: &ColouredPermutation, k: usize) -> Result<Zeta2Arg, BijectionError> {
    let n = q.len();
    if k + 2 > n {
        return Err(BijectionError::BadShape { k, n });
    }
    require(q, n, k)?;
    if !run_then_excedance(q, k) {
        return Err(BijectionError::NotInDomain { perm: q.to_string(), n, k });
    }
    let colour = q.colour(k + 1).expect("run starts with an essential fixed point");
    let inner = q.remove_fixed_points(&BTreeSet::from([k + 1]))?;
    let p = segment_end(&inner, k);
    let (value, perm) = remove_after_run(&inner, k, p)?;
    Ok(Zeta2Arg {
        colour,
        value: value + 1,
        perm,
    })
}

/// Every argument of `θ` for `D^{k-1}_n(λ)`.
pub fn theta_domain(n: usize, k: usize, lambda: u32) -> Vec<ThetaArg> {
    let mut out = Vec::new();
    for perm in enumerate_dkn(n, k, lambda) {
        out.extend((1..=k).map(|index| ThetaArg::Move { index, perm: perm.clone() }));
    }
    for colour in 2..=lambda {
        for perm in enumerate_dkn(n - 1, k - 1, lambda) {
            out.push(ThetaArg::Colour { colour, perm });
        }
    }
    out
}

/// Every argument of `η` for `D^k_n(λ)`.
pub fn eta_domain(n: usize, k: usize, lambda: u32) -> Vec<EtaArg> {
    let mut out = Vec::new();
    for perm in enumerate_dkn(n - 1, k, lambda) {
        out.extend((1..=n).map(|value| EtaArg::Insert { value, perm: perm.clone() }));
    }
    for colour in 2..=lambda {
        for perm in enumerate_dkn(n - 2, k - 1, lambda) {
            out.push(EtaArg::Colour { colour, perm });
        }
    }
    out
}

/// Every argument of `ζ₁` for `D^k_n(λ)`.
pub fn zeta1_domain(n: usize, k: usize, lambda: u32) -> Vec<Zeta1Arg> {
    let mut out = Vec::new();
    for perm in enumerate_dkn(n - 1, k, lambda) {
        for value in 1..=n {
            out.push(Zeta1Arg { value, colour: DEFAULT_COLOUR, perm: perm.clone() });
        }
        for colour in 2..=lambda {
            out.push(Zeta1Arg { value: k + 1, colour, perm: perm.clone() });
        }
    }
    out
}

/// Every argument of `ζ₂` for `D^k_n(λ)`.
pub fn zeta2_domain(n: usize, k: usize, lambda: u32) -> Vec<Zeta2Arg> {
    let mut out = Vec::new();
    for perm in enumerate_dkn(n - 2, k, lambda) {
        for colour in 2..=lambda {
            for value in k + 2..=n {
                out.push(Zeta2Arg { colour, value, perm: perm.clone() });
            }
        }
    }
    out
}

/// How often each element of `D^k_n(λ)` is hit by `map` over `domain`.
/// Elements never hit are present with multiplicity zero.
pub fn multiplicities<A>(
    domain: &[A],
    n: usize,
    k: usize,
    lambda: u32,
    map: impl Fn(&A) -> Result<ColouredPermutation, BijectionError>,
) -> Result<BTreeMap<ColouredPermutation, usize>, BijectionError> {
    let mut hits: BTreeMap<ColouredPermutation, usize> =
        enumerate_dkn(n, k, lambda).into_iter().map(|q| (q, 0)).collect();
    for arg in domain {
        let q = map(arg)?;
        match hits.get_mut(&q) {
            Some(count) => *count += 1,
            None => return Err(BijectionError::NotInDomain { perm: q.to_string(), n, k }),
        }
    }
    Ok(hits)
}

/// Checks `θ` on `D^{k-1}_n(λ)` in both directions; returns the domain size.
pub fn check_theta(n: usize, k: usize, lambda: u32) -> Result<usize, String> {
    let domain = theta_domain(n, k, lambda);
    for arg in &domain {
        let q = theta(arg, k, n).map_err(|e| e.to_string())?;
        let back = theta_inverse(&q, k).map_err(|e| e.to_string())?;
        if &back != arg {
            return Err(format!("θ: {q} does not return to its argument"));
        }
    }
    let hits = multiplicities(&domain, n, k - 1, lambda, |a| theta(a, k, n)).map_err(|e| e.to_string())?;
    if let Some((q, c)) = hits.iter().find(|(_, &c)| c != 1) {
        return Err(format!("θ: {q} hit {c} times"));
    }
    Ok(domain.len())
}

/// Checks `η` on `D^k_n(λ)` in both directions; returns the domain size.
pub fn check_eta(n: usize, k: usize, lambda: u32) -> Result<usize, String> {
    let domain = eta_domain(n, k, lambda);
    for arg in &domain {
        let q = eta(arg, k, n).map_err(|e| e.to_string())?;
        let back = eta_inverse(&q, k).map_err(|e| e.to_string())?;
        if &back != arg {
            return Err(format!("η: {q} does not return to its argument"));
        }
    }
    let hits = multiplicities(&domain, n, k, lambda, |a| eta(a, k, n)).map_err(|e| e.to_string())?;
    if let Some((q, c)) = hits.iter().find(|(_, &c)| c != 1) {
        return Err(format!("η: {q} hit {c} times"));
    }
    Ok(domain.len())
}

/// Checks that `ζ₁` hits each element of `D^k_n(λ)` twice on the doubly
/// covered set and once elsewhere, that `ζ₂` hits exactly the doubly covered
/// set once, and that both inverses agree. Returns the number of doubly
/// covered elements.
pub fn check_zeta(n: usize, k: usize, lambda: u32) -> Result<usize, String> {
    let one = zeta1_domain(n, k, lambda);
    let hits1 = multiplicities(&one, n, k, lambda, |a| zeta1(a, k, n)).map_err(|e| e.to_string())?;
    let hits2 = if k + 2 <= n {
        let two = zeta2_domain(n, k, lambda);
        for arg in &two {
            let q = zeta2(arg, k, n).map_err(|e| e.to_string())?;
            if &zeta2_inverse(&q, k).map_err(|e| e.to_string())? != arg {
                return Err(format!("ζ₂: {q} does not return to its argument"));
            }
        }
        multiplicities(&two, n, k, lambda, |a| zeta2(a, k, n)).map_err(|e| e.to_string())?
    } else {
        hits1.keys().map(|q| (q.clone(), 0)).collect()
    };
    let mut doubled = 0;
    for (q, &c1) in &hits1 {
        let double = zeta1_doubly_covered(q, k);
        doubled += usize::from(double);
        let expected = if double { 2 } else { 1 };
        if c1 != expected || hits2[q] != usize::from(double) {
            return Err(format!("ζ: {q} hit {c1} and {} times", hits2[q]));
        }
        let pre = zeta1_preimages(q, k).map_err(|e| e.to_string())?;
        if pre.len() != expected {
            return Err(format!("ζ₁: {q} lists {} preimages", pre.len()));
        }
        for arg in &pre {
            if &zeta1(arg, k, n).map_err(|e| e.to_string())? != q {
                return Err(format!("ζ₁: listed preimage of {q} maps elsewhere"));
            }
        }
    }
    Ok(doubled)
}
