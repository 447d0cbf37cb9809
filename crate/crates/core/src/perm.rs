//! Permutations in one-line notation, block compositions, fixed point
//! coloured permutations, and the insertion/deletion/sorting maps the rest
//! of the crate is built from.
//!
//! Positions and values are 1-based everywhere, including the serialized
//! forms.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("not a permutation of 1..={n}: {image:?}")]
    NotBijective { n: usize, image: Vec<usize> },
    #[error("position {pos} out of range 1..={max}")]
    PositionOutOfRange { pos: usize, max: usize },
    #[error("value {value} out of range 1..={max}")]
    ValueOutOfRange { value: usize, max: usize },
    #[error("permutation has length {perm} but the composition sums to {composition}")]
    SizeMismatch { perm: usize, composition: usize },
    #[error("position {0} is not a fixed point")]
    NotFixedPoint(usize),
    #[error("colour {colour} at position {pos} outside 1..={lambda}")]
    InvalidColour { pos: usize, colour: u32, lambda: u32 },
    #[error("colour assigned to position {0}, which is not an in-scope fixed point")]
    StrayColour(usize),
    #[error("in-scope fixed point at position {0} but there are no colours")]
    ForbiddenFixedPoint(usize),
    #[error("cannot parse {0:?}")]
    Parse(String),
}

/// Rearranges `items` into the next lexicographically larger arrangement.
/// Returns `false` (leaving the slice sorted ascending) after the last one.
/// Repeated items are handled, so this also walks multiset permutations.
pub fn next_permutation<T: Ord>(items: &mut [T]) -> bool {
    if items.len() < 2 {
        return false;
    }
    let mut i = items.len() - 1;
    while i > 0 && items[i - 1] >= items[i] {
        i -= 1;
    }
    if i == 0 {
        items.reverse();
        return false;
    }
    let mut j = items.len() - 1;
    while items[j] <= items[i - 1] {
        j -= 1;
    }
    items.swap(i - 1, j);
    items[i..].reverse();
    true
}

/// Position class relative to the diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PositionKind {
    Excedance,
    Deficiency,
    Fixed,
}

/// A permutation of `1..=n` in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self, PermError> {
        let n = image.len();
        let mut seen = vec![false; n + 1];
        for &v in &image {
            if v == 0 || v > n || seen[v] {
                return Err(PermError::NotBijective { n, image });
            }
            seen[v] = true;
        }
        Ok(Self { image })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            image: (1..=n).collect(),
        }
    }

    /// Relabels a word of distinct integers by rank, e.g. `5 2 9` becomes `2 1 3`.
    pub fn standardize(word: &[usize]) -> Self {
        let mut order: Vec<usize> = (0..word.len()).collect();
        order.sort_by_key(|&i| word[i]);
        let mut image = vec![0; word.len()];
        for (rank, &i) in order.iter().enumerate() {
            image[i] = rank + 1;
        }
        Self { image }
    }

    /// Every permutation of `1..=n` in lexicographic order.
    pub fn all(n: usize) -> AllPermutations {
        AllPermutations {
            next: Some((1..=n).collect()),
        }
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn into_image(self) -> Vec<usize> {
        self.image
    }

    /// The value at 1-based position `pos`.
    ///
    /// Panics if `pos` is outside `1..=n`.
    pub fn at(&self, pos: usize) -> usize {
        self.image[pos - 1]
    }

    pub fn get(&self, pos: usize) -> Option<usize> {
        pos.checked_sub(1).and_then(|i| self.image.get(i).copied())
    }

    fn check_position(&self, pos: usize, max: usize) -> Result<(), PermError> {
        if pos == 0 || pos > max {
            Err(PermError::PositionOutOfRange { pos, max })
        } else {
            Ok(())
        }
    }

    pub fn descent_set(&self) -> BTreeSet<usize> {
        self.image
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[0] > w[1])
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub fn fixed_points(&self) -> BTreeSet<usize> {
        self.image
            .iter()
            .enumerate()
            .filter(|&(i, &v)| v == i + 1)
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub fn fixed_point_count(&self) -> usize {
        self.image
            .iter()
            .enumerate()
            .filter(|&(i, &v)| v == i + 1)
            .count()
    }

    pub fn is_derangement(&self) -> bool {
        self.fixed_point_count() == 0
    }

    pub fn classify(&self, pos: usize) -> Result<PositionKind, PermError> {
        self.check_position(pos, self.len())?;
        let v = self.at(pos);
        Ok(match v.cmp(&pos) {
            std::cmp::Ordering::Greater => PositionKind::Excedance,
            std::cmp::Ordering::Less => PositionKind::Deficiency,
            std::cmp::Ordering::Equal => PositionKind::Fixed,
        })
    }

    fn check_size(&self, a: &Composition) -> Result<(), PermError> {
        if self.len() != a.total() {
            Err(PermError::SizeMismatch {
                perm: self.len(),
                composition: a.total(),
            })
        } else {
            Ok(())
        }
    }

    /// Whether the permutation strictly decreases inside every block of `a`.
    pub fn is_member(&self, a: &Composition) -> Result<bool, PermError> {
        self.check_size(a)?;
        Ok(a.blocks().all(|block| {
            let (lo, hi) = (*block.start(), *block.end());
            lo >= hi || self.image[lo - 1..hi].windows(2).all(|w| w[0] > w[1])
        }))
    }

    /// Puts `value` at `pos`, shifting later entries right and bumping every
    /// existing value `>= value` by one. The result has length `n + 1`.
    pub fn insert_value(&self, pos: usize, value: usize) -> Result<Self, PermError> {
        let n = self.len();
        self.check_position(pos, n + 1)?;
        if value == 0 || value > n + 1 {
            return Err(PermError::ValueOutOfRange { value, max: n + 1 });
        }
        let mut image = Vec::with_capacity(n + 1);
        image.extend(self.image.iter().map(|&v| if v >= value { v + 1 } else { v }));
        image.insert(pos - 1, value);
        Ok(Self { image })
    }

    /// Deletes the entry at `pos` and closes the gap in the values.
    pub fn remove_position(&self, pos: usize) -> Result<Self, PermError> {
        self.check_position(pos, self.len())?;
        let removed = self.at(pos);
        let image = self
            .image
            .iter()
            .enumerate()
            .filter(|&(i, _)| i + 1 != pos)
            .map(|(_, &v)| if v > removed { v - 1 } else { v })
            .collect();
        Ok(Self { image })
    }

    pub fn insert_fixed_point(&self, pos: usize) -> Result<Self, PermError> {
        self.insert_value(pos, pos)
    }

    /// Inserts fixed points at every position of `set`, smallest first.
    pub fn insert_fixed_points(&self, set: &BTreeSet<usize>) -> Result<Self, PermError> {
        set.iter()
            .try_fold(self.clone(), |p, &f| p.insert_fixed_point(f))
    }

    /// Removes the fixed points at `set`, largest first.
    pub fn remove_fixed_points(&self, set: &BTreeSet<usize>) -> Result<Self, PermError> {
        set.iter().rev().try_fold(self.clone(), |p, &f| {
            if p.get(f) != Some(f) {
                return Err(PermError::NotFixedPoint(f));
            }
            p.remove_position(f)
        })
    }

    /// Sorts the entries of each block of `a` into decreasing order.
    pub fn sort_blocks(&self, a: &Composition) -> Result<Self, PermError> {
        self.check_size(a)?;
        let mut image = self.image.clone();
        for block in a.blocks() {
            let (lo, hi) = (*block.start(), *block.end());
            if lo <= hi {
                image[lo - 1..hi].sort_unstable_by(|x, y| y.cmp(x));
            }
        }
        Ok(Self { image })
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = PermError;

    fn try_from(image: Vec<usize>) -> Result<Self, Self::Error> {
        Self::new(image)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.image
    }
}

/// Single digits are written without separators while `n <= 9`.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.len() <= 9 { "" } else { "," };
        let mut first = true;
        for v in &self.image {
            if !first {
                f.write_str(sep)?;
            }
            first = false;
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Accepts `"3214"` (digits only) or `"3,2,1,4"`; the empty string is the
/// empty permutation.
impl FromStr for Permutation {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let image: Option<Vec<usize>> = if s.is_empty() {
            Some(Vec::new())
        } else if s.contains(',') {
            s.split(',').map(|t| t.trim().parse::<usize>().ok()).collect()
        } else {
            s.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect()
        };
        Self::new(image.ok_or_else(|| PermError::Parse(s.to_string()))?)
    }
}

pub struct AllPermutations {
    next: Option<Vec<usize>>,
}

impl Iterator for AllPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut following = current.clone();
        if next_permutation(&mut following) {
            self.next = Some(following);
        }
        Some(Permutation { image: current })
    }
}

/// Ordered block lengths `a_1, ..., a_k`; zero parts are allowed and give
/// empty blocks.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<usize>", into = "Vec<usize>")]
pub struct Composition {
    parts: Vec<usize>,
}

impl Composition {
    pub fn new(parts: Vec<usize>) -> Self {
        Self { parts }
    }

    /// All compositions of `n` into positive parts, in lexicographic order.
    pub fn all_positive(n: usize) -> Vec<Composition> {
        fn go(rest: usize, prefix: &mut Vec<usize>, out: &mut Vec<Composition>) {
            if rest == 0 {
                out.push(Composition::new(prefix.clone()));
                return;
            }
            for first in 1..=rest {
                prefix.push(first);
                go(rest - first, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        go(n, &mut Vec::new(), &mut out);
        out
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn num_blocks(&self) -> usize {
        self.parts.len()
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    /// `c_j`, the sum of the first `j` parts.
    pub fn boundary(&self, j: usize) -> usize {
        self.parts[..j].iter().sum()
    }

    /// Positions of block `j` (1-based). Empty when `a_j = 0`.
    pub fn block(&self, j: usize) -> RangeInclusive<usize> {
        let start = self.boundary(j - 1) + 1;
        start..=start + self.parts[j - 1] - 1
    }

    pub fn blocks(&self) -> impl Iterator<Item = RangeInclusive<usize>> + '_ {
        let mut start = 1;
        self.parts.iter().map(move |&len| {
            let r = start..=start + len - 1;
            start += len;
            r
        })
    }

    /// The block containing position `pos`, if any.
    pub fn block_of(&self, pos: usize) -> Option<usize> {
        let mut end = 0;
        for (j, &len) in self.parts.iter().enumerate() {
            end += len;
            if pos >= 1 && pos <= end && len > 0 {
                return Some(j + 1);
            }
        }
        None
    }

    /// A copy with `a_j` replaced by `len`.
    pub fn with_part(&self, j: usize, len: usize) -> Self {
        let mut parts = self.parts.clone();
        parts[j - 1] = len;
        Self { parts }
    }

    pub fn factorial_product(&self) -> BigUint {
        self.parts.iter().map(|&a| factorial(a)).product()
    }

    /// Parts sorted into decreasing order, as a partition of the total.
    pub fn sorted_parts(&self) -> Vec<usize> {
        let mut p = self.parts.clone();
        p.sort_unstable_by(|x, y| y.cmp(x));
        p
    }

    /// One nonempty block of odd length, ignoring zero parts.
    pub fn is_single_odd_block(&self) -> bool {
        let nonzero: Vec<_> = self.parts.iter().filter(|&&a| a > 0).collect();
        nonzero.len() == 1 && nonzero[0] % 2 == 1
    }
}

impl From<Vec<usize>> for Composition {
    fn from(parts: Vec<usize>) -> Self {
        Self { parts }
    }
}

impl From<Composition> for Vec<usize> {
    fn from(a: Composition) -> Self {
        a.parts
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Comma-separated nonnegative parts, e.g. `"4,2"` or `"2,0,1"`.
impl FromStr for Composition {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.is_empty() {
            return Ok(Self::new(Vec::new()));
        }
        s.split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map(Self::new)
            .map_err(|_| PermError::Parse(s.to_string()))
    }
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// The reserved default colour of a fixed point.
pub const DEFAULT_COLOUR: u32 = 1;

/// A permutation whose fixed points at positions after `prefix_len` each
/// carry one of `lambda` colours. Fixed points inside the prefix are not
/// coloured.
///
/// The colour map always has exactly the in-scope fixed points as its
/// domain; colour 1 is the default and colours above 1 mark essential
/// fixed points.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColouredPermutation {
    perm: Permutation,
    prefix_len: usize,
    lambda: u32,
    colours: BTreeMap<usize, u32>,
}

impl ColouredPermutation {
    /// In-scope fixed points missing from `colours` get the default colour.
    pub fn new(
        perm: Permutation,
        prefix_len: usize,
        lambda: u32,
        mut colours: BTreeMap<usize, u32>,
    ) -> Result<Self, PermError> {
        for (&pos, &colour) in &colours {
            if pos <= prefix_len || perm.get(pos) != Some(pos) {
                return Err(PermError::StrayColour(pos));
            }
            if colour == 0 || colour > lambda {
                return Err(PermError::InvalidColour { pos, colour, lambda });
            }
        }
        for pos in perm.fixed_points() {
            if pos > prefix_len && !colours.contains_key(&pos) {
                if lambda == 0 {
                    return Err(PermError::ForbiddenFixedPoint(pos));
                }
                colours.insert(pos, DEFAULT_COLOUR);
            }
        }
        Ok(Self {
            perm,
            prefix_len,
            lambda,
            colours,
        })
    }

    /// Every fixed point in scope, one colour, so this is just `perm`.
    pub fn plain(perm: Permutation) -> Self {
        Self::new(perm, 0, 1, BTreeMap::new()).expect("one colour admits every permutation")
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix_len
    }

    pub fn lambda(&self) -> u32 {
        self.lambda
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn colours(&self) -> &BTreeMap<usize, u32> {
        &self.colours
    }

    pub fn colour(&self, pos: usize) -> Option<u32> {
        self.colours.get(&pos).copied()
    }

    /// Fixed points with a non-default colour.
    pub fn essential(&self) -> BTreeMap<usize, u32> {
        self.colours
            .iter()
            .filter(|&(_, &c)| c > DEFAULT_COLOUR)
            .map(|(&p, &c)| (p, c))
            .collect()
    }

    pub fn is_essential(&self, pos: usize) -> bool {
        self.colour(pos).is_some_and(|c| c > DEFAULT_COLOUR)
    }

    /// Inserts fixed points at the positions of `set` in increasing order.
    /// Existing fixed points keep their colours; new in-scope ones take their
    /// colour from `new_colours`, or the default colour.
    pub fn insert_fixed_points(
        &self,
        set: &BTreeSet<usize>,
        new_colours: &BTreeMap<usize, u32>,
    ) -> Result<Self, PermError> {
        if let Some(&pos) = new_colours.keys().find(|p| !set.contains(p)) {
            return Err(PermError::StrayColour(pos));
        }
        let mut perm = self.perm.clone();
        let mut prefix_len = self.prefix_len;
        let mut colours = self.colours.clone();
        for &f in set {
            perm = perm.insert_fixed_point(f)?;
            colours = colours
                .into_iter()
                .map(|(p, c)| (if p >= f { p + 1 } else { p }, c))
                .collect();
            if f <= prefix_len {
                prefix_len += 1;
                if new_colours.contains_key(&f) {
                    return Err(PermError::StrayColour(f));
                }
            } else {
                let colour = new_colours.get(&f).copied().unwrap_or(DEFAULT_COLOUR);
                if colour == 0 || colour > self.lambda {
                    return Err(PermError::InvalidColour {
                        pos: f,
                        colour,
                        lambda: self.lambda,
                    });
                }
                colours.insert(f, colour);
            }
        }
        Ok(Self {
            perm,
            prefix_len,
            lambda: self.lambda,
            colours,
        })
    }

    /// Removes the fixed points at `set` in decreasing order; surviving fixed
    /// points keep their colours.
    pub fn remove_fixed_points(&self, set: &BTreeSet<usize>) -> Result<Self, PermError> {
        let perm = self.perm.remove_fixed_points(set)?;
        let mut prefix_len = self.prefix_len;
        let mut colours = self.colours.clone();
        for &f in set.iter().rev() {
            colours.remove(&f);
            colours = colours
                .into_iter()
                .map(|(p, c)| (if p > f { p - 1 } else { p }, c))
                .collect();
            if f <= prefix_len {
                prefix_len -= 1;
            }
        }
        Ok(Self {
            perm,
            prefix_len,
            lambda: self.lambda,
            colours,
        })
    }

    pub fn to_repr(&self) -> ColouredPermutationRepr {
        ColouredPermutationRepr {
            perm: self.perm.image().to_vec(),
            colours: self.colours.clone(),
        }
    }
}

/// Rendered as `2134 {3:2}`, listing only the essential colours.
impl fmt::Display for ColouredPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.perm)?;
        let essential = self.essential();
        if !essential.is_empty() {
            let items: Vec<String> = essential.iter().map(|(p, c)| format!("{p}:{c}")).collect();
            write!(f, " {{{}}}", items.join(","))?;
        }
        Ok(())
    }
}

/// Wire form: `{"perm": [..], "colours": {"pos": colour}}`. Scope and colour
/// count are not part of it and come from context.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColouredPermutationRepr {
    pub perm: Vec<usize>,
    #[serde(default)]
    pub colours: BTreeMap<usize, u32>,
}

impl ColouredPermutationRepr {
    pub fn into_coloured(
        self,
        prefix_len: usize,
        lambda: u32,
    ) -> Result<ColouredPermutation, PermError> {
        ColouredPermutation::new(Permutation::new(self.perm)?, prefix_len, lambda, self.colours)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn descents() {
        assert_eq!(p("21").descent_set(), set(&[1]));
        assert_eq!(p("326451").descent_set(), set(&[1, 3, 5]));
        assert!(Permutation::identity(4).descent_set().is_empty());
    }

    #[test]
    fn fixed_points_examples() {
        assert_eq!(p("326451").fixed_points(), set(&[2, 4, 5]));
        assert_eq!(Permutation::identity(3).fixed_points(), set(&[1, 2, 3]));
        assert!(p("21").fixed_points().is_empty());
    }

    #[test]
    fn classify_examples() {
        assert_eq!(p("231").classify(1).unwrap(), PositionKind::Excedance);
        assert_eq!(p("231").classify(3).unwrap(), PositionKind::Deficiency);
        assert_eq!(p("132").classify(1).unwrap(), PositionKind::Fixed);
        assert!(matches!(
            p("132").classify(4),
            Err(PermError::PositionOutOfRange { .. })
        ));
        assert!(p("132").classify(0).is_err());
    }

    #[test]
    fn membership() {
        let a = Composition::new(vec![4, 2]);
        assert!(p("654321").is_member(&a).unwrap());
        assert!(!p("123456").is_member(&a).unwrap());
        let ones = Composition::new(vec![1; 6]);
        assert!(p("315264").is_member(&ones).unwrap());
        assert!(p("123").is_member(&a).is_err());
    }

    #[test]
    fn insert_and_remove() {
        assert_eq!(p("21").insert_value(3, 2).unwrap(), p("312"));
        assert_eq!(p("21").insert_value(3, 3).unwrap(), p("213"));
        assert_eq!(p("").insert_value(1, 1).unwrap(), p("1"));
        assert!(p("21").insert_value(4, 1).is_err());
        assert!(p("21").insert_value(1, 4).is_err());

        assert_eq!(p("3214").remove_position(1).unwrap(), p("213"));
        assert_eq!(p("1432").remove_position(4).unwrap(), p("132"));
        assert_eq!(p("1").remove_position(1).unwrap(), p(""));
        assert!(p("1").remove_position(2).is_err());
    }

    #[test]
    fn fixed_point_sets() {
        assert_eq!(p("21").insert_fixed_points(&set(&[1, 3])).unwrap(), p("1432"));
        assert_eq!(p("21").insert_fixed_points(&set(&[])).unwrap(), p("21"));
        assert_eq!(p("").insert_fixed_points(&set(&[1, 2])).unwrap(), p("12"));

        assert_eq!(p("1432").remove_fixed_points(&set(&[1])).unwrap(), p("321"));
        assert_eq!(p("312").remove_fixed_points(&set(&[])).unwrap(), p("312"));
        assert_eq!(p("12").remove_fixed_points(&set(&[1, 2])).unwrap(), p(""));
        assert_eq!(
            p("1432").remove_fixed_points(&set(&[2])),
            Err(PermError::NotFixedPoint(2))
        );
    }

    #[test]
    fn block_sorting() {
        let a = Composition::new(vec![3, 2]);
        assert_eq!(p("25134").sort_blocks(&a).unwrap(), p("52143"));
        let ones = Composition::new(vec![1; 5]);
        assert_eq!(p("25134").sort_blocks(&ones).unwrap(), p("25134"));
        let b = Composition::new(vec![4, 2]);
        assert_eq!(p("123456").sort_blocks(&b).unwrap(), p("432165"));
    }

    #[test]
    fn zero_parts() {
        let a = Composition::new(vec![2, 0, 1]);
        assert_eq!(a.block(2).count(), 0);
        assert_eq!(a.block(3), 3..=3);
        assert_eq!(a.block_of(3), Some(3));
        assert!(p("213").is_member(&a).unwrap());
        assert_eq!(p("123").sort_blocks(&a).unwrap(), p("213"));
        assert!(Composition::new(vec![0, 3, 0]).is_single_odd_block());
    }

    #[test]
    fn parsing() {
        assert_eq!("4,2".parse::<Composition>().unwrap().parts(), &[4, 2]);
        assert_eq!(p("10,9,8,7,6,5,4,3,2,1").len(), 10);
        assert!("112".parse::<Permutation>().is_err());
        assert!("1a".parse::<Permutation>().is_err());
        assert_eq!(p("10,9,8,7,6,5,4,3,2,1").to_string(), "10,9,8,7,6,5,4,3,2,1");
    }

    #[test]
    fn standardize_by_rank() {
        assert_eq!(Permutation::standardize(&[5, 4, 2, 3]), p("4312"));
    }

    #[test]
    fn all_permutations_count() {
        assert_eq!(Permutation::all(0).count(), 1);
        assert_eq!(Permutation::all(4).count(), 24);
        let mut v = vec![1, 1, 2];
        let mut seen = 1;
        while next_permutation(&mut v) {
            seen += 1;
        }
        assert_eq!(seen, 3);
    }

    #[test]
    fn coloured_construction() {
        let c = ColouredPermutation::new(p("2134"), 2, 2, BTreeMap::from([(3, 2)])).unwrap();
        assert_eq!(c.colours(), &BTreeMap::from([(3, 2), (4, 1)]));
        assert_eq!(c.to_string(), "2134 {3:2}");
        assert!(matches!(
            ColouredPermutation::new(p("2134"), 2, 2, BTreeMap::from([(3, 3)])),
            Err(PermError::InvalidColour { .. })
        ));
        assert!(matches!(
            ColouredPermutation::new(p("2134"), 2, 2, BTreeMap::from([(1, 2)])),
            Err(PermError::StrayColour(1))
        ));
        assert!(matches!(
            ColouredPermutation::new(p("2134"), 2, 0, BTreeMap::new()),
            Err(PermError::ForbiddenFixedPoint(3))
        ));
        // fixed points inside the prefix are never coloured
        assert!(ColouredPermutation::new(p("3214"), 3, 0, BTreeMap::new()).is_err());
        assert!(ColouredPermutation::new(p("3241"), 3, 0, BTreeMap::new()).is_ok());
    }

    #[test]
    fn coloured_fixed_point_maps_carry_colours() {
        let c = ColouredPermutation::new(p("321"), 0, 3, BTreeMap::from([(2, 3)])).unwrap();
        let inserted = c
            .insert_fixed_points(&set(&[1, 5]), &BTreeMap::from([(5, 2)]))
            .unwrap();
        assert_eq!(inserted.perm(), &p("14325"));
        assert_eq!(inserted.colours(), &BTreeMap::from([(1, 1), (3, 3), (5, 2)]));
        let back = inserted.remove_fixed_points(&set(&[1, 5])).unwrap();
        assert_eq!(back, c);
        assert!(c
            .insert_fixed_points(&set(&[1]), &BTreeMap::from([(1, 4)]))
            .is_err());
    }

    #[test]
    fn repr_json_shape() {
        let c = ColouredPermutation::new(p("2134"), 2, 2, BTreeMap::from([(3, 2)])).unwrap();
        let json = serde_json::to_string(&c.to_repr()).unwrap();
        assert_eq!(json, r#"{"perm":[2,1,3,4],"colours":{"3":2,"4":1}}"#);
        let back: ColouredPermutationRepr = serde_json::from_str(&json).unwrap();
        assert_eq!(back.into_coloured(2, 2).unwrap(), c);
        let perm: Permutation = serde_json::from_str("[3,1,2]").unwrap();
        assert_eq!(perm, p("312"));
        assert!(serde_json::from_str::<Permutation>("[3,3,1]").is_err());
    }
}
