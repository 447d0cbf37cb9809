//! Exhaustive enumeration: members of `S_a`, the restricted sets `D_j(a)`,
//! `D*_j(a)` and `D^_j(a)`, sorted preimage counts, fixed point
//! distributions, and the block fixed point insertion bijection.
//!
//! These are the brute-force oracles the closed formulas are checked
//! against, so nothing here goes through a formula.

use num_bigint::BigInt;
use rayon::prelude::*;
use thiserror::Error;

use crate::perm::{next_permutation, Composition, PermError, Permutation, PositionKind};
use crate::poly::LambdaPolynomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error("block index {j} outside {min}..={k}")]
    BadBlockIndex { j: usize, min: usize, k: usize },
    #[error("{perm} is not in {set} for {composition}")]
    NotInDomain {
        perm: String,
        set: &'static str,
        composition: String,
    },
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// Streams every member of `S_a`.
///
/// Each member is fixed by which block every value lands in, so this walks
/// the multiset permutations of the block-label word and writes each block's
/// values in decreasing order.
pub struct Members {
    composition: Composition,
    labels: Option<Vec<usize>>,
}

pub fn iterate_members(a: &Composition) -> Members {
    let labels = a
        .parts()
        .iter()
        .enumerate()
        .flat_map(|(j, &len)| std::iter::repeat_n(j, len))
        .collect();
    Members {
        composition: a.clone(),
        labels: Some(labels),
    }
}

impl Iterator for Members {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let labels = self.labels.take()?;
        let mut slots: Vec<usize> = (0..self.composition.num_blocks())
            .map(|j| self.composition.boundary(j + 1))
            .collect();
        let mut image = vec![0; labels.len()];
        // values in increasing order fill each block from its right end
        for (v, &block) in labels.iter().enumerate() {
            slots[block] -= 1;
            image[slots[block]] = v + 1;
        }
        let mut following = labels;
        if next_permutation(&mut following) {
            self.labels = Some(following);
        }
        Some(Permutation::new(image).expect("block assignment yields a permutation"))
    }
}

fn has_fixed_point_in_block(p: &Permutation, a: &Composition, j: usize) -> bool {
    a.block(j).any(|pos| p.at(pos) == pos)
}

fn check_block_index(a: &Composition, j: usize, min: usize) -> Result<(), CountError> {
    if j < min || j > a.num_blocks() {
        return Err(CountError::BadBlockIndex {
            j,
            min,
            k: a.num_blocks(),
        });
    }
    Ok(())
}

/// Whether `p` has no fixed point in blocks `1..=j`.
pub fn in_dj(p: &Permutation, a: &Composition, j: usize) -> bool {
    (1..=j).all(|i| !has_fixed_point_in_block(p, a, i))
}

pub fn in_dstar(p: &Permutation, a: &Composition, j: usize) -> bool {
    in_dj(p, a, j - 1) && has_fixed_point_in_block(p, a, j)
}

pub fn in_dhat(p: &Permutation, a: &Composition, j: usize) -> bool {
    (1..=a.num_blocks()).all(|i| has_fixed_point_in_block(p, a, i) == (i == j))
}

fn count_where(a: &Composition, keep: impl Fn(&Permutation) -> bool) -> BigInt {
    BigInt::from(iterate_members(a).filter(|p| keep(p)).count())
}

/// `|S_a|`, by enumeration.
pub fn count_members(a: &Composition) -> BigInt {
    BigInt::from(iterate_members(a).count())
}

/// `|D_j(a)|`: members of `S_a` without fixed points in the first `j` blocks.
pub fn count_dj(a: &Composition, j: usize) -> Result<BigInt, CountError> {
    check_block_index(a, j, 0)?;
    Ok(count_where(a, |p| in_dj(p, a, j)))
}

/// `|D*_j(a)|`: no fixed points in the first `j - 1` blocks, one in block `j`.
pub fn count_dstar(a: &Composition, j: usize) -> Result<BigInt, CountError> {
    check_block_index(a, j, 1)?;
    Ok(count_where(a, |p| in_dstar(p, a, j)))
}

/// `|D^_j(a)|`: a fixed point in block `j` and in no other block.
pub fn count_dhat(a: &Composition, j: usize) -> Result<BigInt, CountError> {
    check_block_index(a, j, 1)?;
    Ok(count_where(a, |p| in_dhat(p, a, j)))
}

/// The position where the excedances of block `j` end and its deficiencies
/// begin: the first deficiency in the block, or one past the block when it
/// has none. `p` must have no fixed point in block `j`.
pub fn excedance_boundary(p: &Permutation, a: &Composition, j: usize) -> usize {
    let block = a.block(j);
    let past_end = block.end() + 1;
    block
        .into_iter()
        .find(|&pos| p.at(pos) < pos)
        .unwrap_or(past_end)
}

/// Maps `p` in `D_j(a)` to `D*_j(a')`, where `a'` grows block `j` by one, by
/// inserting a fixed point where the block switches from excedances to
/// deficiencies. Restricted to `D(a)` it lands in `D^_j(a')`.
pub fn insert_block_fixed_point(
    p: &Permutation,
    a: &Composition,
    j: usize,
) -> Result<Permutation, CountError> {
    check_block_index(a, j, 1)?;
    if p.len() != a.total() || !p.is_member(a)? || !in_dj(p, a, j) {
        return Err(CountError::NotInDomain {
            perm: p.to_string(),
            set: "D_j(a)",
            composition: a.to_string(),
        });
    }
    let r = excedance_boundary(p, a, j);
    Ok(p.insert_fixed_point(r)?)
}

/// Inverse of [`insert_block_fixed_point`]: `q` lies in `D*_j(a_grown)` and
/// its fixed point in block `j` is removed.
pub fn remove_block_fixed_point(
    q: &Permutation,
    a_grown: &Composition,
    j: usize,
) -> Result<Permutation, CountError> {
    check_block_index(a_grown, j, 1)?;
    if q.len() != a_grown.total() || !q.is_member(a_grown)? || !in_dstar(q, a_grown, j) {
        return Err(CountError::NotInDomain {
            perm: q.to_string(),
            set: "D*_j(a)",
            composition: a_grown.to_string(),
        });
    }
    let r = a_grown
        .block(j)
        .find(|&pos| q.classify(pos) == Ok(PositionKind::Fixed))
        .expect("membership in D*_j guarantees a fixed point in block j");
    Ok(q.remove_position(r)?)
}

/// Runs `visit` over every permutation of `1..=n`, split by first value
/// across worker threads, and sums the per-permutation results.
fn sum_over_symmetric_group<F>(n: usize, visit: F) -> Vec<u64>
where
    F: Fn(&[usize], &mut [u64]) + Sync,
{
    let width = n + 1;
    if n == 0 {
        let mut acc = vec![0; width];
        visit(&[], &mut acc);
        return acc;
    }
    (1..=n)
        .into_par_iter()
        .map(|first| {
            let mut acc = vec![0u64; width];
            let mut rest: Vec<usize> = (1..=n).filter(|&v| v != first).collect();
            let mut word = vec![0; n];
            word[0] = first;
            loop {
                word[1..].copy_from_slice(&rest);
                visit(&word, &mut acc);
                if !next_permutation(&mut rest) {
                    break;
                }
            }
            acc
        })
        .reduce(
            || vec![0u64; width],
            |mut x, y| {
                x.iter_mut().zip(y).for_each(|(a, b)| *a += b);
                x
            },
        )
}

/// `|Φ_a^{-1}(D(a))|`: permutations of `[n]` that are fixed point free once
/// each block is sorted decreasingly. Scans all of `S_n`.
pub fn count_sorted_derangement_preimage(a: &Composition) -> BigInt {
    let n = a.total();
    let blocks: Vec<(usize, usize)> = a
        .blocks()
        .filter(|b| b.start() <= b.end())
        .map(|b| (*b.start(), *b.end()))
        .collect();
    let counts = sum_over_symmetric_group(n, |word, acc| {
        let mut sorted = [0usize; 32];
        let ok = blocks.iter().all(|&(lo, hi)| {
            let block = &mut sorted[..hi - lo + 1];
            block.copy_from_slice(&word[lo - 1..hi]);
            block.sort_unstable_by(|x, y| y.cmp(x));
            block.iter().enumerate().all(|(i, &v)| v != lo + i)
        });
        if ok {
            acc[0] += 1;
        }
    });
    BigInt::from(counts[0])
}

/// The same count through `S_a`: every member has `Π a_i!` preimages.
pub fn sorted_preimage_via_members(a: &Composition) -> BigInt {
    let d = count_where(a, |p| p.is_derangement());
    d * BigInt::from(a.factorial_product())
}

/// How many permutations of `[n]` have exactly `j` fixed points, for each `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixDistribution {
    pub n: usize,
    pub counts: Vec<BigInt>,
}

impl FixDistribution {
    /// `Σ_j counts[j] λ^j`
    pub fn polynomial(&self) -> LambdaPolynomial {
        LambdaPolynomial::new(self.counts.clone())
    }

    pub fn total(&self) -> BigInt {
        self.counts.iter().sum()
    }
}

pub fn fix_distribution(n: usize) -> FixDistribution {
    let counts = sum_over_symmetric_group(n, |word, acc| {
        let fixed = word.iter().enumerate().filter(|&(i, &v)| v == i + 1).count();
        acc[fixed] += 1;
    });
    FixDistribution {
        n,
        counts: counts.into_iter().map(BigInt::from).collect(),
    }
}

/// Derangement number `D_n` by exhaustive scan.
pub fn derangements_brute(n: usize) -> BigInt {
    fix_distribution(n).counts[0].clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comp(v: &[usize]) -> Composition {
        Composition::new(v.to_vec())
    }

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn members_of_example_composition() {
        let members: Vec<_> = iterate_members(&comp(&[4, 2])).collect();
        assert_eq!(members.len(), 15);
        assert!(members.contains(&p("654321")));
        assert!(members.iter().all(|m| m.is_member(&comp(&[4, 2])).unwrap()));

        assert_eq!(iterate_members(&comp(&[4])).collect::<Vec<_>>(), vec![p("4321")]);
        let mut pair: Vec<_> = iterate_members(&comp(&[1, 1])).collect();
        pair.sort();
        assert_eq!(pair, vec![p("12"), p("21")]);
        assert_eq!(iterate_members(&comp(&[])).count(), 1);
        assert_eq!(iterate_members(&comp(&[0, 2, 0])).count(), 1);
    }

    #[test]
    fn derangements_of_example_composition() {
        let a = comp(&[4, 2]);
        let mut found: Vec<String> = iterate_members(&a)
            .filter(|m| m.is_derangement())
            .map(|m| m.to_string())
            .collect();
        found.sort();
        let mut listed = vec!["654321", "654231", "654132", "652143", "542163", "532164", "432165"];
        listed.sort();
        assert_eq!(found, listed);
    }

    #[test]
    fn restricted_counts() {
        let a = comp(&[4, 2]);
        assert_eq!(count_dj(&a, 2).unwrap(), big(7));
        assert_eq!(count_dj(&a, 0).unwrap(), big(15));
        assert_eq!(count_dj(&comp(&[2, 1]), 1).unwrap(), big(2));
        assert!(count_dj(&a, 3).is_err());

        // D*_2((4,2)) = D_1((4,2)) - D_2((4,2))
        let d1 = count_dj(&a, 1).unwrap();
        assert_eq!(d1, big(9));
        assert_eq!(count_dstar(&a, 2).unwrap(), big(2));
        assert_eq!(count_dstar(&comp(&[1]), 1).unwrap(), big(1));
        assert_eq!(count_dstar(&comp(&[2]), 1).unwrap(), big(0));
        assert!(count_dstar(&a, 0).is_err());

        assert_eq!(count_dhat(&comp(&[2, 1]), 2).unwrap(), big(1));
        assert_eq!(count_dhat(&comp(&[2]), 1).unwrap(), big(0));
        assert_eq!(count_dhat(&comp(&[1]), 1).unwrap(), big(1));
    }

    #[test]
    fn block_fixed_point_insertion_examples() {
        let grown = insert_block_fixed_point(&p("21"), &comp(&[2]), 1).unwrap();
        assert_eq!(grown, p("321"));
        assert!(in_dstar(&grown, &comp(&[3]), 1));
        assert_eq!(remove_block_fixed_point(&grown, &comp(&[3]), 1).unwrap(), p("21"));

        let a = comp(&[1, 1, 1]);
        let q = insert_block_fixed_point(&p("312"), &a, 2).unwrap();
        assert_eq!(q, p("4213"));
        assert_eq!(remove_block_fixed_point(&q, &comp(&[1, 2, 1]), 2).unwrap(), p("312"));

        // an empty block: the fixed point goes right after the previous block
        let z = comp(&[2, 0, 1]);
        let q = insert_block_fixed_point(&p("213"), &z, 2).unwrap();
        assert_eq!(q, p("2134"));
        assert!(insert_block_fixed_point(&p("123"), &comp(&[1, 1, 1]), 1).is_err());
    }

    #[test]
    fn preimage_counts() {
        assert_eq!(count_sorted_derangement_preimage(&comp(&[4, 2])), big(336));
        assert_eq!(count_sorted_derangement_preimage(&comp(&[1, 1, 1, 1])), big(9));
        assert_eq!(count_sorted_derangement_preimage(&comp(&[3])), big(0));
        assert_eq!(count_sorted_derangement_preimage(&comp(&[])), big(1));
        assert_eq!(sorted_preimage_via_members(&comp(&[4, 2])), big(336));
    }

    #[test]
    fn fixed_point_distributions() {
        let d3 = fix_distribution(3);
        assert_eq!(d3.counts, vec![big(2), big(3), big(0), big(1)]);
        assert_eq!(fix_distribution(0).counts, vec![big(1)]);
        assert_eq!(fix_distribution(1).counts, vec![big(0), big(1)]);
        assert_eq!(derangements_brute(4), big(9));
    }
}
