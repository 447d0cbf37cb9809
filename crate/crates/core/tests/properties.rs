use std::collections::{BTreeMap, BTreeSet};

use derangements::bijections::{eta, eta_inverse, theta, theta_inverse, zeta1, zeta1_preimages, Zeta1Arg};
use derangements::correlation::dominance_ge;
use derangements::counting::{in_dj, insert_block_fixed_point, iterate_members, remove_block_fixed_point};
use derangements::euler::in_dkn;
use derangements::series::MultiSeries;
use derangements::{ColouredPermutation, Composition, LambdaPolynomial, Permutation};
use num_bigint::BigInt;
use proptest::prelude::*;

fn permutation(max: usize) -> impl Strategy<Value = Permutation> {
    (0..=max)
        .prop_flat_map(|n| Just((1..=n).collect::<Vec<usize>>()).prop_shuffle())
        .prop_map(|v| Permutation::new(v).unwrap())
}

fn composition(max_blocks: usize, max_part: usize) -> impl Strategy<Value = Composition> {
    prop::collection::vec(0..=max_part, 0..=max_blocks).prop_map(Composition::new)
}

fn positive_composition_of(n: usize) -> impl Strategy<Value = Composition> {
    let all = Composition::all_positive(n);
    (0..all.len()).prop_map(move |i| all[i].clone())
}

/// A random element of `D^k_n(λ)`: a shuffled tail after a decreasing
/// prefix, with random colours on the in-scope fixed points.
fn coloured(n_range: std::ops::RangeInclusive<usize>, lambda: u32) -> impl Strategy<Value = (usize, ColouredPermutation)> {
    n_range
        .prop_flat_map(|n| (Just(n), 0..=n, Just((1..=n).collect::<Vec<usize>>()).prop_shuffle()))
        .prop_flat_map(move |(n, k, word)| (Just(n), Just(k), Just(word), prop::collection::vec(1..=lambda, n)))
        .prop_map(move |(_, k, mut word, colours)| {
            word[..k].sort_unstable_by(|x, y| y.cmp(x));
            let perm = Permutation::new(word).unwrap();
            let map: BTreeMap<usize, u32> = perm
                .fixed_points()
                .into_iter()
                .filter(|&p| p > k)
                .map(|p| (p, colours[p - 1]))
                .collect();
            (k, ColouredPermutation::new(perm, k, lambda, map).unwrap())
        })
}

fn poly() -> impl Strategy<Value = LambdaPolynomial> {
    prop::collection::vec(-20i64..=20, 0..5).prop_map(|c| LambdaPolynomial::from_i64s(&c))
}

fn series(caps: Vec<usize>) -> impl Strategy<Value = MultiSeries> {
    let size: usize = caps.iter().map(|c| c + 1).product();
    prop::collection::vec(-5i64..=5, size).prop_map(move |coeffs| {
        let mut terms = Vec::new();
        for (idx, c) in coeffs.into_iter().enumerate() {
            let mut e = vec![0; caps.len()];
            let mut rest = idx;
            for (i, cap) in caps.iter().enumerate().rev() {
                e[i] = rest % (cap + 1);
                rest /= cap + 1;
            }
            terms.push((e, BigInt::from(c)));
        }
        MultiSeries::from_terms(caps.clone(), terms).unwrap()
    })
}

proptest! {
    #[test]
    fn insert_then_remove_is_identity(p in permutation(8), pos_seed in 0usize..100, value_seed in 0usize..100) {
        let n = p.len();
        let pos = pos_seed % (n + 1) + 1;
        let value = value_seed % (n + 1) + 1;
        let q = p.insert_value(pos, value).unwrap();
        prop_assert_eq!(q.at(pos), value);
        prop_assert_eq!(q.remove_position(pos).unwrap(), p);
    }

    #[test]
    fn fixed_point_removal_round_trips(p in permutation(8)) {
        let fixed = p.fixed_points();
        let stripped = p.remove_fixed_points(&fixed).unwrap();
        prop_assert!(stripped.is_derangement());
        prop_assert_eq!(stripped.len() + fixed.len(), p.len());
        prop_assert_eq!(stripped.insert_fixed_points(&fixed).unwrap(), p);
    }

    #[test]
    fn sorting_blocks_lands_in_members(p in permutation(8), cuts in prop::collection::vec(any::<bool>(), 8)) {
        let n = p.len();
        let mut parts = Vec::new();
        let mut run = 0;
        for i in 0..n {
            run += 1;
            if i + 1 == n || cuts[i] {
                parts.push(run);
                run = 0;
            }
        }
        let a = Composition::new(parts);
        let sorted = p.sort_blocks(&a).unwrap();
        prop_assert!(sorted.is_member(&a).unwrap());
        prop_assert_eq!(sorted.sort_blocks(&a).unwrap(), sorted.clone());
        let descents = sorted.descent_set();
        for block in a.blocks() {
            for pos in *block.start()..*block.end() {
                prop_assert!(descents.contains(&pos));
            }
        }
    }

    #[test]
    fn dominance_is_a_partial_order(n in 1usize..8, seeds in prop::collection::vec(0usize..1000, 3)) {
        let all = Composition::all_positive(n);
        let [a, b, c] = [&all[seeds[0] % all.len()], &all[seeds[1] % all.len()], &all[seeds[2] % all.len()]];
        prop_assert!(dominance_ge(a, a).unwrap());
        if dominance_ge(a, b).unwrap() && dominance_ge(b, a).unwrap() {
            prop_assert_eq!(a.sorted_parts(), b.sorted_parts());
        }
        if dominance_ge(a, b).unwrap() && dominance_ge(b, c).unwrap() {
            prop_assert!(dominance_ge(a, c).unwrap());
        }
    }

    #[test]
    fn dominance_rejects_unequal_totals(a in composition(4, 4), b in composition(4, 4)) {
        prop_assert_eq!(dominance_ge(&a, &b).is_err(), a.total() != b.total());
    }

    #[test]
    fn polynomial_ring_laws(p in poly(), q in poly(), r in poly(), x in -6i64..=6) {
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert_eq!(&p * &q, &q * &p);
        let x = BigInt::from(x);
        prop_assert_eq!((&p * &q).eval(&x), p.eval(&x) * q.eval(&x));
        prop_assert_eq!(p.compose(&LambdaPolynomial::lambda()), p.clone());
        prop_assert_eq!(&p - &p, LambdaPolynomial::zero());
    }

    #[test]
    fn series_product_is_associative(
        s in series(vec![2, 1]),
        t in series(vec![2, 1]),
        u in series(vec![2, 1]),
    ) {
        prop_assert_eq!(s.mul(&t).unwrap().mul(&u).unwrap(), s.mul(&t.mul(&u).unwrap()).unwrap());
        prop_assert_eq!(s.mul(&t).unwrap(), t.mul(&s).unwrap());
        prop_assert_eq!(s.mul(&MultiSeries::one(vec![2, 1])).unwrap(), s.clone());
        let lhs = s.mul(&t.add(&u).unwrap()).unwrap();
        let rhs = s.mul(&t).unwrap().add(&s.mul(&u).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn block_fixed_point_insertion_round_trips(
        a in (1usize..7).prop_flat_map(positive_composition_of),
        pick in 0usize..1000,
        jseed in 0usize..10,
    ) {
        let j = jseed % a.num_blocks() + 1;
        let members: Vec<Permutation> = iterate_members(&a).filter(|p| in_dj(p, &a, j)).collect();
        if members.is_empty() {
            return Ok(());
        }
        let p = &members[pick % members.len()];
        let grown = a.with_part(j, a.parts()[j - 1] + 1);
        let q = insert_block_fixed_point(p, &a, j).unwrap();
        prop_assert!(q.is_member(&grown).unwrap());
        prop_assert_eq!(&remove_block_fixed_point(&q, &grown, j).unwrap(), p);
    }

    #[test]
    fn coloured_fixed_point_round_trip((k, q) in coloured(1..=8, 3)) {
        let ess = q.essential();
        let set: BTreeSet<usize> = ess.keys().copied().collect();
        let stripped = q.remove_fixed_points(&set).unwrap();
        prop_assert!(stripped.essential().is_empty());
        prop_assert_eq!(stripped.prefix_len(), k);
        prop_assert_eq!(stripped.insert_fixed_points(&set, &ess).unwrap(), q);
    }

    #[test]
    fn bijections_invert_at_larger_sizes((k, q) in coloured(2..=9, 3)) {
        let n = q.len();
        prop_assert!(in_dkn(&q, n, k));
        // θ with parameter k + 1 lands in D^k_n
        if k < n {
            let arg = theta_inverse(&q, k + 1).unwrap();
            prop_assert_eq!(theta(&arg, k + 1, n).unwrap(), q.clone());
        }
        if k >= 1 && k < n {
            let arg = eta_inverse(&q, k).unwrap();
            prop_assert_eq!(eta(&arg, k, n).unwrap(), q.clone());
        }
        if k < n {
            let pre: Vec<Zeta1Arg> = zeta1_preimages(&q, k).unwrap();
            prop_assert!(pre.len() == 1 || pre.len() == 2);
            for arg in &pre {
                prop_assert_eq!(zeta1(arg, k, n).unwrap(), q.clone());
            }
        }
    }

    #[test]
    fn positive_compositions_cover_total(a in (1usize..9).prop_flat_map(positive_composition_of)) {
        prop_assert!(a.parts().iter().all(|&p| p > 0));
        let blocks: Vec<usize> = a.blocks().flat_map(|b| b.collect::<Vec<_>>()).collect();
        prop_assert_eq!(blocks, (1..=a.total()).collect::<Vec<_>>());
    }
}
