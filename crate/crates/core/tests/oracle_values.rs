// Values produced by an independent brute-force enumerator.

use derangements::correlation::{f_brute, f_value, BlockPairState};
use derangements::counting::{count_dj, count_sorted_derangement_preimage, fix_distribution, sorted_preimage_via_members};
use derangements::euler::{build_tables, count_dkn, d_value};
use derangements::lambda::{explicit_d_count, lamfak_rhs};
use derangements::series::coeff_dj;
use derangements::Composition;
use num_bigint::BigInt;

fn comp(parts: &[usize]) -> Composition {
    Composition::new(parts.to_vec())
}

fn bigs(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[test]
fn dj_profiles() {
    let cases: [(&[usize], &[i64]); 7] = [
        (&[3, 3], &[20, 13, 9]),
        (&[2, 2, 2], &[90, 66, 49, 37]),
        (&[5, 1], &[6, 3, 3]),
        (&[1, 4, 1], &[30, 25, 15, 13]),
        (&[3, 2, 1], &[60, 39, 29, 25]),
        (&[2, 3, 2], &[210, 160, 111, 86]),
        (&[4, 3], &[35, 22, 15]),
    ];
    for (parts, expected) in cases {
        let a = comp(parts);
        let brute: Vec<BigInt> = (0..=a.num_blocks()).map(|j| count_dj(&a, j).unwrap()).collect();
        let series: Vec<BigInt> = (0..=a.num_blocks()).map(|j| coeff_dj(&a, j).unwrap()).collect();
        assert_eq!(brute, bigs(expected), "{a}");
        assert_eq!(series, bigs(expected), "{a}");
        assert_eq!(explicit_d_count(&a), bigs(expected)[a.num_blocks()]);
    }
}

#[test]
fn sorted_preimages() {
    let cases: [(&[usize], i64); 6] = [
        (&[2, 2, 2], 296),
        (&[3, 3], 324),
        (&[4, 2], 336),
        (&[5, 1], 360),
        (&[1, 1, 1, 1, 1, 1], 265),
        (&[2, 1, 3], 300),
    ];
    for (parts, expected) in cases {
        let a = comp(parts);
        let expected = BigInt::from(expected);
        assert_eq!(count_sorted_derangement_preimage(&a), expected, "{a}");
        assert_eq!(sorted_preimage_via_members(&a), expected, "{a}");
        assert_eq!(lamfak_rhs(&a).as_constant(), Some(expected), "{a}");
    }
}

#[test]
fn coloured_table_entries() {
    let table = build_tables(7).unwrap();
    for (n, k, lambda, expected) in [(5, 2, 3, 176), (6, 3, 2, 193), (6, 0, 2, 1957), (5, 1, 0, 53), (7, 2, 4, 18018)] {
        assert_eq!(d_value(&table, n, k, lambda), BigInt::from(expected), "d^{k}_{n}({lambda})");
    }
    assert_eq!(count_dkn(5, 2, 3), BigInt::from(176));
    assert_eq!(count_dkn(6, 3, 2), BigInt::from(193));
}

#[test]
fn two_block_counts() {
    for (st, expected) in [((2, 2, 1), 48), ((3, 2, 2), 684), ((4, 1, 0), 48), ((3, 3, 0), 324), ((2, 1, 0), 2), ((4, 2, 3), 8976)] {
        let s = BlockPairState::new(st.0, st.1, st.2).unwrap();
        assert_eq!(f_brute(&s), BigInt::from(expected), "{st:?}");
        assert_eq!(f_value(&s), BigInt::from(expected), "{st:?}");
    }
}

#[test]
fn fixed_point_distribution() {
    assert_eq!(fix_distribution(5).counts, bigs(&[44, 45, 20, 10, 0, 1]));
}
