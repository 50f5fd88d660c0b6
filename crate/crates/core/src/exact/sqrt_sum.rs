use num_bigint::BigUint;
use num_traits::Zero;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SqrtSumOutcome {
    Less,
    Equal,
    Greater,
    Undecided,
}

/// Compares `Σ √d_i` with `k`.
///
/// Each root is enclosed in `[⌊√(d·4^p)⌋, ⌈√(d·4^p)⌉] / 2^p`; the working
/// precision `p` starts at 64 bits and doubles until the enclosure of the sum
/// excludes `k` or `p` would exceed `precision_cap`. `Equal` is returned only
/// when every `d_i` is a perfect square, since otherwise the sum is
/// irrational.
pub fn sqrt_sum_compare(d: &[BigUint], k: &BigUint, precision_cap: u64) -> SqrtSumOutcome {
    assert!(d.iter().all(|x| !x.is_zero()), "radicands must be positive");
    assert!(!k.is_zero(), "k must be positive");

    let roots: Vec<BigUint> = d.iter().map(BigUint::sqrt).collect();
    if roots.iter().zip(d).all(|(r, x)| r * r == *x) {
        let s: BigUint = roots.iter().sum();
        return match s.cmp(k) {
            std::cmp::Ordering::Less => SqrtSumOutcome::Less,
            std::cmp::Ordering::Equal => SqrtSumOutcome::Equal,
            std::cmp::Ordering::Greater => SqrtSumOutcome::Greater,
        };
    }

    let mut p = 64u64.min(precision_cap.max(1));
    loop {
        let (lo, hi) = enclose(d, p);
        let target = k << p;
        // at least one root is irrational, so the sum lies strictly inside (lo, hi)
        if hi <= target {
            return SqrtSumOutcome::Less;
        }
        if lo >= target {
            return SqrtSumOutcome::Greater;
        }
        if p >= precision_cap {
            return SqrtSumOutcome::Undecided;
        }
        p = (p * 2).min(precision_cap);
    }
}

/// Integer bounds `(lo, hi)` with `lo ≤ 2^p · Σ √d_i ≤ hi`.
fn enclose(d: &[BigUint], p: u64) -> (BigUint, BigUint) {
    let mut lo = BigUint::zero();
    let mut hi = BigUint::zero();
    for x in d {
        let scaled = x << (2 * p);
        let s = scaled.sqrt();
        if &s * &s == scaled {
            hi += &s;
        } else {
            hi += &s + 1u32;
        }
        lo += s;
    }
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::cmp::Ordering;

    fn big(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    /// Exact decision of √a + √b against k by squaring twice.
    fn two_term_oracle(a: u64, b: u64, k: u64) -> SqrtSumOutcome {
        let (a, b, k) = (a as i128, b as i128, k as i128);
        let rhs = k * k - a - b; // compare 2√(ab) with rhs
        let ord = if rhs < 0 { Ordering::Greater } else { (4 * a * b).cmp(&(rhs * rhs)) };
        match ord {
            Ordering::Less => SqrtSumOutcome::Less,
            Ordering::Equal => SqrtSumOutcome::Equal,
            Ordering::Greater => SqrtSumOutcome::Greater,
        }
    }

    #[test]
    fn perfect_squares_equal() {
        assert_eq!(sqrt_sum_compare(&big(&[4, 9]), &BigUint::from(5u32), 256), SqrtSumOutcome::Equal);
    }

    #[test]
    fn root_two_plus_root_three() {
        assert_eq!(sqrt_sum_compare(&big(&[2, 3]), &BigUint::from(3u32), 256), SqrtSumOutcome::Greater);
    }

    #[test]
    fn root_two_less_than_two() {
        assert_eq!(sqrt_sum_compare(&big(&[2]), &BigUint::from(2u32), 256), SqrtSumOutcome::Less);
    }

    #[test]
    fn tiny_cap_is_undecided() {
        // √10001 + √9999 ≈ 200 - 1.25e-6
        assert_eq!(sqrt_sum_compare(&big(&[10001, 9999]), &BigUint::from(200u32), 8), SqrtSumOutcome::Undecided);
        assert_eq!(sqrt_sum_compare(&big(&[10001, 9999]), &BigUint::from(200u32), 256), SqrtSumOutcome::Less);
    }

    proptest! {
        #[test]
        fn agrees_with_exact_two_term_decision(a in 1u64..5000, b in 1u64..5000, k in 1u64..150) {
            let got = sqrt_sum_compare(&big(&[a, b]), &BigUint::from(k), 256);
            prop_assert_eq!(got, two_term_oracle(a, b, k));
        }

        #[test]
        fn consistent_with_256_bit_enclosure(d in proptest::collection::vec(1u64..10_000, 1..5), k in 1u64..400) {
            let d = big(&d);
            let k = BigUint::from(k);
            let (lo, hi) = enclose(&d, 256);
            let target = &k << 256u32;
            match sqrt_sum_compare(&d, &k, 1024) {
                SqrtSumOutcome::Less => prop_assert!(lo < target),
                SqrtSumOutcome::Greater => prop_assert!(hi > target),
                SqrtSumOutcome::Equal => prop_assert!(lo == target && hi == target),
                SqrtSumOutcome::Undecided => {}
            }
        }
    }
}
