use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rational;

/// Closest rational to `x` whose denominator is at most `denom_bound`,
/// ties going to the smaller denominator.
///
/// Walks the continued-fraction convergents of `x`; the answer is either the
/// last convergent within the bound or the largest admissible semiconvergent
/// after it.
pub fn rational_reconstruct(x: &Rational, denom_bound: &BigInt) -> Rational {
    assert!(denom_bound >= &BigInt::one(), "denominator bound must be at least 1");
    if x.denom() <= denom_bound {
        return x.clone();
    }

    let (mut h1, mut h2) = (BigInt::one(), BigInt::zero());
    let (mut k1, mut k2) = (BigInt::zero(), BigInt::one());
    let (mut num, mut den) = (x.numer().clone(), x.denom().clone());
    loop {
        let (a, r) = num.div_mod_floor(&den);
        let h = &a * &h1 + &h2;
        let k = &a * &k1 + &k2;
        if &k > denom_bound {
            let t = (denom_bound - &k2) / &k1;
            let semi = Rational::new(&t * &h1 + &h2, &t * &k1 + &k2);
            let conv = Rational::new(h1, k1);
            let ds = (&semi - x).abs();
            let dc = (&conv - x).abs();
            return if ds < dc || (ds == dc && semi.denom() < conv.denom()) { semi } else { conv };
        }
        // denominators within the bound never reach x's own denominator
        debug_assert!(!r.is_zero());
        h2 = std::mem::replace(&mut h1, h);
        k2 = std::mem::replace(&mut k1, k);
        num = std::mem::replace(&mut den, r);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use proptest::prelude::*;

    /// Scans every denominator up to the bound.
    fn brute(x: &Rational, bound: i64) -> Rational {
        let mut best: Option<Rational> = None;
        for q in 1..=bound {
            let qb = BigInt::from(q);
            let f = (x * Rational::from_integer(qb.clone())).floor().to_integer();
            for p in [f.clone(), f + 1] {
                let c = Rational::new(p, qb.clone());
                best = Some(match best {
                    None => c,
                    Some(b) => {
                        let (db, dc) = ((&b - x).abs(), (&c - x).abs());
                        if dc < db || (dc == db && c.denom() < b.denom()) { c } else { b }
                    }
                });
            }
        }
        best.unwrap()
    }

    #[test]
    fn spec_examples() {
        assert_eq!(rational_reconstruct(&rat(333333, 1000000), &BigInt::from(10)), rat(1, 3));
        assert_eq!(rational_reconstruct(&rat(49999, 100000), &BigInt::from(2)), rat(1, 2));
        assert_eq!(rational_reconstruct(&rat(3, 4), &BigInt::from(100)), rat(3, 4));
    }

    #[test]
    fn negative_values() {
        assert_eq!(rational_reconstruct(&rat(-333, 1000), &BigInt::from(5)), rat(-1, 3));
    }

    proptest! {
        #[test]
        fn matches_brute_force(p in -2000i64..2000, q in 1i64..500, bound in 1i64..40) {
            let x = rat(p, q);
            prop_assert_eq!(rational_reconstruct(&x, &BigInt::from(bound)), brute(&x, bound));
        }

        #[test]
        fn passthrough_when_small(p in -100i64..100, q in 1i64..30, extra in 0i64..10) {
            let x = rat(p, q);
            let bound = BigInt::from(x.denom().clone() + extra);
            prop_assert_eq!(rational_reconstruct(&x, &bound), x);
        }
    }
}
