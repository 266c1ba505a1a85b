//! Arbitrary-precision integer and modular arithmetic primitives shared by
//! every other module. Magnitudes are `BigUint`/`BigInt` from `num-bigint`;
//! all residues are normalized to `[0, M)`.

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// A modulus, always at least 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Modulus(BigUint);

impl Modulus {
    pub fn new(value: BigUint) -> Result<Self> {
        if value < BigUint::from(2u32) {
            return Err(Error::MalformedSequence(format!("modulus {value} < 2")));
        }
        Ok(Modulus(value))
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn bits(&self) -> u64 {
        self.0.bits()
    }
}

impl std::fmt::Display for Modulus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// Extended Euclid: returns `(g, x, y)` with `a*x + b*y = g = gcd(a, b) >= 0`.
///
/// The coefficient `x` is reduced to the minimal-magnitude representative
/// `|x| <= |b|/(2g)` whenever `b != 0`, so results are deterministic.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> Result<(BigInt, BigInt, BigInt)> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::GcdUndefined);
    }
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut x0, mut x1) = (BigInt::one(), BigInt::zero());
    let (mut y0, mut y1) = (BigInt::zero(), BigInt::one());
    while !r1.is_zero() {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let x2 = &x0 - &q * &x1;
        x0 = std::mem::replace(&mut x1, x2);
        let y2 = &y0 - &q * &y1;
        y0 = std::mem::replace(&mut y1, y2);
    }
    if r0.is_negative() {
        r0 = -r0;
        x0 = -x0;
        y0 = -y0;
    }
    // Normalize x into (-|b|/g/2, |b|/g/2] on the lattice x + k*(b/g).
    if !b.is_zero() {
        let step = (b / &r0).abs();
        x0 = x0.mod_floor(&step);
        let twice = &x0 * 2;
        if twice > step {
            x0 -= &step;
        }
        y0 = (&r0 - a * &x0) / b;
    }
    Ok((r0, x0, y0))
}

/// Modular inverse: `u` in `[1, m)` with `a*u = 1 (mod m)`.
pub fn mod_inv(a: &BigUint, m: &Modulus) -> Result<BigUint> {
    let ai = BigInt::from(a % m.value());
    let mi = BigInt::from(m.value().clone());
    let (g, x, _) = ext_gcd(&ai, &mi)?;
    if !g.is_one() {
        return Err(Error::NotInvertible { a: a.clone(), m: m.value().clone() });
    }
    let u = x.mod_floor(&mi);
    Ok(u.to_biguint().expect("mod_floor by positive is nonnegative"))
}

/// Additive inverse of `a` in `[0, m)`; requires `a < m`.
pub fn mod_neg(a: &BigUint, m: &Modulus) -> Result<BigUint> {
    if a >= m.value() {
        return Err(Error::ResidueOutOfRange { a: a.clone(), m: m.value().clone() });
    }
    if a.is_zero() {
        return Ok(BigUint::zero());
    }
    Ok(m.value() - a)
}

/// Miller-Rabin probable-prime test with `rounds` random bases.
pub fn is_probable_prime<R: Rng + ?Sized>(n: &BigUint, rounds: usize, rng: &mut R) -> bool {
    let two = BigUint::from(2u32);
    let three = BigUint::from(3u32);
    if *n < two {
        return false;
    }
    if *n == two || *n == three {
        return true;
    }
    if n.is_even() {
        return false;
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for _ in 0..rounds {
        let a = rng.gen_biguint_range(&two, &(n - 1u32));
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest probable prime >= `n`.
pub fn next_probable_prime<R: Rng + ?Sized>(n: &BigUint, rng: &mut R) -> BigUint {
    let mut cand = n.clone();
    if cand <= BigUint::from(2u32) {
        return BigUint::from(2u32);
    }
    if cand.is_even() {
        cand += 1u32;
    }
    while !is_probable_prime(&cand, 24, rng) {
        cand += 2u32;
    }
    cand
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn ext_gcd_identity_case() {
        let (g, x, y) = ext_gcd(&big(0), &big(7)).unwrap();
        assert_eq!((g, x, y), (big(7), big(0), big(1)));
    }

    #[test]
    fn ext_gcd_forced_by_definition() {
        let (g, x, y) = ext_gcd(&big(12), &big(18)).unwrap();
        assert_eq!(g, big(6));
        assert_eq!(big(12) * x + big(18) * y, big(6));
    }

    #[test]
    fn ext_gcd_minimal_pair() {
        let (g, x, y) = ext_gcd(&big(3), &big(7)).unwrap();
        assert_eq!((g, x, y), (big(1), big(-2), big(1)));
    }

    #[test]
    fn ext_gcd_both_zero() {
        assert!(matches!(ext_gcd(&big(0), &big(0)), Err(Error::GcdUndefined)));
    }

    #[test]
    fn mod_inv_examples() {
        let m7 = Modulus::new(BigUint::from(7u32)).unwrap();
        assert_eq!(mod_inv(&BigUint::from(1u32), &m7).unwrap(), BigUint::from(1u32));
        assert_eq!(mod_inv(&BigUint::from(3u32), &m7).unwrap(), BigUint::from(5u32));
        let m8 = Modulus::new(BigUint::from(8u32)).unwrap();
        assert!(mod_inv(&BigUint::from(4u32), &m8).is_err());
    }

    #[test]
    fn mod_neg_examples() {
        let m = Modulus::new(BigUint::from(10u32)).unwrap();
        assert_eq!(mod_neg(&BigUint::zero(), &m).unwrap(), BigUint::zero());
        assert_eq!(mod_neg(&BigUint::from(3u32), &m).unwrap(), BigUint::from(7u32));
        assert_eq!(mod_neg(&BigUint::from(9u32), &m).unwrap(), BigUint::from(1u32));
        assert!(mod_neg(&BigUint::from(10u32), &m).is_err());
    }

    #[test]
    fn primality_small() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        for p in [2u32, 3, 5, 7, 65537, 104729] {
            assert!(is_probable_prime(&BigUint::from(p), 24, &mut rng), "{p}");
        }
        for c in [1u32, 4, 9, 561, 65536, 104730] {
            assert!(!is_probable_prime(&BigUint::from(c), 24, &mut rng), "{c}");
        }
        assert_eq!(next_probable_prime(&BigUint::from(65536u32), &mut rng), BigUint::from(65537u32));
    }

    proptest! {
        #[test]
        fn bezout_identity_holds(a in any::<i64>(), b in any::<i64>()) {
            prop_assume!(a != 0 || b != 0);
            let (a, b) = (big(a), big(b));
            let (g, x, y) = ext_gcd(&a, &b).unwrap();
            prop_assert!(!g.is_negative());
            prop_assert_eq!(&a * &x + &b * &y, g);
        }

        #[test]
        fn inverse_roundtrip(a in 1u64..1_000_000, m in 2u64..1_000_000) {
            let a = BigUint::from(a);
            let m = Modulus::new(BigUint::from(m)).unwrap();
            if let Ok(u) = mod_inv(&a, &m) {
                prop_assert!(u >= BigUint::one() && &u < m.value());
                prop_assert_eq!((a * u) % m.value(), BigUint::one());
            }
        }

        #[test]
        fn mod_neg_involution(a in 0u64..1_000_000, m in 2u64..1_000_000) {
            prop_assume!(a < m);
            let a = BigUint::from(a);
            let m = Modulus::new(BigUint::from(m)).unwrap();
            let v = mod_neg(&a, &m).unwrap();
            prop_assert_eq!(mod_neg(&v, &m).unwrap(), a.clone());
            prop_assert!((a + v) % m.value() == BigUint::zero());
        }
    }

    #[test]
    fn bezout_wide_random() {
        // 4096-bit random pairs, exact Bezout identity.
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        for _ in 0..200 {
            let a = BigInt::from(rng.gen_biguint(4096));
            let b = BigInt::from(rng.gen_biguint(4096));
            if a.is_zero() && b.is_zero() {
                continue;
            }
            let (g, x, y) = ext_gcd(&a, &b).unwrap();
            assert_eq!(&a * &x + &b * &y, g);
        }
    }
}
