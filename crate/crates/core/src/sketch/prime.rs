//! Deterministic primality testing and next-prime search.
//!
//! Values below 2^32 are settled by trial division. Values below 2^64 use
//! Miller-Rabin with the first twelve prime bases, which is exact on that
//! range. Larger values use Miller-Rabin on the same bases followed by a
//! strong Lucas test with Selfridge parameters (Baillie-PSW). No randomness
//! is involved anywhere, so results are reproducible.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::{Integer, Roots};
use num_traits::{One, ToPrimitive, Zero};

const MR_BASES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Returns the least prime strictly greater than `m`.
pub fn smallest_prime_above(m: &BigUint) -> BigUint {
    let mut candidate = m + 1u32;
    if candidate <= BigUint::from(2u32) {
        return BigUint::from(2u32);
    }
    if candidate.is_even() {
        candidate += 1u32;
    }
    while !is_prime(&candidate) {
        candidate += 2u32;
    }
    candidate
}

pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        if small < (1 << 32) {
            return is_prime_trial(small);
        }
    }
    for &q in &MR_BASES {
        if (n % q).is_zero() {
            return false;
        }
    }
    if !MR_BASES.iter().all(|&a| miller_rabin(n, &BigUint::from(a))) {
        return false;
    }
    if n.bits() <= 64 {
        return true;
    }
    strong_lucas(n)
}

fn is_prime_trial(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let limit = n.sqrt();
    let mut q = 3;
    while q <= limit {
        if n.is_multiple_of(q) {
            return false;
        }
        q += 2;
    }
    true
}

/// Strong probable-prime test to base `a`; `n` is odd and larger than `a`.
fn miller_rabin(n: &BigUint, a: &BigUint) -> bool {
    let n_minus_one = n - 1u32;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    let mut x = a.modpow(&d, n);
    if x.is_one() || x == n_minus_one {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_one {
            return true;
        }
        if x.is_one() {
            return false;
        }
    }
    false
}

fn jacobi(a: &BigInt, n: &BigInt) -> i32 {
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut result = 1;
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = (&n % 8u32).to_u32().unwrap();
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32).to_u32() == Some(3) && (&n % 4u32).to_u32() == Some(3) {
            result = -result;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

fn half_mod(x: BigInt, n: &BigInt) -> BigInt {
    if x.is_odd() {
        (x + n) >> 1
    } else {
        x >> 1
    }
}

/// Strong Lucas probable-prime test with Selfridge's method A (P = 1).
fn strong_lucas(n: &BigUint) -> bool {
    let root = n.sqrt();
    if &root * &root == *n {
        return false;
    }
    let m = BigInt::from_biguint(Sign::Plus, n.clone());

    let mut d = BigInt::from(5);
    loop {
        match jacobi(&d, &m) {
            -1 => break,
            0 if d.magnitude() != n => return false,
            _ => {}
        }
        d = if d.sign() == Sign::Minus { -d + 2 } else { -(d + 2i32) };
    }
    let q: BigInt = (BigInt::one() - &d) / 4;

    let n_plus_one = n + 1u32;
    let s = n_plus_one.trailing_zeros().unwrap_or(0);
    let k = &n_plus_one >> s;

    let mut u = BigInt::one();
    let mut v = BigInt::one();
    let mut qk = q.mod_floor(&m);
    let q_mod = qk.clone();
    for i in (0..k.bits() - 1).rev() {
        u = (&u * &v).mod_floor(&m);
        v = (&v * &v - (&qk << 1u32)).mod_floor(&m);
        qk = (&qk * &qk).mod_floor(&m);
        if k.bit(i) {
            let next_u = half_mod(&u + &v, &m).mod_floor(&m);
            let next_v = half_mod(&d * &u + &v, &m).mod_floor(&m);
            u = next_u;
            v = next_v;
            qk = (&qk * &q_mod).mod_floor(&m);
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = (&v * &v - (&qk << 1u32)).mod_floor(&m);
        if v.is_zero() {
            return true;
        }
        qk = (&qk * &qk).mod_floor(&m);
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn next_prime_by_trial(m: u64) -> u64 {
        let mut k = m + 1;
        loop {
            if k >= 2 && (2..).take_while(|q| q * q <= k).all(|q| !k.is_multiple_of(q)) {
                return k;
            }
            k += 1;
        }
    }

    #[test]
    fn spec_examples() {
        assert_eq!(smallest_prime_above(&BigUint::from(1u32)), BigUint::from(2u32));
        assert_eq!(smallest_prime_above(&BigUint::from(18u32)), BigUint::from(19u32));
        assert_eq!(smallest_prime_above(&BigUint::from(100u32)), BigUint::from(101u32));
    }

    #[test]
    fn matches_trial_division_oracle() {
        for m in 1..5000u64 {
            assert_eq!(
                smallest_prime_above(&BigUint::from(m)),
                BigUint::from(next_prime_by_trial(m)),
                "m = {m}"
            );
        }
    }

    #[test]
    fn large_known_values() {
        // 2^61 - 1 and 2^127 - 1 are Mersenne primes.
        let m61 = (BigUint::one() << 61u32) - 1u32;
        let m127 = (BigUint::one() << 127u32) - 1u32;
        assert!(is_prime(&m61));
        assert!(is_prime(&m127));
        assert!(!is_prime(&(&m127 * &m61)));
        // Strong pseudoprime to bases 2..37 below 2^82 (Sorenson-Webster).
        let spsp: BigUint = "3317044064679887385961981".parse().unwrap();
        assert!(!is_prime(&spsp));
        // Carmichael number.
        assert!(!is_prime(&BigUint::from(561u32)));
        // 2^89 - 1 is prime, 2^89 + 1 is divisible by 3.
        let m89 = (BigUint::one() << 89u32) - 1u32;
        assert!(is_prime(&m89));
        assert_eq!(smallest_prime_above(&(&m89 - 1u32)), m89);
    }

    #[test]
    fn lucas_agrees_with_trial_division_on_small_odd_values() {
        for n in (5u64..20_000).step_by(2) {
            let big = BigUint::from(n);
            let expect = is_prime_trial(n);
            let root = n.sqrt();
            if root * root == n {
                continue;
            }
            if expect {
                assert!(strong_lucas(&big), "prime {n} rejected");
            }
        }
    }
}
