//! Word-sized modular arithmetic used by the rigorous zero test and the
//! prime-field evaluation mode.

use std::sync::OnceLock;

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue modulo a prime.
pub fn inv_mod(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        None
    } else {
        Some(pow_mod(a, p - 2, p))
    }
}

/// Deterministic Miller-Rabin; the witness set is exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &sp in &SMALL {
        if n % sp == 0 {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

const POOL_SIZE: usize = 256;

/// Descending list of primes just below 2^62. Shared and immutable.
pub fn prime_pool() -> &'static [u64] {
    static POOL: OnceLock<Vec<u64>> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut out = Vec::with_capacity(POOL_SIZE);
        let mut c = (1u64 << 62) - 1;
        while out.len() < POOL_SIZE {
            if is_prime(c) {
                out.push(c);
            }
            c -= 2;
        }
        out
    })
}

/// Reduce a signed big integer modulo `p`.
pub fn bigint_mod(x: &num_bigint::BigInt, p: u64) -> u64 {
    use num_bigint::Sign;
    use num_traits::ToPrimitive;
    let r = (x.magnitude() % p).to_u64().unwrap_or(0);
    if x.sign() == Sign::Minus && r != 0 {
        p - r
    } else {
        r
    }
}

/// Reduce a rational modulo `p`; `None` when the denominator vanishes mod `p`.
pub fn rational_mod(x: &num_rational::BigRational, p: u64) -> Option<u64> {
    let n = bigint_mod(x.numer(), p);
    let d = bigint_mod(x.denom(), p);
    inv_mod(d, p).map(|di| mul_mod(n, di, p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes_classified() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        // Carmichael numbers must be rejected.
        assert!(!is_prime(561));
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn pool_is_prime_and_descending() {
        let pool = prime_pool();
        assert_eq!(pool.len(), POOL_SIZE);
        assert!(pool.windows(2).all(|w| w[0] > w[1]));
        assert!(pool.iter().take(4).all(|&p| is_prime(p) && p < (1 << 62)));
    }

    #[test]
    fn inverse_roundtrip() {
        let p = prime_pool()[0];
        for a in [1u64, 2, 12345, p - 1] {
            let ai = inv_mod(a, p).unwrap();
            assert_eq!(mul_mod(a, ai, p), 1);
        }
        assert!(inv_mod(0, p).is_none());
    }
}
