use thiserror::Error;

/// Default modulus for randomized identity testing: the Mersenne prime 2^61-1.
pub const DEFAULT_PRIME: u64 = (1 << 61) - 1;

/// Errors surfaced while evaluating exact values in `F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ModEvalError {
    /// A denominator vanished at the evaluation point; the caller should
    /// resample the point.
    #[error("denominator vanishes at the evaluation point")]
    Pole,
    /// A coefficient's denominator is divisible by the prime; the caller
    /// should resample the prime.
    #[error("coefficient denominator divisible by the prime")]
    DenominatorDivisibleByPrime,
}

/// An evaluation point over `F_p` with all coordinates nonzero, so negative
/// Laurent exponents stay invertible.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldPoint {
    pub prime: u64,
    pub q: u64,
    pub a: u64,
    pub b: u64,
}

impl FieldPoint {
    pub fn new(prime: u64, q: u64, a: u64, b: u64) -> Self {
        debug_assert!(prime > 2 && q >= 1 && q < prime && a >= 1 && a < prime && b >= 1 && b < prime);
        FieldPoint { prime, q, a, b }
    }

    /// The value of `±q^i a^j b^k` at this point.
    pub fn monomial_value(&self, sign: super::Sign, exps: super::ExpVec) -> u64 {
        let p = self.prime;
        let v = mul_mod(
            mul_mod(pow_mod_signed(self.q, exps.q as i64, p), pow_mod_signed(self.a, exps.a as i64, p), p),
            pow_mod_signed(self.b, exps.b as i64, p),
            p,
        );
        if sign.is_negative() {
            neg_mod(v, p)
        } else {
            v
        }
    }
}

#[inline]
pub fn add_mod(x: u64, y: u64, p: u64) -> u64 {
    let s = x + y; // p < 2^63, so no overflow
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(x: u64, y: u64, p: u64) -> u64 {
    if x >= y {
        x - y
    } else {
        x + p - y
    }
}

#[inline]
pub fn neg_mod(x: u64, p: u64) -> u64 {
    if x == 0 {
        0
    } else {
        p - x
    }
}

#[inline]
pub fn mul_mod(x: u64, y: u64, p: u64) -> u64 {
    ((x as u128 * y as u128) % p as u128) as u64
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

/// `base^exp` for signed exponents; requires `base != 0` when `exp < 0`.
pub fn pow_mod_signed(base: u64, exp: i64, p: u64) -> u64 {
    if exp >= 0 {
        pow_mod(base, exp as u64, p)
    } else {
        let inv = inv_mod(base, p).expect("inverse of zero");
        pow_mod(inv, exp.unsigned_abs(), p)
    }
}

/// Multiplicative inverse by Fermat's little theorem; `None` for zero.
pub fn inv_mod(x: u64, p: u64) -> Option<u64> {
    if x % p == 0 {
        None
    } else {
        Some(pow_mod(x, p - 2, p))
    }
}

/// Deterministic Miller-Rabin for u64 (the base set below is exact for all
/// 64-bit inputs).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &sp in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == sp {
            return true;
        }
        if n % sp == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for &w in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(w, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..r - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_pow() {
        let p = 7;
        assert_eq!(inv_mod(3, p), Some(5));
        assert_eq!(pow_mod_signed(3, -1, p), 5);
        assert_eq!(inv_mod(0, p), None);
        assert_eq!(pow_mod(2, 10, 1000), 24);
    }

    #[test]
    fn default_prime_is_prime() {
        assert!(is_prime_u64(DEFAULT_PRIME));
        assert!(is_prime_u64((1 << 31) - 1));
        assert!(!is_prime_u64(1 << 61));
    }
}
