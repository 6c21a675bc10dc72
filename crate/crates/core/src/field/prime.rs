use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The prime field F_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeField {
    p: u64,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    /// Rejects moduli that are not prime or too large for exact `u64` products.
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p > u32::MAX as u64 {
            return Err(Error::Domain(format!("modulus {p} exceeds 32 bits")));
        }
        Ok(Self { p })
    }

    pub fn p(self) -> u64 {
        self.p
    }

    /// Maps an integer to its residue: the inverse of the embedding `g`.
    pub fn g_inv(self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }

    /// Embeds a field element as the integer in `0..p`.
    pub fn g(self, x: u64) -> i64 {
        debug_assert!(x < self.p);
        x as i64
    }

    pub fn add(self, x: u64, y: u64) -> u64 {
        (x + y) % self.p
    }

    pub fn sub(self, x: u64, y: u64) -> u64 {
        (x + self.p - y) % self.p
    }

    pub fn mul(self, x: u64, y: u64) -> u64 {
        (x * y) % self.p
    }

    pub fn neg(self, x: u64) -> u64 {
        (self.p - x) % self.p
    }

    /// Multiplicative inverse of a nonzero element.
    pub fn inv(self, x: u64) -> u64 {
        assert!(x % self.p != 0, "zero has no inverse");
        let mut result = 1u64;
        let mut base = x % self.p;
        let mut e = self.p - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }
}

impl TryFrom<u64> for PrimeField {
    type Error = Error;
    fn try_from(p: u64) -> Result<Self> {
        Self::new(p)
    }
}

impl From<PrimeField> for u64 {
    fn from(f: PrimeField) -> u64 {
        f.p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(is_prime(769));
        assert!(PrimeField::new(9).is_err());
    }

    #[test]
    fn inverses() {
        let f = PrimeField::new(13).unwrap();
        for x in 1..13 {
            assert_eq!(f.mul(x, f.inv(x)), 1);
        }
    }
}
