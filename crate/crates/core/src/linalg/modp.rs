//! Arithmetic modulo word-sized primes.

use std::sync::OnceLock;

use rand::Rng;

use crate::rng::rng_from_seed;

/// The prime field `Z/p` for an odd prime `p < 2^63`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        assert!(p > 2 && p < (1 << 63) && is_prime_u64(p), "{p} is not an odd prime below 2^63");
        PrimeField { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(a != 0);
        self.pow(a, self.p - 2)
    }

    /// Image of a signed integer.
    #[inline]
    pub fn from_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &WITNESSES {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// A uniformly drawn prime in `[2^61, 2^62)`.
pub fn random_prime<R: Rng>(rng: &mut R) -> u64 {
    loop {
        let candidate = rng.gen_range((1u64 << 61)..(1u64 << 62)) | 1;
        if is_prime_u64(candidate) {
            return candidate;
        }
    }
}

/// The two primes used by modular rank computations. They are drawn once,
/// from a fixed seed, so results are reproducible across runs.
pub fn rank_primes() -> [PrimeField; 2] {
    static PRIMES: OnceLock<[PrimeField; 2]> = OnceLock::new();
    *PRIMES.get_or_init(|| {
        let mut rng = rng_from_seed(0x5EED_F0E1_D1AA_0001);
        let p = random_prime(&mut rng);
        let mut q = random_prime(&mut rng);
        while q == p {
            q = random_prime(&mut rng);
        }
        [PrimeField::new(p), PrimeField::new(q)]
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..60).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(is_prime_u64((1 << 61) - 1));
        assert!(!is_prime_u64(3_215_031_751)); // strong pseudoprime to bases 2, 3, 5, 7
        assert!(!is_prime_u64(((1u64 << 31) - 1) * ((1u64 << 31) - 1)));
    }

    #[test]
    fn rank_primes_are_large_and_distinct() {
        let [p, q] = rank_primes();
        assert!(p.modulus() > 1 << 60 && q.modulus() > 1 << 60);
        assert_ne!(p, q);
    }

    #[test]
    fn field_ops() {
        let f = PrimeField::new((1 << 61) - 1);
        let a = 123_456_789_012_345;
        assert_eq!(f.mul(a, f.inv(a)), 1);
        assert_eq!(f.add(f.neg(a), a), 0);
        assert_eq!(f.sub(3, 5), f.from_i64(-2));
    }
}
