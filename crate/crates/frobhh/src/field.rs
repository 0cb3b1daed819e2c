//! Prime field arithmetic.
//!
//! A [`PrimeField`] is a context object holding an odd or even prime modulus
//! `p < 2^31`; a [`Scalar`] is a canonical representative in `[0, p)`. All
//! arithmetic is exact. Products of two scalars fit in a `u64`, which the
//! elimination kernels in [`crate::matrix`] exploit for delayed reduction.

use crate::error::{Error, Result};

/// An element of a prime field, stored as its canonical representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(transparent)]
pub struct Scalar(pub u64);

impl Scalar {
    pub const ZERO: Scalar = Scalar(0);
    pub const ONE: Scalar = Scalar(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Arithmetic context for the field `F_p`.
///
/// Construction verifies primality by trial division (sufficient for the
/// supported range `p < 2^31`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Builds the field `F_p`, rejecting non-primes and moduli `>= 2^31`.
    pub fn new(p: u64) -> Result<PrimeField> {
        if p < 2 || p >= (1 << 31) || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(self) -> u64 {
        self.p
    }

    pub fn zero(self) -> Scalar {
        Scalar(0)
    }

    pub fn one(self) -> Scalar {
        Scalar(1 % self.p)
    }

    /// Reduces an arbitrary unsigned integer.
    pub fn scalar(self, v: u64) -> Scalar {
        Scalar(v % self.p)
    }

    /// Reduces a signed integer, mapping negatives to their canonical class.
    pub fn scalar_i64(self, v: i64) -> Scalar {
        let p = self.p as i64;
        Scalar(v.rem_euclid(p) as u64)
    }

    pub fn add(self, a: Scalar, b: Scalar) -> Scalar {
        let s = a.0 + b.0;
        Scalar(if s >= self.p { s - self.p } else { s })
    }

    pub fn sub(self, a: Scalar, b: Scalar) -> Scalar {
        Scalar(if a.0 >= b.0 { a.0 - b.0 } else { a.0 + self.p - b.0 })
    }

    pub fn neg(self, a: Scalar) -> Scalar {
        Scalar(if a.0 == 0 { 0 } else { self.p - a.0 })
    }

    pub fn mul(self, a: Scalar, b: Scalar) -> Scalar {
        Scalar(a.0 * b.0 % self.p)
    }

    /// `a + b*c` in one reduction.
    pub fn mul_add(self, a: Scalar, b: Scalar, c: Scalar) -> Scalar {
        Scalar((a.0 + b.0 * c.0) % self.p)
    }

    pub fn pow(self, a: Scalar, mut e: u64) -> Scalar {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via Fermat's little theorem.
    ///
    /// Panics on zero; callers guard divisions explicitly.
    pub fn inv(self, a: Scalar) -> Scalar {
        assert!(!a.is_zero(), "division by zero in F_{}", self.p);
        self.pow(a, self.p - 2)
    }

    pub fn div(self, a: Scalar, b: Scalar) -> Scalar {
        self.mul(a, self.inv(b))
    }

    /// The smallest primitive `m`-th root of unity, i.e. the least `w` in
    /// `[1, p)` with `w^m = 1` and `w^r != 1` for `0 < r < m`.
    ///
    /// Fails with [`Error::NoRoot`] when `m` does not divide `p - 1`.
    pub fn primitive_root_of_unity(self, m: u64) -> Result<Scalar> {
        assert!(m >= 1);
        if (self.p - 1) % m != 0 {
            return Err(Error::NoRoot { m, p: self.p });
        }
        for cand in 1..self.p {
            let w = Scalar(cand);
            if self.pow(w, m) != self.one() {
                continue;
            }
            if (1..m).all(|r| self.pow(w, r) != self.one()) {
                return Ok(w);
            }
        }
        // Unreachable: F_p^* is cyclic of order p-1 and m | p-1.
        Err(Error::NoRoot { m, p: self.p })
    }

    /// Multiplicative order of a nonzero scalar.
    pub fn scalar_order(self, a: Scalar) -> u64 {
        assert!(!a.is_zero());
        let mut acc = a;
        let mut k = 1;
        while acc != self.one() {
            acc = self.mul(acc, a);
            k += 1;
        }
        k
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn constructor_accepts_primes_only() {
        assert!(PrimeField::new(13).is_ok());
        assert!(PrimeField::new(2).is_ok());
        assert!(matches!(PrimeField::new(12), Err(Error::NotPrime(12))));
        assert!(matches!(PrimeField::new(1), Err(Error::NotPrime(1))));
        assert!(matches!(PrimeField::new(0), Err(Error::NotPrime(0))));
        assert!(PrimeField::new(1 << 31).is_err());
        assert!(PrimeField::new(2147483647).is_ok()); // Mersenne prime 2^31 - 1
    }

    #[test]
    fn roots_of_unity_in_f13() {
        let f = PrimeField::new(13).unwrap();
        assert_eq!(f.primitive_root_of_unity(3).unwrap(), Scalar(3));
        assert_eq!(f.primitive_root_of_unity(1).unwrap(), Scalar(1));
        assert_eq!(f.primitive_root_of_unity(2).unwrap(), Scalar(12));
        assert!(matches!(
            f.primitive_root_of_unity(5),
            Err(Error::NoRoot { m: 5, p: 13 })
        ));
    }

    #[test]
    fn root_powers_behave() {
        let f = PrimeField::new(13).unwrap();
        for m in [1u64, 2, 3, 4, 6, 12] {
            let w = f.primitive_root_of_unity(m).unwrap();
            assert_eq!(f.pow(w, m), f.one());
            for r in 1..m {
                assert_ne!(f.pow(w, r), f.one());
            }
        }
    }

    #[test]
    fn inverse_of_two_mod_13() {
        let f = PrimeField::new(13).unwrap();
        assert_eq!(f.inv(Scalar(2)), Scalar(7));
    }

    proptest! {
        #[test]
        fn field_axioms_mod_10007(a in 0u64..10007, b in 0u64..10007, c in 0u64..10007) {
            let f = PrimeField::new(10007).unwrap();
            let (a, b, c) = (Scalar(a), Scalar(b), Scalar(c));
            prop_assert_eq!(f.add(a, b), f.add(b, a));
            prop_assert_eq!(f.mul(a, b), f.mul(b, a));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.sub(f.add(a, b), b), a);
            if !a.is_zero() {
                prop_assert_eq!(f.mul(a, f.inv(a)), f.one());
            }
        }
    }
}
