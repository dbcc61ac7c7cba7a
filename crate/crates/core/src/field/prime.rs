//! Prime fields GF(l) with `l < 2^32`.

use super::FieldOps;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    pub modulus: u64,
}

impl PrimeField {
    pub fn new(modulus: u64) -> Self {
        PrimeField { modulus }
    }

    pub fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.modulus as i64) as u64
    }

    pub fn from_u128(&self, v: u128) -> u64 {
        (v % self.modulus as u128) as u64
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        pow_mod(a, e, self.modulus)
    }

    /// Least generator of the multiplicative group.
    pub fn primitive_root(&self) -> u64 {
        let l = self.modulus;
        if l == 2 {
            return 1;
        }
        let factors = crate::group::prime_factors((l - 1) as u128);
        (2..l)
            .find(|&g| factors.iter().all(|&q| pow_mod(g, (l - 1) / q, l) != 1))
            .expect("prime modulus has a primitive root")
    }
}

pub fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * a as u128 % m as u128) as u64;
        }
        a = (a as u128 * a as u128 % m as u128) as u64;
        e >>= 1;
    }
    acc
}

impl FieldOps for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.modulus
    }

    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.modulus - b) % self.modulus
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (*a as u128 * *b as u128 % self.modulus as u128) as u64
    }

    fn neg(&self, a: &u64) -> u64 {
        (self.modulus - a) % self.modulus
    }

    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        pow_mod(*a, self.modulus - 2, self.modulus)
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_roots() {
        assert_eq!(PrimeField::new(7).primitive_root(), 3);
        assert_eq!(PrimeField::new(73).primitive_root(), 5);
        let f = PrimeField::new(13);
        assert_eq!(f.mul(&f.inv(&5), &5), 1);
    }
}
