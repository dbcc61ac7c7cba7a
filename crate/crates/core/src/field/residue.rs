//! Reduction of cyclotomic integers modulo a prime ideal above `p`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::cyclo::cyclotomic_coefficients;
use super::{Cyclo, FieldOps};
use crate::error::{Error, Result};

/// GF(p^f) as polynomials modulo a fixed monic irreducible, with log tables.
/// Elements are encoded as `sum c_i p^i`.
#[derive(Debug, Clone)]
pub struct ResidueField {
    p: u64,
    degree: u32,
    size: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

fn digits(mut code: u64, p: u64, f: u32) -> Vec<u64> {
    (0..f)
        .map(|_| {
            let d = code % p;
            code /= p;
            d
        })
        .collect()
}

fn encode(coeffs: &[u64], p: u64) -> u64 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Product of two residues, reducing by the monic `modulus` (lowest degree first).
fn poly_mul_mod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let f = modulus.len() - 1;
    let mut prod = vec![0u64; 2 * f];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for k in (f..prod.len()).rev() {
        let c = prod[k];
        if c != 0 {
            for i in 0..=f {
                prod[k - f + i] = (prod[k - f + i] + p * p - c * modulus[i] % p) % p;
            }
        }
    }
    prod.truncate(f);
    prod
}

impl ResidueField {
    fn new(p: u64, modulus: &[u64]) -> Self {
        let f = (modulus.len() - 1) as u32;
        let size = p.pow(f) as u32;
        let mut exp = vec![0u32; size as usize];
        let mut log = vec![0u32; size as usize];
        for cand in 1..size as u64 {
            let g = digits(cand, p, f);
            let mut cur = digits(1, p, f);
            let mut order = 0;
            exp.iter_mut().for_each(|e| *e = 0);
            loop {
                exp[order] = encode(&cur, p) as u32;
                cur = poly_mul_mod(&cur, &g, modulus, p);
                order += 1;
                if encode(&cur, p) == 1 || order >= size as usize - 1 {
                    break;
                }
            }
            if order == size as usize - 1 && encode(&cur, p) == 1 {
                for (k, &e) in exp.iter().take(order).enumerate() {
                    log[e as usize] = k as u32;
                }
                exp.truncate(order);
                return ResidueField {
                    p,
                    degree: f,
                    size,
                    exp,
                    log,
                };
            }
        }
        // GF(2) has the single unit 1
        ResidueField {
            p,
            degree: f,
            size,
            exp: vec![1],
            log,
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn from_int(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if a == 0 {
            return u32::from(e == 0);
        }
        let n = self.exp.len() as u64;
        self.exp[((self.log[a as usize] as u64 * (e % n)) % n) as usize]
    }
}

impl FieldOps for ResidueField {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }

    fn one(&self) -> u32 {
        1
    }

    fn add(&self, a: &u32, b: &u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let da = digits(*a as u64, self.p, self.degree);
        let db = digits(*b as u64, self.p, self.degree);
        let s: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        encode(&s, self.p) as u32
    }

    fn sub(&self, a: &u32, b: &u32) -> u32 {
        self.add(a, &self.neg(b))
    }

    fn mul(&self, a: &u32, b: &u32) -> u32 {
        if *a == 0 || *b == 0 {
            return 0;
        }
        let n = self.exp.len();
        self.exp[(self.log[*a as usize] as usize + self.log[*b as usize] as usize) % n]
    }

    fn neg(&self, a: &u32) -> u32 {
        if self.p == 2 {
            return *a;
        }
        let d = digits(*a as u64, self.p, self.degree);
        let s: Vec<u64> = d.iter().map(|x| (self.p - x) % self.p).collect();
        encode(&s, self.p) as u32
    }

    fn inv(&self, a: &u32) -> u32 {
        assert!(*a != 0, "inverse of zero");
        let n = self.exp.len();
        self.exp[(n - self.log[*a as usize] as usize) % n]
    }

    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
}

/// Reduction map `Z_(p)[zeta_m] -> GF(p^f)`.
#[derive(Debug, Clone)]
pub struct ModPContext {
    pub p: u64,
    pub m: u64,
    /// `m = p^a * m_prime` with `p` not dividing `m_prime`.
    pub p_exponent: u32,
    pub m_prime: u64,
    /// Encoded coefficients of the chosen irreducible factor of `Phi_{m'}` mod `p`.
    pub factor_code: u64,
    pub field: ResidueField,
    zeta_powers: Vec<u32>,
}

impl ModPContext {
    pub fn new(m: u64, p: u64) -> Result<Self> {
        Self::with_factor(m, p, 0)
    }

    /// Uses the `choice`-th irreducible factor in increasing code order.
    pub fn with_factor(m: u64, p: u64, choice: usize) -> Result<Self> {
        if !crate::group::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let mut m_prime = m.max(1);
        let mut a = 0;
        while m_prime.is_multiple_of(p) {
            m_prime /= p;
            a += 1;
        }
        let f = multiplicative_order(p, m_prime);
        if p.checked_pow(f).is_none_or(|s| s > 1 << 20) {
            return Err(Error::CapExceeded {
                what: "residue field size",
                value: p.saturating_pow(f) as u128,
                cap: 1 << 20,
            });
        }
        let phi: Vec<u64> = cyclotomic_coefficients(m_prime)
            .iter()
            .map(|&c| c.rem_euclid(p as i64) as u64)
            .collect();
        let mut factors = Vec::new();
        for low in 0..p.pow(f) {
            let mut cand = digits(low, p, f);
            cand.push(1);
            if poly_rem(&phi, &cand, p).iter().all(|&c| c == 0) {
                factors.push(cand);
            }
        }
        let modulus = factors.get(choice).cloned().ok_or_else(|| {
            Error::InternalInconsistency(format!("factor choice {choice} of {} unavailable", factors.len()))
        })?;
        let field = ResidueField::new(p, &modulus);
        // zeta_{m'} -> x, zeta_{p^a} -> 1, so zeta_m -> x^s with s = (p^a)^-1 mod m'
        let pa = p.pow(a);
        let s = if m_prime == 1 { 0 } else { mod_inverse(pa % m_prime, m_prime) };
        let x = if f == 1 {
            // the root of a linear factor x + c is -c
            field.from_int(-(modulus[0] as i64))
        } else {
            p as u32
        };
        let zeta = field.pow(x, s);
        let zeta_powers = (0..m.max(1)).map(|k| field.pow(zeta, k)).collect();
        Ok(ModPContext {
            p,
            m: m.max(1),
            p_exponent: a,
            m_prime,
            factor_code: encode(&modulus, p),
            field,
            zeta_powers,
        })
    }

    pub fn num_factors(m: u64, p: u64) -> usize {
        let mut m_prime = m.max(1);
        while m_prime.is_multiple_of(p) {
            m_prime /= p;
        }
        (crate::field::cyclo::euler_phi(m_prime) / multiplicative_order(p, m_prime) as u64) as usize
    }

    /// Image of `zeta_m^k`.
    pub fn zeta_image(&self, k: i64) -> u32 {
        self.zeta_powers[k.rem_euclid(self.m as i64) as usize]
    }

    fn reduce_rational(&self, q: &BigRational) -> Result<u32> {
        let p = BigInt::from(self.p);
        if q.denom().is_multiple_of(&p) {
            return Err(Error::NotPIntegral(self.p));
        }
        let n = q.numer().mod_floor(&p).to_u64().unwrap();
        let d = q.denom().mod_floor(&p).to_u64().unwrap();
        let f = &self.field;
        Ok(f.mul(&f.from_int(n as i64), &f.inv(&f.from_int(d as i64))))
    }

    pub fn reduce(&self, x: &Cyclo) -> Result<u32> {
        let c = x.conductor();
        let x = if self.m.is_multiple_of(c) {
            x.lift(self.m)
        } else {
            let n = x.normalized();
            if !self.m.is_multiple_of(n.conductor()) {
                return Err(Error::InternalInconsistency(format!(
                    "value of conductor {} outside the reduction context of conductor {}",
                    n.conductor(),
                    self.m
                )));
            }
            n.lift(self.m)
        };
        let f = &self.field;
        let mut acc = 0u32;
        for (i, q) in x.coefficients().iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let r = self.reduce_rational(q)?;
            acc = f.add(&acc, &f.mul(&r, &self.zeta_image(i as i64)));
        }
        Ok(acc)
    }
}

fn poly_rem(num: &[u64], den: &[u64], p: u64) -> Vec<u64> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    if rem.len() <= dn {
        return rem;
    }
    for k in (dn..rem.len()).rev() {
        let c = rem[k] % p;
        if c != 0 {
            for (i, &d) in den.iter().enumerate() {
                rem[k - dn + i] = (rem[k - dn + i] + p * p - c * d % p) % p;
            }
        }
    }
    rem.truncate(dn);
    rem
}

fn multiplicative_order(p: u64, m: u64) -> u32 {
    if m == 1 {
        return 1;
    }
    let mut x = p % m;
    let mut k = 1;
    while x != 1 {
        x = x * p % m;
        k += 1;
    }
    k
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    (1..m).find(|&s| a * s % m == 1).expect("unit modulo m")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf4_from_cube_roots() {
        let ctx = ModPContext::new(3, 2).unwrap();
        assert_eq!(ctx.field.size(), 4);
        let z = ctx.reduce(&Cyclo::zeta(3)).unwrap();
        assert_ne!(z, 1);
        assert_eq!(ctx.field.pow(z, 3), 1);
    }

    #[test]
    fn two_power_roots_collapse() {
        let ctx = ModPContext::new(4, 2).unwrap();
        assert_eq!(ctx.field.size(), 2);
        assert_eq!(ctx.reduce(&Cyclo::zeta(4)).unwrap(), 1);
        let s = &Cyclo::zeta(4) + &Cyclo::zeta_pow(4, -1);
        assert_eq!(ctx.reduce(&s).unwrap(), 0);
    }

    #[test]
    fn conductor_twelve_is_multiplicative() {
        let ctx = ModPContext::new(12, 2).unwrap();
        let f = &ctx.field;
        let z3 = ctx.reduce(&Cyclo::zeta(3)).unwrap();
        let z4 = ctx.reduce(&Cyclo::zeta(4)).unwrap();
        let z12 = ctx.reduce(&Cyclo::zeta(12)).unwrap();
        assert_eq!(z4, 1);
        // zeta_12 = zeta_3 * zeta_4^-1
        assert_eq!(z12, z3);
        assert_eq!(f.mul(&z3, &z4), ctx.reduce(&(&Cyclo::zeta(3) * &Cyclo::zeta(4))).unwrap());
    }

    #[test]
    fn integers_and_denominators() {
        let ctx = ModPContext::new(3, 2).unwrap();
        assert_eq!(ctx.reduce(&Cyclo::from_int(7)).unwrap(), 1);
        assert_eq!(ctx.reduce(&Cyclo::from_int(2)).unwrap(), 0);
        let third = Cyclo::from_rational(BigRational::new(1.into(), 3.into()));
        assert_eq!(ctx.reduce(&third).unwrap(), 1);
        let half = Cyclo::from_rational(BigRational::new(1.into(), 2.into()));
        assert_eq!(ctx.reduce(&half), Err(Error::NotPIntegral(2)));
    }

    #[test]
    fn fifteen_has_two_factor_choices() {
        assert_eq!(ModPContext::num_factors(15, 2), 2);
        let a = ModPContext::with_factor(15, 2, 0).unwrap();
        let b = ModPContext::with_factor(15, 2, 1).unwrap();
        assert_ne!(a.factor_code, b.factor_code);
        assert_eq!(a.field.size(), 16);
    }
}
