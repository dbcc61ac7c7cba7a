//! Exact arithmetic in cyclotomic fields.
//!
//! An element of `Q(zeta_m)` is stored by its coefficients on the power basis
//! `1, z, ..., z^(phi(m)-1)` of `Q[x]/Phi_m`. Binary operations lift both sides
//! to the lcm of the conductors. `normalized` moves a value to the smallest
//! conductor that contains it; equality does not depend on normalization.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::Serialize;

use super::{solve_in_span, FieldOps};

struct Conductor {
    phi: usize,
    /// `x^k mod Phi_m` for `0 <= k < m`.
    powers: Vec<Vec<i64>>,
}

fn cyclotomic_poly(m: u64, cache: &mut HashMap<u64, Vec<i64>>) -> Vec<i64> {
    if let Some(p) = cache.get(&m) {
        return p.clone();
    }
    // x^m - 1 divided by Phi_d for every proper divisor d
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m.is_multiple_of(d) {
            let den = cyclotomic_poly(d, cache);
            num = poly_div_exact(&num, &den);
        }
    }
    cache.insert(m, num.clone());
    num
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let qn = rem.len() - 1 - dn;
    let mut q = vec![0i64; qn + 1];
    for k in (0..=qn).rev() {
        let c = rem[k + dn];
        q[k] = c;
        for (i, &d) in den.iter().enumerate() {
            rem[k + i] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

/// Conductor data and cyclotomic polynomials, keyed by `m`.
type Cache = (HashMap<u64, Arc<Conductor>>, HashMap<u64, Vec<i64>>);

fn conductor_data(m: u64) -> Arc<Conductor> {
    static CACHE: OnceLock<Mutex<Cache>> = OnceLock::new();
    let lock = CACHE.get_or_init(|| Mutex::new((HashMap::new(), HashMap::new())));
    let mut guard = lock.lock().expect("cyclotomic cache poisoned");
    if let Some(d) = guard.0.get(&m) {
        return d.clone();
    }
    let phi_poly = cyclotomic_poly(m, &mut guard.1);
    let n = phi_poly.len() - 1;
    let mut powers = Vec::with_capacity(m as usize);
    let mut cur = vec![0i64; n];
    cur[0] = 1;
    for _ in 0..m {
        powers.push(cur.clone());
        // multiply by x and reduce with the monic Phi_m
        let top = cur[n - 1];
        for i in (1..n).rev() {
            cur[i] = cur[i - 1];
        }
        cur[0] = 0;
        if top != 0 {
            for i in 0..n {
                cur[i] = cur[i]
                    .checked_sub(top.checked_mul(phi_poly[i]).expect("cyclotomic overflow"))
                    .expect("cyclotomic overflow");
            }
        }
    }
    let data = Arc::new(Conductor { phi: n, powers });
    guard.0.insert(m, data.clone());
    data
}

/// Integer coefficients of `Phi_m`, lowest degree first.
pub(crate) fn cyclotomic_coefficients(m: u64) -> Vec<i64> {
    let mut cache = HashMap::new();
    cyclotomic_poly(m, &mut cache)
}

pub fn euler_phi(m: u64) -> u64 {
    crate::group::prime_factors(m as u128)
        .iter()
        .fold(m, |acc, &p| acc / p * (p - 1))
}

#[derive(Clone)]
pub struct Cyclo {
    m: u64,
    c: Vec<BigRational>,
}

impl Cyclo {
    pub fn zero() -> Self {
        Cyclo {
            m: 1,
            c: vec![BigRational::zero()],
        }
    }

    pub fn one() -> Self {
        Cyclo::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        Cyclo::from_rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Cyclo::from_rational(BigRational::from_integer(v))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Cyclo { m: 1, c: vec![q] }
    }

    /// `zeta_m^k`.
    pub fn zeta_pow(m: u64, k: i64) -> Self {
        assert!(m >= 1, "conductor must be positive");
        let mut b = vec![BigRational::zero(); m as usize];
        b[k.rem_euclid(m as i64) as usize] = BigRational::one();
        Cyclo::from_buckets(m, &b)
    }

    pub fn zeta(m: u64) -> Self {
        Cyclo::zeta_pow(m, 1)
    }

    /// `sum_k counts[k] * zeta_m^k`.
    pub fn from_exponent_counts(m: u64, counts: &[i64]) -> Self {
        let b: Vec<BigRational> = (0..m as usize)
            .map(|k| BigRational::from_integer(BigInt::from(counts.get(k).copied().unwrap_or(0))))
            .collect();
        Cyclo::from_buckets(m, &b)
    }

    fn from_buckets(m: u64, b: &[BigRational]) -> Self {
        let data = conductor_data(m);
        let mut c = vec![BigRational::zero(); data.phi];
        for (k, coef) in b.iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            for (j, &w) in data.powers[k].iter().enumerate() {
                if w != 0 {
                    c[j] += coef * BigRational::from_integer(BigInt::from(w));
                }
            }
        }
        Cyclo { m, c }
    }

    fn from_int_buckets(m: u64, b: &[BigInt]) -> Self {
        let data = conductor_data(m);
        let mut c = vec![BigInt::zero(); data.phi];
        for (k, coef) in b.iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            for (j, &w) in data.powers[k].iter().enumerate() {
                if w != 0 {
                    c[j] += coef * w;
                }
            }
        }
        Cyclo {
            m,
            c: c.into_iter().map(BigRational::from_integer).collect(),
        }
    }

    pub fn conductor(&self) -> u64 {
        self.m
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.c
    }

    /// Same value written over `Q(zeta_target)`; `target` must be a multiple of the conductor.
    pub fn lift(&self, target: u64) -> Cyclo {
        assert!(target.is_multiple_of(self.m), "lift target {target} not a multiple of {}", self.m);
        if target == self.m {
            return self.clone();
        }
        let step = (target / self.m) as usize;
        let mut b = vec![BigRational::zero(); target as usize];
        for (i, coef) in self.c.iter().enumerate() {
            b[i * step] = coef.clone();
        }
        Cyclo::from_buckets(target, &b)
    }

    fn aligned(&self, other: &Cyclo) -> (Cyclo, Cyclo) {
        if self.m == other.m {
            return (self.clone(), other.clone());
        }
        let m = self.m.lcm(&other.m);
        (self.lift(m), other.lift(m))
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.c.iter().all(|q| q.denom().is_one())
    }

    /// Least common denominator of the coefficients.
    pub fn denominator(&self) -> BigInt {
        self.c.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
    }

    pub fn add(&self, other: &Cyclo) -> Cyclo {
        let (a, b) = self.aligned(other);
        Cyclo {
            m: a.m,
            c: a.c.iter().zip(&b.c).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn sub(&self, other: &Cyclo) -> Cyclo {
        let (a, b) = self.aligned(other);
        Cyclo {
            m: a.m,
            c: a.c.iter().zip(&b.c).map(|(x, y)| x - y).collect(),
        }
    }

    pub fn neg(&self) -> Cyclo {
        Cyclo {
            m: self.m,
            c: self.c.iter().map(|x| -x).collect(),
        }
    }

    pub fn mul(&self, other: &Cyclo) -> Cyclo {
        if self.m == 1 {
            return other.scale(&self.c[0]);
        }
        if other.m == 1 {
            return self.scale(&other.c[0]);
        }
        let (a, b) = self.aligned(other);
        let m = a.m as usize;
        if a.is_integral() && b.is_integral() {
            let ai: Vec<&BigInt> = a.c.iter().map(|q| q.numer()).collect();
            let bi: Vec<&BigInt> = b.c.iter().map(|q| q.numer()).collect();
            let mut buckets = vec![BigInt::zero(); m];
            for (i, x) in ai.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (j, y) in bi.iter().enumerate() {
                    if !y.is_zero() {
                        buckets[(i + j) % m] += *x * *y;
                    }
                }
            }
            return Cyclo::from_int_buckets(a.m, &buckets);
        }
        let mut buckets = vec![BigRational::zero(); m];
        for (i, x) in a.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.c.iter().enumerate() {
                if !y.is_zero() {
                    buckets[(i + j) % m] += x * y;
                }
            }
        }
        Cyclo::from_buckets(a.m, &buckets)
    }

    pub fn scale(&self, q: &BigRational) -> Cyclo {
        Cyclo {
            m: self.m,
            c: self.c.iter().map(|x| x * q).collect(),
        }
    }

    pub fn scale_int(&self, k: i64) -> Cyclo {
        self.scale(&BigRational::from_integer(BigInt::from(k)))
    }

    /// Image under `zeta -> zeta^k`, `k` prime to the conductor.
    pub fn galois(&self, k: i64) -> Cyclo {
        let m = self.m as i64;
        let mut b = vec![BigRational::zero(); self.m as usize];
        for (i, coef) in self.c.iter().enumerate() {
            b[(i as i64 * k).rem_euclid(m) as usize] += coef;
        }
        Cyclo::from_buckets(self.m, &b)
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Cyclo {
        self.galois(-1)
    }

    /// Field norm down to `Q`.
    pub fn norm(&self) -> BigRational {
        let units = units_mod(self.m);
        let prod = units.iter().fold(Cyclo::one(), |acc, &k| acc.mul(&self.galois(k as i64)));
        prod.to_rational().expect("norm is rational")
    }

    pub fn inv(&self) -> Cyclo {
        assert!(!self.is_zero(), "inverse of zero");
        if self.m == 1 {
            return Cyclo::from_rational(self.c[0].recip());
        }
        let others = units_mod(self.m)
            .into_iter()
            .filter(|&k| k != 1)
            .fold(Cyclo::one(), |acc, k| acc.mul(&self.galois(k as i64)));
        let n = self.mul(&others).to_rational().expect("norm is rational");
        others.scale(&n.recip())
    }

    /// The rational value if the element lies in `Q`.
    pub fn to_rational(&self) -> Option<BigRational> {
        let n = self.normalized();
        (n.m == 1).then(|| n.c[0].clone())
    }

    pub fn to_i64(&self) -> Option<i64> {
        self.to_rational()
            .filter(|q| q.denom().is_one())
            .and_then(|q| q.numer().to_i64())
    }

    /// Same value over the smallest cyclotomic field containing it.
    pub fn normalized(&self) -> Cyclo {
        if self.m == 1 {
            return self.clone();
        }
        if self.is_zero() {
            return Cyclo::zero();
        }
        let units = units_mod(self.m);
        for d in divisors(self.m) {
            if d == self.m {
                break;
            }
            if d % 4 == 2 {
                continue;
            }
            let fixed = units
                .iter()
                .filter(|&&k| k % d == 1 % d && k != 1)
                .all(|&k| self.galois(k as i64) == *self);
            if !fixed {
                continue;
            }
            let phi_d = euler_phi(d) as usize;
            let basis: Vec<Vec<BigRational>> = (0..phi_d)
                .map(|i| Cyclo::zeta_pow(d, i as i64).lift(self.m).c)
                .collect();
            if let Some(coeffs) = solve_in_span(&RationalField, &basis, &self.c) {
                return Cyclo { m: d, c: coeffs };
            }
        }
        self.clone()
    }

    /// Coefficient vector over `Q(zeta_target)`; used as a sort key.
    pub fn key_at(&self, target: u64) -> Vec<BigRational> {
        self.lift(target).c
    }
}

fn units_mod(m: u64) -> Vec<u64> {
    (1..=m.max(1)).filter(|&k| k.gcd(&m) == 1).collect()
}

fn divisors(m: u64) -> Vec<u64> {
    (1..=m).filter(|d| m.is_multiple_of(*d)).collect()
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Cyclo) -> bool {
        if self.m == other.m {
            return self.c == other.c;
        }
        let (a, b) = self.aligned(other);
        a.c == b.c
    }
}

impl Eq for Cyclo {}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.normalized();
        let mut terms = Vec::new();
        for (i, q) in n.c.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let mag = q.abs();
            let sign = if q.is_negative() { "-" } else { "+" };
            let body = match (i, mag.is_one()) {
                (0, _) => mag.to_string(),
                (1, true) => format!("z{}", n.m),
                (_, true) => format!("z{}^{i}", n.m),
                (1, false) => format!("{mag}*z{}", n.m),
                (_, false) => format!("{mag}*z{}^{i}", n.m),
            };
            terms.push((sign, body));
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (sign, body)) in terms.iter().enumerate() {
            match (k, *sign) {
                (0, "-") => write!(f, "-{body}")?,
                (0, _) => write!(f, "{body}")?,
                (_, s) => write!(f, " {s} {body}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Cyclo {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let n = self.normalized();
        let mut st = s.serialize_struct("Cyclo", 2)?;
        st.serialize_field("conductor", &n.m)?;
        let coeffs: Vec<String> = n.c.iter().map(ToString::to_string).collect();
        st.serialize_field("coefficients", &coeffs)?;
        st.end()
    }
}

impl std::ops::Add for &Cyclo {
    type Output = Cyclo;
    fn add(self, rhs: &Cyclo) -> Cyclo {
        Cyclo::add(self, rhs)
    }
}

impl std::ops::Sub for &Cyclo {
    type Output = Cyclo;
    fn sub(self, rhs: &Cyclo) -> Cyclo {
        Cyclo::sub(self, rhs)
    }
}

impl std::ops::Mul for &Cyclo {
    type Output = Cyclo;
    fn mul(self, rhs: &Cyclo) -> Cyclo {
        Cyclo::mul(self, rhs)
    }
}

impl std::ops::Neg for &Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        Cyclo::neg(self)
    }
}

/// `Q` itself, for solving the subfield systems above.
pub struct RationalField;

impl FieldOps for RationalField {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
}

/// The union of all cyclotomic fields.
pub struct CycloField;

impl FieldOps for CycloField {
    type Elem = Cyclo;

    fn zero(&self) -> Cyclo {
        Cyclo::zero()
    }
    fn one(&self) -> Cyclo {
        Cyclo::one()
    }
    fn add(&self, a: &Cyclo, b: &Cyclo) -> Cyclo {
        a + b
    }
    fn sub(&self, a: &Cyclo, b: &Cyclo) -> Cyclo {
        a - b
    }
    fn mul(&self, a: &Cyclo, b: &Cyclo) -> Cyclo {
        a * b
    }
    fn neg(&self, a: &Cyclo) -> Cyclo {
        -a
    }
    fn inv(&self, a: &Cyclo) -> Cyclo {
        a.inv()
    }
    fn is_zero(&self, a: &Cyclo) -> bool {
        a.is_zero()
    }
}
