//! Permutations of `0..degree`.
//!
//! Products follow the right-action convention: `a * b` applies `a` first and
//! then `b`, so `i^(ab) = (i^a)^b`. Text I/O uses 1-based disjoint-cycle
//! notation such as `(1,2,3)(4,5)`; the identity prints as `()`.

use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from its image list, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n || seen[i] {
                return Err(Error::Parse(format!("image list {images:?} is not a bijection")));
            }
            seen[i] = true;
        }
        Ok(Perm { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        Perm { images }
    }

    /// Builds a permutation from 0-based cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (k, &pt) in cycle.iter().enumerate() {
                if pt >= degree {
                    return Err(Error::Parse(format!("point {} out of range for degree {degree}", pt + 1)));
                }
                if touched[pt] {
                    return Err(Error::Parse(format!("point {} repeated in cycle notation", pt + 1)));
                }
                touched[pt] = true;
                images[pt] = cycle[(k + 1) % cycle.len()] as u32;
            }
        }
        Ok(Perm { images })
    }

    /// Parses 1-based disjoint-cycle notation.
    pub fn parse(degree: usize, text: &str) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut cycles = Vec::new();
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("expected '(' in {text:?}")))?;
            let close = body
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unclosed cycle in {text:?}")))?;
            let inner = &body[..close];
            if !inner.is_empty() {
                let cycle = inner
                    .split(',')
                    .map(|s| match s.parse::<usize>() {
                        Ok(v) if v >= 1 => Ok(v - 1),
                        _ => Err(Error::Parse(format!("bad point {s:?} in {text:?}"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                cycles.push(cycle);
            }
            rest = &body[close + 1..];
        }
        Perm::from_cycles(degree, &cycles)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn image(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i as u32 == v)
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v as usize] = i as u32;
        }
        Perm { images: inv }
    }

    pub fn pow(&self, mut e: u64) -> Perm {
        let mut base = self.clone();
        let mut acc = Perm::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `self^g = g^-1 * self * g`.
    pub fn conjugate_by(&self, g: &Perm) -> Perm {
        // i^(g^-1 x g): the image of g(i) is g(x(i)).
        let mut images = vec![0u32; self.images.len()];
        for (i, &xi) in self.images.iter().enumerate() {
            images[g.images[i] as usize] = g.images[xi as usize];
        }
        Perm { images }
    }

    /// `self * other * self^-1 * other^-1`, the commutator as written left to right.
    pub fn commutator(&self, other: &Perm) -> Perm {
        &(&(self * other) * &self.inverse()) * &other.inverse()
    }

    pub fn commutes_with(&self, other: &Perm) -> bool {
        self.images
            .iter()
            .zip(other.images.iter())
            .all(|(&a, &b)| other.images[a as usize] == self.images[b as usize])
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.image(start) == start {
                seen[start] = true;
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut cur = self.image(start);
            while cur != start {
                seen[cur] = true;
                cycle.push(cur);
                cur = self.image(cur);
            }
            out.push(cycle);
        }
        out
    }

    /// Sorted multiset of cycle lengths including fixed points.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut lens: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        let moved: usize = lens.iter().sum();
        lens.extend(std::iter::repeat_n(1, self.degree() - moved));
        lens.sort_unstable();
        lens
    }

    pub fn order(&self) -> u64 {
        self.cycles()
            .iter()
            .fold(1u64, |acc, c| num_integer::lcm(acc, c.len() as u64))
    }

    /// Fixed points of no interest; returns the points moved.
    pub fn support(&self) -> Vec<usize> {
        (0..self.degree()).filter(|&i| self.image(i) != i).collect()
    }

    /// Splits into commuting parts whose orders are a power of `p` and prime to `p`.
    pub fn p_parts(&self, p: u64) -> (Perm, Perm) {
        let n = self.order();
        let mut pp = 1u64;
        let mut rest = n;
        while rest.is_multiple_of(p) {
            rest /= p;
            pp *= p;
        }
        if pp == 1 {
            return (Perm::identity(self.degree()), self.clone());
        }
        if rest == 1 {
            return (self.clone(), Perm::identity(self.degree()));
        }
        // x = x^(a*rest) * x^(b*pp) with a*rest + b*pp = 1.
        let (a, _) = bezout(rest as i128, pp as i128);
        let e_p = (a * rest as i128).rem_euclid(n as i128) as u64;
        let e_q = (1 - a * rest as i128).rem_euclid(n as i128) as u64;
        (self.pow(e_p), self.pow(e_q))
    }

    /// Places `self` on points `offset..offset+degree` of a larger permutation.
    pub fn shifted(&self, offset: usize, total: usize) -> Perm {
        let mut images: Vec<u32> = (0..total as u32).collect();
        for (i, &v) in self.images.iter().enumerate() {
            images[offset + i] = v + offset as u32;
        }
        Perm { images }
    }

    pub fn to_cycle_string(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".to_string();
        }
        cycles
            .iter()
            .map(|c| {
                let body: Vec<String> = c.iter().map(|p| (p + 1).to_string()).collect();
                format!("({})", body.join(","))
            })
            .collect()
    }
}

fn bezout(a: i128, b: i128) -> (i128, i128) {
    if b == 0 {
        (1, 0)
    } else {
        let (x, y) = bezout(b, a.rem_euclid(b));
        (y, x - (a.div_euclid(b)) * y)
    }
}

impl Mul for &Perm {
    type Output = Perm;

    fn mul(self, rhs: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), rhs.degree());
        Perm {
            images: self.images.iter().map(|&i| rhs.images[i as usize]).collect(),
        }
    }
}

impl Mul for Perm {
    type Output = Perm;

    fn mul(self, rhs: Perm) -> Perm {
        &self * &rhs
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_cycle_string())
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_cycle_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_round_trip() {
        let p = Perm::parse(5, "(1,2,3)(4,5)").unwrap();
        assert_eq!(p.to_cycle_string(), "(1,2,3)(4,5)");
        assert_eq!(p.image(0), 1);
        assert_eq!(Perm::parse(3, "()").unwrap(), Perm::identity(3));
    }

    #[test]
    fn parse_rejects_repeated_point() {
        assert!(Perm::parse(4, "(1,2)(2,3)").is_err());
        assert!(Perm::parse(2, "(1,3)").is_err());
    }

    #[test]
    fn product_applies_left_factor_first() {
        let a = Perm::parse(3, "(1,2)").unwrap();
        let b = Perm::parse(3, "(2,3)").unwrap();
        // 1 -> 2 -> 3
        assert_eq!((&a * &b).image(0), 2);
    }

    #[test]
    fn conjugation_matches_definition() {
        let x = Perm::parse(4, "(1,2,3)").unwrap();
        let g = Perm::parse(4, "(1,4)(2,3)").unwrap();
        let direct = &(&g.inverse() * &x) * &g;
        assert_eq!(x.conjugate_by(&g), direct);
        assert!(!x.commutes_with(&g));
    }

    #[test]
    fn p_parts_multiply_back() {
        let x = Perm::parse(10, "(1,2,3,4,5,6)(7,8,9,10)").unwrap();
        let (a, b) = x.p_parts(2);
        assert_eq!(&a * &b, x);
        assert_eq!(a.order(), 4);
        assert_eq!(b.order(), 3);
        assert!(a.commutes_with(&b));
    }
}
