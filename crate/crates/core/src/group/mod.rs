//! Permutation groups backed by a base and strong generating set.

mod bsgs;
pub mod classes;
pub mod recipe;
pub mod search;
pub mod subgroups;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::Rng;

use crate::error::{Error, Result};
use crate::perm::Perm;
use bsgs::StabChain;
pub use classes::{ClassData, ConjClass};

/// Size caps shared by the engines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_degree: usize,
    /// Largest group order for which elements and classes are enumerated.
    pub max_enumerated_order: u128,
    pub max_table_classes: usize,
    pub max_p_group_order: u128,
    pub brute_force_order: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_degree: 1 << 14,
            max_enumerated_order: 1_000_000,
            max_table_classes: 300,
            max_p_group_order: 1 << 8,
            brute_force_order: 5000,
        }
    }
}

pub(crate) struct ElementIndex {
    pub elements: Vec<Perm>,
    pub index: HashMap<Perm, u32>,
}

#[derive(Clone, Default)]
struct Caches {
    elements: OnceLock<Arc<ElementIndex>>,
    classes: OnceLock<Arc<ClassData>>,
}

/// A finite permutation group. Immutable after construction; expensive derived
/// data (element list, classes) is computed once on first use.
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    chain: StabChain,
    order: u128,
    caches: Caches,
}

/// Subgroups are plain groups on the same point set as their parent.
pub type SubgroupHandle = PermGroup;

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Perm>) -> Result<Self> {
        Self::with_base_prefix(degree, generators, &[])
    }

    /// Builds the group with the given points forced to the front of the base.
    pub fn with_base_prefix(degree: usize, generators: Vec<Perm>, prefix: &[usize]) -> Result<Self> {
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::Parse(format!(
                    "generator {g} has degree {} but group degree is {degree}",
                    g.degree()
                )));
            }
        }
        let generators: Vec<Perm> = dedup_nontrivial(generators);
        let chain = StabChain::build(degree, &generators, prefix);
        let order = chain.order()?;
        Ok(PermGroup {
            degree,
            generators,
            chain,
            order,
            caches: Caches::default(),
        })
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup::new(degree, vec![]).expect("trivial group")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn order(&self) -> u128 {
        self.order
    }

    pub fn base(&self) -> Vec<usize> {
        self.chain.base()
    }

    pub fn strong_generators(&self) -> Vec<Perm> {
        self.chain.strong_generators()
    }

    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.chain.orbit_lengths()
    }

    pub fn identity(&self) -> Perm {
        Perm::identity(self.degree)
    }

    pub fn contains(&self, g: &Perm) -> bool {
        g.degree() == self.degree && self.chain.contains(g)
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree
            && other.order.is_multiple_of(self.order)
            && self.generators.iter().all(|g| other.contains(g))
    }

    pub fn same_group(&self, other: &PermGroup) -> bool {
        self.order == other.order && self.is_subgroup_of(other)
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .enumerate()
            .all(|(i, a)| self.generators[i + 1..].iter().all(|b| a.commutes_with(b)))
    }

    /// `true` if every generator of `self` commutes with every element of `other`.
    pub fn centralizes(&self, other: &PermGroup) -> bool {
        self.generators
            .iter()
            .all(|a| other.generators.iter().all(|b| a.commutes_with(b)))
    }

    pub fn is_normalized_by(&self, actors: &PermGroup) -> bool {
        actors
            .generators
            .iter()
            .all(|g| self.generators.iter().all(|h| self.contains(&h.conjugate_by(g))))
    }

    pub fn is_normal_in(&self, parent: &PermGroup) -> bool {
        self.is_subgroup_of(parent) && self.is_normalized_by(parent)
    }

    /// Group generated by `self` together with `extra`.
    pub fn join_elements(&self, extra: &[Perm]) -> Result<PermGroup> {
        let mut gens = self.generators.clone();
        for g in extra {
            if !self.contains(g) && !gens.contains(g) {
                gens.push(g.clone());
            }
        }
        if gens.len() == self.generators.len() {
            return Ok(self.clone());
        }
        PermGroup::new(self.degree, gens)
    }

    pub fn join(&self, other: &PermGroup) -> Result<PermGroup> {
        self.join_elements(&other.generators)
    }

    /// Smallest subgroup of `self` containing `seeds` and normalized by `self`.
    pub fn normal_closure(&self, seeds: &[Perm]) -> Result<PermGroup> {
        let mut closure = PermGroup::new(self.degree, seeds.to_vec())?;
        loop {
            let mut extra = Vec::new();
            for h in closure.generators() {
                for g in &self.generators {
                    let c = h.conjugate_by(g);
                    if !closure.contains(&c) && !extra.contains(&c) {
                        extra.push(c);
                    }
                }
            }
            if extra.is_empty() {
                return Ok(closure);
            }
            closure = closure.join_elements(&extra)?;
        }
    }

    pub fn derived_subgroup(&self) -> Result<PermGroup> {
        let mut comms = Vec::new();
        for a in &self.generators {
            for b in &self.generators {
                let c = a.commutator(b);
                if !c.is_identity() {
                    comms.push(c);
                }
            }
        }
        self.normal_closure(&comms)
    }

    /// Uniformly random element, drawn through the stabilizer chain.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Perm {
        self.chain.random_element(self.degree, rng)
    }

    pub fn p_part_of_order(&self, p: u64) -> u128 {
        let mut pp = 1u128;
        let mut n = self.order;
        while n.is_multiple_of(p as u128) {
            n /= p as u128;
            pp *= p as u128;
        }
        pp
    }

    pub fn is_p_group(&self, p: u64) -> bool {
        self.p_part_of_order(p) == self.order
    }

    pub(crate) fn element_index(&self, limits: &Limits) -> Result<Arc<ElementIndex>> {
        if self.order > limits.max_enumerated_order {
            return Err(Error::CapExceeded {
                what: "group order for enumeration",
                value: self.order,
                cap: limits.max_enumerated_order,
            });
        }
        Ok(self
            .caches
            .elements
            .get_or_init(|| {
                let elements = self.chain.enumerate(self.degree);
                let index = elements
                    .iter()
                    .enumerate()
                    .map(|(i, g)| (g.clone(), i as u32))
                    .collect();
                Arc::new(ElementIndex { elements, index })
            })
            .clone())
    }

    /// All elements in stabilizer-chain order.
    pub fn elements(&self) -> Result<Vec<Perm>> {
        Ok(self.element_index(&Limits::default())?.elements.clone())
    }

    /// Primary abelian invariants (prime powers, ascending) of an abelian group.
    pub fn abelian_invariants(&self) -> Result<Vec<u64>> {
        if !self.is_abelian() {
            return Err(Error::NotAbelian);
        }
        let idx = self.element_index(&Limits::default())?;
        let orders: Vec<u64> = idx.elements.iter().map(Perm::order).collect();
        let mut out = Vec::new();
        for p in prime_factors(self.order) {
            // s[k] = log_p #{x : x^(p^k) = 1}
            let mut s = vec![0u32];
            let mut pk = 1u64;
            loop {
                pk *= p;
                let count = orders.iter().filter(|&&o| pk.is_multiple_of(o) && is_power_of(o, p)).count() as u64;
                let e = log_p(count, p);
                let prev = *s.last().unwrap();
                s.push(e);
                if e == prev {
                    break;
                }
            }
            // number of cyclic factors of order >= p^k is s[k] - s[k-1]
            let ge: Vec<u32> = (1..s.len()).map(|k| s[k] - s[k - 1]).collect();
            for k in 1..=ge.len() {
                let at_least = ge[k - 1];
                let more = if k < ge.len() { ge[k] } else { 0 };
                for _ in 0..(at_least - more) {
                    out.push(p.pow(k as u32));
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Conjugacy classes (computed once).
    pub fn class_data(&self, limits: &Limits) -> Result<Arc<ClassData>> {
        if let Some(c) = self.caches.classes.get() {
            return Ok(c.clone());
        }
        let data = Arc::new(ClassData::compute(self, limits)?);
        Ok(self.caches.classes.get_or_init(|| data).clone())
    }

    pub fn conjugacy_classes(&self) -> Result<Vec<ConjClass>> {
        Ok(self.class_data(&Limits::default())?.classes.clone())
    }

    pub fn exponent(&self, limits: &Limits) -> Result<u64> {
        let cd = self.class_data(limits)?;
        Ok(cd
            .classes
            .iter()
            .fold(1u64, |acc, c| num_integer::lcm(acc, c.element_order)))
    }
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PermGroup(order {}, degree {}, gens [", self.order, self.degree)?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "])")
    }
}

fn dedup_nontrivial(gens: Vec<Perm>) -> Vec<Perm> {
    let mut out: Vec<Perm> = Vec::with_capacity(gens.len());
    for g in gens {
        if !g.is_identity() && !out.contains(&g) {
            out.push(g);
        }
    }
    out
}

pub(crate) fn prime_factors(mut n: u128) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d as u64);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n as u64);
    }
    out
}

pub(crate) fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

pub(crate) fn is_power_of(mut n: u64, p: u64) -> bool {
    while n > 1 && n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

pub(crate) fn valuation(mut n: u128, p: u64) -> u32 {
    let mut v = 0;
    while n > 0 && n.is_multiple_of(p as u128) {
        n /= p as u128;
        v += 1;
    }
    v
}

fn log_p(mut n: u64, p: u64) -> u32 {
    let mut e = 0;
    while n > 1 {
        n /= p;
        e += 1;
    }
    e
}
