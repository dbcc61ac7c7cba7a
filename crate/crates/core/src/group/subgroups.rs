//! Subgroup enumeration: the full lattice of a `p`-subgroup with its
//! `G`-conjugacy classes, and brute-force subgroup lists for small groups.

use std::collections::{HashMap, HashSet};

use super::{Limits, PermGroup};
use crate::error::{Error, Result};
use crate::perm::Perm;

/// Fixed-width bitset over element indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Bits(Vec<u64>);

impl Bits {
    pub fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    pub fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_subset(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &bits)| {
            (0..64).filter(move |b| bits >> b & 1 == 1).map(move |b| w * 64 + b)
        })
    }
}

/// Elements of a group with a membership index, sorted so the identity is first.
struct Table {
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
}

impl Table {
    fn new(g: &PermGroup, limits: &Limits) -> Result<Self> {
        let mut elements = g.element_index(limits)?.elements.clone();
        elements.sort_unstable();
        let index = elements.iter().enumerate().map(|(i, x)| (x.clone(), i)).collect();
        Ok(Table { elements, index })
    }

    fn len(&self) -> usize {
        self.elements.len()
    }

    /// Subgroup generated by the given element indices.
    fn closure(&self, gens: &[usize]) -> Bits {
        let mut bits = Bits::new(self.len());
        bits.set(0);
        let mut queue = vec![0usize];
        let mut head = 0;
        while head < queue.len() {
            let y = &self.elements[queue[head]];
            head += 1;
            for &s in gens {
                let z = self.index[&(y * &self.elements[s])];
                if !bits.get(z) {
                    bits.set(z);
                    queue.push(z);
                }
            }
        }
        bits
    }

    /// Small generating set for a subgroup given as bits.
    fn generators(&self, bits: &Bits) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = Bits::new(self.len());
        span.set(0);
        for i in bits.iter() {
            if !span.get(i) {
                gens.push(i);
                span = self.closure(&gens);
                if span == *bits {
                    break;
                }
            }
        }
        gens
    }

    fn group(&self, degree: usize, bits: &Bits) -> Result<PermGroup> {
        let gens = self.generators(bits);
        PermGroup::new(degree, gens.into_iter().map(|i| self.elements[i].clone()).collect())
    }

    fn bits_of(&self, h: &PermGroup, limits: &Limits) -> Option<Bits> {
        let mut bits = Bits::new(self.len());
        for x in &h.element_index(limits).ok()?.elements {
            bits.set(*self.index.get(x)?);
        }
        Some(bits)
    }
}

/// A `G`-conjugacy class of subgroups of `P`.
#[derive(Debug, Clone)]
pub struct SubgroupClass {
    /// Fully normalized member (largest `|N_P|`, ties by least bitset).
    pub representative: usize,
    /// All subgroups of `P` in the class.
    pub members: Vec<usize>,
    pub order: u128,
    pub normalizer_in_p_order: u128,
}

/// All subgroups of a `p`-subgroup `P` of `G`, grouped by `G`-conjugacy.
pub struct PSubgroupLattice {
    ambient: PermGroup,
    p_group: PermGroup,
    table: Table,
    inverse: Vec<usize>,
    subgroups: Vec<Bits>,
    lookup: HashMap<Bits, usize>,
    pub classes: Vec<SubgroupClass>,
    class_of: Vec<usize>,
    limits: Limits,
}

impl PSubgroupLattice {
    pub fn new(g: &PermGroup, p_group: &PermGroup, p: u64, limits: &Limits) -> Result<Self> {
        if !p_group.is_p_group(p) {
            return Err(Error::InternalInconsistency("lattice requested for a non-p-group".into()));
        }
        if p_group.order() > limits.max_p_group_order {
            return Err(Error::CapExceeded {
                what: "p-group order for subgroup lattice",
                value: p_group.order(),
                cap: limits.max_p_group_order,
            });
        }
        let table = Table::new(p_group, limits)?;
        let n = table.len();
        let inverse: Vec<usize> = table.elements.iter().map(|x| table.index[&x.inverse()]).collect();
        let powp: Vec<usize> = table.elements.iter().map(|x| table.index[&x.pow(p)]).collect();

        let mut trivial = Bits::new(n);
        trivial.set(0);
        let mut subgroups = vec![trivial.clone()];
        let mut seen: HashSet<Bits> = HashSet::from([trivial]);
        let mut head = 0;
        while head < subgroups.len() {
            let h = subgroups[head].clone();
            head += 1;
            let members: Vec<usize> = h.iter().collect();
            for x in 0..n {
                if h.get(x) || !h.get(powp[x]) {
                    continue;
                }
                let xe = &table.elements[x];
                let xi = &table.elements[inverse[x]];
                let normalizes = members
                    .iter()
                    .all(|&m| h.get(table.index[&(&(xi * &table.elements[m]) * xe)]));
                if !normalizes {
                    continue;
                }
                // <H, x> = H u Hx u ... u Hx^(p-1)
                let mut next = h.clone();
                let mut cur = members.clone();
                for _ in 1..p {
                    cur = cur.iter().map(|&m| table.index[&(&table.elements[m] * xe)]).collect();
                    for &c in &cur {
                        next.set(c);
                    }
                }
                if seen.insert(next.clone()) {
                    subgroups.push(next);
                }
            }
        }
        subgroups.sort_by(|a, b| (a.count(), a).cmp(&(b.count(), b)));
        let lookup: HashMap<Bits, usize> =
            subgroups.iter().enumerate().map(|(i, b)| (b.clone(), i)).collect();

        let mut lat = PSubgroupLattice {
            ambient: g.clone(),
            p_group: p_group.clone(),
            table,
            inverse,
            subgroups,
            lookup,
            classes: Vec::new(),
            class_of: Vec::new(),
            limits: *limits,
        };
        lat.fuse()?;
        Ok(lat)
    }

    fn fuse(&mut self) -> Result<()> {
        let ns = self.subgroups.len();
        let mut class_of = vec![usize::MAX; ns];
        let mut raw: Vec<Vec<usize>> = Vec::new();
        for s in 0..ns {
            if class_of[s] != usize::MAX {
                continue;
            }
            let cid = raw.len();
            let start: Vec<Perm> = self.subgroups[s].iter().map(|i| self.table.elements[i].clone()).collect();
            let mut seen: HashSet<Vec<Perm>> = HashSet::from([start.clone()]);
            let mut queue = vec![start];
            let mut head = 0;
            let mut members = Vec::new();
            while head < queue.len() {
                let key = queue[head].clone();
                head += 1;
                if let Some(b) = self.bits_of_elements(&key) {
                    let idx = self.lookup[&b];
                    if class_of[idx] == usize::MAX {
                        class_of[idx] = cid;
                        members.push(idx);
                    }
                }
                for gen in self.ambient.generators() {
                    let mut next: Vec<Perm> = key.iter().map(|x| x.conjugate_by(gen)).collect();
                    next.sort_unstable();
                    if seen.insert(next.clone()) {
                        queue.push(next);
                    }
                }
            }
            members.sort_unstable();
            raw.push(members);
        }
        let mut classes: Vec<SubgroupClass> = raw
            .into_iter()
            .map(|members| {
                let (rep, norm) = members
                    .iter()
                    .map(|&m| (m, self.normalizer_in_p_order(m)))
                    .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
                    .unwrap();
                SubgroupClass {
                    representative: rep,
                    order: self.subgroups[rep].count() as u128,
                    members,
                    normalizer_in_p_order: norm,
                }
            })
            .collect();
        classes.sort_by_key(|c| (c.order, c.representative));
        for (ci, c) in classes.iter().enumerate() {
            for &m in &c.members {
                class_of[m] = ci;
            }
        }
        self.classes = classes;
        self.class_of = class_of;
        Ok(())
    }

    fn bits_of_elements(&self, elems: &[Perm]) -> Option<Bits> {
        let mut b = Bits::new(self.table.len());
        for x in elems {
            b.set(*self.table.index.get(x)?);
        }
        Some(b)
    }

    fn normalizer_in_p_order(&self, s: usize) -> u128 {
        let h = &self.subgroups[s];
        let members: Vec<usize> = h.iter().collect();
        (0..self.table.len())
            .filter(|&x| {
                let xe = &self.table.elements[x];
                let xi = &self.table.elements[self.inverse[x]];
                members
                    .iter()
                    .all(|&m| h.get(self.table.index[&(&(xi * &self.table.elements[m]) * xe)]))
            })
            .count() as u128
    }

    pub fn p_group(&self) -> &PermGroup {
        &self.p_group
    }

    pub fn num_subgroups(&self) -> usize {
        self.subgroups.len()
    }

    pub fn subgroup_order(&self, s: usize) -> u128 {
        self.subgroups[s].count() as u128
    }

    pub fn subgroup(&self, s: usize) -> Result<PermGroup> {
        self.table.group(self.p_group.degree(), &self.subgroups[s])
    }

    pub fn class_of_subgroup(&self, s: usize) -> usize {
        self.class_of[s]
    }

    /// Representative subgroup of class `c`.
    pub fn class_representative(&self, c: usize) -> Result<PermGroup> {
        self.subgroup(self.classes[c].representative)
    }

    /// Index of the class containing `P` itself.
    pub fn top_class(&self) -> usize {
        self.class_of[self.subgroups.len() - 1]
    }

    pub fn trivial_class(&self) -> usize {
        self.class_of[0]
    }

    pub fn contains_subgroup(&self, a: usize, b: usize) -> bool {
        self.subgroups[a].is_subset(&self.subgroups[b])
    }

    /// Subgroup index of `h` if it lies in `P`.
    pub fn index_of(&self, h: &PermGroup) -> Option<usize> {
        let b = self.table.bits_of(h, &self.limits)?;
        self.lookup.get(&b).copied()
    }

    /// `G`-class of an arbitrary `p`-subgroup of `G`.
    pub fn class_of_group(&self, h: &PermGroup) -> Result<usize> {
        if let Some(i) = self.index_of(h) {
            return Ok(self.class_of[i]);
        }
        let mut start = h.elements()?;
        start.sort_unstable();
        let mut seen: HashSet<Vec<Perm>> = HashSet::from([start.clone()]);
        let mut queue = vec![start];
        let mut head = 0;
        while head < queue.len() {
            let key = queue[head].clone();
            head += 1;
            if let Some(b) = self.bits_of_elements(&key) {
                if let Some(&i) = self.lookup.get(&b) {
                    return Ok(self.class_of[i]);
                }
            }
            for gen in self.ambient.generators() {
                let mut next: Vec<Perm> = key.iter().map(|x| x.conjugate_by(gen)).collect();
                next.sort_unstable();
                if seen.insert(next.clone()) {
                    queue.push(next);
                }
            }
        }
        Err(Error::InternalInconsistency(
            "p-subgroup has no conjugate inside the Sylow subgroup".into(),
        ))
    }

    /// `A <=_G B`: some member of class `a` lies in the representative of `b`.
    pub fn class_le(&self, a: usize, b: usize) -> bool {
        let rep = &self.subgroups[self.classes[b].representative];
        self.classes[a].members.iter().any(|&m| self.subgroups[m].is_subset(rep))
    }

    pub fn class_lt(&self, a: usize, b: usize) -> bool {
        a != b && self.class_le(a, b)
    }

    /// Class representatives as groups, in class order.
    pub fn representatives(&self) -> Result<Vec<PermGroup>> {
        (0..self.classes.len()).map(|c| self.class_representative(c)).collect()
    }
}

/// Every subgroup of a small group, ordered by (order, element bitset).
pub fn all_subgroups(g: &PermGroup, limits: &Limits) -> Result<Vec<PermGroup>> {
    if g.order() > limits.brute_force_order {
        return Err(Error::CapExceeded {
            what: "group order for subgroup enumeration",
            value: g.order(),
            cap: limits.brute_force_order,
        });
    }
    let table = Table::new(g, limits)?;
    let n = table.len();
    let mut cyclic: Vec<(Bits, usize)> = Vec::new();
    let mut cyc_seen = HashSet::new();
    for x in 1..n {
        let b = table.closure(&[x]);
        if cyc_seen.insert(b.clone()) {
            cyclic.push((b, x));
        }
    }
    let mut trivial = Bits::new(n);
    trivial.set(0);
    let mut found: Vec<(Bits, Vec<usize>)> = vec![(trivial.clone(), vec![])];
    let mut seen: HashSet<Bits> = HashSet::from([trivial]);
    let mut head = 0;
    while head < found.len() {
        let (bits, gens) = found[head].clone();
        head += 1;
        for (cb, x) in &cyclic {
            if cb.is_subset(&bits) {
                continue;
            }
            let mut g2 = gens.clone();
            g2.push(*x);
            let nb = table.closure(&g2);
            if seen.insert(nb.clone()) {
                found.push((nb, g2));
            }
        }
    }
    found.sort_by(|a, b| (a.0.count(), &a.0).cmp(&(b.0.count(), &b.0)));
    found
        .into_iter()
        .map(|(_, gens)| PermGroup::new(g.degree(), gens.into_iter().map(|i| table.elements[i].clone()).collect()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::search::sylow_subgroup;

    fn p(deg: usize, s: &str) -> Perm {
        Perm::parse(deg, s).unwrap()
    }

    fn s4() -> PermGroup {
        PermGroup::new(4, vec![p(4, "(1,2,3,4)"), p(4, "(1,2)")]).unwrap()
    }

    #[test]
    fn d8_has_ten_subgroups() {
        let g = s4();
        let d8 = sylow_subgroup(&g, 2, 1).unwrap();
        let lat = PSubgroupLattice::new(&d8, &d8, 2, &Limits::default()).unwrap();
        assert_eq!(lat.num_subgroups(), 10);
        assert_eq!(lat.classes.len(), 8);
    }

    #[test]
    fn s4_fuses_subgroups_of_d8() {
        let g = s4();
        let d8 = sylow_subgroup(&g, 2, 1).unwrap();
        let lat = PSubgroupLattice::new(&g, &d8, 2, &Limits::default()).unwrap();
        // 1, <(12)>, <(12)(34)>, two Klein fours, Z4, D8
        assert_eq!(lat.classes.len(), 7);
        let total: usize = lat.classes.iter().map(|c| c.members.len()).sum();
        assert_eq!(total, 10);
        let top = lat.top_class();
        assert_eq!(lat.classes[top].order, 8);
        for c in 0..lat.classes.len() {
            assert!(lat.class_le(lat.trivial_class(), c));
            assert!(lat.class_le(c, top));
        }
        let t = PermGroup::new(4, vec![p(4, "(2,4)")]).unwrap();
        let ct = lat.class_of_group(&t).unwrap();
        assert_eq!(lat.classes[ct].order, 2);
    }

    #[test]
    fn subgroups_of_s3() {
        let s3 = PermGroup::new(3, vec![p(3, "(1,2,3)"), p(3, "(1,2)")]).unwrap();
        let subs = all_subgroups(&s3, &Limits::default()).unwrap();
        let orders: Vec<u128> = subs.iter().map(PermGroup::order).collect();
        assert_eq!(orders, vec![1, 2, 2, 2, 3, 6]);
    }

    #[test]
    fn s4_has_thirty_subgroups() {
        assert_eq!(all_subgroups(&s4(), &Limits::default()).unwrap().len(), 30);
    }
}
