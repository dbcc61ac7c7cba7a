//! The fusion system `F_P(G)` of the principal block.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::search::{
    centralizer, conjugate_tuples, intersection, normalizer, o_p_residual, sylow_subgroup, Quotient,
};
use crate::group::subgroups::{all_subgroups, PSubgroupLattice};
use crate::group::{prime_factors, Limits, PermGroup, SubgroupHandle};
use crate::perm::Perm;

pub struct FusionSystem {
    group: PermGroup,
    p: u64,
    sylow: PermGroup,
    lattice: Option<PSubgroupLattice>,
    limits: Limits,
}

impl FusionSystem {
    pub fn new(g: &PermGroup, p: u64, seed: u64) -> Result<Self> {
        Self::with_limits(g, p, seed, &Limits::default())
    }

    pub fn with_limits(g: &PermGroup, p: u64, seed: u64, limits: &Limits) -> Result<Self> {
        let sylow = sylow_subgroup(g, p, seed)?;
        if sylow.order() != g.p_part_of_order(p) {
            return Err(Error::InternalInconsistency("Sylow subgroup has the wrong order".into()));
        }
        let lattice = match PSubgroupLattice::new(g, &sylow, p, limits) {
            Ok(l) => Some(l),
            Err(Error::CapExceeded { .. }) => None,
            Err(e) => return Err(e),
        };
        Ok(FusionSystem {
            group: g.clone(),
            p,
            sylow,
            lattice,
            limits: *limits,
        })
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn sylow(&self) -> &PermGroup {
        &self.sylow
    }

    pub fn lattice(&self) -> Result<&PSubgroupLattice> {
        self.lattice.as_ref().ok_or(Error::CapExceeded {
            what: "p-group order for subgroup lattice",
            value: self.sylow.order(),
            cap: self.limits.max_p_group_order,
        })
    }
}

/// An element of `G` conjugating the tuple `a` onto `b` entrywise.
pub fn are_f_conjugate(fs: &FusionSystem, a: &[Perm], b: &[Perm]) -> Result<Option<Perm>> {
    if a.iter().chain(b).any(|x| !fs.sylow.contains(x)) {
        return Err(Error::NotInGroup);
    }
    Ok(conjugate_tuples(&fs.group, a, b))
}

#[derive(Debug, Clone, Serialize)]
pub struct HyperfocalReport {
    #[serde(skip)]
    pub subgroup: SubgroupHandle,
    pub order: u128,
    pub abelian_invariants: Option<Vec<u64>>,
    /// Order found by the commutator method; `None` when the lattice was capped.
    pub method_commutator: Option<u128>,
    pub method_residual: u128,
    pub agree: bool,
}

pub fn hyperfocal_subgroup(fs: &FusionSystem) -> Result<HyperfocalReport> {
    let residual = intersection(&fs.sylow, &o_p_residual(&fs.group, fs.p)?)?;
    let commutator = match fs.lattice() {
        Ok(lat) => Some(hyperfocal_by_commutators(fs, lat)?),
        Err(Error::CapExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    if let Some(c) = &commutator {
        if !c.same_group(&residual) {
            return Err(Error::MethodDisagreement {
                commutator: c.order(),
                residual: residual.order(),
            });
        }
    }
    if !residual.is_normal_in(&fs.sylow) {
        return Err(Error::InternalInconsistency("hyperfocal subgroup is not normal in P".into()));
    }
    Ok(HyperfocalReport {
        order: residual.order(),
        abelian_invariants: residual.abelian_invariants().ok(),
        method_commutator: commutator.as_ref().map(PermGroup::order),
        method_residual: residual.order(),
        agree: commutator.is_some(),
        subgroup: residual,
    })
}

/// `<[U, O^p(N_G(U))] : U <= P>`, with `U` over lattice class representatives and the
/// result closed under `G`-conjugation inside `P`.
fn hyperfocal_by_commutators(fs: &FusionSystem, lat: &PSubgroupLattice) -> Result<PermGroup> {
    let g = &fs.group;
    let cd = g.class_data(&fs.limits)?;
    let mut fused: BTreeSet<usize> = BTreeSet::new();
    for u in lat.representatives()? {
        if u.is_trivial() {
            continue;
        }
        let n = normalizer(g, &u)?;
        let x = o_p_residual(&n, fs.p)?;
        let seeds: Vec<Perm> = u
            .generators()
            .iter()
            .flat_map(|a| x.generators().iter().map(move |b| a.commutator(b)))
            .filter(|c| !c.is_identity())
            .collect();
        if seeds.is_empty() {
            continue;
        }
        let piece = n.normal_closure(&seeds)?;
        for y in piece.elements()? {
            fused.insert(cd.class_of(&y)?);
        }
    }
    let gens: Vec<Perm> = fs
        .sylow
        .elements()?
        .into_iter()
        .filter(|y| !y.is_identity() && cd.class_of(y).is_ok_and(|k| fused.contains(&k)))
        .collect();
    PermGroup::new(g.degree(), gens)
}

/// Elements of order dividing `p` in an abelian `p`-group.
pub fn omega1(q: &SubgroupHandle, p: u64) -> Result<SubgroupHandle> {
    if !q.is_abelian() {
        return Err(Error::NotAbelian);
    }
    let gens: Vec<Perm> = q.elements()?.into_iter().filter(|x| x.pow(p).is_identity()).collect();
    PermGroup::new(q.degree(), gens)
}

#[derive(Debug, Clone, Serialize)]
pub struct AutomizerInfo {
    pub order: u128,
    pub is_s3: bool,
    pub abelian_invariants: Option<Vec<u64>>,
    /// `(prime, order of a Sylow subgroup)` for each prime dividing the order.
    pub sylow_orders: Vec<(u64, u128)>,
}

impl AutomizerInfo {
    fn describe(a: &PermGroup) -> Self {
        let order = a.order();
        AutomizerInfo {
            order,
            is_s3: order == 6 && !a.is_abelian(),
            abelian_invariants: a.abelian_invariants().ok(),
            sylow_orders: prime_factors(order).into_iter().map(|q| (q, a.p_part_of_order(q))).collect(),
        }
    }

    pub fn odd_part(&self) -> u128 {
        let mut o = self.order;
        while o.is_multiple_of(2) {
            o /= 2;
        }
        o
    }
}

/// `N_G(U) / U C_G(U)`.
fn outer_automizer(g: &PermGroup, u: &PermGroup) -> Result<Quotient> {
    let n = normalizer(g, u)?;
    let m = u.join(&centralizer(g, u)?)?;
    Quotient::new(&n, &m)
}

pub fn automizer(fs: &FusionSystem, u: &SubgroupHandle) -> Result<AutomizerInfo> {
    Ok(AutomizerInfo::describe(&outer_automizer(&fs.group, u)?.group))
}

/// `|N_H(U) / C_H(U)|`.
fn full_automizer_order(h: &PermGroup, u: &PermGroup) -> Result<u128> {
    Ok(normalizer(h, u)?.order() / centralizer(h, u)?.order())
}

/// A proper subgroup `M` of `a` with `p | |M|` and `p ∤ |M ∩ M^x|` for every `x` outside `M`.
fn strongly_p_embedded(a: &PermGroup, p: u64, limits: &Limits) -> Result<Option<PermGroup>> {
    if !a.order().is_multiple_of(p as u128) {
        return Ok(None);
    }
    let elems = a.elements()?;
    for m in all_subgroups(a, limits)? {
        if m.order() == a.order() || m.order() % p as u128 != 0 {
            continue;
        }
        let mut ok = true;
        for x in elems.iter().filter(|x| !m.contains(x)) {
            let gens = m.generators().iter().map(|y| y.conjugate_by(x)).collect();
            let mx = PermGroup::new(a.degree(), gens)?;
            if intersection(&m, &mx)?.order() % p as u128 == 0 {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Serialize)]
pub struct EssentialClass {
    #[serde(skip)]
    pub subgroup: SubgroupHandle,
    pub lattice_class: usize,
    pub order: u128,
    pub abelian_invariants: Option<Vec<u64>>,
    pub automizer: AutomizerInfo,
    /// Order of the strongly `p`-embedded subgroup found in the automizer.
    pub witness_order: u128,
}

pub fn essential_subgroup_classes(fs: &FusionSystem) -> Result<Vec<EssentialClass>> {
    let lat = fs.lattice()?;
    let g = &fs.group;
    let mut out = Vec::new();
    for c in 0..lat.classes.len() {
        if c == lat.top_class() {
            continue;
        }
        let s = lat.class_representative(c)?;
        let z = centralizer(&s, &s)?;
        let cg = centralizer(g, &s)?;
        if cg.p_part_of_order(fs.p) != z.order() || !centralizer(&fs.sylow, &s)?.same_group(&z) {
            continue;
        }
        let q = outer_automizer(g, &s)?;
        if let Some(w) = strongly_p_embedded(&q.group, fs.p, &fs.limits)? {
            out.push(EssentialClass {
                lattice_class: c,
                order: s.order(),
                abelian_invariants: s.abelian_invariants().ok(),
                automizer: AutomizerInfo::describe(&q.group),
                witness_order: w.order(),
                subgroup: s,
            });
        }
    }
    Ok(out)
}

/// Whether `F_P(G) = F_P(H)`, checked on the automizers of `P` and of the essential subgroups.
pub fn is_controlled_by_normalizer(fs: &FusionSystem, h: &SubgroupHandle) -> Result<bool> {
    if !fs.sylow.is_subgroup_of(h) || !h.is_subgroup_of(&fs.group) {
        return Ok(false);
    }
    let mut tests = vec![fs.sylow.clone()];
    tests.extend(essential_subgroup_classes(fs)?.into_iter().map(|e| e.subgroup));
    for u in &tests {
        if full_automizer_order(&fs.group, u)? != full_automizer_order(h, u)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone)]
pub struct OddComplement {
    /// Preimage in `N_G(U)` of a Hall `p'`-subgroup of `N_G(U)/C_G(U)`.
    pub e: SubgroupHandle,
    /// `C_U(E)`.
    pub fixed: SubgroupHandle,
}

pub fn odd_complement_fixed_points(fs: &FusionSystem, u: &SubgroupHandle) -> Result<OddComplement> {
    let p = fs.p as u128;
    let g = &fs.group;
    let n = normalizer(g, u)?;
    let c = centralizer(g, u)?;
    let q = Quotient::new(&n, &c)?;
    let a = &q.group;
    let mut target = a.order();
    while target % p == 0 {
        target /= p;
    }
    let hall = hall_p_prime(a, fs.p, target, &fs.limits)?.ok_or_else(|| {
        Error::NoComplementFound(format!(
            "no subgroup of order {target} in an automizer of order {}",
            a.order()
        ))
    })?;
    let lifts: Vec<Perm> = hall.generators().iter().map(|y| q.lift(y)).collect();
    let e = c.join_elements(&lifts)?;
    let fixed = centralizer(u, &e)?;
    Ok(OddComplement { e, fixed })
}

/// Greedy join of `p'`-elements, then exhaustive search.
fn hall_p_prime(a: &PermGroup, p: u64, target: u128, limits: &Limits) -> Result<Option<PermGroup>> {
    let mut h = PermGroup::trivial(a.degree());
    if target == 1 {
        return Ok(Some(h));
    }
    let mut cands: Vec<Perm> = a.elements()?.into_iter().filter(|x| x.order() % p != 0).collect();
    cands.sort_by_key(|x| std::cmp::Reverse(x.order()));
    for x in &cands {
        if h.contains(x) {
            continue;
        }
        let next = h.join_elements(std::slice::from_ref(x))?;
        if next.order() % p as u128 != 0 {
            continue;
        }
        h = next;
        if h.order() == target {
            return Ok(Some(h));
        }
    }
    Ok(all_subgroups(a, limits)?.into_iter().find(|s| s.order() == target))
}

/// Draws `samples` pairs `(a, a^g)` inside `P` and checks each is realized in `N_G(P)`.
/// Returns the number of samples that were not realized.
pub fn unrealized_in_normalizer(fs: &FusionSystem, samples: usize, seed: u64) -> Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let np = normalizer(&fs.group, &fs.sylow)?;
    let mut done = 0;
    let mut bad = 0;
    let mut tries = 0;
    while done < samples && tries < samples * 200 {
        tries += 1;
        let a = [fs.sylow.random_element(&mut rng), fs.sylow.random_element(&mut rng)];
        let g = fs.group.random_element(&mut rng);
        let b: Vec<Perm> = a.iter().map(|x| x.conjugate_by(&g)).collect();
        if !b.iter().all(|x| fs.sylow.contains(x)) {
            continue;
        }
        done += 1;
        if conjugate_tuples(&np, &a, &b).is_none() {
            bad += 1;
        }
    }
    if done < samples {
        return Err(Error::InternalInconsistency(format!(
            "only {done} of {samples} fusion samples landed in P"
        )));
    }
    Ok(bad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::recipe::{construct_group, preset, GroupRecipe};

    fn fs_of(r: &GroupRecipe) -> FusionSystem {
        FusionSystem::new(&construct_group(r).unwrap(), 2, 0).unwrap()
    }

    fn sub(deg: usize, gens: &[&str]) -> PermGroup {
        PermGroup::new(deg, gens.iter().map(|s| Perm::parse(deg, s).unwrap()).collect()).unwrap()
    }

    #[test]
    fn fusion_in_s4_and_a4() {
        let fs = fs_of(&GroupRecipe::symmetric(4));
        let v: Vec<Perm> = fs
            .sylow()
            .elements()
            .unwrap()
            .into_iter()
            .filter(|x| x.order() == 2 && x.cycle_type() == vec![2, 2])
            .collect();
        assert_eq!(v.len(), 3);
        let g = are_f_conjugate(&fs, &v[..1], &v[1..2]).unwrap().unwrap();
        assert_eq!(v[0].conjugate_by(&g), v[1]);
        assert!(are_f_conjugate(&fs, &v[..1], &v[..1]).unwrap().is_some());

        let fs = fs_of(&GroupRecipe::alternating(4));
        let inv: Vec<Perm> = fs.sylow().elements().unwrap().into_iter().filter(|x| !x.is_identity()).collect();
        for a in &inv {
            for b in &inv {
                assert!(are_f_conjugate(&fs, std::slice::from_ref(a), std::slice::from_ref(b)).unwrap().is_some());
            }
        }
    }

    #[test]
    fn hyperfocal_examples() {
        let h = hyperfocal_subgroup(&fs_of(&GroupRecipe::symmetric(4))).unwrap();
        assert_eq!((h.order, h.agree), (4, true));
        assert_eq!(h.abelian_invariants, Some(vec![2, 2]));
        let h = hyperfocal_subgroup(&fs_of(&GroupRecipe::alternating(4))).unwrap();
        assert_eq!(h.order, 4);
        let h = hyperfocal_subgroup(&fs_of(&preset("q4z3").unwrap())).unwrap();
        assert_eq!(h.abelian_invariants, Some(vec![4, 4]));
    }

    #[test]
    fn omega1_examples() {
        let q = construct_group(&GroupRecipe::direct(GroupRecipe::cyclic(4), GroupRecipe::cyclic(4))).unwrap();
        assert_eq!(omega1(&q, 2).unwrap().abelian_invariants().unwrap(), vec![2, 2]);
        let v = sub(4, &["(1,2)(3,4)", "(1,3)(2,4)"]);
        assert!(omega1(&v, 2).unwrap().same_group(&v));
        let z8 = construct_group(&GroupRecipe::cyclic(8)).unwrap();
        assert_eq!(omega1(&z8, 2).unwrap().order(), 2);
        assert_eq!(omega1(&construct_group(&GroupRecipe::symmetric(3)).unwrap(), 2).err(), Some(Error::NotAbelian));
    }

    #[test]
    fn essentials_and_control() {
        let fs = fs_of(&GroupRecipe::symmetric(4));
        let ess = essential_subgroup_classes(&fs).unwrap();
        assert_eq!(ess.len(), 1);
        assert_eq!(ess[0].order, 4);
        assert!(ess[0].automizer.is_s3);
        assert!(ess[0].subgroup.is_normal_in(fs.group()));
        let d8 = fs.sylow().clone();
        assert!(!is_controlled_by_normalizer(&fs, &d8).unwrap());
        assert!(is_controlled_by_normalizer(&fs, &fs.group().clone()).unwrap());

        let fs = fs_of(&GroupRecipe::alternating(4));
        assert!(essential_subgroup_classes(&fs).unwrap().is_empty());
        assert!(is_controlled_by_normalizer(&fs, &fs.group().clone()).unwrap());
        assert_eq!(unrealized_in_normalizer(&fs, 100, 1).unwrap(), 0);
    }

    #[test]
    fn automizer_examples() {
        let fs = fs_of(&GroupRecipe::symmetric(4));
        let v = sub(4, &["(1,2)(3,4)", "(1,3)(2,4)"]);
        let a = automizer(&fs, &v).unwrap();
        assert_eq!((a.order, a.is_s3), (6, true));
        let w = sub(4, &["(1,2)", "(3,4)"]);
        assert_eq!(automizer(&fs, &w).unwrap().order, 2);
        let d8 = construct_group(&GroupRecipe::wreath(GroupRecipe::cyclic(2), GroupRecipe::cyclic(2))).unwrap();
        let fp = FusionSystem::new(&d8, 2, 0).unwrap();
        assert_eq!(automizer(&fp, &d8).unwrap().order, 1);
    }

    #[test]
    fn odd_complements() {
        let fs = fs_of(&GroupRecipe::alternating(4));
        let oc = odd_complement_fixed_points(&fs, &fs.sylow().clone()).unwrap();
        assert!(oc.fixed.is_trivial());
        assert_eq!(oc.e.order(), 3 * oc.e.p_part_of_order(2));

        let fs = fs_of(&preset("q4z3xz2").unwrap());
        let oc = odd_complement_fixed_points(&fs, &fs.sylow().clone()).unwrap();
        assert_eq!(oc.fixed.order(), 2);
        assert!(oc.fixed.centralizes(fs.group()));
    }
}
