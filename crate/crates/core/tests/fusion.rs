use std::collections::HashSet;

use blockscope::fusion::{
    are_f_conjugate, automizer, essential_subgroup_classes, hyperfocal_subgroup, is_controlled_by_normalizer,
    unrealized_in_normalizer, FusionSystem,
};
use blockscope::group::search::normalizer;
use blockscope::{construct_group, preset, Perm, PermGroup};
use proptest::prelude::*;

fn group(name: &str) -> PermGroup {
    construct_group(&preset(name).unwrap()).unwrap()
}

/// `O^p(G)` as the subgroup generated by every `p'`-element.
fn brute_residual(g: &PermGroup, p: u64) -> PermGroup {
    let gens: Vec<Perm> = g
        .elements()
        .unwrap()
        .into_iter()
        .filter(|x| x.order() % p != 0)
        .collect();
    PermGroup::new(g.degree(), gens).unwrap()
}

fn brute_intersection_order(a: &PermGroup, b: &PermGroup) -> u128 {
    a.elements().unwrap().iter().filter(|x| b.contains(x)).count() as u128
}

/// `|N_G(U) : U C_G(U)|` by filtering all elements.
fn brute_automizer_order(g: &PermGroup, u: &PermGroup) -> u128 {
    let elems = g.elements().unwrap();
    let ugens = u.generators();
    let n = elems
        .iter()
        .filter(|x| ugens.iter().all(|s| u.contains(&s.conjugate_by(x))))
        .count() as u128;
    let c: Vec<&Perm> = elems
        .iter()
        .filter(|x| ugens.iter().all(|s| s.commutes_with(x)))
        .collect();
    let uc = c.iter().filter(|x| u.contains(x)).count() as u128;
    n * uc / (u.order() * c.len() as u128)
}

const NAMES: [&str; 11] = ["s4", "s5", "a4", "a5", "d8", "q4z3", "q4s3", "s4xz2", "a4xz2", "z3wrz2", "z6"];

#[test]
fn hyperfocal_matches_brute_force_residual() {
    for name in NAMES {
        let g = group(name);
        let fs = FusionSystem::new(&g, 2, 0).unwrap();
        let rep = hyperfocal_subgroup(&fs).unwrap();
        assert!(rep.agree, "{name}");
        assert_eq!(rep.method_commutator, Some(rep.method_residual), "{name}");
        let want = brute_intersection_order(fs.sylow(), &brute_residual(&g, 2));
        assert_eq!(rep.order, want, "{name}");
        assert!(rep.subgroup.is_normal_in(fs.sylow()), "{name}");
    }
}

#[test]
fn automizers_match_element_enumeration() {
    for name in ["s4", "a4", "q4z3", "q4s3", "s5"] {
        let g = group(name);
        let fs = FusionSystem::new(&g, 2, 0).unwrap();
        for u in fs.lattice().unwrap().representatives().unwrap() {
            let a = automizer(&fs, &u).unwrap();
            assert_eq!(a.order, brute_automizer_order(&g, &u), "{name} |U|={}", u.order());
        }
    }
}

#[test]
fn f_conjugacy_matches_brute_force() {
    for name in ["s4", "a4", "d8"] {
        let g = group(name);
        let fs = FusionSystem::new(&g, 2, 0).unwrap();
        let gel = g.elements().unwrap();
        let pel = fs.sylow().elements().unwrap();
        for a in &pel {
            for b in &pel {
                let brute = gel.iter().any(|x| a.conjugate_by(x) == *b);
                let found = are_f_conjugate(&fs, std::slice::from_ref(a), std::slice::from_ref(b)).unwrap();
                assert_eq!(found.is_some(), brute, "{name}");
                if let Some(x) = found {
                    assert_eq!(a.conjugate_by(&x), *b);
                }
            }
        }
    }
}

#[test]
fn essential_subgroups_of_examples() {
    let s4 = FusionSystem::new(&group("s4"), 2, 0).unwrap();
    let ess = essential_subgroup_classes(&s4).unwrap();
    assert_eq!(ess.len(), 1);
    assert_eq!(ess[0].order, 4);
    assert!(ess[0].automizer.is_s3);
    assert!(ess[0].subgroup.is_normal_in(s4.group()));

    let q = FusionSystem::new(&group("q4s3"), 2, 0).unwrap();
    let ess = essential_subgroup_classes(&q).unwrap();
    assert_eq!(ess.len(), 1);
    assert_eq!(ess[0].order, 16);
    assert!(ess[0].automizer.is_s3);
    assert_eq!(ess[0].abelian_invariants, Some(vec![4, 4]));

    for name in ["a4", "q4z3", "a4xz2", "d8"] {
        let fs = FusionSystem::new(&group(name), 2, 0).unwrap();
        assert!(essential_subgroup_classes(&fs).unwrap().is_empty(), "{name}");
    }
}

#[test]
fn control_by_sylow_normalizer() {
    for (name, controlled) in [("a4", true), ("q4z3", true), ("a4xz2", true), ("q4z3xz2", true), ("s4", false), ("q4s3", false)] {
        let g = group(name);
        let fs = FusionSystem::new(&g, 2, 0).unwrap();
        let n = normalizer(&g, fs.sylow()).unwrap();
        assert_eq!(is_controlled_by_normalizer(&fs, &n).unwrap(), controlled, "{name}");
    }
}

/// Pairs `(a, b)` in `P` with `b = a^g` for some `g`, counted when no element of `N_G(P)` does it.
fn brute_unrealized(g: &PermGroup, p_group: &PermGroup) -> usize {
    let np: HashSet<Perm> = normalizer(g, p_group).unwrap().elements().unwrap().into_iter().collect();
    let pel = p_group.elements().unwrap();
    let mut bad = 0;
    for a in &pel {
        let mut by_g = HashSet::new();
        for x in g.elements().unwrap() {
            let b = a.conjugate_by(&x);
            if p_group.contains(&b) {
                by_g.insert(b);
            }
        }
        let by_n: HashSet<Perm> = np.iter().map(|x| a.conjugate_by(x)).collect();
        bad += by_g.difference(&by_n).count();
    }
    bad
}

#[test]
fn control_agrees_with_exhaustive_element_fusion() {
    for (name, controlled) in [("a4", true), ("q4z3", true), ("s4", false), ("q4s3", false)] {
        let g = group(name);
        let fs = FusionSystem::new(&g, 2, 0).unwrap();
        assert_eq!(brute_unrealized(&g, fs.sylow()) == 0, controlled, "{name}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn sampled_fusion_is_realized_in_controlled_groups(seed in any::<u64>()) {
        for name in ["a4", "q4z3", "a4xz2", "q4z3xz2", "d8", "z3wrz2"] {
            let fs = FusionSystem::new(&group(name), 2, seed % 17).unwrap();
            prop_assert_eq!(unrealized_in_normalizer(&fs, 100, seed).unwrap(), 0, "{}", name);
        }
    }

    #[test]
    fn hyperfocal_order_is_seed_independent(seed in 0u64..50) {
        for name in ["s4", "q4s3"] {
            let a = hyperfocal_subgroup(&FusionSystem::new(&group(name), 2, seed).unwrap()).unwrap();
            let b = hyperfocal_subgroup(&FusionSystem::new(&group(name), 2, 0).unwrap()).unwrap();
            prop_assert_eq!(a.order, b.order);
            prop_assert_eq!(a.abelian_invariants, b.abelian_invariants);
        }
    }
}
