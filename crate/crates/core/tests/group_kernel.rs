use std::collections::HashSet;

use blockscope::group::classes::class_mult_coefficient;
use blockscope::group::search::{centralizer, is_conjugate_subgroups, normalizer, o_p_residual, sylow_subgroup};
use blockscope::group::subgroups::PSubgroupLattice;
use blockscope::{construct_group, preset, GroupRecipe, Limits, Perm, PermGroup};
use proptest::prelude::*;

fn sub(deg: usize, gens: &[&str]) -> PermGroup {
    PermGroup::new(deg, gens.iter().map(|s| Perm::parse(deg, s).unwrap()).collect()).unwrap()
}

fn group(name: &str) -> PermGroup {
    construct_group(&preset(name).unwrap()).unwrap()
}

/// Conjugacy classes by direct orbit computation over all elements.
fn brute_force_class_count(g: &PermGroup) -> usize {
    let elems = g.elements().unwrap();
    let mut seen: HashSet<Perm> = HashSet::new();
    let mut count = 0;
    for x in &elems {
        if seen.contains(x) {
            continue;
        }
        count += 1;
        for y in &elems {
            seen.insert(x.conjugate_by(y));
        }
    }
    count
}

#[test]
fn centralizer_and_normalizer_examples() {
    let s4 = group("s4");
    let c = centralizer(&s4, &sub(4, &["(1,2,3)"])).unwrap();
    assert_eq!(c.order(), 3);
    let s5 = group("s5");
    let n = normalizer(&s5, &sub(5, &["(1,2)(3,4)", "(1,3)(2,4)"])).unwrap();
    assert_eq!(n.order(), 24);
    let brute = s5
        .elements()
        .unwrap()
        .into_iter()
        .filter(|g| {
            ["(1,2)(3,4)", "(1,3)(2,4)"]
                .iter()
                .all(|s| n.contains(&Perm::parse(5, s).unwrap().conjugate_by(g)))
        })
        .count();
    assert_eq!(brute, 24);
}

#[test]
fn sylow_and_residual_examples() {
    assert_eq!(sylow_subgroup(&group("q4s3"), 2, 0).unwrap().order(), 32);
    let a4 = group("a4");
    assert!(o_p_residual(&a4, 2).unwrap().same_group(&a4));
    let z4 = construct_group(&GroupRecipe::cyclic(4)).unwrap();
    assert!(o_p_residual(&z4, 2).unwrap().is_trivial());
}

#[test]
fn klein_four_lattice_in_a4() {
    let a4 = group("a4");
    let v4 = sylow_subgroup(&a4, 2, 0).unwrap();
    let lat = PSubgroupLattice::new(&a4, &v4, 2, &Limits::default()).unwrap();
    assert_eq!(lat.classes.len(), 3);
    assert_eq!(lat.num_subgroups(), 5);
}

#[test]
fn class_multiplication_in_a4() {
    let a4 = group("a4");
    let cd = a4.class_data(&Limits::default()).unwrap();
    let k = cd.class_of(&Perm::parse(4, "(1,2)(3,4)").unwrap()).unwrap();
    assert_eq!(class_mult_coefficient(&a4, k, k, 0).unwrap(), 3);
}

#[test]
fn class_counts_match_brute_force() {
    for (name, expected) in [("q4z3", 8), ("s4", 5), ("a5", 5), ("d8", 5), ("q4s3", 10)] {
        let g = group(name);
        assert_eq!(g.conjugacy_classes().unwrap().len(), expected, "{name}");
        assert_eq!(brute_force_class_count(&g), expected, "{name}");
    }
}

#[test]
fn classes_are_sorted_and_sizes_divide_order() {
    let g = group("q4s3");
    let cls = g.conjugacy_classes().unwrap();
    assert_eq!(cls.iter().map(|c| c.size).sum::<u128>(), g.order());
    for w in cls.windows(2) {
        assert!((w[0].element_order, w[0].size) <= (w[1].element_order, w[1].size));
    }
    for c in &cls {
        assert_eq!(c.size * c.centralizer_order, g.order());
    }
}

fn relabel(g: &PermGroup, sigma: &Perm) -> PermGroup {
    PermGroup::new(g.degree(), g.generators().iter().map(|x| x.conjugate_by(sigma)).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn class_count_invariant_under_relabeling(images in Just((0u32..8).collect::<Vec<_>>()).prop_shuffle()) {
        let g = group("z4wrz2");
        let sigma = Perm::from_images(images).unwrap();
        let h = relabel(&g, &sigma);
        prop_assert_eq!(h.order(), g.order());
        prop_assert_eq!(h.conjugacy_classes().unwrap().len(), g.conjugacy_classes().unwrap().len());
    }

    #[test]
    fn sylow_subgroups_for_two_seeds_are_conjugate(a in 0u64..1000, b in 0u64..1000) {
        for name in ["s5", "q4s3"] {
            let g = group(name);
            let pa = sylow_subgroup(&g, 2, a).unwrap();
            let pb = sylow_subgroup(&g, 2, b).unwrap();
            prop_assert_eq!(pa.order(), g.p_part_of_order(2));
            prop_assert!(is_conjugate_subgroups(&g, &pa, &pb).unwrap().is_some());
        }
        let g = group("s5");
        let p3 = sylow_subgroup(&g, 3, a).unwrap();
        prop_assert_eq!(p3.order(), 3);
    }

    #[test]
    fn wreath_order_formula(h in 2usize..5, t in 2usize..4) {
        let w = construct_group(&GroupRecipe::wreath(GroupRecipe::cyclic(h), GroupRecipe::symmetric(t))).unwrap();
        let ht = (1..=t as u128).product::<u128>();
        prop_assert_eq!(w.order(), (h as u128).pow(t as u32) * ht);
    }

    #[test]
    fn centralizer_matches_brute_force(idx in 0usize..120) {
        let g = group("s5");
        let elems = g.elements().unwrap();
        let x = &elems[idx];
        let c = centralizer(&g, &PermGroup::new(5, vec![x.clone()]).unwrap()).unwrap();
        let brute = elems.iter().filter(|y| y.commutes_with(x)).count() as u128;
        prop_assert_eq!(c.order(), brute);
    }

    #[test]
    fn perm_group_axioms(a in 0usize..24, b in 0usize..24, c in 0usize..24) {
        let elems = group("s4").elements().unwrap();
        let (x, y, z) = (&elems[a], &elems[b], &elems[c]);
        prop_assert_eq!(&(x * y) * z, x * &(y * z));
        prop_assert!((x * &x.inverse()).is_identity());
        prop_assert_eq!(x.conjugate_by(y), &(&y.inverse() * x) * y);
    }
}
