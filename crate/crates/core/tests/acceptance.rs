//! Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero on any failure.

use std::process::ExitCode;

use blockscope::block::{block_distribution, check_idempotents, class_defect_groups, lower_defect_multiplicities, CenterAlgebra};
use blockscope::character::character_table;
use blockscope::fusion::{hyperfocal_subgroup, FusionSystem};
use blockscope::group::search::{intersection, normalizer, sylow_subgroup};
use blockscope::group::subgroups::PSubgroupLattice;
use blockscope::verify::catalog::{run_catalog, Catalog, CatalogReport, Status};
use blockscope::verify::{analyze_recipe, classify_case, CaseLabel, GroupReport, Options};
use blockscope::{construct_group, preset, Limits, Perm, PermGroup};

type Outcome = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn group(name: &str) -> PermGroup {
    construct_group(&preset(name).unwrap()).unwrap()
}

fn report(name: &str) -> Result<GroupReport, String> {
    analyze_recipe(name, &preset(name).unwrap(), 2, &Options::default()).map_err(|e| e.to_string())
}

/// Extends a partial assignment of generator images, keeping the graph of the
/// assignment the same size as the subgroup it covers.
fn extend_iso(src: &[Perm], dst: &PermGroup, dst_elems: &[Perm], images: &mut Vec<Perm>) -> bool {
    let (d1, d2) = (src[0].degree(), dst.degree());
    let total = d1 + d2;
    let n = images.len();
    if n > 0 {
        let graph: Vec<Perm> = src[..n]
            .iter()
            .zip(images.iter())
            .map(|(s, t)| &s.shifted(0, total) * &t.shifted(d1, total))
            .collect();
        let covered = PermGroup::new(d1, src[..n].to_vec()).unwrap().order();
        if PermGroup::new(total, graph).unwrap().order() != covered {
            return false;
        }
    }
    if n == src.len() {
        return PermGroup::new(d2, images.clone()).unwrap().order() == dst.order();
    }
    for t in dst_elems.iter().filter(|t| t.order() == src[n].order()) {
        images.push(t.clone());
        if extend_iso(src, dst, dst_elems, images) {
            return true;
        }
        images.pop();
    }
    false
}

/// Exact isomorphism test by searching for generator images.
fn isomorphic(src: &PermGroup, dst: &PermGroup) -> bool {
    src.order() == dst.order() && extend_iso(src.generators(), dst, &dst.elements().unwrap(), &mut Vec::new())
}

type Counts = (usize, usize);

fn counts(r: &GroupReport) -> Result<(Counts, Counts, Counts), String> {
    let t = r.theorem.as_ref().ok_or("no theorem measurement")?;
    Ok(((t.b.k, t.b.l), (t.c.k, t.c.l), (t.b0.k, t.b0.l)))
}

fn criterion_1() -> Outcome {
    let r = report("s4")?;
    ensure(r.pass, || "report has failing verdicts".into())?;
    ensure(r.case_label == Some(CaseLabel::CaseII), || format!("label {:?}", r.case_label))?;
    let cls = classify_case(&group("s4"), 2, &Options::default()).map_err(|e| e.to_string())?;
    let s = cls.essential.as_ref().ok_or("no essential subgroup")?;
    ensure(s.same_group(&cls.q), || "S differs from Q".into())?;
    ensure(cls.q.abelian_invariants().unwrap() == [2, 2], || "Q is not V4".into())?;
    ensure(cls.evidence.index_p_s == Some(2), || format!("|P:S| = {:?}", cls.evidence.index_p_s))?;
    let (b, c, _) = counts(&r)?;
    ensure(b.1 == 2 && b.0 == 5 && c.0 == 5, || format!("b = {b:?}, c = {c:?}"))
}

fn criterion_2() -> Outcome {
    let r = report("s5")?;
    ensure(r.pass, || "report has failing verdicts".into())?;
    ensure(r.blocks.len() == 2, || format!("{} blocks", r.blocks.len()))?;
    let p = r.principal();
    ensure((p.k, p.l) == (5, 2), || format!("principal k = {}, l = {}", p.k, p.l))?;
    let g = group("s5");
    let cls = classify_case(&g, 2, &Options::default()).map_err(|e| e.to_string())?;
    ensure(cls.q.abelian_invariants().unwrap() == [2, 2], || "Q is not V4".into())?;
    let n = normalizer(&g, &cls.q).map_err(|e| e.to_string())?;
    ensure(isomorphic(&group("s4"), &n), || format!("N(V4) of order {} is not S4", n.order()))?;
    let (_, c, _) = counts(&r)?;
    ensure(c == (5, 2), || format!("c = {c:?}"))
}

fn criterion_3() -> Outcome {
    let r = report("q4s3")?;
    ensure(r.pass, || "report has failing verdicts".into())?;
    ensure(r.order == 96, || format!("order {}", r.order))?;
    ensure(r.case_label == Some(CaseLabel::CaseII), || format!("label {:?}", r.case_label))?;
    let cls = classify_case(&group("q4s3"), 2, &Options::default()).map_err(|e| e.to_string())?;
    ensure(isomorphic(&group("z4wrz2"), cls.fusion.sylow()), || "P is not Z4 wr Z2".into())?;
    ensure(cls.evidence.essentials.len() == 1, || format!("{} essential classes", cls.evidence.essentials.len()))?;
    let s = cls.essential.as_ref().ok_or("no essential subgroup")?;
    ensure(s.same_group(&cls.q), || "S differs from Q".into())?;
    ensure(cls.evidence.essentials[0].automizer.is_s3, || "automizer is not S3".into())?;
    ensure(r.principal().l == 2, || format!("l = {}", r.principal().l))
}

fn criterion_4() -> Outcome {
    let r = report("a4")?;
    ensure(r.pass, || "report has failing verdicts".into())?;
    let p = r.principal();
    ensure((p.k, p.l) == (4, 3), || format!("k = {}, l = {}", p.k, p.l))?;
    let m_v4 = r.principal_multiplicity("Z2 x Z2");
    let m_1 = r.principal_multiplicity("1");
    ensure(m_v4 == Some(1) && m_1 == Some(2), || format!("m(V4) = {m_v4:?}, m(1) = {m_1:?}"))
}

fn criterion_5() -> Outcome {
    let r = report("q4s3")?;
    let m = r.principal_multiplicity("1");
    ensure(m == Some(1), || format!("m(b,1) = {m:?}"))
}

fn criterion_6() -> Outcome {
    let r = report("q4z3xz2")?;
    ensure(r.pass, || "report has failing verdicts".into())?;
    ensure(r.case_label == Some(CaseLabel::CaseI), || format!("label {:?}", r.case_label))?;
    let (b, c, b0) = counts(&r)?;
    ensure(b.1 == 3 && c.1 == 3 && b0.1 == 3, || format!("l: {} {} {}", b.1, c.1, b0.1))?;
    ensure(b.0 == c.0 && c.0 == b0.0, || format!("k: {} {} {}", b.0, c.0, b0.0))?;
    for check in ["Q meets C_P(E) trivially", "Q C_P(E) = P", "Q = [Q, E]"] {
        let v = r.verdict(check).ok_or_else(|| format!("missing check {check}"))?;
        ensure(v.pass, || format!("{check}: {}", v.measured))?;
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    for name in ["q4z6", "q4z2s3"] {
        let r = report(name)?;
        ensure(r.case_label == Some(CaseLabel::OutOfScopeQNotCentral), || format!("{name}: {:?}", r.case_label))?;
    }
    Ok(())
}

fn criterion_8(cat: &CatalogReport) -> Outcome {
    let mut n = 0;
    for e in &cat.entries {
        let Some(r) = &e.report else { continue };
        if r.case_label.is_some_and(CaseLabel::in_scope) {
            let p = r.principal();
            ensure(p.weights == Some(p.l), || format!("{}: weights {:?}, l {}", e.name, p.weights, p.l))?;
            n += 1;
        }
    }
    ensure(n >= 8, || format!("only {n} in-scope entries"))
}

/// Recomputes the invariant suites directly for one group.
fn suites_for(name: &str, g: &PermGroup, p: u64) -> Outcome {
    let err = |e: blockscope::Error| format!("{name}: {e}");
    let fs = FusionSystem::new(g, p, 0).map_err(err)?;
    let hyp = hyperfocal_subgroup(&fs).map_err(err)?;
    ensure(hyp.agree && hyp.method_commutator == Some(hyp.method_residual), || format!("{name}: hyperfocal methods differ"))?;
    let odd: Vec<Perm> = g.elements().map_err(err)?.into_iter().filter(|x| x.order() % p != 0).collect();
    let residual = PermGroup::new(g.degree(), odd).map_err(err)?;
    let brute = intersection(fs.sylow(), &residual).map_err(err)?;
    ensure(brute.same_group(&hyp.subgroup), || format!("{name}: hyperfocal differs from brute force"))?;

    let tab = character_table(g).map_err(err)?;
    tab.check_orthogonality().map_err(err)?;
    let sys = block_distribution(&tab, p).map_err(err)?;
    let regular = tab.class_data().p_regular_classes(p).len();
    let total_l: usize = sys.blocks.iter().map(|b| b.l).sum();
    ensure(total_l == regular, || format!("{name}: sum l = {total_l}, p-regular classes = {regular}"))?;
    let center = CenterAlgebra::new(&tab, &sys.ctx);
    check_idempotents(&tab, &sys, &center).map_err(err)?;

    let sylow = sylow_subgroup(g, p, 0).map_err(err)?;
    let lat = PSubgroupLattice::new(g, &sylow, p, &Limits::default()).map_err(err)?;
    let defects = class_defect_groups(&tab, p, &lat, 0).map_err(err)?;
    for b in &sys.blocks {
        let t = lower_defect_multiplicities(&tab, &sys, b, &lat, &center, &defects).map_err(err)?;
        ensure(t.total() == b.l, || format!("{name}: block {} sum m = {}, l = {}", b.index, t.total(), b.l))?;
    }
    Ok(())
}

fn criterion_9(cat: &Catalog) -> Outcome {
    for e in &cat.entries {
        let g = construct_group(&e.recipe.resolve().map_err(|x| x.to_string())?).map_err(|x| x.to_string())?;
        suites_for(&e.name, &g, e.prime)?;
    }
    Ok(())
}

fn criterion_10(cat: &CatalogReport, suites: &Outcome) -> Outcome {
    suites.clone().map_err(|e| format!("invariant suites failed: {e}"))?;
    for label in [CaseLabel::PEqualsQ, CaseLabel::CaseI, CaseLabel::CaseII] {
        let n = cat
            .entries
            .iter()
            .filter(|e| e.status == Status::Pass && e.report.as_ref().and_then(|r| r.case_label) == Some(label))
            .count();
        ensure(n > 0, || format!("no verified instance of {}", label.as_str()))?;
    }
    ensure(cat.exit_code() == 0, || "catalog has failing entries".into())
}

fn main() -> ExitCode {
    let cat = Catalog::shipped();
    let cat_report = run_catalog(&cat, None, &Options::default());
    let suites = criterion_9(&cat);
    let results: Vec<(&str, Outcome)> = vec![
        ("S4: case_ii, S = Q = V4, |P:S| = 2, l(b) = 2, k(b) = k(c) = 5", criterion_1()),
        ("S5: two blocks, principal k = 5, l = 2, N(V4) = S4 with k = 5, l = 2", criterion_2()),
        ("order 96: case_ii, P = Z4 wr Z2, unique essential S = Q with automizer S3, l = 2", criterion_3()),
        ("A4: l = 3, k = 4, m(V4) = 1, m(1) = 2", criterion_4()),
        ("order 96: m(b,1) = 1", criterion_5()),
        ("case_i instance: l(b) = l(c) = l(b0) = 3, equal k, complement checks pass", criterion_6()),
        ("Q not central: both instances labelled out_of_scope_Q_not_central", criterion_7()),
        ("weight count = l(b) on at least 8 in-scope entries", criterion_8(&cat_report)),
        ("hyperfocal agreement, sum m = l, orthogonality, sum l = p-regular classes, idempotents", suites.clone()),
        ("general claims verified on catalog instances only", criterion_10(&cat_report, &suites)),
    ];
    let mut ok = true;
    for (i, (desc, res)) in results.iter().enumerate() {
        match res {
            Ok(()) => println!("PASS {:>2}  {desc}", i + 1),
            Err(why) => {
                ok = false;
                println!("FAIL {:>2}  {desc}: {why}", i + 1);
            }
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
