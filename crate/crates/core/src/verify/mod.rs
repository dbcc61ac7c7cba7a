//! End-to-end analysis of one group at a prime: block invariants, fusion data,
//! case classification for hyperfocal subgroup `Z_{2^n} x Z_{2^n}`, the predicted
//! equalities, weight counts and the supporting local-structure checks.

pub mod catalog;

use serde::{Deserialize, Serialize};

use crate::block::{
    block_distribution, block_distribution_with, brauer_induce, central_characters, check_idempotents,
    class_defect_groups, lower_defect_multiplicities, BlockSystem, CenterAlgebra, LowerDefectTable,
};
use crate::character::{character_table_with, CharacterTable};
use crate::error::{Error, Result};
use crate::field::{Cyclo, FieldOps, ModPContext};
use crate::fusion::{
    automizer, essential_subgroup_classes, hyperfocal_subgroup, odd_complement_fixed_points, omega1,
    EssentialClass, FusionSystem, HyperfocalReport,
};
use crate::group::recipe::{construct_group_with, GroupRecipe};
use crate::group::search::{centralizer, intersection, normalizer, sylow_subgroup, Quotient};
use crate::group::subgroups::PSubgroupLattice;
use crate::group::{is_power_of, valuation, Limits, PermGroup};
use crate::perm::Perm;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CaseLabel {
    #[serde(rename = "P_equals_Q")]
    PEqualsQ,
    #[serde(rename = "case_i")]
    CaseI,
    #[serde(rename = "case_ii")]
    CaseII,
    #[serde(rename = "out_of_scope_not_homocyclic")]
    OutOfScopeNotHomocyclic,
    #[serde(rename = "out_of_scope_Q_not_central")]
    OutOfScopeQNotCentral,
    #[serde(rename = "out_of_scope_Q_too_large")]
    OutOfScopeQTooLarge,
    #[serde(rename = "nilpotent")]
    Nilpotent,
}

impl CaseLabel {
    pub fn in_scope(self) -> bool {
        matches!(self, CaseLabel::PEqualsQ | CaseLabel::CaseI | CaseLabel::CaseII)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CaseLabel::PEqualsQ => "P_equals_Q",
            CaseLabel::CaseI => "case_i",
            CaseLabel::CaseII => "case_ii",
            CaseLabel::OutOfScopeNotHomocyclic => "out_of_scope_not_homocyclic",
            CaseLabel::OutOfScopeQNotCentral => "out_of_scope_Q_not_central",
            CaseLabel::OutOfScopeQTooLarge => "out_of_scope_Q_too_large",
            CaseLabel::Nilpotent => "nilpotent",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string())).ok()
    }
}

/// How the bound on `|Q|` in the non-controlled case is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum QOrderReading {
    #[serde(rename = "at_most_16")]
    AtMost16,
    #[serde(rename = "less_than_16")]
    LessThan16,
}

impl QOrderReading {
    pub fn bound(self) -> &'static str {
        match self {
            QOrderReading::AtMost16 => "|Q| <= 16",
            QOrderReading::LessThan16 => "|Q| < 16",
        }
    }

    fn admits(self, order: u128) -> bool {
        match self {
            QOrderReading::AtMost16 => order <= 16,
            QOrderReading::LessThan16 => order < 16,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub seed: u64,
    pub q_reading: QOrderReading,
    pub limits: Limits,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            seed: 0,
            q_reading: QOrderReading::AtMost16,
            limits: Limits::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub check: String,
    pub expected: String,
    pub measured: String,
    pub pass: bool,
}

impl Verdict {
    pub fn new(check: &str, expected: impl ToString, measured: impl ToString, pass: bool) -> Self {
        Verdict {
            check: check.to_string(),
            expected: expected.to_string(),
            measured: measured.to_string(),
            pass,
        }
    }

    fn eq<T: PartialEq + ToString>(check: &str, expected: T, measured: T) -> Self {
        let pass = expected == measured;
        Verdict::new(check, expected, measured, pass)
    }

    fn holds(check: &str, pass: bool) -> Self {
        Verdict::new(check, true, pass, pass)
    }
}

pub fn describe_invariants(inv: &Option<Vec<u64>>) -> String {
    match inv.as_deref() {
        Some([]) => "1".into(),
        Some(v) => v.iter().map(|q| format!("Z{q}")).collect::<Vec<_>>().join(" x "),
        None => "nonabelian".into(),
    }
}

/// Short structural description: abelian invariants, or order for non-abelian groups.
pub fn describe_group(h: &PermGroup) -> String {
    match h.abelian_invariants() {
        Ok(inv) => describe_invariants(&Some(inv)),
        Err(_) => format!("nonabelian of order {}", h.order()),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Evidence {
    pub sylow_order: u128,
    pub sylow: String,
    pub hyperfocal: HyperfocalReport,
    pub q_homocyclic_rank2: bool,
    pub q_order: u128,
    pub controlled: bool,
    pub essentials: Vec<EssentialClass>,
    pub q_in_center_of_p: bool,
    pub q_in_center_of_s: Option<bool>,
    pub s_equals_c_p_q0: Option<bool>,
    pub index_p_s: Option<u128>,
    pub q_order_reading: QOrderReading,
}

/// Classification state shared by the later checks.
pub struct Classification {
    pub label: CaseLabel,
    pub evidence: Evidence,
    pub fusion: FusionSystem,
    pub q: PermGroup,
    pub q0: Option<PermGroup>,
    pub essential: Option<PermGroup>,
}

/// Label as a function of the evidence alone.
pub fn label_from_evidence(ev: &Evidence) -> CaseLabel {
    if ev.q_order == 1 {
        return CaseLabel::Nilpotent;
    }
    if !ev.q_homocyclic_rank2 {
        return CaseLabel::OutOfScopeNotHomocyclic;
    }
    if ev.q_order == ev.sylow_order {
        return CaseLabel::PEqualsQ;
    }
    if ev.controlled {
        return if ev.q_in_center_of_p {
            CaseLabel::CaseI
        } else {
            CaseLabel::OutOfScopeQNotCentral
        };
    }
    if ev.q_in_center_of_s != Some(true) {
        return CaseLabel::OutOfScopeQNotCentral;
    }
    if !ev.q_order_reading.admits(ev.q_order) {
        return CaseLabel::OutOfScopeQTooLarge;
    }
    CaseLabel::CaseII
}

fn is_homocyclic_rank2(inv: &Option<Vec<u64>>) -> bool {
    matches!(inv.as_deref(), Some([a, b]) if a == b && a.is_power_of_two())
}

fn center(h: &PermGroup) -> Result<PermGroup> {
    centralizer(h, h)
}

pub fn classify_case(g: &PermGroup, p: u64, opts: &Options) -> Result<Classification> {
    let fs = FusionSystem::with_limits(g, p, opts.seed, &opts.limits)?;
    let hyp = hyperfocal_subgroup(&fs)?;
    let q = hyp.subgroup.clone();
    let homocyclic = is_homocyclic_rank2(&hyp.abelian_invariants);
    let essentials = if q.is_trivial() { Vec::new() } else { essential_subgroup_classes(&fs)? };
    let controlled = essentials.is_empty();
    let p_grp = fs.sylow().clone();
    let q_in_center_of_p = q.is_subgroup_of(&center(&p_grp)?);
    let mut q0 = None;
    let mut essential = None;
    let (mut q_in_center_of_s, mut s_equals, mut index_p_s) = (None, None, None);
    if homocyclic {
        let o = omega1(&q, p)?;
        if !controlled {
            if essentials.len() != 1 {
                return Err(Error::InternalInconsistency(format!(
                    "{} essential classes where exactly one is expected",
                    essentials.len()
                )));
            }
            let s = essentials[0].subgroup.clone();
            let cpq0 = centralizer(&p_grp, &o)?;
            q_in_center_of_s = Some(q.is_subgroup_of(&center(&s)?));
            s_equals = Some(cpq0.same_group(&s));
            index_p_s = Some(p_grp.order() / s.order());
            essential = Some(s);
        }
        q0 = Some(o);
    }
    let evidence = Evidence {
        sylow_order: p_grp.order(),
        sylow: describe_group(&p_grp),
        q_homocyclic_rank2: homocyclic,
        q_order: q.order(),
        controlled,
        essentials,
        q_in_center_of_p,
        q_in_center_of_s,
        s_equals_c_p_q0: s_equals,
        index_p_s,
        q_order_reading: opts.q_reading,
        hyperfocal: hyp,
    };
    let label = label_from_evidence(&evidence);
    if label == CaseLabel::CaseII && (s_equals != Some(true) || index_p_s != Some(2)) {
        return Err(Error::InternalInconsistency(
            "unique essential subgroup is not C_P(Q0) of index 2".into(),
        ));
    }
    Ok(Classification {
        label,
        evidence,
        fusion: fs,
        q,
        q0,
        essential,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct BlockCounts {
    pub k: usize,
    pub l: usize,
}

fn principal_counts(h: &PermGroup, p: u64, limits: &Limits) -> Result<BlockCounts> {
    let t = character_table_with(h, limits)?;
    let sys = block_distribution(&t, p)?;
    let b = sys.principal();
    Ok(BlockCounts { k: b.k, l: b.l })
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoremMeasurement {
    pub b: BlockCounts,
    pub c: BlockCounts,
    pub b0: BlockCounts,
}

/// Measures `k`, `l` for `b`, for `c` in `N_G(Q)` and for `b0` in `N_G(P)`, and checks
/// the equalities predicted for the case.
pub fn verify_theorem(
    tab: &CharacterTable,
    sys: &BlockSystem,
    cls: &Classification,
    limits: &Limits,
) -> Result<(TheoremMeasurement, Vec<Verdict>)> {
    let g = tab.group();
    let p = sys.prime;
    let nq = normalizer(g, &cls.q)?;
    let np = normalizer(g, cls.fusion.sylow())?;
    let b = BlockCounts {
        k: sys.principal().k,
        l: sys.principal().l,
    };
    let c = principal_counts(&nq, p, limits)?;
    let b0 = principal_counts(&np, p, limits)?;
    let mut v = Vec::new();
    let nq_tab = character_table_with(&nq, limits)?;
    let om = central_characters(&nq_tab)?;
    let induced = brauer_induce(&nq_tab, &om[0], tab, sys)?;
    v.push(Verdict::eq(
        "principal block of N_G(Q) induces to b",
        "block 0".to_string(),
        induced.map_or("undefined".into(), |i| format!("block {i}")),
    ));
    match cls.label {
        CaseLabel::CaseI => {
            v.push(Verdict::eq("l(b)", 3, b.l));
            v.push(Verdict::eq("l(c)", 3, c.l));
            v.push(Verdict::eq("l(b0)", 3, b0.l));
            v.push(Verdict::eq("k(b)=k(c)", b.k, c.k));
            v.push(Verdict::eq("k(b)=k(b0)", b.k, b0.k));
        }
        CaseLabel::CaseII => {
            v.push(Verdict::eq("l(b)", 2, b.l));
            v.push(Verdict::eq("l(c)", 2, c.l));
            v.push(Verdict::eq("k(b)=k(c)", b.k, c.k));
        }
        CaseLabel::PEqualsQ => {
            v.push(Verdict::eq("l(b)", 3, b.l));
        }
        _ => {}
    }
    Ok((TheoremMeasurement { b, c, b0 }, v))
}

#[derive(Debug, Clone, Serialize)]
pub struct WeightData {
    /// Weight count per block of `G`.
    pub per_block: Vec<usize>,
    /// Whether the principal block of `N_G(R)` induced to the principal block for every `R`.
    pub principal_induces_principal: bool,
}

/// Counts weights `(R, theta)` per block: `theta` a defect-zero character of `N_G(R)/R`
/// whose inflation lies in a block of `N_G(R)` inducing to the block.
pub fn count_weights(
    tab: &CharacterTable,
    sys: &BlockSystem,
    lat: &PSubgroupLattice,
    limits: &Limits,
) -> Result<WeightData> {
    let g = tab.group();
    let p = sys.prime;
    let ctx = &sys.ctx;
    let gcd = tab.class_data();
    let mut per_block = vec![0usize; sys.blocks.len()];
    let mut principal_ok = true;
    for r in lat.representatives()? {
        let n = normalizer(g, &r)?;
        let ncd = n.class_data(limits)?;
        let principal: Vec<Cyclo> = ncd.classes.iter().map(|c| Cyclo::from_int(c.size as i64)).collect();
        let mut omega = vec![0u32; tab.num_classes()];
        for (cl, w) in ncd.classes.iter().zip(&principal) {
            let k = gcd.class_of(&cl.representative)?;
            omega[k] = ctx.field.add(&omega[k], &ctx.reduce(w)?);
        }
        if sys.match_central_character(&omega)? != Some(0) {
            principal_ok = false;
        }

        let quot = Quotient::new(&n, &r)?;
        let qt = character_table_with(&quot.group, limits)?;
        let nu = valuation(quot.group.order(), p);
        let images: Vec<usize> = ncd
            .classes
            .iter()
            .map(|cl| qt.class_data().class_of(&quot.map(&cl.representative)))
            .collect::<Result<_>>()?;
        let targets: Vec<usize> = ncd
            .classes
            .iter()
            .map(|cl| gcd.class_of(&cl.representative))
            .collect::<Result<_>>()?;
        for theta in 0..qt.num_characters() {
            let d = qt.degree(theta);
            if valuation(d as u128, p) != nu {
                continue;
            }
            let mut omega = vec![0u32; tab.num_classes()];
            for (l, cl) in ncd.classes.iter().enumerate() {
                let w = qt
                    .value(theta, images[l])
                    .scale(&num_rational::BigRational::new((cl.size as i64).into(), (d as i64).into()));
                let k = targets[l];
                omega[k] = ctx.field.add(&omega[k], &ctx.reduce(&w)?);
            }
            if let Some(b) = sys.match_central_character(&omega)? {
                per_block[b] += 1;
            }
        }
    }
    Ok(WeightData {
        per_block,
        principal_induces_principal: principal_ok,
    })
}

/// `[A, B]` for subgroups normalizing each other.
fn commutator_subgroup(a: &PermGroup, b: &PermGroup) -> Result<PermGroup> {
    let seeds: Vec<Perm> = a
        .generators()
        .iter()
        .flat_map(|x| b.generators().iter().map(move |y| x.commutator(y)))
        .collect();
    a.join(b)?.normal_closure(&seeds)
}

/// Checks of the local structure behind the theorem for an in-scope classification.
pub fn check_local_structure(cls: &Classification, opts: &Options) -> Result<Vec<Verdict>> {
    let mut v = Vec::new();
    if !cls.label.in_scope() {
        return Ok(v);
    }
    let fs = &cls.fusion;
    let g = fs.group();
    let p_grp = fs.sylow();
    let q = &cls.q;
    let q0 = cls.q0.as_ref().expect("homocyclic hyperfocal subgroup has Omega_1");

    let cq0 = centralizer(g, q0)?;
    let p0 = centralizer(p_grp, q0)?;
    v.push(Verdict::eq("C_P(Q0) is Sylow in C_G(Q0)", cq0.p_part_of_order(2), p0.order()));
    let local = FusionSystem::with_limits(&cq0, 2, opts.seed, &opts.limits)?;
    v.push(Verdict::eq(
        "hyperfocal subgroup of C_G(Q0) is trivial",
        1,
        hyperfocal_subgroup(&local)?.order,
    ));

    let (u, e_name) = if cls.evidence.controlled {
        v.push(Verdict::holds("Q0 <= Z(P)", q0.is_subgroup_of(&center(p_grp)?)));
        (p_grp.clone(), "P")
    } else {
        let s = cls.essential.as_ref().expect("non-controlled case has an essential subgroup");
        v.push(Verdict::eq("number of essential classes", 1, cls.evidence.essentials.len()));
        v.push(Verdict::holds("S = C_P(Q0)", cls.evidence.s_equals_c_p_q0 == Some(true)));
        v.push(Verdict::eq("|P:S|", 2, cls.evidence.index_p_s.unwrap_or(0)));
        let a = automizer(fs, s)?;
        v.push(Verdict::holds("automizer of S is S3", a.is_s3));
        (s.clone(), "S")
    };
    if cls.label == CaseLabel::CaseI {
        let a = automizer(fs, p_grp)?;
        v.push(Verdict::eq("odd part of automizer of P", 3, a.odd_part()));
    }

    let oc = odd_complement_fixed_points(fs, &u)?;
    let fixed = &oc.fixed;
    v.push(Verdict::eq(
        &format!("Q meets C_{e_name}(E) trivially"),
        1,
        intersection(q, fixed)?.order(),
    ));
    v.push(Verdict::holds(
        &format!("Q C_{e_name}(E) = {e_name}"),
        q.join(fixed)?.same_group(&u),
    ));
    v.push(Verdict::holds("Q = [Q, E]", commutator_subgroup(q, &oc.e)?.same_group(q)));
    Ok(v)
}

#[derive(Debug, Clone, Serialize)]
pub struct LowerDefectRow {
    pub class: usize,
    pub subgroup: String,
    pub order: u128,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockReport {
    pub index: usize,
    pub principal: bool,
    pub characters: Vec<usize>,
    pub degrees: Vec<u64>,
    pub defect: u32,
    pub defect_group_order: u128,
    pub defect_group: String,
    pub k: usize,
    pub l: usize,
    pub weights: Option<usize>,
    pub lower_defect: Option<Vec<LowerDefectRow>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupReport {
    pub schema: u32,
    pub name: String,
    pub recipe: Option<GroupRecipe>,
    pub description: String,
    pub order: u128,
    pub degree: usize,
    pub prime: u64,
    pub seed: u64,
    pub num_classes: usize,
    pub num_p_regular_classes: usize,
    pub blocks: Vec<BlockReport>,
    pub case_label: Option<CaseLabel>,
    pub evidence: Option<Evidence>,
    pub theorem: Option<TheoremMeasurement>,
    pub verdicts: Vec<Verdict>,
    pub pass: bool,
}

impl GroupReport {
    pub fn verdict(&self, check: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.check == check)
    }

    pub fn principal(&self) -> &BlockReport {
        &self.blocks[0]
    }

    pub fn summary(&self) -> String {
        let mut out = format!(
            "{} {}: order {}, degree {}, {} classes, {} {}-regular\n",
            self.name, self.description, self.order, self.degree, self.num_classes, self.num_p_regular_classes, self.prime
        );
        if let (Some(label), Some(ev)) = (self.case_label, &self.evidence) {
            out.push_str(&format!(
                "case: {} (|Q| = {}, bound read as {})\n",
                label.as_str(),
                ev.q_order,
                ev.q_order_reading.bound()
            ));
        }
        for b in &self.blocks {
            out.push_str(&format!(
                "block {}{}: defect {} ({}), k = {}, l = {}, degrees {:?}",
                b.index,
                if b.principal { " (principal)" } else { "" },
                b.defect,
                b.defect_group,
                b.k,
                b.l,
                b.degrees
            ));
            if let Some(w) = b.weights {
                out.push_str(&format!(", weights {w}"));
            }
            out.push('\n');
            for row in b.lower_defect.iter().flatten().filter(|r| r.multiplicity > 0) {
                out.push_str(&format!("  m(b, {}) = {}\n", row.subgroup, row.multiplicity));
            }
        }
        if let Some(t) = &self.theorem {
            out.push_str(&format!(
                "k(b) = {}, l(b) = {}; k(c) = {}, l(c) = {}; k(b0) = {}, l(b0) = {}\n",
                t.b.k, t.b.l, t.c.k, t.c.l, t.b0.k, t.b0.l
            ));
        }
        for v in &self.verdicts {
            out.push_str(&format!(
                "{} {} (expected {}, measured {})\n",
                if v.pass { "PASS" } else { "FAIL" },
                v.check,
                v.expected,
                v.measured
            ));
        }
        out
    }

    /// `m(b, R)` for the principal block, with `R` given by its description.
    pub fn principal_multiplicity(&self, subgroup: &str) -> Option<usize> {
        let rows = self.principal().lower_defect.as_ref()?;
        Some(rows.iter().filter(|r| r.subgroup == subgroup).map(|r| r.multiplicity).sum())
    }
}

fn lower_defect_rows(t: &LowerDefectTable, lat: &PSubgroupLattice) -> Result<Vec<LowerDefectRow>> {
    t.entries
        .iter()
        .map(|e| {
            Ok(LowerDefectRow {
                class: e.class,
                subgroup: describe_group(&lat.class_representative(e.class)?),
                order: e.order,
                multiplicity: e.multiplicity,
            })
        })
        .collect()
}

/// Runs the full pipeline on a recipe.
pub fn analyze_recipe(name: &str, recipe: &GroupRecipe, p: u64, opts: &Options) -> Result<GroupReport> {
    let g = construct_group_with(recipe, &opts.limits)?;
    let mut rep = analyze_group(name, &g, p, opts)?;
    rep.recipe = Some(recipe.clone());
    rep.description = recipe.to_string();
    Ok(rep)
}

pub fn analyze_group(name: &str, g: &PermGroup, p: u64, opts: &Options) -> Result<GroupReport> {
    let limits = &opts.limits;
    let tab = character_table_with(g, limits)?;
    let mut verdicts = Vec::new();
    tab.check_orthogonality()?;
    verdicts.push(Verdict::holds("character table orthogonality", true));

    let sys = block_distribution_with(&tab, ModPContext::new(tab.exponent(), p)?, opts.seed)?;
    let cd = tab.class_data();
    let p_regular = cd.p_regular_classes(p).len();
    verdicts.push(Verdict::eq(
        "sum of k(b) = #Irr",
        tab.num_characters(),
        sys.blocks.iter().map(|b| b.k).sum(),
    ));
    verdicts.push(Verdict::eq(
        "sum of l(b) = #p-regular classes",
        p_regular,
        sys.blocks.iter().map(|b| b.l).sum(),
    ));
    verdicts.push(Verdict::holds(
        "defect zero blocks have k = l = 1",
        sys.blocks.iter().filter(|b| b.defect == 0).all(|b| b.k == 1 && b.l == 1),
    ));
    let center_alg = CenterAlgebra::new(&tab, &sys.ctx);
    check_idempotents(&tab, &sys, &center_alg)?;
    verdicts.push(Verdict::holds("block idempotents are orthogonal and sum to 1", true));
    let m_prime = sys.ctx.m_prime;
    if ModPContext::num_factors(tab.exponent(), p) > 1 {
        let alt = block_distribution_with(&tab, ModPContext::with_factor(tab.exponent(), p, 1)?, opts.seed)?;
        let same = alt.blocks.iter().map(|b| &b.characters).eq(sys.blocks.iter().map(|b| &b.characters));
        verdicts.push(Verdict::holds(
            &format!("block partition independent of the factor of Phi_{m_prime} mod p"),
            same,
        ));
    }

    let sylow = sylow_subgroup(g, p, opts.seed)?;
    let lattice = match PSubgroupLattice::new(g, &sylow, p, limits) {
        Ok(l) => Some(l),
        Err(Error::CapExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    let mut lower: Vec<Option<Vec<LowerDefectRow>>> = vec![None; sys.blocks.len()];
    let mut weights: Option<WeightData> = None;
    if let Some(lat) = &lattice {
        let defects = class_defect_groups(&tab, p, lat, opts.seed)?;
        let mut outside_zero = true;
        for b in &sys.blocks {
            let t = lower_defect_multiplicities(&tab, &sys, b, lat, &center_alg, &defects)?;
            let d = lat.class_of_group(&b.defect_group)?;
            outside_zero &= t.entries.iter().all(|e| e.multiplicity == 0 || lat.class_le(e.class, d));
            outside_zero &= t.multiplicity(d) >= 1;
            lower[b.index] = Some(lower_defect_rows(&t, lat)?);
        }
        verdicts.push(Verdict::holds("sum over R of m(b,R) = l(b)", true));
        verdicts.push(Verdict::holds(
            "m(b,R) vanishes unless R lies in a defect group, and m(b,D) >= 1",
            outside_zero,
        ));
        verdicts.extend(quotient_lower_defect_checks(&tab, &sys, lat, &lower, opts)?);
        let w = count_weights(&tab, &sys, lat, limits)?;
        verdicts.push(Verdict::holds(
            "principal block of N_G(R) induces to the principal block",
            w.principal_induces_principal,
        ));
        weights = Some(w);
    }

    let mut case_label = None;
    let mut evidence = None;
    let mut theorem = None;
    if p == 2 {
        let cls = classify_case(g, p, opts)?;
        if cls.label.in_scope() {
            let (m, v) = verify_theorem(&tab, &sys, &cls, limits)?;
            theorem = Some(m);
            verdicts.extend(v);
            verdicts.extend(check_local_structure(&cls, opts)?);
            if let Some(w) = &weights {
                verdicts.push(Verdict::eq("weight count = l(b)", sys.principal().l, w.per_block[0]));
            }
        }
        case_label = Some(cls.label);
        evidence = Some(cls.evidence);
    }

    let blocks = sys
        .blocks
        .iter()
        .map(|b| BlockReport {
            index: b.index,
            principal: b.is_principal,
            degrees: b.characters.iter().map(|&c| tab.degree(c)).collect(),
            characters: b.characters.clone(),
            defect: b.defect,
            defect_group_order: b.defect_group.order(),
            defect_group: describe_group(&b.defect_group),
            k: b.k,
            l: b.l,
            weights: weights.as_ref().map(|w| w.per_block[b.index]),
            lower_defect: lower[b.index].clone(),
        })
        .collect();
    let pass = verdicts.iter().all(|v| v.pass);
    Ok(GroupReport {
        schema: SCHEMA_VERSION,
        name: name.to_string(),
        recipe: None,
        description: String::new(),
        order: g.order(),
        degree: g.degree(),
        prime: p,
        seed: opts.seed,
        num_classes: tab.num_classes(),
        num_p_regular_classes: p_regular,
        blocks,
        case_label,
        evidence,
        theorem,
        verdicts,
        pass,
    })
}

/// For normal `p`-subgroups `R` with `|G : C_G(R)|` a power of `p`, compares `m(b,R)`
/// with `m(b̄,1)` for the block `b̄` of `G/R` dominated by `b`.
fn quotient_lower_defect_checks(
    tab: &CharacterTable,
    sys: &BlockSystem,
    lat: &PSubgroupLattice,
    lower: &[Option<Vec<LowerDefectRow>>],
    opts: &Options,
) -> Result<Vec<Verdict>> {
    let g = tab.group();
    let p = sys.prime;
    let mut out = Vec::new();
    for c in 0..lat.classes.len() {
        if lat.classes[c].members.len() != 1 || c == lat.trivial_class() {
            continue;
        }
        let r = lat.class_representative(c)?;
        let index = g.order() / centralizer(g, &r)?.order();
        if !r.is_normal_in(g) || index > u64::MAX as u128 || !is_power_of(index as u64, p) {
            continue;
        }
        let quot = Quotient::new(g, &r)?;
        let qt = character_table_with(&quot.group, &opts.limits)?;
        let qsys = block_distribution(&qt, p)?;
        let qsyl = sylow_subgroup(&quot.group, p, opts.seed)?;
        let qlat = PSubgroupLattice::new(&quot.group, &qsyl, p, &opts.limits)?;
        let qcenter = CenterAlgebra::new(&qt, &qsys.ctx);
        let qdefects = class_defect_groups(&qt, p, &qlat, opts.seed)?;
        let gcd = tab.class_data();
        let lifted: Vec<usize> = qt
            .classes()
            .iter()
            .map(|cl| gcd.class_of(&quot.lift(&cl.representative)))
            .collect::<Result<_>>()?;
        let kernel_classes: Vec<usize> = r.generators().iter().map(|x| gcd.class_of(x)).collect::<Result<_>>()?;
        for b in &sys.blocks {
            let mut dominated = std::collections::BTreeSet::new();
            for &chi in &b.characters {
                let deg = Cyclo::from_int(tab.degree(chi) as i64);
                if kernel_classes.iter().any(|&k| *tab.value(chi, k) != deg) {
                    continue;
                }
                let row: Vec<&Cyclo> = lifted.iter().map(|&k| tab.value(chi, k)).collect();
                let theta = (0..qt.num_characters())
                    .find(|&t| qt.row(t).iter().zip(&row).all(|(a, b)| a == *b))
                    .ok_or_else(|| Error::InternalInconsistency("inflated character not found".into()))?;
                dominated.insert(qsys.block_of_character(theta));
            }
            let m_r = lower[b.index]
                .as_ref()
                .and_then(|rows| rows.iter().find(|row| row.class == c))
                .map_or(0, |row| row.multiplicity);
            let check = format!("m(b{},{}) = m(dominated block,1)", b.index, describe_group(&r));
            if dominated.len() != 1 {
                out.push(Verdict::new(&check, "one dominated block", dominated.len(), false));
                continue;
            }
            let bb = &qsys.blocks[*dominated.iter().next().unwrap()];
            let t = lower_defect_multiplicities(&qt, &qsys, bb, &qlat, &qcenter, &qdefects)?;
            out.push(Verdict::eq(&check, m_r, t.multiplicity(qlat.trivial_class())));
        }
    }
    Ok(out)
}
