//! `p`-blocks from central characters: distribution, defects and defect groups,
//! `k(b)` and `l(b)`, block idempotents in `Z(kG)`, Brauer induction of blocks
//! and lower defect group multiplicities.

use serde::Serialize;

use crate::character::CharacterTable;
use crate::error::{Error, Result};
use crate::field::{rank, Cyclo, CycloField, FieldOps, ModPContext, ResidueField};
use crate::group::classes::class_mult_column;
use crate::group::search::{centralizer_of_element, sylow_subgroup};
use crate::group::subgroups::PSubgroupLattice;
use crate::group::{valuation, PermGroup};

#[derive(Debug, Clone, Serialize)]
pub struct Block {
    pub index: usize,
    pub prime: u64,
    pub characters: Vec<usize>,
    pub defect: u32,
    #[serde(skip)]
    pub defect_group: PermGroup,
    pub is_principal: bool,
    pub k: usize,
    pub l: usize,
    /// Reduced central character, one value per class.
    #[serde(skip)]
    pub omega_mod: Vec<u32>,
}

/// Blocks of one group, reduced through a fixed context.
pub struct BlockSystem {
    pub prime: u64,
    pub ctx: ModPContext,
    pub omegas: Vec<Vec<Cyclo>>,
    pub blocks: Vec<Block>,
    block_of: Vec<usize>,
}

impl BlockSystem {
    pub fn block_of_character(&self, chi: usize) -> usize {
        self.block_of[chi]
    }

    pub fn principal(&self) -> &Block {
        &self.blocks[0]
    }

    /// The block whose reduced central character equals `omega`, if any.
    pub fn match_central_character(&self, omega: &[u32]) -> Result<Option<usize>> {
        let hits: Vec<usize> = self
            .blocks
            .iter()
            .filter(|b| b.omega_mod == omega)
            .map(|b| b.index)
            .collect();
        match hits.len() {
            0 => Ok(None),
            1 => Ok(Some(hits[0])),
            _ => Err(Error::AmbiguousMatch),
        }
    }
}

/// `omega_chi(K) = |K| chi(g_K) / chi(1)`, checked to be algebraic integers.
pub fn central_characters(tab: &CharacterTable) -> Result<Vec<Vec<Cyclo>>> {
    let mut out = Vec::with_capacity(tab.num_characters());
    for chi in 0..tab.num_characters() {
        let d = tab.degree(chi) as i64;
        let row: Vec<Cyclo> = (0..tab.num_classes())
            .map(|k| {
                let size = tab.class_size(k) as i64;
                tab.value(chi, k)
                    .scale(&num_rational::BigRational::new(size.into(), d.into()))
            })
            .collect();
        if let Some(k) = row.iter().position(|w| !w.is_integral()) {
            return Err(Error::InternalInconsistency(format!(
                "central character of character {chi} is not integral at class {k}"
            )));
        }
        out.push(row);
    }
    Ok(out)
}

pub fn block_distribution(tab: &CharacterTable, p: u64) -> Result<BlockSystem> {
    let ctx = ModPContext::new(tab.exponent(), p)?;
    block_distribution_with(tab, ctx, 0)
}

pub fn block_distribution_with(tab: &CharacterTable, ctx: ModPContext, seed: u64) -> Result<BlockSystem> {
    let p = ctx.p;
    let omegas = central_characters(tab)?;
    let reduced: Vec<Vec<u32>> = omegas
        .iter()
        .map(|row| row.iter().map(|w| ctx.reduce(w)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let n = tab.num_characters();
    let mut block_of = vec![usize::MAX; n];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for chi in 0..n {
        if block_of[chi] != usize::MAX {
            continue;
        }
        let id = groups.len();
        let members: Vec<usize> = (chi..n).filter(|&psi| reduced[psi] == reduced[chi]).collect();
        for &m in &members {
            block_of[m] = id;
        }
        groups.push(members);
    }

    let g = tab.group();
    let nu = valuation(tab.group_order(), p);
    let cd = tab.class_data();
    let p_regular = cd.p_regular_classes(p);
    let mut blocks = Vec::with_capacity(groups.len());
    for (index, chars) in groups.into_iter().enumerate() {
        let min_nu = chars.iter().map(|&c| valuation(tab.degree(c) as u128, p)).min().unwrap();
        let defect = nu - min_nu;
        let omega_mod = reduced[chars[0]].clone();
        let defect_class = p_regular
            .iter()
            .copied()
            .find(|&k| omega_mod[k] != 0 && valuation(cd.classes[k].centralizer_order, p) == defect)
            .ok_or(Error::NoDefectClass(index))?;
        let c = centralizer_of_element(g, &cd.classes[defect_class].representative)?;
        let defect_group = sylow_subgroup(&c, p, seed)?;
        let l = brauer_rank(tab, &chars, &p_regular);
        let is_principal = chars.contains(&0);
        if is_principal && defect_group.order() != g.p_part_of_order(p) {
            return Err(Error::InternalInconsistency(
                "principal block defect group is not a Sylow subgroup".into(),
            ));
        }
        if l == 0 || l > chars.len() {
            return Err(Error::InternalInconsistency(format!("block {index} has l = {l}")));
        }
        blocks.push(Block {
            index,
            prime: p,
            k: chars.len(),
            characters: chars,
            defect,
            defect_group,
            is_principal,
            l,
            omega_mod,
        });
    }
    if !blocks[0].is_principal {
        return Err(Error::InternalInconsistency("trivial character is not in the first block".into()));
    }
    Ok(BlockSystem {
        prime: p,
        ctx,
        omegas,
        blocks,
        block_of,
    })
}

/// Rank of the characters of a block restricted to the `p`-regular classes.
fn brauer_rank(tab: &CharacterTable, chars: &[usize], p_regular: &[usize]) -> usize {
    let m: Vec<Vec<Cyclo>> = chars
        .iter()
        .map(|&c| p_regular.iter().map(|&k| tab.value(c, k).clone()).collect())
        .collect();
    rank(&CycloField, &m)
}

/// `Z(kG)` in the class-sum basis with structure constants reduced mod `p`.
pub struct CenterAlgebra {
    field: ResidueField,
    /// `consts[j][i][k] = a_{ijk}` mod `p`.
    consts: Vec<Vec<Vec<u32>>>,
}

impl CenterAlgebra {
    pub fn new(tab: &CharacterTable, ctx: &ModPContext) -> Self {
        let cd = tab.class_data();
        let members = cd.all_members();
        let consts = (0..cd.len())
            .map(|j| {
                class_mult_column(cd, &members, j)
                    .into_iter()
                    .map(|row| row.into_iter().map(|a| (a % ctx.p) as u32).collect())
                    .collect()
            })
            .collect();
        CenterAlgebra {
            field: ctx.field.clone(),
            consts,
        }
    }

    pub fn field(&self) -> &ResidueField {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.consts.len()
    }

    pub fn mul(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let f = &self.field;
        let r = self.dim();
        let mut out = vec![0u32; r];
        for (j, yj) in y.iter().enumerate() {
            if *yj == 0 {
                continue;
            }
            for (i, xi) in x.iter().enumerate() {
                if *xi == 0 {
                    continue;
                }
                let c = f.mul(xi, yj);
                for k in 0..r {
                    let a = self.consts[j][i][k];
                    if a != 0 {
                        out[k] = f.add(&out[k], &f.mul(&c, &f.from_int(a as i64)));
                    }
                }
            }
        }
        out
    }

    /// `x * K_j` for a single class sum.
    pub fn mul_class(&self, x: &[u32], j: usize) -> Vec<u32> {
        let mut y = vec![0u32; self.dim()];
        y[j] = 1;
        self.mul(x, &y)
    }

    pub fn one(&self) -> Vec<u32> {
        let mut e = vec![0u32; self.dim()];
        e[0] = 1;
        e
    }
}

/// Class-sum coefficients of the block idempotent, reduced mod `p`:
/// `e_b = sum_K (sum_{chi in b} chi(1) chi(g_K^-1) / |G|) K`.
pub fn block_idempotent(tab: &CharacterTable, blk: &Block, ctx: &ModPContext) -> Result<Vec<u32>> {
    let order = num_bigint::BigInt::from(tab.group_order());
    let inv_order = num_rational::BigRational::new(1.into(), order);
    (0..tab.num_classes())
        .map(|k| {
            let inv = tab.inverse_class(k);
            let s = blk
                .characters
                .iter()
                .fold(Cyclo::zero(), |acc, &c| &acc + &tab.value(c, inv).scale_int(tab.degree(c) as i64));
            ctx.reduce(&s.scale(&inv_order)).map_err(|e| match e {
                Error::NotPIntegral(_) => Error::InternalInconsistency(format!(
                    "idempotent coefficient of block {} at class {k} is not p-integral",
                    blk.index
                )),
                other => other,
            })
        })
        .collect()
}

/// Checks `e_b e_c = delta_bc e_b` and `sum e_b = 1` in `Z(kG)`.
pub fn check_idempotents(tab: &CharacterTable, sys: &BlockSystem, center: &CenterAlgebra) -> Result<()> {
    let f = center.field();
    let es: Vec<Vec<u32>> = sys
        .blocks
        .iter()
        .map(|b| block_idempotent(tab, b, &sys.ctx))
        .collect::<Result<_>>()?;
    let mut sum = vec![0u32; center.dim()];
    for (a, ea) in es.iter().enumerate() {
        for (x, y) in sum.iter_mut().zip(ea) {
            *x = f.add(x, y);
        }
        for (b, eb) in es.iter().enumerate().skip(a) {
            let prod = center.mul(ea, eb);
            let expected = if a == b { ea.clone() } else { vec![0; center.dim()] };
            if prod != expected {
                return Err(Error::InternalInconsistency(format!(
                    "block idempotents {a} and {b} are not orthogonal idempotents"
                )));
            }
        }
    }
    if sum != center.one() {
        return Err(Error::InternalInconsistency("block idempotents do not sum to 1".into()));
    }
    Ok(())
}

/// Induced central character of a block of `H <= G`, matched against the blocks of `G`.
/// `None` when no block of `G` matches.
pub fn brauer_induce(
    local: &CharacterTable,
    local_omega: &[Cyclo],
    global: &CharacterTable,
    global_blocks: &BlockSystem,
) -> Result<Option<usize>> {
    let omega = induced_central_character(local, local_omega, global, &global_blocks.ctx)?;
    global_blocks.match_central_character(&omega)
}

/// `omega^G(K) = sum of omega(L) over classes L of H contained in K`, reduced.
pub fn induced_central_character(
    local: &CharacterTable,
    local_omega: &[Cyclo],
    global: &CharacterTable,
    ctx: &ModPContext,
) -> Result<Vec<u32>> {
    let gcd = global.class_data();
    let f = &ctx.field;
    let mut out = vec![0u32; global.num_classes()];
    for (l, class) in local.classes().iter().enumerate() {
        let k = gcd.class_of(&class.representative)?;
        let w = ctx.reduce(&local_omega[l])?;
        out[k] = f.add(&out[k], &w);
    }
    Ok(out)
}

/// Defect group of every `p`-regular class, as a class of the lattice.
pub fn class_defect_groups(tab: &CharacterTable, p: u64, lattice: &PSubgroupLattice, seed: u64) -> Result<Vec<(usize, usize)>> {
    let cd = tab.class_data();
    cd.p_regular_classes(p)
        .into_iter()
        .map(|k| {
            let c = centralizer_of_element(tab.group(), &cd.classes[k].representative)?;
            let d = sylow_subgroup(&c, p, seed)?;
            Ok((k, lattice.class_of_group(&d)?))
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct LowerDefectEntry {
    /// Index of the subgroup class in the lattice.
    pub class: usize,
    pub order: u128,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct LowerDefectTable {
    pub block: usize,
    pub entries: Vec<LowerDefectEntry>,
}

impl LowerDefectTable {
    pub fn multiplicity(&self, class: usize) -> usize {
        self.entries
            .iter()
            .find(|e| e.class == class)
            .map_or(0, |e| e.multiplicity)
    }

    pub fn total(&self) -> usize {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }
}

/// `m(b,R) = dim e_b J_{<=R} - dim e_b J_{<R}`, where `J_{<=R}` is spanned by the
/// `p`-regular class sums whose defect group is `G`-conjugate into `R`.
pub fn lower_defect_multiplicities(
    tab: &CharacterTable,
    sys: &BlockSystem,
    blk: &Block,
    lattice: &PSubgroupLattice,
    center: &CenterAlgebra,
    class_defects: &[(usize, usize)],
) -> Result<LowerDefectTable> {
    let f = center.field();
    let e = block_idempotent(tab, blk, &sys.ctx)?;
    let vectors: Vec<(usize, Vec<u32>)> = class_defects
        .iter()
        .map(|&(k, d)| (d, center.mul_class(&e, k)))
        .collect();
    let span_rank = |keep: &dyn Fn(usize) -> bool| -> usize {
        let rows: Vec<Vec<u32>> = vectors
            .iter()
            .filter(|(d, _)| keep(*d))
            .map(|(_, v)| v.clone())
            .collect();
        if rows.is_empty() {
            0
        } else {
            rank(f, &rows)
        }
    };
    let mut entries = Vec::with_capacity(lattice.classes.len());
    for r in 0..lattice.classes.len() {
        let le = span_rank(&|d| lattice.class_le(d, r));
        let lt = span_rank(&|d| lattice.class_lt(d, r));
        entries.push(LowerDefectEntry {
            class: r,
            order: lattice.classes[r].order,
            multiplicity: le - lt,
        });
    }
    let table = LowerDefectTable {
        block: blk.index,
        entries,
    };
    if table.total() != blk.l {
        return Err(Error::InternalInconsistency(format!(
            "lower defect multiplicities of block {} sum to {} but l(b) = {}",
            blk.index,
            table.total(),
            blk.l
        )));
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::character::character_table;
    use crate::group::recipe::{construct_group, GroupRecipe};

    fn blocks_of(r: GroupRecipe) -> (CharacterTable, BlockSystem) {
        let g = construct_group(&r).unwrap();
        let t = character_table(&g).unwrap();
        let b = block_distribution(&t, 2).unwrap();
        (t, b)
    }

    #[test]
    fn s4_single_block() {
        let (_, sys) = blocks_of(GroupRecipe::symmetric(4));
        assert_eq!(sys.blocks.len(), 1);
        let b = sys.principal();
        assert_eq!((b.k, b.l, b.defect), (5, 2, 3));
        assert_eq!(b.defect_group.order(), 8);
    }

    #[test]
    fn s5_two_blocks() {
        let (_, sys) = blocks_of(GroupRecipe::symmetric(5));
        let shape: Vec<(usize, usize, u32)> = sys.blocks.iter().map(|b| (b.k, b.l, b.defect)).collect();
        assert_eq!(shape, vec![(5, 2, 3), (2, 1, 1)]);
        assert_eq!(sys.blocks[1].defect_group.order(), 2);
    }

    #[test]
    fn z6_three_blocks() {
        let (_, sys) = blocks_of(GroupRecipe::cyclic(6));
        assert_eq!(sys.blocks.len(), 3);
        assert!(sys.blocks.iter().all(|b| b.k == 2 && b.l == 1));
    }

    #[test]
    fn central_character_of_trivial_is_class_size() {
        let g = construct_group(&GroupRecipe::symmetric(4)).unwrap();
        let t = character_table(&g).unwrap();
        let om = central_characters(&t).unwrap();
        for k in 0..t.num_classes() {
            assert_eq!(om[0][k], Cyclo::from_int(t.class_size(k) as i64));
        }
    }

    #[test]
    fn idempotents_of_s5() {
        let (t, sys) = blocks_of(GroupRecipe::symmetric(5));
        let center = CenterAlgebra::new(&t, &sys.ctx);
        check_idempotents(&t, &sys, &center).unwrap();
    }

    fn lower_defects(r: GroupRecipe) -> Vec<Vec<(u128, usize)>> {
        let g = construct_group(&r).unwrap();
        let t = character_table(&g).unwrap();
        let sys = block_distribution(&t, 2).unwrap();
        let center = CenterAlgebra::new(&t, &sys.ctx);
        let p = sylow_subgroup(&g, 2, 0).unwrap();
        let lat = PSubgroupLattice::new(&g, &p, 2, &crate::group::Limits::default()).unwrap();
        let cls = class_defect_groups(&t, 2, &lat, 0).unwrap();
        sys.blocks
            .iter()
            .map(|b| {
                let m = lower_defect_multiplicities(&t, &sys, b, &lat, &center, &cls).unwrap();
                m.entries
                    .iter()
                    .filter(|e| e.multiplicity > 0)
                    .map(|e| (e.order, e.multiplicity))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn a4_lower_defects() {
        assert_eq!(lower_defects(GroupRecipe::alternating(4)), vec![vec![(1, 2), (4, 1)]]);
    }

    #[test]
    fn s4_lower_defects() {
        assert_eq!(lower_defects(GroupRecipe::symmetric(4)), vec![vec![(1, 1), (8, 1)]]);
    }

    #[test]
    fn s5_lower_defects() {
        let m = lower_defects(GroupRecipe::symmetric(5));
        assert_eq!(m[1], vec![(2, 1)]);
        assert_eq!(m[0].iter().map(|x| x.1).sum::<usize>(), 2);
    }

    #[test]
    fn principal_block_of_normalizer_induces_to_principal() {
        let g = construct_group(&GroupRecipe::symmetric(5)).unwrap();
        let t = character_table(&g).unwrap();
        let sys = block_distribution(&t, 2).unwrap();
        let v4 = PermGroup::new(
            5,
            vec![crate::Perm::parse(5, "(1,2)(3,4)").unwrap(), crate::Perm::parse(5, "(1,3)(2,4)").unwrap()],
        )
        .unwrap();
        let n = crate::group::search::normalizer(&g, &v4).unwrap();
        assert_eq!(n.order(), 24);
        let nt = character_table(&n).unwrap();
        let om = central_characters(&nt).unwrap();
        assert_eq!(brauer_induce(&nt, &om[0], &t, &sys).unwrap(), Some(0));
    }

    #[test]
    fn defect_zero_block_of_s3_induces_to_itself() {
        let g = construct_group(&GroupRecipe::symmetric(3)).unwrap();
        let t = character_table(&g).unwrap();
        let sys = block_distribution(&t, 2).unwrap();
        let d0 = sys.blocks.iter().find(|b| b.defect == 0).unwrap();
        assert_eq!((d0.k, d0.l), (1, 1));
        let om = central_characters(&t).unwrap();
        let chi = d0.characters[0];
        assert_eq!(brauer_induce(&t, &om[chi], &t, &sys).unwrap(), Some(d0.index));
    }
}
