//! Group recipes: a small expression language for the families used in the catalog.
//!
//! ```json
//! {"kind": "semidirect",
//!  "base": {"kind": "direct", "a": {"kind": "cyclic", "n": 4}, "b": {"kind": "cyclic", "n": 4}},
//!  "acting": {"kind": "cyclic", "n": 3},
//!  "action": [["(5,6,7,8)", "(1,4,3,2)(5,8,7,6)"]]}
//! ```
//!
//! `action[i][j]` is the image of base generator `j` under acting generator `i`,
//! written on the base's own points.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Limits, PermGroup};
use crate::error::{Error, Result};
use crate::perm::Perm;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GroupRecipe {
    Symmetric {
        n: usize,
    },
    Alternating {
        n: usize,
    },
    Cyclic {
        n: usize,
    },
    Direct {
        a: Box<GroupRecipe>,
        b: Box<GroupRecipe>,
    },
    Semidirect {
        base: Box<GroupRecipe>,
        acting: Box<GroupRecipe>,
        action: Vec<Vec<String>>,
    },
    Wreath {
        base: Box<GroupRecipe>,
        top: Box<GroupRecipe>,
    },
}

impl fmt::Display for GroupRecipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupRecipe::Symmetric { n } => write!(f, "S{n}"),
            GroupRecipe::Alternating { n } => write!(f, "A{n}"),
            GroupRecipe::Cyclic { n } => write!(f, "Z{n}"),
            GroupRecipe::Direct { a, b } => write!(f, "({a} x {b})"),
            GroupRecipe::Semidirect { base, acting, .. } => write!(f, "({base} : {acting})"),
            GroupRecipe::Wreath { base, top } => write!(f, "({base} wr {top})"),
        }
    }
}

impl GroupRecipe {
    pub fn symmetric(n: usize) -> Self {
        GroupRecipe::Symmetric { n }
    }

    pub fn alternating(n: usize) -> Self {
        GroupRecipe::Alternating { n }
    }

    pub fn cyclic(n: usize) -> Self {
        GroupRecipe::Cyclic { n }
    }

    pub fn direct(a: GroupRecipe, b: GroupRecipe) -> Self {
        GroupRecipe::Direct {
            a: Box::new(a),
            b: Box::new(b),
        }
    }

    pub fn semidirect(base: GroupRecipe, acting: GroupRecipe, action: Vec<Vec<&str>>) -> Self {
        GroupRecipe::Semidirect {
            base: Box::new(base),
            acting: Box::new(acting),
            action: action
                .into_iter()
                .map(|row| row.into_iter().map(str::to_string).collect())
                .collect(),
        }
    }

    pub fn wreath(base: GroupRecipe, top: GroupRecipe) -> Self {
        GroupRecipe::Wreath {
            base: Box::new(base),
            top: Box::new(top),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("recipe: {e}")))
    }

    /// Permutation degree of the constructed representation.
    pub fn degree(&self) -> Result<usize> {
        Ok(match self {
            GroupRecipe::Symmetric { n } | GroupRecipe::Alternating { n } | GroupRecipe::Cyclic { n } => {
                (*n).max(1)
            }
            GroupRecipe::Direct { a, b } => a.degree()? + b.degree()?,
            GroupRecipe::Semidirect { base, acting, .. } => {
                let bg = construct_group(base)?;
                usize::try_from(bg.order()).unwrap_or(usize::MAX).saturating_add(acting.degree()?)
            }
            GroupRecipe::Wreath { base, top } => {
                let t = construct_group(top)?;
                base.degree()?.saturating_mul(moved_points(&t).len())
            }
        })
    }
}

pub fn construct_group(recipe: &GroupRecipe) -> Result<PermGroup> {
    construct_group_with(recipe, &Limits::default())
}

pub fn construct_group_with(recipe: &GroupRecipe, limits: &Limits) -> Result<PermGroup> {
    let g = build(recipe, limits)?;
    if g.degree() > limits.max_degree {
        return Err(Error::DegreeOverflow {
            degree: g.degree(),
            cap: limits.max_degree,
        });
    }
    Ok(g)
}

fn check_degree(degree: usize, limits: &Limits) -> Result<()> {
    if degree > limits.max_degree {
        return Err(Error::DegreeOverflow {
            degree,
            cap: limits.max_degree,
        });
    }
    Ok(())
}

fn build(recipe: &GroupRecipe, limits: &Limits) -> Result<PermGroup> {
    match recipe {
        GroupRecipe::Symmetric { n } => {
            let n = *n;
            check_degree(n, limits)?;
            let mut gens = Vec::new();
            if n >= 2 {
                gens.push(Perm::from_cycles(n, &[(0..n).collect()])?);
                gens.push(Perm::from_cycles(n, &[vec![0, 1]])?);
            }
            PermGroup::new(n.max(1), gens)
        }
        GroupRecipe::Alternating { n } => {
            let n = *n;
            check_degree(n, limits)?;
            let mut gens = Vec::new();
            if n >= 3 {
                gens.push(Perm::from_cycles(n, &[vec![0, 1, 2]])?);
                if n > 3 {
                    let long: Vec<usize> = if n % 2 == 1 { (0..n).collect() } else { (1..n).collect() };
                    gens.push(Perm::from_cycles(n, &[long])?);
                }
            }
            PermGroup::new(n.max(1), gens)
        }
        GroupRecipe::Cyclic { n } => {
            let n = *n;
            if n == 0 {
                return Err(Error::Parse("cyclic group of order 0".into()));
            }
            check_degree(n, limits)?;
            let gens = if n >= 2 {
                vec![Perm::from_cycles(n, &[(0..n).collect()])?]
            } else {
                vec![]
            };
            PermGroup::new(n, gens)
        }
        GroupRecipe::Direct { a, b } => {
            let ga = build(a, limits)?;
            let gb = build(b, limits)?;
            let total = ga.degree() + gb.degree();
            check_degree(total, limits)?;
            let mut gens: Vec<Perm> = ga.generators().iter().map(|g| g.shifted(0, total)).collect();
            gens.extend(gb.generators().iter().map(|g| g.shifted(ga.degree(), total)));
            PermGroup::new(total, gens)
        }
        GroupRecipe::Semidirect { base, acting, action } => {
            let gb = build(base, limits)?;
            let ga = build(acting, limits)?;
            semidirect(&gb, &ga, action, limits)
        }
        GroupRecipe::Wreath { base, top } => {
            let gb = build(base, limits)?;
            let gt = build(top, limits)?;
            wreath(&gb, &gt, limits)
        }
    }
}

fn moved_points(g: &PermGroup) -> Vec<usize> {
    let mut pts: Vec<usize> = g.generators().iter().flat_map(Perm::support).collect();
    pts.sort_unstable();
    pts.dedup();
    pts
}

/// Copies of `base` over the points moved by `top`, permuted by `top`.
fn wreath(base: &PermGroup, top: &PermGroup, limits: &Limits) -> Result<PermGroup> {
    let support = moved_points(top);
    let k = support.len();
    let d = base.degree();
    let total = d * k;
    check_degree(total, limits)?;
    let slot: HashMap<usize, usize> = support.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut gens = Vec::new();
    for c in 0..k {
        gens.extend(base.generators().iter().map(|g| g.shifted(c * d, total)));
    }
    for t in top.generators() {
        let mut images = vec![0u32; total];
        for (c, &pt) in support.iter().enumerate() {
            let dest = slot[&t.image(pt)];
            for i in 0..d {
                images[c * d + i] = (dest * d + i) as u32;
            }
        }
        gens.push(Perm::from_images(images)?);
    }
    PermGroup::new(total.max(1), gens)
}

/// `base : acting` on the element set of `base` (regular action plus the
/// automorphisms) together with the points of `acting`.
fn semidirect(base: &PermGroup, acting: &PermGroup, action: &[Vec<String>], limits: &Limits) -> Result<PermGroup> {
    let bgens = base.generators();
    let agens = acting.generators();
    if action.len() != agens.len() {
        return Err(Error::InvalidAction(format!(
            "action table has {} rows but the acting group has {} generators",
            action.len(),
            agens.len()
        )));
    }
    let nb = usize::try_from(base.order()).map_err(|_| Error::DegreeOverflow {
        degree: usize::MAX,
        cap: limits.max_degree,
    })?;
    let total = nb + acting.degree();
    check_degree(total, limits)?;

    // Breadth-first words for every base element over its generators.
    let mut elems = vec![base.identity()];
    let mut index: HashMap<Perm, usize> = HashMap::from([(base.identity(), 0)]);
    let mut parent: Vec<(usize, usize)> = vec![(0, usize::MAX)];
    let mut head = 0;
    while head < elems.len() {
        let x = elems[head].clone();
        for (j, s) in bgens.iter().enumerate() {
            let y = &x * s;
            if !index.contains_key(&y) {
                index.insert(y.clone(), elems.len());
                elems.push(y);
                parent.push((head, j));
            }
        }
        head += 1;
    }

    let mut gens = Vec::new();
    for s in bgens {
        let mut images = vec![0u32; total];
        for (i, x) in elems.iter().enumerate() {
            images[i] = index[&(x * s)] as u32;
        }
        for i in nb..total {
            images[i] = i as u32;
        }
        gens.push(Perm::from_images_unchecked(images));
    }
    for (row, a) in action.iter().zip(agens) {
        if row.len() != bgens.len() {
            return Err(Error::InvalidAction(format!(
                "action row has {} images but the base has {} generators",
                row.len(),
                bgens.len()
            )));
        }
        let imgs: Vec<Perm> = row
            .iter()
            .map(|s| Perm::parse(base.degree(), s))
            .collect::<Result<_>>()?;
        for im in &imgs {
            if !base.contains(im) {
                return Err(Error::InvalidAction(format!("image {im} is not in the base group")));
            }
        }
        let phi = extend_to_automorphism(&elems, &index, &parent, bgens, &imgs)?;
        let mut images = vec![0u32; total];
        images[..nb].copy_from_slice(&phi);
        for i in 0..acting.degree() {
            images[nb + i] = (nb + a.image(i)) as u32;
        }
        gens.push(Perm::from_images_unchecked(images));
    }
    let g = PermGroup::new(total, gens)?;
    if g.order() != base.order() * acting.order() {
        return Err(Error::InvalidAction(format!(
            "action does not define a homomorphism into Aut(base): order {} instead of {}",
            g.order(),
            base.order() * acting.order()
        )));
    }
    Ok(g)
}

/// Extends generator images to a map on all elements and checks it is a bijective homomorphism.
fn extend_to_automorphism(
    elems: &[Perm],
    index: &HashMap<Perm, usize>,
    parent: &[(usize, usize)],
    gens: &[Perm],
    imgs: &[Perm],
) -> Result<Vec<u32>> {
    let n = elems.len();
    let mut phi_elem: Vec<Perm> = Vec::with_capacity(n);
    phi_elem.push(elems[0].clone());
    for &(p, j) in &parent[1..] {
        let v = &phi_elem[p] * &imgs[j];
        phi_elem.push(v);
    }
    for (i, x) in elems.iter().enumerate() {
        for (j, s) in gens.iter().enumerate() {
            let y = index[&(x * s)];
            if phi_elem[y] != &phi_elem[i] * &imgs[j] {
                return Err(Error::InvalidAction(format!(
                    "generator images do not respect the relations of the base (at {x} * {s})"
                )));
            }
        }
    }
    let mut seen = vec![false; n];
    let mut out = Vec::with_capacity(n);
    for v in &phi_elem {
        let k = index[v];
        if seen[k] {
            return Err(Error::InvalidAction("generator images define a non-injective map".into()));
        }
        seen[k] = true;
        out.push(k as u32);
    }
    Ok(out)
}

fn z4xz4() -> GroupRecipe {
    GroupRecipe::direct(GroupRecipe::cyclic(4), GroupRecipe::cyclic(4))
}

fn z8xz8() -> GroupRecipe {
    GroupRecipe::direct(GroupRecipe::cyclic(8), GroupRecipe::cyclic(8))
}

// Automorphisms of Z4 x Z4 = <a, b>, a = (1,2,3,4), b = (5,6,7,8).
// theta: a -> b, b -> (ab)^-1; sigma: a <-> b; iota: inversion.
const THETA4: [&str; 2] = ["(5,6,7,8)", "(1,4,3,2)(5,8,7,6)"];
const SIGMA4: [&str; 2] = ["(5,6,7,8)", "(1,2,3,4)"];
const IOTA4: [&str; 2] = ["(1,4,3,2)", "(5,8,7,6)"];
const THETA8: [&str; 2] = ["(9,10,11,12,13,14,15,16)", "(1,8,7,6,5,4,3,2)(9,16,15,14,13,12,11,10)"];
const SIGMA8: [&str; 2] = ["(9,10,11,12,13,14,15,16)", "(1,2,3,4,5,6,7,8)"];

/// Named groups accepted wherever a recipe is expected.
pub fn preset(name: &str) -> Option<GroupRecipe> {
    use GroupRecipe as R;
    let s3_on = |base: GroupRecipe, theta: [&str; 2], sigma: [&str; 2]| {
        // symmetric(3) is generated by (1,2,3) and (1,2)
        R::semidirect(base, R::symmetric(3), vec![theta.to_vec(), sigma.to_vec()])
    };
    Some(match name.to_ascii_lowercase().as_str() {
        "s3" => R::symmetric(3),
        "s4" => R::symmetric(4),
        "s5" => R::symmetric(5),
        "a4" => R::alternating(4),
        "a5" => R::alternating(5),
        "z6" => R::cyclic(6),
        "d8" => R::wreath(R::cyclic(2), R::cyclic(2)),
        "s4xz2" => R::direct(R::symmetric(4), R::cyclic(2)),
        "a4xz2" => R::direct(R::alternating(4), R::cyclic(2)),
        "a4xa4" => R::direct(R::alternating(4), R::alternating(4)),
        "z4wrz2" => R::wreath(R::cyclic(4), R::cyclic(2)),
        "z3wrz2" => R::wreath(R::cyclic(3), R::cyclic(2)),
        "q4z3" => R::semidirect(z4xz4(), R::cyclic(3), vec![THETA4.to_vec()]),
        "q4s3" => s3_on(z4xz4(), THETA4, SIGMA4),
        "q4z3xz2" => R::direct(
            R::semidirect(z4xz4(), R::cyclic(3), vec![THETA4.to_vec()]),
            R::cyclic(2),
        ),
        "q4z6" => R::semidirect(
            z4xz4(),
            R::direct(R::cyclic(3), R::cyclic(2)),
            vec![THETA4.to_vec(), IOTA4.to_vec()],
        ),
        // Z2 x S3 = direct(cyclic(2), symmetric(3)): generators iota, theta, sigma
        "q4z2s3" => R::semidirect(
            z4xz4(),
            R::direct(R::cyclic(2), R::symmetric(3)),
            vec![IOTA4.to_vec(), THETA4.to_vec(), SIGMA4.to_vec()],
        ),
        "q8s3" => s3_on(z8xz8(), THETA8, SIGMA8),
        _ => return None,
    })
}

pub const PRESET_NAMES: &[&str] = &[
    "s3", "s4", "s5", "a4", "a5", "z6", "d8", "s4xz2", "a4xz2", "a4xa4", "z4wrz2", "z3wrz2", "q4z3", "q4s3",
    "q4z3xz2", "q4z6", "q4z2s3", "q8s3",
];
