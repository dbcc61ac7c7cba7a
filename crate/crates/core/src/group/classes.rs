//! Conjugacy classes by orbit enumeration.

use std::sync::Arc;

use serde::Serialize;

use super::{ElementIndex, Limits, PermGroup};
use crate::error::{Error, Result};
use crate::perm::Perm;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjClass {
    /// Lexicographically least element of the class.
    #[serde(serialize_with = "ser_perm")]
    pub representative: Perm,
    pub size: u128,
    pub centralizer_order: u128,
    pub element_order: u64,
}

fn ser_perm<S: serde::Serializer>(p: &Perm, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_cycle_string())
}

/// Classes of a group together with the element-to-class map.
pub struct ClassData {
    pub classes: Vec<ConjClass>,
    elements: Arc<ElementIndex>,
    class_of_element: Vec<u32>,
    inverse: Vec<usize>,
}

impl ClassData {
    pub(crate) fn compute(g: &PermGroup, limits: &Limits) -> Result<Self> {
        let elements = g.element_index(limits)?;
        let n = elements.elements.len();
        let mut raw_class = vec![u32::MAX; n];
        let mut raw: Vec<Vec<u32>> = Vec::new();
        for start in 0..n {
            if raw_class[start] != u32::MAX {
                continue;
            }
            let cid = raw.len() as u32;
            raw_class[start] = cid;
            let mut members = vec![start as u32];
            let mut head = 0;
            while head < members.len() {
                let x = &elements.elements[members[head] as usize];
                head += 1;
                for s in g.generators() {
                    let y = x.conjugate_by(s);
                    let yi = elements.index[&y] as usize;
                    if raw_class[yi] == u32::MAX {
                        raw_class[yi] = cid;
                        members.push(yi as u32);
                    }
                }
            }
            raw.push(members);
        }
        let order = g.order();
        let mut classes: Vec<(ConjClass, Vec<u32>)> = raw
            .into_iter()
            .map(|members| {
                let rep = members
                    .iter()
                    .map(|&i| &elements.elements[i as usize])
                    .min()
                    .unwrap()
                    .clone();
                let size = members.len() as u128;
                let cls = ConjClass {
                    element_order: rep.order(),
                    representative: rep,
                    size,
                    centralizer_order: order / size,
                };
                (cls, members)
            })
            .collect();
        classes.sort_by(|a, b| {
            (a.0.element_order, a.0.size, &a.0.representative).cmp(&(
                b.0.element_order,
                b.0.size,
                &b.0.representative,
            ))
        });
        let mut class_of_element = vec![0u32; n];
        for (ci, (_, members)) in classes.iter().enumerate() {
            for &m in members {
                class_of_element[m as usize] = ci as u32;
            }
        }
        let classes: Vec<ConjClass> = classes.into_iter().map(|(c, _)| c).collect();
        let inverse = classes
            .iter()
            .map(|c| {
                let inv = c.representative.inverse();
                class_of_element[elements.index[&inv] as usize] as usize
            })
            .collect();
        Ok(ClassData {
            classes,
            elements,
            class_of_element,
            inverse,
        })
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of(&self, g: &Perm) -> Result<usize> {
        let i = self.elements.index.get(g).ok_or(Error::NotInGroup)?;
        Ok(self.class_of_element[*i as usize] as usize)
    }

    pub fn inverse_class(&self, i: usize) -> usize {
        self.inverse[i]
    }

    /// Class of `rep_i^k`.
    pub fn power_class(&self, i: usize, k: u64) -> usize {
        let g = self.classes[i].representative.pow(k);
        self.class_of(&g).expect("power of a group element")
    }

    /// Iterator over the members of class `i`.
    pub fn members(&self, i: usize) -> impl Iterator<Item = &Perm> + '_ {
        self.class_of_element
            .iter()
            .enumerate()
            .filter(move |(_, &c)| c as usize == i)
            .map(move |(e, _)| &self.elements.elements[e])
    }

    /// Member lists for every class, computed in one pass.
    pub fn all_members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.classes.len()];
        for (e, &c) in self.class_of_element.iter().enumerate() {
            out[c as usize].push(e);
        }
        out
    }

    pub(crate) fn element(&self, e: usize) -> &Perm {
        &self.elements.elements[e]
    }

    pub fn is_p_regular(&self, i: usize, p: u64) -> bool {
        !self.classes[i].element_order.is_multiple_of(p)
    }

    pub fn p_regular_classes(&self, p: u64) -> Vec<usize> {
        (0..self.classes.len()).filter(|&i| self.is_p_regular(i, p)).collect()
    }
}

/// Class multiplication coefficients `a[j][i][k] = #{(x,y) in K_i x K_j : xy = z_k}`
/// for one fixed `j`, with `z_k` the class representative.
pub fn class_mult_column(cd: &ClassData, members: &[Vec<usize>], j: usize) -> Vec<Vec<u64>> {
    let r = cd.len();
    let mut out = vec![vec![0u64; r]; r];
    for (k, row) in (0..r).map(|k| (k, cd.classes[k].representative.clone())) {
        for &y in &members[j] {
            let x = &row * &cd.element(y).inverse();
            let i = cd.class_of(&x).expect("closed under products");
            out[i][k] += 1;
        }
    }
    out
}

/// A single coefficient `a_{ijk}`.
pub fn class_mult_coefficient(g: &PermGroup, i: usize, j: usize, k: usize) -> Result<u64> {
    let cd = g.class_data(&Limits::default())?;
    let members = cd.all_members();
    let z = &cd.classes[k].representative;
    let mut count = 0;
    for &y in &members[j] {
        let x = z * &cd.element(y).inverse();
        if cd.class_of(&x)? == i {
            count += 1;
        }
    }
    Ok(count)
}
