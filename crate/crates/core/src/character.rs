//! Ordinary character tables by the Dixon–Schneider method.
//!
//! Central characters are found as common eigenvectors of the class matrices
//! over a prime field GF(l) with `l = 1 mod exp(G)`. Values are lifted to exact
//! cyclotomic numbers from eigenvalue multiplicities and both orthogonality
//! relations are checked before a table is returned.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::prime::pow_mod;
use crate::field::{nullspace, solve_in_span, Cyclo, FieldOps, PrimeField};
use crate::group::classes::class_mult_column;
use crate::group::{is_prime, prime_factors, ClassData, ConjClass, Limits, PermGroup};

pub struct CharacterTable {
    group: PermGroup,
    classes: Arc<ClassData>,
    order: u128,
    exponent: u64,
    /// `power_maps[q][k]` is the class of `g_k^q`.
    pub power_maps: BTreeMap<u64, Vec<usize>>,
    degrees: Vec<u64>,
    values: Vec<Vec<Cyclo>>,
}

impl CharacterTable {
    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn class_data(&self) -> &ClassData {
        &self.classes
    }

    pub fn classes(&self) -> &[ConjClass] {
        &self.classes.classes
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn num_characters(&self) -> usize {
        self.values.len()
    }

    pub fn group_order(&self) -> u128 {
        self.order
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn degree(&self, chi: usize) -> u64 {
        self.degrees[chi]
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn value(&self, chi: usize, class: usize) -> &Cyclo {
        &self.values[chi][class]
    }

    pub fn row(&self, chi: usize) -> &[Cyclo] {
        &self.values[chi]
    }

    pub fn inverse_class(&self, class: usize) -> usize {
        self.classes.inverse_class(class)
    }

    pub fn class_size(&self, class: usize) -> u128 {
        self.classes.classes[class].size
    }

    /// Both orthogonality relations, exactly.
    pub fn check_orthogonality(&self) -> Result<()> {
        check_orthogonality(&self.classes, self.order, &self.values)
    }
}

pub fn character_table(g: &PermGroup) -> Result<CharacterTable> {
    character_table_with(g, &Limits::default())
}

pub fn character_table_with(g: &PermGroup, limits: &Limits) -> Result<CharacterTable> {
    let cd = g.class_data(limits)?;
    let r = cd.len();
    if r > limits.max_table_classes {
        return Err(Error::CapExceeded {
            what: "number of classes for a character table",
            value: r as u128,
            cap: limits.max_table_classes as u128,
        });
    }
    let order = g.order();
    let exponent = cd
        .classes
        .iter()
        .fold(1u64, |acc, c| num_integer::lcm(acc, c.element_order));
    let field = PrimeField::new(choose_prime(order, exponent));

    let omegas = central_characters_mod(&cd, &field)?;
    let zeta_e = field.pow(field.primitive_root(), (field.modulus - 1) / exponent);

    // power classes of each representative
    let powers: Vec<Vec<usize>> = (0..r)
        .map(|k| {
            let o = cd.classes[k].element_order;
            (0..o).map(|t| cd.power_class(k, t)).collect()
        })
        .collect();

    let mut rows: Vec<(u64, Vec<Cyclo>)> = Vec::with_capacity(r);
    for omega in &omegas {
        let d = degree_from_omega(&cd, &field, omega, order)?;
        let chi_mod: Vec<u64> = (0..r)
            .map(|k| {
                let size = field.from_u128(cd.classes[k].size);
                field.mul(&field.mul(&omega[k], &d), &field.inv(&size))
            })
            .collect();
        let mut row = Vec::with_capacity(r);
        for k in 0..r {
            row.push(lift_value(&field, zeta_e, exponent, &powers[k], &chi_mod, d)?);
        }
        rows.push((d, row));
    }

    let one = Cyclo::one();
    let keyed: Vec<_> = rows
        .into_iter()
        .map(|(d, row)| {
            let trivial = row.iter().all(|v| *v == one);
            let key: Vec<_> = row.iter().map(|v| v.key_at(exponent)).collect();
            ((d, !trivial, key), d, row)
        })
        .collect();
    let mut keyed = keyed;
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    let degrees: Vec<u64> = keyed.iter().map(|k| k.1).collect();
    let values: Vec<Vec<Cyclo>> = keyed
        .into_iter()
        .map(|k| k.2.into_iter().map(|v| v.normalized()).collect())
        .collect();

    check_orthogonality(&cd, order, &values)?;

    let mut power_maps = BTreeMap::new();
    for q in prime_factors(exponent as u128) {
        power_maps.insert(q, (0..r).map(|k| cd.power_class(k, q)).collect());
    }
    Ok(CharacterTable {
        group: g.clone(),
        classes: cd,
        order,
        exponent,
        power_maps,
        degrees,
        values,
    })
}

/// Least prime `l = 1 mod e` with `l^2 > 4|G|`.
fn choose_prime(order: u128, exponent: u64) -> u64 {
    let mut l = exponent + 1;
    loop {
        if (l as u128) * (l as u128) > 4 * order && is_prime(l) {
            return l;
        }
        l += exponent;
    }
}

/// Central characters mod `l`, one vector per irreducible, normalized at the identity class.
fn central_characters_mod(cd: &ClassData, f: &PrimeField) -> Result<Vec<Vec<u64>>> {
    let r = cd.len();
    let members = cd.all_members();
    let identity: Vec<Vec<u64>> = (0..r)
        .map(|i| (0..r).map(|k| u64::from(i == k)).collect())
        .collect();
    let mut spaces: Vec<Vec<Vec<u64>>> = vec![identity];
    for j in 1..r {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let mj: Vec<Vec<u64>> = class_mult_column(cd, &members, j)
            .into_iter()
            .map(|row| row.into_iter().map(|a| a % f.modulus).collect())
            .collect();
        let mut next = Vec::with_capacity(spaces.len());
        for basis in spaces {
            if basis.len() == 1 {
                next.push(basis);
                continue;
            }
            next.extend(split_space(f, &mj, &basis)?);
        }
        spaces = next;
    }
    if spaces.len() != r || spaces.iter().any(|s| s.len() != 1) {
        return Err(Error::InternalInconsistency(
            "class matrices did not split the center into lines".into(),
        ));
    }
    spaces
        .into_iter()
        .map(|mut s| {
            let v = s.pop().unwrap();
            if v[0] == 0 {
                return Err(Error::InternalInconsistency("central character vanishes at 1".into()));
            }
            let inv = f.inv(&v[0]);
            Ok(v.iter().map(|x| f.mul(x, &inv)).collect())
        })
        .collect()
}

/// Splits the span of `basis` (an `M`-invariant subspace) into eigenspaces of `M`.
fn split_space(f: &PrimeField, m: &[Vec<u64>], basis: &[Vec<u64>]) -> Result<Vec<Vec<Vec<u64>>>> {
    let d = basis.len();
    let r = m.len();
    // restricted[s][t]: M b_s = sum_t restricted[s][t] b_t
    let mut restricted = Vec::with_capacity(d);
    for b in basis {
        let image: Vec<u64> = (0..r)
            .map(|i| (0..r).fold(0, |acc, k| f.add(&acc, &f.mul(&m[i][k], &b[k]))))
            .collect();
        let coeffs = solve_in_span(f, basis, &image)
            .ok_or_else(|| Error::InternalInconsistency("subspace not invariant under a class matrix".into()))?;
        restricted.push(coeffs);
    }
    // eigenvectors c of the transpose give eigenvectors sum c_s b_s of M
    let transposed: Vec<Vec<u64>> = (0..d).map(|t| (0..d).map(|s| restricted[s][t]).collect()).collect();
    let poly = char_poly(f, &transposed);
    let mut out = Vec::new();
    let mut total = 0;
    for lambda in 0..f.modulus {
        if eval_poly(f, &poly, lambda) != 0 {
            continue;
        }
        let shifted: Vec<Vec<u64>> = transposed
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, x)| if i == j { f.sub(x, &lambda) } else { *x })
                    .collect()
            })
            .collect();
        let ns = nullspace(f, &shifted, d);
        total += ns.len();
        let vecs: Vec<Vec<u64>> = ns
            .iter()
            .map(|c| {
                (0..r)
                    .map(|k| (0..d).fold(0, |acc, s| f.add(&acc, &f.mul(&c[s], &basis[s][k]))))
                    .collect()
            })
            .collect();
        out.push(vecs);
        if total == d {
            break;
        }
    }
    if total != d {
        return Err(Error::InternalInconsistency("class matrix not diagonalizable over GF(l)".into()));
    }
    Ok(out)
}

/// Characteristic polynomial via reduction to Hessenberg form; lowest degree first.
fn char_poly(f: &PrimeField, a: &[Vec<u64>]) -> Vec<u64> {
    let n = a.len();
    let mut h: Vec<Vec<u64>> = a.to_vec();
    for m in 1..n.saturating_sub(1) {
        let Some(i) = (m..n).find(|&i| h[i][m - 1] != 0) else {
            continue;
        };
        if i != m {
            h.swap(i, m);
            for row in h.iter_mut() {
                row.swap(i, m);
            }
        }
        let inv = f.inv(&h[m][m - 1]);
        for i in m + 1..n {
            let u = f.mul(&h[i][m - 1], &inv);
            if u == 0 {
                continue;
            }
            for j in 0..n {
                let t = f.mul(&u, &h[m][j]);
                h[i][j] = f.sub(&h[i][j], &t);
            }
            for row in h.iter_mut() {
                let t = f.mul(&u, &row[i]);
                row[m] = f.add(&row[m], &t);
            }
        }
    }
    let mut p: Vec<Vec<u64>> = vec![vec![1]];
    for m in 0..n {
        // (x - h[m][m]) p_m
        let mut next = vec![0u64; m + 2];
        for (k, &c) in p[m].iter().enumerate() {
            next[k + 1] = f.add(&next[k + 1], &c);
            next[k] = f.sub(&next[k], &f.mul(&h[m][m], &c));
        }
        let mut t = 1u64;
        for i in (0..m).rev() {
            t = f.mul(&t, &h[i + 1][i]);
            let coef = f.mul(&h[i][m], &t);
            if coef != 0 {
                for (k, &c) in p[i].iter().enumerate() {
                    next[k] = f.sub(&next[k], &f.mul(&coef, &c));
                }
            }
        }
        p.push(next);
    }
    p.pop().unwrap()
}

fn eval_poly(f: &PrimeField, poly: &[u64], x: u64) -> u64 {
    poly.iter().rev().fold(0, |acc, c| f.add(&f.mul(&acc, &x), c))
}

/// `chi(1)` from `|G| / chi(1)^2 = sum_K omega(K) omega(K^-1) / |K|`.
fn degree_from_omega(cd: &ClassData, f: &PrimeField, omega: &[u64], order: u128) -> Result<u64> {
    let mut s = 0u64;
    for k in 0..cd.len() {
        let size = f.from_u128(cd.classes[k].size);
        let term = f.mul(&f.mul(&omega[k], &omega[cd.inverse_class(k)]), &f.inv(&size));
        s = f.add(&s, &term);
    }
    if s == 0 {
        return Err(Error::InternalInconsistency("degree equation degenerate mod l".into()));
    }
    let target = f.mul(&f.from_u128(order), &f.inv(&s));
    let bound = (order as f64).sqrt() as u64 + 1;
    (1..=bound)
        .find(|&d| d as u128 * d as u128 <= order && f.mul(&d, &d) == target && order.is_multiple_of(d as u128))
        .ok_or_else(|| Error::InternalInconsistency("no admissible character degree".into()))
}

/// Exact value at a class of element order `o` from the values at its powers:
/// `chi(g) = sum_k m_k zeta_o^k` with `m_k = (1/o) sum_t chi(g^t) zeta_o^(-kt)`.
fn lift_value(f: &PrimeField, zeta_e: u64, e: u64, powers: &[usize], chi: &[u64], degree: u64) -> Result<Cyclo> {
    let o = powers.len() as u64;
    let zeta_o = f.pow(zeta_e, e / o);
    let inv_o = f.inv(&(o % f.modulus));
    let mut counts = vec![0i64; o as usize];
    let mut total = 0u64;
    for k in 0..o {
        let mut acc = 0u64;
        for t in 0..o {
            let w = pow_mod(zeta_o, (o - (k * t) % o) % o, f.modulus);
            acc = f.add(&acc, &f.mul(&chi[powers[t as usize]], &w));
        }
        let mk = f.mul(&acc, &inv_o);
        if mk > degree {
            return Err(Error::InternalInconsistency(format!(
                "eigenvalue multiplicity {mk} exceeds degree {degree}"
            )));
        }
        counts[k as usize] = mk as i64;
        total += mk;
    }
    if total != degree {
        return Err(Error::InternalInconsistency("eigenvalue multiplicities do not sum to the degree".into()));
    }
    Ok(Cyclo::from_exponent_counts(o, &counts))
}

fn check_orthogonality(cd: &ClassData, order: u128, values: &[Vec<Cyclo>]) -> Result<()> {
    let r = cd.len();
    if values.len() != r {
        return Err(Error::InternalInconsistency(format!(
            "{} characters for {r} classes",
            values.len()
        )));
    }
    let conj: Vec<Vec<Cyclo>> = values.iter().map(|row| row.iter().map(Cyclo::conj).collect()).collect();
    let g = Cyclo::from_int(i64::try_from(order).map_err(|_| Error::CapExceeded {
        what: "group order",
        value: order,
        cap: i64::MAX as u128,
    })?);
    for a in 0..r {
        for b in a..r {
            let mut s = Cyclo::zero();
            for k in 0..r {
                let term = &values[a][k] * &conj[b][k];
                s = &s + &term.scale_int(cd.classes[k].size as i64);
            }
            let expected = if a == b { g.clone() } else { Cyclo::zero() };
            if s != expected {
                return Err(Error::InternalInconsistency(format!(
                    "row orthogonality fails for characters {a} and {b}"
                )));
            }
        }
    }
    for k in 0..r {
        for l in k..r {
            let mut s = Cyclo::zero();
            for chi in 0..r {
                s = &s + &(&values[chi][k] * &conj[chi][l]);
            }
            let expected = if k == l {
                Cyclo::from_int(cd.classes[k].centralizer_order as i64)
            } else {
                Cyclo::zero()
            };
            if s != expected {
                return Err(Error::InternalInconsistency(format!(
                    "column orthogonality fails for classes {k} and {l}"
                )));
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct ClassExport {
    representative: String,
    size: u128,
    order: u64,
}

#[derive(Serialize)]
struct TableExport<'a> {
    order: u128,
    exponent: u64,
    classes: Vec<ClassExport>,
    power_maps: &'a BTreeMap<u64, Vec<usize>>,
    degrees: &'a [u64],
    values: &'a [Vec<Cyclo>],
}

impl Serialize for CharacterTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TableExport {
            order: self.order,
            exponent: self.exponent,
            classes: self
                .classes
                .classes
                .iter()
                .map(|c| ClassExport {
                    representative: c.representative.to_cycle_string(),
                    size: c.size,
                    order: c.element_order,
                })
                .collect(),
            power_maps: &self.power_maps,
            degrees: &self.degrees,
            values: &self.values,
        }
        .serialize(s)
    }
}

/// `chi(1)` as an exact integer, for callers holding only values.
pub fn degree_of(row: &[Cyclo]) -> Option<u64> {
    row.first()?.to_rational()?.to_integer().to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::recipe::{construct_group, preset, GroupRecipe};

    fn table(r: GroupRecipe) -> CharacterTable {
        character_table(&construct_group(&r).unwrap()).unwrap()
    }

    #[test]
    fn s4_degrees() {
        let t = table(GroupRecipe::symmetric(4));
        assert_eq!(t.degrees(), &[1, 1, 2, 3, 3]);
        assert!(t.row(0).iter().all(|v| *v == Cyclo::one()));
    }

    #[test]
    fn a4_has_cube_roots() {
        let t = table(GroupRecipe::alternating(4));
        assert_eq!(t.degrees(), &[1, 1, 1, 3]);
        let conductors: Vec<u64> = (0..4).map(|k| t.value(1, k).conductor()).collect();
        assert!(conductors.contains(&3));
    }

    #[test]
    fn q4z3_degrees() {
        let t = table(preset("q4z3").unwrap());
        assert_eq!(t.degrees(), &[1, 1, 1, 3, 3, 3, 3, 3]);
    }

    #[test]
    fn a5_irrational_values() {
        let t = table(GroupRecipe::alternating(5));
        assert_eq!(t.degrees(), &[1, 3, 3, 4, 5]);
        let has_sqrt5 = (0..5).any(|k| t.value(1, k).conductor() == 5);
        assert!(has_sqrt5);
    }

    #[test]
    fn trivial_group() {
        let t = table(GroupRecipe::cyclic(1));
        assert_eq!(t.degrees(), &[1]);
    }

    #[test]
    fn hessenberg_char_poly() {
        let f = PrimeField::new(101);
        // [[2,1],[1,2]] has char poly x^2 - 4x + 3
        let p = char_poly(&f, &[vec![2, 1], vec![1, 2]]);
        assert_eq!(p, vec![3, 101 - 4, 1]);
        let p3 = char_poly(&f, &[vec![1, 2, 0], vec![0, 1, 3], vec![4, 0, 1]]);
        // det(xI - A) = (x-1)^3 - 24
        assert_eq!(p3, vec![f.from_i64(-1 - 24), 3, 101 - 3, 1]);
    }
}
