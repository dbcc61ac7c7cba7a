//! Exact fields and the linear algebra shared by all of them.

pub mod cyclo;
pub mod prime;
pub mod residue;

pub use cyclo::{Cyclo, CycloField};
pub use prime::PrimeField;
pub use residue::{ModPContext, ResidueField};

/// Arithmetic of a field whose elements need context (a modulus, tables).
pub trait FieldOps {
    type Elem: Clone + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse of a nonzero element.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn row_reduce<F: FieldOps>(f: &F, m: &mut [Vec<F::Elem>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !f.is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(r, p);
        let inv = f.inv(&m[r][c]);
        for x in m[r].iter_mut() {
            *x = f.mul(x, &inv);
        }
        for i in 0..rows {
            if i != r && !f.is_zero(&m[i][c]) {
                let factor = m[i][c].clone();
                for j in c..cols {
                    let t = f.mul(&factor, &m[r][j]);
                    m[i][j] = f.sub(&m[i][j], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: FieldOps>(f: &F, m: &[Vec<F::Elem>]) -> usize {
    let mut work = m.to_vec();
    row_reduce(f, &mut work).len()
}

/// Basis of `{v : m v = 0}`.
pub fn nullspace<F: FieldOps>(f: &F, m: &[Vec<F::Elem>], cols: usize) -> Vec<Vec<F::Elem>> {
    let mut work = m.to_vec();
    let pivots = row_reduce(f, &mut work);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![f.zero(); cols];
            v[fc] = f.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(&work[r][fc]);
            }
            v
        })
        .collect()
}

/// Coefficients `c` with `sum c_i basis_i = v`, if `v` lies in the span of
/// the linearly independent rows `basis`.
pub fn solve_in_span<F: FieldOps>(f: &F, basis: &[Vec<F::Elem>], v: &[F::Elem]) -> Option<Vec<F::Elem>> {
    let k = basis.len();
    let n = v.len();
    // columns are the basis vectors, augmented by v
    let mut m: Vec<Vec<F::Elem>> = (0..n)
        .map(|i| {
            let mut row: Vec<F::Elem> = basis.iter().map(|b| b[i].clone()).collect();
            row.push(v[i].clone());
            row
        })
        .collect();
    let pivots = row_reduce(f, &mut m);
    if pivots.contains(&k) {
        return None;
    }
    let mut c = vec![f.zero(); k];
    for (r, &pc) in pivots.iter().enumerate() {
        c[pc] = m[r][k].clone();
    }
    Some(c)
}

/// `a * b` for matrices over `f`.
pub fn mat_mul<F: FieldOps>(f: &F, a: &[Vec<F::Elem>], b: &[Vec<F::Elem>]) -> Vec<Vec<F::Elem>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(f.zero(), |acc, k| {
                        if f.is_zero(&row[k]) {
                            acc
                        } else {
                            f.add(&acc, &f.mul(&row[k], &b[k][j]))
                        }
                    })
                })
                .collect()
        })
        .collect()
}
