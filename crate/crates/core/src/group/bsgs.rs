//! Deterministic Schreier–Sims.

use rand::Rng;

use crate::error::{Error, Result};
use crate::perm::Perm;

#[derive(Clone, Debug)]
struct Level {
    base_point: usize,
    /// Strong generators fixing every earlier base point.
    gens: Vec<Perm>,
    orbit: Vec<usize>,
    /// `transversal[b]` maps the base point to `b`.
    transversal: Vec<Option<Perm>>,
}

impl Level {
    fn new(base_point: usize, degree: usize) -> Self {
        let mut lvl = Level {
            base_point,
            gens: Vec::new(),
            orbit: Vec::new(),
            transversal: vec![None; degree],
        };
        lvl.recompute_orbit(degree);
        lvl
    }

    fn recompute_orbit(&mut self, degree: usize) {
        self.transversal = vec![None; degree];
        self.transversal[self.base_point] = Some(Perm::identity(degree));
        self.orbit = vec![self.base_point];
        let mut head = 0;
        while head < self.orbit.len() {
            let beta = self.orbit[head];
            head += 1;
            for s in &self.gens {
                let gamma = s.image(beta);
                if self.transversal[gamma].is_none() {
                    let u = self.transversal[beta].as_ref().unwrap() * s;
                    self.transversal[gamma] = Some(u);
                    self.orbit.push(gamma);
                }
            }
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct StabChain {
    levels: Vec<Level>,
}

impl StabChain {
    pub fn build(degree: usize, gens: &[Perm], prefix: &[usize]) -> Self {
        let mut chain = StabChain { levels: Vec::new() };
        for &b in prefix {
            if b < degree && !chain.levels.iter().any(|l| l.base_point == b) {
                chain.levels.push(Level::new(b, degree));
            }
        }
        for g in gens {
            if chain.levels.iter().all(|l| g.image(l.base_point) == l.base_point) {
                let moved = g.support()[0];
                chain.levels.push(Level::new(moved, degree));
            }
        }
        if chain.levels.is_empty() {
            return chain;
        }
        // gens fixing the first i base points go into level i
        for i in 0..chain.levels.len() {
            let fixed: Vec<usize> = chain.levels[..i].iter().map(|l| l.base_point).collect();
            let lvl_gens: Vec<Perm> = gens
                .iter()
                .filter(|g| fixed.iter().all(|&b| g.image(b) == b))
                .cloned()
                .collect();
            chain.levels[i].gens = lvl_gens;
            chain.levels[i].recompute_orbit(degree);
        }
        chain.complete(degree);
        chain.drop_trivial_tail();
        chain
    }

    fn complete(&mut self, degree: usize) {
        let mut i = self.levels.len() as isize - 1;
        while i >= 0 {
            let li = i as usize;
            let mut restart = None;
            'scan: for oi in 0..self.levels[li].orbit.len() {
                let beta = self.levels[li].orbit[oi];
                for si in 0..self.levels[li].gens.len() {
                    let lvl = &self.levels[li];
                    let s = &lvl.gens[si];
                    let ub = lvl.transversal[beta].as_ref().unwrap();
                    let ubs = ub * s;
                    let gamma = s.image(beta);
                    let ug = lvl.transversal[gamma].as_ref().unwrap();
                    if &ubs == ug {
                        continue;
                    }
                    let schreier = &ubs * &ug.inverse();
                    let (residue, j) = self.sift_from(schreier, li + 1);
                    if residue.is_identity() {
                        continue;
                    }
                    if j == self.levels.len() {
                        let moved = residue.support()[0];
                        self.levels.push(Level::new(moved, degree));
                    }
                    for l in li + 1..=j {
                        self.levels[l].gens.push(residue.clone());
                        self.levels[l].recompute_orbit(degree);
                    }
                    restart = Some(j);
                    break 'scan;
                }
            }
            match restart {
                Some(j) => i = j as isize,
                None => i -= 1,
            }
        }
    }

    fn drop_trivial_tail(&mut self) {
        while self.levels.last().is_some_and(|l| l.orbit.len() == 1) {
            self.levels.pop();
        }
    }

    /// Strips `g` through levels `start..`, returning the residue and the level
    /// at which stripping stopped (`levels.len()` if it ran through).
    fn sift_from(&self, mut g: Perm, start: usize) -> (Perm, usize) {
        for (l, lvl) in self.levels.iter().enumerate().skip(start) {
            let beta = g.image(lvl.base_point);
            match &lvl.transversal[beta] {
                Some(u) => g = &g * &u.inverse(),
                None => return (g, l),
            }
        }
        (g, self.levels.len())
    }

    pub fn contains(&self, g: &Perm) -> bool {
        let (residue, _) = self.sift_from(g.clone(), 0);
        residue.is_identity()
    }

    pub fn order(&self) -> Result<u128> {
        let mut n: u128 = 1;
        for l in &self.levels {
            n = n.checked_mul(l.orbit.len() as u128).ok_or(Error::CapExceeded {
                what: "group order",
                value: u128::MAX,
                cap: u128::MAX,
            })?;
        }
        Ok(n)
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base_point).collect()
    }

    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn strong_generators(&self) -> Vec<Perm> {
        let mut out: Vec<Perm> = Vec::new();
        for l in &self.levels {
            for g in &l.gens {
                if !out.contains(g) {
                    out.push(g.clone());
                }
            }
        }
        out
    }

    /// Every element exactly once, as products of transversal elements.
    pub fn enumerate(&self, degree: usize) -> Vec<Perm> {
        let mut elems = vec![Perm::identity(degree)];
        for lvl in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(elems.len() * lvl.orbit.len());
            for x in &elems {
                for &b in &lvl.orbit {
                    next.push(x * lvl.transversal[b].as_ref().unwrap());
                }
            }
            elems = next;
        }
        elems
    }

    pub fn random_element<R: Rng + ?Sized>(&self, degree: usize, rng: &mut R) -> Perm {
        let mut g = Perm::identity(degree);
        for lvl in self.levels.iter().rev() {
            let b = lvl.orbit[rng.gen_range(0..lvl.orbit.len())];
            g = &g * lvl.transversal[b].as_ref().unwrap();
        }
        g
    }
}
