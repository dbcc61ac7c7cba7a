//! Centralizers, normalizers, conjugacy tests and Sylow subgroups.
//!
//! All of these are stabilizer computations for a conjugation action: the orbit
//! is enumerated with a transversal and Schreier generators are sifted into a
//! growing subgroup until its order reaches `|G| / |orbit|`.

use std::collections::HashMap;
use std::hash::Hash;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{is_prime, Limits, PermGroup, SubgroupHandle};
use crate::error::{Error, Result};
use crate::perm::Perm;

struct Orbit<T> {
    points: Vec<T>,
    index: HashMap<T, usize>,
    transversal: Vec<Perm>,
}

fn orbit<T, F>(g: &PermGroup, start: T, act: &F) -> Orbit<T>
where
    T: Clone + Eq + Hash,
    F: Fn(&T, &Perm) -> T,
{
    let mut points = vec![start.clone()];
    let mut index = HashMap::from([(start, 0usize)]);
    let mut transversal = vec![g.identity()];
    let mut head = 0;
    while head < points.len() {
        let cur = points[head].clone();
        let t = transversal[head].clone();
        head += 1;
        for s in g.generators() {
            let next = act(&cur, s);
            if !index.contains_key(&next) {
                index.insert(next.clone(), points.len());
                points.push(next);
                transversal.push(&t * s);
            }
        }
    }
    Orbit {
        points,
        index,
        transversal,
    }
}

fn stabilizer<T, F>(g: &PermGroup, start: T, act: F) -> Result<PermGroup>
where
    T: Clone + Eq + Hash,
    F: Fn(&T, &Perm) -> T,
{
    let orb = orbit(g, start, &act);
    let target = g.order() / orb.points.len() as u128;
    let mut stab = PermGroup::trivial(g.degree());
    'outer: for (pi, pt) in orb.points.iter().enumerate() {
        for s in g.generators() {
            if stab.order() == target {
                break 'outer;
            }
            let img = act(pt, s);
            let ti = orb.index[&img];
            let schreier = &(&orb.transversal[pi] * s) * &orb.transversal[ti].inverse();
            if !stab.contains(&schreier) {
                stab = stab.join_elements(&[schreier])?;
            }
        }
    }
    if stab.order() != target {
        return Err(Error::InternalInconsistency(format!(
            "stabilizer order {} differs from |G|/|orbit| = {target}",
            stab.order()
        )));
    }
    Ok(stab)
}

/// Canonical key of a subgroup: its sorted element list.
pub(crate) fn subgroup_key(h: &PermGroup) -> Result<Vec<Perm>> {
    let mut e = h.elements()?;
    e.sort_unstable();
    Ok(e)
}

fn conjugate_key(key: &[Perm], g: &Perm) -> Vec<Perm> {
    let mut out: Vec<Perm> = key.iter().map(|x| x.conjugate_by(g)).collect();
    out.sort_unstable();
    out
}

pub fn centralizer_of_element(g: &PermGroup, x: &Perm) -> Result<SubgroupHandle> {
    stabilizer(g, x.clone(), |y, s| y.conjugate_by(s))
}

/// `C_g(h)`, intersecting element centralizers generator by generator.
pub fn centralizer(g: &PermGroup, h: &PermGroup) -> Result<SubgroupHandle> {
    let mut c = g.clone();
    for x in h.generators() {
        if c.generators().iter().all(|s| s.commutes_with(x)) {
            continue;
        }
        c = centralizer_of_element(&c, x)?;
    }
    Ok(c)
}

pub fn normalizer(g: &PermGroup, h: &PermGroup) -> Result<SubgroupHandle> {
    if h.is_normalized_by(g) {
        return Ok(g.clone());
    }
    let key = subgroup_key(h)?;
    stabilizer(g, key, |k, s| conjugate_key(k, s))
}

/// Returns `x` with `a^x = b` if the subgroups are conjugate in `g`.
pub fn is_conjugate_subgroups(g: &PermGroup, a: &PermGroup, b: &PermGroup) -> Result<Option<Perm>> {
    if a.order() != b.order() {
        return Ok(None);
    }
    if a.same_group(b) {
        return Ok(Some(g.identity()));
    }
    if a.is_abelian() != b.is_abelian() || cycle_type_profile(a)? != cycle_type_profile(b)? {
        return Ok(None);
    }
    let ka = subgroup_key(a)?;
    let kb = subgroup_key(b)?;
    let orb = orbit(g, ka, &|k: &Vec<Perm>, s: &Perm| conjugate_key(k, s));
    Ok(orb.index.get(&kb).map(|&i| orb.transversal[i].clone()))
}

/// Conjugating element for two tuples, if any: `a_i^x = b_i` for all `i`.
pub fn conjugate_tuples(g: &PermGroup, a: &[Perm], b: &[Perm]) -> Option<Perm> {
    if a.len() != b.len() {
        return None;
    }
    if a.iter().zip(b).any(|(x, y)| x.cycle_type() != y.cycle_type()) {
        return None;
    }
    let orb = orbit(g, a.to_vec(), &|t: &Vec<Perm>, s: &Perm| {
        t.iter().map(|x| x.conjugate_by(s)).collect()
    });
    orb.index.get(b).map(|&i| orb.transversal[i].clone())
}

fn cycle_type_profile(h: &PermGroup) -> Result<Vec<Vec<usize>>> {
    let mut v: Vec<Vec<usize>> = h.elements()?.iter().map(Perm::cycle_type).collect();
    v.sort_unstable();
    Ok(v)
}

/// A Sylow `p`-subgroup grown one `p`-element at a time inside successive normalizers.
pub fn sylow_subgroup(g: &PermGroup, p: u64, seed: u64) -> Result<SubgroupHandle> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let target = g.p_part_of_order(p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut h = PermGroup::trivial(g.degree());
    while h.order() < target {
        let n = normalizer(g, &h)?;
        let mut found = None;
        for _ in 0..256 {
            let (xp, _) = n.random_element(&mut rng).p_parts(p);
            if !h.contains(&xp) {
                found = Some(xp);
                break;
            }
        }
        if found.is_none() {
            let elems = n.elements()?;
            found = elems
                .iter()
                .map(|x| x.p_parts(p).0)
                .find(|xp| !h.contains(xp));
        }
        let x = found.ok_or_else(|| {
            Error::InternalInconsistency("normalizer of a non-Sylow p-subgroup has no new p-element".into())
        })?;
        h = h.join_elements(&[x])?;
        if !h.is_p_group(p) {
            return Err(Error::InternalInconsistency("Sylow search left the p-group".into()));
        }
    }
    Ok(h)
}

/// `O^p(G)`: normal closure of the `p`-regular class representatives.
pub fn o_p_residual(g: &PermGroup, p: u64) -> Result<SubgroupHandle> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let cd = g.class_data(&Limits::default())?;
    let seeds: Vec<Perm> = cd
        .classes
        .iter()
        .filter(|c| c.element_order % p != 0 && c.element_order > 1)
        .map(|c| c.representative.clone())
        .collect();
    let n = g.normal_closure(&seeds)?;
    if !super::is_power_of((g.order() / n.order()) as u64, p) {
        return Err(Error::InternalInconsistency("G/O^p(G) is not a p-group".into()));
    }
    Ok(n)
}

/// `C_sub(actors)`: elements of `sub` commuting with every actor.
pub fn fixed_points(sub: &PermGroup, actors: &PermGroup) -> Result<SubgroupHandle> {
    if !sub.is_normalized_by(actors) {
        return Err(Error::NotNormalized);
    }
    centralizer(sub, actors)
}

pub fn intersection(a: &PermGroup, b: &PermGroup) -> Result<SubgroupHandle> {
    let (small, big) = if a.order() <= b.order() { (a, b) } else { (b, a) };
    let keep: Vec<Perm> = small.elements()?.into_iter().filter(|x| big.contains(x)).collect();
    PermGroup::new(a.degree(), keep)
}

/// Product `AB` of two subgroups when one normalizes the other.
pub fn product(a: &PermGroup, b: &PermGroup) -> Result<SubgroupHandle> {
    a.join(b)
}

/// Permutation action of `g` on the right cosets of `n`; for normal `n` this
/// realizes `g/n`.
pub struct CosetAction {
    pub image: PermGroup,
    coset_index: HashMap<Perm, usize>,
    normal_elements: Vec<Perm>,
    reps: Vec<Perm>,
}

impl CosetAction {
    pub fn new(g: &PermGroup, n: &PermGroup) -> Result<Self> {
        let normal_elements = n.elements()?;
        let mut act = CosetAction {
            image: PermGroup::trivial(1),
            coset_index: HashMap::new(),
            normal_elements,
            reps: vec![g.identity()],
        };
        act.coset_index.insert(act.key(&g.identity()), 0);
        let mut head = 0;
        while head < act.reps.len() {
            let r = act.reps[head].clone();
            head += 1;
            for s in g.generators() {
                let y = &r * s;
                let k = act.key(&y);
                if !act.coset_index.contains_key(&k) {
                    act.coset_index.insert(k, act.reps.len());
                    act.reps.push(y);
                }
            }
        }
        let gens: Vec<Perm> = g.generators().iter().map(|s| act.map(s)).collect();
        act.image = PermGroup::new(act.reps.len(), gens)?;
        Ok(act)
    }

    fn key(&self, x: &Perm) -> Perm {
        self.normal_elements.iter().map(|m| m * x).min().unwrap()
    }

    pub fn num_cosets(&self) -> usize {
        self.reps.len()
    }

    /// Image of an element of `g` in the coset action.
    pub fn map(&self, x: &Perm) -> Perm {
        let images = self
            .reps
            .iter()
            .map(|r| self.coset_index[&self.key(&(r * x))] as u32)
            .collect();
        Perm::from_images_unchecked(images)
    }

    /// Coset representative for each point of the action.
    pub fn representatives(&self) -> &[Perm] {
        &self.reps
    }
}

/// Quotient `g/n` for `n` normal in `g`, with an element map.
pub struct Quotient {
    pub group: PermGroup,
    action: CosetAction,
}

impl Quotient {
    pub fn new(g: &PermGroup, n: &PermGroup) -> Result<Self> {
        if !n.is_normal_in(g) {
            return Err(Error::NotNormalized);
        }
        let action = CosetAction::new(g, n)?;
        let group = action.image.clone();
        if group.order() * n.order() != g.order() {
            return Err(Error::InternalInconsistency("quotient order mismatch".into()));
        }
        Ok(Quotient { group, action })
    }

    pub fn map(&self, x: &Perm) -> Perm {
        self.action.map(x)
    }

    /// A preimage in `g` of a quotient element.
    pub fn lift(&self, y: &Perm) -> Perm {
        self.action.reps[y.image(0)].clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(deg: usize, s: &str) -> Perm {
        Perm::parse(deg, s).unwrap()
    }

    fn sym(n: usize) -> PermGroup {
        let cyc: Vec<usize> = (0..n).collect();
        PermGroup::new(
            n,
            vec![Perm::from_cycles(n, &[cyc]).unwrap(), Perm::from_cycles(n, &[vec![0, 1]]).unwrap()],
        )
        .unwrap()
    }

    fn brute_centralizer_order(g: &PermGroup, x: &Perm) -> u128 {
        g.elements().unwrap().iter().filter(|y| y.commutes_with(x)).count() as u128
    }

    #[test]
    fn centralizer_of_double_transposition_in_s4() {
        let g = sym(4);
        let x = p(4, "(1,2)(3,4)");
        let c = centralizer_of_element(&g, &x).unwrap();
        assert_eq!(c.order(), 8);
        assert_eq!(c.order(), brute_centralizer_order(&g, &x));
        assert!(c.generators().iter().all(|y| y.commutes_with(&x)));
    }

    #[test]
    fn centralizer_of_trivial_is_whole_group() {
        let g = sym(4);
        let c = centralizer(&g, &PermGroup::trivial(4)).unwrap();
        assert!(c.same_group(&g));
    }

    #[test]
    fn normalizer_of_transposition_subgroup() {
        let g = sym(4);
        let h = PermGroup::new(4, vec![p(4, "(1,2)")]).unwrap();
        assert_eq!(normalizer(&g, &h).unwrap().order(), 4);
        assert!(normalizer(&g, &g).unwrap().same_group(&g));
    }

    #[test]
    fn sylow_orders() {
        let g = sym(4);
        let s = sylow_subgroup(&g, 2, 7).unwrap();
        assert_eq!(s.order(), 8);
        let s3 = sylow_subgroup(&g, 3, 7).unwrap();
        assert_eq!(s3.order(), 3);
    }

    #[test]
    fn klein_subgroups_conjugacy() {
        let g = sym(4);
        let a = PermGroup::new(4, vec![p(4, "(1,2)"), p(4, "(3,4)")]).unwrap();
        let b = PermGroup::new(4, vec![p(4, "(1,3)"), p(4, "(2,4)")]).unwrap();
        let v = PermGroup::new(4, vec![p(4, "(1,2)(3,4)"), p(4, "(1,3)(2,4)")]).unwrap();
        let x = is_conjugate_subgroups(&g, &a, &b).unwrap().unwrap();
        let conj = PermGroup::new(4, a.generators().iter().map(|y| y.conjugate_by(&x)).collect()).unwrap();
        assert!(conj.same_group(&b));
        assert!(is_conjugate_subgroups(&g, &v, &a).unwrap().is_none());
    }

    #[test]
    fn residual_of_s4_is_a4() {
        let r = o_p_residual(&sym(4), 2).unwrap();
        assert_eq!(r.order(), 12);
    }

    #[test]
    fn quotient_of_s4_by_klein_is_s3() {
        let g = sym(4);
        let v = PermGroup::new(4, vec![p(4, "(1,2)(3,4)"), p(4, "(1,3)(2,4)")]).unwrap();
        let q = Quotient::new(&g, &v).unwrap();
        assert_eq!(q.group.order(), 6);
        assert!(!q.group.is_abelian());
        let a = p(4, "(1,2,3)");
        let b = p(4, "(1,2)");
        assert_eq!(q.map(&(&a * &b)), &q.map(&a) * &q.map(&b));
        assert!(q.map(&p(4, "(1,2)(3,4)")).is_identity());
    }
}
