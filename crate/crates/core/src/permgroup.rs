//! Exact permutation groups: deterministic Schreier-Sims base and strong
//! generating sets, membership, orbits and stabilizers, normality and
//! semidirect-product certification, transitivity grades, and the right
//! regular representation of `D_2n`.
//!
//! Orders are arbitrary precision; `Aut(K_{n,n}) = 2(n!)^2` overflows
//! machine words well within desk scale.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::modular_dihedral::DihedralElement;

/// A permutation of `[0, degree)` stored as its image array.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Self { images: (0..degree).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            if x >= images.len() || seen[x] {
                return Err(Error::Invalid("image array is not a bijection".into()));
            }
            seen[x] = true;
        }
        Ok(Self { images })
    }

    /// Build from disjoint cycles; points not mentioned are fixed.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        for cycle in cycles {
            for w in cycle.windows(2) {
                if w[0] >= degree || w[1] >= degree {
                    return Err(Error::PointOutOfRange(w[0].max(w[1]), degree));
                }
                images[w[0]] = w[1];
            }
            if let (Some(&first), Some(&last)) = (cycle.first(), cycle.last()) {
                images[last] = first;
            }
        }
        Self::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self.then(other)` maps `x` to `other(self(x))`.
    pub fn then(&self, other: &Self) -> Self {
        debug_assert_eq!(self.degree(), other.degree());
        Self { images: self.images.iter().map(|&x| other.images[x]).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x] = i;
        }
        Self { images }
    }

    /// Conjugate `self` by `g`: the permutation `x -> g(self(g^{-1}(x)))`.
    pub fn conjugate_by(&self, g: &Self) -> Self {
        g.inverse().then(self).then(g)
    }

    pub fn smallest_moved_point(&self) -> Option<usize> {
        self.images.iter().enumerate().find(|(i, &x)| *i != x).map(|(i, _)| i)
    }
}

/// A permutation group with a base and strong generating set, giving
/// exact order and membership. Construction is deterministic for a fixed
/// generator list.
#[derive(Debug, Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    base: Vec<usize>,
    strong: Vec<Permutation>,
    transversals: Vec<BTreeMap<usize, Permutation>>,
}

impl PermGroup {
    pub fn trivial(degree: usize) -> Self {
        Self {
            degree,
            generators: Vec::new(),
            base: Vec::new(),
            strong: Vec::new(),
            transversals: Vec::new(),
        }
    }

    pub fn from_generators(degree: usize, gens: Vec<Permutation>) -> Result<Self> {
        Self::with_base_hint(degree, gens, &[])
    }

    /// Build with the given points forced to the front of the base
    /// (used to read off point stabilizers).
    pub fn with_base_hint(
        degree: usize,
        gens: Vec<Permutation>,
        hint: &[usize],
    ) -> Result<Self> {
        for g in &gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch(degree, g.degree()));
            }
        }
        for &b in hint {
            if b >= degree {
                return Err(Error::PointOutOfRange(b, degree));
            }
        }
        let mut generators: Vec<Permutation> = Vec::new();
        for g in gens {
            if !g.is_identity() && !generators.contains(&g) {
                generators.push(g);
            }
        }
        let mut group = Self {
            degree,
            generators: generators.clone(),
            base: Vec::new(),
            strong: generators,
            transversals: Vec::new(),
        };
        for &b in hint {
            if !group.base.contains(&b) {
                group.base.push(b);
            }
        }
        group.schreier_sims();
        Ok(group)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn base(&self) -> &[usize] {
        &self.base
    }

    pub fn strong_generators(&self) -> &[Permutation] {
        &self.strong
    }

    pub fn order(&self) -> BigUint {
        let mut ord = BigUint::one();
        for tr in &self.transversals {
            ord *= BigUint::from(tr.len());
        }
        ord
    }

    pub fn order_u128(&self) -> Option<u128> {
        u128::try_from(&self.order()).ok()
    }

    pub fn contains(&self, p: &Permutation) -> Result<bool> {
        if p.degree() != self.degree {
            return Err(Error::DegreeMismatch(self.degree, p.degree()));
        }
        Ok(self.sift(p.clone(), 0).0.is_identity())
    }

    /// Orbit of a point under the group.
    pub fn orbit(&self, x: usize) -> Result<BTreeSet<usize>> {
        if x >= self.degree {
            return Err(Error::PointOutOfRange(x, self.degree));
        }
        Ok(orbit_of(x, &self.generators))
    }

    /// Point stabilizer, satisfying `|G| = |orbit| * |stabilizer|` exactly.
    pub fn stabilizer(&self, x: usize) -> Result<PermGroup> {
        if x >= self.degree {
            return Err(Error::PointOutOfRange(x, self.degree));
        }
        let rebased = Self::with_base_hint(self.degree, self.strong.clone(), &[x])?;
        let stab_gens: Vec<Permutation> = rebased
            .strong
            .iter()
            .filter(|g| g.apply(x) == x)
            .cloned()
            .collect();
        Self::from_generators(self.degree, stab_gens)
    }

    /// True iff the action on ordered pairs of distinct points is transitive.
    pub fn is_two_transitive(&self) -> bool {
        let n = self.degree;
        if n < 2 {
            return false;
        }
        // BFS on ordered pairs from (0, 1)
        let target = n * (n - 1);
        let mut seen = BTreeSet::from([(0usize, 1usize)]);
        let mut queue = VecDeque::from([(0usize, 1usize)]);
        while let Some((a, b)) = queue.pop_front() {
            for g in &self.generators {
                let next = (g.apply(a), g.apply(b));
                if seen.insert(next) {
                    queue.push_back(next);
                }
            }
        }
        seen.len() == target
    }

    pub fn is_transitive(&self) -> bool {
        self.degree > 0 && self.orbit(0).map(|o| o.len() == self.degree).unwrap_or(false)
    }

    /// Enumerate all elements; intended for orders up to ~10^4.
    pub fn elements(&self) -> Vec<Permutation> {
        let mut out = vec![Permutation::identity(self.degree)];
        // every element factors as t_0 . t_1 . ... through the transversals
        for tr in self.transversals.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * tr.len());
            for rep in tr.values() {
                for tail in &out {
                    next.push(tail.then(rep));
                }
            }
            out = next;
        }
        out
    }

    fn sift(&self, mut g: Permutation, from_level: usize) -> (Permutation, usize) {
        for level in from_level..self.base.len() {
            let p = g.apply(self.base[level]);
            match self.transversals[level].get(&p) {
                Some(rep) => g = g.then(&rep.inverse()),
                None => return (g, level),
            }
        }
        (g, self.base.len())
    }

    fn gens_fixing_prefix(&self, level: usize) -> Vec<Permutation> {
        self.strong
            .iter()
            .filter(|g| self.base[..level].iter().all(|&b| g.apply(b) == b))
            .cloned()
            .collect()
    }

    fn rebuild_transversal(&mut self, level: usize) {
        let gens = self.gens_fixing_prefix(level);
        let tr = transversal_of(self.base[level], &gens, self.degree);
        if level < self.transversals.len() {
            self.transversals[level] = tr;
        } else {
            debug_assert_eq!(level, self.transversals.len());
            self.transversals.push(tr);
        }
    }

    fn schreier_sims(&mut self) {
        // make sure every generator moves some base point
        let strong_snapshot = self.strong.clone();
        for g in &strong_snapshot {
            if self.base.iter().all(|&b| g.apply(b) == b) {
                if let Some(p) = g.smallest_moved_point() {
                    self.base.push(p);
                }
            }
        }
        if self.base.is_empty() {
            return;
        }
        for level in 0..self.base.len() {
            self.rebuild_transversal(level);
        }

        // verify levels bottom-up; adding a strong generator at level j
        // restarts verification from j
        let mut level = self.base.len() - 1;
        loop {
            self.rebuild_transversal(level);
            match self.verify_level(level) {
                Some(residue) => {
                    let (residue, stop) = self.sift(residue, level + 1);
                    debug_assert!(!residue.is_identity());
                    if self.base.iter().all(|&b| residue.apply(b) == b) {
                        let p = residue.smallest_moved_point().unwrap();
                        self.base.push(p);
                        self.strong.push(residue);
                        // fresh level at the bottom
                        level = self.base.len() - 1;
                        self.rebuild_transversal(level);
                    } else {
                        self.strong.push(residue);
                        level = stop.min(self.base.len() - 1);
                    }
                }
                None => {
                    if level == 0 {
                        break;
                    }
                    level -= 1;
                }
            }
        }
    }

    /// Returns the first Schreier generator at `level` that does not sift
    /// to the identity through the levels below, or None if the level is
    /// verified.
    fn verify_level(&self, level: usize) -> Option<Permutation> {
        let gens = self.gens_fixing_prefix(level);
        let tr = &self.transversals[level];
        for (_, rep) in tr.iter() {
            for s in &gens {
                let q = s.apply(rep.apply(self.base[level]));
                let t_q = &tr[&q];
                let schreier = rep.then(s).then(&t_q.inverse());
                if schreier.is_identity() {
                    continue;
                }
                let (residue, _) = self.sift(schreier.clone(), level + 1);
                if !residue.is_identity() {
                    return Some(schreier);
                }
            }
        }
        None
    }
}

fn orbit_of(x: usize, gens: &[Permutation]) -> BTreeSet<usize> {
    let mut orbit = BTreeSet::from([x]);
    let mut queue = VecDeque::from([x]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q = g.apply(p);
            if orbit.insert(q) {
                queue.push_back(q);
            }
        }
    }
    orbit
}

fn transversal_of(
    x: usize,
    gens: &[Permutation],
    degree: usize,
) -> BTreeMap<usize, Permutation> {
    let mut tr = BTreeMap::from([(x, Permutation::identity(degree))]);
    let mut queue = VecDeque::from([x]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q = g.apply(p);
            if !tr.contains_key(&q) {
                let rep = tr[&p].then(g);
                tr.insert(q, rep);
                queue.push_back(q);
            }
        }
    }
    tr
}

/// Outcome of a normality test with a violating conjugate as witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormalityCheck {
    Normal,
    /// `conjugate = g n g^{-1}` lies outside the subgroup.
    NotNormal {
        conjugator: Permutation,
        element: Permutation,
        conjugate: Permutation,
    },
}

impl NormalityCheck {
    pub fn is_normal(&self) -> bool {
        matches!(self, NormalityCheck::Normal)
    }
}

/// Is `sub` normal in `sup`? Errors if `sub` is not a subgroup of `sup`.
pub fn is_normal_in(sub: &PermGroup, sup: &PermGroup) -> Result<NormalityCheck> {
    if sub.degree() != sup.degree() {
        return Err(Error::DegreeMismatch(sub.degree(), sup.degree()));
    }
    for g in sub.generators() {
        if !sup.contains(g)? {
            return Err(Error::NotASubgroup(format!(
                "generator {:?} of the candidate subgroup is not in the group",
                g.images()
            )));
        }
    }
    for g in sup.generators() {
        for n in sub.generators() {
            let conj = n.conjugate_by(g);
            if !sub.contains(&conj)? {
                return Ok(NormalityCheck::NotNormal {
                    conjugator: g.clone(),
                    element: n.clone(),
                    conjugate: conj,
                });
            }
        }
    }
    Ok(NormalityCheck::Normal)
}

/// Cap on explicit element enumeration when intersecting subgroups.
pub const INTERSECTION_ENUM_CAP: u128 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SemidirectCheck {
    Yes,
    No(String),
    /// The complement was too large to intersect explicitly.
    Unknown(String),
}

/// Is `G = N x| Q` internally: `N` normal in `G`, `|N||Q| = |G|`, and
/// `N` meets `Q` trivially?
pub fn is_internal_semidirect(
    n: &PermGroup,
    q: &PermGroup,
    g: &PermGroup,
) -> Result<SemidirectCheck> {
    for (name, sub) in [("N", n), ("Q", q)] {
        for gen in sub.generators() {
            if !g.contains(gen)? {
                return Err(Error::NotASubgroup(format!("{name} is not a subgroup of G")));
            }
        }
    }
    match is_normal_in(n, g)? {
        NormalityCheck::Normal => {}
        NormalityCheck::NotNormal { .. } => {
            return Ok(SemidirectCheck::No("N is not normal in G".into()))
        }
    }
    if n.order() * q.order() != g.order() {
        return Ok(SemidirectCheck::No(format!(
            "|N| * |Q| = {} != |G| = {}",
            n.order() * q.order(),
            g.order()
        )));
    }
    match q.order_u128() {
        Some(qo) if qo <= INTERSECTION_ENUM_CAP => {
            for el in q.elements() {
                if !el.is_identity() && n.contains(&el)? {
                    return Ok(SemidirectCheck::No(
                        "N and Q intersect nontrivially".into(),
                    ));
                }
            }
            Ok(SemidirectCheck::Yes)
        }
        _ => Ok(SemidirectCheck::Unknown(format!(
            "|Q| = {} exceeds the enumeration cap",
            q.order()
        ))),
    }
}

/// The translation `rho_g : x -> g x` of `D_2n` on the `2n` vertex
/// indices of a layered Cayley graph. With the neighbor convention
/// `x ~ xs`, it is the translations on this side that preserve
/// adjacency; the set of all of them is the regular subgroup `R(D_2n)`
/// of the automorphism group.
pub fn rho(g: &DihedralElement) -> Permutation {
    let n = g.modulus();
    let index = |e: &DihedralElement| if e.is_rotation() { e.exp() } else { n + e.exp() };
    let images = (0..2 * n)
        .map(|v| {
            let x = if v < n {
                DihedralElement::rotation(v, n)
            } else {
                DihedralElement::reflection(v - n, n)
            };
            index(&g.mul(&x).unwrap())
        })
        .collect();
    Permutation { images }
}

/// All `2n` permutations of the right regular representation of `D_2n`.
pub fn right_regular_perms(n: usize) -> Vec<Permutation> {
    let mut out = Vec::with_capacity(2 * n);
    for e in 0..n {
        out.push(rho(&DihedralElement::rotation(e, n)));
    }
    for e in 0..n {
        out.push(rho(&DihedralElement::reflection(e, n)));
    }
    out
}

/// `R(D_2n)` as a permutation group on `2n` points.
pub fn right_regular(n: usize) -> PermGroup {
    let gens = vec![
        rho(&DihedralElement::rotation(1, n)),
        rho(&DihedralElement::reflection(0, n)),
    ];
    PermGroup::from_generators(2 * n, gens).expect("degrees agree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_order() {
        let c7 = Permutation::from_cycles(7, &[&[0, 1, 2, 3, 4, 5, 6]]).unwrap();
        let g = PermGroup::from_generators(7, vec![c7]).unwrap();
        assert_eq!(g.order(), BigUint::from(7u32));
    }

    #[test]
    fn dihedral_on_cycle() {
        // Oracle (independent): brute-force count of adjacency-preserving
        // maps of the 7-cycle.
        let adj = |a: usize, b: usize| (a + 1) % 7 == b || (b + 1) % 7 == a;
        let mut count = 0usize;
        let mut perm: Vec<usize> = (0..7).collect();
        // Heap's-style full enumeration over 7! maps
        fn permute(k: usize, perm: &mut Vec<usize>, count: &mut usize, adj: &dyn Fn(usize, usize) -> bool) {
            if k == perm.len() {
                let ok = (0..7).all(|a| (0..7).all(|b| adj(a, b) == adj(perm[a], perm[b])));
                if ok {
                    *count += 1;
                }
                return;
            }
            for i in k..perm.len() {
                perm.swap(k, i);
                permute(k + 1, perm, count, adj);
                perm.swap(k, i);
            }
        }
        permute(0, &mut perm, &mut count, &adj);
        assert_eq!(count, 14);

        let rot = Permutation::from_cycles(7, &[&[0, 1, 2, 3, 4, 5, 6]]).unwrap();
        let refl =
            Permutation::from_images(vec![0, 6, 5, 4, 3, 2, 1]).unwrap();
        let g = PermGroup::from_generators(7, vec![rot, refl]).unwrap();
        assert_eq!(g.order(), BigUint::from(count));
    }

    #[test]
    fn empty_generators() {
        let g = PermGroup::from_generators(5, vec![]).unwrap();
        assert_eq!(g.order(), BigUint::one());
        assert!(g.contains(&Permutation::identity(5)).unwrap());
    }

    #[test]
    fn membership() {
        let c7 = Permutation::from_cycles(7, &[&[0, 1, 2, 3, 4, 5, 6]]).unwrap();
        let g = PermGroup::from_generators(7, vec![c7]).unwrap();
        let refl = Permutation::from_images(vec![0, 6, 5, 4, 3, 2, 1]).unwrap();
        assert!(!g.contains(&refl).unwrap());
        assert!(g.contains(&Permutation::identity(7)).unwrap());
    }

    #[test]
    fn orbit_stabilizer_exact() {
        // translation subgroup <x -> x+v> of Z_12 with v = 8: orbit size 3
        let n = 12;
        let v = 8;
        let shift = Permutation::from_images((0..n).map(|x| (x + v) % n).collect()).unwrap();
        let g = PermGroup::from_generators(n, vec![shift]).unwrap();
        assert_eq!(g.orbit(0).unwrap().len(), 3);
        let stab = g.stabilizer(0).unwrap();
        assert_eq!(g.order(), stab.order() * BigUint::from(3u32));

        // stabilizer of 0 in <(0 1 2)> is trivial
        let rot = Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap();
        let g = PermGroup::from_generators(3, vec![rot]).unwrap();
        assert_eq!(g.stabilizer(0).unwrap().order(), BigUint::one());
    }

    #[test]
    fn two_transitivity() {
        let s3 = PermGroup::from_generators(
            3,
            vec![
                Permutation::from_cycles(3, &[&[0, 1]]).unwrap(),
                Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap(),
            ],
        )
        .unwrap();
        assert!(s3.is_two_transitive());
        let c3 = PermGroup::from_generators(
            3,
            vec![Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap()],
        )
        .unwrap();
        assert!(!c3.is_two_transitive());
    }

    #[test]
    fn normality_in_affine_group() {
        // translations inside AGL(1,7)
        let p = 7;
        let shift = Permutation::from_images((0..p).map(|x| (x + 1) % p).collect()).unwrap();
        let mult3 = Permutation::from_images((0..p).map(|x| (3 * x) % p).collect()).unwrap();
        let translations = PermGroup::from_generators(p, vec![shift.clone()]).unwrap();
        let agl = PermGroup::from_generators(p, vec![shift, mult3]).unwrap();
        assert_eq!(agl.order(), BigUint::from(42u32));
        assert!(is_normal_in(&translations, &agl).unwrap().is_normal());

        // <(0 1)> is not normal in S_3
        let swap = Permutation::from_cycles(3, &[&[0, 1]]).unwrap();
        let s3 = PermGroup::from_generators(
            3,
            vec![swap.clone(), Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap()],
        )
        .unwrap();
        let h = PermGroup::from_generators(3, vec![swap]).unwrap();
        assert!(!is_normal_in(&h, &s3).unwrap().is_normal());

        // not-a-subgroup is an error
        let c5 = PermGroup::from_generators(
            3,
            vec![Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap()],
        )
        .unwrap();
        let other = PermGroup::from_generators(
            3,
            vec![Permutation::from_cycles(3, &[&[0, 1]]).unwrap()],
        )
        .unwrap();
        assert!(matches!(is_normal_in(&other, &c5), Err(Error::NotASubgroup(_))));
    }

    #[test]
    fn semidirect_agl() {
        let p = 5;
        let shift = Permutation::from_images((0..p).map(|x| (x + 1) % p).collect()).unwrap();
        let mult2 = Permutation::from_images((0..p).map(|x| (2 * x) % p).collect()).unwrap();
        let n = PermGroup::from_generators(p, vec![shift.clone()]).unwrap();
        let q = PermGroup::from_generators(p, vec![mult2.clone()]).unwrap();
        let g = PermGroup::from_generators(p, vec![shift, mult2]).unwrap();
        assert_eq!(is_internal_semidirect(&n, &q, &g).unwrap(), SemidirectCheck::Yes);
        // N = Q = G nontrivial fails on the intersection
        assert!(matches!(
            is_internal_semidirect(&g, &g, &g).unwrap(),
            SemidirectCheck::No(_)
        ));
    }

    #[test]
    fn right_regular_properties() {
        let n = 5;
        let g = right_regular(n);
        assert_eq!(g.order(), BigUint::from(10u32));
        assert!(g.is_transitive());
        // rho_r walks the rotation layer as an n-cycle
        let rho_r = rho(&DihedralElement::rotation(1, n));
        for i in 0..n {
            assert_eq!(rho_r.apply(i), (i + 1) % n);
        }
        // regularity: every non-identity element is fixed-point-free
        for p in right_regular_perms(n) {
            if !p.is_identity() {
                assert!((0..2 * n).all(|x| p.apply(x) != x));
            }
            assert!(g.contains(&p).unwrap());
        }
    }

    #[test]
    fn elements_enumeration_matches_order() {
        let s4 = PermGroup::from_generators(
            4,
            vec![
                Permutation::from_cycles(4, &[&[0, 1]]).unwrap(),
                Permutation::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap(),
            ],
        )
        .unwrap();
        let els = s4.elements();
        assert_eq!(BigUint::from(els.len()), s4.order());
        let set: BTreeSet<_> = els.into_iter().collect();
        assert_eq!(set.len(), 24);
    }

    #[test]
    fn degree_mismatch() {
        let g = PermGroup::from_generators(3, vec![]).unwrap();
        assert!(matches!(
            g.contains(&Permutation::identity(4)),
            Err(Error::DegreeMismatch(3, 4))
        ));
    }
}
