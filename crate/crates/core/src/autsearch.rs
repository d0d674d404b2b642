//! Refinement-guided backtracking search for graph isomorphisms and
//! automorphism groups, plus the Cayley-specific companions: the affine
//! stabilizer `Aut(G,S)`, its embedding as vertex permutations, and the
//! normality test for `R(G)` inside `Aut(Gamma)`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde_json::json;

use crate::connset::ConnectionSet;
use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::modular_dihedral::{units, AffineMap, DihedralElement};
use crate::permgroup::{
    self, is_normal_in, NormalityCheck, PermGroup, Permutation,
};

/// Default vertex cap for automorphism search.
pub const AUT_SIZE_CAP: usize = 64;

/// Per-vertex color classes produced by equitable refinement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    pub colors: Vec<usize>,
}

impl Coloring {
    pub fn class_sizes(&self) -> BTreeMap<usize, usize> {
        let mut sizes = BTreeMap::new();
        for &c in &self.colors {
            *sizes.entry(c).or_insert(0) += 1;
        }
        sizes
    }
}

/// Joint iterated neighborhood refinement of two graphs of equal order.
/// `pinned` individualizes pairs (v in g, w in h) with matching singleton
/// colors. Returns None when the color class profiles diverge, which
/// proves no isomorphism extends the pinned pairs.
fn joint_refine(
    g: &Graph,
    h: &Graph,
    pinned: &[(usize, usize)],
) -> Option<(Vec<usize>, Vec<usize>)> {
    let n = g.order();
    let mut cg = vec![0usize; n];
    let mut ch = vec![0usize; n];
    for (i, &(v, w)) in pinned.iter().enumerate() {
        cg[v] = i + 1;
        ch[w] = i + 1;
    }
    loop {
        // signature: (current color, sorted multiset of neighbor colors)
        let sig = |graph: &Graph, colors: &[usize], v: usize| {
            let mut nbr: Vec<usize> = graph.neighbors(v).iter().map(|&u| colors[u]).collect();
            nbr.sort_unstable();
            (colors[v], nbr)
        };
        let mut table: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
        let mut next_g = vec![0usize; n];
        let mut next_h = vec![0usize; n];
        let mut counts_g: BTreeMap<usize, usize> = BTreeMap::new();
        let mut counts_h: BTreeMap<usize, usize> = BTreeMap::new();
        for v in 0..n {
            let s = sig(g, &cg, v);
            let next_id = table.len();
            let id = *table.entry(s).or_insert(next_id);
            next_g[v] = id;
            *counts_g.entry(id).or_insert(0) += 1;
        }
        for w in 0..n {
            let s = sig(h, &ch, w);
            match table.get(&sig(h, &ch, w)) {
                Some(&id) => {
                    next_h[w] = id;
                    *counts_h.entry(id).or_insert(0) += 1;
                }
                None => {
                    let _ = s;
                    return None;
                }
            }
        }
        if counts_g != counts_h {
            return None;
        }
        if next_g == cg && next_h == ch {
            return Some((cg, ch));
        }
        cg = next_g;
        ch = next_h;
    }
}

/// Search for an adjacency-preserving bijection `g -> h` extending the
/// forced pairs. Deterministic: target vertices are chosen from the
/// smallest color class (lowest index breaking ties) and images tried in
/// ascending order.
pub fn search_isomorphism(
    g: &Graph,
    h: &Graph,
    forced: &[(usize, usize)],
) -> Option<Vec<usize>> {
    if g.order() != h.order() {
        return None;
    }
    let mut assigned: Vec<(usize, usize)> = forced.to_vec();
    // forced pairs must be consistent among themselves
    for (i, &(a, b)) in assigned.iter().enumerate() {
        for &(c, d) in assigned.iter().skip(i + 1) {
            if a == c || b == d {
                return None;
            }
            if g.has_edge(a, c) != h.has_edge(b, d) {
                return None;
            }
        }
    }
    fn extend(
        g: &Graph,
        h: &Graph,
        assigned: &mut Vec<(usize, usize)>,
    ) -> Option<Vec<usize>> {
        let n = g.order();
        let (cg, ch) = joint_refine(g, h, assigned)?;
        if assigned.len() == n {
            let mut map = vec![0usize; n];
            for &(v, w) in assigned.iter() {
                map[v] = w;
            }
            return Some(map);
        }
        let used_g: Vec<bool> = {
            let mut u = vec![false; n];
            for &(v, _) in assigned.iter() {
                u[v] = true;
            }
            u
        };
        let used_h: Vec<bool> = {
            let mut u = vec![false; n];
            for &(_, w) in assigned.iter() {
                u[w] = true;
            }
            u
        };
        // pick the unassigned vertex in the smallest color class
        let mut class_size: BTreeMap<usize, usize> = BTreeMap::new();
        for v in 0..n {
            if !used_g[v] {
                *class_size.entry(cg[v]).or_insert(0) += 1;
            }
        }
        let target = (0..n)
            .filter(|&v| !used_g[v])
            .min_by_key(|&v| (class_size[&cg[v]], v))?;
        for w in 0..n {
            if used_h[w] || ch[w] != cg[target] {
                continue;
            }
            if assigned
                .iter()
                .any(|&(v2, w2)| g.has_edge(target, v2) != h.has_edge(w, w2))
            {
                continue;
            }
            assigned.push((target, w));
            if let Some(map) = extend(g, h, assigned) {
                return Some(map);
            }
            assigned.pop();
        }
        None
    }
    extend(g, h, &mut assigned)
}

/// Full automorphism group of `g` by stabilizer-chain search: for each
/// vertex `k` in order, generators mapping `k` across its orbit under
/// the subgroup fixing `0..k` pointwise, with orbit pruning.
pub fn automorphism_group(g: &Graph) -> Result<PermGroup> {
    automorphism_group_with_cap(g, AUT_SIZE_CAP)
}

pub fn automorphism_group_with_cap(g: &Graph, cap: usize) -> Result<PermGroup> {
    let n = g.order();
    if n > cap {
        return Err(Error::SizeCapExceeded { actual: n, cap });
    }
    let mut gens: Vec<Permutation> = Vec::new();
    // work upward from the deepest stabilizer: at level k the known gens
    // all fix 0..k-1 pointwise or were found at deeper levels
    for k in (0..n).rev() {
        let prefix: Vec<(usize, usize)> = (0..k).map(|i| (i, i)).collect();
        loop {
            // orbit of k under the generators fixing 0..k-1
            let level_gens: Vec<&Permutation> = gens
                .iter()
                .filter(|p| (0..k).all(|i| p.apply(i) == i))
                .collect();
            let mut orbit = std::collections::BTreeSet::from([k]);
            let mut queue = std::collections::VecDeque::from([k]);
            while let Some(p) = queue.pop_front() {
                for gen in &level_gens {
                    let q = gen.apply(p);
                    if orbit.insert(q) {
                        queue.push_back(q);
                    }
                }
            }
            let candidate = ((k + 1)..n).find(|w| !orbit.contains(w));
            let mut found = false;
            if let Some(start) = candidate {
                for w in start..n {
                    if orbit.contains(&w) {
                        continue;
                    }
                    let mut forced = prefix.clone();
                    forced.push((k, w));
                    if let Some(map) = search_isomorphism(g, g, &forced) {
                        gens.push(Permutation::from_images(map)?);
                        found = true;
                        break;
                    } else {
                        orbit.insert(w); // no automorphism reaches w; prune
                    }
                }
            }
            if !found {
                break;
            }
        }
    }
    PermGroup::from_generators(n, gens)
}

/// Stabilizer of the identity vertex (index 0) in an automorphism group
/// acting on a layered Cayley graph.
pub fn vertex_stabilizer_at_identity(a: &PermGroup) -> Result<PermGroup> {
    a.stabilizer(0)
}

/// All affine maps `psi_{u,v}` with `psi(S) = S`, by exhaustive scan over
/// the `phi(n) * n` candidates. The result is closed under composition.
pub fn aut_group_set(cs: &ConnectionSet) -> Vec<AffineMap> {
    let n = cs.n();
    let mut out = Vec::new();
    let set: std::collections::BTreeSet<DihedralElement> =
        cs.elems().iter().copied().collect();
    for u in units(n) {
        for v in 0..n {
            let psi = AffineMap::new(u, v, n).unwrap();
            let image: std::collections::BTreeSet<DihedralElement> =
                cs.elems().iter().map(|g| psi.apply(g).unwrap()).collect();
            if image == set {
                out.push(psi);
            }
        }
    }
    out
}

/// Realize affine maps fixing `S` as permutations of the `2n` vertex
/// indices, verifying each against the graph's adjacency. The result
/// fixes vertex 0.
pub fn aut_gs_as_permutations(
    maps: &[AffineMap],
    cs: &ConnectionSet,
    g: &Graph,
) -> Result<Vec<Permutation>> {
    let n = cs.n();
    let set: std::collections::BTreeSet<DihedralElement> =
        cs.elems().iter().copied().collect();
    let mut out = Vec::new();
    for psi in maps {
        let image: std::collections::BTreeSet<DihedralElement> =
            cs.elems().iter().map(|x| psi.apply(x).unwrap()).collect();
        if image != set {
            return Err(Error::MapDoesNotPreserveS { u: psi.u(), v: psi.v() });
        }
        let images: Vec<usize> = (0..2 * n)
            .map(|v| {
                let el = g.element_at(v).unwrap();
                g.vertex_of(&psi.apply(&el).unwrap()).unwrap()
            })
            .collect();
        let perm = Permutation::from_images(images)?;
        for (a, b) in g.edges() {
            if !g.has_edge(perm.apply(a), perm.apply(b)) {
                return Err(Error::MapDoesNotPreserveS { u: psi.u(), v: psi.v() });
            }
        }
        debug_assert_eq!(perm.apply(0), 0);
        out.push(perm);
    }
    Ok(out)
}

/// Evidence produced by the normality test: the conjugation verdict, the
/// cross-check that the identity-vertex stabilizer coincides with
/// `Aut(G,S)`, and a violating conjugate when not normal.
#[derive(Debug, Clone)]
pub struct NormalityEvidence {
    pub normal: bool,
    pub aut_order: BigUint,
    pub aut_gs_order: usize,
    pub stabilizer_order: BigUint,
    /// conjugation verdict agrees with `stabilizer == Aut(G,S)`
    pub consistent: bool,
    pub witness: Option<Permutation>,
}

impl NormalityEvidence {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "normal": self.normal,
            "aut_order": self.aut_order.to_string(),
            "aut_gs_order": self.aut_gs_order,
            "stabilizer_order": self.stabilizer_order.to_string(),
            "consistent": self.consistent,
            "witness": self.witness.as_ref().map(|w| json!({
                "conjugated": w.images(),
                "not_in_RG": true,
            })),
        })
    }
}

/// Is the layered Cayley graph normal, i.e. is `R(D_2n)` normal in
/// `Aut(Gamma)`? Cross-checks the stabilizer characterization: normal
/// iff the stabilizer of the identity vertex equals `Aut(G,S)`.
pub fn cayley_is_normal(g: &Graph, cs: &ConnectionSet) -> Result<NormalityEvidence> {
    let aut = automorphism_group(g)?;
    cayley_is_normal_with_aut(g, cs, &aut).map(|(e, _)| e)
}

/// Same as [`cayley_is_normal`] but reusing a precomputed `Aut(Gamma)`.
/// Also returns the stabilizer group for further inspection.
pub fn cayley_is_normal_with_aut(
    g: &Graph,
    cs: &ConnectionSet,
    aut: &PermGroup,
) -> Result<(NormalityEvidence, PermGroup)> {
    let n = cs.n();
    let rg = permgroup::right_regular(n);
    let conj = is_normal_in(&rg, aut)?;
    let (normal, witness) = match conj {
        NormalityCheck::Normal => (true, None),
        NormalityCheck::NotNormal { conjugate, .. } => (false, Some(conjugate)),
    };

    let stab = aut.stabilizer(0)?;
    let maps = aut_group_set(cs);
    let perms = aut_gs_as_permutations(&maps, cs, g)?;
    // Aut(G,S) as permutations is always inside the stabilizer; equality
    // is the normality criterion
    let mut equal = BigUint::from(perms.len()) == stab.order();
    for p in &perms {
        if !stab.contains(p)? {
            equal = false;
        }
    }
    let evidence = NormalityEvidence {
        normal,
        aut_order: aut.order(),
        aut_gs_order: perms.len(),
        stabilizer_order: stab.order(),
        consistent: normal == equal,
        witness,
    };
    Ok((evidence, stab))
}
