//! Simple undirected graphs with bit-row adjacency: Cayley and circulant
//! builders, decomposition helpers, isomorphism testing, and DOT /
//! graph6 export.
//!
//! Adjacency convention for Cayley graphs: the neighbors of `g` are
//! `gS` (right multiplication), matching the edge enumerations
//! `{g, g x}` used by all the structural decompositions. For symmetric
//! `S` this is isomorphic to the `xy^{-1}` convention via inversion.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde_json::json;

use crate::autsearch;
use crate::connset::ConnectionSet;
use crate::error::{Error, Result};
use crate::modular_dihedral::DihedralElement;

/// Default combined-order cap for isomorphism search.
pub const ISO_SIZE_CAP: usize = 128;

/// Undirected simple graph. `layered = Some(n)` marks a Cayley graph on
/// `D_2n` with vertices `0..n` the rotations `r^i` and `n..2n` the
/// reflections `s r^{i-n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    order: usize,
    rows: Vec<Vec<u64>>,
    layered: Option<usize>,
}

/// A set of pairwise vertex-disjoint edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    pub edges: BTreeSet<(usize, usize)>,
}

impl Matching {
    pub fn new(edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let edges = edges
            .into_iter()
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        Self { edges }
    }

    /// True if no two edges share a vertex.
    pub fn is_matching(&self) -> bool {
        let mut seen = BTreeSet::new();
        for &(a, b) in &self.edges {
            if a == b || !seen.insert(a) || !seen.insert(b) {
                return false;
            }
        }
        true
    }

    /// True if the matching covers every vertex of a graph on `order` vertices.
    pub fn is_perfect(&self, order: usize) -> bool {
        self.is_matching() && self.edges.len() * 2 == order
    }
}

impl Graph {
    pub fn empty(order: usize) -> Self {
        let words = order.div_ceil(64);
        Self { order, rows: vec![vec![0; words]; order], layered: None }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn layered_modulus(&self) -> Option<usize> {
        self.layered
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert!(a < self.order && b < self.order && a != b);
        self.rows[a][b / 64] |= 1 << (b % 64);
        self.rows[b][a / 64] |= 1 << (a % 64);
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.order && b < self.order && (self.rows[a][b / 64] >> (b % 64)) & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.order).filter(|&w| self.has_edge(v, w)).collect()
    }

    pub fn edges(&self) -> BTreeSet<(usize, usize)> {
        let mut out = BTreeSet::new();
        for a in 0..self.order {
            for b in (a + 1)..self.order {
                if self.has_edge(a, b) {
                    out.insert((a, b));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        (0..self.order).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    pub fn is_regular(&self) -> Option<usize> {
        if self.order == 0 {
            return Some(0);
        }
        let d = self.degree(0);
        (1..self.order).all(|v| self.degree(v) == d).then_some(d)
    }

    /// Vertex index of a dihedral element in a layered Cayley graph.
    pub fn vertex_of(&self, g: &DihedralElement) -> Option<usize> {
        let n = self.layered?;
        Some(if g.is_rotation() { g.exp() } else { n + g.exp() })
    }

    /// Dihedral element at a vertex index of a layered Cayley graph.
    pub fn element_at(&self, v: usize) -> Option<DihedralElement> {
        let n = self.layered?;
        Some(if v < n {
            DihedralElement::rotation(v, n)
        } else {
            DihedralElement::reflection(v - n, n)
        })
    }

    /// Induced subgraph on `verts` (kept in the given order).
    pub fn induced(&self, verts: &[usize]) -> Graph {
        let mut g = Graph::empty(verts.len());
        for (i, &a) in verts.iter().enumerate() {
            for (j, &b) in verts.iter().enumerate().skip(i + 1) {
                if self.has_edge(a, b) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// Connected components, each sorted ascending, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order];
        let mut comps = Vec::new();
        for start in 0..self.order {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for w in self.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// A 2-coloring if one exists. Deterministic: BFS from the least
    /// vertex of each component, which is colored side 0.
    pub fn bipartition(&self) -> Option<Vec<u8>> {
        let mut color = vec![u8::MAX; self.order];
        for start in 0..self.order {
            if color[start] != u8::MAX {
                continue;
            }
            color[start] = 0;
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for w in self.neighbors(v) {
                    if color[w] == u8::MAX {
                        color[w] = 1 - color[v];
                        queue.push_back(w);
                    } else if color[w] == color[v] {
                        return None;
                    }
                }
            }
        }
        Some(color)
    }

    pub fn to_adjacency_json(&self) -> serde_json::Value {
        json!({
            "order": self.order,
            "adj": (0..self.order).map(|v| self.neighbors(v)).collect::<Vec<_>>(),
        })
    }
}

/// Cayley graph of `D_2n` for a validated connection set: vertex `g` is
/// adjacent to `g x` for every `x` in `S`.
pub fn cayley(cs: &ConnectionSet) -> Graph {
    let n = cs.n();
    let mut g = Graph::empty(2 * n);
    g.layered = Some(n);
    for i in 0..2 * n {
        let gi = g.element_at(i).unwrap();
        for x in cs.elems() {
            let gj = gi.mul(x).unwrap();
            let j = g.vertex_of(&gj).unwrap();
            if i != j {
                g.add_edge(i, j);
            }
        }
    }
    g
}

/// Circulant graph on `Z_n`: `i ~ j` iff `(j - i) mod n` lies in the
/// symmetric set `T`.
pub fn circulant(n: usize, t: &BTreeSet<usize>) -> Result<Graph> {
    for &x in t {
        if x == 0 || x >= n {
            return Err(Error::Invalid(format!("offset {x} out of range 1..{n}")));
        }
        if !t.contains(&((n - x) % n)) {
            return Err(Error::AsymmetricT(t.iter().copied().collect(), n));
        }
    }
    let mut g = Graph::empty(n);
    for i in 0..n {
        for &x in t {
            let j = (i + x) % n;
            if i != j {
                g.add_edge(i, j);
            }
        }
    }
    Ok(g)
}

/// Block-diagonal disjoint union; `h`'s vertices are shifted by `g.order()`.
pub fn union_disjoint(g: &Graph, h: &Graph) -> Graph {
    let mut out = Graph::empty(g.order() + h.order());
    for (a, b) in g.edges() {
        out.add_edge(a, b);
    }
    let shift = g.order();
    for (a, b) in h.edges() {
        out.add_edge(a + shift, b + shift);
    }
    out
}

/// The perfect matching `M_a = {{r^i, s r^{a-i}} : i in Z_n}` in the
/// vertex indexing of a layered Cayley graph on `2n` vertices.
pub fn matching_of_reflection(n: usize, a: usize) -> Matching {
    Matching::new((0..n).map(|i| (i, n + (a % n + n - i) % n)))
}

/// The intra-layer antipodal matchings `N_R`, `N_F` at distance `n/2`.
pub fn antipodal_matchings(n: usize) -> Result<(Matching, Matching)> {
    if n % 2 != 0 {
        return Err(Error::Invalid(format!("n = {n} must be even")));
    }
    let h = n / 2;
    let nr = Matching::new((0..h).map(|i| (i, i + h)));
    let nf = Matching::new((0..h).map(|i| (n + i, n + i + h)));
    Ok((nr, nf))
}

/// Outcome of checking that `parts` exactly partition `E(g)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartitionCheck {
    Exact,
    /// Edge appears in more than one part.
    Duplicated((usize, usize)),
    /// Edge of the graph covered by no part.
    Missing((usize, usize)),
    /// Edge in some part that is not an edge of the graph.
    Extra((usize, usize)),
}

impl PartitionCheck {
    pub fn is_exact(&self) -> bool {
        matches!(self, PartitionCheck::Exact)
    }
}

/// Check that the edge sets in `parts` are pairwise disjoint and union
/// to exactly `E(g)`; on failure the certificate names an offending edge.
pub fn edge_partition_check(g: &Graph, parts: &[BTreeSet<(usize, usize)>]) -> PartitionCheck {
    let mut covered = BTreeSet::new();
    for part in parts {
        for &(a, b) in part {
            let e = (a.min(b), a.max(b));
            if !g.has_edge(e.0, e.1) {
                return PartitionCheck::Extra(e);
            }
            if !covered.insert(e) {
                return PartitionCheck::Duplicated(e);
            }
        }
    }
    for e in g.edges() {
        if !covered.contains(&e) {
            return PartitionCheck::Missing(e);
        }
    }
    PartitionCheck::Exact
}

/// Explicit adjacency-preserving bijection `g -> h`, if one exists.
/// Deterministic for fixed inputs.
pub fn isomorphic(g: &Graph, h: &Graph) -> Result<Option<Vec<usize>>> {
    isomorphic_with_cap(g, h, ISO_SIZE_CAP)
}

pub fn isomorphic_with_cap(g: &Graph, h: &Graph, cap: usize) -> Result<Option<Vec<usize>>> {
    let total = g.order() + h.order();
    if total > cap {
        return Err(Error::SizeCapExceeded { actual: total, cap });
    }
    if g.order() != h.order() || g.edge_count() != h.edge_count() {
        return Ok(None);
    }
    Ok(autsearch::search_isomorphism(g, h, &[]))
}

pub fn complete(n: usize) -> Graph {
    let mut g = Graph::empty(n);
    for a in 0..n {
        for b in (a + 1)..n {
            g.add_edge(a, b);
        }
    }
    g
}

pub fn complete_bipartite(m1: usize, m2: usize) -> Graph {
    let mut g = Graph::empty(m1 + m2);
    for a in 0..m1 {
        for b in 0..m2 {
            g.add_edge(a, m1 + b);
        }
    }
    g
}

pub fn cycle(n: usize) -> Graph {
    let mut g = Graph::empty(n);
    if n >= 3 {
        for i in 0..n {
            g.add_edge(i, (i + 1) % n);
        }
    }
    g
}

/// `K_{n,n}` minus the perfect matching `{x_i, y_i}`.
pub fn crown(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::Invalid(format!("crown requires n >= 3, got {n}")));
    }
    let mut g = Graph::empty(2 * n);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                g.add_edge(i, n + j);
            }
        }
    }
    Ok(g)
}

/// DOT output; layered Cayley graphs get `r^i` / `s*r^i` vertex labels.
pub fn export_dot(g: &Graph) -> String {
    let mut out = String::from("graph {\n");
    for v in 0..g.order() {
        match g.element_at(v) {
            Some(el) => {
                let _ = writeln!(out, "  v{v} [label=\"{el}\"];");
            }
            None => {
                let _ = writeln!(out, "  v{v};");
            }
        }
    }
    for (a, b) in g.edges() {
        let _ = writeln!(out, "  v{a} -- v{b};");
    }
    out.push_str("}\n");
    out
}

/// graph6 encoding: columnwise upper triangle, 6-bit chunks offset by 63.
/// Orders above 62 use the 4-byte long form.
pub fn export_graph6(g: &Graph) -> String {
    let n = g.order();
    let mut bytes = Vec::new();
    if n <= 62 {
        bytes.push(63 + n as u8);
    } else {
        // long form: '~' then 18 bits big-endian (orders up to 258047)
        bytes.push(126);
        bytes.push(63 + ((n >> 12) & 0x3f) as u8);
        bytes.push(63 + ((n >> 6) & 0x3f) as u8);
        bytes.push(63 + (n & 0x3f) as u8);
    }
    let mut bits = Vec::with_capacity(n * (n - 1) / 2);
    for col in 1..n {
        for row in 0..col {
            bits.push(g.has_edge(row, col));
        }
    }
    for chunk in bits.chunks(6) {
        let mut val = 0u8;
        for (i, &b) in chunk.iter().enumerate() {
            if b {
                val |= 1 << (5 - i);
            }
        }
        bytes.push(63 + val);
    }
    String::from_utf8(bytes).unwrap()
}

pub fn parse_graph6(text: &str) -> Result<Graph> {
    let bytes = text.trim().as_bytes();
    let bad = || Error::Parse(text.trim().to_string(), "invalid graph6".to_string());
    if bytes.is_empty() {
        return Err(bad());
    }
    let (n, rest) = if bytes[0] == 126 {
        if bytes.len() < 4 {
            return Err(bad());
        }
        let n = (((bytes[1] - 63) as usize) << 12)
            | (((bytes[2] - 63) as usize) << 6)
            | ((bytes[3] - 63) as usize);
        (n, &bytes[4..])
    } else {
        ((bytes[0] - 63) as usize, &bytes[1..])
    };
    let mut g = Graph::empty(n);
    let nbits = n * n.saturating_sub(1) / 2;
    if rest.len() != nbits.div_ceil(6) {
        return Err(bad());
    }
    let mut idx = 0;
    'outer: for col in 1..n {
        for row in 0..col {
            let byte = rest[idx / 6];
            if !(63..=126).contains(&byte) {
                return Err(bad());
            }
            if (byte - 63) >> (5 - (idx % 6)) & 1 == 1 {
                g.add_edge(row, col);
            }
            idx += 1;
            if idx >= nbits {
                break 'outer;
            }
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connset::ConnectionSet;

    fn tset(items: &[usize]) -> BTreeSet<usize> {
        items.iter().copied().collect()
    }

    #[test]
    fn cayley_neighbors_of_identity_are_s() {
        let cs = ConnectionSet::parse(12, &["r^1", "r^11", "r^2", "r^10"]).unwrap();
        let g = cayley(&cs);
        let nbrs: BTreeSet<usize> = g.neighbors(0).into_iter().collect();
        assert_eq!(nbrs, tset(&[1, 2, 10, 11]));
        assert_eq!(g.is_regular(), Some(4));
    }

    #[test]
    fn cayley_reflection_edges_follow_matching_formula() {
        let cs = ConnectionSet::parse(5, &["s", "s*r^1", "s*r^2", "s*r^3"]).unwrap();
        let g = cayley(&cs);
        for a in 0..4usize {
            for i in 0..5usize {
                assert!(g.has_edge(i, 5 + (a + 5 - i) % 5), "a={a} i={i}");
            }
        }
    }

    #[test]
    fn circulant_examples() {
        let g = circulant(5, &tset(&[1, 2, 3, 4])).unwrap();
        assert_eq!(g, complete(5));
        let c7 = circulant(7, &tset(&[3, 4])).unwrap();
        let iso = isomorphic(&c7, &cycle(7)).unwrap();
        assert!(iso.is_some());
        assert!(circulant(7, &tset(&[1])).is_err()); // asymmetric
    }

    #[test]
    fn union_and_components() {
        let g = union_disjoint(&complete(4), &complete(4));
        assert_eq!(g.order(), 8);
        assert_eq!(g.components().len(), 2);
        let g = union_disjoint(&complete(3), &Graph::empty(0));
        assert_eq!(g, complete(3));
    }

    #[test]
    fn rotation_cayley_component_counts() {
        // d=2: 4 components of size 5
        let cs = ConnectionSet::parse(10, &["r^2", "r^8", "r^4", "r^6"]).unwrap();
        let comps = cayley(&cs).components();
        assert_eq!(comps.len(), 4);
        assert!(comps.iter().all(|c| c.len() == 5));
        // d=1: 2 components of size 7
        let cs = ConnectionSet::parse(7, &["r^1", "r^6", "r^2", "r^5"]).unwrap();
        let comps = cayley(&cs).components();
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|c| c.len() == 7));
    }

    #[test]
    fn bipartition_of_reflection_cayley() {
        let cs = ConnectionSet::parse(5, &["s", "s*r^1", "s*r^2", "s*r^3"]).unwrap();
        let g = cayley(&cs);
        let color = g.bipartition().unwrap();
        // rotations on one side, reflections on the other
        assert!((0..5).all(|v| color[v] == color[0]));
        assert!((5..10).all(|v| color[v] != color[0]));
        assert!(complete(4).bipartition().is_none());
        assert!(cycle(6).bipartition().is_some());
    }

    #[test]
    fn matching_formula_expansion() {
        // Oracle: expand {r^i, s r^{a-i}} by hand for n=5, a=0
        let m = matching_of_reflection(5, 0);
        let expect = Matching::new([(0, 5), (1, 9), (2, 8), (3, 7), (4, 6)]);
        assert_eq!(m, expect);
        assert!(m.is_perfect(10));
        // edge-disjointness for distinct exponents
        let m1 = matching_of_reflection(5, 1);
        assert!(m.edges.is_disjoint(&m1.edges));
    }

    #[test]
    fn antipodal() {
        let (nr, _) = antipodal_matchings(4).unwrap();
        assert_eq!(nr, Matching::new([(0, 2), (1, 3)]));
        let (nr, nf) = antipodal_matchings(6).unwrap();
        assert_eq!(nr.edges.len(), 3);
        assert_eq!(nf.edges.len(), 3);
        assert!(antipodal_matchings(5).is_err());
    }

    #[test]
    fn partition_check_certificates() {
        let cs = ConnectionSet::parse(5, &["s", "s*r^1", "s*r^2", "s*r^3"]).unwrap();
        let g = cayley(&cs);
        let parts: Vec<BTreeSet<(usize, usize)>> =
            (0..4).map(|a| matching_of_reflection(5, a).edges).collect();
        assert!(edge_partition_check(&g, &parts).is_exact());

        let mut broken = parts.clone();
        let dropped = *broken[0].iter().next().unwrap();
        broken[0].remove(&dropped);
        assert_eq!(edge_partition_check(&g, &broken), PartitionCheck::Missing(dropped));

        let mut dup = parts.clone();
        let e = *dup[0].iter().next().unwrap();
        dup[1].insert(e);
        assert_eq!(edge_partition_check(&g, &dup), PartitionCheck::Duplicated(e));
    }

    #[test]
    fn iso_examples() {
        // Component of Cay(D_12, {r^{+-1}, r^{+-2}}) vs the octahedron
        let cs = ConnectionSet::parse(6, &["r^1", "r^5", "r^2", "r^4"]).unwrap();
        let g = cayley(&cs);
        let comp = g.induced(&g.components()[0]);
        let mut octahedron = complete(6);
        // remove a perfect matching from K_6: the octahedron is its complement
        let octahedron = {
            let mut h = Graph::empty(6);
            for (a, b) in octahedron.edges() {
                if !matches!((a, b), (0, 3) | (1, 4) | (2, 5)) {
                    h.add_edge(a, b);
                }
            }
            octahedron = h;
            octahedron
        };
        let iso = isomorphic(&comp, &octahedron).unwrap().unwrap();
        for a in 0..6 {
            for b in 0..6 {
                if a != b {
                    assert_eq!(comp.has_edge(a, b), octahedron.has_edge(iso[a], iso[b]));
                }
            }
        }
        // degree mismatch
        assert!(isomorphic(&complete(4), &cycle(4)).unwrap().is_none());
        // K_{4,4} components for n=8, T={1,3,5,7}? no: S={r^{+-1}, r^{+-3}}
        let cs = ConnectionSet::parse(8, &["r^1", "r^7", "r^3", "r^5"]).unwrap();
        let g = cayley(&cs);
        let comp = g.induced(&g.components()[0]);
        assert!(isomorphic(&comp, &complete_bipartite(4, 4)).unwrap().is_some());
    }

    #[test]
    fn crown_builders() {
        assert!(isomorphic(&crown(3).unwrap(), &cycle(6)).unwrap().is_some());
        assert_eq!(complete_bipartite(4, 4).edge_count(), 16);
        assert!(crown(2).is_err());
        // Cay(D_10, F \ {s r^4}) is the 5-crown
        let cs = ConnectionSet::parse(5, &["s", "s*r^1", "s*r^2", "s*r^3"]).unwrap();
        assert!(isomorphic(&cayley(&cs), &crown(5).unwrap()).unwrap().is_some());
    }

    #[test]
    fn graph6_frozen_values() {
        // Oracle: K_3 upper triangle is 111, padded to 111000 = 56 -> 'w'
        assert_eq!(export_graph6(&complete(3)), "Bw");
        assert_eq!(export_graph6(&Graph::empty(1)), "@");
    }

    #[test]
    fn graph6_roundtrip() {
        for g in [complete(5), cycle(9), crown(4).unwrap(), Graph::empty(3)] {
            assert_eq!(parse_graph6(&export_graph6(&g)).unwrap(), g);
        }
        // long form
        let g = cycle(70);
        assert_eq!(parse_graph6(&export_graph6(&g)).unwrap(), g);
    }

    #[test]
    fn dot_labels() {
        let cs = ConnectionSet::parse(3, &["r^1", "r^2", "s", "s*r^1"]).unwrap();
        let dot = export_dot(&cayley(&cs));
        assert!(dot.contains("label=\"r^1\""));
        assert!(dot.contains("label=\"s*r^2\""));
    }

    #[test]
    fn iso_cap() {
        let g = Graph::empty(70);
        assert!(matches!(
            isomorphic(&g, &g),
            Err(Error::SizeCapExceeded { .. })
        ));
    }
}
