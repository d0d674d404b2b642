//! Structural decomposition of the Cayley graph per connection-set case:
//! disjoint circulants for pure rotations, matching decompositions for
//! pure reflections, and layer-plus-matching descriptions for the mixed
//! cases. Every prediction is verified against the constructed graph
//! with concrete certificates.

use std::collections::BTreeSet;

use serde_json::json;

use crate::autsearch::search_isomorphism;
use crate::connset::{CaseKind, ConnectionSet};
use crate::error::Result;
use crate::graphs::{
    antipodal_matchings, cayley, circulant, complete_bipartite, crown,
    edge_partition_check, matching_of_reflection, Graph, Matching,
};

/// Recognized special shapes of a reflection-only Cayley graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Special {
    CompleteBipartite,
    Crown,
    None,
}

/// Case-specific predicted decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Prediction {
    /// Pure rotations: `2d` components, each isomorphic to `Circ(n', T')`.
    DisjointCirculants {
        d: usize,
        n_prime: usize,
        t_prime: BTreeSet<usize>,
        count: usize,
    },
    /// Pure reflections: edge set is a disjoint union of `k` perfect
    /// matchings `M_{a_j}`, bipartite on the rotation/reflection layers.
    MatchingDecomposition {
        a: Vec<usize>,
        k: usize,
        special: Special,
    },
    /// Two rotations + two reflections: circulant layers `Circ(n, {±a})`
    /// joined by the matchings `M_{b_1}`, `M_{b_2}`.
    TwoLayersPlusMatchings {
        t: BTreeSet<usize>,
        matchings: [usize; 2],
    },
    /// Three rotations + one reflection: layers `Circ(n, {±a, n/2})`
    /// joined by the single matching `M_b`.
    LayersWithAntipode {
        t: BTreeSet<usize>,
        matching: usize,
    },
    /// One rotation + three reflections: antipodal matchings `N_R`, `N_F`
    /// inside the layers plus `M_{a_1}, M_{a_2}, M_{a_3}` between them.
    AntipodesPlusMatchings { matchings: [usize; 3] },
}

/// One executed verification step with a human-readable certificate.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn pass(name: &str, detail: String) -> Self {
        Check { name: name.into(), pass: true, detail }
    }

    fn fail(name: &str, detail: String) -> Self {
        Check { name: name.into(), pass: false, detail }
    }
}

#[derive(Debug, Clone)]
pub struct StructureReport {
    pub n: usize,
    pub case: CaseKind,
    pub prediction: Prediction,
    pub checks: Vec<Check>,
    pub verified: bool,
}

impl StructureReport {
    pub fn to_json(&self) -> serde_json::Value {
        let mut obj = json!({
            "case": self.case.label(),
            "n": self.n,
            "verified": self.verified,
            "checks": self.checks.iter().map(|c| json!({
                "name": c.name,
                "pass": c.pass,
                "detail": c.detail,
            })).collect::<Vec<_>>(),
        });
        let extra = match &self.prediction {
            Prediction::DisjointCirculants { d, n_prime, t_prime, count } => json!({
                "d": d,
                "n_prime": n_prime,
                "components": count,
                "component_iso": format!(
                    "Circ({};{:?})",
                    n_prime,
                    t_prime.iter().filter(|&&t| t <= n_prime / 2).collect::<Vec<_>>()
                ),
            }),
            Prediction::MatchingDecomposition { a, k, special } => json!({
                "A": a,
                "k": k,
                "bipartite": true,
                "special": match special {
                    Special::CompleteBipartite => "complete_bipartite",
                    Special::Crown => "crown",
                    Special::None => "none",
                },
            }),
            Prediction::TwoLayersPlusMatchings { t, matchings } => json!({
                "layer_T": t.iter().collect::<Vec<_>>(),
                "matchings": matchings.to_vec(),
            }),
            Prediction::LayersWithAntipode { t, matching } => json!({
                "layer_T": t.iter().collect::<Vec<_>>(),
                "matchings": [matching],
            }),
            Prediction::AntipodesPlusMatchings { matchings } => json!({
                "antipodes": ["N_R", "N_F"],
                "matchings": matchings.to_vec(),
            }),
        };
        for (key, value) in extra.as_object().unwrap() {
            obj[key] = value.clone();
        }
        obj
    }
}

/// Predict the decomposition for `cs` and verify it against `cayley(cs)`.
pub fn analyze(cs: &ConnectionSet) -> Result<StructureReport> {
    let prediction = predict(cs);
    let g = cayley(cs);
    let report = StructureReport {
        n: cs.n(),
        case: cs.kind(),
        prediction,
        checks: Vec::new(),
        verified: false,
    };
    verify_structure(&report, &g)
}

fn predict(cs: &ConnectionSet) -> Prediction {
    let n = cs.n();
    match cs.kind() {
        CaseKind::CaseI | CaseKind::RotationsOnly(_) => {
            let d = cs.d();
            let n_prime = n / d;
            let t_prime: BTreeSet<usize> =
                cs.rotation_exps().iter().map(|&t| (t / d) % n_prime).collect();
            Prediction::DisjointCirculants { d, n_prime, t_prime, count: 2 * d }
        }
        CaseKind::CaseII | CaseKind::ReflectionsOnly(_) => {
            let a = cs.reflection_exps().to_vec();
            let k = a.len();
            let special = if k == n {
                Special::CompleteBipartite
            } else if k == n - 1 {
                Special::Crown
            } else {
                Special::None
            };
            Prediction::MatchingDecomposition { a, k, special }
        }
        CaseKind::CaseIII => {
            let b = cs.reflection_exps();
            Prediction::TwoLayersPlusMatchings {
                t: cs.rotation_exps().clone(),
                matchings: [b[0], b[1]],
            }
        }
        CaseKind::CaseIV => Prediction::LayersWithAntipode {
            t: cs.rotation_exps().clone(),
            matching: cs.reflection_exps()[0],
        },
        CaseKind::CaseV => {
            let a = cs.reflection_exps();
            Prediction::AntipodesPlusMatchings { matchings: [a[0], a[1], a[2]] }
        }
    }
}

/// Re-run every check of `rep`'s prediction against `g`. Failures carry
/// the offending edge or vertex; a report is `verified` only when all
/// checks pass.
pub fn verify_structure(rep: &StructureReport, g: &Graph) -> Result<StructureReport> {
    let n = rep.n;
    let mut checks = Vec::new();
    match &rep.prediction {
        Prediction::DisjointCirculants { n_prime, t_prime, count, .. } => {
            let comps = g.components();
            if comps.len() == *count {
                checks.push(Check::pass(
                    "component_count",
                    format!("{} components", comps.len()),
                ));
            } else {
                checks.push(Check::fail(
                    "component_count",
                    format!("expected {count}, found {}", comps.len()),
                ));
            }
            let target = circulant(*n_prime, t_prime)?;
            for (i, comp) in comps.iter().enumerate() {
                let sub = g.induced(comp);
                match search_isomorphism(&sub, &target, &[]) {
                    Some(map) => checks.push(Check::pass(
                        &format!("component_{i}_iso"),
                        format!("bijection {map:?}"),
                    )),
                    None => checks.push(Check::fail(
                        &format!("component_{i}_iso"),
                        format!("component {i} (vertices {comp:?}) not isomorphic"),
                    )),
                }
            }
        }
        Prediction::MatchingDecomposition { a, k, special } => {
            let matchings: Vec<Matching> =
                a.iter().map(|&x| matching_of_reflection(n, x)).collect();
            for (m, &x) in matchings.iter().zip(a) {
                if m.is_perfect(2 * n) {
                    checks.push(Check::pass(
                        &format!("M_{x}_perfect"),
                        format!("{} edges", m.edges.len()),
                    ));
                } else {
                    checks.push(Check::fail(
                        &format!("M_{x}_perfect"),
                        format!("edges {:?}", m.edges),
                    ));
                }
            }
            let parts: Vec<BTreeSet<(usize, usize)>> =
                matchings.iter().map(|m| m.edges.clone()).collect();
            checks.push(partition_check(g, &parts));
            checks.push(bipartition_check(g, n));
            match special {
                Special::CompleteBipartite => {
                    checks.push(iso_check(g, &complete_bipartite(n, n), "complete_bipartite"))
                }
                Special::Crown => checks.push(iso_check(g, &crown(n)?, "crown")),
                Special::None => {
                    // k < n-1: neither complete bipartite nor crown
                    checks.push(Check::pass(
                        "edge_census",
                        format!("k = {k} of n = {n} matchings present"),
                    ));
                }
            }
        }
        Prediction::TwoLayersPlusMatchings { t, matchings } => {
            checks.extend(layer_checks(g, n, t, matchings)?);
        }
        Prediction::LayersWithAntipode { t, matching } => {
            checks.extend(layer_checks(g, n, t, &[*matching])?);
        }
        Prediction::AntipodesPlusMatchings { matchings } => {
            let (nr, nf) = antipodal_matchings(n)?;
            for (m, name) in [(&nr, "N_R"), (&nf, "N_F")] {
                if m.is_matching() {
                    checks.push(Check::pass(
                        &format!("{name}_matching"),
                        format!("{} antipodal edges", m.edges.len()),
                    ));
                } else {
                    checks.push(Check::fail(name, format!("{:?}", m.edges)));
                }
            }
            let mut parts = vec![nr.edges, nf.edges];
            for &x in matchings {
                let m = matching_of_reflection(n, x);
                if m.is_perfect(2 * n) {
                    checks.push(Check::pass(
                        &format!("M_{x}_perfect"),
                        format!("{} edges", m.edges.len()),
                    ));
                } else {
                    checks.push(Check::fail(&format!("M_{x}_perfect"), format!("{:?}", m.edges)));
                }
                parts.push(m.edges);
            }
            checks.push(partition_check(g, &parts));
        }
    }
    let verified = checks.iter().all(|c| c.pass);
    Ok(StructureReport {
        n,
        case: rep.case,
        prediction: rep.prediction.clone(),
        checks,
        verified,
    })
}

/// Checks shared by the mixed layer cases: intra-layer edges follow the
/// circulant on `T` in both layers, inter-layer edges are exactly the
/// predicted matchings, and together these exhaust `E(g)`.
fn layer_checks(
    g: &Graph,
    n: usize,
    t: &BTreeSet<usize>,
    matchings: &[usize],
) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let layer = circulant(n, t)?;
    let layer_r: BTreeSet<(usize, usize)> = layer.edges();
    let layer_f: BTreeSet<(usize, usize)> =
        layer_r.iter().map(|&(a, b)| (a + n, b + n)).collect();
    let mut parts = vec![layer_r, layer_f];
    for &x in matchings {
        let m = matching_of_reflection(n, x);
        if m.is_perfect(2 * n) {
            checks.push(Check::pass(
                &format!("M_{x}_perfect"),
                format!("{} edges", m.edges.len()),
            ));
        } else {
            checks.push(Check::fail(&format!("M_{x}_perfect"), format!("{:?}", m.edges)));
        }
        parts.push(m.edges);
    }
    let inter = g
        .edges()
        .iter()
        .filter(|&&(a, b)| (a < n) != (b < n))
        .count();
    if inter == n * matchings.len() {
        checks.push(Check::pass(
            "inter_layer_count",
            format!("{inter} = {n} x {}", matchings.len()),
        ));
    } else {
        checks.push(Check::fail(
            "inter_layer_count",
            format!("expected {}, found {inter}", n * matchings.len()),
        ));
    }
    checks.push(partition_check(g, &parts));
    Ok(checks)
}

fn partition_check(g: &Graph, parts: &[BTreeSet<(usize, usize)>]) -> Check {
    let outcome = edge_partition_check(g, parts);
    if outcome.is_exact() {
        Check::pass("edge_partition", format!("{} edges covered once", g.edge_count()))
    } else {
        Check::fail("edge_partition", format!("{outcome:?}"))
    }
}

fn bipartition_check(g: &Graph, n: usize) -> Check {
    match g.bipartition() {
        Some(sides) => {
            let layered = (0..2 * n).all(|v| (sides[v] == 0) == (v < n));
            if layered {
                Check::pass("bipartite_R_F", "parts are the two layers".into())
            } else {
                let v = (0..2 * n).find(|&v| (sides[v] == 0) != (v < n)).unwrap();
                Check::fail("bipartite_R_F", format!("vertex {v} on the wrong side"))
            }
        }
        None => Check::fail("bipartite_R_F", "graph has an odd cycle".into()),
    }
}

fn iso_check(g: &Graph, target: &Graph, name: &str) -> Check {
    match search_isomorphism(g, target, &[]) {
        Some(map) => Check::pass(&format!("iso_{name}"), format!("bijection {map:?}")),
        None => Check::fail(&format!("iso_{name}"), "no isomorphism".into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connset::ConnectionSet;

    fn rot(n: usize, exps: &[usize]) -> ConnectionSet {
        let specs: Vec<String> = exps.iter().map(|e| format!("r^{e}")).collect();
        let refs: Vec<&str> = specs.iter().map(|s| s.as_str()).collect();
        ConnectionSet::parse(n, &refs).unwrap()
    }

    fn refl(n: usize, exps: &[usize]) -> ConnectionSet {
        let specs: Vec<String> = exps
            .iter()
            .map(|&e| if e == 0 { "s".to_string() } else { format!("s*r^{e}") })
            .collect();
        let refs: Vec<&str> = specs.iter().map(|s| s.as_str()).collect();
        ConnectionSet::parse(n, &refs).unwrap()
    }

    #[test]
    fn case_i_two_k4_components() {
        let cs = rot(4, &[1, 3, 2]);
        let rep = analyze(&cs).unwrap();
        assert!(rep.verified);
        match &rep.prediction {
            Prediction::DisjointCirculants { d, n_prime, count, .. } => {
                assert_eq!((*d, *n_prime, *count), (1, 4, 2));
            }
            other => panic!("wrong prediction {other:?}"),
        }
    }

    #[test]
    fn case_i_four_k5_components() {
        // d = 2 at n = 10: four components, each Circ(5, {1,2}) = K_5
        let cs = rot(10, &[2, 8, 4, 6]);
        let rep = analyze(&cs).unwrap();
        assert!(rep.verified);
        match &rep.prediction {
            Prediction::DisjointCirculants { d, n_prime, t_prime, count } => {
                assert_eq!((*d, *n_prime, *count), (2, 5, 4));
                assert_eq!(t_prime.iter().copied().collect::<Vec<_>>(), vec![1, 2, 3, 4]);
            }
            other => panic!("wrong prediction {other:?}"),
        }
    }

    #[test]
    fn case_ii_partition_and_specials() {
        // n=7, A = {0,1,2,4}: four edge-disjoint perfect matchings
        let rep = analyze(&refl(7, &[0, 1, 2, 4])).unwrap();
        assert!(rep.verified);
        assert!(rep.checks.iter().any(|c| c.name == "edge_partition" && c.pass));
        assert!(rep.checks.iter().any(|c| c.name == "bipartite_R_F" && c.pass));

        // k = n: complete bipartite
        let rep = analyze(&refl(5, &[0, 1, 2, 3, 4])).unwrap();
        assert!(rep.verified);
        assert!(matches!(
            rep.prediction,
            Prediction::MatchingDecomposition { special: Special::CompleteBipartite, .. }
        ));

        // k = n-1: crown
        let rep = analyze(&refl(5, &[0, 1, 2, 3])).unwrap();
        assert!(rep.verified);
        assert!(matches!(
            rep.prediction,
            Prediction::MatchingDecomposition { special: Special::Crown, .. }
        ));
    }

    #[test]
    fn case_iii_layers_and_two_matchings() {
        let cs = ConnectionSet::parse(7, &["r^1", "r^6", "s", "s*r^3"]).unwrap();
        let rep = analyze(&cs).unwrap();
        assert!(rep.verified);
        assert!(matches!(
            rep.prediction,
            Prediction::TwoLayersPlusMatchings { matchings: [0, 3], .. }
        ));
    }

    #[test]
    fn case_iv_antipode_layer() {
        let cs = ConnectionSet::parse(6, &["r^1", "r^5", "r^3", "s"]).unwrap();
        let rep = analyze(&cs).unwrap();
        assert!(rep.verified);
        assert!(matches!(
            rep.prediction,
            Prediction::LayersWithAntipode { matching: 0, .. }
        ));
        assert!(rep
            .checks
            .iter()
            .any(|c| c.name == "inter_layer_count" && c.pass));
    }

    #[test]
    fn case_v_antipodes_plus_three_matchings() {
        let cs =
            ConnectionSet::parse(6, &["r^3", "s", "s*r^1", "s*r^2"]).unwrap();
        let rep = analyze(&cs).unwrap();
        assert!(rep.verified);
        assert!(matches!(
            rep.prediction,
            Prediction::AntipodesPlusMatchings { matchings: [0, 1, 2] }
        ));
    }

    #[test]
    fn corrupted_prediction_names_an_edge() {
        let cs = refl(7, &[0, 1, 2, 4]);
        let good = analyze(&cs).unwrap();
        let mut bad = good.clone();
        // claim M_3 instead of M_4: verification must name a bad edge
        bad.prediction = Prediction::MatchingDecomposition {
            a: vec![0, 1, 2, 3],
            k: 4,
            special: Special::None,
        };
        let rep = verify_structure(&bad, &cayley(&cs)).unwrap();
        assert!(!rep.verified);
        let part = rep.checks.iter().find(|c| c.name == "edge_partition").unwrap();
        assert!(!part.pass);
        assert!(part.detail.contains("Extra") || part.detail.contains("Missing"));
    }

    #[test]
    fn report_json_shape() {
        let rep = analyze(&rot(10, &[2, 8, 4, 6])).unwrap();
        let j = rep.to_json();
        assert_eq!(j["case"], "I");
        assert_eq!(j["d"], 2);
        assert_eq!(j["n_prime"], 5);
        assert_eq!(j["components"], 4);
        assert_eq!(j["verified"], true);
    }
}
