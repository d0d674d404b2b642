//! Parameter sweeps: one deterministic row per instance of a case
//! family, with component data, automorphism order, normality, and —
//! where a theorem applies — its verdict. Rows that exceed the vertex
//! cap are kept with a reason instead of aborting the sweep.

use serde_json::json;

use dihedral_cayley::autsearch::{automorphism_group_with_cap, cayley_is_normal_with_aut};
use dihedral_cayley::connset::ConnectionSet;
use dihedral_cayley::graphs::cayley;
use dihedral_cayley::theorems;
use dihedral_cayley::Error;

#[derive(Debug, Clone)]
pub struct Row {
    pub n: usize,
    pub case: String,
    pub params: String,
    pub components: usize,
    pub component_size: usize,
    pub aut_order: String,
    pub normal: String,
    pub consistent: String,
    pub verdict: String,
    pub error: String,
}

impl Row {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "n": self.n,
            "case": self.case,
            "params": self.params,
            "components": self.components,
            "component_size": self.component_size,
            "aut_order": self.aut_order,
            "normal": self.normal,
            "consistent": self.consistent,
            "verdict": self.verdict,
            "error": self.error,
        })
    }
}

pub fn to_csv(rows: &[Row]) -> String {
    let mut out = String::from(
        "n,case,params,components,component_size,aut_order,normal,consistent,verdict,error\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{},{},\"{}\",{},{},{},{},{},{},{}\n",
            r.n,
            r.case,
            r.params,
            r.components,
            r.component_size,
            r.aut_order,
            r.normal,
            r.consistent,
            r.verdict,
            r.error
        ));
    }
    out
}

/// (n, parameter string, connection-set element specs, theorem hook)
type Instance = (usize, String, Vec<String>, Option<Hook>);

#[derive(Clone, Copy)]
enum Hook {
    Thm52(usize),
    Lemma46,
}

fn instances(case: &str, ns: &[usize], ks: Option<&[usize]>) -> Result<Vec<Instance>, Error> {
    let mut out = Vec::new();
    for &n in ns {
        match case {
            "I" => {
                for b in 2..n.div_ceil(2) {
                    out.push((
                        n,
                        format!("a=1;b={b}"),
                        vec![
                            "r^1".into(),
                            format!("r^{}", n - 1),
                            format!("r^{b}"),
                            format!("r^{}", n - b),
                        ],
                        None,
                    ));
                }
            }
            "II" => {
                let ks: Vec<usize> = match ks {
                    Some(ks) => ks.to_vec(),
                    None => (2..=n).collect(),
                };
                for k in ks {
                    if k < 2 || k > n {
                        continue;
                    }
                    let a: Vec<usize> = (0..k).collect();
                    let hook = (k >= 4 && k < n).then_some(Hook::Lemma46);
                    out.push((
                        n,
                        format!("k={k}"),
                        a.iter()
                            .map(|&x| if x == 0 { "s".into() } else { format!("s*r^{x}") })
                            .collect(),
                        hook,
                    ));
                }
            }
            "III" => {
                let ks: Vec<usize> = match ks {
                    Some(ks) => ks.to_vec(),
                    None => (1..n).collect(),
                };
                for k in ks {
                    if k == 0 || k >= n {
                        continue;
                    }
                    out.push((
                        n,
                        format!("k={k}"),
                        vec![
                            "r^1".into(),
                            format!("r^{}", n - 1),
                            "s".into(),
                            format!("s*r^{k}"),
                        ],
                        Some(Hook::Thm52(k)),
                    ));
                }
            }
            "IV" => {
                if n % 2 != 0 {
                    continue;
                }
                for a in 1..n / 2 {
                    out.push((
                        n,
                        format!("a={a};b=0"),
                        vec![
                            format!("r^{a}"),
                            format!("r^{}", n - a),
                            format!("r^{}", n / 2),
                            "s".into(),
                        ],
                        None,
                    ));
                }
            }
            "V" => {
                if n % 2 != 0 {
                    continue;
                }
                for k in 2..n {
                    out.push((
                        n,
                        format!("a=[0;1;{k}]"),
                        vec![
                            format!("r^{}", n / 2),
                            "s".into(),
                            "s*r^1".into(),
                            format!("s*r^{k}"),
                        ],
                        None,
                    ));
                }
            }
            other => {
                return Err(Error::Invalid(format!(
                    "unknown case template '{other}'; choose I, II, III, IV or V"
                )))
            }
        }
    }
    Ok(out)
}

fn row_of(inst: &Instance, cap: usize) -> Row {
    let (n, params, specs, hook) = inst;
    let n = *n;
    let refs: Vec<&str> = specs.iter().map(|s| s.as_str()).collect();
    let cs = match ConnectionSet::parse(n, &refs) {
        Ok(cs) => cs,
        Err(e) => {
            return Row {
                n,
                case: "?".into(),
                params: params.clone(),
                components: 0,
                component_size: 0,
                aut_order: String::new(),
                normal: String::new(),
                consistent: String::new(),
                verdict: String::new(),
                error: e.to_string(),
            }
        }
    };
    let g = cayley(&cs);
    let comps = g.components();
    let mut row = Row {
        n,
        case: cs.kind().label(),
        params: params.clone(),
        components: comps.len(),
        component_size: comps.first().map_or(0, |c| c.len()),
        aut_order: String::new(),
        normal: String::new(),
        consistent: String::new(),
        verdict: String::new(),
        error: String::new(),
    };
    match automorphism_group_with_cap(&g, cap) {
        Ok(aut) => {
            row.aut_order = aut.order().to_string();
            match cayley_is_normal_with_aut(&g, &cs, &aut) {
                Ok((ev, _)) => {
                    row.normal = ev.normal.to_string();
                    row.consistent = ev.consistent.to_string();
                }
                Err(e) => row.error = e.to_string(),
            }
        }
        Err(e) => {
            row.error = e.to_string();
            return row;
        }
    }
    let verdict = match hook {
        Some(Hook::Thm52(k)) => theorems::check_thm_5_2(n, *k).ok().map(|r| r.verdict),
        Some(Hook::Lemma46) => {
            let a: Vec<usize> = cs.reflection_exps().to_vec();
            theorems::check_lemma_4_6_thm_4_8(n, &a).ok().map(|r| r.verdict)
        }
        None => None,
    };
    if let Some(v) = verdict {
        row.verdict = v.label().to_string();
    }
    row
}

pub fn run(
    case: &str,
    ns: &[usize],
    ks: Option<&[usize]>,
    workers: Option<usize>,
) -> Result<Vec<Row>, Error> {
    let insts = instances(case, ns, ks)?;
    let cap = super::default_cap();
    let compute = |insts: &[Instance]| -> Vec<Row> {
        use rayon::prelude::*;
        insts.par_iter().map(|inst| row_of(inst, cap)).collect()
    };
    let rows = match workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::Invalid(format!("worker pool: {e}")))?
            .install(|| compute(&insts)),
        None => compute(&insts),
    };
    Ok(rows)
}
