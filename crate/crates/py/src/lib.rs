//! Python bindings: dihedral elements, connection-set classification,
//! structural analysis, automorphism orders, and theorem verification,
//! with the report-producing functions returning JSON strings.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use dihedral_cayley::autsearch::{automorphism_group, cayley_is_normal_with_aut};
use dihedral_cayley::connset::ConnectionSet;
use dihedral_cayley::graphs::cayley;
use dihedral_cayley::modular_dihedral::DihedralElement;
use dihedral_cayley::structure;
use dihedral_cayley::theorems;

fn err<T>(r: dihedral_cayley::Result<T>) -> PyResult<T> {
    r.map_err(|e| PyValueError::new_err(e.to_string()))
}

fn parse_set(n: usize, elements: Vec<String>) -> PyResult<ConnectionSet> {
    let refs: Vec<&str> = elements.iter().map(|s| s.as_str()).collect();
    err(ConnectionSet::parse(n, &refs))
}

/// An element of the dihedral group `D_2n` in the form `s^eps r^e`.
#[pyclass]
#[derive(Clone)]
struct Element {
    inner: DihedralElement,
}

#[pymethods]
impl Element {
    #[new]
    fn new(text: &str, n: usize) -> PyResult<Self> {
        Ok(Element { inner: err(DihedralElement::parse(text, n))? })
    }

    fn __mul__(&self, other: &Element) -> PyResult<Element> {
        Ok(Element { inner: err(self.inner.mul(&other.inner))? })
    }

    fn inv(&self) -> Element {
        Element { inner: self.inner.inv() }
    }

    fn order(&self) -> usize {
        self.inner.order()
    }

    fn is_rotation(&self) -> bool {
        self.inner.is_rotation()
    }

    fn __eq__(&self, other: &Element) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Element('{}', {})", self.inner, self.inner.modulus())
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }
}

/// Classify a connection set; returns the ConnectionSet JSON report.
#[pyfunction]
fn classify(n: usize, elements: Vec<String>) -> PyResult<String> {
    let cs = parse_set(n, elements)?;
    Ok(cs.to_json().to_string())
}

/// Predict and verify the structural decomposition; returns the
/// StructureReport JSON.
#[pyfunction]
fn analyze(n: usize, elements: Vec<String>) -> PyResult<String> {
    let cs = parse_set(n, elements)?;
    let rep = err(structure::analyze(&cs))?;
    Ok(rep.to_json().to_string())
}

/// `|Aut(Cay(D_2n, S))|` as a decimal string.
#[pyfunction]
fn aut_order(n: usize, elements: Vec<String>) -> PyResult<String> {
    let cs = parse_set(n, elements)?;
    let aut = err(automorphism_group(&cayley(&cs)))?;
    Ok(aut.order().to_string())
}

/// Full automorphism report (order, normality, stabilizer) as JSON.
#[pyfunction]
fn aut_report(n: usize, elements: Vec<String>) -> PyResult<String> {
    let cs = parse_set(n, elements)?;
    let g = cayley(&cs);
    let aut = err(automorphism_group(&g))?;
    let (ev, stab) = err(cayley_is_normal_with_aut(&g, &cs, &aut))?;
    Ok(serde_json::json!({
        "order": aut.order().to_string(),
        "normal": ev.normal,
        "consistent": ev.consistent,
        "stabilizer_order": stab.order().to_string(),
    })
    .to_string())
}

/// Run a theorem checker; `params` is a JSON object such as
/// `{"n": 3, "k": 1}` or `{"p": 7, "t": 2}` or `{"n": 7, "A": [0,1,2,4]}`.
#[pyfunction]
fn verify(theorem: &str, params: &str) -> PyResult<String> {
    let p: serde_json::Value = serde_json::from_str(params)
        .map_err(|e| PyValueError::new_err(format!("params is not JSON: {e}")))?;
    let get = |k: &str| -> PyResult<usize> {
        p[k].as_u64()
            .map(|v| v as usize)
            .ok_or_else(|| PyValueError::new_err(format!("missing parameter '{k}'")))
    };
    let rep = match theorem {
        "lemma3.2" | "thm3.6" | "thm3.7" | "cor3.12" => {
            let prime = get("p")?;
            if theorem == "cor3.12" {
                err(theorems::check_cor_3_12(prime))?
            } else {
                let t = get("t").unwrap_or(2);
                let set = [1, t, prime - 1, (prime - t % prime) % prime]
                    .into_iter()
                    .collect();
                if theorem == "lemma3.2" {
                    err(theorems::check_lemma_3_2(prime, &set))?
                } else {
                    err(theorems::check_thm_3_6_3_7(prime, &set))?
                }
            }
        }
        "lemma4.6" | "thm4.8" => {
            let n = get("n")?;
            let a: Vec<usize> = p["A"]
                .as_array()
                .ok_or_else(|| PyValueError::new_err("missing parameter 'A'"))?
                .iter()
                .filter_map(|v| v.as_u64().map(|x| x as usize))
                .collect();
            err(theorems::check_lemma_4_6_thm_4_8(n, &a))?
        }
        "thm5.2" => err(theorems::check_thm_5_2(get("n")?, get("k")?))?,
        other => return Err(PyValueError::new_err(format!("unknown theorem '{other}'"))),
    };
    Ok(rep.to_json().to_string())
}

#[pymodule]
fn cayley_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Element>()?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(aut_order, m)?)?;
    m.add_function(wrap_pyfunction!(aut_report, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
