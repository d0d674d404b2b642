//! Validation and classification of connection sets `S` in `D_2n`, and
//! derivation of the parameters (`T`, `A`, `Delta`, `d`) the structural
//! and automorphism checks consume.

use std::collections::BTreeSet;

use serde_json::json;

use crate::error::{Error, Result};
use crate::modular_dihedral::{gcd_all, DihedralElement};

/// Which of the five 4-element cases (or the general rotation-only /
/// reflection-only families) a valid connection set falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseKind {
    /// `S` is four distinct rotations.
    CaseI,
    /// `S` is four distinct reflections.
    CaseII,
    /// Exactly two rotations and two reflections.
    CaseIII,
    /// Exactly three rotations (an inverse pair plus `r^{n/2}`) and one reflection.
    CaseIV,
    /// Exactly three reflections plus the rotation `r^{n/2}`.
    CaseV,
    /// `k` distinct rotations, `k != 4`.
    RotationsOnly(usize),
    /// `k` distinct reflections, `k != 4`.
    ReflectionsOnly(usize),
}

impl CaseKind {
    pub fn label(&self) -> String {
        match self {
            CaseKind::CaseI => "I".into(),
            CaseKind::CaseII => "II".into(),
            CaseKind::CaseIII => "III".into(),
            CaseKind::CaseIV => "IV".into(),
            CaseKind::CaseV => "V".into(),
            CaseKind::RotationsOnly(k) => format!("rotations-only({k})"),
            CaseKind::ReflectionsOnly(k) => format!("reflections-only({k})"),
        }
    }
}

/// A validated, inverse-closed connection set with its derived data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectionSet {
    n: usize,
    elems: Vec<DihedralElement>,
    kind: CaseKind,
    rotation_exps: BTreeSet<usize>,
    reflection_exps: Vec<usize>,
    delta: BTreeSet<usize>,
    d: usize,
}

impl ConnectionSet {
    /// Validate `raw` as a connection set on `D_2n` and derive all fields.
    pub fn validate(n: usize, raw: &[DihedralElement]) -> Result<Self> {
        if n < 3 {
            return Err(Error::NTooSmall(n));
        }
        for g in raw {
            if g.modulus() != n {
                return Err(Error::ModulusMismatch(n, g.modulus()));
            }
        }
        let mut seen = BTreeSet::new();
        for g in raw {
            if !seen.insert(*g) {
                return Err(Error::DuplicateElement(g.to_string()));
            }
        }
        if raw.iter().any(|g| g.is_identity()) {
            return Err(Error::IdentityInS);
        }
        for g in raw {
            if !seen.contains(&g.inv()) {
                return Err(Error::NotInverseClosed(g.to_string()));
            }
        }

        let mut elems: Vec<DihedralElement> = seen.iter().copied().collect();
        elems.sort();

        let rotation_exps: BTreeSet<usize> =
            elems.iter().filter(|g| g.is_rotation()).map(|g| g.exp()).collect();
        let reflection_exps: Vec<usize> =
            elems.iter().filter(|g| g.is_reflection()).map(|g| g.exp()).collect();

        let kind = classify_counts(n, &rotation_exps, &reflection_exps)?;

        let mut delta = BTreeSet::new();
        for (i, &a) in reflection_exps.iter().enumerate() {
            for &b in reflection_exps.iter().skip(i + 1) {
                let diff = (b + n - a) % n;
                if diff != 0 {
                    delta.insert(diff);
                    delta.insert((n - diff) % n);
                }
            }
        }

        let mut gcd_inputs: Vec<usize> = rotation_exps.iter().copied().collect();
        gcd_inputs.extend(delta.iter().copied());
        let d = gcd_all(n, &gcd_inputs);

        Ok(Self { n, elems, kind, rotation_exps, reflection_exps, delta, d })
    }

    /// Validate a connection set given in element text syntax.
    pub fn parse(n: usize, specs: &[&str]) -> Result<Self> {
        let elems: Result<Vec<_>> =
            specs.iter().map(|s| DihedralElement::parse(s, n)).collect();
        Self::validate(n, &elems?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn elems(&self) -> &[DihedralElement] {
        &self.elems
    }

    pub fn kind(&self) -> CaseKind {
        self.kind
    }

    /// Rotation exponents `T` (symmetric mod `n` by inverse closure).
    pub fn rotation_exps(&self) -> &BTreeSet<usize> {
        &self.rotation_exps
    }

    /// Reflection exponents `A`, strictly ascending.
    pub fn reflection_exps(&self) -> &[usize] {
        &self.reflection_exps
    }

    /// Symmetrized nonzero pairwise differences of `A`.
    pub fn delta(&self) -> &BTreeSet<usize> {
        &self.delta
    }

    /// Connectivity gcd, taken over `T` and the `A`-differences.
    pub fn d(&self) -> usize {
        self.d
    }

    /// Representatives of `T` up to sign, ascending (one of `{t, n-t}` each).
    pub fn rotation_reps(&self) -> Vec<usize> {
        let mut reps = BTreeSet::new();
        for &t in &self.rotation_exps {
            reps.insert(t.min((self.n - t) % self.n));
        }
        reps.into_iter().collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "n": self.n,
            "elements": self.elems.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
            "derived": {
                "case": self.kind.label(),
                "T": self.rotation_exps.iter().copied().collect::<Vec<_>>(),
                "A": self.reflection_exps,
                "delta": self.delta.iter().copied().collect::<Vec<_>>(),
                "d": self.d,
            }
        })
    }
}

fn classify_counts(
    n: usize,
    rot: &BTreeSet<usize>,
    refl: &[usize],
) -> Result<CaseKind> {
    let (nr, nf) = (rot.len(), refl.len());
    match (nr, nf) {
        (_, 0) if nr == 4 => Ok(CaseKind::CaseI),
        (_, 0) => Ok(CaseKind::RotationsOnly(nr)),
        (0, _) if nf == 4 => Ok(CaseKind::CaseII),
        (0, _) => Ok(CaseKind::ReflectionsOnly(nf)),
        (2, 2) => Ok(CaseKind::CaseIII),
        (3, 1) => {
            // Inverse closure forces {a, -a, n/2} with n even.
            if n % 2 == 0 && rot.contains(&(n / 2)) {
                Ok(CaseKind::CaseIV)
            } else {
                Err(Error::MalformedCase(
                    "three rotations require n even and r^{n/2} in S".into(),
                ))
            }
        }
        (1, 3) => {
            if n % 2 == 0 && rot.contains(&(n / 2)) {
                Ok(CaseKind::CaseV)
            } else {
                Err(Error::MalformedCase(
                    "a single rotation must be the involution r^{n/2}".into(),
                ))
            }
        }
        _ => Err(Error::MalformedCase(format!(
            "mixed connection sets are classified only at size 4 \
             (got {nr} rotations and {nf} reflections)"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_i_with_params() {
        let cs = ConnectionSet::parse(6, &["r^1", "r^5", "r^2", "r^4"]).unwrap();
        assert_eq!(cs.kind(), CaseKind::CaseI);
        let t: Vec<usize> = cs.rotation_exps().iter().copied().collect();
        assert_eq!(t, vec![1, 2, 4, 5]);
        assert_eq!(cs.d(), 1);
    }

    #[test]
    fn not_inverse_closed_names_offender() {
        let err = ConnectionSet::parse(6, &["r^1", "r^2"]).unwrap_err();
        assert!(matches!(err, Error::NotInverseClosed(_)));
    }

    #[test]
    fn identity_rejected() {
        let err = ConnectionSet::parse(8, &["e", "s", "s*r^1", "s*r^2"]).unwrap_err();
        assert_eq!(err, Error::IdentityInS);
    }

    #[test]
    fn duplicate_rejected() {
        let raw = vec![
            DihedralElement::rotation(1, 6),
            DihedralElement::rotation(1, 6),
        ];
        let err = ConnectionSet::validate(6, &raw).unwrap_err();
        assert!(matches!(err, Error::DuplicateElement(_)));
    }

    #[test]
    fn n_too_small() {
        let err = ConnectionSet::parse(2, &["r^1"]).unwrap_err();
        assert_eq!(err, Error::NTooSmall(2));
    }

    #[test]
    fn case_iii() {
        let cs = ConnectionSet::parse(9, &["r^1", "r^8", "s", "s*r^2"]).unwrap();
        assert_eq!(cs.kind(), CaseKind::CaseIII);
        assert_eq!(cs.reflection_exps(), &[0, 2]);
    }

    #[test]
    fn case_iv() {
        let cs = ConnectionSet::parse(6, &["r^1", "r^5", "r^3", "s*r^2"]).unwrap();
        assert_eq!(cs.kind(), CaseKind::CaseIV);
    }

    #[test]
    fn case_iv_requires_half_turn() {
        // {r, r^5, r^2} is not inverse-closed as a 3-rotation set without r^3;
        // an inverse-closed 3+1 set lacking r^{n/2} cannot arise for odd n.
        let err = ConnectionSet::parse(7, &["r^1", "r^6", "r^2", "s"]).unwrap_err();
        assert!(matches!(err, Error::NotInverseClosed(_) | Error::MalformedCase(_)));
    }

    #[test]
    fn case_v() {
        let cs = ConnectionSet::parse(6, &["s", "s*r^1", "s*r^2", "r^3"]).unwrap();
        assert_eq!(cs.kind(), CaseKind::CaseV);
    }

    #[test]
    fn case_ii_and_general_reflections() {
        let cs = ConnectionSet::parse(5, &["s", "s*r^1", "s*r^2", "s*r^3"]).unwrap();
        assert_eq!(cs.kind(), CaseKind::CaseII);
        let cs = ConnectionSet::parse(7, &["s", "s*r^1", "s*r^2"]).unwrap();
        assert_eq!(cs.kind(), CaseKind::ReflectionsOnly(3));
    }

    #[test]
    fn derived_params_rotations() {
        // n=10, S={r^{+-2}, r^{+-4}}: d=2
        let cs = ConnectionSet::parse(10, &["r^2", "r^8", "r^4", "r^6"]).unwrap();
        assert_eq!(cs.d(), 2);
        assert_eq!(cs.rotation_reps(), vec![2, 4]);
    }

    #[test]
    fn derived_params_reflections() {
        // Oracle: enumerate +-(a_i - a_j) mod 7 for A = [0,1,2,4]
        let n = 7;
        let a = [0usize, 1, 2, 4];
        let mut oracle = BTreeSet::new();
        for i in 0..a.len() {
            for j in 0..a.len() {
                if i != j {
                    let diff = (a[j] + n - a[i]) % n;
                    if diff != 0 {
                        oracle.insert(diff);
                    }
                }
            }
        }
        let cs = ConnectionSet::parse(7, &["s", "s*r^1", "s*r^2", "s*r^4"]).unwrap();
        assert_eq!(cs.delta(), &oracle);
        assert_eq!(
            cs.delta().iter().copied().collect::<Vec<_>>(),
            vec![1, 2, 3, 4, 5, 6]
        );
        assert_eq!(cs.d(), 1);

        let cs = ConnectionSet::parse(5, &["s", "s*r^1", "s*r^2", "s*r^3"]).unwrap();
        assert_eq!(cs.delta().iter().copied().collect::<Vec<_>>(), vec![1, 2, 3, 4]);
        assert_eq!(cs.d(), 1);
    }

    #[test]
    fn delta_is_symmetric() {
        for (n, a) in [(8usize, vec![0usize, 1, 3, 6]), (9, vec![2, 4, 5])] {
            let specs: Vec<String> = a.iter().map(|x| format!("s*r^{x}")).collect();
            let refs: Vec<&str> = specs.iter().map(|s| s.as_str()).collect();
            let cs = ConnectionSet::parse(n, &refs).unwrap();
            for &x in cs.delta() {
                assert!(cs.delta().contains(&((n - x) % n)));
            }
            assert_eq!(n % cs.d(), 0);
        }
    }

    #[test]
    fn json_shape() {
        let cs = ConnectionSet::parse(7, &["r^1", "r^6", "s", "s*r^3"]).unwrap();
        let v = cs.to_json();
        assert_eq!(v["n"], 7);
        assert_eq!(v["derived"]["case"], "III");
    }
}
