//! Vey bases of `H*(W_q)` and `H*(WO_q)`, class flags, the variable set,
//! braced extensions, and cross-validation against the cohomology oracle.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::complexes::{build_complex_capped, cohomology, DEFAULT_Q_CAP};
use crate::error::{Error, Result};
use crate::gca::{weight_vectors, AlgebraSignature, ComplexKind, Element, Monomial};

/// How to read the `WO_q` condition tying `i_1` to the odd entries of `J`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WoCondition {
    /// `i_1 <= j_k` for every odd `j_k`; vacuous when `J` has no odd entry.
    #[default]
    ForallOdd,
    /// Some odd `j_k` with `i_1 <= j_k` must exist.
    ExistsOdd,
}

impl WoCondition {
    pub fn as_str(self) -> &'static str {
        match self {
            WoCondition::ForallOdd => "forall_odd",
            WoCondition::ExistsOdd => "exists_odd",
        }
    }
}

impl fmt::Display for WoCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for WoCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "forall_odd" => Ok(WoCondition::ForallOdd),
            "exists_odd" => Ok(WoCondition::ExistsOdd),
            other => Err(Error::InvalidInput(format!(
                "unknown WO condition {other:?} (expected forall_odd or exists_odd)"
            ))),
        }
    }
}

/// Decides which degree-`2q+1` classes count as independently variable.
pub trait VariabilityPolicy {
    fn is_variable(&self, q: u32, monomial: &Monomial, is_rigid: bool) -> bool;
}

/// Degree `2q+1` and not rigid.
#[derive(Clone, Copy, Debug, Default)]
pub struct NonRigidTopDegree;

impl VariabilityPolicy for NonRigidTopDegree {
    fn is_variable(&self, q: u32, monomial: &Monomial, is_rigid: bool) -> bool {
        monomial.degree() == 2 * q + 1 && !is_rigid
    }
}

/// A Vey basis monomial `y_I c_J` with its flags.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VeyClass {
    pub monomial: Monomial,
    pub complex_kind: ComplexKind,
    pub degree: u32,
    pub is_generalized_gv: bool,
    pub is_residual: bool,
    pub is_rigid: bool,
    pub is_variable_candidate: bool,
}

impl VeyClass {
    /// Unclassified class (all flags false).
    pub fn new(monomial: Monomial, complex_kind: ComplexKind) -> Self {
        VeyClass {
            degree: monomial.degree(),
            monomial,
            complex_kind,
            is_generalized_gv: false,
            is_residual: false,
            is_rigid: false,
            is_variable_candidate: false,
        }
    }

    pub fn q(&self) -> u32 {
        self.monomial.q()
    }

    pub fn name(&self) -> String {
        self.monomial.to_string()
    }
}

/// Fills every flag from `(I, J, q)` alone, using the default variability policy.
pub fn classify(v: VeyClass) -> VeyClass {
    classify_with(v, &NonRigidTopDegree)
}

pub fn classify_with(mut v: VeyClass, policy: &dyn VariabilityPolicy) -> VeyClass {
    let q = v.q();
    let m = &v.monomial;
    let i1 = m.y().first().copied().unwrap_or(0);
    let w = m.weight();
    v.degree = m.degree();
    v.is_generalized_gv = m.y() == [1];
    v.is_residual = w == q;
    v.is_rigid = !m.y().is_empty() && i1 + w >= q + 2;
    v.is_variable_candidate = policy.is_variable(q, m, v.is_rigid);
    v
}

fn admissible(q: u32, kind: ComplexKind, cond: WoCondition, y: &[u32], j: &[u32]) -> bool {
    let Some(&i1) = y.first() else { return false };
    let w: u32 = j.iter().sum();
    if w > q || i1 + w < q + 1 {
        return false;
    }
    match kind {
        ComplexKind::W => j.first().is_some_and(|&j1| i1 <= j1),
        ComplexKind::WO => {
            if y.iter().any(|i| i % 2 == 0) {
                return false;
            }
            let mut odd = j.iter().filter(|jk| *jk % 2 == 1);
            match cond {
                WoCondition::ForallOdd => odd.all(|&jk| i1 <= jk),
                WoCondition::ExistsOdd => odd.any(|&jk| i1 <= jk),
            }
        }
        ComplexKind::I => false,
    }
}

/// Vey basis in canonical order under the default `WO` reading.
pub fn vey_basis(q: u32, kind: ComplexKind) -> Result<Vec<VeyClass>> {
    vey_basis_with(q, kind, WoCondition::default())
}

/// All `y_I c_J` with `I` nonempty satisfying the index conditions. Pure
/// polynomial classes are left to the oracle.
pub fn vey_basis_with(q: u32, kind: ComplexKind, cond: WoCondition) -> Result<Vec<VeyClass>> {
    if kind == ComplexKind::I {
        return Err(Error::InvalidInput(
            "Vey bases are defined for W and WO only".into(),
        ));
    }
    let sig = AlgebraSignature::new(q, kind)?;
    let idx = sig.odd_indices();
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << idx.len()) {
        let y: Vec<u32> = idx
            .iter()
            .enumerate()
            .filter(|(b, _)| mask >> b & 1 == 1)
            .map(|(_, &i)| i)
            .collect();
        for w in 1..=q {
            for e in weight_vectors(q, w) {
                let m = Monomial::new(y.clone(), e);
                if admissible(q, kind, cond, &y, &m.c_indices()) {
                    out.push(m);
                }
            }
        }
    }
    out.sort();
    Ok(out
        .into_iter()
        .map(|m| classify(VeyClass::new(m, kind)))
        .collect())
}

/// Degree-`2q+1` `WO_q` Vey classes flagged variable; `v_q` is the length.
///
/// Odd degree forces an odd number of `y`s, and three of them plus the
/// weight condition already exceed `2q+1`, so only single-`y` monomials are
/// enumerated.
pub fn variable_set(q: u32) -> Result<Vec<VeyClass>> {
    AlgebraSignature::wo(q)?;
    let cond = WoCondition::default();
    let mut out = Vec::new();
    for i in (1..=q).step_by(2) {
        let w = q + 1 - i;
        for e in weight_vectors(q, w) {
            let m = Monomial::new(vec![i], e);
            if admissible(q, ComplexKind::WO, cond, &[i], &m.c_indices()) {
                let v = classify(VeyClass::new(m, ComplexKind::WO));
                if v.is_variable_candidate {
                    out.push(v);
                }
            }
        }
    }
    out.sort_by(|a, b| a.monomial.cmp(&b.monomial));
    Ok(out)
}

pub fn variable_count(q: u32) -> Result<usize> {
    Ok(variable_set(q)?.len())
}

/// Largest `k` with `4k <= q + 1`.
pub fn kappa(q: u32) -> u32 {
    (q + 1) / 4
}

/// `y_{i_1} y_{I'} c_J` built from a variable class `y_{i_1} c_J` and even
/// indices `I'`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtendedClass {
    pub monomial: Monomial,
    pub base: Monomial,
    pub i_prime: Vec<u32>,
    pub degree: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtendedBasis {
    pub q: u32,
    pub classes: Vec<ExtendedClass>,
    pub counts: BTreeMap<u32, usize>,
}

impl ExtendedBasis {
    pub fn count(&self, k: u32) -> usize {
        self.counts.get(&k).copied().unwrap_or(0)
    }
}

/// Even indices `e` usable in `I'`: `2e <= q + 1`.
pub fn brace_indices(q: u32) -> Vec<u32> {
    (1..=q).filter(|e| e % 2 == 0 && 2 * e <= q + 1).collect()
}

/// Extended set restricted to degrees in `degrees`, grouped by degree.
pub fn extended_basis(q: u32, degrees: RangeInclusive<u32>) -> Result<ExtendedBasis> {
    let evens = brace_indices(q);
    let mut classes = Vec::new();
    for base in variable_set(q)? {
        let i1 = base.monomial.y()[0];
        let usable: Vec<u32> = evens.iter().copied().filter(|&e| e > i1).collect();
        for mask in 0u64..(1u64 << usable.len()) {
            let i_prime: Vec<u32> = usable
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            let mut y = vec![i1];
            y.extend(&i_prime);
            let monomial = Monomial::new(y, base.monomial.c().to_vec());
            let degree = monomial.degree();
            if degrees.contains(&degree) {
                classes.push(ExtendedClass {
                    monomial,
                    base: base.monomial.clone(),
                    i_prime,
                    degree,
                });
            }
        }
    }
    classes.sort_by(|a, b| a.monomial.cmp(&b.monomial));
    let mut counts = BTreeMap::new();
    for c in &classes {
        *counts.entry(c.degree).or_insert(0) += 1;
    }
    Ok(ExtendedBasis { q, classes, counts })
}

/// Printed generator listings that the oracle is compared against.
fn reference_listing(q: u32, kind: ComplexKind) -> Option<Vec<Monomial>> {
    let m = |y: &[u32], j: &[u32]| Monomial::from_indices(q, y, j).expect("valid listing entry");
    match (kind, q) {
        (ComplexKind::W, 2) => Some(vec![
            m(&[1], &[1, 1]),
            m(&[1], &[2]),
            m(&[2], &[2]),
            m(&[1, 2], &[2]),
        ]),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeValidation {
    pub degree: u32,
    pub enumerated: usize,
    pub oracle_dim: usize,
    pub all_cocycles: bool,
    pub independent: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl DegreeValidation {
    pub fn counts_match(&self) -> bool {
        self.enumerated == self.oracle_dim
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub q: u32,
    pub kind: ComplexKind,
    pub wo_condition: WoCondition,
    pub degrees: Vec<DegreeValidation>,
}

impl ValidationReport {
    pub fn all_independent(&self) -> bool {
        self.degrees.iter().all(|d| d.independent)
    }

    /// Exact count agreement in every degree above `2q`.
    pub fn counts_match_above(&self, n: u32) -> bool {
        self.degrees
            .iter()
            .filter(|d| d.degree > n)
            .all(DegreeValidation::counts_match)
    }

    pub fn degree(&self, n: u32) -> Option<&DegreeValidation> {
        self.degrees.iter().find(|d| d.degree == n)
    }
}

pub fn validate_vey(q: u32, kind: ComplexKind) -> Result<ValidationReport> {
    validate_vey_with(q, kind, WoCondition::default(), DEFAULT_Q_CAP)
}

/// Checks each enumerated class is a cocycle, that their classes are
/// independent in every degree, and compares counts with the oracle.
pub fn validate_vey_with(
    q: u32,
    kind: ComplexKind,
    cond: WoCondition,
    q_cap: u32,
) -> Result<ValidationReport> {
    let classes = vey_basis_with(q, kind, cond)?;
    let cx = build_complex_capped(q, kind, q_cap)?;
    let h = cohomology(&cx);
    let sig = cx.signature().clone();
    let mut by_degree: BTreeMap<u32, Vec<Monomial>> = BTreeMap::new();
    for v in &classes {
        by_degree
            .entry(v.degree)
            .or_default()
            .push(v.monomial.clone());
    }
    let listing = reference_listing(q, kind);
    let mut degrees = Vec::new();
    for n in 0..=cx.top_degree() {
        let enumerated = by_degree.remove(&n).unwrap_or_default();
        let oracle_dim = h.dim(n);
        if enumerated.is_empty() && oracle_dim == 0 {
            continue;
        }
        let elems: Vec<Element> = enumerated
            .iter()
            .map(|m| Element::from_monomial(&sig, m.clone()))
            .collect::<Result<_>>()?;
        let mut all_cocycles = true;
        for e in &elems {
            all_cocycles &= cx.is_cocycle(e)?;
        }
        let independent = all_cocycles && cx.class_rank(n, &elems)? == elems.len();
        let mut notes = Vec::new();
        if enumerated.len() != oracle_dim {
            if n <= 2 * q {
                let outside: Vec<String> = h
                    .representatives_in(n)
                    .iter()
                    .map(|e| e.to_string())
                    .collect();
                notes.push(format!(
                    "degree <= 2q: {} oracle class(es) outside the Vey list (pure polynomial or unit): {}",
                    oracle_dim.saturating_sub(enumerated.len()),
                    outside.join(", ")
                ));
            } else {
                notes.push(format!(
                    "count mismatch: {} enumerated vs oracle dimension {oracle_dim}",
                    enumerated.len()
                ));
            }
        }
        if let Some(listing) = &listing {
            let printed: Vec<&Monomial> = listing.iter().filter(|m| m.degree() == n).collect();
            for m in &enumerated {
                if !printed.contains(&m) {
                    notes.push(format!(
                        "{m} is a nontrivial class absent from the printed generator list"
                    ));
                }
            }
            for m in printed {
                if !enumerated.contains(m) {
                    notes.push(format!(
                        "printed generator {m} is not in the enumerated basis"
                    ));
                }
            }
        }
        degrees.push(DegreeValidation {
            degree: n,
            enumerated: enumerated.len(),
            oracle_dim,
            all_cocycles,
            independent,
            notes,
        });
    }
    Ok(ValidationReport {
        q,
        kind,
        wo_condition: cond,
        degrees,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[VeyClass]) -> Vec<String> {
        v.iter().map(VeyClass::name).collect()
    }

    #[test]
    fn small_bases() {
        assert_eq!(names(&vey_basis(1, ComplexKind::WO).unwrap()), ["y1c1"]);
        let w2 = vey_basis(2, ComplexKind::W).unwrap();
        assert_eq!(names(&w2), ["y1c1^2", "y1c2", "y2c2", "y1y2c1^2", "y1y2c2"]);
        let wo3: Vec<_> = vey_basis(3, ComplexKind::WO)
            .unwrap()
            .into_iter()
            .filter(|v| v.degree == 7)
            .collect();
        assert_eq!(names(&wo3), ["y1c1^3", "y1c1c2", "y1c3"]);
    }

    #[test]
    fn flags() {
        let w2 = vey_basis(2, ComplexKind::W).unwrap();
        let g = &w2[0];
        assert!(g.is_generalized_gv && g.is_residual && !g.is_rigid && g.is_variable_candidate);
        let r = &w2[2];
        assert!(!r.is_generalized_gv && r.is_residual && r.is_rigid && !r.is_variable_candidate);
    }

    #[test]
    fn counts() {
        let v: Vec<usize> = (1..=4).map(|q| variable_count(q).unwrap()).collect();
        assert_eq!(v[..3], [1, 2, 3]);
        assert_eq!((kappa(2), kappa(3), kappa(7)), (0, 1, 2));
        assert_eq!(extended_basis(3, 10..=10).unwrap().count(10), 3);
    }

    #[test]
    fn exists_reading_is_stricter() {
        let forall = vey_basis_with(2, ComplexKind::WO, WoCondition::ForallOdd).unwrap();
        let exists = vey_basis_with(2, ComplexKind::WO, WoCondition::ExistsOdd).unwrap();
        assert_eq!(names(&forall), ["y1c1^2", "y1c2"]);
        assert_eq!(names(&exists), ["y1c1^2"]);
    }

    #[test]
    fn w2_report_flags_degree_eight() {
        let r = validate_vey(2, ComplexKind::W).unwrap();
        let d8 = r.degree(8).unwrap();
        assert_eq!((d8.enumerated, d8.oracle_dim), (2, 2));
        assert!(d8.notes.iter().any(|n| n.contains("y1y2c1^2")));
        assert!(r.all_independent());
        assert!(r.counts_match_above(4));
    }
}
