//! The truncated complexes `W_q`, `WO_q`, `I_q` as finite cochain complexes,
//! and their cohomology by exact elimination.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gca::{
    basis_of_degree, differential_monomial, AlgebraSignature, ComplexKind, Element, Monomial, Term,
};
use crate::linalg::{echelon, kernel, rank, solve, PivotOrder, SparseMatrix};
use crate::rational::Rational;

pub const DEFAULT_Q_CAP: u32 = 6;

/// Per-degree monomial bases and differential matrices of one truncated
/// algebra. `diff_matrices[n]` maps degree `n` to degree `n + 1`.
#[derive(Clone, Debug)]
pub struct GradedComplex {
    signature: AlgebraSignature,
    bases: Vec<Vec<Monomial>>,
    index: Vec<HashMap<Monomial, usize>>,
    diff_matrices: Vec<SparseMatrix>,
}

/// Number of monomials: `2^(#y) * sum_{w <= q} p(w)`.
pub fn dimension_estimate(q: u32, kind: ComplexKind) -> BigUint {
    let q = q as usize;
    // partitions p(0..=q)
    let mut p = vec![BigUint::zero(); q + 1];
    p[0] = BigUint::one();
    for part in 1..=q {
        for n in part..=q {
            let add = p[n - part].clone();
            p[n] += add;
        }
    }
    let ys = match kind {
        ComplexKind::W => q,
        ComplexKind::WO => q.div_ceil(2),
        ComplexKind::I => 0,
    };
    let polys: BigUint = p.into_iter().sum();
    polys << ys
}

/// Builds the complex under the default codimension cap.
pub fn build_complex(q: u32, kind: ComplexKind) -> Result<GradedComplex> {
    build_complex_capped(q, kind, DEFAULT_Q_CAP)
}

pub fn build_complex_capped(q: u32, kind: ComplexKind, q_cap: u32) -> Result<GradedComplex> {
    if q == 0 {
        return Err(Error::InvalidInput(
            "codimension q must be at least 1".into(),
        ));
    }
    if q > q_cap {
        return Err(Error::ResourceBudget {
            what: format!("{kind}_{q} complex"),
            estimate: format!("{} monomials", dimension_estimate(q, kind)),
            limit: format!("q <= {q_cap}"),
        });
    }
    let sig = AlgebraSignature::new(q, kind)?;
    let top = sig.top_degree();
    let bases: Vec<Vec<Monomial>> = (0..=top).map(|n| basis_of_degree(&sig, n)).collect();
    let index: Vec<HashMap<Monomial, usize>> = bases
        .iter()
        .map(|b| b.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect())
        .collect();
    let cap = sig.weight_cap();
    let diff_matrices = (0..=top as usize)
        .map(|n| {
            let rows = bases.get(n + 1).map_or(0, Vec::len);
            let cols = bases[n].len();
            let mut triplets = Vec::new();
            if kind != ComplexKind::I {
                for (j, m) in bases[n].iter().enumerate() {
                    for (sign, image) in differential_monomial(m, cap) {
                        let i = index[n + 1][&image];
                        triplets.push((i, j, Rational::from(sign as i64)));
                    }
                }
            }
            SparseMatrix::from_triplets(rows, cols, triplets)
        })
        .collect();
    Ok(GradedComplex {
        signature: sig,
        bases,
        index,
        diff_matrices,
    })
}

impl GradedComplex {
    pub fn signature(&self) -> &AlgebraSignature {
        &self.signature
    }

    pub fn kind(&self) -> ComplexKind {
        self.signature.kind()
    }

    pub fn q(&self) -> u32 {
        self.signature.q()
    }

    pub fn top_degree(&self) -> u32 {
        self.signature.top_degree()
    }

    /// Monomial basis in degree `n`; empty above the top degree.
    pub fn basis(&self, n: u32) -> &[Monomial] {
        self.bases.get(n as usize).map_or(&[], Vec::as_slice)
    }

    pub fn total_dimension(&self) -> usize {
        self.bases.iter().map(Vec::len).sum()
    }

    /// Matrix of `d` from degree `n` to `n + 1`, if `n` is in range.
    pub fn differential_matrix(&self, n: u32) -> Option<&SparseMatrix> {
        self.diff_matrices.get(n as usize)
    }

    fn boundary_matrix_into(&self, n: u32) -> SparseMatrix {
        match n.checked_sub(1).and_then(|m| self.differential_matrix(m)) {
            Some(m) => m.clone(),
            None => SparseMatrix::new(self.basis(n).len(), 0),
        }
    }

    /// Degree and coordinate vector of a homogeneous element; `None` for zero.
    pub fn coordinates(&self, a: &Element) -> Result<Option<(u32, Vec<Rational>)>> {
        if a.signature() != &self.signature {
            return Err(Error::SignatureMismatch(format!(
                "element of {}_{} in complex {}_{}",
                a.signature().kind(),
                a.signature().q(),
                self.kind(),
                self.q()
            )));
        }
        if a.is_zero() {
            return Ok(None);
        }
        let Some(n) = a.homogeneous_degree() else {
            return Err(Error::NonHomogeneous {
                degrees: a.degrees(),
            });
        };
        let mut v = vec![Rational::zero(); self.basis(n).len()];
        for (m, c) in a.terms() {
            v[self.index[n as usize][m]] = c.clone();
        }
        Ok(Some((n, v)))
    }

    pub fn element(&self, n: u32, coords: &[Rational]) -> Element {
        let terms = self
            .basis(n)
            .iter()
            .zip(coords)
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| Term {
                m: m.clone(),
                coeff: c.clone(),
            });
        Element::from_terms(&self.signature, terms).expect("basis monomials are valid")
    }

    pub fn is_cocycle(&self, a: &Element) -> Result<bool> {
        let Some((n, v)) = self.coordinates(a)? else {
            return Ok(true);
        };
        Ok(self.diff_matrices[n as usize]
            .mul_vec(&v)
            .iter()
            .all(Rational::is_zero))
    }

    /// Some `b` with `d b = a`, if one exists.
    pub fn coboundary_preimage(&self, a: &Element) -> Result<Option<Element>> {
        let Some((n, v)) = self.coordinates(a)? else {
            return Ok(Some(Element::zero(&self.signature)));
        };
        if n == 0 {
            return Ok(None);
        }
        Ok(solve(&self.diff_matrices[n as usize - 1], &v).map(|x| self.element(n - 1, &x)))
    }

    pub fn is_coboundary(&self, a: &Element) -> Result<bool> {
        Ok(self.coboundary_preimage(a)?.is_some())
    }

    /// Dimension of the span of the classes of `elems` in `H^n`. Every element
    /// must be a cocycle of degree `n` (zero allowed).
    pub fn class_rank(&self, n: u32, elems: &[Element]) -> Result<usize> {
        let dim = self.basis(n).len();
        let boundaries = self.boundary_matrix_into(n).columns();
        let mut rows = boundaries.clone();
        for e in elems {
            match self.coordinates(e)? {
                None => {}
                Some((m, v)) if m == n => {
                    if !self.is_cocycle(e)? {
                        return Err(Error::InvalidInput(format!("{e} is not a cocycle")));
                    }
                    rows.push(v);
                }
                Some((m, _)) => {
                    return Err(Error::InvalidInput(format!(
                        "{e} has degree {m}, expected {n}"
                    )));
                }
            }
        }
        Ok(rank(&rows, dim) - rank(&boundaries, dim))
    }

    fn degree_cohomology(&self, n: u32) -> (Vec<Vec<Rational>>, usize) {
        let dim = self.basis(n).len();
        let d = &self.diff_matrices[n as usize];
        let cycles = kernel(d);
        let boundary_vectors = self.boundary_matrix_into(n).columns();
        let boundaries = echelon(&boundary_vectors, dim, PivotOrder::Trailing);
        let reduced: Vec<Vec<Rational>> = cycles.iter().map(|z| boundaries.reduce(z)).collect();
        let classes = echelon(&reduced, dim, PivotOrder::Leading);
        let reps = classes.rows().to_vec();
        // independent route: dim ker d_n - rank d_{n-1}
        let check = dim - d.rank() - boundaries.rank();
        let mut stacked = boundary_vectors;
        stacked.extend(reps.iter().cloned());
        assert_eq!(
            rank(&stacked, dim) - boundaries.rank(),
            reps.len(),
            "representatives dependent modulo coboundaries in degree {n}"
        );
        (reps, check)
    }
}

/// Cohomology dimensions and canonical representatives, degree by degree.
/// Only degrees with nonzero cohomology appear.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "CohomologyDoc", try_from = "CohomologyDoc")]
pub struct CohomologyResult {
    pub kind: ComplexKind,
    pub q: u32,
    pub dims: BTreeMap<u32, usize>,
    pub representatives: BTreeMap<u32, Vec<Element>>,
    pub total_dim_check: usize,
}

impl CohomologyResult {
    pub fn dim(&self, n: u32) -> usize {
        self.dims.get(&n).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn representatives_in(&self, n: u32) -> &[Element] {
        self.representatives.get(&n).map_or(&[], Vec::as_slice)
    }
}

#[derive(Serialize, Deserialize)]
struct CohomologyDoc {
    kind: ComplexKind,
    q: u32,
    dims: BTreeMap<u32, usize>,
    representatives: BTreeMap<u32, Vec<Vec<Term>>>,
    total_dim_check: usize,
}

impl From<CohomologyResult> for CohomologyDoc {
    fn from(r: CohomologyResult) -> Self {
        CohomologyDoc {
            kind: r.kind,
            q: r.q,
            dims: r.dims,
            representatives: r
                .representatives
                .into_iter()
                .map(|(n, es)| (n, es.iter().map(Element::to_terms).collect()))
                .collect(),
            total_dim_check: r.total_dim_check,
        }
    }
}

impl TryFrom<CohomologyDoc> for CohomologyResult {
    type Error = Error;

    fn try_from(doc: CohomologyDoc) -> Result<Self> {
        let sig = AlgebraSignature::new(doc.q, doc.kind)?;
        let mut representatives = BTreeMap::new();
        for (n, es) in doc.representatives {
            let es = es
                .into_iter()
                .map(|terms| Element::from_terms(&sig, terms))
                .collect::<Result<Vec<_>>>()?;
            representatives.insert(n, es);
        }
        Ok(CohomologyResult {
            kind: doc.kind,
            q: doc.q,
            dims: doc.dims,
            representatives,
            total_dim_check: doc.total_dim_check,
        })
    }
}

/// `H^n = ker d_n / im d_{n-1}` for every degree, computed in parallel.
pub fn cohomology(cx: &GradedComplex) -> CohomologyResult {
    let per_degree: Vec<(u32, Vec<Vec<Rational>>, usize)> = (0..=cx.top_degree())
        .into_par_iter()
        .map(|n| {
            let (reps, check) = cx.degree_cohomology(n);
            (n, reps, check)
        })
        .collect();
    let mut dims = BTreeMap::new();
    let mut representatives = BTreeMap::new();
    let mut total_dim_check = 0;
    for (n, reps, check) in per_degree {
        total_dim_check += check;
        if reps.is_empty() {
            continue;
        }
        dims.insert(n, reps.len());
        representatives.insert(n, reps.iter().map(|v| cx.element(n, v)).collect());
    }
    CohomologyResult {
        kind: cx.kind(),
        q: cx.q(),
        dims,
        representatives,
        total_dim_check,
    }
}

pub fn is_cocycle(cx: &GradedComplex, a: &Element) -> Result<bool> {
    cx.is_cocycle(a)
}

pub fn is_coboundary(cx: &GradedComplex, a: &Element) -> Result<bool> {
    cx.is_coboundary(a)
}
