//! Bigraded minimal model of the truncated polynomial algebra `I_q`, rank
//! tables of its indecomposables, and Poincaré series of free algebras.

pub mod free;

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gca::{basis_of_degree, AlgebraSignature, Element, Monomial, Term};
use crate::linalg::{echelon, kernel, PivotOrder, SparseMatrix};
use crate::rational::Rational;

pub use free::{FreeAlgebra, FreeElement, FreeMonomial};

/// Limits on model construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModelBudget {
    pub max_degree: u32,
    /// Largest total free-algebra dimension (degrees `0..=D+2`) attempted.
    pub max_basis: usize,
}

impl Default for ModelBudget {
    fn default() -> Self {
        ModelBudget {
            max_degree: 12,
            max_basis: 20_000,
        }
    }
}

/// One term of a model differential, factors listed in generator order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeTerm {
    pub factors: Vec<(String, u32)>,
    pub coeff: Rational,
}

/// Generators through degree `degree_cap` with their differentials and their
/// images in `I_q`. Generators absent from `images` map to zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelStage {
    pub q: u32,
    pub degree_cap: u32,
    pub generators: BTreeMap<u32, Vec<String>>,
    pub differentials: BTreeMap<String, Vec<FreeTerm>>,
    pub images: BTreeMap<String, Vec<Term>>,
    /// `H^n(model) -> H^n(I_q)` is an isomorphism, for `n < degree_cap`.
    pub quasi_iso_check: BTreeMap<u32, bool>,
}

fn generator_id(degree: u32, k: usize) -> String {
    format!("g{degree}_{k}")
}

/// Monomial basis of `A^n = I_q^n`.
fn target_basis(sig: &AlgebraSignature, n: u32) -> Vec<Monomial> {
    basis_of_degree(sig, n)
}

fn target_coordinates(basis: &[Monomial], e: &Element) -> Vec<Rational> {
    basis.iter().map(|m| e.coefficient(m)).collect()
}

struct Builder {
    sig: AlgebraSignature,
    alg: FreeAlgebra,
    images: Vec<Option<Element>>,
    budget: ModelBudget,
    degree_cap: u32,
}

impl Builder {
    fn check_budget(&self, top: u32) -> Result<()> {
        let total: usize = self
            .alg
            .dimensions(top)
            .iter()
            .fold(0usize, |a, b| a.saturating_add(*b));
        if total > self.budget.max_basis {
            return Err(Error::ResourceBudget {
                what: format!(
                    "minimal model of I_{} through degree {}",
                    self.sig.q(),
                    self.degree_cap
                ),
                estimate: format!("free-algebra dimension {total}"),
                limit: format!("free-algebra dimension <= {}", self.budget.max_basis),
            });
        }
        Ok(())
    }

    /// `phi` on a list of free-algebra vectors, as coordinate rows in `A^n`.
    fn phi_rows(
        &self,
        basis: &[FreeMonomial],
        vectors: &[Vec<Rational>],
        target: &[Monomial],
    ) -> Vec<Vec<Rational>> {
        let images: Vec<Vec<Rational>> = basis
            .iter()
            .map(|m| target_coordinates(target, &self.alg.evaluate(m, &self.images, &self.sig)))
            .collect();
        vectors
            .iter()
            .map(|v| {
                let mut row = vec![Rational::zero(); target.len()];
                for (c, img) in v.iter().zip(&images) {
                    if c.is_zero() {
                        continue;
                    }
                    for (r, x) in row.iter_mut().zip(img) {
                        if !x.is_zero() {
                            *r += &(c * x);
                        }
                    }
                }
                row
            })
            .collect()
    }

    fn phi_matrix(&self, basis: &[FreeMonomial], target: &[Monomial]) -> SparseMatrix {
        let mut triplets = Vec::new();
        for (j, m) in basis.iter().enumerate() {
            let img = target_coordinates(target, &self.alg.evaluate(m, &self.images, &self.sig));
            for (i, x) in img.into_iter().enumerate() {
                if !x.is_zero() {
                    triplets.push((i, j, x));
                }
            }
        }
        SparseMatrix::from_triplets(target.len(), basis.len(), triplets)
    }

    fn cocycles(&self, n: u32) -> (Vec<FreeMonomial>, Vec<Vec<Rational>>) {
        let src = self.alg.basis(n);
        let dst = self.alg.basis(n + 1);
        let d = self.alg.differential_matrix(&src, &dst);
        (src, kernel(&d))
    }

    /// Adds degree-`n` cocycle generators hitting a complement of `phi(Z^n)`.
    fn extend_onto(&mut self, n: u32) -> usize {
        let target = target_basis(&self.sig, n);
        if target.is_empty() {
            return 0;
        }
        let (basis, z) = self.cocycles(n);
        let hit = echelon(
            &self.phi_rows(&basis, &z, &target),
            target.len(),
            PivotOrder::Leading,
        );
        let mut added = 0;
        for (col, m) in target.iter().enumerate() {
            if hit.pivots().contains(&col) {
                continue;
            }
            added += 1;
            let id = generator_id(n, self.count_in_degree(n) + 1);
            self.alg.add_generator(id, n, FreeElement::new());
            self.images.push(Some(
                Element::from_monomial(&self.sig, m.clone()).expect("valid target monomial"),
            ));
        }
        added
    }

    /// Adds degree-`n` generators whose differentials span a complement of
    /// `B^{n+1}` in `ker(phi) ∩ Z^{n+1}`.
    fn kill_kernel(&mut self, n: u32) -> usize {
        let src = self.alg.basis(n + 1);
        let dst = self.alg.basis(n + 2);
        let d = self.alg.differential_matrix(&src, &dst);
        let target = target_basis(&self.sig, n + 1);
        let phi = self.phi_matrix(&src, &target);
        let stacked = SparseMatrix::from_triplets(
            d.rows() + phi.rows(),
            src.len(),
            d.entries().iter().cloned().chain(
                phi.entries()
                    .iter()
                    .map(|(r, c, v)| (r + d.rows(), *c, v.clone())),
            ),
        );
        let k = kernel(&stacked);
        if k.is_empty() {
            return 0;
        }
        let lower = self.alg.basis(n);
        let b = self.alg.differential_matrix(&lower, &src).columns();
        let boundaries = echelon(&b, src.len(), PivotOrder::Leading);
        let reduced: Vec<Vec<Rational>> = k.iter().map(|z| boundaries.reduce(z)).collect();
        let fresh = echelon(&reduced, src.len(), PivotOrder::Leading);
        for row in fresh.rows() {
            let id = generator_id(n, self.count_in_degree(n) + 1);
            let dv = FreeAlgebra::vector_to_element(&src, row);
            self.alg.add_generator(id, n, dv);
            self.images.push(None);
        }
        fresh.rank()
    }

    fn count_in_degree(&self, n: u32) -> usize {
        (0..self.alg.len())
            .filter(|&i| self.alg.degree_of(i) == n)
            .count()
    }
}

/// Checks `H^n(model) -> H^n(I_q)` is bijective in each degree of `degrees`.
fn quasi_iso_certificate(
    alg: &FreeAlgebra,
    images: &[Option<Element>],
    sig: &AlgebraSignature,
    degrees: impl Iterator<Item = u32>,
) -> BTreeMap<u32, bool> {
    let builder = Builder {
        sig: sig.clone(),
        alg: alg.clone(),
        images: images.to_vec(),
        budget: ModelBudget::default(),
        degree_cap: 0,
    };
    degrees
        .map(|n| {
            let target = target_basis(sig, n);
            let (basis, z) = builder.cocycles(n);
            let boundary_rank = match n.checked_sub(1) {
                Some(m) => alg.differential_matrix(&alg.basis(m), &basis).rank(),
                None => 0,
            };
            let h_dim = z.len() - boundary_rank;
            let phi_rank =
                crate::linalg::rank(&builder.phi_rows(&basis, &z, &target), target.len());
            (n, h_dim == target.len() && phi_rank == target.len())
        })
        .collect()
}

pub fn build_model(q: u32, degree_cap: u32) -> Result<ModelStage> {
    build_model_with(q, degree_cap, ModelBudget::default())
}

/// Degree-by-degree construction: at each `n`, first cover the cokernel of
/// `H^n(model) -> A^n`, then kill the kernel in degree `n + 1`.
pub fn build_model_with(q: u32, degree_cap: u32, budget: ModelBudget) -> Result<ModelStage> {
    if degree_cap < 2 {
        return Err(Error::InvalidInput(format!(
            "model degree cap must be at least 2, got {degree_cap}"
        )));
    }
    if degree_cap > budget.max_degree {
        // the model contains the polynomial algebra on generators hitting c_1..c_q
        let mut poly = FreeAlgebra::new();
        for i in 1..=q.min(degree_cap / 2) {
            poly.add_generator(format!("c{i}"), 2 * i, FreeElement::new());
        }
        let lower: usize = poly
            .dimensions(degree_cap + 2)
            .iter()
            .fold(0usize, |a, b| a.saturating_add(*b));
        return Err(Error::ResourceBudget {
            what: format!("minimal model of I_{q} through degree {degree_cap}"),
            estimate: format!("free-algebra dimension >= {lower}"),
            limit: format!("degree <= {}", budget.max_degree),
        });
    }
    let sig = AlgebraSignature::truncated(q)?;
    let mut b = Builder {
        sig: sig.clone(),
        alg: FreeAlgebra::new(),
        images: Vec::new(),
        budget,
        degree_cap,
    };
    for n in 2..=degree_cap {
        b.check_budget(n + 2)?;
        let a = b.extend_onto(n);
        b.check_budget(n + 2)?;
        let k = b.kill_kernel(n);
        log::debug!("model I_{q}: degree {n}: {a} cocycle generator(s), {k} killing generator(s)");
    }
    let quasi_iso_check = quasi_iso_certificate(&b.alg, &b.images, &sig, 0..degree_cap);
    Ok(ModelStage::from_algebra(
        q,
        degree_cap,
        &b.alg,
        &b.images,
        quasi_iso_check,
    ))
}

impl ModelStage {
    fn from_algebra(
        q: u32,
        degree_cap: u32,
        alg: &FreeAlgebra,
        images: &[Option<Element>],
        quasi_iso_check: BTreeMap<u32, bool>,
    ) -> Self {
        let mut generators: BTreeMap<u32, Vec<String>> = BTreeMap::new();
        let mut differentials = BTreeMap::new();
        let mut image_map = BTreeMap::new();
        for i in 0..alg.len() {
            let id = alg.id(i).to_string();
            generators
                .entry(alg.degree_of(i))
                .or_default()
                .push(id.clone());
            let terms = alg
                .generator_differential(i)
                .iter()
                .map(|(m, c)| FreeTerm {
                    factors: m
                        .exponents()
                        .iter()
                        .enumerate()
                        .filter(|(_, e)| **e > 0)
                        .map(|(k, e)| (alg.id(k).to_string(), *e))
                        .collect(),
                    coeff: c.clone(),
                })
                .collect();
            differentials.insert(id.clone(), terms);
            if let Some(img) = &images[i] {
                image_map.insert(id, img.to_terms());
            }
        }
        ModelStage {
            q,
            degree_cap,
            generators,
            differentials,
            images: image_map,
            quasi_iso_check,
        }
    }

    /// Rebuilds the free algebra and generator images.
    pub fn algebra(&self) -> Result<(FreeAlgebra, Vec<Option<Element>>)> {
        let sig = AlgebraSignature::truncated(self.q)?;
        let mut alg = FreeAlgebra::new();
        let mut images = Vec::new();
        let mut index: HashMap<&str, usize> = HashMap::new();
        for (&deg, ids) in &self.generators {
            for id in ids {
                let terms = self.differentials.get(id).ok_or_else(|| {
                    Error::InvalidInput(format!("no differential for generator {id}"))
                })?;
                let mut d = FreeElement::new();
                for t in terms {
                    let mut exps = vec![0; alg.len()];
                    for (f, e) in &t.factors {
                        let k = *index.get(f.as_str()).ok_or_else(|| {
                            Error::InvalidInput(format!("{id}: unknown or later generator {f}"))
                        })?;
                        exps[k] = *e;
                    }
                    d.insert(FreeMonomial::from_exponents(exps), t.coeff.clone());
                }
                let k = alg.add_generator(id.clone(), deg, d);
                index.insert(id, k);
                images.push(match self.images.get(id) {
                    Some(terms) => Some(Element::from_terms(&sig, terms.iter().cloned())?),
                    None => None,
                });
            }
        }
        Ok((alg, images))
    }

    pub fn rank(&self, degree: u32) -> usize {
        self.generators.get(&degree).map_or(0, Vec::len)
    }

    pub fn rank_table(&self) -> RankTable {
        rank_table(self)
    }

    /// No generator differential has a linear term.
    pub fn is_minimal(&self) -> Result<bool> {
        let (alg, _) = self.algebra()?;
        Ok((0..alg.len()).all(|i| {
            alg.generator_differential(i)
                .keys()
                .all(|m| m.length() >= 2)
        }))
    }

    /// `d(d(x)) = 0` for every generator.
    pub fn d_squared_vanishes(&self) -> Result<bool> {
        let (alg, _) = self.algebra()?;
        Ok((0..alg.len()).all(|i| alg.differential(alg.generator_differential(i)).is_empty()))
    }

    /// `phi(d x) = 0` for every generator, i.e. `phi` is a chain map.
    pub fn is_chain_map(&self) -> Result<bool> {
        let (alg, images) = self.algebra()?;
        let sig = AlgebraSignature::truncated(self.q)?;
        Ok((0..alg.len()).all(|i| {
            alg.generator_differential(i)
                .iter()
                .map(|(m, c)| alg.evaluate(m, &images, &sig).scale(c))
                .try_fold(Element::zero(&sig), |acc, e| acc.add(&e))
                .is_ok_and(|e| e.is_zero())
        }))
    }

    /// Recomputes the quasi-isomorphism certificate from scratch.
    pub fn recheck_quasi_iso(&self) -> Result<BTreeMap<u32, bool>> {
        let (alg, images) = self.algebra()?;
        let sig = AlgebraSignature::truncated(self.q)?;
        Ok(quasi_iso_certificate(
            &alg,
            &images,
            &sig,
            0..self.degree_cap,
        ))
    }

    pub fn quasi_iso_holds(&self) -> bool {
        self.quasi_iso_check.len() == self.degree_cap as usize
            && self.quasi_iso_check.values().all(|&b| b)
    }
}

/// Number of model generators per degree; only nonzero entries are kept.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankTable {
    pub q: u32,
    pub ranks: BTreeMap<u32, usize>,
    pub degree_cap: u32,
}

impl RankTable {
    pub fn rank(&self, degree: u32) -> usize {
        self.ranks.get(&degree).copied().unwrap_or(0)
    }
}

pub fn rank_table(model: &ModelStage) -> RankTable {
    RankTable {
        q: model.q,
        degree_cap: model.degree_cap,
        ranks: model
            .generators
            .iter()
            .filter(|(_, ids)| !ids.is_empty())
            .map(|(&d, ids)| (d, ids.len()))
            .collect(),
    }
}

/// Coefficients of a graded dimension series, index = degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoincareSeries {
    pub coefficients: Vec<u64>,
}

impl PoincareSeries {
    pub fn coefficient(&self, n: usize) -> u64 {
        self.coefficients.get(n).copied().unwrap_or(0)
    }
}

/// Series of the free graded-commutative algebra on `g_m` generators in
/// degree `m - loops`, for each `(m, g_m)` in `ranks`, through degree `cap`.
pub fn loop_poincare(ranks: &BTreeMap<u32, usize>, loops: u32, cap: u32) -> Result<PoincareSeries> {
    let cap = cap as usize;
    let mut c = vec![0u64; cap + 1];
    c[0] = 1;
    let overflow = || Error::ResourceBudget {
        what: "Poincaré series coefficient".into(),
        estimate: "coefficient above 2^64".into(),
        limit: "u64".into(),
    };
    for (&m, &g) in ranks {
        if m <= loops {
            continue;
        }
        let d = (m - loops) as usize;
        if d > cap {
            continue;
        }
        for _ in 0..g {
            if d % 2 == 1 {
                for k in (d..=cap).rev() {
                    c[k] = c[k].checked_add(c[k - d]).ok_or_else(overflow)?;
                }
            } else {
                for k in d..=cap {
                    c[k] = c[k].checked_add(c[k - d]).ok_or_else(overflow)?;
                }
            }
        }
    }
    Ok(PoincareSeries { coefficients: c })
}
