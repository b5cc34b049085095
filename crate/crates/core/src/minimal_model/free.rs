//! Free graded-commutative algebras on finitely many generators of degree at
//! least two, with a derivation given on generators.

use std::collections::{BTreeMap, HashMap};

use crate::gca::{AlgebraSignature, Element};
use crate::linalg::SparseMatrix;
use crate::rational::Rational;

/// Exponent vector over generators in creation order, trailing zeros trimmed.
/// Odd generators carry exponent 0 or 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FreeMonomial(Vec<u32>);

impl FreeMonomial {
    pub fn from_exponents(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        FreeMonomial(exps)
    }

    pub fn generator(i: usize) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        FreeMonomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    /// Total exponent (word length).
    pub fn length(&self) -> u32 {
        self.0.iter().sum()
    }
}

pub type FreeElement = BTreeMap<FreeMonomial, Rational>;

fn add_into(out: &mut FreeElement, m: FreeMonomial, c: &Rational) {
    if c.is_zero() {
        return;
    }
    match out.entry(m) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c.clone());
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct FreeAlgebra {
    degrees: Vec<u32>,
    ids: Vec<String>,
    diffs: Vec<FreeElement>,
}

impl FreeAlgebra {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a generator; `d` must only involve earlier generators.
    pub fn add_generator(&mut self, id: String, degree: u32, d: FreeElement) -> usize {
        assert!(degree >= 2, "generators of degree < 2 are not supported");
        self.degrees.push(degree);
        self.ids.push(id);
        self.diffs.push(d);
        self.degrees.len() - 1
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn degree_of(&self, i: usize) -> u32 {
        self.degrees[i]
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn generator_differential(&self, i: usize) -> &FreeElement {
        &self.diffs[i]
    }

    pub fn is_odd(&self, i: usize) -> bool {
        self.degrees[i] % 2 == 1
    }

    pub fn degree(&self, m: &FreeMonomial) -> u32 {
        m.0.iter().zip(&self.degrees).map(|(e, d)| e * d).sum()
    }

    /// Dimension of each degree `0..=n`.
    pub fn dimensions(&self, n: u32) -> Vec<usize> {
        let n = n as usize;
        let mut dims = vec![0usize; n + 1];
        dims[0] = 1;
        for (i, &d) in self.degrees.iter().enumerate() {
            let d = d as usize;
            if self.is_odd(i) {
                for k in (d..=n).rev() {
                    dims[k] = dims[k].saturating_add(dims[k - d]);
                }
            } else {
                for k in d..=n {
                    dims[k] = dims[k].saturating_add(dims[k - d]);
                }
            }
        }
        dims
    }

    /// Monomials of degree `n`, sorted.
    pub fn basis(&self, n: u32) -> Vec<FreeMonomial> {
        fn rec(
            alg: &FreeAlgebra,
            i: usize,
            rest: u32,
            cur: &mut Vec<u32>,
            out: &mut Vec<FreeMonomial>,
        ) {
            if rest == 0 {
                out.push(FreeMonomial::from_exponents(cur.clone()));
                return;
            }
            if i == alg.len() {
                return;
            }
            let d = alg.degrees[i];
            let max = if alg.is_odd(i) {
                1.min(rest / d)
            } else {
                rest / d
            };
            for e in 0..=max {
                cur[i] = e;
                rec(alg, i + 1, rest - e * d, cur, out);
            }
            cur[i] = 0;
        }
        let mut out = Vec::new();
        let mut cur = vec![0; self.len()];
        rec(self, 0, n, &mut cur, &mut out);
        out.sort();
        out
    }

    /// Product of monomials with its Koszul sign, or `None` when an odd
    /// generator repeats.
    pub fn mul_monomials(&self, a: &FreeMonomial, b: &FreeMonomial) -> Option<(i32, FreeMonomial)> {
        let n = a.0.len().max(b.0.len());
        let mut exps = vec![0; n];
        let mut odd_a_after = 0u32;
        let mut swaps = 0u32;
        // walk from the highest index down, counting odd factors of `a` above each odd factor of `b`
        for i in (0..n).rev() {
            let (ea, eb) = (a.exp(i), b.exp(i));
            if self.is_odd(i) {
                if ea + eb > 1 {
                    return None;
                }
                if eb == 1 {
                    swaps += odd_a_after;
                }
                if ea == 1 {
                    odd_a_after += 1;
                }
            }
            exps[i] = ea + eb;
        }
        Some((
            if swaps.is_multiple_of(2) { 1 } else { -1 },
            FreeMonomial::from_exponents(exps),
        ))
    }

    pub fn mul(&self, a: &FreeElement, b: &FreeElement) -> FreeElement {
        let mut out = FreeElement::new();
        for (ma, ca) in a {
            for (mb, cb) in b {
                if let Some((s, m)) = self.mul_monomials(ma, mb) {
                    let c = ca * cb;
                    add_into(&mut out, m, &if s < 0 { -c } else { c });
                }
            }
        }
        out
    }

    pub fn monomial_differential(&self, m: &FreeMonomial) -> FreeElement {
        let mut out = FreeElement::new();
        let mut prefix_degree = 0;
        for (i, &e) in m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            // m = P x_i^e S
            let mut left = m.0[..=i].to_vec();
            left[i] = e - 1;
            let right: Vec<u32> =
                m.0.iter()
                    .enumerate()
                    .map(|(k, &x)| if k > i { x } else { 0 })
                    .collect();
            let left =
                FreeElement::from([(FreeMonomial::from_exponents(left), Rational::from(e as i64))]);
            let right = FreeElement::from([(FreeMonomial::from_exponents(right), Rational::one())]);
            let term = self.mul(&self.mul(&left, &self.diffs[i]), &right);
            let sign = if prefix_degree % 2 == 0 {
                Rational::one()
            } else {
                Rational::from(-1)
            };
            for (mm, c) in term {
                add_into(&mut out, mm, &(&c * &sign));
            }
            prefix_degree += e * self.degrees[i];
        }
        out
    }

    pub fn differential(&self, a: &FreeElement) -> FreeElement {
        let mut out = FreeElement::new();
        for (m, c) in a {
            for (mm, cc) in self.monomial_differential(m) {
                add_into(&mut out, mm, &(c * &cc));
            }
        }
        out
    }

    /// Matrix of `d` from the basis `src` to the basis `dst`.
    pub fn differential_matrix(&self, src: &[FreeMonomial], dst: &[FreeMonomial]) -> SparseMatrix {
        let index: HashMap<&FreeMonomial, usize> =
            dst.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut triplets = Vec::new();
        for (j, m) in src.iter().enumerate() {
            for (mm, c) in self.monomial_differential(m) {
                triplets.push((index[&mm], j, c));
            }
        }
        SparseMatrix::from_triplets(dst.len(), src.len(), triplets)
    }

    /// Image of a monomial under the algebra map sending generator `i` to
    /// `images[i]` (zero when `None`).
    pub fn evaluate(
        &self,
        m: &FreeMonomial,
        images: &[Option<Element>],
        sig: &AlgebraSignature,
    ) -> Element {
        let mut out = Element::one(sig);
        for (i, &e) in m.0.iter().enumerate() {
            for _ in 0..e {
                match &images[i] {
                    None => return Element::zero(sig),
                    Some(x) => out = out.multiply(x).expect("same signature"),
                }
                if out.is_zero() {
                    return out;
                }
            }
        }
        out
    }

    pub fn vector_to_element(basis: &[FreeMonomial], v: &[Rational]) -> FreeElement {
        basis
            .iter()
            .zip(v)
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect()
    }
}
