//! Graded-commutative algebra on odd generators `y_i` (degree `2i-1`) and even
//! generators `c_i` (degree `2i`), with every monomial of Chern weight above `q`
//! identified with zero.
//!
//! The literature also writes `h_i` for `y_i`; only `y` is used here.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Which of the three truncated complexes a signature describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ComplexKind {
    /// All `y_1..y_q`.
    W,
    /// Odd-indexed `y_1, y_3, .., y_q'` only.
    WO,
    /// No `y` generators: the truncated polynomial algebra `I_q`.
    I,
}

impl ComplexKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ComplexKind::W => "W",
            ComplexKind::WO => "WO",
            ComplexKind::I => "I",
        }
    }
}

impl fmt::Display for ComplexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ComplexKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "W" | "w" => Ok(ComplexKind::W),
            "WO" | "wo" | "Wo" => Ok(ComplexKind::WO),
            "I" | "i" => Ok(ComplexKind::I),
            other => Err(Error::InvalidInput(format!(
                "unknown complex kind {other:?} (expected W, WO or I)"
            ))),
        }
    }
}

/// Codimension, allowed `y`-indices and weight cap of one truncated algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgebraSignature {
    q: u32,
    kind: ComplexKind,
    odd_indices: Vec<u32>,
}

impl AlgebraSignature {
    pub fn new(q: u32, kind: ComplexKind) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidInput(
                "codimension q must be at least 1".into(),
            ));
        }
        if q > 63 {
            return Err(Error::InvalidInput(format!(
                "codimension q = {q} is out of range"
            )));
        }
        let odd_indices = match kind {
            ComplexKind::W => (1..=q).collect(),
            ComplexKind::WO => (1..=q).filter(|i| i % 2 == 1).collect(),
            ComplexKind::I => Vec::new(),
        };
        Ok(AlgebraSignature {
            q,
            kind,
            odd_indices,
        })
    }

    pub fn w(q: u32) -> Result<Self> {
        Self::new(q, ComplexKind::W)
    }

    pub fn wo(q: u32) -> Result<Self> {
        Self::new(q, ComplexKind::WO)
    }

    pub fn truncated(q: u32) -> Result<Self> {
        Self::new(q, ComplexKind::I)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn kind(&self) -> ComplexKind {
        self.kind
    }

    pub fn weight_cap(&self) -> u32 {
        self.q
    }

    /// Indices `i` for which `y_i` is a generator.
    pub fn odd_indices(&self) -> &[u32] {
        &self.odd_indices
    }

    pub fn allows_y(&self, i: u32) -> bool {
        self.odd_indices.binary_search(&i).is_ok()
    }

    /// Largest degree carrying a nonzero monomial: all allowed `y`s times a
    /// top-weight polynomial.
    pub fn top_degree(&self) -> u32 {
        self.odd_indices.iter().map(|i| 2 * i - 1).sum::<u32>() + 2 * self.q
    }
}

/// A monomial `y_I c^e` with `I` strictly increasing and `e` the exponent
/// vector of `c_1..c_q`.
///
/// Ordering is canonical: by degree, then `y`-part lexicographically, then
/// `c`-part with larger exponents of lower-index generators first
/// (`c_1^2 < c_2`, `c_1^3 < c_1 c_2 < c_3`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monomial {
    y: Vec<u32>,
    c: Vec<u32>,
}

impl Monomial {
    pub fn unit(q: u32) -> Self {
        Monomial {
            y: Vec::new(),
            c: vec![0; q as usize],
        }
    }

    /// Builds a monomial from a `y`-index list (any order, sorted here) and an
    /// exponent vector. Returns the sign picked up by sorting, or `None` if an
    /// index repeats.
    pub fn from_parts(y: Vec<u32>, c: Vec<u32>) -> Option<(i32, Self)> {
        let (sorted, sign) = sort_odd(y)?;
        Some((sign, Monomial { y: sorted, c }))
    }

    /// `y_I c^e` with `I` already strictly increasing.
    pub fn new(y: Vec<u32>, c: Vec<u32>) -> Self {
        debug_assert!(y.windows(2).all(|w| w[0] < w[1]));
        Monomial { y, c }
    }

    pub fn y(&self) -> &[u32] {
        &self.y
    }

    pub fn c(&self) -> &[u32] {
        &self.c
    }

    pub fn q(&self) -> u32 {
        self.c.len() as u32
    }

    pub fn degree(&self) -> u32 {
        self.y.iter().map(|i| 2 * i - 1).sum::<u32>() + 2 * self.weight()
    }

    /// Chern weight `sum j * e_j`.
    pub fn weight(&self) -> u32 {
        self.c
            .iter()
            .enumerate()
            .map(|(j, e)| (j as u32 + 1) * e)
            .sum()
    }

    /// The multiset `J = (j_1 <= .. <= j_l)` of `c`-indices.
    pub fn c_indices(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for (j, &e) in self.c.iter().enumerate() {
            out.extend(std::iter::repeat_n(j as u32 + 1, e as usize));
        }
        out
    }

    /// Inverse of [`Monomial::c_indices`].
    pub fn from_indices(q: u32, y: &[u32], j: &[u32]) -> Option<Self> {
        let mut c = vec![0u32; q as usize];
        for &idx in j {
            if idx == 0 || idx > q {
                return None;
            }
            c[idx as usize - 1] += 1;
        }
        let (sign, m) = Monomial::from_parts(y.to_vec(), c)?;
        (sign == 1).then_some(m)
    }

    pub fn check(&self, sig: &AlgebraSignature) -> Result<()> {
        if self.c.len() != sig.q as usize {
            return Err(Error::SignatureMismatch(format!(
                "monomial {self} has {} c-exponents, signature has q = {}",
                self.c.len(),
                sig.q
            )));
        }
        if !self.y.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput(format!(
                "y-indices of {self} are not strictly increasing"
            )));
        }
        if let Some(bad) = self.y.iter().find(|i| !sig.allows_y(**i)) {
            return Err(Error::SignatureMismatch(format!(
                "y_{bad} is not a generator of {}_{}",
                sig.kind, sig.q
            )));
        }
        Ok(())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.y.cmp(&other.y))
            .then_with(|| other.c.cmp(&self.c))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y.is_empty() && self.c.iter().all(|&e| e == 0) {
            return f.write_str("1");
        }
        for i in &self.y {
            write!(f, "y{i}")?;
        }
        for (j, &e) in self.c.iter().enumerate() {
            match e {
                0 => {}
                1 => write!(f, "c{}", j + 1)?,
                _ => write!(f, "c{}^{e}", j + 1)?,
            }
        }
        Ok(())
    }
}

/// Sorts odd generators, returning the Koszul sign, or `None` on a repeat.
fn sort_odd(mut v: Vec<u32>) -> Option<(Vec<u32>, i32)> {
    let mut sign = 1;
    // insertion sort, counting transpositions
    for i in 1..v.len() {
        let mut k = i;
        while k > 0 && v[k - 1] > v[k] {
            v.swap(k - 1, k);
            sign = -sign;
            k -= 1;
        }
        if k > 0 && v[k - 1] == v[k] {
            return None;
        }
    }
    Some((v, sign))
}

/// Product of two odd parts `y_A * y_B`, with sign; `None` if they share an index.
fn merge_odd(a: &[u32], b: &[u32]) -> Option<(Vec<u32>, i32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut inversions = 0usize;
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                // b[j] jumps over the remaining a[i..]
                inversions += a.len() - i;
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => return None,
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Some((out, if inversions.is_multiple_of(2) { 1 } else { -1 }))
}

/// Monomial product with sign; `None` when it vanishes (repeated `y` or
/// weight above `cap`).
pub fn multiply_monomials(a: &Monomial, b: &Monomial, cap: u32) -> Option<(i32, Monomial)> {
    let c: Vec<u32> = a.c.iter().zip(&b.c).map(|(x, y)| x + y).collect();
    let m = Monomial { y: Vec::new(), c };
    if m.weight() > cap {
        return None;
    }
    let (y, sign) = merge_odd(&a.y, &b.y)?;
    Some((sign, Monomial { y, c: m.c }))
}

/// One `(monomial, coefficient)` pair in serialized form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub m: Monomial,
    pub coeff: Rational,
}

/// A sparse linear combination of monomials of one signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    sig: AlgebraSignature,
    terms: BTreeMap<Monomial, Rational>,
}

impl Element {
    pub fn zero(sig: &AlgebraSignature) -> Self {
        Element {
            sig: sig.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(sig: &AlgebraSignature) -> Self {
        Self::from_monomial(sig, Monomial::unit(sig.q)).expect("unit is valid")
    }

    /// The element `1 * m`; zero when `m` is over the weight cap.
    pub fn from_monomial(sig: &AlgebraSignature, m: Monomial) -> Result<Self> {
        Self::from_scaled_monomial(sig, m, Rational::one())
    }

    pub fn from_scaled_monomial(
        sig: &AlgebraSignature,
        m: Monomial,
        coeff: Rational,
    ) -> Result<Self> {
        m.check(sig)?;
        let mut e = Element::zero(sig);
        if m.weight() <= sig.weight_cap() && !coeff.is_zero() {
            e.terms.insert(m, coeff);
        }
        Ok(e)
    }

    pub fn y(sig: &AlgebraSignature, i: u32) -> Result<Self> {
        Self::from_monomial(sig, Monomial::new(vec![i], vec![0; sig.q as usize]))
    }

    pub fn c(sig: &AlgebraSignature, j: u32) -> Result<Self> {
        if j == 0 || j > sig.q {
            return Err(Error::InvalidInput(format!(
                "c_{j} is not a generator for q = {}",
                sig.q
            )));
        }
        let mut c = vec![0; sig.q as usize];
        c[j as usize - 1] = 1;
        Self::from_monomial(sig, Monomial::new(Vec::new(), c))
    }

    /// Builds an element from serialized terms, summing repeated monomials and
    /// dropping zeros and over-weight monomials.
    pub fn from_terms(
        sig: &AlgebraSignature,
        terms: impl IntoIterator<Item = Term>,
    ) -> Result<Self> {
        let mut e = Element::zero(sig);
        for t in terms {
            t.m.check(sig)?;
            if t.m.weight() <= sig.weight_cap() {
                e.add_term(t.m, &t.coeff);
            }
        }
        Ok(e)
    }

    /// Terms in canonical monomial order.
    pub fn to_terms(&self) -> Vec<Term> {
        self.terms
            .iter()
            .map(|(m, c)| Term {
                m: m.clone(),
                coeff: c.clone(),
            })
            .collect()
    }

    pub fn signature(&self) -> &AlgebraSignature {
        &self.sig
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Distinct degrees occurring, ascending.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.keys().map(Monomial::degree).collect();
        d.dedup();
        d
    }

    /// `Some(n)` when every term has degree `n`; the zero element is
    /// homogeneous of every degree and reports `None`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        match self.degrees().as_slice() {
            [n] => Some(*n),
            _ => None,
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degrees().len() <= 1
    }

    fn add_term(&mut self, m: Monomial, coeff: &Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn same_sig(&self, other: &Element) -> Result<()> {
        if self.sig != other.sig {
            return Err(Error::SignatureMismatch(format!(
                "{}_{} vs {}_{}",
                self.sig.kind, self.sig.q, other.sig.kind, other.sig.q
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.same_sig(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.add(&other.scale(&Rational::from(-1)))
    }

    pub fn scale(&self, s: &Rational) -> Element {
        if s.is_zero() {
            return Element::zero(&self.sig);
        }
        Element {
            sig: self.sig.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    /// Graded-commutative product with truncation.
    pub fn multiply(&self, other: &Element) -> Result<Element> {
        self.same_sig(other)?;
        let cap = self.sig.weight_cap();
        let mut out = Element::zero(&self.sig);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((sign, m)) = multiply_monomials(ma, mb, cap) {
                    let coeff = ca * cb;
                    let coeff = if sign < 0 { -coeff } else { coeff };
                    out.add_term(m, &coeff);
                }
            }
        }
        Ok(out)
    }

    /// `d(y_i) = c_i`, `d(c_i) = 0`, extended as a graded derivation.
    pub fn differential(&self) -> Element {
        let mut out = Element::zero(&self.sig);
        for (m, coeff) in &self.terms {
            for (sign, image) in differential_monomial(m, self.sig.weight_cap()) {
                let c = if sign < 0 { -coeff } else { coeff.clone() };
                out.add_term(image, &c);
            }
        }
        out
    }
}

/// Terms of `d(m)` as `(sign, monomial)`, over-weight terms already dropped.
pub fn differential_monomial(m: &Monomial, cap: u32) -> Vec<(i32, Monomial)> {
    let mut out = Vec::with_capacity(m.y.len());
    if m.weight() >= cap {
        // every c_i raises the weight past the cap
        return out;
    }
    for (k, &i) in m.y.iter().enumerate() {
        let mut c = m.c.clone();
        c[i as usize - 1] += 1;
        let image = Monomial {
            y: [&m.y[..k], &m.y[k + 1..]].concat(),
            c,
        };
        if image.weight() <= cap {
            out.push((if k % 2 == 0 { 1 } else { -1 }, image));
        }
    }
    out
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -c } else { c.clone() };
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

/// Graded degree of a monomial.
pub fn degree(m: &Monomial) -> u32 {
    m.degree()
}

pub fn multiply(a: &Element, b: &Element) -> Result<Element> {
    a.multiply(b)
}

pub fn differential(a: &Element) -> Element {
    a.differential()
}

/// Exponent vectors of length `q` with weight `w` and all parts at most `q`,
/// in canonical (descending-lexicographic) order.
pub fn weight_vectors(q: u32, w: u32) -> Vec<Vec<u32>> {
    fn rec(q: u32, j: u32, rest: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if j > q {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        // largest exponent of c_j first
        for e in (0..=rest / j).rev() {
            cur[j as usize - 1] = e;
            rec(q, j + 1, rest - e * j, cur, out);
        }
        cur[j as usize - 1] = 0;
    }
    let mut out = Vec::new();
    let mut cur = vec![0; q as usize];
    rec(q, 1, w, &mut cur, &mut out);
    out
}

/// All valid monomials of degree `n`, in canonical order.
pub fn basis_of_degree(sig: &AlgebraSignature, n: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let idx = sig.odd_indices();
    // odd parts as sorted subsets of the allowed indices
    let mut subsets: Vec<(Vec<u32>, u32)> = vec![(Vec::new(), 0)];
    for &i in idx {
        let extra: Vec<(Vec<u32>, u32)> = subsets
            .iter()
            .filter(|(_, d)| d + 2 * i - 1 <= n)
            .map(|(s, d)| {
                let mut s = s.clone();
                s.push(i);
                (s, d + 2 * i - 1)
            })
            .collect();
        subsets.extend(extra);
    }
    for (y, yd) in subsets {
        if !(n - yd).is_multiple_of(2) {
            continue;
        }
        let w = (n - yd) / 2;
        if w > sig.weight_cap() {
            continue;
        }
        for c in weight_vectors(sig.q(), w) {
            out.push(Monomial { y: y.clone(), c });
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(q: u32, y: &[u32], j: &[u32]) -> Monomial {
        Monomial::from_indices(q, y, j).unwrap()
    }

    fn el(sig: &AlgebraSignature, y: &[u32], j: &[u32]) -> Element {
        Element::from_monomial(sig, mono(sig.q(), y, j)).unwrap()
    }

    #[test]
    fn degrees_of_examples() {
        assert_eq!(degree(&mono(1, &[1], &[1])), 3);
        assert_eq!(degree(&Monomial::unit(4)), 0);
        assert_eq!(degree(&mono(3, &[1, 2], &[1, 1, 1])), 10);
    }

    #[test]
    fn koszul_sign_on_swap() {
        let sig = AlgebraSignature::w(2).unwrap();
        let p = multiply(&Element::y(&sig, 2).unwrap(), &Element::y(&sig, 1).unwrap()).unwrap();
        assert_eq!(p, el(&sig, &[1, 2], &[]).scale(&Rational::from(-1)));
    }

    #[test]
    fn repeated_y_vanishes() {
        let sig = AlgebraSignature::w(2).unwrap();
        let p = multiply(&el(&sig, &[1], &[1, 1]), &el(&sig, &[1], &[2])).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn truncation_drops_overweight_products() {
        let sig = AlgebraSignature::w(2).unwrap();
        let p = multiply(&el(&sig, &[], &[1, 1]), &el(&sig, &[], &[2])).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn differential_examples() {
        let sig = AlgebraSignature::w(2).unwrap();
        assert_eq!(
            differential(&Element::y(&sig, 1).unwrap()),
            Element::c(&sig, 1).unwrap()
        );
        assert!(differential(&el(&sig, &[], &[1, 1])).is_zero());
        // d(y1 y2 c1) = y2 c1^2 - y1 c1 c2, the second term is over weight
        assert_eq!(
            differential(&el(&sig, &[1, 2], &[1])),
            el(&sig, &[2], &[1, 1])
        );
    }

    #[test]
    fn basis_examples() {
        let w1 = AlgebraSignature::w(1).unwrap();
        assert_eq!(basis_of_degree(&w1, 3), vec![mono(1, &[1], &[1])]);
        let w2 = AlgebraSignature::w(2).unwrap();
        assert_eq!(
            basis_of_degree(&w2, 7),
            vec![mono(2, &[2], &[1, 1]), mono(2, &[2], &[2])]
        );
        let i3 = AlgebraSignature::truncated(3).unwrap();
        assert!(basis_of_degree(&i3, 1).is_empty());
    }

    #[test]
    fn wo_generators() {
        let sig = AlgebraSignature::wo(2).unwrap();
        assert_eq!(sig.odd_indices(), &[1]);
        assert!(Element::y(&sig, 2).is_err());
        assert_eq!(AlgebraSignature::wo(6).unwrap().odd_indices(), &[1, 3, 5]);
    }

    #[test]
    fn canonical_order_puts_c1_powers_first() {
        let q = 3;
        let mut v = [
            mono(q, &[1], &[3]),
            mono(q, &[1], &[1, 2]),
            mono(q, &[1], &[1, 1, 1]),
        ];
        v.sort();
        let names: Vec<String> = v.iter().map(|m| m.to_string()).collect();
        assert_eq!(names, ["y1c1^3", "y1c1c2", "y1c3"]);
    }

    #[test]
    fn signature_mismatch_is_an_error() {
        let a = Element::one(&AlgebraSignature::w(2).unwrap());
        let b = Element::one(&AlgebraSignature::wo(2).unwrap());
        assert!(matches!(a.multiply(&b), Err(Error::SignatureMismatch(_))));
    }

    #[test]
    fn monomial_json_shape() {
        let m = mono(2, &[1, 2], &[1, 1]);
        assert_eq!(
            serde_json::to_string(&m).unwrap(),
            r#"{"y":[1,2],"c":[2,0]}"#
        );
    }
}
