//! Characteristic-class inventories for flat `Diff(M)`-bundles, assembled
//! from a manifold descriptor by a fixed rule table.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::minimal_model::{loop_poincare, PoincareSeries};
use crate::vey::{extended_basis, variable_set, ExtendedClass, VeyClass};

/// Degree cap for the loop-space series attached to non-compact reports.
pub const LOOP_SERIES_CAP: u32 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Target {
    #[serde(rename = "BDiff_delta")]
    BDiffDelta,
    #[serde(rename = "BbarDiff")]
    BbarDiff,
    #[serde(rename = "MDiff_delta")]
    MDiffDelta,
}

impl Target {
    pub fn as_str(self) -> &'static str {
        match self {
            Target::BDiffDelta => "BDiff_delta",
            Target::BbarDiff => "BbarDiff",
            Target::MDiffDelta => "MDiff_delta",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    GvTotal,
    FiberIntegration,
    SectionPullback,
    CycleIntegration,
    Braced,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::GvTotal => "gv_total",
            Method::FiberIntegration => "fiber_integration",
            Method::SectionPullback => "section_pullback",
            Method::CycleIntegration => "cycle_integration",
            Method::Braced => "braced",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Survival {
    Yes,
    Unknown,
    Killed,
}

impl Survival {
    pub fn as_str(self) -> &'static str {
        match self {
            Survival::Yes => "yes",
            Survival::Unknown => "unknown",
            Survival::Killed => "killed",
        }
    }
}

macro_rules! display_via_as_str {
    ($($t:ty),*) => {$(
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }
    )*};
}
display_via_as_str!(Target, Method, Survival);

/// `count` independent co-spherical homology classes in degree `degree`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cospherical {
    pub degree: u32,
    pub count: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifoldDescriptor {
    pub dim: u32,
    pub compact: bool,
    pub closed: bool,
    pub orientable: bool,
    pub parallelizable: bool,
    /// Tangent bundle trivial over the supports of the co-spherical cycles
    /// (for instance after deleting a point of a closed surface).
    #[serde(default)]
    pub trivialized_over_cycles: bool,
    /// Co-spherical classes with `0 < degree < dim`; the fundamental class is implicit.
    #[serde(default)]
    pub cospherical_degrees: Vec<Cospherical>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl ManifoldDescriptor {
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidInput(
                "manifold dimension must be at least 1".into(),
            ));
        }
        if self.closed && !self.compact {
            return Err(Error::InvalidInput("a closed manifold is compact".into()));
        }
        for c in &self.cospherical_degrees {
            if c.degree == 0 || c.degree >= self.dim {
                return Err(Error::InvalidInput(format!(
                    "co-spherical degree {} must lie strictly between 0 and {}",
                    c.degree, self.dim
                )));
            }
            if c.count == 0 {
                return Err(Error::InvalidInput(format!(
                    "co-spherical degree {} has count 0",
                    c.degree
                )));
            }
        }
        if !self.orientable {
            return Err(Error::Unsupported(
                "non-orientable manifolds are not handled".into(),
            ));
        }
        Ok(())
    }

    fn closed_model(
        dim: u32,
        parallelizable: bool,
        cospherical: Vec<Cospherical>,
        label: &str,
    ) -> Self {
        ManifoldDescriptor {
            dim,
            compact: true,
            closed: true,
            orientable: true,
            parallelizable,
            trivialized_over_cycles: false,
            cospherical_degrees: cospherical,
            label: Some(label.to_string()),
        }
    }

    /// Named presets: `S1`, `S2`, `T2`, `Sigma_g:<g>`, `S3`, `T3`, `Rq:<q>`.
    pub fn preset(name: &str) -> Result<Self> {
        let one = |count| vec![Cospherical { degree: 1, count }];
        let parse = |s: &str, what: &str| -> Result<u32> {
            s.parse::<u32>().map_err(|_| {
                Error::InvalidInput(format!("{what} must be a positive integer, got {s:?}"))
            })
        };
        Ok(match name {
            "S1" => Self::closed_model(1, true, Vec::new(), "S1"),
            "S2" => Self::closed_model(2, false, Vec::new(), "S2"),
            "T2" => Self::closed_model(2, true, one(2), "T2"),
            "S3" => Self::closed_model(3, true, Vec::new(), "S3"),
            "T3" => Self::closed_model(3, true, one(3), "T3"),
            _ => {
                if let Some(g) = name.strip_prefix("Sigma_g:") {
                    let g = parse(g, "genus")?;
                    if g < 2 {
                        return Err(Error::InvalidInput(format!(
                            "Sigma_g preset needs genus >= 2, got {g}"
                        )));
                    }
                    let mut d = Self::closed_model(2, false, one(2 * g), &format!("Sigma_g({g})"));
                    d.trivialized_over_cycles = true;
                    d
                } else if let Some(q) = name.strip_prefix("Rq:") {
                    let q = parse(q, "dimension")?;
                    if q == 0 {
                        return Err(Error::InvalidInput("Rq preset needs q >= 1".into()));
                    }
                    ManifoldDescriptor {
                        dim: q,
                        compact: false,
                        closed: false,
                        orientable: true,
                        parallelizable: true,
                        trivialized_over_cycles: false,
                        cospherical_degrees: Vec::new(),
                        label: Some(format!("Rq({q})")),
                    }
                } else {
                    return Err(Error::InvalidInput(format!(
                        "unknown preset {name:?} (expected S1, S2, T2, Sigma_g:<g>, S3, T3, Rq:<q>)"
                    )));
                }
            }
        })
    }

    fn is_label(&self, prefix: &str) -> bool {
        self.label
            .as_deref()
            .is_some_and(|l| l == prefix || l.starts_with(&format!("{prefix}(")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub name: String,
    pub degree: u32,
    pub target: Target,
    pub method: Method,
    pub detection_rank: usize,
    #[serde(rename = "survives_to_BDiff_delta")]
    pub survives_to_bdiff_delta: Survival,
    pub source_class: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopSeries {
    pub loops: u32,
    pub generators: BTreeMap<u32, usize>,
    pub series: PoincareSeries,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifoldReport {
    pub descriptor: ManifoldDescriptor,
    pub records: Vec<ClassRecord>,
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub loop_series: Option<LoopSeries>,
}

/// Degree after integrating a degree-`n` class over a closed `q`-dimensional fiber.
pub fn fiber_integrate_degree(n: u32, q: u32) -> Result<u32> {
    n.checked_sub(q).ok_or_else(|| {
        Error::InvalidInput(format!(
            "cannot integrate a degree-{n} class over a {q}-dimensional fiber"
        ))
    })
}

/// Degree of the brace product of classes in degrees `i` and `j`.
pub fn brace_degree(i: u32, j: u32) -> Result<u32> {
    if i == 0 || j == 0 {
        return Err(Error::InvalidInput(format!(
            "brace degrees must be positive, got ({i}, {j})"
        )));
    }
    Ok(i + j - 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HurewiczRange {
    Iso,
    Surjection,
    Outside,
}

/// Rational Hurewicz range for an `r`-connected space in degree `k`.
pub fn hurewicz_ok(r: u32, k: u32) -> Result<HurewiczRange> {
    if r == 0 {
        return Err(Error::InvalidInput(
            "connectivity must be at least 1".into(),
        ));
    }
    Ok(if k <= 2 * r {
        HurewiczRange::Iso
    } else if k == 2 * r + 1 {
        HurewiczRange::Surjection
    } else {
        HurewiczRange::Outside
    })
}

struct Cycle {
    index: usize,
    degree: u32,
    count: u32,
}

fn cycles(m: &ManifoldDescriptor) -> Vec<Cycle> {
    let mut degrees = m.cospherical_degrees.clone();
    degrees.sort_by_key(|c| c.degree);
    let mut out = Vec::new();
    for c in degrees {
        for _ in 0..c.count {
            out.push(Cycle {
                index: out.len() + 1,
                degree: c.degree,
                count: c.count,
            });
        }
    }
    out
}

/// Applies the rule table to `m`.
pub fn report(m: &ManifoldDescriptor) -> Result<ManifoldReport> {
    m.validate()?;
    let q = m.dim;
    let top = 2 * q + 1;
    let vars: Vec<VeyClass> = variable_set(q)?;
    let v_q = vars.len();
    let braced_allowed = m.compact && m.parallelizable && q >= 3;
    let extended: Vec<ExtendedClass> = if q >= 3 {
        extended_basis(q, top + 1..=u32::MAX)?.classes
    } else {
        Vec::new()
    };
    let mut braced_counts: BTreeMap<u32, usize> = BTreeMap::new();
    for e in &extended {
        *braced_counts.entry(e.degree).or_insert(0) += 1;
    }
    let cycle_list = cycles(m);
    let cycles_allowed = m.parallelizable || m.trivialized_over_cycles;
    let gamma_survival = if q == 2 && (m.is_label("T2") || m.is_label("Sigma_g")) {
        Survival::Killed
    } else {
        Survival::Unknown
    };
    let reader_note = (q == 3).then(|| {
        "reader-exercise: family stated without details; rank taken as cycle count times family size".to_string()
    });

    let mut records = Vec::new();
    let record = |name: String,
                  degree,
                  target,
                  method,
                  rank,
                  survival,
                  source: &str,
                  note: Option<String>| ClassRecord {
        name,
        degree,
        target,
        method,
        detection_rank: rank,
        survives_to_bdiff_delta: survival,
        source_class: source.to_string(),
        note,
    };

    // Open manifolds only carry the loop-space family: the delooped classes,
    // in degree n - q for each detected degree-n class.
    let loop_note =
        (!m.compact).then(|| format!("generator of the free algebra on the {q}-fold loop space"));
    if m.compact {
        for v in &vars {
            let n = v.name();
            records.push(record(
                format!("gv[{n}]"),
                top,
                Target::MDiffDelta,
                Method::GvTotal,
                v_q,
                Survival::Unknown,
                &n,
                None,
            ));
        }
    }
    let alpha_degree = fiber_integrate_degree(top, q)?;
    for v in &vars {
        let n = v.name();
        records.push(record(
            format!("alpha[{n}]"),
            alpha_degree,
            Target::BDiffDelta,
            Method::FiberIntegration,
            v_q,
            Survival::Yes,
            &n,
            loop_note.clone(),
        ));
    }
    if m.compact && m.parallelizable {
        for v in &vars {
            let n = v.name();
            records.push(record(
                format!("beta[{n}]"),
                top,
                Target::BbarDiff,
                Method::SectionPullback,
                v_q,
                Survival::Unknown,
                &n,
                None,
            ));
        }
    }
    if cycles_allowed {
        for c in &cycle_list {
            for v in &vars {
                let n = v.name();
                records.push(record(
                    format!("gamma[C_{}][{n}]", c.index),
                    top - c.degree,
                    Target::BbarDiff,
                    Method::CycleIntegration,
                    c.count as usize * v_q,
                    gamma_survival,
                    &n,
                    reader_note.clone(),
                ));
            }
        }
        if braced_allowed {
            for c in &cycle_list {
                for e in &extended {
                    let n = e.monomial.to_string();
                    records.push(record(
                        format!("gamma[C_{}][{n}]", c.index),
                        e.degree - c.degree,
                        Target::BbarDiff,
                        Method::CycleIntegration,
                        c.count as usize * braced_counts[&e.degree],
                        Survival::Unknown,
                        &n,
                        reader_note.clone(),
                    ));
                }
            }
        }
    }
    if !m.compact {
        for e in &extended {
            let n = e.monomial.to_string();
            records.push(record(
                format!("braced[{n}]"),
                fiber_integrate_degree(e.degree, q)?,
                Target::BbarDiff,
                Method::Braced,
                braced_counts[&e.degree],
                Survival::Unknown,
                &n,
                loop_note.clone(),
            ));
        }
    }
    if braced_allowed {
        for e in &extended {
            let n = e.monomial.to_string();
            records.push(record(
                format!("braced[{n}]"),
                e.degree,
                Target::BbarDiff,
                Method::Braced,
                braced_counts[&e.degree],
                Survival::Unknown,
                &n,
                None,
            ));
        }
    }

    let mut notes = vec![
        "detection_rank is a detected rank (lower bound), not a homology dimension".to_string(),
    ];
    if m.is_label("S2") {
        notes.push(
            "the evaluation by the two generalized Godbillon-Vey classes is reported with rank 2 (the printed target reads R^q with q = 2)"
                .to_string(),
        );
    }
    if m.is_label("Sigma_g") {
        notes.push(
            "MMM classes kappa_l vanish in the flat-bundle cohomology for l >= 3 (Bott vanishing); kappa_2 is open".to_string(),
        );
        notes.push(
            "gamma classes use the punctured surface, whose tangent bundle is trivial".to_string(),
        );
    }
    if !cycles_allowed && !m.cospherical_degrees.is_empty() {
        notes.push("co-spherical classes present but the tangent bundle is not trivialized over them: no cycle integration".into());
    }

    let loop_series = if m.compact {
        None
    } else {
        let mut generators = BTreeMap::from([(top, v_q)]);
        for (&k, &count) in &braced_counts {
            generators.insert(k, count);
        }
        generators.retain(|_, g| *g > 0);
        let series = loop_poincare(&generators, q, LOOP_SERIES_CAP)?;
        notes.push(format!(
            "non-compact: classes organize into the free algebra on the {q}-fold loop space of the detected homotopy"
        ));
        Some(LoopSeries {
            loops: q,
            generators,
            series,
        })
    };

    Ok(ManifoldReport {
        descriptor: m.clone(),
        records,
        notes,
        loop_series,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn summary(r: &ManifoldReport, method: Method) -> Vec<(u32, usize, Survival)> {
        r.records
            .iter()
            .filter(|c| c.method == method)
            .map(|c| (c.degree, c.detection_rank, c.survives_to_bdiff_delta))
            .collect()
    }

    #[test]
    fn degree_helpers() {
        assert_eq!(fiber_integrate_degree(5, 2).unwrap(), 3);
        assert_eq!(fiber_integrate_degree(7, 3).unwrap(), 4);
        assert!(fiber_integrate_degree(1, 2).is_err());
        assert_eq!(brace_degree(4, 7).unwrap(), 10);
        assert_eq!(brace_degree(1, 9).unwrap(), 9);
        assert_eq!(hurewicz_ok(3, 5).unwrap(), HurewiczRange::Iso);
        assert_eq!(hurewicz_ok(3, 7).unwrap(), HurewiczRange::Surjection);
        assert_eq!(hurewicz_ok(3, 8).unwrap(), HurewiczRange::Outside);
    }

    #[test]
    fn torus() {
        let r = report(&ManifoldDescriptor::preset("T2").unwrap()).unwrap();
        assert_eq!(
            summary(&r, Method::FiberIntegration),
            vec![(3, 2, Survival::Yes); 2]
        );
        assert_eq!(
            summary(&r, Method::CycleIntegration),
            vec![(4, 4, Survival::Killed); 4]
        );
        assert_eq!(
            summary(&r, Method::SectionPullback),
            vec![(5, 2, Survival::Unknown); 2]
        );
        assert!(summary(&r, Method::Braced).is_empty());
    }

    #[test]
    fn non_orientable_rejected() {
        let mut d = ManifoldDescriptor::preset("T2").unwrap();
        d.orientable = false;
        assert!(matches!(report(&d), Err(Error::Unsupported(_))));
    }

    #[test]
    fn euclidean_space_series() {
        let r = report(&ManifoldDescriptor::preset("Rq:1").unwrap()).unwrap();
        let s = r.loop_series.clone().unwrap();
        assert_eq!(s.series.coefficients[..5], [1, 0, 1, 0, 1]);
        assert!(summary(&r, Method::SectionPullback).is_empty());
        assert!(summary(&r, Method::GvTotal).is_empty());
        assert_eq!(
            summary(&r, Method::FiberIntegration),
            vec![(2, 1, Survival::Yes)]
        );
        let r3 = report(&ManifoldDescriptor::preset("Rq:3").unwrap()).unwrap();
        assert_eq!(
            summary(&r3, Method::Braced),
            vec![(7, 3, Survival::Unknown); 3]
        );
        assert_eq!(
            r3.loop_series.unwrap().generators,
            BTreeMap::from([(7, 3), (10, 3)])
        );
    }
}
