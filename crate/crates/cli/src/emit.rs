use serde::{Deserialize, Serialize};
use weilcx_core::manifold::LoopSeries;
use weilcx_core::vey::ValidationReport;
use weilcx_core::{
    CohomologyResult, ManifoldReport, ModelStage, PoincareSeries, RankTable, VeyClass,
};

use crate::config::OutputFormat;

/// Fixed-width table: columns padded to their widest cell, two spaces apart.
#[derive(Debug, Default)]
pub struct Table {
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Table {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row<S: Into<String>>(&mut self, cells: impl IntoIterator<Item = S>) {
        let mut cells: Vec<String> = cells.into_iter().map(Into::into).collect();
        cells.resize(self.headers.len(), String::new());
        self.rows.push(cells);
    }

    pub fn render(&self) -> String {
        let widths: Vec<usize> = (0..self.headers.len())
            .map(|c| {
                std::iter::once(&self.headers[c])
                    .chain(self.rows.iter().map(|r| &r[c]))
                    .map(|s| s.chars().count())
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |cells: &[String]| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(s, &w)| format!("{s:<w$}"))
                .collect();
            padded.join("  ").trim_end().to_string() + "\n"
        };
        let mut out = line(&self.headers);
        let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
        out += &line(&rule);
        for r in &self.rows {
            out += &line(r);
        }
        out
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn series_text(s: &PoincareSeries) -> String {
    s.coefficients
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Something that can be printed as a table.
pub trait Render {
    fn table(&self) -> String;
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KappaOutput {
    pub q: u32,
    pub kappa: u32,
}

impl Render for KappaOutput {
    fn table(&self) -> String {
        format!("{}\n", self.kappa)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelOutput {
    pub model: ModelStage,
    pub rank_table: RankTable,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub loop_series: Option<LoopSeries>,
}

impl Render for ModelOutput {
    fn table(&self) -> String {
        let m = &self.model;
        let mut out = format!(
            "minimal model of I_{} through degree {}\n",
            m.q, m.degree_cap
        );
        let mut t = Table::new(["degree", "rank", "generators"]);
        for (d, ids) in &m.generators {
            t.row([d.to_string(), ids.len().to_string(), ids.join(" ")]);
        }
        out += &t.render();
        let checked = m.quasi_iso_check.len();
        let ok = m.quasi_iso_check.values().filter(|&&b| b).count();
        out += &format!(
            "quasi-isomorphism: {ok}/{checked} degrees verified (0 to {})\n",
            m.degree_cap.saturating_sub(1)
        );
        if let Some(ls) = &self.loop_series {
            out += &format!(
                "loop series ({} loops): {}\n",
                ls.loops,
                series_text(&ls.series)
            );
        }
        out
    }
}

/// Vey classes; `flags` adds the classification columns.
pub struct VeyTable<'a> {
    pub classes: &'a [VeyClass],
    pub flags: bool,
}

impl Render for VeyTable<'_> {
    fn table(&self) -> String {
        let mut headers = vec!["class", "degree", "complex"];
        if self.flags {
            headers.extend(["gv", "residual", "rigid", "variable"]);
        }
        let mut t = Table::new(headers);
        for v in self.classes {
            let mut row = vec![v.name(), v.degree.to_string(), v.complex_kind.to_string()];
            if self.flags {
                row.extend(
                    [
                        v.is_generalized_gv,
                        v.is_residual,
                        v.is_rigid,
                        v.is_variable_candidate,
                    ]
                    .map(|b| yes_no(b).to_string()),
                );
            }
            t.row(row);
        }
        t.render()
    }
}

impl Render for CohomologyResult {
    fn table(&self) -> String {
        let mut out = format!("H*({}_{})\n", self.kind, self.q);
        let mut t = Table::new(["degree", "dim", "representatives"]);
        for (&n, &d) in &self.dims {
            let reps: Vec<String> = self
                .representatives_in(n)
                .iter()
                .map(ToString::to_string)
                .collect();
            t.row([n.to_string(), d.to_string(), reps.join(", ")]);
        }
        out += &t.render();
        out += &format!("total dimension: {}\n", self.total_dim_check);
        out
    }
}

impl Render for ValidationReport {
    fn table(&self) -> String {
        let mut out = format!(
            "Vey basis vs oracle for {}_{} ({})\n",
            self.kind, self.q, self.wo_condition
        );
        let mut t = Table::new([
            "degree",
            "enumerated",
            "oracle",
            "cocycles",
            "independent",
            "match",
        ]);
        let mut notes = Vec::new();
        for d in &self.degrees {
            t.row([
                d.degree.to_string(),
                d.enumerated.to_string(),
                d.oracle_dim.to_string(),
                yes_no(d.all_cocycles).to_string(),
                yes_no(d.independent).to_string(),
                yes_no(d.counts_match()).to_string(),
            ]);
            notes.extend(d.notes.iter().map(|n| format!("degree {}: {n}", d.degree)));
        }
        out += &t.render();
        for n in notes {
            out += &format!("note: {n}\n");
        }
        out
    }
}

impl Render for Vec<ValidationReport> {
    fn table(&self) -> String {
        self.iter()
            .map(Render::table)
            .collect::<Vec<_>>()
            .join("\n")
    }
}

impl Render for ManifoldReport {
    fn table(&self) -> String {
        let d = &self.descriptor;
        let label = d.label.clone().unwrap_or_else(|| format!("M^{}", d.dim));
        let mut out = format!(
            "{label}: dim {}, {}, {}\n",
            d.dim,
            if d.compact { "compact" } else { "non-compact" },
            if d.parallelizable {
                "parallelizable"
            } else {
                "not parallelizable"
            }
        );
        let mut t = Table::new(["class", "degree", "target", "method", "rank", "survives"]);
        for r in &self.records {
            t.row([
                r.name.clone(),
                r.degree.to_string(),
                r.target.to_string(),
                r.method.to_string(),
                r.detection_rank.to_string(),
                r.survives_to_bdiff_delta.to_string(),
            ]);
        }
        out += &t.render();
        let mut seen = Vec::new();
        for r in &self.records {
            if let Some(n) = &r.note {
                if !seen.contains(n) {
                    seen.push(n.clone());
                }
            }
        }
        for n in self.notes.iter().chain(&seen) {
            out += &format!("note: {n}\n");
        }
        if let Some(ls) = &self.loop_series {
            let gens: Vec<String> = ls
                .generators
                .iter()
                .map(|(k, g)| format!("{k}:{g}"))
                .collect();
            out += &format!(
                "loop series ({} loops, generators {}): {}\n",
                ls.loops,
                gens.join(","),
                series_text(&ls.series)
            );
        }
        out
    }
}

/// Deterministic single-line JSON with a trailing newline.
pub fn json<T: Serialize + ?Sized>(value: &T) -> serde_json::Result<String> {
    Ok(serde_json::to_string(value)? + "\n")
}

pub fn render<T: Render + ?Sized>(value: &T, json_text: &str, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => json_text.to_string(),
        OutputFormat::Table => value.table(),
    }
}
