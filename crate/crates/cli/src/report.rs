//! Output formatting: summaries, JSON and CSV artifacts.

use std::path::Path;

use bjpc::ocs::SchemeEvaluation;
use bjpc::region::BoundaryRow;
use bjpc::reproduce::TableReport;
use bjpc::{Error, Result};
use serde_json::Value;

/// A command's result: a human summary plus a machine-readable artifact.
pub struct Output {
    summary: String,
    json: Value,
    csv: Option<String>,
}

impl Output {
    pub fn json(summary: String, json: Value) -> Self {
        Output {
            summary,
            json,
            csv: None,
        }
    }

    /// Written as CSV unless the output path ends in `.json`.
    pub fn csv(summary: String, csv: String, json: Value) -> Self {
        Output {
            summary,
            json,
            csv: Some(csv),
        }
    }

    pub fn emit(&self, as_json: bool, out: Option<&Path>) -> Result<()> {
        let json_text = serde_json::to_string(&self.json)? + "\n";
        if let Some(path) = out {
            let wants_json = path
                .extension()
                .is_some_and(|e| e.eq_ignore_ascii_case("json"));
            match (&self.csv, wants_json) {
                (Some(csv), false) => std::fs::write(path, csv)?,
                _ => std::fs::write(path, &json_text)?,
            }
        }
        if as_json {
            print!("{json_text}");
        } else {
            println!("{}", self.summary);
        }
        Ok(())
    }
}

/// Six significant digits for summaries.
pub fn sig(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let decimals = (5 - x.abs().log10().floor() as i32).clamp(0, 12) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

pub fn write_boundary(path: &Path, rows: &[BoundaryRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_error)?;
    for r in rows {
        w.serialize(r).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

pub fn ranking_csv(ranked: &[SchemeEvaluation]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "rank",
        "m",
        "k",
        "R",
        "expected_volume",
        "volume_se",
        "etot",
        "etot_se",
        "reps",
    ])
    .map_err(csv_error)?;
    for (i, e) in ranked.iter().enumerate() {
        let r = e
            .scheme
            .removals()
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        w.write_record([
            (i + 1).to_string(),
            e.scheme.m().to_string(),
            e.scheme.k().to_string(),
            r,
            e.expected_volume.to_string(),
            e.volume_se.to_string(),
            e.etot.to_string(),
            e.etot_se.to_string(),
            e.reps.to_string(),
        ])
        .map_err(csv_error)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

pub fn table_summary(rep: &TableReport) -> String {
    let mut lines = vec![format!("Table {}: {}", rep.table, rep.title)];
    if let Some(r) = rep.reps {
        lines.push(format!("replications: {r}"));
    }
    if let Some(b) = rep.boot_reps {
        lines.push(format!("bootstrap replications: {b}"));
    }
    for r in &rep.rows {
        let se = r
            .std_error
            .map(|s| format!(" (se {})", sig(s)))
            .unwrap_or_default();
        lines.push(format!(
            "{} {:<28} {:<20} reference {:>10}  reproduced {:>10}{se}  tol {}",
            if r.pass { "PASS" } else { "FAIL" },
            r.label,
            r.quantity,
            sig(r.reference),
            sig(r.reproduced),
            r.tolerance
        ));
    }
    for n in &rep.notes {
        lines.push(format!("note: {n}"));
    }
    lines.push(format!(
        "{}/{} rows within tolerance",
        rep.passed(),
        rep.rows.len()
    ));
    lines.join("\n")
}

#[cfg(test)]
mod tests {
    use super::sig;

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig(0.0175419123), "0.0175419");
        assert_eq!(sig(0.983459), "0.983459");
        assert_eq!(sig(12.4631), "12.4631");
        assert_eq!(sig(2.0), "2");
    }
}
