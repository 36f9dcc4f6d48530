//! Dataset and flag parsing shared by the subcommands.

use std::path::{Path, PathBuf};

use bjpc::dataset::Dataset;
use bjpc::{BjpcSample, CensoringScheme, Error, Result, WeibullParams};
use clap::Args;

/// Where a sample comes from: a dataset JSON file, or a `w,z` CSV plus the
/// scheme on the command line.
#[derive(Debug, Args)]
pub struct DataArgs {
    /// Dataset file (`.json`, or `.csv` with columns `w,z`).
    pub data: PathBuf,
    /// Total units per population (CSV input only).
    #[arg(long)]
    pub m: Option<usize>,
    /// Number of observed failures (CSV input only).
    #[arg(long)]
    pub k: Option<usize>,
    /// Removal counts `R_1,...,R_{k-1}` (CSV input only).
    #[arg(long, value_name = "R1,R2,...")]
    pub removals: Option<String>,
}

impl DataArgs {
    pub fn load(&self) -> Result<BjpcSample> {
        let text = std::fs::read_to_string(&self.data)
            .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", self.data.display())))?;
        if is_csv(&self.data) {
            let (Some(m), Some(k)) = (self.m, self.k) else {
                return Err(Error::Parse("CSV input needs --m and --k".into()));
            };
            let removals = match &self.removals {
                Some(r) => parse_list::<usize>(r, "removals")?,
                None => vec![0; k.saturating_sub(1)],
            };
            let scheme = CensoringScheme::new(m, k, removals)?;
            sample_from_csv(&text, scheme)
        } else {
            if self.m.is_some() || self.k.is_some() || self.removals.is_some() {
                return Err(Error::Parse(
                    "--m/--k/--removals apply to CSV input only".into(),
                ));
            }
            Dataset::from_json(&text)?.to_sample()
        }
    }
}

fn is_csv(path: &Path) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

#[derive(Debug, serde::Deserialize)]
struct CsvRow {
    w: f64,
    z: u8,
}

pub fn sample_from_csv(text: &str, scheme: CensoringScheme) -> Result<BjpcSample> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut w = Vec::new();
    let mut z = Vec::new();
    for row in reader.deserialize::<CsvRow>() {
        let row = row.map_err(|e| Error::InvalidSample(e.to_string()))?;
        w.push(row.w);
        z.push(row.z);
    }
    Dataset {
        m: scheme.m(),
        k: scheme.k(),
        removals: scheme.removals().to_vec(),
        w,
        z,
    }
    .to_sample()
}

pub fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<T>()
                .map_err(|_| Error::Parse(format!("bad {what} entry {v:?}")))
        })
        .collect()
}

pub fn parse_params(s: &str) -> Result<WeibullParams> {
    match parse_list::<f64>(s, "parameter")?[..] {
        [a, l1, l2] => WeibullParams::new(a, l1, l2),
        _ => Err(Error::Parse(format!(
            "expected alpha,lambda1,lambda2, got {s:?}"
        ))),
    }
}
