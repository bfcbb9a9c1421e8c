//! CSV ingestion and float formatting.

use std::path::Path;

use bsi_core::{LabeledDataset, PointMatrix};

use crate::error::CliError;

/// `%.17g`: enough significant digits to round-trip any `f64`.
pub fn fmt17(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        strip_zeros(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", strip_zeros(mantissa.to_string()), exp)
    }
}

fn strip_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Which column carries labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnRef {
    Name(String),
    Index(usize),
    Last,
}

impl std::str::FromStr for ColumnRef {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.parse::<usize>() {
            Ok(i) => ColumnRef::Index(i),
            Err(_) => ColumnRef::Name(s.to_string()),
        })
    }
}

impl ColumnRef {
    fn resolve(&self, headers: &[String]) -> Result<usize, CliError> {
        match self {
            ColumnRef::Index(i) if *i < headers.len() => Ok(*i),
            ColumnRef::Index(i) => Err(CliError::input(format!(
                "label column index {i} out of range ({} columns)",
                headers.len()
            ))),
            ColumnRef::Name(n) => headers
                .iter()
                .position(|h| h == n)
                .ok_or_else(|| CliError::input(format!("no column named '{n}' (have {headers:?})"))),
            ColumnRef::Last if headers.is_empty() => Err(CliError::input("CSV has no columns")),
            ColumnRef::Last => Ok(headers.len() - 1),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            ColumnRef::Name(n) => n.clone(),
            ColumnRef::Index(i) => i.to_string(),
            ColumnRef::Last => "last".into(),
        }
    }
}

/// Parsed numeric table, optionally with a label column split off.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub feature_names: Vec<String>,
    pub points: PointMatrix,
    /// 0-based ids in first-appearance order, and the original label text per id.
    pub labels: Option<(Vec<usize>, Vec<String>)>,
}

impl Table {
    pub fn labeled(&self) -> Result<LabeledDataset, CliError> {
        let (ids, names) = self
            .labels
            .as_ref()
            .ok_or_else(|| CliError::input("no label column"))?;
        Ok(LabeledDataset::new(self.points.clone(), ids.clone(), names.len())?)
    }
}

/// Reads a headed CSV. Every column except `label` and `exclude` must be numeric.
pub fn read_table(path: &Path, label: Option<&ColumnRef>, exclude: &[String]) -> Result<Table, CliError> {
    let file = std::fs::File::open(path)
        .map_err(|e| CliError::input(format!("cannot open {}: {e}", path.display())))?;
    parse_table(file, &path.display().to_string(), label, exclude)
}

pub fn parse_table(
    reader: impl std::io::Read,
    source: &str,
    label: Option<&ColumnRef>,
    exclude: &[String],
) -> Result<Table, CliError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers: Vec<String> = rdr
        .headers()
        .map_err(|e| CliError::input(format!("{source}: cannot read header: {e}")))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    for name in exclude {
        if !headers.contains(name) {
            return Err(CliError::input(format!("{source}: no column named '{name}' to exclude")));
        }
    }
    let label_col = label.map(|l| l.resolve(&headers)).transpose()?;
    let feature_cols: Vec<usize> = (0..headers.len())
        .filter(|&c| Some(c) != label_col && !exclude.contains(&headers[c]))
        .collect();
    if feature_cols.is_empty() {
        return Err(CliError::input(format!("{source}: no feature columns")));
    }

    let mut data = Vec::new();
    let mut ids = Vec::new();
    let mut names: Vec<String> = Vec::new();
    let mut n = 0;
    for record in rdr.records() {
        let record = record.map_err(|e| CliError::input(format!("{source}: {e}")))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != headers.len() {
            return Err(CliError::input(format!(
                "{source}: line {line}: {} fields, header has {}",
                record.len(),
                headers.len()
            )));
        }
        for &c in &feature_cols {
            let cell = record[c].trim();
            let v: f64 = cell.parse().map_err(|_| {
                CliError::input(format!(
                    "{source}: line {line}, column {} ('{}'): '{cell}' is not a number",
                    c + 1,
                    headers[c]
                ))
            })?;
            if !v.is_finite() {
                return Err(CliError::input(format!(
                    "{source}: line {line}, column {} ('{}'): non-finite value",
                    c + 1,
                    headers[c]
                )));
            }
            data.push(v);
        }
        if let Some(lc) = label_col {
            let text = record[lc].trim().to_string();
            let id = match names.iter().position(|s| *s == text) {
                Some(id) => id,
                None => {
                    names.push(text);
                    names.len() - 1
                }
            };
            ids.push(id);
        }
        n += 1;
    }
    if n == 0 {
        return Err(CliError::input(format!("{source}: no data rows")));
    }
    Ok(Table {
        feature_names: feature_cols.iter().map(|&c| headers[c].clone()).collect(),
        points: PointMatrix::new(data, n, feature_cols.len())?,
        labels: label_col.map(|_| (ids, names)),
    })
}

/// Writes points plus extra integer columns (emitted 1-based) as CSV text.
pub fn dataset_csv(points: &PointMatrix, label_columns: &[(&str, &[usize])]) -> String {
    let mut out = String::new();
    let header: Vec<String> = (1..=points.d())
        .map(|j| format!("x{j}"))
        .chain(label_columns.iter().map(|(n, _)| n.to_string()))
        .collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for (i, row) in points.rows().enumerate() {
        let mut cells: Vec<String> = row.iter().map(|v| fmt17(*v)).collect();
        cells.extend(label_columns.iter().map(|(_, l)| (l[i] + 1).to_string()));
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}
