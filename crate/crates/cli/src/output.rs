//! Deterministic table output: CSV (RFC-4180-style, `%.12g` floats, metadata
//! in leading `#` comment lines) and JSON (one object with metadata and
//! columnar arrays).

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(&self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

impl std::str::FromStr for OutputFormat {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => bail!("unknown format '{other}' (expected csv or json)"),
        }
    }
}

/// Numeric table with named columns and a sorted metadata block.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub metadata: BTreeMap<String, String>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Index of a named column.
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// All values of a named column.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    pub fn write_to(&self, w: &mut impl Write, format: OutputFormat) -> Result<()> {
        match format {
            OutputFormat::Csv => self.write_csv(w),
            OutputFormat::Json => self.write_json(w),
        }
    }

    fn write_csv(&self, w: &mut impl Write) -> Result<()> {
        for (key, value) in &self.metadata {
            writeln!(w, "# {key} = {value}")?;
        }
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|&v| format_g(v, 12)).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }

    fn write_json(&self, w: &mut impl Write) -> Result<()> {
        let columns: Vec<serde_json::Value> = self
            .columns
            .iter()
            .enumerate()
            .map(|(idx, name)| {
                let values: Vec<f64> = self.rows.iter().map(|r| r[idx]).collect();
                serde_json::json!({ "name": name, "values": values })
            })
            .collect();
        let doc = serde_json::json!({
            "metadata": self.metadata,
            "columns": columns,
        });
        serde_json::to_writer_pretty(&mut *w, &doc)?;
        writeln!(w)?;
        Ok(())
    }

    /// Writes `<stem>.<ext>` under `dir`, creating the directory if needed.
    pub fn write_file(&self, dir: &Path, stem: &str, format: OutputFormat) -> Result<PathBuf> {
        std::fs::create_dir_all(dir)
            .with_context(|| format!("creating output directory {}", dir.display()))?;
        let path = dir.join(format!("{stem}.{}", format.extension()));
        let mut file = std::fs::File::create(&path)
            .with_context(|| format!("creating {}", path.display()))?;
        self.write_to(&mut file, format)?;
        Ok(path)
    }

    /// Reads a table back from either format (used for round-trip checks and
    /// verification of emitted files).
    pub fn read_file(path: &Path) -> Result<Table> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?;
        if text.trim_start().starts_with('{') {
            Self::read_json(&text)
        } else {
            Self::read_csv(&text)
        }
    }

    fn read_csv(text: &str) -> Result<Table> {
        let mut metadata = BTreeMap::new();
        let mut lines = text.lines().peekable();
        while let Some(line) = lines.peek() {
            let Some(comment) = line.strip_prefix('#') else {
                break;
            };
            if let Some((key, value)) = comment.split_once('=') {
                metadata.insert(key.trim().to_string(), value.trim().to_string());
            }
            lines.next();
        }
        let header = lines.next().context("missing CSV header")?;
        let columns: Vec<String> = header.split(',').map(|s| s.to_string()).collect();
        let mut rows = Vec::new();
        for line in lines {
            if line.is_empty() {
                continue;
            }
            let row: Vec<f64> = line
                .split(',')
                .map(|v| v.trim().parse::<f64>().context("parsing CSV value"))
                .collect::<Result<_>>()?;
            if row.len() != columns.len() {
                bail!("CSV row width {} != header width {}", row.len(), columns.len());
            }
            rows.push(row);
        }
        Ok(Table {
            columns,
            rows,
            metadata,
        })
    }

    fn read_json(text: &str) -> Result<Table> {
        let doc: serde_json::Value = serde_json::from_str(text)?;
        let metadata = doc["metadata"]
            .as_object()
            .context("missing metadata object")?
            .iter()
            .map(|(k, v)| (k.clone(), v.as_str().unwrap_or_default().to_string()))
            .collect();
        let columns_json = doc["columns"].as_array().context("missing columns array")?;
        let mut columns = Vec::new();
        let mut column_values: Vec<Vec<f64>> = Vec::new();
        for col in columns_json {
            columns.push(col["name"].as_str().context("column name")?.to_string());
            column_values.push(
                col["values"]
                    .as_array()
                    .context("column values")?
                    .iter()
                    .map(|v| v.as_f64().context("numeric value"))
                    .collect::<Result<_>>()?,
            );
        }
        let n_rows = column_values.first().map_or(0, |c| c.len());
        let rows = (0..n_rows)
            .map(|i| column_values.iter().map(|c| c[i]).collect())
            .collect();
        Ok(Table {
            columns,
            rows,
            metadata,
        })
    }
}

/// Formats a float like C's `printf("%.<sig>g")`: `sig` significant digits,
/// fixed or exponential depending on the decimal exponent, trailing zeros
/// trimmed.
pub fn format_g(x: f64, sig: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let sig = sig.max(1);
    // Round to `sig` significant digits first; the format choice depends on
    // the exponent of the *rounded* value.
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp_str) = sci.split_once('e').expect("exponential format");
    let exp: i32 = exp_str.parse().expect("exponent");
    if exp < -4 || exp >= sig as i32 {
        let mantissa = trim_trailing_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_trailing_zeros(&format!("{x:.decimals$}"))
    }
}

fn trim_trailing_zeros(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}
