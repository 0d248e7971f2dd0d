//! Output records and their json, csv and tex renderings.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::quadfield::QuadField;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldBlock {
    pub d: String,
    #[serde(rename = "D")]
    pub disc: String,
    pub h: String,
    pub t: String,
    pub ramified_primes: Vec<String>,
}

impl FieldBlock {
    pub fn of(field: &QuadField) -> Self {
        FieldBlock {
            d: field.d().to_string(),
            disc: field.disc().to_string(),
            h: field.class_number().to_string(),
            t: field.t().to_string(),
            ramified_primes: field.ramified_primes().iter().map(|p| p.to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultBlock {
    pub kind: String,
    pub values: BTreeMap<String, String>,
}

/// One emitted result. `query` holds the subcommand path under `command`
/// and every flag with its value, enough to re-run the computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub query: BTreeMap<String, String>,
    pub field: Option<FieldBlock>,
    pub result: ResultBlock,
    pub warnings: Vec<String>,
    pub provenance: Vec<String>,
}

impl OutputRecord {
    pub fn new(command: &str, kind: &str) -> Self {
        let mut query = BTreeMap::new();
        query.insert("command".to_string(), command.to_string());
        OutputRecord {
            query,
            field: None,
            result: ResultBlock {
                kind: kind.to_string(),
                values: BTreeMap::new(),
            },
            warnings: Vec::new(),
            provenance: Vec::new(),
        }
    }

    pub fn arg(mut self, key: &str, value: impl ToString) -> Self {
        self.query.insert(key.to_string(), value.to_string());
        self
    }

    pub fn with_field(mut self, field: &QuadField) -> Self {
        self.field = Some(FieldBlock::of(field));
        self
    }

    pub fn value(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.result.values.insert(key.to_string(), value.to_string());
        self
    }

    pub fn warn(&mut self, text: impl Into<String>) -> &mut Self {
        self.warnings.push(text.into());
        self
    }

    pub fn source(&mut self, text: impl Into<String>) -> &mut Self {
        self.provenance.push(text.into());
        self
    }

    /// Command line that reproduces this record.
    pub fn argv(&self) -> Vec<String> {
        let mut argv: Vec<String> = self.query["command"].split(' ').map(String::from).collect();
        for (k, v) in &self.query {
            if k != "command" {
                argv.push(format!("--{k}"));
                argv.push(v.clone());
            }
        }
        argv
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Tex,
}

const FIXED_COLUMNS: [&str; 7] = ["command", "query", "d", "D", "h", "t", "ramified_primes"];

fn field_cells(r: &OutputRecord) -> [String; 5] {
    match &r.field {
        Some(f) => [
            f.d.clone(),
            f.disc.clone(),
            f.h.clone(),
            f.t.clone(),
            f.ramified_primes.join("|"),
        ],
        None => Default::default(),
    }
}

fn query_cell(r: &OutputRecord) -> String {
    r.query
        .iter()
        .filter(|(k, _)| *k != "command")
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(";")
}

fn value_columns(records: &[OutputRecord]) -> Vec<String> {
    let mut cols: Vec<String> = Vec::new();
    for r in records {
        for k in r.result.values.keys() {
            if !cols.contains(k) {
                cols.push(k.clone());
            }
        }
    }
    cols
}

fn row(r: &OutputRecord, cols: &[String]) -> Vec<String> {
    let mut cells = vec![r.query["command"].clone(), query_cell(r)];
    cells.extend(field_cells(r));
    cells.push(r.result.kind.clone());
    cells.extend(cols.iter().map(|c| r.result.values.get(c).cloned().unwrap_or_default()));
    cells.push(r.warnings.join("|"));
    cells.push(r.provenance.join("|"));
    cells
}

fn header(cols: &[String]) -> Vec<String> {
    let mut h: Vec<String> = FIXED_COLUMNS.iter().map(|s| s.to_string()).collect();
    h.push("kind".into());
    h.extend(cols.iter().cloned());
    h.push("warnings".into());
    h.push("provenance".into());
    h
}

fn tex_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' | '%' | '$' | '#' | '_' | '{' | '}' => {
                out.push('\\');
                out.push(c);
            }
            '|' => out.push_str("\\textbar{}"),
            _ => out.push(c),
        }
    }
    out
}

pub fn emit(records: &[OutputRecord], format: Format, out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Json => {
            for r in records {
                let line = serde_json::to_string(r).expect("records serialize");
                writeln!(out, "{line}")?;
            }
        }
        Format::Csv => {
            let cols = value_columns(records);
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| crate::Error::Io(e.to_string());
            w.write_record(header(&cols)).map_err(io)?;
            for r in records {
                w.write_record(row(r, &cols)).map_err(io)?;
            }
            let bytes = w.into_inner().map_err(|e| crate::Error::Io(e.to_string()))?;
            out.write_all(&bytes)?;
        }
        Format::Tex => {
            let cols = value_columns(records);
            let line = |cells: Vec<String>| {
                cells.iter().map(|c| tex_escape(c)).collect::<Vec<_>>().join(" & ") + " \\\\"
            };
            writeln!(out, "{}", line(header(&cols)))?;
            writeln!(out, "\\hline")?;
            for r in records {
                writeln!(out, "{}", line(row(r, &cols)))?;
            }
        }
    }
    Ok(())
}

/// Parses json lines back into records.
pub fn parse_json_lines(text: &str) -> std::result::Result<Vec<OutputRecord>, serde_json::Error> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(serde_json::from_str)
        .collect()
}

/// Reads the csv rendering back as `(header, rows)`.
pub fn parse_csv(text: &str) -> std::result::Result<(Vec<String>, Vec<Vec<String>>), csv::Error> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers()?.iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.map(|rec| rec.iter().map(String::from).collect()))
        .collect::<std::result::Result<_, _>>()?;
    Ok((header, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> OutputRecord {
        let f = QuadField::new(-2).unwrap();
        let mut r = OutputRecord::new("bound", "bound").arg("d", -2).arg("N", 5).with_field(&f);
        r.value("bound", 12).warn("a|b").source("x");
        r
    }

    #[test]
    fn argv_reconstruction() {
        assert_eq!(sample().argv(), vec!["bound", "--N", "5", "--d", "-2"]);
        let r = OutputRecord::new("lefschetz level-one", "l").arg("k", 1);
        assert_eq!(r.argv(), vec!["lefschetz", "level-one", "--k", "1"]);
    }

    #[test]
    fn json_round_trip() {
        let mut buf = Vec::new();
        emit(&[sample()], Format::Json, &mut buf).unwrap();
        let back = parse_json_lines(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(back, vec![sample()]);
    }

    #[test]
    fn csv_keeps_warnings() {
        let mut buf = Vec::new();
        emit(&[sample()], Format::Csv, &mut buf).unwrap();
        let (h, rows) = parse_csv(std::str::from_utf8(&buf).unwrap()).unwrap();
        let w = h.iter().position(|c| c == "warnings").unwrap();
        assert_eq!(rows[0][w], "a|b");
        let b = h.iter().position(|c| c == "bound").unwrap();
        assert_eq!(rows[0][b], "12");
    }

    #[test]
    fn tex_is_a_tabular_body() {
        let mut buf = Vec::new();
        emit(&[sample()], Format::Tex, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(!text.contains("\\begin{tabular}"));
        assert!(text.lines().all(|l| l.ends_with("\\\\") || l == "\\hline"));
    }
}
