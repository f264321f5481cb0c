//! CSV writer and reader.
//!
//! Format: `#`-prefixed comment lines carrying the manifest, one header row,
//! comma-separated cells, floats at 12 significant digits (round-trips through
//! the 1e-10 test tolerances). Missing values (for example T* of the TMSV)
//! are empty cells.

use std::io::{BufWriter, Write};
use std::path::Path;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(&'static str),
    Float(f64),
    Int(i64),
    Empty,
}

/// 12 significant digits, scientific; the one float format of every artifact.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.11e}")
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Text(s) => (*s).to_string(),
            Cell::Float(x) => fmt_float(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Empty => String::new(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

pub fn write_csv(path: &Path, comments: &[String], table: &Table) -> std::io::Result<()> {
    let mut out = BufWriter::new(std::fs::File::create(path)?);
    for line in comments {
        writeln!(out, "# {line}")?;
    }
    writeln!(out, "{}", table.columns.join(","))?;
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(Cell::render).collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    out.flush()
}

/// Parsed CSV: comment lines (without `# `), header, and string rows.
#[derive(Debug, Clone)]
pub struct ParsedCsv {
    pub comments: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl ParsedCsv {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }
}

pub fn read_csv(path: &Path) -> std::io::Result<ParsedCsv> {
    let text = std::fs::read_to_string(path)?;
    let mut comments = Vec::new();
    let mut header = Vec::new();
    let mut rows = Vec::new();
    for line in text.lines() {
        if let Some(stripped) = line.strip_prefix('#') {
            comments.push(stripped.trim().to_string());
        } else if header.is_empty() {
            header = line.split(',').map(str::to_string).collect();
        } else if !line.is_empty() {
            rows.push(line.split(',').map(str::to_string).collect());
        }
    }
    Ok(ParsedCsv {
        comments,
        header,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_is_twelve_significant_digits() {
        assert_eq!(fmt_float(0.3162277660168379), "3.16227766017e-1");
        assert_eq!(fmt_float(1.0), "1.00000000000e0");
        let x = 0.123456789012345;
        let parsed: f64 = fmt_float(x).parse().unwrap();
        assert!((parsed - x).abs() < 1e-11 * x);
    }

    #[test]
    fn round_trip() {
        let dir = std::env::temp_dir().join(format!("cvmdi-csv-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("t.csv");
        let mut table = Table::new(vec!["a", "b", "c"]);
        table.push(vec![Cell::Int(1), Cell::Float(0.5), Cell::Empty]);
        table.push(vec![Cell::Int(2), Cell::Float(-1.25e-9), Cell::Text("TMSV")]);
        write_csv(&path, &["hello: world".to_string()], &table).unwrap();
        let parsed = read_csv(&path).unwrap();
        assert_eq!(parsed.comments, vec!["hello: world"]);
        assert_eq!(parsed.header, vec!["a", "b", "c"]);
        assert_eq!(parsed.rows.len(), 2);
        assert_eq!(parsed.rows[0][2], "");
        assert_eq!(parsed.column("b"), Some(1));
        std::fs::remove_dir_all(dir).ok();
    }
}
