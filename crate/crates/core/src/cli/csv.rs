//! CSV tables with a commented `key=value` header.

use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Parsed numeric column; empty cells become `None`.
    pub fn numbers(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let i = self.column(name)?;
        Some(self.rows.iter().map(|r| r[i].parse().ok()).collect())
    }
}

/// Shortest representation that parses back to the same bits.
pub fn num(x: f64) -> String {
    format!("{x:e}")
}

/// Cell text with the separator and line breaks removed.
pub fn text(s: &str) -> String {
    s.replace([',', '\n', '\r'], ";")
}

pub fn render(header: &[(String, String)], table: &Table) -> String {
    let mut out = String::new();
    for (k, v) in header {
        let _ = writeln!(out, "# {k}={}", v.replace('\n', " "));
    }
    let _ = writeln!(out, "{}", table.columns.join(","));
    for row in &table.rows {
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CsvFile {
    pub header: Vec<(String, String)>,
    pub table: Table,
}

impl CsvFile {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.header.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

/// Inverse of [`render`].
pub fn parse(src: &str) -> Result<CsvFile, String> {
    let mut file = CsvFile::default();
    let mut lines = src.lines();
    let mut columns = None;
    for line in lines.by_ref() {
        if let Some(rest) = line.strip_prefix("# ") {
            let (k, v) = rest.split_once('=').ok_or_else(|| format!("header line without `=`: {line}"))?;
            file.header.push((k.to_string(), v.to_string()));
        } else {
            columns = Some(line);
            break;
        }
    }
    let columns = columns.ok_or("missing column line")?;
    file.table.columns = columns.split(',').map(str::to_string).collect();
    for (n, line) in lines.enumerate() {
        let row: Vec<String> = line.split(',').map(str::to_string).collect();
        if row.len() != file.table.columns.len() {
            return Err(format!("row {n} has {} cells, expected {}", row.len(), file.table.columns.len()));
        }
        file.table.rows.push(row);
    }
    Ok(file)
}
