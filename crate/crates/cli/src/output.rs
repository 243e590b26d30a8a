//! Deterministic CSV/JSON emission. Every float is printed with 17
//! significant digits so that identical runs produce identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};

/// One cell of a result row.
#[derive(Debug, Clone)]
pub enum Field {
    Num(f64),
    Int(i64),
    Str(String),
    Empty,
}

impl Field {
    fn csv(&self) -> String {
        match self {
            Field::Num(x) => fmt17(*x),
            Field::Int(i) => i.to_string(),
            Field::Str(s) => s.clone(),
            Field::Empty => String::new(),
        }
    }

    fn json(&self) -> String {
        match self {
            Field::Num(x) if x.is_finite() => fmt17(*x),
            Field::Num(x) => format!("\"{x}\""),
            Field::Int(i) => i.to_string(),
            Field::Str(s) => format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\"")),
            Field::Empty => "null".to_string(),
        }
    }
}

/// 17 significant digits, scientific notation.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format '{other}' (expected csv or json)")),
        }
    }
}

/// A result table: ordered metadata, column names, rows.
#[derive(Debug, Clone)]
pub struct Table {
    pub meta: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Field>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table { meta: Vec::new(), columns, rows: Vec::new() }
    }

    pub fn meta(&mut self, key: &str, value: impl Into<String>) {
        self.meta.push((key.to_string(), value.into()));
    }

    pub fn push(&mut self, row: Vec<Field>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.render_csv(),
            Format::Json => self.render_json(),
        }
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            let _ = writeln!(out, "# {k}: {v}");
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Field::csv).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    fn render_json(&self) -> String {
        let mut out = String::from("{\n  \"meta\": {\n");
        for (i, (k, v)) in self.meta.iter().enumerate() {
            let comma = if i + 1 < self.meta.len() { "," } else { "" };
            let _ = writeln!(out, "    \"{k}\": \"{v}\"{comma}");
        }
        out.push_str("  },\n  \"rows\": [\n");
        for (i, row) in self.rows.iter().enumerate() {
            let cells: Vec<String> = self
                .columns
                .iter()
                .zip(row)
                .map(|(c, f)| format!("\"{c}\": {}", f.json()))
                .collect();
            let comma = if i + 1 < self.rows.len() { "," } else { "" };
            let _ = writeln!(out, "    {{{}}}{comma}", cells.join(", "));
        }
        out.push_str("  ]\n}\n");
        out
    }

    /// Writes to the path, or to standard output for `-`.
    pub fn write(&self, path: &str, format: Format) -> io::Result<()> {
        let body = self.render(format);
        if path == "-" {
            io::stdout().write_all(body.as_bytes())
        } else {
            fs::write(path, body)
        }
    }
}
