use std::io::{self, Write};

use clap::ValueEnum;
use num_bigint::BigInt;
use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Aligned columns.
    Text,
    /// Header row, then one record per row.
    Csv,
    /// One JSON object per line.
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(BigInt),
    Str(String),
    Json(Value),
    Null,
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v.into())
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v.into())
    }
}

impl From<BigInt> for Cell {
    fn from(v: BigInt) -> Self {
        Cell::Int(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Str(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Null, Into::into)
    }
}

/// JSON number with every digit of `v`.
pub fn json_int(v: &BigInt) -> Value {
    Value::Number(v.to_string().parse::<Number>().expect("integer literal"))
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Str(s) => s.clone(),
            Cell::Json(v) => v.to_string(),
            Cell::Null => "-".into(),
        }
    }

    fn csv(&self) -> String {
        match self {
            Cell::Null => String::new(),
            other => other.text(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json_int(v),
            Cell::Str(s) => Value::String(s.clone()),
            Cell::Json(v) => v.clone(),
            Cell::Null => Value::Null,
        }
    }
}

/// Row sink for one command. CSV and JSON rows are written as they arrive;
/// text rows are held back until [`Table::finish`] so columns can be aligned.
pub struct Table<'w> {
    format: Format,
    columns: Vec<&'static str>,
    out: &'w mut dyn Write,
    pending: Vec<Vec<String>>,
    started: bool,
}

impl<'w> Table<'w> {
    pub fn new(format: Format, columns: &[&'static str], out: &'w mut dyn Write) -> Self {
        Table {
            format,
            columns: columns.to_vec(),
            out,
            pending: Vec::new(),
            started: false,
        }
    }

    pub fn row(&mut self, cells: Vec<Cell>) -> io::Result<()> {
        debug_assert_eq!(cells.len(), self.columns.len());
        match self.format {
            Format::Text => self.pending.push(cells.iter().map(Cell::text).collect()),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(&mut *self.out);
                if !self.started {
                    w.write_record(&self.columns)?;
                }
                w.write_record(cells.iter().map(Cell::csv))?;
                w.flush()?;
            }
            Format::Json => {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(&cells)
                    .map(|(k, c)| (k.to_string(), c.json()))
                    .collect();
                writeln!(self.out, "{}", Value::Object(obj))?;
            }
        }
        self.started = true;
        Ok(())
    }

    /// Pushes streamed rows out; called between batches.
    pub fn flush(&mut self) -> io::Result<()> {
        self.out.flush()
    }

    pub fn finish(self) -> io::Result<()> {
        if self.format == Format::Text {
            let mut widths: Vec<usize> = self.columns.iter().map(|c| c.len()).collect();
            for row in &self.pending {
                for (w, cell) in widths.iter_mut().zip(row) {
                    *w = (*w).max(cell.chars().count());
                }
            }
            let header: Vec<String> = self.columns.iter().map(|c| c.to_string()).collect();
            for row in std::iter::once(&header).chain(&self.pending) {
                let line: Vec<String> = row
                    .iter()
                    .zip(&widths)
                    .map(|(cell, &w)| format!("{cell:>w$}"))
                    .collect();
                writeln!(self.out, "{}", line.join("  "))?;
            }
        }
        self.out.flush()
    }
}
