//! Tables and their CSV / JSONL encodings.

use std::io::{self, Write};

use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i128),
    Real(f64),
    Text(String),
    Bool(bool),
}

impl Value {
    fn render(&self) -> String {
        match self {
            Value::Int(v) => v.to_string(),
            Value::Real(v) => fmt_real(*v),
            Value::Text(s) => s.clone(),
            Value::Bool(b) => b.to_string(),
        }
    }

    fn to_json(&self) -> String {
        match self {
            Value::Real(v) if !v.is_finite() => "null".into(),
            Value::Text(s) => serde_json::Value::String(s.clone()).to_string(),
            other => other.render(),
        }
    }
}

macro_rules! from_int {
    ($($t:ty),*) => {$(
        impl From<$t> for Value {
            fn from(v: $t) -> Self {
                Value::Int(v as i128)
            }
        }
    )*};
}
from_int!(u8, u32, u64, usize, i32, i64, i128);

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Real(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_string())
    }
}

/// Rows sharing one column list.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), rows: Vec::new() }
    }

    /// Panics if the row width differs from the column count.
    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn columns(&self) -> &[&'static str] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Value>] {
        &self.rows
    }
}

/// CSV with a header row, or one JSON object per row with keys in column order.
pub fn emit<W: Write>(table: &Table, format: Format, out: &mut W) -> io::Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(&table.columns)?;
            for row in &table.rows {
                w.write_record(row.iter().map(Value::render))?;
            }
            w.flush()?;
        }
        Format::Jsonl => {
            for row in &table.rows {
                let fields: Vec<String> = table
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(k, v)| format!("{}:{}", serde_json::Value::String(k.to_string()), v.to_json()))
                    .collect();
                writeln!(out, "{{{}}}", fields.join(","))?;
            }
        }
    }
    out.flush()
}

/// 12 significant digits, trailing zeros dropped; scientific notation outside
/// `1e-6 ≤ |x| < 1e16`.
pub fn fmt_real(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let s = format!("{x:.11e}");
    let (mant, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let neg = mant.starts_with('-');
    let sign = if neg { "-" } else { "" };
    if !(-6..16).contains(&exp) {
        return format!("{}e{exp}", trim_fraction(mant));
    }
    let digits: String = mant.chars().filter(char::is_ascii_digit).collect();
    let point = exp + 1;
    let body = if point <= 0 {
        format!("0.{}{digits}", "0".repeat((-point) as usize))
    } else if point as usize >= digits.len() {
        format!("{digits}{}", "0".repeat(point as usize - digits.len()))
    } else {
        let (int, frac) = digits.split_at(point as usize);
        format!("{int}.{frac}")
    };
    format!("{sign}{}", trim_fraction(&body))
}

fn trim_fraction(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn render(table: &Table, format: Format) -> String {
        let mut buf = Vec::new();
        emit(table, format, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn real_formatting() {
        assert_eq!(fmt_real(2.56), "2.56");
        assert_eq!(fmt_real(64.0 / 25.0), "2.56");
        assert_eq!(fmt_real(20.0), "20");
        assert_eq!(fmt_real(-0.25), "-0.25");
        assert_eq!(fmt_real(std::f64::consts::PI), "3.14159265359");
        assert_eq!(fmt_real(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_real(1234567.0), "1234567");
        assert_eq!(fmt_real(0.000123), "0.000123");
        assert_eq!(fmt_real(1e-9), "1e-9");
        assert_eq!(fmt_real(-2.5e20), "-2.5e20");
        assert_eq!(fmt_real(0.0), "0");
        assert_eq!(fmt_real(-0.0), "0");
        assert_eq!(fmt_real(f64::NAN), "NaN");
    }

    #[test]
    fn csv_one_row() {
        let mut t = Table::new(&["n", "value"]);
        t.push(vec![7u64.into(), 2.56.into()]);
        assert_eq!(render(&t, Format::Csv), "n,value\n7,2.56\n");
    }

    #[test]
    fn csv_zero_rows_is_header_only() {
        let t = Table::new(&["a", "b"]);
        assert_eq!(render(&t, Format::Csv), "a,b\n");
    }

    #[test]
    fn jsonl_zero_rows_is_empty() {
        let t = Table::new(&["a", "b"]);
        assert_eq!(render(&t, Format::Jsonl), "");
    }

    #[test]
    fn jsonl_keeps_column_order() {
        let mut t = Table::new(&["z", "a", "text", "ok", "bad"]);
        t.push(vec![1u64.into(), 0.5.into(), "x,\"y\"".into(), true.into(), f64::NAN.into()]);
        assert_eq!(render(&t, Format::Jsonl), "{\"z\":1,\"a\":0.5,\"text\":\"x,\\\"y\\\"\",\"ok\":true,\"bad\":null}\n");
    }

    #[test]
    fn csv_quotes_fields() {
        let mut t = Table::new(&["form"]);
        t.push(vec!["(1,1,1,1,1)".into()]);
        assert_eq!(render(&t, Format::Csv), "form\n\"(1,1,1,1,1)\"\n");
    }
}
