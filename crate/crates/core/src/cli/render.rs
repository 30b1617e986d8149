//! Plain-text, CSV and JSON rendering.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Csv,
    Json,
}

/// `%.12g`: 12 significant digits, trailing zeros dropped.
pub fn fmt_g(x: f64) -> String {
    fmt_sig(x, 12)
}

pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{m}e{sign}{:02}", exp.abs());
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// One titled block of a report.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub title: Option<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(title: Option<&str>, header: &[&str]) -> Self {
        Self {
            title: title.map(str::to_string),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, cells: Vec<String>) -> &mut Self {
        self.rows.push(cells);
        self
    }

    fn render_text(&self, out: &mut String) {
        if let Some(t) = &self.title {
            let _ = writeln!(out, "{t}");
        }
        let cols = self.header.len();
        let mut width = vec![0; cols];
        for r in std::iter::once(&self.header).chain(&self.rows) {
            for (w, c) in width.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        for r in std::iter::once(&self.header).chain(&self.rows) {
            let line: Vec<String> = r
                .iter()
                .zip(&width)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect();
            let _ = writeln!(out, "{}", line.join("  ").trim_end());
        }
    }

    fn render_csv(&self, out: &mut String) {
        for r in std::iter::once(&self.header).chain(&self.rows) {
            let cells: Vec<String> = r.iter().map(|c| csv_cell(c)).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
    }
}

fn csv_cell(c: &str) -> String {
    if c.contains([',', '"', '\n']) {
        format!("\"{}\"", c.replace('"', "\"\""))
    } else {
        c.to_string()
    }
}

/// A command's result in all three formats.
#[derive(Debug, Clone)]
pub struct Report {
    pub tables: Vec<Table>,
    pub json: Value,
    /// Replaces the table rendering when set.
    pub plain: Option<String>,
}

impl Report {
    pub fn render(&self, format: OutputFormat) -> String {
        let mut out = String::new();
        match format {
            OutputFormat::Json => {
                out = serde_json::to_string_pretty(&self.json).expect("serializable");
                out.push('\n');
            }
            OutputFormat::Table => {
                if let Some(p) = &self.plain {
                    out.push_str(p);
                    if !p.ends_with('\n') {
                        out.push('\n');
                    }
                } else {
                    for (i, t) in self.tables.iter().enumerate() {
                        if i > 0 {
                            out.push('\n');
                        }
                        t.render_text(&mut out);
                    }
                }
            }
            OutputFormat::Csv => {
                for (i, t) in self.tables.iter().enumerate() {
                    if i > 0 {
                        out.push('\n');
                    }
                    t.render_csv(&mut out);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(fmt_g(1.0 / 6.0), "0.166666666667");
        assert_eq!(fmt_g(5.0 / 6.0), "0.833333333333");
        assert_eq!(fmt_g(0.0), "0");
        assert_eq!(fmt_g(1.0), "1");
        assert_eq!(fmt_g(3.1875), "3.1875");
        assert_eq!(fmt_g(-2.5), "-2.5");
        assert_eq!(fmt_g(1e-7), "1e-07");
        assert_eq!(fmt_g(123456789012345.0), "1.23456789012e+14");
        assert_eq!(fmt_g(0.999999999999999), "1");
        assert_eq!(fmt_g(157.0 / 48.0), "3.27083333333");
        assert_eq!(fmt_g(f64::INFINITY), "inf");
    }

    #[test]
    fn csv_quoting() {
        let mut t = Table::new(None, &["a", "b"]);
        t.row(vec!["x,y".into(), "1".into()]);
        let r = Report {
            tables: vec![t],
            json: Value::Null,
            plain: None,
        };
        assert_eq!(r.render(OutputFormat::Csv), "a,b\n\"x,y\",1\n");
    }
}
