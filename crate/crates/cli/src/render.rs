use std::fmt::Write as _;

use anyhow::Result;
use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

use crate::checks::Grid;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

/// Rendered command output: the report itself, an optional grid for tabular
/// formats, and the verification verdict.
pub struct Output {
    pub value: Value,
    pub grid: Option<Grid>,
    pub passed: bool,
}

impl Output {
    pub fn new<R: Serialize>(report: &R, grid: Option<Grid>, passed: bool) -> Result<Self> {
        // Round-tripping through `Value` sorts every object's keys.
        Ok(Self {
            value: serde_json::to_value(report)?,
            grid,
            passed,
        })
    }

    pub fn render(&self, format: Format) -> Result<String> {
        Ok(match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.value)?;
                s.push('\n');
                s
            }
            Format::Csv => match &self.grid {
                Some(g) => grid_csv(g),
                None => {
                    let mut rows = Vec::new();
                    flatten("", &self.value, &mut rows);
                    let mut s = String::from("key,value\n");
                    for (k, v) in rows {
                        writeln!(s, "{},{}", csv_field(&k), csv_field(&v))?;
                    }
                    s
                }
            },
            Format::Pretty => {
                let mut s = String::new();
                if let Some(g) = &self.grid {
                    s.push_str(&grid_pretty(g));
                    s.push('\n');
                }
                let mut rows = Vec::new();
                flatten("", &self.value, &mut rows);
                let skip = |k: &str| {
                    self.grid.is_some()
                        && ["table.", "images.", "overlaps."].iter().any(|p| k.starts_with(p))
                };
                let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                for (k, v) in rows.iter().filter(|(k, _)| !skip(k)) {
                    writeln!(s, "{k:<width$}  {v}")?;
                }
                writeln!(s, "verdict{}  {}", " ".repeat(width.saturating_sub(7)), verdict(self.passed))?;
                s
            }
        })
    }
}

pub fn verdict(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, v)| flatten(&key(k), v, out)),
        Value::Array(a) if a.is_empty() => out.push((prefix.to_string(), "[]".into())),
        Value::Array(a) => a
            .iter()
            .enumerate()
            .for_each(|(i, v)| flatten(&key(&i.to_string()), v, out)),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Null => out.push((prefix.to_string(), "null".into())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn grid_csv(g: &Grid) -> String {
    let mut s = String::new();
    let header: Vec<String> = std::iter::once(&g.corner).chain(&g.columns).map(|c| csv_field(c)).collect();
    s.push_str(&header.join(","));
    s.push('\n');
    for (label, cells) in &g.rows {
        let row: Vec<String> = std::iter::once(label).chain(cells).map(|c| csv_field(c)).collect();
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

fn grid_pretty(g: &Grid) -> String {
    let first = g
        .rows
        .iter()
        .map(|(l, _)| l.len())
        .chain([g.corner.len()])
        .max()
        .unwrap_or(0);
    let cell = g
        .rows
        .iter()
        .flat_map(|(_, r)| r.iter().map(|c| c.chars().count()))
        .chain(g.columns.iter().map(|c| c.chars().count()))
        .max()
        .unwrap_or(0);
    let mut s = format!("{:<first$}", g.corner);
    for c in &g.columns {
        s.push_str(&format!(" {c:>cell$}"));
    }
    s.push('\n');
    for (label, cells) in &g.rows {
        s.push_str(&format!("{label:<first$}"));
        for c in cells {
            s.push_str(&format!(" {c:>cell$}"));
        }
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_are_sorted_and_csv_flattens() {
        #[derive(Serialize)]
        struct R {
            zeta: u8,
            alpha: Vec<&'static str>,
        }
        let out = Output::new(&R { zeta: 1, alpha: vec!["a,b"] }, None, true).unwrap();
        let json = out.render(Format::Json).unwrap();
        assert!(json.find("alpha").unwrap() < json.find("zeta").unwrap());
        assert_eq!(out.render(Format::Csv).unwrap(), "key,value\nalpha.0,\"a,b\"\nzeta,1\n");
    }
}
