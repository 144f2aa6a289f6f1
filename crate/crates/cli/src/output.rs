use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Tsv,
}

impl Format {
    pub fn ext(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Tsv => "tsv",
        }
    }

    fn from_path(path: &Path) -> Result<Format> {
        match path.extension().and_then(|e| e.to_str()) {
            Some("csv") => Ok(Format::Csv),
            Some("json") => Ok(Format::Json),
            Some("tsv") | Some("txt") => Ok(Format::Tsv),
            _ => bail!("cannot tell the format of {} from its extension", path.display()),
        }
    }
}

/// A header plus rows of cells; the first column is the node id.
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn from_numeric(header: Vec<String>, ids: &[String], rows: impl IntoIterator<Item = Vec<String>>) -> Table {
        let rows = ids
            .iter()
            .zip(rows)
            .map(|(id, r)| std::iter::once(id.clone()).chain(r).collect())
            .collect();
        Table { header, rows }
    }

    /// Write as `<stem>.<ext>` in `dir`; returns the path written.
    pub fn write(&self, dir: &Path, stem: &str, format: Format) -> Result<PathBuf> {
        let path = dir.join(format!("{stem}.{}", format.ext()));
        let mut w = roleprox::io::create(&path)?;
        match format {
            Format::Csv => {
                let mut out = csv::Writer::from_writer(&mut w);
                out.write_record(&self.header)?;
                for r in &self.rows {
                    out.write_record(r)?;
                }
                out.flush()?;
            }
            Format::Tsv => {
                writeln!(w, "{}", self.header.join("\t"))?;
                for r in &self.rows {
                    writeln!(w, "{}", r.join("\t"))?;
                }
            }
            Format::Json => {
                let records: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| {
                        let mut m = Map::new();
                        for (h, cell) in self.header.iter().zip(r) {
                            let v = match cell.parse::<i64>() {
                                Ok(i) => Value::from(i),
                                Err(_) => cell
                                    .parse::<f64>()
                                    .ok()
                                    .and_then(serde_json::Number::from_f64)
                                    .map_or_else(|| Value::String(cell.clone()), Value::Number),
                            };
                            m.insert(h.clone(), v);
                        }
                        Value::Object(m)
                    })
                    .collect();
                serde_json::to_writer_pretty(&mut w, &records)?;
                writeln!(w)?;
            }
        }
        w.flush()?;
        Ok(path)
    }

    pub fn read(path: &Path) -> Result<Table> {
        let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
        match Format::from_path(path)? {
            Format::Csv => {
                let mut rdr = csv::Reader::from_reader(file);
                let header = rdr.headers()?.iter().map(str::to_string).collect();
                let rows = rdr
                    .records()
                    .map(|r| Ok(r?.iter().map(str::to_string).collect()))
                    .collect::<Result<_>>()?;
                Ok(Table { header, rows })
            }
            Format::Tsv => {
                let mut lines = BufReader::new(file).lines();
                let header: Vec<String> = match lines.next() {
                    Some(l) => l?.split('\t').map(str::to_string).collect(),
                    None => bail!("{} is empty", path.display()),
                };
                let mut rows = Vec::new();
                for l in lines {
                    let l = l?;
                    if !l.trim().is_empty() {
                        rows.push(l.split('\t').map(str::to_string).collect());
                    }
                }
                Ok(Table { header, rows })
            }
            Format::Json => {
                let records: Vec<Map<String, Value>> = serde_json::from_reader(BufReader::new(file))?;
                let header: Vec<String> = records.first().map(|m| m.keys().cloned().collect()).unwrap_or_default();
                let rows = records
                    .iter()
                    .map(|m| {
                        header
                            .iter()
                            .map(|h| match m.get(h) {
                                Some(Value::String(s)) => s.clone(),
                                Some(v) => v.to_string(),
                                None => String::new(),
                            })
                            .collect()
                    })
                    .collect();
                Ok(Table { header, rows })
            }
        }
    }
}

pub fn write_json<T: serde::Serialize>(dir: &Path, name: &str, value: &T) -> Result<PathBuf> {
    let path = dir.join(name);
    roleprox::io::write_json(&path, value)?;
    Ok(path)
}
