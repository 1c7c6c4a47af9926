//! Distance matrix file formats, selected by name through [`FormatRegistry`].
//!
//! * `csv` – square table; the first row and first column hold labels, the
//!   top-left cell is ignored.
//! * `lower` – PHYLIP-style lower triangle: one line per point, the label
//!   followed by its distances to all earlier points. An optional first line
//!   holding only the point count is accepted.
//! * `json` – `{"labels": [...], "matrix": [[...], ...]}` with entries as
//!   decimal or `p/q` strings (plain JSON numbers are also read).
//!
//! Every entry is parsed exactly; negative, `nan` and `inf` tokens are
//! rejected. Writers emit integers, terminating decimals, or `p/q`, so
//! reading back what was written reproduces the matrix exactly.

use std::collections::HashSet;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::FiniteMetricSpace;
use crate::rational::{parse_exact, plain_string};

/// Labels and entries as read, before metric validation.
#[derive(Debug, Clone, PartialEq)]
pub struct RawMatrix {
    pub labels: Vec<String>,
    pub rows: Vec<Vec<BigRational>>,
}

impl RawMatrix {
    fn check_labels(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for l in &self.labels {
            if l.is_empty() {
                return Err(Error::Malformed {
                    line: 0,
                    reason: "empty label".into(),
                });
            }
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(())
    }
}

pub trait MatrixFormat: Send + Sync {
    fn name(&self) -> &'static str;

    fn parse(&self, text: &str) -> Result<RawMatrix>;

    fn write(&self, space: &FiniteMetricSpace) -> Result<String>;
}

pub struct FormatRegistry {
    entries: Vec<Box<dyn MatrixFormat>>,
}

impl FormatRegistry {
    pub fn builtin() -> FormatRegistry {
        FormatRegistry {
            entries: vec![Box::new(Csv), Box::new(Lower), Box::new(Json)],
        }
    }

    pub fn register(&mut self, format: Box<dyn MatrixFormat>) {
        self.entries.retain(|f| f.name() != format.name());
        self.entries.push(format);
    }

    pub fn get(&self, name: &str) -> Result<&dyn MatrixFormat> {
        self.entries
            .iter()
            .find(|f| f.name() == name)
            .map(|f| f.as_ref())
            .ok_or_else(|| Error::Unknown {
                registry: "format",
                name: name.to_string(),
                known: self.names().join(", "),
            })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|f| f.name()).collect()
    }
}

fn number(token: &str, line: usize) -> Result<BigRational> {
    parse_exact(token).map_err(|e| Error::Malformed {
        line,
        reason: e.to_string(),
    })
}

struct Csv;

impl MatrixFormat for Csv {
    fn name(&self) -> &'static str {
        "csv"
    }

    fn parse(&self, text: &str) -> Result<RawMatrix> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let mut records = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| Error::Malformed {
                line: e.position().map_or(0, |p| p.line() as usize),
                reason: e.to_string(),
            })?;
            let line = record.position().map_or(0, |p| p.line() as usize);
            if record.iter().all(str::is_empty) {
                continue;
            }
            records.push((line, record));
        }
        let Some((_, header)) = records.first() else {
            return Err(Error::Empty);
        };
        let labels: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
        let n = labels.len();
        let body = &records[1..];
        if body.len() != n {
            return Err(Error::Malformed {
                line: body.last().map_or(1, |(l, _)| *l),
                reason: format!("{} data rows for {n} labels", body.len()),
            });
        }
        let mut rows = Vec::with_capacity(n);
        for (i, (line, record)) in body.iter().enumerate() {
            if record.len() != n + 1 {
                return Err(Error::Malformed {
                    line: *line,
                    reason: format!("expected {} cells, found {}", n + 1, record.len()),
                });
            }
            if &record[0] != labels[i].as_str() {
                return Err(Error::Malformed {
                    line: *line,
                    reason: format!("row label {:?} does not match column label {:?}", &record[0], labels[i]),
                });
            }
            rows.push(record.iter().skip(1).map(|t| number(t, *line)).collect::<Result<Vec<_>>>()?);
        }
        let raw = RawMatrix { labels, rows };
        raw.check_labels()?;
        Ok(raw)
    }

    fn write(&self, space: &FiniteMetricSpace) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(e.to_string());
        let mut header = vec![".".to_string()];
        header.extend(space.labels().iter().cloned());
        w.write_record(&header).map_err(io)?;
        for (i, row) in space.rows().iter().enumerate() {
            let mut rec = vec![space.label(i).to_string()];
            rec.extend(row.iter().map(plain_string));
            w.write_record(&rec).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }
}

struct Lower;

impl MatrixFormat for Lower {
    fn name(&self) -> &'static str {
        "lower"
    }

    fn parse(&self, text: &str) -> Result<RawMatrix> {
        let mut lines: Vec<(usize, Vec<&str>)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split_whitespace().collect::<Vec<_>>()))
            .filter(|(_, t)| !t.is_empty())
            .collect();
        if let Some((_, first)) = lines.first() {
            let count = (first.len() == 1).then(|| first[0].parse::<usize>().ok()).flatten();
            if count == Some(lines.len() - 1) {
                lines.remove(0);
            }
        }
        if lines.is_empty() {
            return Err(Error::Empty);
        }
        let n = lines.len();
        let mut labels = Vec::with_capacity(n);
        let mut lower: Vec<Vec<BigRational>> = Vec::with_capacity(n);
        for (i, (line, tokens)) in lines.iter().enumerate() {
            if tokens.len() != i + 1 {
                return Err(Error::Malformed {
                    line: *line,
                    reason: format!("expected a label and {i} distances, found {} tokens", tokens.len()),
                });
            }
            labels.push(tokens[0].to_string());
            lower.push(tokens[1..].iter().map(|t| number(t, *line)).collect::<Result<Vec<_>>>()?);
        }
        let mut rows = vec![vec![BigRational::default(); n]; n];
        for i in 0..n {
            for j in 0..i {
                rows[i][j] = lower[i][j].clone();
                rows[j][i] = lower[i][j].clone();
            }
        }
        let raw = RawMatrix { labels, rows };
        raw.check_labels()?;
        Ok(raw)
    }

    fn write(&self, space: &FiniteMetricSpace) -> Result<String> {
        let mut out = String::new();
        for i in 0..space.n() {
            let label = space.label(i);
            if label.is_empty() || label.chars().any(char::is_whitespace) {
                return Err(Error::Io(format!("label {label:?} cannot be written in lower format")));
            }
            out.push_str(label);
            for j in 0..i {
                out.push(' ');
                out.push_str(&plain_string(space.distance(i, j)));
            }
            out.push('\n');
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct JsonMatrix {
    labels: Vec<String>,
    matrix: Vec<Vec<serde_json::Value>>,
}

struct Json;

impl MatrixFormat for Json {
    fn name(&self) -> &'static str {
        "json"
    }

    fn parse(&self, text: &str) -> Result<RawMatrix> {
        let doc: JsonMatrix = serde_json::from_str(text).map_err(|e| Error::Malformed {
            line: e.line(),
            reason: e.to_string(),
        })?;
        let rows = doc
            .matrix
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .map(|v| match v {
                        serde_json::Value::String(s) => number(s, i + 1),
                        serde_json::Value::Number(x) => number(&x.to_string(), i + 1),
                        other => Err(Error::Malformed {
                            line: i + 1,
                            reason: format!("matrix entry {other} is neither a string nor a number"),
                        }),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let n = doc.labels.len();
        if rows.len() != n {
            return Err(Error::LabelCount { labels: n, n: rows.len() });
        }
        for (row, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::NotSquare {
                    row,
                    found: r.len(),
                    expected: n,
                });
            }
        }
        let raw = RawMatrix { labels: doc.labels, rows };
        raw.check_labels()?;
        Ok(raw)
    }

    fn write(&self, space: &FiniteMetricSpace) -> Result<String> {
        let doc = JsonMatrix {
            labels: space.labels().to_vec(),
            matrix: space
                .rows()
                .iter()
                .map(|r| r.iter().map(|v| serde_json::Value::String(plain_string(v))).collect())
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&doc).map_err(|e| Error::Io(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }
}
