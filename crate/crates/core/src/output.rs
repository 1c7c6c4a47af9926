//! Graph output formats (`--out dot|json`), selected by name through
//! [`GraphWriterRegistry`].

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::rational::{fraction_string, plain_string};

pub trait GraphWriter: Send + Sync {
    fn name(&self) -> &'static str;

    /// Renders `graph`. `extra` holds command-specific fields; formats that
    /// cannot carry them drop them.
    fn write(&self, graph: &WeightedGraph, extra: &Map<String, Value>) -> String;
}

pub struct GraphWriterRegistry {
    entries: Vec<Box<dyn GraphWriter>>,
}

impl GraphWriterRegistry {
    pub fn builtin() -> GraphWriterRegistry {
        GraphWriterRegistry {
            entries: vec![Box::new(Dot), Box::new(JsonEdges)],
        }
    }

    pub fn register(&mut self, writer: Box<dyn GraphWriter>) {
        self.entries.retain(|w| w.name() != writer.name());
        self.entries.push(writer);
    }

    pub fn get(&self, name: &str) -> Result<&dyn GraphWriter> {
        self.entries
            .iter()
            .find(|w| w.name() == name)
            .map(|w| w.as_ref())
            .ok_or_else(|| Error::Unknown {
                registry: "output format",
                name: name.to_string(),
                known: self.names().join(", "),
            })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|w| w.name()).collect()
    }
}

const DOT_KEYWORDS: [&str; 6] = ["graph", "digraph", "subgraph", "node", "edge", "strict"];

/// A DOT identifier, quoted unless it is a plain identifier or numeral.
pub fn dot_id(label: &str) -> String {
    let is_ident = label
        .chars()
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !DOT_KEYWORDS.contains(&label.to_ascii_lowercase().as_str());
    let is_numeral = {
        let body = label.strip_prefix('-').unwrap_or(label);
        let digits = body.chars().filter(|c| c.is_ascii_digit()).count();
        digits > 0
            && body.chars().all(|c| c.is_ascii_digit() || c == '.')
            && body.chars().filter(|&c| c == '.').count() <= 1
    };
    if is_ident || is_numeral {
        label.to_string()
    } else {
        format!("\"{}\"", label.replace('\\', "\\\\").replace('"', "\\\""))
    }
}

struct Dot;

impl GraphWriter for Dot {
    fn name(&self) -> &'static str {
        "dot"
    }

    fn write(&self, graph: &WeightedGraph, _extra: &Map<String, Value>) -> String {
        let labels = graph.labels();
        let mut out = String::from("graph {");
        let degrees = graph.degrees();
        for (v, label) in labels.iter().enumerate() {
            if degrees[v] == 0 {
                out.push_str(&format!(" {};", dot_id(label)));
            }
        }
        for e in graph.edges() {
            out.push_str(&format!(
                " {} -- {} [label=\"{}\"];",
                dot_id(&labels[e.u]),
                dot_id(&labels[e.v]),
                plain_string(&e.weight)
            ));
        }
        out.push_str(" }\n");
        out
    }
}

struct JsonEdges;

impl GraphWriter for JsonEdges {
    fn name(&self) -> &'static str {
        "json"
    }

    fn write(&self, graph: &WeightedGraph, extra: &Map<String, Value>) -> String {
        let mut doc = Map::new();
        doc.insert("labels".into(), json!(graph.labels()));
        doc.insert("edges".into(), json!(graph.labelled_edges()));
        doc.insert("total_weight".into(), json!(fraction_string(&graph.total_weight())));
        for (k, v) in extra {
            doc.insert(k.clone(), v.clone());
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("JSON values serialize");
        s.push('\n');
        s
    }
}
