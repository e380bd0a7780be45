use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::graph::Graph;
use crate::monoid::ReductionTrace;

use super::format::emit_text;

/// Exit statuses shared by all subcommands.
pub mod exit {
    pub const SUCCESS: u8 = 0;
    pub const REFUTED: u8 = 10;
    pub const UNKNOWN: u8 = 20;
    pub const INTERNAL: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const INPUT: u8 = 3;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

/// The result of one command. Contains nothing that varies between runs.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub arguments: BTreeMap<String, Value>,
    pub input_digest: Option<String>,
    pub status: String,
    pub exit_code: u8,
    pub result: Value,
    /// Human-readable summary lines.
    #[serde(skip)]
    pub summary: Vec<String>,
    /// Graph emitted by the command, rendered after the summary in text mode.
    #[serde(skip)]
    pub graph_text: Option<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            arguments: BTreeMap::new(),
            input_digest: None,
            status: "ok".into(),
            exit_code: exit::SUCCESS,
            result: Value::Null,
            summary: Vec::new(),
            graph_text: None,
        }
    }

    pub fn arg(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.arguments.insert(
            key.to_string(),
            serde_json::to_value(value).expect("argument values serialize"),
        );
        self
    }

    pub fn line(&mut self, line: impl Into<String>) -> &mut Self {
        self.summary.push(line.into());
        self
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
                s.push('\n');
                s
            }
            OutputFormat::Text => self.render_text(),
        }
    }

    fn render_text(&self) -> String {
        let mut lines = vec![format!("command: {}", self.command)];
        for (k, v) in &self.arguments {
            lines.push(format!("{k}: {}", plain(v)));
        }
        if let Some(d) = &self.input_digest {
            lines.push(format!("digest: sha256:{d}"));
        }
        lines.extend(self.summary.iter().cloned());
        lines.push(format!("status: {} (exit {})", self.status, self.exit_code));

        let mut out = String::new();
        // when a graph follows, keep the whole output a valid graph file
        let prefix = if self.graph_text.is_some() { "# " } else { "" };
        for l in lines {
            out.push_str(prefix);
            out.push_str(&l);
            out.push('\n');
        }
        if let Some(g) = &self.graph_text {
            out.push_str(g);
        }
        out
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(plain).collect::<Vec<_>>().join(","),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

/// SHA-256 of the canonical text form of `graph`.
pub fn graph_digest(graph: &Graph) -> String {
    hex::encode(Sha256::digest(emit_text(graph).as_bytes()))
}

/// `(1,0) -[v]-> (2,2) -[v]-> ...`
pub fn render_trace(trace: &ReductionTrace, generators: &[String]) -> String {
    let mut s = trace.start.to_string();
    for step in &trace.steps {
        s.push_str(&format!(" -[{}]-> {}", generators[step.rule], step.result));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::{MonoidElement, TraceStep};

    #[test]
    fn traces_render_with_generator_names() {
        let t = ReductionTrace {
            start: MonoidElement::new(vec![1]),
            steps: vec![TraceStep { rule: 0, result: MonoidElement::new(vec![2]) }],
        };
        assert_eq!(render_trace(&t, &["v".into()]), "(1) -[v]-> (2)");
    }

    #[test]
    fn text_report_with_graph_is_commented() {
        let mut r = Report::new("companion");
        r.arg("x", vec!["u"]);
        r.graph_text = Some("vertex u;\n".into());
        let text = r.render(OutputFormat::Text);
        assert!(text.lines().filter(|l| !l.starts_with("vertex")).all(|l| l.starts_with("# ")));
        assert!(text.ends_with("vertex u;\n"));
    }
}
