//! Finite directed multigraphs and their incidence matrices.
//!
//! A [`Graph`] can only be obtained through [`Graph::validate`], which checks
//! names and endpoints and fixes the vertex order used everywhere downstream:
//! regular vertices first (in input order), then sinks (in input order).
//! Loops and parallel edges are allowed and counted with multiplicity.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Which namespace a name lives in. Vertex and edge names are independent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NameKind {
    Vertex,
    Edge,
}

impl fmt::Display for NameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NameKind::Vertex => f.write_str("vertex"),
            NameKind::Edge => f.write_str("edge"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate {kind} name `{name}`")]
    DuplicateName { kind: NameKind, name: String },
    #[error("edge `{edge}` refers to undeclared vertex `{vertex}`")]
    DanglingEdge { edge: String, vertex: String },
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("malformed incidence matrix: {0}")]
    MalformedMatrix(String),
}

/// A named edge `name: source -> range`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub name: String,
    #[serde(rename = "from")]
    pub source: String,
    #[serde(rename = "to")]
    pub range: String,
}

impl Edge {
    pub fn new(name: impl Into<String>, source: impl Into<String>, range: impl Into<String>) -> Self {
        Edge {
            name: name.into(),
            source: source.into(),
            range: range.into(),
        }
    }
}

/// A validated finite directed multigraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    regular_count: usize,
    position: BTreeMap<String, usize>,
}

/// Partition of the vertex set into regular vertices and sinks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexClassification {
    pub regular: Vec<String>,
    pub sinks: Vec<String>,
}

impl Graph {
    /// Checks names and endpoints and returns the graph in regular-first order.
    pub fn validate<V, S>(vertices: V, edges: Vec<Edge>) -> Result<Graph, GraphError>
    where
        V: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        if vertices.is_empty() {
            return Err(GraphError::EmptyGraph);
        }
        let mut seen = BTreeSet::new();
        for v in &vertices {
            if !seen.insert(v.as_str()) {
                return Err(GraphError::DuplicateName {
                    kind: NameKind::Vertex,
                    name: v.clone(),
                });
            }
        }
        let mut edge_names = BTreeSet::new();
        for e in &edges {
            if !edge_names.insert(e.name.as_str()) {
                return Err(GraphError::DuplicateName {
                    kind: NameKind::Edge,
                    name: e.name.clone(),
                });
            }
            for endpoint in [&e.source, &e.range] {
                if !seen.contains(endpoint.as_str()) {
                    return Err(GraphError::DanglingEdge {
                        edge: e.name.clone(),
                        vertex: endpoint.clone(),
                    });
                }
            }
        }

        let sources: BTreeSet<&str> = edges.iter().map(|e| e.source.as_str()).collect();
        let (regular, sinks): (Vec<String>, Vec<String>) = vertices
            .iter()
            .cloned()
            .partition(|v| sources.contains(v.as_str()));
        let regular_count = regular.len();
        let ordered: Vec<String> = regular.into_iter().chain(sinks).collect();
        let position = ordered
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();

        Ok(Graph {
            vertices: ordered,
            edges,
            regular_count,
            position,
        })
    }

    /// Vertices in canonical order (regular first, then sinks).
    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn regular_count(&self) -> usize {
        self.regular_count
    }

    /// Index of a vertex in the canonical order.
    pub fn position(&self, vertex: &str) -> Option<usize> {
        self.position.get(vertex).copied()
    }

    pub fn has_vertex(&self, vertex: &str) -> bool {
        self.position.contains_key(vertex)
    }

    pub fn has_edge(&self, edge: &str) -> bool {
        self.edges.iter().any(|e| e.name == edge)
    }

    pub fn is_regular(&self, vertex: &str) -> bool {
        self.position(vertex)
            .is_some_and(|i| i < self.regular_count)
    }

    pub fn regular(&self) -> &[String] {
        &self.vertices[..self.regular_count]
    }

    pub fn sinks(&self) -> &[String] {
        &self.vertices[self.regular_count..]
    }

    pub fn classify(&self) -> VertexClassification {
        VertexClassification {
            regular: self.regular().to_vec(),
            sinks: self.sinks().to_vec(),
        }
    }

    /// Incidence matrix in canonical order; `a[i][j]` counts edges `i -> j`.
    pub fn incidence(&self) -> IncidenceMatrix {
        let n = self.vertices.len();
        let mut entries = vec![vec![0u64; n]; n];
        for e in &self.edges {
            let i = self.position[&e.source];
            let j = self.position[&e.range];
            entries[i][j] += 1;
        }
        IncidenceMatrix {
            order: self.vertices.clone(),
            regular_count: self.regular_count,
            entries,
        }
    }
}

/// Square nonnegative integer matrix indexed by an ordered vertex list whose
/// nonzero rows (the regular vertices) come first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IncidenceMatrix {
    order: Vec<String>,
    regular_count: usize,
    entries: Vec<Vec<u64>>,
}

impl IncidenceMatrix {
    /// Builds a matrix directly from rows, checking shape and row ordering.
    pub fn from_rows(order: Vec<String>, entries: Vec<Vec<u64>>) -> Result<Self, GraphError> {
        let n = order.len();
        if n == 0 {
            return Err(GraphError::EmptyGraph);
        }
        if entries.len() != n || entries.iter().any(|row| row.len() != n) {
            return Err(GraphError::MalformedMatrix(format!(
                "expected a {n}x{n} matrix"
            )));
        }
        let mut seen = BTreeSet::new();
        for v in &order {
            if !seen.insert(v.as_str()) {
                return Err(GraphError::DuplicateName {
                    kind: NameKind::Vertex,
                    name: v.clone(),
                });
            }
        }
        let regular_count = entries
            .iter()
            .take_while(|row| row.iter().any(|&a| a > 0))
            .count();
        if entries[regular_count..]
            .iter()
            .any(|row| row.iter().any(|&a| a > 0))
        {
            return Err(GraphError::MalformedMatrix(
                "nonzero rows must precede zero rows".into(),
            ));
        }
        Ok(IncidenceMatrix {
            order,
            regular_count,
            entries,
        })
    }

    pub fn order(&self) -> &[String] {
        &self.order
    }

    pub fn size(&self) -> usize {
        self.order.len()
    }

    pub fn regular_count(&self) -> usize {
        self.regular_count
    }

    pub fn entry(&self, i: usize, j: usize) -> u64 {
        self.entries[i][j]
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.entries[i]
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.entries
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().flatten().sum()
    }
}

impl fmt::Display for IncidenceMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, row) in self.order.iter().zip(&self.entries) {
            let cells: Vec<String> = row.iter().map(u64::to_string).collect();
            writeln!(f, "{name}: [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}
