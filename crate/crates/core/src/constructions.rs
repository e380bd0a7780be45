//! Companion graphs `F(E)` and `E(X)`, and the `E_n` / `X_m` family.
//!
//! For a regular vertex `v` outside `X`, the companion gets a new sink `v'`
//! and every edge `e` entering `v` gets a twin `e': s(e) -> v'`. New names
//! are the original name with a `'` appended (repeated until unused), and the
//! origin maps record which original each new symbol mirrors.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::graph::{Edge, Graph, GraphError, IncidenceMatrix};

pub const PRIME: char = '\'';

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("`{0}` is not a regular vertex of the graph")]
    NotRegular(String),
    #[error("family parameters out of range: need 1 <= m <= n, got n = {n}, m = {m}")]
    OutOfRange { n: usize, m: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A companion graph together with the provenance of its new symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompanionGraph {
    pub graph: Graph,
    /// new vertex name -> mirrored vertex name
    pub vertex_origin: BTreeMap<String, String>,
    /// new edge name -> mirrored edge name
    pub edge_origin: BTreeMap<String, String>,
}

impl CompanionGraph {
    pub fn new_vertices(&self) -> impl Iterator<Item = &String> {
        self.vertex_origin.keys()
    }
}

/// Appends primes to `name` until it no longer collides with `taken`.
pub(crate) fn fresh_name(name: &str, taken: &BTreeSet<String>) -> String {
    let mut candidate = format!("{name}{PRIME}");
    while taken.contains(&candidate) {
        candidate.push(PRIME);
    }
    candidate
}

/// Assigns fresh primed names to `originals`, in order.
fn prime_all<'a>(
    originals: impl IntoIterator<Item = &'a String>,
    existing: impl IntoIterator<Item = &'a String>,
) -> Vec<(String, String)> {
    let mut taken: BTreeSet<String> = existing.into_iter().cloned().collect();
    originals
        .into_iter()
        .map(|orig| {
            let fresh = fresh_name(orig, &taken);
            taken.insert(fresh.clone());
            (fresh, orig.clone())
        })
        .collect()
}

/// `F(E)`: the graph whose Leavitt path algebra is the Cohn path algebra of `E`.
pub fn cohn_companion(graph: &Graph) -> CompanionGraph {
    build_companion(graph, &BTreeSet::new())
        .expect("companion of a validated graph is a valid graph")
}

/// `E(X)`: the graph whose Leavitt path algebra is the relative Cohn algebra
/// with (CK2) imposed exactly at the vertices of `x`.
pub fn relative_companion<S: AsRef<str>>(
    graph: &Graph,
    x: &[S],
) -> Result<CompanionGraph, ConstructionError> {
    let mut imposed = BTreeSet::new();
    for v in x {
        let v = v.as_ref();
        if !graph.is_regular(v) {
            return Err(ConstructionError::NotRegular(v.to_string()));
        }
        imposed.insert(v.to_string());
    }
    build_companion(graph, &imposed)
}

fn build_companion(
    graph: &Graph,
    imposed: &BTreeSet<String>,
) -> Result<CompanionGraph, ConstructionError> {
    let mirrored: Vec<&String> = graph
        .regular()
        .iter()
        .filter(|v| !imposed.contains(*v))
        .collect();
    let new_vertices = prime_all(mirrored.iter().copied(), graph.vertices());
    let primed_of: BTreeMap<&str, &str> = new_vertices
        .iter()
        .map(|(fresh, orig)| (orig.as_str(), fresh.as_str()))
        .collect();

    let incoming: Vec<&Edge> = graph
        .edges()
        .iter()
        .filter(|e| primed_of.contains_key(e.range.as_str()))
        .collect();
    let new_edge_names = prime_all(
        incoming.iter().map(|e| &e.name),
        graph.edges().iter().map(|e| &e.name),
    );

    let mut edges = graph.edges().to_vec();
    for (e, (fresh, _)) in incoming.iter().zip(&new_edge_names) {
        edges.push(Edge::new(
            fresh.clone(),
            e.source.clone(),
            primed_of[e.range.as_str()],
        ));
    }
    let vertices = graph
        .vertices()
        .iter()
        .cloned()
        .chain(new_vertices.iter().map(|(fresh, _)| fresh.clone()));

    Ok(CompanionGraph {
        graph: Graph::validate(vertices, edges)?,
        vertex_origin: new_vertices.into_iter().collect(),
        edge_origin: new_edge_names.into_iter().collect(),
    })
}

/// The companion incidence matrix, built from the block formula alone:
/// regular row `i` becomes `(a_{i,1..n}, a_{i,1..t})`, every other row is zero.
pub fn companion_incidence(matrix: &IncidenceMatrix) -> IncidenceMatrix {
    let n = matrix.size();
    let t = matrix.regular_count();
    let new_names = prime_all(&matrix.order()[..t], matrix.order());
    let order: Vec<String> = matrix
        .order()
        .iter()
        .cloned()
        .chain(new_names.into_iter().map(|(fresh, _)| fresh))
        .collect();

    let mut rows = vec![vec![0u64; n + t]; n + t];
    for (i, row) in rows.iter_mut().enumerate().take(t) {
        let original = matrix.row(i);
        row[..n].copy_from_slice(original);
        row[n..].copy_from_slice(&original[..t]);
    }
    IncidenceMatrix::from_rows(order, rows).expect("block formula preserves row ordering")
}

/// A member of the `E_n` family with its vertex subset `X_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyInstance {
    pub graph: Graph,
    pub x: Vec<String>,
}

/// `E_n`: vertices `v1..vn`, one loop at each `vi` (i < n), two loops at `vn`
/// and an edge `vn -> vi` for every i < n. `X_m` is the last `m` vertices.
pub fn family(n: usize, m: usize) -> Result<FamilyInstance, ConstructionError> {
    if n == 0 || m == 0 || m > n {
        return Err(ConstructionError::OutOfRange { n, m });
    }
    let name = |i: usize| format!("v{i}");
    let mut edges = Vec::with_capacity(2 * n + 1);
    for i in 1..n {
        edges.push(Edge::new(format!("e{i}"), name(i), name(i)));
    }
    edges.push(Edge::new(format!("e{n}"), name(n), name(n)));
    edges.push(Edge::new(format!("f{n}"), name(n), name(n)));
    for i in 1..n {
        edges.push(Edge::new(format!("g{i}"), name(n), name(i)));
    }
    let graph = Graph::validate((1..=n).map(name), edges)?;
    let x = (n - m + 1..=n).map(name).collect();
    Ok(FamilyInstance { graph, x })
}
