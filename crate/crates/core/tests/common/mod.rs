//! Shared generators and independent oracles for the integration tests.
#![allow(dead_code)]

use num_rational::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use cohn_ibn::graph::{Edge, Graph};
use cohn_ibn::monoid::{MonoidElement, RewriteSystem};

pub const SEED: u64 = 0x1b2c_3d4e;

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// A random graph with at most `max_vertices` vertices, `max_edges` edges and
/// at most `max_mult` parallel edges between any ordered pair.
pub fn random_graph(rng: &mut ChaCha8Rng, max_vertices: usize, max_edges: usize, max_mult: usize) -> Graph {
    let n = rng.random_range(1..=max_vertices);
    let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let target = rng.random_range(0..=max_edges);
    let mut mult = vec![vec![0usize; n]; n];
    let mut edges = Vec::new();
    let mut attempts = 0;
    while edges.len() < target && attempts < 10 * max_edges {
        attempts += 1;
        let (s, r) = (rng.random_range(0..n), rng.random_range(0..n));
        if mult[s][r] == max_mult {
            continue;
        }
        mult[s][r] += 1;
        edges.push(Edge::new(format!("e{}", edges.len()), vertices[s].clone(), vertices[r].clone()));
    }
    Graph::validate(vertices, edges).expect("generated graphs are valid")
}

/// Block form of the companion incidence matrix, written out directly:
/// rows `(a_i1..a_in, a_i1..a_it)` for regular `i`, zero rows below.
pub fn oracle_companion_rows(rows: &[Vec<u64>], t: usize) -> Vec<Vec<u64>> {
    let n = rows.len();
    let mut out = vec![vec![0; n + t]; n + t];
    for i in 0..t {
        for j in 0..n {
            out[i][j] = rows[i][j];
        }
        for j in 0..t {
            out[i][n + j] = rows[i][j];
        }
    }
    out
}

pub fn oracle_gamma(weights: &[BigRational], elem: &MonoidElement) -> BigRational {
    elem.coeffs()
        .iter()
        .zip(weights)
        .fold(q(0), |acc, (&c, w)| acc + w * BigRational::from_integer(c.into()))
}

/// Rewrites any rewritable generator with a positive coefficient until none
/// is left. Only terminates on acyclic presentations.
pub fn oracle_normal_form(elem: &MonoidElement, rs: &RewriteSystem) -> MonoidElement {
    let mut cur = elem.coeffs().to_vec();
    loop {
        let Some(rule) = rs.rules().iter().find(|r| cur[r.generator] > 0) else {
            return MonoidElement::new(cur);
        };
        cur[rule.generator] -= 1;
        for (c, &x) in cur.iter_mut().zip(rule.replacement.coeffs()) {
            *c += x;
        }
    }
}

/// Random forward walk of at most `steps` rule applications, returning the
/// end point and how often each generator's rule fired.
pub fn random_walk(
    rng: &mut ChaCha8Rng,
    start: &MonoidElement,
    rs: &RewriteSystem,
    steps: usize,
) -> (MonoidElement, Vec<u64>) {
    let mut cur = start.clone();
    let mut counts = vec![0; rs.generator_count()];
    for _ in 0..steps {
        let succ = cohn_ibn::monoid::one_step(&cur, rs);
        if succ.is_empty() {
            break;
        }
        let pick = &succ[rng.random_range(0..succ.len())];
        counts[pick.rule] += 1;
        cur = pick.element.clone();
    }
    (cur, counts)
}
