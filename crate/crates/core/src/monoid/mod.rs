//! Graph monoids and Cohn monoids as commutative rewriting systems.
//!
//! Elements are coefficient vectors over an ordered generator list. Each
//! rewritable generator `i` carries one rule `e_i -> r_i`; firing it at an
//! element with a positive `i`-coefficient subtracts one from that coefficient
//! and adds `r_i`. Two nonzero elements are equal in the quotient monoid iff
//! they forward-rewrite to a common element, which is what [`search`] looks for.

mod search;

pub use search::{
    decide_equivalent, find_scalar_witness, forward_closure, Closure, CommonDescendant,
    Equivalence, Refutation, ScalarWitness, SearchBounds, DEFAULT_MAX_M,
};

use std::collections::{BTreeSet, BinaryHeap};
use std::cmp::Reverse;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructions::fresh_name;
use crate::graph::{Graph, IncidenceMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonoidError {
    #[error("element has {found} coefficients, presentation has {expected} generators")]
    LengthMismatch { expected: usize, found: usize },
    #[error("equivalence search is only defined for nonzero elements")]
    ZeroElement,
    #[error("rewriting does not terminate: generator `{0}` lies on a dependency cycle")]
    NonTerminating(String),
    #[error("coefficient overflow while rewriting")]
    Overflow,
    #[error("invalid rewrite system: {0}")]
    InvalidRule(String),
    #[error("invalid search bounds: {0}")]
    InvalidBounds(String),
    #[error("supplied invariant does not verify against this presentation")]
    InvalidInvariant,
}

/// A nonnegative coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MonoidElement(Vec<u64>);

impl MonoidElement {
    pub fn new(coeffs: Vec<u64>) -> Self {
        MonoidElement(coeffs)
    }

    pub fn zero(len: usize) -> Self {
        MonoidElement(vec![0; len])
    }

    /// All-ones vector of the given length.
    pub fn ones(len: usize) -> Self {
        MonoidElement(vec![1; len])
    }

    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = vec![0; len];
        v[index] = 1;
        MonoidElement(v)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Sum of all coefficients.
    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn get(&self, index: usize) -> u64 {
        self.0[index]
    }

    pub fn checked_scale(&self, m: u64) -> Option<Self> {
        self.0
            .iter()
            .map(|&c| c.checked_mul(m))
            .collect::<Option<Vec<_>>>()
            .map(MonoidElement)
    }

    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        debug_assert_eq!(self.len(), other.len());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b))
            .collect::<Option<Vec<_>>>()
            .map(MonoidElement)
    }
}

impl From<Vec<u64>> for MonoidElement {
    fn from(v: Vec<u64>) -> Self {
        MonoidElement(v)
    }
}

impl fmt::Display for MonoidElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// One rewrite rule `e_generator -> replacement`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rule {
    pub generator: usize,
    pub replacement: MonoidElement,
}

/// Generators plus at most one rule per generator, sorted by generator index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RewriteSystem {
    generators: Vec<String>,
    rules: Vec<Rule>,
    #[serde(skip)]
    rule_of: Vec<Option<usize>>,
}

impl RewriteSystem {
    pub fn new(generators: Vec<String>, mut rules: Vec<Rule>) -> Result<Self, MonoidError> {
        let n = generators.len();
        rules.sort_by_key(|r| r.generator);
        let mut rule_of = vec![None; n];
        for (k, rule) in rules.iter().enumerate() {
            if rule.generator >= n {
                return Err(MonoidError::InvalidRule(format!(
                    "rule index {} out of range",
                    rule.generator
                )));
            }
            if rule_of[rule.generator].replace(k).is_some() {
                return Err(MonoidError::InvalidRule(format!(
                    "two rules for generator `{}`",
                    generators[rule.generator]
                )));
            }
            if rule.replacement.len() != n {
                return Err(MonoidError::LengthMismatch {
                    expected: n,
                    found: rule.replacement.len(),
                });
            }
            if rule.replacement.is_zero() {
                return Err(MonoidError::InvalidRule(format!(
                    "rule for `{}` has a zero replacement",
                    generators[rule.generator]
                )));
            }
        }
        Ok(RewriteSystem {
            generators,
            rules,
            rule_of,
        })
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule_for(&self, generator: usize) -> Option<&Rule> {
        self.rule_of
            .get(generator)
            .copied()
            .flatten()
            .map(|k| &self.rules[k])
    }

    pub fn is_rewritable(&self, generator: usize) -> bool {
        self.rule_for(generator).is_some()
    }

    pub fn check(&self, elem: &MonoidElement) -> Result<(), MonoidError> {
        if elem.len() != self.generators.len() {
            return Err(MonoidError::LengthMismatch {
                expected: self.generators.len(),
                found: elem.len(),
            });
        }
        Ok(())
    }

    /// Fires the rule at `generator` once, if it exists and applies.
    pub fn apply(&self, elem: &MonoidElement, generator: usize) -> Option<MonoidElement> {
        let rule = self.rule_for(generator)?;
        if elem.0[generator] == 0 {
            return None;
        }
        let mut next = elem.0.clone();
        next[generator] -= 1;
        for (c, r) in next.iter_mut().zip(rule.replacement.coeffs()) {
            *c = c.checked_add(*r)?;
        }
        Some(MonoidElement(next))
    }

    /// One of every generator.
    pub fn rho(&self) -> MonoidElement {
        MonoidElement::ones(self.generators.len())
    }
}

/// `M_G`: generators are the vertices, one rule `v_i -> row i` per regular vertex.
pub fn monoid_presentation(matrix: &IncidenceMatrix) -> RewriteSystem {
    let rules = (0..matrix.regular_count())
        .map(|i| Rule {
            generator: i,
            replacement: MonoidElement(matrix.row(i).to_vec()),
        })
        .collect();
    RewriteSystem::new(matrix.order().to_vec(), rules)
        .expect("regular rows of an incidence matrix are nonzero")
}

/// A Cohn monoid presentation: vertices followed by one marker `q_v` per
/// regular vertex, with `v -> q_v + sum of ranges of edges leaving v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohnPresentation {
    pub system: RewriteSystem,
    pub vertex_count: usize,
}

impl CohnPresentation {
    /// `ρ_V`: one of every vertex generator, no markers.
    pub fn vertex_rho(&self) -> MonoidElement {
        let mut v = vec![0; self.system.generator_count()];
        v[..self.vertex_count].fill(1);
        MonoidElement(v)
    }

    /// Index of the marker generator for regular vertex `i`.
    pub fn marker(&self, regular_index: usize) -> usize {
        self.vertex_count + regular_index
    }
}

pub fn cohn_presentation(graph: &Graph) -> CohnPresentation {
    let n = graph.vertex_count();
    let t = graph.regular_count();
    let matrix = graph.incidence();

    let mut taken: BTreeSet<String> = graph.vertices().iter().cloned().collect();
    let mut generators = graph.vertices().to_vec();
    for v in graph.regular() {
        let base = format!("q_{v}");
        let name = if taken.contains(&base) {
            fresh_name(&base, &taken)
        } else {
            base
        };
        taken.insert(name.clone());
        generators.push(name);
    }

    let rules = (0..t)
        .map(|i| {
            let mut replacement = vec![0; n + t];
            replacement[..n].copy_from_slice(matrix.row(i));
            replacement[n + i] = 1;
            Rule {
                generator: i,
                replacement: MonoidElement(replacement),
            }
        })
        .collect();
    CohnPresentation {
        system: RewriteSystem::new(generators, rules).expect("Cohn rules always carry a marker"),
        vertex_count: n,
    }
}

/// A successor produced by firing one rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Successor {
    pub rule: usize,
    pub element: MonoidElement,
}

/// Every element reachable from `elem` by one forward rule application, in
/// generator order. Panics if `elem` does not match the presentation.
pub fn one_step(elem: &MonoidElement, rs: &RewriteSystem) -> Vec<Successor> {
    assert_eq!(elem.len(), rs.generator_count(), "element/presentation mismatch");
    rs.rules
        .iter()
        .filter_map(|rule| {
            rs.apply(elem, rule.generator).map(|element| Successor {
                rule: rule.generator,
                element,
            })
        })
        .collect()
}

/// One step of a reduction trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub rule: usize,
    pub result: MonoidElement,
}

/// A sequence of forward rewrites starting at `start`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionTrace {
    pub start: MonoidElement,
    pub steps: Vec<TraceStep>,
}

impl ReductionTrace {
    pub fn empty(start: MonoidElement) -> Self {
        ReductionTrace {
            start,
            steps: Vec::new(),
        }
    }

    pub fn end(&self) -> &MonoidElement {
        self.steps.last().map_or(&self.start, |s| &s.result)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// How many times each generator's rule was fired.
    pub fn rule_counts(&self, generator_count: usize) -> Vec<u64> {
        let mut counts = vec![0; generator_count];
        for step in &self.steps {
            counts[step.rule] += 1;
        }
        counts
    }

    /// True iff every step is a legal one-step rewrite of its predecessor.
    pub fn replays(&self, rs: &RewriteSystem) -> bool {
        if rs.check(&self.start).is_err() {
            return false;
        }
        let mut current = &self.start;
        for step in &self.steps {
            if step.rule >= rs.generator_count() {
                return false;
            }
            match rs.apply(current, step.rule) {
                Some(next) if next == step.result => current = &step.result,
                _ => return false,
            }
        }
        true
    }
}

/// Rewrites every rewritable coefficient to zero. Only defined when the
/// dependency relation among rewritable generators is acyclic.
pub fn normal_form(elem: &MonoidElement, rs: &RewriteSystem) -> Result<MonoidElement, MonoidError> {
    rs.check(elem)?;
    let order = topological_rules(rs)?;
    let mut coeffs = elem.0.clone();
    for i in order {
        let count = std::mem::take(&mut coeffs[i]);
        if count == 0 {
            continue;
        }
        let rule = rs.rule_for(i).expect("ordered generators are rewritable");
        for (c, r) in coeffs.iter_mut().zip(rule.replacement.coeffs()) {
            let add = r.checked_mul(count).ok_or(MonoidError::Overflow)?;
            *c = c.checked_add(add).ok_or(MonoidError::Overflow)?;
        }
    }
    Ok(MonoidElement(coeffs))
}

/// Rewritable generators ordered so that every generator comes before the
/// rewritable generators its replacement mentions.
fn topological_rules(rs: &RewriteSystem) -> Result<Vec<usize>, MonoidError> {
    let n = rs.generator_count();
    let mut indegree = vec![0usize; n];
    for rule in &rs.rules {
        for (j, &c) in rule.replacement.coeffs().iter().enumerate() {
            if c > 0 && rs.is_rewritable(j) {
                indegree[j] += 1;
            }
        }
    }
    let mut ready: BinaryHeap<Reverse<usize>> = rs
        .rules
        .iter()
        .map(|r| r.generator)
        .filter(|&i| indegree[i] == 0)
        .map(Reverse)
        .collect();
    let mut order = Vec::with_capacity(rs.rules.len());
    while let Some(Reverse(i)) = ready.pop() {
        order.push(i);
        let rule = rs.rule_for(i).expect("ready generators are rewritable");
        for (j, &c) in rule.replacement.coeffs().iter().enumerate() {
            if c > 0 && rs.is_rewritable(j) {
                indegree[j] -= 1;
                if indegree[j] == 0 {
                    ready.push(Reverse(j));
                }
            }
        }
    }
    if order.len() < rs.rules.len() {
        let stuck = rs
            .rules
            .iter()
            .map(|r| r.generator)
            .find(|&i| indegree[i] > 0)
            .expect("some generator remains on a cycle");
        return Err(MonoidError::NonTerminating(rs.generators[stuck].clone()));
    }
    Ok(order)
}
