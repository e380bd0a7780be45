//! Bounded breadth-first search over forward rewrites.
//!
//! States are deduplicated by exact vector equality. Iteration order is fixed
//! (frontier in discovery order, rules in generator order), so closures,
//! verdicts and traces are reproducible.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use super::{one_step, MonoidElement, MonoidError, ReductionTrace, RewriteSystem, TraceStep};
use crate::certificate::{gamma, verify_certificate, Rational, WeightCertificate};

pub const DEFAULT_MAX_STATES: usize = 100_000;
pub const DEFAULT_MAX_TOTAL_COEFFICIENT: u64 = 64;
pub const DEFAULT_MAX_DEPTH: usize = 64;
pub const DEFAULT_MAX_M: u64 = 6;

/// Limits on a single search. States whose coefficient sum exceeds
/// `max_total_coefficient` are pruned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchBounds {
    pub max_states: usize,
    pub max_total_coefficient: u64,
    pub max_depth: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            max_states: DEFAULT_MAX_STATES,
            max_total_coefficient: DEFAULT_MAX_TOTAL_COEFFICIENT,
            max_depth: DEFAULT_MAX_DEPTH,
        }
    }
}

impl SearchBounds {
    pub fn new(
        max_states: usize,
        max_total_coefficient: u64,
        max_depth: usize,
    ) -> Result<Self, MonoidError> {
        if max_states == 0 || max_total_coefficient == 0 || max_depth == 0 {
            return Err(MonoidError::InvalidBounds("all bounds must be positive".into()));
        }
        Ok(SearchBounds {
            max_states,
            max_total_coefficient,
            max_depth,
        })
    }
}

struct Node {
    element: MonoidElement,
    parent: Option<(usize, usize)>,
    depth: usize,
}

struct Explorer {
    nodes: Vec<Node>,
    index: HashMap<MonoidElement, usize>,
    frontier: Vec<usize>,
    depth: usize,
    truncated: bool,
}

impl Explorer {
    fn new(start: MonoidElement) -> Self {
        let mut index = HashMap::new();
        index.insert(start.clone(), 0);
        Explorer {
            nodes: vec![Node {
                element: start,
                parent: None,
                depth: 0,
            }],
            index,
            frontier: vec![0],
            depth: 0,
            truncated: false,
        }
    }

    fn is_done(&self) -> bool {
        self.frontier.is_empty()
    }

    /// Expands one BFS level and returns the ids of newly discovered states.
    /// `budget` is the number of states that may still be created.
    fn expand(&mut self, rs: &RewriteSystem, bounds: &SearchBounds, budget: &mut usize) -> Vec<usize> {
        let frontier = std::mem::take(&mut self.frontier);
        if self.depth >= bounds.max_depth {
            let unexplored = frontier.iter().any(|&id| {
                one_step(&self.nodes[id].element, rs)
                    .iter()
                    .any(|s| !self.index.contains_key(&s.element))
            });
            self.truncated |= unexplored;
            return Vec::new();
        }
        let mut fresh = Vec::new();
        'outer: for id in frontier {
            for succ in one_step(&self.nodes[id].element, rs) {
                if self.index.contains_key(&succ.element) {
                    continue;
                }
                if succ.element.total() > bounds.max_total_coefficient {
                    self.truncated = true;
                    continue;
                }
                if *budget == 0 {
                    self.truncated = true;
                    break 'outer;
                }
                *budget -= 1;
                let new_id = self.nodes.len();
                self.index.insert(succ.element.clone(), new_id);
                self.nodes.push(Node {
                    element: succ.element,
                    parent: Some((id, succ.rule)),
                    depth: self.depth + 1,
                });
                fresh.push(new_id);
            }
        }
        self.depth += 1;
        self.frontier = fresh.clone();
        fresh
    }

    fn trace_to(&self, id: usize) -> ReductionTrace {
        let mut steps = Vec::new();
        let mut cur = id;
        while let Some((parent, rule)) = self.nodes[cur].parent {
            steps.push(TraceStep {
                rule,
                result: self.nodes[cur].element.clone(),
            });
            cur = parent;
        }
        steps.reverse();
        ReductionTrace {
            start: self.nodes[0].element.clone(),
            steps,
        }
    }

    fn states(&self) -> BTreeSet<MonoidElement> {
        self.nodes.iter().map(|n| n.element.clone()).collect()
    }
}

/// Everything reachable from a start element within the bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Closure {
    pub states: BTreeSet<MonoidElement>,
    pub truncated: bool,
}

pub fn forward_closure(
    elem: &MonoidElement,
    rs: &RewriteSystem,
    bounds: &SearchBounds,
) -> Result<Closure, MonoidError> {
    rs.check(elem)?;
    let mut explorer = Explorer::new(elem.clone());
    let mut budget = bounds.max_states.saturating_sub(1);
    while !explorer.is_done() {
        explorer.expand(rs, bounds, &mut budget);
    }
    Ok(Closure {
        states: explorer.states(),
        truncated: explorer.truncated,
    })
}

/// Two traces meeting at a common descendant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommonDescendant {
    pub descendant: MonoidElement,
    pub left: ReductionTrace,
    pub right: ReductionTrace,
}

impl CommonDescendant {
    /// Both traces replay and end at the descendant.
    pub fn verify(&self, rs: &RewriteSystem) -> bool {
        self.left.replays(rs)
            && self.right.replays(rs)
            && self.left.end() == &self.descendant
            && self.right.end() == &self.descendant
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Refutation {
    /// A verified weight invariant takes different values on the two sides.
    Separated { left: Rational, right: Rational },
    /// Both forward closures are complete and share no element.
    DisjointClosures { left_states: usize, right_states: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equivalence {
    Equivalent(CommonDescendant),
    NotEquivalent(Refutation),
    Unknown(SearchBounds),
}

impl Equivalence {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Equivalence::Equivalent(_))
    }

    pub fn is_not_equivalent(&self) -> bool {
        matches!(self, Equivalence::NotEquivalent(_))
    }
}

/// Decides `a ~ b` by searching for a common forward descendant from both
/// sides, alternating one BFS level at a time. With a verified invariant that
/// separates `a` and `b`, returns `NotEquivalent` without searching.
pub fn decide_equivalent(
    a: &MonoidElement,
    b: &MonoidElement,
    rs: &RewriteSystem,
    bounds: &SearchBounds,
    invariant: Option<&WeightCertificate>,
) -> Result<Equivalence, MonoidError> {
    rs.check(a)?;
    rs.check(b)?;
    if a.is_zero() || b.is_zero() {
        return Err(MonoidError::ZeroElement);
    }
    if a == b {
        return Ok(Equivalence::Equivalent(CommonDescendant {
            descendant: a.clone(),
            left: ReductionTrace::empty(a.clone()),
            right: ReductionTrace::empty(b.clone()),
        }));
    }
    if let Some(cert) = invariant {
        if !verify_certificate(cert, rs) {
            return Err(MonoidError::InvalidInvariant);
        }
        let ga = gamma(cert, a).map_err(|_| MonoidError::InvalidInvariant)?;
        let gb = gamma(cert, b).map_err(|_| MonoidError::InvalidInvariant)?;
        if ga != gb {
            return Ok(Equivalence::NotEquivalent(Refutation::Separated {
                left: ga,
                right: gb,
            }));
        }
    }

    let mut left = Explorer::new(a.clone());
    let mut right = Explorer::new(b.clone());
    let mut budget = bounds.max_states.saturating_sub(2);

    loop {
        let mut progressed = false;
        for left_side in [true, false] {
            let (this, other) = if left_side {
                (&mut left, &right)
            } else {
                (&mut right, &left)
            };
            if this.is_done() {
                continue;
            }
            progressed = true;
            let fresh = this.expand(rs, bounds, &mut budget);
            let meeting = fresh
                .iter()
                .filter_map(|&id| {
                    other
                        .index
                        .get(&this.nodes[id].element)
                        .map(|&oid| (this.nodes[id].depth + other.nodes[oid].depth, id, oid))
                })
                .min_by(|x, y| {
                    x.0.cmp(&y.0)
                        .then_with(|| this.nodes[x.1].element.cmp(&this.nodes[y.1].element))
                });
            if let Some((_, id, oid)) = meeting {
                let (this_trace, other_trace) = (this.trace_to(id), other.trace_to(oid));
                let (left_trace, right_trace) = if left_side {
                    (this_trace, other_trace)
                } else {
                    (other_trace, this_trace)
                };
                return Ok(Equivalence::Equivalent(CommonDescendant {
                    descendant: left_trace.end().clone(),
                    left: left_trace,
                    right: right_trace,
                }));
            }
            if budget == 0 && this.truncated {
                return Ok(Equivalence::Unknown(*bounds));
            }
        }
        if !progressed {
            break;
        }
    }

    if left.truncated || right.truncated {
        Ok(Equivalence::Unknown(*bounds))
    } else {
        Ok(Equivalence::NotEquivalent(Refutation::DisjointClosures {
            left_states: left.nodes.len(),
            right_states: right.nodes.len(),
        }))
    }
}

/// `m·x ~ m'·x` with `m < m'`, plus the meeting traces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScalarWitness {
    pub m: u64,
    pub m_prime: u64,
    #[serde(flatten)]
    pub evidence: CommonDescendant,
}

impl ScalarWitness {
    /// Checks the traces against `x` and the presentation.
    pub fn verify(&self, x: &MonoidElement, rs: &RewriteSystem) -> bool {
        self.m < self.m_prime
            && x.checked_scale(self.m).as_ref() == Some(&self.evidence.left.start)
            && x.checked_scale(self.m_prime).as_ref() == Some(&self.evidence.right.start)
            && self.evidence.verify(rs)
    }
}

/// Searches pairs `m < m' <= max_m` in lexicographic order for `m·x ~ m'·x`.
pub fn find_scalar_witness(
    x: &MonoidElement,
    rs: &RewriteSystem,
    max_m: u64,
    bounds: &SearchBounds,
) -> Result<Option<ScalarWitness>, MonoidError> {
    rs.check(x)?;
    if x.is_zero() {
        return Err(MonoidError::ZeroElement);
    }
    if max_m < 2 {
        return Err(MonoidError::InvalidBounds("max_m must be at least 2".into()));
    }
    for m in 1..max_m {
        let left = x.checked_scale(m).ok_or(MonoidError::Overflow)?;
        for m_prime in m + 1..=max_m {
            let right = x.checked_scale(m_prime).ok_or(MonoidError::Overflow)?;
            if let Equivalence::Equivalent(evidence) =
                decide_equivalent(&left, &right, rs, bounds, None)?
            {
                return Ok(Some(ScalarWitness {
                    m,
                    m_prime,
                    evidence,
                }));
            }
        }
    }
    Ok(None)
}
