//! IBN and IMN verdicts for Cohn, relative Cohn and Leavitt path algebras.
//!
//! Every algebra is reduced to a Leavitt path algebra of a target graph
//! (`F(E)`, `E(X)` or the graph itself). IBN then holds iff `m·ρ` and
//! `m'·ρ` are never equal in the target's graph monoid for `m != m'`. The
//! certificate route proves that; the witness route disproves it; anything
//! else is reported as unknown with the bounds that were used.

use serde::Serialize;
use thiserror::Error;

use crate::certificate::{build_system, gamma, solve_exact, verify_certificate, WeightCertificate};
use crate::constructions::{cohn_companion, relative_companion, ConstructionError};
use crate::graph::Graph;
use crate::monoid::{
    find_scalar_witness, monoid_presentation, MonoidElement, MonoidError, RewriteSystem,
    ScalarWitness, SearchBounds,
};

#[derive(Debug, Error)]
pub enum DecisionError {
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraKind {
    Cohn(Graph),
    RelativeCohn(Graph, Vec<String>),
    Leavitt(Graph),
}

impl AlgebraKind {
    pub fn name(&self) -> &'static str {
        match self {
            AlgebraKind::Cohn(_) => "cohn",
            AlgebraKind::RelativeCohn(..) => "relative",
            AlgebraKind::Leavitt(_) => "leavitt",
        }
    }

    pub fn source_graph(&self) -> &Graph {
        match self {
            AlgebraKind::Cohn(g) | AlgebraKind::RelativeCohn(g, _) | AlgebraKind::Leavitt(g) => g,
        }
    }
}

/// An algebra together with the graph whose Leavitt path algebra it is.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraSpec {
    pub kind: AlgebraKind,
    pub target: Graph,
}

impl AlgebraSpec {
    pub fn new(kind: AlgebraKind) -> Result<Self, DecisionError> {
        let target = resolve_target(&kind)?;
        Ok(AlgebraSpec { kind, target })
    }

    pub fn cohn(graph: Graph) -> Self {
        let target = cohn_companion(&graph).graph;
        AlgebraSpec {
            kind: AlgebraKind::Cohn(graph),
            target,
        }
    }

    pub fn relative_cohn(graph: Graph, x: Vec<String>) -> Result<Self, DecisionError> {
        Self::new(AlgebraKind::RelativeCohn(graph, x))
    }

    pub fn leavitt(graph: Graph) -> Self {
        AlgebraSpec {
            target: graph.clone(),
            kind: AlgebraKind::Leavitt(graph),
        }
    }

    /// Graph monoid presentation of the target graph.
    pub fn presentation(&self) -> RewriteSystem {
        monoid_presentation(&self.target.incidence())
    }
}

pub fn resolve_target(kind: &AlgebraKind) -> Result<Graph, ConstructionError> {
    Ok(match kind {
        AlgebraKind::Cohn(g) => cohn_companion(g).graph,
        AlgebraKind::RelativeCohn(g, x) => relative_companion(g, x)?.graph,
        AlgebraKind::Leavitt(g) => g.clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum IbnStatus {
    Certified { certificate: WeightCertificate },
    Refuted { witness: ScalarWitness },
    Unknown { bounds: SearchBounds, max_m: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ImnStatus {
    Holds,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub ibn: IbnStatus,
    pub imn: ImnStatus,
    pub evidence: Vec<String>,
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        matches!(self.ibn, IbnStatus::Certified { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self.ibn, IbnStatus::Refuted { .. })
    }

    pub fn certificate(&self) -> Option<&WeightCertificate> {
        match &self.ibn {
            IbnStatus::Certified { certificate } => Some(certificate),
            _ => None,
        }
    }

    pub fn witness(&self) -> Option<&ScalarWitness> {
        match &self.ibn {
            IbnStatus::Refuted { witness } => Some(witness),
            _ => None,
        }
    }
}

/// Tries to certify `ρ`-separation with exact weights on the target's graph
/// monoid. `None` means the weight system is inconsistent, which by itself
/// proves nothing.
pub fn try_certificate(spec: &AlgebraSpec) -> Option<WeightCertificate> {
    let matrix = spec.target.incidence();
    let cert = solve_exact(&build_system(&matrix))?;
    verify_certificate(&cert, &monoid_presentation(&matrix)).then_some(cert)
}

pub fn decide_ibn(
    spec: &AlgebraSpec,
    bounds: &SearchBounds,
    max_m: u64,
) -> Result<Verdict, DecisionError> {
    let rs = spec.presentation();
    let mut evidence = vec![format!(
        "target graph: {} vertices ({} regular), {} edges",
        spec.target.vertex_count(),
        spec.target.regular_count(),
        spec.target.edges().len()
    )];

    if let Some(certificate) = try_certificate(spec) {
        evidence.push(format!(
            "weight system ({} equations, {} unknowns) solved exactly; certificate verified",
            rs.rules().len() + 1,
            rs.generator_count()
        ));
        evidence.push("gamma(m*rho) = m for every m, so m*rho and m'*rho are distinct".into());
        return Ok(decide_imn(Verdict {
            ibn: IbnStatus::Certified { certificate },
            imn: ImnStatus::Unknown,
            evidence,
        }));
    }
    evidence.push("weight system is inconsistent; no certificate".into());

    if let AlgebraKind::Cohn(_) = spec.kind {
        return Err(DecisionError::InternalInvariantViolation(
            "the companion weight system of a Cohn algebra must be solvable".into(),
        ));
    }

    let verdict = match find_scalar_witness(&rs.rho(), &rs, max_m, bounds)? {
        Some(witness) => {
            evidence.push(format!(
                "{}*rho ~ {}*rho via common descendant {}",
                witness.m, witness.m_prime, witness.evidence.descendant
            ));
            IbnStatus::Refuted { witness }
        }
        None => {
            evidence.push(format!(
                "no m < m' <= {max_m} with m*rho ~ m'*rho found within bounds"
            ));
            IbnStatus::Unknown {
                bounds: *bounds,
                max_m,
            }
        }
    };
    Ok(decide_imn(Verdict {
        ibn: verdict,
        imn: ImnStatus::Unknown,
        evidence,
    }))
}

/// IMN holds whenever IBN is certified; nothing is concluded otherwise.
pub fn decide_imn(mut verdict: Verdict) -> Verdict {
    verdict.imn = match verdict.ibn {
        IbnStatus::Certified { .. } => ImnStatus::Holds,
        _ => ImnStatus::Unknown,
    };
    verdict
}

/// Re-checks all evidence carried by `verdict` against `spec` from scratch.
pub fn audit(verdict: &Verdict, spec: &AlgebraSpec) -> bool {
    let Ok(target) = resolve_target(&spec.kind) else {
        return false;
    };
    if target != spec.target {
        return false;
    }
    let rs = monoid_presentation(&target.incidence());
    let rho = MonoidElement::ones(rs.generator_count());
    let imn_consistent = match verdict.ibn {
        IbnStatus::Certified { .. } => verdict.imn == ImnStatus::Holds,
        _ => verdict.imn == ImnStatus::Unknown,
    };
    let evidence_ok = match &verdict.ibn {
        IbnStatus::Certified { certificate } => {
            certificate.unit == rho
                && verify_certificate(certificate, &rs)
                && gamma(certificate, &rho).is_ok_and(|g| g == num_traits::One::one())
        }
        IbnStatus::Refuted { witness } => witness.verify(&rho, &rs),
        IbnStatus::Unknown { .. } => true,
    };
    imn_consistent && evidence_ok
}
