//! Command-line front end.

pub mod fixtures;
pub mod format;
pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::certificate::{format_rational, solve_exact, verify_certificate, CertificateSystem, WeightCertificate};
use crate::constructions::{cohn_companion, family, relative_companion, ConstructionError};
use crate::decision::{audit, decide_ibn, AlgebraKind, AlgebraSpec, DecisionError, IbnStatus, ImnStatus};
use crate::graph::Graph;
use crate::monoid::{
    cohn_presentation, decide_equivalent, monoid_presentation, CommonDescendant, Equivalence,
    MonoidElement, MonoidError, Refutation, RewriteSystem, SearchBounds, DEFAULT_MAX_M,
};

use format::{emit_text, parse_graph, FormatError, GraphFile};
use report::{exit, graph_digest, render_trace, OutputFormat, Report};

#[derive(Debug, Parser)]
#[command(name = "cohn-ibn", version)]
#[command(about = "Decide and certify Invariant Basis Number for Cohn and Leavitt path algebras")]
pub struct Cli {
    /// Report format
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,

    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build F(E), or E(X) when --x is given
    Companion {
        #[command(flatten)]
        source: GraphSource,
        /// Vertices where (CK2) is imposed
        #[arg(long = "x", value_delimiter = ',')]
        x: Option<Vec<String>>,
    },
    /// Decide IBN and IMN for an algebra over the input graph
    IbnCheck {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long, value_enum, default_value_t = Algebra::Cohn)]
        algebra: Algebra,
        /// Vertices where (CK2) is imposed (relative algebras only)
        #[arg(long = "x", value_delimiter = ',')]
        x: Option<Vec<String>>,
        #[command(flatten)]
        search: SearchArgs,
        /// Largest multiple of rho tried by the witness search
        #[arg(long, default_value_t = DEFAULT_MAX_M)]
        max_m: u64,
    },
    /// Decide whether two elements are equal in a graph or Cohn monoid
    MonoidEquiv {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long, value_enum, default_value_t = Presentation::Graph)]
        presentation: Presentation,
        /// Coefficients in the reported generator order, comma separated
        #[arg(long, value_delimiter = ',', required = true)]
        a: Vec<u64>,
        #[arg(long, value_delimiter = ',', required = true)]
        b: Vec<u64>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// List the built-in graphs, or print one
    Examples { name: Option<String> },
    /// Print the family graph E_n with the vertex set X_m
    Family { n: usize, m: usize },
}

#[derive(Debug, Args)]
pub struct GraphSource {
    /// Graph file, text or JSON
    pub input: Option<PathBuf>,
    /// Use a built-in graph instead of a file
    #[arg(long, conflicts_with = "input")]
    pub example: Option<String>,
    /// Use the family graph E_N (with X_M) instead of a file
    #[arg(long, num_args = 2, value_names = ["N", "M"], conflicts_with_all = ["input", "example"])]
    pub family: Option<Vec<usize>>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 100_000)]
    pub max_states: usize,
    #[arg(long, default_value_t = 64)]
    pub max_coeff: u64,
    #[arg(long, default_value_t = 64)]
    pub max_depth: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algebra {
    Cohn,
    Relative,
    Leavitt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Presentation {
    Graph,
    Cohn,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Input(_) => exit::INPUT,
            CliError::Internal(_) => exit::INTERNAL,
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<ConstructionError> for CliError {
    fn from(e: ConstructionError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<MonoidError> for CliError {
    fn from(e: MonoidError) -> Self {
        match e {
            MonoidError::InvalidBounds(_) => CliError::Usage(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<DecisionError> for CliError {
    fn from(e: DecisionError) -> Self {
        match e {
            DecisionError::Construction(e) => e.into(),
            DecisionError::Monoid(e) => e.into(),
            DecisionError::InternalInvariantViolation(_) => CliError::Internal(e.to_string()),
        }
    }
}

impl SearchArgs {
    fn bounds(&self) -> Result<SearchBounds, CliError> {
        Ok(SearchBounds::new(self.max_states, self.max_coeff, self.max_depth)?)
    }
}

struct Loaded {
    graph: Graph,
    family_x: Option<Vec<String>>,
    label: String,
}

fn load(source: &GraphSource) -> Result<Loaded, CliError> {
    if let Some(nm) = &source.family {
        let (n, m) = (nm[0], nm[1]);
        let fam = family(n, m)?;
        return Ok(Loaded {
            graph: fam.graph,
            family_x: Some(fam.x),
            label: format!("family {n} {m}"),
        });
    }
    if let Some(name) = &source.example {
        let fx = fixtures::fixture(name)
            .ok_or_else(|| CliError::Input(format!("unknown example `{name}`")))?;
        return Ok(Loaded {
            graph: fx.graph,
            family_x: fx.x,
            label: format!("example {name}"),
        });
    }
    let Some(path) = &source.input else {
        return Err(CliError::Usage(
            "no graph given: pass a file, --example NAME or --family N M".into(),
        ));
    };
    let src = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let graph = parse_graph(&src).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(Loaded {
        graph,
        family_x: None,
        label: path.display().to_string(),
    })
}

fn graph_payload(graph: &Graph) -> Value {
    serde_json::to_value(GraphFile::from_graph(graph)).expect("graph files serialize")
}

fn bounds_args(report: &mut Report, bounds: &SearchBounds) {
    report
        .arg("max_states", bounds.max_states)
        .arg("max_coeff", bounds.max_total_coefficient)
        .arg("max_depth", bounds.max_depth);
}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Companion { source, x } => cmd_companion(source, x.as_deref()),
        Command::IbnCheck {
            source,
            algebra,
            x,
            search,
            max_m,
        } => cmd_ibn_check(source, *algebra, x.as_deref(), &search.bounds()?, *max_m),
        Command::MonoidEquiv {
            source,
            presentation,
            a,
            b,
            search,
        } => cmd_monoid_equiv(source, *presentation, a, b, &search.bounds()?),
        Command::Examples { name } => cmd_examples(name.as_deref()),
        Command::Family { n, m } => cmd_family(*n, *m),
    }
}

pub fn cmd_companion(source: &GraphSource, x: Option<&[String]>) -> Result<Report, CliError> {
    let loaded = load(source)?;
    let companion = match x {
        Some(x) => relative_companion(&loaded.graph, x)?,
        None => cohn_companion(&loaded.graph),
    };
    let graph = &companion.graph;
    let incidence = graph.incidence();

    let mut report = Report::new("companion");
    report.arg("input", &loaded.label).arg("x", x);
    report.input_digest = Some(graph_digest(&loaded.graph));
    report.line(format!(
        "companion: {} vertices, {} edges ({} new vertices)",
        graph.vertex_count(),
        graph.edges().len(),
        companion.vertex_origin.len()
    ));
    report.line("incidence:");
    for line in incidence.to_string().lines() {
        report.line(format!("  {line}"));
    }
    report.result = json!({
        "graph": graph_payload(graph),
        "incidence": { "order": incidence.order(), "rows": incidence.rows() },
        "vertex_origin": companion.vertex_origin,
        "edge_origin": companion.edge_origin,
    });
    report.graph_text = Some(emit_text(graph));
    Ok(report)
}

pub fn cmd_ibn_check(
    source: &GraphSource,
    algebra: Algebra,
    x: Option<&[String]>,
    bounds: &SearchBounds,
    max_m: u64,
) -> Result<Report, CliError> {
    if max_m < 2 {
        return Err(CliError::Usage("--max-m must be at least 2".into()));
    }
    let loaded = load(source)?;
    let x: Option<Vec<String>> = match (algebra, x) {
        (Algebra::Relative, Some(x)) => Some(x.to_vec()),
        (Algebra::Relative, None) => Some(loaded.family_x.clone().ok_or_else(|| {
            CliError::Usage("--algebra relative needs --x (or --family)".into())
        })?),
        (_, Some(_)) => {
            return Err(CliError::Usage("--x only applies to --algebra relative".into()))
        }
        (_, None) => None,
    };
    let kind = match algebra {
        Algebra::Cohn => AlgebraKind::Cohn(loaded.graph.clone()),
        Algebra::Relative => AlgebraKind::RelativeCohn(loaded.graph.clone(), x.clone().unwrap_or_default()),
        Algebra::Leavitt => AlgebraKind::Leavitt(loaded.graph.clone()),
    };
    let spec = AlgebraSpec::new(kind)?;
    let verdict = decide_ibn(&spec, bounds, max_m)?;
    let audited = audit(&verdict, &spec);
    let rs = spec.presentation();
    let generators = rs.generators();

    let mut report = Report::new("ibn-check");
    report
        .arg("input", &loaded.label)
        .arg("algebra", spec.kind.name())
        .arg("x", &x)
        .arg("max_m", max_m);
    bounds_args(&mut report, bounds);
    report.input_digest = Some(graph_digest(&loaded.graph));
    report.line(format!(
        "target graph: {} vertices, {} edges",
        spec.target.vertex_count(),
        spec.target.edges().len()
    ));
    report.line(format!("generators: {}", generators.join(" ")));

    let (status, code) = match &verdict.ibn {
        IbnStatus::Certified { certificate } => {
            report.line("ibn: certified");
            report.line(format!("weights: {certificate}"));
            ("certified", exit::SUCCESS)
        }
        IbnStatus::Refuted { witness } => {
            report.line("ibn: refuted");
            report.line(format!("witness: {}*rho ~ {}*rho", witness.m, witness.m_prime));
            report.line(format!("common descendant: {}", witness.evidence.descendant));
            report.line(format!("left trace: {}", render_trace(&witness.evidence.left, generators)));
            report.line(format!("right trace: {}", render_trace(&witness.evidence.right, generators)));
            ("refuted", exit::REFUTED)
        }
        IbnStatus::Unknown { .. } => {
            report.line("ibn: unknown");
            ("unknown", exit::UNKNOWN)
        }
    };
    report.line(format!(
        "imn: {}",
        match verdict.imn {
            ImnStatus::Holds => "holds",
            ImnStatus::Unknown => "unknown",
        }
    ));
    report.line(format!("audit: {}", if audited { "passed" } else { "FAILED" }));
    for e in &verdict.evidence {
        report.line(format!("evidence: {e}"));
    }
    report.status = status.into();
    report.exit_code = code;
    report.result = json!({
        "target_graph": graph_payload(&spec.target),
        "generators": generators,
        "ibn": verdict.ibn,
        "imn": verdict.imn,
        "evidence": verdict.evidence,
        "audit": audited,
    });
    if !audited {
        return Err(CliError::Internal("verdict evidence failed its own audit".into()));
    }
    Ok(report)
}

/// A verified invariant for the chosen presentation, normalised at the sum
/// of the vertex generators, when one exists.
fn presentation_invariant(rs: &RewriteSystem, vertex_count: usize) -> Option<WeightCertificate> {
    let mut unit = vec![0; rs.generator_count()];
    unit[..vertex_count].fill(1);
    let cert = solve_exact(&CertificateSystem::for_presentation(rs, &MonoidElement::new(unit)))?;
    verify_certificate(&cert, rs).then_some(cert)
}

pub fn cmd_monoid_equiv(
    source: &GraphSource,
    presentation: Presentation,
    a: &[u64],
    b: &[u64],
    bounds: &SearchBounds,
) -> Result<Report, CliError> {
    let loaded = load(source)?;
    let rs = match presentation {
        Presentation::Graph => monoid_presentation(&loaded.graph.incidence()),
        Presentation::Cohn => cohn_presentation(&loaded.graph).system,
    };
    let generators = rs.generators();
    let a = MonoidElement::new(a.to_vec());
    let b = MonoidElement::new(b.to_vec());
    let invariant = presentation_invariant(&rs, loaded.graph.vertex_count());
    let verdict = decide_equivalent(&a, &b, &rs, bounds, invariant.as_ref())?;

    let mut report = Report::new("monoid-equiv");
    report
        .arg("input", &loaded.label)
        .arg(
            "presentation",
            match presentation {
                Presentation::Graph => "graph",
                Presentation::Cohn => "cohn",
            },
        )
        .arg("a", a.coeffs())
        .arg("b", b.coeffs());
    bounds_args(&mut report, bounds);
    report.input_digest = Some(graph_digest(&loaded.graph));
    report.line(format!("generators: {}", generators.join(" ")));
    report.line(match &invariant {
        Some(cert) => format!("invariant: {cert}"),
        None => "invariant: none".into(),
    });

    let mut result = json!({
        "generators": generators,
        "invariant": invariant.as_ref().map(WeightCertificate::weight_strings),
    });
    let (status, code) = match &verdict {
        Equivalence::Equivalent(CommonDescendant {
            descendant,
            left,
            right,
        }) => {
            report.line("verdict: equivalent");
            report.line(format!("common descendant: {descendant}"));
            report.line(format!("left trace: {}", render_trace(left, generators)));
            report.line(format!("right trace: {}", render_trace(right, generators)));
            result["descendant"] = json!(descendant);
            result["left"] = json!(left);
            result["right"] = json!(right);
            ("equivalent", exit::SUCCESS)
        }
        Equivalence::NotEquivalent(Refutation::Separated { left, right }) => {
            report.line("verdict: not equivalent");
            report.line(format!(
                "gamma(a) = {}, gamma(b) = {}",
                format_rational(left),
                format_rational(right)
            ));
            result["gamma"] = json!([format_rational(left), format_rational(right)]);
            ("not_equivalent", exit::REFUTED)
        }
        Equivalence::NotEquivalent(Refutation::DisjointClosures {
            left_states,
            right_states,
        }) => {
            report.line("verdict: not equivalent");
            report.line(format!(
                "forward closures are complete and disjoint ({left_states} and {right_states} states)"
            ));
            result["closure_sizes"] = json!([left_states, right_states]);
            ("not_equivalent", exit::REFUTED)
        }
        Equivalence::Unknown(_) => {
            report.line("verdict: unknown (search bounds reached)");
            ("unknown", exit::UNKNOWN)
        }
    };
    result["verdict"] = json!(status);
    report.status = status.into();
    report.exit_code = code;
    report.result = result;
    Ok(report)
}

pub fn cmd_examples(name: Option<&str>) -> Result<Report, CliError> {
    let mut report = Report::new("examples");
    let Some(name) = name else {
        report.arg("name", Value::Null);
        for (n, d) in fixtures::FIXTURES {
            report.line(format!("{n:<14} {d}"));
        }
        report.result = json!(fixtures::FIXTURES
            .iter()
            .map(|(n, d)| json!({ "name": n, "description": d }))
            .collect::<Vec<_>>());
        return Ok(report);
    };
    let fx = fixtures::fixture(name)
        .ok_or_else(|| CliError::Input(format!("unknown example `{name}`")))?;
    report.arg("name", name);
    emit_graph(&mut report, &fx.graph, fx.x.as_deref());
    Ok(report)
}

pub fn cmd_family(n: usize, m: usize) -> Result<Report, CliError> {
    let fam = family(n, m)?;
    let mut report = Report::new("family");
    report.arg("n", n).arg("m", m);
    emit_graph(&mut report, &fam.graph, Some(&fam.x));
    Ok(report)
}

fn emit_graph(report: &mut Report, graph: &Graph, x: Option<&[String]>) {
    if let Some(x) = x {
        report.line(format!("x: {}", x.join(",")));
    }
    report.input_digest = Some(graph_digest(graph));
    report.result = json!({ "graph": graph_payload(graph), "x": x });
    report.graph_text = Some(emit_text(graph));
}
