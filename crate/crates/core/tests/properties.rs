mod common;

use proptest::prelude::*;

use cohn_ibn::certificate::{build_system, companion_rank_report, exact_rank, gamma, solve_exact, verify_certificate};
use cohn_ibn::cli::format::{emit_json, emit_text, parse_graph};
use cohn_ibn::constructions::{cohn_companion, companion_incidence, relative_companion};
use cohn_ibn::graph::{Edge, Graph};
use cohn_ibn::monoid::{monoid_presentation, normal_form, one_step, MonoidElement};

use common::{oracle_companion_rows, oracle_gamma, oracle_normal_form};

/// Graphs on up to 6 vertices with up to 12 edges, given as (source, range)
/// index pairs.
fn graphs() -> impl Strategy<Value = Graph> {
    (1usize..=6).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..=12).prop_map(move |pairs| {
            let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
            let edges = pairs
                .iter()
                .enumerate()
                .map(|(k, &(s, r))| Edge::new(format!("e{k}"), vertices[s].clone(), vertices[r].clone()))
                .collect();
            Graph::validate(vertices.clone(), edges).unwrap()
        })
    })
}

fn acyclic_graphs() -> impl Strategy<Value = Graph> {
    graphs().prop_map(|g| {
        let index = |v: &str| v[1..].parse::<usize>().unwrap();
        let edges = g
            .edges()
            .iter()
            .filter(|e| index(&e.source) < index(&e.range))
            .cloned()
            .collect();
        Graph::validate(g.vertices().to_vec(), edges).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn incidence_total_counts_edges(g in graphs()) {
        prop_assert_eq!(g.incidence().total(), g.edges().len() as u64);
    }

    #[test]
    fn vertices_are_regular_first(g in graphs()) {
        let c = g.classify();
        prop_assert_eq!(c.regular.len(), g.regular_count());
        let mut joined = c.regular.clone();
        joined.extend(c.sinks.clone());
        prop_assert_eq!(joined.as_slice(), g.vertices());
        let again = Graph::validate(g.vertices().to_vec(), g.edges().to_vec()).unwrap();
        prop_assert_eq!(again, g);
    }

    #[test]
    fn companion_matches_block_formula(g in graphs()) {
        let m = g.incidence();
        let f = cohn_companion(&g);
        prop_assert_eq!(f.graph.incidence(), companion_incidence(&m));
        let fi = f.graph.incidence();
        let oracle = oracle_companion_rows(m.rows(), m.regular_count());
        prop_assert_eq!(fi.rows(), oracle.as_slice());
        prop_assert_eq!(f.graph.vertex_count(), g.vertex_count() + g.regular_count());
    }

    #[test]
    fn empty_x_is_the_cohn_companion(g in graphs()) {
        let none: [&str; 0] = [];
        prop_assert_eq!(relative_companion(&g, &none).unwrap(), cohn_companion(&g));
        let all = relative_companion(&g, g.regular()).unwrap();
        prop_assert_eq!(all.graph, g);
    }

    #[test]
    fn companion_rank_is_regular_count_plus_one(g in graphs()) {
        let report = companion_rank_report(&g.incidence());
        prop_assert!(report.passed(), "{:?}", report);
        let sys = build_system(&cohn_companion(&g).graph.incidence());
        prop_assert_eq!(exact_rank(&sys.matrix), g.regular_count() + 1);
    }

    #[test]
    fn companion_certificates_are_invariant(g in graphs(), coeffs in prop::collection::vec(0u64..4, 12)) {
        let f = cohn_companion(&g).graph;
        let rs = monoid_presentation(&f.incidence());
        let cert = solve_exact(&build_system(&f.incidence())).expect("companion systems are solvable");
        prop_assert!(verify_certificate(&cert, &rs));
        let e = MonoidElement::new(coeffs[..rs.generator_count().min(12)].iter().copied()
            .chain(std::iter::repeat(0)).take(rs.generator_count()).collect());
        let ge = gamma(&cert, &e).unwrap();
        prop_assert_eq!(&ge, &oracle_gamma(&cert.weights, &e));
        for s in one_step(&e, &rs) {
            prop_assert_eq!(&ge, &oracle_gamma(&cert.weights, &s.element));
        }
    }

    #[test]
    fn normal_forms_match_naive_rewriting(g in acyclic_graphs(), k in 1u64..4) {
        let rs = monoid_presentation(&g.incidence());
        let x = rs.rho().checked_scale(k).unwrap();
        let nf = normal_form(&x, &rs).unwrap();
        prop_assert_eq!(&nf, &oracle_normal_form(&x, &rs));
        prop_assert_eq!(normal_form(&nf, &rs).unwrap(), nf.clone());
        prop_assert!(one_step(&nf, &rs).is_empty());
    }

    #[test]
    fn graph_files_round_trip(g in graphs()) {
        prop_assert_eq!(parse_graph(&emit_text(&g)).unwrap(), g.clone());
        prop_assert_eq!(parse_graph(&emit_json(&g)).unwrap(), g);
    }
}
