//! Built-in example graphs.

use crate::constructions::{cohn_companion, family, relative_companion, FamilyInstance};
use crate::graph::{Edge, Graph};

/// Fixture names with a one-line description. `family-N-M` is parametric.
pub const FIXTURES: &[(&str, &str)] = &[
    ("line", "u -> v -> w"),
    ("r2", "one vertex with two loops"),
    ("f-r2", "Cohn companion of r2"),
    ("f-line", "Cohn companion of line"),
    ("relative-2-1", "E(X) for the two-vertex family member, X = {v2}"),
    ("family-N-M", "family graph E_N (X_M printed alongside), 1 <= M <= N"),
];

pub fn line() -> Graph {
    Graph::validate(
        ["u", "v", "w"],
        vec![Edge::new("e", "u", "v"), Edge::new("f", "v", "w")],
    )
    .expect("fixture is valid")
}

pub fn r2() -> Graph {
    Graph::validate(["v"], vec![Edge::new("e", "v", "v"), Edge::new("f", "v", "v")])
        .expect("fixture is valid")
}

/// A resolved fixture: the graph, plus `X_m` for family members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixture {
    pub graph: Graph,
    pub x: Option<Vec<String>>,
}

fn parse_family(name: &str) -> Option<(usize, usize)> {
    let rest = name.strip_prefix("family-")?;
    let (n, m) = rest.split_once('-')?;
    Some((n.parse().ok()?, m.parse().ok()?))
}

pub fn fixture(name: &str) -> Option<Fixture> {
    let plain = |graph| Some(Fixture { graph, x: None });
    match name {
        "line" => plain(line()),
        "r2" => plain(r2()),
        "f-r2" => plain(cohn_companion(&r2()).graph),
        "f-line" => plain(cohn_companion(&line()).graph),
        "relative-2-1" => {
            let fam = family(2, 1).ok()?;
            plain(relative_companion(&fam.graph, &fam.x).ok()?.graph)
        }
        _ => {
            let (n, m) = parse_family(name)?;
            let FamilyInstance { graph, x } = family(n, m).ok()?;
            Some(Fixture { graph, x: Some(x) })
        }
    }
}

/// Every concrete fixture, with `family-N-M` instantiated for small sizes.
pub fn corpus() -> Vec<(String, Fixture)> {
    let mut names: Vec<String> = FIXTURES
        .iter()
        .map(|(n, _)| n.to_string())
        .filter(|n| n != "family-N-M")
        .collect();
    for n in 1..=4 {
        for m in 1..=n {
            names.push(format!("family-{n}-{m}"));
        }
    }
    names
        .into_iter()
        .map(|n| {
            let f = fixture(&n).expect("corpus names resolve");
            (n, f)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_resolve() {
        assert_eq!(fixture("f-r2").unwrap().graph.vertices(), ["v", "v'"]);
        assert_eq!(fixture("relative-2-1").unwrap().graph.vertex_count(), 3);
        let fam = fixture("family-3-2").unwrap();
        assert_eq!(fam.x.unwrap(), ["v2", "v3"]);
        assert!(fixture("family-2-3").is_none());
        assert!(fixture("family-x").is_none());
        assert!(fixture("nosuch").is_none());
        assert_eq!(corpus().len(), 5 + 10);
    }
}
