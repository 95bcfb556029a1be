//! Graphviz output for the domain and its translates by short words.

use std::fmt::Write;

use crate::cone::{self, RationalCone};
use crate::group::GroupGenerators;
use crate::lattice::Problem;
use crate::sterk::SterkDomain;

/// Nodes are `w·D` for reduced words of length at most 2 (elements fixing
/// `H` excluded, coinciding translates listed once); edges join
/// translates sharing a facet.
pub fn chamber_graph(problem: &Problem, gens: &GroupGenerators, d: &SterkDomain) -> String {
    let lattice = problem.lattice();
    let mut nodes: Vec<(String, RationalCone)> = vec![("e".into(), d.cone.clone())];
    for (word, g) in gens.elements_up_to(problem.rank(), 2) {
        if &g.apply(problem.ample()) == problem.ample() {
            continue;
        }
        let label = word
            .iter()
            .map(|i| format!("g{i}"))
            .collect::<Vec<_>>()
            .join(" ");
        let image = d.cone.transform(lattice, &g);
        if !nodes.iter().any(|(_, c)| c.same_as(lattice, &image)) {
            nodes.push((label, image));
        }
    }
    let facet_dim = problem.rank().saturating_sub(1);
    let mut out = String::from("graph chambers {\n");
    for (i, (label, c)) in nodes.iter().enumerate() {
        let rays = c
            .rays()
            .iter()
            .map(|r| r.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        let _ = writeln!(out, "  n{i} [label=\"{label}\\n{rays}\"];");
    }
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            let meet = cone::intersection(lattice, &nodes[i].1, &nodes[j].1);
            if meet.dimension() == facet_dim {
                let _ = writeln!(out, "  n{i} -- n{j};");
            }
        }
    }
    out.push_str("}\n");
    out
}
