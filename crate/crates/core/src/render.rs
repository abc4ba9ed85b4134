//! Text renderings of a fibre: Graphviz DOT and a plain listing.

use std::fmt::Write;

use crate::fiber::FiberConfig;

fn line_style(d_deg: i64) -> &'static str {
    match d_deg {
        d if d > 0 => "solid",
        0 => "dashed",
        _ => "dotted",
    }
}

/// Undirected DOT graph. Each vertex is labelled `id (self_int, mult, d)`,
/// two components meeting with intersection number `k` are joined by `k`
/// edges, and the vertex outline encodes the degree: solid for curves the
/// adjoint map keeps, dashed for curves it contracts, dotted for base curves.
pub fn to_dot(config: &FiberConfig) -> String {
    let mut out = String::new();
    out.push_str("// vertex label: id (self-intersection, multiplicity, degree)\n");
    out.push_str("// outline: solid degree > 0, dashed degree = 0, dotted degree < 0\n");
    out.push_str("// edges: one per unit of intersection\n");
    out.push_str("graph fiber {\n");
    out.push_str("  node [shape=box];\n");
    if let Some(d) = config.d_self() {
        let _ = writeln!(out, "  label=\"D^2 = {d}\";");
    }
    for c in config.components() {
        let _ = writeln!(
            out,
            "  \"{}\" [label=\"{} ({}, {}, {})\", style={}];",
            c.id,
            c.id,
            c.self_int,
            c.mult,
            c.d_deg,
            line_style(c.d_deg)
        );
    }
    for (i, j, k) in config.edges() {
        for _ in 0..k {
            let _ = writeln!(
                out,
                "  \"{}\" -- \"{}\";",
                config.component(i).id,
                config.component(j).id
            );
        }
    }
    out.push_str("}\n");
    out
}

/// One line per component with its numbers and neighbours.
pub fn to_ascii(config: &FiberConfig) -> String {
    let width = config
        .components()
        .iter()
        .map(|c| c.id.as_str().len())
        .max()
        .unwrap_or(0);
    let mut out = String::new();
    let _ = writeln!(out, "{:<width$}  self  mult  deg  meets", "id");
    for (i, c) in config.components().iter().enumerate() {
        let meets: Vec<String> = config
            .neighbors(i)
            .map(|j| match config.meet(i, j) {
                1 => config.component(j).id.to_string(),
                k => format!("{}x{k}", config.component(j).id),
            })
            .collect();
        let _ = writeln!(
            out,
            "{:<width$}  {:>4}  {:>4}  {:>3}  {}",
            c.id.as_str(),
            c.self_int,
            c.mult,
            c.d_deg,
            meets.join(" ")
        );
    }
    if let Some(d) = config.d_self() {
        let _ = writeln!(out, "D^2 = {d}");
    }
    out
}
