use std::fmt::Write as _;

use netlie_core::netspec::NetworkSpec;

const PALETTE: [&str; 8] = [
    "#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#ffff33", "#a65628", "#f781bf",
];

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz digraph of the network: one node per cell filled by color, one
/// edge per argument from the read cell to the equation's cell, labeled by
/// its 1-based argument position. Selfinteractions become self-loops.
pub fn render_dot(spec: &NetworkSpec) -> String {
    let mut out = String::from("digraph network {\n  node [shape=circle, style=filled];\n");
    for i in 0..spec.n() {
        let color = PALETTE[(spec.color(i) - 1) % PALETTE.len()];
        let _ = writeln!(
            out,
            "  {} [fillcolor={}, class=\"f{}\"];",
            quote(spec.name(i)),
            quote(color),
            spec.color(i)
        );
    }
    for i in 0..spec.n() {
        for (pos, &a) in spec.args(i).iter().enumerate() {
            let _ = writeln!(
                out,
                "  {} -> {} [label=\"{}\"];",
                quote(spec.name(a)),
                quote(spec.name(i)),
                pos + 1
            );
        }
    }
    out.push_str("}\n");
    out
}
