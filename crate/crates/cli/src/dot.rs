use std::collections::BTreeMap;
use std::fmt::Write;

use netident::{Graph, VertexSet};

/// Graphviz rendering of `g` with 1-based node ids; members of `highlight`
/// are drawn filled.
pub fn to_dot(g: &Graph, highlight: &VertexSet, labels: &BTreeMap<usize, String>) -> String {
    let mut s = String::from("digraph derived {\n");
    for v in 0..g.vertex_count() {
        let mut attrs = Vec::new();
        if let Some(label) = labels.get(&v) {
            attrs.push(format!("label=\"{}\"", escape(label)));
        }
        if highlight.contains(v) {
            attrs.push("style=filled".to_string());
        }
        if attrs.is_empty() {
            writeln!(s, "  {};", v + 1).unwrap();
        } else {
            writeln!(s, "  {} [{}];", v + 1, attrs.join(", ")).unwrap();
        }
    }
    for (a, b) in g.edges() {
        writeln!(s, "  {} -> {};", a + 1, b + 1).unwrap();
    }
    s.push_str("}\n");
    s
}

fn escape(label: &str) -> String {
    label.replace('\\', "\\\\").replace('"', "\\\"")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fills_highlighted_nodes() {
        let g = Graph::from_one_based(3, &[(1, 2), (3, 2)]).unwrap();
        let labels = BTreeMap::from([(2, "say \"hi\"".to_string())]);
        let dot = to_dot(&g, &VertexSet::one_based(&[2]).unwrap(), &labels);
        assert_eq!(
            dot,
            "digraph derived {\n  1;\n  2 [style=filled];\n  3 [label=\"say \\\"hi\\\"\"];\n  1 -> 2;\n  3 -> 2;\n}\n"
        );
    }
}
