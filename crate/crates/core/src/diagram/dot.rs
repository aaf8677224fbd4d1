//! GraphViz export. Output depends only on the diagram, so equal diagrams
//! give byte-identical text.

use std::fmt::Write;

use super::{Diagram, Terminal};

pub fn to_dot(d: &Diagram) -> String {
    let mut out = String::from("graph diagram {\n");
    if d.scale() != 1.0 {
        writeln!(out, "  label=\"scale {}\";", d.scale()).unwrap();
    }
    for (id, kind) in d.nodes() {
        writeln!(out, "  n{id} [label=\"{}\"];", kind.symbol().replace('"', "\\\"")).unwrap();
    }
    for (f, _) in d.free().iter().enumerate() {
        writeln!(out, "  t{f} [shape=plaintext, label=\"{f}\"];").unwrap();
    }
    for (a, b) in d.wires() {
        let e = d.port_extent(a).unwrap();
        writeln!(
            out,
            "  n{} -- n{} [taillabel=\"{}\", headlabel=\"{}\", label=\"{e}\"];",
            a.node, b.node, a.slot, b.slot
        )
        .unwrap();
    }
    for (f, t) in d.free().iter().enumerate() {
        match *t {
            Terminal::Port(p) => writeln!(
                out,
                "  t{f} -- n{} [headlabel=\"{}\", label=\"{}\"];",
                p.node,
                p.slot,
                d.terminal_extent(*t)
            )
            .unwrap(),
            Terminal::Through { peer, extent } if peer > f => {
                writeln!(out, "  t{f} -- t{peer} [label=\"{extent}\"];").unwrap()
            }
            Terminal::Through { .. } => {}
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{NodeKind, Port};
    use crate::tensor::Tensor;

    #[test]
    fn identity_wire_is_two_terminals_and_one_edge() {
        let d = Diagram::new(
            vec![],
            vec![],
            vec![
                Terminal::Through { peer: 1, extent: 2 },
                Terminal::Through { peer: 0, extent: 2 },
            ],
        )
        .unwrap();
        let text = to_dot(&d);
        assert_eq!(text.matches(" -- ").count(), 1);
        assert_eq!(text.matches("shape=plaintext").count(), 2);
    }

    #[test]
    fn dot_product_diagram() {
        let m = Tensor::identity(2).unwrap();
        let d = Diagram::new(
            vec![(0, NodeKind::dense("A", m.clone())), (1, NodeKind::dense("B", m))],
            vec![(Port::new(0, 1), Port::new(1, 0))],
            vec![Terminal::Port(Port::new(0, 0)), Terminal::Port(Port::new(1, 1))],
        )
        .unwrap();
        let text = to_dot(&d);
        assert!(text.contains("n0 [label=\"A\"]") && text.contains("n1 [label=\"B\"]"));
        assert_eq!(text.matches("n0 -- n1").count(), 1);
        assert_eq!(text.matches("shape=plaintext").count(), 2);
        assert_eq!(to_dot(&d.clone()), text);
    }
}
