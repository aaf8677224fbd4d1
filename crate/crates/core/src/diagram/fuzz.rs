//! Random diagrams for property tests of the rewrite system.
//!
//! Besides uniformly random nodes, the generator plants the shapes the rules
//! look for (χ surrounded by DFTs, δ on the flat ports of γ's) so that every
//! rule fires regularly.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Diagram, NodeId, NodeKind, Port, Terminal};
use crate::einsum::EvalOptions;
use crate::mediators::{Direction, Signature};
use crate::random::complex_tensor;

#[derive(Copy, Clone, Debug)]
pub struct FuzzOptions {
    pub max_nodes: usize,
    pub max_extent: usize,
    /// Upper bound on dense-evaluation cost; costlier draws are rejected.
    pub max_cost: u64,
}

impl Default for FuzzOptions {
    fn default() -> Self {
        FuzzOptions {
            max_nodes: 6,
            max_extent: 4,
            max_cost: 2_000_000,
        }
    }
}

/// γ input lists whose flat extent stays within `max_extent`.
fn gamma_choices(max_extent: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    for a in 1..=max_extent {
        out.push(vec![a]);
        for b in 1..=max_extent / a {
            out.push(vec![a, b]);
            for c in 1..=max_extent / (a * b) {
                out.push(vec![a, b, c]);
            }
        }
    }
    out
}

struct Draft {
    nodes: Vec<NodeKind>,
    wires: Vec<(Port, Port)>,
}

impl Draft {
    fn add(&mut self, kind: NodeKind) -> NodeId {
        self.nodes.push(kind);
        self.nodes.len() - 1
    }
}

pub fn random_diagram(rng: &mut impl Rng, opts: &FuzzOptions) -> Diagram {
    loop {
        let d = draw(rng, opts);
        let ok = d
            .evaluate_dense_with(EvalOptions {
                budget: Some(opts.max_cost),
            })
            .is_ok();
        if ok {
            return d;
        }
    }
}

fn draw(rng: &mut impl Rng, opts: &FuzzOptions) -> Diagram {
    let max_e = opts.max_extent.max(1);
    let base = if max_e >= 2 { rng.gen_range(2..=max_e) } else { 1 };
    let gammas = gamma_choices(max_e);
    let target = rng.gen_range(1..=opts.max_nodes.max(1));
    let mut draft = Draft {
        nodes: vec![],
        wires: vec![],
    };

    if target >= 4 && rng.gen_bool(0.3) {
        let sig = *Signature::ALL.choose(rng).unwrap();
        let flip = rng.gen_bool(0.5);
        let chi = draft.add(NodeKind::Chi { sig, dim: base });
        for (k, s) in sig.signs().into_iter().enumerate() {
            let mut direction = Direction::for_sign(s);
            if flip {
                direction = direction.flip();
            }
            if rng.gen_bool(0.15) {
                direction = direction.flip();
            }
            let f = draft.add(NodeKind::Fourier { dim: base, direction });
            draft.wires.push((Port::new(chi, k), Port::new(f, rng.gen_range(0..2))));
        }
    }
    let room = target.saturating_sub(draft.nodes.len());
    if room >= 2 && rng.gen_bool(0.4) {
        let dims = gammas.choose(rng).unwrap().clone();
        let m: usize = dims.iter().product();
        let n = rng.gen_range(1..=(room - 1).min(3));
        let extra = rng.gen_range(0..=1);
        let delta = draft.add(NodeKind::Delta { rank: n + extra, dim: m });
        for k in 0..n {
            let g = draft.add(NodeKind::Gamma { dims: dims.clone() });
            draft.wires.push((Port::new(delta, k), Port::new(g, dims.len())));
        }
    }
    while draft.nodes.len() < target {
        let pick_extent = |rng: &mut _| -> usize {
            if Rng::gen_bool(rng, 0.6) {
                base
            } else {
                Rng::gen_range(rng, 1..=max_e)
            }
        };
        let kind = match rng.gen_range(0..10) {
            0..=2 => {
                let rank = rng.gen_range(1..=3);
                let shape: Vec<usize> = (0..rank).map(|_| pick_extent(rng)).collect();
                let name = format!("T{}", draft.nodes.len());
                NodeKind::dense(name, complex_tensor(rng, &shape))
            }
            3..=5 => NodeKind::Delta {
                rank: rng.gen_range(1..=4),
                dim: pick_extent(rng),
            },
            6 | 7 => NodeKind::Gamma {
                dims: gammas.choose(rng).unwrap().clone(),
            },
            8 => NodeKind::Chi {
                sig: *Signature::ALL.choose(rng).unwrap(),
                dim: pick_extent(rng),
            },
            _ => NodeKind::Fourier {
                dim: pick_extent(rng),
                direction: if rng.gen_bool(0.5) {
                    Direction::Forward
                } else {
                    Direction::Inverse
                },
            },
        };
        draft.add(kind);
    }

    let mut open: Vec<Port> = draft
        .nodes
        .iter()
        .enumerate()
        .flat_map(|(id, k)| (0..k.arity()).map(move |s| Port::new(id, s)))
        .filter(|p| !draft.wires.iter().any(|(a, b)| a == p || b == p))
        .collect();
    open.shuffle(rng);
    let extent = |p: Port| draft.nodes[p.node].extent(p.slot);
    let mut free = vec![];
    while let Some(p) = open.pop() {
        let partners: Vec<usize> = (0..open.len()).filter(|&k| extent(open[k]) == extent(p)).collect();
        if !partners.is_empty() && rng.gen_bool(0.75) {
            let q = open.swap_remove(*partners.choose(rng).unwrap());
            draft.wires.push((p, q));
        } else {
            free.push(Terminal::Port(p));
        }
    }
    free.shuffle(rng);
    Diagram::new(draft.nodes.into_iter().enumerate().collect(), draft.wires, free)
        .expect("generated diagrams are well formed")
}
