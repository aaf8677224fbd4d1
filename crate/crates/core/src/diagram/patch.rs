//! Replacing a set of nodes by new nodes.
//!
//! Every port of a removed node states what it becomes on the inside: a port
//! of a new node, a straight connection to another removed port, or nothing
//! (the port sat on a wire internal to the removed set and the replacement
//! absorbs it). The outer side of each port is whatever it was wired to.
//! Chains through straight connections are followed to their two ends and
//! rewired; chains that close on themselves become a factor of their extent.

use std::collections::{BTreeMap, BTreeSet};

use super::{Diagram, NodeId, NodeKind, Port, Terminal};
use crate::diagram::rewrite::RewriteError;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub(crate) enum Inner {
    /// Port `slot` of new node `index` (position in `Patch::add`).
    Bind(usize, usize),
    Join(Port),
    Absorbed,
}

#[derive(Debug, Default)]
pub(crate) struct Patch {
    pub remove: Vec<NodeId>,
    pub add: Vec<NodeKind>,
    pub inner: BTreeMap<Port, Inner>,
    /// Wires between ports of new nodes.
    pub internal: Vec<((usize, usize), (usize, usize))>,
    pub scale: f64,
}

impl Patch {
    pub fn new(remove: Vec<NodeId>) -> Patch {
        Patch {
            remove,
            scale: 1.0,
            ..Patch::default()
        }
    }

    pub fn node(&mut self, kind: NodeKind) -> usize {
        self.add.push(kind);
        self.add.len() - 1
    }

    pub fn bind(&mut self, p: Port, index: usize, slot: usize) {
        self.inner.insert(p, Inner::Bind(index, slot));
    }

    pub fn join(&mut self, a: Port, b: Port) {
        self.inner.insert(a, Inner::Join(b));
        self.inner.insert(b, Inner::Join(a));
    }

    pub fn absorb(&mut self, p: Port) {
        self.inner.insert(p, Inner::Absorbed);
    }
}

#[derive(Copy, Clone, Debug)]
enum End {
    Port(Port),
    Free(usize),
}

enum Outer {
    End(End),
    Removed(Port),
}

impl Diagram {
    pub(crate) fn apply(&self, patch: Patch) -> Result<Diagram, RewriteError> {
        let removed: BTreeSet<NodeId> = patch.remove.iter().copied().collect();
        let base = self.next_id();
        let new_port = |index: usize, slot: usize| Port::new(base + index, slot);
        let free_slot: BTreeMap<Port, usize> = self
            .free()
            .iter()
            .enumerate()
            .filter_map(|(f, t)| match t {
                Terminal::Port(p) => Some((*p, f)),
                Terminal::Through { .. } => None,
            })
            .collect();
        let outer = |p: Port| -> Outer {
            match self.peer(p) {
                Some(q) if removed.contains(&q.node) => Outer::Removed(q),
                Some(q) => Outer::End(End::Port(q)),
                None => Outer::End(End::Free(free_slot[&p])),
            }
        };
        let inner = |p: Port| patch.inner.get(&p).copied().unwrap_or(Inner::Absorbed);

        let removed_ports: Vec<Port> = patch
            .remove
            .iter()
            .flat_map(|&id| {
                let arity = self.node(id).expect("patch removes a live node").arity();
                (0..arity).map(move |s| Port::new(id, s))
            })
            .collect();

        let mut visited: BTreeSet<Port> = BTreeSet::new();
        // Walks from `p`; `go_inner` tells which side of `p` to leave by.
        let walk = |mut p: Port, mut go_inner: bool, visited: &mut BTreeSet<Port>| -> End {
            loop {
                visited.insert(p);
                if go_inner {
                    match inner(p) {
                        Inner::Bind(i, s) => return End::Port(new_port(i, s)),
                        Inner::Join(q) => {
                            visited.insert(q);
                            p = q;
                            go_inner = false;
                        }
                        Inner::Absorbed => panic!("chain runs into absorbed port {p}"),
                    }
                } else {
                    match outer(p) {
                        Outer::End(e) => return e,
                        Outer::Removed(q) => {
                            p = q;
                            go_inner = true;
                        }
                    }
                }
            }
        };

        let mut chains: Vec<(End, End)> = vec![];
        let mut scale = self.scale() * patch.scale;
        for &p in &removed_ports {
            if visited.contains(&p) {
                continue;
            }
            if let Outer::End(e) = outer(p) {
                if inner(p) == Inner::Absorbed {
                    panic!("port {p} is absorbed but wired outside the match");
                }
                let other = walk(p, true, &mut visited);
                chains.push((e, other));
            }
        }
        for &p in &removed_ports {
            if visited.contains(&p) {
                continue;
            }
            if let Inner::Bind(i, s) = inner(p) {
                let other = walk(p, false, &mut visited);
                chains.push((End::Port(new_port(i, s)), other));
            }
        }
        for &p in &removed_ports {
            if visited.contains(&p) {
                continue;
            }
            match inner(p) {
                Inner::Absorbed => {
                    visited.insert(p);
                }
                Inner::Join(_) => {
                    // closed loop through straight connections
                    let extent = self.port_extent(p).unwrap();
                    let start = p;
                    let mut q = p;
                    loop {
                        visited.insert(q);
                        let Inner::Join(r) = inner(q) else {
                            panic!("loop through {start} leaves the match")
                        };
                        visited.insert(r);
                        match outer(r) {
                            Outer::Removed(next) => q = next,
                            Outer::End(_) => panic!("loop through {start} leaves the match"),
                        }
                        if q == start {
                            break;
                        }
                    }
                    scale *= extent as f64;
                }
                Inner::Bind(..) => unreachable!(),
            }
        }

        let mut nodes = self.nodes.clone();
        for id in &patch.remove {
            nodes.remove(id);
        }
        for (i, kind) in patch.add.iter().enumerate() {
            nodes.insert(base + i, kind.clone());
        }
        let mut links: BTreeMap<Port, Port> = self
            .links()
            .iter()
            .filter(|(a, b)| !removed.contains(&a.node) && !removed.contains(&b.node))
            .map(|(&a, &b)| (a, b))
            .collect();
        let mut free = self.free().to_vec();

        let extent_of = |e: End, nodes: &BTreeMap<NodeId, NodeKind>| match e {
            End::Port(p) => nodes[&p.node].extent(p.slot),
            End::Free(f) => self.terminal_extent(self.free()[f]),
        };
        let mut connect = |a: End, b: End, links: &mut BTreeMap<Port, Port>| -> Result<(), RewriteError> {
            let (ea, eb) = (extent_of(a, &nodes), extent_of(b, &nodes));
            if ea != eb {
                return Err(RewriteError::ExtentInconsistency(format!(
                    "rewired ends have extents {ea} and {eb}"
                )));
            }
            match (a, b) {
                (End::Port(x), End::Port(y)) => {
                    links.insert(x, y);
                    links.insert(y, x);
                }
                (End::Port(x), End::Free(f)) | (End::Free(f), End::Port(x)) => free[f] = Terminal::Port(x),
                (End::Free(f), End::Free(g)) => {
                    free[f] = Terminal::Through { peer: g, extent: ea };
                    free[g] = Terminal::Through { peer: f, extent: ea };
                }
            }
            Ok(())
        };
        for (a, b) in chains {
            connect(a, b, &mut links)?;
        }
        for &((i, s), (j, t)) in &patch.internal {
            connect(End::Port(new_port(i, s)), End::Port(new_port(j, t)), &mut links)?;
        }
        Ok(Diagram::from_parts(nodes, links, free, scale, base + patch.add.len()))
    }
}
