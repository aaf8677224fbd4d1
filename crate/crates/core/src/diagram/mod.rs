//! Tensor diagrams: nodes joined by wires.
//!
//! A node is a dense tensor or one of the structured tensors (δ, γ, χ, DFT).
//! Every port of every node is either wired to exactly one other port or
//! listed among the free terminals, whose order is the axis order of the
//! diagram's value. A free terminal can also be one end of a bare wire that
//! runs straight to another free terminal (an identity matrix with no node).
//!
//! Diagrams are immutable. Rewrites in [`rewrite`] return new diagrams and
//! keep dense payloads shared.

mod builder;
pub mod dot;
pub mod fuzz;
pub mod json;
mod patch;
pub mod rewrite;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::einsum::{einsum_eval_with, EvalOptions, IndexSpec, Label};
use crate::error::{Error, Result};
use crate::mediators::{
    chi_dense, delta_dense, fourier_matrix, gamma_dense, DeltaSpec, Direction, FourierSpec, GammaSpec, Signature,
};
use crate::tensor::Tensor;

pub use builder::{DiagramBuilder, Wires};
pub use rewrite::{simplify, simplify_traced, RewriteError, Rule, SimplifyStep};

pub type NodeId = usize;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Port {
    pub node: NodeId,
    pub slot: usize,
}

impl Port {
    pub fn new(node: NodeId, slot: usize) -> Port {
        Port { node, slot }
    }
}

impl fmt::Display for Port {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.node, self.slot)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum NodeKind {
    Dense { name: String, tensor: Arc<Tensor> },
    /// Ports all share extent `dim`.
    Delta { rank: usize, dim: usize },
    /// Ports `0..n` are the inputs, port `n` the flattened index.
    Gamma { dims: Vec<usize> },
    Chi { sig: Signature, dim: usize },
    Fourier { dim: usize, direction: Direction },
}

impl NodeKind {
    pub fn dense(name: impl Into<String>, tensor: Tensor) -> NodeKind {
        NodeKind::Dense {
            name: name.into(),
            tensor: Arc::new(tensor),
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            NodeKind::Dense { tensor, .. } => tensor.rank(),
            NodeKind::Delta { rank, .. } => *rank,
            NodeKind::Gamma { dims } => dims.len() + 1,
            NodeKind::Chi { .. } => 3,
            NodeKind::Fourier { .. } => 2,
        }
    }

    pub fn extent(&self, slot: usize) -> usize {
        match self {
            NodeKind::Dense { tensor, .. } => tensor.shape()[slot],
            NodeKind::Delta { dim, .. } | NodeKind::Chi { dim, .. } | NodeKind::Fourier { dim, .. } => *dim,
            NodeKind::Gamma { dims } => dims.get(slot).copied().unwrap_or_else(|| dims.iter().product()),
        }
    }

    pub fn extents(&self) -> Vec<usize> {
        (0..self.arity()).map(|s| self.extent(s)).collect()
    }

    /// The node's value as a dense tensor.
    pub fn to_dense(&self) -> Result<Tensor> {
        match self {
            NodeKind::Dense { tensor, .. } => Ok(Tensor::clone(tensor)),
            NodeKind::Delta { rank, dim } => delta_dense(DeltaSpec::new(*rank, *dim)?),
            NodeKind::Gamma { dims } => gamma_dense(&GammaSpec::new(dims.clone())?),
            NodeKind::Chi { sig, dim } => chi_dense(*sig, *dim),
            NodeKind::Fourier { dim, direction } => fourier_matrix(FourierSpec {
                dim: *dim,
                direction: *direction,
            }),
        }
    }

    /// Short label: the dense name or δ, γ, χ, F, F⁻¹.
    pub fn symbol(&self) -> String {
        match self {
            NodeKind::Dense { name, .. } => name.clone(),
            NodeKind::Delta { .. } => "δ".into(),
            NodeKind::Gamma { .. } => "γ".into(),
            NodeKind::Chi { sig, .. } => format!("χ{sig}"),
            NodeKind::Fourier { direction, .. } => match direction {
                Direction::Forward => "F".into(),
                Direction::Inverse => "F⁻¹".into(),
            },
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            NodeKind::Dense { .. } => Ok(()),
            NodeKind::Delta { rank, dim } => DeltaSpec::new(*rank, *dim).map(|_| ()),
            NodeKind::Gamma { dims } => GammaSpec::new(dims.clone()).map(|_| ()),
            NodeKind::Chi { dim, .. } | NodeKind::Fourier { dim, .. } => {
                if *dim == 0 {
                    Err(Error::InvalidParameter("node extent must be at least 1".into()))
                } else {
                    Ok(())
                }
            }
        }
    }
}

/// One output axis of a diagram.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Terminal {
    Port(Port),
    /// End of a bare wire whose other end is free slot `peer`.
    Through { peer: usize, extent: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Diagram {
    nodes: BTreeMap<NodeId, NodeKind>,
    /// Symmetric: every wire is stored in both directions.
    links: BTreeMap<Port, Port>,
    free: Vec<Terminal>,
    scale: f64,
    next_id: NodeId,
}

impl Diagram {
    /// Builds and validates a diagram.
    pub fn new(nodes: Vec<(NodeId, NodeKind)>, wires: Vec<(Port, Port)>, free: Vec<Terminal>) -> Result<Diagram> {
        if nodes.is_empty() && free.is_empty() {
            return Err(Error::EmptyDiagram);
        }
        let mut map = BTreeMap::new();
        for (id, kind) in nodes {
            kind.validate()?;
            if map.insert(id, kind).is_some() {
                return Err(Error::InvalidParameter(format!("node id {id} used twice")));
            }
        }
        let mut links = BTreeMap::new();
        for (a, b) in wires {
            for p in [a, b] {
                if links.contains_key(&p) || a == b {
                    return Err(Error::PortReuse(p));
                }
            }
            links.insert(a, b);
            links.insert(b, a);
        }
        let next_id = map.keys().next_back().map_or(0, |&k| k + 1);
        let d = Diagram {
            nodes: map,
            links,
            free,
            scale: 1.0,
            next_id,
        };
        d.validate()?;
        Ok(d)
    }

    /// Closed diagram with no nodes: the constant `scale`. Simplifying a
    /// diagram without free wires can end here.
    pub fn scalar(scale: f64) -> Diagram {
        Diagram::from_parts(BTreeMap::new(), BTreeMap::new(), vec![], scale, 0)
    }

    pub(crate) fn from_parts(
        nodes: BTreeMap<NodeId, NodeKind>,
        links: BTreeMap<Port, Port>,
        free: Vec<Terminal>,
        scale: f64,
        next_id: NodeId,
    ) -> Diagram {
        let d = Diagram {
            nodes,
            links,
            free,
            scale,
            next_id,
        };
        debug_assert!(d.validate().is_ok(), "{:?}", d.validate());
        d
    }

    pub fn with_scale(mut self, scale: f64) -> Diagram {
        self.scale = scale;
        self
    }

    /// Checks every structural invariant.
    pub fn validate(&self) -> Result<()> {
        for (&a, &b) in &self.links {
            if self.links.get(&b) != Some(&a) {
                return Err(Error::PortReuse(b));
            }
            let ea = self.port_extent(a).ok_or(Error::UnknownPort(a))?;
            let eb = self.port_extent(b).ok_or(Error::UnknownPort(b))?;
            if ea != eb {
                return Err(Error::WireExtentMismatch { a, b, ea, eb });
            }
        }
        let mut free_ports = BTreeSet::new();
        for (f, term) in self.free.iter().enumerate() {
            match *term {
                Terminal::Port(p) => {
                    self.port_extent(p).ok_or(Error::UnknownPort(p))?;
                    if self.links.contains_key(&p) || !free_ports.insert(p) {
                        return Err(Error::PortReuse(p));
                    }
                }
                Terminal::Through { peer, extent } => {
                    let ok = peer != f
                        && extent > 0
                        && matches!(self.free.get(peer),
                            Some(Terminal::Through { peer: back, extent: e }) if *back == f && *e == extent);
                    if !ok {
                        return Err(Error::InvalidParameter(format!(
                            "free slot {f} is a bare wire end without a matching partner"
                        )));
                    }
                }
            }
        }
        for (&id, kind) in &self.nodes {
            for slot in 0..kind.arity() {
                let p = Port::new(id, slot);
                if !self.links.contains_key(&p) && !free_ports.contains(&p) {
                    return Err(Error::DanglingPort(p));
                }
            }
        }
        Ok(())
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &NodeKind)> {
        self.nodes.iter().map(|(&id, k)| (id, k))
    }

    pub fn node(&self, id: NodeId) -> Option<&NodeKind> {
        self.nodes.get(&id)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Wires as port pairs, each listed once with the smaller port first.
    pub fn wires(&self) -> Vec<(Port, Port)> {
        self.links
            .iter()
            .filter(|(a, b)| a < b)
            .map(|(&a, &b)| (a, b))
            .collect()
    }

    /// Wires between node ports plus bare wires between free terminals.
    pub fn wire_count(&self) -> usize {
        let bare = self
            .free
            .iter()
            .enumerate()
            .filter(|(f, t)| matches!(t, Terminal::Through { peer, .. } if peer > f))
            .count();
        self.links.len() / 2 + bare
    }

    pub fn free(&self) -> &[Terminal] {
        &self.free
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub(crate) fn next_id(&self) -> NodeId {
        self.next_id
    }

    pub(crate) fn links(&self) -> &BTreeMap<Port, Port> {
        &self.links
    }

    pub fn peer(&self, p: Port) -> Option<Port> {
        self.links.get(&p).copied()
    }

    pub fn port_extent(&self, p: Port) -> Option<usize> {
        let kind = self.nodes.get(&p.node)?;
        (p.slot < kind.arity()).then(|| kind.extent(p.slot))
    }

    pub fn terminal_extent(&self, t: Terminal) -> usize {
        match t {
            Terminal::Port(p) => self.port_extent(p).expect("free terminal names a live port"),
            Terminal::Through { extent, .. } => extent,
        }
    }

    /// Shape of the diagram's value.
    pub fn output_shape(&self) -> Vec<usize> {
        self.free.iter().map(|&t| self.terminal_extent(t)).collect()
    }

    pub fn evaluate(&self) -> Result<Tensor> {
        self.evaluate_with(EvalOptions::default())
    }

    /// Contracts the diagram. δ nodes are never materialized: all ports of a
    /// δ share one summation label, a label that ends up on no operand and no
    /// output contributes its extent as a factor.
    pub fn evaluate_with(&self, opts: EvalOptions) -> Result<Tensor> {
        let mut uf = UnionFind::default();
        let port_elem: BTreeMap<Port, usize> = self
            .nodes
            .iter()
            .flat_map(|(&id, k)| (0..k.arity()).map(move |s| Port::new(id, s)))
            .map(|p| (p, uf.add()))
            .collect();
        let slot_elem: Vec<usize> = self.free.iter().map(|_| uf.add()).collect();
        for (a, b) in self.wires() {
            uf.union(port_elem[&a], port_elem[&b]);
        }
        for (f, t) in self.free.iter().enumerate() {
            match *t {
                Terminal::Port(p) => uf.union(slot_elem[f], port_elem[&p]),
                Terminal::Through { peer, .. } => uf.union(slot_elem[f], slot_elem[peer]),
            }
        }
        for (&id, kind) in &self.nodes {
            if let NodeKind::Delta { rank, .. } = kind {
                for s in 1..*rank {
                    uf.union(port_elem[&Port::new(id, 0)], port_elem[&Port::new(id, s)]);
                }
            }
        }

        let mut labels = Labeler::default();
        let mut class_extent: BTreeMap<usize, usize> = BTreeMap::new();
        for (&p, &e) in &port_elem {
            class_extent.insert(uf.find(e), self.port_extent(p).unwrap());
        }
        for (f, &e) in slot_elem.iter().enumerate() {
            class_extent.insert(uf.find(e), self.terminal_extent(self.free[f]));
        }

        let mut operands: Vec<Tensor> = vec![];
        let mut inputs: Vec<Vec<Label>> = vec![];
        let mut used = BTreeSet::new();
        for (&id, kind) in &self.nodes {
            if matches!(kind, NodeKind::Delta { .. }) {
                continue;
            }
            let classes: Vec<usize> = (0..kind.arity())
                .map(|s| uf.find(port_elem[&Port::new(id, s)]))
                .collect();
            used.extend(classes.iter().copied());
            inputs.push(classes.iter().map(|&c| labels.get(c)).collect());
            operands.push(kind.to_dense()?);
        }
        let out_classes: Vec<usize> = slot_elem.iter().map(|&e| uf.find(e)).collect();
        let out_set: BTreeSet<usize> = out_classes.iter().copied().collect();
        let mut factor = self.scale;
        for (&c, &extent) in &class_extent {
            if used.contains(&c) {
                continue;
            }
            if out_set.contains(&c) {
                // output index constrained only by δ's: a vector of ones
                inputs.push(vec![labels.get(c)]);
                operands.push(Tensor::from_real(vec![extent], vec![1.0; extent])?);
            } else {
                factor *= extent as f64;
            }
        }
        let result = if operands.is_empty() {
            Tensor::scalar(1.0)
        } else {
            let output = out_classes.iter().map(|&c| labels.get(c)).collect();
            let spec = IndexSpec::new(inputs, output)?;
            let refs: Vec<&Tensor> = operands.iter().collect();
            einsum_eval_with(&spec, &refs, opts)?
        };
        Ok(if factor == 1.0 { result } else { result.scale(factor) })
    }

    /// Reference evaluation: every node, δ included, as a dense tensor in one
    /// einsum with one label per wire.
    pub fn evaluate_dense(&self) -> Result<Tensor> {
        self.evaluate_dense_with(EvalOptions { budget: None })
    }

    pub fn evaluate_dense_with(&self, opts: EvalOptions) -> Result<Tensor> {
        let mut labels = Labeler::default();
        let mut wire_label: BTreeMap<Port, Label> = BTreeMap::new();
        let mut count = 0;
        for (a, b) in self.wires() {
            let l = labels.get(count);
            count += 1;
            wire_label.insert(a, l);
            wire_label.insert(b, l);
        }
        let mut output = vec![];
        let mut operands = vec![];
        let mut inputs = vec![];
        let mut through_label: BTreeMap<usize, Label> = BTreeMap::new();
        for (f, t) in self.free.iter().enumerate() {
            let l = match *t {
                Terminal::Through { peer, extent } => match through_label.get(&f) {
                    Some(&l) => l,
                    None => {
                        let l = labels.get(count);
                        count += 1;
                        let m = labels.get(count);
                        count += 1;
                        through_label.insert(f, l);
                        // the partner slot reads the second label of the identity
                        through_label.insert(peer, m);
                        operands.push(Tensor::identity(extent)?);
                        inputs.push(vec![l, m]);
                        l
                    }
                },
                Terminal::Port(p) => {
                    let l = labels.get(count);
                    count += 1;
                    wire_label.insert(p, l);
                    l
                }
            };
            output.push(l);
        }
        for (&id, kind) in &self.nodes {
            inputs.push((0..kind.arity()).map(|s| wire_label[&Port::new(id, s)]).collect());
            operands.push(kind.to_dense()?);
        }
        let result = if operands.is_empty() {
            Tensor::scalar(1.0)
        } else {
            let spec = IndexSpec::new(inputs, output)?;
            let refs: Vec<&Tensor> = operands.iter().collect();
            einsum_eval_with(&spec, &refs, opts)?
        };
        Ok(if self.scale == 1.0 {
            result
        } else {
            result.scale(self.scale)
        })
    }
}

#[derive(Default)]
struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn add(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.parent.len() - 1
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Hands out distinct einsum labels: ASCII letters first, then CJK code points.
#[derive(Default)]
struct Labeler {
    assigned: BTreeMap<usize, Label>,
}

impl Labeler {
    fn get(&mut self, key: usize) -> Label {
        let n = self.assigned.len();
        *self.assigned.entry(key).or_insert_with(|| match n {
            0..=25 => (b'a' + n as u8) as char,
            26..=51 => (b'A' + (n - 26) as u8) as char,
            _ => char::from_u32(0x4E00 + n as u32).expect("label space exhausted"),
        })
    }
}
