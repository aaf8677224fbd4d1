use std::collections::BTreeMap;

use super::{Diagram, NodeId, NodeKind, Port, Terminal};
use crate::error::{Error, Result};
use crate::mediators::{Direction, Signature};
use crate::products::KronLayout;
use crate::tensor::Tensor;

/// Open wire ends of a partially built expression, in axis order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wires(pub Vec<Port>);

impl Wires {
    pub fn rank(&self) -> usize {
        self.0.len()
    }
}

fn expect_rank(w: &Wires, rank: usize) -> Result<()> {
    if w.rank() != rank {
        return Err(Error::RankMismatch {
            expected: rank,
            got: w.rank(),
        });
    }
    Ok(())
}

/// Assembles diagrams from nodes and the wiring patterns of the matrix
/// products. Each product method consumes the open ends of its operands and
/// returns the open ends of the result.
#[derive(Debug, Default)]
pub struct DiagramBuilder {
    nodes: BTreeMap<NodeId, NodeKind>,
    wires: Vec<(Port, Port)>,
}

impl DiagramBuilder {
    pub fn new() -> DiagramBuilder {
        DiagramBuilder::default()
    }

    pub fn node(&mut self, kind: NodeKind) -> Wires {
        let id = self.nodes.len();
        let arity = kind.arity();
        self.nodes.insert(id, kind);
        Wires((0..arity).map(|s| Port::new(id, s)).collect())
    }

    pub fn tensor(&mut self, name: &str, t: Tensor) -> Wires {
        self.node(NodeKind::dense(name, t))
    }

    pub fn delta(&mut self, rank: usize, dim: usize) -> Wires {
        self.node(NodeKind::Delta { rank, dim })
    }

    pub fn gamma(&mut self, dims: Vec<usize>) -> Wires {
        self.node(NodeKind::Gamma { dims })
    }

    pub fn chi(&mut self, sig: Signature, dim: usize) -> Wires {
        self.node(NodeKind::Chi { sig, dim })
    }

    pub fn fourier(&mut self, dim: usize, direction: Direction) -> Wires {
        self.node(NodeKind::Fourier { dim, direction })
    }

    pub fn connect(&mut self, a: Port, b: Port) {
        self.wires.push((a, b));
    }

    pub fn extent(&self, p: Port) -> usize {
        self.nodes[&p.node].extent(p.slot)
    }

    pub fn finish(self, free: Wires) -> Result<Diagram> {
        Diagram::new(
            self.nodes.into_iter().collect(),
            self.wires,
            free.0.into_iter().map(Terminal::Port).collect(),
        )
    }

    /// γ over `inputs` (first fastest); returns its flat port.
    pub fn flatten(&mut self, inputs: &[Port]) -> Port {
        let dims = inputs.iter().map(|&p| self.extent(p)).collect();
        let g = self.gamma(dims);
        for (&p, &q) in inputs.iter().zip(&g.0) {
            self.connect(p, q);
        }
        *g.0.last().unwrap()
    }

    /// γ read backwards: splits `flat` into indices of extents `dims`.
    pub fn split(&mut self, flat: Port, dims: &[usize]) -> Vec<Port> {
        let g = self.gamma(dims.to_vec());
        self.connect(flat, *g.0.last().unwrap());
        g.0[..dims.len()].to_vec()
    }

    /// δ joining `ports`; returns its remaining port.
    pub fn tie(&mut self, ports: &[Port]) -> Port {
        let d = self.delta(ports.len() + 1, self.extent(ports[0]));
        for (&p, &q) in ports.iter().zip(&d.0) {
            self.connect(p, q);
        }
        *d.0.last().unwrap()
    }

    /// Joins axis `ax` of `a` with axis `bx` of `b`; the result keeps the
    /// other axes of `a`, then those of `b`.
    pub fn contract(&mut self, a: Wires, ax: usize, b: Wires, bx: usize) -> Wires {
        self.connect(a.0[ax], b.0[bx]);
        let mut out: Vec<Port> = a.0.iter().enumerate().filter(|&(k, _)| k != ax).map(|(_, &p)| p).collect();
        out.extend(b.0.iter().enumerate().filter(|&(k, _)| k != bx).map(|(_, &p)| p));
        Wires(out)
    }

    pub fn dot(&mut self, a: Wires, b: Wires) -> Result<Wires> {
        expect_rank(&a, 2)?;
        expect_rank(&b, 2)?;
        Ok(self.contract(a, 1, b, 0))
    }

    pub fn outer(&mut self, a: Wires, b: Wires) -> Wires {
        Wires([a.0, b.0].concat())
    }

    pub fn transpose(&mut self, a: Wires, perm: &[usize]) -> Result<Wires> {
        if !crate::tensor::is_permutation(perm, a.rank()) {
            return Err(Error::InvalidPermutation {
                perm: perm.to_vec(),
                rank: a.rank(),
            });
        }
        Ok(Wires(perm.iter().map(|&k| a.0[k]).collect()))
    }

    fn ordered(a: Port, b: Port, layout: KronLayout) -> [Port; 2] {
        match layout {
            KronLayout::Gamma => [a, b],
            KronLayout::Textbook => [b, a],
        }
    }

    pub fn kron(&mut self, a: Wires, b: Wires, layout: KronLayout) -> Result<Wires> {
        expect_rank(&a, 2)?;
        expect_rank(&b, 2)?;
        let m = self.flatten(&Self::ordered(a.0[0], b.0[0], layout));
        let n = self.flatten(&Self::ordered(a.0[1], b.0[1], layout));
        Ok(Wires(vec![m, n]))
    }

    pub fn hadamard(&mut self, a: Wires, b: Wires) -> Result<Wires> {
        expect_rank(&b, a.rank())?;
        Ok(Wires(a.0.iter().zip(&b.0).map(|(&p, &q)| self.tie(&[p, q])).collect()))
    }

    pub fn khatri_rao_col(&mut self, a: Wires, b: Wires, layout: KronLayout) -> Result<Wires> {
        expect_rank(&a, 2)?;
        expect_rank(&b, 2)?;
        let m = self.flatten(&Self::ordered(a.0[0], b.0[0], layout));
        let n = self.tie(&[a.0[1], b.0[1]]);
        Ok(Wires(vec![m, n]))
    }

    pub fn khatri_rao_row(&mut self, a: Wires, b: Wires, layout: KronLayout) -> Result<Wires> {
        expect_rank(&a, 2)?;
        expect_rank(&b, 2)?;
        let m = self.tie(&[a.0[0], b.0[0]]);
        let n = self.flatten(&Self::ordered(a.0[1], b.0[1], layout));
        Ok(Wires(vec![m, n]))
    }

    pub fn tracy_singh(&mut self, a: Wires, b: Wires) -> Result<Wires> {
        expect_rank(&a, 4)?;
        expect_rank(&b, 4)?;
        let (x, y) = (&a.0, &b.0);
        let m = self.flatten(&[x[0], y[0], x[2], y[2]]);
        let n = self.flatten(&[x[1], y[1], x[3], y[3]]);
        Ok(Wires(vec![m, n]))
    }

    /// Block-matrix product of rank-4 tensors: `a[i,j,k,l] b[j,x,l,y]`.
    pub fn block_dot(&mut self, a: Wires, b: Wires) -> Result<Wires> {
        expect_rank(&a, 4)?;
        expect_rank(&b, 4)?;
        self.connect(a.0[1], b.0[0]);
        self.connect(a.0[3], b.0[2]);
        Ok(Wires(vec![a.0[0], b.0[1], a.0[2], b.0[3]]))
    }

    pub fn col(&mut self, a: Wires) -> Result<Wires> {
        expect_rank(&a, 2)?;
        Ok(Wires(vec![self.flatten(&a.0)]))
    }

    pub fn row(&mut self, a: Wires) -> Result<Wires> {
        expect_rank(&a, 2)?;
        Ok(Wires(vec![self.flatten(&[a.0[1], a.0[0]])]))
    }

    /// Rank-4 block view of a matrix, as [`crate::products::blockify`].
    pub fn blockify(&mut self, a: Wires, rows: [usize; 2], cols: [usize; 2]) -> Result<Wires> {
        expect_rank(&a, 2)?;
        let r = self.split(a.0[0], &rows);
        let c = self.split(a.0[1], &cols);
        Ok(Wires(vec![r[0], c[0], r[1], c[1]]))
    }

    pub fn trace(&mut self, a: Wires) -> Result<Wires> {
        expect_rank(&a, 2)?;
        self.connect(a.0[0], a.0[1]);
        Ok(Wires(vec![]))
    }

    pub fn diag(&mut self, a: Wires) -> Result<Wires> {
        expect_rank(&a, 2)?;
        Ok(Wires(vec![self.tie(&a.0)]))
    }

    pub fn diag_embed(&mut self, v: Wires) -> Result<Wires> {
        expect_rank(&v, 1)?;
        let d = self.delta(3, self.extent(v.0[0]));
        self.connect(v.0[0], d.0[0]);
        Ok(Wires(vec![d.0[1], d.0[2]]))
    }

    pub fn identity(&mut self, dim: usize) -> Wires {
        self.delta(2, dim)
    }
}
