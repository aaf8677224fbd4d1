//! Value-preserving rewrites and the simplification driver.
//!
//! * `fuse_delta`: a δ with a self-loop loses it; a rank-2 δ is spliced out;
//!   two δ's sharing a wire merge into one δ on their leftover ports (a
//!   closed pair leaves the scalar `D`).
//! * `fuse_gamma`: γ's joined flat-to-flat become identity wires per input;
//!   γ's joined input-to-input become one identity wire on the flat ports.
//! * `swap_delta_gamma`: a δ on the flat ports of `N` equal γ's becomes one δ
//!   per input position feeding fresh γ's.
//! * `chi_fourier`: χ with a DFT on every leg, forward on `+` and inverse on
//!   `−` (or the global flip), becomes `sqrt(D) δ`.
//!
//! Every rule returns the rewritten diagram or says why it did not apply.

use std::collections::BTreeSet;

use thiserror::Error;

use super::patch::Patch;
use super::{Diagram, NodeId, NodeKind, Port};
use crate::mediators::Direction;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RewriteError {
    #[error("no match")]
    NoMatch,
    #[error("γ nodes with input extents {0:?} and {1:?} cannot fuse")]
    DimsListMismatch(Vec<usize>, Vec<usize>),
    #[error("Fourier directions around χ do not follow its signature")]
    DirectionPatternMismatch,
    #[error("extent inconsistency: {0}")]
    ExtentInconsistency(String),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    FuseDelta,
    FuseGamma,
    SwapDeltaGamma,
    ChiFourier,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplifyStep {
    pub rule: Rule,
    pub nodes_before: usize,
    pub nodes_after: usize,
    pub wires_before: usize,
    pub wires_after: usize,
}

fn ports(d: &Diagram, id: NodeId) -> Vec<Port> {
    (0..d.node(id).unwrap().arity()).map(|s| Port::new(id, s)).collect()
}

fn delta_dim(d: &Diagram, id: NodeId) -> Option<usize> {
    match d.node(id)? {
        NodeKind::Delta { dim, .. } => Some(*dim),
        _ => None,
    }
}

fn gamma_dims(d: &Diagram, id: NodeId) -> Option<&[usize]> {
    match d.node(id)? {
        NodeKind::Gamma { dims } => Some(dims),
        _ => None,
    }
}

/// Replaces δ `id` (and optionally a neighbor) by one δ on `leftovers`, or by
/// the scalar `dim` when nothing is left.
fn merge_deltas(d: &Diagram, remove: Vec<NodeId>, absorbed: &[Port], leftovers: &[Port], dim: usize) -> Diagram {
    let mut patch = Patch::new(remove);
    for &p in absorbed {
        patch.absorb(p);
    }
    if leftovers.is_empty() {
        patch.scale = dim as f64;
    } else {
        let n = patch.node(NodeKind::Delta {
            rank: leftovers.len(),
            dim,
        });
        for (k, &p) in leftovers.iter().enumerate() {
            patch.bind(p, n, k);
        }
    }
    d.apply(patch).expect("δ fusion keeps extents")
}

pub fn fuse_delta(d: &Diagram) -> Result<Diagram, RewriteError> {
    for (id, kind) in d.nodes() {
        let NodeKind::Delta { rank, dim } = *kind else {
            continue;
        };
        let own = ports(d, id);
        if let Some(&p) = own.iter().find(|p| d.peer(**p).is_some_and(|q| q.node == id)) {
            let q = d.peer(p).unwrap();
            let leftovers: Vec<Port> = own.iter().copied().filter(|&x| x != p && x != q).collect();
            return Ok(merge_deltas(d, vec![id], &[p, q], &leftovers, dim));
        }
        if rank == 2 {
            let mut patch = Patch::new(vec![id]);
            patch.join(own[0], own[1]);
            return Ok(d.apply(patch).expect("splicing keeps extents"));
        }
        let neighbor = own
            .iter()
            .filter_map(|&p| d.peer(p))
            .filter(|q| delta_dim(d, q.node).is_some())
            .map(|q| q.node)
            .min();
        if let Some(other) = neighbor {
            let theirs = ports(d, other);
            let shared: Vec<Port> = own
                .iter()
                .copied()
                .filter(|&p| d.peer(p).is_some_and(|q| q.node == other))
                .collect();
            let absorbed: Vec<Port> = shared.iter().flat_map(|&p| [p, d.peer(p).unwrap()]).collect();
            let leftovers: Vec<Port> = own
                .iter()
                .chain(theirs.iter())
                .copied()
                .filter(|p| !absorbed.contains(p))
                .collect();
            return Ok(merge_deltas(d, vec![id, other], &absorbed, &leftovers, dim));
        }
    }
    Err(RewriteError::NoMatch)
}

pub fn fuse_gamma(d: &Diagram) -> Result<Diagram, RewriteError> {
    let mut mismatch = None;
    for (id, kind) in d.nodes() {
        let NodeKind::Gamma { dims } = kind else {
            continue;
        };
        let n = dims.len();
        let own = ports(d, id);
        let flat = own[n];
        if n == 1 {
            let mut patch = Patch::new(vec![id]);
            patch.join(own[0], flat);
            return Ok(d.apply(patch).expect("γ with one input is an identity"));
        }
        if let Some(q) = d.peer(flat) {
            if let Some(other_dims) = gamma_dims(d, q.node).filter(|od| q.node != id && q.slot == od.len()) {
                if other_dims != dims.as_slice() {
                    mismatch.get_or_insert_with(|| (dims.clone(), other_dims.to_vec()));
                } else {
                    let mut patch = Patch::new(vec![id, q.node]);
                    patch.absorb(flat);
                    patch.absorb(q);
                    for k in 0..n {
                        patch.join(own[k], Port::new(q.node, k));
                    }
                    return Ok(d.apply(patch).expect("flat fusion keeps extents"));
                }
            }
        }
        let partners: BTreeSet<Option<NodeId>> = own[..n]
            .iter()
            .enumerate()
            .map(|(k, &p)| d.peer(p).filter(|q| q.slot == k && q.node != id).map(|q| q.node))
            .collect();
        if let [Some(other)] = partners.into_iter().collect::<Vec<_>>()[..] {
            if gamma_dims(d, other) == Some(dims.as_slice()) {
                let mut patch = Patch::new(vec![id, other]);
                for k in 0..n {
                    patch.absorb(own[k]);
                    patch.absorb(Port::new(other, k));
                }
                patch.join(flat, Port::new(other, n));
                return Ok(d.apply(patch).expect("input fusion keeps extents"));
            }
        }
    }
    match mismatch {
        Some((a, b)) => Err(RewriteError::DimsListMismatch(a, b)),
        None => Err(RewriteError::NoMatch),
    }
}

/// Swap at the first δ (lowest id) where the rule applies.
pub fn swap_delta_gamma(d: &Diagram) -> Result<Diagram, RewriteError> {
    let deltas: Vec<NodeId> = d.nodes().filter(|(_, k)| matches!(k, NodeKind::Delta { .. })).map(|(id, _)| id).collect();
    for id in deltas {
        if let Ok(out) = swap_delta_gamma_at(d, id) {
            return Ok(out);
        }
    }
    Err(RewriteError::NoMatch)
}

/// Rewrites δ `id` of extent `M = prod(I)` whose ports reach the flat ports
/// of `N` γ's with input extents `I`: each input position `j` gets a δ of
/// extent `I_j` joining the `j`-th inputs of those γ's. Each of the `L` other
/// δ ports gets a fresh γ whose `j`-th input joins the same δ, so the new δ's
/// have rank `N + L`.
pub fn swap_delta_gamma_at(d: &Diagram, id: NodeId) -> Result<Diagram, RewriteError> {
    let Some(NodeKind::Delta { rank, .. }) = d.node(id) else {
        return Err(RewriteError::NoMatch);
    };
    let rank = *rank;
    let own = ports(d, id);
    let attached: Vec<(usize, NodeId)> = own
        .iter()
        .enumerate()
        .filter_map(|(s, &p)| {
            let q = d.peer(p)?;
            let dims = gamma_dims(d, q.node)?;
            (q.slot == dims.len()).then_some((s, q.node))
        })
        .collect();
    let Some(&(_, first)) = attached.first() else {
        return Err(RewriteError::NoMatch);
    };
    let dims = gamma_dims(d, first).unwrap().to_vec();
    if let Some(&(_, g)) = attached.iter().find(|(_, g)| gamma_dims(d, *g).unwrap() != dims) {
        return Err(RewriteError::ExtentInconsistency(format!(
            "γ nodes {first} and {g} on δ {id} have input extents {dims:?} and {:?}",
            gamma_dims(d, g).unwrap()
        )));
    }
    let n_gammas = attached.len();
    let leftovers: Vec<usize> = (0..rank).filter(|s| !attached.iter().any(|(t, _)| t == s)).collect();
    let n = dims.len();
    let fan = n_gammas + leftovers.len();

    let mut remove = vec![id];
    remove.extend(attached.iter().map(|&(_, g)| g));
    let mut patch = Patch::new(remove);
    let new_deltas: Vec<usize> = dims.iter().map(|&e| patch.node(NodeKind::Delta { rank: fan, dim: e })).collect();
    for (k, &(s, g)) in attached.iter().enumerate() {
        patch.absorb(own[s]);
        patch.absorb(Port::new(g, n));
        for j in 0..n {
            patch.bind(Port::new(g, j), new_deltas[j], k);
        }
    }
    for (l, &s) in leftovers.iter().enumerate() {
        let g = patch.node(NodeKind::Gamma { dims: dims.clone() });
        patch.bind(own[s], g, n);
        for j in 0..n {
            patch.internal.push(((g, j), (new_deltas[j], n_gammas + l)));
        }
    }
    d.apply(patch)
}

/// Inverse of the swap for a single fresh γ: γ `id` whose every input `j`
/// reaches a distinct δ of extent `I_j`, all of the same rank `N + 1`. The
/// δ's are replaced by `N` γ's on their other ports and one δ of extent
/// `prod(I)` joining those γ's flat ports with the flat port of `id`.
pub fn unswap_delta_gamma_at(d: &Diagram, id: NodeId) -> Result<Diagram, RewriteError> {
    let Some(dims) = gamma_dims(d, id).map(<[usize]>::to_vec) else {
        return Err(RewriteError::NoMatch);
    };
    let n = dims.len();
    let own = ports(d, id);
    let mut deltas: Vec<NodeId> = vec![];
    for &p in &own[..n] {
        match d.peer(p) {
            Some(q) if q.node != id && delta_dim(d, q.node).is_some() && !deltas.contains(&q.node) => {
                deltas.push(q.node)
            }
            _ => return Err(RewriteError::NoMatch),
        }
    }
    let ranks: BTreeSet<usize> = deltas.iter().map(|&x| d.node(x).unwrap().arity()).collect();
    let [fan] = ranks.into_iter().collect::<Vec<_>>()[..] else {
        return Err(RewriteError::ExtentInconsistency("δ's on the γ inputs differ in rank".into()));
    };
    if fan < 2 {
        return Err(RewriteError::NoMatch);
    }
    let n_gammas = fan - 1;
    let m: usize = dims.iter().product();

    let mut remove = vec![id];
    remove.extend(deltas.iter().copied());
    let mut patch = Patch::new(remove);
    let hub = patch.node(NodeKind::Delta { rank: fan, dim: m });
    let gammas: Vec<usize> = (0..n_gammas).map(|_| patch.node(NodeKind::Gamma { dims: dims.clone() })).collect();
    for (k, &g) in gammas.iter().enumerate() {
        patch.internal.push(((hub, k), (g, n)));
    }
    patch.bind(own[n], hub, n_gammas);
    for (j, &x) in deltas.iter().enumerate() {
        patch.absorb(own[j]);
        let mut k = 0;
        for p in ports(d, x) {
            if d.peer(p) == Some(own[j]) {
                patch.absorb(p);
            } else {
                patch.bind(p, gammas[k], j);
                k += 1;
            }
        }
    }
    d.apply(patch)
}

pub fn chi_fourier(d: &Diagram) -> Result<Diagram, RewriteError> {
    let mut mismatch = false;
    'nodes: for (id, kind) in d.nodes() {
        let NodeKind::Chi { sig, dim } = *kind else {
            continue;
        };
        let own = ports(d, id);
        let mut legs: Vec<(Port, NodeId, Direction)> = vec![];
        for &p in &own {
            let Some(q) = d.peer(p) else { continue 'nodes };
            match d.node(q.node) {
                Some(NodeKind::Fourier { direction, .. })
                    if q.node != id && !legs.iter().any(|(_, f, _)| *f == q.node) =>
                {
                    legs.push((q, q.node, *direction))
                }
                _ => continue 'nodes,
            }
        }
        let expected: Vec<Direction> = sig.signs().iter().map(|&s| Direction::for_sign(s)).collect();
        let dirs: Vec<Direction> = legs.iter().map(|l| l.2).collect();
        let flipped: Vec<Direction> = expected.iter().map(|e| e.flip()).collect();
        if dirs != expected && dirs != flipped {
            mismatch = true;
            continue;
        }
        let mut remove = vec![id];
        remove.extend(legs.iter().map(|l| l.1));
        let mut patch = Patch::new(remove);
        let delta = patch.node(NodeKind::Delta { rank: 3, dim });
        for (k, &(q, f, _)) in legs.iter().enumerate() {
            patch.absorb(own[k]);
            patch.absorb(q);
            patch.bind(Port::new(f, 1 - q.slot), delta, k);
        }
        patch.scale = (dim as f64).sqrt();
        return d.apply(patch);
    }
    if mismatch {
        Err(RewriteError::DirectionPatternMismatch)
    } else {
        Err(RewriteError::NoMatch)
    }
}

/// Gated swap: the first δ whose swap strictly lowers the node count.
fn shrinking_swap(d: &Diagram) -> Option<Diagram> {
    d.nodes()
        .filter(|(_, k)| matches!(k, NodeKind::Delta { .. }))
        .map(|(id, _)| id)
        .filter_map(|id| swap_delta_gamma_at(d, id).ok())
        .find(|out| out.node_count() < d.node_count())
}

/// Applies the rules in fixed order until none fires.
pub fn simplify(d: &Diagram) -> Diagram {
    simplify_traced(d).0
}

pub fn simplify_traced(d: &Diagram) -> (Diagram, Vec<SimplifyStep>) {
    let mut current = d.clone();
    let mut steps = vec![];
    loop {
        let next = fuse_delta(&current)
            .ok()
            .map(|x| (Rule::FuseDelta, x))
            .or_else(|| fuse_gamma(&current).ok().map(|x| (Rule::FuseGamma, x)))
            .or_else(|| shrinking_swap(&current).map(|x| (Rule::SwapDeltaGamma, x)))
            .or_else(|| chi_fourier(&current).ok().map(|x| (Rule::ChiFourier, x)));
        let Some((rule, next)) = next else {
            return (current, steps);
        };
        steps.push(SimplifyStep {
            rule,
            nodes_before: current.node_count(),
            nodes_after: next.node_count(),
            wires_before: current.wire_count(),
            wires_after: next.wire_count(),
        });
        current = next;
    }
}
