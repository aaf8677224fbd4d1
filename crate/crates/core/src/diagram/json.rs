//! JSON form of a diagram.
//!
//! ```json
//! {
//!   "nodes": [
//!     {"id": 0, "kind": "dense", "name": "A", "tensor": {"shape": [2, 2], "dtype": "f64", "data": [1, 0, 0, 1]}},
//!     {"id": 1, "kind": "dense", "name": "B", "file": "b.json"},
//!     {"id": 2, "kind": "delta", "rank": 3, "dim": 2},
//!     {"id": 3, "kind": "gamma", "dims": [2, 2]},
//!     {"id": 4, "kind": "chi", "sig": "++-", "dim": 4},
//!     {"id": 5, "kind": "fourier", "dim": 4, "direction": "forward"}
//!   ],
//!   "wires": [[[0, 1], [1, 0]]],
//!   "free": [[0, 0], [1, 1], {"through": 3, "dim": 2}],
//!   "scale": 1.0
//! }
//! ```
//!
//! `file` paths are relative to the directory of the diagram file. A free
//! entry `{"through": j, "dim": d}` is one end of a bare wire whose other end
//! is free slot `j`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{Diagram, NodeKind, Port, Terminal};
use crate::error::{Error, Result};
use crate::json::{read_tensor, tensor_from_value, tensor_to_value, ReadOptions};
use crate::mediators::{Direction, Signature};

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum Body {
    Dense {
        name: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tensor: Option<Value>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        file: Option<String>,
    },
    Delta {
        rank: usize,
        dim: usize,
    },
    Gamma {
        dims: Vec<usize>,
    },
    Chi {
        sig: Signature,
        dim: usize,
    },
    Fourier {
        dim: usize,
        direction: Direction,
    },
}

#[derive(Serialize, Deserialize)]
struct NodeDoc {
    id: usize,
    #[serde(flatten)]
    body: Body,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum FreeDoc {
    Port([usize; 2]),
    Through { through: usize, dim: usize },
}

fn one() -> f64 {
    1.0
}

#[derive(Serialize, Deserialize)]
struct DiagramDoc {
    nodes: Vec<NodeDoc>,
    #[serde(default)]
    wires: Vec<[[usize; 2]; 2]>,
    #[serde(default)]
    free: Vec<FreeDoc>,
    #[serde(default = "one")]
    scale: f64,
}

fn port(p: [usize; 2]) -> Port {
    Port::new(p[0], p[1])
}

pub fn to_value(d: &Diagram) -> Value {
    let nodes = d
        .nodes()
        .map(|(id, kind)| NodeDoc {
            id,
            body: match kind {
                NodeKind::Dense { name, tensor } => Body::Dense {
                    name: name.clone(),
                    tensor: Some(tensor_to_value(tensor)),
                    file: None,
                },
                NodeKind::Delta { rank, dim } => Body::Delta { rank: *rank, dim: *dim },
                NodeKind::Gamma { dims } => Body::Gamma { dims: dims.clone() },
                NodeKind::Chi { sig, dim } => Body::Chi { sig: *sig, dim: *dim },
                NodeKind::Fourier { dim, direction } => Body::Fourier {
                    dim: *dim,
                    direction: *direction,
                },
            },
        })
        .collect();
    let doc = DiagramDoc {
        nodes,
        wires: d
            .wires()
            .into_iter()
            .map(|(a, b)| [[a.node, a.slot], [b.node, b.slot]])
            .collect(),
        free: d
            .free()
            .iter()
            .map(|t| match *t {
                Terminal::Port(p) => FreeDoc::Port([p.node, p.slot]),
                Terminal::Through { peer, extent } => FreeDoc::Through {
                    through: peer,
                    dim: extent,
                },
            })
            .collect(),
        scale: d.scale(),
    };
    serde_json::to_value(doc).expect("diagram documents always serialize")
}

pub fn to_string_pretty(d: &Diagram) -> String {
    serde_json::to_string_pretty(&to_value(d)).expect("diagram documents always serialize")
}

/// Parses a diagram; `base` resolves relative `file` references.
pub fn from_str(text: &str, base: Option<&Path>) -> Result<Diagram> {
    let doc: DiagramDoc = serde_json::from_str(text)?;
    let mut nodes = Vec::with_capacity(doc.nodes.len());
    for n in doc.nodes {
        let kind = match n.body {
            Body::Dense { name, tensor, file } => {
                let t = match (tensor, file) {
                    (Some(v), None) => tensor_from_value(&v, ReadOptions::default())?,
                    (None, Some(f)) => {
                        let path = base.map_or_else(|| Path::new(&f).to_path_buf(), |b| b.join(&f));
                        read_tensor(&path, ReadOptions::default())?
                    }
                    _ => {
                        return Err(Error::Json(format!(
                            "dense node {} needs exactly one of \"tensor\" and \"file\"",
                            n.id
                        )))
                    }
                };
                NodeKind::dense(name, t)
            }
            Body::Delta { rank, dim } => NodeKind::Delta { rank, dim },
            Body::Gamma { dims } => NodeKind::Gamma { dims },
            Body::Chi { sig, dim } => NodeKind::Chi { sig, dim },
            Body::Fourier { dim, direction } => NodeKind::Fourier { dim, direction },
        };
        nodes.push((n.id, kind));
    }
    let wires: Vec<(Port, Port)> = doc.wires.into_iter().map(|[a, b]| (port(a), port(b))).collect();
    let free: Vec<Terminal> = doc
        .free
        .into_iter()
        .map(|f| match f {
            FreeDoc::Port(p) => Terminal::Port(port(p)),
            FreeDoc::Through { through, dim } => Terminal::Through {
                peer: through,
                extent: dim,
            },
        })
        .collect();
    if !doc.scale.is_finite() {
        return Err(Error::Json("scale must be finite".into()));
    }
    if nodes.is_empty() && free.is_empty() && wires.is_empty() {
        return Ok(Diagram::scalar(doc.scale));
    }
    Ok(Diagram::new(nodes, wires, free)?.with_scale(doc.scale))
}

pub fn read(path: &Path) -> Result<Diagram> {
    let text = fs::read_to_string(path).map_err(|e| Error::Json(format!("{}: {e}", path.display())))?;
    from_str(&text, path.parent())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::Tensor;

    #[test]
    fn round_trip() {
        let d = Diagram::new(
            vec![
                (0, NodeKind::dense("A", Tensor::from_real(vec![2, 3], vec![1., 2., 3., 4., 5., 6.]).unwrap())),
                (1, NodeKind::Chi { sig: Signature::CORRELATION, dim: 3 }),
                (2, NodeKind::Fourier { dim: 3, direction: Direction::Inverse }),
            ],
            vec![(Port::new(0, 1), Port::new(1, 0)), (Port::new(1, 1), Port::new(2, 0))],
            vec![
                Terminal::Port(Port::new(0, 0)),
                Terminal::Port(Port::new(1, 2)),
                Terminal::Through { peer: 4, extent: 5 },
                Terminal::Port(Port::new(2, 1)),
                Terminal::Through { peer: 2, extent: 5 },
            ],
        )
        .unwrap()
        .with_scale(2.5);
        let text = to_string_pretty(&d);
        assert_eq!(from_str(&text, None).unwrap(), d);
    }

    #[test]
    fn rejects_invalid() {
        assert!(from_str("{\"nodes\": [{\"id\": 0, \"kind\": \"blob\"}]}", None).is_err());
        assert!(from_str("{\"nodes\": [{\"id\": 0, \"kind\": \"delta\", \"rank\": 2, \"dim\": 2}], \"free\": [[0, 0]]}", None).is_err());
        assert!(from_str("{\"nodes\": [{\"id\": 0, \"kind\": \"chi\", \"sig\": \"++\", \"dim\": 2}]}", None).is_err());
        assert!(from_str("not json", None).is_err());
    }
}
