//! Tensor contractions through a graphical calculus.
//!
//! Tensors are nodes, indices are wires, and joining two wires sums over the
//! shared index. Three structured tensors mediate most of linear algebra:
//! the Kronecker tensor δ (diagonals, traces, elementwise products), the
//! vectorization tensor γ (flattening multi-indices) and the convolution
//! tensor χ (signed circular convolutions). This crate provides
//!
//! * a dense [`Tensor`] type and an einsum evaluator ([`einsum`]),
//! * dense constructors for the mediators ([`mediators`]),
//! * the Kronecker, Hadamard, Khatri-Rao and Tracy-Singh products with both a
//!   direct kernel and a mediated reference path ([`products`]),
//! * signed circular convolutions and the generalized convolution theorem
//!   ([`convolution`]),
//! * a diagram representation with sound rewrite rules ([`diagram`]),
//! * a catalog of checkable matrix identities ([`identities`]).

pub mod convolution;
pub mod diagram;
pub mod einsum;
pub mod error;
pub mod identities;
pub mod json;
pub mod mediators;
pub mod products;
pub mod random;
pub mod tensor;

pub use einsum::{contract_pair, einsum_eval, einsum_eval_with, ContractionPlan, EvalOptions, IndexSpec};
pub use error::{Error, Result};
pub use mediators::{DeltaSpec, Direction, FourierSpec, GammaSpec, Sign, Signature};
pub use tensor::{DType, Data, Tensor, Tolerance};
