//! Matrix identities that follow from the diagram rules, as numerical checks.
//!
//! Each identity is evaluated on seeded random complex operands (entries
//! uniform in the unit square). The residual is the largest entrywise
//! difference of the two sides divided by the largest magnitude on either
//! side, so it does not depend on the scale of the operands.
//!
//! `vec-triple` and `vec-triple-diag` are stated with the right factor's
//! index varying fastest inside `⊗` and `⊙` (the usual textbook layout); in
//! the first-index-fastest layout used elsewhere in this crate the factors
//! would appear swapped.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::diagram::{Diagram, DiagramBuilder, Wires};
use crate::einsum::{einsum_eval, IndexSpec};
use crate::error::{Error, Result};
use crate::mediators::{diag_embed, diag_extract, trace};
use crate::products::{self, blockify, KronLayout};
use crate::random::{complex_tensor, rng};
use crate::tensor::Tensor;

/// Extent of every symbol an identity mentions.
pub type Dims = BTreeMap<char, usize>;

#[derive(Copy, Clone, Debug)]
pub struct IdentityInfo {
    pub name: &'static str,
    pub statement: &'static str,
    /// Operand names with the extent symbols of their axes.
    pub operands: &'static [(&'static str, &'static str)],
}

impl IdentityInfo {
    /// Extent symbols in order of first appearance.
    pub fn symbols(&self) -> Vec<char> {
        let mut out = vec![];
        for c in self.operands.iter().flat_map(|(_, s)| s.chars()) {
            if !out.contains(&c) {
                out.push(c);
            }
        }
        out
    }
}

pub const CATALOG: [IdentityInfo; 15] = [
    IdentityInfo {
        name: "mixed-product",
        statement: "(AB)⊗(CD) = (A⊗C)(B⊗D)",
        operands: &[("A", "IJ"), ("B", "JK"), ("C", "LM"), ("D", "MN")],
    },
    IdentityInfo {
        name: "kr-hadamard-bisym",
        statement: "(A⊙B)∘(C⊙D) = (A∘C)⊙(B∘D)",
        operands: &[("A", "IJ"), ("B", "KJ"), ("C", "IJ"), ("D", "KJ")],
    },
    IdentityInfo {
        name: "kron-hadamard-bisym",
        statement: "(A⊗B)∘(C⊗D) = (A∘C)⊗(B∘D)",
        operands: &[("A", "IJ"), ("B", "KL"), ("C", "IJ"), ("D", "KL")],
    },
    IdentityInfo {
        name: "tracy-singh-mixed",
        statement: "(A⋆B)(C⋆D) = (AC)⋆(BD)",
        operands: &[("A", "IJKL"), ("B", "PQRS"), ("C", "JXLY"), ("D", "QZSW")],
    },
    IdentityInfo {
        name: "kr-transpose",
        statement: "(A⊙B)ᵀ(C⊙D) = AᵀC ∘ BᵀD",
        operands: &[("A", "IJ"), ("B", "KJ"), ("C", "IL"), ("D", "KL")],
    },
    IdentityInfo {
        name: "kron-factor",
        statement: "A⊗B = (A⊗𝟙)(𝟙⊗B)",
        operands: &[("A", "IJ"), ("B", "KL")],
    },
    IdentityInfo {
        name: "kron-trace",
        statement: "Tr(A⊗B) = Tr(A)Tr(B)",
        operands: &[("A", "II"), ("B", "KK")],
    },
    IdentityInfo {
        name: "kron-transpose",
        statement: "(A⊗B)ᵀ = Aᵀ⊗Bᵀ",
        operands: &[("A", "IJ"), ("B", "KL")],
    },
    IdentityInfo {
        name: "vec-triple",
        statement: "col(ABC) = (Cᵀ⊗A)col(B)",
        operands: &[("A", "IJ"), ("B", "JK"), ("C", "KL")],
    },
    IdentityInfo {
        name: "vec-triple-diag",
        statement: "col(ABC) = (Cᵀ⊙A)diag(B), B diagonal",
        operands: &[("A", "IJ"), ("B", "JK"), ("C", "KL")],
    },
    IdentityInfo {
        name: "new-tracy-singh",
        statement: "col(A⊗B)row(C⊗D) = (col(A)row(C))⋆(col(B)row(D))",
        operands: &[("A", "IJ"), ("B", "KL"), ("C", "PQ"), ("D", "RS")],
    },
    IdentityInfo {
        name: "new-hadamard",
        statement: "col(A∘B)row(C∘D) = (col(A)row(C))∘(col(B)row(D))",
        operands: &[("A", "IJ"), ("B", "IJ"), ("C", "PQ"), ("D", "PQ")],
    },
    IdentityInfo {
        name: "col-hadamard",
        statement: "col(A∘B) = col(A)∘col(B)",
        operands: &[("A", "IJ"), ("B", "IJ")],
    },
    IdentityInfo {
        name: "row-hadamard",
        statement: "row(C∘D) = row(C)∘row(D)",
        operands: &[("C", "IJ"), ("D", "IJ")],
    },
    IdentityInfo {
        name: "colrow-transpose",
        statement: "col(A)ᵀ = row(Aᵀ)",
        operands: &[("A", "IJ")],
    },
];

pub fn lookup(name: &str) -> Result<(usize, &'static IdentityInfo)> {
    CATALOG
        .iter()
        .enumerate()
        .find(|(_, info)| info.name == name)
        .ok_or_else(|| Error::UnknownIdentity(name.to_string()))
}

fn contract_error(info: &IdentityInfo, constraint: impl Into<String>) -> Error {
    Error::ShapeContract {
        identity: info.name.to_string(),
        constraint: constraint.into(),
    }
}

fn operand_shapes(info: &IdentityInfo, dims: &Dims) -> Result<Vec<Vec<usize>>> {
    for c in info.symbols() {
        match dims.get(&c) {
            None => return Err(contract_error(info, format!("extent {c} is not given"))),
            Some(0) => return Err(contract_error(info, format!("extent {c} must be at least 1"))),
            Some(_) => {}
        }
    }
    if info.name == "vec-triple-diag" && dims[&'J'] != dims[&'K'] {
        return Err(contract_error(info, "B must be diagonal, so J == K"));
    }
    Ok(info
        .operands
        .iter()
        .map(|(_, s)| s.chars().map(|c| dims[&c]).collect())
        .collect())
}

/// Reads the extent of every symbol off the operands, checking agreement.
fn bind_dims(info: &IdentityInfo, ops: &[Tensor]) -> Result<Dims> {
    if ops.len() != info.operands.len() {
        return Err(contract_error(
            info,
            format!("expects {} operands, got {}", info.operands.len(), ops.len()),
        ));
    }
    let mut dims = Dims::new();
    for ((name, symbols), t) in info.operands.iter().zip(ops) {
        if t.rank() != symbols.len() {
            return Err(contract_error(info, format!("{name} must have rank {}", symbols.len())));
        }
        for (c, &e) in symbols.chars().zip(t.shape()) {
            match dims.insert(c, e) {
                Some(prev) if prev != e => {
                    return Err(contract_error(
                        info,
                        format!("{c} is {prev} in one operand and {e} in {name}"),
                    ))
                }
                _ => {}
            }
        }
    }
    Ok(dims)
}

/// Seeded operands for `info` at `dims`.
pub fn random_operands(info: &IdentityInfo, dims: &Dims, seed: u64) -> Result<Vec<Tensor>> {
    let shapes = operand_shapes(info, dims)?;
    let mut r = rng(seed);
    Ok(shapes
        .iter()
        .enumerate()
        .map(|(k, shape)| {
            if info.name == "vec-triple-diag" && k == 1 {
                diag_embed(&complex_tensor(&mut r, &shape[..1])).unwrap()
            } else {
                complex_tensor(&mut r, shape)
            }
        })
        .collect())
}

/// `f(g(A,B), g(C,D))` and `g(f(A,C), f(B,D))`.
pub fn bisymmetry<F, G>(f: F, g: G, a: &Tensor, b: &Tensor, c: &Tensor, d: &Tensor) -> Result<(Tensor, Tensor)>
where
    F: Fn(&Tensor, &Tensor) -> Result<Tensor>,
    G: Fn(&Tensor, &Tensor) -> Result<Tensor>,
{
    Ok((f(&g(a, b)?, &g(c, d)?)?, g(&f(a, c)?, &f(b, d)?)?))
}

fn col_vector(v: &Tensor) -> Result<Tensor> {
    v.reshape(vec![v.len(), 1])
}

fn row_vector(v: &Tensor) -> Result<Tensor> {
    v.reshape(vec![1, v.len()])
}

/// `col(x) row(y)` as a matrix.
fn col_row(x: &Tensor, y: &Tensor) -> Result<Tensor> {
    products::dot(&col_vector(&x.vectorize_col()?)?, &row_vector(&y.vectorize_row()?)?)
}

fn block_dot(a: &Tensor, c: &Tensor) -> Result<Tensor> {
    einsum_eval(&IndexSpec::parse("ijkl,jxly->ixky")?, &[a, c])
}

fn matvec(m: &Tensor, v: &Tensor) -> Result<Tensor> {
    let out = products::dot(m, &col_vector(v)?)?;
    out.reshape(vec![out.len()])
}

fn is_diagonal(b: &Tensor) -> bool {
    diag_embed(&diag_extract(b).unwrap()).unwrap() == *b
}

/// Both sides of identity `name` on explicit operands.
pub fn evaluate_sides(name: &str, ops: &[Tensor]) -> Result<(Tensor, Tensor)> {
    use products::{dot, hadamard, khatri_rao_col, khatri_rao_col_with, kronecker, kronecker_with, tracy_singh};
    let (index, info) = lookup(name)?;
    let dims = bind_dims(info, ops)?;
    let t = |x: &Tensor| x.t();
    let e = |c: char| dims[&c];
    Ok(match index {
        0 => {
            let [a, b, c, d] = ops else { unreachable!() };
            (kronecker(&dot(a, b)?, &dot(c, d)?)?, dot(&kronecker(a, c)?, &kronecker(b, d)?)?)
        }
        1 => {
            let [a, b, c, d] = ops else { unreachable!() };
            bisymmetry(hadamard, khatri_rao_col, a, b, c, d)?
        }
        2 => {
            let [a, b, c, d] = ops else { unreachable!() };
            bisymmetry(hadamard, kronecker, a, b, c, d)?
        }
        3 => {
            let [a, b, c, d] = ops else { unreachable!() };
            (
                dot(&tracy_singh(a, b)?, &tracy_singh(c, d)?)?,
                tracy_singh(&block_dot(a, c)?, &block_dot(b, d)?)?,
            )
        }
        4 => {
            let [a, b, c, d] = ops else { unreachable!() };
            (
                dot(&t(&khatri_rao_col(a, b)?)?, &khatri_rao_col(c, d)?)?,
                hadamard(&dot(&t(a)?, c)?, &dot(&t(b)?, d)?)?,
            )
        }
        5 => {
            let [a, b] = ops else { unreachable!() };
            let left = kronecker(a, &Tensor::identity(e('K'))?)?;
            let right = kronecker(&Tensor::identity(e('J'))?, b)?;
            (kronecker(a, b)?, dot(&left, &right)?)
        }
        6 => {
            let [a, b] = ops else { unreachable!() };
            (trace(&kronecker(a, b)?)?, hadamard(&trace(a)?, &trace(b)?)?)
        }
        7 => {
            let [a, b] = ops else { unreachable!() };
            (t(&kronecker(a, b)?)?, kronecker(&t(a)?, &t(b)?)?)
        }
        8 => {
            let [a, b, c] = ops else { unreachable!() };
            let lhs = dot(&dot(a, b)?, c)?.vectorize_col()?;
            let m = kronecker_with(&t(c)?, a, KronLayout::Textbook)?;
            (lhs, matvec(&m, &b.vectorize_col()?)?)
        }
        9 => {
            let [a, b, c] = ops else { unreachable!() };
            if !is_diagonal(b) {
                return Err(contract_error(info, "B must be diagonal"));
            }
            let lhs = dot(&dot(a, b)?, c)?.vectorize_col()?;
            let m = khatri_rao_col_with(&t(c)?, a, KronLayout::Textbook)?;
            (lhs, matvec(&m, &diag_extract(b)?)?)
        }
        10 => {
            let [a, b, c, d] = ops else { unreachable!() };
            let lhs = col_row(&kronecker(a, b)?, &kronecker(c, d)?)?;
            let x = blockify(&col_row(a, c)?, [e('I'), e('J')], [e('Q'), e('P')])?;
            let y = blockify(&col_row(b, d)?, [e('K'), e('L')], [e('S'), e('R')])?;
            (lhs, tracy_singh(&x, &y)?)
        }
        11 => {
            let [a, b, c, d] = ops else { unreachable!() };
            (
                col_row(&hadamard(a, b)?, &hadamard(c, d)?)?,
                hadamard(&col_row(a, c)?, &col_row(b, d)?)?,
            )
        }
        12 => {
            let [a, b] = ops else { unreachable!() };
            (
                hadamard(a, b)?.vectorize_col()?,
                hadamard(&a.vectorize_col()?, &b.vectorize_col()?)?,
            )
        }
        13 => {
            let [c, d] = ops else { unreachable!() };
            (
                hadamard(c, d)?.vectorize_row()?,
                hadamard(&c.vectorize_row()?, &d.vectorize_row()?)?,
            )
        }
        14 => {
            let [a] = ops else { unreachable!() };
            (t(&col_vector(&a.vectorize_col()?)?)?, row_vector(&t(a)?.vectorize_row()?)?)
        }
        _ => unreachable!(),
    })
}

/// Both sides built as diagrams over the same seeded operands.
pub fn diagram_sides(name: &str, dims: &Dims, seed: u64) -> Result<(Diagram, Diagram)> {
    let (index, info) = lookup(name)?;
    let ops = random_operands(info, dims, seed)?;
    let e = |c: char| dims[&c];
    let side = |lhs: bool| -> Result<Diagram> {
        let mut b = DiagramBuilder::new();
        let mut w: Vec<Wires> = info
            .operands
            .iter()
            .zip(&ops)
            .map(|((n, _), t)| b.tensor(n, t.clone()))
            .collect();
        let mut take = |k: usize| std::mem::replace(&mut w[k], Wires(vec![]));
        let g = KronLayout::Gamma;
        let out = match (index, lhs) {
            (0, true) => {
                let (x, y) = (b.dot(take(0), take(1))?, b.dot(take(2), take(3))?);
                b.kron(x, y, g)?
            }
            (0, false) => {
                let (x, y) = (b.kron(take(0), take(2), g)?, b.kron(take(1), take(3), g)?);
                b.dot(x, y)?
            }
            (1, true) => {
                let (x, y) = (b.khatri_rao_col(take(0), take(1), g)?, b.khatri_rao_col(take(2), take(3), g)?);
                b.hadamard(x, y)?
            }
            (1, false) => {
                let (x, y) = (b.hadamard(take(0), take(2))?, b.hadamard(take(1), take(3))?);
                b.khatri_rao_col(x, y, g)?
            }
            (2, true) => {
                let (x, y) = (b.kron(take(0), take(1), g)?, b.kron(take(2), take(3), g)?);
                b.hadamard(x, y)?
            }
            (2, false) => {
                let (x, y) = (b.hadamard(take(0), take(2))?, b.hadamard(take(1), take(3))?);
                b.kron(x, y, g)?
            }
            (3, true) => {
                let (x, y) = (b.tracy_singh(take(0), take(1))?, b.tracy_singh(take(2), take(3))?);
                b.dot(x, y)?
            }
            (3, false) => {
                let (x, y) = (b.block_dot(take(0), take(2))?, b.block_dot(take(1), take(3))?);
                b.tracy_singh(x, y)?
            }
            (4, true) => {
                let x = b.khatri_rao_col(take(0), take(1), g)?;
                let x = b.transpose(x, &[1, 0])?;
                let y = b.khatri_rao_col(take(2), take(3), g)?;
                b.dot(x, y)?
            }
            (4, false) => {
                let at = b.transpose(take(0), &[1, 0])?;
                let bt = b.transpose(take(1), &[1, 0])?;
                let (x, y) = (b.dot(at, take(2))?, b.dot(bt, take(3))?);
                b.hadamard(x, y)?
            }
            (5, true) => b.kron(take(0), take(1), g)?,
            (5, false) => {
                let ik = b.identity(e('K'));
                let ij = b.identity(e('J'));
                let (x, y) = (b.kron(take(0), ik, g)?, b.kron(ij, take(1), g)?);
                b.dot(x, y)?
            }
            (6, true) => {
                let x = b.kron(take(0), take(1), g)?;
                b.trace(x)?
            }
            (6, false) => {
                let (x, y) = (b.trace(take(0))?, b.trace(take(1))?);
                b.outer(x, y)
            }
            (7, true) => {
                let x = b.kron(take(0), take(1), g)?;
                b.transpose(x, &[1, 0])?
            }
            (7, false) => {
                let at = b.transpose(take(0), &[1, 0])?;
                let bt = b.transpose(take(1), &[1, 0])?;
                b.kron(at, bt, g)?
            }
            (8 | 9, true) => {
                let ab = b.dot(take(0), take(1))?;
                let abc = b.dot(ab, take(2))?;
                b.col(abc)?
            }
            (8, false) => {
                let ct = b.transpose(take(2), &[1, 0])?;
                let m = b.kron(ct, take(0), KronLayout::Textbook)?;
                let v = b.col(take(1))?;
                b.contract(m, 1, v, 0)
            }
            (9, false) => {
                let ct = b.transpose(take(2), &[1, 0])?;
                let m = b.khatri_rao_col(ct, take(0), KronLayout::Textbook)?;
                let v = b.diag(take(1))?;
                b.contract(m, 1, v, 0)
            }
            (10, true) => {
                let (x, y) = (b.kron(take(0), take(1), g)?, b.kron(take(2), take(3), g)?);
                let (u, v) = (b.col(x)?, b.row(y)?);
                b.outer(u, v)
            }
            (10, false) => {
                let (ca, rc) = (b.col(take(0))?, b.row(take(2))?);
                let x = b.outer(ca, rc);
                let x = b.blockify(x, [e('I'), e('J')], [e('Q'), e('P')])?;
                let (cb, rd) = (b.col(take(1))?, b.row(take(3))?);
                let y = b.outer(cb, rd);
                let y = b.blockify(y, [e('K'), e('L')], [e('S'), e('R')])?;
                b.tracy_singh(x, y)?
            }
            (11, true) => {
                let (x, y) = (b.hadamard(take(0), take(1))?, b.hadamard(take(2), take(3))?);
                let (u, v) = (b.col(x)?, b.row(y)?);
                b.outer(u, v)
            }
            (11, false) => {
                let (ca, rc) = (b.col(take(0))?, b.row(take(2))?);
                let x = b.outer(ca, rc);
                let (cb, rd) = (b.col(take(1))?, b.row(take(3))?);
                let y = b.outer(cb, rd);
                b.hadamard(x, y)?
            }
            (12, true) => {
                let x = b.hadamard(take(0), take(1))?;
                b.col(x)?
            }
            (12, false) => {
                let (x, y) = (b.col(take(0))?, b.col(take(1))?);
                b.hadamard(x, y)?
            }
            (13, true) => {
                let x = b.hadamard(take(0), take(1))?;
                b.row(x)?
            }
            (13, false) => {
                let (x, y) = (b.row(take(0))?, b.row(take(1))?);
                b.hadamard(x, y)?
            }
            (14, true) => b.col(take(0))?,
            (14, false) => {
                let at = b.transpose(take(0), &[1, 0])?;
                b.row(at)?
            }
            _ => unreachable!(),
        };
        b.finish(out)
    };
    Ok((side(true)?, side(false)?))
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCase {
    pub name: String,
    pub dims: Dims,
    pub seed: u64,
    pub residual: f64,
}

impl IdentityCase {
    pub fn passed(&self, tolerance: f64) -> bool {
        self.residual < tolerance
    }
}

#[derive(Clone, Debug, Default)]
pub struct CheckOptions {
    /// Name of an identity whose right-hand side is deliberately perturbed,
    /// to exercise failure reporting.
    pub inject_fault: Option<String>,
}

pub fn residual(lhs: &Tensor, rhs: &Tensor) -> Result<f64> {
    lhs.rel_residual(rhs)
}

pub fn check(name: &str, dims: &Dims, seed: u64) -> Result<IdentityCase> {
    check_with(name, dims, seed, &CheckOptions::default())
}

pub fn check_with(name: &str, dims: &Dims, seed: u64, opts: &CheckOptions) -> Result<IdentityCase> {
    let (_, info) = lookup(name)?;
    let ops = random_operands(info, dims, seed)?;
    let (lhs, mut rhs) = evaluate_sides(name, &ops)?;
    if opts.inject_fault.as_deref() == Some(name) {
        let bump = 1e-3 * (1.0 + rhs.max_abs());
        let mut delta = vec![0.0; rhs.len()];
        delta[0] = bump;
        rhs = rhs.add(&Tensor::from_real(rhs.shape().to_vec(), delta)?)?;
    }
    Ok(IdentityCase {
        name: name.to_string(),
        dims: dims
            .iter()
            .filter(|(c, _)| info.symbols().contains(c))
            .map(|(&c, &e)| (c, e))
            .collect(),
        seed,
        residual: residual(&lhs, &rhs)?,
    })
}

/// Range of extents drawn for every symbol.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    pub min_extent: usize,
    pub max_extent: usize,
}

impl Default for Profile {
    fn default() -> Self {
        Profile {
            min_extent: 2,
            max_extent: 5,
        }
    }
}

/// Extents for one trial of identity `info`.
pub fn random_dims(info: &IdentityInfo, profile: Profile, seed: u64) -> Dims {
    use rand::Rng;
    let mut r = rng(seed);
    let mut dims: Dims = info
        .symbols()
        .into_iter()
        .map(|c| (c, r.gen_range(profile.min_extent..=profile.max_extent)))
        .collect();
    if info.name == "vec-triple-diag" {
        dims.insert('K', dims[&'J']);
    }
    dims
}

fn trial_seed(seed: u64, index: usize, trial: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(((index as u64) << 32) | trial as u64)
}

/// Runs every identity `trials` times and keeps the worst case of each, in
/// catalog order. Zero trials give an empty report.
pub fn check_all(profile: Profile, trials: usize, seed: u64, opts: &CheckOptions) -> Result<Vec<IdentityCase>> {
    if profile.min_extent == 0 || profile.min_extent > profile.max_extent {
        return Err(Error::InvalidParameter(format!(
            "extent range {}..={} is empty or contains 0",
            profile.min_extent, profile.max_extent
        )));
    }
    if trials == 0 {
        return Ok(vec![]);
    }
    CATALOG
        .iter()
        .enumerate()
        .map(|(index, info)| {
            let mut worst: Option<IdentityCase> = None;
            for trial in 0..trials {
                let s = trial_seed(seed, index, trial);
                let case = check_with(info.name, &random_dims(info, profile, s), s, opts)?;
                if worst.as_ref().is_none_or(|w| case.residual > w.residual) {
                    worst = Some(case);
                }
            }
            Ok(worst.unwrap())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dims(pairs: &[(char, usize)]) -> Dims {
        pairs.iter().copied().collect()
    }

    #[test]
    fn catalog_names_are_unique() {
        for (k, a) in CATALOG.iter().enumerate() {
            assert!(CATALOG[k + 1..].iter().all(|b| b.name != a.name));
        }
    }

    #[test]
    fn mixed_product_on_identities_is_exact() {
        let i2 = Tensor::identity(2).unwrap();
        let ops = vec![i2.clone(), i2.clone(), i2.clone(), i2];
        let (l, r) = evaluate_sides("mixed-product", &ops).unwrap();
        assert_eq!(residual(&l, &r).unwrap(), 0.0);
    }

    #[test]
    fn contract_violations() {
        assert!(matches!(check("no-such", &Dims::new(), 0), Err(Error::UnknownIdentity(_))));
        let d = dims(&[('I', 2), ('J', 2), ('K', 3), ('L', 2)]);
        assert!(matches!(check("vec-triple-diag", &d, 0), Err(Error::ShapeContract { .. })));
        assert!(matches!(check("kron-trace", &dims(&[('I', 2)]), 0), Err(Error::ShapeContract { .. })));
        let full = Tensor::from_real(vec![2, 2], vec![1., 2., 3., 4.]).unwrap();
        let ops = vec![full.clone(), full.clone(), full];
        assert!(matches!(
            evaluate_sides("vec-triple-diag", &ops),
            Err(Error::ShapeContract { .. })
        ));
    }

    #[test]
    fn empty_and_scalar_profiles() {
        assert!(check_all(Profile::default(), 0, 1, &CheckOptions::default()).unwrap().is_empty());
        let ones = Profile {
            min_extent: 1,
            max_extent: 1,
        };
        let cases = check_all(ones, 1, 7, &CheckOptions::default()).unwrap();
        assert_eq!(cases.len(), CATALOG.len());
        assert!(cases.iter().all(|c| c.passed(1e-15)), "{cases:?}");
    }

    #[test]
    fn injected_fault_is_reported() {
        let opts = CheckOptions {
            inject_fault: Some("kron-transpose".into()),
        };
        let cases = check_all(Profile::default(), 2, 3, &opts).unwrap();
        for c in &cases {
            assert_eq!(c.passed(1e-10), c.name != "kron-transpose", "{c:?}");
        }
    }
}
