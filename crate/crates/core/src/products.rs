//! Matrix products: dot, tensor, Kronecker, Hadamard, Khatri-Rao and
//! Tracy-Singh.
//!
//! Every product has a direct kernel here and a reference implementation in
//! [`mediated`] that contracts the operands with dense δ/γ tensors.
//!
//! Flattened indices follow the γ convention: the first-listed index varies
//! fastest, so `kronecker` places `a[i,j] b[k,l]` at `(i + k*I, j + l*J)`.
//! [`KronLayout::Textbook`] gives the usual `(i*K + k, j*L + l)` layout.

use crate::error::{Error, Result};
use crate::tensor::{Pair, Scalar, Tensor};

/// Serialization of a pair of indices into one flat index.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash)]
pub enum KronLayout {
    /// `m = i + k*I`: left operand's index fastest.
    #[default]
    Gamma,
    /// `m = i*K + k`: right operand's index fastest.
    Textbook,
}

impl KronLayout {
    fn flat(self, i: usize, k: usize, ei: usize, ek: usize) -> usize {
        match self {
            KronLayout::Gamma => i + k * ei,
            KronLayout::Textbook => i * ek + k,
        }
    }
}

/// Runs `$body` with `$x`, `$y` bound to slices of a common scalar type.
macro_rules! with_pair {
    ($a:expr, $b:expr, |$x:ident, $y:ident| $body:expr) => {
        match Tensor::pair($a, $b) {
            Pair::Real($x, $y) => $body,
            Pair::Complex(x, y) => {
                let $x: &[num_complex::Complex64] = &x;
                let $y: &[num_complex::Complex64] = &y;
                $body
            }
        }
    };
}

pub(crate) fn matrix_dims(t: &Tensor) -> Result<(usize, usize)> {
    match t.shape() {
        &[r, c] => Ok((r, c)),
        _ => Err(Error::RankMismatch {
            expected: 2,
            got: t.rank(),
        }),
    }
}

pub fn dot(a: &Tensor, b: &Tensor) -> Result<Tensor> {
    let (ni, nj) = matrix_dims(a)?;
    let (nj2, nk) = matrix_dims(b)?;
    if nj != nj2 {
        return Err(Error::InnerExtentMismatch { left: nj, right: nj2 });
    }
    Ok(with_pair!(a, b, |x, y| Tensor::from_parts_unchecked(
        vec![ni, nk],
        matmul(x, y, ni, nj, nk)
    )))
}

fn matmul<T: Scalar>(a: &[T], b: &[T], ni: usize, nj: usize, nk: usize) -> Vec<T> {
    let mut out = vec![T::zero(); ni * nk];
    for i in 0..ni {
        let row = &mut out[i * nk..(i + 1) * nk];
        for j in 0..nj {
            let aij = a[i * nj + j];
            for (o, &bjk) in row.iter_mut().zip(&b[j * nk..(j + 1) * nk]) {
                *o += aij * bjk;
            }
        }
    }
    out
}

/// `out[i,j,k,l] = a[i,j] b[k,l]`.
pub fn tensor_product(a: &Tensor, b: &Tensor) -> Result<Tensor> {
    matrix_dims(a)?;
    matrix_dims(b)?;
    let shape = [a.shape(), b.shape()].concat();
    // the row-major outer product of the two buffers is exactly this layout
    Ok(with_pair!(a, b, |x, y| Tensor::from_parts_unchecked(
        shape,
        x.iter().flat_map(|&u| y.iter().map(move |&v| u * v)).collect::<Vec<_>>()
    )))
}

pub fn kronecker(a: &Tensor, b: &Tensor) -> Result<Tensor> {
    kronecker_with(a, b, KronLayout::Gamma)
}

/// Kronecker product written straight into the output buffer.
pub fn kronecker_with(a: &Tensor, b: &Tensor, layout: KronLayout) -> Result<Tensor> {
    let (ni, nj) = matrix_dims(a)?;
    let (nk, nl) = matrix_dims(b)?;
    let shape = vec![ni * nk, nj * nl];
    if shape.iter().try_fold(1usize, |acc, &e| acc.checked_mul(e)).is_none() {
        return Err(Error::InvalidShape {
            shape,
            reason: "element count overflows".into(),
        });
    }
    Ok(with_pair!(a, b, |x, y| Tensor::from_parts_unchecked(
        shape,
        kron_kernel(x, y, [ni, nj, nk, nl], layout)
    )))
}

fn kron_kernel<T: Scalar>(a: &[T], b: &[T], dims: [usize; 4], layout: KronLayout) -> Vec<T> {
    let [ni, nj, nk, nl] = dims;
    let mut out = Vec::with_capacity(ni * nj * nk * nl);
    match layout {
        KronLayout::Gamma => {
            // row m = i + k*I, column n = j + l*J
            for k in 0..nk {
                let b_row = &b[k * nl..(k + 1) * nl];
                for i in 0..ni {
                    let a_row = &a[i * nj..(i + 1) * nj];
                    for &bkl in b_row {
                        out.extend(a_row.iter().map(|&aij| aij * bkl));
                    }
                }
            }
        }
        KronLayout::Textbook => {
            for i in 0..ni {
                let a_row = &a[i * nj..(i + 1) * nj];
                for k in 0..nk {
                    let b_row = &b[k * nl..(k + 1) * nl];
                    for &aij in a_row {
                        out.extend(b_row.iter().map(|&bkl| aij * bkl));
                    }
                }
            }
        }
    }
    out
}

/// Entrywise product of two tensors of identical shape, any rank.
pub fn hadamard(a: &Tensor, b: &Tensor) -> Result<Tensor> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch {
            left: a.shape().to_vec(),
            right: b.shape().to_vec(),
        });
    }
    let shape = a.shape().to_vec();
    Ok(with_pair!(a, b, |x, y| Tensor::from_parts_unchecked(
        shape,
        x.iter().zip(y).map(|(&u, &v)| u * v).collect::<Vec<_>>()
    )))
}

pub fn khatri_rao_col(a: &Tensor, b: &Tensor) -> Result<Tensor> {
    khatri_rao_col_with(a, b, KronLayout::Gamma)
}

/// Column-wise Kronecker product: `out[i + k*I, n] = a[i,n] b[k,n]`.
pub fn khatri_rao_col_with(a: &Tensor, b: &Tensor, layout: KronLayout) -> Result<Tensor> {
    let (ni, nj) = matrix_dims(a)?;
    let (nk, nj2) = matrix_dims(b)?;
    if nj != nj2 {
        return Err(Error::ShapeMismatch {
            left: a.shape().to_vec(),
            right: b.shape().to_vec(),
        });
    }
    Ok(with_pair!(a, b, |x, y| {
        let mut out = vec![x[0] * y[0]; ni * nk * nj];
        for i in 0..ni {
            for k in 0..nk {
                let m = layout.flat(i, k, ni, nk);
                for n in 0..nj {
                    out[m * nj + n] = x[i * nj + n] * y[k * nj + n];
                }
            }
        }
        Tensor::from_parts_unchecked(vec![ni * nk, nj], out)
    }))
}

pub fn khatri_rao_row(a: &Tensor, b: &Tensor) -> Result<Tensor> {
    khatri_rao_row_with(a, b, KronLayout::Gamma)
}

/// Row-wise Kronecker product: `out[i, j + l*J] = a[i,j] b[i,l]`.
pub fn khatri_rao_row_with(a: &Tensor, b: &Tensor, layout: KronLayout) -> Result<Tensor> {
    let (ni, nj) = matrix_dims(a)?;
    let (ni2, nl) = matrix_dims(b)?;
    if ni != ni2 {
        return Err(Error::ShapeMismatch {
            left: a.shape().to_vec(),
            right: b.shape().to_vec(),
        });
    }
    Ok(with_pair!(a, b, |x, y| {
        let w = nj * nl;
        let mut out = vec![x[0] * y[0]; ni * w];
        for i in 0..ni {
            for j in 0..nj {
                for l in 0..nl {
                    out[i * w + layout.flat(j, l, nj, nl)] = x[i * nj + j] * y[i * nl + l];
                }
            }
        }
        Tensor::from_parts_unchecked(vec![ni, w], out)
    }))
}

fn rank4_dims(t: &Tensor) -> Result<[usize; 4]> {
    match t.shape() {
        &[i, j, k, l] => Ok([i, j, k, l]),
        _ => Err(Error::RankMismatch {
            expected: 4,
            got: t.rank(),
        }),
    }
}

/// Block-wise double Kronecker product of rank-4 tensors `a[i,j,k,l]` and
/// `b[p,q,r,s]` (outer indices `i,j` / `p,q`, inner `k,l` / `r,s`):
/// row `i + p*I + k*I*P + r*I*P*K`, column `j + q*J + l*J*Q + s*J*Q*L`.
pub fn tracy_singh(a: &Tensor, b: &Tensor) -> Result<Tensor> {
    let [ni, nj, nk, nl] = rank4_dims(a)?;
    let [np, nq, nr, ns] = rank4_dims(b)?;
    let rows = ni * np * nk * nr;
    let cols = nj * nq * nl * ns;
    Ok(with_pair!(a, b, |x, y| {
        let mut out = vec![x[0] * y[0]; rows * cols];
        let mut ai = 0;
        for i in 0..ni {
            for j in 0..nj {
                for k in 0..nk {
                    for l in 0..nl {
                        let av = x[ai];
                        ai += 1;
                        let m0 = i + k * ni * np;
                        let n0 = j + l * nj * nq;
                        let mut bi = 0;
                        for p in 0..np {
                            for q in 0..nq {
                                for r in 0..nr {
                                    for s in 0..ns {
                                        let m = m0 + p * ni + r * ni * np * nk;
                                        let n = n0 + q * nj + s * nj * nq * nl;
                                        out[m * cols + n] = av * y[bi];
                                        bi += 1;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Tensor::from_parts_unchecked(vec![rows, cols], out)
    }))
}

/// Views a matrix as a rank-4 block tensor `t[a,b,c,d] = m[a + c*Ro, b + d*Co]`
/// with `rows = [Ro, Ri]` and `cols = [Co, Ci]` (outer extent first, outer
/// index fastest in the flat index).
pub fn blockify(m: &Tensor, rows: [usize; 2], cols: [usize; 2]) -> Result<Tensor> {
    let (nr, nc) = matrix_dims(m)?;
    if rows[0] * rows[1] != nr || cols[0] * cols[1] != nc {
        return Err(Error::InvalidShape {
            shape: m.shape().to_vec(),
            reason: format!("cannot split into row blocks {rows:?} and column blocks {cols:?}"),
        });
    }
    // reshape to [Ri, Ro, Ci, Co] in row-major order, then reorder axes
    m.reshape(vec![rows[1], rows[0], cols[1], cols[0]])?.transpose(&[1, 3, 0, 2])
}

/// Reference implementations: contractions with dense mediators.
pub mod mediated {
    use super::{matrix_dims, rank4_dims, KronLayout};
    use crate::einsum::{einsum_eval, IndexSpec};
    use crate::error::{Error, Result};
    use crate::mediators::{delta_dense, gamma_dense, DeltaSpec, GammaSpec};
    use crate::tensor::Tensor;

    fn eval(spec: &str, operands: &[&Tensor]) -> Result<Tensor> {
        einsum_eval(&IndexSpec::parse(spec)?, operands)
    }

    fn delta3(d: usize) -> Result<Tensor> {
        delta_dense(DeltaSpec::new(3, d)?)
    }

    fn gamma(dims: &[usize]) -> Result<Tensor> {
        gamma_dense(&GammaSpec::new(dims.to_vec())?)
    }

    /// γ joining `(x, y)` into a flat index, with the layout deciding which is
    /// listed first. Returns the tensor and its labels.
    fn gamma_pair(x: (char, usize), y: (char, usize), flat: char, layout: KronLayout) -> Result<(Tensor, String)> {
        let (first, second) = match layout {
            KronLayout::Gamma => (x, y),
            KronLayout::Textbook => (y, x),
        };
        Ok((
            gamma(&[first.1, second.1])?,
            format!("{}{}{}", first.0, second.0, flat),
        ))
    }

    pub fn dot(a: &Tensor, b: &Tensor) -> Result<Tensor> {
        eval("ij,jk->ik", &[a, b])
    }

    pub fn tensor_product(a: &Tensor, b: &Tensor) -> Result<Tensor> {
        matrix_dims(a)?;
        matrix_dims(b)?;
        eval("ij,kl->ijkl", &[a, b])
    }

    pub fn kronecker(a: &Tensor, b: &Tensor) -> Result<Tensor> {
        kronecker_with(a, b, KronLayout::Gamma)
    }

    /// `a[i,j] b[k,l] γ[ik,m] γ[jl,n]`.
    pub fn kronecker_with(a: &Tensor, b: &Tensor, layout: KronLayout) -> Result<Tensor> {
        let (ni, nj) = matrix_dims(a)?;
        let (nk, nl) = matrix_dims(b)?;
        let t = tensor_product(a, b)?;
        let (g_rows, lr) = gamma_pair(('i', ni), ('k', nk), 'm', layout)?;
        let (g_cols, lc) = gamma_pair(('j', nj), ('l', nl), 'n', layout)?;
        eval(&format!("ijkl,{lr},{lc}->mn"), &[&t, &g_rows, &g_cols])
    }

    /// One rank-3 δ per axis: `a[i..] b[k..] δ[i,k,m] ...`.
    pub fn hadamard(a: &Tensor, b: &Tensor) -> Result<Tensor> {
        if a.shape() != b.shape() {
            return Err(Error::ShapeMismatch {
                left: a.shape().to_vec(),
                right: b.shape().to_vec(),
            });
        }
        let rank = a.rank();
        if rank > 17 {
            return Err(Error::InvalidParameter(format!("rank {rank} exceeds the label alphabet")));
        }
        let label = |k: usize| {
            let k = k as u8;
            (if k < 26 { b'a' + k } else { b'A' + k - 26 }) as char
        };
        let la: String = (0..rank).map(|k| label(3 * k)).collect();
        let lb: String = (0..rank).map(|k| label(3 * k + 1)).collect();
        let out: String = (0..rank).map(|k| label(3 * k + 2)).collect();
        let deltas = a.shape().iter().map(|&d| delta3(d)).collect::<Result<Vec<_>>>()?;
        let mut spec = format!("{la},{lb}");
        for k in 0..rank {
            spec.push(',');
            spec.extend([label(3 * k), label(3 * k + 1), label(3 * k + 2)]);
        }
        spec.push_str("->");
        spec.push_str(&out);
        let mut operands = vec![a, b];
        operands.extend(deltas.iter());
        eval(&spec, &operands)
    }

    pub fn khatri_rao_col(a: &Tensor, b: &Tensor) -> Result<Tensor> {
        khatri_rao_col_with(a, b, KronLayout::Gamma)
    }

    /// `a[i,j] b[k,l] γ[ik,m] δ[j,l,n]`.
    pub fn khatri_rao_col_with(a: &Tensor, b: &Tensor, layout: KronLayout) -> Result<Tensor> {
        let (ni, nj) = matrix_dims(a)?;
        let (nk, nl) = matrix_dims(b)?;
        if nj != nl {
            return Err(Error::ShapeMismatch {
                left: a.shape().to_vec(),
                right: b.shape().to_vec(),
            });
        }
        let (g, lg) = gamma_pair(('i', ni), ('k', nk), 'm', layout)?;
        let d = delta3(nj)?;
        eval(&format!("ij,kl,{lg},jln->mn"), &[a, b, &g, &d])
    }

    pub fn khatri_rao_row(a: &Tensor, b: &Tensor) -> Result<Tensor> {
        khatri_rao_row_with(a, b, KronLayout::Gamma)
    }

    /// `a[i,j] b[k,l] δ[i,k,m] γ[jl,n]`.
    pub fn khatri_rao_row_with(a: &Tensor, b: &Tensor, layout: KronLayout) -> Result<Tensor> {
        let (ni, nj) = matrix_dims(a)?;
        let (nk, nl) = matrix_dims(b)?;
        if ni != nk {
            return Err(Error::ShapeMismatch {
                left: a.shape().to_vec(),
                right: b.shape().to_vec(),
            });
        }
        let d = delta3(ni)?;
        let (g, lg) = gamma_pair(('j', nj), ('l', nl), 'n', layout)?;
        eval(&format!("ij,kl,ikm,{lg}->mn"), &[a, b, &d, &g])
    }

    /// `a[i,j,k,l] b[p,q,r,s] γ[ipkr,m] γ[jqls,n]`.
    pub fn tracy_singh(a: &Tensor, b: &Tensor) -> Result<Tensor> {
        let [ni, nj, nk, nl] = rank4_dims(a)?;
        let [np, nq, nr, ns] = rank4_dims(b)?;
        let g_rows = gamma(&[ni, np, nk, nr])?;
        let g_cols = gamma(&[nj, nq, nl, ns])?;
        eval("ijkl,pqrs,ipkrm,jqlsn->mn", &[a, b, &g_rows, &g_cols])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: usize, cols: usize, v: &[f64]) -> Tensor {
        Tensor::from_real(vec![rows, cols], v.to_vec()).unwrap()
    }

    #[test]
    fn dot_examples() {
        let b = m(2, 3, &[1., 2., 3., 4., 5., 6.]);
        assert_eq!(dot(&Tensor::identity(2).unwrap(), &b).unwrap(), b);
        let n = m(2, 2, &[0., 1., 0., 0.]);
        assert_eq!(dot(&n, &n).unwrap(), Tensor::zeros(vec![2, 2]).unwrap());
        assert!(matches!(
            dot(&b, &b),
            Err(Error::InnerExtentMismatch { left: 3, right: 2 })
        ));
    }

    #[test]
    fn kron_examples() {
        let i2 = Tensor::identity(2).unwrap();
        assert_eq!(kronecker(&i2, &i2).unwrap(), Tensor::identity(4).unwrap());
        let a = m(2, 1, &[1., 0.]);
        let b = m(2, 1, &[7., 9.]);
        // m = i + k*I interleaves a's entries within each entry of b
        assert_eq!(kronecker(&a, &b).unwrap().as_real().unwrap(), &[7., 0., 9., 0.]);
        assert_eq!(
            kronecker_with(&a, &b, KronLayout::Textbook).unwrap().as_real().unwrap(),
            &[7., 9., 0., 0.]
        );
    }

    #[test]
    fn khatri_rao_examples() {
        let a = m(2, 1, &[1., 2.]);
        let b = m(2, 1, &[3., 4.]);
        assert_eq!(khatri_rao_col(&a, &b).unwrap(), kronecker(&a, &b).unwrap());
        let ones = m(1, 3, &[1., 1., 1.]);
        let b = m(2, 3, &[1., 2., 3., 4., 5., 6.]);
        assert_eq!(khatri_rao_col(&ones, &b).unwrap(), b);
        let r1 = m(1, 2, &[1., 2.]);
        let r2 = m(1, 2, &[3., 4.]);
        assert_eq!(khatri_rao_row(&r1, &r2).unwrap(), kronecker(&r1, &r2).unwrap());
        assert!(khatri_rao_col(&r1, &b).is_err());
        assert!(khatri_rao_row(&r1, &b).is_err());
    }

    #[test]
    fn tracy_singh_degenerate() {
        let a = Tensor::from_real(vec![1, 1, 1, 1], vec![3.]).unwrap();
        let b = Tensor::from_real(vec![1, 1, 1, 1], vec![5.]).unwrap();
        assert_eq!(tracy_singh(&a, &b).unwrap().as_real().unwrap(), &[15.]);
        let inner_a = m(2, 3, &[1., 2., 3., 4., 5., 6.]);
        let inner_b = m(2, 2, &[1., -1., 2., 0.5]);
        let a4 = inner_a.reshape(vec![1, 1, 2, 3]).unwrap();
        let b4 = inner_b.reshape(vec![1, 1, 2, 2]).unwrap();
        assert_eq!(
            tracy_singh(&a4, &b4).unwrap(),
            kronecker(&inner_a, &inner_b).unwrap()
        );
        assert!(tracy_singh(&inner_a, &b4).is_err());
    }

    #[test]
    fn blockify_layout() {
        let mm = Tensor::from_fn_real(vec![6, 4], |ix| (10 * ix[0] + ix[1]) as f64).unwrap();
        let t = blockify(&mm, [2, 3], [2, 2]).unwrap();
        assert_eq!(t.shape(), &[2, 2, 3, 2]);
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..3 {
                    for d in 0..2 {
                        assert_eq!(t.get(&[a, b, c, d]), mm.get(&[a + 2 * c, b + 2 * d]));
                    }
                }
            }
        }
    }

    #[test]
    fn mediated_matches_direct_on_small_real_inputs() {
        let a = m(2, 3, &[1., 2., 3., 4., 5., 6.]);
        let b = m(3, 2, &[0., 1., 1., 0., 2., 2.]);
        assert_eq!(kronecker(&a, &b).unwrap(), mediated::kronecker(&a, &b).unwrap());
        assert_eq!(
            kronecker_with(&a, &b, KronLayout::Textbook).unwrap(),
            mediated::kronecker_with(&a, &b, KronLayout::Textbook).unwrap()
        );
        assert_eq!(hadamard(&a, &a).unwrap(), mediated::hadamard(&a, &a).unwrap());
        assert_eq!(dot(&a, &b).unwrap(), mediated::dot(&a, &b).unwrap());
    }
}
