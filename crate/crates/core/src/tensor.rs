//! Dense N-rank tensors over `f64` or `Complex64`.
//!
//! Storage is row-major: the last axis varies fastest. Vectorization in this
//! crate follows the opposite convention (first index fastest, `m = i + j*I`)
//! and is always computed with explicit index arithmetic, never by
//! reinterpreting the buffer.

use std::borrow::Cow;
use std::fmt::{self, Debug};
use std::ops::{Add, AddAssign, Mul};

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Scalar types a tensor buffer can hold.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Mul<Output = Self>
    + AddAssign
    + Send
    + Sync
    + 'static
{
    fn to_c64(self) -> Complex64;
    fn into_tensor(shape: Vec<usize>, data: Vec<Self>) -> Tensor;
}

impl Scalar for f64 {
    fn to_c64(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
    fn into_tensor(shape: Vec<usize>, data: Vec<Self>) -> Tensor {
        Tensor {
            shape,
            data: Data::Real(data),
        }
    }
}

impl Scalar for Complex64 {
    fn to_c64(self) -> Complex64 {
        self
    }
    fn into_tensor(shape: Vec<usize>, data: Vec<Self>) -> Tensor {
        Tensor {
            shape,
            data: Data::Complex(data),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum DType {
    F64,
    C64,
}

impl fmt::Display for DType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DType::F64 => "f64",
            DType::C64 => "c64",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Data {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

impl Data {
    pub fn len(&self) -> usize {
        match self {
            Data::Real(v) => v.len(),
            Data::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Two buffers brought to a common scalar type.
pub(crate) enum Pair<'a> {
    Real(&'a [f64], &'a [f64]),
    Complex(Cow<'a, [Complex64]>, Cow<'a, [Complex64]>),
}

/// A dense tensor. Immutable once built; every operation returns a new value.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor {
    shape: Vec<usize>,
    data: Data,
}

fn check_shape(shape: &[usize], len: usize) -> Result<()> {
    if shape.contains(&0) {
        return Err(Error::InvalidShape {
            shape: shape.to_vec(),
            reason: "every extent must be at least 1".into(),
        });
    }
    let n = checked_numel(shape).ok_or_else(|| Error::InvalidShape {
        shape: shape.to_vec(),
        reason: "element count overflows".into(),
    })?;
    if n != len {
        return Err(Error::InvalidShape {
            shape: shape.to_vec(),
            reason: format!("expects {n} elements, buffer has {len}"),
        });
    }
    Ok(())
}

pub(crate) fn checked_numel(shape: &[usize]) -> Option<usize> {
    shape.iter().try_fold(1usize, |acc, &e| acc.checked_mul(e))
}

/// Row-major strides for `shape`.
pub fn strides(shape: &[usize]) -> Vec<usize> {
    let mut s = vec![1; shape.len()];
    for k in (0..shape.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * shape[k + 1];
    }
    s
}

/// Advances a row-major multi-index; returns false after the last one.
pub(crate) fn next_index(idx: &mut [usize], shape: &[usize]) -> bool {
    for k in (0..idx.len()).rev() {
        idx[k] += 1;
        if idx[k] < shape[k] {
            return true;
        }
        idx[k] = 0;
    }
    false
}

impl Tensor {
    pub fn from_real(shape: Vec<usize>, data: Vec<f64>) -> Result<Tensor> {
        check_shape(&shape, data.len())?;
        Ok(Tensor {
            shape,
            data: Data::Real(data),
        })
    }

    pub fn from_complex(shape: Vec<usize>, data: Vec<Complex64>) -> Result<Tensor> {
        check_shape(&shape, data.len())?;
        Ok(Tensor {
            shape,
            data: Data::Complex(data),
        })
    }

    pub(crate) fn from_parts_unchecked<T: Scalar>(shape: Vec<usize>, data: Vec<T>) -> Tensor {
        debug_assert_eq!(checked_numel(&shape), Some(data.len()));
        T::into_tensor(shape, data)
    }

    pub fn scalar(x: f64) -> Tensor {
        Tensor {
            shape: vec![],
            data: Data::Real(vec![x]),
        }
    }

    pub fn complex_scalar(z: Complex64) -> Tensor {
        Tensor {
            shape: vec![],
            data: Data::Complex(vec![z]),
        }
    }

    pub fn zeros(shape: Vec<usize>) -> Result<Tensor> {
        let n = checked_numel(&shape).unwrap_or(0);
        Tensor::from_real(shape, vec![0.0; n])
    }

    pub fn identity(dim: usize) -> Result<Tensor> {
        Tensor::from_fn_real(vec![dim, dim], |ix| if ix[0] == ix[1] { 1.0 } else { 0.0 })
    }

    /// Builds a real tensor from a function of the multi-index, in row-major order.
    pub fn from_fn_real(shape: Vec<usize>, mut f: impl FnMut(&[usize]) -> f64) -> Result<Tensor> {
        check_shape(&shape, checked_numel(&shape).unwrap_or(0))?;
        let n = checked_numel(&shape).unwrap();
        let mut data = Vec::with_capacity(n);
        let mut idx = vec![0; shape.len()];
        loop {
            data.push(f(&idx));
            if !next_index(&mut idx, &shape) {
                break;
            }
        }
        Tensor::from_real(shape, data)
    }

    pub fn from_fn_complex(
        shape: Vec<usize>,
        mut f: impl FnMut(&[usize]) -> Complex64,
    ) -> Result<Tensor> {
        check_shape(&shape, checked_numel(&shape).unwrap_or(0))?;
        let n = checked_numel(&shape).unwrap();
        let mut data = Vec::with_capacity(n);
        let mut idx = vec![0; shape.len()];
        loop {
            data.push(f(&idx));
            if !next_index(&mut idx, &shape) {
                break;
            }
        }
        Tensor::from_complex(shape, data)
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn rank(&self) -> usize {
        self.shape.len()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn dtype(&self) -> DType {
        match self.data {
            Data::Real(_) => DType::F64,
            Data::Complex(_) => DType::C64,
        }
    }

    pub fn is_complex(&self) -> bool {
        self.dtype() == DType::C64
    }

    pub fn data(&self) -> &Data {
        &self.data
    }

    pub fn as_real(&self) -> Option<&[f64]> {
        match &self.data {
            Data::Real(v) => Some(v),
            Data::Complex(_) => None,
        }
    }

    pub fn as_complex(&self) -> Option<&[Complex64]> {
        match &self.data {
            Data::Complex(v) => Some(v),
            Data::Real(_) => None,
        }
    }

    pub(crate) fn complex_cow(&self) -> Cow<'_, [Complex64]> {
        match &self.data {
            Data::Complex(v) => Cow::Borrowed(v),
            Data::Real(v) => Cow::Owned(v.iter().map(|&x| Complex64::new(x, 0.0)).collect()),
        }
    }

    pub fn to_complex_vec(&self) -> Vec<Complex64> {
        self.complex_cow().into_owned()
    }

    /// The same values stored as complex numbers.
    pub fn to_complex(&self) -> Tensor {
        Tensor {
            shape: self.shape.clone(),
            data: Data::Complex(self.to_complex_vec()),
        }
    }

    pub(crate) fn pair<'a>(a: &'a Tensor, b: &'a Tensor) -> Pair<'a> {
        match (&a.data, &b.data) {
            (Data::Real(x), Data::Real(y)) => Pair::Real(x, y),
            _ => Pair::Complex(a.complex_cow(), b.complex_cow()),
        }
    }

    pub fn offset(&self, idx: &[usize]) -> usize {
        assert_eq!(idx.len(), self.rank(), "index rank mismatch");
        let mut off = 0;
        for (k, (&i, &e)) in idx.iter().zip(&self.shape).enumerate() {
            assert!(i < e, "index {i} out of range for axis {k} of extent {e}");
            off = off * e + i;
        }
        off
    }

    pub fn get(&self, idx: &[usize]) -> Complex64 {
        let off = self.offset(idx);
        match &self.data {
            Data::Real(v) => Complex64::new(v[off], 0.0),
            Data::Complex(v) => v[off],
        }
    }

    /// Value of a rank-0 (or single-element) tensor.
    pub fn item(&self) -> Complex64 {
        assert_eq!(self.len(), 1, "item() on a tensor with {} elements", self.len());
        self.get(&vec![0; self.rank()])
    }

    pub fn reshape(&self, shape: Vec<usize>) -> Result<Tensor> {
        check_shape(&shape, self.len())?;
        Ok(Tensor {
            shape,
            data: self.data.clone(),
        })
    }

    /// Axis permutation: `out.shape[k] == self.shape[perm[k]]`.
    pub fn transpose(&self, perm: &[usize]) -> Result<Tensor> {
        if !is_permutation(perm, self.rank()) {
            return Err(Error::InvalidPermutation {
                perm: perm.to_vec(),
                rank: self.rank(),
            });
        }
        let shape: Vec<usize> = perm.iter().map(|&p| self.shape[p]).collect();
        Ok(match &self.data {
            Data::Real(v) => Tensor::from_parts_unchecked(shape, permute(v, &self.shape, perm)),
            Data::Complex(v) => Tensor::from_parts_unchecked(shape, permute(v, &self.shape, perm)),
        })
    }

    /// Plain matrix transpose.
    pub fn t(&self) -> Result<Tensor> {
        if self.rank() != 2 {
            return Err(Error::RankMismatch {
                expected: 2,
                got: self.rank(),
            });
        }
        self.transpose(&[1, 0])
    }

    pub fn map_complex(&self, f: impl Fn(Complex64) -> Complex64) -> Tensor {
        let data = self.complex_cow().iter().map(|&z| f(z)).collect();
        Tensor {
            shape: self.shape.clone(),
            data: Data::Complex(data),
        }
    }

    pub fn scale(&self, s: f64) -> Tensor {
        match &self.data {
            Data::Real(v) => Tensor {
                shape: self.shape.clone(),
                data: Data::Real(v.iter().map(|x| x * s).collect()),
            },
            Data::Complex(v) => Tensor {
                shape: self.shape.clone(),
                data: Data::Complex(v.iter().map(|z| z * s).collect()),
            },
        }
    }

    pub fn scale_complex(&self, s: Complex64) -> Tensor {
        self.map_complex(|z| z * s)
    }

    pub fn add(&self, other: &Tensor) -> Result<Tensor> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch {
                left: self.shape.clone(),
                right: other.shape.clone(),
            });
        }
        Ok(match Tensor::pair(self, other) {
            Pair::Real(x, y) => Tensor::from_parts_unchecked(
                self.shape.clone(),
                x.iter().zip(y).map(|(a, b)| a + b).collect(),
            ),
            Pair::Complex(x, y) => Tensor::from_parts_unchecked(
                self.shape.clone(),
                x.iter().zip(y.iter()).map(|(a, b)| a + b).collect(),
            ),
        })
    }

    pub fn max_abs(&self) -> f64 {
        match &self.data {
            Data::Real(v) => v.iter().fold(0.0, |m, x| m.max(x.abs())),
            Data::Complex(v) => v.iter().fold(0.0, |m, z| m.max(z.norm())),
        }
    }

    /// Largest entrywise absolute difference. Shapes must match exactly.
    pub fn max_abs_diff(&self, other: &Tensor) -> Result<f64> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch {
                left: self.shape.clone(),
                right: other.shape.clone(),
            });
        }
        Ok(match Tensor::pair(self, other) {
            Pair::Real(x, y) => x.iter().zip(y).fold(0.0, |m, (a, b)| m.max((a - b).abs())),
            Pair::Complex(x, y) => x
                .iter()
                .zip(y.iter())
                .fold(0.0, |m, (a, b)| m.max((a - b).norm())),
        })
    }

    /// Max-abs difference relative to the larger of the two max magnitudes.
    /// Two all-zero tensors have residual 0.
    pub fn rel_residual(&self, other: &Tensor) -> Result<f64> {
        let diff = self.max_abs_diff(other)?;
        let scale = self.max_abs().max(other.max_abs());
        Ok(if scale == 0.0 { diff } else { diff / scale })
    }

    /// Relative comparison with an absolute floor: `|a-b| <= rel*max(|a|,|b|) + abs`
    /// for every entry.
    pub fn all_close(&self, other: &Tensor, tol: Tolerance) -> bool {
        if self.shape != other.shape {
            return false;
        }
        let x = self.complex_cow();
        let y = other.complex_cow();
        x.iter()
            .zip(y.iter())
            .all(|(a, b)| (a - b).norm() <= tol.rel * a.norm().max(b.norm()) + tol.abs)
    }

    pub fn has_non_finite(&self) -> Option<usize> {
        match &self.data {
            Data::Real(v) => v.iter().position(|x| !x.is_finite()),
            Data::Complex(v) => v.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()),
        }
    }

    /// Drops imaginary parts when every one of them is below `threshold` in
    /// magnitude; otherwise returns the tensor unchanged.
    pub fn real_if_close(&self, threshold: f64) -> Tensor {
        match &self.data {
            Data::Real(_) => self.clone(),
            Data::Complex(v) => {
                if v.iter().all(|z| z.im.abs() < threshold) {
                    Tensor {
                        shape: self.shape.clone(),
                        data: Data::Real(v.iter().map(|z| z.re).collect()),
                    }
                } else {
                    self.clone()
                }
            }
        }
    }

    /// Column-stacking vectorization of a matrix: `out[i + j*I] = a[i, j]`.
    pub fn vectorize_col(&self) -> Result<Tensor> {
        let (rows, cols) = self.matrix_dims()?;
        let n = rows * cols;
        Ok(match &self.data {
            Data::Real(v) => Tensor::from_parts_unchecked(vec![n], col_stack(v, rows, cols)),
            Data::Complex(v) => Tensor::from_parts_unchecked(vec![n], col_stack(v, rows, cols)),
        })
    }

    /// Row-concatenating vectorization: `out[j + i*J] = a[i, j]`, i.e. the
    /// column vectorization of the transpose.
    pub fn vectorize_row(&self) -> Result<Tensor> {
        let (rows, cols) = self.matrix_dims()?;
        let n = rows * cols;
        // row-major storage already lists rows one after another
        Ok(Tensor {
            shape: vec![n],
            data: self.data.clone(),
        })
    }

    /// Inverse of vectorization with first-index-fastest ordering:
    /// `out[i_1, .., i_N] = v[i_1 + i_2*I_1 + ...]`.
    pub fn devectorize(&self, dims: &[usize]) -> Result<Tensor> {
        if self.rank() != 1 {
            return Err(Error::RankMismatch {
                expected: 1,
                got: self.rank(),
            });
        }
        if dims.is_empty() || dims.contains(&0) || checked_numel(dims) != Some(self.len())
        {
            return Err(Error::ExtentProductMismatch {
                len: self.len(),
                dims: dims.to_vec(),
            });
        }
        // reversing the axes turns first-fastest into row-major order
        let reversed: Vec<usize> = dims.iter().rev().copied().collect();
        let perm: Vec<usize> = (0..dims.len()).rev().collect();
        let t = Tensor {
            shape: reversed,
            data: self.data.clone(),
        };
        t.transpose(&perm)
    }

    fn matrix_dims(&self) -> Result<(usize, usize)> {
        if self.rank() != 2 {
            return Err(Error::RankMismatch {
                expected: 2,
                got: self.rank(),
            });
        }
        Ok((self.shape[0], self.shape[1]))
    }
}

fn col_stack<T: Copy>(v: &[T], rows: usize, cols: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(rows * cols);
    for j in 0..cols {
        for i in 0..rows {
            out.push(v[i * cols + j]);
        }
    }
    out
}

pub(crate) fn is_permutation(perm: &[usize], rank: usize) -> bool {
    if perm.len() != rank {
        return false;
    }
    let mut seen = vec![false; rank];
    for &p in perm {
        if p >= rank || seen[p] {
            return false;
        }
        seen[p] = true;
    }
    true
}

/// Permutes a row-major buffer so that output axis `k` is input axis `perm[k]`.
pub(crate) fn permute<T: Copy>(data: &[T], shape: &[usize], perm: &[usize]) -> Vec<T> {
    if perm.iter().enumerate().all(|(k, &p)| k == p) {
        return data.to_vec();
    }
    let in_strides = strides(shape);
    let out_shape: Vec<usize> = perm.iter().map(|&p| shape[p]).collect();
    let step: Vec<usize> = perm.iter().map(|&p| in_strides[p]).collect();
    strided_gather(data, &out_shape, &step)
}

/// Walks `out_shape` in row-major order, reading `data` at offset
/// `sum_k idx[k] * step[k]`.
pub(crate) fn strided_gather<T: Copy>(data: &[T], out_shape: &[usize], step: &[usize]) -> Vec<T> {
    let rank = out_shape.len();
    let n: usize = out_shape.iter().product();
    let mut out = Vec::with_capacity(n);
    let mut idx = vec![0; rank];
    let mut off = 0usize;
    loop {
        out.push(data[off]);
        let mut k = rank;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            idx[k] += 1;
            off += step[k];
            if idx[k] < out_shape[k] {
                break;
            }
            off -= step[k] * idx[k];
            idx[k] = 0;
        }
    }
}

/// Comparison tolerance: relative with an absolute floor.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rel: 1e-10,
            abs: 1e-12,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: usize, cols: usize, v: &[f64]) -> Tensor {
        Tensor::from_real(vec![rows, cols], v.to_vec()).unwrap()
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(Tensor::from_real(vec![2, 0], vec![]).is_err());
        assert!(Tensor::from_real(vec![2, 2], vec![1.0; 3]).is_err());
        let s = Tensor::from_real(vec![], vec![4.0]).unwrap();
        assert_eq!(s.rank(), 0);
        assert_eq!(s.item().re, 4.0);
    }

    #[test]
    fn transpose_examples() {
        let id = Tensor::identity(3).unwrap();
        assert_eq!(id.transpose(&[1, 0]).unwrap(), id);

        let a = mat(2, 3, &[1., 2., 3., 4., 5., 6.]);
        let t = a.transpose(&[1, 0]).unwrap();
        assert_eq!(t.shape(), &[3, 2]);
        for i in 0..2 {
            for j in 0..3 {
                assert_eq!(t.get(&[j, i]), a.get(&[i, j]));
            }
        }
        assert!(matches!(
            a.transpose(&[0, 0]),
            Err(Error::InvalidPermutation { .. })
        ));
        assert!(a.transpose(&[0]).is_err());
    }

    #[test]
    fn vectorize_examples() {
        let a = mat(2, 2, &[1., 2., 3., 4.]);
        assert_eq!(a.vectorize_col().unwrap().as_real().unwrap(), &[1., 3., 2., 4.]);
        assert_eq!(a.vectorize_row().unwrap().as_real().unwrap(), &[1., 2., 3., 4.]);

        let col = mat(3, 1, &[7., 8., 9.]);
        assert_eq!(col.vectorize_col().unwrap().as_real().unwrap(), &[7., 8., 9.]);

        let sym = mat(2, 2, &[1., 5., 5., 2.]);
        assert_eq!(sym.vectorize_row().unwrap(), sym.vectorize_col().unwrap());

        let v = Tensor::from_real(vec![4], vec![1., 3., 2., 4.]).unwrap();
        assert_eq!(v.devectorize(&[2, 2]).unwrap(), a);
        let v6 = Tensor::from_real(vec![6], (0..6).map(f64::from).collect()).unwrap();
        assert_eq!(v6.devectorize(&[6]).unwrap(), v6);
        assert!(matches!(
            v6.devectorize(&[4, 2]),
            Err(Error::ExtentProductMismatch { .. })
        ));
        let v3 = Tensor::from_real(vec![3], vec![0.; 3]).unwrap();
        assert!(v3.reshape(vec![1, 3]).unwrap().vectorize_col().is_ok());
        assert!(matches!(v3.vectorize_col(), Err(Error::RankMismatch { .. })));
    }

    #[test]
    fn devectorize_uses_first_index_fastest() {
        let v = Tensor::from_real(vec![24], (0..24).map(f64::from).collect()).unwrap();
        let t = v.devectorize(&[2, 3, 4]).unwrap();
        for i in 0..2 {
            for j in 0..3 {
                for k in 0..4 {
                    assert_eq!(t.get(&[i, j, k]).re, (i + 2 * j + 6 * k) as f64);
                }
            }
        }
    }

    #[test]
    fn real_if_close_threshold() {
        let t = Tensor::from_complex(vec![2], vec![Complex64::new(1.0, 1e-12), Complex64::new(2.0, 0.0)])
            .unwrap();
        assert_eq!(t.real_if_close(1e-10).dtype(), DType::F64);
        let t = Tensor::from_complex(vec![1], vec![Complex64::new(1.0, 1e-6)]).unwrap();
        assert_eq!(t.real_if_close(1e-10).dtype(), DType::C64);
    }
}
