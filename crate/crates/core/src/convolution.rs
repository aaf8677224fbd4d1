//! Signed circular convolutions.
//!
//! `conv(a, b)[k] = sum_ij chi[i,j,k] a[i] b[j]` where `chi[i,j,k] = 1` iff
//! `s1*i + s2*j + s3*k = 0 (mod D)`. For `(++-)` this is the ordinary circular
//! convolution `sum_i a[i] b[k-i]`.
//!
//! The DFT is unitary, `F[m,n] = exp(-2 pi i mn/D)/sqrt(D)`. With `G+ = F` and
//! `G- = F^-1`, every signature satisfies
//! `G(-s3) conv(a,b) = sqrt(D) (G(s1) a) o (G(s2) b)`.

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

use crate::error::{Error, Result};
use crate::mediators::{Direction, Sign, Signature};
use crate::tensor::{next_index, Data, Scalar, Tensor};

/// Extents from which [`conv1d`] switches to the FFT path.
pub const FFT_THRESHOLD: usize = 32;

/// Imaginary parts below this are dropped when both inputs are real.
pub const REAL_THRESHOLD: f64 = 1e-10;

/// Signature and extent of one convolved axis.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct AxisConv {
    pub signature: Signature,
    pub extent: usize,
}

impl AxisConv {
    pub fn new(signature: Signature, extent: usize) -> Result<AxisConv> {
        if extent == 0 {
            return Err(Error::InvalidParameter("convolution extent must be at least 1".into()));
        }
        Ok(AxisConv { signature, extent })
    }
}

fn vector_len(v: &Tensor) -> Result<usize> {
    if v.rank() != 1 {
        return Err(Error::RankMismatch {
            expected: 1,
            got: v.rank(),
        });
    }
    Ok(v.len())
}

fn equal_lengths(a: &Tensor, b: &Tensor) -> Result<usize> {
    let d = vector_len(a)?;
    let e = vector_len(b)?;
    if d != e {
        return Err(Error::ShapeMismatch {
            left: vec![d],
            right: vec![e],
        });
    }
    Ok(d)
}

/// Index of `b` paired with `a[i]` for output `k`.
fn partner(sig: Signature, i: usize, k: usize, d: usize) -> usize {
    let [s1, s2, s3] = sig.values();
    (-s2 * (s1 * i as i64 + s3 * k as i64)).rem_euclid(d as i64) as usize
}

/// Signed circular convolution; uses the FFT path for `D >= 32`.
pub fn conv1d(a: &Tensor, b: &Tensor, sig: Signature) -> Result<Tensor> {
    let d = equal_lengths(a, b)?;
    if d >= FFT_THRESHOLD {
        conv1d_fft(a, b, sig)
    } else {
        conv1d_direct(a, b, sig)
    }
}

/// `O(D^2)` evaluation straight from the definition of χ.
pub fn conv1d_direct(a: &Tensor, b: &Tensor, sig: Signature) -> Result<Tensor> {
    let d = equal_lengths(a, b)?;
    fn go<T: Scalar>(a: &[T], b: &[T], sig: Signature, d: usize) -> Tensor {
        let out = (0..d)
            .map(|k| {
                let mut acc = T::zero();
                for (i, &ai) in a.iter().enumerate() {
                    acc += ai * b[partner(sig, i, k, d)];
                }
                acc
            })
            .collect();
        T::into_tensor(vec![d], out)
    }
    Ok(match Tensor::pair(a, b) {
        crate::tensor::Pair::Real(x, y) => go(x, y, sig, d),
        crate::tensor::Pair::Complex(x, y) => go(&x[..], &y[..], sig, d),
    })
}

/// Unnormalized transform `x -> sum_i x[i] exp(2 pi i s w i / D)`.
fn signed_transform(planner: &mut FftPlanner<f64>, buf: &mut [Complex64], sign: Sign) {
    let direction = match sign {
        Sign::Plus => FftDirection::Inverse,
        Sign::Minus => FftDirection::Forward,
    };
    planner.plan_fft(buf.len(), direction).process(buf);
}

/// `conv(a,b) = (1/D) T(s3) [T(s1) a o T(s2) b]` with unnormalized transforms.
pub fn conv1d_fft(a: &Tensor, b: &Tensor, sig: Signature) -> Result<Tensor> {
    let d = equal_lengths(a, b)?;
    let [s1, s2, s3] = sig.signs();
    let mut planner = FftPlanner::new();
    let mut x = a.to_complex_vec();
    let mut y = b.to_complex_vec();
    signed_transform(&mut planner, &mut x, s1);
    signed_transform(&mut planner, &mut y, s2);
    for (u, v) in x.iter_mut().zip(&y) {
        *u *= v;
    }
    signed_transform(&mut planner, &mut x, s3);
    let scale = 1.0 / d as f64;
    x.iter_mut().for_each(|z| *z *= scale);
    let out = Tensor::from_complex(vec![d], x)?;
    if a.is_complex() || b.is_complex() {
        return Ok(out);
    }
    let out = out.real_if_close(REAL_THRESHOLD);
    Ok(match (integer_bound(a), integer_bound(b), out.data()) {
        (Some(ma), Some(mb), Data::Real(v)) if ma * mb * (d as f64) < EXACT_INTEGER_BOUND => {
            Tensor::from_parts_unchecked(vec![d], v.iter().map(|x| x.round()).collect::<Vec<f64>>())
        }
        _ => out,
    })
}

/// Largest result magnitude for which FFT outputs of integer inputs are
/// rounded back to the exact integers.
const EXACT_INTEGER_BOUND: f64 = (1u64 << 40) as f64;

/// `max |x|` if every entry is a real integer.
fn integer_bound(t: &Tensor) -> Option<f64> {
    match t.data() {
        Data::Real(v) if v.iter().all(|x| x.fract() == 0.0) => Some(v.iter().fold(0.0, |m: f64, x| m.max(x.abs()))),
        _ => None,
    }
}

/// N-dimensional signed circular convolution with one signature per axis.
pub fn conv_nd(a: &Tensor, b: &Tensor, axes: &[AxisConv]) -> Result<Tensor> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch {
            left: a.shape().to_vec(),
            right: b.shape().to_vec(),
        });
    }
    if axes.len() != a.rank() {
        return Err(Error::InvalidParameter(format!(
            "{} axis convolutions given for a rank-{} tensor",
            axes.len(),
            a.rank()
        )));
    }
    if let Some((k, ax)) = axes.iter().enumerate().find(|(k, ax)| ax.extent != a.shape()[*k]) {
        return Err(Error::InvalidParameter(format!(
            "axis {k} has extent {} but its convolution is declared over {}",
            a.shape()[k],
            ax.extent
        )));
    }
    if a.rank() == 0 {
        return crate::products::hadamard(a, b);
    }
    fn go<T: Scalar>(a: &[T], b: &[T], shape: &[usize], axes: &[AxisConv]) -> Vec<T> {
        let rank = shape.len();
        let strides = crate::tensor::strides(shape);
        let mut out = Vec::with_capacity(a.len());
        let mut k = vec![0; rank];
        loop {
            let mut acc = T::zero();
            let mut i = vec![0; rank];
            for &ai in a {
                let off: usize = (0..rank)
                    .map(|ax| partner(axes[ax].signature, i[ax], k[ax], shape[ax]) * strides[ax])
                    .sum();
                acc += ai * b[off];
                next_index(&mut i, shape);
            }
            out.push(acc);
            if !next_index(&mut k, shape) {
                return out;
            }
        }
    }
    let shape = a.shape().to_vec();
    Ok(match Tensor::pair(a, b) {
        crate::tensor::Pair::Real(x, y) => Tensor::from_parts_unchecked(shape.clone(), go(x, y, &shape, axes)),
        crate::tensor::Pair::Complex(x, y) => {
            Tensor::from_parts_unchecked(shape.clone(), go(&x[..], &y[..], &shape, axes))
        }
    })
}

/// Unitary DFT (`F v`) or its inverse (`F^-1 v = conj(F) v`).
pub fn dft(v: &Tensor, direction: Direction) -> Result<Tensor> {
    let d = vector_len(v)?;
    let mut buf = v.to_complex_vec();
    let fft_dir = match direction {
        Direction::Forward => FftDirection::Forward,
        Direction::Inverse => FftDirection::Inverse,
    };
    FftPlanner::new().plan_fft(d, fft_dir).process(&mut buf);
    let scale = 1.0 / (d as f64).sqrt();
    buf.iter_mut().for_each(|z| *z *= scale);
    Tensor::from_complex(vec![d], buf)
}

/// Both sides of the convolution theorem for one signature.
#[derive(Clone, Debug)]
pub struct TheoremInstance {
    pub signature: Signature,
    /// `G(-s3) conv(a, b)`.
    pub lhs: Tensor,
    /// `sqrt(D) (G(s1) a) o (G(s2) b)`.
    pub rhs: Tensor,
    /// Max-abs difference of the two sides.
    pub residual: f64,
}

/// Evaluates the convolution theorem for `sig` on `a`, `b`. For `(++-)` the
/// instance is `F conv(a,b) = sqrt(D) (F a) o (F b)`.
pub fn check_conv_theorem(a: &Tensor, b: &Tensor, sig: Signature) -> Result<TheoremInstance> {
    let d = equal_lengths(a, b)?;
    let [s1, s2, s3] = sig.signs();
    let conv = conv1d_direct(a, b, sig)?;
    let lhs = dft(&conv, Direction::for_sign(s3.flip()))?;
    let fa = dft(a, Direction::for_sign(s1))?;
    let fb = dft(b, Direction::for_sign(s2))?;
    let rhs = crate::products::hadamard(&fa, &fb)?.scale((d as f64).sqrt());
    let residual = lhs.max_abs_diff(&rhs)?;
    Ok(TheoremInstance {
        signature: sig,
        lhs,
        rhs,
        residual,
    })
}

/// Zero-padded (non-circular) convolution of lengths `D1`, `D2`, computed on
/// the circular path at extent `D1 + D2 - 1`.
pub fn linear_conv(a: &Tensor, b: &Tensor) -> Result<Tensor> {
    let d = vector_len(a)? + vector_len(b)? - 1;
    conv1d(&zero_pad(a, d)?, &zero_pad(b, d)?, Signature::CONVOLUTION)
}

fn zero_pad(v: &Tensor, d: usize) -> Result<Tensor> {
    Ok(match v.data() {
        Data::Real(x) => {
            let mut y = x.clone();
            y.resize(d, 0.0);
            Tensor::from_parts_unchecked(vec![d], y)
        }
        Data::Complex(x) => {
            let mut y = x.clone();
            y.resize(d, Complex64::new(0.0, 0.0));
            Tensor::from_parts_unchecked(vec![d], y)
        }
    })
}

/// Circular shift: `out[(k + s) mod D] = v[k]`.
pub fn shift(v: &Tensor, s: i64) -> Result<Tensor> {
    let d = vector_len(v)?;
    let src = |k: usize| (k as i64 - s).rem_euclid(d as i64) as usize;
    Ok(match v.data() {
        Data::Real(x) => Tensor::from_parts_unchecked(vec![d], (0..d).map(|k| x[src(k)]).collect()),
        Data::Complex(x) => Tensor::from_parts_unchecked(vec![d], (0..d).map(|k| x[src(k)]).collect()),
    })
}

/// Unit vector `e_k` of length `d`.
pub fn unit(d: usize, k: usize) -> Result<Tensor> {
    if k >= d {
        return Err(Error::InvalidParameter(format!("unit vector index {k} out of range {d}")));
    }
    Tensor::from_fn_real(vec![d], |ix| if ix[0] == k { 1.0 } else { 0.0 })
}
