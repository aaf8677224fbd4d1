//! Structured constant tensors that mediate products and transforms:
//! the Kronecker tensor (δ), the vectorization tensor (γ), the convolution
//! tensor (χ) and the unitary DFT matrix, plus the matrix operations that a
//! δ contraction specializes to.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{checked_numel, next_index, Tensor};

/// Default ceiling on the number of entries of a densely materialized mediator.
pub const DEFAULT_CAP: usize = 100_000_000;

fn check_cap(shape: &[usize], cap: usize) -> Result<()> {
    let requested = shape
        .iter()
        .try_fold(1u128, |acc, &e| acc.checked_mul(e as u128))
        .unwrap_or(u128::MAX);
    if requested > cap as u128 {
        return Err(Error::CapExceeded { requested, cap });
    }
    Ok(())
}

/// Rank-`rank` Kronecker tensor over extent `dim`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct DeltaSpec {
    pub rank: usize,
    pub dim: usize,
}

impl DeltaSpec {
    pub fn new(rank: usize, dim: usize) -> Result<DeltaSpec> {
        if rank == 0 || dim == 0 {
            return Err(Error::InvalidParameter(format!(
                "delta needs rank >= 1 and dim >= 1, got rank {rank}, dim {dim}"
            )));
        }
        Ok(DeltaSpec { rank, dim })
    }
}

/// Vectorization tensor flattening `dims` into one index of extent `prod(dims)`
/// with the first input varying fastest.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GammaSpec {
    dims: Vec<usize>,
}

impl GammaSpec {
    pub fn new(dims: Vec<usize>) -> Result<GammaSpec> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidParameter(format!(
                "gamma needs at least one input extent, all >= 1, got {dims:?}"
            )));
        }
        checked_numel(&dims)
            .ok_or_else(|| Error::InvalidParameter(format!("gamma output extent overflows for {dims:?}")))?;
        Ok(GammaSpec { dims })
    }

    pub fn input_dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn output_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Flat index of a multi-index: `i_1 + i_2*I_1 + i_3*I_1*I_2 + ...`.
    pub fn flat_index(&self, idx: &[usize]) -> usize {
        let mut m = 0;
        let mut stride = 1;
        for (&i, &e) in idx.iter().zip(&self.dims) {
            m += i * stride;
            stride *= e;
        }
        m
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// Sign triple of the convolution tensor, stored canonically with a leading `+`
/// (a global flip selects the same tensor).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature([Sign; 3]);

impl Signature {
    /// `(++−)`: ordinary circular convolution.
    pub const CONVOLUTION: Signature = Signature([Sign::Plus, Sign::Plus, Sign::Minus]);
    /// `(+−−)`: circular cross-correlation.
    pub const CORRELATION: Signature = Signature([Sign::Plus, Sign::Minus, Sign::Minus]);

    /// The four canonical signatures.
    pub const ALL: [Signature; 4] = [
        Signature([Sign::Plus, Sign::Plus, Sign::Plus]),
        Signature([Sign::Plus, Sign::Plus, Sign::Minus]),
        Signature([Sign::Plus, Sign::Minus, Sign::Plus]),
        Signature([Sign::Plus, Sign::Minus, Sign::Minus]),
    ];

    pub fn new(signs: [Sign; 3]) -> Signature {
        if signs[0] == Sign::Minus {
            Signature(signs.map(Sign::flip))
        } else {
            Signature(signs)
        }
    }

    pub fn signs(&self) -> [Sign; 3] {
        self.0
    }

    pub fn values(&self) -> [i64; 3] {
        self.0.map(Sign::value)
    }

    /// Whether `(s1 i + s2 j + s3 k) mod dim == 0`.
    pub fn admits(&self, i: usize, j: usize, k: usize, dim: usize) -> bool {
        let [a, b, c] = self.values();
        (a * i as i64 + b * j as i64 + c * k as i64).rem_euclid(dim as i64) == 0
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|s| write!(f, "{}", s.symbol()))
    }
}

impl FromStr for Signature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Signature> {
        let signs: Vec<Sign> = s
            .chars()
            .map(|c| match c {
                '+' => Ok(Sign::Plus),
                '-' | '−' => Ok(Sign::Minus),
                _ => Err(Error::InvalidSignature(s.to_string())),
            })
            .collect::<Result<_>>()?;
        let signs: [Sign; 3] = signs
            .try_into()
            .map_err(|_| Error::InvalidSignature(s.to_string()))?;
        Ok(Signature::new(signs))
    }
}

impl Serialize for Signature {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Signature {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Inverse,
}

impl Direction {
    pub fn flip(self) -> Direction {
        match self {
            Direction::Forward => Direction::Inverse,
            Direction::Inverse => Direction::Forward,
        }
    }

    /// Forward on `+`, inverse on `−`.
    pub fn for_sign(sign: Sign) -> Direction {
        match sign {
            Sign::Plus => Direction::Forward,
            Sign::Minus => Direction::Inverse,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Forward => "forward",
            Direction::Inverse => "inverse",
        })
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Direction> {
        match s {
            "forward" | "fwd" | "f" => Ok(Direction::Forward),
            "inverse" | "inv" | "i" => Ok(Direction::Inverse),
            _ => Err(Error::InvalidParameter(format!("unknown Fourier direction '{s}'"))),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct FourierSpec {
    pub dim: usize,
    pub direction: Direction,
}

pub fn delta_dense(spec: DeltaSpec) -> Result<Tensor> {
    delta_dense_capped(spec, DEFAULT_CAP)
}

pub fn delta_dense_capped(spec: DeltaSpec, cap: usize) -> Result<Tensor> {
    let shape = vec![spec.dim; spec.rank];
    check_cap(&shape, cap)?;
    let n = checked_numel(&shape).unwrap();
    let mut data = vec![0.0; n];
    // stride of the main diagonal is 1 + D + D^2 + ...
    let diag_stride: usize = (0..spec.rank).map(|k| spec.dim.pow(k as u32)).sum();
    for i in 0..spec.dim {
        data[i * diag_stride] = 1.0;
    }
    Tensor::from_real(shape, data)
}

pub fn gamma_dense(spec: &GammaSpec) -> Result<Tensor> {
    gamma_dense_capped(spec, DEFAULT_CAP)
}

pub fn gamma_dense_capped(spec: &GammaSpec, cap: usize) -> Result<Tensor> {
    let m = spec.output_dim();
    let mut shape = spec.dims.clone();
    shape.push(m);
    check_cap(&shape, cap)?;
    let mut data = vec![0.0; checked_numel(&shape).unwrap()];
    let mut idx = vec![0; spec.dims.len()];
    let mut row = 0;
    loop {
        data[row * m + spec.flat_index(&idx)] = 1.0;
        row += 1;
        if !next_index(&mut idx, &spec.dims) {
            break;
        }
    }
    Tensor::from_real(shape, data)
}

pub fn chi_dense(sig: Signature, dim: usize) -> Result<Tensor> {
    chi_dense_capped(sig, dim, DEFAULT_CAP)
}

pub fn chi_dense_capped(sig: Signature, dim: usize, cap: usize) -> Result<Tensor> {
    if dim == 0 {
        return Err(Error::InvalidParameter("chi needs dim >= 1".into()));
    }
    let shape = vec![dim; 3];
    check_cap(&shape, cap)?;
    Tensor::from_fn_real(shape, |ix| {
        if sig.admits(ix[0], ix[1], ix[2], dim) {
            1.0
        } else {
            0.0
        }
    })
}

/// `F[m, n] = exp(-2πi mn / D) / √D`; the inverse is its conjugate.
pub fn fourier_matrix(spec: FourierSpec) -> Result<Tensor> {
    let d = spec.dim;
    if d == 0 {
        return Err(Error::InvalidParameter("Fourier matrix needs dim >= 1".into()));
    }
    let sign = match spec.direction {
        Direction::Forward => -1.0,
        Direction::Inverse => 1.0,
    };
    let norm = 1.0 / (d as f64).sqrt();
    Tensor::from_fn_complex(vec![d, d], |ix| {
        // reduce mn mod D before scaling to keep the phase argument small
        let p = ((ix[0] * ix[1]) % d) as f64;
        Complex64::from_polar(norm, sign * 2.0 * PI * p / d as f64)
    })
}

fn square_dim(a: &Tensor) -> Result<usize> {
    if a.rank() != 2 {
        return Err(Error::RankMismatch {
            expected: 2,
            got: a.rank(),
        });
    }
    if a.shape()[0] != a.shape()[1] {
        return Err(Error::NotSquare(a.shape().to_vec()));
    }
    Ok(a.shape()[0])
}

/// `diag(A)_k = A_ij δ_ijk`.
pub fn diag_extract(a: &Tensor) -> Result<Tensor> {
    let d = square_dim(a)?;
    let step = d + 1;
    Ok(match a.data() {
        crate::tensor::Data::Real(v) => {
            Tensor::from_parts_unchecked(vec![d], (0..d).map(|k| v[k * step]).collect())
        }
        crate::tensor::Data::Complex(v) => {
            Tensor::from_parts_unchecked(vec![d], (0..d).map(|k| v[k * step]).collect())
        }
    })
}

/// `diag(a)_jk = a_i δ_ijk`.
pub fn diag_embed(v: &Tensor) -> Result<Tensor> {
    if v.rank() != 1 {
        return Err(Error::RankMismatch {
            expected: 1,
            got: v.rank(),
        });
    }
    let d = v.len();
    Ok(match v.data() {
        crate::tensor::Data::Real(x) => {
            let mut out = vec![0.0; d * d];
            for (k, &val) in x.iter().enumerate() {
                out[k * (d + 1)] = val;
            }
            Tensor::from_parts_unchecked(vec![d, d], out)
        }
        crate::tensor::Data::Complex(x) => {
            let mut out = vec![Complex64::new(0.0, 0.0); d * d];
            for (k, &val) in x.iter().enumerate() {
                out[k * (d + 1)] = val;
            }
            Tensor::from_parts_unchecked(vec![d, d], out)
        }
    })
}

/// `A_ij δ_ijkl`: keeps the diagonal, zeroes the rest.
pub fn zero_offdiag(a: &Tensor) -> Result<Tensor> {
    diag_embed(&diag_extract(a)?)
}

/// `Tr(A) = A_ij δ_ij`, as a rank-0 tensor.
pub fn trace(a: &Tensor) -> Result<Tensor> {
    let d = diag_extract(a)?;
    Ok(match d.data() {
        crate::tensor::Data::Real(v) => Tensor::scalar(v.iter().sum()),
        crate::tensor::Data::Complex(v) => Tensor::complex_scalar(v.iter().sum()),
    })
}

/// Traces out axes `axes.0` and `axes.1`; the remaining axes keep their order.
pub fn partial_trace(a: &Tensor, axes: (usize, usize)) -> Result<Tensor> {
    let (p, q) = axes;
    if p == q || p >= a.rank() || q >= a.rank() {
        return Err(Error::InvalidParameter(format!(
            "cannot trace axes {axes:?} of a rank-{} tensor",
            a.rank()
        )));
    }
    if a.shape()[p] != a.shape()[q] {
        return Err(Error::ExtentMismatch {
            label: 't',
            first: a.shape()[p],
            second: a.shape()[q],
        });
    }
    let labels: Vec<char> = (0..a.rank())
        .map(|k| if k == p || k == q { 't' } else { (b'a' + k as u8) as char })
        .collect();
    let out: Vec<char> = labels.iter().copied().filter(|&l| l != 't').collect();
    let spec = crate::einsum::IndexSpec::new(vec![labels], out)?;
    crate::einsum::einsum_eval(&spec, &[a])
}

/// All-ones tensor: the tensor product of rank-1 Kronecker tensors.
pub fn ones_tensor(dims: &[usize]) -> Result<Tensor> {
    let n = checked_numel(dims).unwrap_or(0);
    Tensor::from_real(dims.to_vec(), vec![1.0; n])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count_ones(t: &Tensor) -> usize {
        t.as_real().unwrap().iter().filter(|&&x| x == 1.0).count()
    }

    #[test]
    fn delta_examples() {
        assert_eq!(
            delta_dense(DeltaSpec::new(2, 3).unwrap()).unwrap(),
            Tensor::identity(3).unwrap()
        );
        assert_eq!(
            delta_dense(DeltaSpec::new(1, 4).unwrap()).unwrap().as_real().unwrap(),
            &[1.0; 4]
        );
        let d = delta_dense(DeltaSpec::new(4, 3).unwrap()).unwrap();
        assert_eq!(count_ones(&d), 3);
        assert!(DeltaSpec::new(0, 3).is_err());
        assert!(matches!(
            delta_dense_capped(DeltaSpec::new(5, 10).unwrap(), 1000),
            Err(Error::CapExceeded { .. })
        ));
        assert!(matches!(
            delta_dense(DeltaSpec::new(64, 1000).unwrap()),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn gamma_examples() {
        let g = gamma_dense(&GammaSpec::new(vec![2, 2]).unwrap()).unwrap();
        let mut nonzero = vec![];
        for i in 0..2 {
            for j in 0..2 {
                for m in 0..4 {
                    if g.get(&[i, j, m]).re == 1.0 {
                        nonzero.push((i, j, m));
                    }
                }
            }
        }
        assert_eq!(nonzero, vec![(0, 0, 0), (0, 1, 2), (1, 0, 1), (1, 1, 3)]);
        let g1 = gamma_dense(&GammaSpec::new(vec![5]).unwrap()).unwrap();
        assert_eq!(g1, Tensor::identity(5).unwrap());
        assert!(GammaSpec::new(vec![]).is_err());
    }

    #[test]
    fn chi_examples() {
        let c = chi_dense(Signature::CONVOLUTION, 2).unwrap();
        let mut ones = vec![];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    if c.get(&[i, j, k]).re == 1.0 {
                        ones.push((i, j, k));
                    }
                }
            }
        }
        assert_eq!(ones, vec![(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)]);
        let ppp: Signature = "+++".parse().unwrap();
        assert_eq!(chi_dense(ppp, 2).unwrap(), c);

        let sig: Signature = "+--".parse().unwrap();
        let c3 = chi_dense(sig, 3).unwrap();
        assert_eq!(count_ones(&c3), 9);
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let expected = if i == (j + k) % 3 { 1.0 } else { 0.0 };
                    assert_eq!(c3.get(&[i, j, k]).re, expected);
                }
            }
        }
    }

    #[test]
    fn signature_parsing_and_canonical_form() {
        let s: Signature = "--+".parse().unwrap();
        assert_eq!(s, Signature::CONVOLUTION);
        assert_eq!(s.to_string(), "++-");
        assert!("++".parse::<Signature>().is_err());
        assert!("+*-".parse::<Signature>().is_err());
        assert!("++-+".parse::<Signature>().is_err());
        for sig in Signature::ALL {
            assert_eq!(sig.to_string().parse::<Signature>().unwrap(), sig);
        }
    }

    #[test]
    fn fourier_small() {
        let f1 = fourier_matrix(FourierSpec { dim: 1, direction: Direction::Forward }).unwrap();
        assert_eq!(f1.item(), Complex64::new(1.0, 0.0));
        let f2 = fourier_matrix(FourierSpec { dim: 2, direction: Direction::Forward }).unwrap();
        let r = 1.0 / 2f64.sqrt();
        let expected = [r, r, r, -r];
        for (z, e) in f2.as_complex().unwrap().iter().zip(expected) {
            assert!((z.re - e).abs() < 1e-15 && z.im.abs() < 1e-15);
        }
        let fi = fourier_matrix(FourierSpec { dim: 5, direction: Direction::Inverse }).unwrap();
        let ff = fourier_matrix(FourierSpec { dim: 5, direction: Direction::Forward }).unwrap();
        assert_eq!(fi, ff.map_complex(|z| z.conj()));
    }

    #[test]
    fn delta_specializations() {
        let a = Tensor::from_real(vec![2, 2], vec![1., 2., 3., 4.]).unwrap();
        assert_eq!(diag_extract(&a).unwrap().as_real().unwrap(), &[1., 4.]);
        assert_eq!(
            diag_extract(&Tensor::identity(3).unwrap()).unwrap().as_real().unwrap(),
            &[1., 1., 1.]
        );
        assert_eq!(zero_offdiag(&a).unwrap().as_real().unwrap(), &[1., 0., 0., 4.]);
        assert_eq!(trace(&a).unwrap().item().re, 5.0);
        assert_eq!(trace(&Tensor::identity(7).unwrap()).unwrap().item().re, 7.0);
        let v = Tensor::from_real(vec![2], vec![1., 1.]).unwrap();
        assert_eq!(diag_embed(&v).unwrap(), Tensor::identity(2).unwrap());
        let v = Tensor::from_real(vec![3], vec![2., 0., 5.]).unwrap();
        assert_eq!(diag_extract(&diag_embed(&v).unwrap()).unwrap(), v);
        let rect = Tensor::zeros(vec![2, 3]).unwrap();
        assert!(matches!(diag_extract(&rect), Err(Error::NotSquare(_))));
        assert!(trace(&rect).is_err());
        assert!(zero_offdiag(&rect).is_err());
    }

    #[test]
    fn partial_trace_examples() {
        let b = Tensor::from_real(vec![2, 2], vec![1., 2., 3., 4.]).unwrap();
        let a = Tensor::from_fn_real(vec![2, 2, 2, 2], |ix| {
            if ix[0] == ix[1] {
                b.get(&ix[2..]).re
            } else {
                0.0
            }
        })
        .unwrap();
        assert_eq!(partial_trace(&a, (0, 1)).unwrap(), b.scale(2.0));
        let dd = Tensor::from_fn_real(vec![2, 2, 2, 2], |ix| {
            if ix[0] == ix[1] && ix[2] == ix[3] {
                1.0
            } else {
                0.0
            }
        })
        .unwrap();
        assert_eq!(partial_trace(&dd, (0, 1)).unwrap(), Tensor::identity(2).unwrap().scale(2.0));
        let bad = Tensor::zeros(vec![2, 3, 2, 2]).unwrap();
        assert!(matches!(partial_trace(&bad, (0, 1)), Err(Error::ExtentMismatch { .. })));
    }

    #[test]
    fn ones_examples() {
        assert_eq!(ones_tensor(&[3]).unwrap().as_real().unwrap(), &[1.; 3]);
        assert_eq!(ones_tensor(&[2, 2]).unwrap().as_real().unwrap(), &[1.; 4]);
    }
}
