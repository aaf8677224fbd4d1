//! Seeded pseudo-random tensors for checks and tests.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::tensor::Tensor;

pub type TensorRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TensorRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Complex entries drawn uniformly from the unit square `[0,1) + i[0,1)`.
pub fn complex_tensor(rng: &mut impl Rng, shape: &[usize]) -> Tensor {
    Tensor::from_fn_complex(shape.to_vec(), |_| Complex64::new(rng.gen(), rng.gen()))
        .expect("random tensor shape must have positive extents")
}

/// Real entries uniform in `[0,1)`.
pub fn real_tensor(rng: &mut impl Rng, shape: &[usize]) -> Tensor {
    Tensor::from_fn_real(shape.to_vec(), |_| rng.gen()).expect("random tensor shape must have positive extents")
}

/// Integer-valued real entries in `lo..=hi`, for checks that must be exact.
pub fn integer_tensor(rng: &mut impl Rng, shape: &[usize], lo: i32, hi: i32) -> Tensor {
    Tensor::from_fn_real(shape.to_vec(), |_| rng.gen_range(lo..=hi) as f64)
        .expect("random tensor shape must have positive extents")
}
