use num_complex::Complex64;
use wirecalc::convolution::*;
use wirecalc::mediators::chi_dense;
use wirecalc::random::{complex_tensor, integer_tensor, rng};
use wirecalc::{einsum_eval, Direction, Error, IndexSpec, Signature, Tensor};

fn real(v: &[f64]) -> Tensor {
    Tensor::from_real(vec![v.len()], v.to_vec()).unwrap()
}

fn chi_oracle(a: &Tensor, b: &Tensor, sig: Signature) -> Tensor {
    let chi = chi_dense(sig, a.len()).unwrap();
    einsum_eval(&IndexSpec::parse("ijk,i,j->k").unwrap(), &[&chi, a, b]).unwrap()
}

fn loop_conv(a: &Tensor, b: &Tensor, partner: impl Fn(usize, usize) -> usize) -> Tensor {
    let d = a.len();
    Tensor::from_fn_complex(vec![d], |ix| (0..d).map(|i| a.get(&[i]) * b.get(&[partner(ix[0], i)])).sum()).unwrap()
}

#[test]
fn identity_and_shift_examples() {
    let mut r = rng(30);
    let b = complex_tensor(&mut r, &[5]);
    assert_eq!(conv1d(&unit(5, 0).unwrap(), &b, Signature::CONVOLUTION).unwrap(), b);
    let out = conv1d(&unit(3, 1).unwrap(), &real(&[1., 2., 3.]), Signature::CONVOLUTION).unwrap();
    assert_eq!(out, real(&[3., 1., 2.]));
}

#[test]
fn matches_chi_contraction() {
    let mut r = rng(31);
    for d in [1, 2, 7, 12] {
        let a = complex_tensor(&mut r, &[d]);
        let b = complex_tensor(&mut r, &[d]);
        for sig in Signature::ALL {
            let direct = conv1d(&a, &b, sig).unwrap();
            let oracle = chi_oracle(&a, &b, sig);
            assert!(direct.rel_residual(&oracle).unwrap() <= 1e-12, "{sig} D={d}");
        }
    }
}

#[test]
fn explicit_formulas_per_signature() {
    // with chi[i,j,k] = [s1 i + s2 j + s3 k = 0 mod D], the partner of a[i] is
    // j = -s2 (s1 i + s3 k)
    let mut r = rng(32);
    let d = 9;
    let a = integer_tensor(&mut r, &[d], -4, 4);
    let b = integer_tensor(&mut r, &[d], -4, 4);
    let m = |x: i64| x.rem_euclid(d as i64) as usize;
    let cases: [(Signature, Box<dyn Fn(usize, usize) -> usize>); 4] = [
        (Signature::CONVOLUTION, Box::new(move |k, i| m(k as i64 - i as i64))),
        (Signature::CORRELATION, Box::new(move |k, i| m(i as i64 - k as i64))),
        ("+++".parse().unwrap(), Box::new(move |k, i| m(-(i as i64) - k as i64))),
        ("+-+".parse().unwrap(), Box::new(move |k, i| m(i as i64 + k as i64))),
    ];
    for (sig, partner) in cases {
        let want = loop_conv(&a, &b, partner);
        assert_eq!(conv1d(&a, &b, sig).unwrap().to_complex(), want, "{sig}");
    }
}

#[test]
fn correlation_is_reversed_convolution() {
    let mut r = rng(33);
    let d = 8;
    let a = integer_tensor(&mut r, &[d], -4, 4);
    let b = integer_tensor(&mut r, &[d], -4, 4);
    // conv(+--)(a, b)[k] = sum_j a[j + k] b[j] = conv(++-)(a, rev(b))[k]
    let rev = Tensor::from_fn_real(vec![d], |ix| b.get(&[(d - ix[0]) % d]).re).unwrap();
    assert_eq!(
        conv1d(&a, &b, Signature::CORRELATION).unwrap(),
        conv1d(&a, &rev, Signature::CONVOLUTION).unwrap()
    );
}

#[test]
fn commutativity_and_associativity() {
    let mut r = rng(34);
    let (a, b, c) = (complex_tensor(&mut r, &[6]), complex_tensor(&mut r, &[6]), complex_tensor(&mut r, &[6]));
    let conv = |x: &Tensor, y: &Tensor| conv1d(x, y, Signature::CONVOLUTION).unwrap();
    assert!(conv(&a, &b).rel_residual(&conv(&b, &a)).unwrap() <= 1e-12);
    assert!(conv(&conv(&a, &b), &c).rel_residual(&conv(&a, &conv(&b, &c))).unwrap() <= 1e-12);
    let corr = |x: &Tensor, y: &Tensor| conv1d(x, y, Signature::CORRELATION).unwrap();
    assert!(corr(&a, &b).rel_residual(&corr(&b, &a)).unwrap() > 1e-3);
}

#[test]
fn shift_equivariance() {
    let mut r = rng(35);
    for d in 1..=12 {
        let a = integer_tensor(&mut r, &[d], -5, 5);
        let b = integer_tensor(&mut r, &[d], -5, 5);
        for s in [-3, 0, 1, 5] {
            let lhs = conv1d(&shift(&a, s).unwrap(), &b, Signature::CONVOLUTION).unwrap();
            let rhs = shift(&conv1d(&a, &b, Signature::CONVOLUTION).unwrap(), s).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn fft_path_matches_direct() {
    let mut r = rng(36);
    for d in [1, 2, 3, 17, 31, 32, 33, 64, 100, 257, 1024] {
        let a = complex_tensor(&mut r, &[d]);
        let b = complex_tensor(&mut r, &[d]);
        for sig in Signature::ALL {
            let fast = conv1d_fft(&a, &b, sig).unwrap();
            let slow = conv1d_direct(&a, &b, sig).unwrap();
            assert!(fast.max_abs_diff(&slow).unwrap() < 1e-9, "{sig} D={d}");
        }
    }
}

#[test]
fn real_inputs_stay_real() {
    let mut r = rng(37);
    let a = integer_tensor(&mut r, &[40], -3, 3);
    let b = integer_tensor(&mut r, &[40], -3, 3);
    let out = conv1d(&a, &b, Signature::CONVOLUTION).unwrap();
    assert!(!out.is_complex());
    let direct = conv1d_direct(&a, &b, Signature::CONVOLUTION).unwrap();
    assert!(out.max_abs_diff(&direct).unwrap() < 1e-9);
}

#[test]
fn integer_inputs_are_exact_on_the_fft_path() {
    let mut r = rng(38);
    for d in [32, 33, 64, 255, 1024] {
        let a = integer_tensor(&mut r, &[d], -9, 9);
        let b = integer_tensor(&mut r, &[d], -9, 9);
        for sig in Signature::ALL {
            assert_eq!(conv1d_fft(&a, &b, sig).unwrap(), conv1d_direct(&a, &b, sig).unwrap(), "{sig} D={d}");
        }
    }
    let a = real(&[0.5; 40]);
    let out = conv1d(&a, &a, Signature::CONVOLUTION).unwrap();
    assert!(out.max_abs_diff(&real(&[10.0; 40])).unwrap() < 1e-12);
}

#[test]
fn errors() {
    let a = real(&[1., 2.]);
    let b = real(&[1., 2., 3.]);
    assert!(matches!(conv1d(&a, &b, Signature::CONVOLUTION), Err(Error::ShapeMismatch { .. })));
    let m = Tensor::identity(2).unwrap();
    assert!(matches!(conv_nd(&m, &m, &[AxisConv::new(Signature::CONVOLUTION, 2).unwrap()]), Err(Error::InvalidParameter(_))));
    assert!(matches!(conv_nd(&m, &Tensor::identity(3).unwrap(), &[]), Err(Error::ShapeMismatch { .. })));
    assert!(AxisConv::new(Signature::CONVOLUTION, 0).is_err());
}

#[test]
fn conv_nd_examples() {
    let mut r = rng(38);
    let e00 = Tensor::from_fn_real(vec![3, 4], |ix| if ix == [0, 0] { 1.0 } else { 0.0 }).unwrap();
    let b = complex_tensor(&mut r, &[3, 4]);
    let axes = [
        AxisConv::new(Signature::CONVOLUTION, 3).unwrap(),
        AxisConv::new(Signature::CONVOLUTION, 4).unwrap(),
    ];
    assert_eq!(conv_nd(&e00, &b, &axes).unwrap(), b);

    let x = complex_tensor(&mut r, &[2, 2]);
    let y = complex_tensor(&mut r, &[2, 2]);
    let conv_axes = [AxisConv::new(Signature::CONVOLUTION, 2).unwrap(); 2];
    let oracle = Tensor::from_fn_complex(vec![2, 2], |ix| {
        let (m, n) = (ix[0], ix[1]);
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..2 {
            for j in 0..2 {
                acc += x.get(&[i, j]) * y.get(&[(m + 2 - i) % 2, (n + 2 - j) % 2]);
            }
        }
        acc
    })
    .unwrap();
    assert!(conv_nd(&x, &y, &conv_axes).unwrap().rel_residual(&oracle).unwrap() < 1e-14);
}

#[test]
fn conv_nd_matches_joint_chi_contraction() {
    let mut r = rng(39);
    for (s0, s1) in [(0, 1), (1, 0), (2, 3), (3, 3)] {
        for (d0, d1) in [(3, 3), (2, 4), (4, 1)] {
            let sig0 = Signature::ALL[s0];
            let sig1 = Signature::ALL[s1];
            let a = complex_tensor(&mut r, &[d0, d1]);
            let b = complex_tensor(&mut r, &[d0, d1]);
            let axes = [AxisConv::new(sig0, d0).unwrap(), AxisConv::new(sig1, d1).unwrap()];
            let joint = einsum_eval(
                &IndexSpec::parse("ij,kl,ikm,jln->mn").unwrap(),
                &[&a, &b, &chi_dense(sig0, d0).unwrap(), &chi_dense(sig1, d1).unwrap()],
            )
            .unwrap();
            assert!(conv_nd(&a, &b, &axes).unwrap().rel_residual(&joint).unwrap() < 1e-12);
        }
    }
}

#[test]
fn conv_nd_is_sequential_per_axis() {
    let mut r = rng(40);
    let a = complex_tensor(&mut r, &[3, 3]);
    let b = complex_tensor(&mut r, &[3, 3]);
    let axes = [
        AxisConv::new(Signature::CONVOLUTION, 3).unwrap(),
        AxisConv::new(Signature::CORRELATION, 3).unwrap(),
    ];
    let chi0 = chi_dense(Signature::CONVOLUTION, 3).unwrap();
    let chi1 = chi_dense(Signature::CORRELATION, 3).unwrap();
    let step = einsum_eval(&IndexSpec::parse("ij,kl,ikm->mjl").unwrap(), &[&a, &b, &chi0]).unwrap();
    let seq = einsum_eval(&IndexSpec::parse("mjl,jln->mn").unwrap(), &[&step, &chi1]).unwrap();
    assert!(conv_nd(&a, &b, &axes).unwrap().rel_residual(&seq).unwrap() < 1e-12);
}

#[test]
fn dft_examples() {
    let out = dft(&unit(4, 0).unwrap(), Direction::Forward).unwrap();
    assert!(out.max_abs_diff(&real(&[0.5; 4])).unwrap() < 1e-15);
    let out = dft(&real(&[1., 1.]), Direction::Forward).unwrap();
    assert!(out.max_abs_diff(&real(&[2f64.sqrt(), 0.])).unwrap() < 1e-15);
    let mut r = rng(41);
    let v = complex_tensor(&mut r, &[16]);
    let back = dft(&dft(&v, Direction::Forward).unwrap(), Direction::Inverse).unwrap();
    assert!(back.max_abs_diff(&v).unwrap() < 1e-13);
    let f = wirecalc::mediators::fourier_matrix(wirecalc::FourierSpec { dim: 16, direction: Direction::Forward }).unwrap();
    let fv = einsum_eval(&IndexSpec::parse("ij,j->i").unwrap(), &[&f, &v]).unwrap();
    assert!(dft(&v, Direction::Forward).unwrap().max_abs_diff(&fv).unwrap() < 1e-13);
}

#[test]
fn theorem_examples() {
    let ones = real(&[1., 1.]);
    let t = check_conv_theorem(&ones, &ones, Signature::CONVOLUTION).unwrap();
    assert_eq!(conv1d(&ones, &ones, Signature::CONVOLUTION).unwrap(), real(&[2., 2.]));
    assert!(t.lhs.max_abs_diff(&real(&[2. * 2f64.sqrt(), 0.])).unwrap() < 1e-15);
    assert!(t.residual < 1e-15);

    let mut r = rng(42);
    let b = complex_tensor(&mut r, &[6]);
    let t = check_conv_theorem(&unit(6, 0).unwrap(), &b, Signature::CONVOLUTION).unwrap();
    assert!(t.residual < 1e-14);

    for sig in Signature::ALL {
        for d in [1, 2, 5, 12, 16] {
            let a = complex_tensor(&mut r, &[d]);
            let b = complex_tensor(&mut r, &[d]);
            assert!(check_conv_theorem(&a, &b, sig).unwrap().residual < 1e-9, "{sig} D={d}");
        }
    }
}

#[test]
fn product_side_of_the_theorem() {
    // F(a o b) = (1/sqrt D) (Fa * Fb)
    let mut r = rng(43);
    let d = 10;
    let a = complex_tensor(&mut r, &[d]);
    let b = complex_tensor(&mut r, &[d]);
    let lhs = dft(&wirecalc::products::hadamard(&a, &b).unwrap(), Direction::Forward).unwrap();
    let fa = dft(&a, Direction::Forward).unwrap();
    let fb = dft(&b, Direction::Forward).unwrap();
    let rhs = conv1d(&fa, &fb, Signature::CONVOLUTION).unwrap().scale(1.0 / (d as f64).sqrt());
    assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-12);
}

#[test]
fn linear_convolution() {
    let out = linear_conv(&real(&[1., 2., 3.]), &real(&[1., 1.])).unwrap();
    assert_eq!(out, real(&[1., 3., 5., 3.]));
}
