use num_complex::Complex64;
use proptest::prelude::*;
use wirecalc::mediators::{gamma_dense, GammaSpec};
use wirecalc::random::{complex_tensor, rng};
use wirecalc::{contract_pair, einsum_eval, einsum_eval_with, EvalOptions, Error, IndexSpec, Tensor};

fn spec(s: &str) -> IndexSpec {
    IndexSpec::parse(s).unwrap()
}

fn real(shape: &[usize], v: &[f64]) -> Tensor {
    Tensor::from_real(shape.to_vec(), v.to_vec()).unwrap()
}

fn close(a: &Tensor, b: &Tensor, rel: f64) -> bool {
    a.shape() == b.shape() && a.rel_residual(b).unwrap() <= rel
}

#[test]
fn identity_times_matrix() {
    let id = Tensor::identity(2).unwrap();
    let b = real(&[2, 3], &[1., 2., 3., 4., 5., 6.]);
    assert_eq!(einsum_eval(&spec("ij,jk->ik"), &[&id, &b]).unwrap(), b);
}

#[test]
fn partial_trace_of_single_entry() {
    let a = Tensor::from_fn_real(vec![2, 2, 2, 2], |ix| if ix.iter().all(|&x| x == 0) { 1.0 } else { 0.0 }).unwrap();
    let out = einsum_eval(&spec("iijk"), &[&a]).unwrap();
    assert_eq!(out, real(&[2, 2], &[1., 0., 0., 0.]));
}

#[test]
fn outer_product_matches_loops() {
    let mut r = rng(1);
    let a = complex_tensor(&mut r, &[2, 2]);
    let b = complex_tensor(&mut r, &[2, 2]);
    let out = einsum_eval(&spec("ij,kl->ikjl"), &[&a, &b]).unwrap();
    let oracle = Tensor::from_fn_complex(vec![2, 2, 2, 2], |ix| {
        let (i, k, j, l) = (ix[0], ix[1], ix[2], ix[3]);
        a.get(&[i, j]) * b.get(&[k, l])
    })
    .unwrap();
    assert_eq!(out, oracle);
}

#[test]
fn contract_pair_examples() {
    let a = real(&[3], &[1., 2., 3.]);
    let b = real(&[3], &[1., 1., 1.]);
    let s = contract_pair(&a, &['i'], &b, &['i'], &[]).unwrap();
    assert_eq!(s.rank(), 0);
    assert_eq!(s.item().re, 6.0);

    let id = Tensor::identity(2).unwrap();
    assert_eq!(contract_pair(&id, &['i', 'j'], &id, &['j', 'k'], &['i', 'k']).unwrap(), id);

    let mut r = rng(2);
    let x = complex_tensor(&mut r, &[3, 4]);
    let y = complex_tensor(&mut r, &[4, 2]);
    let out = contract_pair(&x, &['i', 'j'], &y, &['j', 'k'], &['i', 'k']).unwrap();
    let oracle = Tensor::from_fn_complex(vec![3, 2], |ix| {
        (0..4).map(|j| x.get(&[ix[0], j]) * y.get(&[j, ix[1]])).sum()
    })
    .unwrap();
    assert!(close(&out, &oracle, 1e-14));
}

#[test]
fn errors_name_the_problem() {
    let a = Tensor::identity(2).unwrap();
    let b = Tensor::identity(3).unwrap();
    match einsum_eval(&spec("ij,jk->ik"), &[&a, &b]) {
        Err(Error::ExtentMismatch { label, first, second }) => {
            assert_eq!((label, first, second), ('j', 2, 3));
        }
        other => panic!("{other:?}"),
    }
    assert!(matches!(IndexSpec::parse("ij->k"), Err(Error::UnknownOutputLabel(_))));
    assert!(matches!(einsum_eval(&spec("->"), &[]), Err(Error::EmptyOperandList) | Err(Error::OperandCountMismatch { .. })));
    assert!(matches!(IndexSpec::parse("ij,j$->i"), Err(Error::Syntax { pos: 4, .. })));
}

#[test]
fn budget_is_enforced() {
    let mut r = rng(3);
    let a = complex_tensor(&mut r, &[8, 8]);
    let opts = EvalOptions { budget: Some(10) };
    assert!(matches!(
        einsum_eval_with(&spec("ij,jk->ik"), &[&a, &a], opts),
        Err(Error::BudgetExceeded { .. })
    ));
}

#[test]
fn implicit_output_is_sorted_singletons() {
    let s = spec("ba,ac");
    assert_eq!(s.output(), &['b', 'c']);
    assert_eq!(spec("iijk").output(), &['j', 'k']);
}

#[test]
fn repeated_output_label_embeds_diagonal() {
    let v = real(&[3], &[2., 0., 5.]);
    let out = einsum_eval(&spec("i->ii"), &[&v]).unwrap();
    assert_eq!(out, real(&[3, 3], &[2., 0., 0., 0., 0., 0., 0., 0., 5.]));
}

#[test]
fn transpose_examples() {
    let a = real(&[2, 3], &[1., 2., 3., 4., 5., 6.]);
    let t = a.transpose(&[1, 0]).unwrap();
    assert_eq!(t.shape(), &[3, 2]);
    for i in 0..2 {
        for j in 0..3 {
            assert_eq!(t.get(&[j, i]), a.get(&[i, j]));
        }
    }
    let mut r = rng(4);
    let x = complex_tensor(&mut r, &[2, 3, 4, 5]);
    let twice = x.transpose(&[2, 3, 0, 1]).unwrap().transpose(&[2, 3, 0, 1]).unwrap();
    assert_eq!(twice, x);
    let p = [3, 0, 2, 1];
    let inv = [1, 3, 2, 0];
    assert_eq!(x.transpose(&p).unwrap().transpose(&inv).unwrap(), x);
    assert!(matches!(x.transpose(&[0, 0, 1, 2]), Err(Error::InvalidPermutation { .. })));
}

#[test]
fn vectorization_examples() {
    let a = real(&[2, 2], &[1., 2., 3., 4.]);
    assert_eq!(a.vectorize_col().unwrap(), real(&[4], &[1., 3., 2., 4.]));
    assert_eq!(a.vectorize_row().unwrap(), real(&[4], &[1., 2., 3., 4.]));
    assert_eq!(real(&[4], &[1., 3., 2., 4.]).devectorize(&[2, 2]).unwrap(), a);

    let column = real(&[3, 1], &[7., 8., 9.]);
    assert_eq!(column.vectorize_col().unwrap(), real(&[3], &[7., 8., 9.]));

    let sym = real(&[2, 2], &[1., 5., 5., 2.]);
    assert_eq!(sym.vectorize_row().unwrap(), sym.vectorize_col().unwrap());

    let mut r = rng(5);
    let x = complex_tensor(&mut r, &[3, 4]);
    let g = gamma_dense(&GammaSpec::new(vec![3, 4]).unwrap()).unwrap();
    assert_eq!(x.vectorize_col().unwrap(), einsum_eval(&spec("ij,ijm->m"), &[&x, &g]).unwrap());

    let y = complex_tensor(&mut r, &[4, 2]);
    assert_eq!(y.vectorize_row().unwrap(), y.t().unwrap().vectorize_col().unwrap());

    let v = complex_tensor(&mut r, &[6]);
    assert_eq!(v.devectorize(&[6]).unwrap(), v);
    let w = complex_tensor(&mut r, &[24]);
    let cube = w.devectorize(&[2, 3, 4]).unwrap();
    assert_eq!(cube.get(&[1, 2, 3]), w.get(&[1 + 2 * 2 + 3 * 6]));
    assert!(matches!(w.devectorize(&[5, 5]), Err(Error::ExtentProductMismatch { .. })));
    assert!(matches!(cube.vectorize_col(), Err(Error::RankMismatch { .. })));
}

fn shape_strategy(rank: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1usize..4, rank)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multilinear_in_each_operand(
        seed in any::<u64>(),
        dims in shape_strategy(3),
        alpha_re in -2.0f64..2.0,
        alpha_im in -2.0f64..2.0,
        which in 0usize..2,
    ) {
        let mut r = rng(seed);
        let (i, j, k) = (dims[0], dims[1], dims[2]);
        let s = spec("ij,jk->ik");
        let shapes = [[i, j], [j, k]];
        let x = complex_tensor(&mut r, &shapes[which]);
        let y = complex_tensor(&mut r, &shapes[which]);
        let other = complex_tensor(&mut r, &shapes[1 - which]);
        let alpha = Complex64::new(alpha_re, alpha_im);
        let eval = |t: &Tensor| {
            if which == 0 { einsum_eval(&s, &[t, &other]) } else { einsum_eval(&s, &[&other, t]) }.unwrap()
        };
        let combined = x.scale_complex(alpha).add(&y).unwrap();
        let lhs = eval(&combined);
        let rhs = eval(&x).scale_complex(alpha).add(&eval(&y)).unwrap();
        prop_assert!(lhs.rel_residual(&rhs).unwrap() <= 1e-12);
    }

    #[test]
    fn order_independent(seed in any::<u64>(), dims in shape_strategy(4)) {
        let mut r = rng(seed);
        let (i, j, k, l) = (dims[0], dims[1], dims[2], dims[3]);
        let a = complex_tensor(&mut r, &[i, j]);
        let b = complex_tensor(&mut r, &[j, k]);
        let c = complex_tensor(&mut r, &[k, l]);
        let left = contract_pair(&contract_pair(&a, &['i', 'j'], &b, &['j', 'k'], &['i', 'k']).unwrap(), &['i', 'k'], &c, &['k', 'l'], &['i', 'l']).unwrap();
        let right = contract_pair(&a, &['i', 'j'], &contract_pair(&b, &['j', 'k'], &c, &['k', 'l'], &['j', 'l']).unwrap(), &['j', 'l'], &['i', 'l']).unwrap();
        let joint = einsum_eval(&spec("ij,jk,kl->il"), &[&a, &b, &c]).unwrap();
        prop_assert!(left.rel_residual(&right).unwrap() <= 1e-12);
        prop_assert!(joint.rel_residual(&left).unwrap() <= 1e-12);
    }

    #[test]
    fn vectorize_round_trips(seed in any::<u64>(), dims in shape_strategy(2)) {
        let mut r = rng(seed);
        let a = complex_tensor(&mut r, &dims);
        prop_assert_eq!(a.vectorize_col().unwrap().devectorize(&dims).unwrap(), a.clone());
        let v = a.vectorize_col().unwrap();
        prop_assert_eq!(v.devectorize(&dims).unwrap().vectorize_col().unwrap(), v);
    }

    #[test]
    fn transpose_inverse_is_exact(seed in any::<u64>(), dims in shape_strategy(4), perm in Just([0usize, 1, 2, 3]).prop_shuffle()) {
        let mut r = rng(seed);
        let a = complex_tensor(&mut r, &dims);
        let mut inv = [0; 4];
        for (k, &p) in perm.iter().enumerate() {
            inv[p] = k;
        }
        prop_assert_eq!(a.transpose(&perm).unwrap().transpose(&inv).unwrap(), a);
    }
}
