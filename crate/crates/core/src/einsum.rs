//! Einstein-summation evaluation.
//!
//! Labels that appear in no output position are summed over. Multi-operand
//! expressions are evaluated by greedy pairwise contraction: at each step the
//! pair whose result has the smallest element count is contracted, ties going
//! to the lowest `(left, right)` operand positions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::tensor::{permute, strided_gather, strides, Pair, Scalar, Tensor};

pub type Label = char;

/// Per-operand index labels plus the ordered output labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IndexSpec {
    inputs: Vec<Vec<Label>>,
    output: Vec<Label>,
}

impl IndexSpec {
    /// An explicit spec. Output labels must occur in some input; they may
    /// repeat, which produces a diagonal embedding (`"i->ii"`).
    pub fn new(inputs: Vec<Vec<Label>>, output: Vec<Label>) -> Result<IndexSpec> {
        if inputs.is_empty() {
            return Err(Error::EmptyOperandList);
        }
        let seen: BTreeSet<Label> = inputs.iter().flatten().copied().collect();
        if let Some(&l) = output.iter().find(|l| !seen.contains(l)) {
            return Err(Error::UnknownOutputLabel(l));
        }
        Ok(IndexSpec { inputs, output })
    }

    /// Implicit output: labels that occur exactly once overall, sorted.
    pub fn implicit(inputs: Vec<Vec<Label>>) -> Result<IndexSpec> {
        let mut counts: BTreeMap<Label, usize> = BTreeMap::new();
        for l in inputs.iter().flatten() {
            *counts.entry(*l).or_default() += 1;
        }
        let output = counts
            .into_iter()
            .filter(|&(_, c)| c == 1)
            .map(|(l, _)| l)
            .collect();
        IndexSpec::new(inputs, output)
    }

    /// Parses `"ij,jk->ik"`, `"ij,kl"` or `"iijk"`. Whitespace is ignored.
    pub fn parse(text: &str) -> Result<IndexSpec> {
        let mut inputs: Vec<Vec<Label>> = vec![vec![]];
        let mut output: Option<Vec<Label>> = None;
        let chars: Vec<char> = text.chars().collect();
        let mut pos = 0;
        while pos < chars.len() {
            let c = chars[pos];
            match c {
                c if c.is_whitespace() => {}
                c if c.is_ascii_alphabetic() => match output.as_mut() {
                    Some(out) => out.push(c),
                    None => inputs.last_mut().unwrap().push(c),
                },
                ',' if output.is_none() => inputs.push(vec![]),
                '-' if output.is_none() && chars.get(pos + 1) == Some(&'>') => {
                    output = Some(vec![]);
                    pos += 1;
                }
                '-' if output.is_some() && chars.get(pos + 1) == Some(&'>') => {
                    return Err(Error::Syntax {
                        pos,
                        message: "'->' may appear only once".into(),
                    })
                }
                ',' => {
                    return Err(Error::Syntax {
                        pos,
                        message: "',' is not allowed in the output".into(),
                    })
                }
                _ => {
                    return Err(Error::Syntax {
                        pos,
                        message: format!("unexpected character '{c}'"),
                    })
                }
            }
            pos += 1;
        }
        match output {
            Some(out) => IndexSpec::new(inputs, out),
            None => IndexSpec::implicit(inputs),
        }
    }

    pub fn inputs(&self) -> &[Vec<Label>] {
        &self.inputs
    }

    pub fn output(&self) -> &[Label] {
        &self.output
    }

    /// Extent of every label, checked for consistency across operands.
    pub fn label_extents(&self, shapes: &[&[usize]]) -> Result<BTreeMap<Label, usize>> {
        if shapes.len() != self.inputs.len() {
            return Err(Error::OperandCountMismatch {
                expected: self.inputs.len(),
                got: shapes.len(),
            });
        }
        let mut extents = BTreeMap::new();
        for (k, (labels, shape)) in self.inputs.iter().zip(shapes).enumerate() {
            if labels.len() != shape.len() {
                return Err(Error::LabelCountMismatch {
                    operand: k,
                    rank: shape.len(),
                    labels: labels.len(),
                });
            }
            for (&l, &e) in labels.iter().zip(shape.iter()) {
                record_extent(&mut extents, l, e)?;
            }
        }
        Ok(extents)
    }
}

impl fmt::Display for IndexSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, labels) in self.inputs.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            labels.iter().try_for_each(|l| write!(f, "{l}"))?;
        }
        f.write_str("->")?;
        self.output.iter().try_for_each(|l| write!(f, "{l}"))
    }
}

fn record_extent(map: &mut BTreeMap<Label, usize>, label: Label, extent: usize) -> Result<()> {
    match map.get(&label) {
        Some(&prev) if prev != extent => Err(Error::ExtentMismatch {
            label,
            first: prev,
            second: extent,
        }),
        _ => {
            map.insert(label, extent);
            Ok(())
        }
    }
}

/// One pairwise contraction. Operand positions refer to the operand list as
/// it stands when the step runs; the result replaces `left` and `right` is
/// removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanStep {
    pub left: usize,
    pub right: usize,
    pub result: Vec<Label>,
    pub cost: u128,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionPlan {
    pub extents: BTreeMap<Label, usize>,
    /// Operand labels after diagonal extraction and summing of private labels.
    pub prepared: Vec<Vec<Label>>,
    pub steps: Vec<PlanStep>,
    /// Estimated scalar multiply-adds for the whole evaluation.
    pub cost: u128,
}

fn numel(labels: &[Label], extents: &BTreeMap<Label, usize>) -> u128 {
    labels.iter().map(|l| extents[l] as u128).product()
}

fn dedup(labels: &[Label]) -> Vec<Label> {
    let mut out = Vec::with_capacity(labels.len());
    for &l in labels {
        if !out.contains(&l) {
            out.push(l);
        }
    }
    out
}

impl ContractionPlan {
    pub fn new(spec: &IndexSpec, shapes: &[&[usize]]) -> Result<ContractionPlan> {
        if spec.inputs.is_empty() {
            return Err(Error::EmptyOperandList);
        }
        let extents = spec.label_extents(shapes)?;
        let out_set: BTreeSet<Label> = spec.output.iter().copied().collect();
        let mut cost: u128 = 0;

        let mut current: Vec<Vec<Label>> = Vec::with_capacity(spec.inputs.len());
        for (k, labels) in spec.inputs.iter().enumerate() {
            cost += numel(labels, &extents);
            let elsewhere: BTreeSet<Label> = spec
                .inputs
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .flat_map(|(_, l)| l.iter().copied())
                .collect();
            current.push(
                dedup(labels)
                    .into_iter()
                    .filter(|l| out_set.contains(l) || elsewhere.contains(l))
                    .collect(),
            );
        }
        let prepared = current.clone();

        let mut steps = Vec::new();
        while current.len() > 1 {
            let mut best: Option<(u128, usize, usize, Vec<Label>)> = None;
            for i in 0..current.len() {
                for j in i + 1..current.len() {
                    let result = pair_result(&current, i, j, &out_set);
                    let size = numel(&result, &extents);
                    if best.as_ref().is_none_or(|b| size < b.0) {
                        best = Some((size, i, j, result));
                    }
                }
            }
            let (_, i, j, result) = best.unwrap();
            let union = dedup(&[current[i].clone(), current[j].clone()].concat());
            let step_cost = numel(&union, &extents);
            cost += step_cost;
            steps.push(PlanStep {
                left: i,
                right: j,
                result: result.clone(),
                cost: step_cost,
            });
            current[i] = result;
            current.remove(j);
        }
        cost += numel(&spec.output, &extents);
        Ok(ContractionPlan {
            extents,
            prepared,
            steps,
            cost,
        })
    }
}

fn pair_result(current: &[Vec<Label>], i: usize, j: usize, out: &BTreeSet<Label>) -> Vec<Label> {
    let needed: BTreeSet<Label> = current
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != i && k != j)
        .flat_map(|(_, l)| l.iter().copied())
        .chain(out.iter().copied())
        .collect();
    dedup(&[current[i].clone(), current[j].clone()].concat())
        .into_iter()
        .filter(|l| needed.contains(l))
        .collect()
}

/// Evaluation limits.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct EvalOptions {
    /// Maximum estimated scalar multiply-adds; `None` disables the check.
    pub budget: Option<u64>,
}

pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            budget: Some(DEFAULT_BUDGET),
        }
    }
}

/// Evaluates `spec` over `operands` with the default budget.
pub fn einsum_eval(spec: &IndexSpec, operands: &[&Tensor]) -> Result<Tensor> {
    einsum_eval_with(spec, operands, EvalOptions::default())
}

pub fn einsum_eval_with(spec: &IndexSpec, operands: &[&Tensor], opts: EvalOptions) -> Result<Tensor> {
    if operands.is_empty() {
        return Err(Error::EmptyOperandList);
    }
    let shapes: Vec<&[usize]> = operands.iter().map(|t| t.shape()).collect();
    let plan = ContractionPlan::new(spec, &shapes)?;
    if let Some(budget) = opts.budget {
        if plan.cost > budget as u128 {
            return Err(Error::BudgetExceeded {
                cost: plan.cost,
                budget,
            });
        }
    }
    let mut current: Vec<(Tensor, Vec<Label>)> = operands
        .iter()
        .zip(spec.inputs.iter())
        .zip(plan.prepared.iter())
        .map(|((t, labels), keep)| reduce_to(t, labels, keep))
        .collect();
    for step in &plan.steps {
        let (b, bl) = current.remove(step.right);
        let (a, al) = &current[step.left];
        let result = contract_unique(a, al, &b, &bl, &step.result);
        current[step.left] = (result, step.result.clone());
    }
    let (t, labels) = current.pop().unwrap();
    Ok(expand_output(&t, &labels, &spec.output))
}

/// Contracts two operands: labels present in both and absent from
/// `out_labels` are summed; labels private to one operand and absent from the
/// output are summed too. Repeated labels inside one operand select its
/// diagonal.
pub fn contract_pair(
    a: &Tensor,
    a_labels: &[Label],
    b: &Tensor,
    b_labels: &[Label],
    out_labels: &[Label],
) -> Result<Tensor> {
    let mut extents = BTreeMap::new();
    for (t, labels, operand) in [(a, a_labels, 0), (b, b_labels, 1)] {
        if t.rank() != labels.len() {
            return Err(Error::LabelCountMismatch {
                operand,
                rank: t.rank(),
                labels: labels.len(),
            });
        }
        for (&l, &e) in labels.iter().zip(t.shape()) {
            record_extent(&mut extents, l, e)?;
        }
    }
    for (k, l) in out_labels.iter().enumerate() {
        if !extents.contains_key(l) {
            return Err(Error::UnknownOutputLabel(*l));
        }
        if out_labels[..k].contains(l) {
            return Err(Error::RepeatedOutputLabel(*l));
        }
    }
    let keep_a: Vec<Label> = dedup(a_labels)
        .into_iter()
        .filter(|l| out_labels.contains(l) || b_labels.contains(l))
        .collect();
    let keep_b: Vec<Label> = dedup(b_labels)
        .into_iter()
        .filter(|l| out_labels.contains(l) || a_labels.contains(l))
        .collect();
    let (ra, la) = reduce_to(a, a_labels, &keep_a);
    let (rb, lb) = reduce_to(b, b_labels, &keep_b);
    Ok(contract_unique(&ra, &la, &rb, &lb, out_labels))
}

/// Takes diagonals over repeated labels and sums every label not in `keep`.
/// The result carries exactly the labels of `keep`, in that order.
fn reduce_to(t: &Tensor, labels: &[Label], keep: &[Label]) -> (Tensor, Vec<Label>) {
    let unique = dedup(labels);
    let t = if unique.len() == labels.len() {
        t.clone()
    } else {
        diagonal(t, labels, &unique)
    };
    if unique == keep {
        return (t, unique);
    }
    let mask: Vec<bool> = unique.iter().map(|l| keep.contains(l)).collect();
    let summed = sum_axes(&t, &mask);
    let kept: Vec<Label> = unique.into_iter().filter(|l| keep.contains(l)).collect();
    let perm: Vec<usize> = keep
        .iter()
        .map(|l| kept.iter().position(|k| k == l).unwrap())
        .collect();
    (summed.transpose(&perm).unwrap(), keep.to_vec())
}

fn diagonal(t: &Tensor, labels: &[Label], unique: &[Label]) -> Tensor {
    let in_strides = strides(t.shape());
    let mut shape = Vec::with_capacity(unique.len());
    let mut step = Vec::with_capacity(unique.len());
    for u in unique {
        let mut s = 0;
        let mut extent = 0;
        for (k, l) in labels.iter().enumerate() {
            if l == u {
                s += in_strides[k];
                extent = t.shape()[k];
            }
        }
        shape.push(extent);
        step.push(s);
    }
    match t.data() {
        crate::tensor::Data::Real(v) => {
            Tensor::from_parts_unchecked(shape.clone(), strided_gather(v, &shape, &step))
        }
        crate::tensor::Data::Complex(v) => {
            Tensor::from_parts_unchecked(shape.clone(), strided_gather(v, &shape, &step))
        }
    }
}

fn sum_axes(t: &Tensor, keep: &[bool]) -> Tensor {
    fn go<T: Scalar>(data: &[T], shape: &[usize], keep: &[bool]) -> (Vec<usize>, Vec<T>) {
        let out_shape: Vec<usize> = shape
            .iter()
            .zip(keep)
            .filter(|(_, &k)| k)
            .map(|(&e, _)| e)
            .collect();
        let out_strides = strides(&out_shape);
        let mut step = vec![0; shape.len()];
        let mut j = 0;
        for (k, &kept) in keep.iter().enumerate() {
            if kept {
                step[k] = out_strides[j];
                j += 1;
            }
        }
        let mut out = vec![T::zero(); out_shape.iter().product()];
        let mut idx = vec![0; shape.len()];
        let mut off = 0usize;
        for &x in data {
            out[off] += x;
            for k in (0..shape.len()).rev() {
                idx[k] += 1;
                off += step[k];
                if idx[k] < shape[k] {
                    break;
                }
                off -= step[k] * idx[k];
                idx[k] = 0;
            }
        }
        (out_shape, out)
    }
    match t.data() {
        crate::tensor::Data::Real(v) => {
            let (s, d) = go(v, t.shape(), keep);
            Tensor::from_parts_unchecked(s, d)
        }
        crate::tensor::Data::Complex(v) => {
            let (s, d) = go(v, t.shape(), keep);
            Tensor::from_parts_unchecked(s, d)
        }
    }
}

/// Pairwise contraction on operands whose labels are unique, where every
/// label is either shared or part of `out`.
fn contract_unique(a: &Tensor, al: &[Label], b: &Tensor, bl: &[Label], out: &[Label]) -> Tensor {
    let batch: Vec<Label> = al
        .iter()
        .filter(|l| bl.contains(l) && out.contains(l))
        .copied()
        .collect();
    let contracted: Vec<Label> = al
        .iter()
        .filter(|l| bl.contains(l) && !out.contains(l))
        .copied()
        .collect();
    let a_free: Vec<Label> = al.iter().filter(|l| !bl.contains(l)).copied().collect();
    let b_free: Vec<Label> = bl.iter().filter(|l| !al.contains(l)).copied().collect();

    let extent = |l: &Label| -> usize {
        al.iter()
            .position(|x| x == l)
            .map(|k| a.shape()[k])
            .unwrap_or_else(|| b.shape()[bl.iter().position(|x| x == l).unwrap()])
    };
    let size = |ls: &[Label]| -> usize { ls.iter().map(extent).product() };
    let (nb, ni, nk, nj) = (size(&batch), size(&a_free), size(&contracted), size(&b_free));

    let a_order: Vec<Label> = [&batch[..], &a_free[..], &contracted[..]].concat();
    let b_order: Vec<Label> = [&batch[..], &contracted[..], &b_free[..]].concat();
    let a_perm: Vec<usize> = a_order.iter().map(|l| al.iter().position(|x| x == l).unwrap()).collect();
    let b_perm: Vec<usize> = b_order.iter().map(|l| bl.iter().position(|x| x == l).unwrap()).collect();

    let res_labels: Vec<Label> = [&batch[..], &a_free[..], &b_free[..]].concat();
    let res_shape: Vec<usize> = res_labels.iter().map(extent).collect();
    let out_perm: Vec<usize> = out
        .iter()
        .map(|l| res_labels.iter().position(|x| x == l).unwrap())
        .collect();

    fn kernel<T: Scalar>(
        a: &[T],
        a_shape: &[usize],
        a_perm: &[usize],
        b: &[T],
        b_shape: &[usize],
        b_perm: &[usize],
        dims: (usize, usize, usize, usize),
        res_shape: &[usize],
        out_perm: &[usize],
    ) -> (Vec<usize>, Vec<T>) {
        let (nb, ni, nk, nj) = dims;
        let ap = permute(a, a_shape, a_perm);
        let bp = permute(b, b_shape, b_perm);
        let mut res = vec![T::zero(); nb * ni * nj];
        for bt in 0..nb {
            for i in 0..ni {
                let row = &mut res[(bt * ni + i) * nj..(bt * ni + i + 1) * nj];
                let arow = &ap[(bt * ni + i) * nk..(bt * ni + i + 1) * nk];
                for (k, &aik) in arow.iter().enumerate() {
                    let brow = &bp[(bt * nk + k) * nj..(bt * nk + k + 1) * nj];
                    for (o, &bkj) in row.iter_mut().zip(brow) {
                        *o += aik * bkj;
                    }
                }
            }
        }
        let out_shape: Vec<usize> = out_perm.iter().map(|&p| res_shape[p]).collect();
        (out_shape, permute(&res, res_shape, out_perm))
    }

    let dims = (nb, ni, nk, nj);
    match Tensor::pair(a, b) {
        Pair::Real(x, y) => {
            let (s, d) = kernel(x, a.shape(), &a_perm, y, b.shape(), &b_perm, dims, &res_shape, &out_perm);
            Tensor::from_parts_unchecked(s, d)
        }
        Pair::Complex(x, y) => {
            let (s, d) = kernel(&x, a.shape(), &a_perm, &y, b.shape(), &b_perm, dims, &res_shape, &out_perm);
            Tensor::from_parts_unchecked(s, d)
        }
    }
}

/// Arranges the final operand (labels unique, all in `output`) into output
/// order, embedding diagonals where the output repeats a label.
fn expand_output(t: &Tensor, labels: &[Label], output: &[Label]) -> Tensor {
    let unique = dedup(output);
    let perm: Vec<usize> = unique
        .iter()
        .map(|l| labels.iter().position(|x| x == l).unwrap())
        .collect();
    let t = t.transpose(&perm).unwrap();
    if unique.len() == output.len() {
        return t;
    }
    let ext: Vec<usize> = output
        .iter()
        .map(|l| t.shape()[unique.iter().position(|u| u == l).unwrap()])
        .collect();
    let src: Vec<usize> = output
        .iter()
        .map(|l| unique.iter().position(|u| u == l).unwrap())
        .collect();
    let t_strides = strides(t.shape());
    let pick = |idx: &[usize]| -> Option<usize> {
        let mut chosen = vec![usize::MAX; unique.len()];
        for (k, &u) in src.iter().enumerate() {
            if chosen[u] == usize::MAX {
                chosen[u] = idx[k];
            } else if chosen[u] != idx[k] {
                return None;
            }
        }
        Some(chosen.iter().zip(&t_strides).map(|(i, s)| i * s).sum())
    };
    match t.data() {
        crate::tensor::Data::Real(v) => {
            Tensor::from_fn_real(ext, |idx| pick(idx).map_or(0.0, |o| v[o])).unwrap()
        }
        crate::tensor::Data::Complex(v) => Tensor::from_fn_complex(ext, |idx| {
            pick(idx).map_or(num_complex::Complex64::new(0.0, 0.0), |o| v[o])
        })
        .unwrap(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: &str) -> IndexSpec {
        IndexSpec::parse(s).unwrap()
    }

    fn real(shape: &[usize], v: &[f64]) -> Tensor {
        Tensor::from_real(shape.to_vec(), v.to_vec()).unwrap()
    }

    #[test]
    fn parse_forms() {
        let s = spec("ij,jk -> ik");
        assert_eq!(s.inputs(), &[vec!['i', 'j'], vec!['j', 'k']]);
        assert_eq!(s.output(), &['i', 'k']);
        assert_eq!(spec("iijk").output(), &['j', 'k']);
        assert_eq!(spec("ij,kl").output(), &['i', 'j', 'k', 'l']);
        assert_eq!(spec("i->ii").output(), &['i', 'i']);
        assert_eq!(spec("ij,jk->ik").to_string(), "ij,jk->ik");
        assert!(matches!(IndexSpec::parse("ij->k"), Err(Error::UnknownOutputLabel('k'))));
        assert!(matches!(IndexSpec::parse("i1"), Err(Error::Syntax { pos: 1, .. })));
        assert!(matches!(IndexSpec::parse("i->i->i"), Err(Error::Syntax { pos: 4, .. })));
    }

    #[test]
    fn identity_times_matrix() {
        let id = Tensor::identity(2).unwrap();
        let b = real(&[2, 3], &[1., 2., 3., 4., 5., 6.]);
        assert_eq!(einsum_eval(&spec("ij,jk->ik"), &[&id, &b]).unwrap(), b);
    }

    #[test]
    fn partial_trace_single_nonzero() {
        let a = Tensor::from_fn_real(vec![2, 2, 2, 2], |ix| {
            if ix.iter().all(|&i| i == 0) {
                1.0
            } else {
                0.0
            }
        })
        .unwrap();
        let r = einsum_eval(&spec("iijk"), &[&a]).unwrap();
        assert_eq!(r, real(&[2, 2], &[1., 0., 0., 0.]));
    }

    #[test]
    fn contract_pair_examples() {
        let a = real(&[3], &[1., 2., 3.]);
        let ones = real(&[3], &[1., 1., 1.]);
        let r = contract_pair(&a, &['i'], &ones, &['i'], &[]).unwrap();
        assert_eq!(r.shape(), &[] as &[usize]);
        assert_eq!(r.item().re, 6.0);

        let id = Tensor::identity(2).unwrap();
        let r = contract_pair(&id, &['i', 'j'], &id, &['j', 'k'], &['i', 'k']).unwrap();
        assert_eq!(r, id);

        let bad = real(&[2], &[1., 1.]);
        assert!(matches!(
            contract_pair(&a, &['i'], &bad, &['i'], &[]),
            Err(Error::ExtentMismatch { label: 'i', first: 3, second: 2 })
        ));
    }

    #[test]
    fn errors() {
        let a = real(&[2, 3], &[0.; 6]);
        let b = real(&[2, 3], &[0.; 6]);
        let err = einsum_eval(&spec("ij,jk->ik"), &[&a, &b]).unwrap_err();
        assert_eq!(err, Error::ExtentMismatch { label: 'j', first: 3, second: 2 });
        assert_eq!(einsum_eval(&spec("ij"), &[]).unwrap_err(), Error::EmptyOperandList);
        assert!(matches!(
            einsum_eval(&spec("ijk"), &[&a]),
            Err(Error::LabelCountMismatch { .. })
        ));
    }

    #[test]
    fn diag_embed_via_repeated_output() {
        let v = real(&[3], &[2., 0., 5.]);
        let r = einsum_eval(&spec("i->ii"), &[&v]).unwrap();
        assert_eq!(r, real(&[3, 3], &[2., 0., 0., 0., 0., 0., 0., 0., 5.]));
    }

    #[test]
    fn budget_is_enforced() {
        let a = Tensor::zeros(vec![50, 50]).unwrap();
        let opts = EvalOptions { budget: Some(1000) };
        assert!(matches!(
            einsum_eval_with(&spec("ij,jk->ik"), &[&a, &a], opts),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn greedy_plan_prefers_small_intermediates() {
        // (100x2)(2x100)(100x1): contracting the last two first keeps 2x1
        let s = spec("ij,jk,kl->il");
        let plan = ContractionPlan::new(&s, &[&[100, 2], &[2, 100], &[100, 1]]).unwrap();
        assert_eq!(plan.steps[0].left, 1);
        assert_eq!(plan.steps[0].right, 2);
        assert_eq!(plan.steps[0].result, vec!['j', 'l']);
    }
}
