//! Random programs over the einsum input language, for round-trip testing.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use wirecalc::{DeltaSpec, Direction, FourierSpec, GammaSpec, IndexSpec, Signature};

use crate::program::{Builtin, EinsumProgram};

const LABELS: &[char] = &['a', 'b', 'c', 'd', 'i', 'j', 'k', 'X', 'Y', 'z'];

pub fn random_builtin(r: &mut impl Rng) -> Builtin {
    match r.gen_range(0..4) {
        0 => Builtin::Delta(DeltaSpec::new(r.gen_range(1..5), r.gen_range(1..7)).unwrap()),
        1 => {
            let n = r.gen_range(1..4);
            Builtin::Gamma(GammaSpec::new((0..n).map(|_| r.gen_range(1..5)).collect()).unwrap())
        }
        2 => Builtin::Chi(*Signature::ALL.choose(r).unwrap(), r.gen_range(1..9)),
        _ => Builtin::Fourier(FourierSpec {
            dim: r.gen_range(1..9),
            direction: *[Direction::Forward, Direction::Inverse].choose(r).unwrap(),
        }),
    }
}

/// A random program: 1 to 4 operands of rank 0 to 4, an implicit or
/// explicit output (possibly with repeated labels) and builtins on some
/// operands.
pub fn random_program(r: &mut impl Rng) -> EinsumProgram {
    let n = r.gen_range(1..5);
    let inputs: Vec<Vec<char>> = (0..n)
        .map(|_| (0..r.gen_range(0..5)).map(|_| *LABELS.choose(r).unwrap()).collect())
        .collect();
    let present: Vec<char> = {
        let mut v: Vec<char> = inputs.iter().flatten().copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let spec = if r.gen_bool(0.3) || present.is_empty() {
        IndexSpec::implicit(inputs).unwrap()
    } else {
        let out = (0..r.gen_range(0..=present.len() + 1))
            .map(|_| *present.choose(r).unwrap())
            .collect();
        IndexSpec::new(inputs, out).unwrap()
    };
    let mut builtins = BTreeMap::new();
    for k in 1..=n {
        if r.gen_bool(0.3) {
            builtins.insert(k, random_builtin(r));
        }
    }
    EinsumProgram::new(spec, builtins).unwrap()
}

/// A non-canonical spelling of `p`: extra whitespace, flipped signatures
/// and abbreviated directions.
pub fn respell(p: &EinsumProgram, r: &mut impl Rng) -> String {
    let ws = |r: &mut dyn rand::RngCore| if r.gen_bool(0.5) { " " } else { "" };
    let mut s = String::new();
    for (k, labels) in p.spec.inputs().iter().enumerate() {
        if k > 0 {
            s.push_str(ws(r));
            s.push(',');
        }
        for l in labels {
            s.push_str(ws(r));
            s.push(*l);
        }
    }
    s.push_str(ws(r));
    s.push_str("->");
    s.extend(p.spec.output());
    for (n, (k, b)) in p.builtins.iter().enumerate() {
        s.push_str(if n == 0 { "@" } else { " ;" });
        s.push_str(ws(r));
        let text = match b {
            Builtin::Chi(sig, d) if r.gen_bool(0.5) => {
                let flipped: String = sig.to_string().chars().map(|c| if c == '+' { '-' } else { '+' }).collect();
                format!("chi[ {flipped} , {d} ]")
            }
            Builtin::Fourier(f) => {
                let dir = if f.direction == Direction::Forward { "fwd" } else { "inv" };
                format!("fourier[{},{dir}]", f.dim)
            }
            other => other.to_string(),
        };
        s.push_str(&format!("{text} as operand  {k}"));
    }
    s
}
