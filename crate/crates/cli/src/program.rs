//! The einsum input language.
//!
//! A program is an index spec, optionally followed by builtin operands:
//!
//! ```text
//! ij,jk->ik
//! iijk
//! ij,ijk->k @ delta[3,4] as operand 2
//! ai,ij,jb->ab @ chi[++-,5] as operand 2; fourier[4,forward] as operand 3
//! ```
//!
//! Operand positions count from 1. Builtins are `delta[N,D]`,
//! `gamma[I1,...,In]`, `chi[SIG,D]` and `fourier[D,DIR]`. The integer-list
//! form is a JSON array alternating operand references and label lists, with
//! an optional trailing output list:
//!
//! ```json
//! ["A", [0, 1], "B", [1, 2], [0, 2]]
//! ```
//!
//! Integer labels 0..25 map to `a..z` and 26..51 to `A..Z`. A reference that
//! spells a builtin binds it; any other string is a placeholder filled from
//! the command line.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::Value;
use thiserror::Error;
use wirecalc::mediators::{chi_dense, delta_dense, fourier_matrix, gamma_dense};
use wirecalc::{DeltaSpec, FourierSpec, GammaSpec, IndexSpec, Signature, Tensor};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProgramError {
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown builtin '{name}' at position {pos}")]
    UnknownBuiltin { name: String, pos: usize },
    #[error("operand {operand} is bound twice")]
    DuplicateBinding { operand: usize },
    #[error("operand {operand} does not exist: the program has {count} operands")]
    NoSuchOperand { operand: usize, count: usize },
    #[error("invalid integer-list program: {0}")]
    IntegerList(String),
    #[error(transparent)]
    Core(#[from] wirecalc::Error),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Builtin {
    Delta(DeltaSpec),
    Gamma(GammaSpec),
    Chi(Signature, usize),
    Fourier(FourierSpec),
}

impl Builtin {
    /// Parses one builtin; `offset` is added to reported positions.
    pub fn parse_at(text: &str, offset: usize) -> Result<Builtin, ProgramError> {
        let syntax = |pos: usize, message: &str| ProgramError::Syntax {
            pos: offset + pos,
            message: message.to_string(),
        };
        let lead = text.len() - text.trim_start().len();
        let body = text.trim();
        let open = body.find('[').ok_or_else(|| syntax(lead, "expected '[' after builtin name"))?;
        if !body.ends_with(']') {
            return Err(syntax(lead + body.len(), "expected ']' to close builtin arguments"));
        }
        let name = body[..open].trim();
        let args: Vec<&str> = body[open + 1..body.len() - 1].split(',').map(str::trim).collect();
        let args_at = offset + lead + open + 1;
        let int = |s: &str| -> Result<usize, ProgramError> {
            s.parse().map_err(|_| ProgramError::Syntax {
                pos: args_at,
                message: format!("'{s}' is not a non-negative integer"),
            })
        };
        let arity = |n: usize| -> Result<(), ProgramError> {
            if args.len() == n {
                Ok(())
            } else {
                Err(ProgramError::Syntax {
                    pos: args_at,
                    message: format!("{name} takes {n} arguments, got {}", args.len()),
                })
            }
        };
        Ok(match name {
            "delta" => {
                arity(2)?;
                Builtin::Delta(DeltaSpec::new(int(args[0])?, int(args[1])?)?)
            }
            "gamma" => Builtin::Gamma(GammaSpec::new(args.iter().map(|a| int(a)).collect::<Result<_, _>>()?)?),
            "chi" => {
                arity(2)?;
                let dim = int(args[1])?;
                if dim == 0 {
                    return Err(wirecalc::Error::InvalidParameter("chi needs D >= 1".into()).into());
                }
                Builtin::Chi(args[0].parse()?, dim)
            }
            "fourier" => {
                arity(2)?;
                let dim = int(args[0])?;
                if dim == 0 {
                    return Err(wirecalc::Error::InvalidParameter("fourier needs D >= 1".into()).into());
                }
                Builtin::Fourier(FourierSpec {
                    dim,
                    direction: args[1].parse()?,
                })
            }
            _ => {
                return Err(ProgramError::UnknownBuiltin {
                    name: name.to_string(),
                    pos: offset + lead,
                })
            }
        })
    }

    pub fn parse(text: &str) -> Result<Builtin, ProgramError> {
        Builtin::parse_at(text, 0)
    }

    pub fn rank(&self) -> usize {
        match self {
            Builtin::Delta(s) => s.rank,
            Builtin::Gamma(g) => g.input_dims().len() + 1,
            Builtin::Chi(..) => 3,
            Builtin::Fourier(_) => 2,
        }
    }

    pub fn to_dense(&self) -> wirecalc::Result<Tensor> {
        match self {
            Builtin::Delta(s) => delta_dense(*s),
            Builtin::Gamma(g) => gamma_dense(g),
            Builtin::Chi(sig, d) => chi_dense(*sig, *d),
            Builtin::Fourier(f) => fourier_matrix(*f),
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::Delta(s) => write!(f, "delta[{},{}]", s.rank, s.dim),
            Builtin::Gamma(g) => {
                let dims: Vec<String> = g.input_dims().iter().map(usize::to_string).collect();
                write!(f, "gamma[{}]", dims.join(","))
            }
            Builtin::Chi(sig, d) => write!(f, "chi[{sig},{d}]"),
            Builtin::Fourier(s) => write!(f, "fourier[{},{}]", s.dim, s.direction),
        }
    }
}

/// An index spec plus builtin operands keyed by 1-based operand position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EinsumProgram {
    pub spec: IndexSpec,
    pub builtins: BTreeMap<usize, Builtin>,
}

impl EinsumProgram {
    pub fn new(spec: IndexSpec, builtins: BTreeMap<usize, Builtin>) -> Result<EinsumProgram, ProgramError> {
        let count = spec.inputs().len();
        if let Some(&operand) = builtins.keys().find(|&&k| k == 0 || k > count) {
            return Err(ProgramError::NoSuchOperand { operand, count });
        }
        Ok(EinsumProgram { spec, builtins })
    }

    pub fn operand_count(&self) -> usize {
        self.spec.inputs().len()
    }

    /// Operand positions (1-based) that still need a tensor.
    pub fn open_operands(&self) -> Vec<usize> {
        (1..=self.operand_count()).filter(|k| !self.builtins.contains_key(k)).collect()
    }

    pub fn parse(text: &str) -> Result<EinsumProgram, ProgramError> {
        let (spec_text, rest) = match text.find('@') {
            Some(at) => (&text[..at], Some(at)),
            None => (text, None),
        };
        let spec = IndexSpec::parse(spec_text)?;
        let mut builtins = BTreeMap::new();
        let count = spec.inputs().len();
        if let Some(at) = rest {
            let mut start = at + 1;
            for clause in text[at + 1..].split(';') {
                let (operand, builtin) = parse_clause(clause, start)?;
                if operand == 0 || operand > count {
                    return Err(ProgramError::NoSuchOperand { operand, count });
                }
                if builtins.insert(operand, builtin).is_some() {
                    return Err(ProgramError::DuplicateBinding { operand });
                }
                start += clause.len() + 1;
            }
        }
        EinsumProgram::new(spec, builtins)
    }

    /// Parses the integer-list form; returns the program and the placeholder
    /// name of every operand.
    pub fn from_integer_list(v: &Value) -> Result<(EinsumProgram, Vec<String>), ProgramError> {
        let bad = |m: String| ProgramError::IntegerList(m);
        let items = v.as_array().ok_or_else(|| bad("expected a JSON array".into()))?;
        let mut inputs = Vec::new();
        let mut names = Vec::new();
        let mut builtins = BTreeMap::new();
        let mut output = None;
        let mut k = 0;
        while k < items.len() {
            match (&items[k], items.get(k + 1)) {
                (Value::String(name), Some(labels @ Value::Array(_))) => {
                    inputs.push(integer_labels(labels)?);
                    if name.contains('[') {
                        builtins.insert(inputs.len(), Builtin::parse(name)?);
                    }
                    names.push(name.clone());
                    k += 2;
                }
                (labels @ Value::Array(_), None) if !inputs.is_empty() => {
                    output = Some(integer_labels(labels)?);
                    k += 1;
                }
                (other, _) => return Err(bad(format!("unexpected element {other} at index {k}"))),
            }
        }
        let spec = match output {
            Some(out) => IndexSpec::new(inputs, out)?,
            None => IndexSpec::implicit(inputs)?,
        };
        Ok((EinsumProgram::new(spec, builtins)?, names))
    }

    /// The integer-list form of this program, with placeholder names
    /// `T1, T2, ...` for operands without a builtin.
    pub fn to_integer_list(&self) -> Value {
        let mut items = Vec::new();
        for (k, labels) in self.spec.inputs().iter().enumerate() {
            let name = match self.builtins.get(&(k + 1)) {
                Some(b) => b.to_string(),
                None => format!("T{}", k + 1),
            };
            items.push(Value::String(name));
            items.push(label_list(labels));
        }
        items.push(label_list(self.spec.output()));
        Value::Array(items)
    }
}

impl fmt::Display for EinsumProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.spec)?;
        for (n, (k, b)) in self.builtins.iter().enumerate() {
            f.write_str(if n == 0 { " @ " } else { "; " })?;
            write!(f, "{b} as operand {k}")?;
        }
        Ok(())
    }
}

fn parse_clause(clause: &str, offset: usize) -> Result<(usize, Builtin), ProgramError> {
    let Some(as_at) = clause.find(" as ") else {
        return Err(ProgramError::Syntax {
            pos: offset,
            message: "expected '<builtin> as operand <n>'".into(),
        });
    };
    let builtin = Builtin::parse_at(&clause[..as_at], offset)?;
    let tail_at = offset + as_at + 4;
    let tail = clause[as_at + 4..].trim();
    let number = tail
        .strip_prefix("operand")
        .map(str::trim)
        .and_then(|n| n.parse::<usize>().ok())
        .ok_or_else(|| ProgramError::Syntax {
            pos: tail_at,
            message: format!("expected 'operand <n>', found '{tail}'"),
        })?;
    Ok((number, builtin))
}

pub fn label_from_int(n: u64) -> Option<char> {
    match n {
        0..=25 => Some((b'a' + n as u8) as char),
        26..=51 => Some((b'A' + (n - 26) as u8) as char),
        _ => None,
    }
}

pub fn label_to_int(c: char) -> Option<u64> {
    match c {
        'a'..='z' => Some(c as u64 - 'a' as u64),
        'A'..='Z' => Some(c as u64 - 'A' as u64 + 26),
        _ => None,
    }
}

fn integer_labels(v: &Value) -> Result<Vec<char>, ProgramError> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| {
            x.as_u64()
                .and_then(label_from_int)
                .ok_or_else(|| ProgramError::IntegerList(format!("label {x} is not an integer in 0..=51")))
        })
        .collect()
}

fn label_list(labels: &[char]) -> Value {
    Value::Array(labels.iter().map(|&c| Value::from(label_to_int(c).unwrap())).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn plain_specs() {
        let p = EinsumProgram::parse("ij,jk->ik").unwrap();
        assert_eq!(p.operand_count(), 2);
        assert_eq!(p.spec.output(), &['i', 'k']);
        assert_eq!(p.to_string(), "ij,jk->ik");
        let p = EinsumProgram::parse("iijk").unwrap();
        assert_eq!(p.spec.output(), &['j', 'k']);
        assert_eq!(EinsumProgram::parse("i->ii").unwrap().spec.output(), &['i', 'i']);
    }

    #[test]
    fn builtin_bindings() {
        let p = EinsumProgram::parse("ij,ijk->k @ delta[3,4] as operand 2").unwrap();
        assert_eq!(p.builtins[&2], Builtin::Delta(DeltaSpec::new(3, 4).unwrap()));
        assert_eq!(p.open_operands(), vec![1]);
        let p = EinsumProgram::parse("ai,ij,jb->ab@chi[--+,5] as operand 2;fourier[4,inv] as operand 3").unwrap();
        assert_eq!(p.to_string(), "ai,ij,jb->ab @ chi[++-,5] as operand 2; fourier[4,inverse] as operand 3");
        assert_eq!(EinsumProgram::parse(&p.to_string()).unwrap(), p);
        let g = Builtin::parse("gamma[2, 3]").unwrap();
        assert_eq!(g.rank(), 3);
        assert_eq!(g.to_dense().unwrap().shape(), &[2, 3, 6]);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            EinsumProgram::parse("ij,j$->i"),
            Err(ProgramError::Core(wirecalc::Error::Syntax { pos: 4, .. }))
        ));
        match EinsumProgram::parse("ij->i @ sigma[2,2] as operand 1") {
            Err(ProgramError::UnknownBuiltin { name, pos }) => assert_eq!((name.as_str(), pos), ("sigma", 8)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            EinsumProgram::parse("ij->i @ delta[2,2] as operand 3"),
            Err(ProgramError::NoSuchOperand { operand: 3, count: 1 })
        ));
        assert!(matches!(
            EinsumProgram::parse("ij,jk->i @ delta[2,2] as operand 1; delta[2,3] as operand 1"),
            Err(ProgramError::DuplicateBinding { operand: 1 })
        ));
        assert!(matches!(
            EinsumProgram::parse("ij->i @ delta[2,2]"),
            Err(ProgramError::Syntax { pos: 7, .. })
        ));
        assert!(EinsumProgram::parse("i->i @ chi[++,3] as operand 1").is_err());
        assert!(EinsumProgram::parse("i->i @ delta[2] as operand 1").is_err());
        assert!(EinsumProgram::parse("i->i @ delta[2,x] as operand 1").is_err());
    }

    #[test]
    fn integer_list_matches_string_form() {
        let (p, names) = EinsumProgram::from_integer_list(&json!(["A", [0, 1], "B", [1, 2], [0, 2]])).unwrap();
        assert_eq!(p, EinsumProgram::parse("ab,bc->ac").unwrap());
        assert_eq!(names, vec!["A", "B"]);
        let (p, _) = EinsumProgram::from_integer_list(&json!(["A", [0, 0, 1, 2]])).unwrap();
        assert_eq!(p, EinsumProgram::parse("aabc").unwrap());
        let (p, _) = EinsumProgram::from_integer_list(&json!(["A", [0, 1], "delta[3,4]", [0, 1, 27]])).unwrap();
        assert_eq!(p, EinsumProgram::parse("ab,abB->B @ delta[3,4] as operand 2").unwrap());
        assert_eq!(EinsumProgram::from_integer_list(&p.to_integer_list()).unwrap().0, p);
        assert!(EinsumProgram::from_integer_list(&json!(["A", [52]])).is_err());
        assert!(EinsumProgram::from_integer_list(&json!([[0, 1]])).is_err());
        assert!(EinsumProgram::from_integer_list(&json!({"A": [0]})).is_err());
    }
}
