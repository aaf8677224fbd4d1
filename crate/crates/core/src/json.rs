//! JSON interchange for tensors.
//!
//! ```json
//! {"shape": [2, 2], "dtype": "f64", "data": [1.0, 0.0, 0.0, 1.0]}
//! {"shape": [2], "dtype": "c64", "data": [[1.0, 0.5], [0.0, -1.0]]}
//! ```
//!
//! Data is flat and row-major. Numbers are written with the shortest
//! representation that parses back to the same bits.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::tensor::{Data, Tensor};

/// Whether non-finite values are accepted on load. They are spelled
/// `"NaN"`, `"inf"` and `"-inf"`; strict mode rejects them with their flat
/// index.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct ReadOptions {
    pub permissive: bool,
}

fn number(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("NaN")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

#[derive(Serialize)]
struct TensorDoc<'a> {
    shape: &'a [usize],
    dtype: &'static str,
    data: Vec<Value>,
}

fn doc(t: &Tensor) -> TensorDoc<'_> {
    let (dtype, data) = match t.data() {
        Data::Real(v) => ("f64", v.iter().map(|&x| number(x)).collect()),
        Data::Complex(v) => (
            "c64",
            v.iter()
                .map(|z| Value::Array(vec![number(z.re), number(z.im)]))
                .collect(),
        ),
    };
    TensorDoc {
        shape: t.shape(),
        dtype,
        data,
    }
}

pub fn tensor_to_value(t: &Tensor) -> Value {
    serde_json::to_value(doc(t)).expect("tensor documents always serialize")
}

/// Compact text with keys in the order `shape`, `dtype`, `data`.
pub fn tensor_to_string(t: &Tensor) -> String {
    serde_json::to_string(&doc(t)).expect("tensor documents always serialize")
}

fn read_number(v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| Error::Json(format!("number {n} is not representable as f64"))),
        Value::String(s) => match s.as_str() {
            "NaN" | "nan" => Ok(f64::NAN),
            "inf" | "Infinity" => Ok(f64::INFINITY),
            "-inf" | "-Infinity" => Ok(f64::NEG_INFINITY),
            _ => Err(Error::Json(format!("'{s}' is not a number"))),
        },
        _ => Err(Error::Json(format!("expected a number, found {v}"))),
    }
}

pub fn tensor_from_value(v: &Value, opts: ReadOptions) -> Result<Tensor> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Json("tensor must be a JSON object".into()))?;
    let shape = obj
        .get("shape")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Json("missing \"shape\" list".into()))?
        .iter()
        .map(|e| {
            e.as_u64()
                .map(|x| x as usize)
                .ok_or_else(|| Error::Json(format!("shape entry {e} is not a non-negative integer")))
        })
        .collect::<Result<Vec<usize>>>()?;
    let dtype = match obj.get("dtype") {
        None => "f64",
        Some(Value::String(s)) => s.as_str(),
        Some(other) => return Err(Error::Json(format!("dtype must be a string, found {other}"))),
    };
    let data = obj
        .get("data")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Json("missing \"data\" list".into()))?;
    let t = match dtype {
        "f64" => {
            let values = data
                .iter()
                .map(read_number)
                .collect::<Result<Vec<f64>>>()?;
            Tensor::from_real(shape, values)?
        }
        "c64" => {
            let values = data
                .iter()
                .map(|pair| match pair.as_array().map(Vec::as_slice) {
                    Some([re, im]) => Ok(Complex64::new(
                        read_number(re)?,
                        read_number(im)?,
                    )),
                    _ => Err(Error::Json(format!("complex entry must be [re, im], found {pair}"))),
                })
                .collect::<Result<Vec<Complex64>>>()?;
            Tensor::from_complex(shape, values)?
        }
        other => return Err(Error::Json(format!("unknown dtype '{other}'"))),
    };
    if !opts.permissive {
        if let Some(k) = t.has_non_finite() {
            return Err(Error::NonFinite(k));
        }
    }
    Ok(t)
}

pub fn tensor_from_str(s: &str, opts: ReadOptions) -> Result<Tensor> {
    let v: Value = serde_json::from_str(s)?;
    tensor_from_value(&v, opts)
}

pub fn read_tensor(path: &Path, opts: ReadOptions) -> Result<Tensor> {
    let text = fs::read_to_string(path).map_err(|e| Error::Json(format!("{}: {e}", path.display())))?;
    tensor_from_str(&text, opts)
}

pub fn write_tensor(path: &Path, t: &Tensor) -> Result<()> {
    let mut text = tensor_to_string(t);
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::Json(format!("{}: {e}", path.display())))
}
