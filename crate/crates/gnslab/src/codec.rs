//! Scalars and matrices in scenario and report JSON.
//!
//! Exact scalars are strings `"a/b+c/d i"` (spaces optional, either part may
//! be absent); integers may also be plain JSON numbers. Float scalars are
//! JSON numbers or `[re, im]` pairs.

use gnslab_core::{Complex64, Exact, Matrix, Scalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, Zero};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodecError {
    #[error("{0} scalar in a {1} scenario")]
    BackendMismatch(&'static str, &'static str),
    #[error("malformed scalar {0}")]
    Malformed(String),
    #[error("ragged matrix")]
    Ragged,
}

/// A scalar backend that can be read from and written to JSON.
pub trait Codec: Scalar {
    const NAME: &'static str;
    /// `lenient` converts scalars written for the other backend.
    fn decode(v: &Value, lenient: bool) -> Result<Self, CodecError>;
    fn encode(&self) -> Value;
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

/// Parses `"a/b+c/d i"`, `"-i"`, `"3"`, `"1/2 i"` and the like.
pub fn parse_exact(s: &str) -> Option<Exact> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return None;
    }
    let Some(body) = t.strip_suffix('i') else {
        return Some(Exact::new(parse_rational(&t)?, BigRational::zero()));
    };
    // split before the last sign that is not the leading one
    let cut = body.char_indices().skip(1).filter(|&(_, c)| c == '+' || c == '-').map(|(k, _)| k).last();
    let (re, im) = match cut {
        Some(k) => (parse_rational(&body[..k])?, &body[k..]),
        None => (BigRational::zero(), body),
    };
    let im = match im {
        "" | "+" => BigRational::from_integer(1.into()),
        "-" => BigRational::from_integer((-1).into()),
        other => parse_rational(other.strip_prefix('+').unwrap_or(other))?,
    };
    Some(Exact::new(re, im))
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn format_exact(x: &Exact) -> String {
    let one = BigRational::from_integer(1.into());
    let im_part = |im: &BigRational| {
        if *im == one {
            String::new()
        } else if *im == -one.clone() {
            "-".to_string()
        } else {
            fmt_rational(im)
        }
    };
    match (x.re.is_zero(), x.im.is_zero()) {
        (_, true) => fmt_rational(&x.re),
        (true, false) => format!("{}i", im_part(&x.im)),
        (false, false) => {
            let sign = if x.im.is_negative() { "" } else { "+" };
            format!("{}{}{}i", fmt_rational(&x.re), sign, im_part(&x.im))
        }
    }
}

fn rational_of_f64(x: f64, raw: &Value) -> Result<BigRational, CodecError> {
    BigRational::from_f64(x).ok_or_else(|| CodecError::Malformed(raw.to_string()))
}

impl Codec for Exact {
    const NAME: &'static str = "exact";

    fn decode(v: &Value, lenient: bool) -> Result<Self, CodecError> {
        let malformed = || CodecError::Malformed(v.to_string());
        match v {
            Value::String(s) => parse_exact(s).ok_or_else(malformed),
            Value::Number(n) => match n.as_i64() {
                Some(k) => Ok(<Exact as Scalar>::from_i64(k)),
                None if lenient => Ok(Exact::new(rational_of_f64(n.as_f64().ok_or_else(malformed)?, v)?, BigRational::zero())),
                None => Err(CodecError::BackendMismatch("float", "exact")),
            },
            Value::Array(pair) if pair.len() == 2 => {
                match (pair[0].as_i64(), pair[1].as_i64()) {
                    (Some(a), Some(b)) => Ok(Exact::new(
                        BigRational::from_integer(a.into()),
                        BigRational::from_integer(b.into()),
                    )),
                    _ if lenient => {
                        let re = pair[0].as_f64().ok_or_else(malformed)?;
                        let im = pair[1].as_f64().ok_or_else(malformed)?;
                        Ok(Exact::new(rational_of_f64(re, v)?, rational_of_f64(im, v)?))
                    }
                    _ if pair.iter().all(Value::is_number) => Err(CodecError::BackendMismatch("float", "exact")),
                    _ => Err(malformed()),
                }
            }
            _ => Err(malformed()),
        }
    }

    fn encode(&self) -> Value {
        Value::String(format_exact(self))
    }
}

impl Codec for Complex64 {
    const NAME: &'static str = "float";

    fn decode(v: &Value, lenient: bool) -> Result<Self, CodecError> {
        let malformed = || CodecError::Malformed(v.to_string());
        match v {
            Value::Number(n) => Ok(Complex64::new(n.as_f64().ok_or_else(malformed)?, 0.0)),
            Value::Array(pair) if pair.len() == 2 => {
                let re = pair[0].as_f64().ok_or_else(malformed)?;
                let im = pair[1].as_f64().ok_or_else(malformed)?;
                Ok(Complex64::new(re, im))
            }
            Value::String(s) if lenient => parse_exact(s).map(|x| x.to_c64()).ok_or_else(malformed),
            Value::String(s) if parse_exact(s).is_some() => Err(CodecError::BackendMismatch("exact", "float")),
            _ => Err(malformed()),
        }
    }

    fn encode(&self) -> Value {
        let num = |x: f64| serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null);
        if self.im == 0.0 {
            num(self.re)
        } else {
            Value::Array(vec![num(self.re), num(self.im)])
        }
    }
}

pub fn decode_vec<S: Codec>(v: &[Value], lenient: bool) -> Result<Vec<S>, CodecError> {
    v.iter().map(|x| S::decode(x, lenient)).collect()
}

pub fn decode_matrix<S: Codec>(rows: &[Vec<Value>], lenient: bool) -> Result<Matrix<S>, CodecError> {
    let rows: Vec<Vec<S>> = rows.iter().map(|r| decode_vec(r, lenient)).collect::<Result<_, _>>()?;
    if rows.is_empty() {
        return Ok(Matrix::zeros(0, 0));
    }
    Matrix::from_rows(rows).map_err(|_| CodecError::Ragged)
}

pub fn encode_vec<S: Codec>(v: &[S]) -> Value {
    Value::Array(v.iter().map(Codec::encode).collect())
}

pub fn encode_matrix<S: Codec>(m: &Matrix<S>) -> Value {
    Value::Array((0..m.rows()).map(|r| encode_vec(m.row(r))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn ex(re: (i64, i64), im: (i64, i64)) -> Exact {
        Exact::gaussian(re, im)
    }

    #[test]
    fn exact_strings() {
        assert_eq!(parse_exact("3"), Some(ex((3, 1), (0, 1))));
        assert_eq!(parse_exact("-1/2"), Some(ex((-1, 2), (0, 1))));
        assert_eq!(parse_exact("i"), Some(ex((0, 1), (1, 1))));
        assert_eq!(parse_exact("-i"), Some(ex((0, 1), (-1, 1))));
        assert_eq!(parse_exact("1/2 - 3/4 i"), Some(ex((1, 2), (-3, 4))));
        assert_eq!(parse_exact("-1+i"), Some(ex((-1, 1), (1, 1))));
        assert_eq!(parse_exact("2/3i"), Some(ex((0, 1), (2, 3))));
        assert_eq!(parse_exact("1/0"), None);
        assert_eq!(parse_exact("x"), None);
        assert_eq!(parse_exact(""), None);
    }

    #[test]
    fn exact_round_trip() {
        for x in [ex((0, 1), (0, 1)), ex((7, 3), (0, 1)), ex((0, 1), (-1, 1)), ex((-1, 2), (5, 7)), ex((2, 1), (-1, 1))] {
            assert_eq!(parse_exact(&format_exact(&x)), Some(x.clone()));
        }
        assert_eq!(format_exact(&ex((1, 2), (-3, 4))), "1/2-3/4i");
    }

    #[test]
    fn backend_mismatch() {
        assert_eq!(Exact::decode(&json!(0.5), false), Err(CodecError::BackendMismatch("float", "exact")));
        assert_eq!(Exact::decode(&json!(0.5), true), Ok(ex((1, 2), (0, 1))));
        assert_eq!(Exact::decode(&json!(2), false), Ok(ex((2, 1), (0, 1))));
        assert_eq!(Complex64::decode(&json!("1/2"), false), Err(CodecError::BackendMismatch("exact", "float")));
        assert_eq!(Complex64::decode(&json!("1/2"), true), Ok(Complex64::new(0.5, 0.0)));
        assert_eq!(Complex64::decode(&json!([1.0, -2.0]), false), Ok(Complex64::new(1.0, -2.0)));
    }

    #[test]
    fn matrices() {
        let m: Matrix<Exact> = decode_matrix(&[vec![json!(1), json!("i")], vec![json!("-i"), json!(0)]], false).unwrap();
        assert_eq!(encode_matrix(&m), json!([["1", "i"], ["-i", "0"]]));
        assert_eq!(decode_matrix::<Exact>(&[vec![json!(1)], vec![]], false), Err(CodecError::Ragged));
    }
}
