//! Serde helpers that write floating-point numbers as decimal strings with
//! 17 significant digits, and read them back from strings or numbers.

use serde::de::{self, Deserializer};
use serde::{Deserialize, Serializer};

/// Fixed 17-significant-digit rendering.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    format!("{x:.16e}")
}

#[derive(Deserialize)]
#[serde(untagged)]
enum NumOrStr {
    Num(f64),
    Str(String),
}

fn parse<E: de::Error>(v: NumOrStr) -> Result<f64, E> {
    match v {
        NumOrStr::Num(x) => Ok(x),
        NumOrStr::Str(s) => s.trim().parse::<f64>().map_err(|e| E::custom(format!("bad number {s:?}: {e}"))),
    }
}

pub mod num {
    use super::*;

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_f64(*x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        parse(NumOrStr::deserialize(d)?)
    }
}

pub mod num_vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&fmt_f64(*x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        Vec::<NumOrStr>::deserialize(d)?.into_iter().map(parse).collect()
    }
}

/// Exact rational as `"num/den"`.
pub fn rational<S: Serializer>(r: &num_rational::BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&crate::series::rational_string(r))
}

/// Double-double rendered with 32 significant digits.
pub fn dd<S: Serializer>(x: &crate::DoubleDouble, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_sci_string(32))
}

/// A pair of numbers as a two-element array of strings.
pub fn pair<S: Serializer>(p: &(f64, f64), s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(2))?;
    seq.serialize_element(&fmt_f64(p.0))?;
    seq.serialize_element(&fmt_f64(p.1))?;
    seq.end()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        for x in [0.1, -1.0 / 3.0, 6.02214076e23, 1e-300, 0.0] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_f64(0.5), "5.0000000000000000e-1");
    }
}
