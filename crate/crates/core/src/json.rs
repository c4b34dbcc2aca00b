//! Serialization helpers shared by every file format.

use std::io;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;

use crate::error::{Error, Result};

/// JSON formatter that writes every float with 17 significant digits.
#[derive(Debug, Clone, Copy, Default)]
pub struct Precise;

impl Formatter for Precise {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Serializes `value` as JSON with 17-significant-digit floats.
pub fn to_string_precise<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Precise);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::Parse(e.to_string()))?;
    String::from_utf8(buf).map_err(|e| Error::Parse(e.to_string()))
}

/// `{"re": .., "im": ..}` record used for complex numbers in every schema.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexRecord {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl From<Complex64> for ComplexRecord {
    fn from(z: Complex64) -> Self {
        ComplexRecord { re: z.re, im: z.im }
    }
}

impl From<ComplexRecord> for Complex64 {
    fn from(r: ComplexRecord) -> Self {
        Complex64::new(r.re, r.im)
    }
}

/// Serde adapters for `Complex64` and `Vec<Complex64>` as `{re, im}` records.
pub mod complex {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
        ComplexRecord::from(*z).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Complex64, D::Error> {
        ComplexRecord::deserialize(d).map(Complex64::from)
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(
            v: &[Complex64],
            s: S,
        ) -> std::result::Result<S::Ok, S::Error> {
            s.collect_seq(v.iter().map(|z| ComplexRecord::from(*z)))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Vec<Complex64>, D::Error> {
            Vec::<ComplexRecord>::deserialize(d).map(|v| v.into_iter().map(Complex64::from).collect())
        }
    }

    pub mod matrix {
        use super::*;

        pub fn serialize<S: Serializer>(
            m: &[Vec<Complex64>],
            s: S,
        ) -> std::result::Result<S::Ok, S::Error> {
            s.collect_seq(
                m.iter()
                    .map(|row| row.iter().map(|z| ComplexRecord::from(*z)).collect::<Vec<_>>()),
            )
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Vec<Vec<Complex64>>, D::Error> {
            Vec::<Vec<ComplexRecord>>::deserialize(d).map(|m| {
                m.into_iter()
                    .map(|row| row.into_iter().map(Complex64::from).collect())
                    .collect()
            })
        }
    }
}

/// Extended reals: finite numbers, or the strings `"+inf"` / `"-inf"`.
pub mod ext_real {
    use serde::de::{self, Visitor};
    use serde::{Deserializer, Serializer};
    use std::fmt;

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if *v == f64::INFINITY {
            s.serialize_str("+inf")
        } else if *v == f64::NEG_INFINITY {
            s.serialize_str("-inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        d.deserialize_any(ExtRealVisitor)
    }

    pub(crate) struct ExtRealVisitor;

    impl<'de> Visitor<'de> for ExtRealVisitor {
        type Value = f64;

        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("a number or one of \"+inf\", \"-inf\"")
        }

        fn visit_f64<E: de::Error>(self, v: f64) -> Result<f64, E> {
            Ok(v)
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<f64, E> {
            Ok(v as f64)
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<f64, E> {
            Ok(v as f64)
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<f64, E> {
            match v {
                "+inf" | "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                other => Err(E::custom(format!("expected \"+inf\" or \"-inf\", got \"{other}\""))),
            }
        }
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
            match v {
                Some(x) => super::serialize(x, s),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
            struct OptVisitor;
            impl<'de> Visitor<'de> for OptVisitor {
                type Value = Option<f64>;
                fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                    f.write_str("null, a number, or \"+inf\"/\"-inf\"")
                }
                fn visit_none<E: de::Error>(self) -> Result<Self::Value, E> {
                    Ok(None)
                }
                fn visit_unit<E: de::Error>(self) -> Result<Self::Value, E> {
                    Ok(None)
                }
                fn visit_some<D2: Deserializer<'de>>(self, d: D2) -> Result<Self::Value, D2::Error> {
                    d.deserialize_any(ExtRealVisitor).map(Some)
                }
            }
            d.deserialize_option(OptVisitor)
        }
    }
}

/// Formats a complex number as `re+imi` / `re-imi`.
pub fn format_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{:.16e}{}{:.16e}i", z.re, sign, z.im.abs())
}

/// Parses `a+bi`, `a-bi`, `a`, `bi`, `-i` style complex literals.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("invalid complex number '{text}'"));
    if s.is_empty() {
        return Err(bad());
    }
    let num = |p: &str| -> Result<f64> {
        match p {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => p.parse::<f64>().map_err(|_| bad()),
        }
    };
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return Ok(Complex64::new(s.parse::<f64>().map_err(|_| bad())?, 0.0));
    };
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().map_err(|_| bad())?;
            Ok(Complex64::new(re, num(&body[k..])?))
        }
        None => Ok(Complex64::new(0.0, num(body)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precise_floats_have_seventeen_digits() {
        let s = to_string_precise(&vec![0.1f64, -2.5, 1e-300]).unwrap();
        assert_eq!(
            s,
            "[1.0000000000000001e-1,-2.5000000000000000e0,1.0000000000000000e-300]"
        );
        let back: Vec<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, vec![0.1, -2.5, 1e-300]);
    }

    #[test]
    fn complex_literals() {
        let cases = [
            ("1+2i", Complex64::new(1.0, 2.0)),
            ("-1.5e-3-2e+2i", Complex64::new(-1.5e-3, -200.0)),
            ("3", Complex64::new(3.0, 0.0)),
            ("-i", Complex64::new(0.0, -1.0)),
            ("2.5i", Complex64::new(0.0, 2.5)),
            ("1e5+i", Complex64::new(1e5, 1.0)),
            (" 4 - 1i ", Complex64::new(4.0, -1.0)),
        ];
        for (text, z) in cases {
            assert_eq!(parse_complex(text).unwrap(), z, "{text}");
        }
        assert!(parse_complex("1+x").is_err());
        assert!(parse_complex("").is_err());
        let z = Complex64::new(0.1, -1.0 / 3.0);
        assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
    }

    #[derive(Serialize, Deserialize, PartialEq, Debug)]
    struct Limits {
        #[serde(with = "ext_real")]
        a: f64,
        #[serde(with = "ext_real::option", default)]
        b: Option<f64>,
    }

    #[test]
    fn extended_reals() {
        let l: Limits = serde_json::from_str(r#"{"a":"+inf","b":"-inf"}"#).unwrap();
        assert_eq!(l, Limits { a: f64::INFINITY, b: Some(f64::NEG_INFINITY) });
        let l: Limits = serde_json::from_str(r#"{"a":2}"#).unwrap();
        assert_eq!(l, Limits { a: 2.0, b: None });
        assert_eq!(
            serde_json::to_string(&Limits { a: f64::NEG_INFINITY, b: Some(0.5) }).unwrap(),
            r#"{"a":"-inf","b":0.5}"#
        );
        assert!(serde_json::from_str::<Limits>(r#"{"a":"inf!"}"#).is_err());
    }
}
