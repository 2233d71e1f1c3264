//! JSON interchange: `{"radius": <number or "inf">, "coeffs": [[w,x,y,z], ...]}`.
//!
//! Floats are written with 17 significant digits so every finite value
//! survives a write/read cycle bit for bit.

use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::{Error, Result};
use crate::quaternion::Quaternion;
use crate::series::Series;

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RadiusRepr {
    Number(f64),
    Text(String),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeriesRepr {
    #[serde(default)]
    radius: Option<RadiusRepr>,
    coeffs: Vec<Quaternion>,
}

fn parse_radius(r: Option<RadiusRepr>) -> Result<f64> {
    let radius = match r {
        None => f64::INFINITY,
        Some(RadiusRepr::Number(x)) => x,
        Some(RadiusRepr::Text(s)) => match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "+inf" | "infinity" => f64::INFINITY,
            other => return Err(Error::Format(format!("field `radius`: expected a number or \"inf\", got \"{other}\""))),
        },
    };
    if !(radius > 0.0) {
        return Err(Error::Format(format!("field `radius`: must be positive, got {radius}")));
    }
    Ok(radius)
}

/// Parses the series interchange format, dropping trailing zero terms.
pub fn parse_series_str(text: &str) -> Result<Series> {
    let repr: SeriesRepr = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    if repr.coeffs.is_empty() {
        return Err(Error::Format("field `coeffs`: at least one coefficient is required".into()));
    }
    let radius = parse_radius(repr.radius)?;
    Ok(Series::new(repr.coeffs, radius)
        .map_err(|e| Error::Format(e.to_string()))?
        .trimmed())
}

pub fn parse_series(path: impl AsRef<Path>) -> Result<Series> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_series_str(&text).map_err(|e| match e {
        Error::Format(msg) => Error::Format(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn series_repr(f: &Series) -> SeriesRepr {
    SeriesRepr {
        radius: Some(if f.radius().is_infinite() {
            RadiusRepr::Text("inf".into())
        } else {
            RadiusRepr::Number(f.radius())
        }),
        coeffs: f.coeffs().to_vec(),
    }
}

pub fn series_to_json(f: &Series) -> String {
    to_json_string(&series_repr(f))
}

pub fn write_series(path: impl AsRef<Path>, f: &Series) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, series_to_json(f) + "\n").map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Pretty JSON with 17 significant digits per float.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Sig17::default());
    value.serialize(&mut ser).expect("serialization into memory cannot fail");
    String::from_utf8(out).expect("JSON is UTF-8")
}

/// [`PrettyFormatter`] with fixed-precision floats.
#[derive(Default)]
pub struct Sig17 {
    inner: PrettyFormatter<'static>,
}

impl Formatter for Sig17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        write!(w, "{:.16e}", value as f64)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object_value(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{gaussian_polynomial, rng};

    #[test]
    fn parse_identity() {
        let f = parse_series_str(r#"{"radius":1,"coeffs":[[0,0,0,0],[1,0,0,0]]}"#).unwrap();
        assert_eq!(f, Series::new(vec![Quaternion::ZERO, Quaternion::ONE], 1.0).unwrap());
    }

    #[test]
    fn radius_forms() {
        assert_eq!(parse_series_str(r#"{"coeffs":[[1,0,0,0]]}"#).unwrap().radius(), f64::INFINITY);
        assert_eq!(parse_series_str(r#"{"radius":"inf","coeffs":[[1,0,0,0]]}"#).unwrap().radius(), f64::INFINITY);
        assert!(matches!(parse_series_str(r#"{"radius":0,"coeffs":[[1,0,0,0]]}"#), Err(Error::Format(_))));
        assert!(matches!(parse_series_str(r#"{"radius":"big","coeffs":[[1,0,0,0]]}"#), Err(Error::Format(_))));
    }

    #[test]
    fn malformed_inputs() {
        let err = parse_series_str(r#"{"coeffs":[[1,0,0]]}"#).unwrap_err();
        match err {
            Error::Format(msg) => assert!(msg.contains("line 1") && msg.contains("column"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_series_str(r#"{"coeffs":[]}"#), Err(Error::Format(_))));
        assert!(matches!(parse_series_str("not json"), Err(Error::Format(_))));
        assert!(matches!(parse_series_str(r#"{"coeffs":[[1,0,0,0]],"extra":1}"#), Err(Error::Format(_))));
    }

    #[test]
    fn trailing_zeros_are_dropped() {
        let f = parse_series_str(r#"{"coeffs":[[1,0,0,0],[0,0,0,0],[0,-0.0,0,0]]}"#).unwrap();
        assert_eq!(f.degree(), 0);
        // tiny but nonzero terms are data, not padding
        let g = parse_series_str(r#"{"coeffs":[[1,0,0,0],[0,0,0,0],[1e-300,0,0,0]]}"#).unwrap();
        assert_eq!(g.degree(), 2);
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let mut r = rng(131);
        for radius in [0.75, 1.0, f64::INFINITY] {
            let f = gaussian_polynomial(&mut r, 12, 1.0).with_radius(radius).unwrap();
            let text = series_to_json(&f);
            let g = parse_series_str(&text).unwrap();
            assert_eq!(f, g);
            assert_eq!(text, series_to_json(&g));
        }
        let odd = Series::polynomial(vec![Quaternion::new(0.1 + 0.2, -0.0, 1e-300, f64::MAX)]);
        let back = parse_series_str(&series_to_json(&odd)).unwrap();
        for (a, b) in odd.coeffs()[0].to_array().iter().zip(back.coeffs()[0].to_array()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn seventeen_digit_floats() {
        let s = to_json_string(&[0.1f64]);
        assert!(s.contains("1.0000000000000001e-1"), "{s}");
    }

    #[test]
    fn missing_file_is_io_error() {
        assert!(matches!(parse_series("/nonexistent/series.json"), Err(Error::Io(_))));
    }
}
