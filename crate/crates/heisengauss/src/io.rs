//! Strict-schema parameter documents and the CSV formats of the CLI.
//!
//! Parameter document: `{"a":[r,r,r],"B":[[r,r,r],[r,r,r],[r,r,r]]}`;
//! unknown keys, wrong shapes, and non-finite numbers are rejected.
//! All floats are serialized with 17 significant digits, which round-trips
//! f64 exactly.

use crate::error::{Error, Result};
use crate::params::{validate_params, GaussianParams};
use crate::schrodinger::C64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsDoc {
    a: [f64; 3],
    #[serde(rename = "B")]
    b: [[f64; 3]; 3],
}

/// Parse and validate a parameter document.
pub fn parse_params(text: &str) -> Result<GaussianParams> {
    let doc: ParamsDoc =
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("params JSON: {e}")))?;
    validate_params(doc.a, doc.b)
}

/// Serialize parameters back to the document format.
pub fn params_to_json(p: &GaussianParams) -> String {
    let doc = ParamsDoc { a: p.a(), b: p.b() };
    serde_json::to_string_pretty(&doc).expect("plain arrays always serialize")
}

/// 17-significant-digit float formatting (exact f64 round trip).
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Parse an evaluation-points CSV with header `s1,s2,s3`.
pub fn parse_points_csv(text: &str) -> Result<Vec<[f64; 3]>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    {
        let headers = rdr
            .headers()
            .map_err(|e| Error::InvalidInput(format!("points CSV: {e}")))?;
        let expect = ["s1", "s2", "s3"];
        if headers.len() != 3 || headers.iter().zip(expect).any(|(h, e)| h != e) {
            return Err(Error::InvalidInput(format!(
                "points CSV must have header s1,s2,s3, got {headers:?}"
            )));
        }
    }
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::InvalidInput(format!("points CSV: {e}")))?;
        if rec.len() != 3 {
            return Err(Error::InvalidInput(format!(
                "points CSV row has {} fields, expected 3",
                rec.len()
            )));
        }
        let mut row = [0.0; 3];
        for (i, field) in rec.iter().enumerate() {
            let v: f64 = field
                .parse()
                .map_err(|e| Error::InvalidInput(format!("points CSV field {field:?}: {e}")))?;
            if !v.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "points CSV contains non-finite value {v}"
                )));
            }
            row[i] = v;
        }
        out.push(row);
    }
    Ok(out)
}

/// CSV with columns `s1,s2,s3,re,im` for complex values at points.
pub fn complex_values_csv(points: &[[f64; 3]], values: &[C64]) -> String {
    let mut out = String::from("s1,s2,s3,re,im\n");
    for (p, v) in points.iter().zip(values) {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_f64(p[0]),
            fmt_f64(p[1]),
            fmt_f64(p[2]),
            fmt_f64(v.re),
            fmt_f64(v.im)
        ));
    }
    out
}

/// CSV with columns `x,y,re_k,im_k` for a kernel sampled on a grid.
pub fn kernel_csv(rows: &[(f64, f64, C64)]) -> String {
    let mut out = String::from("x,y,re_k,im_k\n");
    for (x, y, v) in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt_f64(*x),
            fmt_f64(*y),
            fmt_f64(v.re),
            fmt_f64(v.im)
        ));
    }
    out
}

/// Parse a kernel CSV back (round-trip checks and downstream tooling).
pub fn parse_kernel_csv(text: &str) -> Result<Vec<(f64, f64, C64)>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    {
        let headers = rdr
            .headers()
            .map_err(|e| Error::InvalidInput(format!("kernel CSV: {e}")))?;
        let expect = ["x", "y", "re_k", "im_k"];
        if headers.len() != 4 || headers.iter().zip(expect).any(|(h, e)| h != e) {
            return Err(Error::InvalidInput(format!(
                "kernel CSV must have header x,y,re_k,im_k, got {headers:?}"
            )));
        }
    }
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::InvalidInput(format!("kernel CSV: {e}")))?;
        let get = |i: usize| -> Result<f64> {
            rec.get(i)
                .ok_or_else(|| Error::InvalidInput("kernel CSV row too short".into()))?
                .parse()
                .map_err(|e| Error::InvalidInput(format!("kernel CSV: {e}")))
        };
        out.push((get(0)?, get(1)?, C64::new(get(2)?, get(3)?)));
    }
    Ok(out)
}

/// CSV with columns `z1,z2,z3` for simulated samples.
pub fn samples_csv(samples: &[[f64; 3]]) -> String {
    let mut out = String::from("z1,z2,z3\n");
    for z in samples {
        out.push_str(&format!(
            "{},{},{}\n",
            fmt_f64(z[0]),
            fmt_f64(z[1]),
            fmt_f64(z[2])
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_valid_doc() {
        let p = parse_params(
            r#"{"a":[0.0,0.0,0.0],"B":[[1.0,0.0,0.0],[0.0,1.0,0.0],[0.0,0.0,0.0]]}"#,
        )
        .unwrap();
        assert_eq!(p.bij(1, 1), 1.0);
    }

    #[test]
    fn reject_extra_keys_and_bad_shapes() {
        assert!(parse_params(r#"{"a":[0,0,0],"B":[[0,0,0],[0,0,0],[0,0,0]],"x":1}"#).is_err());
        assert!(parse_params(r#"{"a":[0,0],"B":[[0,0,0],[0,0,0],[0,0,0]]}"#).is_err());
        assert!(parse_params(r#"{"a":[0,0,0]}"#).is_err());
        assert!(parse_params(r#"{"a":[0,0,0],"B":[[0,0],[0,0]]}"#).is_err());
        assert!(parse_params("").is_err());
        assert!(parse_params("not json").is_err());
    }

    #[test]
    fn reject_non_finite() {
        // serde_json itself refuses bare NaN/Infinity tokens
        assert!(parse_params(r#"{"a":[NaN,0,0],"B":[[0,0,0],[0,0,0],[0,0,0]]}"#).is_err());
        assert!(
            parse_params(r#"{"a":[1e400,0,0],"B":[[0,0,0],[0,0,0],[0,0,0]]}"#).is_err()
        );
    }

    #[test]
    fn json_round_trip_is_exact() {
        let p = parse_params(
            r#"{"a":[0.1,-0.2,0.3],"B":[[1.25,0.125,0.0],[0.125,2.5,0.5],[0.0,0.5,3.75]]}"#,
        )
        .unwrap();
        let p2 = parse_params(&params_to_json(&p)).unwrap();
        assert_eq!(p.a(), p2.a());
        assert_eq!(p.b(), p2.b());
    }

    #[test]
    fn float_formatting_round_trips() {
        for &x in &[0.1, -1.0 / 3.0, 1e-300, 2.5e300, std::f64::consts::PI] {
            let s = fmt_f64(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, x, "{s}");
        }
    }

    #[test]
    fn points_csv_round_trip() {
        let pts = vec![[0.1, -0.2, 0.3], [1.0, 2.0, -3.0]];
        let mut text = String::from("s1,s2,s3\n");
        for p in &pts {
            text.push_str(&format!("{},{},{}\n", fmt_f64(p[0]), fmt_f64(p[1]), fmt_f64(p[2])));
        }
        assert_eq!(parse_points_csv(&text).unwrap(), pts);
        assert!(parse_points_csv("bad,header,row\n1,2,3\n").is_err());
        assert!(parse_points_csv("s1,s2,s3\n1,2\n").is_err());
        assert!(parse_points_csv("s1,s2,s3\n1,2,abc\n").is_err());
    }
}
