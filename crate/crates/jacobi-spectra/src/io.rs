//! JSON files for matrix specs and scattering data.

use crate::core::{ComplexJacobiSpec, Deviation, RealJacobiSpec};
use crate::{Error, Result, C64};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Serialize, Deserialize)]
struct DeviationRecord {
    n: usize,
    #[serde(default)]
    da: [f64; 2],
    #[serde(default)]
    db: [f64; 2],
    #[serde(default)]
    dc: [f64; 2],
}

#[derive(Serialize, Deserialize)]
struct ComplexFile {
    deviations: Vec<DeviationRecord>,
}

#[derive(Serialize, Deserialize)]
struct RealFile {
    a: Vec<f64>,
    b: Vec<f64>,
}

fn parse_err(context: &str, e: serde_json::Error) -> Error {
    Error::Parse {
        context: context.to_string(),
        message: format!("{e} (line {}, column {})", e.line(), e.column()),
    }
}

fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn complex_spec_from_json(text: &str) -> Result<ComplexJacobiSpec> {
    let f: ComplexFile = serde_json::from_str(text).map_err(|e| parse_err("complex spec", e))?;
    let devs: Vec<Deviation> = f
        .deviations
        .iter()
        .map(|r| Deviation {
            n: r.n,
            da: C64::new(r.da[0], r.da[1]),
            db: C64::new(r.db[0], r.db[1]),
            dc: C64::new(r.dc[0], r.dc[1]),
        })
        .collect();
    ComplexJacobiSpec::from_deviations(&devs)
}

/// Serialise with deviations sorted by index.
pub fn complex_spec_to_json(spec: &ComplexJacobiSpec) -> String {
    let f = ComplexFile {
        deviations: spec
            .deviations()
            .into_iter()
            .map(|d| DeviationRecord {
                n: d.n,
                da: pair(d.da),
                db: pair(d.db),
                dc: pair(d.dc),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&f).expect("plain data serialises")
}

pub fn real_spec_from_json(text: &str) -> Result<RealJacobiSpec> {
    let f: RealFile = serde_json::from_str(text).map_err(|e| parse_err("real spec", e))?;
    RealJacobiSpec::new(f.a, f.b)
}

pub fn real_spec_to_json(spec: &RealJacobiSpec) -> String {
    let n = spec.support();
    let f = RealFile {
        a: (0..n).map(|k| spec.a(k)).collect(),
        b: (0..n).map(|k| spec.b(k)).collect(),
    };
    serde_json::to_string_pretty(&f).expect("plain data serialises")
}

/// A spec file holding either shape: `{"deviations": ...}` or `{"a": ..., "b": ...}`.
pub fn any_spec_from_json(text: &str) -> Result<ComplexJacobiSpec> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| parse_err("spec", e))?;
    if v.get("deviations").is_some() {
        complex_spec_from_json(text)
    } else {
        Ok(real_spec_from_json(text)?.to_complex())
    }
}

pub fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse {
        context: path.display().to_string(),
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_roundtrip_sorted() {
        let text = r#"{"deviations": [
            {"n": 3, "db": [0.5, -1.0]},
            {"n": 0, "da": [0.1, 0.0], "db": [1.0, 0.0], "dc": [0.0, 0.2]}
        ]}"#;
        let s = complex_spec_from_json(text).unwrap();
        assert_eq!(s.support(), 4);
        let out = complex_spec_to_json(&s);
        let back = complex_spec_from_json(&out).unwrap();
        assert_eq!(back, s);
        assert!(out.find("\"n\": 0").unwrap() < out.find("\"n\": 3").unwrap());
    }

    #[test]
    fn parse_error_has_position() {
        let err = complex_spec_from_json("{\"deviations\": [ {\"n\": }").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 1"), "{msg}");
    }

    #[test]
    fn real_roundtrip() {
        let s = RealJacobiSpec::new(vec![0.6, 0.45], vec![0.1, -0.2]).unwrap();
        let back = real_spec_from_json(&real_spec_to_json(&s)).unwrap();
        assert_eq!(back, s);
        let c = any_spec_from_json(&real_spec_to_json(&s)).unwrap();
        assert_eq!(c.a(1), C64::new(0.45, 0.0));
    }
}
