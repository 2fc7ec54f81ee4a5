//! On-disk JSON formats.
//!
//! Representations: {"base", "dim", "matrices": [row-major entries per
//! digit], "row", "col", "name"?}. Integer entries with magnitude at least
//! 2^53 are written as decimal strings so the files stay portable across
//! JSON parsers; readers accept both encodings everywhere.
//!
//! Certificates: {"base", "prefixes", "pump", "suffixes", "c0", "c_log",
//! "kind"} with words as digit strings ('0'-'9' then 'a'-'z', bases up to
//! 36) and rationals as "p/q".
//!
//! Multiplicative specs: {"q", "m", "character", "f_at_q"}.
//!
//! Syntax errors are reported with the offending path and byte offset.

use crate::error::{Error, Result};
use crate::growth::{GrowthCertificate, GrowthKind};
use crate::linrep::LinearRepresentation;
use crate::matrix::IntMatrix;
use crate::numtheory::MultiplicativeSpec;
use crate::word::Word;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

/// Integer scalar that serializes as a JSON number while it fits below
/// 2^53 in magnitude and as a decimal string beyond that.
#[derive(Clone, Debug, PartialEq, Eq)]
struct JsonInt(BigInt);

const SAFE_MAGNITUDE: i64 = 1 << 53;

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.abs() < BigInt::from(SAFE_MAGNITUDE) {
            let as_i64 = i64::try_from(&self.0).expect("below 2^53 fits in i64");
            serializer.serialize_i64(as_i64)
        } else {
            serializer.serialize_str(&self.0.to_string())
        }
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct IntVisitor;
        impl<'de> Visitor<'de> for IntVisitor {
            type Value = JsonInt;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "an integer or a decimal string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<JsonInt, E> {
                Ok(JsonInt(BigInt::from(v)))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<JsonInt, E> {
                Ok(JsonInt(BigInt::from(v)))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<JsonInt, E> {
                if v.fract() == 0.0 && v.abs() < SAFE_MAGNITUDE as f64 {
                    Ok(JsonInt(BigInt::from(v as i64)))
                } else {
                    Err(E::custom(format!("{v} is not an exactly representable integer")))
                }
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<JsonInt, E> {
                BigInt::from_str(v.trim())
                    .map(JsonInt)
                    .map_err(|_| E::custom(format!("invalid decimal integer {v:?}")))
            }
        }
        deserializer.deserialize_any(IntVisitor)
    }
}

#[derive(Serialize, Deserialize)]
struct RepresentationFile {
    base: u32,
    dim: usize,
    matrices: Vec<Vec<JsonInt>>,
    row: Vec<JsonInt>,
    col: Vec<JsonInt>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    name: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct CertificateFile {
    base: u32,
    prefixes: Vec<String>,
    pump: String,
    suffixes: Vec<String>,
    c0: String,
    c_log: String,
    kind: GrowthKind,
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Map a serde_json error to a path plus byte offset.
fn json_error(path: &str, text: &str, err: serde_json::Error) -> Error {
    let line = err.line();
    let column = err.column();
    let offset = if line == 0 {
        0
    } else {
        text.split_inclusive('\n')
            .take(line - 1)
            .map(str::len)
            .sum::<usize>()
            + column.saturating_sub(1)
    };
    Error::JsonSyntax {
        path: path.to_string(),
        offset,
        message: err.to_string(),
    }
}

fn invalid(path: &str, message: impl Into<String>) -> Error {
    Error::InvalidFile {
        path: path.to_string(),
        message: message.into(),
    }
}

// ---------------------------------------------------------------------------
// Representations
// ---------------------------------------------------------------------------

pub fn representation_to_json(rep: &LinearRepresentation) -> String {
    let file = RepresentationFile {
        base: rep.base(),
        dim: rep.dim(),
        matrices: rep
            .matrices()
            .iter()
            .map(|m| m.entries().iter().cloned().map(JsonInt).collect())
            .collect(),
        row: rep.row().iter().cloned().map(JsonInt).collect(),
        col: rep.col().iter().cloned().map(JsonInt).collect(),
        name: rep.name().map(str::to_string),
    };
    serde_json::to_string_pretty(&file).expect("representation serializes")
}

pub fn representation_from_json(text: &str, path: &str) -> Result<LinearRepresentation> {
    let file: RepresentationFile =
        serde_json::from_str(text).map_err(|e| json_error(path, text, e))?;
    if file.matrices.len() != file.base as usize {
        return Err(invalid(
            path,
            format!(
                "base {} needs {} matrices, found {}",
                file.base,
                file.base,
                file.matrices.len()
            ),
        ));
    }
    let d = file.dim;
    let mut matrices = Vec::with_capacity(file.matrices.len());
    for (i, flat) in file.matrices.into_iter().enumerate() {
        if flat.len() != d * d {
            return Err(invalid(
                path,
                format!("matrix {} has {} entries, expected {}", i, flat.len(), d * d),
            ));
        }
        let rows: Vec<Vec<BigInt>> = flat
            .chunks(d)
            .map(|chunk| chunk.iter().map(|j| j.0.clone()).collect())
            .collect();
        matrices.push(IntMatrix::from_rows(rows));
    }
    if file.row.len() != d || file.col.len() != d {
        return Err(invalid(path, "row and col must have length dim"));
    }
    let rep = LinearRepresentation::new(
        file.base,
        matrices,
        file.row.into_iter().map(|j| j.0).collect(),
        file.col.into_iter().map(|j| j.0).collect(),
    )
    .map_err(|e| invalid(path, e.to_string()))?;
    Ok(match file.name {
        Some(name) => rep.with_name(name),
        None => rep,
    })
}

pub fn save_representation(path: &Path, rep: &LinearRepresentation) -> Result<()> {
    write_text(path, &representation_to_json(rep))
}

pub fn load_representation(path: &Path) -> Result<LinearRepresentation> {
    let text = read_text(path)?;
    representation_from_json(&text, &path.display().to_string())
}

// ---------------------------------------------------------------------------
// Certificates
// ---------------------------------------------------------------------------

pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> std::result::Result<BigRational, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| format!("invalid numerator {num:?}"))?;
    let den = BigInt::from_str(den).map_err(|_| format!("invalid denominator {den:?}"))?;
    if den.is_zero() {
        return Err("denominator must be nonzero".into());
    }
    Ok(BigRational::new(num, den))
}

pub fn certificate_to_json(cert: &GrowthCertificate) -> Result<String> {
    if cert.base() > 36 {
        return Err(Error::InvalidParameter(
            "certificate files support bases up to 36".into(),
        ));
    }
    let file = CertificateFile {
        base: cert.base(),
        prefixes: cert.prefixes().iter().map(Word::to_string).collect(),
        pump: cert.pump().to_string(),
        suffixes: cert.suffixes().iter().map(Word::to_string).collect(),
        c0: format_rational(cert.c0()),
        c_log: format_rational(cert.c_log()),
        kind: cert.kind(),
    };
    Ok(serde_json::to_string_pretty(&file).expect("certificate serializes"))
}

pub fn certificate_from_json(text: &str, path: &str) -> Result<GrowthCertificate> {
    let file: CertificateFile =
        serde_json::from_str(text).map_err(|e| json_error(path, text, e))?;
    let parse_word = |s: &str| -> Result<Word> {
        Word::parse(s, file.base).map_err(|e| invalid(path, e.to_string()))
    };
    let prefixes = file
        .prefixes
        .iter()
        .map(|s| parse_word(s))
        .collect::<Result<Vec<_>>>()?;
    let suffixes = file
        .suffixes
        .iter()
        .map(|s| parse_word(s))
        .collect::<Result<Vec<_>>>()?;
    let pump = parse_word(&file.pump)?;
    let c0 = parse_rational(&file.c0).map_err(|m| invalid(path, format!("c0: {m}")))?;
    let c_log =
        parse_rational(&file.c_log).map_err(|m| invalid(path, format!("c_log: {m}")))?;
    GrowthCertificate::new(file.base, prefixes, pump, suffixes, c0, c_log, file.kind)
        .map_err(|e| invalid(path, e.to_string()))
}

pub fn save_certificate(path: &Path, cert: &GrowthCertificate) -> Result<()> {
    write_text(path, &certificate_to_json(cert)?)
}

pub fn load_certificate(path: &Path) -> Result<GrowthCertificate> {
    let text = read_text(path)?;
    certificate_from_json(&text, &path.display().to_string())
}

// ---------------------------------------------------------------------------
// Multiplicative specs and bare matrices
// ---------------------------------------------------------------------------

pub fn load_spec(path: &Path) -> Result<MultiplicativeSpec> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| json_error(&path.display().to_string(), &text, e))
}

pub fn save_spec(path: &Path, spec: &MultiplicativeSpec) -> Result<()> {
    write_text(
        path,
        &serde_json::to_string_pretty(spec).expect("spec serializes"),
    )
}

/// A bare matrix file is a JSON array of rows of int-or-string entries.
pub fn load_matrix(path: &Path) -> Result<IntMatrix> {
    let text = read_text(path)?;
    let label = path.display().to_string();
    let rows: Vec<Vec<JsonInt>> =
        serde_json::from_str(&text).map_err(|e| json_error(&label, &text, e))?;
    if rows.is_empty() {
        return Err(invalid(&label, "matrix must have at least one row"));
    }
    let width = rows[0].len();
    if width == 0 || rows.iter().any(|r| r.len() != width) {
        return Err(invalid(&label, "matrix rows must be nonempty and equal length"));
    }
    if rows.len() != width {
        return Err(invalid(&label, "matrix must be square"));
    }
    Ok(IntMatrix::from_rows(
        rows.into_iter()
            .map(|r| r.into_iter().map(|j| j.0).collect())
            .collect(),
    ))
}
