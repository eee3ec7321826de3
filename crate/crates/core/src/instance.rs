//! Instance files and JSON serialization of records and certificates.
//!
//! An instance file is a small JSON document carrying a field description
//! and the two operator matrices, plus an optional free-form provenance
//! block. Serialization is canonical — object keys are sorted, elements
//! are fixed-length coefficient arrays, rationals are reduced `num/den`
//! strings — so emitting is deterministic and parse-then-emit is the
//! identity byte-for-byte. Reports reference instances by a content hash
//! of the canonical bytes.

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::field::{BaseScalar, Field, FieldElement, FieldKind};
use crate::matrix::ExactMatrix;
use crate::poly::Polynomial;
use crate::sharpen::SharpeningCertificate;
use crate::td::TdSystemRecord;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::str::FromStr;

pub const FORMAT_VERSION: u64 = 1;

/// A parsed and fully validated instance: field constructed, every entry
/// decoded, matrices square and of equal size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceFile {
    pub field: Field,
    pub a: ExactMatrix,
    pub a_star: ExactMatrix,
    pub provenance: Option<Map<String, Value>>,
}

#[derive(Debug, Error)]
#[error("{message}")]
pub struct ParseError {
    pub message: String,
}

fn err<T>(message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        message: message.into(),
    })
}

fn at<T>(context: &str, message: impl Into<String>) -> Result<T, ParseError> {
    err(format!("{context}: {}", message.into()))
}

// ---------------------------------------------------------------------------
// Base-coefficient encoding
// ---------------------------------------------------------------------------

fn encode_base(b: &BaseScalar) -> Value {
    match b {
        BaseScalar::Mod(v) => json!(v),
        BaseScalar::Rat(q) => json!(format!("{}/{}", q.numer(), q.denom())),
    }
}

fn decode_base(value: &Value, p: u64, context: &str) -> Result<BaseScalar, ParseError> {
    if p == 0 {
        let s = match value {
            Value::String(s) => s.as_str(),
            _ => return at(context, "expected a fraction string \"num/den\""),
        };
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let num = BigInt::from_str(num.trim())
            .map_err(|_| ParseError {
                message: format!("{context}: malformed numerator in {s:?}"),
            })?;
        let den = BigInt::from_str(den.trim())
            .map_err(|_| ParseError {
                message: format!("{context}: malformed denominator in {s:?}"),
            })?;
        if den.is_zero() {
            return at(context, "zero denominator");
        }
        Ok(BaseScalar::Rat(BigRational::new(num, den)))
    } else {
        let v = match value.as_u64() {
            Some(v) => v,
            None => return at(context, "expected a nonnegative integer"),
        };
        if v >= p {
            return at(context, format!("coefficient out of range for p={p}"));
        }
        Ok(BaseScalar::Mod(v))
    }
}

// ---------------------------------------------------------------------------
// Field description
// ---------------------------------------------------------------------------

pub fn encode_field(field: &Field) -> Value {
    let modulus: Vec<Value> = field
        .modulus()
        .map(|m| m.iter().map(encode_base).collect())
        .unwrap_or_default();
    json!({
        "kind": field.kind().as_str(),
        "p": field.characteristic(),
        "k": field.degree() as u64,
        "modulus": modulus,
    })
}

pub fn decode_field(value: &Value) -> Result<Field, ParseError> {
    let obj = match value.as_object() {
        Some(o) => o,
        None => return err("field: expected an object"),
    };
    let kind = match obj.get("kind").and_then(Value::as_str) {
        Some("prime") => FieldKind::Prime,
        Some("extension") => FieldKind::Extension,
        Some("rational") => FieldKind::Rational,
        Some(other) => return at("field.kind", format!("unknown kind {other:?}")),
        None => return err("field.kind: missing or not a string"),
    };
    let p = match obj.get("p").and_then(Value::as_u64) {
        Some(p) => p,
        None => return err("field.p: missing or not a nonnegative integer"),
    };
    let k = match obj.get("k").and_then(Value::as_u64) {
        Some(k) => k as usize,
        None => return err("field.k: missing or not a nonnegative integer"),
    };
    let modulus = match obj.get("modulus") {
        None => None,
        Some(Value::Array(entries)) if entries.is_empty() => None,
        Some(Value::Array(entries)) => {
            let mut coeffs = Vec::with_capacity(entries.len());
            for (i, e) in entries.iter().enumerate() {
                coeffs.push(decode_base(e, p, &format!("field.modulus[{i}]"))?);
            }
            Some(coeffs)
        }
        Some(_) => return err("field.modulus: expected an array"),
    };
    Field::create(kind, p, k, modulus)
        .map_err(|e| ParseError {
            message: format!("field: {e}"),
        })
}

// ---------------------------------------------------------------------------
// Elements and matrices
// ---------------------------------------------------------------------------

pub fn encode_element(x: &FieldElement) -> Value {
    Value::Array(x.coefficients().iter().map(encode_base).collect())
}

pub fn decode_element(
    field: &Field,
    value: &Value,
    context: &str,
) -> Result<FieldElement, ParseError> {
    let entries = match value.as_array() {
        Some(a) => a,
        None => return at(context, "expected a coefficient array"),
    };
    if entries.len() != field.degree() {
        return at(
            context,
            format!(
                "expected {} coefficients, found {}",
                field.degree(),
                entries.len()
            ),
        );
    }
    let mut coeffs = Vec::with_capacity(entries.len());
    for (i, e) in entries.iter().enumerate() {
        coeffs.push(decode_base(
            e,
            field.characteristic(),
            &format!("{context}[{i}]"),
        )?);
    }
    field.el_from_coefficients(coeffs).map_err(|e| ParseError {
        message: format!("{context}: {e}"),
    })
}

pub fn encode_matrix(m: &ExactMatrix) -> Value {
    let rows: Vec<Value> = (0..m.rows())
        .map(|r| {
            Value::Array(
                (0..m.cols())
                    .map(|c| encode_element(&m.get(r, c)))
                    .collect(),
            )
        })
        .collect();
    Value::Array(rows)
}

pub fn decode_matrix(
    field: &Field,
    value: &Value,
    name: &str,
) -> Result<ExactMatrix, ParseError> {
    let rows = match value.as_array() {
        Some(a) => a,
        None => return at(name, "expected an array of rows"),
    };
    if rows.is_empty() {
        return at(name, "matrix has no rows");
    }
    let n = rows.len();
    let mut decoded = Vec::with_capacity(n);
    for (r, row) in rows.iter().enumerate() {
        let entries = match row.as_array() {
            Some(a) => a,
            None => return at(&format!("{name}[{r}]"), "expected an array of entries"),
        };
        if entries.len() != n {
            return err(format!(
                "{name} not square: row {r} has {} entries, expected {n}",
                entries.len()
            ));
        }
        let mut out_row = Vec::with_capacity(n);
        for (c, e) in entries.iter().enumerate() {
            out_row.push(decode_element(field, e, &format!("{name}[{r}][{c}]"))?);
        }
        decoded.push(out_row);
    }
    ExactMatrix::from_elements(field, decoded).map_err(|e| ParseError {
        message: format!("{name}: {e}"),
    })
}

// ---------------------------------------------------------------------------
// Instance files
// ---------------------------------------------------------------------------

pub fn parse_instance(bytes: &[u8]) -> Result<InstanceFile, ParseError> {
    let doc: Value = serde_json::from_slice(bytes).map_err(|e| ParseError {
        message: format!("malformed JSON: {e}"),
    })?;
    let obj = match doc.as_object() {
        Some(o) => o,
        None => return err("document root must be an object"),
    };
    match obj.get("version").and_then(Value::as_u64) {
        Some(FORMAT_VERSION) => {}
        Some(v) => return err(format!("unsupported format version {v}")),
        None => return err("version: missing or not an integer"),
    }
    let field = decode_field(
        obj.get("field")
            .ok_or_else(|| ParseError {
                message: "field: missing".into(),
            })?,
    )?;
    let a = decode_matrix(
        &field,
        obj.get("A").ok_or_else(|| ParseError {
            message: "A: missing".into(),
        })?,
        "A",
    )?;
    let a_star = decode_matrix(
        &field,
        obj.get("Astar").ok_or_else(|| ParseError {
            message: "Astar: missing".into(),
        })?,
        "Astar",
    )?;
    if a.rows() != a_star.rows() {
        return err(format!(
            "A is {0}x{0} but Astar is {1}x{1}",
            a.rows(),
            a_star.rows()
        ));
    }
    let provenance = match obj.get("provenance") {
        None | Some(Value::Null) => None,
        Some(Value::Object(m)) => Some(m.clone()),
        Some(_) => return err("provenance: expected an object"),
    };
    Ok(InstanceFile {
        field,
        a,
        a_star,
        provenance,
    })
}

/// Canonical serialization: compact JSON with sorted keys and a trailing
/// newline. Deterministic for a given instance value.
pub fn emit_instance(instance: &InstanceFile) -> String {
    let mut doc = Map::new();
    doc.insert("version".into(), json!(FORMAT_VERSION));
    doc.insert("field".into(), encode_field(&instance.field));
    doc.insert("A".into(), encode_matrix(&instance.a));
    doc.insert("Astar".into(), encode_matrix(&instance.a_star));
    if let Some(p) = &instance.provenance {
        doc.insert("provenance".into(), Value::Object(p.clone()));
    }
    let mut out = serde_json::to_string(&Value::Object(doc)).expect("serialization");
    out.push('\n');
    out
}

/// Content hash of the canonical serialization, as lowercase hex.
pub fn instance_digest(instance: &InstanceFile) -> String {
    let bytes = emit_instance(instance);
    let mut hasher = Sha256::new();
    hasher.update(bytes.as_bytes());
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

// ---------------------------------------------------------------------------
// Records and certificates
// ---------------------------------------------------------------------------

fn encode_polynomial(p: &Polynomial) -> Value {
    Value::Array(p.coefficients().iter().map(encode_element).collect())
}

pub fn record_json(record: &TdSystemRecord) -> Value {
    json!({
        "field": encode_field(&record.field),
        "n": record.n() as u64,
        "d": record.d as u64,
        "A": encode_matrix(&record.a),
        "Astar": encode_matrix(&record.a_star),
        "theta": Value::Array(record.eigenvalues.iter().map(encode_element).collect()),
        "theta_star": Value::Array(
            record.dual_eigenvalues.iter().map(encode_element).collect()
        ),
        "shape": record.shape.clone(),
        "sharp": record.sharp,
        "E": Value::Array(record.idempotents.iter().map(encode_matrix).collect()),
        "Estar": Value::Array(
            record.dual_idempotents.iter().map(encode_matrix).collect()
        ),
    })
}

pub fn certificate_json(cert: &SharpeningCertificate, input_digest: &str) -> Value {
    let corner_labels = ["E0", "Ed", "Estar0", "Estard"];
    let mut corners = Map::new();
    for (label, corner) in corner_labels.iter().zip(cert.corners.iter()) {
        corners.insert(
            (*label).into(),
            json!({
                "dim": corner.corner_dim as u64,
                "minpoly": encode_polynomial(&corner.certificate.minimal_polynomial),
                "iso": encode_matrix(&corner.iso_matrix),
            }),
        );
    }
    let mut passes = Map::new();
    for (key, ok) in &cert.stage_passes {
        passes.insert((*key).into(), json!(ok));
    }
    json!({
        "input": input_digest,
        "T_dim": cert.t_dim as u64,
        "rho": cert.rho as u64,
        "Z_minpoly": encode_polynomial(&cert.center_certificate.minimal_polynomial),
        "corners": Value::Object(corners),
        "dual_basis_n": cert.dual_basis.n as u64,
        "lemma_passes": Value::Object(passes),
        "sharpened": record_json(&cert.sharpened),
    })
}
