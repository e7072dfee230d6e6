//! Frame file format: a JSON document with the scalar field, the dimension,
//! and the vectors as rows (complex entries as two-element [re, im] arrays).
//! Writers emit full precision, 17 significant digits per value.

use std::path::Path;

use num_complex::Complex64;

use crate::hilbert::{HVector, ScalarField};
use crate::{Error, Result};

use super::FiniteFrame;

/// Format a float with 17 significant digits, round-trip exact.
pub(crate) fn full_precision(x: f64) -> String {
    format!("{x:.16e}")
}

/// Serialize a frame to the frame file format.
pub fn frame_to_json(frame: &FiniteFrame) -> String {
    let field = match frame.field() {
        ScalarField::Real => "real",
        ScalarField::Complex => "complex",
    };
    let mut out = String::new();
    out.push_str("{\n");
    out.push_str(&format!("  \"field\": \"{field}\",\n"));
    out.push_str(&format!("  \"dim\": {},\n", frame.dim()));
    out.push_str("  \"vectors\": [\n");
    for (i, v) in frame.vectors().iter().enumerate() {
        let row: Vec<String> = v
            .coords()
            .iter()
            .map(|c| match frame.field() {
                ScalarField::Real => full_precision(c.re),
                ScalarField::Complex => {
                    format!("[{}, {}]", full_precision(c.re), full_precision(c.im))
                }
            })
            .collect();
        let comma = if i + 1 < frame.len() { "," } else { "" };
        out.push_str(&format!("    [{}]{comma}\n", row.join(", ")));
    }
    out.push_str("  ]\n}\n");
    out
}

/// Parse the frame file format.
pub fn frame_from_json(text: &str) -> Result<FiniteFrame> {
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| Error::FrameFile(format!("not valid JSON: {e}")))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::FrameFile("top level must be an object".into()))?;
    let field = match obj.get("field").and_then(|v| v.as_str()) {
        Some("real") => ScalarField::Real,
        Some("complex") => ScalarField::Complex,
        other => {
            return Err(Error::FrameFile(format!(
                "field must be \"real\" or \"complex\", got {other:?}"
            )))
        }
    };
    let dim = obj
        .get("dim")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| Error::FrameFile("dim must be a positive integer".into()))?
        as usize;
    if dim == 0 {
        return Err(Error::FrameFile("dim must be at least 1".into()));
    }
    let rows = obj
        .get("vectors")
        .and_then(|v| v.as_array())
        .ok_or_else(|| Error::FrameFile("vectors must be an array".into()))?;
    if rows.is_empty() {
        return Err(Error::FrameFile("vectors must be non-empty".into()));
    }
    let mut vectors = Vec::with_capacity(rows.len());
    for (n, row) in rows.iter().enumerate() {
        let entries = row
            .as_array()
            .ok_or_else(|| Error::FrameFile(format!("vector {n} is not an array")))?;
        if entries.len() != dim {
            return Err(Error::FrameFile(format!(
                "vector {n} has {} entries, expected {dim}",
                entries.len()
            )));
        }
        let mut coords = Vec::with_capacity(dim);
        for (l, entry) in entries.iter().enumerate() {
            coords.push(parse_entry(field, entry).map_err(|msg| {
                Error::FrameFile(format!("vector {n} entry {l}: {msg}"))
            })?);
        }
        vectors.push(HVector::new(field, coords));
    }
    FiniteFrame::new(field, vectors)
}

fn parse_entry(
    field: ScalarField,
    entry: &serde_json::Value,
) -> std::result::Result<Complex64, String> {
    match field {
        ScalarField::Real => entry
            .as_f64()
            .map(|x| Complex64::new(x, 0.0))
            .ok_or_else(|| "expected a number".into()),
        ScalarField::Complex => {
            let pair = entry
                .as_array()
                .ok_or_else(|| "expected a [re, im] array".to_string())?;
            if pair.len() != 2 {
                return Err(format!("expected [re, im], got {} entries", pair.len()));
            }
            let re = pair[0].as_f64().ok_or("re must be a number")?;
            let im = pair[1].as_f64().ok_or("im must be a number")?;
            Ok(Complex64::new(re, im))
        }
    }
}

pub fn read_frame_file(path: impl AsRef<Path>) -> Result<FiniteFrame> {
    let text = std::fs::read_to_string(path)?;
    frame_from_json(&text)
}

pub fn write_frame_file(path: impl AsRef<Path>, frame: &FiniteFrame) -> Result<()> {
    std::fs::write(path, frame_to_json(frame))?;
    Ok(())
}
