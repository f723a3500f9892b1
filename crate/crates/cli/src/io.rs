use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use latticetri_core::{Error, Matrix};
use serde::Serialize;
use serde_json::Value;

use crate::Failure;

pub fn read_json(path: &Path) -> Result<Value, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn matrix_from_value(value: Value, path: &Path) -> Result<Matrix, Failure> {
    serde_json::from_value(value).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

/// A matrix file plus its optional `provenance` object.
pub fn read_matrix(path: &Path) -> Result<(Matrix, Option<Value>), Failure> {
    let mut value = read_json(path)?;
    let provenance = value.as_object_mut().and_then(|o| o.remove("provenance"));
    Ok((matrix_from_value(value, path)?, provenance))
}

/// Accepts a single matrix object, a JSON array of matrices, or an object with a
/// `generators` array.
pub fn read_matrices(path: &Path) -> Result<Vec<Matrix>, Failure> {
    let value = read_json(path)?;
    let items = match value {
        Value::Array(items) => items,
        Value::Object(mut o) if o.contains_key("generators") => match o.remove("generators") {
            Some(Value::Array(items)) => items,
            _ => {
                return Err(Failure::Parse(format!(
                    "{}: `generators` must be an array",
                    path.display()
                )))
            }
        },
        other => vec![other],
    };
    if items.is_empty() {
        return Err(Failure::Parse(format!("{}: no matrices", path.display())));
    }
    items
        .into_iter()
        .map(|v| matrix_from_value(v, path))
        .collect()
}

pub fn to_pretty<T: Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| Failure::Internal(Error::Internal(e.to_string()).to_string()))
}

pub fn emit<T: Serialize>(value: &T, output: Option<&PathBuf>) -> Result<(), Failure> {
    let text = to_pretty(value)?;
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Parse(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Failure::Parse(format!("cannot write stdout: {e}")))
        }
    }
}
