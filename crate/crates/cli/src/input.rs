//! JSON arguments given inline or as file paths, and carrier resolution.

use std::path::Path;
use std::sync::Arc;

use orlicz_core::{AtomSet, AtomicMeasureSpace, MeasureSpec, SimpleFn, SpaceRef};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::CliError;

/// Parses `arg` as JSON when it looks like JSON, otherwise reads it as a path.
pub fn json_arg<T: DeserializeOwned>(what: &str, arg: &str) -> Result<T, CliError> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        arg.to_owned()
    } else {
        std::fs::read_to_string(Path::new(arg))
            .map_err(|e| CliError::Parse(format!("{what}: cannot read `{arg}`: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{what}: {e}")))
}

/// A function file: bare values, or values with their carrier.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum FnInput {
    Values(Vec<f64>),
    WithSpace {
        #[serde(default)]
        space: Option<AtomicMeasureSpace>,
        values: Vec<f64>,
    },
}

impl FnInput {
    pub fn values(&self) -> &[f64] {
        match self {
            FnInput::Values(v) | FnInput::WithSpace { values: v, .. } => v,
        }
    }

    fn space(&self) -> Option<&AtomicMeasureSpace> {
        match self {
            FnInput::WithSpace { space, .. } => space.as_ref(),
            FnInput::Values(_) => None,
        }
    }
}

/// Carrier by precedence: `--carrier`, the function's own space, the first
/// measure among `specs`, then unit weights sized to the function.
pub fn resolve_carrier(
    explicit: Option<&str>,
    f: Option<&FnInput>,
    measures: &[Option<&MeasureSpec>],
) -> Result<SpaceRef, CliError> {
    if let Some(arg) = explicit {
        let s: AtomicMeasureSpace = json_arg("--carrier", arg)?;
        return Ok(Arc::new(s));
    }
    if let Some(s) = f.and_then(FnInput::space) {
        return Ok(Arc::new(s.clone()));
    }
    if let Some(m) = measures.iter().flatten().next() {
        return Ok(Arc::new(m.space()?));
    }
    match f {
        Some(f) => Ok(Arc::new(AtomicMeasureSpace::uniform(f.values().len())?)),
        None => Err(CliError::Parse(
            "cannot determine the measure space: give --carrier, a measure, or a function".into(),
        )),
    }
}

pub fn function(carrier: &SpaceRef, f: &FnInput) -> Result<SimpleFn, CliError> {
    Ok(SimpleFn::new(carrier.clone(), f.values().to_vec())?)
}

/// Atom labels, or the whole space when absent.
pub fn atom_set(carrier: &AtomicMeasureSpace, arg: Option<&str>) -> Result<AtomSet, CliError> {
    match arg {
        None => Ok(AtomSet::full(carrier.len())),
        Some(a) => {
            let ids: Vec<String> = json_arg("--set", a)?;
            Ok(AtomSet::from_ids(carrier, &ids)?)
        }
    }
}
