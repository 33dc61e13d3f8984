//! Hypersurface input files.
//!
//! ```json
//! {"n": 3, "d": 3, "field": {"prime": 7}, "form": "x0^3 + x1^3 + x2^3 + x3^3",
//!  "marked_planes": [[[1, 6, 0, 0], [0, 0, 1, 6]]]}
//! ```
//! `field` may also be `"QQ"`. A marked plane is a list of rows; a bare row
//! is read as a point.

use std::path::Path;

use fano_core::algebra::{parse_elem, parse_form, Field, FieldSpec, PrimeField, Rationals};
use fano_core::varieties::{Hypersurface, KPlane};
use fano_core::Error;
use serde::Deserialize;
use serde_json::Value;

use crate::CliError;

#[derive(Debug, Clone, Deserialize)]
pub struct InputFile {
    pub n: usize,
    pub d: u32,
    pub field: FieldSpec,
    pub form: String,
    #[serde(default)]
    pub marked_planes: Vec<Value>,
}

#[derive(Debug, Clone)]
pub struct Input<F: Field> {
    pub x: Hypersurface<F>,
    pub marked: Vec<KPlane<F>>,
}

#[derive(Debug, Clone)]
pub enum Loaded {
    Prime(Input<PrimeField>),
    Rational(Input<Rationals>),
}

impl Loaded {
    pub fn spec(&self) -> FieldSpec {
        match self {
            Loaded::Prime(i) => i.x.field().spec(),
            Loaded::Rational(i) => i.x.field().spec(),
        }
    }
}

pub fn read_file(path: &Path) -> Result<InputFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage("--input", format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::usage("--input", format!("{} is not a hypersurface file: {e}", path.display())))
}

fn value_text(v: &Value) -> Result<String, Error> {
    match v {
        Value::Number(n) => Ok(n.to_string()),
        Value::String(s) => Ok(s.clone()),
        other => Err(Error::InvalidArgument(format!("coordinate {other} is neither a number nor a string"))),
    }
}

fn plane_from_value<F: Field>(fl: &F, n: usize, v: &Value) -> Result<KPlane<F>, Error> {
    let rows: Vec<&Value> = match v {
        Value::Array(items) if items.iter().all(Value::is_array) => items.iter().collect(),
        Value::Array(_) => vec![v],
        other => return Err(Error::InvalidArgument(format!("marked plane {other} is not a list of rows"))),
    };
    let rows: Vec<Vec<F::Elem>> = rows
        .into_iter()
        .map(|r| {
            r.as_array()
                .expect("checked above")
                .iter()
                .map(|c| parse_elem(&value_text(c)?, fl))
                .collect::<Result<Vec<_>, Error>>()
        })
        .collect::<Result<_, _>>()?;
    KPlane::new(fl, n, rows)
}

fn build<F: Field>(fl: &F, file: &InputFile) -> Result<Input<F>, CliError> {
    let form = parse_form(&file.form, file.n + 1, fl, Some(file.d)).map_err(|e| CliError::at("--input", e))?;
    if form.degree() != file.d {
        return Err(CliError::at(
            "--input",
            Error::InvalidArgument(format!("form has degree {} but d = {}", form.degree(), file.d)),
        ));
    }
    let x = Hypersurface::new(form).map_err(|e| CliError::at("--input", e))?;
    let marked = file
        .marked_planes
        .iter()
        .map(|v| plane_from_value(fl, file.n, v))
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::at("--input", e))?;
    Ok(Input { x, marked })
}

/// Load a file, re-reading the form over F_p when `prime` is given.
pub fn load(file: &InputFile, prime: Option<u64>) -> Result<Loaded, CliError> {
    let spec = match prime {
        Some(p) => FieldSpec::Prime(p),
        None => file.field,
    };
    match spec {
        FieldSpec::Prime(p) => {
            let fl = PrimeField::new(p).map_err(|e| CliError::at("--prime", e))?;
            Ok(Loaded::Prime(build(&fl, file)?))
        }
        FieldSpec::Rationals => Ok(Loaded::Rational(build(&Rationals, file)?)),
    }
}
