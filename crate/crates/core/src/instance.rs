//! JSON instance files.
//!
//! ```json
//! {
//!   "field": "real",
//!   "family": [[0.7071067811865476, 0.7071067811865476]],
//!   "x": [0.7071067811865476, 2.1213203435596424],
//!   "phi": [1.0],
//!   "Phi": [3.0]
//! }
//! ```
//!
//! A scalar is either a number or `[re, im]`. Optional keys: `y` with
//! `gamma`/`Gamma` (second vector and corridor), `delta`/`Delta` (scalar
//! pair for the Schwarz counterparts), `orthonormalize` (run Gram–Schmidt
//! on `family` instead of validating it).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{gram_schmidt, validate_family, OrthonormalFamily};
use crate::hypothesis::ScalarCorridor;
use crate::space::{Field, Scalar, Vector};
use crate::tolerance::EXACT_FAMILY_TOL;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum ScalarRepr {
    Real(f64),
    Complex([f64; 2]),
}

impl From<ScalarRepr> for Scalar {
    fn from(s: ScalarRepr) -> Self {
        match s {
            ScalarRepr::Real(re) => Scalar::new(re, 0.0),
            ScalarRepr::Complex([re, im]) => Scalar::new(re, im),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    #[serde(default)]
    field: Field,
    family: Vec<Vec<ScalarRepr>>,
    #[serde(default)]
    orthonormalize: bool,
    x: Vec<ScalarRepr>,
    phi: Vec<ScalarRepr>,
    #[serde(rename = "Phi")]
    big_phi: Vec<ScalarRepr>,
    y: Option<Vec<ScalarRepr>>,
    gamma: Option<Vec<ScalarRepr>>,
    #[serde(rename = "Gamma")]
    big_gamma: Option<Vec<ScalarRepr>>,
    delta: Option<ScalarRepr>,
    #[serde(rename = "Delta")]
    big_delta: Option<ScalarRepr>,
}

/// A validated instance.
#[derive(Debug, Clone)]
pub struct Instance {
    pub field: Field,
    pub family: OrthonormalFamily,
    pub x: Vector,
    pub cx: ScalarCorridor,
    pub y: Option<Vector>,
    pub cy: Option<ScalarCorridor>,
    /// `(delta, Delta)`.
    pub scalar_pair: Option<(Scalar, Scalar)>,
}

fn at(path: impl Into<String>, message: impl ToString) -> Error {
    Error::Instance {
        path: path.into(),
        message: message.to_string(),
    }
}

fn scalars(raw: &[ScalarRepr], field: Field, path: &str) -> Result<Vec<Scalar>> {
    raw.iter()
        .enumerate()
        .map(|(k, &s)| {
            let z = Scalar::from(s);
            if !(z.re.is_finite() && z.im.is_finite()) {
                Err(at(format!("{path}[{k}]"), "value is not finite"))
            } else if !field.admits(z) {
                Err(at(format!("{path}[{k}]"), "imaginary part in a real instance"))
            } else {
                Ok(z)
            }
        })
        .collect()
}

fn vector(raw: &[ScalarRepr], field: Field, dim: usize, path: &str) -> Result<Vector> {
    if raw.len() != dim {
        return Err(at(path, format!("expected {dim} coordinates, found {}", raw.len())));
    }
    Vector::with_field(scalars(raw, field, path)?, field).map_err(|e| at(path, e))
}

fn corridor(lo: &[ScalarRepr], hi: &[ScalarRepr], field: Field, size: usize, names: (&str, &str)) -> Result<ScalarCorridor> {
    for (raw, name) in [(lo, names.0), (hi, names.1)] {
        if raw.len() != size {
            return Err(at(name, format!("expected {size} entries (one per family member), found {}", raw.len())));
        }
    }
    ScalarCorridor::new(scalars(lo, field, names.0)?, scalars(hi, field, names.1)?).map_err(|e| at(names.0, e))
}

/// Parses and validates an instance; errors carry the JSON path of the
/// offending field.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawInstance = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        at(if path.is_empty() { ".".to_string() } else { path }, e.into_inner())
    })?;
    let field = raw.field;
    let dim = raw.family.first().map(Vec::len).ok_or_else(|| at("family", "family is empty"))?;
    if dim == 0 {
        return Err(at("family[0]", "zero-dimensional vector"));
    }
    let members = raw
        .family
        .iter()
        .enumerate()
        .map(|(i, v)| vector(v, field, dim, &format!("family[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let family = if raw.orthonormalize {
        gram_schmidt(&members, EXACT_FAMILY_TOL)
    } else {
        validate_family(members, EXACT_FAMILY_TOL)
    }
    .map_err(|e| at("family", e))?;
    let size = family.len();

    let x = vector(&raw.x, field, dim, "x")?;
    let cx = corridor(&raw.phi, &raw.big_phi, field, size, ("phi", "Phi"))?;

    let y = raw.y.as_deref().map(|v| vector(v, field, dim, "y")).transpose()?;
    let cy = match (&raw.gamma, &raw.big_gamma) {
        (Some(lo), Some(hi)) => Some(corridor(lo, hi, field, size, ("gamma", "Gamma"))?),
        (None, None) => None,
        (None, Some(_)) => return Err(at("gamma", "missing while Gamma is given")),
        (Some(_), None) => return Err(at("Gamma", "missing while gamma is given")),
    };
    let scalar_pair = match (raw.delta, raw.big_delta) {
        (Some(d), Some(bd)) => {
            let both = scalars(&[d, bd], field, "delta/Delta")?;
            Some((both[0], both[1]))
        }
        (None, None) => None,
        (None, Some(_)) => return Err(at("delta", "missing while Delta is given")),
        (Some(_), None) => return Err(at("Delta", "missing while delta is given")),
    };
    Ok(Instance {
        field,
        family,
        x,
        cx,
        y,
        cy,
        scalar_pair,
    })
}

impl Instance {
    pub fn second(&self) -> Result<(&Vector, &ScalarCorridor)> {
        let y = self.y.as_ref().ok_or_else(|| at("y", "required by this bound"))?;
        let cy = self.cy.as_ref().ok_or_else(|| at("gamma", "required by this bound"))?;
        Ok((y, cy))
    }

    pub fn schwarz(&self) -> Result<(&Vector, Scalar, Scalar)> {
        let y = self.y.as_ref().ok_or_else(|| at("y", "required by this bound"))?;
        let (d, bd) = self.scalar_pair.ok_or_else(|| at("delta", "required by this bound"))?;
        Ok((y, d, bd))
    }
}
