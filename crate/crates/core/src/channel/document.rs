//! Channel-spec documents (JSON).
//!
//! ```json
//! { "type": "depolarizing", "dims": {"a": 2, "b": 2, "c": 4}, "p": 0.1, "seed": 7 }
//! ```
//!
//! Payload per `type`:
//! - `explicit`: `matrix`, row-major `(b·c) × a` entries as `[re, im]` pairs
//! - `unitary_mixture`: `probs` (Haar unitaries drawn from `seed`)
//! - `subspace_embedding`: `basis`, `a` vectors of `b·c` `[re, im]` pairs
//! - `depolarizing`: `p`
//! - `amplitude_damping`: `gamma`
//!
//! `name` and `seed` are optional. The JSON schema lives in
//! `schemas/channel-spec.schema.json`.

use serde_json::{json, Map, Value};

use super::{
    amplitude_damping, depolarizing, make_random_mixture_of_unitaries,
    make_subspace_embedding_channel, ChannelDims, StinespringIsometry,
};
use crate::error::{Error, Result};
use crate::tensor::{BipartiteShape, C64, CMat, CVec};

#[derive(Debug, Clone, PartialEq)]
pub enum ChannelKind {
    Explicit { matrix: Vec<C64> },
    UnitaryMixture { probs: Vec<f64> },
    SubspaceEmbedding { basis: Vec<Vec<C64>> },
    Depolarizing { p: f64 },
    AmplitudeDamping { gamma: f64 },
}

impl ChannelKind {
    pub fn type_name(&self) -> &'static str {
        match self {
            ChannelKind::Explicit { .. } => "explicit",
            ChannelKind::UnitaryMixture { .. } => "unitary_mixture",
            ChannelKind::SubspaceEmbedding { .. } => "subspace_embedding",
            ChannelKind::Depolarizing { .. } => "depolarizing",
            ChannelKind::AmplitudeDamping { .. } => "amplitude_damping",
        }
    }

    fn payload_key(&self) -> &'static str {
        match self {
            ChannelKind::Explicit { .. } => "matrix",
            ChannelKind::UnitaryMixture { .. } => "probs",
            ChannelKind::SubspaceEmbedding { .. } => "basis",
            ChannelKind::Depolarizing { .. } => "p",
            ChannelKind::AmplitudeDamping { .. } => "gamma",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSpec {
    pub name: Option<String>,
    pub dims: ChannelDims,
    pub seed: u64,
    pub kind: ChannelKind,
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::schema(join(path, key), "missing required field"))
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn as_f64(v: &Value, path: &str) -> Result<f64> {
    v.as_f64()
        .filter(|x| x.is_finite())
        .ok_or_else(|| Error::schema(path, "expected a finite number"))
}

fn as_dim(v: &Value, path: &str) -> Result<usize> {
    match v.as_u64() {
        Some(n) if n >= 1 => Ok(n as usize),
        _ => Err(Error::schema(path, "expected a positive integer")),
    }
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::schema(path, "expected an array"))
}

fn as_complex(v: &Value, path: &str) -> Result<C64> {
    let pair = as_array(v, path)?;
    if pair.len() != 2 {
        return Err(Error::schema(path, "expected a [re, im] pair"));
    }
    Ok(C64::new(
        as_f64(&pair[0], &format!("{path}[0]"))?,
        as_f64(&pair[1], &format!("{path}[1]"))?,
    ))
}

fn complex_list(v: &Value, path: &str, expected_len: usize) -> Result<Vec<C64>> {
    let items = as_array(v, path)?;
    if items.len() != expected_len {
        return Err(Error::schema(
            path,
            format!("expected {expected_len} entries, found {}", items.len()),
        ));
    }
    items
        .iter()
        .enumerate()
        .map(|(i, x)| as_complex(x, &format!("{path}[{i}]")))
        .collect()
}

fn pair(z: C64) -> Value {
    json!([z.re, z.im])
}

const KNOWN_TYPES: [&str; 5] = [
    "explicit",
    "unitary_mixture",
    "subspace_embedding",
    "depolarizing",
    "amplitude_damping",
];

impl ChannelSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text)
            .map_err(|e| Error::schema("", format!("not valid JSON: {e}")))?;
        Self::from_value(&value)
    }

    pub fn from_value(value: &Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::schema("", "document must be an object"))?;
        let ty = field(obj, "type", "")?
            .as_str()
            .ok_or_else(|| Error::schema("type", "expected a string"))?;
        if !KNOWN_TYPES.contains(&ty) {
            return Err(Error::UnknownPreset(ty.to_string()));
        }

        let dims_obj = field(obj, "dims", "")?
            .as_object()
            .ok_or_else(|| Error::schema("dims", "expected an object with a, b, c"))?;
        let dims = ChannelDims {
            a: as_dim(field(dims_obj, "a", "dims")?, "dims.a")?,
            b: as_dim(field(dims_obj, "b", "dims")?, "dims.b")?,
            c: as_dim(field(dims_obj, "c", "dims")?, "dims.c")?,
        };
        for key in dims_obj.keys() {
            if !["a", "b", "c"].contains(&key.as_str()) {
                return Err(Error::schema(join("dims", key), "unknown field"));
            }
        }

        let seed = match obj.get("seed") {
            None => 0,
            Some(v) => v
                .as_u64()
                .ok_or_else(|| Error::schema("seed", "expected a nonnegative integer"))?,
        };
        let name = match obj.get("name") {
            None => None,
            Some(v) => Some(
                v.as_str()
                    .ok_or_else(|| Error::schema("name", "expected a string"))?
                    .to_string(),
            ),
        };

        let kind = match ty {
            "explicit" => ChannelKind::Explicit {
                matrix: complex_list(field(obj, "matrix", "")?, "matrix", dims.a * dims.b * dims.c)?,
            },
            "unitary_mixture" => {
                let raw = as_array(field(obj, "probs", "")?, "probs")?;
                let probs = raw
                    .iter()
                    .enumerate()
                    .map(|(i, v)| as_f64(v, &format!("probs[{i}]")))
                    .collect::<Result<Vec<_>>>()?;
                if dims.a != dims.b {
                    return Err(Error::schema("dims.b", "unitary mixture needs b = a"));
                }
                if dims.c != probs.len() {
                    return Err(Error::schema(
                        "dims.c",
                        format!("expected {} (number of probs), found {}", probs.len(), dims.c),
                    ));
                }
                ChannelKind::UnitaryMixture { probs }
            }
            "subspace_embedding" => {
                let raw = as_array(field(obj, "basis", "")?, "basis")?;
                if raw.len() != dims.a {
                    return Err(Error::schema(
                        "basis",
                        format!("expected {} vectors (dims.a), found {}", dims.a, raw.len()),
                    ));
                }
                let basis = raw
                    .iter()
                    .enumerate()
                    .map(|(i, v)| complex_list(v, &format!("basis[{i}]"), dims.b * dims.c))
                    .collect::<Result<Vec<_>>>()?;
                ChannelKind::SubspaceEmbedding { basis }
            }
            "depolarizing" => {
                let p = as_f64(field(obj, "p", "")?, "p")?;
                if dims.a != dims.b {
                    return Err(Error::schema("dims.b", "depolarizing needs b = a"));
                }
                if dims.c != dims.a * dims.a {
                    return Err(Error::schema(
                        "dims.c",
                        format!("expected {} (a squared), found {}", dims.a * dims.a, dims.c),
                    ));
                }
                ChannelKind::Depolarizing { p }
            }
            "amplitude_damping" => {
                let gamma = as_f64(field(obj, "gamma", "")?, "gamma")?;
                if dims != (ChannelDims { a: 2, b: 2, c: 2 }) {
                    return Err(Error::schema("dims", "amplitude damping needs a = b = c = 2"));
                }
                ChannelKind::AmplitudeDamping { gamma }
            }
            _ => unreachable!("type checked above"),
        };

        let allowed = ["type", "dims", "seed", "name", kind.payload_key()];
        if let Some(extra) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(Error::schema(extra.clone(), "unknown field"));
        }

        Ok(Self {
            name,
            dims,
            seed,
            kind,
        })
    }

    /// Constructs and validates the isometry.
    pub fn build(&self) -> Result<StinespringIsometry> {
        let d = self.dims;
        match &self.kind {
            ChannelKind::Explicit { matrix } => {
                let m = CMat::from_row_slice(d.b * d.c, d.a, matrix);
                StinespringIsometry::new(m, d.b, d.c)
            }
            ChannelKind::UnitaryMixture { probs } => {
                make_random_mixture_of_unitaries(d.a, probs.len(), probs, self.seed)
            }
            ChannelKind::SubspaceEmbedding { basis } => {
                let vecs: Vec<CVec> = basis.iter().map(|v| CVec::from_column_slice(v)).collect();
                make_subspace_embedding_channel(&vecs, BipartiteShape::new(d.b, d.c)?)
            }
            ChannelKind::Depolarizing { p } => depolarizing(d.a, *p),
            ChannelKind::AmplitudeDamping { gamma } => amplitude_damping(*gamma),
        }
    }

    pub fn to_value(&self) -> Value {
        let mut obj = Map::new();
        if let Some(name) = &self.name {
            obj.insert("name".into(), json!(name));
        }
        obj.insert("type".into(), json!(self.kind.type_name()));
        obj.insert(
            "dims".into(),
            json!({"a": self.dims.a, "b": self.dims.b, "c": self.dims.c}),
        );
        obj.insert("seed".into(), json!(self.seed));
        let payload = match &self.kind {
            ChannelKind::Explicit { matrix } => Value::Array(matrix.iter().map(|&z| pair(z)).collect()),
            ChannelKind::UnitaryMixture { probs } => json!(probs),
            ChannelKind::SubspaceEmbedding { basis } => Value::Array(
                basis
                    .iter()
                    .map(|v| Value::Array(v.iter().map(|&z| pair(z)).collect()))
                    .collect(),
            ),
            ChannelKind::Depolarizing { p } => json!(p),
            ChannelKind::AmplitudeDamping { gamma } => json!(gamma),
        };
        obj.insert(self.kind.payload_key().into(), payload);
        Value::Object(obj)
    }
}

/// Parses a channel-spec document and builds its isometry.
pub fn load_channel_spec(document: &str) -> Result<StinespringIsometry> {
    ChannelSpec::parse(document)?.build()
}

/// Exports a subspace basis as a `subspace_embedding` document.
pub fn subspace_document(basis: &[CVec], shape: BipartiteShape, name: Option<&str>) -> Value {
    ChannelSpec {
        name: name.map(str::to_string),
        dims: ChannelDims {
            a: basis.len(),
            b: shape.dim_b,
            c: shape.dim_c,
        },
        seed: 0,
        kind: ChannelKind::SubspaceEmbedding {
            basis: basis.iter().map(|v| v.iter().copied().collect()).collect(),
        },
    }
    .to_value()
}
