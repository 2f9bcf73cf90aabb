//! Validator for the JSON-Schema subset used by the shipped schemas:
//! `type`, `properties`, `required`, `additionalProperties`, `items`,
//! `minItems`, `maxItems`, `enum`, `const`, `minimum`, `maximum`, `exclusiveMinimum` and
//! local `$ref` pointers of the form `#/definitions/<name>`.

use serde_json::Value;

/// Report schema shipped with the crate.
pub const REPORT_SCHEMA: &str = include_str!("../../schemas/report.schema.json");
/// Channel-spec schema shipped with the crate.
pub const CHANNEL_SPEC_SCHEMA: &str = include_str!("../../schemas/channel-spec.schema.json");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaViolation {
    /// JSON-pointer-like path of the offending value.
    pub path: String,
    pub message: String,
}

impl std::fmt::Display for SchemaViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

/// All violations of `instance` against `schema`; empty means valid.
pub fn validate(instance: &Value, schema: &Value) -> Vec<SchemaViolation> {
    let mut out = Vec::new();
    check(instance, schema, schema, "$", &mut out);
    out
}

fn type_matches(v: &Value, t: &str) -> bool {
    match t {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "boolean" => v.is_boolean(),
        "null" => v.is_null(),
        "number" => v.is_number(),
        "integer" => v.is_u64() || v.is_i64(),
        _ => false,
    }
}

fn resolve<'a>(root: &'a Value, reference: &str) -> Option<&'a Value> {
    let name = reference.strip_prefix("#/definitions/")?;
    root.get("definitions")?.get(name)
}

fn check(v: &Value, schema: &Value, root: &Value, path: &str, out: &mut Vec<SchemaViolation>) {
    let mut fail = |message: String| {
        out.push(SchemaViolation {
            path: path.to_string(),
            message,
        })
    };
    if let Some(r) = schema.get("$ref").and_then(Value::as_str) {
        match resolve(root, r) {
            Some(target) => check(v, target, root, path, out),
            None => fail(format!("unresolvable reference {r}")),
        }
        return;
    }
    if let Some(t) = schema.get("type") {
        let ok = match t {
            Value::String(s) => type_matches(v, s),
            Value::Array(ts) => ts.iter().filter_map(Value::as_str).any(|s| type_matches(v, s)),
            _ => true,
        };
        if !ok {
            fail(format!("expected type {t}"));
            return;
        }
    }
    if let Some(c) = schema.get("const") {
        if v != c {
            fail(format!("expected constant {c}"));
        }
    }
    if let Some(Value::Array(options)) = schema.get("enum") {
        if !options.contains(v) {
            fail(format!("value {v} not in enumeration"));
        }
    }
    if let Some(x) = v.as_f64() {
        if let Some(min) = schema.get("minimum").and_then(Value::as_f64) {
            if x < min {
                fail(format!("{x} below minimum {min}"));
            }
        }
        if let Some(max) = schema.get("maximum").and_then(Value::as_f64) {
            if x > max {
                fail(format!("{x} above maximum {max}"));
            }
        }
        if let Some(min) = schema.get("exclusiveMinimum").and_then(Value::as_f64) {
            if x <= min {
                fail(format!("{x} not above {min}"));
            }
        }
    }
    if let Value::Object(obj) = v {
        if let Some(Value::Array(req)) = schema.get("required") {
            for key in req.iter().filter_map(Value::as_str) {
                if !obj.contains_key(key) {
                    out.push(SchemaViolation {
                        path: format!("{path}.{key}"),
                        message: "missing required property".into(),
                    });
                }
            }
        }
        let props = schema.get("properties").and_then(Value::as_object);
        for (key, child) in obj {
            let child_path = format!("{path}.{key}");
            match props.and_then(|p| p.get(key)) {
                Some(s) => check(child, s, root, &child_path, out),
                None => match schema.get("additionalProperties") {
                    Some(Value::Bool(false)) => out.push(SchemaViolation {
                        path: child_path,
                        message: "unexpected property".into(),
                    }),
                    Some(s @ Value::Object(_)) => check(child, s, root, &child_path, out),
                    _ => {}
                },
            }
        }
    }
    if let Value::Array(items) = v {
        if let Some(min) = schema.get("minItems").and_then(Value::as_u64) {
            if (items.len() as u64) < min {
                out.push(SchemaViolation {
                    path: path.to_string(),
                    message: format!("fewer than {min} items"),
                });
            }
        }
        if let Some(max) = schema.get("maxItems").and_then(Value::as_u64) {
            if (items.len() as u64) > max {
                out.push(SchemaViolation {
                    path: path.to_string(),
                    message: format!("more than {max} items"),
                });
            }
        }
        if let Some(item_schema) = schema.get("items") {
            for (i, item) in items.iter().enumerate() {
                check(item, item_schema, root, &format!("{path}[{i}]"), out);
            }
        }
    }
}
