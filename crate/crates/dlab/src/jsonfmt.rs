//! JSON encodings: space descriptors, vectors (dense or sparse), and
//! diagnostic reports.

use serde_json::{json, Map, Value};

use crate::diag::{DiagnosticReport, Property, Verdict, Witness};
use crate::error::{Error, Result};
use crate::space::{PExp, SpaceDescriptor};
use crate::vector::SparseVector;

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidDescriptor(msg.into())
}

/// Accepts a dense array `[1, 0, 2]` (coordinates 1..) or a sparse map
/// `{"1": 1, "3": 2}`.
pub fn vector_from_json(v: &Value) -> Result<SparseVector> {
    match v {
        Value::Array(items) => {
            let mut vals = Vec::with_capacity(items.len());
            for it in items {
                vals.push(it.as_f64().ok_or_else(|| bad("non-numeric vector entry"))?);
            }
            Ok(SparseVector::from_dense(&vals))
        }
        Value::Object(map) => {
            let mut entries = Vec::with_capacity(map.len());
            for (k, val) in map {
                let i: u32 = k
                    .parse()
                    .map_err(|_| bad(format!("bad coordinate index {k:?}")))?;
                if i == 0 {
                    return Err(bad("coordinates are 1-based"));
                }
                entries.push((
                    i,
                    val.as_f64().ok_or_else(|| bad("non-numeric vector entry"))?,
                ));
            }
            Ok(SparseVector::from_entries(entries))
        }
        _ => Err(bad("vector must be an array or an index map")),
    }
}

pub fn vector_to_json(x: &SparseVector) -> Value {
    let mut map = Map::new();
    for (i, v) in x.iter() {
        map.insert(i.to_string(), json!(v));
    }
    Value::Object(map)
}

/// Parses a CLI vector argument: either a dense comma list "1,0,2" or a
/// JSON sparse map.
pub fn vector_from_arg(s: &str) -> Result<SparseVector> {
    let s = s.trim();
    if s.starts_with('{') || s.starts_with('[') {
        let v: Value = serde_json::from_str(s).map_err(|e| bad(format!("bad vector JSON: {e}")))?;
        return vector_from_json(&v);
    }
    let mut vals = Vec::new();
    for part in s.split(',') {
        vals.push(
            part.trim()
                .parse::<f64>()
                .map_err(|_| bad(format!("bad vector entry {part:?}")))?,
        );
    }
    Ok(SparseVector::from_dense(&vals))
}

fn pexp_from_json(v: &Value) -> Result<PExp> {
    match v {
        Value::String(s) if s == "inf" => Ok(PExp::Inf),
        Value::Number(n) => Ok(PExp::Finite(
            n.as_f64().ok_or_else(|| bad("bad exponent"))?,
        )),
        _ => Err(bad("exponent must be a number or \"inf\"")),
    }
}

fn pexp_to_json(p: PExp) -> Value {
    match p {
        PExp::Inf => json!("inf"),
        // Keep integer exponents integral so inputs round-trip bit-exactly.
        PExp::Finite(p) if p.fract() == 0.0 => json!(p as i64),
        PExp::Finite(p) => json!(p),
    }
}

fn field<'a>(map: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    map.get(key).ok_or_else(|| bad(format!("missing field {key:?}")))
}

pub fn space_from_json(v: &Value) -> Result<SpaceDescriptor> {
    let map = v.as_object().ok_or_else(|| bad("space must be an object"))?;
    let tag = field(map, "type")?
        .as_str()
        .ok_or_else(|| bad("type must be a string"))?;
    let space = match tag {
        "lp" => SpaceDescriptor::Lp {
            p: pexp_from_json(field(map, "p")?)?,
            dim: field(map, "dim")?
                .as_u64()
                .ok_or_else(|| bad("dim must be a positive integer"))? as usize,
        },
        "polytope" => {
            let gens = field(map, "generators")?
                .as_array()
                .ok_or_else(|| bad("generators must be an array"))?
                .iter()
                .map(vector_from_json)
                .collect::<Result<Vec<_>>>()?;
            SpaceDescriptor::PolytopeV {
                generators: gens,
                dim: field(map, "dim")?
                    .as_u64()
                    .ok_or_else(|| bad("dim must be a positive integer"))? as usize,
            }
        }
        "renorm" => SpaceDescriptor::Renormed {
            base: Box::new(space_from_json(field(map, "base")?)?),
        },
        "sum" => SpaceDescriptor::AbsoluteSum {
            norm2d: Box::new(space_from_json(field(map, "norm")?)?),
            left: Box::new(space_from_json(field(map, "left")?)?),
            right: Box::new(space_from_json(field(map, "right")?)?),
        },
        "tensor" => SpaceDescriptor::ProjTensor {
            left: Box::new(space_from_json(field(map, "left")?)?),
            right: Box::new(space_from_json(field(map, "right")?)?),
        },
        _ => return Err(bad(format!("unknown space type {tag:?}"))),
    };
    space.validate()?;
    Ok(space)
}

pub fn space_to_json(s: &SpaceDescriptor) -> Value {
    match s {
        SpaceDescriptor::Lp { p, dim } => json!({"type": "lp", "p": pexp_to_json(*p), "dim": dim}),
        SpaceDescriptor::PolytopeV { generators, dim } => json!({
            "type": "polytope",
            "generators": generators.iter().map(vector_to_json).collect::<Vec<_>>(),
            "dim": dim,
        }),
        SpaceDescriptor::Renormed { base } => json!({"type": "renorm", "base": space_to_json(base)}),
        SpaceDescriptor::AbsoluteSum {
            norm2d,
            left,
            right,
        } => json!({
            "type": "sum",
            "norm": space_to_json(norm2d),
            "left": space_to_json(left),
            "right": space_to_json(right),
        }),
        SpaceDescriptor::ProjTensor { left, right } => json!({
            "type": "tensor",
            "left": space_to_json(left),
            "right": space_to_json(right),
        }),
    }
}

fn property_name(p: Property) -> &'static str {
    match p {
        Property::Nabla => "nabla",
        Property::DPoint => "dpoint",
        Property::Daugavet => "daugavet",
        Property::StronglyExposed => "strongly_exposed",
    }
}

pub fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Holds => "Holds",
        Verdict::Fails => "Fails",
        Verdict::LowerBoundOnly => "LowerBoundOnly",
    }
}

fn witness_to_json(w: &Witness) -> Value {
    json!({"vector": vector_to_json(&w.vector), "achieved": w.achieved})
}

pub fn report_to_json(r: &DiagnosticReport) -> Value {
    let mut params = Map::new();
    if let Some(a) = r.params.alpha {
        params.insert("alpha".into(), json!(a));
    }
    if let Some(e) = r.params.eps {
        params.insert("eps".into(), json!(e));
    }
    if let Some(s) = r.params.samples {
        params.insert("samples".into(), json!(s));
    }
    if let Some(d) = r.params.nabla_deficiency {
        params.insert("nabla_deficiency".into(), json!(d));
    }
    if let Some(d) = r.params.dpoint_deficiency {
        params.insert("dpoint_deficiency".into(), json!(d));
    }
    json!({
        "property": property_name(r.property),
        "verdict": verdict_name(r.verdict),
        "deficiency": r.deficiency,
        "witness": r.witness.as_ref().map(witness_to_json),
        "params": Value::Object(params),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vector_forms() {
        let dense = serde_json::json!([1, 0, 2]);
        let sparse = serde_json::json!({"1": 1, "3": 2});
        let a = vector_from_json(&dense).unwrap();
        let b = vector_from_json(&sparse).unwrap();
        assert_eq!(a, b);
        assert_eq!(vector_from_arg("1,0,2").unwrap(), a);
        assert_eq!(vector_from_arg("{\"1\":1,\"3\":2}").unwrap(), a);
        // round trip
        assert_eq!(vector_from_json(&vector_to_json(&a)).unwrap(), a);
    }

    #[test]
    fn space_round_trip() {
        let v = serde_json::json!({
            "type": "sum",
            "norm": {"type": "lp", "p": 1, "dim": 2},
            "left": {"type": "renorm", "base": {"type": "lp", "p": 2, "dim": 3}},
            "right": {"type": "lp", "p": "inf", "dim": 2},
        });
        let s = space_from_json(&v).unwrap();
        assert_eq!(s.dim(), 5);
        let back = space_to_json(&s);
        assert_eq!(v, back);
    }

    #[test]
    fn bad_inputs_are_rejected() {
        assert!(space_from_json(&serde_json::json!({"type": "warp"})).is_err());
        assert!(space_from_json(&serde_json::json!({"type": "lp", "p": 0.5, "dim": 2})).is_err());
        assert!(vector_from_arg("1,x").is_err());
        assert!(vector_from_json(&serde_json::json!({"0": 1})).is_err());
    }
}
