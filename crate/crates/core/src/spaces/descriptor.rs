//! JSON model files.
//!
//! ```json
//! { "schema": 1, "type": "graph", "points": 3, "edges": [[0, 1], [1, 2]],
//!   "atoms": { "a": [0], "b": ["2"] } }
//! ```
//!
//! Points are a count (named `"0"`, `"1"`, …) or a list of names; point
//! references are indices or names; rationals are `"num/den"` strings,
//! decimal strings, or plain JSON numbers.

use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{Map, Value as Json};

use super::pgm;
use super::{
    Adjacency, Direction, ExplicitSpace, ExplicitTable, FuzzySpace, GridSpace, KripkeFrame,
    KripkeMode, MarkovFrame, PointBackend, PointSpace, QuasiDiscreteSpace, Space, SpaceModel, Value,
};
use crate::algebra::{parse_grade, Carrier, FuzzyPredicateAlgebra};
use crate::bitset::PointSet;
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u64 = 1;

/// Reads and validates a model file. Relative PGM paths resolve against the
/// file's directory.
pub fn load_model(path: &Path) -> Result<SpaceModel> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let json: Json = serde_json::from_str(&text)?;
    build_space(&json, path.parent())
}

/// Builds a validated model from a parsed descriptor.
pub fn build_space(desc: &Json, base_dir: Option<&Path>) -> Result<SpaceModel> {
    let obj = desc
        .as_object()
        .ok_or_else(|| Error::invalid("model descriptor must be a JSON object"))?;
    if let Some(v) = obj.get("schema") {
        if v.as_u64() != Some(SCHEMA_VERSION) {
            return Err(Error::invalid(format!(
                "unsupported schema {v} (expected {SCHEMA_VERSION})"
            )));
        }
    }
    let kind = str_field(obj, "type")?;
    let space = match kind {
        "graph" => {
            let carrier = carrier_field(obj)?;
            let edges = match obj.get("edges") {
                None => Vec::new(),
                Some(e) => array(e, "edges")?
                    .iter()
                    .map(|pair| {
                        let p = array(pair, "edge")?;
                        if p.len() != 2 {
                            return Err(Error::invalid("each edge must be a pair"));
                        }
                        Ok((point_ref(&carrier, &p[0])?, point_ref(&carrier, &p[1])?))
                    })
                    .collect::<Result<Vec<_>>>()?,
            };
            let direction = match obj.get("direction") {
                None => Direction::Forward,
                Some(d) => Direction::parse(as_str(d, "direction")?)?,
            };
            Space::Points(PointSpace::new(PointBackend::Graph(QuasiDiscreteSpace::new(
                carrier, edges, direction,
            )?)))
        }
        "grid" => {
            let width = usize_field(obj, "width")?;
            let height = usize_field(obj, "height")?;
            let adjacency = match obj.get("adjacency") {
                None => Adjacency::VonNeumann4,
                Some(a) => Adjacency::parse(as_str(a, "adjacency")?)?,
            };
            Space::Points(PointSpace::new(PointBackend::Grid(GridSpace::new(
                width, height, adjacency,
            )?)))
        }
        "kripke" => {
            let carrier = carrier_field(obj)?;
            let succ = per_point(&carrier, field(obj, "successors")?, "successors")?
                .into_iter()
                .map(|v| point_list(&carrier, v))
                .collect::<Result<Vec<_>>>()?;
            let mode = match obj.get("mode") {
                None => KripkeMode::Pre,
                Some(m) => KripkeMode::parse(as_str(m, "mode")?)?,
            };
            Space::Points(PointSpace::new(PointBackend::Kripke(
                KripkeFrame::new(carrier, succ)?,
                mode,
            )))
        }
        "markov" => {
            let carrier = carrier_field(obj)?;
            let rows = per_point(&carrier, field(obj, "rows")?, "rows")?
                .into_iter()
                .map(|row| array(row, "row")?.iter().map(parse_rational).collect())
                .collect::<Result<Vec<Vec<_>>>>()?;
            let threshold = parse_rational(field(obj, "threshold")?)?;
            Space::Points(PointSpace::new(PointBackend::Markov(MarkovFrame::new(
                carrier, rows, threshold,
            )?)))
        }
        "explicit" => {
            let carrier = carrier_field(obj)?;
            let n = carrier.len();
            let closure = field(obj, "closure")?
                .as_object()
                .ok_or_else(|| Error::invalid("`closure` must be an object"))?;
            let additive = obj.get("additive").and_then(Json::as_bool).unwrap_or(false);
            let table = if let Some(single) = closure.get("singletons") {
                if !additive {
                    return Err(Error::invalid(
                        "singleton closures only define a space with \"additive\": true",
                    ));
                }
                let rows = per_point(&carrier, single, "singletons")?
                    .into_iter()
                    .map(|v| Ok(PointSet::from_indices(n, point_list(&carrier, v)?)))
                    .collect::<Result<Vec<_>>>()?;
                ExplicitTable::Additive(rows)
            } else if let Some(full) = closure.get("table") {
                if additive {
                    return Err(Error::invalid("a full table cannot be flagged additive"));
                }
                let rows = array(full, "table")?
                    .iter()
                    .map(|v| Ok(PointSet::from_indices(n, point_list(&carrier, v)?)))
                    .collect::<Result<Vec<_>>>()?;
                ExplicitTable::Full(rows)
            } else {
                return Err(Error::invalid("`closure` needs `singletons` or `table`"));
            };
            Space::Points(PointSpace::new(PointBackend::Explicit(ExplicitSpace::new(
                carrier, table,
            )?)))
        }
        "fuzzy" => {
            let carrier = carrier_field(obj)?;
            let k = usize_field(obj, "resolution")? as u32;
            let n = carrier.len();
            let grades = |v: &Json, what: &str| -> Result<Vec<u32>> {
                if v.is_array() || v.is_object() {
                    per_point(&carrier, v, what)?
                        .into_iter()
                        .map(|g| grade(g, k))
                        .collect()
                } else {
                    Ok(vec![grade(v, k)?; n])
                }
            };
            let membership = match obj.get("membership") {
                None => vec![k; n],
                Some(m) => grades(m, "membership")?,
            };
            let epsilon = grades(field(obj, "epsilon")?, "epsilon")?;
            let alg = FuzzyPredicateAlgebra::with_membership(carrier.clone(), k, membership)?;
            Space::Fuzzy(FuzzySpace::new(alg, epsilon)?)
        }
        other => return Err(Error::invalid(format!("unknown model type `{other}`"))),
    };

    let mut model = SpaceModel::new(space);
    if let Some(sort) = obj.get("sort") {
        model = model.with_sort(as_str(sort, "sort")?);
    }
    if let Some(atoms) = obj.get("atoms") {
        let atoms = atoms
            .as_object()
            .ok_or_else(|| Error::invalid("`atoms` must be an object"))?;
        for (name, v) in atoms {
            let value = atom_value(model.space(), v, base_dir)
                .map_err(|e| annotate(e, &format!("atom `{name}`")))?;
            model.set_atom(name.clone(), value)?;
        }
    }
    Ok(model)
}

/// Parses an atom valuation: a point list for subsets, a list or
/// name → value map for fuzzy subsets, or `{"pgm": file, "threshold": t}`
/// for grids.
pub fn atom_value(space: &Space, v: &Json, base_dir: Option<&Path>) -> Result<Value> {
    match space {
        Space::Points(p) => {
            if let Some(obj) = v.as_object() {
                if let Some(file) = obj.get("pgm") {
                    let PointBackend::Grid(g) = p.backend() else {
                        return Err(Error::invalid("PGM atoms need a grid model"));
                    };
                    let path = Path::new(as_str(file, "pgm")?);
                    let path = match base_dir {
                        Some(d) if path.is_relative() => d.join(path),
                        _ => path.to_path_buf(),
                    };
                    let image = pgm::read_pgm(&path)?;
                    if image.width != g.width() || image.height != g.height() {
                        return Err(Error::invalid(format!(
                            "image is {}×{}, grid is {}×{}",
                            image.width,
                            image.height,
                            g.width(),
                            g.height()
                        )));
                    }
                    let threshold = obj.get("threshold").and_then(Json::as_u64).unwrap_or(128) as u16;
                    let invert = obj.get("invert").and_then(Json::as_bool).unwrap_or(false);
                    let pts = image.threshold(threshold, invert);
                    return p.algebra().from_set(pts).map(Value::Set);
                }
            }
            let pts = point_list(p.carrier(), v)?;
            p.algebra().subset(pts).map(Value::Set)
        }
        Space::Fuzzy(f) => {
            let alg = f.algebra();
            let vals = per_point(alg.carrier(), v, "fuzzy atom")?
                .into_iter()
                .map(|g| grade(g, alg.resolution()))
                .collect::<Result<Vec<_>>>()?;
            alg.set(vals).map(Value::Fuzzy)
        }
    }
}

/// Serializes a predicate: a sorted point-name list, or a name → `"n/d"` map.
pub fn value_to_json(space: &Space, v: &Value) -> Json {
    space.describe(v)
}

/// Parses `"n/d"`, a decimal, or an integer into an exact rational.
pub fn parse_rational(v: &Json) -> Result<BigRational> {
    let text = match v {
        Json::String(s) => s.trim().to_string(),
        Json::Number(n) => n.to_string(),
        _ => return Err(Error::invalid(format!("expected a rational, got {v}"))),
    };
    let bad = || Error::invalid(format!("cannot parse `{text}` as a rational"));
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d == BigInt::from(0) {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = text.split_once('.') {
        if frac.contains(['e', 'E']) || (int.is_empty() && frac.is_empty()) {
            return Err(bad());
        }
        let digits = format!("{}{}", if int.is_empty() { "0" } else { int }, frac);
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = BigInt::from(10).pow(frac.len() as u32);
        return Ok(BigRational::new(n, d));
    }
    let n: BigInt = text.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

fn annotate(e: Error, ctx: &str) -> Error {
    match e {
        Error::Validation(m) => Error::Validation(format!("{ctx}: {m}")),
        other => other,
    }
}

fn field<'a>(obj: &'a Map<String, Json>, name: &str) -> Result<&'a Json> {
    obj.get(name)
        .ok_or_else(|| Error::invalid(format!("missing field `{name}`")))
}

fn as_str<'a>(v: &'a Json, what: &str) -> Result<&'a str> {
    v.as_str()
        .ok_or_else(|| Error::invalid(format!("`{what}` must be a string")))
}

fn str_field<'a>(obj: &'a Map<String, Json>, name: &str) -> Result<&'a str> {
    as_str(field(obj, name)?, name)
}

fn usize_field(obj: &Map<String, Json>, name: &str) -> Result<usize> {
    field(obj, name)?
        .as_u64()
        .map(|v| v as usize)
        .ok_or_else(|| Error::invalid(format!("`{name}` must be a non-negative integer")))
}

fn array<'a>(v: &'a Json, what: &str) -> Result<&'a Vec<Json>> {
    v.as_array()
        .ok_or_else(|| Error::invalid(format!("`{what}` must be an array")))
}

fn carrier_field(obj: &Map<String, Json>) -> Result<Carrier> {
    match field(obj, "points")? {
        Json::Number(n) => n
            .as_u64()
            .map(|n| Carrier::indexed(n as usize))
            .ok_or_else(|| Error::invalid("`points` must be a count or a list of names")),
        Json::Array(names) => Carrier::new(
            names
                .iter()
                .map(|n| as_str(n, "point name").map(str::to_string))
                .collect::<Result<Vec<_>>>()?,
        ),
        _ => Err(Error::invalid("`points` must be a count or a list of names")),
    }
}

fn point_ref(carrier: &Carrier, v: &Json) -> Result<usize> {
    let idx = match v {
        Json::Number(n) => n.as_u64().map(|i| i as usize),
        Json::String(s) => carrier.index_of(s),
        _ => None,
    };
    match idx {
        Some(i) if i < carrier.len() => Ok(i),
        _ => Err(Error::invalid(format!("unknown point {v}"))),
    }
}

fn point_list(carrier: &Carrier, v: &Json) -> Result<Vec<usize>> {
    array(v, "point list")?
        .iter()
        .map(|p| point_ref(carrier, p))
        .collect()
}

/// One entry per point, given either positionally or keyed by point.
fn per_point<'a>(carrier: &Carrier, v: &'a Json, what: &str) -> Result<Vec<&'a Json>> {
    match v {
        Json::Array(items) => {
            if items.len() != carrier.len() {
                return Err(Error::invalid(format!(
                    "`{what}` has {} entries for {} points",
                    items.len(),
                    carrier.len()
                )));
            }
            Ok(items.iter().collect())
        }
        Json::Object(map) => {
            let mut out = vec![None; carrier.len()];
            for (k, item) in map {
                let i = point_ref(carrier, &Json::String(k.clone()))?;
                out[i] = Some(item);
            }
            out.into_iter()
                .enumerate()
                .map(|(i, o)| {
                    o.ok_or_else(|| {
                        Error::invalid(format!("`{what}` has no entry for `{}`", carrier.name(i)))
                    })
                })
                .collect()
        }
        _ => Err(Error::invalid(format!("`{what}` must be an array or an object"))),
    }
}

fn grade(v: &Json, k: u32) -> Result<u32> {
    match v {
        Json::String(s) => parse_grade(s, k),
        Json::Number(n) => parse_grade(&n.to_string(), k),
        _ => Err(Error::invalid(format!("expected a value in [0,1], got {v}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::HeytingAlgebra;
    use serde_json::json;

    #[test]
    fn four_point_kripke_frame() {
        let m = build_space(
            &json!({"schema": 1, "type": "kripke", "points": 4, "mode": "pre",
                    "successors": [[3], [2, 3], [2], [3]], "atoms": {"a": [2, 3]}}),
            None,
        )
        .unwrap();
        let a = m.atom("a").unwrap().clone();
        let c = super::super::closure_of(m.space(), &a).unwrap();
        assert_eq!(value_to_json(m.space(), &c), json!(["0", "1", "2", "3"]));
    }

    #[test]
    fn grid_descriptor() {
        let m = build_space(&json!({"type": "grid", "width": 3, "height": 3}), None).unwrap();
        let Space::Points(p) = m.space() else { panic!() };
        assert_eq!(p.len(), 9);
        assert_eq!(p.steps().edge_count(), 24);
    }

    #[test]
    fn markov_row_sum_error() {
        let err = build_space(
            &json!({"type": "markov", "points": 3, "threshold": "1/2",
                    "rows": [["1/2", "3/5", "0"], ["0", "1", "0"], ["0", "0", "1"]]}),
            None,
        )
        .unwrap_err();
        assert!(matches!(&err, Error::Validation(m) if m.contains("row-sum")), "{err}");
    }

    #[test]
    fn explicit_not_inflationary() {
        let err = build_space(
            &json!({"type": "explicit", "points": 2, "additive": true,
                    "closure": {"singletons": [[], [1]]}}),
            None,
        )
        .unwrap_err();
        assert!(err.to_string().contains("not inflationary"), "{err}");
    }

    #[test]
    fn fuzzy_descriptor() {
        let m = build_space(
            &json!({"type": "fuzzy", "points": ["p", "q"], "resolution": 10, "epsilon": "1/5",
                    "atoms": {"f": {"p": "0", "q": 0.5}}}),
            None,
        )
        .unwrap();
        let c = super::super::closure_of(m.space(), m.atom("f").unwrap()).unwrap();
        assert_eq!(value_to_json(m.space(), &c), json!({"p": "1/5", "q": "7/10"}));
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational(&json!("1/2")).unwrap(), BigRational::new(1.into(), 2.into()));
        assert_eq!(parse_rational(&json!(0.25)).unwrap(), BigRational::new(1.into(), 4.into()));
        assert_eq!(parse_rational(&json!("1")).unwrap(), BigRational::from_integer(1.into()));
        assert!(parse_rational(&json!("x")).is_err());
        assert!(parse_rational(&json!("1/0")).is_err());
    }

    #[test]
    fn unknown_points_and_schema() {
        assert!(build_space(&json!({"type": "graph", "points": 2, "edges": [[0, 5]]}), None).is_err());
        assert!(build_space(&json!({"schema": 2, "type": "graph", "points": 1}), None).is_err());
        assert!(build_space(&json!({"type": "torus", "points": 1}), None).is_err());
    }

    #[test]
    fn point_names_as_refs() {
        let m = build_space(
            &json!({"type": "graph", "points": ["a", "b"], "edges": [["a", "b"]],
                    "atoms": {"x": ["b", 0]}}),
            None,
        )
        .unwrap();
        let Space::Points(p) = m.space() else { panic!() };
        assert_eq!(m.atom("x").unwrap(), &Value::Set(p.algebra().top()));
        assert_eq!(p.algebra().size(), 4);
    }
}
