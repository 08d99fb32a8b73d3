//! Text documents for fans, divisors, cycles, complements and morphisms.
//!
//! Every document is one JSON object with a top-level `kind`. Keys are
//! written in sorted order, rationals as reduced `"p/q"` strings, lattice
//! vectors as integer arrays and cones as sorted arrays of ray indices, so
//! `serialize(parse(x)) == x` for any document this module wrote.

use std::sync::Arc;

use num::{ToPrimitive, Zero};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::complements::{ComplementError, ComplementKind, Complements};
use crate::cycle::Cycle;
use crate::divisor::{DivisorError, QCartierDivisor};
use crate::fan::{build_fan, ConeId, Fan, FanError};
use crate::linalg::{format_rational, parse_rational, IntMatrix, IntVec, Integer, QMatrix, QVec, Rational};
use crate::morphism::{MorphismError, ToricMorphism};
use crate::poly::{Polynomial, RationalFunction};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Divisor(#[from] DivisorError),
    #[error(transparent)]
    Complement(#[from] ComplementError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
}

impl FormatError {
    /// Whether the document was well formed but describes an object violating
    /// a mathematical condition (as opposed to a malformed document).
    pub fn is_mathematical(&self) -> bool {
        matches!(self, Self::Divisor(_) | Self::Complement(_) | Self::Morphism(_))
    }
}

/// Pretty-printed document text with a trailing newline.
pub fn to_text(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("values always serialize");
    s.push('\n');
    s
}

fn object(entries: Vec<(&str, Value)>) -> Value {
    let mut entries = entries;
    entries.sort_by(|a, b| a.0.cmp(b.0));
    Value::Object(entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect::<Map<_, _>>())
}

pub fn rational_value(x: &Rational) -> Value {
    Value::String(format_rational(x))
}

pub fn qvec_value(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational_value).collect())
}

pub fn integer_value(x: &Integer) -> Value {
    Value::from(x.to_i64().expect("lattice coordinates fit in 64 bits"))
}

pub fn ivec_value(v: &[Integer]) -> Value {
    Value::Array(v.iter().map(integer_value).collect())
}

pub fn cone_value(rays: &[usize]) -> Value {
    Value::Array(rays.iter().map(|&i| Value::from(i)).collect())
}

/// A value together with its location for diagnostics.
#[derive(Clone, Copy)]
struct Node<'a> {
    value: &'a Value,
    path: &'a str,
}

struct Owned {
    value: Value,
    path: String,
}

impl Owned {
    fn node(&self) -> Node<'_> {
        Node { value: &self.value, path: &self.path }
    }
}

impl<'a> Node<'a> {
    fn fail<T>(&self, message: impl Into<String>) -> Result<T, FormatError> {
        Err(FormatError::Schema { path: self.path.to_string(), message: message.into() })
    }

    /// Checks that this is an object with exactly the given keys.
    fn fields(&self, required: &[&str]) -> Result<&'a Map<String, Value>, FormatError> {
        let Some(map) = self.value.as_object() else {
            return self.fail("expected an object");
        };
        if let Some(k) = required.iter().find(|k| !map.contains_key(**k)) {
            return self.fail(format!("missing field `{k}`"));
        }
        if let Some(k) = map.keys().find(|k| !required.contains(&k.as_str())) {
            return self.fail(format!("unknown field `{k}`"));
        }
        Ok(map)
    }

    fn get(&self, key: &str) -> (String, &'a Value) {
        let path = if self.path.is_empty() { key.to_string() } else { format!("{}.{key}", self.path) };
        (path, &self.value[key])
    }

    fn array(&self) -> Result<Vec<(String, &'a Value)>, FormatError> {
        let Some(items) = self.value.as_array() else {
            return self.fail("expected an array");
        };
        Ok(items.iter().enumerate().map(|(i, v)| (format!("{}[{i}]", self.path), v)).collect())
    }

    fn string(&self) -> Result<&'a str, FormatError> {
        match self.value.as_str() {
            Some(s) => Ok(s),
            None => self.fail("expected a string"),
        }
    }

    fn index(&self) -> Result<usize, FormatError> {
        match self.value.as_u64().and_then(|x| usize::try_from(x).ok()) {
            Some(x) => Ok(x),
            None => self.fail("expected a non-negative integer"),
        }
    }

    fn integer(&self) -> Result<Integer, FormatError> {
        match self.value.as_i64() {
            Some(x) => Ok(Integer::from(x)),
            None => self.fail("expected an integer"),
        }
    }

    fn rational(&self) -> Result<Rational, FormatError> {
        let s = self.string()?;
        match parse_rational(s) {
            Ok(q) => Ok(q),
            Err(_) => self.fail(format!("malformed rational `{s}`")),
        }
    }

    fn kind(&self, expected: &str) -> Result<(), FormatError> {
        let (path, v) = self.get("kind");
        let found = Node { value: v, path: &path }.string()?;
        if found != expected {
            return Node { value: v, path: &path }.fail(format!("expected kind `{expected}`, found `{found}`"));
        }
        Ok(())
    }
}

fn each<'a, T>(
    node: Node<'a>,
    mut f: impl FnMut(Node<'_>) -> Result<T, FormatError>,
) -> Result<Vec<T>, FormatError> {
    node.array()?.iter().map(|(p, v)| f(Node { value: v, path: p })).collect()
}

fn with_field<'a, T>(
    node: Node<'a>,
    key: &str,
    f: impl FnOnce(Node<'_>) -> Result<T, FormatError>,
) -> Result<T, FormatError> {
    let (path, v) = node.get(key);
    f(Node { value: v, path: &path })
}

fn ivec(node: Node<'_>) -> Result<IntVec, FormatError> {
    each(node, |n| n.integer())
}

fn qvec(node: Node<'_>) -> Result<QVec, FormatError> {
    each(node, |n| n.rational())
}

fn qmatrix(node: Node<'_>) -> Result<QMatrix, FormatError> {
    each(node, qvec)
}

/// Ray indices, each checked against `num_rays`.
fn ray_set(node: Node<'_>, num_rays: usize) -> Result<Vec<usize>, FormatError> {
    each(node, |n| {
        let i = n.index()?;
        if i >= num_rays {
            return n.fail(format!("ray index {i} out of range (the fan has {num_rays} rays)"));
        }
        Ok(i)
    })
}

fn cone_of(node: Node<'_>, fan: &Fan) -> Result<ConeId, FormatError> {
    let mut rays = ray_set(node, fan.num_rays())?;
    rays.sort_unstable();
    match fan.cone_by_rays(&rays) {
        Some(c) => Ok(c),
        None => node.fail(format!("{rays:?} is not a cone of the fan")),
    }
}

fn parse_value(text: &str) -> Result<Owned, FormatError> {
    serde_json::from_str(text)
        .map(|value| Owned { value, path: String::new() })
        .map_err(|e| FormatError::Syntax { line: e.line(), column: e.column(), message: e.to_string() })
}

fn root_path(path: &str) -> &str {
    if path.is_empty() {
        "<document>"
    } else {
        path
    }
}

pub fn fan_to_json(fan: &Fan) -> Value {
    object(vec![
        ("kind", Value::from("fan")),
        ("rank", Value::from(fan.rank())),
        ("rays", Value::Array(fan.rays().iter().map(|r| ivec_value(r)).collect())),
        ("cones", Value::Array(fan.maximal_cones().iter().map(|&c| cone_value(fan.cone_rays(c))).collect())),
    ])
}

fn fan_from_node(node: Node<'_>) -> Result<Fan, FormatError> {
    let root = Node { value: node.value, path: root_path(node.path) };
    root.fields(&["kind", "rank", "rays", "cones"])?;
    let node = Node { value: node.value, path: node.path };
    node.kind("fan")?;
    let rank = with_field(node, "rank", |n| n.index())?;
    let rays = with_field(node, "rays", |n| {
        each(n, |r| {
            let v = ivec(r)?;
            if v.len() != rank {
                return r.fail(format!("expected {rank} coordinates, found {}", v.len()));
            }
            Ok(v)
        })
    })?;
    let cones = with_field(node, "cones", |n| each(n, |c| ray_set(c, rays.len())))?;
    Ok(build_fan(rank, rays, cones)?)
}

pub fn parse_fan(text: &str) -> Result<Fan, FormatError> {
    fan_from_node(parse_value(text)?.node())
}

/// Local equations on the maximal cones in cone order.
pub fn divisor_to_json(d: &QCartierDivisor) -> Value {
    let fan = d.fan();
    let equations = fan
        .maximal_cones()
        .iter()
        .zip(d.maximal_equations())
        .map(|(&c, m)| object(vec![("cone", cone_value(fan.cone_rays(c))), ("m", qvec_value(m))]))
        .collect();
    object(vec![("kind", Value::from("divisor")), ("equations", Value::Array(equations))])
}

/// Accepts `equations` (one `{cone, m}` per maximal cone) or, on simplicial
/// fans, `ray_coefficients` as a shorthand for `Σ c_i D_i`.
pub fn parse_divisor(text: &str, fan: &Arc<Fan>) -> Result<QCartierDivisor, FormatError> {
    let owned = parse_value(text)?;
    let node = owned.node();
    let root = Node { value: node.value, path: "<document>" };
    let Some(map) = node.value.as_object() else {
        return root.fail("expected an object");
    };
    if map.contains_key("ray_coefficients") {
        root.fields(&["kind", "ray_coefficients"])?;
        node.kind("divisor")?;
        let c = with_field(node, "ray_coefficients", qvec)?;
        return Ok(QCartierDivisor::from_ray_coefficients(fan.clone(), &c)?);
    }
    root.fields(&["kind", "equations"])?;
    node.kind("divisor")?;
    let equations = with_field(node, "equations", |n| {
        each(n, |e| {
            e.fields(&["cone", "m"])?;
            let c = with_field(e, "cone", |c| cone_of(c, fan))?;
            let m = with_field(e, "m", |m| {
                let v = qvec(m)?;
                if v.len() != fan.rank() {
                    return m.fail(format!("expected {} coordinates, found {}", fan.rank(), v.len()));
                }
                Ok(v)
            })?;
            Ok((c, m))
        })
    })?;
    Ok(QCartierDivisor::new(fan.clone(), equations)?)
}

pub fn cycle_to_json(z: &Cycle) -> Value {
    let fan = z.fan();
    let mut terms: Vec<(ConeId, &Rational)> = z.terms().filter(|(_, q)| !q.is_zero()).collect();
    terms.sort_by_key(|t| t.0);
    let terms = terms
        .into_iter()
        .map(|(c, q)| object(vec![("cone", cone_value(fan.cone_rays(c))), ("coeff", rational_value(q))]))
        .collect();
    object(vec![("kind", Value::from("cycle")), ("terms", Value::Array(terms))])
}

pub fn parse_cycle(text: &str, fan: &Arc<Fan>) -> Result<Cycle, FormatError> {
    let owned = parse_value(text)?;
    let node = owned.node();
    Node { value: node.value, path: "<document>" }.fields(&["kind", "terms"])?;
    node.kind("cycle")?;
    let terms = with_field(node, "terms", |n| {
        each(n, |t| {
            t.fields(&["cone", "coeff"])?;
            Ok((with_field(t, "cone", |c| cone_of(c, fan))?, with_field(t, "coeff", |q| q.rational())?))
        })
    })?;
    Ok(Cycle::from_terms(fan.clone(), terms))
}

pub fn complements_to_json(psi: &Complements) -> Value {
    let fan = psi.fan();
    let (ty, key, body) = match psi.kind() {
        ComplementKind::InnerProduct { gram } => {
            ("inner_product", "gram", Value::Array(gram.iter().map(|r| qvec_value(r)).collect()))
        }
        ComplementKind::Flag { basis } => ("flag", "basis", Value::Array(basis.iter().map(|r| qvec_value(r)).collect())),
        ComplementKind::Explicit { subspaces } => (
            "explicit",
            "subspaces",
            Value::Array(
                fan.cone_ids()
                    .map(|c| {
                        object(vec![
                            ("cone", cone_value(fan.cone_rays(c))),
                            ("basis", Value::Array(subspaces[c.0].iter().map(|v| qvec_value(v)).collect())),
                        ])
                    })
                    .collect(),
            ),
        ),
    };
    object(vec![("kind", Value::from("complements")), ("type", Value::from(ty)), (key, body)])
}

pub fn parse_complements(text: &str, fan: &Arc<Fan>) -> Result<Complements, FormatError> {
    let owned = parse_value(text)?;
    let node = owned.node();
    let root = Node { value: node.value, path: "<document>" };
    if !node.value.is_object() {
        return root.fail("expected an object");
    }
    let ty = with_field(node, "type", |t| t.string().map(str::to_string))?;
    match ty.as_str() {
        "inner_product" => {
            root.fields(&["kind", "type", "gram"])?;
            node.kind("complements")?;
            Ok(Complements::inner_product(fan.clone(), with_field(node, "gram", qmatrix)?)?)
        }
        "flag" => {
            root.fields(&["kind", "type", "basis"])?;
            node.kind("complements")?;
            Ok(Complements::flag(fan.clone(), with_field(node, "basis", qmatrix)?)?)
        }
        "explicit" => {
            root.fields(&["kind", "type", "subspaces"])?;
            node.kind("complements")?;
            let subspaces = with_field(node, "subspaces", |n| {
                each(n, |s| {
                    s.fields(&["cone", "basis"])?;
                    Ok((with_field(s, "cone", |c| cone_of(c, fan))?, with_field(s, "basis", qmatrix)?))
                })
            })?;
            Ok(Complements::explicit(fan.clone(), subspaces)?)
        }
        other => with_field(node, "type", |t| {
            t.fail(format!("unknown complement type `{other}` (expected inner_product, flag or explicit)"))
        }),
    }
}

pub fn morphism_to_json(f: &ToricMorphism) -> Value {
    object(vec![
        ("kind", Value::from("morphism")),
        ("matrix", Value::Array(f.matrix().iter().map(|r| ivec_value(r)).collect())),
        ("source", fan_to_json(f.source())),
        ("target", fan_to_json(f.target())),
    ])
}

/// The matrix has one row per coordinate of the target lattice.
pub fn parse_morphism(text: &str) -> Result<ToricMorphism, FormatError> {
    let owned = parse_value(text)?;
    let node = owned.node();
    Node { value: node.value, path: "<document>" }.fields(&["kind", "matrix", "source", "target"])?;
    node.kind("morphism")?;
    let matrix: IntMatrix = with_field(node, "matrix", |n| each(n, ivec))?;
    let source = with_field(node, "source", fan_from_node)?;
    let target = with_field(node, "target", fan_from_node)?;
    Ok(ToricMorphism::new(matrix, Arc::new(source), Arc::new(target))?)
}

pub fn rational_doc(q: &Rational) -> Value {
    object(vec![("kind", Value::from("rational")), ("value", rational_value(q))])
}

pub fn polynomial_doc(p: &Polynomial, prefix: &str) -> Value {
    object(vec![("kind", Value::from("polynomial")), ("value", Value::from(p.to_text(prefix)))])
}

pub fn rational_function_doc(f: &RationalFunction, prefix: &str) -> Value {
    object(vec![
        ("kind", Value::from("rational_function")),
        ("numerator", Value::from(f.numerator.to_text(prefix))),
        ("denominator", Value::from(f.denominator.to_text(prefix))),
    ])
}

/// A named check with its verdict and free-form supporting data.
pub fn report_doc(name: &str, passed: bool, details: Vec<(&str, Value)>) -> Value {
    object(vec![
        ("kind", Value::from("report")),
        ("name", Value::from(name)),
        ("passed", Value::from(passed)),
        ("details", object(details)),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::{identity_q, rat};
    use crate::morphism::star_subdivision;

    fn round_trip_text(text: &str, reparse: impl Fn(&str) -> String) {
        assert_eq!(reparse(text), text);
    }

    #[test]
    fn fan_documents_round_trip() {
        for (_, fan) in fixtures::catalogue() {
            let text = to_text(&fan_to_json(&fan));
            round_trip_text(&text, |t| to_text(&fan_to_json(&parse_fan(t).unwrap())));
            assert_eq!(parse_fan(&text).unwrap(), fan);
        }
    }

    #[test]
    fn object_documents_round_trip() {
        let fan = Arc::new(fixtures::hirzebruch(2));
        let d = QCartierDivisor::from_ray_coefficients(fan.clone(), &[rat(1, 2), rat(0, 1), rat(-3, 1), rat(2, 1)])
            .unwrap();
        let text = to_text(&divisor_to_json(&d));
        round_trip_text(&text, |t| to_text(&divisor_to_json(&parse_divisor(t, &fan).unwrap())));
        assert_eq!(parse_divisor(&text, &fan).unwrap(), d);

        let z = Cycle::from_terms(fan.clone(), vec![(fan.zero_cone(), rat(1, 3)), (fan.maximal_cones()[1], rat(-2, 1))]);
        let text = to_text(&cycle_to_json(&z));
        round_trip_text(&text, |t| to_text(&cycle_to_json(&parse_cycle(t, &fan).unwrap())));

        let gram = vec![vec![rat(2, 1), rat(1, 2)], vec![rat(1, 2), rat(1, 1)]];
        let variants = [
            Complements::inner_product(fan.clone(), gram.clone()).unwrap(),
            Complements::flag(fan.clone(), vec![vec![rat(3, 1), rat(1, 1)], vec![rat(0, 1), rat(1, 1)]]).unwrap(),
            Complements::inner_product(fan.clone(), gram).unwrap().to_explicit(),
        ];
        for psi in &variants {
            let text = to_text(&complements_to_json(psi));
            round_trip_text(&text, |t| to_text(&complements_to_json(&parse_complements(t, &fan).unwrap())));
        }

        let plane = Arc::new(fixtures::projective_space(2));
        let (_, f) = star_subdivision(&plane, &vec![1.into(), 1.into()]).unwrap();
        let text = to_text(&morphism_to_json(&f));
        round_trip_text(&text, |t| to_text(&morphism_to_json(&parse_morphism(t).unwrap())));
    }

    #[test]
    fn keys_are_sorted_and_rationals_reduced() {
        let fan = Arc::new(fixtures::projective_space(1));
        let z = Cycle::from_terms(fan.clone(), vec![(fan.zero_cone(), rat(2, 4))]);
        let text = to_text(&cycle_to_json(&z));
        assert!(text.find("\"kind\"").unwrap() < text.find("\"terms\"").unwrap());
        assert!(text.contains("\"1/2\""));
        let psi = Complements::inner_product(fan, identity_q(1)).unwrap();
        assert!(to_text(&complements_to_json(&psi)).contains("\"type\": \"inner_product\""));
    }

    #[test]
    fn malformed_inputs_are_rejected_with_locations() {
        let fan = Arc::new(fixtures::projective_space(1));
        let bad = r#"{"kind": "cycle", "terms": [{"cone": [0], "coeff": "1/0"}]}"#;
        match parse_cycle(bad, &fan) {
            Err(FormatError::Schema { path, message }) => {
                assert_eq!(path, "terms[0].coeff");
                assert!(message.contains("1/0"));
            }
            other => panic!("unexpected {other:?}"),
        }
        let bad = r#"{"kind": "fan", "rank": 1, "rays": [[1], [-1]], "cones": [[0], [5]]}"#;
        match parse_fan(bad) {
            Err(FormatError::Schema { path, .. }) => assert_eq!(path, "cones[1][0]"),
            other => panic!("unexpected {other:?}"),
        }
        let bad = r#"{"kind": "fan", "rank": 1, "rays": [[1]], "cones": [[0]], "extra": 1}"#;
        assert!(matches!(parse_fan(bad), Err(FormatError::Schema { .. })));
        assert!(matches!(parse_fan("{\"kind\": \n"), Err(FormatError::Syntax { line: 2, .. })));
        let wrong_kind = to_text(&cycle_to_json(&Cycle::fundamental(fan.clone())));
        assert!(matches!(parse_fan(&wrong_kind), Err(FormatError::Schema { .. })));
    }

    #[test]
    fn disagreeing_equations_are_a_mathematical_error() {
        let fan = Arc::new(fixtures::projective_space(1));
        let text = r#"{"kind": "divisor", "equations": [{"cone": [0], "m": ["1"]}, {"cone": [1], "m": ["1"]}]}"#;
        assert!(parse_divisor(text, &fan).is_ok());
        let plane = Arc::new(fixtures::projective_space(2));
        let text = r#"{"kind": "divisor", "equations": [
            {"cone": [0, 1], "m": ["0", "0"]},
            {"cone": [0, 2], "m": ["1", "0"]},
            {"cone": [1, 2], "m": ["0", "0"]}]}"#;
        let err = parse_divisor(text, &plane).unwrap_err();
        assert!(err.is_mathematical());
        assert!(matches!(err, FormatError::Divisor(DivisorError::AgreementViolation { .. })));
    }
}
