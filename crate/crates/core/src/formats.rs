//! `.coalg` documents: a graded basis, an optional differential and operator images.
//!
//! ```json
//! {
//!   "cells": [{"name": "1", "degree": 0}, {"name": "a", "degree": 1}],
//!   "unit": "1",
//!   "operations": {"m2_0": {"a": [[1, ["a", "1"]]]}}
//! }
//! ```
//!
//! With a `unit`, the loader adds the counit and the terms `1⊗x + x⊗1` to `m2_0`,
//! so only the reduced part is written. Missing `m2_k` and `m3_1` are zero.
//! Coefficients are JSON integers or decimal strings.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::{ChainComplex, ComplexError, GradedOperator, OperatorError, TensorChain};
use crate::coalgebra::{counit, CoalgebraStructure, Level};
use crate::operad::Generator;
use crate::scalar::Scalar;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("malformed document: {0}")]
    Json(String),
    #[error("unknown cell {0}")]
    UnknownCell(String),
    #[error("unknown or unsupported operation {0}")]
    UnknownOperation(String),
    #[error("bad coefficient {0}")]
    Coefficient(String),
    #[error("unit {0} must be the only cell of degree 0")]
    Unit(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("{0}: {1}")]
    Operator(String, OperatorError),
    #[error("relations fail: {}", .0.join(", "))]
    RelationViolation(Vec<String>),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CellSpec {
    name: String,
    degree: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    boundary: Vec<(Value, String)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    cells: Vec<CellSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    unit: Option<String>,
    #[serde(default)]
    operations: BTreeMap<String, BTreeMap<String, Vec<Term>>>,
}

/// `[coefficient, [letters]]`.
type Term = (Value, Vec<String>);

fn coefficient<T: Scalar>(v: &Value) -> Result<T, FormatError> {
    let bad = || FormatError::Coefficient(v.to_string());
    match v {
        Value::Number(n) => n.as_i64().map(T::from_int).ok_or_else(bad),
        Value::String(s) => T::from_str_radix(s.trim(), 10).map_err(|_| bad()),
        _ => Err(bad()),
    }
}

fn coefficient_value<T: Scalar>(c: &T) -> Value {
    match c.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(c.to_string()),
    }
}

/// Parses and verifies a `.coalg` document.
pub fn parse_coalg<T: Scalar>(text: &str) -> Result<CoalgebraStructure<T>, FormatError> {
    let doc: Document = serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))?;
    let labels: Vec<String> = doc.cells.iter().map(|c| c.name.clone()).collect();
    let degrees: Vec<usize> = doc.cells.iter().map(|c| c.degree).collect();
    let index: BTreeMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    let lookup = |name: &str| index.get(name).copied().ok_or_else(|| FormatError::UnknownCell(name.to_string()));

    let mut boundary = Vec::with_capacity(doc.cells.len());
    for c in &doc.cells {
        let mut terms = Vec::new();
        for (v, name) in &c.boundary {
            terms.push((lookup(name)?, coefficient::<T>(v)?));
        }
        boundary.push(terms);
    }
    let flat = boundary.iter().all(Vec::is_empty);
    let cx = Arc::new(ChainComplex::new(labels.clone(), degrees.clone(), boundary)?);
    let level = if flat { Level::Homology } else { Level::Chain };
    let mut s = CoalgebraStructure::new(cx.clone(), level, false);

    let unit = match &doc.unit {
        Some(u) => {
            let id = lookup(u)?;
            if cx.rank(0) != 1 || cx.degree(id) != 0 {
                return Err(FormatError::Unit(u.clone()));
            }
            Some(id)
        }
        None => None,
    };

    let mut given: BTreeMap<Generator, GradedOperator<T>> = BTreeMap::new();
    for (name, table) in &doc.operations {
        let g = Generator::parse(name).map_err(|_| FormatError::UnknownOperation(name.clone()))?;
        if !matches!(g, Generator::M2(_) | Generator::M3(1)) {
            return Err(FormatError::UnknownOperation(name.clone()));
        }
        let mut images = vec![TensorChain::zero(); cx.len()];
        for (cell, terms) in table {
            let c = lookup(cell)?;
            for (v, word) in terms {
                let w = word.iter().map(|x| lookup(x)).collect::<Result<Vec<_>, _>>()?;
                images[c].add_term(w, coefficient::<T>(v)?);
            }
        }
        let op = GradedOperator::new(cx.clone(), cx.clone(), g.arity(), g.degree(), images)
            .map_err(|e| FormatError::Operator(name.clone(), e))?;
        given.insert(g, op);
    }

    let top = given.keys().filter_map(|g| if let Generator::M2(k) = g { Some(*k) } else { None }).max().unwrap_or(0).max(2);
    for k in 0..=top {
        let g = Generator::M2(k);
        let mut op = given.remove(&g).unwrap_or_else(|| GradedOperator::zero(cx.clone(), cx.clone(), 2, k as i64));
        if k == 0 {
            if let Some(u) = unit {
                op = op.add(&primitive_part(&cx, u)).map_err(|e| FormatError::Operator(g.name(), e))?;
            }
        }
        s.set(g, op).map_err(|e| FormatError::Operator(g.name(), e))?;
    }
    let m3 = given.remove(&Generator::M3(1)).unwrap_or_else(|| GradedOperator::zero(cx.clone(), cx.clone(), 3, 1));
    s.set(Generator::M3(1), m3).map_err(|e| FormatError::Operator("m3_1".into(), e))?;
    if unit.is_some() {
        s.set(Generator::P, counit(cx.clone())).map_err(|e| FormatError::Operator("p".into(), e))?;
    }

    let bad = s.verify();
    if bad.is_empty() {
        Ok(s)
    } else {
        Err(FormatError::RelationViolation(bad))
    }
}

/// `x ↦ 1⊗x + x⊗1` (and `1 ↦ 1⊗1`).
fn primitive_part<T: Scalar>(cx: &Arc<ChainComplex<T>>, u: usize) -> GradedOperator<T> {
    GradedOperator::from_fn(cx.clone(), cx.clone(), 2, 0, |c| {
        let mut ch = TensorChain::word(vec![u, c]);
        if c != u {
            ch.add_term(vec![c, u], T::one());
        }
        ch
    })
    .expect("primitive terms have the right shape")
}

/// Writes `s` as a `.coalg` document; keys are sorted, so output is deterministic.
pub fn write_coalg<T: Scalar>(s: &CoalgebraStructure<T>) -> Value {
    let cx = s.complex();
    let unit = match (cx.cells(0), s.get(Generator::P)) {
        ([u], Some(p)) if p.equals(&counit(cx.clone())) => Some(*u),
        _ => None,
    };
    let cells = (0..cx.len())
        .map(|c| CellSpec {
            name: cx.label(c).to_string(),
            degree: cx.degree(c),
            boundary: cx.boundary(c).iter().map(|(w, v)| (coefficient_value(v), cx.label(w[0]).to_string())).collect(),
        })
        .collect();
    let mut operations = BTreeMap::new();
    for (g, op) in s.operators() {
        if *g == Generator::P {
            continue;
        }
        let op = match (g, unit) {
            (Generator::M2(0), Some(u)) => op.sub(&primitive_part(cx, u)).expect("same shape"),
            _ => op.clone(),
        };
        let mut table = BTreeMap::new();
        for c in 0..cx.len() {
            let img = op.image(c);
            if !img.is_zero() {
                let terms = img
                    .iter()
                    .map(|(w, v)| (coefficient_value(v), w.iter().map(|&x| cx.label(x).to_string()).collect()))
                    .collect();
                table.insert(cx.label(c).to_string(), terms);
            }
        }
        operations.insert(g.name(), table);
    }
    let doc = Document { cells, unit: unit.map(|u| cx.label(u).to_string()), operations };
    serde_json::to_value(doc).expect("documents serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalgebra::chain_structure;
    use crate::fixtures;
    use crate::simplicial::parse_sset;

    #[test]
    fn bundled_documents_load() {
        for (name, text) in fixtures::COALG {
            let s = parse_coalg::<i64>(text).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(s.complex().ranks(), vec![1, 3, 2], "{name}");
            assert_eq!(s.level(), Level::Homology);
        }
    }

    #[test]
    fn round_trip() {
        let chain = chain_structure::<i64>(&parse_sset(fixtures::sset("torus").unwrap()).unwrap(), 2).unwrap();
        for s in [parse_coalg::<i64>(fixtures::coalg("exact").unwrap()).unwrap(), chain] {
            let text = write_coalg(&s).to_string();
            let back = parse_coalg::<i64>(&text).unwrap();
            assert_eq!(write_coalg(&back).to_string(), text);
            for (g, op) in s.operators() {
                assert!(back.get(*g).unwrap().equals(op), "{g}");
            }
        }
    }

    #[test]
    fn rejects_defects() {
        let err = parse_coalg::<i64>(include_str!("../fixtures/noncocommutative.coalg")).unwrap_err();
        assert_eq!(err, FormatError::RelationViolation(vec!["d(m2_1)".into()]));
        let unknown = r#"{"cells": [{"name": "a", "degree": 1}], "operations": {"m2_0": {"a": [[1, ["a", "z"]]]}}}"#;
        assert_eq!(parse_coalg::<i64>(unknown).unwrap_err(), FormatError::UnknownCell("z".into()));
        let coefficient = r#"{"cells": [{"name": "a", "degree": 0}], "operations": {"m2_0": {"a": [["x", ["a", "a"]]]}}}"#;
        assert!(matches!(parse_coalg::<i64>(coefficient), Err(FormatError::Coefficient(_))));
        let op = r#"{"cells": [], "operations": {"f2_1": {}}}"#;
        assert_eq!(parse_coalg::<i64>(op).unwrap_err(), FormatError::UnknownOperation("f2_1".into()));
        assert!(matches!(parse_coalg::<i64>("{"), Err(FormatError::Json(_))));
    }

    #[test]
    fn big_coefficients_are_strings() {
        let text = r#"{"cells": [{"name": "a", "degree": 1}, {"name": "s", "degree": 2, "boundary": [["123456789012345678901234567890", "a"]]}]}"#;
        let s = parse_coalg::<crate::Int>(text).unwrap();
        assert_eq!(s.level(), Level::Chain);
        assert!(write_coalg(&s).to_string().contains("\"123456789012345678901234567890\""));
    }
}
