//! JSON documents for complexes, markings, Ω blocks and maps.
//!
//! Integers are written as decimal strings; plain JSON integers are accepted
//! on input too. Face matrices are listed row by row, shape dimσ × dimτ.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::complex::{Cell, CellId, ComplexMap, ConicalComplex};
use crate::cone::Cone;
use crate::exactlin::{IntMatrix, IntVector, RatVector};
use crate::marking::Marking;
use crate::valuation::PLFunction;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Schema(String),
}

fn schema<T>(msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError::Schema(msg.into()))
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(untagged)]
enum RawInt {
    Str(String),
    Int(i64),
}

impl RawInt {
    fn value(&self) -> Result<BigInt, ParseError> {
        match self {
            RawInt::Int(x) => Ok(BigInt::from(*x)),
            RawInt::Str(s) => s
                .trim()
                .parse()
                .map_err(|_| ParseError::Schema(format!("not an integer: {s:?}"))),
        }
    }
}

fn raw_vec(v: &IntVector) -> Vec<RawInt> {
    v.entries()
        .iter()
        .map(|x| RawInt::Str(x.to_string()))
        .collect()
}

fn parse_vec(raw: &[RawInt]) -> Result<IntVector, ParseError> {
    raw.iter()
        .map(RawInt::value)
        .collect::<Result<Vec<_>, _>>()
        .map(IntVector::new)
}

fn parse_matrix(
    rows: &[Vec<RawInt>],
    shape: (usize, usize),
    what: &str,
) -> Result<IntMatrix, ParseError> {
    if rows.len() != shape.0 || rows.iter().any(|r| r.len() != shape.1) {
        return schema(format!("{what}: expected a {}x{} matrix", shape.0, shape.1));
    }
    let data = rows
        .iter()
        .flatten()
        .map(RawInt::value)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(IntMatrix::new(shape.0, shape.1, data))
}

fn raw_matrix(m: &IntMatrix) -> Vec<Vec<RawInt>> {
    m.row_vectors().iter().map(raw_vec).collect()
}

#[derive(Serialize, Deserialize, Clone, Debug)]
struct RawCone {
    id: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dim: Option<usize>,
    ambient_dim: usize,
    lattice_basis: Vec<Vec<RawInt>>,
    generators: Vec<Vec<RawInt>>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
struct RawFace {
    sub: usize,
    #[serde(rename = "super")]
    sup: usize,
    matrix: Vec<Vec<RawInt>>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
struct RawComplex {
    cones: Vec<RawCone>,
    #[serde(default)]
    faces: Vec<RawFace>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
struct RawRank {
    ray: usize,
    rank: u64,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
struct RawOmega {
    cells: Vec<usize>,
    #[serde(default)]
    order: Vec<RawRank>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
struct RawAssignment {
    src: usize,
    dst: usize,
    matrix: Vec<Vec<RawInt>>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
struct RawMap {
    source: RawComplex,
    target: RawComplex,
    assignments: Vec<RawAssignment>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
struct RawDocument {
    schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    complex: Option<RawComplex>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    marking: Option<Vec<RawRank>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    omega: Option<RawOmega>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    map: Option<RawMap>,
}

/// The Ω block: cells of Ω and the order on its rays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaBlock {
    pub cells: BTreeSet<CellId>,
    pub order: Marking,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapBlock {
    pub source: ConicalComplex,
    pub target: ConicalComplex,
    pub map: ComplexMap,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ComplexDocument {
    pub complex: Option<ConicalComplex>,
    pub marking: Option<Marking>,
    pub omega: Option<OmegaBlock>,
    pub map: Option<MapBlock>,
}

impl ComplexDocument {
    pub fn from_complex(k: ConicalComplex) -> ComplexDocument {
        ComplexDocument {
            complex: Some(k),
            ..ComplexDocument::default()
        }
    }
}

fn parse_complex(raw: &RawComplex) -> Result<ConicalComplex, ParseError> {
    let mut cones = BTreeMap::new();
    for c in &raw.cones {
        let basis: Vec<IntVector> = c
            .lattice_basis
            .iter()
            .map(|b| parse_vec(b))
            .collect::<Result<_, _>>()?;
        if basis.iter().any(|b| b.dim() != c.ambient_dim) {
            return schema(format!(
                "cone {}: basis vectors must have length {}",
                c.id, c.ambient_dim
            ));
        }
        let gens: Vec<IntVector> = c
            .generators
            .iter()
            .map(|g| parse_vec(g))
            .collect::<Result<_, _>>()?;
        if gens.iter().any(|g| g.dim() != basis.len()) {
            return schema(format!(
                "cone {}: generators must have length {}",
                c.id,
                basis.len()
            ));
        }
        if c.dim.is_some_and(|d| d != basis.len()) {
            return schema(format!(
                "cone {}: dim does not match the lattice basis",
                c.id
            ));
        }
        let cone = if basis.is_empty() {
            Cone::zero(c.ambient_dim)
        } else {
            Cone::new(IntMatrix::from_columns(&basis, c.ambient_dim), gens)
                .map_err(|e| ParseError::Schema(format!("cone {}: {e}", c.id)))?
        };
        if cones
            .insert(
                CellId(c.id),
                Cell {
                    cone,
                    faces: BTreeMap::new(),
                },
            )
            .is_some()
        {
            return schema(format!("duplicate cone id {}", c.id));
        }
    }
    for f in &raw.faces {
        let (sub, sup) = (CellId(f.sub), CellId(f.sup));
        let (Some(a), Some(b)) = (cones.get(&sub), cones.get(&sup)) else {
            return schema(format!("face {} -> {} names an unknown cone", f.sub, f.sup));
        };
        let m = parse_matrix(
            &f.matrix,
            (b.cone.dim(), a.cone.dim()),
            &format!("face {} -> {}", f.sub, f.sup),
        )?;
        cones.get_mut(&sup).expect("checked").faces.insert(sub, m);
    }
    Ok(ConicalComplex::from_cells(cones))
}

fn complex_raw(k: &ConicalComplex) -> RawComplex {
    let cones = k
        .cells()
        .iter()
        .map(|(id, c)| RawCone {
            id: id.0,
            dim: Some(c.cone.dim()),
            ambient_dim: c.cone.ambient_dim(),
            lattice_basis: c
                .cone
                .lattice_basis()
                .columns()
                .iter()
                .map(raw_vec)
                .collect(),
            generators: c.cone.vertices().iter().map(raw_vec).collect(),
        })
        .collect();
    let faces = k
        .cells()
        .iter()
        .flat_map(|(sup, c)| {
            c.faces.iter().map(move |(sub, m)| RawFace {
                sub: sub.0,
                sup: sup.0,
                matrix: raw_matrix(m),
            })
        })
        .collect();
    RawComplex { cones, faces }
}

fn parse_ranks(raw: &[RawRank]) -> Marking {
    Marking::from_ranks(raw.iter().map(|r| (CellId(r.ray), r.rank)).collect())
}

fn ranks_raw(m: &Marking) -> Vec<RawRank> {
    m.ranks()
        .iter()
        .map(|(r, q)| RawRank { ray: r.0, rank: *q })
        .collect()
}

pub fn parse_document(text: &str) -> Result<ComplexDocument, ParseError> {
    let raw: RawDocument = serde_json::from_str(text)?;
    if raw.schema_version != SCHEMA_VERSION {
        return schema(format!("unsupported schema_version {}", raw.schema_version));
    }
    if raw.complex.is_none() && raw.map.is_none() {
        return schema("document has neither a complex nor a map");
    }
    let complex = raw.complex.as_ref().map(parse_complex).transpose()?;
    let map = match &raw.map {
        None => None,
        Some(m) => {
            let source = parse_complex(&m.source)?;
            let target = parse_complex(&m.target)?;
            let mut assignments = BTreeMap::new();
            for a in &m.assignments {
                let (src, dst) = (CellId(a.src), CellId(a.dst));
                let (Ok(s), Ok(t)) = (source.cell(src), target.cell(dst)) else {
                    return schema(format!(
                        "map entry {} -> {} names an unknown cone",
                        a.src, a.dst
                    ));
                };
                let shape = (t.cone.dim(), s.cone.dim());
                let matrix = parse_matrix(
                    &a.matrix,
                    shape,
                    &format!("map entry {} -> {}", a.src, a.dst),
                )?;
                assignments.insert(src, (dst, matrix));
            }
            Some(MapBlock {
                source,
                target,
                map: ComplexMap { assignments },
            })
        }
    };
    let omega = raw.omega.as_ref().map(|o| OmegaBlock {
        cells: o.cells.iter().map(|&i| CellId(i)).collect(),
        order: parse_ranks(&o.order),
    });
    Ok(ComplexDocument {
        complex,
        marking: raw.marking.as_deref().map(parse_ranks),
        omega,
        map,
    })
}

pub fn parse_complex_str(text: &str) -> Result<ConicalComplex, ParseError> {
    parse_document(text)?
        .complex
        .ok_or_else(|| ParseError::Schema("document has no complex".into()))
}

pub fn document_to_json(doc: &ComplexDocument) -> String {
    let raw = RawDocument {
        schema_version: SCHEMA_VERSION,
        complex: doc.complex.as_ref().map(complex_raw),
        marking: doc.marking.as_ref().map(ranks_raw),
        omega: doc.omega.as_ref().map(|o| RawOmega {
            cells: o.cells.iter().map(|c| c.0).collect(),
            order: ranks_raw(&o.order),
        }),
        map: doc.map.as_ref().map(|m| RawMap {
            source: complex_raw(&m.source),
            target: complex_raw(&m.target),
            assignments: m
                .map
                .assignments
                .iter()
                .map(|(s, (t, mat))| RawAssignment {
                    src: s.0,
                    dst: t.0,
                    matrix: raw_matrix(mat),
                })
                .collect(),
        }),
    };
    serde_json::to_string_pretty(&raw).expect("plain data serializes")
}

pub fn complex_to_json(k: &ConicalComplex) -> String {
    document_to_json(&ComplexDocument::from_complex(k.clone()))
}

fn rat_strings(v: &RatVector) -> Value {
    Value::Array(
        v.entries()
            .iter()
            .map(|x| Value::String(x.to_string()))
            .collect(),
    )
}

/// `{"cone_id": [functional coords]}`.
pub fn pl_function_json(f: &PLFunction) -> Value {
    Value::Object(
        f.functionals
            .iter()
            .map(|(id, m)| (id.0.to_string(), rat_strings(m)))
            .collect(),
    )
}

pub fn int_vector_json(v: &IntVector) -> Value {
    json!(v
        .entries()
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>())
}
