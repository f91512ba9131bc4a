//! JSON ingestion and export. Every input document is a self-describing
//! envelope `{"kind": ..., "body": ...}`; kind mismatch is a first-class
//! error. All exports order their keys so identical inputs produce
//! byte-identical outputs.

use crate::inverse::InverseSemigroup;
use crate::kgraph::{compile_generators, KGraphGenerators, KGraphPresentation, Morphism};
use crate::rep::IsgRep;
use crate::semilattice::Semilattice;
use crate::sgpd::Semigroupoid;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("expected kind {expected}, found {found}")]
    KindMismatch { expected: String, found: String },
    #[error("unknown label: {0}")]
    UnknownLabel(String),
    #[error("validation failed: {0}")]
    Validation(String),
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Envelope {
    pub kind: String,
    pub body: serde_json::Value,
}

#[derive(Debug, Clone)]
pub enum Structure {
    Semilattice(Semilattice),
    Isg(InverseSemigroup),
    Sgpd(Semigroupoid),
    KGraph(KGraphPresentation),
}

impl Structure {
    pub fn kind(&self) -> &'static str {
        match self {
            Structure::Semilattice(_) => "semilattice",
            Structure::Isg(_) => "isg",
            Structure::Sgpd(_) => "semigroupoid",
            Structure::KGraph(_) => "kgraph",
        }
    }
}

#[derive(Debug, Deserialize)]
struct SemilatticeBody {
    elements: Vec<String>,
    zero: String,
    #[serde(default)]
    meet: Option<Vec<Vec<String>>>,
    #[serde(default)]
    leq: Option<Vec<(String, String)>>,
}

#[derive(Debug, Deserialize)]
struct IsgBody {
    #[serde(default)]
    elements: Option<Vec<String>>,
    #[serde(default)]
    mul: Option<Vec<Vec<String>>>,
    #[serde(default)]
    zero: Option<String>,
    #[serde(default)]
    carrier: Option<usize>,
    #[serde(default)]
    partial_bijections: Option<BTreeMap<String, BTreeMap<String, String>>>,
}

#[derive(Debug, Deserialize)]
struct SgpdBody {
    elements: Vec<String>,
    compose: BTreeMap<String, String>,
}

#[derive(Debug, Deserialize)]
struct KGraphEdge {
    name: String,
    color: usize,
    src: String,
    rng: String,
}

#[derive(Debug, Deserialize)]
struct KGraphMorphism {
    name: String,
    src: String,
    rng: String,
    degree: Vec<u32>,
}

#[derive(Debug, Deserialize)]
struct KGraphBody {
    k: usize,
    vertices: Vec<String>,
    #[serde(default)]
    edges: Option<Vec<KGraphEdge>>,
    #[serde(default)]
    squares: Option<Vec<(String, String)>>,
    #[serde(default)]
    morphisms: Option<Vec<KGraphMorphism>>,
    #[serde(default)]
    compose: Option<BTreeMap<String, String>>,
    depth: Vec<u32>,
}

fn index_of(labels: &[String], l: &str) -> Result<usize, IoError> {
    labels
        .iter()
        .position(|x| x == l)
        .ok_or_else(|| IoError::UnknownLabel(l.to_string()))
}

pub fn parse_envelope(text: &str) -> Result<Envelope, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Parse(e.to_string()))
}

/// Parse and validate a structure document.
pub fn parse_structure(text: &str) -> Result<Structure, IoError> {
    let env = parse_envelope(text)?;
    let val = |e: serde_json::Error| IoError::Parse(e.to_string());
    match env.kind.as_str() {
        "semilattice" => {
            let body: SemilatticeBody = serde_json::from_value(env.body).map_err(val)?;
            let zero = index_of(&body.elements, &body.zero)?;
            let lat = match (&body.meet, &body.leq) {
                (Some(meet), _) => {
                    let table: Vec<Vec<usize>> = meet
                        .iter()
                        .map(|row| {
                            row.iter().map(|l| index_of(&body.elements, l)).collect()
                        })
                        .collect::<Result<_, _>>()?;
                    Semilattice::from_meet_table(body.elements.clone(), table, zero)
                }
                (None, Some(leq)) => {
                    let pairs: Vec<(usize, usize)> = leq
                        .iter()
                        .map(|(a, b)| {
                            Ok((index_of(&body.elements, a)?, index_of(&body.elements, b)?))
                        })
                        .collect::<Result<_, IoError>>()?;
                    Semilattice::from_leq_pairs(body.elements.clone(), &pairs, zero)
                }
                (None, None) => {
                    return Err(IoError::Parse("need either meet or leq".into()))
                }
            }
            .map_err(|e| IoError::Validation(e.to_string()))?;
            Ok(Structure::Semilattice(lat))
        }
        "isg" => {
            let body: IsgBody = serde_json::from_value(env.body).map_err(val)?;
            if let (Some(carrier), Some(gens)) = (body.carrier, &body.partial_bijections) {
                let mut generators = Vec::new();
                for map in gens.values() {
                    let mut m = vec![None; carrier];
                    for (from, to) in map {
                        let f: usize =
                            from.parse().map_err(|_| IoError::UnknownLabel(from.clone()))?;
                        let t: usize =
                            to.parse().map_err(|_| IoError::UnknownLabel(to.clone()))?;
                        if f >= carrier || t >= carrier {
                            return Err(IoError::UnknownLabel(format!("{f}>{t}")));
                        }
                        m[f] = Some(t);
                    }
                    generators.push(
                        crate::rep::PartialBijection::new(carrier, m)
                            .map_err(|e| IoError::Validation(e.to_string()))?,
                    );
                }
                let closed = crate::corpus::close_partial_bijections(&generators);
                let labels: Vec<String> = closed.iter().map(|p| p.render()).collect();
                let mul: Vec<Vec<usize>> = closed
                    .iter()
                    .map(|p| {
                        closed
                            .iter()
                            .map(|q| {
                                closed.iter().position(|r| *r == p.compose(q)).unwrap()
                            })
                            .collect()
                    })
                    .collect();
                let zero = closed.iter().position(|p| p.is_empty_map());
                let isg = InverseSemigroup::validate(labels, mul, zero)
                    .map_err(|e| IoError::Validation(e.to_string()))?;
                return Ok(Structure::Isg(isg));
            }
            let (Some(elements), Some(mul)) = (&body.elements, &body.mul) else {
                return Err(IoError::Parse(
                    "need elements+mul or carrier+partial_bijections".into(),
                ));
            };
            let table: Vec<Vec<usize>> = mul
                .iter()
                .map(|row| row.iter().map(|l| index_of(elements, l)).collect())
                .collect::<Result<_, _>>()?;
            let zero = body.zero.as_deref().map(|z| index_of(elements, z)).transpose()?;
            let isg = InverseSemigroup::validate(elements.clone(), table, zero)
                .map_err(|e| IoError::Validation(e.to_string()))?;
            Ok(Structure::Isg(isg))
        }
        "semigroupoid" => {
            let body: SgpdBody = serde_json::from_value(env.body).map_err(val)?;
            let mut table = BTreeMap::new();
            for (pair, h) in &body.compose {
                let parts: Vec<&str> = pair.split(',').map(str::trim).collect();
                if parts.len() != 2 {
                    return Err(IoError::Parse(format!("bad compose key {pair}")));
                }
                table.insert(
                    (index_of(&body.elements, parts[0])?, index_of(&body.elements, parts[1])?),
                    index_of(&body.elements, h)?,
                );
            }
            let s = Semigroupoid::validate(body.elements.clone(), &table)
                .map_err(|e| IoError::Validation(e.to_string()))?;
            Ok(Structure::Sgpd(s))
        }
        "kgraph" => {
            let body: KGraphBody = serde_json::from_value(env.body).map_err(val)?;
            if let Some(edges) = &body.edges {
                let gens = KGraphGenerators {
                    k: body.k,
                    vertices: body.vertices.clone(),
                    edges: edges
                        .iter()
                        .map(|e| (e.name.clone(), e.color, e.src.clone(), e.rng.clone()))
                        .collect(),
                    squares: body.squares.clone().unwrap_or_default(),
                    depth: body.depth.clone(),
                };
                let kg = compile_generators(&gens)
                    .map_err(|e| IoError::Validation(e.to_string()))?;
                return Ok(Structure::KGraph(kg));
            }
            let (Some(morphisms), Some(compose)) = (&body.morphisms, &body.compose) else {
                return Err(IoError::Parse("need edges or morphisms+compose".into()));
            };
            let labels: Vec<String> = morphisms.iter().map(|m| m.name.clone()).collect();
            let ms: Vec<Morphism> = morphisms
                .iter()
                .map(|m| {
                    Ok(Morphism {
                        label: m.name.clone(),
                        src: index_of(&body.vertices, &m.src)?,
                        rng: index_of(&body.vertices, &m.rng)?,
                        degree: m.degree.clone(),
                    })
                })
                .collect::<Result<_, IoError>>()?;
            let mut table = BTreeMap::new();
            for (pair, h) in compose {
                let parts: Vec<&str> = pair.split(',').map(str::trim).collect();
                if parts.len() != 2 {
                    return Err(IoError::Parse(format!("bad compose key {pair}")));
                }
                table.insert(
                    (index_of(&labels, parts[0])?, index_of(&labels, parts[1])?),
                    index_of(&labels, h)?,
                );
            }
            let kg = KGraphPresentation::validate(
                body.k,
                body.vertices.clone(),
                ms,
                table,
                body.depth.clone(),
            )
            .map_err(|e| IoError::Validation(e.to_string()))?;
            Ok(Structure::KGraph(kg))
        }
        other => Err(IoError::KindMismatch {
            expected: "semilattice|isg|semigroupoid|kgraph".into(),
            found: other.to_string(),
        }),
    }
}

#[derive(Debug, Serialize)]
pub struct SemilatticeExport {
    pub kind: &'static str,
    pub body: SemilatticeExportBody,
}

#[derive(Debug, Serialize)]
pub struct SemilatticeExportBody {
    pub elements: Vec<String>,
    pub zero: String,
    pub meet: Vec<Vec<String>>,
}

pub fn export_semilattice(lat: &Semilattice) -> SemilatticeExport {
    let n = lat.len();
    SemilatticeExport {
        kind: "semilattice",
        body: SemilatticeExportBody {
            elements: lat.labels().to_vec(),
            zero: lat.label(lat.zero()).to_string(),
            meet: (0..n)
                .map(|i| (0..n).map(|j| lat.label(lat.meet(i, j)).to_string()).collect())
                .collect(),
        },
    }
}

#[derive(Debug, Serialize)]
pub struct IsgExport {
    pub kind: &'static str,
    pub body: IsgExportBody,
}

#[derive(Debug, Serialize)]
pub struct IsgExportBody {
    pub elements: Vec<String>,
    pub mul: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zero: Option<String>,
}

pub fn export_isg(isg: &InverseSemigroup) -> IsgExport {
    let n = isg.len();
    IsgExport {
        kind: "isg",
        body: IsgExportBody {
            elements: isg.labels().to_vec(),
            mul: (0..n)
                .map(|i| (0..n).map(|j| isg.label(isg.mul(i, j)).to_string()).collect())
                .collect(),
            zero: isg.zero().map(|z| isg.label(z).to_string()),
        },
    }
}

/// Representation export: carrier labels plus one partial map per
/// semigroup element.
#[derive(Debug, Serialize)]
pub struct RepExport {
    pub carrier: Vec<String>,
    pub maps: BTreeMap<String, BTreeMap<String, String>>,
}

pub fn export_rep(
    isg: &InverseSemigroup,
    carrier_labels: &[String],
    rep: &IsgRep,
) -> RepExport {
    let mut maps = BTreeMap::new();
    for s in 0..isg.len() {
        let mut m = BTreeMap::new();
        for x in 0..rep.carrier() {
            if let Some(y) = rep.map(s).apply(x) {
                m.insert(carrier_labels[x].clone(), carrier_labels[y].clone());
            }
        }
        maps.insert(isg.label(s).to_string(), m);
    }
    RepExport { carrier: carrier_labels.to_vec(), maps }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn semilattice_round_trip() {
        let text = r#"{"kind":"semilattice","body":{"elements":["0","h","t"],"zero":"0","leq":[["0","h"],["h","t"]]}}"#;
        let Structure::Semilattice(lat) = parse_structure(text).unwrap() else {
            panic!()
        };
        assert_eq!(lat.len(), 3);
        let exported = serde_json::to_string(&export_semilattice(&lat)).unwrap();
        let Structure::Semilattice(lat2) = parse_structure(&exported).unwrap() else {
            panic!()
        };
        assert_eq!(lat, lat2);
    }

    #[test]
    fn kind_mismatch_is_detected() {
        let text = r#"{"kind":"nonsense","body":{}}"#;
        assert!(matches!(parse_structure(text), Err(IoError::KindMismatch { .. })));
    }

    #[test]
    fn generator_isg_form() {
        let text = r#"{"kind":"isg","body":{"carrier":2,"partial_bijections":{"s":{"0":"1"}}}}"#;
        let Structure::Isg(isg) = parse_structure(text).unwrap() else { panic!() };
        // s, s*, ss*, s*s, 0 at least.
        assert!(isg.len() >= 5);
        assert!(isg.zero().is_some());
    }

    #[test]
    fn semigroupoid_form() {
        let text = r#"{"kind":"semigroupoid","body":{"elements":["a","b","c"],"compose":{"a,b":"c"}}}"#;
        let Structure::Sgpd(s) = parse_structure(text).unwrap() else { panic!() };
        assert_eq!(s.compose(0, 1), Some(2));
    }

    #[test]
    fn kgraph_generator_form() {
        let text = r#"{"kind":"kgraph","body":{"k":2,"vertices":["v"],"edges":[{"name":"b","color":1,"src":"v","rng":"v"},{"name":"r","color":2,"src":"v","rng":"v"}],"squares":[["b,r","r,b"]],"depth":[2,2]}}"#;
        let Structure::KGraph(kg) = parse_structure(text).unwrap() else { panic!() };
        assert_eq!(kg.morphisms.len(), 9);
    }

    #[test]
    fn malformed_json_is_a_parse_error() {
        assert!(matches!(parse_structure("{"), Err(IoError::Parse(_))));
    }
}
