//! JSON document-graph file store.
//!
//! A graph file is a single UTF-8 JSON document:
//!
//! ```json
//! {
//!   "vertices": [ {"@rid": "#25:241", "@class": "ComfortIndex", "name": "...", ...}, ... ],
//!   "edges":    [ {"from": "#1:0", "to": "#25:241", "label": "hasRule"}, ... ],
//!   "schemas":  [ {"className": "...", "parent": "...", "fields": [...]}, ... ]
//! }
//! ```
//!
//! Every vertex carries `@rid` and `@class` plus its class fields as flat
//! keys. The `schemas` section is optional; declarations provided by the
//! caller (the rule class registry) take precedence over it on conflict.
//! Vertices that fail their class schema are excluded from the loaded graph
//! and reported as diagnostics, mirroring the engine's discard semantics.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Duration;

use serde_json::{Map, Value};
use url::Url;

use crate::model::{
    Area, Edge, Parameter, ResourceGraph, ResourceId, Rid, RuleRecord, Sensor, Vertex,
};
use crate::schema::{ClassSchema, FieldViolation, SchemaSet};

pub const RID_KEY: &str = "@rid";
pub const CLASS_KEY: &str = "@class";

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("malformed graph document: {0}")]
    Shape(String),
}

impl From<serde_json::Error> for StoreError {
    fn from(e: serde_json::Error) -> Self {
        StoreError::Parse { line: e.line(), column: e.column(), message: e.to_string() }
    }
}

/// A vertex that could not be loaded, with the reasons.
#[derive(Clone, Debug)]
pub struct VertexDiagnostic {
    /// Position of the vertex in the file's `vertices` array.
    pub index: usize,
    pub rid: Option<Rid>,
    pub class_name: Option<String>,
    pub problems: Vec<FieldViolation>,
}

impl std::fmt::Display for VertexDiagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "vertex #{} ({} {}): ",
            self.index,
            self.class_name.as_deref().unwrap_or("?"),
            self.rid.as_ref().map(|r| r.as_str()).unwrap_or("?"),
        )?;
        for (i, p) in self.problems.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Result of loading a graph file.
#[derive(Debug)]
pub struct LoadedGraph {
    pub graph: ResourceGraph,
    /// Vertices excluded because of schema violations.
    pub excluded: Vec<VertexDiagnostic>,
    /// Edges dropped because one endpoint was excluded.
    pub dropped_edges: usize,
    /// Effective schema set: caller-provided declarations merged with the
    /// file's `schemas` section (caller wins on conflicts).
    pub schemas: SchemaSet,
    /// The file's own `schemas` section, preserved for re-saving.
    pub file_schemas: Vec<ClassSchema>,
}

pub fn load_graph(path: &Path, schemas: &SchemaSet) -> Result<LoadedGraph, StoreError> {
    let text = fs::read_to_string(path)?;
    parse_graph(&text, schemas)
}

pub fn parse_graph(text: &str, schemas: &SchemaSet) -> Result<LoadedGraph, StoreError> {
    let doc: Value = serde_json::from_str(text)?;
    let obj = doc
        .as_object()
        .ok_or_else(|| StoreError::Shape("top level must be an object".into()))?;

    let file_schemas: Vec<ClassSchema> = match obj.get("schemas") {
        Some(v) => serde_json::from_value(v.clone())?,
        None => Vec::new(),
    };
    let mut effective = schemas.clone();
    for s in &file_schemas {
        if !effective.contains(&s.class_name) {
            effective.declare_or_replace(s.clone());
        }
    }

    let raw_vertices = obj
        .get("vertices")
        .and_then(Value::as_array)
        .ok_or_else(|| StoreError::Shape("missing \"vertices\" array".into()))?;
    let raw_edges = obj
        .get("edges")
        .and_then(Value::as_array)
        .ok_or_else(|| StoreError::Shape("missing \"edges\" array".into()))?;

    let mut vertices = Vec::with_capacity(raw_vertices.len());
    let mut excluded = Vec::new();
    for (index, raw) in raw_vertices.iter().enumerate() {
        let Some(vobj) = raw.as_object() else {
            excluded.push(VertexDiagnostic {
                index,
                rid: None,
                class_name: None,
                problems: vec![FieldViolation {
                    field: "".into(),
                    message: "vertex is not a JSON object".into(),
                }],
            });
            continue;
        };
        match vertex_from_stored(vobj, &effective) {
            Ok(v) => vertices.push(v),
            Err(problems) => excluded.push(VertexDiagnostic {
                index,
                rid: vobj.get(RID_KEY).and_then(Value::as_str).map(Rid::from),
                class_name: vobj.get(CLASS_KEY).and_then(Value::as_str).map(str::to_owned),
                problems,
            }),
        }
    }

    let kept: std::collections::HashSet<&Rid> = vertices.iter().map(Vertex::rid).collect();
    let mut edges = Vec::with_capacity(raw_edges.len());
    let mut dropped_edges = 0usize;
    for raw in raw_edges {
        let edge: Edge = serde_json::from_value(raw.clone())?;
        if kept.contains(&edge.from) && kept.contains(&edge.to) {
            edges.push(edge);
        } else {
            dropped_edges += 1;
        }
    }

    Ok(LoadedGraph {
        graph: ResourceGraph::new(vertices, edges),
        excluded,
        dropped_edges,
        schemas: effective,
        file_schemas,
    })
}

/// Serializes the graph to its JSON document form.
pub fn graph_to_document(graph: &ResourceGraph, file_schemas: &[ClassSchema]) -> Value {
    let vertices: Vec<Value> = graph
        .vertices()
        .iter()
        .map(|v| Value::Object(vertex_to_stored(v)))
        .collect();
    let edges: Vec<Value> = graph
        .edges()
        .iter()
        .map(|e| serde_json::to_value(e).expect("edge serializes"))
        .collect();
    let mut doc = Map::new();
    doc.insert("vertices".into(), Value::Array(vertices));
    doc.insert("edges".into(), Value::Array(edges));
    if !file_schemas.is_empty() {
        doc.insert(
            "schemas".into(),
            serde_json::to_value(file_schemas).expect("schemas serialize"),
        );
    }
    Value::Object(doc)
}

/// Saves the graph atomically: write to a temp file in the same directory,
/// then rename over the target.
pub fn save_graph(
    graph: &ResourceGraph,
    file_schemas: &[ClassSchema],
    path: &Path,
) -> Result<(), StoreError> {
    let doc = graph_to_document(graph, file_schemas);
    let text = serde_json::to_string_pretty(&doc).expect("graph document serializes");
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.write_all(b"\n")?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| StoreError::Io(e.error))?;
    Ok(())
}

/// Converts a typed vertex back to its stored document shape.
pub fn vertex_to_stored(vertex: &Vertex) -> Map<String, Value> {
    let mut obj = Map::new();
    obj.insert(RID_KEY.into(), Value::String(vertex.rid().as_str().to_owned()));
    obj.insert(CLASS_KEY.into(), Value::String(vertex.class_name().to_owned()));
    match vertex {
        Vertex::Area(a) => {
            obj.insert("name".into(), Value::String(a.name.clone()));
            if let Some(uri) = &a.id.uri {
                obj.insert("uri".into(), Value::String(uri.to_string()));
            }
            for (k, v) in &a.attributes {
                obj.insert(k.clone(), v.clone());
            }
        }
        Vertex::Sensor(s) => {
            obj.insert("name".into(), Value::String(s.name.clone()));
            obj.insert("sampling_period".into(), seconds_value(s.sampling_period));
            if let Some(uri) = &s.id.uri {
                obj.insert("uri".into(), Value::String(uri.to_string()));
            }
        }
        Vertex::Parameter(p) => {
            obj.insert("name".into(), Value::String(p.name.clone()));
            obj.insert("unit".into(), Value::String(p.unit.clone()));
            if let Some(uri) = &p.id.uri {
                obj.insert("uri".into(), Value::String(uri.to_string()));
            }
        }
        Vertex::Rule(r) => {
            for (k, v) in &r.fields {
                obj.insert(k.clone(), v.clone());
            }
        }
    }
    obj
}

/// Builds a typed vertex from a stored document, checking it against its
/// class schema. Returns every violation found rather than the first.
pub fn vertex_from_stored(
    obj: &Map<String, Value>,
    schemas: &SchemaSet,
) -> Result<Vertex, Vec<FieldViolation>> {
    let mut problems = Vec::new();
    let rid = match obj.get(RID_KEY).and_then(Value::as_str) {
        Some(s) if !s.is_empty() => Some(Rid::new(s)),
        _ => {
            problems.push(FieldViolation {
                field: RID_KEY.into(),
                message: "mandatory meta-field is missing".into(),
            });
            None
        }
    };
    let class = match obj.get(CLASS_KEY).and_then(Value::as_str) {
        Some(s) if !s.is_empty() => Some(s.to_owned()),
        _ => {
            problems.push(FieldViolation {
                field: CLASS_KEY.into(),
                message: "mandatory meta-field is missing".into(),
            });
            None
        }
    };
    let (Some(rid), Some(class)) = (rid, class) else {
        return Err(problems);
    };

    let mut fields: Map<String, Value> = obj.clone();
    fields.remove(RID_KEY);
    fields.remove(CLASS_KEY);

    problems.extend(schemas.check(&class, &fields));
    let is_resource = matches!(class.as_str(), "Area" | "Sensor" | "Parameter");
    if !is_resource && !problems.iter().any(|p| p.field == CLASS_KEY) && !schemas.is_rule_class(&class)
    {
        problems.push(FieldViolation {
            field: CLASS_KEY.into(),
            message: format!("class {class} does not descend from the rule base class"),
        });
    }
    if !problems.is_empty() {
        return Err(problems);
    }

    let uri = fields
        .get("uri")
        .and_then(Value::as_str)
        .and_then(|s| Url::parse(s).ok());
    let id = ResourceId { rid, uri };

    let vertex = match class.as_str() {
        "Area" => {
            let name = fields.get("name").and_then(Value::as_str).unwrap_or("").to_owned();
            let mut attributes = fields;
            attributes.remove("name");
            attributes.remove("uri");
            Vertex::Area(Area { id, name, attributes })
        }
        "Sensor" => Vertex::Sensor(Sensor {
            id,
            name: fields.get("name").and_then(Value::as_str).unwrap_or("").to_owned(),
            sampling_period: Duration::from_secs_f64(
                fields.get("sampling_period").and_then(Value::as_f64).unwrap_or(0.0),
            ),
        }),
        "Parameter" => Vertex::Parameter(Parameter {
            id,
            name: fields.get("name").and_then(Value::as_str).unwrap_or("").to_owned(),
            unit: fields.get("unit").and_then(Value::as_str).unwrap_or("").to_owned(),
        }),
        _ => Vertex::Rule(RuleRecord { id, class_name: class, fields }),
    };
    Ok(vertex)
}

fn seconds_value(d: Duration) -> Value {
    let secs = d.as_secs_f64();
    if secs.fract() == 0.0 && secs <= u64::MAX as f64 {
        Value::from(secs as u64)
    } else {
        Value::from(secs)
    }
}
