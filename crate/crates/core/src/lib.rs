//! A resource-oriented rule engine for energy-saving recommendations.
//!
//! The engine loads a persisted graph of areas, sensors, parameters and
//! rules, periodically fetches measurements from parameter URIs, evaluates
//! an algebra of atomic, template and composite rules, and emits
//! recommendation notifications plus an append-only event log.
//!
//! Module map:
//! - [`model`] — the resource graph (vertices, labeled edges, validation)
//! - [`schema`] — class schemas with inheritance and field checking
//! - [`store`] — JSON document-graph file store
//! - [`expr`] — the template-rule expression language
//! - [`rules`] — rule lifecycle, composites, templates, class registry
//! - [`measure`] — per-tick measurement fetching and the shared cache
//! - [`mock`] — scriptable mock sensor server for hermetic runs
//! - [`events`] — event records and the NDJSON event log
//! - [`notify`] — notification types and the WebSocket hub
//! - [`engine`] — the periodic evaluation loop
//! - [`api`] — REST management surface
//! - [`bench`] — random graph generator and load/instantiation timing

pub mod api;
pub mod bench;
pub mod engine;
pub mod events;
pub mod expr;
pub mod measure;
pub mod mock;
pub mod model;
pub mod notify;
pub mod rules;
pub mod samples;
pub mod schema;
pub mod store;

pub use engine::{Engine, EngineConfig, LoadStats, TickReport};
pub use events::{EventKind, EventRecord};
pub use measure::{Gateway, Measurement, MeasurementCache};
pub use model::{Edge, EdgeLabel, ResourceGraph, Rid, Vertex, Violation};
pub use notify::Notification;
pub use rules::{Registry, RuleNode};
pub use schema::{ClassSchema, FieldType, SchemaSet};
