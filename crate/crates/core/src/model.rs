//! Resource graph model: areas, sensors, parameters and rule records
//! connected by labeled edges.
//!
//! Graphs are immutable snapshots. Mutation helpers return a new graph,
//! so a snapshot can be shared freely across threads.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use url::Url;

/// Opaque record identifier of a vertex, e.g. `#25:241`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Rid(pub String);

impl Rid {
    pub fn new(s: impl Into<String>) -> Self {
        Rid(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Rid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Rid {
    fn from(s: &str) -> Self {
        Rid(s.to_owned())
    }
}

/// Identity of a resource: record id plus optional external URI.
#[derive(Clone, Debug, PartialEq)]
pub struct ResourceId {
    pub rid: Rid,
    pub uri: Option<Url>,
}

impl ResourceId {
    pub fn new(rid: impl Into<String>) -> Self {
        ResourceId { rid: Rid::new(rid), uri: None }
    }

    pub fn with_uri(rid: impl Into<String>, uri: Url) -> Self {
        ResourceId { rid: Rid::new(rid), uri: Some(uri) }
    }
}

/// A physical or symbolic location. Areas nest through `contains` edges
/// and may carry arbitrary descriptive attributes (surface, number of
/// students, yearly consumption, ...).
#[derive(Clone, Debug, PartialEq)]
pub struct Area {
    pub id: ResourceId,
    pub name: String,
    pub attributes: Map<String, Value>,
}

/// A physical sensor gathering one or more parameters for an area.
#[derive(Clone, Debug, PartialEq)]
pub struct Sensor {
    pub id: ResourceId,
    pub name: String,
    pub sampling_period: Duration,
}

/// A measurable quantity exposed at a fetchable URI.
#[derive(Clone, Debug, PartialEq)]
pub struct Parameter {
    pub id: ResourceId,
    pub name: String,
    pub unit: String,
}

/// A stored rule instance: class name plus the flat field map holding both
/// the class's mandatory fields and free instance-level extension fields.
#[derive(Clone, Debug, PartialEq)]
pub struct RuleRecord {
    pub id: ResourceId,
    pub class_name: String,
    pub fields: Map<String, Value>,
}

impl RuleRecord {
    pub fn field_str(&self, name: &str) -> Option<&str> {
        self.fields.get(name).and_then(Value::as_str)
    }

    pub fn field_number(&self, name: &str) -> Option<f64> {
        self.fields.get(name).and_then(Value::as_f64)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Vertex {
    Area(Area),
    Sensor(Sensor),
    Parameter(Parameter),
    Rule(RuleRecord),
}

impl Vertex {
    pub fn rid(&self) -> &Rid {
        &self.id().rid
    }

    pub fn id(&self) -> &ResourceId {
        match self {
            Vertex::Area(a) => &a.id,
            Vertex::Sensor(s) => &s.id,
            Vertex::Parameter(p) => &p.id,
            Vertex::Rule(r) => &r.id,
        }
    }

    pub fn class_name(&self) -> &str {
        match self {
            Vertex::Area(_) => "Area",
            Vertex::Sensor(_) => "Sensor",
            Vertex::Parameter(_) => "Parameter",
            Vertex::Rule(r) => &r.class_name,
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Vertex::Area(a) => &a.name,
            Vertex::Sensor(s) => &s.name,
            Vertex::Parameter(p) => &p.name,
            Vertex::Rule(r) => r.field_str("name").unwrap_or(""),
        }
    }
}

/// Relation kinds between vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum EdgeLabel {
    /// Area → Area containment; forms the single rooted tree of a site.
    Contains,
    /// Sensor → Area: the sensor monitors that area.
    Covers,
    /// Sensor → Parameter: the sensor produces that parameter.
    Gathers,
    /// Area → rule: the rule is attached to (and scheduled for) that area.
    HasRule,
    /// Composite rule → child rule.
    Child,
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EdgeLabel::Contains => "contains",
            EdgeLabel::Covers => "covers",
            EdgeLabel::Gathers => "gathers",
            EdgeLabel::HasRule => "hasRule",
            EdgeLabel::Child => "child",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub from: Rid,
    pub to: Rid,
    pub label: EdgeLabel,
}

impl Edge {
    pub fn new(from: impl Into<String>, to: impl Into<String>, label: EdgeLabel) -> Self {
        Edge { from: Rid::new(from), to: Rid::new(to), label }
    }
}

/// A structural invariant broken by a graph, with the offending record ids.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub message: String,
    pub rids: Vec<Rid>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    DuplicateRid,
    DanglingEdge,
    EdgeEndpointType,
    MissingParameterUri,
    NonPositiveSamplingPeriod,
    EmptyClassName,
    ContainmentCycle,
    AreaMultipleParents,
    NotSingleRoot,
    UnreachableArea,
    RuleMultipleParents,
    RuleUnattached,
    ChildCycle,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [", self.message)?;
        for (i, rid) in self.rids.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{rid}")?;
        }
        f.write_str("]")
    }
}

#[derive(Debug, thiserror::Error)]
pub enum LookupError {
    #[error("unknown record id {0}")]
    UnknownRid(Rid),
    #[error("{0} has no owning area")]
    NoOwningArea(Rid),
}

/// The persisted document graph: a list of vertices and labeled edges,
/// with adjacency indexes built once at construction.
#[derive(Clone, Debug)]
pub struct ResourceGraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    by_rid: HashMap<Rid, usize>,
    out: HashMap<Rid, Vec<usize>>,
    inc: HashMap<Rid, Vec<usize>>,
}

impl PartialEq for ResourceGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Default for ResourceGraph {
    fn default() -> Self {
        Self::new(Vec::new(), Vec::new())
    }
}

impl ResourceGraph {
    pub fn new(vertices: Vec<Vertex>, edges: Vec<Edge>) -> Self {
        let mut by_rid = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            by_rid.entry(v.rid().clone()).or_insert(i);
        }
        let mut out: HashMap<Rid, Vec<usize>> = HashMap::new();
        let mut inc: HashMap<Rid, Vec<usize>> = HashMap::new();
        for (i, e) in edges.iter().enumerate() {
            out.entry(e.from.clone()).or_default().push(i);
            inc.entry(e.to.clone()).or_default().push(i);
        }
        ResourceGraph { vertices, edges, by_rid, out, inc }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex(&self, rid: &Rid) -> Option<&Vertex> {
        self.by_rid.get(rid).map(|&i| &self.vertices[i])
    }

    pub fn contains_rid(&self, rid: &Rid) -> bool {
        self.by_rid.contains_key(rid)
    }

    pub fn areas(&self) -> impl Iterator<Item = &Area> {
        self.vertices.iter().filter_map(|v| match v {
            Vertex::Area(a) => Some(a),
            _ => None,
        })
    }

    pub fn sensors(&self) -> impl Iterator<Item = &Sensor> {
        self.vertices.iter().filter_map(|v| match v {
            Vertex::Sensor(s) => Some(s),
            _ => None,
        })
    }

    pub fn parameters(&self) -> impl Iterator<Item = &Parameter> {
        self.vertices.iter().filter_map(|v| match v {
            Vertex::Parameter(p) => Some(p),
            _ => None,
        })
    }

    pub fn rules(&self) -> impl Iterator<Item = &RuleRecord> {
        self.vertices.iter().filter_map(|v| match v {
            Vertex::Rule(r) => Some(r),
            _ => None,
        })
    }

    /// Outgoing edges of `rid` with the given label, in insertion order.
    pub fn edges_from(&self, rid: &Rid, label: EdgeLabel) -> impl Iterator<Item = &Edge> {
        self.out
            .get(rid)
            .into_iter()
            .flatten()
            .map(|&i| &self.edges[i])
            .filter(move |e| e.label == label)
    }

    /// Incoming edges of `rid` with the given label, in insertion order.
    pub fn edges_to(&self, rid: &Rid, label: EdgeLabel) -> impl Iterator<Item = &Edge> {
        self.inc
            .get(rid)
            .into_iter()
            .flatten()
            .map(|&i| &self.edges[i])
            .filter(move |e| e.label == label)
    }

    /// The root area: the unique area without an incoming `contains` edge.
    pub fn root_area(&self) -> Option<&Area> {
        let mut root = None;
        for a in self.areas() {
            if self.edges_to(&a.id.rid, EdgeLabel::Contains).next().is_none() {
                if root.is_some() {
                    return None;
                }
                root = Some(a);
            }
        }
        root
    }

    /// New snapshot with a vertex (and edges) added.
    pub fn with_added(&self, vertex: Vertex, edges: Vec<Edge>) -> ResourceGraph {
        let mut vertices = self.vertices.clone();
        vertices.push(vertex);
        let mut all_edges = self.edges.clone();
        all_edges.extend(edges);
        ResourceGraph::new(vertices, all_edges)
    }

    /// New snapshot with the given vertices removed, along with every edge
    /// touching them.
    pub fn with_removed(&self, rids: &HashSet<Rid>) -> ResourceGraph {
        let vertices = self
            .vertices
            .iter()
            .filter(|v| !rids.contains(v.rid()))
            .cloned()
            .collect();
        let edges = self
            .edges
            .iter()
            .filter(|e| !rids.contains(&e.from) && !rids.contains(&e.to))
            .cloned()
            .collect();
        ResourceGraph::new(vertices, edges)
    }

    /// New snapshot with one vertex replaced in place.
    pub fn with_replaced(&self, vertex: Vertex) -> ResourceGraph {
        let vertices = self
            .vertices
            .iter()
            .map(|v| if v.rid() == vertex.rid() { vertex.clone() } else { v.clone() })
            .collect();
        ResourceGraph::new(vertices, self.edges.clone())
    }

    /// Rids reachable from `rid` through outgoing `contains`/`hasRule`/`child`
    /// edges — the vertices that depend on it for attachment.
    pub fn dependents(&self, rid: &Rid) -> HashSet<Rid> {
        let mut seen = HashSet::new();
        let mut queue = VecDeque::from([rid.clone()]);
        while let Some(r) = queue.pop_front() {
            for label in [EdgeLabel::Contains, EdgeLabel::HasRule, EdgeLabel::Child] {
                for e in self.edges_from(&r, label) {
                    if seen.insert(e.to.clone()) {
                        queue.push_back(e.to.clone());
                    }
                }
            }
        }
        seen
    }

    /// Containment path of area names from the root to the area owning the
    /// given resource. Rules resolve through their attachment chain, sensors
    /// through their first `covers` edge, parameters through a gathering
    /// sensor.
    pub fn area_path(&self, rid: &Rid) -> Result<Vec<String>, LookupError> {
        let vertex = self.vertex(rid).ok_or_else(|| LookupError::UnknownRid(rid.clone()))?;
        let area_rid = match vertex {
            Vertex::Area(a) => a.id.rid.clone(),
            Vertex::Rule(_) => {
                let mut cur = rid.clone();
                loop {
                    if let Some(e) = self.edges_to(&cur, EdgeLabel::HasRule).next() {
                        break e.from.clone();
                    }
                    match self.edges_to(&cur, EdgeLabel::Child).next() {
                        Some(e) => cur = e.from.clone(),
                        None => return Err(LookupError::NoOwningArea(rid.clone())),
                    }
                }
            }
            Vertex::Sensor(_) => self
                .edges_from(rid, EdgeLabel::Covers)
                .next()
                .map(|e| e.to.clone())
                .ok_or_else(|| LookupError::NoOwningArea(rid.clone()))?,
            Vertex::Parameter(_) => {
                let sensor = self
                    .edges_to(rid, EdgeLabel::Gathers)
                    .next()
                    .map(|e| e.from.clone())
                    .ok_or_else(|| LookupError::NoOwningArea(rid.clone()))?;
                self.edges_from(&sensor, EdgeLabel::Covers)
                    .next()
                    .map(|e| e.to.clone())
                    .ok_or_else(|| LookupError::NoOwningArea(rid.clone()))?
            }
        };

        let mut path = Vec::new();
        let mut cur = area_rid;
        let mut hops = 0usize;
        loop {
            let area = match self.vertex(&cur) {
                Some(Vertex::Area(a)) => a,
                _ => return Err(LookupError::NoOwningArea(rid.clone())),
            };
            path.push(area.name.clone());
            match self.edges_to(&cur, EdgeLabel::Contains).next() {
                Some(e) => cur = e.from.clone(),
                None => break,
            }
            hops += 1;
            if hops > self.vertices.len() {
                // containment cycle; validate() reports it
                return Err(LookupError::NoOwningArea(rid.clone()));
            }
        }
        path.reverse();
        Ok(path)
    }

    /// Checks every structural invariant, returning one violation per broken
    /// rule. An empty result means the graph is well-formed.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        self.check_unique_rids(&mut out);
        self.check_edges(&mut out);
        self.check_vertex_fields(&mut out);
        self.check_containment_tree(&mut out);
        self.check_rule_attachment(&mut out);
        out
    }

    fn check_unique_rids(&self, out: &mut Vec<Violation>) {
        let mut seen: HashMap<&Rid, usize> = HashMap::new();
        for v in &self.vertices {
            *seen.entry(v.rid()).or_insert(0) += 1;
        }
        for (rid, count) in seen {
            if count > 1 {
                out.push(Violation {
                    kind: ViolationKind::DuplicateRid,
                    message: format!("record id {rid} used by {count} vertices"),
                    rids: vec![rid.clone()],
                });
            }
        }
    }

    fn check_edges(&self, out: &mut Vec<Violation>) {
        for e in &self.edges {
            let from = self.vertex(&e.from);
            let to = self.vertex(&e.to);
            if from.is_none() || to.is_none() {
                out.push(Violation {
                    kind: ViolationKind::DanglingEdge,
                    message: format!("{} edge references a missing vertex", e.label),
                    rids: vec![e.from.clone(), e.to.clone()],
                });
                continue;
            }
            let (from, to) = (from.unwrap(), to.unwrap());
            let ok = match e.label {
                EdgeLabel::Contains => {
                    matches!(from, Vertex::Area(_)) && matches!(to, Vertex::Area(_))
                }
                EdgeLabel::Covers => {
                    matches!(from, Vertex::Sensor(_)) && matches!(to, Vertex::Area(_))
                }
                EdgeLabel::Gathers => {
                    matches!(from, Vertex::Sensor(_)) && matches!(to, Vertex::Parameter(_))
                }
                EdgeLabel::HasRule => {
                    matches!(from, Vertex::Area(_)) && matches!(to, Vertex::Rule(_))
                }
                EdgeLabel::Child => {
                    matches!(from, Vertex::Rule(_)) && matches!(to, Vertex::Rule(_))
                }
            };
            if !ok {
                out.push(Violation {
                    kind: ViolationKind::EdgeEndpointType,
                    message: format!(
                        "{} edge connects {} to {}, which is not allowed",
                        e.label,
                        from.class_name(),
                        to.class_name()
                    ),
                    rids: vec![e.from.clone(), e.to.clone()],
                });
            }
        }
    }

    fn check_vertex_fields(&self, out: &mut Vec<Violation>) {
        for v in &self.vertices {
            match v {
                Vertex::Parameter(p) => {
                    if p.id.uri.is_none() {
                        out.push(Violation {
                            kind: ViolationKind::MissingParameterUri,
                            message: format!("parameter {} has no uri to fetch from", p.name),
                            rids: vec![p.id.rid.clone()],
                        });
                    }
                }
                Vertex::Sensor(s) => {
                    if s.sampling_period.is_zero() {
                        out.push(Violation {
                            kind: ViolationKind::NonPositiveSamplingPeriod,
                            message: format!("sensor {} has a zero sampling period", s.name),
                            rids: vec![s.id.rid.clone()],
                        });
                    }
                }
                Vertex::Rule(r) => {
                    if r.class_name.is_empty() {
                        out.push(Violation {
                            kind: ViolationKind::EmptyClassName,
                            message: "rule vertex has an empty class name".to_owned(),
                            rids: vec![r.id.rid.clone()],
                        });
                    }
                }
                Vertex::Area(_) => {}
            }
        }
    }

    fn check_containment_tree(&self, out: &mut Vec<Violation>) {
        let areas: Vec<&Area> = self.areas().collect();
        if areas.is_empty() {
            return;
        }

        let mut roots = Vec::new();
        for a in &areas {
            let parents: Vec<_> = self.edges_to(&a.id.rid, EdgeLabel::Contains).collect();
            if parents.len() > 1 {
                out.push(Violation {
                    kind: ViolationKind::AreaMultipleParents,
                    message: format!("area {} is contained by {} areas", a.name, parents.len()),
                    rids: vec![a.id.rid.clone()],
                });
            }
            if parents.is_empty() {
                roots.push(a.id.rid.clone());
            }
        }

        if let Some(cycle) = self.find_cycle(areas.iter().map(|a| &a.id.rid), EdgeLabel::Contains) {
            out.push(Violation {
                kind: ViolationKind::ContainmentCycle,
                message: "containment edges form a cycle".to_owned(),
                rids: cycle,
            });
        }

        if roots.len() != 1 {
            out.push(Violation {
                kind: ViolationKind::NotSingleRoot,
                message: format!("expected exactly one root area, found {}", roots.len()),
                rids: roots.clone(),
            });
        }

        if roots.len() == 1 {
            let mut reach = HashSet::from([roots[0].clone()]);
            let mut queue = VecDeque::from([roots[0].clone()]);
            while let Some(r) = queue.pop_front() {
                for e in self.edges_from(&r, EdgeLabel::Contains) {
                    if reach.insert(e.to.clone()) {
                        queue.push_back(e.to.clone());
                    }
                }
            }
            for a in &areas {
                if !reach.contains(&a.id.rid) {
                    out.push(Violation {
                        kind: ViolationKind::UnreachableArea,
                        message: format!("area {} is not reachable from the root", a.name),
                        rids: vec![a.id.rid.clone()],
                    });
                }
            }
        }
    }

    fn check_rule_attachment(&self, out: &mut Vec<Violation>) {
        let rule_rids: Vec<&Rid> = self.rules().map(|r| &r.id.rid).collect();
        for rid in &rule_rids {
            let incoming = self.edges_to(rid, EdgeLabel::HasRule).count()
                + self.edges_to(rid, EdgeLabel::Child).count();
            match incoming {
                1 => {}
                0 => out.push(Violation {
                    kind: ViolationKind::RuleUnattached,
                    message: format!("rule {rid} is not attached to any area or composite"),
                    rids: vec![(*rid).clone()],
                }),
                n => out.push(Violation {
                    kind: ViolationKind::RuleMultipleParents,
                    message: format!("rule {rid} has {n} incoming attachment edges"),
                    rids: vec![(*rid).clone()],
                }),
            }
        }
        if let Some(cycle) = self.find_cycle(rule_rids.into_iter(), EdgeLabel::Child) {
            out.push(Violation {
                kind: ViolationKind::ChildCycle,
                message: "child edges form a cycle".to_owned(),
                rids: cycle,
            });
        }
    }

    /// DFS cycle detection over edges of one label; returns the rids on the
    /// first cycle found.
    fn find_cycle<'a>(
        &self,
        nodes: impl Iterator<Item = &'a Rid>,
        label: EdgeLabel,
    ) -> Option<Vec<Rid>> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            Open,
            Done,
        }
        let mut marks: HashMap<Rid, Mark> = HashMap::new();
        for start in nodes {
            if marks.contains_key(start) {
                continue;
            }
            // iterative DFS keeping the open path for cycle reporting
            let mut stack = vec![(start.clone(), false)];
            let mut path = Vec::new();
            while let Some((rid, expanded)) = stack.pop() {
                if expanded {
                    marks.insert(rid.clone(), Mark::Done);
                    path.pop();
                    continue;
                }
                match marks.get(&rid) {
                    Some(Mark::Done) => continue,
                    Some(Mark::Open) => {
                        let pos = path.iter().position(|r| *r == rid).unwrap_or(0);
                        return Some(path[pos..].to_vec());
                    }
                    None => {}
                }
                marks.insert(rid.clone(), Mark::Open);
                path.push(rid.clone());
                stack.push((rid.clone(), true));
                for e in self.edges_from(&rid, label) {
                    match marks.get(&e.to) {
                        Some(Mark::Open) => {
                            let pos = path.iter().position(|r| *r == e.to).unwrap_or(0);
                            return Some(path[pos..].to_vec());
                        }
                        Some(Mark::Done) => {}
                        None => stack.push((e.to.clone(), false)),
                    }
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    fn area(rid: &str, name: &str) -> Vertex {
        Vertex::Area(Area {
            id: ResourceId::new(rid),
            name: name.to_owned(),
            attributes: Map::new(),
        })
    }

    fn rule(rid: &str, class: &str) -> Vertex {
        Vertex::Rule(RuleRecord {
            id: ResourceId::new(rid),
            class_name: class.to_owned(),
            fields: Map::new(),
        })
    }

    #[test]
    fn school_sample_is_well_formed() {
        let g = samples::school_graph();
        assert_eq!(g.validate(), Vec::new());
    }

    #[test]
    fn containment_cycle_is_one_violation() {
        let g = ResourceGraph::new(
            vec![area("#a", "A"), area("#b", "B")],
            vec![
                Edge::new("#a", "#b", EdgeLabel::Contains),
                Edge::new("#b", "#a", EdgeLabel::Contains),
            ],
        );
        let violations = g.validate();
        let cycles: Vec<_> = violations
            .iter()
            .filter(|v| v.kind == ViolationKind::ContainmentCycle)
            .collect();
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].rids.len(), 2);
        // both areas have a parent, so the single-root check fires as well
        assert!(violations.iter().any(|v| v.kind == ViolationKind::NotSingleRoot));
    }

    #[test]
    fn doubly_attached_rule_is_one_violation() {
        let g = ResourceGraph::new(
            vec![area("#a", "A"), area("#b", "B"), rule("#r", "ComparisonRule")],
            vec![
                Edge::new("#a", "#b", EdgeLabel::Contains),
                Edge::new("#a", "#r", EdgeLabel::HasRule),
                Edge::new("#b", "#r", EdgeLabel::HasRule),
            ],
        );
        let violations = g.validate();
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].kind, ViolationKind::RuleMultipleParents);
        assert_eq!(violations[0].rids, vec![Rid::new("#r")]);
    }

    #[test]
    fn orphan_rule_is_flagged() {
        let g = ResourceGraph::new(vec![area("#a", "A"), rule("#r", "X")], vec![]);
        let violations = g.validate();
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].kind, ViolationKind::RuleUnattached);
    }

    #[test]
    fn wrong_edge_endpoints_are_flagged() {
        let g = ResourceGraph::new(
            vec![area("#a", "A"), rule("#r", "X")],
            vec![
                Edge::new("#r", "#a", EdgeLabel::Contains),
                Edge::new("#a", "#r", EdgeLabel::HasRule),
            ],
        );
        assert!(g
            .validate()
            .iter()
            .any(|v| v.kind == ViolationKind::EdgeEndpointType));
    }

    #[test]
    fn dangling_edge_is_flagged() {
        let g = ResourceGraph::new(
            vec![area("#a", "A")],
            vec![Edge::new("#a", "#ghost", EdgeLabel::Contains)],
        );
        assert!(g.validate().iter().any(|v| v.kind == ViolationKind::DanglingEdge));
    }

    #[test]
    fn area_path_of_comfort_rule() {
        let g = samples::school_graph();
        let path = g.area_path(&Rid::new(samples::COMFORT_RULE_RID)).unwrap();
        assert_eq!(path, vec!["School A", "SportBlock"]);
    }

    #[test]
    fn area_path_of_root_is_the_root() {
        let g = samples::school_graph();
        let path = g.area_path(&Rid::new(samples::ROOT_AREA_RID)).unwrap();
        assert_eq!(path, vec!["School A"]);
    }

    #[test]
    fn area_path_of_hall_rule() {
        let g = samples::school_graph();
        let path = g.area_path(&Rid::new(samples::PF_HALL_RULE_RID)).unwrap();
        assert_eq!(path, vec!["School A", "TeachingBlock", "Hall"]);
    }

    #[test]
    fn area_path_unknown_rid_errors() {
        let g = samples::school_graph();
        assert!(matches!(
            g.area_path(&Rid::new("#nope")),
            Err(LookupError::UnknownRid(_))
        ));
    }

    #[test]
    fn add_then_remove_keeps_validation_output() {
        let g = samples::school_graph();
        let before = g.validate();
        let extra = rule("#extra", "ComparisonRule");
        let added = g.with_added(
            extra,
            vec![Edge::new(samples::ROOT_AREA_RID, "#extra", EdgeLabel::HasRule)],
        );
        assert_eq!(added.validate(), Vec::new());
        let removed = added.with_removed(&HashSet::from([Rid::new("#extra")]));
        assert_eq!(removed.validate(), before);
        assert_eq!(removed, g);
    }

    #[test]
    fn area_path_defined_for_every_vertex_when_valid() {
        let g = samples::school_graph();
        assert!(g.validate().is_empty());
        for v in g.vertices() {
            let path = g.area_path(v.rid());
            assert!(path.is_ok(), "vertex {} has no area path: {:?}", v.rid(), path);
            assert_eq!(path.unwrap()[0], "School A");
        }
    }
}
