//! Schema-hybrid class declarations: classes declare typed fields (some
//! mandatory) and inherit them through a parent chain, while stored vertices
//! may carry extra free-form fields that are preserved verbatim.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use url::Url;

/// Name of the abstract base class every rule class inherits from.
pub const BASE_RULE_CLASS: &str = "Rule";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldType {
    String,
    Number,
    Uri,
    Duration,
    Integer,
}

impl FieldType {
    /// Checks a JSON value against this type. Durations are positive finite
    /// numbers of seconds; uris must parse as absolute URLs.
    pub fn accepts(&self, value: &Value) -> bool {
        match self {
            FieldType::String => value.is_string(),
            FieldType::Number => value.as_f64().is_some_and(f64::is_finite),
            FieldType::Uri => value
                .as_str()
                .is_some_and(|s| Url::parse(s).is_ok()),
            FieldType::Duration => value
                .as_f64()
                .is_some_and(|n| n.is_finite() && n > 0.0),
            FieldType::Integer => {
                value.as_i64().is_some()
                    || value.as_f64().is_some_and(|n| n.is_finite() && n.fract() == 0.0)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub name: String,
    #[serde(rename = "type")]
    pub field_type: FieldType,
    #[serde(default)]
    pub mandatory: bool,
}

impl FieldSpec {
    pub fn mandatory(name: &str, field_type: FieldType) -> Self {
        FieldSpec { name: name.to_owned(), field_type, mandatory: true }
    }

    pub fn optional(name: &str, field_type: FieldType) -> Self {
        FieldSpec { name: name.to_owned(), field_type, mandatory: false }
    }
}

/// Field declarations of one class, optionally inheriting from a parent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassSchema {
    #[serde(rename = "className")]
    pub class_name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent: Option<String>,
    #[serde(default)]
    pub fields: Vec<FieldSpec>,
}

impl ClassSchema {
    pub fn new(class_name: &str, parent: Option<&str>, fields: Vec<FieldSpec>) -> Self {
        ClassSchema {
            class_name: class_name.to_owned(),
            parent: parent.map(str::to_owned),
            fields,
        }
    }
}

/// One field-level problem found while checking a vertex against its class.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldViolation {
    pub field: String,
    pub message: String,
}

impl FieldViolation {
    fn new(field: &str, message: impl Into<String>) -> Self {
        FieldViolation { field: field.to_owned(), message: message.into() }
    }
}

impl std::fmt::Display for FieldViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SchemaError {
    #[error("class {0} is already declared")]
    Duplicate(String),
    #[error("class {0} declares unknown parent {1}")]
    UnknownParent(String, String),
    #[error("inheritance cycle through class {0}")]
    ParentCycle(String),
    #[error("class {child} redeclares inherited field {field} with a different type")]
    FieldTypeConflict { child: String, field: String },
}

/// The set of declared classes, looked up by name.
#[derive(Clone, Debug, Default)]
pub struct SchemaSet {
    classes: BTreeMap<String, ClassSchema>,
}

impl SchemaSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares a class. Rejects duplicates, inheritance cycles and children
    /// that redeclare an inherited field with a different type.
    pub fn declare(&mut self, schema: ClassSchema) -> Result<(), SchemaError> {
        if self.classes.contains_key(&schema.class_name) {
            return Err(SchemaError::Duplicate(schema.class_name));
        }
        if let Some(parent) = &schema.parent {
            let inherited = self
                .effective_fields(parent)
                .ok_or_else(|| SchemaError::UnknownParent(schema.class_name.clone(), parent.clone()))?;
            for f in &schema.fields {
                if let Some(spec) = inherited.get(f.name.as_str()) {
                    if spec.field_type != f.field_type {
                        return Err(SchemaError::FieldTypeConflict {
                            child: schema.class_name.clone(),
                            field: f.name.clone(),
                        });
                    }
                }
            }
        }
        self.classes.insert(schema.class_name.clone(), schema);
        Ok(())
    }

    /// Declares a class, replacing a previous declaration of the same name.
    pub fn declare_or_replace(&mut self, schema: ClassSchema) {
        self.classes.insert(schema.class_name.clone(), schema);
    }

    pub fn get(&self, class_name: &str) -> Option<&ClassSchema> {
        self.classes.get(class_name)
    }

    pub fn contains(&self, class_name: &str) -> bool {
        self.classes.contains_key(class_name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &ClassSchema> {
        self.classes.values()
    }

    /// Whether a class's parent chain roots at the abstract rule base class.
    pub fn is_rule_class(&self, class_name: &str) -> bool {
        let mut cur = class_name;
        let mut seen = HashSet::new();
        loop {
            if cur == BASE_RULE_CLASS {
                return true;
            }
            if !seen.insert(cur.to_owned()) {
                return false;
            }
            match self.classes.get(cur).and_then(|c| c.parent.as_deref()) {
                Some(parent) => cur = parent,
                None => return false,
            }
        }
    }

    /// The effective field set of a class: own fields plus everything
    /// inherited. Child declarations win on name collisions (same type only;
    /// `declare` enforces that). Returns None for unknown classes or broken
    /// parent chains.
    pub fn effective_fields(&self, class_name: &str) -> Option<BTreeMap<&str, &FieldSpec>> {
        let mut chain = Vec::new();
        let mut cur = class_name;
        let mut seen = HashSet::new();
        loop {
            let schema = self.classes.get(cur)?;
            if !seen.insert(cur) {
                return None; // cycle
            }
            chain.push(schema);
            match &schema.parent {
                Some(p) => cur = p,
                None => break,
            }
        }
        let mut fields: BTreeMap<&str, &FieldSpec> = BTreeMap::new();
        // walk root-first so children override ancestors
        for schema in chain.iter().rev() {
            for f in &schema.fields {
                fields.insert(&f.name, f);
            }
        }
        Some(fields)
    }

    /// Checks a stored vertex's fields against its declared class: every
    /// effective mandatory field must be present and well-typed, optional
    /// fields must be well-typed when present, and extension fields are
    /// always allowed.
    pub fn check(&self, class_name: &str, fields: &Map<String, Value>) -> Vec<FieldViolation> {
        let Some(effective) = self.effective_fields(class_name) else {
            return vec![FieldViolation::new("@class", format!("unknown class {class_name}"))];
        };
        let mut violations = Vec::new();
        for (name, spec) in effective {
            match fields.get(name) {
                None => {
                    if spec.mandatory {
                        violations.push(FieldViolation::new(name, "mandatory field is missing"));
                    }
                }
                Some(value) => {
                    if !spec.field_type.accepts(value) {
                        violations.push(FieldViolation::new(
                            name,
                            format!("expected {:?}, got {value}", spec.field_type),
                        ));
                    }
                }
            }
        }
        violations
    }
}

/// Built-in declarations for the three resource classes.
pub fn resource_schemas() -> Vec<ClassSchema> {
    vec![
        ClassSchema::new(
            "Area",
            None,
            vec![
                FieldSpec::mandatory("name", FieldType::String),
                FieldSpec::optional("uri", FieldType::Uri),
            ],
        ),
        ClassSchema::new(
            "Sensor",
            None,
            vec![
                FieldSpec::mandatory("name", FieldType::String),
                FieldSpec::mandatory("sampling_period", FieldType::Duration),
                FieldSpec::optional("uri", FieldType::Uri),
            ],
        ),
        ClassSchema::new(
            "Parameter",
            None,
            vec![
                FieldSpec::mandatory("name", FieldType::String),
                FieldSpec::mandatory("unit", FieldType::String),
                FieldSpec::mandatory("uri", FieldType::Uri),
            ],
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn rule_base() -> ClassSchema {
        ClassSchema::new(
            BASE_RULE_CLASS,
            None,
            vec![
                FieldSpec::mandatory("name", FieldType::String),
                FieldSpec::optional("description", FieldType::String),
                FieldSpec::mandatory("suggestion", FieldType::String),
            ],
        )
    }

    fn comfort_schema() -> ClassSchema {
        ClassSchema::new(
            "ComfortIndex",
            Some(BASE_RULE_CLASS),
            vec![
                FieldSpec::mandatory("temperature_uri", FieldType::Uri),
                FieldSpec::mandatory("humidity_uri", FieldType::Uri),
                FieldSpec::mandatory("threshold", FieldType::Number),
            ],
        )
    }

    fn set_with_comfort() -> SchemaSet {
        let mut set = SchemaSet::new();
        set.declare(rule_base()).unwrap();
        set.declare(comfort_schema()).unwrap();
        set
    }

    fn comfort_fields() -> Map<String, Value> {
        json!({
            "name": "CI Room 3",
            "description": "comfort watch",
            "suggestion": "Open the window",
            "temperature_uri": "http://gaia-x/gw1/temp",
            "humidity_uri": "http://gaia-x/gw1/humid",
            "threshold": 32
        })
        .as_object()
        .unwrap()
        .clone()
    }

    #[test]
    fn valid_vertex_passes() {
        let set = set_with_comfort();
        assert_eq!(set.check("ComfortIndex", &comfort_fields()), Vec::new());
    }

    #[test]
    fn string_threshold_is_a_type_violation() {
        let set = set_with_comfort();
        let mut fields = comfort_fields();
        fields.insert("threshold".into(), json!("32"));
        let violations = set.check("ComfortIndex", &fields);
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].field, "threshold");
    }

    #[test]
    fn missing_inherited_suggestion_is_a_violation() {
        let set = set_with_comfort();
        let mut fields = comfort_fields();
        fields.remove("suggestion");
        let violations = set.check("ComfortIndex", &fields);
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].field, "suggestion");
    }

    #[test]
    fn extension_fields_are_ignored() {
        let set = set_with_comfort();
        let mut fields = comfort_fields();
        fields.insert("note".into(), json!("west wing"));
        assert_eq!(set.check("ComfortIndex", &fields), Vec::new());
    }

    #[test]
    fn unknown_class_is_a_single_violation() {
        let set = set_with_comfort();
        let violations = set.check("NoSuchRule", &Map::new());
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].field, "@class");
    }

    #[test]
    fn parent_violation_reported_for_subclass_instances() {
        // monotonicity: whatever the base class would reject, the subclass
        // instance also gets rejected for
        let mut set = set_with_comfort();
        set.declare(ClassSchema::new("ComfortIndexPlus", Some("ComfortIndex"), vec![]))
            .unwrap();
        let mut fields = comfort_fields();
        fields.remove("name");
        let base = set.check(BASE_RULE_CLASS, &fields);
        let sub = set.check("ComfortIndexPlus", &fields);
        for v in &base {
            assert!(sub.iter().any(|s| s.field == v.field));
        }
    }

    #[test]
    fn duplicate_declaration_rejected() {
        let mut set = set_with_comfort();
        assert!(matches!(set.declare(comfort_schema()), Err(SchemaError::Duplicate(_))));
    }

    #[test]
    fn conflicting_field_type_rejected() {
        let mut set = SchemaSet::new();
        set.declare(rule_base()).unwrap();
        let bad = ClassSchema::new(
            "Weird",
            Some(BASE_RULE_CLASS),
            vec![FieldSpec::mandatory("name", FieldType::Number)],
        );
        assert!(matches!(set.declare(bad), Err(SchemaError::FieldTypeConflict { .. })));
    }

    #[test]
    fn duration_must_be_positive() {
        assert!(FieldType::Duration.accepts(&json!(30)));
        assert!(FieldType::Duration.accepts(&json!(0.5)));
        assert!(!FieldType::Duration.accepts(&json!(0)));
        assert!(!FieldType::Duration.accepts(&json!(-5)));
        assert!(!FieldType::Duration.accepts(&json!("30")));
    }

    #[test]
    fn integer_accepts_whole_numbers_only() {
        assert!(FieldType::Integer.accepts(&json!(3)));
        assert!(FieldType::Integer.accepts(&json!(3.0)));
        assert!(!FieldType::Integer.accepts(&json!(3.5)));
    }

    #[test]
    fn uri_must_be_absolute() {
        assert!(FieldType::Uri.accepts(&json!("http://gaia-x/gw1/temp")));
        assert!(!FieldType::Uri.accepts(&json!("/gw1/temp")));
        assert!(!FieldType::Uri.accepts(&json!(42)));
    }
}
