use std::collections::BTreeMap;

use chg_core::{Elem, GSet, GroupDescriptor, Verdict};
use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Serialize)]
pub struct Versions {
    pub artifact: String,
    pub rng: String,
}

#[derive(Debug, Serialize)]
pub struct VerdictSummary {
    pub property: String,
    pub h: usize,
    pub g: usize,
    pub holds: bool,
    pub witness: Option<Value>,
}

impl VerdictSummary {
    pub fn new(v: &Verdict, host: GroupDescriptor, h: usize, g: usize, weak: bool) -> Self {
        let witness = v.witness.as_ref().map(|w| {
            json!({
                "pattern": w.pattern.elems().iter().map(|x| offset_json(w.pattern.group(), x)).collect::<Vec<_>>(),
                "bases": w.bases.iter().map(|b| elem_json(host, b)).collect::<Vec<_>>(),
            })
        });
        VerdictSummary {
            property: if weak { "weak C_h[g]" } else { "C_h[g]" }.to_string(),
            h,
            g,
            holds: v.holds,
            witness,
        }
    }
}

/// One run. Everything except `elapsed_ms` and `versions` is a function of
/// the invocation.
#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub params: BTreeMap<String, Value>,
    pub conventions: BTreeMap<&'static str, &'static str>,
    pub group: String,
    pub set_size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub set: Option<Value>,
    pub bound_columns: BTreeMap<String, f64>,
    pub verdict: Option<VerdictSummary>,
    pub seed: Option<u64>,
    pub attempts: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
    pub elapsed_ms: u64,
    pub versions: Versions,
}

impl Report {
    pub fn new(command: &str, params: BTreeMap<String, Value>) -> Self {
        let conventions = BTreeMap::from([
            ("interval_elements", "1-based"),
            ("log", "natural"),
            ("thm1_error_term", "order only, no constant"),
        ]);
        Report {
            schema: SCHEMA,
            command: command.to_string(),
            params,
            conventions,
            group: String::new(),
            set_size: 0,
            set: None,
            bound_columns: BTreeMap::new(),
            verdict: None,
            seed: None,
            attempts: None,
            details: None,
            elapsed_ms: 0,
            versions: Versions {
                artifact: concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION")).to_string(),
                rng: chg_core::construct::RNG_NAME.to_string(),
            },
        }
    }

    pub fn with_set(&mut self, set: &GSet) {
        self.group = set.group().to_string();
        self.set_size = set.len();
        self.set = Some(set_json(set));
    }

    pub fn bound(&mut self, name: &str, value: f64) {
        self.bound_columns.insert(name.to_string(), value);
    }
}

/// Element as written in reports: interval elements 1-based, product
/// elements as coordinate arrays.
pub fn elem_json(group: GroupDescriptor, e: &Elem) -> Value {
    match group {
        GroupDescriptor::IntegerInterval { .. } => json!(e.coords()[0] + 1),
        GroupDescriptor::Cyclic { .. } => json!(e.coords()[0]),
        GroupDescriptor::Product { .. } => json!(e.coords()),
    }
}

/// Pattern offsets are never shifted.
fn offset_json(group: GroupDescriptor, e: &Elem) -> Value {
    match group {
        GroupDescriptor::Product { .. } => json!(e.coords()),
        _ => json!(e.coords()[0]),
    }
}

pub fn set_json(set: &GSet) -> Value {
    Value::Array(set.elems().iter().map(|e| elem_json(set.group(), e)).collect())
}
