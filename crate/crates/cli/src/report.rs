use std::time::Duration;

use eqforest::harness::Counterexample;
use eqforest::FamilySpec;
use serde::Serialize;
use serde_json::Value;

use crate::input::Input;

/// The JSON document every subcommand emits under `--json`. The shape is
/// described by `schema/run_report.schema.json`.
#[derive(Serialize)]
pub struct RunReport {
    pub command: CommandEcho,
    pub instance: Option<Instance>,
    pub results: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
    pub counterexamples: Vec<Counterexample>,
    pub warnings: Vec<String>,
}

#[derive(Serialize)]
pub struct CommandEcho {
    pub name: &'static str,
    pub args: Vec<String>,
}

#[derive(Serialize)]
pub struct Instance {
    pub source: String,
    pub family: Option<FamilySpec>,
    pub n: usize,
    pub edges: usize,
    pub components: usize,
    pub max_degree: usize,
}

#[derive(Serialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

impl RunReport {
    pub fn new(name: &'static str, input: Option<&Input>) -> Self {
        RunReport {
            command: CommandEcho { name, args: Vec::new() },
            instance: input.map(|i| Instance {
                source: i.source.clone(),
                family: i.family.clone(),
                n: i.forest.n(),
                edges: i.forest.edge_count(),
                components: i.forest.component_count(),
                max_degree: i.forest.max_degree(),
            }),
            results: Value::Null,
            timing: None,
            counterexamples: Vec::new(),
            warnings: input.map(|i| i.warnings.clone()).unwrap_or_default(),
        }
    }

    pub fn set_elapsed(&mut self, elapsed: Duration) {
        self.timing = Some(Timing {
            elapsed_ms: elapsed.as_secs_f64() * 1e3,
        });
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
