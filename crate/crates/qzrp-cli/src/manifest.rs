use std::collections::BTreeMap;

use serde::Serialize;

/// One per run. Holds no timestamps so that reruns are byte-identical.
#[derive(Debug, Default, Serialize)]
pub struct RunManifest {
    pub command_line: Vec<String>,
    pub command: String,
    pub shape: Option<String>,
    pub n: Option<usize>,
    pub point: Option<Point>,
    pub seed: Option<u64>,
    pub budget: u128,
    pub versions: BTreeMap<&'static str, &'static str>,
    pub outputs: Vec<String>,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, Serialize)]
pub struct Point {
    pub x: Vec<String>,
    pub t: String,
}

#[derive(Debug, Default, Serialize)]
pub struct Outcome {
    pub status: &'static str,
    pub exit_code: i32,
    pub summary: String,
}

impl RunManifest {
    pub fn new(command_line: Vec<String>, budget: u128) -> Self {
        let versions = BTreeMap::from([("qzrp", qzrp::VERSION), ("qzrp-cli", env!("CARGO_PKG_VERSION"))]);
        RunManifest { command_line, budget, versions, ..Default::default() }
    }
}

