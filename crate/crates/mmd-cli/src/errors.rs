//! CLI error object: machine-readable single-line JSON on stderr plus a
//! documented exit code.
//!
//! Codes: 2 estimator preconditions, 3 input/IO, 4 usage/config,
//! 1 self-test failure.

use serde_json::{json, Map, Value};

use mmd::MmdError;

#[derive(Debug)]
pub struct CliError {
    pub exit_code: i32,
    pub kind: String,
    pub message: String,
    pub context: Map<String, Value>,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            exit_code: 4,
            kind: "usage".into(),
            message: message.into(),
            context: Map::new(),
        }
    }

    pub fn ingest(message: impl Into<String>) -> Self {
        Self {
            exit_code: 3,
            kind: "ingest".into(),
            message: message.into(),
            context: Map::new(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self {
            exit_code: 3,
            kind: "io".into(),
            message: message.into(),
            context: Map::new(),
        }
    }

    pub fn estimator(err: MmdError) -> Self {
        Self {
            exit_code: 2,
            kind: err.code().into(),
            message: err.to_string(),
            context: Map::new(),
        }
    }

    pub fn with_context(mut self, key: &str, value: Value) -> Self {
        self.context.insert(key.into(), value);
        self
    }

    /// Single-line JSON diagnostic for the error stream.
    pub fn to_json_line(&self) -> String {
        let mut obj = json!({
            "error": self.kind,
            "message": self.message,
        });
        let map = obj.as_object_mut().expect("object");
        for (k, v) in &self.context {
            map.insert(k.clone(), v.clone());
        }
        serde_json::to_string(&obj).expect("error object serializes")
    }
}

impl From<MmdError> for CliError {
    fn from(err: MmdError) -> Self {
        CliError::estimator(err)
    }
}

impl From<mmd_harness::HarnessError> for CliError {
    fn from(err: mmd_harness::HarnessError) -> Self {
        match err {
            mmd_harness::HarnessError::Config(msg) => CliError::usage(msg),
            mmd_harness::HarnessError::Estimator(e) => CliError::estimator(e),
            mmd_harness::HarnessError::Replicate { index, source } => {
                CliError::estimator(source).with_context("replicate", index.into())
            }
            mmd_harness::HarnessError::Io(e) => CliError::io(e.to_string()),
        }
    }
}
