use std::path::Path;

use serde::Serialize;

/// Header written into every output: the command and every flag it ran with.
#[derive(Debug, Serialize)]
pub struct Provenance<'a, F: Serialize> {
    program: &'static str,
    version: &'static str,
    command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    input: Option<String>,
    flags: &'a F,
}

impl<'a, F: Serialize> Provenance<'a, F> {
    pub fn new(command: &'static str, input: Option<&Path>, flags: &'a F) -> Self {
        Provenance {
            program: "lagt",
            version: env!("CARGO_PKG_VERSION"),
            command,
            input: input.map(|p| p.display().to_string()),
            flags,
        }
    }
}
