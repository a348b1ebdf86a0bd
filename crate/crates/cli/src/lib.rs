//! Command line front end: arrangement files in, deterministic JSON or text
//! reports out.

pub mod error;
pub mod report;
pub mod spec;
pub mod text;

use serde::Serialize;

pub use error::{error_json, CliError};
pub use report::{run_command, Command, Options, ReportDocument};
pub use spec::{parse_spec, parse_spec_str, ParsedSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Text,
}

/// Renders any report section; JSON output ends with a newline.
pub fn render<T: Serialize>(doc: &T, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(doc).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Text => text::render(&serde_json::to_value(doc).expect("reports serialize")),
    }
}

/// Parses the file, runs the command and renders the result.
pub fn run(
    cmd: Command,
    spec: &std::path::Path,
    modulus: Option<u64>,
    opts: &Options,
    format: Format,
) -> Result<String, CliError> {
    let parsed = parse_spec(spec, modulus)?;
    let doc = run_command(cmd, &parsed, opts)?;
    Ok(render(&doc, format))
}
