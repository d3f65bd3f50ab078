use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use grprep_core::FORMAT_VERSION;
use serde_json::{json, Map, Value};
use tempfile::NamedTempFile;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

/// `<prefix>.<suffix>`, keeping any dots already in the prefix.
pub fn artifact_path(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_owned();
    name.push(".");
    name.push(suffix);
    PathBuf::from(name)
}

/// Writes through a temporary file in the target directory and renames it
/// into place.
pub fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir).map_err(io)?;
    let mut tmp = NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn config_json(config: &RunConfig) -> Value {
    serde_json::to_value(config).expect("run config serializes")
}

/// JSON document with the format version and resolved config up front,
/// followed by `body`'s fields.
pub fn json_document(config: &RunConfig, body: Value) -> String {
    let mut doc = Map::new();
    doc.insert("format_version".into(), json!(FORMAT_VERSION));
    doc.insert("config".into(), config_json(config));
    match body {
        Value::Object(fields) => doc.extend(fields),
        other => {
            doc.insert("result".into(), other);
        }
    }
    let mut text = serde_json::to_string_pretty(&Value::Object(doc)).expect("json serializes");
    text.push('\n');
    text
}

/// `#` comment lines carrying the format version and resolved config.
pub fn comment_header(config: &RunConfig) -> String {
    format!(
        "# format_version: {FORMAT_VERSION}\n# config: {}\n",
        serde_json::to_string(&config_json(config)).expect("json serializes")
    )
}

/// CSV text: provenance comments, a header row, then rows.
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(config: &RunConfig, columns: &[&str]) -> Self {
        Self::with_notes(config, &[], columns)
    }

    /// Like [`Csv::new`] with extra `# key: value` lines before the header.
    pub fn with_notes(config: &RunConfig, notes: &[(&str, String)], columns: &[&str]) -> Self {
        let mut text = comment_header(config);
        for (key, value) in notes {
            text.push_str(&format!("# {key}: {value}\n"));
        }
        text.push_str(&columns.join(","));
        text.push('\n');
        Csv { text }
    }

    pub fn row<I, S>(&mut self, cells: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let cells: Vec<S> = cells.into_iter().collect();
        let line: Vec<&str> = cells.iter().map(AsRef::as_ref).collect();
        self.text.push_str(&line.join(","));
        self.text.push('\n');
    }

    pub fn finish(self) -> String {
        self.text
    }
}
