//! Output assembly: `#`-prefixed key=value metadata plus CSV rows, or a
//! single JSON document. Content is built as one string and written in one
//! go so identical configs give identical bytes.

use std::io::Write;
use std::path::Path;

/// Ordered key=value metadata emitted as `# key=value` lines.
pub struct Meta {
    pairs: Vec<(String, String)>,
}

impl Meta {
    pub fn new(command: &str) -> Self {
        Self {
            pairs: vec![("command".into(), command.into())],
        }
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        self.pairs.push((key.into(), value.to_string()));
    }

    pub fn push_list(&mut self, key: impl Into<String>, values: &[usize]) {
        let joined = values
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",");
        self.pairs.push((key.into(), joined));
    }

    /// Render `# key=value` lines followed by the CSV header and rows.
    pub fn csv(&self, header: &str, rows: &[String]) -> String {
        let mut out = String::new();
        for (k, v) in &self.pairs {
            out.push_str(&format!("# {k}={v}\n"));
        }
        out.push_str(header);
        out.push('\n');
        for row in rows {
            out.push_str(row);
            out.push('\n');
        }
        out
    }
}

/// Pretty-printed JSON with a trailing newline.
pub fn json_doc(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON serialization cannot fail");
    s.push('\n');
    s
}

/// Write to the file, or stdout when no path was given.
pub fn emit(out: Option<&Path>, content: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, content),
        None => std::io::stdout().write_all(content.as_bytes()),
    }
}
