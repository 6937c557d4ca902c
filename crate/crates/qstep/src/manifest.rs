//! Run manifest: the comment block at the head of every CSV output.
//!
//! The block records tool version, subcommand and every parameter, so the
//! exact invocation can be reconstructed from the file alone. Data rows
//! never carry timestamps; the timestamp line itself can be suppressed for
//! byte-identical reruns.

use std::fmt::Write as _;

#[derive(Clone, Debug, PartialEq)]
pub struct RunManifest {
    pub command: String,
    /// Ordered key/value pairs, exactly as the subcommand received them.
    pub parameters: Vec<(String, String)>,
    pub tool_version: String,
    pub timestamp: Option<String>,
}

impl RunManifest {
    pub fn new(command: &str, with_timestamp: bool) -> Self {
        Self {
            command: command.to_string(),
            parameters: Vec::new(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: with_timestamp
                .then(|| chrono::Utc::now().format("%Y-%m-%dT%H:%M:%SZ").to_string()),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.push((key.to_string(), value.to_string()));
        self
    }

    pub fn param_list(mut self, key: &str, values: &[f64]) -> Self {
        let joined = values
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",");
        self.parameters.push((key.to_string(), joined));
        self
    }

    /// Renders the `#`-prefixed header block (with trailing newline).
    pub fn to_comment_block(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# qstep {}", self.tool_version);
        let _ = writeln!(out, "# command: {}", self.command);
        if let Some(ts) = &self.timestamp {
            let _ = writeln!(out, "# timestamp: {ts}");
        }
        for (k, v) in &self.parameters {
            let _ = writeln!(out, "# param {k} = {v}");
        }
        out
    }

    /// Parses a header block back into a manifest (ignoring foreign comment
    /// lines such as `# columns:`). Inverse of [`Self::to_comment_block`].
    #[cfg(test)]
    pub fn parse(text: &str) -> Option<Self> {
        let mut version = None;
        let mut command = None;
        let mut timestamp = None;
        let mut parameters = Vec::new();
        for line in text.lines() {
            let Some(body) = line.strip_prefix("# ") else {
                continue;
            };
            if let Some(v) = body.strip_prefix("qstep ") {
                version = Some(v.trim().to_string());
            } else if let Some(c) = body.strip_prefix("command: ") {
                command = Some(c.trim().to_string());
            } else if let Some(t) = body.strip_prefix("timestamp: ") {
                timestamp = Some(t.trim().to_string());
            } else if let Some(p) = body.strip_prefix("param ") {
                let (k, v) = p.split_once(" = ")?;
                parameters.push((k.trim().to_string(), v.trim().to_string()));
            }
        }
        Some(Self {
            command: command?,
            parameters,
            tool_version: version?,
            timestamp,
        })
    }
}
