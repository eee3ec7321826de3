//! Machine-readable run reports.
//!
//! Every command invocation can emit one JSON envelope tying together the
//! command name, the content hash of the instance it ran on, the outcome
//! class, the payload (a system record, a failure description, or a
//! sharpening certificate), the wall time, and the seed. Envelopes are
//! written atomically (temp file then rename) so concurrent batch runs
//! never interleave partial documents.

use serde_json::{json, Map, Value};
use std::io::Write;
use std::path::Path;

/// Outcome classes, aligned with the process exit codes: accepted -> 0,
/// rejected -> 2, corrupted -> 3, inconclusive -> 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Accepted,
    Rejected,
    Corrupted,
    Inconclusive,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Accepted => "accepted",
            Outcome::Rejected => "rejected",
            Outcome::Corrupted => "corrupted",
            Outcome::Inconclusive => "inconclusive",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Accepted => 0,
            Outcome::Rejected => 2,
            Outcome::Corrupted => 3,
            Outcome::Inconclusive => 4,
        }
    }
}

pub struct ReportEnvelope {
    pub command: String,
    /// Content hash of the canonical instance serialization.
    pub digest: String,
    pub outcome: Outcome,
    pub payload: Value,
    pub wall_ms: u128,
    pub seed: Option<u64>,
}

impl ReportEnvelope {
    pub fn to_json(&self) -> Value {
        let mut doc = Map::new();
        doc.insert("command".into(), json!(self.command));
        doc.insert("digest".into(), json!(self.digest));
        doc.insert("outcome".into(), json!(self.outcome.as_str()));
        doc.insert("payload".into(), self.payload.clone());
        doc.insert("wall_ms".into(), json!(self.wall_ms as u64));
        doc.insert("seed".into(), match self.seed {
            Some(s) => json!(s),
            None => Value::Null,
        });
        Value::Object(doc)
    }

    /// Atomic write: serialize to a sibling temp file, then rename over
    /// the target.
    pub fn write_atomic(&self, path: &Path) -> std::io::Result<()> {
        let mut text = serde_json::to_string_pretty(&self.to_json()).expect("serialization");
        text.push('\n');
        let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
        let tmp = match dir {
            Some(d) => d.join(format!(
                ".{}.tmp-{}",
                path.file_name().and_then(|n| n.to_str()).unwrap_or("report"),
                std::process::id()
            )),
            None => Path::new(&format!(".report.tmp-{}", std::process::id())).to_path_buf(),
        };
        {
            let mut f = std::fs::File::create(&tmp)?;
            f.write_all(text.as_bytes())?;
            f.sync_all()?;
        }
        std::fs::rename(&tmp, path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outcome_strings_and_exit_codes_are_stable() {
        let table = [
            (Outcome::Accepted, "accepted", 0),
            (Outcome::Rejected, "rejected", 2),
            (Outcome::Corrupted, "corrupted", 3),
            (Outcome::Inconclusive, "inconclusive", 4),
        ];
        for (o, s, c) in table {
            assert_eq!(o.as_str(), s);
            assert_eq!(o.exit_code(), c);
        }
    }

    #[test]
    fn envelope_serializes_all_fields_and_writes_atomically() {
        let envelope = ReportEnvelope {
            command: "verify".into(),
            digest: "abc123".into(),
            outcome: Outcome::Accepted,
            payload: json!({"shape": [2, 2]}),
            wall_ms: 17,
            seed: Some(42),
        };
        let v = envelope.to_json();
        assert_eq!(v["command"], json!("verify"));
        assert_eq!(v["digest"], json!("abc123"));
        assert_eq!(v["outcome"], json!("accepted"));
        assert_eq!(v["payload"]["shape"], json!([2, 2]));
        assert_eq!(v["seed"], json!(42));

        let dir = std::env::temp_dir().join(format!("report-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("out.json");
        envelope.write_atomic(&path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let parsed: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["outcome"], json!("accepted"));
        // No stray temp files left behind.
        let leftovers: Vec<_> = std::fs::read_dir(&dir)
            .unwrap()
            .filter_map(|e| e.ok())
            .filter(|e| e.file_name().to_string_lossy().contains("tmp"))
            .collect();
        assert!(leftovers.is_empty());
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
