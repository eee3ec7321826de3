//! The on-disk formats: canonical instance files, content digests, and
//! report envelopes with stable outcome classes and exit codes.
//!
//! Run with: cargo run --example instance_files

use tdsharp::cli::flagship_instance;
use tdsharp::instance::{emit_instance, instance_digest, parse_instance, record_json};
use tdsharp::report::{Outcome, ReportEnvelope};
use tdsharp::td::verify_td_system_default;

fn main() {
    let instance = flagship_instance().expect("flagship");
    let text = emit_instance(&instance);
    println!("canonical instance file ({} bytes):\n{text}", text.len());

    // Canonical serialization round-trips byte-for-byte.
    let parsed = parse_instance(text.as_bytes()).expect("parses");
    assert_eq!(parsed, instance);
    assert_eq!(emit_instance(&parsed), text);
    let digest = instance_digest(&instance);
    println!("content digest: {digest}");

    // Reformatting does not change the parsed value or the digest.
    let pretty = serde_json::to_string_pretty(
        &serde_json::from_str::<serde_json::Value>(&text).expect("valid JSON"),
    )
    .expect("pretty");
    let reparsed = parse_instance(pretty.as_bytes()).expect("parses");
    assert_eq!(instance_digest(&reparsed), digest);
    println!("reformatted file parses to the same value and digest.");

    // A report envelope for a verify run.
    let record = verify_td_system_default(&instance.a, &instance.a_star).expect("verifies");
    let envelope = ReportEnvelope {
        command: "verify".into(),
        digest: digest.clone(),
        outcome: Outcome::Accepted,
        payload: record_json(&record),
        wall_ms: 1,
        seed: None,
    };
    let path = std::env::temp_dir().join("tdsharp-example-report.json");
    envelope.write_atomic(&path).expect("atomic write");
    println!(
        "report written atomically to {} (outcome {}, exit code {})",
        path.display(),
        envelope.outcome.as_str(),
        envelope.outcome.exit_code()
    );

    // Parse errors carry positions.
    let broken = text.replace("[[0],[0],[1],[2]]", "[[0],[0],[1]]");
    match parse_instance(broken.as_bytes()) {
        Err(e) => println!("malformed variant rejected: {e}"),
        Ok(_) => panic!("expected a parse error"),
    }

    let _ = std::fs::remove_file(&path);
}
