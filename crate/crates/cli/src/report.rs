//! The JSON report envelope shared by every subcommand.
//!
//! Reports are schema-versioned and byte-reproducible for a fixed seed,
//! modulo the wall-time field.

use serde::Serialize;
use sha2::{Digest, Sha256};

pub struct CommandOutcome {
    pub results: serde_json::Value,
    pub input_digest: Option<String>,
    pub rng_seed: Option<u64>,
    /// Exit with code 2: the mathematics failed, not the tool.
    pub failed: bool,
}

impl CommandOutcome {
    pub fn ok(results: serde_json::Value) -> Self {
        Self {
            results,
            input_digest: None,
            rng_seed: None,
            failed: false,
        }
    }

    pub fn with_digest(mut self, bytes: &[u8]) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(bytes);
        let digest = hasher.finalize();
        let mut hex = String::with_capacity(64);
        for byte in digest {
            hex.push_str(&format!("{byte:02x}"));
        }
        self.input_digest = Some(hex);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = Some(seed);
        self
    }

    pub fn failing_if(mut self, failed: bool) -> Self {
        self.failed = failed;
        self
    }
}

#[derive(Serialize)]
struct Versions {
    core: &'static str,
    cli: &'static str,
}

#[derive(Serialize)]
struct Report<'a> {
    schema_version: u32,
    command: &'a [String],
    #[serde(skip_serializing_if = "Option::is_none")]
    input_digest: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rng_seed: Option<u64>,
    versions: Versions,
    results: serde_json::Value,
    wall_time_ms: f64,
}

pub fn print_report(argv: &[String], outcome: CommandOutcome, started: std::time::Instant) {
    let report = Report {
        schema_version: 1,
        command: argv,
        input_digest: outcome.input_digest,
        rng_seed: outcome.rng_seed,
        versions: Versions {
            core: bicomb_core_version(),
            cli: env!("CARGO_PKG_VERSION"),
        },
        results: outcome.results,
        wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("report serializes")
    );
}

fn bicomb_core_version() -> &'static str {
    // The workspace pins both crates to one version.
    env!("CARGO_PKG_VERSION")
}
