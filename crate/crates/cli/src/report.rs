//! Report assembly: streamed text lines and the versioned JSON document.
//!
//! JSON schema (version 1):
//! `{"version":1,"seed":<int>,"prime":"<decimal>","results":[{"id":"A1",
//! "n":3,"k":null,"mode":"symbolic","status":"pass","witness":null,"ms":12}],
//! "aggregate":"pass"}` — the prime rides as a decimal string.

use std::io::Write;

use serde::Serialize;

use qident::catalog::Catalog;
use qident::verifier::{run_check, run_suite, ModularConfig, SuiteEntry, VerifyResult};

/// Print a line, exiting quietly if the reader closed the pipe.
pub fn emit(line: &str) {
    let mut out = std::io::stdout().lock();
    if writeln!(out, "{line}").is_err() {
        std::process::exit(0);
    }
}

#[derive(Serialize)]
pub struct SpecDescriptor {
    pub id: String,
    pub kind: String,
    pub n_min: i64,
    pub summary: String,
}

#[derive(Serialize)]
struct ResultRow<'a> {
    id: &'a str,
    n: i64,
    k: Option<i64>,
    mode: &'a str,
    status: &'a str,
    witness: Option<&'a str>,
    ms: u64,
}

#[derive(Serialize)]
struct Report<'a> {
    version: u32,
    seed: u64,
    prime: String,
    results: Vec<ResultRow<'a>>,
    aggregate: &'a str,
}

pub fn text_line(r: &VerifyResult) -> String {
    let k = match r.k {
        Some(k) => format!(" k={k}"),
        None => String::new(),
    };
    let witness = match &r.witness {
        Some(w) => format!("  [{w}]"),
        None => String::new(),
    };
    format!(
        "{:<6} n={:<4}{k} {:<9} {:<7} ({} ms){witness}",
        r.id,
        r.n,
        r.mode.as_str(),
        r.status.as_str(),
        r.elapsed_ms
    )
}

/// Run the selection. With one job the text report streams line by line as
/// results arrive; with more jobs everything is computed first and printed in
/// the same deterministic order. Ordering and statuses are identical either
/// way; only timing values vary, and `no_timing` zeroes those.
pub fn execute(
    cat: &Catalog,
    selection: &[SuiteEntry],
    cfg: &ModularConfig,
    jobs: usize,
    stream_text: bool,
    no_timing: bool,
) -> Vec<VerifyResult> {
    let mut results = if jobs <= 1 && stream_text {
        let mut out = Vec::with_capacity(selection.len());
        for e in selection {
            let mut r = run_check(cat, &e.id, e.n, e.mode, cfg);
            if no_timing {
                r.elapsed_ms = 0;
            }
            emit(&text_line(&r));
            out.push(r);
        }
        out
    } else {
        let mut out = run_suite(cat, selection, cfg, jobs);
        if no_timing {
            for r in &mut out {
                r.elapsed_ms = 0;
            }
        }
        if stream_text {
            for r in &out {
                emit(&text_line(r));
            }
        }
        out
    };
    results.sort_by_key(|r| r.sort_key());
    results
}

pub fn to_json(cfg: &ModularConfig, results: &[VerifyResult], pass: bool) -> String {
    let rows: Vec<ResultRow> = results
        .iter()
        .map(|r| ResultRow {
            id: &r.id,
            n: r.n,
            k: r.k,
            mode: r.mode.as_str(),
            status: r.status.as_str(),
            witness: r.witness.as_deref(),
            ms: r.elapsed_ms,
        })
        .collect();
    let report = Report {
        version: 1,
        seed: cfg.seed,
        prime: cfg.prime.to_string(),
        results: rows,
        aggregate: if pass { "pass" } else { "fail" },
    };
    serde_json::to_string(&report).expect("report serialization")
}
