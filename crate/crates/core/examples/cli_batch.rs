//! The JSON document interface used by the `iwasawa` binary, called in-process:
//! one document, then a seeded batch run on several workers.
//!
//!     cargo run --example cli_batch

use iwasawa::cli::{render, run_document};
use iwasawa::codec::Defaults;
use serde_json::json;

fn main() {
    let defaults = Defaults { precision: 16, tdeg: 24, seed: 42 };
    let doc = json!({"ring": {"p": 2}, "generator": {"coeffs": [-2, 1]}, "n": 3});
    let (out, code) = run_document("module.finiteness", &doc, &defaults, 1);
    print!("{}", render(&out));
    println!("exit {code}");

    let batch: Vec<_> = (0..8).map(|i| json!({"ring": {"p": 3}, "series": {"random": {"degree": i}}})).collect();
    let doc = json!({ "batch": batch });
    let (one, _) = run_document("series.prep", &doc, &defaults, 1);
    let (four, _) = run_document("series.prep", &doc, &defaults, 4);
    assert_eq!(one, four);
    for r in one["payload"]["results"].as_array().unwrap() {
        println!("λ = {}, μ = {}", r["payload"]["lambda"], r["payload"]["mu"]);
    }
    println!("batch status {}, digest {}", one["status"], one["input_digest"]);
}
