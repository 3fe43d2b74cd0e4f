//! Batch processing of JSON documents, as the `count` binary does it.
//!
//! `cargo run --example json_batch`

use circuit_roots::counter::CountOptions;
use circuit_roots::gallery::{affine_axes, hidden_curve};
use circuit_roots::io::{parse, run, serialize, InputDocument, Report, RunFlags, Targets};

fn main() {
    let mut lines = vec![
        r#"{"n":1,"exponents":[[0],[1],[5]],"coefficients":[["1","-3","1"]],"label":"x^5 - 3x + 1"}"#.to_string(),
        r#"{"n":1,"exponents":[[0],[0],[2]],"coefficients":[["1","-3","1"]],"label":"duplicate"}"#.to_string(),
        "not json".to_string(),
    ];
    lines.push(serialize(&InputDocument::from_system(&hidden_curve(), Some("hidden curve".into()))));
    lines.push(serialize(&InputDocument::from_system(&affine_axes(), Some("axes".into()))));

    let targets = Targets { positive: true, torus: true, affine: true };
    let flags = RunFlags { verify: true, explain: false, options: CountOptions::default(), samples: 10_000 };
    for line in &lines {
        let report = match parse(line) {
            Ok(doc) => run(&doc, targets, &flags),
            Err(e) => Report::input_failure(None, &e),
        };
        println!("{}", report.to_json());
        eprintln!("{}  [exit {}]", report.summary(), report.exit_code().code());
    }
}
