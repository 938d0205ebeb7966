mod common;

use std::io::Write;
use std::process::{Command, Stdio};

use common::*;
use iwasawa::codec::{digest, dist_json, measure_json, weierstrass_json};
use iwasawa::iwmod::{finiteness_certificate, CharIdealGen, Finiteness};
use iwasawa::measure::{GammaContext, ProMeasure};
use iwasawa::series::PowerSeries;
use serde_json::{json, Value};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_iwasawa"));
    for v in ["IWASAWA_PRECISION", "IWASAWA_TDEG", "IWASAWA_SEED", "IWASAWA_WORKERS"] {
        c.env_remove(v);
    }
    c
}

fn run(args: &[&str], stdin: &Value, env: &[(&str, &str)]) -> (Value, i32) {
    let mut cmd = bin();
    cmd.args(args).envs(env.iter().copied()).stdin(Stdio::piped()).stdout(Stdio::piped());
    let mut child = cmd.spawn().unwrap();
    child.stdin.take().unwrap().write_all(stdin.to_string().as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (serde_json::from_slice(&out.stdout).unwrap(), out.status.code().unwrap())
}

#[test]
fn prep_payload_is_the_library_result() {
    let ring = zp(3, 10);
    let f = PowerSeries::from_ints(&ring, &[-3, 6, 1, 9], 12, 10);
    let input = json!({"ring": {"p": 3, "prec": 10}, "series": {"coeffs": [-3, 6, 1, 9], "tdeg": 12}});
    let (doc, code) = run(&["series", "prep"], &input, &[]);
    assert_eq!(code, 0);
    assert_eq!(doc["payload"], weierstrass_json(&f.weierstrass_prepare().unwrap()));
    assert_eq!(doc["verb"], "series.prep");
}

#[test]
fn measure_reduce_matches_library() {
    let ring = zp(5, 8);
    let d2 = iwasawa::groups::FiniteAbelianGroup::cyclic(2);
    let mu = ProMeasure::new(
        &d2,
        &GammaContext::default(),
        vec![PowerSeries::from_ints(&ring, &[1, 2, 3], 8, 8), PowerSeries::from_ints(&ring, &[0, 4], 8, 8)],
    )
    .unwrap();
    let input = json!({"ring": {"p": 5, "prec": 8}, "measure": measure_json(&mu), "n": 1});
    let (doc, code) = run(&["measure", "reduce"], &input, &[]);
    assert_eq!(code, 0);
    let d = mu.level_reduce(1).unwrap();
    assert_eq!(doc["payload"]["dist"], dist_json(&d));
}

#[test]
fn finiteness_exit_codes_follow_the_certificate() {
    let ring = zp(2, 12);
    for (coeffs, n) in [(vec![-2, 1], 3), (vec![0, 2, 1], 1), (vec![0, 2, 1], 2)] {
        let g = CharIdealGen::from_series(&PowerSeries::from_ints(&ring, &coeffs, 16, 12)).unwrap();
        let expect = match finiteness_certificate(&g, n).unwrap() {
            Finiteness::Certified { .. } => 0,
            Finiteness::NotFinite { .. } => 3,
            Finiteness::Inconclusive(_) => 2,
        };
        let input = json!({"ring": {"p": 2, "prec": 12}, "generator": {"coeffs": coeffs, "tdeg": 16}, "n": n});
        assert_eq!(run(&["module", "finiteness"], &input, &[]).1, expect);
    }
}

#[test]
fn flags_and_environment_agree() {
    let input = json!({"ring": {"p": 5}, "series": {"random": {"degree": 4}}});
    let (a, _) = run(&["--precision", "9", "--tdeg", "10", "--seed", "7", "series", "prep"], &input, &[]);
    let env = [("IWASAWA_PRECISION", "9"), ("IWASAWA_TDEG", "10"), ("IWASAWA_SEED", "7")];
    let (b, _) = run(&["series", "prep"], &input, &env);
    assert_eq!(a, b);
    assert_eq!(a["payload"]["unit"]["tdeg"], 10);
    let expect = digest(&json!({"input": input, "precision": 9, "seed": 7, "tdeg": 10}));
    assert_eq!(a["input_digest"], expect);
    let (c, _) = run(&["--precision", "9", "--tdeg", "10", "--seed", "8", "series", "prep"], &input, &[]);
    assert_ne!(a["payload"], c["payload"]);
}

#[test]
fn out_flag_writes_the_document() {
    let dir = std::env::temp_dir().join(format!("iwasawa-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("ring.json");
    let input = json!({"ring": {"p": 7, "prec": 5}});
    let mut cmd = bin();
    cmd.args(["--out", path.to_str().unwrap(), "ring"]).stdin(Stdio::piped()).stdout(Stdio::piped());
    let mut child = cmd.spawn().unwrap();
    child.stdin.take().unwrap().write_all(input.to_string().as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["payload"]["residue_size"], 7);
    std::fs::remove_dir_all(dir).unwrap();
}
