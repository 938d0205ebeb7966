//! Regenerates the golden corpus under tests/golden: one input document per
//! case, the expected result document, and a manifest with the exit codes.
//!
//!     cargo run --example golden_corpus

use std::path::Path;

use iwasawa::cli::{render, run_document};
use iwasawa::codec::{scenario_json, Defaults};
use iwasawa::euler::PsiSymbol;
use iwasawa::groups::FiniteAbelianGroup;
use iwasawa::measure::GroupElement;
use iwasawa::padic::{Ring, RingSpec};
use serde_json::{json, Value};

#[path = "support/family.rs"]
mod family;

use family::{three_node, N};

fn cases() -> Vec<(&'static str, &'static str, Value, i32)> {
    let z3 = json!({"p": 3, "prec": 12});
    let z2 = json!({"p": 2, "prec": 12});
    let z5 = json!({"p": 5, "prec": 10});
    let ring = Ring::new(RingSpec::zp(3, N)).unwrap();
    let fam = three_node(&ring);
    let psi = vec![
        PsiSymbol { node: "l1".into(), ideal: "a".into(), norm: 2, sigma: GroupElement::new(vec![1], 1) },
        PsiSymbol { node: "(1)".into(), ideal: "b".into(), norm: 4, sigma: GroupElement::new(vec![], 1) },
    ];
    let mut with_j = fam.clone();
    let j = psi[0].element(&FiniteAbelianGroup::cyclic(2), &ring, fam.measures["l1"].len(), N).unwrap();
    with_j.poset.nodes[1].j_generators.push(j);
    let scenario = scenario_json(&with_j, &psi);
    let mut broken = scenario.clone();
    broken["measures"]["l1l2"]["series"]["0,0"]["coeffs"][0] = json!(1);
    let mut upper = scenario.clone();
    upper["nodes"].as_array_mut().unwrap().remove(0);
    upper["edges"].as_array_mut().unwrap().retain(|e| e["lower"] != "(1)");
    upper["psi"] = json!([]);
    upper.as_object_mut().unwrap().remove("trivial");
    let mut no_aux = scenario.clone();
    no_aux["nodes"][0]["frobenius"]["l1"]["gamma"] = json!(3);

    let dz4 = json!({"group": [4], "values": [1, 2, 3, 4]});
    let mu_z2 = json!({"delta": [2], "series": {"0": {"coeffs": [1, 2, 0, 1], "tdeg": 16}, "1": {"coeffs": [5, 0, 3], "tdeg": 16}}});
    let sign_pres = json!({"delta": [2], "rows": [[{"0": {"coeffs": [-4, 1], "tdeg": 16}, "1": {"coeffs": [2, 1], "tdeg": 16}}]]});
    let random_batch: Vec<Value> = (0..6)
        .map(|i| {
            let p = [2, 3, 5][i % 3];
            json!({"ring": {"p": p, "prec": 10}, "series": {"random": {"degree": 3 + i}, "tdeg": 16}})
        })
        .collect();

    vec![
        ("ring_z5", "ring", json!({"ring": z5}), 0),
        ("ring_wild", "ring", json!({"ring": {"p": 2, "prec": 8, "eisenstein": [[2], [2], [1]]}}), 0),
        ("ring_unramified", "ring", json!({"ring": {"p": 3, "prec": 6, "unram": [1, 0, 1]}}), 0),
        ("ring_malformed", "ring", json!({"ring": {"p": "two"}}), 1),
        ("ring_reducible", "ring", json!({"ring": {"p": 2, "unram": [1, 0, 1]}}), 1),
        ("series_prep", "series.prep", json!({"ring": z3, "series": {"coeffs": [-3, 0, 1], "tdeg": 16}}), 0),
        ("series_prep_mu", "series.prep", json!({"ring": z3, "series": {"coeffs": [9, 3, 0, 9, 3], "tdeg": 16}}), 0),
        ("series_prep_zero", "series.prep", json!({"ring": z3, "series": {"coeffs": [0], "tdeg": 16}}), 2),
        ("series_prep_digit", "series.prep", json!({"ring": z3, "series": {"coeffs": [{"coords": [[3]]}], "tdeg": 8}}), 1),
        ("series_prep_batch", "series.prep", json!({"batch": random_batch}), 0),
        ("series_eval_at", "series.eval", json!({"ring": z3, "series": [1, 1, 1], "at": 3}), 0),
        ("series_eval_root", "series.eval", json!({"ring": z3, "series": {"coeffs": [2, 1], "tdeg": 16}, "root": {"order": 3}}), 0),
        ("series_order", "series.order", json!({"ring": z2, "series": {"coeffs": [-2, 1], "tdeg": 16}, "n": 3}), 0),
        ("series_order_omega", "series.order", json!({"ring": z2, "series": {"coeffs": [0, 2, 1], "tdeg": 16}, "n": 1}), 3),
        ("series_coprime", "series.coprime", json!({"ring": z2, "f": {"coeffs": [-2, 1], "tdeg": 16}, "g": {"coeffs": [0, 2, 1], "tdeg": 16}}), 0),
        ("series_coprime_not", "series.coprime", json!({"ring": z3, "f": {"coeffs": [0, 3, 1], "tdeg": 16}, "g": {"coeffs": [0, 1], "tdeg": 16}}), 3),
        ("dist_push", "dist.push", json!({"ring": z5, "morphism": {"domain": [4], "codomain": [2], "images": [[1]]}, "dist": dz4}), 0),
        ("dist_pull", "dist.pull", json!({"ring": z5, "morphism": {"domain": [4], "codomain": [2], "images": [[1]]}, "dist": {"group": [2], "values": [7, 9]}}), 0),
        ("dist_pull_preimage", "dist.pull", json!({"ring": z5, "mode": "preimage", "morphism": {"domain": [4], "codomain": [2], "images": [[1]]}, "dist": {"group": [4], "values": [1, 2, 1, 2]}}), 0),
        ("dist_conv", "dist.conv", json!({"ring": z5, "a": dz4, "b": {"group": [4], "values": [0, 1, 0, 0]}}), 0),
        ("measure_reduce", "measure.reduce", json!({"ring": z3, "measure": mu_z2, "n": 1}), 0),
        ("measure_push", "measure.push", json!({"ring": z3, "measure": mu_z2, "morphism": {"domain": [2], "codomain": [], "images": [[]]}}), 0),
        ("measure_pull", "measure.pull", json!({"ring": z3, "measure": mu_z2, "morphism": {"domain": [2, 3], "codomain": [2], "images": [[1], [0]]}}), 0),
        ("measure_chi", "measure.chi", json!({"ring": z3, "measure": mu_z2, "character": {"levels": [1]}}), 0),
        ("measure_twist", "measure.twist", json!({"ring": z3, "measure": mu_z2, "character": {"levels": [1]}, "root": {"order": 3, "power": 2}}), 0),
        ("measure_pseudo_mul", "measure.pseudo-mul", json!({"ring": z3, "pseudo": {"num": {"delta": [], "series": {"": {"coeffs": [3, 1, 4], "tdeg": 16}}}, "den": {"coeffs": [0, 1], "tdeg": 16}}, "alpha": {"delta": [], "series": {"": {"coeffs": [0, 3, 3, 1], "tdeg": 16}}}}), 0),
        ("measure_pseudo_mul_unit", "measure.pseudo-mul", json!({"ring": z3, "pseudo": {"num": {"delta": [], "series": {"": {"coeffs": [3, 1, 4], "tdeg": 16}}}, "den": {"coeffs": [0, 1], "tdeg": 16}}, "alpha": {"delta": [], "series": {"": {"coeffs": [1], "tdeg": 16}}}}), 1),
        ("module_char", "module.char", json!({"ring": z3, "presentation": {"rows": [[{"coeffs": [-3, 1], "tdeg": 16}, {"coeffs": [0], "tdeg": 16}], [{"coeffs": [1], "tdeg": 16}, {"coeffs": [9, 0, 1], "tdeg": 16}]]}}), 0),
        ("module_chi", "module.chi", json!({"ring": z5, "presentation": sign_pres, "character": {"levels": [1]}}), 0),
        ("module_chipart", "module.chipart", json!({"ring": z5, "presentation": sign_pres}), 0),
        ("module_chipart_two", "module.chipart", json!({"ring": z2, "presentation": {"delta": [2], "rows": [[{"0": {"coeffs": [-1], "tdeg": 16}, "1": {"coeffs": [1], "tdeg": 16}}], [{"coeffs": [4], "tdeg": 16}]]}}), 0),
        ("module_finiteness", "module.finiteness", json!({"ring": z2, "generator": {"coeffs": [-2, 1], "tdeg": 16}, "n": 3}), 0),
        ("module_finiteness_omega", "module.finiteness", json!({"ring": z2, "generator": {"coeffs": [0, 2, 1], "tdeg": 16}, "n": 1}), 3),
        ("module_finiteness_zero", "module.finiteness", json!({"ring": z2, "generator": {"coeffs": [0], "prec": 4, "tdeg": 16}, "n": 1}), 2),
        ("euler_check", "euler.check", json!({"ring": z3, "scenario": scenario}), 0),
        ("euler_check_perturbed", "euler.check", json!({"ring": z3, "scenario": broken}), 1),
        ("euler_derive", "euler.derive", json!({"ring": z3, "scenario": upper, "top": "l1l2", "master": scenario["measures"]["l1l2"]}), 0),
        ("euler_derive_pseudo", "euler.derive", json!({"ring": z3, "scenario": scenario, "top": "l1l2", "master": scenario["measures"]["l1l2"]}), 1),
        ("euler_psi", "euler.psi", json!({"ring": z3, "scenario": scenario}), 0),
        ("euler_lp", "euler.lp", json!({"ring": z3, "scenario": scenario, "node": "l1", "character": {"levels": [1]}, "root": {"order": 3}, "imprimitive": {"prime": "l2"}}), 0),
        ("euler_pipeline_sign", "euler.pipeline", json!({"ring": z3, "scenario": scenario, "character": {"levels": [1]}, "conductor": "l1", "n": 2, "aux": "l2", "aux_node": "l1l2"}), 0),
        ("euler_pipeline_trivial", "euler.pipeline", json!({"ring": z3, "scenario": scenario, "character": {"levels": []}, "conductor": "(1)", "n": 1, "aux": "l1", "aux_node": "l1"}), 0),
        ("euler_pipeline_no_aux", "euler.pipeline", json!({"ring": z3, "scenario": no_aux, "character": {"levels": []}, "conductor": "(1)", "n": 1, "aux": "l1", "aux_node": "l1"}), 2),
    ]
}

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden");
    std::fs::create_dir_all(&dir).unwrap();
    let defaults = Defaults::default();
    let mut manifest = Vec::new();
    for (name, verb, input, exit) in cases() {
        let (doc, code) = run_document(verb, &input, &defaults, 1);
        assert_eq!(code, exit, "{name}: {}", render(&doc));
        std::fs::write(dir.join(format!("{name}.json")), render(&input)).unwrap();
        std::fs::write(dir.join(format!("{name}.expected.json")), render(&doc)).unwrap();
        manifest.push(json!({ "exit": exit, "name": name, "verb": verb }));
        println!("{name:<28} {verb:<20} exit {exit}");
    }
    std::fs::write(dir.join("manifest.json"), render(&Value::Array(manifest))).unwrap();
}
