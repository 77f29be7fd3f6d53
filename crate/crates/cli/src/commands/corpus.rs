use crate::outcome::CliError;
use crate::reports::{self, AlexanderSummary};
use crate::{CacheOpts, CommonOpts};
use betti_core::alexander::{
    alexander_matrix, diagonal_specialization, linking_number, modp_l2_betti_1, predict_vs_tower,
    AlexanderError,
};
use betti_core::exactla::LaurentRankParams;
use betti_core::io::{GroupDoc, LinkDoc, ModuleDoc};
use betti_core::iwasawa::harris_check;
use betti_core::tower::{build_report, run_tower, FieldsSel, TowerOptions};
use betti_core::Budgets;
use clap::Args;
use serde::Deserialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Args)]
pub struct CorpusArgs {
    /// Manifest of named cases with expected verdicts.
    #[arg(long)]
    pub manifest: PathBuf,
    #[command(flatten)]
    pub common: CommonOpts,
    #[command(flatten)]
    pub cache: CacheOpts,
}

#[derive(Deserialize)]
struct ManifestDoc {
    cases: Vec<CaseDoc>,
}

#[derive(Deserialize)]
struct CaseDoc {
    name: String,
    kind: String,
    input: String,
    #[serde(default)]
    prime: Option<u64>,
    #[serde(default)]
    levels: Option<u32>,
    #[serde(default)]
    fields: Option<String>,
    #[serde(default)]
    diagonal: Option<bool>,
    #[serde(default)]
    expect: BTreeMap<String, Value>,
}

struct CaseOutcome {
    name: String,
    pass: bool,
    error: Option<String>,
    diffs: Vec<(String, Value, Value)>,
}

pub fn run(args: CorpusArgs) -> Result<(), CliError> {
    let manifest: ManifestDoc = serde_json::from_str(&super::read_to_string(&args.manifest)?)?;
    let base = args
        .manifest
        .parent()
        .unwrap_or(Path::new("."))
        .to_path_buf();
    let mut outcomes = Vec::new();
    for case in &manifest.cases {
        let outcome = run_case(case, &base, &args);
        let outcome = match outcome {
            Ok(case_json) => evaluate(case, case_json),
            Err(e) => CaseOutcome {
                name: case.name.clone(),
                pass: false,
                error: Some(e.message().to_string()),
                diffs: Vec::new(),
            },
        };
        outcomes.push(outcome);
    }
    let all_pass = outcomes.iter().all(|o| o.pass);
    println!("{:<24} {}", "case", "verdict");
    for o in &outcomes {
        println!("{:<24} {}", o.name, if o.pass { "PASS" } else { "FAIL" });
        if let Some(e) = &o.error {
            println!("    error: {e}");
        }
        for (path, expected, actual) in &o.diffs {
            println!("    {path}: expected {expected}, got {actual}");
        }
    }
    let aggregate = json!({
        "schema_version": 1,
        "pass": all_pass,
        "cases": outcomes.iter().map(|o| json!({
            "name": o.name,
            "pass": o.pass,
            "error": o.error,
            "diffs": o.diffs.iter().map(|(p, e, a)| json!({
                "path": p, "expected": e, "actual": a,
            })).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    });
    reports::write_json(&args.common.out, "corpus_report.json", &aggregate)?;
    if !all_pass {
        let failed: Vec<&str> = outcomes
            .iter()
            .filter(|o| !o.pass)
            .map(|o| o.name.as_str())
            .collect();
        return Err(CliError::Verdict(format!(
            "corpus cases failed: {}",
            failed.join(", ")
        )));
    }
    Ok(())
}

fn evaluate(case: &CaseDoc, case_json: Value) -> CaseOutcome {
    let mut diffs = Vec::new();
    for (path, expected) in &case.expect {
        let actual = reports::resolve_path(&case_json, path)
            .cloned()
            .unwrap_or(Value::Null);
        if &actual != expected {
            diffs.push((path.clone(), expected.clone(), actual));
        }
    }
    CaseOutcome {
        name: case.name.clone(),
        pass: diffs.is_empty(),
        error: None,
        diffs,
    }
}

fn run_case(case: &CaseDoc, base: &Path, args: &CorpusArgs) -> Result<Value, CliError> {
    let input_path = base.join(&case.input);
    let text = super::read_to_string(&input_path)?;
    let seed = args.common.seed;
    let out = &args.common.out;
    let params = LaurentRankParams {
        trials: 16,
        ext_degree: None,
        seed,
    };
    match case.kind.as_str() {
        "tower" => {
            let doc: GroupDoc = serde_json::from_str(&text)?;
            let pres = doc.presentation()?;
            let rep = doc.rep(case.prime)?;
            let complex = doc.complex(&pres)?;
            let fields = match case.fields.as_deref() {
                None | Some("both") => FieldsSel::Both,
                Some("q") => FieldsSel::Q,
                Some("fp") => FieldsSel::Fp,
                Some(other) => {
                    return Err(CliError::Input(format!("unknown fields {other}")))
                }
            };
            let opts = TowerOptions {
                fields,
                seed,
                budgets: Budgets::default(),
                cache_dir: args.cache.resolve(),
            };
            let levels = case
                .levels
                .ok_or_else(|| CliError::Input(format!("case {} needs levels", case.name)))?;
            let table = run_tower(&pres, &rep, &complex, levels, &opts)?;
            let report = build_report(&table, levels, seed, None, 1, opts.cache_dir.as_deref())?;
            let case_json = reports::tower_case_json(&report, &table);
            reports::write_tower_outputs(out, &case.name, &table, &case_json)?;
            Ok(case_json)
        }
        "harris" => {
            let doc: ModuleDoc = serde_json::from_str(&text)?;
            let module = doc.module()?;
            let levels = case
                .levels
                .ok_or_else(|| CliError::Input(format!("case {} needs levels", case.name)))?;
            let report = harris_check(&module, levels, &params, &Budgets::default())?;
            let case_json = reports::harris_case_json(&report);
            reports::write_json(out, &format!("{}.report.json", case.name), &case_json)?;
            Ok(case_json)
        }
        "alexander" => {
            let doc: LinkDoc = serde_json::from_str(&text)?;
            let (pres, ab) = doc.resolve()?;
            let prime = case
                .prime
                .ok_or_else(|| CliError::Input(format!("case {} needs prime", case.name)))?;
            let am = alexander_matrix(&pres, &ab)?;
            let modp = modp_l2_betti_1(&pres, &ab, prime, &params)?;
            let mut diagonal = None;
            let mut degenerate = false;
            let mut linking = None;
            if case.diagonal.unwrap_or(false) {
                match diagonal_specialization(&am) {
                    Ok(r) => {
                        if am.num_vars == 2 {
                            linking = Some(linking_number(&am)?);
                        }
                        diagonal = Some(r);
                    }
                    Err(AlexanderError::DegenerateMatrix) => degenerate = true,
                    Err(e) => return Err(e.into()),
                }
            }
            let case_json = reports::alexander_case_json(&AlexanderSummary {
                prime,
                num_vars: am.num_vars,
                generators: am.generators,
                relators: am.relators,
                modp_l2_betti_1: modp,
                diagonal,
                diagonal_degenerate: degenerate,
                linking_number: linking,
            });
            reports::write_json(out, &format!("{}.report.json", case.name), &case_json)?;
            Ok(case_json)
        }
        "predict" => {
            let doc: LinkDoc = serde_json::from_str(&text)?;
            let (pres, ab) = doc.resolve()?;
            let prime = case
                .prime
                .ok_or_else(|| CliError::Input(format!("case {} needs prime", case.name)))?;
            let levels = case
                .levels
                .ok_or_else(|| CliError::Input(format!("case {} needs levels", case.name)))?;
            let opts = TowerOptions {
                fields: FieldsSel::Both,
                seed,
                budgets: Budgets::default(),
                cache_dir: args.cache.resolve(),
            };
            let (pred, table) = predict_vs_tower(&pres, &ab, prime, None, levels, &opts)?;
            let case_json = reports::predict_case_json(&pred, &table);
            std::fs::create_dir_all(out)?;
            std::fs::write(out.join(format!("{}.csv", case.name)), table.to_csv())?;
            reports::write_json(out, &format!("{}.report.json", case.name), &case_json)?;
            Ok(case_json)
        }
        other => Err(CliError::Input(format!("unknown case kind {other}"))),
    }
}
