//! Case-report JSON builders shared by the single-run commands and the
//! corpus runner. Everything here must serialize deterministically: no
//! timestamps, no durations, no map types with unstable order.

use betti_core::alexander::{DiagonalReport, PredictionReport};
use betti_core::iwasawa::HarrisReport;
use betti_core::tower::{BettiTable, TowerReport};
use serde_json::{json, Map, Value};
use std::path::Path;

/// Per-degree column arrays keyed `b_q_k` / `b_fp_k` / `coker_*_k`, plus the
/// shared `levels` and `index` arrays. Gives manifests something flat to
/// point expectations at.
pub fn table_columns(table: &BettiTable) -> Value {
    let mut cols = Map::new();
    let indices = table.indices();
    cols.insert(
        "levels".into(),
        Value::from(indices.iter().map(|&(l, _)| l).collect::<Vec<_>>()),
    );
    cols.insert(
        "index".into(),
        Value::from(indices.iter().map(|&(_, i)| i).collect::<Vec<_>>()),
    );
    for k in 0..=table.max_degree() {
        let q: Vec<u64> = table.column(k, false).iter().map(|&(_, b)| b).collect();
        let fp: Vec<u64> = table.column(k, true).iter().map(|&(_, b)| b).collect();
        if !q.is_empty() {
            cols.insert(format!("b_q_{k}"), Value::from(q));
        }
        if !fp.is_empty() {
            cols.insert(format!("b_fp_{k}"), Value::from(fp));
        }
    }
    Value::Object(cols)
}

pub fn tower_case_json(report: &TowerReport, table: &BettiTable) -> Value {
    json!({
        "kind": "tower",
        "report": report,
        "columns": table_columns(table),
    })
}

pub fn harris_case_json(report: &HarrisReport) -> Value {
    json!({
        "kind": "harris",
        "report": report,
        "residuals": report.levels.iter().map(|l| l.residual).collect::<Vec<_>>(),
        "ratios": report.levels.iter().map(|l| l.ratio.to_string()).collect::<Vec<_>>(),
        "pass": report.pass,
    })
}

pub struct AlexanderSummary {
    pub prime: u64,
    pub num_vars: usize,
    pub generators: usize,
    pub relators: usize,
    pub modp_l2_betti_1: u64,
    pub diagonal: Option<DiagonalReport>,
    pub diagonal_degenerate: bool,
    pub linking_number: Option<i64>,
}

pub fn alexander_case_json(s: &AlexanderSummary) -> Value {
    json!({
        "kind": "alexander",
        "p": s.prime,
        "num_vars": s.num_vars,
        "generators": s.generators,
        "relators": s.relators,
        "modp_l2_betti_1": s.modp_l2_betti_1,
        "diagonal_degenerate": s.diagonal_degenerate,
        "minor_gcd": s.diagonal.as_ref().map(|d| d.minor_gcd.to_string()),
        "delta": s.diagonal.as_ref().map(|d| d.delta.to_string()),
        "linking_number": s.linking_number,
    })
}

pub fn predict_case_json(report: &PredictionReport, table: &BettiTable) -> Value {
    json!({
        "kind": "predict",
        "report": report,
        "columns": table_columns(table),
    })
}

/// Write `<name>.csv` and `<name>.report.json` under `out`.
pub fn write_tower_outputs(
    out: &Path,
    name: &str,
    table: &BettiTable,
    case_json: &Value,
) -> std::io::Result<()> {
    std::fs::create_dir_all(out)?;
    std::fs::write(out.join(format!("{name}.csv")), table.to_csv())?;
    let pretty = serde_json::to_string_pretty(case_json).expect("report serializes");
    std::fs::write(out.join(format!("{name}.report.json")), pretty + "\n")?;
    Ok(())
}

pub fn write_json(out: &Path, file: &str, value: &Value) -> std::io::Result<()> {
    std::fs::create_dir_all(out)?;
    let pretty = serde_json::to_string_pretty(value).expect("report serializes");
    std::fs::write(out.join(file), pretty + "\n")?;
    Ok(())
}

/// Resolve a dotted path (`report.degrees.1.limit_fp.bracket_hi`) inside a
/// JSON value; array segments are numeric.
pub fn resolve_path<'v>(v: &'v Value, path: &str) -> Option<&'v Value> {
    path.split('.').try_fold(v, |acc, key| match acc {
        Value::Object(map) => map.get(key),
        Value::Array(arr) => key.parse::<usize>().ok().and_then(|i| arr.get(i)),
        _ => None,
    })
}
