use crate::outcome::CliError;
use crate::reports;
use crate::CommonOpts;
use betti_core::exactla::LaurentRankParams;
use betti_core::io::ModuleDoc;
use betti_core::iwasawa::harris_check;
use betti_core::Budgets;
use clap::Args;
use std::path::PathBuf;

#[derive(Args)]
pub struct HarrisArgs {
    /// Module document: `{p, d, presentation}`.
    #[arg(long)]
    pub input: PathBuf,
    /// Compute residuals for levels `1..=levels`.
    #[arg(long)]
    pub levels: u32,
    /// Evaluation points per randomized rank.
    #[arg(long, default_value_t = 16)]
    pub trials: u32,
    /// Cap on `p^{id} * max(rows, cols)`.
    #[arg(long)]
    pub truncation_cap: Option<u64>,
    #[command(flatten)]
    pub common: CommonOpts,
}

pub fn run(args: HarrisArgs) -> Result<(), CliError> {
    super::require_levels(args.levels)?;
    let doc: ModuleDoc = serde_json::from_str(&super::read_to_string(&args.input)?)?;
    let module = doc.module()?;
    let mut budgets = Budgets::default();
    if let Some(cap) = args.truncation_cap {
        budgets.truncation_cap = cap;
    }
    let params = LaurentRankParams {
        trials: args.trials,
        ext_degree: None,
        seed: args.common.seed,
    };
    let report = harris_check(&module, args.levels, &params, &budgets)?;
    let case = reports::harris_case_json(&report);
    let name = super::file_stem(&args.input);
    reports::write_json(&args.common.out, &format!("{name}.harris.json"), &case)?;
    println!("rank = {}", report.rank);
    println!("level  index  codim  residual  ratio  included");
    for l in &report.levels {
        println!(
            "{:5}  {:5}  {:5}  {:8}  {:>5}  {}",
            l.level, l.index, l.codim, l.residual, l.ratio, l.included
        );
    }
    println!("verdict: {}", if report.pass { "PASS" } else { "FAIL" });
    if !report.pass {
        return Err(CliError::Verdict("bounded-ratio check failed".into()));
    }
    Ok(())
}
