use crate::outcome::CliError;
use crate::reports;
use crate::{CacheOpts, CommonOpts};
use betti_core::io::GroupDoc;
use betti_core::tower::{build_report, run_tower, FieldsSel, TowerOptions};
use betti_core::Budgets;
use clap::{Args, ValueEnum};
use std::path::PathBuf;

#[derive(Clone, Copy, ValueEnum)]
pub enum FieldsArg {
    Q,
    Fp,
    Both,
}

impl From<FieldsArg> for FieldsSel {
    fn from(f: FieldsArg) -> FieldsSel {
        match f {
            FieldsArg::Q => FieldsSel::Q,
            FieldsArg::Fp => FieldsSel::Fp,
            FieldsArg::Both => FieldsSel::Both,
        }
    }
}

#[derive(Args)]
pub struct TowerArgs {
    /// Input document: presentation, representation, complex.
    #[arg(long)]
    pub input: PathBuf,
    /// The prime; must match the document's rep.p when that is set.
    #[arg(long)]
    pub prime: u64,
    /// Deepest level to compute.
    #[arg(long)]
    pub levels: u32,
    #[arg(long, value_enum, default_value_t = FieldsArg::Both)]
    pub fields: FieldsArg,
    /// Cap on finite-quotient size.
    #[arg(long)]
    pub element_cap: Option<usize>,
    /// First level of the p-power subtower used for monotonicity checks.
    #[arg(long, default_value_t = 1)]
    pub monotonicity_base: u32,
    /// Claimed dimension, reported next to the estimate (never trusted).
    #[arg(long)]
    pub user_d: Option<f64>,
    #[command(flatten)]
    pub common: CommonOpts,
    #[command(flatten)]
    pub cache: CacheOpts,
}

pub fn run(args: TowerArgs) -> Result<(), CliError> {
    super::require_prime(args.prime)?;
    super::require_levels(args.levels)?;
    let doc: GroupDoc = serde_json::from_str(&super::read_to_string(&args.input)?)?;
    let pres = doc.presentation()?;
    let rep = doc.rep(Some(args.prime))?;
    let complex = doc.complex(&pres)?;
    let mut budgets = Budgets::default();
    if let Some(cap) = args.element_cap {
        budgets.element_cap = cap;
    }
    let opts = TowerOptions {
        fields: args.fields.into(),
        seed: args.common.seed,
        budgets,
        cache_dir: args.cache.resolve(),
    };
    let table = run_tower(&pres, &rep, &complex, args.levels, &opts)?;
    let report = build_report(
        &table,
        args.levels,
        opts.seed,
        args.user_d,
        args.monotonicity_base,
        opts.cache_dir.as_deref(),
    )?;
    let case = reports::tower_case_json(&report, &table);
    let name = super::file_stem(&args.input);
    reports::write_tower_outputs(&args.common.out, &name, &table, &case)?;
    print!("{}", table.to_csv());
    for d in &report.degrees {
        let verdicts: Vec<String> = [("q", &d.exponent_q), ("fp", &d.exponent_fp)]
            .iter()
            .filter_map(|(tag, e)| {
                e.as_ref()
                    .map(|f| format!("{tag}: {:?} (slope {:?})", f.verdict, f.slope))
            })
            .collect();
        println!("degree {}: {}", d.degree, verdicts.join(", "));
    }
    if let Some(d) = &report.dim_estimate {
        println!("d_hat = {} (stable: {})", d.d_hat, d.stable);
    }
    if let Some((level, msg)) = &report.failed_level {
        println!("partial: level {level} failed ({msg})");
    }
    if !report.consistent {
        return Err(CliError::Verdict(
            "error-exponent verdict inconsistent".into(),
        ));
    }
    Ok(())
}
