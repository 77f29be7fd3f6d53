use crate::outcome::CliError;
use crate::reports;
use crate::CommonOpts;
use betti_core::exactla::{rank_fp, rank_laurent, rank_q, snf, LaurentRankParams};
use betti_core::io::{matrix_from_triples, matrix_to_triples, MatrixDoc};
use betti_core::Budgets;
use clap::{Args, ValueEnum};
use serde_json::json;
use std::path::PathBuf;

#[derive(Clone, Copy, PartialEq, ValueEnum)]
pub enum RankField {
    Q,
    Fp,
    Laurent,
}

#[derive(Args)]
pub struct RankArgs {
    /// Matrix document (.json) or triple dump (first line `rows cols`, then
    /// `row col value` lines).
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = RankField::Q)]
    pub field: RankField,
    /// Required for fp and laurent fields.
    #[arg(long)]
    pub prime: Option<u64>,
    #[arg(long, default_value_t = 16)]
    pub trials: u32,
    /// Extension degree for the Laurent kernel (auto when omitted).
    #[arg(long)]
    pub ext_degree: Option<u32>,
    /// Also emit Smith normal form invariant factors (integer input only).
    #[arg(long)]
    pub snf: bool,
    /// Echo the matrix in the textual triple format.
    #[arg(long)]
    pub dump_triples: bool,
    #[command(flatten)]
    pub common: CommonOpts,
}

pub fn run(args: RankArgs) -> Result<(), CliError> {
    let budgets = Budgets::default();
    if let Some(p) = args.prime {
        super::require_prime(p)?;
    }
    let text = super::read_to_string(&args.input)?;
    let is_json = args
        .input
        .extension()
        .map(|e| e == "json")
        .unwrap_or(false);
    let name = super::file_stem(&args.input);
    let mut out = json!({ "input": args.input.display().to_string() });
    if args.field == RankField::Laurent {
        let doc: MatrixDoc = serde_json::from_str(&text)?;
        let m = doc.laurent_matrix()?;
        let p = args
            .prime
            .ok_or_else(|| CliError::Input("laurent rank needs --prime".into()))?;
        let params = LaurentRankParams {
            trials: args.trials,
            ext_degree: args.ext_degree,
            seed: args.common.seed,
        };
        let r = rank_laurent(&m, p, &params)?;
        println!("rank = {r}");
        out["rank"] = json!(r);
        out["field"] = json!(format!("F_{p}(t_1..t_{})", m.num_vars));
    } else {
        let m = if is_json {
            let doc: MatrixDoc = serde_json::from_str(&text)?;
            doc.int_matrix()?
        } else {
            matrix_from_triples(&text)?
        };
        let r = match args.field {
            RankField::Q => rank_q(&m, args.common.seed, budgets.bareiss_threshold),
            RankField::Fp => {
                let p = args
                    .prime
                    .ok_or_else(|| CliError::Input("fp rank needs --prime".into()))?;
                rank_fp(&m.reduce_mod(p))
            }
            RankField::Laurent => unreachable!(),
        };
        println!("rank = {r}");
        out["rank"] = json!(r);
        out["field"] = match args.field {
            RankField::Q => json!("Q"),
            RankField::Fp => json!(format!("F_{}", args.prime.unwrap())),
            RankField::Laurent => unreachable!(),
        };
        if args.snf {
            let factors = snf(&m, budgets.snf_cap)?;
            let strs: Vec<String> = factors.iter().map(|f| f.to_string()).collect();
            println!("snf = [{}]", strs.join(", "));
            out["snf"] = json!(strs);
        }
        if args.dump_triples {
            print!("{}", matrix_to_triples(&m));
        }
    }
    reports::write_json(&args.common.out, &format!("{name}.rank.json"), &out)?;
    Ok(())
}
