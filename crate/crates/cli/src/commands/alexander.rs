use crate::outcome::CliError;
use crate::reports::{self, AlexanderSummary};
use crate::{CacheOpts, CommonOpts};
use betti_core::alexander::{
    alexander_matrix, diagonal_specialization, linking_number, modp_l2_betti_1, predict_vs_tower,
    AlexanderError,
};
use betti_core::exactla::LaurentRankParams;
use betti_core::io::LinkDoc;
use betti_core::tower::{FieldsSel, TowerOptions};
use clap::Args;
use std::path::PathBuf;

#[derive(Args)]
pub struct AlexanderArgs {
    /// Link document: presentation + meridian images, or a braid word.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub prime: u64,
    /// Also report the diagonal specialization (and the linking number when
    /// the link has two components).
    #[arg(long)]
    pub diagonal: bool,
    /// Run the tower this deep and compare against the predictions.
    #[arg(long)]
    pub tower_levels: Option<u32>,
    #[arg(long, default_value_t = 16)]
    pub trials: u32,
    #[command(flatten)]
    pub common: CommonOpts,
    #[command(flatten)]
    pub cache: CacheOpts,
}

pub fn run(args: AlexanderArgs) -> Result<(), CliError> {
    super::require_prime(args.prime)?;
    if let Some(levels) = args.tower_levels {
        super::require_levels(levels)?;
    }
    let doc: LinkDoc = serde_json::from_str(&super::read_to_string(&args.input)?)?;
    let (pres, ab) = doc.resolve()?;
    let params = LaurentRankParams {
        trials: args.trials,
        ext_degree: None,
        seed: args.common.seed,
    };
    let am = alexander_matrix(&pres, &ab)?;
    let modp = modp_l2_betti_1(&pres, &ab, args.prime, &params)?;
    println!(
        "generators = {}, relators = {}, variables = {}",
        am.generators, am.relators, am.num_vars
    );
    println!("modp_l2_betti_1 (p = {}) = {}", args.prime, modp);
    let mut diagonal = None;
    let mut degenerate = false;
    let mut linking = None;
    if args.diagonal {
        match diagonal_specialization(&am) {
            Ok(report) => {
                println!("minor gcd = {}", report.minor_gcd);
                println!("delta = {}", report.delta);
                if am.num_vars == 2 {
                    let lk = linking_number(&am)?;
                    println!("linking number = {}", lk);
                    linking = Some(lk);
                }
                diagonal = Some(report);
            }
            Err(AlexanderError::DegenerateMatrix) => {
                println!("diagonal specialization degenerate (all minors zero)");
                degenerate = true;
            }
            Err(e) => return Err(e.into()),
        }
    }
    let summary = AlexanderSummary {
        prime: args.prime,
        num_vars: am.num_vars,
        generators: am.generators,
        relators: am.relators,
        modp_l2_betti_1: modp,
        diagonal,
        diagonal_degenerate: degenerate,
        linking_number: linking,
    };
    let name = super::file_stem(&args.input);
    let mut case = reports::alexander_case_json(&summary);
    let mut failed_verdict = None;
    if let Some(levels) = args.tower_levels {
        let opts = TowerOptions {
            fields: FieldsSel::Both,
            seed: args.common.seed,
            budgets: Default::default(),
            cache_dir: args.cache.resolve(),
        };
        let (pred, table) = predict_vs_tower(&pres, &ab, args.prime, None, levels, &opts)?;
        println!(
            "tower comparison: fp predicted {}, fp bracket [{}, {}], pass = {}",
            pred.fp_predicted, pred.fp_observed.bracket_lo, pred.fp_observed.bracket_hi, pred.pass
        );
        if !pred.pass {
            failed_verdict = Some("tower observation disagrees with prediction".to_string());
        }
        case["predict"] = reports::predict_case_json(&pred, &table);
        std::fs::create_dir_all(&args.common.out)?;
        std::fs::write(
            args.common.out.join(format!("{name}.csv")),
            table.to_csv(),
        )?;
    }
    reports::write_json(&args.common.out, &format!("{name}.alexander.json"), &case)?;
    match failed_verdict {
        Some(msg) => Err(CliError::Verdict(msg)),
        None => Ok(()),
    }
}
