//! Cross-module integration: towers driven end to end from presentations,
//! with the field-comparison and prediction invariants.

use betti_core::alexander::{
    modp_l2_betti_1, predict_vs_tower, unipotent_rep, AbelianizationMap,
};
use betti_core::chain::EquivariantComplex;
use betti_core::exactla::LaurentRankParams;
use betti_core::fpgroup::{GroupPresentation, PadicRep};
use betti_core::tower::{run_tower, FieldsSel, Rat, TowerOptions};
use betti_core::word::Word;
use betti_core::DEFAULT_SEED;
use num_rational::Ratio;

fn opts() -> TowerOptions {
    TowerOptions {
        fields: FieldsSel::Both,
        seed: DEFAULT_SEED,
        budgets: Default::default(),
        cache_dir: None,
    }
}

fn families() -> Vec<(&'static str, GroupPresentation, AbelianizationMap, u64, u32)> {
    let circle = GroupPresentation::new(vec!["a".into()], vec![]).unwrap();
    let wedge = GroupPresentation::new(vec!["a".into(), "b".into()], vec![]).unwrap();
    let torus = GroupPresentation::new(
        vec!["a".into(), "b".into()],
        vec![Word::new([1, 2, -1, -2])],
    )
    .unwrap();
    let trefoil = GroupPresentation::new(
        vec!["a".into(), "b".into()],
        vec![Word::new([1, 2, 1, -2, -1, -2])],
    )
    .unwrap();
    vec![
        (
            "circle",
            circle,
            AbelianizationMap {
                rank: 1,
                images: vec![vec![1]],
            },
            2,
            4,
        ),
        (
            "wedge",
            wedge.clone(),
            AbelianizationMap {
                rank: 2,
                images: vec![vec![1, 0], vec![0, 1]],
            },
            2,
            3,
        ),
        (
            "torus",
            torus,
            AbelianizationMap {
                rank: 2,
                images: vec![vec![1, 0], vec![0, 1]],
            },
            3,
            2,
        ),
        (
            "trefoil",
            trefoil,
            AbelianizationMap {
                rank: 1,
                images: vec![vec![1], vec![1]],
            },
            2,
            4,
        ),
    ]
}

#[test]
fn fp_betti_dominates_rational_betti_rowwise() {
    use betti_core::tower::{estimate_limit, LimitMode};
    for (name, pres, ab, p, levels) in families() {
        let rep = unipotent_rep(&ab, p, levels);
        let complex = EquivariantComplex::presentation_complex(&pres);
        let table = run_tower(&pres, &rep, &complex, levels, &opts()).unwrap();
        for row in &table.rows {
            let (q, fp) = (row.b_q.unwrap(), row.b_fp.unwrap());
            assert!(
                fp >= q,
                "{name}: degree {} level {}: b_fp {} < b_q {}",
                row.degree,
                row.level,
                fp,
                q
            );
        }
        // and the estimated limits dominate degree by degree
        for k in 0..=table.max_degree() {
            let eq = estimate_limit(&table.column(k, false), LimitMode::Q).unwrap();
            let efp = estimate_limit(&table.column(k, true), LimitMode::Fp).unwrap();
            assert!(
                efp.beta_hat.0 >= eq.beta_hat.0,
                "{name} degree {k}: fp estimate below rational estimate"
            );
        }
    }
}

#[test]
fn fp_limit_bracket_dominates_laurent_prediction() {
    // the normalized F_p column upper bracket must sit at or above the
    // Laurent-rank prediction, and the affine-detected slope must hit it
    // exactly on these families
    for (name, pres, ab, p, levels) in families() {
        let params = LaurentRankParams {
            seed: DEFAULT_SEED,
            ..LaurentRankParams::default()
        };
        let predicted = modp_l2_betti_1(&pres, &ab, p, &params).unwrap();
        let (report, _table) =
            predict_vs_tower(&pres, &ab, p, None, levels, &opts()).unwrap();
        assert_eq!(report.fp_predicted, predicted);
        let pred = Ratio::from_integer(predicted as i64);
        assert!(
            report.fp_observed.bracket_hi.0 >= pred,
            "{name}: bracket high below prediction"
        );
        assert!(report.fp_observed.exact_affine, "{name}");
        assert_eq!(report.fp_observed.beta_hat.0, pred, "{name}");
        assert!(report.pass, "{name}");
    }
}

#[test]
fn wedge_prediction_is_one() {
    let pres = GroupPresentation::new(vec!["a".into(), "b".into()], vec![]).unwrap();
    let ab = AbelianizationMap {
        rank: 2,
        images: vec![vec![1, 0], vec![0, 1]],
    };
    let (report, table) = predict_vs_tower(&pres, &ab, 2, None, 3, &opts()).unwrap();
    assert_eq!(report.fp_predicted, 1);
    assert_eq!(report.fp_observed.beta_hat, Rat::new(1, 1));
    assert_eq!(report.q_predicted_zero, Some(false));
    assert_eq!(report.q_match, Some(true));
    assert!(report.pass);
    assert_eq!(
        table.column(1, true),
        vec![(4, 5), (16, 17), (64, 65)]
    );
}

#[test]
fn user_supplied_rep_is_validated_against_abelianization() {
    let pres = GroupPresentation::new(vec!["a".into()], vec![]).unwrap();
    let ab = AbelianizationMap {
        rank: 1,
        images: vec![vec![1]],
    };
    let good = unipotent_rep(&ab, 2, 3);
    assert!(predict_vs_tower(&pres, &ab, 2, Some(&good), 3, &opts()).is_ok());
    // wrong superdiagonal entry: not the prescribed unipotent for image 1
    let bad = PadicRep {
        p: 2,
        n: 2,
        images: vec![vec![vec![1, 3], vec![0, 1]]],
        max_level: 3,
    };
    assert!(predict_vs_tower(&pres, &ab, 2, Some(&bad), 3, &opts()).is_err());
}

#[test]
fn explicit_complex_matches_presentation_complex() {
    // the circle fed as an explicit equivariant complex gives the same tower
    use betti_core::chain::{GroupRingElement, GroupRingMatrix};
    let pres = GroupPresentation::new(vec!["a".into()], vec![]).unwrap();
    let rep = unipotent_rep(
        &AbelianizationMap {
            rank: 1,
            images: vec![vec![1]],
        },
        2,
        4,
    );
    let mut d1 = GroupRingMatrix::zero(1, 1);
    d1.set(0, 0, GroupRingElement::gen_minus_one(1));
    let explicit = EquivariantComplex::new(vec![1, 1], vec![d1]).unwrap();
    let auto = EquivariantComplex::presentation_complex(&pres);
    let t1 = run_tower(&pres, &rep, &explicit, 4, &opts()).unwrap();
    let t2 = run_tower(&pres, &rep, &auto, 4, &opts()).unwrap();
    assert_eq!(t1.rows, t2.rows);
}
