use fpqual_core::evaluation::{
    compute_eer, error_at_operating_point, pearson_correlation, rejection_sweep, separation_statistic,
    OperatingPoint, OperatingRates, QualityKey, ScoreKind, ScoreRecord, ScoreSet,
};
use fpqual_core::Error;
use proptest::prelude::*;

/// Error counts at threshold `t`, counted directly from the raw lists.
fn counts(genuine: &[f64], impostor: &[f64], t: f64) -> (usize, usize) {
    let fa = impostor.iter().filter(|&&s| s >= t).count();
    let fr = genuine.iter().filter(|&&s| s < t).count();
    (fa, fr)
}

/// Every distinct observed score, ascending.
fn thresholds(genuine: &[f64], impostor: &[f64]) -> Vec<f64> {
    let mut t: Vec<f64> = genuine.iter().chain(impostor).copied().collect();
    t.sort_by(f64::total_cmp);
    t.dedup();
    t
}

fn brute_eer(genuine: &[f64], impostor: &[f64]) -> f64 {
    let (ng, ni) = (genuine.len() as f64, impostor.len() as f64);
    let mut best: Option<(usize, (usize, usize))> = None;
    for t in thresholds(genuine, impostor) {
        let (fa, fr) = counts(genuine, impostor, t);
        // |fa/ni − fr/ng| as an exact rational with denominator ni·ng.
        let num = (fa * genuine.len()).abs_diff(fr * impostor.len());
        match best {
            Some((b, _)) if b <= num => {}
            _ => best = Some((num, (fa, fr))),
        }
    }
    let (_, (fa, fr)) = best.unwrap();
    0.5 * (fa as f64 / ni + fr as f64 / ng)
}

/// Smallest FRR over all thresholds (including "accept nothing") whose FAR ≤ alpha.
fn brute_frr_at_far(genuine: &[f64], impostor: &[f64], alpha: f64) -> f64 {
    let mut candidates = thresholds(genuine, impostor);
    candidates.push(f64::INFINITY);
    candidates
        .into_iter()
        .map(|t| counts(genuine, impostor, t))
        .filter(|&(fa, _)| fa as f64 / impostor.len() as f64 <= alpha)
        .map(|(_, fr)| fr as f64 / genuine.len() as f64)
        .fold(f64::INFINITY, f64::min)
}

/// Smallest FAR over all thresholds whose FRR ≤ alpha.
fn brute_far_at_frr(genuine: &[f64], impostor: &[f64], alpha: f64) -> f64 {
    thresholds(genuine, impostor)
        .into_iter()
        .map(|t| counts(genuine, impostor, t))
        .filter(|&(_, fr)| fr as f64 / genuine.len() as f64 <= alpha)
        .map(|(fa, _)| fa as f64 / impostor.len() as f64)
        .fold(f64::INFINITY, f64::min)
}

fn score_set(genuine: &[f64], impostor: &[f64]) -> ScoreSet {
    let records = genuine
        .iter()
        .map(|&s| ScoreRecord::new(ScoreKind::Genuine, s, 1.0, 1.0))
        .chain(impostor.iter().map(|&s| ScoreRecord::new(ScoreKind::Impostor, s, 1.0, 1.0)))
        .collect();
    ScoreSet::new("prop", vec![], records).unwrap()
}

/// Scores on a coarse grid so that ties within and across classes are common.
fn scores(max: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((0u32..40).prop_map(|v| v as f64 / 4.0), 1..max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn eer_matches_brute_force(genuine in scores(100), impostor in scores(100)) {
        let set = score_set(&genuine, &impostor);
        prop_assert_eq!(compute_eer(&set).unwrap(), brute_eer(&genuine, &impostor));
    }

    #[test]
    fn operating_points_match_brute_force(
        genuine in scores(100),
        impostor in scores(100),
        alpha in prop::sample::select(vec![0.0, 0.01, 0.05, 0.1, 0.25, 0.5, 1.0]),
    ) {
        let set = score_set(&genuine, &impostor);
        let far = error_at_operating_point(&set, OperatingPoint::Far(alpha));
        if alpha < 1.0 / impostor.len() as f64 {
            prop_assert!(matches!(far, Err(Error::UnattainableRate { .. })), "{far:?}");
        } else {
            prop_assert_eq!(far.unwrap(), brute_frr_at_far(&genuine, &impostor, alpha));
        }
        let frr = error_at_operating_point(&set, OperatingPoint::Frr(alpha));
        if alpha < 1.0 / genuine.len() as f64 {
            prop_assert!(matches!(frr, Err(Error::UnattainableRate { .. })), "{frr:?}");
        } else {
            prop_assert_eq!(frr.unwrap(), brute_far_at_frr(&genuine, &impostor, alpha));
        }
    }

    #[test]
    fn unrejected_curve_point_equals_whole_set_rates(genuine in scores(100), impostor in scores(100)) {
        let set = score_set(&genuine, &impostor);
        let curve = rejection_sweep(&set, &QualityKey::Paired, &[0.0, 0.3], OperatingRates { frr: 0.5, far: 0.5 }).unwrap();
        let p = &curve.points[0];
        prop_assert_eq!(p.retained, genuine.len() + impostor.len());
        prop_assert_eq!(p.eer, Some(compute_eer(&set).unwrap()));
        prop_assert_eq!(p.frr_at_far, error_at_operating_point(&set, OperatingPoint::Far(0.5)).ok());
        prop_assert_eq!(p.far_at_frr, error_at_operating_point(&set, OperatingPoint::Frr(0.5)).ok());
    }

    #[test]
    fn pearson_is_symmetric_and_affine_invariant(
        pairs in prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 3..60),
        a in 0.1f64..10.0,
        b in -100.0f64..100.0,
    ) {
        let x: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let y: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        let spread = |v: &[f64]| v.iter().cloned().fold(f64::MIN, f64::max) - v.iter().cloned().fold(f64::MAX, f64::min);
        prop_assume!(spread(&x) > 1e-3 && spread(&y) > 1e-3);
        let r = pearson_correlation(&x, &y).unwrap();
        prop_assert!((r - pearson_correlation(&y, &x).unwrap()).abs() < 1e-9);
        let ax: Vec<f64> = x.iter().map(|v| a * v + b).collect();
        prop_assert!((r - pearson_correlation(&ax, &y).unwrap()).abs() < 1e-9);
        let ay: Vec<f64> = y.iter().map(|v| a * v + b).collect();
        prop_assert!((r - pearson_correlation(&x, &ay).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn separation_is_shift_invariant_and_scale_free(
        genuine in -50.0f64..50.0,
        impostors in prop::collection::vec(-50.0f64..50.0, 2..40),
        shift in -1000.0f64..1000.0,
        scale in 0.01f64..100.0,
    ) {
        let m = impostors.iter().sum::<f64>() / impostors.len() as f64;
        prop_assume!(impostors.iter().any(|v| (v - m).abs() > 1e-3));
        let d = separation_statistic(genuine, &impostors).unwrap();
        let tol = 1e-9 * d.abs().max(1.0);

        let shifted: Vec<f64> = impostors.iter().map(|v| v + shift).collect();
        let ds = separation_statistic(genuine + shift, &shifted).unwrap();
        prop_assert!((ds - d).abs() < tol * 1e3, "{ds} vs {d}");

        // Multiplying every score by a scales the numerator and the impostor
        // deviation alike; the statistic is unchanged.
        let scaled: Vec<f64> = impostors.iter().map(|v| v * scale).collect();
        let dk = separation_statistic(genuine * scale, &scaled).unwrap();
        prop_assert!((dk - d).abs() < tol, "{dk} vs {d}");

        // With the genuine score held fixed relative to the impostor mean, the
        // statistic scales as 1/a with the impostor spread.
        let spread: Vec<f64> = impostors.iter().map(|v| m + (v - m) * scale).collect();
        let dd = separation_statistic(genuine, &spread).unwrap();
        prop_assert!((dd * scale - d).abs() < tol * 1e2, "{dd} vs {d}");
    }
}

#[test]
fn separation_fixtures() {
    // mean 2, population sd sqrt(2/3): (10 − 2)/sqrt(2/3) = 8·sqrt(3/2).
    let d = separation_statistic(10.0, &[1.0, 2.0, 3.0]).unwrap();
    assert!((d - 9.797958971132712).abs() < 1e-6);
    // mean 5, population sd 2.
    let d = separation_statistic(1.0, &[2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]).unwrap();
    assert!((d + 2.0).abs() < 1e-12);
    // mean 0.5, sd 0.5: genuine at the mean.
    assert_eq!(separation_statistic(0.5, &[0.0, 1.0]).unwrap(), 0.0);
}

#[test]
fn brute_force_oracle_agrees_with_hand_example() {
    let (g, i) = ([0.9, 0.6, 0.4], [0.5, 0.3, 0.1]);
    assert!((brute_eer(&g, &i) - 1.0 / 3.0).abs() < 1e-12);
}
