//! Symbolic verdicts against the walk: positive claims hold at the analytic
//! time, and negative ones survive a grid sweep.

use zdgq::arithmetic::is_prime;
use zdgq::classify::{analyze, candidate_pairs, AnalysisOptions, NumericContext, Verdict};
use zdgq::walk::AMP_THRESHOLD;

fn composites(max: u64) -> impl Iterator<Item = u64> {
    (4..=max).filter(|&n| !is_prime(n))
}

#[test]
fn positive_verdicts_are_confirmed_up_to_300() {
    for n in composites(300) {
        let r = analyze(n, AnalysisOptions::default()).unwrap();
        assert!(r.numeric, "n = {n} should be under the dense cap");
        for p in &r.pairs {
            assert!(!p.justification.is_empty());
            assert_ne!(p.verdict, Verdict::Undecidable, "n = {n}");
            if p.verdict.has_proper_fr() {
                let o = p.numeric.expect("numeric check attached");
                assert_eq!(p.confirmed, Some(true), "n = {n} {:?}: {o:?}", p.pair);
                assert!(o.residual <= 1e-6);
            }
        }
        assert!(r.numerics_agree(), "n = {n}");
    }
}

// The sweep bound is the walk's PST threshold. A 0.999 bound is too strict:
// irrational plus supports allow transfer arbitrarily close to 1 (see below).
#[test]
fn none_verdicts_survive_sweep_up_to_100() {
    for n in composites(100) {
        let r = analyze(n, AnalysisOptions { numeric: false, ..Default::default() }).unwrap();
        let nones: Vec<_> = r.pairs.iter().filter(|p| p.verdict == Verdict::None).filter_map(|p| p.pair).collect();
        if nones.is_empty() {
            continue;
        }
        let ctx = NumericContext::new(n).unwrap();
        for (x, y) in nones {
            let (_, best) = ctx.max_transfer(x, y, ctx.sweep_horizon()).unwrap();
            assert!(best < 1.0 - AMP_THRESHOLD, "n = {n} ({x}, {y}): |beta| reached {best}");
        }
    }
}

#[test]
fn pst_graphs_up_to_100() {
    let pst: Vec<u64> = composites(100)
        .filter(|&n| {
            matches!(
                analyze(n, AnalysisOptions { numeric: false, ..Default::default() }).unwrap().summary(),
                Verdict::Pst { .. }
            )
        })
        .collect();
    assert_eq!(pst, vec![6, 8, 9, 15, 21, 33, 39, 51, 57, 69, 87, 93]);
}

#[test]
fn twelve_has_near_perfect_transfer_without_pst() {
    let ctx = NumericContext::new(12).unwrap();
    let (x, y) = candidate_pairs(12).unwrap()[0];
    let (_, best) = ctx.max_transfer(x, y, ctx.sweep_horizon()).unwrap();
    assert!(best > 0.999 && best < 1.0 - AMP_THRESHOLD, "{best}");
}
