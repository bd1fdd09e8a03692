//! Travel-time and revisit-time evaluation.
//!
//! The revisit time of a walk is the maximum, over all targets, of the
//! travel time between consecutive occurrences of the target while the walk
//! repeats indefinitely. Since every target occurs at least once per cycle,
//! it is computed on the cyclic sequence: the walk doubled once, scanned with
//! per-target gaps over prefix sums. The depot is never a terminus. The
//! definitional enumerator in [`crate::oracle`] cross-validates this path.

use thiserror::Error;

use crate::instance::Instance;
use crate::walk::{RevisitSequence, RevisitSequenceError, TargetId, Violation, Visit, Walk};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("invalid walk: {}", format_violations(.0))]
    InvalidWalk(Vec<Violation>),
    #[error("target {0} does not occur in the walk")]
    TargetAbsent(TargetId),
    #[error("walk yields a malformed revisit sequence: {0}")]
    MalformedRevisitSequence(#[from] RevisitSequenceError),
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// Sum of edge times along a sequence of visits.
pub fn travel_time(seq: &[Visit], instance: &Instance) -> f64 {
    seq.windows(2)
        .map(|pair| instance.time_between(pair[0], pair[1]))
        .sum()
}

/// Travel time of one full cycle of a walk.
pub fn walk_travel_time(walk: &Walk, instance: &Instance) -> f64 {
    travel_time(walk.closed_seq(), instance)
}

/// Worst revisit gap per target under indefinite repetition, ascending by
/// target id.
pub fn worst_gaps(walk: &Walk, instance: &Instance) -> Result<Vec<(TargetId, f64)>, EvalError> {
    let violations = walk.validate(instance);
    if !violations.is_empty() {
        return Err(EvalError::InvalidWalk(violations));
    }
    let open = walk.visits();
    let k = open.len();
    // prefix[i] = travel time of the first i cyclic edges; length 2k covers
    // every wrap-around gap.
    let mut prefix = vec![0.0; 2 * k + 1];
    for i in 0..2 * k {
        prefix[i + 1] = prefix[i] + instance.time_between(open[i % k], open[(i + 1) % k]);
    }
    let mut occurrences: Vec<Vec<usize>> = vec![Vec::new(); instance.n() + 1];
    for (i, v) in open.iter().enumerate() {
        if let Some(t) = v.as_target() {
            occurrences[t].push(i);
        }
    }
    let mut out = Vec::with_capacity(instance.n());
    for t in instance.targets() {
        let occ = &occurrences[t];
        let mut worst: f64 = 0.0;
        for pair in occ.windows(2) {
            worst = worst.max(prefix[pair[1]] - prefix[pair[0]]);
        }
        let last = occ[occ.len() - 1];
        worst = worst.max(prefix[occ[0] + k] - prefix[last]);
        out.push((t, worst));
    }
    Ok(out)
}

/// Maximum over all targets of the worst revisit gap.
pub fn revisit_time(walk: &Walk, instance: &Instance) -> Result<f64, EvalError> {
    Ok(worst_gaps(walk, instance)?
        .into_iter()
        .map(|(_, g)| g)
        .fold(0.0, f64::max))
}

/// All revisit sequences of `walk` that have `target` as their terminus: one
/// per pair of consecutive occurrences of the target in the cyclic
/// repetition.
pub fn enumerate_revisit_sequences(
    walk: &Walk,
    target: TargetId,
) -> Result<Vec<RevisitSequence>, EvalError> {
    let open = walk.visits();
    let k = open.len();
    let occ: Vec<usize> = walk.occurrences(Visit::Target(target));
    if occ.is_empty() {
        return Err(EvalError::TargetAbsent(target));
    }
    let mut out = Vec::with_capacity(occ.len());
    for (i, &start) in occ.iter().enumerate() {
        let end = if i + 1 < occ.len() { occ[i + 1] } else { occ[0] + k };
        let seq: Vec<Visit> = (start..=end).map(|p| open[p % k]).collect();
        out.push(RevisitSequence::new(seq)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::uniform_instance;
    use crate::numeric::approx_eq;
    use crate::walk::{random_pmpd_walk, walk_from_ids};
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn travel_time_sums_edges() {
        let inst = uniform_instance(3);
        let seq = [Visit::Depot, Visit::Target(1), Visit::Depot];
        assert_eq!(travel_time(&seq, &inst), 2.0);
    }

    #[test]
    fn revisit_equals_travel_in_short_regime() {
        // Depot walks with k <= 2n have a target visited once; the whole
        // cycle is the worst gap.
        let inst = uniform_instance(4);
        let walk = walk_from_ids(&[0, 1, 2, 3, 4, 0]).unwrap();
        let r = revisit_time(&walk, &inst).unwrap();
        assert!(approx_eq(r, walk_travel_time(&walk, &inst)));
    }

    #[test]
    fn example_walk_revisit_sequences() {
        let walk = walk_from_ids(&[0, 3, 4, 3, 2, 1, 3, 4, 2, 1, 0]).unwrap();
        let seqs3 = enumerate_revisit_sequences(&walk, 3).unwrap();
        let expected3 = [
            walk_from_ids(&[3, 4, 3]).unwrap(),
            walk_from_ids(&[3, 2, 1, 3]).unwrap(),
            walk_from_ids(&[3, 4, 2, 1, 0, 3]).unwrap(),
        ];
        assert_eq!(seqs3.len(), 3);
        for e in &expected3 {
            assert!(
                seqs3.iter().any(|s| s.closed_seq() == e.closed_seq()),
                "missing {e}"
            );
        }
        for s in &seqs3 {
            assert_eq!(s.terminus(), 3);
        }
        let seqs4 = enumerate_revisit_sequences(&walk, 4).unwrap();
        let expected4 = [
            walk_from_ids(&[4, 3, 2, 1, 3, 4]).unwrap(),
            walk_from_ids(&[4, 2, 1, 0, 3, 4]).unwrap(),
        ];
        assert_eq!(seqs4.len(), 2);
        for e in &expected4 {
            assert!(
                seqs4.iter().any(|s| s.closed_seq() == e.closed_seq()),
                "missing {e}"
            );
        }
        assert!(matches!(
            enumerate_revisit_sequences(&walk, 9),
            Err(EvalError::TargetAbsent(9))
        ));
    }

    #[test]
    fn single_occurrence_spans_the_whole_cycle() {
        let walk = walk_from_ids(&[0, 1, 2, 3, 4, 0]).unwrap();
        let seqs = enumerate_revisit_sequences(&walk, 2).unwrap();
        assert_eq!(seqs.len(), 1);
        assert_eq!(seqs[0].r(), walk.k());
        assert!(seqs[0].is_spanning(4));
    }

    #[test]
    fn example_walk_revisit_time_on_uniform_metric() {
        // Worst gap of the 10-visit example walk on the uniform metric: the
        // longest revisit sequence has 6 visits, i.e. travel time 6.
        let inst = uniform_instance(4);
        let walk = walk_from_ids(&[0, 3, 4, 3, 2, 1, 3, 4, 2, 1, 0]).unwrap();
        let r = revisit_time(&walk, &inst).unwrap();
        assert_eq!(r, 6.0);
    }

    #[test]
    fn gap_lengths_account_for_the_whole_cycle() {
        let walk = walk_from_ids(&[0, 3, 4, 3, 2, 1, 3, 4, 2, 1, 0]).unwrap();
        for t in 1..=4 {
            let seqs = enumerate_revisit_sequences(&walk, t).unwrap();
            let total: usize = seqs.iter().map(|s| s.r()).sum();
            assert_eq!(total, walk.k(), "target {t} gaps must tile the cycle");
        }
    }

    #[test]
    fn permutation_preserves_times() {
        let inst = crate::instance::Instance::random(11, 5, 100.0).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(99);
        for _ in 0..100 {
            let walk = random_pmpd_walk(5, 12, &mut rng);
            let pivot = Visit::Target(walk.visits()[3].as_target().unwrap_or(1));
            let rotated = walk.permute(pivot).unwrap();
            assert!(approx_eq(
                walk_travel_time(&walk, &inst),
                walk_travel_time(&rotated, &inst)
            ));
            assert!(approx_eq(
                revisit_time(&walk, &inst).unwrap(),
                revisit_time(&rotated, &inst).unwrap()
            ));
        }
    }

    #[test]
    fn invalid_walk_rejected() {
        let inst = uniform_instance(4);
        let walk = walk_from_ids(&[0, 1, 2, 3, 0]).unwrap();
        assert!(matches!(revisit_time(&walk, &inst), Err(EvalError::InvalidWalk(_))));
    }
}
