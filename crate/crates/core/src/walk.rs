//! Closed visit sequences and the walk algebra.
//!
//! A walk is stored with its explicit closing element (`v_k = v_0`); all
//! indices in this API refer to the open form `v_0..v_{k-1}`. Walks are
//! immutable values: every operation returns a new walk.
//!
//! Two kinds are distinguished. A depot walk (`Pmpd`) starts and ends at the
//! depot, its interior visits cover every target and contain no depot, and
//! `k >= n + 1`. A target walk (`Pmp`) covers every target and is permitted
//! to contain the depot at most once, which is needed to represent blocks
//! obtained by inserting the depot into a target-only walk; `k >= n`.

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::instance::Instance;

/// Target ids are `1..=n` for the bound instance.
pub type TargetId = usize;

/// A single visit: either a target or the depot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Visit {
    Depot,
    Target(TargetId),
}

impl Visit {
    /// Matrix index: the depot is node 0, target `t` is node `t`.
    #[inline]
    pub fn index(self) -> usize {
        match self {
            Visit::Depot => 0,
            Visit::Target(t) => t,
        }
    }

    #[inline]
    pub fn is_depot(self) -> bool {
        matches!(self, Visit::Depot)
    }

    #[inline]
    pub fn as_target(self) -> Option<TargetId> {
        match self {
            Visit::Depot => None,
            Visit::Target(t) => Some(t),
        }
    }
}

impl PartialOrd for Visit {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Depot sorts before every target; targets sort by id.
impl Ord for Visit {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.index().cmp(&other.index())
    }
}

impl fmt::Display for Visit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Visit::Depot => write!(f, "d"),
            Visit::Target(t) => write!(f, "{t}"),
        }
    }
}

impl Serialize for Visit {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Visit::Depot => serializer.serialize_str("d"),
            Visit::Target(t) => serializer.serialize_u64(*t as u64),
        }
    }
}

impl<'de> Deserialize<'de> for Visit {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Id(u64),
            Tag(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Id(0) => Err(D::Error::custom("target ids start at 1; use \"d\" for the depot")),
            Repr::Id(t) => Ok(Visit::Target(t as usize)),
            Repr::Tag(s) if s == "d" => Ok(Visit::Depot),
            Repr::Tag(s) => Err(D::Error::custom(format!("unknown visit {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WalkKind {
    Pmp,
    Pmpd,
}

/// Why a shortcut request is infeasible.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShortcutReason {
    /// A target would lose its only remaining visit.
    CoverageLoss,
    /// Removal would leave two equal visits adjacent.
    AdjacentDuplicate,
    /// The walk kind requires a depot that the removal would delete.
    DepotRequired,
}

impl fmt::Display for ShortcutReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ShortcutReason::CoverageLoss => "coverage loss",
            ShortcutReason::AdjacentDuplicate => "adjacent duplicate",
            ShortcutReason::DepotRequired => "depot required",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum WalkError {
    #[error("walk must contain at least two visits plus the closing element")]
    TooShort,
    #[error("walk is not closed: first and last element differ")]
    NotClosed,
    #[error("pivot {0} does not occur in the walk")]
    PivotAbsent(Visit),
    #[error("cannot concatenate: terminal elements {0} and {1} differ")]
    TerminusMismatch(Visit, Visit),
    #[error("infeasible shortcut: {0}")]
    InfeasibleShortcut(ShortcutReason),
    #[error("position {position} out of range for a walk with {k} visits")]
    PositionOutOfRange { position: usize, k: usize },
    #[error("insertion would create an immediate repeat of {0}")]
    AdjacentDuplicate(Visit),
    #[error("walk already contains the depot")]
    DepotAlreadyPresent,
}

/// A violated walk invariant, reported by [`Walk::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    ImmediateRepeat { position: usize },
    TargetOutOfRange { position: usize, id: TargetId },
    UncoveredTarget { target: TargetId },
    InteriorDepot { position: usize },
    StartNotDepot,
    ExcessDepotVisits { count: usize },
    TooShort { k: usize, min: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ImmediateRepeat { position } => {
                write!(f, "immediate repeat at positions {}-{}", position - 1, position)
            }
            Violation::TargetOutOfRange { position, id } => {
                write!(f, "target {id} at position {position} out of range")
            }
            Violation::UncoveredTarget { target } => write!(f, "target {target} unvisited"),
            Violation::InteriorDepot { position } => {
                write!(f, "depot in the interior at position {position}")
            }
            Violation::StartNotDepot => write!(f, "depot walk must start at the depot"),
            Violation::ExcessDepotVisits { count } => {
                write!(f, "depot visited {count} times, at most once allowed")
            }
            Violation::TooShort { k, min } => write!(f, "{k} visits, at least {min} required"),
        }
    }
}

/// A closed walk. `seq` holds `v_0..v_k` with `v_k = v_0`; `k = seq.len() - 1`
/// is the number of visits.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Walk {
    kind: WalkKind,
    #[serde(rename = "visits")]
    seq: Vec<Visit>,
}

impl Walk {
    /// Builds a closed walk, deriving the kind from the start element: walks
    /// anchored at the depot are depot walks, all others are target walks.
    pub fn closed(seq: Vec<Visit>) -> Result<Self, WalkError> {
        if seq.len() < 3 {
            return Err(WalkError::TooShort);
        }
        if seq.first() != seq.last() {
            return Err(WalkError::NotClosed);
        }
        let kind = if seq[0].is_depot() { WalkKind::Pmpd } else { WalkKind::Pmp };
        Ok(Self { kind, seq })
    }

    /// Builds a closed walk with an explicitly claimed kind, as read from a
    /// walk file. [`Walk::validate`] reports kind mismatches.
    pub fn with_kind(kind: WalkKind, seq: Vec<Visit>) -> Result<Self, WalkError> {
        if seq.len() < 3 {
            return Err(WalkError::TooShort);
        }
        if seq.first() != seq.last() {
            return Err(WalkError::NotClosed);
        }
        Ok(Self { kind, seq })
    }

    /// Number of visits `k`.
    pub fn k(&self) -> usize {
        self.seq.len() - 1
    }

    pub fn kind(&self) -> WalkKind {
        self.kind
    }

    /// Open form `v_0..v_{k-1}`.
    pub fn visits(&self) -> &[Visit] {
        &self.seq[..self.seq.len() - 1]
    }

    /// Closed form `v_0..v_k` including the closing element.
    pub fn closed_seq(&self) -> &[Visit] {
        &self.seq
    }

    /// Terminal element `v_0 = v_k`.
    pub fn first(&self) -> Visit {
        self.seq[0]
    }

    /// Open-form positions at which `visit` occurs, ascending.
    pub fn occurrences(&self, visit: Visit) -> Vec<usize> {
        self.visits()
            .iter()
            .enumerate()
            .filter(|(_, v)| **v == visit)
            .map(|(i, _)| i)
            .collect()
    }

    /// Number of depot visits in the open form.
    pub fn depot_count(&self) -> usize {
        self.visits().iter().filter(|v| v.is_depot()).count()
    }

    /// Targets visited exactly once, ascending.
    pub fn singly_visited_targets(&self) -> Vec<TargetId> {
        let mut counts = std::collections::BTreeMap::new();
        for v in self.visits() {
            if let Some(t) = v.as_target() {
                *counts.entry(t).or_insert(0usize) += 1;
            }
        }
        counts
            .into_iter()
            .filter(|(_, c)| *c == 1)
            .map(|(t, _)| t)
            .collect()
    }

    /// Enumerates every violated invariant against `instance`; an empty
    /// result means the walk is valid. Never aborts.
    pub fn validate(&self, instance: &Instance) -> Vec<Violation> {
        let n = instance.n();
        let mut out = Vec::new();
        for (i, pair) in self.seq.windows(2).enumerate() {
            if pair[0] == pair[1] {
                out.push(Violation::ImmediateRepeat { position: i + 1 });
            }
        }
        for (i, v) in self.visits().iter().enumerate() {
            if let Some(t) = v.as_target() {
                if t == 0 || t > n {
                    out.push(Violation::TargetOutOfRange { position: i, id: t });
                }
            }
        }
        let covered: BTreeSet<TargetId> =
            self.visits().iter().filter_map(|v| v.as_target()).collect();
        for t in instance.targets() {
            if !covered.contains(&t) {
                out.push(Violation::UncoveredTarget { target: t });
            }
        }
        match self.kind {
            WalkKind::Pmpd => {
                if !self.first().is_depot() {
                    out.push(Violation::StartNotDepot);
                }
                for (i, v) in self.visits().iter().enumerate().skip(1) {
                    if v.is_depot() {
                        out.push(Violation::InteriorDepot { position: i });
                    }
                }
                if self.k() < n + 1 {
                    out.push(Violation::TooShort { k: self.k(), min: n + 1 });
                }
            }
            WalkKind::Pmp => {
                let depots = self.depot_count();
                if depots > 1 {
                    out.push(Violation::ExcessDepotVisits { count: depots });
                }
                if self.k() < n {
                    out.push(Violation::TooShort { k: self.k(), min: n });
                }
            }
        }
        out
    }

    pub fn is_valid(&self, instance: &Instance) -> bool {
        self.validate(instance).is_empty()
    }

    /// Rotation about the first occurrence of `pivot`. The result has the
    /// same multiset of edges, hence the same travel and revisit times.
    pub fn permute(&self, pivot: Visit) -> Result<Walk, WalkError> {
        let open = self.visits();
        let at = open
            .iter()
            .position(|v| *v == pivot)
            .ok_or(WalkError::PivotAbsent(pivot))?;
        let mut seq = Vec::with_capacity(self.seq.len());
        seq.extend_from_slice(&open[at..]);
        seq.extend_from_slice(&open[..at]);
        seq.push(pivot);
        Walk::closed(seq)
    }

    /// Joins two closed walks sharing a terminal element into one walk with
    /// `k1 + k2` visits.
    pub fn concatenate(&self, other: &Walk) -> Result<Walk, WalkError> {
        if self.first() != other.first() {
            return Err(WalkError::TerminusMismatch(self.first(), other.first()));
        }
        let mut seq = Vec::with_capacity(self.k() + other.k() + 1);
        seq.extend_from_slice(self.visits());
        seq.extend_from_slice(other.visits());
        seq.push(self.first());
        Walk::closed(seq)
    }

    /// Removes the open-form interior positions in `positions` (each in
    /// `1..=k-1`), keeping the walk feasible: the covered target set must be
    /// unchanged, no immediate repeats may arise, and a kind that requires
    /// the depot keeps it.
    pub fn shortcut(&self, positions: &BTreeSet<usize>) -> Result<Walk, WalkError> {
        let k = self.k();
        for &p in positions {
            if p == 0 || p >= k {
                return Err(WalkError::PositionOutOfRange { position: p, k });
            }
        }
        let open: Vec<Visit> = self
            .visits()
            .iter()
            .enumerate()
            .filter(|(i, _)| !positions.contains(i))
            .map(|(_, v)| *v)
            .collect();
        if open.len() < 2 {
            return Err(WalkError::InfeasibleShortcut(ShortcutReason::CoverageLoss));
        }
        let before: BTreeSet<TargetId> =
            self.visits().iter().filter_map(|v| v.as_target()).collect();
        let after: BTreeSet<TargetId> = open.iter().filter_map(|v| v.as_target()).collect();
        if before != after {
            return Err(WalkError::InfeasibleShortcut(ShortcutReason::CoverageLoss));
        }
        if self.kind == WalkKind::Pmpd
            && self.depot_count() > 0
            && open.iter().all(|v| !v.is_depot())
        {
            return Err(WalkError::InfeasibleShortcut(ShortcutReason::DepotRequired));
        }
        for i in 0..open.len() {
            if open[i] == open[(i + 1) % open.len()] {
                return Err(WalkError::InfeasibleShortcut(ShortcutReason::AdjacentDuplicate));
            }
        }
        let mut seq = open;
        seq.push(seq[0]);
        let result = Walk::closed(seq)?;
        Ok(Walk { kind: self.kind, ..result })
    }

    /// Inserts `visit` into gap `gap_index` (between `v_i` and
    /// `v_{(i+1) mod k}`), for `gap_index` in `0..=k-1`. The depot may only
    /// be inserted into depot-free walks.
    pub fn insert(&self, gap_index: usize, visit: Visit) -> Result<Walk, WalkError> {
        let k = self.k();
        if gap_index >= k {
            return Err(WalkError::PositionOutOfRange { position: gap_index, k });
        }
        if visit.is_depot() && self.depot_count() > 0 {
            return Err(WalkError::DepotAlreadyPresent);
        }
        let open = self.visits();
        let before = open[gap_index];
        let after = open[(gap_index + 1) % k];
        if visit == before || visit == after {
            return Err(WalkError::AdjacentDuplicate(visit));
        }
        let mut seq = Vec::with_capacity(self.seq.len() + 1);
        seq.extend_from_slice(&open[..=gap_index]);
        seq.push(visit);
        seq.extend_from_slice(&open[gap_index + 1..]);
        seq.push(seq[0]);
        let result = Walk::closed(seq)?;
        Ok(Walk { kind: self.kind, ..result })
    }

    /// The walk traversed in the opposite direction. Travel and revisit
    /// times are unchanged under a symmetric matrix.
    pub fn reversed(&self) -> Walk {
        let mut seq: Vec<Visit> = self.seq.iter().rev().copied().collect();
        seq[0] = self.seq[0];
        Walk { kind: self.kind, seq }
    }

    /// Canonical representative of the cyclic equivalence class: the
    /// lexicographically smallest open form over all rotations of the walk
    /// and of its reversal, with the depot ordered before every target. A
    /// walk containing the depot therefore canonicalizes to depot-first.
    pub fn canonical(&self) -> Walk {
        let k = self.k();
        let mut best: Option<Vec<Visit>> = None;
        for cand in [self.visits().to_vec(), self.reversed().visits().to_vec()] {
            for r in 0..k {
                let mut rot = Vec::with_capacity(k);
                rot.extend_from_slice(&cand[r..]);
                rot.extend_from_slice(&cand[..r]);
                if best.as_ref().is_none_or(|b| rot < *b) {
                    best = Some(rot);
                }
            }
        }
        let mut seq = best.expect("walk is nonempty");
        seq.push(seq[0]);
        Walk::closed(seq).expect("rotation preserves closure")
    }

    /// True when both walks describe the same cyclic tour, up to rotation
    /// and direction.
    pub fn cyclically_equal(&self, other: &Walk) -> bool {
        self.k() == other.k() && self.canonical().seq == other.canonical().seq
    }
}

impl fmt::Display for Walk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.seq.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl<'de> Deserialize<'de> for Walk {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            kind: WalkKind,
            visits: Vec<Visit>,
        }
        let repr = Repr::deserialize(deserializer)?;
        Walk::with_kind(repr.kind, repr.visits).map_err(D::Error::custom)
    }
}

/// The visits between two consecutive occurrences of one target (the
/// *terminus*) in the repeated walk, stored closed: `v_0..v_{r-1}, v_0` with
/// `r` visits. The terminus is always a target, the interior never revisits
/// it, and the depot appears at most once.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RevisitSequence {
    seq: Vec<Visit>,
}

#[derive(Debug, Error, PartialEq)]
pub enum RevisitSequenceError {
    #[error("revisit sequence is not closed")]
    NotClosed,
    #[error("terminus must be a target, not the depot")]
    DepotTerminus,
    #[error("terminus revisited in the interior at position {0}")]
    TerminusInInterior(usize),
    #[error("immediate repeat at position {0}")]
    ImmediateRepeat(usize),
    #[error("depot appears {0} times, at most once allowed")]
    ExcessDepotVisits(usize),
}

impl RevisitSequence {
    pub fn new(seq: Vec<Visit>) -> Result<Self, RevisitSequenceError> {
        if seq.len() < 3 || seq.first() != seq.last() {
            return Err(RevisitSequenceError::NotClosed);
        }
        let terminus = seq[0];
        if terminus.is_depot() {
            return Err(RevisitSequenceError::DepotTerminus);
        }
        for (i, v) in seq[1..seq.len() - 1].iter().enumerate() {
            if *v == terminus {
                return Err(RevisitSequenceError::TerminusInInterior(i + 1));
            }
        }
        for (i, pair) in seq.windows(2).enumerate() {
            if pair[0] == pair[1] {
                return Err(RevisitSequenceError::ImmediateRepeat(i + 1));
            }
        }
        let depots = seq[..seq.len() - 1].iter().filter(|v| v.is_depot()).count();
        if depots > 1 {
            return Err(RevisitSequenceError::ExcessDepotVisits(depots));
        }
        Ok(Self { seq })
    }

    pub fn terminus(&self) -> TargetId {
        self.seq[0].as_target().expect("terminus is a target")
    }

    /// Number of visits `r`.
    pub fn r(&self) -> usize {
        self.seq.len() - 1
    }

    pub fn closed_seq(&self) -> &[Visit] {
        &self.seq
    }

    /// True when the sequence visits every target of an `n`-target instance.
    pub fn is_spanning(&self, n: usize) -> bool {
        let covered: BTreeSet<TargetId> =
            self.seq.iter().filter_map(|v| v.as_target()).collect();
        (1..=n).all(|t| covered.contains(&t))
    }
}

impl fmt::Display for RevisitSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.seq.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Builds a closed walk from matrix indices, with 0 standing for the depot.
pub fn walk_from_ids(ids: &[usize]) -> Result<Walk, WalkError> {
    Walk::closed(
        ids.iter()
            .map(|&i| if i == 0 { Visit::Depot } else { Visit::Target(i) })
            .collect(),
    )
}

/// Seeded random valid depot walk with `k >= n + 1` visits: the interior is
/// a random target permutation padded with feasible random insertions.
pub fn random_pmpd_walk<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Walk {
    assert!(n >= 3 && k >= n + 1, "need n >= 3 and k >= n + 1");
    let mut interior = random_permutation(n, rng);
    while interior.len() < k - 1 {
        insert_random_target(&mut interior, n, rng, false);
    }
    let mut seq = vec![Visit::Depot];
    seq.extend(interior.iter().map(|&t| Visit::Target(t)));
    seq.push(Visit::Depot);
    Walk::closed(seq).expect("construction is closed")
}

/// Seeded random valid target-only walk with `k >= n` visits.
pub fn random_pmp_walk<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Walk {
    assert!(n >= 3 && k >= n, "need n >= 3 and k >= n");
    let mut cycle = random_permutation(n, rng);
    while cycle.len() < k {
        insert_random_target(&mut cycle, n, rng, true);
    }
    let mut seq: Vec<Visit> = cycle.into_iter().map(Visit::Target).collect();
    seq.push(seq[0]);
    Walk::closed(seq).expect("construction is closed")
}

fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<TargetId> {
    let mut perm: Vec<TargetId> = (1..=n).collect();
    for i in (1..perm.len()).rev() {
        perm.swap(i, rng.random_range(0..=i));
    }
    perm
}

/// Inserts one random target without creating an immediate repeat. With
/// `cyclic`, the wrap pair also counts as adjacent.
fn insert_random_target<R: Rng + ?Sized>(
    seq: &mut Vec<TargetId>,
    n: usize,
    rng: &mut R,
    cyclic: bool,
) {
    loop {
        let pos = rng.random_range(0..=seq.len());
        let prev = if pos > 0 {
            Some(seq[pos - 1])
        } else if cyclic {
            seq.last().copied()
        } else {
            None
        };
        let next = if pos < seq.len() {
            Some(seq[pos])
        } else if cyclic {
            seq.first().copied()
        } else {
            None
        };
        let t = rng.random_range(1..=n);
        if Some(t) != prev && Some(t) != next {
            seq.insert(pos, t);
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::uniform_instance;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn w(ids: &[usize]) -> Walk {
        walk_from_ids(ids).unwrap()
    }

    #[test]
    fn example_depot_walk_is_valid() {
        // 10-visit depot walk over 4 targets.
        let inst = uniform_instance(4);
        let walk = w(&[0, 3, 4, 3, 2, 1, 3, 4, 2, 1, 0]);
        assert_eq!(walk.k(), 10);
        assert_eq!(walk.kind(), WalkKind::Pmpd);
        assert!(walk.validate(&inst).is_empty());
    }

    #[test]
    fn immediate_repeat_reported() {
        let inst = uniform_instance(3);
        let walk = w(&[0, 1, 1, 2, 3, 0]);
        let violations = walk.validate(&inst);
        assert!(violations.contains(&Violation::ImmediateRepeat { position: 2 }));
    }

    #[test]
    fn uncovered_target_reported() {
        let inst = uniform_instance(4);
        let walk = w(&[0, 1, 2, 3, 0]);
        let violations = walk.validate(&inst);
        assert!(violations.contains(&Violation::UncoveredTarget { target: 4 }));
        assert!(violations.contains(&Violation::TooShort { k: 4, min: 5 }));
    }

    #[test]
    fn permute_rotates_to_pivot() {
        let walk = w(&[0, 2, 3, 4, 5, 1, 0]);
        let rotated = walk.permute(Visit::Target(2)).unwrap();
        assert_eq!(rotated, w(&[2, 3, 4, 5, 1, 0, 2]));
        assert_eq!(rotated.kind(), WalkKind::Pmp);
        // Rotation about the start is the identity.
        assert_eq!(walk.permute(Visit::Depot).unwrap(), walk);
        assert_eq!(
            walk.permute(Visit::Target(9)),
            Err(WalkError::PivotAbsent(Visit::Target(9)))
        );
    }

    #[test]
    fn concatenate_joins_on_shared_terminus() {
        let a = w(&[2, 3, 4, 5, 1, 0, 2]);
        let b = w(&[2, 3, 4, 5, 1, 2]);
        let joined = a.concatenate(&b).unwrap();
        assert_eq!(joined, w(&[2, 3, 4, 5, 1, 0, 2, 3, 4, 5, 1, 2]));
        assert_eq!(joined.k(), a.k() + b.k());
        let c = w(&[1, 2, 3, 1]);
        assert!(matches!(a.concatenate(&c), Err(WalkError::TerminusMismatch(_, _))));
        // Self-concatenation doubles k.
        assert_eq!(b.concatenate(&b).unwrap().k(), 2 * b.k());
    }

    #[test]
    fn shortcut_depot() {
        let walk = w(&[2, 3, 4, 5, 1, 0, 2]);
        let cut = walk.shortcut(&BTreeSet::from([5])).unwrap();
        assert_eq!(cut, w(&[2, 3, 4, 5, 1, 2]));
    }

    #[test]
    fn shortcut_depot_between_equal_targets_is_infeasible() {
        let walk = w(&[2, 1, 0, 1, 5, 4, 3, 2]);
        assert_eq!(
            walk.shortcut(&BTreeSet::from([2])),
            Err(WalkError::InfeasibleShortcut(ShortcutReason::AdjacentDuplicate))
        );
        // Removing one of the repeated targets together with the depot works.
        let cut = walk.shortcut(&BTreeSet::from([1, 2])).unwrap();
        assert_eq!(cut, w(&[2, 1, 5, 4, 3, 2]));
    }

    #[test]
    fn shortcut_singly_visited_target_is_infeasible() {
        let walk = w(&[0, 1, 2, 3, 0]);
        assert_eq!(
            walk.shortcut(&BTreeSet::from([2])),
            Err(WalkError::InfeasibleShortcut(ShortcutReason::CoverageLoss))
        );
    }

    #[test]
    fn insert_examples() {
        let st = w(&[1, 5, 4, 3, 2, 1]);
        let stid = st.insert(4, Visit::Depot).unwrap();
        assert_eq!(stid, w(&[1, 5, 4, 3, 2, 0, 1]));

        let sd = w(&[2, 3, 4, 5, 1, 2]);
        let sdit = sd.insert(0, Visit::Target(1)).unwrap();
        assert_eq!(sdit, w(&[2, 1, 3, 4, 5, 1, 2]));

        assert_eq!(
            sd.insert(0, Visit::Target(2)),
            Err(WalkError::AdjacentDuplicate(Visit::Target(2)))
        );
        assert_eq!(stid.insert(1, Visit::Depot), Err(WalkError::DepotAlreadyPresent));
    }

    #[test]
    fn insert_then_shortcut_is_identity() {
        let walk = w(&[1, 5, 4, 3, 2, 1]);
        let inserted = walk.insert(2, Visit::Target(1)).unwrap();
        let back = inserted.shortcut(&BTreeSet::from([3])).unwrap();
        assert_eq!(back, walk);
    }

    #[test]
    fn singly_visited() {
        assert_eq!(w(&[0, 2, 3, 4, 5, 1, 0]).singly_visited_targets(), vec![1, 2, 3, 4, 5]);
        assert_eq!(w(&[0, 1, 5, 4, 3, 2, 1, 0]).singly_visited_targets(), vec![2, 3, 4, 5]);
        // Every target repeats in the 10-visit example walk.
        assert_eq!(
            w(&[0, 3, 4, 3, 2, 1, 3, 4, 2, 1, 0]).singly_visited_targets(),
            Vec::<TargetId>::new()
        );
    }

    #[test]
    fn canonical_is_rotation_and_direction_invariant() {
        let walk = w(&[0, 2, 3, 4, 5, 1, 0]);
        let rotated = walk.permute(Visit::Target(4)).unwrap();
        assert!(walk.cyclically_equal(&rotated));
        assert!(walk.cyclically_equal(&walk.reversed()));
        assert!(walk.canonical().first().is_depot());
        assert!(!walk.cyclically_equal(&w(&[0, 2, 3, 5, 4, 1, 0])));
    }

    #[test]
    fn random_walks_are_valid() {
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        for n in 3..=5 {
            let inst = uniform_instance(n);
            for k in n + 1..=2 * n + 3 {
                let walk = random_pmpd_walk(n, k, &mut rng);
                assert_eq!(walk.k(), k);
                assert!(walk.validate(&inst).is_empty(), "{walk}");
            }
            for k in n..=2 * n + 3 {
                let walk = random_pmp_walk(n, k, &mut rng);
                assert_eq!(walk.k(), k);
                assert!(walk.validate(&inst).is_empty(), "{walk}");
            }
        }
    }

    #[test]
    fn walk_json_round_trip() {
        let walk = w(&[0, 2, 3, 4, 5, 1, 0]);
        let text = serde_json::to_string(&walk).unwrap();
        assert!(text.contains("\"pmpd\""));
        assert!(text.contains("\"d\""));
        let back: Walk = serde_json::from_str(&text).unwrap();
        assert_eq!(walk, back);
        let err = serde_json::from_str::<Walk>("{\"kind\":\"pmpd\",\"visits\":[\"d\",1,2]}");
        assert!(err.is_err(), "open sequence must be rejected");
    }
}
