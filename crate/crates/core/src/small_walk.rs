//! Exact optimization of the three seed walks and of minimum
//! revisit-sequence travel times.
//!
//! The seed walks are the building blocks for bounds and large-`k`
//! constructions:
//!
//! - `wd_n1`: the best depot walk with `n + 1` visits (a shortest tour over
//!   depot and targets),
//! - `wd_n2`: the best depot walk with `n + 2` visits (exactly one target
//!   visited twice, non-adjacently),
//! - `w_n1`: the best target-only walk with `n + 1` visits (one target
//!   twice, no depot).
//!
//! In this visit range revisit time equals travel time, so all three are
//! travel-time minimizations. Up to [`DP_THRESHOLD`] targets they are solved
//! by subset dynamic programming over anchored cycles, with ties broken
//! toward the lexicographically smallest visit sequence; beyond it a
//! depth-first branch-and-bound with a spanning-tree dual bound runs within
//! the given budget and reports an explicit certificate.

use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::instance::{Instance, DEPOT_INDEX};
use crate::walk::{Visit, Walk};

/// Largest target count solved by subset DP; above it branch-and-bound runs
/// within the budget and may return an uncertified incumbent.
pub const DP_THRESHOLD: usize = 16;

/// Largest target count accepted by [`min_revisit_seq_time`]; the state
/// space is exponential in `n` and the operation exists for property tests.
pub const REVISIT_SEQ_N_CAP: usize = 12;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("no feasible walk found within the budget")]
    BudgetExhausted,
    #[error(
        "v = {v} (with_depot = {with_depot}) unsupported for n = {n}: \
         need n <= {cap} and n + (depot ? 1 : 0) <= v <= n + 4",
        cap = REVISIT_SEQ_N_CAP
    )]
    OutOfRange { v: usize, with_depot: bool, n: usize },
}

/// Optimality status of a computed walk.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Certificate {
    Optimal,
    BestFound { gap_pct: f64 },
}

impl Certificate {
    pub fn is_optimal(&self) -> bool {
        matches!(self, Certificate::Optimal)
    }
}

/// A walk together with its travel time and an optimality certificate.
#[derive(Clone, Debug, Serialize)]
pub struct CertifiedWalk {
    pub walk: Walk,
    pub value: f64,
    pub certificate: Certificate,
}

/// The three seed walks of an instance.
#[derive(Clone, Debug, Serialize)]
pub struct SeedWalks {
    pub wd_n1: CertifiedWalk,
    pub wd_n2: CertifiedWalk,
    pub w_n1: CertifiedWalk,
}

impl SeedWalks {
    /// Computes all three seeds, splitting the budget evenly. The budget
    /// only matters above [`DP_THRESHOLD`] targets.
    pub fn compute(instance: &Instance, budget: Duration) -> Result<Self, SolveError> {
        let slice = budget / 3;
        Ok(Self {
            wd_n1: optimal_wd_n1(instance, slice)?,
            wd_n2: optimal_wd_n2(instance, slice)?,
            w_n1: optimal_w_n1(instance, slice)?,
        })
    }

    pub fn n(&self) -> usize {
        self.wd_n1.walk.k() - 1
    }

    /// Best revisit time of a depot walk with `n + 1` visits.
    pub fn rd_n1(&self) -> f64 {
        self.wd_n1.value
    }

    /// Best revisit time of a depot walk with `n + 2` visits.
    pub fn rd_n2(&self) -> f64 {
        self.wd_n2.value
    }

    /// Best revisit time of a target-only walk with `n + 1` visits.
    pub fn r_n1(&self) -> f64 {
        self.w_n1.value
    }

    pub fn all_certified(&self) -> bool {
        self.wd_n1.certificate.is_optimal()
            && self.wd_n2.certificate.is_optimal()
            && self.w_n1.certificate.is_optimal()
    }
}

/// Minimum-travel-time closed walk depot -> every target exactly once ->
/// depot.
pub fn optimal_wd_n1(instance: &Instance, budget: Duration) -> Result<CertifiedWalk, SolveError> {
    let n = instance.n();
    let slots: Vec<usize> = (1..=n).collect();
    let spec = CycleSpec::new(instance, DEPOT_INDEX, slots, None, None);
    if n <= DP_THRESHOLD {
        let (value, walk) = spec.exact();
        return Ok(CertifiedWalk { walk, value, certificate: Certificate::Optimal });
    }
    let deadline = Instant::now() + budget;
    let order = two_opt(&spec, nn_order(&spec));
    let cost = spec.order_cost(&order);
    let outcome = spec.branch_and_bound(cost, order, deadline);
    Ok(spec.into_certified(outcome))
}

/// Minimum-travel-time depot walk with `n + 2` visits: the depot once,
/// exactly one target twice with non-adjacent occurrences. Minimized over
/// the duplicated target.
pub fn optimal_wd_n2(instance: &Instance, budget: Duration) -> Result<CertifiedWalk, SolveError> {
    let n = instance.n();
    if n <= DP_THRESHOLD {
        let mut best: Option<(f64, Walk)> = None;
        for dup in 1..=n {
            let mut slots: Vec<usize> = (1..=n).collect();
            slots.push(dup);
            let spec = CycleSpec::new(instance, DEPOT_INDEX, slots, Some((dup - 1, n)), None);
            let (value, walk) = spec.exact();
            if better(&best, value, &walk) {
                best = Some((value, walk));
            }
        }
        let (value, walk) = best.expect("n >= 3 leaves at least one candidate");
        return Ok(CertifiedWalk { walk, value, certificate: Certificate::Optimal });
    }

    let deadline = Instant::now() + budget;
    // Incumbent: duplicate one visit of a good plain tour at its cheapest
    // feasible position; branch-and-bound then refines per candidate with
    // the incumbent shared across candidates.
    let base_spec = CycleSpec::new(instance, DEPOT_INDEX, (1..=n).collect(), None, None);
    let base_order = two_opt(&base_spec, nn_order(&base_spec));
    let mut certified = true;
    let mut dual = f64::INFINITY;
    let mut best: Option<(f64, usize, Vec<usize>)> = None;
    for dup in 1..=n {
        let mut slots: Vec<usize> = (1..=n).collect();
        slots.push(dup);
        let spec = CycleSpec::new(instance, DEPOT_INDEX, slots, Some((dup - 1, n)), None);
        let mut order = best_duplicate_insertion(&spec, &base_order, n);
        let mut cost = spec.order_cost(&order);
        if let Some((c, _, _)) = &best {
            if *c < cost {
                cost = *c;
                order = Vec::new();
            }
        }
        let outcome = spec.branch_and_bound(cost, order, deadline);
        certified &= outcome.certified;
        dual = dual.min(outcome.dual);
        if !outcome.order.is_empty()
            && best.as_ref().is_none_or(|(c, _, _)| outcome.cost < *c)
        {
            best = Some((outcome.cost, dup, outcome.order));
        }
    }
    let (cost, dup, order) = best.expect("n >= 3 leaves at least one candidate");
    let mut slots: Vec<usize> = (1..=n).collect();
    slots.push(dup);
    let spec = CycleSpec::new(instance, DEPOT_INDEX, slots, Some((dup - 1, n)), None);
    Ok(spec.into_certified(BnbOutcome { cost, order, certified, dual, nodes: 0 }))
}

/// Minimum-travel-time target-only walk with `n + 1` visits: one target
/// twice (non-adjacent), no depot. Minimized over the duplicated target.
pub fn optimal_w_n1(instance: &Instance, budget: Duration) -> Result<CertifiedWalk, SolveError> {
    let n = instance.n();
    if n <= DP_THRESHOLD {
        let mut best: Option<(f64, Walk)> = None;
        for dup in 1..=n {
            let mut slots: Vec<usize> = (1..=n).filter(|t| *t != dup).collect();
            slots.push(dup);
            let last = slots.len() - 1;
            let spec = CycleSpec::new(instance, dup, slots, None, Some(last));
            let (value, walk) = spec.exact();
            if better(&best, value, &walk) {
                best = Some((value, walk));
            }
        }
        let (value, walk) = best.expect("n >= 3 leaves at least one candidate");
        let walk = walk.canonical();
        return Ok(CertifiedWalk { walk, value, certificate: Certificate::Optimal });
    }

    let deadline = Instant::now() + budget;
    // Incumbent: a good target-only ring, anchored per candidate, with the
    // duplicate inserted at its cheapest interior position.
    let ring_spec = CycleSpec::new(instance, 1, (2..=n).collect(), None, None);
    let ring_order = two_opt(&ring_spec, nn_order(&ring_spec));
    let mut ring: Vec<usize> = vec![1];
    ring.extend(ring_order.iter().map(|&i| i + 2));
    let mut certified = true;
    let mut dual = f64::INFINITY;
    let mut best: Option<(f64, usize, Vec<usize>)> = None;
    for dup in 1..=n {
        let mut slots: Vec<usize> = (1..=n).filter(|t| *t != dup).collect();
        slots.push(dup);
        let last = slots.len() - 1;
        let spec = CycleSpec::new(instance, dup, slots.clone(), None, Some(last));
        let at = ring.iter().position(|&t| t == dup).expect("ring covers all targets");
        let rotated: Vec<usize> = (1..ring.len()).map(|i| ring[(at + i) % ring.len()]).collect();
        let base_order: Vec<usize> = rotated
            .iter()
            .map(|t| slots.iter().position(|s| s == t).expect("slot exists"))
            .collect();
        let mut order = best_duplicate_insertion(&spec, &base_order, last);
        let mut cost = spec.order_cost(&order);
        if let Some((c, _, _)) = &best {
            if *c < cost {
                cost = *c;
                order = Vec::new();
            }
        }
        let outcome = spec.branch_and_bound(cost, order, deadline);
        certified &= outcome.certified;
        dual = dual.min(outcome.dual);
        if !outcome.order.is_empty()
            && best.as_ref().is_none_or(|(c, _, _)| outcome.cost < *c)
        {
            best = Some((outcome.cost, dup, outcome.order));
        }
    }
    let (cost, dup, order) = best.expect("n >= 3 leaves at least one candidate");
    let mut slots: Vec<usize> = (1..=n).filter(|t| *t != dup).collect();
    slots.push(dup);
    let last = slots.len() - 1;
    let spec = CycleSpec::new(instance, dup, slots, None, Some(last));
    let mut certified_walk =
        spec.into_certified(BnbOutcome { cost, order, certified, dual, nodes: 0 });
    certified_walk.walk = certified_walk.walk.canonical();
    Ok(certified_walk)
}

/// Minimum travel time over all spanning revisit sequences with exactly `v`
/// visits, with or without a depot visit. DP state: covered-target set, last
/// node, visits used, depot used. Supports `n <=` [`REVISIT_SEQ_N_CAP`] and
/// `v <= n + 4`, which covers the monotonicity and depot-relation property
/// tests.
pub fn min_revisit_seq_time(
    instance: &Instance,
    v: usize,
    with_depot: bool,
) -> Result<f64, SolveError> {
    let n = instance.n();
    let min_v = if with_depot { n + 1 } else { n };
    if n > REVISIT_SEQ_N_CAP || v < min_v || v > n + 4 {
        return Err(SolveError::OutOfRange { v, with_depot, n });
    }
    let full: u32 = (1 << n) - 1;
    let states = (1usize << n) * (n + 1) * 2;
    let mut best = f64::INFINITY;
    let mut cur = vec![f64::INFINITY; states];
    let mut next = vec![f64::INFINITY; states];
    let idx = |mask: u32, last: usize, depot_used: bool| -> usize {
        ((mask as usize) * (n + 1) + last) * 2 + usize::from(depot_used)
    };
    for terminus in 1..=n {
        cur.fill(f64::INFINITY);
        cur[idx(1 << (terminus - 1), terminus, false)] = 0.0;
        for _used in 1..v {
            next.fill(f64::INFINITY);
            for mask in 0..=full {
                for last in 0..=n {
                    for du in [false, true] {
                        let cost = cur[idx(mask, last, du)];
                        if !cost.is_finite() {
                            continue;
                        }
                        for t in 1..=n {
                            // Interior visits never return to the terminus.
                            if t == terminus || t == last {
                                continue;
                            }
                            let nm = mask | (1 << (t - 1));
                            let slot = &mut next[idx(nm, t, du)];
                            let c = cost + instance.time_idx(last, t);
                            if c < *slot {
                                *slot = c;
                            }
                        }
                        if !du && last != DEPOT_INDEX {
                            let slot = &mut next[idx(mask, DEPOT_INDEX, true)];
                            let c = cost + instance.time_idx(last, DEPOT_INDEX);
                            if c < *slot {
                                *slot = c;
                            }
                        }
                    }
                }
            }
            std::mem::swap(&mut cur, &mut next);
        }
        for last in 0..=n {
            if last == terminus {
                continue;
            }
            let cost = cur[idx(full, last, with_depot)];
            if cost.is_finite() {
                best = best.min(cost + instance.time_idx(last, terminus));
            }
        }
    }
    Ok(best)
}

fn better(best: &Option<(f64, Walk)>, value: f64, walk: &Walk) -> bool {
    match best {
        None => true,
        Some((bv, bw)) => {
            value < *bv
                || (value == *bv && walk.canonical().closed_seq() < bw.canonical().closed_seq())
        }
    }
}

/// An anchored-cycle problem: a minimum-cost cycle visiting the anchor once
/// and every slot exactly once. Slots may repeat a matrix node (a duplicated
/// target); `forbidden_pair` keeps two slots non-adjacent and
/// `forbid_anchor_neighbor` keeps one slot away from the anchor.
struct CycleSpec {
    /// Dense distance matrix over `m + 1` local nodes; index `m` is the
    /// anchor.
    dist: Vec<f64>,
    m: usize,
    visits: Vec<Visit>,
    anchor_visit: Visit,
    forbidden_pair: Option<(usize, usize)>,
    forbid_anchor_neighbor: Option<usize>,
}

/// Result of a budgeted branch-and-bound run over mid-slot orders.
struct BnbOutcome {
    cost: f64,
    order: Vec<usize>,
    certified: bool,
    dual: f64,
    nodes: u64,
}

impl CycleSpec {
    fn new(
        instance: &Instance,
        anchor: usize,
        slots: Vec<usize>,
        forbidden_pair: Option<(usize, usize)>,
        forbid_anchor_neighbor: Option<usize>,
    ) -> Self {
        let m = slots.len();
        let node = |i: usize| if i == m { anchor } else { slots[i] };
        let mut dist = vec![0.0; (m + 1) * (m + 1)];
        for a in 0..=m {
            for b in 0..=m {
                dist[a * (m + 1) + b] = instance.time_idx(node(a), node(b));
            }
        }
        let to_visit =
            |ix: usize| if ix == DEPOT_INDEX { Visit::Depot } else { Visit::Target(ix) };
        Self {
            dist,
            m,
            visits: slots.iter().map(|&s| to_visit(s)).collect(),
            anchor_visit: to_visit(anchor),
            forbidden_pair,
            forbid_anchor_neighbor,
        }
    }

    #[inline]
    fn d(&self, a: usize, b: usize) -> f64 {
        self.dist[a * (self.m + 1) + b]
    }

    #[inline]
    fn adjacent_allowed(&self, a: usize, b: usize) -> bool {
        match self.forbidden_pair {
            Some((x, y)) => !((a == x && b == y) || (a == y && b == x)),
            None => true,
        }
    }

    #[inline]
    fn anchor_adjacent_allowed(&self, a: usize) -> bool {
        self.forbid_anchor_neighbor != Some(a)
    }

    fn order_cost(&self, order: &[usize]) -> f64 {
        let mut cost = self.d(self.m, order[0]);
        for pair in order.windows(2) {
            cost += self.d(pair[0], pair[1]);
        }
        cost + self.d(order[order.len() - 1], self.m)
    }

    fn order_is_feasible(&self, order: &[usize]) -> bool {
        self.anchor_adjacent_allowed(order[0])
            && self.anchor_adjacent_allowed(order[order.len() - 1])
            && order.windows(2).all(|p| self.adjacent_allowed(p[0], p[1]))
    }

    fn realize(&self, order: &[usize]) -> Walk {
        let mut seq = Vec::with_capacity(self.m + 2);
        seq.push(self.anchor_visit);
        seq.extend(order.iter().map(|&i| self.visits[i]));
        seq.push(self.anchor_visit);
        Walk::closed(seq).expect("anchored cycle is closed")
    }

    fn into_certified(self, outcome: BnbOutcome) -> CertifiedWalk {
        let walk = self.realize(&outcome.order);
        let certificate = if outcome.certified {
            Certificate::Optimal
        } else {
            let dual = outcome.dual.min(outcome.cost).max(0.0);
            let gap_pct = if dual > 0.0 {
                100.0 * (outcome.cost - dual) / dual
            } else if outcome.cost > 0.0 {
                f64::INFINITY
            } else {
                0.0
            };
            Certificate::BestFound { gap_pct }
        };
        CertifiedWalk { walk, value: outcome.cost, certificate }
    }

    /// Exact subset DP. `f[S][j]` is the cheapest path from slot `j` through
    /// every slot of `S` back to the anchor; the optimum is reconstructed
    /// greedily toward the lexicographically smallest visit sequence.
    fn exact(&self) -> (f64, Walk) {
        let m = self.m;
        let full: usize = (1 << m) - 1;
        let mut f = vec![f64::INFINITY; (1 << m) * m];
        for j in 0..m {
            if self.anchor_adjacent_allowed(j) {
                f[j] = self.d(j, self.m);
            }
        }
        for set in 1usize..=full {
            for j in 0..m {
                if set & (1 << j) != 0 {
                    continue;
                }
                let mut best = f64::INFINITY;
                let mut rest = set;
                while rest != 0 {
                    let t = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    if !self.adjacent_allowed(j, t) {
                        continue;
                    }
                    let v = self.d(j, t) + f[(set ^ (1 << t)) * m + t];
                    if v < best {
                        best = v;
                    }
                }
                f[set * m + j] = best;
            }
        }

        let first_cost = |j: usize| -> f64 {
            if self.anchor_adjacent_allowed(j) {
                self.d(self.m, j) + f[(full ^ (1 << j)) * m + j]
            } else {
                f64::INFINITY
            }
        };
        let mut total = f64::INFINITY;
        for j in 0..m {
            let c = first_cost(j);
            if c < total {
                total = c;
            }
        }
        debug_assert!(total.is_finite(), "anchored cycle must be feasible");

        // Greedy reconstruction: smallest next visit that still attains the
        // optimal completion; costs are recomputed with the same expressions
        // so equality is exact.
        let mut order = Vec::with_capacity(m);
        let mut cur = (0..m)
            .filter(|&j| first_cost(j) == total)
            .min_by_key(|&j| (self.visits[j], j))
            .expect("an optimal first slot exists");
        let mut set = full ^ (1 << cur);
        order.push(cur);
        while set != 0 {
            let want = f[set * m + cur];
            let mut chosen: Option<usize> = None;
            let mut rest = set;
            while rest != 0 {
                let t = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if !self.adjacent_allowed(cur, t) {
                    continue;
                }
                if self.d(cur, t) + f[(set ^ (1 << t)) * m + t] == want
                    && chosen.is_none_or(|c| (self.visits[t], t) < (self.visits[c], c))
                {
                    chosen = Some(t);
                }
            }
            let t = chosen.expect("DP table admits a continuation");
            order.push(t);
            set ^= 1 << t;
            cur = t;
        }
        (total, self.realize(&order))
    }

    /// Depth-first branch-and-bound with a spanning-tree dual bound. Returns
    /// the best order found, whether the search completed, and a proven
    /// lower bound on every cycle of this spec. An empty incumbent order
    /// stands for a cost-only incumbent owned by another candidate.
    fn branch_and_bound(
        &self,
        incumbent_cost: f64,
        incumbent_order: Vec<usize>,
        deadline: Instant,
    ) -> BnbOutcome {
        let mut search = BnbSearch {
            spec: self,
            best_cost: incumbent_cost,
            best_order: incumbent_order,
            path: Vec::with_capacity(self.m),
            deadline,
            exhausted: false,
            dual_floor: f64::INFINITY,
            nodes: 0,
            mst_nodes: Vec::with_capacity(self.m + 2),
            mst_dist: vec![0.0; self.m + 2],
            mst_done: vec![false; self.m + 2],
        };
        search.descend(0, 0.0);
        let certified = !search.exhausted;
        let dual = if certified { search.best_cost } else { search.dual_floor };
        BnbOutcome {
            cost: search.best_cost,
            order: search.best_order,
            certified,
            dual,
            nodes: search.nodes,
        }
    }
}

struct BnbSearch<'a> {
    spec: &'a CycleSpec,
    best_cost: f64,
    best_order: Vec<usize>,
    path: Vec<usize>,
    deadline: Instant,
    exhausted: bool,
    dual_floor: f64,
    nodes: u64,
    mst_nodes: Vec<usize>,
    mst_dist: Vec<f64>,
    mst_done: Vec<bool>,
}

impl BnbSearch<'_> {
    /// Lower bound on completing the current path: cost so far plus a
    /// minimum spanning tree over the unvisited slots, the path end and the
    /// anchor. Any Hamiltonian completion spans those nodes.
    fn bound(&mut self, visited: u64, cost: f64) -> f64 {
        let spec = self.spec;
        self.mst_nodes.clear();
        self.mst_nodes.push(spec.m);
        if let Some(&last) = self.path.last() {
            self.mst_nodes.push(last);
        }
        for j in 0..spec.m {
            if visited & (1 << j) == 0 {
                self.mst_nodes.push(j);
            }
        }
        let s = self.mst_nodes.len();
        if s <= 1 {
            return cost;
        }
        for i in 0..s {
            self.mst_done[i] = false;
            self.mst_dist[i] = f64::INFINITY;
        }
        self.mst_dist[0] = 0.0;
        let mut total = 0.0;
        for _ in 0..s {
            let mut pick = usize::MAX;
            let mut pick_d = f64::INFINITY;
            for i in 0..s {
                if !self.mst_done[i] && self.mst_dist[i] < pick_d {
                    pick = i;
                    pick_d = self.mst_dist[i];
                }
            }
            self.mst_done[pick] = true;
            total += pick_d;
            let a = self.mst_nodes[pick];
            for i in 0..s {
                if !self.mst_done[i] {
                    let d = spec.d(a, self.mst_nodes[i]);
                    if d < self.mst_dist[i] {
                        self.mst_dist[i] = d;
                    }
                }
            }
        }
        cost + total
    }

    fn descend(&mut self, visited: u64, cost: f64) {
        let spec = self.spec;
        self.nodes += 1;
        if self.nodes % 2048 == 0 && Instant::now() > self.deadline {
            self.exhausted = true;
        }
        let lb = self.bound(visited, cost);
        if self.exhausted {
            self.dual_floor = self.dual_floor.min(lb);
            return;
        }
        if lb >= self.best_cost {
            return;
        }
        if self.path.len() == spec.m {
            let last = *self.path.last().expect("m >= 1");
            if !spec.anchor_adjacent_allowed(last) {
                return;
            }
            let total = cost + spec.d(last, spec.m);
            if total < self.best_cost {
                self.best_cost = total;
                self.best_order = self.path.clone();
            }
            return;
        }
        let mut children: Vec<(f64, usize)> = Vec::with_capacity(spec.m);
        for j in 0..spec.m {
            if visited & (1 << j) != 0 {
                continue;
            }
            let (edge, ok) = match self.path.last() {
                Some(&last) => (spec.d(last, j), spec.adjacent_allowed(last, j)),
                None => (spec.d(spec.m, j), spec.anchor_adjacent_allowed(j)),
            };
            if ok {
                children.push((edge, j));
            }
        }
        children.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite").then(a.1.cmp(&b.1)));
        for (edge, j) in children {
            self.path.push(j);
            self.descend(visited | (1 << j), cost + edge);
            self.path.pop();
            if self.exhausted {
                // This node's bound covers every subtree abandoned below it.
                self.dual_floor = self.dual_floor.min(lb);
                return;
            }
        }
    }
}

/// Nearest-neighbor order from the anchor, ignoring adjacency constraints.
fn nn_order(spec: &CycleSpec) -> Vec<usize> {
    let m = spec.m;
    let mut order = Vec::with_capacity(m);
    let mut used = vec![false; m];
    let mut cur = m;
    for _ in 0..m {
        let mut pick = usize::MAX;
        let mut pick_d = f64::INFINITY;
        for j in 0..m {
            if !used[j] && spec.d(cur, j) < pick_d {
                pick = j;
                pick_d = spec.d(cur, j);
            }
        }
        used[pick] = true;
        order.push(pick);
        cur = pick;
    }
    order
}

/// First-improvement 2-opt over the anchored cycle, sweeping until a pass
/// finds nothing. Constraint-free specs only.
fn two_opt(spec: &CycleSpec, mut order: Vec<usize>) -> Vec<usize> {
    let m = order.len();
    if m < 3 {
        return order;
    }
    loop {
        let mut improved = false;
        for i in 0..m - 1 {
            for j in i + 1..m {
                let a = if i == 0 { spec.m } else { order[i - 1] };
                let b = order[i];
                let c = order[j];
                let e = if j == m - 1 { spec.m } else { order[j + 1] };
                let delta = spec.d(a, c) + spec.d(b, e) - spec.d(a, b) - spec.d(c, e);
                if delta < -1e-12 {
                    order[i..=j].reverse();
                    improved = true;
                }
            }
        }
        if !improved {
            return order;
        }
    }
}

/// Cheapest feasible insertion of the duplicate slot (the last slot) into a
/// base order over the remaining slots.
fn best_duplicate_insertion(spec: &CycleSpec, base_order: &[usize], dup_slot: usize) -> Vec<usize> {
    let mut best: Option<(f64, usize)> = None;
    for pos in 0..=base_order.len() {
        let mut cand: Vec<usize> = base_order.to_vec();
        cand.insert(pos, dup_slot);
        if !spec.order_is_feasible(&cand) {
            continue;
        }
        let cost = spec.order_cost(&cand);
        if best.is_none_or(|(c, _)| cost < c) {
            best = Some((cost, pos));
        }
    }
    let (_, pos) = best.expect("some insertion position is feasible for n >= 3");
    let mut out = base_order.to_vec();
    out.insert(pos, dup_slot);
    out
}
