//! Global forcing numbers, anti-forcing numbers (per matching and maximum),
//! and compatible alternating set sizes — all exact, all with certificates.
//!
//! The workhorse is an exact minimum-hitting-set solver over edge masks:
//! a global forcing set is a minimum edge set meeting every conformal cycle,
//! and an anti-forcing set of M is a minimum set of non-M edges meeting every
//! M-alternating cycle.

use crate::cycles::{cycle_alternates, for_each_cycle_bounded, Cycle};
use crate::graph::Graph;
use crate::matching::{
    for_each_perfect_matching, is_perfect_matching, MatchabilityOracle,
};
use crate::{bits, Error, Result};

/// Default node budget for hitting-set search.
const SEARCH_BUDGET: u64 = 20_000_000;
/// Default guard on enumerated cycles and matchings.
const DEFAULT_MATCHING_GUARD: usize = 1_000_000;
const CYCLE_GUARD: usize = 2_000_000;

/// An exact-cover-style instance: choose a minimum subset of `universe`
/// meeting every mask in `targets`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HittingInstance {
    /// Candidate edges, as a mask.
    pub universe: u128,
    /// Edge sets that must each be intersected; all nonempty, all within
    /// the universe.
    pub targets: Vec<u128>,
}

impl HittingInstance {
    fn validate(&self) -> Result<()> {
        for (i, &t) in self.targets.iter().enumerate() {
            if t == 0 {
                return Err(Error::Infeasible(format!(
                    "target {i} is empty and can never be hit"
                )));
            }
            if t & !self.universe != 0 {
                return Err(Error::Precondition(format!(
                    "target {i} leaves the universe"
                )));
            }
        }
        Ok(())
    }
}

/// Exact minimum hitting set; among all optima, returns the one whose sorted
/// edge-index tuple is lexicographically least.
pub fn min_hitting_set(inst: &HittingInstance) -> Result<u128> {
    inst.validate()?;
    // Hitting the inclusion-minimal targets hits every target, so the
    // reduced instance has the same solutions.
    let minimal = minimal_targets(&inst.targets);
    let k = optimum_size(&minimal)?;
    lex_least_hitting_set(inst.universe, &minimal, k)
}

/// Exact minimum hitting-set size (no witness).
pub fn min_hitting_set_size(inst: &HittingInstance) -> Result<usize> {
    inst.validate()?;
    optimum_size(&inst.targets)
}

/// Greedy cover: repeatedly take the edge hitting the most uncovered
/// targets (ties to the lowest index). Returns its size as an upper bound.
fn greedy_cover_size(targets: &[u128]) -> usize {
    let mut uncovered: Vec<u128> = targets.to_vec();
    let mut size = 0;
    while !uncovered.is_empty() {
        let mut candidates = 0u128;
        for &t in &uncovered {
            candidates |= t;
        }
        let best = bits(candidates)
            .max_by_key(|&e| {
                (
                    uncovered.iter().filter(|&&t| (t >> e) & 1 == 1).count(),
                    usize::MAX - e, // ties to the lowest index
                )
            })
            .expect("uncovered targets are nonempty");
        uncovered.retain(|&t| (t >> best) & 1 == 0);
        size += 1;
    }
    size
}

/// Greedy pairwise-disjoint target packing: a lower bound on the hitting-set
/// size, since disjoint targets need distinct edges.
fn packing_lower_bound(targets: &[u128]) -> usize {
    let mut taken = 0u128;
    let mut count = 0;
    for &t in targets {
        if t & taken == 0 {
            taken |= t;
            count += 1;
        }
    }
    count
}

/// Inclusion-minimal targets: an edge set hitting a target also hits every
/// superset of it, so superset targets are redundant. Skipped (input passed
/// through) when the quadratic scan would be too large.
fn minimal_targets(targets: &[u128]) -> Vec<u128> {
    if targets.len() > 20_000 {
        return targets.to_vec();
    }
    let mut sorted: Vec<u128> = targets.to_vec();
    sorted.sort_unstable_by_key(|&t| (t.count_ones(), t));
    sorted.dedup();
    let mut minimal: Vec<u128> = Vec::new();
    'outer: for &t in &sorted {
        for &s in &minimal {
            if s & t == s {
                continue 'outer;
            }
        }
        minimal.push(t);
    }
    minimal
}

/// Branch and bound for the optimum size. Targets are reduced to the
/// inclusion-minimal ones, then each node first forces every edge that is
/// some target's last candidate and then branches on the edge hitting the
/// most uncovered targets: either it is chosen (covering those targets) or
/// discarded (cleared from every target). Pruned when the chosen count plus
/// max(disjoint-target packing, ⌈uncovered/max-frequency⌉) reaches the
/// incumbent.
fn optimum_size(targets: &[u128]) -> Result<usize> {
    if targets.is_empty() {
        return Ok(0);
    }
    let minimal = minimal_targets(targets);
    let mut best = greedy_cover_size(&minimal);
    let mut budget = SEARCH_BUDGET;
    fn go(
        mut uncovered: Vec<u128>,
        mut chosen: usize,
        best: &mut usize,
        budget: &mut u64,
    ) -> Result<()> {
        if *budget == 0 {
            return Err(Error::CapExceeded(
                "hitting-set search budget exhausted".into(),
            ));
        }
        *budget -= 1;
        loop {
            if uncovered.is_empty() {
                *best = (*best).min(chosen);
                return Ok(());
            }
            if uncovered.iter().any(|&t| t == 0) {
                return Ok(()); // a target lost every candidate: dead branch
            }
            let mut forced = 0u128;
            for &t in &uncovered {
                if t.count_ones() == 1 {
                    forced |= t;
                }
            }
            if forced == 0 {
                break;
            }
            chosen += forced.count_ones() as usize;
            if chosen >= *best {
                return Ok(());
            }
            uncovered.retain(|&t| t & forced == 0);
        }
        let mut count = [0u32; 128];
        let mut union_mask = 0u128;
        for &t in &uncovered {
            union_mask |= t;
            for e in bits(t) {
                count[e] += 1;
            }
        }
        let (mut pivot, mut max_freq) = (0usize, 0u32);
        for e in bits(union_mask) {
            if count[e] > max_freq {
                max_freq = count[e];
                pivot = e;
            }
        }
        let density = uncovered.len().div_ceil(max_freq as usize);
        if chosen + packing_lower_bound(&uncovered).max(density) >= *best {
            return Ok(());
        }
        let included: Vec<u128> = uncovered
            .iter()
            .copied()
            .filter(|t| (t >> pivot) & 1 == 0)
            .collect();
        go(included, chosen + 1, best, budget)?;
        let excluded: Vec<u128> = uncovered.iter().map(|&t| t & !(1u128 << pivot)).collect();
        go(excluded, chosen, best, budget)
    }
    go(minimal, 0, &mut best, &mut budget)?;
    Ok(best)
}

/// First (lexicographically least) hitting set of exactly the optimal size
/// `k`: depth-first over edge indices in ascending order, preferring
/// inclusion, with packing and reachability pruning.
fn lex_least_hitting_set(universe: u128, targets: &[u128], k: usize) -> Result<u128> {
    if targets.is_empty() {
        return Ok(0);
    }
    let mut budget = SEARCH_BUDGET;
    fn go(
        avail: u128,
        uncovered: &[u128],
        chosen: u128,
        left: usize,
        budget: &mut u64,
    ) -> Result<Option<u128>> {
        if uncovered.is_empty() {
            return Ok(Some(chosen));
        }
        if *budget == 0 {
            return Err(Error::CapExceeded(
                "hitting-set witness search budget exhausted".into(),
            ));
        }
        *budget -= 1;
        if left == 0 {
            return Ok(None);
        }
        if uncovered.iter().any(|&t| t & avail == 0) {
            return Ok(None);
        }
        // Disjoint uncovered targets each need their own remaining pick.
        let mut taken = 0u128;
        let mut need = 0usize;
        for &t in uncovered {
            let t = t & avail;
            if t & taken == 0 {
                taken |= t;
                need += 1;
                if need > left {
                    return Ok(None);
                }
            }
        }
        let e = avail.trailing_zeros() as usize;
        let rest_avail = avail & !(1u128 << e);
        // Include e only when it still hits something uncovered (a minimum
        // solution never contains a redundant edge).
        if uncovered.iter().any(|&t| (t >> e) & 1 == 1) {
            let remaining: Vec<u128> = uncovered
                .iter()
                .copied()
                .filter(|t| (t >> e) & 1 == 0)
                .collect();
            if let Some(hit) = go(rest_avail, &remaining, chosen | (1 << e), left - 1, budget)? {
                return Ok(Some(hit));
            }
        }
        go(rest_avail, uncovered, chosen, left, budget)
    }
    go(universe, targets, 0, k, &mut budget)?
        .ok_or_else(|| Error::Infeasible("no hitting set of optimal size found".into()))
}

/// Summary of every cycle of a matchable graph, gathered in one sweep.
struct CycleCensus {
    /// Edge masks of the conformal cycles (the global-forcing targets).
    conformal: Vec<u128>,
    total_cycles: usize,
    even_cycles: usize,
}

fn cycle_census(g: &Graph, oracle: &MatchabilityOracle<'_>) -> Result<CycleCensus> {
    let all = g.vertices_mask();
    if !oracle.matchable(all) {
        return Err(Error::NotMatchable);
    }
    let mut census = CycleCensus {
        conformal: Vec::new(),
        total_cycles: 0,
        even_cycles: 0,
    };
    let mut edge_mask_buf = 0u128; // recomputed per conformal cycle
    let complete = for_each_cycle_bounded(g, usize::MAX, &mut |walk, mask| {
        census.total_cycles += 1;
        if census.total_cycles > CYCLE_GUARD {
            return false;
        }
        if walk.len() % 2 == 0 {
            census.even_cycles += 1;
            if oracle.matchable(all & !mask) {
                edge_mask_buf = 0u128;
                for i in 0..walk.len() {
                    let u = walk[i];
                    let v = walk[(i + 1) % walk.len()];
                    let idx = g.edge_index(u.min(v), u.max(v)).expect("cycle edge");
                    edge_mask_buf |= 1 << idx;
                }
                census.conformal.push(edge_mask_buf);
            }
        }
        true
    });
    if !complete {
        return Err(Error::CapExceeded(format!(
            "more than {CYCLE_GUARD} cycles"
        )));
    }
    Ok(census)
}

/// Maximum number of odd cycles that fit together in an even-cycle-free
/// subgraph. Such a subgraph is a cactus whose blocks are single edges or
/// odd cycles, so a cycle may be added exactly when it shares at most one
/// vertex with each connected component of the cycles already chosen
/// (sharing two vertices with one component would close a second,
/// even-length cycle through it).
fn max_odd_cycle_cactus_packing(g: &Graph) -> Result<usize> {
    let mut masks: Vec<u128> = Vec::new();
    let complete = for_each_cycle_bounded(g, usize::MAX, &mut |walk, mask| {
        if walk.len() % 2 == 1 {
            if masks.len() >= CYCLE_GUARD {
                return false;
            }
            masks.push(mask);
        }
        true
    });
    if !complete {
        return Err(Error::CapExceeded(format!(
            "more than {CYCLE_GUARD} odd cycles"
        )));
    }
    // Short cycles pack densest, so trying them first reaches the cap early.
    masks.sort_by_key(|m| m.count_ones());
    // t cycles need ≥ 3t edges (edge-disjoint) and ≥ 2t+1 vertices per
    // component (each cycle beyond the first adds ≥ 2 new vertices).
    let hard_cap = (g.m() / 3).min(g.n().saturating_sub(1) / 2);
    fn go(
        masks: &[u128],
        start: usize,
        comps: &mut Vec<u128>,
        count: usize,
        best: &mut usize,
        cap: usize,
    ) {
        *best = (*best).max(count);
        if *best >= cap || count + (masks.len() - start) <= *best {
            return;
        }
        for i in start..masks.len() {
            let c = masks[i];
            let mut merged = c;
            let mut ok = true;
            for &comp in comps.iter() {
                let shared = comp & c;
                if shared != 0 {
                    if shared.count_ones() > 1 {
                        ok = false;
                        break;
                    }
                    merged |= comp;
                }
            }
            if !ok {
                continue;
            }
            let saved = comps.clone();
            comps.retain(|&comp| comp & c == 0);
            comps.push(merged);
            go(masks, i + 1, comps, count + 1, best, cap);
            *comps = saved;
            if *best >= cap {
                return;
            }
        }
    }
    let mut best = 0;
    go(&masks, 0, &mut Vec::new(), 0, &mut best, hard_cap);
    Ok(best)
}

/// Whether `s` is a global forcing set: an edge set meeting every conformal
/// cycle, equivalently one on which all perfect matchings leave distinct
/// traces. Errors when `s` is not within the edge set or the graph is not
/// matchable.
pub fn is_global_forcing_set(g: &Graph, s: u128) -> Result<bool> {
    if s & !g.edges_mask() != 0 {
        return Err(Error::Precondition(
            "candidate set uses edges outside the graph".into(),
        ));
    }
    let oracle = MatchabilityOracle::new(g);
    let all = g.vertices_mask();
    if !oracle.matchable(all) {
        return Err(Error::NotMatchable);
    }
    let mut ok = true;
    for_each_cycle_bounded(g, usize::MAX, &mut |walk, mask| {
        if walk.len() % 2 == 0 && oracle.matchable(all & !mask) {
            let mut edge_mask = 0u128;
            for i in 0..walk.len() {
                let u = walk[i];
                let v = walk[(i + 1) % walk.len()];
                let idx = g.edge_index(u.min(v), u.max(v)).expect("cycle edge");
                edge_mask |= 1 << idx;
            }
            if edge_mask & s == 0 {
                ok = false;
                return false;
            }
        }
        true
    });
    Ok(ok)
}

/// Exact global forcing number with its lexicographically least witness.
pub fn global_forcing_number(g: &Graph) -> Result<(usize, u128)> {
    let oracle = MatchabilityOracle::new(g);
    let census = cycle_census(g, &oracle)?;
    if census.conformal.is_empty() {
        return Ok((0, 0));
    }
    let rank = g.n() - g.components().len();
    if census.conformal.len() == census.total_cycles {
        // Every cycle is conformal: hitting them all means the complement is
        // a maximal spanning forest, so the optimum is m − rank and the
        // lex-least witness follows by greedy inclusion.
        let k = g.m() - rank;
        return Ok((k, lex_least_coforest(g)));
    }
    let k = if census.conformal.len() == census.even_cycles {
        // Exactly the even cycles are conformal: a complement without even
        // cycles is a spanning forest plus one extra edge per odd cycle of a
        // maximum cactus packing.
        g.m() - rank - max_odd_cycle_cactus_packing(g)?
    } else {
        optimum_size(&census.conformal)?
    };
    let witness = lex_least_hitting_set(g.edges_mask(), &minimal_targets(&census.conformal), k)?;
    debug_assert_eq!(
        witness.count_ones() as usize,
        k,
        "witness size must match the optimum"
    );
    Ok((k, witness))
}

/// Exact global forcing number without a witness; avoids witness search on
/// hosts where only the value matters.
pub fn global_forcing_number_value(g: &Graph) -> Result<usize> {
    let oracle = MatchabilityOracle::new(g);
    global_forcing_number_value_with(g, &oracle)
}

/// `global_forcing_number_value` reusing a caller-provided oracle.
pub fn global_forcing_number_value_with(
    g: &Graph,
    oracle: &MatchabilityOracle<'_>,
) -> Result<usize> {
    let census = cycle_census(g, oracle)?;
    if census.conformal.is_empty() {
        return Ok(0);
    }
    let rank = g.n() - g.components().len();
    if census.conformal.len() == census.total_cycles {
        return Ok(g.m() - rank);
    }
    if census.conformal.len() == census.even_cycles {
        return Ok(g.m() - rank - max_odd_cycle_cactus_packing(g)?);
    }
    optimum_size(&census.conformal)
}

/// Lexicographically least complement of a maximal spanning forest: scan
/// edges ascending and keep an edge out of the forest whenever the remaining
/// edges still span every component.
fn lex_least_coforest(g: &Graph) -> u128 {
    let full_rank = g.n() - g.components().len();
    let mut removed = 0u128;
    for e in 0..g.m() {
        let candidate = removed | (1 << e);
        if edge_set_rank(g, g.edges_mask() & !candidate) == full_rank {
            removed = candidate;
        }
    }
    removed
}

/// Rank (vertices − components) of the subgraph formed by `edges`.
fn edge_set_rank(g: &Graph, edges: u128) -> usize {
    let mut parent: Vec<usize> = (0..=g.n()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut rank = 0;
    for i in bits(edges) {
        let (u, v) = g.edge_at(i);
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent[ru] = rv;
            rank += 1;
        }
    }
    rank
}

/// Whether `s ⊆ E(G)∖M` meets every M-alternating cycle — equivalently,
/// deleting `s` leaves M as the unique perfect matching. Errors when M is
/// not perfect or `s` touches M.
pub fn is_anti_forcing_set(g: &Graph, m: u128, s: u128) -> Result<bool> {
    if !is_perfect_matching(g, m) {
        return Err(Error::Precondition(
            "the given edge set is not a perfect matching".into(),
        ));
    }
    if s & !g.edges_mask() != 0 {
        return Err(Error::Precondition(
            "candidate set uses edges outside the graph".into(),
        ));
    }
    if s & m != 0 {
        return Err(Error::Precondition(
            "an anti-forcing set may not contain matching edges".into(),
        ));
    }
    for c in alternating_cycle_masks(g, m) {
        if c & s == 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Edge masks of all M-alternating cycles, in deterministic cycle order.
fn alternating_cycle_masks(g: &Graph, m: u128) -> Vec<u128> {
    let mut out = Vec::new();
    for_each_cycle_bounded(g, usize::MAX, &mut |walk, _| {
        if walk.len() % 2 == 1 {
            return true;
        }
        let mut edge_mask = 0u128;
        let mut covered = 0u128;
        let mut alternates = true;
        for i in 0..walk.len() {
            let u = walk[i];
            let v = walk[(i + 1) % walk.len()];
            let idx = g.edge_index(u.min(v), u.max(v)).expect("cycle edge");
            edge_mask |= 1 << idx;
            if (m >> idx) & 1 == 1 {
                let pair = (1u128 << u) | (1 << v);
                if covered & pair != 0 {
                    alternates = false;
                    break;
                }
                covered |= pair;
            }
        }
        if alternates && edge_mask.count_ones() as usize == walk.len() {
            // Alternation means M ∩ E(C) is a perfect matching of C.
            let mut cycle_vertices = 0u128;
            for &v in walk {
                cycle_vertices |= 1 << v;
            }
            if covered == cycle_vertices {
                out.push(edge_mask);
            }
        }
        true
    });
    out
}

/// Exact anti-forcing number of M with its lexicographically least witness:
/// a minimum hitting set over the non-M parts of the M-alternating cycles.
pub fn anti_forcing_number(g: &Graph, m: u128) -> Result<(usize, u128)> {
    if !is_perfect_matching(g, m) {
        return Err(Error::Precondition(
            "the given edge set is not a perfect matching".into(),
        ));
    }
    let targets: Vec<u128> = alternating_cycle_masks(g, m)
        .into_iter()
        .map(|c| c & !m)
        .collect();
    let inst = HittingInstance {
        universe: g.edges_mask() & !m,
        targets,
    };
    let witness = min_hitting_set(&inst)?;
    Ok((witness.count_ones() as usize, witness))
}

/// Exact maximum anti-forcing number: (Af, first attaining matching in
/// enumeration order, its lexicographically least anti-forcing set). The
/// matching enumeration is guarded; exceeding the guard is an error.
pub fn max_anti_forcing_number(g: &Graph) -> Result<(usize, u128, u128)> {
    max_anti_forcing_number_guarded(g, DEFAULT_MATCHING_GUARD)
}

/// `max_anti_forcing_number` with an explicit matching-count guard.
pub fn max_anti_forcing_number_guarded(
    g: &Graph,
    guard: usize,
) -> Result<(usize, u128, u128)> {
    let matchings = crate::matching::perfect_matchings_capped(g, guard)?;
    if matchings.is_empty() {
        return Err(Error::NotMatchable);
    }
    let mut best: Option<(usize, u128, u128)> = None;
    for m in matchings {
        let targets: Vec<u128> = alternating_cycle_masks(g, m)
            .into_iter()
            .map(|c| c & !m)
            .collect();
        let targets = minimal_targets(&targets);
        let size = optimum_size(&targets)?;
        let better = match &best {
            Some((bs, _, _)) => size > *bs,
            None => true,
        };
        if better {
            let witness = lex_least_hitting_set(g.edges_mask() & !m, &targets, size)?;
            best = Some((size, m, witness));
        }
    }
    Ok(best.expect("at least one matching"))
}

/// Exact maximum anti-forcing number without witnesses (value only).
pub fn max_anti_forcing_number_value(g: &Graph) -> Result<usize> {
    let mut best = 0usize;
    let mut count = 0usize;
    let mut err = None;
    let complete = for_each_perfect_matching(g, g.vertices_mask(), &mut |m| {
        count += 1;
        if count > DEFAULT_MATCHING_GUARD {
            return false;
        }
        let targets: Vec<u128> = alternating_cycle_masks(g, m)
            .into_iter()
            .map(|c| c & !m)
            .collect();
        match optimum_size(&targets) {
            Ok(size) => {
                best = best.max(size);
                true
            }
            Err(e) => {
                err = Some(e);
                false
            }
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    if !complete {
        return Err(Error::CapExceeded(format!(
            "more than {DEFAULT_MATCHING_GUARD} perfect matchings"
        )));
    }
    if count == 0 {
        return Err(Error::NotMatchable);
    }
    Ok(best)
}

/// Maximum size of a compatible set of M-alternating cycles (pairwise
/// sharing only M-edges), with the lexicographically least witness in cycle
/// enumeration order. Exact via clique search over the compatibility
/// relation.
pub fn compatible_alternating_number(g: &Graph, m: u128) -> Result<(usize, Vec<Cycle>)> {
    if !is_perfect_matching(g, m) {
        return Err(Error::Precondition(
            "the given edge set is not a perfect matching".into(),
        ));
    }
    let cycles: Vec<Cycle> = crate::cycles::enumerate_cycles(g)
        .into_iter()
        .filter(|c| cycle_alternates(g, c, m))
        .collect();
    let n = cycles.len();
    if n == 0 {
        return Ok((0, Vec::new()));
    }
    // Compatibility adjacency as bitsets over cycle indices.
    let mut compat: Vec<Vec<bool>> = vec![vec![false; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let shared = cycles[i].edge_mask() & cycles[j].edge_mask();
            let ok = shared & !m == 0;
            compat[i][j] = ok;
            compat[j][i] = ok;
        }
    }
    // Maximum clique size by branch and bound over index order.
    fn clique_size(compat: &[Vec<bool>], cand: &[usize], count: usize, best: &mut usize) {
        *best = (*best).max(count);
        if count + cand.len() <= *best {
            return;
        }
        for (pos, &i) in cand.iter().enumerate() {
            if count + (cand.len() - pos) <= *best {
                break;
            }
            let next: Vec<usize> = cand[pos + 1..]
                .iter()
                .copied()
                .filter(|&j| compat[i][j])
                .collect();
            clique_size(compat, &next, count + 1, best);
        }
    }
    let all: Vec<usize> = (0..n).collect();
    let mut best = 0;
    clique_size(&compat, &all, 0, &mut best);
    // Lexicographically first clique of maximum size, by ascending indices.
    fn first_clique(
        compat: &[Vec<bool>],
        cand: &[usize],
        chosen: &mut Vec<usize>,
        left: usize,
    ) -> bool {
        if left == 0 {
            return true;
        }
        if cand.len() < left {
            return false;
        }
        for (pos, &i) in cand.iter().enumerate() {
            if cand.len() - pos < left {
                return false;
            }
            chosen.push(i);
            let next: Vec<usize> = cand[pos + 1..]
                .iter()
                .copied()
                .filter(|&j| compat[i][j])
                .collect();
            if first_clique(compat, &next, chosen, left - 1) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let mut chosen = Vec::new();
    let found = first_clique(&compat, &all, &mut chosen, best);
    debug_assert!(found, "a maximum clique must exist");
    Ok((best, chosen.into_iter().map(|i| cycles[i].clone()).collect()))
}

/// Everything the `analyze` surface needs in one pass.
#[derive(Debug, Clone)]
pub struct ForcingReport {
    /// Global forcing number.
    pub gf: usize,
    /// Lex-least minimum global forcing set.
    pub gf_witness: u128,
    /// (matching, anti-forcing number, lex-least witness), in matching
    /// enumeration order.
    pub af_per_matching: Vec<(u128, usize, u128)>,
    /// Maximum anti-forcing number.
    pub af_max: usize,
    /// First attaining matching and its witness.
    pub af_max_witness: (u128, u128),
    /// Compatible alternating numbers per matching, when requested.
    pub c_prime: Option<Vec<(u128, usize)>>,
}

/// Assemble the full forcing report for a matchable graph.
pub fn forcing_report(g: &Graph, with_c_prime: bool) -> Result<ForcingReport> {
    let (gf, gf_witness) = global_forcing_number(g)?;
    let matchings = crate::matching::perfect_matchings_capped(g, DEFAULT_MATCHING_GUARD)?;
    if matchings.is_empty() {
        return Err(Error::NotMatchable);
    }
    let mut af_per_matching = Vec::with_capacity(matchings.len());
    let mut af_max = 0usize;
    let mut af_max_witness = (0u128, 0u128);
    let mut first = true;
    for &m in &matchings {
        let (af, w) = anti_forcing_number(g, m)?;
        if first || af > af_max {
            af_max = af;
            af_max_witness = (m, w);
            first = false;
        }
        af_per_matching.push((m, af, w));
    }
    let c_prime = if with_c_prime {
        let mut list = Vec::with_capacity(matchings.len());
        for &m in &matchings {
            let (cp, _) = compatible_alternating_number(g, m)?;
            let af = af_per_matching
                .iter()
                .find(|(mm, _, _)| *mm == m)
                .map(|(_, af, _)| *af)
                .expect("same matching list");
            debug_assert!(cp <= af, "compatible sets are bounded by af");
            list.push((m, cp));
        }
        Some(list)
    } else {
        None
    };
    Ok(ForcingReport {
        gf,
        gf_witness,
        af_per_matching,
        af_max,
        af_max_witness,
        c_prime,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::matching::{edge_mask_of, enumerate_perfect_matchings};

    #[test]
    fn forcing_number_allows_odd_cycles_sharing_a_cut_vertex() {
        // Two triangles joined at one vertex fit together in an even-cycle-
        // free subgraph, so only the lone conformal quadrilateral needs
        // hitting. A vertex-disjoint-only packing would misreport gf = 2.
        let g = Graph::from_edges(
            6,
            &[(1, 5), (1, 6), (2, 5), (2, 6), (3, 4), (3, 6), (4, 6), (5, 6)],
        )
        .unwrap();
        let (gf, witness) = global_forcing_number(&g).unwrap();
        assert_eq!(gf, 1);
        assert_eq!(witness.count_ones(), 1);
        assert!(is_global_forcing_set(&g, witness).unwrap());
        assert_eq!(global_forcing_number_value(&g).unwrap(), 1);
    }

    #[test]
    fn hitting_set_basics() {
        // Universe {0,1,2}; targets {0,1} and {1,2} → {1}.
        let inst = HittingInstance {
            universe: 0b111,
            targets: vec![0b011, 0b110],
        };
        assert_eq!(min_hitting_set(&inst).unwrap(), 0b010);
        // Three pairwise-disjoint targets need three edges.
        let inst = HittingInstance {
            universe: 0b111111,
            targets: vec![0b11, 0b1100, 0b110000],
        };
        assert_eq!(min_hitting_set_size(&inst).unwrap(), 3);
        // Empty target is infeasible.
        let inst = HittingInstance {
            universe: 0b1,
            targets: vec![0],
        };
        assert!(matches!(min_hitting_set(&inst), Err(Error::Infeasible(_))));
        // Lexicographic tie-break: {0,3} beats {1,2} because 0 < 1.
        let inst = HittingInstance {
            universe: 0b1111,
            targets: vec![0b0011, 0b0101, 0b1010, 0b1100],
        };
        let w = min_hitting_set(&inst).unwrap();
        assert_eq!(w.count_ones(), 2);
        assert_eq!(w, 0b1001);
    }

    #[test]
    fn hitting_set_on_k4_conformal_cycles() {
        let k4 = Graph::complete(4);
        let targets: Vec<u128> = crate::cycles::conformal_cycles(&k4)
            .unwrap()
            .iter()
            .map(|c| c.edge_mask())
            .collect();
        let inst = HittingInstance {
            universe: k4.edges_mask(),
            targets,
        };
        let w = min_hitting_set(&inst).unwrap();
        assert_eq!(w.count_ones(), 2);
        // Lex-least witness is {12, 13}: edge indices 0 and 1.
        assert_eq!(w, 0b11);
    }

    #[test]
    fn global_forcing_set_predicate() {
        let c6 = Graph::cycle(6);
        let one = edge_mask_of(&c6, &[(3, 4)]).unwrap();
        assert!(is_global_forcing_set(&c6, one).unwrap());
        assert!(!is_global_forcing_set(&c6, 0).unwrap());
        let k4 = Graph::complete(4);
        let s = edge_mask_of(&k4, &[(1, 2), (3, 4)]).unwrap();
        assert!(!is_global_forcing_set(&k4, s).unwrap());
        assert!(is_global_forcing_set(&k4, 0b11).unwrap());
        assert!(is_global_forcing_set(&k4, 1 << 100).is_err());
    }

    #[test]
    fn global_forcing_numbers_match_known_values() {
        assert_eq!(global_forcing_number(&Graph::cycle(6)).unwrap().0, 1);
        assert_eq!(global_forcing_number(&Graph::complete(4)).unwrap().0, 2);
        assert_eq!(
            global_forcing_number(&Graph::complete_bipartite(3, 3))
                .unwrap()
                .0,
            4
        );
        assert_eq!(global_forcing_number(&Graph::theta(3, 3, 3)).unwrap().0, 2);
        // Witnesses are valid and lex-least starts with the K4 pair {12,13}.
        let (k, w) = global_forcing_number(&Graph::complete(4)).unwrap();
        assert_eq!((k, w), (2, 0b11));
        assert!(is_global_forcing_set(&Graph::complete(4), w).unwrap());
        // Value-only agrees.
        for g in [
            Graph::cycle(6),
            Graph::complete(4),
            Graph::complete_bipartite(3, 3),
            Graph::theta(3, 3, 3),
            Graph::complete(6),
        ] {
            assert_eq!(
                global_forcing_number_value(&g).unwrap(),
                global_forcing_number(&g).unwrap().0
            );
        }
    }

    #[test]
    fn gf_brute_force_cross_check_small() {
        // Brute force: smallest S with all matchings distinct on S.
        fn brute(g: &Graph) -> usize {
            let pms = enumerate_perfect_matchings(g);
            for k in 0..=g.m() {
                let mut subset = (1u128 << k) - 1;
                let limit = 1u128 << g.m();
                // iterate all k-subsets via Gosper's hack
                while subset < limit {
                    let distinct = {
                        let mut traces: Vec<u128> = pms.iter().map(|m| m & subset).collect();
                        traces.sort_unstable();
                        traces.windows(2).all(|w| w[0] != w[1])
                    };
                    if distinct {
                        return k;
                    }
                    if subset == 0 {
                        break;
                    }
                    let c = subset & subset.wrapping_neg();
                    let r = subset + c;
                    subset = (((r ^ subset) >> 2) / c) | r;
                }
                if k == 0 {
                    continue;
                }
            }
            unreachable!("full edge set always distinguishes")
        }
        for g in [
            Graph::cycle(4),
            Graph::cycle(6),
            Graph::complete(4),
            Graph::theta(3, 3, 3),
            Graph::complete_bipartite(2, 2),
            Graph::complete_bipartite(2, 3),
            Graph::complete(6),
        ] {
            if !crate::matching::is_matchable(&g) {
                continue;
            }
            assert_eq!(
                global_forcing_number(&g).unwrap().0,
                brute(&g),
                "gf mismatch on {g:?}"
            );
        }
    }

    #[test]
    fn anti_forcing_set_predicate() {
        let c6 = Graph::cycle(6);
        let m = enumerate_perfect_matchings(&c6)[0];
        let non_m = c6.edges_mask() & !m;
        let one = 1u128 << non_m.trailing_zeros();
        assert!(is_anti_forcing_set(&c6, m, one).unwrap());
        assert!(!is_anti_forcing_set(&c6, m, 0).unwrap());
        let k4 = Graph::complete(4);
        let m = edge_mask_of(&k4, &[(1, 2), (3, 4)]).unwrap();
        let s = edge_mask_of(&k4, &[(2, 3), (2, 4)]).unwrap();
        assert!(is_anti_forcing_set(&k4, m, s).unwrap());
        // Sets touching M are rejected outright.
        assert!(is_anti_forcing_set(&k4, m, m).is_err());
    }

    #[test]
    fn anti_forcing_set_means_unique_matching() {
        // Definitional cross-check on small graphs: S anti-forces M iff
        // G − S has exactly one perfect matching, namely M.
        for g in [
            Graph::cycle(6),
            Graph::complete(4),
            Graph::theta(3, 3, 3),
            Graph::complete_bipartite(3, 3),
        ] {
            let pms = enumerate_perfect_matchings(&g);
            for &m in pms.iter().take(3) {
                let non_m: Vec<usize> = bits(g.edges_mask() & !m).collect();
                let count = non_m.len().min(10);
                for sub in 0u32..(1 << count) {
                    let mut s = 0u128;
                    for (i, &e) in non_m.iter().take(count).enumerate() {
                        if (sub >> i) & 1 == 1 {
                            s |= 1 << e;
                        }
                    }
                    let claimed = is_anti_forcing_set(&g, m, s).unwrap();
                    let without = g.without_edges(s);
                    let remaining = enumerate_perfect_matchings(&without);
                    // Re-map m into the edge indexing of `without`.
                    let m_pairs = crate::matching::edge_pairs(&g, m);
                    let m_there = edge_mask_of(&without, &m_pairs).unwrap();
                    let actually = remaining.len() == 1 && remaining[0] == m_there;
                    assert_eq!(claimed, actually, "graph {g:?} m={m:b} s={s:b}");
                }
            }
        }
    }

    #[test]
    fn anti_forcing_numbers_on_theta_and_c6() {
        let c6 = Graph::cycle(6);
        for m in enumerate_perfect_matchings(&c6) {
            assert_eq!(anti_forcing_number(&c6, m).unwrap().0, 1);
        }
        let theta = Graph::theta(3, 3, 3);
        for m in enumerate_perfect_matchings(&theta) {
            let (af, w) = anti_forcing_number(&theta, m).unwrap();
            assert_eq!(af, 1, "every matching routes through one path");
            assert!(is_anti_forcing_set(&theta, m, w).unwrap());
        }
        // First matching goes through path 1; its witness is that path's
        // middle edge (3,4).
        let m1 = enumerate_perfect_matchings(&theta)[0];
        let (_, w) = anti_forcing_number(&theta, m1).unwrap();
        assert_eq!(w, edge_mask_of(&theta, &[(3, 4)]).unwrap());
    }

    #[test]
    fn max_anti_forcing_numbers() {
        assert_eq!(max_anti_forcing_number(&Graph::cycle(6)).unwrap().0, 1);
        assert_eq!(max_anti_forcing_number(&Graph::theta(3, 3, 3)).unwrap().0, 1);
        assert_eq!(
            max_anti_forcing_number(&Graph::complete_bipartite(3, 3))
                .unwrap()
                .0,
            3
        );
        let (af, m, w) = max_anti_forcing_number(&Graph::complete_bipartite(3, 3)).unwrap();
        assert_eq!(w.count_ones() as usize, af);
        assert!(is_anti_forcing_set(&Graph::complete_bipartite(3, 3), m, w).unwrap());
        assert_eq!(
            max_anti_forcing_number_value(&Graph::complete_bipartite(3, 3)).unwrap(),
            3
        );
    }

    #[test]
    fn compatible_alternating_numbers() {
        let c6 = Graph::cycle(6);
        let m = enumerate_perfect_matchings(&c6)[0];
        assert_eq!(compatible_alternating_number(&c6, m).unwrap().0, 1);

        let k4 = Graph::complete(4);
        let m = edge_mask_of(&k4, &[(1, 3), (2, 4)]).unwrap();
        let (cp, witness) = compatible_alternating_number(&k4, m).unwrap();
        assert_eq!(cp, 2);
        assert_eq!(witness.len(), 2);
        for pair in witness.windows(2) {
            let shared = pair[0].edge_mask() & pair[1].edge_mask();
            assert_eq!(shared & !m, 0, "witness cycles share only M edges");
        }

        let theta = Graph::theta(3, 3, 3);
        let m1 = enumerate_perfect_matchings(&theta)[0];
        assert_eq!(compatible_alternating_number(&theta, m1).unwrap().0, 1);
    }

    #[test]
    fn c_prime_is_at_most_af() {
        for g in [
            Graph::cycle(6),
            Graph::complete(4),
            Graph::theta(3, 3, 3),
            Graph::complete_bipartite(3, 3),
            Graph::complete(6),
        ] {
            for m in enumerate_perfect_matchings(&g) {
                let (cp, _) = compatible_alternating_number(&g, m).unwrap();
                let (af, _) = anti_forcing_number(&g, m).unwrap();
                assert!(cp <= af, "c'={cp} af={af} on {g:?}");
            }
        }
    }

    #[test]
    fn forcing_report_is_consistent() {
        let report = forcing_report(&Graph::complete_bipartite(3, 3), true).unwrap();
        assert_eq!(report.gf, 4);
        assert_eq!(report.af_max, 3);
        assert_eq!(report.af_per_matching.len(), 6);
        let (m, w) = report.af_max_witness;
        assert!(is_anti_forcing_set(&Graph::complete_bipartite(3, 3), m, w).unwrap());
        for (m, cp) in report.c_prime.unwrap() {
            let af = report
                .af_per_matching
                .iter()
                .find(|(mm, _, _)| *mm == m)
                .unwrap()
                .1;
            assert!(cp <= af);
        }
    }

    #[test]
    fn dense_fast_path_agrees_with_search() {
        // K6: conformal cycles are exactly the even cycles, so the value
        // path uses the packing formula; cross-check against raw search.
        let k6 = Graph::complete(6);
        let targets: Vec<u128> = crate::cycles::conformal_cycles(&k6)
            .unwrap()
            .iter()
            .map(|c| c.edge_mask())
            .collect();
        let direct = optimum_size(&targets).unwrap();
        assert_eq!(global_forcing_number_value(&k6).unwrap(), direct);
        assert_eq!(global_forcing_number(&k6).unwrap().0, direct);
    }
}
