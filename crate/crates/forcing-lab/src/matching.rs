//! Maximum matching on general graphs, matchability with memoization,
//! perfect-matching enumeration, allowed/forbidden edges, elementary
//! components, and the matching covered test.
//!
//! Matchings are edge masks (`u128`) over the host graph's sorted edge list.
//! Most operations accept an `alive` vertex mask so that vertex deletions —
//! the bread and butter of conformality checks — never rebuild the graph.
//! The empty vertex set is matchable by convention; that convention is forced
//! by conformality tests on spanning subgraphs.

use crate::graph::Graph;
use crate::{bits, Error, Result};
use std::cell::RefCell;
use std::collections::HashMap;
use std::collections::VecDeque;

/// Exact maximum matching via Edmonds' blossom algorithm, as an edge mask.
#[must_use]
pub fn maximum_matching(g: &Graph) -> u128 {
    maximum_matching_within(g, g.vertices_mask())
}

/// Exact maximum matching of the subgraph induced on `alive`.
#[must_use]
pub fn maximum_matching_within(g: &Graph, alive: u128) -> u128 {
    let mate = maximum_matching_mates(g, alive);
    let mut mask = 0u128;
    for v in bits(alive) {
        let u = mate[v];
        if u > v {
            let idx = g
                .edge_index(v, u)
                .expect("matching uses only edges of the graph");
            mask |= 1 << idx;
        }
    }
    mask
}

/// Whether the whole graph has a perfect matching.
#[must_use]
pub fn is_matchable(g: &Graph) -> bool {
    is_matchable_within(g, g.vertices_mask())
}

/// Whether the subgraph induced on `alive` has a perfect matching.
/// The empty set is matchable.
#[must_use]
pub fn is_matchable_within(g: &Graph, alive: u128) -> bool {
    let k = alive.count_ones() as usize;
    if k == 0 {
        return true;
    }
    if k % 2 == 1 {
        return false;
    }
    // Cheap necessary condition: no isolated alive vertex.
    for v in bits(alive) {
        if g.neighbors_mask(v) & alive == 0 {
            return false;
        }
    }
    let mate = maximum_matching_mates(g, alive);
    bits(alive).all(|v| mate[v] != 0)
}

/// `mate[v]` = matched partner of `v` (0 when unmatched / not alive).
fn maximum_matching_mates(g: &Graph, alive: u128) -> Vec<usize> {
    let n = g.n();
    let mut mate = vec![0usize; n + 1];
    // Greedy seed.
    for &(u, v) in g.edges() {
        if (alive >> u) & 1 == 1
            && (alive >> v) & 1 == 1
            && mate[u] == 0
            && mate[v] == 0
        {
            mate[u] = v;
            mate[v] = u;
        }
    }
    let mut ctx = BlossomCtx {
        p: vec![0usize; n + 1],
        base: vec![0usize; n + 1],
        used: vec![false; n + 1],
        blossom: vec![false; n + 1],
    };
    for root in bits(alive) {
        if mate[root] != 0 {
            continue;
        }
        let exposed = find_augmenting_path(g, alive, &mate, &mut ctx, root);
        let mut u = exposed;
        while u != 0 {
            let pv = ctx.p[u];
            let ppv = mate[pv];
            mate[u] = pv;
            mate[pv] = u;
            u = ppv;
        }
    }
    mate
}

struct BlossomCtx {
    p: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    blossom: Vec<bool>,
}

/// BFS for an augmenting path from `root`, contracting blossoms on the fly.
/// Returns the exposed endpoint of an augmenting path, or 0 when none exists.
fn find_augmenting_path(
    g: &Graph,
    alive: u128,
    mate: &[usize],
    ctx: &mut BlossomCtx,
    root: usize,
) -> usize {
    let n = g.n();
    for v in 0..=n {
        ctx.p[v] = 0;
        ctx.base[v] = v;
        ctx.used[v] = false;
    }
    ctx.used[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for u in bits(g.neighbors_mask(v) & alive) {
            if ctx.base[v] == ctx.base[u] || mate[v] == u {
                continue;
            }
            if u == root || (mate[u] != 0 && ctx.p[mate[u]] != 0) {
                // Odd cycle: contract the blossom through v and u.
                let cur_base = lca(mate, ctx, v, u);
                for b in ctx.blossom.iter_mut() {
                    *b = false;
                }
                mark_path(mate, ctx, v, cur_base, u);
                mark_path(mate, ctx, u, cur_base, v);
                for w in bits(alive) {
                    if ctx.blossom[ctx.base[w]] {
                        ctx.base[w] = cur_base;
                        if !ctx.used[w] {
                            ctx.used[w] = true;
                            queue.push_back(w);
                        }
                    }
                }
            } else if ctx.p[u] == 0 {
                ctx.p[u] = v;
                if mate[u] == 0 {
                    return u;
                }
                ctx.used[mate[u]] = true;
                queue.push_back(mate[u]);
            }
        }
    }
    0
}

fn lca(mate: &[usize], ctx: &mut BlossomCtx, mut a: usize, mut b: usize) -> usize {
    let marked_start = a;
    let mut marked = Vec::new();
    a = ctx.base[a];
    loop {
        marked.push(a);
        if mate[a] == 0 {
            break;
        }
        a = ctx.base[ctx.p[mate[a]]];
    }
    b = ctx.base[b];
    loop {
        if marked.contains(&b) {
            // Clean no state; `marked` is local.
            let _ = marked_start;
            return b;
        }
        b = ctx.base[ctx.p[mate[b]]];
    }
}

fn mark_path(mate: &[usize], ctx: &mut BlossomCtx, mut v: usize, base: usize, mut child: usize) {
    while ctx.base[v] != base {
        ctx.blossom[ctx.base[v]] = true;
        ctx.blossom[ctx.base[mate[v]]] = true;
        ctx.p[v] = child;
        child = mate[v];
        v = ctx.p[mate[v]];
    }
}

/// Matchability oracle for one host graph, memoizing answers per alive-mask.
///
/// Conformality testing asks "is `G − V(H)` matchable?" for thousands of
/// vertex sets of the same host; the memo makes repeats free.
pub struct MatchabilityOracle<'g> {
    g: &'g Graph,
    memo: RefCell<HashMap<u128, bool>>,
}

impl<'g> MatchabilityOracle<'g> {
    /// New oracle for `g`.
    #[must_use]
    pub fn new(g: &'g Graph) -> Self {
        MatchabilityOracle {
            g,
            memo: RefCell::new(HashMap::new()),
        }
    }

    /// Whether the subgraph induced on `alive` is matchable.
    #[must_use]
    pub fn matchable(&self, alive: u128) -> bool {
        let k = alive.count_ones();
        if k == 0 {
            return true;
        }
        if k % 2 == 1 {
            return false;
        }
        if let Some(&hit) = self.memo.borrow().get(&alive) {
            return hit;
        }
        let ans = is_matchable_within(self.g, alive);
        self.memo.borrow_mut().insert(alive, ans);
        ans
    }

    /// The host graph.
    #[must_use]
    pub fn graph(&self) -> &'g Graph {
        self.g
    }
}

/// Visit every perfect matching of the subgraph induced on `alive`, exactly
/// once each, in the deterministic order given by always branching on the
/// lowest-indexed uncovered vertex and trying its neighbors ascending.
/// The visitor returns `false` to stop early; the function returns `true`
/// iff enumeration ran to completion.
pub fn for_each_perfect_matching<F: FnMut(u128) -> bool>(
    g: &Graph,
    alive: u128,
    visit: &mut F,
) -> bool {
    if alive.count_ones() % 2 == 1 {
        return true;
    }
    fn rec<F: FnMut(u128) -> bool>(g: &Graph, left: u128, acc: u128, visit: &mut F) -> bool {
        if left == 0 {
            return visit(acc);
        }
        let v = left.trailing_zeros() as usize;
        for u in bits(g.neighbors_mask(v) & left) {
            let idx = g.edge_index(v, u).expect("neighbor implies edge");
            if !rec(g, left & !(1u128 << v) & !(1u128 << u), acc | (1 << idx), visit) {
                return false;
            }
        }
        true
    }
    rec(g, alive, 0, visit)
}

/// All perfect matchings, in deterministic enumeration order, capped.
/// Exceeding `cap` is an error naming the cap, not a truncated answer.
pub fn perfect_matchings_capped(g: &Graph, cap: usize) -> Result<Vec<u128>> {
    let mut out = Vec::new();
    let complete = for_each_perfect_matching(g, g.vertices_mask(), &mut |m| {
        if out.len() == cap {
            return false;
        }
        out.push(m);
        true
    });
    if complete {
        Ok(out)
    } else {
        Err(Error::CapExceeded(format!(
            "more than {cap} perfect matchings"
        )))
    }
}

/// All perfect matchings of a small graph (no cap).
#[must_use]
pub fn enumerate_perfect_matchings(g: &Graph) -> Vec<u128> {
    let mut out = Vec::new();
    for_each_perfect_matching(g, g.vertices_mask(), &mut |m| {
        out.push(m);
        true
    });
    out
}

/// Number of perfect matchings, capped; `Err` when the cap is hit.
pub fn count_perfect_matchings(g: &Graph, cap: usize) -> Result<usize> {
    let mut count = 0usize;
    let complete = for_each_perfect_matching(g, g.vertices_mask(), &mut |_| {
        count += 1;
        count <= cap
    });
    if complete {
        Ok(count)
    } else {
        Err(Error::CapExceeded(format!(
            "more than {cap} perfect matchings"
        )))
    }
}

/// Whether `mask` is a perfect matching of the subgraph induced on `alive`.
#[must_use]
pub fn is_perfect_matching_within(g: &Graph, alive: u128, mask: u128) -> bool {
    let mut covered = 0u128;
    for i in bits(mask) {
        let (u, v) = g.edge_at(i);
        let pair = (1u128 << u) | (1 << v);
        if pair & alive != pair || covered & pair != 0 {
            return false;
        }
        covered |= pair;
    }
    covered == alive
}

/// Whether `mask` is a perfect matching of the whole graph.
#[must_use]
pub fn is_perfect_matching(g: &Graph, mask: u128) -> bool {
    is_perfect_matching_within(g, g.vertices_mask(), mask)
}

/// The edges lying in at least one perfect matching, as an edge mask.
/// Errors when the graph has no perfect matching.
pub fn allowed_edges(g: &Graph) -> Result<u128> {
    let oracle = MatchabilityOracle::new(g);
    allowed_edges_with(g, &oracle)
}

/// `allowed_edges` reusing a caller-provided matchability oracle.
pub fn allowed_edges_with(g: &Graph, oracle: &MatchabilityOracle<'_>) -> Result<u128> {
    let all = g.vertices_mask();
    if !oracle.matchable(all) {
        return Err(Error::NotMatchable);
    }
    let mut mask = 0u128;
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        if oracle.matchable(all & !(1u128 << u) & !(1u128 << v)) {
            mask |= 1 << i;
        }
    }
    Ok(mask)
}

/// Whether the graph is matching covered: connected, matchable, and every
/// edge allowed.
#[must_use]
pub fn is_matching_covered(g: &Graph) -> bool {
    if !g.is_connected() || !is_matchable(g) {
        return false;
    }
    allowed_edges(g).map(|a| a == g.edges_mask()).unwrap_or(false)
}

/// The elementary decomposition of a matchable graph: the components of the
/// subgraph formed by all allowed edges, plus the forbidden edge set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementaryDecomposition {
    /// `(vertex mask, allowed-edge mask)` per component, ordered by smallest
    /// vertex. Single allowed edges appear as K2 components.
    pub components: Vec<(u128, u128)>,
    /// Edges in no perfect matching.
    pub forbidden: u128,
}

/// Compute the elementary decomposition. Errors on non-matchable input.
pub fn elementary_components(g: &Graph) -> Result<ElementaryDecomposition> {
    let allowed = allowed_edges(g)?;
    let forbidden = g.edges_mask() & !allowed;
    // Components of the allowed-edge subgraph: every vertex of a matchable
    // graph is covered by some perfect matching, hence touches an allowed
    // edge, so the components' vertex masks partition V(G).
    let mut adj = vec![0u128; g.n() + 1];
    for i in bits(allowed) {
        let (u, v) = g.edge_at(i);
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    let mut seen = 0u128;
    let mut components = Vec::new();
    for v in bits(g.vertices_mask()) {
        if (seen >> v) & 1 == 1 {
            continue;
        }
        let mut comp = 1u128 << v;
        let mut frontier = comp;
        while frontier != 0 {
            let mut next = 0u128;
            for u in bits(frontier) {
                next |= adj[u] & !comp;
            }
            comp |= next;
            frontier = next;
        }
        seen |= comp;
        let edge_mask = g.edges_within(comp) & allowed;
        components.push((comp, edge_mask));
    }
    Ok(ElementaryDecomposition {
        components,
        forbidden,
    })
}

/// Decode an edge mask into its sorted edge pairs.
#[must_use]
pub fn edge_pairs(g: &Graph, mask: u128) -> Vec<(usize, usize)> {
    bits(mask).map(|i| g.edge_at(i)).collect()
}

/// Encode edge pairs as an edge mask; errors if any pair is not an edge.
pub fn edge_mask_of(g: &Graph, pairs: &[(usize, usize)]) -> Result<u128> {
    let mut mask = 0u128;
    for &(u, v) in pairs {
        let idx = g.edge_index(u, v).ok_or_else(|| {
            Error::Precondition(format!("({u},{v}) is not an edge of the graph"))
        })?;
        mask |= 1 << idx;
    }
    Ok(mask)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    /// Brute-force maximum matching size by subset search (test oracle).
    fn brute_max_matching(g: &Graph) -> usize {
        let m = g.m();
        let mut best = 0usize;
        for mask in 0u128..(1u128 << m) {
            let mut covered = 0u128;
            let mut ok = true;
            for i in bits(mask) {
                let (u, v) = g.edge_at(i);
                let pair = (1u128 << u) | (1 << v);
                if covered & pair != 0 {
                    ok = false;
                    break;
                }
                covered |= pair;
            }
            if ok {
                best = best.max(mask.count_ones() as usize);
            }
        }
        best
    }

    #[test]
    fn maximum_matching_matches_brute_force_on_small_graphs() {
        let cases = vec![
            Graph::cycle(6),
            Graph::cycle(5),
            Graph::complete(4),
            Graph::complete(5),
            Graph::path(7),
            Graph::complete_bipartite(2, 3),
            Graph::theta(3, 3, 3),
            Graph::from_edges(3, &[(1, 2), (1, 3), (2, 3)]).unwrap(),
        ];
        for g in cases {
            let size = maximum_matching(&g).count_ones() as usize;
            assert_eq!(size, brute_max_matching(&g), "graph {g:?}");
        }
    }

    #[test]
    fn blossom_handles_odd_cycles() {
        // Two triangles joined by a bridge: maximum matching has size 3 and
        // the graph is matchable only through the bridge.
        let g = Graph::from_edges(
            6,
            &[(1, 2), (1, 3), (2, 3), (3, 4), (4, 5), (4, 6), (5, 6)],
        )
        .unwrap();
        assert_eq!(maximum_matching(&g).count_ones(), 3);
        assert!(is_matchable(&g));
        // Petersen-like blossom stress: C9 with chords needs contractions.
        let c9 = Graph::cycle(9);
        assert_eq!(maximum_matching(&c9).count_ones(), 4);
    }

    #[test]
    fn matchability_convention_and_masks() {
        let k4 = Graph::complete(4);
        assert!(is_matchable_within(&k4, 0), "empty vertex set is matchable");
        assert!(!is_matchable_within(&k4, 0b10), "single vertex is not");
        let c4_gone = k4.vertices_mask();
        assert!(is_matchable_within(&k4, c4_gone));
        assert!(!is_matchable(&Graph::cycle(5)));
    }

    #[test]
    fn perfect_matching_enumeration_is_deterministic_and_complete() {
        assert_eq!(enumerate_perfect_matchings(&Graph::cycle(6)).len(), 2);
        assert_eq!(enumerate_perfect_matchings(&Graph::complete(4)).len(), 3);
        assert_eq!(
            enumerate_perfect_matchings(&Graph::complete_bipartite(3, 3)).len(),
            6
        );
        let twice_a = enumerate_perfect_matchings(&Graph::theta(3, 3, 3));
        let twice_b = enumerate_perfect_matchings(&Graph::theta(3, 3, 3));
        assert_eq!(twice_a, twice_b, "stream order is deterministic");
        assert_eq!(twice_a.len(), 3, "theta(3,3,3) has one matching per path");
        assert!(matches!(
            perfect_matchings_capped(&Graph::complete_bipartite(3, 3), 5),
            Err(Error::CapExceeded(_))
        ));
    }

    #[test]
    fn allowed_edges_and_elementary_components() {
        // C6: everything allowed, one elementary component.
        let c6 = Graph::cycle(6);
        assert_eq!(allowed_edges(&c6).unwrap(), c6.edges_mask());
        let dec = elementary_components(&c6).unwrap();
        assert_eq!(dec.components.len(), 1);
        assert_eq!(dec.forbidden, 0);
        assert!(is_matching_covered(&c6));

        // Two triangles joined by a bridge: allowed = {bridge, two far edges},
        // three K2 elementary components.
        let g = Graph::from_edges(
            6,
            &[(1, 2), (1, 3), (2, 3), (3, 4), (4, 5), (4, 6), (5, 6)],
        )
        .unwrap();
        let allowed = allowed_edges(&g).unwrap();
        let expected = edge_mask_of(&g, &[(3, 4), (1, 2), (5, 6)]).unwrap();
        assert_eq!(allowed, expected);
        let dec = elementary_components(&g).unwrap();
        assert_eq!(dec.components.len(), 3);
        assert!(!is_matching_covered(&g));

        // P4: middle edge forbidden.
        let p4 = Graph::path(4);
        let allowed = allowed_edges(&p4).unwrap();
        assert_eq!(allowed, edge_mask_of(&p4, &[(1, 2), (3, 4)]).unwrap());
        assert!(!is_matching_covered(&p4));

        assert!(is_matching_covered(&Graph::complete_bipartite(3, 3)));
        assert!(is_matching_covered(&Graph::complete(4)));
        assert_eq!(allowed_edges(&Graph::cycle(5)), Err(Error::NotMatchable));
    }

    #[test]
    fn oracle_memoizes_consistently() {
        let g = Graph::theta(3, 3, 3);
        let oracle = MatchabilityOracle::new(&g);
        let all = g.vertices_mask();
        assert!(oracle.matchable(all));
        assert!(oracle.matchable(all), "second lookup hits the memo");
        let hubs_gone = all & !(1u128 << 1) & !(1u128 << 2);
        assert_eq!(
            oracle.matchable(hubs_gone),
            is_matchable_within(&g, hubs_gone)
        );
    }
}
