//! Canonical forms for isomorphism-exact deduplication and memo keys.
//!
//! The canonical form of a graph is the lexicographically least adjacency
//! bit string over all vertex orderings, read row by row: the vertex placed
//! at position `d` contributes `d` bits recording its adjacency to the
//! previously placed vertices (earliest placed = most significant bit).
//! Two graphs get the same form exactly when they are isomorphic.
//!
//! Orderings are restricted to those whose degree sequence is sorted
//! ascending. The restriction is isomorphism-invariant and never empty, so
//! the minimum over the restricted set is still a canonical form, and it
//! collapses most branching in irregular graphs.
//!
//! The search assigns positions depth-first. At each node only candidates
//! whose next row equals the minimum possible row can extend a least code,
//! and two tied candidates are interchangeable whenever swapping them is an
//! automorphism of the remaining structure (equal rows and equal
//! neighborhoods outside the pair), so only one representative per such
//! class is explored. A further shortcut finishes in one pass when all
//! remaining vertices are mutually interchangeable (identical rows and a
//! complete or empty induced remainder), which keeps complete graphs,
//! empty graphs, and blow-ups linear instead of factorial.

use crate::bits;
use crate::graph::Graph;

/// Engine over graphs with at most 16 vertices: 0-based, mask-driven,
/// allocation-free. `adj[v]` is the neighbor mask of vertex `v`.
struct Search16<'a> {
    n: usize,
    adj: &'a [u16; 16],
    /// `allowed[d]` = vertices whose degree matches position `d` in the
    /// sorted degree sequence.
    allowed: [u16; 16],
    /// `best[d]` = row value of position `d` in the least code found so far.
    best: [u16; 16],
    /// Current row value per vertex (bits toward the assigned prefix,
    /// earliest assigned most significant).
    row_of: [u16; 16],
}

impl Search16<'_> {
    fn search(&mut self, unassigned: u16, depth: usize) {
        if unassigned == 0 {
            return;
        }
        let eligible = unassigned & self.allowed[depth];
        let mut min = u16::MAX;
        let mut m = eligible;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            min = min.min(self.row_of[v]);
        }
        if min > self.best[depth] {
            return;
        }
        if min < self.best[depth] {
            self.best[depth] = min;
            for b in self.best[depth + 1..self.n].iter_mut() {
                *b = u16::MAX;
            }
        }
        // Full-remainder shortcut: if every remaining vertex has the same
        // row and the remainder induces a complete or empty subgraph, all
        // orders agree; emit the suffix in one pass.
        let count = unassigned.count_ones() as usize;
        if count >= 2 {
            let mut all_tied = true;
            let mut complete = true;
            let mut empty = true;
            let mut m = unassigned;
            while m != 0 {
                let v = m.trailing_zeros() as usize;
                m &= m - 1;
                all_tied &= self.row_of[v] == min;
                let within = self.adj[v] & unassigned;
                complete &= within == unassigned ^ (1 << v);
                empty &= within == 0;
            }
            if all_tied && (complete || empty) {
                let mut improved = false;
                for i in 0..count {
                    let row = if complete {
                        (min << i) | ((1u16 << i) - 1)
                    } else {
                        min << i
                    };
                    let d = depth + i;
                    if !improved {
                        if row > self.best[d] {
                            return;
                        }
                        improved = row < self.best[d];
                    }
                    if improved {
                        self.best[d] = row;
                    }
                }
                return;
            }
        }
        // Explore one representative per interchangeability class among the
        // minimum-row candidates: swapping two tied vertices with equal
        // neighborhoods outside the pair fixes the prefix and permutes the
        // remainder, so both extensions reach the same least completion.
        let mut tried: [u16; 16] = [0; 16];
        let mut tried_len = 0usize;
        let mut m = eligible;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            if self.row_of[v] != min {
                continue;
            }
            let pair_free = unassigned & !(1 << v);
            let sig = self.adj[v] & pair_free;
            let mut skip = false;
            for &prev in &tried[..tried_len] {
                let u = prev as usize;
                let excl = !(1u16 << u) & !(1u16 << v);
                if (sig & excl) == (self.adj[u] & unassigned & excl)
                    && self.row_of[u] == min
                {
                    skip = true;
                    break;
                }
            }
            if skip {
                continue;
            }
            tried[tried_len] = v as u16;
            tried_len += 1;
            let rest = unassigned & !(1 << v);
            let nb = self.adj[v];
            let mut mm = rest;
            while mm != 0 {
                let u = mm.trailing_zeros() as usize;
                mm &= mm - 1;
                self.row_of[u] = (self.row_of[u] << 1) | ((nb >> u) & 1);
            }
            self.search(rest, depth + 1);
            let mut mm = rest;
            while mm != 0 {
                let u = mm.trailing_zeros() as usize;
                mm &= mm - 1;
                self.row_of[u] >>= 1;
            }
        }
    }
}

/// Canonical rows for a graph given as 0-based adjacency masks
/// (`rows[d]` for positions `d = 1..n-1`; position 0 has no bits).
fn canonical_rows16(n: usize, adj: &[u16; 16]) -> [u16; 16] {
    debug_assert!(n <= 16);
    if n <= 1 {
        return [0; 16];
    }
    let mut degs: [(u32, usize); 16] = [(0, 0); 16];
    for (v, d) in degs.iter_mut().enumerate().take(n) {
        *d = (adj[v].count_ones(), v);
    }
    degs[..n].sort_unstable();
    let mut allowed = [0u16; 16];
    let mut lo = 0;
    while lo < n {
        let mut hi = lo;
        let mut mask = 0u16;
        while hi < n && degs[hi].0 == degs[lo].0 {
            mask |= 1 << degs[hi].1;
            hi += 1;
        }
        for a in allowed.iter_mut().take(hi).skip(lo) {
            *a = mask;
        }
        lo = hi;
    }
    let mut s = Search16 {
        n,
        adj,
        allowed,
        best: [u16::MAX; 16],
        row_of: [0; 16],
    };
    s.best[0] = 0;
    let full = if n == 16 { u16::MAX } else { (1u16 << n) - 1 };
    s.search(full, 0);
    s.best
}

fn adj16(g: &Graph) -> [u16; 16] {
    let mut adj = [0u16; 16];
    for (i, a) in adj.iter_mut().enumerate().take(g.n()) {
        *a = (g.neighbors_mask(i + 1) >> 1) as u16;
    }
    adj
}

/// Canonical code for graphs on at most 10 vertices: the 45 triangle bits
/// of the canonical form, with the vertex count in bits 45..51.
///
/// # Panics
/// When `g` has more than 10 vertices.
#[must_use]
pub fn canonical_code64(g: &Graph) -> u64 {
    assert!(g.n() <= 10, "code64 supports at most 10 vertices");
    canonical_code64_from_adj(g.n(), &adj16(g))
}

/// [`canonical_code64`] on raw 0-based adjacency masks, for enumeration
/// loops that avoid building `Graph` values.
///
/// # Panics
/// When `n` exceeds 10.
#[must_use]
pub fn canonical_code64_from_adj(n: usize, adj: &[u16; 16]) -> u64 {
    assert!(n <= 10, "code64 supports at most 10 vertices");
    let rows = canonical_rows16(n, adj);
    let mut code = 0u64;
    for (d, &row) in rows.iter().enumerate().take(n).skip(1) {
        code = (code << d) | u64::from(row);
    }
    code | ((n as u64) << 45)
}

/// Canonical code for graphs on at most 16 vertices: the 120 triangle bits
/// of the canonical form, with the vertex count in bits 120..127.
///
/// # Panics
/// When `g` has more than 16 vertices.
#[must_use]
pub fn canonical_code128(g: &Graph) -> u128 {
    assert!(g.n() <= 16, "code128 supports at most 16 vertices");
    let rows = canonical_rows16(g.n(), &adj16(g));
    let mut code = 0u128;
    for (d, &row) in rows.iter().enumerate().take(g.n()).skip(1) {
        code = (code << d) | u128::from(row);
    }
    code | ((g.n() as u128) << 120)
}

/// Canonical form for graphs of any supported order, usable as a memo key:
/// element 0 is the vertex count, the rest are the triangle bits packed 64
/// at a time (most significant chunk first, last chunk left-aligned).
#[must_use]
pub fn canonical_form(g: &Graph) -> Vec<u64> {
    let n = g.n();
    let mut out = vec![n as u64];
    let mut acc = 0u64;
    let mut filled = 0usize;
    let mut push_bit = |bit: u64, out: &mut Vec<u64>| {
        acc = (acc << 1) | bit;
        filled += 1;
        if filled == 64 {
            out.push(acc);
            acc = 0;
            filled = 0;
        }
    };
    if n <= 16 {
        let rows = canonical_rows16(n, &adj16(g));
        for (d, &row) in rows.iter().enumerate().take(n).skip(1) {
            for b in (0..d).rev() {
                push_bit(u64::from((row >> b) & 1), &mut out);
            }
        }
    } else {
        let rows = canonical_rows_wide(g);
        for (d, row) in rows.iter().enumerate().skip(1) {
            for b in (0..d).rev() {
                push_bit(((row >> b) & 1) as u64, &mut out);
            }
        }
    }
    if filled > 0 {
        out.push(acc << (64 - filled));
    }
    out
}

/// Decode a [`canonical_code64`] value into 0-based adjacency masks,
/// for enumeration loops that avoid building `Graph` values.
#[must_use]
pub fn adj_from_code64(code: u64) -> (usize, [u16; 16]) {
    let n = ((code >> 45) & 0x7F) as usize;
    let mut adj = [0u16; 16];
    let mut shift = (1..n).sum::<usize>();
    for d in 1..n {
        shift -= d;
        let row = (code >> shift) & ((1u64 << d) - 1);
        for i in 0..d {
            if (row >> (d - 1 - i)) & 1 == 1 {
                adj[i] |= 1 << d;
                adj[d] |= 1 << i;
            }
        }
    }
    (n.max(1), adj)
}

/// Rebuild the graph encoded by [`canonical_code64`].
#[must_use]
pub fn graph_from_code64(code: u64) -> Graph {
    let n = ((code >> 45) & 0x7F) as usize;
    let mut edges = Vec::new();
    let mut shift = (1..n).sum::<usize>();
    for d in 1..n {
        shift -= d;
        let row = (code >> shift) & ((1u64 << d) - 1);
        for i in 0..d {
            // Earliest assigned vertex is the most significant bit.
            if (row >> (d - 1 - i)) & 1 == 1 {
                edges.push((i + 1, d + 1));
            }
        }
    }
    Graph::from_edges(n.max(1), &edges).expect("canonical codes decode to valid graphs")
}

/// Wide engine for graphs with 17..=120 vertices (1-based ids internally,
/// mirroring the 16-vertex engine; used only by [`canonical_form`]).
fn canonical_rows_wide(g: &Graph) -> Vec<u128> {
    struct S<'g> {
        g: &'g Graph,
        n: usize,
        allowed: Vec<u128>,
        best: Vec<u128>,
        row_of: Vec<u128>,
    }
    impl S<'_> {
        fn search(&mut self, unassigned: u128, depth: usize) {
            if unassigned == 0 {
                return;
            }
            let eligible = unassigned & self.allowed[depth];
            let mut min = u128::MAX;
            for v in bits(eligible) {
                min = min.min(self.row_of[v]);
            }
            if min > self.best[depth] {
                return;
            }
            if min < self.best[depth] {
                self.best[depth] = min;
                for b in self.best[depth + 1..self.n].iter_mut() {
                    *b = u128::MAX;
                }
            }
            let count = unassigned.count_ones() as usize;
            if count >= 2 {
                let mut all_tied = true;
                let mut complete = true;
                let mut empty = true;
                for v in bits(unassigned) {
                    all_tied &= self.row_of[v] == min;
                    let within = self.g.neighbors_mask(v) & unassigned;
                    complete &= within == unassigned ^ (1 << v);
                    empty &= within == 0;
                }
                if all_tied && (complete || empty) {
                    let mut improved = false;
                    for i in 0..count {
                        let row = if complete {
                            (min << i) | ((1u128 << i) - 1)
                        } else {
                            min << i
                        };
                        let d = depth + i;
                        if !improved {
                            if row > self.best[d] {
                                return;
                            }
                            improved = row < self.best[d];
                        }
                        if improved {
                            self.best[d] = row;
                        }
                    }
                    return;
                }
            }
            let mut tried: Vec<usize> = Vec::new();
            for v in bits(eligible) {
                if self.row_of[v] != min {
                    continue;
                }
                let sig = self.g.neighbors_mask(v) & unassigned;
                let skip = tried.iter().any(|&u| {
                    let excl = !(1u128 << u) & !(1u128 << v);
                    (sig & excl) == (self.g.neighbors_mask(u) & unassigned & excl)
                });
                if skip {
                    continue;
                }
                tried.push(v);
                let rest = unassigned & !(1 << v);
                let nb = self.g.neighbors_mask(v);
                for u in bits(rest) {
                    self.row_of[u] = (self.row_of[u] << 1) | u128::from((nb >> u) & 1);
                }
                self.search(rest, depth + 1);
                for u in bits(rest) {
                    self.row_of[u] >>= 1;
                }
            }
        }
    }
    let n = g.n();
    let mut degs: Vec<(usize, usize)> = (1..=n).map(|v| (g.degree(v), v)).collect();
    degs.sort_unstable();
    let mut allowed = vec![0u128; n];
    let mut lo = 0;
    while lo < n {
        let mut hi = lo;
        let mut mask = 0u128;
        while hi < n && degs[hi].0 == degs[lo].0 {
            mask |= 1 << degs[hi].1;
            hi += 1;
        }
        for a in allowed.iter_mut().take(hi).skip(lo) {
            *a = mask;
        }
        lo = hi;
    }
    let mut s = S {
        g,
        n,
        allowed,
        best: vec![u128::MAX; n],
        row_of: vec![0; n + 1],
    };
    s.best[0] = 0;
    s.search(g.vertices_mask(), 0);
    s.best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{isomorphic, Graph};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_graph(rng: &mut StdRng, n: usize, p: f64) -> Graph {
        let mut edges = Vec::new();
        for u in 1..=n {
            for v in u + 1..=n {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(n, &edges).unwrap()
    }

    fn permuted(rng: &mut StdRng, g: &Graph) -> Graph {
        let n = g.n();
        let mut perm: Vec<usize> = (1..=n).collect();
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            perm.swap(i, j);
        }
        let edges: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .map(|&(u, v)| (perm[u - 1], perm[v - 1]))
            .collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn permuted_copies_share_codes() {
        let mut rng = StdRng::seed_from_u64(7);
        for n in 2..=9 {
            for &p in &[0.2, 0.5, 0.8] {
                let g = random_graph(&mut rng, n, p);
                let h = permuted(&mut rng, &g);
                assert_eq!(
                    canonical_code64(&g),
                    canonical_code64(&h),
                    "codes differ for permuted copies of {g:?}"
                );
                assert_eq!(canonical_form(&g), canonical_form(&h));
                assert!(isomorphic(&g, &h).is_some());
            }
        }
    }

    #[test]
    fn distinct_codes_imply_nonisomorphic_and_vice_versa() {
        // Exhaustive pairwise agreement with the explicit isomorphism
        // backtracker on a random sample.
        let mut rng = StdRng::seed_from_u64(13);
        let sample: Vec<Graph> = (0..60).map(|i| random_graph(&mut rng, 7, 0.3 + 0.05 * f64::from(i % 8))).collect();
        for a in &sample {
            for b in &sample {
                let same_code = canonical_code64(a) == canonical_code64(b);
                assert_eq!(same_code, isomorphic(a, b).is_some());
            }
        }
    }

    #[test]
    fn cospectral_lookalikes_get_distinct_codes() {
        // C6 vs two triangles: same degree sequence, different graphs.
        let c6 = Graph::cycle(6);
        let two_triangles =
            Graph::from_edges(6, &[(1, 2), (1, 3), (2, 3), (4, 5), (4, 6), (5, 6)]).unwrap();
        assert_ne!(canonical_code64(&c6), canonical_code64(&two_triangles));
        // K_{3,3} vs the prism: both cubic on 6 vertices.
        let k33 = Graph::complete_bipartite(3, 3);
        let prism = Graph::from_edges(
            6,
            &[
                (1, 2),
                (2, 3),
                (1, 3),
                (4, 5),
                (5, 6),
                (4, 6),
                (1, 4),
                (2, 5),
                (3, 6),
            ],
        )
        .unwrap();
        assert_ne!(canonical_code64(&k33), canonical_code64(&prism));
        assert!(isomorphic(&k33, &prism).is_none());
    }

    #[test]
    fn symmetric_graphs_complete_quickly_and_decode() {
        let mut rng = StdRng::seed_from_u64(11);
        for g in [
            Graph::complete(10),
            Graph::from_edges(10, &[]).unwrap(),
            Graph::complete_bipartite(5, 5),
            Graph::cycle(10),
            Graph::complete_bipartite(3, 7),
            Graph::from_edges(10, &(2..=10).map(|v| (1, v)).collect::<Vec<_>>()).unwrap(),
        ] {
            let h = permuted(&mut rng, &g);
            let code = canonical_code64(&g);
            assert_eq!(code, canonical_code64(&h));
            let back = graph_from_code64(code);
            assert!(isomorphic(&g, &back).is_some());
            assert_eq!(canonical_code64(&back), code, "decode is code-stable");
        }
        assert_ne!(
            canonical_code64(&Graph::complete(10)),
            canonical_code64(&{
                let mut e = Graph::complete(10).edges().to_vec();
                e.pop();
                Graph::from_edges(10, &e).unwrap()
            })
        );
    }

    #[test]
    fn code128_and_wide_form_agree_across_representations() {
        let g = Graph::theta(3, 5, 5); // 10 vertices
        let h = Graph::theta(5, 5, 3);
        assert_eq!(canonical_code128(&g), canonical_code128(&h));
        assert_eq!(canonical_form(&g), canonical_form(&h));
        let other = Graph::theta(3, 3, 7);
        assert_ne!(canonical_code128(&g), canonical_code128(&other));
        // Wide path (n > 16) matches itself under relabeling.
        let mut rng = StdRng::seed_from_u64(3);
        let big = Graph::cycle(20);
        let big_p = permuted(&mut rng, &big);
        assert_eq!(canonical_form(&big), canonical_form(&big_p));
        assert_ne!(canonical_form(&big), canonical_form(&Graph::path(20)));
    }

    #[test]
    fn augmentation_counts_match_published_totals() {
        // All graphs on n vertices up to isomorphism: 1, 2, 4, 11, 34, 156.
        let mut level: Vec<u64> = vec![canonical_code64(&Graph::from_edges(1, &[]).unwrap())];
        let mut counts = vec![level.len()];
        for n in 2..=6usize {
            let mut next = std::collections::HashSet::new();
            for &code in &level {
                let parent = graph_from_code64(code);
                for subset in 0u32..(1 << (n - 1)) {
                    let mut edges = parent.edges().to_vec();
                    for v in 1..n {
                        if (subset >> (v - 1)) & 1 == 1 {
                            edges.push((v, n));
                        }
                    }
                    let child = Graph::from_edges(n, &edges).unwrap();
                    next.insert(canonical_code64(&child));
                }
            }
            let mut sorted: Vec<u64> = next.into_iter().collect();
            sorted.sort_unstable();
            counts.push(sorted.len());
            level = sorted;
        }
        assert_eq!(counts, vec![1, 2, 4, 11, 34, 156]);
    }
}
