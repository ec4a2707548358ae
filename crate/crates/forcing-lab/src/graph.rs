//! Graph representation, file format, two-coloring, cyclomatic number, and
//! isomorphism testing.
//!
//! Vertices are dense integers `1..=n` (0 is never a vertex). Edges are
//! unordered pairs stored canonically as `(min, max)` and kept sorted
//! lexicographically, so a graph's edge list, its serialized form, and edge-set
//! comparisons are all bit-exact. Adjacency is mirrored into per-vertex bit
//! masks (`u128`), and edge subsets are bit masks over the sorted edge list;
//! both conventions are shared by every other module in the crate.

use crate::{bits, Error, Result};

/// Hard limit on vertex count: vertex `v` occupies bit `v` of a `u128` mask.
pub const MAX_VERTICES: usize = 120;
/// Hard limit on edge count: edge index `i` occupies bit `i` of a `u128` mask.
pub const MAX_EDGES: usize = 128;

/// One side of a proper 2-coloring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Color {
    /// The color assigned to the lowest-numbered vertex of each component.
    Black,
    /// The other color.
    White,
}

impl Color {
    /// The opposite color.
    #[must_use]
    pub fn flip(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }
}

/// A proper 2-coloring of a bipartite graph. `colors[v]` is the color of
/// vertex `v`; index 0 is unused and holds `Black`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    colors: Vec<Color>,
}

impl Coloring {
    /// Color of vertex `v`.
    #[must_use]
    pub fn color(&self, v: usize) -> Color {
        self.colors[v]
    }

    /// Mask of all black vertices.
    #[must_use]
    pub fn black_mask(&self) -> u128 {
        self.colors
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, c)| **c == Color::Black)
            .fold(0u128, |m, (v, _)| m | (1 << v))
    }
}

/// A simple undirected graph on vertices `1..=n`.
///
/// No loops, no parallel edges. The edge list is sorted lexicographically and
/// edge `i` of that list corresponds to bit `i` in every edge mask used by
/// this crate.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<u128>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges)
    }
}

impl Graph {
    /// Build a graph from an explicit vertex count and edge list.
    ///
    /// Edges may be given in either endpoint order and any sequence; they are
    /// normalized to `(min, max)` and sorted. Loops, duplicate edges, and
    /// out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, raw_edges: &[(usize, usize)]) -> Result<Graph> {
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::InvalidGraph(format!(
                "vertex count {n} outside supported range 1..={MAX_VERTICES}"
            )));
        }
        if raw_edges.len() > MAX_EDGES {
            return Err(Error::InvalidGraph(format!(
                "edge count {} exceeds supported maximum {MAX_EDGES}",
                raw_edges.len()
            )));
        }
        let mut edges: Vec<(usize, usize)> = Vec::with_capacity(raw_edges.len());
        for &(a, b) in raw_edges {
            if a == b {
                return Err(Error::InvalidGraph(format!("loop at vertex {a}")));
            }
            if a == 0 || b == 0 || a > n || b > n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a},{b}) has an endpoint outside 1..={n}"
                )));
            }
            edges.push((a.min(b), a.max(b)));
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            let dup = edges.windows(2).find(|w| w[0] == w[1]).expect("checked");
            return Err(Error::InvalidGraph(format!(
                "duplicate edge ({},{})",
                dup[0].0, dup[0].1
            )));
        }
        let mut adj = vec![0u128; n + 1];
        for &(u, v) in &edges {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        Ok(Graph { n, edges, adj })
    }

    /// Number of vertices.
    #[must_use]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of edges.
    #[must_use]
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// The sorted edge list; edge `i` of this slice is bit `i` of edge masks.
    #[must_use]
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// The edge with index `i` in the sorted edge list.
    #[must_use]
    pub fn edge_at(&self, i: usize) -> (usize, usize) {
        self.edges[i]
    }

    /// Index of edge `{u,v}` in the sorted edge list, if present.
    #[must_use]
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).ok()
    }

    /// Whether `{u,v}` is an edge.
    #[must_use]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u >= 1 && v >= 1 && u <= self.n && v <= self.n && (self.adj[u] >> v) & 1 == 1
    }

    /// Neighbor mask of `v` (bit `u` set iff `{u,v}` is an edge).
    #[must_use]
    pub fn neighbors_mask(&self, v: usize) -> u128 {
        self.adj[v]
    }

    /// Neighbors of `v`, ascending.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        bits(self.adj[v])
    }

    /// Degree of `v`.
    #[must_use]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    /// Mask with one bit per vertex `1..=n`.
    #[must_use]
    pub fn vertices_mask(&self) -> u128 {
        if self.n == 127 {
            !1u128
        } else {
            ((1u128 << (self.n + 1)) - 1) & !1
        }
    }

    /// Mask with one bit per edge index `0..m`.
    #[must_use]
    pub fn edges_mask(&self) -> u128 {
        if self.m() == 128 {
            !0u128
        } else {
            (1u128 << self.m()) - 1
        }
    }

    /// Mask of edges with both endpoints inside `alive`.
    #[must_use]
    pub fn edges_within(&self, alive: u128) -> u128 {
        let mut mask = 0u128;
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if (alive >> u) & 1 == 1 && (alive >> v) & 1 == 1 {
                mask |= 1 << i;
            }
        }
        mask
    }

    /// Vertex mask of all endpoints of the edges in `edge_mask`.
    #[must_use]
    pub fn endpoints_mask(&self, edge_mask: u128) -> u128 {
        let mut m = 0u128;
        for i in bits(edge_mask) {
            let (u, v) = self.edges[i];
            m |= (1 << u) | (1 << v);
        }
        m
    }

    /// Connected components as vertex masks, ordered by smallest vertex.
    /// Isolated vertices form their own components.
    #[must_use]
    pub fn components(&self) -> Vec<u128> {
        self.components_within(self.vertices_mask())
    }

    /// Connected components of the subgraph induced on `alive`, as vertex
    /// masks ordered by smallest vertex.
    #[must_use]
    pub fn components_within(&self, alive: u128) -> Vec<u128> {
        let mut seen = 0u128;
        let mut out = Vec::new();
        for v in bits(alive) {
            if (seen >> v) & 1 == 1 {
                continue;
            }
            let mut comp = 1u128 << v;
            let mut frontier = comp;
            while frontier != 0 {
                let mut next = 0u128;
                for u in bits(frontier) {
                    next |= self.adj[u] & alive & !comp;
                }
                comp |= next;
                frontier = next;
            }
            seen |= comp;
            out.push(comp);
        }
        out
    }

    /// Whether the graph is connected (a single component; the 1-vertex graph
    /// is connected).
    #[must_use]
    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Proper 2-coloring if the graph is bipartite, with the lowest-numbered
    /// vertex of every component colored black; `None` when an odd cycle
    /// exists.
    #[must_use]
    pub fn bipartition(&self) -> Option<Coloring> {
        let mut colors = vec![Color::Black; self.n + 1];
        let mut seen = 0u128;
        for start in 1..=self.n {
            if (seen >> start) & 1 == 1 {
                continue;
            }
            seen |= 1 << start;
            colors[start] = Color::Black;
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for u in self.neighbors(v) {
                    if (seen >> u) & 1 == 0 {
                        seen |= 1 << u;
                        colors[u] = colors[v].flip();
                        queue.push_back(u);
                    } else if colors[u] == colors[v] {
                        return None;
                    }
                }
            }
        }
        Some(Coloring { colors })
    }

    /// `|E| − |V| + 1` for a connected graph; errors on disconnected input.
    pub fn cyclomatic_number(&self) -> Result<usize> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(self.m() + 1 - self.n)
    }

    /// The subgraph induced on the vertices of `alive`, relabeled `1..=k` in
    /// ascending order of their original labels. Returns the graph and the
    /// original label of each new vertex (`labels[new] = old`, index 0 unused).
    #[must_use]
    pub fn induced(&self, alive: u128) -> (Graph, Vec<usize>) {
        let old: Vec<usize> = bits(alive & self.vertices_mask()).collect();
        let mut new_of = vec![0usize; self.n + 1];
        for (idx, &v) in old.iter().enumerate() {
            new_of[v] = idx + 1;
        }
        let mut edges = Vec::new();
        for &(u, v) in &self.edges {
            if new_of[u] != 0 && new_of[v] != 0 {
                edges.push((new_of[u], new_of[v]));
            }
        }
        let mut labels = vec![0usize];
        labels.extend_from_slice(&old);
        let g = Graph::from_edges(old.len().max(1), &edges).expect("induced subgraph is valid");
        (g, labels)
    }

    /// The subgraph spanned by the edges of `edge_mask` (its vertices are
    /// exactly the endpoints), relabeled `1..=k` ascending. Returns the graph
    /// and the original labels (`labels[new] = old`).
    #[must_use]
    pub fn spanned(&self, edge_mask: u128) -> (Graph, Vec<usize>) {
        let verts = self.endpoints_mask(edge_mask);
        let old: Vec<usize> = bits(verts).collect();
        let mut new_of = vec![0usize; self.n + 1];
        for (idx, &v) in old.iter().enumerate() {
            new_of[v] = idx + 1;
        }
        let mut edges = Vec::new();
        for i in bits(edge_mask) {
            let (u, v) = self.edges[i];
            edges.push((new_of[u], new_of[v]));
        }
        let mut labels = vec![0usize];
        labels.extend_from_slice(&old);
        let g = Graph::from_edges(old.len().max(1), &edges).expect("spanned subgraph is valid");
        (g, labels)
    }

    /// A copy with the edges of `edge_mask` removed (same vertex set).
    #[must_use]
    pub fn without_edges(&self, edge_mask: u128) -> Graph {
        let edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, _)| (edge_mask >> *i) & 1 == 0)
            .map(|(_, &e)| e)
            .collect();
        Graph::from_edges(self.n, &edges).expect("edge deletion preserves validity")
    }

    /// Serialize to the graph file format: a header `p <n> <m>` followed by
    /// `m` lines `e <u> <v>` with `u < v`, sorted lexicographically.
    #[must_use]
    pub fn serialize(&self) -> String {
        let mut out = format!("p {} {}\n", self.n, self.m());
        for &(u, v) in &self.edges {
            out.push_str(&format!("e {u} {v}\n"));
        }
        out
    }

    // ---- convenience constructors used throughout the test suites ----

    /// The cycle `1-2-…-k-1` (`k ≥ 3`).
    #[must_use]
    pub fn cycle(k: usize) -> Graph {
        assert!(k >= 3, "a cycle needs at least 3 vertices");
        let mut edges: Vec<(usize, usize)> = (1..k).map(|i| (i, i + 1)).collect();
        edges.push((1, k));
        Graph::from_edges(k, &edges).expect("cycle is valid")
    }

    /// The path `1-2-…-k`.
    #[must_use]
    pub fn path(k: usize) -> Graph {
        let edges: Vec<(usize, usize)> = (1..k).map(|i| (i, i + 1)).collect();
        Graph::from_edges(k, &edges).expect("path is valid")
    }

    /// The complete graph on `k` vertices.
    #[must_use]
    pub fn complete(k: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 1..=k {
            for v in (u + 1)..=k {
                edges.push((u, v));
            }
        }
        Graph::from_edges(k, &edges).expect("complete graph is valid")
    }

    /// The complete bipartite graph with parts `1..=a` and `a+1..=a+b`.
    #[must_use]
    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 1..=a {
            for v in (a + 1)..=(a + b) {
                edges.push((u, v));
            }
        }
        Graph::from_edges(a + b, &edges).expect("complete bipartite graph is valid")
    }

    /// The cycle `1-2-…-k-1` plus the given chords.
    #[must_use]
    pub fn cycle_with_chords(k: usize, chords: &[(usize, usize)]) -> Graph {
        let mut edges: Vec<(usize, usize)> = (1..k).map(|i| (i, i + 1)).collect();
        edges.push((1, k));
        edges.extend_from_slice(chords);
        Graph::from_edges(k, &edges).expect("chorded cycle is valid")
    }

    /// Theta graph: hubs 1 and 2 joined by three internally disjoint paths of
    /// lengths `a`, `b`, `c` (each ≥ 2, interior vertices numbered `3..`).
    #[must_use]
    pub fn theta(a: usize, b: usize, c: usize) -> Graph {
        assert!(a >= 2 && b >= 2 && c >= 2, "theta path lengths must be ≥ 2");
        let mut edges = Vec::new();
        let mut next = 3usize;
        for &len in &[a, b, c] {
            let mut prev = 1usize;
            for _ in 0..(len - 1) {
                edges.push((prev, next));
                prev = next;
                next += 1;
            }
            edges.push((prev, 2));
        }
        Graph::from_edges(next - 1, &edges).expect("theta graph is valid")
    }
}

/// Parse the graph file format.
///
/// Grammar (UTF-8, line-oriented): lines starting with `#` are comments and
/// blank lines are ignored; exactly one header line `p <n> <m>` precedes
/// exactly `m` edge lines `e <u> <v>` with `1 ≤ u < v ≤ n`. Every violation
/// is reported with its 1-based line number.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize, usize)> = None; // (n, m, line)
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut edge_lines: Vec<usize> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        match fields.next() {
            Some("p") => {
                if header.is_some() {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: "duplicate header line".into(),
                    });
                }
                let n = parse_field(fields.next(), line_no, "vertex count")?;
                let m = parse_field(fields.next(), line_no, "edge count")?;
                if fields.next().is_some() {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: "trailing fields after header".into(),
                    });
                }
                if n == 0 || n > MAX_VERTICES {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("vertex count {n} outside supported range 1..={MAX_VERTICES}"),
                    });
                }
                if m > MAX_EDGES {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("edge count {m} exceeds supported maximum {MAX_EDGES}"),
                    });
                }
                header = Some((n, m, line_no));
            }
            Some("e") => {
                let Some((n, m, _)) = header else {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: "edge line before header".into(),
                    });
                };
                let u: usize = parse_field(fields.next(), line_no, "edge endpoint")?;
                let v: usize = parse_field(fields.next(), line_no, "edge endpoint")?;
                if fields.next().is_some() {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: "trailing fields after edge".into(),
                    });
                }
                if u == v {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("loop at vertex {u} rejected"),
                    });
                }
                if !(1 <= u && u < v && v <= n) {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("edge ({u},{v}) violates 1 ≤ u < v ≤ {n}"),
                    });
                }
                if edges.contains(&(u, v)) {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("duplicate edge ({u},{v})"),
                    });
                }
                if edges.len() == m {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("more than the declared {m} edges"),
                    });
                }
                edges.push((u, v));
                edge_lines.push(line_no);
            }
            Some(tok) => {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("unrecognized line type '{tok}'"),
                });
            }
            None => unreachable!("non-empty trimmed line has a first token"),
        }
    }
    let Some((n, m, header_line)) = header else {
        return Err(Error::Parse {
            line: text.lines().count().max(1),
            msg: "missing header line".into(),
        });
    };
    if edges.len() != m {
        return Err(Error::Parse {
            line: header_line,
            msg: format!("header declares {m} edges but {} were given", edges.len()),
        });
    }
    Graph::from_edges(n, &edges).map_err(|e| Error::Parse {
        line: header_line,
        msg: e.to_string(),
    })
}

fn parse_field(field: Option<&str>, line: usize, what: &str) -> Result<usize> {
    let Some(text) = field else {
        return Err(Error::Parse {
            line,
            msg: format!("missing {what}"),
        });
    };
    text.parse::<usize>().map_err(|_| Error::Parse {
        line,
        msg: format!("invalid {what} '{text}'"),
    })
}

/// Exact isomorphism test returning a witness map (`map[u]` = image of `u`,
/// index 0 unused), or `None` when the graphs are not isomorphic. The result
/// is deterministic for fixed inputs: among all isomorphisms it returns the
/// one found first by ascending-candidate backtracking over a color-refined
/// vertex order.
#[must_use]
pub fn isomorphic(g: &Graph, h: &Graph) -> Option<Vec<usize>> {
    if g.n() != h.n() || g.m() != h.m() {
        return None;
    }
    let n = g.n();
    let (gc, hc) = joint_refinement(g, h)?;
    // Order g's vertices: rarest refined color first, then by index.
    let mut color_count = std::collections::HashMap::new();
    for v in 1..=n {
        *color_count.entry(gc[v]).or_insert(0usize) += 1;
    }
    let mut order: Vec<usize> = (1..=n).collect();
    order.sort_by_key(|&v| (color_count[&gc[v]], v));

    let mut map = vec![0usize; n + 1];
    let mut used = vec![false; n + 1];
    fn extend(
        g: &Graph,
        h: &Graph,
        order: &[usize],
        gc: &[u64],
        hc: &[u64],
        pos: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if pos == order.len() {
            return true;
        }
        let v = order[pos];
        for w in 1..=h.n() {
            if used[w] || hc[w] != gc[v] {
                continue;
            }
            let consistent = order[..pos]
                .iter()
                .all(|&p| g.has_edge(v, p) == h.has_edge(w, map[p]));
            if consistent {
                map[v] = w;
                used[w] = true;
                if extend(g, h, order, gc, hc, pos + 1, map, used) {
                    return true;
                }
                used[w] = false;
                map[v] = 0;
            }
        }
        false
    }
    if extend(g, h, &order, &gc, &hc, 0, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

/// Joint iterated color refinement of two graphs: returns per-vertex color
/// ids drawn from a shared dictionary, or `None` if the color histograms
/// disagree (a certificate of non-isomorphism).
fn joint_refinement(g: &Graph, h: &Graph) -> Option<(Vec<u64>, Vec<u64>)> {
    let n = g.n();
    let mut gc = vec![0u64; n + 1];
    let mut hc = vec![0u64; n + 1];
    for _round in 0..n {
        let mut dict: std::collections::HashMap<(u64, Vec<u64>), u64> =
            std::collections::HashMap::new();
        let mut next_id = 0u64;
        let mut assign = |old: u64, mut nb: Vec<u64>, dict: &mut std::collections::HashMap<(u64, Vec<u64>), u64>| {
            nb.sort_unstable();
            *dict.entry((old, nb)).or_insert_with(|| {
                next_id += 1;
                next_id
            })
        };
        let gnew: Vec<u64> = (0..=n)
            .map(|v| {
                if v == 0 {
                    0
                } else {
                    assign(gc[v], g.neighbors(v).map(|u| gc[u]).collect(), &mut dict)
                }
            })
            .collect();
        let hnew: Vec<u64> = (0..=n)
            .map(|v| {
                if v == 0 {
                    0
                } else {
                    assign(hc[v], h.neighbors(v).map(|u| hc[u]).collect(), &mut dict)
                }
            })
            .collect();
        let mut ghist: Vec<u64> = gnew[1..].to_vec();
        let mut hhist: Vec<u64> = hnew[1..].to_vec();
        ghist.sort_unstable();
        hhist.sort_unstable();
        if ghist != hhist {
            return None;
        }
        let stable = gnew == gc && hnew == hc;
        gc = gnew;
        hc = hnew;
        if stable {
            break;
        }
    }
    Some((gc, hc))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_normalizes_and_sorts_edges() {
        let g = Graph::from_edges(4, &[(4, 1), (2, 1), (3, 2), (4, 3)]).unwrap();
        assert_eq!(g.edges(), &[(1, 2), (1, 4), (2, 3), (3, 4)]);
        assert_eq!(g.edge_index(4, 1), Some(1));
        assert!(g.has_edge(1, 4));
        assert!(!g.has_edge(1, 3));
    }

    #[test]
    fn construction_rejects_loops_duplicates_and_range_errors() {
        assert!(matches!(
            Graph::from_edges(3, &[(1, 1)]),
            Err(Error::InvalidGraph(_))
        ));
        assert!(matches!(
            Graph::from_edges(3, &[(1, 2), (2, 1)]),
            Err(Error::InvalidGraph(_))
        ));
        assert!(matches!(
            Graph::from_edges(3, &[(1, 4)]),
            Err(Error::InvalidGraph(_))
        ));
    }

    #[test]
    fn parse_rejects_malformed_input_with_line_numbers() {
        let missing_header = parse_graph("e 1 2\n");
        assert_eq!(
            missing_header,
            Err(Error::Parse {
                line: 1,
                msg: "edge line before header".into()
            })
        );
        let loop_edge = parse_graph("p 3 3\ne 1 2\ne 1 1\ne 2 3\n");
        assert!(matches!(loop_edge, Err(Error::Parse { line: 3, .. })));
        let unordered = parse_graph("p 3 1\ne 2 1\n");
        assert!(matches!(unordered, Err(Error::Parse { line: 2, .. })));
        let duplicate = parse_graph("p 3 2\ne 1 2\ne 1 2\n");
        assert!(matches!(duplicate, Err(Error::Parse { line: 3, .. })));
        let count_mismatch = parse_graph("p 3 2\ne 1 2\n");
        assert!(matches!(count_mismatch, Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn parse_serialize_round_trip() {
        let g = Graph::cycle(6);
        let text = g.serialize();
        let h = parse_graph(&text).unwrap();
        assert_eq!(g, h);
        assert_eq!(h.serialize(), text);
        // Comments and blank lines are tolerated on input.
        let commented = format!("# a cycle\n\n{text}# trailing\n");
        assert_eq!(parse_graph(&commented).unwrap(), g);
    }

    #[test]
    fn bipartition_makes_lowest_vertex_black_per_component() {
        let c6 = Graph::cycle(6);
        let col = c6.bipartition().expect("even cycle is bipartite");
        for v in [1, 3, 5] {
            assert_eq!(col.color(v), Color::Black);
        }
        for v in [2, 4, 6] {
            assert_eq!(col.color(v), Color::White);
        }
        assert!(Graph::complete(4).bipartition().is_none());
        // Two disjoint edges: each component's lowest vertex is black.
        let two = Graph::from_edges(4, &[(1, 2), (3, 4)]).unwrap();
        let col = two.bipartition().unwrap();
        assert_eq!(col.color(1), Color::Black);
        assert_eq!(col.color(3), Color::Black);
    }

    #[test]
    fn cyclomatic_number_matches_and_rejects_disconnected() {
        assert_eq!(Graph::cycle(6).cyclomatic_number().unwrap(), 1);
        assert_eq!(Graph::complete(4).cyclomatic_number().unwrap(), 3);
        assert_eq!(
            Graph::complete_bipartite(3, 3).cyclomatic_number().unwrap(),
            4
        );
        let disjoint = Graph::from_edges(4, &[(1, 2), (3, 4)]).unwrap();
        assert_eq!(disjoint.cyclomatic_number(), Err(Error::Disconnected));
    }

    #[test]
    fn isomorphism_finds_witness_and_rejects_non_isomorphic() {
        let c4 = Graph::cycle(4);
        let relabeled = Graph::from_edges(4, &[(1, 3), (3, 2), (2, 4), (4, 1)]).unwrap();
        let map = isomorphic(&c4, &relabeled).expect("both are 4-cycles");
        for &(u, v) in c4.edges() {
            assert!(relabeled.has_edge(map[u], map[v]));
        }
        assert!(isomorphic(&c4, &Graph::path(4)).is_none());
        let k33_like = Graph::cycle_with_chords(6, &[(1, 4), (2, 5), (3, 6)]);
        assert!(isomorphic(&k33_like, &Graph::complete_bipartite(3, 3)).is_some());
    }

    #[test]
    fn theta_graph_shape() {
        let t = Graph::theta(3, 3, 3);
        assert_eq!(t.n(), 8);
        assert_eq!(t.m(), 9);
        assert_eq!(t.degree(1), 3);
        assert_eq!(t.degree(2), 3);
        assert_eq!((3..=8).filter(|&v| t.degree(v) == 2).count(), 6);
    }

    #[test]
    fn induced_and_spanned_relabel_in_order() {
        let k4 = Graph::complete(4);
        // Induce on {2, 3, 4}: a triangle relabeled 1,2,3.
        let alive = (1u128 << 2) | (1 << 3) | (1 << 4);
        let (tri, labels) = k4.induced(alive);
        assert_eq!(tri.n(), 3);
        assert_eq!(tri.edges(), &[(1, 2), (1, 3), (2, 3)]);
        assert_eq!(labels, vec![0, 2, 3, 4]);
        // Span edges {1,2} and {3,4}: four vertices, two edges.
        let e12 = k4.edge_index(1, 2).unwrap();
        let e34 = k4.edge_index(3, 4).unwrap();
        let (sp, labels) = k4.spanned((1u128 << e12) | (1 << e34));
        assert_eq!(sp.n(), 4);
        assert_eq!(sp.edges(), &[(1, 2), (3, 4)]);
        assert_eq!(labels, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn components_within_masks() {
        let g = Graph::from_edges(5, &[(1, 2), (2, 3), (4, 5)]).unwrap();
        let comps = g.components();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0], 0b01110);
        assert_eq!(comps[1], 0b110000);
        assert!(!g.is_connected());
        // Removing vertex 2 splits the first component.
        let alive = g.vertices_mask() & !(1u128 << 2);
        assert_eq!(g.components_within(alive).len(), 3);
    }
}
