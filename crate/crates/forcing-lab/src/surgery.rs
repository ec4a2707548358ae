//! Graph surgery: odd-path edge replacement, quadrilateral subdivision and
//! its single-edge gadget, the induced bijection between perfect matchings,
//! recognition of odd-path-expanded copies of a pattern, and bipartite ear
//! decomposition.

use std::collections::BTreeMap;

use crate::bits;
use crate::graph::Graph;
use crate::matching::{is_matching_covered, is_matchable_within, is_perfect_matching};
use crate::{Error, Result};

/// A plan mapping host edges to a surgery parameter. For odd-path
/// replacement the parameter is the path length (odd, ≥ 1); for
/// quadrilateral subdivision it is the number of added quadrilaterals
/// (≥ 0, edge becomes a path of length `4k+1` plus `k` chords).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SubdivisionPlan {
    entries: BTreeMap<(usize, usize), usize>,
}

impl SubdivisionPlan {
    /// Build a plan from `(edge, parameter)` pairs; endpoints may be given
    /// in either order. Later duplicates overwrite earlier ones.
    #[must_use]
    pub fn new(entries: &[((usize, usize), usize)]) -> Self {
        let mut map = BTreeMap::new();
        for &((u, v), p) in entries {
            map.insert((u.min(v), u.max(v)), p);
        }
        Self { entries: map }
    }

    /// A plan assigning the same parameter to every listed edge.
    #[must_use]
    pub fn uniform(edges: &[(usize, usize)], param: usize) -> Self {
        let pairs: Vec<((usize, usize), usize)> =
            edges.iter().map(|&e| (e, param)).collect();
        Self::new(&pairs)
    }

    /// The planned `(edge, parameter)` pairs in lexicographic edge order.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), usize)> + '_ {
        self.entries.iter().map(|(&e, &p)| (e, p))
    }

    /// Number of planned edges.
    #[must_use]
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Whether the plan is empty.
    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn check_edges_exist(&self, g: &Graph) -> Result<()> {
        for (&(u, v), _) in &self.entries {
            if !g.has_edge(u, v) {
                return Err(Error::Precondition(format!(
                    "planned edge {u}-{v} is not in the host graph"
                )));
            }
        }
        Ok(())
    }
}

/// The outcome of a surgery: the rebuilt graph, the vertex path that now
/// stands in for each planned edge, and the originating edge of every
/// newly created vertex. Untouched vertices keep their labels; new
/// vertices are `n+1, n+2, …` in lexicographic order of the planned edges.
#[derive(Debug, Clone)]
pub struct SurgeryResult {
    /// The graph after surgery.
    pub graph: Graph,
    /// Original edge `(u, v)` (with `u < v`) → full vertex path `u … v`.
    pub replacement_paths: BTreeMap<(usize, usize), Vec<usize>>,
    /// New vertex → the original edge it subdivides.
    pub origin_map: BTreeMap<usize, (usize, usize)>,
}

/// Replace each planned edge by a path of the planned odd length, keeping
/// everything else intact. Length 1 leaves the edge unchanged; odd lengths
/// preserve the parity of every cycle through a replaced edge.
pub fn bisubdivide(g: &Graph, plan: &SubdivisionPlan) -> Result<SurgeryResult> {
    plan.check_edges_exist(g)?;
    for ((u, v), len) in plan.entries() {
        if len % 2 == 0 {
            return Err(Error::Precondition(format!(
                "replacement length {len} for edge {u}-{v} is even"
            )));
        }
    }
    build_replacement(g, plan, |path, _k, edges| {
        for w in path.windows(2) {
            edges.push((w[0], w[1]));
        }
    })
}

/// Replace each planned edge `u–v` with parameter `k` by a path of length
/// `4k+1` plus the `k` chords joining internal vertices `4j−3` and `4j`
/// along it. `k = 0` leaves the edge unchanged.
pub fn quad_subdivide(g: &Graph, plan: &SubdivisionPlan) -> Result<SurgeryResult> {
    plan.check_edges_exist(g)?;
    let path_plan = SubdivisionPlan {
        entries: plan
            .entries
            .iter()
            .map(|(&e, &k)| (e, 4 * k + 1))
            .collect(),
    };
    build_replacement(g, &path_plan, |path, _len, edges| {
        for w in path.windows(2) {
            edges.push((w[0], w[1]));
        }
        let k = (path.len() - 2) / 4;
        for j in 1..=k {
            // Internal vertices are path[1..=4k]; chord j joins the
            // (4j−3)rd and (4j)th of them.
            edges.push((path[4 * j - 3], path[4 * j]));
        }
    })
}

/// The single-edge quadrilateral gadget: `u–v` becomes the path
/// `u w1 w2 w3 w4 v` plus the edge `w1–w4`. Equivalent to
/// [`quad_subdivide`] with `k = 1` on that edge alone.
pub fn quad_gadget(g: &Graph, e: (usize, usize)) -> Result<SurgeryResult> {
    quad_subdivide(g, &SubdivisionPlan::new(&[(e, 1)]))
}

/// Shared construction: walk planned edges in lexicographic order, hand new
/// vertices out sequentially, and let `emit` turn each replacement path
/// into result edges.
fn build_replacement(
    g: &Graph,
    plan: &SubdivisionPlan,
    emit: impl Fn(&[usize], usize, &mut Vec<(usize, usize)>),
) -> Result<SurgeryResult> {
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut replacement_paths = BTreeMap::new();
    let mut origin_map = BTreeMap::new();
    for &e in g.edges() {
        if !plan.entries.contains_key(&e) {
            edges.push(e);
        }
    }
    let mut next = g.n() + 1;
    for ((u, v), len) in plan.entries() {
        let mut path = vec![u];
        for _ in 1..len {
            path.push(next);
            origin_map.insert(next, (u, v));
            next += 1;
        }
        path.push(v);
        emit(&path, len, &mut edges);
        replacement_paths.insert((u, v), path);
    }
    Ok(SurgeryResult {
        graph: Graph::from_edges(next - 1, &edges)?,
        replacement_paths,
        origin_map,
    })
}

/// Transport a perfect matching of the original graph across a surgery:
/// kept edges stay; on each replacement path the odd-indexed edges are
/// taken when the original edge was matched, the even-indexed ones
/// otherwise. The map is a bijection between the perfect matchings of the
/// two graphs.
pub fn matching_bijection(g: &Graph, result: &SurgeryResult, m: u128) -> Result<u128> {
    if !is_perfect_matching(g, m) {
        return Err(Error::Precondition(
            "matching is not a perfect matching of the original graph".into(),
        ));
    }
    let out = &result.graph;
    let mut image = 0u128;
    for i in bits(m) {
        let e = g.edge_at(i);
        if !result.replacement_paths.contains_key(&e) {
            image |= 1u128
                << out.edge_index(e.0, e.1).ok_or_else(|| {
                    Error::Precondition(format!(
                        "edge {}-{} missing from the surgered graph",
                        e.0, e.1
                    ))
                })?;
        }
    }
    for (e, path) in &result.replacement_paths {
        let idx = g
            .edge_index(e.0, e.1)
            .expect("replacement paths originate from host edges");
        let matched = (m >> idx) & 1 == 1;
        for (j, w) in path.windows(2).enumerate() {
            let position = j + 1;
            if (position % 2 == 1) == matched {
                let at = out
                    .edge_index(w[0], w[1])
                    .expect("path edges exist in the surgered graph");
                image |= 1u128 << at;
            }
        }
    }
    Ok(image)
}

/// A decomposition of a bipartite matching covered graph into a base edge
/// plus odd ears, every prefix being a matching covered subgraph whose
/// complement is matchable.
#[derive(Debug, Clone)]
pub struct EarDecomposition {
    /// The starting edge.
    pub base_edge: (usize, usize),
    /// Each ear as its vertex sequence; endpoints lie in the graph built so
    /// far, interior vertices outside it.
    pub ears: Vec<Vec<usize>>,
}

/// Decompose a bipartite matching covered graph into a base edge plus odd
/// ears such that every prefix is matching covered and its vertex
/// complement is matchable. The base is the lexicographically least edge
/// and each step takes the first valid ear in (length, sequence) order;
/// the number of ears equals the cyclomatic number.
pub fn bipartite_ear_decomposition(g: &Graph) -> Result<EarDecomposition> {
    if g.bipartition().is_none() {
        return Err(Error::NotBipartite);
    }
    if !is_matching_covered(g) {
        return Err(Error::NotMatchingCovered);
    }
    let base_edge = *g
        .edges()
        .first()
        .ok_or_else(|| Error::InvalidGraph("graph has no edges".into()))?;
    let mut vmask: u128 = (1 << base_edge.0) | (1 << base_edge.1);
    let mut emask: u128 = 1; // edges are sorted, so the least edge has index 0
    let mut ears = Vec::new();
    while emask != g.edges_mask() {
        let ear = next_ear(g, vmask, emask).ok_or_else(|| {
            Error::Precondition("no valid ear extends the current subgraph".into())
        })?;
        for w in ear.windows(2) {
            emask |= 1u128 << g.edge_index(w[0], w[1]).expect("ear edges exist");
        }
        for &v in &ear {
            vmask |= 1u128 << v;
        }
        ears.push(ear);
    }
    Ok(EarDecomposition { base_edge, ears })
}

/// First ear in (length, sequence) order whose addition keeps the subgraph
/// matching covered with a matchable vertex complement.
fn next_ear(g: &Graph, vmask: u128, emask: u128) -> Option<Vec<usize>> {
    let max_len = g.n() - (vmask.count_ones() as usize) + 1;
    let mut len = 1;
    while len <= max_len {
        let mut found: Option<Vec<usize>> = None;
        for start in bits(vmask) {
            if found.is_some() {
                break;
            }
            let mut path = vec![start];
            extend_ear(g, vmask, emask, &mut path, len, &mut found);
        }
        if found.is_some() {
            return found;
        }
        len += 2;
    }
    None
}

fn extend_ear(
    g: &Graph,
    vmask: u128,
    emask: u128,
    path: &mut Vec<usize>,
    len: usize,
    found: &mut Option<Vec<usize>>,
) {
    if found.is_some() {
        return;
    }
    let cur = *path.last().expect("path is never empty");
    if path.len() == len {
        // One edge left: close into the existing subgraph.
        for t in bits(g.neighbors_mask(cur) & vmask) {
            let idx = g.edge_index(cur.min(t), cur.max(t)).expect("edge exists");
            if (emask >> idx) & 1 == 1 {
                continue;
            }
            let cand: Vec<usize> = path.iter().copied().chain([t]).collect();
            if ear_is_valid(g, vmask, emask, &cand) {
                *found = Some(cand);
                return;
            }
        }
        return;
    }
    let used: u128 = path.iter().fold(0, |acc, &v| acc | (1 << v));
    for x in bits(g.neighbors_mask(cur) & !vmask & !used) {
        path.push(x);
        extend_ear(g, vmask, emask, path, len, found);
        path.pop();
        if found.is_some() {
            return;
        }
    }
}

fn ear_is_valid(g: &Graph, vmask: u128, emask: u128, ear: &[usize]) -> bool {
    let mut new_vmask = vmask;
    let mut new_emask = emask;
    for w in ear.windows(2) {
        new_emask |= 1u128 << g.edge_index(w[0].min(w[1]), w[0].max(w[1])).expect("edge");
    }
    for &v in ear {
        new_vmask |= 1u128 << v;
    }
    if !is_matchable_within(g, g.vertices_mask() & !new_vmask) {
        return false;
    }
    let (sub, _) = g.spanned(new_emask);
    is_matching_covered(&sub)
}

/// A witness that `h` is an odd-path expansion of the pattern `j`: each
/// pattern edge maps to its replacement path in `h` (as a vertex sequence
/// from the image of one endpoint to the image of the other).
pub type ExpansionWitness = BTreeMap<(usize, usize), Vec<usize>>;

/// Decide whether `h` can be obtained from `j` by replacing edges with odd
/// paths. When `constraint` is given, only those edges of `j` may expand
/// to length > 1. Returns a pattern-edge → host-path witness, or `None`.
#[must_use]
pub fn recognize_bisubdivision(
    h: &Graph,
    j: &Graph,
    constraint: Option<u128>,
) -> Option<ExpansionWitness> {
    if h.n() < j.n() || (h.n() - j.n()) % 2 != 0 || h.m() < j.m() {
        return None;
    }
    if (h.m() - j.m()) % 2 != 0 || h.m() - j.m() != h.n() - j.n() {
        return None;
    }
    let allowed: u128 = constraint.unwrap_or(j.edges_mask());
    let ht = Topology::of(h);
    let jt = Topology::of(j);
    if ht.anchors.len() != jt.anchors.len()
        || ht.chains.len() != jt.chains.len()
        || ht.cycles.len() != jt.cycles.len()
    {
        return None;
    }
    // Degree multisets must agree on the anchors.
    let mut hd: Vec<usize> = ht.anchors.iter().map(|&v| h.degree(v)).collect();
    let mut jd: Vec<usize> = jt.anchors.iter().map(|&v| j.degree(v)).collect();
    hd.sort_unstable();
    jd.sort_unstable();
    if hd != jd {
        return None;
    }
    let mut anchor_map: BTreeMap<usize, usize> = BTreeMap::new();
    let mut witness = ExpansionWitness::new();
    if match_anchors(h, j, &ht, &jt, allowed, 0, &mut anchor_map) {
        // Anchor matching succeeded; rebuild the full witness.
        let mut used_h: Vec<bool> = vec![false; ht.chains.len()];
        if !assign_chains(h, j, &ht, &jt, allowed, &anchor_map, &mut used_h, &mut witness) {
            return None;
        }
        if !assign_cycles(j, &ht, &jt, allowed, &mut witness) {
            return None;
        }
        return Some(witness);
    }
    None
}

/// Independently re-validate an expansion witness: every pattern edge maps
/// to an odd host path, stretched edges lie in `constraint` when given,
/// endpoint images are consistent and injective, the paths are internally
/// disjoint, and together they cover every host edge exactly once.
#[must_use]
pub fn validate_expansion(
    h: &Graph,
    j: &Graph,
    witness: &ExpansionWitness,
    constraint: Option<u128>,
) -> bool {
    let allowed = constraint.unwrap_or(j.edges_mask());
    if witness.len() != j.m() {
        return false;
    }
    let mut image: BTreeMap<usize, usize> = BTreeMap::new();
    let mut edge_seen: u128 = 0;
    let mut interior_seen: u128 = 0;
    for (&(a, b), path) in witness {
        let Some(idx) = j.edge_index(a, b) else {
            return false;
        };
        let len = path.len() - 1;
        if len % 2 == 0 || (len > 1 && (allowed >> idx) & 1 == 0) {
            return false;
        }
        for (x, y) in [(a, path[0]), (b, path[len])] {
            match image.get(&x) {
                Some(&img) if img != y => return false,
                None => {
                    image.insert(x, y);
                }
                _ => {}
            }
        }
        for w in path.windows(2) {
            let Some(he) = h.edge_index(w[0].min(w[1]), w[0].max(w[1])) else {
                return false;
            };
            if (edge_seen >> he) & 1 == 1 {
                return false;
            }
            edge_seen |= 1 << he;
        }
        for &v in &path[1..len] {
            if (interior_seen >> v) & 1 == 1 {
                return false;
            }
            interior_seen |= 1 << v;
        }
    }
    // Injective vertex image, disjoint from all path interiors.
    let mut images: Vec<usize> = image.values().copied().collect();
    images.sort_unstable();
    images.dedup();
    if images.len() != image.len() {
        return false;
    }
    if images.iter().any(|&v| (interior_seen >> v) & 1 == 1) {
        return false;
    }
    // Isolated pattern vertices have no incident edge, so their images are
    // unconstrained here; covering all host edges exactly once plus the
    // vertex count accounting pins everything else.
    edge_seen == h.edges_mask() && j.n() + (interior_seen.count_ones() as usize) == h.n()
}

/// Chains and pure cycles of a graph: anchors are vertices of degree ≠ 2;
/// chains are maximal anchor-to-anchor paths through degree-2 interiors;
/// cycles are 2-regular components without anchors.
struct Topology {
    anchors: Vec<usize>,
    /// Stored with canonical orientation (lex-least of the two readings).
    chains: Vec<Vec<usize>>,
    cycles: Vec<Vec<usize>>,
}

impl Topology {
    fn of(g: &Graph) -> Self {
        let anchors: Vec<usize> = (1..=g.n()).filter(|&v| g.degree(v) != 2).collect();
        let anchor_mask: u128 = anchors.iter().fold(0, |acc, &v| acc | (1 << v));
        let mut chains: Vec<Vec<usize>> = Vec::new();
        let mut seen_edges: u128 = 0;
        for &a in &anchors {
            for first in g.neighbors(a) {
                let start_idx = g.edge_index(a.min(first), a.max(first)).expect("edge");
                if (seen_edges >> start_idx) & 1 == 1 {
                    continue;
                }
                let mut path = vec![a];
                let (mut prev, mut cur) = (a, first);
                loop {
                    let idx = g
                        .edge_index(prev.min(cur), prev.max(cur))
                        .expect("edge exists");
                    seen_edges |= 1u128 << idx;
                    path.push(cur);
                    if (anchor_mask >> cur) & 1 == 1 {
                        break;
                    }
                    let next = g
                        .neighbors(cur)
                        .into_iter()
                        .find(|&x| x != prev)
                        .expect("degree-2 interior continues");
                    prev = cur;
                    cur = next;
                }
                chains.push(canonical_chain(path));
            }
        }
        chains.sort();
        chains.dedup();
        let mut cycles = Vec::new();
        let mut on_chain: u128 = anchor_mask;
        for c in &chains {
            for &v in c {
                on_chain |= 1 << v;
            }
        }
        let mut remaining = g.vertices_mask() & !on_chain;
        while remaining != 0 {
            let s = remaining.trailing_zeros() as usize;
            let mut cyc = vec![s];
            let first = g.neighbors(s).next().expect("2-regular vertex");
            let (mut prev, mut cur) = (s, first);
            while cur != s {
                cyc.push(cur);
                let next = g
                    .neighbors(cur)
                    .find(|&x| x != prev)
                    .expect("2-regular component");
                prev = cur;
                cur = next;
            }
            for &v in &cyc {
                remaining &= !(1u128 << v);
            }
            cycles.push(cyc);
        }
        Self {
            anchors,
            chains,
            cycles,
        }
    }

    /// Chains with the given (unordered) anchor endpoints.
    fn chains_between(&self, a: usize, b: usize) -> Vec<usize> {
        self.chains
            .iter()
            .enumerate()
            .filter(|(_, c)| {
                let (x, y) = (c[0], *c.last().expect("nonempty"));
                (x == a && y == b) || (x == b && y == a)
            })
            .map(|(i, _)| i)
            .collect()
    }
}

fn canonical_chain(path: Vec<usize>) -> Vec<usize> {
    let mut rev = path.clone();
    rev.reverse();
    if rev < path {
        rev
    } else {
        path
    }
}

/// Can a pattern chain of `t` edges expand to a host chain of `length`
/// edges, given which pattern edges may stretch?
fn chain_compatible(j: &Graph, jchain: &[usize], length: usize, allowed: u128) -> bool {
    let t = jchain.len() - 1;
    if length < t || (length - t) % 2 != 0 {
        return false;
    }
    length == t || chain_allowed_edge(j, jchain, allowed).is_some()
}

/// Lex-least expandable edge of a pattern chain, as its window index.
fn chain_allowed_edge(j: &Graph, jchain: &[usize], allowed: u128) -> Option<usize> {
    let mut best: Option<(usize, usize)> = None; // (edge index, window position)
    for (pos, w) in jchain.windows(2).enumerate() {
        let idx = j.edge_index(w[0].min(w[1]), w[0].max(w[1])).expect("edge");
        if (allowed >> idx) & 1 == 1 && best.map_or(true, |(b, _)| idx < b) {
            best = Some((idx, pos));
        }
    }
    best.map(|(_, pos)| pos)
}

fn match_anchors(
    h: &Graph,
    j: &Graph,
    ht: &Topology,
    jt: &Topology,
    allowed: u128,
    next: usize,
    anchor_map: &mut BTreeMap<usize, usize>,
) -> bool {
    if next == jt.anchors.len() {
        // All anchors fixed: chain groups and cycles must be assignable.
        let mut used_h = vec![false; ht.chains.len()];
        let mut scratch = ExpansionWitness::new();
        return assign_chains(h, j, ht, jt, allowed, anchor_map, &mut used_h, &mut scratch)
            && assign_cycles(j, ht, jt, allowed, &mut scratch);
    }
    let x = jt.anchors[next];
    for &cand in &ht.anchors {
        if anchor_map.values().any(|&y| y == cand) || h.degree(cand) != j.degree(x) {
            continue;
        }
        anchor_map.insert(x, cand);
        // Quick consistency: chain groups toward already-mapped anchors
        // (including self-loop chains at x itself) must match in size and
        // admit a compatible pairing.
        let ok = anchor_map.iter().all(|(&y, &cy)| {
            let jg = jt.chains_between(x, y);
            let hg = ht.chains_between(cand, cy);
            jg.len() == hg.len() && group_matchable(j, jt, ht, &jg, &hg, allowed)
        });
        if ok && match_anchors(h, j, ht, jt, allowed, next + 1, anchor_map) {
            return true;
        }
        anchor_map.remove(&x);
    }
    false
}

/// Does a perfect matching exist between a pattern chain group and a host
/// chain group under length compatibility? Groups are tiny; backtrack.
fn group_matchable(
    j: &Graph,
    jt: &Topology,
    ht: &Topology,
    jg: &[usize],
    hg: &[usize],
    allowed: u128,
) -> bool {
    fn go(
        j: &Graph,
        jt: &Topology,
        ht: &Topology,
        jg: &[usize],
        hg: &[usize],
        allowed: u128,
        i: usize,
        taken: &mut Vec<bool>,
    ) -> bool {
        if i == jg.len() {
            return true;
        }
        for s in 0..taken.len() {
            if taken[s] {
                continue;
            }
            let ok = chain_compatible(
                j,
                &jt.chains[jg[i]],
                ht.chains[hg[s]].len() - 1,
                allowed,
            );
            if ok {
                taken[s] = true;
                if go(j, jt, ht, jg, hg, allowed, i + 1, taken) {
                    return true;
                }
                taken[s] = false;
            }
        }
        false
    }
    let mut taken = vec![false; hg.len()];
    go(j, jt, ht, jg, hg, allowed, 0, &mut taken)
}

/// Commit a concrete chain assignment and write the witness paths.
fn assign_chains(
    h: &Graph,
    j: &Graph,
    ht: &Topology,
    jt: &Topology,
    allowed: u128,
    anchor_map: &BTreeMap<usize, usize>,
    used_h: &mut [bool],
    witness: &mut ExpansionWitness,
) -> bool {
    fn go(
        h: &Graph,
        j: &Graph,
        ht: &Topology,
        jt: &Topology,
        allowed: u128,
        anchor_map: &BTreeMap<usize, usize>,
        i: usize,
        used_h: &mut [bool],
        witness: &mut ExpansionWitness,
    ) -> bool {
        if i == jt.chains.len() {
            return used_h.iter().all(|&u| u);
        }
        let jchain = &jt.chains[i];
        let (ja, jb) = (jchain[0], *jchain.last().expect("nonempty"));
        let (ha, hb) = (anchor_map[&ja], anchor_map[&jb]);
        for (s, hchain) in ht.chains.iter().enumerate() {
            if used_h[s] {
                continue;
            }
            let (xa, xb) = (hchain[0], *hchain.last().expect("nonempty"));
            let fits_forward = xa == ha && xb == hb;
            let fits_backward = xa == hb && xb == ha;
            if !fits_forward && !fits_backward {
                continue;
            }
            if !chain_compatible(j, jchain, hchain.len() - 1, allowed) {
                continue;
            }
            // Self-loop chains admit both traversal directions.
            let mut orientations: Vec<Vec<usize>> = Vec::new();
            if fits_forward {
                orientations.push(hchain.clone());
            }
            if fits_backward {
                let mut r = hchain.clone();
                r.reverse();
                if !orientations.contains(&r) {
                    orientations.push(r);
                }
            }
            for oriented in orientations {
                used_h[s] = true;
                let added: Vec<(usize, usize)> =
                    write_chain_witness(j, jchain, &oriented, allowed, witness);
                if go(
                    h, j, ht, jt, allowed, anchor_map, i + 1, used_h, witness,
                ) {
                    return true;
                }
                for e in added {
                    witness.remove(&e);
                }
                used_h[s] = false;
            }
        }
        false
    }
    go(h, j, ht, jt, allowed, anchor_map, 0, used_h, witness)
}

/// Distribute a host chain over the pattern chain's edges: every pattern
/// edge takes one host edge except the lex-least expandable edge, which
/// absorbs all extra length. Returns the witness keys written.
fn write_chain_witness(
    j: &Graph,
    jchain: &[usize],
    hchain: &[usize],
    allowed: u128,
    witness: &mut ExpansionWitness,
) -> Vec<(usize, usize)> {
    let t = jchain.len() - 1;
    let extra = (hchain.len() - 1) - t;
    let stretch_pos = if extra == 0 {
        usize::MAX
    } else {
        chain_allowed_edge(j, jchain, allowed).expect("compatibility was checked")
    };
    let mut keys = Vec::with_capacity(t);
    let mut at = 0usize;
    for (pos, w) in jchain.windows(2).enumerate() {
        let span = if pos == stretch_pos { 1 + extra } else { 1 };
        let seg: Vec<usize> = hchain[at..=at + span].to_vec();
        at += span;
        let key = (w[0].min(w[1]), w[0].max(w[1]));
        // Orient the path from the smaller pattern endpoint.
        let path = if w[0] < w[1] { seg } else { seg.into_iter().rev().collect() };
        witness.insert(key, path);
        keys.push(key);
    }
    keys
}

/// Pair pattern cycles with host cycles and write their witnesses.
fn assign_cycles(
    j: &Graph,
    ht: &Topology,
    jt: &Topology,
    allowed: u128,
    witness: &mut ExpansionWitness,
) -> bool {
    fn cycle_compatible(t: usize, length: usize, can_stretch: bool) -> bool {
        length >= t && (length - t) % 2 == 0 && (length == t || can_stretch)
    }
    fn go(
        j: &Graph,
        ht: &Topology,
        jt: &Topology,
        allowed: u128,
        i: usize,
        used: &mut Vec<bool>,
        witness: &mut ExpansionWitness,
    ) -> bool {
        if i == jt.cycles.len() {
            return true;
        }
        let jcyc = &jt.cycles[i];
        let t = jcyc.len();
        let mut closed = jcyc.clone();
        closed.push(jcyc[0]);
        let can_stretch = chain_allowed_edge(j, &closed, allowed).is_some();
        for (s, hcyc) in ht.cycles.iter().enumerate() {
            if used[s] || !cycle_compatible(t, hcyc.len(), can_stretch) {
                continue;
            }
            used[s] = true;
            let mut closed_j = jcyc.clone();
            closed_j.push(jcyc[0]);
            let mut closed_h = hcyc.clone();
            closed_h.push(hcyc[0]);
            let added = write_chain_witness(j, &closed_j, &closed_h, allowed, witness);
            if go(j, ht, jt, allowed, i + 1, used, witness) {
                return true;
            }
            for e in added {
                witness.remove(&e);
            }
            used[s] = false;
        }
        false
    }
    let mut used = vec![false; ht.cycles.len()];
    go(j, ht, jt, allowed, 0, &mut used, witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forcing::{global_forcing_number, max_anti_forcing_number};
    use crate::graph::isomorphic;
    use crate::matching::enumerate_perfect_matchings;

    #[test]
    fn odd_path_replacement_examples() {
        // C4 with one edge stretched to length 3 is C6.
        let c4 = Graph::cycle(4);
        let r = bisubdivide(&c4, &SubdivisionPlan::new(&[((1, 2), 3)])).unwrap();
        assert_eq!(r.graph.n(), 6);
        assert!(isomorphic(&r.graph, &Graph::cycle(6)).is_some());
        assert_eq!(r.replacement_paths[&(1, 2)], vec![1, 5, 6, 2]);
        assert_eq!(r.origin_map[&5], (1, 2));
        assert_eq!(r.origin_map[&6], (1, 2));

        // K4 with edge 1-2 stretched: 6 vertices, 1 and 2 joined by a 3-path.
        let k4 = Graph::complete(4);
        let r = bisubdivide(&k4, &SubdivisionPlan::new(&[((1, 2), 3)])).unwrap();
        assert_eq!(r.graph.n(), 6);
        assert!(!r.graph.has_edge(1, 2));
        assert!(r.graph.has_edge(1, 5) && r.graph.has_edge(5, 6) && r.graph.has_edge(6, 2));

        // Identity plan: every edge at length 1 leaves the graph unchanged.
        let c6 = Graph::cycle(6);
        let all: Vec<((usize, usize), usize)> =
            c6.edges().iter().map(|&e| (e, 1)).collect();
        let r = bisubdivide(&c6, &SubdivisionPlan::new(&all)).unwrap();
        assert_eq!(r.graph.edges(), c6.edges());
        assert_eq!(r.graph.n(), 6);
        assert!(r.origin_map.is_empty());

        // Errors: missing edge, even length.
        assert!(matches!(
            bisubdivide(&c4, &SubdivisionPlan::new(&[((1, 3), 3)])),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            bisubdivide(&c4, &SubdivisionPlan::new(&[((1, 2), 2)])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn matching_transport_follows_the_parity_rule() {
        let c4 = Graph::cycle(4);
        let r = bisubdivide(&c4, &SubdivisionPlan::new(&[((1, 2), 3)])).unwrap();
        // Path is 1-5-6-2. Matched original edge: odd-indexed path edges.
        let m_with = 1u128 << c4.edge_index(1, 2).unwrap()
            | 1 << c4.edge_index(3, 4).unwrap();
        let image = matching_bijection(&c4, &r, m_with).unwrap();
        let out = &r.graph;
        assert_eq!(
            image,
            1u128 << out.edge_index(1, 5).unwrap()
                | 1 << out.edge_index(2, 6).unwrap()
                | 1 << out.edge_index(3, 4).unwrap()
        );
        // Unmatched original edge: the single even-indexed (middle) edge.
        let m_without = 1u128 << c4.edge_index(2, 3).unwrap()
            | 1 << c4.edge_index(1, 4).unwrap();
        let image = matching_bijection(&c4, &r, m_without).unwrap();
        assert_eq!(
            image,
            1u128 << out.edge_index(5, 6).unwrap()
                | 1 << out.edge_index(2, 3).unwrap()
                | 1 << out.edge_index(1, 4).unwrap()
        );
        // Bijectivity: C4 and its expansion both have exactly 2 perfect
        // matchings, and the transported images are exactly those.
        let originals = enumerate_perfect_matchings(&c4);
        let mut images: Vec<u128> = originals
            .iter()
            .map(|&m| matching_bijection(&c4, &r, m).unwrap())
            .collect();
        images.sort_unstable();
        images.dedup();
        let mut targets = enumerate_perfect_matchings(&r.graph);
        targets.sort_unstable();
        assert_eq!(images, targets);
        // Not perfect: rejected.
        assert!(matches!(
            matching_bijection(&c4, &r, 1),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn quadrilateral_subdivision_examples() {
        let c4 = Graph::cycle(4);
        // k = 0 everywhere is the identity.
        let r = quad_subdivide(&c4, &SubdivisionPlan::uniform(c4.edges(), 0)).unwrap();
        assert_eq!(r.graph.edges(), c4.edges());
        // k = 1 on one edge: an 8-cycle plus one chord spanning a 4-path.
        let r = quad_subdivide(&c4, &SubdivisionPlan::new(&[((1, 2), 1)])).unwrap();
        assert_eq!(r.graph.n(), 8);
        assert_eq!(r.graph.m(), 9);
        assert_eq!(r.replacement_paths[&(1, 2)], vec![1, 5, 6, 7, 8, 2]);
        assert!(r.graph.has_edge(5, 8), "chord joins internal vertices 1 and 4");
        let gadget = quad_gadget(&c4, (1, 2)).unwrap();
        assert_eq!(gadget.graph.edges(), r.graph.edges());
        // Same up to relabeling as C8 + a chord spanning a 4-path.
        let c8_chord = Graph::cycle_with_chords(8, &[(1, 4)]);
        assert!(isomorphic(&r.graph, &c8_chord).is_some());
    }

    #[test]
    fn gadget_increments_both_forcing_numbers_on_c4() {
        let c4 = Graph::cycle(4);
        let (gf0, _) = global_forcing_number(&c4).unwrap();
        let (af0, _, _) = max_anti_forcing_number(&c4).unwrap();
        let r = quad_gadget(&c4, (1, 2)).unwrap();
        let (gf1, _) = global_forcing_number(&r.graph).unwrap();
        let (af1, _, _) = max_anti_forcing_number(&r.graph).unwrap();
        assert_eq!((gf0, af0), (1, 1));
        assert_eq!((gf1, af1), (2, 2));
    }

    #[test]
    fn recognition_finds_and_rejects_expansions() {
        // C6 is C4 with some edge expanded.
        let c6 = Graph::cycle(6);
        let c4 = Graph::cycle(4);
        let w = recognize_bisubdivision(&c6, &c4, None);
        assert!(w.is_some());
        assert!(validate_expansion(&c6, &c4, &w.unwrap(), None));
        // C6 is not an expansion of K4.
        assert!(recognize_bisubdivision(&Graph::cycle(6), &Graph::complete(4), None).is_none());
        // A theta graph with one branch lengthened is still recognized.
        let theta = Graph::theta(3, 3, 3);
        let long = Graph::theta(3, 3, 5);
        let w = recognize_bisubdivision(&long, &theta, None).unwrap();
        assert!(validate_expansion(&long, &theta, &w, None));
        // Parity: C5 is not an odd expansion of C4 (odd total).
        assert!(recognize_bisubdivision(&Graph::cycle(5), &Graph::cycle(4), None).is_none());
        // C8 from C4: with full freedom and when all growth is confined to
        // one edge.
        let c8 = Graph::cycle(8);
        let w = recognize_bisubdivision(&c8, &c4, None).unwrap();
        assert!(validate_expansion(&c8, &c4, &w, None));
        let only_edge_12 = 1u128 << c4.edge_index(1, 2).unwrap();
        let w = recognize_bisubdivision(&c8, &c4, Some(only_edge_12)).unwrap();
        assert!(validate_expansion(&c8, &c4, &w, Some(only_edge_12)));
    }

    #[test]
    fn recognition_respects_constraints() {
        // K4 with edge 1-2 expanded to length 3.
        let k4 = Graph::complete(4);
        let r = bisubdivide(&k4, &SubdivisionPlan::new(&[((1, 2), 3)])).unwrap();
        let h = &r.graph;
        let w = recognize_bisubdivision(h, &k4, None).unwrap();
        assert!(validate_expansion(h, &k4, &w, None));
        let e12 = 1u128 << k4.edge_index(1, 2).unwrap();
        let w = recognize_bisubdivision(h, &k4, Some(e12)).unwrap();
        assert!(validate_expansion(h, &k4, &w, Some(e12)));
        // A single stretched C4 edge under a single-edge constraint: the
        // full growth lands on that edge.
        let c4 = Graph::cycle(4);
        let r = bisubdivide(&c4, &SubdivisionPlan::new(&[((1, 2), 5)])).unwrap();
        let e12c = 1u128 << c4.edge_index(1, 2).unwrap();
        let witness = recognize_bisubdivision(&r.graph, &c4, Some(e12c)).unwrap();
        assert!(validate_expansion(&r.graph, &c4, &witness, Some(e12c)));
        assert_eq!(witness[&(1, 2)].len(), 6, "the 1-2 path has length 5");
        assert_eq!(witness[&(2, 3)].len(), 2);
    }

    #[test]
    fn ear_decompositions_have_cyclomatic_many_ears() {
        let c6 = Graph::cycle(6);
        let d = bipartite_ear_decomposition(&c6).unwrap();
        assert_eq!(d.base_edge, (1, 2));
        assert_eq!(d.ears.len(), 1);

        let k33 = Graph::complete_bipartite(3, 3);
        let d = bipartite_ear_decomposition(&k33).unwrap();
        assert_eq!(d.ears.len(), 4);

        let b1 = Graph::cycle_with_chords(6, &[(1, 4)]);
        let d = bipartite_ear_decomposition(&b1).unwrap();
        assert_eq!(d.ears.len(), 2);

        // Every prefix is matching covered with a matchable complement.
        let g = &k33;
        let mut emask: u128 = 1;
        let mut vmask: u128 = (1 << d.base_edge.0) | (1 << d.base_edge.1);
        let d = bipartite_ear_decomposition(g).unwrap();
        for ear in &d.ears {
            for w in ear.windows(2) {
                emask |= 1u128 << g.edge_index(w[0].min(w[1]), w[0].max(w[1])).unwrap();
            }
            for &v in ear {
                vmask |= 1 << v;
            }
            let (sub, _) = g.spanned(emask);
            assert!(is_matching_covered(&sub));
            assert!(is_matchable_within(g, g.vertices_mask() & !vmask));
        }
        assert_eq!(emask, g.edges_mask(), "ears exhaust the graph");

        // Errors.
        assert!(matches!(
            bipartite_ear_decomposition(&Graph::complete(4)),
            Err(Error::NotBipartite)
        ));
        assert!(matches!(
            bipartite_ear_decomposition(&Graph::path(4)),
            Err(Error::NotMatchingCovered)
        ));
    }
}
