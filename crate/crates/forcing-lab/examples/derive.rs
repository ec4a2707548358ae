//! One-off derivation driver: benchmarks, obstruction-antichain searches,
//! fundamental-family enumeration, and catalog regeneration.
//!
//! Run stages with `cargo run --release --example derive -- <stage>`.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use forcing_lab::canon::{adj_from_code64, canonical_code128, canonical_code64_from_adj, graph_from_code64};
use forcing_lab::cycles;
use forcing_lab::forcing;
use forcing_lab::graph::{isomorphic, Graph};
use forcing_lab::matching::{is_matchable, is_matching_covered};
use forcing_lab::minors;
use forcing_lab::verify::{exhaustive_code_levels, matching_covered_conformal_subgraphs};

const CAMP_DIR: &str = "/root/notes/campaign";

fn bits(mut mask: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

fn one_line(g: &Graph) -> String {
    let parts: Vec<String> = g.edges().iter().map(|&(u, v)| format!("{u}-{v}")).collect();
    parts.join(",")
}

fn gf_af(g: &Graph) -> (usize, usize) {
    let gf = forcing::global_forcing_number_value(g).expect("gf within caps");
    let af = forcing::max_anti_forcing_number_value(g).expect("af within caps");
    (gf, af)
}

fn memo_key(g: &Graph) -> u128 {
    ((g.n() as u128) << 120) | canonical_code128(g)
}

fn gf_af_memo(g: &Graph, memo: &mut HashMap<u128, (usize, usize)>) -> (usize, usize) {
    let key = memo_key(g);
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let v = gf_af(g);
    memo.insert(key, v);
    v
}

// ---------------------------------------------------------------------------
// Stage: pools — cache the filtered exhaustive pools to a text file.
// ---------------------------------------------------------------------------

fn pool_cache() -> PathBuf {
    PathBuf::from(CAMP_DIR).join("pool_cache.txt")
}

fn stage_pools() {
    fs::create_dir_all(CAMP_DIR).expect("create campaign dir");
    let t0 = Instant::now();
    let levels = exhaustive_code_levels(10);
    println!("levels ready in {:.1?}", t0.elapsed());
    let mut out = String::new();
    let mut counts: HashMap<(usize, &str), usize> = HashMap::new();
    for n in [4usize, 6, 8, 10] {
        let t1 = Instant::now();
        for &code in levels[n - 1].iter() {
            let g = graph_from_code64(code);
            if !is_matchable(&g) {
                continue;
            }
            let class = if g.bipartition().is_some() {
                if !is_matching_covered(&g) {
                    continue;
                }
                "bipmc"
            } else {
                if !cycles::is_bn_graph(&g).expect("matchable") {
                    continue;
                }
                if !is_matching_covered(&g) {
                    continue;
                }
                "nbmcbn"
            };
            writeln!(out, "{n} {code:016x} {class}").unwrap();
            *counts.entry((n, class)).or_default() += 1;
        }
        println!(
            "n={n}: bipmc {}, nbmcbn {} in {:.1?}",
            counts.get(&(n, "bipmc")).copied().unwrap_or(0),
            counts.get(&(n, "nbmcbn")).copied().unwrap_or(0),
            t1.elapsed()
        );
    }
    fs::write(pool_cache(), out).expect("write pool cache");
    println!("pool cache written to {}", pool_cache().display());
}

/// Load cached pools: ([n-bucket] bipartite MC, [n-bucket] nonbip MC BN),
/// buckets for n = 4, 6, 8, 10 sorted by (m, code).
fn load_pools() -> (Vec<Vec<Graph>>, Vec<Vec<Graph>>) {
    let text = fs::read_to_string(pool_cache())
        .expect("pool cache missing — run the `pools` stage first");
    let mut bip: Vec<Vec<(usize, u64)>> = vec![Vec::new(); 4];
    let mut nb: Vec<Vec<(usize, u64)>> = vec![Vec::new(); 4];
    for line in text.lines() {
        let mut it = line.split_whitespace();
        let n: usize = it.next().unwrap().parse().unwrap();
        let code = u64::from_str_radix(it.next().unwrap(), 16).unwrap();
        let class = it.next().unwrap();
        let g = graph_from_code64(code);
        let slot = (n - 4) / 2;
        match class {
            "bipmc" => bip[slot].push((g.m(), code)),
            "nbmcbn" => nb[slot].push((g.m(), code)),
            other => panic!("bad class {other}"),
        }
    }
    let decode = |mut v: Vec<(usize, u64)>| -> Vec<Graph> {
        v.sort_unstable();
        v.into_iter().map(|(_, c)| graph_from_code64(c)).collect()
    };
    (
        bip.into_iter().map(decode).collect(),
        nb.into_iter().map(decode).collect(),
    )
}

// ---------------------------------------------------------------------------
// Minimal-obstruction scan shared by both classes.
// ---------------------------------------------------------------------------

/// Scan buckets (increasing n, each sorted by m) for graphs with gf ≠ Af
/// that contain no earlier-found obstruction (or seed pattern) as a
/// conformal minor. Each survivor is additionally validated to have all
/// proper matching covered conformal subgraphs with gf = Af.
fn minimal_obstructions(buckets: &[Vec<Graph>], seed: &[Graph], label: &str) -> Vec<Graph> {
    let mut screen: Vec<Graph> = seed.to_vec();
    let mut found: Vec<Graph> = Vec::new();
    let mut memo: HashMap<u128, (usize, usize)> = HashMap::new();
    for bucket in buckets {
        let t0 = Instant::now();
        let mut bad = 0usize;
        for g in bucket {
            let (gf, af) = gf_af(g);
            if gf == af {
                continue;
            }
            bad += 1;
            let dominated = screen
                .iter()
                .any(|p| {
                    p.n() <= g.n()
                        && minors::find_conformal_minor(g, p)
                            .expect("minor search within budget")
                            .is_some()
                });
            if dominated {
                continue;
            }
            // Consistency: every proper MC conformal subgraph is balanced.
            for sub in matching_covered_conformal_subgraphs(g, 10_000_000).expect("cap") {
                if sub.edges == g.edges_mask() {
                    continue;
                }
                let (s, _) = g.spanned(sub.edges);
                if s.n() < 4 {
                    continue;
                }
                let (sgf, saf) = gf_af_memo(&s, &mut memo);
                assert_eq!(
                    sgf, saf,
                    "survivor has an unbalanced proper subgraph: {}",
                    one_line(g)
                );
            }
            println!(
                "  [{label}] minimal n={} m={} gf={gf} af={af}: {}",
                g.n(),
                g.m(),
                one_line(g)
            );
            screen.push(g.clone());
            found.push(g.clone());
        }
        if let Some(first) = bucket.first() {
            println!(
                "  [{label}] n={}: {} members, {bad} bad, {} minimal so far ({:.1?})",
                first.n(),
                bucket.len(),
                found.len(),
                t0.elapsed()
            );
        }
    }
    found
}

fn write_graphs(path: &str, graphs: &[Graph], values: bool) {
    let mut out = String::new();
    for g in graphs {
        if values {
            let (gf, af) = gf_af(g);
            writeln!(out, "# n={} m={} gf={gf} af={af}", g.n(), g.m()).unwrap();
        }
        writeln!(out, "{}", one_line(g)).unwrap();
    }
    let path = PathBuf::from(CAMP_DIR).join(path);
    fs::write(&path, out).expect("write stage output");
    println!("wrote {}", path.display());
}

fn read_graphs(path: &str) -> Vec<Graph> {
    let path = PathBuf::from(CAMP_DIR).join(path);
    let text = fs::read_to_string(&path)
        .unwrap_or_else(|_| panic!("{} missing — run earlier stages", path.display()));
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let edges: Vec<(usize, usize)> = l
                .split(',')
                .map(|e| {
                    let (u, v) = e.split_once('-').expect("edge");
                    (u.parse().unwrap(), v.parse().unwrap())
                })
                .collect();
            let n = edges.iter().map(|&(u, v)| u.max(v)).max().unwrap();
            Graph::from_edges(n, &edges).expect("valid graph")
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Stage: aclass — bipartite minimal obstructions for n ≤ 10.
// ---------------------------------------------------------------------------

fn theta333() -> Graph {
    Graph::from_edges(
        8,
        &[
            (1, 3),
            (3, 4),
            (4, 2),
            (1, 5),
            (5, 6),
            (6, 2),
            (1, 7),
            (7, 8),
            (8, 2),
        ],
    )
    .unwrap()
}

fn c10_other_chords() -> Graph {
    let mut edges: Vec<(usize, usize)> = (1..=10).map(|i| (i, i % 10 + 1)).collect();
    edges.push((1, 4));
    edges.push((6, 9));
    Graph::from_edges(10, &edges).unwrap()
}

fn stage_aclass() {
    let (bip, _) = load_pools();
    let found = minimal_obstructions(&bip, &[], "A");
    println!("bipartite antichain: {} members", found.len());
    assert_eq!(found.len(), 4, "expected exactly four bipartite obstructions");
    let vals: Vec<(usize, usize)> = found.iter().map(gf_af).collect();
    let hist = |want: (usize, usize)| vals.iter().filter(|&&v| v == want).count();
    assert_eq!(hist((2, 1)), 1);
    assert_eq!(hist((3, 2)), 2);
    assert_eq!(hist((4, 3)), 1);
    let a1 = &found[vals.iter().position(|&v| v == (2, 1)).unwrap()];
    assert!(isomorphic(a1, &theta333()).is_some(), "2/1 member is the theta graph");
    let a4 = &found[vals.iter().position(|&v| v == (4, 3)).unwrap()];
    assert!(
        isomorphic(a4, &Graph::complete_bipartite(3, 3)).is_some(),
        "4/3 member is K33"
    );
    let a3_target = c10_other_chords();
    let a3_hits = found
        .iter()
        .filter(|g| isomorphic(g, &a3_target).is_some())
        .count();
    assert_eq!(a3_hits, 1, "exactly one member is C10 + disjoint non-crossed non-parallel chords");
    write_graphs("aclass.txt", &found, true);
}

// ---------------------------------------------------------------------------
// Stage: dclass — nonbipartite (matching covered BN) minimal obstructions.
// ---------------------------------------------------------------------------

fn stage_dclass() {
    let (_, nb) = load_pools();
    let aseed = read_graphs("aclass.txt");
    let found = minimal_obstructions(&nb, &aseed, "D");
    println!("nonbipartite antichain (n ≤ 10): {} members", found.len());
    let member74 = Graph::from_edges(
        6,
        &[
            (1, 4),
            (1, 5),
            (1, 6),
            (2, 3),
            (2, 5),
            (2, 6),
            (3, 4),
            (3, 6),
            (4, 6),
            (5, 6),
        ],
    )
    .unwrap();
    assert!(
        found.iter().any(|g| isomorphic(g, &member74).is_some()),
        "the known 6-vertex obstruction must appear"
    );
    write_graphs("dclass10.txt", &found, true);
}

// ---------------------------------------------------------------------------
// Stage: scan — Hamiltonian cycle-plus-chords candidates at n = 12, 14.
// ---------------------------------------------------------------------------

/// Enumerate C_n plus 1..=max_chords chords up to isomorphism, keeping
/// matching covered BN graphs (both bipartite and nonbipartite classes).
fn hamiltonian_candidates(n: usize, max_chords: usize) -> Vec<Graph> {
    let cycle_edges: Vec<(usize, usize)> = (1..=n).map(|i| (i, i % n + 1)).collect();
    let chords: Vec<(usize, usize)> = (1..=n)
        .flat_map(|i| ((i + 2)..=n).map(move |j| (i, j)))
        .filter(|&(i, j)| !(j - i == 1 || (i == 1 && j == n)))
        .collect();
    let mut seen: HashSet<u128> = HashSet::new();
    let mut out: Vec<Graph> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    fn rec(
        n: usize,
        cycle_edges: &[(usize, usize)],
        chords: &[(usize, usize)],
        start: usize,
        left: usize,
        stack: &mut Vec<usize>,
        seen: &mut HashSet<u128>,
        out: &mut Vec<Graph>,
    ) {
        if !stack.is_empty() {
            let mut edges = cycle_edges.to_vec();
            edges.extend(stack.iter().map(|&i| chords[i]));
            let g = Graph::from_edges(n, &edges).expect("valid");
            if is_matching_covered(&g)
                && (g.bipartition().is_some() || cycles::is_bn_graph(&g).expect("matchable"))
                && seen.insert(canonical_code128(&g))
            {
                out.push(g);
            }
        }
        if left == 0 {
            return;
        }
        for i in start..chords.len() {
            stack.push(i);
            rec(n, cycle_edges, chords, i + 1, left - 1, stack, seen, out);
            stack.pop();
        }
    }
    rec(
        n,
        &cycle_edges,
        &chords,
        0,
        max_chords,
        &mut stack,
        &mut seen,
        &mut out,
    );
    out.sort_by_key(|g| (g.m(), canonical_code128(g)));
    out
}

fn stage_scan() {
    let aseed = read_graphs("aclass.txt");
    let dseed = read_graphs("dclass10.txt");
    let mut seed: Vec<Graph> = aseed;
    seed.extend(dseed);
    for n in [12usize, 14] {
        let t0 = Instant::now();
        let cands = hamiltonian_candidates(n, 4);
        println!(
            "n={n}: {} MC BN cycle+chord candidates in {:.1?}",
            cands.len(),
            t0.elapsed()
        );
        let found = minimal_obstructions(&[cands], &seed, &format!("scan{n}"));
        println!("n={n}: {} additional minimal obstructions", found.len());
        write_graphs(&format!("scan{n}.txt"), &found, true);
        seed.extend(found);
    }
}

// ---------------------------------------------------------------------------
// Stage: hclass — fundamental graphs of the balanced families.
// ---------------------------------------------------------------------------

/// Graph on the vertices of `g` outside `drop`, keeping surviving edges and
/// adding `extra`, relabeled 1..n' in ascending original order.
fn induced_plus(g: &Graph, drop: u128, extra: &[(usize, usize)]) -> Option<Graph> {
    let mut map = [0usize; 128];
    let mut next = 0usize;
    for v in 1..=g.n() {
        if drop & (1 << v) == 0 {
            next += 1;
            map[v] = next;
        }
    }
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for &(u, v) in g.edges() {
        if drop & ((1 << u) | (1 << v)) == 0 {
            edges.push((map[u], map[v]));
        }
    }
    for &(u, v) in extra {
        let (a, b) = (map[u], map[v]);
        edges.push((a.min(b), a.max(b)));
    }
    Graph::from_edges(next, &edges).ok()
}

/// Single inverse bisubdivision steps: contract a path u-a-b-v with a, b
/// adjacent of degree 2 into a new edge uv (u ≠ v, uv not already present).
fn de_bisubdivisions(g: &Graph) -> Vec<Graph> {
    let mut out = Vec::new();
    for &(a, b) in g.edges() {
        if g.degree(a) != 2 || g.degree(b) != 2 {
            continue;
        }
        let u = g.neighbors(a).find(|&x| x != b).expect("degree 2");
        let v = g.neighbors(b).find(|&x| x != a).expect("degree 2");
        if u == v || g.has_edge(u, v) {
            continue;
        }
        if let Some(h) = induced_plus(g, (1 << a) | (1 << b), &[(u, v)]) {
            out.push(h);
        }
    }
    out
}

/// Single inverse quadrilateral steps: collapse a gadget
/// u-w1-w2-w3-w4-v with chord w1w4, where w1, w4 have degree 3 and w2, w3
/// degree 2, back to the edge uv (u ≠ v, uv not already present).
fn de_quads(g: &Graph) -> Vec<Graph> {
    let mut out = Vec::new();
    for &(x, y) in g.edges() {
        if g.degree(x) != 3 || g.degree(y) != 3 {
            continue;
        }
        for (w1, w4) in [(x, y), (y, x)] {
            for w2 in g.neighbors(w1).filter(|&w| w != w4 && g.degree(w) == 2) {
                for w3 in g.neighbors(w4).filter(|&w| w != w1 && g.degree(w) == 2) {
                    if w2 == w3 || !g.has_edge(w2, w3) {
                        continue;
                    }
                    let u = g
                        .neighbors(w1)
                        .find(|&w| w != w2 && w != w4)
                        .expect("degree 3");
                    let v = g
                        .neighbors(w4)
                        .find(|&w| w != w3 && w != w1)
                        .expect("degree 3");
                    if u == v || g.has_edge(u, v) {
                        continue;
                    }
                    let drop = (1u128 << w1) | (1 << w2) | (1 << w3) | (1 << w4);
                    if let Some(h) = induced_plus(g, drop, &[(u, v)]) {
                        out.push(h);
                    }
                }
            }
        }
    }
    out
}

/// Whether `h` has the shape every family member must have: connected,
/// nonbipartite, matching covered, and free of disjoint odd cycles with a
/// matchable remainder.
fn family_shape(h: &Graph) -> bool {
    h.n() >= 4
        && h.components().len() == 1
        && h.bipartition().is_none()
        && is_matchable(h)
        && is_matching_covered(h)
        && cycles::is_bn_graph(h).expect("matchable")
}

/// Whether some single inverse step (path contraction or gadget collapse)
/// lands on a graph of family shape. Such a graph is never fundamental: if
/// it avoids the obstructions, so does the smaller graph (an inverse-step
/// image is a conformal minor), and if it does not, it is outside the
/// families entirely.
fn structurally_reducible(g: &Graph) -> bool {
    de_bisubdivisions(g)
        .into_iter()
        .chain(de_quads(g))
        .any(|h| family_shape(&h))
}

fn stage_hclass() {
    let (_, nb) = load_pools();
    let mut screen: Vec<Graph> = read_graphs("aclass.txt");
    screen.extend(read_graphs("dclass10.txt"));
    screen.extend(read_graphs("scan12.txt"));
    screen.extend(read_graphs("scan14.txt"));
    println!("screen: {} obstructions", screen.len());

    let mut buckets: Vec<Vec<Graph>> = nb;
    for n in [12usize, 14] {
        let t0 = Instant::now();
        let cands: Vec<Graph> = hamiltonian_candidates(n, 4)
            .into_iter()
            .filter(|g| g.bipartition().is_none())
            .collect();
        println!(
            "n={n}: {} nonbipartite cycle+chord candidates in {:.1?}",
            cands.len(),
            t0.elapsed()
        );
        buckets.push(cands);
    }

    let mut memo: HashMap<u128, (usize, usize)> = HashMap::new();
    let mut funds: Vec<Graph> = Vec::new();
    for bucket in &buckets {
        let t0 = Instant::now();
        let (mut irr, mut clean) = (0usize, 0usize);
        for g in bucket {
            if structurally_reducible(g) {
                continue;
            }
            irr += 1;
            let dirty = screen.iter().any(|p| {
                p.n() <= g.n()
                    && minors::find_conformal_minor(g, p)
                        .expect("minor search within budget")
                        .is_some()
            });
            if dirty {
                continue;
            }
            clean += 1;
            let (gf, af) = gf_af_memo(g, &mut memo);
            assert_eq!(
                gf,
                af,
                "irreducible obstruction-free graph must be balanced: {}",
                one_line(g)
            );
            println!("  fundamental n={} m={} gf={gf}: {}", g.n(), g.m(), one_line(g));
            funds.push(g.clone());
        }
        if let Some(first) = bucket.first() {
            println!(
                "  n={}: {} candidates, {irr} irreducible, {clean} fundamental ({:.1?})",
                first.n(),
                bucket.len(),
                t0.elapsed()
            );
        }
    }

    let mut hist: HashMap<usize, usize> = HashMap::new();
    for f in &funds {
        let (gf, _) = gf_af_memo(f, &mut memo);
        *hist.entry(gf).or_default() += 1;
    }
    let mut pairs: Vec<_> = hist.iter().map(|(&k, &v)| (k, v)).collect();
    pairs.sort_unstable();
    println!("fundamentals: {} with value histogram {:?}", funds.len(), pairs);
    assert_eq!(funds.len(), 26, "expected 26 fundamentals");
    assert_eq!(hist.get(&2), Some(&6), "six fundamentals of value 2");
    assert_eq!(hist.get(&3), Some(&13), "thirteen fundamentals of value 3");
    assert_eq!(hist.get(&4), Some(&7), "seven fundamentals of value 4");
    assert!(
        funds
            .iter()
            .any(|f| isomorphic(f, &Graph::complete(4)).is_some()),
        "the complete graph on four vertices must be fundamental"
    );
    write_graphs("hclass.txt", &funds, true);
}

// ---------------------------------------------------------------------------
// Stage: bench (kept for reference measurements).
// ---------------------------------------------------------------------------

fn stage_bench() {
    let t0 = Instant::now();
    let levels = exhaustive_code_levels(8);
    println!(
        "levels to n=8: {:?} in {:.2?}",
        levels.iter().map(|l| l.len()).collect::<Vec<_>>(),
        t0.elapsed()
    );

    let t1 = Instant::now();
    let levels = exhaustive_code_levels(9);
    println!(
        "level n=9: {} graphs in {:.2?} (incremental)",
        levels[8].len(),
        t1.elapsed()
    );

    // Sample-extend level 9 to estimate full n=10 generation cost.
    let parents = &levels[8];
    let sample = 2_000.min(parents.len());
    let step = parents.len() / sample;
    let t2 = Instant::now();
    let mut set = HashSet::new();
    for &code in parents.iter().step_by(step).take(sample) {
        let (pn, adj) = adj_from_code64(code);
        assert_eq!(pn, 9);
        for sub in 0u32..(1u32 << 9) {
            let mut a = adj;
            a[9] = sub as u16;
            for i in bits(u128::from(sub)) {
                a[i] |= 1 << 9;
            }
            set.insert(canonical_code64_from_adj(10, &a));
        }
    }
    let per = t2.elapsed().as_secs_f64() / (sample as f64 * 512.0);
    println!(
        "n=10 canonicalization: {:.2} us each; projected full level-10 extension {:.0} s",
        per * 1e6,
        per * parents.len() as f64 * 512.0
    );

    let codes: Vec<u64> = set.into_iter().take(20_000).collect();
    let t3 = Instant::now();
    let mut matchable = 0usize;
    let mut graphs = Vec::new();
    for &code in &codes {
        let g = graph_from_code64(code);
        if is_matchable(&g) {
            matchable += 1;
            graphs.push(g);
        }
    }
    println!(
        "decode+matchable on {} n=10 graphs: {:.2?} ({} matchable)",
        codes.len(),
        t3.elapsed(),
        matchable
    );
    let t4 = Instant::now();
    let mut bn = 0usize;
    for g in &graphs {
        if cycles::is_bn_graph(g).unwrap() {
            bn += 1;
        }
    }
    println!(
        "bn filter on {} matchable n=10 graphs: {:.2?} ({} BN, {:.1} us each)",
        graphs.len(),
        t4.elapsed(),
        bn,
        t4.elapsed().as_secs_f64() * 1e6 / graphs.len().max(1) as f64
    );
}

fn stage_census() {
    let t0 = Instant::now();
    let levels = exhaustive_code_levels(10);
    println!(
        "level n=10: {} graphs in {:.2?}",
        levels[9].len(),
        t0.elapsed()
    );

    let t1 = Instant::now();
    let mut matchable = 0usize;
    let mut bipartite = 0usize;
    let mut bn = 0usize;
    let mut bn_nonbip = 0usize;
    let mut mc_bn_nonbip = 0usize;
    for &code in levels[9].iter() {
        let g = graph_from_code64(code);
        if g.bipartition().is_some() {
            bipartite += 1;
        }
        if !is_matchable(&g) {
            continue;
        }
        matchable += 1;
        if cycles::is_bn_graph(&g).unwrap() {
            bn += 1;
            if g.bipartition().is_none() {
                bn_nonbip += 1;
                if is_matching_covered(&g) {
                    mc_bn_nonbip += 1;
                }
            }
        }
    }
    println!(
        "n=10: bipartite {bipartite}, matchable {matchable}, matchable+BN {bn} \
         (nonbipartite {bn_nonbip}, of which matching covered {mc_bn_nonbip}) in {:.2?}",
        t1.elapsed()
    );
}

fn main() {
    let stage = std::env::args().nth(1).unwrap_or_else(|| "bench".into());
    match stage.as_str() {
        "bench" => stage_bench(),
        "census" => stage_census(),
        "pools" => stage_pools(),
        "aclass" => stage_aclass(),
        "dclass" => stage_dclass(),
        "scan" => stage_scan(),
        "hclass" => stage_hclass(),
        "campaign" => {
            if !pool_cache().exists() {
                stage_pools();
            }
            stage_aclass();
            stage_dclass();
            stage_scan();
        }
        other => {
            eprintln!("unknown stage: {other}");
            std::process::exit(2);
        }
    }
}
