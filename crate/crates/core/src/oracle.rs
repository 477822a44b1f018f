//! Brute-force reference implementations and random instance generators
//! used to test the fast algorithms. Everything here favours obviousness
//! over speed.

use std::collections::{BTreeSet, HashSet};

use itertools::Itertools;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;

use crate::big::{AncestorRule, Big, MotifEntry};
use crate::design::{Design, DEFAULT_ENUMERATION_CAP};
use crate::graph::{Distance, Graph, NodeId};
use crate::motif::MotifClass;
use crate::rational::ratio;

/// Stages of snowball sampling from `{i}` until motif `members` is
/// observed, by literal simulation of the reference set as a set of
/// ordered pairs. Gives up (infinite) after `|U| + 1` stages.
pub fn simulated_observation_distance(g: &Graph, members: &[NodeId], i: NodeId) -> Distance {
    let n = g.node_count();
    let observed = |reached: &HashSet<NodeId>, s_ref: &HashSet<(NodeId, NodeId)>| {
        if members.len() == 1 {
            return reached.contains(&members[0]);
        }
        members
            .iter()
            .all(|&a| members.iter().all(|&b| a == b || s_ref.contains(&(a, b))))
    };
    let mut reached: HashSet<NodeId> = HashSet::from([i]);
    let mut seeds: Vec<NodeId> = vec![i];
    let mut s_ref: HashSet<(NodeId, NodeId)> = HashSet::new();
    if observed(&reached, &s_ref) {
        return Distance::Finite(0);
    }
    for t in 1..=(n as u32 + 1) {
        let mut next = Vec::new();
        for &s in &seeds {
            for v in 0..n {
                s_ref.insert((s, v));
                s_ref.insert((v, s));
                if g.adjacent(s, v) && reached.insert(v) {
                    next.push(v);
                }
            }
        }
        seeds = next;
        if observed(&reached, &s_ref) {
            return Distance::Finite(t);
        }
    }
    Distance::Infinite
}

/// Undirected geodesics as the shortest of all simple paths.
pub fn brute_geodesics(g: &Graph) -> Vec<Vec<Distance>> {
    let n = g.node_count();
    let mut best = vec![vec![Distance::Infinite; n]; n];
    fn walk(g: &Graph, path: &mut Vec<NodeId>, best: &mut [Vec<Distance>]) {
        let (start, last) = (path[0], *path.last().unwrap());
        let len = Distance::Finite(path.len() as u32 - 1);
        if len < best[start][last] {
            best[start][last] = len;
        }
        for v in 0..g.node_count() {
            if g.adjacent(last, v) && !path.contains(&v) {
                path.push(v);
                walk(g, path, best);
                path.pop();
            }
        }
    }
    for s in 0..n {
        walk(g, &mut vec![s], &mut best);
    }
    best
}

/// Node sets inducing a copy of `class`, by checking every node subset of
/// the right size against every relabelling of the pattern.
pub fn brute_motifs(g: &Graph, class: MotifClass) -> Vec<Vec<NodeId>> {
    let n = g.node_count();
    match class {
        MotifClass::Component(max) => {
            // Every connected subset closed under adjacency.
            let mut out = Vec::new();
            for size in 1..=max.min(n) {
                for subset in (0..n).combinations(size) {
                    let closed = subset
                        .iter()
                        .all(|&a| (0..n).all(|b| !g.adjacent(a, b) || subset.contains(&b)));
                    if closed && connected_by_search(g, &subset) {
                        out.push(subset);
                    }
                }
            }
            out.sort();
            out
        }
        fixed => {
            let order = fixed.order().unwrap();
            let pattern: BTreeSet<(usize, usize)> = fixed
                .pattern()
                .iter()
                .map(|&(a, b)| (a.min(b), a.max(b)))
                .collect();
            (0..n)
                .combinations(order)
                .filter(|subset| {
                    (0..order).permutations(order).any(|perm| {
                        (0..order).tuple_combinations().all(|(x, y)| {
                            let in_pattern = pattern.contains(&(perm[x].min(perm[y]), perm[x].max(perm[y])));
                            in_pattern == g.adjacent(subset[x], subset[y])
                        })
                    })
                })
                .collect()
        }
    }
}

fn connected_by_search(g: &Graph, members: &[NodeId]) -> bool {
    let mut seen = vec![members[0]];
    let mut stack = vec![members[0]];
    while let Some(v) = stack.pop() {
        for &w in members {
            if g.adjacent(v, w) && !seen.contains(&w) {
                seen.push(w);
                stack.push(w);
            }
        }
    }
    seen.len() == members.len()
}

/// `Pr(k ∈ Ω_s and l ∈ Ω_s)` by enumerating the design and taking unions
/// of successor sets directly.
pub fn exhaustive_joint_inclusion(b: &Big, d: &Design, k: usize, l: usize) -> BigRational {
    d.enumerate(DEFAULT_ENUMERATION_CAP)
        .expect("small design")
        .filter(|p| {
            let hit = |m: usize| p.sample.iter().any(|&i| b.alpha(i).contains(&m));
            hit(k) && hit(l)
        })
        .fold(BigRational::zero(), |acc, p| acc + p.probability)
}

/// Erdős–Rényi graph `G(n, p)` with labels `0..n`.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let edges: Vec<(usize, usize)> = (0..n)
        .tuple_combinations()
        .filter(|_| rng.gen_bool(p))
        .collect();
    Graph::from_edges(n, &edges, false).expect("simple graph")
}

/// Random BIG with `frame` units and `motifs` motifs; each motif gets a
/// nonempty random ancestor set and an integer value in `-3..=9`.
pub fn random_big<R: Rng>(rng: &mut R, frame: usize, motifs: usize) -> Big {
    let labels: Vec<String> = (0..frame).map(|i| format!("u{i}")).collect();
    let mut edges = Vec::new();
    let mut entries = Vec::new();
    for k in 0..motifs {
        let mut beta: BTreeSet<usize> = BTreeSet::from([rng.gen_range(0..frame)]);
        for i in 0..frame {
            if rng.gen_bool(0.3) {
                beta.insert(i);
            }
        }
        edges.extend(beta.into_iter().map(|i| (i, k)));
        entries.push(MotifEntry {
            id: format!("m{k}"),
            y: ratio(rng.gen_range(-3..=9), 1),
            members: Vec::new(),
        });
    }
    Big::new(labels, entries, &edges, AncestorRule::Explicit, None).expect("nonempty ancestor sets")
}

/// Graph with `n` nodes and exactly `m` edges, built from small dense
/// clusters joined by sparse links, so that cliques, cycles, stars and
/// paths all occur.
pub fn clustered_graph<R: Rng>(rng: &mut R, n: usize, m: usize, cluster: usize) -> Graph {
    let max = n * (n - 1) / 2;
    assert!(m <= max, "too many edges");
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    let same = |a: usize, b: usize| a / cluster == b / cluster;
    let pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
    while edges.len() < m {
        let (a, b) = pairs[rng.gen_range(0..pairs.len())];
        let p = if same(a, b) { 0.5 } else { 0.02 };
        if rng.gen_bool(p) {
            edges.insert((a, b));
        }
    }
    Graph::from_edges(n, &edges.into_iter().collect::<Vec<_>>(), false).expect("simple graph")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn oracle_sanity() {
        let path = Graph::from_edges(3, &[(0, 1), (1, 2)], false).unwrap();
        assert_eq!(simulated_observation_distance(&path, &[0, 1, 2], 1), Distance::Finite(2));
        assert_eq!(simulated_observation_distance(&path, &[2], 0), Distance::Finite(2));
        let geo = brute_geodesics(&path);
        assert_eq!(geo[0][2], Distance::Finite(2));
        assert_eq!(brute_motifs(&path, MotifClass::S2), vec![vec![0, 1, 2]]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = clustered_graph(&mut rng, 20, 30, 5);
        assert_eq!(g.edge_count(), 30);
        let b = random_big(&mut rng, 5, 4);
        assert_eq!(b.motif_count(), 4);
    }
}
