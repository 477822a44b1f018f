use std::collections::BTreeSet;

use bigs_core::graph::{Distance, Graph, HypernodeGraph};
use bigs_core::motif::{enumerate_motifs, observation_diameter, observation_distance, MotifClass};
use bigs_core::oracle::{brute_geodesics, brute_motifs, random_graph, simulated_observation_distance};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn graph(n: usize, p: f64, seed: u64) -> Graph {
    random_graph(&mut ChaCha8Rng::seed_from_u64(seed), n, p)
}

fn members_of(g: &Graph, seed: u64, size: usize) -> Vec<usize> {
    let mut nodes: Vec<usize> = (0..g.node_count()).collect();
    nodes.shuffle(&mut ChaCha8Rng::seed_from_u64(seed ^ 0x5eed));
    let mut m = nodes[..size.min(nodes.len())].to_vec();
    m.sort_unstable();
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn geodesics_match_all_simple_paths(n in 1usize..=8, p in 0.1f64..0.8, seed in any::<u64>()) {
        let g = graph(n, p, seed);
        let geo = g.geodesics();
        let brute = brute_geodesics(&g);
        for (i, row) in brute.iter().enumerate() {
            for (j, &d) in row.iter().enumerate() {
                prop_assert_eq!(geo.get(i, j), d);
            }
        }
    }

    #[test]
    fn hypernode_keeps_outside_edges(n in 2usize..=8, p in 0.1f64..0.8, size in 1usize..=4, seed in any::<u64>()) {
        let g = graph(n, p, seed);
        let members = members_of(&g, seed, size);
        let h = g.hypernode_transform(&members).unwrap();
        let inside = |v: usize| members.contains(&v);
        let outside_base: BTreeSet<(String, String)> = g
            .edges()
            .iter()
            .filter(|&&(a, b)| !inside(a) && !inside(b))
            .map(|&(a, b)| (g.label(a).to_string(), g.label(b).to_string()))
            .collect();
        let t = &h.transformed;
        let outside_new: BTreeSet<(String, String)> = t
            .edges()
            .iter()
            .filter(|&&(a, b)| a != HypernodeGraph::HYPERNODE && b != HypernodeGraph::HYPERNODE)
            .map(|&(a, b)| (t.label(a).to_string(), t.label(b).to_string()))
            .collect();
        prop_assert_eq!(outside_base, outside_new);
        for j in (0..n).filter(|&j| !inside(j)) {
            let links = t
                .edges()
                .iter()
                .filter(|&&e| e == (0, h.map(j)) || e == (h.map(j), 0))
                .count();
            let expected = members.iter().any(|&i| g.adjacent(i, j));
            prop_assert_eq!(links, usize::from(expected));
        }
    }

    #[test]
    fn hypernode_distance_is_min_over_members(n in 2usize..=8, p in 0.1f64..0.8, size in 1usize..=4, seed in any::<u64>()) {
        let g = graph(n, p, seed);
        let members = members_of(&g, seed, size);
        let h = g.hypernode_transform(&members).unwrap();
        let from_h = h.transformed.distances_from(&[HypernodeGraph::HYPERNODE]);
        let kept: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .copied()
            .filter(|&(a, b)| !(members.contains(&a) && members.contains(&b)))
            .collect();
        let stripped = Graph::from_edges(n, &kept, false).unwrap();
        let brute = brute_geodesics(&stripped);
        for j in (0..n).filter(|j| !members.contains(j)) {
            let best = members.iter().map(|&i| brute[i][j]).min().unwrap();
            prop_assert_eq!(from_h[h.map(j)], best);
        }
    }

    #[test]
    fn enumeration_matches_brute_force(n in 1usize..=8, p in 0.1f64..0.9, seed in any::<u64>()) {
        let g = graph(n, p, seed);
        for class in MotifClass::FIXED.into_iter().chain([MotifClass::Component(3)]) {
            let found: Vec<Vec<usize>> = enumerate_motifs(&g, class).motifs.into_iter().map(|m| m.members).collect();
            let mut sorted = found.clone();
            sorted.sort();
            sorted.dedup();
            prop_assert_eq!(sorted.len(), found.len());
            prop_assert_eq!(sorted, brute_motifs(&g, class));
        }
    }

    #[test]
    fn enumeration_is_closed_under_relabelling(n in 1usize..=8, p in 0.1f64..0.9, seed in any::<u64>()) {
        let g = graph(n, p, seed);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed.wrapping_add(1)));
        let edges: Vec<(usize, usize)> = g.edges().iter().map(|&(a, b)| (perm[a], perm[b])).collect();
        let relabelled = Graph::from_edges(n, &edges, false).unwrap();
        for class in MotifClass::FIXED {
            let mut mapped: Vec<Vec<usize>> = enumerate_motifs(&g, class)
                .motifs
                .into_iter()
                .map(|m| {
                    let mut v: Vec<usize> = m.members.iter().map(|&x| perm[x]).collect();
                    v.sort_unstable();
                    v
                })
                .collect();
            mapped.sort();
            let direct: Vec<Vec<usize>> = enumerate_motifs(&relabelled, class).motifs.into_iter().map(|m| m.members).collect();
            prop_assert_eq!(mapped, direct);
        }
    }

    #[test]
    fn observation_distance_matches_simulation(n in 1usize..=9, p in 0.1f64..0.7, size in 1usize..=4, seed in any::<u64>()) {
        let g = graph(n, p, seed);
        let members = members_of(&g, seed, size);
        for i in 0..n {
            prop_assert_eq!(
                observation_distance(&g, &members, i),
                simulated_observation_distance(&g, &members, i),
                "node {} motif {:?}", i, members
            );
        }
    }

    #[test]
    fn internal_distance_is_within_one_of_eccentricity(n in 2usize..=9, p in 0.2f64..0.8, seed in any::<u64>()) {
        let g = graph(n, p, seed);
        let geo = g.geodesics();
        for class in [MotifClass::K2, MotifClass::S2, MotifClass::K3, MotifClass::C4, MotifClass::P3] {
            for m in enumerate_motifs(&g, class).motifs {
                for &i in &m.members {
                    let ecc = m.members.iter().map(|&j| geo.get(i, j)).max().unwrap();
                    let d = observation_distance(&g, &m.members, i);
                    prop_assert!(ecc <= d && d <= ecc.plus(1));
                }
            }
        }
    }

    #[test]
    fn observation_diameter_finite_iff_reachable(n in 1usize..=8, p in 0.1f64..0.7, size in 1usize..=4, seed in any::<u64>()) {
        let g = graph(n, p, seed);
        let members = members_of(&g, seed, size);
        let finite = observation_diameter(&g, &members) != Distance::Infinite;
        // Two nodes are always observed once either is surveyed; larger
        // motifs need every member reachable from every other.
        let reach = g.distances_from(&[members[0]]);
        let expected = members.len() <= 2 || members.iter().all(|&j| reach[j].is_finite());
        prop_assert_eq!(finite, expected);
    }
}
