use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::big::{AcsPopulation, Big};
use crate::graph::{Graph, NodeId};

/// Which node pairs have known adjacency status.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReferenceSet {
    /// `s_ref = S × U ∪ U × S` for the flagged surveyed nodes `S`.
    Incident(Vec<bool>),
    /// `s_ref = s × s` for the flagged sampled nodes `s`.
    Induced(Vec<bool>),
}

impl ReferenceSet {
    pub fn contains(&self, a: NodeId, b: NodeId) -> bool {
        match self {
            ReferenceSet::Incident(surveyed) => surveyed[a] || surveyed[b],
            ReferenceSet::Induced(inside) => inside[a] && inside[b],
        }
    }
}

/// Observed sample graph `G_s = (U_s, A_s)` with its reference set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleGraph {
    nodes: Vec<NodeId>,
    edges: Vec<(NodeId, NodeId)>,
    reference: ReferenceSet,
    wave: Vec<Option<u32>>,
}

impl SampleGraph {
    fn assemble(g: &Graph, reference: ReferenceSet, wave: Vec<Option<u32>>) -> SampleGraph {
        let nodes = (0..g.node_count()).filter(|&v| wave[v].is_some()).collect();
        let edges = g
            .edges()
            .iter()
            .copied()
            .filter(|&(a, b)| reference.contains(a, b))
            .collect();
        SampleGraph {
            nodes,
            edges,
            reference,
            wave,
        }
    }

    /// `U_s`, sorted.
    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    /// `A_s`, in the graph's edge order.
    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn reference(&self) -> &ReferenceSet {
        &self.reference
    }

    pub fn contains_node(&self, v: NodeId) -> bool {
        self.wave[v].is_some()
    }

    /// Stage at which `v` entered the sample (0 for seeds).
    pub fn wave(&self, v: NodeId) -> Option<u32> {
        self.wave[v]
    }

    /// A motif is observed when every pair of distinct members is in
    /// `s_ref`; a single-node motif when its node is in `U_s`.
    pub fn observes(&self, members: &[NodeId]) -> bool {
        match members {
            [] => false,
            [v] => self.contains_node(*v),
            _ => members.iter().enumerate().all(|(x, &a)| {
                members[x + 1..]
                    .iter()
                    .all(|&b| self.reference.contains(a, b))
            }),
        }
    }
}

/// `T`-stage snowball sampling with incident reciprocal observation.
/// Each stage surveys the current seeds and makes newly reached nodes the
/// next seeds.
pub fn snowball_sample(g: &Graph, s0: &[NodeId], stages: u32) -> SampleGraph {
    let n = g.node_count();
    let mut wave = vec![None; n];
    let mut surveyed = vec![false; n];
    let mut frontier = Vec::new();
    for &v in s0 {
        if wave[v].is_none() {
            wave[v] = Some(0);
            frontier.push(v);
        }
    }
    for t in 1..=stages {
        let mut next = Vec::new();
        for &v in &frontier {
            surveyed[v] = true;
            for &w in g.neighbors(v) {
                if wave[w].is_none() {
                    wave[w] = Some(t);
                    next.push(w);
                }
            }
        }
        if next.is_empty() && frontier.is_empty() {
            break;
        }
        frontier = next;
    }
    SampleGraph::assemble(g, ReferenceSet::Incident(surveyed), wave)
}

/// Induced observation: `s_ref = s × s`.
pub fn induced_sample(g: &Graph, s: &[NodeId]) -> SampleGraph {
    let n = g.node_count();
    let mut inside = vec![false; n];
    let mut wave = vec![None; n];
    for &v in s {
        inside[v] = true;
        wave[v] = Some(0);
    }
    SampleGraph::assemble(g, ReferenceSet::Induced(inside), wave)
}

/// How a grid entered an adaptive cluster sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AcsEntry {
    /// Selected in the initial sample.
    Selected,
    /// Reached by adaptive expansion only.
    Adaptive,
}

/// Grids observed by adaptive cluster sampling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcsObservation {
    /// Sorted observed grids with their entry flags.
    pub observed: Vec<(NodeId, AcsEntry)>,
}

impl AcsObservation {
    pub fn grids(&self) -> Vec<NodeId> {
        self.observed.iter().map(|&(g, _)| g).collect()
    }

    pub fn entry(&self, grid: NodeId) -> Option<AcsEntry> {
        self.observed
            .binary_search_by_key(&grid, |&(g, _)| g)
            .ok()
            .map(|pos| self.observed[pos].1)
    }

    pub fn selected(&self) -> Vec<NodeId> {
        self.observed
            .iter()
            .filter(|(_, e)| *e == AcsEntry::Selected)
            .map(|&(g, _)| g)
            .collect()
    }
}

/// Adaptive cluster sampling: every above-threshold grid that is observed
/// has all its neighbours surveyed, until no such grid is left unexpanded.
pub fn acs_sample(pop: &AcsPopulation, s0: &[NodeId]) -> AcsObservation {
    let grid = pop.grid();
    let mut seen = vec![false; grid.node_count()];
    let mut queue = VecDeque::new();
    for &i in s0 {
        if !seen[i] {
            seen[i] = true;
            queue.push_back(i);
        }
    }
    while let Some(v) = queue.pop_front() {
        if !pop.is_above(v) {
            continue;
        }
        for &w in grid.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    let selected: BTreeSet<NodeId> = s0.iter().copied().collect();
    let observed = (0..grid.node_count())
        .filter(|&v| seen[v])
        .map(|v| {
            let entry = if selected.contains(&v) {
                AcsEntry::Selected
            } else {
                AcsEntry::Adaptive
            };
            (v, entry)
        })
        .collect();
    AcsObservation { observed }
}

/// Sample BIG realized from an initial sample.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleBig {
    pub s0: Vec<usize>,
    /// `Ω_s = α(s0)`, sorted motif indices.
    pub omega_s: Vec<usize>,
    /// `H_s = H ∩ (s0 × Ω_s)`.
    pub h_s: Vec<(usize, usize)>,
    /// `β(Ω_s) \ s0`.
    pub out_ancestors: Vec<usize>,
}

pub fn realize_sample_big(b: &Big, s0: &[usize]) -> SampleBig {
    let s0: Vec<usize> = s0.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let mut omega = BTreeSet::new();
    let mut h_s = Vec::new();
    for &i in &s0 {
        for &k in b.alpha(i) {
            omega.insert(k);
            h_s.push((i, k));
        }
    }
    let out_ancestors: BTreeSet<usize> = omega
        .iter()
        .flat_map(|&k| b.beta(k).iter().copied())
        .filter(|i| s0.binary_search(i).is_err())
        .collect();
    SampleBig {
        s0,
        omega_s: omega.into_iter().collect(),
        h_s,
        out_ancestors: out_ancestors.into_iter().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn path3() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2)], false).unwrap()
    }

    #[test]
    fn zero_stages_is_initial_sample() {
        let s = snowball_sample(&path3(), &[1], 0);
        assert_eq!(s.nodes(), &[1]);
        assert!(s.edges().is_empty());
        assert!(!s.reference().contains(0, 1));
    }

    #[test]
    fn component_needs_second_stage() {
        let g = path3();
        let one = snowball_sample(&g, &[1], 1);
        assert_eq!(one.nodes(), &[0, 1, 2]);
        assert_eq!(one.edges().len(), 2);
        assert!(!one.observes(&[0, 1, 2]));
        let two = snowball_sample(&g, &[1], 2);
        assert!(two.observes(&[0, 1, 2]));
        assert_eq!(two.wave(0), Some(1));
        assert_eq!(two.wave(1), Some(0));
    }

    #[test]
    fn induced_observation() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)], false).unwrap();
        let s = induced_sample(&g, &[0, 1]);
        assert_eq!(s.edges(), &[(0, 1)]);
        assert!(!s.observes(&[0, 1, 2]));
        let all = induced_sample(&g, &[0, 1, 2]);
        assert_eq!(all.edges().len(), 3);
        assert!(all.observes(&[0, 1, 2]));
        let none = induced_sample(&g, &[]);
        assert!(none.nodes().is_empty() && none.edges().is_empty());
    }

    fn thompson() -> AcsPopulation {
        let grid = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)], false).unwrap();
        AcsPopulation::new(grid, [1, 0, 2, 10, 1000].map(int).to_vec(), int(5)).unwrap()
    }

    #[test]
    fn acs_expansion() {
        let pop = thompson();
        assert_eq!(acs_sample(&pop, &[1, 2]).grids(), vec![1, 2]);
        let obs = acs_sample(&pop, &[2, 3]);
        assert_eq!(obs.grids(), vec![2, 3, 4]);
        assert_eq!(obs.entry(4), Some(AcsEntry::Adaptive));
        assert_eq!(obs.entry(2), Some(AcsEntry::Selected));
        let obs = acs_sample(&pop, &[3, 4]);
        assert_eq!(obs.grids(), vec![2, 3, 4]);
        assert_eq!(obs.entry(2), Some(AcsEntry::Adaptive));
        assert_eq!(acs_sample(&pop, &[0, 1]).grids(), vec![0, 1]);
    }
}
