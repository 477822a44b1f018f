//! Motifs of interest: classes, enumeration and per-motif structure.

mod distance;

pub use distance::{
    ancestor_neighborhood, motif_diameter, observation_diameter, observation_distance,
    observation_distance_external, observation_distance_internal, MotifGeometry,
};

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{BigsError, Result};
use crate::graph::{Graph, NodeId};

/// Motif classes. Fixed classes are matched as induced subgraphs; `Component`
/// matches whole connected components up to the given order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MotifClass {
    K1,
    K2,
    S2,
    K3,
    K4,
    C4,
    S3,
    P3,
    Component(usize),
}

impl MotifClass {
    /// The eight fixed classes, in the usual reporting order.
    pub const FIXED: [MotifClass; 8] = [
        MotifClass::K1,
        MotifClass::K2,
        MotifClass::S2,
        MotifClass::K3,
        MotifClass::K4,
        MotifClass::C4,
        MotifClass::S3,
        MotifClass::P3,
    ];

    pub fn order(self) -> Option<usize> {
        Some(match self {
            MotifClass::K1 => 1,
            MotifClass::K2 => 2,
            MotifClass::S2 | MotifClass::K3 => 3,
            MotifClass::K4 | MotifClass::C4 | MotifClass::S3 | MotifClass::P3 => 4,
            MotifClass::Component(_) => return None,
        })
    }

    /// Edges of the class pattern on nodes `0..order`.
    pub fn pattern(self) -> &'static [(usize, usize)] {
        match self {
            MotifClass::K1 | MotifClass::Component(_) => &[],
            MotifClass::K2 => &[(0, 1)],
            MotifClass::S2 => &[(0, 1), (1, 2)],
            MotifClass::K3 => &[(0, 1), (1, 2), (0, 2)],
            MotifClass::K4 => &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
            MotifClass::C4 => &[(0, 1), (1, 2), (2, 3), (0, 3)],
            MotifClass::S3 => &[(0, 1), (0, 2), (0, 3)],
            MotifClass::P3 => &[(0, 1), (1, 2), (2, 3)],
        }
    }

    /// The class pattern as a stand-alone graph.
    pub fn isolated_embedding(self) -> Graph {
        let order = self.order().unwrap_or(1);
        Graph::from_edges(order, self.pattern(), false).expect("valid pattern")
    }

    /// Sorted degree sequence; on at most four nodes this identifies the
    /// isomorphism class of a connected graph.
    fn signature(self) -> Vec<usize> {
        let order = self.order().unwrap_or(0);
        let mut deg = vec![0; order];
        for &(a, b) in self.pattern() {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg.sort_unstable();
        deg
    }

    /// Fixed class of the subgraph induced by `members`, if any.
    pub fn classify(g: &Graph, members: &[NodeId]) -> Option<MotifClass> {
        let mut deg: Vec<usize> = members
            .iter()
            .map(|&a| members.iter().filter(|&&b| g.adjacent(a, b)).count())
            .collect();
        deg.sort_unstable();
        if members.len() > 1 && !g.induces_connected(members) {
            return None;
        }
        MotifClass::FIXED
            .into_iter()
            .find(|c| c.order() == Some(members.len()) && c.signature() == deg)
    }

    /// Induced-subgraph test for fixed classes, size-and-component test for
    /// `Component`.
    pub fn matches(self, g: &Graph, members: &[NodeId]) -> bool {
        match self {
            MotifClass::Component(max) => {
                members.len() <= max
                    && g.induces_connected(members)
                    && members
                        .iter()
                        .all(|&v| g.neighbors(v).iter().all(|w| members.contains(w)))
            }
            fixed => MotifClass::classify(g, members) == Some(fixed),
        }
    }
}

impl fmt::Display for MotifClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MotifClass::K1 => f.write_str("k1"),
            MotifClass::K2 => f.write_str("k2"),
            MotifClass::S2 => f.write_str("s2"),
            MotifClass::K3 => f.write_str("k3"),
            MotifClass::K4 => f.write_str("k4"),
            MotifClass::C4 => f.write_str("c4"),
            MotifClass::S3 => f.write_str("s3"),
            MotifClass::P3 => f.write_str("p3"),
            MotifClass::Component(max) => write!(f, "component:{max}"),
        }
    }
}

impl FromStr for MotifClass {
    type Err = BigsError;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        if let Some(max) = lower.strip_prefix("component:") {
            let max: usize = max.parse().map_err(|_| {
                BigsError::InvalidArgument(format!("bad component order in `{s}`"))
            })?;
            if max == 0 {
                return Err(BigsError::InvalidArgument(
                    "component order must be at least 1".into(),
                ));
            }
            return Ok(MotifClass::Component(max));
        }
        MotifClass::FIXED
            .into_iter()
            .find(|c| c.to_string() == lower)
            .ok_or_else(|| {
                BigsError::InvalidArgument(format!(
                    "unknown motif class `{s}` (expected k1,k2,s2,k3,k4,c4,s3,p3,component:<n>)"
                ))
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Motif {
    pub id: usize,
    /// Sorted node indices `M_k`.
    pub members: Vec<NodeId>,
    pub class: MotifClass,
}

impl Motif {
    pub fn order(&self) -> usize {
        self.members.len()
    }

    /// Member labels joined by `-`, e.g. `3-8-21-22`.
    pub fn label(&self, g: &Graph) -> String {
        self.members
            .iter()
            .map(|&v| g.label(v))
            .collect::<Vec<_>>()
            .join("-")
    }
}

/// Motifs `Ω` with their values `y_k` (default 1, giving graph totals).
#[derive(Clone, Debug, PartialEq)]
pub struct MotifSet {
    pub motifs: Vec<Motif>,
    pub y: Vec<BigRational>,
}

impl MotifSet {
    pub fn new(motifs: Vec<Motif>) -> Self {
        let y = vec![BigRational::one(); motifs.len()];
        MotifSet { motifs, y }
    }

    pub fn with_values(motifs: Vec<Motif>, y: Vec<BigRational>) -> Result<Self> {
        if motifs.len() != y.len() {
            return Err(BigsError::InvalidArgument(format!(
                "{} motifs but {} values",
                motifs.len(),
                y.len()
            )));
        }
        Ok(MotifSet { motifs, y })
    }

    pub fn len(&self) -> usize {
        self.motifs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.motifs.is_empty()
    }

    /// `θ = Σ y_k`.
    pub fn total(&self) -> BigRational {
        crate::rational::sum(&self.y)
    }

    /// Concatenates motif sets, renumbering ids.
    pub fn union(sets: impl IntoIterator<Item = MotifSet>) -> MotifSet {
        let mut motifs = Vec::new();
        let mut y = Vec::new();
        for set in sets {
            for (mut m, v) in set.motifs.into_iter().zip(set.y) {
                m.id = motifs.len();
                motifs.push(m);
                y.push(v);
            }
        }
        MotifSet { motifs, y }
    }
}

/// All motifs of `class` in `g`, each node set listed once, in
/// lexicographic order of sorted members.
pub fn enumerate_motifs(g: &Graph, class: MotifClass) -> MotifSet {
    let mut sets: Vec<Vec<NodeId>> = match class {
        MotifClass::Component(max) => g
            .connected_components()
            .into_iter()
            .filter(|c| c.len() <= max)
            .collect(),
        MotifClass::K1 => (0..g.node_count()).map(|v| vec![v]).collect(),
        fixed => {
            let order = fixed.order().expect("fixed class");
            (0..g.node_count())
                .into_par_iter()
                .flat_map_iter(|root| {
                    let mut found = Vec::new();
                    connected_subsets_from(g, root, order, &mut |members| {
                        if MotifClass::classify(g, members) == Some(fixed) {
                            let mut m = members.to_vec();
                            m.sort_unstable();
                            found.push(m);
                        }
                    });
                    found
                })
                .collect()
        }
    };
    sets.sort();
    let motifs = sets
        .into_iter()
        .enumerate()
        .map(|(id, members)| Motif { id, members, class })
        .collect();
    MotifSet::new(motifs)
}

/// ESU enumeration of connected induced node sets of size `order` whose
/// smallest node is `root`; each set is visited exactly once.
fn connected_subsets_from(
    g: &Graph,
    root: NodeId,
    order: usize,
    visit: &mut dyn FnMut(&[NodeId]),
) {
    let extension: Vec<NodeId> = g.neighbors(root).iter().copied().filter(|&u| u > root).collect();
    let mut sub = vec![root];
    extend(g, root, order, &mut sub, extension, visit);
}

fn extend(
    g: &Graph,
    root: NodeId,
    order: usize,
    sub: &mut Vec<NodeId>,
    mut extension: Vec<NodeId>,
    visit: &mut dyn FnMut(&[NodeId]),
) {
    if sub.len() == order {
        visit(sub);
        return;
    }
    while let Some(w) = extension.pop() {
        let mut next = extension.clone();
        for &u in g.neighbors(w) {
            if u <= root || sub.contains(&u) || next.contains(&u) {
                continue;
            }
            // exclusive neighbourhood: not adjacent to the current subgraph
            if sub.iter().any(|&s| g.adjacent(s, u)) {
                continue;
            }
            next.push(u);
        }
        sub.push(w);
        extend(g, root, order, sub, next, visit);
        sub.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        for c in MotifClass::FIXED {
            assert_eq!(c.to_string().parse::<MotifClass>().unwrap(), c);
        }
        assert_eq!("component:4".parse::<MotifClass>().unwrap(), MotifClass::Component(4));
        assert_eq!("K3".parse::<MotifClass>().unwrap(), MotifClass::K3);
        assert!("k5".parse::<MotifClass>().is_err());
        assert!("component:0".parse::<MotifClass>().is_err());
    }

    #[test]
    fn triangle_and_path() {
        let tri = Graph::parse_edge_list("1 2\n2 3\n1 3\n", false).unwrap();
        let m = enumerate_motifs(&tri, MotifClass::K3);
        assert_eq!(m.len(), 1);
        assert_eq!(m.motifs[0].members, vec![0, 1, 2]);
        // induced matching: a triangle contains no S2
        assert_eq!(enumerate_motifs(&tri, MotifClass::S2).len(), 0);

        let path = Graph::parse_edge_list("1 2\n2 3\n", false).unwrap();
        assert_eq!(enumerate_motifs(&path, MotifClass::S2).len(), 1);
        let dyads = enumerate_motifs(&path, MotifClass::K2);
        let sets: Vec<_> = dyads.motifs.iter().map(|m| m.members.clone()).collect();
        assert_eq!(sets, vec![vec![0, 1], vec![1, 2]]);
    }

    #[test]
    fn isolated_embeddings_match_their_class() {
        for c in MotifClass::FIXED {
            let g = c.isolated_embedding();
            let found = enumerate_motifs(&g, c);
            assert_eq!(found.len(), 1, "{c}");
            for other in MotifClass::FIXED {
                if other != c {
                    let all: Vec<NodeId> = (0..g.node_count()).collect();
                    assert!(!other.matches(&g, &all), "{c} matched as {other}");
                }
            }
        }
    }

    #[test]
    fn components_up_to_order() {
        let g = Graph::parse_edge_list("a b\nb c\nd e\nf\ng h\nh i\ni j\nj k\n", false).unwrap();
        let m = enumerate_motifs(&g, MotifClass::Component(4));
        let sizes: Vec<usize> = m.motifs.iter().map(Motif::order).collect();
        assert_eq!(sizes, vec![3, 2, 1]);
        assert!(MotifClass::Component(4).matches(&g, &m.motifs[0].members));
        assert!(!MotifClass::Component(4).matches(&g, &[0, 1]));
    }

    #[test]
    fn default_values_give_graph_total() {
        let g = Graph::parse_edge_list("1 2\n2 3\n3 4\n", false).unwrap();
        let m = enumerate_motifs(&g, MotifClass::K2);
        assert_eq!(m.total(), BigRational::from_integer(3.into()));
    }
}
