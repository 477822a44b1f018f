//! Diameters, observation distances and observation diameters of motifs
//! under snowball sampling with incident-reciprocal observation.
//!
//! A motif `k` counts as observed once every pair of distinct nodes in
//! `M_k x M_k` lies in the reference set, i.e. once at most one node of `M_k`
//! remains unsurveyed. A singleton motif is observed as soon as its node is
//! reached.

use crate::error::{BigsError, Result};
use crate::graph::{Distance, GeodesicMatrix, Graph, HypernodeGraph, NodeId};

/// `λ_k`: the largest geodesic length between two nodes of the motif.
pub fn motif_diameter(members: &[NodeId], geo: &GeodesicMatrix) -> Distance {
    members
        .iter()
        .flat_map(|&i| members.iter().map(move |&j| geo.get(i, j)))
        .max()
        .unwrap_or(Distance::ZERO)
}

/// `d_{i,k}` for `i ∈ M_k`.
pub fn observation_distance_internal(
    g: &Graph,
    members: &[NodeId],
    i: NodeId,
) -> Result<Distance> {
    if !members.contains(&i) {
        return Err(BigsError::InvalidArgument(format!(
            "node `{}` is not a member of the motif",
            g.label(i)
        )));
    }
    Ok(internal_from_row(g, members, &g.distances_from(&[i])))
}

/// `d_{i,k}` for `i ∉ M_k`, via the hypernode transform.
pub fn observation_distance_external(
    g: &Graph,
    members: &[NodeId],
    i: NodeId,
) -> Result<Distance> {
    if members.contains(&i) {
        return Err(BigsError::InvalidArgument(format!(
            "node `{}` is a member of the motif",
            g.label(i)
        )));
    }
    Ok(external_from_row(g, members, &g.distances_from(&[i])))
}

/// `d_{i,k}` for any node.
pub fn observation_distance(g: &Graph, members: &[NodeId], i: NodeId) -> Distance {
    let row = g.distances_from(&[i]);
    if members.contains(&i) {
        internal_from_row(g, members, &row)
    } else {
        external_from_row(g, members, &row)
    }
}

/// `φ_k = max_{i ∈ M_k} d_{i,k}`.
pub fn observation_diameter(g: &Graph, members: &[NodeId]) -> Distance {
    members
        .iter()
        .map(|&i| internal_from_row(g, members, &g.distances_from(&[i])))
        .max()
        .unwrap_or(Distance::ZERO)
}

/// `β^t(M_k)`: nodes outside the motif within `t` steps of some member.
pub fn ancestor_neighborhood(members: &[NodeId], geo: &GeodesicMatrix, t: u32) -> Vec<NodeId> {
    (0..geo.len())
        .filter(|v| !members.contains(v))
        .filter(|&v| members.iter().any(|&j| geo.get(v, j).within(t)))
        .collect()
}

/// Internal observation distance from the member whose distance row is `row`.
///
/// When `M_k` induces a connected subgraph the farthest level decides: `D`
/// stages if a single node sits at the maximum distance `D`, else `D + 1`.
/// With exactly one unreachable member, one stage beyond the farthest
/// reachable member. Two or more unreachable members make the motif
/// unobservable. Any other layout falls back to the reach profile.
fn internal_from_row(g: &Graph, members: &[NodeId], row: &[Distance]) -> Distance {
    if members.len() == 1 {
        return Distance::ZERO;
    }
    let unreachable = members.iter().filter(|&&j| !row[j].is_finite()).count();
    match unreachable {
        0 if g.induces_connected(members) => {
            let far = members.iter().map(|&j| row[j]).max().unwrap_or(Distance::ZERO);
            let ties = members.iter().filter(|&&j| row[j] == far).count();
            if ties == 1 {
                far
            } else {
                far.plus(1)
            }
        }
        0 => reach_profile(members, row),
        1 => members
            .iter()
            .map(|&j| row[j])
            .filter(|d| d.is_finite())
            .max()
            .unwrap_or(Distance::ZERO)
            .plus(1),
        _ => Distance::Infinite,
    }
}

/// One stage after all but one member have been reached, the general form
/// of the observation condition.
fn reach_profile(members: &[NodeId], row: &[Distance]) -> Distance {
    let mut d: Vec<Distance> = members.iter().map(|&j| row[j]).collect();
    d.sort_unstable_by(|a, b| b.cmp(a));
    d[1].plus(1)
}

/// External observation distance: the best over levels `h` of `h` stages to
/// reach the members within distance `h`, plus the internal observation
/// distance from those members merged into a hypernode (at least one stage).
fn external_from_row(g: &Graph, members: &[NodeId], row: &[Distance]) -> Distance {
    if members.iter().all(|&j| !row[j].is_finite()) {
        return Distance::Infinite;
    }
    if members.len() == 1 {
        return row[members[0]];
    }
    let mut levels: Vec<u32> = members.iter().filter_map(|&j| row[j].finite()).collect();
    levels.sort_unstable();
    levels.dedup();

    let mut best = Distance::Infinite;
    for h in levels {
        if Distance::Finite(h + 1) >= best {
            break;
        }
        let reached: Vec<NodeId> = members
            .iter()
            .copied()
            .filter(|&j| row[j].within(h))
            .collect();
        let merged = g
            .hypernode_transform(&reached)
            .expect("reached members are a nonempty subset of the graph");
        let rest: Vec<NodeId> = std::iter::once(HypernodeGraph::HYPERNODE)
            .chain(
                members
                    .iter()
                    .filter(|j| !reached.contains(j))
                    .map(|&j| merged.map(j)),
            )
            .collect();
        let t = &merged.transformed;
        let from_h = t.distances_from(&[HypernodeGraph::HYPERNODE]);
        let inner = internal_from_row(t, &rest, &from_h).max(Distance::Finite(1));
        best = best.min(inner.plus(h));
    }
    best
}

/// Cached undirected geodesics of one graph with the per-motif quantities
/// derived from them.
#[derive(Clone, Debug)]
pub struct MotifGeometry<'g> {
    graph: &'g Graph,
    geo: GeodesicMatrix,
}

impl<'g> MotifGeometry<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        MotifGeometry {
            graph,
            geo: graph.undirected_geodesics(),
        }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn geodesics(&self) -> &GeodesicMatrix {
        &self.geo
    }

    pub fn diameter(&self, members: &[NodeId]) -> Distance {
        motif_diameter(members, &self.geo)
    }

    pub fn distance(&self, members: &[NodeId], i: NodeId) -> Distance {
        let row = self.geo.row(i);
        if members.contains(&i) {
            internal_from_row(self.graph, members, row)
        } else {
            external_from_row(self.graph, members, row)
        }
    }

    pub fn observation_diameter(&self, members: &[NodeId]) -> Distance {
        members
            .iter()
            .map(|&i| internal_from_row(self.graph, members, self.geo.row(i)))
            .max()
            .unwrap_or(Distance::ZERO)
    }

    pub fn ancestor_neighborhood(&self, members: &[NodeId], t: u32) -> Vec<NodeId> {
        ancestor_neighborhood(members, &self.geo, t)
    }
}
