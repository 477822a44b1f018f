use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{AncestorRule, Big, MotifEntry};
use crate::error::{BigsError, Result};
use crate::graph::{Graph, NodeId};

/// Network structure of a grid population: above-threshold grids form
/// networks through contiguity; below-threshold grids bordering a network
/// are its edge grids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AcsStructure {
    above: Vec<bool>,
    network_of: Vec<Option<usize>>,
    networks: Vec<Vec<NodeId>>,
    borders: Vec<Vec<usize>>,
}

impl AcsStructure {
    fn new(grid: &Graph, above: Vec<bool>) -> AcsStructure {
        let n = grid.node_count();
        let mut network_of = vec![None; n];
        let mut networks = Vec::new();
        for start in 0..n {
            if !above[start] || network_of[start].is_some() {
                continue;
            }
            let id = networks.len();
            let mut members = vec![start];
            network_of[start] = Some(id);
            let mut next = 0;
            while next < members.len() {
                let v = members[next];
                next += 1;
                for &w in grid.neighbors(v) {
                    if above[w] && network_of[w].is_none() {
                        network_of[w] = Some(id);
                        members.push(w);
                    }
                }
            }
            members.sort_unstable();
            networks.push(members);
        }
        let borders = (0..n)
            .map(|v| {
                if above[v] {
                    return Vec::new();
                }
                let mut ids: Vec<usize> = grid.neighbors(v).iter().filter_map(|&w| network_of[w]).collect();
                ids.sort_unstable();
                ids.dedup();
                ids
            })
            .collect();
        AcsStructure {
            above,
            network_of,
            networks,
            borders,
        }
    }

    pub fn is_above(&self, grid: NodeId) -> bool {
        self.above[grid]
    }

    /// Below-threshold grid adjacent to at least one network.
    pub fn is_edge_grid(&self, grid: NodeId) -> bool {
        !self.borders[grid].is_empty()
    }

    pub fn network_of(&self, grid: NodeId) -> Option<usize> {
        self.network_of[grid]
    }

    pub fn networks(&self) -> &[Vec<NodeId>] {
        &self.networks
    }

    /// Networks an edge grid borders (empty for other grids).
    pub fn borders(&self, grid: NodeId) -> &[usize] {
        &self.borders[grid]
    }

    /// Units whose selection makes `grid` eligible for the modified HT
    /// estimator: an edge grid only through its own selection, a network
    /// grid through any grid of its network.
    pub fn eligibility_set(&self, grid: NodeId) -> Vec<NodeId> {
        match self.network_of[grid] {
            Some(net) => self.networks[net].clone(),
            None => vec![grid],
        }
    }
}

/// Grid contiguity graph, grid values and the expansion threshold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcsPopulation {
    grid: Graph,
    y: Vec<BigRational>,
    threshold: BigRational,
    structure: AcsStructure,
}

impl AcsPopulation {
    /// A grid is above threshold when its value strictly exceeds it.
    pub fn new(grid: Graph, y: Vec<BigRational>, threshold: BigRational) -> Result<AcsPopulation> {
        if y.len() != grid.node_count() {
            return Err(BigsError::InvalidArgument(format!(
                "{} grids but {} values",
                grid.node_count(),
                y.len()
            )));
        }
        let above = y.iter().map(|v| *v > threshold).collect();
        let structure = AcsStructure::new(&grid, above);
        Ok(AcsPopulation {
            grid,
            y,
            threshold,
            structure,
        })
    }

    pub fn grid(&self) -> &Graph {
        &self.grid
    }

    pub fn y(&self) -> &[BigRational] {
        &self.y
    }

    pub fn threshold(&self) -> &BigRational {
        &self.threshold
    }

    pub fn structure(&self) -> &AcsStructure {
        &self.structure
    }

    pub fn is_above(&self, grid: NodeId) -> bool {
        self.structure.is_above(grid)
    }
}

/// BIG of adaptive cluster sampling with `F = Ω =` grids.
pub fn build_big_acs(pop: &AcsPopulation, rule: AncestorRule) -> Result<Big> {
    if !rule.is_acs() {
        return Err(BigsError::InvalidArgument(format!(
            "rule `{rule}` does not apply to adaptive cluster sampling"
        )));
    }
    let s = &pop.structure;
    let grid = &pop.grid;
    let mut edges = Vec::new();
    for k in 0..grid.node_count() {
        let neighbours: Vec<NodeId> = s.borders[k]
            .iter()
            .flat_map(|&net| s.networks[net].iter().copied())
            .collect();
        let ancestors: Vec<NodeId> = if let Some(net) = s.network_of[k] {
            s.networks[net].clone()
        } else if neighbours.is_empty() {
            vec![k]
        } else {
            match rule {
                AncestorRule::AcsB => {
                    let mut set = neighbours;
                    set.push(k);
                    set
                }
                AncestorRule::AcsBStar => vec![k],
                _ => {
                    if s.borders[k].len() > 1 {
                        return Err(BigsError::AmbiguousEdgeGrid {
                            grid: grid.label(k).to_string(),
                            networks: s.borders[k].len(),
                        });
                    }
                    neighbours
                }
            }
        };
        edges.extend(ancestors.into_iter().map(|i| (i, k)));
    }
    let motifs = (0..grid.node_count())
        .map(|k| MotifEntry {
            id: grid.label(k).to_string(),
            y: pop.y[k].clone(),
            members: Vec::new(),
        })
        .collect();
    let mut big = Big::new(grid.labels().to_vec(), motifs, &edges, rule, None)?;
    big.acs = Some(s.clone());
    Ok(big)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::big::{check_feasibility, ObservationProcedure};
    use crate::design::Design;
    use crate::rational::int;

    fn thompson() -> AcsPopulation {
        let grid = Graph::with_labels(
            ["1", "0", "2", "10", "1000"].map(String::from).to_vec(),
            &[(0, 1), (1, 2), (2, 3), (3, 4)],
            false,
        )
        .unwrap();
        AcsPopulation::new(grid, [1, 0, 2, 10, 1000].map(int).to_vec(), int(5)).unwrap()
    }

    fn labelled_edges(b: &Big) -> Vec<(String, String)> {
        b.edges()
            .into_iter()
            .map(|(i, k)| (b.frame()[i].clone(), b.motif_label(k).to_string()))
            .collect()
    }

    fn pairs(list: &[(&str, &str)]) -> Vec<(String, String)> {
        let mut v: Vec<_> = list.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        v.sort();
        v
    }

    #[test]
    fn three_strategies() {
        let pop = thompson();
        assert_eq!(pop.structure().networks(), &[vec![3, 4]]);
        assert!(pop.structure().is_edge_grid(2));

        let mut star = labelled_edges(&build_big_acs(&pop, AncestorRule::AcsBStar).unwrap());
        star.sort();
        assert_eq!(
            star,
            pairs(&[("1", "1"), ("0", "0"), ("2", "2"), ("10", "10"), ("10", "1000"), ("1000", "10"), ("1000", "1000")])
        );

        let dagger = build_big_acs(&pop, AncestorRule::AcsBDagger).unwrap();
        assert_eq!(dagger.beta(2), &[3, 4]);
        assert!(!dagger.has_edge(2, 2));

        let b = build_big_acs(&pop, AncestorRule::AcsB).unwrap();
        assert_eq!(b.beta(2), &[2, 3, 4]);
        assert_eq!(b.edge_count(), 9);
        assert!(build_big_acs(&pop, AncestorRule::MotifOnly).is_err());
    }

    #[test]
    fn ancestral_strategies() {
        let pop = thompson();
        let design = Design::srswor(5, 2).unwrap();
        let op = Some(ObservationProcedure::Acs(&pop));
        let star = build_big_acs(&pop, AncestorRule::AcsBStar).unwrap();
        assert!(check_feasibility(&star, op, &design).is_feasible());
        let dagger = build_big_acs(&pop, AncestorRule::AcsBDagger).unwrap();
        assert!(check_feasibility(&dagger, op, &design).is_feasible());
        let b = build_big_acs(&pop, AncestorRule::AcsB).unwrap();
        let report = check_feasibility(&b, op, &design);
        assert!(!report.is_feasible());
        assert!(report.violations.iter().all(|v| matches!(
            v,
            crate::big::Violation::AncestorsUnobserved { unit, .. } if unit == "2"
        )));
    }

    #[test]
    fn edge_grid_between_two_networks() {
        let grid = Graph::from_edges(3, &[(0, 1), (1, 2)], false).unwrap();
        let pop = AcsPopulation::new(grid, [9, 0, 9].map(int).to_vec(), int(5)).unwrap();
        assert!(matches!(
            build_big_acs(&pop, AncestorRule::AcsBDagger),
            Err(BigsError::AmbiguousEdgeGrid { networks: 2, .. })
        ));
        let b = build_big_acs(&pop, AncestorRule::AcsB).unwrap();
        assert_eq!(b.beta(1), &[0, 1, 2]);
    }
}
