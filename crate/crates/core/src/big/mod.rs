//! Bipartite incidence graphs `B = (F ∪ Ω; H)` linking sampling units to
//! the motifs they lead to observe.

mod acs;
mod io;

pub use acs::{build_big_acs, AcsPopulation, AcsStructure};
pub use io::{load_big, parse_big, write_big};

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::design::{acs_sample, snowball_sample, Design};
use crate::error::{BigsError, Result};
use crate::graph::{Distance, Graph, NodeId};
use crate::motif::{MotifGeometry, MotifSet};

/// How ancestor sets `β_k` were derived.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AncestorRule {
    /// `β_k = {i : d_{i,k} ≤ T}`.
    Full(u32),
    /// `β_k = M_k`.
    MotifOnly,
    /// `β_k = M_k ∪ β^t(M_k)`, `t ≥ 1`.
    MotifPlus(u32),
    AcsB,
    AcsBStar,
    AcsBDagger,
    /// Edges supplied directly, e.g. from a BIG file.
    Explicit,
}

impl AncestorRule {
    pub fn motif_plus(t: u32) -> Result<AncestorRule> {
        if t == 0 {
            return Err(BigsError::InvalidArgument(
                "motif-plus needs t >= 1".into(),
            ));
        }
        Ok(AncestorRule::MotifPlus(t))
    }

    pub fn is_acs(self) -> bool {
        matches!(
            self,
            AncestorRule::AcsB | AncestorRule::AcsBStar | AncestorRule::AcsBDagger
        )
    }
}

impl fmt::Display for AncestorRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AncestorRule::Full(t) => write!(f, "full:{t}"),
            AncestorRule::MotifOnly => f.write_str("motif-only"),
            AncestorRule::MotifPlus(t) => write!(f, "motif-plus:{t}"),
            AncestorRule::AcsB => f.write_str("acs-b"),
            AncestorRule::AcsBStar => f.write_str("acs-bstar"),
            AncestorRule::AcsBDagger => f.write_str("acs-bdagger"),
            AncestorRule::Explicit => f.write_str("explicit"),
        }
    }
}

impl FromStr for AncestorRule {
    type Err = BigsError;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let (name, arg) = match lower.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (lower.as_str(), None),
        };
        let number = |what: &str| -> Result<u32> {
            arg.ok_or_else(|| BigsError::InvalidArgument(format!("rule `{name}` needs `{name}:<{what}>`")))?
                .parse()
                .map_err(|_| BigsError::InvalidArgument(format!("bad {what} in rule `{s}`")))
        };
        let rule = match name {
            "full" => AncestorRule::Full(number("T")?),
            "motif-only" | "motif" => AncestorRule::MotifOnly,
            "motif-plus" => AncestorRule::motif_plus(number("t")?)?,
            "acs-b" => AncestorRule::AcsB,
            "acs-bstar" => AncestorRule::AcsBStar,
            "acs-bdagger" => AncestorRule::AcsBDagger,
            "explicit" => AncestorRule::Explicit,
            _ => {
                return Err(BigsError::InvalidArgument(format!(
                    "unknown ancestor rule `{s}` (expected full:<T>, motif-only, motif-plus:<t>, \
                     acs-b, acs-bstar, acs-bdagger)"
                )))
            }
        };
        if arg.is_some() && !matches!(rule, AncestorRule::Full(_) | AncestorRule::MotifPlus(_)) {
            return Err(BigsError::InvalidArgument(format!("rule `{name}` takes no argument")));
        }
        Ok(rule)
    }
}

/// A motif row of a BIG: identifier, value and (optional) member labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MotifEntry {
    pub id: String,
    #[serde(with = "crate::rational::text")]
    pub y: BigRational,
    pub members: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Big {
    frame: Vec<String>,
    motifs: Vec<MotifEntry>,
    alpha: Vec<Vec<usize>>,
    beta: Vec<Vec<usize>>,
    rule: AncestorRule,
    stages_required: Option<u32>,
    acs: Option<AcsStructure>,
}

impl Big {
    /// Builds a BIG from frame labels, motif rows and `(i, k)` edges.
    /// Duplicate labels or edges are argument errors; a motif without
    /// ancestors is an infeasibility error.
    pub fn new(
        frame: Vec<String>,
        motifs: Vec<MotifEntry>,
        edges: &[(usize, usize)],
        rule: AncestorRule,
        stages_required: Option<u32>,
    ) -> Result<Big> {
        let mut labels = BTreeSet::new();
        if let Some(dup) = frame.iter().find(|l| !labels.insert(l.as_str())) {
            return Err(BigsError::InvalidArgument(format!("duplicate frame unit `{dup}`")));
        }
        let mut ids = BTreeSet::new();
        if let Some(dup) = motifs.iter().find(|m| !ids.insert(m.id.as_str())) {
            return Err(BigsError::InvalidArgument(format!("duplicate motif `{}`", dup.id)));
        }
        let mut alpha = vec![Vec::new(); frame.len()];
        let mut beta = vec![Vec::new(); motifs.len()];
        for &(i, k) in edges {
            if i >= frame.len() || k >= motifs.len() {
                return Err(BigsError::InvalidArgument(format!(
                    "edge ({i}, {k}) outside a BIG with {} units and {} motifs",
                    frame.len(),
                    motifs.len()
                )));
            }
            alpha[i].push(k);
            beta[k].push(i);
        }
        for (k, b) in beta.iter_mut().enumerate() {
            b.sort_unstable();
            if b.windows(2).any(|w| w[0] == w[1]) {
                return Err(BigsError::InvalidArgument(format!(
                    "duplicate edge into motif `{}`",
                    motifs[k].id
                )));
            }
            if b.is_empty() {
                return Err(BigsError::NoAncestors {
                    motif: motifs[k].id.clone(),
                    reason: "no frame unit leads to observing it".into(),
                });
            }
        }
        for a in &mut alpha {
            a.sort_unstable();
        }
        Ok(Big {
            frame,
            motifs,
            alpha,
            beta,
            rule,
            stages_required,
            acs: None,
        })
    }

    pub fn frame(&self) -> &[String] {
        &self.frame
    }

    pub fn frame_size(&self) -> usize {
        self.frame.len()
    }

    pub fn motifs(&self) -> &[MotifEntry] {
        &self.motifs
    }

    pub fn motif_count(&self) -> usize {
        self.motifs.len()
    }

    pub fn motif_label(&self, k: usize) -> &str {
        &self.motifs[k].id
    }

    pub fn frame_index(&self, label: &str) -> Option<usize> {
        self.frame.iter().position(|f| f == label)
    }

    pub fn motif_index(&self, id: &str) -> Option<usize> {
        self.motifs.iter().position(|m| m.id == id)
    }

    pub fn y(&self, k: usize) -> &BigRational {
        &self.motifs[k].y
    }

    /// `θ = Σ_k y_k`.
    pub fn total(&self) -> BigRational {
        self.motifs.iter().fold(BigRational::zero(), |acc, m| acc + &m.y)
    }

    /// `α_i`, sorted motif indices.
    pub fn alpha(&self, i: usize) -> &[usize] {
        &self.alpha[i]
    }

    /// `β_k`, sorted frame indices.
    pub fn beta(&self, k: usize) -> &[usize] {
        &self.beta[k]
    }

    pub fn has_edge(&self, i: usize, k: usize) -> bool {
        self.beta[k].binary_search(&i).is_ok()
    }

    /// All `(i, k)` edges ordered by unit then motif.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.alpha
            .iter()
            .enumerate()
            .flat_map(|(i, a)| a.iter().map(move |&k| (i, k)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.alpha.iter().map(Vec::len).sum()
    }

    pub fn rule(&self) -> AncestorRule {
        self.rule
    }

    pub fn stages_required(&self) -> Option<u32> {
        self.stages_required
    }

    /// ACS network structure for BIGs built by `build_big_acs`.
    pub fn acs(&self) -> Option<&AcsStructure> {
        self.acs.as_ref()
    }

    /// Resolves frame labels to indices.
    pub fn resolve_frame(&self, labels: &[impl AsRef<str>]) -> Result<Vec<usize>> {
        labels
            .iter()
            .map(|l| {
                self.frame_index(l.as_ref())
                    .ok_or_else(|| BigsError::UnknownNode(l.as_ref().to_string()))
            })
            .collect()
    }
}

/// Builds the BIG of `T`-stage snowball sampling from `g` for the given
/// motifs, with frame `F = U`.
pub fn build_big_tsbs(g: &Graph, motifs: &MotifSet, rule: AncestorRule) -> Result<Big> {
    let geometry = MotifGeometry::new(g);
    let entries: Vec<MotifEntry> = motifs
        .motifs
        .iter()
        .zip(&motifs.y)
        .map(|(m, y)| MotifEntry {
            id: format!("{}:{}", m.class, m.label(g)),
            y: y.clone(),
            members: m.members.iter().map(|&v| g.label(v).to_string()).collect(),
        })
        .collect();

    let shape: Vec<(Distance, Distance)> = motifs
        .motifs
        .par_iter()
        .map(|m| (geometry.observation_diameter(&m.members), geometry.diameter(&m.members)))
        .collect();
    if let Some(k) = shape.iter().position(|(phi, _)| !phi.is_finite()) {
        return Err(BigsError::InfiniteObservationDiameter {
            motif: entries[k].id.clone(),
        });
    }
    let phi = |k: usize| shape[k].0.finite().unwrap_or(0);
    let lambda = |k: usize| shape[k].1.finite();

    let (ancestors, stages): (Vec<Vec<NodeId>>, u32) = match rule {
        AncestorRule::Full(t) => {
            let sets = motifs
                .motifs
                .par_iter()
                .map(|m| {
                    (0..g.node_count())
                        .filter(|&i| geometry.distance(&m.members, i).within(t))
                        .collect()
                })
                .collect::<Vec<Vec<NodeId>>>();
            if let Some(k) = sets.iter().position(|s| s.is_empty()) {
                let nearest = (0..g.node_count())
                    .map(|i| geometry.distance(&motifs.motifs[k].members, i))
                    .min()
                    .unwrap_or(Distance::Infinite);
                return Err(BigsError::NoAncestors {
                    motif: entries[k].id.clone(),
                    reason: format!(
                        "observing it takes at least {nearest} snowball stages but T = {t}; \
                         raise T to at least {nearest} or use motif-only"
                    ),
                });
            }
            (sets, t)
        }
        AncestorRule::MotifOnly => {
            let sets = motifs.motifs.iter().map(|m| m.members.clone()).collect();
            let stages = (0..motifs.len()).map(phi).max().unwrap_or(0);
            (sets, stages)
        }
        AncestorRule::MotifPlus(t) => {
            if t == 0 {
                return Err(BigsError::InvalidArgument("motif-plus needs t >= 1".into()));
            }
            let mut stages = 0;
            for (k, entry) in entries.iter().enumerate() {
                let l = lambda(k).ok_or_else(|| BigsError::InvalidArgument(format!(
                    "motif `{}` is not connected, so its diameter and the motif-plus stage bound are infinite",
                    entry.id
                )))?;
                stages = stages.max(l + 2 * t);
            }
            let sets = motifs
                .motifs
                .par_iter()
                .map(|m| {
                    let mut set = m.members.clone();
                    set.extend(geometry.ancestor_neighborhood(&m.members, t));
                    set.sort_unstable();
                    set
                })
                .collect();
            (sets, stages)
        }
        other => {
            return Err(BigsError::InvalidArgument(format!(
                "rule `{other}` does not apply to snowball sampling"
            )))
        }
    };

    let edges: Vec<(usize, usize)> = ancestors
        .iter()
        .enumerate()
        .flat_map(|(k, set)| set.iter().map(move |&i| (i, k)))
        .collect();
    Big::new(g.labels().to_vec(), entries, &edges, rule, Some(stages))
}

/// Observation procedure used to test feasibility by simulation.
#[derive(Clone, Copy, Debug)]
pub enum ObservationProcedure<'a> {
    /// `T`-stage snowball sampling on a graph whose labels cover the frame
    /// and the motif members. `stages = None` uses the BIG's requirement.
    Snowball { graph: &'a Graph, stages: Option<u32> },
    /// Adaptive cluster sampling on a grid population.
    Acs(&'a AcsPopulation),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NoAncestors { motif: String },
    ZeroInclusion { unit: String },
    FrameMismatch { design: usize, frame: usize },
    /// Selecting `unit` does not lead to observing `motif`.
    NotObserved { unit: String, motif: String },
    /// Selecting `unit` observes `motif` but leaves some of its ancestors unknown.
    AncestorsUnobserved { unit: String, motif: String, missing: Vec<String> },
    /// The procedure cannot be simulated for this BIG.
    Unsimulable { reason: String },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub violations: Vec<Violation>,
    /// Whether the observation procedure was simulated.
    pub simulated: bool,
}

impl FeasibilityReport {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

type ObservesFn<'a> = Box<dyn Fn(&[NodeId]) -> bool + 'a>;

/// Checks that every motif has ancestors and every frame unit can be
/// selected; with an observation procedure, also simulates the procedure
/// from each single unit `i` and checks that every `k ∈ α_i` is observed
/// together with all of `β_k`.
pub fn check_feasibility(
    b: &Big,
    op: Option<ObservationProcedure<'_>>,
    design: &Design,
) -> FeasibilityReport {
    let mut report = FeasibilityReport::default();
    for k in 0..b.motif_count() {
        if b.beta(k).is_empty() {
            report.violations.push(Violation::NoAncestors {
                motif: b.motif_label(k).to_string(),
            });
        }
    }
    if design.frame_size() != b.frame_size() {
        report.violations.push(Violation::FrameMismatch {
            design: design.frame_size(),
            frame: b.frame_size(),
        });
    } else {
        for i in 0..b.frame_size() {
            if design.inclusion(i).is_zero() {
                report.violations.push(Violation::ZeroInclusion {
                    unit: b.frame[i].clone(),
                });
            }
        }
    }
    if let Some(op) = op {
        match simulate_ancestry(b, op) {
            Ok(mut found) => {
                report.simulated = true;
                report.violations.append(&mut found);
            }
            Err(reason) => report.violations.push(Violation::Unsimulable { reason }),
        }
    }
    report
}

fn simulate_ancestry(
    b: &Big,
    op: ObservationProcedure<'_>,
) -> std::result::Result<Vec<Violation>, String> {
    let graph = match op {
        ObservationProcedure::Snowball { graph, .. } => graph,
        ObservationProcedure::Acs(pop) => pop.grid(),
    };
    let index: HashMap<&str, NodeId> = graph
        .labels()
        .iter()
        .enumerate()
        .map(|(v, l)| (l.as_str(), v))
        .collect();
    let lookup = |label: &str| {
        index
            .get(label)
            .copied()
            .ok_or_else(|| format!("label `{label}` is not a node of the observed graph"))
    };
    let frame_nodes: Vec<NodeId> = b.frame.iter().map(|l| lookup(l)).collect::<std::result::Result<_, _>>()?;
    let members: Vec<Vec<NodeId>> = b
        .motifs
        .iter()
        .map(|m| {
            if m.members.is_empty() {
                // ACS motifs are the grids themselves.
                lookup(&m.id).map(|v| vec![v])
            } else {
                m.members.iter().map(|l| lookup(l)).collect()
            }
        })
        .collect::<std::result::Result<_, _>>()?;
    let stages = match op {
        ObservationProcedure::Snowball { stages, .. } => stages
            .or(b.stages_required)
            .ok_or_else(|| "the BIG does not record how many stages it needs".to_string())?,
        ObservationProcedure::Acs(_) => 0,
    };

    let per_unit: Vec<Vec<Violation>> = (0..b.frame_size())
        .into_par_iter()
        .map(|i| {
            let seed = [frame_nodes[i]];
            let (observed_nodes, observes): (Vec<bool>, ObservesFn) = match op {
                ObservationProcedure::Snowball { graph, .. } => {
                    let sample = snowball_sample(graph, &seed, stages);
                    let nodes = (0..graph.node_count()).map(|v| sample.contains_node(v)).collect();
                    (nodes, Box::new(move |m: &[NodeId]| sample.observes(m)))
                }
                ObservationProcedure::Acs(pop) => {
                    let obs = acs_sample(pop, &seed);
                    let mut nodes = vec![false; pop.grid().node_count()];
                    for v in obs.grids() {
                        nodes[v] = true;
                    }
                    let seen = nodes.clone();
                    (nodes, Box::new(move |m: &[NodeId]| m.iter().all(|&v| seen[v])))
                }
            };
            let mut found = Vec::new();
            for &k in b.alpha(i) {
                if !observes(&members[k]) {
                    found.push(Violation::NotObserved {
                        unit: b.frame[i].clone(),
                        motif: b.motif_label(k).to_string(),
                    });
                    continue;
                }
                let missing: Vec<String> = b
                    .beta(k)
                    .iter()
                    .filter(|&&j| !observed_nodes[frame_nodes[j]])
                    .map(|&j| b.frame[j].clone())
                    .collect();
                if !missing.is_empty() {
                    found.push(Violation::AncestorsUnobserved {
                        unit: b.frame[i].clone(),
                        motif: b.motif_label(k).to_string(),
                        missing,
                    });
                }
            }
            found
        })
        .collect();
    Ok(per_unit.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::motif::{enumerate_motifs, MotifClass};

    fn isolated(class: MotifClass) -> (Graph, MotifSet) {
        let g = class.isolated_embedding();
        let motifs = enumerate_motifs(&g, class);
        (g, motifs)
    }

    #[test]
    fn rule_text_round_trips() {
        for rule in [
            AncestorRule::Full(3),
            AncestorRule::MotifOnly,
            AncestorRule::MotifPlus(2),
            AncestorRule::AcsB,
            AncestorRule::AcsBStar,
            AncestorRule::AcsBDagger,
            AncestorRule::Explicit,
        ] {
            assert_eq!(rule.to_string().parse::<AncestorRule>().unwrap(), rule);
        }
        assert!("motif-plus:0".parse::<AncestorRule>().is_err());
        assert!("full".parse::<AncestorRule>().is_err());
        assert!("acs-b:1".parse::<AncestorRule>().is_err());
        assert!("nearest".parse::<AncestorRule>().is_err());
    }

    #[test]
    fn c4_motif_only() {
        let (g, motifs) = isolated(MotifClass::C4);
        assert_eq!(motifs.len(), 1);
        let b = build_big_tsbs(&g, &motifs, AncestorRule::MotifOnly).unwrap();
        assert_eq!(b.beta(0).len(), 4);
        assert_eq!(b.stages_required(), Some(2));
        let design = Design::srswor(4, 1).unwrap();
        let op = ObservationProcedure::Snowball { graph: &g, stages: None };
        let report = check_feasibility(&b, Some(op), &design);
        assert!(report.is_feasible(), "{report:?}");
        assert!(report.simulated);
    }

    #[test]
    fn p3_motif_plus_one() {
        let (g, motifs) = isolated(MotifClass::P3);
        let b = build_big_tsbs(&g, &motifs, AncestorRule::MotifPlus(1)).unwrap();
        assert_eq!(b.stages_required(), Some(5));
    }

    #[test]
    fn unreachable_members_are_infeasible() {
        let g = Graph::from_edges(3, &[], false).unwrap();
        let motifs = MotifSet::new(vec![crate::motif::Motif {
            id: 0,
            members: vec![0, 1, 2],
            class: MotifClass::Component(3),
        }]);
        let err = build_big_tsbs(&g, &motifs, AncestorRule::MotifOnly).unwrap_err();
        assert!(matches!(err, BigsError::InfiniteObservationDiameter { .. }));
    }

    #[test]
    fn full_ancestors_on_a_path() {
        // Edge 1-2 in the path 0-1-2-3: observed from 1 or 2 at stage 1,
        // from 0 or 3 at stage 2.
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)], false).unwrap();
        let motifs = MotifSet::new(vec![crate::motif::Motif {
            id: 0,
            members: vec![1, 2],
            class: MotifClass::K2,
        }]);
        let one = build_big_tsbs(&g, &motifs, AncestorRule::Full(1)).unwrap();
        assert_eq!(one.beta(0), &[1, 2]);
        let two = build_big_tsbs(&g, &motifs, AncestorRule::Full(2)).unwrap();
        assert_eq!(two.beta(0), &[0, 1, 2, 3]);
        assert_eq!(two.alpha(0), &[0]);
        // The full BIG at T = 2 is not ancestral without extra stages.
        let design = Design::srswor(4, 1).unwrap();
        let op = ObservationProcedure::Snowball { graph: &g, stages: None };
        assert!(!check_feasibility(&two, Some(op), &design).is_feasible());
    }

    #[test]
    fn construction_errors() {
        let frame = vec!["a".to_string(), "b".to_string()];
        let motif = |id: &str| MotifEntry {
            id: id.into(),
            y: crate::rational::int(1),
            members: vec![],
        };
        let ok = Big::new(frame.clone(), vec![motif("p")], &[(0, 0), (1, 0)], AncestorRule::Explicit, None)
            .unwrap();
        assert_eq!(ok.beta(0).len(), 2);
        assert!(matches!(
            Big::new(frame.clone(), vec![motif("p"), motif("q")], &[(0, 0)], AncestorRule::Explicit, None),
            Err(BigsError::NoAncestors { .. })
        ));
        assert!(Big::new(frame.clone(), vec![motif("p")], &[(0, 0), (0, 0)], AncestorRule::Explicit, None).is_err());
        assert!(Big::new(frame, vec![motif("p"), motif("p")], &[(0, 0), (0, 1)], AncestorRule::Explicit, None).is_err());
    }
}
