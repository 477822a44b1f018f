//! Population graphs and the structural queries used by every other module:
//! geodesics, connected components and the hypernode transform.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::error::{BigsError, Result};

pub type NodeId = usize;

/// Shortest-path length or observation distance. `Infinite` sorts after
/// every finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Distance {
    Finite(u32),
    Infinite,
}

impl Distance {
    pub const ZERO: Distance = Distance::Finite(0);

    pub fn finite(self) -> Option<u32> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Distance::Finite(_))
    }

    pub fn plus(self, steps: u32) -> Distance {
        match self {
            Distance::Finite(d) => Distance::Finite(d + steps),
            Distance::Infinite => Distance::Infinite,
        }
    }

    pub fn within(self, bound: u32) -> bool {
        matches!(self, Distance::Finite(d) if d <= bound)
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => f.write_str("inf"),
        }
    }
}

/// A simple graph over labelled nodes. Node labels are mapped to dense
/// indices in insertion order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    index: HashMap<String, NodeId>,
    out: Vec<Vec<NodeId>>,
    inc: Vec<Vec<NodeId>>,
    // union of in- and out-neighbours; the incident-reciprocal view
    und: Vec<Vec<NodeId>>,
    edges: Vec<(NodeId, NodeId)>,
    directed: bool,
}

/// Incremental construction by label.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    labels: Vec<String>,
    index: HashMap<String, NodeId>,
    edges: BTreeSet<(NodeId, NodeId)>,
    directed: bool,
}

impl GraphBuilder {
    pub fn new(directed: bool) -> Self {
        Self {
            directed,
            ..Self::default()
        }
    }

    pub fn add_node(&mut self, label: &str) -> NodeId {
        if let Some(&id) = self.index.get(label) {
            return id;
        }
        let id = self.labels.len();
        self.labels.push(label.to_string());
        self.index.insert(label.to_string(), id);
        id
    }

    /// Adds an edge; duplicates collapse. Self-loops are rejected.
    pub fn add_edge(&mut self, a: &str, b: &str) -> Result<()> {
        if a == b {
            return Err(BigsError::SelfLoop {
                line: 0,
                node: a.to_string(),
            });
        }
        let (i, j) = (self.add_node(a), self.add_node(b));
        self.edges.insert(self.key(i, j));
        Ok(())
    }

    fn key(&self, i: NodeId, j: NodeId) -> (NodeId, NodeId) {
        if self.directed {
            (i, j)
        } else {
            (i.min(j), i.max(j))
        }
    }

    pub fn build(self) -> Graph {
        Graph::assemble(self.labels, self.index, self.edges, self.directed)
    }
}

impl Graph {
    fn assemble(
        labels: Vec<String>,
        index: HashMap<String, NodeId>,
        edges: BTreeSet<(NodeId, NodeId)>,
        directed: bool,
    ) -> Graph {
        let n = labels.len();
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        for &(a, b) in &edges {
            out[a].push(b);
            inc[b].push(a);
            if !directed {
                out[b].push(a);
                inc[a].push(b);
            }
        }
        let mut und = vec![Vec::new(); n];
        for v in 0..n {
            out[v].sort_unstable();
            inc[v].sort_unstable();
            let mut u: Vec<NodeId> = out[v].iter().chain(&inc[v]).copied().collect();
            u.sort_unstable();
            u.dedup();
            und[v] = u;
        }
        Graph {
            labels,
            index,
            out,
            inc,
            und,
            edges: edges.into_iter().collect(),
            directed,
        }
    }

    /// Graph on nodes labelled `"0"..n-1`.
    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId)], directed: bool) -> Result<Graph> {
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        Graph::with_labels(labels, edges, directed)
    }

    pub fn with_labels(
        labels: Vec<String>,
        edges: &[(NodeId, NodeId)],
        directed: bool,
    ) -> Result<Graph> {
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(BigsError::InvalidArgument(format!("duplicate node label `{l}`")));
            }
        }
        let n = labels.len();
        let mut set = BTreeSet::new();
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(BigsError::InvalidArgument(format!(
                    "edge ({a}, {b}) references a node outside 0..{n}"
                )));
            }
            if a == b {
                return Err(BigsError::SelfLoop {
                    line: 0,
                    node: labels[a].clone(),
                });
            }
            set.insert(if directed { (a, b) } else { (a.min(b), a.max(b)) });
        }
        Ok(Graph::assemble(labels, index, set, directed))
    }

    /// Reads the edge-list text format: `u v` per line, a single token
    /// declares an isolated node, `#` starts a comment.
    pub fn load_edge_list<R: BufRead>(source: R, directed: bool) -> Result<Graph> {
        let mut builder = GraphBuilder::new(directed);
        for (lineno, line) in source.lines().enumerate() {
            let line_no = lineno + 1;
            let line = line.map_err(|e| BigsError::Parse {
                line: line_no,
                message: e.to_string(),
            })?;
            let content = line.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = content.split_whitespace().collect();
            match tokens.as_slice() {
                [] => {}
                [node] => {
                    builder.add_node(node);
                }
                [a, b] => {
                    if a == b {
                        return Err(BigsError::SelfLoop {
                            line: line_no,
                            node: a.to_string(),
                        });
                    }
                    builder.add_edge(a, b)?;
                }
                _ => {
                    return Err(BigsError::Parse {
                        line: line_no,
                        message: format!("expected one or two node identifiers, found {}", tokens.len()),
                    })
                }
            }
        }
        Ok(builder.build())
    }

    pub fn parse_edge_list(text: &str, directed: bool) -> Result<Graph> {
        Graph::load_edge_list(text.as_bytes(), directed)
    }

    /// Writes the graph back in edge-list format.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let mut touched = vec![false; self.node_count()];
        for &(a, b) in &self.edges {
            touched[a] = true;
            touched[b] = true;
        }
        for (v, t) in touched.iter().enumerate() {
            if !t {
                out.push_str(&self.labels[v]);
                out.push('\n');
            }
        }
        for &(a, b) in &self.edges {
            out.push_str(&format!("{} {}\n", self.labels[a], self.labels[b]));
        }
        out
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: NodeId) -> &str {
        &self.labels[v]
    }

    pub fn index_of(&self, label: &str) -> Option<NodeId> {
        self.index.get(label).copied()
    }

    pub fn resolve(&self, label: &str) -> Result<NodeId> {
        self.index_of(label)
            .ok_or_else(|| BigsError::UnknownNode(label.to_string()))
    }

    /// Stored edges; undirected edges appear once as `(min, max)`.
    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    /// `a_ij`: symmetric for undirected graphs.
    pub fn has_edge(&self, i: NodeId, j: NodeId) -> bool {
        self.out[i].binary_search(&j).is_ok()
    }

    /// Edge in either direction.
    pub fn adjacent(&self, i: NodeId, j: NodeId) -> bool {
        self.und[i].binary_search(&j).is_ok()
    }

    pub fn out_neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.out[v]
    }

    pub fn in_neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.inc[v]
    }

    /// Nodes sharing an edge with `v` in either direction.
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.und[v]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.und[v].len()
    }

    /// All-pairs shortest paths following edge direction.
    pub fn geodesics(&self) -> GeodesicMatrix {
        GeodesicMatrix::build(self.node_count(), |v| &self.out[v])
    }

    /// All-pairs shortest paths ignoring direction: the distances that govern
    /// snowball observation under the incident-reciprocal convention.
    pub fn undirected_geodesics(&self) -> GeodesicMatrix {
        GeodesicMatrix::build(self.node_count(), |v| &self.und[v])
    }

    /// Multi-source BFS over the undirected view.
    pub fn distances_from(&self, sources: &[NodeId]) -> Vec<Distance> {
        let mut dist = vec![Distance::Infinite; self.node_count()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s] == Distance::Infinite {
                dist[s] = Distance::ZERO;
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            let next = dist[v].plus(1);
            for &w in &self.und[v] {
                if dist[w] == Distance::Infinite {
                    dist[w] = next;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Weakly connected components, each sorted, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<NodeId>> {
        let n = self.node_count();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut head = 0;
            while head < members.len() {
                let v = members[head];
                head += 1;
                for &w in &self.und[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Whether `members` induce a connected subgraph (ignoring direction).
    pub fn induces_connected(&self, members: &[NodeId]) -> bool {
        let Some(&first) = members.first() else {
            return true;
        };
        let mut seen = vec![first];
        let mut head = 0;
        while head < seen.len() {
            let v = seen[head];
            head += 1;
            for &w in members {
                if !seen.contains(&w) && self.adjacent(v, w) {
                    seen.push(w);
                }
            }
        }
        seen.len() == members.len()
    }

    /// Same node set, every edge made bidirectional.
    pub fn to_undirected(&self) -> Graph {
        let edges: BTreeSet<(NodeId, NodeId)> = self
            .edges
            .iter()
            .map(|&(a, b)| (a.min(b), a.max(b)))
            .collect();
        Graph::assemble(self.labels.clone(), self.index.clone(), edges, false)
    }

    /// Merges `members` into a single hypernode: internal edges are dropped,
    /// edges among the other nodes are kept, and each outside node keeps at
    /// most one edge to and one edge from the hypernode.
    pub fn hypernode_transform(&self, members: &[NodeId]) -> Result<HypernodeGraph> {
        if members.is_empty() {
            return Err(BigsError::InvalidArgument(
                "hypernode member set is empty".into(),
            ));
        }
        let n = self.node_count();
        let mut in_h = vec![false; n];
        for &m in members {
            if m >= n {
                return Err(BigsError::InvalidArgument(format!(
                    "hypernode member {m} outside 0..{n}"
                )));
            }
            in_h[m] = true;
        }
        let mut labels = Vec::with_capacity(n - members.len() + 1);
        let mut mapping = vec![0; n];
        let mut label = String::from("{h}");
        while self.index.contains_key(&label) {
            label.push('\'');
        }
        labels.push(label);
        for v in 0..n {
            if !in_h[v] {
                mapping[v] = labels.len();
                labels.push(self.labels[v].clone());
            }
        }
        let mut edges = BTreeSet::new();
        for &(a, b) in &self.edges {
            let (ma, mb) = (mapping[a], mapping[b]);
            match (in_h[a], in_h[b]) {
                (true, true) => {}
                _ => {
                    let e = if self.directed { (ma, mb) } else { (ma.min(mb), ma.max(mb)) };
                    edges.insert(e);
                }
            }
        }
        let index = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        let mut sorted = members.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        Ok(HypernodeGraph {
            members: sorted,
            transformed: Graph::assemble(labels, index, edges, self.directed),
            mapping,
        })
    }
}

/// `|U| x |U|` table of geodesic lengths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeodesicMatrix {
    n: usize,
    dist: Vec<Distance>,
}

impl GeodesicMatrix {
    fn build<'a>(n: usize, next: impl Fn(NodeId) -> &'a [NodeId]) -> GeodesicMatrix {
        let mut dist = vec![Distance::Infinite; n * n];
        let mut queue = VecDeque::with_capacity(n);
        for s in 0..n {
            let row = &mut dist[s * n..(s + 1) * n];
            row[s] = Distance::ZERO;
            queue.clear();
            queue.push_back(s);
            while let Some(v) = queue.pop_front() {
                let d = row[v].plus(1);
                for &w in next(v) {
                    if row[w] == Distance::Infinite {
                        row[w] = d;
                        queue.push_back(w);
                    }
                }
            }
        }
        GeodesicMatrix { n, dist }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: NodeId, j: NodeId) -> Distance {
        self.dist[i * self.n + j]
    }

    pub fn row(&self, i: NodeId) -> &[Distance] {
        &self.dist[i * self.n..(i + 1) * self.n]
    }

    /// Largest finite entry, i.e. the diameter over connected pairs.
    pub fn max_finite(&self) -> u32 {
        self.dist.iter().filter_map(|d| d.finite()).max().unwrap_or(0)
    }
}

/// Result of merging a node subset into one hypernode.
#[derive(Clone, Debug)]
pub struct HypernodeGraph {
    /// Base-graph nodes merged into the hypernode, sorted.
    pub members: Vec<NodeId>,
    /// Graph over the hypernode (index 0) and the remaining nodes.
    pub transformed: Graph,
    mapping: Vec<NodeId>,
}

impl HypernodeGraph {
    pub const HYPERNODE: NodeId = 0;

    /// Index in the transformed graph of a base-graph node.
    pub fn map(&self, base: NodeId) -> NodeId {
        self.mapping[base]
    }
}
