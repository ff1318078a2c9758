//! Finite undirected graphs with loops, spanning trees, oriented cycle
//! bases, and the loop-elimination transform.
//!
//! Conventions: at most one edge per unordered vertex pair (a pair with
//! equal endpoints is a loop), vertex and edge ids dense from zero, every
//! graph connected with at least one edge. A spanning tree here contains
//! every loop plus an acyclic spanning set of non-loop edges.

use std::collections::HashMap;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph needs at least one vertex")]
    NoVertices,
    #[error("graph needs at least one edge")]
    NoEdges,
    #[error("duplicate vertex label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown vertex label `{0}`")]
    UnknownLabel(String),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(String, String),
    #[error("graph is not connected")]
    Disconnected,
    #[error(
        "too many spanning trees ({count} > cap {cap}); determinant must use the cycle-matrix path"
    )]
    TooManyTrees { count: u64, cap: u64 },
    #[error("not a spanning tree of this graph: {0}")]
    NotSpanningTree(String),
}

/// Dense vertex index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(u32);

impl VertexId {
    /// Wraps a dense vertex index of some graph.
    pub fn new(index: usize) -> Self {
        VertexId(index as u32)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Dense edge index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(u32);

impl EdgeId {
    /// Wraps a dense edge index of some graph.
    pub fn new(index: usize) -> Self {
        EdgeId(index as u32)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Undirected edge; equal endpoints make it a loop. Endpoints are stored
/// with the lower vertex index first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    id: EdgeId,
    u: VertexId,
    v: VertexId,
}

impl Edge {
    pub fn id(&self) -> EdgeId {
        self.id
    }

    /// Endpoints, lower index first.
    pub fn endpoints(&self) -> (VertexId, VertexId) {
        (self.u, self.v)
    }

    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    pub fn is_incident(&self, v: VertexId) -> bool {
        self.u == v || self.v == v
    }

    /// The endpoint across from `from`; a loop returns `from` itself.
    pub fn other_endpoint(&self, from: VertexId) -> VertexId {
        debug_assert!(self.is_incident(from));
        if self.u == from {
            self.v
        } else {
            self.u
        }
    }
}

/// Finite connected undirected graph, loops allowed, parallel edges not.
#[derive(Clone, Debug)]
pub struct Graph {
    labels: Vec<String>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<EdgeId>>,
    loop_edges: Vec<EdgeId>,
    label_to_vertex: HashMap<String, VertexId>,
    pair_to_edge: HashMap<(u32, u32), EdgeId>,
}

impl Graph {
    /// Builds a graph from vertex labels and unordered endpoint pairs.
    pub fn from_labeled_edges(
        labels: &[&str],
        pairs: &[(&str, &str)],
    ) -> Result<Graph, GraphError> {
        if labels.is_empty() {
            return Err(GraphError::NoVertices);
        }
        if pairs.is_empty() {
            return Err(GraphError::NoEdges);
        }
        let mut label_to_vertex = HashMap::new();
        let mut owned = Vec::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if label_to_vertex
                .insert(label.to_string(), VertexId::new(i))
                .is_some()
            {
                return Err(GraphError::DuplicateLabel(label.to_string()));
            }
            owned.push(label.to_string());
        }

        let mut edges = Vec::with_capacity(pairs.len());
        let mut adjacency = vec![Vec::new(); labels.len()];
        let mut loop_edges = Vec::new();
        let mut pair_to_edge = HashMap::new();
        for (a, b) in pairs {
            let &u = label_to_vertex
                .get(*a)
                .ok_or_else(|| GraphError::UnknownLabel(a.to_string()))?;
            let &v = label_to_vertex
                .get(*b)
                .ok_or_else(|| GraphError::UnknownLabel(b.to_string()))?;
            let (lo, hi) = if u <= v { (u, v) } else { (v, u) };
            let id = EdgeId::new(edges.len());
            if pair_to_edge.insert((lo.0, hi.0), id).is_some() {
                return Err(GraphError::DuplicateEdge(a.to_string(), b.to_string()));
            }
            edges.push(Edge { id, u: lo, v: hi });
            adjacency[lo.index()].push(id);
            if lo != hi {
                adjacency[hi.index()].push(id);
            } else {
                loop_edges.push(id);
            }
        }

        let graph = Graph {
            labels: owned,
            edges,
            adjacency,
            loop_edges,
            label_to_vertex,
            pair_to_edge,
        };
        if !graph.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(graph)
    }

    /// The complete graph over `labels` with a loop at every vertex.
    ///
    /// Edges are ordered by endpoint index pairs `(i, j)`, `i <= j`.
    pub fn complete_with_loops(labels: &[&str]) -> Result<Graph, GraphError> {
        let mut pairs = Vec::new();
        for i in 0..labels.len() {
            for j in i..labels.len() {
                pairs.push((labels[i], labels[j]));
            }
        }
        Graph::from_labeled_edges(labels, &pairs)
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.labels.len()];
        let mut stack = vec![VertexId::new(0)];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &e in &self.adjacency[v.index()] {
                let w = self.edges[e.index()].other_endpoint(v);
                if !seen[w.index()] {
                    seen[w.index()] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn loop_count(&self) -> usize {
        self.loop_edges.len()
    }

    /// Dimension of the cycle space of the loop-free skeleton:
    /// `|E| - |V| - |E_loop| + 1` for a connected graph.
    pub fn cycle_rank(&self) -> usize {
        self.edge_count() + 1 - self.vertex_count() - self.loop_count()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.labels.len()).map(VertexId::new)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.index()]
    }

    pub fn loop_edges(&self) -> &[EdgeId] {
        &self.loop_edges
    }

    /// Incident edge ids of `v`, loops listed once, in insertion order.
    pub fn adjacency(&self, v: VertexId) -> &[EdgeId] {
        &self.adjacency[v.index()]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v.index()].len()
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v.index()]
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.labels.iter().map(|s| s.as_str())
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<VertexId> {
        self.label_to_vertex.get(label).copied()
    }

    pub fn edge_between(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        let (lo, hi) = if u <= v { (u, v) } else { (v, u) };
        self.pair_to_edge.get(&(lo.0, hi.0)).copied()
    }
}

/// A maximal subgraph containing all loops but no cycle: all loop edges
/// plus `|V| - 1` non-loop edges connecting every vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningTree {
    edge_ids: Vec<EdgeId>,
    mask: Vec<bool>,
}

impl SpanningTree {
    /// Validates and wraps an edge set as a spanning tree of `g`.
    pub fn from_edge_ids(g: &Graph, mut edge_ids: Vec<EdgeId>) -> Result<Self, GraphError> {
        edge_ids.sort();
        edge_ids.dedup();
        let mut mask = vec![false; g.edge_count()];
        for &e in &edge_ids {
            mask[e.index()] = true;
        }
        for &l in g.loop_edges() {
            if !mask[l.index()] {
                return Err(GraphError::NotSpanningTree(
                    "missing a loop edge".to_string(),
                ));
            }
        }
        let non_loop: Vec<EdgeId> = edge_ids
            .iter()
            .copied()
            .filter(|&e| !g.edge(e).is_loop())
            .collect();
        if non_loop.len() != g.vertex_count() - 1 {
            return Err(GraphError::NotSpanningTree(format!(
                "{} non-loop edges, expected {}",
                non_loop.len(),
                g.vertex_count() - 1
            )));
        }
        // union-find: acyclic + spanning
        let mut parent: Vec<usize> = (0..g.vertex_count()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &e in &non_loop {
            let (u, v) = g.edge(e).endpoints();
            let (ru, rv) = (find(&mut parent, u.index()), find(&mut parent, v.index()));
            if ru == rv {
                return Err(GraphError::NotSpanningTree("contains a cycle".to_string()));
            }
            parent[ru] = rv;
        }
        Ok(SpanningTree { edge_ids, mask })
    }

    pub fn edge_ids(&self) -> &[EdgeId] {
        &self.edge_ids
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.mask[e.index()]
    }

    pub fn non_loop_edges<'a>(&'a self, g: &'a Graph) -> impl Iterator<Item = EdgeId> + 'a {
        self.edge_ids
            .iter()
            .copied()
            .filter(move |&e| !g.edge(e).is_loop())
    }
}

/// Breadth-first spanning tree rooted at the lowest-index vertex; the
/// deterministic default everywhere a tree choice is arbitrary.
pub fn bfs_spanning_tree(g: &Graph) -> SpanningTree {
    let mut chosen: Vec<EdgeId> = g.loop_edges().to_vec();
    let mut seen = vec![false; g.vertex_count()];
    let mut queue = std::collections::VecDeque::new();
    seen[0] = true;
    queue.push_back(VertexId::new(0));
    while let Some(v) = queue.pop_front() {
        for &e in g.adjacency(v) {
            let w = g.edge(e).other_endpoint(v);
            if !seen[w.index()] {
                seen[w.index()] = true;
                chosen.push(e);
                queue.push_back(w);
            }
        }
    }
    SpanningTree::from_edge_ids(g, chosen).expect("BFS tree is a spanning tree")
}

/// Default cap on spanning-tree enumeration.
pub const DEFAULT_TREE_CAP: u64 = 1_000_000;

/// Number of spanning trees of the loop-free skeleton via the matrix-tree
/// determinant (float elimination, rounded; exact well past 1e12 trees).
pub fn kirchhoff_tree_count(g: &Graph) -> u64 {
    let n = g.vertex_count();
    if n == 1 {
        return 1;
    }
    // reduced Laplacian of the skeleton (drop the last row/column)
    let dim = n - 1;
    let mut a = vec![0.0_f64; dim * dim];
    for edge in g.edges() {
        if edge.is_loop() {
            continue;
        }
        let (u, v) = edge.endpoints();
        let (u, v) = (u.index(), v.index());
        if u < dim {
            a[u * dim + u] += 1.0;
        }
        if v < dim {
            a[v * dim + v] += 1.0;
        }
        if u < dim && v < dim {
            a[u * dim + v] -= 1.0;
            a[v * dim + u] -= 1.0;
        }
    }
    // LU with partial pivoting
    let mut det = 1.0_f64;
    for k in 0..dim {
        let mut pivot = k;
        for i in k + 1..dim {
            if a[i * dim + k].abs() > a[pivot * dim + k].abs() {
                pivot = i;
            }
        }
        if a[pivot * dim + k] == 0.0 {
            return 0;
        }
        if pivot != k {
            for j in 0..dim {
                a.swap(k * dim + j, pivot * dim + j);
            }
            det = -det;
        }
        det *= a[k * dim + k];
        for i in k + 1..dim {
            let f = a[i * dim + k] / a[k * dim + k];
            for j in k..dim {
                a[i * dim + j] -= f * a[k * dim + j];
            }
        }
    }
    det.round().max(0.0) as u64
}

#[derive(Clone)]
struct MultiEdge {
    u: usize,
    v: usize,
    id: EdgeId,
}

fn multigraph_connected(vertex_count: usize, edges: &[MultiEdge]) -> bool {
    if vertex_count <= 1 {
        return true;
    }
    let mut adj = vec![Vec::new(); vertex_count];
    for e in edges {
        adj[e.u].push(e.v);
        adj[e.v].push(e.u);
    }
    let mut seen = vec![false; vertex_count];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut visited = 1;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                visited += 1;
                stack.push(w);
            }
        }
    }
    visited == vertex_count
}

fn enumerate_rec(
    vertex_count: usize,
    edges: &[MultiEdge],
    chosen: &mut Vec<EdgeId>,
    out: &mut Vec<Vec<EdgeId>>,
    cap: u64,
) -> Result<(), GraphError> {
    if vertex_count == 1 {
        if out.len() as u64 >= cap {
            return Err(GraphError::TooManyTrees {
                count: cap + 1,
                cap,
            });
        }
        out.push(chosen.clone());
        return Ok(());
    }
    if edges.is_empty() {
        return Ok(());
    }
    let e = edges[0].clone();

    // contract e: merge v into u, relabel dense, drop collapsed self-loops
    let mut relabel: Vec<usize> = (0..vertex_count).collect();
    let merged = e.u.min(e.v);
    let gone = e.u.max(e.v);
    for r in relabel.iter_mut() {
        if *r == gone {
            *r = merged;
        } else if *r > gone {
            *r -= 1;
        }
    }
    let contracted: Vec<MultiEdge> = edges[1..]
        .iter()
        .filter_map(|f| {
            let (u, v) = (relabel[f.u], relabel[f.v]);
            (u != v).then_some(MultiEdge { u, v, id: f.id })
        })
        .collect();
    chosen.push(e.id);
    enumerate_rec(vertex_count - 1, &contracted, chosen, out, cap)?;
    chosen.pop();

    // delete e, unless it is a bridge
    let rest = &edges[1..];
    if multigraph_connected(vertex_count, rest) {
        enumerate_rec(vertex_count, rest, chosen, out, cap)?;
    }
    Ok(())
}

/// All spanning trees of `g`, each containing every loop, by recursive edge
/// contraction/deletion. The Kirchhoff count pre-checks the cap so huge
/// inputs fail fast.
pub fn enumerate_spanning_trees(g: &Graph, cap: u64) -> Result<Vec<SpanningTree>, GraphError> {
    let estimated = kirchhoff_tree_count(g);
    if estimated > cap {
        return Err(GraphError::TooManyTrees {
            count: estimated,
            cap,
        });
    }
    let skeleton: Vec<MultiEdge> = g
        .edges()
        .iter()
        .filter(|e| !e.is_loop())
        .map(|e| MultiEdge {
            u: e.endpoints().0.index(),
            v: e.endpoints().1.index(),
            id: e.id(),
        })
        .collect();
    let mut sets = Vec::new();
    let mut chosen = Vec::new();
    enumerate_rec(g.vertex_count(), &skeleton, &mut chosen, &mut sets, cap)?;
    sets.into_iter()
        .map(|mut ids| {
            ids.extend_from_slice(g.loop_edges());
            SpanningTree::from_edge_ids(g, ids)
        })
        .collect()
}

/// One oriented step of a cycle walk. `forward` is true when the edge is
/// traversed from its lower- to its higher-index endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CycleStep {
    pub edge: EdgeId,
    pub forward: bool,
}

/// A closed walk of distinct non-loop edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedCycle {
    steps: Vec<CycleStep>,
}

impl OrientedCycle {
    pub(crate) fn from_steps(steps: Vec<CycleStep>) -> OrientedCycle {
        OrientedCycle { steps }
    }

    pub fn steps(&self) -> &[CycleStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Traversal direction of `e` within this cycle, if `e` belongs to it.
    pub fn orientation(&self, e: EdgeId) -> Option<bool> {
        self.steps.iter().find(|s| s.edge == e).map(|s| s.forward)
    }
}

/// Fundamental cycles of `g` with respect to the spanning tree `t`: one per
/// non-tree edge, oriented by traversing that edge from its lower- to its
/// higher-index endpoint and returning along the unique tree path.
pub fn cycle_basis(g: &Graph, t: &SpanningTree) -> Result<Vec<OrientedCycle>, GraphError> {
    // re-validate the precondition cheaply
    let t = SpanningTree::from_edge_ids(g, t.edge_ids().to_vec())?;

    // tree adjacency and BFS parents from each needed root on demand
    let mut tree_adj = vec![Vec::new(); g.vertex_count()];
    for e in t.non_loop_edges(g) {
        let (u, v) = g.edge(e).endpoints();
        tree_adj[u.index()].push((v, e));
        tree_adj[v.index()].push((u, e));
    }
    let tree_path = |from: VertexId, to: VertexId| -> Vec<(VertexId, EdgeId)> {
        // parent pointers toward `to`
        let mut parent: Vec<Option<(VertexId, EdgeId)>> = vec![None; g.vertex_count()];
        let mut seen = vec![false; g.vertex_count()];
        let mut queue = std::collections::VecDeque::new();
        seen[to.index()] = true;
        queue.push_back(to);
        while let Some(v) = queue.pop_front() {
            for &(w, e) in &tree_adj[v.index()] {
                if !seen[w.index()] {
                    seen[w.index()] = true;
                    parent[w.index()] = Some((v, e));
                    queue.push_back(w);
                }
            }
        }
        let mut path = Vec::new();
        let mut at = from;
        while at != to {
            let (next, e) = parent[at.index()].expect("spanning tree connects all vertices");
            path.push((at, e));
            at = next;
        }
        path
    };

    let mut cycles = Vec::new();
    for edge in g.edges() {
        if edge.is_loop() || t.contains(edge.id()) {
            continue;
        }
        let (u, v) = edge.endpoints();
        let mut steps = vec![CycleStep {
            edge: edge.id(),
            forward: true,
        }];
        for (at, e) in tree_path(v, u) {
            let to = g.edge(e).other_endpoint(at);
            steps.push(CycleStep {
                edge: e,
                forward: at < to,
            });
        }
        cycles.push(OrientedCycle { steps });
    }
    debug_assert_eq!(cycles.len(), g.cycle_rank());
    Ok(cycles)
}

/// Result of replacing every loop by a pendant edge to a fresh vertex.
#[derive(Clone, Debug)]
pub struct LoopTransform {
    /// The loop-free graph: same non-loop edges, each loop replaced by an
    /// edge to a fresh degree-1 vertex.
    pub graph: Graph,
    /// Original edge id -> transformed edge id (edge order is preserved).
    pub edge_map: Vec<EdgeId>,
    /// Per original edge: the fresh pendant vertex, for loops only.
    pub pendant_vertex: Vec<Option<VertexId>>,
}

/// Replaces every loop at `v` by an edge `{v, v'}` to a fresh vertex `v'`.
/// `|V'| = |V| + |E_loop|` and `|E'| = |E|`; a loop-free graph maps to an
/// identical graph with identity maps.
pub fn loop_transform(g: &Graph) -> LoopTransform {
    let mut labels: Vec<String> = g.labels().map(|s| s.to_string()).collect();
    let mut pendant_vertex = vec![None; g.edge_count()];
    let mut pendant_label: HashMap<EdgeId, String> = HashMap::new();
    for &l in g.loop_edges() {
        let base = g.label(g.edge(l).endpoints().0);
        let mut fresh = format!("{base}'");
        while labels.contains(&fresh) {
            fresh.push('\'');
        }
        pendant_vertex[l.index()] = Some(VertexId::new(labels.len()));
        labels.push(fresh.clone());
        pendant_label.insert(l, fresh);
    }
    let pairs: Vec<(String, String)> = g
        .edges()
        .iter()
        .map(|e| {
            let (u, v) = e.endpoints();
            if e.is_loop() {
                (g.label(u).to_string(), pendant_label[&e.id()].clone())
            } else {
                (g.label(u).to_string(), g.label(v).to_string())
            }
        })
        .collect();
    let label_refs: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
    let pair_refs: Vec<(&str, &str)> = pairs
        .iter()
        .map(|(a, b)| (a.as_str(), b.as_str()))
        .collect();
    let graph = Graph::from_labeled_edges(&label_refs, &pair_refs)
        .expect("loop transform preserves validity");
    LoopTransform {
        graph,
        edge_map: (0..g.edge_count()).map(EdgeId::new).collect(),
        pendant_vertex,
    }
}
