//! Graph model for the three supported topologies: paths, bipartite graphs
//! and hexagonal graphs embedded in a grid of axial cells.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

/// Dense index of a node inside its [`Graph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(pub usize);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

/// A cell of the hexagonal grid in axial coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CellCoord {
    pub q: i32,
    pub r: i32,
}

/// The six axial neighbor offsets.
pub const HEX_OFFSETS: [(i32, i32); 6] = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)];

impl CellCoord {
    pub const fn new(q: i32, r: i32) -> Self {
        Self { q, r }
    }

    pub fn is_adjacent(self, other: CellCoord) -> bool {
        let d = (other.q - self.q, other.r - self.r);
        HEX_OFFSETS.contains(&d)
    }

    pub fn neighbors(self) -> impl Iterator<Item = CellCoord> {
        HEX_OFFSETS
            .iter()
            .map(move |&(dq, dr)| CellCoord::new(self.q + dq, self.r + dr))
    }

    /// Color class of the cell: the three classes cycle along every row.
    pub fn class(self) -> ColorClass {
        match (self.q - self.r).rem_euclid(3) {
            0 => ColorClass::R,
            1 => ColorClass::G,
            _ => ColorClass::B,
        }
    }
}

impl fmt::Display for CellCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.q, self.r)
    }
}

/// Side of a bipartition. `L` nodes color bottom-up, `U` nodes top-down.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    L,
    U,
}

/// One of the three classes of a proper 3-coloring of a hexagonal graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ColorClass {
    R,
    G,
    B,
}

impl ColorClass {
    pub const ALL: [ColorClass; 3] = [ColorClass::R, ColorClass::G, ColorClass::B];

    /// The class this class borrows colors from (R from G, G from B, B from R).
    pub fn borrows_from(self) -> ColorClass {
        match self {
            ColorClass::R => ColorClass::G,
            ColorClass::G => ColorClass::B,
            ColorClass::B => ColorClass::R,
        }
    }

    pub fn index(self) -> usize {
        match self {
            ColorClass::R => 0,
            ColorClass::G => 1,
            ColorClass::B => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    Path,
    Bipartite,
    Hexagonal,
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GraphKind::Path => "path",
            GraphKind::Bipartite => "bipartite",
            GraphKind::Hexagonal => "hexagonal",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Layout {
    Path {
        sides: Vec<Side>,
    },
    Bipartite {
        sides: Vec<Side>,
    },
    Hexagonal {
        cells: Vec<CellCoord>,
        classes: Vec<ColorClass>,
    },
}

/// An immutable undirected graph with opaque string node names.
///
/// Node indices follow construction order; wherever a deterministic tie-break
/// is needed, callers compare node names lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    names: Vec<String>,
    index: HashMap<String, NodeId>,
    adj: Vec<Vec<NodeId>>,
    layout: Layout,
}

impl Graph {
    fn from_parts(names: Vec<String>, edges: &[(NodeId, NodeId)], layout: Layout) -> Self {
        let index = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), NodeId(i)))
            .collect();
        let mut sets = vec![BTreeSet::new(); names.len()];
        for &(a, b) in edges {
            sets[a.0].insert(b);
            sets[b.0].insert(a);
        }
        let adj = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        Self {
            names,
            index,
            adj,
            layout,
        }
    }

    pub fn kind(&self) -> GraphKind {
        match self.layout {
            Layout::Path { .. } => GraphKind::Path,
            Layout::Bipartite { .. } => GraphKind::Bipartite,
            Layout::Hexagonal { .. } => GraphKind::Hexagonal,
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.names.len()).map(NodeId)
    }

    pub fn name(&self, v: NodeId) -> &str {
        &self.names[v.0]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn node(&self, name: &str) -> Option<NodeId> {
        self.index.get(name).copied()
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adj[v.0]
    }

    pub fn is_adjacent(&self, a: NodeId, b: NodeId) -> bool {
        self.adj[a.0].binary_search(&b).is_ok()
    }

    /// Every edge once, as `(a, b)` with `a < b`.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adj.iter().enumerate().flat_map(|(a, ns)| {
            ns.iter()
                .filter(move |b| b.0 > a)
                .map(move |&b| (NodeId(a), b))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Partition side for path and bipartite graphs.
    pub fn side(&self, v: NodeId) -> Option<Side> {
        match &self.layout {
            Layout::Path { sides } | Layout::Bipartite { sides } => Some(sides[v.0]),
            Layout::Hexagonal { .. } => None,
        }
    }

    pub fn cell(&self, v: NodeId) -> Option<CellCoord> {
        match &self.layout {
            Layout::Hexagonal { cells, .. } => Some(cells[v.0]),
            _ => None,
        }
    }

    pub fn class(&self, v: NodeId) -> Option<ColorClass> {
        match &self.layout {
            Layout::Hexagonal { classes, .. } => Some(classes[v.0]),
            _ => None,
        }
    }

    /// Cell embedding keyed by node name (hexagonal graphs only).
    pub fn cells(&self) -> Option<BTreeMap<String, CellCoord>> {
        match &self.layout {
            Layout::Hexagonal { cells, .. } => Some(
                self.names
                    .iter()
                    .cloned()
                    .zip(cells.iter().copied())
                    .collect(),
            ),
            _ => None,
        }
    }

    /// Compares node names, the deterministic order for tie-breaks.
    pub fn name_order(&self, a: NodeId, b: NodeId) -> std::cmp::Ordering {
        self.names[a.0].cmp(&self.names[b.0])
    }
}

/// Path `v1 - v2 - ... - vk`, with `v_i` on side `L` iff `i` is odd.
pub fn build_path(k: usize) -> Result<Graph, GraphError> {
    build_path_named((1..=k).map(|i| format!("v{i}")).collect())
}

/// Path through the given names in order.
pub fn build_path_named(names: Vec<String>) -> Result<Graph, GraphError> {
    if names.is_empty() {
        return Err(GraphError::InvalidSize(0));
    }
    check_unique(&names)?;
    let edges: Vec<_> = (1..names.len())
        .map(|i| (NodeId(i - 1), NodeId(i)))
        .collect();
    let sides = (0..names.len())
        .map(|i| if i % 2 == 0 { Side::L } else { Side::U })
        .collect();
    Ok(Graph::from_parts(names, &edges, Layout::Path { sides }))
}

/// Bipartite graph from an explicit `L`/`U` partition.
pub fn build_bipartite<S: AsRef<str>>(
    nodes: &[S],
    edges: &[(S, S)],
    partition: &BTreeMap<String, Side>,
) -> Result<Graph, GraphError> {
    let names: Vec<String> = nodes.iter().map(|s| s.as_ref().to_owned()).collect();
    check_unique(&names)?;
    let lookup: HashMap<&str, NodeId> = names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), NodeId(i)))
        .collect();
    let sides = names
        .iter()
        .map(|n| {
            partition
                .get(n)
                .copied()
                .ok_or_else(|| GraphError::MissingPartition(n.clone()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(extra) = partition.keys().find(|k| !lookup.contains_key(k.as_str())) {
        return Err(GraphError::UnknownNode(extra.clone()));
    }
    let mut resolved = Vec::with_capacity(edges.len());
    for (a, b) in edges {
        let (a, b) = (a.as_ref(), b.as_ref());
        let ia = *lookup
            .get(a)
            .ok_or_else(|| GraphError::UnknownNode(a.to_owned()))?;
        let ib = *lookup
            .get(b)
            .ok_or_else(|| GraphError::UnknownNode(b.to_owned()))?;
        if ia == ib {
            return Err(GraphError::SelfLoop(a.to_owned()));
        }
        if sides[ia.0] == sides[ib.0] {
            return Err(GraphError::NotBipartite(a.to_owned(), b.to_owned()));
        }
        resolved.push((ia, ib));
    }
    Ok(Graph::from_parts(
        names,
        &resolved,
        Layout::Bipartite { sides },
    ))
}

/// Hexagonal graph: one node per occupied cell, edges between neighboring cells.
pub fn build_hexagonal(cells: &BTreeMap<String, CellCoord>) -> Result<Graph, GraphError> {
    let names: Vec<String> = cells.keys().cloned().collect();
    let coords: Vec<CellCoord> = cells.values().copied().collect();
    build_hexagonal_ordered(names, coords)
}

/// Like [`build_hexagonal`] but keeps the given node order.
pub fn build_hexagonal_ordered(
    names: Vec<String>,
    coords: Vec<CellCoord>,
) -> Result<Graph, GraphError> {
    assert_eq!(names.len(), coords.len());
    check_unique(&names)?;
    let mut at: HashMap<CellCoord, NodeId> = HashMap::with_capacity(coords.len());
    for (i, &c) in coords.iter().enumerate() {
        if let Some(prev) = at.insert(c, NodeId(i)) {
            return Err(GraphError::DuplicateCell {
                cell: c,
                first: names[prev.0].clone(),
                second: names[i].clone(),
            });
        }
    }
    let mut edges = Vec::new();
    for (i, &c) in coords.iter().enumerate() {
        for n in c.neighbors() {
            if let Some(&j) = at.get(&n) {
                if j.0 > i {
                    edges.push((NodeId(i), j));
                }
            }
        }
    }
    let classes = coords.iter().map(|c| c.class()).collect();
    Ok(Graph::from_parts(
        names,
        &edges,
        Layout::Hexagonal {
            cells: coords,
            classes,
        },
    ))
}

fn check_unique(names: &[String]) -> Result<(), GraphError> {
    let mut seen = BTreeSet::new();
    for n in names {
        if !seen.insert(n.as_str()) {
            return Err(GraphError::DuplicateNode(n.clone()));
        }
    }
    Ok(())
}

/// All maximal cliques of a graph, each sorted by node index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueSet {
    pub cliques: Vec<Vec<NodeId>>,
}

impl CliqueSet {
    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &[NodeId]> {
        self.cliques.iter().map(Vec::as_slice)
    }

    /// Largest total demand over the cliques.
    pub fn max_weight(&self, demand: &[u32]) -> u32 {
        self.iter()
            .map(|c| c.iter().map(|v| demand[v.0]).sum::<u32>())
            .max()
            .unwrap_or(0)
    }
}

/// Bron–Kerbosch with pivoting. The graphs here are sparse with cliques of
/// size at most three, so the recursion stays shallow.
pub fn maximal_cliques(g: &Graph) -> CliqueSet {
    fn expand(
        g: &Graph,
        r: &mut Vec<NodeId>,
        p: BTreeSet<NodeId>,
        mut x: BTreeSet<NodeId>,
        out: &mut Vec<Vec<NodeId>>,
    ) {
        if p.is_empty() {
            if x.is_empty() {
                let mut c = r.clone();
                c.sort();
                out.push(c);
            }
            return;
        }
        let pivot = p
            .iter()
            .chain(x.iter())
            .max_by_key(|u| g.neighbors(**u).iter().filter(|w| p.contains(w)).count())
            .copied()
            .expect("p is non-empty");
        let candidates: Vec<NodeId> = p
            .iter()
            .filter(|v| !g.is_adjacent(pivot, **v))
            .copied()
            .collect();
        let mut p = p;
        for v in candidates {
            let nv: BTreeSet<NodeId> = g.neighbors(v).iter().copied().collect();
            r.push(v);
            expand(
                g,
                r,
                p.intersection(&nv).copied().collect(),
                x.intersection(&nv).copied().collect(),
                out,
            );
            r.pop();
            p.remove(&v);
            x.insert(v);
        }
    }

    let mut out = Vec::new();
    expand(
        g,
        &mut Vec::new(),
        g.nodes().collect(),
        BTreeSet::new(),
        &mut out,
    );
    out.sort();
    CliqueSet { cliques: out }
}

/// ω: the largest total demand of any clique. `demand` is indexed by node.
pub fn clique_weight(g: &Graph, demand: &[u32]) -> u32 {
    assert_eq!(demand.len(), g.len(), "demand must cover every node");
    maximal_cliques(g).max_weight(demand)
}
