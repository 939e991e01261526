//! Finite simple directed graphs and the combinatorial routines built on them.
//!
//! A [`DirectedGraph`] owns its vertex count and an ordered edge list. The edge
//! order is significant: it fixes the basis of the edge space, so every
//! operator matrix downstream depends on it.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How an unoriented graph is represented as a directed one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Every undirected edge carries one arbitrary direction.
    #[default]
    Oriented,
    /// Every undirected edge occurs twice, once in each direction.
    Symmetric,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Oriented => f.write_str("oriented"),
            Mode::Symmetric => f.write_str("symmetric"),
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim() {
            "oriented" => Ok(Mode::Oriented),
            "symmetric" => Ok(Mode::Symmetric),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

/// Simple directed graph on vertices `0..n` with an ordered edge list.
///
/// Self-loops and repeated directed edges are rejected. A pair `(i, j)` and
/// its reversal `(j, i)` may coexist in either mode.
#[derive(Debug, Clone)]
pub struct DirectedGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    mode: Mode,
    index: HashMap<(usize, usize), usize>,
}

impl PartialEq for DirectedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges && self.mode == other.mode
    }
}

impl Eq for DirectedGraph {}

impl DirectedGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>, mode: Mode) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoVertices);
        }
        let mut index = HashMap::with_capacity(edges.len());
        for (e, &(i, j)) in edges.iter().enumerate() {
            if i >= n || j >= n {
                return Err(Error::IndexOutOfRange { i, j, n });
            }
            if i == j {
                return Err(Error::SelfLoop(i));
            }
            if index.insert((i, j), e).is_some() {
                return Err(Error::DuplicateEdge(i, j));
            }
        }
        if mode == Mode::Symmetric {
            if let Some(&(i, j)) = edges.iter().find(|&&(i, j)| !index.contains_key(&(j, i))) {
                return Err(Error::SymmetricModeViolation(i, j));
            }
        }
        Ok(Self { n, edges, mode, index })
    }

    /// Oriented-mode convenience constructor.
    pub fn oriented(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        Self::new(n, edges, Mode::Oriented)
    }

    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, Vec::new(), Mode::Oriented)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn edge_index(&self, tail: usize, head: usize) -> Option<usize> {
        self.index.get(&(tail, head)).copied()
    }

    /// Index of the reversed edge, if it is present.
    pub fn reversal(&self, e: usize) -> Option<usize> {
        let (i, j) = self.edges[e];
        self.edge_index(j, i)
    }

    /// Adjacency multiplicity of an unordered vertex pair: 0, 1 or 2.
    pub fn multiplicity(&self, i: usize, k: usize) -> usize {
        usize::from(self.index.contains_key(&(i, k))) + usize::from(self.index.contains_key(&(k, i)))
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(_, j) in &self.edges {
            deg[j] += 1;
        }
        deg
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(i, _) in &self.edges {
            deg[i] += 1;
        }
        deg
    }

    /// Same graph with its mode flag replaced. Fails when switching to
    /// symmetric mode on an edge set that is not closed under reversal.
    pub fn with_mode(&self, mode: Mode) -> Result<Self> {
        Self::new(self.n, self.edges.clone(), mode)
    }

    /// Renames vertex `v` to `perm[v]`, keeping the edge order.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.n];
        if perm.len() != self.n {
            return Err(Error::VertexOutOfRange(perm.len()));
        }
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::VertexOutOfRange(p));
            }
        }
        let edges = self.edges.iter().map(|&(i, j)| (perm[i], perm[j])).collect();
        Self::new(self.n, edges, self.mode)
    }

    /// Undirected edges, with a reciprocal pair collapsed onto its
    /// lower-indexed member. Sorted by representative index.
    pub fn undirected_edges(&self) -> Vec<UndirectedEdge> {
        self.edges
            .iter()
            .enumerate()
            .filter_map(|(e, _)| match self.reversal(e) {
                Some(r) if r < e => None,
                partner => Some(UndirectedEdge { rep: e, partner }),
            })
            .collect()
    }

    /// Neighbour lists of the underlying undirected graph as
    /// `(neighbour, representative edge)` pairs, in edge order.
    pub(crate) fn undirected_adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n];
        for u in self.undirected_edges() {
            let (i, j) = self.edges[u.rep];
            adj[i].push((j, u.rep));
            adj[j].push((i, u.rep));
        }
        adj
    }
}

/// One undirected edge of a directed graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UndirectedEdge {
    /// Edge index standing in for the undirected edge.
    pub rep: usize,
    /// The reversed edge, when both directions are present.
    pub partner: Option<usize>,
}

/// Reads the line-oriented edge-list format.
///
/// ```text
/// # comment
/// n=3
/// mode=oriented
/// 0 1
/// 1 2
/// ```
pub fn parse_edge_list(text: &str) -> Result<DirectedGraph> {
    let mut n = None;
    let mut mode = Mode::Oriented;
    let mut edges = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = lineno + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let malformed = |reason: String| Error::MalformedLine { line: lineno, reason };
        let Some(count) = n else {
            let value = line
                .strip_prefix("n=")
                .ok_or_else(|| malformed(format!("expected `n=<count>`, found `{line}`")))?;
            let count: usize = value
                .trim()
                .parse()
                .map_err(|_| malformed(format!("vertex count `{}` is not an integer", value.trim())))?;
            if count == 0 {
                return Err(Error::NoVertices);
            }
            n = Some(count);
            continue;
        };
        if let Some(value) = line.strip_prefix("mode=") {
            if !edges.is_empty() {
                return Err(malformed("mode line must precede the edges".into()));
            }
            mode = value.parse().map_err(malformed)?;
            continue;
        }
        let mut tokens = line.split_whitespace();
        let mut vertex = || -> Result<usize> {
            let tok = tokens
                .next()
                .ok_or_else(|| malformed(format!("expected two vertex indices, found `{line}`")))?;
            tok.parse()
                .map_err(|_| malformed(format!("`{tok}` is not a vertex index")))
        };
        let i = vertex()?;
        let j = vertex()?;
        if let Some(extra) = tokens.next() {
            return Err(malformed(format!("unexpected token `{extra}`")));
        }
        if i >= count || j >= count {
            return Err(Error::IndexOutOfRange { i, j, n: count });
        }
        edges.push((i, j));
    }

    let n = n.ok_or(Error::MissingHeader)?;
    DirectedGraph::new(n, edges, mode)
}

/// Writes a graph back out in the edge-list format.
pub fn write_edge_list(g: &DirectedGraph) -> String {
    let mut out = format!("n={}\nmode={}\n", g.n, g.mode);
    for &(i, j) in &g.edges {
        out.push_str(&format!("{i} {j}\n"));
    }
    out
}

/// Adds every missing reversal. Existing edges keep their positions; new
/// reversals are appended in the order of the edges they reverse.
pub fn symmetrize(g: &DirectedGraph) -> DirectedGraph {
    let mut edges = g.edges.clone();
    for &(i, j) in &g.edges {
        if g.edge_index(j, i).is_none() {
            edges.push((j, i));
        }
    }
    DirectedGraph::new(g.n, edges, Mode::Symmetric).expect("reversal closure of a valid graph")
}

/// Reverses the edges at the given positions.
pub fn reorient(g: &DirectedGraph, flips: &BTreeSet<usize>) -> Result<DirectedGraph> {
    if g.mode != Mode::Oriented {
        return Err(Error::RequiresOriented);
    }
    if let Some(&e) = flips.iter().find(|&&e| e >= g.m()) {
        return Err(Error::EdgeOutOfRange(e));
    }
    let edges = g
        .edges
        .iter()
        .enumerate()
        .map(|(e, &(i, j))| if flips.contains(&e) { (j, i) } else { (i, j) })
        .collect();
    DirectedGraph::new(g.n, edges, Mode::Oriented)
}

/// Connected components of the underlying undirected graph, each sorted,
/// ordered by their smallest vertex.
pub fn connected_components(g: &DirectedGraph) -> Vec<Vec<usize>> {
    let adj = g.undirected_adjacency();
    let mut seen = vec![false; g.n];
    let mut components = Vec::new();
    for start in 0..g.n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &(w, _) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        components.push(comp);
    }
    components
}

/// Component label per vertex, numbered as in [`connected_components`].
pub fn component_labels(g: &DirectedGraph) -> Vec<usize> {
    let mut label = vec![0; g.n];
    for (c, comp) in connected_components(g).iter().enumerate() {
        for &v in comp {
            label[v] = c;
        }
    }
    label
}

/// BFS spanning forest.
///
/// The first root is the one requested; every other component is grown from
/// its smallest vertex. Tree and non-tree sets hold representative edge
/// indices (see [`DirectedGraph::undirected_edges`]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningTree {
    roots: Vec<usize>,
    parent: Vec<Option<(usize, usize)>>,
    depth: Vec<usize>,
    tree_edges: BTreeSet<usize>,
    non_tree_edges: BTreeSet<usize>,
    n: usize,
    m: usize,
}

impl SpanningTree {
    pub fn root(&self) -> usize {
        self.roots[0]
    }

    /// One root per component, requested root first.
    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    /// Representative index of the tree edge from `v` toward its root.
    pub fn parent_edge(&self, v: usize) -> Option<usize> {
        self.parent[v].map(|(_, e)| e)
    }

    pub fn parent_vertex(&self, v: usize) -> Option<usize> {
        self.parent[v].map(|(p, _)| p)
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    pub fn tree_edges(&self) -> &BTreeSet<usize> {
        &self.tree_edges
    }

    pub fn non_tree_edges(&self) -> &BTreeSet<usize> {
        &self.non_tree_edges
    }

    pub(crate) fn shape(&self) -> (usize, usize) {
        (self.n, self.m)
    }
}

pub fn spanning_tree(g: &DirectedGraph, root: usize) -> Result<SpanningTree> {
    if root >= g.n {
        return Err(Error::VertexOutOfRange(root));
    }
    let adj = g.undirected_adjacency();
    let mut parent = vec![None; g.n];
    let mut depth = vec![0; g.n];
    let mut seen = vec![false; g.n];
    let mut tree_edges = BTreeSet::new();
    let mut roots = Vec::new();

    let starts = std::iter::once(root).chain((0..g.n).filter(|&v| v != root));
    let mut queue = VecDeque::new();
    for start in starts {
        if seen[start] {
            continue;
        }
        roots.push(start);
        seen[start] = true;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            for &(w, e) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some((v, e));
                    depth[w] = depth[v] + 1;
                    tree_edges.insert(e);
                    queue.push_back(w);
                }
            }
        }
    }

    let non_tree_edges = g
        .undirected_edges()
        .into_iter()
        .map(|u| u.rep)
        .filter(|e| !tree_edges.contains(e))
        .collect();

    Ok(SpanningTree {
        roots,
        parent,
        depth,
        tree_edges,
        non_tree_edges,
        n: g.n,
        m: g.m(),
    })
}

/// Distance spheres around a root vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BfsLayers {
    pub root: usize,
    pub layers: Vec<Vec<usize>>,
    /// `None` marks vertices outside the root's component.
    pub dist: Vec<Option<usize>>,
}

pub fn bfs_spheres(g: &DirectedGraph, root: usize) -> Result<BfsLayers> {
    if root >= g.n {
        return Err(Error::VertexOutOfRange(root));
    }
    let adj = g.undirected_adjacency();
    let mut dist = vec![None; g.n];
    dist[root] = Some(0);
    let mut layers = vec![vec![root]];
    loop {
        let mut next = BTreeSet::new();
        let level = layers.len();
        for &v in layers.last().expect("at least the root layer") {
            for &(w, _) in &adj[v] {
                if dist[w].is_none() {
                    dist[w] = Some(level);
                    next.insert(w);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        layers.push(next.into_iter().collect());
    }
    Ok(BfsLayers { root, layers, dist })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c3() -> DirectedGraph {
        parse_edge_list("n=3\n0 1\n1 2\n2 0\n").unwrap()
    }

    #[test]
    fn parses_smallest_graph() {
        let g = parse_edge_list("n=2\n0 1\n").unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.edges(), &[(0, 1)]);
        assert_eq!(g.mode(), Mode::Oriented);
    }

    #[test]
    fn parses_comments_mode_and_crlf() {
        let g = parse_edge_list("# triangle\r\nn=3\r\nmode=symmetric\r\n0 1\r\n1 0\r\n\r\n1 2\r\n2 1\r\n").unwrap();
        assert_eq!(g.mode(), Mode::Symmetric);
        assert_eq!(g.m(), 4);
        assert_eq!(c3().edges(), &[(0, 1), (1, 2), (2, 0)]);
    }

    #[test]
    fn parse_errors() {
        assert_eq!(parse_edge_list("n=2\n0 1\n0 1\n"), Err(Error::DuplicateEdge(0, 1)));
        assert_eq!(parse_edge_list("n=2\n1 1\n"), Err(Error::SelfLoop(1)));
        assert_eq!(
            parse_edge_list("n=2\n0 2\n"),
            Err(Error::IndexOutOfRange { i: 0, j: 2, n: 2 })
        );
        assert_eq!(
            parse_edge_list("n=2\nmode=symmetric\n0 1\n"),
            Err(Error::SymmetricModeViolation(0, 1))
        );
        assert!(matches!(
            parse_edge_list("n=2\n0 x\n"),
            Err(Error::MalformedLine { line: 2, .. })
        ));
        assert!(matches!(
            parse_edge_list("n=2\n0 1 2\n"),
            Err(Error::MalformedLine { line: 2, .. })
        ));
        assert!(matches!(
            parse_edge_list("0 1\n"),
            Err(Error::MalformedLine { line: 1, .. })
        ));
        assert_eq!(parse_edge_list("# nothing\n"), Err(Error::MissingHeader));
        assert_eq!(parse_edge_list("n=0\n"), Err(Error::NoVertices));
    }

    #[test]
    fn write_then_parse() {
        let g = symmetrize(&c3());
        assert_eq!(parse_edge_list(&write_edge_list(&g)).unwrap(), g);
    }

    #[test]
    fn reciprocal_pairs_allowed_in_oriented_mode() {
        let g = parse_edge_list("n=2\n0 1\n1 0\n").unwrap();
        assert_eq!(g.multiplicity(0, 1), 2);
        assert_eq!(g.reversal(0), Some(1));
    }

    #[test]
    fn symmetrize_examples() {
        let k2 = DirectedGraph::oriented(2, vec![(0, 1)]).unwrap();
        assert_eq!(symmetrize(&k2).edges(), &[(0, 1), (1, 0)]);

        let pair = DirectedGraph::oriented(2, vec![(0, 1), (1, 0)]).unwrap();
        assert_eq!(symmetrize(&pair).edges(), pair.edges());

        let s = symmetrize(&c3());
        assert_eq!(s.m(), 6);
        assert_eq!(s.mode(), Mode::Symmetric);
        assert!(s.edges().iter().all(|&(i, j)| s.edge_index(j, i).is_some()));
        assert_eq!(symmetrize(&s), s);
    }

    #[test]
    fn reorient_examples() {
        let k2 = DirectedGraph::oriented(2, vec![(0, 1)]).unwrap();
        assert_eq!(reorient(&k2, &BTreeSet::from([0])).unwrap().edges(), &[(1, 0)]);
        assert_eq!(reorient(&c3(), &BTreeSet::new()).unwrap(), c3());

        let pair = DirectedGraph::oriented(2, vec![(0, 1), (1, 0)]).unwrap();
        assert_eq!(reorient(&pair, &BTreeSet::from([0])), Err(Error::DuplicateEdge(1, 0)));
        assert_eq!(reorient(&k2, &BTreeSet::from([3])), Err(Error::EdgeOutOfRange(3)));
        assert_eq!(
            reorient(&symmetrize(&k2), &BTreeSet::new()),
            Err(Error::RequiresOriented)
        );
    }

    #[test]
    fn component_examples() {
        assert_eq!(connected_components(&c3()), vec![vec![0, 1, 2]]);
        let two = DirectedGraph::oriented(4, vec![(0, 1), (2, 3)]).unwrap();
        assert_eq!(connected_components(&two), vec![vec![0, 1], vec![2, 3]]);
        let bare = DirectedGraph::empty(3).unwrap();
        assert_eq!(connected_components(&bare), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(component_labels(&two), vec![0, 0, 1, 1]);
    }

    #[test]
    fn spanning_tree_examples() {
        let path = DirectedGraph::oriented(3, vec![(0, 1), (1, 2)]).unwrap();
        let t = spanning_tree(&path, 0).unwrap();
        assert_eq!(t.tree_edges(), &BTreeSet::from([0, 1]));
        assert!(t.non_tree_edges().is_empty());
        assert_eq!(t.parent_edge(2), Some(1));
        assert_eq!(t.parent_edge(0), None);

        let t = spanning_tree(&c3(), 0).unwrap();
        assert_eq!(t.tree_edges().len(), 2);
        assert_eq!(t.non_tree_edges().len(), 1);

        let k2s = symmetrize(&DirectedGraph::oriented(2, vec![(0, 1)]).unwrap());
        let t = spanning_tree(&k2s, 0).unwrap();
        assert_eq!(t.tree_edges(), &BTreeSet::from([0]));
        assert!(t.non_tree_edges().is_empty());
        assert_eq!(k2s.reversal(0), Some(1));

        assert_eq!(spanning_tree(&c3(), 3), Err(Error::VertexOutOfRange(3)));
    }

    #[test]
    fn spanning_forest_covers_every_component() {
        let g = DirectedGraph::oriented(5, vec![(0, 1), (2, 3), (3, 4), (4, 2)]).unwrap();
        let t = spanning_tree(&g, 3).unwrap();
        assert_eq!(t.roots(), &[3, 0]);
        assert_eq!(t.tree_edges().len(), 5 - 2);
        assert_eq!(t.non_tree_edges().len(), 1);
    }

    #[test]
    fn bfs_examples() {
        let path = DirectedGraph::oriented(3, vec![(0, 1), (1, 2)]).unwrap();
        let b = bfs_spheres(&path, 0).unwrap();
        assert_eq!(b.layers, vec![vec![0], vec![1], vec![2]]);
        assert_eq!(b.dist, vec![Some(0), Some(1), Some(2)]);

        let b = bfs_spheres(&c3(), 0).unwrap();
        assert_eq!(b.layers, vec![vec![0], vec![1, 2]]);

        let two = DirectedGraph::oriented(4, vec![(0, 1), (2, 3)]).unwrap();
        let b = bfs_spheres(&two, 0).unwrap();
        assert_eq!(b.dist, vec![Some(0), Some(1), None, None]);
        assert_eq!(b.layers.concat().len(), 2);
    }

    #[test]
    fn relabel_rejects_non_permutations() {
        assert!(c3().relabeled(&[0, 0, 1]).is_err());
        assert!(c3().relabeled(&[0, 1]).is_err());
        assert_eq!(c3().relabeled(&[1, 2, 0]).unwrap().edges(), &[(1, 2), (2, 0), (0, 1)]);
    }
}
