//! Graph construction: zero-divisor graphs, the divisor graph on proper
//! divisors, and small fixture families (paths, complete and complete
//! bipartite graphs, stars, Cartesian products).
//!
//! Adjacency is stored densely. Vertices are addressed by index; labels are
//! carried alongside for reporting.

use std::collections::VecDeque;
use std::fmt::Debug;

use num_integer::Integer;

use crate::arithmetic::{self, induces_complete};
use crate::error::{Error, Result};
use crate::partitions::Partition;

/// Undirected simple graph with dense symmetric adjacency.
#[derive(Debug, Clone, PartialEq)]
pub struct SimpleGraph<L = usize> {
    labels: Vec<L>,
    adj: Vec<bool>,
}

impl<L: Clone + Debug> SimpleGraph<L> {
    /// Empty graph on the given labels.
    pub fn empty(labels: Vec<L>) -> Self {
        let order = labels.len();
        Self { labels, adj: vec![false; order * order] }
    }

    pub fn from_edges(labels: Vec<L>, edges: &[(usize, usize)]) -> Self {
        let mut g = Self::empty(labels);
        for &(a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    /// Adds the edge `a - b`; self-loops are ignored.
    pub fn add_edge(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let n = self.order();
        self.adj[a * n + b] = true;
        self.adj[b * n + a] = true;
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    /// Same graph with labels replaced by vertex indices.
    pub fn unlabeled(&self) -> SimpleGraph {
        SimpleGraph { labels: (0..self.order()).collect(), adj: self.adj.clone() }
    }

    pub fn labels(&self) -> &[L] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &L {
        &self.labels[i]
    }

    #[inline]
    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a * self.order() + b]
    }

    pub fn neighbors(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        let n = self.order();
        self.adj[a * n..(a + 1) * n].iter().enumerate().filter_map(|(j, &e)| e.then_some(j))
    }

    pub fn degree(&self, a: usize) -> usize {
        self.neighbors(a).count()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().filter(|&&e| e).count() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.order();
        (0..n).flat_map(|a| (a + 1..n).filter(move |&b| self.adjacent(a, b)).map(move |b| (a, b))).collect()
    }

    /// Adjacency matrix as `f64`, for the numeric pipeline.
    pub fn adjacency_matrix(&self) -> nalgebra::DMatrix<f64> {
        let n = self.order();
        nalgebra::DMatrix::from_fn(n, n, |i, j| if self.adjacent(i, j) { 1.0 } else { 0.0 })
    }

    /// BFS distances from `start`; `None` for unreachable vertices.
    pub fn distances_from(&self, start: usize) -> Vec<Option<usize>> {
        bfs(self, start).0
    }

    pub fn is_connected(&self) -> bool {
        self.order() == 0 || self.distances_from(0).iter().all(Option::is_some)
    }

    /// Eccentricity of `v`, or `None` when the graph is disconnected.
    pub fn eccentricity(&self, v: usize) -> Option<usize> {
        self.distances_from(v).into_iter().try_fold(0, |acc, d| d.map(|d| acc.max(d)))
    }

    /// A proper two-colouring, or the vertex indices of an odd cycle.
    pub fn two_coloring(&self) -> std::result::Result<Vec<bool>, Vec<usize>> {
        let n = self.order();
        let mut color: Vec<Option<bool>> = vec![None; n];
        for root in 0..n {
            if color[root].is_some() {
                continue;
            }
            let (dist, parent) = bfs(self, root);
            for v in 0..n {
                if let Some(d) = dist[v] {
                    color[v] = Some(d % 2 == 1);
                }
            }
            for a in 0..n {
                let Some(da) = dist[a] else { continue };
                for b in self.neighbors(a).filter(|&b| b > a) {
                    if dist[b].map(|db| db % 2) == Some(da % 2) {
                        return Err(odd_cycle(&parent, a, b));
                    }
                }
            }
        }
        Ok(color.into_iter().map(|c| c.unwrap_or(false)).collect())
    }

    pub fn is_bipartite(&self) -> bool {
        self.two_coloring().is_ok()
    }
}

fn bfs<L: Clone + Debug>(g: &SimpleGraph<L>, start: usize) -> (Vec<Option<usize>>, Vec<Option<usize>>) {
    let n = g.order();
    let mut dist = vec![None; n];
    let mut parent = vec![None; n];
    let mut queue = VecDeque::from([start]);
    dist[start] = Some(0);
    while let Some(v) = queue.pop_front() {
        let dv = dist[v].unwrap();
        for w in g.neighbors(v) {
            if dist[w].is_none() {
                dist[w] = Some(dv + 1);
                parent[w] = Some(v);
                queue.push_back(w);
            }
        }
    }
    (dist, parent)
}

fn odd_cycle(parent: &[Option<usize>], a: usize, b: usize) -> Vec<usize> {
    let path_to_root = |mut v: usize| {
        let mut path = vec![v];
        while let Some(p) = parent[v] {
            path.push(p);
            v = p;
        }
        path
    };
    let pa = path_to_root(a);
    let pb = path_to_root(b);
    // Strip the shared tail beyond the lowest common ancestor.
    let mut common = 0;
    while common < pa.len().min(pb.len()) && pa[pa.len() - 1 - common] == pb[pb.len() - 1 - common] {
        common += 1;
    }
    let mut cycle: Vec<usize> = pa[..pa.len() - common + 1].to_vec();
    cycle.extend(pb[..pb.len() - common].iter().rev());
    cycle
}

/// Twin relation between two distinct vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwinKind {
    NotTwins,
    FalseTwins,
    TrueTwins,
}

pub fn twin_kind<L: Clone + Debug>(g: &SimpleGraph<L>, u: usize, v: usize) -> Result<TwinKind> {
    let n = g.order();
    if u >= n {
        return Err(Error::VertexOutOfRange(u));
    }
    if v >= n {
        return Err(Error::VertexOutOfRange(v));
    }
    if u == v {
        return Err(Error::SameVertex(u));
    }
    let same = (0..n).filter(|&w| w != u && w != v).all(|w| g.adjacent(u, w) == g.adjacent(v, w));
    Ok(match (same, g.adjacent(u, v)) {
        (false, _) => TwinKind::NotTwins,
        (true, true) => TwinKind::TrueTwins,
        (true, false) => TwinKind::FalseTwins,
    })
}

/// Cartesian product `g □ h` on label pairs, indexed `i * |h| + j`.
pub fn cartesian_product<A, B>(g: &SimpleGraph<A>, h: &SimpleGraph<B>) -> SimpleGraph<(A, B)>
where
    A: Clone + Debug,
    B: Clone + Debug,
{
    let (ng, nh) = (g.order(), h.order());
    let labels = (0..ng)
        .flat_map(|i| (0..nh).map(move |j| (i, j)))
        .map(|(i, j)| (g.label(i).clone(), h.label(j).clone()))
        .collect();
    let mut prod = SimpleGraph::empty(labels);
    for i in 0..ng {
        for j in 0..nh {
            for j2 in h.neighbors(j) {
                prod.add_edge(i * nh + j, i * nh + j2);
            }
            for i2 in g.neighbors(i) {
                prod.add_edge(i * nh + j, i2 * nh + j);
            }
        }
    }
    prod
}

pub fn make_path(k: usize) -> SimpleGraph {
    let edges: Vec<_> = (1..k).map(|i| (i - 1, i)).collect();
    SimpleGraph::from_edges((0..k).collect(), &edges)
}

pub fn make_complete(k: usize) -> SimpleGraph {
    let edges: Vec<_> = (0..k).flat_map(|a| (a + 1..k).map(move |b| (a, b))).collect();
    SimpleGraph::from_edges((0..k).collect(), &edges)
}

/// `K_{a,b}`: vertices `0..a` on one side, `a..a+b` on the other.
pub fn make_complete_bipartite(a: usize, b: usize) -> SimpleGraph {
    let edges: Vec<_> = (0..a).flat_map(|x| (a..a + b).map(move |y| (x, y))).collect();
    SimpleGraph::from_edges((0..a + b).collect(), &edges)
}

/// Star on `k` vertices with centre 0, i.e. `K_{1,k-1}`.
pub fn make_star(k: usize) -> SimpleGraph {
    make_complete_bipartite(1, k.saturating_sub(1))
}

/// The zero-divisor graph of `Z_n`: nonzero zero divisors, `x ~ y` iff
/// `xy = 0 (mod n)` and `x != y`. Vertices are in ascending residue order.
#[derive(Debug, Clone)]
pub struct ZnGraph {
    n: u64,
    graph: SimpleGraph<u64>,
}

impl ZnGraph {
    pub fn new(n: u64) -> Result<Self> {
        arithmetic::check_composite(n)?;
        let residues: Vec<u64> = (1..n).filter(|x| x.gcd(&n) > 1).collect();
        let mut graph = SimpleGraph::empty(residues.clone());
        for (i, &x) in residues.iter().enumerate() {
            for (j, &y) in residues.iter().enumerate().skip(i + 1) {
                if (x as u128 * y as u128).is_multiple_of(n as u128) {
                    graph.add_edge(i, j);
                }
            }
        }
        Ok(Self { n, graph })
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn graph(&self) -> &SimpleGraph<u64> {
        &self.graph
    }

    pub fn order(&self) -> usize {
        self.graph.order()
    }

    pub fn residues(&self) -> &[u64] {
        self.graph.labels()
    }

    pub fn residue(&self, index: usize) -> u64 {
        *self.graph.label(index)
    }

    pub fn index_of(&self, residue: u64) -> Option<usize> {
        self.residues().binary_search(&residue).ok()
    }

    pub fn require_index(&self, residue: u64) -> Result<usize> {
        self.index_of(residue).ok_or(Error::NotAVertex { x: residue, n: self.n })
    }
}

/// Shorthand for [`ZnGraph::new`].
pub fn build_zero_divisor_graph(n: u64) -> Result<ZnGraph> {
    ZnGraph::new(n)
}

/// Induced subgraph type of a divisor cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellKind {
    Null,
    Complete,
}

/// The cell `V_d = {x : gcd(x, n) = d}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorCell {
    pub divisor: u64,
    pub members: Vec<u64>,
    pub kind: CellKind,
}

impl DivisorCell {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    /// Eigenvalue carried by `e_u - e_v` for twins inside this cell.
    pub fn twin_eigenvalue(&self) -> i64 {
        match self.kind {
            CellKind::Null => 0,
            CellKind::Complete => -1,
        }
    }
}

/// Cells of the zero-divisor graph indexed by proper divisors, in the order of
/// [`arithmetic::proper_divisors`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorPartition {
    n: u64,
    cells: Vec<DivisorCell>,
}

impl DivisorPartition {
    /// Computed from `n` alone; no graph is built.
    pub fn for_modulus(n: u64) -> Result<Self> {
        let divisors = arithmetic::proper_divisors(n)?;
        let cells = divisors
            .into_iter()
            .map(|d| {
                let m = n / d;
                let members = (1..m).filter(|k| k.gcd(&m) == 1).map(|k| k * d).collect();
                let kind = if induces_complete(n, d) { CellKind::Complete } else { CellKind::Null };
                DivisorCell { divisor: d, members, kind }
            })
            .collect();
        Ok(Self { n, cells })
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn cells(&self) -> &[DivisorCell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.cells.iter().map(DivisorCell::size).collect()
    }

    pub fn divisors(&self) -> Vec<u64> {
        self.cells.iter().map(|c| c.divisor).collect()
    }

    pub fn position_of_divisor(&self, d: u64) -> Option<usize> {
        self.cells.iter().position(|c| c.divisor == d)
    }

    /// Position of the cell containing residue `x`.
    pub fn cell_of_residue(&self, x: u64) -> Option<usize> {
        if x == 0 || x >= self.n {
            return None;
        }
        self.position_of_divisor(x.gcd(&self.n))
    }

    /// Number of null-inducing cells (they come first).
    pub fn null_cell_count(&self) -> usize {
        self.cells.iter().filter(|c| c.kind == CellKind::Null).count()
    }

    /// The same cells as a vertex-index partition of `g`.
    pub fn to_partition(&self, g: &ZnGraph) -> Result<Partition> {
        let cells = self
            .cells
            .iter()
            .map(|c| c.members.iter().map(|&x| g.require_index(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Partition::new(cells, g.order())
    }
}

pub fn divisor_partition(g: &ZnGraph) -> DivisorPartition {
    DivisorPartition::for_modulus(g.modulus()).expect("graph modulus is composite")
}

/// The divisor graph on proper divisors: `d_i ~ d_j` iff `n | d_i d_j`, no loops.
pub fn build_upsilon(n: u64) -> Result<SimpleGraph<u64>> {
    let divisors = arithmetic::proper_divisors(n)?;
    let mut g = SimpleGraph::empty(divisors.clone());
    for (i, &a) in divisors.iter().enumerate() {
        for (j, &b) in divisors.iter().enumerate().skip(i + 1) {
            if (a as u128 * b as u128).is_multiple_of(n as u128) {
                g.add_edge(i, j);
            }
        }
    }
    Ok(g)
}

/// Degree of residue `x` in the zero-divisor graph of `Z_n`, from its gcd alone.
pub fn degree_of(x: u64, n: u64) -> Result<u64> {
    arithmetic::check_composite(n)?;
    let d = x.gcd(&n);
    if x == 0 || x >= n || d == 1 {
        return Err(Error::NotAVertex { x, n });
    }
    Ok(if induces_complete(n, d) { d - 2 } else { d - 1 })
}
