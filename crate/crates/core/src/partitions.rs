//! Vertex partitions, equitability, quotient matrices and colour refinement.
//!
//! Quotient entries are kept exact. Standard quotients are integers; the
//! symmetrized quotient `C_ij = sqrt(q_ij q_ji)` is stored as surds `r*sqrt(m)`
//! with `m` squarefree, so nothing in the symbolic pipeline touches floats.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arithmetic::{self, induces_complete, squarefree_decompose};
use crate::error::{Error, Result};
use crate::graph::{SimpleGraph, ZnGraph};

/// Disjoint nonempty cells of vertex indices covering `0..order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    cells: Vec<Vec<usize>>,
    cell_of: Vec<usize>,
}

impl Partition {
    pub fn new(cells: Vec<Vec<usize>>, order: usize) -> Result<Self> {
        let mut cell_of = vec![usize::MAX; order];
        for (i, cell) in cells.iter().enumerate() {
            if cell.is_empty() {
                return Err(Error::MalformedPartition(format!("cell {i} is empty")));
            }
            for &v in cell {
                if v >= order {
                    return Err(Error::MalformedPartition(format!("vertex {v} out of range")));
                }
                if cell_of[v] != usize::MAX {
                    return Err(Error::MalformedPartition(format!("vertex {v} appears twice")));
                }
                cell_of[v] = i;
            }
        }
        if let Some(v) = cell_of.iter().position(|&c| c == usize::MAX) {
            return Err(Error::MalformedPartition(format!("vertex {v} is not covered")));
        }
        Ok(Self { cells, cell_of })
    }

    /// Cells from a colour per vertex; cells are ordered by colour value.
    pub fn from_colors(colors: &[usize]) -> Self {
        let mut by_color: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (v, &c) in colors.iter().enumerate() {
            by_color.entry(c).or_default().push(v);
        }
        Self::new(by_color.into_values().collect(), colors.len()).expect("colouring covers all vertices")
    }

    pub fn discrete(order: usize) -> Self {
        Self::new((0..order).map(|v| vec![v]).collect(), order).expect("valid")
    }

    pub fn trivial(order: usize) -> Self {
        Self::new(vec![(0..order).collect()], order).expect("order must be positive")
    }

    /// `{{u}, V \ {u}}`.
    pub fn singleton_seed(order: usize, u: usize) -> Result<Self> {
        if u >= order {
            return Err(Error::VertexOutOfRange(u));
        }
        let mut cells = vec![vec![u]];
        let rest: Vec<usize> = (0..order).filter(|&w| w != u).collect();
        if !rest.is_empty() {
            cells.push(rest);
        }
        Self::new(cells, order)
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn order(&self) -> usize {
        self.cell_of.len()
    }

    pub fn cell_of(&self, v: usize) -> usize {
        self.cell_of[v]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    pub fn is_singleton(&self, v: usize) -> bool {
        self.cells[self.cell_of[v]].len() == 1
    }

    /// Moves `v` into its own cell, placed right after its old cell.
    pub fn isolate(&self, v: usize) -> Result<Self> {
        if v >= self.order() {
            return Err(Error::VertexOutOfRange(v));
        }
        if self.is_singleton(v) {
            return Ok(self.clone());
        }
        let c = self.cell_of[v];
        let mut cells = self.cells.clone();
        cells[c].retain(|&w| w != v);
        cells.insert(c + 1, vec![v]);
        Self::new(cells, self.order())
    }

    /// Cells as sorted sets, sorted by their least element.
    pub fn canonical(&self) -> Vec<Vec<usize>> {
        let mut cells: Vec<Vec<usize>> = self
            .cells
            .iter()
            .map(|c| {
                let mut c = c.clone();
                c.sort_unstable();
                c
            })
            .collect();
        cells.sort();
        cells
    }

    /// Same set of cells, ignoring order.
    pub fn same_cells(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }

    /// Every cell of `self` lies inside a cell of `coarser`.
    pub fn refines(&self, coarser: &Self) -> bool {
        self.order() == coarser.order()
            && self.cells.iter().all(|c| c.iter().all(|&v| coarser.cell_of(v) == coarser.cell_of(c[0])))
    }
}

fn neighbor_counts<L: Clone + fmt::Debug>(g: &SimpleGraph<L>, p: &Partition) -> Vec<Vec<usize>> {
    (0..g.order())
        .map(|v| {
            let mut counts = vec![0usize; p.len()];
            for w in g.neighbors(v) {
                counts[p.cell_of(w)] += 1;
            }
            counts
        })
        .collect()
}

fn check_order<L: Clone + fmt::Debug>(g: &SimpleGraph<L>, p: &Partition) -> Result<()> {
    if p.order() != g.order() {
        return Err(Error::MalformedPartition(format!(
            "partition covers {} vertices, graph has {}",
            p.order(),
            g.order()
        )));
    }
    Ok(())
}

/// Neighbour counts into each cell depend only on the vertex's own cell.
pub fn is_equitable<L: Clone + fmt::Debug>(g: &SimpleGraph<L>, p: &Partition) -> Result<bool> {
    check_order(g, p)?;
    let counts = neighbor_counts(g, p);
    Ok(p.cells().iter().all(|cell| cell.iter().all(|&v| counts[v] == counts[cell[0]])))
}

/// Exact value `coeff * sqrt(radicand)` with `radicand` squarefree.
/// Zero is normalised to radicand 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Surd {
    coeff: Rational64,
    radicand: u64,
}

impl Surd {
    pub fn new(coeff: Rational64, radicand: u64) -> Self {
        if coeff.is_zero() || radicand == 0 {
            return Self::zero();
        }
        let (s, core) = squarefree_decompose(radicand);
        Self { coeff: coeff * Rational64::from_integer(s as i64), radicand: core }
    }

    pub fn zero() -> Self {
        Self { coeff: Rational64::zero(), radicand: 1 }
    }

    pub fn integer(z: i64) -> Self {
        Self::new(Rational64::from_integer(z), 1)
    }

    pub fn rational(r: Rational64) -> Self {
        Self::new(r, 1)
    }

    /// `sqrt(r)` for a nonnegative rational `r = a/b`, written `sqrt(ab)/b`.
    pub fn sqrt_of(r: Rational64) -> Self {
        assert!(!r.is_negative(), "square root of a negative rational");
        let (a, b) = (*r.numer() as u64, *r.denom());
        Self::new(Rational64::new(1, b), a * b as u64)
    }

    pub fn coeff(&self) -> Rational64 {
        self.coeff
    }

    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.radicand == 1
    }

    /// Exact square, always rational.
    pub fn square(&self) -> Rational64 {
        self.coeff * self.coeff * Rational64::from_integer(self.radicand as i64)
    }

    pub fn to_f64(&self) -> f64 {
        self.coeff.to_f64().unwrap() * (self.radicand as f64).sqrt()
    }
}

impl std::ops::Mul for Surd {
    type Output = Surd;

    fn mul(self, rhs: Surd) -> Surd {
        let g = self.radicand.gcd(&rhs.radicand);
        let coeff = self.coeff * rhs.coeff * Rational64::from_integer(g as i64);
        Surd::new(coeff, (self.radicand / g) * (rhs.radicand / g))
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.radicand == 1 {
            return write!(f, "{}", self.coeff);
        }
        if self.coeff == Rational64::one() {
            write!(f, "sqrt({})", self.radicand)
        } else if self.coeff == -Rational64::one() {
            write!(f, "-sqrt({})", self.radicand)
        } else {
            write!(f, "{}*sqrt({})", self.coeff, self.radicand)
        }
    }
}

/// Exact sum of surds, grouped by radicand.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SurdSum(BTreeMap<u64, Rational64>);

impl SurdSum {
    pub fn add(&mut self, s: Surd) {
        if s.is_zero() {
            return;
        }
        let entry = self.0.entry(s.radicand).or_insert_with(Rational64::zero);
        *entry += s.coeff;
        if entry.is_zero() {
            self.0.remove(&s.radicand);
        }
    }

    pub fn terms(&self) -> &BTreeMap<u64, Rational64> {
        &self.0
    }
}

impl From<Surd> for SurdSum {
    fn from(s: Surd) -> Self {
        let mut sum = SurdSum::default();
        sum.add(s);
        sum
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuotientKind {
    Standard,
    Symmetrized,
}

/// Square quotient matrix with exact entries and the cell sizes it came from.
/// `labels` name the cells (proper divisors for the divisor quotient, cell
/// positions otherwise).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientMatrix {
    kind: QuotientKind,
    dim: usize,
    entries: Vec<Surd>,
    sizes: Vec<usize>,
    labels: Vec<u64>,
}

impl QuotientMatrix {
    fn from_integers(rows: &[Vec<i64>], sizes: Vec<usize>, labels: Vec<u64>) -> Self {
        let dim = rows.len();
        let entries = rows.iter().flatten().map(|&z| Surd::integer(z)).collect();
        Self { kind: QuotientKind::Standard, dim, entries, sizes, labels }
    }

    pub fn kind(&self) -> QuotientKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn entry(&self, i: usize, j: usize) -> Surd {
        self.entries[i * self.dim + j]
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim, self.dim, |i, j| self.entry(i, j).to_f64())
    }

    /// Integer entries, when every entry is an integer.
    pub fn integer_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| {
                        let e = self.entry(i, j);
                        (e.is_rational() && e.coeff().is_integer()).then(|| e.coeff().to_integer())
                    })
                    .collect()
            })
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.entry(i, j) == self.entry(j, i)))
    }

    /// Rows and columns rearranged so that new position `k` holds old `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.dim];
        if perm.len() != self.dim || perm.iter().any(|&i| i >= self.dim || std::mem::replace(&mut seen[i], true)) {
            return Err(Error::MalformedPartition(format!("{perm:?} is not a permutation")));
        }
        let entries =
            perm.iter().flat_map(|&i| perm.iter().map(move |&j| (i, j))).map(|(i, j)| self.entry(i, j)).collect();
        Ok(Self {
            kind: self.kind,
            dim: self.dim,
            entries,
            sizes: perm.iter().map(|&i| self.sizes[i]).collect(),
            labels: perm.iter().map(|&i| self.labels[i]).collect(),
        })
    }

    /// Reordered so the labels read `order`.
    pub fn with_label_order(&self, order: &[u64]) -> Result<Self> {
        let perm = order
            .iter()
            .map(|l| {
                self.labels
                    .iter()
                    .position(|x| x == l)
                    .ok_or_else(|| Error::MalformedPartition(format!("unknown cell label {l}")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.permuted(&perm)
    }

    /// Exact square of the matrix, entrywise as surd sums.
    pub fn square_exact(&self) -> Vec<SurdSum> {
        let d = self.dim;
        let mut out = vec![SurdSum::default(); d * d];
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    out[i * d + j].add(self.entry(i, k) * self.entry(k, j));
                }
            }
        }
        out
    }
}

/// `q_ij` = neighbours in cell `j` of any vertex of cell `i`.
pub fn standard_quotient<L: Clone + fmt::Debug>(g: &SimpleGraph<L>, p: &Partition) -> Result<QuotientMatrix> {
    check_order(g, p)?;
    let counts = neighbor_counts(g, p);
    let mut rows = Vec::with_capacity(p.len());
    for cell in p.cells() {
        let row = &counts[cell[0]];
        if cell.iter().any(|&v| &counts[v] != row) {
            return Err(Error::NotEquitable);
        }
        rows.push(row.iter().map(|&c| c as i64).collect());
    }
    Ok(QuotientMatrix::from_integers(&rows, p.sizes(), (0..p.len() as u64).collect()))
}

/// Exact check of `AS = SQ` for the characteristic matrix `S` of `p`.
pub fn verify_quotient_identity<L: Clone + fmt::Debug>(
    g: &SimpleGraph<L>,
    p: &Partition,
    q: &QuotientMatrix,
) -> Result<bool> {
    check_order(g, p)?;
    let rows = q.integer_rows().ok_or(Error::Inconsistent("quotient is not integral".into()))?;
    let counts = neighbor_counts(g, p);
    Ok((0..g.order()).all(|v| {
        let q_row = &rows[p.cell_of(v)];
        counts[v].iter().zip(q_row).all(|(&c, &qv)| c as i64 == qv)
    }))
}

/// Exact checks for an equitable partition with normalised characteristic
/// matrix `T` (columns `1_{V_i}/sqrt|V_i|`): `T^T T = I`, `P = T T^T` is
/// idempotent, and `AP = PA`.
///
/// `P_uv = 1/|V_i|` when `u, v` share cell `V_i`, so every quantity here is
/// rational. Returns whether `A` and `P` commute.
pub fn verify_projector_commutes<L: Clone + fmt::Debug>(g: &SimpleGraph<L>, p: &Partition) -> Result<bool> {
    check_order(g, p)?;
    // T^T T: column norms sum |V_i| * (1/|V_i|) = 1, disjoint supports give 0.
    for cell in p.cells() {
        let inv = Rational64::new(1, cell.len() as i64);
        let norm: Rational64 = cell.iter().map(|_| inv).sum();
        if norm != Rational64::one() {
            return Ok(false);
        }
    }
    // P^2 = P: (P^2)_uv = sum over w in the shared cell of 1/|V|^2 = 1/|V|.
    let counts = neighbor_counts(g, p);
    let n = g.order();
    for u in 0..n {
        for v in 0..n {
            // (AP)_uv = |N(u) ∩ V_{c(v)}| / |V_{c(v)}|, (PA)_uv = |N(v) ∩ V_{c(u)}| / |V_{c(u)}|.
            let (cu, cv) = (p.cell_of(u), p.cell_of(v));
            let ap = Rational64::new(counts[u][cv] as i64, p.cells()[cv].len() as i64);
            let pa = Rational64::new(counts[v][cu] as i64, p.cells()[cu].len() as i64);
            if ap != pa {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `C_ij = sqrt(q_ij q_ji)` for an integral standard quotient.
pub fn symmetrize(q: &QuotientMatrix) -> Result<QuotientMatrix> {
    let rows = q.integer_rows().ok_or(Error::Inconsistent("quotient is not integral".into()))?;
    let dim = q.dim();
    let mut entries = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        for j in 0..dim {
            let prod = rows[i][j] * rows[j][i];
            if prod < 0 {
                return Err(Error::Inconsistent(format!("q_{i}{j} q_{j}{i} is negative")));
            }
            entries.push(Surd::sqrt_of(Rational64::from_integer(prod)));
        }
    }
    Ok(QuotientMatrix {
        kind: QuotientKind::Symmetrized,
        dim,
        entries,
        sizes: q.sizes.clone(),
        labels: q.labels.clone(),
    })
}

/// Divisor quotient `Q` of the zero-divisor graph, built from `n` alone:
/// `q_ij = |V_j|` when `n | d_i d_j` (`i != j`), and `q_ii = |V_i| - 1` for
/// complete cells, 0 for null ones. Cell order follows
/// [`arithmetic::proper_divisors`].
pub fn divisor_quotient(n: u64) -> Result<QuotientMatrix> {
    let divisors = arithmetic::proper_divisors(n)?;
    let sizes: Vec<usize> =
        divisors.iter().map(|&d| arithmetic::totient(n / d).map(|s| s as usize)).collect::<Result<_>>()?;
    let rows: Vec<Vec<i64>> = divisors
        .iter()
        .enumerate()
        .map(|(i, &di)| {
            divisors
                .iter()
                .enumerate()
                .map(|(j, &dj)| {
                    if i == j {
                        if induces_complete(n, di) {
                            sizes[i] as i64 - 1
                        } else {
                            0
                        }
                    } else if (di as u128 * dj as u128).is_multiple_of(n as u128) {
                        sizes[j] as i64
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect();
    Ok(QuotientMatrix::from_integers(&rows, sizes, divisors))
}

/// Symmetrized divisor quotient `C(n)`, in canonical divisor order.
pub fn symmetrized_quotient(n: u64) -> Result<QuotientMatrix> {
    symmetrize(&divisor_quotient(n)?)
}

/// Iterative colour refinement from `seed` until the partition is equitable.
///
/// A vertex's signature is its current colour followed by its neighbour
/// counts into every colour class; new colours are ranks of signatures in
/// lexicographic order, so seed cell order is preserved blockwise.
pub fn coarsest_equitable_refinement<L: Clone + fmt::Debug>(g: &SimpleGraph<L>, seed: &Partition) -> Result<Partition> {
    check_order(g, seed)?;
    let n = g.order();
    let mut colors: Vec<usize> = (0..n).map(|v| seed.cell_of(v)).collect();
    let mut classes = seed.len();
    for _round in 0..=n {
        let signatures: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut counts = vec![0usize; classes];
                for w in g.neighbors(v) {
                    counts[colors[w]] += 1;
                }
                (colors[v], counts)
            })
            .collect();
        let mut distinct: Vec<&(usize, Vec<usize>)> = signatures.iter().collect();
        distinct.sort();
        distinct.dedup();
        if distinct.len() == classes {
            let p = Partition::from_colors(&colors);
            debug_assert!(is_equitable(g, &p)?);
            return Ok(p);
        }
        colors = signatures.iter().map(|s| distinct.binary_search(&s).expect("signature present")).collect();
        classes = distinct.len();
    }
    Err(Error::Inconsistent("colour refinement did not stabilise".into()))
}

/// Cells `D_i` = vertices at distance `i` from `u`.
pub fn distance_partition<L: Clone + fmt::Debug>(g: &SimpleGraph<L>, u: usize) -> Result<Partition> {
    if u >= g.order() {
        return Err(Error::VertexOutOfRange(u));
    }
    let dist = g.distances_from(u);
    let colors = dist.into_iter().collect::<Option<Vec<_>>>().ok_or(Error::Disconnected)?;
    Ok(Partition::from_colors(&colors))
}

/// Divisor partition of `g` together with its standard quotient.
pub fn divisor_partition_quotient(g: &ZnGraph) -> Result<(Partition, QuotientMatrix)> {
    let dp = crate::graph::divisor_partition(g);
    let p = dp.to_partition(g)?;
    let mut q = standard_quotient(g.graph(), &p)?;
    q.labels = dp.divisors();
    Ok((p, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cartesian_product, make_complete, make_path, make_star};

    fn surd_rows(q: &QuotientMatrix) -> Vec<Vec<String>> {
        (0..q.dim()).map(|i| (0..q.dim()).map(|j| q.entry(i, j).to_string()).collect()).collect()
    }

    #[test]
    fn malformed_partitions_rejected() {
        assert!(Partition::new(vec![vec![0, 1], vec![1]], 2).is_err());
        assert!(Partition::new(vec![vec![0]], 2).is_err());
        assert!(Partition::new(vec![vec![0, 1], vec![]], 2).is_err());
        assert!(Partition::new(vec![vec![0, 5]], 2).is_err());
        let g = make_path(3);
        assert!(is_equitable(&g, &Partition::trivial(2)).is_err());
    }

    #[test]
    fn path_partitions() {
        let p3 = make_path(3);
        let ends = Partition::new(vec![vec![0, 2], vec![1]], 3).unwrap();
        assert!(is_equitable(&p3, &ends).unwrap());
        let q = standard_quotient(&p3, &ends).unwrap();
        assert_eq!(q.integer_rows().unwrap(), vec![vec![0, 1], vec![2, 0]]);
        let bad = Partition::new(vec![vec![0, 1], vec![2]], 3).unwrap();
        assert!(!is_equitable(&p3, &bad).unwrap());
        assert_eq!(standard_quotient(&p3, &bad), Err(Error::NotEquitable));
        assert!(is_equitable(&p3, &Partition::discrete(3)).unwrap());
    }

    #[test]
    fn regular_graph_trivial_partition() {
        let k5 = make_complete(5);
        let q = standard_quotient(&k5, &Partition::trivial(5)).unwrap();
        assert_eq!(q.integer_rows().unwrap(), vec![vec![4]]);
        let cep = coarsest_equitable_refinement(&k5, &Partition::trivial(5)).unwrap();
        assert_eq!(cep.len(), 1);
    }

    #[test]
    fn divisor_quotient_of_18() {
        let g = ZnGraph::new(18).unwrap();
        let (p, q) = divisor_partition_quotient(&g).unwrap();
        assert!(verify_quotient_identity(g.graph(), &p, &q).unwrap());
        assert_eq!(q, divisor_quotient(18).unwrap());
        let q = q.with_label_order(&[2, 9, 6, 3]).unwrap();
        assert_eq!(q.integer_rows().unwrap()[1], vec![6, 0, 2, 0]);

        let c = symmetrized_quotient(18).unwrap().with_label_order(&[2, 9, 6, 3]).unwrap();
        assert_eq!(
            surd_rows(&c),
            vec![
                vec!["0", "sqrt(6)", "0", "0"],
                vec!["sqrt(6)", "0", "sqrt(2)", "0"],
                vec!["0", "sqrt(2)", "1", "2"],
                vec!["0", "0", "2", "0"],
            ]
        );
        assert!(c.is_symmetric());
        assert_eq!(c.sizes(), &[6, 1, 2, 2]);
    }

    #[test]
    fn small_symmetrized_quotients() {
        let c4 = symmetrized_quotient(4).unwrap();
        assert_eq!(c4.dim(), 1);
        assert!(c4.entry(0, 0).is_zero());

        for p in [2u64, 5, 7, 11] {
            let n = 3 * p;
            let g = ZnGraph::new(n).unwrap();
            let (u, v) = (g.index_of(p).unwrap(), g.index_of(2 * p).unwrap());
            let rest: Vec<usize> = (0..g.order()).filter(|&w| w != u && w != v).collect();
            let part = Partition::new(vec![vec![u], rest, vec![v]], g.order()).unwrap();
            let c = symmetrize(&standard_quotient(g.graph(), &part).unwrap()).unwrap();
            let s = Surd::sqrt_of(Rational64::from_integer(p as i64 - 1));
            let expected = [[0, 1, 0], [1, 0, 1], [0, 1, 0]];
            for i in 0..3 {
                for j in 0..3 {
                    let e = if expected[i][j] == 1 { s } else { Surd::zero() };
                    assert_eq!(c.entry(i, j), e, "n = {n}");
                }
            }
        }
    }

    #[test]
    fn surd_arithmetic() {
        let r6 = Surd::sqrt_of(Rational64::from_integer(6));
        let r2 = Surd::sqrt_of(Rational64::from_integer(2));
        assert_eq!(r6 * r2, Surd::new(Rational64::from_integer(2), 3));
        assert_eq!(Surd::sqrt_of(Rational64::from_integer(12)).to_string(), "2*sqrt(3)");
        assert_eq!(Surd::sqrt_of(Rational64::new(1, 2)).to_string(), "1/2*sqrt(2)");
        assert_eq!(Surd::sqrt_of(Rational64::from_integer(4)), Surd::integer(2));
        assert_eq!(r6.square(), Rational64::from_integer(6));
        assert_eq!(Surd::zero().to_string(), "0");
    }

    /// `C^2 = D Q^2 D^{-1}` with `D = diag(sqrt|V_i|)`, compared as exact surds.
    #[test]
    fn symmetrized_square_matches_similarity() {
        for n in (4..=200u64).filter(|&n| !arithmetic::is_prime(n)) {
            let q = divisor_quotient(n).unwrap();
            let c = symmetrize(&q).unwrap();
            let rows = q.integer_rows().unwrap();
            let k = q.dim();
            let c2 = c.square_exact();
            for i in 0..k {
                for j in 0..k {
                    let q2: i64 = (0..k).map(|m| rows[i][m] * rows[m][j]).sum();
                    let (si, sj) = (q.sizes()[i] as i64, q.sizes()[j] as i64);
                    let scale = Surd::sqrt_of(Rational64::new(si, sj));
                    let expected = SurdSum::from(Surd::integer(q2) * scale);
                    assert_eq!(c2[i * k + j], expected, "n = {n}, ({i},{j})");
                }
            }
            for i in 0..k {
                for j in 0..k {
                    let sq = c.entry(i, j).square();
                    assert!(sq.is_integer());
                }
            }
        }
    }

    #[test]
    fn exact_quotient_identities_for_divisor_partitions() {
        for n in (4..=200u64).filter(|&n| !arithmetic::is_prime(n)) {
            let g = ZnGraph::new(n).unwrap();
            let (p, q) = divisor_partition_quotient(&g).unwrap();
            assert!(is_equitable(g.graph(), &p).unwrap());
            assert!(verify_quotient_identity(g.graph(), &p, &q).unwrap());
            assert!(verify_projector_commutes(g.graph(), &p).unwrap());
        }
        let p3 = make_path(3);
        let bad = Partition::new(vec![vec![0, 1], vec![2]], 3).unwrap();
        assert!(!verify_projector_commutes(&p3, &bad).unwrap());
    }

    #[test]
    fn refinement_from_a_twin_vertex_in_18() {
        let g = ZnGraph::new(18).unwrap();
        let u = g.index_of(3).unwrap();
        let seed = Partition::singleton_seed(g.order(), u).unwrap();
        let cep = coarsest_equitable_refinement(g.graph(), &seed).unwrap();
        let cell = |xs: &[u64]| xs.iter().map(|&x| g.index_of(x).unwrap()).collect::<Vec<_>>();
        let expected = Partition::new(
            vec![cell(&[3]), cell(&[15]), cell(&[2, 4, 8, 10, 14, 16]), cell(&[9]), cell(&[6, 12])],
            g.order(),
        )
        .unwrap();
        assert!(cep.same_cells(&expected), "{:?}", cep.canonical());
    }

    #[test]
    fn refinement_is_stable_and_refines_seed() {
        for n in (4..=120u64).filter(|&n| !arithmetic::is_prime(n)) {
            let g = ZnGraph::new(n).unwrap();
            for u in [0, g.order() / 2, g.order() - 1] {
                let seed = Partition::singleton_seed(g.order(), u).unwrap();
                let cep = coarsest_equitable_refinement(g.graph(), &seed).unwrap();
                assert!(is_equitable(g.graph(), &cep).unwrap());
                assert!(cep.refines(&seed));
                let again = coarsest_equitable_refinement(g.graph(), &cep).unwrap();
                assert!(again.same_cells(&cep));
                // The distance partition is refined by the equitable one.
                let dist = distance_partition(g.graph(), u).unwrap();
                assert!(cep.refines(&dist), "n = {n}");
            }
        }
    }

    #[test]
    fn prism_over_star() {
        // Vertex (i, j) has index 5i + j; star centre is j = 0.
        let g = cartesian_product(&make_path(2), &make_star(5));
        let (a, b) = (0usize, 5usize);
        let l0: Vec<usize> = (1..5).collect();
        let l1: Vec<usize> = (6..10).collect();

        let da = distance_partition(&g, a).unwrap();
        let mut near = vec![b];
        near.extend(&l0);
        assert!(da.same_cells(&Partition::new(vec![vec![a], near, l1.clone()], 10).unwrap()));
        let db = distance_partition(&g, b).unwrap();
        assert!(!da.same_cells(&db));

        let pa = coarsest_equitable_refinement(&g, &Partition::singleton_seed(10, a).unwrap()).unwrap();
        let pb = coarsest_equitable_refinement(&g, &Partition::singleton_seed(10, b).unwrap()).unwrap();
        let expected = Partition::new(vec![vec![a], vec![b], l0, l1], 10).unwrap();
        assert!(pa.same_cells(&expected));
        assert!(pb.same_cells(&expected));
    }

    #[test]
    fn complete_graph_distance_partition() {
        let k4 = make_complete(4);
        let d = distance_partition(&k4, 2).unwrap();
        assert!(d.same_cells(&Partition::new(vec![vec![2], vec![0, 1, 3]], 4).unwrap()));
        let disconnected = SimpleGraph::<usize>::empty(vec![0, 1]);
        assert_eq!(distance_partition(&disconnected, 0), Err(Error::Disconnected));
    }

    #[test]
    fn isolate_splits_a_cell() {
        let p = Partition::new(vec![vec![0, 1], vec![2]], 3).unwrap();
        let q = p.isolate(1).unwrap();
        assert_eq!(q.cells(), &[vec![0], vec![1], vec![2]]);
        assert!(q.is_singleton(0));
    }
}
