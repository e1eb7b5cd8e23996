//! Spectra of zero-divisor graphs, exact and numeric.
//!
//! The exact side works on the divisor quotient `Q`: its characteristic
//! polynomial (which equals that of the symmetrized `C`), a factorization
//! into integer, quadratic and residual parts, and local minimal polynomials
//! of the cell indicator vectors, which give eigenvalue supports without any
//! floating point decision. The numeric side is a dense symmetric
//! eigendecomposition with clustered eigenvalues and spectral projectors.

use std::fmt;
use std::ops::Range;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_traits::Zero;

use crate::arithmetic;
use crate::error::{Error, Result};
use crate::graph::{CellKind, DivisorPartition, SimpleGraph};
use crate::partitions::{divisor_quotient, symmetrize, QuotientMatrix};
use crate::poly::{self, FactorKind, IntPoly, PolyFactor};

/// Relative gap below which sorted eigenvalues are merged into one cluster.
pub const CLUSTER_RELATIVE_TOL: f64 = 1e-7;
/// `||E_j e_u||` above this counts as support.
pub const SUPPORT_THRESHOLD: f64 = 1e-8;

/// Exact or tagged-numeric eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EigenvalueRepr {
    ExactInteger(i64),
    /// `(a + b sqrt(delta)) / 2`, `b != 0`, `delta > 1` squarefree.
    ExactQuadratic {
        a: i64,
        b: i64,
        delta: u64,
    },
    /// Root of the residual factor with index `factor` in the factor list.
    Numeric {
        value: f64,
        factor: usize,
    },
}

impl EigenvalueRepr {
    pub fn value(&self) -> f64 {
        match *self {
            Self::ExactInteger(z) => z as f64,
            Self::ExactQuadratic { a, b, delta } => (a as f64 + b as f64 * (delta as f64).sqrt()) / 2.0,
            Self::Numeric { value, .. } => value,
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Self::Numeric { .. })
    }

    /// Equality that is exact for exact values and tolerance-based otherwise.
    pub fn same_as(&self, other: &Self) -> bool {
        match (self, other) {
            (Self::Numeric { value: x, factor: f }, Self::Numeric { value: y, factor: g }) => {
                f == g && (x - y).abs() <= 1e-9 * x.abs().max(1.0)
            }
            _ => self == other,
        }
    }

    pub fn exact_integer(&self) -> Option<i64> {
        match *self {
            Self::ExactInteger(z) => Some(z),
            _ => None,
        }
    }

    /// Short tag used in reports.
    pub fn tag(&self) -> &'static str {
        match self {
            Self::ExactInteger(_) => "integer",
            Self::ExactQuadratic { .. } => "quadratic",
            Self::Numeric { .. } => "numeric",
        }
    }
}

fn halves(k: i64) -> String {
    if k % 2 == 0 {
        (k / 2).to_string()
    } else {
        format!("{k}/2")
    }
}

impl fmt::Display for EigenvalueRepr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::ExactInteger(z) => write!(f, "{z}"),
            Self::ExactQuadratic { a, b, delta } => {
                let root = match b.abs() {
                    2 => format!("sqrt({delta})"),
                    m => format!("{}*sqrt({delta})", halves(m)),
                };
                match (a, b < 0) {
                    (0, false) => write!(f, "{root}"),
                    (0, true) => write!(f, "-{root}"),
                    (_, neg) => write!(f, "{} {} {root}", halves(a), if neg { "-" } else { "+" }),
                }
            }
            Self::Numeric { value, .. } => write!(f, "{value:.12}"),
        }
    }
}

/// Eigenvalues with multiplicities, ascending by value.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    entries: Vec<(EigenvalueRepr, usize)>,
}

impl Spectrum {
    pub fn new(mut entries: Vec<(EigenvalueRepr, usize)>) -> Self {
        entries.retain(|&(_, m)| m > 0);
        entries.sort_by(|a, b| a.0.value().total_cmp(&b.0.value()));
        let mut merged: Vec<(EigenvalueRepr, usize)> = Vec::with_capacity(entries.len());
        for (v, m) in entries {
            match merged.last_mut() {
                Some((w, k)) if w.same_as(&v) => *k += m,
                _ => merged.push((v, m)),
            }
        }
        Self { entries: merged }
    }

    pub fn entries(&self) -> &[(EigenvalueRepr, usize)] {
        &self.entries
    }

    pub fn order(&self) -> usize {
        self.entries.iter().map(|&(_, m)| m).sum()
    }

    pub fn multiplicity_of(&self, z: i64) -> usize {
        self.entries.iter().find(|(v, _)| *v == EigenvalueRepr::ExactInteger(z)).map_or(0, |&(_, m)| m)
    }

    /// All eigenvalues repeated by multiplicity, ascending.
    pub fn expanded(&self) -> Vec<f64> {
        self.entries.iter().flat_map(|&(v, m)| std::iter::repeat_n(v.value(), m)).collect()
    }

    pub fn largest(&self) -> Option<EigenvalueRepr> {
        self.entries.last().map(|&(v, _)| v)
    }
}

/// Ascending eigenvalues and matching orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
}

/// Dense symmetric eigendecomposition, eigenvalues ascending.
///
/// Reconstruction `||V diag(w) V^T - M||_max <= 1e-9 ||M||_max` is checked in
/// full up to 600 rows; above that it is checked on fixed probe vectors.
pub fn eigendecompose(m: &DMatrix<f64>) -> Result<EigenDecomposition> {
    if !m.is_square() {
        return Err(Error::NotSquare(m.nrows(), m.ncols()));
    }
    let asym = max_abs(&(m - m.transpose()));
    if asym > 1e-12 * max_abs(m).max(1.0) {
        return Err(Error::NotSymmetric(asym));
    }
    let n = m.nrows();
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);

    let scale = max_abs(m).max(f64::MIN_POSITIVE);
    let err = if n <= 600 {
        let lambda = DMatrix::from_diagonal(&DVector::from_vec(values.clone()));
        max_abs(&(&vectors * lambda * vectors.transpose() - m))
    } else {
        let lambda = DVector::from_vec(values.clone());
        (1..=3)
            .map(|k| {
                let x = DVector::from_fn(n, |i, _| ((k * (i + 1)) as f64).sin());
                let vx = vectors.transpose() * &x;
                let y = &vectors * vx.component_mul(&lambda) - m * &x;
                y.amax() / x.amax()
            })
            .fold(0.0, f64::max)
    };
    if err > 1e-9 * scale.max(1.0) {
        return Err(Error::Reconstruction(err));
    }
    Ok(EigenDecomposition { values, vectors })
}

/// Index ranges of sorted values whose consecutive gaps are at most `tol`.
pub fn cluster_sorted(values: &[f64], tol: f64) -> Vec<Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for k in 1..=values.len() {
        if k == values.len() || values[k] - values[k - 1] > tol {
            out.push(start..k);
            start = k;
        }
    }
    out
}

/// One eigenvalue cluster: mean value and column range in the eigenvector matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    pub value: f64,
    pub columns: Range<usize>,
}

impl Cluster {
    pub fn multiplicity(&self) -> usize {
        self.columns.len()
    }
}

/// Spectral decomposition `M = sum_j lambda_j E_j` of a dense symmetric matrix.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eig: EigenDecomposition,
    clusters: Vec<Cluster>,
}

impl SpectralDecomposition {
    pub fn new(m: &DMatrix<f64>) -> Result<Self> {
        let eig = eigendecompose(m)?;
        let scale = eig.values.iter().fold(0.0f64, |a, x| a.max(x.abs())).max(1.0);
        let clusters = cluster_sorted(&eig.values, CLUSTER_RELATIVE_TOL * scale)
            .into_iter()
            .map(|r| Cluster { value: eig.values[r.clone()].iter().sum::<f64>() / r.len() as f64, columns: r })
            .collect();
        Ok(Self { eig, clusters })
    }

    pub fn of_graph<L: Clone + fmt::Debug>(g: &SimpleGraph<L>) -> Result<Self> {
        Self::new(&g.adjacency_matrix())
    }

    pub fn order(&self) -> usize {
        self.eig.values.len()
    }

    pub fn eigen(&self) -> &EigenDecomposition {
        &self.eig
    }

    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.clusters.iter().map(|c| c.value).collect()
    }

    /// `(E_j)_{uv}`.
    pub fn projector_entry(&self, j: usize, u: usize, v: usize) -> f64 {
        let v_ = &self.eig.vectors;
        self.clusters[j].columns.clone().map(|k| v_[(u, k)] * v_[(v, k)]).sum()
    }

    pub fn projector(&self, j: usize) -> DMatrix<f64> {
        let cols = self.eig.vectors.columns_range(self.clusters[j].columns.clone());
        cols * cols.transpose()
    }

    /// `||E_j (a e_u + b e_v)||`, computed as `||V_j^T (a e_u + b e_v)||`.
    pub fn component_norm(&self, j: usize, u: usize, a: f64, v: usize, b: f64) -> f64 {
        let v_ = &self.eig.vectors;
        self.clusters[j].columns.clone().map(|k| (a * v_[(u, k)] + b * v_[(v, k)]).powi(2)).sum::<f64>().sqrt()
    }

    /// Cluster indices `j` with `||E_j e_u|| > SUPPORT_THRESHOLD`.
    pub fn support(&self, u: usize) -> Vec<usize> {
        (0..self.clusters.len()).filter(|&j| self.component_norm(j, u, 1.0, u, 0.0) > SUPPORT_THRESHOLD).collect()
    }

    /// Splits the joint support into `E_j e_u = E_j e_v` and `E_j e_u = -E_j e_v`
    /// clusters, or `None` when some cluster satisfies neither.
    pub fn strong_cospectral_split(&self, u: usize, v: usize) -> Option<NumericSupportSplit> {
        let mut split = NumericSupportSplit::default();
        for j in 0..self.clusters.len() {
            let nu = self.component_norm(j, u, 1.0, u, 0.0);
            let nv = self.component_norm(j, v, 1.0, v, 0.0);
            if nu <= SUPPORT_THRESHOLD && nv <= SUPPORT_THRESHOLD {
                continue;
            }
            if self.component_norm(j, u, 1.0, v, -1.0) <= SUPPORT_THRESHOLD {
                split.plus.push(j);
            } else if self.component_norm(j, u, 1.0, v, 1.0) <= SUPPORT_THRESHOLD {
                split.minus.push(j);
            } else {
                return None;
            }
        }
        Some(split)
    }
}

/// Cluster indices of a numeric strong-cospectrality split.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NumericSupportSplit {
    pub plus: Vec<usize>,
    pub minus: Vec<usize>,
}

/// Exact spectral data of the divisor quotient of `n`.
#[derive(Debug, Clone)]
pub struct QuotientSpectrum {
    n: u64,
    cells: DivisorPartition,
    standard: QuotientMatrix,
    symmetrized: QuotientMatrix,
    rows: Vec<Vec<i64>>,
    charpoly: IntPoly,
    factors: Vec<PolyFactor>,
    spectrum: Spectrum,
    numeric: SpectralDecomposition,
}

impl QuotientSpectrum {
    pub fn new(n: u64) -> Result<Self> {
        let cells = DivisorPartition::for_modulus(n)?;
        let standard = divisor_quotient(n)?;
        let symmetrized = symmetrize(&standard)?;
        let rows = standard.integer_rows().expect("divisor quotient is integral");
        let charpoly = poly::charpoly(&rows)?;
        let numeric = SpectralDecomposition::new(&symmetrized.to_f64())?;
        let factors = poly::factor_with_hints(&charpoly, &numeric.eig.values)?;
        let spectrum = assign_roots(&factors, &numeric.eig.values)?;
        Ok(Self { n, cells, standard, symmetrized, rows, charpoly, factors, spectrum, numeric })
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn cells(&self) -> &DivisorPartition {
        &self.cells
    }

    pub fn standard(&self) -> &QuotientMatrix {
        &self.standard
    }

    pub fn symmetrized(&self) -> &QuotientMatrix {
        &self.symmetrized
    }

    pub fn charpoly(&self) -> &IntPoly {
        &self.charpoly
    }

    pub fn factors(&self) -> &[PolyFactor] {
        &self.factors
    }

    /// `sigma(C)` with multiplicities.
    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn numeric(&self) -> &SpectralDecomposition {
        &self.numeric
    }

    /// Exact test of `phi_C(theta) = 0`.
    pub fn contains(&self, theta: i64) -> bool {
        poly::has_root(&self.charpoly, theta)
    }

    /// Exact `phi_C(x)` at an integer.
    pub fn charpoly_at(&self, x: i64) -> num_bigint::BigInt {
        self.charpoly.eval_i64(x)
    }

    /// Minimal polynomial of the indicator `e_i` of cell `i` under `Q`.
    pub fn cell_minimal_polynomial(&self, i: usize) -> Result<IntPoly> {
        poly::local_minimal_polynomial(&self.rows, i)
    }

    /// Eigenvalues of `C` in the support of cell `i`: the roots of its local
    /// minimal polynomial. Exact roots are decided by division; residual
    /// roots are located numerically and their count is checked against the
    /// degree left after removing the exact factors.
    pub fn cell_support(&self, i: usize) -> Result<Vec<EigenvalueRepr>> {
        let mu = self.cell_minimal_polynomial(i)?;
        let mut rest = mu.clone();
        let mut support = Vec::new();
        let mut numeric_expected = false;
        for (idx, f) in self.factors.iter().enumerate() {
            match f.kind {
                FactorKind::Linear(r) => {
                    if let Some(q) = rest.div_exact(&f.poly) {
                        rest = q;
                        support.push(EigenvalueRepr::ExactInteger(r));
                    }
                }
                FactorKind::Quadratic { a, b, delta } => {
                    if let Some(q) = rest.div_exact(&f.poly) {
                        rest = q;
                        support.push(EigenvalueRepr::ExactQuadratic { a, b: -b, delta });
                        support.push(EigenvalueRepr::ExactQuadratic { a, b, delta });
                    }
                }
                FactorKind::Residual => numeric_expected = idx == self.factors.len() - 1,
            }
        }
        let residual_degree = rest.degree().unwrap_or(0);
        if residual_degree > 0 {
            if !numeric_expected {
                return Err(Error::Inconsistent(format!("minimal polynomial {mu} has an unmatched factor")));
            }
            let residual_id = self.factors.len() - 1;
            let roots: Vec<EigenvalueRepr> = self
                .spectrum
                .entries()
                .iter()
                .filter_map(|&(v, _)| match v {
                    EigenvalueRepr::Numeric { factor, .. } if factor == residual_id => Some(v),
                    _ => None,
                })
                .filter(|v| self.numeric_support_contains(i, v.value()))
                .collect();
            if roots.len() != residual_degree {
                return Err(Error::Inconsistent(format!(
                    "cell {i}: {} numeric support roots, residual degree {residual_degree}",
                    roots.len()
                )));
            }
            support.extend(roots);
        }
        support.sort_by(|a, b| a.value().total_cmp(&b.value()));
        Ok(support)
    }

    /// `||E_j e_i||` under `C` for the cluster nearest `x`.
    fn numeric_support_contains(&self, i: usize, x: f64) -> bool {
        let j = self
            .numeric
            .clusters
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1.value - x).abs().total_cmp(&(b.1.value - x).abs()))
            .map(|(j, _)| j)
            .expect("nonempty spectrum");
        self.numeric.component_norm(j, i, 1.0, i, 0.0) > SUPPORT_THRESHOLD
    }

    /// Exact support `Phi_u` of a vertex in cell `i`: the quotient support plus
    /// the twin eigenvalue when the cell has at least two members.
    pub fn vertex_support(&self, i: usize) -> Result<Vec<EigenvalueRepr>> {
        let mut s = self.cell_support(i)?;
        let cell = &self.cells.cells()[i];
        let theta = EigenvalueRepr::ExactInteger(cell.twin_eigenvalue());
        if cell.size() >= 2 && !s.contains(&theta) {
            s.push(theta);
            s.sort_by(|a, b| a.value().total_cmp(&b.value()));
        }
        Ok(s)
    }
}

/// Pairs each exact factor with its roots and attaches leftover numeric
/// eigenvalues to the residual factor.
fn assign_roots(factors: &[PolyFactor], numeric: &[f64]) -> Result<Spectrum> {
    let mut remaining: Vec<f64> = numeric.to_vec();
    let mut entries = Vec::new();
    let scale = numeric.iter().fold(1.0f64, |a, x| a.max(x.abs()));
    let take = |x: f64, remaining: &mut Vec<f64>| -> Result<()> {
        let k = remaining
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - x).abs().total_cmp(&(b.1 - x).abs()))
            .map(|(k, _)| k)
            .ok_or_else(|| Error::Inconsistent("more exact roots than eigenvalues".into()))?;
        if (remaining[k] - x).abs() > 1e-6 * scale {
            return Err(Error::Inconsistent(format!("exact root {x} has no numeric partner")));
        }
        remaining.swap_remove(k);
        Ok(())
    };
    let mut residual = None;
    for (idx, f) in factors.iter().enumerate() {
        let roots = match f.kind {
            FactorKind::Linear(r) => vec![EigenvalueRepr::ExactInteger(r)],
            FactorKind::Quadratic { a, b, delta } => {
                vec![EigenvalueRepr::ExactQuadratic { a, b: -b, delta }, EigenvalueRepr::ExactQuadratic { a, b, delta }]
            }
            FactorKind::Residual => {
                residual = Some((idx, f.poly.degree().unwrap_or(0)));
                continue;
            }
        };
        for r in roots {
            for _ in 0..f.multiplicity {
                take(r.value(), &mut remaining)?;
            }
            entries.push((r, f.multiplicity));
        }
    }
    match residual {
        Some((idx, deg)) if deg == remaining.len() => {
            remaining.sort_by(f64::total_cmp);
            for r in cluster_sorted(&remaining, CLUSTER_RELATIVE_TOL * scale) {
                let value = remaining[r.clone()].iter().sum::<f64>() / r.len() as f64;
                entries.push((EigenvalueRepr::Numeric { value, factor: idx }, r.len()));
            }
        }
        None if remaining.is_empty() => {}
        _ => return Err(Error::Inconsistent("residual degree does not match leftover eigenvalues".into())),
    }
    Ok(Spectrum::new(entries))
}

/// Exact `phi_C(theta) = 0` test for the quotient of `n`.
pub fn quotient_contains(n: u64, theta: i64) -> Result<bool> {
    let rows = divisor_quotient(n)?.integer_rows().expect("integral");
    Ok(poly::charpoly(&rows)?.eval_i64(theta).is_zero())
}

/// Multiplicities of the twin eigenvalues: `m1 = sum (|V_d| - 1)` over null
/// cells, `m2` the same over complete cells.
pub fn twin_multiplicities(cells: &DivisorPartition) -> (usize, usize) {
    let mut m = (0, 0);
    for c in cells.cells() {
        match c.kind {
            CellKind::Null => m.0 += c.size() - 1,
            CellKind::Complete => m.1 += c.size() - 1,
        }
    }
    m
}

/// `sigma = {0^m1, (-1)^m2} ∪ sigma(C)`.
pub fn spectrum_via_quotient(q: &QuotientSpectrum) -> Spectrum {
    let (m1, m2) = twin_multiplicities(q.cells());
    let mut entries = q.spectrum().entries().to_vec();
    entries.push((EigenvalueRepr::ExactInteger(0), m1));
    entries.push((EigenvalueRepr::ExactInteger(-1), m2));
    Spectrum::new(entries)
}

/// Spectrum of the zero-divisor graph of `Z_n` assembled from the quotient.
pub fn spectrum_via_theorem(n: u64) -> Result<Spectrum> {
    Ok(spectrum_via_quotient(&QuotientSpectrum::new(n)?))
}

/// Exact split of the support of a size-2 cell `{u, v}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportDecomposition {
    pub pair: (u64, u64),
    pub theta: i64,
    pub plus: Vec<EigenvalueRepr>,
    pub minus: Vec<EigenvalueRepr>,
}

/// Strong cospectrality of two vertices, decided from the quotient.
#[derive(Debug, Clone, PartialEq)]
pub enum Cospectrality {
    Strong(SupportDecomposition),
    NotStrong(&'static str),
    /// Different cells while `-1` is a quotient eigenvalue; no exact rule applies.
    Undetermined,
}

/// Exact strong-cospectrality test for residues `x, y` of `Z_n`.
///
/// A size-2 cell `{u, v}` is strongly cospectral iff its local minimal
/// polynomial does not vanish at the twin eigenvalue `theta`; then the plus
/// set is the quotient support and the minus set is `{theta}`.
pub fn strong_cospectral_decomposition(q: &QuotientSpectrum, x: u64, y: u64) -> Result<Cospectrality> {
    let n = q.modulus();
    let (Some(i), Some(j)) = (q.cells().cell_of_residue(x), q.cells().cell_of_residue(y)) else {
        let bad = if q.cells().cell_of_residue(x).is_none() { x } else { y };
        return Err(Error::NotAVertex { x: bad, n });
    };
    if x == y {
        return Err(Error::SameVertex(x as usize));
    }
    if i != j {
        return Ok(if q.contains(-1) {
            Cospectrality::Undetermined
        } else {
            Cospectrality::NotStrong("vertices lie in different cells")
        });
    }
    let cell = &q.cells().cells()[i];
    if cell.size() > 2 {
        return Ok(Cospectrality::NotStrong("cell has more than two vertices"));
    }
    let theta = cell.twin_eigenvalue();
    let mu = q.cell_minimal_polynomial(i)?;
    if poly::has_root(&mu, theta) {
        return Ok(Cospectrality::NotStrong("twin eigenvalue lies in the cell's quotient support"));
    }
    Ok(Cospectrality::Strong(SupportDecomposition {
        pair: (x.min(y), x.max(y)),
        theta,
        plus: q.cell_support(i)?,
        minus: vec![EigenvalueRepr::ExactInteger(theta)],
    }))
}

/// Number of distinct proper divisors `d(n) - 2`, i.e. the quotient order.
pub fn quotient_order(n: u64) -> Result<usize> {
    Ok(arithmetic::proper_divisors(n)?.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_complete, make_complete_bipartite, make_path, ZnGraph};

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn dense_eigendecomposition_examples() {
        let e = eigendecompose(&make_path(3).adjacency_matrix()).unwrap();
        let r2 = 2f64.sqrt();
        assert_close(&e.values, &[-r2, 0.0, r2], 1e-12);
        let e = eigendecompose(&make_complete_bipartite(2, 4).adjacency_matrix()).unwrap();
        let r8 = 8f64.sqrt();
        assert_close(&e.values, &[-r8, 0.0, 0.0, 0.0, 0.0, r8], 1e-12);
        let asym = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(eigendecompose(&asym), Err(Error::NotSymmetric(_))));
    }

    #[test]
    fn quotient_eigenvalues_match_charpoly() {
        let q = QuotientSpectrum::new(18).unwrap();
        for &x in &q.numeric().eigen().values {
            let v = q.charpoly().eval_f64(x);
            let deriv_scale: f64 = q.numeric().eigen().values.iter().map(|y| (x - y).abs().max(1.0)).product();
            assert!(v.abs() <= 1e-9 * deriv_scale, "phi({x}) = {v}");
        }
        assert_eq!(q.charpoly().degree(), Some(4));
        // Perron root of the 18 quotient is about 3.399.
        assert!((q.spectrum().largest().unwrap().value() - 3.399).abs() < 1e-3);
    }

    #[test]
    fn spectrum_of_18() {
        let s = spectrum_via_theorem(18).unwrap();
        assert_eq!(s.order(), 11);
        assert_eq!(s.multiplicity_of(0), 6);
        assert_eq!(s.multiplicity_of(-1), 1);
        let q = QuotientSpectrum::new(18).unwrap();
        assert_eq!(twin_multiplicities(q.cells()), (6, 1));
    }

    #[test]
    fn spectrum_prime_square_and_pq() {
        for p in [3i64, 5, 7, 11] {
            let s = spectrum_via_theorem((p * p) as u64).unwrap();
            assert_eq!(
                s.entries(),
                &[(EigenvalueRepr::ExactInteger(-1), p as usize - 2), (EigenvalueRepr::ExactInteger(p - 2), 1)]
            );
        }
        for (p, q) in [(3u64, 5u64), (5, 7), (2, 7), (3, 11)] {
            let s = spectrum_via_theorem(p * q).unwrap();
            let prod = (p - 1) * (q - 1);
            let r = (prod as f64).sqrt();
            let mut expected = vec![-r];
            expected.extend(std::iter::repeat_n(0.0, (p + q - 4) as usize));
            expected.push(r);
            assert_close(&s.expanded(), &expected, 1e-12);
        }
    }

    #[test]
    fn quotient_of_4_is_zero() {
        let q = QuotientSpectrum::new(4).unwrap();
        assert_eq!(q.charpoly(), &IntPoly::x());
        assert!(q.contains(0));
        assert!(quotient_contains(4, 0).unwrap());
        assert!(!quotient_contains(12, -1).unwrap());
        assert!(!quotient_contains(30, -1).unwrap());
    }

    #[test]
    fn spectrum_theorem_against_dense_small() {
        for n in (4..=120u64).filter(|&n| !arithmetic::is_prime(n)) {
            let s = spectrum_via_theorem(n).unwrap().expanded();
            let g = ZnGraph::new(n).unwrap();
            let dense = eigendecompose(&g.graph().adjacency_matrix()).unwrap().values;
            assert_close(&s, &dense, 1e-8);
        }
    }

    #[test]
    fn projectors_of_k2() {
        let sd = SpectralDecomposition::of_graph(&make_complete(2)).unwrap();
        assert_eq!(sd.clusters().len(), 2);
        let minus = sd.projector(0);
        let plus = sd.projector(1);
        for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            assert!((plus[(i, j)] - 0.5).abs() < 1e-12);
            let s = if i == j { 0.5 } else { -0.5 };
            assert!((minus[(i, j)] - s).abs() < 1e-12);
        }
        let g9 = ZnGraph::new(9).unwrap();
        let sd9 = SpectralDecomposition::of_graph(g9.graph()).unwrap();
        assert!((sd9.projector(1) - plus).amax() < 1e-12);
    }

    #[test]
    fn projectors_resolve_identity() {
        let g = ZnGraph::new(18).unwrap();
        let sd = SpectralDecomposition::of_graph(g.graph()).unwrap();
        let n = g.order();
        let mut total = DMatrix::zeros(n, n);
        for j in 0..sd.clusters().len() {
            let ej = sd.projector(j);
            assert!((&ej * &ej - &ej).amax() < 1e-9);
            for k in 0..j {
                assert!((&ej * sd.projector(k)).amax() < 1e-9);
            }
            total += ej;
        }
        assert!((total - DMatrix::identity(n, n)).amax() < 1e-10);
    }

    #[test]
    fn supports_in_examples() {
        let q18 = QuotientSpectrum::new(18).unwrap();
        let i9 = q18.cells().position_of_divisor(9).unwrap();
        let s = q18.vertex_support(i9).unwrap();
        assert!(!s.contains(&EigenvalueRepr::ExactInteger(0)));
        assert!(!s.contains(&EigenvalueRepr::ExactInteger(-1)));

        let q21 = QuotientSpectrum::new(21).unwrap();
        let i7 = q21.cells().position_of_divisor(7).unwrap();
        let s = q21.vertex_support(i7).unwrap();
        let r12 = EigenvalueRepr::ExactQuadratic { a: 0, b: 4, delta: 3 };
        let m12 = EigenvalueRepr::ExactQuadratic { a: 0, b: -4, delta: 3 };
        assert_eq!(s, vec![m12, EigenvalueRepr::ExactInteger(0), r12]);
        assert_eq!(r12.to_string(), "2*sqrt(3)");

        let q27 = QuotientSpectrum::new(27).unwrap();
        let i9 = q27.cells().position_of_divisor(9).unwrap();
        let s = q27.vertex_support(i9).unwrap();
        let ints: Vec<i64> = s.iter().map(|v| v.exact_integer().unwrap()).collect();
        assert_eq!(ints, vec![-3, -1, 4]);
    }

    #[test]
    fn exact_and_numeric_supports_agree() {
        for n in (4..=150u64).filter(|&n| !arithmetic::is_prime(n)) {
            let q = QuotientSpectrum::new(n).unwrap();
            let g = ZnGraph::new(n).unwrap();
            let sd = SpectralDecomposition::of_graph(g.graph()).unwrap();
            for (i, cell) in q.cells().cells().iter().enumerate() {
                let exact = q.vertex_support(i).unwrap();
                let u = g.index_of(cell.members[0]).unwrap();
                let numeric: Vec<f64> = sd.support(u).into_iter().map(|j| sd.clusters()[j].value).collect();
                let exact_values: Vec<f64> = exact.iter().map(EigenvalueRepr::value).collect();
                assert_close(&exact_values, &numeric, 1e-7);
            }
        }
    }

    #[test]
    fn strong_cospectrality_examples() {
        let q21 = QuotientSpectrum::new(21).unwrap();
        let Cospectrality::Strong(d) = strong_cospectral_decomposition(&q21, 7, 14).unwrap() else {
            panic!("7, 14 should be strongly cospectral");
        };
        assert_eq!(d.minus, vec![EigenvalueRepr::ExactInteger(0)]);
        assert_eq!(d.plus.len(), 2);
        assert!(d.plus.iter().all(|v| (v.value().abs() - 12f64.sqrt()).abs() < 1e-12));

        let q27 = QuotientSpectrum::new(27).unwrap();
        let Cospectrality::Strong(d) = strong_cospectral_decomposition(&q27, 9, 18).unwrap() else {
            panic!("9, 18 should be strongly cospectral");
        };
        assert_eq!(d.plus, vec![EigenvalueRepr::ExactInteger(-3), EigenvalueRepr::ExactInteger(4)]);
        assert_eq!(d.minus, vec![EigenvalueRepr::ExactInteger(-1)]);

        let q18 = QuotientSpectrum::new(18).unwrap();
        assert!(matches!(strong_cospectral_decomposition(&q18, 2, 3).unwrap(), Cospectrality::NotStrong(_)));
        assert!(strong_cospectral_decomposition(&q18, 5, 3).is_err());
    }

    #[test]
    fn numeric_split_matches_exact_split() {
        let g = ZnGraph::new(27).unwrap();
        let sd = SpectralDecomposition::of_graph(g.graph()).unwrap();
        let (u, v) = (g.index_of(9).unwrap(), g.index_of(18).unwrap());
        let split = sd.strong_cospectral_split(u, v).unwrap();
        let plus: Vec<f64> = split.plus.iter().map(|&j| sd.clusters()[j].value).collect();
        let minus: Vec<f64> = split.minus.iter().map(|&j| sd.clusters()[j].value).collect();
        assert_close(&plus, &[-3.0, 4.0], 1e-9);
        assert_close(&minus, &[-1.0], 1e-9);
        assert!(sd.strong_cospectral_split(g.index_of(3).unwrap(), g.index_of(6).unwrap()).is_none());
    }

    #[test]
    fn quadratic_display() {
        let v = EigenvalueRepr::ExactQuadratic { a: 1, b: -3, delta: 5 };
        assert_eq!(v.to_string(), "1/2 - 3/2*sqrt(5)");
        let w = EigenvalueRepr::ExactQuadratic { a: -2, b: 2, delta: 2 };
        assert_eq!(w.to_string(), "-1 + sqrt(2)");
    }
}
