//! Continuous-time quantum walks `H(t) = exp(itA)`.
//!
//! Amplitudes come from the spectral decomposition:
//! `H(t)_{uv} = sum_j exp(it lambda_j) (E_j)_{uv}`. For repeated evaluation at
//! one pair the projector entries are summed once per cluster, so each time
//! costs `O(#clusters)`. Some texts use `exp(-itA)`; its entries are the
//! complex conjugates of these, so every modulus below is unchanged.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::partitions::{is_equitable, standard_quotient, symmetrize, Partition};
use crate::spectral::SpectralDecomposition;

/// Amplitude threshold for deciding that `|alpha|`, `|beta|` are nonzero or one.
pub const AMP_THRESHOLD: f64 = 1e-6;
/// Largest `|1 - |alpha|^2 - |beta|^2|` accepted as fractional revival.
pub const FR_THRESHOLD: f64 = 1e-6;

/// `H(t)` as a dense complex matrix.
#[derive(Debug, Clone)]
pub struct TransitionMatrix {
    pub t: f64,
    pub h: DMatrix<Complex64>,
}

impl TransitionMatrix {
    /// `||H H^* - I||_max`.
    pub fn unitarity_error(&self) -> f64 {
        let n = self.h.nrows();
        let prod = &self.h * self.h.adjoint();
        (prod - DMatrix::<Complex64>::identity(n, n)).iter().fold(0.0, |a, z| a.max(z.norm()))
    }

    pub fn symmetry_error(&self) -> f64 {
        (&self.h - self.h.transpose()).iter().fold(0.0, |a, z| a.max(z.norm()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrKind {
    Pst,
    ProperFr,
    Periodic,
    NoFr,
}

impl fmt::Display for FrKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Pst => "PST",
            Self::ProperFr => "proper FR",
            Self::Periodic => "periodic",
            Self::NoFr => "no FR",
        })
    }
}

/// Outcome of testing `(alpha, beta) = (H_uu, H_uv)` at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrOutcome {
    pub kind: FrKind,
    pub alpha: Complex64,
    pub beta: Complex64,
    /// `|1 - |alpha|^2 - |beta|^2|`.
    pub residual: f64,
}

impl FrOutcome {
    pub fn classify(alpha: Complex64, beta: Complex64) -> Self {
        let residual = (1.0 - alpha.norm_sqr() - beta.norm_sqr()).abs();
        let kind = if residual > FR_THRESHOLD {
            FrKind::NoFr
        } else if beta.norm() >= 1.0 - AMP_THRESHOLD {
            FrKind::Pst
        } else if alpha.norm() >= 1.0 - AMP_THRESHOLD {
            FrKind::Periodic
        } else if alpha.norm() > AMP_THRESHOLD && beta.norm() > AMP_THRESHOLD {
            FrKind::ProperFr
        } else {
            FrKind::NoFr
        };
        Self { kind, alpha, beta, residual }
    }

    /// Phase `zeta` in `alpha = exp(i zeta) cos(gamma)`.
    pub fn zeta(&self) -> f64 {
        self.alpha.arg()
    }
}

/// Walk on a symmetric matrix through its spectral decomposition.
#[derive(Debug, Clone)]
pub struct Walk {
    sd: SpectralDecomposition,
}

impl Walk {
    pub fn new(sd: SpectralDecomposition) -> Self {
        Self { sd }
    }

    pub fn of_graph<L: Clone + fmt::Debug>(g: &SimpleGraph<L>) -> Result<Self> {
        Ok(Self::new(SpectralDecomposition::of_graph(g)?))
    }

    pub fn spectral(&self) -> &SpectralDecomposition {
        &self.sd
    }

    pub fn order(&self) -> usize {
        self.sd.order()
    }

    pub fn transition_matrix(&self, t: f64) -> TransitionMatrix {
        let eig = self.sd.eigen();
        let v = eig.vectors.map(|x| Complex64::new(x, 0.0));
        let phases: Vec<Complex64> = eig.values.iter().map(|&l| Complex64::cis(t * l)).collect();
        let mut scaled = v.clone();
        for (k, mut col) in scaled.column_iter_mut().enumerate() {
            col *= phases[k];
        }
        TransitionMatrix { t, h: scaled * v.transpose() }
    }

    fn check(&self, u: usize) -> Result<()> {
        if u >= self.order() {
            Err(Error::VertexOutOfRange(u))
        } else {
            Ok(())
        }
    }

    /// Cluster sums for repeated evaluation at `(u, v)`.
    pub fn pair(&self, u: usize, v: usize) -> Result<PairWalk> {
        self.check(u)?;
        self.check(v)?;
        let k = self.sd.clusters().len();
        Ok(PairWalk {
            values: self.sd.eigenvalues(),
            uu: (0..k).map(|j| self.sd.projector_entry(j, u, u)).collect(),
            vv: (0..k).map(|j| self.sd.projector_entry(j, v, v)).collect(),
            uv: (0..k).map(|j| self.sd.projector_entry(j, u, v)).collect(),
        })
    }

    pub fn amplitude(&self, u: usize, v: usize, t: f64) -> Result<Complex64> {
        Ok(self.pair(u, v)?.beta(t))
    }

    pub fn fr_test(&self, u: usize, v: usize, t: f64) -> Result<FrOutcome> {
        if u == v {
            return Err(Error::SameVertex(u));
        }
        Ok(self.pair(u, v)?.fr_test(t))
    }

    /// Largest eigenvalue modulus, used to scale time grids.
    pub fn spectral_radius(&self) -> f64 {
        self.sd.eigenvalues().iter().fold(0.0f64, |a, x| a.max(x.abs()))
    }
}

/// Projector entries of one pair, summed per eigenvalue cluster.
#[derive(Debug, Clone)]
pub struct PairWalk {
    values: Vec<f64>,
    uu: Vec<f64>,
    vv: Vec<f64>,
    uv: Vec<f64>,
}

fn evolve(values: &[f64], weights: &[f64], t: f64) -> Complex64 {
    values.iter().zip(weights).map(|(&l, &w)| Complex64::cis(t * l) * w).sum()
}

impl PairWalk {
    /// `H(t)_{uu}`.
    pub fn alpha(&self, t: f64) -> Complex64 {
        evolve(&self.values, &self.uu, t)
    }

    /// `H(t)_{uv}`.
    pub fn beta(&self, t: f64) -> Complex64 {
        evolve(&self.values, &self.uv, t)
    }

    pub fn fr_test(&self, t: f64) -> FrOutcome {
        FrOutcome::classify(self.alpha(t), self.beta(t))
    }

    /// The same pair seen from `v`.
    pub fn reversed(&self) -> Self {
        Self { values: self.values.clone(), uu: self.vv.clone(), vv: self.uu.clone(), uv: self.uv.clone() }
    }

    /// Times in `(0, t_max]` where `|H_uu| >= 1 - AMP_THRESHOLD`.
    pub fn periodicity_search(&self, t_max: f64, grid_step: f64) -> Vec<f64> {
        let f = |t: f64| 1.0 - self.alpha(t).norm_sqr();
        local_minima(f, t_max, grid_step).into_iter().filter(|&t| self.alpha(t).norm() >= 1.0 - AMP_THRESHOLD).collect()
    }

    /// Time in `(0, t_max]` maximising `|H_uv|` on the grid, refined locally.
    pub fn max_transfer(&self, t_max: f64, grid_step: f64) -> (f64, f64) {
        let f = |t: f64| 1.0 - self.beta(t).norm_sqr();
        local_minima(f, t_max, grid_step).into_iter().map(|t| (t, self.beta(t).norm())).fold((0.0, 0.0), |best, cur| {
            if cur.1 > best.1 {
                cur
            } else {
                best
            }
        })
    }
}

/// Grid scan for local minima of `f` on `(0, t_max]`, each refined by golden
/// section search on the bracketing grid cells to about `1e-10`.
fn local_minima<F: Fn(f64) -> f64>(f: F, t_max: f64, step: f64) -> Vec<f64> {
    assert!(t_max > 0.0 && step > 0.0, "time range and step must be positive");
    let count = (t_max / step).ceil() as usize;
    let ts: Vec<f64> = (0..=count + 1).map(|k| k as f64 * step).collect();
    let fs: Vec<f64> = ts.iter().map(|&t| f(t)).collect();
    let mut out: Vec<f64> = Vec::new();
    for k in 1..=count {
        if fs[k] <= fs[k - 1] && fs[k] <= fs[k + 1] {
            let t = golden_section(&f, ts[k - 1], ts[k + 1], 1e-10);
            if t > 0.0 && t <= t_max + step && out.last().is_none_or(|&p| t - p > step / 2.0) {
                out.push(t);
            }
        }
    }
    out
}

fn golden_section<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    (a + b) / 2.0
}

/// Default grid step `1e-3 * 2 pi / lambda_max`.
pub fn default_grid_step(spectral_radius: f64) -> f64 {
    1e-3 * 2.0 * PI / spectral_radius.max(1e-12)
}

/// `H(t)` for a graph.
pub fn transition_matrix<L: Clone + fmt::Debug>(g: &SimpleGraph<L>, t: f64) -> Result<TransitionMatrix> {
    Ok(Walk::of_graph(g)?.transition_matrix(t))
}

/// Fractional revival test at a given time.
pub fn fr_test<L: Clone + fmt::Debug>(g: &SimpleGraph<L>, u: usize, v: usize, t: f64) -> Result<FrOutcome> {
    Walk::of_graph(g)?.fr_test(u, v, t)
}

/// Walk on the symmetrized quotient of an equitable partition, between two
/// singleton cells.
#[derive(Debug, Clone)]
pub struct QuotientWalk {
    pair: PairWalk,
}

impl QuotientWalk {
    pub fn new<L: Clone + fmt::Debug>(g: &SimpleGraph<L>, p: &Partition, u: usize, v: usize) -> Result<Self> {
        for w in [u, v] {
            if w >= g.order() {
                return Err(Error::VertexOutOfRange(w));
            }
            if !p.is_singleton(w) {
                return Err(Error::NotSingleton(w));
            }
        }
        if !is_equitable(g, p)? {
            return Err(Error::NotEquitable);
        }
        let c = symmetrize(&standard_quotient(g, p)?)?;
        let walk = Walk::new(SpectralDecomposition::new(&c.to_f64())?);
        Ok(Self { pair: walk.pair(p.cell_of(u), p.cell_of(v))? })
    }

    pub fn amplitude(&self, t: f64) -> Complex64 {
        self.pair.beta(t)
    }
}

/// `exp(itC)_{uv}` on the symmetrized quotient; equals `H(t)_{uv}` of the graph.
pub fn quotient_walk_amplitude<L: Clone + fmt::Debug>(
    g: &SimpleGraph<L>,
    p: &Partition,
    u: usize,
    v: usize,
    t: f64,
) -> Result<Complex64> {
    Ok(QuotientWalk::new(g, p, u, v)?.amplitude(t))
}

/// Candidate periods of vertex `u` in `(0, t_max]`.
pub fn periodicity_search<L: Clone + fmt::Debug>(
    g: &SimpleGraph<L>,
    u: usize,
    t_max: f64,
    grid_step: f64,
) -> Result<Vec<f64>> {
    if t_max <= 0.0 {
        return Err(Error::Inconsistent("t_max must be positive".into()));
    }
    Ok(Walk::of_graph(g)?.pair(u, u)?.periodicity_search(t_max, grid_step))
}
