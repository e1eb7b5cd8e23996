//! Brute-force reference implementations.
//!
//! None of these share numerical kernels with the modules they check: the
//! matrix exponential is a Taylor series, strong cospectrality uses its own
//! cyclic Jacobi eigensolver, and quartic roots come from a companion
//! matrix rather than the symmetric solver.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;

/// Largest graph accepted by [`brute_strong_cospectral`].
pub const BRUTE_MAX_ORDER: usize = 2000;

/// Target bound on the truncated tail of the scaled series.
pub const SERIES_TAIL: f64 = 1e-12;

fn inf_norm(a: &DMatrix<f64>) -> f64 {
    a.row_iter().map(|r| r.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// `exp(itA)` by a Taylor series of `terms` terms.
///
/// The argument is first scaled by `2^-s` so that `||tA|| / 2^s <= 1/2`, the
/// series is summed, and the result is squared `s` times. The remainder of
/// the scaled series is bounded by `x^N / N! / (1 - x/(N+1))` with `x` the
/// scaled norm; if that exceeds [`SERIES_TAIL`] the call fails.
pub fn expm_series(a: &DMatrix<f64>, t: f64, terms: usize) -> Result<DMatrix<Complex64>> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::NotSquare(n, a.ncols()));
    }
    let norm = inf_norm(a) * t.abs();
    let mut s = 0u32;
    while norm / 2f64.powi(s as i32) > 0.5 {
        s += 1;
    }
    let x = norm / 2f64.powi(s as i32);
    let nt = terms as f64;
    let log_tail = if x == 0.0 {
        f64::NEG_INFINITY
    } else {
        nt * x.ln() - (1..=terms).map(|k| (k as f64).ln()).sum::<f64>() - (1.0 - x / (nt + 1.0)).ln()
    };
    if terms == 0 || log_tail > SERIES_TAIL.ln() {
        return Err(Error::SeriesTail(log_tail.exp()));
    }
    let scale = t / 2f64.powi(s as i32);
    let b: DMatrix<Complex64> = a.map(|v| Complex64::new(0.0, v * scale));
    let mut sum = DMatrix::<Complex64>::identity(n, n);
    let mut term = DMatrix::<Complex64>::identity(n, n);
    for k in 1..terms {
        term = &term * &b / Complex64::new(k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    Ok(sum)
}

/// Eigenvalues and orthonormal eigenvectors (columns) of a symmetric matrix
/// by cyclic Jacobi rotations.
pub fn jacobi_eigen(a: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut v: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    let scale = m.iter().flatten().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i][j] * m[i][j])
            .sum();
        if off.sqrt() <= 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p][q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * apq);
                let tt = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (tt * tt + 1.0).sqrt();
                let s = tt * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[k][p], m[k][q]);
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[p][k], m[q][k]);
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for row in v.iter_mut() {
                    let (vkp, vkq) = (row[p], row[q]);
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| m[i][i]).collect(), v)
}

/// Eigenspaces of a graph from [`jacobi_eigen`], for repeated pair queries.
pub struct CospectralOracle {
    /// For each eigenspace, the rows of its orthonormal basis indexed by vertex.
    spaces: Vec<Vec<Vec<f64>>>,
}

impl CospectralOracle {
    pub fn new<L: Clone + std::fmt::Debug>(g: &SimpleGraph<L>) -> Result<Self> {
        let n = g.order();
        if n > BRUTE_MAX_ORDER {
            return Err(Error::DenseCap(n, BRUTE_MAX_ORDER));
        }
        let a: Vec<Vec<f64>> =
            (0..n).map(|i| (0..n).map(|j| if g.adjacent(i, j) { 1.0 } else { 0.0 }).collect()).collect();
        let (vals, vecs) = jacobi_eigen(&a);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]));
        let tol = 1e-6 * vals.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for &k in &order {
            match groups.last_mut() {
                Some(gr) if (vals[k] - vals[*gr.last().unwrap()]).abs() <= tol => gr.push(k),
                _ => groups.push(vec![k]),
            }
        }
        let spaces =
            groups.iter().map(|gr| (0..n).map(|u| gr.iter().map(|&k| vecs[u][k]).collect()).collect()).collect();
        Ok(Self { spaces })
    }

    /// `E_j e_u = ± E_j e_v` for every eigenspace `j`, compared through the
    /// basis coordinates (the basis is orthonormal, so norms agree).
    pub fn strongly_cospectral(&self, u: usize, v: usize) -> bool {
        const TOL: f64 = 1e-6;
        self.spaces.iter().all(|space| {
            let (a, b) = (&space[u], &space[v]);
            let plus: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
            let minus: f64 = a.iter().zip(b).map(|(x, y)| (x + y) * (x + y)).sum::<f64>().sqrt();
            plus <= TOL || minus <= TOL
        })
    }
}

/// Strong cospectrality by direct eigenspace comparison.
pub fn brute_strong_cospectral<L: Clone + std::fmt::Debug>(g: &SimpleGraph<L>, u: usize, v: usize) -> Result<bool> {
    for w in [u, v] {
        if w >= g.order() {
            return Err(Error::VertexOutOfRange(w));
        }
    }
    Ok(CospectralOracle::new(g)?.strongly_cospectral(u, v))
}

fn horner(c: &[f64; 5], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(c[4], 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for k in (0..4).rev() {
        dp = dp * z + p;
        p = p * z + c[k];
    }
    (p, dp)
}

/// Roots of a monic quartic with ascending coefficients `c_0 .. c_4`.
///
/// Zero roots are split off exactly, the rest come from companion-matrix
/// eigenvalues and are polished by Newton steps on the original quartic.
pub fn brute_quartic_roots(coeffs: &[f64; 5]) -> Result<[Complex64; 4]> {
    if coeffs[4] != 1.0 {
        return Err(Error::NotMonic(4));
    }
    let zeros = coeffs.iter().take(4).take_while(|&&c| c == 0.0).count();
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    let deg = 4 - zeros;
    if deg > 0 {
        let reduced = &coeffs[zeros..];
        let mut comp = DMatrix::<f64>::zeros(deg, deg);
        for i in 1..deg {
            comp[(i, i - 1)] = 1.0;
        }
        for i in 0..deg {
            comp[(i, deg - 1)] = -reduced[i];
        }
        roots.extend(comp.complex_eigenvalues().iter().copied());
    }
    for z in roots.iter_mut().skip(zeros) {
        for _ in 0..50 {
            let (p, dp) = horner(coeffs, *z);
            if dp.norm() < 1e-12 {
                break;
            }
            let step = p / dp;
            *z -= step;
            if step.norm() <= 1e-15 * z.norm().max(1.0) {
                break;
            }
        }
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut out = [Complex64::new(0.0, 0.0); 4];
    out.copy_from_slice(&roots);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_complete, make_path, ZnGraph};
    use std::f64::consts::PI;

    #[test]
    fn series_of_zero_is_identity() {
        let e = expm_series(&DMatrix::zeros(3, 3), 1.0, 5).unwrap();
        assert!((e - DMatrix::<Complex64>::identity(3, 3)).norm() < 1e-15);
    }

    #[test]
    fn series_on_k2() {
        let a = make_complete(2).adjacency_matrix();
        let e = expm_series(&a, PI / 2.0, 30).unwrap();
        assert!((e[(0, 1)].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn series_tail_rejected() {
        let a = make_path(3).adjacency_matrix();
        assert!(matches!(expm_series(&a, 1.0, 3), Err(Error::SeriesTail(_))));
    }

    #[test]
    fn series_matches_spectral_route_on_p3() {
        let g = ZnGraph::new(8).unwrap();
        let t = PI / 2f64.sqrt();
        let e = expm_series(&g.graph().adjacency_matrix(), t, 40).unwrap();
        let h = crate::walk::transition_matrix(g.graph(), t).unwrap().h;
        assert!((e - h).norm() < 1e-10);
    }

    #[test]
    fn jacobi_reconstructs() {
        let a = vec![vec![2.0, 1.0, 0.0], vec![1.0, 2.0, 1.0], vec![0.0, 1.0, 2.0]];
        let (vals, v) = jacobi_eigen(&a);
        for i in 0..3 {
            for j in 0..3 {
                let r: f64 = (0..3).map(|k| v[i][k] * vals[k] * v[j][k]).sum();
                assert!((r - a[i][j]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn strong_cospectral_examples() {
        let g21 = ZnGraph::new(21).unwrap();
        let idx = |g: &ZnGraph, x| g.index_of(x).unwrap();
        assert!(brute_strong_cospectral(g21.graph(), idx(&g21, 7), idx(&g21, 14)).unwrap());
        let g18 = ZnGraph::new(18).unwrap();
        assert!(!brute_strong_cospectral(g18.graph(), idx(&g18, 3), idx(&g18, 6)).unwrap());
        assert!(brute_strong_cospectral(&make_complete(2), 0, 1).unwrap());
    }

    #[test]
    fn quartic_roots_examples() {
        let r = brute_quartic_roots(&[4.0, 0.0, -5.0, 0.0, 1.0]).unwrap();
        let re: Vec<f64> = r.iter().map(|z| z.re).collect();
        for (x, y) in re.iter().zip([-2.0, -1.0, 1.0, 2.0]) {
            assert!((x - y).abs() < 1e-12);
        }
        assert!(r.iter().all(|z| z.im.abs() < 1e-12));
        let r = brute_quartic_roots(&[0.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(r.iter().all(|z| z.norm() == 0.0));
        assert!(matches!(brute_quartic_roots(&[1.0, 0.0, 0.0, 0.0, 2.0]), Err(Error::NotMonic(4))));
    }

    #[test]
    fn p2q_quartic_roots_match_quotient_for_18() {
        let c = crate::classify::p2q_quartic(3, 2).map(|x| x as f64);
        let roots = brute_quartic_roots(&c).unwrap();
        let q = crate::partitions::symmetrized_quotient(18).unwrap().to_f64();
        let mut ev: Vec<f64> = q.symmetric_eigen().eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        for (z, e) in roots.iter().zip(&ev) {
            assert!(z.im.abs() < 1e-9 && (z.re - e).abs() < 1e-9, "{roots:?} vs {ev:?}");
        }
    }
}
