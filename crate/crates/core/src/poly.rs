//! Exact integer polynomials: characteristic polynomials of integer matrices
//! (Berkowitz, division-free), local minimal polynomials via Krylov
//! sequences over `Q`, and factoring into linear, quadratic and residual parts.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arithmetic::squarefree_decompose;
use crate::error::{Error, Result};

/// Polynomial with `BigInt` coefficients, stored lowest degree first with no
/// trailing zeros. The zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// From `i64` coefficients, lowest degree first.
    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Monic `x - r`.
    pub fn linear(r: i64) -> Self {
        Self::from_i64(&[-r, 1])
    }

    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_i64(&self, x: i64) -> BigInt {
        self.eval(&BigInt::from(x))
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::new(vec![]);
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Quotient and remainder on division by a monic polynomial.
    pub fn div_rem_monic(&self, divisor: &Self) -> Result<(Self, Self)> {
        let dd = divisor.degree().ok_or(Error::NotMonic(0))?;
        if !divisor.is_monic() {
            return Err(Error::NotMonic(dd));
        }
        let mut rem = self.coeffs.clone();
        let Some(sd) = self.degree() else {
            return Ok((Self::new(vec![]), Self::new(vec![])));
        };
        if sd < dd {
            return Ok((Self::new(vec![]), self.clone()));
        }
        let mut quot = vec![BigInt::zero(); sd - dd + 1];
        for k in (0..=sd - dd).rev() {
            let c = rem[k + dd].clone();
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * dc;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Exact quotient by a monic divisor, if it divides.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.div_rem_monic(divisor).ok()?;
        r.is_zero().then_some(q)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{mag}x")?,
                (_, true) => write!(f, "x^{k}")?,
                (_, false) => write!(f, "{mag}x^{k}")?,
            }
        }
        Ok(())
    }
}

/// `det(xI - M)` for a square integer matrix, by Berkowitz's algorithm.
pub fn charpoly(m: &[Vec<i64>]) -> Result<IntPoly> {
    let n = m.len();
    if let Some(row) = m.iter().find(|r| r.len() != n) {
        return Err(Error::NotSquare(n, row.len()));
    }
    let a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
    // `v` holds the characteristic polynomial of the leading k x k block,
    // highest degree first.
    let mut v = vec![BigInt::one()];
    for k in 1..=n {
        let last = k - 1;
        let mut t = Vec::with_capacity(k + 1);
        t.push(BigInt::one());
        t.push(-a[last][last].clone());
        // -R M^i C for the row R, column C bordering the leading block M.
        let mut w: Vec<BigInt> = (0..last).map(|i| a[i][last].clone()).collect();
        for _ in 0..last {
            let rw: BigInt = (0..last).map(|j| &a[last][j] * &w[j]).sum();
            t.push(-rw);
            w = (0..last).map(|i| (0..last).map(|j| &a[i][j] * &w[j]).sum()).collect();
        }
        v = (0..=k).map(|i| (0..=i.min(k - 1)).map(|j| &t[i - j] * &v[j]).sum()).collect();
    }
    v.reverse();
    Ok(IntPoly::new(v))
}

/// Monic minimal polynomial of `e_i` under the integer matrix `m`: the
/// lowest-degree monic `p` with `p(m) e_i = 0`.
///
/// Krylov vectors `m^k e_i` are reduced against earlier ones over `Q`; the
/// first dependency gives the polynomial. Its coefficients are integral since
/// it divides the characteristic polynomial.
pub fn local_minimal_polynomial(m: &[Vec<i64>], i: usize) -> Result<IntPoly> {
    let n = m.len();
    if i >= n {
        return Err(Error::VertexOutOfRange(i));
    }
    let zero = BigRational::zero();
    // Reduced Krylov vectors with their pivot and the polynomial producing them.
    let mut basis: Vec<(Vec<BigRational>, usize, Vec<BigRational>)> = Vec::new();
    let mut raw: Vec<BigInt> = (0..n).map(|k| BigInt::from((k == i) as i64)).collect();
    for deg in 0..=n {
        let mut vec: Vec<BigRational> = raw.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        let mut comb = vec![zero.clone(); deg + 1];
        comb[deg] = BigRational::one();
        for (bv, piv, bp) in &basis {
            if vec[*piv].is_zero() {
                continue;
            }
            let f = &vec[*piv] / &bv[*piv];
            for (x, y) in vec.iter_mut().zip(bv) {
                *x -= &f * y;
            }
            for (x, y) in comb.iter_mut().zip(bp) {
                *x -= &f * y;
            }
        }
        match vec.iter().position(|x| !x.is_zero()) {
            None => {
                let coeffs = comb
                    .into_iter()
                    .map(|c| {
                        c.is_integer()
                            .then(|| c.to_integer())
                            .ok_or_else(|| Error::Inconsistent("non-integral minimal polynomial".into()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                return Ok(IntPoly::new(coeffs));
            }
            Some(piv) => basis.push((vec, piv, comb)),
        }
        raw = (0..n).map(|r| (0..n).map(|c| BigInt::from(m[r][c]) * &raw[c]).sum()).collect();
    }
    Err(Error::Inconsistent("Krylov sequence did not terminate".into()))
}

/// Kind of an irreducible factor found by [`factor_with_hints`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FactorKind {
    /// `x - r`.
    Linear(i64),
    /// `x^2 - a x + c` with roots `(a ± b sqrt(delta))/2`, `b > 0`, `delta > 1`
    /// squarefree.
    Quadratic { a: i64, b: i64, delta: u64 },
    /// Product of whatever is left; none of its roots has degree below 3.
    Residual,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyFactor {
    pub poly: IntPoly,
    pub multiplicity: usize,
    pub kind: FactorKind,
}

/// Splits a monic integer polynomial into integer-root linear factors,
/// irreducible quadratics with real roots, and a residual.
///
/// Candidate factors are read off the approximate real roots in `hints`
/// (integers by rounding; quadratics from rounded sums and products of root
/// pairs) and accepted only after exact division, so a poor hint can at worst
/// leave a factor in the residual, never produce a wrong one. With all real
/// roots supplied the residual has no factors of degree 1 or 2.
pub fn factor_with_hints(p: &IntPoly, hints: &[f64]) -> Result<Vec<PolyFactor>> {
    let deg = p.degree().ok_or(Error::NotMonic(0))?;
    if !p.is_monic() {
        return Err(Error::NotMonic(deg));
    }
    let mut rest = p.clone();
    let mut out = Vec::new();
    let strip = |rest: &mut IntPoly, f: IntPoly, kind: FactorKind, out: &mut Vec<PolyFactor>| {
        let mut mult = 0;
        while let Some(q) = rest.div_exact(&f) {
            *rest = q;
            mult += 1;
        }
        if mult > 0 {
            out.push(PolyFactor { poly: f, multiplicity: mult, kind });
        }
    };

    let mut ints: Vec<i64> = hints.iter().map(|h| h.round() as i64).collect();
    ints.push(0);
    ints.sort_unstable();
    ints.dedup();
    for r in ints {
        if rest.degree().unwrap_or(0) == 0 {
            break;
        }
        strip(&mut rest, IntPoly::linear(r), FactorKind::Linear(r), &mut out);
    }

    let mut quads: Vec<(i64, i64)> = Vec::new();
    for (k, &x) in hints.iter().enumerate() {
        for &y in &hints[k + 1..] {
            let (s, m) = ((x + y).round(), (x * y).round());
            if s.abs() < 9.0e15 && m.abs() < 9.0e15 {
                quads.push((s as i64, m as i64));
            }
        }
    }
    quads.sort_unstable();
    quads.dedup();
    for (s, m) in quads {
        if rest.degree().unwrap_or(0) < 2 {
            break;
        }
        let disc = s as i128 * s as i128 - 4 * m as i128;
        if disc <= 0 {
            continue;
        }
        let (f, delta) = squarefree_decompose(disc as u64);
        if delta == 1 {
            continue;
        }
        let kind = FactorKind::Quadratic { a: s, b: f as i64, delta };
        strip(&mut rest, IntPoly::from_i64(&[m, -s, 1]), kind, &mut out);
    }

    if rest.degree().unwrap_or(0) > 0 {
        out.push(PolyFactor { poly: rest, multiplicity: 1, kind: FactorKind::Residual });
    }
    Ok(out)
}

/// Exact integer root test for `p(r) = 0`.
pub fn has_root(p: &IntPoly, r: i64) -> bool {
    p.eval_i64(r).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_det(m: &[Vec<BigInt>]) -> BigInt {
        // Laplace expansion along the first row.
        let n = m.len();
        if n == 0 {
            return BigInt::one();
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<BigInt>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, v)| v.clone()).collect())
                    .collect();
                let term = &m[0][j] * naive_det(&minor);
                if j % 2 == 0 {
                    term
                } else {
                    -term
                }
            })
            .sum()
    }

    #[test]
    fn charpoly_small_cases() {
        assert_eq!(charpoly(&[vec![0]]).unwrap(), IntPoly::from_i64(&[0, 1]));
        let p3 = vec![vec![0, 1, 0], vec![1, 0, 1], vec![0, 1, 0]];
        assert_eq!(charpoly(&p3).unwrap(), IntPoly::from_i64(&[0, -2, 0, 1]));
        assert_eq!(charpoly(&p3).unwrap().to_string(), "x^3 - 2x");
        assert_eq!(charpoly(&[]).unwrap(), IntPoly::one());
        assert!(charpoly(&[vec![1, 2]]).is_err());
    }

    #[test]
    fn charpoly_matches_determinant_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let n = rng.gen_range(1..6);
            let m: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-5..6)).collect()).collect();
            let cp = charpoly(&m).unwrap();
            for x in -3i64..=3 {
                let shifted: Vec<Vec<BigInt>> = (0..n)
                    .map(|i| (0..n).map(|j| BigInt::from(if i == j { x } else { 0 } - m[i][j])).collect())
                    .collect();
                assert_eq!(cp.eval_i64(x), naive_det(&shifted));
            }
        }
    }

    #[test]
    fn division_and_display() {
        let p = IntPoly::from_i64(&[4, 0, -5, 0, 1]);
        assert_eq!(p.to_string(), "x^4 - 5x^2 + 4");
        let q = p.div_exact(&IntPoly::linear(2)).unwrap();
        assert_eq!(q.mul(&IntPoly::linear(2)), p);
        assert!(p.div_exact(&IntPoly::linear(3)).is_none());
        assert!(p.div_rem_monic(&IntPoly::from_i64(&[1, 2])).is_err());
        assert_eq!(IntPoly::from_i64(&[-1, 0, 0]).to_string(), "-1");
    }

    #[test]
    fn minimal_polynomials() {
        let p3 = vec![vec![0, 1, 0], vec![1, 0, 1], vec![0, 1, 0]];
        // End vertex sees all three eigenvalues, the middle misses 0.
        assert_eq!(local_minimal_polynomial(&p3, 0).unwrap(), IntPoly::from_i64(&[0, -2, 0, 1]));
        assert_eq!(local_minimal_polynomial(&p3, 1).unwrap(), IntPoly::from_i64(&[-2, 0, 1]));
        let zero = vec![vec![0]];
        assert_eq!(local_minimal_polynomial(&zero, 0).unwrap(), IntPoly::x());
        // Identity: every vector is an eigenvector.
        let id = vec![vec![1, 0], vec![0, 1]];
        assert_eq!(local_minimal_polynomial(&id, 1).unwrap(), IntPoly::linear(1));
    }

    #[test]
    fn factoring_with_hints() {
        // (x - 2)^2 (x^2 - 12) (x^3 - 2)
        let p = IntPoly::linear(2).pow(2).mul(&IntPoly::from_i64(&[-12, 0, 1])).mul(&IntPoly::from_i64(&[-2, 0, 0, 1]));
        let s12 = 12f64.sqrt();
        let hints = [2.0, 2.0, s12, -s12, 2f64.cbrt()];
        let f = factor_with_hints(&p, &hints).unwrap();
        assert_eq!(f.len(), 3);
        assert_eq!(f[0].kind, FactorKind::Linear(2));
        assert_eq!(f[0].multiplicity, 2);
        assert_eq!(f[1].kind, FactorKind::Quadratic { a: 0, b: 4, delta: 3 });
        assert_eq!(f[2].kind, FactorKind::Residual);
        assert_eq!(f[2].poly.degree(), Some(3));
        let product = f.iter().fold(IntPoly::one(), |acc, pf| acc.mul(&pf.poly.pow(pf.multiplicity)));
        assert_eq!(product, p);
    }

    #[test]
    fn bad_hints_leave_residual() {
        let p = IntPoly::from_i64(&[-12, 0, 1]);
        let f = factor_with_hints(&p, &[1.0]).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].kind, FactorKind::Residual);
        assert!(factor_with_hints(&IntPoly::from_i64(&[1, 2]), &[]).is_err());
    }
}
