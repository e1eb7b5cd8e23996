//! Integer number theory behind the divisor structure of `Z_n`.
//!
//! Everything here is exact and works on `u64`. Factorization is plain trial
//! division, which is ample for the moduli this crate handles (up to ~10^6 for
//! graph work, ~10^12 for constant terms of small polynomials).

use num_integer::Integer;

use crate::error::{Error, Result};

/// Prime factorization `n = p_1^e_1 ... p_k^e_k` with ascending primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn exponents(&self) -> impl Iterator<Item = u32> + '_ {
        self.factors.iter().map(|&(_, e)| e)
    }

    pub fn value(&self) -> u64 {
        self.factors.iter().map(|&(p, e)| p.pow(e)).product()
    }

    /// Number of divisors, `prod (e_i + 1)`.
    pub fn divisor_count(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| e as u64 + 1).product()
    }

    pub fn is_prime(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }

    /// All divisors in ascending order, including 1 and n.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let current = divs.len();
            let mut power = 1u64;
            for _ in 0..e {
                power *= p;
                for i in 0..current {
                    divs.push(divs[i] * power);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

pub fn factorize(n: u64) -> Result<Factorization> {
    if n < 2 {
        return Err(Error::InvalidModulus(n, "factorization needs n >= 2"));
    }
    let mut factors = Vec::new();
    let mut rest = n;
    let mut push = |p: u64, rest: &mut u64| {
        let mut e = 0;
        while (*rest).is_multiple_of(p) {
            *rest /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    };
    push(2, &mut rest);
    let mut p = 3u64;
    while p.saturating_mul(p) <= rest {
        push(p, &mut rest);
        p += 2;
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(Factorization { factors })
}

/// Deterministic primality by trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut p = 3u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            return false;
        }
        p += 2;
    }
    true
}

/// Euler's totient. `totient(1) == 1`.
pub fn totient(n: u64) -> Result<u64> {
    match n {
        0 => Err(Error::InvalidModulus(0, "totient needs n >= 1")),
        1 => Ok(1),
        _ => {
            let f = factorize(n)?;
            Ok(f.factors().iter().map(|&(p, e)| (p - 1) * p.pow(e - 1)).product())
        }
    }
}

/// Whether the cell `V_d` of the zero-divisor graph induces a complete graph,
/// i.e. `n | d^2`.
pub fn induces_complete(n: u64, d: u64) -> bool {
    ((d as u128) * (d as u128)).is_multiple_of(n as u128)
}

/// Validates that `n` is composite and at least 4.
pub fn check_composite(n: u64) -> Result<Factorization> {
    if n < 4 {
        return Err(Error::InvalidModulus(n, "need a composite n >= 4"));
    }
    let f = factorize(n)?;
    if f.is_prime() {
        return Err(Error::PrimeModulus { n });
    }
    Ok(f)
}

/// Proper divisors `1 < d < n`, null-inducing cells first, then complete ones,
/// ascending by value inside each block.
pub fn proper_divisors(n: u64) -> Result<Vec<u64>> {
    let f = check_composite(n)?;
    let mut divs: Vec<u64> = f.divisors().into_iter().filter(|&d| d != 1 && d != n).collect();
    divs.sort_by_key(|&d| (induces_complete(n, d), d));
    Ok(divs)
}

/// Number of vertices of the zero-divisor graph, `n - phi(n) - 1`.
pub fn zero_divisor_count(n: u64) -> Result<u64> {
    Ok(n - totient(n)? - 1)
}

/// Splits `m > 0` as `s^2 * core` with `core` squarefree. Returns `(s, core)`.
pub fn squarefree_decompose(m: u64) -> (u64, u64) {
    if m <= 1 {
        return (m, 1);
    }
    let mut s = 1u64;
    let mut core = 1u64;
    let f = factorize(m).expect("m >= 2");
    for &(p, e) in f.factors() {
        s *= p.pow(e / 2);
        if e % 2 == 1 {
            core *= p;
        }
    }
    (s, core)
}

pub fn is_squarefree(m: u64) -> bool {
    m >= 1 && squarefree_decompose(m).0 == 1
}

/// Greatest common divisor of a sequence of signed integers; 0 for an empty one.
pub fn gcd_all<I: IntoIterator<Item = i64>>(values: I) -> i64 {
    values.into_iter().fold(0i64, |acc, v| acc.gcd(&v))
}
