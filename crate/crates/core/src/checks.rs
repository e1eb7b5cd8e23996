//! Named verification sweeps shared by the `verify` command and the
//! acceptance gate. Each returns a [`CheckReport`] instead of panicking so
//! callers decide how to surface failures.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arithmetic::{self, is_prime};
use crate::classify::{candidate_pairs, minus_one_family_check, quartic_factor_search, Family};
use crate::error::Result;
use crate::graph::{cartesian_product, make_path, make_star, DivisorPartition, ZnGraph};
use crate::oracle::{expm_series, CospectralOracle};
use crate::partitions::{coarsest_equitable_refinement, distance_partition, Partition};
use crate::spectral::{eigendecompose, quotient_contains, spectrum_via_theorem};
use crate::walk::{FrKind, QuotientWalk, Walk};

/// Identifiers accepted by [`run`].
pub const CHECK_IDS: [&str; 6] =
    ["spectrum-thm", "quotient-walk", "minus-one", "quartic", "strong-cospectral", "counterexample-p2k14"];

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub id: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl CheckReport {
    fn new(id: &'static str) -> Self {
        Self { id, cases: 0, failures: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn case(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

/// Parameters for [`run`]; unset bounds use each check's default.
#[derive(Debug, Clone, Copy, Default)]
pub struct CheckParams {
    pub nmax: Option<u64>,
    pub pmax: Option<u64>,
    pub qmax: Option<u64>,
    pub dense_cap: Option<usize>,
}

/// Runs the check named `id`; `None` for an unknown id.
pub fn run(id: &str, params: CheckParams) -> Option<Result<CheckReport>> {
    let cap = params.dense_cap.unwrap_or(crate::classify::DEFAULT_DENSE_CAP);
    Some(match id {
        "spectrum-thm" => spectrum_theorem(params.nmax.unwrap_or(300), cap),
        "quotient-walk" => quotient_walk(params.nmax.unwrap_or(200), 25, 0x5eed),
        "minus-one" => minus_one(params.nmax.unwrap_or(10_000)),
        "quartic" => quartic(params.pmax.unwrap_or(50), params.qmax.unwrap_or(50)),
        "strong-cospectral" => strong_cospectral(params.nmax.unwrap_or(300)),
        "counterexample-p2k14" => counterexample_p2k14(),
        _ => return None,
    })
}

fn composites(lo: u64, hi: u64) -> impl Iterator<Item = u64> {
    (lo.max(4)..=hi).filter(|&n| !is_prime(n))
}

/// Spectrum assembled from the quotient against a dense eigensolver.
pub fn spectrum_theorem(nmax: u64, cap: usize) -> Result<CheckReport> {
    let mut r = CheckReport::new("spectrum-thm");
    for n in composites(4, nmax) {
        if arithmetic::zero_divisor_count(n)? as usize > cap {
            continue;
        }
        let exact = spectrum_via_theorem(n)?.expanded();
        let dense = eigendecompose(&ZnGraph::new(n)?.graph().adjacency_matrix())?.values;
        let err = exact.iter().zip(&dense).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        r.case(exact.len() == dense.len() && err <= 1e-8, || format!("n = {n}: max deviation {err:e}"));
    }
    Ok(r)
}

/// Full walk versus quotient walk for every size-2 cell split into singletons.
pub fn quotient_walk(nmax: u64, samples: usize, seed: u64) -> Result<CheckReport> {
    let mut r = CheckReport::new("quotient-walk");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for n in composites(4, nmax) {
        let pairs = candidate_pairs(n)?;
        if pairs.is_empty() {
            continue;
        }
        let zn = ZnGraph::new(n)?;
        let walk = Walk::of_graph(zn.graph())?;
        let base: Partition = DivisorPartition::for_modulus(n)?.to_partition(&zn)?;
        for (x, y) in pairs {
            let (u, v) = (zn.require_index(x)?, zn.require_index(y)?);
            let p = base.isolate(u)?.isolate(v)?;
            let qw = QuotientWalk::new(zn.graph(), &p, u, v)?;
            let full = walk.pair(u, v)?;
            let worst = (0..samples)
                .map(|_| rng.gen_range(0.0..=20.0))
                .map(|t| (full.beta(t) - qw.amplitude(t)).norm())
                .fold(0.0, f64::max);
            r.case(worst <= 1e-9, || format!("n = {n}, pair ({x}, {y}): deviation {worst:e}"));
        }
    }
    Ok(r)
}

/// `-1` exclusion and closed-form agreement over the proved families.
pub fn minus_one(nmax: u64) -> Result<CheckReport> {
    let mut r = CheckReport::new("minus-one");
    for n in composites(4, nmax) {
        if Family::of(n)? == Family::Other {
            continue;
        }
        let c = minus_one_family_check(n)?;
        let ok = c.minus_one_excluded() && c.agrees() == Some(true);
        r.case(ok, || {
            format!(
                "n = {n} ({}): exact {}, closed form {:?}",
                c.family.name(),
                c.exact,
                c.closed_form.as_ref().map(|x| x.to_string())
            )
        });
    }
    Ok(r)
}

/// No quadratic splitting of the `p^2 q` quartic, and the quartic divides the
/// exact quotient characteristic polynomial.
pub fn quartic(pmax: u64, qmax: u64) -> Result<CheckReport> {
    let mut r = CheckReport::new("quartic");
    let primes = |m: u64| (2..=m).filter(|&x| is_prime(x)).collect::<Vec<_>>();
    for &p in &primes(pmax) {
        for &q in primes(qmax).iter().filter(|&&q| q != p) {
            let rep = quartic_factor_search(p, q)?;
            r.case(rep.factorization.is_none(), || format!("({p}, {q}): factors {:?}", rep.factorization));
            let rows = crate::partitions::divisor_quotient(p * p * q)?.integer_rows().expect("integral");
            let cp = crate::poly::charpoly(&rows)?;
            r.case(cp.div_exact(&rep.poly()).is_some(), || {
                format!("({p}, {q}): quartic does not divide charpoly {cp}")
            });
        }
    }
    Ok(r)
}

/// Brute-force strong cospectrality holds exactly for size-2 cells, over all
/// pairs, whenever `-1` is not a quotient eigenvalue.
pub fn strong_cospectral(nmax: u64) -> Result<CheckReport> {
    let mut r = CheckReport::new("strong-cospectral");
    for n in composites(4, nmax) {
        if quotient_contains(n, -1)? {
            continue;
        }
        let zn = ZnGraph::new(n)?;
        let cells = DivisorPartition::for_modulus(n)?;
        let oracle = CospectralOracle::new(zn.graph())?;
        let cell_of: Vec<usize> = zn.residues().iter().map(|&x| cells.cell_of_residue(x).expect("vertex")).collect();
        let mut bad = 0usize;
        for u in 0..zn.order() {
            for v in u + 1..zn.order() {
                let pair_cell = cell_of[u] == cell_of[v] && cells.cells()[cell_of[u]].size() == 2;
                if oracle.strongly_cospectral(u, v) != pair_cell {
                    bad += 1;
                }
            }
        }
        r.case(bad == 0, || format!("n = {n}: {bad} mismatched pairs"));
    }
    Ok(r)
}

/// `P_2 □ K_{1,4}`: PST between `(0,c)` and `(1,c)` at `pi/2`, distance
/// partitions differ, coarsest equitable partitions coincide.
pub fn counterexample_p2k14() -> Result<CheckReport> {
    let mut r = CheckReport::new("counterexample-p2k14");
    let g = cartesian_product(&make_path(2), &make_star(5)).unlabeled();
    let (u, v) = (0, 5);
    let t = PI / 2.0;
    let o = Walk::of_graph(&g)?.fr_test(u, v, t)?;
    r.case(o.kind == FrKind::Pst, || format!("walk at pi/2: |beta| = {}", o.beta.norm()));
    let series = expm_series(&g.adjacency_matrix(), t, 40)?;
    r.case((series[(u, v)].norm() - 1.0).abs() <= 1e-9, || format!("series |H_uv| = {}", series[(u, v)].norm()));
    let (du, dv) = (distance_partition(&g, u)?, distance_partition(&g, v)?);
    r.case(!du.same_cells(&dv), || "distance partitions coincide".into());
    let cu = coarsest_equitable_refinement(&g, &Partition::singleton_seed(g.order(), u)?)?;
    let cv = coarsest_equitable_refinement(&g, &Partition::singleton_seed(g.order(), v)?)?;
    r.case(cu.same_cells(&cv) && cu.len() == 4, || format!("CEPs {:?} vs {:?}", cu.canonical(), cv.canonical()));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweeps_pass() {
        let params = CheckParams { nmax: Some(40), pmax: Some(7), qmax: Some(7), dense_cap: None };
        for id in CHECK_IDS {
            let r = run(id, params).unwrap().unwrap();
            assert!(r.passed(), "{id}: {:?}", r.failures);
            assert!(r.cases > 0, "{id} ran no cases");
        }
        assert!(run("nope", params).is_none());
    }
}
