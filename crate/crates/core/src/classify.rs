//! Symbolic state-transfer verdicts for zero-divisor graphs.
//!
//! Pairs are first sorted by cell structure: only twins forming a cell of
//! size two can carry perfect state transfer or proper fractional revival.
//! For those the exact plus/minus support split from [`crate::spectral`]
//! decides everything; the walk module then re-checks each positive claim
//! at the analytic time when the graph is small enough to diagonalize.

use std::f64::consts::PI;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Zero};

use crate::arithmetic::{self, gcd_all, totient};
use crate::error::{Error, Result};
use crate::graph::{CellKind, ZnGraph};
use crate::partitions::divisor_quotient;
use crate::poly::{self, IntPoly};
use crate::spectral::{
    spectrum_via_quotient, strong_cospectral_decomposition, twin_multiplicities, Cospectrality, EigenvalueRepr,
    QuotientSpectrum, Spectrum, SupportDecomposition,
};
use crate::walk::{default_grid_step, FrKind, FrOutcome, Walk, AMP_THRESHOLD};

/// Default vertex count above which no dense matrix is built.
pub const DEFAULT_DENSE_CAP: usize = 5000;

/// Tolerance for "the mirrored eigenvalue is present" in the symmetry check.
pub const MIRROR_TOL: f64 = 1e-6;

/// Dense cap from `ZDGQ_DENSE_CAP`, falling back to [`DEFAULT_DENSE_CAP`].
pub fn dense_cap_from_env() -> usize {
    std::env::var("ZDGQ_DENSE_CAP").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_DENSE_CAP)
}

/// A time `(num / den) * pi / sqrt(radicand)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactTime {
    num: i64,
    den: i64,
    radicand: u64,
}

impl ExactTime {
    pub fn new(num: i64, den: i64, radicand: u64) -> Self {
        assert!(num > 0 && den > 0 && radicand > 0, "times are positive");
        let g = num.gcd(&den);
        Self { num: num / g, den: den / g, radicand }
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64 * PI / (self.radicand as f64).sqrt()
    }

    /// The same time scaled by a positive integer.
    pub fn times(&self, k: i64) -> Self {
        Self::new(self.num * k, self.den, self.radicand)
    }
}

impl fmt::Display for ExactTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head = if self.num == 1 { "pi".to_string() } else { format!("{}*pi", self.num) };
        if self.radicand == 1 {
            if self.den == 1 {
                write!(f, "{head}")
            } else {
                write!(f, "{head}/{}", self.den)
            }
        } else {
            let m = self.den as u128 * self.den as u128 * self.radicand as u128;
            write!(f, "{head}/sqrt({m})")
        }
    }
}

/// Phase `gamma` reduced modulo `pi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Phase {
    /// `gamma = r * pi` with `0 <= r < 1`.
    Exact(Rational64),
    /// Radians in `[0, pi)`.
    Numeric(f64),
}

impl Phase {
    fn from_fraction(r: Rational64) -> Self {
        let f = r - r.floor();
        Self::Exact(f)
    }

    pub fn radians(&self) -> f64 {
        match *self {
            Self::Exact(r) => *r.numer() as f64 / *r.denom() as f64 * PI,
            Self::Numeric(x) => x,
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Exact(r) if r.is_zero() => write!(f, "0"),
            Self::Exact(r) => {
                let (p, q) = (*r.numer(), *r.denom());
                let head = if p == 1 { "pi".to_string() } else { format!("{p}*pi") };
                if q == 1 {
                    write!(f, "{head}")
                } else {
                    write!(f, "{head}/{q}")
                }
            }
            Self::Numeric(x) => write!(f, "{x:.12}"),
        }
    }
}

/// First revival time (`k = 1`) and its phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Revival {
    pub tau: ExactTime,
    pub gamma: Phase,
}

impl Revival {
    /// `|alpha| = |cos gamma|`.
    pub fn alpha_modulus(&self) -> f64 {
        self.gamma.radians().cos().abs()
    }

    /// `|beta| = |sin gamma|`.
    pub fn beta_modulus(&self) -> f64 {
        self.gamma.radians().sin().abs()
    }
}

/// Why a verdict was reached. `code` is stable and used in CSV output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reason {
    DifferentCells,
    CellLargerThanTwo,
    TwinEigenvalueInSupport,
    MinusOneInQuotient,
    SymmetryConditionFails(&'static str),
    IntegralRatio,
    CenteredSupport,
    OffCenterSupport,
    SinglePlusEigenvalue,
    NoCandidates,
    NoPstAmongCandidates,
    NumericEvidenceOnly,
}

impl Reason {
    pub fn code(&self) -> &'static str {
        match self {
            Self::DifferentCells => "different-cells",
            Self::CellLargerThanTwo => "cell-larger-than-two",
            Self::TwinEigenvalueInSupport => "twin-eigenvalue-in-support",
            Self::MinusOneInQuotient => "minus-one-in-quotient",
            Self::SymmetryConditionFails(_) => "symmetry-condition-fails",
            Self::IntegralRatio => "integral-ratio",
            Self::CenteredSupport => "centered-support",
            Self::OffCenterSupport => "off-center-support",
            Self::SinglePlusEigenvalue => "single-plus-eigenvalue",
            Self::NoCandidates => "no-candidates",
            Self::NoPstAmongCandidates => "no-pst-among-candidates",
            Self::NumericEvidenceOnly => "numeric-evidence-only",
        }
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::DifferentCells => {
                write!(f, "vertices have different gcd with n, so their singleton-seeded equitable partitions differ")
            }
            Self::CellLargerThanTwo => write!(f, "twin cell has more than two vertices"),
            Self::TwinEigenvalueInSupport => {
                write!(f, "twin eigenvalue is a root of the cell's local minimal polynomial; not strongly cospectral")
            }
            Self::MinusOneInQuotient => {
                write!(f, "-1 is a quotient eigenvalue, outside the hypothesis of the true-twin characterization")
            }
            Self::SymmetryConditionFails(detail) => write!(f, "symmetry condition fails: {detail}"),
            Self::IntegralRatio => write!(f, "plus support is centered on theta but the revival ratio is an integer"),
            Self::CenteredSupport => write!(f, "plus support is theta + c_j sqrt(D) with integers c_j"),
            Self::OffCenterSupport => write!(f, "plus support is (a + b_j sqrt(D))/2 with a != 2 theta and D > 1"),
            Self::SinglePlusEigenvalue => write!(f, "plus support is a single eigenvalue"),
            Self::NoCandidates => write!(f, "no cell of size two"),
            Self::NoPstAmongCandidates => write!(f, "no candidate pair admits perfect state transfer"),
            Self::NumericEvidenceOnly => write!(f, "attached walk data is numeric evidence only"),
        }
    }
}

/// Symbolic verdict for a pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Verdict {
    Pst {
        tau: ExactTime,
    },
    ProperFr {
        tau: ExactTime,
        gamma: Phase,
        alpha: f64,
        beta: f64,
    },
    /// `tau` is absent when every time is a period (single-eigenvalue support).
    PeriodicOnly {
        tau: Option<ExactTime>,
    },
    None,
    Undecidable,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Pst { .. } => "PST",
            Self::ProperFr { .. } => "ProperFR",
            Self::PeriodicOnly { .. } => "PeriodicOnly",
            Self::None => "None",
            Self::Undecidable => "Undecidable",
        }
    }

    /// Ordering used to summarize a graph by its strongest pair verdict.
    pub fn strength(&self) -> u8 {
        match self {
            Self::Pst { .. } => 4,
            Self::ProperFr { .. } => 3,
            Self::PeriodicOnly { .. } => 2,
            Self::Undecidable => 1,
            Self::None => 0,
        }
    }

    pub fn tau(&self) -> Option<ExactTime> {
        match *self {
            Self::Pst { tau } | Self::ProperFr { tau, .. } => Some(tau),
            Self::PeriodicOnly { tau } => tau,
            Self::None | Self::Undecidable => None,
        }
    }

    /// PST counts as proper fractional revival with `alpha = 0`.
    pub fn has_proper_fr(&self) -> bool {
        matches!(self, Self::Pst { .. } | Self::ProperFr { .. })
    }
}

/// Verdict for a pair `{u, v}` of residues, or for the whole graph.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferVerdict {
    pub n: u64,
    pub pair: Option<(u64, u64)>,
    pub verdict: Verdict,
    pub revival: Option<Revival>,
    pub support: Option<SupportDecomposition>,
    pub justification: Vec<Reason>,
    pub numeric: Option<FrOutcome>,
    /// Whether the walk agrees with the symbolic verdict; absent when no
    /// dense check ran.
    pub confirmed: Option<bool>,
}

impl TransferVerdict {
    fn new(n: u64, pair: Option<(u64, u64)>, verdict: Verdict, justification: Vec<Reason>) -> Self {
        Self { n, pair, verdict, revival: None, support: None, justification, numeric: None, confirmed: None }
    }
}

/// Either a candidate size-2 cell or an excluded class of pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairStatus {
    Candidate(u64, u64),
    Excluded(Reason),
}

/// Pairs between cells `divisors.0` and `divisors.1` (equal for intra-cell).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairClass {
    pub divisors: (u64, u64),
    pub pair_count: u64,
    pub status: PairStatus,
}

/// Every unordered vertex pair, grouped by cells, either excluded from state
/// transfer by cell structure or marked as a candidate.
pub fn pst_exclusions(n: u64) -> Result<Vec<PairClass>> {
    let cells = crate::graph::DivisorPartition::for_modulus(n)?;
    let mut out = Vec::new();
    let cs = cells.cells();
    for (i, a) in cs.iter().enumerate() {
        let s = a.size() as u64;
        if s == 2 {
            out.push(PairClass {
                divisors: (a.divisor, a.divisor),
                pair_count: 1,
                status: PairStatus::Candidate(a.members[0], a.members[1]),
            });
        } else if s > 2 {
            out.push(PairClass {
                divisors: (a.divisor, a.divisor),
                pair_count: s * (s - 1) / 2,
                status: PairStatus::Excluded(Reason::CellLargerThanTwo),
            });
        }
        for b in &cs[i + 1..] {
            out.push(PairClass {
                divisors: (a.divisor, b.divisor),
                pair_count: s * b.size() as u64,
                status: PairStatus::Excluded(Reason::DifferentCells),
            });
        }
    }
    Ok(out)
}

/// Residue pairs forming size-2 cells.
pub fn candidate_pairs(n: u64) -> Result<Vec<(u64, u64)>> {
    Ok(pst_exclusions(n)?
        .into_iter()
        .filter_map(|c| match c.status {
            PairStatus::Candidate(u, v) => Some((u, v)),
            PairStatus::Excluded(_) => None,
        })
        .collect())
}

/// Shape of a plus support relative to the twin eigenvalue `theta`.
#[derive(Debug, Clone, PartialEq)]
enum SupportForm {
    /// `theta + c_j sqrt(delta)`, `delta = 1` or squarefree.
    Centered {
        delta: u64,
        c: Vec<i64>,
    },
    /// `(a + b_j sqrt(delta)) / 2` with `a != 2 theta`, `delta > 1`, `b_j` even.
    OffCenter {
        a: i64,
        delta: u64,
        b: Vec<i64>,
    },
    Single(i64),
    Fails(&'static str),
}

/// Writes each exact value as `(a + b sqrt(delta)) / 2` over a common `delta`.
fn common_field(values: &[EigenvalueRepr]) -> std::result::Result<(u64, Vec<(i64, i64)>), &'static str> {
    let mut delta = None;
    for v in values {
        match *v {
            EigenvalueRepr::Numeric { .. } => return Err("support has eigenvalues of degree at least 3"),
            EigenvalueRepr::ExactQuadratic { delta: d, .. } => match delta {
                None => delta = Some(d),
                Some(e) if e != d => return Err("support mixes quadratic fields"),
                _ => {}
            },
            EigenvalueRepr::ExactInteger(_) => {}
        }
    }
    let pairs = values
        .iter()
        .map(|v| match *v {
            EigenvalueRepr::ExactInteger(z) => (2 * z, 0),
            EigenvalueRepr::ExactQuadratic { a, b, .. } => (a, b),
            EigenvalueRepr::Numeric { .. } => unreachable!(),
        })
        .collect();
    Ok((delta.unwrap_or(1), pairs))
}

fn support_form(plus: &[EigenvalueRepr], theta: i64) -> SupportForm {
    if plus.len() == 1 {
        return match plus[0] {
            EigenvalueRepr::ExactInteger(z) => SupportForm::Single(z),
            _ => SupportForm::Fails("single plus eigenvalue is irrational"),
        };
    }
    let (delta, pairs) = match common_field(plus) {
        Ok(x) => x,
        Err(why) => return SupportForm::Fails(why),
    };
    if pairs.iter().any(|&(_, b)| b % 2 != 0) {
        return SupportForm::Fails("a coefficient of sqrt(D) is odd");
    }
    if delta == 1 {
        return SupportForm::Centered { delta, c: pairs.iter().map(|&(a, _)| a / 2 - theta).collect() };
    }
    let a = pairs[0].0;
    if pairs.iter().any(|&(x, _)| x != a) {
        return SupportForm::Fails("eigenvalues do not share a rational part");
    }
    let b: Vec<i64> = pairs.iter().map(|&(_, b)| b).collect();
    if a == 2 * theta {
        SupportForm::Centered { delta, c: b.iter().map(|&x| x / 2).collect() }
    } else {
        SupportForm::OffCenter { a, delta, b }
    }
}

/// `(g, c_1)` for coefficients `c_j`: `g = gcd(c_1 - c_j)` with `c_1` the largest.
fn spread(c: &[i64]) -> (i64, i64) {
    let c1 = *c.iter().max().expect("nonempty");
    (gcd_all(c.iter().map(|&x| c1 - x)), c1)
}

/// First revival time and phase for a strongly cospectral twin pair.
///
/// The time is `2 pi q / (lambda_1 - lambda_2)`, which for supports of the
/// admissible shapes reduces to `2 pi / (g sqrt(D))`; the phase is
/// `q (lambda_1 - theta) / (lambda_1 - lambda_2) * pi` modulo `pi`.
pub fn fr_time_phase(decomp: &SupportDecomposition) -> Result<Revival> {
    let theta = decomp.theta;
    match support_form(&decomp.plus, theta) {
        SupportForm::Single(z) => {
            Ok(Revival { tau: ExactTime::new(1, (z - theta).abs(), 1), gamma: Phase::Exact(Rational64::new(1, 2)) })
        }
        SupportForm::Centered { delta, c } => {
            let (g, c1) = spread(&c);
            if c1 % g == 0 {
                return Err(Error::RatioCondition(format!(
                    "q (lambda_1 - theta) / (lambda_1 - lambda_2) = {} is an integer",
                    c1 / g
                )));
            }
            Ok(Revival { tau: ExactTime::new(2, g, delta), gamma: Phase::from_fraction(Rational64::new(c1, g)) })
        }
        SupportForm::OffCenter { a, delta, b } => {
            let halves: Vec<i64> = b.iter().map(|&x| x / 2).collect();
            let (g, c1) = spread(&halves);
            let lambda1 = (a as f64 + 2.0 * c1 as f64 * (delta as f64).sqrt()) / 2.0;
            let r = (lambda1 - theta as f64) / (g as f64 * (delta as f64).sqrt());
            Ok(Revival { tau: ExactTime::new(2, g, delta), gamma: Phase::Numeric((r - r.floor()) * PI) })
        }
        SupportForm::Fails(why) => Err(Error::RatioCondition(why.to_string())),
    }
}

/// Exact periodicity of a support set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Periodicity {
    NotPeriodic,
    /// Minimum period; absent when the support is a single eigenvalue.
    Periodic(Option<ExactTime>),
}

impl Periodicity {
    pub fn is_periodic(&self) -> bool {
        matches!(self, Self::Periodic(_))
    }

    pub fn period(&self) -> Option<ExactTime> {
        match *self {
            Self::Periodic(t) => t,
            Self::NotPeriodic => None,
        }
    }
}

/// Periodicity of a vertex (or graph) whose support is `values`: all
/// integers, or all `(a + b_j sqrt(D))/2` with a common `a` and `D`. The
/// minimum period is `2 pi / h` (integers) or `4 pi / (h sqrt(D))` with `h`
/// the gcd of differences.
pub fn support_periodicity(values: &[EigenvalueRepr]) -> Periodicity {
    if values.len() <= 1 {
        return Periodicity::Periodic(None);
    }
    let Ok((delta, pairs)) = common_field(values) else {
        return Periodicity::NotPeriodic;
    };
    let a0 = pairs[0].0;
    if delta == 1 {
        let h = gcd_all(pairs.iter().map(|&(a, _)| (a - a0) / 2));
        return Periodicity::Periodic(Some(ExactTime::new(2, h, 1)));
    }
    if pairs.iter().any(|&(a, _)| a != a0) {
        return Periodicity::NotPeriodic;
    }
    let b0 = pairs[0].1;
    let h = gcd_all(pairs.iter().map(|&(_, b)| b - b0));
    Periodicity::Periodic(Some(ExactTime::new(4, h, delta)))
}

fn pair_of(q: &QuotientSpectrum, x: u64, y: u64) -> Result<(usize, usize)> {
    let n = q.modulus();
    let i = q.cells().cell_of_residue(x).ok_or(Error::NotAVertex { x, n })?;
    let j = q.cells().cell_of_residue(y).ok_or(Error::NotAVertex { x: y, n })?;
    if x == y {
        return Err(Error::SameVertex(x as usize));
    }
    Ok((i, j))
}

/// Symbolic verdict for residues `x, y`, without numeric confirmation.
pub fn symbolic_verdict(q: &QuotientSpectrum, x: u64, y: u64) -> Result<TransferVerdict> {
    let n = q.modulus();
    let (i, j) = pair_of(q, x, y)?;
    let pair = Some((x.min(y), x.max(y)));
    if i != j {
        return Ok(TransferVerdict::new(n, pair, Verdict::None, vec![Reason::DifferentCells]));
    }
    let cell = &q.cells().cells()[i];
    if cell.size() > 2 {
        return Ok(TransferVerdict::new(n, pair, Verdict::None, vec![Reason::CellLargerThanTwo]));
    }
    if cell.kind == CellKind::Complete && q.contains(-1) {
        return Ok(TransferVerdict::new(n, pair, Verdict::Undecidable, vec![Reason::MinusOneInQuotient]));
    }
    let decomp = match strong_cospectral_decomposition(q, x, y)? {
        Cospectrality::Strong(d) => d,
        Cospectrality::NotStrong(_) => {
            return Ok(TransferVerdict::new(n, pair, Verdict::None, vec![Reason::TwinEigenvalueInSupport]))
        }
        Cospectrality::Undetermined => {
            return Ok(TransferVerdict::new(n, pair, Verdict::Undecidable, vec![Reason::MinusOneInQuotient]))
        }
    };
    let theta = decomp.theta;
    let (verdict, reasons) = match support_form(&decomp.plus, theta) {
        SupportForm::Fails(why) => (Verdict::None, vec![Reason::SymmetryConditionFails(why)]),
        SupportForm::Single(z) => {
            (Verdict::Pst { tau: ExactTime::new(1, (z - theta).abs(), 1) }, vec![Reason::SinglePlusEigenvalue])
        }
        SupportForm::Centered { delta, c } => {
            let (g, c1) = spread(&c);
            if c1 % g == 0 {
                let mut phi = decomp.plus.clone();
                phi.push(EigenvalueRepr::ExactInteger(theta));
                let tau = support_periodicity(&phi).period();
                (Verdict::PeriodicOnly { tau }, vec![Reason::CenteredSupport, Reason::IntegralRatio])
            } else {
                let r = Rational64::new(c1, g);
                let first = ExactTime::new(2, g, delta);
                if *r.denom() % 2 == 0 {
                    // gamma = pi/2 first happens at k = denom/2.
                    (Verdict::Pst { tau: first.times(*r.denom() / 2) }, vec![Reason::CenteredSupport])
                } else {
                    let rev = fr_time_phase(&decomp)?;
                    let v = Verdict::ProperFr {
                        tau: rev.tau,
                        gamma: rev.gamma,
                        alpha: rev.alpha_modulus(),
                        beta: rev.beta_modulus(),
                    };
                    (v, vec![Reason::CenteredSupport])
                }
            }
        }
        SupportForm::OffCenter { .. } => {
            let rev = fr_time_phase(&decomp)?;
            let v = Verdict::ProperFr {
                tau: rev.tau,
                gamma: rev.gamma,
                alpha: rev.alpha_modulus(),
                beta: rev.beta_modulus(),
            };
            (v, vec![Reason::OffCenterSupport])
        }
    };
    let mut out = TransferVerdict::new(n, pair, verdict, reasons);
    out.revival = fr_time_phase(&decomp).ok();
    out.support = Some(decomp);
    Ok(out)
}

/// Dense walk on `Γ(Z_n)` used for numeric confirmation.
pub struct NumericContext {
    zn: ZnGraph,
    walk: Walk,
}

impl NumericContext {
    pub fn new(n: u64) -> Result<Self> {
        let zn = ZnGraph::new(n)?;
        let walk = Walk::of_graph(zn.graph())?;
        Ok(Self { zn, walk })
    }

    /// Built only when the vertex count is within `cap`.
    pub fn within_cap(n: u64, cap: usize) -> Result<Option<Self>> {
        let order = arithmetic::zero_divisor_count(n)? as usize;
        if order > cap {
            return Ok(None);
        }
        Self::new(n).map(Some)
    }

    pub fn graph(&self) -> &ZnGraph {
        &self.zn
    }

    pub fn walk(&self) -> &Walk {
        &self.walk
    }

    /// `fr_test` on residues.
    pub fn fr_test(&self, x: u64, y: u64, t: f64) -> Result<FrOutcome> {
        self.walk.fr_test(self.zn.require_index(x)?, self.zn.require_index(y)?, t)
    }

    /// Largest `|H_uv|` on a grid up to `t_max`, with its refined time.
    pub fn max_transfer(&self, x: u64, y: u64, t_max: f64) -> Result<(f64, f64)> {
        let pw = self.walk.pair(self.zn.require_index(x)?, self.zn.require_index(y)?)?;
        Ok(pw.max_transfer(t_max, default_grid_step(self.walk.spectral_radius())))
    }

    /// First numerically detected period of residue `x` up to `t_max`.
    pub fn first_period(&self, x: u64, t_max: f64) -> Result<Option<f64>> {
        let u = self.zn.require_index(x)?;
        let pw = self.walk.pair(u, u)?;
        Ok(pw.periodicity_search(t_max, default_grid_step(self.walk.spectral_radius())).first().copied())
    }

    /// Falsification horizon `50 * 2 pi / lambda_max`.
    pub fn sweep_horizon(&self) -> f64 {
        50.0 * 2.0 * PI / self.walk.spectral_radius().max(1e-12)
    }
}

/// Attaches walk data to a symbolic verdict and records agreement.
pub fn confirm(v: &mut TransferVerdict, ctx: &NumericContext) -> Result<()> {
    let Some((x, y)) = v.pair else { return Ok(()) };
    match v.verdict {
        Verdict::Pst { tau } => {
            let o = ctx.fr_test(x, y, tau.value())?;
            v.confirmed = Some(o.kind == FrKind::Pst);
            v.numeric = Some(o);
        }
        Verdict::ProperFr { tau, beta, .. } => {
            let o = ctx.fr_test(x, y, tau.value())?;
            v.confirmed = Some(o.kind == FrKind::ProperFr && (o.beta.norm() - beta).abs() <= 1e-6);
            v.numeric = Some(o);
        }
        Verdict::PeriodicOnly { tau } => {
            let t = tau.map_or(1.0, |t| t.value());
            let o = ctx.fr_test(x, y, t)?;
            v.confirmed = Some(o.alpha.norm() >= 1.0 - AMP_THRESHOLD);
            v.numeric = Some(o);
        }
        Verdict::Undecidable => {
            let (t, _) = ctx.max_transfer(x, y, ctx.sweep_horizon())?;
            v.numeric = Some(ctx.fr_test(x, y, t)?);
            if !v.justification.contains(&Reason::NumericEvidenceOnly) {
                v.justification.push(Reason::NumericEvidenceOnly);
            }
        }
        Verdict::None => {}
    }
    Ok(())
}

/// Proper fractional revival (including PST) test for residues `u, v`, with
/// numeric confirmation when `Γ(Z_n)` is within the dense cap.
pub fn proper_fr_test(n: u64, u: u64, v: u64) -> Result<TransferVerdict> {
    let q = QuotientSpectrum::new(n)?;
    let mut out = symbolic_verdict(&q, u, v)?;
    if out.verdict != Verdict::None {
        if let Some(ctx) = NumericContext::within_cap(n, dense_cap_from_env())? {
            confirm(&mut out, &ctx)?;
        }
    }
    Ok(out)
}

/// PST verdict for the whole graph: the PST pair with the smallest time, or
/// `None` with the reason no candidate qualifies.
pub fn pst_verdict(n: u64) -> Result<TransferVerdict> {
    let q = QuotientSpectrum::new(n)?;
    let candidates = candidate_pairs(n)?;
    let ctx = NumericContext::within_cap(n, dense_cap_from_env())?;
    let mut best: Option<TransferVerdict> = None;
    for &(x, y) in &candidates {
        let mut v = symbolic_verdict(&q, x, y)?;
        if let Verdict::Pst { tau } = v.verdict {
            if let Some(ctx) = &ctx {
                confirm(&mut v, ctx)?;
            }
            if best.as_ref().and_then(|b| b.verdict.tau()).is_none_or(|b| tau.value() < b.value()) {
                best = Some(v);
            }
        }
    }
    Ok(best.unwrap_or_else(|| {
        let why = if candidates.is_empty() { Reason::NoCandidates } else { Reason::NoPstAmongCandidates };
        TransferVerdict::new(n, None, Verdict::None, vec![why])
    }))
}

/// Result of the periodicity test on one vertex of a twin pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicityReport {
    pub pair: (u64, u64),
    pub theta: i64,
    pub support: Vec<EigenvalueRepr>,
    pub periodicity: Periodicity,
    /// Non-integer support eigenvalues whose mirror about `theta` is absent,
    /// with the distance from the mirror to the nearest support eigenvalue.
    pub unmirrored: Vec<(f64, f64)>,
}

impl PeriodicityReport {
    pub fn is_symmetric(&self) -> bool {
        self.unmirrored.is_empty()
    }
}

/// Periodicity of `u` in the twin pair `{u, v}` together with the mirror
/// symmetry check of its support (`lambda -> 2 theta - lambda`).
pub fn periodicity_test(n: u64, u: u64, v: u64) -> Result<PeriodicityReport> {
    let q = QuotientSpectrum::new(n)?;
    let (i, _) = pair_of(&q, u, v)?;
    let theta = q.cells().cells()[i].twin_eigenvalue();
    let support = q.vertex_support(i)?;
    let values: Vec<f64> = support.iter().map(|s| s.value()).collect();
    let unmirrored = support
        .iter()
        .filter(|s| s.exact_integer().is_none())
        .filter_map(|s| {
            let mirror = 2.0 * theta as f64 - s.value();
            let gap = values.iter().map(|x| (x - mirror).abs()).fold(f64::INFINITY, f64::min);
            (gap > MIRROR_TOL).then_some((s.value(), gap))
        })
        .collect();
    Ok(PeriodicityReport {
        pair: (u.min(v), u.max(v)),
        theta,
        periodicity: support_periodicity(&support),
        support,
        unmirrored,
    })
}

/// Factorization shape of `n` relevant to the `-1` exclusion results.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Pq {
        p: u64,
        q: u64,
    },
    /// `n = p^2 q`.
    P2Q {
        p: u64,
        q: u64,
    },
    P1P2P3 {
        p1: u64,
        p2: u64,
        p3: u64,
    },
    PkOdd {
        p: u64,
        k: u32,
    },
    PkEven {
        p: u64,
        k: u32,
    },
    Other,
}

impl Family {
    pub fn of(n: u64) -> Result<Self> {
        let f = arithmetic::check_composite(n)?;
        Ok(match *f.factors() {
            [(p, 1), (q, 1)] => Self::Pq { p, q },
            [(p, 2), (q, 1)] | [(q, 1), (p, 2)] => Self::P2Q { p, q },
            [(p1, 1), (p2, 1), (p3, 1)] => Self::P1P2P3 { p1, p2, p3 },
            [(p, k)] if k % 2 == 1 => Self::PkOdd { p, k },
            [(p, k)] => Self::PkEven { p, k },
            _ => Self::Other,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Pq { .. } => "pq",
            Self::P2Q { .. } => "p^2q",
            Self::P1P2P3 { .. } => "p1p2p3",
            Self::PkOdd { .. } => "p^k-odd",
            Self::PkEven { .. } => "p^k-even",
            Self::Other => "other",
        }
    }

    /// Closed form of `det(-I - C) = charpoly(-1)` for the proved families.
    pub fn closed_form_at_minus_one(&self) -> Option<BigInt> {
        let phi = |m: u64| BigInt::from(totient(m).expect("m >= 1"));
        let big = |m: u64| BigInt::from(m);
        let one = BigInt::one();
        Some(match *self {
            Self::Pq { p, q } => &one - big(p - 1) * big(q - 1),
            Self::P2Q { p, q } => {
                let (p, q) = (big(p), big(q));
                let (p1, q1) = (&p - 1, &q - 1);
                &p1 * (&one - &p * &p * &q1 + &p * &p1 * &p1 * &q1 * &q1)
            }
            Self::P1P2P3 { p1, p2, p3 } => {
                let qq = phi(p1 * p2 * p3) - 1;
                let s = phi(p1 * p2) + phi(p1 * p3) + phi(p2 * p3);
                BigInt::from(2) - &qq * (&qq * &qq - s - 2)
            }
            Self::PkOdd { p, k } => {
                let m = (k - 1) / 2;
                let pw = |e: u32| p.pow(e);
                let mut acc: BigInt = (1..=m).map(|t| phi(pw(t))).product();
                acc *= &one - phi(pw(m + 1));
                for i in 2..=m {
                    acc *= -phi(pw(m + i));
                }
                acc
            }
            Self::PkEven { p, k } => {
                let m = k / 2;
                let pw = |e: u32| p.pow(e);
                let mut det_x = one.clone();
                if m >= 2 {
                    det_x = -phi(pw(m + 1));
                    for i in 3..=m {
                        det_x *= -phi(pw(m - 1 + i));
                    }
                }
                -(1..=m).map(|t| phi(pw(t))).product::<BigInt>() * det_x
            }
            Self::Other => return None,
        })
    }
}

/// Closed form versus exact evaluation of `charpoly(-1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyCheck {
    pub n: u64,
    pub family: Family,
    pub closed_form: Option<BigInt>,
    pub exact: BigInt,
}

impl FamilyCheck {
    /// `-1` is not a quotient eigenvalue.
    pub fn minus_one_excluded(&self) -> bool {
        !self.exact.is_zero()
    }

    /// `None` outside the proved families.
    pub fn agrees(&self) -> Option<bool> {
        self.closed_form.as_ref().map(|c| *c == self.exact)
    }
}

/// Exact `charpoly(-1)` of the divisor quotient, without any eigensolver.
pub fn exact_charpoly_at(n: u64, x: i64) -> Result<BigInt> {
    let rows = divisor_quotient(n)?.integer_rows().expect("divisor quotient is integral");
    Ok(poly::charpoly(&rows)?.eval_i64(x))
}

pub fn minus_one_family_check(n: u64) -> Result<FamilyCheck> {
    let family = Family::of(n)?;
    Ok(FamilyCheck { n, family, closed_form: family.closed_form_at_minus_one(), exact: exact_charpoly_at(n, -1)? })
}

/// Outcome of the search for a splitting of the `p^2 q` quartic into two
/// monic integer quadratics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuarticFactorReport {
    pub p: u64,
    pub q: u64,
    /// Ascending coefficients `c_0 .. c_4`.
    pub coeffs: [i128; 5],
    /// `(x^2 + a x + b, x^2 + c x + d)` as `[(a, b), (c, d)]`.
    pub factorization: Option<[(i128, i128); 2]>,
}

impl QuarticFactorReport {
    pub fn poly(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }
}

/// Quartic factor of the quotient characteristic polynomial for `n = p^2 q`.
pub fn p2q_quartic(p: u64, q: u64) -> [i128; 5] {
    let (p, q) = (p as i128, q as i128);
    [p * (p - 1).pow(3) * (q - 1).pow(2), p * (p - 1) * (p - 2) * (q - 1), -2 * p * (p - 1) * (q - 1), -(p - 2), 1]
}

fn isqrt_exact(m: i128) -> Option<i128> {
    if m < 0 {
        return None;
    }
    let r = (m as f64).sqrt() as i128;
    (r.saturating_sub(2)..=r + 2).find(|&s| s >= 0 && s * s == m)
}

/// Exhaustive search over divisor pairs `b d = c_0` (both signs), solving
/// the remaining coefficient equations for `a, c` and verifying exactly.
pub fn quartic_factor_search(p: u64, q: u64) -> Result<QuarticFactorReport> {
    if p == q || !arithmetic::is_prime(p) || !arithmetic::is_prime(q) {
        return Err(Error::InvalidModulus(p * p * q, "need distinct primes p, q"));
    }
    let coeffs = p2q_quartic(p, q);
    Ok(QuarticFactorReport { p, q, coeffs, factorization: split_quartic(coeffs)? })
}

/// Monic integer quadratic pair `[(a, b), (c, d)]` with
/// `(x^2 + a x + b)(x^2 + c x + d)` equal to the monic quartic `coeffs`.
pub fn split_quartic(coeffs: [i128; 5]) -> Result<Option<[(i128, i128); 2]>> {
    let [c0, c1, c2, c3, c4] = coeffs;
    if c4 != 1 {
        return Err(Error::NotMonic(4));
    }
    let check =
        |a: i128, b: i128, c: i128, d: i128| a + c == c3 && b + d + a * c == c2 && a * d + b * c == c1 && b * d == c0;
    let bs: Vec<i128> = if c0 == 0 {
        vec![0]
    } else if c0.abs() == 1 {
        vec![1, -1]
    } else {
        let m = u64::try_from(c0.unsigned_abs()).map_err(|_| Error::InvalidModulus(0, "constant term too large"))?;
        arithmetic::factorize(m)?.divisors().into_iter().flat_map(|d| [d as i128, -(d as i128)]).collect()
    };
    for b in bs {
        // with b = 0 the cofactor constant d is free; c0 = 0 forces it from c1 = a d
        let ds: Vec<i128> = if b == 0 { (-c1.abs()..=c1.abs()).collect() } else { vec![c0 / b] };
        for d in ds {
            let mut cands = Vec::new();
            if d != b {
                let num = c1 - b * c3;
                if num % (d - b) == 0 {
                    cands.push(num / (d - b));
                }
            } else if c1 == b * c3 {
                if let Some(s) = isqrt_exact(c3 * c3 - 4 * (c2 - 2 * b)) {
                    if (c3 + s) % 2 == 0 {
                        cands.push((c3 + s) / 2);
                        cands.push((c3 - s) / 2);
                    }
                }
            }
            for a in cands {
                let c = c3 - a;
                if check(a, b, c, d) {
                    return Ok(Some([(a, b), (c, d)]));
                }
            }
        }
    }
    Ok(None)
}

/// Periodicity and proper fractional revival for a bipartite `Γ(Z_n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BipartiteClass {
    pub n: u64,
    pub is_periodic: bool,
    pub has_proper_fr: bool,
}

/// Rejects non-bipartite graphs with an odd cycle (as residues); otherwise
/// classifies from the exact spectrum and the candidate pair verdicts.
pub fn bipartite_classification(n: u64) -> Result<BipartiteClass> {
    let zn = ZnGraph::new(n)?;
    if let Err(cycle) = zn.graph().two_coloring() {
        return Err(Error::NotBipartite(cycle.into_iter().map(|i| zn.residue(i)).collect()));
    }
    let q = QuotientSpectrum::new(n)?;
    let spectrum = spectrum_via_quotient(&q);
    let values: Vec<EigenvalueRepr> = spectrum.entries().iter().map(|&(v, _)| v).collect();
    let mut has_proper_fr = false;
    for (x, y) in candidate_pairs(n)? {
        has_proper_fr |= symbolic_verdict(&q, x, y)?.verdict.has_proper_fr();
    }
    Ok(BipartiteClass { n, is_periodic: support_periodicity(&values).is_periodic(), has_proper_fr })
}

/// Options for [`analyze`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnalysisOptions {
    pub numeric: bool,
    pub dense_cap: usize,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self { numeric: true, dense_cap: DEFAULT_DENSE_CAP }
    }
}

impl AnalysisOptions {
    pub fn from_env() -> Self {
        Self { numeric: true, dense_cap: dense_cap_from_env() }
    }
}

/// Per-cell summary with the exact vertex support and period.
#[derive(Debug, Clone, PartialEq)]
pub struct CellReport {
    pub divisor: u64,
    pub size: usize,
    pub kind: CellKind,
    pub support: Vec<EigenvalueRepr>,
    pub periodicity: Periodicity,
    /// First period found by the walk; not claimed minimal.
    pub numeric_period: Option<f64>,
}

/// Everything known about `Γ(Z_n)`.
#[derive(Debug, Clone)]
pub struct Report {
    pub n: u64,
    pub vertex_count: usize,
    pub quotient: QuotientSpectrum,
    pub spectrum: Spectrum,
    /// Multiplicities of `0` and `-1` contributed by twin cells.
    pub twin_multiplicities: (usize, usize),
    pub cells: Vec<CellReport>,
    pub exclusions: Vec<PairClass>,
    pub pairs: Vec<TransferVerdict>,
    pub graph_periodicity: Periodicity,
    pub family: FamilyCheck,
    /// Whether dense numeric checks ran.
    pub numeric: bool,
}

impl Report {
    /// Number of cells (the quotient order).
    pub fn xi(&self) -> usize {
        self.cells.len()
    }

    /// The strongest pair verdict, or `None` when there are no candidates.
    pub fn summary(&self) -> Verdict {
        self.pairs.iter().map(|p| p.verdict).max_by_key(|v| v.strength()).unwrap_or(Verdict::None)
    }

    /// Smallest positive-claim time over all pairs.
    pub fn tau_min(&self) -> Option<ExactTime> {
        self.pairs
            .iter()
            .filter(|p| p.verdict.has_proper_fr())
            .filter_map(|p| p.verdict.tau())
            .min_by(|a, b| a.value().total_cmp(&b.value()))
    }

    /// True unless some numeric check disagreed with a symbolic verdict.
    pub fn numerics_agree(&self) -> bool {
        self.pairs.iter().all(|p| p.confirmed != Some(false))
            && self.cells.iter().all(|c| match (c.periodicity.period(), c.numeric_period) {
                (Some(t), Some(x)) => (t.value() - x).abs() <= 1e-6 * t.value().max(1.0),
                (Some(_), None) => !self.numeric,
                _ => true,
            })
    }
}

/// Full analysis of `Γ(Z_n)`: cells, exact spectrum, pair verdicts, vertex
/// and graph periodicity, the `-1` family check, and numeric confirmation
/// when the graph fits under the dense cap.
pub fn analyze(n: u64, opts: AnalysisOptions) -> Result<Report> {
    let q = QuotientSpectrum::new(n)?;
    let vertex_count = arithmetic::zero_divisor_count(n)? as usize;
    let spectrum = spectrum_via_quotient(&q);
    let ctx = if opts.numeric { NumericContext::within_cap(n, opts.dense_cap)? } else { None };

    let mut cells = Vec::new();
    for (i, c) in q.cells().cells().iter().enumerate() {
        let support = q.vertex_support(i)?;
        let periodicity = support_periodicity(&support);
        let numeric_period = match (&ctx, periodicity.period()) {
            (Some(ctx), Some(t)) => ctx.first_period(c.members[0], 1.5 * t.value())?,
            _ => None,
        };
        cells.push(CellReport {
            divisor: c.divisor,
            size: c.size(),
            kind: c.kind,
            support,
            periodicity,
            numeric_period,
        });
    }

    let mut pairs = Vec::new();
    for (x, y) in candidate_pairs(n)? {
        let mut v = symbolic_verdict(&q, x, y)?;
        if let Some(ctx) = &ctx {
            confirm(&mut v, ctx)?;
        }
        pairs.push(v);
    }

    let values: Vec<EigenvalueRepr> = spectrum.entries().iter().map(|&(v, _)| v).collect();
    Ok(Report {
        n,
        vertex_count,
        twin_multiplicities: twin_multiplicities(q.cells()),
        spectrum,
        cells,
        exclusions: pst_exclusions(n)?,
        pairs,
        graph_periodicity: support_periodicity(&values),
        family: minus_one_family_check(n)?,
        numeric: ctx.is_some(),
        quotient: q,
    })
}
