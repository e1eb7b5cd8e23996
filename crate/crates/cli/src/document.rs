//! Serializable report types. Every float is rendered as a decimal string
//! with 12 significant digits so JSON output is byte-stable, and exact
//! values carry their closed form alongside.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use zdgq::classify::{ExactTime, PairStatus, Periodicity, Phase, Report, TransferVerdict, Verdict};
use zdgq::graph::CellKind;
use zdgq::spectral::EigenvalueRepr;

/// Bump on any field change.
pub const SCHEMA_VERSION: u32 = 1;

/// Renders `x` with 12 significant digits, trailing zeros trimmed.
pub fn decimal(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() { "0".into() } else { x.to_string() };
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-6..=15).contains(&magnitude) {
        return format!("{x:.11e}");
    }
    let places = (11 - magnitude).max(0) as usize;
    let s = format!("{x:.places$}");
    let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueDoc {
    pub decimal: String,
    pub exact: Option<String>,
    pub tag: String,
}

impl From<&EigenvalueRepr> for ValueDoc {
    fn from(v: &EigenvalueRepr) -> Self {
        Self { decimal: decimal(v.value()), exact: v.is_exact().then(|| v.to_string()), tag: v.tag().into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeDoc {
    pub decimal: String,
    pub exact: String,
}

impl From<ExactTime> for TimeDoc {
    fn from(t: ExactTime) -> Self {
        Self { decimal: decimal(t.value()), exact: t.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseDoc {
    pub decimal: String,
    pub exact: Option<String>,
}

impl From<Phase> for PhaseDoc {
    fn from(p: Phase) -> Self {
        Self { decimal: decimal(p.radians()), exact: matches!(p, Phase::Exact(_)).then(|| p.to_string()) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub value: ValueDoc,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodDoc {
    pub periodic: bool,
    pub period: Option<TimeDoc>,
}

impl From<Periodicity> for PeriodDoc {
    fn from(p: Periodicity) -> Self {
        Self { periodic: p.is_periodic(), period: p.period().map(TimeDoc::from) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellDoc {
    pub divisor: u64,
    pub size: usize,
    pub kind: String,
    pub support: Vec<ValueDoc>,
    pub periodicity: PeriodDoc,
    pub numeric_period: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionDoc {
    pub cells: Vec<CellDoc>,
    /// Multiplicities of `0` and `-1` from twin cells.
    pub twin_zero: usize,
    pub twin_minus_one: usize,
    pub quotient_charpoly: String,
    pub symmetrized_quotient: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReasonDoc {
    pub code: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExclusionDoc {
    pub divisors: [u64; 2],
    pub pair_count: u64,
    pub candidate: Option<[u64; 2]>,
    pub reason: Option<ReasonDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericDoc {
    pub kind: String,
    pub alpha_modulus: String,
    pub beta_modulus: String,
    /// Argument of `alpha`, extracted from the walk.
    pub zeta: String,
    pub residual: String,
    pub confirmed: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairDoc {
    pub pair: [u64; 2],
    pub verdict: String,
    pub tau: Option<TimeDoc>,
    pub gamma: Option<PhaseDoc>,
    pub alpha_modulus: Option<String>,
    pub beta_modulus: Option<String>,
    pub justification: Vec<ReasonDoc>,
    pub numeric: Option<NumericDoc>,
}

impl From<&TransferVerdict> for PairDoc {
    fn from(v: &TransferVerdict) -> Self {
        let (x, y) = v.pair.unwrap_or((0, 0));
        let gamma = match v.verdict {
            Verdict::ProperFr { gamma, .. } => Some(gamma),
            Verdict::Pst { .. } => Some(Phase::Exact(Rational64::new(1, 2))),
            _ => None,
        };
        let moduli = match v.verdict {
            Verdict::ProperFr { alpha, beta, .. } => Some((alpha, beta)),
            Verdict::Pst { .. } => Some((0.0, 1.0)),
            _ => None,
        };
        Self {
            pair: [x, y],
            verdict: v.verdict.label().into(),
            tau: v.verdict.tau().map(TimeDoc::from),
            gamma: gamma.map(PhaseDoc::from),
            alpha_modulus: moduli.map(|m| decimal(m.0)),
            beta_modulus: moduli.map(|m| decimal(m.1)),
            justification: v.justification.iter().map(reason).collect(),
            numeric: v.numeric.as_ref().map(|o| NumericDoc {
                kind: o.kind.to_string(),
                alpha_modulus: decimal(o.alpha.norm()),
                beta_modulus: decimal(o.beta.norm()),
                zeta: decimal(o.alpha.arg()),
                residual: decimal(o.residual),
                confirmed: v.confirmed,
            }),
        }
    }
}

pub fn reason(r: &zdgq::classify::Reason) -> ReasonDoc {
    ReasonDoc { code: r.code().into(), message: r.to_string() }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyDoc {
    pub family: String,
    pub charpoly_at_minus_one: String,
    pub closed_form: Option<String>,
    pub agrees: Option<bool>,
    pub minus_one_excluded: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryDoc {
    pub verdict: String,
    pub tau_min: Option<TimeDoc>,
    pub numerics_agree: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingDoc {
    pub total_seconds: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub n: u64,
    pub vertex_count: usize,
    pub xi: usize,
    pub numeric: bool,
    pub spectrum: Vec<SpectrumEntry>,
    pub partition: PartitionDoc,
    pub exclusions: Vec<ExclusionDoc>,
    pub pairs: Vec<PairDoc>,
    pub graph_periodicity: PeriodDoc,
    pub family: FamilyDoc,
    pub summary: SummaryDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<TimingDoc>,
}

impl From<&Report> for ReportDocument {
    fn from(r: &Report) -> Self {
        let c = r.quotient.symmetrized();
        let xi = r.xi();
        let cells = r
            .cells
            .iter()
            .map(|cell| CellDoc {
                divisor: cell.divisor,
                size: cell.size,
                kind: match cell.kind {
                    CellKind::Null => "null",
                    CellKind::Complete => "complete",
                }
                .into(),
                support: cell.support.iter().map(ValueDoc::from).collect(),
                periodicity: cell.periodicity.into(),
                numeric_period: cell.numeric_period.map(decimal),
            })
            .collect();
        let exclusions = r
            .exclusions
            .iter()
            .map(|e| {
                let (candidate, why) = match &e.status {
                    PairStatus::Candidate(u, v) => (Some([*u, *v]), None),
                    PairStatus::Excluded(why) => (None, Some(reason(why))),
                };
                ExclusionDoc {
                    divisors: [e.divisors.0, e.divisors.1],
                    pair_count: e.pair_count,
                    candidate,
                    reason: why,
                }
            })
            .collect();
        Self {
            schema_version: SCHEMA_VERSION,
            n: r.n,
            vertex_count: r.vertex_count,
            xi,
            numeric: r.numeric,
            spectrum: r
                .spectrum
                .entries()
                .iter()
                .map(|(v, m)| SpectrumEntry { value: v.into(), multiplicity: *m })
                .collect(),
            partition: PartitionDoc {
                cells,
                twin_zero: r.twin_multiplicities.0,
                twin_minus_one: r.twin_multiplicities.1,
                quotient_charpoly: r.quotient.charpoly().to_string(),
                symmetrized_quotient: (0..xi).map(|i| (0..xi).map(|j| c.entry(i, j).to_string()).collect()).collect(),
            },
            exclusions,
            pairs: r.pairs.iter().map(PairDoc::from).collect(),
            graph_periodicity: r.graph_periodicity.into(),
            family: FamilyDoc {
                family: r.family.family.name().into(),
                charpoly_at_minus_one: r.family.exact.to_string(),
                closed_form: r.family.closed_form.as_ref().map(|x| x.to_string()),
                agrees: r.family.agrees(),
                minus_one_excluded: r.family.minus_one_excluded(),
            },
            summary: SummaryDoc {
                verdict: r.summary().label().into(),
                tau_min: r.tau_min().map(TimeDoc::from),
                numerics_agree: r.numerics_agree(),
            },
            timing: None,
        }
    }
}

/// One row of `scan` output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub n: u64,
    pub vertex_count: usize,
    pub xi: usize,
    pub candidates: usize,
    pub verdict: String,
    pub tau_min: Option<TimeDoc>,
    pub justification: Vec<String>,
    #[serde(skip)]
    pub graph_periodic: bool,
    #[serde(skip)]
    pub has_fr: bool,
    #[serde(skip)]
    pub numerics_agree: bool,
}

impl From<&Report> for ScanRow {
    fn from(r: &Report) -> Self {
        let strongest = r.pairs.iter().max_by_key(|p| p.verdict.strength());
        let justification = match strongest {
            Some(p) => p.justification.iter().map(|j| j.code().to_string()).collect(),
            None => vec![zdgq::classify::Reason::NoCandidates.code().to_string()],
        };
        Self {
            n: r.n,
            vertex_count: r.vertex_count,
            xi: r.xi(),
            candidates: r.pairs.len(),
            verdict: r.summary().label().into(),
            tau_min: r.tau_min().map(TimeDoc::from),
            justification,
            graph_periodic: r.graph_periodicity.is_periodic(),
            has_fr: r.pairs.iter().any(|p| p.verdict.has_proper_fr()),
            numerics_agree: r.numerics_agree(),
        }
    }
}

impl ScanRow {
    pub const CSV_HEADER: &'static str = "n,vertex_count,xi,candidates,verdict,tau_min,justification";

    pub fn csv(&self) -> String {
        let tau = self.tau_min.as_ref().map(|t| format!("{} ({})", t.decimal, t.exact)).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{}",
            self.n,
            self.vertex_count,
            self.xi,
            self.candidates,
            self.verdict,
            tau,
            self.justification.join(";")
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use zdgq::classify::{analyze, AnalysisOptions};

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal(std::f64::consts::PI / 2f64.sqrt()), "2.22144146908");
        assert_eq!(decimal(0.0), "0");
        assert_eq!(decimal(-2.0), "-2");
        assert_eq!(decimal(0.5), "0.5");
        assert_eq!(decimal(1234.5678), "1234.5678");
        assert_eq!(decimal(6.7e-16), "6.70000000000e-16");
    }

    #[test]
    fn report_document_round_trips() {
        for n in [8, 18, 27, 30] {
            let doc = ReportDocument::from(&analyze(n, AnalysisOptions::default()).unwrap());
            let json = serde_json::to_string_pretty(&doc).unwrap();
            let back: ReportDocument = serde_json::from_str(&json).unwrap();
            assert_eq!(back, doc);
            assert_eq!(serde_json::to_string_pretty(&back).unwrap(), json);
        }
    }
}
