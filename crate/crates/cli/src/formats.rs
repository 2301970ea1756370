//! On-disk and on-wire schemas. JSON field layouts are frozen: golden tests
//! compare emitted bytes, and every document round-trips through its struct.

use serde::{Deserialize, Serialize};

use pepgrad_core::bounds::BoundReport;
use pepgrad_core::certify::{Certificate, CertificateReport};
use pepgrad_core::interp::TripleSet;
use pepgrad_core::linalg::Matrix;
use pepgrad_core::pep::{ConstraintKind, PepProgram};
use pepgrad_core::sdp::{SdpSolution, SdpStatus};
use pepgrad_core::tight::{GdRun, PiecewiseQuadratic, Segment};
use pepgrad_core::{CoreError, IterateTriple, RegimeClass};

// --- triple sets -----------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripleSetJson {
    #[serde(rename = "L")]
    pub lipschitz: f64,
    pub triples: Vec<TripleJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripleJson {
    pub x: Vec<f64>,
    pub g: Vec<f64>,
    pub f: f64,
}

impl From<&TripleSet> for TripleSetJson {
    fn from(set: &TripleSet) -> Self {
        Self {
            lipschitz: set.lipschitz,
            triples: set
                .triples
                .iter()
                .map(|t| TripleJson {
                    x: t.x.clone(),
                    g: t.g.clone(),
                    f: t.f,
                })
                .collect(),
        }
    }
}

impl TryFrom<TripleSetJson> for TripleSet {
    type Error = CoreError;
    fn try_from(json: TripleSetJson) -> Result<Self, CoreError> {
        let triples = json
            .triples
            .into_iter()
            .map(|t| IterateTriple::new(t.x, t.g, t.f))
            .collect::<Result<Vec<_>, _>>()?;
        TripleSet::new(json.lipschitz, triples)
    }
}

// --- piecewise quadratics --------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseQuadraticJson {
    #[serde(rename = "L")]
    pub lipschitz: f64,
    pub segments: Vec<SegmentJson>,
}

/// `lo`/`hi` are `null` at the unbounded ends.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentJson {
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    pub p: f64,
    pub q: f64,
    pub r: f64,
}

impl From<&PiecewiseQuadratic> for PiecewiseQuadraticJson {
    fn from(f: &PiecewiseQuadratic) -> Self {
        Self {
            lipschitz: f.lipschitz(),
            segments: f
                .segments()
                .iter()
                .map(|s| SegmentJson {
                    lo: if s.lo == f64::NEG_INFINITY {
                        None
                    } else {
                        Some(s.lo)
                    },
                    hi: if s.hi == f64::INFINITY { None } else { Some(s.hi) },
                    p: s.p,
                    q: s.q,
                    r: s.r,
                })
                .collect(),
        }
    }
}

impl TryFrom<PiecewiseQuadraticJson> for PiecewiseQuadratic {
    type Error = CoreError;
    fn try_from(json: PiecewiseQuadraticJson) -> Result<Self, CoreError> {
        let segments = json
            .segments
            .into_iter()
            .map(|s| Segment {
                lo: s.lo.unwrap_or(f64::NEG_INFINITY),
                hi: s.hi.unwrap_or(f64::INFINITY),
                p: s.p,
                q: s.q,
                r: s.r,
            })
            .collect();
        PiecewiseQuadratic::new(json.lipschitz, segments)
    }
}

// --- SDP solutions ---------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SdpSolutionJson {
    pub status: String,
    pub ell: f64,
    pub sqrt_ell: f64,
    pub gap: f64,
    #[serde(rename = "G")]
    pub gram: Vec<Vec<f64>>,
    pub f: Vec<f64>,
    pub duals: Vec<f64>,
}

impl From<&SdpSolution> for SdpSolutionJson {
    fn from(sol: &SdpSolution) -> Self {
        Self {
            status: sol.status.as_str().to_string(),
            ell: sol.ell,
            sqrt_ell: sol.sqrt_ell(),
            gap: sol.gap,
            gram: sol.gram.to_nested(),
            f: sol.f.clone(),
            duals: sol.duals.clone(),
        }
    }
}

// --- assembled programs ----------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PepProgramJson {
    #[serde(rename = "N")]
    pub n_steps: usize,
    pub gram_dim: usize,
    #[serde(rename = "L")]
    pub lipschitz: f64,
    pub delta: f64,
    pub f_star: f64,
    pub steps: Vec<f64>,
    /// Always `maximize-ell`; recorded so the document is self-contained.
    pub objective: String,
    pub constraints: Vec<ConstraintJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintJson {
    /// One of `pair`, `stationarity`, `gap`, `link`.
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// Row-major symmetric Gram coefficient.
    #[serde(rename = "A")]
    pub gram_coeff: Vec<Vec<f64>>,
    pub f_coeff: Vec<f64>,
    pub fstar_coeff: f64,
    pub const_coeff: f64,
    pub ell_coeff: f64,
}

impl From<&PepProgram> for PepProgramJson {
    fn from(p: &PepProgram) -> Self {
        Self {
            n_steps: p.n_steps(),
            gram_dim: p.gram_dim(),
            lipschitz: p.spec.lipschitz,
            delta: p.spec.delta,
            f_star: p.spec.f_star,
            steps: p.schedule.steps().to_vec(),
            objective: "maximize-ell".to_string(),
            constraints: p
                .constraints
                .iter()
                .map(|c| {
                    let (kind, i, j, k) = match c.kind {
                        ConstraintKind::Pair { i, j } => ("pair", Some(i), Some(j), None),
                        ConstraintKind::Stationarity { k } => {
                            ("stationarity", None, None, Some(k))
                        }
                        ConstraintKind::Gap => ("gap", None, None, None),
                        ConstraintKind::Link { k } => ("link", None, None, Some(k)),
                    };
                    ConstraintJson {
                        kind: kind.to_string(),
                        i,
                        j,
                        k,
                        gram_coeff: c.gram_coeff.to_nested(),
                        f_coeff: c.f_coeff.clone(),
                        fstar_coeff: c.fstar_coeff,
                        const_coeff: c.const_coeff,
                        ell_coeff: c.ell_coeff,
                    }
                })
                .collect(),
        }
    }
}

// --- bound reports ---------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReportJson {
    pub regime: String,
    pub main: Option<f64>,
    pub nesterov: Option<f64>,
    pub drori: Option<f64>,
    pub taylor: Option<f64>,
    pub conjecture: Option<ConjecturedJson>,
}

/// The `conjecture: true` marker travels with the value so no consumer can
/// mistake it for a proven bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjecturedJson {
    pub value: f64,
    pub conjecture: bool,
}

pub fn regime_name(r: RegimeClass) -> String {
    r.as_str().to_string()
}

impl From<&BoundReport> for BoundReportJson {
    fn from(r: &BoundReport) -> Self {
        Self {
            regime: regime_name(r.regime),
            main: r.main,
            nesterov: r.nesterov,
            drori: r.drori,
            taylor: r.taylor,
            conjecture: r.conjecture.map(|c| ConjecturedJson {
                value: c.value(),
                conjecture: true,
            }),
        }
    }
}

// --- certificate reports ---------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceEchoJson {
    #[serde(rename = "L")]
    pub lipschitz: f64,
    pub delta: f64,
    pub steps: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub b: f64,
    pub alpha: Vec<f64>,
    pub sigma: Vec<f64>,
    pub u: f64,
}

impl From<&Certificate> for CertificateJson {
    fn from(c: &Certificate) -> Self {
        Self {
            b: c.b,
            alpha: c.alpha.clone(),
            sigma: c.sigma.clone(),
            u: c.u,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReportJson {
    pub input: InstanceEchoJson,
    pub verified: bool,
    pub multipliers_nonneg: bool,
    pub sigma_sums_to_one: bool,
    pub linear_terms_vanish: bool,
    pub quadratic_matches_q: bool,
    pub residual_nsd: bool,
    pub certified_bound: f64,
    pub certificate: CertificateJson,
}

impl CertificateReportJson {
    pub fn new(
        input: InstanceEchoJson,
        report: &CertificateReport,
        cert: &Certificate,
    ) -> Self {
        Self {
            input,
            verified: report.verified(),
            multipliers_nonneg: report.multipliers_nonneg,
            sigma_sums_to_one: report.sigma_sums_to_one,
            linear_terms_vanish: report.linear_terms_vanish,
            quadratic_matches_q: report.quadratic_matches_q,
            residual_nsd: report.residual_nsd,
            certified_bound: report.certified_bound,
            certificate: cert.into(),
        }
    }
}

// --- pep-solve report ------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PepSolveReportJson {
    pub solution: SdpSolutionJson,
    /// Main-bound value when the schedule is inside the proven regime.
    pub closed_form: Option<f64>,
    pub abs_diff: Option<f64>,
}

// --- trajectories ----------------------------------------------------------

/// CSV with columns `k,x,f,g` (LF line endings, full precision).
pub fn trajectory_csv(run: &GdRun) -> String {
    let mut out = String::from("k,x,f,g\n");
    for (k, t) in run.trajectory.iter().enumerate() {
        out.push_str(&format!("{},{},{},{}\n", k + 1, t.x[0], t.f, t.g[0]));
    }
    out
}

/// Matrix helper for JSON ingestion.
pub fn matrix_from_nested(rows: Vec<Vec<f64>>) -> Matrix {
    Matrix::from_rows(rows)
}

pub fn status_from_str(s: &str) -> Option<SdpStatus> {
    match s {
        "optimal" => Some(SdpStatus::Optimal),
        "max-iter" => Some(SdpStatus::MaxIter),
        "infeasible" => Some(SdpStatus::Infeasible),
        "numerical-trouble" => Some(SdpStatus::NumericalTrouble),
        _ => None,
    }
}
