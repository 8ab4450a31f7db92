//! Descent of a scheme over `Q[sqrt d]` to an equivalent scheme over `Q`.
//!
//! For each cyclic product family `M_j` an invertible `S` with
//! `S M_j = conj(M_j) S` and `S conj(S) = I` is sought; the fixed vectors of
//! `x -> conj(x) S` then give a basis in which every `M_j` is rational.

mod fixed;
mod intertwiner;
mod postcheck;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

pub use fixed::{fixed_space, involution, CandidateOrder};
pub use intertwiner::{
    intertwiner_basis, intertwiner_system, normalize_s, scalar_beta, solve_intertwiner,
    solve_norm_equation, IntertwinerSolution, NormStrategy, NormalizeDiagnostics, Normalized,
    Uniqueness,
};
pub use postcheck::{post_check, PostCheck, PostCheckStatus};

use crate::error::{Error, Result};
use crate::exactnum::Rat;
use crate::linalg::ExactMat;
use crate::scheme::{detect_ring, Scheme, TransformTriple, Variant};

/// Limits for the searches that are not guaranteed to terminate with an answer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    /// Height bound `H` for the norm-equation searches.
    pub height: u64,
    /// Coefficient bound `C` for combinations of nullspace basis elements.
    pub comb: i64,
    /// Maximum number of candidates `B` examined per variant.
    pub max_candidates: usize,
    /// Maximum number of square tests in the denominator search.
    pub norm_search_budget: u64,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            height: 50,
            comb: 2,
            max_candidates: 20_000,
            norm_search_budget: 2_000_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DescentStatus {
    Success,
    NoSolution,
    Inconclusive,
}

impl DescentStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            DescentStatus::Success => "success",
            DescentStatus::NoSolution => "no_solution",
            DescentStatus::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    AlreadyRational,
    Descended,
    /// Only `S = 0` solves the linear system.
    EmptyNullspace,
    /// The single basis element `B` has `B conj(B)` not a nonzero rational
    /// multiple of `I`, so no multiple of it is admissible.
    ScalarTestFailed,
    NormEquationUnresolved,
    MultiDimensionalUnresolved,
    PostCheckAnomaly,
    PostVerificationFailed,
}

/// Outcome of the search for an admissible `S` on one product family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Admissible,
    /// Provably no admissible `S`.
    NoAdmissible(Reason),
    Undecided(Reason),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixDescent {
    pub solution: IntertwinerSolution,
    pub verdict: Verdict,
    /// Basis matrix with `X M_j X^-1` rational for every `j`.
    pub x: Option<ExactMat>,
}

/// Searches for a change of basis making every matrix in `ms` rational.
pub fn descend_matrices(
    ms: &[ExactMat],
    bounds: &SearchBounds,
    order: CandidateOrder,
) -> Result<MatrixDescent> {
    let solution = solve_intertwiner(ms, bounds)?;
    let (verdict, x) = match (&solution.normalized, solution.dim()) {
        (Some(n), _) => (Verdict::Admissible, Some(fixed_space(&n.s, order)?)),
        (None, 0) => (Verdict::NoAdmissible(Reason::EmptyNullspace), None),
        (None, 1) if solution.diagnostics.beta.is_none() => {
            (Verdict::NoAdmissible(Reason::ScalarTestFailed), None)
        }
        (None, 1) => (Verdict::Undecided(Reason::NormEquationUnresolved), None),
        (None, _) => (Verdict::Undecided(Reason::MultiDimensionalUnresolved), None),
    };
    Ok(MatrixDescent {
        solution,
        verdict,
        x,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariantResult {
    pub variant: Variant,
    pub descent: MatrixDescent,
}

fn ser_opt_display<T: std::fmt::Display, S: Serializer>(
    v: &Option<T>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_some(&x.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub reason: Reason,
    pub variant: Option<Variant>,
    pub nullspace_dim: Option<usize>,
    #[serde(serialize_with = "ser_opt_display")]
    pub beta: Option<Rat>,
    pub strategies_tried: Vec<NormStrategy>,
    pub candidates_examined: usize,
    pub truncated: bool,
    /// 1-based triple index reported by the post-check.
    pub anomaly_index: Option<usize>,
    pub detail: Option<String>,
}

impl Certificate {
    fn bare(reason: Reason) -> Self {
        Certificate {
            reason,
            variant: None,
            nullspace_dim: None,
            beta: None,
            strategies_tried: Vec::new(),
            candidates_examined: 0,
            truncated: false,
            anomaly_index: None,
            detail: None,
        }
    }

    fn for_variant(reason: Reason, v: &VariantResult) -> Self {
        let d = &v.descent.solution.diagnostics;
        Certificate {
            variant: Some(v.variant),
            nullspace_dim: Some(v.descent.solution.dim()),
            beta: d.beta.clone(),
            strategies_tried: d.strategies_tried.clone(),
            candidates_examined: d.candidates_examined,
            truncated: d.truncated,
            ..Certificate::bare(reason)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentOutcome {
    pub status: DescentStatus,
    pub transform: Option<TransformTriple>,
    /// The rational scheme, present exactly on success.
    pub result: Option<Scheme>,
    pub post_check: Option<PostCheckStatus>,
    /// Per-variant results in the order OPQ, PQO, QOP.
    pub variants: Vec<VariantResult>,
    pub certificate: Certificate,
}

/// Runs the descent on all three product families and assembles `X`, `Y`, `Z`.
pub fn descend(s: &Scheme, bounds: &SearchBounds) -> Result<DescentOutcome> {
    descend_with(s, bounds, CandidateOrder::Forward)
}

pub fn descend_with(
    s: &Scheme,
    bounds: &SearchBounds,
    order: CandidateOrder,
) -> Result<DescentOutcome> {
    s.ensure_valid()?;
    if s.is_rational() {
        return Ok(DescentOutcome {
            status: DescentStatus::Success,
            transform: Some(TransformTriple::identity(s.dims(), s.field())),
            result: Some(s.clone()),
            post_check: Some(PostCheckStatus::Clean),
            variants: Vec::new(),
            certificate: Certificate::bare(Reason::AlreadyRational),
        });
    }
    let variants = Variant::ALL
        .par_iter()
        .map(|&variant| {
            descend_matrices(&s.products(variant), bounds, order)
                .map(|descent| VariantResult { variant, descent })
        })
        .collect::<Result<Vec<_>>>()?;

    let fail = |status, certificate| DescentOutcome {
        status,
        transform: None,
        result: None,
        post_check: None,
        variants: variants.clone(),
        certificate,
    };
    // A proof of non-existence from any family outranks an undecided one.
    if let Some((v, reason)) = variants.iter().find_map(|v| match v.descent.verdict {
        Verdict::NoAdmissible(r) => Some((v, r)),
        _ => None,
    }) {
        return Ok(fail(
            DescentStatus::NoSolution,
            Certificate::for_variant(reason, v),
        ));
    }
    if let Some((v, reason)) = variants.iter().find_map(|v| match v.descent.verdict {
        Verdict::Undecided(r) => Some((v, r)),
        _ => None,
    }) {
        return Ok(fail(
            DescentStatus::Inconclusive,
            Certificate::for_variant(reason, v),
        ));
    }

    let basis = |i: usize| -> Result<ExactMat> {
        variants[i]
            .descent
            .x
            .clone()
            .ok_or_else(|| Error::Internal("admissible variant without basis".into()))
    };
    let transform = TransformTriple::new(basis(0)?, basis(1)?, basis(2)?)
        .map_err(|e| Error::Internal(format!("fixed-space basis {e}")))?;
    let moved = s.apply_transform(&transform)?;
    let pc = post_check(&moved)?;
    let Some(adjusted) = pc.scheme else {
        let index = match pc.status {
            PostCheckStatus::Anomalous { index } => Some(index),
            _ => None,
        };
        let mut out = fail(
            DescentStatus::Inconclusive,
            Certificate {
                anomaly_index: index,
                ..Certificate::bare(Reason::PostCheckAnomaly)
            },
        );
        out.transform = Some(transform);
        out.post_check = Some(pc.status);
        return Ok(out);
    };
    let report = adjusted.brent_verify();
    if !report.ok() || !adjusted.is_rational() {
        let detail = match report.violation {
            Some(v) => v.to_string(),
            None => "transformed scheme is not rational".into(),
        };
        let mut out = fail(
            DescentStatus::Inconclusive,
            Certificate {
                detail: Some(detail),
                ..Certificate::bare(Reason::PostVerificationFailed)
            },
        );
        out.transform = Some(transform);
        out.post_check = Some(pc.status);
        return Ok(out);
    }
    Ok(DescentOutcome {
        status: DescentStatus::Success,
        transform: Some(transform),
        result: Some(adjusted),
        post_check: Some(pc.status),
        variants,
        certificate: Certificate::bare(Reason::Descended),
    })
}

fn mat_strings(m: &ExactMat) -> Vec<Vec<String>> {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(ToString::to_string).collect())
        .collect()
}

#[derive(Serialize)]
struct TransformReport {
    x: Vec<Vec<String>>,
    y: Vec<Vec<String>>,
    z: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct VariantReport {
    variant: Variant,
    nullspace_dim: usize,
    uniqueness: Uniqueness,
    admissible: bool,
    #[serde(serialize_with = "ser_opt_display")]
    beta: Option<Rat>,
    alpha: Option<String>,
    strategy: Option<NormStrategy>,
    s: Option<Vec<Vec<String>>>,
}

#[derive(Serialize)]
struct OutcomeReport<'a> {
    status: DescentStatus,
    ring: Option<String>,
    post_check: Option<PostCheckStatus>,
    transform: Option<TransformReport>,
    variants: Vec<VariantReport>,
    certificate: &'a Certificate,
}

impl DescentOutcome {
    /// Machine-readable summary (JSON).
    pub fn report_json(&self) -> String {
        let report = OutcomeReport {
            status: self.status,
            ring: self.result.as_ref().map(|s| detect_ring(s).to_string()),
            post_check: self.post_check,
            transform: self.transform.as_ref().map(|t| TransformReport {
                x: mat_strings(t.x()),
                y: mat_strings(t.y()),
                z: mat_strings(t.z()),
            }),
            variants: self
                .variants
                .iter()
                .map(|v| {
                    let sol = &v.descent.solution;
                    let n = sol.normalized.as_ref();
                    VariantReport {
                        variant: v.variant,
                        nullspace_dim: sol.dim(),
                        uniqueness: sol.uniqueness,
                        admissible: v.descent.verdict == Verdict::Admissible,
                        beta: n.map(|n| n.beta.clone()).or(sol.diagnostics.beta.clone()),
                        alpha: n.map(|n| n.alpha.to_string()),
                        strategy: n.map(|n| n.strategy),
                        s: n.map(|n| mat_strings(&n.s)),
                    }
                })
                .collect(),
            certificate: &self.certificate,
        };
        serde_json::to_string_pretty(&report).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, FieldDesc, QElem};
    use crate::fixtures;
    use crate::scheme::detect_ring;

    fn m(rows: &[&[&str]]) -> ExactMat {
        let rows: Vec<Vec<&str>> = rows.iter().map(|r| r.to_vec()).collect();
        ExactMat::parse_rows(FieldDesc::GAUSSIAN, &rows).unwrap()
    }

    #[test]
    fn rational_input_is_immediate_success() {
        let s = fixtures::strassen();
        let out = descend(&s, &SearchBounds::default()).unwrap();
        assert_eq!(out.status, DescentStatus::Success);
        assert_eq!(out.result.as_ref(), Some(&s));
        let t = out.transform.unwrap();
        assert_eq!(t, TransformTriple::identity(s.dims(), s.field()));
    }

    #[test]
    fn complexified_strassen_descends() {
        let s = fixtures::complexified_strassen();
        let out = descend(&s, &SearchBounds::default()).unwrap();
        assert_eq!(out.status, DescentStatus::Success, "{}", out.report_json());
        let r = out.result.unwrap();
        assert!(r.brent_verify().ok());
        assert!(detect_ring(&r).is_rational());
        assert_eq!(out.variants.len(), 3);
    }

    #[test]
    fn split_scheme_has_no_solution() {
        let out = descend(&fixtures::split_nonreal(), &SearchBounds::default()).unwrap();
        assert_eq!(
            out.status,
            DescentStatus::NoSolution,
            "{}",
            out.report_json()
        );
        assert_eq!(out.certificate.variant, Some(Variant::Opq));
        assert!(out.result.is_none());
    }

    #[test]
    fn matrix_level_verdicts() {
        let b = SearchBounds::default();
        let f = CandidateOrder::Forward;
        let r = descend_matrices(&[m(&[&["i", "0"], &["0", "1"]])], &b, f).unwrap();
        assert_eq!(r.verdict, Verdict::NoAdmissible(Reason::ScalarTestFailed));
        let d = m(&[&["i", "0"], &["0", "-i"]]);
        let r = descend_matrices(std::slice::from_ref(&d), &b, f).unwrap();
        assert_eq!(r.verdict, Verdict::Admissible);
        let x = r.x.unwrap();
        let c = x.matmul(&d).unwrap().matmul(&x.inverse().unwrap()).unwrap();
        assert_eq!(c, m(&[&["0", "1"], &["-1", "0"]]));
    }

    #[test]
    fn report_carries_certificate_fields() {
        let out = descend(&fixtures::split_nonreal(), &SearchBounds::default()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out.report_json()).unwrap();
        assert_eq!(v["status"], "no_solution");
        assert_eq!(v["certificate"]["variant"], "OPQ");
        assert!(v["certificate"]["nullspace_dim"].is_u64());
        assert!(v["certificate"]["strategies_tried"].is_array());
    }

    #[test]
    fn norm_target_uses_beta() {
        // 2 I has beta = 4, alpha = 1/2.
        let two = ExactMat::identity(2, FieldDesc::GAUSSIAN)
            .scale(&QElem::from_int(2, FieldDesc::GAUSSIAN));
        assert_eq!(scalar_beta(&two), Some(rat(4)));
    }
}
