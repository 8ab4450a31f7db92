//! Trace obstructions to integral equivalents of rational schemes.
//!
//! If some product `M_{j1} ... M_{jk}` has a non-integral trace, no change of
//! basis makes every `M_j` integral, because traces are similarity invariant.
//! Finding nothing up to depth `k` proves nothing.

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::QElem;
use crate::linalg::ExactMat;
use crate::scheme::{Scheme, Variant};

pub const DEFAULT_DEPTH: usize = 3;
pub const DEFAULT_MEMO_CAP: usize = 1_000_000;
pub const MEMO_CAP_ENV: &str = "MMDESCEND_MEMO_CAP";

/// Memo cap from the environment, or [`DEFAULT_MEMO_CAP`].
pub fn memo_cap_from_env() -> usize {
    std::env::var(MEMO_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MEMO_CAP)
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
pub struct ObstructionReport {
    pub found: bool,
    pub variant: Option<Variant>,
    /// 1-based indices `(j1, ..., jk)`.
    pub witness: Option<Vec<usize>>,
    #[serde(serialize_with = "ser_opt_display")]
    pub trace_value: Option<QElem>,
    pub depth_searched: usize,
    pub products_examined: u64,
}

impl ObstructionReport {
    pub fn summary(&self) -> String {
        match (&self.witness, &self.trace_value) {
            (Some(w), Some(t)) => {
                let w: Vec<String> = w.iter().map(ToString::to_string).collect();
                format!(
                    "obstruction: trace of product ({}) is {t}, not an integer",
                    w.join(",")
                )
            }
            _ => format!(
                "no obstruction found up to depth {} ({} products)",
                self.depth_searched, self.products_examined
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DepthProfile {
    pub depth: usize,
    pub sequences: u64,
    pub non_integer: u64,
    /// First few witnesses in lexicographic order, 1-based.
    pub samples: Vec<Vec<usize>>,
}

const PROFILE_SAMPLES: usize = 5;

fn rational_products(s: &Scheme, variant: Variant) -> Result<Vec<ExactMat>> {
    if !s.is_rational() {
        return Err(Error::NotRational);
    }
    Ok(s.products(variant))
}

/// First product sequence (lexicographic, by depth) with a non-integral trace.
pub fn integer_obstruction(
    s: &Scheme,
    variant: Variant,
    k_max: usize,
) -> Result<ObstructionReport> {
    let ms = rational_products(s, variant)?;
    let mut report = matrix_obstruction(&ms, k_max, memo_cap_from_env())?;
    report.variant = Some(variant);
    Ok(report)
}

pub fn trace_profile(s: &Scheme, variant: Variant, k_max: usize) -> Result<Vec<DepthProfile>> {
    let ms = rational_products(s, variant)?;
    matrix_trace_profile(&ms, k_max, memo_cap_from_env())
}

fn check_family(ms: &[ExactMat]) -> Result<()> {
    let first = ms
        .first()
        .ok_or_else(|| Error::Dimension("empty matrix family".into()))?;
    if !first.is_square() || ms.iter().any(|m| m.shape() != first.shape()) {
        return Err(Error::Dimension(
            "products need square matrices of one size".into(),
        ));
    }
    if ms.iter().any(|m| !m.is_rational()) {
        return Err(Error::NotRational);
    }
    Ok(())
}

fn count(r: u64, k: usize) -> Result<u64> {
    r.checked_pow(k as u32)
        .ok_or_else(|| Error::Dimension(format!("{r}^{k} sequences overflow")))
}

/// Digits of `idx` in base `r`, most significant first.
fn digits(mut idx: u64, r: u64, len: usize) -> Vec<usize> {
    let mut out = vec![0usize; len];
    for d in out.iter_mut().rev() {
        *d = (idx % r) as usize;
        idx /= r;
    }
    out
}

/// Products of length `k - 1`, either stored or rebuilt per index.
struct Prefixes<'a> {
    ms: &'a [ExactMat],
    len: usize,
    memo: Option<Vec<ExactMat>>,
}

impl<'a> Prefixes<'a> {
    fn get(&self, idx: u64) -> ExactMat {
        if let Some(memo) = &self.memo {
            return memo[idx as usize].clone();
        }
        let r = self.ms.len() as u64;
        let n = self.ms[0].rows();
        digits(idx, r, self.len)
            .into_iter()
            .fold(ExactMat::identity(n, self.ms[0].field()), |acc, j| {
                acc.matmul(&self.ms[j]).expect("square family")
            })
    }
}

/// Walks depths `1..=k_max`, keeping the previous level in memory while it
/// fits under `memo_cap`.
struct Levels<'a> {
    ms: &'a [ExactMat],
    memo_cap: usize,
    current: Option<Vec<ExactMat>>,
}

impl<'a> Levels<'a> {
    fn new(ms: &'a [ExactMat], memo_cap: usize) -> Self {
        let n = ms[0].rows();
        Levels {
            ms,
            memo_cap,
            current: Some(vec![ExactMat::identity(n, ms[0].field())]),
        }
    }

    /// Prefixes of length `len`; must be called with `len = 0, 1, 2, ...`.
    fn prefixes(&mut self, len: usize) -> Result<Prefixes<'a>> {
        let r = self.ms.len() as u64;
        let size = count(r, len)?;
        if len > 0 {
            self.current = match self.current.take() {
                Some(prev) if size <= self.memo_cap as u64 => {
                    let ms = self.ms;
                    Some(
                        prev.par_iter()
                            .flat_map_iter(|p| {
                                ms.iter().map(move |m| p.matmul(m).expect("square family"))
                            })
                            .collect(),
                    )
                }
                _ => None,
            };
        }
        Ok(Prefixes {
            ms: self.ms,
            len,
            memo: self.current.clone(),
        })
    }
}

/// [`integer_obstruction`] on a raw list of square rational matrices.
pub fn matrix_obstruction(
    ms: &[ExactMat],
    k_max: usize,
    memo_cap: usize,
) -> Result<ObstructionReport> {
    check_family(ms)?;
    let r = ms.len() as u64;
    let mut levels = Levels::new(ms, memo_cap);
    let mut examined_before = 0u64;
    for k in 1..=k_max {
        let prefixes = levels.prefixes(k - 1)?;
        let n_prefix = count(r, k - 1)?;
        let hit = (0..n_prefix).into_par_iter().find_map_first(|pi| {
            let prefix = prefixes.get(pi);
            ms.iter().enumerate().find_map(|(j, m)| {
                let t = prefix.trace_of_product(m).expect("square family");
                (!t.is_integer()).then_some((pi, j, t))
            })
        });
        if let Some((pi, j, t)) = hit {
            let mut witness: Vec<usize> = digits(pi, r, k - 1).into_iter().map(|d| d + 1).collect();
            witness.push(j + 1);
            return Ok(ObstructionReport {
                found: true,
                variant: None,
                witness: Some(witness),
                trace_value: Some(t),
                depth_searched: k,
                products_examined: examined_before + pi * r + j as u64 + 1,
            });
        }
        examined_before += count(r, k)?;
    }
    Ok(ObstructionReport {
        found: false,
        variant: None,
        witness: None,
        trace_value: None,
        depth_searched: k_max,
        products_examined: examined_before,
    })
}

/// Census of non-integral traces at every depth `1..=k_max`.
pub fn matrix_trace_profile(
    ms: &[ExactMat],
    k_max: usize,
    memo_cap: usize,
) -> Result<Vec<DepthProfile>> {
    check_family(ms)?;
    let r = ms.len() as u64;
    let mut levels = Levels::new(ms, memo_cap);
    let mut out = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let prefixes = levels.prefixes(k - 1)?;
        let n_prefix = count(r, k - 1)?;
        let per_prefix: Vec<Vec<usize>> = (0..n_prefix)
            .into_par_iter()
            .map(|pi| {
                let prefix = prefixes.get(pi);
                ms.iter()
                    .enumerate()
                    .filter(|(_, m)| {
                        !prefix
                            .trace_of_product(m)
                            .expect("square family")
                            .is_integer()
                    })
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect();
        let non_integer = per_prefix.iter().map(|v| v.len() as u64).sum();
        let samples = per_prefix
            .iter()
            .enumerate()
            .flat_map(|(pi, js)| {
                js.iter().map(move |&j| {
                    let mut w: Vec<usize> = digits(pi as u64, r, k - 1)
                        .into_iter()
                        .map(|d| d + 1)
                        .collect();
                    w.push(j + 1);
                    w
                })
            })
            .take(PROFILE_SAMPLES)
            .collect();
        out.push(DepthProfile {
            depth: k,
            sequences: count(r, k)?,
            non_integer,
            samples,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{ratio, FieldDesc};
    use crate::fixtures;

    fn m(rows: &[&[&str]]) -> ExactMat {
        let rows: Vec<Vec<&str>> = rows.iter().map(|r| r.to_vec()).collect();
        ExactMat::parse_rows(FieldDesc::GAUSSIAN, &rows).unwrap()
    }

    fn toy() -> Vec<ExactMat> {
        vec![
            m(&[&["0", "1"], &["0", "0"]]),
            m(&[&["0", "0"], &["1/2", "0"]]),
        ]
    }

    #[test]
    fn depth_two_toy() {
        let rep = matrix_obstruction(&toy(), 3, DEFAULT_MEMO_CAP).unwrap();
        assert!(rep.found);
        assert_eq!(rep.witness, Some(vec![1, 2]));
        assert_eq!(rep.trace_value.unwrap().as_rational(), Some(&ratio(1, 2)));
        assert_eq!(rep.depth_searched, 2);
        // Two at depth 1, then (1,1) and (1,2).
        assert_eq!(rep.products_examined, 4);
    }

    #[test]
    fn depth_one_toy() {
        let rep = matrix_obstruction(&[m(&[&["1/3", "0"], &["0", "0"]])], 3, 10).unwrap();
        assert_eq!(rep.witness, Some(vec![1]));
        assert_eq!(rep.trace_value.unwrap().as_rational(), Some(&ratio(1, 3)));
        assert_eq!(rep.products_examined, 1);
    }

    #[test]
    fn half_identity_has_integral_trace() {
        let rep = matrix_obstruction(&[m(&[&["1/2", "0"], &["0", "1/2"]])], 1, 10).unwrap();
        assert!(!rep.found);
    }

    #[test]
    fn memo_cap_does_not_change_result() {
        let ms = toy();
        for cap in [0, 1, 2, 1000] {
            let rep = matrix_obstruction(&ms, 3, cap).unwrap();
            assert_eq!(rep.witness, Some(vec![1, 2]));
            assert_eq!(rep.products_examined, 4);
        }
    }

    #[test]
    fn strassen_has_no_shallow_obstruction() {
        let rep = integer_obstruction(&fixtures::strassen(), Variant::Opq, 2).unwrap();
        assert!(!rep.found);
        assert_eq!(rep.products_examined, 7 + 49);
        assert!(rep
            .summary()
            .starts_with("no obstruction found up to depth 2"));
    }

    #[test]
    fn profile_of_toy() {
        let p = matrix_trace_profile(&toy(), 2, DEFAULT_MEMO_CAP).unwrap();
        assert_eq!(p[0].non_integer, 0);
        assert_eq!(p[1].non_integer, 2);
        assert_eq!(p[1].samples, vec![vec![1, 2], vec![2, 1]]);
        let capped = matrix_trace_profile(&toy(), 2, 0).unwrap();
        assert_eq!(p, capped);
    }

    #[test]
    fn rejects_non_rational() {
        assert!(matches!(
            integer_obstruction(&fixtures::complexified_strassen(), Variant::Opq, 1),
            Err(Error::NotRational)
        ));
    }

    #[test]
    fn digit_decoding() {
        assert_eq!(digits(5, 3, 3), vec![0, 1, 2]);
        assert_eq!(digits(0, 7, 0), Vec::<usize>::new());
    }
}
