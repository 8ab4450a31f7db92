//! Solving `S M_j = conj(M_j) S` and normalizing to `S conj(S) = I`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::SearchBounds;
use crate::error::{Error, Result};
use crate::exactnum::{int_sqrt, rat_sqrt, FieldDesc, QElem, Rat};
use crate::linalg::ExactMat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Uniqueness {
    /// One-dimensional solution space: `S` is determined up to a scalar.
    UniqueUpToScalar,
    MultiDimensional,
    Empty,
}

/// How a solution of `N(alpha) = 1/beta` was sought.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NormStrategy {
    /// `alpha` rational with `alpha^2 = 1/beta`.
    RationalRoot,
    /// `alpha = t sqrt(d)` with `-d t^2 = 1/beta`.
    PureRadical,
    /// `alpha = a + b sqrt(d)` with `b` of height at most `H`.
    BoundedSearch,
    /// `alpha = (x + y sqrt(d)) / z` with integers `x, y` and `z` a small
    /// multiple of the denominator of `1/beta`.
    DenominatorSearch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalized {
    /// `S = alpha * candidate`, with `S conj(S) = I`.
    pub s: ExactMat,
    pub candidate: ExactMat,
    pub alpha: QElem,
    pub beta: Rat,
    pub strategy: NormStrategy,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NormalizeDiagnostics {
    pub candidates_examined: usize,
    pub scalar_test_failures: usize,
    /// `beta` of the last candidate with `B conj(B) = beta I`.
    pub beta: Option<Rat>,
    pub strategies_tried: Vec<NormStrategy>,
    /// The combination enumeration hit `SearchBounds::max_candidates`.
    pub truncated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntertwinerSolution {
    pub basis: Vec<ExactMat>,
    pub normalized: Option<Normalized>,
    pub uniqueness: Uniqueness,
    pub diagnostics: NormalizeDiagnostics,
}

impl IntertwinerSolution {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

fn check_square_family(ms: &[ExactMat]) -> Result<(usize, FieldDesc)> {
    let first = ms
        .first()
        .ok_or_else(|| Error::Dimension("empty matrix family".into()))?;
    let (n, field) = (first.rows(), first.field());
    for m in ms {
        if m.shape() != (n, n) {
            return Err(Error::Dimension(format!(
                "intertwiner family mixes {n}x{n} with {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        if m.field() != field {
            return Err(Error::FieldMismatch {
                left: field,
                right: m.field(),
            });
        }
    }
    Ok((n, field))
}

/// The stacked linear system `{S M_j - conj(M_j) S = 0}` in the `n^2` unknowns
/// of `S` (row-major). Row `(j, i, k)` is entry `(i, k)` of equation `j`.
pub fn intertwiner_system(ms: &[ExactMat]) -> Result<ExactMat> {
    let (n, field) = check_square_family(ms)?;
    let nn = n * n;
    let mut sys = ExactMat::zeros(ms.len() * nn, nn, field);
    for (j, m) in ms.iter().enumerate() {
        let mc = m.conj();
        for i in 0..n {
            for k in 0..n {
                let row = j * nn + i * n + k;
                for l in 0..n {
                    // (S M)_{ik} = sum_l S_{il} M_{lk}
                    let c = sys.get(row, i * n + l) + m.get(l, k);
                    sys.set(row, i * n + l, c);
                    // (conj(M) S)_{ik} = sum_l conj(M)_{il} S_{lk}
                    let c = sys.get(row, l * n + k) - mc.get(i, l);
                    sys.set(row, l * n + k, c);
                }
            }
        }
    }
    Ok(sys)
}

/// Canonical basis of the solution space of `S M_j = conj(M_j) S` for all `j`,
/// flattened row-major. Identical to the nullspace basis of
/// [`intertwiner_system`], but computed by intersecting one equation at a time.
pub fn intertwiner_basis(ms: &[ExactMat]) -> Result<Vec<ExactMat>> {
    let (n, field) = check_square_family(ms)?;
    let nn = n * n;
    let mut basis: Vec<Vec<QElem>> = ExactMat::identity(nn, field).to_rows();
    for m in ms {
        if basis.is_empty() {
            break;
        }
        let mc = m.conj();
        // Columns: the residual S M - conj(M) S of each current basis element.
        let residuals = basis
            .iter()
            .map(|b| {
                let s = ExactMat::from_vec(n, n, field, b.clone())?;
                Ok(s.matmul(m)?.sub(&mc.matmul(&s)?)?.entries().to_vec())
            })
            .collect::<Result<Vec<_>>>()?;
        let mut a = ExactMat::zeros(nn, basis.len(), field);
        for (col, r) in residuals.iter().enumerate() {
            for (row, e) in r.iter().enumerate() {
                if !e.is_zero() {
                    a.set(row, col, e.clone());
                }
            }
        }
        basis = a
            .nullspace()
            .into_iter()
            .map(|c| {
                let mut v = vec![QElem::zero(field); nn];
                for (coef, b) in c.iter().zip(&basis) {
                    if coef.is_zero() {
                        continue;
                    }
                    for (x, y) in v.iter_mut().zip(b) {
                        *x += &(coef * y);
                    }
                }
                v
            })
            .collect();
    }
    canonical_kernel_basis(&basis, nn, field)
        .into_iter()
        .map(|v| ExactMat::from_vec(n, n, field, v))
        .collect()
}

/// Rewrites a spanning set in the parameterization a single elimination of the
/// stacked system would return: one vector per free column (ascending), equal
/// to 1 there and 0 at every other free column. That is the echelon form taken
/// from the right-hand end.
fn canonical_kernel_basis(span: &[Vec<QElem>], len: usize, field: FieldDesc) -> Vec<Vec<QElem>> {
    if span.is_empty() {
        return Vec::new();
    }
    let reversed: Vec<Vec<QElem>> = span
        .iter()
        .map(|v| v.iter().rev().cloned().collect())
        .collect();
    let (r, pivots) = ExactMat::from_rows(field, reversed)
        .expect("equal-length vectors")
        .rref();
    let mut out: Vec<Vec<QElem>> = (0..pivots.len())
        .map(|i| r.row(i).iter().rev().cloned().collect())
        .collect();
    out.reverse();
    debug_assert!(out.iter().all(|v| v.len() == len));
    out
}

/// Finds the intertwiner space for `ms` and tries to normalize it.
pub fn solve_intertwiner(ms: &[ExactMat], bounds: &SearchBounds) -> Result<IntertwinerSolution> {
    let basis = intertwiner_basis(ms)?;
    let uniqueness = match basis.len() {
        0 => Uniqueness::Empty,
        1 => Uniqueness::UniqueUpToScalar,
        _ => Uniqueness::MultiDimensional,
    };
    let (normalized, diagnostics) = if basis.is_empty() {
        (None, NormalizeDiagnostics::default())
    } else {
        normalize_s(&basis, bounds)
    };
    Ok(IntertwinerSolution {
        basis,
        normalized,
        uniqueness,
        diagnostics,
    })
}

/// Integer coefficient vectors with at least two nonzero entries, ordered by
/// largest magnitude, then lexicographically in the value order `0, 1, -1, 2, -2, ...`.
fn combinations(dim: usize, bound: i64) -> impl Iterator<Item = Vec<i64>> {
    (1..=bound).flat_map(move |h| {
        let values: Vec<i64> = std::iter::once(0)
            .chain((1..=h).flat_map(|v| [v, -v]))
            .collect();
        let base = values.len();
        let total = (base as u128).checked_pow(dim as u32);
        let mut counter = vec![0usize; dim];
        let mut done = total.is_none() || dim == 0;
        std::iter::from_fn(move || loop {
            if done {
                return None;
            }
            let current: Vec<i64> = counter.iter().map(|&i| values[i]).collect();
            // Odometer increment, last position fastest.
            let mut pos = dim;
            loop {
                if pos == 0 {
                    done = true;
                    break;
                }
                pos -= 1;
                counter[pos] += 1;
                if counter[pos] < base {
                    break;
                }
                counter[pos] = 0;
            }
            let nonzero = current.iter().filter(|&&c| c != 0).count();
            let top = current.iter().map(|c| c.abs()).max().unwrap_or(0);
            if nonzero >= 2 && top == h {
                return Some(current);
            }
        })
    })
}

/// Looks for `S = alpha B` with `S conj(S) = I` among the basis elements and,
/// when the space has dimension above one, small integer combinations of them.
pub fn normalize_s(
    basis: &[ExactMat],
    bounds: &SearchBounds,
) -> (Option<Normalized>, NormalizeDiagnostics) {
    let mut diag = NormalizeDiagnostics::default();
    let Some(first) = basis.first() else {
        return (None, diag);
    };
    let field = first.field();
    let singles = basis.iter().cloned();
    let combos: Box<dyn Iterator<Item = ExactMat>> = if basis.len() > 1 {
        Box::new(combinations(basis.len(), bounds.comb).map(move |c| {
            let mut acc = ExactMat::zeros(first.rows(), first.cols(), field);
            for (coef, b) in c.iter().zip(basis) {
                if *coef != 0 {
                    acc = acc
                        .add(&b.scale(&QElem::from_int(*coef, field)))
                        .expect("same shape");
                }
            }
            acc
        }))
    } else {
        Box::new(std::iter::empty())
    };
    for candidate in singles.chain(combos) {
        if diag.candidates_examined >= bounds.max_candidates {
            diag.truncated = true;
            break;
        }
        diag.candidates_examined += 1;
        let Some(beta) = scalar_beta(&candidate) else {
            diag.scalar_test_failures += 1;
            continue;
        };
        let target = beta.recip();
        let (found, tried) = solve_norm_equation(&target, field, bounds);
        for t in tried {
            if !diag.strategies_tried.contains(&t) {
                diag.strategies_tried.push(t);
            }
        }
        diag.beta = Some(beta.clone());
        if let Some((alpha, strategy)) = found {
            let s = candidate.scale(&alpha);
            debug_assert!(s
                .matmul(&s.conj())
                .map(|p| p == ExactMat::identity(s.rows(), field))
                .unwrap_or(false));
            return (
                Some(Normalized {
                    s,
                    candidate,
                    alpha,
                    beta,
                    strategy,
                }),
                diag,
            );
        }
    }
    (None, diag)
}

/// `beta` with `B conj(B) = beta I`, when that holds for a nonzero rational.
pub fn scalar_beta(b: &ExactMat) -> Option<Rat> {
    let p = b.matmul(&b.conj()).ok()?;
    let s = p.as_scalar()?;
    let beta = s.as_rational()?.clone();
    (!beta.is_zero()).then_some(beta)
}

/// Bounded search for `alpha` with `alpha conj(alpha) = target`. Returns the
/// solution (if any) and the strategies attempted in order.
pub fn solve_norm_equation(
    target: &Rat,
    field: FieldDesc,
    bounds: &SearchBounds,
) -> (Option<(QElem, NormStrategy)>, Vec<NormStrategy>) {
    let mut tried = Vec::new();
    let d = field.d_rat();

    tried.push(NormStrategy::RationalRoot);
    if let Some(a) = rat_sqrt(target) {
        return (
            Some((QElem::from_rat(a, field), NormStrategy::RationalRoot)),
            tried,
        );
    }

    tried.push(NormStrategy::PureRadical);
    // N(t sqrt d) = -d t^2
    if let Some(t) = rat_sqrt(&(-target / &d)) {
        return (
            Some((QElem::new(Rat::zero(), t, field), NormStrategy::PureRadical)),
            tried,
        );
    }

    tried.push(NormStrategy::BoundedSearch);
    let h = bounds.height as i64;
    for den in 1..=h {
        for num in 1..=h {
            if num.gcd(&den) != 1 {
                continue;
            }
            let b = Rat::new(BigInt::from(num), BigInt::from(den));
            if let Some(a) = rat_sqrt(&(target + &d * &b * &b)) {
                return (
                    Some((QElem::new(a, b, field), NormStrategy::BoundedSearch)),
                    tried,
                );
            }
        }
    }

    tried.push(NormStrategy::DenominatorSearch);
    if let Some(alpha) = denominator_search(target, field, bounds) {
        return (Some((alpha, NormStrategy::DenominatorSearch)), tried);
    }
    (None, tried)
}

/// With `target = p/q`, looks for integers `x, y` and `z = q k` (`k <= H`) with
/// `x^2 - d y^2 = p q k^2`, so that `alpha = (x + y sqrt d) / z`. For `d < 0`
/// each `k` is searched exhaustively; for `d = -1` and `k = 1` this already
/// decides solvability.
fn denominator_search(target: &Rat, field: FieldDesc, bounds: &SearchBounds) -> Option<QElem> {
    let d = BigInt::from(field.d());
    let (p, q) = (target.numer(), target.denom());
    let base = p * q;
    let mut budget = bounds.norm_search_budget;
    for k in 1..=bounds.height {
        let k = BigInt::from(k);
        let n = &base * &k * &k;
        let z = q * &k;
        // x^2 = n + d y^2 must stay non-negative.
        let y_max = if d.is_negative() {
            if n.is_negative() {
                return None;
            }
            (&n / (-&d)).sqrt()
        } else {
            BigInt::from(bounds.height) * &z
        };
        let mut y = BigInt::zero();
        while y <= y_max {
            if budget == 0 {
                return None;
            }
            budget -= 1;
            if let Some(x) = int_sqrt(&(&n + &d * &y * &y)) {
                let zr = Rat::from_integer(z.clone());
                return Some(QElem::new(
                    Rat::from_integer(x) / &zr,
                    Rat::from_integer(y.clone()) / &zr,
                    field,
                ));
            }
            y += BigInt::one();
        }
    }
    None
}
