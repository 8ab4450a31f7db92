//! Fixed points of the anti-linear involution `x -> conj(x) S`.

use crate::error::{Error, Result};
use crate::exactnum::{ratio, QElem};
use crate::linalg::{rank_over_base, ExactMat};

/// Order in which candidate fixed vectors are offered to the independence test.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CandidateOrder {
    /// `(e_k + f(e_k))/2` for every `k`, then `sqrt(d) (e_k - f(e_k))/2`.
    #[default]
    Forward,
    /// The same list, reversed.
    Reversed,
}

/// `f(x) = conj(x) S` for a row vector `x`.
pub fn involution(s: &ExactMat, x: &[QElem]) -> Result<Vec<QElem>> {
    let xc: Vec<QElem> = x.iter().map(QElem::conj).collect();
    s.left_apply(&xc)
}

/// Rows of the returned matrix are `n` vectors fixed by `f`, independent over `Q`.
/// Satisfies `conj(X) S = X`.
pub fn fixed_space(s: &ExactMat, order: CandidateOrder) -> Result<ExactMat> {
    let n = s.rows();
    let field = s.field();
    if !s.is_square() {
        return Err(Error::Dimension(format!(
            "fixed_space needs a square matrix, got {}x{}",
            s.rows(),
            s.cols()
        )));
    }
    if s.matmul(&s.conj())? != ExactMat::identity(n, field) {
        return Err(Error::Internal("S conj(S) is not the identity".into()));
    }
    let half = QElem::from_rat(ratio(1, 2), field);
    let root_half = &QElem::sqrt_d(field) * &half;
    let mut plus = Vec::with_capacity(n);
    let mut minus = Vec::with_capacity(n);
    for k in 0..n {
        // f(e_k) is row k of S.
        let image = s.row(k);
        let mut p = Vec::with_capacity(n);
        let mut m = Vec::with_capacity(n);
        for (l, fe) in image.iter().enumerate() {
            let e = if l == k {
                QElem::one(field)
            } else {
                QElem::zero(field)
            };
            p.push(&(&e + fe) * &half);
            m.push(&(&e - fe) * &root_half);
        }
        plus.push(p);
        minus.push(m);
    }
    let mut candidates: Vec<Vec<QElem>> = plus.into_iter().chain(minus).collect();
    if order == CandidateOrder::Reversed {
        candidates.reverse();
    }
    let base = rank_over_base(&candidates)?;
    if base.rank < n {
        return Err(Error::Internal(format!(
            "only {} of {n} independent fixed vectors",
            base.rank
        )));
    }
    let rows = base.selected[..n]
        .iter()
        .map(|&i| candidates[i].clone())
        .collect();
    let x = ExactMat::from_rows(field, rows)?;
    debug_assert!(x.conj().matmul(s).map(|c| c == x).unwrap_or(false));
    Ok(x)
}
