use serde::Serialize;

use crate::error::Result;
use crate::exactnum::QElem;
use crate::linalg::ExactMat;
use crate::scheme::{Scheme, Slot};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum PostCheckStatus {
    Clean,
    ScalarAdjusted,
    /// Triple `index` (1-based) is not rational up to scalars.
    Anomalous {
        index: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PostCheck {
    pub status: PostCheckStatus,
    /// The input with scalars redistributed; absent when anomalous.
    pub scheme: Option<Scheme>,
}

/// `(alpha, R)` with `F = alpha R` and `R` rational, if such a split exists.
fn scalar_split(f: &ExactMat) -> Option<QElem> {
    if f.is_rational() {
        return Some(QElem::one(f.field()));
    }
    let alpha = f.entries().iter().find(|e| !e.is_zero())?.clone();
    let inv = alpha.inv().ok()?;
    f.scale(&inv).is_rational().then_some(alpha)
}

/// Moves scalar factors between the members of each triple so that every
/// factor becomes rational, when that is possible.
pub fn post_check(s: &Scheme) -> Result<PostCheck> {
    let mut out = s.clone();
    let mut adjusted = false;
    for (j, t) in s.triples().iter().enumerate() {
        if t.is_rational() {
            continue;
        }
        let anomalous = PostCheck {
            status: PostCheckStatus::Anomalous { index: j + 1 },
            scheme: None,
        };
        let (Some(a1), Some(a2), Some(a3)) =
            (scalar_split(&t.o), scalar_split(&t.p), scalar_split(&t.q))
        else {
            return Ok(anomalous);
        };
        let a12 = &a1 * &a2;
        if !(&a12 * &a3).is_rational() {
            return Ok(anomalous);
        }
        // O <- O/a1, P <- a1 P; then P <- P/(a1 a2), Q <- a1 a2 Q.
        out = out.scalar_redistribute(j, &a1.inv()?, Slot::O, Slot::P)?;
        out = out.scalar_redistribute(j, &a12.inv()?, Slot::P, Slot::Q)?;
        adjusted = true;
    }
    let status = if adjusted {
        PostCheckStatus::ScalarAdjusted
    } else {
        PostCheckStatus::Clean
    };
    Ok(PostCheck {
        status,
        scheme: Some(out),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::FieldDesc;
    use crate::fixtures;
    use crate::scheme::{Dims, Triple};

    fn gi() -> FieldDesc {
        FieldDesc::GAUSSIAN
    }

    fn m(rows: &[&[&str]]) -> ExactMat {
        let rows: Vec<Vec<&str>> = rows.iter().map(|r| r.to_vec()).collect();
        ExactMat::parse_rows(gi(), &rows).unwrap()
    }

    #[test]
    fn rational_scheme_is_clean() {
        let s = fixtures::strassen();
        let pc = post_check(&s).unwrap();
        assert_eq!(pc.status, PostCheckStatus::Clean);
        assert_eq!(pc.scheme.unwrap(), s);
    }

    #[test]
    fn opposite_units_are_adjustable() {
        let r1 = m(&[&["1", "2"], &["0", "3"]]);
        let r2 = m(&[&["0", "1/2"], &["1", "1"]]);
        let r3 = m(&[&["1", "0"], &["-1", "1"]]);
        let i = QElem::sqrt_d(gi());
        let t = Triple::new(r1.scale(&i), r2.scale(&(-&i)), r3.clone());
        let s = Scheme::new(Dims::new(2, 2, 2), gi(), vec![t]).unwrap();
        let pc = post_check(&s).unwrap();
        assert_eq!(pc.status, PostCheckStatus::ScalarAdjusted);
        let out = pc.scheme.unwrap();
        assert!(out.is_rational());
        let t = &out.triples()[0];
        assert_eq!(t.o, r1);
        // The unit of P is its first entry -i/2, which leaves 1/2 for Q.
        let two = QElem::from_int(2, gi());
        assert_eq!(t.p, r2.scale(&two));
        assert_eq!(t.q.scale(&two), r3);
    }

    #[test]
    fn mixed_diagonal_is_anomalous() {
        let f = m(&[&["i", "0"], &["0", "1"]]);
        let id = ExactMat::identity(2, gi());
        let s = Scheme::new(
            Dims::new(2, 2, 2),
            gi(),
            vec![
                Triple::new(id.clone(), id.clone(), id.clone()),
                Triple::new(f, id.clone(), id),
            ],
        )
        .unwrap();
        let pc = post_check(&s).unwrap();
        assert_eq!(pc.status, PostCheckStatus::Anomalous { index: 2 });
        assert!(pc.scheme.is_none());
    }

    #[test]
    fn non_rational_scalar_product_is_anomalous() {
        let id = ExactMat::identity(2, gi());
        let i = QElem::sqrt_d(gi());
        let t = Triple::new(id.scale(&i), id.clone(), id);
        let s = Scheme::new(Dims::new(2, 2, 2), gi(), vec![t]).unwrap();
        assert_eq!(
            post_check(&s).unwrap().status,
            PostCheckStatus::Anomalous { index: 1 }
        );
    }
}
