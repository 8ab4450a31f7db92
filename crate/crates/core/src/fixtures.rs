//! Bundled schemes and matrices used by tests, the CLI and the examples in the
//! README.

use crate::exactnum::{FieldDesc, QElem};
use crate::linalg::ExactMat;
use crate::scheme::{standard_scheme, Dims, EncodingMatrices, Scheme, TransformTriple, Triple};

fn lit(field: FieldDesc, rows: &[&[&str]]) -> ExactMat {
    let rows: Vec<Vec<&str>> = rows.iter().map(|r| r.to_vec()).collect();
    ExactMat::parse_rows(field, &rows).expect("valid fixture literal")
}

/// Strassen's `<2,2,2,7>` scheme, built from its encoding matrices.
pub fn strassen() -> Scheme {
    strassen_in(FieldDesc::GAUSSIAN)
}

pub fn strassen_in(field: FieldDesc) -> Scheme {
    let u = ExactMat::from_ints(
        field,
        &[
            &[1, 0, 0, 1],
            &[0, 0, 1, 1],
            &[1, 0, 0, 0],
            &[0, 0, 0, 1],
            &[1, 1, 0, 0],
            &[-1, 0, 1, 0],
            &[0, 1, 0, -1],
        ],
    );
    let v = ExactMat::from_ints(
        field,
        &[
            &[1, 0, 0, 1],
            &[1, 0, 0, 0],
            &[0, 1, 0, -1],
            &[-1, 0, 1, 0],
            &[0, 0, 0, 1],
            &[1, 1, 0, 0],
            &[0, 0, 1, 1],
        ],
    );
    let w = ExactMat::from_ints(
        field,
        &[
            &[1, 0, 0, 1],
            &[0, 0, 1, -1],
            &[0, 1, 0, 1],
            &[1, 0, 1, 0],
            &[-1, 1, 0, 0],
            &[0, 0, 0, 1],
            &[1, 0, 0, 0],
        ],
    );
    Scheme::from_encoding(Dims::new(2, 2, 2), &EncodingMatrices { u, v, w })
        .expect("Strassen encoding is well shaped")
}

/// The standard `<2,2,2,8>` algorithm.
pub fn standard_222() -> Scheme {
    standard_scheme(Dims::new(2, 2, 2), FieldDesc::GAUSSIAN)
}

/// Strassen conjugated by `X0 = [[1,i],[0,1]]`, `Y0 = [[i,0],[1,1]]`, `Z0 = I`.
/// A rational point exists in its orbit by construction.
pub fn complexified_strassen() -> Scheme {
    let f = FieldDesc::GAUSSIAN;
    let t = TransformTriple::new(
        lit(f, &[&["1", "i"], &["0", "1"]]),
        lit(f, &[&["i", "0"], &["1", "1"]]),
        ExactMat::identity(2, f),
    )
    .expect("invertible");
    strassen().apply_transform(&t).expect("shapes agree")
}

/// The standard `<2,2,2>` tensor with its first term split as
/// `i*T + (1-i)*T`. Valid, but the first `O_j P_j Q_j` is `diag(i, 0)`, whose
/// characteristic polynomial has non-rational coefficients, so no rational
/// scheme is equivalent to it.
pub fn split_nonreal() -> Scheme {
    let f = FieldDesc::GAUSSIAN;
    let base = standard_222();
    let mut triples: Vec<Triple> = base.triples().to_vec();
    let first = triples[0].clone();
    let i = QElem::sqrt_d(f);
    let rest = QElem::parse("1-i", f).expect("literal");
    triples[0] = Triple::new(first.o.scale(&i), first.p.clone(), first.q.clone());
    triples.insert(1, Triple::new(first.o.scale(&rest), first.p, first.q));
    Scheme::new(base.dims(), f, triples).expect("shapes agree")
}

/// Two-triple `<2,2,2>` toy (not a valid scheme) whose `O_j P_j Q_j` are
/// `[[0,1],[0,0]]` and `[[0,0],[1/2,0]]`: integral traces at depth 1, trace
/// 1/2 for the product of the two.
pub fn half_trace_toy() -> Scheme {
    let f = FieldDesc::GAUSSIAN;
    let id = ExactMat::identity(2, f);
    let a1 = lit(f, &[&["0", "1"], &["0", "0"]]);
    let a2 = lit(f, &[&["0", "0"], &["1/2", "0"]]);
    Scheme::new(
        Dims::new(2, 2, 2),
        f,
        vec![
            Triple::new(a1, id.clone(), id.clone()),
            Triple::new(a2, id.clone(), id),
        ],
    )
    .expect("shapes agree")
}

/// Spanning element of the one-dimensional `OPQ` intertwiner space reported
/// for a known `<4,4,4,48>` scheme over `Q[i]`.
pub fn descent_example_basis() -> ExactMat {
    lit(
        FieldDesc::GAUSSIAN,
        &[
            &["0", "0", "0", "1"],
            &["0", "0", "i", "0"],
            &["0", "i", "0", "0"],
            &["1", "0", "0", "0"],
        ],
    )
}

/// Spanning element of the `PQO` intertwiner space for the same scheme.
pub fn descent_example_pqo_basis() -> ExactMat {
    lit(
        FieldDesc::GAUSSIAN,
        &[
            &["-1", "0", "0", "0"],
            &["0", "-1", "0", "0"],
            &["0", "0", "-1", "0"],
            &["0", "0", "0", "1"],
        ],
    )
}

/// The `X`, `Y`, `Z` that bring that `<4,4,4,48>` scheme to `Z[1/8]`.
pub fn descent_example_x() -> ExactMat {
    lit(
        FieldDesc::GAUSSIAN,
        &[
            &["1", "0", "0", "1"],
            &["0", "1", "i", "0"],
            &["0", "i", "1", "0"],
            &["i", "0", "0", "-i"],
        ],
    )
}

pub fn descent_example_y() -> ExactMat {
    lit(
        FieldDesc::GAUSSIAN,
        &[
            &["-i", "i", "i", "0"],
            &["0", "-i", "0", "0"],
            &["0", "0", "-i", "0"],
            &["0", "0", "0", "1"],
        ],
    )
}

pub fn descent_example_z() -> ExactMat {
    lit(
        FieldDesc::GAUSSIAN,
        &[
            &["1/2", "-1/2", "1/2", "0"],
            &["1/2", "1/2", "-1/2", "0"],
            &["-1/2", "1/2", "1/2", "0"],
            &["0", "0", "0", "1"],
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_schemes_are_valid() {
        assert!(strassen().brent_verify().ok());
        assert!(standard_222().brent_verify().ok());
        assert!(complexified_strassen().brent_verify().ok());
        assert!(!complexified_strassen().is_rational());
        assert!(split_nonreal().brent_verify().ok());
        assert_eq!(split_nonreal().rank(), 9);
        assert!(!half_trace_toy().brent_verify().ok());
    }

    #[test]
    fn reference_transform_is_invertible() {
        assert!(TransformTriple::new(
            descent_example_x(),
            descent_example_y(),
            descent_example_z()
        )
        .is_ok());
    }
}
