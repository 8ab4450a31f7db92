//! Bilinear matrix-multiplication schemes `sum_j O_j ⊗ P_j ⊗ Q_j`.
//!
//! For an `<m,n,p,r>` scheme `O_j` is `m x n`, `P_j` is `n x p` and `Q_j` is
//! `p x m`. `Q_j` holds the output coefficients transposed: `Q_j(k, i)` is the
//! weight of product `j` in `C(i, k)`.

mod format;
mod ring;

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{FieldDesc, QElem};
use crate::linalg::ExactMat;

pub use format::{parse_matrix_literal, DocumentForm, SchemeDocument};
pub use ring::{detect_ring, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Dims {
    pub m: usize,
    pub n: usize,
    pub p: usize,
}

impl Dims {
    pub fn new(m: usize, n: usize, p: usize) -> Self {
        Dims { m, n, p }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Triple {
    pub o: ExactMat,
    pub p: ExactMat,
    pub q: ExactMat,
}

impl Triple {
    pub fn new(o: ExactMat, p: ExactMat, q: ExactMat) -> Self {
        Triple { o, p, q }
    }

    pub fn factor(&self, slot: Slot) -> &ExactMat {
        match slot {
            Slot::O => &self.o,
            Slot::P => &self.p,
            Slot::Q => &self.q,
        }
    }

    fn factor_mut(&mut self, slot: Slot) -> &mut ExactMat {
        match slot {
            Slot::O => &mut self.o,
            Slot::P => &mut self.p,
            Slot::Q => &mut self.q,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.o.is_rational() && self.p.is_rational() && self.q.is_rational()
    }
}

/// One factor position inside a triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Slot {
    O,
    P,
    Q,
}

/// Which cyclic product `M_j` to form from a triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, PartialOrd, Ord)]
pub enum Variant {
    #[serde(rename = "OPQ")]
    Opq,
    #[serde(rename = "PQO")]
    Pqo,
    #[serde(rename = "QOP")]
    Qop,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Opq, Variant::Pqo, Variant::Qop];
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Opq => "OPQ",
            Variant::Pqo => "PQO",
            Variant::Qop => "QOP",
        })
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "OPQ" => Ok(Variant::Opq),
            "PQO" => Ok(Variant::Pqo),
            "QOP" => Ok(Variant::Qop),
            _ => Err(Error::Format(format!("unknown variant {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scheme {
    dims: Dims,
    field: FieldDesc,
    triples: Vec<Triple>,
}

/// First Brent equation that fails, with 1-based indices `(i1, j1, j2, k1, k2, i2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrentViolation {
    pub index: [usize; 6],
    pub sum: QElem,
    pub expected: QElem,
}

impl fmt::Display for BrentViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [i1, j1, j2, k1, k2, i2] = self.index;
        write!(
            f,
            "(i1,j1,j2,k1,k2,i2)=({i1},{j1},{j2},{k1},{k2},{i2}): sum {} expected {}",
            self.sum, self.expected
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrentReport {
    pub sums_checked: usize,
    pub violation: Option<BrentViolation>,
}

impl BrentReport {
    pub fn ok(&self) -> bool {
        self.violation.is_none()
    }
}

/// `U`, `V`, `W` with row `j` the row-major vectorizations of `O_j`, `P_j`
/// and `Q_j^T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodingMatrices {
    pub u: ExactMat,
    pub v: ExactMat,
    pub w: ExactMat,
}

/// Invertible `X (m x m)`, `Y (n x n)`, `Z (p x p)` acting by
/// `(O, P, Q) -> (X O Y^-1, Y P Z^-1, Z Q X^-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformTriple {
    x: ExactMat,
    y: ExactMat,
    z: ExactMat,
    x_inv: ExactMat,
    y_inv: ExactMat,
    z_inv: ExactMat,
}

/// Names which member of a transform triple was rejected.
#[derive(Debug)]
pub struct TransformError {
    pub which: char,
    pub source: Error,
}

impl fmt::Display for TransformError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.which, self.source)
    }
}

impl std::error::Error for TransformError {}

impl TransformTriple {
    pub fn new(x: ExactMat, y: ExactMat, z: ExactMat) -> Result<Self, TransformError> {
        let inv = |m: &ExactMat, which| {
            m.inverse()
                .map_err(|source| TransformError { which, source })
        };
        let x_inv = inv(&x, 'X')?;
        let y_inv = inv(&y, 'Y')?;
        let z_inv = inv(&z, 'Z')?;
        Ok(TransformTriple {
            x,
            y,
            z,
            x_inv,
            y_inv,
            z_inv,
        })
    }

    pub fn identity(dims: Dims, field: FieldDesc) -> Self {
        let (x, y, z) = (
            ExactMat::identity(dims.m, field),
            ExactMat::identity(dims.n, field),
            ExactMat::identity(dims.p, field),
        );
        TransformTriple {
            x_inv: x.clone(),
            y_inv: y.clone(),
            z_inv: z.clone(),
            x,
            y,
            z,
        }
    }

    pub fn x(&self) -> &ExactMat {
        &self.x
    }

    pub fn y(&self) -> &ExactMat {
        &self.y
    }

    pub fn z(&self) -> &ExactMat {
        &self.z
    }
}

impl Scheme {
    /// Validates shapes and fields. Does not run the Brent check.
    pub fn new(dims: Dims, field: FieldDesc, triples: Vec<Triple>) -> Result<Self> {
        if triples.is_empty() {
            return Err(Error::InvalidScheme(
                "a scheme needs at least one triple".into(),
            ));
        }
        if dims.m == 0 || dims.n == 0 || dims.p == 0 {
            return Err(Error::InvalidScheme("dimensions must be positive".into()));
        }
        let Dims { m, n, p } = dims;
        for (j, t) in triples.iter().enumerate() {
            for (name, mat, shape) in [
                ("O", &t.o, (m, n)),
                ("P", &t.p, (n, p)),
                ("Q", &t.q, (p, m)),
            ] {
                if mat.shape() != shape {
                    return Err(Error::InvalidScheme(format!(
                        "triple {}: {name} is {}x{}, expected {}x{}",
                        j + 1,
                        mat.rows(),
                        mat.cols(),
                        shape.0,
                        shape.1
                    )));
                }
                if mat.field() != field {
                    return Err(Error::FieldMismatch {
                        left: field,
                        right: mat.field(),
                    });
                }
            }
        }
        Ok(Scheme {
            dims,
            field,
            triples,
        })
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn rank(&self) -> usize {
        self.triples.len()
    }

    pub fn field(&self) -> FieldDesc {
        self.field
    }

    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    pub fn into_triples(self) -> Vec<Triple> {
        self.triples
    }

    pub fn is_rational(&self) -> bool {
        self.triples.iter().all(Triple::is_rational)
    }

    /// `⟨m,n,p,r⟩`
    pub fn signature(&self) -> String {
        let Dims { m, n, p } = self.dims;
        format!("⟨{m},{n},{p},{}⟩", self.rank())
    }

    /// Checks every Brent equation
    /// `sum_t O_t(i1,j1) P_t(j2,k1) Q_t(k2,i2) = δ(i1,i2) δ(j1,j2) δ(k1,k2)`
    /// and reports the first failure in `(i1,j1,j2,k1,k2,i2)` lexicographic order.
    pub fn brent_verify(&self) -> BrentReport {
        let Dims { m, n, p } = self.dims;
        let (na, nb, nc) = (m * n, n * p, p * m);
        let field = self.field;
        // Accumulate the full tensor from the sparse factors, then scan it in order.
        let mut acc = vec![QElem::zero(field); na * nb * nc];
        for t in &self.triples {
            let (o, pp) = (nonzeros(&t.o), nonzeros(&t.p));
            // Q(k2, i2) is stored row-major as k2 * m + i2, which is exactly the c index.
            let q = nonzeros(&t.q);
            for &(a, oe) in &o {
                for &(b, pe) in &pp {
                    let op = oe * pe;
                    let base = (a * nb + b) * nc;
                    for &(c, qe) in &q {
                        acc[base + c] += &(&op * qe);
                    }
                }
            }
        }
        let one = QElem::one(field);
        let zero = QElem::zero(field);
        for i1 in 0..m {
            for j1 in 0..n {
                for j2 in 0..n {
                    for k1 in 0..p {
                        for k2 in 0..p {
                            for i2 in 0..m {
                                let a = i1 * n + j1;
                                let b = j2 * p + k1;
                                let c = k2 * m + i2;
                                let sum = &acc[(a * nb + b) * nc + c];
                                let expected = if i1 == i2 && j1 == j2 && k1 == k2 {
                                    &one
                                } else {
                                    &zero
                                };
                                if sum != expected {
                                    return BrentReport {
                                        sums_checked: (a * nb + b) * nc + c + 1,
                                        violation: Some(BrentViolation {
                                            index: [i1 + 1, j1 + 1, j2 + 1, k1 + 1, k2 + 1, i2 + 1],
                                            sum: sum.clone(),
                                            expected: expected.clone(),
                                        }),
                                    };
                                }
                            }
                        }
                    }
                }
            }
        }
        BrentReport {
            sums_checked: acc.len(),
            violation: None,
        }
    }

    /// Errors with [`Error::BrentViolation`] unless the scheme is valid.
    pub fn ensure_valid(&self) -> Result<()> {
        match self.brent_verify().violation {
            None => Ok(()),
            Some(v) => Err(Error::BrentViolation(v.to_string())),
        }
    }

    pub fn to_encoding(&self) -> EncodingMatrices {
        let field = self.field;
        let rows = |f: &dyn Fn(&Triple) -> Vec<QElem>| -> ExactMat {
            ExactMat::from_rows(field, self.triples.iter().map(f).collect())
                .expect("triples share a shape")
        };
        EncodingMatrices {
            u: rows(&|t| t.o.entries().to_vec()),
            v: rows(&|t| t.p.entries().to_vec()),
            w: rows(&|t| t.q.transpose().entries().to_vec()),
        }
    }

    pub fn from_encoding(dims: Dims, enc: &EncodingMatrices) -> Result<Self> {
        let Dims { m, n, p } = dims;
        let r = enc.u.rows();
        let field = enc.u.field();
        for (name, mat, width) in [
            ("U", &enc.u, m * n),
            ("V", &enc.v, n * p),
            ("W", &enc.w, p * m),
        ] {
            if mat.rows() != r || mat.cols() != width {
                return Err(Error::Dimension(format!(
                    "{name} is {}x{}, expected {r}x{width}",
                    mat.rows(),
                    mat.cols()
                )));
            }
        }
        let triples = (0..r)
            .map(|j| {
                let o = ExactMat::from_vec(m, n, field, enc.u.row(j).to_vec())?;
                let pm = ExactMat::from_vec(n, p, field, enc.v.row(j).to_vec())?;
                let qt = ExactMat::from_vec(m, p, field, enc.w.row(j).to_vec())?;
                Ok(Triple::new(o, pm, qt.transpose()))
            })
            .collect::<Result<Vec<_>>>()?;
        Scheme::new(dims, field, triples)
    }

    /// `(X O_j Y^-1, Y P_j Z^-1, Z Q_j X^-1)` for every `j`.
    pub fn apply_transform(&self, t: &TransformTriple) -> Result<Scheme> {
        let Dims { m, n, p } = self.dims;
        for (name, mat, size) in [("X", &t.x, m), ("Y", &t.y, n), ("Z", &t.z, p)] {
            if mat.shape() != (size, size) {
                return Err(Error::Dimension(format!(
                    "{name} must be {size}x{size}, got {}x{}",
                    mat.rows(),
                    mat.cols()
                )));
            }
            if mat.field() != self.field {
                return Err(Error::FieldMismatch {
                    left: self.field,
                    right: mat.field(),
                });
            }
        }
        let triples = self
            .triples
            .iter()
            .map(|tr| {
                Ok(Triple::new(
                    t.x.matmul(&tr.o)?.matmul(&t.y_inv)?,
                    t.y.matmul(&tr.p)?.matmul(&t.z_inv)?,
                    t.z.matmul(&tr.q)?.matmul(&t.x_inv)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Scheme::new(self.dims, self.field, triples)
    }

    /// `sum P_j ⊗ Q_j ⊗ O_j`, an `<n,p,m,r>` scheme.
    pub fn cyclic_shift(&self) -> Scheme {
        let Dims { m, n, p } = self.dims;
        let triples = self
            .triples
            .iter()
            .map(|t| Triple::new(t.p.clone(), t.q.clone(), t.o.clone()))
            .collect();
        Scheme::new(Dims::new(n, p, m), self.field, triples).expect("shapes rotate consistently")
    }

    /// `sum P_j^T ⊗ O_j^T ⊗ Q_j^T`, a `<p,n,m,r>` scheme.
    pub fn transpose_action(&self) -> Scheme {
        let Dims { m, n, p } = self.dims;
        let triples = self
            .triples
            .iter()
            .map(|t| Triple::new(t.p.transpose(), t.o.transpose(), t.q.transpose()))
            .collect();
        Scheme::new(Dims::new(p, n, m), self.field, triples).expect("transposed shapes agree")
    }

    /// Multiplies factor `scaled` of triple `j` (0-based) by `alpha` and factor
    /// `compensated` by `alpha^-1`.
    pub fn scalar_redistribute(
        &self,
        j: usize,
        alpha: &QElem,
        scaled: Slot,
        compensated: Slot,
    ) -> Result<Scheme> {
        if j >= self.rank() {
            return Err(Error::InvalidScheme(format!(
                "triple index {} out of range 1..={}",
                j + 1,
                self.rank()
            )));
        }
        if scaled == compensated {
            return Err(Error::InvalidScheme(
                "scalar redistribution needs two different factors".into(),
            ));
        }
        if alpha.field() != self.field {
            return Err(Error::FieldMismatch {
                left: self.field,
                right: alpha.field(),
            });
        }
        let inv = alpha.inv()?;
        let mut out = self.clone();
        let t = &mut out.triples[j];
        *t.factor_mut(scaled) = t.factor(scaled).scale(alpha);
        *t.factor_mut(compensated) = t.factor(compensated).scale(&inv);
        Ok(out)
    }

    /// The square products `M_j` for the requested cyclic order.
    pub fn products(&self, variant: Variant) -> Vec<ExactMat> {
        self.triples
            .iter()
            .map(|t| {
                let (a, b, c) = match variant {
                    Variant::Opq => (&t.o, &t.p, &t.q),
                    Variant::Pqo => (&t.p, &t.q, &t.o),
                    Variant::Qop => (&t.q, &t.o, &t.p),
                };
                a.matmul(b)
                    .and_then(|ab| ab.matmul(c))
                    .expect("validated scheme shapes")
            })
            .collect()
    }

    /// `trace(O_j P_j Q_j)` for every `j`.
    pub fn traces(&self) -> Vec<QElem> {
        self.products(Variant::Opq)
            .iter()
            .map(ExactMat::trace)
            .collect()
    }

    #[cfg(test)]
    pub(crate) fn replace_triples(&self, triples: Vec<Triple>) -> Result<Scheme> {
        Scheme::new(self.dims, self.field, triples)
    }
}

fn nonzeros(mat: &ExactMat) -> Vec<(usize, &QElem)> {
    mat.entries()
        .iter()
        .enumerate()
        .filter(|(_, e)| !e.is_zero())
        .collect()
}

/// The standard algorithm `sum_{a,b,c} E_ab ⊗ E_bc ⊗ E_ca` for `<m,n,p>`.
pub fn standard_scheme(dims: Dims, field: FieldDesc) -> Scheme {
    let Dims { m, n, p } = dims;
    let unit = |rows, cols, i, j| {
        let mut e = ExactMat::zeros(rows, cols, field);
        e.set(i, j, QElem::one(field));
        e
    };
    let mut triples = Vec::with_capacity(m * n * p);
    for a in 0..m {
        for b in 0..n {
            for c in 0..p {
                triples.push(Triple::new(
                    unit(m, n, a, b),
                    unit(n, p, b, c),
                    unit(p, m, c, a),
                ));
            }
        }
    }
    Scheme::new(dims, field, triples).expect("standard tensor shapes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, QElem};
    use crate::fixtures;

    fn gi() -> FieldDesc {
        FieldDesc::GAUSSIAN
    }

    fn m(rows: &[&[i64]]) -> ExactMat {
        ExactMat::from_ints(gi(), rows)
    }

    #[test]
    fn strassen_matches_tensor_listing() {
        let s = fixtures::strassen();
        let listing = [
            (
                m(&[&[1, 0], &[0, 1]]),
                m(&[&[1, 0], &[0, 1]]),
                m(&[&[1, 0], &[0, 1]]),
            ),
            (
                m(&[&[0, 0], &[1, 1]]),
                m(&[&[1, 0], &[0, 0]]),
                m(&[&[0, 1], &[0, -1]]),
            ),
            (
                m(&[&[1, 0], &[0, 0]]),
                m(&[&[0, 1], &[0, -1]]),
                m(&[&[0, 0], &[1, 1]]),
            ),
            (
                m(&[&[0, 0], &[0, 1]]),
                m(&[&[-1, 0], &[1, 0]]),
                m(&[&[1, 1], &[0, 0]]),
            ),
            (
                m(&[&[1, 1], &[0, 0]]),
                m(&[&[0, 0], &[0, 1]]),
                m(&[&[-1, 0], &[1, 0]]),
            ),
            (
                m(&[&[-1, 0], &[1, 0]]),
                m(&[&[1, 1], &[0, 0]]),
                m(&[&[0, 0], &[0, 1]]),
            ),
            (
                m(&[&[0, 1], &[0, -1]]),
                m(&[&[0, 0], &[1, 1]]),
                m(&[&[1, 0], &[0, 0]]),
            ),
        ];
        assert_eq!(s.rank(), 7);
        for (t, (o, p, q)) in s.triples().iter().zip(listing) {
            assert_eq!((&t.o, &t.p, &t.q), (&o, &p, &q));
        }
    }

    #[test]
    fn strassen_is_valid() {
        let r = fixtures::strassen().brent_verify();
        assert!(r.ok());
        assert_eq!(r.sums_checked, 64);
    }

    #[test]
    fn standard_small() {
        let s = standard_scheme(Dims::new(2, 3, 2), gi());
        assert_eq!(s.rank(), 12);
        assert!(s.brent_verify().ok());
    }

    #[test]
    fn corrupted_strassen_reports_first_violation() {
        let s = fixtures::strassen();
        let mut triples = s.triples().to_vec();
        triples[0].o.set(0, 0, QElem::from_int(2, gi()));
        let bad = s.replace_triples(triples).unwrap();
        let v = bad.brent_verify().violation.unwrap();
        assert_eq!(v.index, [1, 1, 1, 1, 1, 1]);
        assert_eq!(v.sum, QElem::from_int(2, gi()));
        assert!(bad.ensure_valid().is_err());
    }

    #[test]
    fn encoding_of_strassen() {
        let enc = fixtures::strassen().to_encoding();
        let u = m(&[
            &[1, 0, 0, 1],
            &[0, 0, 1, 1],
            &[1, 0, 0, 0],
            &[0, 0, 0, 1],
            &[1, 1, 0, 0],
            &[-1, 0, 1, 0],
            &[0, 1, 0, -1],
        ]);
        let v = m(&[
            &[1, 0, 0, 1],
            &[1, 0, 0, 0],
            &[0, 1, 0, -1],
            &[-1, 0, 1, 0],
            &[0, 0, 0, 1],
            &[1, 1, 0, 0],
            &[0, 0, 1, 1],
        ]);
        let w = m(&[
            &[1, 0, 0, 1],
            &[0, 0, 1, -1],
            &[0, 1, 0, 1],
            &[1, 0, 1, 0],
            &[-1, 1, 0, 0],
            &[0, 0, 0, 1],
            &[1, 0, 0, 0],
        ]);
        assert_eq!(enc.u, u);
        assert_eq!(enc.v, v);
        assert_eq!(enc.w, w);
        assert_eq!(enc.w.row(1), m(&[&[0, 0, 1, -1]]).row(0));
    }

    #[test]
    fn encoding_shape_errors() {
        let enc = fixtures::strassen().to_encoding();
        assert!(Scheme::from_encoding(Dims::new(2, 2, 3), &enc).is_err());
    }

    #[test]
    fn identity_transform_is_noop() {
        let s = fixtures::strassen();
        let t = TransformTriple::identity(s.dims(), gi());
        assert_eq!(s.apply_transform(&t).unwrap(), s);
    }

    #[test]
    fn singular_transform_names_member() {
        let err = TransformTriple::new(
            ExactMat::identity(2, gi()),
            m(&[&[1, 1], &[1, 1]]),
            ExactMat::identity(2, gi()),
        )
        .unwrap_err();
        assert_eq!(err.which, 'Y');
    }

    #[test]
    fn transform_rejects_wrong_size() {
        let s = fixtures::strassen();
        let t = TransformTriple::identity(Dims::new(3, 2, 2), gi());
        assert!(matches!(s.apply_transform(&t), Err(Error::Dimension(_))));
    }

    #[test]
    fn cyclic_shift_dims_and_period() {
        let s = fixtures::strassen();
        let c = s.cyclic_shift();
        assert!(c.brent_verify().ok());
        assert_eq!(c.cyclic_shift().cyclic_shift(), s);

        let st = standard_scheme(Dims::new(3, 4, 7), gi());
        assert_eq!(st.cyclic_shift().dims(), Dims::new(4, 7, 3));
    }

    #[test]
    fn transpose_action_shapes() {
        let s = fixtures::strassen();
        let t = s.transpose_action();
        assert!(t.brent_verify().ok());
        assert_eq!(t.transpose_action(), s);

        let st = standard_scheme(Dims::new(2, 4, 5), gi());
        let tt = st.transpose_action();
        assert_eq!(tt.dims(), Dims::new(5, 4, 2));
        assert!(tt.brent_verify().ok());
    }

    #[test]
    fn scalar_redistribution() {
        let s = fixtures::strassen();
        let one = QElem::one(gi());
        assert_eq!(s.scalar_redistribute(0, &one, Slot::O, Slot::P).unwrap(), s);

        let two = QElem::from_int(2, gi());
        let r = s.scalar_redistribute(0, &two, Slot::O, Slot::P).unwrap();
        assert!(r.brent_verify().ok());
        assert_eq!(r.triples()[0].o.get(0, 0), &two);

        let i = QElem::sqrt_d(gi());
        let r = s.scalar_redistribute(3, &i, Slot::Q, Slot::O).unwrap();
        assert!(!r.is_rational());
        assert!(r.brent_verify().ok());

        assert!(matches!(
            s.scalar_redistribute(0, &QElem::zero(gi()), Slot::O, Slot::P),
            Err(Error::DivisionByZero)
        ));
        assert!(s.scalar_redistribute(0, &two, Slot::O, Slot::O).is_err());
        assert!(s.scalar_redistribute(7, &two, Slot::O, Slot::P).is_err());
    }

    #[test]
    fn product_variants() {
        let s = fixtures::strassen();
        let opq = s.products(Variant::Opq);
        assert_eq!(opq[0], ExactMat::identity(2, gi()));
        assert_eq!(opq[0].trace(), QElem::from_rat(rat(2), gi()));
        let pqo = s.products(Variant::Pqo);
        let qop = s.products(Variant::Qop);
        for j in 0..s.rank() {
            assert_eq!(opq[j].trace(), pqo[j].trace());
            assert_eq!(opq[j].trace(), qop[j].trace());
        }

        let st = standard_scheme(Dims::new(2, 3, 4), gi());
        assert_eq!(st.products(Variant::Opq)[0].shape(), (2, 2));
        assert_eq!(st.products(Variant::Pqo)[0].shape(), (3, 3));
        assert_eq!(st.products(Variant::Qop)[0].shape(), (4, 4));
    }

    #[test]
    fn new_rejects_bad_shapes() {
        let s = fixtures::strassen();
        let mut triples = s.triples().to_vec();
        triples[2].p = ExactMat::zeros(2, 3, gi());
        assert!(matches!(
            Scheme::new(s.dims(), gi(), triples),
            Err(Error::InvalidScheme(_))
        ));
        assert!(Scheme::new(s.dims(), gi(), Vec::new()).is_err());
    }
}
