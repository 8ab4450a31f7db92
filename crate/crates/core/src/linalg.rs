//! Dense exact linear algebra over `Q[sqrt d]`.
//!
//! Elimination always takes the first nonzero entry in a column as pivot, so
//! every returned basis is deterministic.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactnum::{FieldDesc, QElem, Rat};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactMat {
    rows: usize,
    cols: usize,
    field: FieldDesc,
    data: Vec<QElem>,
}

impl ExactMat {
    pub fn new(rows: usize, cols: usize, field: FieldDesc, data: Vec<QElem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(e) = data.iter().find(|e| e.field() != field) {
            return Err(Error::FieldMismatch {
                left: field,
                right: e.field(),
            });
        }
        Ok(ExactMat {
            rows,
            cols,
            field,
            data,
        })
    }

    pub fn from_rows(field: FieldDesc, rows: Vec<Vec<QElem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        ExactMat::new(r, c, field, rows.into_iter().flatten().collect())
    }

    /// Builds a matrix from entry strings (see [`QElem::parse`]).
    pub fn parse_rows<S: AsRef<str>>(field: FieldDesc, rows: &[Vec<S>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| QElem::parse(e.as_ref(), field))
                    .collect()
            })
            .collect::<Result<Vec<Vec<QElem>>>>()?;
        ExactMat::from_rows(field, rows)
    }

    pub fn from_ints(field: FieldDesc, rows: &[&[i64]]) -> Self {
        let rows = rows
            .iter()
            .map(|row| row.iter().map(|&v| QElem::from_int(v, field)).collect())
            .collect();
        ExactMat::from_rows(field, rows).expect("rectangular integer literal")
    }

    pub fn zeros(rows: usize, cols: usize, field: FieldDesc) -> Self {
        ExactMat {
            rows,
            cols,
            field,
            data: vec![QElem::zero(field); rows * cols],
        }
    }

    pub fn identity(n: usize, field: FieldDesc) -> Self {
        let mut m = ExactMat::zeros(n, n, field);
        for i in 0..n {
            m.data[i * n + i] = QElem::one(field);
        }
        m
    }

    pub fn diag(field: FieldDesc, entries: Vec<QElem>) -> Result<Self> {
        let n = entries.len();
        let mut m = ExactMat::zeros(n, n, field);
        for (i, e) in entries.into_iter().enumerate() {
            if e.field() != field {
                return Err(Error::FieldMismatch {
                    left: field,
                    right: e.field(),
                });
            }
            m.data[i * n + i] = e;
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn field(&self) -> FieldDesc {
        self.field
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &QElem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: QElem) {
        assert_eq!(v.field(), self.field, "field mismatch in ExactMat::set");
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[QElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[QElem] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<QElem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(QElem::is_zero)
    }

    /// True when every entry has a vanishing `sqrt d` part.
    pub fn is_rational(&self) -> bool {
        self.data.iter().all(QElem::is_rational)
    }

    pub fn transpose(&self) -> ExactMat {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        ExactMat {
            rows: self.cols,
            cols: self.rows,
            field: self.field,
            data,
        }
    }

    /// Entrywise conjugate.
    pub fn conj(&self) -> ExactMat {
        self.map(QElem::conj)
    }

    pub fn map(&self, f: impl Fn(&QElem) -> QElem) -> ExactMat {
        ExactMat {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, s: &QElem) -> ExactMat {
        assert_eq!(s.field(), self.field, "field mismatch in ExactMat::scale");
        self.map(|e| e * s)
    }

    fn check_field(&self, other: &ExactMat) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field,
                right: other.field,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &ExactMat) -> Result<ExactMat> {
        self.check_field(other)?;
        if self.shape() != other.shape() {
            return Err(Error::Dimension(format!(
                "cannot add {:?} and {:?}",
                self.shape(),
                other.shape()
            )));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(ExactMat {
            data,
            ..self.clone_shape()
        })
    }

    pub fn sub(&self, other: &ExactMat) -> Result<ExactMat> {
        self.add(&other.map(|e| -e))
    }

    fn clone_shape(&self) -> ExactMat {
        ExactMat {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            data: Vec::new(),
        }
    }

    /// Exact product.
    pub fn matmul(&self, other: &ExactMat) -> Result<ExactMat> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = ExactMat::zeros(self.rows, other.cols, self.field);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> QElem {
        assert!(self.is_square(), "trace of a non-square matrix");
        let mut t = QElem::zero(self.field);
        for i in 0..self.rows {
            t += self.get(i, i);
        }
        t
    }

    /// `trace(self * other)` without forming the product.
    pub fn trace_of_product(&self, other: &ExactMat) -> Result<QElem> {
        self.check_field(other)?;
        if self.cols != other.rows || self.rows != other.cols {
            return Err(Error::Dimension("trace of a non-square product".into()));
        }
        let mut t = QElem::zero(self.field);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                let b = other.get(k, i);
                if !a.is_zero() && !b.is_zero() {
                    t += &(a * b);
                }
            }
        }
        Ok(t)
    }

    /// Reduced row-echelon form and pivot columns.
    pub fn rref(&self) -> (ExactMat, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place(self.cols);
        (m, pivots)
    }

    /// Gauss-Jordan on the first `ncols` columns, applying row operations to the
    /// full row width. Returns the pivot columns.
    fn rref_in_place(&mut self, ncols: usize) -> Vec<usize> {
        let width = self.cols;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..ncols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..width {
                    self.data.swap(p * width + j, r * width + j);
                }
            }
            let inv = self.get(r, c).inv().expect("nonzero pivot");
            for j in c..width {
                let v = &self.data[r * width + j] * &inv;
                self.data[r * width + j] = v;
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in c..width {
                    let pv = &self.data[r * width + j];
                    if pv.is_zero() {
                        continue;
                    }
                    let delta = &factor * pv;
                    self.data[i * width + j] -= &delta;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Exact inverse via Gauss-Jordan elimination on `[A | I]`.
    pub fn inverse(&self) -> Result<ExactMat> {
        if !self.is_square() {
            return Err(Error::Dimension(format!(
                "cannot invert a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut aug = ExactMat::zeros(n, 2 * n, self.field);
        for i in 0..n {
            for j in 0..n {
                aug.data[i * 2 * n + j] = self.get(i, j).clone();
            }
            aug.data[i * 2 * n + n + i] = QElem::one(self.field);
        }
        let pivots = aug.rref_in_place(n);
        if pivots.len() < n {
            return Err(Error::Singular {
                rank: pivots.len(),
                size: n,
            });
        }
        let mut inv = ExactMat::zeros(n, n, self.field);
        for i in 0..n {
            for j in 0..n {
                inv.data[i * n + j] = aug.get(i, n + j).clone();
            }
        }
        Ok(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Basis of the right kernel, one vector per free column in increasing
    /// order; each vector has a 1 in its free column and 0 in the other free
    /// columns.
    pub fn nullspace(&self) -> Vec<Vec<QElem>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![QElem::zero(self.field); self.cols];
                v[free] = QElem::one(self.field);
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(row, free);
                }
                v
            })
            .collect()
    }

    /// `self * v` for a column vector.
    pub fn apply(&self, v: &[QElem]) -> Result<Vec<QElem>> {
        if v.len() != self.cols {
            return Err(Error::Dimension("vector length".into()));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = QElem::zero(self.field);
                for (a, b) in self.row(i).iter().zip(v) {
                    acc += &(a * b);
                }
                acc
            })
            .collect())
    }

    /// `v * self` for a row vector.
    pub fn left_apply(&self, v: &[QElem]) -> Result<Vec<QElem>> {
        if v.len() != self.rows {
            return Err(Error::Dimension("vector length".into()));
        }
        let mut out = vec![QElem::zero(self.field); self.cols];
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o += &(x * self.get(i, j));
            }
        }
        Ok(out)
    }

    /// Reshapes a vector of length `rows * cols` (row-major).
    pub fn from_vec(rows: usize, cols: usize, field: FieldDesc, v: Vec<QElem>) -> Result<Self> {
        ExactMat::new(rows, cols, field, v)
    }

    /// Returns `s` when the matrix is exactly `s * I`.
    pub fn as_scalar(&self) -> Option<QElem> {
        if !self.is_square() {
            return None;
        }
        let s = if self.rows == 0 {
            QElem::zero(self.field)
        } else {
            self.get(0, 0).clone()
        };
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.get(i, j);
                let ok = if i == j { *e == s } else { e.is_zero() };
                if !ok {
                    return None;
                }
            }
        }
        Some(s)
    }
}

impl fmt::Display for ExactMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, e) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Result of [`rank_over_base`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseRank {
    pub rank: usize,
    /// Indices into the input of a maximal Q-independent subset, in input order.
    pub selected: Vec<usize>,
}

/// Rank over `Q` of vectors in `Q[sqrt d]^n`, each viewed as a vector in `Q^{2n}`
/// (rational parts followed by `sqrt d` parts). The independent subset is
/// chosen greedily in input order.
pub fn rank_over_base(vectors: &[Vec<QElem>]) -> Result<BaseRank> {
    let Some(first) = vectors.first() else {
        return Ok(BaseRank {
            rank: 0,
            selected: Vec::new(),
        });
    };
    let n = first.len();
    let field = first.first().map(QElem::field);
    // Echelon rows: (pivot column, row normalized to 1 at the pivot).
    let mut echelon: Vec<(usize, Vec<Rat>)> = Vec::new();
    let mut selected = Vec::new();
    for (idx, v) in vectors.iter().enumerate() {
        if v.len() != n {
            return Err(Error::Dimension("vectors of different lengths".into()));
        }
        if let (Some(f), Some(e)) = (field, v.iter().find(|e| Some(e.field()) != field)) {
            return Err(Error::FieldMismatch {
                left: f,
                right: e.field(),
            });
        }
        let mut w: Vec<Rat> = v
            .iter()
            .map(|e| e.re().clone())
            .chain(v.iter().map(|e| e.im().clone()))
            .collect();
        for (p, row) in &echelon {
            if w[*p].is_zero() {
                continue;
            }
            let f = w[*p].clone();
            for (x, y) in w.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        if let Some(p) = w.iter().position(|x| !x.is_zero()) {
            let inv = w[p].recip();
            for x in w.iter_mut() {
                *x *= &inv;
            }
            echelon.push((p, w));
            selected.push(idx);
        }
    }
    Ok(BaseRank {
        rank: selected.len(),
        selected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn gi() -> FieldDesc {
        FieldDesc::GAUSSIAN
    }

    fn m(rows: &[&[&str]]) -> ExactMat {
        let rows: Vec<Vec<&str>> = rows.iter().map(|r| r.to_vec()).collect();
        ExactMat::parse_rows(gi(), &rows).unwrap()
    }

    fn v(entries: &[&str]) -> Vec<QElem> {
        entries
            .iter()
            .map(|e| QElem::parse(e, gi()).unwrap())
            .collect()
    }

    fn reference_x() -> ExactMat {
        m(&[
            &["1", "0", "0", "1"],
            &["0", "1", "i", "0"],
            &["0", "i", "1", "0"],
            &["i", "0", "0", "-i"],
        ])
    }

    #[test]
    fn identity_product() {
        let a = m(&[&["1", "2", "i"], &["0", "1/2", "3"], &["-i", "4", "5"]]);
        let i3 = ExactMat::identity(3, gi());
        assert_eq!(i3.matmul(&a).unwrap(), a);
        assert_eq!(a.matmul(&i3).unwrap(), a);
    }

    #[test]
    fn diagonal_units() {
        let a = m(&[&["i", "0"], &["0", "-i"]]);
        let b = m(&[&["-i", "0"], &["0", "i"]]);
        assert_eq!(a.matmul(&b).unwrap(), ExactMat::identity(2, gi()));
    }

    #[test]
    fn strassen_first_summand_trace() {
        let i2 = ExactMat::identity(2, gi());
        let p = i2.matmul(&i2).unwrap().matmul(&i2).unwrap();
        assert_eq!(p.trace(), QElem::from_int(2, gi()));
    }

    #[test]
    fn product_shape_errors() {
        let a = ExactMat::zeros(2, 3, gi());
        assert!(matches!(a.matmul(&a), Err(Error::Dimension(_))));
        let other = ExactMat::zeros(3, 2, FieldDesc::new(2).unwrap());
        assert!(matches!(a.matmul(&other), Err(Error::FieldMismatch { .. })));
    }

    #[test]
    fn conjugation() {
        let r = m(&[&["1", "2"], &["1/3", "0"]]);
        assert_eq!(r.conj(), r);
        let x = reference_x();
        let expected = m(&[
            &["1", "0", "0", "1"],
            &["0", "1", "-i", "0"],
            &["0", "-i", "1", "0"],
            &["-i", "0", "0", "i"],
        ]);
        assert_eq!(x.conj(), expected);
    }

    #[test]
    fn inverses() {
        let i3 = ExactMat::identity(3, gi());
        assert_eq!(i3.inverse().unwrap(), i3);
        let d = m(&[&["i", "0"], &["0", "1"]]);
        assert_eq!(d.inverse().unwrap(), m(&[&["-i", "0"], &["0", "1"]]));
        let x = reference_x();
        let xi = x.inverse().unwrap();
        assert_eq!(x.matmul(&xi).unwrap(), ExactMat::identity(4, gi()));
        assert_eq!(xi.matmul(&x).unwrap(), ExactMat::identity(4, gi()));
    }

    #[test]
    fn singular_inverse_reports_rank() {
        let s = m(&[&["1", "i", "0"], &["i", "-1", "0"], &["0", "0", "2"]]);
        match s.inverse() {
            Err(Error::Singular { rank, size }) => assert_eq!((rank, size), (2, 3)),
            other => panic!("{other:?}"),
        }
        assert!(ExactMat::zeros(2, 3, gi()).inverse().is_err());
    }

    #[test]
    fn nullspaces() {
        assert!(ExactMat::identity(4, gi()).nullspace().is_empty());
        let z = ExactMat::zeros(2, 2, gi());
        let ns = z.nullspace();
        assert_eq!(ns, vec![v(&["1", "0"]), v(&["0", "1"])]);

        let a = m(&[&["1", "i", "2"], &["i", "-1", "2i"]]);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for vec in &ns {
            assert!(a.apply(vec).unwrap().iter().all(QElem::is_zero));
        }
        assert_eq!(ns[0], v(&["-i", "1", "0"]));
        assert_eq!(ns[1], v(&["-2", "0", "1"]));
    }

    #[test]
    fn base_rank() {
        let r = rank_over_base(&[v(&["1", "1"]), v(&["2", "2"])]).unwrap();
        assert_eq!(
            r,
            BaseRank {
                rank: 1,
                selected: vec![0]
            }
        );

        let r = rank_over_base(&[v(&["1", "1"]), v(&["i", "-i"])]).unwrap();
        assert_eq!(r.rank, 2);

        let r = rank_over_base(&[
            v(&["1", "0"]),
            v(&["i", "0"]),
            v(&["0", "1"]),
            v(&["0", "i"]),
        ])
        .unwrap();
        assert_eq!(r.rank, 4);

        // Over Q[i], (1, i) and (i, -1) are dependent, but not over Q.
        let r = rank_over_base(&[v(&["1", "i"]), v(&["i", "-1"]), v(&["1+i", "-1+i"])]).unwrap();
        assert_eq!(
            r,
            BaseRank {
                rank: 2,
                selected: vec![0, 1]
            }
        );
    }

    #[test]
    fn scalar_detection() {
        let s = ExactMat::identity(3, gi()).scale(&QElem::from_rat(rat(5), gi()));
        assert_eq!(s.as_scalar(), Some(QElem::from_int(5, gi())));
        assert_eq!(m(&[&["1", "0"], &["0", "2"]]).as_scalar(), None);
        assert_eq!(m(&[&["1", "1"], &["0", "1"]]).as_scalar(), None);
    }

    #[test]
    fn trace_of_product_matches() {
        let a = m(&[&["1", "2i"], &["1/2", "3"]]);
        let b = m(&[&["0", "1"], &["-i", "4"]]);
        assert_eq!(
            a.trace_of_product(&b).unwrap(),
            a.matmul(&b).unwrap().trace()
        );
    }
}
