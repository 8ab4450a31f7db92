//! Seeded random elements and matrices for transforms and property tests.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::exactnum::{FieldDesc, QElem, Rat};
use crate::linalg::ExactMat;
use crate::scheme::{Dims, TransformTriple};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `a + b sqrt(d)` with integers `|a|, |b| <= height`; `b = 0` when `rational`.
pub fn element<R: Rng>(rng: &mut R, field: FieldDesc, height: i64, rational: bool) -> QElem {
    let a = rng.gen_range(-height..=height);
    let b = if rational {
        0
    } else {
        rng.gen_range(-height..=height)
    };
    QElem::new(
        Rat::from_integer(a.into()),
        Rat::from_integer(b.into()),
        field,
    )
}

pub fn matrix<R: Rng>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    field: FieldDesc,
    height: i64,
    rational: bool,
) -> ExactMat {
    let data = (0..rows * cols)
        .map(|_| element(rng, field, height, rational))
        .collect();
    ExactMat::new(rows, cols, field, data).expect("length matches shape")
}

/// Rejection-samples an invertible `n x n` matrix.
pub fn invertible<R: Rng>(
    rng: &mut R,
    n: usize,
    field: FieldDesc,
    height: i64,
    rational: bool,
) -> ExactMat {
    loop {
        let m = matrix(rng, n, n, field, height, rational);
        if m.is_invertible() {
            return m;
        }
    }
}

/// Random invertible `X (m x m)`, `Y (n x n)`, `Z (p x p)`.
pub fn transform<R: Rng>(
    rng: &mut R,
    dims: Dims,
    field: FieldDesc,
    height: i64,
    rational: bool,
) -> TransformTriple {
    let x = invertible(rng, dims.m, field, height, rational);
    let y = invertible(rng, dims.n, field, height, rational);
    let z = invertible(rng, dims.p, field, height, rational);
    TransformTriple::new(x, y, z).expect("sampled invertible")
}
