use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::Scheme;
use crate::exactnum::FieldDesc;

/// Smallest ring among `Z`, `Z[1/L]` and `Q[sqrt d]` holding every entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ring {
    Integers,
    /// `Z[1/L]` where `L` is the lcm of all entry denominators.
    Localized {
        denominator: BigInt,
        factors: Vec<(BigInt, u32)>,
    },
    Quadratic(FieldDesc),
}

impl Ring {
    /// True for `Z` and `Z[1/L]`.
    pub fn is_rational(&self) -> bool {
        !matches!(self, Ring::Quadratic(_))
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integers => write!(f, "ℤ"),
            Ring::Localized { denominator, .. } => write!(f, "ℤ[1/{denominator}]"),
            Ring::Quadratic(field) => write!(f, "{field}"),
        }
    }
}

pub fn detect_ring(s: &Scheme) -> Ring {
    if !s.is_rational() {
        return Ring::Quadratic(s.field());
    }
    let mut l = BigInt::one();
    for t in s.triples() {
        for mat in [&t.o, &t.p, &t.q] {
            for e in mat.entries() {
                l = l.lcm(e.re().denom());
            }
        }
    }
    if l.is_one() {
        Ring::Integers
    } else {
        let factors = factorize(&l);
        Ring::Localized {
            denominator: l,
            factors,
        }
    }
}

/// Trial division; denominators of scheme entries are small.
fn factorize(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.clone();
    let mut out = Vec::new();
    let mut p = BigInt::from(2u32);
    while &p * &p <= n {
        let mut k = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            k += 1;
        }
        if k > 0 {
            out.push((p.clone(), k));
        }
        p += 1u32;
    }
    if !n.is_one() {
        out.push((n, 1));
    }
    out
}
