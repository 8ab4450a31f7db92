//! Exact arithmetic over the rationals and over a quadratic extension `Q[sqrt d]`.
//!
//! Every tensor entry is a [`QElem`] `a + b*sqrt(d)`. The field descriptor is
//! carried by value (it is a single machine integer) so that mixing elements
//! from different extensions is caught instead of silently coerced.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Exact square root of a rational, if it is the square of a rational.
pub fn rat_sqrt(x: &Rat) -> Option<Rat> {
    if x.is_negative() {
        return None;
    }
    let n = int_sqrt(x.numer())?;
    let d = int_sqrt(x.denom())?;
    Some(Rat::new(n, d))
}

pub fn int_sqrt(x: &BigInt) -> Option<BigInt> {
    if x.is_negative() {
        return None;
    }
    let r = x.sqrt();
    (&r * &r == *x).then_some(r)
}

/// Parses `-?digits(/digits)?` (a leading `+` is tolerated).
pub fn parse_rat(text: &str) -> Result<Rat> {
    let err = |reason: &str| Error::Entry {
        text: text.to_string(),
        reason: reason.to_string(),
    };
    let t = text.trim();
    let (neg, body) = match t.as_bytes().first() {
        Some(b'-') => (true, &t[1..]),
        Some(b'+') => (false, &t[1..]),
        _ => (false, t),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (body, None),
    };
    let digits = |s: &str| -> Result<BigInt> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err("expected digits"));
        }
        Ok(s.parse::<BigInt>().expect("digit string"))
    };
    let n = digits(num)?;
    let d = match den {
        Some(d) => digits(d)?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(err("zero denominator"));
    }
    let r = Rat::new(n, d);
    Ok(if neg { -r } else { r })
}

/// The `d` of `Q[sqrt d]`: squarefree, not 0 or 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldDesc(i64);

impl FieldDesc {
    pub const GAUSSIAN: FieldDesc = FieldDesc(-1);

    pub fn new(d: i64) -> Result<Self> {
        if d == 0 || d == 1 || !is_squarefree(d.unsigned_abs()) {
            return Err(Error::InvalidField(d));
        }
        Ok(FieldDesc(d))
    }

    pub fn d(self) -> i64 {
        self.0
    }

    /// Symbol used for `sqrt d` in entry strings: `i` for `d = -1`, `s` otherwise.
    pub fn symbol(self) -> char {
        if self.0 == -1 {
            'i'
        } else {
            's'
        }
    }

    pub(crate) fn d_rat(self) -> Rat {
        rat(self.0)
    }
}

impl fmt::Display for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == -1 {
            write!(f, "ℚ[i]")
        } else {
            write!(f, "ℚ[√{}]", self.0)
        }
    }
}

fn is_squarefree(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut n = n;
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// An element `a + b*sqrt(d)` of `Q[sqrt d]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QElem {
    a: Rat,
    b: Rat,
    field: FieldDesc,
}

impl QElem {
    pub fn new(a: Rat, b: Rat, field: FieldDesc) -> Self {
        QElem { a, b, field }
    }

    pub fn from_rat(a: Rat, field: FieldDesc) -> Self {
        QElem::new(a, Rat::zero(), field)
    }

    pub fn from_int(a: i64, field: FieldDesc) -> Self {
        QElem::from_rat(rat(a), field)
    }

    pub fn zero(field: FieldDesc) -> Self {
        QElem::from_rat(Rat::zero(), field)
    }

    pub fn one(field: FieldDesc) -> Self {
        QElem::from_rat(Rat::one(), field)
    }

    /// `sqrt(d)` itself.
    pub fn sqrt_d(field: FieldDesc) -> Self {
        QElem::new(Rat::zero(), Rat::one(), field)
    }

    pub fn re(&self) -> &Rat {
        &self.a
    }

    pub fn im(&self) -> &Rat {
        &self.b
    }

    pub fn field(&self) -> FieldDesc {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    /// True when the `sqrt d` part vanishes.
    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        self.is_rational().then_some(&self.a)
    }

    pub fn is_integer(&self) -> bool {
        self.is_rational() && self.a.is_integer()
    }

    pub fn conj(&self) -> QElem {
        QElem::new(self.a.clone(), -&self.b, self.field)
    }

    /// `a^2 - d*b^2`, i.e. `x * conj(x)` as a rational.
    pub fn norm(&self) -> Rat {
        &self.a * &self.a - self.field.d_rat() * &self.b * &self.b
    }

    pub fn scale(&self, r: &Rat) -> QElem {
        QElem::new(&self.a * r, &self.b * r, self.field)
    }

    fn check(&self, other: &QElem) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field,
                right: other.field,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &QElem) -> Result<QElem> {
        self.check(other)?;
        Ok(QElem::new(
            &self.a + &other.a,
            &self.b + &other.b,
            self.field,
        ))
    }

    pub fn checked_sub(&self, other: &QElem) -> Result<QElem> {
        self.check(other)?;
        Ok(QElem::new(
            &self.a - &other.a,
            &self.b - &other.b,
            self.field,
        ))
    }

    pub fn checked_mul(&self, other: &QElem) -> Result<QElem> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn checked_div(&self, other: &QElem) -> Result<QElem> {
        self.check(other)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }

    fn mul_unchecked(&self, other: &QElem) -> QElem {
        let d = self.field.d_rat();
        // Skip the cross terms when either side is rational; this is the common case.
        if self.b.is_zero() {
            return QElem::new(&self.a * &other.a, &self.a * &other.b, self.field);
        }
        if other.b.is_zero() {
            return QElem::new(&self.a * &other.a, &self.b * &other.a, self.field);
        }
        QElem::new(
            &self.a * &other.a + d * &self.b * &other.b,
            &self.a * &other.b + &other.a * &self.b,
            self.field,
        )
    }

    /// `conj(x) / norm(x)`.
    pub fn inv(&self) -> Result<QElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        assert!(
            !n.is_zero(),
            "zero norm for a nonzero element of {}",
            self.field
        );
        let inv_n = n.recip();
        Ok(self.conj().scale(&inv_n))
    }

    /// Parses an entry in the scheme-file grammar:
    /// `a`, `b*s`, `a+b*s`, `a-b*s`, with `s` (or `i` when `d = -1`) denoting `sqrt d`.
    pub fn parse(text: &str, field: FieldDesc) -> Result<QElem> {
        let err = |reason: &str| Error::Entry {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let mut t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(err("empty entry"));
        }
        if t.contains('i') {
            if field.d() != -1 {
                return Err(err("`i` is only accepted when d = -1"));
            }
            t = t.replace('i', "s");
        }
        let Some(head) = t.strip_suffix('s') else {
            if t.contains('s') {
                return Err(err("the radical symbol must end the entry"));
            }
            return Ok(QElem::from_rat(parse_rat(&t)?, field));
        };
        if head.contains('s') {
            return Err(err("radical symbol appears twice"));
        }
        let head = head.strip_suffix('*').unwrap_or(head);
        let split = head
            .char_indices()
            .skip(1)
            .filter(|(_, c)| *c == '+' || *c == '-')
            .map(|(i, _)| i)
            .last();
        let (a_text, b_text) = match split {
            Some(k) => (&head[..k], &head[k..]),
            None => ("", head),
        };
        let a = if a_text.is_empty() {
            Rat::zero()
        } else {
            parse_rat(a_text)?
        };
        let b = match b_text {
            "" | "+" => Rat::one(),
            "-" => -Rat::one(),
            other => parse_rat(other)?,
        };
        Ok(QElem::new(a, b, field))
    }
}

impl fmt::Display for QElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = self.field.symbol();
        let radical = |b: &Rat| -> String {
            if b.is_one() {
                sym.to_string()
            } else {
                format!("{b}*{sym}")
            }
        };
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if self.a.is_zero() {
            if self.b.is_negative() {
                return write!(f, "-{}", radical(&-&self.b));
            }
            return write!(f, "{}", radical(&self.b));
        }
        let sign = if self.b.is_negative() { '-' } else { '+' };
        write!(f, "{}{}{}", self.a, sign, radical(&self.b.abs()))
    }
}

// Operator impls assume a shared field and panic otherwise; callers that take
// untrusted input go through the `checked_*` methods or validated matrices.

impl Add for &QElem {
    type Output = QElem;
    fn add(self, rhs: &QElem) -> QElem {
        self.checked_add(rhs)
            .expect("field mismatch in QElem addition")
    }
}

impl Sub for &QElem {
    type Output = QElem;
    fn sub(self, rhs: &QElem) -> QElem {
        self.checked_sub(rhs)
            .expect("field mismatch in QElem subtraction")
    }
}

impl Mul for &QElem {
    type Output = QElem;
    fn mul(self, rhs: &QElem) -> QElem {
        self.checked_mul(rhs)
            .expect("field mismatch in QElem multiplication")
    }
}

impl Neg for &QElem {
    type Output = QElem;
    fn neg(self) -> QElem {
        QElem::new(-&self.a, -&self.b, self.field)
    }
}

impl Neg for QElem {
    type Output = QElem;
    fn neg(self) -> QElem {
        QElem::new(-self.a, -self.b, self.field)
    }
}

impl AddAssign<&QElem> for QElem {
    fn add_assign(&mut self, rhs: &QElem) {
        assert_eq!(self.field, rhs.field, "field mismatch in QElem addition");
        self.a += &rhs.a;
        self.b += &rhs.b;
    }
}

impl SubAssign<&QElem> for QElem {
    fn sub_assign(&mut self, rhs: &QElem) {
        assert_eq!(self.field, rhs.field, "field mismatch in QElem subtraction");
        self.a -= &rhs.a;
        self.b -= &rhs.b;
    }
}
