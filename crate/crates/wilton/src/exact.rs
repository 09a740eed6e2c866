//! Exact arithmetic substrate: arbitrary-precision rationals, 2x2 integer
//! matrices acting as Mobius transformations, and regular continued-fraction
//! expansions of rationals in both parities.
//!
//! Everything here is immutable after construction and exact; floating point
//! never enters. Mobius poles are represented as a projective point at
//! infinity rather than signalled as errors.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

/// Arbitrary-precision rational. Always stored reduced with positive
/// denominator (the representation `num_rational` maintains).
pub type Rational = BigRational;

/// Shorthand for small rationals in tests and examples.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parse a rational from a `p/q` or plain integer string.
pub fn parse_rational(s: &str) -> Result<Rational, ExactError> {
    let parse_int = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| ExactError::Parse(s.to_string()))
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let den = parse_int(q)?;
            if den.is_zero() {
                return Err(ExactError::Parse(s.to_string()));
            }
            Ok(Rational::new(parse_int(p)?, den))
        }
        None => Ok(Rational::from(parse_int(s)?)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExactError {
    /// Input outside the operation's domain.
    Domain(String),
    /// Unparseable rational literal.
    Parse(String),
}

impl fmt::Display for ExactError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactError::Domain(msg) => write!(f, "domain error: {msg}"),
            ExactError::Parse(s) => write!(f, "cannot parse rational from {s:?}"),
        }
    }
}

impl std::error::Error for ExactError {}

/// A point of the projective line: either a finite rational or infinity.
/// Mobius transformations act on this type without partiality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtendedRational {
    Finite(Rational),
    Infinity,
}

impl ExtendedRational {
    pub fn finite(r: Rational) -> Self {
        ExtendedRational::Finite(r)
    }

    pub fn as_finite(&self) -> Option<&Rational> {
        match self {
            ExtendedRational::Finite(r) => Some(r),
            ExtendedRational::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedRational::Infinity)
    }
}

impl From<Rational> for ExtendedRational {
    fn from(r: Rational) -> Self {
        ExtendedRational::Finite(r)
    }
}

impl fmt::Display for ExtendedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedRational::Finite(r) => write!(f, "{r}"),
            ExtendedRational::Infinity => write!(f, "inf"),
        }
    }
}

/// 2x2 integer matrix `[[a, b], [c, d]]` acting on the projective line by
/// `x -> (a x + b) / (c x + d)`. Products of continued-fraction digit
/// matrices always have determinant +1 or -1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat2 {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl Mat2 {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2 {
            a: BigInt::from(a),
            b: BigInt::from(b),
            c: BigInt::from(c),
            d: BigInt::from(d),
        }
    }

    pub fn identity() -> Self {
        Mat2::new(1, 0, 0, 1)
    }

    /// Digit matrix `[[0, eps], [1, c]]` of one continued-fraction step.
    pub fn digit(eps: i8, c: &BigInt) -> Self {
        Mat2 {
            a: BigInt::zero(),
            b: BigInt::from(eps),
            c: BigInt::one(),
            d: c.clone(),
        }
    }

    /// `x -> x + 1`.
    pub fn shift_up() -> Self {
        Mat2::new(1, 1, 0, 1)
    }

    /// `x -> x - 1`.
    pub fn shift_down() -> Self {
        Mat2::new(1, -1, 0, 1)
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        Mat2 {
            a: &self.a * &rhs.a + &self.b * &rhs.c,
            b: &self.a * &rhs.b + &self.b * &rhs.d,
            c: &self.c * &rhs.a + &self.d * &rhs.c,
            d: &self.c * &rhs.b + &self.d * &rhs.d,
        }
    }

    /// Exact inverse, defined only for unimodular matrices (det = +-1),
    /// which is the only case arising from digit-matrix products.
    pub fn inverse(&self) -> Option<Mat2> {
        let det = self.det();
        if det == BigInt::one() {
            Some(Mat2 {
                a: self.d.clone(),
                b: -&self.b,
                c: -&self.c,
                d: self.a.clone(),
            })
        } else if det == -BigInt::one() {
            Some(Mat2 {
                a: -&self.d,
                b: self.b.clone(),
                c: self.c.clone(),
                d: -&self.a,
            })
        } else {
            None
        }
    }

    /// Apply the transformation to an extended rational. A vanishing
    /// denominator yields the projective point at infinity; an infinite
    /// input maps to `a/c` (or infinity when `c = 0`).
    pub fn apply(&self, x: &ExtendedRational) -> ExtendedRational {
        match x {
            ExtendedRational::Infinity => {
                if self.c.is_zero() {
                    ExtendedRational::Infinity
                } else {
                    ExtendedRational::Finite(Rational::new(self.a.clone(), self.c.clone()))
                }
            }
            ExtendedRational::Finite(r) => {
                let den = Rational::from(self.c.clone()) * r + Rational::from(self.d.clone());
                if den.is_zero() {
                    ExtendedRational::Infinity
                } else {
                    let num = Rational::from(self.a.clone()) * r + Rational::from(self.b.clone());
                    ExtendedRational::Finite(num / den)
                }
            }
        }
    }

    /// Apply to a finite rational, returning `None` on a pole.
    pub fn apply_rational(&self, x: &Rational) -> Option<Rational> {
        match self.apply(&ExtendedRational::Finite(x.clone())) {
            ExtendedRational::Finite(r) => Some(r),
            ExtendedRational::Infinity => None,
        }
    }

    /// Image of 0, as a rational (the order-n convergent of a digit product).
    pub fn apply_zero(&self) -> ExtendedRational {
        if self.d.is_zero() {
            ExtendedRational::Infinity
        } else {
            ExtendedRational::Finite(Rational::new(self.b.clone(), self.d.clone()))
        }
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// Regular continued-fraction expansion `[0; a_1, ..., a_l]` of a rational
/// in (0, 1). The canonical form has last digit >= 2; the alternate parity
/// is obtained by the tail rule `[..., a_l] = [..., a_l - 1, 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RcfExpansion {
    pub digits: Vec<BigInt>,
}

impl RcfExpansion {
    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn is_even_length(&self) -> bool {
        self.digits.len().is_multiple_of(2)
    }

    /// Evaluate the finite continued fraction back to an exact rational.
    pub fn value(&self) -> Rational {
        let mut acc = Rational::zero();
        for a in self.digits.iter().rev() {
            acc = (Rational::from(a.clone()) + acc).recip();
        }
        acc
    }
}

impl fmt::Display for RcfExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[0;")?;
        for (i, a) in self.digits.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "]")
    }
}

/// Both regular continued-fraction expansions of a rational in (0, 1):
/// exactly one of the two has even length.
pub fn rcf_expansions(r: &Rational) -> Result<(RcfExpansion, RcfExpansion), ExactError> {
    if !(r > &Rational::zero() && r < &Rational::one()) {
        return Err(ExactError::Domain(format!(
            "rcf_expansions requires r in (0,1), got {r}"
        )));
    }
    // Euclidean algorithm; the canonical expansion it produces ends with a
    // digit >= 2 for every r in (0, 1).
    let mut digits: Vec<BigInt> = Vec::new();
    let mut x = r.clone();
    while !x.is_zero() {
        let inv = x.recip();
        let a = inv.floor().to_integer();
        x = inv - Rational::from(a.clone());
        digits.push(a);
    }
    debug_assert!(digits
        .last()
        .map(|a| a >= &BigInt::from(2))
        .unwrap_or(false));

    let mut alternate = digits.clone();
    let last = alternate.last_mut().expect("nonempty expansion");
    *last -= 1;
    alternate.push(BigInt::one());

    let canonical = RcfExpansion { digits };
    let alternate = RcfExpansion { digits: alternate };
    if canonical.is_even_length() {
        Ok((canonical, alternate))
    } else {
        Ok((alternate, canonical))
    }
}
