//! Fixed-point binary reals with configurable precision.
//!
//! A `Dyadic` stores an integer mantissa `m` and represents `m / 2^bits`.
//! All orbit quantities live in [-1, 1] (iterates) or (0, 1] (beta
//! products), so a fixed binary point gives uniform absolute precision
//! `2^-bits` — equivalent to a binary float with at least `bits`
//! significand bits on this domain. Only field operations and floor are
//! needed by the dynamics; logarithms of orbit values are taken in `f64`
//! after conversion, which costs ~1e-16 per series term and is negligible
//! against the truncation tolerances used downstream.
//!
//! Default precision is 128 fractional bits; each continued-fraction step
//! loses about `2 log2 q_n` bits, so 128 bits keeps digits faithful over
//! the horizons the evaluators use before their tolerance cutoffs fire.

use crate::exact::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Default number of fractional bits for float-mode evaluation.
pub const DEFAULT_PRECISION_BITS: u32 = 128;

/// Environment variable overriding the float-mode precision.
pub const PRECISION_ENV_VAR: &str = "WILTON_PRECISION_BITS";

/// Precision floor margin: a value counts as exhausted once its mantissa
/// has fewer than this many significant bits left.
const FLOOR_MARGIN_BITS: u64 = 16;

/// Resolve the working precision from the environment, clamped to a sane
/// range so `2^-bits` stays representable in `f64` conversions.
pub fn precision_bits_from_env() -> u32 {
    match std::env::var(PRECISION_ENV_VAR) {
        Ok(s) => s
            .trim()
            .parse::<u32>()
            .map(|b| b.clamp(64, 512))
            .unwrap_or(DEFAULT_PRECISION_BITS),
        Err(_) => DEFAULT_PRECISION_BITS,
    }
}

/// Fixed-point binary real: `mant / 2^bits`.
#[derive(Clone, PartialEq, Eq)]
pub struct Dyadic {
    mant: BigInt,
    bits: u32,
}

impl Dyadic {
    pub fn zero(bits: u32) -> Self {
        Dyadic {
            mant: BigInt::zero(),
            bits,
        }
    }

    pub fn one(bits: u32) -> Self {
        Dyadic {
            mant: BigInt::from(1) << bits,
            bits,
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn from_bigint(n: &BigInt, bits: u32) -> Self {
        Dyadic {
            mant: n.clone() << bits,
            bits,
        }
    }

    /// Exact embedding of an `f64` (every finite f64 is dyadic; the
    /// mantissa is shifted, rounding to nearest only if the value has
    /// more fractional bits than the target precision).
    pub fn from_f64(x: f64, bits: u32) -> Self {
        assert!(x.is_finite(), "cannot embed non-finite f64");
        if x == 0.0 {
            return Dyadic::zero(bits);
        }
        let (mant, exp) = integer_decode(x);
        let shift = exp + bits as i64;
        let m = BigInt::from(mant);
        let mant = if shift >= 0 {
            m << shift as u64
        } else {
            round_shift_right(&m, (-shift) as u64)
        };
        Dyadic { mant, bits }
    }

    /// Nearest dyadic to an exact rational.
    pub fn from_rational(r: &Rational, bits: u32) -> Self {
        let num = r.numer() << bits;
        let den = r.denom().clone();
        Dyadic {
            mant: div_round_nearest(&num, &den),
            bits,
        }
    }

    pub fn to_f64(&self) -> f64 {
        // Split the mantissa conversion to avoid overflow for mantissas
        // wider than f64 range (1/x intermediates can be large).
        let bits_total = self.mant.bits();
        if bits_total <= 900 {
            self.mant.to_f64().unwrap_or(0.0) * exp2i(-(self.bits as i32))
        } else {
            let drop = (bits_total - 900) as u32;
            let reduced: BigInt = &self.mant >> drop;
            reduced.to_f64().unwrap_or(0.0) * exp2i(drop as i32 - self.bits as i32)
        }
    }

    pub fn to_rational(&self) -> Rational {
        Rational::new(self.mant.clone(), BigInt::from(1) << self.bits)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i8 {
        match self.mant.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mant: self.mant.abs(),
            bits: self.bits,
        }
    }

    pub fn neg(&self) -> Self {
        Dyadic {
            mant: -&self.mant,
            bits: self.bits,
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.bits, rhs.bits);
        Dyadic {
            mant: &self.mant + &rhs.mant,
            bits: self.bits,
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.bits, rhs.bits);
        Dyadic {
            mant: &self.mant - &rhs.mant,
            bits: self.bits,
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.bits, rhs.bits);
        let prod = &self.mant * &rhs.mant;
        Dyadic {
            mant: round_shift_right(&prod, self.bits as u64),
            bits: self.bits,
        }
    }

    /// Multiply by an exact integer.
    pub fn mul_int(&self, n: &BigInt) -> Self {
        Dyadic {
            mant: &self.mant * n,
            bits: self.bits,
        }
    }

    /// Reciprocal, rounded to nearest. Panics on zero (callers test first).
    pub fn recip(&self) -> Self {
        assert!(!self.mant.is_zero(), "reciprocal of zero");
        let num = BigInt::from(1) << (2 * self.bits as u64);
        Dyadic {
            mant: div_round_nearest(&num, &self.mant),
            bits: self.bits,
        }
    }

    /// Floor to an integer (arithmetic shift right rounds toward -inf).
    pub fn floor_int(&self) -> BigInt {
        &self.mant >> self.bits
    }

    pub fn sub_int(&self, n: &BigInt) -> Self {
        Dyadic {
            mant: &self.mant - (n << self.bits),
            bits: self.bits,
        }
    }

    /// True once fewer than `FLOOR_MARGIN_BITS` significant bits remain,
    /// i.e. |x| < 2^-(bits - 16). Orbit generators stop extending traces
    /// past this point.
    pub fn precision_floor(&self) -> bool {
        !self.mant.is_zero() && self.mant.bits() <= FLOOR_MARGIN_BITS
    }

    /// Fractional bits actually carried by the value: the value is a
    /// rational with denominator `2^effective_frac_bits`. An f64 seed
    /// embeds with about 53 of them; identities tied to the seed's own
    /// rationality stop being observable past that scale.
    pub fn effective_frac_bits(&self) -> u32 {
        if self.mant.is_zero() {
            return 0;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0) as u32;
        self.bits.saturating_sub(tz)
    }

    /// The golden number g = (sqrt(5) - 1) / 2 at working precision, via
    /// an exact integer square root.
    pub fn golden_conjugate(bits: u32) -> Self {
        let five = BigInt::from(5u32) << (2 * bits as u64 + 2);
        let root = five.sqrt(); // floor(sqrt(5) * 2^(bits+1))
        let mant = round_shift_right(&(root - (BigInt::from(1) << (bits + 1))), 2);
        Dyadic { mant, bits }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        debug_assert_eq!(self.bits, other.bits);
        self.mant.partial_cmp(&other.mant)
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dyadic({:.17e} @{})", self.to_f64(), self.bits)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.17e}", self.to_f64())
    }
}

/// Shift right with round-to-nearest (ties away from zero).
fn round_shift_right(n: &BigInt, shift: u64) -> BigInt {
    if shift == 0 {
        return n.clone();
    }
    let half = BigInt::from(1) << (shift - 1);
    if n.is_negative() {
        -((-n + half) >> shift)
    } else {
        (n + half) >> shift
    }
}

/// Integer division with round-to-nearest (ties away from zero).
fn div_round_nearest(num: &BigInt, den: &BigInt) -> BigInt {
    let negative = num.is_negative() != den.is_negative();
    let (n, d) = (num.abs(), den.abs());
    let (q, r) = n.div_rem(&d);
    let q = if &r * 2u32 >= d { q + 1u32 } else { q };
    if negative {
        -q
    } else {
        q
    }
}

fn integer_decode(x: f64) -> (i64, i64) {
    let bits = x.to_bits();
    let sign = if bits >> 63 == 0 { 1i64 } else { -1 };
    let exponent = ((bits >> 52) & 0x7ff) as i64;
    let mantissa = if exponent == 0 {
        (bits & 0x000f_ffff_ffff_ffff) << 1
    } else {
        (bits & 0x000f_ffff_ffff_ffff) | 0x0010_0000_0000_0000
    };
    (sign * mantissa as i64, exponent - 1075)
}

fn exp2i(e: i32) -> f64 {
    f64::from_bits(((1023 + e) as u64) << 52)
}
