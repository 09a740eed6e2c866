//! Folded and unfolded alpha-continued-fraction dynamics.
//!
//! The folded map acts on [0, max(alpha, 1-alpha)] by
//! `x -> |1/x - [1/x + 1 - alpha]|`; the unfolded map acts on
//! [alpha-1, alpha) keeping signs. Orbits carry digits, convergents from
//! the matrix recurrence, and the running product of iterates (the beta
//! weights of the Wilton series). Everything is generic over a [`Scalar`]:
//! exact rationals for rational seeds and parameters, fixed-point dyadics
//! for float mode.
//!
//! Exact-mode traces assert their arithmetic identities exactly; float
//! mode asserts them within tolerance while the working precision can
//! still see them, and caps the trace once the beta product under-runs
//! the precision floor.

use crate::dyadic::Dyadic;
use crate::exact::{Mat2, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// Golden number g = (sqrt(5) - 1) / 2.
pub const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Relative slack for float-mode inequality checks.
const FLOAT_CHECK_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub enum DynamicsError {
    Domain(String),
    /// A step was requested at the fixed point 0 (orbit termination).
    AtZero,
    /// An arithmetic identity failed on a generated orbit.
    InvariantViolation(String),
}

impl fmt::Display for DynamicsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynamicsError::Domain(msg) => write!(f, "domain error: {msg}"),
            DynamicsError::AtZero => write!(f, "step at the fixed point 0"),
            DynamicsError::InvariantViolation(msg) => write!(f, "orbit invariant violated: {msg}"),
        }
    }
}

impl std::error::Error for DynamicsError {}

/// Number type an orbit can run over. `Rational` is exact; `Dyadic` is
/// fixed-point with a precision floor.
pub trait Scalar: Clone + PartialEq + PartialOrd + fmt::Debug {
    const EXACT: bool;

    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_int(n: &BigInt, proto: &Self) -> Self;
    fn from_rational(r: &Rational, proto: &Self) -> Self;
    fn is_zero(&self) -> bool;
    fn signum(&self) -> i8;
    fn abs(&self) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    /// Reciprocal; caller guarantees the value is nonzero.
    fn recip(&self) -> Self;
    fn floor_int(&self) -> BigInt;
    fn sub_int(&self, n: &BigInt) -> Self;
    fn to_f64(&self) -> f64;
    /// Equality up to `tol` for inexact scalars, exact equality otherwise.
    fn eq_within(&self, rhs: &Self, tol: f64) -> bool;
    /// True when the value is too small for the working precision.
    fn precision_floor(&self) -> bool;
    /// Fractional bits of the representation, `None` for exact scalars.
    fn precision_bits(&self) -> Option<u32>;
    /// Dyadic denominator bits actually carried (seed rationality scale).
    fn effective_frac_bits(&self) -> Option<u32>;
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn from_int(n: &BigInt, _proto: &Self) -> Self {
        Rational::from(n.clone())
    }
    fn from_rational(r: &Rational, _proto: &Self) -> Self {
        r.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn signum(&self) -> i8 {
        if Zero::is_zero(self) {
            0
        } else if self.is_positive() {
            1
        } else {
            -1
        }
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn recip(&self) -> Self {
        num_rational::Ratio::recip(self)
    }
    fn floor_int(&self) -> BigInt {
        self.floor().to_integer()
    }
    fn sub_int(&self, n: &BigInt) -> Self {
        self - Rational::from(n.clone())
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn eq_within(&self, rhs: &Self, _tol: f64) -> bool {
        self == rhs
    }
    fn precision_floor(&self) -> bool {
        false
    }
    fn precision_bits(&self) -> Option<u32> {
        None
    }
    fn effective_frac_bits(&self) -> Option<u32> {
        None
    }
}

impl Scalar for Dyadic {
    const EXACT: bool = false;

    fn zero_like(&self) -> Self {
        Dyadic::zero(self.bits())
    }
    fn one_like(&self) -> Self {
        Dyadic::one(self.bits())
    }
    fn from_int(n: &BigInt, proto: &Self) -> Self {
        Dyadic::from_bigint(n, proto.bits())
    }
    fn from_rational(r: &Rational, proto: &Self) -> Self {
        Dyadic::from_rational(r, proto.bits())
    }
    fn is_zero(&self) -> bool {
        Dyadic::is_zero(self)
    }
    fn signum(&self) -> i8 {
        Dyadic::signum(self)
    }
    fn abs(&self) -> Self {
        Dyadic::abs(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        Dyadic::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Dyadic::sub(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Dyadic::mul(self, rhs)
    }
    fn recip(&self) -> Self {
        Dyadic::recip(self)
    }
    fn floor_int(&self) -> BigInt {
        Dyadic::floor_int(self)
    }
    fn sub_int(&self, n: &BigInt) -> Self {
        Dyadic::sub_int(self, n)
    }
    fn to_f64(&self) -> f64 {
        Dyadic::to_f64(self)
    }
    fn eq_within(&self, rhs: &Self, tol: f64) -> bool {
        self.sub(rhs).to_f64().abs() <= tol
    }
    fn precision_floor(&self) -> bool {
        Dyadic::precision_floor(self)
    }
    fn precision_bits(&self) -> Option<u32> {
        Some(self.bits())
    }
    fn effective_frac_bits(&self) -> Option<u32> {
        Some(Dyadic::effective_frac_bits(self))
    }
}

/// The parameter alpha together with the derived quantities every step
/// needs: alpha-bar = max(alpha, 1 - alpha) and 1 - alpha.
#[derive(Debug, Clone)]
pub struct AlphaParam<S: Scalar> {
    pub value: S,
    pub alpha_bar: S,
    pub one_minus_alpha: S,
}

impl<S: Scalar> AlphaParam<S> {
    pub fn new(value: S) -> Result<Self, DynamicsError> {
        let one = value.one_like();
        let zero = value.zero_like();
        if !(value > zero && value <= one) {
            return Err(DynamicsError::Domain(format!(
                "alpha must lie in (0, 1], got {value:?}"
            )));
        }
        let one_minus_alpha = one.sub(&value);
        let alpha_bar = if one_minus_alpha > value {
            one_minus_alpha.clone()
        } else {
            value.clone()
        };
        Ok(AlphaParam {
            value,
            alpha_bar,
            one_minus_alpha,
        })
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }
}

impl AlphaParam<Rational> {
    pub fn from_rational(value: Rational) -> Result<Self, DynamicsError> {
        AlphaParam::new(value)
    }
}

impl AlphaParam<Dyadic> {
    pub fn from_f64(alpha: f64, bits: u32) -> Result<Self, DynamicsError> {
        AlphaParam::new(Dyadic::from_f64(alpha, bits))
    }

    pub fn from_exact(alpha: &Rational, bits: u32) -> Result<Self, DynamicsError> {
        AlphaParam::new(Dyadic::from_rational(alpha, bits))
    }
}

/// One continued-fraction digit: partial quotient and sign. The sign is 0
/// only on the digit that lands exactly on 0 (orbit termination).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digit {
    pub a: BigInt,
    pub eps: i8,
}

/// One step of a folded orbit: iterate, digit, convergent, beta product.
#[derive(Debug, Clone)]
pub struct OrbitStep<S: Scalar> {
    pub index: usize,
    pub x: S,
    pub digit: Digit,
    pub p: BigInt,
    pub q: BigInt,
    pub beta: S,
    pub log_q: f64,
}

/// A folded orbit with full bookkeeping. `steps[0]` holds the initial
/// reduction of the seed into [0, alpha-bar].
#[derive(Debug, Clone)]
pub struct OrbitTrace<S: Scalar> {
    pub alpha: AlphaParam<S>,
    pub steps: Vec<OrbitStep<S>>,
    pub terminated_at_zero: Option<usize>,
    pub precision_capped: bool,
}

impl<S: Scalar> OrbitTrace<S> {
    /// beta_{j-1}, with beta_{-1} = 1.
    pub fn beta_before(&self, j: usize) -> S {
        if j == 0 {
            self.steps[0].x.one_like()
        } else {
            self.steps[j - 1].beta.clone()
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Reduce an arbitrary real seed to `x0 = |x - [x + 1 - alpha_bar]|` in
/// [0, alpha-bar], returning the integer part and the sign it absorbed.
pub fn reduce_initial<S: Scalar>(x: &S, alpha: &AlphaParam<S>) -> (S, BigInt, i8) {
    let one = x.one_like();
    let a0 = x.add(&one).sub(&alpha.alpha_bar).floor_int();
    let shifted = x.sub_int(&a0);
    (shifted.abs(), a0, shifted.signum())
}

/// One folded step on (0, alpha-bar]: returns the next iterate and the
/// digit `(a, eps)` with `a = [1/x + 1 - alpha]`, `eps = sign(1/x - a)`.
pub fn folded_step<S: Scalar>(x: &S, alpha: &AlphaParam<S>) -> Result<(S, Digit), DynamicsError> {
    if x.is_zero() {
        return Err(DynamicsError::AtZero);
    }
    if x.signum() < 0 || x > &alpha.alpha_bar {
        return Err(DynamicsError::Domain(format!(
            "folded map needs x in (0, {:?}], got {x:?}",
            alpha.alpha_bar
        )));
    }
    let t = x.recip();
    let a = t.add(&alpha.one_minus_alpha).floor_int();
    debug_assert!(a >= BigInt::one());
    let diff = t.sub_int(&a);
    Ok((
        diff.abs(),
        Digit {
            a,
            eps: diff.signum(),
        },
    ))
}

/// One unfolded step on [alpha-1, alpha] minus 0. The right endpoint is
/// accepted so that the orbit of the parameter itself can be generated,
/// which is what matching detection iterates.
pub fn unfolded_step<S: Scalar>(x: &S, alpha: &AlphaParam<S>) -> Result<(S, Digit), DynamicsError> {
    if x.is_zero() {
        return Err(DynamicsError::AtZero);
    }
    let lower = alpha.value.sub(&alpha.value.one_like());
    if x < &lower || x > &alpha.value {
        return Err(DynamicsError::Domain(format!(
            "unfolded map needs x in [{lower:?}, {:?}], got {x:?}",
            alpha.value
        )));
    }
    let eps = x.signum();
    let t = x.abs().recip(); // sign(x)/x == 1/|x|
    let c = t.add(&alpha.one_minus_alpha).floor_int();
    debug_assert!(c >= BigInt::one());
    Ok((t.sub_int(&c), Digit { a: c, eps }))
}

/// Generate a folded orbit of at most `max_steps` map applications,
/// carrying digits, convergents, beta products and log q. Arithmetic
/// identities are checked on every step before the trace is returned.
pub fn orbit<S: Scalar>(
    x: &S,
    alpha: &AlphaParam<S>,
    max_steps: usize,
) -> Result<OrbitTrace<S>, DynamicsError> {
    let (x0, a0, eps0) = reduce_initial(x, alpha);
    let mut steps: Vec<OrbitStep<S>> = Vec::with_capacity(max_steps.min(1024) + 1);
    let beta0 = x0.clone();
    steps.push(OrbitStep {
        index: 0,
        x: x0,
        digit: Digit {
            a: a0.clone(),
            eps: eps0,
        },
        p: a0,
        q: BigInt::one(),
        beta: beta0,
        log_q: 0.0,
    });

    let mut trace = OrbitTrace {
        alpha: alpha.clone(),
        steps,
        terminated_at_zero: None,
        precision_capped: false,
    };
    if trace.steps[0].x.is_zero() {
        trace.terminated_at_zero = Some(0);
        return Ok(trace);
    }

    // p_{-1} = 1, q_{-1} = 0; r_n = q_{n-1}/q_n for the log-q recurrence.
    let mut p_prev2 = BigInt::one();
    let mut q_prev2 = BigInt::zero();
    let mut r_prev = 0.0f64;

    for n in 1..=max_steps {
        let (prev_x, prev_eps, prev_beta, prev_p, prev_q, prev_log_q) = {
            let last = trace.steps.last().expect("nonempty");
            (
                last.x.clone(),
                last.digit.eps,
                last.beta.clone(),
                last.p.clone(),
                last.q.clone(),
                last.log_q,
            )
        };
        if prev_x.is_zero() {
            break;
        }
        let (x_n, digit) = folded_step(&prev_x, alpha)?;
        let eps_prev = BigInt::from(prev_eps);
        let p_n = &digit.a * &prev_p + &eps_prev * &p_prev2;
        let q_n = &digit.a * &prev_q + &eps_prev * &q_prev2;
        let beta_n = prev_beta.mul(&x_n);
        let ratio_term = digit.a.to_f64().unwrap_or(f64::INFINITY) + prev_eps as f64 * r_prev;
        let log_q_n = prev_log_q + ratio_term.ln();
        r_prev = 1.0 / ratio_term;
        p_prev2 = prev_p;
        q_prev2 = prev_q;

        let capped = beta_n.precision_floor() || x_n.precision_floor();
        let zero_here = x_n.is_zero();
        trace.steps.push(OrbitStep {
            index: n,
            x: x_n,
            digit,
            p: p_n,
            q: q_n,
            beta: beta_n,
            log_q: log_q_n,
        });
        if zero_here {
            trace.terminated_at_zero = Some(n);
            break;
        }
        if capped {
            trace.precision_capped = true;
            break;
        }
    }

    validate_orbit(&trace, x)?;
    Ok(trace)
}

/// Check the determinant identity, the beta identity, the monotonicity of
/// the denominators, the contraction bounds, and the beta*q window on a
/// generated trace. Exact scalars are checked exactly.
pub fn validate_orbit<S: Scalar>(trace: &OrbitTrace<S>, x: &S) -> Result<(), DynamicsError> {
    let alpha = &trace.alpha;
    let alpha_f = alpha.value.to_f64();
    let alpha_bar_f = alpha.alpha_bar.to_f64();
    let rho = contraction_rate(alpha_f)?;
    let fail = |msg: String| Err(DynamicsError::InvariantViolation(msg));

    let mut eps_prod = 1i8; // eps_0 ... eps_{n-1}
    for n in 1..trace.steps.len() {
        let prev = &trace.steps[n - 1];
        let cur = &trace.steps[n];
        if prev.digit.eps == 0 {
            return fail(format!("interior zero sign at step {}", n - 1));
        }
        eps_prod *= prev.digit.eps;

        // det(p_{n-1}, p_n; q_{n-1}, q_n) = (-1)^n eps_0...eps_{n-1}
        let det = &prev.p * &cur.q - &cur.p * &prev.q;
        let expected = if n % 2 == 0 {
            BigInt::from(eps_prod)
        } else {
            BigInt::from(-eps_prod)
        };
        if det != expected {
            return fail(format!(
                "determinant identity at step {n}: {det} != {expected}"
            ));
        }

        // q_0 = 1 <= q_1; strictly increasing from n = 2 on.
        if n == 1 {
            if cur.q < prev.q {
                return fail(format!("q_1 = {} < q_0", cur.q));
            }
        } else if cur.q <= prev.q {
            return fail(format!("q_{n} = {} not above q_{}", cur.q, n - 1));
        }

        // beta_n = |q_n x - p_n|
        if S::EXACT {
            let qx = x.mul(&S::from_int(&cur.q, x));
            let resid = qx.sub_int(&cur.p).abs();
            if resid != cur.beta {
                return fail(format!("beta identity at step {n}"));
            }
        } else if let Some(bits) = x.precision_bits() {
            // Only verifiable while q_n^2 fits inside the working precision
            // and q_n stays below the seed's own rationality scale (an f64
            // seed is a dyadic rational whose true expansion terminates).
            let seed_bits = x.effective_frac_bits().unwrap_or(0) as u64;
            if 2 * cur.q.bits() + 32 <= bits as u64 && cur.q.bits() + 16 <= seed_bits {
                let beta_f = cur.beta.to_f64();
                let qx = x.mul(&S::from_int(&cur.q, x));
                let resid = qx.sub_int(&cur.p).abs().to_f64();
                if (resid - beta_f).abs() > 1e-10 * beta_f.max(1e-300) {
                    return fail(format!(
                        "beta identity at step {n}: |qx-p| = {resid:e}, beta = {beta_f:e}"
                    ));
                }
            }
        }

        // Contraction bounds: beta_n <= alpha_bar rho^n, 1/q_{n+1} < (1+alpha) alpha_bar rho^n.
        let bound = alpha_bar_f * rho.powi(n as i32);
        if cur.beta.to_f64() > bound * (1.0 + FLOAT_CHECK_SLACK) + 1e-300 {
            return fail(format!(
                "beta bound at step {n}: {} > {bound:e}",
                cur.beta.to_f64()
            ));
        }
        if n >= 2 {
            let q_bound = ((1.0 + alpha_f) * alpha_bar_f * rho.powi(n as i32 - 1)).ln();
            if -cur.log_q > q_bound + FLOAT_CHECK_SLACK {
                return fail(format!("1/q bound at step {n}"));
            }
        }

        // Window 1/(1+alpha) < beta_{n-1} q_n < 1/alpha whenever x_n != 0.
        if !cur.x.is_zero() && !(trace.precision_capped && n + 1 == trace.steps.len()) {
            let log_bq = prev.beta.to_f64().ln() + cur.log_q;
            let lo = -(1.0 + alpha_f).ln();
            let hi = -alpha_f.ln();
            if log_bq < lo - FLOAT_CHECK_SLACK || log_bq > hi + FLOAT_CHECK_SLACK {
                return fail(format!(
                    "beta*q window at step {n}: log = {log_bq}, window = ({lo}, {hi})"
                ));
            }
        }
    }
    Ok(())
}

/// One step of an unfolded orbit, with the cumulative digit-matrix product.
#[derive(Debug, Clone)]
pub struct UnfoldedStep<S: Scalar> {
    pub index: usize,
    pub x: S,
    pub digit: Digit,
    pub matrix: Mat2,
}

/// Unfolded orbit of a point of [alpha-1, alpha]. `matrix` at step n is
/// the product of the first n digit matrices, whose columns hold the
/// convergents of the expansion.
#[derive(Debug, Clone)]
pub struct UnfoldedTrace<S: Scalar> {
    pub x0: S,
    pub steps: Vec<UnfoldedStep<S>>,
    pub terminated_at_zero: Option<usize>,
    pub precision_capped: bool,
}

impl<S: Scalar> UnfoldedTrace<S> {
    /// M_{alpha, x, n}; the empty product is the identity.
    pub fn matrix(&self, n: usize) -> Mat2 {
        if n == 0 {
            Mat2::identity()
        } else {
            self.steps[n - 1].matrix.clone()
        }
    }

    /// T^n(x), with T(0) = 0 after termination.
    pub fn iterate(&self, n: usize) -> S {
        if n == 0 {
            self.x0.clone()
        } else if n <= self.steps.len() {
            self.steps[n - 1].x.clone()
        } else {
            debug_assert!(self.terminated_at_zero.is_some());
            self.x0.zero_like()
        }
    }

    /// Number of digits available.
    pub fn depth(&self) -> usize {
        self.steps.len()
    }
}

pub fn unfolded_orbit<S: Scalar>(
    x: &S,
    alpha: &AlphaParam<S>,
    max_steps: usize,
) -> Result<UnfoldedTrace<S>, DynamicsError> {
    let mut trace = UnfoldedTrace {
        x0: x.clone(),
        steps: Vec::new(),
        terminated_at_zero: None,
        precision_capped: false,
    };
    if x.is_zero() {
        trace.terminated_at_zero = Some(0);
        return Ok(trace);
    }
    let mut cur = x.clone();
    let mut m = Mat2::identity();
    for n in 1..=max_steps {
        let (next, digit) = unfolded_step(&cur, alpha)?;
        m = m.mul(&Mat2::digit(digit.eps, &digit.a));
        let zero_here = next.is_zero();
        let capped = next.precision_floor();
        trace.steps.push(UnfoldedStep {
            index: n,
            x: next.clone(),
            digit,
            matrix: m.clone(),
        });
        if zero_here {
            trace.terminated_at_zero = Some(n);
            break;
        }
        if capped {
            trace.precision_capped = true;
            break;
        }
        cur = next;
    }
    Ok(trace)
}

/// Uniform contraction rate of the beta products (piecewise in alpha).
pub fn contraction_rate(alpha: f64) -> Result<f64, DynamicsError> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(DynamicsError::Domain(format!(
            "contraction rate defined for alpha in (0, 1], got {alpha}"
        )));
    }
    let sqrt2m1 = std::f64::consts::SQRT_2 - 1.0;
    Ok(if alpha > GOLDEN {
        GOLDEN
    } else if alpha >= sqrt2m1 {
        sqrt2m1
    } else {
        (1.0 - 2.0 * alpha).sqrt()
    })
}

/// Check `|T^k(x)| = A^k(|x|)` for all k <= max_k (exactly for exact
/// scalars, within `tol` otherwise).
pub fn semiconjugacy_check<S: Scalar>(
    x: &S,
    alpha: &AlphaParam<S>,
    max_k: usize,
    tol: f64,
) -> Result<bool, DynamicsError> {
    let unfolded = unfolded_orbit(x, alpha, max_k)?;
    let mut folded = x.abs();
    for k in 1..=max_k {
        if folded.is_zero() {
            return Ok(unfolded.iterate(k).is_zero());
        }
        let (next, _) = folded_step(&folded, alpha)?;
        folded = next;
        if k <= unfolded.depth() {
            if !unfolded.iterate(k).abs().eq_within(&folded, tol) {
                return Ok(false);
            }
        } else {
            // Unfolded orbit terminated (or capped): nothing left to compare.
            return Ok(unfolded.terminated_at_zero.is_some() && folded.is_zero()
                || unfolded.precision_capped);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn alpha_exact(p: i64, q: i64) -> AlphaParam<Rational> {
        AlphaParam::from_rational(rat(p, q)).unwrap()
    }

    #[test]
    fn reduce_initial_examples() {
        // x = 0.55, alpha = 2/5 (alpha_bar = 3/5): stays put.
        let a = alpha_exact(2, 5);
        let (x0, a0, _) = reduce_initial(&rat(11, 20), &a);
        assert_eq!(x0, rat(11, 20));
        assert_eq!(a0, BigInt::from(0));

        // x = 0.55, alpha = 1/2: folds to 0.45 around 1.
        let a = alpha_exact(1, 2);
        let (x0, a0, eps0) = reduce_initial(&rat(11, 20), &a);
        assert_eq!(x0, rat(9, 20));
        assert_eq!(a0, BigInt::from(1));
        assert_eq!(eps0, -1);

        // Integer seed at alpha = 1 reduces to the fixed point.
        let a = alpha_exact(1, 1);
        let (x0, a0, _) = reduce_initial(&rat(3, 1), &a);
        assert!(Scalar::is_zero(&x0));
        assert_eq!(a0, BigInt::from(3));
    }

    #[test]
    fn folded_step_examples() {
        let a = alpha_exact(1, 2);
        let (x1, d) = folded_step(&rat(2, 5), &a).unwrap();
        assert_eq!(x1, rat(1, 2));
        assert_eq!(d.a, BigInt::from(3));
        assert_eq!(d.eps, -1);

        let a = alpha_exact(2, 5);
        let (x1, d) = folded_step(&rat(1, 2), &a).unwrap();
        assert!(Scalar::is_zero(&x1));
        assert_eq!(d.a, BigInt::from(2));
        assert_eq!(d.eps, 0);

        // Golden fixed point of the Gauss map, in dyadic mode.
        let bits = 128;
        let a = AlphaParam::from_f64(1.0, bits).unwrap();
        let g = Dyadic::golden_conjugate(bits);
        let (x1, d) = folded_step(&g, &a).unwrap();
        assert_eq!(d.a, BigInt::one());
        assert!(x1.sub(&g).to_f64().abs() < 1e-36);
    }

    #[test]
    fn folded_step_rejects_outside_domain() {
        let a = alpha_exact(1, 2);
        assert!(matches!(
            folded_step(&rat(0, 1), &a),
            Err(DynamicsError::AtZero)
        ));
        assert!(matches!(
            folded_step(&rat(3, 4), &a),
            Err(DynamicsError::Domain(_))
        ));
    }

    #[test]
    fn unfolded_step_examples() {
        let a = alpha_exact(2, 5);
        let (x1, d) = unfolded_step(&rat(2, 5), &a).unwrap();
        assert_eq!(x1, rat(-1, 2));
        assert_eq!((d.eps, d.a.clone()), (1, BigInt::from(3)));

        let (x1, d) = unfolded_step(&rat(-3, 5), &a).unwrap();
        assert_eq!(x1, rat(-1, 3));
        assert_eq!((d.eps, d.a.clone()), (-1, BigInt::from(2)));

        let bits = 128;
        let a1 = AlphaParam::from_f64(1.0, bits).unwrap();
        let g = Dyadic::golden_conjugate(bits);
        let (x1, _) = unfolded_step(&g, &a1).unwrap();
        assert!(x1.sub(&g).to_f64().abs() < 1e-36);
    }

    #[test]
    fn orbit_examples_exact() {
        // 2/5 -> 1/2 -> 0 under alpha = 1/2.
        let a = alpha_exact(1, 2);
        let t = orbit(&rat(2, 5), &a, 10).unwrap();
        assert_eq!(t.terminated_at_zero, Some(2));
        assert_eq!(t.steps[1].x, rat(1, 2));
        assert!(Scalar::is_zero(&t.steps[2].x));
        // Convergent of the full orbit recovers the point: p_2/q_2 = 2/5.
        assert_eq!(t.steps[2].p, BigInt::from(2));
        assert_eq!(t.steps[2].q, BigInt::from(5));

        // Gauss orbit of 3/7: 3/7 -> 1/3 -> 0.
        let a = alpha_exact(1, 1);
        let t = orbit(&rat(3, 7), &a, 10).unwrap();
        assert_eq!(t.terminated_at_zero, Some(2));
        assert_eq!(t.steps[1].x, rat(1, 3));
    }

    #[test]
    fn orbit_golden_point_float() {
        let bits = 128;
        let a = AlphaParam::from_f64(1.0, bits).unwrap();
        let g = Dyadic::golden_conjugate(bits);
        let t = orbit(&g, &a, 40).unwrap();
        assert!(t.terminated_at_zero.is_none());
        assert_eq!(t.len(), 41);
        // x_n = g and beta_n = g^(n+1) at the fixed point, to working
        // precision (the drift after 40 steps stays far below 1e-25).
        let mut g_pow = g.clone();
        for n in 1..=40usize {
            g_pow = g_pow.mul(&g);
            assert!(t.steps[n].x.sub(&g).to_f64().abs() < 1e-25, "iterate {n}");
            assert!(
                t.steps[n].beta.sub(&g_pow).to_f64().abs() < 1e-25,
                "beta {n}"
            );
        }
    }

    #[test]
    fn contraction_rate_regimes() {
        assert!((contraction_rate(0.8).unwrap() - GOLDEN).abs() < 1e-15);
        assert!((contraction_rate(0.5).unwrap() - (std::f64::consts::SQRT_2 - 1.0)).abs() < 1e-15);
        assert!((contraction_rate(0.3).unwrap() - 0.4f64.sqrt()).abs() < 1e-15);
        assert!(contraction_rate(0.0).is_err());
        assert!(contraction_rate(1.5).is_err());
    }

    #[test]
    fn semiconjugacy_examples() {
        let a = alpha_exact(2, 5);
        assert!(semiconjugacy_check(&rat(-3, 5), &a, 2, 0.0).unwrap());
        assert!(semiconjugacy_check(&rat(0, 1), &a, 5, 0.0).unwrap());

        let bits = 128;
        let af = AlphaParam::from_f64(0.45, bits).unwrap();
        let x = Dyadic::from_f64(0.3, bits);
        assert!(semiconjugacy_check(&x, &af, 30, 1e-9).unwrap());
    }

    #[test]
    fn orbit_log_q_tracks_bigint_q() {
        let bits = 128;
        let a = AlphaParam::from_f64(0.5, bits).unwrap();
        let x = Dyadic::from_f64(0.713052618, bits);
        let t = orbit(&x, &a, 30).unwrap();
        for s in &t.steps[1..] {
            let direct = s.q.to_f64().unwrap().ln();
            assert!((s.log_q - direct).abs() < 1e-9 * direct.max(1.0));
        }
    }
}
