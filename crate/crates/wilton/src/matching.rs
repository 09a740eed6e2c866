//! Exact matching detection for rational parameters.
//!
//! A rational alpha in (0, 1] satisfies a matching condition of order
//! (n, m) when the digit-matrix products along the unfolded orbits of
//! alpha and alpha - 1 obey the exact identity
//!
//! ```text
//! M(alpha, alpha, n) = [[1,1],[0,1]] * M(alpha, alpha-1, m) * [[-1,0],[1,1]]
//! ```
//!
//! Both orbits of a rational parameter reach 0 in finitely many steps, so
//! the search space is finite and the detection is exact integer algebra.
//! The exponents can independently be read off the even-length continued
//! fraction of a pseudocenter (digit sums over even and odd positions),
//! which is what the acceptance checks cross-validate.
//!
//! The local form packages the Mobius maps and the analytic weight
//! `b(x) = |q x - p|` that express the function near a matched parameter,
//! together with an exact window on which no digit of either branch
//! changes.

use crate::dyadic::Dyadic;
use crate::dynamics::{unfolded_orbit, AlphaParam, DynamicsError, Scalar, UnfoldedTrace};
use crate::exact::{rcf_expansions, Mat2, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// Hard cap on orbit generation; rational orbits terminate in O(log den)
/// steps, so hitting this indicates a non-terminating (irrational) input.
const ORBIT_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub enum MatchingError {
    Domain(String),
    /// No exponent pair satisfies the identity within the finite orbits.
    NoMatch,
    /// A consequence of the matrix identity failed to verify exactly.
    Inconsistent(String),
    /// The digit-constancy window degenerated to nothing.
    NoWindow(String),
    Dynamics(DynamicsError),
}

impl fmt::Display for MatchingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatchingError::Domain(msg) => write!(f, "domain error: {msg}"),
            MatchingError::NoMatch => write!(f, "no matching exponents found"),
            MatchingError::Inconsistent(msg) => write!(f, "matching inconsistency: {msg}"),
            MatchingError::NoWindow(msg) => write!(f, "no local window: {msg}"),
            MatchingError::Dynamics(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for MatchingError {}

impl From<DynamicsError> for MatchingError {
    fn from(e: DynamicsError) -> Self {
        MatchingError::Dynamics(e)
    }
}

/// Matching exponents of a rational parameter, with the two matrices of
/// the identity and the verification status of its consequences.
#[derive(Debug, Clone)]
pub struct MatchingData {
    pub n: usize,
    pub m: usize,
    /// m - n; odd index switches the singularity type at the parameter.
    pub index: i64,
    pub verified: bool,
    pub m_plus: Mat2,
    pub m_minus: Mat2,
}

impl MatchingData {
    pub fn index_is_even(&self) -> bool {
        self.index.rem_euclid(2) == 0
    }
}

fn check_rational_alpha(alpha: &Rational) -> Result<(), MatchingError> {
    if !(alpha > &Rational::zero() && alpha <= &Rational::one()) {
        return Err(MatchingError::Domain(format!(
            "alpha must lie in (0, 1], got {alpha}"
        )));
    }
    Ok(())
}

/// Orbits of the two branch points of a rational parameter.
type ParameterOrbits = (
    UnfoldedTrace<Rational>,
    UnfoldedTrace<Rational>,
    AlphaParam<Rational>,
);

/// Unfolded orbits of alpha and alpha - 1, run to termination.
fn parameter_orbits(alpha: &Rational) -> Result<ParameterOrbits, MatchingError> {
    check_rational_alpha(alpha)?;
    let param = AlphaParam::from_rational(alpha.clone())?;
    let plus = unfolded_orbit(alpha, &param, ORBIT_CAP)?;
    let minus = unfolded_orbit(&(alpha - Rational::one()), &param, ORBIT_CAP)?;
    if plus.terminated_at_zero.is_none() || minus.terminated_at_zero.is_none() {
        return Err(MatchingError::Domain(
            "parameter orbit did not terminate (non-rational input?)".into(),
        ));
    }
    Ok((plus, minus, param))
}

/// Find the smallest matching exponents of a rational alpha, ordered by
/// n + m and then by n. Returns `None` when no pair matches within the
/// two finite orbits.
pub fn find_matching_exponents(alpha: &Rational) -> Result<Option<MatchingData>, MatchingError> {
    let (plus, minus, _) = parameter_orbits(alpha)?;
    let n_plus = plus.terminated_at_zero.unwrap();
    let n_minus = minus.terminated_at_zero.unwrap();
    let h = Mat2::shift_up();
    let v = Mat2::new(-1, 0, 1, 1);

    for total in 0..=(n_plus + n_minus) {
        let lo = total.saturating_sub(n_minus);
        for n in lo..=total.min(n_plus) {
            let m = total - n;
            let lhs = plus.matrix(n);
            let rhs = h.mul(&minus.matrix(m)).mul(&v);
            if lhs == rhs {
                let data = MatchingData {
                    n,
                    m,
                    index: m as i64 - n as i64,
                    verified: false,
                    m_plus: lhs,
                    m_minus: minus.matrix(m),
                };
                return verify_consequences(data, &plus, &minus, alpha).map(Some);
            }
        }
    }
    Ok(None)
}

/// Exact consequences of the matrix identity: the column relations between
/// the two convergents, the Mobius relation between the two orbit tails,
/// and the equality of the next iterates.
fn verify_consequences(
    mut data: MatchingData,
    plus: &UnfoldedTrace<Rational>,
    minus: &UnfoldedTrace<Rational>,
    alpha: &Rational,
) -> Result<MatchingData, MatchingError> {
    let (n, m) = (data.n, data.m);
    // p(alpha, n) = p(alpha-1, m) + q(alpha-1, m);  q(alpha, n) = q(alpha-1, m).
    let p_plus = &data.m_plus.b;
    let q_plus = &data.m_plus.d;
    let p_minus = &data.m_minus.b;
    let q_minus = &data.m_minus.d;
    if q_plus != q_minus || *p_plus != p_minus + q_minus {
        return Err(MatchingError::Inconsistent(format!(
            "convergent columns at ({n}, {m}) for alpha = {alpha}"
        )));
    }

    // T^m(alpha - 1) = V . T^n(alpha) with V: x -> -x / (x + 1); this is
    // the projective form of 1/T^n(alpha) + 1/T^m(alpha-1) = -1, valid
    // also when both iterates are 0.
    let v = Mat2::new(-1, 0, 1, 1);
    let tail_plus = plus.iterate(n);
    let tail_minus = minus.iterate(m);
    match v.apply_rational(&tail_plus) {
        Some(image) if image == tail_minus => {}
        _ => {
            return Err(MatchingError::Inconsistent(format!(
                "orbit tails at ({n}, {m}) for alpha = {alpha}"
            )))
        }
    }

    // T^{n+1}(alpha) = T^{m+1}(alpha - 1), with T(0) = 0 past termination.
    if plus.iterate(n + 1) != minus.iterate(m + 1) {
        return Err(MatchingError::Inconsistent(format!(
            "next iterates at ({n}, {m}) for alpha = {alpha}"
        )));
    }

    data.verified = true;
    Ok(data)
}

/// Matching exponents read off the even-length continued fraction of a
/// pseudocenter: n sums the digits in even positions, m those in odd
/// positions (positions counted from 1).
pub fn exponents_from_pseudocenter(r: &Rational) -> Result<(usize, usize), MatchingError> {
    let (even, _) = rcf_expansions(r).map_err(|e| MatchingError::Domain(e.to_string()))?;
    let mut n = BigInt::zero();
    let mut m = BigInt::zero();
    for (pos, a) in even.digits.iter().enumerate() {
        if (pos + 1) % 2 == 0 {
            n += a;
        } else {
            m += a;
        }
    }
    let n = n
        .to_usize()
        .ok_or_else(|| MatchingError::Domain(format!("digit sum of {r} does not fit an index")))?;
    let m = m
        .to_usize()
        .ok_or_else(|| MatchingError::Domain(format!("digit sum of {r} does not fit an index")))?;
    Ok((n, m))
}

/// A rational r in (0, 1) is the pseudocenter of some matching interval
/// exactly when its Gauss orbit never enters (0, r) before reaching 0.
pub fn pseudocenter_check(r: &Rational) -> Result<bool, MatchingError> {
    if !(r > &Rational::zero() && r < &Rational::one()) {
        return Err(MatchingError::Domain(format!(
            "pseudocenter check requires r in (0, 1), got {r}"
        )));
    }
    let mut x = r.clone();
    loop {
        // Gauss step.
        let inv = Scalar::recip(&x);
        x = &inv - Rational::from(inv.floor().to_integer());
        if Scalar::is_zero(&x) {
            return Ok(true);
        }
        if &x < r {
            return Ok(false);
        }
    }
}

/// All pseudocenters with denominator at most `max_den`, in increasing
/// order of value.
pub fn pseudocenters_up_to(max_den: u64) -> Vec<Rational> {
    let mut out = Vec::new();
    for q in 2..=max_den {
        for p in 1..q {
            if num_integer::gcd(p, q) != 1 {
                continue;
            }
            let r = Rational::new(BigInt::from(p), BigInt::from(q));
            if pseudocenter_check(&r).expect("domain checked") {
                out.push(r);
            }
        }
    }
    out.sort();
    out
}

/// u_m = [0; 2, 1^(2m-1)], increasing to 1 - g. Pseudocenters of matching
/// intervals of index +1 accumulating at 1 - g from below.
pub fn u_value(m: usize) -> Rational {
    assert!(m >= 1, "u_m defined for m >= 1");
    ones_tail_value(2 * m - 1)
}

/// t_m = [0; 2, 1^(2m)], decreasing to 1 - g; t_0 = 1/2.
pub fn t_value(m: usize) -> Rational {
    ones_tail_value(2 * m)
}

fn ones_tail_value(ones: usize) -> Rational {
    let mut digits = vec![BigInt::from(2)];
    digits.extend(std::iter::repeat_n(BigInt::one(), ones));
    crate::exact::RcfExpansion { digits }.value()
}

/// Local expression of the dynamics on a one-sided window of a matched
/// rational parameter: Mobius maps for each branch, the shared analytic
/// weight `b(x) = |q x - p|`, the sign parity of the index, and an exact
/// window radius on which no digit of either branch changes.
#[derive(Debug, Clone)]
pub struct LocalForm {
    /// Map of the left branch: T^(depth_left) of x, as a matrix acting on x.
    pub phi: Mat2,
    /// Map of the right branch: T^(depth_right) of (x - 1), acting on x.
    pub phi_right: Mat2,
    /// Digits consumed on the left branch (n + 1, or n at a pseudocenter
    /// whose orbit dies at depth n).
    pub depth_left: usize,
    /// Digits consumed on the right branch.
    pub depth_right: usize,
    /// Parity of n - m: true when odd (the sign flips across alpha).
    pub odd_index: bool,
    /// Half the exact distance to the nearest digit discontinuity.
    pub window: Rational,
    /// Coefficients (p, q) of b(x) = |q x - p|, shared by both branches.
    pub b_coeffs: (BigInt, BigInt),
    pub exponents: (usize, usize),
}

impl LocalForm {
    pub fn b(&self, x: &Rational) -> Rational {
        let (p, q) = &self.b_coeffs;
        Signed::abs(&(Rational::from(q.clone()) * x - Rational::from(p.clone())))
    }

    /// phi applied to x (left branch map).
    pub fn apply_left(&self, x: &Rational) -> Option<Rational> {
        self.phi.apply_rational(x)
    }

    /// Right branch map applied to x (the shift by -1 is built in).
    pub fn apply_right(&self, x: &Rational) -> Option<Rational> {
        self.phi_right.apply_rational(x)
    }
}

/// Build the local form at a matched rational parameter.
pub fn local_form(alpha: &Rational) -> Result<LocalForm, MatchingError> {
    let (plus, minus, param) = parameter_orbits(alpha)?;
    let data = find_matching_exponents(alpha)?.ok_or(MatchingError::NoMatch)?;
    let (n, m) = (data.n, data.m);
    let n_plus = plus.terminated_at_zero.unwrap();
    let n_minus = minus.terminated_at_zero.unwrap();

    // At a pseudocenter the orbit of alpha dies exactly at depth n and no
    // (n+1)-th digit exists; the deepest usable branch maps live one level
    // down and the two sides carry different (sign-related) matrices. At
    // every other rational in the matching interval the full depth n+1 is
    // available and both sides carry the same matrix.
    let depth_left = (n + 1).min(n_plus);
    let depth_right = (m + 1).min(n_minus);

    let phi = plus
        .matrix(depth_left)
        .inverse()
        .ok_or_else(|| MatchingError::Inconsistent("non-unimodular branch matrix".into()))?;
    let phi_right = minus
        .matrix(depth_right)
        .inverse()
        .ok_or_else(|| MatchingError::Inconsistent("non-unimodular branch matrix".into()))?
        .mul(&Mat2::shift_down());
    if depth_left == n + 1 && depth_right == m + 1 && phi != phi_right {
        return Err(MatchingError::Inconsistent(
            "branch maps disagree at full depth".into(),
        ));
    }

    // b from the depth-n columns; equal on both sides by the verified
    // column relations.
    let b_coeffs = {
        let mat = plus.matrix(n);
        (mat.b.clone(), mat.d.clone())
    };

    let left_interval = digit_constancy_interval(&plus, &param, depth_left)?;
    let right_interval = digit_constancy_interval(&minus, &param, depth_right)?;
    let alpha_minus_one = alpha - Rational::one();
    if left_interval.0 >= *alpha || right_interval.1 <= alpha_minus_one {
        return Err(MatchingError::NoWindow(format!(
            "degenerate window at {alpha}"
        )));
    }
    let eps_left = alpha - &left_interval.0;
    let eps_right = &right_interval.1 - &alpha_minus_one;
    let window = eps_left.min(eps_right) / Rational::from(BigInt::from(2));

    Ok(LocalForm {
        phi,
        phi_right,
        depth_left,
        depth_right,
        odd_index: !data.index_is_even(),
        window,
        b_coeffs,
        exponents: (n, m),
    })
}

/// Exact open interval around the base point of `trace` on which the
/// first `depth` unfolded digits (quotient and sign) are constant.
///
/// The constraint set is tracked in iterate coordinates: each digit
/// contributes one cylinder intersection, each step pushes the interval
/// through the one-digit Mobius map, and the final interval is pulled
/// back through the accumulated matrix.
pub fn digit_constancy_interval(
    trace: &UnfoldedTrace<Rational>,
    param: &AlphaParam<Rational>,
    depth: usize,
) -> Result<(Rational, Rational), MatchingError> {
    let alpha = &param.value;
    let lower = alpha - Rational::one();
    if depth == 0 {
        return Ok((lower, alpha.clone()));
    }
    if depth > trace.depth() {
        return Err(MatchingError::Domain(format!(
            "requested depth {depth} beyond available digits {}",
            trace.depth()
        )));
    }

    let cylinder = |c: &BigInt, s: i8| -> (Rational, Rational) {
        // s = +1: y in ( 1/(c + alpha), 1/(c - 1 + alpha) )
        // s = -1: y in ( -1/(c - 1 + alpha), -1/(c + alpha) )
        let c_rat = Rational::from(c.clone());
        let hi_mag = Scalar::recip(&(&c_rat - Rational::one() + alpha));
        let lo_mag = Scalar::recip(&(&c_rat + alpha));
        if s >= 0 {
            (lo_mag, hi_mag)
        } else {
            (-hi_mag, -lo_mag)
        }
    };

    let intersect =
        |a: &(Rational, Rational), b: &(Rational, Rational)| -> Option<(Rational, Rational)> {
            let lo = a.0.clone().max(b.0.clone());
            let hi = a.1.clone().min(b.1.clone());
            if lo < hi {
                Some((lo, hi))
            } else {
                None
            }
        };

    let first = &trace.steps[0].digit;
    let mut interval = cylinder(&first.a, first.eps);
    for j in 2..=depth {
        // Push through T(y) = s/y - c of digit j-1 (no pole inside a
        // single-sign cylinder), then impose digit j's cylinder.
        let prev = &trace.steps[j - 2].digit;
        let step_map = Mat2 {
            a: -&prev.a,
            b: BigInt::from(prev.eps),
            c: BigInt::one(),
            d: BigInt::zero(),
        };
        let img_a = step_map
            .apply_rational(&interval.0)
            .expect("no pole in cylinder");
        let img_b = step_map
            .apply_rational(&interval.1)
            .expect("no pole in cylinder");
        let pushed = if img_a <= img_b {
            (img_a, img_b)
        } else {
            (img_b, img_a)
        };
        let digit = &trace.steps[j - 1].digit;
        interval = intersect(&pushed, &cylinder(&digit.a, digit.eps)).ok_or_else(|| {
            MatchingError::NoWindow(format!("digit {j} cylinder empty around {:?}", trace.x0))
        })?;
    }

    // Pull the iterate-space interval back to parameter space.
    let back = trace.matrix(depth - 1);
    let img_a = back
        .apply_rational(&interval.0)
        .ok_or_else(|| MatchingError::NoWindow("pole during pull-back".into()))?;
    let img_b = back
        .apply_rational(&interval.1)
        .ok_or_else(|| MatchingError::NoWindow("pole during pull-back".into()))?;
    let (lo, hi) = if img_a <= img_b {
        (img_a, img_b)
    } else {
        (img_b, img_a)
    };
    if lo > trace.x0 || hi < trace.x0 {
        return Err(MatchingError::NoWindow(format!(
            "base point {:?} escaped its digit cylinder",
            trace.x0
        )));
    }
    Ok((lo, hi))
}

/// Bounded certificate that every Gauss iterate of x up to horizon K
/// stays at or above x (exact rational arithmetic). A `false` is
/// conclusive; a `true` certifies only the inspected horizon.
pub fn exceptional_check_bounded_exact(x: &Rational, max_k: usize) -> Result<bool, MatchingError> {
    if !(x > &Rational::zero() && x < &Rational::one()) {
        return Err(MatchingError::Domain(format!(
            "exceptional check requires x in (0, 1), got {x}"
        )));
    }
    let mut cur = x.clone();
    for _ in 1..=max_k {
        let inv = Scalar::recip(&cur);
        cur = &inv - Rational::from(inv.floor().to_integer());
        if &cur < x {
            return Ok(false);
        }
        if Scalar::is_zero(&cur) {
            // Iterate equals 0 < x would have returned above; being here
            // means x <= 0, excluded by the domain check.
            unreachable!("zero iterate compares below any x in (0,1)");
        }
    }
    Ok(true)
}

/// Float-mode variant of the bounded exceptional-set certificate for
/// points carried at working precision (e.g. the golden number). Errors
/// once the precision floor makes the comparison meaningless.
pub fn exceptional_check_bounded(x: &Dyadic, max_k: usize) -> Result<bool, MatchingError> {
    let zero = Dyadic::zero(x.bits());
    let one = Dyadic::one(x.bits());
    if !(*x > zero && *x < one) {
        return Err(MatchingError::Domain(
            "exceptional check requires x in (0, 1)".into(),
        ));
    }
    let mut cur = x.clone();
    for _ in 1..=max_k {
        if cur.is_zero() || cur.precision_floor() {
            return Err(MatchingError::Domain(
                "precision exhausted before the horizon".into(),
            ));
        }
        let inv = cur.recip();
        cur = inv.sub_int(&inv.floor_int());
        if cur < *x {
            return Ok(false);
        }
    }
    Ok(true)
}
