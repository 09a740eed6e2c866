//! Classification of rational singularities and the mean-oscillation
//! failure witness.
//!
//! At a rational point the series diverges; the nature of the divergence
//! is read off one-sided averages. A point is type B when the two
//! one-sided means diverge with the same sign, type A when they diverge
//! with opposite signs. Type A at any point rules the function out of
//! the bounded-mean-oscillation class, and the witness construction
//! exhibits the interval that does it: endpoints on either side of the
//! singularity whose integral vanishes while the mean of |w| inside is
//! large.
//!
//! The decision procedure is exact: a rational point whose orbit avoids
//! the parameter endpoints before reaching 0 is always type B; a
//! collision forces the parameter to be rational and the type is decided
//! by the parity of its matching index. The numerical probe corroborates
//! the decision on dyadic scales.

use crate::dyadic::Dyadic;
use crate::dynamics::{unfolded_orbit, AlphaParam, DynamicsError, Scalar};
use crate::eval::{integrate_wilton, wilton_eval, EvalConfig};
use crate::exact::Rational;
use crate::matching::{find_matching_exponents, MatchingError};
use num_traits::{One, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum SingularityError {
    Domain(String),
    /// Witness requested at a point that is not a type A singularity.
    NotTypeA(String),
    /// The witness bisection failed to reach the requested tolerance.
    Unconverged(String),
    Matching(MatchingError),
    Dynamics(DynamicsError),
}

impl fmt::Display for SingularityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SingularityError::Domain(m) => write!(f, "domain error: {m}"),
            SingularityError::NotTypeA(m) => write!(f, "not a type A singularity: {m}"),
            SingularityError::Unconverged(m) => write!(f, "witness search unconverged: {m}"),
            SingularityError::Matching(e) => write!(f, "{e}"),
            SingularityError::Dynamics(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for SingularityError {}

impl From<MatchingError> for SingularityError {
    fn from(e: MatchingError) -> Self {
        SingularityError::Matching(e)
    }
}

impl From<DynamicsError> for SingularityError {
    fn from(e: DynamicsError) -> Self {
        SingularityError::Dynamics(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingKind {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// The orbit of the point avoids the parameter endpoints: always B.
    Regular,
    /// Orbit collision with an endpoint; type decided by the parity of
    /// the parameter's matching index.
    MatchingParity,
}

/// Outcome of the exact classification.
#[derive(Debug, Clone)]
pub struct SingularityType {
    pub kind: SingKind,
    /// Sign of the divergence; reported only by the numerical probe, the
    /// exact decision procedure leaves it undetermined.
    pub sign: Option<i8>,
    pub provenance: Provenance,
    /// Set when a float-mode parameter produced a near-collision that
    /// exact arithmetic could not confirm.
    pub float_warning: bool,
}

/// Parameter accepted by [`classify`]: exact rational or float mode.
#[derive(Debug, Clone)]
pub enum AlphaSpec {
    Exact(Rational),
    Float(f64),
}

/// Reduce xi by integer translation into [alpha - 1, alpha).
pub fn reduce_mod_one(xi: &Rational, alpha: &Rational) -> Rational {
    let lower = alpha - Rational::one();
    let shift = (xi - &lower).floor();
    xi - shift
}

/// Classify a rational point as a type A or type B singularity of the
/// periodic (unfolded) function for the given parameter.
pub fn classify(xi: &Rational, alpha: &AlphaSpec) -> Result<SingularityType, SingularityError> {
    match alpha {
        AlphaSpec::Float(a) => classify_float(xi, *a),
        AlphaSpec::Exact(a) => classify_exact(xi, a),
    }
}

fn classify_exact(xi: &Rational, alpha: &Rational) -> Result<SingularityType, SingularityError> {
    if !(alpha > &Rational::zero() && alpha <= &Rational::one()) {
        return Err(SingularityError::Domain(format!(
            "alpha must lie in (0, 1], got {alpha}"
        )));
    }
    let param = AlphaParam::from_rational(alpha.clone())?;
    let reduced = reduce_mod_one(xi, alpha);
    let endpoint = alpha - Rational::one();

    // Iterates of the reduced point live in [alpha-1, alpha); the only
    // endpoint reachable is alpha - 1 (xi congruent to alpha lands there
    // at k = 0). For alpha = 1 the endpoint is 0, which every rational
    // orbit reaches, so every rational point collides.
    let trace = unfolded_orbit(&reduced, &param, 100_000)?;
    let termination = trace.terminated_at_zero.unwrap_or(usize::MAX);
    let mut collision = reduced == endpoint;
    if !collision {
        for k in 1..=trace.depth() {
            let it = trace.iterate(k);
            if it == endpoint {
                collision = true;
                break;
            }
            if k >= termination {
                break;
            }
        }
    }
    // Termination itself is an endpoint hit exactly when alpha = 1.
    if !collision && alpha == &Rational::one() {
        collision = true;
    }

    if !collision {
        return Ok(SingularityType {
            kind: SingKind::B,
            sign: None,
            provenance: Provenance::Regular,
            float_warning: false,
        });
    }

    let data = find_matching_exponents(alpha)?
        .ok_or_else(|| SingularityError::Domain(format!("no matching data for {alpha}")))?;
    let kind = if data.index_is_even() {
        SingKind::B
    } else {
        SingKind::A
    };
    Ok(SingularityType {
        kind,
        sign: None,
        provenance: Provenance::MatchingParity,
        float_warning: false,
    })
}

fn classify_float(xi: &Rational, alpha: f64) -> Result<SingularityType, SingularityError> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(SingularityError::Domain(format!(
            "alpha must lie in (0, 1], got {alpha}"
        )));
    }
    // Exact collision with an irrational parameter is impossible; the
    // orbit is scanned at working precision only to flag near-misses.
    let bits = crate::dyadic::DEFAULT_PRECISION_BITS;
    let param = AlphaParam::from_f64(alpha, bits)?;
    let endpoint = param.value.sub(&param.value.one_like());
    let xi_f = Scalar::to_f64(xi);
    let reduced = Dyadic::from_f64(xi_f - (xi_f - (alpha - 1.0)).floor(), bits);
    let trace = unfolded_orbit(&reduced, &param, 512)?;
    let mut warning = false;
    for k in 0..=trace.depth() {
        if trace.iterate(k).sub(&endpoint).to_f64().abs() < 1e-9 {
            warning = true;
            break;
        }
    }
    Ok(SingularityType {
        kind: SingKind::B,
        sign: None,
        provenance: Provenance::Regular,
        float_warning: warning,
    })
}

/// The 1-periodic unfolded function at x: the folded function evaluated
/// at x for alpha >= 1/2, at -x for alpha < 1/2.
pub fn wilton_tilde(
    x: f64,
    alpha: &AlphaParam<Dyadic>,
    cfg: &EvalConfig,
) -> Result<crate::eval::WiltonValue, DynamicsError> {
    let arg = if alpha.to_f64() < 0.5 { -x } else { x };
    wilton_eval(&Dyadic::from_f64(arg, cfg.bits), alpha, cfg)
}

/// Quadrature of the periodic unfolded function over (a, b).
fn integrate_tilde(
    a: f64,
    b: f64,
    cells: usize,
    alpha: &AlphaParam<Dyadic>,
    cfg: &EvalConfig,
) -> Result<f64, DynamicsError> {
    if alpha.to_f64() < 0.5 {
        // tilde(x) = folded(-x): integral over (a,b) maps to (-b,-a).
        integrate_wilton(-b, -a, cells, alpha, cfg)
    } else {
        integrate_wilton(a, b, cells, alpha, cfg)
    }
}

/// One probed scale: means of the function over (xi - h, xi) and
/// (xi, xi + h).
#[derive(Debug, Clone)]
pub struct ProbeScale {
    pub h: f64,
    pub left_avg: f64,
    pub right_avg: f64,
}

/// One-sided averages of the periodic unfolded function at a point, over
/// a list of decreasing scales. Type B predicts equal-signed means on the
/// two sides, type A opposite-signed means; in both cases the magnitudes
/// grow as h shrinks.
pub fn average_probe(
    alpha: f64,
    xi: f64,
    scales: &[f64],
    cells: usize,
    cfg: &EvalConfig,
) -> Result<Vec<ProbeScale>, SingularityError> {
    if scales.iter().any(|&h| h < 1e-6) {
        return Err(SingularityError::Domain(
            "probe scales below 1e-6 are not resolvable".into(),
        ));
    }
    let param = AlphaParam::from_f64(alpha, cfg.bits)?;
    let mut out = Vec::with_capacity(scales.len());
    for &h in scales {
        let left = integrate_tilde(xi - h, xi, cells, &param, cfg)? / h;
        let right = integrate_tilde(xi, xi + h, cells, &param, cfg)? / h;
        out.push(ProbeScale {
            h,
            left_avg: left,
            right_avg: right,
        });
    }
    Ok(out)
}

/// Pattern extracted from a probe run across decreasing scales.
#[derive(Debug, Clone)]
pub struct ProbePattern {
    /// Same-signed means on both sides at every scale (type B pattern).
    pub same_sign: bool,
    /// Opposite-signed means at every scale (type A pattern).
    pub opposite_sign: bool,
    /// Magnitudes strictly increase on both sides as h shrinks.
    pub growing: bool,
    /// Final-scale magnitude clears the divergence floor.
    pub exceeds_floor: bool,
}

/// Default magnitude floor for calling a probe divergent.
pub const PROBE_FLOOR: f64 = 5.0;

pub fn probe_pattern(probes: &[ProbeScale], floor: f64) -> ProbePattern {
    let same_sign = probes.iter().all(|p| p.left_avg * p.right_avg > 0.0);
    let opposite_sign = probes.iter().all(|p| p.left_avg * p.right_avg < 0.0);
    let growing = probes.windows(2).all(|w| {
        w[1].left_avg.abs() > w[0].left_avg.abs() && w[1].right_avg.abs() > w[0].right_avg.abs()
    });
    let exceeds_floor = probes
        .last()
        .map(|p| p.left_avg.abs().min(p.right_avg.abs()) > floor)
        .unwrap_or(false);
    ProbePattern {
        same_sign,
        opposite_sign,
        growing,
        exceeds_floor,
    }
}

/// A vanishing-integral interval across a type A singularity.
#[derive(Debug, Clone)]
pub struct BmoWitness {
    pub x_minus: f64,
    pub x_plus: f64,
    /// Quadrature value of the integral over (x_minus, x_plus).
    pub integral_value: f64,
}

/// Find x- in (xi - eps, xi) and x+ in (xi, xi + eps) with
/// |integral of w over (x-, x+)| <= tol * (x+ - x-), by the
/// intermediate-value scan across the singularity.
///
/// The opposite-sign layout of the one-sided integrals only emerges once
/// the logarithmic divergence dominates the bounded part of the function,
/// so the working scale shrinks dyadically inside (xi - eps, xi + eps)
/// until the pattern appears; any witness found at the working scale is a
/// witness for the requested eps. `NotTypeA` is returned when no scale
/// down to the resolution floor shows the pattern.
pub fn bmo_witness(
    alpha: &Rational,
    xi: &Rational,
    eps: f64,
    tol: f64,
    cfg: &EvalConfig,
) -> Result<BmoWitness, SingularityError> {
    let class = classify(xi, &AlphaSpec::Exact(alpha.clone()))?;
    if class.kind != SingKind::A {
        return Err(SingularityError::NotTypeA(format!(
            "classification of {xi} at alpha = {alpha} is type B"
        )));
    }

    let param = AlphaParam::from_exact(alpha, cfg.bits)?;
    let xi_f = Scalar::to_f64(xi);
    let cells = 4096;
    let mut working = None;
    let mut eps_work = eps;
    let floor = (eps / 1024.0).max(2e-4);
    while eps_work >= floor {
        let left = integrate_tilde(xi_f - eps_work, xi_f, cells, &param, cfg)?;
        let right = integrate_tilde(xi_f, xi_f + eps_work, cells, &param, cfg)?;
        if left * right < 0.0 {
            working = Some((eps_work, left, right));
            break;
        }
        eps_work *= 0.5;
    }
    let Some((eps, left, right)) = working else {
        return Err(SingularityError::NotTypeA(format!(
            "one-sided integrals share sign down to scale {floor:e}"
        )));
    };

    // Fix the endpoint on the side whose integral carries the sign of the
    // total and bisect the other offset: that functional runs from the
    // opposite-signed one-sided integral to the total, so it crosses zero.
    // Increments accumulate telescopically at a resolution matching
    // `cells` per eps.
    let total = left + right;
    if total == 0.0 {
        return Ok(BmoWitness {
            x_minus: xi_f - eps,
            x_plus: xi_f + eps,
            integral_value: 0.0,
        });
    }
    let fixed_minus = total.signum() != left.signum();
    let (mut lo, mut hi) = (0.0f64, eps);
    let mut acc = if fixed_minus { left } else { right };
    // `acc` is g(lo); bisect on s.
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let seg_cells = (((mid - lo) / eps * cells as f64).ceil() as usize).max(64);
        let inc = if fixed_minus {
            integrate_tilde(xi_f + lo, xi_f + mid, seg_cells, &param, cfg)?
        } else {
            integrate_tilde(xi_f - mid, xi_f - lo, seg_cells, &param, cfg)?
        };
        let g_mid = acc + inc;
        let (x_minus, x_plus) = if fixed_minus {
            (xi_f - eps, xi_f + mid)
        } else {
            (xi_f - mid, xi_f + eps)
        };
        if g_mid.abs() <= tol * (x_plus - x_minus) {
            return Ok(BmoWitness {
                x_minus,
                x_plus,
                integral_value: g_mid,
            });
        }
        if g_mid.signum() == acc.signum() {
            lo = mid;
            acc = g_mid;
        } else {
            hi = mid;
        }
    }
    Err(SingularityError::Unconverged(format!(
        "no vanishing interval to tolerance {tol} at eps = {eps}"
    )))
}
