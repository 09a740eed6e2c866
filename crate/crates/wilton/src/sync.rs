//! Synchronization of an alpha-orbit against the nearest-integer orbit.
//!
//! For alpha in [1-g, 1/2], the pair of folded orbits of one seed under
//! the alpha-map and the 1/2-map, together with their convergent
//! denominators, is always in one of four states:
//!
//! - A: `x = x'` and `q = q'`
//! - B: `x = 1 - x'`, `x'` in (alpha, 1/2], and `q - q' = q_{i-1}`
//! - C: `1/x - 1 = 1/(1 - x')` and `q - q' = -q'_{i-1}`
//! - D: `1/x - 1 = 1/x'` and `q = q'`
//!
//! with transitions restricted to A->A, A->B, B->C, B->D, C->C, C->D,
//! D->A, D->B, and every B opening a run B -> C^(m-1) -> D whose length
//! is read off the position of x' among the tails t_m = [0; 2, 1^(2m)].
//! The q-relations are exact integer statements; classification tests
//! them first and uses x-relations (exact for rational seeds, tolerance
//! for float mode) only to split states sharing a q-relation.
//!
//! The monitors check the inequalities the synchronization argument
//! rests on: the nearest-integer ratio bound q'_i/q'_{i+1} <= g, the
//! two-sided bound 1-g <= q/q' <= 2 (equivalently |log(q/q')| <=
//! log(g+2)), and the reciprocal-gap bound when |q - q'| = q'_{i-1}.
//! Golden-ratio comparisons are done exactly on integers via
//! a/b <= g  iff  a^2 + ab <= b^2.

use crate::dyadic::Dyadic;
use crate::dynamics::{orbit, AlphaParam, DynamicsError, OrbitTrace, Scalar, GOLDEN};
use crate::eval::{wilton_eval, EvalConfig};
use crate::matching::t_value;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SyncState {
    A,
    B,
    C,
    D,
}

impl fmt::Display for SyncState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SyncState::A => "A",
            SyncState::B => "B",
            SyncState::C => "C",
            SyncState::D => "D",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SyncError {
    Domain(String),
    /// A step fit none of the four states. In exact mode this would
    /// falsify the classification and is treated as a hard failure.
    NoStateMatch {
        index: usize,
        detail: String,
    },
    Dynamics(DynamicsError),
}

impl fmt::Display for SyncError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SyncError::Domain(m) => write!(f, "domain error: {m}"),
            SyncError::NoStateMatch { index, detail } => {
                write!(f, "no state matches step {index}: {detail}")
            }
            SyncError::Dynamics(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for SyncError {}

impl From<DynamicsError> for SyncError {
    fn from(e: DynamicsError) -> Self {
        SyncError::Dynamics(e)
    }
}

/// One classified index of the joint orbit.
#[derive(Debug, Clone)]
pub struct SyncStep<S: Scalar> {
    pub index: usize,
    pub state: SyncState,
    pub x: S,
    pub x_half: S,
    pub q: BigInt,
    pub q_half: BigInt,
    /// Beta product of the alpha-orbit at this index.
    pub beta: S,
}

#[derive(Debug, Clone)]
pub struct SyncTrace<S: Scalar> {
    pub alpha: AlphaParam<S>,
    pub steps: Vec<SyncStep<S>>,
    /// True when one of the orbits terminated (or hit the precision
    /// floor) before the requested horizon.
    pub truncated: bool,
}

fn half_like<S: Scalar>(proto: &S) -> S {
    S::from_int(&BigInt::from(2), proto).recip()
}

/// Run both folded orbits of one seed and classify every index. `tol`
/// governs the x-relation tests for inexact scalars; exact scalars
/// compare exactly. The trace stops before any orbit reaches 0.
pub fn sync_trace<S: Scalar>(
    x: &S,
    alpha: &AlphaParam<S>,
    max_steps: usize,
    tol: f64,
) -> Result<SyncTrace<S>, SyncError> {
    let a = alpha.to_f64();
    if !(1.0 - GOLDEN - 1e-12..=0.5 + 1e-12).contains(&a) {
        return Err(SyncError::Domain(format!(
            "synchronization requires alpha in [1-g, 1/2], got {a}"
        )));
    }
    let half = AlphaParam::new(half_like(x))?;
    let ta = orbit(x, alpha, max_steps)?;
    let th = orbit(x, &half, max_steps)?;

    let usable = |t: &OrbitTrace<S>| match t.terminated_at_zero {
        Some(i) => i, // exclude the zero step itself
        None => t.len(),
    };
    let mut len = usable(&ta).min(usable(&th)).min(max_steps + 1);

    // Float mode: the joint dynamics is that of the seed, a dyadic
    // rational. The q-relations stay observable while the denominators
    // fit the working precision (x-relations drown in amplified rounding
    // at the 1e-9 scale past q^2 ~ 2^(bits-33)) and while the seed's own
    // expansion is still running (its convergent denominators never
    // exceed its dyadic denominator, so q may reach frac+1 bits at the
    // terminating step but not beyond). Past either horizon the trace is
    // truncated with a flag.
    if let (Some(bits), Some(frac)) = (x.precision_bits(), x.effective_frac_bits()) {
        let q_cap = (((bits - 33) / 2).min(frac + 1)) as u64;
        for i in 0..len {
            if ta.steps[i].q.bits() > q_cap || th.steps[i].q.bits() > q_cap {
                len = i;
                break;
            }
        }
    }
    let truncated = len < max_steps + 1;

    let mut steps = Vec::with_capacity(len);
    for i in 0..len {
        let sa = &ta.steps[i];
        let sh = &th.steps[i];
        let q_prev = if i == 0 {
            BigInt::zero()
        } else {
            ta.steps[i - 1].q.clone()
        };
        let q_half_prev = if i == 0 {
            BigInt::zero()
        } else {
            th.steps[i - 1].q.clone()
        };
        let prev_state = steps.last().map(|s: &SyncStep<S>| s.state);
        let state = classify_step(
            alpha,
            prev_state,
            &sa.x,
            &sh.x,
            &sa.q,
            &sh.q,
            &q_prev,
            &q_half_prev,
            tol,
        )
        .ok_or_else(|| SyncError::NoStateMatch {
            index: i,
            detail: format!(
                "after {prev_state:?}: x = {:?}, x' = {:?}, q = {}, q' = {}, q_prev = {q_prev}, q'_prev = {q_half_prev}",
                sa.x, sh.x, sa.q, sh.q
            ),
        })?;
        steps.push(SyncStep {
            index: i,
            state,
            x: sa.x.clone(),
            x_half: sh.x.clone(),
            q: sa.q.clone(),
            q_half: sh.q.clone(),
            beta: sa.beta.clone(),
        });
    }
    Ok(SyncTrace {
        alpha: alpha.clone(),
        steps,
        truncated,
    })
}

#[allow(clippy::too_many_arguments)]
fn classify_step<S: Scalar>(
    alpha: &AlphaParam<S>,
    prev: Option<SyncState>,
    x: &S,
    x_half: &S,
    q: &BigInt,
    q_half: &BigInt,
    q_prev: &BigInt,
    q_half_prev: &BigInt,
    tol: f64,
) -> Option<SyncState> {
    let one = x.one_like();

    let a_relation = |x: &S, x_half: &S| x.eq_within(x_half, tol);
    let b_relation = |x: &S, x_half: &S| {
        let in_range = x_half > &alpha.value && x_half <= &half_like(x)
            || (!S::EXACT
                && x_half.to_f64() > alpha.to_f64() - tol
                && x_half.to_f64() <= 0.5 + tol);
        in_range && x.eq_within(&one.sub(x_half), tol)
    };
    let c_relation = |x: &S, x_half: &S| {
        if x.is_zero() {
            return false;
        }
        let denom = one.sub(x_half);
        !denom.is_zero() && x.recip().sub(&one).eq_within(&denom.recip(), tol)
    };
    let d_relation = |x: &S, x_half: &S| {
        !x.is_zero() && !x_half.is_zero() && x.recip().sub(&one).eq_within(&x_half.recip(), tol)
    };

    // The automaton is inductive: from A or D (and at the start) the next
    // state is A or B; from B or C it is C or D. Within each candidate
    // pair the exact integer q-relations differ by a positive q_{i-1} or
    // q'_{i-1}, so they decide, and the x-relation verifies the decision.
    // The only degenerate split is the start index, where both q-gaps are
    // 0 and the x-relations separate (they coincide only at the fixed
    // pair x = x' = 1/2, a genuine A).
    match prev {
        None | Some(SyncState::A) | Some(SyncState::D) => {
            if q == q_half && a_relation(x, x_half) {
                return Some(SyncState::A);
            }
            if (q - q_half) == *q_prev && b_relation(x, x_half) {
                return Some(SyncState::B);
            }
            None
        }
        Some(SyncState::B) | Some(SyncState::C) => {
            if (q - q_half) == -q_half_prev && c_relation(x, x_half) {
                return Some(SyncState::C);
            }
            if q == q_half && d_relation(x, x_half) {
                return Some(SyncState::D);
            }
            None
        }
    }
}

/// Exact golden-ratio comparison a/b <= g for nonnegative integers.
fn le_golden(a: &BigInt, b: &BigInt) -> bool {
    a * a + a * b <= b * b
}

/// Structural validation report: edge-set conformance, per-state range
/// bounds, the q-gap inequality, and B-run shapes.
#[derive(Debug, Clone)]
pub struct SyncReport {
    pub steps: usize,
    pub b_runs: usize,
    pub violations: Vec<String>,
}

impl SyncReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

const EDGES: [(SyncState, SyncState); 8] = [
    (SyncState::A, SyncState::A),
    (SyncState::A, SyncState::B),
    (SyncState::B, SyncState::C),
    (SyncState::B, SyncState::D),
    (SyncState::C, SyncState::C),
    (SyncState::C, SyncState::D),
    (SyncState::D, SyncState::A),
    (SyncState::D, SyncState::B),
];

/// Validate a trace against the state diagram and its side conditions.
/// Violations are itemized, not thrown.
pub fn validate_trace<S: Scalar>(trace: &SyncTrace<S>) -> SyncReport {
    let mut violations = Vec::new();
    let steps = &trace.steps;
    let mut b_runs = 0usize;

    if let Some(first) = steps.first() {
        if first.state != SyncState::A && first.state != SyncState::B {
            violations.push(format!("initial state {} not in {{A, B}}", first.state));
        }
    }

    for w in steps.windows(2) {
        let edge = (w[0].state, w[1].state);
        if !EDGES.contains(&edge) {
            violations.push(format!(
                "transition {} -> {} at index {} outside the diagram",
                edge.0, edge.1, w[1].index
            ));
        }
    }

    for s in steps {
        // Range bounds carried by the B and C states.
        if s.state == SyncState::B && s.x.to_f64() < 0.5 - 1e-9 {
            violations.push(format!(
                "state B with x = {} < 1/2 at {}",
                s.x.to_f64(),
                s.index
            ));
        }
        if s.state == SyncState::C && s.x.to_f64() < 1.0 / 3.0 - 1e-9 {
            violations.push(format!(
                "state C with x = {} < 1/3 at {}",
                s.x.to_f64(),
                s.index
            ));
        }
        // |q - q'| <= q'_{i-1} at every positive index (at a B entered
        // from A or D the previous denominators coincide, so the gap
        // q_{i-1} equals q'_{i-1}; C states carry the gap q'_{i-1}).
        if s.index > 0 {
            let prev_q_half = &steps[s.index - 1].q_half;
            if (&s.q - &s.q_half).abs() > prev_q_half.clone() {
                violations.push(format!(
                    "|q - q'| = {} exceeds q'_prev = {} at {}",
                    (&s.q - &s.q_half).abs(),
                    prev_q_half,
                    s.index
                ));
            }
        }
    }

    // B-run structure: from a B at index k with x'_k in (t_m, t_{m-1}],
    // expect C^(m-1) then D. Runs cut off by the horizon are skipped.
    let mut k = 0;
    while k < steps.len() {
        if steps[k].state == SyncState::B {
            b_runs += 1;
            match expected_run_length(&steps[k].x_half) {
                Some(m) => {
                    let complete = k + m < steps.len();
                    let span = if complete { m } else { steps.len() - 1 - k };
                    for j in 1..=span {
                        let want = if j < m { SyncState::C } else { SyncState::D };
                        if steps[k + j].state != want {
                            violations.push(format!(
                                "B-run at {} (m = {m}): index {} is {}, expected {want}",
                                k,
                                k + j,
                                steps[k + j].state
                            ));
                        }
                    }
                    k += span.max(1);
                    continue;
                }
                None => violations.push(format!(
                    "B at {} with x' = {} admits no tail index",
                    k,
                    steps[k].x_half.to_f64()
                )),
            }
        }
        k += 1;
    }

    SyncReport {
        steps: steps.len(),
        b_runs,
        violations,
    }
}

/// m >= 1 with t_m < x' <= t_{m-1}, the length of the C-chain a B state
/// opens. Exact comparison for exact scalars.
fn expected_run_length<S: Scalar>(x_half: &S) -> Option<usize> {
    for m in 1..=256usize {
        let upper = S::from_rational(&t_value(m - 1), x_half);
        let lower = S::from_rational(&t_value(m), x_half);
        if x_half <= &upper && x_half > &lower {
            return Some(m);
        }
    }
    None
}

/// Inequality monitors along a trace. Violations are itemized.
#[derive(Debug, Clone)]
pub struct MonitorReport {
    /// max over i of q'_i / q'_{i+1} (f64 snapshot of an exact check).
    pub hurwitz_max_ratio: f64,
    /// max over i of |log(q_{i}/q'_{i})|.
    pub max_log_ratio: f64,
    /// Steps where |q_n - q'_n| = q'_{n-1} held (the reciprocal-gap
    /// bound applies there).
    pub gap_cases: usize,
    pub violations: Vec<String>,
}

impl MonitorReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn monitor_report<S: Scalar>(trace: &SyncTrace<S>) -> MonitorReport {
    let steps = &trace.steps;
    let mut violations = Vec::new();
    let mut hurwitz_max = 0.0f64;
    let mut max_log_ratio = 0.0f64;
    let mut gap_cases = 0usize;

    for i in 0..steps.len() {
        let s = &steps[i];
        // Hurwitz: q'_i / q'_{i+1} <= g, exactly.
        if i + 1 < steps.len() {
            let next = &steps[i + 1];
            if !le_golden(&s.q_half, &next.q_half) {
                violations.push(format!("q'_{i}/q'_{} above the golden bound", i + 1));
            }
            let ratio = big_ratio_f64(&s.q_half, &next.q_half);
            hurwitz_max = hurwitz_max.max(ratio);
        }

        // Two-sided bound 1 - g <= q/q' <= 2 (hence |log| <= log(g + 2)).
        if s.q > BigInt::from(2) * &s.q_half {
            violations.push(format!("q/q' above 2 at {i}"));
        }
        if s.q < s.q_half {
            let gap = &s.q_half - &s.q;
            if !le_golden(&gap, &s.q_half) {
                violations.push(format!("q/q' below 1 - g at {i}"));
            }
        }
        let log_ratio = big_ratio_f64(&s.q, &s.q_half).ln().abs();
        max_log_ratio = max_log_ratio.max(log_ratio);
        if log_ratio > (GOLDEN + 2.0).ln() + 1e-9 {
            violations.push(format!("|log(q/q')| above log(g+2) at {i}"));
        }

        // Reciprocal-gap bound on the |q_n - q'_n| = q'_{n-1} cases:
        // q'_{n+1} <= 4 q'_n and |1/q - 1/q'| <= 4 / (g q'_{n+1}).
        if i > 0 && i + 1 < steps.len() {
            let prev = &steps[i - 1];
            let next = &steps[i + 1];
            let gap = (&s.q - &s.q_half).abs();
            if gap == prev.q_half {
                gap_cases += 1;
                if next.q_half > BigInt::from(4) * &s.q_half {
                    violations.push(format!("q'_{} above 4 q'_{i}", i + 1));
                }
                // |1/q - 1/q'| <= 4/(g q'_{n+1})
                //  <=> g * gap * q'_{n+1} <= 4 q q'
                //  <=> 5 X^2 <= (2Y + X)^2 with X = gap q'_{n+1}, Y = 4 q q'.
                let x_term = &gap * &next.q_half;
                let y_term = BigInt::from(4) * (&s.q * &s.q_half);
                let lhs = BigInt::from(5) * (&x_term * &x_term);
                let rhs_base = BigInt::from(2) * y_term + &x_term;
                if lhs > (&rhs_base * &rhs_base) {
                    violations.push(format!("reciprocal gap bound fails at {i}"));
                }
            }
        }
    }

    MonitorReport {
        hurwitz_max_ratio: hurwitz_max,
        max_log_ratio,
        gap_cases,
        violations,
    }
}

fn big_ratio_f64(a: &BigInt, b: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    let (af, bf) = (
        a.to_f64().unwrap_or(f64::MAX),
        b.to_f64().unwrap_or(f64::MAX),
    );
    if bf == 0.0 {
        return f64::INFINITY;
    }
    af / bf
}

/// Max of q'_i/q'_{i+1} along a float nearest-integer expansion of x,
/// tracked through the ratio recurrence (no big integers).
pub fn nearest_integer_ratio_max(x: f64, steps: usize) -> f64 {
    let mut cur = {
        // reduce to [0, 1/2]
        let r = x - (x + 0.5).floor();
        r.abs()
    };
    let mut ratio = 0.0f64; // q_{-1}/q_0
    let mut max_ratio = 0.0f64;
    let mut prev_eps = 1.0f64;
    for _ in 0..steps {
        if cur < 1e-300 {
            break;
        }
        let t = 1.0 / cur;
        let a = (t + 0.5).floor();
        let eps = (t - a).signum();
        cur = (t - a).abs();
        let denom = a + prev_eps * ratio;
        ratio = 1.0 / denom;
        max_ratio = max_ratio.max(ratio);
        prev_eps = eps;
    }
    max_ratio
}

/// The per-B-state kernel of the difference series at alpha = 2/5:
/// h(x) = -log x - x log(x/(2x-1)) + log(1-x) + (1-x) log((1-x)/(2x-1))
/// for x in (1/2, 3/5), evaluated in a regrouped cancellation form near
/// the removable endpoint 1/2.
pub fn h_kernel(x: f64) -> f64 {
    assert!((0.5..0.6).contains(&x), "h defined on [1/2, 3/5), got {x}");
    let s = 2.0 * x - 1.0;
    if s < 1e-4 {
        // -log x + log(1-x) - x log x + (1-x) log(1-x) + s log s; every
        // piece has a finite limit at s -> 0+, summing to 0.
        let sls = if s == 0.0 { 0.0 } else { s * s.ln() };
        return -x.ln() + (1.0 - x).ln() - x * x.ln() + (1.0 - x) * (1.0 - x).ln() + sls;
    }
    -x.ln() - x * (x / s).ln() + (1.0 - x).ln() + (1.0 - x) * ((1.0 - x) / s).ln()
}

/// Difference series at alpha = 2/5: the signed sum of
/// (-1)^k beta_{k-1} h(x_k) over the indices k in state B of the
/// synchronized trace. Equals W_{2/5} - W_{1/2} up to the reported tail
/// bound.
///
/// The parity factor comes from telescoping the two alternating series
/// state by state: terms at A indices cancel outright, each B -> D block
/// collapses to beta_{k-1} h(x_k) carried by the (-1)^k of its entry
/// index, and at alpha = 2/5 every B run has m = 1 (a B state needs
/// x' in (alpha, 1/2] = (t_1, t_0]), so no C states ever intervene and
/// the telescoping is complete.
#[derive(Debug, Clone)]
pub struct DiffSeries {
    pub value: f64,
    /// Geometric bound on the omitted tail.
    pub tail_bound: f64,
    pub b_terms: usize,
    pub k_used: usize,
}

pub fn difference_series(x: f64, max_steps: usize, bits: u32) -> Result<DiffSeries, SyncError> {
    if !(x > 0.5 && x < 0.6) {
        return Err(SyncError::Domain(format!(
            "difference series defined for x in (1/2, 3/5), got {x}"
        )));
    }
    let alpha = AlphaParam::from_exact(&crate::exact::rat(2, 5), bits)?;
    let trace = sync_trace(&Dyadic::from_f64(x, bits), &alpha, max_steps, 1e-9)?;
    let mut value = 0.0;
    let mut b_terms = 0usize;
    for s in &trace.steps {
        if s.state == SyncState::B {
            let beta_prev = if s.index == 0 {
                1.0
            } else {
                trace.steps[s.index - 1].beta.to_f64()
            };
            let sign = if s.index % 2 == 0 { 1.0 } else { -1.0 };
            let xk = s.x.to_f64().clamp(0.5, 0.6 - f64::EPSILON);
            value += sign * beta_prev * h_kernel(xk);
            b_terms += 1;
        }
    }
    // Tail: sum of beta_j for j past the horizon, against max |h| ~ 0.79
    // and the contraction rate at alpha = 2/5.
    let beta_last = trace.steps.last().map(|s| s.beta.to_f64()).unwrap_or(0.0);
    let rho = crate::dynamics::contraction_rate(0.4).expect("0.4 in range");
    let tail_bound = 0.79 * beta_last * rho / (1.0 - rho);
    Ok(DiffSeries {
        value,
        tail_bound,
        b_terms,
        k_used: trace.steps.len().saturating_sub(1),
    })
}

/// Grid scan of max |W_alpha - W_{1/2}| over one period.
#[derive(Debug, Clone)]
pub struct SupnormScan {
    pub max_abs: f64,
    pub argmax: f64,
    pub samples: usize,
}

pub fn supnorm_scan(
    alpha: f64,
    samples: usize,
    cfg: &EvalConfig,
) -> Result<SupnormScan, SyncError> {
    if !(1.0 - GOLDEN - 1e-12..=0.5 + 1e-12).contains(&alpha) {
        return Err(SyncError::Domain(format!(
            "supnorm scan requires alpha in [1-g, 1/2], got {alpha}"
        )));
    }
    let pa = AlphaParam::from_f64(alpha, cfg.bits)?;
    let ph = AlphaParam::from_f64(0.5, cfg.bits)?;
    let mut max_abs = 0.0f64;
    let mut argmax = 0.0f64;
    let width = 1.0 / samples as f64;
    for i in 0..samples {
        let base = (i as f64 + 0.5) * width;
        // Both functions must be sampled at the same point; jitter moves
        // the node off divergent orbits of either map.
        let mut sampled = None;
        for j in 0..4 {
            let x = base + j as f64 * width / 1024.0;
            let d = Dyadic::from_f64(x, cfg.bits);
            let wa = wilton_eval(&d, &pa, cfg)?;
            let wh = wilton_eval(&d, &ph, cfg)?;
            if !wa.hit_zero && !wh.hit_zero {
                sampled = Some((x, wa.value - wh.value));
                break;
            }
        }
        if let Some((x, diff)) = sampled {
            if diff.abs() > max_abs {
                max_abs = diff.abs();
                argmax = x;
            }
        }
    }
    Ok(SupnormScan {
        max_abs,
        argmax,
        samples,
    })
}
