//! Numerical evaluation of the Wilton and Brjuno series.
//!
//! The Wilton function is the alternating series
//! `sum_j (-1)^j beta_{j-1}(x) log(1/x_j)` over the folded orbit of x;
//! the Brjuno series is the same sum with all positive signs, and the
//! q-series `sum_n (-1)^n log(q_{n+1}) / q_n` is its uniformly-close
//! companion built from the convergent denominators.
//!
//! There is no computable a-priori bound on the series tail (the tail
//! factor is the function itself, which is unbounded), so adaptive
//! evaluation truncates at the first K with
//! `beta_K * (1 + |log x_{K+1}|) < tol` and reports that quantity as the
//! error estimate. The functional equation
//! `W(x) = -log x_0 - x_0 W(A x_0)` acts as the correctness oracle for
//! this rule: two independent evaluations must agree to a few tol.
//!
//! Orbits hitting 0 (rational inputs) make the series genuinely
//! divergent; this is reported as a signed infinity with a flag, never
//! as an error.

use crate::dyadic::{precision_bits_from_env, Dyadic, DEFAULT_PRECISION_BITS};
use crate::dynamics::{folded_step, orbit, reduce_initial, AlphaParam, DynamicsError, Scalar};

/// Tolerance, truncation cap and working precision of float-mode
/// evaluation.
#[derive(Debug, Clone)]
pub struct EvalConfig {
    pub tol: f64,
    pub kmax: usize,
    pub bits: u32,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            tol: 1e-8,
            kmax: 200,
            bits: DEFAULT_PRECISION_BITS,
        }
    }
}

impl EvalConfig {
    /// Default configuration with the precision override from the
    /// environment applied.
    pub fn from_env() -> Self {
        EvalConfig {
            bits: precision_bits_from_env(),
            ..EvalConfig::default()
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }
}

/// Result of an adaptive evaluation.
#[derive(Debug, Clone)]
pub struct WiltonValue {
    pub value: f64,
    /// Truncation bound at the stopping index; infinite when the orbit
    /// hit 0 and the series diverges.
    pub err_est: f64,
    pub k_used: usize,
    pub hit_zero: bool,
    /// False when `kmax` was exhausted before the bound dropped below tol.
    pub converged: bool,
}

/// Result of a fixed-depth partial sum.
#[derive(Debug, Clone)]
pub struct SeriesPartial {
    pub value: f64,
    pub k_used: usize,
    pub hit_zero: bool,
    /// Float mode ran out of precision before the requested depth.
    pub capped: bool,
}

fn signed_infinity(sign: f64) -> f64 {
    if sign >= 0.0 {
        f64::INFINITY
    } else {
        f64::NEG_INFINITY
    }
}

/// Partial sum to depth K of the Wilton (alternating = true) or Brjuno
/// (alternating = false) series, over exact or float scalars.
fn series_partial<S: Scalar>(
    x: &S,
    alpha: &AlphaParam<S>,
    k: usize,
    alternating: bool,
) -> Result<SeriesPartial, DynamicsError> {
    let (x0, _, _) = reduce_initial(x, alpha);
    if x0.is_zero() {
        return Ok(SeriesPartial {
            value: f64::INFINITY,
            k_used: 0,
            hit_zero: true,
            capped: false,
        });
    }
    let mut sum = -x0.to_f64().ln();
    let mut beta = x0.clone();
    let mut cur = x0;
    let mut sign = 1.0f64;
    for j in 1..=k {
        let (next, _) = folded_step(&cur, alpha)?;
        if alternating {
            sign = -sign;
        }
        if next.is_zero() {
            return Ok(SeriesPartial {
                value: signed_infinity(sign),
                k_used: j,
                hit_zero: true,
                capped: false,
            });
        }
        sum += sign * beta.to_f64() * -next.to_f64().ln();
        beta = beta.mul(&next);
        if beta.precision_floor() || next.precision_floor() {
            return Ok(SeriesPartial {
                value: sum,
                k_used: j,
                hit_zero: false,
                capped: true,
            });
        }
        cur = next;
    }
    Ok(SeriesPartial {
        value: sum,
        k_used: k,
        hit_zero: false,
        capped: false,
    })
}

/// Wilton partial sum `W^(K)`.
pub fn wilton_partial<S: Scalar>(
    x: &S,
    alpha: &AlphaParam<S>,
    k: usize,
) -> Result<SeriesPartial, DynamicsError> {
    series_partial(x, alpha, k, true)
}

/// Brjuno partial sum (all-positive signs; nondecreasing in K).
pub fn brjuno_partial<S: Scalar>(
    x: &S,
    alpha: &AlphaParam<S>,
    k: usize,
) -> Result<SeriesPartial, DynamicsError> {
    series_partial(x, alpha, k, false)
}

/// Adaptive Wilton evaluation: stop at the first K where
/// `beta_K (1 + |log x_(K+1)|) < tol`, reporting that bound as err_est.
pub fn wilton_eval(
    x: &Dyadic,
    alpha: &AlphaParam<Dyadic>,
    cfg: &EvalConfig,
) -> Result<WiltonValue, DynamicsError> {
    assert!(cfg.tol > 0.0, "tolerance must be positive");
    let (x0, _, _) = reduce_initial(x, alpha);
    if x0.is_zero() {
        return Ok(WiltonValue {
            value: f64::INFINITY,
            err_est: f64::INFINITY,
            k_used: 0,
            hit_zero: true,
            converged: false,
        });
    }

    let mut sum = -x0.to_f64().ln();
    let mut beta = x0.clone();
    let mut cur = x0;
    let mut sign = 1.0f64;
    let mut k = 0usize;
    loop {
        let (next, _) = folded_step(&cur, alpha)?;
        let next_sign = -sign;
        if next.is_zero() {
            return Ok(WiltonValue {
                value: signed_infinity(next_sign),
                err_est: f64::INFINITY,
                k_used: k,
                hit_zero: true,
                converged: false,
            });
        }
        let log_next = -next.to_f64().ln();
        let bound = beta.to_f64() * (1.0 + log_next.abs());
        if bound < cfg.tol {
            return Ok(WiltonValue {
                value: sum,
                err_est: bound,
                k_used: k,
                hit_zero: false,
                converged: true,
            });
        }
        if k >= cfg.kmax {
            return Ok(WiltonValue {
                value: sum,
                err_est: bound,
                k_used: k,
                hit_zero: false,
                converged: false,
            });
        }
        sign = next_sign;
        sum += sign * beta.to_f64() * log_next;
        beta = beta.mul(&next);
        k += 1;
        if beta.precision_floor() {
            // Beta under-ran the working precision; the bound here is far
            // below any realistic tolerance.
            let bound = beta.to_f64();
            return Ok(WiltonValue {
                value: sum,
                err_est: bound,
                k_used: k,
                hit_zero: false,
                converged: bound < cfg.tol,
            });
        }
        cur = next;
    }
}

/// One-shot evaluation at f64 coordinates.
pub fn wilton_eval_at(x: f64, alpha: f64, cfg: &EvalConfig) -> Result<WiltonValue, DynamicsError> {
    let param = AlphaParam::from_f64(alpha, cfg.bits)?;
    wilton_eval(&Dyadic::from_f64(x, cfg.bits), &param, cfg)
}

/// Partial sum of the q-series `sum_n (-1)^n log(q_{n+1})/q_n` built on
/// the convergent denominators of the folded orbit.
pub fn q_series_partial<S: Scalar>(
    x: &S,
    alpha: &AlphaParam<S>,
    k: usize,
) -> Result<SeriesPartial, DynamicsError> {
    let trace = orbit(x, alpha, k + 1)?;
    let available = trace.len().saturating_sub(2); // largest n with q_{n+1} defined
    let hit_zero = trace.terminated_at_zero.is_some() && available < k;
    let capped = trace.precision_capped && available < k;
    let mut sum = 0.0;
    let mut sign = 1.0;
    let last = available.min(k);
    for n in 0..=last {
        let term = trace.steps[n + 1].log_q * (-trace.steps[n].log_q).exp();
        sum += sign * term;
        sign = -sign;
    }
    Ok(SeriesPartial {
        value: sum,
        k_used: last,
        hit_zero,
        capped,
    })
}

/// Diagnostic record for the convergence of the q-series along the Gauss
/// expansion: the partial-sum path, the oscillation of its tail window,
/// and a bounded-horizon verdict.
#[derive(Debug, Clone)]
pub struct WiltonConditionDiag {
    pub partial_sums: Vec<f64>,
    pub tail_oscillation: f64,
    /// Heuristic: tail oscillation under 1e-6 at the inspected horizon.
    pub convergent: bool,
    pub horizon: usize,
}

/// Convergence diagnostic of the Wilton condition (alpha = 1 digits).
pub fn wilton_condition_diag<S: Scalar>(
    x: &S,
    k: usize,
) -> Result<WiltonConditionDiag, DynamicsError> {
    let one = x.one_like();
    let alpha = AlphaParam::new(one)?;
    let trace = orbit(x, &alpha, k + 1)?;
    let available = trace.len().saturating_sub(2);
    let mut sums = Vec::with_capacity(available + 1);
    let mut sum = 0.0;
    let mut sign = 1.0;
    for n in 0..=available.min(k) {
        sum += sign * trace.steps[n + 1].log_q * (-trace.steps[n].log_q).exp();
        sign = -sign;
        sums.push(sum);
    }
    let window = sums.len().min((sums.len() / 4).max(10));
    let tail = &sums[sums.len().saturating_sub(window)..];
    let osc = tail
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let tail_oscillation = if tail.len() >= 2 { osc.1 - osc.0 } else { 0.0 };
    Ok(WiltonConditionDiag {
        horizon: sums.len().saturating_sub(1),
        partial_sums: sums,
        tail_oscillation,
        convergent: tail_oscillation < 1e-6,
    })
}

/// Composite-midpoint quadrature of the Wilton function over (a, b).
/// Nodes landing on divergent (rational-orbit) points are jittered by a
/// small fraction of the cell width.
pub fn integrate_wilton(
    a: f64,
    b: f64,
    cells: usize,
    alpha: &AlphaParam<Dyadic>,
    cfg: &EvalConfig,
) -> Result<f64, DynamicsError> {
    assert!(cells >= 1 && b > a);
    let width = (b - a) / cells as f64;
    let mut acc = 0.0;
    for i in 0..cells {
        let node = a + (i as f64 + 0.5) * width;
        acc += eval_with_jitter(node, width, alpha, cfg)?.0.value;
    }
    Ok(acc * width)
}

/// Evaluate at a node, jittering by cell_width/1024 (up to 3 times) if
/// the orbit terminates. Returns the value and whether jitter was used.
pub fn eval_with_jitter(
    node: f64,
    cell_width: f64,
    alpha: &AlphaParam<Dyadic>,
    cfg: &EvalConfig,
) -> Result<(WiltonValue, bool), DynamicsError> {
    let mut value = wilton_eval(&Dyadic::from_f64(node, cfg.bits), alpha, cfg)?;
    if !value.hit_zero {
        return Ok((value, false));
    }
    for j in 1..=3 {
        let shifted = node + j as f64 * cell_width / 1024.0;
        value = wilton_eval(&Dyadic::from_f64(shifted, cfg.bits), alpha, cfg)?;
        if !value.hit_zero {
            return Ok((value, true));
        }
    }
    Ok((value, true))
}

/// Near-zero integral `int_0^x W` via composite midpoint quadrature;
/// compares against the leading behaviour `-x log x + x`.
pub fn integral_near_zero(
    alpha: &AlphaParam<Dyadic>,
    x_upper: f64,
    cells: usize,
    cfg: &EvalConfig,
) -> Result<f64, DynamicsError> {
    if !(x_upper > 0.0 && x_upper <= 0.1) {
        return Err(DynamicsError::Domain(format!(
            "near-zero integral expects 0 < x <= 0.1, got {x_upper}"
        )));
    }
    integrate_wilton(0.0, x_upper, cells, alpha, cfg)
}

/// One emitted sample of a function graph.
#[derive(Debug, Clone)]
pub struct GridRow {
    pub x: f64,
    pub value: f64,
    pub err_est: f64,
    pub k_used: usize,
    /// 0 = clean, 1 = node jittered off a divergent point, 2 = divergent
    /// even after jitter.
    pub flag: u8,
}

/// Midpoint-sampled graph of the Wilton function over (a, b), N cells,
/// in deterministic input order.
pub fn grid_emit(
    alpha: &AlphaParam<Dyadic>,
    a: f64,
    b: f64,
    n: usize,
    cfg: &EvalConfig,
) -> Result<Vec<GridRow>, DynamicsError> {
    if b <= a || n < 2 {
        return Err(DynamicsError::Domain("grid needs a < b and N >= 2".into()));
    }
    let width = (b - a) / n as f64;
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let x = a + (i as f64 + 0.5) * width;
        let (v, jittered) = eval_with_jitter(x, width, alpha, cfg)?;
        let flag = if v.hit_zero {
            2
        } else if jittered {
            1
        } else {
            0
        };
        rows.push(GridRow {
            x,
            value: v.value,
            err_est: v.err_est,
            k_used: v.k_used,
            flag,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::rng::SplitMix64;

    const BITS: u32 = 128;

    fn alpha_f(a: f64) -> AlphaParam<Dyadic> {
        AlphaParam::from_f64(a, BITS).unwrap()
    }

    /// Closed form at the golden fixed point: W_1(g) = -log(g)/(1 + g).
    fn golden_wilton_oracle() -> f64 {
        let g = crate::dynamics::GOLDEN;
        -g.ln() / (1.0 + g)
    }

    #[test]
    fn wilton_partial_golden_closed_forms() {
        let g = Dyadic::golden_conjugate(BITS);
        let alpha = alpha_f(1.0);
        let gf = crate::dynamics::GOLDEN;

        // K = 0: single term -log(x_0).
        let p0 = wilton_partial(&g, &alpha, 0).unwrap();
        assert!((p0.value - -gf.ln()).abs() < 1e-14);

        // K = 1: -log(g) (1 - g).
        let p1 = wilton_partial(&g, &alpha, 1).unwrap();
        assert!((p1.value - -gf.ln() * (1.0 - gf)).abs() < 1e-14);

        // K large: geometric limit -log(g)/(1+g).
        let p = wilton_partial(&g, &alpha, 80).unwrap();
        assert!((p.value - golden_wilton_oracle()).abs() < 1e-14);
    }

    #[test]
    fn brjuno_partial_golden_and_domination() {
        let g = Dyadic::golden_conjugate(BITS);
        let alpha = alpha_f(1.0);
        let gf = crate::dynamics::GOLDEN;

        // Geometric limit with positive ratio: -log(g)/(1-g).
        let b = brjuno_partial(&g, &alpha, 120).unwrap();
        assert!((b.value - -gf.ln() / (1.0 - gf)).abs() < 1e-13);

        // K = 0 coincides with the Wilton partial.
        let b0 = brjuno_partial(&g, &alpha, 0).unwrap();
        let w0 = wilton_partial(&g, &alpha, 0).unwrap();
        assert_eq!(b0.value, w0.value);

        // Termwise domination at every depth, and monotonicity in K.
        let x = Dyadic::from_f64(0.5371890232285, BITS);
        let alpha45 = alpha_f(0.45);
        let mut prev = 0.0;
        for k in 0..30 {
            let b = brjuno_partial(&x, &alpha45, k).unwrap();
            let w = wilton_partial(&x, &alpha45, k).unwrap();
            assert!(b.value >= w.value - 1e-15, "k = {k}");
            assert!(b.value >= prev - 1e-15, "k = {k}");
            prev = b.value;
        }
    }

    #[test]
    fn wilton_eval_golden_oracle() {
        let cfg = EvalConfig::default();
        let g = Dyadic::golden_conjugate(BITS);
        let v = wilton_eval(&g, &alpha_f(1.0), &cfg).unwrap();
        assert!(v.converged && !v.hit_zero);
        assert!(
            (v.value - golden_wilton_oracle()).abs() < 1e-6,
            "value {} oracle {}",
            v.value,
            golden_wilton_oracle()
        );
    }

    #[test]
    fn functional_equation_residual_oracle() {
        // |W(x) + log x_0 + x_0 W(A x_0)| small at seeded random points;
        // the two evaluations run independent adaptive truncations.
        let cfg = EvalConfig::default();
        let mut rng = SplitMix64::new(0x57AB1E);
        for &a in &[0.4, 0.5, 0.55] {
            let alpha = alpha_f(a);
            for _ in 0..100 {
                let x = Dyadic::from_f64(rng.next_f64(), BITS);
                let (x0, _, _) = reduce_initial(&x, &alpha);
                if x0.is_zero() {
                    continue;
                }
                let w = wilton_eval(&x0, &alpha, &cfg).unwrap();
                let (x1, _) = folded_step(&x0, &alpha).unwrap();
                if x1.is_zero() {
                    continue;
                }
                let w1 = wilton_eval(&x1, &alpha, &cfg).unwrap();
                let residual = w.value + x0.to_f64().ln() + x0.to_f64() * w1.value;
                assert!(
                    residual.abs() <= 3.0 * cfg.tol,
                    "alpha = {a}, residual = {residual:e}"
                );
            }
        }
    }

    #[test]
    fn symmetry_about_one_half_of_the_reduction() {
        let cfg = EvalConfig::default();
        let mut rng = SplitMix64::new(0x5EED5);
        for &a in &[0.4, 0.45, 0.5] {
            let alpha = alpha_f(a);
            let lim = a.min(1.0 - a);
            for _ in 0..200 {
                let x = rng.next_f64() * lim;
                if x == 0.0 {
                    continue;
                }
                let xd = Dyadic::from_f64(x, BITS);
                let sym = Dyadic::one(BITS).sub(&xd); // exact 1 - x
                let w = wilton_eval(&xd, &alpha, &cfg).unwrap();
                let w_sym = wilton_eval(&sym, &alpha, &cfg).unwrap();
                assert!(
                    (w.value - w_sym.value).abs() <= 3.0 * cfg.tol,
                    "alpha = {a}, x = {x}"
                );
            }
        }
    }

    #[test]
    fn alternating_tail_sandwich_where_terms_decrease() {
        // Where consecutive beta-weighted terms decrease, even partials
        // bound the sum from above and odd partials from below.
        let alpha = alpha_f(1.0);
        let x = Dyadic::from_f64(0.37193218305271, BITS);
        let mut partials = Vec::new();
        for k in 0..36 {
            partials.push(wilton_partial(&x, &alpha, k).unwrap().value);
        }
        let terms: Vec<f64> = partials.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        for k in (0..terms.len().saturating_sub(3)).step_by(2) {
            let decreasing = (0..3).all(|i| terms[k + i + 1] <= terms[k + i]);
            if decreasing {
                // W^(2k+1) <= W^(2k+3) <= W^(2k+2) <= W^(2k).
                assert!(partials[k + 1] <= partials[k + 3] + 1e-15);
                assert!(partials[k + 3] <= partials[k + 2] + 1e-15);
                assert!(partials[k + 2] <= partials[k] + 1e-15);
            }
        }
    }

    #[test]
    fn rational_orbit_reports_divergence() {
        // Exact mode sees the rational termination directly.
        let p = wilton_partial(
            &rat(2, 5),
            &AlphaParam::from_rational(rat(1, 2)).unwrap(),
            10,
        )
        .unwrap();
        assert!(p.hit_zero);
        assert!(p.value.is_infinite());

        // Float mode hits an exact zero when the seed is dyadic and the
        // orbit terminates within representable steps (1/2 -> 0).
        let cfg = EvalConfig::default();
        let alpha = AlphaParam::from_exact(&rat(1, 2), BITS).unwrap();
        let v = wilton_eval(&Dyadic::from_f64(0.5, BITS), &alpha, &cfg).unwrap();
        assert!(v.hit_zero);
        assert!(v.value.is_infinite());
    }

    #[test]
    fn q_series_examples() {
        // Golden point: q_n Fibonacci, first term log(q_1)/q_0 = log(1) = 0;
        // alternating partial sums settle quickly.
        let g = Dyadic::golden_conjugate(BITS);
        let alpha = alpha_f(1.0);
        let s0 = q_series_partial(&g, &alpha, 0).unwrap();
        assert!((s0.value - 0.0).abs() < 1e-12);
        let deep = q_series_partial(&g, &alpha, 60).unwrap();
        let deeper = q_series_partial(&g, &alpha, 70).unwrap();
        assert!((deep.value - deeper.value).abs() < 1e-9);

        // Uniform closeness to the Wilton value (bounded-difference probe).
        let cfg = EvalConfig::default();
        let mut rng = SplitMix64::new(0xCAFE);
        for &a in &[0.4, 0.5] {
            let alpha = alpha_f(a);
            for _ in 0..1000 {
                let x = Dyadic::from_f64(rng.next_f64(), BITS);
                let w = wilton_eval(&x, &alpha, &cfg).unwrap();
                if w.hit_zero {
                    continue;
                }
                let s = q_series_partial(&x, &alpha, 60).unwrap();
                assert!((w.value - s.value).abs() <= 10.0, "alpha = {a}");
            }
        }
    }

    #[test]
    fn q_series_term_shape_bound() {
        // |term_n| = log(q_{n+1})/q_n <= (1+alpha) alpha_bar rho^(n-1) log(q_{n+1}).
        let cfg = EvalConfig::default();
        let mut rng = SplitMix64::new(0xBEEF);
        for &a in &[0.4, 0.5, 0.8] {
            let alpha = alpha_f(a);
            let rho = crate::dynamics::contraction_rate(a).unwrap();
            let abar = a.max(1.0 - a);
            for _ in 0..50 {
                let x = Dyadic::from_f64(rng.next_f64(), cfg.bits);
                let trace = orbit(&x, &alpha, 40).unwrap();
                for n in 2..trace.len().saturating_sub(1) {
                    let term = trace.steps[n + 1].log_q * (-trace.steps[n].log_q).exp();
                    let cap = (1.0 + a) * abar * rho.powi(n as i32 - 1) * trace.steps[n + 1].log_q;
                    assert!(term <= cap * (1.0 + 1e-9), "alpha = {a}, n = {n}");
                }
            }
        }
    }

    #[test]
    fn wilton_condition_diagnostics() {
        // Golden point: convergent verdict with vanishing tail.
        let g = Dyadic::golden_conjugate(BITS);
        let d = wilton_condition_diag(&g, 60).unwrap();
        assert!(d.convergent);
        assert!(d.tail_oscillation < 1e-8);

        // Random (Diophantine-like) points: convergent at the horizon.
        let mut rng = SplitMix64::new(0xD10);
        for _ in 0..20 {
            let x = Dyadic::from_f64(rng.next_f64(), BITS);
            let d = wilton_condition_diag(&x, 60).unwrap();
            assert!(d.convergent, "tail oscillation {}", d.tail_oscillation);
        }

        // Liouville-like prefix: a huge digit late in the expansion spikes
        // the tail oscillation at a horizon that sees it.
        let mut digits = vec![num_bigint::BigInt::from(1); 6];
        digits.push(num_bigint::BigInt::from(100_000_000i64));
        digits.push(num_bigint::BigInt::from(2));
        let x = crate::exact::RcfExpansion { digits }.value();
        let d = wilton_condition_diag(&x, 8).unwrap();
        assert!(!d.convergent);
        assert!(d.tail_oscillation > 1.0, "spike {}", d.tail_oscillation);
    }

    #[test]
    fn integral_near_zero_leading_term() {
        let cfg = EvalConfig::default();
        let alpha = alpha_f(0.5);
        let mut prev_rel = f64::INFINITY;
        for &x in &[1e-2, 1e-3, 1e-4] {
            let integral = integral_near_zero(&alpha, x, 4096, &cfg).unwrap();
            let leading = -x * x.ln() + x;
            let rel = (integral - leading).abs() / leading;
            assert!(rel < prev_rel, "x = {x}: rel {rel} vs prev {prev_rel}");
            assert!(rel < 0.1, "x = {x}: rel {rel}");
            prev_rel = rel;
        }
    }

    #[test]
    fn gauss_map_one_sided_integrals_differ_in_sign_structure() {
        // For alpha = 1 the function behaves like -log|x| with a sign flip
        // across 0: the left integral of W over (-x, 0) is close to
        // x log x + O(x), so its magnitude matches the right side but the
        // sign of the inner average flips.
        let cfg = EvalConfig::default();
        let alpha = alpha_f(1.0);
        let x = 1e-3;
        let right = integrate_wilton(0.0, x, 2048, &alpha, &cfg).unwrap();
        let left = integrate_wilton(-x, 0.0, 2048, &alpha, &cfg).unwrap();
        // right ~ -x log x + x > 0; left ~ x log x + O(x) < 0.
        assert!(right > 0.0 && left < 0.0);
        assert!(
            (right + left).abs() < 0.35 * right,
            "asymmetric parts {right} {left}"
        );

        // For alpha = 1/2 the function is even around 0: same signs.
        let alpha_half = alpha_f(0.5);
        let left_half = integrate_wilton(-x, 0.0, 2048, &alpha_half, &cfg).unwrap();
        let right_half = integrate_wilton(0.0, x, 2048, &alpha_half, &cfg).unwrap();
        assert!(left_half > 0.0 && right_half > 0.0);
        assert!((left_half - right_half).abs() < 0.05 * right_half);
    }

    #[test]
    fn grid_emit_flags_and_determinism() {
        let cfg = EvalConfig::default();
        let alpha = alpha_f(0.4);
        let rows = grid_emit(&alpha, 0.0, 1.0, 512, &cfg).unwrap();
        assert_eq!(rows.len(), 512);
        assert!(rows.iter().all(|r| r.value.is_finite()));
        let rows2 = grid_emit(&alpha, 0.0, 1.0, 512, &cfg).unwrap();
        for (a, b) in rows.iter().zip(rows2.iter()) {
            assert_eq!(a.value.to_bits(), b.value.to_bits());
        }
    }

    #[test]
    fn grid_shows_blowup_near_two_thirds_for_one_third() {
        // The graph over (0.6, 0.72) spikes near x = 2/3 at alpha = 1/3.
        let cfg = EvalConfig::default();
        let alpha = alpha_f(1.0 / 3.0);
        let rows = grid_emit(&alpha, 0.6, 0.72, 2048, &cfg).unwrap();
        let near: Vec<&GridRow> = rows
            .iter()
            .filter(|r| (r.x - 2.0 / 3.0).abs() < 0.004)
            .collect();
        let far: Vec<&GridRow> = rows
            .iter()
            .filter(|r| (r.x - 2.0 / 3.0).abs() > 0.03)
            .collect();
        let near_max = near.iter().map(|r| r.value.abs()).fold(0.0, f64::max);
        let far_median = {
            let mut vals: Vec<f64> = far.iter().map(|r| r.value.abs()).collect();
            vals.sort_by(f64::total_cmp);
            vals[vals.len() / 2]
        };
        assert!(
            near_max > far_median + 2.0,
            "near max {near_max}, far median {far_median}"
        );
    }
}
