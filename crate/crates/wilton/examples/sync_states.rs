//! The four-state synchronization of an alpha-orbit against the
//! nearest-integer orbit: the worked trace of 11/20, a long exact trace
//! with state statistics, and the inequality monitors.
//!
//! ```text
//! cargo run --release -p wilton --example sync_states
//! ```

use num_bigint::BigInt;
use wilton::dynamics::AlphaParam;
use wilton::exact::{rat, Rational};
use wilton::rng::SplitMix64;
use wilton::sync::{monitor_report, sync_trace, validate_trace, SyncState};

fn main() {
    let alpha = AlphaParam::from_rational(rat(2, 5)).unwrap();
    let trace = sync_trace(&rat(11, 20), &alpha, 2, 0.0).unwrap();
    println!("trace of x = 11/20 under (A_2/5, A_1/2):");
    println!(
        "{:>3} {:>6} {:>10} {:>10} {:>6} {:>6}",
        "i", "state", "x_i", "x'_i", "q_i", "q'_i"
    );
    for s in &trace.steps {
        println!(
            "{:>3} {:>6} {:>10} {:>10} {:>6} {:>6}",
            s.index,
            s.state.to_string(),
            s.x.to_string(),
            s.x_half.to_string(),
            s.q.to_string(),
            s.q_half.to_string()
        );
    }

    // A long exact trace from a 256-bit rational seed.
    let mut rng = SplitMix64::new(0x51AE);
    let mut den = BigInt::from(rng.next_u64());
    let mut num = BigInt::from(rng.next_u64());
    for _ in 0..3 {
        den = (den << 64) | BigInt::from(rng.next_u64());
        num = (num << 64) | BigInt::from(rng.next_u64());
    }
    let x = Rational::new(num % &den, den);
    let alpha = AlphaParam::from_rational(rat(39, 100)).unwrap();
    let trace = sync_trace(&x, &alpha, 60, 0.0).unwrap();
    let mut counts = [0usize; 4];
    for s in &trace.steps {
        counts[match s.state {
            SyncState::A => 0,
            SyncState::B => 1,
            SyncState::C => 2,
            SyncState::D => 3,
        }] += 1;
    }
    println!(
        "\nrandom 256-bit seed at alpha = 39/100, {} steps: A = {}, B = {}, C = {}, D = {}",
        trace.steps.len(),
        counts[0],
        counts[1],
        counts[2],
        counts[3]
    );

    let report = validate_trace(&trace);
    println!(
        "diagram validation: {} ({} B-runs)",
        if report.is_valid() {
            "all transitions within the edge set"
        } else {
            "VIOLATIONS"
        },
        report.b_runs
    );
    let m = monitor_report(&trace);
    println!(
        "monitors: hurwitz max ratio {:.12} (bound 0.618034...), max |log(q/q')| {:.6} (bound {:.6}), {} gap cases",
        m.hurwitz_max_ratio,
        m.max_log_ratio,
        (wilton::dynamics::GOLDEN + 2.0).ln(),
        m.gap_cases
    );
    assert!(report.is_valid() && m.is_valid());
}
