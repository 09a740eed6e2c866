//! Singularity classification at rational points: the exact A/B decision,
//! the one-sided average probe that corroborates it, and the
//! vanishing-integral witness that certifies mean-oscillation failure at
//! type A parameters.
//!
//! ```text
//! cargo run --release -p wilton --example singularity_probe
//! ```

use wilton::eval::EvalConfig;
use wilton::exact::rat;
use wilton::singularity::{average_probe, bmo_witness, classify, AlphaSpec, SingKind};

fn main() {
    let cfg = EvalConfig {
        tol: 1e-7,
        ..EvalConfig::from_env()
    };
    let scales = [4e-3, 2e-3, 1e-3];

    for (xi, alpha, label) in [
        (rat(0, 1), rat(1, 2), "xi = 0 at alpha = 1/2"),
        (rat(1, 3), rat(1, 3), "xi = alpha = 1/3"),
        (rat(2, 5), rat(2, 5), "xi = alpha = 2/5"),
        (rat(2, 3), rat(2, 3), "xi = alpha = 2/3"),
    ] {
        let t = classify(&xi, &AlphaSpec::Exact(alpha.clone())).unwrap();
        let kind = match t.kind {
            SingKind::A => "A",
            SingKind::B => "B",
        };
        println!("{label}: type {kind} ({:?})", t.provenance);

        let xi_f = wilton::dynamics::Scalar::to_f64(&xi);
        let a_f = wilton::dynamics::Scalar::to_f64(&alpha);
        let probes = average_probe(a_f, xi_f, &scales, 2048, &cfg).unwrap();
        for p in &probes {
            println!(
                "    h = {:>7.0e}: left mean {:>+9.4}, right mean {:>+9.4}",
                p.h, p.left_avg, p.right_avg
            );
        }

        match bmo_witness(&alpha, &xi, 0.05, 1e-3, &cfg) {
            Ok(w) => println!(
                "    witness: integral over ({:.6}, {:.6}) = {:+.2e} (vanishes to 1e-3 of the width)",
                w.x_minus, w.x_plus, w.integral_value
            ),
            Err(e) => println!("    witness: {e}"),
        }
        println!();
    }
}
