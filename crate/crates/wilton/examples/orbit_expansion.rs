//! Exact orbit expansion: digits, convergents and beta products of one
//! seed under two parameters, plus the folded/unfolded semiconjugacy.
//!
//! ```text
//! cargo run --release -p wilton --example orbit_expansion
//! ```

use wilton::dynamics::{contraction_rate, orbit, semiconjugacy_check, AlphaParam};
use wilton::exact::rat;

fn main() {
    let x = rat(11, 20);
    for (p, q) in [(2i64, 5i64), (1, 2)] {
        let alpha = AlphaParam::from_rational(rat(p, q)).unwrap();
        let trace = orbit(&x, &alpha, 12).unwrap();
        println!("orbit of 11/20 under the alpha = {p}/{q} folded map:");
        println!(
            "{:>3} {:>4} {:>4} {:>12} {:>8} {:>8} {:>12}",
            "n", "a", "eps", "x_n", "p_n", "q_n", "beta_n"
        );
        for s in &trace.steps {
            println!(
                "{:>3} {:>4} {:>4} {:>12} {:>8} {:>8} {:>12}",
                s.index,
                s.digit.a.to_string(),
                s.digit.eps,
                s.x.to_string(),
                s.p.to_string(),
                s.q.to_string(),
                s.beta.to_string(),
            );
        }
        match trace.terminated_at_zero {
            Some(n) => println!("terminates at step {n}: the last convergent recovers the seed\n"),
            None => println!(),
        }
    }

    // The unfolded map keeps signs; taking absolute values recovers the
    // folded orbit step by step.
    let alpha = AlphaParam::from_rational(rat(2, 5)).unwrap();
    let ok = semiconjugacy_check(&rat(-3, 5), &alpha, 8, 0.0).unwrap();
    println!("semiconjugacy |T^k(-3/5)| = A^k(3/5) under alpha = 2/5: {ok}");

    println!("\ncontraction rates of the beta products:");
    for a in [0.8, 0.5, 0.3] {
        println!("  alpha = {a}: rho = {:.10}", contraction_rate(a).unwrap());
    }
}
