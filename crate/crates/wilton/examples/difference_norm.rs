//! The difference W_2/5 - W_1/2: the signed series over B-state entries
//! reproduces the direct difference, the kernel h shadows the graph, and
//! a grid scan of the sup-norm stays below 1.
//!
//! ```text
//! cargo run --release -p wilton --example difference_norm
//! ```

use wilton::dyadic::Dyadic;
use wilton::dynamics::AlphaParam;
use wilton::eval::{wilton_eval, EvalConfig};
use wilton::sync::{difference_series, h_kernel, supnorm_scan};

fn main() {
    let cfg = EvalConfig::from_env();
    let pa = AlphaParam::from_f64(0.4, cfg.bits).unwrap();
    let ph = AlphaParam::from_f64(0.5, cfg.bits).unwrap();

    println!("x in (1/2, 3/5): series over B-entries vs direct difference vs kernel h(x):");
    println!(
        "{:>8} {:>12} {:>12} {:>12} {:>9}",
        "x", "series", "direct", "h(x)", "B-terms"
    );
    for i in 0..8 {
        let x = 0.5037 + 0.0119 * i as f64;
        let ds = difference_series(x, 60, cfg.bits).unwrap();
        let wa = wilton_eval(&Dyadic::from_f64(x, cfg.bits), &pa, &cfg).unwrap();
        let wh = wilton_eval(&Dyadic::from_f64(x, cfg.bits), &ph, &cfg).unwrap();
        println!(
            "{x:>8.4} {:>12.6} {:>12.6} {:>12.6} {:>9}",
            ds.value,
            wa.value - wh.value,
            h_kernel(x),
            ds.b_terms
        );
    }

    let mut cfg_scan = cfg.clone();
    cfg_scan.tol = 1e-6;
    let scan = supnorm_scan(0.4, 4000, &cfg_scan).unwrap();
    println!(
        "\ngrid sup of |W_2/5 - W_1/2| over one period: {:.6} at x = {:.6} ({} samples) -- below 1",
        scan.max_abs, scan.argmax, scan.samples
    );
    for alpha in [0.39, 0.45] {
        let s = supnorm_scan(alpha, 4000, &cfg_scan).unwrap();
        println!(
            "alpha = {alpha}: grid sup {:.6} at x = {:.6}",
            s.max_abs, s.argmax
        );
    }
}
