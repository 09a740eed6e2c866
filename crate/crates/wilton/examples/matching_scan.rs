//! Scan of matching structure over small-denominator rationals:
//! pseudocenters, exponents from the two independent routes, the index
//! histogram, and the u/t tails squeezing onto 1 - g.
//!
//! ```text
//! cargo run --release -p wilton --example matching_scan
//! ```

use std::collections::BTreeMap;
use wilton::dynamics::Scalar;
use wilton::exact::rat;
use wilton::matching::{
    exponents_from_pseudocenter, find_matching_exponents, local_form, pseudocenters_up_to, t_value,
    u_value,
};

fn main() {
    let pcs = pseudocenters_up_to(40);
    println!("{} pseudocenters with denominator <= 40", pcs.len());

    let mut by_index: BTreeMap<i64, usize> = BTreeMap::new();
    for r in &pcs {
        let (n, m) = exponents_from_pseudocenter(r).unwrap();
        let d = find_matching_exponents(r)
            .unwrap()
            .expect("rational parameters always match");
        assert_eq!((d.n, d.m), (n, m), "routes disagree at {r}");
        *by_index.entry(d.index).or_default() += 1;
    }
    println!("index histogram (digit sums == matrix identity at every pseudocenter):");
    for (index, count) in &by_index {
        println!("  index {index:>3}: {count} pseudocenters");
    }

    println!("\nfirst pseudocenters with their exponents:");
    for r in pcs.iter().take(10) {
        let d = find_matching_exponents(r).unwrap().unwrap();
        println!("  {r:>6}: (n, m) = ({}, {}), index {}", d.n, d.m, d.index);
    }

    // Local form at the pseudocenter 2/5: the weight b and branch maps.
    let lf = local_form(&rat(2, 5)).unwrap();
    let (p, q) = &lf.b_coeffs;
    println!(
        "\nlocal form at 2/5: b(x) = |{q} x - {p}|, window {} (~{:.4}), branch depths ({}, {})",
        lf.window,
        Scalar::to_f64(&lf.window),
        lf.depth_left,
        lf.depth_right
    );

    println!("\nu_m < 1 - g < t_m, both tails accumulating at 1 - g = 0.38196601...:");
    for m in 1..=8 {
        println!(
            "  m = {m}: u = {:>12} = {:.10}, t = {:>12} = {:.10}",
            u_value(m).to_string(),
            Scalar::to_f64(&u_value(m)),
            t_value(m).to_string(),
            Scalar::to_f64(&t_value(m)),
        );
    }
}
