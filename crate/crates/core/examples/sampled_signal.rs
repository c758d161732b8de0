//! Pseudo-invert uniformly sampled boundary data read from CSV text.

use hardy_poafd::io::{ingest_str, Signal};
use hardy_poafd::{solve_pseudo_inverse, PoafdConfig};
use std::f64::consts::TAU;

fn main() -> hardy_poafd::Result<()> {
    // f(t) = Re(1 / (1 - 0.6 e^{it})) + small co-analytic wiggle
    let m = 512;
    let mut text = String::from("# re,im\n");
    for j in 0..m {
        let t = TAU * j as f64 / m as f64;
        let z = num_complex::Complex64::from_polar(0.6, t);
        let v = (1.0 / (1.0 - z)).re + 0.05 * (-3.0 * t).cos();
        text.push_str(&format!("{v},{}\n", 0.05 * (-3.0 * t).sin()));
    }
    let Signal::Boundary(data) = ingest_str(&text, 128)? else {
        unreachable!("samples always give boundary data");
    };
    println!("band |k| <= {}, |f| = {:.8}", data.trunc(), data.norm());

    let r = solve_pseudo_inverse(&data, &PoafdConfig { max_terms: 16, ..Default::default() })?;
    println!("distance to the analytic range: {:.8}", r.defect);
    for (i, p) in r.expansion.params().iter().enumerate().take(6) {
        println!("term {}: q = {:.4}, residual {:.3e}", i + 1, p.q, r.expansion.residual_norms[i + 1]);
    }
    Ok(())
}
