//! The Hardy norm as an area integral, compared with Σ|c_k|².

use hardy_poafd::{littlewood_paley_norm2, szego, DiscFunction, KernelParam};
use num_complex::Complex64;

fn main() -> hardy_poafd::Result<()> {
    let z = DiscFunction::from_coeffs(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)])?;
    let poly = DiscFunction::from_coeffs((0..9).map(|k| Complex64::new(1.0 / (k + 1) as f64, (k as f64).sin())).collect())?;
    let kernel = szego(&KernelParam::simple(Complex64::new(0.5, 0.0))?, 128);

    for (name, f) in [("z", &z), ("degree-8 polynomial", &poly), ("K_0.5", &kernel)] {
        println!("{name}: coefficients {:.12}", f.norm2());
        for nodes in [16, 64, 256] {
            let q = littlewood_paley_norm2(f, nodes, nodes)?;
            println!("  {nodes:>3}x{nodes:<3} nodes: {q:.12} (error {:.1e})", (q - f.norm2()).abs());
        }
    }
    Ok(())
}
