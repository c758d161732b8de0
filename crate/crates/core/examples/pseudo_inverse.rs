//! Least-squares inversion of boundary data that carries co-analytic noise.

use hardy_poafd::{apply_l_inverse, solve_pseudo_inverse, szego, BoundaryFunction, KernelParam, PoafdConfig};
use num_complex::Complex64;

fn main() -> hardy_poafd::Result<()> {
    let n = 256;
    let g = szego(&KernelParam::simple(Complex64::new(0.2, -0.6))?, n);
    let mut data = apply_l_inverse(&g);
    let mut noise = BoundaryFunction::zeros(n);
    for k in 1..=6 {
        noise.set(-k, Complex64::new(0.3 / k as f64, 0.1));
    }
    data.axpy(Complex64::new(1.0, 0.0), &noise);

    let config = PoafdConfig {
        max_terms: 16,
        ..Default::default()
    };
    let r = solve_pseudo_inverse(&data, &config)?;
    println!("d_F = {:.12} (noise norm {:.12})", r.defect, noise.norm());
    println!("{:>3} {:>16} {:>16} {:>16}", "n", "|F - f_n|^2", "d_F^2", "|G - G_n|^2");
    for k in 0..=r.expansion.terms() {
        let e = r.error_decomposition(k)?;
        println!("{k:>3} {:>16.10} {:>16.10} {:>16.4e}", e.total, e.defect2, e.expansion2);
    }
    Ok(())
}
