//! Expand a sum of three Szegő kernels and watch the residual fall.

use hardy_poafd::{poafd_expand, szego, DiscFunction, KernelParam, PoafdConfig};
use num_complex::Complex64;

fn main() -> hardy_poafd::Result<()> {
    let n = 256;
    let atoms = [
        (Complex64::new(1.0, 0.0), Complex64::new(0.6, 0.2)),
        (Complex64::new(0.0, -0.7), Complex64::new(-0.3, 0.5)),
        (Complex64::new(0.4, 0.4), Complex64::new(0.1, -0.8)),
    ];
    let mut f = DiscFunction::zeros(n);
    for (a, q) in atoms {
        f.axpy(a, &szego(&KernelParam::simple(q)?, n));
    }

    let config = PoafdConfig {
        max_terms: 12,
        ..Default::default()
    };
    let r = poafd_expand(&f, &config)?;

    println!("{:>3} {:>22} {:>5} {:>12} {:>12}", "n", "q", "order", "|coeff|", "residual");
    for (i, (p, c)) in r.params().iter().zip(&r.coefficients).enumerate() {
        println!(
            "{:>3} {:>10.5} {:>+10.5}i {:>5} {:>12.4e} {:>12.4e}",
            i + 1,
            p.q.re,
            p.q.im,
            p.order,
            c.norm(),
            r.residual_norms[i + 1]
        );
    }
    println!("|F| = {:.6}, relative residual after {} terms: {:.2e}", f.norm(), r.terms(), r.final_residual() / f.norm());
    Ok(())
}
