//! A repeated selection switches to the derivative kernel.

use hardy_poafd::oracle::{finite_difference_kernel_derivative, relative_error};
use hardy_poafd::{poafd_expand, szego, KernelParam, PoafdConfig, SelectionGrid};
use num_complex::Complex64;

fn main() -> hardy_poafd::Result<()> {
    let n = 256;
    let q0 = Complex64::new(0.4, 0.3);

    for m in 1..=3 {
        let h = [1e-5, 1e-4, 1e-3][m - 1];
        let fd = finite_difference_kernel_derivative(q0, m, h, n)?;
        println!("order {m}: finite-difference mismatch {:.2e}", relative_error(&fd, &szego(&KernelParam::new(q0, m)?, n)));
    }

    // F = K_q0 + d/dq̄ K_q0 lives in the span of the first two multiple kernels at q0
    let mut f = szego(&KernelParam::new(q0, 0)?, n);
    f.axpy(Complex64::new(1.0, 0.0), &szego(&KernelParam::new(q0, 1)?, n));

    // a coarse dictionary that contains q0
    let grid = SelectionGrid::from_points(
        vec![q0, Complex64::new(-0.5, 0.2), Complex64::new(0.1, -0.7), Complex64::new(-0.3, -0.4)],
        0.95,
    )?;
    let config = PoafdConfig {
        grid,
        refine_steps: 0,
        max_terms: 4,
        ..Default::default()
    };
    let r = poafd_expand(&f, &config)?;
    for (i, p) in r.params().iter().enumerate() {
        println!("step {}: q = {:.4}, order {}, residual {:.2e}", i + 1, p.q, p.order, r.residual_norms[i + 1]);
    }
    Ok(())
}
