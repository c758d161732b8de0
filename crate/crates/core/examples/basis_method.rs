//! Non-adaptive basis method on a fixed plan, checked against the Gram system.

use hardy_poafd::basis::{basis_build, transfer_condition};
use hardy_poafd::oracle::{projection_least_squares, relative_error, GramSystem};
use hardy_poafd::{apply_l, apply_l_inverse, basis_expand, basis_invert, basis_pseudo_inverse, BasisPlan};
use hardy_poafd::{szego, DiscFunction, KernelParam};
use num_complex::Complex64;

fn main() -> hardy_poafd::Result<()> {
    let n = 256;
    let plan_points = [
        Complex64::new(0.0, 0.0),
        Complex64::new(0.5, 0.0),
        Complex64::new(0.0, 0.5),
        Complex64::new(-0.6, -0.3),
    ];
    let plan = BasisPlan::new(&plan_points)?;

    let mut f = DiscFunction::zeros(n);
    f.axpy(Complex64::new(1.0, 0.0), &szego(&KernelParam::simple(Complex64::new(0.45, 0.1))?, n));
    f.axpy(Complex64::new(0.0, 0.3), &szego(&KernelParam::simple(Complex64::new(-0.2, 0.7))?, n));

    let sys = basis_build(&plan, n)?;
    println!("transfer matrix (|A_ij|):");
    for row in sys.transfer_rows() {
        println!("  {}", row.iter().map(|a| format!("{:8.5}", a.norm())).collect::<Vec<_>>().join(" "));
    }
    println!("transfer condition estimate: {:.3e}", transfer_condition(&sys));

    let s1 = basis_expand(&f, &plan)?;
    let gram = GramSystem::build(&f, &plan_points)?;
    println!("Gram condition: {:.3e}", gram.condition());
    println!("S1 vs Gram projection: {:.2e}", relative_error(&s1, &projection_least_squares(&f, &plan_points)?));

    let s2 = basis_invert(&f, &plan)?;
    println!("L(S2) vs S1: {:.2e}", relative_error(&apply_l(&s2), &s1));

    let mut data = apply_l_inverse(&f);
    data.set(-2, Complex64::new(0.5, 0.0));
    let s3 = basis_pseudo_inverse(&data, &plan)?;
    println!("S3 == S2(L data): {}", s3 == basis_invert(&apply_l(&data), &plan)?);
    println!("|F - S1| = {:.6}", f.sub(&s1).norm());
    Ok(())
}
