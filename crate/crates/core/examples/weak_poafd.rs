//! Weak selection accepts the first grid point within a factor ρ of the best.

use hardy_poafd::verify::random_kernel_sum;
use hardy_poafd::{poafd_expand, PoafdConfig, SelectionGrid, SelectionMode};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hardy_poafd::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let f = random_kernel_sum(&mut rng, 8, 0.9, 256);
    let grid = SelectionGrid::polar(32, 64, 0.95)?;

    let modes = [
        ("full", SelectionMode::Full),
        ("weak 0.99", SelectionMode::Weak { rho: 0.99 }),
        ("weak 0.9", SelectionMode::Weak { rho: 0.9 }),
        ("weak 0.5", SelectionMode::Weak { rho: 0.5 }),
    ];
    for (name, mode) in modes {
        let config = PoafdConfig {
            mode,
            grid: grid.clone(),
            max_terms: 20,
            tol_residual: 0.0,
            ..Default::default()
        };
        let r = poafd_expand(&f, &config)?;
        let worst = r
            .objective_trace
            .iter()
            .zip(&r.supremum_trace)
            .map(|(a, s)| a / s)
            .fold(f64::INFINITY, f64::min);
        println!(
            "{name:>9}: residual after 5/10/20 terms {:.3e} {:.3e} {:.3e}, min accepted/sup {worst:.3}",
            r.residual_norms[5], r.residual_norms[10], r.residual_norms[20]
        );
    }
    Ok(())
}
