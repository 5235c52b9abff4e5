//! Solves mu = A[K, mu] + g on the circle with a weakly singular kernel
//! scaled to row-sum norm 0.5: direct solve with residual check, Neumann
//! series comparison, and the bootstrap identity at several orders.

use fredholm_metric::kernels::Kernel;
use fredholm_metric::operator::{solve_direct, solve_neumann, verify_bootstrap, NystromSystem};
use fredholm_metric::regularity::Datum;
use fredholm_metric::space::build_circle;
use fredholm_metric::Result;

fn main() -> Result<()> {
    let space = build_circle(200, 1.0)?;
    let kernel = Kernel::riesz(0.5)?;
    let system = NystromSystem::assemble(&space, &kernel)?.scaled_to_norm(0.5)?;
    println!(
        "assembled {} on {}: row-sum norm {:.3}",
        kernel.describe(),
        space.label(),
        system.row_sum_norm()
    );

    let g = Datum::Coordinate(0).evaluate(&space)?;
    let direct = solve_direct(&system, &g)?;
    println!(
        "direct solve: residual {:.3e}, condition estimate {:.3}",
        direct.residual_inf,
        direct.condition_estimate.unwrap_or(f64::NAN)
    );

    let neumann = solve_neumann(&system, &g, 1e-12, 1000)?;
    let diff = neumann
        .mu
        .iter()
        .zip(&direct.mu)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0_f64, f64::max);
    println!(
        "Neumann series: {} terms, residual {:.3e}, max difference vs direct {:.3e}",
        neumann.neumann_terms.unwrap_or(0),
        neumann.residual_inf,
        diff
    );

    for r in [1u32, 2, 5] {
        let deviation = verify_bootstrap(&system, &direct.mu, &g, r)?;
        println!("bootstrap order {r}: max deviation {deviation:.3e}");
    }

    // An unscaled kernel with norm above one still solves directly, but
    // the series diverges and is refused.
    let raw = NystromSystem::assemble(&space, &Kernel::riesz(0.0)?.scaled(4.0)?)?;
    println!("unscaled norm {:.3}:", raw.row_sum_norm());
    println!("  direct residual {:.3e}", solve_direct(&raw, &g)?.residual_inf);
    match solve_neumann(&raw, &g, 1e-12, 1000) {
        Err(e) => println!("  Neumann refused: {e}"),
        Ok(_) => println!("  unexpected convergence"),
    }
    Ok(())
}
