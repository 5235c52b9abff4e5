//! Estimates upper Ahlfors constants: the circle against exponent 1, the
//! Cantor sampling against ln 2 / ln 3, and the annulus (strong) variant
//! on both. Prints the worst measure-to-power ratios found.

use fredholm_metric::ahlfors::{estimate_strong_upper_ahlfors, estimate_upper_ahlfors};
use fredholm_metric::space::{build_cantor, build_circle, cantor_exponent};
use fredholm_metric::Result;

fn main() -> Result<()> {
    let circle = build_circle(512, 1.0)?;
    let grid = circle.default_radius_grid();
    let upper = estimate_upper_ahlfors(&circle, 1.0, &grid, None, Some(100.0))?;
    println!(
        "circle: c_upper = {:.4} (ceiling 100, passed = {})",
        upper.c_upper, upper.passed
    );
    for pair in upper.worst_pairs.iter().take(3) {
        println!(
            "  node {:>3}: ball radius {:.4} has measure ratio {:.4}",
            pair.node, pair.radius, pair.ratio
        );
    }

    let strong = estimate_strong_upper_ahlfors(&circle, 1.0, &grid, None, Some(100.0))?;
    println!(
        "circle annuli: c_strong = {:.4} (passed = {})",
        strong.c_strong.unwrap_or(f64::NAN),
        strong.passed
    );

    let cantor = build_cantor(8)?;
    let ups = cantor_exponent();
    let cgrid = cantor.default_radius_grid();
    let report = estimate_upper_ahlfors(&cantor, ups, &cgrid, None, Some(100.0))?;
    println!(
        "cantor level 8 at exponent {:.4}: c_upper = {:.4} (passed = {})",
        ups, report.c_upper, report.passed
    );

    // Against the wrong exponent the constant blows up with refinement.
    let wrong = estimate_upper_ahlfors(&cantor, 1.0, &cgrid, None, None)?;
    println!("cantor tested against exponent 1: c_upper = {:.2}", wrong.c_upper);
    Ok(())
}
