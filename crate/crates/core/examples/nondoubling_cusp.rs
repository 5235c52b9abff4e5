//! The interval with density exp(-1/x) is upper 1-Ahlfors regular, yet its
//! measure is not doubling: near the cusp, doubling a ball's radius can
//! multiply its mass by an astronomical factor.

use fredholm_metric::ahlfors::{ball_measure, estimate_upper_ahlfors};
use fredholm_metric::space::{build_weighted_interval, WeightProfile};
use fredholm_metric::Result;

fn main() -> Result<()> {
    let space = build_weighted_interval(1000, WeightProfile::ExpCusp)?;
    let grid = space.default_radius_grid();
    let report = estimate_upper_ahlfors(&space, 1.0, &grid, None, None)?;
    println!("upper 1-Ahlfors constant: {:.4}", report.c_upper);

    println!("doubling ratios near the cusp (node, radius, ratio):");
    let mut worst = 0.0_f64;
    for node in [1usize, 2, 4, 8, 16] {
        let r = 2.0 * space.mesh();
        let inner = ball_measure(&space, node, r);
        if inner == 0.0 {
            continue;
        }
        let ratio = ball_measure(&space, node, 2.0 * r) / inner;
        worst = worst.max(ratio);
        println!("  x = {:.4}  r = {:.4}  ratio = {:.3e}", space.point(node)[0], r, ratio);
    }
    println!("largest observed doubling ratio: {worst:.3e}");
    println!("a doubling measure would keep this bounded by a fixed constant");
    Ok(())
}
