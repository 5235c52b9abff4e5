//! Checks the integral bounds that upper regularity buys: the split ball
//! bound for the Riesz integral at s < upsilon, and the localized bounds
//! in all three regimes (s below, above, and at upsilon).

use fredholm_metric::ahlfors::{
    estimate_upper_ahlfors, riesz_integral, verify_ball_bound, verify_localized_bounds,
};
use fredholm_metric::space::build_circle;
use fredholm_metric::{Result, SampledMeasureSpace};

fn main() -> Result<()> {
    let space = build_circle(256, 1.0)?;
    let grid = space.default_radius_grid();
    let c_upper = estimate_upper_ahlfors(&space, 1.0, &grid, None, None)?.c_upper;
    println!("estimated c_upper = {c_upper:.4}");

    println!("sup_x riesz_integral(x, 0.5) = {:.4}", {
        let mut sup = 0.0_f64;
        for x in 0..space.n() {
            sup = sup.max(riesz_integral(&space, x, 0.5));
        }
        sup
    });

    for s in [0.25, 0.5, 0.75] {
        for a in [0.25, 1.0] {
            let report = verify_ball_bound(&space, 1.0, s, a, c_upper)?;
            println!(
                "ball bound s = {s:.2} a = {a:.2}: sup {:.4} <= bound {:.4} ({})",
                report.measured_sup,
                report.bound_value.unwrap_or(f64::NAN),
                if report.passed { "holds" } else { "VIOLATED" }
            );
        }
    }

    let scales = SampledMeasureSpace::radius_grid(0.1, 1.0, 1.4)?;
    for s in [0.5, 1.5, 1.0] {
        let report = verify_localized_bounds(&space, 1.0, s, &scales)?;
        println!(
            "localized kind {:<16} at s = {s:.1}: sup of scaled integrals = {:.4}",
            report.kind.name(),
            report.measured_sup
        );
    }
    Ok(())
}
