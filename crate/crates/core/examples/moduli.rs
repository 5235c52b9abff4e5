//! Moduli of continuity: the admissibility conditions, the capped
//! log-power modulus, the moduli gained through the operator, and the
//! tail bound every admissible modulus satisfies.

use fredholm_metric::class_calculus::{
    check_modulus_conditions, default_argument_grid, modulus_omega, modulus_varpi, Modulus,
};
use fredholm_metric::regularity::{check_remark_om4, holder_seminorm, Datum};
use fredholm_metric::space::build_circle;
use fredholm_metric::Result;

fn main() -> Result<()> {
    let grid = default_argument_grid(1e-4, 1.0);
    for modulus in [Modulus::power(0.5)?, Modulus::power(1.0)?, Modulus::log_power(0.5)?] {
        let report = check_modulus_conditions(&modulus, &grid)?;
        println!(
            "{:<40} sup dilation ratio {:.3} passed = {}",
            modulus.describe(),
            report.sup_ratio,
            report.passed
        );
    }

    // r^2 is not a modulus here: its dilation ratio grows linearly.
    let quadratic = check_modulus_conditions(&Modulus::power(2.0)?, &grid)?;
    println!(
        "{:<40} sup dilation ratio {:.3} passed = {}",
        "r^2 (negative control)", quadratic.sup_ratio, quadratic.passed
    );

    // The moduli the solution gains from a kernel class.
    let varpi = modulus_varpi(0.5, 1.5, 1.0, 1.0, false)?;
    let omega = modulus_omega(0.5, 1.5, 1.0, 1.0, 1.0, false)?;
    println!("gained modulus for class (0.5, 1.5, 1.0): {}", varpi.describe());
    println!("improved with beta = 1:                    {}", omega.describe());

    // Any bounded function obeys the tail bound: pairs at distance >= a
    // contribute at most (2 / omega(a)) sup |f| to the seminorm.
    let space = build_circle(256, 1.0)?;
    let f = Datum::Coordinate(1).evaluate(&space)?;
    let modulus = Modulus::power(0.5)?;
    let estimate = holder_seminorm(&f, &space, &modulus, None)?;
    println!(
        "coordinate datum under r^0.5: seminorm {:.4} attained at pair {:?}",
        estimate.seminorm, estimate.argmax_pair
    );
    for a in [0.25, 0.5, 1.0] {
        let tail = check_remark_om4(&f, &space, &modulus, a)?;
        println!(
            "tail bound at a = {a:.2}: {:.4} <= {:.4} (slack {:.4})",
            tail.left, tail.right, tail.slack
        );
    }
    Ok(())
}
