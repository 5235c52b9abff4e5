//! Walks the exponent calculus: composing a smooth kernel class with a
//! potential factor under different splits of the smoothness denominator,
//! composing two pure potentials, and the smoothing order of a class.

use fredholm_metric::class_calculus::{
    compose_general, compose_potential_classes, smoothing_order, suggest_split, KernelClass,
};
use fredholm_metric::Result;

fn main() -> Result<()> {
    let class = KernelClass::new(0.6, 1.0, 1.0, 1.0)?;
    println!("first factor: {}", class.describe());
    println!("second factor: potential exponent t1 = 0.6");

    // s2' must stay below the homogeneity exponent, so the split never puts
    // the whole denominator on the first slot.
    for (s2p, s2pp) in [(0.9, 0.1), (0.8, 0.2), (0.5, 0.5), (0.2, 0.8)] {
        let out = compose_general(&class, s2p, s2pp, 0.6, true)?;
        println!(
            "  split ({s2p:.1}, {s2pp:.1}) fires case {:<4} -> {}",
            out.case.label(),
            out.class.describe()
        );
    }

    let (best_p, best_pp) = suggest_split(&class, 0.6)?;
    println!("best split for the smoothness exponent: ({best_p:.2}, {best_pp:.2})");

    // Pure potentials compose by adding their gaps to upsilon.
    for (t1, t2) in [(0.3, 0.3), (0.5, 0.5), (0.7, 0.7)] {
        let out = compose_potential_classes(t1, t2, 1.0)?;
        println!("potential {t1} composed with potential {t2}: {}", out.describe());
    }

    for (s, upsilon) in [(0.0, 1.0), (0.5, 1.0), (0.75, 1.0), (0.95, 1.0), (1.0, 2.0)] {
        let order = smoothing_order(s, upsilon)?;
        println!(
            "potential exponent {s} at homogeneity {upsilon}: {order} iterations smooth it out"
        );
    }
    Ok(())
}
