//! Measures kernel class membership on a sampling: the potential norm
//! `sup |K| d^s1` and the first-argument smoothness seminorm at (s2, s3).
//! Finite, mesh-stable values support membership; growth across meshes
//! denies it.

use fredholm_metric::kernels::{class_membership_report, Kernel};
use fredholm_metric::space::build_circle;
use fredholm_metric::Result;

fn main() -> Result<()> {
    let kernel = Kernel::riesz(0.5)?;
    println!("kernel {}, claimed class (0.5, 1.5, 1.0):", kernel.describe());
    for n in [128usize, 256, 512] {
        let space = build_circle(n, 1.0)?;
        let report = class_membership_report(&kernel, &space, 0.5, 1.5, 1.0)?;
        println!(
            "  n = {n:>3}: potential norm {:.4}  smoothness seminorm {:.4}  class norm {:.4}{}",
            report.potential_norm,
            report.smoothness_seminorm.unwrap_or(f64::NAN),
            report.class_norm,
            if report.truncated { "  (sampled scan)" } else { "" }
        );
    }

    let logged = Kernel::log_riesz(0.5)?;
    let space = build_circle(256, 1.0)?;
    let report = class_membership_report(&logged, &space, 0.5, 1.5, 1.0)?;
    println!(
        "kernel {} at the same class: class norm {:.4}",
        logged.describe(),
        report.class_norm
    );
    println!("the log factor inflates the constant but stays in every wider class");

    // Against a class it does not belong to, the seminorm grows with n.
    println!("riesz(0.5) tested against the too-strong class (0.2, 1.5, 1.0):");
    for n in [128usize, 256] {
        let space = build_circle(n, 1.0)?;
        let report = class_membership_report(&kernel, &space, 0.2, 1.5, 1.0)?;
        println!("  n = {n:>3}: potential norm {:.4} (growing)", report.potential_norm);
    }
    Ok(())
}
