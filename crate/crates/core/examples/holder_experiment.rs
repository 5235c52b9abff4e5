//! Runs the multi-mesh Holder regularity experiments. The solution of
//! mu = A[K, mu] + g inherits a modulus of continuity from the kernel
//! class and the datum; the experiment measures the corresponding
//! seminorm on refining meshes and checks that it stays put.

use fredholm_metric::kernels::Kernel;
use fredholm_metric::regularity::{
    run_continuity_experiment, run_holder_experiment, run_improved_holder_experiment,
    shared_kernel, Datum,
};
use fredholm_metric::space::{build_circle, SampledMeasureSpace};
use fredholm_metric::Result;

fn main() -> Result<()> {
    let spaces: Vec<SampledMeasureSpace> = [128usize, 256, 512]
        .iter()
        .map(|&n| build_circle(n, 1.0))
        .collect::<Result<_>>()?;
    let kernel = Kernel::riesz(0.5)?;
    let source = shared_kernel(&kernel);
    let datum = Datum::DistPower { base: 0, theta: 0.5 };

    let continuity = run_continuity_experiment(&spaces, &source, &datum, Some(0.5))?;
    println!("continuity: neighbor jumps {:?}", continuity.max_jumps);
    println!("  shrinking = {}", continuity.passed);

    let holder = run_holder_experiment(
        &spaces,
        1.0,
        0.5,
        1.5,
        1.0,
        0.5,
        &source,
        &datum,
        false,
        Some(0.5),
    )?;
    println!(
        "holder: predicted modulus {} seminorms {:?}",
        holder.predicted_modulus.describe(),
        holder.seminorms
    );
    println!("  growth ratios {:?} passed = {}", holder.growth_ratios, holder.passed);

    let improved = run_improved_holder_experiment(
        &spaces,
        1.0,
        0.5,
        1.5,
        1.0,
        1.0,
        0.5,
        &source,
        &datum,
        false,
        Some(0.5),
    )?;
    println!(
        "improved: predicted modulus {} (hypothesis seminorms {:?})",
        improved.predicted_modulus.describe(),
        improved.hypothesis_seminorms.as_deref().unwrap_or(&[])
    );
    println!(
        "  seminorms {:?} passed = {}",
        improved.seminorms, improved.passed
    );

    // Negative control: a step datum is not continuous, so its solution
    // seminorm grows under refinement and the experiment fails.
    let control = run_holder_experiment(
        &spaces,
        1.0,
        0.5,
        1.5,
        1.0,
        0.5,
        &source,
        &Datum::Step(0),
        false,
        Some(0.5),
    )?;
    println!(
        "step datum control: growth ratios {:?} passed = {}",
        control.growth_ratios, control.passed
    );
    Ok(())
}
