//! The improved regularity experiment measures its own hypothesis: the
//! operator applied to the constant one function must carry the improved
//! modulus stably across meshes. This example engineers a kernel whose
//! action on constants oscillates at the mesh scale and shows the
//! experiment refusing to certify anything.
//!
//! Experiments take a kernel source (a builder per mesh) precisely so a
//! tabulated kernel like this one can follow the refinement.

use fredholm_metric::kernels::{Kernel, KernelMatrix};
use fredholm_metric::regularity::{run_improved_holder_experiment, Datum};
use fredholm_metric::space::{build_circle, SampledMeasureSpace};
use fredholm_metric::Result;

fn parity_kernel(space: &SampledMeasureSpace) -> Result<Kernel> {
    let n = space.n();
    let mut values = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                values[i * n + j] = if i % 2 == 0 { 1.0 } else { -1.0 };
            }
        }
    }
    Ok(Kernel::Tabulated(KernelMatrix::new(n, values, space.label())?))
}

fn main() -> Result<()> {
    let spaces: Vec<SampledMeasureSpace> = [64usize, 128, 256]
        .iter()
        .map(|&n| build_circle(n, 1.0))
        .collect::<Result<_>>()?;

    let result = run_improved_holder_experiment(
        &spaces,
        1.0,
        0.0,
        1.0,
        1.0,
        1.0,
        0.5,
        &parity_kernel,
        &Datum::Constant(1.0),
        false,
        Some(0.5),
    );

    match result {
        Err(e) => println!("experiment refused, as it must be: {e}"),
        Ok(report) => println!("unexpected pass: {report:?}"),
    }
    Ok(())
}
