//! Builds each sampled space and prints its basic geometry: node count,
//! mesh width, diameter, and total mass. Also round-trips a point cloud
//! through the text format.

use fredholm_metric::space::{
    build_cantor, build_circle, build_weighted_interval, cantor_exponent, load_point_cloud,
    save_point_cloud, WeightProfile,
};
use fredholm_metric::{Result, SampledMeasureSpace};

fn describe(space: &SampledMeasureSpace) {
    println!(
        "{:<24} n = {:>4}  mesh = {:.5}  diameter = {:.4}  mass = {:.6}",
        space.label(),
        space.n(),
        space.mesh(),
        space.diameter(),
        space.total_mass()
    );
}

fn main() -> Result<()> {
    describe(&build_circle(256, 1.0)?);
    describe(&build_circle(64, 2.5)?);

    let cantor = build_cantor(8)?;
    describe(&cantor);
    println!("  Cantor homogeneity exponent: {:.6}", cantor_exponent());

    describe(&build_weighted_interval(500, WeightProfile::Uniform)?);
    describe(&build_weighted_interval(500, WeightProfile::ExpCusp)?);

    let custom = SampledMeasureSpace::from_points(
        vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]],
        vec![0.25; 4],
        "unit-square-corners",
    )?;
    describe(&custom);

    let path = std::env::temp_dir().join("fredholm-metric-cloud.txt");
    save_point_cloud(&custom, &path)?;
    let reloaded = load_point_cloud(&path)?;
    println!(
        "round-tripped '{}' through {} ({} nodes)",
        reloaded.label(),
        path.display(),
        reloaded.n()
    );
    std::fs::remove_file(&path).ok();
    Ok(())
}
