//! AB ∪ BA against AB alone and against AA, and unequal sizes |A| != |B|.

use group_decomp::group::{build_cyclic, build_dihedral};
use group_decomp::montecarlo::{sweep, SweepSettings, Variant};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let groups = [("C1024", build_cyclic(1024)?), ("D1024", build_dihedral(512)?)];
    for (name, g) in &groups {
        for variant in [Variant::Both, Variant::AbOnly, Variant::Aa] {
            let mut settings = SweepSettings::new((30..=200).step_by(5), 300, 1);
            settings.variant = variant;
            let curve = sweep(g, &settings)?;
            println!(
                "{name} {variant:<8} crossing k = {:>6.1}  prediction = {:>6.1}",
                curve.crossing_k().unwrap_or(f64::NAN),
                curve.critical_prediction.unwrap_or(f64::NAN)
            );
        }
    }
    let c = &groups[0].1;
    for ratio in [0.25, 0.5, 2.0, 4.0] {
        let centre = (1024.0 * 1024f64.ln() / ratio).sqrt();
        let mut settings = SweepSettings::new(((0.6 * centre) as usize..=(1.4 * centre) as usize).step_by(2), 300, 1);
        settings.m_ratio = ratio;
        let curve = sweep(c, &settings)?;
        let k = curve.crossing_k().unwrap_or(f64::NAN);
        println!(
            "C1024 m = {ratio} k: crossing k = {k:.1}, k·m / (n log n) = {:.3}{}",
            ratio * k * k / (1024.0 * 1024f64.ln()),
            if curve.warnings.is_empty() { "" } else { "  (max(k, m) exceeds n / log n)" }
        );
    }
    Ok(())
}
