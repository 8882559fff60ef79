//! Sweeps k across the predicted threshold for a group given on the command
//! line and writes the curve as CSV.
//!
//! ```text
//! cargo run --release --example phase_transition -- dihedral:512 400 > d1024.csv
//! ```

use group_decomp::montecarlo::{sweep, SweepSettings};
use group_decomp::theta::{critical_size_for, solve_theta};
use group_decomp::GroupSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let spec: GroupSpec = args.next().as_deref().unwrap_or("cyclic:1024").parse()?;
    let trials: u64 = args.next().map(|t| t.parse()).transpose()?.unwrap_or(400);
    let g = spec.build()?;
    let theta = solve_theta(g.profile())?.theta;
    let c = critical_size_for(theta, g.order());
    let ks = ((0.4 * c) as usize).max(1)..=(1.6 * c) as usize;
    let step = (ks.end() - ks.start()).div_ceil(40).max(1);
    let curve = sweep(&g, &SweepSettings::new(ks.step_by(step), trials, 7))?;
    curve.write_csv(std::io::stdout().lock())?;
    eprintln!(
        "{spec}: Θ = {theta:.6}, predicted C = {c:.2}, crossing = {:?}, ratio = {:?}",
        curve.crossing_k(),
        curve.crossing_ratio()
    );
    Ok(())
}
