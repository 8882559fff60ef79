//! Suen's inequality on an arbitrary dependency graph: a cycle of eight
//! events, each with probability 0.1, where neighbours share a cause.

use group_decomp::suen::{suen_generic, DependencyGraph};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 8;
    let graph = DependencyGraph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))?;
    let means = vec![0.1; n];
    for joint in [0.0, 0.01, 0.05] {
        let pair_means = vec![joint; graph.edges().len()];
        let b = suen_generic(&graph, &means, &pair_means)?;
        println!(
            "E[X_i X_j] = {joint:<5} Δ = {:.4}  Δ* = {:.4}  {:.4} <= Pr[no event] <= {:.4}",
            b.delta, b.delta_star, b.lower, b.upper
        );
    }
    Ok(())
}
