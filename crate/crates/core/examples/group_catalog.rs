//! Builds a handful of groups from spec strings and prints their class
//! structure.
//!
//! ```text
//! cargo run --example group_catalog -- "product:(cyclic:3),(symmetric:3)"
//! ```

use group_decomp::structure::commute_probability;
use group_decomp::GroupSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut specs: Vec<String> = std::env::args().skip(1).collect();
    if specs.is_empty() {
        specs = ["cyclic:12", "dihedral:6", "symmetric:4", "symmetric:8", "product:(cyclic:2),(dihedral:4)"]
            .map(String::from)
            .to_vec();
    }
    println!("{:<34} {:>6} {:>4} {:>4} {:>10}  centralizer sizes", "spec", "n", "R", "|Z|", "Pr[ab=ba]");
    for text in specs {
        let spec: GroupSpec = text.parse()?;
        let g = spec.build()?;
        g.validate()?;
        let p = g.profile();
        let sizes: Vec<String> = p.distinct_sizes().iter().map(|(c, k)| format!("{c}x{k}")).collect();
        println!(
            "{:<34} {:>6} {:>4} {:>4} {:>10}  {}",
            spec.to_string(),
            g.order(),
            p.class_count(),
            p.center_size(),
            commute_probability(&g).to_string(),
            sizes.join(" ")
        );
    }
    Ok(())
}
