//! Loads a group from a Cayley table and checks it. With no argument the
//! quaternion group Q_8 is written to a temporary file first.
//!
//! Table format: the order n on the first line, then n rows of n
//! whitespace-separated indices in 0..n.

use std::path::PathBuf;

use group_decomp::group::{load_table_file, parse_table};
use group_decomp::theta::solve_theta;

/// Q_8 as ±1, ±i, ±j, ±k with indices 0..8 = 1, -1, i, -i, j, -j, k, -k.
fn quaternion_table() -> String {
    let unit = |a: usize| a / 2; // 0 = 1, 1 = i, 2 = j, 3 = k
    let mul_units = |a: usize, b: usize| -> (usize, bool) {
        match (a, b) {
            (0, x) | (x, 0) => (x, false),
            (x, y) if x == y => (0, true),
            (1, 2) => (3, false),
            (2, 3) => (1, false),
            (3, 1) => (2, false),
            (2, 1) => (3, true),
            (3, 2) => (1, true),
            (1, 3) => (2, true),
            _ => unreachable!(),
        }
    };
    let mut text = String::from("8\n");
    for a in 0..8 {
        let row: Vec<String> = (0..8)
            .map(|b| {
                let (u, flip) = mul_units(unit(a), unit(b));
                let negative = (a % 2 == 1) ^ (b % 2 == 1) ^ flip;
                (2 * u + negative as usize).to_string()
            })
            .collect();
        text.push_str(&row.join(" "));
        text.push('\n');
    }
    text
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = match std::env::args().nth(1) {
        Some(path) => load_table_file(PathBuf::from(path))?,
        None => parse_table(&quaternion_table())?,
    };
    let report = g.validate()?;
    let p = g.profile();
    println!("order {} identity {} associativity {:?}", report.order, report.identity, report.associativity);
    println!("R = {}, |Z| = {}, abelian = {}", p.class_count(), p.center_size(), g.is_abelian());
    if g.order() >= 3 {
        println!("Θ = {:.12}", solve_theta(p)?.theta);
    }

    let broken = "3\n0 1 2\n1 2 0\n2 1 0\n";
    if let Err(e) = parse_table(broken) {
        println!("rejected: {e}");
    }
    Ok(())
}
