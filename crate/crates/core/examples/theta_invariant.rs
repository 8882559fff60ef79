//! Θ(G) and its bounds for cyclic, dihedral and symmetric groups, plus the
//! critical subset size √(Θ n log n).

use group_decomp::group::{build_cyclic, build_dihedral, build_symmetric};
use group_decomp::theta::{critical_size_for, dihedral_sandwich, solve_theta, theta_bounds};
use group_decomp::Group;

fn row(name: &str, g: &Group) {
    let p = g.profile();
    let r = solve_theta(p).expect("n >= 3");
    let b = theta_bounds(p).expect("n >= 3");
    println!(
        "{name:<8} n={:<6} Θ={:.12}  [{:.4}, {:.4}]  C={:.2}  ({} bisection steps)",
        g.order(),
        r.theta,
        b.lower_center.max(b.lower_classes),
        b.upper,
        critical_size_for(r.theta, g.order()),
        r.iterations
    );
}

fn main() {
    for m in [3, 16, 1024] {
        row(&format!("C{m}"), &build_cyclic(m).unwrap());
    }
    for m in [3, 4, 32, 512] {
        let g = build_dihedral(m).unwrap();
        row(&format!("D{}", 2 * m), &g);
        let (lo, hi) = dihedral_sandwich(g.order());
        println!("         dihedral sandwich [{lo:.4}, {hi:.4}]");
    }
    for m in 3..=9 {
        row(&format!("S{m}"), &build_symmetric(m).unwrap());
    }
}
