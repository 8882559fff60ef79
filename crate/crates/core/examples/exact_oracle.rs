//! Exact probabilities by brute force on tiny groups.

use group_decomp::group::{build_cyclic, build_symmetric};
use group_decomp::montecarlo::Variant;
use group_decomp::oracle::{exact_miss_distribution, exact_p};

fn main() {
    let c2 = build_cyclic(2).unwrap();
    let c3 = build_cyclic(3).unwrap();
    let s3 = build_symmetric(3).unwrap();
    println!("P(C2, 2) = {}", exact_p(&c2, 2, 2, Variant::Both).unwrap());
    println!("P(C3, 2) = {}", exact_p(&c3, 2, 2, Variant::Both).unwrap());
    for k in 2..=4 {
        println!("P(S3, {k}) = {}", exact_p(&s3, k, k, Variant::Both).unwrap());
    }

    let d = exact_miss_distribution(&s3, 2, 2, Variant::Both).unwrap();
    println!("|S| over all {} draws of (a1, a2, b1, b2) in S3:", d.total);
    for (&size, &count) in &d.counts {
        println!("  |S| = {size}: {count:>4}  ({})", d.probability(size));
    }
    println!("  E|S| = {}", d.mean());
}
