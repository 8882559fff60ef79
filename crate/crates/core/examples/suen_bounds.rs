//! Suen upper and lower bounds on Pr[x ∉ AB ∪ BA] next to the exact value
//! from enumeration, for every element of S_3.

use group_decomp::group::build_symmetric;
use group_decomp::montecarlo::Variant;
use group_decomp::oracle::exact_point_miss;
use group_decomp::rational::to_f64;
use group_decomp::suen::{miss_expectation_upper, suen_point};

fn main() {
    let s3 = build_symmetric(3).unwrap();
    for k in 1..=3u64 {
        let truth = exact_point_miss(&s3, k as usize, k as usize, Variant::Both).unwrap();
        println!("k = {k}");
        for (x, t) in truth.iter().enumerate() {
            let r = suen_point(s3.profile(), x, k).unwrap();
            println!(
                "  x = {:<8} E[I] = {:<5} lower {:.5}  exact {:.5} ({})  upper {:.5}  Δ = {:.4}",
                s3.label(x),
                r.moments.single_mean.to_string(),
                r.bounds.lower,
                to_f64(t),
                t,
                r.bounds.upper,
                r.bounds.delta
            );
        }
        println!("  E|S| <= {:.4}", miss_expectation_upper(s3.profile(), k).unwrap());
    }
}
