//! Random decompositions of finite groups.
//!
//! Two random subsets `A`, `B` of a finite group `G` decompose it when
//! `AB ∪ BA = G`. This crate provides:
//!
//! - [`group`]: finite groups on `0..n` (cyclic, dihedral, symmetric, direct
//!   products, Cayley tables from text);
//! - [`structure`]: centralizers, conjugacy classes, center, commuting
//!   probability;
//! - [`theta`]: the invariant `Θ(G)` and the critical size `√(Θ n log n)`;
//! - [`suen`]: exact indicator moments and Suen-inequality bounds;
//! - [`montecarlo`]: reproducible parallel simulation and threshold sweeps;
//! - [`oracle`]: brute-force enumeration used as ground truth;
//! - [`cli`]: the `decomp` command-line front end.

pub mod cli;
pub mod error;
pub mod group;
pub mod montecarlo;
pub mod oracle;
pub mod rational;
pub mod structure;
pub mod suen;
pub mod theta;

pub use error::{DomainError, Error, GroupError};
pub use group::{Group, GroupSpec};
pub use rational::Exact;
pub use structure::CentralizerProfile;
