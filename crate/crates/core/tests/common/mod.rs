#![allow(dead_code)]

use group_decomp::group::{build_cyclic, build_dihedral, build_product, build_symmetric};
use group_decomp::Group;

pub struct Entry {
    pub name: String,
    pub group: Group,
}

fn entry(name: impl Into<String>, group: Group) -> Entry {
    Entry { name: name.into(), group }
}

/// C_3..C_64, D_6..D_64, S_3, S_4, C_2 x C_2 and C_3 x S_3.
pub fn catalog() -> Vec<Entry> {
    let mut out = Vec::new();
    for m in 3..=64 {
        out.push(entry(format!("C{m}"), build_cyclic(m).unwrap()));
    }
    for m in 3..=32 {
        out.push(entry(format!("D{}", 2 * m), build_dihedral(m).unwrap()));
    }
    out.extend(small_extras());
    out
}

pub fn small_extras() -> Vec<Entry> {
    let c2 = build_cyclic(2).unwrap();
    let c3 = build_cyclic(3).unwrap();
    vec![
        entry("S3", build_symmetric(3).unwrap()),
        entry("S4", build_symmetric(4).unwrap()),
        entry("C2xC2", build_product(&c2, &c2).unwrap()),
        entry("C3xS3", build_product(&c3, &build_symmetric(3).unwrap()).unwrap()),
    ]
}

/// Catalog groups of order at most `max_order`.
pub fn catalog_up_to(max_order: usize) -> Vec<Entry> {
    catalog().into_iter().filter(|e| e.group.order() <= max_order).collect()
}
