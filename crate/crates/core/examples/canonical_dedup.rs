//! Canonical keys identify isomorphic fibres regardless of component order
//! or names; automorphisms shrink the set of centres worth trying.

use std::collections::BTreeSet;

use conic_fibers::enumeration::{all_centers, enumerate, main_fiber};
use conic_fibers::fiber::{automorphisms, canonical_form, ComponentId, FiberKind};

fn main() {
    let f = main_fiber(FiberKind::A, 4).unwrap();
    let reversed: Vec<usize> = (0..f.len()).rev().collect();
    let renamed: Vec<ComponentId> = (0..f.len())
        .map(|i| ComponentId::new(format!("c{i}")))
        .collect();
    let g = f.permuted(&reversed).relabeled(&renamed).unwrap();
    println!("A4          {}", canonical_form(&f).unwrap());
    println!("reversed    {}", canonical_form(&g).unwrap());

    let autos = automorphisms(&f).unwrap();
    println!("\n{} automorphisms: {:?}", autos.len(), autos);
    let orbits: BTreeSet<usize> = (0..f.len())
        .map(|i| autos.iter().map(|p| p[i]).min().unwrap())
        .collect();
    println!(
        "{} centres, {} component orbits",
        all_centers(&f).len(),
        orbits.len()
    );

    let level = enumerate(4, true).unwrap();
    println!(
        "\nlevel 4: {} sequences, {} classes",
        level.raw_count,
        level.deduped_count()
    );
    for c in level.configs.iter().take(5) {
        let steps: Vec<String> = c.witness.iter().map(|s| s.to_string()).collect();
        println!("  x{:<3} {}", c.raw_sequences, steps.join(", "));
    }
}
