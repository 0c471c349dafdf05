//! The 2-classifier `Ω̃(c) = Set^{(C/c)^op}`: characteristic maps of discrete
//! opfibrations, classification back, and full faithfulness on a pair.
//!
//! ```text
//! cargo run --example prestack_classifier
//! ```

use tck::classifier::{char, classify, ff_check, roundtrip_fibration, roundtrip_map};
use tck::corpus::prestack_opfibrations;
use tck::fincat::{SetDiagram, SliceFamily};
use tck::search::{Budget, DEFAULT_BOUND};

fn main() -> tck::Result<()> {
    let fixtures = prestack_opfibrations();
    let (name, phi) = &fixtures[1];
    let b = phi.base();
    let slices = SliceFamily::new(b.clone());
    let z = char(phi, &slices)?;
    println!("char of {name}:");
    for c in b.objects() {
        let top = slices.slice(c).top(b);
        for x in phi.over().at(c).objects() {
            println!(
                "  ({}, {}) ↦ presheaf on C/{} with {} points, fibre size {}",
                b.object_name(c),
                phi.over().at(c).object_name(x),
                b.object_name(c),
                z.value(c, x).card(top),
                phi.fibre(c, x).len()
            );
        }
    }
    let back = classify(&z)?;
    println!(
        "classify(char φ) total sizes: {:?}",
        b.objects().map(|c| back.total().at(c).object_count()).collect::<Vec<_>>()
    );

    let mut budget = Budget::new(DEFAULT_BOUND);
    roundtrip_fibration(phi, &slices, &mut budget)?;
    roundtrip_map(&z, &mut budget)?;
    println!("both round trips are isomorphisms");

    let same_base: Vec<_> = fixtures.iter().filter(|(_, p)| p.over() == phi.over()).take(3).collect();
    for (n1, p1) in &same_base {
        for (n2, p2) in &same_base {
            let r = ff_check(&char(p1, &slices)?, &char(p2, &slices)?, &mut budget)?;
            println!("{n1} → {n2}: {} modifications, {} maps over F", r.modifications, r.fib_homs);
        }
    }
    Ok(())
}
