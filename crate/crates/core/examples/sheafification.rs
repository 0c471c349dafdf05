//! Sieves, matching families and sheafification on the opens of a two-point
//! discrete space.
//!
//! ```text
//! cargo run --example sheafification
//! ```

use tck::corpus::{non_separated, open_topology};
use tck::fincat::SetDiagram;
use tck::search::{Budget, DEFAULT_BOUND};
use tck::site::{
    amalgamations, is_separated, is_sheaf, matching_families, sheaf_failure, sheafify_with_unit, validate_topology,
};

fn main() -> tck::Result<()> {
    let mut budget = Budget::new(DEFAULT_BOUND);
    let j = open_topology();
    validate_topology(&j, &mut budget)?;
    let cat = j.cat().clone();
    for c in cat.objects() {
        let covers: Vec<String> = j.covers(c).iter().map(|s| s.display(&cat).to_string()).collect();
        println!("covers of {}: {}", cat.object_name(c), covers.join(" "));
    }

    let z = non_separated();
    println!(
        "Z(12) has {} elements; separated: {}, sheaf: {}",
        z.card(cat.object("12")?),
        is_separated(&z, &j, &mut budget)?,
        is_sheaf(&z, &j, &mut budget)?
    );
    if let Some(f) = sheaf_failure(&z, &j, &mut budget)? {
        println!("failure: {}", f.describe(&z));
    }
    for s in j.covers(cat.object("12")?) {
        for m in matching_families(&z, s, &mut budget)? {
            println!(
                "  family {} over {} has {} amalgamations",
                m.label(&z),
                s.display(&cat),
                amalgamations(&z, &m).len()
            );
        }
    }

    let (a, unit) = sheafify_with_unit(&z, &j, &mut budget)?;
    for c in cat.objects() {
        println!("a(Z)({}) has {} elements, unit {:?}", cat.object_name(c), a.card(c), unit.component(c));
    }
    println!("a(Z) is a sheaf: {}", is_sheaf(&a, &j, &mut budget)?);
    Ok(())
}
