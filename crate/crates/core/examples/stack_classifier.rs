//! Stacks for a topology and the stack classifier `Ω_J`: descent data,
//! effectiveness, and the factorisation of characteristic maps through
//! sheaves.
//!
//! ```text
//! cargo run --example stack_classifier
//! ```

use tck::classifier::char;
use tck::corpus::{non_stack_counterexample, open_topology, stack_opfibrations};
use tck::fincat::SliceFamily;
use tck::search::{Budget, DEFAULT_BOUND};
use tck::site::Sieve;
use tck::stacks::{char_stacks, check_stack, effectiveness, ell_factors, DescentDatum};

fn main() -> tck::Result<()> {
    let mut budget = Budget::new(DEFAULT_BOUND);
    let j = open_topology();
    let cat = j.cat().clone();
    let slices = SliceFamily::new(cat.clone());

    let (name, phi) = &stack_opfibrations()[3];
    let f = phi.total();
    let report = check_stack(f, &j, &mut budget)?;
    println!("{name}: total is a stack: {} ({} descent data checked)", report.is_stack(), report.descent_data);

    let top = cat.object("12")?;
    let s: &Sieve = j.covers(top).iter().find(|s| !s.is_maximal(&cat)).expect("a proper cover");
    for m in f.at(top).objects() {
        let d = DescentDatum::induced(f, s, m);
        let w = effectiveness(&d, &mut budget)?;
        println!("  datum induced by {} is glued by {} object(s)", f.at(top).object_name(m), w.len());
    }

    let zj = char_stacks(phi, &j, &slices, false, &mut budget)?;
    println!("char({name}) factors through Ω_J over {} objects", zj.map().base().object_count());

    let bad = non_stack_counterexample();
    let r = check_stack(bad.total(), &j, &mut budget)?;
    if let Some(fail) = r.failure {
        println!("counterexample: {} fails at `{}` for {}: {}", fail.condition, fail.object, fail.sieve, fail.witness);
    }
    match ell_factors(&char(&bad, &slices)?, &j, &mut budget)? {
        Ok(_) => println!("unexpected factorisation"),
        Err(e) => println!("char does not factor: {}", e.description),
    }
    Ok(())
}
