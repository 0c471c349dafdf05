//! Gluing descent data for `Ω_J`: local sheaves on slices, glued to a sheaf
//! on the whole slice, with restriction isos checked.
//!
//! ```text
//! cargo run --example omega_j_probe
//! ```

use tck::corpus::omega_j_data;
use tck::fincat::SetDiagram;
use tck::search::{Budget, DEFAULT_BOUND};
use tck::stacks::omega_j_probe;

fn main() -> tck::Result<()> {
    for (name, d) in omega_j_data().into_iter().step_by(4) {
        let mut budget = Budget::new(DEFAULT_BOUND);
        d.validate(&mut budget)?;
        let g = omega_j_probe(&d, &mut budget)?;
        let cat = g.glued.base();
        let top = d.slices().slice(d.sieve().at()).top(d.slices().base());
        let locals: Vec<String> = d
            .sieve()
            .arrows()
            .iter()
            .map(|&f| {
                let z = d.local(f);
                let at = d.slices().slice(d.slices().base().dom(f)).top(d.slices().base());
                format!("{}:{}", d.slices().base().arrow_name(f), z.card(at))
            })
            .collect();
        println!(
            "{name}: locals [{}] glue to {} global section(s) over {} objects; {} isos, {} endomorphisms glued",
            locals.join(" "),
            g.glued.card(top),
            cat.object_count(),
            g.psi.len(),
            g.morphisms_glued
        );
    }
    Ok(())
}
