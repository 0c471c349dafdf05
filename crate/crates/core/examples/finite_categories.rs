//! Finite categories from tables, free categories, opposites, slices and
//! functor enumeration.
//!
//! ```text
//! cargo run --example finite_categories
//! ```

use std::sync::Arc;

use tck::fincat::{build_category, enumerate_functors, slice, CategoryTables, FinCat};
use tck::search::{Budget, DEFAULT_BOUND};

fn main() -> tck::Result<()> {
    let tables = CategoryTables::new()
        .object("a")
        .object("b")
        .arrow("id_a", "a", "a")
        .arrow("id_b", "b", "b")
        .arrow("u", "a", "b")
        .identity("a", "id_a")
        .identity("b", "id_b");
    let arrow = Arc::new(build_category(&tables)?);
    println!("walking arrow: {} objects, {} arrows", arrow.object_count(), arrow.arrow_count());

    // composites of generators are named g.f
    let chain = Arc::new(FinCat::free(&["a", "b", "c"], &[("f", "a", "b"), ("g", "b", "c")])?);
    let names: Vec<&str> = chain.arrows().map(|a| chain.arrow_name(a)).collect();
    println!("free chain arrows: {}", names.join(" "));

    let op = chain.opposite();
    let f = op.arrow("f")?;
    println!("in the opposite, f : {} → {}", op.object_name(op.dom(f)), op.object_name(op.cod(f)));

    let (over_c, dom) = slice(&chain, chain.object("c")?);
    println!("C/c has objects:");
    for o in over_c.objects() {
        println!("  {}", over_c.object_name(o));
    }
    for a in over_c.arrows().filter(|&a| !over_c.is_identity(a)) {
        println!("  arrow {} lies over {}", over_c.arrow_name(a), chain.arrow_name(dom.arr(a)));
    }

    let mut budget = Budget::new(DEFAULT_BOUND);
    let endos = enumerate_functors(&chain, &chain, &mut budget)?;
    println!("{} endofunctors of the chain ({} search steps)", endos.len(), budget.used());

    if let Err(e) = build_category(&tables.composite("u", "u", "u")) {
        println!("rejected: {e}");
    }
    Ok(())
}
