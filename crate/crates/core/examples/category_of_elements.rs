//! The category of elements of a set-valued functor, its fibres, and the
//! lax limit of an arrow into a category.
//!
//! ```text
//! cargo run --example category_of_elements
//! ```

use tck::cat2::{certify_dopf, elements_of, fiber_functor, lax_limit_of_arrow};
use tck::corpus::{parallel_pair, pt, walking_arrow};
use tck::fincat::{set_iso, FinFunctor, FinSetFunctor, SetDiagram};
use tck::search::{Budget, DEFAULT_BOUND};

fn main() -> tck::Result<()> {
    let w = walking_arrow();
    let s = |xs: &[&str]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let z = FinSetFunctor::from_names(
        w.clone(),
        &[("a".into(), s(&["x", "y", "z"])), ("b".into(), s(&["0", "1"]))],
        &[("u".into(), vec![("x".into(), "0".into()), ("y".into(), "0".into()), ("z".into(), "1".into())])],
    )?;
    let p = elements_of(&z)?;
    let e = p.total();
    println!("∫Z has {} objects:", e.object_count());
    for a in e.arrows().filter(|&a| !e.is_identity(a)) {
        println!("  {} → {}", e.object_name(e.dom(a)), e.object_name(e.cod(a)));
    }
    for o in w.objects() {
        let names: Vec<&str> = p.fibre(o).iter().map(|&x| e.object_name(x)).collect();
        println!("fibre over {}: {}", w.object_name(o), names.join(" "));
    }
    let back = fiber_functor(&p);
    println!("fibres recover Z: {}", set_iso(&back, &z, &mut Budget::new(DEFAULT_BOUND))?.is_some());

    // objects under `a`, projected to their codomain
    let (_, cod) = lax_limit_of_arrow(&FinFunctor::pick(w.clone(), w.object("a")?))?;
    println!("lax limit of `a` has fibres {:?}", w.objects().map(|o| cod.fibre(o).len()).collect::<Vec<_>>());
    let collapse = FinFunctor::to_point(parallel_pair(), pt());
    match certify_dopf(&collapse) {
        Ok(_) => println!("unexpected"),
        Err(err) => println!("ParallelPair → Pt: {err}"),
    }
    Ok(())
}
