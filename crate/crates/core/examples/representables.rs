//! Representable prestacks and the Yoneda correspondence between objects of
//! `F(c)` and maps `y(c) → F`.
//!
//! ```text
//! cargo run --example representables
//! ```

use tck::corpus::prestack_fixtures;
use tck::prestack::{enumerate_two_nats, representable, yoneda, yoneda_inv};
use tck::search::{Budget, DEFAULT_BOUND};

fn main() -> tck::Result<()> {
    let (name, f) = prestack_fixtures().into_iter().find(|(n, _)| n.starts_with("WalkingArrow")).expect("fixture");
    let b = f.base();
    println!("prestack {name}");
    for c in b.objects() {
        let y = representable(b, c);
        let homs: Vec<String> = b
            .objects()
            .map(|d| {
                let names: Vec<&str> = y.at(d).objects().map(|o| y.at(d).object_name(o)).collect();
                format!("{}:[{}]", b.object_name(d), names.join(","))
            })
            .collect();
        println!("y({}) = {}", b.object_name(c), homs.join(" "));
        let maps = enumerate_two_nats(&y, &f, &mut Budget::new(DEFAULT_BOUND))?;
        println!(
            "  {} maps y({}) → F, {} objects in F({})",
            maps.len(),
            b.object_name(c),
            f.at(c).object_count(),
            b.object_name(c)
        );
        for x in f.at(c).objects() {
            let s = yoneda(&f, c, x);
            assert_eq!(yoneda_inv(&s, c)?, x);
            println!(
                "  {} ↦ map sending id to {}",
                f.at(c).object_name(x),
                f.at(c).object_name(s.component(c).obj(y.at(c).object(b.arrow_name(b.identity(c)))?))
            );
        }
    }
    Ok(())
}
