//! Brute-force enumeration of functors, natural transformations and
//! set-valued natural transformations. All results come out in
//! lexicographic order of their index tables.

use std::sync::Arc;

use super::category::{Arr, FinCat, Obj};
use super::functor::{FinFunctor, NatTransform};
use super::setfn::{SetDiagram, SetNat};
use crate::error::{Error, Result};
use crate::search::{solve, Budget};

/// Every functor `a → b`.
pub fn enumerate_functors(a: &Arc<FinCat>, b: &Arc<FinCat>, budget: &mut Budget) -> Result<Vec<FinFunctor>> {
    let mut out = Vec::new();
    functor_search(a, b, budget, |f| {
        out.push(f);
        true
    })?;
    Ok(out)
}

/// Runs `visit` on each functor `a → b` until it returns `false`.
pub fn functor_search<V>(a: &Arc<FinCat>, b: &Arc<FinCat>, budget: &mut Budget, mut visit: V) -> Result<()>
where
    V: FnMut(FinFunctor) -> bool,
{
    let n_obj = a.object_count();
    let n = n_obj + a.arrow_count();
    // composites checked at the variable of highest index among g, f, g∘f
    let mut checks: Vec<Vec<(Arr, Arr, Arr)>> = vec![Vec::new(); a.arrow_count()];
    for (g, f) in a.composable_pairs() {
        let gf = a.comp(g, f);
        let last = g.0.max(f.0).max(gf.0);
        checks[last].push((g, f, gf));
    }
    solve(
        n,
        budget,
        |i, asg| {
            if i < n_obj {
                (0..b.object_count()).collect()
            } else {
                let u = Arr(i - n_obj);
                let (x, y) = (Obj(asg[a.dom(u).0]), Obj(asg[a.cod(u).0]));
                if a.is_identity(u) {
                    vec![b.identity(x).0]
                } else {
                    b.hom(x, y).into_iter().map(|h| h.0).collect()
                }
            }
        },
        |i, asg| {
            if i < n_obj {
                return true;
            }
            checks[i - n_obj].iter().all(|&(g, f, gf)| {
                let (fg, ff, fgf) = (asg[n_obj + g.0], asg[n_obj + f.0], asg[n_obj + gf.0]);
                b.comp(Arr(fg), Arr(ff)).0 == fgf
            })
        },
        |asg| {
            let objects = asg[..n_obj].iter().map(|&o| Obj(o)).collect();
            let arrows = asg[n_obj..].iter().map(|&x| Arr(x)).collect();
            visit(FinFunctor::new_unchecked(a.clone(), b.clone(), objects, arrows))
        },
    )
}

fn nat_search<V>(f: &FinFunctor, g: &FinFunctor, iso_only: bool, budget: &mut Budget, mut visit: V) -> Result<()>
where
    V: FnMut(NatTransform) -> bool,
{
    if f.source() != g.source() || f.target() != g.target() {
        return Err(Error::Mismatch("natural transformations need parallel functors".into()));
    }
    let (a, b) = (f.source().clone(), f.target().clone());
    let mut checks: Vec<Vec<Arr>> = vec![Vec::new(); a.object_count()];
    for u in a.arrows() {
        checks[a.dom(u).0.max(a.cod(u).0)].push(u);
    }
    solve(
        a.object_count(),
        budget,
        |i, _| {
            let o = Obj(i);
            b.hom(f.obj(o), g.obj(o)).into_iter().filter(|h| !iso_only || b.is_iso(*h)).map(|h| h.0).collect()
        },
        |i, asg| {
            checks[i].iter().all(|&u| {
                let (x, y) = (a.dom(u), a.cod(u));
                b.comp(g.arr(u), Arr(asg[x.0])) == b.comp(Arr(asg[y.0]), f.arr(u))
            })
        },
        |asg| visit(NatTransform::new_unchecked(f.clone(), g.clone(), asg.iter().map(|&x| Arr(x)).collect())),
    )
}

/// Every natural transformation `f ⇒ g`.
pub fn enumerate_nats(f: &FinFunctor, g: &FinFunctor, budget: &mut Budget) -> Result<Vec<NatTransform>> {
    let mut out = Vec::new();
    nat_search(f, g, false, budget, |n| {
        out.push(n);
        true
    })?;
    Ok(out)
}

/// The lexicographically first natural isomorphism `f ≅ g`, if any.
pub fn natural_iso(f: &FinFunctor, g: &FinFunctor, budget: &mut Budget) -> Result<Option<NatTransform>> {
    let mut out = None;
    nat_search(f, g, true, budget, |n| {
        out = Some(n);
        false
    })?;
    Ok(out)
}

fn set_nat_search<D, V>(s: &D, t: &D, iso_only: bool, budget: &mut Budget, mut visit: V) -> Result<()>
where
    D: SetDiagram,
    V: FnMut(SetNat<D>) -> bool,
{
    if s.base() != t.base() {
        return Err(Error::Mismatch("set functors over different bases".into()));
    }
    let b = s.base().clone();
    if iso_only && b.objects().any(|o| s.card(o) != t.card(o)) {
        return Ok(());
    }
    // variables: (object, element), objects that few maps start from
    // first, so that each element meets its naturality squares early
    let mut order: Vec<Obj> = b.objects().collect();
    order.sort_by_key(|&o| (b.arrows().filter(|&a| s.map_source(a) == o).count(), o));
    let mut vars: Vec<(Obj, usize)> = Vec::new();
    let mut start = vec![0; b.object_count()];
    for &o in &order {
        start[o.0] = vars.len();
        vars.extend((0..s.card(o)).map(|x| (o, x)));
    }
    // the square of `a` at `x` is checked once both of its ends are assigned
    let mut checks: Vec<Vec<(Arr, usize)>> = vec![Vec::new(); vars.len()];
    for a in b.arrows().filter(|&a| !b.is_identity(a)) {
        let (src, tgt) = (s.map_source(a), s.map_target(a));
        for x in 0..s.card(src) {
            let (p, q) = (start[src.0] + x, start[tgt.0] + s.act(a, x));
            checks[p.max(q)].push((a, x));
        }
    }
    let components_of = |asg: &[usize]| -> Vec<Vec<usize>> {
        b.objects().map(|o| asg[start[o.0]..start[o.0] + s.card(o)].to_vec()).collect()
    };
    solve(
        vars.len(),
        budget,
        |i, asg| {
            let (o, x) = vars[i];
            let used: Vec<usize> = if iso_only { asg[start[o.0]..start[o.0] + x].to_vec() } else { Vec::new() };
            (0..t.card(o)).filter(|y| !used.contains(y)).collect()
        },
        |i, asg| {
            checks[i].iter().all(|&(a, x)| {
                let (src, tgt) = (s.map_source(a), s.map_target(a));
                asg[start[tgt.0] + s.act(a, x)] == t.act(a, asg[start[src.0] + x])
            })
        },
        |asg| visit(SetNat::new_unchecked(s.clone(), t.clone(), components_of(asg))),
    )
}

/// Every natural transformation between two set-valued functors.
pub fn enumerate_set_nats<D: SetDiagram>(s: &D, t: &D, budget: &mut Budget) -> Result<Vec<SetNat<D>>> {
    let mut out = Vec::new();
    set_nat_search(s, t, false, budget, |n| {
        out.push(n);
        true
    })?;
    Ok(out)
}

/// The lexicographically first natural bijection `s ≅ t`, if any.
pub fn set_iso<D: SetDiagram>(s: &D, t: &D, budget: &mut Budget) -> Result<Option<SetNat<D>>> {
    let mut out = None;
    set_nat_search(s, t, true, budget, |n| {
        out = Some(n);
        false
    })?;
    Ok(out)
}

/// The lexicographically first isomorphism of categories `a → b`, if any.
pub fn category_iso(a: &Arc<FinCat>, b: &Arc<FinCat>, budget: &mut Budget) -> Result<Option<FinFunctor>> {
    if a.object_count() != b.object_count() || a.arrow_count() != b.arrow_count() {
        return Ok(None);
    }
    let mut out = None;
    functor_search(a, b, budget, |f| {
        if f.is_isomorphism() {
            out = Some(f);
            false
        } else {
            true
        }
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::setfn::SetPresheaf;
    use crate::search::DEFAULT_BOUND;

    fn walking_arrow() -> Arc<FinCat> {
        Arc::new(FinCat::free(&["a", "b"], &[("u", "a", "b")]).unwrap())
    }

    fn budget() -> Budget {
        Budget::new(DEFAULT_BOUND)
    }

    #[test]
    fn functor_counts() {
        let pt = Arc::new(FinCat::point());
        let w = walking_arrow();
        assert_eq!(enumerate_functors(&pt, &w, &mut budget()).unwrap().len(), 2);
        assert_eq!(enumerate_functors(&w, &pt, &mut budget()).unwrap().len(), 1);
        assert_eq!(enumerate_functors(&w, &w, &mut budget()).unwrap().len(), 3);
    }

    #[test]
    fn nats_between_constants() {
        let w = walking_arrow();
        let (a, b) = (w.object("a").unwrap(), w.object("b").unwrap());
        let pa = FinFunctor::constant(w.clone(), w.clone(), a);
        let pb = FinFunctor::constant(w.clone(), w.clone(), b);
        assert_eq!(enumerate_nats(&pa, &pb, &mut budget()).unwrap().len(), 1);
        assert!(enumerate_nats(&pb, &pa, &mut budget()).unwrap().is_empty());
        let id = FinFunctor::identity(w.clone());
        assert_eq!(enumerate_nats(&id, &id, &mut budget()).unwrap().len(), 1);
    }

    #[test]
    fn natural_iso_search() {
        let w = walking_arrow();
        let pick_a = FinFunctor::pick(w.clone(), w.object("a").unwrap());
        let pick_b = FinFunctor::pick(w.clone(), w.object("b").unwrap());
        assert!(natural_iso(&pick_a, &pick_b, &mut budget()).unwrap().is_none());
        let n = natural_iso(&pick_a, &pick_a, &mut budget()).unwrap().unwrap();
        assert_eq!(n, NatTransform::identity(&pick_a));
    }

    #[test]
    fn relabelled_discrete_images_are_iso() {
        // x and y are isomorphic objects in the target
        let t = Arc::new(
            crate::fincat::CategoryTables::new()
                .object("x")
                .object("y")
                .arrow("id_x", "x", "x")
                .arrow("id_y", "y", "y")
                .arrow("i", "x", "y")
                .arrow("j", "y", "x")
                .identity("x", "id_x")
                .identity("y", "id_y")
                .composite("j", "i", "id_x")
                .composite("i", "j", "id_y")
                .build()
                .unwrap(),
        );
        let two = Arc::new(FinCat::discrete(["p", "q"]));
        let (x, y) = (t.object("x").unwrap(), t.object("y").unwrap());
        let f = FinFunctor::new(two.clone(), t.clone(), vec![x, y], vec![t.identity(x), t.identity(y)]).unwrap();
        let g = FinFunctor::new(two.clone(), t.clone(), vec![y, x], vec![t.identity(y), t.identity(x)]).unwrap();
        assert!(natural_iso(&f, &g, &mut budget()).unwrap().is_some());
    }

    #[test]
    fn size_bound_is_reported() {
        let w = walking_arrow();
        let err = enumerate_functors(&w, &w, &mut Budget::new(2)).unwrap_err();
        assert!(err.is_size_bound());
    }

    #[test]
    fn set_nat_enumeration() {
        let w = walking_arrow();
        let one = SetPresheaf::terminal(w.clone());
        let ids = enumerate_set_nats(&one, &one, &mut budget()).unwrap();
        assert_eq!(ids.len(), 1);
        let y = SetPresheaf::representable(w.clone(), w.object("b").unwrap());
        // Hom(Δ1, y_b) = y_b(b)... restricted to compatible choices: only id_b
        assert_eq!(enumerate_set_nats(&one, &y, &mut budget()).unwrap().len(), 1);
        assert!(set_iso(&y, &y, &mut budget()).unwrap().unwrap().is_iso());
    }
}
