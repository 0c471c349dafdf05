use tck::corpus::{base_categories, chain3, presheaf_fixtures, pt, walking_arrow};
use tck::fincat::{
    build_category, enumerate_functors, enumerate_nats, enumerate_set_nats, natural_iso, postcompose, slice,
    CategoryTables, FinCat, FinFunctor, NatTransform, Obj, SetDiagram, SetPresheaf, SliceFamily,
};
use tck::search::{Budget, DEFAULT_BOUND};
use tck::Error;

fn budget() -> Budget {
    Budget::new(DEFAULT_BOUND)
}

fn walking_tables() -> CategoryTables {
    CategoryTables::new()
        .object("a")
        .object("b")
        .arrow("id_a", "a", "a")
        .arrow("id_b", "b", "b")
        .arrow("u", "a", "b")
        .identity("a", "id_a")
        .identity("b", "id_b")
}

#[test]
fn explicit_tables() {
    let p = build_category(&CategoryTables::new().object("*").arrow("id", "*", "*").identity("*", "id")).unwrap();
    assert_eq!((p.object_count(), p.arrow_count()), (1, 1));
    let w = build_category(&walking_tables()).unwrap();
    assert_eq!(w, *walking_arrow());
    let bad = build_category(&walking_tables().composite("u", "u", "u"));
    assert!(matches!(bad, Err(Error::IllTypedComposite { .. })), "{bad:?}");
}

#[test]
fn opposites() {
    assert_eq!(pt().opposite(), *pt());
    let w = walking_arrow().opposite();
    let u = w.arrow("u").unwrap();
    assert_eq!((w.object_name(w.dom(u)), w.object_name(w.cod(u))), ("b", "a"));
    let five = FinCat::free(&["a", "b", "c"], &[("f", "a", "b"), ("g", "a", "c")]).unwrap();
    assert_eq!(five.arrow_count(), 5);
    assert_eq!(five.opposite().arrow_count(), 5);
    for (_, c) in base_categories() {
        assert_eq!(c.opposite().opposite(), *c);
    }
}

#[test]
fn slices() {
    let w = walking_arrow();
    let (sb, dom) = slice(&w, w.object("b").unwrap());
    let mut names: Vec<&str> = sb.objects().map(|o| sb.object_name(o)).collect();
    names.sort();
    assert_eq!(names, ["id_b", "u"]);
    let non_identity: Vec<_> = sb.arrows().filter(|&a| !sb.is_identity(a)).collect();
    assert_eq!(non_identity.len(), 1);
    let g = non_identity[0];
    assert_eq!((sb.object_name(sb.dom(g)), sb.object_name(sb.cod(g))), ("u", "id_b"));
    assert_eq!(w.arrow_name(dom.arr(g)), "u");
    let (sa, _) = slice(&w, w.object("a").unwrap());
    assert_eq!((sa.object_count(), sa.arrow_count()), (1, 1));
    let (sp, _) = slice(&pt(), Obj(0));
    assert_eq!((sp.object_count(), sp.arrow_count()), (1, 1));
}

#[test]
fn postcomposition() {
    for (_, c) in base_categories() {
        for o in c.objects() {
            assert!(postcompose(&c, c.identity(o)).unwrap().is_identity());
        }
    }
    let w = walking_arrow();
    let pu = postcompose(&w, w.arrow("u").unwrap()).unwrap();
    assert_eq!(pu.target().object_name(pu.obj(Obj(0))), "u");
    let c = chain3();
    let (f, g) = (c.arrow("f").unwrap(), c.arrow("g").unwrap());
    let gf = postcompose(&c, c.comp(g, f)).unwrap();
    let parts = postcompose(&c, g).unwrap().after(&postcompose(&c, f).unwrap()).unwrap();
    assert_eq!(gf, parts);
}

#[test]
fn functor_counts() {
    let (p, w) = (pt(), walking_arrow());
    assert_eq!(enumerate_functors(&p, &w, &mut budget()).unwrap().len(), 2);
    assert_eq!(enumerate_functors(&w, &p, &mut budget()).unwrap().len(), 1);
    assert_eq!(enumerate_functors(&w, &w, &mut budget()).unwrap().len(), 3);
}

#[test]
fn natural_transformations() {
    let p = pt();
    let id = FinFunctor::identity(p.clone());
    let nats = enumerate_nats(&id, &id, &mut budget()).unwrap();
    assert_eq!(nats, vec![NatTransform::identity(&id)]);
    for (_, c) in base_categories() {
        for x in c.objects() {
            for y in c.objects() {
                let (fx, fy) =
                    (FinFunctor::constant(c.clone(), c.clone(), x), FinFunctor::constant(c.clone(), c.clone(), y));
                let n = enumerate_nats(&fx, &fy, &mut budget()).unwrap().len();
                // a family of arrows x → y, one per object, natural iff
                // every arrow's component agrees with its endpoints'
                let mut brute = 0;
                let hom = c.hom(x, y);
                let k = c.object_count();
                let mut idx = vec![0usize; k];
                if !hom.is_empty() {
                    loop {
                        let ok = c.arrows().all(|a| hom[idx[c.dom(a).0]] == hom[idx[c.cod(a).0]]);
                        brute += ok as usize;
                        let mut i = 0;
                        while i < k && idx[i] + 1 == hom.len() {
                            idx[i] = 0;
                            i += 1;
                        }
                        if i == k {
                            break;
                        }
                        idx[i] += 1;
                    }
                }
                assert_eq!(n, brute);
            }
        }
    }
}

#[test]
fn isomorphisms_of_functors() {
    let w = walking_arrow();
    let f = FinFunctor::pick(w.clone(), w.object("a").unwrap());
    let g = FinFunctor::pick(w.clone(), w.object("b").unwrap());
    assert!(natural_iso(&f, &g, &mut budget()).unwrap().is_none());
    assert_eq!(natural_iso(&f, &f, &mut budget()).unwrap(), Some(NatTransform::identity(&f)));
}

#[test]
fn global_sections_are_values_at_the_top() {
    for (_, c) in base_categories() {
        let slices = SliceFamily::new(c.clone());
        for o in c.objects() {
            let sl = slices.slice(o);
            let one = SetPresheaf::terminal(sl.cat().clone());
            for z in presheaf_fixtures(sl.cat(), 6) {
                let n = enumerate_set_nats(&one, &z, &mut budget()).unwrap().len();
                assert_eq!(n, z.card(sl.top(&c)));
            }
        }
    }
}
