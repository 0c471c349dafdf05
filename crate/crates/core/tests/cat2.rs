use tck::cat2::{
    certify_dopf, comma, elements_of, fiber_functor, lax_limit_of_arrow, pullback, verify_comma_universal,
};
use tck::corpus::{base_categories, chain3, opfibration_corpus, pt, set_diagrams, walking_arrow};
use tck::fincat::{enumerate_functors, set_iso, FinCat, FinFunctor, FinSetFunctor, Obj, SetDiagram};
use tck::search::{Budget, DEFAULT_BOUND};

fn budget() -> Budget {
    Budget::new(DEFAULT_BOUND)
}

#[test]
fn lifting_identities() {
    for (_, b) in base_categories() {
        let p = certify_dopf(&FinFunctor::identity(b.clone())).unwrap();
        for o in b.objects() {
            assert_eq!(p.fibre(o), &[o]);
            for &f in b.out_arrows(o) {
                assert_eq!(p.lift(o, f), f);
            }
        }
    }
    for (name, p) in opfibration_corpus() {
        for e in p.total().objects() {
            let id = p.base().identity(p.functor().obj(e));
            assert_eq!(p.lift(e, id), p.total().identity(e), "{name}");
        }
    }
}

#[test]
fn element_lifts_follow_the_action() {
    let b = chain3();
    for z in set_diagrams::<FinSetFunctor>(&b, 2, &mut budget()).unwrap().iter().step_by(7) {
        let p = elements_of(z).unwrap();
        for o in b.objects() {
            for (x, label) in z.set(o).iter().enumerate() {
                let e = p.total().object(&format!("({},{label})", b.object_name(o))).unwrap();
                for &f in b.out_arrows(o) {
                    let image = &z.set(b.cod(f))[z.act(f, x)];
                    let want = format!("({},{image})", b.object_name(b.cod(f)));
                    assert_eq!(p.total().object_name(p.transport(e, f)), want);
                }
            }
        }
    }
}

#[test]
fn pullbacks() {
    for (name, p) in opfibration_corpus().into_iter().step_by(3) {
        let b = p.base().clone();
        let (q, top) = pullback(&p, &FinFunctor::identity(b.clone())).unwrap();
        assert_eq!(q, p, "{name}");
        assert!(top.is_identity());
        for f in enumerate_functors(&walking_arrow(), &b, &mut budget()).unwrap() {
            let (q, top) = pullback(&p, &f).unwrap();
            for x in f.source().objects() {
                assert_eq!(q.fibre(x).len(), p.fibre(f.obj(x)).len(), "{name}");
                for &e in q.fibre(x) {
                    assert_eq!(p.functor().obj(top.obj(e)), f.obj(x));
                }
            }
        }
    }
}

#[test]
fn pulling_elements_back_to_a_point() {
    let b = chain3();
    for z in set_diagrams::<FinSetFunctor>(&b, 2, &mut budget()).unwrap().iter().step_by(5) {
        let p = elements_of(z).unwrap();
        for o in b.objects() {
            let (q, _) = pullback(&p, &FinFunctor::pick(b.clone(), o)).unwrap();
            assert!(q.total().is_discrete());
            assert_eq!(q.total().object_count(), z.card(o));
        }
    }
}

#[test]
fn comma_sizes() {
    let point = pt();
    let c = comma(&FinFunctor::identity(point.clone()), &FinFunctor::identity(point.clone())).unwrap();
    assert_eq!((c.apex.object_count(), c.apex.arrow_count()), (1, 1));
    let target = chain3();
    let o = |n: &str| target.object(n).unwrap();
    let two = std::sync::Arc::new(FinCat::discrete(["x", "y"]));
    let map = |objs: Vec<Obj>| {
        let arrows = objs.iter().map(|&x| target.identity(x)).collect();
        FinFunctor::new(two.clone(), target.clone(), objs, arrows).unwrap()
    };
    let (f, g) = (map(vec![o("a"), o("b")]), map(vec![o("b"), o("c")]));
    let cone = comma(&f, &g).unwrap();
    cone.validate().unwrap();
    let mut expected = 0;
    for a in two.objects() {
        for b in two.objects() {
            expected += target.hom(f.obj(a), g.obj(b)).len();
        }
    }
    assert_eq!(cone.apex.object_count(), expected);
    let check = verify_comma_universal(&cone, &f, &g, 2, &mut budget()).unwrap();
    assert!(check.cones > 0);
}

#[test]
fn lax_limits() {
    let point = pt();
    let (_, p) = lax_limit_of_arrow(&FinFunctor::pick(point.clone(), Obj(0))).unwrap();
    assert_eq!(p.total().object_count(), 1);
    assert!(p.functor().is_isomorphism());
    let w = walking_arrow();
    let a = w.object("a").unwrap();
    let (cone, p) = lax_limit_of_arrow(&FinFunctor::pick(w.clone(), a)).unwrap();
    let sizes: Vec<usize> = w.objects().map(|o| p.fibre(o).len()).collect();
    let homs: Vec<usize> = w.objects().map(|o| w.hom(a, o).len()).collect();
    assert_eq!(sizes, homs);
    assert_eq!(sizes, vec![1, 1]);
    for (_, b) in base_categories() {
        for o in b.objects() {
            let (cone, p) = lax_limit_of_arrow(&FinFunctor::pick(b.clone(), o)).unwrap();
            for e in p.total().objects() {
                let alpha = cone.filler.component(e);
                for &g in b.out_arrows(p.functor().obj(e)) {
                    assert_eq!(cone.filler.component(p.transport(e, g)), b.comp(g, alpha));
                }
            }
        }
    }
    assert_eq!(cone.apex, *p.total());
}

#[test]
fn elements_of_small_functors() {
    for (_, b) in base_categories() {
        let one = FinSetFunctor::terminal(b.clone());
        let p = elements_of(&one).unwrap();
        assert!(p.functor().is_isomorphism());
        assert!(fiber_functor(&certify_dopf(&FinFunctor::identity(b.clone())).unwrap()).is_terminal());
        for z in set_diagrams::<FinSetFunctor>(&b, 2, &mut budget()).unwrap().iter().step_by(11) {
            let p = elements_of(z).unwrap();
            for o in b.objects() {
                let fibre: Vec<String> = p
                    .fibre(o)
                    .iter()
                    .map(|&e| {
                        let n = p.total().object_name(e);
                        n[b.object_name(o).len() + 2..n.len() - 1].to_string()
                    })
                    .collect();
                let mut sorted = fibre.clone();
                sorted.sort();
                assert_eq!(sorted, z.set(o));
            }
            assert!(set_iso(&fiber_functor(&p), z, &mut budget()).unwrap().is_some());
        }
    }
    let two = FinSetFunctor::new(pt(), vec![vec!["0".into(), "1".into()]], vec![vec![0, 1]]).unwrap();
    let p = elements_of(&two).unwrap();
    assert!(p.total().is_discrete());
    assert_eq!(p.total().object_count(), 2);
}
