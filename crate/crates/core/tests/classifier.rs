use std::sync::Arc;

use tck::cat2::{elements_of, fiber_functor};
use tck::classifier::{
    char, classify, enumerate_omega_modifications, ff_check, from_representable, gamma_mod, j_forward, j_inverse,
    omega_iso, omega_point, roundtrip_fibration, roundtrip_map, MapToOmega, OmegaModification,
};
use tck::corpus::{
    chain3, comm_square, opfibration_corpus, presheaf_fixtures, prestack_fixtures, prestack_opfibrations, pt, sites,
    walking_arrow,
};
use tck::fincat::{set_iso, FinCat, FinFunctor, Obj, SetDiagram, SetNat, SetPresheaf, SliceFamily};
use tck::prestack::{certify_dopf_pre, fib_iso, representable, CatPresheaf, DiscOpfibPre, TwoNat};
use tck::search::{Budget, DEFAULT_BOUND};

fn budget() -> Budget {
    Budget::new(DEFAULT_BOUND)
}

fn over_point(p: &tck::cat2::DiscOpfibCat) -> DiscOpfibPre {
    let pt = pt();
    let wrap =
        |c: &Arc<FinCat>| CatPresheaf::new(pt.clone(), vec![c.clone()], vec![FinFunctor::identity(c.clone())]).unwrap();
    certify_dopf_pre(&TwoNat::new(wrap(p.total()), wrap(p.base()), vec![p.functor().clone()]).unwrap()).unwrap()
}

#[test]
fn constant_map_at_the_point() {
    for (name, f) in prestack_fixtures() {
        let slices = SliceFamily::new(f.base().clone());
        let z = omega_point(&slices, &f);
        let b = f.base();
        for c in b.objects() {
            for x in f.at(c).objects() {
                assert!(z.value(c, x).is_terminal(), "{name}");
                for &h in b.in_arrows(c) {
                    assert!(z.value(c, x).reindex(slices.postcompose(h)).unwrap().is_terminal());
                }
            }
            for nu in f.at(c).arrows() {
                let v = z.value(c, f.at(c).dom(nu));
                assert_eq!(z.arrow_value(c, nu), &SetNat::identity(v), "{name}");
            }
        }
        let p = classify(&z).unwrap();
        assert_eq!(p.max_fibre(), 1, "{name}");
        assert!(b.objects().all(|c| f.at(c).objects().all(|x| p.fibre(c, x).len() == 1)));
    }
}

#[test]
fn char_of_an_identity_is_the_point() {
    for (name, f) in prestack_fixtures() {
        let slices = SliceFamily::new(f.base().clone());
        let z = char(&DiscOpfibPre::identity(&f), &slices).unwrap();
        for c in f.base().objects() {
            for x in f.at(c).objects() {
                assert!(z.value(c, x).is_terminal(), "{name}");
            }
        }
        assert!(omega_iso(&z, &omega_point(&slices, &f), &mut budget()).unwrap().is_some());
    }
}

#[test]
fn char_over_the_point_takes_fibres() {
    let slices = SliceFamily::new(pt());
    for (name, p) in opfibration_corpus() {
        let z = char(&over_point(&p), &slices).unwrap();
        let fibres = fiber_functor(&p);
        for x in p.base().objects() {
            assert_eq!(z.points(Obj(0), x), fibres.set(x), "{name}");
        }
        let back = classify(&z).unwrap();
        let el = elements_of(&fiber_functor(&p)).unwrap();
        assert_eq!(back.total().at(Obj(0)).object_count(), el.total().object_count(), "{name}");
    }
}

#[test]
fn identity_modifications_give_identities() {
    for (name, phi) in prestack_opfibrations().into_iter().step_by(4) {
        let slices = SliceFamily::new(phi.base().clone());
        let z = char(&phi, &slices).unwrap();
        let t = gamma_mod(&OmegaModification::identity(&z)).unwrap();
        assert!(t.is_identity(), "{name}");
    }
}

fn maps_at(slices: &Arc<SliceFamily>, c: Obj, count: usize) -> Vec<MapToOmega> {
    presheaf_fixtures(slices.slice(c).cat(), count).iter().map(|z| from_representable(slices, c, z).unwrap()).collect()
}

#[test]
fn gamma_mod_is_functorial() {
    let w = walking_arrow();
    let slices = SliceFamily::new(w.clone());
    let maps = maps_at(&slices, w.object("b").unwrap(), 4);
    let mut composites = 0;
    for z1 in &maps {
        for z2 in &maps {
            for z3 in &maps {
                let firsts = enumerate_omega_modifications(z1, z2, &mut budget()).unwrap();
                let seconds = enumerate_omega_modifications(z2, z3, &mut budget()).unwrap();
                for a in &firsts {
                    for b in &seconds {
                        let whole = gamma_mod(&b.after(a).unwrap()).unwrap();
                        let parts = gamma_mod(b).unwrap().after(&gamma_mod(a).unwrap()).unwrap();
                        assert_eq!(whole.components(), parts.components());
                        composites += 1;
                    }
                }
            }
        }
    }
    assert!(composites > 10);
}

#[test]
fn gamma_mod_over_the_point_acts_on_elements() {
    let slices = SliceFamily::new(pt());
    let top = slices.slice(Obj(0)).top(&pt());
    for (name, p) in opfibration_corpus().into_iter().step_by(6) {
        let z = char(&over_point(&p), &slices).unwrap();
        let f = z.source().at(Obj(0)).clone();
        for alpha in enumerate_omega_modifications(&z, &z, &mut budget()).unwrap() {
            let t = gamma_mod(&alpha).unwrap();
            let (g, comp) = (t.source().at(Obj(0)), t.component(Obj(0)));
            for x in f.objects() {
                let pts = z.points(Obj(0), x);
                for (i, label) in pts.iter().enumerate() {
                    let from = g.object(&format!("({},{label})", f.object_name(x))).unwrap();
                    let image = &pts[alpha.component(Obj(0), x).component(top)[i]];
                    let want = format!("({},{image})", f.object_name(x));
                    assert_eq!(t.target().at(Obj(0)).object_name(comp.obj(from)), want, "{name}");
                }
            }
        }
    }
}

#[test]
fn j_forward_of_the_point_is_the_identity() {
    for (_, cat) in sites() {
        let slices = SliceFamily::new(cat.clone());
        for c in cat.objects() {
            let one = SetPresheaf::terminal(slices.slice(c).cat().clone());
            let psi = j_forward(&slices, c, &one).unwrap();
            let id = DiscOpfibPre::identity(&representable(&cat, c));
            assert!(fib_iso(&psi, &id, &mut budget()).unwrap().is_some());
            assert!(j_inverse(&slices, c, &id).unwrap().is_terminal());
        }
    }
}

#[test]
fn fibres_of_j_forward_are_the_values() {
    let cat = chain3();
    let slices = SliceFamily::new(cat.clone());
    let c = cat.object("c").unwrap();
    let sl = slices.slice(c);
    assert_eq!(sl.cat().object_count(), 3);
    let y = representable(&cat, c);
    for z in presheaf_fixtures(sl.cat(), 15) {
        let psi = j_forward(&slices, c, &z).unwrap();
        for o in sl.cat().objects() {
            let f = sl.base_arrow(o);
            let d = cat.dom(f);
            let x = y.at(d).object(cat.arrow_name(f)).unwrap();
            assert_eq!(psi.fibre(d, x).len(), z.card(o));
        }
    }
}

#[test]
fn values_only_at_the_identity_concentrate_the_total_space() {
    let cat = comm_square();
    let slices = SliceFamily::new(cat.clone());
    let a = cat.object("a").unwrap();
    let sl = slices.slice(a);
    assert_eq!(sl.cat().object_count(), 1);
    let z = SetPresheaf::new(sl.cat().clone(), vec![vec!["p".into(), "q".into()]], vec![vec![0, 1]]).unwrap();
    let psi = j_forward(&slices, a, &z).unwrap();
    for c in cat.objects() {
        assert_eq!(psi.total().at(c).object_count(), if c == a { 2 } else { 0 });
    }
}

#[test]
fn j_inverse_recovers_yoneda_values() {
    for (_, cat) in sites() {
        let slices = SliceFamily::new(cat.clone());
        for c in cat.objects() {
            for z in presheaf_fixtures(slices.slice(c).cat(), 6) {
                let psi = classify(&from_representable(&slices, c, &z).unwrap()).unwrap();
                let back = j_inverse(&slices, c, &psi).unwrap();
                assert!(set_iso(&back, &z, &mut budget()).unwrap().is_some());
            }
        }
    }
}

#[test]
fn terminal_presheaf_has_one_modification() {
    for (_, cat) in sites() {
        let slices = SliceFamily::new(cat.clone());
        let f = CatPresheaf::terminal(cat.clone());
        let z = omega_point(&slices, &f);
        let r = ff_check(&z, &z, &mut budget()).unwrap();
        assert_eq!((r.modifications, r.fib_homs), (1, 1));
    }
}

#[test]
fn fully_faithful_over_a_glued_prestack() {
    let (name, f) = prestack_fixtures().into_iter().find(|(n, _)| n.contains("yb+yc")).unwrap();
    let phis: Vec<DiscOpfibPre> =
        prestack_opfibrations().into_iter().filter(|(n, _)| n.starts_with(&name)).map(|(_, p)| p).collect();
    assert!(phis.len() >= 4);
    let slices = SliceFamily::new(f.base().clone());
    let maps: Vec<MapToOmega> = phis.iter().map(|p| char(p, &slices).unwrap()).collect();
    let mut nonempty = 0;
    for z in &maps {
        for z2 in &maps {
            let r = ff_check(z, z2, &mut budget()).unwrap();
            assert_eq!(r.modifications, r.fib_homs);
            nonempty += (r.fib_homs > 0) as usize;
        }
    }
    assert!(nonempty >= maps.len());
}

#[test]
fn identity_round_trips() {
    for (name, f) in prestack_fixtures() {
        let slices = SliceFamily::new(f.base().clone());
        let phi = DiscOpfibPre::identity(&f);
        roundtrip_fibration(&phi, &slices, &mut budget()).unwrap_or_else(|e| panic!("{name}: {e}"));
        let z = omega_point(&slices, &f);
        assert!(roundtrip_map(&z, &mut budget()).unwrap().is_iso());
    }
}

#[test]
fn point_site_fixtures_reproduce_the_cat_equivalence() {
    let slices = SliceFamily::new(pt());
    for (name, p) in opfibration_corpus().into_iter().filter(|(n, _)| n.starts_with("Pt") || n.contains("Walking")) {
        let phi = over_point(&p);
        roundtrip_fibration(&phi, &slices, &mut budget()).unwrap_or_else(|e| panic!("{name}: {e}"));
        roundtrip_map(&char(&phi, &slices).unwrap(), &mut budget()).unwrap();
    }
}
