use std::collections::BTreeMap;
use std::sync::Arc;

use tck::cat2::fiber_functor;
use tck::classifier::char;
use tck::corpus::{
    non_stack_counterexample, omega_j_data, open_site, open_topology, opfibration_corpus, presheaf_fixtures,
    prestack_fixtures, sites,
};
use tck::fincat::{build_category, Arr, CategoryTables, FinCat, FinFunctor, Obj, SetDiagram, SetPresheaf, SliceFamily};
use tck::prestack::{certify_dopf_pre, CatPresheaf, DiscOpfibPre, TwoNat};
use tck::search::{Budget, DEFAULT_BOUND};
use tck::site::{amalgamations, matching_families, sieve_generate, GrothTopology, Sieve};
use tck::stacks::{
    char_stacks, check_stack, effectiveness, ell_factors, omega_j_probe, validate_descent, DescentDatum,
};
use tck::Error;

fn budget() -> Budget {
    Budget::new(DEFAULT_BOUND)
}

fn joint(cat: &FinCat) -> Sieve {
    let a = |n: &str| cat.arrow(n).unwrap();
    sieve_generate(cat, cat.object("12").unwrap(), &[a("1<12"), a("2<12")]).unwrap()
}

/// One object whose only non-identity arrow is an involution.
fn involution() -> Arc<FinCat> {
    let t = CategoryTables::new()
        .object("*")
        .arrow("id", "*", "*")
        .arrow("s", "*", "*")
        .identity("*", "id")
        .composite("id", "id", "id")
        .composite("id", "s", "s")
        .composite("s", "id", "s")
        .composite("s", "s", "id");
    Arc::new(build_category(&t).unwrap())
}

fn constant(base: &Arc<FinCat>, cat: Arc<FinCat>) -> CatPresheaf {
    let cats = vec![cat.clone(); base.object_count()];
    let actions = vec![FinFunctor::identity(cat); base.arrow_count()];
    CatPresheaf::new(base.clone(), cats, actions).unwrap()
}

fn identity_isos(f: &CatPresheaf, s: &Sieve, objects: &[Obj]) -> BTreeMap<(Arr, Arr), Arr> {
    let b = f.base();
    let mut isos = BTreeMap::new();
    for (i, &a) in s.arrows().iter().enumerate() {
        for &g in b.in_arrows(b.dom(a)) {
            isos.insert((a, g), f.at(b.dom(g)).identity(f.action(g).obj(objects[i])));
        }
    }
    isos
}

#[test]
fn mismatched_iso_breaks_the_cocycle() {
    let cat = open_site();
    let f = constant(&cat, involution());
    let s = joint(&cat);
    let objects = vec![Obj(0); s.len()];
    let mut isos = identity_isos(&f, &s, &objects);
    let one = cat.arrow("1<12").unwrap();
    isos.insert((one, cat.identity(cat.object("1").unwrap())), f.at(Obj(0)).arrow("s").unwrap());
    let d = DescentDatum::new(f.clone(), s.clone(), objects.clone(), isos).unwrap();
    match validate_descent(&d) {
        Err(Error::CocycleViolation { f, .. }) => assert_eq!(f, "1<12"),
        other => panic!("expected a cocycle violation, got {other:?}"),
    }
    let fine = DescentDatum::new(f.clone(), s.clone(), objects.clone(), identity_isos(&f, &s, &objects)).unwrap();
    validate_descent(&fine).unwrap();
}

#[test]
fn empty_sieve_datum_is_vacuous() {
    let cat = open_site();
    let f = constant(&cat, involution());
    let d = DescentDatum::new(f, Sieve::empty(cat.object("12").unwrap()), vec![], BTreeMap::new()).unwrap();
    validate_descent(&d).unwrap();
    assert_eq!(effectiveness(&d, &mut budget()).unwrap().len(), 1);
}

#[test]
fn matching_family_without_amalgamation_is_not_effective() {
    let cat = open_site();
    let empty_top = |o: Obj| cat.object_name(o) == "12";
    let sets = cat.objects().map(|o| if empty_top(o) { vec![] } else { vec!["*".to_string()] }).collect();
    let maps = cat.arrows().map(|a| if empty_top(cat.cod(a)) { vec![] } else { vec![0] }).collect();
    let z = SetPresheaf::new(cat.clone(), sets, maps).unwrap();
    let f = CatPresheaf::discrete(&z);
    let s = joint(&cat);
    let objects = vec![Obj(0); s.len()];
    let d = DescentDatum::new(f.clone(), s.clone(), objects.clone(), identity_isos(&f, &s, &objects)).unwrap();
    validate_descent(&d).unwrap();
    assert!(effectiveness(&d, &mut budget()).unwrap().is_empty());
    let r = check_stack(&f, &open_topology(), &mut budget()).unwrap();
    assert_eq!(r.failure.unwrap().object, "12");
}

#[test]
fn discrete_witnesses_are_amalgamations() {
    let cat = open_site();
    let s = joint(&cat);
    let top = s.at();
    let mut families = 0;
    for z in presheaf_fixtures(&cat, 25) {
        let f = CatPresheaf::discrete(&z);
        for m in matching_families(&z, &s, &mut budget()).unwrap() {
            let objects: Vec<Obj> = s.arrows().iter().map(|&a| Obj(m.value(a).unwrap())).collect();
            let d = DescentDatum::new(f.clone(), s.clone(), objects.clone(), identity_isos(&f, &s, &objects)).unwrap();
            let mut witnessed: Vec<usize> =
                effectiveness(&d, &mut budget()).unwrap().iter().map(|w| w.object.0).collect();
            witnessed.sort();
            let mut amalgamated = amalgamations(&z, &m);
            amalgamated.sort();
            assert_eq!(witnessed, amalgamated, "{}", m.label(&z));
            assert!(amalgamated.iter().all(|&x| x < z.card(top)));
            families += 1;
        }
    }
    assert!(families > 25);
}

#[test]
fn every_prestack_is_a_stack_for_the_trivial_topology() {
    for (name, f) in prestack_fixtures() {
        let j = GrothTopology::trivial(f.base().clone());
        assert!(check_stack(&f, &j, &mut budget()).unwrap().is_stack(), "{name}");
    }
}

#[test]
fn representables_are_stacks_on_open_site() {
    let cat = open_site();
    let j = open_topology();
    for c in cat.objects() {
        let y = CatPresheaf::discrete(&SetPresheaf::representable(cat.clone(), c));
        let r = check_stack(&y, &j, &mut budget()).unwrap();
        assert!(r.is_stack(), "{}", cat.object_name(c));
        assert!(r.descent_data > 0);
    }
}

#[test]
fn characteristic_map_of_an_identity_factors() {
    for (_, cat) in sites() {
        let slices = SliceFamily::new(cat.clone());
        let j = GrothTopology::trivial(cat.clone());
        let f = CatPresheaf::terminal(cat.clone());
        let z = char(&DiscOpfibPre::identity(&f), &slices).unwrap();
        assert!(ell_factors(&z, &j, &mut budget()).unwrap().is_ok());
    }
}

#[test]
fn non_sheaf_value_is_pinpointed() {
    let phi = non_stack_counterexample();
    let slices = SliceFamily::new(open_site());
    let z = char(&phi, &slices).unwrap();
    let fail = ell_factors(&z, &open_topology(), &mut budget()).unwrap().unwrap_err();
    assert_eq!(z.base().object_name(fail.object), "12");
    assert!(fail.description.contains("`12`"));
    let err = char_stacks(&phi, &open_topology(), &slices, false, &mut budget()).unwrap_err();
    assert!(matches!(err, Error::FactorizationFailed(_)));
}

#[test]
fn point_site_char_stacks_takes_fibres() {
    let pt = Arc::new(FinCat::point());
    let slices = SliceFamily::new(pt.clone());
    let j = GrothTopology::trivial(pt.clone());
    for (name, p) in opfibration_corpus().into_iter().step_by(5) {
        let over = constant(&pt, p.base().clone());
        let total = constant(&pt, p.total().clone());
        let phi = certify_dopf_pre(&TwoNat::new(total, over, vec![p.functor().clone()]).unwrap()).unwrap();
        let zj = char_stacks(&phi, &j, &slices, false, &mut budget()).unwrap();
        let fibres = fiber_functor(&p);
        for x in p.base().objects() {
            assert_eq!(zj.map().points(Obj(0), x).len(), fibres.card(x), "{name}");
        }
    }
}

#[test]
fn local_sheaves_glue_to_pairs() {
    let mut seen = 0;
    for (name, d) in omega_j_data() {
        let g = omega_j_probe(&d, &mut budget()).unwrap();
        let cat = d.slices().base().clone();
        let top = d.slices().slice(d.sieve().at()).top(&cat);
        if let Some(rest) = name.strip_prefix("local-") {
            let (n1, n2) = rest.split_once('-').unwrap();
            let (n1, n2): (usize, usize) = (n1.parse().unwrap(), n2.parse().unwrap());
            assert_eq!(g.glued.card(top), n1 * n2, "{name}");
            seen += 1;
        }
        if name == "empty-sieve" {
            assert!(d.sieve().is_empty());
            assert!(g.psi.is_empty());
            assert_eq!(g.glued.card(top), 1);
        }
    }
    assert_eq!(seen, 16);
}
