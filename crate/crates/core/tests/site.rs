use std::sync::Arc;

use tck::corpus::{non_separated, open_sheaves, open_site, open_topology, sites};
use tck::fincat::{FinCat, Obj, SetDiagram, SetPresheaf, SliceFamily};
use tck::search::{Budget, DEFAULT_BOUND};
use tck::site::{
    amalgamations, is_separated, is_sheaf, matching_families, plus, pullback_sieve, sheafify, sieve_generate,
    slice_topology, subcanonical_check, validate_topology, GrothTopology, Sieve,
};

fn budget() -> Budget {
    Budget::new(DEFAULT_BOUND)
}

fn joint(cat: &FinCat) -> Sieve {
    let a = |n: &str| cat.arrow(n).unwrap();
    sieve_generate(cat, cat.object("12").unwrap(), &[a("1<12"), a("2<12")]).unwrap()
}

/// `{0,1}` on every nonempty open, restrictions identities, `{*}` on the empty open.
fn two_valued(cat: &Arc<FinCat>) -> SetPresheaf {
    let empty = |o: Obj| cat.object_name(o) == "0";
    let sets = cat.objects().map(|o| if empty(o) { vec!["*".into()] } else { vec!["0".into(), "1".into()] }).collect();
    let maps = cat
        .arrows()
        .map(|a| match (empty(cat.cod(a)), empty(cat.dom(a))) {
            (true, _) => vec![0],
            (false, true) => vec![0, 0],
            _ => vec![0, 1],
        })
        .collect();
    SetPresheaf::new(cat.clone(), sets, maps).unwrap()
}

#[test]
fn generated_sieves() {
    for (_, cat) in sites() {
        for c in cat.objects() {
            assert!(sieve_generate(&cat, c, &[cat.identity(c)]).unwrap().is_maximal(&cat));
            assert!(sieve_generate(&cat, c, &[]).unwrap().is_empty());
        }
    }
    let cat = open_site();
    let s = joint(&cat);
    assert!(s.contains(cat.arrow("0<12").unwrap()));
    assert_eq!(s.len(), 3);
}

#[test]
fn pullbacks_of_sieves() {
    for (_, cat) in sites() {
        for c in cat.objects() {
            let max = Sieve::maximal(&cat, c);
            assert_eq!(pullback_sieve(&cat, cat.identity(c), &max), max);
            for &g in cat.in_arrows(c) {
                assert!(pullback_sieve(&cat, g, &max).is_maximal(&cat));
            }
        }
    }
    let cat = open_site();
    let s = joint(&cat);
    assert_eq!(pullback_sieve(&cat, cat.identity(s.at()), &s), s);
    assert!(pullback_sieve(&cat, cat.arrow("1<12").unwrap(), &s).is_maximal(&cat));
}

#[test]
fn shipped_topologies_are_valid_and_subcanonical() {
    for (name, cat) in sites() {
        let j = GrothTopology::trivial(cat.clone());
        validate_topology(&j, &mut budget()).unwrap();
        subcanonical_check(&j, &mut budget()).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
    let j = open_topology();
    validate_topology(&j, &mut budget()).unwrap();
    subcanonical_check(&j, &mut budget()).unwrap();
}

#[test]
fn slice_topologies() {
    for (_, cat) in sites() {
        let slices = SliceFamily::new(cat.clone());
        let j = GrothTopology::trivial(cat.clone());
        for c in cat.objects() {
            let t = slice_topology(&j, &slices, c);
            assert_eq!(t, GrothTopology::trivial(slices.slice(c).cat().clone()));
        }
    }
    let cat = open_site();
    let slices = SliceFamily::new(cat.clone());
    let j = open_topology();
    for c in cat.objects() {
        let t = slice_topology(&j, &slices, c);
        validate_topology(&t, &mut budget()).unwrap();
        let sc = slices.slice(c).cat();
        for o in sc.objects() {
            assert!(t.is_covering(&Sieve::maximal(sc, o)));
        }
    }
    let twelve = cat.object("12").unwrap();
    let sl = slices.slice(twelve);
    let t = slice_topology(&j, &slices, twelve);
    let top = sl.top(&cat);
    let images: Vec<Vec<&str>> = t
        .covers(top)
        .iter()
        .map(|s| {
            let mut v: Vec<&str> = s.arrows().iter().map(|&a| cat.arrow_name(sl.underlying(a))).collect();
            v.sort();
            v
        })
        .collect();
    assert!(images.contains(&vec!["0<12", "1<12", "2<12"]));
}

#[test]
fn matching_families_on_extreme_sieves() {
    let cat = open_site();
    for z in open_sheaves().iter().chain([non_separated()].iter()) {
        for c in cat.objects() {
            let max = Sieve::maximal(&cat, c);
            let fams = matching_families(z, &max, &mut budget()).unwrap();
            assert_eq!(fams.len(), z.card(c));
            for m in &fams {
                assert_eq!(amalgamations(z, m).len(), 1);
            }
            let none = matching_families(z, &Sieve::empty(c), &mut budget()).unwrap();
            assert_eq!(none.len(), 1);
            assert_eq!(amalgamations(z, &none[0]).len(), z.card(c));
        }
    }
}

#[test]
fn independent_choices_over_the_joint_cover() {
    let cat = open_site();
    let z = two_valued(&cat);
    assert_eq!(matching_families(&z, &joint(&cat), &mut budget()).unwrap().len(), 4);
    assert!(!is_sheaf(&z, &open_topology(), &mut budget()).unwrap());
    assert!(is_separated(&z, &open_topology(), &mut budget()).unwrap());
    let s = sheafify(&z, &open_topology(), &mut budget()).unwrap();
    assert_eq!(s.card(cat.object("12").unwrap()), 4);
}

#[test]
fn terminal_presheaf_is_a_fixed_sheaf() {
    for (_, cat) in sites() {
        let one = SetPresheaf::terminal(cat.clone());
        let j = GrothTopology::discrete(cat.clone(), &mut budget()).unwrap();
        for j in [GrothTopology::trivial(cat.clone()), j] {
            assert!(is_sheaf(&one, &j, &mut budget()).unwrap());
            assert!(plus(&one, &j, &mut budget()).unwrap().is_terminal());
        }
    }
}

#[test]
fn representables_on_open_site_are_sheaves() {
    let cat = open_site();
    for c in cat.objects() {
        let y = SetPresheaf::representable(cat.clone(), c);
        assert!(is_sheaf(&y, &open_topology(), &mut budget()).unwrap());
    }
}

#[test]
fn non_separated_presheaf() {
    let cat = open_site();
    let z = non_separated();
    let j = open_topology();
    assert!(!is_separated(&z, &j, &mut budget()).unwrap());
    let fams = matching_families(&z, &joint(&cat), &mut budget()).unwrap();
    assert_eq!(fams.len(), 1);
    assert_eq!(amalgamations(&z, &fams[0]).len(), 2);
    let p = plus(&z, &j, &mut budget()).unwrap();
    assert_eq!(p.card(cat.object("12").unwrap()), 1);
    assert!(is_sheaf(&p, &j, &mut budget()).unwrap());
}
