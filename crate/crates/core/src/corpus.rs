//! Shipped fixtures: small sites, topologies (valid and broken), presheaves,
//! prestacks and discrete opfibrations, plus the generators behind them.
//! Everything here is deterministic.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cat2::{elements_of, lax_limit_of_arrow, DiscOpfibCat};
use crate::classifier::{char, from_representable, MapToOmega};
use crate::error::Result;
use crate::fincat::{
    enumerate_set_nats, set_iso, Arr, CategoryTables, FinCat, FinFunctor, FinSetFunctor, Obj, RawCat, SetDiagram,
    SetNat, SetPresheaf, SliceFamily,
};
use crate::prestack::{certify_dopf_pre, discrete_map, CatPresheaf, DiscOpfibPre, TwoNat};
use crate::search::{solve, Budget};
use crate::site::{sieve_generate, GrothTopology, Sieve};
use crate::stacks::OmegaJDatum;

fn arc(c: Result<FinCat>) -> Arc<FinCat> {
    Arc::new(c.expect("shipped fixture"))
}

pub fn pt() -> Arc<FinCat> {
    Arc::new(FinCat::point())
}

/// `a --u--> b`.
pub fn walking_arrow() -> Arc<FinCat> {
    arc(FinCat::free(&["a", "b"], &[("u", "a", "b")]))
}

/// `a ==s,t==> b`.
pub fn parallel_pair() -> Arc<FinCat> {
    arc(FinCat::free(&["a", "b"], &[("s", "a", "b"), ("t", "a", "b")]))
}

/// `a --f--> b --g--> c`.
pub fn chain3() -> Arc<FinCat> {
    arc(FinCat::free(&["a", "b", "c"], &[("f", "a", "b"), ("g", "b", "c")]))
}

/// `h∘f = k∘g = d` for `f: a→b`, `g: a→c`, `h: b→d`, `k: c→d`.
pub fn comm_square() -> Arc<FinCat> {
    let mut t = CategoryTables::new();
    for o in ["a", "b", "c", "d"] {
        t = t.object(o).arrow(&format!("id_{o}"), o, o).identity(o, &format!("id_{o}"));
    }
    arc(t
        .arrow("f", "a", "b")
        .arrow("g", "a", "c")
        .arrow("h", "b", "d")
        .arrow("k", "c", "d")
        .arrow("diag", "a", "d")
        .composite("h", "f", "diag")
        .composite("k", "g", "diag")
        .build())
}

/// One object with an idempotent `e`.
pub fn idempotent() -> Arc<FinCat> {
    arc(CategoryTables::new()
        .object("x")
        .arrow("id_x", "x", "x")
        .arrow("e", "x", "x")
        .identity("x", "id_x")
        .composite("e", "e", "e")
        .build())
}

/// Opens of the discrete space `{1,2}` ordered by inclusion, named `0`
/// (empty), `1`, `2`, `12`.
pub fn open_site() -> Arc<FinCat> {
    arc(FinCat::poset(&["0", "1", "2", "12"], &[("0", "1"), ("0", "2"), ("0", "12"), ("1", "12"), ("2", "12")]))
}

/// The six base categories of the opfibration corpus.
pub fn base_categories() -> Vec<(&'static str, Arc<FinCat>)> {
    vec![
        ("Pt", pt()),
        ("WalkingArrow", walking_arrow()),
        ("ParallelPair", parallel_pair()),
        ("Chain3", chain3()),
        ("CommSquare", comm_square()),
        ("Idempotent", idempotent()),
    ]
}

/// The base categories and `OpenSite`.
pub fn sites() -> Vec<(&'static str, Arc<FinCat>)> {
    let mut out = base_categories();
    out.push(("OpenSite", open_site()));
    out
}

/// Open covers: `{1,2}` is covered jointly by `{1}` and `{2}`, and the empty
/// open by the empty family.
pub fn open_topology() -> GrothTopology {
    let cat = open_site();
    let o = |n: &str| cat.object(n).unwrap();
    let a = |n: &str| cat.arrow(n).unwrap();
    GrothTopology::from_families(cat.clone(), &[(o("12"), vec![a("1<12"), a("2<12")]), (o("0"), vec![])])
        .and_then(|j| j.close(&mut Budget::new(u64::MAX)))
        .expect("shipped topology")
}

fn sieve(cat: &FinCat, at: &str, gens: &[&str]) -> Sieve {
    let arrows: Vec<Arr> = gens.iter().map(|g| cat.arrow(g).unwrap()).collect();
    sieve_generate(cat, cat.object(at).unwrap(), &arrows).expect("shipped sieve")
}

/// Three families on `OpenSite`, each breaking exactly one axiom; paired
/// with the name of the axiom that is checked to fail.
pub fn broken_topologies() -> Vec<(&'static str, GrothTopology)> {
    let cat = open_site();
    let max = |o: &str| Sieve::maximal(&cat, cat.object(o).unwrap());
    let covers = |list: Vec<(&str, Sieve)>| {
        let mut out = vec![Vec::new(); cat.object_count()];
        for (o, s) in list {
            out[cat.object(o).unwrap().0].push(s);
        }
        GrothTopology::new(cat.clone(), out).expect("shipped family")
    };
    let empty0 = Sieve::empty(cat.object("0").unwrap());
    let joint = sieve(&cat, "12", &["1<12", "2<12"]);
    vec![
        (
            "maximality",
            covers(vec![
                ("0", max("0")),
                ("0", empty0.clone()),
                ("1", max("1")),
                ("12", max("12")),
                ("12", joint.clone()),
            ]),
        ),
        (
            "stability",
            covers(vec![
                ("0", max("0")),
                ("0", empty0.clone()),
                ("1", max("1")),
                ("2", max("2")),
                ("12", max("12")),
                ("12", sieve(&cat, "12", &["1<12"])),
            ]),
        ),
        (
            "transitivity",
            covers(vec![
                ("0", max("0")),
                ("0", empty0),
                ("1", max("1")),
                ("1", sieve(&cat, "1", &["0<1"])),
                ("2", max("2")),
                ("12", max("12")),
                ("12", joint),
            ]),
        ),
    ]
}

/// `0, 1, ...`, zero-padded so that label order is numeric order.
pub fn labels(n: usize) -> Vec<String> {
    let width = n.saturating_sub(1).to_string().len();
    (0..n).map(|i| format!("{i:0width$}")).collect()
}

/// All functions `n → m` as index tables.
pub fn functions(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    solve(
        n,
        &mut Budget::new(u64::MAX),
        |_, _| (0..m).collect(),
        |_, _| true,
        |a| {
            out.push(a.to_vec());
            true
        },
    )
    .expect("unbounded");
    out
}

/// Every set-valued diagram on `base` with the given cardinalities, sets
/// labelled `0, 1, ...`.
pub fn set_diagrams_with<D: SetDiagram>(base: &Arc<FinCat>, cards: &[usize], budget: &mut Budget) -> Result<Vec<D>> {
    let arrows: Vec<Arr> = base.arrows().filter(|&a| !base.is_identity(a)).collect();
    let var_of: BTreeMap<Arr, usize> = arrows.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let ends = |a: Arr| {
        if D::COVARIANT {
            (base.dom(a), base.cod(a))
        } else {
            (base.cod(a), base.dom(a))
        }
    };
    let domains: Vec<Vec<Vec<usize>>> = arrows
        .iter()
        .map(|&a| {
            let (s, t) = ends(a);
            functions(cards[s.0], cards[t.0])
        })
        .collect();
    let mut checks: Vec<Vec<(Arr, Arr, Arr)>> = vec![Vec::new(); arrows.len()];
    for (g, f) in base.composable_pairs() {
        let gf = base.comp(g, f);
        let vs: Vec<usize> = [g, f, gf].iter().filter_map(|a| var_of.get(a).copied()).collect();
        if let Some(&last) = vs.iter().max() {
            checks[last].push((g, f, gf));
        }
    }
    let table = |a: Arr, asg: &[usize]| -> Vec<usize> {
        match var_of.get(&a) {
            Some(&i) => domains[i][asg[i]].clone(),
            None => (0..cards[base.dom(a).0]).collect(),
        }
    };
    let mut out = Vec::new();
    solve(
        arrows.len(),
        budget,
        |i, _| (0..domains[i].len()).collect(),
        |i, asg| {
            checks[i].iter().all(|&(g, f, gf)| {
                let (tg, tf, tgf) = (table(g, asg), table(f, asg), table(gf, asg));
                let (first, second) = if D::COVARIANT { (&tf, &tg) } else { (&tg, &tf) };
                (0..tgf.len()).all(|x| second[first[x]] == tgf[x])
            })
        },
        |asg| {
            let sets = cards.iter().map(|&n| labels(n)).collect();
            let maps = base.arrows().map(|a| table(a, asg)).collect();
            out.push(D::new(base.clone(), sets, maps).expect("checked composites"));
            true
        },
    )?;
    Ok(out)
}

/// Every set-valued diagram on `base` with all cardinalities at most
/// `max_card`, cardinality vectors in lexicographic order.
pub fn set_diagrams<D: SetDiagram>(base: &Arc<FinCat>, max_card: usize, budget: &mut Budget) -> Result<Vec<D>> {
    let n = base.object_count();
    let mut out = Vec::new();
    let mut vectors = Vec::new();
    solve(
        n,
        budget,
        |_, _| (0..=max_card).collect(),
        |_, _| true,
        |v| {
            vectors.push(v.to_vec());
            true
        },
    )?;
    for cards in vectors {
        out.extend(set_diagrams_with::<D>(base, &cards, budget)?);
    }
    Ok(out)
}

/// `count` items spread evenly through `items`, keeping order.
pub fn spread<T: Clone>(items: &[T], count: usize) -> Vec<T> {
    if items.len() <= count {
        return items.to_vec();
    }
    (0..count).map(|i| items[i * items.len() / count].clone()).collect()
}

/// A copy of `p` whose total category has fresh names `e0, e1, ...`
/// assigned in reverse order, so that nothing about `p` can be recovered
/// from the naming.
pub fn disguise(p: &DiscOpfibCat) -> DiscOpfibCat {
    let e = p.total();
    let n = e.object_count();
    let m = e.arrow_count();
    let width = |k: usize| k.to_string().len();
    let mut raw = RawCat::default();
    for o in e.objects() {
        raw.objects.push(format!("e{:0w$}", n - 1 - o.0, w = width(n)));
    }
    for a in e.arrows() {
        raw.arrows.push((format!("m{:0w$}", m - 1 - a.0, w = width(m)), e.dom(a).0, e.cod(a).0));
    }
    raw.identities = e.objects().map(|o| e.identity(o).0).collect();
    for (g, f) in e.composable_pairs() {
        raw.compose.push(((g.0, f.0), e.comp(g, f).0));
    }
    let total = Arc::new(raw.into_cat());
    // reverse naming reverses index order
    let objects = e.objects().map(|o| p.functor().obj(Obj(n - 1 - o.0))).collect();
    let arrows = e.arrows().map(|a| p.functor().arr(Arr(m - 1 - a.0))).collect();
    let f = FinFunctor::new(total, p.base().clone(), objects, arrows).expect("renamed functor");
    crate::cat2::certify_dopf(&f).expect("renaming preserves opfibrations")
}

/// At least 50 discrete opfibrations with fibres of size at most 3 over the
/// six base categories, disguised so their names carry no structure.
pub fn opfibration_corpus() -> Vec<(String, DiscOpfibCat)> {
    let mut out = Vec::new();
    for (name, b) in base_categories() {
        let mut budget = Budget::new(u64::MAX);
        let mut zs: Vec<FinSetFunctor> = set_diagrams(&b, 2, &mut budget).expect("small");
        if b.object_count() == 1 {
            zs.extend(set_diagrams_with::<FinSetFunctor>(&b, &[3], &mut budget).expect("small"));
        }
        for (i, z) in spread(&zs, 10).into_iter().enumerate() {
            let p = elements_of(&z).expect("set functor");
            out.push((format!("{name}/{i}"), disguise(&p)));
        }
    }
    out
}

/// `count` presheaves on `cat` spread through all presheaves whose sets have
/// at most `k` elements, for the least `k` that gives enough of them.
pub fn presheaf_fixtures(cat: &Arc<FinCat>, count: usize) -> Vec<SetPresheaf> {
    assert!(cat.object_count() > 0, "presheaves on the empty category are unique");
    let mut budget = Budget::new(u64::MAX);
    let mut max_card = 2;
    loop {
        let all: Vec<SetPresheaf> = set_diagrams(cat, max_card, &mut budget).expect("small");
        if all.len() >= count {
            return spread(&all, count);
        }
        max_card += 1;
    }
}

/// On `OpenSite`: `{0,1}` over `{1,2}` and a point everywhere else.
pub fn non_separated() -> SetPresheaf {
    let cat = open_site();
    let top = |o: Obj| cat.object_name(o) == "12";
    let sets = cat.objects().map(|o| labels(if top(o) { 2 } else { 1 })).collect();
    let maps = cat
        .arrows()
        .map(|a| match (top(cat.cod(a)), cat.is_identity(a)) {
            (true, true) => vec![0, 1],
            (true, false) => vec![0, 0],
            _ => vec![0],
        })
        .collect();
    SetPresheaf::new(cat.clone(), sets, maps).expect("shipped fixture")
}

/// The sheaf on `OpenSite` with `n1` sections over `{1}`, `n2` over `{2}`,
/// their pairs `(i,j)` over `{1,2}` and one section over the empty open.
pub fn open_sheaf(n1: usize, n2: usize) -> SetPresheaf {
    let cat = open_site();
    let pair = |i: usize, j: usize| format!("({i},{j})");
    let mut global: Vec<(usize, usize)> = (0..n1).flat_map(|i| (0..n2).map(move |j| (i, j))).collect();
    global.sort_by_key(|&(i, j)| pair(i, j));
    let sets = cat
        .objects()
        .map(|o| match cat.object_name(o) {
            "12" => global.iter().map(|&(i, j)| pair(i, j)).collect(),
            "1" => labels(n1),
            "2" => labels(n2),
            _ => labels(1),
        })
        .collect();
    let maps = cat
        .arrows()
        .map(|a| {
            let (d, c) = (cat.object_name(cat.dom(a)), cat.object_name(cat.cod(a)));
            match (c, d) {
                ("12", "12") => (0..global.len()).collect(),
                ("12", "1") => global.iter().map(|&(i, _)| i).collect(),
                ("12", "2") => global.iter().map(|&(_, j)| j).collect(),
                ("12", _) => vec![0; global.len()],
                ("1", "1") => (0..n1).collect(),
                ("2", "2") => (0..n2).collect(),
                ("1", _) => vec![0; n1],
                ("2", _) => vec![0; n2],
                _ => vec![0],
            }
        })
        .collect();
    SetPresheaf::new(cat, sets, maps).expect("shipped fixture")
}

/// Non-representable prestacks on `WalkingArrow` and `CommSquare`.
pub fn prestack_fixtures() -> Vec<(String, CatPresheaf)> {
    let mut out = Vec::new();
    let w = walking_arrow();
    let arrow = arc(FinCat::free(&["x", "y"], &[("s", "x", "y")]));
    let p = pt();
    // F(b) = x → y, F(a) = point
    let collapse = FinFunctor::to_point(arrow.clone(), p.clone());
    let cats = vec![p.clone(), arrow.clone()];
    let actions = w
        .arrows()
        .map(|f| match w.arrow_name(f) {
            "u" => collapse.clone(),
            "id_a" => FinFunctor::identity(p.clone()),
            _ => FinFunctor::identity(arrow.clone()),
        })
        .collect();
    out.push(("WalkingArrow/arrow-over-point".into(), CatPresheaf::new(w.clone(), cats, actions).expect("fixture")));
    // F constant at x → y
    out.push(("WalkingArrow/constant-arrow".into(), constant(&w, &arrow)));
    // two points over b, one over a
    let two = SetPresheaf::new(w.clone(), vec![labels(1), labels(2)], vec![vec![0], vec![0, 1], vec![0, 0]])
        .expect("fixture");
    out.push(("WalkingArrow/two-over-one".into(), CatPresheaf::discrete(&two)));
    let sq = comm_square();
    let (b, c) = (sq.object("b").unwrap(), sq.object("c").unwrap());
    let yb = SetPresheaf::representable(sq.clone(), b);
    let yc = SetPresheaf::representable(sq.clone(), c);
    out.push(("CommSquare/yb+yc".into(), CatPresheaf::discrete(&coproduct(&yb, &yc))));
    out.push(("CommSquare/constant-arrow".into(), constant(&sq, &arrow)));
    out
}

fn constant(base: &Arc<FinCat>, cat: &Arc<FinCat>) -> CatPresheaf {
    let cats = vec![cat.clone(); base.object_count()];
    let actions = vec![FinFunctor::identity(cat.clone()); base.arrow_count()];
    CatPresheaf::new(base.clone(), cats, actions).expect("constant prestack")
}

/// `y ⊔ z`, elements tagged `l.` and `r.`.
pub fn coproduct(y: &SetPresheaf, z: &SetPresheaf) -> SetPresheaf {
    let b = y.base().clone();
    let sets: Vec<Vec<String>> = b
        .objects()
        .map(|o| {
            let mut s: Vec<String> = y.set(o).iter().map(|x| format!("l.{x}")).collect();
            s.extend(z.set(o).iter().map(|x| format!("r.{x}")));
            s
        })
        .collect();
    let maps = b
        .arrows()
        .map(|f| {
            let c = b.cod(f);
            let d = b.dom(f);
            let mut t: Vec<usize> = (0..y.card(c)).map(|x| y.act(f, x)).collect();
            t.extend((0..z.card(c)).map(|x| y.card(d) + z.act(f, x)));
            t
        })
        .collect();
    SetPresheaf::new(b, sets, maps).expect("coproduct")
}

/// Every discrete opfibration over `f` whose fibres have at most
/// `max_card` elements, up to `limit` of them.
///
/// Each one is given by set-valued functors `P_c` on `F(c)` together with
/// transition maps `P_c(X) → P_d(F(g)X)` for `g: d → c`, natural in `X` and
/// functorial in `g`.
pub fn opfibrations_over(
    f: &CatPresheaf,
    max_card: usize,
    limit: usize,
    budget: &mut Budget,
) -> Result<Vec<DiscOpfibPre>> {
    let b = f.base().clone();
    let per_object: Vec<Vec<FinSetFunctor>> =
        b.objects().map(|c| set_diagrams(f.at(c), max_card, budget)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    let mut choice = vec![0usize; b.object_count()];
    'outer: loop {
        let ps: Vec<&FinSetFunctor> = b.objects().map(|c| &per_object[c.0][choice[c.0]]).collect();
        transitions(f, &ps, budget, |phi| {
            out.push(phi);
            out.len() < limit
        })?;
        if out.len() >= limit {
            break;
        }
        for c in (0..choice.len()).rev() {
            choice[c] += 1;
            if choice[c] < per_object[c].len() {
                continue 'outer;
            }
            choice[c] = 0;
        }
        break;
    }
    Ok(out)
}

fn transitions<V>(f: &CatPresheaf, ps: &[&FinSetFunctor], budget: &mut Budget, mut visit: V) -> Result<()>
where
    V: FnMut(DiscOpfibPre) -> bool,
{
    let b = f.base().clone();
    let mut vars: Vec<(Arr, Obj)> = Vec::new();
    let mut var_of: BTreeMap<(Arr, Obj), usize> = BTreeMap::new();
    for g in b.arrows().filter(|&g| !b.is_identity(g)) {
        for x in f.at(b.cod(g)).objects() {
            var_of.insert((g, x), vars.len());
            vars.push((g, x));
        }
    }
    let target = |g: Arr, x: Obj| (b.dom(g), f.action(g).obj(x));
    let domains: Vec<Vec<Vec<usize>>> = vars
        .iter()
        .map(|&(g, x)| {
            let (d, y) = target(g, x);
            functions(ps[b.cod(g).0].card(x), ps[d.0].card(y))
        })
        .collect();
    let table = |g: Arr, x: Obj, asg: &[usize]| -> Vec<usize> {
        match var_of.get(&(g, x)) {
            Some(&i) => domains[i][asg[i]].clone(),
            None => (0..ps[b.cod(g).0].card(x)).collect(),
        }
    };
    // constraints, attached to the last variable involved
    #[derive(Clone, Copy)]
    enum K {
        Natural(Arr, Arr),
        Functorial(Arr, Arr, Obj),
    }
    let mut checks: Vec<Vec<K>> = vec![Vec::new(); vars.len()];
    for (i, &(g, x)) in vars.iter().enumerate() {
        for &nu in f.at(b.cod(g)).out_arrows(x) {
            let j = var_of[&(g, f.at(b.cod(g)).cod(nu))];
            checks[i.max(j)].push(K::Natural(g, nu));
        }
    }
    for (g, h) in b.composable_pairs() {
        // τ_{h∘?}: for g∘h with h: e → d, g: d → c
        for x in f.at(b.cod(g)).objects() {
            let gh = b.comp(g, h);
            let ids = [(g, x), (h, f.action(g).obj(x)), (gh, x)];
            let last = ids.iter().filter_map(|k| var_of.get(k).copied()).max();
            if let Some(l) = last {
                checks[l].push(K::Functorial(g, h, x));
            }
        }
    }
    let ok = |k: &K, asg: &[usize]| -> bool {
        match *k {
            K::Natural(g, nu) => {
                let c = b.cod(g);
                let (x, x2) = (f.at(c).dom(nu), f.at(c).cod(nu));
                let d = b.dom(g);
                let (t, t2) = (table(g, x, asg), table(g, x2, asg));
                let moved = f.action(g).arr(nu);
                (0..t.len()).all(|e| t2[ps[c.0].act(nu, e)] == ps[d.0].act(moved, t[e]))
            }
            K::Functorial(g, h, x) => {
                let (t1, t2, t12) = (table(g, x, asg), table(h, f.action(g).obj(x), asg), table(b.comp(g, h), x, asg));
                (0..t1.len()).all(|e| t2[t1[e]] == t12[e])
            }
        }
    };
    let elements: Vec<DiscOpfibCat> = ps.iter().map(|p| elements_of(p)).collect::<Result<_>>()?;
    let mut err = None;
    solve(
        vars.len(),
        budget,
        |i, _| (0..domains[i].len()).collect(),
        |i, asg| checks[i].iter().all(|k| ok(k, asg)),
        |asg| {
            let built = (|| -> Result<DiscOpfibPre> {
                let totals: Vec<Arc<FinCat>> = elements.iter().map(|p| p.total().clone()).collect();
                let actions = b
                    .arrows()
                    .map(|g| {
                        let (d, c) = (b.dom(g), b.cod(g));
                        let (pc, pd) = (&elements[c.0], &elements[d.0]);
                        let objects: Vec<Obj> = totals[c.0]
                            .objects()
                            .map(|o| {
                                let x = pc.functor().obj(o);
                                let t = table(g, x, asg)[pc.position(o)];
                                pd.fibre(f.action(g).obj(x))[t]
                            })
                            .collect();
                        let arrows = totals[c.0]
                            .arrows()
                            .map(|a| pd.lift(objects[totals[c.0].dom(a).0], f.action(g).arr(pc.functor().arr(a))))
                            .collect();
                        FinFunctor::new(totals[c.0].clone(), totals[d.0].clone(), objects, arrows)
                    })
                    .collect::<Result<Vec<_>>>()?;
                let g = CatPresheaf::new(b.clone(), totals, actions)?;
                let s = TwoNat::new(g, f.clone(), elements.iter().map(|p| p.functor().clone()).collect())?;
                certify_dopf_pre(&s)
            })();
            match built {
                Ok(phi) => visit(phi),
                Err(e) => {
                    err = Some(e);
                    false
                }
            }
        },
    )?;
    match err {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

/// Discrete opfibrations over the non-representable prestacks, at least 30.
pub fn prestack_opfibrations() -> Vec<(String, DiscOpfibPre)> {
    let mut out = Vec::new();
    for (name, f) in prestack_fixtures() {
        let mut budget = Budget::new(u64::MAX);
        let all = opfibrations_over(&f, 2, 200, &mut budget).expect("small");
        for (i, phi) in spread(&all, 8).into_iter().enumerate() {
            out.push((format!("{name}/{i}"), phi));
        }
    }
    out
}

/// Sheaves on `OpenSite` with at most two sections over each point.
pub fn open_sheaves() -> Vec<SetPresheaf> {
    let mut out = Vec::new();
    for n1 in 0..=2 {
        for n2 in 0..=2 {
            out.push(open_sheaf(n1, n2));
        }
    }
    out
}

/// Maps between sheaves on `OpenSite`, as discrete opfibrations between
/// discrete stacks. At least 20.
pub fn stack_opfibrations() -> Vec<(String, DiscOpfibPre)> {
    let mut out = Vec::new();
    let shapes = [(1, 1), (2, 1), (1, 2), (2, 2), (0, 1)];
    for &(a1, a2) in &shapes {
        for &(b1, b2) in &shapes[..4] {
            let (g, f) = (open_sheaf(a1, a2), open_sheaf(b1, b2));
            let nats = enumerate_set_nats(&g, &f, &mut Budget::new(u64::MAX)).expect("small");
            for (i, n) in spread(&nats, 2).into_iter().enumerate() {
                let phi = certify_dopf_pre(&discrete_map(&n)).expect("discrete maps are opfibrations");
                out.push((format!("sheaf{a1}{a2}-to-sheaf{b1}{b2}/{i}"), phi));
            }
        }
    }
    out
}

/// Over `Pt`: the pointed objects of `ParallelPair` under `a`, i.e. the lax
/// limit of the arrow picking `a`, projecting to `ParallelPair`.
pub fn pointed_fixture() -> DiscOpfibPre {
    let b = parallel_pair();
    let (_, p) = lax_limit_of_arrow(&FinFunctor::pick(b.clone(), Obj(0))).expect("pick");
    let at_point = |c: &Arc<FinCat>| {
        CatPresheaf::new(pt(), vec![c.clone()], vec![FinFunctor::identity(c.clone())]).expect("one object")
    };
    let s = TwoNat::new(at_point(p.total()), at_point(&b), vec![p.functor().clone()]).expect("strict");
    certify_dopf_pre(&s).expect("lax limits are opfibrations")
}

/// The non-separated presheaf over the terminal prestack: its
/// characteristic map has a non-sheaf value over `{1,2}`.
pub fn non_stack_counterexample() -> DiscOpfibPre {
    let z = non_separated();
    let g = CatPresheaf::discrete(&z);
    let one = CatPresheaf::terminal(z.base().clone());
    let comps = z.base().objects().map(|c| FinFunctor::to_point(g.at(c).clone(), one.at(c).clone())).collect();
    certify_dopf_pre(&TwoNat::new(g, one, comps).expect("map to the terminal")).expect("opfibration")
}

/// Maps into `Ω̃` over `base`: the Yoneda maps of presheaves on each slice.
pub fn omega_fixtures(slices: &Arc<SliceFamily>, per_object: usize) -> Vec<(String, MapToOmega)> {
    let b = slices.base().clone();
    let mut out = Vec::new();
    for c in b.objects() {
        for (i, z) in presheaf_fixtures(slices.slice(c).cat(), per_object).iter().enumerate() {
            out.push((format!("{}/{i}", b.object_name(c)), from_representable(slices, c, z).expect("fixture")));
        }
    }
    out
}

/// Characteristic maps of the prestack opfibrations.
pub fn char_fixtures() -> Vec<(String, MapToOmega)> {
    let mut cache: BTreeMap<String, Arc<SliceFamily>> = BTreeMap::new();
    prestack_opfibrations()
        .into_iter()
        .map(|(name, phi)| {
            let key = name.split('/').next().unwrap_or_default().to_string();
            let slices = cache.entry(key).or_insert_with(|| SliceFamily::new(phi.base().clone())).clone();
            (name, char(&phi, &slices).expect("certified opfibration"))
        })
        .collect()
}

/// `Ω_J` descent data over `OpenSite`: local sheaves over `{1}` and `{2}`
/// glued along the joint cover, data induced by global sheaves, and one
/// datum on the empty sieve of the empty open.
pub fn omega_j_data() -> Vec<(String, OmegaJDatum)> {
    let cat = open_site();
    let j = open_topology();
    let slices = SliceFamily::new(cat.clone());
    let mut out = Vec::new();
    let mut budget = Budget::new(u64::MAX);
    let joint = sieve(&cat, "12", &["1<12", "2<12"]);
    for n1 in 0..=3 {
        for n2 in 0..=3 {
            let locals: Vec<SetPresheaf> = joint
                .arrows()
                .iter()
                .map(|&f| {
                    let d = cat.dom(f);
                    let n = match cat.object_name(d) {
                        "1" => n1,
                        "2" => n2,
                        _ => 1,
                    };
                    local_sheaf(&slices, d, n)
                })
                .collect();
            let d = canonical_datum(&slices, &j, &joint, locals, &mut budget).expect("fixture");
            out.push((format!("local-{n1}-{n2}"), d));
        }
    }
    let twelve = cat.object("12").unwrap();
    for (n1, n2) in [(1, 2), (2, 2)] {
        let m = open_sheaf(n1, n2).reindex(&slice_iso(&slices, twelve)).expect("fixture");
        let d = OmegaJDatum::induced(slices.clone(), j.clone(), joint.clone(), &m, &mut budget).expect("fixture");
        out.push((format!("induced-{n1}-{n2}"), d));
    }
    let zero = cat.object("0").unwrap();
    let empty = OmegaJDatum::new(slices.clone(), j.clone(), Sieve::empty(zero), vec![], BTreeMap::new(), &mut budget)
        .expect("fixture");
    out.push(("empty-sieve".into(), empty));
    out
}

/// `n` sections at the top of `C/d` and one at every other object; a sheaf
/// for the slice topology on `OpenSite` when `d` is a point.
fn local_sheaf(slices: &SliceFamily, d: Obj, n: usize) -> SetPresheaf {
    let b = slices.base();
    let sl = slices.slice(d);
    let top = sl.top(b);
    let sc = sl.cat();
    let sets = sc.objects().map(|o| if o == top { labels(n) } else { labels(1) }).collect();
    let maps = sc
        .arrows()
        .map(|a| {
            let size = if sc.cod(a) == top { n } else { 1 };
            if sc.is_identity(a) {
                (0..size).collect()
            } else {
                vec![0; size]
            }
        })
        .collect();
    SetPresheaf::new(sc.clone(), sets, maps).expect("local sheaf")
}

/// The functor `C/c → C` forgetting to the domain, when `c` is terminal,
/// as an iso onto `C`; used to move presheaves on `C` to the slice.
fn slice_iso(slices: &SliceFamily, c: Obj) -> FinFunctor {
    slices.slice(c).dom().clone()
}

/// Builds the descent datum whose isos are the lexicographically first
/// bijections; fails if these do not satisfy the cocycle condition.
pub fn canonical_datum(
    slices: &Arc<SliceFamily>,
    j: &GrothTopology,
    s: &Sieve,
    locals: Vec<SetPresheaf>,
    budget: &mut Budget,
) -> Result<OmegaJDatum> {
    let b = slices.base().clone();
    let mut isos: BTreeMap<(Arr, Arr), SetNat<SetPresheaf>> = BTreeMap::new();
    for (i, &f) in s.arrows().iter().enumerate() {
        for &g in b.in_arrows(b.dom(f)) {
            let src = locals[i].reindex(slices.postcompose(g))?;
            let k = s.arrows().binary_search(&b.comp(f, g)).expect("sieve");
            let iso = set_iso(&src, &locals[k], budget)?.ok_or_else(|| {
                crate::error::Error::InvalidDescent(format!(
                    "no iso g*M_f → M_fg for f=`{}`, g=`{}`",
                    b.arrow_name(f),
                    b.arrow_name(g)
                ))
            })?;
            isos.insert((f, g), iso);
        }
    }
    OmegaJDatum::new(slices.clone(), j.clone(), s.clone(), locals, isos, budget)
}

/// The shipped `.tck` files as `(relative path, text)`, in a fixed order.
pub fn documents() -> Vec<(String, String)> {
    use crate::cli::{Value, Writer};
    let mut out = Vec::new();
    let mut doc = |path: String, values: Vec<(String, Value)>| {
        let mut w = Writer::new();
        for (n, v) in &values {
            w.section(n, v);
        }
        out.push((path, w.finish()));
    };
    for (name, c) in sites() {
        let j = if name == "OpenSite" { open_topology() } else { GrothTopology::trivial(c.clone()) };
        doc(format!("sites/{name}.site"), vec![(name.into(), Value::Category(c)), ("J".into(), Value::Topology(j))]);
    }
    for (kind, j) in broken_topologies() {
        doc(format!("sites/broken-{kind}.tck"), vec![("J".into(), Value::Topology(j))]);
    }
    let j = ("J".to_string(), Value::Topology(open_topology()));
    doc("presheaves/non-separated.tck".into(), vec![j.clone(), ("Z".into(), Value::SetPresheaf(non_separated()))]);
    for (n1, n2) in [(1, 2), (2, 2)] {
        doc(
            format!("presheaves/sheaf-{n1}-{n2}.tck"),
            vec![j.clone(), ("Z".into(), Value::SetPresheaf(open_sheaf(n1, n2)))],
        );
    }
    let file = |name: &str| name.replace('/', "-");
    for (name, phi) in spread(&prestack_opfibrations(), 10) {
        doc(format!("opfibrations/{}.tck", file(&name)), vec![("phi".into(), Value::TwoNat(phi.two_nat().clone()))]);
    }
    doc("opfibrations/Pt-pointed.tck".into(), vec![("phi".into(), Value::TwoNat(pointed_fixture().two_nat().clone()))]);
    for (name, phi) in spread(&stack_opfibrations(), 5) {
        doc(
            format!("stacks/{}.tck", file(&name)),
            vec![j.clone(), ("phi".into(), Value::TwoNat(phi.two_nat().clone()))],
        );
    }
    doc(
        "stacks/non-stack.tck".into(),
        vec![j.clone(), ("phi".into(), Value::TwoNat(non_stack_counterexample().two_nat().clone()))],
    );
    let w = walking_arrow();
    let slices = SliceFamily::new(w.clone());
    let maps = omega_fixtures(&slices, 3);
    for (name, z) in &maps {
        doc(format!("maps/WalkingArrow-{}.tck", file(name)), vec![("z".into(), Value::MapToOmega(z.clone()))]);
    }
    let b = w.object("b").expect("object b");
    let over_b: Vec<&MapToOmega> =
        maps.iter().filter(|(_, z)| z.source() == &crate::prestack::representable(&w, b)).map(|(_, z)| z).collect();
    if over_b.len() >= 2 {
        doc(
            "maps/ff-pair.tck".into(),
            vec![
                ("z".into(), Value::MapToOmega(over_b[0].clone())),
                ("w".into(), Value::MapToOmega(over_b[1].clone())),
            ],
        );
    }
    for (name, d) in omega_j_data() {
        doc(format!("omega-j/{name}.tck"), vec![("M".into(), Value::OmegaDatum(d))]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::site::{is_sheaf, validate_topology};

    #[test]
    fn shipped_sites_are_categories() {
        for (_, c) in sites() {
            c.validate().unwrap();
        }
        assert_eq!(comm_square().hom(Obj(0), Obj(3)).len(), 1);
    }

    #[test]
    fn corpus_sizes() {
        assert!(opfibration_corpus().len() >= 50);
        assert!(prestack_opfibrations().len() >= 30);
        assert!(stack_opfibrations().len() >= 20);
        assert!(omega_j_data().len() >= 10);
    }

    #[test]
    fn open_sheaves_are_sheaves() {
        let j = open_topology();
        validate_topology(&j, &mut Budget::new(u64::MAX)).unwrap();
        for z in open_sheaves() {
            assert!(is_sheaf(&z, &j, &mut Budget::new(u64::MAX)).unwrap());
        }
        assert!(!is_sheaf(&non_separated(), &j, &mut Budget::new(u64::MAX)).unwrap());
    }

    #[test]
    fn set_diagram_counts() {
        // functors from the walking arrow to sets of size ≤ 1: cards (0,0),
        // (0,1), (1,0) has none, (1,1)
        let w = walking_arrow();
        let fs: Vec<FinSetFunctor> = set_diagrams(&w, 1, &mut Budget::new(u64::MAX)).unwrap();
        assert_eq!(fs.len(), 3);
    }
}
