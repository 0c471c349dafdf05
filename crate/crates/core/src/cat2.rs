//! Discrete opfibrations in `Cat`, and the limits they are built from:
//! strict pullbacks, comma objects, lax limits of arrows and categories of
//! elements.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fincat::{
    enumerate_functors, enumerate_nats, set_iso, Arr, FinCat, FinFunctor, FinSetFunctor, NatTransform, Obj, RawCat,
    SetDiagram,
};
use crate::search::Budget;

/// A functor `p: E → B` certified to have unique liftings, with its fibres.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscOpfibCat {
    p: FinFunctor,
    fibres: Vec<Vec<Obj>>,
    position: Vec<usize>,
    lifts: HashMap<(Obj, Arr), Arr>,
}

/// Checks unique lifting at every object and every arrow out of its image.
pub fn certify_dopf(p: &FinFunctor) -> Result<DiscOpfibCat> {
    p.validate()?;
    let (e_cat, b_cat) = (p.source(), p.target());
    let mut lifts = HashMap::new();
    for e in e_cat.objects() {
        for &f in b_cat.out_arrows(p.obj(e)) {
            let found: Vec<Arr> = e_cat.out_arrows(e).iter().copied().filter(|&g| p.arr(g) == f).collect();
            if found.len() != 1 {
                return Err(Error::NotOpfibration {
                    object: e_cat.object_name(e).into(),
                    arrow: b_cat.arrow_name(f).into(),
                    lifts: found.len(),
                });
            }
            lifts.insert((e, f), found[0]);
        }
    }
    // redundant with unique lifting, kept as a guard on table construction
    for g in e_cat.arrows() {
        if b_cat.is_identity(p.arr(g)) && !e_cat.is_identity(g) {
            return Err(Error::NonDiscreteFibre {
                object: b_cat.object_name(p.obj(e_cat.dom(g))).into(),
                arrow: e_cat.arrow_name(g).into(),
            });
        }
    }
    let mut fibres = vec![Vec::new(); b_cat.object_count()];
    let mut position = vec![0; e_cat.object_count()];
    for e in e_cat.objects() {
        let b = p.obj(e);
        position[e.0] = fibres[b.0].len();
        fibres[b.0].push(e);
    }
    Ok(DiscOpfibCat { p: p.clone(), fibres, position, lifts })
}

impl DiscOpfibCat {
    pub fn functor(&self) -> &FinFunctor {
        &self.p
    }

    pub fn total(&self) -> &Arc<FinCat> {
        self.p.source()
    }

    pub fn base(&self) -> &Arc<FinCat> {
        self.p.target()
    }

    /// Objects over `b`, in identifier order.
    pub fn fibre(&self, b: Obj) -> &[Obj] {
        &self.fibres[b.0]
    }

    pub fn fibres(&self) -> &[Vec<Obj>] {
        &self.fibres
    }

    /// Position of `e` inside its fibre.
    pub fn position(&self, e: Obj) -> usize {
        self.position[e.0]
    }

    /// The unique arrow out of `e` over `f`.
    pub fn lift(&self, e: Obj, f: Arr) -> Arr {
        self.lifts[&(e, f)]
    }

    /// `cod(lift(e, f))`.
    pub fn transport(&self, e: Obj, f: Arr) -> Obj {
        self.total().cod(self.lift(e, f))
    }

    pub fn is_identity(&self) -> bool {
        self.p.is_identity()
    }
}

/// The strict pullback of `f: A → C` and `g: B → C`, with objects `(a,b)`
/// and arrows `(u,v)`.
pub fn strict_pullback(f: &FinFunctor, g: &FinFunctor) -> Result<(Arc<FinCat>, FinFunctor, FinFunctor)> {
    if f.target() != g.target() {
        return Err(Error::Mismatch("pullback of functors with different codomains".into()));
    }
    let (a, b) = (f.source().clone(), g.source().clone());
    let mut raw = RawCat::default();
    let mut obj_of: HashMap<(Obj, Obj), usize> = HashMap::new();
    let mut obj_legs = Vec::new();
    for x in a.objects() {
        for y in b.objects() {
            if f.obj(x) == g.obj(y) {
                obj_of.insert((x, y), raw.objects.len());
                raw.objects.push(format!("({},{})", a.object_name(x), b.object_name(y)));
                obj_legs.push((x, y));
            }
        }
    }
    let mut arr_of: HashMap<(Arr, Arr), usize> = HashMap::new();
    let mut arr_legs = Vec::new();
    for u in a.arrows() {
        for v in b.arrows() {
            if f.arr(u) == g.arr(v) {
                let (d, c) = (obj_of[&(a.dom(u), b.dom(v))], obj_of[&(a.cod(u), b.cod(v))]);
                arr_of.insert((u, v), raw.arrows.len());
                raw.arrows.push((format!("({},{})", a.arrow_name(u), b.arrow_name(v)), d, c));
                arr_legs.push((u, v));
            }
        }
    }
    raw.identities = obj_legs.iter().map(|&(x, y)| arr_of[&(a.identity(x), b.identity(y))]).collect();
    for (i, &(u, v)) in arr_legs.iter().enumerate() {
        for &u2 in a.out_arrows(a.cod(u)) {
            for &v2 in b.out_arrows(b.cod(v)) {
                if let Some(&j) = arr_of.get(&(u2, v2)) {
                    raw.compose.push(((j, i), arr_of[&(a.comp(u2, u), b.comp(v2, v))]));
                }
            }
        }
    }
    let names: Vec<String> = raw.arrows.iter().map(|x| x.0.clone()).collect();
    let onames = raw.objects.clone();
    let apex = Arc::new(raw.into_cat());
    let mut lo = vec![Obj(0); apex.object_count()];
    let mut ro = vec![Obj(0); apex.object_count()];
    for (i, &(x, y)) in obj_legs.iter().enumerate() {
        let o = apex.object(&onames[i])?;
        lo[o.0] = x;
        ro[o.0] = y;
    }
    let mut la = vec![Arr(0); apex.arrow_count()];
    let mut ra = vec![Arr(0); apex.arrow_count()];
    for (i, &(u, v)) in arr_legs.iter().enumerate() {
        let t = apex.arrow(&names[i])?;
        la[t.0] = u;
        ra[t.0] = v;
    }
    let left = FinFunctor::new_unchecked(apex.clone(), a, lo, la);
    let right = FinFunctor::new_unchecked(apex.clone(), b, ro, ra);
    Ok((apex, left, right))
}

/// Change of base of `p` along `z: F → B`. Returns the certified left leg
/// and the top leg into the total category of `p`. Pulling back along an
/// identity returns `p` itself and the identity.
pub fn pullback(p: &DiscOpfibCat, z: &FinFunctor) -> Result<(DiscOpfibCat, FinFunctor)> {
    if z.target() != p.base() {
        return Err(Error::Mismatch("pullback along a functor into a different base".into()));
    }
    if z.is_identity() {
        return Ok((p.clone(), FinFunctor::identity(p.total().clone())));
    }
    let (_, left, top) = strict_pullback(z, p.functor())?;
    Ok((certify_dopf(&left)?, top))
}

/// A comma square: `filler: f∘left ⇒ g∘right`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommaCone {
    pub apex: Arc<FinCat>,
    pub left: FinFunctor,
    pub right: FinFunctor,
    pub filler: NatTransform,
}

/// The comma object `f ↓ g`. Objects are `(a,b,α)` with `α: f(a) → g(b)`;
/// arrows are `(u,v,α,α')` with `g(v)∘α = α'∘f(u)`.
pub fn comma(f: &FinFunctor, g: &FinFunctor) -> Result<CommaCone> {
    if f.target() != g.target() {
        return Err(Error::Mismatch("comma of functors with different codomains".into()));
    }
    let (a, b, c) = (f.source().clone(), g.source().clone(), f.target().clone());
    let mut raw = RawCat::default();
    let mut objs: Vec<(Obj, Obj, Arr)> = Vec::new();
    for x in a.objects() {
        for y in b.objects() {
            for alpha in c.hom(f.obj(x), g.obj(y)) {
                raw.objects.push(format!("({},{},{})", a.object_name(x), b.object_name(y), c.arrow_name(alpha)));
                objs.push((x, y, alpha));
            }
        }
    }
    let mut arrs: Vec<(Arr, Arr, usize, usize)> = Vec::new();
    let mut arr_of: HashMap<(Arr, Arr, usize, usize), usize> = HashMap::new();
    for (i, &(x, y, alpha)) in objs.iter().enumerate() {
        for (j, &(x2, y2, alpha2)) in objs.iter().enumerate() {
            for u in a.hom(x, x2) {
                for v in b.hom(y, y2) {
                    if c.comp(g.arr(v), alpha) == c.comp(alpha2, f.arr(u)) {
                        arr_of.insert((u, v, i, j), arrs.len());
                        raw.arrows.push((
                            format!(
                                "({},{},{},{})",
                                a.arrow_name(u),
                                b.arrow_name(v),
                                c.arrow_name(alpha),
                                c.arrow_name(alpha2)
                            ),
                            i,
                            j,
                        ));
                        arrs.push((u, v, i, j));
                    }
                }
            }
        }
    }
    raw.identities =
        objs.iter().enumerate().map(|(i, &(x, y, _))| arr_of[&(a.identity(x), b.identity(y), i, i)]).collect();
    let mut out_of: Vec<Vec<usize>> = vec![Vec::new(); objs.len()];
    for (k, &(_, _, i, _)) in arrs.iter().enumerate() {
        out_of[i].push(k);
    }
    for (k, &(u, v, i, j)) in arrs.iter().enumerate() {
        for &k2 in &out_of[j] {
            let (u2, v2, _, l) = arrs[k2];
            raw.compose.push(((k2, k), arr_of[&(a.comp(u2, u), b.comp(v2, v), i, l)]));
        }
    }
    let onames = raw.objects.clone();
    let anames: Vec<String> = raw.arrows.iter().map(|x| x.0.clone()).collect();
    let apex = Arc::new(raw.into_cat());
    let n = apex.object_count();
    let (mut lo, mut ro, mut comps) = (vec![Obj(0); n], vec![Obj(0); n], vec![Arr(0); n]);
    for (i, &(x, y, alpha)) in objs.iter().enumerate() {
        let o = apex.object(&onames[i])?;
        lo[o.0] = x;
        ro[o.0] = y;
        comps[o.0] = alpha;
    }
    let m = apex.arrow_count();
    let (mut la, mut ra) = (vec![Arr(0); m], vec![Arr(0); m]);
    for (k, &(u, v, _, _)) in arrs.iter().enumerate() {
        let t = apex.arrow(&anames[k])?;
        la[t.0] = u;
        ra[t.0] = v;
    }
    let left = FinFunctor::new_unchecked(apex.clone(), a, lo, la);
    let right = FinFunctor::new_unchecked(apex.clone(), b, ro, ra);
    let filler = NatTransform::new_unchecked(f.after(&left)?, g.after(&right)?, comps);
    Ok(CommaCone { apex, left, right, filler })
}

impl CommaCone {
    /// Checks the cone itself: both legs are functors and the filler is natural.
    pub fn validate(&self) -> Result<()> {
        self.left.validate()?;
        self.right.validate()?;
        self.filler.validate()
    }

    /// Whiskers the cone along `m: X → apex`.
    pub fn restrict(&self, m: &FinFunctor) -> Result<(FinFunctor, FinFunctor, Vec<Arr>)> {
        let comps = m.source().objects().map(|x| self.filler.component(m.obj(x))).collect();
        Ok((self.left.after(m)?, self.right.after(m)?, comps))
    }
}

/// Small categories used as test shapes for universal properties.
pub fn test_shapes(max_objects: usize) -> Vec<Arc<FinCat>> {
    let empty: [&str; 0] = [];
    let shapes = vec![
        FinCat::discrete(empty),
        FinCat::point(),
        FinCat::discrete(["p", "q"]),
        FinCat::free(&["p", "q"], &[("s", "p", "q")]).expect("walking arrow"),
        FinCat::free(&["p", "q"], &[("s", "p", "q"), ("t", "p", "q")]).expect("parallel pair"),
        FinCat::discrete(["p", "q", "r"]),
        FinCat::free(&["p", "q", "r"], &[("s", "p", "q"), ("t", "q", "r")]).expect("chain"),
        FinCat::free(&["p", "q", "r"], &[("s", "r", "p"), ("t", "r", "q")]).expect("span"),
        FinCat::free(&["p", "q", "r"], &[("s", "p", "r"), ("t", "q", "r")]).expect("cospan"),
    ];
    shapes.into_iter().filter(|s| s.object_count() <= max_objects).map(Arc::new).collect()
}

/// Outcome of a bounded universal-property check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalCheck {
    pub shapes: usize,
    pub cones: usize,
}

/// Verifies the comma universal property against every cone over the test
/// shapes with at most `max_objects` objects: cones from `X` must be in
/// bijection with functors `X → apex`.
pub fn verify_comma_universal(
    cone: &CommaCone,
    f: &FinFunctor,
    g: &FinFunctor,
    max_objects: usize,
    budget: &mut Budget,
) -> Result<UniversalCheck> {
    let shapes = test_shapes(max_objects);
    let mut total = 0;
    for x in &shapes {
        let mut cones: HashMap<(Vec<Obj>, Vec<Arr>, Vec<Obj>, Vec<Arr>, Vec<Arr>), ()> = HashMap::new();
        for p in enumerate_functors(x, f.source(), budget)? {
            for q in enumerate_functors(x, g.source(), budget)? {
                for theta in enumerate_nats(&f.after(&p)?, &g.after(&q)?, budget)? {
                    cones.insert(
                        (
                            p.object_map().to_vec(),
                            p.arrow_map().to_vec(),
                            q.object_map().to_vec(),
                            q.arrow_map().to_vec(),
                            theta.components().to_vec(),
                        ),
                        (),
                    );
                }
            }
        }
        let mut hit: HashMap<_, usize> = HashMap::new();
        for m in enumerate_functors(x, &cone.apex, budget)? {
            let (l, r, comps) = cone.restrict(&m)?;
            let key = (
                l.object_map().to_vec(),
                l.arrow_map().to_vec(),
                r.object_map().to_vec(),
                r.arrow_map().to_vec(),
                comps,
            );
            if !cones.contains_key(&key) {
                return Err(Error::Mismatch("a mediating functor induces an invalid cone".into()));
            }
            *hit.entry(key).or_default() += 1;
        }
        if let Some((_, n)) = hit.iter().find(|(_, &n)| n > 1) {
            return Err(Error::Mismatch(format!(
                "a cone from a {}-object shape has {n} mediating functors",
                x.object_count()
            )));
        }
        if hit.len() != cones.len() {
            return Err(Error::Mismatch(format!(
                "{} cones from a {}-object shape have no mediating functor",
                cones.len() - hit.len(),
                x.object_count()
            )));
        }
        total += cones.len();
    }
    Ok(UniversalCheck { shapes: shapes.len(), cones: total })
}

/// The lax limit of `ω: Pt → B`: the comma `ω ↓ Id_B` and its certified
/// projection to `B`. The fibre over `b` is `Hom(ω(*), b)`.
pub fn lax_limit_of_arrow(omega: &FinFunctor) -> Result<(CommaCone, DiscOpfibCat)> {
    if omega.source().object_count() != 1 || omega.source().arrow_count() != 1 {
        return Err(Error::Mismatch("the lax limit needs an arrow out of the terminal category".into()));
    }
    let cone = comma(omega, &FinFunctor::identity(omega.target().clone()))?;
    let p = certify_dopf(&cone.right)?;
    Ok((cone, p))
}

/// The category of elements of `z`, with objects `(b,x)` and arrows `(f,x)`
/// for `x` in the source set of `f`.
pub fn elements_of(z: &FinSetFunctor) -> Result<DiscOpfibCat> {
    let b = z.base().clone();
    let mut raw = RawCat::default();
    let mut obj_of: HashMap<(Obj, usize), usize> = HashMap::new();
    let mut proj_o = Vec::new();
    for o in b.objects() {
        for (x, label) in z.set(o).iter().enumerate() {
            obj_of.insert((o, x), raw.objects.len());
            raw.objects.push(format!("({},{})", b.object_name(o), label));
            proj_o.push(o);
        }
    }
    let mut arr_of: HashMap<(Arr, usize), usize> = HashMap::new();
    let mut proj_a = Vec::new();
    for f in b.arrows() {
        let d = b.dom(f);
        for (x, label) in z.set(d).iter().enumerate() {
            arr_of.insert((f, x), raw.arrows.len());
            raw.arrows.push((
                format!("({},{})", b.arrow_name(f), label),
                obj_of[&(d, x)],
                obj_of[&(b.cod(f), z.act(f, x))],
            ));
            proj_a.push(f);
        }
    }
    for o in b.objects() {
        for x in 0..z.card(o) {
            raw.identities.push(arr_of[&(b.identity(o), x)]);
        }
    }
    for f in b.arrows() {
        for x in 0..z.card(b.dom(f)) {
            let y = z.act(f, x);
            for &g in b.out_arrows(b.cod(f)) {
                raw.compose.push(((arr_of[&(g, y)], arr_of[&(f, x)]), arr_of[&(b.comp(g, f), x)]));
            }
        }
    }
    let onames = raw.objects.clone();
    let anames: Vec<String> = raw.arrows.iter().map(|x| x.0.clone()).collect();
    let total = Arc::new(raw.into_cat());
    let mut po = vec![Obj(0); total.object_count()];
    for (i, n) in onames.iter().enumerate() {
        po[total.object(n)?.0] = proj_o[i];
    }
    let mut pa = vec![Arr(0); total.arrow_count()];
    for (i, n) in anames.iter().enumerate() {
        pa[total.arrow(n)?.0] = proj_a[i];
    }
    certify_dopf(&FinFunctor::new_unchecked(total, b, po, pa))
}

/// The functor `b ↦ fibre(b)`, `f ↦ (e ↦ cod(lift(e, f)))`. Elements are
/// labelled by the identifiers of the total category.
pub fn fiber_functor(p: &DiscOpfibCat) -> FinSetFunctor {
    let (e, b) = (p.total(), p.base().clone());
    let sets = b.objects().map(|o| p.fibre(o).iter().map(|&x| e.object_name(x).to_string()).collect()).collect();
    let maps = b.arrows().map(|f| p.fibre(b.dom(f)).iter().map(|&x| p.position(p.transport(x, f))).collect()).collect();
    FinSetFunctor::new(b, sets, maps).expect("fibres of a certified opfibration form a functor")
}

/// Searches for an isomorphism `total(p) → total(q)` commuting with the
/// projections. The search runs on fibre bijections compatible with
/// transport; the resulting functor is then validated on its own.
pub fn iso_over(p: &DiscOpfibCat, q: &DiscOpfibCat, budget: &mut Budget) -> Result<Option<FinFunctor>> {
    if p.base() != q.base() {
        return Err(Error::Mismatch("opfibrations over different bases".into()));
    }
    let Some(sigma) = set_iso(&fiber_functor(p), &fiber_functor(q), budget)? else {
        return Ok(None);
    };
    let (e, e2) = (p.total(), q.total());
    let objects: Vec<Obj> =
        e.objects().map(|x| q.fibre(p.functor().obj(x))[sigma.component(p.functor().obj(x))[p.position(x)]]).collect();
    let arrows: Vec<Arr> = e.arrows().map(|g| q.lift(objects[e.dom(g).0], p.functor().arr(g))).collect();
    let f = FinFunctor::new(e.clone(), e2.clone(), objects, arrows)?;
    if q.functor().after(&f)? != *p.functor() || !f.is_isomorphism() {
        return Err(Error::Mismatch("fibre bijection does not induce an isomorphism over the base".into()));
    }
    Ok(Some(f))
}

/// Every functor `total(p) → total(q)` over the base. Such a functor is
/// fixed by its object map, and arrows are forced by lifting.
pub fn morphisms_over(p: &DiscOpfibCat, q: &DiscOpfibCat, budget: &mut Budget) -> Result<Vec<FinFunctor>> {
    if p.base() != q.base() {
        return Err(Error::Mismatch("opfibrations over different bases".into()));
    }
    let nats = crate::fincat::enumerate_set_nats(&fiber_functor(p), &fiber_functor(q), budget)?;
    let e = p.total();
    let mut out = Vec::new();
    for n in nats {
        let objects: Vec<Obj> =
            e.objects().map(|x| q.fibre(p.functor().obj(x))[n.component(p.functor().obj(x))[p.position(x)]]).collect();
        let arrows = e.arrows().map(|g| q.lift(objects[e.dom(g).0], p.functor().arr(g))).collect();
        out.push(FinFunctor::new(e.clone(), q.total().clone(), objects, arrows)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::DEFAULT_BOUND;

    fn walking_arrow() -> Arc<FinCat> {
        Arc::new(FinCat::free(&["a", "b"], &[("u", "a", "b")]).unwrap())
    }

    fn budget() -> Budget {
        Budget::new(DEFAULT_BOUND)
    }

    fn two_point_fibres() -> FinSetFunctor {
        let w = walking_arrow();
        FinSetFunctor::from_names(
            w,
            &[("a".into(), vec!["0".into(), "1".into()]), ("b".into(), vec!["x".into()])],
            &[("u".into(), vec![("0".into(), "x".into()), ("1".into(), "x".into())])],
        )
        .unwrap()
    }

    #[test]
    fn identity_is_certified_with_singleton_fibres() {
        let w = walking_arrow();
        let p = certify_dopf(&FinFunctor::identity(w.clone())).unwrap();
        assert!(p.fibres().iter().all(|f| f.len() == 1));
        let u = w.arrow("u").unwrap();
        let a = w.object("a").unwrap();
        assert_eq!(p.lift(a, u), u);
        assert_eq!(p.lift(a, w.identity(a)), w.identity(a));
    }

    #[test]
    fn codomain_of_arrow_category_is_not_an_opfibration() {
        let w = walking_arrow();
        let id = FinFunctor::identity(w.clone());
        let cone = comma(&id, &id).unwrap();
        cone.validate().unwrap();
        let err = certify_dopf(&cone.right).unwrap_err();
        assert!(matches!(err, Error::NotOpfibration { lifts, .. } if lifts != 1));
    }

    #[test]
    fn elements_lifts_follow_the_action() {
        let z = two_point_fibres();
        let p = elements_of(&z).unwrap();
        let e = p.total();
        let w = p.base();
        let u = w.arrow("u").unwrap();
        let x = e.object("(a,1)").unwrap();
        assert_eq!(e.object_name(p.transport(x, u)), "(b,x)");
        assert_eq!(e.arrow_name(p.lift(x, u)), "(u,1)");
    }

    #[test]
    fn pullback_along_identity_is_identity() {
        let p = elements_of(&two_point_fibres()).unwrap();
        let (q, top) = pullback(&p, &FinFunctor::identity(p.base().clone())).unwrap();
        assert_eq!(q, p);
        assert!(top.is_identity());
    }

    #[test]
    fn pullback_to_a_point_is_the_discrete_fibre() {
        let z = two_point_fibres();
        let p = elements_of(&z).unwrap();
        let w = p.base().clone();
        let a = w.object("a").unwrap();
        let (q, top) = pullback(&p, &FinFunctor::pick(w, a)).unwrap();
        assert!(q.total().is_discrete());
        assert_eq!(q.total().object_count(), 2);
        top.validate().unwrap();
    }

    #[test]
    fn comma_counts_and_universality() {
        let w = walking_arrow();
        let id = FinFunctor::identity(w.clone());
        let cone = comma(&id, &id).unwrap();
        // one object per arrow of w
        assert_eq!(cone.apex.object_count(), w.arrow_count());
        let check = verify_comma_universal(&cone, &id, &id, 2, &mut budget()).unwrap();
        assert!(check.cones > 0);
    }

    #[test]
    fn lax_limit_fibres_are_hom_sets() {
        let w = walking_arrow();
        let (_, p) = lax_limit_of_arrow(&FinFunctor::pick(w.clone(), w.object("a").unwrap())).unwrap();
        assert_eq!(p.fibres().iter().map(Vec::len).collect::<Vec<_>>(), [1, 1]);
        let pt = Arc::new(FinCat::point());
        let (_, q) = lax_limit_of_arrow(&FinFunctor::identity(pt)).unwrap();
        assert_eq!((q.total().object_count(), q.total().arrow_count()), (1, 1));
    }

    #[test]
    fn elements_and_fibres_round_trip() {
        let z = two_point_fibres();
        let p = elements_of(&z).unwrap();
        let back = fiber_functor(&p);
        assert!(set_iso(&back, &z, &mut budget()).unwrap().is_some());
        let again = elements_of(&back).unwrap();
        assert!(iso_over(&again, &p, &mut budget()).unwrap().is_some());
    }
}
