//! Strict 2-functors `C^op → Cat`, 2-natural transformations between them,
//! modifications, and pointwise discrete opfibrations.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::Arc;

use crate::cat2::{certify_dopf, comma, morphisms_over, strict_pullback, DiscOpfibCat};
use crate::error::{Error, Result};
use crate::fincat::{
    enumerate_functors, enumerate_nats, Arr, FinCat, FinFunctor, NatTransform, Obj, SetDiagram, SetNat, SetPresheaf,
};
use crate::search::{solve, Budget};

/// A strict 2-functor `C^op → Cat`. For `f: d → c`, `action(f)` is a functor
/// `F(c) → F(d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatPresheaf {
    base: Arc<FinCat>,
    cats: Vec<Arc<FinCat>>,
    actions: Vec<FinFunctor>,
}

impl CatPresheaf {
    pub fn new(base: Arc<FinCat>, cats: Vec<Arc<FinCat>>, actions: Vec<FinFunctor>) -> Result<Self> {
        let f = CatPresheaf { base, cats, actions };
        f.validate()?;
        Ok(f)
    }

    /// The constant 2-functor at the terminal category.
    pub fn terminal(base: Arc<FinCat>) -> Self {
        let pt = Arc::new(FinCat::point());
        let id = FinFunctor::identity(pt.clone());
        CatPresheaf { cats: vec![pt; base.object_count()], actions: vec![id; base.arrow_count()], base }
    }

    /// A set-valued presheaf seen through discrete categories.
    pub fn discrete(z: &SetPresheaf) -> Self {
        let base = z.base().clone();
        let cats: Vec<Arc<FinCat>> = base.objects().map(|c| Arc::new(FinCat::discrete(z.set(c)))).collect();
        let actions = base
            .arrows()
            .map(|f| {
                let (d, c) = (base.dom(f), base.cod(f));
                let objects: Vec<Obj> = (0..z.card(c)).map(|x| Obj(z.act(f, x))).collect();
                let arrows = objects.iter().map(|&o| cats[d.0].identity(o)).collect();
                FinFunctor::new_unchecked(cats[c.0].clone(), cats[d.0].clone(), objects, arrows)
            })
            .collect();
        CatPresheaf { base, cats, actions }
    }

    pub fn base(&self) -> &Arc<FinCat> {
        &self.base
    }

    pub fn at(&self, c: Obj) -> &Arc<FinCat> {
        &self.cats[c.0]
    }

    pub fn action(&self, f: Arr) -> &FinFunctor {
        &self.actions[f.0]
    }

    /// Strict functoriality scan.
    pub fn validate(&self) -> Result<()> {
        let b = &*self.base;
        if self.cats.len() != b.object_count() || self.actions.len() != b.arrow_count() {
            return Err(Error::InvalidCatPresheaf("table sizes do not match the base".into()));
        }
        for f in b.arrows() {
            let a = &self.actions[f.0];
            if a.source() != &self.cats[b.cod(f).0] || a.target() != &self.cats[b.dom(f).0] {
                return Err(Error::InvalidCatPresheaf(format!(
                    "action of `{}` has the wrong source or target",
                    b.arrow_name(f)
                )));
            }
            a.validate().map_err(|e| Error::InvalidCatPresheaf(format!("action of `{}`: {e}", b.arrow_name(f))))?;
        }
        for c in b.objects() {
            if !self.actions[b.identity(c).0].is_identity() {
                return Err(Error::InvalidCatPresheaf(format!(
                    "identity of `{}` does not act as the identity",
                    b.object_name(c)
                )));
            }
        }
        for (g, f) in b.composable_pairs() {
            let lhs = &self.actions[b.comp(g, f).0];
            let rhs = self.actions[f.0].after(&self.actions[g.0])?;
            if *lhs != rhs {
                return Err(Error::InvalidCatPresheaf(format!(
                    "F({} . {}) differs from F({}) . F({})",
                    b.arrow_name(g),
                    b.arrow_name(f),
                    b.arrow_name(f),
                    b.arrow_name(g)
                )));
            }
        }
        Ok(())
    }

    /// Whether every value is a discrete category.
    pub fn is_discrete(&self) -> bool {
        self.cats.iter().all(|c| c.is_discrete())
    }

    /// The object sets of a discrete presheaf.
    pub fn objects_presheaf(&self) -> SetPresheaf {
        let sets = self.cats.iter().map(|c| c.objects().map(|o| c.object_name(o).to_string()).collect()).collect();
        let maps = self.actions.iter().map(|a| a.object_map().iter().map(|o| o.0).collect()).collect();
        SetPresheaf::new(self.base.clone(), sets, maps).expect("object parts of a 2-functor form a presheaf")
    }
}

/// The representable `Hom(-, c)`, as discrete categories labelled by arrows.
pub fn representable(base: &Arc<FinCat>, c: Obj) -> CatPresheaf {
    CatPresheaf::discrete(&SetPresheaf::representable(base.clone(), c))
}

/// A map of set-valued presheaves as a 2-natural transformation between
/// their discrete 2-functors.
pub fn discrete_map(n: &SetNat<SetPresheaf>) -> TwoNat {
    let (g, f) = (CatPresheaf::discrete(n.source()), CatPresheaf::discrete(n.target()));
    let components = g
        .base()
        .objects()
        .map(|c| {
            let objects: Vec<Obj> = n.component(c).iter().map(|&y| Obj(y)).collect();
            let arrows = objects.iter().map(|&o| f.at(c).identity(o)).collect();
            FinFunctor::new_unchecked(g.at(c).clone(), f.at(c).clone(), objects, arrows)
        })
        .collect();
    TwoNat::new_unchecked(g, f, components)
}

/// A strict 2-natural transformation `s: G → F` with `s_c: G(c) → F(c)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoNat {
    source: CatPresheaf,
    target: CatPresheaf,
    components: Vec<FinFunctor>,
}

impl TwoNat {
    pub fn new(source: CatPresheaf, target: CatPresheaf, components: Vec<FinFunctor>) -> Result<Self> {
        let s = TwoNat { source, target, components };
        s.validate()?;
        Ok(s)
    }

    pub(crate) fn new_unchecked(source: CatPresheaf, target: CatPresheaf, components: Vec<FinFunctor>) -> Self {
        TwoNat { source, target, components }
    }

    pub fn identity(f: &CatPresheaf) -> Self {
        let components = f.cats.iter().map(|c| FinFunctor::identity(c.clone())).collect();
        TwoNat { source: f.clone(), target: f.clone(), components }
    }

    pub fn source(&self) -> &CatPresheaf {
        &self.source
    }

    pub fn target(&self) -> &CatPresheaf {
        &self.target
    }

    pub fn base(&self) -> &Arc<FinCat> {
        &self.source.base
    }

    pub fn component(&self, c: Obj) -> &FinFunctor {
        &self.components[c.0]
    }

    pub fn components(&self) -> &[FinFunctor] {
        &self.components
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.components.iter().all(FinFunctor::is_identity)
    }

    pub fn validate(&self) -> Result<()> {
        let (g, f) = (&self.source, &self.target);
        if g.base != f.base {
            return Err(Error::InvalidTwoNat("presheaves over different bases".into()));
        }
        let b = &*g.base;
        if self.components.len() != b.object_count() {
            return Err(Error::InvalidTwoNat("wrong number of components".into()));
        }
        for c in b.objects() {
            let s = &self.components[c.0];
            if s.source() != g.at(c) || s.target() != f.at(c) {
                return Err(Error::InvalidTwoNat(format!("component at `{}` has the wrong type", b.object_name(c))));
            }
            s.validate().map_err(|e| Error::InvalidTwoNat(format!("component at `{}`: {e}", b.object_name(c))))?;
        }
        for h in b.arrows() {
            if !self.square_commutes(h) {
                return Err(Error::InvalidTwoNat(format!("naturality square fails at `{}`", b.arrow_name(h))));
            }
        }
        Ok(())
    }

    fn square_commutes(&self, h: Arr) -> bool {
        let b = self.base();
        let (d, c) = (b.dom(h), b.cod(h));
        let lhs = self.target.action(h).after(&self.components[c.0]);
        let rhs = self.components[d.0].after(self.source.action(h));
        matches!((lhs, rhs), (Ok(l), Ok(r)) if l == r)
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &TwoNat) -> Result<TwoNat> {
        if first.target != self.source {
            return Err(Error::Mismatch("composing 2-natural transformations with different middles".into()));
        }
        let components =
            first.components.iter().zip(&self.components).map(|(f, g)| g.after(f)).collect::<Result<_>>()?;
        Ok(TwoNat { source: first.source.clone(), target: self.target.clone(), components })
    }

    /// Whether every component is an isomorphism of categories.
    pub fn is_iso(&self) -> bool {
        self.components.iter().all(FinFunctor::is_isomorphism)
    }
}

/// A modification between parallel 2-natural transformations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Modification {
    source: TwoNat,
    target: TwoNat,
    components: Vec<NatTransform>,
}

impl Modification {
    pub fn new(source: TwoNat, target: TwoNat, components: Vec<NatTransform>) -> Result<Self> {
        let m = Modification { source, target, components };
        m.validate()?;
        Ok(m)
    }

    pub fn identity(s: &TwoNat) -> Self {
        let components = s.components.iter().map(NatTransform::identity).collect();
        Modification { source: s.clone(), target: s.clone(), components }
    }

    pub fn source(&self) -> &TwoNat {
        &self.source
    }

    pub fn target(&self) -> &TwoNat {
        &self.target
    }

    pub fn component(&self, c: Obj) -> &NatTransform {
        &self.components[c.0]
    }

    pub fn validate(&self) -> Result<()> {
        let (s, t) = (&self.source, &self.target);
        if s.source != t.source || s.target != t.target {
            return Err(Error::InvalidModification("transformations are not parallel".into()));
        }
        let b = s.base();
        if self.components.len() != b.object_count() {
            return Err(Error::InvalidModification("wrong number of components".into()));
        }
        for c in b.objects() {
            let m = &self.components[c.0];
            if m.source() != s.component(c) || m.target() != t.component(c) {
                return Err(Error::InvalidModification(format!(
                    "component at `{}` has the wrong type",
                    b.object_name(c)
                )));
            }
            m.validate()
                .map_err(|e| Error::InvalidModification(format!("component at `{}`: {e}", b.object_name(c))))?;
        }
        for h in b.arrows() {
            if !modification_square(s, &self.components, h) {
                return Err(Error::InvalidModification(format!("modification axiom fails at `{}`", b.arrow_name(h))));
            }
        }
        Ok(())
    }
}

/// `F(h)(m_c(X)) = m_d(G(h)(X))` for every `X` in `G(c)`.
fn modification_square(s: &TwoNat, comps: &[NatTransform], h: Arr) -> bool {
    let b = s.base();
    let (d, c) = (b.dom(h), b.cod(h));
    let (g, f) = (&s.source, &s.target);
    g.at(c).objects().all(|x| f.action(h).arr(comps[c.0].component(x)) == comps[d.0].component(g.action(h).obj(x)))
}

/// Picks one candidate per object of `base` such that `check(h, at_cod,
/// at_dom)` holds for every arrow `h`, and hands each full choice to `visit`.
pub(crate) fn choose_per_object<T, K, V>(
    base: &FinCat,
    candidates: &[Vec<T>],
    budget: &mut Budget,
    mut check: K,
    mut visit: V,
) -> Result<()>
where
    K: FnMut(Arr, &T, &T) -> bool,
    V: FnMut(Vec<&T>) -> bool,
{
    let mut at: Vec<Vec<Arr>> = vec![Vec::new(); base.object_count()];
    for h in base.arrows() {
        at[base.dom(h).0.max(base.cod(h).0)].push(h);
    }
    solve(
        base.object_count(),
        budget,
        |i, _| (0..candidates[i].len()).collect(),
        |i, asg| {
            at[i].iter().all(|&h| {
                let (d, c) = (base.dom(h), base.cod(h));
                check(h, &candidates[c.0][asg[c.0]], &candidates[d.0][asg[d.0]])
            })
        },
        |asg| visit(asg.iter().enumerate().map(|(i, &k)| &candidates[i][k]).collect()),
    )
}

/// Every 2-natural transformation `g → f`.
pub fn enumerate_two_nats(g: &CatPresheaf, f: &CatPresheaf, budget: &mut Budget) -> Result<Vec<TwoNat>> {
    if g.base != f.base {
        return Err(Error::Mismatch("presheaves over different bases".into()));
    }
    let b = g.base.clone();
    let candidates: Vec<Vec<FinFunctor>> =
        b.objects().map(|c| enumerate_functors(g.at(c), f.at(c), budget)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    choose_per_object(
        &b,
        &candidates,
        budget,
        |h, sc, sd| f.action(h).after(sc).ok() == sd.after(g.action(h)).ok(),
        |comps| {
            out.push(TwoNat::new_unchecked(g.clone(), f.clone(), comps.into_iter().cloned().collect()));
            true
        },
    )?;
    Ok(out)
}

/// `⌈X⌉: y(c) → F` with `⌈X⌉_d(f) = F(f)(X)`.
pub fn yoneda(f: &CatPresheaf, c: Obj, x: Obj) -> TwoNat {
    let b = f.base.clone();
    let y = representable(&b, c);
    let components = b
        .objects()
        .map(|d| {
            let yd = y.at(d);
            let objects: Vec<Obj> =
                yd.objects().map(|o| f.action(b.arrow(yd.object_name(o)).expect("hom element")).obj(x)).collect();
            let arrows = objects.iter().map(|&o| f.at(d).identity(o)).collect();
            FinFunctor::new_unchecked(yd.clone(), f.at(d).clone(), objects, arrows)
        })
        .collect();
    TwoNat::new_unchecked(y, f.clone(), components)
}

/// `s_c(id_c)` for `s: y(c) → F`.
pub fn yoneda_inv(s: &TwoNat, c: Obj) -> Result<Obj> {
    let b = s.base();
    let yc = s.source().at(c);
    let id = yc.object(b.arrow_name(b.identity(c)))?;
    Ok(s.component(c).obj(id))
}

/// A 2-natural transformation whose components are discrete opfibrations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscOpfibPre {
    s: TwoNat,
    certs: Vec<DiscOpfibCat>,
}

/// Certifies every component.
pub fn certify_dopf_pre(s: &TwoNat) -> Result<DiscOpfibPre> {
    s.validate()?;
    let b = s.base();
    let certs = b
        .objects()
        .map(|c| {
            certify_dopf(s.component(c))
                .map_err(|e| Error::NotOpfibrationAt { object: b.object_name(c).into(), detail: e.to_string() })
        })
        .collect::<Result<_>>()?;
    Ok(DiscOpfibPre { s: s.clone(), certs })
}

impl DiscOpfibPre {
    pub fn two_nat(&self) -> &TwoNat {
        &self.s
    }

    /// The presheaf `G` of total categories.
    pub fn total(&self) -> &CatPresheaf {
        &self.s.source
    }

    /// The presheaf `F` being fibred over.
    pub fn over(&self) -> &CatPresheaf {
        &self.s.target
    }

    pub fn base(&self) -> &Arc<FinCat> {
        self.s.base()
    }

    pub fn cert(&self, c: Obj) -> &DiscOpfibCat {
        &self.certs[c.0]
    }

    /// Objects of `G(c)` over `X ∈ F(c)`.
    pub fn fibre(&self, c: Obj, x: Obj) -> &[Obj] {
        self.certs[c.0].fibre(x)
    }

    /// Largest fibre size.
    pub fn max_fibre(&self) -> usize {
        self.certs.iter().flat_map(|p| p.fibres().iter().map(Vec::len)).max().unwrap_or(0)
    }

    pub fn identity(f: &CatPresheaf) -> DiscOpfibPre {
        certify_dopf_pre(&TwoNat::identity(f)).expect("identities are discrete opfibrations")
    }
}

/// Builds a functor between two apexes by matching keys.
fn map_by_keys<KO, KA>(
    src: &Arc<FinCat>,
    tgt: &Arc<FinCat>,
    src_obj: impl Fn(Obj) -> KO,
    tgt_obj: impl Fn(Obj) -> KO,
    src_arr: impl Fn(Arr) -> KA,
    tgt_arr: impl Fn(Arr) -> KA,
) -> Result<FinFunctor>
where
    KO: Hash + Eq,
    KA: Hash + Eq,
{
    let objs: HashMap<KO, Obj> = tgt.objects().map(|o| (tgt_obj(o), o)).collect();
    let arrs: HashMap<KA, Arr> = tgt.arrows().map(|a| (tgt_arr(a), a)).collect();
    let objects = src
        .objects()
        .map(|o| objs.get(&src_obj(o)).copied().ok_or_else(|| Error::Mismatch("induced object missing".into())))
        .collect::<Result<_>>()?;
    let arrows = src
        .arrows()
        .map(|a| arrs.get(&src_arr(a)).copied().ok_or_else(|| Error::Mismatch("induced arrow missing".into())))
        .collect::<Result<_>>()?;
    FinFunctor::new(src.clone(), tgt.clone(), objects, arrows)
}

/// A pointwise comma square in `[C^op, Cat]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointwiseComma {
    pub apex: CatPresheaf,
    pub left: TwoNat,
    pub right: TwoNat,
    /// The filler at each object, `f_c ∘ left_c ⇒ g_c ∘ right_c`.
    pub fillers: Vec<NatTransform>,
}

/// Comma objects computed objectwise, with the induced arrow actions.
pub fn pointwise_comma(f: &TwoNat, g: &TwoNat) -> Result<PointwiseComma> {
    if f.target != g.target {
        return Err(Error::Mismatch("comma of 2-natural transformations with different codomains".into()));
    }
    let b = f.base().clone();
    let (a_pre, b_pre, c_pre) = (&f.source, &g.source, &f.target);
    let cones: Vec<_> = b.objects().map(|c| comma(f.component(c), g.component(c))).collect::<Result<_>>()?;
    let cats: Vec<Arc<FinCat>> = cones.iter().map(|k| k.apex.clone()).collect();
    let mut actions = Vec::new();
    for h in b.arrows() {
        let (d, c) = (b.dom(h), b.cod(h));
        let (kc, kd) = (&cones[c.0], &cones[d.0]);
        let (ah, bh, ch) = (a_pre.action(h), b_pre.action(h), c_pre.action(h));
        let action = map_by_keys(
            &kc.apex,
            &kd.apex,
            |o| (ah.obj(kc.left.obj(o)), bh.obj(kc.right.obj(o)), ch.arr(kc.filler.component(o))),
            |o| (kd.left.obj(o), kd.right.obj(o), kd.filler.component(o)),
            |t| {
                let (x, y) = (kc.apex.dom(t), kc.apex.cod(t));
                (
                    ah.arr(kc.left.arr(t)),
                    bh.arr(kc.right.arr(t)),
                    ch.arr(kc.filler.component(x)),
                    ch.arr(kc.filler.component(y)),
                )
            },
            |t| {
                let (x, y) = (kd.apex.dom(t), kd.apex.cod(t));
                (kd.left.arr(t), kd.right.arr(t), kd.filler.component(x), kd.filler.component(y))
            },
        )?;
        actions.push(action);
    }
    let apex = CatPresheaf::new(b.clone(), cats, actions)?;
    let left = TwoNat::new(apex.clone(), a_pre.clone(), cones.iter().map(|k| k.left.clone()).collect())?;
    let right = TwoNat::new(apex.clone(), b_pre.clone(), cones.iter().map(|k| k.right.clone()).collect())?;
    let fillers = cones.into_iter().map(|k| k.filler).collect();
    Ok(PointwiseComma { apex, left, right, fillers })
}

/// Change of base of `p` along `z: H → F`, computed objectwise. Pulling back
/// along the identity returns `p`.
pub fn pointwise_pullback(p: &DiscOpfibPre, z: &TwoNat) -> Result<(DiscOpfibPre, TwoNat)> {
    if z.target != *p.over() {
        return Err(Error::Mismatch("pullback along a transformation into a different presheaf".into()));
    }
    if z.is_identity() {
        return Ok((p.clone(), TwoNat::identity(p.total())));
    }
    let b = z.base().clone();
    let (h_pre, e_pre) = (&z.source, p.total());
    let squares: Vec<_> =
        b.objects().map(|c| strict_pullback(z.component(c), p.two_nat().component(c))).collect::<Result<_>>()?;
    let mut actions = Vec::new();
    for h in b.arrows() {
        let (d, c) = (b.dom(h), b.cod(h));
        let ((ac, lc, tc), (ad, ld, td)) = (&squares[c.0], &squares[d.0]);
        let (hh, eh) = (h_pre.action(h), e_pre.action(h));
        actions.push(map_by_keys(
            ac,
            ad,
            |o| (hh.obj(lc.obj(o)), eh.obj(tc.obj(o))),
            |o| (ld.obj(o), td.obj(o)),
            |t| (hh.arr(lc.arr(t)), eh.arr(tc.arr(t))),
            |t| (ld.arr(t), td.arr(t)),
        )?);
    }
    let apex = CatPresheaf::new(b.clone(), squares.iter().map(|s| s.0.clone()).collect(), actions)?;
    let left = TwoNat::new(apex.clone(), h_pre.clone(), squares.iter().map(|s| s.1.clone()).collect())?;
    let top = TwoNat::new(apex, e_pre.clone(), squares.into_iter().map(|s| s.2).collect())?;
    Ok((certify_dopf_pre(&left)?, top))
}

fn fib_search<V>(phi: &DiscOpfibPre, psi: &DiscOpfibPre, budget: &mut Budget, mut visit: V) -> Result<()>
where
    V: FnMut(TwoNat) -> bool,
{
    if phi.over() != psi.over() {
        return Err(Error::Mismatch("opfibrations over different presheaves".into()));
    }
    let b = phi.base().clone();
    let candidates: Vec<Vec<FinFunctor>> =
        b.objects().map(|c| morphisms_over(phi.cert(c), psi.cert(c), budget)).collect::<Result<_>>()?;
    let (g, g2) = (phi.total(), psi.total());
    choose_per_object(
        &b,
        &candidates,
        budget,
        |h, tc, td| {
            // objects suffice: arrows are forced by lifting on both sides
            let (gh, g2h) = (g.action(h), g2.action(h));
            g.at(b.cod(h)).objects().all(|x| g2h.obj(tc.obj(x)) == td.obj(gh.obj(x)))
        },
        |comps| visit(TwoNat::new_unchecked(g.clone(), g2.clone(), comps.into_iter().cloned().collect())),
    )
}

/// Every morphism `dom(φ) → dom(ψ)` over `F`, as strict 2-natural
/// transformations commuting with the projections.
pub fn fib_hom(phi: &DiscOpfibPre, psi: &DiscOpfibPre, budget: &mut Budget) -> Result<Vec<TwoNat>> {
    let mut out = Vec::new();
    fib_search(phi, psi, budget, |t| {
        out.push(t);
        true
    })?;
    Ok(out)
}

/// The first invertible morphism `dom(φ) → dom(ψ)` over `F`, if any.
pub fn fib_iso(phi: &DiscOpfibPre, psi: &DiscOpfibPre, budget: &mut Budget) -> Result<Option<TwoNat>> {
    let b = phi.base();
    if b.objects().any(|c| phi.cert(c).fibres().iter().map(Vec::len).ne(psi.cert(c).fibres().iter().map(Vec::len))) {
        return Ok(None);
    }
    let mut out = None;
    fib_search(phi, psi, budget, |t| {
        if t.is_iso() {
            out = Some(t);
            false
        } else {
            true
        }
    })?;
    Ok(out)
}

/// Every modification `z ⇒ z'`.
pub fn enumerate_modifications(z: &TwoNat, z2: &TwoNat, budget: &mut Budget) -> Result<Vec<Modification>> {
    if z.source != z2.source || z.target != z2.target {
        return Err(Error::Mismatch("modifications need parallel transformations".into()));
    }
    let b = z.base().clone();
    let candidates: Vec<Vec<NatTransform>> =
        b.objects().map(|c| enumerate_nats(z.component(c), z2.component(c), budget)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    let (g, f) = (&z.source, &z.target);
    choose_per_object(
        &b,
        &candidates,
        budget,
        |h, mc, md| {
            g.at(b.cod(h)).objects().all(|x| f.action(h).arr(mc.component(x)) == md.component(g.action(h).obj(x)))
        },
        |comps| {
            out.push(Modification {
                source: z.clone(),
                target: z2.clone(),
                components: comps.into_iter().cloned().collect(),
            });
            true
        },
    )?;
    Ok(out)
}
