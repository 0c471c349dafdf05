use std::sync::Arc;

use super::category::{Arr, FinCat, Obj};
use crate::error::{Error, Result};

/// A functor between finite categories, stored as object and arrow maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinFunctor {
    source: Arc<FinCat>,
    target: Arc<FinCat>,
    objects: Vec<Obj>,
    arrows: Vec<Arr>,
}

impl FinFunctor {
    /// Builds and validates a functor from index maps.
    pub fn new(source: Arc<FinCat>, target: Arc<FinCat>, objects: Vec<Obj>, arrows: Vec<Arr>) -> Result<Self> {
        let f = FinFunctor { source, target, objects, arrows };
        f.validate()?;
        Ok(f)
    }

    pub(crate) fn new_unchecked(source: Arc<FinCat>, target: Arc<FinCat>, objects: Vec<Obj>, arrows: Vec<Arr>) -> Self {
        FinFunctor { source, target, objects, arrows }
    }

    /// Builds a functor from name pairs. Identity arrows may be omitted.
    pub fn from_names(
        source: Arc<FinCat>,
        target: Arc<FinCat>,
        objects: &[(String, String)],
        arrows: &[(String, String)],
    ) -> Result<Self> {
        let mut omap: Vec<Option<Obj>> = vec![None; source.object_count()];
        for (x, y) in objects {
            omap[source.object(x)?.0] = Some(target.object(y)?);
        }
        let omap: Vec<Obj> = omap
            .into_iter()
            .enumerate()
            .map(|(i, o)| {
                o.ok_or_else(|| Error::InvalidFunctor(format!("object `{}` is not mapped", source.object_name(Obj(i)))))
            })
            .collect::<Result<_>>()?;
        let mut amap: Vec<Option<Arr>> = vec![None; source.arrow_count()];
        for (a, b) in arrows {
            amap[source.arrow(a)?.0] = Some(target.arrow(b)?);
        }
        let amap: Vec<Arr> = amap
            .into_iter()
            .enumerate()
            .map(|(i, a)| match a {
                Some(a) => Ok(a),
                None if source.is_identity(Arr(i)) => Ok(target.identity(omap[source.dom(Arr(i)).0])),
                None => Err(Error::InvalidFunctor(format!("arrow `{}` is not mapped", source.arrow_name(Arr(i))))),
            })
            .collect::<Result<_>>()?;
        FinFunctor::new(source, target, omap, amap)
    }

    pub fn identity(cat: Arc<FinCat>) -> Self {
        let objects = cat.objects().collect();
        let arrows = cat.arrows().collect();
        FinFunctor { source: cat.clone(), target: cat, objects, arrows }
    }

    /// The functor `Pt → target` picking `object`.
    pub fn pick(target: Arc<FinCat>, object: Obj) -> Self {
        let pt = Arc::new(FinCat::point());
        let id = target.identity(object);
        FinFunctor { source: pt, target, objects: vec![object], arrows: vec![id] }
    }

    /// The constant functor at `object`.
    pub fn constant(source: Arc<FinCat>, target: Arc<FinCat>, object: Obj) -> Self {
        let id = target.identity(object);
        FinFunctor {
            objects: vec![object; source.object_count()],
            arrows: vec![id; source.arrow_count()],
            source,
            target,
        }
    }

    /// The unique functor into the terminal category.
    pub fn to_point(source: Arc<FinCat>, point: Arc<FinCat>) -> Self {
        let o = Obj(0);
        FinFunctor::constant(source, point, o)
    }

    pub fn source(&self) -> &Arc<FinCat> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinCat> {
        &self.target
    }

    pub fn obj(&self, o: Obj) -> Obj {
        self.objects[o.0]
    }

    pub fn arr(&self, a: Arr) -> Arr {
        self.arrows[a.0]
    }

    pub fn object_map(&self) -> &[Obj] {
        &self.objects
    }

    pub fn arrow_map(&self) -> &[Arr] {
        &self.arrows
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target
            && self.objects.iter().enumerate().all(|(i, o)| o.0 == i)
            && self.arrows.iter().enumerate().all(|(i, a)| a.0 == i)
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &FinFunctor) -> Result<FinFunctor> {
        if first.target != self.source {
            return Err(Error::Mismatch("functor composition: middle categories differ".into()));
        }
        Ok(FinFunctor {
            source: first.source.clone(),
            target: self.target.clone(),
            objects: first.objects.iter().map(|&o| self.obj(o)).collect(),
            arrows: first.arrows.iter().map(|&a| self.arr(a)).collect(),
        })
    }

    /// Exhaustive check of the functor laws.
    pub fn validate(&self) -> Result<()> {
        let (s, t) = (&*self.source, &*self.target);
        if self.objects.len() != s.object_count() || self.arrows.len() != s.arrow_count() {
            return Err(Error::InvalidFunctor("map sizes do not match the source".into()));
        }
        if self.objects.iter().any(|o| o.0 >= t.object_count()) || self.arrows.iter().any(|a| a.0 >= t.arrow_count()) {
            return Err(Error::InvalidFunctor("map lands outside the target".into()));
        }
        for a in s.arrows() {
            let fa = self.arr(a);
            if t.dom(fa) != self.obj(s.dom(a)) || t.cod(fa) != self.obj(s.cod(a)) {
                return Err(Error::InvalidFunctor(format!(
                    "arrow `{}` is sent to `{}` with the wrong domain or codomain",
                    s.arrow_name(a),
                    t.arrow_name(fa)
                )));
            }
        }
        for o in s.objects() {
            if self.arr(s.identity(o)) != t.identity(self.obj(o)) {
                return Err(Error::InvalidFunctor(format!("identity of `{}` is not preserved", s.object_name(o))));
            }
        }
        for (g, f) in s.composable_pairs() {
            if self.arr(s.comp(g, f)) != t.comp(self.arr(g), self.arr(f)) {
                return Err(Error::InvalidFunctor(format!(
                    "composite {} . {} is not preserved",
                    s.arrow_name(g),
                    s.arrow_name(f)
                )));
            }
        }
        Ok(())
    }

    /// Whether the functor is an isomorphism of categories.
    pub fn is_isomorphism(&self) -> bool {
        let mut seen_o = vec![false; self.target.object_count()];
        let mut seen_a = vec![false; self.target.arrow_count()];
        self.objects.len() == seen_o.len()
            && self.arrows.len() == seen_a.len()
            && self.objects.iter().all(|o| !std::mem::replace(&mut seen_o[o.0], true))
            && self.arrows.iter().all(|a| !std::mem::replace(&mut seen_a[a.0], true))
    }

    /// The inverse of an isomorphism of categories.
    pub fn inverse(&self) -> Option<FinFunctor> {
        if !self.is_isomorphism() {
            return None;
        }
        let mut objects = vec![Obj(0); self.objects.len()];
        for (i, o) in self.objects.iter().enumerate() {
            objects[o.0] = Obj(i);
        }
        let mut arrows = vec![Arr(0); self.arrows.len()];
        for (i, a) in self.arrows.iter().enumerate() {
            arrows[a.0] = Arr(i);
        }
        Some(FinFunctor { source: self.target.clone(), target: self.source.clone(), objects, arrows })
    }
}

/// A natural transformation between parallel functors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NatTransform {
    source: FinFunctor,
    target: FinFunctor,
    components: Vec<Arr>,
}

impl NatTransform {
    pub fn new(source: FinFunctor, target: FinFunctor, components: Vec<Arr>) -> Result<Self> {
        let n = NatTransform { source, target, components };
        n.validate()?;
        Ok(n)
    }

    pub(crate) fn new_unchecked(source: FinFunctor, target: FinFunctor, components: Vec<Arr>) -> Self {
        NatTransform { source, target, components }
    }

    pub fn identity(f: &FinFunctor) -> Self {
        let t = f.target();
        let components = f.source().objects().map(|o| t.identity(f.obj(o))).collect();
        NatTransform { source: f.clone(), target: f.clone(), components }
    }

    pub fn source(&self) -> &FinFunctor {
        &self.source
    }

    pub fn target(&self) -> &FinFunctor {
        &self.target
    }

    pub fn component(&self, o: Obj) -> Arr {
        self.components[o.0]
    }

    pub fn components(&self) -> &[Arr] {
        &self.components
    }

    pub fn validate(&self) -> Result<()> {
        let (f, g) = (&self.source, &self.target);
        if f.source() != g.source() || f.target() != g.target() {
            return Err(Error::InvalidNatural("functors are not parallel".into()));
        }
        let (a, b) = (&**f.source(), &**f.target());
        if self.components.len() != a.object_count() {
            return Err(Error::InvalidNatural("wrong number of components".into()));
        }
        for x in a.objects() {
            let c = self.component(x);
            if b.dom(c) != f.obj(x) || b.cod(c) != g.obj(x) {
                return Err(Error::InvalidNatural(format!("component at `{}` has the wrong type", a.object_name(x))));
            }
        }
        for u in a.arrows() {
            let (x, y) = (a.dom(u), a.cod(u));
            if b.comp(g.arr(u), self.component(x)) != b.comp(self.component(y), f.arr(u)) {
                return Err(Error::InvalidNatural(format!("naturality square fails at `{}`", a.arrow_name(u))));
            }
        }
        Ok(())
    }

    pub fn is_iso(&self) -> bool {
        let b = self.source.target();
        self.components.iter().all(|&c| b.is_iso(c))
    }

    /// Vertical composite `self · first`.
    pub fn after(&self, first: &NatTransform) -> Result<NatTransform> {
        if first.target != self.source {
            return Err(Error::Mismatch("vertical composition: middle functors differ".into()));
        }
        let b = self.source.target();
        let components = first.components.iter().zip(&self.components).map(|(&f, &g)| b.comp(g, f)).collect();
        Ok(NatTransform { source: first.source.clone(), target: self.target.clone(), components })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn walking_arrow() -> Arc<FinCat> {
        Arc::new(FinCat::free(&["a", "b"], &[("u", "a", "b")]).unwrap())
    }

    #[test]
    fn identity_and_composition() {
        let w = walking_arrow();
        let id = FinFunctor::identity(w.clone());
        id.validate().unwrap();
        assert!(id.is_identity());
        assert_eq!(id.after(&id).unwrap(), id);
        assert!(id.is_isomorphism());
        assert_eq!(id.inverse().unwrap(), id);
    }

    #[test]
    fn bad_functor_is_rejected() {
        let w = walking_arrow();
        let a = w.object("a").unwrap();
        let b = w.object("b").unwrap();
        let u = w.arrow("u").unwrap();
        // swap objects but keep u: a -> b, so types break
        let err = FinFunctor::new(w.clone(), w.clone(), vec![b, a], vec![w.identity(b), w.identity(a), u]);
        assert!(err.is_err());
    }

    #[test]
    fn naturality_is_checked() {
        let w = walking_arrow();
        let a = w.object("a").unwrap();
        let b = w.object("b").unwrap();
        let pa = FinFunctor::pick(w.clone(), a);
        let pb = FinFunctor::pick(w.clone(), b);
        let u = w.arrow("u").unwrap();
        NatTransform::new(pa.clone(), pb.clone(), vec![u]).unwrap();
        assert!(NatTransform::new(pb, pa, vec![u]).is_err());
    }
}
