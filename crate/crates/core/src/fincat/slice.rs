use std::collections::HashMap;
use std::sync::Arc;

use super::category::{Arr, FinCat, Obj, RawCat};
use super::functor::FinFunctor;
use crate::error::Result;

/// The slice `C/c` together with its projection to `C`.
///
/// The object over `f: d → c` carries the name of `f`. For `g: e → d` the
/// arrow `g: (f∘g) → f` is named `g@f`, so names stay unique even when the
/// same `g` appears over several objects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slice {
    over: Obj,
    cat: Arc<FinCat>,
    dom: FinFunctor,
    object_of: HashMap<Arr, Obj>,
    arrow_of: HashMap<(Arr, Arr), Arr>,
    base_arrow: Vec<Arr>,
    underlying: Vec<Arr>,
}

impl Slice {
    pub fn new(base: &Arc<FinCat>, c: Obj) -> Slice {
        let into: Vec<Arr> = base.in_arrows(c).to_vec();
        let mut raw = RawCat::default();
        let mut local: HashMap<Arr, usize> = HashMap::new();
        for (i, &f) in into.iter().enumerate() {
            raw.objects.push(base.arrow_name(f).to_string());
            local.insert(f, i);
        }
        // (g, f) -> raw arrow index
        let mut arrow_raw: HashMap<(Arr, Arr), usize> = HashMap::new();
        let mut under = Vec::new();
        for &f in &into {
            let d = base.dom(f);
            for &g in base.in_arrows(d) {
                let src = local[&base.comp(f, g)];
                arrow_raw.insert((g, f), raw.arrows.len());
                raw.arrows.push((format!("{}@{}", base.arrow_name(g), base.arrow_name(f)), src, local[&f]));
                under.push(g);
            }
        }
        for &f in &into {
            raw.identities.push(arrow_raw[&(base.identity(base.dom(f)), f)]);
        }
        // (g'@f') ∘ (g@f) = (g'∘g)@f' whenever f = f'∘g'
        for (&(g2, f2), &i2) in &arrow_raw {
            for &g in base.in_arrows(base.dom(g2)) {
                let f = base.comp(f2, g2);
                let i1 = arrow_raw[&(g, f)];
                raw.compose.push(((i2, i1), arrow_raw[&(base.comp(g2, g), f2)]));
            }
        }
        let raw_objects = raw.objects.clone();
        let raw_arrows: Vec<String> = raw.arrows.iter().map(|a| a.0.clone()).collect();
        let cat = Arc::new(raw.into_cat());
        let object_of: HashMap<Arr, Obj> =
            into.iter().enumerate().map(|(i, &f)| (f, cat.object(&raw_objects[i]).expect("slice object"))).collect();
        let arrow_of: HashMap<(Arr, Arr), Arr> =
            arrow_raw.iter().map(|(&k, &i)| (k, cat.arrow(&raw_arrows[i]).expect("slice arrow"))).collect();
        let mut base_arrow = vec![Arr(0); cat.object_count()];
        for (&f, &o) in &object_of {
            base_arrow[o.0] = f;
        }
        let mut underlying = vec![Arr(0); cat.arrow_count()];
        for (&(g, _), &a) in &arrow_of {
            underlying[a.0] = g;
        }
        let dom = FinFunctor::new_unchecked(
            cat.clone(),
            base.clone(),
            base_arrow.iter().map(|&f| base.dom(f)).collect(),
            underlying.clone(),
        );
        Slice { over: c, cat, dom, object_of, arrow_of, base_arrow, underlying }
    }

    pub fn over(&self) -> Obj {
        self.over
    }

    pub fn cat(&self) -> &Arc<FinCat> {
        &self.cat
    }

    /// The projection `C/c → C`.
    pub fn dom(&self) -> &FinFunctor {
        &self.dom
    }

    /// The slice object wrapping `f`, which must have codomain `c`.
    pub fn object_of(&self, f: Arr) -> Obj {
        self.object_of[&f]
    }

    /// The slice arrow `g: (f∘g) → f`.
    pub fn arrow_of(&self, g: Arr, f: Arr) -> Arr {
        self.arrow_of[&(g, f)]
    }

    /// The `C`-arrow wrapped by a slice object.
    pub fn base_arrow(&self, o: Obj) -> Arr {
        self.base_arrow[o.0]
    }

    /// The `C`-arrow underlying a slice arrow.
    pub fn underlying(&self, a: Arr) -> Arr {
        self.underlying[a.0]
    }

    /// The object wrapping `id_c`, terminal in the slice.
    pub fn top(&self, base: &FinCat) -> Obj {
        self.object_of(base.identity(self.over))
    }
}

/// All slices of a base category and the post-composition functors between
/// them, built once and shared.
#[derive(Debug, PartialEq, Eq)]
pub struct SliceFamily {
    base: Arc<FinCat>,
    slices: Vec<Slice>,
    post: Vec<FinFunctor>,
}

impl SliceFamily {
    pub fn new(base: Arc<FinCat>) -> Arc<SliceFamily> {
        let slices: Vec<Slice> = base.objects().map(|c| Slice::new(&base, c)).collect();
        let post = base.arrows().map(|f| postcompose_in(&base, &slices, f)).collect();
        Arc::new(SliceFamily { base, slices, post })
    }

    pub fn base(&self) -> &Arc<FinCat> {
        &self.base
    }

    pub fn slice(&self, c: Obj) -> &Slice {
        &self.slices[c.0]
    }

    /// `f∘- : C/d → C/c` for `f: d → c`.
    pub fn postcompose(&self, f: Arr) -> &FinFunctor {
        &self.post[f.0]
    }
}

fn postcompose_in(base: &Arc<FinCat>, slices: &[Slice], f: Arr) -> FinFunctor {
    let (d, c) = (base.dom(f), base.cod(f));
    let (sd, sc) = (&slices[d.0], &slices[c.0]);
    let objects = sd.cat.objects().map(|o| sc.object_of(base.comp(f, sd.base_arrow(o)))).collect();
    let arrows = sd
        .cat
        .arrows()
        .map(|a| {
            let g = sd.underlying(a);
            let h = sd.base_arrow(sd.cat.cod(a));
            sc.arrow_of(g, base.comp(f, h))
        })
        .collect();
    FinFunctor::new_unchecked(sd.cat.clone(), sc.cat.clone(), objects, arrows)
}

/// The slice `C/c` with its projection.
pub fn slice(base: &Arc<FinCat>, c: Obj) -> (Arc<FinCat>, FinFunctor) {
    let s = Slice::new(base, c);
    (s.cat.clone(), s.dom)
}

/// `f∘- : C/d → C/c`, built on fresh slices.
pub fn postcompose(base: &Arc<FinCat>, f: Arr) -> Result<FinFunctor> {
    let slices: Vec<Slice> = base.objects().map(|c| Slice::new(base, c)).collect();
    let p = postcompose_in(base, &slices, f);
    p.validate()?;
    Ok(p)
}
