use std::collections::BTreeMap;
use std::sync::Arc;

use super::category::{Arr, FinCat, Obj};
use super::functor::FinFunctor;
use crate::error::{Error, Result};

/// Shared storage for finite-set-valued functors of either variance.
///
/// `sets[o]` is a sorted list of distinct element labels; elements are
/// addressed by their position in it. `maps[a]` is the function attached to
/// the arrow `a`, as an index table over its source set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetTables {
    base: Arc<FinCat>,
    sets: Vec<Vec<String>>,
    maps: Vec<Vec<usize>>,
}

/// Common interface of [`SetPresheaf`] and [`FinSetFunctor`].
pub trait SetDiagram: Clone + PartialEq {
    const COVARIANT: bool;

    fn tables(&self) -> &SetTables;

    #[doc(hidden)]
    fn from_tables_unchecked(t: SetTables) -> Self;

    fn base(&self) -> &Arc<FinCat> {
        &self.tables().base
    }

    fn set(&self, o: Obj) -> &[String] {
        &self.tables().sets[o.0]
    }

    fn card(&self, o: Obj) -> usize {
        self.tables().sets[o.0].len()
    }

    fn map(&self, a: Arr) -> &[usize] {
        &self.tables().maps[a.0]
    }

    /// Image of element `x` under the function attached to `a`.
    fn act(&self, a: Arr, x: usize) -> usize {
        self.tables().maps[a.0][x]
    }

    fn element(&self, o: Obj, label: &str) -> Option<usize> {
        self.set(o).binary_search_by(|s| s.as_str().cmp(label)).ok()
    }

    /// The object whose set is the domain of the function attached to `a`.
    fn map_source(&self, a: Arr) -> Obj {
        let b = self.base();
        if Self::COVARIANT {
            b.dom(a)
        } else {
            b.cod(a)
        }
    }

    fn map_target(&self, a: Arr) -> Obj {
        let b = self.base();
        if Self::COVARIANT {
            b.cod(a)
        } else {
            b.dom(a)
        }
    }

    fn new(base: Arc<FinCat>, sets: Vec<Vec<String>>, maps: Vec<Vec<usize>>) -> Result<Self> {
        let d = Self::from_tables_unchecked(SetTables { base, sets, maps });
        d.validate()?;
        Ok(d)
    }

    /// Builds from labels. `maps` lists `(arrow, [(x, image)])`; identity
    /// arrows may be omitted.
    #[allow(clippy::type_complexity)]
    fn from_names(
        base: Arc<FinCat>,
        sets: &[(String, Vec<String>)],
        maps: &[(String, Vec<(String, String)>)],
    ) -> Result<Self> {
        let mut s: Vec<Option<Vec<String>>> = vec![None; base.object_count()];
        for (o, elems) in sets {
            let mut e = elems.clone();
            e.sort();
            if let Some(w) = e.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::DuplicateName { kind: "element", name: w[0].clone() });
            }
            s[base.object(o)?.0] = Some(e);
        }
        let sets: Vec<Vec<String>> = s
            .into_iter()
            .enumerate()
            .map(|(i, e)| {
                e.ok_or_else(|| Error::InvalidSetFunctor(format!("no set given for `{}`", base.object_name(Obj(i)))))
            })
            .collect::<Result<_>>()?;
        let tmp = Self::from_tables_unchecked(SetTables { base: base.clone(), sets: sets.clone(), maps: vec![] });
        let mut m: Vec<Option<Vec<usize>>> = vec![None; base.arrow_count()];
        for (a, pairs) in maps {
            let a = base.arrow(a)?;
            let (src, tgt) = (tmp.map_source(a), tmp.map_target(a));
            let mut table = vec![usize::MAX; sets[src.0].len()];
            for (x, y) in pairs {
                let xi = find(&sets[src.0], x, &base, src)?;
                let yi = find(&sets[tgt.0], y, &base, tgt)?;
                table[xi] = yi;
            }
            if let Some(i) = table.iter().position(|&v| v == usize::MAX) {
                return Err(Error::InvalidSetFunctor(format!(
                    "function for `{}` does not assign `{}`",
                    base.arrow_name(a),
                    sets[src.0][i]
                )));
            }
            m[a.0] = Some(table);
        }
        let maps = m
            .into_iter()
            .enumerate()
            .map(|(i, t)| match t {
                Some(t) => Ok(t),
                None if base.is_identity(Arr(i)) => Ok((0..sets[base.dom(Arr(i)).0].len()).collect()),
                None => Err(Error::InvalidSetFunctor(format!("no function given for `{}`", base.arrow_name(Arr(i))))),
            })
            .collect::<Result<_>>()?;
        Self::new(base, sets, maps)
    }

    /// Functoriality scan.
    fn validate(&self) -> Result<()> {
        let t = self.tables();
        let b = &*t.base;
        if t.sets.len() != b.object_count() || t.maps.len() != b.arrow_count() {
            return Err(Error::InvalidSetFunctor("table sizes do not match the base".into()));
        }
        for s in &t.sets {
            if s.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidSetFunctor("element labels must be sorted and distinct".into()));
            }
        }
        for a in b.arrows() {
            let (src, tgt) = (self.map_source(a), self.map_target(a));
            let m = &t.maps[a.0];
            if m.len() != t.sets[src.0].len() || m.iter().any(|&y| y >= t.sets[tgt.0].len()) {
                return Err(Error::InvalidSetFunctor(format!(
                    "function for `{}` has the wrong domain or codomain",
                    b.arrow_name(a)
                )));
            }
        }
        for o in b.objects() {
            let id = &t.maps[b.identity(o).0];
            if id.iter().enumerate().any(|(i, &j)| i != j) {
                return Err(Error::InvalidSetFunctor(format!(
                    "identity on `{}` does not act trivially",
                    b.object_name(o)
                )));
            }
        }
        for (g, f) in b.composable_pairs() {
            let gf = b.comp(g, f);
            // covariant: Z(g∘f) = Z(g)∘Z(f); contravariant: Z(g∘f) = Z(f)∘Z(g)
            let (first, second) = if Self::COVARIANT { (f, g) } else { (g, f) };
            let ok = (0..t.maps[gf.0].len()).all(|x| t.maps[gf.0][x] == t.maps[second.0][t.maps[first.0][x]]);
            if !ok {
                return Err(Error::InvalidSetFunctor(format!(
                    "composite {} . {} is not preserved",
                    b.arrow_name(g),
                    b.arrow_name(f)
                )));
            }
        }
        Ok(())
    }

    /// The constant functor at the one-element set `{*}`.
    fn terminal(base: Arc<FinCat>) -> Self {
        let sets = vec![vec!["*".to_string()]; base.object_count()];
        let maps = vec![vec![0]; base.arrow_count()];
        Self::from_tables_unchecked(SetTables { base, sets, maps })
    }

    /// Whether every set is a singleton.
    fn is_terminal(&self) -> bool {
        self.tables().sets.iter().all(|s| s.len() == 1)
    }

    /// Precomposition with a functor `g: D → base`.
    fn reindex(&self, g: &FinFunctor) -> Result<Self> {
        if g.target() != self.base() {
            return Err(Error::Mismatch("reindexing functor lands in a different base".into()));
        }
        let d = g.source();
        let t = self.tables();
        let sets = d.objects().map(|o| t.sets[g.obj(o).0].clone()).collect();
        let maps = d.arrows().map(|a| t.maps[g.arr(a).0].clone()).collect();
        Ok(Self::from_tables_unchecked(SetTables { base: d.clone(), sets, maps }))
    }

    /// Total number of elements.
    fn total(&self) -> usize {
        self.tables().sets.iter().map(Vec::len).sum()
    }
}

fn find(set: &[String], label: &str, base: &FinCat, o: Obj) -> Result<usize> {
    set.binary_search_by(|s| s.as_str().cmp(label))
        .map_err(|_| Error::InvalidSetFunctor(format!("`{label}` is not an element at `{}`", base.object_name(o))))
}

/// A presheaf `base^op → FinSet`: `f: d → c` acts as a function `Z(c) → Z(d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetPresheaf(SetTables);

/// A functor `base → FinSet`: `f: d → c` acts as a function `Z(d) → Z(c)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinSetFunctor(SetTables);

impl SetDiagram for SetPresheaf {
    const COVARIANT: bool = false;

    fn tables(&self) -> &SetTables {
        &self.0
    }

    fn from_tables_unchecked(t: SetTables) -> Self {
        SetPresheaf(t)
    }
}

impl SetDiagram for FinSetFunctor {
    const COVARIANT: bool = true;

    fn tables(&self) -> &SetTables {
        &self.0
    }

    fn from_tables_unchecked(t: SetTables) -> Self {
        FinSetFunctor(t)
    }
}

impl SetPresheaf {
    /// The representable `Hom(-, c)`, with elements labelled by arrow names.
    pub fn representable(base: Arc<FinCat>, c: Obj) -> SetPresheaf {
        let mut sets = Vec::new();
        let mut hom_index: Vec<BTreeMap<Arr, usize>> = Vec::new();
        for d in base.objects() {
            let mut hom = base.hom(d, c);
            hom.sort_by(|x, y| base.arrow_name(*x).cmp(base.arrow_name(*y)));
            hom_index.push(hom.iter().enumerate().map(|(i, a)| (*a, i)).collect());
            sets.push(hom.iter().map(|a| base.arrow_name(*a).to_string()).collect::<Vec<_>>());
        }
        let mut maps = Vec::new();
        for g in base.arrows() {
            let (e, d) = (base.dom(g), base.cod(g));
            let mut hom_d: Vec<(Arr, usize)> = hom_index[d.0].iter().map(|(a, i)| (*a, *i)).collect();
            hom_d.sort_by_key(|p| p.1);
            maps.push(hom_d.iter().map(|(h, _)| hom_index[e.0][&base.comp(*h, g)]).collect());
        }
        SetPresheaf(SetTables { base, sets, maps })
    }
}

/// A natural transformation between set-valued functors of the same variance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetNat<D: SetDiagram> {
    source: D,
    target: D,
    components: Vec<Vec<usize>>,
}

impl<D: SetDiagram> SetNat<D> {
    pub fn new(source: D, target: D, components: Vec<Vec<usize>>) -> Result<Self> {
        let n = SetNat { source, target, components };
        n.validate()?;
        Ok(n)
    }

    pub(crate) fn new_unchecked(source: D, target: D, components: Vec<Vec<usize>>) -> Self {
        SetNat { source, target, components }
    }

    pub fn identity(z: &D) -> Self {
        let components = z.base().objects().map(|o| (0..z.card(o)).collect()).collect();
        SetNat { source: z.clone(), target: z.clone(), components }
    }

    pub fn source(&self) -> &D {
        &self.source
    }

    pub fn target(&self) -> &D {
        &self.target
    }

    pub fn component(&self, o: Obj) -> &[usize] {
        &self.components[o.0]
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn validate(&self) -> Result<()> {
        let (s, t) = (&self.source, &self.target);
        if s.base() != t.base() {
            return Err(Error::InvalidNatural("set functors live over different bases".into()));
        }
        let b = s.base();
        if self.components.len() != b.object_count() {
            return Err(Error::InvalidNatural("wrong number of components".into()));
        }
        for o in b.objects() {
            let c = &self.components[o.0];
            if c.len() != s.card(o) || c.iter().any(|&y| y >= t.card(o)) {
                return Err(Error::InvalidNatural(format!("component at `{}` has the wrong type", b.object_name(o))));
            }
        }
        for a in b.arrows() {
            if !self.square_commutes(a) {
                return Err(Error::InvalidNatural(format!("naturality fails at `{}`", b.arrow_name(a))));
            }
        }
        Ok(())
    }

    fn square_commutes(&self, a: Arr) -> bool {
        let (src, tgt) = (self.source.map_source(a), self.source.map_target(a));
        (0..self.source.card(src))
            .all(|x| self.components[tgt.0][self.source.act(a, x)] == self.target.act(a, self.components[src.0][x]))
    }

    /// Whether every component is a bijection.
    pub fn is_iso(&self) -> bool {
        self.source.base().objects().all(|o| {
            let c = &self.components[o.0];
            if c.len() != self.target.card(o) {
                return false;
            }
            let mut seen = vec![false; c.len()];
            c.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
        })
    }

    /// Vertical composite `self · first`.
    pub fn after(&self, first: &SetNat<D>) -> Result<SetNat<D>> {
        if first.target != self.source {
            return Err(Error::Mismatch("composing set transformations with different middles".into()));
        }
        let components =
            first.components.iter().zip(&self.components).map(|(f, g)| f.iter().map(|&x| g[x]).collect()).collect();
        Ok(SetNat { source: first.source.clone(), target: self.target.clone(), components })
    }

    pub fn inverse(&self) -> Option<SetNat<D>> {
        if !self.is_iso() {
            return None;
        }
        let components = self
            .components
            .iter()
            .map(|c| {
                let mut inv = vec![0; c.len()];
                for (x, &y) in c.iter().enumerate() {
                    inv[y] = x;
                }
                inv
            })
            .collect();
        Some(SetNat { source: self.target.clone(), target: self.source.clone(), components })
    }

    /// Reindexing along a functor into the base.
    pub fn reindex(&self, g: &FinFunctor) -> Result<SetNat<D>> {
        let components = g.source().objects().map(|o| self.components[g.obj(o).0].clone()).collect();
        Ok(SetNat { source: self.source.reindex(g)?, target: self.target.reindex(g)?, components })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn walking_arrow() -> Arc<FinCat> {
        Arc::new(FinCat::free(&["a", "b"], &[("u", "a", "b")]).unwrap())
    }

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn presheaf_from_names() {
        let w = walking_arrow();
        let z = SetPresheaf::from_names(
            w.clone(),
            &[("a".into(), s(&["p"])), ("b".into(), s(&["x", "y"]))],
            &[("u".into(), vec![("x".into(), "p".into()), ("y".into(), "p".into())])],
        )
        .unwrap();
        assert_eq!(z.card(w.object("b").unwrap()), 2);
        assert_eq!(z.total(), 3);
        // the covariant reading of the same table has the wrong shape
        let bad = FinSetFunctor::from_names(
            w,
            &[("a".into(), s(&["p"])), ("b".into(), s(&["x", "y"]))],
            &[("u".into(), vec![("x".into(), "p".into())])],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn representable_is_functorial() {
        let c = Arc::new(FinCat::free(&["a", "b", "c"], &[("f", "a", "b"), ("g", "b", "c")]).unwrap());
        for o in c.objects() {
            let y = SetPresheaf::representable(c.clone(), o);
            y.validate().unwrap();
        }
        let y = SetPresheaf::representable(c.clone(), c.object("c").unwrap());
        assert_eq!(y.set(c.object("a").unwrap()), &s(&["g.f"])[..]);
    }

    #[test]
    fn identity_nat_and_inverse() {
        let w = walking_arrow();
        let z = SetPresheaf::terminal(w);
        let id = SetNat::identity(&z);
        id.validate().unwrap();
        assert!(id.is_iso());
        assert_eq!(id.inverse().unwrap(), id);
        assert_eq!(id.after(&id).unwrap(), id);
    }
}
