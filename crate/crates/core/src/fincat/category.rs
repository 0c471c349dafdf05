use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};

/// Index of an object inside a [`FinCat`]. Indices follow the lexicographic
/// order of object identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Obj(pub usize);

/// Index of an arrow inside a [`FinCat`], in lexicographic identifier order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arr(pub usize);

impl Obj {
    pub fn index(self) -> usize {
        self.0
    }
}

impl Arr {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct ArrowEntry {
    name: String,
    dom: Obj,
    cod: Obj,
}

/// A finite category stored as explicit object, arrow and composition tables.
///
/// Identifiers are opaque strings. Objects and arrows are kept sorted by
/// identifier, so two categories built from the same tables are equal as
/// values regardless of declaration order.
#[derive(Clone, PartialEq, Eq)]
pub struct FinCat {
    objects: Vec<String>,
    arrows: Vec<ArrowEntry>,
    identities: Vec<Arr>,
    compose: HashMap<(Arr, Arr), Arr>,
    object_index: HashMap<String, Obj>,
    arrow_index: HashMap<String, Arr>,
    out_arrows: Vec<Vec<Arr>>,
    in_arrows: Vec<Vec<Arr>>,
}

impl fmt::Debug for FinCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinCat")
            .field("objects", &self.objects)
            .field(
                "arrows",
                &self
                    .arrows
                    .iter()
                    .map(|a| format!("{}: {} -> {}", a.name, self.objects[a.dom.0], self.objects[a.cod.0]))
                    .collect::<Vec<_>>(),
            )
            .finish()
    }
}

/// Raw, name-based tables for a category, as they appear in documents.
///
/// Composites with an identity may be omitted; they are forced by the
/// identity laws. Every other composable pair must be listed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CategoryTables {
    pub objects: Vec<String>,
    /// `(name, dom, cod)`
    pub arrows: Vec<(String, String, String)>,
    /// `(object, identity arrow)`
    pub identities: Vec<(String, String)>,
    /// `(g, f, g∘f)`
    pub composites: Vec<(String, String, String)>,
}

impl CategoryTables {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn object(mut self, name: &str) -> Self {
        self.objects.push(name.to_string());
        self
    }

    pub fn arrow(mut self, name: &str, dom: &str, cod: &str) -> Self {
        self.arrows.push((name.to_string(), dom.to_string(), cod.to_string()));
        self
    }

    pub fn identity(mut self, object: &str, arrow: &str) -> Self {
        self.identities.push((object.to_string(), arrow.to_string()));
        self
    }

    pub fn composite(mut self, g: &str, f: &str, gf: &str) -> Self {
        self.composites.push((g.to_string(), f.to_string(), gf.to_string()));
        self
    }

    /// Validates the tables and produces a category.
    pub fn build(&self) -> Result<FinCat> {
        build_category(self)
    }
}

/// Index-based tables for constructions that already know their composition
/// law. Names may come in any order; they are sorted on conversion.
#[derive(Debug, Clone, Default)]
pub(crate) struct RawCat {
    pub objects: Vec<String>,
    pub arrows: Vec<(String, usize, usize)>,
    pub identities: Vec<usize>,
    pub compose: Vec<((usize, usize), usize)>,
}

impl RawCat {
    pub fn into_cat(self) -> FinCat {
        let mut obj_order: Vec<usize> = (0..self.objects.len()).collect();
        obj_order.sort_by(|a, b| self.objects[*a].cmp(&self.objects[*b]));
        let mut obj_rank = vec![0; self.objects.len()];
        for (rank, &old) in obj_order.iter().enumerate() {
            obj_rank[old] = rank;
        }
        let mut arr_order: Vec<usize> = (0..self.arrows.len()).collect();
        arr_order.sort_by(|a, b| self.arrows[*a].0.cmp(&self.arrows[*b].0));
        let mut arr_rank = vec![0; self.arrows.len()];
        for (rank, &old) in arr_order.iter().enumerate() {
            arr_rank[old] = rank;
        }
        let objects: Vec<String> = obj_order.iter().map(|&i| self.objects[i].clone()).collect();
        let arrows: Vec<ArrowEntry> = arr_order
            .iter()
            .map(|&i| {
                let (name, d, c) = &self.arrows[i];
                ArrowEntry { name: name.clone(), dom: Obj(obj_rank[*d]), cod: Obj(obj_rank[*c]) }
            })
            .collect();
        let mut identities = vec![Arr(0); objects.len()];
        for (old_obj, &id) in self.identities.iter().enumerate() {
            identities[obj_rank[old_obj]] = Arr(arr_rank[id]);
        }
        let compose = self
            .compose
            .into_iter()
            .map(|((g, f), gf)| ((Arr(arr_rank[g]), Arr(arr_rank[f])), Arr(arr_rank[gf])))
            .collect();
        FinCat::assemble(objects, arrows, identities, compose)
    }
}

impl FinCat {
    fn assemble(
        objects: Vec<String>,
        arrows: Vec<ArrowEntry>,
        identities: Vec<Arr>,
        compose: HashMap<(Arr, Arr), Arr>,
    ) -> FinCat {
        let object_index = objects.iter().enumerate().map(|(i, n)| (n.clone(), Obj(i))).collect();
        let arrow_index = arrows.iter().enumerate().map(|(i, a)| (a.name.clone(), Arr(i))).collect();
        let mut out_arrows = vec![Vec::new(); objects.len()];
        let mut in_arrows = vec![Vec::new(); objects.len()];
        for (i, a) in arrows.iter().enumerate() {
            out_arrows[a.dom.0].push(Arr(i));
            in_arrows[a.cod.0].push(Arr(i));
        }
        FinCat { objects, arrows, identities, compose, object_index, arrow_index, out_arrows, in_arrows }
    }

    /// The terminal category: one object `*` whose identity is also named `*`.
    pub fn point() -> FinCat {
        FinCat::discrete(["*"])
    }

    /// The discrete category on the given names; each identity arrow carries
    /// the name of its object.
    pub fn discrete<I, S>(names: I) -> FinCat
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let objects: Vec<String> = names.into_iter().map(|s| s.as_ref().to_string()).collect();
        let raw = RawCat {
            arrows: objects.iter().enumerate().map(|(i, n)| (n.clone(), i, i)).collect(),
            identities: (0..objects.len()).collect(),
            compose: (0..objects.len()).map(|i| ((i, i), i)).collect(),
            objects,
        };
        raw.into_cat()
    }

    /// Free category on an acyclic graph. Identities are named `id_<object>`
    /// and the composite of a path `f1 .. fn` (first arrow first) is named
    /// `fn.….f1`.
    pub fn free<S: AsRef<str>>(objects: &[S], generators: &[(S, S, S)]) -> Result<FinCat> {
        let objects: Vec<String> = objects.iter().map(|s| s.as_ref().to_string()).collect();
        let index: HashMap<&str, usize> = objects.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let mut gens = Vec::new();
        for (name, d, c) in generators {
            let d = *index.get(d.as_ref()).ok_or_else(|| Error::UnknownObject(d.as_ref().to_string()))?;
            let c = *index.get(c.as_ref()).ok_or_else(|| Error::UnknownObject(c.as_ref().to_string()))?;
            gens.push((name.as_ref().to_string(), d, c));
        }
        // paths as sequences of generator indices, first arrow first
        let mut paths: Vec<Vec<usize>> = Vec::new();
        let mut frontier: Vec<Vec<usize>> = (0..gens.len()).map(|g| vec![g]).collect();
        let limit = objects.len() + 1;
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for p in &frontier {
                if p.len() > limit {
                    return Err(Error::Mismatch(format!("generator graph has a cycle through `{}`", gens[p[0]].0)));
                }
                let end = gens[*p.last().unwrap()].2;
                for (gi, g) in gens.iter().enumerate() {
                    if g.1 == end {
                        let mut q = p.clone();
                        q.push(gi);
                        next.push(q);
                    }
                }
            }
            paths.append(&mut frontier);
            frontier = next;
        }
        let path_name =
            |p: &[usize]| -> String { p.iter().rev().map(|&g| gens[g].0.as_str()).collect::<Vec<_>>().join(".") };
        let mut raw = RawCat { objects: objects.clone(), ..Default::default() };
        for (i, o) in objects.iter().enumerate() {
            raw.arrows.push((format!("id_{o}"), i, i));
            raw.identities.push(i);
        }
        let mut path_index: HashMap<Vec<usize>, usize> = HashMap::new();
        for p in &paths {
            let idx = raw.arrows.len();
            raw.arrows.push((path_name(p), gens[p[0]].1, gens[*p.last().unwrap()].2));
            path_index.insert(p.clone(), idx);
        }
        let n_obj = objects.len();
        for o in 0..n_obj {
            raw.compose.push(((o, o), o));
        }
        for p in &paths {
            let pi = path_index[p];
            let (d, c) = (gens[p[0]].1, gens[*p.last().unwrap()].2);
            raw.compose.push(((c, pi), pi));
            raw.compose.push(((pi, d), pi));
            for q in &paths {
                if gens[q[0]].1 == c {
                    let mut pq = p.clone();
                    pq.extend_from_slice(q);
                    raw.compose.push(((path_index[q], pi), path_index[&pq]));
                }
            }
        }
        let names: BTreeSet<&String> = raw.arrows.iter().map(|a| &a.0).collect();
        if names.len() != raw.arrows.len() {
            return Err(Error::DuplicateName { kind: "arrow", name: "generated path name".into() });
        }
        Ok(raw.into_cat())
    }

    /// The poset generated by `relations` (`x <= y`), reflexively and
    /// transitively closed. The arrow `x <= y` is named `x<y`; the identity on
    /// `x` is named `id_x`.
    pub fn poset<S: AsRef<str>>(elements: &[S], relations: &[(S, S)]) -> Result<FinCat> {
        let elements: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
        let n = elements.len();
        let index: HashMap<&str, usize> = elements.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (x, y) in relations {
            let x = *index.get(x.as_ref()).ok_or_else(|| Error::UnknownObject(x.as_ref().to_string()))?;
            let y = *index.get(y.as_ref()).ok_or_else(|| Error::UnknownObject(y.as_ref().to_string()))?;
            leq[x][y] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if leq[i][k] && leq[k][j] {
                        leq[i][j] = true;
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(Error::Mismatch(format!(
                        "`{}` and `{}` are related both ways; not a poset",
                        elements[i], elements[j]
                    )));
                }
            }
        }
        let mut raw = RawCat { objects: elements.clone(), ..Default::default() };
        let mut arrow_of = vec![vec![usize::MAX; n]; n];
        for i in 0..n {
            for j in 0..n {
                if leq[i][j] {
                    let name =
                        if i == j { format!("id_{}", elements[i]) } else { format!("{}<{}", elements[i], elements[j]) };
                    arrow_of[i][j] = raw.arrows.len();
                    raw.arrows.push((name, i, j));
                }
            }
        }
        for i in 0..n {
            raw.identities.push(arrow_of[i][i]);
        }
        for i in 0..n {
            for j in 0..n {
                if !leq[i][j] {
                    continue;
                }
                for k in 0..n {
                    if leq[j][k] {
                        raw.compose.push(((arrow_of[j][k], arrow_of[i][j]), arrow_of[i][k]));
                    }
                }
            }
        }
        Ok(raw.into_cat())
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn objects(&self) -> impl ExactSizeIterator<Item = Obj> + '_ {
        (0..self.objects.len()).map(Obj)
    }

    pub fn arrows(&self) -> impl ExactSizeIterator<Item = Arr> + '_ {
        (0..self.arrows.len()).map(Arr)
    }

    pub fn object_name(&self, o: Obj) -> &str {
        &self.objects[o.0]
    }

    pub fn arrow_name(&self, a: Arr) -> &str {
        &self.arrows[a.0].name
    }

    pub fn object(&self, name: &str) -> Result<Obj> {
        self.object_index.get(name).copied().ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn arrow(&self, name: &str) -> Result<Arr> {
        self.arrow_index.get(name).copied().ok_or_else(|| Error::UnknownArrow(name.to_string()))
    }

    pub fn dom(&self, a: Arr) -> Obj {
        self.arrows[a.0].dom
    }

    pub fn cod(&self, a: Arr) -> Obj {
        self.arrows[a.0].cod
    }

    pub fn identity(&self, o: Obj) -> Arr {
        self.identities[o.0]
    }

    pub fn is_identity(&self, a: Arr) -> bool {
        self.identities[self.dom(a).0] == a
    }

    /// `g ∘ f`, defined exactly when `cod(f) = dom(g)`.
    pub fn compose(&self, g: Arr, f: Arr) -> Option<Arr> {
        self.compose.get(&(g, f)).copied()
    }

    /// `g ∘ f` for a pair known to be composable.
    pub fn comp(&self, g: Arr, f: Arr) -> Arr {
        match self.compose.get(&(g, f)) {
            Some(a) => *a,
            None => panic!("arrows `{}` and `{}` are not composable", self.arrow_name(g), self.arrow_name(f)),
        }
    }

    pub fn out_arrows(&self, o: Obj) -> &[Arr] {
        &self.out_arrows[o.0]
    }

    pub fn in_arrows(&self, o: Obj) -> &[Arr] {
        &self.in_arrows[o.0]
    }

    pub fn hom(&self, x: Obj, y: Obj) -> Vec<Arr> {
        self.out_arrows[x.0].iter().copied().filter(|a| self.cod(*a) == y).collect()
    }

    /// Pairs `(g, f)` with `cod(f) = dom(g)`, in index order.
    pub fn composable_pairs(&self) -> Vec<(Arr, Arr)> {
        let mut out = Vec::new();
        for f in self.arrows() {
            for &g in self.out_arrows(self.cod(f)) {
                out.push((g, f));
            }
        }
        out
    }

    pub fn is_discrete(&self) -> bool {
        self.arrows().all(|a| self.is_identity(a))
    }

    /// The inverse of `a`, if it is an isomorphism.
    pub fn inverse(&self, a: Arr) -> Option<Arr> {
        let (d, c) = (self.dom(a), self.cod(a));
        self.hom(c, d).into_iter().find(|&b| self.comp(b, a) == self.identity(d) && self.comp(a, b) == self.identity(c))
    }

    pub fn is_iso(&self, a: Arr) -> bool {
        self.inverse(a).is_some()
    }

    /// The opposite category: same identifiers, dom/cod swapped and
    /// composition reversed. `opposite` is an involution on the nose.
    pub fn opposite(&self) -> FinCat {
        let arrows = self.arrows.iter().map(|a| ArrowEntry { name: a.name.clone(), dom: a.cod, cod: a.dom }).collect();
        let compose = self.compose.iter().map(|(&(g, f), &gf)| ((f, g), gf)).collect();
        FinCat::assemble(self.objects.clone(), arrows, self.identities.clone(), compose)
    }

    /// Exhaustive check of the category axioms.
    pub fn validate(&self) -> Result<()> {
        for o in self.objects() {
            let id = self.identity(o);
            if self.dom(id) != o || self.cod(id) != o {
                return Err(Error::MissingIdentity { object: self.object_name(o).to_string() });
            }
        }
        for (&(g, f), &gf) in &self.compose {
            if self.cod(f) != self.dom(g) || self.dom(gf) != self.dom(f) || self.cod(gf) != self.cod(g) {
                return Err(Error::IllTypedComposite {
                    g: self.arrow_name(g).into(),
                    f: self.arrow_name(f).into(),
                    reason: format!("result `{}` has the wrong type", self.arrow_name(gf)),
                });
            }
        }
        for (g, f) in self.composable_pairs() {
            if self.compose(g, f).is_none() {
                return Err(Error::MissingComposite { g: self.arrow_name(g).into(), f: self.arrow_name(f).into() });
            }
        }
        for f in self.arrows() {
            if self.comp(self.identity(self.cod(f)), f) != f || self.comp(f, self.identity(self.dom(f))) != f {
                return Err(Error::IdentityLaw { arrow: self.arrow_name(f).into() });
            }
        }
        for f in self.arrows() {
            for &g in self.out_arrows(self.cod(f)) {
                let gf = self.comp(g, f);
                for &h in self.out_arrows(self.cod(g)) {
                    if self.comp(h, gf) != self.comp(self.comp(h, g), f) {
                        return Err(Error::NonAssociative {
                            h: self.arrow_name(h).into(),
                            g: self.arrow_name(g).into(),
                            f: self.arrow_name(f).into(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Name-based tables, listing every composite not forced by an identity.
    pub fn tables(&self) -> CategoryTables {
        let mut t = CategoryTables::new();
        t.objects = self.objects.clone();
        t.arrows = self
            .arrows
            .iter()
            .map(|a| (a.name.clone(), self.objects[a.dom.0].clone(), self.objects[a.cod.0].clone()))
            .collect();
        t.identities = self
            .objects()
            .map(|o| (self.object_name(o).to_string(), self.arrow_name(self.identity(o)).to_string()))
            .collect();
        let mut comps: Vec<(Arr, Arr)> = self
            .composable_pairs()
            .into_iter()
            .filter(|(g, f)| !self.is_identity(*g) && !self.is_identity(*f))
            .collect();
        comps.sort();
        t.composites = comps
            .into_iter()
            .map(|(g, f)| {
                (
                    self.arrow_name(g).to_string(),
                    self.arrow_name(f).to_string(),
                    self.arrow_name(self.comp(g, f)).to_string(),
                )
            })
            .collect();
        t
    }
}

/// Validates raw tables, reporting the first offending arrows.
pub fn build_category(t: &CategoryTables) -> Result<FinCat> {
    let mut objects: Vec<String> = t.objects.clone();
    objects.sort();
    for w in objects.windows(2) {
        if w[0] == w[1] {
            return Err(Error::DuplicateName { kind: "object", name: w[0].clone() });
        }
    }
    let obj_index: BTreeMap<&str, usize> = objects.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let mut arrows = t.arrows.clone();
    arrows.sort();
    for w in arrows.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(Error::DuplicateName { kind: "arrow", name: w[0].0.clone() });
        }
    }
    let mut entries = Vec::new();
    for (name, d, c) in &arrows {
        let dom = *obj_index.get(d.as_str()).ok_or_else(|| Error::UnknownObject(d.clone()))?;
        let cod = *obj_index.get(c.as_str()).ok_or_else(|| Error::UnknownObject(c.clone()))?;
        entries.push(ArrowEntry { name: name.clone(), dom: Obj(dom), cod: Obj(cod) });
    }
    let arr_index: BTreeMap<&str, usize> = entries.iter().enumerate().map(|(i, a)| (a.name.as_str(), i)).collect();
    let lookup_arr = |n: &str| -> Result<Arr> {
        arr_index.get(n).map(|&i| Arr(i)).ok_or_else(|| Error::UnknownArrow(n.to_string()))
    };
    let mut identities: Vec<Option<Arr>> = vec![None; objects.len()];
    for (o, a) in &t.identities {
        let oi = *obj_index.get(o.as_str()).ok_or_else(|| Error::UnknownObject(o.clone()))?;
        let ai = lookup_arr(a)?;
        if entries[ai.0].dom.0 != oi || entries[ai.0].cod.0 != oi {
            return Err(Error::IllTypedComposite {
                g: a.clone(),
                f: a.clone(),
                reason: format!("declared identity of `{o}` is not an endomorphism of `{o}`"),
            });
        }
        if identities[oi].is_some_and(|prev| prev != ai) {
            return Err(Error::DuplicateName { kind: "identity", name: o.clone() });
        }
        identities[oi] = Some(ai);
    }
    let mut ids = Vec::with_capacity(objects.len());
    for (i, id) in identities.iter().enumerate() {
        match id {
            Some(a) => ids.push(*a),
            None => return Err(Error::MissingIdentity { object: objects[i].clone() }),
        }
    }
    let mut compose: HashMap<(Arr, Arr), Arr> = HashMap::new();
    let insert = |g: Arr, f: Arr, gf: Arr, compose: &mut HashMap<(Arr, Arr), Arr>| -> Result<()> {
        match compose.insert((g, f), gf) {
            Some(prev) if prev != gf => {
                Err(Error::ConflictingComposite { g: entries[g.0].name.clone(), f: entries[f.0].name.clone() })
            }
            _ => Ok(()),
        }
    };
    for (g, f, gf) in &t.composites {
        let (gi, fi, gfi) = (lookup_arr(g)?, lookup_arr(f)?, lookup_arr(gf)?);
        let (ge, fe, gfe) = (&entries[gi.0], &entries[fi.0], &entries[gfi.0]);
        if fe.cod != ge.dom {
            return Err(Error::IllTypedComposite {
                g: g.clone(),
                f: f.clone(),
                reason: format!("cod({f}) = {} but dom({g}) = {}", objects[fe.cod.0], objects[ge.dom.0]),
            });
        }
        if gfe.dom != fe.dom || gfe.cod != ge.cod {
            return Err(Error::IllTypedComposite {
                g: g.clone(),
                f: f.clone(),
                reason: format!("result `{gf}` is not an arrow {} -> {}", objects[fe.dom.0], objects[ge.cod.0]),
            });
        }
        insert(gi, fi, gfi, &mut compose)?;
    }
    for (i, e) in entries.iter().enumerate() {
        let a = Arr(i);
        insert(ids[e.cod.0], a, a, &mut compose)?;
        insert(a, ids[e.dom.0], a, &mut compose)?;
    }
    let cat = FinCat::assemble(objects, entries, ids, compose);
    cat.validate()?;
    Ok(cat)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn walking_arrow() -> FinCat {
        CategoryTables::new()
            .object("a")
            .object("b")
            .arrow("id_a", "a", "a")
            .arrow("id_b", "b", "b")
            .arrow("u", "a", "b")
            .identity("a", "id_a")
            .identity("b", "id_b")
            .build()
            .unwrap()
    }

    #[test]
    fn point_and_walking_arrow_build() {
        let pt = FinCat::point();
        pt.validate().unwrap();
        assert_eq!(pt.object_count(), 1);
        assert_eq!(pt.arrow_count(), 1);
        let w = walking_arrow();
        assert_eq!(w.object_count(), 2);
        assert_eq!(w.arrow_count(), 3);
        let u = w.arrow("u").unwrap();
        assert_eq!(w.object_name(w.dom(u)), "a");
    }

    #[test]
    fn ill_typed_composite_is_rejected() {
        let err = CategoryTables::new()
            .object("a")
            .object("b")
            .arrow("id_a", "a", "a")
            .arrow("id_b", "b", "b")
            .arrow("u", "a", "b")
            .identity("a", "id_a")
            .identity("b", "id_b")
            .composite("u", "u", "u")
            .build()
            .unwrap_err();
        assert!(matches!(err, Error::IllTypedComposite { ref g, ref f, .. } if g == "u" && f == "u"));
    }

    #[test]
    fn missing_identity_is_rejected() {
        let err = CategoryTables::new().object("a").arrow("e", "a", "a").composite("e", "e", "e").build().unwrap_err();
        assert_eq!(err, Error::MissingIdentity { object: "a".into() });
    }

    #[test]
    fn missing_composite_is_rejected() {
        let err = CategoryTables::new()
            .object("a")
            .arrow("id", "a", "a")
            .arrow("e", "a", "a")
            .identity("a", "id")
            .build()
            .unwrap_err();
        assert!(matches!(err, Error::MissingComposite { .. }));
    }

    #[test]
    fn non_associative_table_is_rejected() {
        // e.e = f, f.e = e, e.f = f, f.f = f: (e.e).e = f.e = e but e.(e.e) = e.f = f
        let err = CategoryTables::new()
            .object("a")
            .arrow("id", "a", "a")
            .arrow("e", "a", "a")
            .arrow("f", "a", "a")
            .identity("a", "id")
            .composite("e", "e", "f")
            .composite("f", "e", "e")
            .composite("e", "f", "f")
            .composite("f", "f", "f")
            .build()
            .unwrap_err();
        assert!(matches!(err, Error::NonAssociative { .. }), "{err:?}");
    }

    #[test]
    fn opposite_is_an_involution() {
        let w = walking_arrow();
        let op = w.opposite();
        let u = op.arrow("u").unwrap();
        assert_eq!(op.object_name(op.dom(u)), "b");
        assert_eq!(op.opposite(), w);
        assert_eq!(FinCat::point().opposite(), FinCat::point());
        op.validate().unwrap();
    }

    #[test]
    fn free_and_poset_builders() {
        let chain = FinCat::free(&["a", "b", "c"], &[("f", "a", "b"), ("g", "b", "c")]).unwrap();
        chain.validate().unwrap();
        assert_eq!(chain.arrow_count(), 6);
        let gf = chain.comp(chain.arrow("g").unwrap(), chain.arrow("f").unwrap());
        assert_eq!(chain.arrow_name(gf), "g.f");

        let sq = FinCat::poset(&["0", "1", "2", "3"], &[("0", "1"), ("0", "2"), ("1", "3"), ("2", "3")]).unwrap();
        sq.validate().unwrap();
        assert_eq!(sq.arrow_count(), 9);
    }

    #[test]
    fn tables_round_trip() {
        let sq = FinCat::poset(&["x", "y", "z"], &[("x", "y"), ("y", "z")]).unwrap();
        assert_eq!(sq.tables().build().unwrap(), sq);
    }
}
