//! Sieves, Grothendieck topologies and sheaves of finite sets.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fincat::{Arr, FinCat, Obj, SetDiagram, SetNat, SetPresheaf, SliceFamily};
use crate::search::{solve, Budget};

/// A set of arrows into `at`, closed under precomposition. Arrows are kept
/// sorted by index.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sieve {
    at: Obj,
    arrows: Vec<Arr>,
}

impl Sieve {
    /// Checks closure under precomposition.
    pub fn new(cat: &FinCat, at: Obj, arrows: impl IntoIterator<Item = Arr>) -> Result<Sieve> {
        let mut arrows: Vec<Arr> = arrows.into_iter().collect();
        arrows.sort();
        arrows.dedup();
        for &f in &arrows {
            if cat.cod(f) != at {
                return Err(Error::MixedCodomain(cat.arrow_name(f).into(), cat.object_name(at).into()));
            }
            for &g in cat.in_arrows(cat.dom(f)) {
                let fg = cat.comp(f, g);
                if arrows.binary_search(&fg).is_err() {
                    return Err(Error::NotASieve(format!(
                        "contains `{}` but not `{}`",
                        cat.arrow_name(f),
                        cat.arrow_name(fg)
                    )));
                }
            }
        }
        Ok(Sieve { at, arrows })
    }

    pub fn maximal(cat: &FinCat, at: Obj) -> Sieve {
        let mut arrows = cat.in_arrows(at).to_vec();
        arrows.sort();
        Sieve { at, arrows }
    }

    pub fn empty(at: Obj) -> Sieve {
        Sieve { at, arrows: Vec::new() }
    }

    pub fn at(&self) -> Obj {
        self.at
    }

    pub fn arrows(&self) -> &[Arr] {
        &self.arrows
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn contains(&self, f: Arr) -> bool {
        self.arrows.binary_search(&f).is_ok()
    }

    pub fn is_maximal(&self, cat: &FinCat) -> bool {
        self.contains(cat.identity(self.at))
    }

    pub fn intersect(&self, other: &Sieve) -> Sieve {
        let arrows = self.arrows.iter().copied().filter(|&f| other.contains(f)).collect();
        Sieve { at: self.at, arrows }
    }

    pub fn is_subset(&self, other: &Sieve) -> bool {
        self.arrows.iter().all(|&f| other.contains(f))
    }

    /// `{f, g, ...}` with arrow names in sieve order.
    pub fn display<'a>(&'a self, cat: &'a FinCat) -> impl fmt::Display + 'a {
        DisplaySieve(self, cat)
    }
}

struct DisplaySieve<'a>(&'a Sieve, &'a FinCat);

impl fmt::Display for DisplaySieve<'_> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.0.arrows.iter().map(|&f| self.1.arrow_name(f)).collect();
        write!(out, "{{{}}} on `{}`", names.join(", "), self.1.object_name(self.0.at))
    }
}

/// The closure of `arrows` under precomposition.
pub fn sieve_generate(cat: &FinCat, at: Obj, arrows: &[Arr]) -> Result<Sieve> {
    let mut out = Vec::new();
    for &f in arrows {
        if cat.cod(f) != at {
            return Err(Error::MixedCodomain(cat.arrow_name(f).into(), cat.object_name(at).into()));
        }
        out.extend(cat.in_arrows(cat.dom(f)).iter().map(|&g| cat.comp(f, g)));
    }
    out.sort();
    out.dedup();
    Ok(Sieve { at, arrows: out })
}

/// `g*S = {h | g∘h ∈ S}`.
pub fn pullback_sieve(cat: &FinCat, g: Arr, s: &Sieve) -> Sieve {
    let d = cat.dom(g);
    let mut arrows: Vec<Arr> = cat.in_arrows(d).iter().copied().filter(|&h| s.contains(cat.comp(g, h))).collect();
    arrows.sort();
    Sieve { at: d, arrows }
}

/// Every sieve on `c`, in lexicographic order of membership vectors.
pub fn all_sieves(cat: &FinCat, c: Obj, budget: &mut Budget) -> Result<Vec<Sieve>> {
    let mut into = cat.in_arrows(c).to_vec();
    into.sort();
    let pos: BTreeMap<Arr, usize> = into.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    // pairs (f, f∘g), checked once both are decided
    let mut checks: Vec<Vec<(usize, usize)>> = vec![Vec::new(); into.len()];
    for (i, &f) in into.iter().enumerate() {
        for &g in cat.in_arrows(cat.dom(f)) {
            let j = pos[&cat.comp(f, g)];
            checks[i.max(j)].push((i, j));
        }
    }
    let mut out = Vec::new();
    solve(
        into.len(),
        budget,
        |_, _| vec![0, 1],
        |i, asg| checks[i].iter().all(|&(f, fg)| asg[f] == 0 || asg[fg] == 1),
        |asg| {
            let arrows = into.iter().zip(asg).filter(|(_, &b)| b == 1).map(|(&f, _)| f).collect();
            out.push(Sieve { at: c, arrows });
            true
        },
    )?;
    Ok(out)
}

/// Covering sieves per object. Nothing is assumed about the families until
/// [`validate_topology`] is run; [`GrothTopology::close`] saturates them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrothTopology {
    cat: Arc<FinCat>,
    covers: Vec<Vec<Sieve>>,
}

impl GrothTopology {
    pub fn new(cat: Arc<FinCat>, covers: Vec<Vec<Sieve>>) -> Result<Self> {
        if covers.len() != cat.object_count() {
            return Err(Error::Mismatch("one list of covering sieves per object is required".into()));
        }
        let mut covers = covers;
        for (c, list) in covers.iter_mut().enumerate() {
            if list.iter().any(|s| s.at != Obj(c)) {
                return Err(Error::Mismatch(format!(
                    "a sieve listed at `{}` lives elsewhere",
                    cat.object_name(Obj(c))
                )));
            }
            list.sort();
            list.dedup();
        }
        Ok(GrothTopology { cat, covers })
    }

    /// Covers generated by arrow families, one list of families per object.
    pub fn from_families(cat: Arc<FinCat>, families: &[(Obj, Vec<Arr>)]) -> Result<Self> {
        let mut covers = vec![Vec::new(); cat.object_count()];
        for (c, fam) in families {
            covers[c.0].push(sieve_generate(&cat, *c, fam)?);
        }
        GrothTopology::new(cat, covers)
    }

    /// Only maximal sieves cover.
    pub fn trivial(cat: Arc<FinCat>) -> Self {
        let covers = cat.objects().map(|c| vec![Sieve::maximal(&cat, c)]).collect();
        GrothTopology { cat, covers }
    }

    /// Every sieve covers.
    pub fn discrete(cat: Arc<FinCat>, budget: &mut Budget) -> Result<Self> {
        let covers = cat.objects().map(|c| all_sieves(&cat, c, budget)).collect::<Result<_>>()?;
        Ok(GrothTopology { cat, covers })
    }

    pub fn cat(&self) -> &Arc<FinCat> {
        &self.cat
    }

    pub fn covers(&self, c: Obj) -> &[Sieve] {
        &self.covers[c.0]
    }

    pub fn is_covering(&self, s: &Sieve) -> bool {
        self.covers[s.at.0].binary_search(s).is_ok()
    }

    /// The smallest topology containing the listed sieves.
    pub fn close(&self, budget: &mut Budget) -> Result<GrothTopology> {
        let cat = &self.cat;
        let sieves: Vec<Vec<Sieve>> = cat.objects().map(|c| all_sieves(cat, c, budget)).collect::<Result<_>>()?;
        let mut covers = self.covers.clone();
        for c in cat.objects() {
            covers[c.0].push(Sieve::maximal(cat, c));
        }
        loop {
            let mut next = covers.clone();
            for list in &covers {
                for s in list {
                    for &g in cat.in_arrows(s.at) {
                        next[cat.dom(g).0].push(pullback_sieve(cat, g, s));
                    }
                }
            }
            for l in next.iter_mut() {
                l.sort();
                l.dedup();
            }
            for c in cat.objects() {
                for r in &sieves[c.0] {
                    budget.tick()?;
                    let local = |s: &Sieve| {
                        s.arrows.iter().all(|&f| next[cat.dom(f).0].binary_search(&pullback_sieve(cat, f, r)).is_ok())
                    };
                    if next[c.0].binary_search(r).is_err() && next[c.0].iter().any(local) {
                        let at = next[c.0].partition_point(|s| s < r);
                        next[c.0].insert(at, r.clone());
                    }
                }
            }
            if next == covers {
                return Ok(GrothTopology { cat: cat.clone(), covers });
            }
            covers = next;
        }
    }
}

/// Checks maximality, stability and transitivity exhaustively.
pub fn validate_topology(j: &GrothTopology, budget: &mut Budget) -> Result<()> {
    let cat = &j.cat;
    for c in cat.objects() {
        for s in j.covers(c) {
            Sieve::new(cat, c, s.arrows.iter().copied())?;
        }
    }
    for c in cat.objects() {
        if !j.is_covering(&Sieve::maximal(cat, c)) {
            return Err(Error::AxiomViolation {
                kind: "maximality".into(),
                witness: format!("the maximal sieve on `{}` does not cover", cat.object_name(c)),
            });
        }
    }
    for c in cat.objects() {
        for s in j.covers(c) {
            for &g in cat.in_arrows(c) {
                budget.tick()?;
                let p = pullback_sieve(cat, g, s);
                if !j.is_covering(&p) {
                    return Err(Error::AxiomViolation {
                        kind: "stability".into(),
                        witness: format!(
                            "pulling back {} along `{}` gives {}, which does not cover",
                            s.display(cat),
                            cat.arrow_name(g),
                            p.display(cat)
                        ),
                    });
                }
            }
        }
    }
    for c in cat.objects() {
        for r in all_sieves(cat, c, budget)? {
            if j.is_covering(&r) {
                continue;
            }
            for s in j.covers(c) {
                budget.tick()?;
                if s.arrows.iter().all(|&f| j.is_covering(&pullback_sieve(cat, f, &r))) {
                    return Err(Error::AxiomViolation {
                        kind: "transitivity".into(),
                        witness: format!(
                            "{} is locally covering over {} but does not cover",
                            r.display(cat),
                            s.display(cat)
                        ),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Runs the sheaf condition on every representable.
pub fn subcanonical_check(j: &GrothTopology, budget: &mut Budget) -> Result<()> {
    let cat = &j.cat;
    for c in cat.objects() {
        let y = SetPresheaf::representable(cat.clone(), c);
        if let Some(w) = sheaf_failure(&y, j, budget)? {
            return Err(Error::NotSubcanonical { object: cat.object_name(c).into(), witness: w.describe(&y) });
        }
    }
    Ok(())
}

/// The topology on `C/c` whose covering sieves on `f: d → c` are those whose
/// image in `C` covers `d`.
pub fn slice_topology(j: &GrothTopology, slices: &SliceFamily, c: Obj) -> GrothTopology {
    let cat = &j.cat;
    let sl = slices.slice(c);
    let covers = sl
        .cat()
        .objects()
        .map(|o| {
            let f = sl.base_arrow(o);
            let mut list: Vec<Sieve> = j
                .covers(cat.dom(f))
                .iter()
                .map(|s| {
                    let mut arrows: Vec<Arr> = s.arrows.iter().map(|&g| sl.arrow_of(g, f)).collect();
                    arrows.sort();
                    Sieve { at: o, arrows }
                })
                .collect();
            list.sort();
            list
        })
        .collect();
    GrothTopology { cat: sl.cat().clone(), covers }
}

/// A compatible choice of elements over a sieve.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MatchingFamily {
    sieve: Sieve,
    values: Vec<usize>,
}

impl MatchingFamily {
    pub(crate) fn from_parts(sieve: Sieve, values: Vec<usize>) -> Self {
        MatchingFamily { sieve, values }
    }

    pub fn sieve(&self) -> &Sieve {
        &self.sieve
    }

    /// The element chosen at `f`, indexed in `Z(dom f)`.
    pub fn value(&self, f: Arr) -> Option<usize> {
        self.sieve.arrows.binary_search(&f).ok().map(|i| self.values[i])
    }

    pub fn values(&self) -> impl Iterator<Item = (Arr, usize)> + '_ {
        self.sieve.arrows.iter().copied().zip(self.values.iter().copied())
    }

    /// The family restricted along `h`, on `h*S`.
    pub fn pullback(&self, cat: &FinCat, h: Arr) -> MatchingFamily {
        let sieve = pullback_sieve(cat, h, &self.sieve);
        let values = sieve.arrows.iter().map(|&k| self.value(cat.comp(h, k)).expect("in sieve")).collect();
        MatchingFamily { sieve, values }
    }

    /// The family restricted to a smaller sieve.
    pub fn restrict(&self, t: &Sieve) -> MatchingFamily {
        let values = t.arrows.iter().map(|&f| self.value(f).expect("subsieve")).collect();
        MatchingFamily { sieve: t.clone(), values }
    }

    /// `{f:x, ...}` with arrow names sorted.
    pub fn label(&self, z: &SetPresheaf) -> String {
        let cat = z.base();
        let mut parts: Vec<String> =
            self.values().map(|(f, x)| format!("{}:{}", cat.arrow_name(f), z.set(cat.dom(f))[x])).collect();
        parts.sort();
        format!("{{{}}}", parts.join(","))
    }
}

/// The family `f ↦ Z(f)(x)` on `S`.
pub fn restrict_element(z: &SetPresheaf, s: &Sieve, x: usize) -> MatchingFamily {
    let cat = z.base();
    let top = cat.identity(s.at);
    // Z(f)(x) is the action of f on x ∈ Z(c)
    let values = s.arrows.iter().map(|&f| if f == top { x } else { z.act(f, x) }).collect();
    MatchingFamily { sieve: s.clone(), values }
}

/// Every matching family for `Z` on `S`.
pub fn matching_families(z: &SetPresheaf, s: &Sieve, budget: &mut Budget) -> Result<Vec<MatchingFamily>> {
    let cat = z.base();
    let arrows = &s.arrows;
    let pos: BTreeMap<Arr, usize> = arrows.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let mut checks: Vec<Vec<(usize, Arr, usize)>> = vec![Vec::new(); arrows.len()];
    for (i, &f) in arrows.iter().enumerate() {
        for &g in cat.in_arrows(cat.dom(f)) {
            let j = pos[&cat.comp(f, g)];
            checks[i.max(j)].push((i, g, j));
        }
    }
    let mut out = Vec::new();
    solve(
        arrows.len(),
        budget,
        |i, _| (0..z.card(cat.dom(arrows[i]))).collect(),
        |i, asg| checks[i].iter().all(|&(f, g, fg)| z.act(g, asg[f]) == asg[fg]),
        |asg| {
            out.push(MatchingFamily { sieve: s.clone(), values: asg.to_vec() });
            true
        },
    )?;
    Ok(out)
}

/// Every `x ∈ Z(c)` restricting to `m`.
pub fn amalgamations(z: &SetPresheaf, m: &MatchingFamily) -> Vec<usize> {
    (0..z.card(m.sieve.at)).filter(|&x| restrict_element(z, &m.sieve, x) == *m).collect()
}

/// Why a presheaf is not a sheaf.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SheafFailure {
    /// A matching family with no amalgamation.
    Unglued { family: MatchingFamily },
    /// A matching family with several amalgamations.
    Ambiguous { family: MatchingFamily, amalgamations: Vec<usize> },
}

impl SheafFailure {
    pub fn family(&self) -> &MatchingFamily {
        match self {
            SheafFailure::Unglued { family } | SheafFailure::Ambiguous { family, .. } => family,
        }
    }

    pub fn describe(&self, z: &SetPresheaf) -> String {
        let cat = z.base();
        match self {
            SheafFailure::Unglued { family } => {
                format!("family {} on {} has no amalgamation", family.label(z), family.sieve.display(cat))
            }
            SheafFailure::Ambiguous { family, amalgamations } => {
                let c = family.sieve.at;
                let xs: Vec<&str> = amalgamations.iter().map(|&x| z.set(c)[x].as_str()).collect();
                format!(
                    "family {} on {} has amalgamations {}",
                    family.label(z),
                    family.sieve.display(cat),
                    xs.join(", ")
                )
            }
        }
    }
}

fn first_failure(
    z: &SetPresheaf,
    j: &GrothTopology,
    separated_only: bool,
    budget: &mut Budget,
) -> Result<Option<SheafFailure>> {
    if z.base() != j.cat() {
        return Err(Error::Mismatch("presheaf and topology live on different categories".into()));
    }
    for c in j.cat.objects() {
        for s in j.covers(c) {
            for m in matching_families(z, s, budget)? {
                let xs = amalgamations(z, &m);
                if xs.len() > 1 {
                    return Ok(Some(SheafFailure::Ambiguous { family: m, amalgamations: xs }));
                }
                if xs.is_empty() && !separated_only {
                    return Ok(Some(SheafFailure::Unglued { family: m }));
                }
            }
        }
    }
    Ok(None)
}

/// The first matching family on a covering sieve without exactly one
/// amalgamation.
pub fn sheaf_failure(z: &SetPresheaf, j: &GrothTopology, budget: &mut Budget) -> Result<Option<SheafFailure>> {
    first_failure(z, j, false, budget)
}

/// The first matching family on a covering sieve with two amalgamations.
pub fn separation_failure(z: &SetPresheaf, j: &GrothTopology, budget: &mut Budget) -> Result<Option<SheafFailure>> {
    first_failure(z, j, true, budget)
}

pub fn is_sheaf(z: &SetPresheaf, j: &GrothTopology, budget: &mut Budget) -> Result<bool> {
    Ok(sheaf_failure(z, j, budget)?.is_none())
}

pub fn is_separated(z: &SetPresheaf, j: &GrothTopology, budget: &mut Budget) -> Result<bool> {
    Ok(separation_failure(z, j, budget)?.is_none())
}

/// `Z⁺` with its unit `Z → Z⁺`.
///
/// `Z⁺(c)` is the set of pairs `(R, m)` with `R` covering and `m` matching on
/// `R`, where `(R, m) ~ (R', m')` when `m` and `m'` agree on some covering
/// sieve inside `R ∩ R'`. Since the arrows of `R ∩ R'` on which they agree
/// form a sieve, that sieve itself is tested. Each class is labelled by the
/// shortest, then lexicographically least, label among its members.
pub fn plus_with_unit(
    z: &SetPresheaf,
    j: &GrothTopology,
    budget: &mut Budget,
) -> Result<(SetPresheaf, SetNat<SetPresheaf>)> {
    let cat = j.cat.clone();
    if z.base() != &cat {
        return Err(Error::Mismatch("presheaf and topology live on different categories".into()));
    }
    // per object: members, class of each member, class labels
    let mut members: Vec<Vec<MatchingFamily>> = Vec::new();
    let mut class_of: Vec<BTreeMap<MatchingFamily, usize>> = Vec::new();
    let mut labels: Vec<Vec<String>> = Vec::new();
    for c in cat.objects() {
        let mut ms = Vec::new();
        for s in j.covers(c) {
            ms.extend(matching_families(z, s, budget)?);
        }
        let mut rep: Vec<usize> = (0..ms.len()).collect();
        for a in 0..ms.len() {
            for b in 0..a {
                budget.tick()?;
                if rep[b] == b && same_germ(&cat, j, &ms[a], &ms[b]) {
                    rep[a] = b;
                    break;
                }
            }
        }
        let mut best: BTreeMap<usize, String> = BTreeMap::new();
        for (a, m) in ms.iter().enumerate() {
            let l = m.label(z);
            let e = best.entry(rep[a]).or_insert_with(|| l.clone());
            if (l.len(), &l) < (e.len(), &*e) {
                *e = l;
            }
        }
        let mut sorted: Vec<(String, usize)> = best.iter().map(|(&r, l)| (l.clone(), r)).collect();
        sorted.sort();
        let index_of_rep: BTreeMap<usize, usize> = sorted.iter().enumerate().map(|(i, &(_, r))| (r, i)).collect();
        class_of.push(ms.iter().enumerate().map(|(a, m)| (m.clone(), index_of_rep[&rep[a]])).collect());
        labels.push(sorted.into_iter().map(|(l, _)| l).collect());
        members.push(ms);
    }
    let maps = cat
        .arrows()
        .map(|h| {
            let c = cat.cod(h);
            let mut table = vec![usize::MAX; labels[c.0].len()];
            for m in &members[c.0] {
                let k = class_of[c.0][m];
                if table[k] == usize::MAX {
                    table[k] = class_of[cat.dom(h).0][&m.pullback(&cat, h)];
                }
            }
            table
        })
        .collect();
    let plus = SetPresheaf::new(cat.clone(), labels, maps)?;
    let unit = cat
        .objects()
        .map(|c| {
            let max = Sieve::maximal(&cat, c);
            (0..z.card(c)).map(|x| class_of[c.0][&restrict_element(z, &max, x)]).collect()
        })
        .collect();
    let unit = SetNat::new(z.clone(), plus.clone(), unit)?;
    Ok((plus, unit))
}

fn same_germ(cat: &FinCat, j: &GrothTopology, m: &MatchingFamily, n: &MatchingFamily) -> bool {
    let agree: Vec<Arr> =
        m.sieve.arrows.iter().copied().filter(|&f| n.value(f).is_some_and(|y| m.value(f) == Some(y))).collect();
    let s = Sieve { at: m.sieve.at, arrows: agree };
    debug_assert!(Sieve::new(cat, s.at, s.arrows.iter().copied()).is_ok());
    j.is_covering(&s)
}

pub fn plus(z: &SetPresheaf, j: &GrothTopology, budget: &mut Budget) -> Result<SetPresheaf> {
    Ok(plus_with_unit(z, j, budget)?.0)
}

/// `Z⁺⁺` with the composite unit `Z → Z⁺ → Z⁺⁺`.
pub fn sheafify_with_unit(
    z: &SetPresheaf,
    j: &GrothTopology,
    budget: &mut Budget,
) -> Result<(SetPresheaf, SetNat<SetPresheaf>)> {
    let (p, u) = plus_with_unit(z, j, budget)?;
    let (pp, u2) = plus_with_unit(&p, j, budget)?;
    Ok((pp, u2.after(&u)?))
}

pub fn sheafify(z: &SetPresheaf, j: &GrothTopology, budget: &mut Budget) -> Result<SetPresheaf> {
    Ok(sheafify_with_unit(z, j, budget)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::DEFAULT_BOUND;

    fn budget() -> Budget {
        Budget::new(DEFAULT_BOUND)
    }

    /// Opens of the discrete space {1,2}.
    fn open_site() -> (Arc<FinCat>, GrothTopology) {
        let cat = Arc::new(
            FinCat::poset(&["0", "1", "2", "12"], &[("0", "1"), ("0", "2"), ("0", "12"), ("1", "12"), ("2", "12")])
                .unwrap(),
        );
        let o = |n: &str| cat.object(n).unwrap();
        let a = |n: &str| cat.arrow(n).unwrap();
        let j = GrothTopology::from_families(cat.clone(), &[(o("12"), vec![a("1<12"), a("2<12")]), (o("0"), vec![])])
            .unwrap()
            .close(&mut budget())
            .unwrap();
        (cat, j)
    }

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    fn non_separated(cat: &Arc<FinCat>) -> SetPresheaf {
        let star = |n: &str| (n.to_string(), s(&["*"]));
        let to_star = |a: &str| (a.to_string(), vec![("0".to_string(), "*".to_string()), ("1".into(), "*".into())]);
        SetPresheaf::from_names(
            cat.clone(),
            &[("12".into(), s(&["0", "1"])), star("1"), star("2"), star("0")],
            &[
                to_star("1<12"),
                to_star("2<12"),
                to_star("0<12"),
                ("0<1".into(), vec![("*".into(), "*".into())]),
                ("0<2".into(), vec![("*".into(), "*".into())]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn generated_sieve_contains_empty_open() {
        let (cat, _) = open_site();
        let g =
            sieve_generate(&cat, cat.object("12").unwrap(), &[cat.arrow("1<12").unwrap(), cat.arrow("2<12").unwrap()])
                .unwrap();
        assert!(g.contains(cat.arrow("0<12").unwrap()));
        assert_eq!(g.len(), 3);
        assert!(sieve_generate(&cat, cat.object("12").unwrap(), &[]).unwrap().is_empty());
        assert!(matches!(
            sieve_generate(&cat, cat.object("1").unwrap(), &[cat.arrow("2<12").unwrap()]),
            Err(Error::MixedCodomain(..))
        ));
    }

    #[test]
    fn pullback_of_joint_cover_is_maximal() {
        let (cat, _) = open_site();
        let s =
            sieve_generate(&cat, cat.object("12").unwrap(), &[cat.arrow("1<12").unwrap(), cat.arrow("2<12").unwrap()])
                .unwrap();
        let p = pullback_sieve(&cat, cat.arrow("1<12").unwrap(), &s);
        assert!(p.is_maximal(&cat));
        let id = cat.identity(cat.object("12").unwrap());
        assert_eq!(pullback_sieve(&cat, id, &s), s);
    }

    #[test]
    fn open_site_topology_is_valid_and_subcanonical() {
        let (cat, j) = open_site();
        validate_topology(&j, &mut budget()).unwrap();
        subcanonical_check(&j, &mut budget()).unwrap();
        let t = GrothTopology::trivial(cat.clone());
        validate_topology(&t, &mut budget()).unwrap();
        subcanonical_check(&t, &mut budget()).unwrap();
    }

    #[test]
    fn dropping_maximal_sieve_is_reported() {
        let (cat, j) = open_site();
        let mut covers = j.covers.clone();
        let one = cat.object("1").unwrap();
        covers[one.0].retain(|s| !s.is_maximal(&cat));
        let broken = GrothTopology::new(cat, covers).unwrap();
        match validate_topology(&broken, &mut budget()) {
            Err(Error::AxiomViolation { kind, .. }) => assert_eq!(kind, "maximality"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn two_valued_families_on_joint_cover() {
        let (cat, _) = open_site();
        let twelve = cat.object("12").unwrap();
        let cover = sieve_generate(&cat, twelve, &[cat.arrow("1<12").unwrap(), cat.arrow("2<12").unwrap()]).unwrap();
        let constant =
            SetPresheaf::new(cat.clone(), vec![s(&["0", "1"]); 4], cat.arrows().map(|_| vec![0, 1]).collect()).unwrap();
        // the common value at the empty open ties the two choices together
        assert_eq!(matching_families(&constant, &cover, &mut budget()).unwrap().len(), 2);
        // {0,1} on nonempty opens and a point at the empty one: independent choices
        let empty = cat.object("0").unwrap();
        let sets = cat.objects().map(|o| if o == empty { s(&["*"]) } else { s(&["0", "1"]) }).collect();
        let maps = cat.arrows().map(|a| if cat.dom(a) == empty { vec![0, 0] } else { vec![0, 1] }).collect::<Vec<_>>();
        let maps = cat.arrows().zip(maps).map(|(a, m)| if cat.cod(a) == empty { vec![0] } else { m }).collect();
        let locally = SetPresheaf::new(cat.clone(), sets, maps).unwrap();
        let ms = matching_families(&locally, &cover, &mut budget()).unwrap();
        assert_eq!(ms.len(), 4);
        let none = matching_families(&locally, &Sieve::empty(twelve), &mut budget()).unwrap();
        assert_eq!(none.len(), 1);
        assert_eq!(amalgamations(&locally, &none[0]).len(), 2);
    }

    #[test]
    fn non_separated_collapses() {
        let (cat, j) = open_site();
        let z = non_separated(&cat);
        assert!(!is_separated(&z, &j, &mut budget()).unwrap());
        let p = plus(&z, &j, &mut budget()).unwrap();
        assert_eq!(p.card(cat.object("12").unwrap()), 1);
        assert!(is_separated(&p, &j, &mut budget()).unwrap());
        let sh = sheafify(&z, &j, &mut budget()).unwrap();
        assert!(is_sheaf(&sh, &j, &mut budget()).unwrap());
    }

    #[test]
    fn sheaves_are_fixed() {
        let (cat, j) = open_site();
        for c in cat.objects() {
            let y = SetPresheaf::representable(cat.clone(), c);
            let (sh, unit) = sheafify_with_unit(&y, &j, &mut budget()).unwrap();
            assert!(unit.is_iso());
            assert!(is_sheaf(&sh, &j, &mut budget()).unwrap());
        }
    }

    #[test]
    fn closing_adds_intersections_and_stability() {
        let (cat, j) = open_site();
        let twelve = cat.object("12").unwrap();
        // maximal and the joint cover at {1,2}; only the maximal sieves elsewhere,
        // plus the empty sieve on the empty open
        assert_eq!(j.covers(twelve).len(), 2);
        assert_eq!(j.covers(cat.object("0").unwrap()).len(), 2);
        assert_eq!(j.close(&mut budget()).unwrap(), j);
    }

    #[test]
    fn slice_topology_recovers_joint_cover() {
        let (cat, j) = open_site();
        let slices = SliceFamily::new(cat.clone());
        let twelve = cat.object("12").unwrap();
        let t = slice_topology(&j, &slices, twelve);
        validate_topology(&t, &mut budget()).unwrap();
        let top = slices.slice(twelve).top(&cat);
        assert_eq!(t.covers(top).len(), 2);
    }
}
