//! Descent, stacks, and the stack classifier `Ω_J(c) = Sh_J(C/c)`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::classifier::{char, classify, MapToOmega};
use crate::error::{Error, Result};
use crate::fincat::{enumerate_set_nats, Arr, FinCat, Obj, SetDiagram, SetNat, SetPresheaf, Slice, SliceFamily};
use crate::prestack::{fib_iso, CatPresheaf, DiscOpfibPre};
use crate::search::{solve, Budget};
use crate::site::{
    amalgamations, pullback_sieve, sheaf_failure, sheafify_with_unit, slice_topology, GrothTopology, MatchingFamily,
    SheafFailure, Sieve,
};

fn isos(cat: &FinCat, x: Obj, y: Obj) -> Vec<Arr> {
    cat.hom(x, y).into_iter().filter(|&a| cat.is_iso(a)).collect()
}

/// Objects `M_f ∈ F(dom f)` for `f ∈ S` with isos `φ^{f,g}: g*M_f → M_{f∘g}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescentDatum {
    presheaf: CatPresheaf,
    sieve: Sieve,
    objects: Vec<Obj>,
    isos: BTreeMap<(Arr, Arr), Arr>,
}

impl DescentDatum {
    /// Checks types only; the cocycle condition is [`validate_descent`].
    pub fn new(
        presheaf: CatPresheaf,
        sieve: Sieve,
        objects: Vec<Obj>,
        isos: BTreeMap<(Arr, Arr), Arr>,
    ) -> Result<Self> {
        let b = presheaf.base().clone();
        let bad = |m: String| Error::InvalidDescent(m);
        if objects.len() != sieve.len() {
            return Err(bad("one object per arrow of the sieve is required".into()));
        }
        let d = DescentDatum { presheaf, sieve, objects, isos };
        for (i, &f) in d.sieve.arrows().iter().enumerate() {
            if d.objects[i].0 >= d.presheaf.at(b.dom(f)).object_count() {
                return Err(bad(format!("object at `{}` is out of range", b.arrow_name(f))));
            }
            for &g in b.in_arrows(b.dom(f)) {
                let fe = d.presheaf.at(b.dom(g));
                let phi = *d
                    .isos
                    .get(&(f, g))
                    .ok_or_else(|| bad(format!("missing iso for f=`{}`, g=`{}`", b.arrow_name(f), b.arrow_name(g))))?;
                let want = (d.presheaf.action(g).obj(d.object(f)), d.object(b.comp(f, g)));
                if (fe.dom(phi), fe.cod(phi)) != want || !fe.is_iso(phi) {
                    return Err(bad(format!(
                        "`{}` is not an iso g*M_f → M_fg for f=`{}`, g=`{}`",
                        fe.arrow_name(phi),
                        b.arrow_name(f),
                        b.arrow_name(g)
                    )));
                }
            }
        }
        if d.isos.len() != d.sieve.arrows().iter().map(|&f| b.in_arrows(b.dom(f)).len()).sum::<usize>() {
            return Err(bad("isos given for pairs outside the sieve".into()));
        }
        Ok(d)
    }

    /// `M_f = f*M` with identities.
    pub fn induced(presheaf: &CatPresheaf, sieve: &Sieve, m: Obj) -> DescentDatum {
        let b = presheaf.base();
        let objects: Vec<Obj> = sieve.arrows().iter().map(|&f| presheaf.action(f).obj(m)).collect();
        let mut isos = BTreeMap::new();
        for (i, &f) in sieve.arrows().iter().enumerate() {
            for &g in b.in_arrows(b.dom(f)) {
                isos.insert((f, g), presheaf.at(b.dom(g)).identity(presheaf.action(g).obj(objects[i])));
            }
        }
        DescentDatum { presheaf: presheaf.clone(), sieve: sieve.clone(), objects, isos }
    }

    pub fn presheaf(&self) -> &CatPresheaf {
        &self.presheaf
    }

    pub fn sieve(&self) -> &Sieve {
        &self.sieve
    }

    /// `M_f`.
    pub fn object(&self, f: Arr) -> Obj {
        self.objects[self.sieve.arrows().binary_search(&f).expect("arrow of the sieve")]
    }

    /// `φ^{f,g}`.
    pub fn iso(&self, f: Arr, g: Arr) -> Arr {
        self.isos[&(f, g)]
    }

    pub fn isos(&self) -> &BTreeMap<(Arr, Arr), Arr> {
        &self.isos
    }
}

/// `φ^{f∘g,h} ∘ h*(φ^{f,g}) = φ^{f,g∘h}` for every composable triple.
pub fn validate_descent(d: &DescentDatum) -> Result<()> {
    let b = d.presheaf.base();
    for &f in d.sieve.arrows() {
        for &g in b.in_arrows(b.dom(f)) {
            for &h in b.in_arrows(b.dom(g)) {
                let fk = d.presheaf.at(b.dom(h));
                let lhs = fk.comp(d.iso(b.comp(f, g), h), d.presheaf.action(h).arr(d.iso(f, g)));
                if lhs != d.iso(f, b.comp(g, h)) {
                    return Err(Error::CocycleViolation {
                        f: b.arrow_name(f).into(),
                        g: b.arrow_name(g).into(),
                        h: b.arrow_name(h).into(),
                    });
                }
            }
        }
    }
    Ok(())
}

/// A global object `M` with isos `ψ^f: f*M → M_f`, listed in sieve order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EffectivenessWitness {
    pub object: Obj,
    pub isos: Vec<Arr>,
}

fn effectiveness_search<V>(d: &DescentDatum, budget: &mut Budget, mut visit: V) -> Result<()>
where
    V: FnMut(EffectivenessWitness) -> bool,
{
    let b = d.presheaf.base();
    let f = &d.presheaf;
    let c = d.sieve.at();
    let arrows = d.sieve.arrows();
    let pos: BTreeMap<Arr, usize> = arrows.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let mut checks: Vec<Vec<(usize, Arr, usize)>> = vec![Vec::new(); arrows.len()];
    for (i, &a) in arrows.iter().enumerate() {
        for &g in b.in_arrows(b.dom(a)) {
            let j = pos[&b.comp(a, g)];
            checks[i.max(j)].push((i, g, j));
        }
    }
    for m in f.at(c).objects() {
        let mut go_on = true;
        solve(
            arrows.len(),
            budget,
            |i, _| {
                let a = arrows[i];
                isos(f.at(b.dom(a)), f.action(a).obj(m), d.objects[i]).into_iter().map(|x| x.0).collect()
            },
            |i, asg| {
                checks[i].iter().all(|&(p, g, q)| {
                    let cat = f.at(b.dom(g));
                    cat.comp(d.iso(arrows[p], g), f.action(g).arr(Arr(asg[p]))).0 == asg[q]
                })
            },
            |asg| {
                go_on = visit(EffectivenessWitness { object: m, isos: asg.iter().map(|&x| Arr(x)).collect() });
                go_on
            },
        )?;
        if !go_on {
            break;
        }
    }
    Ok(())
}

/// Every effectiveness witness of `d`.
pub fn effectiveness(d: &DescentDatum, budget: &mut Budget) -> Result<Vec<EffectivenessWitness>> {
    validate_descent(d)?;
    let mut out = Vec::new();
    effectiveness_search(d, budget, |w| {
        out.push(w);
        true
    })?;
    Ok(out)
}

/// Gluing of objects, gluing of morphisms, uniqueness of gluings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StackCondition {
    Descent,
    Gluing,
    Uniqueness,
}

impl fmt::Display for StackCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StackCondition::Descent => "(i) descent data are effective",
            StackCondition::Gluing => "(ii) morphisms glue",
            StackCondition::Uniqueness => "(iii) gluings of morphisms are unique",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StackFailure {
    pub condition: StackCondition,
    pub object: String,
    pub sieve: String,
    pub witness: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StackReport {
    pub descent_data: usize,
    pub morphism_families: usize,
    pub failure: Option<StackFailure>,
    /// The stratum at which the budget ran out, if it did.
    pub incomplete: Option<String>,
}

impl StackReport {
    pub fn is_stack(&self) -> bool {
        self.failure.is_none() && self.incomplete.is_none()
    }
}

/// Checks the three stack conditions for every covering sieve. Conditions
/// (ii) and (iii) are exhaustive; (i) runs over all descent data until the
/// budget runs out, in which case the report names the unfinished stratum.
pub fn check_stack(f: &CatPresheaf, j: &GrothTopology, budget: &mut Budget) -> Result<StackReport> {
    if f.base() != j.cat() {
        return Err(Error::Mismatch("presheaf and topology live on different categories".into()));
    }
    let b = f.base().clone();
    let mut report = StackReport::default();
    for c in b.objects() {
        for s in j.covers(c) {
            for cond in [StackCondition::Uniqueness, StackCondition::Gluing, StackCondition::Descent] {
                let run = match cond {
                    StackCondition::Descent => check_descent(f, s, budget, &mut report),
                    _ => check_morphisms(f, s, cond, budget, &mut report),
                };
                match run {
                    Ok(Some(witness)) => {
                        report.failure = Some(StackFailure {
                            condition: cond,
                            object: b.object_name(c).into(),
                            sieve: s.display(&b).to_string(),
                            witness,
                        });
                        return Ok(report);
                    }
                    Ok(None) => {}
                    Err(e) if e.is_size_bound() => {
                        report.incomplete = Some(format!("{cond} for {}", s.display(&b)));
                        return Ok(report);
                    }
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok(report)
}

fn restriction_family(f: &CatPresheaf, s: &Sieve, a: Arr) -> Vec<Arr> {
    s.arrows().iter().map(|&g| f.action(g).arr(a)).collect()
}

fn check_morphisms(
    f: &CatPresheaf,
    s: &Sieve,
    cond: StackCondition,
    budget: &mut Budget,
    report: &mut StackReport,
) -> Result<Option<String>> {
    let b = f.base();
    let c = s.at();
    let fc = f.at(c);
    let arrows = s.arrows();
    let pos: BTreeMap<Arr, usize> = arrows.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let mut checks: Vec<Vec<(usize, Arr, usize)>> = vec![Vec::new(); arrows.len()];
    for (i, &a) in arrows.iter().enumerate() {
        for &g in b.in_arrows(b.dom(a)) {
            let k = pos[&b.comp(a, g)];
            checks[i.max(k)].push((i, g, k));
        }
    }
    for x in fc.objects() {
        for y in fc.objects() {
            let mut seen: BTreeMap<Vec<Arr>, Arr> = BTreeMap::new();
            for a in fc.hom(x, y) {
                budget.tick()?;
                if let Some(prev) = seen.insert(restriction_family(f, s, a), a) {
                    if cond == StackCondition::Uniqueness {
                        return Ok(Some(format!(
                            "`{}` and `{}`: `{}` → `{}` agree on the sieve",
                            fc.arrow_name(prev),
                            fc.arrow_name(a),
                            fc.object_name(x),
                            fc.object_name(y)
                        )));
                    }
                }
            }
            if cond == StackCondition::Uniqueness {
                continue;
            }
            let mut missing = None;
            solve(
                arrows.len(),
                budget,
                |i, _| {
                    let g = arrows[i];
                    let (fx, fy) = (f.action(g).obj(x), f.action(g).obj(y));
                    f.at(b.dom(g)).hom(fx, fy).into_iter().map(|h| h.0).collect()
                },
                |i, asg| checks[i].iter().all(|&(p, g, q)| f.action(g).arr(Arr(asg[p])).0 == asg[q]),
                |asg| {
                    report.morphism_families += 1;
                    let family: Vec<Arr> = asg.iter().map(|&h| Arr(h)).collect();
                    if seen.contains_key(&family) {
                        return true;
                    }
                    let parts: Vec<String> = arrows
                        .iter()
                        .zip(&family)
                        .map(|(&g, &h)| format!("{}:{}", b.arrow_name(g), f.at(b.dom(g)).arrow_name(h)))
                        .collect();
                    missing = Some(format!(
                        "compatible family {{{}}} from `{}` to `{}` has no gluing",
                        parts.join(","),
                        fc.object_name(x),
                        fc.object_name(y)
                    ));
                    false
                },
            )?;
            if missing.is_some() {
                return Ok(missing);
            }
        }
    }
    Ok(None)
}

fn check_descent(f: &CatPresheaf, s: &Sieve, budget: &mut Budget, report: &mut StackReport) -> Result<Option<String>> {
    let b = f.base().clone();
    let arrows = s.arrows().to_vec();
    let n = arrows.len();
    // variables: M_f for f ∈ S, then φ^{f,g} per pair
    let mut pairs: Vec<(Arr, Arr)> = Vec::new();
    for &a in &arrows {
        for &g in b.in_arrows(b.dom(a)) {
            pairs.push((a, g));
        }
    }
    let pos: BTreeMap<Arr, usize> = arrows.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let pair_var: BTreeMap<(Arr, Arr), usize> = pairs.iter().enumerate().map(|(i, &p)| (p, n + i)).collect();
    let mut checks: Vec<Vec<(Arr, Arr, Arr)>> = vec![Vec::new(); n + pairs.len()];
    for &(a, g) in &pairs {
        for &h in b.in_arrows(b.dom(g)) {
            let vs = [pair_var[&(b.comp(a, g), h)], pair_var[&(a, g)], pair_var[&(a, b.comp(g, h))]];
            checks[*vs.iter().max().unwrap()].push((a, g, h));
        }
    }
    let mut failure = None;
    let mut inner = Budget::new(budget.limit().saturating_sub(budget.used()));
    solve(
        n + pairs.len(),
        budget,
        |i, asg| {
            if i < n {
                f.at(b.dom(arrows[i])).objects().map(|o| o.0).collect()
            } else {
                let (a, g) = pairs[i - n];
                let src = f.action(g).obj(Obj(asg[pos[&a]]));
                let dst = Obj(asg[pos[&b.comp(a, g)]]);
                isos(f.at(b.dom(g)), src, dst).into_iter().map(|x| x.0).collect()
            }
        },
        |i, asg| {
            checks[i].iter().all(|&(a, g, h)| {
                let fk = f.at(b.dom(h));
                let outer = Arr(asg[pair_var[&(b.comp(a, g), h)]]);
                let moved = f.action(h).arr(Arr(asg[pair_var[&(a, g)]]));
                fk.comp(outer, moved).0 == asg[pair_var[&(a, b.comp(g, h))]]
            })
        },
        |asg| {
            report.descent_data += 1;
            let objects = asg[..n].iter().map(|&o| Obj(o)).collect();
            let isos = pairs.iter().enumerate().map(|(i, &p)| (p, Arr(asg[n + i]))).collect();
            let d = DescentDatum { presheaf: f.clone(), sieve: s.clone(), objects, isos };
            let mut found = false;
            let run = effectiveness_search(&d, &mut inner, |_| {
                found = true;
                false
            });
            match run {
                Err(e) => {
                    failure = Some(Err(e));
                    false
                }
                Ok(()) if !found => {
                    let parts: Vec<String> = arrows
                        .iter()
                        .map(|&a| format!("{}:{}", b.arrow_name(a), f.at(b.dom(a)).object_name(d.object(a))))
                        .collect();
                    failure = Some(Ok(format!("descent datum {{{}}} is not effective", parts.join(","))));
                    false
                }
                Ok(()) => true,
            }
        },
    )?;
    match failure {
        Some(Err(e)) => Err(e),
        Some(Ok(w)) => Ok(Some(w)),
        None => Ok(None),
    }
}

/// A map into `Ω̃` whose values are sheaves on the slices, i.e. a map into
/// `Ω_J` composed with `ℓ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapToOmegaJ {
    map: MapToOmega,
    topology: GrothTopology,
}

impl MapToOmegaJ {
    pub fn map(&self) -> &MapToOmega {
        &self.map
    }

    pub fn topology(&self) -> &GrothTopology {
        &self.topology
    }
}

/// A value of a map into `Ω̃` that is not a sheaf.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EllFailure {
    pub object: Obj,
    pub element: Obj,
    pub failure: SheafFailure,
    pub description: String,
}

/// Checks that every value of `z` is a sheaf for the slice topology.
pub fn ell_factors(
    z: &MapToOmega,
    j: &GrothTopology,
    budget: &mut Budget,
) -> Result<std::result::Result<MapToOmegaJ, EllFailure>> {
    let b = z.base();
    if b != j.cat() {
        return Err(Error::Mismatch("map and topology live on different categories".into()));
    }
    for c in b.objects() {
        let t = slice_topology(j, z.slices(), c);
        for x in z.source().at(c).objects() {
            if let Some(failure) = sheaf_failure(z.value(c, x), &t, budget)? {
                let description = format!(
                    "value at (`{}`, `{}`): {}",
                    b.object_name(c),
                    z.source().at(c).object_name(x),
                    failure.describe(z.value(c, x))
                );
                return Ok(Err(EllFailure { object: c, element: x, failure, description }));
            }
        }
    }
    Ok(Ok(MapToOmegaJ { map: z.clone(), topology: j.clone() }))
}

/// The characteristic morphism of `φ` between stacks, factored through
/// sheaves and checked to classify `φ` again. With `attested` the stack
/// property of the endpoints is taken on trust.
pub fn char_stacks(
    phi: &DiscOpfibPre,
    j: &GrothTopology,
    slices: &Arc<SliceFamily>,
    attested: bool,
    budget: &mut Budget,
) -> Result<MapToOmegaJ> {
    if !attested {
        for (side, p) in [("total", phi.total()), ("base", phi.over())] {
            let r = check_stack(p, j, budget)?;
            if let Some(fail) = r.failure {
                return Err(Error::FactorizationFailed(format!(
                    "the {side} presheaf is not a stack: {} fails at `{}` for {}: {}",
                    fail.condition, fail.object, fail.sieve, fail.witness
                )));
            }
            if r.incomplete.is_some() {
                return Err(Error::SizeBound { bound: budget.limit() });
            }
        }
    }
    let z = char(phi, slices)?;
    let zj = ell_factors(&z, j, budget)?.map_err(|e| Error::FactorizationFailed(e.description))?;
    let back = classify(zj.map())?;
    fib_iso(&back, phi, budget)?.ok_or_else(|| Error::NoIsoFound("classify(char(φ)) is not isomorphic to φ".into()))?;
    Ok(zj)
}

/// A descent datum for `Ω_J` on `S` at `c`: a sheaf `M_f` on `C/dom f` per
/// `f ∈ S`, and natural isos `φ^{f,g}: g*M_f → M_{f∘g}`, where `g*` is
/// reindexing along `g∘-`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaJDatum {
    slices: Arc<SliceFamily>,
    topology: GrothTopology,
    sieve: Sieve,
    locals: Vec<SetPresheaf>,
    isos: BTreeMap<(Arr, Arr), SetNat<SetPresheaf>>,
}

impl OmegaJDatum {
    pub fn new(
        slices: Arc<SliceFamily>,
        topology: GrothTopology,
        sieve: Sieve,
        locals: Vec<SetPresheaf>,
        isos: BTreeMap<(Arr, Arr), SetNat<SetPresheaf>>,
        budget: &mut Budget,
    ) -> Result<Self> {
        let d = OmegaJDatum { slices, topology, sieve, locals, isos };
        d.validate(budget)?;
        Ok(d)
    }

    /// `M_f = f*M` with identities.
    pub fn induced(
        slices: Arc<SliceFamily>,
        topology: GrothTopology,
        sieve: Sieve,
        m: &SetPresheaf,
        budget: &mut Budget,
    ) -> Result<Self> {
        let b = slices.base().clone();
        let locals: Vec<SetPresheaf> =
            sieve.arrows().iter().map(|&f| m.reindex(slices.postcompose(f))).collect::<Result<_>>()?;
        let mut isos = BTreeMap::new();
        for (i, &f) in sieve.arrows().iter().enumerate() {
            for &g in b.in_arrows(b.dom(f)) {
                isos.insert((f, g), SetNat::identity(&locals[i].reindex(slices.postcompose(g))?));
            }
        }
        OmegaJDatum::new(slices, topology, sieve, locals, isos, budget)
    }

    pub fn slices(&self) -> &Arc<SliceFamily> {
        &self.slices
    }

    pub fn topology(&self) -> &GrothTopology {
        &self.topology
    }

    pub fn sieve(&self) -> &Sieve {
        &self.sieve
    }

    pub fn local(&self, f: Arr) -> &SetPresheaf {
        &self.locals[self.sieve.arrows().binary_search(&f).expect("arrow of the sieve")]
    }

    pub fn iso(&self, f: Arr, g: Arr) -> &SetNat<SetPresheaf> {
        &self.isos[&(f, g)]
    }

    pub fn validate(&self, budget: &mut Budget) -> Result<()> {
        let b = self.slices.base().clone();
        let bad = |m: String| Error::InvalidDescent(m);
        if !self.topology.is_covering(&self.sieve) {
            return Err(bad(format!("{} does not cover", self.sieve.display(&b))));
        }
        if self.locals.len() != self.sieve.len() {
            return Err(bad("one sheaf per arrow of the sieve is required".into()));
        }
        for (i, &f) in self.sieve.arrows().iter().enumerate() {
            let d = b.dom(f);
            let m = &self.locals[i];
            if m.base() != self.slices.slice(d).cat() {
                return Err(bad(format!("M at `{}` is not on the slice over its domain", b.arrow_name(f))));
            }
            let t = slice_topology(&self.topology, &self.slices, d);
            if let Some(w) = sheaf_failure(m, &t, budget)? {
                return Err(bad(format!("M at `{}` is not a sheaf: {}", b.arrow_name(f), w.describe(m))));
            }
            for &g in b.in_arrows(d) {
                let phi = self
                    .isos
                    .get(&(f, g))
                    .ok_or_else(|| bad(format!("missing iso for f=`{}`, g=`{}`", b.arrow_name(f), b.arrow_name(g))))?;
                if phi.source() != &m.reindex(self.slices.postcompose(g))? || phi.target() != self.local(b.comp(f, g)) {
                    return Err(bad(format!(
                        "iso for f=`{}`, g=`{}` has the wrong type",
                        b.arrow_name(f),
                        b.arrow_name(g)
                    )));
                }
                phi.validate()?;
                if !phi.is_iso() {
                    return Err(bad(format!(
                        "map for f=`{}`, g=`{}` is not invertible",
                        b.arrow_name(f),
                        b.arrow_name(g)
                    )));
                }
                for &h in b.in_arrows(b.dom(g)) {
                    let lhs = self.iso(b.comp(f, g), h).after(&phi.reindex(self.slices.postcompose(h))?)?;
                    if lhs.components() != self.iso(f, b.comp(g, h)).components() {
                        return Err(Error::CocycleViolation {
                            f: b.arrow_name(f).into(),
                            g: b.arrow_name(g).into(),
                            h: b.arrow_name(h).into(),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

/// The glued sheaf `M = Z⁺⁺` with isos `ψ^f: f*M → M_f`.
#[derive(Debug, Clone)]
pub struct OmegaJGluing {
    pub glued: SetPresheaf,
    pub psi: Vec<SetNat<SetPresheaf>>,
    /// Number of endomorphisms of `M` whose restrictions were glued back.
    pub morphisms_glued: usize,
}

/// Builds the gluing of an `Ω_J` descent datum: `Z(f) = M_f(id)` for
/// `f ∈ S`, empty off `S`, then `M = Z⁺⁺`, with
/// `ψ^f_g = (φ^{f,g}_id)⁻¹ ∘ η_{f∘g}⁻¹`. Checks that each `ψ^f` is a natural
/// iso, that the effectiveness squares commute, and that morphisms of `M`
/// restrict and glue back uniquely.
pub fn omega_j_probe(d: &OmegaJDatum, budget: &mut Budget) -> Result<OmegaJGluing> {
    let slices = &d.slices;
    let b = slices.base().clone();
    let c = d.sieve.at();
    let sl = slices.slice(c);
    let sc = sl.cat().clone();
    let in_s = |o: Obj| d.sieve.contains(sl.base_arrow(o));
    let top_of = |x: Obj| slices.slice(x).top(&b);
    // Z on C/c
    let sets: Vec<Vec<String>> = sc
        .objects()
        .map(|o| {
            let f = sl.base_arrow(o);
            if in_s(o) {
                d.local(f).set(top_of(b.dom(f))).to_vec()
            } else {
                Vec::new()
            }
        })
        .collect();
    let maps: Vec<Vec<usize>> = sc
        .arrows()
        .map(|a| {
            let f = sl.base_arrow(sc.cod(a));
            if !d.sieve.contains(f) {
                return Vec::new();
            }
            let g = sl.underlying(a);
            let dd = b.dom(f);
            let restrict = slices.slice(dd).arrow_of(g, b.identity(dd));
            let phi = d.iso(f, g).component(top_of(b.dom(g)));
            (0..d.local(f).card(top_of(dd))).map(|x| phi[d.local(f).act(restrict, x)]).collect()
        })
        .collect();
    let z = SetPresheaf::new(sc.clone(), sets, maps)?;
    let t = slice_topology(&d.topology, slices, c);
    let (m, eta) = sheafify_with_unit(&z, &t, budget)?;
    if let Some(w) = sheaf_failure(&m, &t, budget)? {
        return Err(Error::InvalidDescent(format!("Z⁺⁺ is not a sheaf: {}", w.describe(&m))));
    }
    let mut psi = Vec::new();
    for &f in d.sieve.arrows() {
        let dd = b.dom(f);
        let sd = slices.slice(dd);
        let pulled = m.reindex(slices.postcompose(f))?;
        let comps = sd
            .cat()
            .objects()
            .map(|o| {
                let g = sd.base_arrow(o);
                let fg = sl.object_of(b.comp(f, g));
                let eta_fg = eta.component(fg);
                let phi = d.iso(f, g).component(top_of(b.dom(g)));
                (0..m.card(fg))
                    .map(|y| {
                        let x = eta_fg.iter().position(|&v| v == y).ok_or_else(|| {
                            Error::InvalidDescent(format!(
                                "unit of Z⁺⁺ misses an element over `{}`",
                                b.arrow_name(b.comp(f, g))
                            ))
                        })?;
                        phi.iter().position(|&v| v == x).ok_or_else(|| Error::InvalidDescent("φ is not onto".into()))
                    })
                    .collect::<Result<Vec<usize>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let p = SetNat::new(pulled, d.local(f).clone(), comps)?;
        if !p.is_iso() {
            return Err(Error::InvalidDescent(format!("ψ at `{}` is not invertible", b.arrow_name(f))));
        }
        psi.push(p);
    }
    // φ^{f,g} ∘ g*(ψ^f) = ψ^{f∘g}
    for (i, &f) in d.sieve.arrows().iter().enumerate() {
        for &g in b.in_arrows(b.dom(f)) {
            let j = d.sieve.arrows().binary_search(&b.comp(f, g)).expect("sieve");
            let lhs = d.iso(f, g).after(&psi[i].reindex(slices.postcompose(g))?)?;
            if lhs.components() != psi[j].components() {
                return Err(Error::InvalidDescent(format!(
                    "effectiveness square fails at f=`{}`, g=`{}`",
                    b.arrow_name(f),
                    b.arrow_name(g)
                )));
            }
        }
    }
    let morphisms_glued = check_morphism_gluing(slices, &t, &d.sieve, &m, &m, budget)?;
    Ok(OmegaJGluing { glued: m, psi, morphisms_glued })
}

/// For sheaves `A`, `B` on `C/c` and `S` covering `c`: every transformation
/// `A ⇒ B` is recovered from its components over `S` by amalgamation in
/// `B`, and distinct transformations differ over `S`. Returns how many
/// transformations were checked.
pub fn check_morphism_gluing(
    slices: &Arc<SliceFamily>,
    t: &GrothTopology,
    sieve: &Sieve,
    a: &SetPresheaf,
    b2: &SetPresheaf,
    budget: &mut Budget,
) -> Result<usize> {
    let b = slices.base();
    let sl = slices.slice(sieve.at());
    let sc = sl.cat();
    let over: Vec<Obj> = sieve.arrows().iter().map(|&f| sl.object_of(f)).collect();
    let mut seen: BTreeMap<Vec<Vec<usize>>, usize> = BTreeMap::new();
    let nats = enumerate_set_nats(a, b2, budget)?;
    for (k, n) in nats.iter().enumerate() {
        let local: Vec<Vec<usize>> = over.iter().map(|&o| n.component(o).to_vec()).collect();
        if let Some(prev) = seen.insert(local.clone(), k) {
            return Err(Error::InvalidDescent(format!("transformations #{prev} and #{k} agree on the cover")));
        }
        // glue from the local components
        let comps = sc
            .objects()
            .map(|h| {
                let hs = pullback_sieve(sc, sl_arrow_to_top(sl, b, h), &top_sieve(sl, b, sieve));
                if !t.is_covering(&hs) {
                    return Err(Error::InvalidDescent(format!("{} does not cover", hs.display(sc))));
                }
                (0..a.card(h))
                    .map(|x| {
                        let values: Vec<usize> = hs
                            .arrows()
                            .iter()
                            .map(|&kk| {
                                let target = sc.dom(kk);
                                let i = over.iter().position(|&o| o == target).expect("object over the sieve");
                                local[i][a.act(kk, x)]
                            })
                            .collect();
                        let fam = MatchingFamily::from_parts(hs.clone(), values);
                        match amalgamations(b2, &fam)[..] {
                            [y] => Ok(y),
                            _ => Err(Error::InvalidDescent("local components do not amalgamate uniquely".into())),
                        }
                    })
                    .collect::<Result<Vec<usize>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if comps != n.components() {
            return Err(Error::InvalidDescent(format!("transformation #{k} is not recovered from the cover")));
        }
    }
    Ok(nats.len())
}

fn top_sieve(sl: &Slice, b: &FinCat, s: &Sieve) -> Sieve {
    let top = sl.top(b);
    let idc = b.identity(sl.over());
    Sieve::new(sl.cat(), top, s.arrows().iter().map(|&f| sl.arrow_of(f, idc))).expect("image of a sieve")
}

fn sl_arrow_to_top(sl: &Slice, b: &FinCat, o: Obj) -> Arr {
    sl.arrow_of(sl.base_arrow(o), b.identity(sl.over()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::set_iso;
    use crate::search::DEFAULT_BOUND;
    use crate::site::is_sheaf;

    fn budget() -> Budget {
        Budget::new(DEFAULT_BOUND)
    }

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

    fn joint(cat: &FinCat) -> Sieve {
        crate::site::sieve_generate(
            cat,
            cat.object("12").unwrap(),
            &[cat.arrow("1<12").unwrap(), cat.arrow("2<12").unwrap()],
        )
        .unwrap()
    }

    #[test]
    fn induced_datum_is_effective() {
        let (cat, j) = open_site();
        let y = CatPresheaf::discrete(&SetPresheaf::representable(cat.clone(), cat.object("12").unwrap()));
        let s = joint(&cat);
        let twelve = cat.object("12").unwrap();
        for m in y.at(twelve).objects() {
            let d = DescentDatum::induced(&y, &s, m);
            validate_descent(&d).unwrap();
            let ws = effectiveness(&d, &mut budget()).unwrap();
            assert!(ws.iter().any(|w| w.object == m));
        }
        assert!(check_stack(&y, &j, &mut budget()).unwrap().is_stack());
        let empty = DescentDatum::induced(&y, &Sieve::empty(twelve), Obj(0));
        validate_descent(&empty).unwrap();
    }

    #[test]
    fn non_separated_sets_fail_uniqueness() {
        let (cat, j) = open_site();
        // two parallel arrows over {1,2} that agree everywhere below
        let twelve = cat.object("12").unwrap();
        let pair = Arc::new(FinCat::free(&["p", "q"], &[("s", "p", "q"), ("t", "p", "q")]).unwrap());
        let pt = Arc::new(FinCat::point());
        let cats: Vec<Arc<FinCat>> =
            cat.objects().map(|o| if o == twelve { pair.clone() } else { pt.clone() }).collect();
        let actions = cat
            .arrows()
            .map(|a| {
                let (src, dst) = (cats[cat.cod(a).0].clone(), cats[cat.dom(a).0].clone());
                if Arc::ptr_eq(&src, &dst) {
                    crate::fincat::FinFunctor::identity(src)
                } else {
                    crate::fincat::FinFunctor::to_point(src, dst)
                }
            })
            .collect();
        let f = CatPresheaf::new(cat.clone(), cats, actions).unwrap();
        let r = check_stack(&f, &j, &mut budget()).unwrap();
        assert_eq!(r.failure.unwrap().condition, StackCondition::Uniqueness);
    }

    #[test]
    fn probe_recovers_global_sheaf() {
        let (cat, j) = open_site();
        let slices = SliceFamily::new(cat.clone());
        let twelve = cat.object("12").unwrap();
        let m = SetPresheaf::representable(slices.slice(twelve).cat().clone(), slices.slice(twelve).top(&cat));
        let t = slice_topology(&j, &slices, twelve);
        assert!(is_sheaf(&m, &t, &mut budget()).unwrap());
        let d = OmegaJDatum::induced(slices.clone(), j.clone(), joint(&cat), &m, &mut budget()).unwrap();
        let g = omega_j_probe(&d, &mut budget()).unwrap();
        assert!(set_iso(&g.glued, &m, &mut budget()).unwrap().is_some());
        assert!(g.morphisms_glued >= 1);
    }

    #[test]
    fn identity_on_a_stack_factors() {
        let (cat, j) = open_site();
        let slices = SliceFamily::new(cat.clone());
        let y = CatPresheaf::discrete(&SetPresheaf::representable(cat.clone(), cat.object("1").unwrap()));
        let phi = DiscOpfibPre::identity(&y);
        let zj = char_stacks(&phi, &j, &slices, false, &mut budget()).unwrap();
        assert_eq!(zj.map().source(), &y);
    }
}
