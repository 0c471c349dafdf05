//! The prestack classifier `Ω̃(c) = [(C/c)^op, Set]`, handled through maps
//! into it. `Ω̃` itself is never built: a [`MapToOmega`] stores, for each
//! `X ∈ F(c)`, the presheaf on the slice it is sent to.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::cat2::elements_of;
use crate::error::{Error, Result};
use crate::fincat::{
    enumerate_set_nats, Arr, FinCat, FinFunctor, FinSetFunctor, Obj, RawCat, SetDiagram, SetNat, SetPresheaf,
    SliceFamily,
};
use crate::prestack::{
    certify_dopf_pre, fib_hom, fib_iso, pointwise_comma, representable, CatPresheaf, DiscOpfibPre, TwoNat,
};
use crate::search::{solve, Budget};

type Nat = SetNat<SetPresheaf>;

/// A strict 2-natural transformation `F → Ω̃`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapToOmega {
    slices: Arc<SliceFamily>,
    source: CatPresheaf,
    values: Vec<Vec<SetPresheaf>>,
    arrow_values: Vec<Vec<Nat>>,
}

impl MapToOmega {
    pub fn new(
        slices: Arc<SliceFamily>,
        source: CatPresheaf,
        values: Vec<Vec<SetPresheaf>>,
        arrow_values: Vec<Vec<Nat>>,
    ) -> Result<Self> {
        let z = MapToOmega { slices, source, values, arrow_values };
        z.validate()?;
        Ok(z)
    }

    /// Fills in the arrow part from object values alone. Only possible when
    /// every `F(c)` is discrete.
    pub fn from_values(slices: Arc<SliceFamily>, source: CatPresheaf, values: Vec<Vec<SetPresheaf>>) -> Result<Self> {
        if !source.is_discrete() {
            return Err(Error::InvalidMapToOmega("arrow values are required when F is not discrete".into()));
        }
        let arrow_values = values.iter().map(|vs| vs.iter().map(SetNat::identity).collect()).collect();
        MapToOmega::new(slices, source, values, arrow_values)
    }

    pub fn slices(&self) -> &Arc<SliceFamily> {
        &self.slices
    }

    pub fn base(&self) -> &Arc<FinCat> {
        self.slices.base()
    }

    pub fn source(&self) -> &CatPresheaf {
        &self.source
    }

    /// The presheaf on `C/c` assigned to `X ∈ F(c)`.
    pub fn value(&self, c: Obj, x: Obj) -> &SetPresheaf {
        &self.values[c.0][x.0]
    }

    /// The transformation assigned to `ν` in `F(c)`.
    pub fn arrow_value(&self, c: Obj, nu: Arr) -> &Nat {
        &self.arrow_values[c.0][nu.0]
    }

    /// The set `value(c, X)(id_c)`.
    pub fn points(&self, c: Obj, x: Obj) -> &[String] {
        let top = self.slices.slice(c).top(self.base());
        self.value(c, x).set(top)
    }

    pub fn validate(&self) -> Result<()> {
        let b = self.base().clone();
        let f = &self.source;
        if f.base() != &b {
            return Err(Error::InvalidMapToOmega("source presheaf lives over another base".into()));
        }
        let bad = |m: String| Error::InvalidMapToOmega(m);
        if self.values.len() != b.object_count() || self.arrow_values.len() != b.object_count() {
            return Err(bad("one table per object of the base is required".into()));
        }
        for c in b.objects() {
            let fc = f.at(c);
            let sc = self.slices.slice(c).cat();
            if self.values[c.0].len() != fc.object_count() || self.arrow_values[c.0].len() != fc.arrow_count() {
                return Err(bad(format!("tables at `{}` do not match F", b.object_name(c))));
            }
            for (i, z) in self.values[c.0].iter().enumerate() {
                if z.base() != sc {
                    return Err(bad(format!(
                        "value at (`{}`, `{}`) is not a presheaf on the slice",
                        b.object_name(c),
                        fc.object_name(Obj(i))
                    )));
                }
                z.validate()?;
            }
            for nu in fc.arrows() {
                let n = &self.arrow_values[c.0][nu.0];
                if n.source() != &self.values[c.0][fc.dom(nu).0] || n.target() != &self.values[c.0][fc.cod(nu).0] {
                    return Err(bad(format!(
                        "arrow value at (`{}`, `{}`) has the wrong endpoints",
                        b.object_name(c),
                        fc.arrow_name(nu)
                    )));
                }
                n.validate()?;
            }
            for x in fc.objects() {
                if self.arrow_values[c.0][fc.identity(x).0] != SetNat::identity(&self.values[c.0][x.0]) {
                    return Err(bad(format!(
                        "identity on `{}` at `{}` is not sent to an identity",
                        fc.object_name(x),
                        b.object_name(c)
                    )));
                }
            }
            for (mu, nu) in fc.composable_pairs() {
                let lhs = &self.arrow_values[c.0][fc.comp(mu, nu).0];
                let rhs = self.arrow_values[c.0][mu.0].after(&self.arrow_values[c.0][nu.0])?;
                if *lhs != rhs {
                    return Err(bad(format!(
                        "composite {} . {} at `{}` is not preserved",
                        fc.arrow_name(mu),
                        fc.arrow_name(nu),
                        b.object_name(c)
                    )));
                }
            }
        }
        for h in b.arrows() {
            let (d, c) = (b.dom(h), b.cod(h));
            let post = self.slices.postcompose(h);
            let fh = f.action(h);
            for x in f.at(c).objects() {
                if self.values[d.0][fh.obj(x).0] != self.values[c.0][x.0].reindex(post)? {
                    return Err(bad(format!(
                        "value at `{}` reindexed along `{}` differs from the value at its restriction",
                        f.at(c).object_name(x),
                        b.arrow_name(h)
                    )));
                }
            }
            for nu in f.at(c).arrows() {
                if self.arrow_values[d.0][fh.arr(nu).0] != self.arrow_values[c.0][nu.0].reindex(post)? {
                    return Err(bad(format!(
                        "arrow value at `{}` is not stable under reindexing along `{}`",
                        f.at(c).arrow_name(nu),
                        b.arrow_name(h)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Precomposition with `s: F' → F`.
    pub fn restrict_along(&self, s: &TwoNat) -> Result<MapToOmega> {
        if s.target() != &self.source {
            return Err(Error::Mismatch("restricting along a transformation into another presheaf".into()));
        }
        let b = self.base();
        let values = b
            .objects()
            .map(|c| s.source().at(c).objects().map(|x| self.values[c.0][s.component(c).obj(x).0].clone()).collect())
            .collect();
        let arrow_values = b
            .objects()
            .map(|c| {
                s.source().at(c).arrows().map(|nu| self.arrow_values[c.0][s.component(c).arr(nu).0].clone()).collect()
            })
            .collect();
        MapToOmega::new(self.slices.clone(), s.source().clone(), values, arrow_values)
    }
}

/// The constant map at `Δ1`.
pub fn omega_point(slices: &Arc<SliceFamily>, f: &CatPresheaf) -> MapToOmega {
    let b = slices.base();
    let values: Vec<Vec<SetPresheaf>> = b
        .objects()
        .map(|c| {
            let one = SetPresheaf::terminal(slices.slice(c).cat().clone());
            vec![one; f.at(c).object_count()]
        })
        .collect();
    let arrow_values = b
        .objects()
        .map(|c| {
            let one = SetPresheaf::terminal(slices.slice(c).cat().clone());
            vec![SetNat::identity(&one); f.at(c).arrow_count()]
        })
        .collect();
    MapToOmega { slices: slices.clone(), source: f.clone(), values, arrow_values }
}

/// The map `y(c) → Ω̃` that Yoneda associates with `Z ∈ Ω̃(c)`.
pub fn from_representable(slices: &Arc<SliceFamily>, c: Obj, z: &SetPresheaf) -> Result<MapToOmega> {
    let b = slices.base().clone();
    if z.base() != slices.slice(c).cat() {
        return Err(Error::Mismatch("presheaf is not on the slice over the given object".into()));
    }
    let y = representable(&b, c);
    let values: Vec<Vec<SetPresheaf>> = b
        .objects()
        .map(|d| {
            let yd = y.at(d);
            yd.objects()
                .map(|o| {
                    let f = b.arrow(yd.object_name(o)).expect("hom element");
                    z.reindex(slices.postcompose(f))
                })
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;
    MapToOmega::from_values(slices.clone(), y, values)
}

fn point_functor(z: &MapToOmega, c: Obj) -> Result<FinSetFunctor> {
    let fc = z.source.at(c).clone();
    let top = z.slices.slice(c).top(z.base());
    let sets = fc.objects().map(|x| z.values[c.0][x.0].set(top).to_vec()).collect();
    let maps = fc.arrows().map(|nu| z.arrow_values[c.0][nu.0].component(top).to_vec()).collect();
    FinSetFunctor::new(fc, sets, maps)
}

/// The discrete opfibration classified by `z`: over `X ∈ F(c)` it has the
/// points `value(c, X)(id_c)`. Objects are `(X,t)` and arrows `(ν,t)`.
pub fn classify(z: &MapToOmega) -> Result<DiscOpfibPre> {
    let b = z.base().clone();
    let f = &z.source;
    let mut totals = Vec::new();
    let mut projections = Vec::new();
    let mut point_fns = Vec::new();
    for c in b.objects() {
        let pf = point_functor(z, c)?;
        let p = elements_of(&pf)?;
        totals.push(p.total().clone());
        projections.push(p.functor().clone());
        point_fns.push(pf);
    }
    let element = |c: Obj, x: Obj, t: usize| -> Result<Obj> {
        let fc = f.at(c);
        totals[c.0].object(&format!("({},{})", fc.object_name(x), point_fns[c.0].set(x)[t]))
    };
    let element_arrow = |c: Obj, nu: Arr, t: usize| -> Result<Arr> {
        let fc = f.at(c);
        totals[c.0].arrow(&format!("({},{})", fc.arrow_name(nu), point_fns[c.0].set(fc.dom(nu))[t]))
    };
    let mut actions = Vec::new();
    for h in b.arrows() {
        let (d, c) = (b.dom(h), b.cod(h));
        let sc = z.slices.slice(c);
        let restrict = sc.arrow_of(h, b.identity(c));
        let fh = f.action(h);
        let (gc, pc) = (&totals[c.0], &projections[c.0]);
        let mut objects = Vec::new();
        for o in gc.objects() {
            let x = pc.obj(o);
            let t = point_index(gc, o, &point_fns[c.0], x);
            let t2 = z.values[c.0][x.0].act(restrict, t);
            objects.push(element(d, fh.obj(x), t2)?);
        }
        let mut arrows = Vec::new();
        for a in gc.arrows() {
            let nu = pc.arr(a);
            let x = f.at(c).dom(nu);
            let t = point_index(gc, gc.dom(a), &point_fns[c.0], x);
            let t2 = z.values[c.0][x.0].act(restrict, t);
            arrows.push(element_arrow(d, fh.arr(nu), t2)?);
        }
        actions.push(FinFunctor::new(gc.clone(), totals[d.0].clone(), objects, arrows)?);
    }
    let g = CatPresheaf::new(b.clone(), totals, actions)?;
    certify_dopf_pre(&TwoNat::new(g, f.clone(), projections)?)
}

fn point_index(total: &FinCat, o: Obj, pf: &FinSetFunctor, x: Obj) -> usize {
    let name = total.object_name(o);
    let label = &name[pf.base().object_name(x).len() + 2..name.len() - 1];
    pf.element(x, label).expect("element label")
}

/// The characteristic morphism of `φ`: `X ∈ F(c)` goes to the presheaf
/// `f ↦ fibre of φ_d over F(f)(X)` on `C/c`, restricted along the action
/// of `G`; `ν` goes to transport of fibres along the liftings of `F(f)(ν)`.
pub fn char(phi: &DiscOpfibPre, slices: &Arc<SliceFamily>) -> Result<MapToOmega> {
    let b = phi.base().clone();
    if slices.base() != &b {
        return Err(Error::Mismatch("slices of another base".into()));
    }
    let (f, g) = (phi.over(), phi.total());
    let fibre_labels = |d: Obj, y: Obj| -> Vec<String> {
        phi.fibre(d, y).iter().map(|&e| g.at(d).object_name(e).to_string()).collect()
    };
    let mut values = Vec::new();
    let mut arrow_values = Vec::new();
    for c in b.objects() {
        let sl = slices.slice(c);
        let sc = sl.cat();
        let fc = f.at(c);
        let mut vs = Vec::new();
        for x in fc.objects() {
            let over = |o: Obj| -> (Obj, Obj) {
                let fa = sl.base_arrow(o);
                (b.dom(fa), f.action(fa).obj(x))
            };
            let sets = sc.objects().map(|o| {
                let (d, y) = over(o);
                fibre_labels(d, y)
            });
            let sets: Vec<Vec<String>> = sets.collect();
            let maps = sc
                .arrows()
                .map(|a| {
                    // a = g@f' : (f'∘g) → f'; acts by G(g) on the fibre over f'
                    let gg = sl.underlying(a);
                    let (d, y) = over(sc.cod(a));
                    let e = sc.dom(a);
                    let e = b.dom(sl.base_arrow(e));
                    phi.fibre(d, y).iter().map(|&el| phi.cert(e).position(g.action(gg).obj(el))).collect()
                })
                .collect();
            vs.push(SetPresheaf::new(sc.clone(), sets, maps)?);
        }
        let mut avs = Vec::new();
        for nu in fc.arrows() {
            let comps = sc
                .objects()
                .map(|o| {
                    let fa = sl.base_arrow(o);
                    let d = b.dom(fa);
                    let moved = f.action(fa).arr(nu);
                    let y = f.at(d).dom(moved);
                    phi.fibre(d, y).iter().map(|&el| phi.cert(d).position(phi.cert(d).transport(el, moved))).collect()
                })
                .collect();
            avs.push(SetNat::new(vs[fc.dom(nu).0].clone(), vs[fc.cod(nu).0].clone(), comps)?);
        }
        values.push(vs);
        arrow_values.push(avs);
    }
    MapToOmega::new(slices.clone(), f.clone(), values, arrow_values)
}

/// A modification between maps into `Ω̃`: one transformation of presheaves
/// per `(c, X)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaModification {
    source: MapToOmega,
    target: MapToOmega,
    components: Vec<Vec<Nat>>,
}

impl OmegaModification {
    pub fn new(source: MapToOmega, target: MapToOmega, components: Vec<Vec<Nat>>) -> Result<Self> {
        let m = OmegaModification { source, target, components };
        m.validate()?;
        Ok(m)
    }

    pub fn identity(z: &MapToOmega) -> Self {
        let components = z.values.iter().map(|vs| vs.iter().map(SetNat::identity).collect()).collect();
        OmegaModification { source: z.clone(), target: z.clone(), components }
    }

    pub fn source(&self) -> &MapToOmega {
        &self.source
    }

    pub fn target(&self) -> &MapToOmega {
        &self.target
    }

    pub fn component(&self, c: Obj, x: Obj) -> &Nat {
        &self.components[c.0][x.0]
    }

    pub fn validate(&self) -> Result<()> {
        let (z, z2) = (&self.source, &self.target);
        if z.source != z2.source || z.slices != z2.slices {
            return Err(Error::InvalidModification("maps into the classifier are not parallel".into()));
        }
        let b = z.base();
        let f = &z.source;
        for c in b.objects() {
            let fc = f.at(c);
            if self.components[c.0].len() != fc.object_count() {
                return Err(Error::InvalidModification("wrong number of components".into()));
            }
            for x in fc.objects() {
                let m = &self.components[c.0][x.0];
                if m.source() != z.value(c, x) || m.target() != z2.value(c, x) {
                    return Err(Error::InvalidModification(format!(
                        "component at (`{}`, `{}`) has the wrong type",
                        b.object_name(c),
                        fc.object_name(x)
                    )));
                }
                m.validate()?;
            }
            for nu in fc.arrows() {
                let (x, x2) = (fc.dom(nu), fc.cod(nu));
                let lhs = self.components[c.0][x2.0].after(z.arrow_value(c, nu))?;
                let rhs = z2.arrow_value(c, nu).after(&self.components[c.0][x.0])?;
                if lhs.components() != rhs.components() {
                    return Err(Error::InvalidModification(format!(
                        "not natural in `{}` at `{}`",
                        fc.arrow_name(nu),
                        b.object_name(c)
                    )));
                }
            }
        }
        for h in b.arrows() {
            let (d, c) = (b.dom(h), b.cod(h));
            for x in f.at(c).objects() {
                let moved = self.components[c.0][x.0].reindex(z.slices.postcompose(h))?;
                if moved.components() != self.components[d.0][f.action(h).obj(x).0].components() {
                    return Err(Error::InvalidModification(format!(
                        "component at `{}` is not stable under reindexing along `{}`",
                        f.at(c).object_name(x),
                        b.arrow_name(h)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_iso(&self) -> bool {
        self.components.iter().flatten().all(SetNat::is_iso)
    }

    /// `self · first`.
    pub fn after(&self, first: &OmegaModification) -> Result<OmegaModification> {
        if first.target != self.source {
            return Err(Error::Mismatch("composing modifications with different middles".into()));
        }
        let components = first
            .components
            .iter()
            .zip(&self.components)
            .map(|(a, b)| a.iter().zip(b).map(|(m, n)| n.after(m)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        Ok(OmegaModification { source: first.source.clone(), target: self.target.clone(), components })
    }
}

/// The morphism `classify(z) → classify(z')` over `F` induced by `α`.
pub fn gamma_mod(alpha: &OmegaModification) -> Result<TwoNat> {
    gamma_between(alpha, &classify(&alpha.source)?, &classify(&alpha.target)?)
}

fn gamma_between(alpha: &OmegaModification, p: &DiscOpfibPre, q: &DiscOpfibPre) -> Result<TwoNat> {
    let z = &alpha.source;
    let b = z.base();
    let mut comps = Vec::new();
    for c in b.objects() {
        let top = z.slices.slice(c).top(b);
        let (g, g2) = (p.total().at(c), q.total().at(c));
        let (pc, qc) = (p.cert(c), q.cert(c));
        let objects: Vec<Obj> = g
            .objects()
            .map(|o| {
                let x = pc.functor().obj(o);
                let t = pc.position(o);
                qc.fibre(x)[alpha.components[c.0][x.0].component(top)[t]]
            })
            .collect();
        let arrows = g.arrows().map(|a| qc.lift(objects[g.dom(a).0], pc.functor().arr(a))).collect();
        comps.push(FinFunctor::new(g.clone(), g2.clone(), objects, arrows)?);
    }
    TwoNat::new(p.total().clone(), q.total().clone(), comps)
}

fn omega_mod_search<V>(z: &MapToOmega, z2: &MapToOmega, iso_only: bool, budget: &mut Budget, mut visit: V) -> Result<()>
where
    V: FnMut(OmegaModification) -> bool,
{
    if z.source != z2.source || z.slices != z2.slices {
        return Err(Error::Mismatch("maps into the classifier are not parallel".into()));
    }
    let b = z.base().clone();
    let f = z.source.clone();
    // one variable per (d, Y): the component at id_d, a function on points
    let mut vars: Vec<(Obj, Obj)> = Vec::new();
    let mut var_of: HashMap<(Obj, Obj), usize> = HashMap::new();
    for d in b.objects() {
        for y in f.at(d).objects() {
            var_of.insert((d, y), vars.len());
            vars.push((d, y));
        }
    }
    let domains: Vec<Vec<Vec<usize>>> =
        vars.iter().map(|&(d, y)| functions(z.points(d, y).len(), z2.points(d, y).len(), iso_only)).collect();
    // binary constraints, attached to the later of their two variables
    #[derive(Clone, Copy)]
    enum Constraint {
        // naturality at the slice arrow g@id_d, relating (d,Y) and (e,F(g)Y)
        Slice { var: usize, other: usize, arrow: Arr },
        // naturality in ν: Y → Y' of F(d)
        Fibre { var: usize, other: usize, nu: Arr },
    }
    let mut at: Vec<Vec<Constraint>> = vec![Vec::new(); vars.len()];
    for (i, &(d, y)) in vars.iter().enumerate() {
        let sd = z.slices.slice(d);
        for &g in b.in_arrows(d) {
            let e = b.dom(g);
            let j = var_of[&(e, f.action(g).obj(y))];
            at[i.max(j)].push(Constraint::Slice { var: i, other: j, arrow: sd.arrow_of(g, b.identity(d)) });
        }
        for &nu in f.at(d).out_arrows(y) {
            let j = var_of[&(d, f.at(d).cod(nu))];
            at[i.max(j)].push(Constraint::Fibre { var: i, other: j, nu });
        }
    }
    let holds = |k: &Constraint, asg: &[usize]| -> bool {
        match *k {
            Constraint::Slice { var, other, arrow } => {
                let (d, y) = vars[var];
                let (zv, zv2) = (z.value(d, y), z2.value(d, y));
                let (a, a2) = (&domains[var][asg[var]], &domains[other][asg[other]]);
                (0..a.len()).all(|t| a2[zv.act(arrow, t)] == zv2.act(arrow, a[t]))
            }
            Constraint::Fibre { var, other, nu } => {
                let (d, _) = vars[var];
                let top = z.slices.slice(d).top(&b);
                let (n, n2) = (z.arrow_value(d, nu).component(top), z2.arrow_value(d, nu).component(top));
                let (a, a2) = (&domains[var][asg[var]], &domains[other][asg[other]]);
                (0..a.len()).all(|t| a2[n[t]] == n2[a[t]])
            }
        }
    };
    solve(
        vars.len(),
        budget,
        |i, _| (0..domains[i].len()).collect(),
        |i, asg| at[i].iter().all(|k| holds(k, asg)),
        |asg| {
            let components = b
                .objects()
                .map(|c| {
                    let sl = z.slices.slice(c);
                    f.at(c)
                        .objects()
                        .map(|x| {
                            let comps = sl
                                .cat()
                                .objects()
                                .map(|o| {
                                    let fa = sl.base_arrow(o);
                                    let v = var_of[&(b.dom(fa), f.action(fa).obj(x))];
                                    domains[v][asg[v]].clone()
                                })
                                .collect();
                            SetNat::new_unchecked(z.value(c, x).clone(), z2.value(c, x).clone(), comps)
                        })
                        .collect()
                })
                .collect();
            visit(OmegaModification { source: z.clone(), target: z2.clone(), components })
        },
    )
}

/// All functions (or bijections) `n → m` as index tables, in lexicographic order.
fn functions(n: usize, m: usize, bijective: bool) -> Vec<Vec<usize>> {
    if bijective && n != m {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut budget = Budget::new(u64::MAX);
    solve(
        n,
        &mut budget,
        |_, _| (0..m).collect(),
        |i, asg| !bijective || !asg[..i].contains(&asg[i]),
        |asg| {
            out.push(asg.to_vec());
            true
        },
    )
    .expect("unbounded");
    out
}

/// Every modification `z ⇒ z'`.
pub fn enumerate_omega_modifications(
    z: &MapToOmega,
    z2: &MapToOmega,
    budget: &mut Budget,
) -> Result<Vec<OmegaModification>> {
    let mut out = Vec::new();
    omega_mod_search(z, z2, false, budget, |m| {
        out.push(m);
        true
    })?;
    Ok(out)
}

/// The first invertible modification `z ⇒ z'`, if any.
pub fn omega_iso(z: &MapToOmega, z2: &MapToOmega, budget: &mut Budget) -> Result<Option<OmegaModification>> {
    let mut out = None;
    omega_mod_search(z, z2, true, budget, |m| {
        out = Some(m);
        false
    })?;
    Ok(out)
}

/// Sizes of both sides of a verified bijection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FfReport {
    pub modifications: usize,
    pub fib_homs: usize,
}

/// Checks that `gamma_mod` is a bijection from modifications `z ⇒ z'` onto
/// morphisms `classify(z) → classify(z')` over `F`.
pub fn ff_check(z: &MapToOmega, z2: &MapToOmega, budget: &mut Budget) -> Result<FfReport> {
    let (p, q) = (classify(z)?, classify(z2)?);
    let mods = enumerate_omega_modifications(z, z2, budget)?;
    let homs = fib_hom(&p, &q, budget)?;
    let mut seen: HashMap<Vec<Vec<Obj>>, usize> = HashMap::new();
    for (i, m) in mods.iter().enumerate() {
        m.validate()?;
        let t = gamma_between(m, &p, &q)?;
        let key: Vec<Vec<Obj>> = t.components().iter().map(|c| c.object_map().to_vec()).collect();
        if let Some(j) = seen.insert(key, i) {
            return Err(Error::NotInjective(format!("modifications #{j} and #{i} induce the same morphism")));
        }
    }
    for (k, t) in homs.iter().enumerate() {
        let key: Vec<Vec<Obj>> = t.components().iter().map(|c| c.object_map().to_vec()).collect();
        if !seen.contains_key(&key) {
            return Err(Error::NotSurjective(format!("morphism #{k} over F is not induced by a modification")));
        }
    }
    if seen.len() != homs.len() {
        return Err(Error::Mismatch("an induced morphism is missing from the enumeration over F".into()));
    }
    Ok(FfReport { modifications: mods.len(), fib_homs: homs.len() })
}

/// `classify(char(φ)) ≅ φ` in `Fib(F)`.
pub fn roundtrip_fibration(phi: &DiscOpfibPre, slices: &Arc<SliceFamily>, budget: &mut Budget) -> Result<TwoNat> {
    let back = classify(&char(phi, slices)?)?;
    fib_iso(&back, phi, budget)?.ok_or_else(|| Error::NoIsoFound("classify(char(φ)) is not isomorphic to φ".into()))
}

/// `char(classify(z)) ≅ z` as maps into `Ω̃`.
pub fn roundtrip_map(z: &MapToOmega, budget: &mut Budget) -> Result<OmegaModification> {
    let back = char(&classify(z)?, z.slices())?;
    omega_iso(&back, z, budget)?.ok_or_else(|| Error::NoIsoFound("char(classify(z)) is not isomorphic to z".into()))
}

/// The indexed Grothendieck construction: `Z` on `C/c` becomes a discrete
/// opfibration over `y(c)` with objects `(f,x)` over `f`.
pub fn j_forward(slices: &Arc<SliceFamily>, c: Obj, z: &SetPresheaf) -> Result<DiscOpfibPre> {
    let b = slices.base().clone();
    let sl = slices.slice(c);
    if z.base() != sl.cat() {
        return Err(Error::Mismatch("presheaf is not on the slice over the given object".into()));
    }
    let y = representable(&b, c);
    let mut cats = Vec::new();
    let mut keys: Vec<BTreeMap<(Arr, usize), Obj>> = Vec::new();
    for d in b.objects() {
        let mut names = Vec::new();
        let mut pending = Vec::new();
        for f in b.hom(d, c) {
            for (x, label) in z.set(sl.object_of(f)).iter().enumerate() {
                let name = format!("({},{})", b.arrow_name(f), label);
                pending.push(((f, x), name.clone()));
                names.push(name);
            }
        }
        let cat = Arc::new(FinCat::discrete(&names));
        keys.push(pending.into_iter().map(|(k, n)| (k, cat.object(&n).expect("element"))).collect());
        cats.push(cat);
    }
    let mut actions = Vec::new();
    for g in b.arrows() {
        let (e, d) = (b.dom(g), b.cod(g));
        let mut objects = vec![Obj(0); cats[d.0].object_count()];
        for (&(f, x), &o) in &keys[d.0] {
            let x2 = z.act(sl.arrow_of(g, f), x);
            objects[o.0] = keys[e.0][&(b.comp(f, g), x2)];
        }
        let arrows = objects.iter().map(|&o| cats[e.0].identity(o)).collect();
        actions.push(FinFunctor::new(cats[d.0].clone(), cats[e.0].clone(), objects, arrows)?);
    }
    let h = CatPresheaf::new(b.clone(), cats.clone(), actions)?;
    let comps = b
        .objects()
        .map(|d| {
            let mut objects = vec![Obj(0); cats[d.0].object_count()];
            for (&(f, _), &o) in &keys[d.0] {
                objects[o.0] = y.at(d).object(b.arrow_name(f))?;
            }
            let arrows = objects.iter().map(|&o| y.at(d).identity(o)).collect();
            FinFunctor::new(cats[d.0].clone(), y.at(d).clone(), objects, arrows)
        })
        .collect::<Result<_>>()?;
    certify_dopf_pre(&TwoNat::new(h, y, comps)?)
}

/// `f ↦ (ψ_d)_f`, `g@f ↦ H(g)`, for `ψ` over `y(c)`.
pub fn j_inverse(slices: &Arc<SliceFamily>, c: Obj, psi: &DiscOpfibPre) -> Result<SetPresheaf> {
    let b = slices.base().clone();
    let y = representable(&b, c);
    if psi.over() != &y {
        return Err(Error::Mismatch("opfibration is not over the representable".into()));
    }
    let sl = slices.slice(c);
    let h = psi.total();
    let over = |o: Obj| -> (Obj, Obj) {
        let f = sl.base_arrow(o);
        let d = b.dom(f);
        (d, y.at(d).object(b.arrow_name(f)).expect("hom element"))
    };
    let sets = sl
        .cat()
        .objects()
        .map(|o| {
            let (d, x) = over(o);
            psi.fibre(d, x).iter().map(|&e| h.at(d).object_name(e).to_string()).collect()
        })
        .collect();
    let maps = sl
        .cat()
        .arrows()
        .map(|a| {
            let g = sl.underlying(a);
            let (d, x) = over(sl.cat().cod(a));
            let e = b.dom(g);
            psi.fibre(d, x).iter().map(|&el| psi.cert(e).position(h.action(g).obj(el))).collect()
        })
        .collect();
    SetPresheaf::new(sl.cat().clone(), sets, maps)
}

/// A finite full sub-2-functor of `Ω̃` through which `z` factors, together
/// with the factorization and the point `Δ1`. Objects of the fragment at `c`
/// are the distinct values of `z` at `c` and `Δ1`; arrows are all
/// transformations between them.
pub struct OmegaFragment {
    pub fragment: CatPresheaf,
    pub point: TwoNat,
    pub map: TwoNat,
}

pub fn omega_fragment(z: &MapToOmega, budget: &mut Budget) -> Result<OmegaFragment> {
    let b = z.base().clone();
    let f = &z.source;
    let mut members: Vec<Vec<SetPresheaf>> = Vec::new();
    let mut cats = Vec::new();
    let mut nat_index: Vec<HashMap<(usize, usize, Vec<Vec<usize>>), usize>> = Vec::new();
    let mut raw_names: Vec<Vec<String>> = Vec::new();
    for c in b.objects() {
        let mut ms: Vec<SetPresheaf> = vec![SetPresheaf::terminal(z.slices.slice(c).cat().clone())];
        for v in &z.values[c.0] {
            if !ms.contains(v) {
                ms.push(v.clone());
            }
        }
        let mut raw = RawCat::default();
        let mut idx = HashMap::new();
        let mut names = Vec::new();
        for (i, _) in ms.iter().enumerate() {
            raw.objects.push(format!("P{i}"));
        }
        let mut by_pair: Vec<Vec<Vec<(Vec<Vec<usize>>, usize)>>> = vec![vec![Vec::new(); ms.len()]; ms.len()];
        for (i, s) in ms.iter().enumerate() {
            for (j, t) in ms.iter().enumerate() {
                for (k, n) in enumerate_set_nats(s, t, budget)?.into_iter().enumerate() {
                    let name = format!("P{i}.P{j}.{k}");
                    let a = raw.arrows.len();
                    raw.arrows.push((name.clone(), i, j));
                    names.push(name);
                    idx.insert((i, j, n.components().to_vec()), a);
                    by_pair[i][j].push((n.components().to_vec(), a));
                }
            }
        }
        for (i, s) in ms.iter().enumerate() {
            let id: Vec<Vec<usize>> = SetNat::identity(s).components().to_vec();
            raw.identities.push(idx[&(i, i, id)]);
        }
        for i in 0..ms.len() {
            for j in 0..ms.len() {
                for k in 0..ms.len() {
                    for (n1, a1) in &by_pair[i][j] {
                        for (n2, a2) in &by_pair[j][k] {
                            let comp: Vec<Vec<usize>> =
                                n1.iter().zip(n2).map(|(x, y)| x.iter().map(|&v| y[v]).collect()).collect();
                            raw.compose.push(((*a2, *a1), idx[&(i, k, comp)]));
                        }
                    }
                }
            }
        }
        members.push(ms);
        cats.push(Arc::new(raw.into_cat()));
        nat_index.push(idx);
        raw_names.push(names);
    }
    let obj_of = |c: Obj, p: &SetPresheaf| -> Result<Obj> {
        let i = members[c.0]
            .iter()
            .position(|m| m == p)
            .ok_or_else(|| Error::Mismatch("value outside the fragment".into()))?;
        cats[c.0].object(&format!("P{i}"))
    };
    let arr_of = |c: Obj, n: &Nat| -> Result<Arr> {
        let i = members[c.0].iter().position(|m| m == n.source()).expect("member");
        let j = members[c.0].iter().position(|m| m == n.target()).expect("member");
        let a = nat_index[c.0][&(i, j, n.components().to_vec())];
        cats[c.0].arrow(&raw_names[c.0][a])
    };
    let mut actions = Vec::new();
    for h in b.arrows() {
        let (d, c) = (b.dom(h), b.cod(h));
        let post = z.slices.postcompose(h);
        let objects = members[c.0].iter().map(|p| obj_of(d, &p.reindex(post)?)).collect::<Result<Vec<_>>>()?;
        let mut arrows = vec![Arr(0); cats[c.0].arrow_count()];
        for (&(i, j, ref comps), &a) in &nat_index[c.0] {
            let n = SetNat::new_unchecked(members[c.0][i].clone(), members[c.0][j].clone(), comps.clone());
            let t = cats[c.0].arrow(&raw_names[c.0][a])?;
            arrows[t.0] = arr_of(d, &n.reindex(post)?)?;
        }
        actions.push(FinFunctor::new(cats[c.0].clone(), cats[d.0].clone(), objects, arrows)?);
    }
    let fragment = CatPresheaf::new(b.clone(), cats.clone(), actions)?;
    let one = CatPresheaf::terminal(b.clone());
    let point = TwoNat::new(
        one.clone(),
        fragment.clone(),
        b.objects()
            .map(|c| {
                let o = obj_of(c, &members[c.0][0])?;
                Ok(FinFunctor::pick(cats[c.0].clone(), o))
            })
            .collect::<Result<_>>()?,
    )?;
    let map = TwoNat::new(
        f.clone(),
        fragment.clone(),
        b.objects()
            .map(|c| {
                let fc = f.at(c);
                let objects = fc.objects().map(|x| obj_of(c, &z.values[c.0][x.0])).collect::<Result<_>>()?;
                let arrows = fc.arrows().map(|nu| arr_of(c, &z.arrow_values[c.0][nu.0])).collect::<Result<_>>()?;
                FinFunctor::new(fc.clone(), cats[c.0].clone(), objects, arrows)
            })
            .collect::<Result<_>>()?,
    )?;
    Ok(OmegaFragment { fragment, point, map })
}

/// The generic comma from `Δ1` into `z`, computed inside a finite fragment
/// of `Ω̃`, with its certified projection to `F`.
pub fn classify_by_comma(z: &MapToOmega, budget: &mut Budget) -> Result<DiscOpfibPre> {
    let frag = omega_fragment(z, budget)?;
    let k = pointwise_comma(&frag.point, &frag.map)?;
    certify_dopf_pre(&k.right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat2::{fiber_functor, iso_over};
    use crate::fincat::set_iso;
    use crate::search::DEFAULT_BOUND;

    fn budget() -> Budget {
        Budget::new(DEFAULT_BOUND)
    }

    fn walking_arrow() -> Arc<FinCat> {
        Arc::new(FinCat::free(&["a", "b"], &[("u", "a", "b")]).unwrap())
    }

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    /// On the slice over b: Z(id_b) = {0,1}, Z(u) = {*}.
    fn two_points_over_b(slices: &Arc<SliceFamily>) -> SetPresheaf {
        let w = slices.base();
        let b = w.object("b").unwrap();
        let sl = slices.slice(b);
        SetPresheaf::from_names(
            sl.cat().clone(),
            &[("id_b".into(), s(&["0", "1"])), ("u".into(), s(&["*"]))],
            &[("u@id_b".into(), vec![("0".into(), "*".into()), ("1".into(), "*".into())])],
        )
        .unwrap()
    }

    #[test]
    fn point_classifies_identity() {
        let w = walking_arrow();
        let slices = SliceFamily::new(w.clone());
        let f = representable(&w, w.object("b").unwrap());
        let z = omega_point(&slices, &f);
        z.validate().unwrap();
        let p = classify(&z).unwrap();
        assert_eq!(p.max_fibre(), 1);
        assert!(fib_iso(&p, &DiscOpfibPre::identity(&f), &mut budget()).unwrap().is_some());
    }

    #[test]
    fn fibre_formula_on_walking_arrow() {
        let w = walking_arrow();
        let slices = SliceFamily::new(w.clone());
        let b = w.object("b").unwrap();
        let z = two_points_over_b(&slices);
        let m = from_representable(&slices, b, &z).unwrap();
        let p = classify(&m).unwrap();
        let x = m.source().at(b).object("id_b").unwrap();
        assert_eq!(p.fibre(b, x).len(), 2);
        // independent count: transformations Δ1 ⇒ Z
        let one = SetPresheaf::terminal(z.base().clone());
        assert_eq!(enumerate_set_nats(&one, &z, &mut budget()).unwrap().len(), 2);
    }

    #[test]
    fn classify_agrees_with_generic_comma() {
        let w = walking_arrow();
        let slices = SliceFamily::new(w.clone());
        let m = from_representable(&slices, w.object("b").unwrap(), &two_points_over_b(&slices)).unwrap();
        let direct = classify(&m).unwrap();
        let generic = classify_by_comma(&m, &mut budget()).unwrap();
        assert!(fib_iso(&generic, &direct, &mut budget()).unwrap().is_some());
    }

    #[test]
    fn char_round_trips() {
        let w = walking_arrow();
        let slices = SliceFamily::new(w.clone());
        let m = from_representable(&slices, w.object("b").unwrap(), &two_points_over_b(&slices)).unwrap();
        let p = classify(&m).unwrap();
        roundtrip_fibration(&p, &slices, &mut budget()).unwrap();
        roundtrip_map(&m, &mut budget()).unwrap();
        let r = ff_check(&m, &m, &mut budget()).unwrap();
        assert_eq!(r.modifications, r.fib_homs);
    }

    #[test]
    fn j_round_trip() {
        let w = walking_arrow();
        let slices = SliceFamily::new(w.clone());
        let b = w.object("b").unwrap();
        let z = two_points_over_b(&slices);
        let psi = j_forward(&slices, b, &z).unwrap();
        let back = j_inverse(&slices, b, &psi).unwrap();
        assert!(set_iso(&back, &z, &mut budget()).unwrap().is_some());
        let one = SetPresheaf::terminal(z.base().clone());
        let id = j_forward(&slices, b, &one).unwrap();
        assert!(fib_iso(&id, &DiscOpfibPre::identity(&representable(&w, b)), &mut budget()).unwrap().is_some());
    }

    #[test]
    fn point_site_reduces_to_elements() {
        let pt = Arc::new(FinCat::point());
        let slices = SliceFamily::new(pt.clone());
        let walking = Arc::new(FinCat::free(&["x", "y"], &[("s", "x", "y")]).unwrap());
        let f =
            CatPresheaf::new(pt.clone(), vec![walking.clone()], vec![FinFunctor::identity(walking.clone())]).unwrap();
        let zf = FinSetFunctor::from_names(
            walking,
            &[("x".into(), s(&["0", "1"])), ("y".into(), s(&["0"]))],
            &[("s".into(), vec![("0".into(), "0".into()), ("1".into(), "0".into())])],
        )
        .unwrap();
        let el = crate::cat2::elements_of(&zf).unwrap();
        let phi = certify_dopf_pre(
            &TwoNat::new(
                CatPresheaf::new(pt.clone(), vec![el.total().clone()], vec![FinFunctor::identity(el.total().clone())])
                    .unwrap(),
                f.clone(),
                vec![el.functor().clone()],
            )
            .unwrap(),
        )
        .unwrap();
        let z = char(&phi, &slices).unwrap();
        let pf = point_functor(&z, Obj(0)).unwrap();
        assert!(set_iso(&pf, &fiber_functor(&el), &mut budget()).unwrap().is_some());
        let back = classify(&z).unwrap();
        assert!(iso_over(back.cert(Obj(0)), &el, &mut budget()).unwrap().is_some());
    }
}
