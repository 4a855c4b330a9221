//! Topos structure on sheaves: products, pullbacks, exponentials, the
//! subobject classifier, and the separation of arrows by subterminals.
//!
//! Every construction is checked against its universal property by
//! enumerating candidate mediating transformations, asking for existence and
//! uniqueness.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Limit, Result};
use crate::heyting::{Elem, ElemSet, HeytingAlgebra};
use crate::report::CheckResult;
use crate::sheaf::matching::{is_sheaf, sheaf_witness};
use crate::sheaf::presheaf::{homs, homs_filtered, nat_components, NatTransform, Presheaf};
use crate::site::{pullback_sieve, Sieve, Topology};

/// Named objects to test against.
pub type Pool = Vec<(String, Arc<Presheaf>)>;

/// An object with two legs, remembering which pair each section is.
#[derive(Clone, Debug)]
pub struct PresheafCone {
    pub object: Arc<Presheaf>,
    pub first: NatTransform,
    pub second: NatTransform,
    pairs: Vec<Vec<(usize, usize)>>,
    lookup: Vec<HashMap<(usize, usize), usize>>,
}

impl PresheafCone {
    pub fn pair(&self, p: Elem, i: usize) -> (usize, usize) {
        self.pairs[p.index()][i]
    }

    pub fn index_of(&self, p: Elem, x: usize, y: usize) -> Option<usize> {
        self.lookup[p.index()].get(&(x, y)).copied()
    }

    /// Transformations `W -> cone` whose composites with the legs are `u`
    /// and `v`.
    pub fn mediations(&self, u: &NatTransform, v: &NatTransform, limit: Limit) -> Result<Vec<NatTransform>> {
        homs_filtered(
            &u.source,
            &self.object,
            |p, w, c| self.pairs[p.index()][c] == (u.apply(p, w), v.apply(p, w)),
            limit,
        )
    }

    /// `<f, g>: W -> cone`, when every pair is present.
    pub fn tuple(&self, f: &NatTransform, g: &NatTransform) -> Option<NatTransform> {
        let h = f.source.algebra();
        let mut components = Vec::with_capacity(h.size());
        for p in h.elements() {
            let mut c = Vec::with_capacity(f.source.count(p));
            for w in 0..f.source.count(p) {
                c.push(self.index_of(p, f.apply(p, w), g.apply(p, w))?);
            }
            components.push(c);
        }
        Some(NatTransform {
            source: f.source.clone(),
            target: self.object.clone(),
            components,
        })
    }
}

fn sub_product(a: &Arc<Presheaf>, b: &Arc<Presheaf>, keep: impl Fn(Elem, usize, usize) -> bool) -> Result<PresheafCone> {
    let h = a.algebra().clone();
    if &h != b.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let pairs: Vec<Vec<(usize, usize)>> = h
        .elements()
        .map(|p| {
            (0..a.count(p))
                .flat_map(|x| (0..b.count(p)).map(move |y| (x, y)))
                .filter(|&(x, y)| keep(p, x, y))
                .collect()
        })
        .collect();
    let lookup: Vec<HashMap<(usize, usize), usize>> = pairs
        .iter()
        .map(|ps| ps.iter().enumerate().map(|(i, &xy)| (xy, i)).collect())
        .collect();
    let sections = h
        .elements()
        .map(|p| {
            pairs[p.index()]
                .iter()
                .map(|&(x, y)| format!("({},{})", a.sections(p)[x], b.sections(p)[y]))
                .collect()
        })
        .collect();
    let object = Arc::new(Presheaf::from_fn(h.clone(), sections, |p, q, i| {
        let (x, y) = pairs[p.index()][i];
        let key = (a.restrict(p, q, x), b.restrict(p, q, y));
        lookup[q.index()][&key]
    })?);
    let leg = |side: usize, target: &Arc<Presheaf>| NatTransform {
        source: object.clone(),
        target: target.clone(),
        components: pairs
            .iter()
            .map(|ps| ps.iter().map(|&(x, y)| if side == 0 { x } else { y }).collect())
            .collect(),
    };
    Ok(PresheafCone {
        first: leg(0, a),
        second: leg(1, b),
        object,
        pairs,
        lookup,
    })
}

/// Sectionwise product.
pub fn product(a: &Arc<Presheaf>, b: &Arc<Presheaf>) -> Result<PresheafCone> {
    sub_product(a, b, |_, _, _| true)
}

/// Sectionwise pullback `{(x, y) | f x = g y}`.
pub fn pullback(f: &NatTransform, g: &NatTransform) -> Result<PresheafCone> {
    if f.target != g.target {
        return Err(Error::Input("pullback needs a shared codomain".into()));
    }
    sub_product(&f.source, &g.source, |p, x, y| f.apply(p, x) == g.apply(p, y))
}

/// `Y^X` with `Y^X(p)` the natural transformations `h_p x X -> Y`, stored
/// as their components on `down(p)`.
#[derive(Clone, Debug)]
pub struct Exponential {
    pub base: Arc<Presheaf>,
    pub target: Arc<Presheaf>,
    pub object: Arc<Presheaf>,
    /// `object x base` with its projections.
    pub product: PresheafCone,
    /// Evaluation `object x base -> target`.
    pub eval: NatTransform,
    families: Vec<Vec<Vec<Vec<usize>>>>,
    index: Vec<HashMap<Vec<Vec<usize>>, usize>>,
}

fn truncate(h: &HeytingAlgebra, family: &[Vec<usize>], q: Elem) -> Vec<Vec<usize>> {
    let below = h.down(q);
    h.elements()
        .map(|r| if below.contains(r) { family[r.index()].clone() } else { Vec::new() })
        .collect()
}

pub fn exponential(x: &Arc<Presheaf>, y: &Arc<Presheaf>, limit: Limit) -> Result<Exponential> {
    let h = x.algebra().clone();
    if &h != y.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let mut families = Vec::with_capacity(h.size());
    for p in h.elements() {
        let mut fams = nat_components(x, y, h.down(p), |_, _, _| true, limit)?;
        fams.sort();
        families.push(fams);
    }
    let index: Vec<HashMap<Vec<Vec<usize>>, usize>> = families
        .iter()
        .map(|fs| fs.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect())
        .collect();
    let sections = h
        .elements()
        .map(|p| (0..families[p.index()].len()).map(|i| format!("e{i}@{}", h.name(p))).collect())
        .collect();
    let object = Arc::new(Presheaf::from_fn(h.clone(), sections, |p, q, i| {
        index[q.index()][&truncate(&h, &families[p.index()][i], q)]
    })?);
    let product = product(&object, x)?;
    let eval = NatTransform {
        source: product.object.clone(),
        target: y.clone(),
        components: h
            .elements()
            .map(|p| {
                product.pairs[p.index()]
                    .iter()
                    .map(|&(e, xi)| families[p.index()][e][p.index()][xi])
                    .collect()
            })
            .collect(),
    };
    Ok(Exponential {
        base: x.clone(),
        target: y.clone(),
        object,
        product,
        eval,
        families,
        index,
    })
}

impl Exponential {
    /// The transpose `Z -> Y^X` of `k: Z x X -> Y`, where `zx` is the
    /// product cone `Z x X`.
    pub fn transpose(&self, zx: &PresheafCone, k: &NatTransform) -> Result<NatTransform> {
        let z = &zx.first.target;
        let h = z.algebra().clone();
        let mut components = Vec::with_capacity(h.size());
        for p in h.elements() {
            let mut comp = Vec::with_capacity(z.count(p));
            for zi in 0..z.count(p) {
                let family: Vec<Vec<usize>> = h
                    .elements()
                    .map(|r| {
                        if !h.leq(r, p) {
                            return Vec::new();
                        }
                        let zr = z.restrict(p, r, zi);
                        (0..self.base.count(r))
                            .map(|xi| k.apply(r, zx.index_of(r, zr, xi).expect("product has every pair")))
                            .collect()
                    })
                    .collect();
                let i = self.index[p.index()].get(&family).copied().ok_or_else(|| {
                    Error::InvalidPresheaf("transpose is not a natural family".into())
                })?;
                comp.push(i);
            }
            components.push(comp);
        }
        NatTransform::new(z.clone(), self.object.clone(), components)
    }

    /// `eval . (l x id)` for `l: Z -> Y^X`.
    pub fn uncurry(&self, zx: &PresheafCone, l: &NatTransform) -> NatTransform {
        let h = l.source.algebra();
        NatTransform {
            source: zx.object.clone(),
            target: self.target.clone(),
            components: h
                .elements()
                .map(|p| {
                    zx.pairs[p.index()]
                        .iter()
                        .map(|&(zi, xi)| self.families[p.index()][l.apply(p, zi)][p.index()][xi])
                        .collect()
                })
                .collect(),
        }
    }

    /// `v^X: Y^X -> Y'^X`, postcomposition with `v: Y -> Y'`.
    pub fn postcompose(&self, v: &NatTransform, other: &Exponential) -> NatTransform {
        let h = self.object.algebra().clone();
        NatTransform {
            source: self.object.clone(),
            target: other.object.clone(),
            components: h
                .elements()
                .map(|p| {
                    self.families[p.index()]
                        .iter()
                        .map(|fam| {
                            let moved: Vec<Vec<usize>> = h
                                .elements()
                                .map(|r| fam[r.index()].iter().map(|&y| v.apply(r, y)).collect())
                                .collect();
                            other.index[p.index()][&moved]
                        })
                        .collect()
                })
                .collect(),
        }
    }

    /// Components on `down(p)` of the `i`-th section at `p`.
    pub fn family(&self, p: Elem, i: usize) -> &[Vec<usize>] {
        &self.families[p.index()][i]
    }
}

/// `f x id: A x X -> B x X`.
fn times_id(f: &NatTransform, ax: &PresheafCone, bx: &PresheafCone) -> NatTransform {
    let h = f.source.algebra();
    NatTransform {
        source: ax.object.clone(),
        target: bx.object.clone(),
        components: h
            .elements()
            .map(|p| {
                ax.pairs[p.index()]
                    .iter()
                    .map(|&(a, x)| bx.index_of(p, f.apply(p, a), x).expect("product has every pair"))
                    .collect()
            })
            .collect(),
    }
}

/// The presheaf of closed sieves with `true: 1 -> Omega`.
#[derive(Clone, Debug)]
pub struct Omega {
    pub object: Arc<Presheaf>,
    pub truth: NatTransform,
    sieves: Vec<Vec<Sieve>>,
}

/// `down(s)` when principal, otherwise the member list.
pub fn sieve_label(h: &HeytingAlgebra, s: &Sieve) -> String {
    let env = h.envelope(s.members);
    if s.members == h.down(env) && s.members.contains(env) {
        format!("down({})", h.name(env))
    } else {
        format!("{{{}}}", h.names_of(s.members).join(","))
    }
}

pub fn omega(j: &Topology) -> Omega {
    let h = j.algebra().clone();
    let sieves: Vec<Vec<Sieve>> = h.elements().map(|p| j.closed_sieves(p)).collect();
    let sections = sieves
        .iter()
        .map(|ss| ss.iter().map(|s| sieve_label(&h, s)).collect())
        .collect();
    let object = Arc::new(
        Presheaf::from_fn(h.clone(), sections, |p, q, i| {
            let pulled = pullback_sieve(&h, &sieves[p.index()][i], q).expect("q <= p");
            sieves[q.index()].iter().position(|s| *s == pulled).expect("closed sieves pull back to closed sieves")
        })
        .expect("closed sieves form a presheaf"),
    );
    let one = Arc::new(Presheaf::terminal(&h));
    let truth = NatTransform {
        source: one,
        target: object.clone(),
        components: h
            .elements()
            .map(|p| {
                let top = Sieve::maximal(&h, p);
                vec![sieves[p.index()].iter().position(|s| *s == top).expect("maximal sieve is closed")]
            })
            .collect(),
    };
    Omega { object, truth, sieves }
}

impl Omega {
    pub fn sieve(&self, p: Elem, i: usize) -> Sieve {
        self.sieves[p.index()][i]
    }

    pub fn index_of(&self, s: &Sieve) -> Option<usize> {
        self.sieves[s.at.index()].iter().position(|t| t == s)
    }

    fn is_true(&self, p: Elem, i: usize) -> bool {
        self.truth.apply(p, 0) == i
    }
}

/// The classifying map of a subobject and the uniqueness count.
#[derive(Clone, Debug)]
pub struct Classification {
    pub phi: NatTransform,
    /// `phi` pulls `true` back to exactly the subobject.
    pub pullback_holds: bool,
    /// Number of `theta: A -> Omega` pulling `true` back to the subobject.
    pub classifying_maps: usize,
}

impl Classification {
    pub fn is_unique(&self) -> bool {
        self.pullback_holds && self.classifying_maps == 1
    }
}

/// `phi_p(x) = {q <= p | x|q in B(q)}`.
pub fn classify(
    om: &Omega,
    j: &Topology,
    parent: &Arc<Presheaf>,
    keep: &[Vec<bool>],
    limit: Limit,
) -> Result<Classification> {
    let h = parent.algebra().clone();
    if let Some(w) = sheaf_witness(parent, j) {
        return Err(Error::NotASheaf(w.describe(parent)));
    }
    let (sub, _) = parent.subpresheaf(keep)?;
    if let Some(w) = sheaf_witness(&sub, j) {
        return Err(Error::NotSubobject(format!("the subpresheaf is not a sheaf: {}", w.describe(&sub))));
    }
    let mut components = Vec::with_capacity(h.size());
    for p in h.elements() {
        let mut comp = Vec::with_capacity(parent.count(p));
        for x in 0..parent.count(p) {
            let members: ElemSet = h
                .down(p)
                .iter()
                .filter(|&q| keep[q.index()][parent.restrict(p, q, x)])
                .collect();
            let s = Sieve { at: p, members };
            let i = om.index_of(&s).ok_or_else(|| {
                Error::NotSubobject(format!("characteristic sieve {} is not closed", s.describe(&h)))
            })?;
            comp.push(i);
        }
        components.push(comp);
    }
    let phi = NatTransform::new(parent.clone(), om.object.clone(), components)?;
    let pulls_back = |t: &NatTransform| {
        h.elements()
            .all(|p| (0..parent.count(p)).all(|x| om.is_true(p, t.apply(p, x)) == keep[p.index()][x]))
    };
    let pullback_holds = pulls_back(&phi);
    let classifying_maps = homs(parent, &om.object, limit)?.iter().filter(|t| pulls_back(t)).count();
    Ok(Classification {
        phi,
        pullback_holds,
        classifying_maps,
    })
}

/// Restriction-closed section subsets that are sheaves.
pub fn subobjects(parent: &Arc<Presheaf>, j: &Topology, limit: Limit) -> Result<Vec<Vec<Vec<bool>>>> {
    let h = parent.algebra().clone();
    let slots: Vec<(Elem, usize)> = h
        .elements()
        .flat_map(|p| (0..parent.count(p)).map(move |x| (p, x)))
        .collect();
    limit.check("subobject enumeration", crate::error::pow_saturating(2, slots.len()))?;
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << slots.len()) {
        let mut keep: Vec<Vec<bool>> = h.elements().map(|p| vec![false; parent.count(p)]).collect();
        for (k, &(p, x)) in slots.iter().enumerate() {
            keep[p.index()][x] = mask >> k & 1 == 1;
        }
        if let Ok((sub, _)) = parent.subpresheaf(&keep) {
            if is_sheaf(&sub, j) {
                out.push(keep);
            }
        }
    }
    Ok(out)
}

fn nat_name(t: &NatTransform) -> String {
    let h = t.source.algebra();
    let parts: Vec<String> = h
        .elements()
        .flat_map(|p| {
            (0..t.source.count(p)).map(move |x| {
                format!("{}->{}", t.source.sections(p)[x], t.target.sections(p)[t.apply(p, x)])
            })
        })
        .collect();
    format!("{{{}}}", parts.join(" "))
}

fn product_witness(cone: &PresheafCone, pool: &Pool, limit: Limit) -> Result<Option<String>> {
    for (name, w) in pool {
        for u in homs(w, &cone.first.target, limit)? {
            for v in homs(w, &cone.second.target, limit)? {
                let n = cone.mediations(&u, &v, limit)?.len();
                if n != 1 {
                    return Ok(Some(format!(
                        "from {name}: {n} mediating maps for {} and {}",
                        nat_name(&u),
                        nat_name(&v)
                    )));
                }
            }
        }
    }
    Ok(None)
}

fn pullback_witness(cone: &PresheafCone, f: &NatTransform, g: &NatTransform, pool: &Pool, limit: Limit) -> Result<Option<String>> {
    let h = f.source.algebra().clone();
    for (name, w) in pool {
        for u in homs(w, &f.source, limit)? {
            for v in homs(w, &g.source, limit)? {
                let commutes = h.elements().all(|p| {
                    (0..w.count(p)).all(|x| f.apply(p, u.apply(p, x)) == g.apply(p, v.apply(p, x)))
                });
                let n = cone.mediations(&u, &v, limit)?.len();
                if n != usize::from(commutes) {
                    return Ok(Some(format!(
                        "from {name}: {n} mediating maps for {} and {} (commuting: {commutes})",
                        nat_name(&u),
                        nat_name(&v)
                    )));
                }
            }
        }
    }
    Ok(None)
}

/// Adjunction `Hom(Z x X, Y) = Hom(Z, Y^X)` for every `Z` in `pool`:
/// cardinalities, the counit equation, injectivity of the transpose and
/// naturality in `Z` and in `Y` (against `others`, the exponentials `Y'^X`
/// for every `Y'` in the pool).
pub fn adjunction_witness(
    e: &Exponential,
    pool: &Pool,
    others: &[(String, Exponential)],
    limit: Limit,
) -> Result<Option<String>> {
    let mut hom_cache: Vec<(PresheafCone, Vec<NatTransform>)> = Vec::with_capacity(pool.len());
    for (name, z) in pool {
        let zx = product(z, &e.base)?;
        let left = homs(&zx.object, &e.target, limit)?;
        let right = homs(z, &e.object, limit)?;
        if left.len() != right.len() {
            return Ok(Some(format!(
                "Z = {name}: |Hom(Z x X, Y)| = {} but |Hom(Z, Y^X)| = {}",
                left.len(),
                right.len()
            )));
        }
        let mut images = Vec::with_capacity(left.len());
        for k in &left {
            let l = e.transpose(&zx, k)?;
            if e.uncurry(&zx, &l) != *k {
                return Ok(Some(format!("Z = {name}: eval . (transpose k x id) != k for k = {}", nat_name(k))));
            }
            images.push(l.components);
        }
        images.sort();
        images.dedup();
        if images.len() != left.len() {
            return Ok(Some(format!("Z = {name}: transpose is not injective")));
        }
        hom_cache.push((zx, left));
    }
    for (zi, (zname, z)) in pool.iter().enumerate() {
        let (zx, ks) = &hom_cache[zi];
        for (wi, (wname, w)) in pool.iter().enumerate() {
            let (wx, _) = &hom_cache[wi];
            for u in homs(w, z, limit)? {
                let ux = times_id(&u, wx, zx);
                for k in ks {
                    let lhs = e.transpose(wx, &ux.then(k))?;
                    let rhs = u.then(&e.transpose(zx, k)?);
                    if lhs != rhs {
                        return Ok(Some(format!(
                            "naturality in Z fails for u: {wname} -> {zname} = {}",
                            nat_name(&u)
                        )));
                    }
                }
            }
        }
        for (yname, other) in others {
            for v in homs(&e.target, &other.target, limit)? {
                let vx = e.postcompose(&v, other);
                for k in ks {
                    let lhs = other.transpose(zx, &k.then(&v))?;
                    let rhs = e.transpose(zx, k)?.then(&vx);
                    if lhs != rhs {
                        return Ok(Some(format!(
                            "naturality in Y fails for v: Y -> {yname} = {} at Z = {zname}",
                            nat_name(&v)
                        )));
                    }
                }
            }
        }
    }
    Ok(None)
}

pub fn omega_witness(om: &Omega, j: &Topology) -> Option<String> {
    let h = j.algebra();
    if let Some(w) = sheaf_witness(&om.object, j) {
        return Some(format!("Omega is not a sheaf: {}", w.describe(&om.object)));
    }
    for p in h.elements() {
        let got: Vec<ElemSet> = om.sieves[p.index()].iter().map(|s| s.members).collect();
        let mut want: Vec<ElemSet> = h.down(p).iter().map(|s| h.down(s)).collect();
        want.sort();
        if got != want {
            return Some(format!("closed sieves at {} are not the principal ones", h.name(p)));
        }
    }
    if !om.truth.is_natural() {
        return Some("true is not natural".into());
    }
    None
}

pub fn classifier_witness(om: &Omega, j: &Topology, a: &Arc<Presheaf>, limit: Limit) -> Result<Option<String>> {
    let subs = subobjects(a, j, limit)?;
    let arrows = homs(a, &om.object, limit)?.len();
    if subs.len() != arrows {
        return Ok(Some(format!("{} subobjects but {arrows} maps into Omega", subs.len())));
    }
    let mut phis = Vec::with_capacity(subs.len());
    for keep in &subs {
        let c = classify(om, j, a, keep, limit)?;
        if !c.is_unique() {
            return Ok(Some(format!(
                "subobject {keep:?}: pullback {} with {} classifying maps",
                if c.pullback_holds { "holds" } else { "fails" },
                c.classifying_maps
            )));
        }
        phis.push(c.phi.components);
    }
    phis.sort();
    phis.dedup();
    if phis.len() != subs.len() {
        return Ok(Some("two subobjects share a classifying map".into()));
    }
    Ok(None)
}

/// Terminal object, products, pullbacks, exponentials and the subobject
/// classifier on every object, pair and cospan of `pool`.
pub fn check_topos_axioms(j: &Topology, pool: &Pool, limit: Limit) -> Result<Vec<CheckResult>> {
    let h = j.algebra().clone();
    let one = Arc::new(Presheaf::terminal(&h));
    let mut out = Vec::new();

    for (name, a) in pool {
        let n = homs(a, &one, limit)?.len();
        out.push(CheckResult::from_witness(
            "topos.terminal",
            name.clone(),
            (n != 1).then(|| format!("{n} maps into 1")),
        ));
    }

    for (an, a) in pool {
        for (bn, b) in pool {
            let cone = product(a, b)?;
            let witness = match sheaf_witness(&cone.object, j) {
                Some(w) => Some(format!("product is not a sheaf: {}", w.describe(&cone.object))),
                None => product_witness(&cone, pool, limit)?,
            };
            out.push(CheckResult::from_witness("topos.product", format!("{an} x {bn}"), witness));
        }
    }

    for (cn, c) in pool {
        for (an, a) in pool {
            for (bn, b) in pool {
                let mut witness = None;
                'arrows: for f in homs(a, c, limit)? {
                    for g in homs(b, c, limit)? {
                        let cone = pullback(&f, &g)?;
                        witness = match sheaf_witness(&cone.object, j) {
                            Some(w) => Some(format!("pullback is not a sheaf: {}", w.describe(&cone.object))),
                            None => pullback_witness(&cone, &f, &g, pool, limit)?,
                        };
                        if let Some(w) = witness.take() {
                            witness = Some(format!("f = {}, g = {}: {w}", nat_name(&f), nat_name(&g)));
                            break 'arrows;
                        }
                    }
                }
                out.push(CheckResult::from_witness(
                    "topos.pullback",
                    format!("{an} -> {cn} <- {bn}"),
                    witness,
                ));
            }
        }
    }

    for (xn, x) in pool {
        let exps: Vec<(String, Exponential)> = pool
            .iter()
            .map(|(yn, y)| Ok((yn.clone(), exponential(x, y, limit)?)))
            .collect::<Result<_>>()?;
        for (yn, e) in &exps {
            let witness = match sheaf_witness(&e.object, j) {
                Some(w) => Some(format!("exponential is not a sheaf: {}", w.describe(&e.object))),
                None => adjunction_witness(e, pool, &exps, limit)?,
            };
            out.push(CheckResult::from_witness("topos.exponential", format!("{yn}^{xn}"), witness));
        }
    }

    let om = omega(j);
    out.push(CheckResult::from_witness("topos.omega", h.names().join("<"), omega_witness(&om, j)));
    for (name, a) in pool {
        out.push(CheckResult::from_witness(
            "topos.classifier",
            name.clone(),
            classifier_witness(&om, j, a, limit)?,
        ));
    }
    Ok(out)
}

/// `{q <= p | f(x)|q = g(x)|q}` covers `p` for every section `x`.
pub fn locally_equal(j: &Topology, f: &NatTransform, g: &NatTransform) -> bool {
    let h = j.algebra();
    let y = &f.target;
    h.elements().all(|p| {
        (0..f.source.count(p)).all(|x| {
            let (fx, gx) = (f.apply(p, x), g.apply(p, x));
            let members = h.down(p).iter().filter(|&q| y.restrict(p, q, fx) == y.restrict(p, q, gx)).collect();
            j.covers(&Sieve { at: p, members })
        })
    })
}

/// Subobjects of `1` that are sheaves, as presheaves.
pub fn subterminals(j: &Topology, limit: Limit) -> Result<Vec<Arc<Presheaf>>> {
    let one = Arc::new(Presheaf::terminal(j.algebra()));
    subobjects(&one, j, limit)?
        .into_iter()
        .map(|keep| Ok(one.subpresheaf(&keep)?.0))
        .collect()
}

/// For every `f != g: X -> Y` in the pool, a subterminal `U` and
/// `u: U -> X` with `f u` and `g u` not locally equal.
pub fn sg_check(j: &Topology, pool: &Pool, limit: Limit) -> Result<Vec<CheckResult>> {
    let subs = subterminals(j, limit)?;
    let mut out = Vec::new();
    for (xn, x) in pool {
        let probes: Vec<NatTransform> = subs
            .iter()
            .map(|u| homs(u, x, limit))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        for (yn, y) in pool {
            let arrows = homs(x, y, limit)?;
            let mut witness = None;
            'pairs: for (i, f) in arrows.iter().enumerate() {
                for g in &arrows[i + 1..] {
                    if !probes.iter().any(|u| !locally_equal(j, &u.then(f), &u.then(g))) {
                        witness = Some(format!("no subterminal separates {} and {}", nat_name(f), nat_name(g)));
                        break 'pairs;
                    }
                }
            }
            out.push(CheckResult::from_witness("sg.separation", format!("{xn} -> {yn}"), witness));
        }
    }
    Ok(out)
}

/// Over the diamond: two global sections `s`, `t` with the same restrictions
/// `u` at `a` and `v` at `b`. Not separated, hence not a sheaf.
pub fn doubled_point(h: &Arc<HeytingAlgebra>) -> Result<Arc<Presheaf>> {
    let lower: Vec<Elem> = h.elements().filter(|&e| e != h.top() && e != h.bottom()).collect();
    if lower.len() != 2 || lower.iter().any(|&e| h.meet(lower[0], lower[1]) != h.bottom() || !h.leq(e, h.top())) {
        return Err(Error::Input("the doubled point lives over the four-element Boolean algebra".into()));
    }
    let sections = h
        .elements()
        .map(|p| {
            if p == h.top() {
                vec!["s".to_string(), "t".to_string()]
            } else if p == h.bottom() {
                vec!["*".to_string()]
            } else if p == lower[0] {
                vec!["u".to_string()]
            } else {
                vec!["v".to_string()]
            }
        })
        .collect();
    Ok(Arc::new(Presheaf::from_fn(h.clone(), sections, |p, q, x| if p == q { x } else { 0 })?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heyting::instances::{chain3, diamond, two_element};
    use crate::sheaf::enumerate::enumerate_sheaves;
    use crate::sheaf::presheaf::isomorphic;

    fn pool(j: &Topology, n: usize) -> Pool {
        enumerate_sheaves(j, n, Limit::default())
            .unwrap()
            .into_iter()
            .enumerate()
            .map(|(i, p)| (format!("S{i}"), p))
            .collect()
    }

    #[test]
    fn omega_on_chain3_and_two_element() {
        let h = chain3();
        let j = Topology::territory(&h);
        let om = omega(&j);
        assert_eq!(om.object.counts(), vec![1, 2, 3]);
        assert!(is_sheaf(&om.object, &j));
        let b = two_element();
        let om2 = omega(&Topology::territory(&b));
        assert_eq!(om2.object.sections(b.top()), &["down(mu)".to_string(), "down(M)".to_string()]);
    }

    #[test]
    fn exponential_unit_laws() {
        let h = chain3();
        let j = Topology::territory(&h);
        let one = Arc::new(Presheaf::terminal(&h));
        for (_, y) in pool(&j, 3) {
            let e = exponential(&one, &y, Limit::default()).unwrap();
            assert!(isomorphic(&e.object, &y).unwrap());
            let e = exponential(&y, &one, Limit::default()).unwrap();
            assert!(isomorphic(&e.object, &one).unwrap());
        }
    }

    #[test]
    fn exponential_of_sets_counts_functions() {
        // over {mu < M} a sheaf is a set at M; Y^X(M) has |Y|^|X| sections
        let h = two_element();
        let j = Topology::territory(&h);
        let sheaves = pool(&j, 4);
        for (_, x) in &sheaves {
            for (_, y) in &sheaves {
                let e = exponential(x, y, Limit::default()).unwrap();
                let want = y.count(h.top()).pow(x.count(h.top()) as u32);
                assert_eq!(e.object.count(h.top()), want);
            }
        }
    }

    #[test]
    fn classify_examples() {
        let h = chain3();
        let j = Topology::territory(&h);
        let om = omega(&j);
        let one = Arc::new(Presheaf::terminal(&h));
        let all = vec![vec![true]; 3];
        let c = classify(&om, &j, &one, &all, Limit::default()).unwrap();
        assert!(c.is_unique());
        assert_eq!(c.phi, om.truth);

        let hp = vec![vec![true], vec![true], vec![false]];
        let c = classify(&om, &j, &one, &hp, Limit::default()).unwrap();
        assert!(c.is_unique());
        let p = h.elem("p").unwrap();
        assert_eq!(om.sieve(h.top(), c.phi.apply(h.top(), 0)), Sieve::principal(&h, h.top(), p).unwrap());

        // the initial subobject keeps the bottom section
        let init = vec![vec![true], vec![false], vec![false]];
        let c = classify(&om, &j, &one, &init, Limit::default()).unwrap();
        assert_eq!(om.sieve(h.top(), c.phi.apply(h.top(), 0)).members, h.down(h.bottom()));

        let empty = vec![vec![false]; 3];
        assert!(matches!(
            classify(&om, &j, &one, &empty, Limit::default()),
            Err(Error::NotSubobject(_))
        ));
    }

    #[test]
    fn topos_axioms_on_small_pools() {
        for h in [two_element(), chain3()] {
            let j = Topology::territory(&h);
            let results = check_topos_axioms(&j, &pool(&j, 2), Limit::default()).unwrap();
            let failed: Vec<_> = results.iter().filter(|r| !r.passed()).collect();
            assert!(failed.is_empty(), "{failed:?}");
        }
    }

    #[test]
    fn sg_on_sheaves_and_doubled_point() {
        let h = chain3();
        let j = Topology::territory(&h);
        let mut objs = pool(&j, 3);
        objs.push(("Omega".into(), omega(&j).object));
        assert!(sg_check(&j, &objs, Limit::default()).unwrap().iter().all(|r| r.passed()));

        let d = diamond();
        let jd = Topology::territory(&d);
        let p = doubled_point(&d).unwrap();
        assert!(!is_sheaf(&p, &jd));
        let objs = vec![("1".to_string(), Arc::new(Presheaf::terminal(&d))), ("P".to_string(), p)];
        let results = sg_check(&jd, &objs, Limit::default()).unwrap();
        // the two points s, t, and the identity against the swap s <-> t
        let failed: Vec<&str> = results.iter().filter(|r| !r.passed()).map(|r| r.instance.as_str()).collect();
        assert_eq!(failed, ["1 -> P", "P -> P"]);
    }
}
