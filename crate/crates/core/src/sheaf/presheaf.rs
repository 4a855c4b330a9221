//! Presheaves of finite sets on the poset of an algebra, and natural
//! transformations between them.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Limit, Result};
use crate::heyting::{Elem, ElemSet, HeytingAlgebra};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presheaf {
    algebra: Arc<HeytingAlgebra>,
    sections: Vec<Vec<String>>,
    /// `restrict[p][q]`, filled for every `q <= p`.
    restrict: Vec<Vec<Vec<usize>>>,
}

/// Pairs `(p, q)` where `p` covers `q`, in element order.
pub fn cover_pairs(h: &HeytingAlgebra) -> Vec<(Elem, Elem)> {
    h.elements()
        .flat_map(|p| lower_covers(h, p).into_iter().map(move |q| (p, q)))
        .collect()
}

/// Elements directly below `p`.
pub fn lower_covers(h: &HeytingAlgebra, p: Elem) -> Vec<Elem> {
    h.down(p)
        .iter()
        .filter(|&q| q != p && h.down(p).intersection(h.up(q)).len() == 2)
        .collect()
}

/// Elements ordered so that everything below `p` comes before `p`.
pub fn bottom_up(h: &HeytingAlgebra) -> Vec<Elem> {
    let mut v = h.top_down();
    v.reverse();
    v
}

impl Presheaf {
    /// Builds a presheaf from its restriction maps along covers; composites
    /// are derived and functoriality is checked.
    pub fn from_covers(
        algebra: Arc<HeytingAlgebra>,
        sections: Vec<Vec<String>>,
        covers: &BTreeMap<(Elem, Elem), Vec<usize>>,
    ) -> Result<Presheaf> {
        let h = algebra.clone();
        if sections.len() != h.size() {
            return Err(Error::InvalidPresheaf("one section list per element expected".into()));
        }
        for (&(p, q), map) in covers {
            if !lower_covers(&h, p).contains(&q) {
                return Err(Error::InvalidPresheaf(format!(
                    "{} does not cover {}",
                    h.name(p),
                    h.name(q)
                )));
            }
            if map.len() != sections[p.index()].len()
                || map.iter().any(|&y| y >= sections[q.index()].len())
            {
                return Err(Error::InvalidPresheaf(format!(
                    "restriction {} > {} does not fit the sections",
                    h.name(p),
                    h.name(q)
                )));
            }
        }
        let n = h.size();
        let mut restrict = vec![vec![Vec::new(); n]; n];
        for p in bottom_up(&h) {
            let np = sections[p.index()].len();
            restrict[p.index()][p.index()] = (0..np).collect();
            for q in h.down(p).iter().filter(|&q| q != p) {
                let via = lower_covers(&h, p)
                    .into_iter()
                    .find(|&c| h.leq(q, c))
                    .expect("some cover lies above q");
                let step = covers.get(&(p, via)).ok_or_else(|| {
                    Error::InvalidPresheaf(format!(
                        "missing restriction {} > {}",
                        h.name(p),
                        h.name(via)
                    ))
                })?;
                let map = step.iter().map(|&y| restrict[via.index()][q.index()][y]).collect();
                restrict[p.index()][q.index()] = map;
            }
        }
        let presheaf = Presheaf {
            algebra,
            sections,
            restrict,
        };
        presheaf.check_functorial()?;
        presheaf.check_names()?;
        Ok(presheaf)
    }

    /// Builds a presheaf from a restriction function defined for all `q <= p`.
    pub fn from_fn(
        algebra: Arc<HeytingAlgebra>,
        sections: Vec<Vec<String>>,
        mut f: impl FnMut(Elem, Elem, usize) -> usize,
    ) -> Result<Presheaf> {
        let h = algebra.clone();
        if sections.len() != h.size() {
            return Err(Error::InvalidPresheaf("one section list per element expected".into()));
        }
        let n = h.size();
        let mut restrict = vec![vec![Vec::new(); n]; n];
        for p in h.elements() {
            for q in h.down(p).iter() {
                let map: Vec<usize> = (0..sections[p.index()].len()).map(|x| f(p, q, x)).collect();
                if map.iter().any(|&y| y >= sections[q.index()].len()) {
                    return Err(Error::InvalidPresheaf(format!(
                        "restriction {} > {} leaves the sections",
                        h.name(p),
                        h.name(q)
                    )));
                }
                restrict[p.index()][q.index()] = map;
            }
        }
        let presheaf = Presheaf {
            algebra,
            sections,
            restrict,
        };
        presheaf.check_functorial()?;
        presheaf.check_names()?;
        Ok(presheaf)
    }

    fn check_names(&self) -> Result<()> {
        for (i, list) in self.sections.iter().enumerate() {
            for (k, name) in list.iter().enumerate() {
                if list[..k].contains(name) {
                    return Err(Error::InvalidPresheaf(format!(
                        "duplicate section `{name}` at {}",
                        self.algebra.names()[i]
                    )));
                }
            }
        }
        Ok(())
    }

    fn check_functorial(&self) -> Result<()> {
        let h = &*self.algebra;
        for p in h.elements() {
            if self.restrict[p.index()][p.index()] != (0..self.count(p)).collect::<Vec<_>>() {
                return Err(Error::InvalidPresheaf(format!(
                    "restriction {} > {} is not the identity",
                    h.name(p),
                    h.name(p)
                )));
            }
            for q in h.down(p).iter() {
                for r in h.down(q).iter() {
                    for x in 0..self.count(p) {
                        if self.restrict(q, r, self.restrict(p, q, x)) != self.restrict(p, r, x) {
                            return Err(Error::InvalidPresheaf(format!(
                                "restricting {} from {} to {} via {} disagrees with the direct restriction",
                                self.sections[p.index()][x],
                                h.name(p),
                                h.name(r),
                                h.name(q)
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The presheaf with no sections anywhere.
    pub fn empty(h: &Arc<HeytingAlgebra>) -> Presheaf {
        Presheaf::from_fn(h.clone(), vec![Vec::new(); h.size()], |_, _, _| 0)
            .expect("empty presheaf")
    }

    /// One section at every element, named after it.
    pub fn terminal(h: &Arc<HeytingAlgebra>) -> Presheaf {
        let sections = h.names().iter().map(|n| vec![n.clone()]).collect();
        Presheaf::from_fn(h.clone(), sections, |_, _, _| 0).expect("terminal presheaf")
    }

    /// `h_s`: one section at each `p <= s`.
    pub fn representable(h: &Arc<HeytingAlgebra>, s: Elem) -> Presheaf {
        let sections = h
            .elements()
            .map(|p| if h.leq(p, s) { vec![h.name(p).to_string()] } else { Vec::new() })
            .collect();
        Presheaf::from_fn(h.clone(), sections, |_, _, _| 0).expect("representable presheaf")
    }

    pub fn algebra(&self) -> &Arc<HeytingAlgebra> {
        &self.algebra
    }

    pub fn sections(&self, p: Elem) -> &[String] {
        &self.sections[p.index()]
    }

    pub fn all_sections(&self) -> &[Vec<String>] {
        &self.sections
    }

    pub fn count(&self, p: Elem) -> usize {
        self.sections[p.index()].len()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.sections.iter().map(Vec::len).collect()
    }

    pub fn total(&self) -> usize {
        self.sections.iter().map(Vec::len).sum()
    }

    pub fn section_index(&self, p: Elem, name: &str) -> Option<usize> {
        self.sections[p.index()].iter().position(|s| s == name)
    }

    /// `x |q` for a section `x` at `p`; requires `q <= p`.
    pub fn restrict(&self, p: Elem, q: Elem, x: usize) -> usize {
        self.restrict[p.index()][q.index()][x]
    }

    pub fn restriction_map(&self, p: Elem, q: Elem) -> &[usize] {
        &self.restrict[p.index()][q.index()]
    }

    /// Restriction maps along covers only.
    pub fn cover_maps(&self) -> BTreeMap<(Elem, Elem), Vec<usize>> {
        cover_pairs(&self.algebra)
            .into_iter()
            .map(|(p, q)| ((p, q), self.restrict[p.index()][q.index()].clone()))
            .collect()
    }

    /// Short description of the section counts, e.g. `mu:1 p:1 M:0`.
    pub fn shape(&self) -> String {
        self.algebra
            .elements()
            .map(|p| format!("{}:{}", self.algebra.name(p), self.count(p)))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// The sub-presheaf on the sections marked in `keep`, with its inclusion.
    pub fn subpresheaf(self: &Arc<Self>, keep: &[Vec<bool>]) -> Result<(Arc<Presheaf>, NatTransform)> {
        let h = self.algebra.clone();
        if keep.len() != h.size() || h.elements().any(|p| keep[p.index()].len() != self.count(p)) {
            return Err(Error::NotSubobject("membership table does not fit".into()));
        }
        let kept: Vec<Vec<usize>> = h
            .elements()
            .map(|p| (0..self.count(p)).filter(|&x| keep[p.index()][x]).collect())
            .collect();
        for p in h.elements() {
            for &x in &kept[p.index()] {
                for q in h.down(p).iter() {
                    if !keep[q.index()][self.restrict(p, q, x)] {
                        return Err(Error::NotSubobject(format!(
                            "{} at {} restricts outside the subset at {}",
                            self.sections[p.index()][x],
                            h.name(p),
                            h.name(q)
                        )));
                    }
                }
            }
        }
        let sections = h
            .elements()
            .map(|p| kept[p.index()].iter().map(|&x| self.sections[p.index()][x].clone()).collect())
            .collect();
        let sub = Presheaf::from_fn(h.clone(), sections, |p, q, i| {
            let y = self.restrict(p, q, kept[p.index()][i]);
            kept[q.index()].binary_search(&y).expect("closed under restriction")
        })?;
        let sub = Arc::new(sub);
        let inclusion = NatTransform {
            source: sub.clone(),
            target: self.clone(),
            components: kept,
        };
        Ok((sub, inclusion))
    }
}

/// A family of maps `source(p) -> target(p)` commuting with restriction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NatTransform {
    pub source: Arc<Presheaf>,
    pub target: Arc<Presheaf>,
    pub components: Vec<Vec<usize>>,
}

impl NatTransform {
    pub fn new(source: Arc<Presheaf>, target: Arc<Presheaf>, components: Vec<Vec<usize>>) -> Result<Self> {
        if source.algebra() != target.algebra() {
            return Err(Error::AlgebraMismatch);
        }
        let h = source.algebra().clone();
        let fits = components.len() == h.size()
            && h.elements().all(|p| {
                components[p.index()].len() == source.count(p)
                    && components[p.index()].iter().all(|&y| y < target.count(p))
            });
        if !fits {
            return Err(Error::InvalidPresheaf("components do not fit source and target".into()));
        }
        let t = NatTransform {
            source,
            target,
            components,
        };
        if let Some((p, q, x)) = t.naturality_failure() {
            return Err(Error::InvalidPresheaf(format!(
                "not natural at section {} of {} restricted to {}",
                t.source.sections(p)[x],
                h.name(p),
                h.name(q)
            )));
        }
        Ok(t)
    }

    pub fn identity(p: &Arc<Presheaf>) -> Self {
        NatTransform {
            source: p.clone(),
            target: p.clone(),
            components: p.algebra().elements().map(|e| (0..p.count(e)).collect()).collect(),
        }
    }

    pub fn apply(&self, p: Elem, x: usize) -> usize {
        self.components[p.index()][x]
    }

    fn naturality_failure(&self) -> Option<(Elem, Elem, usize)> {
        let h = self.source.algebra();
        for (p, q) in cover_pairs(h) {
            for x in 0..self.source.count(p) {
                let lhs = self.target.restrict(p, q, self.apply(p, x));
                let rhs = self.apply(q, self.source.restrict(p, q, x));
                if lhs != rhs {
                    return Some((p, q, x));
                }
            }
        }
        None
    }

    pub fn is_natural(&self) -> bool {
        self.naturality_failure().is_none()
    }

    /// `other . self`.
    pub fn then(&self, other: &NatTransform) -> NatTransform {
        let h = self.source.algebra();
        NatTransform {
            source: self.source.clone(),
            target: other.target.clone(),
            components: h
                .elements()
                .map(|p| self.components[p.index()].iter().map(|&y| other.apply(p, y)).collect())
                .collect(),
        }
    }

    pub fn is_injective(&self) -> bool {
        self.components.iter().all(|c| {
            let mut v = c.clone();
            v.sort_unstable();
            v.windows(2).all(|w| w[0] != w[1])
        })
    }
}

/// Options for the natural-transformation search.
struct Search<'a> {
    source: &'a Presheaf,
    target: &'a Presheaf,
    order: Vec<(Elem, usize)>,
    covers: Vec<Vec<Elem>>,
    candidates: Vec<Vec<usize>>,
    injective: bool,
    first_only: bool,
}

impl Search<'_> {
    fn run(&self) -> Vec<Vec<Vec<usize>>> {
        let h = self.source.algebra();
        let mut comps: Vec<Vec<usize>> = h.elements().map(|p| vec![usize::MAX; self.source.count(p)]).collect();
        let mut used: Vec<Vec<bool>> = h.elements().map(|p| vec![false; self.target.count(p)]).collect();
        let mut out = Vec::new();
        self.go(0, &mut comps, &mut used, &mut out);
        out
    }

    fn go(&self, k: usize, comps: &mut Vec<Vec<usize>>, used: &mut Vec<Vec<bool>>, out: &mut Vec<Vec<Vec<usize>>>) -> bool {
        if k == self.order.len() {
            out.push(comps.iter().map(|c| if c.first() == Some(&usize::MAX) { Vec::new() } else { c.clone() }).collect());
            return self.first_only;
        }
        let (p, x) = self.order[k];
        for &y in &self.candidates[k] {
            if self.injective && used[p.index()][y] {
                continue;
            }
            let ok = self.covers[p.index()].iter().all(|&q| {
                self.target.restrict(p, q, y) == comps[q.index()][self.source.restrict(p, q, x)]
            });
            if !ok {
                continue;
            }
            comps[p.index()][x] = y;
            used[p.index()][y] = true;
            if self.go(k + 1, comps, used, out) {
                return true;
            }
            used[p.index()][y] = false;
            comps[p.index()][x] = usize::MAX;
        }
        false
    }
}

/// Raw component tables of all natural transformations `source -> target`
/// restricted to the downward closed set `domain`; components outside
/// `domain` are left empty. `allowed(p, x, y)` filters candidate images and
/// the guard applies to the product of the filtered candidate counts.
pub fn nat_components(
    source: &Presheaf,
    target: &Presheaf,
    domain: ElemSet,
    allowed: impl Fn(Elem, usize, usize) -> bool,
    limit: Limit,
) -> Result<Vec<Vec<Vec<usize>>>> {
    let h = source.algebra();
    if h != target.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let order: Vec<(Elem, usize)> = bottom_up(h)
        .into_iter()
        .filter(|p| domain.contains(*p))
        .flat_map(|p| (0..source.count(p)).map(move |x| (p, x)))
        .collect();
    let candidates: Vec<Vec<usize>> = order
        .iter()
        .map(|&(p, x)| (0..target.count(p)).filter(|&y| allowed(p, x, y)).collect())
        .collect();
    let space = candidates.iter().fold(1u128, |acc, c| acc.saturating_mul(c.len() as u128));
    limit.check("natural transformation enumeration", space)?;
    let search = Search {
        source,
        target,
        order,
        covers: h.elements().map(|p| lower_covers(h, p)).collect(),
        candidates,
        injective: false,
        first_only: false,
    };
    Ok(search.run())
}

/// All natural transformations, in lexicographic order of their components.
pub fn homs(source: &Arc<Presheaf>, target: &Arc<Presheaf>, limit: Limit) -> Result<Vec<NatTransform>> {
    homs_filtered(source, target, |_, _, _| true, limit)
}

pub fn homs_filtered(
    source: &Arc<Presheaf>,
    target: &Arc<Presheaf>,
    allowed: impl Fn(Elem, usize, usize) -> bool,
    limit: Limit,
) -> Result<Vec<NatTransform>> {
    let all = source.algebra().all();
    let mut comps = nat_components(source, target, all, allowed, limit)?;
    comps.sort();
    Ok(comps
        .into_iter()
        .map(|components| NatTransform {
            source: source.clone(),
            target: target.clone(),
            components,
        })
        .collect())
}

/// An isomorphism as a pair of mutually inverse natural transformations.
pub fn find_isomorphism(a: &Arc<Presheaf>, b: &Arc<Presheaf>) -> Result<Option<(NatTransform, NatTransform)>> {
    let h = a.algebra();
    if h != b.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    if a.counts() != b.counts() {
        return Ok(None);
    }
    let order: Vec<(Elem, usize)> = bottom_up(h)
        .into_iter()
        .flat_map(|p| (0..a.count(p)).map(move |x| (p, x)))
        .collect();
    let candidates = order.iter().map(|&(p, _)| (0..b.count(p)).collect()).collect();
    let search = Search {
        source: a,
        target: b,
        order,
        covers: h.elements().map(|p| lower_covers(h, p)).collect(),
        candidates,
        injective: true,
        first_only: true,
    };
    let Some(components) = search.run().pop() else {
        return Ok(None);
    };
    let inverse = h
        .elements()
        .map(|p| {
            let mut inv = vec![0; b.count(p)];
            for (x, &y) in components[p.index()].iter().enumerate() {
                inv[y] = x;
            }
            inv
        })
        .collect();
    let forward = NatTransform {
        source: a.clone(),
        target: b.clone(),
        components,
    };
    let backward = NatTransform {
        source: b.clone(),
        target: a.clone(),
        components: inverse,
    };
    debug_assert!(backward.is_natural());
    Ok(Some((forward, backward)))
}

pub fn isomorphic(a: &Arc<Presheaf>, b: &Arc<Presheaf>) -> Result<bool> {
    Ok(find_isomorphism(a, b)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heyting::instances::{chain3, diamond};

    #[test]
    fn covers_of_chain_and_diamond() {
        let h = chain3();
        assert_eq!(cover_pairs(&h).len(), 2);
        let d = diamond();
        assert_eq!(lower_covers(&d, d.top()).len(), 2);
        assert_eq!(bottom_up(&d)[0], d.bottom());
    }

    #[test]
    fn functoriality_checked() {
        let d = diamond();
        let names = |n: usize| (0..n).map(|i| format!("s{i}")).collect::<Vec<_>>();
        let sections = vec![names(2), names(1), names(1), names(1)];
        let mut covers = BTreeMap::new();
        let (mu, a, b, m) = (d.bottom(), d.elem("a").unwrap(), d.elem("b").unwrap(), d.top());
        covers.insert((a, mu), vec![0]);
        covers.insert((b, mu), vec![1]);
        covers.insert((m, a), vec![0]);
        covers.insert((m, b), vec![0]);
        assert!(matches!(
            Presheaf::from_covers(d.clone(), sections.clone(), &covers),
            Err(Error::InvalidPresheaf(_))
        ));
        covers.insert((b, mu), vec![0]);
        let p = Presheaf::from_covers(d.clone(), sections, &covers).unwrap();
        assert_eq!(p.restrict(m, mu, 0), 0);
    }

    #[test]
    fn homs_between_representables() {
        let h = chain3();
        let p = h.elem("p").unwrap();
        let hp = Arc::new(Presheaf::representable(&h, p));
        let one = Arc::new(Presheaf::terminal(&h));
        assert_eq!(homs(&hp, &one, Limit::default()).unwrap().len(), 1);
        assert_eq!(homs(&one, &hp, Limit::default()).unwrap().len(), 0);
        assert_eq!(homs(&hp, &hp, Limit::default()).unwrap().len(), 1);
        assert!(isomorphic(&hp, &hp).unwrap());
        assert!(!isomorphic(&hp, &one).unwrap());
    }

    #[test]
    fn isomorphism_is_found_up_to_naming() {
        let d = diamond();
        let one = Arc::new(Presheaf::terminal(&d));
        let renamed = Arc::new(
            Presheaf::from_fn(d.clone(), vec![vec!["z".into()]; 4], |_, _, _| 0).unwrap(),
        );
        let (f, g) = find_isomorphism(&one, &renamed).unwrap().unwrap();
        assert_eq!(f.then(&g), NatTransform::identity(&one));
    }

    #[test]
    fn subpresheaf_must_be_closed() {
        let h = chain3();
        let one = Arc::new(Presheaf::terminal(&h));
        let bad = vec![vec![false], vec![true], vec![true]];
        assert!(matches!(one.subpresheaf(&bad), Err(Error::NotSubobject(_))));
        let good = vec![vec![true], vec![true], vec![false]];
        let (sub, inc) = one.subpresheaf(&good).unwrap();
        assert_eq!(sub.counts(), vec![1, 1, 0]);
        assert!(inc.is_natural() && inc.is_injective());
    }
}
