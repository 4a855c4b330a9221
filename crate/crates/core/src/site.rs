//! Sieves and Grothendieck topologies on the poset underlying an algebra.
//!
//! An arrow `q -> p` of the poset is determined by `q`, so a sieve at `p` is
//! a downward closed subset of `down(p)`. The territory basis assigns to `p`
//! every `Theta` with `sigma(Theta) = p`; the topology it generates covers
//! `p` by exactly the sieves whose envelope is `p`.

use std::sync::Arc;

use crate::error::{Error, Limit, Result};
use crate::heyting::{Elem, ElemSet, HeytingAlgebra};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sieve {
    pub at: Elem,
    pub members: ElemSet,
}

impl Sieve {
    /// Checks that `members` is a downward closed subset of `down(at)`.
    pub fn new(h: &HeytingAlgebra, at: Elem, members: ElemSet) -> Result<Sieve> {
        if !members.is_subset(h.down(at)) {
            return Err(Error::Input(format!(
                "sieve at {} has members outside its downset",
                h.name(at)
            )));
        }
        if let Some(q) = members.iter().find(|&q| !h.down(q).is_subset(members)) {
            return Err(Error::Input(format!(
                "sieve at {} is not downward closed below {}",
                h.name(at),
                h.name(q)
            )));
        }
        Ok(Sieve { at, members })
    }

    pub fn maximal(h: &HeytingAlgebra, p: Elem) -> Sieve {
        Sieve {
            at: p,
            members: h.down(p),
        }
    }

    pub fn empty(p: Elem) -> Sieve {
        Sieve {
            at: p,
            members: ElemSet::EMPTY,
        }
    }

    /// `down(s)` as a sieve at `p`; requires `s <= p`.
    pub fn principal(h: &HeytingAlgebra, p: Elem, s: Elem) -> Result<Sieve> {
        if !h.leq(s, p) {
            return Err(Error::NotBelow(h.name(s).into(), h.name(p).into()));
        }
        Ok(Sieve {
            at: p,
            members: h.down(s),
        })
    }

    /// The sieve at `p` generated by `gens`, each of which must lie below `p`.
    pub fn generated(h: &HeytingAlgebra, p: Elem, gens: ElemSet) -> Result<Sieve> {
        if let Some(q) = gens.iter().find(|&q| !h.leq(q, p)) {
            return Err(Error::NotBelow(h.name(q).into(), h.name(p).into()));
        }
        Ok(Sieve {
            at: p,
            members: downward_closure(h, gens),
        })
    }

    pub fn contains(&self, q: Elem) -> bool {
        self.members.contains(q)
    }

    pub fn is_maximal(&self, h: &HeytingAlgebra) -> bool {
        self.members == h.down(self.at)
    }

    pub fn envelope(&self, h: &HeytingAlgebra) -> Elem {
        h.envelope(self.members)
    }

    pub fn describe(&self, h: &HeytingAlgebra) -> String {
        format!("{{{}}} at {}", h.names_of(self.members).join(","), h.name(self.at))
    }
}

pub fn downward_closure(h: &HeytingAlgebra, s: ElemSet) -> ElemSet {
    s.iter().fold(ElemSet::EMPTY, |acc, q| acc.union(h.down(q)))
}

/// `{q <= r | q in S}` as a sieve at `r`.
pub fn pullback_sieve(h: &HeytingAlgebra, s: &Sieve, r: Elem) -> Result<Sieve> {
    if !h.leq(r, s.at) {
        return Err(Error::NotBelow(h.name(r).into(), h.name(s.at).into()));
    }
    Ok(Sieve {
        at: r,
        members: s.members.intersection(h.down(r)),
    })
}

/// Every sieve at `p`, ordered by member mask.
pub fn sieves_at(h: &HeytingAlgebra, p: Elem) -> Vec<Sieve> {
    h.down(p)
        .subsets()
        .filter(|m| m.iter().all(|q| h.down(q).is_subset(*m)))
        .map(|members| Sieve { at: p, members })
        .collect()
}

/// All `Theta` with `sigma(Theta) = p`.
pub fn territories(h: &HeytingAlgebra, p: Elem) -> Vec<ElemSet> {
    h.down(p).subsets().filter(|&t| h.envelope(t) == p).collect()
}

/// A basis: for each element index, its list of covering families.
pub type Basis = Vec<Vec<ElemSet>>;

pub fn territory_basis(h: &HeytingAlgebra) -> Basis {
    h.elements().map(|p| territories(h, p)).collect()
}

fn basis_error(condition: &str, witness: String) -> Error {
    Error::BasisInvalid {
        condition: condition.to_string(),
        witness,
    }
}

fn family_name(h: &HeytingAlgebra, s: ElemSet) -> String {
    format!("{{{}}}", h.names_of(s).join(","))
}

/// Checks the three basis conditions, comparing families through their
/// downward closures: the maximal family, stability under pullback and
/// transitivity over every choice of local covers.
pub fn validate_basis(h: &HeytingAlgebra, basis: &Basis, limit: Limit) -> Result<()> {
    if basis.len() != h.size() {
        return Err(basis_error("shape", format!("expected {} entries", h.size())));
    }
    for p in h.elements() {
        for &fam in &basis[p.index()] {
            if !fam.is_subset(h.down(p)) {
                return Err(basis_error(
                    "families lie below their element",
                    format!("{} in K({})", family_name(h, fam), h.name(p)),
                ));
            }
        }
    }
    let closures: Vec<Vec<ElemSet>> = basis
        .iter()
        .map(|fams| fams.iter().map(|&f| downward_closure(h, f)).collect())
        .collect();

    for p in h.elements() {
        if !basis[p.index()].iter().any(|f| f.contains(p)) {
            return Err(basis_error(
                "maximality",
                format!("no family in K({}) contains {}", h.name(p), h.name(p)),
            ));
        }
    }

    for p in h.elements() {
        for (k, &fam) in basis[p.index()].iter().enumerate() {
            let closed = closures[p.index()][k];
            for r in h.down(p).iter() {
                let pulled = closed.intersection(h.down(r));
                if !closures[r.index()].iter().any(|c| c.is_subset(pulled)) {
                    return Err(basis_error(
                        "stability",
                        format!(
                            "{} in K({}) pulled back to {} contains no family of K({})",
                            family_name(h, fam),
                            h.name(p),
                            h.name(r),
                            h.name(r)
                        ),
                    ));
                }
            }
        }
    }

    let minimal: Vec<Vec<ElemSet>> = closures
        .iter()
        .map(|cs| {
            let mut m: Vec<ElemSet> = cs
                .iter()
                .copied()
                .filter(|c| !cs.iter().any(|d| d != c && d.is_subset(*c)))
                .collect();
            m.sort();
            m.dedup();
            m
        })
        .collect();
    for p in h.elements() {
        for &fam in &basis[p.index()] {
            let members: Vec<Elem> = fam.iter().collect();
            let space = members
                .iter()
                .fold(1u128, |acc, q| acc.saturating_mul(minimal[q.index()].len() as u128));
            limit.check("basis transitivity", space)?;
            let mut choice = vec![0usize; members.len()];
            loop {
                let union = members
                    .iter()
                    .zip(&choice)
                    .fold(ElemSet::EMPTY, |acc, (q, &c)| acc.union(minimal[q.index()][c]));
                if !closures[p.index()].iter().any(|c| c.is_subset(union)) {
                    return Err(basis_error(
                        "transitivity",
                        format!(
                            "local covers of {} in K({}) jointly generate {} which contains no family of K({})",
                            family_name(h, fam),
                            h.name(p),
                            family_name(h, union),
                            h.name(p)
                        ),
                    ));
                }
                let mut i = 0;
                while i < choice.len() {
                    choice[i] += 1;
                    if choice[i] < minimal[members[i].index()].len() {
                        break;
                    }
                    choice[i] = 0;
                    i += 1;
                }
                if i == choice.len() {
                    break;
                }
            }
        }
    }
    Ok(())
}

/// A Grothendieck topology: the covering sieves at each element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Topology {
    algebra: Arc<HeytingAlgebra>,
    covering: Vec<Vec<ElemSet>>,
}

impl Topology {
    /// Wraps an explicit assignment without checking the axioms.
    pub fn from_sieves(algebra: Arc<HeytingAlgebra>, sieves: Vec<Vec<Sieve>>) -> Result<Topology> {
        if sieves.len() != algebra.size() {
            return Err(Error::TopologyInvalid("one sieve list per element expected".into()));
        }
        let mut covering = Vec::with_capacity(sieves.len());
        for (i, list) in sieves.into_iter().enumerate() {
            let mut v = Vec::with_capacity(list.len());
            for s in list {
                if s.at.index() != i {
                    return Err(Error::TopologyInvalid(format!(
                        "sieve {} listed under {}",
                        s.describe(&algebra),
                        algebra.names()[i]
                    )));
                }
                v.push(Sieve::new(&algebra, s.at, s.members)?.members);
            }
            v.sort();
            v.dedup();
            covering.push(v);
        }
        Ok(Topology { algebra, covering })
    }

    /// The territory topology.
    pub fn territory(algebra: &Arc<HeytingAlgebra>) -> Topology {
        let basis = territory_basis(algebra);
        topology_from_basis(algebra, &basis, Limit::default())
            .expect("territories form a basis on any complete Heyting algebra")
    }

    pub fn algebra(&self) -> &Arc<HeytingAlgebra> {
        &self.algebra
    }

    pub fn covers(&self, s: &Sieve) -> bool {
        self.covering[s.at.index()].binary_search(&s.members).is_ok()
    }

    pub fn covering_sieves(&self, p: Elem) -> Vec<Sieve> {
        self.covering[p.index()]
            .iter()
            .map(|&members| Sieve { at: p, members })
            .collect()
    }

    /// Maximality, stability and transitivity.
    pub fn validate(&self) -> Result<()> {
        let h = &*self.algebra;
        for p in h.elements() {
            if !self.covers(&Sieve::maximal(h, p)) {
                return Err(Error::TopologyInvalid(format!(
                    "maximality: the maximal sieve at {} does not cover",
                    h.name(p)
                )));
            }
        }
        for p in h.elements() {
            for s in self.covering_sieves(p) {
                for r in h.down(p).iter() {
                    let pulled = pullback_sieve(h, &s, r)?;
                    if !self.covers(&pulled) {
                        return Err(Error::TopologyInvalid(format!(
                            "stability: {} covers but its pullback {} does not",
                            s.describe(h),
                            pulled.describe(h)
                        )));
                    }
                }
            }
        }
        for p in h.elements() {
            let all = sieves_at(h, p);
            for s in self.covering_sieves(p) {
                for r in &all {
                    if self.covers(r) {
                        continue;
                    }
                    let locally = s
                        .members
                        .iter()
                        .all(|q| self.covers(&pullback_sieve(h, r, q).expect("q <= p")));
                    if locally {
                        return Err(Error::TopologyInvalid(format!(
                            "transitivity: {} covers locally on {} but does not cover",
                            r.describe(h),
                            s.describe(h)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `S` is closed when every `q <= p` covered by `S` lies in `S`.
    pub fn is_closed(&self, s: &Sieve) -> bool {
        self.closure_step(s) == *s
    }

    fn closure_step(&self, s: &Sieve) -> Sieve {
        let h = &*self.algebra;
        let members = h
            .down(s.at)
            .iter()
            .filter(|&q| self.covers(&pullback_sieve(h, s, q).expect("q <= p")))
            .collect::<ElemSet>()
            .union(s.members);
        Sieve { at: s.at, members }
    }

    /// Least closed sieve containing `s`, as a fixpoint of the one-step rule.
    pub fn closure(&self, s: &Sieve) -> Sieve {
        let mut cur = *s;
        loop {
            let next = self.closure_step(&cur);
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    /// Closed sieves at `p`, found by testing every sieve.
    pub fn closed_sieves(&self, p: Elem) -> Vec<Sieve> {
        sieves_at(&self.algebra, p)
            .into_iter()
            .filter(|s| self.is_closed(s))
            .collect()
    }
}

/// Validates `basis` and generates `J(p) = {S | S contains some family}`.
pub fn topology_from_basis(h: &Arc<HeytingAlgebra>, basis: &Basis, limit: Limit) -> Result<Topology> {
    validate_basis(h, basis, limit)?;
    let covering = h
        .elements()
        .map(|p| {
            let closures: Vec<ElemSet> = basis[p.index()]
                .iter()
                .map(|&f| downward_closure(h, f))
                .collect();
            sieves_at(h, p)
                .into_iter()
                .map(|s| s.members)
                .filter(|m| closures.iter().any(|c| c.is_subset(*m)))
                .collect()
        })
        .collect();
    Ok(Topology {
        algebra: h.clone(),
        covering,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heyting::enumerate::enumerate_algebras;
    use crate::heyting::instances::{chain3, diamond};

    fn set(h: &HeytingAlgebra, names: &[&str]) -> ElemSet {
        names.iter().map(|n| h.elem(n).unwrap()).collect()
    }

    #[test]
    fn territory_examples() {
        let h = chain3();
        let mu = h.bottom();
        let t = territories(&h, mu);
        assert!(t.contains(&ElemSet::EMPTY) && t.contains(&set(&h, &["mu"])));
        let p = h.elem("p").unwrap();
        assert_eq!(territories(&h, p), vec![set(&h, &["p"]), set(&h, &["mu", "p"])]);
        let d = diamond();
        assert!(territories(&d, d.top()).contains(&set(&d, &["a", "b"])));
    }

    #[test]
    fn pullback_examples() {
        let h = chain3();
        let p = h.elem("p").unwrap();
        let m = h.top();
        let full = Sieve::maximal(&h, m);
        assert_eq!(pullback_sieve(&h, &full, p).unwrap(), Sieve::maximal(&h, p));
        let s = Sieve::principal(&h, m, p).unwrap();
        assert_eq!(pullback_sieve(&h, &s, p).unwrap(), Sieve::maximal(&h, p));
        assert_eq!(pullback_sieve(&h, &Sieve::empty(m), p).unwrap(), Sieve::empty(p));
        assert!(matches!(
            pullback_sieve(&h, &Sieve::maximal(&h, p), m),
            Err(Error::NotBelow(..))
        ));
    }

    #[test]
    fn territory_topology_is_envelope_covering() {
        for h in enumerate_algebras(6).unwrap() {
            let j = Topology::territory(&h);
            j.validate().unwrap();
            for p in h.elements() {
                for s in sieves_at(&h, p) {
                    assert_eq!(j.covers(&s), s.envelope(&h) == p);
                }
            }
        }
    }

    #[test]
    fn trivial_basis() {
        let h = diamond();
        let basis: Basis = h.elements().map(|p| vec![ElemSet::singleton(p)]).collect();
        let j = topology_from_basis(&h, &basis, Limit::default()).unwrap();
        j.validate().unwrap();
        for p in h.elements() {
            assert_eq!(j.covering_sieves(p), vec![Sieve::maximal(&h, p)]);
        }
    }

    #[test]
    fn unstable_basis_rejected() {
        let h = diamond();
        let mut basis: Basis = h.elements().map(|p| vec![ElemSet::singleton(p)]).collect();
        basis[h.top().index()].push(set(&h, &["a"]));
        match topology_from_basis(&h, &basis, Limit::default()) {
            Err(Error::BasisInvalid { condition, .. }) => assert_eq!(condition, "stability"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn invalid_topology_reported() {
        let h = chain3();
        let only_max = h.elements().map(|p| vec![Sieve::maximal(&h, p)]).collect();
        Topology::from_sieves(h.clone(), only_max).unwrap().validate().unwrap();

        let missing = h.elements().map(|p| vec![Sieve::empty(p)]).collect();
        let j = Topology::from_sieves(h.clone(), missing).unwrap();
        assert!(matches!(j.validate(), Err(Error::TopologyInvalid(m)) if m.starts_with("maximality")));
    }

    #[test]
    fn closure_examples() {
        let h = chain3();
        let j = Topology::territory(&h);
        let (mu, p, m) = (h.bottom(), h.elem("p").unwrap(), h.top());
        assert!(j.is_closed(&Sieve::maximal(&h, p)));
        let s = Sieve::principal(&h, p, mu).unwrap();
        assert!(j.is_closed(&s));
        assert_eq!(j.closure(&s), s);
        let s = Sieve::principal(&h, m, p).unwrap();
        assert!(j.is_closed(&s));
        // the empty sieve covers mu, so its closure at any p contains mu
        assert_eq!(j.closure(&Sieve::empty(m)), Sieve::principal(&h, m, mu).unwrap());
    }

    #[test]
    fn closed_sieves_are_principal() {
        for h in enumerate_algebras(6).unwrap() {
            let j = Topology::territory(&h);
            for p in h.elements() {
                let got: Vec<ElemSet> = j.closed_sieves(p).iter().map(|s| s.members).collect();
                let mut want: Vec<ElemSet> = h.down(p).iter().map(|s| h.down(s)).collect();
                want.sort();
                assert_eq!(got, want);
                for s in sieves_at(&h, p) {
                    let c = j.closure(&s);
                    assert!(s.members.is_subset(c.members));
                    assert_eq!(j.closure(&c), c);
                    assert_eq!(c.members, h.down(s.envelope(&h)));
                }
            }
        }
    }
}
