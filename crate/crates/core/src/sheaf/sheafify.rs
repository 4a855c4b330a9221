//! The plus construction and sheafification.
//!
//! `P+(p)` is the set of matching families over covering sieves at `p`,
//! where two families are identified when they agree on a covering sieve.
//! Every family over `R` is identified with its restriction to any smaller
//! covering sieve, so it suffices to enumerate families over the
//! inclusion-minimal covering sieves. Applying the construction twice yields
//! a sheaf.

use std::sync::Arc;

use super::matching::{matching_families, MatchingFamily};
use super::presheaf::Presheaf;
use crate::error::{Limit, Result};
use crate::heyting::{Elem, ElemSet};
use crate::site::{pullback_sieve, Sieve, Topology};

fn minimal_covers(j: &Topology, p: Elem) -> Vec<Sieve> {
    let all = j.covering_sieves(p);
    all.iter()
        .copied()
        .filter(|s| !all.iter().any(|t| t != s && t.members.is_subset(s.members)))
        .collect()
}

/// Members on which two families agree; downward closed.
fn agreement(x: &MatchingFamily, y: &MatchingFamily) -> ElemSet {
    x.choice
        .iter()
        .filter(|&&(q, v)| y.get(q) == Some(v))
        .map(|&(q, _)| q)
        .collect()
}

fn equivalent(j: &Topology, at: Elem, x: &MatchingFamily, y: &MatchingFamily) -> bool {
    j.covers(&Sieve {
        at,
        members: agreement(x, y),
    })
}

fn restrict_family(p: &Presheaf, m: &MatchingFamily, q: Elem) -> MatchingFamily {
    let h = p.algebra();
    let sieve = pullback_sieve(h, &m.sieve, q).expect("q lies below the family");
    MatchingFamily {
        sieve,
        choice: m.choice.iter().copied().filter(|(r, _)| sieve.contains(*r)).collect(),
    }
}

/// One application of the plus construction.
pub fn plus(p: &Presheaf, j: &Topology, limit: Limit) -> Result<Presheaf> {
    let h = p.algebra().clone();
    let mut classes: Vec<Vec<MatchingFamily>> = Vec::with_capacity(h.size());
    let mut seen: u128 = 0;
    for at in h.elements() {
        let mut reps: Vec<MatchingFamily> = Vec::new();
        for s in minimal_covers(j, at) {
            for fam in matching_families(p, &s) {
                seen += 1;
                limit.check("plus construction families", seen)?;
                if !reps.iter().any(|r| equivalent(j, at, r, &fam)) {
                    reps.push(fam);
                }
            }
        }
        classes.push(reps);
    }
    let sections = h
        .elements()
        .map(|at| (0..classes[at.index()].len()).map(|i| format!("{}#{}", h.name(at), i)).collect())
        .collect();
    Presheaf::from_fn(h.clone(), sections, |at, q, i| {
        let restricted = restrict_family(p, &classes[at.index()][i], q);
        classes[q.index()]
            .iter()
            .position(|r| equivalent(j, q, r, &restricted))
            .expect("restricted family has a class")
    })
}

/// `P++`, the associated sheaf.
pub fn sheafify(p: &Presheaf, j: &Topology, limit: Limit) -> Result<Presheaf> {
    let once = plus(p, j, limit)?;
    plus(&once, j, limit)
}

pub fn sheafify_arc(p: &Arc<Presheaf>, j: &Topology, limit: Limit) -> Result<Arc<Presheaf>> {
    sheafify(p, j, limit).map(Arc::new)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heyting::instances::{chain3, diamond};
    use crate::sheaf::matching::is_sheaf;
    use crate::sheaf::presheaf::isomorphic;

    #[test]
    fn sheaves_are_fixed() {
        for h in [chain3(), diamond()] {
            let j = Topology::territory(&h);
            for s in h.elements() {
                let hs = Arc::new(Presheaf::representable(&h, s));
                let sh = sheafify_arc(&hs, &j, Limit::default()).unwrap();
                assert!(isomorphic(&hs, &sh).unwrap());
            }
        }
    }

    #[test]
    fn empty_presheaf_gains_a_bottom_section() {
        let h = chain3();
        let j = Topology::territory(&h);
        let s = sheafify(&Presheaf::empty(&h), &j, Limit::default()).unwrap();
        assert_eq!(s.counts(), vec![1, 0, 0]);
        assert!(is_sheaf(&s, &j));
    }
}
