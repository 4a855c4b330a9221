//! Passing between T-sets and presheaves.

use std::sync::Arc;

use super::matching::sheaf_witness;
use super::presheaf::Presheaf;
use crate::error::{Error, Result};
use crate::site::Topology;
use crate::tset::TSet;

/// The presheaf of a T-set with its indiscernibility classes.
#[derive(Clone, Debug)]
pub struct Conversion {
    pub presheaf: Presheaf,
    /// Classes with more than one element, by element name.
    pub merged: Vec<Vec<String>>,
}

/// `F(p)` = class representatives of existence `p`; restriction is
/// localisation. Fails when some localisation has no witness.
pub fn tset_to_presheaf(t: &TSet) -> Result<Conversion> {
    let h = t.algebra().clone();
    let reps = t.representatives();
    let at: Vec<Vec<usize>> = h
        .elements()
        .map(|p| reps.iter().copied().filter(|&x| t.existence(x) == p).collect())
        .collect();
    let mut local = vec![vec![0usize; h.size()]; t.len()];
    for &x in &reps {
        for q in h.elements() {
            local[x][q.index()] = t.representative(t.localise(x, q)?);
        }
    }
    let sections = at
        .iter()
        .map(|xs| xs.iter().map(|&x| t.name(x).to_string()).collect())
        .collect();
    let presheaf = Presheaf::from_fn(h.clone(), sections, |p, q, i| {
        let y = local[at[p.index()][i]][q.index()];
        at[q.index()].iter().position(|&z| z == y).expect("localisation has the right existence")
    })?;
    let merged = reps
        .iter()
        .filter_map(|&r| {
            let class: Vec<String> = (0..t.len())
                .filter(|&y| t.representative(y) == r)
                .map(|y| t.name(y).to_string())
                .collect();
            (class.len() > 1).then_some(class)
        })
        .collect();
    Ok(Conversion { presheaf, merged })
}

/// The presheaf `P(p) = {x | Ee x >= p}` modulo `Id(x, y) >= p`, with
/// restriction sending a class to the class of the same element. Defined
/// for every quasi-T-set; its sheafification is the presheaf of the
/// completion.
pub fn quasi_presheaf(t: &TSet) -> Result<Presheaf> {
    let h = t.algebra().clone();
    let rep_at = |x: usize, p| {
        (0..t.len())
            .find(|&y| h.leq(p, t.id(x, y)))
            .expect("x is related to itself at p")
    };
    let at: Vec<Vec<usize>> = h
        .elements()
        .map(|p| {
            (0..t.len())
                .filter(|&x| h.leq(p, t.existence(x)) && rep_at(x, p) == x)
                .collect()
        })
        .collect();
    let sections = h
        .elements()
        .map(|p| {
            at[p.index()]
                .iter()
                .map(|&x| format!("{}@{}", t.name(x), h.name(p)))
                .collect()
        })
        .collect();
    Presheaf::from_fn(h.clone(), sections, |p, q, i| {
        let y = rep_at(at[p.index()][i], q);
        at[q.index()].iter().position(|&z| z == y).expect("representative is listed")
    })
}

/// Carrier = all sections, named `s@p`, with
/// `Id(x, y) = sigma{ q <= Ex /\ Ey | x|q = y|q }`.
pub fn presheaf_to_tset(p: &Presheaf) -> Result<TSet> {
    let h = p.algebra().clone();
    let j = Topology::territory(&h);
    if let Some(w) = sheaf_witness(p, &j) {
        return Err(Error::NotASheaf(w.describe(p)));
    }
    let carrier: Vec<(crate::heyting::Elem, usize)> = h
        .elements()
        .flat_map(|e| (0..p.count(e)).map(move |x| (e, x)))
        .collect();
    let names = carrier
        .iter()
        .map(|&(e, x)| format!("{}@{}", p.sections(e)[x], h.name(e)))
        .collect();
    Ok(TSet::from_fn(h.clone(), names, |i, k| {
        let ((e, x), (f, y)) = (carrier[i], carrier[k]);
        let below = h.down(h.meet(e, f));
        h.envelope_of(below.iter().filter(|&q| p.restrict(e, q, x) == p.restrict(f, q, y)))
    }))
}

pub fn presheaf_to_tset_arc(p: &Presheaf) -> Result<Arc<TSet>> {
    presheaf_to_tset(p).map(Arc::new)
}
