//! Limits of T-sets: terminal object, products, graphs and pullbacks, with
//! universal properties checked by enumerating mediating relations.

use std::sync::Arc;

use crate::error::{Error, Limit, Result};
use crate::heyting::HeytingAlgebra;
use crate::tset::relation::{hom_set, hom_set_filtered, TRelation};
use crate::tset::TSet;

/// An object with two outgoing relations.
#[derive(Clone, Debug)]
pub struct Cone {
    pub object: Arc<TSet>,
    pub first: TRelation,
    pub second: TRelation,
}

/// Carrier `T` with `Id(p, q) = p /\ q`.
pub fn terminal(h: &Arc<HeytingAlgebra>) -> Arc<TSet> {
    Arc::new(TSet::from_fn(h.clone(), h.names().to_vec(), |i, j| h.meet(h.at(i), h.at(j))))
}

/// The unique relation `A -> 1`, `x |-> Ee x`.
pub fn to_terminal(a: &Arc<TSet>) -> TRelation {
    let one = terminal(a.algebra());
    TRelation {
        source: a.clone(),
        target: one,
        map: (0..a.len()).map(|x| a.existence(x).index()).collect(),
    }
}

/// A set-like T-set: `names` are global elements pairwise apart, plus a
/// zero element `0` of existence `mu` so that every atom is real.
pub fn discrete(h: &Arc<HeytingAlgebra>, names: &[&str]) -> Arc<TSet> {
    let mut all: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    all.push("0".into());
    let n = names.len();
    Arc::new(TSet::from_fn(h.clone(), all, |i, j| {
        if i == j && i < n {
            h.top()
        } else {
            h.bottom()
        }
    }))
}

fn pair_name(a: &TSet, x: usize, b: &TSet, y: usize) -> String {
    format!("({},{})", a.name(x), b.name(y))
}

fn check_same(a: &TSet, b: &TSet) -> Result<()> {
    if a.algebra() == b.algebra() {
        Ok(())
    } else {
        Err(Error::AlgebraMismatch)
    }
}

/// All pairs with `Id((a,b),(a',b')) = Id(a,a') /\ Id(b,b')`; the
/// projections localise each component to the existence of the pair.
pub fn product(a: &Arc<TSet>, b: &Arc<TSet>) -> Result<Cone> {
    check_same(a, b)?;
    let pairs: Vec<(usize, usize)> = (0..a.len()).flat_map(|x| (0..b.len()).map(move |y| (x, y))).collect();
    sub_product(a, b, pairs)
}

fn sub_product(a: &Arc<TSet>, b: &Arc<TSet>, pairs: Vec<(usize, usize)>) -> Result<Cone> {
    let h = a.algebra().clone();
    let names = pairs.iter().map(|&(x, y)| pair_name(a, x, b, y)).collect();
    let object = Arc::new(TSet::from_fn(h.clone(), names, |i, j| {
        let ((x, y), (u, v)) = (pairs[i], pairs[j]);
        h.meet(a.id(x, u), b.id(y, v))
    }));
    let mut first = Vec::with_capacity(pairs.len());
    let mut second = Vec::with_capacity(pairs.len());
    for &(x, y) in &pairs {
        let e = h.meet(a.existence(x), b.existence(y));
        first.push(a.representative(a.localise(x, e)?));
        second.push(b.representative(b.localise(y, e)?));
    }
    Ok(Cone {
        first: TRelation::new(object.clone(), a.clone(), first)?,
        second: TRelation::new(object.clone(), b.clone(), second)?,
        object,
    })
}

/// `{(a, rho a)}` with `Id = Id_A(a, b) /\ Id_B(rho a, rho b)`.
pub fn graph(rho: &TRelation) -> Result<Cone> {
    let (a, b) = (&rho.source, &rho.target);
    let pairs = (0..a.len()).map(|x| (x, rho.apply(x))).collect();
    sub_product(a, b, pairs)
}

/// Pairs `(a, b)` with `Ee a = Ee b = Id_C(f a, g b)`.
pub fn pullback(f: &TRelation, g: &TRelation) -> Result<Cone> {
    if *f.target != *g.target {
        return Err(Error::Input("pullback needs a shared codomain".into()));
    }
    let (a, b, c) = (&f.source, &g.source, &*f.target);
    let pairs = (0..a.len())
        .flat_map(|x| (0..b.len()).map(move |y| (x, y)))
        .filter(|&(x, y)| {
            let e = c.id(f.apply(x), g.apply(y));
            a.existence(x) == e && b.existence(y) == e
        })
        .collect();
    sub_product(a, b, pairs)
}

/// Relations `W -> cone` whose composites with the legs are `u` and `v`.
pub fn mediations(cone: &Cone, u: &TRelation, v: &TRelation, limit: Limit) -> Result<Vec<TRelation>> {
    let (a, b) = (&cone.first.target, &cone.second.target);
    hom_set_filtered(
        &u.source,
        &cone.object,
        |w, c| a.indiscernible(cone.first.apply(c), u.apply(w)) && b.indiscernible(cone.second.apply(c), v.apply(w)),
        limit,
    )
}

fn relation_name(r: &TRelation) -> String {
    let parts: Vec<String> = (0..r.source.len())
        .map(|x| format!("{}->{}", r.source.name(x), r.target.name(r.apply(x))))
        .collect();
    format!("{{{}}}", parts.join(" "))
}

/// Every pair of relations from every `W` in `pool` factors uniquely.
pub fn check_product_universal(cone: &Cone, pool: &[Arc<TSet>], limit: Limit) -> Result<Option<String>> {
    for w in pool {
        let us = hom_set(w, &cone.first.target, limit)?;
        let vs = hom_set(w, &cone.second.target, limit)?;
        for u in &us {
            for v in &vs {
                let n = mediations(cone, u, v, limit)?.len();
                if n != 1 {
                    return Ok(Some(format!(
                        "{n} mediating relations for u = {}, v = {}",
                        relation_name(u),
                        relation_name(v)
                    )));
                }
            }
        }
    }
    Ok(None)
}

/// Commuting pairs factor uniquely through the pullback, others not at all.
pub fn check_pullback_universal(
    cone: &Cone,
    f: &TRelation,
    g: &TRelation,
    pool: &[Arc<TSet>],
    limit: Limit,
) -> Result<Option<String>> {
    let c = &f.target;
    for w in pool {
        let us = hom_set(w, &f.source, limit)?;
        let vs = hom_set(w, &g.source, limit)?;
        for u in &us {
            for v in &vs {
                let commutes = (0..w.len()).all(|x| c.indiscernible(f.apply(u.apply(x)), g.apply(v.apply(x))));
                let n = mediations(cone, u, v, limit)?.len();
                if n != usize::from(commutes) {
                    return Ok(Some(format!(
                        "{n} mediating relations for u = {}, v = {} (commuting: {commutes})",
                        relation_name(u),
                        relation_name(v)
                    )));
                }
            }
        }
    }
    Ok(None)
}

/// Existence and uniqueness of mediation into the graph of `rho`.
pub fn check_graph_universal(cone: &Cone, rho: &TRelation, pool: &[Arc<TSet>], limit: Limit) -> Result<Option<String>> {
    let id = TRelation::identity(&rho.target);
    check_pullback_universal(cone, rho, &id, pool, limit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heyting::instances::{chain3, two_element};
    use crate::tset::enumerate::{enumerate_tsets, TSetFilter};
    use crate::tset::relation::{find_isomorphism, isomorphic};

    fn pool(h: &Arc<HeytingAlgebra>, n: usize) -> Vec<Arc<TSet>> {
        enumerate_tsets(h, n, TSetFilter::COMPLETE, Limit::default()).unwrap()
    }

    #[test]
    fn terminal_is_terminal() {
        let h = chain3();
        let one = terminal(&h);
        for a in pool(&h, 2) {
            let homs = hom_set(&a, &one, Limit::default()).unwrap();
            assert_eq!(homs.len(), 1);
            assert!(homs[0].equivalent(&to_terminal(&a)));
        }
    }

    #[test]
    fn unit_law_with_explicit_pair() {
        let h = chain3();
        let one = terminal(&h);
        for a in pool(&h, 2) {
            let p = product(&a, &one).unwrap();
            assert_eq!(p.object.len(), a.len() * one.len());
            assert!(p.first.is_valid().unwrap() && p.second.is_valid().unwrap());
            let (f, g) = find_isomorphism(&p.object, &a).unwrap().unwrap();
            assert!(f.then(&g).unwrap().equivalent(&TRelation::identity(&p.object)));
            // the projection itself is the isomorphism up to indiscernibility
            assert!(p.first.equivalent(&f));
        }
    }

    #[test]
    fn product_universality_on_pool() {
        let h = chain3();
        let objs = pool(&h, 2);
        for a in &objs {
            for b in &objs {
                let p = product(a, b).unwrap();
                assert!(p.object.satisfies_postulate(Limit::default()).unwrap());
                assert_eq!(check_product_universal(&p, &objs, Limit::default()).unwrap(), None);
            }
        }
    }

    #[test]
    fn graphs_are_universal_and_complete() {
        let h = chain3();
        let objs = pool(&h, 2);
        for a in &objs {
            for b in &objs {
                for rho in hom_set(a, b, Limit::default()).unwrap() {
                    let g = graph(&rho).unwrap();
                    assert!(g.object.satisfies_postulate(Limit::default()).unwrap());
                    assert!(isomorphic(&g.object, a).unwrap());
                    assert_eq!(check_graph_universal(&g, &rho, &objs, Limit::default()).unwrap(), None);
                    let id = TRelation::identity(b);
                    let pb = pullback(&rho, &id).unwrap();
                    assert!(isomorphic(&pb.object, &g.object).unwrap());
                }
            }
        }
    }

    #[test]
    fn pullback_along_terminal_is_product() {
        let h = chain3();
        let objs = pool(&h, 2);
        for a in &objs {
            for b in &objs {
                let pb = pullback(&to_terminal(a), &to_terminal(b)).unwrap();
                let p = product(a, b).unwrap();
                assert!(isomorphic(&pb.object, &p.object).unwrap());
                assert_eq!(
                    check_pullback_universal(&pb, &to_terminal(a), &to_terminal(b), &objs, Limit::default()).unwrap(),
                    None
                );
            }
        }
    }

    #[test]
    fn disjoint_points_pull_back_to_initial() {
        let h = two_element();
        let c = discrete(&h, &["c1", "c2"]);
        let a = discrete(&h, &["x"]);
        let b = discrete(&h, &["y"]);
        let f = TRelation::new(a.clone(), c.clone(), vec![0, 2]).unwrap();
        let g = TRelation::new(b.clone(), c.clone(), vec![1, 2]).unwrap();
        assert!(f.is_valid().unwrap() && g.is_valid().unwrap());
        let pb = pullback(&f, &g).unwrap();
        assert_eq!(pb.object.names(), &["(0,0)".to_string()]);
        assert_eq!(pb.object.existence(0), h.bottom());
    }
}
