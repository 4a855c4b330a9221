//! Universal exposition of a relation versus its graph.
//!
//! Expose `f: X -> Y` by `X x X x X` with legs `pi1` and `f . pi2`. A
//! relation `h` between two such exposing objects making the legs commute is
//! constrained only in its first two components, so the third can be
//! anything and uniqueness fails as soon as `X` has two points. The graph of
//! `f` with its two legs does have unique mediation.

use std::sync::Arc;

use serde::Serialize;

use super::tsets::{discrete, graph, mediations, product, Cone};
use crate::error::{Error, Limit, Result};
use crate::heyting::HeytingAlgebra;
use crate::tset::relation::TRelation;
use crate::tset::TSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpositionReport {
    /// Number of global points of `X`.
    pub points: usize,
    /// Relations `X^3 -> X^3` commuting with both legs, up to
    /// indiscernibility.
    pub mediating_maps: usize,
    /// Each mediating relation as `source -> target` pairs on global points.
    pub maps: Vec<Vec<(String, String)>>,
    /// Relations from `X^3` into the graph of `f` over the legs
    /// `pi1` and `f . pi1`.
    pub graph_mediations: usize,
    /// Graph mediation counts for every relation `u: X -> X`.
    pub graph_mediations_all: Vec<usize>,
}

impl ExpositionReport {
    /// Mediation into an exposing object is not unique.
    pub fn universality_refuted(&self) -> bool {
        self.mediating_maps >= 2
    }

    /// Mediation into the graph exists and is unique in every tested case.
    pub fn graph_universal(&self) -> bool {
        self.graph_mediations == 1 && self.graph_mediations_all.iter().all(|&n| n == 1)
    }
}

/// Legs `pi1` and `f . pi2` on `X x X x X`, built as `(X x X) x X`.
fn exposing_cube(x: &Arc<TSet>, f: &TRelation) -> Result<Cone> {
    let xx = product(x, x)?;
    let cube = product(&xx.object, x)?;
    let first = cube.first.then(&xx.first)?;
    let second = cube.first.then(&xx.second)?.then(f)?;
    Ok(Cone {
        object: cube.object,
        first,
        second,
    })
}

/// Runs the exposition example over the two-element algebra with `points`
/// global points and `f` the identity.
pub fn exposition_counterexample(h: &Arc<HeytingAlgebra>, points: usize, limit: Limit) -> Result<ExpositionReport> {
    if h.size() != 2 {
        return Err(Error::Input("the exposition example runs over the two-element algebra".into()));
    }
    let names: Vec<String> = (1..=points).map(|i| format!("x{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let x = discrete(h, &refs);
    let f = TRelation::identity(&x);
    let cube = exposing_cube(&x, &f)?;

    let found = mediations(&cube, &cube.first, &cube.second, limit)?;
    let global: Vec<usize> = (0..cube.object.len())
        .filter(|&c| cube.object.existence(c) == h.top())
        .collect();
    let maps = found
        .iter()
        .map(|m| {
            global
                .iter()
                .map(|&c| (cube.object.name(c).to_string(), cube.object.name(m.apply(c)).to_string()))
                .collect()
        })
        .collect();

    let gamma = graph(&f)?;
    let onto_graph = mediations(&gamma, &cube.first, &cube.first.then(&f)?, limit)?.len();
    let mut all = Vec::new();
    for u in crate::tset::relation::hom_set(&x, &x, limit)? {
        let v = u.then(&f)?;
        all.push(mediations(&gamma, &u, &v, limit)?.len());
    }
    Ok(ExpositionReport {
        points,
        mediating_maps: found.len(),
        maps,
        graph_mediations: onto_graph,
        graph_mediations_all: all,
    })
}
