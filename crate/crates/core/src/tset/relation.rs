//! Relations between T-sets.
//!
//! A relation `rho: A -> B` is a function on carriers that keeps existence,
//! `Ee rho(a) = Ee a`, and commutes with localisation,
//! `rho(a |p) = rho(a) |p`. On T-sets satisfying the postulate these are the
//! sheaf morphisms. Hom-sets are enumerated up to indiscernibility: every
//! image is the lowest-index representative of its class.

use std::sync::Arc;

use serde::Serialize;

use super::TSet;
use crate::error::{Error, Limit, Result};
use crate::heyting::Elem;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TRelation {
    pub source: Arc<TSet>,
    pub target: Arc<TSet>,
    pub map: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RelationViolation {
    /// `Ee rho(x) != Ee x`.
    Existence { x: String },
    /// `rho(x |p) != rho(x) |p`.
    Localisation { x: String, p: String },
    /// `Id(x, y) <= Id(rho x, rho y)` fails.
    Identity { x: String, y: String },
}

impl std::fmt::Display for RelationViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RelationViolation::Existence { x } => write!(f, "Ee rho({x}) != Ee {x}"),
            RelationViolation::Localisation { x, p } => write!(f, "rho({x}|{p}) != rho({x})|{p}"),
            RelationViolation::Identity { x, y } => write!(f, "Id({x},{y}) is not below Id(rho {x}, rho {y})"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub violations: Vec<RelationViolation>,
}

impl RelationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

fn same_algebra(a: &TSet, b: &TSet) -> Result<()> {
    if a.algebra() == b.algebra() {
        Ok(())
    } else {
        Err(Error::AlgebraMismatch)
    }
}

impl TRelation {
    pub fn new(source: Arc<TSet>, target: Arc<TSet>, map: Vec<usize>) -> Result<Self> {
        same_algebra(&source, &target)?;
        if map.len() != source.len() || map.iter().any(|&b| b >= target.len()) {
            return Err(Error::Input("relation map does not fit its source and target".into()));
        }
        Ok(TRelation { source, target, map })
    }

    pub fn identity(a: &Arc<TSet>) -> Self {
        TRelation {
            source: a.clone(),
            target: a.clone(),
            map: (0..a.len()).map(|x| a.representative(x)).collect(),
        }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `other . self`.
    pub fn then(&self, other: &TRelation) -> Result<TRelation> {
        if *self.target != *other.source {
            return Err(Error::Input("relations do not compose".into()));
        }
        Ok(TRelation {
            source: self.source.clone(),
            target: other.target.clone(),
            map: self
                .map
                .iter()
                .map(|&b| other.target.representative(other.map[b]))
                .collect(),
        })
    }

    /// Pointwise indiscernibility of images.
    pub fn equivalent(&self, other: &TRelation) -> bool {
        self.map.len() == other.map.len()
            && self
                .map
                .iter()
                .zip(&other.map)
                .all(|(&x, &y)| self.target.indiscernible(x, y))
    }

    /// Checks existence, localisation and the derived identity inequality.
    /// Fails with [`Error::PostulateRequired`] when a localisation in the
    /// source has no witness.
    pub fn validate(&self) -> Result<RelationReport> {
        let (a, b) = (&*self.source, &*self.target);
        let h = a.algebra().clone();
        let mut violations = Vec::new();
        for x in 0..a.len() {
            if b.existence(self.map[x]) != a.existence(x) {
                violations.push(RelationViolation::Existence {
                    x: a.name(x).to_string(),
                });
            }
        }
        if violations.is_empty() {
            for x in 0..a.len() {
                for p in h.elements() {
                    let xp = a.localise(x, p)?;
                    if !b.is_localisation_of(self.map[xp], self.map[x], p) {
                        violations.push(RelationViolation::Localisation {
                            x: a.name(x).to_string(),
                            p: h.name(p).to_string(),
                        });
                    }
                }
            }
        }
        if violations.is_empty() {
            for x in 0..a.len() {
                for y in 0..a.len() {
                    if !h.leq(a.id(x, y), b.id(self.map[x], self.map[y])) {
                        violations.push(RelationViolation::Identity {
                            x: a.name(x).to_string(),
                            y: a.name(y).to_string(),
                        });
                    }
                }
            }
        }
        Ok(RelationReport { violations })
    }

    pub fn is_valid(&self) -> Result<bool> {
        Ok(self.validate()?.is_valid())
    }
}

/// All relations `A -> B` up to indiscernibility of images.
pub fn hom_set(a: &Arc<TSet>, b: &Arc<TSet>, limit: Limit) -> Result<Vec<TRelation>> {
    hom_set_filtered(a, b, |_, _| true, limit)
}

/// As [`hom_set`], restricting the image of `x` to targets `y` with
/// `allowed(x, y)`. The guard applies to the product of candidate counts.
pub fn hom_set_filtered(
    a: &Arc<TSet>,
    b: &Arc<TSet>,
    allowed: impl Fn(usize, usize) -> bool,
    limit: Limit,
) -> Result<Vec<TRelation>> {
    same_algebra(a, b)?;
    let reps = b.representatives();
    let candidates: Vec<Vec<usize>> = (0..a.len())
        .map(|x| {
            reps.iter()
                .copied()
                .filter(|&y| b.existence(y) == a.existence(x) && allowed(x, y))
                .collect()
        })
        .collect();
    let space = candidates
        .iter()
        .fold(1u128, |acc, c| acc.saturating_mul(c.len() as u128));
    limit.check("relation enumeration", space)?;

    let h = a.algebra().clone();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(a.len());
    fn go(
        a: &Arc<TSet>,
        b: &Arc<TSet>,
        h: &crate::heyting::HeytingAlgebra,
        candidates: &[Vec<usize>],
        cur: &mut Vec<usize>,
        out: &mut Vec<TRelation>,
    ) -> Result<()> {
        let i = cur.len();
        if i == a.len() {
            let rel = TRelation {
                source: a.clone(),
                target: b.clone(),
                map: cur.clone(),
            };
            if rel.is_valid()? {
                out.push(rel);
            }
            return Ok(());
        }
        for &y in &candidates[i] {
            let ok = (0..i).all(|j| h.leq(a.id(i, j), b.id(y, cur[j])));
            if ok {
                cur.push(y);
                go(a, b, h, candidates, cur, out)?;
                cur.pop();
            }
        }
        Ok(())
    }
    go(a, b, &h, &candidates, &mut cur, &mut out)?;
    Ok(out)
}

/// An isomorphism of T-sets as a pair of mutually inverse relations, if one
/// exists. Both sides are compared through their indiscernibility classes.
pub fn find_isomorphism(a: &Arc<TSet>, b: &Arc<TSet>) -> Result<Option<(TRelation, TRelation)>> {
    same_algebra(a, b)?;
    let ra = a.representatives();
    let rb = b.representatives();
    if ra.len() != rb.len() || existence_profile(a) != existence_profile(b) {
        return Ok(None);
    }
    let mut assign: Vec<usize> = Vec::with_capacity(ra.len());
    let mut used = vec![false; rb.len()];
    fn go(
        a: &TSet,
        b: &TSet,
        ra: &[usize],
        rb: &[usize],
        assign: &mut Vec<usize>,
        used: &mut [bool],
    ) -> bool {
        let i = assign.len();
        if i == ra.len() {
            return true;
        }
        let x = ra[i];
        for k in 0..rb.len() {
            if used[k] {
                continue;
            }
            let y = rb[k];
            let ok = b.existence(y) == a.existence(x)
                && (0..i).all(|j| a.id(x, ra[j]) == b.id(y, rb[assign[j]]));
            if ok {
                used[k] = true;
                assign.push(k);
                if go(a, b, ra, rb, assign, used) {
                    return true;
                }
                assign.pop();
                used[k] = false;
            }
        }
        false
    }
    if !go(a, b, &ra, &rb, &mut assign, &mut used) {
        return Ok(None);
    }
    let class_of = |t: &TSet, reps: &[usize], x: usize| {
        let r = t.representative(x);
        reps.iter().position(|&y| y == r).expect("representative is listed")
    };
    let forward = (0..a.len())
        .map(|x| rb[assign[class_of(a, &ra, x)]])
        .collect();
    let mut inverse = vec![0; rb.len()];
    for (i, &k) in assign.iter().enumerate() {
        inverse[k] = i;
    }
    let backward = (0..b.len())
        .map(|y| ra[inverse[class_of(b, &rb, y)]])
        .collect();
    Ok(Some((
        TRelation {
            source: a.clone(),
            target: b.clone(),
            map: forward,
        },
        TRelation {
            source: b.clone(),
            target: a.clone(),
            map: backward,
        },
    )))
}

pub fn isomorphic(a: &Arc<TSet>, b: &Arc<TSet>) -> Result<bool> {
    Ok(find_isomorphism(a, b)?.is_some())
}

/// Values of `Ee` on the carrier; a cheap isomorphism invariant.
pub(crate) fn existence_profile(a: &TSet) -> Vec<Elem> {
    let mut v: Vec<Elem> = a.representatives().into_iter().map(|x| a.existence(x)).collect();
    v.sort();
    v
}
