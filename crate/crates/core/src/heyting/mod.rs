//! Finite complete Heyting algebras.
//!
//! An algebra is built from a Hasse diagram ([`PosetSpec`]). Construction
//! closes the cover relation reflexively and transitively, locates the least
//! and greatest elements, tabulates binary meets and joins, and then checks
//! the frame law `sigma(A) /\ b = sigma({a /\ b | a in A})`. Implication and
//! pseudo-complement are tabulated from their defining envelopes:
//!
//! ```text
//! p => q  =  sigma { t | p /\ t <= q }
//!    ~p   =  sigma { q | p /\ q = mu }
//! ```
//!
//! Elements are identified by their position in the `PosetSpec`; names are only
//! surface syntax.

mod elemset;
pub mod enumerate;
pub mod instances;

pub use elemset::{Elem, ElemSet, ElemSetIter};

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hasse-diagram description of a finite poset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetSpec {
    pub elements: Vec<String>,
    /// `(lower, upper)` pairs.
    pub covers: Vec<(String, String)>,
}

impl PosetSpec {
    pub fn new<S: Into<String>>(elements: impl IntoIterator<Item = S>, covers: &[(&str, &str)]) -> Self {
        PosetSpec {
            elements: elements.into_iter().map(Into::into).collect(),
            covers: covers
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
        }
    }
}

/// Largest algebra for which the frame law is checked over every subset.
pub const EXHAUSTIVE_FRAME_LIMIT: usize = 6;

/// Options for [`HeytingAlgebra::build_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildOptions {
    /// Seed for the sampled frame-law check on algebras above
    /// [`EXHAUSTIVE_FRAME_LIMIT`] elements.
    pub seed: u64,
    pub samples: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            seed: 0x7E5E7,
            samples: 10_000,
        }
    }
}

/// How the frame law was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum FrameCheck {
    Exhaustive { subsets: u64 },
    Sampled { seed: u64, subsets: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeytingAlgebra {
    names: Vec<String>,
    index: HashMap<String, Elem>,
    below: Vec<ElemSet>,
    above: Vec<ElemSet>,
    bottom: Elem,
    top: Elem,
    meet: Vec<Elem>,
    join: Vec<Elem>,
    implies: Vec<Elem>,
    negate: Vec<Elem>,
    frame_check: FrameCheck,
}

/// Convenience for [`HeytingAlgebra::build`].
pub fn build_algebra(spec: &PosetSpec) -> Result<HeytingAlgebra> {
    HeytingAlgebra::build(spec)
}

impl HeytingAlgebra {
    pub fn build(spec: &PosetSpec) -> Result<Self> {
        Self::build_with(spec, BuildOptions::default())
    }

    pub fn build_with(spec: &PosetSpec, opts: BuildOptions) -> Result<Self> {
        let n = spec.elements.len();
        if n == 0 {
            return Err(Error::InvalidSpec("no elements".into()));
        }
        if n > 64 {
            return Err(Error::TooLarge(n));
        }
        let mut index = HashMap::with_capacity(n);
        for (i, name) in spec.elements.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::InvalidSpec(format!("element {i} has an empty name")));
            }
            if index.insert(name.clone(), Elem::from_index(i)).is_some() {
                return Err(Error::InvalidSpec(format!("duplicate element name `{name}`")));
            }
        }
        let lookup = |s: &str| index.get(s).copied().ok_or_else(|| Error::UnknownElement(s.to_string()));

        let mut below: Vec<ElemSet> = (0..n).map(|i| ElemSet::singleton(Elem::from_index(i))).collect();
        for (lo, up) in &spec.covers {
            let (lo, up) = (lookup(lo)?, lookup(up)?);
            below[up.index()].insert(lo);
        }
        // Warshall closure over sets.
        for k in 0..n {
            let bk = below[k];
            for b in below.iter_mut() {
                if b.contains(Elem::from_index(k)) {
                    *b = b.union(bk);
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let (ei, ej) = (Elem::from_index(i), Elem::from_index(j));
                if below[i].contains(ej) && below[j].contains(ei) {
                    return Err(Error::Cycle(spec.elements[i].clone(), spec.elements[j].clone()));
                }
            }
        }
        let mut above = vec![ElemSet::EMPTY; n];
        for (i, b) in below.iter().enumerate() {
            for j in b.iter() {
                above[j.index()].insert(Elem::from_index(i));
            }
        }
        let all = ElemSet::full(n);
        let bottom = (0..n)
            .find(|&i| above[i] == all)
            .map(Elem::from_index)
            .ok_or_else(|| Error::NoBound("no least element".into()))?;
        let top = (0..n)
            .find(|&i| below[i] == all)
            .map(Elem::from_index)
            .ok_or_else(|| Error::NoBound("no greatest element".into()))?;

        let mut meet = Vec::with_capacity(n * n);
        let mut join = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let lower = below[i].intersection(below[j]);
                let glb = lower.iter().find(|g| lower.is_subset(below[g.index()])).ok_or_else(|| {
                    Error::NoBound(format!(
                        "{} and {} have no greatest lower bound",
                        spec.elements[i], spec.elements[j]
                    ))
                })?;
                meet.push(glb);
                let upper = above[i].intersection(above[j]);
                let lub = upper.iter().find(|g| upper.is_subset(above[g.index()])).ok_or_else(|| {
                    Error::NoBound(format!(
                        "{} and {} have no least upper bound",
                        spec.elements[i], spec.elements[j]
                    ))
                })?;
                join.push(lub);
            }
        }

        let mut alg = HeytingAlgebra {
            names: spec.elements.clone(),
            index,
            below,
            above,
            bottom,
            top,
            meet,
            join,
            implies: Vec::new(),
            negate: Vec::new(),
            frame_check: FrameCheck::Exhaustive { subsets: 0 },
        };
        alg.frame_check = alg.check_frame_law(opts)?;
        alg.check_binary_distributivity()?;

        let mut implies = Vec::with_capacity(n * n);
        for p in alg.elements() {
            for q in alg.elements() {
                let ts: ElemSet = alg.elements().filter(|&t| alg.leq(alg.meet(p, t), q)).collect();
                implies.push(alg.envelope(ts));
            }
        }
        alg.implies = implies;
        alg.negate = alg
            .elements()
            .map(|p| {
                let qs: ElemSet = alg.elements().filter(|&q| alg.meet(p, q) == bottom).collect();
                alg.envelope(qs)
            })
            .collect();
        Ok(alg)
    }

    fn check_frame_law(&self, opts: BuildOptions) -> Result<FrameCheck> {
        let n = self.size();
        let check = |subset: ElemSet| -> Result<()> {
            let s = self.envelope(subset);
            let upper = subset.iter().fold(self.all(), |acc, a| acc.intersection(self.above[a.index()]));
            if !upper.contains(s) || !upper.is_subset(self.above[s.index()]) {
                return Err(Error::NoBound(format!("{:?} has no least upper bound", self.names_of(subset))));
            }
            for b in self.elements() {
                let rhs = self.envelope(subset.iter().map(|a| self.meet(a, b)).collect());
                if self.meet(s, b) != rhs {
                    return Err(Error::NotDistributive {
                        subset: self.names_of(subset),
                        element: self.name(b).to_string(),
                    });
                }
            }
            Ok(())
        };
        if n <= EXHAUSTIVE_FRAME_LIMIT {
            let mut count = 0;
            for subset in self.all().subsets() {
                check(subset)?;
                count += 1;
            }
            Ok(FrameCheck::Exhaustive { subsets: count })
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            check(ElemSet::EMPTY)?;
            check(self.all())?;
            for _ in 0..opts.samples {
                check(ElemSet(rng.random::<u64>() & self.all().0))?;
            }
            Ok(FrameCheck::Sampled {
                seed: opts.seed,
                subsets: opts.samples as u64 + 2,
            })
        }
    }

    fn check_binary_distributivity(&self) -> Result<()> {
        for a in self.elements() {
            for b in self.elements() {
                for c in self.elements() {
                    if self.meet(a, self.join(b, c)) != self.join(self.meet(a, b), self.meet(a, c)) {
                        return Err(Error::NotDistributive {
                            subset: vec![self.name(b).to_string(), self.name(c).to_string()],
                            element: self.name(a).to_string(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone + '_ {
        (0..self.size()).map(Elem::from_index)
    }

    pub fn all(&self) -> ElemSet {
        ElemSet::full(self.size())
    }

    pub fn name(&self, e: Elem) -> &str {
        &self.names[e.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn names_of(&self, s: ElemSet) -> Vec<String> {
        s.iter().map(|e| self.name(e).to_string()).collect()
    }

    pub fn lookup(&self, name: &str) -> Option<Elem> {
        self.index.get(name).copied()
    }

    pub fn elem(&self, name: &str) -> Result<Elem> {
        self.lookup(name).ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    /// The element at position `i`.
    pub fn at(&self, i: usize) -> Elem {
        assert!(i < self.size(), "element index {i} out of range");
        Elem::from_index(i)
    }

    pub fn bottom(&self) -> Elem {
        self.bottom
    }

    pub fn top(&self) -> Elem {
        self.top
    }

    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.below[b.index()].contains(a)
    }

    /// `down(p)` is the principal ideal of `p`.
    pub fn down(&self, p: Elem) -> ElemSet {
        self.below[p.index()]
    }

    pub fn up(&self, p: Elem) -> ElemSet {
        self.above[p.index()]
    }

    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.meet[a.index() * self.size() + b.index()]
    }

    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.join[a.index() * self.size() + b.index()]
    }

    /// Least upper bound of a subset; `mu` for the empty set.
    pub fn envelope(&self, s: ElemSet) -> Elem {
        s.iter().fold(self.bottom, |acc, e| self.join(acc, e))
    }

    pub fn envelope_of(&self, it: impl IntoIterator<Item = Elem>) -> Elem {
        it.into_iter().fold(self.bottom, |acc, e| self.join(acc, e))
    }

    pub fn implies(&self, p: Elem, q: Elem) -> Elem {
        self.implies[p.index() * self.size() + q.index()]
    }

    pub fn negate(&self, p: Elem) -> Elem {
        self.negate[p.index()]
    }

    pub fn is_boolean(&self) -> bool {
        self.elements().all(|p| self.negate(self.negate(p)) == p)
    }

    pub fn frame_check(&self) -> FrameCheck {
        self.frame_check
    }

    /// Elements sorted so that every element precedes everything below it.
    pub fn top_down(&self) -> Vec<Elem> {
        let mut v: Vec<Elem> = self.elements().collect();
        v.sort_by_key(|e| (std::cmp::Reverse(self.down(*e).len()), e.index()));
        v
    }

    /// The Hasse diagram of this algebra.
    pub fn to_spec(&self) -> PosetSpec {
        let mut covers = Vec::new();
        for up in self.elements() {
            for lo in self.down(up).iter() {
                if lo == up {
                    continue;
                }
                let between = self.down(up).intersection(self.up(lo));
                if between.len() == 2 {
                    covers.push((self.name(lo).to_string(), self.name(up).to_string()));
                }
            }
        }
        PosetSpec {
            elements: self.names.clone(),
            covers,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::instances::*;
    use super::*;

    /// Independent lub: the unique upper bound below every other upper bound.
    fn brute_lub(h: &HeytingAlgebra, s: ElemSet) -> Option<Elem> {
        let ubs: Vec<Elem> = h.elements().filter(|&u| s.iter().all(|x| h.leq(x, u))).collect();
        ubs.iter().copied().find(|&u| ubs.iter().all(|&v| h.leq(u, v)))
    }

    #[test]
    fn two_element_is_boolean() {
        let h = two_element();
        assert!(h.is_boolean());
        assert_eq!(h.negate(h.bottom()), h.top());
        assert_eq!(h.negate(h.top()), h.bottom());
    }

    #[test]
    fn chain3_invariants_exhaustively() {
        let h = chain3();
        for s in h.all().subsets() {
            assert_eq!(Some(h.envelope(s)), brute_lub(&h, s));
        }
        for p in h.elements() {
            assert!(h.leq(h.bottom(), p) && h.leq(p, h.top()));
            for q in h.elements() {
                assert_eq!(h.meet(p, q) == p, h.leq(p, q));
                assert_eq!(h.meet(p, q), h.meet(q, p));
            }
        }
        assert_eq!(h.frame_check(), FrameCheck::Exhaustive { subsets: 8 });
    }

    #[test]
    fn pentagon_is_rejected() {
        match HeytingAlgebra::build(&pentagon_spec()) {
            Err(Error::NotDistributive { subset, element }) => {
                // brute force located this witness: sigma{a,b} = M, M /\ c = c,
                // but sigma{a /\ c, b /\ c} = a.
                assert_eq!(subset, vec!["a".to_string(), "b".to_string()]);
                assert_eq!(element, "c");
            }
            other => panic!("expected NotDistributive, got {other:?}"),
        }
    }

    #[test]
    fn cycle_and_bounds() {
        let spec = PosetSpec::new(["x", "y"], &[("x", "y"), ("y", "x")]);
        assert!(matches!(HeytingAlgebra::build(&spec), Err(Error::Cycle(..))));
        let spec = PosetSpec::new(["x", "y"], &[]);
        assert!(matches!(HeytingAlgebra::build(&spec), Err(Error::NoBound(_))));
        // two maximal elements over a common bottom: no top
        let spec = PosetSpec::new(["mu", "a", "b"], &[("mu", "a"), ("mu", "b")]);
        assert!(matches!(HeytingAlgebra::build(&spec), Err(Error::NoBound(_))));
        // a,b both below c,d: {a,b} has no least upper bound
        let spec = PosetSpec::new(
            ["mu", "a", "b", "c", "d", "M"],
            &[
                ("mu", "a"),
                ("mu", "b"),
                ("a", "c"),
                ("a", "d"),
                ("b", "c"),
                ("b", "d"),
                ("c", "M"),
                ("d", "M"),
            ],
        );
        assert!(matches!(HeytingAlgebra::build(&spec), Err(Error::NoBound(_))));
    }

    #[test]
    fn bad_names() {
        let spec = PosetSpec::new(["x", "x"], &[]);
        assert!(matches!(HeytingAlgebra::build(&spec), Err(Error::InvalidSpec(_))));
        let spec = PosetSpec::new(["x", ""], &[]);
        assert!(matches!(HeytingAlgebra::build(&spec), Err(Error::InvalidSpec(_))));
        let spec = PosetSpec::new(["x"], &[("x", "z")]);
        assert!(matches!(HeytingAlgebra::build(&spec), Err(Error::UnknownElement(_))));
    }

    #[test]
    fn envelope_examples() {
        let h = diamond();
        let (a, b) = (h.elem("a").unwrap(), h.elem("b").unwrap());
        assert_eq!(h.envelope(ElemSet::EMPTY), h.bottom());
        assert_eq!(h.envelope([a, b].into_iter().collect()), h.top());
        let c = chain3();
        let p = c.elem("p").unwrap();
        assert_eq!(c.envelope([c.bottom(), p].into_iter().collect()), p);
    }

    #[test]
    fn implication_examples() {
        let h = chain3();
        let p = h.elem("p").unwrap();
        for x in h.elements() {
            assert_eq!(h.implies(x, x), h.top());
        }
        assert_eq!(h.implies(h.top(), p), p);
        assert_eq!(h.implies(p, h.bottom()), h.bottom());
    }

    #[test]
    fn chain3_double_negation_is_strict() {
        let h = chain3();
        let p = h.elem("p").unwrap();
        assert_eq!(h.negate(p), h.bottom());
        assert_eq!(h.negate(h.negate(p)), h.top());
        assert!(!h.is_boolean());
        assert!(diamond().is_boolean());
    }

    #[test]
    fn sampled_mode_above_six() {
        let h = chain(8);
        match h.frame_check() {
            FrameCheck::Sampled { subsets, .. } => assert!(subsets >= 10_000),
            other => panic!("expected sampled mode, got {other:?}"),
        }
    }

    #[test]
    fn hasse_round_trip() {
        for h in [two_element(), chain3(), diamond(), chain(5)] {
            let again = HeytingAlgebra::build(&h.to_spec()).unwrap();
            assert_eq!(*h, again);
        }
    }
}
