//! T-sets: finite carriers with an identity table valued in a Heyting algebra.
//!
//! A table `Id: A x A -> T` is a *quasi-T-set* when it is symmetric and
//! transitive (`Id(x,y) /\ Id(y,z) <= Id(x,z)`). An *atom* is a map
//! `a: A -> T` with
//!
//! ```text
//! (A1)  a(x) /\ Id(x,y) <= a(y)
//! (A2)  a(x) /\ a(y)    <= Id(x,y)
//! ```
//!
//! and it is *real* when `a = Id(x, -)` for some `x` in the carrier. A T-set
//! satisfies the postulate of materialism when every atom is real; those are
//! the objects that correspond to sheaves.
//!
//! Localisation, compatibility and element order are all decided on atoms, so
//! `x |p = y` means `Id(y, -) = Id(x, -) /\ p`. On separated T-sets this
//! coincides with equality of elements.

pub mod enumerate;
pub mod relation;

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{pow_saturating, Error, Limit, Result};
use crate::heyting::{Elem, HeytingAlgebra};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TSet {
    algebra: Arc<HeytingAlgebra>,
    names: Vec<String>,
    id: Vec<Elem>,
}

/// A candidate singleton: one algebra value per carrier element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomMap(pub Vec<Elem>);

impl AtomMap {
    pub fn values(&self) -> &[Elem] {
        &self.0
    }

    pub fn get(&self, x: usize) -> Elem {
        self.0[x]
    }

    /// `(a |p)(y) = a(y) /\ p`.
    pub fn localise(&self, h: &HeytingAlgebra, p: Elem) -> AtomMap {
        AtomMap(self.0.iter().map(|&v| h.meet(v, p)).collect())
    }

    /// Envelope of the values; the existence of the atom in the completion.
    pub fn extent(&self, h: &HeytingAlgebra) -> Elem {
        h.envelope_of(self.0.iter().copied())
    }

    pub fn zero(h: &HeytingAlgebra, len: usize) -> AtomMap {
        AtomMap(vec![h.bottom(); len])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AtomAxiom {
    A1,
    A2,
}

/// A failing instance of an atom axiom at the pair `(x, y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AtomViolation {
    pub axiom: AtomAxiom,
    pub x: usize,
    pub y: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TSetViolation {
    Asymmetric { x: String, y: String },
    Intransitive { x: String, y: String, z: String },
    Indiscernible { x: String, y: String },
}

impl fmt::Display for TSetViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TSetViolation::Asymmetric { x, y } => write!(f, "Id({x},{y}) != Id({y},{x})"),
            TSetViolation::Intransitive { x, y, z } => {
                write!(f, "Id({x},{y}) /\\ Id({y},{z}) is not below Id({x},{z})")
            }
            TSetViolation::Indiscernible { x, y } => {
                write!(f, "{x} and {y} are distinct but indiscernible")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TSetReport {
    pub violations: Vec<TSetViolation>,
}

impl TSetReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PostulateReport {
    pub atoms: usize,
    pub unreal: Vec<AtomMap>,
}

impl PostulateReport {
    pub fn holds(&self) -> bool {
        self.unreal.is_empty()
    }
}

/// Least upper bound of a compatible family, with its real witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Envelope {
    pub atom: AtomMap,
    pub witness: usize,
}

const DEFAULT_NAMES: [&str; 6] = ["x", "y", "z", "u", "v", "w"];

/// Default carrier names: `x, y, z, u, v, w, x6, x7, ...`.
pub fn default_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| DEFAULT_NAMES.get(i).map(|s| s.to_string()).unwrap_or_else(|| format!("x{i}")))
        .collect()
}

impl TSet {
    /// Checks only the shape of the table; use [`TSet::validate`] for the
    /// identity axioms.
    pub fn new(algebra: Arc<HeytingAlgebra>, names: Vec<String>, table: Vec<Vec<Elem>>) -> Result<Self> {
        let n = names.len();
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidTSet(format!("identity table must be {n} x {n}")));
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(Error::InvalidTSet(format!("duplicate element name `{name}`")));
            }
        }
        if table.iter().flatten().any(|e| e.index() >= algebra.size()) {
            return Err(Error::InvalidTSet("table value outside the algebra".into()));
        }
        Ok(TSet {
            algebra,
            names,
            id: table.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(
        algebra: Arc<HeytingAlgebra>,
        names: Vec<String>,
        mut f: impl FnMut(usize, usize) -> Elem,
    ) -> Self {
        let n = names.len();
        let id = (0..n * n).map(|k| f(k / n, k % n)).collect();
        TSet { algebra, names, id }
    }

    /// Builds a table from element names, e.g. `[["M","p"],["p","M"]]`.
    pub fn from_names(algebra: Arc<HeytingAlgebra>, names: &[&str], table: &[&[&str]]) -> Result<Self> {
        let rows = table
            .iter()
            .map(|row| row.iter().map(|v| algebra.elem(v)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        TSet::new(algebra, names.iter().map(|s| s.to_string()).collect(), rows)
    }

    pub fn empty(algebra: Arc<HeytingAlgebra>) -> Self {
        TSet {
            algebra,
            names: Vec::new(),
            id: Vec::new(),
        }
    }

    pub fn algebra(&self) -> &Arc<HeytingAlgebra> {
        &self.algebra
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn id(&self, x: usize, y: usize) -> Elem {
        self.id[x * self.len() + y]
    }

    pub fn table(&self) -> Vec<Vec<Elem>> {
        let n = self.len();
        (0..n).map(|x| self.id[x * n..(x + 1) * n].to_vec()).collect()
    }

    /// `Ee x = Id(x, x)`.
    pub fn existence(&self, x: usize) -> Elem {
        self.id(x, x)
    }

    pub fn validate(&self, require_separated: bool) -> TSetReport {
        let h = &*self.algebra;
        let n = self.len();
        let mut violations = Vec::new();
        for x in 0..n {
            for y in (x + 1)..n {
                if self.id(x, y) != self.id(y, x) {
                    violations.push(TSetViolation::Asymmetric {
                        x: self.names[x].clone(),
                        y: self.names[y].clone(),
                    });
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if !h.leq(h.meet(self.id(x, y), self.id(y, z)), self.id(x, z)) {
                        violations.push(TSetViolation::Intransitive {
                            x: self.names[x].clone(),
                            y: self.names[y].clone(),
                            z: self.names[z].clone(),
                        });
                    }
                }
            }
        }
        if require_separated {
            for x in 0..n {
                for y in (x + 1)..n {
                    if self.indiscernible(x, y) {
                        violations.push(TSetViolation::Indiscernible {
                            x: self.names[x].clone(),
                            y: self.names[y].clone(),
                        });
                    }
                }
            }
        }
        TSetReport { violations }
    }

    /// Symmetric and transitive.
    pub fn is_quasi_tset(&self) -> bool {
        self.validate(false).is_valid()
    }

    /// `Id(x,y) = Ee x = Ee y`.
    pub fn indiscernible(&self, x: usize, y: usize) -> bool {
        let e = self.id(x, y);
        e == self.existence(x) && e == self.existence(y)
    }

    pub fn is_separated(&self) -> bool {
        (0..self.len()).all(|x| ((x + 1)..self.len()).all(|y| !self.indiscernible(x, y)))
    }

    /// Lowest-index element indiscernible from `x`.
    pub fn representative(&self, x: usize) -> usize {
        (0..x).find(|&y| self.indiscernible(x, y)).unwrap_or(x)
    }

    pub fn representatives(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.representative(x) == x).collect()
    }

    /// The real atom `Id(x, -)`.
    pub fn singleton(&self, x: usize) -> AtomMap {
        AtomMap((0..self.len()).map(|y| self.id(x, y)).collect())
    }

    pub fn check_atom(&self, a: &AtomMap) -> Result<(), AtomViolation> {
        self.check_axioms(a, true)
    }

    pub fn is_atom(&self, a: &AtomMap) -> bool {
        self.check_atom(a).is_ok()
    }

    /// A1 alone: `a` describes a T-subset.
    pub fn is_subobject_map(&self, a: &AtomMap) -> bool {
        self.check_axioms(a, false).is_ok()
    }

    fn check_axioms(&self, a: &AtomMap, with_a2: bool) -> Result<(), AtomViolation> {
        let h = &*self.algebra;
        let n = self.len();
        if a.0.len() != n {
            return Err(AtomViolation {
                axiom: AtomAxiom::A1,
                x: n,
                y: n,
            });
        }
        for x in 0..n {
            for y in 0..n {
                if !h.leq(h.meet(a.get(x), self.id(x, y)), a.get(y)) {
                    return Err(AtomViolation {
                        axiom: AtomAxiom::A1,
                        x,
                        y,
                    });
                }
            }
        }
        if with_a2 {
            for x in 0..n {
                for y in 0..n {
                    if !h.leq(h.meet(a.get(x), a.get(y)), self.id(x, y)) {
                        return Err(AtomViolation {
                            axiom: AtomAxiom::A2,
                            x,
                            y,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Every `x` with `a = Id(x, -)`, in carrier order.
    pub fn real_witnesses(&self, a: &AtomMap) -> Result<Vec<usize>> {
        if let Err(v) = self.check_atom(a) {
            return Err(Error::NotAtom(format!("{:?} fails at ({}, {})", v.axiom, v.x, v.y)));
        }
        Ok(self.witnesses_unchecked(a))
    }

    fn witnesses_unchecked(&self, a: &AtomMap) -> Vec<usize> {
        (0..self.len())
            .filter(|&x| (0..self.len()).all(|y| self.id(x, y) == a.get(y)))
            .collect()
    }

    /// All atoms, in lexicographic order of their value vectors.
    pub fn atoms(&self, limit: Limit) -> Result<Vec<AtomMap>> {
        self.enumerate_maps(limit, true)
    }

    /// All maps satisfying A1.
    pub fn subobject_maps(&self, limit: Limit) -> Result<Vec<AtomMap>> {
        self.enumerate_maps(limit, false)
    }

    fn enumerate_maps(&self, limit: Limit, with_a2: bool) -> Result<Vec<AtomMap>> {
        let h = &*self.algebra;
        let n = self.len();
        limit.check("atom enumeration", pow_saturating(h.size(), n))?;
        let mut out = Vec::new();
        let mut cur: Vec<Elem> = Vec::with_capacity(n);
        self.extend_maps(&mut cur, with_a2, &mut out);
        Ok(out)
    }

    fn extend_maps(&self, cur: &mut Vec<Elem>, with_a2: bool, out: &mut Vec<AtomMap>) {
        let h = &*self.algebra;
        let i = cur.len();
        if i == self.len() {
            out.push(AtomMap(cur.clone()));
            return;
        }
        for v in h.elements() {
            if with_a2 && !h.leq(v, self.existence(i)) {
                continue;
            }
            let ok = (0..i).all(|j| {
                let w = cur[j];
                h.leq(h.meet(w, self.id(j, i)), v)
                    && h.leq(h.meet(v, self.id(i, j)), w)
                    && (!with_a2 || h.leq(h.meet(v, w), self.id(i, j)))
            });
            if ok {
                cur.push(v);
                self.extend_maps(cur, with_a2, out);
                cur.pop();
            }
        }
    }

    /// Checks that every atom has a real witness.
    pub fn postulate(&self, limit: Limit) -> Result<PostulateReport> {
        let atoms = self.atoms(limit)?;
        let unreal = atoms
            .iter()
            .filter(|a| self.witnesses_unchecked(a).is_empty())
            .cloned()
            .collect();
        Ok(PostulateReport {
            atoms: atoms.len(),
            unreal,
        })
    }

    pub fn satisfies_postulate(&self, limit: Limit) -> Result<bool> {
        Ok(self.postulate(limit)?.holds())
    }

    /// The element representing `Id(x, -) /\ p`, lowest index first.
    pub fn localise(&self, x: usize, p: Elem) -> Result<usize> {
        let target = self.singleton(x).localise(&self.algebra, p);
        self.witnesses_unchecked(&target).first().copied().ok_or_else(|| {
            Error::PostulateRequired(format!(
                "{} localised to {} has no real witness",
                self.names[x],
                self.algebra.name(p)
            ))
        })
    }

    /// `x = y |p`, decided on atoms.
    pub fn is_localisation_of(&self, x: usize, y: usize, p: Elem) -> bool {
        let h = &*self.algebra;
        (0..self.len()).all(|z| self.id(x, z) == h.meet(self.id(y, z), p))
    }

    /// `x |Ee y = y |Ee x`.
    pub fn compatible(&self, x: usize, y: usize) -> bool {
        let h = &*self.algebra;
        let (ex, ey) = (self.existence(x), self.existence(y));
        (0..self.len()).all(|z| h.meet(self.id(x, z), ey) == h.meet(self.id(y, z), ex))
    }

    /// `x <= y` iff `Ee x = Id(x, y)`.
    pub fn element_leq(&self, x: usize, y: usize) -> bool {
        self.existence(x) == self.id(x, y)
    }

    /// The envelope `pi(x) = sigma{ Id(b, x) | b in B }` of a pairwise
    /// compatible family together with its lowest real witness.
    pub fn envelope(&self, family: &[usize]) -> Result<Envelope> {
        for (i, &a) in family.iter().enumerate() {
            for &b in &family[i + 1..] {
                if !self.compatible(a, b) {
                    return Err(Error::NotCompatible(self.names[a].clone(), self.names[b].clone()));
                }
            }
        }
        let h = &*self.algebra;
        let atom = AtomMap(
            (0..self.len())
                .map(|x| h.envelope_of(family.iter().map(|&b| self.id(b, x))))
                .collect(),
        );
        if let Err(v) = self.check_atom(&atom) {
            return Err(Error::NotAtom(format!(
                "envelope fails {:?} at ({}, {})",
                v.axiom, v.x, v.y
            )));
        }
        let witness = self.witnesses_unchecked(&atom).first().copied().ok_or_else(|| {
            Error::PostulateRequired("the envelope of the family has no real witness".into())
        })?;
        Ok(Envelope { atom, witness })
    }

    /// The T-set of all atoms with `Id(a, b) = sigma_x a(x) /\ b(x)`.
    pub fn completion(&self, limit: Limit) -> Result<TSet> {
        let h = &*self.algebra;
        let atoms = self.atoms(limit)?;
        let names = atoms.iter().map(|a| self.atom_name(a)).collect();
        let n = self.len();
        Ok(TSet::from_fn(self.algebra.clone(), names, |i, j| {
            h.envelope_of((0..n).map(|x| h.meet(atoms[i].get(x), atoms[j].get(x))))
        }))
    }

    /// Position of `Id(x, -)` among [`TSet::atoms`], i.e. the canonical map
    /// into the completion.
    pub fn singleton_embedding(&self, limit: Limit) -> Result<Vec<usize>> {
        let atoms = self.atoms(limit)?;
        Ok((0..self.len())
            .map(|x| {
                let s = self.singleton(x);
                atoms.binary_search(&s).expect("singletons are atoms of a quasi-T-set")
            })
            .collect())
    }

    fn atom_name(&self, a: &AtomMap) -> String {
        match self.witnesses_unchecked(a).first() {
            Some(&x) => self.names[x].clone(),
            None => {
                let vals: Vec<&str> = a.0.iter().map(|&v| self.algebra.name(v)).collect();
                format!("[{}]", vals.join(","))
            }
        }
    }

    /// Elements of existence exactly `p`.
    pub fn elements_of_existence(&self, p: Elem) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.existence(x) == p).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heyting::instances::{chain3, diamond, two_element};

    fn single(h: &Arc<HeytingAlgebra>, e: &str) -> TSet {
        TSet::from_names(h.clone(), &["x"], &[&[e]]).unwrap()
    }

    /// The algebra itself with `Id(p, q) = p /\ q`.
    fn terminal(h: &Arc<HeytingAlgebra>) -> TSet {
        TSet::from_fn(h.clone(), h.names().to_vec(), |i, j| h.meet(h.at(i), h.at(j)))
    }

    #[test]
    fn validation_examples() {
        let h = chain3();
        assert!(single(&h, "M").validate(true).is_valid());

        let pair = TSet::from_names(h.clone(), &["x", "y"], &[&["M", "M"], &["M", "M"]]).unwrap();
        assert!(pair.validate(false).is_valid());
        let report = pair.validate(true);
        assert_eq!(
            report.violations,
            vec![TSetViolation::Indiscernible {
                x: "x".into(),
                y: "y".into()
            }]
        );

        let skew = TSet::from_names(h.clone(), &["x", "y"], &[&["M", "p"], &["mu", "M"]]).unwrap();
        assert!(skew.validate(false).violations.contains(&TSetViolation::Asymmetric {
            x: "x".into(),
            y: "y".into()
        }));
    }

    #[test]
    fn existence_and_localised_existence() {
        let h = chain3();
        let p = h.elem("p").unwrap();
        assert_eq!(single(&h, "p").existence(0), p);
        let t = terminal(&h);
        for q in h.elements() {
            assert_eq!(t.existence(q.index()), q);
            for r in h.elements() {
                let x = t.localise(q.index(), r).unwrap();
                assert_eq!(t.existence(x), h.meet(t.existence(q.index()), r));
                assert_eq!(x, h.meet(q, r).index());
            }
        }
    }

    #[test]
    fn atom_examples() {
        let h = chain3();
        let t = terminal(&h);
        for c in 0..t.len() {
            assert!(t.is_atom(&t.singleton(c)));
        }
        assert!(t.is_atom(&AtomMap::zero(&h, t.len())));

        let apart = TSet::from_names(h.clone(), &["x", "y"], &[&["M", "mu"], &["mu", "M"]]).unwrap();
        let constant = AtomMap(vec![h.top(), h.top()]);
        let v = apart.check_atom(&constant).unwrap_err();
        assert_eq!(v.axiom, AtomAxiom::A2);
        assert_eq!((v.x, v.y), (0, 1));
    }

    #[test]
    fn witness_examples() {
        let h = chain3();
        let x = single(&h, "p");
        assert_eq!(x.real_witnesses(&x.singleton(0)).unwrap(), vec![0]);
        assert!(x.real_witnesses(&AtomMap::zero(&h, 1)).unwrap().is_empty());

        let pair = TSet::from_names(h.clone(), &["x", "y"], &[&["M", "M"], &["M", "M"]]).unwrap();
        assert_eq!(pair.real_witnesses(&pair.singleton(0)).unwrap(), vec![0, 1]);
        assert!(matches!(
            pair.real_witnesses(&AtomMap(vec![h.top(), h.bottom()])),
            Err(Error::NotAtom(_))
        ));
    }

    #[test]
    fn postulate_examples() {
        // Enumerating all four maps {mu,M} -> {mu,M}: the atoms are exactly
        // Id(mu,-) = (mu,mu) and Id(M,-) = (mu,M).
        let h = two_element();
        let t = terminal(&h);
        let atoms = t.atoms(Limit::default()).unwrap();
        assert_eq!(atoms, vec![t.singleton(0), t.singleton(1)]);
        assert!(t.satisfies_postulate(Limit::default()).unwrap());

        let c = chain3();
        let report = single(&c, "p").postulate(Limit::default()).unwrap();
        assert_eq!(report.unreal, vec![AtomMap::zero(&c, 1)]);

        // the empty map has no witness in an empty carrier
        let empty = TSet::empty(c.clone());
        let report = empty.postulate(Limit::default()).unwrap();
        assert_eq!(report.atoms, 1);
        assert!(!report.holds());
    }

    #[test]
    fn size_guard() {
        let h = chain3();
        let t = TSet::from_fn(h.clone(), default_names(14), |i, j| if i == j { h.top() } else { h.bottom() });
        assert!(matches!(t.atoms(Limit::default()), Err(Error::SizeGuard { .. })));
    }

    #[test]
    fn localise_atom_laws() {
        let h = chain3();
        let t = terminal(&h);
        for x in 0..t.len() {
            let a = t.singleton(x);
            assert_eq!(a.localise(&h, h.top()), a);
            assert_eq!(a.localise(&h, h.bottom()), AtomMap::zero(&h, t.len()));
            for p in h.elements() {
                let ap = a.localise(&h, p);
                assert!(t.is_atom(&ap));
                assert_eq!(ap.extent(&h), h.meet(a.extent(&h), p));
                for q in h.elements() {
                    assert_eq!(ap.localise(&h, q), a.localise(&h, h.meet(p, q)));
                }
            }
        }
    }

    #[test]
    fn compatibility_examples() {
        let h = chain3();
        let t = terminal(&h);
        let p = h.elem("p").unwrap();
        for x in 0..t.len() {
            assert!(t.compatible(x, x));
            let xp = t.localise(x, p).unwrap();
            assert!(t.element_leq(xp, x));
        }
        let apart = TSet::from_names(h.clone(), &["x", "y"], &[&["M", "mu"], &["mu", "M"]]).unwrap();
        assert!(!apart.compatible(0, 1));
    }

    #[test]
    fn envelope_examples() {
        let h = chain3();
        let t = terminal(&h);
        let (mu, p) = (0, 1);
        let e = t.envelope(&[t.len() - 1]).unwrap();
        assert_eq!(e.atom, t.singleton(t.len() - 1));
        assert_eq!(e.witness, t.len() - 1);
        let e = t.envelope(&[]).unwrap();
        assert_eq!(e.atom, AtomMap::zero(&h, t.len()));
        assert_eq!(t.existence(e.witness), h.bottom());
        let e = t.envelope(&[mu, p]).unwrap();
        assert_eq!(e.witness, p);

        let d = diamond();
        let apart = TSet::from_names(d.clone(), &["x", "y"], &[&["M", "mu"], &["mu", "M"]]).unwrap();
        assert!(matches!(apart.envelope(&[0, 1]), Err(Error::NotCompatible(..))));
    }

    #[test]
    fn completion_examples() {
        let h = chain3();
        let c = single(&h, "p").completion(Limit::default()).unwrap();
        let mut ex: Vec<&str> = (0..c.len()).map(|i| h.name(c.existence(i))).collect();
        ex.sort();
        assert_eq!(ex, vec!["mu", "p"]);
        assert!(c.satisfies_postulate(Limit::default()).unwrap());
        assert!(c.is_separated());

        let e = TSet::empty(h.clone()).completion(Limit::default()).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e.existence(0), h.bottom());
    }
}
