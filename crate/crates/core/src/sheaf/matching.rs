//! Matching families, amalgamation and the sheaf condition.

use super::presheaf::{bottom_up, lower_covers, Presheaf};
use crate::heyting::Elem;
use crate::site::{Sieve, Topology};

/// A choice of section at every member of a sieve, compatible with
/// restriction. Entries are sorted by element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingFamily {
    pub sieve: Sieve,
    pub choice: Vec<(Elem, usize)>,
}

impl MatchingFamily {
    pub fn get(&self, q: Elem) -> Option<usize> {
        self.choice.iter().find(|(r, _)| *r == q).map(|&(_, x)| x)
    }

    pub fn describe(&self, p: &Presheaf) -> String {
        let h = p.algebra();
        let parts: Vec<String> = self
            .choice
            .iter()
            .map(|&(q, x)| format!("{}={}", h.name(q), p.sections(q)[x]))
            .collect();
        format!("[{}] over {}", parts.join(", "), self.sieve.describe(h))
    }
}

/// All matching families for `s`.
pub fn matching_families(p: &Presheaf, s: &Sieve) -> Vec<MatchingFamily> {
    let h = p.algebra();
    let members: Vec<Elem> = bottom_up(h).into_iter().filter(|q| s.contains(*q)).collect();
    let mut out = Vec::new();
    let mut cur = vec![usize::MAX; h.size()];
    fn go(
        p: &Presheaf,
        s: &Sieve,
        members: &[Elem],
        k: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<MatchingFamily>,
    ) {
        let h = p.algebra();
        if k == members.len() {
            let mut choice: Vec<(Elem, usize)> = members.iter().map(|&q| (q, cur[q.index()])).collect();
            choice.sort();
            out.push(MatchingFamily { sieve: *s, choice });
            return;
        }
        let q = members[k];
        for x in 0..p.count(q) {
            if lower_covers(h, q)
                .into_iter()
                .all(|r| p.restrict(q, r, x) == cur[r.index()])
            {
                cur[q.index()] = x;
                go(p, s, members, k + 1, cur, out);
            }
        }
        cur[q.index()] = usize::MAX;
    }
    go(p, s, &members, 0, &mut cur, &mut out);
    out
}

/// Sections at the sieve's element restricting to the family everywhere.
pub fn amalgamate(p: &Presheaf, m: &MatchingFamily) -> Vec<usize> {
    let at = m.sieve.at;
    (0..p.count(at))
        .filter(|&x| m.choice.iter().all(|&(q, y)| p.restrict(at, q, x) == y))
        .collect()
}

/// A covering family with the wrong number of amalgamations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SheafWitness {
    pub family: MatchingFamily,
    pub amalgamations: Vec<usize>,
}

impl SheafWitness {
    pub fn describe(&self, p: &Presheaf) -> String {
        format!(
            "{} has {} amalgamations",
            self.family.describe(p),
            self.amalgamations.len()
        )
    }
}

fn first_failure(p: &Presheaf, j: &Topology, bad: impl Fn(usize) -> bool) -> Option<SheafWitness> {
    let h = p.algebra();
    for at in h.elements() {
        for s in j.covering_sieves(at) {
            for family in matching_families(p, &s) {
                let amalgamations = amalgamate(p, &family);
                if bad(amalgamations.len()) {
                    return Some(SheafWitness {
                        family,
                        amalgamations,
                    });
                }
            }
        }
    }
    None
}

/// The first covering family with two or more amalgamations.
pub fn separation_witness(p: &Presheaf, j: &Topology) -> Option<SheafWitness> {
    first_failure(p, j, |n| n > 1)
}

pub fn is_separated(p: &Presheaf, j: &Topology) -> bool {
    separation_witness(p, j).is_none()
}

/// The first covering family without exactly one amalgamation.
pub fn sheaf_witness(p: &Presheaf, j: &Topology) -> Option<SheafWitness> {
    first_failure(p, j, |n| n != 1)
}

pub fn is_sheaf(p: &Presheaf, j: &Topology) -> bool {
    sheaf_witness(p, j).is_none()
}
