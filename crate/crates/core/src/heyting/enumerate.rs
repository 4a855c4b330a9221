//! Enumeration of all finite complete Heyting algebras up to isomorphism.
//!
//! Every finite lattice has a least and a greatest element, so only the order
//! among the `k = n - 2` middle elements varies. Candidate orders are strict
//! relations contained in `{(i, j) | i < j}` (every poset has a linear
//! extension), closed under transitivity, deduplicated by their minimal
//! encoding over all relabellings, and kept when [`HeytingAlgebra::build`]
//! accepts them.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::instances::middle_names;
use super::{HeytingAlgebra, PosetSpec};
use crate::error::{Error, Result};

/// Largest size accepted by [`enumerate_algebras`].
pub const MAX_ENUMERATED_SIZE: usize = 8;

/// All complete Heyting algebras with `2..=max_size` elements, one per
/// isomorphism class, ordered by size and then by canonical code.
pub fn enumerate_algebras(max_size: usize) -> Result<Vec<Arc<HeytingAlgebra>>> {
    if max_size > MAX_ENUMERATED_SIZE {
        return Err(Error::SizeGuard {
            what: "algebra enumeration".into(),
            size: max_size as u128,
            limit: MAX_ENUMERATED_SIZE as u64,
        });
    }
    let mut out = Vec::new();
    for n in 2..=max_size {
        let k = n - 2;
        let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| ((i + 1)..k).map(move |j| (i, j))).collect();
        let perms = permutations(k);
        let mut classes: BTreeMap<u64, Vec<(usize, usize)>> = BTreeMap::new();
        for mask in 0u64..(1u64 << pairs.len()) {
            let rel: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(b, _)| mask & (1 << b) != 0)
                .map(|(_, &p)| p)
                .collect();
            if !transitive(&rel) {
                continue;
            }
            let code = perms
                .iter()
                .map(|sigma| rel.iter().fold(0u64, |acc, &(i, j)| acc | 1 << (sigma[i] * k + sigma[j])))
                .min()
                .unwrap_or(0);
            classes.entry(code).or_insert(rel);
        }
        for rel in classes.into_values() {
            let mut elements = vec!["mu".to_string()];
            elements.extend(middle_names(k));
            elements.push("M".to_string());
            let mut covers: Vec<(String, String)> = rel
                .iter()
                .map(|&(i, j)| (elements[i + 1].clone(), elements[j + 1].clone()))
                .collect();
            for m in &elements[1..=k] {
                covers.push(("mu".into(), m.clone()));
                covers.push((m.clone(), "M".into()));
            }
            if k == 0 {
                covers.push(("mu".into(), "M".into()));
            }
            if let Ok(h) = HeytingAlgebra::build(&PosetSpec { elements, covers }) {
                // rebuild from the Hasse diagram so `to_spec` round-trips verbatim
                out.push(Arc::new(HeytingAlgebra::build(&h.to_spec())?));
            }
        }
    }
    Ok(out)
}

fn transitive(rel: &[(usize, usize)]) -> bool {
    rel.iter().all(|&(a, b)| {
        rel.iter()
            .filter(|&&(c, _)| c == b)
            .all(|&(_, d)| rel.contains(&(a, d)))
    })
}

pub(crate) fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in permutations(k - 1) {
        for pos in 0..k {
            let mut p = rest.clone();
            p.insert(pos, k - 1);
            out.push(p);
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distributive_lattice_counts() {
        // OEIS A006982: finite distributive lattices with n = 2..7 elements.
        let algs = enumerate_algebras(7).unwrap();
        let counts: Vec<usize> = (2..=7).map(|n| algs.iter().filter(|h| h.size() == n).count()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 8]);
    }

    #[test]
    fn small_sizes() {
        let two = enumerate_algebras(2).unwrap();
        assert_eq!(two.len(), 1);
        assert_eq!(two[0].names(), ["mu", "M"]);
        let three = enumerate_algebras(3).unwrap();
        assert_eq!(three.len(), 2);
        assert_eq!(three[1].names(), ["mu", "p", "M"]);
    }

    #[test]
    fn permutations_count() {
        assert_eq!(permutations(0).len(), 1);
        assert_eq!(permutations(4).len(), 24);
    }
}
