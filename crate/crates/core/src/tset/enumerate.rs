//! Enumeration of small T-sets up to isomorphism of identity tables.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{default_names, TSet};
use crate::error::{Limit, Result};
use crate::heyting::enumerate::permutations;
use crate::heyting::{Elem, HeytingAlgebra};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TSetFilter {
    pub separated: bool,
    pub postulate: bool,
}

impl TSetFilter {
    pub const ANY: TSetFilter = TSetFilter {
        separated: false,
        postulate: false,
    };
    pub const COMPLETE: TSetFilter = TSetFilter {
        separated: true,
        postulate: true,
    };
}

/// All quasi-T-sets with at most `max_carrier` elements passing `filter`,
/// one per isomorphism class of tables, ordered by size then canonical code.
pub fn enumerate_tsets(
    h: &Arc<HeytingAlgebra>,
    max_carrier: usize,
    filter: TSetFilter,
    limit: Limit,
) -> Result<Vec<Arc<TSet>>> {
    let mut out = Vec::new();
    for n in 0..=max_carrier {
        let mut found: BTreeMap<Vec<u8>, Arc<TSet>> = BTreeMap::new();
        let perms = permutations(n);
        let mut table = vec![h.bottom(); n * n];
        let mut raw = Vec::new();
        fill(h, n, 0, 0, &mut table, &mut raw);
        debug_assert!(raw.iter().all(|t| TSet::from_fn(h.clone(), default_names(n), |i, j| t[i * n + j]).is_quasi_tset()));
        for t in raw {
            let tset = TSet::from_fn(h.clone(), default_names(n), |i, j| t[i * n + j]);
            if filter.separated && !tset.is_separated() {
                continue;
            }
            if filter.postulate && !tset.satisfies_postulate(limit)? {
                continue;
            }
            let code = canonical_code(&t, n, &perms);
            found.entry(code).or_insert_with(|| Arc::new(tset));
        }
        out.extend(found.into_values());
    }
    Ok(out)
}

/// Fills cell `(i, j)` with `i <= j`, column by column, the diagonal cell
/// of each column first; the diagonal is non-decreasing in element index.
fn fill(h: &HeytingAlgebra, n: usize, i: usize, j: usize, table: &mut [Elem], out: &mut Vec<Vec<Elem>>) {
    if j == n {
        out.push(table.to_vec());
        return;
    }
    let (ni, nj) = match (i == j, j) {
        (true, 0) => (1, 1),
        (true, _) => (0, j),
        (false, _) if i + 1 < j => (i + 1, j),
        (false, _) => (j + 1, j + 1),
    };
    if i == j {
        let lo = if j == 0 { 0 } else { table[(j - 1) * n + j - 1].index() };
        for v in h.elements().filter(|v| v.index() >= lo) {
            table[j * n + j] = v;
            fill(h, n, ni, nj, table, out);
        }
        return;
    }
    let bound = h.meet(table[i * n + i], table[j * n + j]);
    for v in h.down(bound).iter() {
        let ok = (0..i).all(|k| {
            let ik = table[i * n + k];
            let kj = table[k * n + j];
            h.leq(h.meet(ik, kj), v) && h.leq(h.meet(ik, v), kj) && h.leq(h.meet(v, kj), ik)
        });
        if ok {
            table[i * n + j] = v;
            table[j * n + i] = v;
            fill(h, n, ni, nj, table, out);
        }
    }
}

fn canonical_code(t: &[Elem], n: usize, perms: &[Vec<usize>]) -> Vec<u8> {
    perms
        .iter()
        .map(|p| {
            let mut code = Vec::with_capacity(n * n);
            for i in 0..n {
                for j in 0..n {
                    code.push(t[p[i] * n + p[j]].index() as u8);
                }
            }
            code
        })
        .min()
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heyting::instances::{chain3, diamond, two_element};

    /// Brute force over every symmetric table, deduplicated the same way.
    fn brute(h: &Arc<HeytingAlgebra>, n: usize) -> usize {
        let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        let perms = permutations(n);
        let mut codes = std::collections::BTreeSet::new();
        let total = h.size().pow(cells.len() as u32);
        for mut k in 0..total {
            let mut t = vec![h.bottom(); n * n];
            for &(i, j) in &cells {
                let v = h.at(k % h.size());
                k /= h.size();
                t[i * n + j] = v;
                t[j * n + i] = v;
            }
            let tset = TSet::from_fn(h.clone(), default_names(n), |i, j| t[i * n + j]);
            if tset.is_quasi_tset() {
                codes.insert(canonical_code(&t, n, &perms));
            }
        }
        codes.len()
    }

    #[test]
    fn matches_brute_force() {
        for h in [two_element(), chain3(), diamond()] {
            let all = enumerate_tsets(&h, 3, TSetFilter::ANY, Limit::default()).unwrap();
            assert!(all.iter().all(|t| t.is_quasi_tset()));
            for n in 0..=3 {
                let got = all.iter().filter(|t| t.len() == n).count();
                assert_eq!(got, brute(&h, n), "n = {n}");
            }
        }
    }

    #[test]
    fn complete_sets_over_two_element() {
        // Over {mu, M} a complete T-set is a set with a single zero element
        // of existence mu; one class per number of global points.
        let h = two_element();
        let all = enumerate_tsets(&h, 4, TSetFilter::COMPLETE, Limit::default()).unwrap();
        let sizes: Vec<usize> = all.iter().map(|t| t.len()).collect();
        assert_eq!(sizes, vec![1, 2, 3, 4]);
    }
}
