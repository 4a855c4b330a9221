//! Enumeration of small presheaves and sheaves up to isomorphism.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::matching::is_sheaf;
use super::presheaf::{cover_pairs, isomorphic, Presheaf};
use crate::error::{pow_saturating, Limit, Result};
use crate::heyting::{Elem, HeytingAlgebra};
use crate::site::Topology;

fn size_vectors(n: usize, max_total: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for k in 0..=left {
            cur.push(k);
            go(n, left - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, max_total, &mut Vec::new(), &mut out);
    out.sort_by_key(|v| (v.iter().sum::<usize>(), v.clone()));
    out
}

/// All presheaves with at most `max_total` sections in total, one per
/// isomorphism class, ordered by total size then section counts.
pub fn enumerate_presheaves(h: &Arc<HeytingAlgebra>, max_total: usize, limit: Limit) -> Result<Vec<Arc<Presheaf>>> {
    let covers = cover_pairs(h);
    let mut out: Vec<Arc<Presheaf>> = Vec::new();
    for counts in size_vectors(h.size(), max_total) {
        let space = covers.iter().fold(1u128, |acc, &(p, q)| {
            acc.saturating_mul(pow_saturating(counts[q.index()], counts[p.index()]))
        });
        limit.check("presheaf enumeration", space)?;
        if space == 0 {
            continue;
        }
        let sections: Vec<Vec<String>> = h
            .elements()
            .map(|p| (0..counts[p.index()]).map(|i| format!("{}.{}", h.name(p), i)).collect())
            .collect();
        let mut found: Vec<Arc<Presheaf>> = Vec::new();
        let mut maps: Vec<Vec<usize>> = covers.iter().map(|&(p, _)| vec![0; counts[p.index()]]).collect();
        loop {
            let table: BTreeMap<(Elem, Elem), Vec<usize>> =
                covers.iter().copied().zip(maps.iter().cloned()).collect();
            if let Ok(p) = Presheaf::from_covers(h.clone(), sections.clone(), &table) {
                let p = Arc::new(p);
                let mut fresh = true;
                for f in &found {
                    if isomorphic(f, &p)? {
                        fresh = false;
                        break;
                    }
                }
                if fresh {
                    found.push(p);
                }
            }
            if !advance(&mut maps, &covers, &counts) {
                break;
            }
        }
        out.extend(found);
    }
    Ok(out)
}

/// Odometer step over all restriction tables.
fn advance(maps: &mut [Vec<usize>], covers: &[(Elem, Elem)], counts: &[usize]) -> bool {
    for (k, &(_, q)) in covers.iter().enumerate() {
        let base = counts[q.index()];
        for slot in maps[k].iter_mut() {
            *slot += 1;
            if *slot < base {
                return true;
            }
            *slot = 0;
        }
    }
    false
}

/// Sheaves for `j` with at most `max_total` sections, up to isomorphism.
pub fn enumerate_sheaves(j: &Topology, max_total: usize, limit: Limit) -> Result<Vec<Arc<Presheaf>>> {
    Ok(enumerate_presheaves(j.algebra(), max_total, limit)?
        .into_iter()
        .filter(|p| is_sheaf(p, j))
        .collect())
}
