use std::sync::{Arc, OnceLock};

use proptest::prelude::*;
use tsets::heyting::instances::{chain3, diamond};
use tsets::sheaf::enumerate::enumerate_presheaves;
use tsets::sheaf::matching::{is_separated, is_sheaf};
use tsets::sheaf::presheaf::{isomorphic, Presheaf};
use tsets::sheaf::sheafify::{plus, sheafify_arc};
use tsets::site::Topology;
use tsets::Limit;

fn pool() -> &'static [(Topology, Arc<Presheaf>)] {
    static POOL: OnceLock<Vec<(Topology, Arc<Presheaf>)>> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut out = Vec::new();
        for (h, total) in [(chain3(), 4), (diamond(), 4)] {
            let j = Topology::territory(&h);
            for p in enumerate_presheaves(&h, total, Limit::default()).unwrap() {
                out.push((j.clone(), p));
            }
        }
        out
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn sheafification_is_a_sheaf_and_idempotent(i in 0..pool().len()) {
        let (j, p) = &pool()[i];
        let s = sheafify_arc(p, j, Limit::default()).unwrap();
        prop_assert!(is_sheaf(&s, j));
        let again = sheafify_arc(&s, j, Limit::default()).unwrap();
        prop_assert!(isomorphic(&s, &again).unwrap());
        if is_sheaf(p, j) {
            prop_assert!(isomorphic(p, &s).unwrap());
        }
    }

    #[test]
    fn plus_separates(i in 0..pool().len()) {
        let (j, p) = &pool()[i];
        let once = plus(p, j, Limit::default()).unwrap();
        prop_assert!(is_separated(&once, j));
        if is_separated(p, j) {
            prop_assert!(is_sheaf(&once, j));
        }
    }
}

#[test]
fn pool_mixes_sheaves_and_non_sheaves() {
    let sheaves = pool().iter().filter(|(j, p)| is_sheaf(p, j)).count();
    assert!(sheaves > 0 && sheaves < pool().len());
}
