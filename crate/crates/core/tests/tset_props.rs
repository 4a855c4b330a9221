use std::sync::Arc;

use proptest::prelude::*;
use tsets::heyting::instances::{chain3, diamond};
use tsets::heyting::HeytingAlgebra;
use tsets::io::{parse_tset, tset_to_json};
use tsets::sheaf::convert::{presheaf_to_tset_arc, tset_to_presheaf};
use tsets::sheaf::matching::is_sheaf;
use tsets::site::Topology;
use tsets::tset::relation::isomorphic;
use tsets::tset::TSet;
use tsets::Limit;

/// A symmetric table of algebra indices over chain3 or the diamond.
fn table() -> impl Strategy<Value = TSet> {
    (any::<bool>(), 1usize..=3).prop_flat_map(|(pick, n)| {
        let h: Arc<HeytingAlgebra> = if pick { chain3() } else { diamond() };
        let size = h.size();
        proptest::collection::vec(0..size, n * n).prop_map(move |cells| {
            let h = h.clone();
            let at = |i: usize, j: usize| cells[i.min(j) * n + i.max(j)];
            TSet::from_fn(h.clone(), tsets::tset::default_names(n), |i, j| h.at(at(i, j)))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn completion_is_complete(t in table()) {
        prop_assume!(t.is_quasi_tset());
        let limit = Limit::default();
        let c = t.completion(limit).unwrap();
        prop_assert!(c.validate(true).is_valid());
        prop_assert!(c.satisfies_postulate(limit).unwrap());
        let e = t.singleton_embedding(limit).unwrap();
        for x in 0..t.len() {
            for y in 0..t.len() {
                prop_assert_eq!(c.id(e[x], e[y]), t.id(x, y));
            }
        }
    }

    #[test]
    fn complete_tsets_round_trip(t in table()) {
        prop_assume!(t.is_quasi_tset() && t.is_separated());
        prop_assume!(t.satisfies_postulate(Limit::default()).unwrap());
        let t = Arc::new(t);
        let p = tset_to_presheaf(&t).unwrap().presheaf;
        prop_assert!(is_sheaf(&p, &Topology::territory(t.algebra())));
        let back = presheaf_to_tset_arc(&p).unwrap();
        prop_assert!(isomorphic(&t, &back).unwrap());
    }

    #[test]
    fn localisation_laws(t in table()) {
        prop_assume!(t.is_quasi_tset());
        let c = t.completion(Limit::default()).unwrap();
        let h = c.algebra().clone();
        for x in 0..c.len() {
            for p in h.elements() {
                let y = c.localise(x, p).unwrap();
                prop_assert_eq!(c.existence(y), h.meet(c.existence(x), p));
                prop_assert!(c.element_leq(y, x));
                prop_assert!(c.compatible(x, y));
                prop_assert_eq!(c.localise(y, p).unwrap(), y);
            }
        }
    }

    #[test]
    fn json_round_trip(t in table()) {
        let back = parse_tset(&tset_to_json(&t), std::path::Path::new(".")).unwrap();
        prop_assert_eq!(back.table(), t.table());
        prop_assert_eq!(back.names(), t.names());
    }
}
