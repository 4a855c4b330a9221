use std::sync::{Arc, OnceLock};

use proptest::prelude::*;
use tsets::heyting::enumerate::enumerate_algebras;
use tsets::heyting::{Elem, ElemSet, HeytingAlgebra};

fn algebras() -> &'static [Arc<HeytingAlgebra>] {
    static ALL: OnceLock<Vec<Arc<HeytingAlgebra>>> = OnceLock::new();
    ALL.get_or_init(|| enumerate_algebras(6).unwrap())
}

/// An algebra with three elements drawn from it.
fn triple() -> impl Strategy<Value = (Arc<HeytingAlgebra>, Elem, Elem, Elem)> {
    (0..algebras().len(), any::<u64>(), any::<u64>(), any::<u64>()).prop_map(|(i, a, b, c)| {
        let h = algebras()[i].clone();
        let n = h.size() as u64;
        let (p, q, r) = (h.at((a % n) as usize), h.at((b % n) as usize), h.at((c % n) as usize));
        (h, p, q, r)
    })
}

proptest! {
    #[test]
    fn lattice_laws((h, p, q, r) in triple()) {
        prop_assert_eq!(h.meet(p, q), h.meet(q, p));
        prop_assert_eq!(h.meet(p, h.meet(q, r)), h.meet(h.meet(p, q), r));
        prop_assert_eq!(h.join(p, h.meet(p, q)), p);
        prop_assert_eq!(h.meet(p, h.join(q, r)), h.join(h.meet(p, q), h.meet(p, r)));
        prop_assert_eq!(h.meet(p, q) == p, h.leq(p, q));
    }

    #[test]
    fn implication_laws((h, p, q, r) in triple()) {
        prop_assert_eq!(h.leq(h.meet(p, r), q), h.leq(r, h.implies(p, q)));
        prop_assert_eq!(h.implies(p, p), h.top());
        prop_assert_eq!(h.meet(p, h.implies(p, q)), h.meet(p, q));
        prop_assert_eq!(h.implies(h.join(p, q), r), h.meet(h.implies(p, r), h.implies(q, r)));
    }

    #[test]
    fn negation_laws((h, p, q, _r) in triple()) {
        prop_assert_eq!(h.meet(p, h.negate(p)), h.bottom());
        prop_assert!(h.leq(p, h.negate(h.negate(p))));
        prop_assert_eq!(h.negate(h.negate(h.negate(p))), h.negate(p));
        prop_assert_eq!(h.negate(h.join(p, q)), h.meet(h.negate(p), h.negate(q)));
        prop_assert_eq!(h.negate(p), h.implies(p, h.bottom()));
    }

    #[test]
    fn envelope_is_least_upper_bound(i in 0..algebras().len(), bits in any::<u64>()) {
        let h = &algebras()[i];
        let s = ElemSet::from_bits(bits).intersection(h.all());
        let e = h.envelope(s);
        prop_assert!(s.iter().all(|a| h.leq(a, e)));
        for u in h.elements() {
            if s.iter().all(|a| h.leq(a, u)) {
                prop_assert!(h.leq(e, u));
            }
        }
    }
}

#[test]
fn boolean_algebras_are_the_power_sets() {
    // among algebras up to 6 elements only sizes 2 and 4 carry a Boolean one
    let sizes: Vec<usize> = algebras().iter().filter(|h| h.is_boolean()).map(|h| h.size()).collect();
    assert_eq!(sizes, vec![2, 4]);
}
