//! Named algebras used throughout the tests, the guide and the CLI.

use std::sync::Arc;

use super::{HeytingAlgebra, PosetSpec};

/// `{mu < M}`: the classical truth values.
pub fn two_element() -> Arc<HeytingAlgebra> {
    chain(2)
}

/// `{mu < p < M}`: the smallest non-Boolean algebra.
pub fn chain3() -> Arc<HeytingAlgebra> {
    chain(3)
}

/// The chain with `n >= 2` elements. Middle elements are named `p` when
/// there is exactly one, otherwise `a`, `b`, `c`, ...
pub fn chain(n: usize) -> Arc<HeytingAlgebra> {
    assert!(n >= 2, "a chain needs a bottom and a top");
    let names = middle_names(n - 2);
    let mut elements = vec!["mu".to_string()];
    elements.extend(names);
    elements.push("M".to_string());
    let covers = elements
        .windows(2)
        .map(|w| (w[0].clone(), w[1].clone()))
        .collect();
    let spec = PosetSpec { elements, covers };
    Arc::new(HeytingAlgebra::build(&spec).expect("chains are complete Heyting algebras"))
}

/// The four-element Boolean algebra `mu < a, b < M`.
pub fn diamond() -> Arc<HeytingAlgebra> {
    let spec = PosetSpec::new(
        ["mu", "a", "b", "M"],
        &[("mu", "a"), ("mu", "b"), ("a", "M"), ("b", "M")],
    );
    Arc::new(HeytingAlgebra::build(&spec).expect("the diamond is Boolean"))
}

/// The pentagon `N5`: a lattice that is not distributive, so not a frame.
pub fn pentagon_spec() -> PosetSpec {
    PosetSpec::new(
        ["mu", "a", "b", "c", "M"],
        &[("mu", "a"), ("a", "c"), ("c", "M"), ("mu", "b"), ("b", "M")],
    )
}

pub(crate) fn middle_names(k: usize) -> Vec<String> {
    if k == 1 {
        return vec!["p".to_string()];
    }
    (0..k)
        .map(|i| {
            if i < 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("e{i}")
            }
        })
        .collect()
}
