//! Presheaves and sheaves on the poset of an algebra.
//!
//! Sheaves are taken for the territory topology unless a [`Topology`] is
//! passed explicitly. A T-set satisfying the postulate of materialism gives a
//! sheaf by sorting its elements by existence; a sheaf gives a T-set whose
//! identity measures how far down two sections agree.
//!
//! [`Topology`]: crate::site::Topology

pub mod convert;
pub mod enumerate;
pub mod matching;
pub mod presheaf;
pub mod sheafify;

pub use convert::{presheaf_to_tset, quasi_presheaf, tset_to_presheaf, Conversion};
pub use matching::{amalgamate, is_separated, is_sheaf, matching_families, sheaf_witness, MatchingFamily, SheafWitness};
pub use presheaf::{find_isomorphism, homs, isomorphic, NatTransform, Presheaf};
pub use sheafify::{plus, sheafify};
