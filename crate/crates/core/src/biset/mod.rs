//! Double Burnside modules `kB(G, H)`: the canonical basis of transitive
//! bisets, composition by the Mackey formula, elementary bisets and the
//! butterfly factorization.

mod elementary;
mod invariants;
mod mackey;
mod oracle;
mod space;

pub use elementary::{
    butterfly_factorize, compose_chain, deflation, induction, inflation, isogation, restriction, ElementaryBiset,
    ElementaryKind,
};
pub use invariants::ProductInvariants;
pub(crate) use mackey::mackey_terms;
pub use mackey::{compose, is_left_free, mackey_compose, star, trace_count, trace_map};
pub use oracle::realize_and_compose_oracle;
pub use space::{Basis, BisetElement, BisetLabel, BisetRegistry, BisetSpace};
