//! Rational-subset membership in free inverse monoids.

mod loops;
mod multiset;
mod nfa;
mod tree_automaton;

pub use loops::{
    build_marked_nfa, covering_loop_search, is_eps_loop, nodes, rat_member, rat_member_slp, Membership,
};
pub use multiset::Multiset;
pub use nfa::WordNFA;
pub use tree_automaton::{ta_accepts, ta_transition_check, LoopCoverState};
