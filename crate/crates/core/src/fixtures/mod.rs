//! Executable instances of the hardness reductions, each with a brute-force
//! ground truth.

mod dfa;
mod idempotent;
mod pi2p;
mod rational;

pub use dfa::{convolve, ConvolutionDFA};
pub use idempotent::{gen_idempotent_pspace, IdempotentFixture};
pub use pi2p::{brute_forall_exists, gen_pi2p, pi2p_stages, Pi2pStages, SubsetSumInstance};
pub use rational::{gen_rational_pspace, RationalFixture};
