//! Finite-alphabet probability objects and information measures.
//!
//! Every logarithm in this crate is base 2, so entropies, divergences,
//! rates and exponents are all in bits.

mod dist;
mod info;
mod sequence;

pub use dist::{Channel, JointPmf, Pmf, SUM_TOLERANCE};
pub use info::{
    binary_entropy, compose, entropy, kl_divergence, mutual_information, push_to_uy, star,
};
pub use sequence::{
    empirical_type, is_jointly_typical, is_typical, joint_type, l1_distance, JointTypicality,
    Sequence, Typicality, MAX_SEQUENCE_ALPHABET,
};
