//! Code-based single-server private information retrieval.
//!
//! The crate provides the arithmetic ([`algebra`]), the secret codes
//! ([`codes`]), a generic query/reply/extract engine ([`framework`]), four
//! concrete retrieval schemes ([`schemes`]), the attacks that recover the
//! queried index for three of them ([`attacks`]) and a bit-exact wire format
//! ([`wire`]).

pub mod algebra;
pub mod attacks;
pub mod codes;
pub mod framework;
pub mod schemes;
pub mod wire;

pub use algebra::{Element, Matrix, RingCtx};

/// Deterministic generator used everywhere a seed is accepted.
pub type SeededRng = rand_chacha::ChaCha20Rng;

/// Builds the crate's deterministic generator from a 64-bit seed.
pub fn seeded_rng(seed: u64) -> SeededRng {
    <SeededRng as rand::SeedableRng>::seed_from_u64(seed)
}
