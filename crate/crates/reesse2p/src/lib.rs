//! A knapsack-style public-key encryption scheme over nonnormal
//! super-increasing sequences, together with a cryptanalysis workbench
//! (meet-in-the-middle, lattice reduction, lever-function diagnostics)
//! and a bit-operation cost model for comparing parameter sets.
//!
//! Layout:
//! - [`numeric`]: modular arithmetic, extended gcd, probable-prime search.
//! - [`sequence`]: nonnormal super-increasing sequences, weighted subset
//!   sums, and the greedy decoder.
//! - [`keyforge`]: key generation, the lever-function transform, and key
//!   file (de)serialization.
//! - [`codec`]: block encryption/decryption and the candidate-k sweep.
//! - [`message`]: byte-stream framing and ciphertext files.
//! - [`analysis`]: attacks and diagnostics against the scheme.
//! - [`cost`]: closed-form cost/length figures and reference tables.

pub mod analysis;
pub mod codec;
pub mod cost;
pub mod error;
pub mod keyforge;
pub mod message;
pub mod numeric;
pub mod sequence;

pub use codec::{decrypt, decrypt_checked, encrypt, CipherBlock};
pub use error::{Error, Result};
pub use keyforge::{keygen, KeygenConfig, PrivateKey, Profile, PublicKey};
pub use sequence::{BitBlock, NonnormalSeq};
