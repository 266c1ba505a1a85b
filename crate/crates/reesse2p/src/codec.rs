//! Block encryption and decryption.
//!
//! Encryption folds the block into the weighted modular sum
//! `Ebar = sum C_i b_i L_i mod M`. Decryption multiplies by `W^-1`, then
//! repeatedly adds `-Z` until the candidate residue is even and at most
//! `E_n`, greedily decodes it, and accepts once a decode both zeroes the
//! residual and (when the public key is at hand) re-encrypts to the
//! original ciphertext. The shift count for a true ciphertext is bounded
//! by `(n+4) * n(n+1)/2`.

use num_bigint::BigUint;
use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::keyforge::{k_budget, PrivateKey, PublicKey};
use crate::sequence::{self, BitBlock, Tables};

/// A single-block ciphertext residue in `[0, M)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CipherBlock {
    pub ebar: BigUint,
}

/// Encrypt one nonzero block: `Ebar = sum C_i b_i L_i mod M`.
pub fn encrypt(public: &PublicKey, block: &BitBlock) -> Result<CipherBlock> {
    if block.len() != public.n() {
        return Err(Error::LengthMismatch { got: block.len(), want: public.n() });
    }
    if block.is_zero() {
        return Err(Error::EmptyBlock);
    }
    let m = public.m.value();
    let mut ebar = BigUint::zero();
    let mut l = 0u64;
    for i in (0..public.n()).rev() {
        if block.bits()[i] {
            l += 1;
            ebar = (ebar + &public.c[i] * l) % m;
        }
    }
    Ok(CipherBlock { ebar })
}

/// Decrypt one block. When `verify` is supplied, a candidate decode is
/// accepted only if re-encrypting it reproduces the original ciphertext;
/// otherwise the sweep continues (this closes the toy-scale nonuniqueness
/// window). Returns the number of `-Z` shifts used alongside the block.
pub fn decrypt_traced(
    private: &PrivateKey,
    verify: Option<&PublicKey>,
    cipher: &CipherBlock,
) -> Result<(BitBlock, u64)> {
    let tables = sequence::precompute_tables(&private.a);
    decrypt_with_tables(private, verify, cipher, &tables)
}

pub fn decrypt_with_tables(
    private: &PrivateKey,
    verify: Option<&PublicKey>,
    cipher: &CipherBlock,
    tables: &Tables,
) -> Result<(BitBlock, u64)> {
    let m = private.m.value();
    if cipher.ebar >= *m {
        return Err(Error::ResidueOutOfRange { a: cipher.ebar.clone(), m: m.clone() });
    }
    let n = private.n();
    let e_n = &tables.e[n - 1];
    let budget = k_budget(n);
    let mut cand = &cipher.ebar * &private.w_inv % m;
    for k in 1..=budget {
        cand += &private.neg_z;
        if cand >= *m {
            cand -= m;
        }
        if cand.bit(0) || cand > *e_n {
            continue;
        }
        if let Some(block) = sequence::greedy_decode(&cand, &private.a, tables) {
            if block.is_zero() {
                continue; // encrypt rejects zero blocks, cannot be genuine
            }
            match verify {
                Some(public) => {
                    if encrypt(public, &block)?.ebar == cipher.ebar {
                        return Ok((block, k));
                    }
                    // spurious decode; keep sweeping
                }
                None => return Ok((block, k)),
            }
        }
    }
    Err(Error::InvalidCiphertext(budget))
}

/// Decrypt without the re-encryption safeguard.
pub fn decrypt(private: &PrivateKey, cipher: &CipherBlock) -> Result<BitBlock> {
    decrypt_traced(private, None, cipher).map(|(b, _)| b)
}

/// Decrypt with the re-encryption safeguard.
pub fn decrypt_checked(
    private: &PrivateKey,
    public: &PublicKey,
    cipher: &CipherBlock,
) -> Result<BitBlock> {
    decrypt_traced(private, Some(public), cipher).map(|(b, _)| b)
}

/// Append `r` uniform random bits to an `(n-r)`-bit payload, retrying until
/// the padded block is nonzero.
pub fn pad_block<R: Rng + ?Sized>(payload: &[bool], r: usize, rng: &mut R) -> Result<BitBlock> {
    let n = payload.len() + r;
    loop {
        let mut bits = payload.to_vec();
        bits.extend((0..r).map(|_| rng.gen_bool(0.5)));
        debug_assert_eq!(bits.len(), n);
        let block = BitBlock::new(bits);
        if !block.is_zero() {
            return Ok(block);
        }
        if r == 0 {
            return Err(Error::EmptyBlock);
        }
    }
}

/// Strip the last `r` bits.
pub fn unpad_block(block: &BitBlock, r: usize) -> Result<Vec<bool>> {
    if r > block.len() {
        return Err(Error::PayloadTooLong { got: r, cap: block.len() });
    }
    Ok(block.bits()[..block.len() - r].to_vec())
}

/// Outcome of the toy-scale plaintext-uniqueness sampling experiment.
#[derive(Debug, Clone)]
pub struct CollisionReport {
    pub n: usize,
    pub trials: u64,
    /// Trials whose candidate-k sweep produced two or more distinct decodes.
    pub ambiguous: u64,
    /// Reference bound n^3 / 2^n.
    pub bound: f64,
}

impl CollisionReport {
    pub fn fraction(&self) -> f64 {
        self.ambiguous as f64 / self.trials as f64
    }
}

/// Sample random blocks through one toy key and count how often the full
/// candidate-k sweep admits more than one plaintext decode. The valid
/// decodes are enumerated with the greedy decoder, which the Property-2
/// oracle suite shows to be exact on true subset sums.
pub fn uniqueness_experiment<R: Rng + ?Sized>(
    private: &PrivateKey,
    public: &PublicKey,
    trials: u64,
    rng: &mut R,
) -> Result<CollisionReport> {
    let n = private.n();
    if n > sequence::BRUTE_FORCE_LIMIT {
        return Err(Error::OracleScaleExceeded(n, sequence::BRUTE_FORCE_LIMIT));
    }
    let tables = sequence::precompute_tables(&private.a);
    let m = private.m.value();
    let e_n = tables.e[n - 1].clone();
    let budget = k_budget(n);

    let mut ambiguous = 0u64;
    for _ in 0..trials {
        let block = BitBlock::random_nonzero(n, rng);
        let cipher = encrypt(public, &block)?;
        let mut cand = &cipher.ebar * &private.w_inv % m;
        let mut first: Option<BitBlock> = None;
        for _ in 1..=budget {
            cand += &private.neg_z;
            if cand >= *m {
                cand -= m;
            }
            if cand.bit(0) || cand > e_n {
                continue;
            }
            if let Some(decoded) = sequence::greedy_decode(&cand, &private.a, &tables) {
                if decoded.is_zero() {
                    continue;
                }
                match &first {
                    None => first = Some(decoded),
                    Some(prev) if *prev != decoded => {
                        ambiguous += 1;
                        break;
                    }
                    Some(_) => {}
                }
            }
        }
    }
    Ok(CollisionReport {
        n,
        trials,
        ambiguous,
        bound: (n as f64).powi(3) / 2f64.powi(n as i32),
    })
}
