//! Byte-stream framing: packs an arbitrary payload into fixed-width bit
//! blocks (big-endian, most significant bit first), encrypts each block
//! independently with random suffix padding, and serializes the result as a
//! line-based ciphertext file.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::codec::{self, CipherBlock};
use crate::error::{Error, Result};
use crate::keyforge::{PrivateKey, PublicKey};

/// Minimum payload width per block; below this the framing overhead makes
/// no sense and the zero-pad tail of the last block becomes ambiguous.
pub const MIN_PAYLOAD_BITS: usize = 8;

/// MSB-first bit expansion.
pub fn pack_bits(data: &[u8]) -> Vec<bool> {
    let mut bits = Vec::with_capacity(data.len() * 8);
    for byte in data {
        for shift in (0..8).rev() {
            bits.push((byte >> shift) & 1 == 1);
        }
    }
    bits
}

/// Inverse of [`pack_bits`]; trailing bits beyond the last full byte are
/// dropped.
pub fn unpack_bits(bits: &[bool]) -> Vec<u8> {
    bits.chunks_exact(8)
        .map(|chunk| chunk.iter().fold(0u8, |acc, &b| (acc << 1) | u8::from(b)))
        .collect()
}

/// A parsed or freshly built ciphertext file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CiphertextFile {
    pub n: usize,
    pub r: usize,
    /// Exact payload length in bytes, so the zero-padded tail of the final
    /// block can be stripped on decode.
    pub bytes: u64,
    pub blocks: Vec<BigUint>,
}

/// Splits `data` into `(n - r)`-bit payload chunks (last chunk zero-padded),
/// pads each with `r` random bits, and encrypts block by block. Per-block
/// padding draws from independent streams seeded off `rng`, so the result is
/// reproducible for a fixed seed regardless of worker count.
pub fn encrypt_message<R: Rng + ?Sized>(
    public: &PublicKey,
    data: &[u8],
    r: usize,
    rng: &mut R,
) -> Result<CiphertextFile> {
    let n = public.n();
    if r >= n || n - r < MIN_PAYLOAD_BITS {
        return Err(Error::PayloadTooLong { got: r, cap: n.saturating_sub(MIN_PAYLOAD_BITS) });
    }
    let width = n - r;
    let bits = pack_bits(data);
    let chunks: Vec<Vec<bool>> = bits
        .chunks(width)
        .map(|c| {
            let mut v = c.to_vec();
            v.resize(width, false);
            v
        })
        .collect();

    let seeds: Vec<[u8; 32]> = chunks
        .iter()
        .map(|_| {
            let mut s = [0u8; 32];
            rng.fill(&mut s);
            s
        })
        .collect();

    let blocks = chunks
        .par_iter()
        .zip(seeds.par_iter())
        .map(|(chunk, seed)| {
            let mut block_rng = ChaCha20Rng::from_seed(*seed);
            let padded = codec::pad_block(chunk, r, &mut block_rng)?;
            codec::encrypt(public, &padded).map(|c| c.ebar)
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(CiphertextFile { n, r, bytes: data.len() as u64, blocks })
}

/// Decrypts every block and reassembles the byte stream. When `verify` is
/// given, each recovered block is re-encrypted and checked against the
/// ciphertext before acceptance.
pub fn decrypt_message(
    private: &PrivateKey,
    verify: Option<&PublicKey>,
    file: &CiphertextFile,
) -> Result<Vec<u8>> {
    if file.n != private.n() {
        return Err(Error::LengthMismatch { got: file.n, want: private.n() });
    }
    let width = file.n - file.r;
    let expected_bits = (file.bytes as usize) * 8;
    let capacity = file.blocks.len() * width;
    if expected_bits > capacity {
        return Err(Error::LengthMismatch { got: expected_bits, want: capacity });
    }

    let decoded = file
        .blocks
        .par_iter()
        .map(|ebar| {
            let cipher = CipherBlock { ebar: ebar.clone() };
            let (block, _) = codec::decrypt_traced(private, verify, &cipher)?;
            codec::unpad_block(&block, file.r)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut bits = Vec::with_capacity(capacity);
    for payload in decoded {
        bits.extend(payload);
    }
    bits.truncate(expected_bits);
    Ok(unpack_bits(&bits))
}

pub fn write_ciphertext(file: &CiphertextFile) -> String {
    let mut out = format!(
        "REESSE2P v1 ct n={} blocks={} r={} bytes={}\n",
        file.n,
        file.blocks.len(),
        file.r,
        file.bytes
    );
    for ebar in &file.blocks {
        out.push_str(&ebar.to_string());
        out.push('\n');
    }
    out
}

pub fn parse_ciphertext(text: &str) -> Result<CiphertextFile> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "empty file"))?;
    let fields: Vec<&str> = header.split(' ').collect();
    if fields.len() != 7 || fields[0] != "REESSE2P" || fields[1] != "v1" || fields[2] != "ct" {
        return Err(Error::parse(1, "expected header 'REESSE2P v1 ct n=.. blocks=.. r=.. bytes=..'"));
    }
    let field = |idx: usize, key: &str| -> Result<u64> {
        let raw = fields[idx]
            .strip_prefix(key)
            .and_then(|s| s.strip_prefix('='))
            .ok_or_else(|| Error::parse(1, format!("expected '{key}=<int>'")))?;
        raw.parse().map_err(|_| Error::parse(1, format!("bad integer in '{}'", fields[idx])))
    };
    let n = field(3, "n")? as usize;
    let block_count = field(4, "blocks")? as usize;
    let r = field(5, "r")? as usize;
    let bytes = field(6, "bytes")?;
    if n < 3 {
        return Err(Error::parse(1, "block length must be at least 3"));
    }
    if r >= n {
        return Err(Error::parse(1, "pad width must be smaller than the block length"));
    }

    let mut blocks = Vec::with_capacity(block_count);
    for (idx, line) in lines {
        if line.is_empty() {
            continue;
        }
        let value: BigUint = line
            .parse()
            .map_err(|_| Error::parse(idx + 1, format!("bad ciphertext integer '{line}'")))?;
        blocks.push(value);
    }
    if blocks.len() != block_count {
        return Err(Error::parse(1, format!("header says blocks={} but found {}", block_count, blocks.len())));
    }
    let width = (n - r) as u64;
    if bytes * 8 > blocks.len() as u64 * width {
        return Err(Error::parse(1, "byte count exceeds block capacity"));
    }
    Ok(CiphertextFile { n, r, bytes, blocks })
}
