//! Meet-in-the-middle attack on weighted subset-sum ciphertexts.
//!
//! The block is split at t = n/2. The upper half `b_{t+1}..b_n` is
//! tabulated by (partial sum, 1-count); the multiplicities of the lower
//! half depend on the upper 1-count w, so the lower enumeration probes the
//! matching w slice. The non-modular total is swept over
//! `S = Ebar + k*M` for `k` in `[0, n(n+1)/2]`.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::codec::{encrypt, CipherBlock};
use crate::error::Result;
use crate::keyforge::PublicKey;
use crate::sequence::BitBlock;

/// Recovered block (if any) plus the number of table operations spent.
#[derive(Debug, Clone)]
pub struct MitmResult {
    pub block: Option<BitBlock>,
    pub work: u64,
    pub success: bool,
}

pub const MITM_LIMIT: usize = 32;

/// Default budget: table construction plus one probe pass per k candidate.
pub fn mitm_budget(n: usize) -> u64 {
    let n = n as u64;
    (1u64 << (n / 2)) * (n * (n + 1) / 2 + 1)
}

/// Recover the plaintext of `cipher` from the public key alone, for toy n.
/// Deterministic: candidates are scanned in ascending (k, lower mask,
/// upper mask) order and the first verified hit is returned.
pub fn mitm_attack(public: &PublicKey, cipher: &CipherBlock, budget: u64) -> Result<MitmResult> {
    let n = public.n();
    if n > MITM_LIMIT {
        return Err(crate::error::Error::OracleScaleExceeded(n, MITM_LIMIT));
    }
    let t = n / 2;
    let upper_len = n - t;
    let mut work = 0u64;

    // Upper-half table: (sum, weight) -> upper masks, ascending.
    let mut table: HashMap<(BigUint, u32), Vec<u64>> = HashMap::new();
    for mask in 0..1u64 << upper_len {
        let mut sum = BigUint::zero();
        let mut l = 0u64;
        for i in (0..upper_len).rev() {
            if mask >> i & 1 == 1 {
                l += 1;
                sum += &public.c[t + i] * l;
            }
        }
        table.entry((sum, mask.count_ones())).or_default().push(mask);
    }

    let ksweep = (n as u64) * (n as u64 + 1) / 2;
    for k in 0..=ksweep {
        let s = &cipher.ebar + public.m.value() * k;
        for lower_mask in 0..1u64 << t {
            if work >= budget {
                return Ok(MitmResult { block: None, work, success: false });
            }
            work += 1;
            let low_ones = lower_mask.count_ones();
            for w in 0..=upper_len as u32 {
                // lower-half contribution under the assumed upper 1-count w
                let mut lower = BigUint::zero();
                let mut l = w as u64;
                for i in (0..t).rev() {
                    if lower_mask >> i & 1 == 1 {
                        l += 1;
                        lower += &public.c[i] * l;
                    }
                }
                if lower > s {
                    continue;
                }
                let f = &s - lower;
                let Some(uppers) = table.get(&(f, w)) else { continue };
                for &upper_mask in uppers {
                    if low_ones + upper_mask.count_ones() == 0 {
                        continue;
                    }
                    let mask = lower_mask | upper_mask << t;
                    let block = BitBlock::from_mask(mask, n);
                    if encrypt(public, &block)?.ebar == cipher.ebar {
                        return Ok(MitmResult { block: Some(block), work, success: true });
                    }
                }
            }
        }
    }
    Ok(MitmResult { block: None, work, success: false })
}
