//! Cryptanalysis workbench: meet-in-the-middle, lattice reduction, lever
//! diagnostics, density, and attack cost estimates.

pub mod lattice;
pub mod lever;
pub mod mitm;

use num_bigint::BigUint;

use crate::error::{Error, Result};

/// Bit-size convention used by the density formulas: position of the
/// highest set bit plus one, so 300 -> 9.
pub fn bit_size(v: &BigUint) -> u64 {
    v.bits()
}

/// Knapsack densities of a weight list, kept unreduced so 3/9 prints as
/// written. `raw` is n over the bit-size of the largest weight; `effective`
/// accounts for the extended sequence of length n(n+1)/2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Density {
    pub raw: (u64, u64),
    pub effective: (u64, u64),
}

impl Density {
    pub fn raw_value(&self) -> f64 {
        self.raw.0 as f64 / self.raw.1 as f64
    }

    pub fn effective_value(&self) -> f64 {
        self.effective.0 as f64 / self.effective.1 as f64
    }
}

pub fn density(weights: &[BigUint]) -> Result<Density> {
    if weights.is_empty() {
        return Err(Error::MalformedSequence("empty weight list".into()));
    }
    let n = weights.len() as u64;
    let max_bits = weights.iter().map(bit_size).max().unwrap();
    Ok(Density { raw: (n, max_bits), effective: (n * (n + 1), 2 * max_bits) })
}

/// log2-scale cost estimates for the attack families, one figure each.
#[derive(Debug, Clone, PartialEq)]
pub struct CostReport {
    pub n: usize,
    pub log_m: u64,
    /// Meet-in-the-middle: n^3 * 2^(n/2) steps.
    pub mitm_log2: i64,
    /// Segment-LLL chain: n^2 trials times (n^2)-dimensional reduction.
    pub slll_log2: i64,
    /// Guessing Z: 1 / (n^3 * 2^(n/2)).
    pub z_guess_log2: i64,
    /// Guessing the lever permutation: 1 / n!.
    pub lever_guess_log2: f64,
    /// Guessing the sequence: 1 / 3^n.
    pub seq_guess_log2: f64,
    /// Exhaustive private-key search: n^3 * 2^(n/2) * n! * phi(M).
    pub exhaustive_log2: f64,
}

pub fn attack_cost_report(n: usize, log_m: u64) -> CostReport {
    let nf = n as f64;
    let mitm = nf / 2.0 + 3.0 * nf.log2();
    // SLLL estimate with n ~ 2^ceil(log2 n): n^2 * (n^2)^6 * log(n^2)
    let k = nf.log2().ceil();
    let slll = 14.0 * k + (2.0 * k).log2().round();
    let log_fact: f64 = (2..=n as u64).map(|i| (i as f64).log2()).sum();
    CostReport {
        n,
        log_m,
        mitm_log2: mitm.floor() as i64,
        slll_log2: slll as i64,
        z_guess_log2: -(mitm.floor() as i64),
        lever_guess_log2: -log_fact,
        seq_guess_log2: -nf * 3f64.log2(),
        exhaustive_log2: mitm + log_fact + log_m as f64,
    }
}
