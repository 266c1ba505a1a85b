//! Nonnormal super-increasing sequences and nonnormal subset sums:
//! generation, validation, exact evaluation, the greedy decoder, and the
//! exhaustive decomposition oracle used to test uniqueness.
//!
//! A sequence `{A_1..A_n}` is nonnormal super-increasing when every term
//! beats the positionally weighted sum of its predecessors,
//! `A_i > sum_{j<i} (i-j) A_j`. A nonnormal subset sum of a bit block
//! `b_1..b_n` is `E = sum A_i b_i L_i` with `L_i = sum_{j>=i} b_j`, i.e.
//! selected elements carry descending multiplicities.

use std::collections::HashSet;
use std::fmt;

use num_bigint::{BigUint, RandBigInt};
use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};

/// An n-bit plaintext block, `b_1..b_n` left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitBlock(Vec<bool>);

impl BitBlock {
    pub fn new(bits: Vec<bool>) -> Self {
        BitBlock(bits)
    }

    pub fn zero(n: usize) -> Self {
        BitBlock(vec![false; n])
    }

    pub fn from_mask(mask: u64, n: usize) -> Self {
        BitBlock((0..n).map(|i| mask >> i & 1 == 1).collect())
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|b| !b)
    }

    pub fn weight(&self) -> usize {
        self.0.iter().filter(|b| **b).count()
    }

    /// Multiplicities `L_i = sum_{j>=i} b_j`, 0-indexed.
    pub fn multiplicities(&self) -> Vec<u64> {
        let mut l = vec![0u64; self.0.len()];
        let mut acc = 0u64;
        for i in (0..self.0.len()).rev() {
            if self.0[i] {
                acc += 1;
            }
            l[i] = acc;
        }
        l
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        BitBlock((0..n).map(|_| rng.gen_bool(0.5)).collect())
    }

    /// Random block with at least one 1-bit.
    pub fn random_nonzero<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        loop {
            let b = Self::random(n, rng);
            if !b.is_zero() {
                return b;
            }
        }
    }
}

impl fmt::Display for BitBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{}", u8::from(*b))?;
        }
        Ok(())
    }
}

impl std::str::FromStr for BitBlock {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::MalformedSequence(format!("bad bit character {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitBlock)
    }
}

/// True iff the strict inequality `A_i > sum_{j<i} (i-j) A_j` holds for all
/// `i > 1`. Errors on an empty list or nonpositive entries.
pub fn validate(terms: &[BigUint]) -> Result<bool> {
    if terms.is_empty() {
        return Err(Error::MalformedSequence("empty sequence".into()));
    }
    if terms.iter().any(|t| t.is_zero()) {
        return Err(Error::MalformedSequence("nonpositive entry".into()));
    }
    let mut weighted = BigUint::zero(); // sum (i-j) A_j for the current i
    let mut plain = BigUint::zero(); // sum A_j
    for (i, term) in terms.iter().enumerate() {
        if i > 0 && *term <= weighted {
            return Ok(false);
        }
        plain += term;
        weighted += &plain;
    }
    Ok(true)
}

/// A validated nonnormal super-increasing sequence of length >= 3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonnormalSeq {
    terms: Vec<BigUint>,
}

impl NonnormalSeq {
    pub fn new(terms: Vec<BigUint>) -> Result<Self> {
        if terms.len() < 3 {
            return Err(Error::MalformedSequence(format!(
                "need at least 3 terms, got {}",
                terms.len()
            )));
        }
        if !validate(&terms)? {
            return Err(Error::MalformedSequence(
                "weighted super-increasing inequality violated".into(),
            ));
        }
        Ok(NonnormalSeq { terms })
    }

    pub fn terms(&self) -> &[BigUint] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Knobs for sequence generation.
#[derive(Debug, Clone)]
pub struct GenParams {
    /// All terms even (slack drawn on the even grid).
    pub even: bool,
    /// Upper bound for the random first term (inclusive). The first term is
    /// drawn uniformly from `[1, a1_max]` (`[2, a1_max]` even grid when
    /// `even`), which sets the overall scale of the sequence.
    pub a1_max: BigUint,
    /// Slack cap: each term exceeds the weighted prefix sum by a uniform
    /// draw from `{1..delta_max}` (even grid when `even`), further clipped
    /// so consecutive ratios stay in the `(2, 3]` window.
    pub delta_max: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams { even: true, a1_max: BigUint::from(2u32), delta_max: 16 }
    }
}

/// Generate a random sequence of length `n >= 3` with small slack, so that
/// `2 < A_{i+1}/A_i <= 3` for `i > 2` (with `1 < A_2/A_1 <= 3` and
/// `2 <= A_3/A_2 <= 3` as the boundary cases).
pub fn generate<R: Rng + ?Sized>(n: usize, rng: &mut R, even: bool) -> Result<NonnormalSeq> {
    generate_with(n, rng, &GenParams { even, ..GenParams::default() })
}

pub fn generate_with<R: Rng + ?Sized>(
    n: usize,
    rng: &mut R,
    params: &GenParams,
) -> Result<NonnormalSeq> {
    if n < 3 {
        return Err(Error::MalformedSequence(format!("n = {n} < 3")));
    }
    let one = BigUint::from(1u32);
    let two = BigUint::from(2u32);
    let step = if params.even { &two } else { &one };

    let a1 = {
        let lo = step.clone();
        let hi = if params.a1_max < lo { lo.clone() } else { params.a1_max.clone() };
        let mut v = rng.gen_biguint_range(&lo, &(&hi + &one));
        if params.even && !v.is_zero() && v.bit(0) {
            v += 1u32; // snap to even grid, stays <= hi+1
        }
        v
    };

    let mut terms = vec![a1];
    let mut plain = terms[0].clone(); // running sum A_1..A_{i-1}
    let mut weighted = plain.clone(); // running sum (i-j) A_j for next i

    for i in 2..=n {
        // Ratio window for A_i / A_{i-1}: (1,3] at i=2, [2,3] at i=3,
        // (2,3] beyond; expressed as slack bounds over the weighted sum.
        let prev = terms.last().unwrap().clone();
        let (lo, hi) = match i {
            2 => (step.clone(), &prev * 2u32),
            3 => {
                let floor2 = &prev * 2u32;
                let lo = if floor2 > weighted { &floor2 - &weighted } else { BigUint::zero() };
                (lo.max(step.clone()), &prev * 3u32 - &weighted)
            }
            _ => {
                let floor2 = &prev * 2u32;
                let lo = if floor2 >= weighted { &floor2 - &weighted + step } else { BigUint::zero() };
                (lo.max(step.clone()), &prev * 3u32 - &weighted)
            }
        };
        debug_assert!(lo <= hi, "slack window empty at i={i}");
        // Prefer slack in {step .. delta_max}, clipped to the valid window.
        let cap = (&lo + BigUint::from(params.delta_max)).min(hi.clone());
        let mut delta = rng.gen_biguint_range(&lo, &(&cap + &one));
        if params.even {
            if delta.bit(0) {
                delta += 1u32;
            }
            if delta > cap {
                delta -= 2u32;
            }
            if delta < lo {
                delta = if lo.bit(0) { &lo + &one } else { lo.clone() };
            }
        }
        let next = &weighted + &delta;
        plain += &next;
        weighted += &plain;
        terms.push(next);
    }
    NonnormalSeq::new(terms)
}

/// Exact nonnormal subset sum `sum X_i b_i L_i` over an arbitrary positive
/// weight list (not required to be super-increasing).
pub fn eval_subset_sum(terms: &[BigUint], block: &BitBlock) -> Result<BigUint> {
    if terms.len() != block.len() {
        return Err(Error::LengthMismatch { got: terms.len(), want: block.len() });
    }
    let mut sum = BigUint::zero();
    let mut l = 0u64;
    for i in (0..terms.len()).rev() {
        if block.bits()[i] {
            l += 1;
            sum += &terms[i] * l;
        }
    }
    Ok(sum)
}

/// Decoder tables: `e[k-1] = E_k = sum_{i<=k} (k+1-i) A_i` for `k = 1..n`,
/// and `edot[k-1] = sum_{i<=k} A_i` for `k = 1..n-1`.
#[derive(Debug, Clone)]
pub struct Tables {
    pub e: Vec<BigUint>,
    pub edot: Vec<BigUint>,
}

pub fn precompute_tables(seq: &NonnormalSeq) -> Tables {
    let n = seq.len();
    let mut e = Vec::with_capacity(n);
    let mut edot = Vec::with_capacity(n - 1);
    let mut plain = BigUint::zero();
    let mut weighted = BigUint::zero();
    for (k, term) in seq.terms().iter().enumerate() {
        plain += term;
        weighted += &plain;
        e.push(weighted.clone());
        if k < n - 1 {
            edot.push(plain.clone());
        }
    }
    Tables { e, edot }
}

/// Greedy decode of a nonnormal subset sum. Walks i from n down to 1 taking
/// `b_i = 1` whenever `E >= (L+1) A_i`, pruning with the bound
/// `0 < E <= E_i + L*Edot_i`. Returns the unique preimage block when `E` is
/// a true subset sum of `seq`, `None` otherwise.
pub fn greedy_decode(e: &BigUint, seq: &NonnormalSeq, tables: &Tables) -> Option<BitBlock> {
    let n = seq.len();
    let mut bits = vec![false; n];
    if e.is_zero() {
        return Some(BitBlock::new(bits));
    }
    let mut rem = e.clone();
    let mut l = 0u64;
    let mut i = n; // 1-based
    loop {
        let take = &seq.terms()[i - 1] * (l + 1);
        if rem >= take {
            bits[i - 1] = true;
            l += 1;
            rem -= take;
        }
        i -= 1;
        if i >= 1 && !rem.is_zero() {
            let bound = &tables.e[i - 1] + &tables.edot[i - 1] * l;
            if rem <= bound {
                continue;
            }
        }
        break;
    }
    if rem.is_zero() {
        Some(BitBlock::new(bits))
    } else {
        None
    }
}

/// Convenience wrapper computing the tables on the fly.
pub fn greedy_decode_fresh(e: &BigUint, seq: &NonnormalSeq) -> Option<BitBlock> {
    greedy_decode(e, seq, &precompute_tables(seq))
}

pub const BRUTE_FORCE_LIMIT: usize = 24;

/// Exhaustive decomposition oracle: all blocks whose nonnormal subset sum
/// over `terms` equals `e`. Enumerates all 2^n blocks, so n is capped.
pub fn brute_force_decompositions(e: &BigUint, terms: &[BigUint]) -> Result<Vec<BitBlock>> {
    let n = terms.len();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::OracleScaleExceeded(n, BRUTE_FORCE_LIMIT));
    }
    let mut hits = Vec::new();
    for mask in 0..1u64 << n {
        let block = BitBlock::from_mask(mask, n);
        if eval_subset_sum(terms, &block)? == *e {
            hits.push(block);
        }
    }
    Ok(hits)
}

/// Property-2 check: all 2^n nonnormal subset sums over `seq` are pairwise
/// distinct. Test oracle, exponential.
pub fn all_sums_distinct(seq: &NonnormalSeq) -> Result<bool> {
    let n = seq.len();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::OracleScaleExceeded(n, BRUTE_FORCE_LIMIT));
    }
    let mut seen = HashSet::new();
    for mask in 0..1u64 << n {
        let block = BitBlock::from_mask(mask, n);
        if !seen.insert(eval_subset_sum(seq.terms(), &block)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Sequence text format: first line `n=<int>`, then one decimal per line.
pub fn parse_sequence(text: &str) -> Result<Vec<BigUint>> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::parse(1, "empty file"))?;
    let n: usize = header
        .strip_prefix("n=")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| Error::parse(1, format!("expected n=<int>, got {header:?}")))?;
    let mut terms = Vec::with_capacity(n);
    for (idx, line) in lines.enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let v: BigUint = line
            .parse()
            .map_err(|_| Error::parse(idx + 2, format!("bad decimal {line:?}")))?;
        terms.push(v);
    }
    if terms.len() != n {
        return Err(Error::parse(1, format!("header says n={n}, found {} terms", terms.len())));
    }
    Ok(terms)
}

pub fn write_sequence(terms: &[BigUint]) -> String {
    let mut out = format!("n={}\n", terms.len());
    for t in terms {
        out.push_str(&t.to_string());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn seq(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn validate_examples() {
        assert!(validate(&seq(&[1, 2, 5, 13, 34, 89])).unwrap());
        assert!(validate(&seq(&[2, 4, 10, 26, 68, 178])).unwrap());
        // 4 > 2*1 + 1*2 = 4 fails: not strict.
        assert!(!validate(&seq(&[1, 2, 4])).unwrap());
        assert!(validate(&[]).is_err());
        assert!(validate(&seq(&[1, 0, 5])).is_err());
    }

    #[test]
    fn powers_of_three_pass() {
        let p: Vec<BigUint> = (0..12u32).map(|i| BigUint::from(3u32).pow(i)).collect();
        assert!(validate(&p).unwrap());
    }

    fn ratio_ok(terms: &[BigUint]) -> bool {
        // 1 < A_2/A_1 <= 3; 2 <= A_3/A_2 <= 3; 2 < A_{i+1}/A_i <= 3 beyond.
        for i in 0..terms.len() - 1 {
            let (a, b) = (&terms[i], &terms[i + 1]);
            let ok = match i {
                0 => *b > *a && *b <= a * 3u32,
                1 => *b >= a * 2u32 && *b <= a * 3u32,
                _ => *b > a * 2u32 && *b <= a * 3u32,
            };
            if !ok {
                return false;
            }
        }
        true
    }

    #[test]
    fn generate_even_with_ratio_window() {
        let mut rng = ChaCha20Rng::seed_from_u64(42);
        for n in [3usize, 6, 12, 24, 120] {
            let s = generate(n, &mut rng, true).unwrap();
            assert!(validate(s.terms()).unwrap());
            assert!(s.terms().iter().all(|t| !t.bit(0)), "odd term at n={n}");
            assert!(ratio_ok(s.terms()), "ratio window violated at n={n}: {:?}", s.terms());
        }
    }

    #[test]
    fn generate_odd_allowed() {
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        let s = generate(3, &mut rng, false).unwrap();
        assert!(validate(s.terms()).unwrap());
        assert!(ratio_ok(s.terms()));
    }

    #[test]
    fn generate_rejects_tiny_n() {
        let mut rng = ChaCha20Rng::seed_from_u64(0);
        assert!(generate(2, &mut rng, true).is_err());
    }

    #[test]
    fn eval_examples() {
        let s = seq(&[1, 2, 5, 13, 34, 89]);
        let b: BitBlock = "101010".parse().unwrap();
        assert_eq!(eval_subset_sum(&s, &b).unwrap(), BigUint::from(47u32));

        let z: BitBlock = "000000".parse().unwrap();
        assert_eq!(eval_subset_sum(&s, &z).unwrap(), BigUint::zero());

        let d = seq(&[2, 4, 10, 26, 68, 178]);
        let full: BitBlock = "111111".parse().unwrap();
        assert_eq!(eval_subset_sum(&d, &full).unwrap(), BigUint::from(464u32));

        assert!(eval_subset_sum(&d, &"101".parse().unwrap()).is_err());
    }

    #[test]
    fn tables_example() {
        let s = NonnormalSeq::new(seq(&[2, 4, 10, 26, 68, 178])).unwrap();
        let t = precompute_tables(&s);
        assert_eq!(t.e, seq(&[2, 8, 24, 66, 176, 464]));
        assert_eq!(t.edot, seq(&[2, 6, 16, 42, 110]));

        let s3 = NonnormalSeq::new(seq(&[1, 2, 5])).unwrap();
        assert_eq!(precompute_tables(&s3).e[2], BigUint::from(12u32));
    }

    #[test]
    fn greedy_examples() {
        let s = NonnormalSeq::new(seq(&[2, 4, 10, 26, 68, 178])).unwrap();
        let t = precompute_tables(&s);
        assert_eq!(
            greedy_decode(&BigUint::from(94u32), &s, &t).unwrap().to_string(),
            "101010"
        );
        assert_eq!(
            greedy_decode(&BigUint::from(464u32), &s, &t).unwrap().to_string(),
            "111111"
        );
        assert!(greedy_decode(&BigUint::from(1u32), &s, &t).is_none());
        assert!(greedy_decode(&BigUint::zero(), &s, &t).unwrap().is_zero());
    }

    #[test]
    fn brute_force_examples() {
        let s = seq(&[1, 2, 5, 13, 34, 89]);
        let hits = brute_force_decompositions(&BigUint::from(47u32), &s).unwrap();
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].to_string(), "101010");

        let zero_hits = brute_force_decompositions(&BigUint::zero(), &s).unwrap();
        assert_eq!(zero_hits.len(), 1);
        assert!(zero_hits[0].is_zero());

        assert!(brute_force_decompositions(&BigUint::from(1u32), &seq(&[2, 4, 10]))
            .unwrap()
            .is_empty());

        let wide: Vec<BigUint> = (1..=25u64).map(BigUint::from).collect();
        assert!(brute_force_decompositions(&BigUint::zero(), &wide).is_err());
    }

    #[test]
    fn property1_holds_on_generated() {
        // (k+1) A_i > sum_{j<i} (k+i-j) A_j for k in 1..=10.
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        for _ in 0..5 {
            let s = generate(10, &mut rng, true).unwrap();
            let t = s.terms();
            for k in 1u32..=10 {
                for i in 1..t.len() {
                    let lhs = &t[i] * (k + 1);
                    let mut rhs = BigUint::zero();
                    for j in 0..i {
                        rhs += &t[j] * (k as u64 + (i - j) as u64);
                    }
                    assert!(lhs > rhs, "property 1 fails at i={i}, k={k}");
                }
            }
        }
    }

    #[test]
    fn property2_and_greedy_inverse_exhaustive() {
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        for _ in 0..3 {
            let s = generate(10, &mut rng, true).unwrap();
            assert!(all_sums_distinct(&s).unwrap());
            let t = precompute_tables(&s);
            for mask in 0..1u64 << 10 {
                let block = BitBlock::from_mask(mask, 10);
                let e = eval_subset_sum(s.terms(), &block).unwrap();
                assert_eq!(greedy_decode(&e, &s, &t), Some(block));
            }
        }
    }

    #[test]
    fn even_sequence_even_sums() {
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let s = generate(10, &mut rng, true).unwrap();
        for mask in [1u64, 37, 1023, 513] {
            let e = eval_subset_sum(s.terms(), &BitBlock::from_mask(mask, 10)).unwrap();
            assert!(!e.bit(0));
        }
    }

    #[test]
    fn sequence_text_roundtrip() {
        let s = seq(&[2, 4, 10, 26, 68, 178]);
        assert_eq!(parse_sequence(&write_sequence(&s)).unwrap(), s);
        assert!(parse_sequence("n=6\n1\n2\n").is_err());
        assert!(parse_sequence("bogus\n").is_err());
    }

    proptest! {
        #[test]
        fn greedy_inverts_eval(mask in 0u64..64, seed in 0u64..1000) {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let s = generate(6, &mut rng, seed % 2 == 0).unwrap();
            let block = BitBlock::from_mask(mask, 6);
            let e = eval_subset_sum(s.terms(), &block).unwrap();
            let t = precompute_tables(&s);
            prop_assert_eq!(greedy_decode(&e, &s, &t), Some(block));
        }
    }
}
