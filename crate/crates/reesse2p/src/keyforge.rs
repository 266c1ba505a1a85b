//! Key-pair generation and key serialization.
//!
//! The transform is `C_i = (A_i + Z*l(i)) * W mod M` over a secret even
//! nonnormal super-increasing sequence `{A_i}`, a secret lever permutation
//! `l` of `{5..n+4}`, and transform scalars `W` (invertible mod M) and `Z`
//! chosen so that the cofactor `M / gcd(M, Z)` is a large prime near
//! `n^3 * 2^(n/2)`.

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::numeric::{mod_inv, mod_neg, next_probable_prime, Modulus};
use crate::sequence::{self, GenParams, NonnormalSeq};

/// The lever permutation: pairwise-distinct values drawn from a codomain of
/// n consecutive integers, `{5..n+4}` by default.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeverPerm(Vec<u64>);

impl LeverPerm {
    pub fn values(&self) -> &[u64] {
        &self.0
    }

    pub fn max_value(&self) -> u64 {
        *self.0.iter().max().expect("nonempty")
    }
}

/// Uniform random bijection `{1..n} -> {base..base+n-1}`.
pub fn lever_perm_from<R: Rng + ?Sized>(n: usize, base: u64, rng: &mut R) -> LeverPerm {
    let mut vals: Vec<u64> = (base..base + n as u64).collect();
    vals.shuffle(rng);
    LeverPerm(vals)
}

/// Default codomain `{5..n+4}`.
pub fn lever_perm<R: Rng + ?Sized>(n: usize, rng: &mut R) -> LeverPerm {
    lever_perm_from(n, 5, rng)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicKey {
    pub c: Vec<BigUint>,
    pub m: Modulus,
}

impl PublicKey {
    pub fn n(&self) -> usize {
        self.c.len()
    }
}

/// Transform internals retained only under the test profile, for the
/// diagnostics that need the generating witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DebugParts {
    pub w: BigUint,
    pub z: BigUint,
    pub lever: LeverPerm,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrivateKey {
    pub a: NonnormalSeq,
    pub w_inv: BigUint,
    pub neg_z: BigUint,
    pub m: Modulus,
    pub debug: Option<DebugParts>,
}

impl PrivateKey {
    pub fn n(&self) -> usize {
        self.a.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    /// n >= 96, bitlength window for M enforced.
    Full,
    /// n >= 3, relaxed cofactor target, no bitlength window.
    Toy,
}

#[derive(Debug, Clone)]
pub struct KeygenConfig {
    pub n: usize,
    pub profile: Profile,
    /// Retain `W`, `Z` and the lever permutation in the private key.
    pub retain_debug: bool,
    /// Use the alternative codomain `{1..n}` instead of `{5..n+4}`.
    pub omega_low: bool,
    /// Force a constant lever value (diagnostics only; breaks injectivity).
    pub constant_lever: Option<u64>,
    /// Override the cofactor `h` (diagnostics only; normally the next
    /// probable prime at or above the target).
    pub cofactor_override: Option<BigUint>,
    /// Force W (diagnostics; e.g. W = 1 for the degenerate transform).
    pub forced_w: Option<BigUint>,
    /// Force Z (diagnostics; e.g. Z = 0 retrogresses to the plain
    /// super-increasing transform).
    pub forced_z: Option<BigUint>,
}

impl KeygenConfig {
    pub fn new(n: usize, profile: Profile) -> Self {
        KeygenConfig {
            n,
            profile,
            retain_debug: false,
            omega_low: false,
            constant_lever: None,
            cofactor_override: None,
            forced_w: None,
            forced_z: None,
        }
    }

    pub fn with_debug(mut self) -> Self {
        self.retain_debug = true;
        self
    }
}

/// Cofactor target: next probable prime at or above `n^3 * 2^(n/2)`
/// (rounded up), floored at 2^16 under the toy profile so that toy moduli
/// still leave slack for the candidate-k sweep.
fn cofactor_target(n: usize, profile: Profile) -> BigUint {
    let ncubed = BigUint::from(n as u64).pow(3);
    // ceil(n^3 * 2^(n/2)) = n^3 << (n/2), times sqrt(2) when n is odd.
    let mut t = &ncubed << (n as u64 / 2);
    if n % 2 == 1 {
        // ceil(t * sqrt(2)) via integer sqrt of 2*t^2
        t = (&t * &t * 2u32).sqrt() + 1u32;
    }
    match profile {
        Profile::Full => t,
        // The decode-ambiguity rate falls as 1/h; the n^3 2^(n/2) target
        // alone leaves a noticeable collision rate at small n, so toy keys
        // carry an extra 2^12 margin (still tiny integers).
        Profile::Toy => (t << 12u32).max(BigUint::from(1u32) << 16),
    }
}

fn bit_window(n: usize) -> (u64, u64) {
    // [ceil(1.585 n), 2n]
    let lo = (1.585 * n as f64).ceil() as u64;
    (lo, 2 * n as u64)
}

/// First-term budget: with the modulus target `log M ~ 2n` and 3^m as the
/// rough maximal first term, m solves 1.585 (n + m) ~ 2n.
fn a1_cap(n: usize, profile: Profile) -> BigUint {
    match profile {
        Profile::Toy => BigUint::from(2u32),
        Profile::Full => {
            let m = ((2.0 * n as f64 - 1.585 * n as f64) / 1.585).round() as u32;
            BigUint::from(3u32).pow(m) * 2u32
        }
    }
}

const KEYGEN_RETRIES: usize = 256;

pub fn keygen<R: Rng + ?Sized>(config: &KeygenConfig, rng: &mut R) -> Result<(PublicKey, PrivateKey)> {
    let n = config.n;
    match config.profile {
        Profile::Full if n < 96 => {
            return Err(Error::Keygen(format!("full profile requires n >= 96, got {n}")))
        }
        Profile::Toy if n < 3 => {
            return Err(Error::Keygen(format!("toy profile requires n >= 3, got {n}")))
        }
        _ => {}
    }

    let h = match &config.cofactor_override {
        Some(h) => h.clone(),
        None => next_probable_prime(&cofactor_target(n, config.profile), rng),
    };
    let (lo_bits, hi_bits) = bit_window(n);
    let params = GenParams { even: true, a1_max: a1_cap(n, config.profile), ..GenParams::default() };

    for _ in 0..KEYGEN_RETRIES {
        let a = sequence::generate_with(n, rng, &params)?;
        // sigma = sum (n+1-i) A_i = E_n
        let sigma = sequence::precompute_tables(&a).e[n - 1].clone();

        // M = g*h with g = ceil((sigma+1)/h) + jitter, so M > sigma and
        // M / gcd(M, Z) = h exactly once Z = g*r with r in [1, h).
        let g = (&sigma + 1u32).div_ceil(&h) + rng.gen_range(0..=n as u64);
        let m_val = &g * &h;
        if config.profile == Profile::Full {
            let bits = m_val.bits();
            if bits < lo_bits || bits > hi_bits {
                continue;
            }
        }
        let m = Modulus::new(m_val.clone())?;

        let w = match &config.forced_w {
            Some(w) => {
                if w.gcd(&m_val) != BigUint::one() {
                    return Err(Error::Keygen("forced W not coprime to M".into()));
                }
                w.clone()
            }
            None => loop {
                let cand = rng.gen_biguint_range(&BigUint::from(2u32), &m_val);
                if cand.gcd(&m_val) == BigUint::one() {
                    break cand;
                }
            },
        };
        let z = match &config.forced_z {
            Some(z) => z.clone(),
            None => {
                let r = rng.gen_biguint_range(&BigUint::one(), &h);
                &g * r
            }
        };

        let w_inv = mod_inv(&w, &m)?;
        let neg_z = mod_neg(&(&z % m.value()), &m)?;

        let lever = match config.constant_lever {
            Some(k) => LeverPerm(vec![k; n]),
            None if config.omega_low => lever_perm_from(n, 1, rng),
            None => lever_perm(n, rng),
        };

        let c: Vec<BigUint> = a
            .terms()
            .iter()
            .zip(lever.values())
            .map(|(ai, li)| (ai + &z * *li) * &w % m.value())
            .collect();

        let debug = config
            .retain_debug
            .then(|| DebugParts { w: w.clone(), z: z.clone(), lever: lever.clone() });

        let public = PublicKey { c, m: m.clone() };
        let private = PrivateKey { a, w_inv, neg_z, m, debug };
        return Ok((public, private));
    }
    Err(Error::Keygen(format!(
        "could not fit bitlength(M) into [{lo_bits}, {hi_bits}] after {KEYGEN_RETRIES} attempts"
    )))
}

/// Convenience: default configuration for a profile.
pub fn keygen_default<R: Rng + ?Sized>(
    n: usize,
    profile: Profile,
    rng: &mut R,
) -> Result<(PublicKey, PrivateKey)> {
    keygen(&KeygenConfig::new(n, profile), rng)
}

// --- key file format ---------------------------------------------------
//
// line 1: "REESSE2P v1 <pub|prv> n=<int>"
// line 2: "M=<dec>"
// public: n lines "C<i>=<dec>"
// private: n lines "A<i>=<dec>", then "Winv=<dec>", "negZ=<dec>",
//          optional "#debug W=<dec> Z=<dec> L=<comma-list>"

pub fn serialize_public(key: &PublicKey) -> String {
    let mut out = format!("REESSE2P v1 pub n={}\nM={}\n", key.n(), key.m);
    for (i, c) in key.c.iter().enumerate() {
        out.push_str(&format!("C{}={}\n", i + 1, c));
    }
    out
}

pub fn serialize_private(key: &PrivateKey) -> String {
    let mut out = format!("REESSE2P v1 prv n={}\nM={}\n", key.n(), key.m);
    for (i, a) in key.a.terms().iter().enumerate() {
        out.push_str(&format!("A{}={}\n", i + 1, a));
    }
    out.push_str(&format!("Winv={}\n", key.w_inv));
    out.push_str(&format!("negZ={}\n", key.neg_z));
    if let Some(d) = &key.debug {
        let levers: Vec<String> = d.lever.values().iter().map(|v| v.to_string()).collect();
        out.push_str(&format!("#debug W={} Z={} L={}\n", d.w, d.z, levers.join(",")));
    }
    out
}

fn parse_header(line: &str) -> Result<(bool, usize)> {
    let mut parts = line.split_whitespace();
    let magic = parts.next().unwrap_or("");
    let version = parts.next().unwrap_or("");
    let kind = parts.next().unwrap_or("");
    let nfield = parts.next().unwrap_or("");
    if magic != "REESSE2P" || version != "v1" {
        return Err(Error::parse(1, format!("bad header {line:?}")));
    }
    let is_pub = match kind {
        "pub" => true,
        "prv" => false,
        _ => return Err(Error::parse(1, format!("expected pub|prv, got {kind:?}"))),
    };
    let n: usize = nfield
        .strip_prefix("n=")
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::parse(1, format!("expected n=<int>, got {nfield:?}")))?;
    Ok((is_pub, n))
}

fn field<'a>(line: &'a str, lineno: usize, key: &str) -> Result<&'a str> {
    line.strip_prefix(key)
        .and_then(|s| s.strip_prefix('='))
        .ok_or_else(|| Error::parse(lineno, format!("expected {key}=<dec>, got {line:?}")))
}

fn dec(s: &str, lineno: usize) -> Result<BigUint> {
    s.trim().parse().map_err(|_| Error::parse(lineno, format!("bad decimal {s:?}")))
}

pub fn parse_public(text: &str) -> Result<PublicKey> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "empty file"))?;
    let (is_pub, n) = parse_header(header)?;
    if !is_pub {
        return Err(Error::parse(1, "expected a public key file"));
    }
    let (lno, mline) = lines.next().ok_or_else(|| Error::parse(2, "missing M line"))?;
    let m = Modulus::new(dec(field(mline, lno + 1, "M")?, lno + 1)?)?;
    let mut c = Vec::with_capacity(n);
    for i in 1..=n {
        let (lno, line) = lines
            .next()
            .ok_or_else(|| Error::parse(2 + i, format!("missing C{i} line")))?;
        let v = dec(field(line, lno + 1, &format!("C{i}"))?, lno + 1)?;
        if v >= *m.value() {
            return Err(Error::parse(lno + 1, format!("residue out of range: C{i} >= M")));
        }
        c.push(v);
    }
    if let Some((lno, extra)) = lines.find(|(_, l)| !l.trim().is_empty()) {
        return Err(Error::parse(lno + 1, format!("trailing content {extra:?}")));
    }
    Ok(PublicKey { c, m })
}

pub fn parse_private(text: &str) -> Result<PrivateKey> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "empty file"))?;
    let (is_pub, n) = parse_header(header)?;
    if is_pub {
        return Err(Error::parse(1, "expected a private key file"));
    }
    let (lno, mline) = lines.next().ok_or_else(|| Error::parse(2, "missing M line"))?;
    let m = Modulus::new(dec(field(mline, lno + 1, "M")?, lno + 1)?)?;
    let mut a = Vec::with_capacity(n);
    for i in 1..=n {
        let (lno, line) = lines
            .next()
            .ok_or_else(|| Error::parse(2 + i, format!("missing A{i} line")))?;
        a.push(dec(field(line, lno + 1, &format!("A{i}"))?, lno + 1)?);
    }
    let (lno, wline) = lines.next().ok_or_else(|| Error::parse(n + 3, "missing Winv line"))?;
    let w_inv = dec(field(wline, lno + 1, "Winv")?, lno + 1)?;
    let (lno, zline) = lines.next().ok_or_else(|| Error::parse(n + 4, "missing negZ line"))?;
    let neg_z = dec(field(zline, lno + 1, "negZ")?, lno + 1)?;

    let mut debug = None;
    for (lno, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let rest = line
            .strip_prefix("#debug ")
            .ok_or_else(|| Error::parse(lno + 1, format!("trailing content {line:?}")))?;
        let mut w = None;
        let mut z = None;
        let mut lever = None;
        for tok in rest.split_whitespace() {
            if let Some(v) = tok.strip_prefix("W=") {
                w = Some(dec(v, lno + 1)?);
            } else if let Some(v) = tok.strip_prefix("Z=") {
                z = Some(dec(v, lno + 1)?);
            } else if let Some(v) = tok.strip_prefix("L=") {
                let vals = v
                    .split(',')
                    .map(|s| {
                        s.parse::<u64>()
                            .map_err(|_| Error::parse(lno + 1, format!("bad lever value {s:?}")))
                    })
                    .collect::<Result<Vec<u64>>>()?;
                lever = Some(LeverPerm(vals));
            }
        }
        match (w, z, lever) {
            (Some(w), Some(z), Some(lever)) if lever.values().len() == n => {
                debug = Some(DebugParts { w, z, lever });
            }
            _ => return Err(Error::parse(lno + 1, "incomplete #debug line")),
        }
    }

    if w_inv >= *m.value() || neg_z >= *m.value() {
        return Err(Error::parse(1, "residue out of range in private key"));
    }
    let seq = NonnormalSeq::new(a)?;
    let sigma = sequence::precompute_tables(&seq).e[n - 1].clone();
    if sigma >= *m.value() {
        return Err(Error::parse(1, "invariant violation: sum (n+1-i) A_i >= M"));
    }
    let key = PrivateKey { a: seq, w_inv, neg_z, m, debug };
    Ok(key)
}

/// Expected outer-loop budget for the candidate-k sweep: the true shift
/// count k = sum l(i) b_i L_i is bounded by (n+4) * n(n+1)/2.
pub fn k_budget(n: usize) -> u64 {
    let n = n as u64;
    (n + 4) * n * (n + 1) / 2
}
