//! Lever-function diagnostics: the constant-lever difference-sequence
//! identity, and the random witness search demonstrating that the lever
//! values are not determined by the public key.

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::keyforge::{PrivateKey, PublicKey};
use crate::numeric::{mod_inv, Modulus};
use crate::sequence::{self, GenParams};

/// Result of the constant-lever difference-sequence check.
#[derive(Debug, Clone)]
pub struct ConstLeverReport {
    /// Whether `C_i - C_1 = (A_i - A_1) W (mod M)` held for every i >= 2.
    pub identity_holds: bool,
    /// First index (1-based) where the identity failed, if any.
    pub first_violation: Option<usize>,
    /// Ratios `(A_{i+1} - A_1) / (A_i - A_1)` of the recovered difference
    /// sequence, the regularity a constant lever leaks.
    pub diff_ratios: Vec<f64>,
}

/// Check the difference-sequence identity against the retained transform
/// witness. For a constant lever the identity holds at every index; for an
/// injective lever it must fail somewhere.
pub fn constant_lever_diagnostic(
    public: &PublicKey,
    private: &PrivateKey,
) -> Result<ConstLeverReport> {
    let debug = private.debug.as_ref().ok_or(Error::MissingDebugFields)?;
    let m = public.m.value();
    let mi = BigInt::from(m.clone());
    let a = private.a.terms();
    let w = BigInt::from(debug.w.clone());

    let mut first_violation = None;
    for i in 1..public.n() {
        let lhs = (BigInt::from(public.c[i].clone()) - BigInt::from(public.c[0].clone()))
            .mod_floor(&mi);
        let rhs = ((BigInt::from(a[i].clone()) - BigInt::from(a[0].clone())) * &w).mod_floor(&mi);
        if lhs != rhs {
            first_violation = Some(i + 1);
            break;
        }
    }

    let mut diff_ratios = Vec::new();
    for i in 1..a.len() - 1 {
        let lo = (&a[i] - &a[0]).to_f64().unwrap_or(f64::INFINITY);
        let hi = (&a[i + 1] - &a[0]).to_f64().unwrap_or(f64::INFINITY);
        if lo > 0.0 {
            diff_ratios.push(hi / lo);
        }
    }

    Ok(ConstLeverReport { identity_holds: first_violation.is_none(), first_violation, diff_ratios })
}

/// An alternative transform witness `(A', W', Z', l')` reproducing every
/// public residue.
#[derive(Debug, Clone)]
pub struct Witness {
    pub a: Vec<BigUint>,
    pub w: BigUint,
    pub z: BigUint,
    pub lever: Vec<BigUint>,
    pub attempts_used: u64,
}

/// Random-oracle style witness search: draw a fresh even nonnormal
/// sequence with `sum (n+1-i) A'_i < M`, random `W'` coprime to `M` and
/// random `Z'`, and solve `C_i = (A'_i + Z' l'(i)) W' (mod M)` for the
/// lever values; succeed when every `l'(i)` exists and is positive and the
/// witness differs from the generating one. Practical only at tiny n.
pub fn lever_oracle_search<R: Rng + ?Sized>(
    public: &PublicKey,
    original: Option<&PrivateKey>,
    attempts: u64,
    rng: &mut R,
) -> Result<Option<Witness>> {
    let n = public.n();
    let m = public.m.value();
    let modulus = Modulus::new(m.clone())?;
    let params = GenParams::default();

    'attempt: for attempt in 1..=attempts {
        let Ok(seq) = sequence::generate_with(n, rng, &params) else { continue };
        let sigma = sequence::precompute_tables(&seq).e[n - 1].clone();
        if sigma >= *m {
            continue;
        }
        let w = rng.gen_biguint_range(&BigUint::from(2u32), m);
        if w.gcd(m) != BigUint::one() {
            continue;
        }
        let w_inv = mod_inv(&w, &modulus)?;
        let z = rng.gen_biguint_range(&BigUint::one(), m);
        let g = z.gcd(m);
        let m_red = m / &g;
        if m_red.is_one() {
            continue;
        }
        let z_red = &z / &g;
        let z_red_inv = match mod_inv(&z_red, &Modulus::new(m_red.clone())?) {
            Ok(v) => v,
            Err(_) => continue,
        };

        let mut lever = Vec::with_capacity(n);
        for (ci, ai) in public.c.iter().zip(seq.terms()) {
            // solve Z' * l = C_i W'^-1 - A'_i (mod M); solvable iff
            // gcd(Z', M) divides the right-hand side
            let rhs = (BigInt::from(ci * &w_inv % m) - BigInt::from(ai.clone()))
                .mod_floor(&BigInt::from(m.clone()))
                .to_biguint()
                .expect("mod_floor by positive");
            if !(&rhs % &g).is_zero() {
                continue 'attempt;
            }
            let mut l = (&rhs / &g) * &z_red_inv % &m_red;
            if l.is_zero() {
                l = m_red.clone(); // any representative in [1, M-1] qualifies
            }
            lever.push(l);
        }

        // must be a genuinely different witness
        if let Some(orig) = original {
            if let Some(d) = &orig.debug {
                let same = seq.terms() == orig.a.terms()
                    && w == d.w
                    && z == d.z
                    && lever
                        .iter()
                        .zip(d.lever.values())
                        .all(|(l, v)| *l == BigUint::from(*v));
                if same {
                    continue;
                }
            }
        }

        // re-evaluate the transform as the acceptance condition
        let ok = public
            .c
            .iter()
            .zip(seq.terms())
            .zip(&lever)
            .all(|((ci, ai), li)| (ai + &z * li) * &w % m == *ci);
        if ok {
            return Ok(Some(Witness {
                a: seq.terms().to_vec(),
                w,
                z,
                lever,
                attempts_used: attempt,
            }));
        }
    }
    Ok(None)
}
