//! Lattice-basis construction for weighted subset sums, exact-rational LLL
//! reduction, and the short-vector search used to attack toy parameters.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Basis construction manner for the weighted subset-sum lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Manner {
    /// One row per sequence element: rows `(e_i | N*C_i)`, final row
    /// `(0 | N*S)`; solution coordinates carry descending multiplicities.
    Plain,
    /// Each element expanded into its multiplicity ladder
    /// `(n+1-i)C_i, ..., 2C_i, C_i`; solutions are 0/1 vectors.
    ExtendedCoeff,
    /// Each element duplicated `n+1-i` times with unit coefficients.
    ExtendedDup,
}

impl std::str::FromStr for Manner {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(Manner::Plain),
            "extended-coeff" => Ok(Manner::ExtendedCoeff),
            "extended-dup" => Ok(Manner::ExtendedDup),
            other => Err(Error::InvalidManner(other.into())),
        }
    }
}

/// Integer row vectors spanning the attack lattice, plus the scale N
/// applied to the weight column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeBasis {
    pub rows: Vec<Vec<BigInt>>,
    pub scale: BigInt,
}

impl LatticeBasis {
    pub fn dim(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    /// Exact membership test: returns the integer coordinates of `v` in
    /// this basis if it lies in the spanned lattice.
    pub fn contains(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        // Solve x * B = v by Gaussian elimination over the rationals.
        let rows = self.rows.len();
        let cols = self.dim();
        if v.len() != cols {
            return None;
        }
        // Transpose: cols x rows system A y = v^T with A[j][i] = B[i][j].
        let mut a: Vec<Vec<BigRational>> = (0..cols)
            .map(|j| {
                (0..rows)
                    .map(|i| BigRational::from(self.rows[i][j].clone()))
                    .chain(std::iter::once(BigRational::from(v[j].clone())))
                    .collect()
            })
            .collect();
        let mut pivot_of_col = vec![usize::MAX; rows];
        let mut rank = 0;
        for col in 0..rows {
            let Some(p) = (rank..cols).find(|&r| !a[r][col].is_zero()) else { continue };
            a.swap(rank, p);
            let inv = a[rank][col].recip();
            for x in a[rank].iter_mut() {
                *x *= &inv;
            }
            for r in 0..cols {
                if r != rank && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for c2 in 0..=rows {
                        let delta = &f * &a[rank][c2];
                        a[r][c2] -= delta;
                    }
                }
            }
            pivot_of_col[col] = rank;
            rank += 1;
        }
        // Inconsistent rows mean v is outside the span.
        for r in rank..cols {
            if !a[r][rows].is_zero() {
                return None;
            }
        }
        let mut coords = vec![BigInt::zero(); rows];
        for (col, &pr) in pivot_of_col.iter().enumerate() {
            if pr == usize::MAX {
                continue;
            }
            let val = &a[pr][rows];
            if !val.is_integer() {
                return None;
            }
            coords[col] = val.to_integer();
        }
        Some(coords)
    }

    /// Gram determinant det(B B^T), invariant under unimodular row
    /// operations; exact.
    pub fn gram_det(&self) -> BigRational {
        let k = self.rows.len();
        let mut g: Vec<Vec<BigRational>> = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| BigRational::from(dot(&self.rows[i], &self.rows[j])))
                    .collect()
            })
            .collect();
        let mut det = BigRational::one();
        for col in 0..k {
            let Some(p) = (col..k).find(|&r| !g[r][col].is_zero()) else {
                return BigRational::zero();
            };
            if p != col {
                g.swap(col, p);
                det = -det;
            }
            det *= &g[col][col];
            let inv = g[col][col].recip();
            for r in col + 1..k {
                if g[r][col].is_zero() {
                    continue;
                }
                let f = &g[r][col] * &inv;
                for c2 in col..k {
                    let delta = &f * &g[col][c2];
                    g[r][c2] -= delta;
                }
            }
        }
        det
    }
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Expand a weight list according to the manner. For `n` input weights the
/// extended manners produce `n(n+1)/2` weights.
pub fn extend_weights(weights: &[BigUint], manner: Manner) -> Vec<BigUint> {
    let n = weights.len();
    match manner {
        Manner::Plain => weights.to_vec(),
        Manner::ExtendedCoeff => {
            let mut out = Vec::with_capacity(n * (n + 1) / 2);
            for (i, w) in weights.iter().enumerate() {
                for mult in (1..=(n - i) as u64).rev() {
                    out.push(w * mult);
                }
            }
            out
        }
        Manner::ExtendedDup => {
            let mut out = Vec::with_capacity(n * (n + 1) / 2);
            for (i, w) in weights.iter().enumerate() {
                for _ in 0..n - i {
                    out.push(w.clone());
                }
            }
            out
        }
    }
}

/// Build the attack basis for target sum `s`: identity block alongside the
/// scaled weight column, final row `(0..0, N*s)`. `scale` must exceed
/// `sqrt(d)/2` for the reduction argument, so callers pass at least 1.
pub fn build_basis(
    weights: &[BigUint],
    s: &BigUint,
    scale: &BigUint,
    manner: Manner,
) -> Result<LatticeBasis> {
    if weights.is_empty() {
        return Err(Error::MalformedSequence("empty weight list".into()));
    }
    if scale.is_zero() {
        return Err(Error::MalformedSequence("scale must be positive".into()));
    }
    let ext = extend_weights(weights, manner);
    let d = ext.len() + 1;
    let scale = BigInt::from(scale.clone());
    let mut rows = Vec::with_capacity(d);
    for (i, w) in ext.iter().enumerate() {
        let mut row = vec![BigInt::zero(); d];
        row[i] = BigInt::one();
        row[d - 1] = BigInt::from(w.clone()) * &scale;
        rows.push(row);
    }
    let mut last = vec![BigInt::zero(); d];
    last[d - 1] = BigInt::from(s.clone()) * &scale;
    rows.push(last);
    Ok(LatticeBasis { rows, scale })
}

/// Exact-rational LLL reduction. `delta` in (1/4, 1); the output basis
/// spans the same lattice and satisfies the size-reduction and Lovasz
/// conditions.
pub fn lll_reduce(basis: &LatticeBasis, delta: &BigRational) -> Result<LatticeBasis> {
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    assert!(*delta > quarter && *delta < BigRational::one(), "delta out of (1/4, 1)");
    let mut b = basis.rows.clone();
    let n = b.len();
    if n == 0 {
        return Ok(basis.clone());
    }

    // Gram-Schmidt data: mu[i][j] for j < i, and squared norms of b*_i.
    let gs = |b: &[Vec<BigInt>]| -> Result<(Vec<Vec<BigRational>>, Vec<BigRational>)> {
        let n = b.len();
        let mut mu = vec![vec![BigRational::zero(); n]; n];
        let mut star: Vec<Vec<BigRational>> =
            b.iter().map(|r| r.iter().map(|x| BigRational::from(x.clone())).collect()).collect();
        let mut norms = vec![BigRational::zero(); n];
        for i in 0..n {
            for j in 0..i {
                if norms[j].is_zero() {
                    return Err(Error::DependentRows);
                }
                let num: BigRational = b[i]
                    .iter()
                    .zip(&star[j])
                    .map(|(x, y)| BigRational::from(x.clone()) * y)
                    .sum();
                mu[i][j] = num / &norms[j];
                let (head, tail) = star.split_at_mut(i);
                for (x, y) in tail[0].iter_mut().zip(&head[j]) {
                    *x -= &mu[i][j] * y;
                }
            }
            norms[i] = star[i].iter().map(|x| x * x).sum();
            if norms[i].is_zero() {
                return Err(Error::DependentRows);
            }
        }
        Ok((mu, norms))
    };

    let (mut mu, mut norms) = gs(&b)?;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut k = 1usize;
    while k < n {
        // size-reduce b_k against b_{k-1}..b_0
        for j in (0..k).rev() {
            if mu[k][j].abs() > half {
                let q = round_rat(&mu[k][j]);
                let scaled: Vec<BigInt> = b[j].iter().map(|x| x * &q).collect();
                for (x, y) in b[k].iter_mut().zip(&scaled) {
                    *x -= y;
                }
                let qr = BigRational::from(q);
                for l in 0..j {
                    let delta_mu = &qr * &mu[j][l];
                    mu[k][l] -= delta_mu;
                }
                mu[k][j] -= qr;
            }
        }
        // Lovasz condition
        let lhs = &norms[k] + &mu[k][k - 1] * &mu[k][k - 1] * &norms[k - 1];
        if lhs >= delta * &norms[k - 1] {
            k += 1;
        } else {
            b.swap(k, k - 1);
            let (m2, n2) = gs(&b)?;
            mu = m2;
            norms = n2;
            k = k.max(2) - 1;
        }
    }
    Ok(LatticeBasis { rows: b, scale: basis.scale.clone() })
}

fn round_rat(x: &BigRational) -> BigInt {
    // round half away from zero
    let two = BigInt::from(2);
    let num = x.numer() * &two + x.denom() * x.numer().signum();
    num / (x.denom() * two)
}

pub fn default_delta() -> BigRational {
    BigRational::new(BigInt::from(3), BigInt::from(4))
}

pub fn l2_norm_sq(v: &[BigInt]) -> BigInt {
    v.iter().map(|x| x * x).sum()
}

pub fn linf_norm(v: &[BigInt]) -> BigInt {
    v.iter().map(|x| x.abs()).max().unwrap_or_else(BigInt::zero)
}

/// Outcome of a toy lattice attack: candidate solution vectors (weight
/// coordinates only, last column stripped) and the work spent.
#[derive(Debug, Clone)]
pub struct LatticeAttackResult {
    pub solutions: Vec<Vec<BigInt>>,
    pub reduced: LatticeBasis,
    pub work: u64,
    pub success: bool,
}

fn plain_solution_ok(coords: &[BigInt]) -> bool {
    // nonzero entries must read m, m-1, ..., 1 left to right
    let nonzero: Vec<&BigInt> = coords.iter().filter(|x| !x.is_zero()).collect();
    if nonzero.is_empty() {
        return false;
    }
    let m = nonzero.len();
    nonzero
        .iter()
        .enumerate()
        .all(|(idx, v)| **v == BigInt::from((m - idx) as u64))
}

fn binary_solution_ok(coords: &[BigInt]) -> bool {
    let one = BigInt::one();
    coords.iter().all(|x| x.is_zero() || *x == one) && coords.iter().any(|x| !x.is_zero())
}

/// Reduce the basis for `weights`/`target` and enumerate small integer
/// combinations of the reduced rows (coefficients in `[-bound, bound]`)
/// looking for vectors whose last coordinate vanishes and whose weight
/// coordinates form a valid solution for the manner. Failure is an
/// ordinary outcome at realistic densities.
pub fn lattice_attack(
    weights: &[BigUint],
    target: &BigUint,
    manner: Manner,
    delta: &BigRational,
    coeff_bound: i64,
) -> Result<LatticeAttackResult> {
    let ext = extend_weights(weights, manner);
    let dim = ext.len() + 1;
    let scale = BigUint::from((dim as f64).sqrt() as u64 / 2 + 1);
    let basis = build_basis(weights, target, &scale, manner)?;
    let reduced = lll_reduce(&basis, delta)?;

    let accept = |coords: &[BigInt]| match manner {
        Manner::Plain => plain_solution_ok(coords),
        Manner::ExtendedCoeff | Manner::ExtendedDup => binary_solution_ok(coords),
    };
    let verify = |coords: &[BigInt]| -> bool {
        let sum: BigInt = coords.iter().zip(&ext).map(|(c, w)| c * BigInt::from(w.clone())).sum();
        sum == BigInt::from(target.clone())
    };

    let rows = reduced.rows.len();
    let mut work = 0u64;
    let mut solutions: Vec<Vec<BigInt>> = Vec::new();
    // odometer over coefficient vectors; skip the all-zero combination
    let span = (2 * coeff_bound + 1) as u64;
    let total = span.pow(rows as u32);
    let mut v = vec![BigInt::zero(); dim];
    for idx in 0..total {
        let mut rem = idx;
        for x in v.iter_mut() {
            *x = BigInt::zero();
        }
        let mut all_zero = true;
        for row in reduced.rows.iter().take(rows) {
            let c = (rem % span) as i64 - coeff_bound;
            rem /= span;
            if c != 0 {
                all_zero = false;
                let cb = BigInt::from(c);
                for (x, y) in v.iter_mut().zip(row) {
                    *x += &cb * y;
                }
            }
        }
        work += 1;
        if all_zero || !v[dim - 1].is_zero() {
            continue;
        }
        for cand in [v.clone(), v.iter().map(|x| -x).collect::<Vec<_>>()] {
            let coords = &cand[..dim - 1];
            if accept(coords) && verify(coords) && !solutions.iter().any(|s| s == coords) {
                solutions.push(coords.to_vec());
            }
        }
    }
    solutions.sort();
    let success = !solutions.is_empty();
    Ok(LatticeAttackResult { solutions, reduced, work, success })
}
