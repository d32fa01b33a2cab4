//! Integer lattices at desk scale: LLL, brute-force shortest vectors,
//! Kannan's embedding for closest vectors, and p-ary lattices of matrices
//! over `F_p`.

use thiserror::Error;

use crate::algebra::{Element, Matrix, RingCtx};

/// Largest dimension [`lll`] accepts.
pub const MAX_LLL_DIM: usize = 32;
/// Largest dimension [`shortest_vector_bruteforce`] accepts.
pub const MAX_BRUTEFORCE_DIM: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("basis rows are linearly dependent")]
    Dependent,
    #[error("basis rows have unequal lengths")]
    Ragged,
    #[error("empty basis")]
    Empty,
    #[error("dimension {dim} exceeds the limit {max}")]
    TooLarge { dim: usize, max: usize },
    #[error("delta must lie in (1/4, 1)")]
    BadDelta,
    #[error("target has length {got}, basis vectors have length {expected}")]
    TargetLength { expected: usize, got: usize },
    #[error("no reduced vector carries the embedding coordinate")]
    NoEmbedding,
    #[error("entry overflowed 64 bits during reduction")]
    Overflow,
    #[error("p-ary basis requires a prime field")]
    NotPrimeField,
}

/// Lattice generated by the rows, which must be linearly independent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeBasis {
    rows: Vec<Vec<i64>>,
}

impl LatticeBasis {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self, LatticeError> {
        let width = rows.first().ok_or(LatticeError::Empty)?.len();
        if rows.iter().any(|r| r.len() != width) {
            return Err(LatticeError::Ragged);
        }
        if rows.len() > width {
            return Err(LatticeError::Dependent);
        }
        Ok(LatticeBasis { rows })
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    /// Number of basis vectors.
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Length of each basis vector.
    pub fn ambient_dim(&self) -> usize {
        self.rows[0].len()
    }

    /// Shortest basis vector's squared norm.
    pub fn min_norm_sq(&self) -> i128 {
        self.rows.iter().map(|r| norm_sq(r)).min().expect("non-empty basis")
    }
}

pub fn norm_sq(v: &[i64]) -> i128 {
    v.iter().map(|&x| x as i128 * x as i128).sum()
}

fn dot(a: &[i128], b: &[i128]) -> f64 {
    a.iter().zip(b).map(|(&x, &y)| x as f64 * y as f64).sum()
}

/// Gram-Schmidt coefficients `mu` and squared norms `bstar`.
fn gram_schmidt(b: &[Vec<i128>]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let d = b.len();
    let mut star: Vec<Vec<f64>> = Vec::with_capacity(d);
    let mut mu = vec![vec![0.0; d]; d];
    let mut bstar = vec![0.0; d];
    for i in 0..d {
        let mut v: Vec<f64> = b[i].iter().map(|&x| x as f64).collect();
        for j in 0..i {
            let num: f64 = b[i].iter().zip(&star[j]).map(|(&x, &y)| x as f64 * y).sum();
            mu[i][j] = num / bstar[j];
            for (vk, sk) in v.iter_mut().zip(&star[j]) {
                *vk -= mu[i][j] * sk;
            }
        }
        bstar[i] = v.iter().map(|x| x * x).sum();
        star.push(v);
    }
    (mu, bstar)
}

/// LLL reduction with parameter `delta`.
pub fn lll(basis: &LatticeBasis, delta: f64) -> Result<LatticeBasis, LatticeError> {
    lll_with_transform(basis, delta).map(|(b, _)| b)
}

/// LLL reduction that also returns the integer matrix `T` with
/// `T · input = output` (rows as vectors).
pub fn lll_with_transform(basis: &LatticeBasis, delta: f64) -> Result<(LatticeBasis, Vec<Vec<i64>>), LatticeError> {
    if !(delta > 0.25 && delta < 1.0) {
        return Err(LatticeError::BadDelta);
    }
    let d = basis.dim();
    if d > MAX_LLL_DIM {
        return Err(LatticeError::TooLarge { dim: d, max: MAX_LLL_DIM });
    }
    let mut b: Vec<Vec<i128>> = basis.rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut t: Vec<Vec<i128>> = (0..d).map(|i| (0..d).map(|j| (i == j) as i128).collect()).collect();
    let (mut mu, mut bstar) = gram_schmidt(&b);
    let scale = b.iter().map(|r| dot(r, r)).fold(1.0, f64::max);
    if bstar.iter().any(|&x| x <= scale * 1e-12) {
        return Err(LatticeError::Dependent);
    }
    let mut k = 1;
    while k < d {
        for j in (0..k).rev() {
            let r = mu[k][j].round();
            if r != 0.0 {
                let ri = r as i128;
                for c in 0..b[k].len() {
                    b[k][c] -= ri * b[j][c];
                }
                for c in 0..d {
                    t[k][c] -= ri * t[j][c];
                }
                for i in 0..j {
                    mu[k][i] -= r * mu[j][i];
                }
                mu[k][j] -= r;
            }
        }
        if bstar[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * bstar[k - 1] {
            k += 1;
        } else {
            b.swap(k, k - 1);
            t.swap(k, k - 1);
            (mu, bstar) = gram_schmidt(&b);
            k = (k - 1).max(1);
        }
    }
    let narrow = |m: Vec<Vec<i128>>| -> Result<Vec<Vec<i64>>, LatticeError> {
        m.into_iter()
            .map(|r| r.into_iter().map(|x| i64::try_from(x).map_err(|_| LatticeError::Overflow)).collect())
            .collect()
    };
    Ok((LatticeBasis { rows: narrow(b)? }, narrow(t)?))
}

/// Shortest nonzero combination with every coefficient in `[-bound, bound]`.
pub fn shortest_vector_bruteforce(basis: &LatticeBasis, bound: i64) -> Result<Vec<i64>, LatticeError> {
    let d = basis.dim();
    if d > MAX_BRUTEFORCE_DIM {
        return Err(LatticeError::TooLarge { dim: d, max: MAX_BRUTEFORCE_DIM });
    }
    let width = basis.ambient_dim();
    let mut coeffs = vec![-bound; d];
    let mut best: Option<(i128, Vec<i64>)> = None;
    loop {
        if coeffs.iter().any(|&c| c != 0) {
            let mut v = vec![0i64; width];
            for (c, row) in coeffs.iter().zip(&basis.rows) {
                for (x, &y) in v.iter_mut().zip(row) {
                    *x += c * y;
                }
            }
            let n = norm_sq(&v);
            if best.as_ref().is_none_or(|(bn, _)| n < *bn) {
                best = Some((n, v));
            }
        }
        let mut i = 0;
        loop {
            if i == d {
                return Ok(best.map(|(_, v)| v).unwrap_or_default());
            }
            if coeffs[i] < bound {
                coeffs[i] += 1;
                break;
            }
            coeffs[i] = -bound;
            i += 1;
        }
    }
}

/// Closest-vector candidate via Kannan's embedding: reduces
/// `[[B, 0], [target, gamma]]` and reads the closest lattice vector off the
/// reduced row whose last coordinate is `±gamma`.
pub fn cvp_embed(basis: &LatticeBasis, target: &[i64], gamma: i64) -> Result<Vec<i64>, LatticeError> {
    let width = basis.ambient_dim();
    if target.len() != width {
        return Err(LatticeError::TargetLength { expected: width, got: target.len() });
    }
    let mut rows: Vec<Vec<i64>> = basis
        .rows
        .iter()
        .map(|r| r.iter().copied().chain(std::iter::once(0)).collect())
        .collect();
    rows.push(target.iter().copied().chain(std::iter::once(gamma)).collect());
    let reduced = lll(&LatticeBasis::new(rows)?, 0.75)?;
    let mut best: Option<(i128, Vec<i64>)> = None;
    for row in reduced.rows {
        let last = row[width];
        if last.abs() != gamma {
            continue;
        }
        let sign = last.signum();
        let e: Vec<i64> = row[..width].iter().map(|&x| sign * x).collect();
        let n = norm_sq(&e);
        if best.as_ref().is_none_or(|(bn, _)| n < *bn) {
            best = Some((n, e));
        }
    }
    let (_, e) = best.ok_or(LatticeError::NoEmbedding)?;
    Ok(target.iter().zip(&e).map(|(&t, &x)| t - x).collect())
}

/// Basis of `{x ∈ Z^s : x mod p ∈ column span of M}` for an `s × n` matrix
/// over `F_p`: the reduced row-echelon generators of the span plus `p·e_j`
/// for every non-pivot coordinate.
pub fn p_ary_basis(m: &Matrix) -> Result<LatticeBasis, LatticeError> {
    let RingCtx::PrimeField { p } = *m.ctx() else {
        return Err(LatticeError::NotPrimeField);
    };
    let s = m.rows();
    let mut echelon = m.transpose();
    let pivots = echelon.row_reduce().map_err(|_| LatticeError::NotPrimeField)?;
    let mut rows: Vec<Vec<i64>> = (0..pivots.len())
        .map(|r| echelon.row(r).iter().map(|e: &Element| e.value() as i64).collect())
        .collect();
    for j in (0..s).filter(|j| !pivots.contains(j)) {
        let mut v = vec![0i64; s];
        v[j] = p as i64;
        rows.push(v);
    }
    LatticeBasis::new(rows)
}
