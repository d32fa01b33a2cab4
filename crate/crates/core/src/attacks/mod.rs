//! Distinguishing attacks: given only the `N` query rows, find the index `b`
//! of the requested file.
//!
//! * [`unit_vector_attack`]: `u_b` lies in the column span of the query
//!   matrix whenever `Y = {0}`, which breaks the basic scheme.
//! * [`rank_drop_attack`]: deleting row `b` lowers the prime-field rank by
//!   more than deleting any other row, which breaks HHWZ.
//! * [`amg_lattice_attack`]: blocks of rows not containing `b` hold a short
//!   `±1` vector in their p-ary lattice, which breaks AMG.
//!
//! None of them distinguishes the ring-LWE scheme.

mod amg;
pub mod lattice;
mod rank_drop;
mod unit_vector;

pub use amg::{amg_lattice_attack, MAX_BLOCK};
pub use lattice::{cvp_embed, lll, lll_with_transform, norm_sq, p_ary_basis, shortest_vector_bruteforce, LatticeBasis, LatticeError};
pub use rank_drop::rank_drop_attack;
pub use unit_vector::unit_vector_attack;

use std::fmt;
use std::time::Duration;

use rand::Rng;
use thiserror::Error;

use crate::algebra::{AlgebraError, Element, Matrix, RingCtx};
use crate::framework::Query;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AttackError {
    #[error("attack requires a field, got {0:?}")]
    NotAField(RingCtx),
    #[error("attack requires a prime field, got {0:?}")]
    NotPrimeField(RingCtx),
    #[error("coefficient view requires a polynomial ring with prime modulus")]
    NoCoefficientView,
    #[error("block size {block} must lie in 1..={max}")]
    BlockSize { block: usize, max: usize },
    #[error("query matrix is empty")]
    Empty,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// The `N` query rows as one `N × w` matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryMatrix {
    matrix: Matrix,
}

impl QueryMatrix {
    pub fn new(matrix: Matrix) -> Result<Self, AttackError> {
        if matrix.rows() == 0 {
            return Err(AttackError::Empty);
        }
        Ok(QueryMatrix { matrix })
    }

    pub fn from_query(query: &Query) -> Result<Self, AttackError> {
        QueryMatrix::new(Matrix::from_rows(&query.ctx, query.rows.clone())?)
    }

    pub fn ctx(&self) -> &RingCtx {
        self.matrix.ctx()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// Number of query rows `N`.
    pub fn len(&self) -> usize {
        self.matrix.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.rows() == 0
    }

    /// Rewrites a polynomial-ring matrix with prime modulus `q` over `F_q`,
    /// every polynomial entry becoming its coefficients.
    pub fn coefficient_view(&self) -> Result<QueryMatrix, AttackError> {
        let RingCtx::PolyRing { q, .. } = *self.ctx() else {
            return Err(AttackError::NoCoefficientView);
        };
        let field = RingCtx::prime_field(q).map_err(|_| AttackError::NoCoefficientView)?;
        let rows = self
            .matrix
            .to_rows()
            .into_iter()
            .map(|row| row.iter().flat_map(|e| e.residues().iter().map(|&r| Element::scalar(r))).collect())
            .collect();
        QueryMatrix::new(Matrix::from_rows(&field, rows)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    UnitVector,
    RankDrop,
    Lattice,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::UnitVector => "unitvec",
            Strategy::RankDrop => "rank",
            Strategy::Lattice => "lattice",
        })
    }
}

/// Outcome of one attack run. Indices are 1-based.
#[derive(Debug, Clone, PartialEq)]
pub struct AttackReport {
    pub strategy: Strategy,
    /// Per-row statistic: membership flag, rank, or CVP residual norm
    /// (`NaN` for rows the attack did not examine).
    pub stats: Vec<f64>,
    /// Per-block shortest-vector norms (lattice attack only).
    pub block_stats: Vec<f64>,
    pub guess: Option<usize>,
    pub candidates: Vec<usize>,
    pub elapsed: Duration,
    pub notes: Vec<String>,
    /// Set when the attack's preconditions for a reliable answer fail.
    pub degraded: bool,
}

impl AttackReport {
    fn new(strategy: Strategy) -> Self {
        AttackReport {
            strategy,
            stats: Vec::new(),
            block_stats: Vec::new(),
            guess: None,
            candidates: Vec::new(),
            elapsed: Duration::ZERO,
            notes: Vec::new(),
            degraded: false,
        }
    }

    /// A single index: the guess, else a uniform pick from the candidates,
    /// else a uniform pick from `1..=N`.
    pub fn decide<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        if let Some(g) = self.guess {
            return g;
        }
        if !self.candidates.is_empty() {
            return self.candidates[rng.random_range(0..self.candidates.len())];
        }
        rng.random_range(1..=self.stats.len().max(1))
    }
}

/// 1-based indices where `stats` attains its extreme value, ignoring NaN.
fn extreme_indices(stats: &[f64], largest: bool) -> Vec<usize> {
    let best = stats.iter().copied().filter(|v| !v.is_nan()).fold(None, |acc: Option<f64>, v| {
        Some(match acc {
            None => v,
            Some(a) if largest => a.max(v),
            Some(a) => a.min(v),
        })
    });
    match best {
        None => Vec::new(),
        Some(best) => (1..=stats.len()).filter(|&i| stats[i - 1] == best).collect(),
    }
}
