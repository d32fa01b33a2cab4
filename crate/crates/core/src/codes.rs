//! Secret codes used to mask queries.
//!
//! [`LinearCode`] is a random `[n, k]` code over a field together with an
//! information set `I`, which lets the user strip the codeword part of any
//! word whose error is supported on `I^C`. [`ConstacyclicCode`] is the ideal
//! generated by a single polynomial in `(Z/qZ)[x]/(x^n + 1)`.

use rand::seq::index;
use rand::Rng;
use thiserror::Error;

use crate::algebra::{AlgebraError, Element, Matrix, RingCtx};

/// Information-set draws tried per generator matrix before resampling it.
const INFO_SET_RETRIES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("invalid code shape: need 0 < k < n, got n={n}, k={k}")]
    Shape { n: usize, k: usize },
    #[error("codes over {0:?} need a field context")]
    NotAField(RingCtx),
    #[error("constacyclic codes need a polynomial ring context")]
    NotPolyRing,
    #[error("generator polynomial is zero")]
    ZeroGenerator,
    #[error("expected a vector of length {expected}, got {got}")]
    Length { expected: usize, got: usize },
    #[error("information set is invalid for this generator matrix")]
    BadInformationSet,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// An `[n, k]` linear code with a generator matrix and an information set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    ctx: RingCtx,
    n: usize,
    k: usize,
    generator: Matrix,
    info_set: Vec<usize>,
    info_inverse: Matrix,
}

impl LinearCode {
    /// Uniformly random full-rank generator and a uniformly random
    /// information set for it.
    pub fn sample<R: Rng + ?Sized>(ctx: &RingCtx, n: usize, k: usize, rng: &mut R) -> Result<Self, CodeError> {
        check_shape(ctx, n, k)?;
        loop {
            let generator = Matrix::random(ctx, k, n, rng);
            if generator.rank()? < k {
                continue;
            }
            for _ in 0..INFO_SET_RETRIES {
                let mut info_set = index::sample(rng, n, k).into_vec();
                info_set.sort_unstable();
                if let Ok(code) = LinearCode::new(generator.clone(), info_set) {
                    return Ok(code);
                }
            }
        }
    }

    /// Wraps a given generator matrix; fails if `G_I` is not invertible.
    pub fn new(generator: Matrix, info_set: Vec<usize>) -> Result<Self, CodeError> {
        let ctx = generator.ctx().clone();
        let (k, n) = (generator.rows(), generator.cols());
        check_shape(&ctx, n, k)?;
        let mut sorted = info_set.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != k || sorted.iter().any(|&i| i >= n) {
            return Err(CodeError::BadInformationSet);
        }
        let info_inverse = match generator.select_columns(&info_set).inverse() {
            Ok(inv) => inv,
            Err(AlgebraError::Singular) => return Err(CodeError::BadInformationSet),
            Err(e) => return Err(e.into()),
        };
        Ok(LinearCode { ctx, n, k, generator, info_set, info_inverse })
    }

    pub fn ctx(&self) -> &RingCtx {
        &self.ctx
    }

    pub fn length(&self) -> usize {
        self.n
    }

    pub fn dimension(&self) -> usize {
        self.k
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn info_set(&self) -> &[usize] {
        &self.info_set
    }

    pub fn info_inverse(&self) -> &Matrix {
        &self.info_inverse
    }

    /// Coordinates outside the information set, ascending.
    pub fn complement(&self) -> Vec<usize> {
        (0..self.n).filter(|i| !self.info_set.contains(i)).collect()
    }

    /// `a ↦ a·G`.
    pub fn encode(&self, message: &[Element]) -> Result<Vec<Element>, CodeError> {
        if message.len() != self.k {
            return Err(CodeError::Length { expected: self.k, got: message.len() });
        }
        Ok(self.generator.left_mul_vec(message)?)
    }

    /// Returns `r - r_I·G_I⁻¹·G`. This equals the error `e` whenever
    /// `r = c + e` with `Supp(e) ⊆ I^C`; coordinates in `I` are always zero.
    pub fn erase_decode(&self, received: &[Element]) -> Result<Vec<Element>, CodeError> {
        if received.len() != self.n {
            return Err(CodeError::Length { expected: self.n, got: received.len() });
        }
        let r_info: Vec<Element> = self.info_set.iter().map(|&i| received[i].clone()).collect();
        let message = self.info_inverse.left_mul_vec(&r_info)?;
        let codeword = self.encode(&message)?;
        Ok(received.iter().zip(&codeword).map(|(r, c)| self.ctx.sub(r, c)).collect())
    }
}

fn check_shape(ctx: &RingCtx, n: usize, k: usize) -> Result<(), CodeError> {
    if !ctx.is_field() {
        return Err(CodeError::NotAField(ctx.clone()));
    }
    if k == 0 || k >= n {
        return Err(CodeError::Shape { n, k });
    }
    Ok(())
}

/// The ideal `s·R_q` of the negacyclic ring `R_q = (Z/qZ)[x]/(x^n + 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstacyclicCode {
    ctx: RingCtx,
    generator: Element,
}

impl ConstacyclicCode {
    pub fn new(ctx: &RingCtx, generator: Element) -> Result<Self, CodeError> {
        if !matches!(ctx, RingCtx::PolyRing { .. }) {
            return Err(CodeError::NotPolyRing);
        }
        if !ctx.contains(&generator) {
            return Err(AlgebraError::ContextMismatch.into());
        }
        if ctx.is_zero(&generator) {
            return Err(CodeError::ZeroGenerator);
        }
        Ok(ConstacyclicCode { ctx: ctx.clone(), generator })
    }

    pub fn sample<R: Rng + ?Sized>(ctx: &RingCtx, rng: &mut R) -> Result<Self, CodeError> {
        loop {
            match ConstacyclicCode::new(ctx, ctx.random(rng)) {
                Err(CodeError::ZeroGenerator) => continue,
                other => return other,
            }
        }
    }

    pub fn ctx(&self) -> &RingCtx {
        &self.ctx
    }

    pub fn generator(&self) -> &Element {
        &self.generator
    }

    /// `a ↦ a·s`.
    pub fn encode(&self, a: &Element) -> Element {
        self.ctx.mul(a, &self.generator)
    }

    /// `r2 - s·r1`.
    pub fn decode(&self, r1: &Element, r2: &Element) -> Element {
        self.ctx.sub(r2, &self.encode(r1))
    }
}
