use rand::{Rng, RngCore};

use super::{bits_below, check_shape, SchemeError, SchemeId};
use crate::algebra::{Element, RingCtx};
use crate::framework::{FileLayout, FrameworkError, HidingMode, RetrievalScheme};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasicParams {
    pub q: u64,
    pub n: usize,
    pub k: usize,
}

impl Default for BasicParams {
    fn default() -> Self {
        BasicParams { q: 13, n: 10, k: 5 }
    }
}

/// Identity retrieval over a prime field: `Y = {0}`, `Z = F_q \ {0}`.
///
/// The identity is the only nonzero field endomorphism usable as `f`, which
/// forces the desired row to be the only one with a nonzero error at `v`.
#[derive(Debug, Clone)]
pub struct Basic {
    params: BasicParams,
    ctx: RingCtx,
}

impl Basic {
    pub fn new(params: BasicParams) -> Result<Self, SchemeError> {
        check_shape(params.n, params.k)?;
        let ctx = RingCtx::prime_field(params.q)?;
        Ok(Basic { params, ctx })
    }

    pub fn params(&self) -> &BasicParams {
        &self.params
    }
}

impl RetrievalScheme for Basic {
    fn id(&self) -> SchemeId {
        SchemeId::Basic
    }

    fn ctx(&self) -> &RingCtx {
        &self.ctx
    }

    fn hiding_mode(&self) -> HidingMode {
        HidingMode::SystematicErrors
    }

    fn code_shape(&self) -> (usize, usize) {
        (self.params.n, self.params.k)
    }

    fn retrieve(&self, x: &Element) -> Element {
        x.clone()
    }

    fn sample_kernel(&self, _rng: &mut dyn RngCore) -> Element {
        self.ctx.zero()
    }

    fn sample_marker(&self, rng: &mut dyn RngCore) -> Element {
        Element::scalar(rng.random_range(1..self.params.q))
    }

    fn sample_file(&self, rng: &mut dyn RngCore) -> Element {
        self.ctx.random(rng)
    }

    fn is_file(&self, x: &Element) -> bool {
        self.ctx.contains(x)
    }

    fn recover(&self, value: &Element, marker_image: &Element) -> Result<Element, FrameworkError> {
        let inv = self.ctx.invert(marker_image).map_err(|_| FrameworkError::MarkerNotUnit)?;
        Ok(self.ctx.mul(value, &inv))
    }

    fn max_files(&self) -> Option<usize> {
        None
    }

    fn file_layout(&self) -> FileLayout {
        FileLayout { digits: 1, bits_per_digit: bits_below(self.params.q) }
    }

    fn file_from_digits(&self, digits: &[u64]) -> Element {
        Element::scalar(digits[0])
    }

    fn file_digits(&self, file: &Element) -> Vec<u64> {
        vec![file.value()]
    }
}
