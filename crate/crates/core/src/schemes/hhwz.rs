use rand::{Rng, RngCore};

use super::{bits_below, check_shape, SchemeError, SchemeId};
use crate::algebra::{Element, RingCtx};
use crate::framework::{FileLayout, FrameworkError, HidingMode, RetrievalScheme};

/// `V` is spanned by the first `s` basis vectors of `F_{q^m}` over `F_q`,
/// `W` by the remaining `m - s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HhwzParams {
    pub q: u64,
    pub m: usize,
    pub s: usize,
    pub n: usize,
    pub k: usize,
    /// Monic irreducible modulus, `m + 1` coefficients lowest first.
    pub modulus: Vec<u64>,
}

impl HhwzParams {
    /// Parameters over the smallest irreducible modulus of degree `m`.
    pub fn with_default_modulus(q: u64, m: usize, s: usize, n: usize, k: usize) -> Result<Self, SchemeError> {
        let RingCtx::ExtField { modulus, .. } = RingCtx::ext_field_default(q, m)? else {
            unreachable!("ext_field_default returns an extension field")
        };
        Ok(HhwzParams { q, m, s, n, k, modulus })
    }
}

impl Default for HhwzParams {
    fn default() -> Self {
        // x^4 + x + 1
        HhwzParams { q: 2, m: 4, s: 2, n: 6, k: 3, modulus: vec![1, 1, 0, 0, 1] }
    }
}

/// Projection onto `V` along `W` in `F_{q^m}`, with files in `F_q`.
#[derive(Debug, Clone)]
pub struct Hhwz {
    params: HhwzParams,
    ctx: RingCtx,
}

impl Hhwz {
    pub fn new(params: HhwzParams) -> Result<Self, SchemeError> {
        check_shape(params.n, params.k)?;
        if params.s == 0 || params.s >= params.m {
            return Err(SchemeError::Subspace { s: params.s, m: params.m });
        }
        let ctx = RingCtx::ext_field(params.q, params.modulus.clone())?;
        Ok(Hhwz { params, ctx })
    }

    pub fn params(&self) -> &HhwzParams {
        &self.params
    }

    fn random_coords(&self, range: std::ops::Range<usize>, rng: &mut dyn RngCore) -> Element {
        let mut r = vec![0; self.params.m];
        for c in &mut r[range] {
            *c = rng.random_range(0..self.params.q);
        }
        Element::from_residues(r)
    }
}

impl RetrievalScheme for Hhwz {
    fn id(&self) -> SchemeId {
        SchemeId::Hhwz
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
        let mut r = x.residues().to_vec();
        r[self.params.s..].iter_mut().for_each(|c| *c = 0);
        Element::from_residues(r)
    }

    fn sample_kernel(&self, rng: &mut dyn RngCore) -> Element {
        self.random_coords(self.params.s..self.params.m, rng)
    }

    fn sample_marker(&self, rng: &mut dyn RngCore) -> Element {
        loop {
            let z = self.random_coords(0..self.params.s, rng);
            if !self.ctx.is_zero(&z) {
                return z;
            }
        }
    }

    fn sample_file(&self, rng: &mut dyn RngCore) -> Element {
        self.ctx.constant(rng.random_range(0..self.params.q))
    }

    fn is_file(&self, x: &Element) -> bool {
        self.ctx.contains(x) && x.residues()[1..].iter().all(|&c| c == 0)
    }

    fn recover(&self, value: &Element, marker_image: &Element) -> Result<Element, FrameworkError> {
        let inv = self.ctx.invert(marker_image).map_err(|_| FrameworkError::MarkerNotUnit)?;
        let m = self.ctx.mul(value, &inv);
        if !self.is_file(&m) {
            return Err(FrameworkError::RecoveryFailed);
        }
        Ok(m)
    }

    fn max_files(&self) -> Option<usize> {
        None
    }

    fn file_layout(&self) -> FileLayout {
        FileLayout { digits: 1, bits_per_digit: bits_below(self.params.q) }
    }

    fn file_from_digits(&self, digits: &[u64]) -> Element {
        self.ctx.constant(digits[0])
    }

    fn file_digits(&self, file: &Element) -> Vec<u64> {
        vec![file.residues()[0]]
    }
}
