use rand::{Rng, RngCore};

use super::{check_shape, SchemeError, SchemeId};
use crate::algebra::{centered_residue, next_prime_above, signed_lift, Element, RingCtx};
use crate::framework::{FileLayout, FrameworkError, HidingMode, OffTargetNoise, RetrievalScheme};

/// Everything else (`ℓ`, `t`, `p`) is derived from the database size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmgParams {
    pub files: usize,
    pub n: usize,
    pub k: usize,
}

impl Default for AmgParams {
    fn default() -> Self {
        AmgParams { files: 8, n: 4, k: 2 }
    }
}

impl AmgParams {
    /// File bit length `⌈log₂ N⌉ + 1`.
    pub fn file_bits(&self) -> u32 {
        usize::BITS - self.files.saturating_sub(1).leading_zeros() + 1
    }

    /// `t = 2^{2ℓ}`.
    pub fn t(&self) -> u64 {
        1 << (2 * self.file_bits())
    }

    /// Smallest prime above `2^{3ℓ+1}`.
    ///
    /// One bit more than `2^{3ℓ}`: with `m_b` up to `2^ℓ - 1` the marked value
    /// `m_b·t` plus the cross terms must stay below `p/2` to lift correctly.
    pub fn prime(&self) -> u64 {
        next_prime_above(1 << (3 * self.file_bits() + 1))
    }

    pub(super) fn validate(&self) -> Result<(), SchemeError> {
        check_shape(self.n, self.k)?;
        if self.files == 0 {
            return Err(SchemeError::NoFiles);
        }
        if 3 * self.file_bits() + 1 > 60 {
            return Err(SchemeError::AmgTooLarge(self.files));
        }
        Ok(())
    }
}

/// Lee-weight style retrieval over `F_p`: `f(x) = x - cmod_t(x)` on signed
/// lifts, `Y = {±1}`, `Z = {t}`, files below `2^ℓ`.
///
/// Errors are zero away from the marked coordinate, so every block of query
/// rows keeps its short `±1` combination; that is what the lattice attack
/// exploits.
#[derive(Debug, Clone)]
pub struct Amg {
    params: AmgParams,
    ctx: RingCtx,
    t: u64,
    p: u64,
}

impl Amg {
    pub fn new(params: AmgParams) -> Result<Self, SchemeError> {
        params.validate()?;
        let p = params.prime();
        let ctx = RingCtx::prime_field(p)?;
        Ok(Amg { t: params.t(), p, params, ctx })
    }

    pub fn params(&self) -> &AmgParams {
        &self.params
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn p(&self) -> u64 {
        self.p
    }
}

impl RetrievalScheme for Amg {
    fn id(&self) -> SchemeId {
        SchemeId::Amg
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
        let w = signed_lift(self.p, x.value());
        self.ctx.from_signed(w - centered_residue(self.t, w))
    }

    fn sample_kernel(&self, rng: &mut dyn RngCore) -> Element {
        self.ctx.from_signed(if rng.random::<bool>() { 1 } else { -1 })
    }

    fn sample_marker(&self, _rng: &mut dyn RngCore) -> Element {
        Element::scalar(self.t)
    }

    fn sample_file(&self, rng: &mut dyn RngCore) -> Element {
        Element::scalar(rng.random_range(0..1 << self.params.file_bits()))
    }

    fn is_file(&self, x: &Element) -> bool {
        self.ctx.contains(x) && x.value() < 1 << self.params.file_bits()
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
        Some(self.params.files)
    }

    fn off_target_noise(&self) -> OffTargetNoise {
        OffTargetNoise::Zero
    }

    fn file_layout(&self) -> FileLayout {
        FileLayout { digits: 1, bits_per_digit: self.params.file_bits() }
    }

    fn file_from_digits(&self, digits: &[u64]) -> Element {
        Element::scalar(digits[0])
    }

    fn file_digits(&self, file: &Element) -> Vec<u64> {
        vec![file.value()]
    }

    fn audit_extraction(&self, decoded: &Element, file: &Element) -> bool {
        let cross = signed_lift(self.p, decoded.value()) as i128 - (file.value() * self.t) as i128;
        2 * cross.unsigned_abs() < self.t as u128
    }
}
