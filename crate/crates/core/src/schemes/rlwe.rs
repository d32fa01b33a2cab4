use rand::{Rng, RngCore};

use super::{bits_below, SchemeError, SchemeId};
use crate::algebra::{gaussian_sample, gcd, signed_lift, Element, RingCtx};
use crate::framework::{FileLayout, FrameworkError, HidingMode, RetrievalScheme};

#[derive(Debug, Clone, PartialEq)]
pub struct RlweParams {
    /// Ring degree, a power of two.
    pub deg: usize,
    pub q: u64,
    pub t: u64,
    pub sigma: f64,
    /// Database size the noise bound is certified for.
    pub files: usize,
}

impl Default for RlweParams {
    fn default() -> Self {
        RlweParams { deg: 64, q: 12289, t: 4, sigma: 2.0, files: 16 }
    }
}

impl RlweParams {
    /// `N·t²·σ·√n`, which must stay below `q/2`.
    pub fn noise_bound(&self) -> f64 {
        self.files as f64 * (self.t as f64).powi(2) * self.sigma * (self.deg as f64).sqrt()
    }
}

/// Ring-LWE style scheme over `Z_q[x]/(x^n + 1)`: rows are `(a_i, a_i s + e_i)`
/// with `e_i = t·χ` off target and `t·χ + 1` on target; `f` reduces every
/// coefficient's signed lift modulo `t`.
#[derive(Debug, Clone)]
pub struct Rlwe {
    params: RlweParams,
    ctx: RingCtx,
}

impl Rlwe {
    pub fn new(params: RlweParams) -> Result<Self, SchemeError> {
        let RlweParams { q, t, sigma, files, .. } = params;
        let ctx = RingCtx::poly_ring(q, params.deg)?;
        if t < 2 || t >= q {
            return Err(SchemeError::PlaintextModulus { t, q });
        }
        if gcd(t, q) != 1 {
            return Err(SchemeError::NotCoprime { t, q });
        }
        if !sigma.is_finite() || sigma < 0.0 {
            return Err(SchemeError::Sigma(sigma));
        }
        if files == 0 {
            return Err(SchemeError::NoFiles);
        }
        let lhs = params.noise_bound();
        let rhs = q as f64 / 2.0;
        if lhs >= rhs {
            return Err(SchemeError::NoiseBound { lhs, rhs });
        }
        Ok(Rlwe { params, ctx })
    }

    pub fn params(&self) -> &RlweParams {
        &self.params
    }

    fn scaled_noise(&self, rng: &mut dyn RngCore) -> Vec<u64> {
        let t = self.params.t as i64;
        (0..self.params.deg)
            .map(|_| self.ctx.from_signed(t * gaussian_sample(self.params.sigma, rng)).value())
            .collect()
    }
}

impl RetrievalScheme for Rlwe {
    fn id(&self) -> SchemeId {
        SchemeId::Rlwe
    }

    fn ctx(&self) -> &RingCtx {
        &self.ctx
    }

    fn hiding_mode(&self) -> HidingMode {
        HidingMode::ExplicitCoefficients
    }

    fn code_shape(&self) -> (usize, usize) {
        (2, 1)
    }

    fn retrieve(&self, x: &Element) -> Element {
        let (q, t) = (self.params.q, self.params.t as i64);
        Element::from_residues(x.residues().iter().map(|&c| signed_lift(q, c).rem_euclid(t) as u64).collect())
    }

    fn sample_kernel(&self, rng: &mut dyn RngCore) -> Element {
        Element::from_residues(self.scaled_noise(rng))
    }

    fn sample_marker(&self, rng: &mut dyn RngCore) -> Element {
        let mut r = self.scaled_noise(rng);
        r[0] = (r[0] + 1) % self.params.q;
        Element::from_residues(r)
    }

    fn sample_file(&self, rng: &mut dyn RngCore) -> Element {
        Element::from_residues((0..self.params.deg).map(|_| rng.random_range(0..self.params.t)).collect())
    }

    fn is_file(&self, x: &Element) -> bool {
        self.ctx.contains(x) && x.residues().iter().all(|&c| c < self.params.t)
    }

    /// `f(z) = 1`, so recovery is the identity on plaintext polynomials.
    fn recover(&self, value: &Element, marker_image: &Element) -> Result<Element, FrameworkError> {
        if *marker_image != self.ctx.one() {
            return Err(FrameworkError::MarkerNotUnit);
        }
        if !self.is_file(value) {
            return Err(FrameworkError::RecoveryFailed);
        }
        Ok(value.clone())
    }

    fn max_files(&self) -> Option<usize> {
        Some(self.params.files)
    }

    fn file_layout(&self) -> FileLayout {
        FileLayout { digits: self.params.deg, bits_per_digit: bits_below(self.params.t) }
    }

    fn file_from_digits(&self, digits: &[u64]) -> Element {
        let mut r = digits.to_vec();
        r.resize(self.params.deg, 0);
        Element::from_residues(r)
    }

    fn file_digits(&self, file: &Element) -> Vec<u64> {
        file.residues().to_vec()
    }

    fn audit_extraction(&self, decoded: &Element, file: &Element) -> bool {
        let (q, t) = (self.params.q, self.params.t as i64);
        decoded
            .residues()
            .iter()
            .zip(file.residues())
            .all(|(&d, &m)| (signed_lift(q, d) - m as i64).rem_euclid(t) == 0)
    }
}
