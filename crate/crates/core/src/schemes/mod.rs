//! The four concrete retrieval schemes and their parameter sets.
//!
//! | scheme | ring            | `f`                         | hiding mode   | broken by          |
//! |--------|-----------------|-----------------------------|---------------|--------------------|
//! | basic  | `F_q`           | identity                    | systematic    | unit-vector search |
//! | hhwz   | `F_{q^m}`       | projection onto `V`         | systematic    | rank drop          |
//! | amg    | `F_p`           | `x - cmod_t(x)`             | systematic    | block lattice      |
//! | rlwe   | `Z_q[x]/(x^n+1)`| coefficientwise `mod t`     | explicit      | none known         |

mod amg;
mod basic;
mod hhwz;
mod rlwe;

pub use amg::{Amg, AmgParams};
pub use basic::{Basic, BasicParams};
pub use hhwz::{Hhwz, HhwzParams};
pub use rlwe::{Rlwe, RlweParams};

use std::fmt;
use std::str::FromStr;

use rand::RngCore;
use thiserror::Error;

use crate::algebra::{AlgebraError, Element, RingCtx};
use crate::framework::{FileLayout, FrameworkError, HidingMode, OffTargetNoise, RetrievalScheme};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SchemeError {
    #[error("code shape requires 0 < k < n, got n={n}, k={k}")]
    Shape { n: usize, k: usize },
    #[error("subspace dimension s={s} must lie in 1..{m}")]
    Subspace { s: usize, m: usize },
    #[error("database size must be at least 1")]
    NoFiles,
    #[error("amg database size {0} is too large for 64-bit moduli")]
    AmgTooLarge(usize),
    #[error("plaintext modulus t={t} must satisfy 2 <= t < q={q}")]
    PlaintextModulus { t: u64, q: u64 },
    #[error("gcd(t={t}, q={q}) != 1")]
    NotCoprime { t: u64, q: u64 },
    #[error("sigma must be finite and non-negative, got {0}")]
    Sigma(f64),
    #[error("noise bound violated: N*t^2*sigma*sqrt(n) = {lhs} is not below q/2 = {rhs}")]
    NoiseBound { lhs: f64, rhs: f64 },
    #[error("amg prime {given} does not match the derived prime {expected}")]
    AmgPrime { given: u64, expected: u64 },
    #[error("unknown scheme {0:?}")]
    UnknownScheme(String),
    #[error("malformed parameter block")]
    BadParams,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeId {
    Basic,
    Hhwz,
    Amg,
    Rlwe,
}

impl SchemeId {
    pub const ALL: [SchemeId; 4] = [SchemeId::Basic, SchemeId::Hhwz, SchemeId::Amg, SchemeId::Rlwe];

    pub fn byte(self) -> u8 {
        match self {
            SchemeId::Basic => 0x01,
            SchemeId::Hhwz => 0x02,
            SchemeId::Amg => 0x03,
            SchemeId::Rlwe => 0x04,
        }
    }

    pub fn from_byte(b: u8) -> Option<Self> {
        SchemeId::ALL.into_iter().find(|id| id.byte() == b)
    }

    pub fn name(self) -> &'static str {
        match self {
            SchemeId::Basic => "basic",
            SchemeId::Hhwz => "hhwz",
            SchemeId::Amg => "amg",
            SchemeId::Rlwe => "rlwe",
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeId {
    type Err = SchemeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SchemeId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| SchemeError::UnknownScheme(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SchemeParams {
    Basic(BasicParams),
    Hhwz(HhwzParams),
    Amg(AmgParams),
    Rlwe(RlweParams),
}

impl SchemeParams {
    /// The desk-scale defaults every test and example starts from.
    pub fn default_for(id: SchemeId) -> Self {
        match id {
            SchemeId::Basic => SchemeParams::Basic(BasicParams::default()),
            SchemeId::Hhwz => SchemeParams::Hhwz(HhwzParams::default()),
            SchemeId::Amg => SchemeParams::Amg(AmgParams::default()),
            SchemeId::Rlwe => SchemeParams::Rlwe(RlweParams::default()),
        }
    }

    /// Database size the defaults are meant for.
    pub fn default_files(id: SchemeId) -> usize {
        match id {
            SchemeId::Basic => 50,
            SchemeId::Hhwz => 30,
            SchemeId::Amg => 8,
            SchemeId::Rlwe => 16,
        }
    }

    pub fn id(&self) -> SchemeId {
        match self {
            SchemeParams::Basic(_) => SchemeId::Basic,
            SchemeParams::Hhwz(_) => SchemeId::Hhwz,
            SchemeParams::Amg(_) => SchemeId::Amg,
            SchemeParams::Rlwe(_) => SchemeId::Rlwe,
        }
    }

    pub fn build(&self) -> Result<SchemeInstance, SchemeError> {
        Ok(match self {
            SchemeParams::Basic(p) => SchemeInstance::Basic(Basic::new(p.clone())?),
            SchemeParams::Hhwz(p) => SchemeInstance::Hhwz(Hhwz::new(p.clone())?),
            SchemeParams::Amg(p) => SchemeInstance::Amg(Amg::new(p.clone())?),
            SchemeParams::Rlwe(p) => SchemeInstance::Rlwe(Rlwe::new(p.clone())?),
        })
    }

    /// Ring elements per query row.
    pub fn row_len(&self) -> usize {
        match self {
            SchemeParams::Basic(p) => p.n,
            SchemeParams::Hhwz(p) => p.n,
            SchemeParams::Amg(p) => p.n,
            SchemeParams::Rlwe(_) => 2,
        }
    }

    /// Residues per ring element.
    pub fn element_width(&self) -> usize {
        match self {
            SchemeParams::Basic(_) | SchemeParams::Amg(_) => 1,
            SchemeParams::Hhwz(p) => p.m,
            SchemeParams::Rlwe(p) => p.deg,
        }
    }

    /// Parameters as the `u64` words of the wire parameter block.
    pub fn to_words(&self) -> Vec<u64> {
        match self {
            SchemeParams::Basic(p) => vec![p.q, p.n as u64, p.k as u64],
            SchemeParams::Hhwz(p) => {
                let mut w = vec![p.q, p.m as u64, p.s as u64, p.n as u64, p.k as u64];
                w.extend_from_slice(&p.modulus[..p.m]);
                w
            }
            SchemeParams::Amg(p) => vec![p.files as u64, p.n as u64, p.k as u64, p.prime()],
            SchemeParams::Rlwe(p) => vec![p.deg as u64, p.q, p.t, p.sigma.to_bits(), p.files as u64],
        }
    }

    /// Number of words [`from_words`](Self::from_words) consumes, given the
    /// words read so far.
    pub fn word_count(id: SchemeId, prefix: &[u64]) -> Option<usize> {
        Some(match id {
            SchemeId::Basic => 3,
            SchemeId::Hhwz => 5 + usize::try_from(*prefix.get(1)?).ok().filter(|&m| m <= 8)?,
            SchemeId::Amg => 4,
            SchemeId::Rlwe => 5,
        })
    }

    /// Inverse of [`to_words`](Self::to_words). Validates the parameters.
    pub fn from_words(id: SchemeId, words: &[u64]) -> Result<Self, SchemeError> {
        if Some(words.len()) != Self::word_count(id, words) {
            return Err(SchemeError::BadParams);
        }
        let size = |w: u64| usize::try_from(w).map_err(|_| SchemeError::BadParams);
        let params = match id {
            SchemeId::Basic => SchemeParams::Basic(BasicParams { q: words[0], n: size(words[1])?, k: size(words[2])? }),
            SchemeId::Hhwz => {
                let m = size(words[1])?;
                let mut modulus = words[5..5 + m].to_vec();
                modulus.push(1);
                SchemeParams::Hhwz(HhwzParams {
                    q: words[0],
                    m,
                    s: size(words[2])?,
                    n: size(words[3])?,
                    k: size(words[4])?,
                    modulus,
                })
            }
            SchemeId::Amg => {
                let p = AmgParams { files: size(words[0])?, n: size(words[1])?, k: size(words[2])? };
                p.validate()?;
                if p.prime() != words[3] {
                    return Err(SchemeError::AmgPrime { given: words[3], expected: p.prime() });
                }
                SchemeParams::Amg(p)
            }
            SchemeId::Rlwe => SchemeParams::Rlwe(RlweParams {
                deg: size(words[0])?,
                q: words[1],
                t: words[2],
                sigma: f64::from_bits(words[3]),
                files: size(words[4])?,
            }),
        };
        params.build()?;
        Ok(params)
    }
}

/// One of the four schemes behind a single type.
#[derive(Debug, Clone)]
pub enum SchemeInstance {
    Basic(Basic),
    Hhwz(Hhwz),
    Amg(Amg),
    Rlwe(Rlwe),
}

impl SchemeInstance {
    pub fn params(&self) -> SchemeParams {
        match self {
            SchemeInstance::Basic(s) => SchemeParams::Basic(s.params().clone()),
            SchemeInstance::Hhwz(s) => SchemeParams::Hhwz(s.params().clone()),
            SchemeInstance::Amg(s) => SchemeParams::Amg(s.params().clone()),
            SchemeInstance::Rlwe(s) => SchemeParams::Rlwe(s.params().clone()),
        }
    }

    fn inner(&self) -> &dyn RetrievalScheme {
        match self {
            SchemeInstance::Basic(s) => s,
            SchemeInstance::Hhwz(s) => s,
            SchemeInstance::Amg(s) => s,
            SchemeInstance::Rlwe(s) => s,
        }
    }
}

impl RetrievalScheme for SchemeInstance {
    fn id(&self) -> SchemeId {
        self.inner().id()
    }

    fn ctx(&self) -> &RingCtx {
        self.inner().ctx()
    }

    fn hiding_mode(&self) -> HidingMode {
        self.inner().hiding_mode()
    }

    fn code_shape(&self) -> (usize, usize) {
        self.inner().code_shape()
    }

    fn retrieve(&self, x: &Element) -> Element {
        self.inner().retrieve(x)
    }

    fn sample_kernel(&self, rng: &mut dyn RngCore) -> Element {
        self.inner().sample_kernel(rng)
    }

    fn sample_marker(&self, rng: &mut dyn RngCore) -> Element {
        self.inner().sample_marker(rng)
    }

    fn sample_file(&self, rng: &mut dyn RngCore) -> Element {
        self.inner().sample_file(rng)
    }

    fn is_file(&self, x: &Element) -> bool {
        self.inner().is_file(x)
    }

    fn recover(&self, value: &Element, marker_image: &Element) -> Result<Element, FrameworkError> {
        self.inner().recover(value, marker_image)
    }

    fn max_files(&self) -> Option<usize> {
        self.inner().max_files()
    }

    fn off_target_noise(&self) -> OffTargetNoise {
        self.inner().off_target_noise()
    }

    fn file_layout(&self) -> FileLayout {
        self.inner().file_layout()
    }

    fn file_from_digits(&self, digits: &[u64]) -> Element {
        self.inner().file_from_digits(digits)
    }

    fn file_digits(&self, file: &Element) -> Vec<u64> {
        self.inner().file_digits(file)
    }

    fn audit_extraction(&self, decoded: &Element, file: &Element) -> bool {
        self.inner().audit_extraction(decoded, file)
    }
}

fn check_shape(n: usize, k: usize) -> Result<(), SchemeError> {
    if k == 0 || k >= n {
        return Err(SchemeError::Shape { n, k });
    }
    Ok(())
}

/// Largest `b` with `2^b <= modulus`, at least one.
fn bits_below(modulus: u64) -> u32 {
    (63 - modulus.leading_zeros()).max(1)
}
