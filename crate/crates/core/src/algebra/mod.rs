//! Exact arithmetic over the ambient algebras used by the retrieval schemes.
//!
//! Four contexts are supported: prime fields `F_p`, extension fields `F_{q^m}`
//! stored as coordinate vectors over the polynomial basis `1, x, ..., x^{m-1}`,
//! the integers modulo `q`, and the negacyclic ring `(Z/qZ)[x]/(x^n + 1)`.
//! Every residue is a canonical `u64` below its modulus and products go through
//! 128-bit intermediates.

mod matrix;
mod sampling;

pub use matrix::Matrix;
pub use sampling::{gaussian_sample, uniform_residue};

use rand::Rng;
use thiserror::Error;

/// Largest number of candidate divisors tried by the irreducibility check.
const MAX_TRIAL_DIVISORS: u128 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(u64),
    #[error("extension modulus must be monic of degree 1..=8 with coefficients below q")]
    BadExtensionModulus,
    #[error("extension modulus is reducible over F_{q}")]
    Reducible { q: u64 },
    #[error("irreducibility of a degree-{m} modulus over F_{q} is too expensive to check")]
    TooLargeToCheck { q: u64, m: usize },
    #[error("polynomial ring degree {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("operands do not belong to the same context")]
    ContextMismatch,
    #[error("element is not a unit")]
    NonUnit,
    #[error("operation requires a field context")]
    NotAField,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is singular")]
    Singular,
}

/// The ambient algebra every element and matrix lives in.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingCtx {
    PrimeField { p: u64 },
    /// `modulus` holds `m + 1` coefficients, lowest degree first, leading one.
    ExtField { q: u64, m: usize, modulus: Vec<u64> },
    ModRing { q: u64 },
    PolyRing { q: u64, n: usize },
}

/// A ring element as its canonical residues: one for scalar contexts, `m`
/// basis coordinates for extension fields, `n` coefficients for polynomials.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Element(Vec<u64>);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Neg,
}

impl Element {
    pub fn scalar(value: u64) -> Self {
        Element(vec![value])
    }

    pub fn from_residues(residues: Vec<u64>) -> Self {
        Element(residues)
    }

    pub fn residues(&self) -> &[u64] {
        &self.0
    }

    pub fn into_residues(self) -> Vec<u64> {
        self.0
    }

    /// First residue: the value of a scalar, or the constant coefficient.
    pub fn value(&self) -> u64 {
        self.0.first().copied().unwrap_or(0)
    }
}

impl RingCtx {
    pub fn prime_field(p: u64) -> Result<Self, AlgebraError> {
        if p < 2 {
            return Err(AlgebraError::BadModulus(p));
        }
        if !is_prime(p) {
            return Err(AlgebraError::NotPrime(p));
        }
        Ok(RingCtx::PrimeField { p })
    }

    /// Extension field `F_q[x]/(modulus)`. The modulus is given lowest degree
    /// first and must be monic and irreducible.
    pub fn ext_field(q: u64, modulus: Vec<u64>) -> Result<Self, AlgebraError> {
        if q < 2 {
            return Err(AlgebraError::BadModulus(q));
        }
        if !is_prime(q) {
            return Err(AlgebraError::NotPrime(q));
        }
        let m = modulus.len().saturating_sub(1);
        if !(1..=8).contains(&m) || modulus[m] != 1 || modulus.iter().any(|&c| c >= q) {
            return Err(AlgebraError::BadExtensionModulus);
        }
        if !is_irreducible(q, &modulus)? {
            return Err(AlgebraError::Reducible { q });
        }
        Ok(RingCtx::ExtField { q, m, modulus })
    }

    /// Extension field of degree `m` using the smallest irreducible monic
    /// modulus when its lower coefficients are read as a base-`q` integer.
    pub fn ext_field_default(q: u64, m: usize) -> Result<Self, AlgebraError> {
        let modulus = find_irreducible(q, m)?;
        RingCtx::ext_field(q, modulus)
    }

    pub fn mod_ring(q: u64) -> Result<Self, AlgebraError> {
        if q < 2 {
            return Err(AlgebraError::BadModulus(q));
        }
        Ok(RingCtx::ModRing { q })
    }

    pub fn poly_ring(q: u64, n: usize) -> Result<Self, AlgebraError> {
        if q < 2 {
            return Err(AlgebraError::BadModulus(q));
        }
        if !n.is_power_of_two() {
            return Err(AlgebraError::NotPowerOfTwo(n));
        }
        Ok(RingCtx::PolyRing { q, n })
    }

    /// Modulus every stored residue is reduced by.
    pub fn residue_modulus(&self) -> u64 {
        match *self {
            RingCtx::PrimeField { p } => p,
            RingCtx::ExtField { q, .. } | RingCtx::ModRing { q } | RingCtx::PolyRing { q, .. } => q,
        }
    }

    /// Number of residues per element.
    pub fn width(&self) -> usize {
        match *self {
            RingCtx::PrimeField { .. } | RingCtx::ModRing { .. } => 1,
            RingCtx::ExtField { m, .. } => m,
            RingCtx::PolyRing { n, .. } => n,
        }
    }

    pub fn is_field(&self) -> bool {
        matches!(self, RingCtx::PrimeField { .. } | RingCtx::ExtField { .. })
    }

    /// Degree over the prime subfield (1 for a prime field).
    pub fn extension_degree(&self) -> usize {
        match *self {
            RingCtx::ExtField { m, .. } => m,
            _ => 1,
        }
    }

    /// The prime subfield of a field context.
    pub fn base_field(&self) -> Result<RingCtx, AlgebraError> {
        match *self {
            RingCtx::PrimeField { p } => Ok(RingCtx::PrimeField { p }),
            RingCtx::ExtField { q, .. } => Ok(RingCtx::PrimeField { p: q }),
            _ => Err(AlgebraError::NotAField),
        }
    }

    pub fn contains(&self, x: &Element) -> bool {
        let modulus = self.residue_modulus();
        x.0.len() == self.width() && x.0.iter().all(|&r| r < modulus)
    }

    fn check(&self, x: &Element) -> Result<(), AlgebraError> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(AlgebraError::ContextMismatch)
        }
    }

    pub fn zero(&self) -> Element {
        Element(vec![0; self.width()])
    }

    pub fn one(&self) -> Element {
        self.constant(1)
    }

    /// The constant `c mod modulus` embedded in this context.
    pub fn constant(&self, c: u64) -> Element {
        let mut v = vec![0; self.width()];
        v[0] = c % self.residue_modulus();
        Element(v)
    }

    /// The constant congruent to a signed integer.
    pub fn from_signed(&self, w: i64) -> Element {
        self.constant(reduce_signed(w as i128, self.residue_modulus()))
    }

    pub fn is_zero(&self, x: &Element) -> bool {
        x.0.iter().all(|&r| r == 0)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Element {
        let modulus = self.residue_modulus();
        Element((0..self.width()).map(|_| rng.random_range(0..modulus)).collect())
    }

    pub fn add(&self, x: &Element, y: &Element) -> Element {
        debug_assert!(self.contains(x) && self.contains(y));
        let q = self.residue_modulus();
        Element(x.0.iter().zip(&y.0).map(|(&a, &b)| add_mod(a, b, q)).collect())
    }

    pub fn sub(&self, x: &Element, y: &Element) -> Element {
        debug_assert!(self.contains(x) && self.contains(y));
        let q = self.residue_modulus();
        Element(x.0.iter().zip(&y.0).map(|(&a, &b)| sub_mod(a, b, q)).collect())
    }

    pub fn neg(&self, x: &Element) -> Element {
        debug_assert!(self.contains(x));
        let q = self.residue_modulus();
        Element(x.0.iter().map(|&a| sub_mod(0, a, q)).collect())
    }

    pub fn mul(&self, x: &Element, y: &Element) -> Element {
        debug_assert!(self.contains(x) && self.contains(y));
        match self {
            RingCtx::PrimeField { p: q } | RingCtx::ModRing { q } => {
                Element::scalar(mul_mod(x.0[0], y.0[0], *q))
            }
            RingCtx::ExtField { q, m, modulus } => {
                Element(ext_mul(&x.0, &y.0, *q, *m, modulus))
            }
            RingCtx::PolyRing { q, n } => Element(negacyclic_mul(&x.0, &y.0, *q, *n)),
        }
    }

    /// Multiplies every residue of `x` by the integer scalar `c`.
    pub fn scale(&self, c: u64, x: &Element) -> Element {
        let q = self.residue_modulus();
        let c = c % q;
        Element(x.0.iter().map(|&a| mul_mod(a, c, q)).collect())
    }

    /// Checked ring operation; `y` is ignored for negation.
    pub fn arith(&self, op: ArithOp, x: &Element, y: &Element) -> Result<Element, AlgebraError> {
        self.check(x)?;
        if op != ArithOp::Neg {
            self.check(y)?;
        }
        Ok(match op {
            ArithOp::Add => self.add(x, y),
            ArithOp::Sub => self.sub(x, y),
            ArithOp::Mul => self.mul(x, y),
            ArithOp::Neg => self.neg(x),
        })
    }

    /// Multiplicative inverse.
    ///
    /// For `PolyRing` with a composite modulus the solver only pivots on unit
    /// residues, so some units may be reported as `NonUnit`.
    pub fn invert(&self, x: &Element) -> Result<Element, AlgebraError> {
        self.check(x)?;
        match self {
            RingCtx::PrimeField { p: q } | RingCtx::ModRing { q } => inv_mod(x.0[0], *q)
                .map(Element::scalar)
                .ok_or(AlgebraError::NonUnit),
            RingCtx::ExtField { .. } | RingCtx::PolyRing { .. } => {
                let w = self.width();
                // Column j of the multiplication-by-x map is x * basis_j.
                let mut system = vec![vec![0u64; w]; w];
                for j in 0..w {
                    let mut basis = vec![0u64; w];
                    basis[j] = 1;
                    let col = self.mul(x, &Element(basis));
                    for (i, &c) in col.0.iter().enumerate() {
                        system[i][j] = c;
                    }
                }
                let mut rhs = vec![0u64; w];
                rhs[0] = 1;
                solve_square_mod(system, rhs, self.residue_modulus())
                    .map(Element)
                    .ok_or(AlgebraError::NonUnit)
            }
        }
    }
}

/// Unique `w ≡ x (mod p)` with `-⌊p/2⌋ ≤ w ≤ ⌊p/2⌋`.
pub fn signed_lift(p: u64, x: u64) -> i64 {
    debug_assert!(x < p);
    if x > p / 2 {
        -((p - x) as i64)
    } else {
        x as i64
    }
}

/// Unique integer in `(-t/2, t/2]` congruent to `w` modulo `t`.
pub fn centered_residue(t: u64, w: i64) -> i64 {
    debug_assert!(t >= 2);
    let t = t as i128;
    let r = (w as i128).rem_euclid(t);
    if 2 * r > t {
        (r - t) as i64
    } else {
        r as i64
    }
}

pub(crate) fn reduce_signed(w: i128, m: u64) -> u64 {
    w.rem_euclid(m as i128) as u64
}

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

#[inline]
pub(crate) fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let quot = r0 / r1;
        (r0, r1) = (r1, r0 - quot * r1);
        (s0, s1) = (s1, s0 - quot * s1);
    }
    (r0 == 1).then(|| reduce_signed(s0, m))
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime_above(n: u64) -> u64 {
    let mut c = n + 1;
    while !is_prime(c) {
        c += 1;
    }
    c
}

fn ext_mul(x: &[u64], y: &[u64], q: u64, m: usize, modulus: &[u64]) -> Vec<u64> {
    let mut prod = vec![0u64; 2 * m - 1];
    for (i, &a) in x.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in y.iter().enumerate() {
            prod[i + j] = add_mod(prod[i + j], mul_mod(a, b, q), q);
        }
    }
    poly_reduce_monic(&mut prod, modulus, q);
    prod.truncate(m);
    prod
}

/// Reduces `poly` in place modulo a monic polynomial; the low `deg(modulus)`
/// entries hold the remainder afterwards.
fn poly_reduce_monic(poly: &mut [u64], modulus: &[u64], q: u64) {
    let m = modulus.len() - 1;
    for deg in (m..poly.len()).rev() {
        let c = poly[deg];
        if c == 0 {
            continue;
        }
        for (j, &mj) in modulus.iter().enumerate() {
            let idx = deg - m + j;
            poly[idx] = sub_mod(poly[idx], mul_mod(c, mj, q), q);
        }
    }
}

fn negacyclic_mul(x: &[u64], y: &[u64], q: u64, n: usize) -> Vec<u64> {
    let mut out = vec![0u64; n];
    for (i, &a) in x.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in y.iter().enumerate() {
            let term = mul_mod(a, b, q);
            let idx = i + j;
            if idx < n {
                out[idx] = add_mod(out[idx], term, q);
            } else {
                out[idx - n] = sub_mod(out[idx - n], term, q);
            }
        }
    }
    out
}

/// Irreducibility by trial division against every monic polynomial of degree
/// `1..=m/2`.
fn is_irreducible(q: u64, modulus: &[u64]) -> Result<bool, AlgebraError> {
    let m = modulus.len() - 1;
    let half = m / 2;
    let work: u128 = (1..=half).map(|d| (q as u128).saturating_pow(d as u32)).sum();
    if work > MAX_TRIAL_DIVISORS {
        return Err(AlgebraError::TooLargeToCheck { q, m });
    }
    for d in 1..=half {
        let count = (q as u128).pow(d as u32);
        for code in 0..count {
            let mut divisor = digits(code, q, d);
            divisor.push(1);
            let mut rem = modulus.to_vec();
            poly_reduce_monic(&mut rem, &divisor, q);
            if rem[..d].iter().all(|&c| c == 0) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn find_irreducible(q: u64, m: usize) -> Result<Vec<u64>, AlgebraError> {
    if !is_prime(q) {
        return Err(AlgebraError::NotPrime(q));
    }
    if !(1..=8).contains(&m) {
        return Err(AlgebraError::BadExtensionModulus);
    }
    let count = (q as u128).saturating_pow(m as u32);
    for code in 0..count {
        let mut candidate = digits(code, q, m);
        candidate.push(1);
        if is_irreducible(q, &candidate)? {
            return Ok(candidate);
        }
    }
    Err(AlgebraError::Reducible { q })
}

fn digits(mut code: u128, q: u64, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len + 1);
    for _ in 0..len {
        out.push((code % q as u128) as u64);
        code /= q as u128;
    }
    out
}

/// Gauss-Jordan solve of a square system over `Z/qZ`, pivoting on units only.
fn solve_square_mod(mut a: Vec<Vec<u64>>, mut b: Vec<u64>, q: u64) -> Option<Vec<u64>> {
    let n = b.len();
    for col in 0..n {
        let (pivot, inv) = (col..n).find_map(|r| inv_mod(a[r][col], q).map(|inv| (r, inv)))?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        for c in col..n {
            a[col][c] = mul_mod(a[col][c], inv, q);
        }
        b[col] = mul_mod(b[col], inv, q);
        for r in 0..n {
            if r == col || a[r][col] == 0 {
                continue;
            }
            let factor = a[r][col];
            for c in col..n {
                a[r][c] = sub_mod(a[r][c], mul_mod(factor, a[col][c], q), q);
            }
            b[r] = sub_mod(b[r], mul_mod(factor, b[col], q), q);
        }
    }
    Some(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn x_poly(n: usize, q: u64) -> Element {
        let ctx = RingCtx::poly_ring(q, n).unwrap();
        let mut e = ctx.zero().into_residues();
        e[1] = 1;
        Element::from_residues(e)
    }

    #[test]
    fn prime_field_examples() {
        let f7 = RingCtx::prime_field(7).unwrap();
        let r = f7.arith(ArithOp::Mul, &Element::scalar(3), &Element::scalar(5)).unwrap();
        assert_eq!(r, Element::scalar(1));
        assert_eq!(f7.invert(&Element::scalar(3)).unwrap(), Element::scalar(5));
        assert_eq!(f7.invert(&Element::scalar(0)), Err(AlgebraError::NonUnit));
        assert!(matches!(RingCtx::prime_field(12), Err(AlgebraError::NotPrime(12))));
    }

    #[test]
    fn negacyclic_wrap() {
        let ctx = RingCtx::poly_ring(17, 2).unwrap();
        let x = x_poly(2, 17);
        assert_eq!(ctx.mul(&x, &x), Element::from_residues(vec![16, 0]));
    }

    #[test]
    fn ext_field_forced_by_modulus() {
        let ctx = RingCtx::ext_field(2, vec![1, 1, 1]).unwrap();
        let beta2 = Element::from_residues(vec![0, 1]);
        assert_eq!(ctx.mul(&beta2, &beta2), Element::from_residues(vec![1, 1]));
        assert_eq!(
            RingCtx::ext_field(2, vec![1, 0, 1]),
            Err(AlgebraError::Reducible { q: 2 })
        );
    }

    #[test]
    fn default_modulus_for_gf16() {
        let ctx = RingCtx::ext_field_default(2, 4).unwrap();
        assert_eq!(ctx, RingCtx::ExtField { q: 2, m: 4, modulus: vec![1, 1, 0, 0, 1] });
    }

    #[test]
    fn mod_ring_inverse() {
        let ctx = RingCtx::mod_ring(12289).unwrap();
        let inv = ctx.invert(&Element::scalar(4)).unwrap().value();
        // 4 * 9217 = 36868 = 3 * 12289 + 1
        assert_eq!(inv, 9217);
        let ctx12 = RingCtx::mod_ring(12).unwrap();
        assert_eq!(ctx12.invert(&Element::scalar(4)), Err(AlgebraError::NonUnit));
    }

    #[test]
    fn mod_ring_inverse_matches_euclid_oracle() {
        // Independent oracle: brute-force search for the inverse.
        for a in 1..200u64 {
            let brute = (1..12289u64).find(|&y| (a * y) % 12289 == 1).unwrap();
            assert_eq!(inv_mod(a, 12289), Some(brute));
        }
    }

    #[test]
    fn lifts_and_residues() {
        assert_eq!(signed_lift(7, 6), -1);
        assert_eq!(signed_lift(7, 3), 3);
        assert_eq!(signed_lift(4099, 4098), -1);
        assert_eq!(centered_residue(256, 255), -1);
        assert_eq!(centered_residue(256, 100), 100);
        assert_eq!(centered_residue(256, -300), -44);
        assert_eq!(centered_residue(256, 128), 128);
        assert_eq!(centered_residue(256, -128), 128);
        assert_eq!(centered_residue(3, i64::MIN), centered_residue(3, (i64::MIN % 3) + 3));
    }

    #[test]
    fn field_inverses_round_trip() {
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let ctxs = [
            RingCtx::prime_field(13).unwrap(),
            RingCtx::ext_field_default(2, 4).unwrap(),
            RingCtx::ext_field_default(3, 3).unwrap(),
            RingCtx::ext_field_default(13, 2).unwrap(),
        ];
        for ctx in &ctxs {
            for _ in 0..50 {
                let x = ctx.random(&mut rng);
                if ctx.is_zero(&x) {
                    continue;
                }
                let inv = ctx.invert(&x).unwrap();
                assert_eq!(ctx.mul(&x, &inv), ctx.one());
            }
        }
    }

    #[test]
    fn poly_ring_inverse_of_unit() {
        let ctx = RingCtx::poly_ring(12289, 8).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        let x = ctx.random(&mut rng);
        let inv = ctx.invert(&x).unwrap();
        assert_eq!(ctx.mul(&x, &inv), ctx.one());
    }

    #[test]
    fn negacyclic_matches_schoolbook_oracle() {
        // Oracle: full product of length 2n-1, then fold x^(n+i) = -x^i.
        let (q, n) = (97u64, 16usize);
        let ctx = RingCtx::poly_ring(q, n).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        for _ in 0..100 {
            let a = ctx.random(&mut rng);
            let b = ctx.random(&mut rng);
            let mut full = vec![0i128; 2 * n - 1];
            for i in 0..n {
                for j in 0..n {
                    full[i + j] += a.residues()[i] as i128 * b.residues()[j] as i128;
                }
            }
            let folded: Vec<u64> = (0..n)
                .map(|i| {
                    let hi = if i + n < 2 * n - 1 { full[i + n] } else { 0 };
                    (full[i] - hi).rem_euclid(q as i128) as u64
                })
                .collect();
            assert_eq!(ctx.mul(&a, &b).into_residues(), folded);
        }
    }

    #[test]
    fn context_mismatch_is_reported() {
        let f7 = RingCtx::prime_field(7).unwrap();
        assert_eq!(
            f7.arith(ArithOp::Add, &Element::scalar(9), &Element::scalar(1)),
            Err(AlgebraError::ContextMismatch)
        );
        assert_eq!(
            f7.arith(ArithOp::Add, &Element::from_residues(vec![1, 2]), &Element::scalar(1)),
            Err(AlgebraError::ContextMismatch)
        );
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(is_prime(12289));
        assert!(is_prime(8209));
        assert_eq!(next_prime_above(1 << 13), 8209);
        assert!(is_prime(18446744073709551557));
        assert!(!is_prime(3215031751));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn centered_residue_is_congruent_and_in_range(t in 2u64..1 << 40, w in any::<i64>()) {
                let r = centered_residue(t, w);
                prop_assert_eq!((w as i128 - r as i128).rem_euclid(t as i128), 0);
                prop_assert!(2 * (r as i128) > -(t as i128) && 2 * (r as i128) <= t as i128);
            }

            #[test]
            fn signed_lift_reduces_back(p in 2u64..u64::MAX, x in any::<u64>()) {
                let x = x % p;
                let w = signed_lift(p, x);
                prop_assert_eq!(reduce_signed(w as i128, p), x);
                prop_assert!(w.unsigned_abs() <= p / 2);
            }

            #[test]
            fn prime_field_inverse(x in 1u64..8209) {
                let ctx = RingCtx::prime_field(8209).unwrap();
                let inv = ctx.invert(&Element::scalar(x)).unwrap();
                prop_assert_eq!(ctx.mul(&Element::scalar(x), &inv), ctx.one());
            }
        }
    }
}
