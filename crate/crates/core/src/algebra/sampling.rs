use rand::Rng;
use rand_distr::StandardNormal;

/// Rounded normal variate with standard deviation `sigma`, rejected and
/// redrawn beyond `⌈6σ⌉`.
pub fn gaussian_sample<R: Rng + ?Sized>(sigma: f64, rng: &mut R) -> i64 {
    debug_assert!(sigma >= 0.0);
    if sigma <= 0.0 {
        return 0;
    }
    let cutoff = (6.0 * sigma).ceil() as i64;
    loop {
        let z: f64 = rng.sample(StandardNormal);
        let v = (z * sigma).round() as i64;
        if v.abs() <= cutoff {
            return v;
        }
    }
}

pub fn uniform_residue<R: Rng + ?Sized>(modulus: u64, rng: &mut R) -> u64 {
    rng.random_range(0..modulus)
}
