use rand::Rng;

use crate::error::{Error, Result};

/// Draws from Lap(0, `scale`) by inverting the CDF of one uniform draw.
pub fn laplace_sample<R: Rng + ?Sized>(scale: f64, rng: &mut R) -> Result<f64> {
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::arg(format!("Laplace scale must be positive, got {scale}")));
    }
    Ok(sample_unchecked(scale, rng))
}

fn sample_unchecked<R: Rng + ?Sized>(scale: f64, rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.random::<f64>() - 0.5;
        // u = -0.5 maps to an infinite draw
        if u > -0.5 {
            return -scale * u.signum() * (-2.0 * u.abs()).ln_1p();
        }
    }
}

/// Noise for a sensitivity-1 query at budget `epsilon`; zero when the budget
/// is infinite.
pub(crate) fn unit_noise<R: Rng + ?Sized>(epsilon: f64, rng: &mut R) -> f64 {
    if epsilon.is_infinite() {
        0.0
    } else {
        sample_unchecked(1.0 / epsilon, rng)
    }
}

/// `d + Lap(1/epsilon_1)`, unclamped. An infinite `epsilon_1` returns `d`.
pub fn noisy_degree<R: Rng + ?Sized>(d: usize, epsilon_1: f64, rng: &mut R) -> Result<f64> {
    if !(epsilon_1 > 0.0) {
        return Err(Error::arg(format!("epsilon_1 must be positive, got {epsilon_1}")));
    }
    Ok(d as f64 + unit_noise(epsilon_1, rng))
}
