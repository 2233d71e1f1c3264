//! Seeded generators for the property sweeps.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::quaternion::Quaternion;
use crate::series::Series;

pub type SweepRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SweepRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Quaternion with i.i.d. standard normal components times `scale`.
pub fn gaussian_quaternion<R: Rng>(rng: &mut R, scale: f64) -> Quaternion {
    let mut c = [0.0; 4];
    for v in &mut c {
        let s: f64 = StandardNormal.sample(rng);
        *v = s * scale;
    }
    Quaternion::from_array(c)
}

/// Uniform point of the open ball of radius `r` (rejection sampling).
pub fn ball_point<R: Rng>(rng: &mut R, r: f64) -> Quaternion {
    loop {
        let q = Quaternion::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        if q.norm_sqr() < 1.0 {
            return q.scale(r);
        }
    }
}

/// Polynomial of exactly `degree` with Gaussian quaternion coefficients.
pub fn gaussian_polynomial<R: Rng>(rng: &mut R, degree: usize, scale: f64) -> Series {
    let coeffs = (0..=degree).map(|_| gaussian_quaternion(rng, scale)).collect();
    Series::polynomial(coeffs)
}
