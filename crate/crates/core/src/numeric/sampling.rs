use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{Point3Sphere, Quat};

/// Independent generator for substream `stream` of `seed`.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn gaussian4(r: &mut ChaCha8Rng) -> [f64; 4] {
    std::array::from_fn(|_| StandardNormal.sample(r))
}

/// Uniform points on S3 from normalized 4-dim Gaussians.
pub fn sample_s3(count: usize, seed: u64) -> Vec<Point3Sphere> {
    sample_s3_stream(count, seed, 0)
}

pub fn sample_s3_stream(count: usize, seed: u64, stream: u64) -> Vec<Point3Sphere> {
    let mut r = rng(seed, stream);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        if let Some(p) = Point3Sphere::new(gaussian4(&mut r)) {
            out.push(p);
        }
    }
    out
}

/// Uniform unit quaternions.
pub fn random_unit_quaternions(count: usize, seed: u64, stream: u64) -> Vec<Quat> {
    sample_s3_stream(count, seed, stream).iter().map(Point3Sphere::to_quat).collect()
}
