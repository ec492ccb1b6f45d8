//! Double-precision checks of the geometry behind the exact verdicts.
//!
//! Points of S3 are stored in the real coordinates of C2,
//! (Re z1, Im z1, Re z2, Im z2), where the quaternion q = z1 + j z2.
//! For q = w + xi + yj + zk this is (w, x, y, -z).

pub mod adjoint;
pub mod contact;
pub mod fixed_point;
pub mod framing;
pub mod report;
pub mod sampling;

use nalgebra::{Quaternion, Vector4};
use serde::{Deserialize, Serialize};

use crate::quaternion::UnitQuaternion;
use crate::spin::SpinPair;

pub type Quat = Quaternion<f64>;

pub fn quat_from_exact(q: &UnitQuaternion) -> Quat {
    let [w, x, y, z] = q.to_f64();
    Quat::new(w, x, y, z)
}

pub fn pair_from_exact(g: &SpinPair) -> (Quat, Quat) {
    (quat_from_exact(g.left()), quat_from_exact(g.right()))
}

/// x -> l x conj(r).
pub fn act(l: &Quat, r: &Quat, x: &Quat) -> Quat {
    l * x * r.conjugate()
}

/// A point of S3 in C2 real coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point3Sphere {
    c: [f64; 4],
}

impl Point3Sphere {
    /// Normalizes `c`; `None` for (near) zero input.
    pub fn new(c: [f64; 4]) -> Option<Self> {
        let n = Vector4::from(c).norm();
        (n > 1e-300 && n.is_finite()).then(|| Self { c: c.map(|v| v / n) })
    }

    pub fn coords(&self) -> [f64; 4] {
        self.c
    }

    pub fn vector(&self) -> Vector4<f64> {
        Vector4::from(self.c)
    }

    pub fn from_quat(q: &Quat) -> Option<Self> {
        Self::new([q.w, q.i, q.j, -q.k])
    }

    pub fn to_quat(&self) -> Quat {
        Quat::new(self.c[0], self.c[1], self.c[2], -self.c[3])
    }
}

/// Tangent vectors in C2 coordinates <-> quaternions (the same linear map as points).
pub fn vec_to_quat(v: &Vector4<f64>) -> Quat {
    Quat::new(v[0], v[1], v[2], -v[3])
}

pub fn quat_to_vec(q: &Quat) -> Vector4<f64> {
    Vector4::new(q.w, q.i, q.j, -q.k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinate_round_trip() {
        let q = Quat::new(0.5, -0.5, 0.5, 0.5);
        let p = Point3Sphere::from_quat(&q).unwrap();
        assert_eq!(p.coords(), [0.5, -0.5, 0.5, -0.5]);
        assert_eq!(p.to_quat(), q);
        assert!(Point3Sphere::new([0.0; 4]).is_none());
    }

    #[test]
    fn exact_conversion() {
        let h = UnitQuaternion::hurwitz(4).unwrap();
        let q = quat_from_exact(&h);
        assert!((q - Quat::new(0.5, 0.5, 0.5, 0.5)).norm() < 1e-15);
    }
}
