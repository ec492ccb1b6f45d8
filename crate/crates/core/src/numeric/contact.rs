//! The standard contact structure: the planes orthogonal to V(z1, z2) = (i z1, i z2).

use nalgebra::{Matrix2, Matrix4, Matrix4x2, Vector4};
use serde::{Deserialize, Serialize};

use super::{quat_to_vec, vec_to_quat, Point3Sphere, Quat};
use crate::error::{Error, Result};

pub const FD_STEP: f64 = 1e-5;

/// J x = (-x1, x0, -x3, x2): multiplication by i on both complex coordinates.
pub fn reeb(x: &Vector4<f64>) -> Vector4<f64> {
    Vector4::new(-x[1], x[0], -x[3], x[2])
}

/// The contact form on R4, alpha_x(Y) = <J x, Y>.
fn alpha(x: &Vector4<f64>, y: &Vector4<f64>) -> f64 {
    reeb(x).dot(y)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContactFrame {
    pub v: [f64; 4],
    pub x1: [f64; 4],
    pub x2: [f64; 4],
}

impl ContactFrame {
    fn vectors(&self) -> [Vector4<f64>; 3] {
        [self.v.into(), self.x1.into(), self.x2.into()]
    }
}

/// Generalized cross product: the vector x with det[a, b, c, y] = <x, y>.
fn cross4(a: &Vector4<f64>, b: &Vector4<f64>, c: &Vector4<f64>) -> Vector4<f64> {
    Vector4::from_fn(|i, _| {
        let e = Vector4::from_fn(|k, _| if k == i { 1.0 } else { 0.0 });
        Matrix4::from_columns(&[*a, *b, *c, e]).determinant()
    })
}

/// V(p), X1 = p j (as a quaternion), and X2 completing (p, V, X1, X2) to a
/// positively oriented orthonormal basis of R4.
pub fn contact_plane(p: &Point3Sphere) -> Result<ContactFrame> {
    let x = p.vector();
    let v = reeb(&x);
    let x1 = quat_to_vec(&(p.to_quat() * Quat::new(0.0, 0.0, 1.0, 0.0)));
    let x2 = cross4(&x, &v, &x1);
    let vs = [x, v, x1, x2];
    for (a, u) in vs.iter().enumerate() {
        let bad_norm = (u.norm() - 1.0).abs() > 1e-10;
        let bad_angle = vs[..a].iter().any(|w| w.dot(u).abs() > 1e-10);
        if bad_norm || bad_angle {
            return Err(Error::DegenerateFrame(format!("{:?}", p.coords())));
        }
    }
    Ok(ContactFrame { v: v.into(), x1: x1.into(), x2: x2.into() })
}

/// (alpha ^ d alpha)(V, X1, X2) with d alpha from central differences.
/// Positive values mean a positive contact structure at p.
pub fn contact_condition(p: &Point3Sphere) -> Result<f64> {
    let frame = contact_plane(p)?;
    let x = p.vector();
    let e = frame.vectors();
    let h = FD_STEP;
    let d_alpha = |a: &Vector4<f64>, b: &Vector4<f64>| {
        let da_b = (alpha(&(x + a * h), b) - alpha(&(x - a * h), b)) / (2.0 * h);
        let db_a = (alpha(&(x + b * h), a) - alpha(&(x - b * h), a)) / (2.0 * h);
        da_b - db_a
    };
    Ok(alpha(&x, &e[0]) * d_alpha(&e[1], &e[2]) - alpha(&x, &e[1]) * d_alpha(&e[0], &e[2])
        + alpha(&x, &e[2]) * d_alpha(&e[0], &e[1]))
}

/// Sine of the largest principal angle between span(u) and span(w), both
/// given by orthonormal columns.
pub fn largest_principal_angle_sin(u: &Matrix4x2<f64>, w: &Matrix4x2<f64>) -> f64 {
    let r = u - w * (w.transpose() * u);
    let m: Matrix2<f64> = r.transpose() * r;
    let (a, b, c) = (m[(0, 0)], m[(0, 1)], m[(1, 1)]);
    let lam = 0.5 * (a + c) + (0.25 * (a - c) * (a - c) + b * b).sqrt();
    lam.max(0.0).sqrt().min(1.0)
}

/// Largest principal angle (as a sine) between the image of the contact
/// plane at p under x -> l x conj(r) and the contact plane at the image point.
pub fn plane_defect(l: &Quat, r: &Quat, p: &Point3Sphere) -> Result<f64> {
    let push = |v: &Vector4<f64>| quat_to_vec(&(l * vec_to_quat(v) * r.conjugate()));
    let f = contact_plane(p)?;
    let gp = Point3Sphere::new(push(&p.vector()).into())
        .ok_or_else(|| Error::DegenerateFrame(format!("{:?}", p.coords())))?;
    let g = contact_plane(&gp)?;
    let u = Matrix4x2::from_columns(&[push(&f.x1.into()), push(&f.x2.into())]);
    let w = Matrix4x2::from_columns(&[g.x1.into(), g.x2.into()]);
    Ok(largest_principal_angle_sin(&u, &w))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvarianceOutcome {
    pub invariant: bool,
    pub worst_defect: f64,
    /// First sample whose defect exceeds the tolerance.
    pub witness: Option<usize>,
}

pub fn invariance_check(l: &Quat, r: &Quat, samples: &[Point3Sphere], tol: f64) -> Result<InvarianceOutcome> {
    let mut worst = 0.0f64;
    let mut witness = None;
    for (i, p) in samples.iter().enumerate() {
        let d = plane_defect(l, r, p)?;
        if d > tol && witness.is_none() {
            witness = Some(i);
        }
        worst = worst.max(d);
    }
    Ok(InvarianceOutcome { invariant: witness.is_none(), worst_defect: worst, witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::sampling::{random_unit_quaternions, sample_s3};
    use crate::numeric::quat_from_exact;
    use crate::quaternion::UnitQuaternion;

    #[test]
    fn frame_at_one() {
        let p = Point3Sphere::new([1.0, 0.0, 0.0, 0.0]).unwrap();
        let f = contact_plane(&p).unwrap();
        assert_eq!(f.v, [0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn positive_everywhere_sampled() {
        for p in sample_s3(1000, 42) {
            let c = contact_condition(&p).unwrap();
            assert!(c > 1e-3, "{c}");
            assert!((c - 2.0).abs() < 1e-6, "{c}");
            let f = contact_plane(&p).unwrap();
            assert!(Vector4::from(f.v).dot(&p.vector()).abs() < 1e-15);
        }
    }

    #[test]
    fn invariance_examples() {
        let pts = sample_s3(200, 1);
        let zeta8 = Quat::new(0.5f64.sqrt(), 0.5f64.sqrt(), 0.0, 0.0);
        for q in random_unit_quaternions(5, 3, 0) {
            assert!(invariance_check(&q, &zeta8, &pts, 1e-9).unwrap().invariant);
        }
        let j = Quat::new(0.0, 0.0, 1.0, 0.0);
        assert!(invariance_check(&Quat::identity(), &j, &pts, 1e-9).unwrap().invariant);
        let ico = quat_from_exact(&UnitQuaternion::icosian(20).unwrap());
        let out = invariance_check(&Quat::identity(), &ico, &pts, 1e-9).unwrap();
        assert!(!out.invariant);
        assert!(out.worst_defect > 0.1);
    }
}
