//! The double cover S3 -> SO(3), q -> (v -> q v conj(q)).

use nalgebra::Matrix3;

use super::Quat;
use crate::error::{Error, Result};

/// Columns are q i conj(q), q j conj(q), q k conj(q) in (i, j, k) coordinates.
pub fn adjoint_matrix(q: &Quat) -> Matrix3<f64> {
    let cols = [Quat::new(0.0, 1.0, 0.0, 0.0), Quat::new(0.0, 0.0, 1.0, 0.0), Quat::new(0.0, 0.0, 0.0, 1.0)]
        .map(|e| (q * e * q.conjugate()).imag());
    Matrix3::from_columns(&cols)
}

/// The two unit quaternions q, -q with adjoint_matrix(q) = r (q with w >= 0 first).
pub fn adjoint_preimages(r: &Matrix3<f64>) -> Result<[Quat; 2]> {
    let orth = (r.transpose() * r - Matrix3::identity()).abs().max();
    let det = r.determinant();
    if orth > 1e-9 || (det - 1.0).abs() > 1e-9 {
        return Err(Error::NotARotation(format!("orthogonality defect {orth:e}, determinant {det}")));
    }
    let t = r.trace();
    let d = [t, r[(0, 0)], r[(1, 1)], r[(2, 2)]];
    let big = (0..4).max_by(|&a, &b| d[a].total_cmp(&d[b])).unwrap_or(0);
    let (w, x, y, z) = match big {
        0 => {
            let w = 0.5 * (1.0 + t).sqrt();
            let f = 0.25 / w;
            (w, (r[(2, 1)] - r[(1, 2)]) * f, (r[(0, 2)] - r[(2, 0)]) * f, (r[(1, 0)] - r[(0, 1)]) * f)
        }
        1 => {
            let x = 0.5 * (1.0 + r[(0, 0)] - r[(1, 1)] - r[(2, 2)]).sqrt();
            let f = 0.25 / x;
            ((r[(2, 1)] - r[(1, 2)]) * f, x, (r[(0, 1)] + r[(1, 0)]) * f, (r[(0, 2)] + r[(2, 0)]) * f)
        }
        2 => {
            let y = 0.5 * (1.0 - r[(0, 0)] + r[(1, 1)] - r[(2, 2)]).sqrt();
            let f = 0.25 / y;
            ((r[(0, 2)] - r[(2, 0)]) * f, (r[(0, 1)] + r[(1, 0)]) * f, y, (r[(1, 2)] + r[(2, 1)]) * f)
        }
        _ => {
            let z = 0.5 * (1.0 - r[(0, 0)] - r[(1, 1)] + r[(2, 2)]).sqrt();
            let f = 0.25 / z;
            ((r[(1, 0)] - r[(0, 1)]) * f, (r[(0, 2)] + r[(2, 0)]) * f, (r[(1, 2)] + r[(2, 1)]) * f, z)
        }
    };
    let mut q = Quat::new(w, x, y, z);
    q /= q.norm();
    if q.w < 0.0 {
        q = -q;
    }
    Ok([q, -q])
}
