use nalgebra::{Matrix4, Vector4};

use super::{quat_to_vec, vec_to_quat, Point3Sphere, Quat};

pub const FIXED_POINT_TOL: f64 = 1e-9;

/// Matrix of x -> l x conj(r) in C2 real coordinates.
pub fn action_matrix(l: &Quat, r: &Quat) -> Matrix4<f64> {
    let cols: Vec<Vector4<f64>> = (0..4)
        .map(|i| {
            let e = Vector4::from_fn(|k, _| if k == i { 1.0 } else { 0.0 });
            quat_to_vec(&(l * vec_to_quat(&e) * r.conjugate()))
        })
        .collect();
    Matrix4::from_columns(&cols)
}

/// A unit vector fixed by x -> l x conj(r), if the map has eigenvalue 1.
pub fn fixed_point_oracle(l: &Quat, r: &Quat) -> Option<Point3Sphere> {
    let m = action_matrix(l, r);
    let svd = (m - Matrix4::identity()).svd(false, true);
    let v_t = svd.v_t?;
    let (idx, smin) = svd
        .singular_values
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))?;
    if smin > FIXED_POINT_TOL {
        return None;
    }
    let x: Vector4<f64> = v_t.row(idx).transpose();
    let p = Point3Sphere::new(x.into())?;
    ((m * p.vector() - p.vector()).norm() <= FIXED_POINT_TOL).then_some(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::FamilySpec;
    use crate::numeric::pair_from_exact;
    use crate::spin::Side;

    #[test]
    fn examples() {
        let i = Quat::new(0.0, 1.0, 0.0, 0.0);
        let p = fixed_point_oracle(&i, &i).expect("(i, i) fixes 1");
        let q = p.to_quat();
        assert!((i * q * i.conjugate() - q).norm() <= 1e-9);
        assert!(fixed_point_oracle(&i, &Quat::identity()).is_none());
    }

    #[test]
    fn icosahedral_group_has_no_fixed_points() {
        let g = FamilySpec::BinI { side: Side::Left }.build().unwrap();
        let mut checked = 0;
        for e in g.elements() {
            if e.acts_trivially() {
                continue;
            }
            let (l, r) = pair_from_exact(e);
            assert!(fixed_point_oracle(&l, &r).is_none());
            checked += 1;
        }
        assert_eq!(checked, 238);
    }
}
