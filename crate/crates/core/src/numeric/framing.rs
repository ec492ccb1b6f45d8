//! Left- and right-invariant framings of S3 and how they are exchanged.

use super::adjoint::adjoint_matrix;
use super::report::CheckOutcome;
use super::Quat;

fn basis() -> [Quat; 3] {
    [Quat::new(0.0, 1.0, 0.0, 0.0), Quat::new(0.0, 0.0, 1.0, 0.0), Quat::new(0.0, 0.0, 0.0, 1.0)]
}

/// Largest defect in e g = g (conj(g) e g) for e = i, j, k, and in writing
/// the right frame (e g) in the left frame (g e) through Ad(conj g).
pub fn framing_transition_residual(g: &Quat) -> f64 {
    let gb = g.conjugate();
    let m = adjoint_matrix(&gb);
    let e = basis();
    let mut worst = 0.0f64;
    for (a, ea) in e.iter().enumerate() {
        let right = ea * g;
        worst = worst.max((right - g * (gb * ea * g)).norm());
        let mut via_left = Quat::new(0.0, 0.0, 0.0, 0.0);
        for (b, eb) in e.iter().enumerate() {
            via_left += (g * eb) * m[(b, a)];
        }
        worst = worst.max((right - via_left).norm());
    }
    worst
}

/// Largest defect in conj(h conj(e)) = e conj(h) for e = i, j, k: the
/// differential of q -> conj(q) carries the left frame at h to the right
/// frame at conj(h).
pub fn conjugation_pullback_residual(h: &Quat) -> f64 {
    basis()
        .iter()
        .map(|e| ((h * e.conjugate()).conjugate() - e * h.conjugate()).norm())
        .fold(0.0, f64::max)
}

pub fn framing_transition_check(gs: &[Quat], tol: f64) -> CheckOutcome {
    CheckOutcome::from_residuals(gs.iter().map(framing_transition_residual), tol)
}

pub fn conjugation_pullback_check(gs: &[Quat], tol: f64) -> CheckOutcome {
    CheckOutcome::from_residuals(gs.iter().map(conjugation_pullback_residual), tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::sampling::random_unit_quaternions;

    #[test]
    fn examples() {
        assert_eq!(framing_transition_residual(&Quat::identity()), 0.0);
        assert!(framing_transition_residual(&Quat::new(0.0, 0.0, 1.0, 0.0)) <= 1e-12);
        assert_eq!(conjugation_pullback_residual(&Quat::identity()), 0.0);
        assert!(conjugation_pullback_residual(&Quat::new(0.0, 0.0, 0.0, 1.0)) <= 1e-12);
    }

    #[test]
    fn random_samples() {
        let gs = random_unit_quaternions(500, 42, 4);
        assert!(framing_transition_check(&gs[..200], 1e-10).passed);
        assert!(conjugation_pullback_check(&gs, 1e-10).passed);
    }
}
