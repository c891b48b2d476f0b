use crate::error::{check_dim, invalid, Result};
use crate::linalg::{Preconditioner, Vector};

#[inline]
pub(crate) fn shrink(x: f64, phi: f64) -> f64 {
    if x > phi {
        x - phi
    } else if x < -phi {
        x + phi
    } else {
        0.0
    }
}

/// Proximal operator of `φ‖·‖₁`: shrinks every coordinate toward zero by
/// `phi` and zeroes the band `[−phi, phi]`.
pub fn soft_threshold(x: &Vector, phi: f64) -> Result<Vector> {
    if !(phi >= 0.0) || !phi.is_finite() {
        return invalid(format!("threshold must be finite and >= 0, got {phi}"));
    }
    Ok(Vector::from_raw(
        x.iter().map(|&c| shrink(c, phi)).collect(),
    ))
}

/// Resolvent `(I + λM⁻¹∂(ρ‖·‖₁))⁻¹` for diagonal `M`.
///
/// Coordinate `i` solves `min_y ρ|y| + (Mᵢᵢ/2λ)(y − xᵢ)²`, which is a soft
/// threshold at `λρ/Mᵢᵢ`.
pub fn weighted_resolvent_l1(
    x: &Vector,
    lambda: f64,
    rho: f64,
    m: &Preconditioner,
) -> Result<Vector> {
    check_resolvent_args(lambda, rho)?;
    check_dim(m.dim(), x.dim())?;
    let mut out = x.as_slice().to_vec();
    resolvent_in_place(&mut out, lambda, rho, m);
    Ok(Vector::from_raw(out))
}

pub(crate) fn check_resolvent_args(lambda: f64, rho: f64) -> Result<()> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return invalid(format!("lambda must be finite and > 0, got {lambda}"));
    }
    if !(rho >= 0.0) || !rho.is_finite() {
        return invalid(format!("rho must be finite and >= 0, got {rho}"));
    }
    Ok(())
}

pub(crate) fn resolvent_in_place(x: &mut [f64], lambda: f64, rho: f64, m: &Preconditioner) {
    if rho == 0.0 {
        return;
    }
    let lr = lambda * rho;
    for (c, mi) in x.iter_mut().zip(m.diag()) {
        *c = shrink(*c, lr / mi);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    #[test]
    fn soft_threshold_examples() {
        assert_eq!(
            soft_threshold(&v(&[0.0, 0.0, 0.0]), 1.0)
                .unwrap()
                .as_slice(),
            &[0.0; 3]
        );
        assert_eq!(soft_threshold(&v(&[0.5]), 1.0).unwrap().as_slice(), &[0.0]);
        assert_eq!(
            soft_threshold(&v(&[2.0, 0.5, -3.0]), 1.0)
                .unwrap()
                .as_slice(),
            &[1.0, 0.0, -2.0]
        );
        assert!(soft_threshold(&v(&[1.0]), -0.1).is_err());
    }

    #[test]
    fn resolvent_examples() {
        let x = v(&[3.0, -0.2, 7.5]);
        let id = Preconditioner::identity(3);
        assert_eq!(weighted_resolvent_l1(&x, 0.7, 0.0, &id).unwrap(), x);

        let m2 = Preconditioner::diagonal(vec![2.0]).unwrap();
        assert_eq!(
            weighted_resolvent_l1(&v(&[1.0]), 1.0, 1.0, &m2)
                .unwrap()
                .as_slice(),
            &[0.5]
        );

        let r = weighted_resolvent_l1(&v(&[2.0, -2.0]), 0.5, 1.0, &Preconditioner::identity(2));
        assert_eq!(r.unwrap().as_slice(), &[1.5, -1.5]);
    }

    #[test]
    fn resolvent_rejects_bad_arguments() {
        let x = v(&[1.0]);
        let id = Preconditioner::identity(1);
        assert!(weighted_resolvent_l1(&x, 0.0, 1.0, &id).is_err());
        assert!(weighted_resolvent_l1(&x, -1.0, 1.0, &id).is_err());
        assert!(weighted_resolvent_l1(&x, 1.0, -1.0, &id).is_err());
        assert!(weighted_resolvent_l1(&x, 1.0, 1.0, &Preconditioner::identity(2)).is_err());
    }

    #[test]
    fn band_emits_positive_zero() {
        let r = soft_threshold(&v(&[-0.0, -0.5]), 1.0).unwrap();
        assert!(r.iter().all(|c| c.to_bits() == 0));
    }
}
