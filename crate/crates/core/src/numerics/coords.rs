//! Spheroidal to Cartesian coordinates.

use super::bigreal::BigReal;
use crate::error::{Error, Result};
use crate::params::SpheroidalKind;

#[derive(Clone, Debug, PartialEq)]
pub struct Point3 {
    pub x: BigReal,
    pub y: BigReal,
    pub z: BigReal,
}

/// Cartesian point for spheroidal coordinates `(eta, xi, phi)` with
/// semi-interfocal distance `a`.
///
/// Prolate: `x = a sqrt((1-eta^2)(xi^2-1)) cos phi`, `z = a eta xi`.
/// Oblate uses `xi^2 + 1` under the root.
pub fn spheroidal_to_cartesian(
    kind: SpheroidalKind,
    a: &BigReal,
    eta: &BigReal,
    xi: &BigReal,
    phi: &BigReal,
) -> Result<Point3> {
    if eta.abs() > 1i64 {
        return Err(Error::domain("|eta| must not exceed 1"));
    }
    let xi2 = xi.square();
    let radial = match kind {
        SpheroidalKind::Prolate => {
            if *xi < 1i64 {
                return Err(Error::domain("prolate xi must be at least 1"));
            }
            xi2 - 1
        }
        SpheroidalKind::Oblate => {
            if *xi < 0i64 {
                return Err(Error::domain("oblate xi must be non-negative"));
            }
            xi2 + 1
        }
    };
    let rho = a * ((1 - eta.square()) * radial).sqrt();
    let (s, c) = phi.sin_cos();
    Ok(Point3 {
        x: &rho * &c,
        y: &rho * &s,
        z: a * eta * xi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: f64) -> BigReal {
        BigReal::from_f64(v, 96)
    }

    #[test]
    fn pole_and_focus() {
        let p = spheroidal_to_cartesian(SpheroidalKind::Prolate, &b(1.0), &b(1.0), &b(2.0), &b(0.0)).unwrap();
        assert!(p.x.is_zero() && p.y.is_zero());
        assert_eq!(p.z.to_f64(), 2.0);
        let q = spheroidal_to_cartesian(SpheroidalKind::Prolate, &b(1.0), &b(0.0), &b(1.0), &b(0.7)).unwrap();
        assert!(q.x.is_zero() && q.y.is_zero() && q.z.is_zero());
    }

    #[test]
    fn generic_point() {
        let p = spheroidal_to_cartesian(SpheroidalKind::Prolate, &b(2.0), &b(0.5), &b(1.5), &b(0.0)).unwrap();
        let want = 2.0 * (0.75f64).sqrt() * (1.25f64).sqrt();
        assert!((p.x.to_f64() - want).abs() < 1e-15);
        assert!((p.z.to_f64() - 1.5).abs() < 1e-15);
        assert!(spheroidal_to_cartesian(SpheroidalKind::Prolate, &b(1.0), &b(0.5), &b(0.5), &b(0.0)).is_err());
        assert!(spheroidal_to_cartesian(SpheroidalKind::Oblate, &b(1.0), &b(0.5), &b(0.0), &b(0.0)).is_ok());
    }
}
