//! Arbitrary-precision arithmetic and the classical special functions used by
//! the expansions.

pub mod bessel;
pub mod bigreal;
pub mod coords;
pub mod legendre;
pub mod quadrature;
pub mod series;

pub use bigreal::{double_factorial_odd, factorial, working_prec, BigReal, GUARD_BITS};
pub use coords::{spheroidal_to_cartesian, Point3};
pub use series::{term_ratio_update, Affine, RatioShape};

use crate::error::Result;
use crate::functions::EvalPair;
use legendre::Branch;

fn real_branch(x: &BigReal) -> Branch {
    if x.abs() <= 1i64 {
        Branch::Cut
    } else {
        Branch::Outer
    }
}

/// `P^m_n(x)` and its derivative. `|x| < 1` uses the Ferrers branch (with
/// the Condon-Shortley phase), `x > 1` the outer branch.
pub fn legendre_p(m: u32, n: u32, x: &BigReal, prec: u32) -> Result<EvalPair> {
    let branch = real_branch(x);
    if x.abs() == 1i64 {
        let f = legendre::p_reduced_family(branch, m, n as i64, x, prec)?;
        let v = if m == 0 { f.value(n as i64).clone() } else { BigReal::zero(prec) };
        let d = match m {
            0 => f.deriv(n as i64).clone(),
            _ => BigReal::nan(prec),
        };
        return Ok(EvalPair { value: v, derivative: d });
    }
    let f = legendre::p_family(branch, m, n as i64, x, prec)?;
    Ok(EvalPair {
        value: f.value(n as i64).clone(),
        derivative: f.deriv(n as i64).clone(),
    })
}

/// `Q^m_n(x)` and its derivative on either real branch (`x != +-1`).
pub fn legendre_q(m: u32, n: u32, x: &BigReal, prec: u32) -> Result<EvalPair> {
    let f = legendre::q_family(real_branch(x), m, n as i64, x, prec)?;
    Ok(EvalPair {
        value: f.value(n as i64).clone(),
        derivative: f.deriv(n as i64).clone(),
    })
}

/// `j_n(x)` and its derivative.
pub fn sph_bessel_j(n: u32, x: &BigReal, prec: u32) -> Result<EvalPair> {
    let f = bessel::spherical_j(n as usize, x, prec)?;
    Ok(EvalPair {
        value: f.values[n as usize].clone(),
        derivative: f.derivs[n as usize].clone(),
    })
}

/// `y_n(x)` and its derivative.
pub fn sph_neumann_y(n: u32, x: &BigReal, prec: u32) -> Result<EvalPair> {
    let f = bessel::spherical_y(n as usize, x, prec)?;
    Ok(EvalPair {
        value: f.values[n as usize].clone(),
        derivative: f.derivs[n as usize].clone(),
    })
}
