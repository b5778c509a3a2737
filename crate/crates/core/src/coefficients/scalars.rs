//! Scalar quantities derived from `d_r`: the angle normalisation `N`, the
//! sum `F`, and the joining factors `k1`, `k2`.

use super::{DrNegSet, DrSet};
use crate::error::{Error, Result};
use crate::numerics::{factorial, BigReal};
use crate::params::{Params, Parity};

/// For oblate parameters `k1` and `k2` hold the real quantities obtained by
/// evaluating the prolate expressions at real `c` with oblate `d_r`; the
/// complex joining factors are `i^(m+p) k1` and `i^(m-1) k2` (even) or
/// `i^(m-2) k2` (odd).
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarSpecials {
    /// Integral of `S1^2` over `[-1, 1]`.
    pub norm: BigReal,
    pub f: BigReal,
    /// `None` when `c = 0`.
    pub k1: Option<BigReal>,
    /// `None` when `c = 0` or the negative-index coefficients are absent.
    pub k2: Option<BigReal>,
    /// Oblate only.
    pub q_star: Option<BigReal>,
}

/// `N` and `F` as sums over `d_r` with `w_r = (2m+r)!/r!`.
pub fn norm_and_f(params: &Params, dr: &DrSet) -> (BigReal, BigReal) {
    let wp = params.wp();
    let m = params.m as i64;
    let p = dr.p();
    let mut w = factorial((2 * m + p) as u32, wp) / factorial(p as u32, wp);
    let mut norm = BigReal::zero(wp);
    let mut f = BigReal::zero(wp);
    for (r, d) in dr.iter() {
        norm += d.square() * &w * 2 / (2 * m + 2 * r + 1);
        f += d * &w;
        w = w * ((2 * m + r + 2) * (2 * m + r + 1)) / ((r + 2) * (r + 1));
    }
    (norm, f)
}

fn fact(k: i64, wp: u32) -> BigReal {
    factorial(k as u32, wp)
}

pub fn k1(params: &Params, dr: &DrSet, f: &BigReal) -> Result<BigReal> {
    let wp = params.wp();
    let (m, n) = (params.m as i64, params.n as i64);
    let c = &params.c;
    match params.parity() {
        Parity::Even => {
            let d0 = dr.get(0).ok_or_else(|| Error::InsufficientCoefficients("d_0".into()))?;
            let num = fact(m + n, wp) * f * (2 * m + 1);
            let den = BigReal::pow2((m + n) as i32, wp)
                * d0
                * c.powi(m as i32)
                * fact(m, wp)
                * fact((n - m) / 2, wp)
                * fact((m + n) / 2, wp);
            if den.is_zero() {
                return Err(Error::DivisionByZero("k1 denominator".into()));
            }
            Ok(num / den)
        }
        Parity::Odd => {
            let d1 = dr.get(1).ok_or_else(|| Error::InsufficientCoefficients("d_1".into()))?;
            let num = fact(m + n + 1, wp) * f * (2 * m + 3);
            let den = BigReal::pow2((m + n) as i32, wp)
                * d1
                * c.powi(m as i32 + 1)
                * fact(m, wp)
                * fact((n - m - 1) / 2, wp)
                * fact((m + n + 1) / 2, wp);
            if den.is_zero() {
                return Err(Error::DivisionByZero("k1 denominator".into()));
            }
            Ok(num / den)
        }
    }
}

pub fn k2(params: &Params, dr: &DrSet, neg: &DrNegSet, f: &BigReal) -> Result<BigReal> {
    let wp = params.wp();
    let (m, n) = (params.m as i64, params.n as i64);
    let c = &params.c;
    let b = neg.bottom();
    let d_b = neg
        .plain_get(b)
        .or_else(|| dr.get(b))
        .ok_or_else(|| Error::InsufficientCoefficients(format!("d_{b}")))?;
    let two = BigReal::pow2((n - m) as i32, wp);
    match params.parity() {
        Parity::Even => {
            let num = two * fact(2 * m, wp) * fact((n - m) / 2, wp) * fact((m + n) / 2, wp) * d_b * f;
            let den = fact(m, wp) * fact(m + n, wp) * c.powi(m as i32 - 1) * (2 * m - 1);
            Ok(num / den)
        }
        Parity::Odd => {
            let num = two * fact(2 * m, wp) * fact((n - m - 1) / 2, wp) * fact((m + n + 1) / 2, wp) * d_b * f;
            let den = fact(m, wp) * fact(m + n + 1, wp) * c.powi(m as i32 - 2) * ((2 * m - 3) * (2 * m - 1));
            Ok(-(num / den))
        }
    }
}
