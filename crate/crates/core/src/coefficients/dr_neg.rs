//! `d_r` for negative `r` and the regularised tail `d_{r|eps}`.
//!
//! The plain coefficients live on `b <= r < 0` with `b = -2m` (even) or
//! `b = -2m + 1` (odd). Below `b` the plain coefficients vanish while the
//! second-kind Legendre functions they multiply blow up; their finite
//! products are carried by `d_{r|eps} P^m_{-r-m-1}`.

use super::{DrSet, Truncation};
use crate::charvalue::RecurrenceAbc;
use crate::error::{Error, Result};
use crate::numerics::BigReal;
use crate::params::{Params, Parity};

#[derive(Clone, Debug, PartialEq)]
pub struct DrNegSet {
    pub parity: Parity,
    pub m: u32,
    /// `plain[i]` is `d_{b + 2i}` for `b <= r < 0`.
    pub plain: Vec<BigReal>,
    /// `eps[i]` is `d_{b - 2 - 2i | eps}`.
    pub eps: Vec<BigReal>,
    pub truncation: Truncation,
}

/// How the descending fraction for the plain coefficients is closed at the
/// bottom index `b`.
#[doc(hidden)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    /// `d_{b-2} = 0`.
    Vanishing,
    /// Adds `gamma_b` to the last denominator.
    WithGamma,
}

impl DrNegSet {
    /// Lowest plain index `b`.
    pub fn bottom(&self) -> i64 {
        bottom(self.m, self.parity)
    }

    pub fn plain_get(&self, r: i64) -> Option<&BigReal> {
        let off = r - self.bottom();
        if off < 0 || off % 2 != 0 {
            return None;
        }
        self.plain.get((off / 2) as usize)
    }

    pub fn eps_get(&self, r: i64) -> Option<&BigReal> {
        let off = self.bottom() - 2 - r;
        if off < 0 || off % 2 != 0 {
            return None;
        }
        self.eps.get((off / 2) as usize)
    }

    pub fn iter_plain(&self) -> impl Iterator<Item = (i64, &BigReal)> + '_ {
        let b = self.bottom();
        self.plain.iter().enumerate().map(move |(i, d)| (b + 2 * i as i64, d))
    }

    pub fn iter_eps(&self) -> impl Iterator<Item = (i64, &BigReal)> + '_ {
        let b = self.bottom();
        self.eps.iter().enumerate().map(move |(i, d)| (b - 2 - 2 * i as i64, d))
    }
}

pub(crate) fn bottom(m: u32, parity: Parity) -> i64 {
    match parity {
        Parity::Even => -2 * m as i64,
        Parity::Odd => -2 * m as i64 + 1,
    }
}

pub fn compute_dr_neg(params: &Params, lambda: &BigReal, dr: &DrSet, trunc: &Truncation) -> Result<DrNegSet> {
    compute_dr_neg_with(params, lambda, dr, trunc, Termination::Vanishing)
}

#[doc(hidden)]
pub fn compute_dr_neg_with(
    params: &Params,
    lambda: &BigReal,
    dr: &DrSet,
    trunc: &Truncation,
    termination: Termination,
) -> Result<DrNegSet> {
    let wp = params.wp();
    let lambda = lambda.with_prec(wp);
    let abc = RecurrenceAbc::new(params);
    let parity = params.parity();
    let p = parity.p();
    let m = params.m as i64;
    let b = bottom(params.m, parity);
    let anchor = dr
        .get(p)
        .ok_or_else(|| Error::InsufficientCoefficients("d_0 / d_1 missing".into()))?
        .with_prec(wp);

    // u_r = d_r / d_{r+2}, ascending from the bottom
    let top = p - 2;
    let mut plain = Vec::new();
    if b <= top {
        let mut us = Vec::new();
        let mut u = BigReal::zero(wp);
        for r in (b..=top).step_by(2) {
            let mut den = abc.beta(r) - &lambda;
            if r == b {
                if termination == Termination::WithGamma {
                    den += abc.gamma(r);
                }
            } else {
                den += abc.gamma(r) * &u;
            }
            if den.is_zero() {
                return Err(Error::DivisionByZero(format!("negative-index ratio at r = {r}")));
            }
            u = -abc.alpha(r) / den;
            us.push(u.clone());
        }
        let len = us.len();
        plain = vec![BigReal::zero(wp); len];
        plain[len - 1] = &us[len - 1] * &anchor;
        for i in (0..len - 1).rev() {
            plain[i] = &us[i] * &plain[i + 1];
        }
    }
    let d_b = if plain.is_empty() { anchor.clone() } else { plain[0].clone() };

    // seed of the eps tail
    let sc2 = params.sc2();
    let lead = match parity {
        Parity::Even => &sc2 / ((2 * m - 1) * (2 * m + 1)),
        Parity::Odd => -(&sc2 / ((2 * m - 1) * (2 * m - 3))),
    };
    let c_f = params.c.to_f64().ceil() as i64;
    let mut depth = 2 * 20i64.max(c_f) + trunc.count.map_or(0, |n| 2 * n as i64);
    for _ in 0..24 {
        let deep = b - 2 - depth;
        // v_r = d_{r|eps} / d_{r+2|eps}, from the deep end upward to b - 4
        let len = (depth / 2) as usize;
        let mut vs = vec![BigReal::zero(wp); len];
        let mut v = BigReal::zero(wp);
        let mut r = deep;
        let mut idx = len;
        while r <= b - 4 {
            let den = abc.beta(r) - &lambda + abc.gamma(r) * &v;
            if den.is_zero() {
                return Err(Error::DivisionByZero(format!("eps ratio at r = {r}")));
            }
            v = -abc.alpha(r) / den;
            idx -= 1;
            vs[idx] = v.clone();
            r += 2;
        }
        // vs[i] is v at r = b - 4 - 2i
        let r1 = b - 2;
        let den = abc.beta(r1) - &lambda + abc.gamma(r1) * vs.first().cloned().unwrap_or_else(|| BigReal::zero(wp));
        if den.is_zero() {
            return Err(Error::DivisionByZero("eps seed".into()));
        }
        let mut eps = Vec::with_capacity(len + 1);
        eps.push(&d_b * &lead / den);
        for vi in vs.iter().take(len.saturating_sub(1)) {
            let next = vi * eps.last().unwrap();
            eps.push(next);
        }
        let max = eps.iter().fold(BigReal::zero(wp), |a, x| BigReal::max_abs(&a, x).abs());
        let tail_small = eps.last().unwrap().cmp_abs(&max.mul_pow2(-(wp as i32))).is_lt() || max.is_zero();
        if let Some(keep) = trunc.keep(&eps, 0, params.prec) {
            if tail_small && keep + 2 <= eps.len() {
                eps.truncate(keep);
                return Ok(DrNegSet { parity, m: params.m, plain, eps, truncation: trunc.clone() });
            }
        }
        depth *= 2;
    }
    Err(Error::NonConvergence("d_{r|eps} did not reach the requested truncation".into()))
}
