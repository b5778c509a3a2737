//! Legendre expansion coefficients `d_r` for `r >= 0`.

use super::Truncation;
use crate::charvalue::RecurrenceAbc;
use crate::error::{Error, Result};
use crate::numerics::BigReal;
use crate::params::{Params, Parity};

/// `d_r` for `r = p, p + 2, ...` where `p` is 0 or 1 by parity.
#[derive(Clone, Debug, PartialEq)]
pub struct DrSet {
    pub parity: Parity,
    /// `entries[i]` is `d_{p + 2i}`.
    pub entries: Vec<BigReal>,
    pub truncation: Truncation,
}

impl DrSet {
    pub fn p(&self) -> i64 {
        self.parity.p()
    }

    pub fn r_max(&self) -> i64 {
        self.p() + 2 * (self.entries.len() as i64 - 1)
    }

    /// `d_r`, or `None` for an index of the wrong parity or out of range.
    pub fn get(&self, r: i64) -> Option<&BigReal> {
        let off = r - self.p();
        if off < 0 || off % 2 != 0 {
            return None;
        }
        self.entries.get((off / 2) as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &BigReal)> + '_ {
        let p = self.p();
        self.entries.iter().enumerate().map(move |(i, d)| (p + 2 * i as i64, d))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Weights `G_r` with `sum d_r G_r = 1` expressing the normalisation that
/// fixes `S1` (even) or `S1'` (odd) at `eta = 0` to the Legendre value.
pub(crate) fn normalization_weights(m: i64, parity: Parity, r0: i64, r_max: i64, prec: u32) -> Vec<BigReal> {
    let p = parity.p();
    let len = ((r_max - p) / 2 + 1) as usize;
    let i0 = ((r0 - p) / 2) as usize;
    let mut g = vec![BigReal::zero(prec); len];
    g[i0] = BigReal::one(prec);
    // G_{r+2} / G_r = -(2m+r+1)/(r+2) even, -(2m+r+2)/(r+1) odd
    let ratio = |r: i64| -> (i64, i64) {
        match parity {
            Parity::Even => (2 * m + r + 1, r + 2),
            Parity::Odd => (2 * m + r + 2, r + 1),
        }
    };
    for i in (i0 + 1)..len {
        let r = p + 2 * (i as i64 - 1);
        let (a, b) = ratio(r);
        g[i] = -(&g[i - 1] * a) / b;
    }
    for i in (0..i0).rev() {
        let r = p + 2 * i as i64;
        let (a, b) = ratio(r);
        g[i] = -(&g[i + 1] * b) / a;
    }
    g
}

/// Compute `d_r` from a refined characteristic value.
///
/// Below `r = n - m` the ratios come from the finite descending fraction,
/// above it from the ascending fraction evaluated backward from an adaptive
/// depth; the scale is then fixed by the normalisation.
pub fn compute_dr(params: &Params, lambda: &BigReal, trunc: &Truncation) -> Result<DrSet> {
    let (full, keep) = compute_dr_full(params, lambda, trunc)?;
    let mut entries = full;
    entries.truncate(keep);
    Ok(DrSet { parity: params.parity(), entries, truncation: trunc.clone() })
}

/// All coefficients up to the adaptive depth, with the number to keep.
pub(crate) fn compute_dr_full(
    params: &Params,
    lambda: &BigReal,
    trunc: &Truncation,
) -> Result<(Vec<BigReal>, usize)> {
    let wp = params.wp();
    let lambda = lambda.with_prec(wp);
    let abc = RecurrenceAbc::new(params);
    let p = params.parity().p();
    let r0 = params.r0();
    let i0 = ((r0 - p) / 2) as usize;

    // head: s_r = d_{r-2}/d_r for p < r <= r0
    let mut head = vec![BigReal::zero(wp); i0 + 1];
    head[i0] = BigReal::one(wp);
    if r0 > p {
        let mut s = BigReal::zero(wp);
        let mut ratios = Vec::with_capacity(i0);
        for r in ((p + 2)..=r0).step_by(2) {
            let den = abc.beta(r - 2) - &lambda + abc.gamma(r - 2) * &s;
            if den.is_zero() {
                return Err(Error::DivisionByZero(format!("descending ratio at r = {r}")));
            }
            s = -abc.alpha(r - 2) / den;
            ratios.push(s.clone());
        }
        for i in (0..i0).rev() {
            head[i] = &head[i + 1] * &ratios[i];
        }
    }

    let c_f = params.c.to_f64().ceil() as i64;
    let mut depth = r0 + 2 * 20i64.max(c_f) + trunc.count.map_or(0, |n| 2 * n as i64);
    for _ in 0..24 {
        let k_len = ((depth - p) / 2 + 1) as usize;
        // tail: t_r = d_r/d_{r-2}, backward from depth
        let mut t = vec![BigReal::zero(wp); k_len + 1];
        let mut next = BigReal::zero(wp);
        for i in ((i0 + 1)..k_len).rev() {
            let r = p + 2 * i as i64;
            let den = abc.beta(r) - &lambda + abc.alpha(r) * &next;
            if den.is_zero() {
                return Err(Error::DivisionByZero(format!("ascending ratio at r = {r}")));
            }
            next = -abc.gamma(r) / den;
            t[i] = next.clone();
        }
        let mut d = head.clone();
        for i in (i0 + 1)..k_len {
            let v = &d[i - 1] * &t[i];
            d.push(v);
        }

        let g = normalization_weights(params.m as i64, params.parity(), r0, depth, wp);
        let mut sum = BigReal::zero(wp);
        let mut big = BigReal::zero(wp);
        for (di, gi) in d.iter().zip(&g) {
            let term = di * gi;
            big = BigReal::max_abs(&big, &term).abs();
            sum += term;
        }
        if sum.is_zero() || sum.cmp_abs(&big.mul_pow2(-(wp as i32) / 2)).is_lt() {
            return Err(Error::DegenerateNormalization(format!(
                "normalisation sum vanishes for m = {}, n = {}",
                params.m, params.n
            )));
        }
        let scale = sum.recip();
        for v in d.iter_mut() {
            *v *= &scale;
        }

        let max = d.iter().fold(BigReal::zero(wp), |acc, v| BigReal::max_abs(&acc, v).abs());
        let last_small = d[k_len - 1].cmp_abs(&max.mul_pow2(-(wp as i32))).is_lt();
        if let Some(keep) = trunc.keep(&d, i0 + 1, params.prec) {
            if last_small && keep + 2 <= k_len {
                return Ok((d, keep));
            }
        }
        depth = r0 + 2 * (depth - r0);
    }
    Err(Error::NonConvergence("d_r did not reach the requested truncation".into()))
}
