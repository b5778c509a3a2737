//! Power-series coefficients `c_2k` of the angle function about `eta = 0`
//! after the factor `(1 - eta^2)^{m/2}` (and `eta` for odd parity).

use super::{DrSet, Truncation};
use crate::error::{Error, Result};
use crate::numerics::{double_factorial_odd, BigReal};
use crate::params::{Params, Parity};

#[derive(Clone, Debug, PartialEq)]
pub struct C2kSet {
    pub parity: Parity,
    /// `entries[k]` is `c_2k`.
    pub entries: Vec<BigReal>,
    pub truncation: Truncation,
}

impl C2kSet {
    pub fn get(&self, k: usize) -> Option<&BigReal> {
        self.entries.get(k)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// `c_2k` from `d_r`.
///
/// Each `c_2k` is an inner sum over `d_r`, `r >= 2k + p`, stopped once a
/// term drops below `2^-wp` of the running sum. Needing a `d_r` beyond the
/// end of `dr` gives [`Error::InsufficientCoefficients`].
pub fn compute_c2k(params: &Params, dr: &DrSet, trunc: &Truncation) -> Result<C2kSet> {
    let wp = params.wp();
    let m = params.m as i64;
    let parity = params.parity();
    let p = parity.p();
    let tiny = BigReal::pow2(-(wp as i32), 64);

    let mut v = match parity {
        Parity::Even => double_factorial_odd(params.m, wp),
        Parity::Odd => double_factorial_odd(params.m + 1, wp),
    };
    let mut out = Vec::new();
    let max_k = ((dr.r_max() - p) / 2).max(0) as usize + 1;
    for k in 0..=max_k {
        let k_i = k as i64;
        let start = 2 * k_i + p;
        if dr.get(start).is_none() {
            break;
        }
        let mut rho = BigReal::one(wp);
        let mut sum = BigReal::zero(wp);
        let mut r = start;
        let mut done = false;
        let mut prev_small = false;
        while let Some(d) = dr.get(r) {
            let term = d * &rho;
            sum += &term;
            let small = term.is_zero() || term.cmp_abs(&(sum.abs() * &tiny)).is_lt();
            if small && prev_small {
                done = true;
                break;
            }
            prev_small = small;
            // rho(r+2)/rho(r)
            let (a, b) = match parity {
                Parity::Even => ((2 * m + r + 2) * (2 * m + r + 2 * k_i + 1), (r + 1) * (r - 2 * k_i + 2)),
                Parity::Odd => ((2 * m + r + 1) * (2 * m + r + 2 * k_i + 2), (r + 2) * (r + 1 - 2 * k_i)),
            };
            if b == 0 {
                return Err(Error::DivisionByZero(format!("c_2k inner ratio at k = {k}, r = {r}")));
            }
            rho = rho * a / b;
            r += 2;
        }
        if !done {
            if sum.is_zero() && dr.entries.iter().all(|d| d.is_zero()) {
                done = true;
            }
            if !done {
                return Err(Error::InsufficientCoefficients(format!("c_2k at k = {k} needs d_r beyond r = {}", dr.r_max())));
            }
        }
        out.push(&v * sum);
        if let Some(keep) = trunc.keep(&out, 0, params.prec) {
            out.truncate(keep);
            return Ok(C2kSet { parity, entries: out, truncation: trunc.clone() });
        }
        let (a, b) = match parity {
            Parity::Even => ((2 * m + 4 * k_i + 3) * (2 * m + 4 * k_i + 1), (2 * k_i + 1) * (2 * k_i + 2)),
            Parity::Odd => ((2 * m + 4 * k_i + 5) * (2 * m + 4 * k_i + 3), (2 * k_i + 2) * (2 * k_i + 3)),
        };
        v = -(v * a) / b;
    }
    Err(Error::InsufficientCoefficients(format!("c_2k did not reach its truncation within d_r up to r = {}", dr.r_max())))
}
