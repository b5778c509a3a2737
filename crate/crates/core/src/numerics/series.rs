//! Term-ratio updates for hypergeometric-like sums.

use super::bigreal::BigReal;
use crate::error::{Error, Result};

/// Affine factor `slope * k + offset`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Affine {
    pub slope: i64,
    pub offset: i64,
}

impl Affine {
    pub const fn new(slope: i64, offset: i64) -> Self {
        Affine { slope, offset }
    }

    pub const fn constant(v: i64) -> Self {
        Affine { slope: 0, offset: v }
    }

    pub fn at(&self, k: i64) -> i64 {
        self.slope * k + self.offset
    }
}

/// Describes `a_k / a_{k-1}` as a product of affine factors over another.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RatioShape {
    pub num: Vec<Affine>,
    pub den: Vec<Affine>,
}

impl RatioShape {
    pub fn new(num: Vec<Affine>, den: Vec<Affine>) -> Self {
        RatioShape { num, den }
    }

    /// Shape whose ratio is always one.
    pub fn identity() -> Self {
        RatioShape::default()
    }
}

/// Advance `prev = a_{k-1}` to `a_k` with the ratio described by `shape`.
pub fn term_ratio_update(prev: &BigReal, k: i64, shape: &RatioShape) -> Result<BigReal> {
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    let mut out = prev.clone();
    for f in &shape.num {
        let v = f.at(k) as i128;
        match num.checked_mul(v) {
            Some(p) if p.abs() < (1i128 << 62) => num = p,
            _ => {
                out *= num as i64;
                num = v;
            }
        }
    }
    for f in &shape.den {
        let v = f.at(k) as i128;
        if v == 0 {
            return Err(Error::DivisionByZero(format!(
                "ratio denominator vanishes at index {k}"
            )));
        }
        match den.checked_mul(v) {
            Some(p) if p.abs() < (1i128 << 62) => den = p,
            _ => {
                out /= den as i64;
                den = v;
            }
        }
    }
    if num != 1 {
        out *= num as i64;
    }
    if den != 1 {
        out /= den as i64;
    }
    Ok(out)
}
