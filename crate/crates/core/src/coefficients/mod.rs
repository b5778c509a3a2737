//! Expansion-coefficient families and the scalars derived from them.

mod c2k;
mod dr;
mod dr_neg;
mod oblate;
mod scalars;
mod truncation;

pub use c2k::{compute_c2k, C2kSet};
pub use dr::{compute_dr, DrSet};
pub use dr_neg::{compute_dr_neg, DrNegSet};
#[doc(hidden)]
pub use dr_neg::{compute_dr_neg_with, Termination};
pub use oblate::{compute_alpha, compute_b2r, compute_q_star, B2rSet};
#[doc(hidden)]
pub use oblate::b2r_row_residuals;
pub use scalars::{k1 as compute_k1, k2 as compute_k2, norm_and_f as compute_norm_and_f, ScalarSpecials};
pub use truncation::Truncation;

pub(crate) use dr_neg::bottom as negative_bottom;

use crate::charvalue::{characteristic_value, CharacteristicValue};
use crate::error::{Error, Result};
use crate::numerics::BigReal;
use crate::params::{Params, SpheroidalKind};

/// Truncation policy per coefficient family.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Floors {
    pub dr: Truncation,
    pub dr_neg: Truncation,
    pub c2k: Truncation,
    pub b2r: Truncation,
}

impl Floors {
    pub fn uniform(t: Truncation) -> Self {
        Floors { dr: t.clone(), dr_neg: t.clone(), c2k: t.clone(), b2r: t }
    }
}

/// Everything the function evaluators need for one parameter set.
#[derive(Clone, Debug)]
pub struct CoefficientSet {
    pub params: Params,
    pub lambda: CharacteristicValue,
    pub dr: DrSet,
    pub dr_neg: DrNegSet,
    pub c2k: C2kSet,
    pub scalars: ScalarSpecials,
    /// Oblate with `c > 0` only.
    pub alpha: Option<Vec<BigReal>>,
    /// Oblate with `c > 0` only.
    pub b2r: Option<B2rSet>,
}

/// `d_r` carried far enough that every `c_2k` inner sum converges at
/// working precision, with the `c_2k` built from it.
///
/// The depth depends only on `params` and the `c_2k` truncation, so the
/// scalars computed from it do not change with the `d_r` truncation asked
/// for by the caller.
pub fn compute_dr_extended(params: &Params, lambda: &BigReal, c2k: &Truncation) -> Result<(DrSet, C2kSet)> {
    let wp = params.wp() as i32;
    let default = BigReal::pow2(-(params.prec as i32), 64);
    let requested = c2k.min_floor(params.prec);
    let base = if requested.cmp_abs(&default).is_lt() { requested } else { default };
    let mut extra = wp;
    for _ in 0..4 {
        let ext = compute_dr(params, lambda, &Truncation::floor(base.mul_pow2(-extra)))?;
        match compute_c2k(params, &ext, c2k) {
            Ok(set) => return Ok((ext, set)),
            Err(Error::InsufficientCoefficients(_)) => extra *= 2,
            Err(e) => return Err(e),
        }
    }
    Err(Error::InsufficientCoefficients("c_2k needs more d_r than the depth limit allows".into()))
}

pub fn compute_scalars(params: &Params, dr: &DrSet, dr_neg: &DrNegSet) -> Result<ScalarSpecials> {
    let (norm, f) = scalars::norm_and_f(params, dr);
    let (k1, k2) = if params.c.is_zero() {
        (None, None)
    } else {
        (Some(scalars::k1(params, dr, &f)?), Some(scalars::k2(params, dr, dr_neg, &f)?))
    };
    Ok(ScalarSpecials { norm, f, k1, k2, q_star: None })
}

/// Run the full dependency chain for `params`.
pub fn compute_all(params: &Params, floors: &Floors) -> Result<CoefficientSet> {
    let cv = characteristic_value(params)?;
    compute_all_from(params, cv, floors)
}

/// As [`compute_all`] with a given characteristic value.
pub fn compute_all_from(params: &Params, cv: CharacteristicValue, floors: &Floors) -> Result<CoefficientSet> {
    let lambda = cv.lambda.clone();
    let dr = compute_dr(params, &lambda, &floors.dr)?;
    let (ext_c2k, c2k) = compute_dr_extended(params, &lambda, &floors.c2k)?;
    let ext = if floors.c2k == Truncation::default() {
        ext_c2k
    } else {
        compute_dr_extended(params, &lambda, &Truncation::default())?.0
    };
    let dr_neg = compute_dr_neg(params, &lambda, &ext, &floors.dr_neg)?;
    let mut scalars = compute_scalars(params, &ext, &dr_neg)?;
    let (mut alpha, mut b2r) = (None, None);
    if params.kind == SpheroidalKind::Oblate && !params.c.is_zero() {
        let k1 = scalars.k1.clone().expect("c > 0");
        let a = compute_alpha(&c2k, params.m as usize)?;
        let q = compute_q_star(params, &a, &k1)?;
        b2r = Some(compute_b2r(params, &lambda, &c2k, &k1, &q, &floors.b2r, false)?);
        scalars.q_star = Some(q);
        alpha = Some(a);
    }
    Ok(CoefficientSet { params: params.clone(), lambda: cv, dr, dr_neg, c2k, scalars, alpha, b2r })
}
