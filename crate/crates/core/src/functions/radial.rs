//! Radial functions of the first and second kind.
//!
//! Oblate values are the real functions of real `xi` obtained from the
//! prolate expressions under `c -> -ic`, `xi -> i xi`.

use super::angle::{power_series, s2_sum};
use super::{half_power, EvalPair, RadialMethod};
use crate::coefficients::{compute_dr, compute_dr_extended, C2kSet, CoefficientSet, DrSet, Truncation};
use crate::error::{Error, Result};
use crate::numerics::bessel::{spherical_j, spherical_y, BesselFamily};
use crate::numerics::legendre::Branch;
use crate::numerics::{factorial, BigReal};
use crate::params::SpheroidalKind;

fn check_xi(coeffs: &CoefficientSet, xi: &BigReal) -> Result<()> {
    let p = &coeffs.params;
    if !(p.c > 0i64) {
        return Err(Error::domain("radial functions need c > 0"));
    }
    let ok = xi.is_finite()
        && match p.kind {
            SpheroidalKind::Prolate => *xi >= 1i64,
            SpheroidalKind::Oblate => *xi >= 0i64,
        };
    if ok {
        Ok(())
    } else {
        Err(Error::Domain(format!("xi = {} outside the radial domain", xi.to_sci(12))))
    }
}

/// `R` in the chosen method at `xi`.
pub fn radial(coeffs: &CoefficientSet, xi: &BigReal, method: RadialMethod) -> Result<EvalPair> {
    Ok(radial_unrounded(coeffs, xi, method)?.rounded(coeffs.params.prec))
}

/// As [`radial`], at working precision.
pub(crate) fn radial_unrounded(coeffs: &CoefficientSet, xi: &BigReal, method: RadialMethod) -> Result<EvalPair> {
    let p = &coeffs.params;
    if !method.available_for(p.kind) {
        return Err(Error::MethodMismatch(format!("{method} is defined for oblate functions only")));
    }
    check_xi(coeffs, xi)?;
    let xi = xi.with_prec(p.wp());
    let out = match method {
        RadialMethod::R1_1 => bessel_series(coeffs, &xi, true)?,
        RadialMethod::R2_1 => bessel_series(coeffs, &xi, false)?,
        RadialMethod::R1_2 => r1_power(coeffs, &xi)?,
        RadialMethod::R2_2 => r2_legendre(coeffs, &xi)?,
        RadialMethod::R2_31 => r2_power(coeffs, &xi, bessel_series(coeffs, &xi, true)?)?,
        RadialMethod::R2_32 => r2_power(coeffs, &xi, r1_power(coeffs, &xi)?)?,
    };
    Ok(out)
}

/// `F^-1 u^{m/2} sum i^{r+m-n} d_r (2m+r)!/r! f_{m+r}(c xi)` with
/// `u = 1 - 1/xi^2` (prolate) or `1 + 1/xi^2` (oblate), `f = j` or `y`.
fn bessel_series(coeffs: &CoefficientSet, xi: &BigReal, first: bool) -> Result<EvalPair> {
    if xi.is_zero() {
        return Err(Error::MethodMismatch("the Bessel-series methods are undefined at xi = 0".into()));
    }
    // the stored d_r may end before the terms do: j_{m+r} only decays once
    // m + r exceeds c xi, and y_{m+r} terms fall off like xi^-r
    let mut longer: Option<DrSet> = None;
    for _ in 0..=BESSEL_DOUBLINGS {
        let dr = longer.as_ref().unwrap_or(&coeffs.dr);
        if let Some(out) = bessel_sum(coeffs, dr, xi, first)? {
            return Ok(out);
        }
        let want = Truncation { count: Some(2 * dr.entries.len()), floor: dr.truncation.floor.clone() };
        longer = Some(compute_dr(&coeffs.params, &coeffs.lambda.lambda, &want)?);
    }
    Err(Error::NonConvergence(format!("Bessel series has not converged at xi = {}", xi.to_sci(12))))
}

/// How often the Bessel-series methods may double the stored `d_r` before
/// giving up on a slowly converging sum.
const BESSEL_DOUBLINGS: usize = 2;

/// True when the last two terms are below `2^-wp` of the largest.
pub(crate) fn settled(terms: &[BigReal], wp: u32) -> bool {
    let big = terms.iter().fold(BigReal::zero(wp), |a, t| BigReal::max_abs(&a, t).abs());
    if big.is_zero() {
        return true;
    }
    let lim = big.mul_pow2(-(wp as i32));
    terms.iter().rev().take(2).all(|t| t.cmp_abs(&lim).is_lt())
}

/// The Bessel sum with the given `d_r`, or `None` if its tail is not yet
/// negligible.
fn bessel_sum(coeffs: &CoefficientSet, dr: &DrSet, xi: &BigReal, first: bool) -> Result<Option<EvalPair>> {
    let p = &coeffs.params;
    let wp = p.wp();
    let m = p.m as i64;
    let x = &p.c * xi;
    let n_max = (m + dr.r_max()) as usize;
    let fam: BesselFamily = if first { spherical_j(n_max, &x, wp)? } else { spherical_y(n_max, &x, wp)? };
    let r0 = p.r0();
    let par = dr.p();
    let mut w = factorial((2 * m + par) as u32, wp) / factorial(par as u32, wp);
    let mut s = BigReal::zero(wp);
    let mut ds = BigReal::zero(wp);
    let mut terms = Vec::with_capacity(dr.entries.len());
    for (r, d) in dr.iter() {
        let k = (m + r) as usize;
        let mut t = d * &w;
        if ((r - r0) / 2).rem_euclid(2) == 1 {
            t = -t;
        }
        let v = &t * &fam.values[k];
        s += &v;
        terms.push(v);
        ds += t * &fam.derivs[k];
        w = w * ((2 * m + r + 2) * (2 * m + r + 1)) / ((r + 2) * (r + 1));
    }
    if !settled(&terms, wp) {
        return Ok(None);
    }
    ds *= &p.c;
    let inv_x2 = xi.square().recip();
    let (u, du) = match p.kind {
        SpheroidalKind::Prolate => (1 - &inv_x2, &inv_x2 / xi * 2),
        SpheroidalKind::Oblate => (1 + &inv_x2, -(&inv_x2 / xi * 2)),
    };
    let (h, dh) = half_power(&u, p.m);
    let f = &coeffs.scalars.f;
    let mut deriv = &h * ds;
    if !dh.is_zero() {
        deriv += dh * du * &s;
    }
    Ok(Some(EvalPair { value: h * s / f, derivative: deriv / f }))
}

/// Longest `c_2k` set the power-series method will build on demand.
const MAX_SERIES_LEN: usize = 1 << 14;

/// Whether `sum a_k x^k` has a negligible tail at `x`.
fn series_settled(a: &[BigReal], x: &BigReal, wp: u32) -> bool {
    let mut xk = BigReal::one(wp);
    let mut terms = Vec::with_capacity(a.len());
    for ak in a {
        terms.push(ak * &xk);
        xk *= x;
    }
    settled(&terms, wp)
}

fn k1(coeffs: &CoefficientSet) -> Result<&BigReal> {
    coeffs.scalars.k1.as_ref().ok_or_else(|| Error::domain("k1 needs c > 0"))
}

/// `k1^-1 x^{m/2} sum (+-1)^k c_2k x^k` (times `xi` for odd parity) with
/// `x = xi^2 - 1` and alternating signs (prolate) or `x = xi^2 + 1`.
fn r1_power(coeffs: &CoefficientSet, xi: &BigReal) -> Result<EvalPair> {
    let p = &coeffs.params;
    let wp = p.wp();
    let (x, sign) = match p.kind {
        SpheroidalKind::Prolate => (xi.square() - 1, -1),
        SpheroidalKind::Oblate => (xi.square() + 1, 1),
    };
    let dx = xi * 2;
    let mut longer: Option<C2kSet> = None;
    let (hs, dhs) = loop {
        let c2k = longer.as_ref().unwrap_or(&coeffs.c2k);
        if series_settled(&c2k.entries, &x, wp) {
            break power_series(&c2k.entries, &x, sign);
        }
        let unsettled = || Error::NonConvergence(format!("c_2k series did not settle at xi = {}", xi.to_sci(12)));
        if c2k.entries.len() > MAX_SERIES_LEN {
            return Err(unsettled());
        }
        let want = Truncation { count: Some(2 * c2k.entries.len()), floor: c2k.truncation.floor.clone() };
        longer = match compute_dr_extended(p, &coeffs.lambda.lambda, &want) {
            Ok((_, set)) => Some(set),
            Err(Error::InsufficientCoefficients(_)) => return Err(unsettled()),
            Err(e) => return Err(e),
        };
    };
    let (pm, dpm) = half_power(&x, p.m);
    let odd = coeffs.dr.p() == 1;
    let xp = if odd { xi.clone() } else { BigReal::one(wp) };
    let mut dv = &pm * &dhs * &dx * &xp;
    if !dpm.is_zero() {
        dv += &dpm * &dx * &hs * &xp;
    }
    if odd {
        dv += &pm * &hs;
    }
    let k1 = k1(coeffs)?;
    Ok(EvalPair { value: pm * hs * xp / k1, derivative: dv / k1 })
}

/// `k2^-1` times the two-sided Legendre sum.
fn r2_legendre(coeffs: &CoefficientSet, xi: &BigReal) -> Result<EvalPair> {
    let p = &coeffs.params;
    let k2 = coeffs.scalars.k2.as_ref().ok_or_else(|| Error::domain("k2 needs c > 0"))?;
    let (branch, scale) = match p.kind {
        SpheroidalKind::Prolate => {
            if *xi == 1i64 {
                return Err(Error::domain("R2 is singular at xi = 1"));
            }
            (Branch::Outer, k2.recip())
        }
        SpheroidalKind::Oblate => {
            let s = k2.recip();
            (Branch::Imaginary, if p.m % 2 == 1 { -s } else { s })
        }
    };
    let sum = s2_sum(coeffs, branch, xi)?;
    Ok(EvalPair { value: sum.value * &scale, derivative: sum.derivative * scale })
}

/// `Q* R1 (atan xi - pi/2) + g(xi)` with
/// `g = xi^{1-p} (1+xi^2)^{-m/2} sum B_2r xi^{2r}`.
fn r2_power(coeffs: &CoefficientSet, xi: &BigReal, r1: EvalPair) -> Result<EvalPair> {
    let p = &coeffs.params;
    let wp = p.wp();
    let (Some(q), Some(b2r)) = (&coeffs.scalars.q_star, &coeffs.b2r) else {
        return Err(Error::MethodMismatch("power-series R2 needs Q* and B_2r".into()));
    };
    let x2 = xi.square();
    let one_x2 = 1 + &x2;
    if !series_settled(&b2r.entries, &x2, wp) {
        return Err(Error::NonConvergence(format!("B_2r series did not settle at xi = {}", xi.to_sci(12))));
    }
    let (s, ds_dx2) = power_series(&b2r.entries, &x2, 1);
    let ds = ds_dx2 * xi * 2;
    let pre = one_x2.sqrt().powi(-(p.m as i32));
    // d/dxi (1+xi^2)^{-m/2} = -m xi (1+xi^2)^{-m/2-1}
    let dpre = -(&pre * xi * p.m as i64 / &one_x2);
    let odd = coeffs.dr.p() == 1;
    let (g, dg) = if odd {
        (&pre * &s, &dpre * &s + &pre * &ds)
    } else {
        (xi * &pre * &s, &pre * &s + xi * (&dpre * &s + &pre * &ds))
    };
    let angle = xi.atan() - BigReal::pi(wp).mul_pow2(-1);
    let value = q * &r1.value * &angle + g;
    let derivative = q * (&r1.derivative * &angle + &r1.value / &one_x2) + dg;
    Ok(EvalPair { value, derivative })
}
