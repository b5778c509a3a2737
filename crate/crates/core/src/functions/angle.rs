//! Angle functions of the first and second kind, and their continuation to
//! the radial argument used by the joining relations.

use super::{half_power, EvalPair};
use crate::coefficients::{compute_dr_neg, CoefficientSet, Truncation};
use crate::error::{Error, Result};
use crate::numerics::legendre::{self, Branch, Family};
use crate::numerics::BigReal;
use crate::params::SpheroidalKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AngleMethod {
    /// Sum of `d_r P^m_{m+r}`.
    Legendre,
    /// Power series in `1 - eta^2` with the `c_2k`.
    Power,
}

/// Sign that removes the common phase of the imaginary-axis reductions.
fn axis_sign(branch: Branch, r: i64, p: i64) -> i64 {
    if branch == Branch::Imaginary && ((r - p) / 2).rem_euclid(2) == 1 {
        -1
    } else {
        1
    }
}

fn add_signed(acc: &mut BigReal, sign: i64, v: BigReal) {
    if sign < 0 {
        *acc -= v;
    } else {
        *acc += v;
    }
}

/// `sum d_r P^m_{m+r}(x)` on the given branch, imaginary-axis phase removed.
pub(crate) fn s1_sum(coeffs: &CoefficientSet, branch: Branch, x: &BigReal) -> Result<EvalPair> {
    let p = &coeffs.params;
    let wp = p.wp();
    let m = p.m as i64;
    let dr = &coeffs.dr;
    let fam = legendre::p_family(branch, p.m, m + dr.r_max(), x, wp)?;
    Ok(sum_with(&fam, dr.iter().map(|(r, d)| (r, m + r, d)), branch, dr.p(), wp))
}

fn sum_with<'a>(
    fam: &Family,
    terms: impl Iterator<Item = (i64, i64, &'a BigReal)>,
    branch: Branch,
    p: i64,
    wp: u32,
) -> EvalPair {
    let mut v = BigReal::zero(wp);
    let mut d = BigReal::zero(wp);
    for (r, nu, c) in terms {
        let s = axis_sign(branch, r, p);
        add_signed(&mut v, s, c * fam.value(nu));
        add_signed(&mut d, s, c * fam.deriv(nu));
    }
    EvalPair { value: v, derivative: d }
}

/// `sum d_r Q^m_{m+r}(x)` over `r >= b` plus the tail
/// `sum d_{r|eps} P^m_{-r-m-1}(x)`, imaginary-axis phase removed.
pub(crate) fn s2_sum(coeffs: &CoefficientSet, branch: Branch, x: &BigReal) -> Result<EvalPair> {
    let p = &coeffs.params;
    let wp = p.wp();
    let m = p.m as i64;
    let dr = &coeffs.dr;
    let neg = &coeffs.dr_neg;
    let par = dr.p();
    let q = legendre::q_family(branch, p.m, m + dr.r_max(), x, wp)?;
    let mut out = sum_with(&q, neg.iter_plain().chain(dr.iter()).map(|(r, d)| (r, m + r, d)), branch, par, wp);
    if neg.eps.is_empty() {
        return Ok(out);
    }
    let mut longer = None;
    // off the cut P grows with degree, so the stored tail may stop early
    for _ in 0..16 {
        let tail_set = longer.as_ref().unwrap_or(neg);
        let r_low = tail_set.iter_eps().last().expect("non-empty").0;
        let pf = legendre::p_family(branch, p.m, -r_low - m - 1, x, wp)?;
        let terms: Vec<BigReal> = tail_set.iter_eps().map(|(r, d)| d * pf.value(-r - m - 1)).collect();
        let big = terms.iter().fold(BigReal::zero(wp), |a, t| BigReal::max_abs(&a, t).abs());
        let last = terms.last().expect("non-empty").abs();
        let settled = branch == Branch::Cut || last.is_zero() || last < big.mul_pow2(-(wp as i32));
        if settled {
            let tail = sum_with(&pf, tail_set.iter_eps().map(|(r, d)| (r, -r - m - 1, d)), branch, par, wp);
            out.value += tail.value;
            out.derivative += tail.derivative;
            return Ok(out);
        }
        let want = Truncation { count: Some(2 * tail_set.eps.len()), floor: neg.truncation.floor.clone() };
        let lambda = &coeffs.lambda.lambda;
        longer = Some(compute_dr_neg(p, lambda, dr, &want)?);
    }
    Err(Error::NonConvergence("d_{r|eps} tail did not settle at this argument".into()))
}

fn check_eta(eta: &BigReal, closed: bool) -> Result<()> {
    let ok = if closed { eta.abs() <= 1i64 } else { eta.abs() < 1i64 };
    if ok && eta.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("eta = {} outside the angle domain", eta.to_sci(12))))
    }
}

/// `S1(c, eta)` and `dS1/deta` for `-1 <= eta <= 1`.
pub fn angle_s1(coeffs: &CoefficientSet, eta: &BigReal, method: AngleMethod) -> Result<EvalPair> {
    check_eta(eta, true)?;
    let p = &coeffs.params;
    let wp = p.wp();
    let eta = eta.with_prec(wp);
    let out = match method {
        AngleMethod::Legendre if eta.abs() == 1i64 => {
            let m = p.m as i64;
            let dr = &coeffs.dr;
            let fam = legendre::p_reduced_family(Branch::Cut, p.m, m + dr.r_max(), &eta, wp)?;
            let g = sum_with(&fam, dr.iter().map(|(r, d)| (r, m + r, d)), Branch::Cut, dr.p(), wp);
            let w = 1 - eta.square();
            let (h, dh) = half_power(&w, p.m);
            let dv = if dh.is_zero() { BigReal::zero(wp) } else { dh * (&eta * -2) * &g.value };
            EvalPair { value: &h * &g.value, derivative: dv + h * g.derivative }
        }
        AngleMethod::Legendre => s1_sum(coeffs, Branch::Cut, &eta)?,
        AngleMethod::Power => {
            let w = 1 - eta.square();
            let (h, dh) = power_series(&coeffs.c2k.entries, &w, 1);
            let (pm, dpm) = half_power(&w, p.m);
            // S = (-1)^m w^{m/2} H(w) eta^p
            let odd = coeffs.dr.p() == 1;
            let ep = if odd { eta.clone() } else { BigReal::one(wp) };
            let dw = &eta * -2;
            let mut dv = &pm * &dh * &dw * &ep;
            if !dpm.is_zero() {
                dv += &dpm * &dw * &h * &ep;
            }
            if odd {
                dv += &pm * &h;
            }
            let v = pm * h * ep;
            if p.m % 2 == 1 {
                EvalPair { value: -v, derivative: -dv }
            } else {
                EvalPair { value: v, derivative: dv }
            }
        }
    };
    Ok(out.rounded(p.prec))
}

/// `sum_k s^k c_k w^k` and its derivative in `w`.
pub(crate) fn power_series(c: &[BigReal], w: &BigReal, sign: i64) -> (BigReal, BigReal) {
    let prec = w.prec();
    let mut v = BigReal::zero(prec);
    let mut d = BigReal::zero(prec);
    // Horner in w
    for (k, ck) in c.iter().enumerate().rev() {
        let term = if sign < 0 && k % 2 == 1 { -ck.clone() } else { ck.clone() };
        if k > 0 {
            d = d * w + &term * k as i64;
        }
        v = v * w + term;
    }
    (v, d)
}

/// `S2(c, eta)` and `dS2/deta` for `-1 < eta < 1`.
pub fn angle_s2(coeffs: &CoefficientSet, eta: &BigReal) -> Result<EvalPair> {
    check_eta(eta, false)?;
    let p = &coeffs.params;
    let eta = eta.with_prec(p.wp());
    Ok(s2_sum(coeffs, Branch::Cut, &eta)?.rounded(p.prec))
}

fn continued_branch(coeffs: &CoefficientSet, z: &BigReal) -> Result<Branch> {
    match coeffs.params.kind {
        SpheroidalKind::Prolate if *z > 1i64 => Ok(Branch::Outer),
        SpheroidalKind::Oblate if !z.is_sign_negative() || z.is_zero() => Ok(Branch::Imaginary),
        _ => Err(Error::Domain(format!("z = {} outside the radial domain", z.to_sci(12)))),
    }
}

/// The first-kind angle function continued to a radial argument.
///
/// Prolate: `S1(c, z)` for `z > 1` with the outer Legendre branch. Oblate:
/// `S1(-ic, i z) / i^(m+p)`, which is real.
pub fn angle_s1_continued(coeffs: &CoefficientSet, z: &BigReal) -> Result<EvalPair> {
    let branch = continued_branch(coeffs, z)?;
    let p = &coeffs.params;
    Ok(s1_sum(coeffs, branch, &z.with_prec(p.wp()))?.rounded(p.prec))
}

/// The second-kind angle function continued to a radial argument.
///
/// Prolate: `S2(c, z)` for `z > 1`. Oblate: `S2(-ic, i z) i^(m+p+1)`, which
/// is real.
pub fn angle_s2_continued(coeffs: &CoefficientSet, z: &BigReal) -> Result<EvalPair> {
    let branch = continued_branch(coeffs, z)?;
    let p = &coeffs.params;
    Ok(s2_sum(coeffs, branch, &z.with_prec(p.wp()))?.rounded(p.prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{compute_all, Floors};
    use crate::params::Params;

    fn set(kind: SpheroidalKind, c: &str, m: u32, n: u32) -> CoefficientSet {
        compute_all(&Params::parse(kind, c, m, n, 120).unwrap(), &Floors::default()).unwrap()
    }

    fn close(a: &BigReal, b: &BigReal, tol: f64) -> bool {
        (a - b).abs().to_f64() <= tol * (1.0 + b.abs().to_f64())
    }

    #[test]
    fn legendre_and_power_agree() {
        for kind in [SpheroidalKind::Prolate, SpheroidalKind::Oblate] {
            for (m, n) in [(0, 0), (1, 2), (2, 5)] {
                let s = set(kind, "3", m, n);
                for e in [-0.9, -0.2, 0.0, 0.4, 1.0] {
                    let eta = BigReal::from_f64(e, 120);
                    let a = angle_s1(&s, &eta, AngleMethod::Legendre).unwrap();
                    let b = angle_s1(&s, &eta, AngleMethod::Power).unwrap();
                    assert!(close(&a.value, &b.value, 1e-30), "{kind:?} m={m} n={n} eta={e}");
                    if e.abs() < 1.0 || m != 1 {
                        assert!(close(&a.derivative, &b.derivative, 1e-28), "{kind:?} m={m} n={n} eta={e}");
                    }
                }
            }
        }
    }

    #[test]
    fn parity_in_eta() {
        for (m, n) in [(1u32, 3u32), (2, 2)] {
            let s = set(SpheroidalKind::Oblate, "4", m, n);
            let sign = if (n - m) % 2 == 0 { 1.0 } else { -1.0 };
            let a = angle_s1(&s, &BigReal::from_f64(0.3, 120), AngleMethod::Legendre).unwrap();
            let b = angle_s1(&s, &BigReal::from_f64(-0.3, 120), AngleMethod::Legendre).unwrap();
            assert!(close(&a.value, &(b.value * sign), 1e-30));
        }
    }

    #[test]
    fn second_kind_excludes_endpoints() {
        let s = set(SpheroidalKind::Prolate, "1", 0, 0);
        assert!(angle_s2(&s, &BigReal::one(120)).is_err());
        assert!(angle_s2(&s, &BigReal::from_f64(0.5, 120)).is_ok());
        assert!(angle_s1(&s, &BigReal::from_f64(1.5, 120), AngleMethod::Legendre).is_err());
        assert!(angle_s1_continued(&s, &BigReal::from_f64(0.5, 120)).is_err());
    }
}
