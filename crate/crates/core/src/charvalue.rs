//! Characteristic values `lambda_mn(c)`.
//!
//! A double-precision symmetric tridiagonal eigensolve provides seeds; the
//! seeds are refined in arbitrary precision by a secant iteration on the
//! continued-fraction function `U(lambda) = U1 + U2`.

use crate::error::{Error, Result};
use crate::numerics::BigReal;
use crate::params::{Params, Parity, SpheroidalKind};

/// Coefficients of the three-term recurrence
/// `alpha_r d_{r+2} + (beta_r - lambda) d_r + gamma_r d_{r-2} = 0`.
///
/// `sc2` is `c^2` for prolate and `-c^2` for oblate.
#[derive(Clone, Debug)]
pub struct RecurrenceAbc {
    pub m: i64,
    pub sc2: BigReal,
}

impl RecurrenceAbc {
    pub fn new(params: &Params) -> Self {
        RecurrenceAbc { m: params.m as i64, sc2: params.sc2() }
    }

    pub fn alpha(&self, r: i64) -> BigReal {
        let m = self.m;
        let num = (2 * m + r + 2) * (2 * m + r + 1);
        let den = (2 * m + 2 * r + 5) * (2 * m + 2 * r + 3);
        &self.sc2 * num / den
    }

    pub fn beta(&self, r: i64) -> BigReal {
        let m = self.m;
        let k = (m + r) * (m + r + 1);
        let num = 2 * k - 2 * m * m - 1;
        let den = (2 * m + 2 * r - 1) * (2 * m + 2 * r + 3);
        &self.sc2 * num / den + k
    }

    pub fn gamma(&self, r: i64) -> BigReal {
        let m = self.m;
        let num = r * (r - 1);
        let den = (2 * m + 2 * r - 3) * (2 * m + 2 * r - 1);
        &self.sc2 * num / den
    }

    /// `beta^m_r = gamma_r alpha_{r-2}`, zero for `r < 2`.
    pub fn cf_beta(&self, r: i64) -> BigReal {
        if r < 2 {
            BigReal::zero(self.sc2.prec())
        } else {
            self.gamma(r) * self.alpha(r - 2)
        }
    }
}

fn alpha_f64(m: f64, r: f64, sc2: f64) -> f64 {
    (2.0 * m + r + 2.0) * (2.0 * m + r + 1.0) / ((2.0 * m + 2.0 * r + 5.0) * (2.0 * m + 2.0 * r + 3.0)) * sc2
}

fn beta_f64(m: f64, r: f64, sc2: f64) -> f64 {
    let k = (m + r) * (m + r + 1.0);
    k + (2.0 * k - 2.0 * m * m - 1.0) / ((2.0 * m + 2.0 * r - 1.0) * (2.0 * m + 2.0 * r + 3.0)) * sc2
}

fn gamma_f64(m: f64, r: f64, sc2: f64) -> f64 {
    r * (r - 1.0) / ((2.0 * m + 2.0 * r - 3.0) * (2.0 * m + 2.0 * r - 1.0)) * sc2
}

/// Diagonal and off-diagonal of the symmetrised truncated matrix.
pub fn seed_matrix(kind: SpheroidalKind, c: f64, m: u32, parity: Parity, size: usize) -> (Vec<f64>, Vec<f64>) {
    let sc2 = c * c * kind.sigma() as f64;
    let m = m as f64;
    let p = parity.p() as f64;
    let diag = (0..size).map(|i| beta_f64(m, p + 2.0 * i as f64, sc2)).collect();
    let off = (0..size.saturating_sub(1))
        .map(|i| {
            let r = p + 2.0 * i as f64;
            (alpha_f64(m, r, sc2) * gamma_f64(m, r + 2.0, sc2)).sqrt()
        })
        .collect();
    (diag, off)
}

fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = diag[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        let qq = if q == 0.0 { f64::EPSILON * (diag[i - 1].abs() + 1.0) } else { q };
        q = diag[i] - x - off[i - 1] * off[i - 1] / qq;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `count` smallest eigenvalues of a symmetric tridiagonal matrix by
/// Sturm-sequence bisection.
pub fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64], count: usize) -> Result<Vec<f64>> {
    let n = diag.len();
    if count > n || n == 0 {
        return Err(Error::Eigen(format!("asked for {count} eigenvalues of a {n}x{n} matrix")));
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = off.get(i).map_or(0.0, |v| v.abs()) + if i > 0 { off[i - 1].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::Eigen("matrix entries are not finite".into()));
    }
    let pad = 1e-12 * (lo.abs().max(hi.abs()) + 1.0);
    lo -= pad;
    hi += pad;
    let mut out = Vec::with_capacity(count);
    for j in 0..count {
        let (mut a, mut b) = (lo, hi);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if sturm_count(diag, off, mid) > j {
                b = mid;
            } else {
                a = mid;
            }
        }
        let v = 0.5 * (a + b);
        if !v.is_finite() {
            return Err(Error::Eigen("bisection produced a non-finite value".into()));
        }
        out.push(v);
    }
    Ok(out)
}

/// The first `count` characteristic-value seeds of the given parity, in
/// ascending order. Entry `j` approximates `lambda_{m, m + p + 2j}`.
pub fn seed_characteristic_values(
    kind: SpheroidalKind,
    c: f64,
    m: u32,
    parity: Parity,
    count: usize,
) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::Eigen("count must be at least 1".into()));
    }
    if !c.is_finite() {
        return Err(Error::Eigen("c is not finite".into()));
    }
    let mut size = count + 32usize.max(c.abs().ceil() as usize);
    let (d, o) = seed_matrix(kind, c, m, parity, size);
    let mut prev = tridiagonal_eigenvalues(&d, &o, count)?;
    for _ in 0..12 {
        size *= 2;
        let (d, o) = seed_matrix(kind, c, m, parity, size);
        let cur = tridiagonal_eigenvalues(&d, &o, count)?;
        let stable = prev
            .iter()
            .zip(&cur)
            .all(|(a, b)| (a - b).abs() <= 1e-12 * a.abs().max(1.0));
        if stable {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::Eigen("truncated eigenvalues did not stabilise".into()))
}

/// Seed for `params` together with the distances to its neighbours of the
/// same parity (the lower one mirrors the upper for the first eigenvalue).
pub fn seed_for(params: &Params) -> Result<(f64, f64, f64)> {
    let j = ((params.n - params.m) / 2) as usize;
    let seeds = seed_characteristic_values(params.kind, params.c.to_f64(), params.m, params.parity(), j + 2)?;
    let up = seeds[j + 1] - seeds[j];
    let down = if j > 0 { seeds[j] - seeds[j - 1] } else { up };
    Ok((seeds[j], down, up))
}

fn tol_bits(params: &Params) -> i32 {
    params.prec as i32 - 16
}

/// Depth-limited backward evaluation of the ascending fraction `U2`.
fn u2_at_depth(abc: &RecurrenceAbc, lambda: &BigReal, r0: i64, depth: i64) -> BigReal {
    let mut t = BigReal::zero(lambda.prec());
    let mut r = depth;
    while r >= r0 + 2 {
        let den = abc.beta(r) - lambda - &t;
        t = abc.cf_beta(r) / den;
        r -= 2;
    }
    -t
}

/// `U(lambda) = U1(lambda) + U2(lambda)`.
pub fn transcendental_u(params: &Params, lambda: &BigReal) -> Result<BigReal> {
    let wp = params.wp();
    let lambda = lambda.with_prec(wp);
    let abc = RecurrenceAbc::new(params);
    let p = params.parity().p();
    let r0 = params.r0();

    let mut v = abc.beta(p) - &lambda;
    let mut r = p + 2;
    while r <= r0 {
        v = abc.beta(r) - &lambda - abc.cf_beta(r) / &v;
        r += 2;
    }
    let u1 = v;

    if params.c.is_zero() {
        return Ok(u1);
    }
    let scale = BigReal::max_abs(&lambda, &BigReal::one(wp)).abs();
    let tol = scale.mul_pow2(-(wp as i32));
    let mut depth = r0 + 2 + 2 * (40i64.max(params.c.to_f64().ceil() as i64));
    let mut prev = u2_at_depth(&abc, &lambda, r0, depth);
    for _ in 0..20 {
        // keep the parity of r0
        depth = r0 + 2 * (depth - r0);
        let cur = u2_at_depth(&abc, &lambda, r0, depth);
        if (&cur - &prev).abs() <= tol {
            return Ok(u1 + cur);
        }
        prev = cur;
    }
    Err(Error::NonConvergence("ascending continued fraction U2".into()))
}

#[derive(Clone, Debug)]
pub struct CharacteristicValue {
    pub lambda: BigReal,
    /// `|U(lambda)|` at acceptance.
    pub residual: BigReal,
    pub seed: f64,
    pub iterations: u32,
}

impl CharacteristicValue {
    /// A value obtained elsewhere, e.g. read back from a cache file. The
    /// residual is unknown and set to NaN.
    pub fn from_lambda(lambda: BigReal) -> Self {
        let seed = lambda.to_f64();
        let residual = BigReal::nan(lambda.prec());
        CharacteristicValue { lambda, residual, seed, iterations: 0 }
    }
}

const MAX_SECANT: u32 = 200;

/// Refine `seed` to the characteristic value of `params`.
pub fn refine_characteristic_value(params: &Params, seed: f64) -> Result<CharacteristicValue> {
    let (_, down, up) = seed_for(params).unwrap_or((seed, 1.0, 1.0));
    refine_within(params, &BigReal::from_f64(seed, params.wp()), seed, down, up)
}

/// Refine starting from an arbitrary-precision value.
pub fn refine_from(params: &Params, start: &BigReal) -> Result<CharacteristicValue> {
    let (_, down, up) = seed_for(params)?;
    refine_within(params, start, start.to_f64(), down, up)
}

/// Seed and refine in one call.
pub fn characteristic_value(params: &Params) -> Result<CharacteristicValue> {
    let (seed, down, up) = seed_for(params)?;
    refine_within(params, &BigReal::from_f64(seed, params.wp()), seed, down, up)
}

fn refine_within(params: &Params, start: &BigReal, seed: f64, down: f64, up: f64) -> Result<CharacteristicValue> {
    let wp = params.wp();
    let x0 = start.with_prec(wp);
    let lo = BigReal::from_f64(seed - 0.5 * down.abs(), wp);
    let hi = BigReal::from_f64(seed + 0.5 * up.abs(), wp);
    let tb = tol_bits(params);

    let u0 = transcendental_u(params, &x0)?;
    if u0.is_zero() {
        return Ok(CharacteristicValue { lambda: x0, residual: u0, seed, iterations: 0 });
    }
    let eps = BigReal::pow2(-20, wp);
    let mut xa = x0;
    let mut ua = u0;
    let mut xb = &xa * (BigReal::one(wp) + &eps) + &eps;
    let mut ub = transcendental_u(params, &xb)?;
    for it in 1..=MAX_SECANT {
        if ub.is_zero() {
            return Ok(CharacteristicValue { lambda: xb, residual: ub, seed, iterations: it });
        }
        let den = &ub - &ua;
        if den.is_zero() {
            break;
        }
        let step = &ub * (&xb - &xa) / den;
        let xc = &xb - &step;
        if xc < lo || xc > hi || !xc.is_finite() {
            return bracket_fallback(params, seed, &lo, &hi);
        }
        let uc = transcendental_u(params, &xc)?;
        let scale = BigReal::max_abs(&xc, &BigReal::one(wp)).abs();
        if step.abs() < scale.mul_pow2(-tb) {
            return Ok(CharacteristicValue { lambda: xc, residual: uc.abs(), seed, iterations: it });
        }
        xa = xb;
        ua = ub;
        xb = xc;
        ub = uc;
    }
    bracket_fallback(params, seed, &lo, &hi)
}

/// Illinois iteration on a sign change of `U` found by widening an interval
/// around the seed, staying inside the half-gaps to the neighbouring seeds.
fn bracket_fallback(params: &Params, seed: f64, lo: &BigReal, hi: &BigReal) -> Result<CharacteristicValue> {
    let wp = params.wp();
    let s = BigReal::from_f64(seed, wp);
    let mut delta = BigReal::from_f64(1e-10 * seed.abs().max(1.0), wp);
    let limit_lo = &s - lo;
    let limit_hi = hi - &s;
    let mut found = None;
    for _ in 0..200 {
        let a = &s - min_ref(&delta, &limit_lo);
        let b = &s + min_ref(&delta, &limit_hi);
        let ua = transcendental_u(params, &a)?;
        let ub = transcendental_u(params, &b)?;
        if ua.signum_i() * ub.signum_i() <= 0 {
            found = Some((a, ua, b, ub));
            break;
        }
        if delta >= limit_lo && delta >= limit_hi {
            break;
        }
        delta *= 4;
    }
    let (mut a, mut ua, mut b, mut ub) =
        found.ok_or_else(|| Error::NonConvergence("no sign change of U near the seed".into()))?;
    let tb = tol_bits(params);
    let mut side = 0;
    for it in 0..(4 * wp) {
        let c = (&a * &ub - &b * &ua) / (&ub - &ua);
        let uc = transcendental_u(params, &c)?;
        let scale = BigReal::max_abs(&c, &BigReal::one(wp)).abs();
        if (&b - &a).abs() < scale.mul_pow2(-tb) || uc.is_zero() {
            return Ok(CharacteristicValue { lambda: c, residual: uc.abs(), seed, iterations: it + MAX_SECANT });
        }
        if uc.signum_i() * ub.signum_i() < 0 {
            a = b;
            ua = ub;
            side = 0;
        } else {
            if side == 1 {
                ua = ua.mul_pow2(-1);
            }
            side = 1;
        }
        b = c;
        ub = uc;
    }
    Err(Error::NonConvergence(format!(
        "characteristic value for m={}, n={} did not converge",
        params.m, params.n
    )))
}

fn min_ref<'a>(a: &'a BigReal, b: &'a BigReal) -> &'a BigReal {
    if a <= b {
        a
    } else {
        b
    }
}
