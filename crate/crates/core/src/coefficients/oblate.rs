//! Oblate-only coefficients: `alpha_r`, `Q*` and the `B_2r` of the
//! small-`xi` expansion of the second-kind radial function.

use super::{C2kSet, Truncation};
use crate::error::{Error, Result};
use crate::numerics::{factorial, BigReal};
use crate::params::{Params, Parity};
use rug::Integer;

/// `alpha_r = r! A_r` for `r = 0 ..= r_max`, where `sum A_r t^r` is the
/// reciprocal of `(sum c_2k t^k)^2`.
pub fn compute_alpha(c2k: &C2kSet, r_max: usize) -> Result<Vec<BigReal>> {
    let c = &c2k.entries;
    let prec = c.first().map_or(64, |v| v.prec());
    let get = |k: usize| c.get(k).cloned().unwrap_or_else(|| BigReal::zero(prec));
    let b: Vec<BigReal> = (0..=r_max)
        .map(|n| {
            let mut s = BigReal::zero(prec);
            for k in 0..=n {
                s += get(k) * get(n - k);
            }
            s
        })
        .collect();
    if b[0].is_zero() {
        return Err(Error::DivisionByZero("c_0 vanishes".into()));
    }
    let inv = b[0].recip();
    let mut a: Vec<BigReal> = vec![inv.clone()];
    for n in 1..=r_max {
        let mut s = BigReal::zero(prec);
        for (k, ak) in a.iter().enumerate() {
            s += ak * &b[n - k];
        }
        a.push(-(s * &inv));
    }
    Ok(a.into_iter().enumerate().map(|(r, v)| v * factorial(r as u32, prec)).collect())
}

/// `Q*` from `alpha_r`, the real joining factor `k1` and `c`.
pub fn compute_q_star(params: &Params, alpha: &[BigReal], k1_real: &BigReal) -> Result<BigReal> {
    let wp = params.wp();
    let m = params.m as i64;
    if alpha.len() < m as usize + 1 {
        return Err(Error::InsufficientCoefficients("alpha_r for Q*".into()));
    }
    let odd = params.parity() == Parity::Odd;
    let mut s = BigReal::zero(wp);
    for r in 0..=m {
        let top = if odd { 2 * m - 2 * r + 1 } else { 2 * m - 2 * r };
        let den = factorial(r as u32, wp) * (BigReal::pow2((m - r) as i32, wp) * factorial((m - r) as u32, wp)).square();
        s += &alpha[r as usize] * factorial(top as u32, wp) / den;
    }
    let q = k1_real.square() / &params.c * s;
    Ok(if odd { -q } else { q })
}

#[derive(Clone, Debug, PartialEq)]
pub struct B2rSet {
    /// `entries[r]` is `B_2r`.
    pub entries: Vec<BigReal>,
    /// Last index reached by forward recurrence; later entries come from
    /// the tridiagonal solve.
    pub growth_crossover: usize,
    /// Residual of the one recurrence row not used by the solve, relative
    /// to the size of its terms. Small values confirm `Q*`.
    pub check_residual: f64,
    pub truncation: Truncation,
}

/// Coefficients of row `r`:
/// `a B_{2r+2} + b B_{2r} + c^2 B_{2r-2} = h_2r`.
struct Rows<'a> {
    m: i64,
    odd: bool,
    lambda: BigReal,
    c2: BigReal,
    c2k: &'a [BigReal],
    /// `-2 Q* / k1`
    hscale: BigReal,
}

fn binom(n: i64, k: i64, prec: u32) -> BigReal {
    if k < 0 || n < k {
        return BigReal::zero(prec);
    }
    BigReal::from_integer(&Integer::from(n as u32).binomial(k as u32), prec)
}

impl<'a> Rows<'a> {
    fn new(params: &Params, lambda: &BigReal, c2k: &'a C2kSet, k1_real: &BigReal, q_star: &BigReal) -> Self {
        Rows {
            m: params.m as i64,
            odd: params.parity() == Parity::Odd,
            lambda: lambda.with_prec(params.wp()),
            c2: params.c.square(),
            c2k: &c2k.entries,
            hscale: -(q_star * 2) / k1_real,
        }
    }

    fn a(&self, r: i64) -> i64 {
        if self.odd {
            (2 * r + 1) * (2 * r + 2)
        } else {
            (2 * r + 2) * (2 * r + 3)
        }
    }

    fn b(&self, r: i64) -> BigReal {
        let m = self.m;
        let base = if self.odd {
            2 * r * (2 * r - 2 * m + 1)
        } else {
            (2 * r + 1) * (2 * r - 2 * m + 2)
        };
        -self.lambda.clone() + (base + m * (m - 1))
    }

    /// `sum_{k >= k0} c_2k (m + 2k + shift) C(m + k + shift - 1, r)`.
    fn partial(&self, r: i64, shift: i64) -> BigReal {
        let prec = self.lambda.prec();
        let m = self.m;
        let k0 = (r - m + 1 - shift).max(0);
        let mut s = BigReal::zero(prec);
        if k0 as usize >= self.c2k.len() {
            return s;
        }
        let mut bin = binom(m + k0 + shift - 1, r, prec);
        for k in k0..self.c2k.len() as i64 {
            s += &self.c2k[k as usize] * &bin * (m + 2 * k + shift);
            // C(n+1, r) / C(n, r) = (n+1)/(n+1-r)
            let nn = m + k + shift;
            bin = bin * nn / (nn - r);
        }
        s
    }

    fn h(&self, r: i64) -> BigReal {
        let s = if self.odd { self.partial(r, 1) - self.partial(r, 0) } else { self.partial(r, 0) };
        &self.hscale * s
    }

    fn residual(&self, b: &[BigReal], r: usize) -> f64 {
        let prec = self.lambda.prec();
        let zero = BigReal::zero(prec);
        let bm = if r == 0 { &zero } else { &b[r - 1] };
        let bp = b.get(r + 1).unwrap_or(&zero);
        let ri = r as i64;
        let t = [bp * self.a(ri), &b[r] * self.b(ri), bm * &self.c2, -self.h(ri)];
        let scale = t.iter().fold(BigReal::zero(prec), |acc, x| acc + x.abs());
        let res: BigReal = t.iter().fold(BigReal::zero(prec), |acc, x| acc + x);
        if scale.is_zero() {
            0.0
        } else {
            (res / scale).abs().to_f64()
        }
    }
}

/// `B_2r` for `r = 0, 1, ...`.
///
/// `B_0` is fixed by the Wronskian at `xi = 0`. Entries grow at first and
/// are taken from forward recurrence while they do; the decaying remainder
/// is the solution of a tridiagonal system with `B_2R = 0`, with `R`
/// increased until the kept entries settle. `all_tridiagonal` skips the
/// forward phase.
pub fn compute_b2r(
    params: &Params,
    lambda: &BigReal,
    c2k: &C2kSet,
    k1_real: &BigReal,
    q_star: &BigReal,
    trunc: &Truncation,
    all_tridiagonal: bool,
) -> Result<B2rSet> {
    let wp = params.wp();
    let m = params.m as i64;
    let odd = params.parity() == Parity::Odd;
    let c = &params.c;
    if c.is_zero() {
        return Err(Error::domain("B_2r needs c > 0"));
    }
    let rows = Rows::new(params, lambda, c2k, k1_real, q_star);

    let s0 = c2k.entries.iter().fold(BigReal::zero(wp), |acc, v| acc + v) / k1_real;
    let b0 = if odd { -(c * &s0).recip() } else { (c * &s0).recip() - q_star * &s0 };

    // forward while growing
    let mut fwd = vec![b0];
    if !all_tridiagonal {
        loop {
            let r = fwd.len() - 1;
            let ri = r as i64;
            let prev = if r == 0 { BigReal::zero(wp) } else { fwd[r - 1].clone() };
            let next = (rows.h(ri) - &fwd[r] * rows.b(ri) - prev * &rows.c2) / rows.a(ri);
            if next.cmp_abs(&fwd[r]).is_gt() && r < 100_000 {
                fwd.push(next);
            } else {
                break;
            }
        }
    }
    let s = fwd.len() - 1;

    let c_f = c.to_f64().ceil() as usize;
    let mut extra = 40usize.max(c_f) + trunc.count.unwrap_or(0) + m as usize;
    let tol = BigReal::pow2(-(params.prec as i32), 64);
    let floor_tol = trunc.min_floor(params.prec).mul_pow2(-(wp as i32));
    let mut prev: Option<Vec<BigReal>> = None;
    for _ in 0..16 {
        let big_r = s + extra;
        let full = olver(&rows, &fwd, big_r)?;
        if let Some(p) = &prev {
            let settled = full.iter().zip(p).all(|(x, y)| {
                let d = (x - y).abs();
                d <= x.abs() * &tol || d <= floor_tol
            });
            if settled {
                if let Some(keep) = trunc.keep(&full, s + 1, params.prec) {
                    if keep + 2 <= full.len() {
                        let check_row = if all_tridiagonal { 0 } else { s };
                        let check_residual = rows.residual(&full, check_row);
                        let mut entries = full;
                        entries.truncate(keep);
                        return Ok(B2rSet { entries, growth_crossover: s, check_residual, truncation: trunc.clone() });
                    }
                }
            }
        }
        prev = Some(full);
        extra *= 2;
    }
    Err(Error::NonConvergence("B_2r tridiagonal solve did not settle".into()))
}

/// Relative residual of every recurrence row `r` whose neighbours
/// `B_{2r-2}`, `B_{2r+2}` are stored.
#[doc(hidden)]
pub fn b2r_row_residuals(
    params: &Params,
    lambda: &BigReal,
    c2k: &C2kSet,
    k1_real: &BigReal,
    q_star: &BigReal,
    b2r: &B2rSet,
) -> Vec<f64> {
    let rows = Rows::new(params, lambda, c2k, k1_real, q_star);
    (0..b2r.entries.len().saturating_sub(1)).map(|r| rows.residual(&b2r.entries, r)).collect()
}

/// Rows `s+1 .. R-1` as a tridiagonal system for `B_{2s+2} .. B_{2R-2}`
/// given `B_0 .. B_2s`.
fn olver(rows: &Rows, fwd: &[BigReal], big_r: usize) -> Result<Vec<BigReal>> {
    let s = fwd.len() - 1;
    let prec = rows.lambda.prec();
    let n = big_r - 1 - s;
    let mut out = fwd.to_vec();
    if n == 0 {
        return Ok(out);
    }
    let mut diag = Vec::with_capacity(n);
    let mut rhs = Vec::with_capacity(n);
    for j in 0..n {
        let r = (s + 1 + j) as i64;
        let dj = rows.b(r);
        let mut fj = rows.h(r);
        if j == 0 {
            fj -= &fwd[s] * &rows.c2;
        }
        if j > 0 {
            let w = &rows.c2 / &diag[j - 1];
            let upper = rows.a(r - 1);
            let dn = dj - &w * upper;
            fj -= w * &rhs[j - 1];
            diag.push(dn);
        } else {
            diag.push(dj);
        }
        if diag[j].is_zero() {
            return Err(Error::DivisionByZero(format!("B_2r tridiagonal pivot at row {r}")));
        }
        rhs.push(fj);
    }
    let mut x = vec![BigReal::zero(prec); n];
    x[n - 1] = &rhs[n - 1] / &diag[n - 1];
    for j in (0..n - 1).rev() {
        let r = (s + 1 + j) as i64;
        x[j] = (&rhs[j] - &x[j + 1] * rows.a(r)) / &diag[j];
    }
    out.extend(x);
    Ok(out)
}
