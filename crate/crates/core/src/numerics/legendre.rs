//! Associated Legendre functions of integer order and integer degree.
//!
//! Three branches are supported:
//!
//! * [`Branch::Cut`]: Ferrers functions on `-1 < x < 1` with the
//!   Condon-Shortley phase, `P^m_n(x) = (-1)^m (1-x^2)^{m/2} d^m P_n/dx^m`.
//! * [`Branch::Outer`]: `x > 1`, `P^m_n(x) = (x^2-1)^{m/2} d^m P_n/dx^m`.
//! * [`Branch::Imaginary`]: real reductions of the outer functions on the
//!   imaginary axis `z = i xi`, namely `P^m_n(i xi) = i^n p(xi)` and
//!   `Q^m_n(i xi) = i^{-(n+1)} q(xi)`, with `(z^2-1)^{1/2} = i (1+xi^2)^{1/2}`.
//!
//! Degrees of `Q` run from `-m` upward; values below `m` come from the
//! three-term recurrence continued downward, which stays well defined for
//! integer order.

use super::bigreal::{double_factorial_odd, BigReal};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Cut,
    Outer,
    Imaginary,
}

/// Values and derivatives for consecutive degrees starting at `first`.
#[derive(Clone, Debug)]
pub struct Family {
    pub first: i64,
    pub values: Vec<BigReal>,
    pub derivs: Vec<BigReal>,
}

impl Family {
    pub fn last(&self) -> i64 {
        self.first + self.values.len() as i64 - 1
    }

    pub fn value(&self, nu: i64) -> &BigReal {
        &self.values[(nu - self.first) as usize]
    }

    pub fn deriv(&self, nu: i64) -> &BigReal {
        &self.derivs[(nu - self.first) as usize]
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    P,
    Q,
}

/// Sign pattern of `(n-m+1) f_{n+1} = a (2n+1) x f_n + b (n+m) f_{n-1}`.
fn recurrence_signs(branch: Branch, kind: Kind) -> (i64, i64) {
    match (branch, kind) {
        (Branch::Imaginary, Kind::P) => (1, 1),
        (Branch::Imaginary, Kind::Q) => (-1, 1),
        _ => (1, -1),
    }
}

fn step_up(
    branch: Branch,
    kind: Kind,
    m: i64,
    nu: i64,
    x: &BigReal,
    f: &BigReal,
    f_prev: &BigReal,
) -> BigReal {
    let (a, b) = recurrence_signs(branch, kind);
    let t = x * f * (a * (2 * nu + 1)) + f_prev * (b * (nu + m));
    t / (nu - m + 1)
}

fn step_down(
    branch: Branch,
    kind: Kind,
    m: i64,
    nu: i64,
    x: &BigReal,
    f: &BigReal,
    f_next: &BigReal,
) -> BigReal {
    // solve the recurrence at degree nu for f_{nu-1}
    let (a, b) = recurrence_signs(branch, kind);
    let t = f_next * (nu - m + 1) - x * f * (a * (2 * nu + 1));
    t / (b * (nu + m))
}

/// `w(x)` such that `w f' = (n-m+1) f_{n+1} - (n+1) x f_n` (up to sign for Q on
/// the imaginary branch, handled in [`derivative`]).
fn weight(branch: Branch, x: &BigReal) -> BigReal {
    let x2 = x.square();
    match branch {
        Branch::Cut | Branch::Outer => x2 - 1,
        Branch::Imaginary => x2 + 1,
    }
}

fn derivative(
    branch: Branch,
    kind: Kind,
    m: i64,
    nu: i64,
    x: &BigReal,
    w: &BigReal,
    f: &BigReal,
    f_next: &BigReal,
) -> BigReal {
    let t = match (branch, kind) {
        (Branch::Imaginary, Kind::Q) => -(f_next * (nu - m + 1) + x * f * (nu + 1)),
        _ => f_next * (nu - m + 1) - x * f * (nu + 1),
    };
    t / w
}

fn check_arg(branch: Branch, x: &BigReal, allow_endpoint: bool) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::domain("Legendre argument is not finite"));
    }
    let ok = match branch {
        Branch::Cut => {
            let a = x.abs();
            if allow_endpoint {
                a <= 1i64
            } else {
                a < 1i64
            }
        }
        Branch::Outer => {
            if allow_endpoint {
                *x >= 1i64
            } else {
                *x > 1i64
            }
        }
        Branch::Imaginary => *x >= 0i64,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "Legendre argument {} outside the {:?} branch",
            x.to_sci(12),
            branch
        )))
    }
}

/// `P^m_n` and its derivative for `n = m ..= nu_max`.
pub fn p_family(branch: Branch, m: u32, nu_max: i64, x: &BigReal, prec: u32) -> Result<Family> {
    check_arg(branch, x, false)?;
    let mi = m as i64;
    let nu_max = nu_max.max(mi);
    let x = x.with_prec(prec);
    let w = weight(branch, &x);
    let base = double_factorial_odd(m, prec) * w.abs().sqrt().powi(m as i32);
    let first = if branch == Branch::Cut && m % 2 == 1 { -base } else { base };
    let vals = forward(branch, Kind::P, mi, nu_max + 1, &x, first)?;
    Ok(attach_derivs(branch, Kind::P, mi, mi, vals, &x, &w))
}

/// Polynomial part `g` of `P^m_n = w^{m/2} g` together with `g'`, valid on
/// the closed interval including the branch point.
pub fn p_reduced_family(
    branch: Branch,
    m: u32,
    nu_max: i64,
    x: &BigReal,
    prec: u32,
) -> Result<Family> {
    if branch == Branch::Imaginary {
        return Err(Error::domain("reduced family is only defined on the real branches"));
    }
    check_arg(branch, x, true)?;
    let mi = m as i64;
    let nu_max = nu_max.max(mi);
    let x = x.with_prec(prec);
    let seed = |order: u32| {
        let d = double_factorial_odd(order, prec);
        if branch == Branch::Cut && order % 2 == 1 {
            -d
        } else {
            d
        }
    };
    let g = forward(branch, Kind::P, mi, nu_max, &x, seed(m))?;
    let mut h = vec![BigReal::zero(prec)];
    h.extend(forward(branch, Kind::P, mi + 1, nu_max, &x, seed(m + 1))?);
    let derivs = h
        .into_iter()
        .take(g.len())
        .map(|v| if branch == Branch::Cut { -v } else { v })
        .collect();
    Ok(Family { first: mi, values: g, derivs })
}

fn forward(
    branch: Branch,
    kind: Kind,
    m: i64,
    nu_max: i64,
    x: &BigReal,
    first: BigReal,
) -> Result<Vec<BigReal>> {
    let mut out = Vec::with_capacity((nu_max - m + 1).max(1) as usize);
    out.push(first);
    if nu_max > m {
        let second = x * &out[0] * (2 * m + 1) * recurrence_signs(branch, kind).0;
        out.push(second);
    }
    for nu in (m + 1)..nu_max {
        let k = (nu - m) as usize;
        let next = step_up(branch, kind, m, nu, x, &out[k], &out[k - 1]);
        out.push(next);
    }
    Ok(out)
}

fn attach_derivs(
    branch: Branch,
    kind: Kind,
    m: i64,
    first: i64,
    vals: Vec<BigReal>,
    x: &BigReal,
    w: &BigReal,
) -> Family {
    let n = vals.len() - 1;
    let derivs = (0..n)
        .map(|k| {
            let nu = first + k as i64;
            derivative(branch, kind, m, nu, x, w, &vals[k], &vals[k + 1])
        })
        .collect();
    let mut values = vals;
    values.truncate(n);
    Family { first, values, derivs }
}

/// `log2` of the ratio by which the dominant solution outgrows `Q` per degree.
fn growth_log2(branch: Branch, x: &BigReal) -> f64 {
    let xf = x.to_f64();
    match branch {
        Branch::Cut => 0.0,
        Branch::Outer => (xf + (xf * xf - 1.0).max(0.0).sqrt()).log2(),
        Branch::Imaginary => (xf + (xf * xf + 1.0).sqrt()).log2(),
    }
}

/// Degree-zero and order-one seeds of `Q` for degrees `0 ..= top`.
fn q_low_orders(branch: Branch, top: i64, x: &BigReal) -> (Vec<BigReal>, Vec<BigReal>) {
    let prec = x.prec();
    let q0 = match branch {
        Branch::Cut => ((x + 1) / (1 - x)).ln().mul_pow2(-1),
        Branch::Outer => ((x + 1) / (x - 1)).ln().mul_pow2(-1),
        Branch::Imaginary => BigReal::pi(prec).mul_pow2(-1) - x.atan(),
    };
    let q1 = match branch {
        Branch::Imaginary => 1 - x * &q0,
        _ => x * &q0 - 1,
    };
    let mut q = vec![q0, q1];
    for nu in 1..=top {
        let k = nu as usize;
        let next = step_up(branch, Kind::Q, 0, nu, x, &q[k], &q[k - 1]);
        q.push(next);
    }
    let w = weight(branch, x);
    let root = w.abs().sqrt();
    let q1: Vec<BigReal> = (0..=top)
        .map(|nu| {
            let k = nu as usize;
            match branch {
                Branch::Imaginary => -((&q[k + 1] + x * &q[k]) * (nu + 1)) / &root,
                _ => ((&q[k + 1] - x * &q[k]) * (nu + 1)) / &root,
            }
        })
        .collect();
    q.truncate(top as usize + 1);
    (q, q1)
}

/// `Q^m_nu` for `nu = m` and `nu = m + 1`, climbing in order from 0 and 1.
fn q_seeds(branch: Branch, m: i64, x: &BigReal) -> (BigReal, BigReal) {
    let (q0, q1) = q_low_orders(branch, m + 1, x);
    let w = weight(branch, x);
    let coef = x / w.abs().sqrt();
    let climb = |nu: i64| -> BigReal {
        let k = nu as usize;
        let mut a = q0[k].clone();
        let mut b = q1[k].clone();
        if m == 0 {
            return a;
        }
        for mu in 0..(m - 1) {
            let t = (nu - mu) * (nu + mu + 1);
            let lead = -(&coef * &b * (2 * (mu + 1)));
            let c = match branch {
                Branch::Cut => lead - &a * t,
                _ => lead + &a * t,
            };
            a = b;
            b = c;
        }
        b
    };
    (climb(m), climb(m + 1))
}

/// `Q^m_n` and its derivative for `n = -m ..= nu_max`.
pub fn q_family(branch: Branch, m: u32, nu_max: i64, x: &BigReal, prec: u32) -> Result<Family> {
    check_arg(branch, x, false)?;
    let mi = m as i64;
    let nu_max = nu_max.max(mi + 1);
    let g = growth_log2(branch, x);
    let seed_boost = (2.0 * (mi + 2) as f64 * g).ceil() as u32 + 24;
    let xs = x.with_prec(prec + seed_boost);
    let (s0, s1) = q_seeds(branch, mi, &xs);

    let top = nu_max + 1;
    let fwd_boost = (2.0 * top as f64 * g).ceil() as u32 + 16;
    let upper: Vec<BigReal> = if branch == Branch::Cut || fwd_boost <= prec {
        let xb = x.with_prec(prec + fwd_boost);
        let mut v = vec![s0.with_prec(prec + fwd_boost), s1.with_prec(prec + fwd_boost)];
        for nu in (mi + 1)..top {
            let k = (nu - mi) as usize;
            let next = step_up(branch, Kind::Q, mi, nu, &xb, &v[k], &v[k - 1]);
            v.push(next);
        }
        v
    } else {
        miller_q(branch, mi, top, x, prec, g, &s0, &s1)?
    };

    // continue below degree m
    let mut lower: Vec<BigReal> = Vec::with_capacity(2 * m as usize);
    if mi > 0 {
        let low_boost = (2.0 * mi as f64 * g).ceil() as u32 + 16;
        let lp = prec + low_boost.max(seed_boost);
        let xl = x.with_prec(lp);
        let mut f_next = s1.with_prec(lp);
        let mut f = s0.with_prec(lp);
        for nu in ((-mi + 1)..=mi).rev() {
            let prev = step_down(branch, Kind::Q, mi, nu, &xl, &f, &f_next);
            lower.push(prev.clone());
            f_next = f;
            f = prev;
        }
        lower.reverse();
    }

    let mut vals: Vec<BigReal> = lower.into_iter().map(|v| v.with_prec(prec)).collect();
    vals.extend(upper.into_iter().map(|v| v.with_prec(prec)));
    let xp = x.with_prec(prec);
    let w = weight(branch, &xp);
    Ok(attach_derivs(branch, Kind::Q, mi, -mi, vals, &xp, &w))
}

#[allow(clippy::too_many_arguments)]
fn miller_q(
    branch: Branch,
    m: i64,
    top: i64,
    x: &BigReal,
    prec: u32,
    g: f64,
    s0: &BigReal,
    s1: &BigReal,
) -> Result<Vec<BigReal>> {
    let extra = (1.25 * (prec as f64 + 16.0) / (2.0 * g)).ceil() as i64 + 10;
    let start = top + extra;
    let wp = prec + 16;
    let xw = x.with_prec(wp);
    let mut f_next = BigReal::zero(wp);
    let mut f = BigReal::pow2(-(wp as i32), wp);
    let mut seq = Vec::with_capacity((start - m + 1) as usize);
    seq.push(f.clone());
    for nu in ((m + 1)..=start).rev() {
        let prev = step_down(branch, Kind::Q, m, nu, &xw, &f, &f_next);
        f_next = f;
        f = prev;
        seq.push(f.clone());
    }
    seq.reverse();
    // seq[k] approximates Q_{m+k} up to a common scale
    let (true_v, idx) = if s0.cmp_abs(s1) == std::cmp::Ordering::Less {
        (s1, 1usize)
    } else {
        (s0, 0usize)
    };
    if seq[idx].is_zero() {
        return Err(Error::NonConvergence("Miller recurrence for Q vanished".into()));
    }
    let scale = true_v.with_prec(wp) / &seq[idx];
    seq.truncate((top - m + 1) as usize);
    Ok(seq.into_iter().map(|v| v * &scale).collect())
}
