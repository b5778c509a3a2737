//! Spherical Bessel functions `j_n`, `y_n` of integer order and their
//! derivatives, for orders `0 ..= n_max` at a single positive argument.

use super::bigreal::BigReal;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct BesselFamily {
    pub values: Vec<BigReal>,
    pub derivs: Vec<BigReal>,
}

fn derivs_from(values: &[BigReal], first_deriv: BigReal, x: &BigReal) -> Vec<BigReal> {
    // f_n' = f_{n-1} - (n+1)/x f_n
    let mut out = Vec::with_capacity(values.len());
    out.push(first_deriv);
    for n in 1..values.len() {
        out.push(&values[n - 1] - &values[n] * (n as i64 + 1) / x);
    }
    out
}

/// `j_n(x)` for `n = 0 ..= n_max` by backward recurrence.
///
/// The start order is increased until two successive starts agree; the
/// sequence is normalised with `sum (2n+1) j_n^2 = 1` and the sign of the
/// larger of the closed forms for `j_0` and `j_1`.
pub fn spherical_j(n_max: usize, x: &BigReal, prec: u32) -> Result<BesselFamily> {
    if !(x.is_finite() && *x > 0i64) {
        return Err(Error::domain("spherical Bessel argument must be positive"));
    }
    let wp = prec + 16;
    let xw = x.with_prec(wp);
    let xf = x.to_f64();
    let top = n_max + 1;
    let mut extra = 32usize.max(xf.ceil() as usize);
    let mut prev: Option<Vec<BigReal>> = None;
    for _ in 0..12 {
        let start = top + extra;
        let cur = miller_j(start, top, &xw)?;
        if let Some(p) = &prev {
            let tol = BigReal::pow2(-(prec as i32) - 4, wp);
            // near a zero of j_n compare against the neighbouring magnitudes
            let agree = (0..cur.len()).all(|n| {
                let d = (&p[n] - &cur[n]).abs();
                let mut env = cur[n].abs();
                for k in [n.wrapping_sub(1), n + 1] {
                    if let Some(v) = cur.get(k) {
                        env = BigReal::max_abs(&env, v).abs();
                    }
                }
                d <= env * &tol
            });
            if agree {
                return Ok(finish(cur, &xw, prec));
            }
        }
        prev = Some(cur);
        extra *= 2;
    }
    Err(Error::NonConvergence("spherical j backward recurrence".into()))
}

fn miller_j(start: usize, top: usize, x: &BigReal) -> Result<Vec<BigReal>> {
    let wp = x.prec();
    let mut seq = vec![BigReal::zero(wp); start + 2];
    seq[start] = BigReal::pow2(-(wp as i32), wp);
    for n in (1..=start).rev() {
        // j_{n-1} = (2n+1)/x j_n - j_{n+1}
        let v = &seq[n] * (2 * n as i64 + 1) / x - &seq[n + 1];
        seq[n - 1] = v;
    }
    let mut norm = BigReal::zero(wp);
    for (n, v) in seq.iter().enumerate().take(start + 1) {
        norm += v.square() * (2 * n as i64 + 1);
    }
    if norm.is_zero() {
        return Err(Error::NonConvergence("spherical j normalisation vanished".into()));
    }
    let (s, c) = x.sin_cos();
    let j0 = &s / x;
    let j1 = &s / x.square() - &c / x;
    let (reference, idx) = if j0.cmp_abs(&j1) == std::cmp::Ordering::Less {
        (j1, 1)
    } else {
        (j0, 0)
    };
    let mut scale = norm.sqrt().recip();
    if (seq[idx].signum_i() < 0) != (reference.signum_i() < 0) {
        scale = -scale;
    }
    seq.truncate(top + 1);
    Ok(seq.into_iter().map(|v| v * &scale).collect())
}

fn finish(vals: Vec<BigReal>, x: &BigReal, prec: u32) -> BesselFamily {
    let d0 = -vals[1].clone();
    let mut derivs = derivs_from(&vals, d0, x);
    let mut values = vals;
    values.pop();
    derivs.pop();
    BesselFamily {
        values: values.into_iter().map(|v| v.with_prec(prec)).collect(),
        derivs: derivs.into_iter().map(|v| v.with_prec(prec)).collect(),
    }
}

/// `y_n(x)` for `n = 0 ..= n_max` by forward recurrence.
pub fn spherical_y(n_max: usize, x: &BigReal, prec: u32) -> Result<BesselFamily> {
    if !(x.is_finite() && *x > 0i64) {
        return Err(Error::domain("spherical Bessel argument must be positive"));
    }
    let wp = prec + 16;
    let xw = x.with_prec(wp);
    let (s, c) = xw.sin_cos();
    let y0 = -(&c / &xw);
    let y1 = -(&c / xw.square()) - &s / &xw;
    let mut vals = vec![y0, y1];
    for n in 1..=n_max {
        let v = &vals[n] * (2 * n as i64 + 1) / &xw - &vals[n - 1];
        vals.push(v);
    }
    Ok(finish(vals, &xw, prec))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        let x = BigReal::from_f64(2.5, 128);
        let j = spherical_j(3, &x, 128).unwrap();
        let y = spherical_y(3, &x, 128).unwrap();
        let xf: f64 = 2.5;
        let j2 = (3.0 / (xf * xf) - 1.0) * xf.sin() / xf - 3.0 * xf.cos() / (xf * xf);
        let y2 = -(3.0 / (xf * xf) - 1.0) * xf.cos() / xf - 3.0 * xf.sin() / (xf * xf);
        assert!((j.values[2].to_f64() - j2).abs() < 1e-15);
        assert!((y.values[2].to_f64() - y2).abs() < 1e-15);
        assert!((j.derivs[0].to_f64() + j.values[1].to_f64()).abs() < 1e-16);
    }

    #[test]
    fn cross_product_identity() {
        for &xf in &[0.01, 0.7, 3.0, 40.0, 250.0] {
            let x = BigReal::from_f64(xf, 200);
            let j = spherical_j(60, &x, 200).unwrap();
            let y = spherical_y(60, &x, 200).unwrap();
            let want = x.square().recip();
            for n in [0usize, 1, 7, 30, 60] {
                let w = &j.values[n] * &y.derivs[n] - &j.derivs[n] * &y.values[n];
                let rel = ((w - &want) / &want).abs().to_f64();
                assert!(rel < 1e-50, "x={xf} n={n} rel={rel}");
            }
        }
    }

    #[test]
    fn near_zero_of_j0() {
        let x = BigReal::pi(160);
        let j = spherical_j(5, &x, 160).unwrap();
        assert!(j.values[0].abs().to_f64() < 1e-45);
        let j1 = 1.0 / std::f64::consts::PI;
        assert!((j.values[1].to_f64() - j1).abs() < 1e-15);
    }
}
