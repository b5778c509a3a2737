//! Angle and radial spheroidal functions with their derivatives.

mod angle;
mod radial;

pub use angle::{angle_s1, angle_s1_continued, angle_s2, angle_s2_continued, AngleMethod};
pub use radial::radial;
use radial::radial_unrounded;

use crate::coefficients::CoefficientSet;
use crate::error::{Error, Result};
use crate::numerics::BigReal;
use crate::params::SpheroidalKind;
use std::fmt;
use std::str::FromStr;

/// A function value and its derivative with respect to the evaluation
/// argument.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalPair {
    pub value: BigReal,
    pub derivative: BigReal,
}

impl EvalPair {
    pub(crate) fn rounded(self, prec: u32) -> EvalPair {
        EvalPair { value: self.value.with_prec(prec), derivative: self.derivative.with_prec(prec) }
    }
}

#[allow(non_camel_case_types)]
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RadialMethod {
    R1_1,
    R1_2,
    R2_1,
    R2_2,
    R2_31,
    R2_32,
}

impl RadialMethod {
    pub const ALL: [RadialMethod; 6] = [
        RadialMethod::R1_1,
        RadialMethod::R1_2,
        RadialMethod::R2_1,
        RadialMethod::R2_2,
        RadialMethod::R2_31,
        RadialMethod::R2_32,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RadialMethod::R1_1 => "R1_1",
            RadialMethod::R1_2 => "R1_2",
            RadialMethod::R2_1 => "R2_1",
            RadialMethod::R2_2 => "R2_2",
            RadialMethod::R2_31 => "R2_31",
            RadialMethod::R2_32 => "R2_32",
        }
    }

    pub fn is_first_kind(self) -> bool {
        matches!(self, RadialMethod::R1_1 | RadialMethod::R1_2)
    }

    pub fn available_for(self, kind: SpheroidalKind) -> bool {
        kind == SpheroidalKind::Oblate || !matches!(self, RadialMethod::R2_31 | RadialMethod::R2_32)
    }
}

impl fmt::Display for RadialMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RadialMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RadialMethod::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown radial method {s:?}")))
    }
}

#[allow(non_camel_case_types)]
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FirstKind {
    R1_1,
    R1_2,
}

/// Second-kind method of a combination. The power-series method always
/// reuses the first-kind method it is paired with, so the pairings
/// `R1_1`/`R2_32` and `R1_2`/`R2_31` cannot be expressed.
#[allow(non_camel_case_types)]
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SecondKind {
    R2_1,
    R2_2,
    R2_3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Combination {
    pub first: FirstKind,
    pub second: SecondKind,
}

impl Combination {
    pub fn candidates(kind: SpheroidalKind) -> Vec<Combination> {
        let seconds: &[SecondKind] = match kind {
            SpheroidalKind::Prolate => &[SecondKind::R2_1, SecondKind::R2_2],
            SpheroidalKind::Oblate => &[SecondKind::R2_1, SecondKind::R2_2, SecondKind::R2_3],
        };
        let mut out = Vec::new();
        for first in [FirstKind::R1_1, FirstKind::R1_2] {
            for &second in seconds {
                out.push(Combination { first, second });
            }
        }
        out
    }

    pub fn methods(self) -> (RadialMethod, RadialMethod) {
        let r1 = match self.first {
            FirstKind::R1_1 => RadialMethod::R1_1,
            FirstKind::R1_2 => RadialMethod::R1_2,
        };
        let r2 = match (self.second, self.first) {
            (SecondKind::R2_1, _) => RadialMethod::R2_1,
            (SecondKind::R2_2, _) => RadialMethod::R2_2,
            (SecondKind::R2_3, FirstKind::R1_1) => RadialMethod::R2_31,
            (SecondKind::R2_3, FirstKind::R1_2) => RadialMethod::R2_32,
        };
        (r1, r2)
    }
}

impl fmt::Display for Combination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.methods();
        write!(f, "{a},{b}")
    }
}

/// Real and imaginary parts of a complex function value with derivative.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexEvalPair {
    pub re: EvalPair,
    pub im: EvalPair,
}

#[derive(Clone, Debug)]
pub struct RadialResult {
    pub r1: EvalPair,
    pub r2: EvalPair,
    /// `R1 + i R2`.
    pub r3: ComplexEvalPair,
    /// `R1 - i R2`.
    pub r4: ComplexEvalPair,
    pub chosen: Combination,
    pub wronskian_rel_error: BigReal,
    /// Every admissible combination with its Wronskian relative error, in
    /// candidate order.
    pub candidates: Vec<(Combination, BigReal)>,
}

pub const DEFAULT_ERROR_CEILING: f64 = 1e-6;

/// `1/(c(xi^2 - 1))` for prolate, `1/(c(xi^2 + 1))` for oblate.
pub fn wronskian_exact(kind: SpheroidalKind, c: &BigReal, xi: &BigReal) -> Result<BigReal> {
    if !(*c > 0i64) {
        return Err(Error::domain("the Wronskian needs c > 0"));
    }
    let w = match kind {
        SpheroidalKind::Prolate => {
            if !(*xi > 1i64) {
                return Err(Error::domain("prolate Wronskian needs xi > 1"));
            }
            xi.square() - 1
        }
        SpheroidalKind::Oblate => {
            if xi.is_sign_negative() && !xi.is_zero() {
                return Err(Error::domain("oblate Wronskian needs xi >= 0"));
            }
            xi.square() + 1
        }
    };
    Ok((c * w).recip())
}

/// Relative deviation of `r1 r2' - r1' r2` from the exact Wronskian.
pub fn wronskian_rel_error(r1: &EvalPair, r2: &EvalPair, exact: &BigReal) -> BigReal {
    let w = &r1.value * &r2.derivative - &r1.derivative * &r2.value;
    let err = ((w - exact) / exact).abs();
    if err.is_nan() {
        BigReal::infinity(true, exact.prec())
    } else {
        err
    }
}

/// Evaluate every admissible method and keep the combination whose
/// Wronskian is closest to the exact one.
///
/// Errors are measured at working precision so that methods which agree to
/// the user precision are still ranked; the returned values are rounded.
pub fn radial_auto(coeffs: &CoefficientSet, xi: &BigReal, ceiling: Option<f64>) -> Result<RadialResult> {
    let p = &coeffs.params;
    let exact = wronskian_exact(p.kind, &p.c, &xi.with_prec(p.wp()))?;
    let mut evals: Vec<(RadialMethod, EvalPair)> = Vec::new();
    let mut last_err = None;
    for m in RadialMethod::ALL.into_iter().filter(|m| m.available_for(p.kind)) {
        match radial_unrounded(coeffs, xi, m) {
            Ok(v) if v.value.is_finite() && v.derivative.is_finite() => evals.push((m, v)),
            Ok(_) => {}
            Err(e) => last_err = Some(e),
        }
    }
    let get = |m: RadialMethod| evals.iter().find(|(k, _)| *k == m).map(|(_, v)| v);
    let mut candidates = Vec::new();
    for combo in Combination::candidates(p.kind) {
        let (a, b) = combo.methods();
        if let (Some(r1), Some(r2)) = (get(a), get(b)) {
            candidates.push((combo, wronskian_rel_error(r1, r2, &exact)));
        }
    }
    let best = candidates
        .iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal).then(i.cmp(j)))
        .map(|(_, c)| c.clone());
    let Some((chosen, err)) = best else {
        return Err(last_err.unwrap_or_else(|| Error::MethodMismatch("no radial method applies".into())));
    };
    let (a, b) = chosen.methods();
    let r1 = get(a).cloned().expect("evaluated").rounded(p.prec);
    let r2 = get(b).cloned().expect("evaluated").rounded(p.prec);
    let neg = |e: &EvalPair| EvalPair { value: -e.value.clone(), derivative: -e.derivative.clone() };
    let result = RadialResult {
        r3: ComplexEvalPair { re: r1.clone(), im: r2.clone() },
        r4: ComplexEvalPair { re: r1.clone(), im: neg(&r2) },
        r1,
        r2,
        chosen,
        wronskian_rel_error: err,
        candidates,
    };
    let ceiling = ceiling.unwrap_or(DEFAULT_ERROR_CEILING);
    if !(result.wronskian_rel_error.to_f64() <= ceiling) {
        return Err(Error::LowConfidence { best: Box::new(result), ceiling });
    }
    Ok(result)
}

/// `w^{m/2}` and its derivative with respect to `w`, exact at `w = 0`.
pub(crate) fn half_power(w: &BigReal, m: u32) -> (BigReal, BigReal) {
    let prec = w.prec();
    if w.is_zero() {
        let v = if m == 0 { BigReal::one(prec) } else { BigReal::zero(prec) };
        let d = match m {
            1 => BigReal::infinity(true, prec),
            2 => BigReal::one(prec),
            _ => BigReal::zero(prec),
        };
        return (v, d);
    }
    let s = w.abs().sqrt();
    let v = s.powi(m as i32);
    let d = if m == 0 { BigReal::zero(prec) } else { s.powi(m as i32 - 2) * m as i64 / 2 };
    (v, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{compute_all, Floors};
    use crate::params::Params;

    #[test]
    fn candidate_counts() {
        assert_eq!(Combination::candidates(SpheroidalKind::Prolate).len(), 4);
        let obl = Combination::candidates(SpheroidalKind::Oblate);
        assert_eq!(obl.len(), 6);
        let names: Vec<String> = obl.iter().map(|c| c.to_string()).collect();
        assert!(names.contains(&"R1_1,R2_31".to_string()));
        assert!(names.contains(&"R1_2,R2_32".to_string()));
        assert!(!names.contains(&"R1_1,R2_32".to_string()));
    }

    #[test]
    fn method_names_round_trip() {
        for m in RadialMethod::ALL {
            assert_eq!(m.to_string().parse::<RadialMethod>().unwrap(), m);
        }
        assert!("R3_1".parse::<RadialMethod>().is_err());
        assert!(!RadialMethod::R2_31.available_for(SpheroidalKind::Prolate));
    }

    #[test]
    fn wronskian_domain() {
        let c = BigReal::from_i64(2, 64);
        let one = BigReal::one(64);
        assert!(wronskian_exact(SpheroidalKind::Prolate, &c, &one).is_err());
        assert!(wronskian_exact(SpheroidalKind::Prolate, &BigReal::zero(64), &c).is_err());
        let w = wronskian_exact(SpheroidalKind::Oblate, &c, &BigReal::zero(64)).unwrap();
        assert_eq!(w.to_f64(), 0.5);
        let w = wronskian_exact(SpheroidalKind::Prolate, &c, &c).unwrap();
        assert!((w.to_f64() - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn half_power_at_zero() {
        let z = BigReal::zero(64);
        assert_eq!(half_power(&z, 0).0.to_f64(), 1.0);
        assert_eq!(half_power(&z, 2).1.to_f64(), 1.0);
        assert!(!half_power(&z, 1).1.is_finite());
        let (v, d) = half_power(&BigReal::from_i64(4, 64), 3);
        assert_eq!((v.to_f64(), d.to_f64()), (8.0, 3.0));
    }

    #[test]
    fn auto_selection_and_ceiling() {
        let p = Params::parse(SpheroidalKind::Prolate, "2", 0, 1, 120).unwrap();
        let set = compute_all(&p, &Floors::default()).unwrap();
        let xi = BigReal::from_f64(6.0, p.wp());
        let r = radial_auto(&set, &xi, None).unwrap();
        assert!(r.wronskian_rel_error.to_f64() < 1e-40, "{}", r.wronskian_rel_error.to_f64());
        assert_eq!(r.candidates.len(), 4);
        // the Neumann series for R2_1 converges too slowly this close to 1
        let near = radial_auto(&set, &BigReal::from_f64(1.05, p.wp()), None).unwrap();
        assert_eq!(near.candidates.len(), 2);
        assert!(near.wronskian_rel_error.to_f64() < 1e-40);
        assert_eq!(r.r4.im.value, -r.r2.value.clone());
        // a negative ceiling rejects every combination
        match radial_auto(&set, &xi, Some(-1.0)) {
            Err(Error::LowConfidence { best, .. }) => assert_eq!(best.chosen, r.chosen),
            other => panic!("expected LowConfidence, got {:?}", other.map(|r| r.chosen)),
        }
    }
}
