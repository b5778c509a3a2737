//! Fixed-precision binary floating point backed by MPFR.
//!
//! Every value carries its own precision in bits. Binary operations round to
//! the wider of the two operand precisions; operations with plain integers or
//! `f64` keep the precision of the big operand.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{OnceLock, RwLock};

use rug::float::{Constant, Round};
use rug::ops::Pow;
use rug::{Float, Integer};

/// Guard bits added on top of every user-requested precision.
pub const GUARD_BITS: u32 = 32;

/// Working precision for a user precision `prec`.
pub fn working_prec(prec: u32) -> u32 {
    prec + GUARD_BITS
}

#[derive(Clone, PartialEq)]
pub struct BigReal(Float);

impl BigReal {
    pub fn zero(prec: u32) -> Self {
        BigReal(Float::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        BigReal(Float::with_val(prec, v))
    }

    pub fn from_f64(v: f64, prec: u32) -> Self {
        BigReal(Float::with_val(prec, v))
    }

    pub fn from_integer(v: &Integer, prec: u32) -> Self {
        BigReal(Float::with_val(prec, v))
    }

    /// Exact rational `num/den`, correctly rounded.
    pub fn ratio(num: i64, den: i64, prec: u32) -> Self {
        BigReal(Float::with_val(prec, num) / den)
    }

    pub fn pi(prec: u32) -> Self {
        BigReal(Float::with_val(prec, Constant::Pi))
    }

    pub fn infinity(positive: bool, prec: u32) -> Self {
        let inf = Float::with_val(prec, rug::float::Special::Infinity);
        BigReal(if positive { inf } else { -inf })
    }

    pub fn nan(prec: u32) -> Self {
        BigReal(Float::with_val(prec, rug::float::Special::Nan))
    }

    /// Parse a decimal literal such as `"-1.25e-3"`.
    pub fn parse(s: &str, prec: u32) -> Option<Self> {
        let parsed = Float::parse(s.trim()).ok()?;
        Some(BigReal(Float::with_val(prec, parsed)))
    }

    pub fn from_float(f: Float) -> Self {
        BigReal(f)
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn into_float(self) -> Float {
        self.0
    }

    pub fn prec(&self) -> u32 {
        self.0.prec()
    }

    /// Copy rounded (or widened) to `prec` bits.
    pub fn with_prec(&self, prec: u32) -> Self {
        BigReal(Float::with_val(prec, &self.0))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    pub fn is_nan(&self) -> bool {
        self.0.is_nan()
    }

    pub fn is_sign_negative(&self) -> bool {
        self.0.is_sign_negative()
    }

    /// -1, 0 or 1.
    pub fn signum_i(&self) -> i32 {
        match self.0.cmp0() {
            Some(Ordering::Less) => -1,
            Some(Ordering::Greater) => 1,
            _ => 0,
        }
    }

    pub fn abs(&self) -> Self {
        BigReal(self.0.clone().abs())
    }

    pub fn sqrt(&self) -> Self {
        BigReal(self.0.clone().sqrt())
    }

    pub fn square(&self) -> Self {
        BigReal(self.0.clone().square())
    }

    pub fn recip(&self) -> Self {
        BigReal(self.0.clone().recip())
    }

    pub fn sin(&self) -> Self {
        BigReal(self.0.clone().sin())
    }

    pub fn cos(&self) -> Self {
        BigReal(self.0.clone().cos())
    }

    pub fn sin_cos(&self) -> (Self, Self) {
        let (s, c) = self.0.clone().sin_cos(Float::new(self.prec()));
        (BigReal(s), BigReal(c))
    }

    pub fn atan(&self) -> Self {
        BigReal(self.0.clone().atan())
    }

    pub fn acos(&self) -> Self {
        BigReal(self.0.clone().acos())
    }

    pub fn ln(&self) -> Self {
        BigReal(self.0.clone().ln())
    }

    pub fn exp(&self) -> Self {
        BigReal(self.0.clone().exp())
    }

    pub fn log2_abs(&self) -> f64 {
        if self.0.is_zero() {
            return f64::NEG_INFINITY;
        }
        match self.0.to_f64_exp() {
            (m, e) => m.abs().log2() + e as f64,
        }
    }

    pub fn powi(&self, k: i32) -> Self {
        BigReal(self.0.clone().pow(k))
    }

    pub fn pow(&self, e: &BigReal) -> Self {
        let prec = self.prec().max(e.prec());
        BigReal(Float::with_val(prec, (&self.0).pow(&e.0)))
    }

    /// `2^k` exactly.
    pub fn pow2(k: i32, prec: u32) -> Self {
        BigReal(Float::with_val(prec, 1) << k)
    }

    pub fn mul_pow2(&self, k: i32) -> Self {
        BigReal(self.0.clone() << k)
    }

    pub fn max_abs<'a>(a: &'a BigReal, b: &'a BigReal) -> &'a BigReal {
        if a.cmp_abs(b) == Ordering::Less {
            b
        } else {
            a
        }
    }

    pub fn cmp_abs(&self, other: &BigReal) -> Ordering {
        self.0.cmp_abs(&other.0).unwrap_or(Ordering::Equal)
    }

    /// `|self| < 2^k`.
    pub fn abs_below_pow2(&self, k: i32) -> bool {
        match self.0.get_exp() {
            None => self.0.is_zero(),
            Some(e) => e <= k,
        }
    }

    /// Decimal text with `digits` significant digits in `d.ddde±x` form.
    pub fn to_sci(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.0.is_nan() {
            return "nan".into();
        }
        if self.0.is_infinite() {
            return if self.0.is_sign_negative() { "-inf".into() } else { "inf".into() };
        }
        if self.0.is_zero() {
            let mut s = String::from("0");
            if digits > 1 {
                s.push('.');
                s.extend(std::iter::repeat('0').take(digits - 1));
            }
            s.push_str("e+00");
            return s;
        }
        let (neg, mant, exp) = self.0.to_sign_string_exp_round(10, Some(digits), Round::Nearest);
        let exp = exp.unwrap_or(0) - 1;
        let mut out = String::with_capacity(digits + 8);
        if neg {
            out.push('-');
        }
        out.push_str(&mant[..1]);
        if digits > 1 {
            out.push('.');
            out.push_str(&mant[1..]);
        }
        out.push('e');
        out.push(if exp < 0 { '-' } else { '+' });
        out.push_str(&format!("{:02}", exp.abs()));
        out
    }

    /// Number of decimal digits that make a round trip exact at `bits`.
    pub fn round_trip_digits(bits: u32) -> usize {
        (bits as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2
    }

    pub fn to_round_trip_string(&self) -> String {
        self.to_sci(Self::round_trip_digits(self.prec()))
    }
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sci(20))
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f
            .precision()
            .unwrap_or_else(|| Self::round_trip_digits(self.prec()));
        f.pad(&self.to_sci(digits))
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl PartialEq<f64> for BigReal {
    fn eq(&self, other: &f64) -> bool {
        self.0 == *other
    }
}

impl PartialOrd<f64> for BigReal {
    fn partial_cmp(&self, other: &f64) -> Option<Ordering> {
        self.0.partial_cmp(other)
    }
}

impl PartialEq<i64> for BigReal {
    fn eq(&self, other: &i64) -> bool {
        self.0 == *other
    }
}

impl PartialOrd<i64> for BigReal {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        self.0.partial_cmp(other)
    }
}

macro_rules! big_binop {
    ($tr:ident, $m:ident, $atr:ident, $am:ident) => {
        impl<'a, 'b> $tr<&'b BigReal> for &'a BigReal {
            type Output = BigReal;
            fn $m(self, rhs: &'b BigReal) -> BigReal {
                let prec = self.prec().max(rhs.prec());
                BigReal(Float::with_val(prec, (&self.0).$m(&rhs.0)))
            }
        }
        impl<'b> $tr<&'b BigReal> for BigReal {
            type Output = BigReal;
            fn $m(self, rhs: &'b BigReal) -> BigReal {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<BigReal> for &'a BigReal {
            type Output = BigReal;
            fn $m(self, rhs: BigReal) -> BigReal {
                self.$m(&rhs)
            }
        }
        impl $tr<BigReal> for BigReal {
            type Output = BigReal;
            fn $m(self, rhs: BigReal) -> BigReal {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<i64> for &'a BigReal {
            type Output = BigReal;
            fn $m(self, rhs: i64) -> BigReal {
                BigReal(Float::with_val(self.prec(), (&self.0).$m(rhs)))
            }
        }
        impl $tr<i64> for BigReal {
            type Output = BigReal;
            fn $m(self, rhs: i64) -> BigReal {
                BigReal(self.0.$m(rhs))
            }
        }
        impl<'a> $tr<f64> for &'a BigReal {
            type Output = BigReal;
            fn $m(self, rhs: f64) -> BigReal {
                BigReal(Float::with_val(self.prec(), (&self.0).$m(rhs)))
            }
        }
        impl $tr<f64> for BigReal {
            type Output = BigReal;
            fn $m(self, rhs: f64) -> BigReal {
                BigReal(self.0.$m(rhs))
            }
        }
        impl<'a> $tr<&'a BigReal> for i64 {
            type Output = BigReal;
            fn $m(self, rhs: &'a BigReal) -> BigReal {
                BigReal(Float::with_val(rhs.prec(), self.$m(&rhs.0)))
            }
        }
        impl $tr<BigReal> for i64 {
            type Output = BigReal;
            fn $m(self, rhs: BigReal) -> BigReal {
                self.$m(&rhs)
            }
        }
        impl<'b> $atr<&'b BigReal> for BigReal {
            fn $am(&mut self, rhs: &'b BigReal) {
                if rhs.prec() > self.prec() {
                    self.0.set_prec(rhs.prec());
                }
                self.0.$am(&rhs.0);
            }
        }
        impl $atr<BigReal> for BigReal {
            fn $am(&mut self, rhs: BigReal) {
                self.$am(&rhs);
            }
        }
        impl $atr<i64> for BigReal {
            fn $am(&mut self, rhs: i64) {
                self.0.$am(rhs);
            }
        }
    };
}

big_binop!(Add, add, AddAssign, add_assign);
big_binop!(Sub, sub, SubAssign, sub_assign);
big_binop!(Mul, mul, MulAssign, mul_assign);
big_binop!(Div, div, DivAssign, div_assign);

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal(-self.0)
    }
}

impl<'a> Neg for &'a BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal(-self.0.clone())
    }
}

/// Sum of a sequence; an empty sequence sums to zero at `prec`.
pub fn sum<'a, I: IntoIterator<Item = &'a BigReal>>(items: I, prec: u32) -> BigReal {
    let mut acc = BigReal::zero(prec);
    for x in items {
        acc += x;
    }
    acc
}

fn factorial_table() -> &'static RwLock<Vec<Integer>> {
    static TABLE: OnceLock<RwLock<Vec<Integer>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![Integer::from(1)]))
}

/// Exact `k!`, memoised across threads.
pub fn factorial_exact(k: u32) -> Integer {
    let k = k as usize;
    {
        let t = factorial_table().read().unwrap_or_else(|e| e.into_inner());
        if let Some(v) = t.get(k) {
            return v.clone();
        }
    }
    let mut t = factorial_table().write().unwrap_or_else(|e| e.into_inner());
    while t.len() <= k {
        let next = Integer::from(&t[t.len() - 1] * t.len() as u32);
        t.push(next);
    }
    t[k].clone()
}

/// `k!` rounded to `prec` bits.
pub fn factorial(k: u32, prec: u32) -> BigReal {
    BigReal::from_integer(&factorial_exact(k), prec)
}

/// `(2k-1)!!` rounded to `prec` bits, with `(-1)!! = 1`.
pub fn double_factorial_odd(k: u32, prec: u32) -> BigReal {
    let mut acc = Integer::from(1);
    for j in 1..=k {
        acc *= 2 * j - 1;
    }
    BigReal::from_integer(&acc, prec)
}
