//! Problem parameters.

use crate::error::{Error, Result};
use crate::numerics::{working_prec, BigReal};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpheroidalKind {
    Prolate,
    Oblate,
}

impl SpheroidalKind {
    /// Sign attached to `c^2` in the coefficient recurrence.
    pub fn sigma(self) -> i64 {
        match self {
            SpheroidalKind::Prolate => 1,
            SpheroidalKind::Oblate => -1,
        }
    }

    pub fn short_name(self) -> &'static str {
        match self {
            SpheroidalKind::Prolate => "pro",
            SpheroidalKind::Oblate => "obl",
        }
    }
}

/// Whether `n - m` is even or odd.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(m: u32, n: u32) -> Parity {
        if (n - m) % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Smallest non-negative index of this parity.
    pub fn p(self) -> i64 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Params {
    pub kind: SpheroidalKind,
    pub c: BigReal,
    pub m: u32,
    pub n: u32,
    /// User precision in bits; internal work adds guard bits.
    pub prec: u32,
}

impl Params {
    pub fn new(kind: SpheroidalKind, c: BigReal, m: u32, n: u32, prec: u32) -> Result<Params> {
        if n < m {
            return Err(Error::Domain(format!("n = {n} is smaller than m = {m}")));
        }
        if prec < 16 {
            return Err(Error::domain("precision must be at least 16 bits"));
        }
        if !c.is_finite() || c < 0i64 {
            return Err(Error::domain("c must be finite and non-negative"));
        }
        let c = c.with_prec(working_prec(prec));
        Ok(Params { kind, c, m, n, prec })
    }

    /// Convenience constructor from a decimal literal for `c`.
    pub fn parse(kind: SpheroidalKind, c: &str, m: u32, n: u32, prec: u32) -> Result<Params> {
        let cv = BigReal::parse(c, working_prec(prec))
            .ok_or_else(|| Error::Domain(format!("cannot parse c = {c:?}")))?;
        Params::new(kind, cv, m, n, prec)
    }

    pub fn wp(&self) -> u32 {
        working_prec(self.prec)
    }

    pub fn parity(&self) -> Parity {
        Parity::of(self.m, self.n)
    }

    /// `n - m`, the index of the dominant coefficient.
    pub fn r0(&self) -> i64 {
        (self.n - self.m) as i64
    }

    /// `sigma c^2`: `c^2` for prolate, `-c^2` for oblate.
    pub fn sc2(&self) -> BigReal {
        self.c.square() * self.kind.sigma()
    }

    pub fn with_prec(&self, prec: u32) -> Params {
        Params {
            kind: self.kind,
            c: self.c.with_prec(working_prec(prec)),
            m: self.m,
            n: self.n,
            prec,
        }
    }

    pub fn with_n(&self, n: u32) -> Result<Params> {
        Params::new(self.kind, self.c.clone(), self.m, n, self.prec)
    }
}
