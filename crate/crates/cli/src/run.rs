//! Dispatch of an [`Invocation`] to the compute and cache modules.

use std::cell::OnceCell;
use std::io::{self, Write};
use std::path::Path;
use std::time::Instant;

use spheroidal::cache::{Cache, CacheError, Cacheable, Tag};
use spheroidal::charvalue::{characteristic_value, refine_characteristic_value, CharacteristicValue};
use spheroidal::coefficients::{
    compute_alpha, compute_b2r, compute_dr, compute_dr_extended, compute_dr_neg, compute_k1, compute_k2,
    compute_norm_and_f, compute_q_star, B2rSet, C2kSet, CoefficientSet, DrNegSet, DrSet, ScalarSpecials,
    Truncation,
};
use spheroidal::functions::{angle_s1, radial, radial_auto, AngleMethod};
use spheroidal::{BigReal, Error, Params, SpheroidalKind};

use crate::args::{ArgType, Invocation, ParseError, Work};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Compute(#[from] Error),
    #[error(transparent)]
    Cache(#[from] CacheError),
    #[error("output error: {0}")]
    Io(#[from] io::Error),
    #[error("memory use {used_mb} MB exceeds -max_memory {limit_mb} MB")]
    Memory { used_mb: u64, limit_mb: u64 },
}

pub mod exit {
    pub const OK: i32 = 0;
    pub const IO: i32 = 1;
    pub const PARSE: i32 = 2;
    pub const DOMAIN: i32 = 3;
    pub const NON_CONVERGENCE: i32 = 4;
    pub const MEMORY: i32 = 5;
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Parse(_) => exit::PARSE,
            RunError::Cache(_) | RunError::Io(_) => exit::IO,
            RunError::Memory { .. } => exit::MEMORY,
            RunError::Compute(e) => match e {
                Error::Domain(_) | Error::MethodMismatch(_) => exit::DOMAIN,
                Error::Cache(_) => exit::IO,
                _ => exit::NON_CONVERGENCE,
            },
        }
    }
}

type Result<T> = std::result::Result<T, RunError>;

/// Resident set size in MB from `/proc/self/statm`, if available.
fn resident_mb() -> Option<u64> {
    let text = std::fs::read_to_string("/proc/self/statm").ok()?;
    let pages: u64 = text.split_whitespace().nth(1)?.parse().ok()?;
    Some(pages * 4096 / (1024 * 1024))
}

struct Session<'a> {
    inv: &'a Invocation,
    params: Params,
    cache: Cache,
    diag: &'a mut dyn Write,
    lambda: OnceCell<BigReal>,
    /// Extended `d_r` at the default `c_2k` truncation, for the scalars.
    ext: OnceCell<DrSet>,
}

impl<'a> Session<'a> {
    fn note(&mut self, msg: std::fmt::Arguments<'_>) -> Result<()> {
        if self.inv.verbose {
            writeln!(self.diag, "{msg}")?;
        }
        Ok(())
    }

    fn check_memory(&self) -> Result<()> {
        match resident_mb() {
            Some(used) if used > self.inv.max_memory_mb => {
                Err(RunError::Memory { used_mb: used, limit_mb: self.inv.max_memory_mb })
            }
            _ => Ok(()),
        }
    }

    /// Load `tag` from the cache, or compute and save it. With `want` set,
    /// a cached coefficient set is only reused if it was truncated the same
    /// way.
    fn stage<T: Cacheable>(
        &mut self,
        tag: Tag,
        want: Option<&Truncation>,
        truncation_of: impl Fn(&T) -> Option<&Truncation>,
        compute: impl FnOnce(&mut Self) -> Result<T>,
    ) -> Result<T> {
        if let Some(v) = self.cache.load::<T>(&self.params, tag)? {
            let same = match (want, truncation_of(&v)) {
                (Some(w), Some(t)) => w == t,
                _ => true,
            };
            if same {
                self.note(format_args!("{}: from cache", tag.as_str()))?;
                return Ok(v);
            }
        }
        self.check_memory()?;
        let t0 = Instant::now();
        let v = compute(self)?;
        let path = self.cache.save(&self.params, tag, &v)?;
        let ms = t0.elapsed().as_secs_f64() * 1e3;
        self.note(format_args!("{}: computed in {ms:.1} ms, saved to {}", tag.as_str(), path.display()))?;
        Ok(v)
    }

    fn lambda(&mut self) -> Result<BigReal> {
        if let Some(l) = self.lambda.get() {
            return Ok(l.clone());
        }
        let l: BigReal = self.stage(Tag::Lambda, None, |_| None, |s| {
            let cv = match s.inv.seed {
                Some(seed) => refine_characteristic_value(&s.params, seed)?,
                None => characteristic_value(&s.params)?,
            };
            s.note(format_args!(
                "lambda: seed {:e}, {} secant steps, residual {}",
                cv.seed,
                cv.iterations,
                cv.residual.to_sci(3)
            ))?;
            Ok(cv.lambda)
        })?;
        self.note(format_args!("lambda = {}", l.to_sci(self.inv.digits)))?;
        let _ = self.lambda.set(l.clone());
        Ok(l)
    }

    fn ext(&mut self) -> Result<DrSet> {
        if let Some(e) = self.ext.get() {
            return Ok(e.clone());
        }
        let lambda = self.lambda()?;
        let (e, _) = compute_dr_extended(&self.params, &lambda, &Truncation::default())?;
        let _ = self.ext.set(e.clone());
        Ok(e)
    }

    fn dr(&mut self, exact: bool) -> Result<DrSet> {
        let want = self.inv.floors.dr.clone();
        let v: DrSet = self.stage(Tag::Dr, exact.then_some(&want), |d: &DrSet| Some(&d.truncation), |s| {
            let l = s.lambda()?;
            Ok(compute_dr(&s.params, &l, &s.inv.floors.dr)?)
        })?;
        self.note(format_args!("dr: {} entries, r_max {}", v.len(), v.r_max()))?;
        Ok(v)
    }

    fn dr_neg(&mut self, exact: bool) -> Result<DrNegSet> {
        let want = self.inv.floors.dr_neg.clone();
        let v: DrNegSet = self.stage(Tag::DrNeg, exact.then_some(&want), |d: &DrNegSet| Some(&d.truncation), |s| {
            let l = s.lambda()?;
            let ext = s.ext()?;
            Ok(compute_dr_neg(&s.params, &l, &ext, &s.inv.floors.dr_neg)?)
        })?;
        self.note(format_args!("dr_neg: {} plain, {} eps entries", v.plain.len(), v.eps.len()))?;
        Ok(v)
    }

    fn scalar(&mut self, tag: Tag, compute: impl FnOnce(&mut Self) -> Result<BigReal>) -> Result<BigReal> {
        let v: BigReal = self.stage(tag, None, |_| None, compute)?;
        self.note(format_args!("{} = {}", tag.as_str(), v.to_sci(self.inv.digits)))?;
        Ok(v)
    }

    fn norm(&mut self) -> Result<BigReal> {
        self.scalar(Tag::N, |s| {
            let ext = s.ext()?;
            Ok(compute_norm_and_f(&s.params, &ext).0)
        })
    }

    fn f(&mut self) -> Result<BigReal> {
        self.scalar(Tag::F, |s| {
            let ext = s.ext()?;
            Ok(compute_norm_and_f(&s.params, &ext).1)
        })
    }

    fn need_c(&self, what: &str) -> Result<()> {
        if self.params.c.is_zero() {
            return Err(Error::Domain(format!("{what} needs c > 0")).into());
        }
        Ok(())
    }

    fn k1(&mut self) -> Result<BigReal> {
        self.need_c("k1")?;
        self.scalar(Tag::K1, |s| {
            let f = s.f()?;
            let ext = s.ext()?;
            Ok(compute_k1(&s.params, &ext, &f)?)
        })
    }

    fn k2(&mut self) -> Result<BigReal> {
        self.need_c("k2")?;
        self.scalar(Tag::K2, |s| {
            let f = s.f()?;
            let neg = s.dr_neg(false)?;
            let ext = s.ext()?;
            Ok(compute_k2(&s.params, &ext, &neg, &f)?)
        })
    }

    fn c2k(&mut self, exact: bool) -> Result<C2kSet> {
        let want = self.inv.floors.c2k.clone();
        let v: C2kSet = self.stage(Tag::C2k, exact.then_some(&want), |c: &C2kSet| Some(&c.truncation), |s| {
            let lambda = s.lambda()?;
            Ok(compute_dr_extended(&s.params, &lambda, &s.inv.floors.c2k)?.1)
        })?;
        self.note(format_args!("c2k: {} entries", v.len()))?;
        Ok(v)
    }

    fn q(&mut self) -> Result<BigReal> {
        self.need_c("Q")?;
        self.scalar(Tag::Q, |s| {
            let c2k = s.c2k(false)?;
            let k1 = s.k1()?;
            let alpha = compute_alpha(&c2k, s.params.m as usize)?;
            Ok(compute_q_star(&s.params, &alpha, &k1)?)
        })
    }

    fn b2r(&mut self, exact: bool) -> Result<B2rSet> {
        self.need_c("B2r")?;
        let want = self.inv.floors.b2r.clone();
        let v: B2rSet = self.stage(Tag::B2r, exact.then_some(&want), |b: &B2rSet| Some(&b.truncation), |s| {
            let lambda = s.lambda()?;
            let c2k = s.c2k(false)?;
            let k1 = s.k1()?;
            let q = s.q()?;
            Ok(compute_b2r(&s.params, &lambda, &c2k, &k1, &q, &s.inv.floors.b2r, false)?)
        })?;
        self.note(format_args!(
            "B2r: {} entries, growth crossover {}, check residual {:.3e}",
            v.entries.len(),
            v.growth_crossover,
            v.check_residual
        ))?;
        Ok(v)
    }

    fn everything(&mut self) -> Result<()> {
        self.lambda()?;
        self.dr(true)?;
        self.dr_neg(true)?;
        self.norm()?;
        self.f()?;
        if !self.params.c.is_zero() {
            self.k1()?;
            self.k2()?;
        }
        self.c2k(true)?;
        if self.params.kind == SpheroidalKind::Oblate && !self.params.c.is_zero() {
            self.q()?;
            self.b2r(true)?;
        }
        Ok(())
    }

    /// Coefficients for function evaluation, reusing whatever is cached.
    fn coefficient_set(&mut self) -> Result<CoefficientSet> {
        let lambda = self.lambda()?;
        let dr = self.dr(false)?;
        let dr_neg = self.dr_neg(false)?;
        let c2k = self.c2k(false)?;
        let norm = self.norm()?;
        let f = self.f()?;
        let positive = !self.params.c.is_zero();
        let (k1, k2) = if positive { (Some(self.k1()?), Some(self.k2()?)) } else { (None, None) };
        let (mut q_star, mut b2r) = (None, None);
        if self.params.kind == SpheroidalKind::Oblate && positive {
            q_star = Some(self.q()?);
            b2r = Some(self.b2r(false)?);
        }
        Ok(CoefficientSet {
            params: self.params.clone(),
            lambda: CharacteristicValue::from_lambda(lambda),
            dr,
            dr_neg,
            c2k,
            scalars: ScalarSpecials { norm, f, k1, k2, q_star },
            alpha: None,
            b2r,
        })
    }
}

fn grid_points(inv: &Invocation, wp: u32) -> Result<Vec<BigReal>> {
    let g = inv.grid.as_ref().expect("evaluation work has a grid");
    let parse = |s: &str| BigReal::parse(s, wp).ok_or_else(|| ParseError(format!("bad grid value {s:?}")));
    let (a, b, d) = (parse(&g.a)?, parse(&g.b)?, parse(&g.d)?);
    let steps = ((&b - &a) / &d).to_f64();
    let count = (steps + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| &a + &d * i as i64).collect())
}

fn field(v: &BigReal, digits: usize) -> String {
    v.to_sci(digits)
}

fn run_s1(session: &mut Session<'_>, out: &mut dyn Write) -> Result<()> {
    let coeffs = session.coefficient_set()?;
    let inv = session.inv;
    let wp = session.params.wp();
    let p = inv.digits;
    for t in grid_points(inv, wp)? {
        let eta = match inv.arg_type {
            Some(ArgType::ThetaOverPi) => (&t * &BigReal::pi(wp)).cos(),
            _ => t.clone(),
        };
        let s = angle_s1(&coeffs, &eta, AngleMethod::Legendre)?;
        writeln!(out, "{} {} {}", field(&t, p), field(&s.value, p), field(&s.derivative, p))?;
    }
    Ok(())
}

fn run_r(session: &mut Session<'_>, out: &mut dyn Write) -> Result<()> {
    let coeffs = session.coefficient_set()?;
    let inv = session.inv;
    let wp = session.params.wp();
    let p = inv.digits;
    let nan = BigReal::nan(wp);
    for t in grid_points(inv, wp)? {
        let xi = match inv.arg_type {
            Some(ArgType::X) => (t.square() + 1).sqrt(),
            _ => t.clone(),
        };
        let mut row = vec![field(&t, p)];
        for &m in &inv.which {
            match radial(&coeffs, &xi, m) {
                Ok(v) => {
                    row.push(field(&v.value, p));
                    row.push(field(&v.derivative, p));
                }
                Err(e) => {
                    session.note(format_args!("{} {m}: {e}", field(&t, p)))?;
                    row.push(field(&nan, p));
                    row.push(field(&nan, p));
                }
            }
        }
        let auto = match radial_auto(&coeffs, &xi, Some(f64::INFINITY)) {
            Ok(r) => Some(r),
            Err(Error::LowConfidence { best, .. }) => Some(*best),
            Err(e) => {
                session.note(format_args!("{} auto: {e}", field(&t, p)))?;
                None
            }
        };
        match auto {
            Some(r) => {
                let errs: Vec<String> =
                    r.candidates.iter().map(|(c, e)| format!("{c}:{}", e.to_sci(3))).collect();
                session.note(format_args!("{} wronskian {}", field(&t, p), errs.join(" ")))?;
                row.push(r.chosen.to_string());
                row.push(field(&r.wronskian_rel_error, p));
            }
            None => {
                row.push("none".into());
                row.push(field(&nan, p));
            }
        }
        writeln!(out, "{}", row.join(" "))?;
    }
    Ok(())
}

/// Execute `inv` with the cache rooted at `root`. Data rows go to `out`,
/// diagnostics (verbose mode) to `diag`.
pub fn run(inv: &Invocation, root: &Path, out: &mut dyn Write, diag: &mut dyn Write) -> Result<()> {
    let params = Params::parse(inv.kind, &inv.c, inv.m, inv.n, inv.prec)?;
    let mut s = Session {
        inv,
        params,
        cache: Cache::new(root),
        diag,
        lambda: OnceCell::new(),
        ext: OnceCell::new(),
    };
    match inv.work {
        Work::Lambda => drop(s.lambda()?),
        Work::Dr => drop(s.dr(true)?),
        Work::DrNeg => drop(s.dr_neg(true)?),
        Work::N => drop(s.norm()?),
        Work::F => drop(s.f()?),
        Work::K1 => drop(s.k1()?),
        Work::K2 => drop(s.k2()?),
        Work::C2k => drop(s.c2k(true)?),
        Work::Q => drop(s.q()?),
        Work::B2r => drop(s.b2r(true)?),
        Work::Everything => s.everything()?,
        Work::S1 => run_s1(&mut s, out)?,
        Work::R => run_r(&mut s, out)?,
    }
    s.check_memory()?;
    out.flush()?;
    Ok(())
}
