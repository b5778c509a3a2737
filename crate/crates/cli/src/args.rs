//! Single-dash `-flag value` argument parsing.

use std::collections::HashMap;
use std::fmt;

use spheroidal::cache::encode_c;
use spheroidal::coefficients::{Floors, Truncation};
use spheroidal::functions::RadialMethod;
use spheroidal::{BigReal, SpheroidalKind};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{0}")]
pub struct ParseError(pub String);

fn err<T>(msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError(msg.into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Work {
    Lambda,
    Dr,
    DrNeg,
    N,
    F,
    K1,
    K2,
    C2k,
    Q,
    B2r,
    Everything,
    S1,
    R,
}

impl Work {
    pub fn parse(s: &str) -> Option<Work> {
        Some(match s {
            "lambda" => Work::Lambda,
            "dr" => Work::Dr,
            "dr_neg" => Work::DrNeg,
            "N" => Work::N,
            "F" => Work::F,
            "k1" => Work::K1,
            "k2" => Work::K2,
            "c2k" => Work::C2k,
            "Q" => Work::Q,
            "B2r" => Work::B2r,
            "everything" => Work::Everything,
            "S1" => Work::S1,
            "R" => Work::R,
            _ => return None,
        })
    }

    pub fn is_evaluation(self) -> bool {
        matches!(self, Work::S1 | Work::R)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArgType {
    /// `eta = t`.
    Eta,
    /// `eta = cos(t pi)`.
    ThetaOverPi,
    /// `xi = t`.
    Xi,
    /// `xi = (t^2 + 1)^{1/2}`.
    X,
}

impl fmt::Display for ArgType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ArgType::Eta => "eta",
            ArgType::ThetaOverPi => "theta/pi",
            ArgType::Xi => "xi",
            ArgType::X => "x",
        })
    }
}

/// Grid `t = a, a + d, ...` up to `b`, kept as decimal text until the
/// working precision is known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    pub a: String,
    pub b: String,
    pub d: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Invocation {
    pub kind: SpheroidalKind,
    pub max_memory_mb: u64,
    pub prec: u32,
    pub verbose: bool,
    /// Decimal literal as given.
    pub c: String,
    pub m: u32,
    pub n: u32,
    pub work: Work,
    pub floors: Floors,
    pub grid: Option<Grid>,
    pub arg_type: Option<ArgType>,
    pub which: Vec<RadialMethod>,
    /// Significant digits of printed values.
    pub digits: usize,
    /// Explicit double-precision seed for the characteristic value.
    pub seed: Option<f64>,
}

pub const DEFAULT_DIGITS: usize = 20;

const BASE: [&str; 7] = ["max_memory", "prec", "verbose", "c", "m", "n", "w"];
const COEFF: [&str; 8] = ["n_dr", "dr_min", "n_dr_neg", "dr_neg_min", "n_c2k", "c2k_min", "n_B2r", "B2r_min"];
const GRID: [&str; 5] = ["a", "b", "d", "arg_type", "p"];

fn parse_num<T: std::str::FromStr>(flag: &str, v: &str) -> Result<T, ParseError> {
    v.parse().map_err(|_| ParseError(format!("-{flag}: cannot parse {v:?}")))
}

fn check_decimal(flag: &str, v: &str) -> Result<BigReal, ParseError> {
    match BigReal::parse(v, 128) {
        Some(x) if x.is_finite() => Ok(x),
        _ => err(format!("-{flag}: not a decimal number: {v:?}")),
    }
}

fn truncation(
    flags: &HashMap<&str, &str>,
    count: &str,
    floor: &str,
) -> Result<Truncation, ParseError> {
    let mut t = Truncation::default();
    if let Some(v) = flags.get(count) {
        t.count = Some(parse_num(count, v)?);
    }
    if let Some(v) = flags.get(floor) {
        let f = check_decimal(floor, v)?;
        if !(f > 0i64) {
            return err(format!("-{floor} must be positive"));
        }
        t.floor = Truncation::floor_str(v).and_then(|t| t.floor);
    }
    Ok(t)
}

/// Parse the arguments after the program name.
pub fn parse_invocation<S: AsRef<str>>(kind: SpheroidalKind, argv: &[S]) -> Result<Invocation, ParseError> {
    let mut flags: HashMap<&str, &str> = HashMap::new();
    let mut it = argv.iter().map(|s| s.as_ref());
    while let Some(tok) = it.next() {
        let Some(name) = tok.strip_prefix('-') else {
            return err(format!("unexpected argument {tok:?}"));
        };
        let known = BASE.contains(&name)
            || COEFF.contains(&name)
            || GRID.contains(&name)
            || name == "which"
            || name == "seed";
        if !known {
            return err(format!("unknown flag -{name}"));
        }
        let Some(value) = it.next() else {
            return err(format!("-{name} needs a value"));
        };
        if flags.insert(name, value).is_some() {
            return err(format!("-{name} given twice"));
        }
    }
    for f in BASE {
        if !flags.contains_key(f) {
            return err(format!("missing mandatory flag -{f}"));
        }
    }

    let max_memory_mb = parse_num("max_memory", flags["max_memory"])?;
    let prec: u32 = parse_num("prec", flags["prec"])?;
    if prec < 16 {
        return err("-prec must be at least 16");
    }
    let verbose = match flags["verbose"] {
        "y" => true,
        "n" => false,
        v => return err(format!("-verbose takes y or n, not {v:?}")),
    };
    let c = flags["c"].to_string();
    let cv = check_decimal("c", &c)?;
    if cv < 0i64 {
        return err("-c must be non-negative");
    }
    encode_c(&cv).map_err(|e| ParseError(e.to_string()))?;
    let m: u32 = parse_num("m", flags["m"])?;
    let n: u32 = parse_num("n", flags["n"])?;
    if n < m {
        return err(format!("-n {n} is smaller than -m {m}"));
    }
    let work = Work::parse(flags["w"]).ok_or_else(|| ParseError(format!("invalid -w value {:?}", flags["w"])))?;
    if matches!(work, Work::Q | Work::B2r) && kind == SpheroidalKind::Prolate {
        return err(format!("-w {} is defined for oblate functions only", flags["w"]));
    }

    let floors = Floors {
        dr: truncation(&flags, "n_dr", "dr_min")?,
        dr_neg: truncation(&flags, "n_dr_neg", "dr_neg_min")?,
        c2k: truncation(&flags, "n_c2k", "c2k_min")?,
        b2r: truncation(&flags, "n_B2r", "B2r_min")?,
    };

    if !work.is_evaluation() {
        if let Some(f) = GRID.iter().chain(["which"].iter()).find(|f| flags.contains_key(**f)) {
            return err(format!("-{f} applies to -w S1 and -w R only"));
        }
    }
    if work == Work::S1 && flags.contains_key("which") {
        return err("-which applies to -w R only");
    }

    let (mut grid, mut arg_type, mut which, mut digits) = (None, None, Vec::new(), DEFAULT_DIGITS);
    if work.is_evaluation() {
        for f in ["a", "b", "d"] {
            if !flags.contains_key(f) {
                return err(format!("-w {} needs -{f}", flags["w"]));
            }
        }
        let a = check_decimal("a", flags["a"])?;
        let b = check_decimal("b", flags["b"])?;
        let d = check_decimal("d", flags["d"])?;
        if !(d > 0i64) {
            return err("-d must be positive");
        }
        if b < a {
            return err("-b is smaller than -a");
        }
        grid = Some(Grid { a: flags["a"].into(), b: flags["b"].into(), d: flags["d"].into() });
        if let Some(v) = flags.get("p") {
            digits = parse_num("p", v)?;
            if digits == 0 {
                return err("-p must be positive");
            }
        }
        let at = flags.get("arg_type").copied();
        arg_type = Some(match (work, at) {
            (Work::S1, None | Some("eta")) => ArgType::Eta,
            (Work::S1, Some("theta/pi")) => ArgType::ThetaOverPi,
            (Work::R, None | Some("xi")) => ArgType::Xi,
            (Work::R, Some("x")) if kind == SpheroidalKind::Prolate => ArgType::X,
            (_, Some(v)) => return err(format!("invalid -arg_type {v:?} for -w {}", flags["w"])),
            _ => unreachable!("evaluation work"),
        });
        if work == Work::R {
            which = match flags.get("which") {
                None => RadialMethod::ALL.into_iter().filter(|m| m.available_for(kind)).collect(),
                Some(list) => parse_which(kind, list)?,
            };
        }
    }

    let seed = match flags.get("seed") {
        Some(v) => Some(parse_num::<f64>("seed", v)?).filter(|s| s.is_finite()),
        None => None,
    };
    if flags.contains_key("seed") && seed.is_none() {
        return err("-seed must be finite");
    }

    Ok(Invocation {
        kind,
        max_memory_mb,
        prec,
        verbose,
        c,
        m,
        n,
        work,
        floors,
        grid,
        arg_type,
        which,
        digits,
        seed,
    })
}

fn parse_which(kind: SpheroidalKind, list: &str) -> Result<Vec<RadialMethod>, ParseError> {
    let mut out = Vec::new();
    for item in list.split(',') {
        let m: RadialMethod = item.parse().map_err(|_| ParseError(format!("-which: unknown method {item:?}")))?;
        if !m.available_for(kind) {
            return err(format!("-which: {m} is defined for oblate functions only"));
        }
        if out.contains(&m) {
            return err(format!("-which: {m} listed twice"));
        }
        out.push(m);
    }
    Ok(out)
}
