//! ASCII persistence of characteristic values, scalars and coefficient sets.
//!
//! Files live under `<root>/data/` and are named
//! `{pro|obl}_{C8}_{MMM}_{NNN}_{tag}.txt`, where `C8` is `round(1000 c)`
//! zero-padded to eight digits. Every file ends with a `# end` line so that
//! a truncated file is recognised as corrupt.
//!
//! Scalar files hold the value and then the stored precision in bits, one
//! per line. Coefficient files start with `#` header lines (`prec`, and the
//! truncation as `count`/`floor`) followed by `index value` lines in
//! ascending index; the `d_{r|eps}` tail of a `dr_neg` file follows a
//! `# eps` line.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use crate::coefficients::{B2rSet, C2kSet, DrNegSet, DrSet, Truncation};
use crate::numerics::BigReal;
use crate::params::{Params, SpheroidalKind};

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("no cache record at {0}")]
    Absent(PathBuf),
    #[error("corrupt cache record {path}: {reason}")]
    Corrupt { path: PathBuf, reason: String },
    #[error("cannot encode c = {0} in a cache file name")]
    Encoding(String),
    #[error("cache I/O error: {0}")]
    Io(#[from] io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tag {
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
    S1,
    R,
}

impl Tag {
    pub const ALL: [Tag; 12] = [
        Tag::Lambda,
        Tag::Dr,
        Tag::DrNeg,
        Tag::N,
        Tag::F,
        Tag::K1,
        Tag::K2,
        Tag::C2k,
        Tag::Q,
        Tag::B2r,
        Tag::S1,
        Tag::R,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Lambda => "lambda",
            Tag::Dr => "dr",
            Tag::DrNeg => "dr_neg",
            Tag::N => "N",
            Tag::F => "F",
            Tag::K1 => "k1",
            Tag::K2 => "k2",
            Tag::C2k => "c2k",
            Tag::Q => "Q",
            Tag::B2r => "B2r",
            Tag::S1 => "S1",
            Tag::R => "R",
        }
    }

    pub fn parse(s: &str) -> Option<Tag> {
        Tag::ALL.into_iter().find(|t| t.as_str() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CacheKey {
    pub kind: SpheroidalKind,
    /// `round(1000 c)`.
    pub c_code: u64,
    pub m: u32,
    pub n: u32,
    pub tag: Tag,
}

impl CacheKey {
    pub fn new(kind: SpheroidalKind, c: &BigReal, m: u32, n: u32, tag: Tag) -> Result<CacheKey, CacheError> {
        Ok(CacheKey { kind, c_code: encode_c(c)?, m, n, tag })
    }

    pub fn for_params(params: &Params, tag: Tag) -> Result<CacheKey, CacheError> {
        CacheKey::new(params.kind, &params.c, params.m, params.n, tag)
    }

    pub fn file_name(&self) -> String {
        format!(
            "{}_{:08}_{:03}_{:03}_{}.txt",
            self.kind.short_name(),
            self.c_code,
            self.m,
            self.n,
            self.tag.as_str()
        )
    }

    /// Path relative to the cache root, e.g. `data/pro_00010000_000_000_S1.txt`.
    pub fn relative_path(&self) -> PathBuf {
        Path::new("data").join(self.file_name())
    }
}

/// `round(1000 c)`, rejecting values that are not a multiple of `0.001`
/// within `1e-9` or do not fit in eight digits.
pub fn encode_c(c: &BigReal) -> Result<u64, CacheError> {
    let scaled = c.with_prec(c.prec().max(64) + 32) * 1000;
    let f = scaled.as_float();
    let nearest = f.to_integer().map(|i| BigReal::from_integer(&i, f.prec()));
    let Some(nearest) = nearest else {
        return Err(CacheError::Encoding(c.to_sci(12)));
    };
    let off = (&scaled - &nearest).abs();
    let limit = BigReal::parse("1e-9", 64).expect("literal");
    if off > limit || nearest < 0i64 || nearest >= 100_000_000i64 {
        return Err(CacheError::Encoding(c.to_sci(12)));
    }
    Ok(nearest.to_f64() as u64)
}

/// `data/{pro|obl}_{C8}_{MMM}_{NNN}_{tag}.txt`.
pub fn cache_path(kind: SpheroidalKind, c: &BigReal, m: u32, n: u32, tag: Tag) -> Result<PathBuf, CacheError> {
    Ok(CacheKey::new(kind, c, m, n, tag)?.relative_path())
}

#[derive(Clone, Debug, PartialEq)]
pub enum Payload {
    Scalar(BigReal),
    Indexed {
        /// Extra `# key value` header lines besides `prec`.
        meta: BTreeMap<String, String>,
        entries: Vec<(i64, BigReal)>,
        /// Entries after the `# eps` marker.
        tail: Option<Vec<(i64, BigReal)>>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CacheRecord {
    pub key: CacheKey,
    pub payload: Payload,
    /// Mantissa bits of the stored values.
    pub precision_bits: u32,
}

impl CacheRecord {
    /// Whether the record can serve a request whose values need `bits`.
    pub fn serves(&self, bits: u32) -> bool {
        self.precision_bits >= bits
    }

    /// Deterministic file contents.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let fmt = |v: &BigReal| v.with_prec(self.precision_bits).to_round_trip_string();
        match &self.payload {
            Payload::Scalar(v) => {
                let _ = writeln!(out, "{}", fmt(v));
                let _ = writeln!(out, "{}", self.precision_bits);
            }
            Payload::Indexed { meta, entries, tail } => {
                let _ = writeln!(out, "# prec {}", self.precision_bits);
                for (k, v) in meta {
                    let _ = writeln!(out, "# {k} {v}");
                }
                for (i, v) in entries {
                    let _ = writeln!(out, "{i} {}", fmt(v));
                }
                if let Some(tail) = tail {
                    let _ = writeln!(out, "# eps");
                    for (i, v) in tail {
                        let _ = writeln!(out, "{i} {}", fmt(v));
                    }
                }
            }
        }
        out.push_str("# end\n");
        out
    }

    pub fn parse(key: CacheKey, text: &str, path: &Path) -> Result<CacheRecord, CacheError> {
        let corrupt = |reason: &str| CacheError::Corrupt { path: path.to_path_buf(), reason: reason.to_string() };
        let mut lines: Vec<&str> = text.lines().collect();
        if !text.ends_with('\n') || lines.pop() != Some("# end") {
            return Err(corrupt("missing end marker"));
        }
        if lines.first().is_some_and(|l| !l.starts_with('#')) {
            // scalar
            if lines.len() != 2 {
                return Err(corrupt("scalar record needs a value and a precision line"));
            }
            let bits: u32 = lines[1].trim().parse().map_err(|_| corrupt("bad precision line"))?;
            let v = BigReal::parse(lines[0].trim(), bits.max(2)).ok_or_else(|| corrupt("bad value"))?;
            return Ok(CacheRecord { key, payload: Payload::Scalar(v), precision_bits: bits });
        }
        let mut bits = None;
        let mut meta = BTreeMap::new();
        let mut entries = Vec::new();
        let mut tail: Option<Vec<(i64, BigReal)>> = None;
        for line in lines {
            if let Some(h) = line.strip_prefix("# ") {
                let mut it = h.splitn(2, ' ');
                let k = it.next().unwrap_or_default();
                let v = it.next().unwrap_or_default();
                match k {
                    "prec" => bits = Some(v.parse::<u32>().map_err(|_| corrupt("bad prec header"))?),
                    "eps" => tail = Some(Vec::new()),
                    _ => {
                        meta.insert(k.to_string(), v.to_string());
                    }
                }
                continue;
            }
            let b = bits.ok_or_else(|| corrupt("entry before prec header"))?;
            let (i, v) = line.split_once(' ').ok_or_else(|| corrupt("bad entry line"))?;
            let i: i64 = i.parse().map_err(|_| corrupt("bad index"))?;
            let v = BigReal::parse(v.trim(), b.max(2)).ok_or_else(|| corrupt("bad value"))?;
            match tail.as_mut() {
                Some(t) => t.push((i, v)),
                None => entries.push((i, v)),
            }
        }
        let bits = bits.ok_or_else(|| corrupt("missing prec header"))?;
        Ok(CacheRecord { key, payload: Payload::Indexed { meta, entries, tail }, precision_bits: bits })
    }
}

/// Write `record` under `root`, replacing any previous file atomically.
pub fn save_record(root: &Path, record: &CacheRecord) -> Result<PathBuf, CacheError> {
    let path = root.join(record.key.relative_path());
    let dir = path.parent().expect("data directory");
    fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(".{}.{}.tmp", record.key.file_name(), std::process::id()));
    fs::write(&tmp, record.render())?;
    fs::rename(&tmp, &path)?;
    Ok(path)
}

pub fn load_record(root: &Path, key: &CacheKey) -> Result<CacheRecord, CacheError> {
    let path = root.join(key.relative_path());
    let text = match fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Err(CacheError::Absent(path)),
        Err(e) => return Err(e.into()),
    };
    CacheRecord::parse(key.clone(), &text, &path)
}

fn truncation_meta(t: &Truncation) -> BTreeMap<String, String> {
    let mut meta = BTreeMap::new();
    if let Some(n) = t.count {
        meta.insert("count".to_string(), n.to_string());
    }
    if let Some(f) = &t.floor {
        meta.insert("floor".to_string(), f.to_round_trip_string());
    }
    meta
}

fn truncation_from(meta: &BTreeMap<String, String>) -> Option<Truncation> {
    let count = match meta.get("count") {
        Some(s) => Some(s.parse().ok()?),
        None => None,
    };
    let floor = match meta.get("floor") {
        Some(s) => Some(BigReal::parse(s, 64)?),
        None => None,
    };
    Some(Truncation { count, floor })
}

/// Conversion between computed quantities and cache payloads.
pub trait Cacheable: Sized {
    fn to_payload(&self) -> Payload;
    fn from_payload(payload: &Payload, params: &Params) -> Option<Self>;
}

impl Cacheable for BigReal {
    fn to_payload(&self) -> Payload {
        Payload::Scalar(self.clone())
    }

    fn from_payload(payload: &Payload, _: &Params) -> Option<Self> {
        match payload {
            Payload::Scalar(v) => Some(v.clone()),
            _ => None,
        }
    }
}

fn contiguous(entries: &[(i64, BigReal)], first: i64, step: i64) -> Option<Vec<BigReal>> {
    let mut out = Vec::with_capacity(entries.len());
    for (k, (i, v)) in entries.iter().enumerate() {
        if *i != first + step * k as i64 {
            return None;
        }
        out.push(v.clone());
    }
    Some(out)
}

impl Cacheable for DrSet {
    fn to_payload(&self) -> Payload {
        Payload::Indexed {
            meta: truncation_meta(&self.truncation),
            entries: self.iter().map(|(r, d)| (r, d.clone())).collect(),
            tail: None,
        }
    }

    fn from_payload(payload: &Payload, params: &Params) -> Option<Self> {
        let Payload::Indexed { meta, entries, tail: None } = payload else { return None };
        let parity = params.parity();
        let entries = contiguous(entries, parity.p(), 2)?;
        if entries.is_empty() {
            return None;
        }
        Some(DrSet { parity, entries, truncation: truncation_from(meta)? })
    }
}

impl Cacheable for DrNegSet {
    fn to_payload(&self) -> Payload {
        Payload::Indexed {
            meta: truncation_meta(&self.truncation),
            entries: self.iter_plain().map(|(r, d)| (r, d.clone())).collect(),
            tail: Some(self.iter_eps().map(|(r, d)| (r, d.clone())).collect()),
        }
    }

    fn from_payload(payload: &Payload, params: &Params) -> Option<Self> {
        let Payload::Indexed { meta, entries, tail: Some(tail) } = payload else { return None };
        let parity = params.parity();
        let b = crate::coefficients::negative_bottom(params.m, parity);
        let plain = contiguous(entries, b, 2)?;
        if plain.len() as i64 != (-b + 1) / 2 {
            return None;
        }
        let eps = contiguous(tail, b - 2, -2)?;
        Some(DrNegSet { parity, m: params.m, plain, eps, truncation: truncation_from(meta)? })
    }
}

impl Cacheable for C2kSet {
    fn to_payload(&self) -> Payload {
        Payload::Indexed {
            meta: truncation_meta(&self.truncation),
            entries: self.entries.iter().enumerate().map(|(k, v)| (k as i64, v.clone())).collect(),
            tail: None,
        }
    }

    fn from_payload(payload: &Payload, params: &Params) -> Option<Self> {
        let Payload::Indexed { meta, entries, tail: None } = payload else { return None };
        Some(C2kSet { parity: params.parity(), entries: contiguous(entries, 0, 1)?, truncation: truncation_from(meta)? })
    }
}

impl Cacheable for B2rSet {
    fn to_payload(&self) -> Payload {
        let mut meta = truncation_meta(&self.truncation);
        meta.insert("crossover".to_string(), self.growth_crossover.to_string());
        meta.insert("check_residual".to_string(), format!("{:e}", self.check_residual));
        Payload::Indexed {
            meta,
            entries: self.entries.iter().enumerate().map(|(k, v)| (k as i64, v.clone())).collect(),
            tail: None,
        }
    }

    fn from_payload(payload: &Payload, _: &Params) -> Option<Self> {
        let Payload::Indexed { meta, entries, tail: None } = payload else { return None };
        Some(B2rSet {
            entries: contiguous(entries, 0, 1)?,
            growth_crossover: meta.get("crossover")?.parse().ok()?,
            check_residual: meta.get("check_residual")?.parse().ok()?,
            truncation: truncation_from(meta)?,
        })
    }
}

/// Cache rooted at a directory; files go to `<root>/data/`.
#[derive(Clone, Debug)]
pub struct Cache {
    pub root: PathBuf,
}

impl Cache {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Cache { root: root.into() }
    }

    pub fn save<T: Cacheable>(&self, params: &Params, tag: Tag, value: &T) -> Result<PathBuf, CacheError> {
        let record = CacheRecord {
            key: CacheKey::for_params(params, tag)?,
            payload: value.to_payload(),
            precision_bits: params.wp(),
        };
        save_record(&self.root, &record)
    }

    /// The cached value, or `None` when it is absent or was stored at a
    /// lower precision than `params` needs. Corrupt files are errors.
    pub fn load<T: Cacheable>(&self, params: &Params, tag: Tag) -> Result<Option<T>, CacheError> {
        let key = CacheKey::for_params(params, tag)?;
        let record = match load_record(&self.root, &key) {
            Ok(r) => r,
            Err(CacheError::Absent(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        if !record.serves(params.wp()) {
            return Ok(None);
        }
        let path = self.root.join(key.relative_path());
        T::from_payload(&record.payload, params)
            .map(Some)
            .ok_or_else(|| CacheError::Corrupt { path, reason: "payload does not match the quantity".into() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{compute_all, Floors};

    fn params(prec: u32) -> Params {
        Params::parse(SpheroidalKind::Oblate, "10", 1, 4, prec).unwrap()
    }

    #[test]
    fn file_names() {
        let c = BigReal::parse("10", 64).unwrap();
        let p = cache_path(SpheroidalKind::Prolate, &c, 0, 0, Tag::S1).unwrap();
        assert_eq!(p, Path::new("data/pro_00010000_000_000_S1.txt"));
        let c = BigReal::parse("2.5", 64).unwrap();
        let p = cache_path(SpheroidalKind::Oblate, &c, 12, 140, Tag::DrNeg).unwrap();
        assert_eq!(p, Path::new("data/obl_00002500_012_140_dr_neg.txt"));
        assert!(encode_c(&BigReal::parse("0.0001", 64).unwrap()).is_err());
        assert!(encode_c(&BigReal::parse("100000", 64).unwrap()).is_err());
    }

    #[test]
    fn tags_round_trip() {
        for t in Tag::ALL {
            assert_eq!(Tag::parse(t.as_str()), Some(t));
        }
    }

    #[test]
    fn records_round_trip_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let p = params(120);
        let set = compute_all(&p, &Floors::default()).unwrap();
        cache.save(&p, Tag::Lambda, &set.lambda.lambda).unwrap();
        cache.save(&p, Tag::Dr, &set.dr).unwrap();
        cache.save(&p, Tag::DrNeg, &set.dr_neg).unwrap();
        cache.save(&p, Tag::C2k, &set.c2k).unwrap();
        cache.save(&p, Tag::B2r, set.b2r.as_ref().unwrap()).unwrap();
        assert_eq!(cache.load::<BigReal>(&p, Tag::Lambda).unwrap().unwrap(), set.lambda.lambda);
        assert_eq!(cache.load::<DrSet>(&p, Tag::Dr).unwrap().unwrap(), set.dr);
        assert_eq!(cache.load::<DrNegSet>(&p, Tag::DrNeg).unwrap().unwrap(), set.dr_neg);
        assert_eq!(cache.load::<C2kSet>(&p, Tag::C2k).unwrap().unwrap(), set.c2k);
        let b = cache.load::<B2rSet>(&p, Tag::B2r).unwrap().unwrap();
        assert_eq!(b.entries, set.b2r.as_ref().unwrap().entries);
    }

    #[test]
    fn higher_precision_requests_miss() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let p = params(64);
        cache.save(&p, Tag::N, &BigReal::one(p.wp())).unwrap();
        assert!(cache.load::<BigReal>(&p, Tag::N).unwrap().is_some());
        assert!(cache.load::<BigReal>(&p.with_prec(63), Tag::N).unwrap().is_some());
        assert!(cache.load::<BigReal>(&p.with_prec(65), Tag::N).unwrap().is_none());
    }

    #[test]
    fn absent_and_corrupt_are_distinct() {
        let dir = tempfile::tempdir().unwrap();
        let p = params(64);
        let key = CacheKey::for_params(&p, Tag::F).unwrap();
        assert!(matches!(load_record(dir.path(), &key), Err(CacheError::Absent(_))));
        let cache = Cache::new(dir.path());
        let path = cache.save(&p, Tag::F, &BigReal::ratio(1, 3, p.wp())).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        fs::write(&path, &text[..text.len() / 2]).unwrap();
        assert!(matches!(load_record(dir.path(), &key), Err(CacheError::Corrupt { .. })));
        assert!(matches!(cache.load::<BigReal>(&p, Tag::F), Err(CacheError::Corrupt { .. })));
    }

    #[test]
    fn rendering_is_deterministic() {
        let p = params(80);
        let rec = CacheRecord {
            key: CacheKey::for_params(&p, Tag::K1).unwrap(),
            payload: Payload::Scalar(BigReal::ratio(2, 7, p.wp())),
            precision_bits: p.wp(),
        };
        let text = rec.render();
        let back = CacheRecord::parse(rec.key.clone(), &text, Path::new("x")).unwrap();
        assert_eq!(back, rec);
        assert_eq!(back.render(), text);
    }
}
