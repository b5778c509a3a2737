use crate::numerics::BigReal;

/// How far an adaptive coefficient family is carried.
///
/// With both a count and a floor the larger of the two stopping points wins.
/// With neither, a floor of `2^-prec` is used.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Truncation {
    pub count: Option<usize>,
    pub floor: Option<BigReal>,
}

impl Truncation {
    pub fn count(n: usize) -> Self {
        Truncation { count: Some(n), floor: None }
    }

    pub fn floor(f: BigReal) -> Self {
        Truncation { count: None, floor: Some(f) }
    }

    /// Floor given as a decimal literal such as `"1e-300"`.
    pub fn floor_str(s: &str) -> Option<Self> {
        BigReal::parse(s, 64).map(Truncation::floor)
    }

    pub fn with_count(mut self, n: usize) -> Self {
        self.count = Some(n);
        self
    }

    pub(crate) fn effective_floor(&self, prec: u32) -> Option<BigReal> {
        match (&self.floor, self.count) {
            (Some(f), _) => Some(f.clone()),
            (None, Some(_)) => None,
            (None, None) => Some(BigReal::pow2(-(prec as i32), 64)),
        }
    }

    /// Smaller floor of the two, used when one family has to outlast another.
    pub(crate) fn min_floor(&self, prec: u32) -> BigReal {
        self.effective_floor(prec)
            .unwrap_or_else(|| BigReal::pow2(-(prec as i32), 64))
    }

    /// Number of leading entries to keep, or `None` when `values` is too
    /// short to decide. Floor checks start at `from`.
    ///
    /// The floor rule stops at the first entry below the floor whose
    /// successor is below the floor as well.
    pub(crate) fn keep(&self, values: &[BigReal], from: usize, prec: u32) -> Option<usize> {
        let by_count = self.count.unwrap_or(0);
        if by_count > values.len() {
            return None;
        }
        let by_floor = match self.effective_floor(prec) {
            None => 0,
            Some(f) => {
                let mut found = None;
                for i in from..values.len().saturating_sub(1) {
                    if values[i].cmp_abs(&f).is_lt() && values[i + 1].cmp_abs(&f).is_lt() {
                        found = Some(i + 1);
                        break;
                    }
                }
                found?
            }
        };
        Some(by_count.max(by_floor).max(1))
    }
}
