use std::str::FromStr;

/// An inclusive integer range written `a..b`, `a..=b` or `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntRange {
    pub lo: i64,
    pub hi: i64,
}

impl IntRange {
    pub fn bounds(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }
}

impl FromStr for IntRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let parse = |t: &str| t.trim().parse::<i64>().map_err(|_| format!("bad range bound {t:?} in {s:?}"));
        let (lo, hi) = match s.split_once("..") {
            Some((lo, hi)) => (parse(lo)?, parse(hi.strip_prefix('=').unwrap_or(hi))?),
            None => {
                let v = parse(s)?;
                (v, v)
            }
        };
        if lo > hi {
            return Err(format!("empty range {s:?}"));
        }
        Ok(IntRange { lo, hi })
    }
}
