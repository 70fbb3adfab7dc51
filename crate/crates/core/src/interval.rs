//! Exact intervals of alpha values with open/closed ends.

use std::fmt;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::exactmath::Rational;

/// An interval on the real line with exact rational endpoints. `None`
/// endpoints are infinite (and always open). Empty intervals have a single
/// canonical representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlphaInterval {
    Empty,
    Range { lower: Option<Rational>, lower_open: bool, upper: Option<Rational>, upper_open: bool },
}

impl AlphaInterval {
    pub fn new(lower: Option<Rational>, lower_open: bool, upper: Option<Rational>, upper_open: bool) -> Self {
        let lower_open = lower_open || lower.is_none();
        let upper_open = upper_open || upper.is_none();
        if let (Some(lo), Some(hi)) = (&lower, &upper) {
            if lo > hi || (lo == hi && (lower_open || upper_open)) {
                return AlphaInterval::Empty;
            }
        }
        AlphaInterval::Range { lower, lower_open, upper, upper_open }
    }

    pub fn open(lower: Rational, upper: Rational) -> Self {
        Self::new(Some(lower), true, Some(upper), true)
    }

    pub fn closed(lower: Rational, upper: Rational) -> Self {
        Self::new(Some(lower), false, Some(upper), false)
    }

    /// `(lower, +inf)`.
    pub fn open_ray(lower: Rational) -> Self {
        Self::new(Some(lower), true, None, true)
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, AlphaInterval::Empty)
    }

    pub fn lower(&self) -> Option<&Rational> {
        match self {
            AlphaInterval::Range { lower, .. } => lower.as_ref(),
            AlphaInterval::Empty => None,
        }
    }

    pub fn upper(&self) -> Option<&Rational> {
        match self {
            AlphaInterval::Range { upper, .. } => upper.as_ref(),
            AlphaInterval::Empty => None,
        }
    }

    pub fn is_open(&self) -> bool {
        match self {
            AlphaInterval::Range { lower_open, upper_open, .. } => *lower_open && *upper_open,
            AlphaInterval::Empty => true,
        }
    }

    pub fn is_bounded_above(&self) -> bool {
        match self {
            AlphaInterval::Range { upper, .. } => upper.is_some(),
            AlphaInterval::Empty => true,
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let AlphaInterval::Range { lower, lower_open, upper, upper_open } = self else {
            return false;
        };
        let above = match lower {
            None => true,
            Some(lo) => x > lo || (!lower_open && x == lo),
        };
        let below = match upper {
            None => true,
            Some(hi) => x < hi || (!upper_open && x == hi),
        };
        above && below
    }

    pub fn intersect(&self, other: &AlphaInterval) -> AlphaInterval {
        let (
            AlphaInterval::Range { lower: l1, lower_open: lo1, upper: u1, upper_open: uo1 },
            AlphaInterval::Range { lower: l2, lower_open: lo2, upper: u2, upper_open: uo2 },
        ) = (self, other)
        else {
            return AlphaInterval::Empty;
        };
        let (lower, lower_open) = match (l1, l2) {
            (None, _) => (l2.clone(), *lo2),
            (_, None) => (l1.clone(), *lo1),
            (Some(a), Some(b)) if a > b => (l1.clone(), *lo1),
            (Some(a), Some(b)) if b > a => (l2.clone(), *lo2),
            _ => (l1.clone(), *lo1 || *lo2),
        };
        let (upper, upper_open) = match (u1, u2) {
            (None, _) => (u2.clone(), *uo2),
            (_, None) => (u1.clone(), *uo1),
            (Some(a), Some(b)) if a < b => (u1.clone(), *uo1),
            (Some(a), Some(b)) if b < a => (u2.clone(), *uo2),
            _ => (u1.clone(), *uo1 || *uo2),
        };
        AlphaInterval::new(lower, lower_open, upper, upper_open)
    }

    pub fn is_subset_of(&self, other: &AlphaInterval) -> bool {
        self.intersect(other) == *self
    }

    /// `count` points strictly inside the interval, evenly spread over the
    /// finite part (or over a unit-width stretch past a finite lower end).
    pub fn interior_points(&self, count: usize) -> Vec<Rational> {
        let AlphaInterval::Range { lower, upper, .. } = self else {
            return Vec::new();
        };
        let (lo, hi) = match (lower, upper) {
            (Some(lo), Some(hi)) => (lo.clone(), hi.clone()),
            (Some(lo), None) => (lo.clone(), lo + Rational::from_integer(count as i64 + 1)),
            (None, Some(hi)) => (hi - Rational::from_integer(count as i64 + 1), hi.clone()),
            (None, None) => (Rational::zero(), Rational::from_integer(count as i64 + 1)),
        };
        if lo == hi {
            // a closed single point
            return vec![lo; count.min(1)];
        }
        let width = &hi - &lo;
        (0..count).map(|i| &lo + &width * Rational::new(2 * i as i64 + 1, 2 * count as i64)).collect()
    }

    /// A representative interior point: the midpoint, or `lower + 1` on a ray.
    pub fn representative(&self) -> Option<Rational> {
        match self {
            AlphaInterval::Empty => None,
            AlphaInterval::Range { lower: Some(lo), upper: Some(hi), .. } => Some(lo.midpoint(hi)),
            AlphaInterval::Range { lower: Some(lo), upper: None, .. } => Some(lo + Rational::one()),
            AlphaInterval::Range { lower: None, upper: Some(hi), .. } => Some(hi - Rational::one()),
            AlphaInterval::Range { lower: None, upper: None, .. } => Some(Rational::zero()),
        }
    }

    pub fn lower_string(&self) -> String {
        match self {
            AlphaInterval::Empty => String::new(),
            AlphaInterval::Range { lower, .. } => lower.as_ref().map_or("-inf".into(), |r| r.to_string()),
        }
    }

    pub fn upper_string(&self) -> String {
        match self {
            AlphaInterval::Empty => String::new(),
            AlphaInterval::Range { upper, .. } => upper.as_ref().map_or("inf".into(), |r| r.to_string()),
        }
    }
}

impl fmt::Display for AlphaInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaInterval::Empty => write!(f, "empty"),
            AlphaInterval::Range { lower_open, upper_open, .. } => write!(
                f,
                "{}{}, {}{}",
                if *lower_open { '(' } else { '[' },
                self.lower_string(),
                self.upper_string(),
                if *upper_open { ')' } else { ']' },
            ),
        }
    }
}

impl Serialize for AlphaInterval {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            AlphaInterval::Empty => {
                let mut map = serializer.serialize_map(Some(1))?;
                map.serialize_entry("empty", &true)?;
                map.end()
            }
            AlphaInterval::Range { lower_open, upper_open, .. } => {
                let mut map = serializer.serialize_map(Some(5))?;
                map.serialize_entry("empty", &false)?;
                map.serialize_entry("lower", &self.lower_string())?;
                map.serialize_entry("lower_open", lower_open)?;
                map.serialize_entry("upper", &self.upper_string())?;
                map.serialize_entry("upper_open", upper_open)?;
                map.end()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn degenerate_ranges_normalize_to_empty() {
        assert!(AlphaInterval::open(r(2, 1), r(2, 1)).is_empty());
        assert!(AlphaInterval::open(r(3, 1), r(2, 1)).is_empty());
        assert!(!AlphaInterval::closed(r(2, 1), r(2, 1)).is_empty());
    }

    #[test]
    fn containment_respects_openness() {
        let i = AlphaInterval::open(r(1, 1), r(7, 2));
        assert!(!i.contains(&r(1, 1)));
        assert!(i.contains(&r(3, 1)));
        assert!(!i.contains(&r(7, 2)));
        let c = AlphaInterval::closed(r(1, 1), r(3, 1));
        assert!(c.contains(&r(1, 1)) && c.contains(&r(3, 1)));
        assert!(AlphaInterval::open_ray(r(0, 1)).contains(&r(1000, 1)));
    }

    #[test]
    fn subset_and_intersection() {
        let a = AlphaInterval::open(r(1, 1), r(3, 1));
        let b = AlphaInterval::open_ray(r(1, 2));
        assert!(a.is_subset_of(&b));
        assert!(!b.is_subset_of(&a));
        assert!(AlphaInterval::Empty.is_subset_of(&a));
        let closed = AlphaInterval::closed(r(1, 1), r(3, 1));
        assert!(a.is_subset_of(&closed));
        assert!(!closed.is_subset_of(&a));
        assert_eq!(a.intersect(&AlphaInterval::open(r(2, 1), r(5, 1))), AlphaInterval::open(r(2, 1), r(3, 1)));
    }

    #[test]
    fn interior_points_stay_inside() {
        let i = AlphaInterval::open(r(1, 1), r(3, 1));
        let pts = i.interior_points(4);
        assert_eq!(pts.len(), 4);
        assert!(pts.iter().all(|p| i.contains(p)));
        let ray = AlphaInterval::open_ray(r(1, 2));
        assert!(ray.interior_points(6).iter().all(|p| ray.contains(p)));
    }

    #[test]
    fn display_and_json() {
        let i = AlphaInterval::open(r(1, 1), r(7, 2));
        assert_eq!(i.to_string(), "(1, 7/2)");
        assert_eq!(AlphaInterval::open_ray(r(0, 1)).to_string(), "(0, inf)");
        let json = serde_json::to_value(&i).unwrap();
        assert_eq!(json["lower"], "1");
        assert_eq!(json["upper"], "7/2");
        assert_eq!(json["upper_open"], true);
        assert_eq!(serde_json::to_value(AlphaInterval::Empty).unwrap()["empty"], true);
    }
}
