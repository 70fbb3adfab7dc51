//! Non-emptiness of the moduli spaces `G(alpha; n, d, k)` as a decision
//! procedure.
//!
//! Exact answers exist for `k = 1`, `k = 2` and `n = k = 2`; for
//! `k = n - 1`, `k = n` and `k = n + 1` only partial information is known,
//! and every other `k` gets the necessary region alone.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmath::Rational;
use crate::interval::AlphaInterval;
use crate::numerology::{decompose, Numerology};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    ExactNonEmpty,
    Empty,
    NecessaryOnly,
    PartiallyKnown,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Status::ExactNonEmpty => "ExactNonEmpty",
            Status::Empty => "Empty",
            Status::NecessaryOnly => "NecessaryOnly",
            Status::PartiallyKnown => "PartiallyKnown",
        };
        f.write_str(s)
    }
}

/// Which case of the classification produced a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    OneSection,
    TwoSections,
    RankTwoTwoSections,
    CorankOne,
    SquareSections,
    OneExtraSection,
    General,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemistableNote {
    pub interval: AlphaInterval,
    pub note: String,
}

/// Where an unknown lower endpoint of the stable range is known to lie.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EndpointRange {
    pub at_least: Rational,
    /// `None` when nothing better than "finite" is known.
    pub at_most: Option<Rational>,
}

/// The classification answer for one triple.
///
/// `stable_interval` is the exact set of alpha with non-empty moduli for
/// `ExactNonEmpty`, a proven-sufficient region for `PartiallyKnown` (empty
/// when no explicit region is known), and empty otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub n: i64,
    pub d: i64,
    pub k: i64,
    pub status: Status,
    pub rule: Rule,
    pub beta: i64,
    pub stable_interval: AlphaInterval,
    pub necessary_region: AlphaInterval,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower_endpoint: Option<EndpointRange>,
    pub semistable_notes: Vec<SemistableNote>,
    pub notes: Vec<String>,
}

fn check_triple(n: i64, k: i64) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("rank n = {n} must be at least 2")));
    }
    if k < 1 {
        return Err(Error::InvalidInput(format!("k = {k} must be at least 1")));
    }
    Ok(())
}

/// `d/(n-k) - m n/(k (n-k))`, the upper bound for `0 < k < n`.
fn upper_bound(x: &Numerology) -> Option<Rational> {
    let m = x.m?;
    let (n, d, k) = (x.n, x.d, x.k);
    Some(Rational::new(d, n - k) - Rational::new(m * n, k * (n - k)))
}

/// Intersection of every necessary condition for non-emptiness.
pub fn necessary_region(n: i64, d: i64, k: i64) -> Result<AlphaInterval> {
    check_triple(n, k)?;
    let x = decompose(n, d, k)?;
    if d <= 0 || x.beta < 0 {
        return Ok(AlphaInterval::Empty);
    }
    let lower = Rational::new(x.t, k).max(Rational::zero());
    Ok(match upper_bound(&x) {
        Some(upper) => AlphaInterval::open(lower, upper),
        None => AlphaInterval::open_ray(lower),
    })
}

/// `d >= n(n-2)/2 + 3/2`, compared exactly.
fn two_section_brill_noether(n: i64, d: i64) -> bool {
    Rational::from_integer(d) >= Rational::new(n * (n - 2), 2) + Rational::new(3, 2)
}

fn two_section_semistable_notes(n: i64, d: i64) -> Vec<SemistableNote> {
    let mut notes = Vec::new();
    if (n, d) == (4, 6) {
        notes.push(SemistableNote {
            interval: AlphaInterval::closed(Rational::from_integer(1), Rational::from_integer(3)),
            note: "semistable [1,3]".into(),
        });
    }
    if (n, d) == (3, 2) {
        notes.push(SemistableNote {
            interval: AlphaInterval::closed(Rational::from_integer(2), Rational::from_integer(2)),
            note: "semistable only at alpha = 2".into(),
        });
    }
    // E = O(r-1)^(2r)
    if n >= 4 && n % 2 == 0 {
        let r = n / 2;
        if d == 2 * r * (r - 1) {
            notes.push(SemistableNote {
                interval: AlphaInterval::closed(Rational::zero(), Rational::from_integer(r)),
                note: format!("semistable [0,{r}], never stable"),
            });
        }
    }
    notes
}

pub fn classify(n: i64, d: i64, k: i64) -> Result<Verdict> {
    check_triple(n, k)?;
    let x = decompose(n, d, k)?;
    let necessary = necessary_region(n, d, k)?;
    let mut v = Verdict {
        n,
        d,
        k,
        status: Status::Empty,
        rule: Rule::General,
        beta: x.beta,
        stable_interval: AlphaInterval::Empty,
        necessary_region: necessary.clone(),
        lower_endpoint: None,
        semistable_notes: Vec::new(),
        notes: Vec::new(),
    };
    let t = Rational::from_integer(x.t);

    if k == 1 {
        v.rule = Rule::OneSection;
        let interval = AlphaInterval::open(t, upper_bound(&x).expect("k < n"));
        if !interval.is_empty() {
            v.status = Status::ExactNonEmpty;
            v.stable_interval = interval;
        }
    } else if k == 2 && n >= 3 {
        v.rule = Rule::TwoSections;
        let interval = AlphaInterval::open(t / Rational::from_integer(2), upper_bound(&x).expect("k < n"));
        let brill_noether = two_section_brill_noether(n, d);
        if (n, d) == (4, 6) {
            v.notes.push("exceptional pair (n,d) = (4,6): no stable systems".into());
        }
        if !interval.is_empty() && brill_noether && (n, d) != (4, 6) {
            v.status = Status::ExactNonEmpty;
            v.stable_interval = interval;
        } else {
            v.semistable_notes = two_section_semistable_notes(n, d);
        }
    } else if k == 2 && n == 2 {
        v.rule = Rule::RankTwoTwoSections;
        if d > 2 {
            v.status = Status::ExactNonEmpty;
            v.stable_interval = AlphaInterval::open_ray(t / Rational::from_integer(2));
        }
    } else if k == n - 1 {
        v.rule = Rule::CorankOne;
        if d >= n && !necessary.is_empty() {
            v.status = Status::PartiallyKnown;
            v.lower_endpoint =
                Some(EndpointRange { at_least: Rational::new(x.t, k), at_most: Some(Rational::from_integer(d)) });
            v.notes.push(format!("non-empty for alpha just below the exact upper endpoint {d}"));
        }
    } else if k == n {
        v.rule = Rule::SquareSections;
        if d > n && !necessary.is_empty() {
            v.status = Status::PartiallyKnown;
            v.lower_endpoint = Some(EndpointRange { at_least: Rational::new(x.t, k), at_most: None });
            v.notes.push("non-empty for all large alpha; no upper bound".into());
        }
    } else if k == n + 1 {
        v.rule = Rule::OneExtraSection;
        if d >= n && !necessary.is_empty() {
            v.status = Status::PartiallyKnown;
            v.stable_interval = AlphaInterval::open_ray(t.clone());
            if x.t == 0 {
                v.notes.push("lower endpoint 0 is exact".into());
            } else {
                v.lower_endpoint = Some(EndpointRange { at_least: Rational::new(x.t, n + 1), at_most: Some(t) });
            }
        }
    } else if !necessary.is_empty() {
        v.status = Status::NecessaryOnly;
    }

    if v.status == Status::Empty {
        v.stable_interval = AlphaInterval::Empty;
    }
    Ok(v)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossCheckItem {
    pub name: String,
    pub applicable: bool,
    pub agree: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossCheckReport {
    pub n: i64,
    pub d: i64,
    pub items: Vec<CrossCheckItem>,
    pub exceptional: Vec<String>,
    pub all_agree: bool,
}

/// Checks that the case formulas agree wherever their ranges of validity
/// overlap for the given `(n, d)`.
pub fn cross_check(n: i64, d: i64) -> Result<CrossCheckReport> {
    check_triple(n, 1)?;
    let mut items = Vec::new();

    // k = 2 = n - 1: the two-section upper bound against the corank-one bound d
    {
        let applicable = n == 3;
        let (agree, detail) = if applicable {
            let x = decompose(n, d, 2)?;
            let ub = upper_bound(&x).expect("k < n");
            (ub == Rational::from_integer(d), format!("two-section upper bound {ub} vs corank-one bound {d}"))
        } else {
            (true, "only for n = 3".into())
        };
        items.push(CrossCheckItem { name: "two_section_upper_bound_vs_corank_one".into(), applicable, agree, detail });
    }
    {
        let applicable = n == 3;
        let (agree, detail) = if applicable {
            let exact = classify(n, d, 2)?.status == Status::ExactNonEmpty;
            (exact == (d >= n), format!("two-section non-empty: {exact}; corank-one criterion d >= n: {}", d >= n))
        } else {
            (true, "only for n = 3".into())
        };
        items.push(CrossCheckItem { name: "two_section_vs_corank_one_nonemptiness".into(), applicable, agree, detail });
    }
    // k = 1 = n - 1
    {
        let applicable = n == 2;
        let (agree, detail) = if applicable {
            let v = classify(n, d, 1)?;
            let x = decompose(n, d, 1)?;
            let ub = upper_bound(&x).expect("k < n");
            let nonempty = v.status == Status::ExactNonEmpty;
            (
                ub == Rational::from_integer(d) && nonempty == (d >= n),
                format!("one-section upper bound {ub}, non-empty {nonempty}; corank-one: bound {d}, d >= n {}", d >= n),
            )
        } else {
            (true, "only for n = 2".into())
        };
        items.push(CrossCheckItem { name: "one_section_vs_corank_one".into(), applicable, agree, detail });
    }
    // Brill-Noether threshold for k = 2 written two ways
    {
        let corollary = Rational::new(n * n - 1, 2) - Rational::from_integer(n - 2);
        let two_section = Rational::new(n * (n - 2), 2) + Rational::new(3, 2);
        let beta_ok = decompose(n, d, 2)?.beta >= 0;
        let agree = corollary == two_section && beta_ok == two_section_brill_noether(n, d);
        items.push(CrossCheckItem {
            name: "brill_noether_threshold_k2".into(),
            applicable: true,
            agree,
            detail: format!("(n^2-1)/2 - (n-2) = {corollary}, n(n-2)/2 + 3/2 = {two_section}"),
        });
    }
    // every verdict sits inside its necessary region
    {
        let mut bad = Vec::new();
        for k in 1..=n + 2 {
            let v = classify(n, d, k)?;
            if !v.stable_interval.is_subset_of(&v.necessary_region) {
                bad.push(k);
            }
        }
        items.push(CrossCheckItem {
            name: "stable_within_necessary".into(),
            applicable: true,
            agree: bad.is_empty(),
            detail: if bad.is_empty() { format!("k = 1..={}", n + 2) } else { format!("violations at k = {bad:?}") },
        });
    }

    let mut exceptional = Vec::new();
    if (n, d) == (4, 6) {
        exceptional.push("(n,d) = (4,6): no stable systems with k = 2 although the bounds allow them".into());
    }
    if (n, d) == (3, 2) {
        exceptional.push("(n,d) = (3,2): k = 2 systems are semistable only at alpha = 2".into());
    }
    if n >= 4 && n % 2 == 0 && d == (n / 2) * (n - 2) {
        exceptional.push(format!("(n,d) = ({n},{d}): k = 2 systems are semistable on [0,{}] but never stable", n / 2));
    }
    let all_agree = items.iter().all(|i| i.agree);
    Ok(CrossCheckReport { n, d, items, exceptional, all_agree })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn necessary_region_examples() {
        assert_eq!(necessary_region(5, 13, 2).unwrap(), AlphaInterval::open(r(1, 1), r(7, 2)));
        assert_eq!(necessary_region(3, 7, 1).unwrap(), AlphaInterval::Empty);
        assert_eq!(necessary_region(4, -1, 2).unwrap(), AlphaInterval::Empty);
        assert!(necessary_region(1, 5, 1).is_err());
        assert!(necessary_region(3, 5, 0).is_err());
    }

    #[test]
    fn classify_examples() {
        let v = classify(4, 6, 2).unwrap();
        assert_eq!(v.status, Status::Empty);
        assert_eq!(v.semistable_notes.len(), 1);
        assert_eq!(v.semistable_notes[0].interval, AlphaInterval::closed(r(1, 1), r(3, 1)));

        let v = classify(2, 3, 1).unwrap();
        assert_eq!(v.status, Status::ExactNonEmpty);
        assert_eq!(v.stable_interval, AlphaInterval::open(r(1, 1), r(3, 1)));

        let v = classify(3, 3, 4).unwrap();
        assert_eq!(v.status, Status::PartiallyKnown);
        assert_eq!(v.stable_interval, AlphaInterval::open_ray(r(0, 1)));
        assert_eq!(v.beta, 0);
        assert!(v.lower_endpoint.is_none());
    }

    #[test]
    fn exceptional_two_section_cases() {
        let v = classify(3, 2, 2).unwrap();
        assert_eq!(v.status, Status::Empty);
        assert_eq!(v.semistable_notes[0].interval, AlphaInterval::closed(r(2, 1), r(2, 1)));

        let v = classify(4, 4, 2).unwrap();
        assert_eq!(v.status, Status::Empty);
        assert_eq!(v.semistable_notes[0].interval, AlphaInterval::closed(r(0, 1), r(2, 1)));
    }

    #[test]
    fn two_section_threshold_is_exact() {
        // n = 5: n(n-2)/2 + 3/2 = 9, so d = 9 passes and d = 8 fails
        assert!(two_section_brill_noether(5, 9));
        assert!(!two_section_brill_noether(5, 8));
        assert_eq!(classify(5, 8, 2).unwrap().status, Status::Empty);
        // n = 4: threshold 5.5
        assert!(!two_section_brill_noether(4, 5));
        assert!(two_section_brill_noether(4, 6));
    }

    #[test]
    fn rank_two_two_sections() {
        assert_eq!(classify(2, 2, 2).unwrap().status, Status::Empty);
        let v = classify(2, 5, 2).unwrap();
        assert_eq!(v.status, Status::ExactNonEmpty);
        assert_eq!(v.stable_interval, AlphaInterval::open_ray(r(1, 2)));
        assert_eq!(classify(2, 4, 2).unwrap().stable_interval, AlphaInterval::open_ray(r(0, 1)));
    }

    #[test]
    fn partial_cases() {
        let v = classify(5, 7, 4).unwrap();
        assert_eq!((v.status, v.rule), (Status::PartiallyKnown, Rule::CorankOne));
        assert_eq!(v.necessary_region.upper(), Some(&r(7, 1)));
        assert_eq!(classify(5, 4, 4).unwrap().status, Status::Empty);

        let v = classify(4, 6, 4).unwrap();
        assert_eq!((v.status, v.rule), (Status::PartiallyKnown, Rule::SquareSections));
        assert!(!v.necessary_region.is_bounded_above());
        assert_eq!(classify(4, 4, 4).unwrap().status, Status::Empty);

        let v = classify(3, 5, 4).unwrap();
        assert_eq!(v.stable_interval, AlphaInterval::open_ray(r(1, 1)));
        let range = v.lower_endpoint.unwrap();
        assert_eq!((range.at_least, range.at_most), (r(1, 4), Some(r(1, 1))));
    }

    #[test]
    fn general_k_is_necessary_only() {
        let v = classify(6, 20, 3).unwrap();
        assert_eq!(v.status, Status::NecessaryOnly);
        assert!(v.stable_interval.is_empty());
        assert!(!v.necessary_region.is_empty());
        assert_eq!(classify(6, 20, 9).unwrap().status, Status::NecessaryOnly);
    }

    #[test]
    fn cross_check_examples() {
        let rep = cross_check(3, 9).unwrap();
        assert!(rep.all_agree);
        assert!(rep.items[0].applicable && rep.items[0].agree);
        let rep = cross_check(4, 6).unwrap();
        assert!(rep.all_agree);
        assert_eq!(rep.exceptional.len(), 1);
    }

    #[test]
    fn sweep_invariants() {
        for n in 2..=8 {
            for d in -5..=40 {
                for k in 1..=10 {
                    let v = classify(n, d, k).unwrap();
                    assert!(v.stable_interval.is_subset_of(&v.necessary_region), "n={n} d={d} k={k}");
                    if k <= 2 {
                        assert!(v.stable_interval.is_open());
                    }
                    if v.status == Status::ExactNonEmpty {
                        assert!(k <= 2);
                    }
                    assert_eq!(
                        v.status == Status::Empty,
                        v.stable_interval.is_empty()
                            && v.status != Status::NecessaryOnly
                            && v.status != Status::PartiallyKnown
                    );
                }
                assert!(cross_check(n, d).unwrap().all_agree, "n={n} d={d}");
            }
        }
    }

    #[test]
    fn one_section_matches_degree_list() {
        for n in 2..=6 {
            let valid = crate::numerology::valid_degrees_k1(n, 40);
            for d in -5..=40 {
                let nonempty = classify(n, d, 1).unwrap().status == Status::ExactNonEmpty;
                assert_eq!(nonempty, valid.contains(&d), "n={n} d={d}");
            }
        }
    }
}
