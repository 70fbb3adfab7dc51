use cohsys::{classify, decompose, AlphaInterval, Status, Verdict};
use serde::Serialize;

use crate::ranges::IntRange;

#[derive(Debug, PartialEq, Eq, Serialize)]
pub struct Row {
    pub n: i64,
    pub d: i64,
    pub k: i64,
    pub beta: i64,
    pub a: i64,
    pub t: i64,
    pub l: Option<i64>,
    pub m: Option<i64>,
    pub lower: String,
    pub upper: String,
    pub status: String,
}

/// The interval shown in the table: the exact stable interval when known,
/// otherwise the necessary region.
fn shown_interval(v: &Verdict) -> &AlphaInterval {
    match v.status {
        Status::ExactNonEmpty => &v.stable_interval,
        Status::PartiallyKnown | Status::NecessaryOnly => &v.necessary_region,
        Status::Empty => &AlphaInterval::Empty,
    }
}

pub fn rows(n: &IntRange, d: &IntRange, k: &IntRange) -> cohsys::Result<Vec<Row>> {
    let mut out = Vec::new();
    for n in n.iter() {
        for d in d.iter() {
            for k in k.iter() {
                let v = classify(n, d, k)?;
                let x = decompose(n, d, k)?;
                let shown = shown_interval(&v);
                out.push(Row {
                    n,
                    d,
                    k,
                    beta: v.beta,
                    a: x.a,
                    t: x.t,
                    l: x.l,
                    m: x.m,
                    lower: shown.lower_string(),
                    upper: shown.upper_string(),
                    status: v.status.to_string(),
                });
            }
        }
    }
    Ok(out)
}

pub fn to_csv(rows: &[Row]) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "d", "k", "beta", "a", "t", "l", "m", "lower", "upper", "status"])?;
    for r in rows {
        w.serialize((r.n, r.d, r.k, r.beta, r.a, r.t, r.l, r.m, &r.lower, &r.upper, &r.status))?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}
