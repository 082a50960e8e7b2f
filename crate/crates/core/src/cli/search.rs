use std::cmp::Ordering;

use rayon::prelude::*;

use crate::cwef::min_weights_w2;
use crate::pccc::{binomial, union_bound_term, w2_slice, PcccConfig};
use crate::puncture::{
    classify, default_probe_length, Classification, PcccPunctureSet, PunctureRow,
};
use crate::{Error, Rate, Result, RscCode};

pub const MAX_SEARCH_PERIOD: usize = 12;
/// Largest number of rate-feasible row triples the search will enumerate.
pub const MAX_SEARCH_CANDIDATES: u128 = 1 << 22;

#[derive(Clone, Debug, PartialEq)]
pub struct SearchCandidate {
    pub set: PcccPunctureSet,
    pub d_free_eff: u32,
    pub p2: f64,
    pub classification: Classification,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutcome {
    /// Row triples meeting the target rate.
    pub candidates: usize,
    /// Of those, how many were discarded as catastrophic.
    pub catastrophic: usize,
    /// The best survivors in rank order.
    pub ranked: Vec<SearchCandidate>,
}

fn row(mask: u64, period: usize, offset: usize) -> PunctureRow {
    PunctureRow::new((0..period).map(|i| mask >> (offset + i) & 1 == 1).collect())
        .expect("period >= 1")
}

fn key(set: &PcccPunctureSet) -> (String, String, String) {
    (
        set.sys.to_string(),
        set.par1.to_string(),
        set.par2.to_string(),
    )
}

/// Rank order: larger `d_free_eff`, then smaller `P(2)`, then rows.
pub fn rank_order(a: &SearchCandidate, b: &SearchCandidate) -> Ordering {
    b.d_free_eff
        .cmp(&a.d_free_eff)
        .then(a.p2.total_cmp(&b.p2))
        .then_with(|| key(&a.set).cmp(&key(&b.set)))
}

/// Every `(sys, par1, par2)` triple of period `period` with exactly the
/// target rate, minus the catastrophic ones, ranked by [`rank_order`]; the
/// first `top` are returned.
pub fn search_patterns(
    code1: &RscCode,
    code2: &RscCode,
    rate: Rate,
    period: usize,
    n: usize,
    ebn0_db: f64,
    top: usize,
) -> Result<SearchOutcome> {
    if period == 0 || period > MAX_SEARCH_PERIOD {
        return Err(Error::Domain(format!(
            "period {period} outside 1..={MAX_SEARCH_PERIOD}"
        )));
    }
    if rate >= Rate::from_integer(1) || *rate.numer() == 0 {
        return Err(Error::Domain(format!(
            "rate {rate} must lie strictly between 0 and 1"
        )));
    }
    if n < code1.period().max(code2.period()) + 1 {
        return Err(Error::Domain(format!(
            "N = {n} leaves no room for a weight-2 path"
        )));
    }
    // rate = M / kept  ⇒  kept = M·q/p
    let scaled = period as u64 * rate.denom();
    if !scaled.is_multiple_of(*rate.numer()) {
        return Ok(SearchOutcome {
            candidates: 0,
            catastrophic: 0,
            ranked: Vec::new(),
        });
    }
    let kept = (scaled / rate.numer()) as usize;
    let bits = 3 * period;
    if kept > bits {
        return Ok(SearchOutcome {
            candidates: 0,
            catastrophic: 0,
            ranked: Vec::new(),
        });
    }
    let total = binomial(bits, kept).unwrap_or(u128::MAX);
    if total > MAX_SEARCH_CANDIDATES {
        return Err(Error::Limit(format!(
            "{total} candidate patterns exceed the search cap {MAX_SEARCH_CANDIDATES}; use a shorter period"
        )));
    }

    // all `bits`-bit masks with `kept` ones, in increasing order
    let mut masks = Vec::with_capacity(total as usize);
    if kept == 0 {
        masks.push(0u64);
    } else {
        let mut m: u64 = (1 << kept) - 1;
        while m < 1 << bits {
            masks.push(m);
            let c = m & m.wrapping_neg();
            let r = m + c;
            m = (((r ^ m) >> 2) / c) | r;
        }
    }

    let probe1 = default_probe_length(code1);
    let probe2 = default_probe_length(code2);
    let screened: Vec<Option<(PcccPunctureSet, u32, Classification)>> = masks
        .par_iter()
        .map(|&mask| {
            let set = PcccPunctureSet::new(
                row(mask, period, 0),
                row(mask, period, period),
                row(mask, period, 2 * period),
            );
            let first = set.first().ok()?;
            let second = set.second().ok()?;
            let class = classify(code1, &first, probe1).min(classify(code2, &second, probe2));
            if class == Classification::Catastrophic {
                return None;
            }
            let d1 = min_weights_w2(code1, &first, n)?;
            let d2 = min_weights_w2(code2, &second, n)?;
            if d1.d_min == 0 {
                return None;
            }
            Some((set, d1.d_min + d2.z_min, class))
        })
        .collect();
    let candidates = masks.len();
    let mut survivors: Vec<(PcccPunctureSet, u32, Classification)> =
        screened.into_iter().flatten().collect();
    let catastrophic = candidates - survivors.len();

    // P(2) is only needed down to the distance of the top-th survivor
    survivors.sort_by_key(|s| std::cmp::Reverse(s.1));
    if let Some(cut) = survivors.get(top.max(1) - 1).map(|s| s.1) {
        survivors.retain(|s| s.1 >= cut);
    }
    let mut ranked = survivors
        .into_par_iter()
        .map(|(set, d_free_eff, classification)| {
            let cfg = PcccConfig::new(code1.clone(), code2.clone(), set.clone(), n)?;
            let p2 = union_bound_term(&w2_slice(&cfg)?, cfg.rate(), ebn0_db);
            Ok(SearchCandidate {
                set,
                d_free_eff,
                p2,
                classification,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ranked.sort_by(rank_order);
    ranked.truncate(top);
    Ok(SearchOutcome {
        candidates,
        catastrophic,
        ranked,
    })
}
