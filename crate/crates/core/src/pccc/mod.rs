//! PCCC-level analysis under the uniform interleaver: combination of the
//! constituent CWEFs, IOWEF slices, union-bound terms and the weight-2
//! approximation `P(2)`.

mod q;

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num_rational::Ratio;
use rayon::prelude::*;

pub use q::{ln_q_function, q_function, q_function_scaled};

use crate::cwef::{cwef_w2_punctured, min_weights_w2, Cwef};
use crate::encoder::RscCode;
use crate::oracle::exact_cwef_dp;
use crate::puncture::{code_rate, PcccPunctureSet, PuncturingPattern};
use crate::{Error, Rate, Result};

/// Binomial coefficient, or `None` when it does not fit in a `u128`.
pub fn binomial(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k as u128 {
        // c·(n-i) is divisible by i+1 after the multiplication
        c = c.checked_mul(n as u128 - i)? / (i + 1);
    }
    Some(c)
}

/// A turbo code: two constituent codes, the three puncturing rows and the
/// interleaver size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcccConfig {
    code1: RscCode,
    code2: RscCode,
    punctures: PcccPunctureSet,
    n: usize,
    rate: Rate,
}

impl PcccConfig {
    pub fn new(
        code1: RscCode,
        code2: RscCode,
        punctures: PcccPunctureSet,
        n: usize,
    ) -> Result<Self> {
        let l = code1.period().max(code2.period());
        if n < l + 1 {
            return Err(Error::Domain(format!(
                "interleaver size {n} must be at least L + 1 = {}",
                l + 1
            )));
        }
        let rate = code_rate(&punctures)?;
        if rate >= Rate::from_integer(1) {
            return Err(Error::Domain(format!("code rate {rate} is not below 1")));
        }
        Ok(Self {
            code1,
            code2,
            punctures,
            n,
            rate,
        })
    }

    /// Both constituents use the same code.
    pub fn symmetric(code: RscCode, punctures: PcccPunctureSet, n: usize) -> Result<Self> {
        Self::new(code.clone(), code, punctures, n)
    }

    pub fn code1(&self) -> &RscCode {
        &self.code1
    }

    pub fn code2(&self) -> &RscCode {
        &self.code2
    }

    pub fn punctures(&self) -> &PcccPunctureSet {
        &self.punctures
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rate(&self) -> Rate {
        self.rate
    }

    pub fn first_pattern(&self) -> PuncturingPattern {
        self.punctures
            .first()
            .expect("rows validated at construction")
    }

    pub fn second_pattern(&self) -> PuncturingPattern {
        self.punctures
            .second()
            .expect("rows validated at construction")
    }

    /// Closed-form weight-2 CWEFs of the two punctured constituents.
    pub fn constituent_cwefs_w2(&self) -> (Cwef, Cwef) {
        (
            cwef_w2_punctured(&self.code1, &self.first_pattern(), self.n),
            cwef_w2_punctured(&self.code2, &self.second_pattern(), self.n),
        )
    }
}

/// PCCC CWEF for one input weight. Coefficients are exact rationals with the
/// common denominator `C(N, w)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcccCwef {
    w: u32,
    n: usize,
    denominator: u128,
    numerators: BTreeMap<(u32, u32), u128>,
}

impl PcccCwef {
    pub fn w(&self) -> u32 {
        self.w
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn denominator(&self) -> u128 {
        self.denominator
    }

    pub fn numerator(&self, u: u32, z: u32) -> u128 {
        self.numerators.get(&(u, z)).copied().unwrap_or(0)
    }

    pub fn coefficient(&self, u: u32, z: u32) -> Ratio<u128> {
        Ratio::new(self.numerator(u, z), self.denominator)
    }

    /// `((u, z), numerator)` in key order.
    pub fn numerators(&self) -> impl Iterator<Item = ((u32, u32), u128)> + '_ {
        self.numerators.iter().map(|(&k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.numerators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.numerators.is_empty()
    }

    pub fn total(&self) -> Ratio<u128> {
        Ratio::new(self.numerators.values().sum(), self.denominator)
    }
}

/// `A(w, U, Z) = A1(w, U, Z) · A2(w, U=1, Z) / C(N, w)`.
pub fn combine_uniform_interleaver(a1: &Cwef, a2: &Cwef, n: usize, w: u32) -> Result<PcccCwef> {
    if a1.w() != w || a2.w() != w {
        return Err(Error::Contract(format!(
            "input weights {} and {} do not match w = {w}",
            a1.w(),
            a2.w()
        )));
    }
    if a1.n() != n || a2.n() != n {
        return Err(Error::Contract(format!(
            "block lengths {} and {} do not match N = {n}",
            a1.n(),
            a2.n()
        )));
    }
    let denominator = binomial(n, w as usize)
        .filter(|&d| d > 0)
        .ok_or(Error::Overflow("binomial coefficient"))?;

    let mut projected: BTreeMap<u32, u128> = BTreeMap::new();
    for ((_, z), c) in a2.terms() {
        let slot = projected.entry(z).or_default();
        *slot = slot
            .checked_add(c)
            .ok_or(Error::Overflow("projected CWEF"))?;
    }
    let projected: Vec<(u32, u128)> = projected.into_iter().collect();

    let (Some(max_u), Some(max_z1), Some(&(max_z2, _))) = (
        a1.terms().map(|((u, _), _)| u).max(),
        a1.terms().map(|((_, z), _)| z).max(),
        projected.last(),
    ) else {
        return Ok(PcccCwef {
            w,
            n,
            denominator,
            numerators: BTreeMap::new(),
        });
    };
    let width = (max_z1 + max_z2) as usize + 1;
    let mut dense = vec![0u128; (max_u as usize + 1) * width];
    for ((u1, z1), c1) in a1.terms() {
        let row = u1 as usize * width + z1 as usize;
        for &(z2, c2) in &projected {
            let prod = c1
                .checked_mul(c2)
                .ok_or(Error::Overflow("PCCC CWEF product"))?;
            let slot = &mut dense[row + z2 as usize];
            *slot = slot
                .checked_add(prod)
                .ok_or(Error::Overflow("PCCC CWEF sum"))?;
        }
    }
    let numerators = dense
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(i, &c)| (((i / width) as u32, (i % width) as u32), c))
        .collect();
    Ok(PcccCwef {
        w,
        n,
        denominator,
        numerators,
    })
}

/// IOWEF coefficients `B_{w,d}` for one input weight, over the common
/// denominator `C(N, w)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IowefSlice {
    w: u32,
    n: usize,
    denominator: u128,
    numerators: BTreeMap<u32, u128>,
}

impl IowefSlice {
    pub fn w(&self) -> u32 {
        self.w
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn denominator(&self) -> u128 {
        self.denominator
    }

    pub fn numerator(&self, d: u32) -> u128 {
        self.numerators.get(&d).copied().unwrap_or(0)
    }

    pub fn coefficient(&self, d: u32) -> Ratio<u128> {
        Ratio::new(self.numerator(d), self.denominator)
    }

    /// `(d, numerator)` in increasing `d`.
    pub fn numerators(&self) -> impl Iterator<Item = (u32, u128)> + '_ {
        self.numerators.iter().map(|(&k, &v)| (k, v))
    }

    pub fn min_distance(&self) -> Option<u32> {
        self.numerators.keys().next().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.numerators.is_empty()
    }

    /// Drops every `d > d_max`; returns whether anything was dropped.
    pub fn truncate(&mut self, d_max: u32) -> bool {
        let before = self.numerators.len();
        self.numerators.retain(|&d, _| d <= d_max);
        before != self.numerators.len()
    }
}

/// Sums `A_{w,u,z}` along the anti-diagonals `u + z = d`.
pub fn iowef_slice(a: &PcccCwef) -> Result<IowefSlice> {
    let mut numerators: BTreeMap<u32, u128> = BTreeMap::new();
    for ((u, z), c) in a.numerators() {
        let slot = numerators.entry(u + z).or_default();
        *slot = slot.checked_add(c).ok_or(Error::Overflow("IOWEF slice"))?;
    }
    Ok(IowefSlice {
        w: a.w,
        n: a.n,
        denominator: a.denominator,
        numerators,
    })
}

/// Linear `E_b/N_0` from decibels.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Compensated (Neumaier) sum.
fn neumaier_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// `P(w) = Σ_d (w/N) B_{w,d} Q(√(2 R d E_b/N_0))` with `N` taken from the
/// slice.
pub fn union_bound_term(b: &IowefSlice, rate: Rate, ebn0_db: f64) -> f64 {
    let snr = 2.0 * (*rate.numer() as f64 / *rate.denom() as f64) * db_to_linear(ebn0_db);
    let scale = f64::from(b.w) / b.n as f64;
    let den = b.denominator as f64;
    neumaier_sum(
        b.numerators()
            .map(|(d, num)| scale * (num as f64 / den) * q_function((snr * f64::from(d)).sqrt())),
    )
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundPoint {
    pub ebn0_db: f64,
    /// Bound clamped to at most 1.
    pub value: f64,
    /// Bound before clamping.
    pub raw: f64,
    pub clamped: bool,
}

impl BoundPoint {
    pub fn new(ebn0_db: f64, raw: f64) -> Self {
        Self {
            ebn0_db,
            value: raw.min(1.0),
            raw,
            clamped: raw > 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundCurve {
    pub label: String,
    pub points: Vec<BoundPoint>,
}

impl BoundCurve {
    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.value).collect()
    }

    /// CSV with header `ebn0_db,value,clamped,label`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("ebn0_db,value,clamped,label\n");
        for p in &self.points {
            let _ = writeln!(
                out,
                "{},{:.11e},{},{}",
                p.ebn0_db,
                p.value,
                u8::from(p.clamped),
                self.label
            );
        }
        out
    }
}

impl fmt::Display for BoundCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_csv())
    }
}

fn evaluate(label: String, slices: &[IowefSlice], rate: Rate, ebn0_db: &[f64]) -> BoundCurve {
    let points = ebn0_db
        .par_iter()
        .map(|&db| {
            BoundPoint::new(
                db,
                neumaier_sum(slices.iter().map(|s| union_bound_term(s, rate, db))),
            )
        })
        .collect();
    BoundCurve { label, points }
}

/// Combined weight-2 IOWEF slice from the closed-form constituent CWEFs.
pub fn w2_slice(config: &PcccConfig) -> Result<IowefSlice> {
    let (a1, a2) = config.constituent_cwefs_w2();
    iowef_slice(&combine_uniform_interleaver(&a1, &a2, config.n, 2)?)
}

/// `P(2)` at each SNR point.
pub fn p2_approximation(config: &PcccConfig, ebn0_db: &[f64]) -> Result<BoundCurve> {
    let slice = w2_slice(config)?;
    Ok(evaluate(
        "P(2)".into(),
        std::slice::from_ref(&slice),
        config.rate,
        ebn0_db,
    ))
}

/// Union bound truncated to input weights `2 … w_max` and total weights
/// `d <= d_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedBound {
    pub curve: BoundCurve,
    /// `P(w)` curves for `w = 2 … w_max`.
    pub per_weight: Vec<BoundCurve>,
    /// Whether any term with `d > d_max` was dropped.
    pub truncated: bool,
}

pub fn truncated_union_bound(
    config: &PcccConfig,
    w_max: u32,
    d_max: u32,
    ebn0_db: &[f64],
) -> Result<TruncatedBound> {
    if w_max < 2 {
        return Err(Error::Domain(format!("w_max {w_max} must be at least 2")));
    }
    let dfree = free_effective_distance(config)?;
    if d_max < dfree.d_free_eff {
        return Err(Error::Domain(format!(
            "d_max {d_max} is below the free effective distance {}; the bound would be empty",
            dfree.d_free_eff
        )));
    }
    let (dp1, dp2) = rayon::join(
        || {
            exact_cwef_dp(
                &config.code1,
                &config.first_pattern(),
                config.n,
                w_max,
                d_max,
            )
        },
        || {
            exact_cwef_dp(
                &config.code2,
                &config.second_pattern(),
                config.n,
                w_max,
                d_max,
            )
        },
    );
    let (dp1, dp2) = (dp1?, dp2?);
    let mut truncated = dp1.pruned || dp2.pruned;
    let mut slices = Vec::new();
    for w in 2..=w_max {
        let mut slice = iowef_slice(&combine_uniform_interleaver(
            dp1.weight(w),
            dp2.weight(w),
            config.n,
            w,
        )?)?;
        truncated |= slice.truncate(d_max);
        slices.push(slice);
    }
    let per_weight = slices
        .iter()
        .map(|s| {
            evaluate(
                format!("P({})", s.w),
                std::slice::from_ref(s),
                config.rate,
                ebn0_db,
            )
        })
        .collect();
    let curve = evaluate(
        format!("P_b^u(w<={w_max},d<={d_max})"),
        &slices,
        config.rate,
        ebn0_db,
    );
    Ok(TruncatedBound {
        curve,
        per_weight,
        truncated,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EffectiveDistance {
    /// `d_min` of the first constituent plus `z_min` of the second; 0 when
    /// the first constituent has a weight-0 codeword.
    pub d_free_eff: u32,
    pub d_min1: u32,
    pub z_min2: u32,
    pub catastrophic: bool,
}

/// Free effective distance from the closed-form weight-2 enumerators.
pub fn free_effective_distance(config: &PcccConfig) -> Result<EffectiveDistance> {
    effective_distance(&config.code1, &config.code2, &config.punctures, config.n)
}

/// [`free_effective_distance`] for rows that need not form a valid
/// configuration, e.g. with every bit punctured.
pub fn effective_distance(
    code1: &RscCode,
    code2: &RscCode,
    punctures: &PcccPunctureSet,
    n: usize,
) -> Result<EffectiveDistance> {
    let d_min1 = min_weights_w2(code1, &punctures.first()?, n)
        .ok_or(Error::EmptyEnumerator)?
        .d_min;
    let z_min2 = min_weights_w2(code2, &punctures.second()?, n)
        .ok_or(Error::EmptyEnumerator)?
        .z_min;
    let catastrophic = d_min1 == 0;
    let d_free_eff = if catastrophic { 0 } else { d_min1 + z_min2 };
    Ok(EffectiveDistance {
        d_free_eff,
        d_min1,
        z_min2,
        catastrophic,
    })
}
